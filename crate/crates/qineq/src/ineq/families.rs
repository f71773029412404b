//! The generic J_q inequality families: Young-type products, Cassels and
//! bounded-ratio reverse Cauchy-Schwarz, the Schwarz corollary, Jensen
//! power inequalities, and the Lah-Ribaric bound.
//!
//! All of these range over the three J_q kinds (never the interval
//! difference I_q(.; a, b)).

use crate::expr::EvalError;
use crate::qcore::{product, ConjugatePair, HypothesisParams, Interval, QParam, RealFn};

use super::{
    audit_bracket, finish, jq, kind_nodes, positivity_witness, range_with_nodes, resolve_bound,
    side_ge, side_le,
    Abort, Audit, CheckOptions, InequalityId, InequalityVerdict, JKind, Sides,
};

// --------------------------------------------------------- local integrands

fn finite(v: f64, x: f64) -> Result<f64, EvalError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(EvalError::NonFinite { point: x })
    }
}

/// |f(x)|^p
fn powabs<'a>(f: &'a dyn RealFn, p: f64) -> impl RealFn + 'a {
    move |x: f64| finite(f.eval(x)?.abs().powf(p), x)
}

/// |f(x)|^pf * |g(x)|^pg
fn powprod<'a>(f: &'a dyn RealFn, pf: f64, g: &'a dyn RealFn, pg: f64) -> impl RealFn + 'a {
    move |x: f64| finite(f.eval(x)?.abs().powf(pf) * g.eval(x)?.abs().powf(pg), x)
}

fn absprod<'a>(f: &'a dyn RealFn, g: &'a dyn RealFn) -> impl RealFn + 'a {
    move |x: f64| Ok((f.eval(x)? * g.eval(x)?).abs())
}

fn ratio<'a>(num: &'a dyn RealFn, den: &'a dyn RealFn) -> impl RealFn + 'a {
    move |x: f64| finite(num.eval(x)? / den.eval(x)?, x)
}

fn audit_positive(
    audit: &mut Audit,
    name: &str,
    f: &dyn RealFn,
    domain: Interval,
    grid: usize,
) -> Result<(), Abort> {
    match positivity_witness(f, domain, grid)? {
        None => audit.satisfied(format!("{name} > 0 (sampled, grid {grid})")),
        Some(x) => audit.violated(
            format!("{name} > 0 (sampled, grid {grid})"),
            format!("{name}({x}) <= 0"),
        ),
    }
    Ok(())
}

// ------------------------------------------------------------ Young family

pub fn check_young_family(
    id: InequalityId,
    f: &dyn RealFn,
    g: &dyn RealFn,
    jk: JKind,
    q: QParam,
    pair: ConjugatePair,
    opts: &CheckOptions,
) -> InequalityVerdict {
    let mut audit = Audit::new();
    let (al, be) = (pair.alpha, pair.beta);
    audit.satisfied(format!("alpha, beta > 1 conjugate (alpha={al}, beta={be})"));
    let pol = &opts.policy;
    let sides: Sides = (|| {
        let j = |h: &dyn RealFn| jq(h, jk, q, pol);
        let (label, lhs, rhs): (&str, f64, f64) = match id {
            InequalityId::Young61I => (
                "J(|f|^a)/a + J(|g|^b)/b >= J(|f|)J(|g|)/w",
                j(&powabs(f, al))? / al + j(&powabs(g, be))? / be,
                j(&powabs(f, 1.0))? * j(&powabs(g, 1.0))? / jk.width(q),
            ),
            InequalityId::Young61Ii => (
                "J(|f|^a)J(|g|^a)/a + J(|f|^b)J(|g|^b)/b >= J(|fg|)^2",
                j(&powabs(f, al))? * j(&powabs(g, al))? / al
                    + j(&powabs(f, be))? * j(&powabs(g, be))? / be,
                j(&absprod(f, g))?.powi(2),
            ),
            InequalityId::Young61Iii => (
                "J(|f|^a)J(|g|^b)/a + J(|f|^b)J(|g|^a)/b >= J(|f||g|^(a-1))J(|f||g|^(b-1))",
                j(&powabs(f, al))? * j(&powabs(g, be))? / al
                    + j(&powabs(f, be))? * j(&powabs(g, al))? / be,
                j(&powprod(f, 1.0, g, al - 1.0))? * j(&powprod(f, 1.0, g, be - 1.0))?,
            ),
            InequalityId::Young61Iv => (
                "J(|f|^a)J(|g|^b) >= J(|fg|)J(|f|^(a-1)|g|^(b-1))",
                j(&powabs(f, al))? * j(&powabs(g, be))?,
                j(&absprod(f, g))? * j(&powprod(f, al - 1.0, g, be - 1.0))?,
            ),
            InequalityId::Young62I => (
                "J(|f|^a)J(|g|^2)/a + J(|f|^2)J(|g|^b)/b >= J(|fg|)J(|f|^(2/b)|g|^(2/a))",
                j(&powabs(f, al))? * j(&powabs(g, 2.0))? / al
                    + j(&powabs(f, 2.0))? * j(&powabs(g, be))? / be,
                j(&absprod(f, g))? * j(&powprod(f, 2.0 / be, g, 2.0 / al))?,
            ),
            InequalityId::Young62Ii => (
                "J(|f|^2)J(|g|^b)/a + J(|f|^a)J(|g|^2)/b >= J(|f|^(2/a)|g|^(2/b))J(|f|^(a-1)|g|^(b-1))",
                j(&powabs(f, 2.0))? * j(&powabs(g, be))? / al
                    + j(&powabs(f, al))? * j(&powabs(g, 2.0))? / be,
                j(&powprod(f, 2.0 / al, g, 2.0 / be))?
                    * j(&powprod(f, al - 1.0, g, be - 1.0))?,
            ),
            InequalityId::Young62Iii => {
                let mix = move |x: f64| {
                    let gv = g.eval(x)?.abs();
                    finite(gv.powf(al) / al + gv.powf(be) / be, x)
                };
                (
                    "J(|f|^2)J(|g|^a/a + |g|^b/b) >= J(|f|^(2/a)|g|)J(|f|^(2/b)|g|)",
                    j(&powabs(f, 2.0))? * j(&mix)?,
                    j(&powprod(f, 2.0 / al, g, 1.0))? * j(&powprod(f, 2.0 / be, g, 1.0))?,
                )
            }
            other => panic!("not a Young-family id: {}", other.name()),
        };
        Ok(vec![side_ge(label, lhs, rhs)])
    })();
    finish(
        id,
        jk.describe(),
        format!("q={}, alpha={al}, beta={be}", q.get()),
        audit,
        sides,
    )
}

// ----------------------------------------------- Cassels / bounded / Schwarz

pub fn check_ratio_family(
    id: InequalityId,
    f: &dyn RealFn,
    g: Option<&dyn RealFn>,
    jk: JKind,
    q: QParam,
    params: &HypothesisParams,
    opts: &CheckOptions,
) -> InequalityVerdict {
    let mut audit = Audit::new();
    let grid = opts.grid;
    let pol = &opts.policy;
    let domain = jk.domain(q);
    let nodes = kind_nodes(jk, q);
    let sides: Sides = (|| {
        audit_positive(&mut audit, "f", f, domain, grid)?;
        // the reverse Cauchy-Schwarz constant per variant, from the ratio
        // bounds m <= f/g <= M (Cassels) or from cd, CD (bounded form)
        let (lo, hi) = match id {
            InequalityId::Cassels63I | InequalityId::Cassels63Ii | InequalityId::Cassels63Iii => {
                let g = g.expect("Cassels needs g");
                audit_positive(&mut audit, "g", g, domain, grid)?;
                let r = ratio(f, g);
                let range = range_with_nodes(&r, domain, grid, &nodes)?;
                let m = resolve_bound(&mut audit, "m", params.m, grid, || Ok(range.0))?;
                let big_m = resolve_bound(&mut audit, "M", params.big_m, grid, || Ok(range.1))?;
                audit.require("0 < m", m.value > 0.0, format!("m = {}", m.value));
                audit_bracket(&mut audit, "m <= f/g <= M", &r, domain, m, big_m, grid, &nodes)?;
                (m.value, big_m.value)
            }
            InequalityId::Bounded64I | InequalityId::Bounded64Ii | InequalityId::Bounded64Iii => {
                let g = g.expect("bounded form needs g");
                audit_positive(&mut audit, "g", g, domain, grid)?;
                let fr = range_with_nodes(f, domain, grid, &nodes)?;
                let gr = range_with_nodes(g, domain, grid, &nodes)?;
                let c = resolve_bound(&mut audit, "c", params.c, grid, || Ok(fr.0))?;
                let big_c = resolve_bound(&mut audit, "C", params.big_c, grid, || Ok(fr.1))?;
                let d = resolve_bound(&mut audit, "d", params.d, grid, || Ok(gr.0))?;
                let big_d = resolve_bound(&mut audit, "D", params.big_d, grid, || Ok(gr.1))?;
                audit.require("0 < c", c.value > 0.0, format!("c = {}", c.value));
                audit.require("0 < d", d.value > 0.0, format!("d = {}", d.value));
                audit_bracket(&mut audit, "c <= f <= C", f, domain, c, big_c, grid, &nodes)?;
                audit_bracket(&mut audit, "d <= g <= D", g, domain, d, big_d, grid, &nodes)?;
                (c.value * d.value, big_c.value * big_d.value)
            }
            InequalityId::SchwarzCor65 => {
                let fr = range_with_nodes(f, domain, grid, &nodes)?;
                let c = resolve_bound(&mut audit, "c", params.c, grid, || Ok(fr.0))?;
                let big_c = resolve_bound(&mut audit, "C", params.big_c, grid, || Ok(fr.1))?;
                audit.require("0 < c", c.value > 0.0, format!("c = {}", c.value));
                audit_bracket(&mut audit, "c <= f <= C", f, domain, c, big_c, grid, &nodes)?;
                (c.value, big_c.value)
            }
            other => panic!("not a ratio-family id: {}", other.name()),
        };

        if matches!(id, InequalityId::SchwarzCor65) {
            let jf2 = jq(&powabs(f, 2.0), jk, q, pol)?;
            let jf = jq(f, jk, q, pol)?;
            let rhs = (lo + hi).powi(2) / (4.0 * lo * hi * jk.width(q)) * jf * jf;
            return Ok(vec![side_le("J(f^2) <= (c+C)^2/(4cC w) J(f)^2", jf2, rhs)]);
        }

        let g = g.expect("checked above");
        let jf2 = jq(&powabs(f, 2.0), jk, q, pol)?;
        let jg2 = jq(&powabs(g, 2.0), jk, q, pol)?;
        let jfg = jq(&product(f, g), jk, q, pol)?;
        Ok(match id {
            InequalityId::Cassels63I | InequalityId::Bounded64I => {
                let c = (lo + hi).powi(2) / (4.0 * lo * hi);
                vec![
                    side_le("0 <= J(f^2)J(g^2)", 0.0, jf2 * jg2),
                    side_le("J(f^2)J(g^2) <= K J(fg)^2", jf2 * jg2, c * jfg * jfg),
                ]
            }
            InequalityId::Cassels63Ii | InequalityId::Bounded64Ii => {
                let c = (hi.sqrt() - lo.sqrt()).powi(2) / (2.0 * (lo * hi).sqrt());
                let mid = (jf2 * jg2).sqrt() - jfg;
                vec![
                    side_le("0 <= sqrt(J(f^2)J(g^2)) - J(fg)", 0.0, mid),
                    side_le("sqrt(J(f^2)J(g^2)) - J(fg) <= K J(fg)", mid, c * jfg),
                ]
            }
            _ => {
                let c = (hi - lo).powi(2) / (4.0 * lo * hi);
                let mid = jf2 * jg2 - jfg * jfg;
                vec![
                    side_le("0 <= J(f^2)J(g^2) - J(fg)^2", 0.0, mid),
                    side_le("J(f^2)J(g^2) - J(fg)^2 <= K J(fg)^2", mid, c * jfg * jfg),
                ]
            }
        })
    })();
    finish(id, jk.describe(), format!("q={}", q.get()), audit, sides)
}

// ------------------------------------------------------------- Jensen power

pub fn check_jensen_power(
    id: InequalityId,
    f: &dyn RealFn,
    g: Option<&dyn RealFn>,
    jk: JKind,
    q: QParam,
    p: f64,
    opts: &CheckOptions,
) -> InequalityVerdict {
    let mut audit = Audit::new();
    let domain = jk.domain(q);
    let pol = &opts.policy;
    // t^p is convex outside (0,1), concave inside; the inequality flips
    let convex = !(0.0 < p && p < 1.0);
    let sides: Sides = (|| {
        audit.require("p != 0", p != 0.0, "p = 0".to_string());
        if p == 0.0 {
            return Err(Abort("p = 0 leaves the inequality undefined".into()));
        }
        audit_positive(&mut audit, "f", f, domain, opts.grid)?;
        let (label, lhs, rhs): (String, f64, f64) = match id {
            InequalityId::JensenPower66 => {
                let g = g.expect("theorem needs g");
                audit_positive(&mut audit, "g", g, domain, opts.grid)?;
                let jfg = jq(&product(f, g), jk, q, pol)?;
                let jf2 = jq(&powabs(f, 2.0), jk, q, pol)?;
                let jmix = jq(&powprod(f, 2.0 - p, g, p), jk, q, pol)?;
                let cmp = if convex { "<=" } else { ">=" };
                (
                    format!("J(fg)^p {cmp} J(f^2)^(p-1) J(f^(2-p)g^p)"),
                    jfg.powf(p),
                    jf2.powf(p - 1.0) * jmix,
                )
            }
            InequalityId::PowerMeanCor67 => {
                let jf = jq(f, jk, q, pol)?;
                let jfp = jq(&powabs(f, p), jk, q, pol)?;
                let cmp = if convex { "<=" } else { ">=" };
                (
                    format!("J(f)^p {cmp} w^(p-1) J(f^p)"),
                    jf.powf(p),
                    jk.width(q).powf(p - 1.0) * jfp,
                )
            }
            other => panic!("not a Jensen-power id: {}", other.name()),
        };
        if !lhs.is_finite() || !rhs.is_finite() {
            return Err(Abort(format!("non-finite side: lhs = {lhs}, rhs = {rhs}")));
        }
        Ok(vec![if convex {
            side_le(&label, lhs, rhs)
        } else {
            side_ge(&label, lhs, rhs)
        }])
    })();
    finish(id, jk.describe(), format!("q={}, p={p}", q.get()), audit, sides)
}

// -------------------------------------------------------------- Lah-Ribaric

/// Coefficients of the reverse-Jensen chord bound for t^p on [m, M]:
/// t^p <= rhs_coef * t - mid_coef, so
/// J(f^(2-p)g^p) + mid_coef * J(f^2) <= rhs_coef * J(fg) for p outside (0,1).
/// At m = M the removable singularity is replaced by the tangent limits.
fn chord_coefficients(m: f64, big_m: f64, p: f64) -> (f64, f64) {
    if (big_m - m).abs() <= 1e-12 {
        ((p - 1.0) * m.powf(p), p * m.powf(p - 1.0))
    } else if p == 2.0 {
        (m * big_m, m + big_m)
    } else {
        (
            m * big_m * (big_m.powf(p - 1.0) - m.powf(p - 1.0)) / (big_m - m),
            (big_m.powf(p) - m.powf(p)) / (big_m - m),
        )
    }
}

pub fn check_lah_ribaric(
    id: InequalityId,
    f: &dyn RealFn,
    g: &dyn RealFn,
    jk: JKind,
    q: QParam,
    p: f64,
    params: &HypothesisParams,
    opts: &CheckOptions,
) -> InequalityVerdict {
    let mut audit = Audit::new();
    let domain = jk.domain(q);
    let grid = opts.grid;
    let pol = &opts.policy;
    let convex = !(0.0 < p && p < 1.0);
    let sides: Sides = (|| {
        audit.require("p != 0", p != 0.0, "p = 0".to_string());
        if p == 0.0 {
            return Err(Abort("p = 0 leaves the inequality undefined".into()));
        }
        audit_positive(&mut audit, "f", f, domain, grid)?;
        audit_positive(&mut audit, "g", g, domain, grid)?;
        let nodes = kind_nodes(jk, q);
        let r = ratio(g, f);
        let range = range_with_nodes(&r, domain, grid, &nodes)?;
        let m = resolve_bound(&mut audit, "m", params.m, grid, || Ok(range.0))?;
        let big_m = resolve_bound(&mut audit, "M", params.big_m, grid, || Ok(range.1))?;
        audit.require("0 < m", m.value > 0.0, format!("m = {}", m.value));
        audit_bracket(&mut audit, "m <= g/f <= M", &r, domain, m, big_m, grid, &nodes)?;
        if m.value <= 0.0 {
            return Err(Abort(format!("ratio lower bound m = {} not positive", m.value)));
        }

        let (mid_coef, rhs_coef) = chord_coefficients(m.value, big_m.value, p);
        let jmix = jq(&powprod(f, 2.0 - p, g, p), jk, q, pol)?;
        let jf2 = jq(&powabs(f, 2.0), jk, q, pol)?;
        let jfg = jq(&product(f, g), jk, q, pol)?;
        let lhs = jmix + mid_coef * jf2;
        let rhs = rhs_coef * jfg;
        let label = if convex {
            "J(f^(2-p)g^p) + mM(M^(p-1)-m^(p-1))/(M-m) J(f^2) <= (M^p-m^p)/(M-m) J(fg)"
        } else {
            "J(f^(2-p)g^p) + mM(M^(p-1)-m^(p-1))/(M-m) J(f^2) >= (M^p-m^p)/(M-m) J(fg)"
        };
        Ok(vec![if convex {
            side_le(label, lhs, rhs)
        } else {
            side_ge(label, lhs, rhs)
        }])
    })();
    let mut v = finish(id, jk.describe(), format!("q={}, p={p}", q.get()), audit, sides);
    if v.note.is_none() {
        v.note = Some("middle term uses J(f^2), the chord-bound weight sum".to_string());
    }
    v
}
