//! Chebyshev-type inequalities: the J_q form for q-monotone pairs, the
//! interval-difference functional whose sign changes at q = 1/2 for the
//! x^3 / x^4 pair, and the corrected bounds that restore validity for
//! I_q(.; a, b).

use crate::integrate::{IntegrateError, TruncationPolicy};
use crate::qcore::{
    is_q_monotone, product, q_bracket, Direction, HypothesisParams, Interval, MonotoneVerdict,
    QParam, RealFn,
};

use super::{
    finish, grid_slope_range, iq_ab, jq, resolve_bound, side_ge, Abort, Audit, CheckOptions,
    HypStatus, InequalityId, InequalityVerdict, JKind, Sides,
};

fn monotone_pair_audit(
    audit: &mut Audit,
    f: &dyn RealFn,
    g: &dyn RealFn,
    iv: Interval,
    q: QParam,
    grid: usize,
) -> Result<(), Abort> {
    for dir in [Direction::Increasing, Direction::Decreasing] {
        let vf = is_q_monotone(f, iv, q, dir, grid);
        let vg = is_q_monotone(g, iv, q, dir, grid);
        match (&vf, &vg) {
            (MonotoneVerdict::Undecided { point, reason }, _)
            | (_, MonotoneVerdict::Undecided { point, reason }) => {
                return Err(Abort(format!(
                    "q-monotonicity undecided at x = {point}: {reason}"
                )));
            }
            (MonotoneVerdict::Holds { .. }, MonotoneVerdict::Holds { .. }) => {
                audit.push(
                    format!("f, g both q-{dir:?} on [{}, {}] (grid {grid})", iv.a, iv.b)
                        .to_lowercase(),
                    HypStatus::Satisfied,
                );
                return Ok(());
            }
            _ => {}
        }
    }
    // neither direction fits both: report witnesses from the increasing try
    let vf = is_q_monotone(f, iv, q, Direction::Increasing, grid);
    let vg = is_q_monotone(g, iv, q, Direction::Increasing, grid);
    let witness = |v: &MonotoneVerdict| match v {
        MonotoneVerdict::Fails { witness, .. } => format!("x = {witness}"),
        _ => "-".to_string(),
    };
    audit.violated(
        "f, g both q-increasing or both q-decreasing",
        format!("f: {}, g: {}", witness(&vf), witness(&vg)),
    );
    Ok(())
}

/// Theorem-form Chebyshev: J_q(fg) >= J_q(f) J_q(g) / (b - a_J) for pairs
/// that are q-monotone in the same direction. JacksonAb is excluded by the
/// dispatch layer.
pub fn check_chebyshev(
    f: &dyn RealFn,
    g: &dyn RealFn,
    jk: JKind,
    q: QParam,
    opts: &CheckOptions,
) -> InequalityVerdict {
    let mut audit = Audit::new();
    let sides: Sides = (|| {
        monotone_pair_audit(&mut audit, f, g, jk.domain(q), q, opts.grid)?;
        let fg = product(f, g);
        let jfg = jq(&fg, jk, q, &opts.policy)?;
        let jf = jq(f, jk, q, &opts.policy)?;
        let jg = jq(g, jk, q, &opts.policy)?;
        Ok(vec![side_ge(
            "J(fg) >= J(f)J(g)/width",
            jfg,
            jf * jg / jk.width(q),
        )])
    })();
    finish(
        InequalityId::Chebyshev31,
        jk.describe(),
        format!("q={}", q.get()),
        audit,
        sides,
    )
}

/// The raw difference side of the interval form:
/// I_q(fg; a, b) - I_q(f; a, b) I_q(g; a, b) / (b - a).
pub fn chebyshev_ab_difference(
    f: &dyn RealFn,
    g: &dyn RealFn,
    iv: Interval,
    q: QParam,
    policy: &TruncationPolicy,
) -> Result<f64, IntegrateError> {
    let fg = product(f, g);
    let to_err = |a: Abort| IntegrateError::Domain { point: f64::NAN, reason: a.0 };
    let ifg = iq_ab(&fg, iv, q, policy).map_err(to_err)?;
    let i_f = iq_ab(f, iv, q, policy).map_err(to_err)?;
    let i_g = iq_ab(g, iv, q, policy).map_err(to_err)?;
    Ok(ifg - i_f * i_g / iv.width())
}

/// The two corrected Chebyshev bounds for I_q(.; a, b): (a) subtracts
/// ab(b-a) L_f L_g / [3]_q, (b) subtracts ab (f(b)-f(0))(g(b)-g(0)) / (b-a).
/// Slope constants are estimated by difference quotients on [0,b] when not
/// supplied.
pub fn check_chebyshev_ab_bounds(
    f: &dyn RealFn,
    g: &dyn RealFn,
    iv: Interval,
    q: QParam,
    params: &HypothesisParams,
    opts: &CheckOptions,
) -> (InequalityVerdict, InequalityVerdict) {
    let mut audit = Audit::new();
    let zero_b = Interval::new(0.0, iv.b).expect("[0,b]");

    struct Common {
        rhs_main: f64,
        ifg: f64,
        corr_a: f64,
        corr_b: f64,
    }

    let common: Result<Common, Abort> = (|| {
        let (lf_est, big_lf_est) = grid_slope_range(f, zero_b, opts.grid)?;
        let (lg_est, big_lg_est) = grid_slope_range(g, zero_b, opts.grid)?;
        let l_f = resolve_bound(&mut audit, "l_f", params.l_f, opts.grid, || Ok(lf_est))?;
        let big_l_f =
            resolve_bound(&mut audit, "L_f", params.big_l_f, opts.grid, || Ok(big_lf_est))?;
        let l_g = resolve_bound(&mut audit, "l_g", params.l_g, opts.grid, || Ok(lg_est))?;
        let big_l_g =
            resolve_bound(&mut audit, "L_g", params.big_l_g, opts.grid, || Ok(big_lg_est))?;

        audit.require(
            "f increasing on [0,b] with 0 < l_f <= slope <= L_f",
            l_f.value > 0.0 && lf_est >= l_f.value - 1e-12 && big_lf_est <= big_l_f.value + 1e-12,
            format!("sampled slope range [{lf_est}, {big_lf_est}]"),
        );
        audit.require(
            "g increasing on [0,b] with 0 < l_g <= slope <= L_g",
            l_g.value > 0.0 && lg_est >= l_g.value - 1e-12 && big_lg_est <= big_l_g.value + 1e-12,
            format!("sampled slope range [{lg_est}, {big_lg_est}]"),
        );
        let ratio = (iv.a * iv.a) / (iv.b * iv.b);
        audit.require(
            "a^2/b^2 <= l_f/L_f",
            ratio <= l_f.value / big_l_f.value + 1e-12,
            format!("{ratio} > {}", l_f.value / big_l_f.value),
        );
        audit.require(
            "a^2/b^2 <= l_g/L_g",
            ratio <= l_g.value / big_l_g.value + 1e-12,
            format!("{ratio} > {}", l_g.value / big_l_g.value),
        );

        let fg = product(f, g);
        let ifg = iq_ab(&fg, iv, q, &opts.policy)?;
        let i_f = iq_ab(f, iv, q, &opts.policy)?;
        let i_g = iq_ab(g, iv, q, &opts.policy)?;
        let rhs_main = i_f * i_g / iv.width();
        let corr_a =
            iv.a * iv.b * iv.width() / q_bracket(3, q) * big_l_f.value * big_l_g.value;
        let corr_b = iv.a * iv.b / iv.width()
            * (f.eval(iv.b)? - f.eval(0.0)?)
            * (g.eval(iv.b)? - g.eval(0.0)?);
        Ok(Common { rhs_main, ifg, corr_a, corr_b })
    })();

    let kind = format!("jackson-ab(a={}, b={})", iv.a, iv.b);
    let inputs = format!("q={}", q.get());
    match common {
        Err(abort) => {
            let mk = |id| {
                finish(id, kind.clone(), inputs.clone(), Audit::new(), Err(Abort(abort.0.clone())))
            };
            (mk(InequalityId::ChebyshevAbA), mk(InequalityId::ChebyshevAbB))
        }
        Ok(c) => {
            let hyps = audit.into_vec();
            let rebuild = || {
                let mut a = Audit::new();
                for h in &hyps {
                    a.push(h.name.clone(), h.status.clone());
                }
                a
            };
            let va = finish(
                InequalityId::ChebyshevAbA,
                kind.clone(),
                inputs.clone(),
                rebuild(),
                Ok(vec![side_ge(
                    "I(fg) >= I(f)I(g)/(b-a) - ab(b-a)L_fL_g/[3]_q",
                    c.ifg,
                    c.rhs_main - c.corr_a,
                )]),
            );
            let vb = finish(
                InequalityId::ChebyshevAbB,
                kind,
                inputs,
                rebuild(),
                Ok(vec![side_ge(
                    "I(fg) >= I(f)I(g)/(b-a) - ab(f(b)-f(0))(g(b)-g(0))/(b-a)",
                    c.ifg,
                    c.rhs_main - c.corr_b,
                )]),
            );
            (va, vb)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ineq::Verdict;
    use crate::qcore::Bound;

    fn q(v: f64) -> QParam {
        QParam::new(v).unwrap()
    }

    fn ident(x: f64) -> crate::expr::EvalResult {
        Ok(x)
    }

    fn cube(x: f64) -> crate::expr::EvalResult {
        Ok(x.powi(3))
    }

    fn quart(x: f64) -> crate::expr::EvalResult {
        Ok(x.powi(4))
    }

    #[test]
    fn chebyshev_monomials_jackson0() {
        let v = check_chebyshev(
            &ident,
            &ident,
            JKind::Jackson0 { b: 1.0 },
            q(0.5),
            &CheckOptions::default(),
        );
        assert_eq!(v.verdict, Verdict::Holds);
        assert!((v.lhs - 1.0 / 1.75).abs() < 1e-12);
        assert!((v.rhs - (1.0f64 / 1.5).powi(2)).abs() < 1e-12);
        assert!((v.slack - 0.12698412698412698).abs() < 1e-10);
    }

    #[test]
    fn chebyshev_constant_equality() {
        let one = |_x: f64| Ok(1.0);
        let v = check_chebyshev(
            &one,
            &one,
            JKind::RiemannType { a: 1.0, b: 2.0 },
            q(0.7),
            &CheckOptions::default(),
        );
        assert_eq!(v.verdict, Verdict::Holds);
        assert!(v.slack.abs() <= v.tolerance);
    }

    #[test]
    fn ab_difference_sign_changes_at_half() {
        let iv = Interval::new(1.0, 2.0).unwrap();
        let pol = TruncationPolicy::default();
        let closed = |qv: f64| {
            255.0 * (1.0 - qv) / (1.0 - qv.powi(8))
                - 465.0 * (1.0 - qv) * (1.0 - qv) / ((1.0 - qv.powi(4)) * (1.0 - qv.powi(5)))
        };
        let hi = chebyshev_ab_difference(&cube, &quart, iv, q(0.75), &pol).unwrap();
        assert!(hi > 0.0);
        assert!((hi - closed(0.75)).abs() <= 1e-10 * closed(0.75).abs());
        let lo = chebyshev_ab_difference(&cube, &quart, iv, q(0.25), &pol).unwrap();
        assert!(lo < 0.0);
        assert!((lo - closed(0.25)).abs() <= 1e-10 * closed(0.25).abs());
    }

    #[test]
    fn ab_difference_constants_vanish() {
        let one = |_x: f64| Ok(1.0);
        let iv = Interval::new(1.0, 2.0).unwrap();
        let d = chebyshev_ab_difference(&one, &one, iv, q(0.4), &TruncationPolicy::default())
            .unwrap();
        assert!(d.abs() < 1e-12);
    }

    #[test]
    fn ab_bounds_hold_where_raw_difference_fails() {
        let iv = Interval::new(1.0, 2.0).unwrap();
        let params = HypothesisParams {
            l_f: Some(Bound::supplied(1.0)),
            big_l_f: Some(Bound::supplied(1.0)),
            l_g: Some(Bound::supplied(1.0)),
            big_l_g: Some(Bound::supplied(1.0)),
            ..HypothesisParams::default()
        };
        let (va, vb) =
            check_chebyshev_ab_bounds(&ident, &ident, iv, q(0.25), &params, &CheckOptions::default());
        assert_eq!(va.verdict, Verdict::Holds);
        assert_eq!(vb.verdict, Verdict::Holds);
    }

    #[test]
    fn ab_bounds_vacuous_when_slope_ratio_fails() {
        // g = x^2 has slope near 0 at x = 0, so a^2/b^2 <= l_g/L_g fails on [1,2]
        let sq = |x: f64| Ok(x * x);
        let iv = Interval::new(1.0, 2.0).unwrap();
        let (va, _) = check_chebyshev_ab_bounds(
            &ident,
            &sq,
            iv,
            q(0.5),
            &HypothesisParams::default(),
            &CheckOptions::default(),
        );
        assert_eq!(va.verdict, Verdict::Vacuous);
    }
}
