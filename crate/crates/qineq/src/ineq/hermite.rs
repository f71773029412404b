//! Hermite-Hadamard two-sided bounds for convex functions, one variant per
//! integral kind, plus the interval-difference variant and its corollary.
//!
//! Convexity is audited by sampled second differences. For the
//! interval-difference variants the operative hypothesis is convexity of the
//! tilde transform on [0,1]; when slack constants l, L are supplied the
//! sufficient condition b*l >= a*L is reported as well. The corollary's
//! constants enter the inequality itself, so when absent they are estimated
//! as exactly the two weighted-Jensen gaps its derivation instantiates.

use serde::Serialize;

use crate::integrate::IntegralKind;
use crate::qcore::{q_bracket, tilde, HypothesisParams, Interval, QParam, RealFn};

use super::{
    convexity_witness, finish, integrate_abort, resolve_bound, side_le, Abort, Audit,
    CheckOptions, HypStatus, InequalityId, InequalityVerdict, Sides,
};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HhVariant {
    Restricted { b: f64, n: u32 },
    Jackson0 { b: f64 },
    RiemannType { a: f64, b: f64 },
    /// The two-sided bound for I_q(.; a, b).
    JacksonAb { a: f64, b: f64 },
    /// The strengthened form with the gap constants l, L in the inequality.
    Corollary { a: f64, b: f64 },
}

impl HhVariant {
    fn id(self) -> InequalityId {
        match self {
            HhVariant::Restricted { .. } => InequalityId::HhRestricted51,
            HhVariant::Jackson0 { .. } => InequalityId::HhJackson052,
            HhVariant::RiemannType { .. } => InequalityId::HhRiemann53,
            HhVariant::JacksonAb { .. } => InequalityId::HhJacksonAb55,
            HhVariant::Corollary { .. } => InequalityId::HhCor56,
        }
    }

    fn describe(self) -> String {
        match self {
            HhVariant::Restricted { b, n } => format!("restricted(b={b}, n={n})"),
            HhVariant::Jackson0 { b } => format!("jackson0(b={b})"),
            HhVariant::RiemannType { a, b } => format!("riemann(a={a}, b={b})"),
            HhVariant::JacksonAb { a, b } => format!("jackson-ab(a={a}, b={b})"),
            HhVariant::Corollary { a, b } => format!("jackson-ab(a={a}, b={b}) corollary"),
        }
    }
}

/// Sufficient conditions (from the two tilde-transform lemmas) for the
/// tilde transform to inherit monotonicity / convexity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TildeSufficiency {
    pub increasing_sufficient: bool,
    pub convex_sufficient: bool,
}

/// increasing_sufficient <=> a^2/b^2 <= l/L; convex_sufficient <=> b*l >= a*L.
pub fn tilde_hypothesis_helpers(l: f64, big_l: f64, iv: Interval) -> TildeSufficiency {
    TildeSufficiency {
        increasing_sufficient: iv.a * iv.a / (iv.b * iv.b) <= l / big_l,
        convex_sufficient: iv.b * l >= iv.a * big_l,
    }
}

fn audit_convexity(
    audit: &mut Audit,
    name: &str,
    f: &dyn RealFn,
    iv: Interval,
    grid: usize,
) -> Result<(), Abort> {
    match convexity_witness(f, iv, grid)? {
        None => audit.satisfied(format!("{name} (sampled, grid {grid})")),
        Some(x) => audit.violated(
            format!("{name} (sampled, grid {grid})"),
            format!("second difference negative near x = {x}"),
        ),
    }
    Ok(())
}

pub fn check_hermite_hadamard(
    f: &dyn RealFn,
    variant: HhVariant,
    q: QParam,
    params: &HypothesisParams,
    opts: &CheckOptions,
) -> InequalityVerdict {
    let mut audit = Audit::new();
    let qv = q.get();
    let br2 = q_bracket(2, q);
    let sides: Sides = (|| {
        match variant {
            HhVariant::Restricted { b, n } => {
                let a = b * qv.powi(n as i32);
                let iv = Interval::new(a, b).map_err(|e| Abort(e.to_string()))?;
                audit_convexity(&mut audit, "f convex on [a,b]", f, iv, opts.grid)?;
                let g = integrate_abort(f, IntegralKind::Restricted { b, n }, q, &opts.policy)?;
                let mid = g / (b - a);
                let lower = f.eval((a + b) / br2)?;
                // a/q = b q^(n-1) lies inside [a,b]
                let upper = (qv * f.eval(a / qv)? + f.eval(b)?) / br2;
                Ok(vec![
                    side_le("f((a+b)/[2]) <= G/(b-a)", lower, mid),
                    side_le("G/(b-a) <= (q f(a/q) + f(b))/[2]", mid, upper),
                ])
            }
            HhVariant::Jackson0 { b } => {
                let iv = Interval::new(0.0, b).map_err(|e| Abort(e.to_string()))?;
                audit_convexity(&mut audit, "f convex on [0,b]", f, iv, opts.grid)?;
                let i = integrate_abort(f, IntegralKind::Jackson0 { b }, q, &opts.policy)?;
                let mid = i / b;
                let lower = f.eval(b / br2)?;
                let upper = (qv * f.eval(0.0)? + f.eval(b)?) / br2;
                Ok(vec![
                    side_le("f(b/[2]) <= I/b", lower, mid),
                    side_le("I/b <= (q f(0) + f(b))/[2]", mid, upper),
                ])
            }
            HhVariant::RiemannType { a, b } => {
                let iv = Interval::new(a, b).map_err(|e| Abort(e.to_string()))?;
                audit_convexity(&mut audit, "f convex on [a,b]", f, iv, opts.grid)?;
                let i = integrate_abort(f, IntegralKind::RiemannType { a, b }, q, &opts.policy)?;
                let mid = i / (b - a);
                let lower = f.eval((a * qv + b) / br2)?;
                let upper = (qv * f.eval(a)? + f.eval(b)?) / br2;
                Ok(vec![
                    side_le("f((aq+b)/[2]) <= R/(b-a)", lower, mid),
                    side_le("R/(b-a) <= (q f(a) + f(b))/[2]", mid, upper),
                ])
            }
            HhVariant::JacksonAb { a, b } => {
                let iv = Interval::new(a, b).map_err(|e| Abort(e.to_string()))?;
                let zero_b = Interval::new(0.0, b).map_err(|e| Abort(e.to_string()))?;
                audit_convexity(&mut audit, "f convex on [0,b]", f, zero_b, opts.grid)?;
                let tf = tilde(f, iv);
                let unit = Interval::new(0.0, 1.0).expect("unit");
                audit_convexity(&mut audit, "tilde(f) convex on [0,1]", &tf, unit, opts.grid)?;
                if let (Some(l), Some(big_l)) = (params.l, params.big_l) {
                    let suff = tilde_hypothesis_helpers(l.value, big_l.value, iv);
                    audit.require(
                        "b*l >= a*L",
                        suff.convex_sufficient,
                        format!("{} < {}", b * l.value, a * big_l.value),
                    );
                } else {
                    audit.push("b*l >= a*L (l, L not supplied)", HypStatus::Unchecked);
                }
                let i = integrate_abort(f, IntegralKind::JacksonAb { a, b }, q, &opts.policy)?;
                let lower = b * f.eval(b / br2)? - a * f.eval(a / br2)?;
                let upper =
                    ((b - a) * qv * f.eval(0.0)? + b * f.eval(b)? - a * f.eval(a)?) / br2;
                Ok(vec![
                    side_le("b f(b/[2]) - a f(a/[2]) <= I(f;a,b)", lower, i),
                    side_le("I(f;a,b) <= ((b-a)q f(0) + b f(b) - a f(a))/[2]", i, upper),
                ])
            }
            HhVariant::Corollary { a, b } => {
                let iv = Interval::new(a, b).map_err(|e| Abort(e.to_string()))?;
                let big_iv = Interval::new(0.0, a + b).map_err(|e| Abort(e.to_string()))?;
                audit_convexity(&mut audit, "f convex on [0,a+b]", f, big_iv, opts.grid)?;
                let tf = tilde(f, iv);
                let unit = Interval::new(0.0, 1.0).expect("unit");
                audit_convexity(&mut audit, "tilde(f) convex on [0,1]", &tf, unit, opts.grid)?;
                // the two weighted-Jensen gaps the derivation instantiates
                let gap_left = (b * f.eval(b / br2)? - a * f.eval(a / br2)?) / (b - a)
                    - f.eval((a + b) / br2)?;
                let gap_right =
                    (b * f.eval(b)? - a * f.eval(a)?) / (b - a) - f.eval(a + b)?;
                let l = resolve_bound(&mut audit, "l", params.l, opts.grid, || Ok(gap_left))?;
                let big_l =
                    resolve_bound(&mut audit, "L", params.big_l, opts.grid, || Ok(gap_right))?;
                audit.require(
                    "l <= left instantiated gap",
                    l.value <= gap_left + 1e-12 * 1f64.max(gap_left.abs()),
                    format!("{} > {gap_left}", l.value),
                );
                audit.require(
                    "right instantiated gap <= L",
                    gap_right <= big_l.value + 1e-12 * 1f64.max(gap_right.abs()),
                    format!("{gap_right} > {}", big_l.value),
                );
                let i = integrate_abort(f, IntegralKind::JacksonAb { a, b }, q, &opts.policy)?;
                let mid = i / (b - a);
                let lower = l.value + f.eval((a + b) / br2)?;
                let upper = (qv * f.eval(0.0)? + f.eval(a + b)? + big_l.value) / br2;
                Ok(vec![
                    side_le("l + f((a+b)/[2]) <= I/(b-a)", lower, mid),
                    side_le("I/(b-a) <= (q f(0) + f(a+b) + L)/[2]", mid, upper),
                ])
            }
        }
    })();
    finish(
        variant.id(),
        variant.describe(),
        format!("q={qv}"),
        audit,
        sides,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ineq::Verdict;
    use crate::qcore::Bound;

    fn q(v: f64) -> QParam {
        QParam::new(v).unwrap()
    }

    fn sq(x: f64) -> crate::expr::EvalResult {
        Ok(x * x)
    }

    fn ident(x: f64) -> crate::expr::EvalResult {
        Ok(x)
    }

    fn check(f: &dyn RealFn, variant: HhVariant, qv: f64) -> InequalityVerdict {
        check_hermite_hadamard(
            f,
            variant,
            q(qv),
            &HypothesisParams::default(),
            &CheckOptions::default(),
        )
    }

    #[test]
    fn riemann_square() {
        let v = check(&sq, HhVariant::RiemannType { a: 1.0, b: 2.0 }, 0.5);
        assert_eq!(v.verdict, Verdict::Holds);
        // lower f(5/3), middle R/(b-a), upper (0.5 + 4)/1.5
        assert!((v.sides[0].lhs - 25.0 / 9.0).abs() < 1e-12);
        assert!((v.sides[0].rhs - 2.9047619047619047).abs() < 1e-10);
        assert!((v.sides[1].rhs - 3.0).abs() < 1e-12);
    }

    #[test]
    fn restricted_square_upper_equality() {
        let v = check(&sq, HhVariant::Restricted { b: 1.0, n: 2 }, 0.5);
        assert_eq!(v.verdict, Verdict::Holds);
        assert!((v.sides[0].lhs - 0.6944444444444444).abs() < 1e-12);
        assert!((v.sides[0].rhs - 0.75).abs() < 1e-12);
        assert!(v.sides[1].slack.abs() <= v.tolerance);
    }

    #[test]
    fn jackson0_linear_holds() {
        let v = check(&ident, HhVariant::Jackson0 { b: 1.0 }, 0.5);
        assert_eq!(v.verdict, Verdict::Holds);
        assert!(v.sides[0].slack.abs() <= v.tolerance);
    }

    #[test]
    fn jackson_ab_square() {
        let v = check(&sq, HhVariant::JacksonAb { a: 1.0, b: 2.0 }, 0.5);
        assert_eq!(v.verdict, Verdict::Holds);
        assert!((v.sides[0].lhs - 28.0 / 9.0).abs() < 1e-12);
        assert!((v.sides[0].rhs - 4.0).abs() < 1e-10);
        assert!((v.sides[1].rhs - 7.0 / 1.5).abs() < 1e-12);
    }

    #[test]
    fn corollary_square_with_estimated_gaps() {
        let v = check(&sq, HhVariant::Corollary { a: 1.0, b: 2.0 }, 0.5);
        assert_eq!(v.verdict, Verdict::Holds);
        // l = 28/9 - 4, L = 7 - 9; lower side is tight by construction
        assert!(v.sides[0].slack >= 0.0);
        assert!((v.sides[1].rhs - (9.0 - 2.0) / 1.5).abs() < 1e-12);
    }

    #[test]
    fn concave_function_is_vacuous() {
        let root = |x: f64| Ok(x.sqrt());
        let v = check(&root, HhVariant::Jackson0 { b: 1.0 }, 0.5);
        assert_eq!(v.verdict, Verdict::Vacuous);
    }

    #[test]
    fn sufficiency_predicates() {
        let iv = Interval::new(1.0, 2.0).unwrap();
        let s = tilde_hypothesis_helpers(1.0, 1.0, iv);
        assert!(s.increasing_sufficient && s.convex_sufficient);
        let s = tilde_hypothesis_helpers(1.0, 5.0, iv);
        assert!(!s.increasing_sufficient && !s.convex_sufficient);
        let iv0 = Interval::new(0.0, 2.0).unwrap();
        let s = tilde_hypothesis_helpers(0.3, 9.0, iv0);
        assert!(s.increasing_sufficient && s.convex_sufficient);
    }

    #[test]
    fn jackson_ab_slack_condition_recorded() {
        let params = HypothesisParams {
            l: Some(Bound::supplied(1.0)),
            big_l: Some(Bound::supplied(5.0)),
            ..HypothesisParams::default()
        };
        let v = check_hermite_hadamard(
            &sq,
            HhVariant::JacksonAb { a: 1.0, b: 2.0 },
            q(0.5),
            &params,
            &CheckOptions::default(),
        );
        // b*l = 2 < a*L = 5 violates the sufficient condition
        assert_eq!(v.verdict, Verdict::Vacuous);
    }
}
