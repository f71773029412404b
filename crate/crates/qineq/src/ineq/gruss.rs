//! Gruss-type inequalities: the J_q covariance bound, the raw
//! interval-difference covariance functional, and the inflated bound
//! that covers I_q(.; a, b).

use crate::integrate::{IntegrateError, TruncationPolicy};
use crate::qcore::{product, Bound, HypothesisParams, Interval, QParam, RealFn};

use super::{
    audit_bracket, finish, iq_ab, jq, kind_nodes, range_with_nodes, resolve_bound, side_le, Abort,
    Audit,
    CheckOptions, InequalityId, InequalityVerdict, JKind, Sides,
};

struct GrussBounds {
    m: Bound,
    big_m: Bound,
    phi: Bound,
    big_phi: Bound,
}

fn resolve_gruss_bounds(
    audit: &mut Audit,
    f: &dyn RealFn,
    g: &dyn RealFn,
    domain: Interval,
    params: &HypothesisParams,
    grid: usize,
    nodes: &[f64],
) -> Result<GrussBounds, Abort> {
    let (fmin, fmax) = range_with_nodes(f, domain, grid, nodes)?;
    let (gmin, gmax) = range_with_nodes(g, domain, grid, nodes)?;
    let m = resolve_bound(audit, "m", params.m, grid, || Ok(fmin))?;
    let big_m = resolve_bound(audit, "M", params.big_m, grid, || Ok(fmax))?;
    let phi = resolve_bound(audit, "phi", params.phi, grid, || Ok(gmin))?;
    let big_phi = resolve_bound(audit, "Phi", params.big_phi, grid, || Ok(gmax))?;
    audit_bracket(audit, "m <= f <= M", f, domain, m, big_m, grid, nodes)?;
    audit_bracket(audit, "phi <= g <= Phi", g, domain, phi, big_phi, grid, nodes)?;
    Ok(GrussBounds { m, big_m, phi, big_phi })
}

/// Theorem-form Gruss bound:
/// |J(fg)/w - J(f)J(g)/w^2| <= (M-m)(Phi-phi)/4 on E_(J).
pub fn check_gruss(
    f: &dyn RealFn,
    g: &dyn RealFn,
    jk: JKind,
    q: QParam,
    params: &HypothesisParams,
    opts: &CheckOptions,
) -> InequalityVerdict {
    let mut audit = Audit::new();
    let sides: Sides = (|| {
        let b = resolve_gruss_bounds(
            &mut audit,
            f,
            g,
            jk.domain(q),
            params,
            opts.grid,
            &kind_nodes(jk, q),
        )?;
        let w = jk.width(q);
        let fg = product(f, g);
        let jfg = jq(&fg, jk, q, &opts.policy)?;
        let jf = jq(f, jk, q, &opts.policy)?;
        let jg = jq(g, jk, q, &opts.policy)?;
        let lhs = (jfg / w - jf * jg / (w * w)).abs();
        let rhs = 0.25 * (b.big_m.value - b.m.value) * (b.big_phi.value - b.phi.value);
        Ok(vec![side_le("|J(fg)/w - J(f)J(g)/w^2| <= (M-m)(Phi-phi)/4", lhs, rhs)])
    })();
    finish(
        InequalityId::Gruss41,
        jk.describe(),
        format!("q={}", q.get()),
        audit,
        sides,
    )
}

/// The raw covariance-style difference I_q(fg; a, b) - I_q(f; a, b) I_q(g; a, b).
pub fn gruss_ab_difference(
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
    Ok(ifg - i_f * i_g)
}

/// Gruss bound for I_q(.; a, b): the right side is inflated by
/// (1 + 4ab/(b-a)^2); f and g must be bounded on all of [0,b].
pub fn check_gruss_ab(
    f: &dyn RealFn,
    g: &dyn RealFn,
    iv: Interval,
    q: QParam,
    params: &HypothesisParams,
    opts: &CheckOptions,
) -> InequalityVerdict {
    let mut audit = Audit::new();
    let sides: Sides = (|| {
        let zero_b = Interval::new(0.0, iv.b).expect("[0,b]");
        // the merged series samples both geometric ladders a q^k and b q^k
        let mut nodes = kind_nodes(JKind::Jackson0 { b: iv.b }, q);
        nodes.extend(kind_nodes(JKind::Jackson0 { b: iv.a }, q));
        let b = resolve_gruss_bounds(&mut audit, f, g, zero_b, params, opts.grid, &nodes)?;
        let w = iv.width();
        let fg = product(f, g);
        let ifg = iq_ab(&fg, iv, q, &opts.policy)?;
        let i_f = iq_ab(f, iv, q, &opts.policy)?;
        let i_g = iq_ab(g, iv, q, &opts.policy)?;
        let lhs = (ifg / w - i_f * i_g / (w * w)).abs();
        let inflate = 1.0 + 4.0 * iv.a * iv.b / (w * w);
        let rhs =
            0.25 * (b.big_m.value - b.m.value) * (b.big_phi.value - b.phi.value) * inflate;
        Ok(vec![side_le(
            "|I(fg)/w - I(f)I(g)/w^2| <= (M-m)(Phi-phi)(1+4ab/w^2)/4",
            lhs,
            rhs,
        )])
    })();
    finish(
        InequalityId::GrussAb42,
        format!("jackson-ab(a={}, b={})", iv.a, iv.b),
        format!("q={}", q.get()),
        audit,
        sides,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ineq::Verdict;

    fn q(v: f64) -> QParam {
        QParam::new(v).unwrap()
    }

    fn ident(x: f64) -> crate::expr::EvalResult {
        Ok(x)
    }

    fn sq(x: f64) -> crate::expr::EvalResult {
        Ok(x * x)
    }

    fn supplied(m: f64, big_m: f64, phi: f64, big_phi: f64) -> HypothesisParams {
        HypothesisParams {
            m: Some(Bound::supplied(m)),
            big_m: Some(Bound::supplied(big_m)),
            phi: Some(Bound::supplied(phi)),
            big_phi: Some(Bound::supplied(big_phi)),
            ..HypothesisParams::default()
        }
    }

    #[test]
    fn gruss_monomials_jackson0() {
        let v = check_gruss(
            &ident,
            &sq,
            JKind::Jackson0 { b: 1.0 },
            q(0.5),
            &supplied(0.0, 1.0, 0.0, 1.0),
            &CheckOptions::default(),
        );
        assert_eq!(v.verdict, Verdict::Holds);
        // |1/[4] - 1/([2][3])| with [2]=1.5, [3]=1.75, [4]=1.875
        assert!((v.lhs - 0.15238095238095237).abs() < 1e-12);
        assert!((v.rhs - 0.25).abs() < 1e-15);
    }

    #[test]
    fn gruss_constant_equality() {
        let one = |_x: f64| Ok(1.0);
        let v = check_gruss(
            &one,
            &one,
            JKind::Restricted { b: 1.0, n: 4 },
            q(0.5),
            &HypothesisParams::default(),
            &CheckOptions::default(),
        );
        assert_eq!(v.verdict, Verdict::Holds);
        assert!(v.lhs.abs() < 1e-14 && v.rhs.abs() < 1e-14);
    }

    #[test]
    fn gruss_odd_pair_restricted() {
        let neg = |x: f64| Ok(-x);
        let v = check_gruss(
            &ident,
            &neg,
            JKind::Restricted { b: 1.0, n: 4 },
            q(0.5),
            &supplied(-1.0, 1.0, -1.0, 1.0),
            &CheckOptions::default(),
        );
        assert_eq!(v.verdict, Verdict::Holds);
    }

    #[test]
    fn ab_difference_root_at_half() {
        let iv = Interval::new(1.0, 2.0).unwrap();
        let pol = TruncationPolicy::default();
        let at_half = gruss_ab_difference(&ident, &sq, iv, q(0.5), &pol).unwrap();
        assert!(at_half.abs() < 1e-12);
        let lo = gruss_ab_difference(&ident, &sq, iv, q(0.2), &pol).unwrap();
        let hi = gruss_ab_difference(&ident, &sq, iv, q(0.8), &pol).unwrap();
        assert!(lo * hi < 0.0);
    }

    #[test]
    fn ab_bound_covers_low_q_excess() {
        let iv = Interval::new(1.0, 2.0).unwrap();
        let v = check_gruss_ab(
            &ident,
            &sq,
            iv,
            q(0.2),
            &supplied(0.0, 2.0, 0.0, 4.0),
            &CheckOptions::default(),
        );
        assert_eq!(v.verdict, Verdict::Holds);
    }

    #[test]
    fn ab_bound_reduces_to_plain_at_a_zero() {
        let iv = Interval::new(0.0, 1.0).unwrap();
        let params = supplied(0.0, 1.0, 0.0, 1.0);
        let vab = check_gruss_ab(&ident, &sq, iv, q(0.5), &params, &CheckOptions::default());
        let vj = check_gruss(
            &ident,
            &sq,
            JKind::Jackson0 { b: 1.0 },
            q(0.5),
            &params,
            &CheckOptions::default(),
        );
        assert_eq!(vab.verdict, Verdict::Holds);
        assert!((vab.lhs - vj.lhs).abs() < 1e-12);
        assert!((vab.rhs - vj.rhs).abs() < 1e-15);
    }
}
