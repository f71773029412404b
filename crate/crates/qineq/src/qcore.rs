//! q-arithmetic primitives, parameter types and the hat/tilde/breve operator
//! transforms mapping functions on [a,b] (or [0,b]) to functions on [0,1].

use serde::Serialize;
use thiserror::Error;

use crate::expr::{EvalError, EvalResult, Expression};

/// A real-valued partial function of one real variable.
pub trait RealFn {
    fn eval(&self, x: f64) -> EvalResult;
}

impl<F> RealFn for F
where
    F: Fn(f64) -> EvalResult,
{
    fn eval(&self, x: f64) -> EvalResult {
        self(x)
    }
}

impl RealFn for Expression {
    fn eval(&self, x: f64) -> EvalResult {
        self.evaluate(x)
    }
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum ParamError {
    #[error("q must satisfy 0 < q < 1, got {0}")]
    BadQ(f64),
    #[error("interval must satisfy 0 <= a < b, got [{0}, {1}]")]
    BadInterval(f64, f64),
    #[error("conjugate exponents need alpha, beta > 1 with 1/alpha + 1/beta = 1, got ({0}, {1})")]
    BadConjugates(f64, f64),
}

/// The deformation parameter, strictly inside (0,1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QParam(f64);

impl QParam {
    pub fn new(q: f64) -> Result<QParam, ParamError> {
        if q.is_finite() && q > 0.0 && q < 1.0 {
            Ok(QParam(q))
        } else {
            Err(ParamError::BadQ(q))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

/// A closed interval [a,b] with 0 <= a < b. Operations that need a > 0
/// check that at their own boundary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    pub a: f64,
    pub b: f64,
}

impl Interval {
    pub fn new(a: f64, b: f64) -> Result<Interval, ParamError> {
        if a.is_finite() && b.is_finite() && 0.0 <= a && a < b {
            Ok(Interval { a, b })
        } else {
            Err(ParamError::BadInterval(a, b))
        }
    }

    pub fn width(self) -> f64 {
        self.b - self.a
    }
}

/// Conjugate exponents alpha, beta > 1 with 1/alpha + 1/beta = 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConjugatePair {
    pub alpha: f64,
    pub beta: f64,
}

impl ConjugatePair {
    pub fn new(alpha: f64, beta: f64) -> Result<ConjugatePair, ParamError> {
        if alpha > 1.0 && beta > 1.0 && (1.0 / alpha + 1.0 / beta - 1.0).abs() <= 1e-12 {
            Ok(ConjugatePair { alpha, beta })
        } else {
            Err(ParamError::BadConjugates(alpha, beta))
        }
    }

    /// Derive beta from alpha.
    pub fn from_alpha(alpha: f64) -> Result<ConjugatePair, ParamError> {
        let beta = alpha / (alpha - 1.0);
        ConjugatePair::new(alpha, beta)
    }
}

/// How a bound constant entered a verdict.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "source", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum BoundSource {
    UserSupplied,
    Estimated { grid: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Bound {
    pub value: f64,
    #[serde(flatten)]
    pub source: BoundSource,
}

impl Bound {
    pub fn supplied(value: f64) -> Bound {
        Bound { value, source: BoundSource::UserSupplied }
    }

    pub fn estimated(value: f64, grid: usize) -> Bound {
        Bound { value, source: BoundSource::Estimated { grid } }
    }

    pub fn is_estimated(&self) -> bool {
        matches!(self.source, BoundSource::Estimated { .. })
    }
}

/// Optional named constants consumed by the theorem hypotheses. Positivity
/// and ordering constraints are enforced by the consuming checker.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct HypothesisParams {
    pub m: Option<Bound>,
    pub big_m: Option<Bound>,
    pub phi: Option<Bound>,
    pub big_phi: Option<Bound>,
    pub c: Option<Bound>,
    pub big_c: Option<Bound>,
    pub d: Option<Bound>,
    pub big_d: Option<Bound>,
    pub l: Option<Bound>,
    pub big_l: Option<Bound>,
    pub l_f: Option<Bound>,
    pub big_l_f: Option<Bound>,
    pub l_g: Option<Bound>,
    pub big_l_g: Option<Bound>,
    pub p: Option<f64>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
}

/// The q-bracket [n]_q = (1-q^n)/(1-q). Computed as the explicit geometric
/// sum 1 + q + ... + q^(n-1) for n <= 64, which stays exact as q -> 1.
pub fn q_bracket(n: u32, q: QParam) -> f64 {
    let q = q.get();
    if n == 0 {
        return 0.0;
    }
    if n <= 64 {
        let mut sum = 0.0;
        let mut qk = 1.0;
        for _ in 0..n {
            sum += qk;
            qk *= q;
        }
        sum
    } else {
        (1.0 - q.powi(n as i32)) / (1.0 - q)
    }
}

// -------------------------------------------------------------- transforms

/// hat f (x) = f(a + (b-a)x), on [0,1].
pub fn hat<'a>(f: &'a dyn RealFn, iv: Interval) -> impl RealFn + 'a {
    move |x: f64| f.eval(iv.a + (iv.b - iv.a) * x)
}

/// tilde f (x) = b f(bx) - a f(ax), on [0,1]. Samples f on [0,b].
pub fn tilde<'a>(f: &'a dyn RealFn, iv: Interval) -> impl RealFn + 'a {
    move |x: f64| Ok(iv.b * f.eval(iv.b * x)? - iv.a * f.eval(iv.a * x)?)
}

/// breve f (x) = f(bx) - f(ax), on [0,1]. Samples f on [0,b].
pub fn breve<'a>(f: &'a dyn RealFn, iv: Interval) -> impl RealFn + 'a {
    move |x: f64| Ok(f.eval(iv.b * x)? - f.eval(iv.a * x)?)
}

/// Pointwise product of two functions.
pub fn product<'a>(f: &'a dyn RealFn, g: &'a dyn RealFn) -> impl RealFn + 'a {
    move |x: f64| Ok(f.eval(x)? * g.eval(x)?)
}

// ------------------------------------------------------------ monotonicity

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Direction {
    Increasing,
    Decreasing,
}

/// Outcome of a sampled q-monotonicity check. This is sound for `Fails`
/// (a witness is a real violation) and heuristic for `Holds`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum MonotoneVerdict {
    Holds { grid: usize },
    Fails { witness: f64, grid: usize },
    Undecided { point: f64, reason: String },
}

impl MonotoneVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, MonotoneVerdict::Holds { .. })
    }
}

/// Checks f(qx) <= f(x) (increasing) or f(qx) >= f(x) (decreasing) on a
/// sampled set: a uniform grid over the x with both x and qx inside [a,b],
/// plus the q-lattice points b*q^k inside the interval. The constraint set
/// may be empty (a/q > b), in which case the property holds vacuously.
pub fn is_q_monotone(
    f: &dyn RealFn,
    iv: Interval,
    q: QParam,
    direction: Direction,
    grid: usize,
) -> MonotoneVerdict {
    assert!(grid >= 2, "grid must be >= 2");
    let q = q.get();
    let lo = (iv.a / q).max(iv.a);
    let hi = iv.b;
    let mut samples = Vec::with_capacity(grid + 64);
    if lo <= hi {
        for i in 0..grid {
            samples.push(lo + (hi - lo) * (i as f64) / ((grid - 1) as f64));
        }
    }
    // q-lattice points b*q^k with q*x still inside the interval (capped)
    let mut x = iv.b;
    for _ in 0..64 {
        if x < iv.a || x <= 0.0 {
            break;
        }
        if x * q >= iv.a {
            samples.push(x);
        }
        x *= q;
    }
    for &x in &samples {
        let qx = q * x;
        if qx < iv.a || x > iv.b {
            continue;
        }
        let fx = match f.eval(x) {
            Ok(v) => v,
            Err(e) => return undecided(x, e),
        };
        let fqx = match f.eval(qx) {
            Ok(v) => v,
            Err(e) => return undecided(qx, e),
        };
        let ok = match direction {
            Direction::Increasing => fqx <= fx,
            Direction::Decreasing => fqx >= fx,
        };
        if !ok {
            return MonotoneVerdict::Fails { witness: x, grid };
        }
    }
    MonotoneVerdict::Holds { grid }
}

fn undecided(point: f64, e: EvalError) -> MonotoneVerdict {
    MonotoneVerdict::Undecided { point, reason: e.to_string() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    fn q(v: f64) -> QParam {
        QParam::new(v).unwrap()
    }

    fn iv(a: f64, b: f64) -> Interval {
        Interval::new(a, b).unwrap()
    }

    #[test]
    fn param_validation() {
        assert!(QParam::new(0.0).is_err());
        assert!(QParam::new(1.0).is_err());
        assert!(QParam::new(0.5).is_ok());
        assert!(Interval::new(2.0, 1.0).is_err());
        assert!(Interval::new(-1.0, 1.0).is_err());
        assert!(ConjugatePair::new(2.0, 2.0).is_ok());
        assert!(ConjugatePair::new(2.0, 3.0).is_err());
        assert!(ConjugatePair::from_alpha(3.0).is_ok());
    }

    #[test]
    fn q_bracket_values() {
        assert_eq!(q_bracket(4, q(0.5)), 1.875);
        assert_eq!(q_bracket(1, q(0.3)), 1.0);
        assert_eq!(q_bracket(0, q(0.7)), 0.0);
    }

    #[test]
    fn q_bracket_identity() {
        // [n]_q (1-q) + q^n == 1 up to a few ulps
        for n in 0..=64u32 {
            for i in 1..100 {
                let qq = i as f64 / 100.0;
                let lhs = q_bracket(n, q(qq)) * (1.0 - qq) + qq.powi(n as i32);
                assert!((lhs - 1.0).abs() <= 4.0 * f64::EPSILON, "n={n} q={qq} lhs={lhs}");
            }
        }
    }

    #[test]
    fn transform_endpoints() {
        let f = parse("x^2").unwrap();
        let h = hat(&f, iv(1.0, 2.0));
        assert_eq!(h.eval(0.0).unwrap(), 1.0);
        assert_eq!(h.eval(1.0).unwrap(), 4.0);
        let fx = parse("x").unwrap();
        let h = hat(&fx, iv(1.0, 3.0));
        assert_eq!(h.eval(0.5).unwrap(), 2.0);

        let one = parse("1").unwrap();
        let t = tilde(&one, iv(1.0, 2.0));
        assert_eq!(t.eval(0.7).unwrap(), 1.0);
        let t = tilde(&fx, iv(1.0, 2.0));
        assert_eq!(t.eval(0.5).unwrap(), 1.5);

        let br = breve(&one, iv(1.0, 2.0));
        assert_eq!(br.eval(0.3).unwrap(), 0.0);
        let br = breve(&fx, iv(1.0, 2.0));
        assert_eq!(br.eval(0.5).unwrap(), 0.5);
        let f2 = parse("x^2").unwrap();
        let br = breve(&f2, iv(1.0, 2.0));
        assert_eq!(br.eval(1.0).unwrap(), 3.0);
    }

    #[test]
    fn tilde_propagates_domain_error() {
        let f = parse("ln(x-1)").unwrap();
        let t = tilde(&f, iv(2.0, 3.0));
        assert!(t.eval(0.1).is_err());
    }

    #[test]
    fn monotonicity_checks() {
        let f = parse("x^2").unwrap();
        assert!(is_q_monotone(&f, iv(0.0, 1.0), q(0.5), Direction::Increasing, 64).holds());
        let neg = parse("-x").unwrap();
        assert!(matches!(
            is_q_monotone(&neg, iv(0.0, 1.0), q(0.5), Direction::Increasing, 64),
            MonotoneVerdict::Fails { .. }
        ));
        let bad = parse("ln(x-1)").unwrap();
        assert!(matches!(
            is_q_monotone(&bad, iv(0.5, 1.0), q(0.5), Direction::Increasing, 64),
            MonotoneVerdict::Undecided { .. }
        ));
    }

    #[test]
    fn product_identities() {
        // hat/tilde/breve product identities on a small deterministic grid
        let f = parse("x^2+1").unwrap();
        let g = parse("exp(x)").unwrap();
        let e = iv(1.0, 2.0);
        let fg = product(&f, &g);
        let hat_fg = hat(&fg, e);
        let hat_f = hat(&f, e);
        let hat_g = hat(&g, e);
        let tilde_fg = tilde(&fg, e);
        let tilde_f = tilde(&f, e);
        let tilde_g = tilde(&g, e);
        let breve_f = breve(&f, e);
        let breve_g = breve(&g, e);
        for i in 0..=20 {
            let x = i as f64 / 20.0;
            let lhs = hat_fg.eval(x).unwrap();
            let rhs = hat_f.eval(x).unwrap() * hat_g.eval(x).unwrap();
            let scale = 1f64.max(lhs.abs()).max(rhs.abs());
            assert!((lhs - rhs).abs() <= 1e-12 * scale);

            let lhs = tilde_fg.eval(x).unwrap();
            let rhs = (tilde_f.eval(x).unwrap() * tilde_g.eval(x).unwrap()
                - e.a * e.b * breve_f.eval(x).unwrap() * breve_g.eval(x).unwrap())
                / e.width();
            let scale = 1f64.max(lhs.abs()).max(rhs.abs());
            assert!((lhs - rhs).abs() <= 1e-10 * scale);
        }
    }
}
