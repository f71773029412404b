//! The inequality registry: one checker per theorem, each returning a
//! hypothesis-audited verdict with computed slack.
//!
//! Slack is oriented so that `slack >= 0` means the inequality holds. A
//! violated hypothesis yields `Vacuous` (the theorem says nothing there);
//! an integration or evaluation failure yields `Untestable`.

mod chebyshev;
mod families;
mod gruss;
mod hermite;

pub use chebyshev::{check_chebyshev, check_chebyshev_ab_bounds, chebyshev_ab_difference};
pub use families::{check_jensen_power, check_lah_ribaric, check_ratio_family, check_young_family};
pub use gruss::{check_gruss, check_gruss_ab, gruss_ab_difference};
pub use hermite::{check_hermite_hadamard, tilde_hypothesis_helpers, HhVariant, TildeSufficiency};

use serde::Serialize;
use thiserror::Error;

use crate::expr::EvalError;
use crate::integrate::{integrate, IntegralKind, IntegrateError, TruncationPolicy};
use crate::qcore::{Bound, ConjugatePair, HypothesisParams, Interval, QParam, RealFn};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum InequalityId {
    Chebyshev31,
    ChebyshevAbA,
    ChebyshevAbB,
    Gruss41,
    GrussAb42,
    HhRestricted51,
    HhJackson052,
    HhRiemann53,
    HhJacksonAb55,
    HhCor56,
    Young61I,
    Young61Ii,
    Young61Iii,
    Young61Iv,
    Young62I,
    Young62Ii,
    Young62Iii,
    Cassels63I,
    Cassels63Ii,
    Cassels63Iii,
    Bounded64I,
    Bounded64Ii,
    Bounded64Iii,
    SchwarzCor65,
    JensenPower66,
    PowerMeanCor67,
    LahRibaric68,
    LahRibaric68P2,
}

impl InequalityId {
    pub const ALL: [InequalityId; 28] = [
        InequalityId::Chebyshev31,
        InequalityId::ChebyshevAbA,
        InequalityId::ChebyshevAbB,
        InequalityId::Gruss41,
        InequalityId::GrussAb42,
        InequalityId::HhRestricted51,
        InequalityId::HhJackson052,
        InequalityId::HhRiemann53,
        InequalityId::HhJacksonAb55,
        InequalityId::HhCor56,
        InequalityId::Young61I,
        InequalityId::Young61Ii,
        InequalityId::Young61Iii,
        InequalityId::Young61Iv,
        InequalityId::Young62I,
        InequalityId::Young62Ii,
        InequalityId::Young62Iii,
        InequalityId::Cassels63I,
        InequalityId::Cassels63Ii,
        InequalityId::Cassels63Iii,
        InequalityId::Bounded64I,
        InequalityId::Bounded64Ii,
        InequalityId::Bounded64Iii,
        InequalityId::SchwarzCor65,
        InequalityId::JensenPower66,
        InequalityId::PowerMeanCor67,
        InequalityId::LahRibaric68,
        InequalityId::LahRibaric68P2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            InequalityId::Chebyshev31 => "chebyshev_31",
            InequalityId::ChebyshevAbA => "chebyshev_ab_a",
            InequalityId::ChebyshevAbB => "chebyshev_ab_b",
            InequalityId::Gruss41 => "gruss_41",
            InequalityId::GrussAb42 => "gruss_ab_42",
            InequalityId::HhRestricted51 => "hh_restricted_51",
            InequalityId::HhJackson052 => "hh_jackson0_52",
            InequalityId::HhRiemann53 => "hh_riemann_53",
            InequalityId::HhJacksonAb55 => "hh_jackson_ab_55",
            InequalityId::HhCor56 => "hh_cor_56",
            InequalityId::Young61I => "young_61_i",
            InequalityId::Young61Ii => "young_61_ii",
            InequalityId::Young61Iii => "young_61_iii",
            InequalityId::Young61Iv => "young_61_iv",
            InequalityId::Young62I => "young_62_i",
            InequalityId::Young62Ii => "young_62_ii",
            InequalityId::Young62Iii => "young_62_iii",
            InequalityId::Cassels63I => "cassels_63_i",
            InequalityId::Cassels63Ii => "cassels_63_ii",
            InequalityId::Cassels63Iii => "cassels_63_iii",
            InequalityId::Bounded64I => "bounded_64_i",
            InequalityId::Bounded64Ii => "bounded_64_ii",
            InequalityId::Bounded64Iii => "bounded_64_iii",
            InequalityId::SchwarzCor65 => "schwarz_cor_65",
            InequalityId::JensenPower66 => "jensen_power_66",
            InequalityId::PowerMeanCor67 => "power_mean_cor_67",
            InequalityId::LahRibaric68 => "lah_ribaric_68",
            InequalityId::LahRibaric68P2 => "lah_ribaric_68_p2",
        }
    }

    pub fn from_name(name: &str) -> Option<InequalityId> {
        InequalityId::ALL.iter().copied().find(|id| id.name() == name)
    }

    /// Ids whose theorem ranges over J_q (Jackson0/Restricted/Riemann)
    /// rather than the interval-difference integral I_q(.; a, b).
    pub fn takes_jkind(self) -> bool {
        !matches!(
            self,
            InequalityId::ChebyshevAbA
                | InequalityId::ChebyshevAbB
                | InequalityId::GrussAb42
                | InequalityId::HhJacksonAb55
                | InequalityId::HhCor56
        )
    }
}

/// The three integral kinds the J_q-style theorems cover. JacksonAb is
/// deliberately absent: the theorems in this family exclude it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum JKind {
    Jackson0 { b: f64 },
    Restricted { b: f64, n: u32 },
    RiemannType { a: f64, b: f64 },
}

impl JKind {
    pub fn lower(self, q: QParam) -> f64 {
        match self {
            JKind::Jackson0 { .. } => 0.0,
            JKind::Restricted { b, n } => b * q.get().powi(n as i32),
            JKind::RiemannType { a, .. } => a,
        }
    }

    pub fn upper(self) -> f64 {
        match self {
            JKind::Jackson0 { b } | JKind::Restricted { b, .. } | JKind::RiemannType { b, .. } => b,
        }
    }

    pub fn width(self, q: QParam) -> f64 {
        self.upper() - self.lower(q)
    }

    /// E_(J) = [a_(J), b], the interval the hypotheses range over.
    pub fn domain(self, q: QParam) -> Interval {
        Interval::new(self.lower(q), self.upper()).expect("JKind domain")
    }

    pub fn integral_kind(self) -> IntegralKind {
        match self {
            JKind::Jackson0 { b } => IntegralKind::Jackson0 { b },
            JKind::Restricted { b, n } => IntegralKind::Restricted { b, n },
            JKind::RiemannType { a, b } => IntegralKind::RiemannType { a, b },
        }
    }

    pub fn describe(self) -> String {
        match self {
            JKind::Jackson0 { b } => format!("jackson0(b={b})"),
            JKind::Restricted { b, n } => format!("restricted(b={b}, n={n})"),
            JKind::RiemannType { a, b } => format!("riemann(a={a}, b={b})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Holds,
    Fails,
    Vacuous,
    Untestable,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum HypStatus {
    Satisfied,
    Violated { witness: String },
    Estimated,
    Unchecked,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HypCheck {
    pub name: String,
    #[serde(flatten)]
    pub status: HypStatus,
}

/// One side of an inequality. `slack >= 0` means this side holds.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SideReport {
    pub label: String,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InequalityVerdict {
    pub id: InequalityId,
    pub integral_kind: String,
    pub inputs: String,
    pub hypotheses: Vec<HypCheck>,
    /// Binding (minimum-slack) side; `sides` holds every side checked.
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub sides: Vec<SideReport>,
    pub verdict: Verdict,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum DispatchError {
    #[error("inequality {0} does not permit integral kind {1}")]
    KindNotPermitted(&'static str, String),
    #[error("missing input for {0}: {1}")]
    MissingInput(&'static str, &'static str),
}

#[derive(Debug, Clone, Copy)]
pub struct CheckOptions {
    pub policy: TruncationPolicy,
    /// Sampling grid for hypothesis audits and constant estimation.
    pub grid: usize,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions { policy: TruncationPolicy::default(), grid: 256 }
    }
}

// ------------------------------------------------------------ internals
// shared by the checker submodules

pub(crate) struct Audit {
    hyps: Vec<HypCheck>,
}

impl Audit {
    pub(crate) fn new() -> Audit {
        Audit { hyps: Vec::new() }
    }

    pub(crate) fn push(&mut self, name: impl Into<String>, status: HypStatus) {
        self.hyps.push(HypCheck { name: name.into(), status });
    }

    pub(crate) fn satisfied(&mut self, name: impl Into<String>) {
        self.push(name, HypStatus::Satisfied);
    }

    pub(crate) fn violated(&mut self, name: impl Into<String>, witness: impl Into<String>) {
        self.push(name, HypStatus::Violated { witness: witness.into() });
    }

    /// Records `name` as satisfied or violated depending on `ok`.
    pub(crate) fn require(&mut self, name: impl Into<String>, ok: bool, witness: impl Into<String>) {
        if ok {
            self.satisfied(name);
        } else {
            self.violated(name, witness);
        }
    }

    pub(crate) fn into_vec(self) -> Vec<HypCheck> {
        self.hyps
    }
}

/// Why a checker could not produce a numeric verdict.
pub(crate) struct Abort(pub String);

impl From<IntegrateError> for Abort {
    fn from(e: IntegrateError) -> Abort {
        Abort(e.to_string())
    }
}

impl From<EvalError> for Abort {
    fn from(e: EvalError) -> Abort {
        Abort(e.to_string())
    }
}

pub(crate) type Sides = Result<Vec<SideReport>, Abort>;

pub(crate) fn side(label: &str, lhs: f64, rhs: f64, slack: f64) -> SideReport {
    SideReport { label: label.to_string(), lhs, rhs, slack }
}

/// "lhs <= rhs" side.
pub(crate) fn side_le(label: &str, lhs: f64, rhs: f64) -> SideReport {
    side(label, lhs, rhs, rhs - lhs)
}

/// "lhs >= rhs" side.
pub(crate) fn side_ge(label: &str, lhs: f64, rhs: f64) -> SideReport {
    side(label, lhs, rhs, lhs - rhs)
}

/// Assembles the final verdict from the audit and the computed sides.
pub(crate) fn finish(
    id: InequalityId,
    integral_kind: String,
    inputs: String,
    audit: Audit,
    sides: Sides,
) -> InequalityVerdict {
    let hypotheses = audit.into_vec();
    let violated = hypotheses.iter().any(|h| matches!(h.status, HypStatus::Violated { .. }));
    match sides {
        Err(Abort(reason)) => InequalityVerdict {
            id,
            integral_kind,
            inputs,
            hypotheses,
            lhs: f64::NAN,
            rhs: f64::NAN,
            slack: f64::NAN,
            sides: Vec::new(),
            verdict: Verdict::Untestable,
            tolerance: f64::NAN,
            note: Some(reason),
        },
        Ok(sides) => {
            assert!(!sides.is_empty(), "checker produced no sides");
            let binding = sides
                .iter()
                .min_by(|a, b| a.slack.partial_cmp(&b.slack).expect("finite slack"))
                .expect("non-empty sides")
                .clone();
            let tolerance = sides
                .iter()
                .map(|s| 1e-9 * 1f64.max(s.lhs.abs()).max(s.rhs.abs()))
                .fold(f64::INFINITY, f64::min);
            let verdict = if violated {
                Verdict::Vacuous
            } else if sides.iter().all(|s| {
                s.slack >= -(1e-9 * 1f64.max(s.lhs.abs()).max(s.rhs.abs()))
            }) {
                Verdict::Holds
            } else {
                Verdict::Fails
            };
            InequalityVerdict {
                id,
                integral_kind,
                inputs,
                hypotheses,
                lhs: binding.lhs,
                rhs: binding.rhs,
                slack: binding.slack,
                sides,
                verdict,
                tolerance,
                note: None,
            }
        }
    }
}

/// Integrate, turning any failure into an Untestable abort.
pub(crate) fn integrate_abort(
    h: &dyn RealFn,
    kind: IntegralKind,
    q: QParam,
    policy: &TruncationPolicy,
) -> Result<f64, Abort> {
    Ok(integrate(h, kind, q, policy).ok()?)
}

/// J_q(h) for the given kind; failure aborts the verdict as Untestable.
pub(crate) fn jq(
    h: &dyn RealFn,
    jk: JKind,
    q: QParam,
    policy: &TruncationPolicy,
) -> Result<f64, Abort> {
    integrate_abort(h, jk.integral_kind(), q, policy)
}

pub(crate) fn iq_ab(
    h: &dyn RealFn,
    iv: Interval,
    q: QParam,
    policy: &TruncationPolicy,
) -> Result<f64, Abort> {
    Ok(integrate(h, IntegralKind::JacksonAb { a: iv.a, b: iv.b }, q, policy).ok()?)
}

// ------------------------------------------------------- sampled estimates

/// Uniform grid over [iv.a, iv.b] with `grid` points.
pub(crate) fn grid_points(iv: Interval, grid: usize) -> impl Iterator<Item = f64> {
    let n = grid.max(2);
    (0..n).map(move |i| iv.a + iv.width() * (i as f64) / ((n - 1) as f64))
}

/// Sampled min/max of f on iv.
pub(crate) fn grid_minmax(
    f: &dyn RealFn,
    iv: Interval,
    grid: usize,
) -> Result<(f64, f64), Abort> {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for x in grid_points(iv, grid) {
        let v = f.eval(x)?;
        lo = lo.min(v);
        hi = hi.max(v);
    }
    Ok((lo, hi))
}

/// The points a q-integral kind actually samples. A uniform audit grid is
/// sparse near the geometric accumulation point, so range estimates scan
/// these as well.
pub(crate) fn kind_nodes(jk: JKind, q: QParam) -> Vec<f64> {
    fn geom(scale: f64, offset: f64, cap: u32, q: f64) -> Vec<f64> {
        let mut out = Vec::with_capacity(cap as usize + 1);
        let mut x = scale;
        for _ in 0..cap {
            out.push(offset + x);
            if (x * q).abs() < f64::MIN_POSITIVE {
                break;
            }
            x *= q;
        }
        out.push(offset);
        out
    }
    match jk {
        JKind::Restricted { b, n } => geom(b, 0.0, n + 1, q.get()),
        JKind::Jackson0 { b } => geom(b, 0.0, 600, q.get()),
        JKind::RiemannType { a, b } => geom(b - a, a, 600, q.get()),
    }
}

/// Min/max of f over the uniform grid joined with the integral's own nodes.
pub(crate) fn range_with_nodes(
    f: &dyn RealFn,
    iv: Interval,
    grid: usize,
    nodes: &[f64],
) -> Result<(f64, f64), Abort> {
    let (mut lo, mut hi) = grid_minmax(f, iv, grid)?;
    for &x in nodes {
        let v = f.eval(x)?;
        lo = lo.min(v);
        hi = hi.max(v);
    }
    Ok((lo, hi))
}

/// Sampled min/max of symmetric difference quotients of f on iv with step
/// h = width/1024 (clipped to the interval at the endpoints).
pub(crate) fn grid_slope_range(
    f: &dyn RealFn,
    iv: Interval,
    grid: usize,
) -> Result<(f64, f64), Abort> {
    let h = iv.width() / 1024.0;
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for x in grid_points(iv, grid) {
        let x0 = (x - h).max(iv.a);
        let x1 = (x + h).min(iv.b);
        if x1 <= x0 {
            continue;
        }
        let slope = (f.eval(x1)? - f.eval(x0)?) / (x1 - x0);
        lo = lo.min(slope);
        hi = hi.max(slope);
    }
    Ok((lo, hi))
}

/// Sampled midpoint-convexity: discrete second differences on a uniform
/// grid must be >= -1e-10 * scale. Returns a violation witness if any.
pub(crate) fn convexity_witness(
    f: &dyn RealFn,
    iv: Interval,
    grid: usize,
) -> Result<Option<f64>, Abort> {
    let n = grid.max(3);
    let mut values = Vec::with_capacity(n);
    for x in grid_points(iv, n) {
        values.push(f.eval(x)?);
    }
    let scale = values.iter().fold(1f64, |m, v| m.max(v.abs()));
    let tol = 1e-10 * scale;
    for i in 1..n - 1 {
        let second = values[i - 1] - 2.0 * values[i] + values[i + 1];
        if second < -tol {
            let x = iv.a + iv.width() * (i as f64) / ((n - 1) as f64);
            return Ok(Some(x));
        }
    }
    Ok(None)
}

/// Sampled strict positivity; returns a witness x with f(x) <= 0 if any.
pub(crate) fn positivity_witness(
    f: &dyn RealFn,
    iv: Interval,
    grid: usize,
) -> Result<Option<f64>, Abort> {
    for x in grid_points(iv, grid) {
        if f.eval(x)? <= 0.0 {
            return Ok(Some(x));
        }
    }
    Ok(None)
}

/// Resolve a bound constant: use the supplied value, otherwise estimate it.
/// Records the appropriate hypothesis tag under `name`.
pub(crate) fn resolve_bound(
    audit: &mut Audit,
    name: &str,
    supplied: Option<Bound>,
    grid: usize,
    estimate: impl FnOnce() -> Result<f64, Abort>,
) -> Result<Bound, Abort> {
    match supplied {
        Some(b) => Ok(b),
        None => {
            let v = estimate()?;
            audit.push(format!("{name} estimated from {grid}-point grid"), HypStatus::Estimated);
            Ok(Bound::estimated(v, grid))
        }
    }
}

/// Check a supplied-or-estimated lower/upper bound pair actually brackets f
/// on the sampled grid; records violations.
pub(crate) fn audit_bracket(
    audit: &mut Audit,
    name: &str,
    f: &dyn RealFn,
    iv: Interval,
    lower: Bound,
    upper: Bound,
    grid: usize,
    nodes: &[f64],
) -> Result<(), Abort> {
    if lower.value > upper.value {
        audit.violated(
            format!("{name}: lower <= upper"),
            format!("{} > {}", lower.value, upper.value),
        );
        return Ok(());
    }
    let (lo, hi) = range_with_nodes(f, iv, grid, nodes)?;
    let pad = 1e-12 * 1f64.max(lo.abs()).max(hi.abs());
    if lower.value <= lo + pad && hi <= upper.value + pad {
        audit.satisfied(format!("{name}: bounds bracket sampled range"));
    } else {
        audit.violated(
            format!("{name}: bounds bracket sampled range"),
            format!("sampled range [{lo}, {hi}] escapes [{}, {}]", lower.value, upper.value),
        );
    }
    Ok(())
}

// re-exported inputs used by dispatch
#[derive(Clone, Copy)]
pub struct CheckInput<'a> {
    pub f: &'a dyn RealFn,
    pub g: Option<&'a dyn RealFn>,
    pub q: QParam,
    pub jkind: Option<JKind>,
    pub iv: Option<Interval>,
    pub params: HypothesisParams,
    pub pair: Option<ConjugatePair>,
    pub p: Option<f64>,
}

/// Uniform entry point over the whole registry; used by the CLI and the
/// randomized suites. Validates that the supplied kind is one the theorem
/// permits.
pub fn check(
    id: InequalityId,
    input: &CheckInput<'_>,
    opts: &CheckOptions,
) -> Result<InequalityVerdict, DispatchError> {
    let need_g = |err: &'static str| -> Result<&dyn RealFn, DispatchError> {
        input.g.ok_or(DispatchError::MissingInput(id.name(), err))
    };
    let jk = || -> Result<JKind, DispatchError> {
        match input.jkind {
            Some(k) => Ok(k),
            None => Err(match input.iv {
                Some(_) => DispatchError::KindNotPermitted(id.name(), "jackson-ab".into()),
                None => DispatchError::MissingInput(id.name(), "integral kind"),
            }),
        }
    };
    let ab = || -> Result<Interval, DispatchError> {
        match input.iv {
            Some(iv) => Ok(iv),
            None => Err(match input.jkind {
                Some(k) => DispatchError::KindNotPermitted(id.name(), k.describe()),
                None => DispatchError::MissingInput(id.name(), "interval [a,b]"),
            }),
        }
    };
    let pair = || -> Result<ConjugatePair, DispatchError> {
        match input.pair {
            Some(p) => Ok(p),
            None => Ok(ConjugatePair::new(2.0, 2.0).expect("2,2 conjugate")),
        }
    };
    let p_of = |default: Option<f64>| -> Result<f64, DispatchError> {
        input
            .p
            .or(default)
            .ok_or(DispatchError::MissingInput(id.name(), "power p"))
    };

    let v = match id {
        InequalityId::Chebyshev31 => {
            check_chebyshev(input.f, need_g("g")?, jk()?, input.q, opts)
        }
        InequalityId::ChebyshevAbA => {
            check_chebyshev_ab_bounds(input.f, need_g("g")?, ab()?, input.q, &input.params, opts).0
        }
        InequalityId::ChebyshevAbB => {
            check_chebyshev_ab_bounds(input.f, need_g("g")?, ab()?, input.q, &input.params, opts).1
        }
        InequalityId::Gruss41 => {
            check_gruss(input.f, need_g("g")?, jk()?, input.q, &input.params, opts)
        }
        InequalityId::GrussAb42 => {
            check_gruss_ab(input.f, need_g("g")?, ab()?, input.q, &input.params, opts)
        }
        InequalityId::HhRestricted51 => {
            let k = jk()?;
            match k {
                JKind::Restricted { b, n } => check_hermite_hadamard(
                    input.f,
                    HhVariant::Restricted { b, n },
                    input.q,
                    &input.params,
                    opts,
                ),
                other => return Err(DispatchError::KindNotPermitted(id.name(), other.describe())),
            }
        }
        InequalityId::HhJackson052 => {
            let k = jk()?;
            match k {
                JKind::Jackson0 { b } => check_hermite_hadamard(
                    input.f,
                    HhVariant::Jackson0 { b },
                    input.q,
                    &input.params,
                    opts,
                ),
                other => return Err(DispatchError::KindNotPermitted(id.name(), other.describe())),
            }
        }
        InequalityId::HhRiemann53 => {
            let k = jk()?;
            match k {
                JKind::RiemannType { a, b } => check_hermite_hadamard(
                    input.f,
                    HhVariant::RiemannType { a, b },
                    input.q,
                    &input.params,
                    opts,
                ),
                other => return Err(DispatchError::KindNotPermitted(id.name(), other.describe())),
            }
        }
        InequalityId::HhJacksonAb55 => {
            let iv = ab()?;
            check_hermite_hadamard(
                input.f,
                HhVariant::JacksonAb { a: iv.a, b: iv.b },
                input.q,
                &input.params,
                opts,
            )
        }
        InequalityId::HhCor56 => {
            let iv = ab()?;
            check_hermite_hadamard(
                input.f,
                HhVariant::Corollary { a: iv.a, b: iv.b },
                input.q,
                &input.params,
                opts,
            )
        }
        InequalityId::Young61I
        | InequalityId::Young61Ii
        | InequalityId::Young61Iii
        | InequalityId::Young61Iv
        | InequalityId::Young62I
        | InequalityId::Young62Ii
        | InequalityId::Young62Iii => {
            check_young_family(id, input.f, need_g("g")?, jk()?, input.q, pair()?, opts)
        }
        InequalityId::Cassels63I
        | InequalityId::Cassels63Ii
        | InequalityId::Cassels63Iii
        | InequalityId::Bounded64I
        | InequalityId::Bounded64Ii
        | InequalityId::Bounded64Iii => check_ratio_family(
            id,
            input.f,
            Some(need_g("g")?),
            jk()?,
            input.q,
            &input.params,
            opts,
        ),
        InequalityId::SchwarzCor65 => {
            check_ratio_family(id, input.f, None, jk()?, input.q, &input.params, opts)
        }
        InequalityId::JensenPower66 => check_jensen_power(
            id,
            input.f,
            Some(need_g("g")?),
            jk()?,
            input.q,
            p_of(None)?,
            opts,
        ),
        InequalityId::PowerMeanCor67 => {
            check_jensen_power(id, input.f, None, jk()?, input.q, p_of(None)?, opts)
        }
        InequalityId::LahRibaric68 => check_lah_ribaric(
            id,
            input.f,
            need_g("g")?,
            jk()?,
            input.q,
            p_of(None)?,
            &input.params,
            opts,
        ),
        InequalityId::LahRibaric68P2 => check_lah_ribaric(
            id,
            input.f,
            need_g("g")?,
            jk()?,
            input.q,
            2.0,
            &input.params,
            opts,
        ),
    };
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::QParam;

    fn q(v: f64) -> QParam {
        QParam::new(v).unwrap()
    }

    fn affine(c: f64) -> impl RealFn {
        move |x: f64| Ok(x + c)
    }

    fn jkind_for(id: InequalityId) -> Option<JKind> {
        if !id.takes_jkind() {
            return None;
        }
        Some(match id {
            InequalityId::HhRestricted51 => JKind::Restricted { b: 1.0, n: 2 },
            InequalityId::HhRiemann53 => JKind::RiemannType { a: 0.5, b: 1.0 },
            _ => JKind::Jackson0 { b: 1.0 },
        })
    }

    #[test]
    fn registry_is_total_and_holds_on_a_nice_pair() {
        let f = affine(1.0);
        let g = affine(2.0);
        for id in InequalityId::ALL {
            let input = CheckInput {
                f: &f,
                g: Some(&g),
                q: q(0.5),
                jkind: jkind_for(id),
                iv: if id.takes_jkind() { None } else { Some(Interval::new(1.0, 2.0).unwrap()) },
                params: HypothesisParams::default(),
                pair: None,
                p: Some(2.0),
            };
            let v = check(id, &input, &CheckOptions::default()).unwrap();
            assert_eq!(v.id, id);
            assert_eq!(v.verdict, Verdict::Holds, "{} gave {:?}", id.name(), v);
            assert!(!v.hypotheses.is_empty(), "{} reported no hypotheses", id.name());
        }
    }

    #[test]
    fn names_round_trip() {
        for id in InequalityId::ALL {
            assert_eq!(InequalityId::from_name(id.name()), Some(id));
        }
        assert_eq!(InequalityId::from_name("nope"), None);
    }

    #[test]
    fn jackson_ab_kind_rejected_where_theorem_excludes_it() {
        let f = affine(1.0);
        let g = affine(2.0);
        let input = CheckInput {
            f: &f,
            g: Some(&g),
            q: q(0.5),
            jkind: None,
            iv: Some(Interval::new(1.0, 2.0).unwrap()),
            params: HypothesisParams::default(),
            pair: None,
            p: Some(2.0),
        };
        let err = check(InequalityId::Chebyshev31, &input, &CheckOptions::default()).unwrap_err();
        assert!(matches!(err, DispatchError::KindNotPermitted(..)));
    }

    #[test]
    fn jkind_rejected_for_interval_difference_theorems() {
        let f = affine(1.0);
        let g = affine(2.0);
        let input = CheckInput {
            f: &f,
            g: Some(&g),
            q: q(0.5),
            jkind: Some(JKind::Jackson0 { b: 1.0 }),
            iv: None,
            params: HypothesisParams::default(),
            pair: None,
            p: None,
        };
        let err = check(InequalityId::HhJacksonAb55, &input, &CheckOptions::default()).unwrap_err();
        assert!(matches!(err, DispatchError::KindNotPermitted(..)));
    }

    #[test]
    fn hh_variant_requires_matching_kind() {
        let f = affine(1.0);
        let input = CheckInput {
            f: &f,
            g: None,
            q: q(0.5),
            jkind: Some(JKind::Jackson0 { b: 1.0 }),
            iv: None,
            params: HypothesisParams::default(),
            pair: None,
            p: None,
        };
        let err = check(InequalityId::HhRestricted51, &input, &CheckOptions::default()).unwrap_err();
        assert!(matches!(err, DispatchError::KindNotPermitted(..)));
    }

    #[test]
    fn missing_g_is_reported() {
        let f = affine(1.0);
        let input = CheckInput {
            f: &f,
            g: None,
            q: q(0.5),
            jkind: Some(JKind::Jackson0 { b: 1.0 }),
            iv: None,
            params: HypothesisParams::default(),
            pair: None,
            p: None,
        };
        let err = check(InequalityId::Gruss41, &input, &CheckOptions::default()).unwrap_err();
        assert!(matches!(err, DispatchError::MissingInput(..)));
    }
}
