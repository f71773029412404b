//! Built-in verification suites. The "paper" suite re-derives every worked
//! example and oracle identity deterministically (no RNG, no timestamps, so
//! its output is byte-stable). The property suite hammers the whole
//! inequality registry with seeded random catalog instances; a Fails verdict
//! on satisfied hypotheses means an implementation bug.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::catalog::CatalogFn;
use crate::expr;
use crate::ineq::{
    check, check_gruss, check_hermite_hadamard, chebyshev_ab_difference, gruss_ab_difference,
    CheckInput, CheckOptions, HhVariant, InequalityId, JKind, Verdict,
};
use crate::integrate::{
    classical_integral, integrate, monomial_closed_form, verify_correlations, IntegralKind,
    IntegralStatus, TruncationPolicy,
};
use crate::qcore::{product, q_bracket, ConjugatePair, HypothesisParams, Interval, QParam, RealFn};
use crate::report::fmt_g;
use crate::search::{find_counterexample, sweep, SweepPoint, SweepSpec};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteCheck {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub results: Vec<SuiteCheck>,
    pub passed: usize,
    pub failed: usize,
}

impl SuiteReport {
    fn assemble(suite: &str, results: Vec<SuiteCheck>) -> SuiteReport {
        let passed = results.iter().filter(|r| r.pass).count();
        let failed = results.len() - passed;
        SuiteReport { suite: suite.to_string(), results, passed, failed }
    }

    pub fn all_pass(&self) -> bool {
        self.failed == 0
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.results {
            let tag = if r.pass { "PASS" } else { "FAIL" };
            out.push_str(&format!("{tag} {}: {}\n", r.name, r.detail));
        }
        out.push_str(&format!(
            "suite {}: {} passed, {} failed\n",
            self.suite, self.passed, self.failed
        ));
        out
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("suite serializes");
        s.push('\n');
        s
    }
}

fn check_item(name: &str, pass: bool, detail: String) -> SuiteCheck {
    SuiteCheck { name: name.to_string(), pass, detail }
}

fn qp(v: f64) -> QParam {
    QParam::new(v).expect("q in (0,1)")
}

// ------------------------------------------------------------- paper suite

pub fn run_paper_suite() -> SuiteReport {
    let results = vec![
        monomial_oracle(),
        correlation_identities(),
        example_31_closed_form(),
        example_31_threshold(),
        example_41_series_oracle(),
        example_41_resolved_sign(),
        example_41_root(),
        example_41_bound_boundary(),
        log_domain_error(),
        q_to_one_classical_limit(),
        restricted_convergence_n60(),
        hermite_hadamard_spots(),
        chebyshev_gruss_spots(),
    ];
    SuiteReport::assemble("paper", results)
}

fn monomial_oracle() -> SuiteCheck {
    let pol = TruncationPolicy::default();
    let ivs = [(0.0, 1.0), (1.0, 2.0), (0.5, 3.0)];
    let mut worst = 0.0f64;
    let mut cases = 0usize;
    for n in 0..=8u32 {
        for qi in 1..=9 {
            let q = qp(qi as f64 / 10.0);
            for (a, b) in ivs {
                let iv = Interval::new(a, b).expect("interval");
                let f = |x: f64| Ok(x.powi(n as i32));
                let got = integrate(&f, IntegralKind::JacksonAb { a, b }, q, &pol)
                    .ok()
                    .expect("monomial integrates");
                let want = monomial_closed_form(n, iv, q);
                let rel = (got - want).abs() / 1f64.max(want.abs());
                worst = worst.max(rel);
                cases += 1;
            }
        }
    }
    check_item(
        "monomial_closed_form_oracle",
        worst <= 1e-10,
        format!("{cases} cases, worst relative error {}", fmt_g(worst)),
    )
}

fn correlation_identities() -> SuiteCheck {
    let pol = TruncationPolicy::default();
    let fs: [&dyn RealFn; 4] = [
        &(|x: f64| Ok(x)),
        &(|x: f64| Ok(x * x)),
        &(|x: f64| Ok(x.exp())),
        &(|x: f64| Ok(x + 1.0)),
    ];
    let gs: [&dyn RealFn; 2] = [&(|x: f64| Ok(x * x)), &(|x: f64| Ok(x.powi(3)))];
    let mut relations = 0usize;
    let mut failures = 0usize;
    for f in fs {
        for g in gs {
            for qv in [0.3f64, 0.5, 0.8] {
                // depth at which the restricted sum's tail q^n drops below
                // the relation tolerance
                let n_max = (1e-12f64.ln() / qv.ln()).ceil() as u32 + 10;
                for (a, b) in [(1.0, 2.0), (0.5, 3.0)] {
                    let iv = Interval::new(a, b).expect("interval");
                    let report = verify_correlations(f, Some(g), iv, qp(qv), n_max, &pol);
                    relations += report.relations.len();
                    if !report.all_pass() {
                        failures += 1;
                    }
                }
            }
        }
    }
    check_item(
        "correlation_identities",
        failures == 0,
        format!("{relations} relations across 48 input combinations, {failures} failing"),
    )
}

fn example_31_closed() -> impl Fn(f64) -> f64 {
    |q: f64| {
        255.0 * (1.0 - q) / (1.0 - q.powi(8))
            - 465.0 * (1.0 - q) * (1.0 - q) / ((1.0 - q.powi(4)) * (1.0 - q.powi(5)))
    }
}

fn example_31_difference(qv: f64) -> Option<f64> {
    let cube = |x: f64| Ok(x.powi(3));
    let quart = |x: f64| Ok(x.powi(4));
    let iv = Interval::new(1.0, 2.0).expect("interval");
    chebyshev_ab_difference(&cube, &quart, iv, QParam::new(qv).ok()?, &TruncationPolicy::default())
        .ok()
}

fn example_31_closed_form() -> SuiteCheck {
    let closed = example_31_closed();
    let mut worst = 0.0f64;
    for qi in 1..=9 {
        let qv = qi as f64 / 10.0;
        let got = example_31_difference(qv).expect("series converges");
        let want = closed(qv);
        worst = worst.max((got - want).abs() / 1f64.max(want.abs()));
    }
    check_item(
        "example_31_closed_form",
        worst <= 1e-10,
        format!("9 grid points, worst relative error {}", fmt_g(worst)),
    )
}

fn example_31_threshold() -> SuiteCheck {
    let spec = SweepSpec { lo: 0.05, hi: 0.95, steps: 19, bisect_sign_changes: true, bisect_tol: 1e-6 };
    let report = sweep(&spec, &|qv| example_31_difference(qv).map(SweepPoint::from_difference))
        .expect("valid spec");
    let pass = report.thresholds.len() == 1
        && (report.thresholds[0].location - 0.5).abs() <= 1e-6;
    let loc = report.thresholds.first().map(|t| fmt_g(t.location)).unwrap_or_else(|| "-".into());
    check_item(
        "example_31_threshold",
        pass,
        format!("{} threshold(s), sign change at q = {loc}", report.thresholds.len()),
    )
}

fn example_41_difference(qv: f64) -> Option<f64> {
    let f = |x: f64| Ok(x);
    let g = |x: f64| Ok(x * x);
    let iv = Interval::new(1.0, 2.0).expect("interval");
    gruss_ab_difference(&f, &g, iv, QParam::new(qv).ok()?, &TruncationPolicy::default()).ok()
}

fn example_41_series_oracle() -> SuiteCheck {
    // closed form 15/[4]_q - 21/([2]_q [3]_q) from the monomial integrals
    let mut worst = 0.0f64;
    for qi in 1..=9 {
        let qv = qi as f64 / 10.0;
        let q = qp(qv);
        let want = 15.0 / q_bracket(4, q) - 21.0 / (q_bracket(2, q) * q_bracket(3, q));
        let got = example_41_difference(qv).expect("series converges");
        worst = worst.max((got - want).abs() / 1f64.max(want.abs()));
    }
    check_item(
        "example_41_series_oracle",
        worst <= 1e-10,
        format!("9 grid points, worst relative error {}", fmt_g(worst)),
    )
}

fn example_41_resolved_sign() -> SuiteCheck {
    // the printed factored form needs a sign flip to match the series:
    // difference(q) = -3(2-q)(1-2q) / ((1+q)(1+q^2)(1+q+q^2))
    let resolved = |q: f64| {
        -3.0 * (2.0 - q) * (1.0 - 2.0 * q)
            / ((1.0 + q) * (1.0 + q * q) * (1.0 + q + q * q))
    };
    let mut ok = true;
    let mut worst = 0.0f64;
    for qv in [0.2, 0.5, 0.8] {
        let got = example_41_difference(qv).expect("series converges");
        let want = resolved(qv);
        let err = (got - want).abs() / 1f64.max(want.abs());
        worst = worst.max(err);
        ok &= err <= 1e-10;
    }
    // and therefore the difference is negative below 1/2, not positive
    ok &= example_41_difference(0.2).unwrap() < 0.0 && example_41_difference(0.8).unwrap() > 0.0;
    check_item(
        "example_41_resolved_sign",
        ok,
        format!(
            "factored form holds with leading sign -3(2-q)(1-2q)/..., worst relative error {}",
            fmt_g(worst)
        ),
    )
}

fn example_41_root() -> SuiteCheck {
    let spec = SweepSpec { lo: 0.05, hi: 0.95, steps: 19, bisect_sign_changes: true, bisect_tol: 1e-6 };
    let report = sweep(&spec, &|qv| example_41_difference(qv).map(SweepPoint::from_difference))
        .expect("valid spec");
    let pass = report.thresholds.len() == 1
        && (report.thresholds[0].location - 0.5).abs() <= 1e-6;
    let loc = report.thresholds.first().map(|t| fmt_g(t.location)).unwrap_or_else(|| "-".into());
    check_item(
        "example_41_root",
        pass,
        format!("{} root(s), located at q = {loc}", report.thresholds.len()),
    )
}

/// Slack of the plain (uninflated) covariance bound with m=1, M=2,
/// phi=1, Phi=4 applied naively to I_q(.; 1, 2).
fn example_41_naive_bound_slack(qv: f64) -> Option<f64> {
    let f = |x: f64| Ok(x);
    let g = |x: f64| Ok(x * x);
    let iv = Interval::new(1.0, 2.0).expect("interval");
    let q = QParam::new(qv).ok()?;
    let pol = TruncationPolicy::default();
    let fg = product(&f, &g);
    let ifg = integrate(&fg, IntegralKind::JacksonAb { a: 1.0, b: 2.0 }, q, &pol).ok().ok()?;
    let i_f = integrate(&f, IntegralKind::JacksonAb { a: 1.0, b: 2.0 }, q, &pol).ok().ok()?;
    let i_g = integrate(&g, IntegralKind::JacksonAb { a: 1.0, b: 2.0 }, q, &pol).ok().ok()?;
    let w = iv.width();
    let lhs = (ifg / w - i_f * i_g / (w * w)).abs();
    let rhs = 0.25 * (2.0 - 1.0) * (4.0 - 1.0);
    Some(rhs - lhs)
}

fn example_41_bound_boundary() -> SuiteCheck {
    let grid: Vec<f64> = (1..=19).map(|i| i as f64 / 20.0).collect();
    match find_counterexample(&grid, 1e-6, &|qv| {
        example_41_naive_bound_slack(qv).map(SweepPoint::from_difference)
    }) {
        Some(ce) => {
            let boundary = ce.boundary.as_ref().map(|t| t.location);
            // the claimed violation region is (0, 1/3); the numerically
            // found boundary sits near 0.3336 and is reported, not asserted
            let pass = ce.witness < 1.0 / 3.0
                && boundary.is_some_and(|b| (0.25..0.45).contains(&b));
            let b = boundary.map(fmt_g).unwrap_or_else(|| "-".into());
            check_item(
                "example_41_bound_boundary",
                pass,
                format!(
                    "bound with m=1, M=2, phi=1, Phi=4 fails at q = {}, boundary at q = {b}",
                    fmt_g(ce.witness)
                ),
            )
        }
        None => check_item(
            "example_41_bound_boundary",
            false,
            "no violation found in (0, 1)".to_string(),
        ),
    }
}

fn log_domain_error() -> SuiteCheck {
    let pol = TruncationPolicy::default();
    let expr = expr::parse("ln(x - 1)").expect("parses");
    let q = qp(0.5);
    let ab = integrate(&expr, IntegralKind::JacksonAb { a: 2.0, b: 3.0 }, q, &pol);
    let ab_ok = match &ab.status {
        IntegralStatus::DomainError { point, .. } => (0.0..2.0).contains(point),
        _ => false,
    };
    let riemann = integrate(&expr, IntegralKind::RiemannType { a: 2.0, b: 3.0 }, q, &pol);
    let riemann_ok = matches!(riemann.status, IntegralStatus::Converged);
    let point = match &ab.status {
        IntegralStatus::DomainError { point, .. } => fmt_g(*point),
        _ => "-".into(),
    };
    check_item(
        "log_shifted_domain_error",
        ab_ok && riemann_ok,
        format!(
            "interval-difference form fails at x = {point}; in-interval form converges to {}",
            fmt_g(riemann.value)
        ),
    )
}

fn q_to_one_classical_limit() -> SuiteCheck {
    let pol = TruncationPolicy::default();
    let fs: [(&str, &dyn RealFn); 3] = [
        ("x^2", &(|x: f64| Ok(x * x))),
        ("exp(x)", &(|x: f64| Ok(x.exp()))),
        ("sin(x)", &(|x: f64| Ok(x.sin()))),
    ];
    let iv = Interval::new(0.0, 2.0).expect("interval");
    let mut ok = true;
    let mut details = Vec::new();
    for (name, f) in fs {
        let res = integrate(f, IntegralKind::Jackson0 { b: 2.0 }, qp(0.999), &pol);
        let got = res.ok().expect("converges");
        let want = classical_integral(f, iv, 1e-10).expect("smooth integrand");
        let err = (got - want).abs();
        ok &= err <= 5e-3 && res.terms_used < 50_000;
        details.push(format!("{name}: |diff| = {}, {} terms", fmt_g(err), res.terms_used));
    }
    check_item("q_to_one_classical_limit", ok, details.join("; "))
}

fn restricted_convergence_n60() -> SuiteCheck {
    let pol = TruncationPolicy::default();
    let f = |x: f64| Ok(x.exp());
    let q = qp(0.5);
    let i = integrate(&f, IntegralKind::Jackson0 { b: 1.0 }, q, &pol).ok().expect("converges");
    let g60 = integrate(&f, IntegralKind::Restricted { b: 1.0, n: 60 }, q, &pol)
        .ok()
        .expect("finite sum");
    let err = (g60 - i).abs();
    check_item(
        "restricted_convergence_n60",
        err <= 1e-8,
        format!("|G(60) - I| = {}", fmt_g(err)),
    )
}

fn hermite_hadamard_spots() -> SuiteCheck {
    let sq = |x: f64| Ok(x * x);
    let opts = CheckOptions::default();
    let params = HypothesisParams::default();
    let r = check_hermite_hadamard(&sq, HhVariant::Restricted { b: 1.0, n: 2 }, qp(0.5), &params, &opts);
    let rm = check_hermite_hadamard(&sq, HhVariant::RiemannType { a: 1.0, b: 2.0 }, qp(0.5), &params, &opts);
    let restricted_ok = r.verdict == Verdict::Holds
        && (r.sides[0].lhs - 0.6944444444444444).abs() < 1e-10
        && (r.sides[0].rhs - 0.75).abs() < 1e-10
        && r.sides[1].slack.abs() <= r.tolerance;
    let riemann_ok = rm.verdict == Verdict::Holds
        && (rm.sides[0].rhs - 2.9047619047619047).abs() < 1e-9
        && (rm.sides[1].rhs - 3.0).abs() < 1e-12;
    check_item(
        "hermite_hadamard_spots",
        restricted_ok && riemann_ok,
        format!(
            "restricted: {} <= {} <= {}; in-interval: {} <= {} <= {}",
            fmt_g(r.sides[0].lhs),
            fmt_g(r.sides[0].rhs),
            fmt_g(r.sides[1].rhs),
            fmt_g(rm.sides[0].lhs),
            fmt_g(rm.sides[0].rhs),
            fmt_g(rm.sides[1].rhs)
        ),
    )
}

fn chebyshev_gruss_spots() -> SuiteCheck {
    let opts = CheckOptions::default();
    let f = |x: f64| Ok(x);
    let g = |x: f64| Ok(x * x);
    let input = CheckInput {
        f: &f,
        g: Some(&f),
        q: qp(0.5),
        jkind: Some(JKind::Jackson0 { b: 1.0 }),
        iv: None,
        params: HypothesisParams::default(),
        pair: None,
        p: None,
    };
    let cheb = check(InequalityId::Chebyshev31, &input, &opts).expect("dispatch");
    let cheb_ok = cheb.verdict == Verdict::Holds
        && (cheb.slack - 0.12698412698412698).abs() < 1e-10;
    let gruss = check_gruss(
        &f,
        &g,
        JKind::Jackson0 { b: 1.0 },
        qp(0.5),
        &HypothesisParams::default(),
        &opts,
    );
    let gruss_ok = gruss.verdict == Verdict::Holds
        && (gruss.lhs - 0.15238095238095237).abs() < 1e-10
        && (gruss.rhs - 0.25).abs() < 1e-12;
    check_item(
        "chebyshev_gruss_spots",
        cheb_ok && gruss_ok,
        format!(
            "chebyshev slack {}; covariance defect {} within bound {}",
            fmt_g(cheb.slack),
            fmt_g(gruss.lhs),
            fmt_g(gruss.rhs)
        ),
    )
}

// ---------------------------------------------------------- property suite

pub const PROPERTY_INSTANCES_PER_ID: usize = 500;

fn draw_jkind(rng: &mut ChaCha8Rng, id: InequalityId) -> JKind {
    let b = rng.gen_range(0.5..2.5);
    match id {
        InequalityId::HhRestricted51 => JKind::Restricted { b, n: rng.gen_range(1..=6) },
        InequalityId::HhJackson052 => JKind::Jackson0 { b },
        InequalityId::HhRiemann53 => JKind::RiemannType { a: rng.gen_range(0.1..0.7) * b, b },
        _ => match rng.gen_range(0..3) {
            0 => JKind::Jackson0 { b },
            1 => JKind::Restricted { b, n: rng.gen_range(1..=6) },
            _ => JKind::RiemannType { a: rng.gen_range(0.1..0.7) * b, b },
        },
    }
}

fn draw_interval(rng: &mut ChaCha8Rng) -> Interval {
    let a = rng.gen_range(0.1..1.0);
    let b = a + rng.gen_range(0.5..1.5);
    Interval::new(a, b).expect("a < b")
}

fn draw_pair(rng: &mut ChaCha8Rng) -> ConjugatePair {
    let alpha: f64 = rng.gen_range(1.3..3.5);
    ConjugatePair::new(alpha, alpha / (alpha - 1.0)).expect("conjugate by construction")
}

fn draw_p(rng: &mut ChaCha8Rng) -> f64 {
    *[-1.5, -1.0, 0.5, 0.75, 1.0, 2.0, 2.5, 3.0]
        .iter()
        .nth(rng.gen_range(0..8))
        .expect("index in range")
}

fn property_run_for(id: InequalityId, rng: &mut ChaCha8Rng, per_id: usize) -> SuiteCheck {
    let opts = CheckOptions::default();
    let mut decided = 0usize;
    let mut fails = 0usize;
    let mut skipped = 0usize;
    let mut attempts = 0usize;
    let max_attempts = per_id * 40;
    let mut first_failure = String::new();
    while decided < per_id && attempts < max_attempts {
        attempts += 1;
        let f = CatalogFn::random(rng);
        let g = CatalogFn::random(rng);
        let q = qp(rng.gen_range(0.15..0.85));
        let (jkind, iv) = if id.takes_jkind() {
            (Some(draw_jkind(rng, id)), None)
        } else {
            (None, Some(draw_interval(rng)))
        };
        let input = CheckInput {
            f: &f,
            g: Some(&g),
            q,
            jkind,
            iv,
            params: HypothesisParams::default(),
            pair: Some(draw_pair(rng)),
            p: Some(draw_p(rng)),
        };
        let v = check(id, &input, &opts).expect("inputs match the id's kind");
        match v.verdict {
            Verdict::Holds => decided += 1,
            Verdict::Fails => {
                decided += 1;
                fails += 1;
                if first_failure.is_empty() {
                    first_failure = format!(
                        " first failure: f = {f}, g = {g}, q = {}, {}, slack = {}",
                        fmt_g(q.get()),
                        v.integral_kind,
                        fmt_g(v.slack)
                    );
                }
            }
            Verdict::Vacuous | Verdict::Untestable => skipped += 1,
        }
    }
    check_item(
        &format!("property_{}", id.name()),
        fails == 0 && decided >= per_id,
        format!("{decided} hypothesis-satisfying instances, {fails} fails, {skipped} skipped{first_failure}"),
    )
}

fn equality_cases() -> SuiteCheck {
    let opts = CheckOptions::default();
    let one = CatalogFn::constant(1.0);
    let aff = CatalogFn::AffinePlus(1.0);
    let aff2 = CatalogFn::Poly(vec![2.0, 2.0]);
    let jk = JKind::Jackson0 { b: 1.0 };
    let q = qp(0.5);
    fn base<'a>(
        f: &'a dyn RealFn,
        g: Option<&'a dyn RealFn>,
        p: Option<f64>,
        jk: JKind,
        q: QParam,
    ) -> CheckInput<'a> {
        CheckInput {
            f,
            g,
            q,
            jkind: Some(jk),
            iv: None,
            params: HypothesisParams::default(),
            pair: Some(ConjugatePair::new(2.0, 2.0).expect("2,2 conjugate")),
            p,
        }
    }
    let cases: Vec<(InequalityId, CheckInput)> = vec![
        (InequalityId::Chebyshev31, base(&one, Some(&one), None, jk, q)),
        (InequalityId::Gruss41, base(&one, Some(&one), None, jk, q)),
        (InequalityId::Young61Ii, base(&aff, Some(&aff), None, jk, q)),
        (InequalityId::Young62Iii, base(&one, Some(&one), None, jk, q)),
        (InequalityId::Cassels63I, base(&aff, Some(&aff2), None, jk, q)),
        (InequalityId::JensenPower66, base(&aff, Some(&aff2), Some(1.0), jk, q)),
        (InequalityId::PowerMeanCor67, base(&aff, None, Some(1.0), jk, q)),
        (InequalityId::LahRibaric68, base(&aff, Some(&aff), Some(3.0), jk, q)),
    ];
    let mut ok = true;
    let mut worst = 0.0f64;
    let count = cases.len();
    for (id, input) in cases {
        let v = check(id, &input, &opts).expect("dispatch");
        ok &= v.verdict == Verdict::Holds && v.slack.abs() <= v.tolerance;
        worst = worst.max(v.slack.abs());
    }
    check_item(
        "property_equality_cases",
        ok,
        format!("{count} constructed equality cases, worst |slack| = {}", fmt_g(worst)),
    )
}

pub fn run_property_suite(seed: u64, per_id: usize) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut results: Vec<SuiteCheck> = InequalityId::ALL
        .iter()
        .map(|&id| property_run_for(id, &mut rng, per_id))
        .collect();
    results.push(equality_cases());
    SuiteReport::assemble("property", results)
}
