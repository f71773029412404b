//! Parameter sweeps with sign-change bisection. A sweep evaluates a target
//! at uniformly spaced parameter values and refines every slack sign change
//! between adjacent successful rows down to a requested bracket width.

use serde::Serialize;
use thiserror::Error;

use crate::report::{csv_row, fmt_g, CSV_HEADER};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
    pub bisect_sign_changes: bool,
    pub bisect_tol: f64,
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum SweepError {
    #[error("sweep needs at least 2 steps, got {0}")]
    TooFewSteps(usize),
    #[error("sweep range [{0}, {1}] is empty or reversed")]
    BadRange(f64, f64),
    #[error("bisect tolerance must be positive, got {0}")]
    BadTol(f64),
}

impl SweepSpec {
    pub fn validate(&self) -> Result<(), SweepError> {
        if self.steps < 2 {
            return Err(SweepError::TooFewSteps(self.steps));
        }
        if !(self.lo < self.hi) {
            return Err(SweepError::BadRange(self.lo, self.hi));
        }
        if !(self.bisect_tol > 0.0) {
            return Err(SweepError::BadTol(self.bisect_tol));
        }
        Ok(())
    }
}

/// One evaluated target point. For bound comparisons lhs/rhs are the two
/// sides and slack is oriented so >= 0 means the bound holds; for raw
/// difference functionals rhs = 0 and slack is the difference itself.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepPoint {
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub verdict: String,
}

impl SweepPoint {
    pub fn from_difference(value: f64) -> SweepPoint {
        SweepPoint {
            lhs: value,
            rhs: 0.0,
            slack: value,
            verdict: if value >= 0.0 { "HOLDS" } else { "FAILS" }.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub param: f64,
    #[serde(flatten)]
    pub point: SweepPoint,
}

/// A bisected slack sign change: slack(lo) and slack(hi) have opposite
/// signs and hi - lo <= bisect_tol.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Threshold {
    pub lo: f64,
    pub hi: f64,
    pub location: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSummary {
    pub holds: usize,
    pub fails: usize,
    pub untestable: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
    pub thresholds: Vec<Threshold>,
    pub summary: SweepSummary,
}

impl SweepReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            out.push_str(&csv_row(r.param, r.point.lhs, r.point.rhs, r.point.slack, &r.point.verdict));
            out.push('\n');
        }
        for t in &self.thresholds {
            out.push_str(&format!(
                "threshold,{},{},{},THRESHOLD\n",
                fmt_g(t.lo),
                fmt_g(t.hi),
                fmt_g(t.location)
            ));
        }
        out
    }
}

/// Evaluator contract: None marks the point Untestable; such rows are kept
/// in the report but excluded from bracketing.
pub fn sweep(
    spec: &SweepSpec,
    eval: &dyn Fn(f64) -> Option<SweepPoint>,
) -> Result<SweepReport, SweepError> {
    spec.validate()?;
    let n = spec.steps;
    let mut rows = Vec::with_capacity(n);
    let mut summary = SweepSummary { holds: 0, fails: 0, untestable: 0 };
    for i in 0..n {
        let param = spec.lo + (spec.hi - spec.lo) * (i as f64) / ((n - 1) as f64);
        let point = match eval(param) {
            Some(p) => {
                if p.slack >= 0.0 {
                    summary.holds += 1;
                } else {
                    summary.fails += 1;
                }
                p
            }
            None => {
                summary.untestable += 1;
                SweepPoint {
                    lhs: f64::NAN,
                    rhs: f64::NAN,
                    slack: f64::NAN,
                    verdict: "UNTESTABLE".to_string(),
                }
            }
        };
        rows.push(SweepRow { param, point });
    }

    let mut thresholds = Vec::new();
    if spec.bisect_sign_changes {
        let ok: Vec<&SweepRow> = rows.iter().filter(|r| r.point.slack.is_finite()).collect();
        for pair in ok.windows(2) {
            let (lo, hi) = (pair[0], pair[1]);
            if lo.point.slack == 0.0 || lo.point.slack * hi.point.slack < 0.0 {
                if let Some(t) = bisect(lo.param, lo.point.slack, hi.param, hi.point.slack, spec.bisect_tol, eval)
                {
                    thresholds.push(t);
                }
            }
        }
        // an exact zero at the last grid point is a threshold too
        if let Some(last) = ok.last() {
            if last.point.slack == 0.0 {
                thresholds.push(Threshold { lo: last.param, hi: last.param, location: last.param });
            }
        }
    }
    Ok(SweepReport { rows, thresholds, summary })
}

fn bisect(
    mut lo: f64,
    mut slo: f64,
    mut hi: f64,
    mut shi: f64,
    tol: f64,
    eval: &dyn Fn(f64) -> Option<SweepPoint>,
) -> Option<Threshold> {
    debug_assert!(slo == 0.0 || slo * shi < 0.0);
    if slo == 0.0 {
        return Some(Threshold { lo, hi: lo, location: lo });
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        let smid = eval(mid)?.slack;
        if !smid.is_finite() {
            return None;
        }
        if smid == 0.0 {
            return Some(Threshold { lo: mid, hi: mid, location: mid });
        }
        if slo * smid < 0.0 {
            hi = mid;
            shi = smid;
        } else {
            lo = mid;
            slo = smid;
        }
    }
    let _ = (slo, shi);
    Some(Threshold { lo, hi, location: 0.5 * (lo + hi) })
}

/// A refined point where a naively applied inequality form fails.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Counterexample {
    pub witness: f64,
    /// Bisected boundary of the failure region, when a holding neighbor
    /// point brackets one.
    pub boundary: Option<Threshold>,
}

/// Scans the grid for the first point with negative slack; when an adjacent
/// grid point has nonnegative slack the boundary between them is bisected.
/// Untestable points are skipped.
pub fn find_counterexample(
    grid: &[f64],
    bisect_tol: f64,
    eval: &dyn Fn(f64) -> Option<SweepPoint>,
) -> Option<Counterexample> {
    let points: Vec<(f64, f64)> = grid
        .iter()
        .filter_map(|&p| eval(p).map(|pt| (p, pt.slack)))
        .filter(|(_, s)| s.is_finite())
        .collect();
    let idx = points.iter().position(|(_, s)| *s < 0.0)?;
    let witness = points[idx].0;
    let boundary = points.windows(2).find_map(|w| {
        let ((p0, s0), (p1, s1)) = (w[0], w[1]);
        if s0 == 0.0 || s0 * s1 < 0.0 {
            bisect(p0, s0, p1, s1, bisect_tol, eval)
        } else {
            None
        }
    });
    Some(Counterexample { witness, boundary })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ineq::chebyshev_ab_difference;
    use crate::integrate::TruncationPolicy;
    use crate::qcore::{Interval, QParam};

    fn spec(lo: f64, hi: f64, steps: usize) -> SweepSpec {
        SweepSpec { lo, hi, steps, bisect_sign_changes: true, bisect_tol: 1e-6 }
    }

    #[test]
    fn validation() {
        assert!(spec(0.1, 0.9, 1).validate().is_err());
        assert!(spec(0.9, 0.1, 5).validate().is_err());
        let mut s = spec(0.1, 0.9, 5);
        s.bisect_tol = 0.0;
        assert!(s.validate().is_err());
    }

    #[test]
    fn linear_slack_threshold() {
        let report = sweep(&spec(0.0, 1.0, 11), &|p| {
            Some(SweepPoint::from_difference(p - 0.37))
        })
        .unwrap();
        assert_eq!(report.rows.len(), 11);
        assert_eq!(report.thresholds.len(), 1);
        let t = &report.thresholds[0];
        assert!(t.hi - t.lo <= 1e-6);
        assert!((t.location - 0.37).abs() <= 1e-6);
        assert_eq!(report.summary.untestable, 0);
    }

    #[test]
    fn constant_target_has_no_thresholds() {
        let report = sweep(&spec(0.0, 1.0, 2), &|_| Some(SweepPoint::from_difference(1.0))).unwrap();
        assert!(report.thresholds.is_empty());
        assert_eq!(report.summary.holds, 2);
    }

    #[test]
    fn untestable_rows_break_brackets() {
        // an untestable grid point is excluded from bracketing; the sign
        // change elsewhere is still found
        let report = sweep(&spec(0.0, 1.0, 5), &|p| {
            if (p - 0.75).abs() < 0.05 {
                None
            } else {
                Some(SweepPoint::from_difference(p - 0.4))
            }
        })
        .unwrap();
        assert_eq!(report.summary.untestable, 1);
        assert_eq!(report.thresholds.len(), 1);
        assert!((report.thresholds[0].location - 0.4).abs() <= 1e-6);
    }

    #[test]
    fn example_sign_change_located_at_half() {
        let cube = |x: f64| Ok(x.powi(3));
        let quart = |x: f64| Ok(x.powi(4));
        let iv = Interval::new(1.0, 2.0).unwrap();
        let pol = TruncationPolicy::default();
        let report = sweep(&spec(0.05, 0.95, 19), &|p| {
            let q = QParam::new(p).ok()?;
            chebyshev_ab_difference(&cube, &quart, iv, q, &pol)
                .ok()
                .map(SweepPoint::from_difference)
        })
        .unwrap();
        assert_eq!(report.thresholds.len(), 1);
        assert!((report.thresholds[0].location - 0.5).abs() <= 1e-6);
    }

    #[test]
    fn counterexample_with_boundary() {
        let grid: Vec<f64> = (1..10).map(|i| i as f64 / 10.0).collect();
        let ce = find_counterexample(&grid, 1e-6, &|p| {
            Some(SweepPoint::from_difference(p - 0.5))
        })
        .unwrap();
        assert!(ce.witness < 0.5);
        let b = ce.boundary.unwrap();
        assert!((b.location - 0.5).abs() <= 1e-6);
    }

    #[test]
    fn no_counterexample_when_all_hold() {
        let grid = [0.2, 0.5, 0.8];
        assert!(find_counterexample(&grid, 1e-6, &|_| Some(SweepPoint::from_difference(1.0)))
            .is_none());
    }

    #[test]
    fn csv_shape() {
        let report = sweep(&spec(0.0, 1.0, 2), &|p| Some(SweepPoint::from_difference(p))).unwrap();
        let csv = report.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "param,lhs,rhs,slack,verdict");
        assert!(lines.next().unwrap().starts_with("0,0,0,0,"));
    }
}
