use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use qineq::expr;
use qineq::ineq::{
    check, chebyshev_ab_difference, gruss_ab_difference, CheckInput, CheckOptions, HypStatus,
    InequalityId, JKind, InequalityVerdict, Verdict,
};
use qineq::integrate::{integrate, IntegralKind, IntegralResult, IntegralStatus, TruncationPolicy};
use qineq::qcore::{Bound, ConjugatePair, HypothesisParams, Interval, QParam, RealFn};
use qineq::report::{csv_row, fmt_g, CSV_HEADER};
use qineq::reproduce::{run_paper_suite, run_property_suite, PROPERTY_INSTANCES_PER_ID};
use qineq::search::{sweep, SweepPoint, SweepSpec};

#[derive(Parser)]
#[command(name = "qineq", version, about = "q-integral evaluation and inequality checking")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a q-integral of an expression
    Eval(EvalArgs),
    /// Check one inequality from the registry and report the verdict
    Check(CheckArgs),
    /// Sweep a target quantity over q, with optional bisection of sign changes
    Sweep(SweepArgs),
    /// Run a built-in verification suite
    Reproduce(ReproduceArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindFlag {
    Jackson0,
    JacksonAb,
    Restricted,
    Riemann,
}

#[derive(Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
enum FormatFlag {
    Json,
    Csv,
    #[default]
    Text,
}

#[derive(Args)]
struct PolicyArgs {
    /// Relative truncation tolerance
    #[arg(long)]
    rtol: Option<f64>,
    /// Absolute truncation tolerance
    #[arg(long)]
    atol: Option<f64>,
    /// Series term cap (also settable via QINEQ_MAX_TERMS)
    #[arg(long)]
    max_terms: Option<u64>,
}

impl PolicyArgs {
    fn policy(&self) -> Result<TruncationPolicy, String> {
        let mut p = TruncationPolicy::default();
        if let Ok(v) = std::env::var("QINEQ_MAX_TERMS") {
            p.max_terms = v
                .parse()
                .map_err(|e| format!("QINEQ_MAX_TERMS is not a valid count: {e}"))?;
        }
        if let Some(r) = self.rtol {
            p.rtol = r;
        }
        if let Some(a) = self.atol {
            p.atol = a;
        }
        if let Some(m) = self.max_terms {
            p.max_terms = m;
        }
        Ok(p)
    }
}

#[derive(Args)]
struct EvalArgs {
    /// Integral kind
    #[arg(long, value_enum)]
    kind: KindFlag,
    /// Integrand expression, e.g. "x ^ 2 + ln(x)"
    #[arg(long)]
    f: String,
    /// Base q in (0, 1)
    #[arg(long)]
    q: f64,
    /// Upper endpoint
    #[arg(long)]
    b: f64,
    /// Lower endpoint (jackson-ab, riemann)
    #[arg(long, allow_negative_numbers = true)]
    a: Option<f64>,
    /// Truncation depth (restricted)
    #[arg(long)]
    n: Option<u32>,
    #[command(flatten)]
    policy: PolicyArgs,
    #[arg(long, value_enum, default_value_t)]
    format: FormatFlag,
}

#[derive(Args)]
struct ConstantArgs {
    #[arg(long, allow_negative_numbers = true)]
    m: Option<f64>,
    #[arg(long = "M", allow_negative_numbers = true)]
    big_m: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    phi: Option<f64>,
    #[arg(long = "Phi", allow_negative_numbers = true)]
    big_phi: Option<f64>,
    #[arg(long)]
    c: Option<f64>,
    #[arg(long = "C")]
    big_c: Option<f64>,
    #[arg(long)]
    d: Option<f64>,
    #[arg(long = "D")]
    big_d: Option<f64>,
    #[arg(long)]
    l: Option<f64>,
    #[arg(long = "L")]
    big_l: Option<f64>,
    /// Power exponent
    #[arg(long, allow_negative_numbers = true)]
    p: Option<f64>,
    /// Conjugate exponent alpha (> 1)
    #[arg(long)]
    alpha: Option<f64>,
    /// Conjugate exponent beta (derived from alpha when omitted)
    #[arg(long)]
    beta: Option<f64>,
}

impl ConstantArgs {
    fn params(&self) -> HypothesisParams {
        let b = |v: Option<f64>| v.map(Bound::supplied);
        HypothesisParams {
            m: b(self.m),
            big_m: b(self.big_m),
            phi: b(self.phi),
            big_phi: b(self.big_phi),
            c: b(self.c),
            big_c: b(self.big_c),
            d: b(self.d),
            big_d: b(self.big_d),
            l: b(self.l),
            big_l: b(self.big_l),
            p: self.p,
            alpha: self.alpha,
            beta: self.beta,
            ..HypothesisParams::default()
        }
    }

    fn pair(&self) -> Result<Option<ConjugatePair>, String> {
        match (self.alpha, self.beta) {
            (None, None) => Ok(None),
            (Some(a), None) => ConjugatePair::from_alpha(a).map(Some).map_err(|e| e.to_string()),
            (Some(a), Some(bt)) => ConjugatePair::new(a, bt).map(Some).map_err(|e| e.to_string()),
            (None, Some(_)) => Err("--beta requires --alpha".to_string()),
        }
    }
}

#[derive(Args)]
struct CheckArgs {
    /// Inequality identifier, e.g. chebyshev_31
    #[arg(long)]
    ineq: String,
    /// Left-hand function expression
    #[arg(long)]
    f: String,
    /// Second function expression (where the inequality takes one)
    #[arg(long)]
    g: Option<String>,
    /// Integral kind; inferred from --a/--n when omitted
    #[arg(long, value_enum)]
    kind: Option<KindFlag>,
    #[arg(long)]
    q: f64,
    #[arg(long, allow_negative_numbers = true)]
    a: Option<f64>,
    #[arg(long)]
    b: f64,
    #[arg(long)]
    n: Option<u32>,
    #[command(flatten)]
    constants: ConstantArgs,
    #[command(flatten)]
    policy: PolicyArgs,
    #[arg(long, value_enum, default_value_t)]
    format: FormatFlag,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SweepTarget {
    /// Difference side of the Chebyshev-type inequality on [a, b]
    ChebyshevDiff,
    /// Covariance-style difference on [a, b]
    GrussDiff,
    /// Slack of a registry inequality (requires --ineq)
    Check,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, value_enum)]
    target: SweepTarget,
    /// Parameter to sweep (only `q` is supported)
    #[arg(long, default_value = "q")]
    param: String,
    #[arg(long, allow_negative_numbers = true)]
    from: f64,
    #[arg(long, allow_negative_numbers = true)]
    to: f64,
    #[arg(long)]
    steps: usize,
    /// Bisect each bracketed sign change
    #[arg(long)]
    bisect: bool,
    #[arg(long, default_value_t = 1e-6)]
    bisect_tol: f64,
    #[arg(long)]
    f: String,
    #[arg(long)]
    g: Option<String>,
    #[arg(long)]
    ineq: Option<String>,
    #[arg(long, value_enum)]
    kind: Option<KindFlag>,
    #[arg(long, allow_negative_numbers = true)]
    a: Option<f64>,
    #[arg(long)]
    b: f64,
    #[arg(long)]
    n: Option<u32>,
    #[command(flatten)]
    constants: ConstantArgs,
    #[command(flatten)]
    policy: PolicyArgs,
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatFlag,
}

#[derive(Args)]
struct ReproduceArgs {
    /// Suite name: paper or property
    #[arg(long)]
    suite: String,
    /// Seed for the randomized property suite
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t)]
    format: FormatFlag,
}

const EXIT_FLAGS: u8 = 1;
const EXIT_DOMAIN: u8 = 2;
const EXIT_MAX_TERMS: u8 = 3;
const EXIT_FAILS: u8 = 4;
const EXIT_VACUOUS: u8 = 5;
const EXIT_UNTESTABLE: u8 = 6;
const EXIT_SUITE_FAILED: u8 = 7;

fn main() -> ExitCode {
    let args = match merge_config(std::env::args().collect()) {
        Ok(a) => a,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(EXIT_FLAGS);
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            // clap handles --help/--version as "errors" with exit 0
            let code = if e.use_stderr() { EXIT_FLAGS } else { 0 };
            e.print().expect("write to console");
            return ExitCode::from(code);
        }
    };
    let run = match cli.command {
        Command::Eval(a) => cmd_eval(a),
        Command::Check(a) => cmd_check(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Reproduce(a) => cmd_reproduce(a),
    };
    match run {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_FLAGS)
        }
    }
}

/// Pull `--config FILE` out of the raw arguments and append `key=value`
/// entries from the file as `--key=value` flags, skipping keys given
/// explicitly. Appended flags land after the subcommand, so clap rejects
/// unknown keys the same way it rejects unknown flags.
fn merge_config(mut args: Vec<String>) -> Result<Vec<String>, String> {
    let mut path = None;
    let mut i = 0;
    while i < args.len() {
        if args[i] == "--config" {
            if i + 1 >= args.len() {
                return Err("--config requires a file path".to_string());
            }
            path = Some(args.remove(i + 1));
            args.remove(i);
        } else if let Some(rest) = args[i].strip_prefix("--config=") {
            path = Some(rest.to_string());
            args.remove(i);
        } else {
            i += 1;
        }
    }
    let Some(path) = path else { return Ok(args) };
    let text = std::fs::read_to_string(&path)
        .map_err(|e| format!("cannot read config file {path}: {e}"))?;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(format!("{path}:{}: expected key=value, got {line:?}", lineno + 1));
        };
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() {
            return Err(format!("{path}:{}: empty key", lineno + 1));
        }
        let flag = format!("--{key}");
        let given = args
            .iter()
            .any(|a| *a == flag || a.strip_prefix(&flag).is_some_and(|r| r.starts_with('=')));
        if !given {
            args.push(format!("{flag}={value}"));
        }
    }
    Ok(args)
}

fn parse_q(q: f64) -> Result<QParam, String> {
    let q = QParam::new(q).map_err(|e| e.to_string())?;
    if q.get() >= 0.999 {
        eprintln!(
            "warning: q = {} is very close to 1; series truncation may use many terms",
            fmt_g(q.get())
        );
    }
    Ok(q)
}

fn parse_expr(label: &str, src: &str) -> Result<qineq::expr::Expression, String> {
    expr::parse(src).map_err(|e| format!("--{label} {src:?}: {e}"))
}

// ----------------------------------------------------------------- eval

fn eval_kind(args: &EvalArgs) -> Result<IntegralKind, String> {
    match args.kind {
        KindFlag::Jackson0 => Ok(IntegralKind::Jackson0 { b: args.b }),
        KindFlag::JacksonAb => {
            let a = args.a.ok_or("--kind jackson-ab requires --a")?;
            Ok(IntegralKind::JacksonAb { a, b: args.b })
        }
        KindFlag::Restricted => {
            let n = args.n.ok_or("--kind restricted requires --n")?;
            Ok(IntegralKind::Restricted { b: args.b, n })
        }
        KindFlag::Riemann => {
            let a = args.a.ok_or("--kind riemann requires --a")?;
            Ok(IntegralKind::RiemannType { a, b: args.b })
        }
    }
}

fn status_word(status: &IntegralStatus) -> &'static str {
    match status {
        IntegralStatus::Converged => "CONVERGED",
        IntegralStatus::MaxTermsReached => "MAX_TERMS_REACHED",
        IntegralStatus::DomainError { .. } => "DOMAIN_ERROR",
    }
}

fn print_integral(res: &IntegralResult, q: QParam, format: FormatFlag) {
    match format {
        FormatFlag::Json => {
            println!("{}", serde_json::to_string_pretty(res).expect("result serializes"));
        }
        FormatFlag::Csv => {
            println!("{CSV_HEADER}");
            println!(
                "{}",
                csv_row(
                    q.get(),
                    res.value,
                    res.value,
                    res.tail_bound_estimate,
                    status_word(&res.status)
                )
            );
        }
        FormatFlag::Text => {
            println!("value = {}", fmt_g(res.value));
            println!("terms_used = {}", res.terms_used);
            println!("tail_bound_estimate = {}", fmt_g(res.tail_bound_estimate));
            match &res.status {
                IntegralStatus::DomainError { point, reason } => {
                    println!("status = DOMAIN_ERROR at point {} ({reason})", fmt_g(*point));
                }
                other => println!("status = {}", status_word(other)),
            }
        }
    }
}

fn cmd_eval(args: EvalArgs) -> Result<u8, String> {
    let f = parse_expr("f", &args.f)?;
    let q = parse_q(args.q)?;
    let kind = eval_kind(&args)?;
    let policy = args.policy.policy()?;
    let res = integrate(&f, kind, q, &policy);
    print_integral(&res, q, args.format);
    Ok(match res.status {
        IntegralStatus::Converged => 0,
        IntegralStatus::DomainError { .. } => EXIT_DOMAIN,
        IntegralStatus::MaxTermsReached => EXIT_MAX_TERMS,
    })
}

// ----------------------------------------------------------------- check

/// Integral-kind inputs for a checker: either a JKind (lower endpoint tied
/// to q) or a plain interval for the interval-difference form.
fn resolve_kind(
    id: InequalityId,
    kind: Option<KindFlag>,
    a: Option<f64>,
    b: f64,
    n: Option<u32>,
) -> Result<(Option<JKind>, Option<Interval>), String> {
    let jk = |k: KindFlag| -> Result<Option<JKind>, String> {
        Ok(Some(match k {
            KindFlag::Jackson0 => JKind::Jackson0 { b },
            KindFlag::Restricted => {
                JKind::Restricted { b, n: n.ok_or("--kind restricted requires --n")? }
            }
            KindFlag::Riemann => {
                JKind::RiemannType { a: a.ok_or("--kind riemann requires --a")?, b }
            }
            KindFlag::JacksonAb => unreachable!("handled by caller"),
        }))
    };
    match kind {
        Some(KindFlag::JacksonAb) => {
            let a = a.ok_or("--kind jackson-ab requires --a")?;
            Ok((None, Some(Interval::new(a, b).map_err(|e| e.to_string())?)))
        }
        Some(k) => Ok((jk(k)?, None)),
        None if id.takes_jkind() => {
            // infer from the flags that were provided
            let k = if n.is_some() {
                KindFlag::Restricted
            } else if a.is_some() {
                KindFlag::Riemann
            } else {
                KindFlag::Jackson0
            };
            Ok((jk(k)?, None))
        }
        None => {
            let a = a.ok_or("this inequality needs an interval: supply --a and --b")?;
            Ok((None, Some(Interval::new(a, b).map_err(|e| e.to_string())?)))
        }
    }
}

fn verdict_word(v: Verdict) -> &'static str {
    match v {
        Verdict::Holds => "HOLDS",
        Verdict::Fails => "FAILS",
        Verdict::Vacuous => "VACUOUS",
        Verdict::Untestable => "UNTESTABLE",
    }
}

fn print_verdict(v: &InequalityVerdict, q: QParam, format: FormatFlag) {
    match format {
        FormatFlag::Json => {
            println!("{}", serde_json::to_string_pretty(v).expect("verdict serializes"));
        }
        FormatFlag::Csv => {
            println!("{CSV_HEADER}");
            println!("{}", csv_row(q.get(), v.lhs, v.rhs, v.slack, verdict_word(v.verdict)));
        }
        FormatFlag::Text => {
            println!("id = {}", v.id.name());
            println!("integral_kind = {}", v.integral_kind);
            println!("inputs = {}", v.inputs);
            for h in &v.hypotheses {
                let status = match &h.status {
                    HypStatus::Satisfied => "SATISFIED".to_string(),
                    HypStatus::Violated { witness } => format!("VIOLATED ({witness})"),
                    HypStatus::Estimated => "ESTIMATED".to_string(),
                    HypStatus::Unchecked => "UNCHECKED".to_string(),
                };
                println!("hypothesis [{}] = {status}", h.name);
            }
            for s in &v.sides {
                println!(
                    "side [{}]: lhs = {}, rhs = {}, slack = {}",
                    s.label,
                    fmt_g(s.lhs),
                    fmt_g(s.rhs),
                    fmt_g(s.slack)
                );
            }
            println!("lhs = {}", fmt_g(v.lhs));
            println!("rhs = {}", fmt_g(v.rhs));
            println!("slack = {}", fmt_g(v.slack));
            println!("tolerance = {}", fmt_g(v.tolerance));
            if let Some(note) = &v.note {
                println!("note = {note}");
            }
            println!("verdict = {}", verdict_word(v.verdict));
        }
    }
}

fn verdict_exit(v: Verdict) -> u8 {
    match v {
        Verdict::Holds => 0,
        Verdict::Fails => EXIT_FAILS,
        Verdict::Vacuous => EXIT_VACUOUS,
        Verdict::Untestable => EXIT_UNTESTABLE,
    }
}

fn cmd_check(args: CheckArgs) -> Result<u8, String> {
    let id = InequalityId::from_name(&args.ineq)
        .ok_or_else(|| format!("unknown inequality id {:?}", args.ineq))?;
    let f = parse_expr("f", &args.f)?;
    let g = args.g.as_deref().map(|s| parse_expr("g", s)).transpose()?;
    let q = parse_q(args.q)?;
    let (jkind, iv) = resolve_kind(id, args.kind, args.a, args.b, args.n)?;
    let input = CheckInput {
        f: &f,
        g: g.as_ref().map(|e| e as &dyn RealFn),
        q,
        jkind,
        iv,
        params: args.constants.params(),
        pair: args.constants.pair()?,
        p: args.constants.p,
    };
    let opts = CheckOptions { policy: args.policy.policy()?, ..CheckOptions::default() };
    let verdict = check(id, &input, &opts).map_err(|e| e.to_string())?;
    print_verdict(&verdict, q, args.format);
    Ok(verdict_exit(verdict.verdict))
}

// ----------------------------------------------------------------- sweep

fn cmd_sweep(args: SweepArgs) -> Result<u8, String> {
    if args.param != "q" {
        return Err(format!("unsupported sweep parameter {:?}; only q", args.param));
    }
    let spec = SweepSpec {
        lo: args.from,
        hi: args.to,
        steps: args.steps,
        bisect_sign_changes: args.bisect,
        bisect_tol: args.bisect_tol,
    };
    let f = parse_expr("f", &args.f)?;
    let g = args.g.as_deref().map(|s| parse_expr("g", s)).transpose()?;
    let policy = args.policy.policy()?;
    let eval: Box<dyn Fn(f64) -> Option<SweepPoint>> = match args.target {
        SweepTarget::ChebyshevDiff | SweepTarget::GrussDiff => {
            let g = g.ok_or("this target requires --g")?;
            let a = args.a.ok_or("this target requires --a and --b")?;
            let iv = Interval::new(a, args.b).map_err(|e| e.to_string())?;
            let b_diff = args.target == SweepTarget::ChebyshevDiff;
            Box::new(move |qv: f64| {
                let q = QParam::new(qv).ok()?;
                let d = if b_diff {
                    chebyshev_ab_difference(&f, &g, iv, q, &policy)
                } else {
                    gruss_ab_difference(&f, &g, iv, q, &policy)
                };
                d.ok().map(SweepPoint::from_difference)
            })
        }
        SweepTarget::Check => {
            let ineq = args.ineq.as_deref().ok_or("--target check requires --ineq")?;
            let id = InequalityId::from_name(ineq)
                .ok_or_else(|| format!("unknown inequality id {ineq:?}"))?;
            let params = args.constants.params();
            let pair = args.constants.pair()?;
            let p = args.constants.p;
            let kind = args.kind;
            let (a, b, n) = (args.a, args.b, args.n);
            let opts = CheckOptions { policy, ..CheckOptions::default() };
            Box::new(move |qv: f64| {
                let q = QParam::new(qv).ok()?;
                let (jkind, iv) = resolve_kind(id, kind, a, b, n).ok()?;
                let input = CheckInput {
                    f: &f,
                    g: g.as_ref().map(|e| e as &dyn RealFn),
                    q,
                    jkind,
                    iv,
                    params,
                    pair,
                    p,
                };
                let v = check(id, &input, &opts).ok()?;
                match v.verdict {
                    Verdict::Holds | Verdict::Fails => Some(SweepPoint {
                        lhs: v.lhs,
                        rhs: v.rhs,
                        slack: v.slack,
                        verdict: verdict_word(v.verdict).to_string(),
                    }),
                    Verdict::Vacuous | Verdict::Untestable => None,
                }
            })
        }
    };
    let report = sweep(&spec, eval.as_ref()).map_err(|e| e.to_string())?;
    match args.format {
        FormatFlag::Json => {
            println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
        }
        FormatFlag::Csv => print!("{}", report.to_csv()),
        FormatFlag::Text => {
            for row in &report.rows {
                println!(
                    "q = {}: lhs = {}, rhs = {}, slack = {}, verdict = {}",
                    fmt_g(row.param),
                    fmt_g(row.point.lhs),
                    fmt_g(row.point.rhs),
                    fmt_g(row.point.slack),
                    row.point.verdict
                );
            }
            for t in &report.thresholds {
                println!(
                    "threshold: sign change in [{}, {}], located at {}",
                    fmt_g(t.lo),
                    fmt_g(t.hi),
                    fmt_g(t.location)
                );
            }
            println!(
                "summary: {} holds, {} fails, {} untestable",
                report.summary.holds, report.summary.fails, report.summary.untestable
            );
        }
    }
    Ok(0)
}

// ------------------------------------------------------------- reproduce

fn cmd_reproduce(args: ReproduceArgs) -> Result<u8, String> {
    let report = match args.suite.as_str() {
        "paper" => run_paper_suite(),
        "property" => run_property_suite(args.seed, PROPERTY_INSTANCES_PER_ID),
        other => return Err(format!("unknown suite {other:?}; expected paper or property")),
    };
    match args.format {
        FormatFlag::Json => print!("{}", report.to_json()),
        FormatFlag::Text => print!("{}", report.to_text()),
        FormatFlag::Csv => return Err("reproduce does not support csv output".to_string()),
    }
    Ok(if report.all_pass() { 0 } else { EXIT_SUITE_FAILED })
}
