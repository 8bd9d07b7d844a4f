use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hyper3::audit::{default_profiles, run_audit_with, seeded_profiles, AuditReport};
use hyper3::catalog::{coeff, eval, EvalOptions, FunctionId, Param, ParamSet};
use hyper3::decomposition::DecompOptions;
use hyper3::kernel::{MultiIndex3, Rational};
use hyper3::operators::Verdict;
use hyper3::quadrature::{consistency_sweep, default_sweep_profile, IntegralRepId, SweepReport};
use hyper3::registry::registry;
use hyper3::Error;

#[derive(Parser)]
#[command(name = "hyper3", version, about = "Triple hypergeometric series: evaluation, identity audits, quadrature checks")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Sum a series at a point.
    Eval(EvalArgs),
    /// Print one exact series coefficient.
    Coeff(CoeffArgs),
    /// Check one registry entry coefficient by coefficient.
    Verify(VerifyArgs),
    /// Verify every registry entry at several parameter profiles.
    Audit(AuditArgs),
    /// Compare integral representations against the series.
    Quad(QuadArgs),
    /// Print a saved audit or quadrature report as a table.
    Report(ReportArgs),
}

/// Parameters given one by one or as a list.
#[derive(Args)]
struct ParamArgs {
    /// Comma-separated `name=value` list.
    #[arg(long)]
    params: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    beta1: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    beta2: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    gamma: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    gamma1: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    gamma2: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    gamma3: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    a: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    a1: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    a2: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    b: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    b1: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    b2: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    b3: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    c: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    c1: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    c2: Option<String>,
}

impl ParamArgs {
    fn assignments(&self) -> String {
        use Param::*;
        let flags = [
            (Alpha, &self.alpha),
            (Beta1, &self.beta1),
            (Beta2, &self.beta2),
            (Gamma, &self.gamma),
            (Gamma1, &self.gamma1),
            (Gamma2, &self.gamma2),
            (Gamma3, &self.gamma3),
            (A, &self.a),
            (A1, &self.a1),
            (A2, &self.a2),
            (B, &self.b),
            (B1, &self.b1),
            (B2, &self.b2),
            (B3, &self.b3),
            (C, &self.c),
            (C1, &self.c1),
            (C2, &self.c2),
        ];
        let mut parts: Vec<String> = self.params.iter().cloned().collect();
        parts.extend(flags.iter().filter_map(|(p, v)| v.as_ref().map(|v| format!("{p}={v}"))));
        parts.join(",")
    }

    fn float(&self) -> Result<ParamSet<f64>, Fail> {
        ParamSet::parse_float(&self.assignments()).map_err(usage)
    }

    fn exact(&self) -> Result<ParamSet<Rational>, Fail> {
        ParamSet::parse_exact(&self.assignments()).map_err(usage)
    }
}

#[derive(Args)]
struct EvalArgs {
    /// HA, HB, HC, 2F1, F1 ... F4, Psi2, FD1 ... FD3, 0F1, 1F1, 1F0.
    function: String,
    #[command(flatten)]
    params: ParamArgs,
    /// Comma-separated coordinates.
    #[arg(long, allow_hyphen_values = true)]
    point: String,
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    #[arg(long, default_value_t = 400)]
    max_shells: u32,
    /// Print the result as JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct CoeffArgs {
    function: String,
    #[command(flatten)]
    params: ParamArgs,
    /// Exponents `m,n,p`; missing trailing ones are zero.
    #[arg(long)]
    index: String,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// Registry id such as 3.1 or 4.13.
    id: String,
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long, default_value_t = 6)]
    degree: u32,
    /// Check the repaired variant instead of the printed formula.
    #[arg(long)]
    corrected: bool,
    /// Also sum a decomposition numerically at this point and compare with
    /// the direct series.
    #[arg(long, allow_hyphen_values = true)]
    point: Option<String>,
    #[arg(long, default_value_t = 1e-9)]
    rtol: f64,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct AuditArgs {
    #[arg(long, default_value_t = 6)]
    degree: u32,
    /// Use random rational profiles drawn from this seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Number of random profiles when `--seed` is given.
    #[arg(long, default_value_t = 3)]
    profiles: usize,
    /// Write the JSON report here (`-` for stdout).
    #[arg(long)]
    json: Option<PathBuf>,
    /// Zero all wall times.
    #[arg(long)]
    no_timing: bool,
}

#[derive(Args)]
struct QuadArgs {
    /// Representation ids such as 5.1 or 6.8; all of them when omitted.
    reps: Vec<String>,
    /// Float `name=value` list; a profile valid for every rep when omitted.
    #[arg(long)]
    params: Option<String>,
    /// Evaluation point, repeatable.
    #[arg(long, allow_hyphen_values = true)]
    point: Vec<String>,
    #[arg(long, default_value_t = 48)]
    nodes: u32,
    #[arg(long, default_value_t = 1e-6)]
    rtol: f64,
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct ReportArgs {
    /// A JSON file written by `audit` or `quad`.
    input: PathBuf,
}

enum Fail {
    Usage(String),
    Run(String),
}

fn usage(e: impl std::fmt::Display) -> Fail {
    Fail::Usage(e.to_string())
}

fn run_err(e: impl std::fmt::Display) -> Fail {
    Fail::Run(e.to_string())
}

/// Parameter problems are the caller's fault; anything else is a run failure.
fn classify(e: Error) -> Fail {
    match e {
        Error::MissingParam(_) | Error::BadParams(_) => usage(e),
        e => run_err(e),
    }
}

fn parse_point(s: &str) -> Result<Vec<f64>, Fail> {
    s.split(',')
        .map(|t| {
            let t = t.trim();
            if t.contains('/') {
                return Err(usage(format!("point coordinates must be decimals, got `{t}`")));
            }
            t.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| usage(format!("bad coordinate `{t}`")))
        })
        .collect()
}

fn parse_function(s: &str) -> Result<FunctionId, Fail> {
    s.parse().map_err(usage)
}

fn check_params<T: Clone>(f: FunctionId, ps: &ParamSet<T>) -> Result<(), Fail> {
    f.bind(ps).map(|_| ()).map_err(usage)
}

fn emit(path: &Option<PathBuf>, json: &str) -> Result<(), Fail> {
    match path {
        Some(p) if p.as_os_str() == "-" => println!("{json}"),
        Some(p) => fs::write(p, format!("{json}\n")).map_err(|e| run_err(format!("{}: {e}", p.display())))?,
        None => {}
    }
    Ok(())
}

fn cmd_eval(a: EvalArgs) -> Result<bool, Fail> {
    let f = parse_function(&a.function)?;
    let ps = a.params.float()?;
    check_params(f, &ps)?;
    let point = parse_point(&a.point)?;
    if point.len() != f.arity() {
        return Err(usage(format!("{} takes {} coordinates, got {}", f, f.arity(), point.len())));
    }
    if !(a.tol.is_finite() && a.tol > 0.0) {
        return Err(usage("--tol must be positive"));
    }
    let r = eval(f, &ps, &point, EvalOptions { tol: a.tol, max_shells: a.max_shells }).map_err(run_err)?;
    if a.json {
        println!("{}", serde_json::to_string_pretty(&r).expect("result serializes"));
    } else {
        println!("value           {:.17e}", r.value);
        println!("error estimate  {:.3e}", r.abs_error_estimate);
        println!("shells          {}", r.shells_summed);
        println!("status          {:?}", r.status);
    }
    Ok(r.converged())
}

fn cmd_coeff(a: CoeffArgs) -> Result<bool, Fail> {
    let f = parse_function(&a.function)?;
    let ps = a.params.exact()?;
    check_params(f, &ps)?;
    let mut e = [0u32; 3];
    let parts: Vec<&str> = a.index.split(',').map(str::trim).collect();
    if parts.len() > f.arity() {
        return Err(usage(format!("{} takes {} exponents, got {}", f, f.arity(), parts.len())));
    }
    for (slot, t) in e.iter_mut().zip(&parts) {
        *slot = t.parse().map_err(|_| usage(format!("bad exponent `{t}`")))?;
    }
    let idx = MultiIndex3::new(e[0], e[1], e[2]);
    let c = coeff(f, &ps, idx).map_err(run_err)?;
    if a.json {
        println!("{}", serde_json::json!({ "function": f.name(), "index": idx, "coeff": c }));
    } else {
        println!("{c}");
    }
    Ok(true)
}

fn print_verdict(v: &Verdict, json: bool) {
    if json {
        println!("{}", serde_json::to_string_pretty(v).expect("verdict serializes"));
        return;
    }
    match v {
        Verdict::Verified { degree } => println!("VERIFIED to degree {degree}"),
        Verdict::Failed { first_bad_index, expected, actual } => {
            println!("FAILED at {first_bad_index}: lhs {expected}, rhs {actual}")
        }
    }
}

fn cmd_verify(a: VerifyArgs) -> Result<bool, Fail> {
    let reg = registry();
    if !reg.contains(&a.id) {
        return Err(usage(Error::UnknownIdentity(a.id.clone())));
    }
    let ps = a.params.exact()?;
    let point = a.point.as_deref().map(parse_point).transpose()?;
    if let Ok(e) = reg.identity(&a.id) {
        if point.is_some() {
            return Err(usage("--point applies to decompositions only"));
        }
        if a.corrected && e.corrected.is_none() {
            return Err(usage(format!("{} has no corrected variant", a.id)));
        }
        let v = if a.corrected { e.verify_corrected(&ps, a.degree) } else { e.verify(&ps, a.degree) };
        let v = v.map_err(classify)?;
        print_verdict(&v, a.json);
        return Ok(v.is_verified());
    }
    let e = reg.decomposition(&a.id).map_err(usage)?;
    if a.corrected && e.corrected.is_none() {
        return Err(usage(format!("{} has no corrected variant", a.id)));
    }
    let v = if a.corrected { e.verify_corrected(&ps, a.degree) } else { e.verify(&ps, a.degree) };
    let v = v.map_err(classify)?;
    let Some(pt) = point else {
        print_verdict(&v, a.json);
        return Ok(v.is_verified());
    };
    if pt.len() != e.point_len() {
        return Err(usage(format!("{} takes {} coordinates, got {}", a.id, e.point_len(), pt.len())));
    }
    let fps = ps.to_f64();
    let opts = DecompOptions::default();
    let via = if a.corrected { e.eval_corrected(&fps, &pt, opts) } else { e.eval(&fps, &pt, opts) };
    let via = via.map_err(run_err)?;
    let direct = e.eval_lhs(&fps, &pt, EvalOptions::with_tol(1e-14)).map_err(run_err)?;
    let rel = (via.value - direct.value).abs() / direct.value.abs();
    let within = rel <= a.rtol;
    if a.json {
        let doc = serde_json::json!({
            "verdict": v,
            "float_check": { "decomposition": via, "direct": direct, "rel_diff": rel, "within_rtol": within },
        });
        println!("{}", serde_json::to_string_pretty(&doc).expect("result serializes"));
    } else {
        print_verdict(&v, false);
        println!("decomposition   {:.17e} (± {:.3e})", via.value, via.abs_error_estimate);
        println!("direct series   {:.17e} (± {:.3e})", direct.value, direct.abs_error_estimate);
        println!("relative diff   {rel:.3e} ({})", if within { "within tolerance" } else { "TOLERANCE BREACH" });
    }
    Ok(v.is_verified() && within)
}

fn cmd_audit(a: AuditArgs) -> Result<bool, Fail> {
    if a.degree < 2 {
        return Err(usage("--degree must be at least 2"));
    }
    let profiles = match a.seed {
        Some(s) if a.profiles == 0 => return Err(usage(format!("--profiles must be positive for seed {s}"))),
        Some(s) => seeded_profiles(s, a.profiles),
        None => default_profiles(),
    };
    let mut report = run_audit_with(registry(), &profiles, a.degree, a.seed).map_err(run_err)?;
    if a.no_timing {
        report = report.without_timing();
    }
    if !matches!(&a.json, Some(p) if p.as_os_str() == "-") {
        print!("{}", report.table());
    }
    emit(&a.json, &report.to_json())?;
    Ok(!report.has_failures())
}

fn cmd_quad(a: QuadArgs) -> Result<bool, Fail> {
    let reps = if a.reps.is_empty() {
        IntegralRepId::ALL.to_vec()
    } else {
        a.reps.iter().map(|r| r.parse().map_err(usage)).collect::<Result<Vec<IntegralRepId>, Fail>>()?
    };
    let profile = match &a.params {
        Some(s) => ("given".to_string(), ParamSet::parse_float(s).map_err(usage)?),
        None => default_sweep_profile(),
    };
    let points = if a.point.is_empty() {
        vec![[0.05; 3]]
    } else {
        a.point
            .iter()
            .map(|s| {
                let v = parse_point(s)?;
                <[f64; 3]>::try_from(v).map_err(|_| usage("points take three coordinates"))
            })
            .collect::<Result<_, _>>()?
    };
    if !(4..=256).contains(&a.nodes) {
        return Err(usage(format!("--nodes must lie in 4..=256, got {}", a.nodes)));
    }
    let report = consistency_sweep(&reps, &[profile], &points, a.nodes, a.rtol);
    if !matches!(&a.json, Some(p) if p.as_os_str() == "-") {
        print!("{}", report.table());
    }
    emit(&a.json, &report.to_json())?;
    Ok(report.all_ok())
}

fn cmd_report(a: ReportArgs) -> Result<bool, Fail> {
    let src = fs::read_to_string(&a.input).map_err(|e| run_err(format!("{}: {e}", a.input.display())))?;
    if let Ok(r) = AuditReport::from_json(&src) {
        print!("{}", r.table());
        return Ok(!r.has_failures());
    }
    match SweepReport::from_json(&src) {
        Ok(r) => {
            print!("{}", r.table());
            Ok(r.all_ok())
        }
        Err(_) => Err(usage(format!("{} is neither an audit nor a quadrature report", a.input.display()))),
    }
}

fn init_threads() -> Result<(), Fail> {
    let Ok(v) = std::env::var("HYPER3_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| usage(format!("HYPER3_THREADS must be a positive integer, got `{v}`")))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(run_err)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = init_threads().and_then(|()| match cli.cmd {
        Cmd::Eval(a) => cmd_eval(a),
        Cmd::Coeff(a) => cmd_coeff(a),
        Cmd::Verify(a) => cmd_verify(a),
        Cmd::Audit(a) => cmd_audit(a),
        Cmd::Quad(a) => cmd_quad(a),
        Cmd::Report(a) => cmd_report(a),
    });
    match out {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Fail::Run(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Fail::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
    }
}
