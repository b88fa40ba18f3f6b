//! Command-line front end: verification suites, single evaluations, residual
//! scans and exponent fits.
//!
//! Exit status: 0 on success, 1 when a verification fails or a computation
//! errors, 2 on usage errors.
//!
//! Option precedence: command-line flag, then `--config` file, then the
//! `QMOMENT_WORKERS` environment variable (workers only), then built-in
//! defaults. The defaults reproduce the acceptance run.

mod config;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex;
use serde_json::{json, Value};

use quadmoment::lvalue::{l_afe, l_oracle, AfeParams};
use quadmoment::moment::{
    brute_moment, check_cancellation, check_cancellation_mirror, geometric_grid, main_term_auto,
    main_term_parts, moment_contour, residual_scan, residual_scan_uncached, with_workers,
    MomentRequest, ResidualTable, MAIN_TERM_MIN_ALPHA,
};
use quadmoment::specfun::ShiftTwist;
use quadmoment::verify::{self, Report, SeriesId};
use quadmoment::weights::SmoothWeight;
use quadmoment::{Error, C64};

#[derive(Parser, Debug)]
#[command(name = "quadmoment", version, about = "Averages of L(1/2 + alpha, chi_8d) over odd squarefree d")]
#[command(args_override_self = true)]
struct Cli {
    /// Worker threads for parallel sweeps
    #[arg(long, env = "QMOMENT_WORKERS", global = true)]
    workers: Option<usize>,
    /// JSON file of default flag values
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Emit a JSON report instead of text
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Run a verification suite
    #[command(subcommand)]
    Verify(Suite),
    /// L(1/2 + alpha, chi_8d) by the approximate functional equation and the oracle
    Lvalue(LvalueArgs),
    /// Brute-force twisted moment against the main term
    Moment(ShiftArgs),
    /// Main term of the twisted moment
    Mainterm(ShiftArgs),
    /// Contour-integral pieces against the main-term residue
    Cancel(CancelArgs),
    /// Residual table over a geometric X grid, as CSV
    Scan(ScanArgs),
    /// Power-law exponent of the residuals in a scan CSV
    Fit(FitArgs),
}

#[derive(Subcommand, Debug)]
enum Suite {
    /// Closed Gauss sums against brute force
    Gauss {
        #[arg(long, default_value_t = 2000)]
        nmax: u64,
        #[arg(long, default_value_t = 50)]
        kmax: i64,
        #[command(flatten)]
        tol: TolArg,
    },
    /// Poisson summation over odd d
    Poisson {
        /// Odd moduli
        #[arg(long = "n", value_delimiter = ',', default_values_t = verify::POISSON_MODULI)]
        ns: Vec<u64>,
        #[arg(long, default_value_t = 1000.0)]
        scale: f64,
        /// Dual cutoff (default: from n and scale)
        #[arg(long)]
        kmax: Option<u64>,
        #[command(flatten)]
        tol: TolArg,
    },
    /// Dirichlet-series closed forms against brute oracles
    Series {
        /// b, c, h, hm1, a or all
        #[arg(long, default_value = "all")]
        which: String,
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long, default_value_t = verify::DEFAULT_SEED)]
        seed: u64,
        #[command(flatten)]
        tol: TolArg,
    },
    /// Special-function identities at random points
    Identities {
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = verify::DEFAULT_SEED)]
        seed: u64,
        #[command(flatten)]
        tol: TolArg,
    },
}

#[derive(Args, Debug)]
struct TolArg {
    /// Override the enforced tolerance
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args, Debug, Clone)]
struct ShiftArgs {
    #[arg(long, default_value_t = 4096.0)]
    x: f64,
    /// Shift as RE or RE,IM
    #[arg(long, default_value = "0", allow_hyphen_values = true, value_parser = parse_complex)]
    alpha: C64,
    /// Odd squarefree twist
    #[arg(long, default_value_t = 1)]
    l: u64,
    #[arg(long, default_value = "bump12")]
    weight: String,
}

#[derive(Args, Debug)]
struct LvalueArgs {
    /// Odd squarefree d
    #[arg(long, default_value_t = 1)]
    d: u64,
    /// Sweep every odd squarefree d up to this bound instead
    #[arg(long)]
    dmax: Option<u64>,
    #[arg(long, default_value = "0", allow_hyphen_values = true, value_parser = parse_complex)]
    alpha: C64,
    #[command(flatten)]
    tol: TolArg,
}

#[derive(Args, Debug)]
struct CancelArgs {
    #[arg(long, default_value_t = verify::CANCELLATION_X)]
    x: f64,
    #[arg(long, default_value = "0.04,0.02", allow_hyphen_values = true, value_parser = parse_complex)]
    alpha: C64,
    #[arg(long, default_value_t = 1)]
    l: u64,
    /// Split point of the a-sums
    #[arg(long, default_value_t = 10.0)]
    y: f64,
    #[arg(long, default_value = "bump12")]
    weight: String,
    /// Check the involution-transported identity instead
    #[arg(long)]
    mirror: bool,
    #[command(flatten)]
    tol: TolArg,
}

#[derive(Args, Debug)]
struct ScanArgs {
    #[arg(long, default_value_t = 1024.0)]
    xmin: f64,
    #[arg(long, default_value_t = 131072.0)]
    xmax: f64,
    #[arg(long, default_value_t = 8)]
    points: usize,
    #[arg(long, default_value = "0", allow_hyphen_values = true, value_parser = parse_complex)]
    alpha: C64,
    #[arg(long, default_value_t = 1)]
    l: u64,
    #[arg(long, default_value = "bump12")]
    weight: String,
    /// Recompute L-values for every X
    #[arg(long)]
    uncached: bool,
    /// CSV destination (default: standard output)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct FitArgs {
    /// Scan CSV
    #[arg(long = "in")]
    input: PathBuf,
    /// Fail unless the slope is below 0.75 and residuals clear the error budget
    #[arg(long)]
    check: bool,
}

fn parse_complex(s: &str) -> Result<C64, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |t: &str| t.parse::<f64>().map_err(|_| format!("'{t}' is not a number"));
    match parts.as_slice() {
        [re] => Ok(Complex::new(num(re)?, 0.0)),
        [re, im] => Ok(Complex::new(num(re)?, num(im)?)),
        _ => Err("expected RE or RE,IM".into()),
    }
}

/// Failure classes mapped to exit codes.
enum Failure {
    Usage(String),
    Compute(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidArgument(_) | Error::AlphaTooSmall(_) => Failure::Usage(e.to_string()),
            other => Failure::Compute(other.to_string()),
        }
    }
}

fn usage(flag: &str, msg: impl std::fmt::Display) -> Failure {
    Failure::Usage(format!("{flag}: {msg}"))
}

/// What a command printed and whether it passed.
struct Outcome {
    ok: bool,
    text: Vec<String>,
    json: Value,
}

impl Outcome {
    fn info(text: Vec<String>, json: Value) -> Self {
        Self { ok: true, text, json }
    }

    fn reports(mut reports: Vec<Report>, tol: &TolArg) -> Self {
        if let Some(t) = tol.tol {
            for r in &mut reports {
                r.tolerance = t;
            }
        }
        Self {
            ok: reports.iter().all(Report::passed),
            text: reports.iter().map(|r| r.to_string()).collect(),
            json: Value::Array(reports.iter().map(report_json).collect()),
        }
    }
}

fn report_json(r: &Report) -> Value {
    json!({
        "name": r.name,
        "passed": r.passed(),
        "checked": r.checked,
        "tolerance": r.tolerance,
        "worst": r.worst,
        "worst_at": r.worst_at,
    })
}

fn cjson(z: C64) -> Value {
    json!([z.re, z.im])
}

fn weight(name: &str) -> Result<SmoothWeight, Failure> {
    SmoothWeight::by_name(name).map_err(|e| usage("--weight", e))
}

fn shift(alpha: C64, l: u64) -> Result<ShiftTwist, Failure> {
    ShiftTwist::new(alpha, l).map_err(|e| usage("--alpha/--l", e))
}

fn run_suite(suite: &Suite) -> Result<Outcome, Failure> {
    match suite {
        Suite::Gauss { nmax, kmax, tol } => {
            if *nmax > quadmoment::gauss::BRUTE_MAX_N {
                return Err(usage("--nmax", format!("at most {}", quadmoment::gauss::BRUTE_MAX_N)));
            }
            Ok(Outcome::reports(vec![verify::gauss_sweep(*nmax, *kmax)?], tol))
        }
        Suite::Poisson { ns, scale, kmax, tol } => {
            if let Some(&n) = ns.iter().find(|&&n| n % 2 == 0) {
                return Err(usage("--n", format!("moduli must be odd, got {n}")));
            }
            let w = SmoothWeight::bump12();
            let mut text = Vec::new();
            for &n in ns {
                let k = kmax.unwrap_or_else(|| quadmoment::gauss::default_kmax(n, *scale));
                let pc = quadmoment::gauss::poisson_check(n, *scale, &w, k)?;
                text.push(format!(
                    "n={n} kmax={k}: lhs={:.12} rhs={:.12} |diff|={:.3e}",
                    pc.lhs,
                    pc.rhs,
                    pc.discrepancy()
                ));
            }
            let mut out = Outcome::reports(vec![verify::poisson_sweep(ns, *scale, &w, *kmax)?], tol);
            text.append(&mut out.text);
            out.text = text;
            Ok(out)
        }
        Suite::Series { which, samples, seed, tol } => {
            let ids = if which == "all" {
                SeriesId::ALL.to_vec()
            } else {
                which
                    .split(',')
                    .map(SeriesId::parse)
                    .collect::<quadmoment::Result<Vec<_>>>()
                    .map_err(|e| usage("--which", e))?
            };
            let reports = ids
                .into_iter()
                .map(|id| verify::series_sweep(id, *samples, *seed))
                .collect::<quadmoment::Result<Vec<_>>>()?;
            Ok(Outcome::reports(reports, tol))
        }
        Suite::Identities { samples, seed, tol } => Ok(Outcome::reports(verify::identity_suite(*samples, *seed)?, tol)),
    }
}

fn run_lvalue(a: &LvalueArgs) -> Result<Outcome, Failure> {
    let params = AfeParams::default();
    if let Some(dmax) = a.dmax {
        let r = verify::lvalue_sweep(dmax, &[a.alpha], &params)?;
        return Ok(Outcome::reports(vec![r], &a.tol));
    }
    quadmoment::arith::check_odd_squarefree(a.d, "d").map_err(|e| usage("--d", e))?;
    let afe = l_afe(a.d, a.alpha, &params)?;
    let oracle = l_oracle(a.d, a.alpha + 0.5)?;
    let diff = (afe - oracle).norm() / (1.0 + oracle.norm());
    let tol = a.tol.tol.unwrap_or(verify::LVALUE_TOL);
    Ok(Outcome {
        ok: diff <= tol,
        text: vec![
            format!("afe    = {afe:.15}"),
            format!("oracle = {oracle:.15}"),
            format!("|diff|/(1+|oracle|) = {diff:.3e} (tol {tol:.1e})"),
        ],
        json: json!({"d": a.d, "alpha": cjson(a.alpha), "afe": cjson(afe), "oracle": cjson(oracle), "discrepancy": diff, "tolerance": tol}),
    })
}

fn run_moment(a: &ShiftArgs) -> Result<Outcome, Failure> {
    let st = shift(a.alpha, a.l)?;
    let req = MomentRequest::new(a.x, st, weight(&a.weight)?, AfeParams::default()).map_err(|e| usage("--x", e))?;
    let brute = brute_moment(&req)?;
    let main = main_term_auto(a.x, st, &req.weight)?;
    Ok(Outcome::info(
        vec![
            format!("moment   = {brute:.12}"),
            format!("main     = {main:.12}"),
            format!("residual = {:.6e}", brute - main),
        ],
        json!({"x": a.x, "alpha": cjson(a.alpha), "l": a.l, "moment": cjson(brute), "main": cjson(main), "residual": cjson(brute - main)}),
    ))
}

fn run_mainterm(a: &ShiftArgs) -> Result<Outcome, Failure> {
    let st = shift(a.alpha, a.l)?;
    let w = weight(&a.weight)?;
    let main = main_term_auto(a.x, st, &w)?;
    let mut text = vec![format!("main = {main:.12}")];
    let mut js = json!({"x": a.x, "alpha": cjson(a.alpha), "l": a.l, "main": cjson(main)});
    if a.alpha.norm() >= MAIN_TERM_MIN_ALPHA {
        let (first, second) = main_term_parts(a.x, st, &w)?;
        text.push(format!("  first addend  = {first:.12}"));
        text.push(format!("  second addend = {second:.12}"));
        js["first"] = cjson(first);
        js["second"] = cjson(second);
    }
    Ok(Outcome::info(text, js))
}

fn run_cancel(a: &CancelArgs) -> Result<Outcome, Failure> {
    let st = shift(a.alpha, a.l)?;
    if st.alpha.norm() == 0.0 {
        return Err(usage("--alpha", "must be nonzero"));
    }
    let w = weight(&a.weight)?;
    let check = if a.mirror { check_cancellation_mirror } else { check_cancellation };
    let c = check(a.x, st, &w, a.y, moment_contour())?;
    let tol = a.tol.tol.unwrap_or(verify::CANCELLATION_TOL);
    let rel = c.relative();
    Ok(Outcome {
        ok: rel <= tol,
        text: vec![
            format!("M_N(k=0)    = {:.12}", c.mn_k0),
            format!("M_-N(k1=1)  = {:.12}", c.mmn_k1),
            format!("M_R1        = {:.12}", c.mr1),
            format!("M_-R2       = {:.12}", c.mmr2),
            format!("lhs         = {:.12}", c.lhs),
            format!("rhs         = {:.12}", c.rhs),
            format!("|lhs-rhs|/|rhs| = {rel:.3e} (tol {tol:.1e})"),
        ],
        json: json!({
            "alpha": cjson(a.alpha), "l": a.l, "y": a.y, "x": a.x, "mirror": a.mirror,
            "mn_k0": cjson(c.mn_k0), "mmn_k1": cjson(c.mmn_k1), "mr1": cjson(c.mr1), "mmr2": cjson(c.mmr2),
            "lhs": cjson(c.lhs), "rhs": cjson(c.rhs), "relative": rel, "tolerance": tol,
        }),
    })
}

fn run_scan(a: &ScanArgs) -> Result<Outcome, Failure> {
    let st = shift(a.alpha, a.l)?;
    let w = weight(&a.weight)?;
    let grid = geometric_grid(a.xmin, a.xmax, a.points).map_err(|e| usage("--xmin/--xmax/--points", e))?;
    if grid[0] < 16.0 {
        return Err(usage("--xmin", "must be at least 16"));
    }
    let params = AfeParams::default();
    let table = if a.uncached {
        residual_scan_uncached(&grid, st, &w, &params)?
    } else {
        residual_scan(&grid, st, &w, &params)?
    };
    match &a.out {
        Some(path) => {
            let f = File::create(path).map_err(|e| usage("--out", format!("{}: {e}", path.display())))?;
            table.write_csv(BufWriter::new(f))?;
            let mut text = vec![format!("wrote {} rows to {}", table.rows.len(), path.display())];
            let mut js = json!({"rows": table.rows.len(), "out": path.display().to_string()});
            if let Ok(v) = verify::judge_scan(&table) {
                text.push(v.to_string());
                js["slope"] = json!(v.fit.slope);
                js["stderr"] = json!(v.fit.stderr);
            }
            Ok(Outcome::info(text, js))
        }
        None => {
            let mut buf = Vec::new();
            table.write_csv(&mut buf)?;
            let csv = String::from_utf8(buf).expect("csv is utf-8");
            Ok(Outcome::info(csv.lines().map(String::from).collect(), json!({"csv": csv})))
        }
    }
}

fn run_fit(a: &FitArgs) -> Result<Outcome, Failure> {
    let f = File::open(&a.input).map_err(|e| usage("--in", format!("{}: {e}", a.input.display())))?;
    let table = ResidualTable::read_csv(f).map_err(|e| usage("--in", e))?;
    let v = verify::judge_scan(&table).map_err(|e| usage("--in", e))?;
    Ok(Outcome {
        ok: !a.check || v.passed(),
        text: vec![
            format!("slope = {:.6} +- {:.6} (robust {:.6})", v.fit.slope, v.fit.stderr, v.fit.robust_slope),
            v.to_string(),
        ],
        json: json!({
            "slope": v.fit.slope, "stderr": v.fit.stderr, "robust_slope": v.fit.robust_slope,
            "intercept": v.fit.intercept, "min_margin": v.min_margin, "sign_changes": v.sign_changes,
            "conclusive": v.conclusive(), "passed": v.passed(),
        }),
    })
}

fn dispatch(cmd: &Cmd) -> Result<Outcome, Failure> {
    match cmd {
        Cmd::Verify(s) => run_suite(s),
        Cmd::Lvalue(a) => run_lvalue(a),
        Cmd::Moment(a) => run_moment(a),
        Cmd::Mainterm(a) => run_mainterm(a),
        Cmd::Cancel(a) => run_cancel(a),
        Cmd::Scan(a) => run_scan(a),
        Cmd::Fit(a) => run_fit(a),
    }
}

fn main() -> ExitCode {
    let args = match config::load_and_apply(std::env::args().collect()) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let cli = Cli::parse_from(args);
    let result = match cli.workers {
        Some(0) => Err(usage("--workers", "must be positive")),
        Some(n) => with_workers(n, || dispatch(&cli.cmd)).unwrap_or_else(|e| Err(e.into())),
        None => dispatch(&cli.cmd),
    };
    let mut out = io::stdout().lock();
    match result {
        Ok(o) => {
            if cli.json {
                let mut js = o.json;
                if let Value::Array(_) = js {
                    js = json!({"reports": js});
                }
                js["passed"] = json!(o.ok);
                writeln!(out, "{}", serde_json::to_string_pretty(&js).expect("json")).ok();
            } else {
                for line in o.text {
                    writeln!(out, "{line}").ok();
                }
            }
            if o.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Compute(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
