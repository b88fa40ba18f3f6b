//! Acceptance run: one PASS/FAIL line per criterion.

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use quadmoment::lvalue::AfeParams;
use quadmoment::moment::{geometric_grid, recursion_schedule, residual_scan};
use quadmoment::specfun::ShiftTwist;
use quadmoment::verify::{self, Report, SeriesId};
use quadmoment::weights::SmoothWeight;
use quadmoment::{Result, C64};

const SEED: u64 = verify::DEFAULT_SEED;

struct Outcome {
    passed: bool,
    lines: Vec<String>,
}

impl Outcome {
    fn from_reports(reports: Vec<Report>) -> Self {
        Self {
            passed: reports.iter().all(Report::passed),
            lines: reports.iter().map(|r| r.to_string()).collect(),
        }
    }
}

fn gauss() -> Result<Outcome> {
    Ok(Outcome::from_reports(vec![verify::gauss_sweep(2000, 50)?]))
}

fn poisson() -> Result<Outcome> {
    let r = verify::poisson_sweep(&verify::POISSON_MODULI, 1000.0, &SmoothWeight::bump12(), None)?;
    Ok(Outcome::from_reports(vec![r]))
}

fn series() -> Result<Outcome> {
    let reports = SeriesId::ALL
        .iter()
        .map(|&id| verify::series_sweep(id, 20, SEED))
        .collect::<Result<Vec<_>>>()?;
    Ok(Outcome::from_reports(reports))
}

fn lvalues() -> Result<Outcome> {
    let alphas = [C64::new(0.0, 0.0), C64::new(0.02, 0.0), C64::new(0.0, 0.05)];
    let r = verify::lvalue_sweep(2000, &alphas, &AfeParams::default())?;
    Ok(Outcome::from_reports(vec![r]))
}

fn identities() -> Result<Outcome> {
    let reports = verify::identity_suite(100, SEED)?;
    let mut out = Outcome::from_reports(reports.clone());
    // the criterion's common bound
    out.passed = reports.iter().all(|r| r.checked >= 100 && r.worst <= 1e-9);
    Ok(out)
}

fn cancellation() -> Result<Outcome> {
    let w = SmoothWeight::bump12();
    let pts = verify::cancellation_points();
    let direct = verify::cancellation_sweep(&pts, verify::CANCELLATION_X, &w)?;
    let mirror = verify::cancellation_mirror_sweep(&pts, verify::CANCELLATION_X, &w)?;
    Ok(Outcome::from_reports(vec![direct, mirror]))
}

fn residual() -> Result<Outcome> {
    let grid = geometric_grid(1024.0, 131_072.0, 8)?;
    let st = ShiftTwist::new(C64::new(0.0, 0.0), 1)?;
    let table = residual_scan(&grid, st, &SmoothWeight::bump12(), &AfeParams::default())?;
    let verdict = verify::judge_scan(&table)?;
    let mut lines: Vec<String> = table
        .rows
        .iter()
        .map(|r| {
            format!(
                "  X={:>7} brute={:.6e} main={:.6e} residual={:+.4e} budget={:.2e}",
                r.x, r.brute.re, r.main.re, r.residual.re, r.err_budget
            )
        })
        .collect();
    lines.insert(0, verdict.to_string());
    Ok(Outcome {
        passed: verdict.passed(),
        lines,
    })
}

fn y_invariance() -> Result<Outcome> {
    let r = verify::y_invariance_sweep(
        &verify::y_invariance_points(),
        verify::CANCELLATION_X,
        &SmoothWeight::bump12(),
        5.0,
        50.0,
    )?;
    Ok(Outcome::from_reports(vec![r]))
}

fn schedule() -> Result<Outcome> {
    let got = recursion_schedule(1.0f64, 3)?;
    let want = [1.0, 0.75, 0.625, 0.5625];
    Ok(Outcome {
        passed: got == want,
        lines: vec![format!("recursion_schedule(1, 3) = {got:?}, expected {want:?}")],
    })
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Result<Outcome>); 9] = [
        ("1 gauss closed = brute", gauss),
        ("2 poisson summation", poisson),
        ("3 dirichlet-series identities", series),
        ("4 l-value oracle agreement", lvalues),
        ("5 special-function identities", identities),
        ("6 cancellation", cancellation),
        ("7 residual scaling", residual),
        ("8 Y-invariance", y_invariance),
        ("9 recursion schedule", schedule),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut out = std::io::stdout().lock();
    let mut failed = 0;
    for (name, run) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let t = Instant::now();
        let (ok, lines) = match run() {
            Ok(o) => (o.passed, o.lines),
            Err(e) => (false, vec![format!("error: {e}")]),
        };
        if !ok {
            failed += 1;
        }
        let status = if ok { "PASS" } else { "FAIL" };
        writeln!(out, "{status} criterion {name} ({:.1} s)", t.elapsed().as_secs_f64()).unwrap();
        for l in lines {
            writeln!(out, "    {l}").unwrap();
        }
        out.flush().unwrap();
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        writeln!(out, "{failed} criteria failed").unwrap();
        ExitCode::FAILURE
    }
}
