//! Seeded verification sweeps. Each sweep returns [`Report`]s carrying the
//! tolerance it enforced and the worst discrepancy it saw.

use std::f64::consts::{FRAC_PI_4, PI, SQRT_2};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::arith::is_squarefree;
use crate::error::{invalid, Result};
use crate::gauss::{default_kmax, gauss_brute_many, gauss_closed, poisson_check};
use crate::lvalue::{l_oracle, AfeEvaluator, AfeParams};
use crate::moment::{
    check_cancellation, check_cancellation_mirror, moment_contour, term_mmn_k1, term_mmr2,
    fit_table, term_mn_k0, term_mr1, Cancellation, ExponentFit, ResidualTable,
};
use crate::series::{
    a_brute, a_closed, b_alpha, c_series, h_brute, h_closed, BMode, BruteLimits, K2Weights,
    SeriesMode, WChoice,
};
use crate::specfun::{g_alpha, gamma, gamma_alpha, rpow, zeta, zeta_excl, ShiftTwist};
use crate::weights::SmoothWeight;
use crate::{c64, C64};

/// Outcome of one sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub name: String,
    pub checked: usize,
    pub tolerance: f64,
    pub worst: f64,
    pub worst_at: String,
}

impl Report {
    fn new(name: impl Into<String>, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            checked: 0,
            tolerance,
            worst: 0.0,
            worst_at: String::new(),
        }
    }

    fn record(&mut self, discrepancy: f64, at: impl FnOnce() -> String) {
        self.checked += 1;
        // NaN counts as worst
        if !(discrepancy <= self.worst) {
            self.worst = discrepancy;
            self.worst_at = at();
        }
    }

    pub fn passed(&self) -> bool {
        self.checked > 0 && self.worst <= self.tolerance
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {}: {} checks, worst {:.3e} (tol {:.1e})",
            if self.passed() { "PASS" } else { "FAIL" },
            self.name,
            self.checked,
            self.worst,
            self.tolerance
        )?;
        if !self.worst_at.is_empty() {
            write!(f, " at {}", self.worst_at)?;
        }
        Ok(())
    }
}

/// Seed used by the acceptance run and CLI defaults.
pub const DEFAULT_SEED: u64 = 20_240_601;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / b.norm().max(1.0)
}

// ---------------------------------------------------------------- Gauss

/// Absolute tolerance per unit of `n` for closed vs brute Gauss sums.
pub const GAUSS_TOL: f64 = 1e-9;

/// `|G_closed - G_brute| / n` over odd `n <= nmax`, `|k| <= kmax`.
pub fn gauss_sweep(nmax: u64, kmax: i64) -> Result<Report> {
    if nmax == 0 || kmax < 0 {
        return invalid("gauss sweep needs nmax >= 1 and kmax >= 0");
    }
    let ks: Vec<i64> = (-kmax..=kmax).collect();
    let ns: Vec<u64> = (1..=nmax).step_by(2).collect();
    let per_n: Vec<(f64, u64, i64)> = ns
        .into_par_iter()
        .map(|n| -> Result<(f64, u64, i64)> {
            let brute = gauss_brute_many(n, &ks)?;
            let mut worst = (0.0, n, 0);
            for (&k, b) in ks.iter().zip(&brute) {
                let d = (gauss_closed(k, n)? - b).norm() / n as f64;
                if !(d <= worst.0) {
                    worst = (d, n, k);
                }
            }
            Ok(worst)
        })
        .collect::<Result<_>>()?;
    let mut rep = Report::new("gauss closed = brute, |diff|/n", GAUSS_TOL);
    for (d, n, k) in per_n {
        rep.record(d, || format!("n={n} k={k}"));
    }
    rep.checked *= ks.len();
    Ok(rep)
}

/// Tolerance of the Poisson summation check.
pub const POISSON_TOL: f64 = 1e-6;

/// Moduli used by the default Poisson check.
pub const POISSON_MODULI: [u64; 6] = [1, 3, 5, 9, 15, 45];

/// `|lhs - rhs|` of the Poisson formula for each modulus at scale `z`.
pub fn poisson_sweep(ns: &[u64], z: f64, weight: &SmoothWeight, kmax: Option<u64>) -> Result<Report> {
    let mut rep = Report::new(format!("poisson Z={z}"), POISSON_TOL);
    for &n in ns {
        let k = kmax.unwrap_or_else(|| default_kmax(n, z));
        let pc = poisson_check(n, z, weight, k)?;
        rep.record(pc.discrepancy(), || format!("n={n} lhs={:.12} rhs={:.12}", pc.lhs, pc.rhs));
    }
    Ok(rep)
}

// ---------------------------------------------------------------- L-values

/// Relative tolerance `|afe - oracle| / (1 + |oracle|)`.
pub const LVALUE_TOL: f64 = 1e-6;

/// AFE against the Hurwitz oracle for all odd squarefree `d <= d_max`.
pub fn lvalue_sweep(d_max: u64, alphas: &[C64], params: &AfeParams) -> Result<Report> {
    let mut rep = Report::new(format!("l_afe = l_oracle, d <= {d_max}"), LVALUE_TOL);
    let ds: Vec<u64> = (1..=d_max).step_by(2).filter(|&d| is_squarefree(d)).collect();
    for &alpha in alphas {
        let eval = AfeEvaluator::new(alpha, params, d_max)?;
        let diffs: Vec<f64> = ds
            .par_iter()
            .map(|&d| -> Result<f64> {
                let a = eval.eval(d)?;
                let o = l_oracle(d, alpha + 0.5)?;
                Ok((a - o).norm() / (1.0 + o.norm()))
            })
            .collect::<Result<_>>()?;
        for (&d, &x) in ds.iter().zip(&diffs) {
            rep.record(x, || format!("d={d} alpha={alpha}"));
        }
    }
    Ok(rep)
}

// ---------------------------------------------------------------- series

/// Which Dirichlet-series identity to sweep.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesId {
    B,
    C,
    H,
    Hm1,
    A,
}

impl SeriesId {
    pub const ALL: [SeriesId; 5] = [SeriesId::B, SeriesId::C, SeriesId::H, SeriesId::Hm1, SeriesId::A];

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "b" => Ok(SeriesId::B),
            "c" => Ok(SeriesId::C),
            "h" => Ok(SeriesId::H),
            "hm1" => Ok(SeriesId::Hm1),
            "a" => Ok(SeriesId::A),
            _ => invalid(format!("unknown series identity '{s}' (b|c|h|hm1|a)")),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SeriesId::B => "b",
            SeriesId::C => "c",
            SeriesId::H => "h",
            SeriesId::Hm1 => "hm1",
            SeriesId::A => "a",
        }
    }
}

/// Closed-vs-brute tolerance.
pub const SERIES_TOL: f64 = 1e-6;
/// Tolerance for the `A` series at `l = 3`.
pub const SERIES_TOL_A_L3: f64 = 1e-5;

const H_LIMITS: BruteLimits = BruteLimits {
    n_max: 1000,
    k2_max: 100,
    k1_max: 0,
};

const A_LIMITS: BruteLimits = BruteLimits {
    n_max: 800,
    k2_max: 40,
    k1_max: 30,
};

fn pick<T: Copy>(rng: &mut ChaCha8Rng, xs: &[T]) -> T {
    xs[rng.gen_range(0..xs.len())]
}

fn point(rng: &mut ChaCha8Rng, re: (f64, f64), im: f64) -> C64 {
    c64(rng.gen_range(re.0..re.1), rng.gen_range(-im..im))
}

type Case = (String, f64, Box<dyn Fn() -> Result<(C64, C64)> + Send + Sync>);

fn series_cases(id: SeriesId, samples: usize, rng: &mut ChaCha8Rng) -> Vec<Case> {
    let mut cases: Vec<Case> = Vec::with_capacity(samples);
    for _ in 0..samples {
        match id {
            SeriesId::B => {
                let alpha = point(rng, (0.1, 0.25), 10.0);
                let l = pick(rng, &[1u64, 3, 15, 105]);
                cases.push((
                    format!("l={l} alpha={alpha:.4}"),
                    SERIES_TOL,
                    Box::new(move || {
                        Ok((b_alpha(l, alpha, BMode::Euler3)?, b_alpha(l, alpha, BMode::Series)?))
                    }),
                ));
            }
            SeriesId::C => {
                let z = point(rng, (0.0, 0.25), 5.0);
                let l = pick(rng, &[1u64, 3, 15]);
                let y = pick(rng, &[1.0, 3.0, 10.0]);
                let w = pick(rng, &[WChoice::Plus, WChoice::Minus]);
                cases.push((
                    format!("{w:?} l={l} y={y} z={z:.4}"),
                    SERIES_TOL,
                    Box::new(move || {
                        Ok((
                            c_series(w, z, l, y, SeriesMode::Closed)?,
                            c_series(w, z, l, y, SeriesMode::Brute)?,
                        ))
                    }),
                ));
            }
            SeriesId::H | SeriesId::Hm1 => {
                let v = point(rng, (4.0, 5.0), 10.0);
                let w = point(rng, (3.0, 4.0), 10.0);
                let k1 = pick(rng, &[1i64, -1, 3, 5, -7, 6, -15]);
                let l = pick(rng, &[1u64, 3, 5, 15]);
                let a = pick(rng, &[1u64, 7, 11]);
                let k2w = if id == SeriesId::H { K2Weights::All } else { K2Weights::Alternating };
                cases.push((
                    format!("k1={k1} l={l} a={a} v={v:.4} w={w:.4}"),
                    SERIES_TOL,
                    Box::new(move || {
                        let mut closed = h_closed(k1, l, a, v, w)?;
                        if k2w == K2Weights::Alternating {
                            closed *= rpow(2.0, c64(1.0, 0.0) - v) - 1.0;
                        }
                        Ok((closed, h_brute(k1, l, a, v, w, H_LIMITS, k2w)?))
                    }),
                ));
            }
            SeriesId::A => {
                let u = point(rng, (2.5, 3.5), 5.0);
                let w = point(rng, (2.5, 3.5), 5.0);
                let eps = pick(rng, &[1i64, -1]);
                let l = pick(rng, &[1u64, 3]);
                let tol = if l == 3 { SERIES_TOL_A_L3 } else { SERIES_TOL };
                cases.push((
                    format!("eps={eps} l={l} u={u:.4} w={w:.4}"),
                    tol,
                    Box::new(move || {
                        Ok((
                            a_closed(eps, l, 1, u, w, A_LIMITS.k1_max)?,
                            a_brute(eps, l, 1, u, w, A_LIMITS)?,
                        ))
                    }),
                ));
            }
        }
    }
    cases
}

/// Closed form against brute oracle at `samples` seeded random points.
///
/// Discrepancies are absolute, scaled by the point tolerance so that one
/// report covers mixed tolerances; the reported tolerance is the base one.
pub fn series_sweep(id: SeriesId, samples: usize, seed: u64) -> Result<Report> {
    let mut r = rng(seed ^ (id as u64 + 1).wrapping_mul(0x9e37_79b9));
    let cases = series_cases(id, samples, &mut r);
    let diffs: Vec<f64> = cases
        .par_iter()
        .map(|(_, tol, f)| -> Result<f64> {
            let (closed, brute) = f()?;
            Ok((closed - brute).norm() * SERIES_TOL / tol)
        })
        .collect::<Result<_>>()?;
    let mut rep = Report::new(format!("series {} closed = brute", id.name()), SERIES_TOL);
    for ((at, _, _), d) in cases.iter().zip(diffs) {
        rep.record(d, || at.clone());
    }
    Ok(rep)
}

// ---------------------------------------------------------------- identities

/// Tolerances of the special-function identities.
pub const GAMMA_CHAIN_TOL: f64 = 1e-10;
pub const TRIG_TOL: f64 = 1e-12;
pub const ZETA_FE_TOL: f64 = 1e-9;
pub const ZETA2_REWRITE_TOL: f64 = 1e-10;
pub const INVOLUTION_TOL: f64 = 1e-10;

fn gamma_chain(u: C64) -> Result<(C64, C64)> {
    let lhs = rpow(2.0, c64(1.0, 0.0) - u) * (u * (PI / 2.0)).cos() * gamma(u)? / PI.sqrt();
    let rhs = gamma(u * 0.5)? / gamma((c64(1.0, 0.0) - u) * 0.5)?;
    Ok((lhs, rhs))
}

fn zeta_fe(z: C64) -> Result<(C64, C64)> {
    let one = c64(1.0, 0.0);
    let lhs = rpow(PI, -z) * gamma(z)? * zeta(z * 2.0)?;
    let rhs = rpow(PI, z - 0.5) * gamma(c64(0.5, 0.0) - z)? * zeta(one - z * 2.0)?;
    Ok((lhs, rhs))
}

fn zeta2_rewrite(z: C64) -> Result<(C64, C64)> {
    let t = c64(1.0, 0.0) - z;
    let lhs = (rpow(2.0, t) - 1.0) * zeta(t)?;
    let rhs = rpow(2.0, t) * zeta_excl(t, &[2])?;
    Ok((lhs, rhs))
}

fn involution_identity(alpha: C64, s: C64) -> Result<(C64, C64)> {
    let lhs = g_alpha(-s, -alpha)? * gamma_alpha(-alpha - s)? * gamma_alpha(alpha)?;
    Ok((lhs, g_alpha(s, alpha)?))
}

fn near_nonpositive_integer(u: C64, margin: f64) -> bool {
    u.re < margin && (u.re - u.re.round()).abs() < margin && u.im.abs() < margin
}

/// The special-function identity suite at `samples` seeded points each.
///
/// Discrepancies are `|lhs - rhs| / max(1, |rhs|)`.
pub fn identity_suite(samples: usize, seed: u64) -> Result<Vec<Report>> {
    let mut r = rng(seed);
    let mut chain = Report::new("gamma duplication chain", GAMMA_CHAIN_TOL);
    let mut trig = Report::new("trig identity", TRIG_TOL);
    let mut fe = Report::new("zeta functional equation", ZETA_FE_TOL);
    let mut rewrite = Report::new("zeta_2 rewrite", ZETA2_REWRITE_TOL);
    let mut inv = Report::new("g/gamma involution", INVOLUTION_TOL);
    while chain.checked < samples {
        let u = C64::from_polar(5.0 * r.gen::<f64>().sqrt(), r.gen_range(-PI..PI));
        if near_nonpositive_integer(u, 0.1) {
            continue;
        }
        let (a, b) = gamma_chain(u)?;
        chain.record(rel(a, b), || format!("u={u:.6}"));
    }
    for _ in 0..samples {
        let th = C64::from_polar(3.0 * r.gen::<f64>().sqrt(), r.gen_range(-PI..PI));
        let lhs = th.cos() + th.sin();
        let rhs = (c64(FRAC_PI_4, 0.0) - th).cos() * SQRT_2;
        trig.record(rel(lhs, rhs), || format!("theta={th:.6}"));

        let z = point(&mut r, (0.1, 0.4), 20.0);
        let (a, b) = zeta_fe(z)?;
        fe.record(rel(a, b), || format!("z={z:.6}"));

        let mut z = point(&mut r, (-1.0, 1.0), 20.0);
        if z.norm() < 0.05 {
            z += 0.1;
        }
        let (a, b) = zeta2_rewrite(z)?;
        rewrite.record(rel(a, b), || format!("z={z:.6}"));

        let alpha = point(&mut r, (-0.25, 0.25), 5.0);
        let s = point(&mut r, (-0.2, 0.2), 10.0);
        let (a, b) = involution_identity(alpha, s)?;
        inv.record(rel(a, b), || format!("alpha={alpha:.6} s={s:.6}"));
    }
    Ok(vec![chain, trig, fe, rewrite, inv])
}

// ---------------------------------------------------------------- moment

/// Relative tolerance of the cancellation identity.
pub const CANCELLATION_TOL: f64 = 1e-6;
/// `X` at which cancellation and Y-invariance are checked.
pub const CANCELLATION_X: f64 = 1e4;

/// Default `(alpha, l, Y)` cancellation points.
pub fn cancellation_points() -> Vec<(C64, u64, f64)> {
    vec![
        (c64(0.04, 0.02), 1, 10.0),
        (c64(0.04, 0.02), 3, 10.0),
        (c64(0.1, 0.0), 1, 5.0),
        (c64(0.0, 0.05), 15, 20.0),
    ]
}

fn cancellation_report(
    name: &str,
    points: &[(C64, u64, f64)],
    x: f64,
    weight: &SmoothWeight,
    check: fn(f64, ShiftTwist, &SmoothWeight, f64, crate::weights::ContourSpec) -> Result<Cancellation>,
) -> Result<Report> {
    let results: Vec<Cancellation> = points
        .par_iter()
        .map(|&(alpha, l, y)| check(x, ShiftTwist::new(alpha, l)?, weight, y, moment_contour()))
        .collect::<Result<_>>()?;
    let mut rep = Report::new(name, CANCELLATION_TOL);
    for (&(alpha, l, y), c) in points.iter().zip(&results) {
        rep.record(c.relative(), || {
            format!("alpha={alpha} l={l} Y={y} lhs={:.10} rhs={:.10}", c.lhs, c.rhs)
        });
    }
    Ok(rep)
}

/// Four pieces against the first main-term addend.
pub fn cancellation_sweep(points: &[(C64, u64, f64)], x: f64, weight: &SmoothWeight) -> Result<Report> {
    cancellation_report("cancellation", points, x, weight, check_cancellation)
}

/// Transported pieces against the second main-term addend.
pub fn cancellation_mirror_sweep(points: &[(C64, u64, f64)], x: f64, weight: &SmoothWeight) -> Result<Report> {
    cancellation_report("cancellation mirror", points, x, weight, check_cancellation_mirror)
}

/// Tolerance of the Y-invariance check, relative to `max(1, |sum|)`.
pub const Y_INVARIANCE_TOL: f64 = 1e-7;

/// Default `(alpha, l)` points for the Y-invariance check.
pub fn y_invariance_points() -> Vec<(C64, u64)> {
    vec![(c64(0.04, 0.02), 1), (c64(0.0, 0.05), 15)]
}

/// `N + R` sums at `y1` and `y2` on both sides of the functional equation.
pub fn y_invariance_sweep(points: &[(C64, u64)], x: f64, weight: &SmoothWeight, y1: f64, y2: f64) -> Result<Report> {
    let c = moment_contour();
    let mut rep = Report::new(format!("Y-invariance Y={y1} vs {y2}"), Y_INVARIANCE_TOL);
    for &(alpha, l) in points {
        let st = ShiftTwist::new(alpha, l)?;
        let plus = |y| -> Result<C64> { Ok(term_mn_k0(x, st, weight, y, c)? + term_mr1(x, st, weight, y, c)?) };
        let minus = |y| -> Result<C64> { Ok(term_mmn_k1(x, st, weight, y, c)? + term_mmr2(x, st, weight, y, c)?) };
        let (p1, p2) = (plus(y1)?, plus(y2)?);
        rep.record(rel(p1, p2), || format!("plus alpha={alpha} l={l}: {p1:.10} vs {p2:.10}"));
        let (m1, m2) = (minus(y1)?, minus(y2)?);
        rep.record(rel(m1, m2), || format!("minus alpha={alpha} l={l}: {m1:.10} vs {m2:.10}"));
    }
    Ok(rep)
}

/// Largest accepted residual exponent.
pub const RESIDUAL_SLOPE_MAX: f64 = 0.75;
/// Required ratio of `|residual|` to its error budget at every `X`.
pub const BUDGET_MARGIN: f64 = 10.0;

/// Summary of a residual scan.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScanVerdict {
    pub fit: ExponentFit<f64>,
    /// `min |residual| / err_budget` over the grid.
    pub min_margin: f64,
    /// Sign changes of `Re residual` along the grid.
    pub sign_changes: usize,
}

impl ScanVerdict {
    pub fn conclusive(&self) -> bool {
        self.min_margin >= BUDGET_MARGIN
    }

    pub fn passed(&self) -> bool {
        self.conclusive() && self.fit.slope < RESIDUAL_SLOPE_MAX
    }
}

impl fmt::Display for ScanVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = match (self.conclusive(), self.passed()) {
            (false, _) => "INCONCLUSIVE",
            (true, true) => "PASS",
            (true, false) => "FAIL",
        };
        write!(
            f,
            "{status} residual slope {:.4} +- {:.4} (robust {:.4}, max {RESIDUAL_SLOPE_MAX}), \
             min |res|/budget {:.3e} (need {BUDGET_MARGIN}), {} sign changes",
            self.fit.slope, self.fit.stderr, self.fit.robust_slope, self.min_margin, self.sign_changes
        )
    }
}

/// Fits the residual exponent and compares residuals with their budget.
pub fn judge_scan(table: &ResidualTable) -> Result<ScanVerdict> {
    let fit = fit_table(table)?;
    let min_margin = table
        .rows
        .iter()
        .map(|r| r.residual.norm() / r.err_budget)
        .fold(f64::INFINITY, |a, b| if b.is_nan() { f64::NAN } else { a.min(b) });
    let sign_changes = table
        .rows
        .windows(2)
        .filter(|w| (w[0].residual.re < 0.0) != (w[1].residual.re < 0.0))
        .count();
    Ok(ScanVerdict {
        fit,
        min_margin,
        sign_changes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_records_worst() {
        let mut r = Report::new("x", 1e-3);
        assert!(!r.passed());
        r.record(1e-4, || "a".into());
        r.record(1e-5, || "b".into());
        assert!(r.passed() && r.worst_at == "a" && r.checked == 2);
        r.record(f64::NAN, || "nan".into());
        assert!(!r.passed() && r.worst_at == "nan");
        assert!(r.to_string().starts_with("FAIL x: 3 checks"));
    }

    #[test]
    fn small_gauss_and_poisson() {
        let g = gauss_sweep(99, 10).unwrap();
        assert!(g.passed(), "{g}");
        assert_eq!(g.checked, 50 * 21);
        let p = poisson_sweep(&[1, 3, 15], 1000.0, &SmoothWeight::bump12(), None).unwrap();
        assert!(p.passed(), "{p}");
        assert!(gauss_sweep(0, 1).is_err());
    }

    #[test]
    fn identities_pass() {
        for r in identity_suite(40, 3).unwrap() {
            assert!(r.passed(), "{r}");
        }
    }

    #[test]
    fn identity_suite_is_seeded() {
        assert_eq!(identity_suite(5, 9).unwrap(), identity_suite(5, 9).unwrap());
    }

    #[test]
    fn small_lvalue_sweep() {
        let r = lvalue_sweep(101, &[c64(0.0, 0.0), c64(0.0, 0.05)], &AfeParams::default()).unwrap();
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn verdict_on_synthetic_table() {
        use crate::moment::ResidualRow;
        let rows = (10..16)
            .map(|k| {
                let x = 2f64.powi(k);
                let r = c64(x.sqrt() * if k % 2 == 0 { 1.0 } else { -1.0 }, 0.0);
                ResidualRow { x, brute: r, main: c64(0.0, 0.0), residual: r, err_budget: 1e-3 }
            })
            .collect();
        let t = ResidualTable { rows, alpha: c64(0.0, 0.0), l: 1, weight: "bump12".into(), seed: None };
        let v = judge_scan(&t).unwrap();
        assert!((v.fit.slope - 0.5).abs() < 1e-12 && v.passed());
        assert_eq!(v.sign_changes, 5);
        let mut t2 = t.clone();
        t2.rows[0].err_budget = 10.0;
        assert!(!judge_scan(&t2).unwrap().conclusive());
        assert!(judge_scan(&t2).unwrap().to_string().starts_with("INCONCLUSIVE"));
    }

    #[test]
    fn series_ids_round_trip() {
        for id in SeriesId::ALL {
            assert_eq!(SeriesId::parse(id.name()).unwrap(), id);
        }
        assert!(SeriesId::parse("q").is_err());
    }

    #[test]
    fn small_series_sweeps() {
        for id in [SeriesId::B, SeriesId::H, SeriesId::Hm1, SeriesId::A] {
            let r = series_sweep(id, 3, 1).unwrap();
            assert!(r.passed(), "{r}");
        }
    }
}
