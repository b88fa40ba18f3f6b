//! The twisted first moment `M(alpha, l)`: brute force over `d`, the
//! conjectured main term, the contour-integral pieces whose sum reproduces
//! it, and residual scaling.

mod pieces;
mod scan;

pub use pieces::{
    check_cancellation, check_cancellation_mirror, moment_contour, term_mmn_k1, term_mmr2,
    term_mmr2_unsimplified, term_mn_k0, term_mr1, Cancellation, PIECE_PMAX,
};
pub use scan::{
    fit_exponent, fit_table, geometric_grid, recursion_schedule, residual_scan,
    residual_scan_uncached, ExponentFit, ResidualRow, ResidualTable,
};

use rayon::prelude::*;

use crate::arith::{build_sieves, chi8d_unchecked};
use crate::error::{invalid, Error, Result};
use crate::lvalue::{AfeEvaluator, AfeParams};
use crate::series::{b_alpha, BMode};
use crate::specfun::{gamma_alpha, rpow, zeta_excl, ShiftTwist};
use crate::sum::Compensated;
use crate::weights::SmoothWeight;
use crate::{c64, C64};

/// Smallest `|alpha|` accepted by [`main_term`].
pub const MAIN_TERM_MIN_ALPHA: f64 = 1e-4;

/// Inputs of a brute-force moment.
#[derive(Clone, Debug)]
pub struct MomentRequest {
    pub x: f64,
    pub st: ShiftTwist,
    pub weight: SmoothWeight,
    pub afe: AfeParams,
}

impl MomentRequest {
    pub fn new(x: f64, st: ShiftTwist, weight: SmoothWeight, afe: AfeParams) -> Result<Self> {
        if !(x >= 16.0 && x.is_finite()) {
            return invalid(format!("X = {x} must be at least 16"));
        }
        Ok(Self { x, st, weight, afe })
    }

    /// Odd squarefree `d` range `[x0 X, x1 X]`.
    fn d_range(&self) -> (u64, u64) {
        let (x0, x1) = self.weight.support();
        ((x0 * self.x).ceil().max(1.0) as u64, (x1 * self.x).floor() as u64)
    }
}

/// Runs `f` on a dedicated pool of `workers` threads.
pub fn with_workers<T, F>(workers: usize, f: F) -> Result<T>
where
    T: Send,
    F: FnOnce() -> T + Send,
{
    if workers == 0 {
        return invalid("worker count must be positive");
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    Ok(pool.install(f))
}

/// `chi_{8d}(l) L(1/2 + alpha, chi_{8d})` for every odd squarefree `d` in
/// `[lo, hi]`, ascending.
pub(crate) fn twisted_values(
    eval: &AfeEvaluator,
    l: u64,
    lo: u64,
    hi: u64,
) -> Result<Vec<(u64, C64)>> {
    if hi < lo {
        return Ok(Vec::new());
    }
    let sieve = build_sieves(hi)?;
    let ds = sieve.odd_squarefree_in(lo, hi);
    Ok(ds
        .par_iter()
        .map(|&d| {
            let chi = chi8d_unchecked(d, l);
            let v = if chi == 0 {
                c64(0.0, 0.0)
            } else {
                eval.eval_unchecked(d) * chi as f64
            };
            (d, v)
        })
        .collect())
}

/// `sum* chi_{8d}(l) L(1/2 + alpha, chi_{8d}) Phi(d/X)`, summed in ascending `d`.
pub fn brute_moment(req: &MomentRequest) -> Result<C64> {
    let (lo, hi) = req.d_range();
    if hi < lo {
        return Ok(c64(0.0, 0.0));
    }
    let eval = AfeEvaluator::new(req.st.alpha, &req.afe, hi)?;
    let values = twisted_values(&eval, req.st.l, lo, hi)?;
    let acc: Compensated = values
        .iter()
        .map(|&(d, v)| v * req.weight.evaluate(d as f64 / req.x))
        .collect();
    Ok(acc.value())
}

fn zeta2_2() -> C64 {
    zeta_excl(c64(2.0, 0.0), &[2]).expect("zeta_2(2) is finite")
}

/// The two addends of the conjectured main term.
pub fn main_term_parts(x: f64, st: ShiftTwist, weight: &SmoothWeight) -> Result<(C64, C64)> {
    let alpha = st.alpha;
    if alpha.norm() < MAIN_TERM_MIN_ALPHA {
        return Err(Error::AlphaTooSmall(alpha.norm()));
    }
    let l = st.l as f64;
    let pre = c64(x / 2.0, 0.0) / zeta2_2();
    let first = pre
        * weight.mellin(c64(1.0, 0.0))
        * rpow(l, -alpha - 0.5)
        * zeta_excl(alpha * 2.0 + 1.0, &[2])?
        * b_alpha(st.l, alpha, BMode::Euler2)?;
    let second = pre
        * rpow(x, -alpha)
        * weight.mellin(-alpha + 1.0)
        * gamma_alpha(alpha)?
        * rpow(l, alpha - 0.5)
        * zeta_excl(-alpha * 2.0 + 1.0, &[2])?
        * b_alpha(st.l, -alpha, BMode::Euler2)?;
    Ok((first, second))
}

/// The conjectured main term of `M(alpha, l)`.
pub fn main_term(x: f64, st: ShiftTwist, weight: &SmoothWeight) -> Result<C64> {
    let (a, b) = main_term_parts(x, st, weight)?;
    Ok(a + b)
}

/// The main term at `alpha = 0` with the default `delta = 1e-3`.
pub fn main_term_alpha0(x: f64, l: u64, weight: &SmoothWeight) -> Result<C64> {
    main_term_alpha0_with(x, l, weight, 1e-3)
}

/// Symmetric average over `+-delta`, refined by one Richardson step with `delta/2`.
pub fn main_term_alpha0_with(x: f64, l: u64, weight: &SmoothWeight, delta: f64) -> Result<C64> {
    if !(delta >= 2.0 * MAIN_TERM_MIN_ALPHA && delta <= 0.05) {
        return invalid(format!("delta = {delta} out of range"));
    }
    let avg = |d: f64| -> Result<C64> {
        let plus = main_term(x, ShiftTwist::new(c64(d, 0.0), l)?, weight)?;
        let minus = main_term(x, ShiftTwist::new(c64(-d, 0.0), l)?, weight)?;
        Ok((plus + minus) * 0.5)
    };
    let coarse = avg(delta)?;
    let fine = avg(delta / 2.0)?;
    Ok((fine * 4.0 - coarse) / 3.0)
}

/// Main term routed through the averaging path when `|alpha|` is tiny.
pub fn main_term_auto(x: f64, st: ShiftTwist, weight: &SmoothWeight) -> Result<C64> {
    if st.alpha.norm() < MAIN_TERM_MIN_ALPHA {
        main_term_alpha0(x, st.l, weight)
    } else {
        main_term(x, st, weight)
    }
}

/// The swap `alpha -> -alpha`, `Phi -> Phi_{-alpha}`, times `gamma_alpha X^{-alpha}`,
/// applied to a functional of `(alpha, Phi)`.
pub fn involution<F>(x: f64, st: ShiftTwist, weight: &SmoothWeight, f: F) -> Result<C64>
where
    F: FnOnce(ShiftTwist, &SmoothWeight) -> Result<C64>,
{
    let swapped = ShiftTwist::new(-st.alpha, st.l)?;
    let shifted = weight.shifted(-st.alpha);
    Ok(gamma_alpha(st.alpha)? * rpow(x, -st.alpha) * f(swapped, &shifted)?)
}
