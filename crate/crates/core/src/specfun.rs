//! Complex special functions: gamma, Riemann and Hurwitz zeta, zeta with
//! Euler factors removed, real-character L-series, and the gamma-factor
//! combinations `g_alpha`, `G`, `X_alpha`, `gamma_alpha`.
//!
//! `gamma`, `zeta` and `hurwitz` are generic over the real scalar; the
//! remaining functions are double precision.

use std::fmt::Debug;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive};

use crate::arith::kronecker;
use crate::error::{invalid, Error, Result};
use crate::{c64, C64};

/// Real scalar usable by the generic special functions.
pub trait Real: Float + FloatConst + FromPrimitive + Debug + Send + Sync + 'static {}

impl<T: Float + FloatConst + FromPrimitive + Debug + Send + Sync + 'static> Real for T {}

#[inline]
fn cst<T: Real>(x: f64) -> T {
    T::from_f64(x).unwrap()
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// `B_{2k}` for `k = 1..=15`.
const BERNOULLI_EVEN: [f64; 15] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
    -23749461029.0 / 870.0,
    8615841276005.0 / 14322.0,
];

fn is_nonpositive_integer<T: Real>(s: Complex<T>) -> bool {
    s.im == T::zero() && s.re <= T::zero() && s.re == s.re.round()
}

/// Complex gamma function: Lanczos (g = 7) with reflection for `Re s < 1/2`.
pub fn gamma<T: Real>(s: Complex<T>) -> Result<Complex<T>> {
    if is_nonpositive_integer(s) {
        return Err(Error::Pole {
            function: "gamma",
            at: format!("{s:?}"),
        });
    }
    Ok(gamma_unchecked(s))
}

fn gamma_unchecked<T: Real>(s: Complex<T>) -> Complex<T> {
    let half = cst::<T>(0.5);
    let one = Complex::new(T::one(), T::zero());
    if s.re < half {
        let pi = T::PI();
        let sin = (s * pi).sin();
        return Complex::new(pi, T::zero()) / (sin * gamma_unchecked(one - s));
    }
    let z = s - one;
    let mut acc = Complex::new(cst::<T>(LANCZOS[0]), T::zero());
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        acc = acc + Complex::new(cst::<T>(c), T::zero()) / (z + cst::<T>(i as f64));
    }
    let t = z + cst::<T>(LANCZOS_G) + half;
    let sqrt_two_pi = (T::PI() + T::PI()).sqrt();
    ((z + half) * t.ln() - t).exp() * acc * sqrt_two_pi
}

/// Hurwitz zeta `zeta(s, a)` by Euler–Maclaurin summation, `a > 0`.
pub fn hurwitz<T: Real>(s: Complex<T>, a: T) -> Result<Complex<T>> {
    if s.re == T::one() && s.im == T::zero() {
        return Err(Error::Pole {
            function: "hurwitz zeta",
            at: "s = 1".into(),
        });
    }
    if !(a > T::zero()) {
        return invalid(format!("hurwitz parameter a = {a:?} must be positive"));
    }
    let n_terms = 6 + (s.norm().to_f64().unwrap() / 2.0).ceil() as usize;
    Ok(hurwitz_em(s, a, n_terms))
}

/// Euler–Maclaurin with `n_terms` explicit terms and up to 15 Bernoulli
/// corrections at base `n_terms + a`.
pub(crate) fn hurwitz_em<T: Real>(s: Complex<T>, a: T, n_terms: usize) -> Complex<T> {
    let mut sum = Complex::new(T::zero(), T::zero());
    for n in 0..n_terms {
        let x = cst::<T>(n as f64) + a;
        sum = sum + (-s * x.ln()).exp();
    }
    sum + em_tail(s, cst::<T>(n_terms as f64) + a, sum.norm())
}

/// `sum_{n >= 0} (x + n)^{-s}` asymptotics: integral, half-term and
/// Bernoulli corrections.
pub(crate) fn em_tail<T: Real>(s: Complex<T>, x: T, scale: T) -> Complex<T> {
    let one = T::one();
    let xs = (-s * x.ln()).exp();
    let mut tail = xs * x / (s - one) + xs * cst::<T>(0.5);
    // k = 1: B_2/2! * s * x^{-s-1}
    let inv_x2 = one / (x * x);
    let mut poch_over_fact = s / cst::<T>(2.0);
    let mut power = xs / x;
    let eps = T::epsilon() * cst::<T>(0.25);
    for (k, &b) in BERNOULLI_EVEN.iter().enumerate() {
        let k = k + 1;
        let term = poch_over_fact * power * cst::<T>(b);
        tail = tail + term;
        if term.norm() <= eps * (scale + tail.norm()) {
            break;
        }
        let kk = cst::<T>(2.0 * k as f64);
        poch_over_fact = poch_over_fact * (s + kk - one) * (s + kk)
            / ((kk + one) * (kk + cst::<T>(2.0)));
        power = power * inv_x2;
    }
    tail
}

/// Riemann zeta by Euler–Maclaurin.
pub fn zeta<T: Real>(s: Complex<T>) -> Result<Complex<T>> {
    if s.re == T::one() && s.im == T::zero() {
        return Err(Error::Pole {
            function: "zeta",
            at: "s = 1".into(),
        });
    }
    hurwitz(s, T::one())
}

/// `x^s = e^{s log x}` for real `x > 0` (principal branch).
#[inline]
pub fn rpow(x: f64, s: C64) -> C64 {
    (s * x.ln()).exp()
}

fn dedup_primes(primes: &[u64]) -> Vec<u64> {
    let mut v = primes.to_vec();
    v.sort_unstable();
    v.dedup();
    v
}

/// `zeta(s) * prod_{p in excluded} (1 - p^{-s})`.
pub fn zeta_excl(s: C64, excluded: &[u64]) -> Result<C64> {
    let z = zeta(s)?;
    Ok(dedup_primes(excluded)
        .into_iter()
        .fold(z, |acc, p| acc * (C64::new(1.0, 0.0) - rpow(p as f64, -s))))
}

/// Zeta with the Euler factors at the primes dividing `m` removed
/// (`zeta_{2al}` is `zeta_coprime(s, 2 * a * l)`).
pub fn zeta_coprime(s: C64, m: u64) -> Result<C64> {
    zeta_excl(s, &crate::arith::prime_divisors(m))
}

/// Dirichlet L-series of the Kronecker character `n -> (k1/n)` with the
/// Euler factors at `excluded` removed, for `Re s >= 1.2`.
///
/// Evaluated exactly as a finite combination of Hurwitz zeta values over the
/// odd residues modulo `4|k1|`, with the 2-factor restored or removed.
pub fn real_char_l(s: C64, k1: i64, excluded: &[u64]) -> Result<C64> {
    if s.re < 1.2 {
        return Err(Error::ConvergenceRegion(format!(
            "real_char_l needs Re s >= 1.2, got {}",
            s.re
        )));
    }
    if k1 == 0 {
        return invalid("k1 must be nonzero");
    }
    let q = 4 * k1.unsigned_abs();
    let qf = q as f64;
    let mut odd_part = C64::new(0.0, 0.0);
    for b in (1..q).step_by(2) {
        let chi = kronecker(k1, b as i64);
        if chi != 0 {
            odd_part += hurwitz(s, b as f64 / qf)? * chi as f64;
        }
    }
    let mut value = odd_part * rpow(qf, -s);
    let excluded = dedup_primes(excluded);
    for &p in &excluded {
        if p != 2 {
            value *= C64::new(1.0, 0.0) - rpow(p as f64, -s) * kronecker(k1, p as i64) as f64;
        }
    }
    if !excluded.contains(&2) {
        value /= C64::new(1.0, 0.0) - rpow(2.0, -s) * kronecker(k1, 2) as f64;
    }
    Ok(value)
}

/// `g_alpha(s) = (8/pi)^{s/2} Gamma((1/2 + alpha + s)/2) / Gamma((1/2 + alpha)/2)`.
pub fn g_alpha(s: C64, alpha: C64) -> Result<C64> {
    let num = gamma((s + alpha + 0.5) * 0.5)?;
    let den = gamma((alpha + 0.5) * 0.5)?;
    Ok(rpow(8.0 / std::f64::consts::PI, s * 0.5) * num / den)
}

/// A shift `alpha` near zero paired with an odd squarefree twist `l`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ShiftTwist {
    pub alpha: C64,
    pub l: u64,
}

impl ShiftTwist {
    /// Validates `|Re alpha| <= 1/4`, `|Im alpha| <= 50` and `l` odd squarefree.
    pub fn new(alpha: C64, l: u64) -> Result<Self> {
        if alpha.re.abs() > 0.25 || alpha.im.abs() > 50.0 || !alpha.re.is_finite() {
            return invalid(format!("alpha = {alpha} outside |Re| <= 1/4, |Im| <= 50"));
        }
        crate::arith::check_odd_squarefree(l, "l")?;
        Ok(Self { alpha, l })
    }
}

/// The entire even test function `G(s)` of the approximate functional
/// equation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GSpec {
    /// `G(s) = exp(kappa s^2)`.
    Gaussian { kappa: f64 },
    /// `exp(s^2)` times the polynomial vanishing at `s = +-alpha` and
    /// `s = +-1/2 +- alpha`, normalized so `G(0) = 1`.
    RemarkZero { alpha: C64 },
}

/// Gaussian coefficient used for central values.
pub const DEFAULT_KAPPA: f64 = 1.0 / 32.0;

impl Default for GSpec {
    fn default() -> Self {
        GSpec::Gaussian {
            kappa: DEFAULT_KAPPA,
        }
    }
}

impl GSpec {
    pub fn gaussian(kappa: f64) -> Result<Self> {
        if !(kappa > 0.0 && kappa.is_finite()) {
            return invalid(format!("gaussian kappa = {kappa} must be positive"));
        }
        Ok(GSpec::Gaussian { kappa })
    }

    pub fn remark_zero(alpha: C64) -> Result<Self> {
        let spec = GSpec::RemarkZero { alpha };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            GSpec::Gaussian { kappa } if !(kappa > 0.0 && kappa.is_finite()) => {
                invalid(format!("gaussian kappa = {kappa} must be positive"))
            }
            GSpec::RemarkZero { alpha }
                if alpha.norm() == 0.0 || (alpha * alpha - 0.25).norm() == 0.0 =>
            {
                invalid("remark-zero G needs alpha != 0 and alpha^2 != 1/4")
            }
            _ => Ok(()),
        }
    }
}

/// `G(s)` for the given spec.
pub fn big_g(s: C64, spec: &GSpec) -> Result<C64> {
    spec.validate()?;
    Ok(big_g_unchecked(s, spec))
}

#[inline]
pub(crate) fn big_g_unchecked(s: C64, spec: &GSpec) -> C64 {
    match *spec {
        GSpec::Gaussian { kappa } => (s * s * kappa).exp(),
        GSpec::RemarkZero { alpha } => {
            let a2 = alpha * alpha;
            let half = c64(0.5, 0.0);
            let num = (a2 - s * s) * ((s - half) * (s - half) - a2) * ((s + half) * (s + half) - a2);
            let quarter = c64(0.25, 0.0) - a2;
            (s * s).exp() * num / (a2 * quarter * quarter)
        }
    }
}

/// `gamma_alpha = (8/pi)^{-alpha} Gamma((1/2 - alpha)/2) / Gamma((1/2 + alpha)/2)`.
pub fn gamma_alpha(alpha: C64) -> Result<C64> {
    let ratio = gamma((c64(0.5, 0.0) - alpha) * 0.5)? / gamma((alpha + 0.5) * 0.5)?;
    Ok(rpow(8.0 / std::f64::consts::PI, -alpha) * ratio)
}

/// `X_alpha = (8d/pi)^{-alpha} Gamma((1/2 - alpha)/2) / Gamma((1/2 + alpha)/2)`.
pub fn x_alpha_factor(d: u64, alpha: C64) -> Result<C64> {
    if d == 0 {
        return invalid("d must be positive");
    }
    let ratio = gamma((c64(0.5, 0.0) - alpha) * 0.5)? / gamma((alpha + 0.5) * 0.5)?;
    Ok(rpow(8.0 * d as f64 / std::f64::consts::PI, -alpha) * ratio)
}
