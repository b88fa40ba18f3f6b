//! Central values `L(1/2 + alpha, chi_{8d})`: the smoothed approximate
//! functional equation and a Hurwitz-zeta oracle.

use crate::arith::{build_sieves, check_odd_squarefree, chi8d_unchecked, jacobi, SieveTables};
use crate::error::{invalid, Error, Result};
use crate::specfun::{em_tail, gamma_alpha, rpow, GSpec};
use crate::sum::Compensated;
use crate::weights::{ContourSpec, VCache, VKernel};
use crate::{c64, C64};

/// Upper bound on the oracle modulus `8d`.
pub const ORACLE_MAX_MODULUS: u64 = 100_000;

/// How many AFE terms to keep.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Truncation {
    /// `n <= sqrt(d) * x_cut`, where `|V| <= 1e-15` beyond `x_cut`.
    Auto,
    /// `n <= m * sqrt(d) * log(2 + d)`.
    Multiplier(f64),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AfeParams {
    pub gspec: GSpec,
    pub contour: ContourSpec,
    pub truncation: Truncation,
}

impl Default for AfeParams {
    fn default() -> Self {
        Self {
            gspec: GSpec::default(),
            contour: ContourSpec::default(),
            truncation: Truncation::Auto,
        }
    }
}

impl AfeParams {
    pub fn with_gspec(gspec: GSpec) -> Self {
        Self {
            gspec,
            ..Self::default()
        }
    }
}

const CACHE_XMAX: f64 = 64.0;

/// Reusable AFE evaluator for a fixed shift `alpha` and all `d <= d_max`.
pub struct AfeEvaluator {
    alpha: C64,
    gamma_alpha: C64,
    plus: VCache,
    minus: Option<VCache>,
    x_cut: f64,
    truncation: Truncation,
    d_max: u64,
    n_max: usize,
    sieve: SieveTables,
    ln_n: Vec<f64>,
    rsqrt_n: Vec<f64>,
}

impl AfeEvaluator {
    pub fn new(alpha: C64, params: &AfeParams, d_max: u64) -> Result<Self> {
        if alpha.re.abs() > 0.25 {
            return invalid(format!("|Re alpha| must be <= 1/4, got {alpha}"));
        }
        if d_max == 0 {
            return invalid("d_max must be positive");
        }
        if let GSpec::RemarkZero { .. } = params.gspec {
            if alpha.norm() == 0.0 {
                return Err(Error::Degenerate(
                    "remark-zero G is undefined at alpha = 0".into(),
                ));
            }
        }
        let plus = VCache::build_with(&VKernel::new(alpha, params.gspec, params.contour)?, CACHE_XMAX)?;
        let minus = if alpha.norm() == 0.0 {
            None
        } else {
            Some(VCache::build_with(
                &VKernel::new(-alpha, params.gspec, params.contour)?,
                CACHE_XMAX,
            )?)
        };
        let x_cut = plus.x_cut().max(minus.as_ref().map_or(0.0, |m| m.x_cut()));
        let sd = (d_max as f64).sqrt();
        if 1.0 / sd < crate::weights::V_CACHE_XMIN {
            return Err(Error::TooLarge(format!("d = {d_max} below the V cache range")));
        }
        let n_max = match params.truncation {
            Truncation::Auto => (sd * x_cut).ceil(),
            Truncation::Multiplier(m) if m > 0.0 => (m * sd * (2.0 + d_max as f64).ln()).ceil(),
            Truncation::Multiplier(m) => return invalid(format!("multiplier {m} must be positive")),
        } as usize;
        let n_max = n_max.max(1);
        let sieve = build_sieves(n_max as u64)?;
        let ln_n = (0..=n_max).map(|n| (n.max(1) as f64).ln()).collect();
        let rsqrt_n = (0..=n_max).map(|n| 1.0 / (n.max(1) as f64).sqrt()).collect();
        Ok(Self {
            alpha,
            gamma_alpha: gamma_alpha(alpha)?,
            plus,
            minus,
            x_cut,
            truncation: params.truncation,
            d_max,
            n_max,
            sieve,
            ln_n,
            rsqrt_n,
        })
    }

    pub fn alpha(&self) -> C64 {
        self.alpha
    }

    pub fn d_max(&self) -> u64 {
        self.d_max
    }

    /// Number of AFE terms used for `d`.
    pub fn terms(&self, d: u64) -> usize {
        let sd = (d as f64).sqrt();
        let n = match self.truncation {
            Truncation::Auto => (sd * self.x_cut).ceil(),
            Truncation::Multiplier(m) => (m * sd * (2.0 + d as f64).ln()).ceil(),
        } as usize;
        n.clamp(1, self.n_max)
    }

    /// Kernel argument beyond which `|V_{+-alpha}|` is negligible.
    pub fn x_cut(&self) -> f64 {
        self.x_cut
    }

    /// `L(1/2 + alpha, chi_{8d})`.
    pub fn eval(&self, d: u64) -> Result<C64> {
        check_odd_squarefree(d, "d")?;
        if d > self.d_max {
            return Err(Error::SieveLimit {
                needed: d,
                limit: self.d_max,
            });
        }
        Ok(self.eval_unchecked(d))
    }

    pub(crate) fn eval_unchecked(&self, d: u64) -> C64 {
        let n_terms = self.terms(d);
        let chi = self.character_table(d, n_terms);
        let half_ln_d = 0.5 * (d as f64).ln();
        let mut first = Compensated::new();
        let mut second = Compensated::new();
        match &self.minus {
            None => {
                let mut acc = 0.0f64;
                let mut acc_im = 0.0f64;
                for n in 1..=n_terms {
                    let c = chi[n];
                    if c == 0 {
                        continue;
                    }
                    let v = self.plus.eval_log(self.ln_n[n] - half_ln_d);
                    let t = self.rsqrt_n[n] * c as f64;
                    acc += t * v.re;
                    acc_im += t * v.im;
                }
                first.add(c64(acc, acc_im));
                // X_0 = 1, both sums coincide
                return first.value() * 2.0;
            }
            Some(minus) => {
                for n in 1..=n_terms {
                    let c = chi[n];
                    if c == 0 {
                        continue;
                    }
                    let u = self.ln_n[n] - half_ln_d;
                    let base = self.rsqrt_n[n] * c as f64;
                    let twist = (self.alpha * -self.ln_n[n]).exp();
                    first.add(twist * self.plus.eval_log(u) * base);
                    second.add(self.plus_minus_twist(twist) * minus.eval_log(u) * base);
                }
            }
        }
        let x_alpha = self.gamma_alpha * rpow(d as f64, -self.alpha);
        first.value() + x_alpha * second.value()
    }

    #[inline]
    fn plus_minus_twist(&self, twist: C64) -> C64 {
        // n^{+alpha} = 1 / n^{-alpha}
        twist.inv()
    }

    fn character_table(&self, d: u64, n_terms: usize) -> Vec<i8> {
        let spf = &self.sieve.spf;
        let mut chi = vec![0i8; n_terms + 1];
        chi[1] = 1;
        let modulus = 8 * d;
        for n in 2..=n_terms {
            let p = spf[n] as usize;
            chi[n] = if p == n {
                if p == 2 {
                    0
                } else {
                    jacobi(modulus % p as u64, p as u64)
                }
            } else {
                chi[p] * chi[n / p]
            };
        }
        chi
    }
}

/// `L(1/2 + alpha, chi_{8d})` by the approximate functional equation.
pub fn l_afe(d: u64, alpha: C64, params: &AfeParams) -> Result<C64> {
    check_odd_squarefree(d, "d")?;
    AfeEvaluator::new(alpha, params, d)?.eval(d)
}

/// `L(s, chi_{8d}) = (8d)^{-s} sum_{a mod 8d} chi(a) zeta(s, a/8d)`.
pub fn l_oracle(d: u64, s: C64) -> Result<C64> {
    l_oracle_with(d, s, 0)
}

/// Oracle with `extra` additional Euler–Maclaurin terms per residue class.
pub fn l_oracle_with(d: u64, s: C64, extra: usize) -> Result<C64> {
    check_odd_squarefree(d, "d")?;
    if s.re < 0.4 {
        return Err(Error::ConvergenceRegion(format!("oracle needs Re s >= 0.4, got {}", s.re)));
    }
    if s == c64(1.0, 0.0) {
        return Err(Error::Pole {
            function: "L",
            at: "s = 1".into(),
        });
    }
    let q = 8 * d;
    if q > ORACLE_MAX_MODULUS {
        return Err(Error::TooLarge(format!("oracle modulus 8d = {q} exceeds {ORACLE_MAX_MODULUS}")));
    }
    let qf = q as f64;
    let n_terms = 4 + (s.norm() / 2.0).ceil() as usize + extra;
    let mut head = Compensated::new();
    let mut tail = Compensated::new();
    for a in (1..q).step_by(2) {
        let c = chi8d_unchecked(d, a);
        if c == 0 {
            continue;
        }
        let c = c as f64;
        for k in 0..n_terms as u64 {
            head.add(rpow((k * q + a) as f64, -s) * c);
        }
        let x = n_terms as f64 + a as f64 / qf;
        tail.add(em_tail(s, x, 1.0) * c);
    }
    Ok(head.value() + rpow(qf, -s) * tail.value())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::chi8d;

    #[test]
    fn oracle_d1_s2_against_series() {
        let s = c64(2.0, 0.0);
        let mut acc = Compensated::new();
        for n in 1..=400_000u64 {
            let c = chi8d(1, n).unwrap();
            if c != 0 {
                acc.add(c64(c as f64 / (n as f64 * n as f64), 0.0));
            }
        }
        // L(2, chi_8) = pi^2 / (8 sqrt 2)
        let exact = std::f64::consts::PI.powi(2) / (8.0 * 2f64.sqrt());
        let oracle = l_oracle(1, s).unwrap();
        assert!((oracle - acc.value()).norm() < 1e-9);
        assert!((oracle.re - exact).abs() < 1e-13);
    }

    #[test]
    fn character_orthogonality() {
        let total: i64 = (1..=24).map(|a| chi8d(3, a).unwrap() as i64).sum();
        assert_eq!(total, 0);
    }

    #[test]
    fn oracle_double_resolution() {
        for (d, s) in [(1, c64(0.5, 0.0)), (15, c64(0.52, 3.0)), (101, c64(0.5, 0.05))] {
            let a = l_oracle(d, s).unwrap();
            let b = l_oracle_with(d, s, 8).unwrap();
            assert!((a - b).norm() <= 1e-12 * (1.0 + b.norm()), "d={d}");
        }
        // L(1/2, chi_8), reference value
        let v = l_oracle(1, c64(0.5, 0.0)).unwrap();
        assert!((v.re - 0.373_691_712_912_547_3).abs() < 1e-12, "{v}");
    }

    #[test]
    fn oracle_errors() {
        assert!(l_oracle(2, c64(0.5, 0.0)).is_err());
        assert!(l_oracle(1, c64(0.3, 0.0)).is_err());
        assert!(matches!(l_oracle(12_505, c64(0.5, 0.0)), Err(Error::TooLarge(_))));
    }

    #[test]
    fn afe_d1_matches_oracle() {
        let l = l_afe(1, c64(0.0, 0.0), &AfeParams::default()).unwrap();
        assert!((l - l_oracle(1, c64(0.5, 0.0)).unwrap()).norm() < 1e-6);
    }

    #[test]
    fn afe_g_independence() {
        let p1 = AfeParams::default();
        let p2 = AfeParams::with_gspec(GSpec::gaussian(2.0 * crate::specfun::DEFAULT_KAPPA).unwrap());
        let a = l_afe(17, c64(0.0, 0.0), &p1).unwrap();
        let b = l_afe(17, c64(0.0, 0.0), &p2).unwrap();
        assert!((a - b).norm() < 1e-6);
    }

    #[test]
    fn afe_alpha_reflection() {
        let p = AfeParams::default();
        let alpha = c64(0.05, 0.0);
        let a = l_afe(5, alpha, &p).unwrap();
        let b = l_afe(5, -alpha, &p).unwrap();
        let x = crate::specfun::x_alpha_factor(5, alpha).unwrap();
        assert!((a - x * b).norm() < 1e-9);
    }

    #[test]
    fn afe_complex_alpha_against_oracle() {
        let p = AfeParams::default();
        for (d, alpha) in [(3, c64(0.02, 0.0)), (105, c64(0.0, 0.05)), (1999, c64(0.2, 4.0)), (7, c64(-0.08, -1.0))] {
            let a = l_afe(d, alpha, &p).unwrap();
            let o = l_oracle(d, alpha + 0.5).unwrap();
            assert!((a - o).norm() <= 1e-6 * (1.0 + o.norm()), "d={d}: {a} vs {o}");
        }
    }

    #[test]
    fn multiplier_truncation() {
        let p = AfeParams {
            truncation: Truncation::Multiplier(12.0),
            ..AfeParams::default()
        };
        let a = l_afe(33, c64(0.0, 0.0), &p).unwrap();
        let o = l_oracle(33, c64(0.5, 0.0)).unwrap();
        assert!((a - o).norm() < 1e-6);
    }

    #[test]
    fn evaluator_rejects() {
        let e = AfeEvaluator::new(c64(0.0, 0.0), &AfeParams::default(), 100).unwrap();
        assert!(e.eval(101).is_err());
        assert!(e.eval(9).is_err());
        let rz = AfeParams::with_gspec(GSpec::remark_zero(c64(0.1, 0.0)).unwrap());
        assert!(AfeEvaluator::new(c64(0.0, 0.0), &rz, 10).is_err());
    }
}
