//! Gauss-type sums `G_k(n)` and the quadratic Poisson summation formula.

use std::f64::consts::PI;

use crate::arith::{factorize, jacobi, kronecker};
use crate::error::{invalid, Error, Result};
use crate::sum::Compensated;
use crate::weights::{trapezoid_flat, SmoothWeight};
use crate::{c64, C64};

/// Largest modulus accepted by the `O(n)` brute-force sum.
pub const BRUTE_MAX_N: u64 = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GaussMethod {
    Brute,
    Closed,
}

/// A value of `G_k(n)` tagged with how it was computed.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GaussSumValue {
    pub k: i64,
    pub n: u64,
    pub value: C64,
    pub method: GaussMethod,
}

impl GaussSumValue {
    pub fn compute(k: i64, n: u64, method: GaussMethod) -> Result<Self> {
        let value = match method {
            GaussMethod::Brute => gauss_brute(k, n)?,
            GaussMethod::Closed => gauss_closed(k, n)?,
        };
        Ok(Self { k, n, value, method })
    }
}

fn check_odd(n: u64) -> Result<()> {
    if n == 0 || n % 2 == 0 {
        return invalid(format!("Gauss sums need odd positive n, got {n}"));
    }
    Ok(())
}

fn prefactor(n: u64) -> C64 {
    // (1-i)/2 + (-1/n)(1+i)/2
    if n % 4 == 1 {
        c64(1.0, 0.0)
    } else {
        c64(0.0, -1.0)
    }
}

/// `G_k(n)` by direct summation over `a mod n`.
pub fn gauss_brute(k: i64, n: u64) -> Result<C64> {
    Ok(gauss_brute_many(n, &[k])?[0])
}

/// `G_k(n)` for several `k` sharing one symbol table.
pub fn gauss_brute_many(n: u64, ks: &[i64]) -> Result<Vec<C64>> {
    check_odd(n)?;
    if n > BRUTE_MAX_N {
        return Err(Error::TooLarge(format!("brute Gauss sum modulus {n} > {BRUTE_MAX_N}")));
    }
    let symbols: Vec<i8> = (0..n).map(|a| jacobi(a, n)).collect();
    let roots: Vec<C64> = (0..n)
        .map(|j| C64::from_polar(1.0, 2.0 * PI * j as f64 / n as f64))
        .collect();
    let pre = prefactor(n);
    Ok(ks
        .iter()
        .map(|&k| {
            let k = k.rem_euclid(n as i64) as u64;
            let mut acc = Compensated::new();
            let mut idx = 0u64;
            for &chi in &symbols {
                if chi != 0 {
                    acc.add(roots[idx as usize] * chi as f64);
                }
                idx += k;
                if idx >= n {
                    idx -= n;
                }
            }
            pre * acc.value()
        })
        .collect())
}

/// `G_k(p^beta)` from the prime-power case table.
pub fn gauss_prime_power(k: i64, p: u64, beta: u32) -> C64 {
    if beta == 0 {
        return c64(1.0, 0.0);
    }
    // alpha = v_p(k), infinite for k = 0
    let mut alpha = u32::MAX;
    let mut unit = k;
    if k != 0 {
        alpha = 0;
        while unit % p as i64 == 0 {
            unit /= p as i64;
            alpha += 1;
        }
    }
    let pf = p as f64;
    if beta <= alpha {
        if beta % 2 == 1 {
            c64(0.0, 0.0)
        } else {
            c64(pf.powi(beta as i32 - 1) * (pf - 1.0), 0.0)
        }
    } else if beta == alpha + 1 {
        let pa = pf.powi(alpha as i32);
        if beta % 2 == 0 {
            c64(-pa, 0.0)
        } else {
            c64(kronecker(unit, p as i64) as f64 * pa * pf.sqrt(), 0.0)
        }
    } else {
        c64(0.0, 0.0)
    }
}

/// `G_k(n)` by multiplicativity over `p^beta || n`.
pub fn gauss_closed(k: i64, n: u64) -> Result<C64> {
    check_odd(n)?;
    Ok(factorize(n)
        .into_iter()
        .fold(c64(1.0, 0.0), |acc, (p, beta)| acc * gauss_prime_power(k, p, beta)))
}

/// `int (cos 2 pi x y + sin 2 pi x y) F(x) dx` over the support `[x0, x1]`
/// of a function vanishing to all orders at both ends.
pub fn fhat<F>(f: F, support: (f64, f64), y: f64) -> Result<C64>
where
    F: Fn(f64) -> C64,
{
    let (x0, x1) = support;
    if !(x1 > x0) {
        return invalid("fhat needs a nonempty support");
    }
    let min_panels = (8.0 * y.abs() * (x1 - x0)).ceil() as usize;
    trapezoid_flat(
        |x| {
            let (s, c) = (2.0 * PI * x * y).sin_cos();
            f(x) * (c + s)
        },
        x0,
        x1,
        1e-15,
        min_panels,
    )
}

/// `fhat` of a bump weight.
pub fn fhat_weight(w: &SmoothWeight, y: f64) -> Result<C64> {
    fhat(|x| w.evaluate(x), w.support(), y)
}

/// Both sides of the Poisson formula and the size of the dropped `k` tail.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PoissonCheck {
    pub lhs: C64,
    pub rhs: C64,
    pub kmax: u64,
    pub tail_bound: f64,
}

impl PoissonCheck {
    pub fn discrepancy(&self) -> f64 {
        (self.lhs - self.rhs).norm()
    }
}

/// Bound enforced on the last retained dual terms.
pub const POISSON_TAIL_TOL: f64 = 1e-8;

/// Smallest `kmax` whose dual frequency `kmax Z / 2n` reaches 100.
pub fn default_kmax(n: u64, z: f64) -> u64 {
    ((200.0 * n as f64) / z).ceil().max(1.0) as u64
}

/// `sum_{d odd} (d/n) F(d/Z)` against
/// `(Z/2n)(2/n) sum_{|k| <= kmax} (-1)^k G_k(n) fhat(kZ/2n)`.
pub fn poisson_check(n: u64, z: f64, w: &SmoothWeight, kmax: u64) -> Result<PoissonCheck> {
    check_odd(n)?;
    if !(z > 0.0 && z.is_finite()) {
        return invalid(format!("scale Z = {z} must be positive"));
    }
    let (x0, x1) = w.support();
    let d_lo = (x0 * z).floor().max(1.0) as u64;
    let d_hi = (x1 * z).ceil() as u64;
    let mut lhs = Compensated::new();
    for d in (d_lo | 1..=d_hi).step_by(2) {
        let chi = jacobi(d, n);
        if chi != 0 {
            lhs.add(w.evaluate(d as f64 / z) * chi as f64);
        }
    }
    let scale = z / (2.0 * n as f64) * kronecker(2, n as i64) as f64;
    let ks: Vec<i64> = (-(kmax as i64)..=kmax as i64).collect();
    let gauss: Vec<C64> = ks
        .iter()
        .map(|&k| gauss_closed(k, n))
        .collect::<Result<_>>()?;
    let mut rhs = Compensated::new();
    let mut edge = 0.0f64;
    for (&k, g) in ks.iter().zip(&gauss) {
        if g.norm() == 0.0 {
            continue;
        }
        let fh = fhat_weight(w, k as f64 * z / (2.0 * n as f64))?;
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let term = *g * fh * (sign * scale);
        if k.unsigned_abs() == kmax {
            edge = edge.max(fh.norm());
        }
        rhs.add(term);
    }
    let tail_bound = scale.abs() * n as f64 * edge;
    if kmax > 0 && tail_bound > POISSON_TAIL_TOL {
        return Err(Error::TailNotConverged {
            bound: tail_bound,
            tolerance: POISSON_TAIL_TOL,
        });
    }
    Ok(PoissonCheck {
        lhs: lhs.value(),
        rhs: rhs.value(),
        kmax,
        tail_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::gcd;
    use proptest::prelude::*;

    #[test]
    fn brute_examples() {
        assert!((gauss_brute(7, 1).unwrap() - 1.0).norm() < 1e-15);
        assert!((gauss_brute(1, 3).unwrap() - 3f64.sqrt()).norm() < 1e-14);
        assert!(gauss_brute(0, 3).unwrap().norm() < 1e-14);
        assert!(gauss_brute(1, 4).is_err());
    }

    #[test]
    fn closed_examples() {
        assert_eq!(gauss_closed(0, 9).unwrap(), c64(6.0, 0.0));
        assert_eq!(gauss_closed(3, 9).unwrap(), c64(-3.0, 0.0));
        let g15 = gauss_closed(1, 15).unwrap();
        let prod = gauss_closed(1, 3).unwrap() * gauss_closed(1, 5).unwrap();
        assert!((g15 - prod).norm() < 1e-14);
        assert!((g15 - gauss_brute(1, 15).unwrap()).norm() < 1e-12);
    }

    #[test]
    fn closed_matches_brute_small() {
        for n in (1..=301u64).step_by(2) {
            let ks: Vec<i64> = (-30..=30).collect();
            let brute = gauss_brute_many(n, &ks).unwrap();
            for (&k, b) in ks.iter().zip(&brute) {
                let c = gauss_closed(k, n).unwrap();
                assert!((c - b).norm() <= 1e-9 * n as f64, "k={k} n={n}: {c} vs {b}");
            }
        }
    }

    #[test]
    fn prime_moduli_magnitudes() {
        for p in [3u64, 5, 7, 11, 101] {
            for k in 1..p as i64 {
                let g = gauss_closed(k, p).unwrap().norm();
                assert!((g - (p as f64).sqrt()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn fhat_examples() {
        let w = SmoothWeight::bump12();
        let total = w.mellin(c64(1.0, 0.0));
        assert!((fhat_weight(&w, 0.0).unwrap() - total).norm() < 1e-14);
        for y in [50.0, 80.0, -120.0] {
            assert!(fhat_weight(&w, y).unwrap().norm() <= 1e-6);
        }
        let twice = fhat(|x| w.evaluate(x) * 2.0, w.support(), 1.7).unwrap();
        assert!((twice - fhat_weight(&w, 1.7).unwrap() * 2.0).norm() < 1e-15);
    }

    #[test]
    fn poisson_examples() {
        let w = SmoothWeight::bump12();
        for (n, z) in [(1u64, 500.0), (3, 1000.0), (15, 1000.0)] {
            let c = poisson_check(n, z, &w, default_kmax(n, z)).unwrap();
            assert!(c.discrepancy() < 1e-6, "n={n}: {c:?}");
        }
    }

    #[test]
    fn poisson_tail_error() {
        let w = SmoothWeight::bump12();
        // kZ/2n = 1 is nowhere near the decay region
        assert!(matches!(
            poisson_check(15, 30.0, &w, 1),
            Err(Error::TailNotConverged { .. })
        ));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]
        #[test]
        fn multiplicativity(m in 0u64..150, n in 0u64..150, k in -200i64..200) {
            let (m, n) = (2 * m + 1, 2 * n + 1);
            prop_assume!(gcd(m, n) == 1);
            let lhs = gauss_closed(k, m * n).unwrap();
            let rhs = gauss_closed(k, m).unwrap() * gauss_closed(k, n).unwrap();
            prop_assert!((lhs - rhs).norm() < 1e-9);
            let brute = gauss_brute(k, m * n).unwrap();
            prop_assert!((brute - rhs).norm() <= 1e-9 * (m * n) as f64);
        }
    }
}
