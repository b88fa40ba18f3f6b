//! Dirichlet-series and Euler-product identities: `B_alpha(l)`,
//! `C(w, alpha + s)`, `H(k1, l; v, w)`, `J_p`, `H_{-1}` and
//! `A_{eps,l}(u, w)`, each with a closed form and a truncated-sum oracle.

use crate::arith::{
    build_sieves, check_odd_squarefree, factorize, gcd, is_squarefree, kronecker, prime_divisors, small_primes,
};
use crate::error::{invalid, Error, Result};
use crate::gauss::gauss_prime_power;
use crate::specfun::{real_char_l, rpow, zeta_excl};
#[cfg(test)]
use crate::arith::totient;
use crate::sum::Compensated;
use crate::{c64, C64};

/// Default prime cutoff for accelerated Euler products.
pub const DEFAULT_PMAX: u64 = 1 << 17;

const ONE: C64 = C64 { re: 1.0, im: 0.0 };

#[inline]
fn pneg(p: f64, s: C64) -> C64 {
    rpow(p, -s)
}

fn merged(a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut v: Vec<u64> = a.iter().chain(b).copied().collect();
    v.sort_unstable();
    v.dedup();
    v
}

/// `prod_{p not in excluded} f(p)` where `f(p) ~ prod_j (1 - p^{-e_j})^{c_j}`.
///
/// The leading factors are summed exactly as `zeta_excl(e_j)^{-c_j}`; the
/// remaining ratio is multiplied out over `p <= pmax`.
pub fn euler_product<F>(excluded: &[u64], leading: &[(C64, i32)], pmax: u64, f: F) -> Result<C64>
where
    F: Fn(f64) -> C64,
{
    let mut value = ONE;
    for &(e, c) in leading {
        value *= zeta_excl(e, excluded)?.powi(-c);
    }
    let primes = small_primes();
    if pmax > *primes.last().unwrap() {
        return Err(Error::TooLarge(format!("Euler product cutoff {pmax}")));
    }
    let mut tail = ONE;
    for &p in primes.iter().take_while(|&&p| p <= pmax) {
        if excluded.contains(&p) {
            continue;
        }
        let pf = p as f64;
        let mut lead = ONE;
        for &(e, c) in leading {
            lead *= (ONE - pneg(pf, e)).powi(c);
        }
        tail *= f(pf) / lead;
    }
    Ok(value * tail)
}

// ---------------------------------------------------------------- B_alpha

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BMode {
    /// Moebius-convolved Dirichlet series over odd squarefree `m`.
    Series,
    /// `prod_{p|l} (1+1/p)^{-1} prod_{p nmid 2l} (1 - p^{-2-2alpha}/(1+1/p))`.
    Euler2,
    /// `zeta_2(2) phi(l)/l prod_{p nmid 2l} (1 - p^{-2} - p^{-2-2alpha} + p^{-3-2alpha})`.
    Euler3,
}

/// Truncation of the `Series` mode.
pub const B_SERIES_TERMS: u64 = 1_000_000;

/// `prod_{p|l} (1 + 1/p)^{-1}`.
pub(crate) fn lift_l(l: u64) -> f64 {
    prime_divisors(l)
        .into_iter()
        .map(|p| 1.0 / (1.0 + 1.0 / p as f64))
        .product()
}

/// `B_alpha(l)`.
pub fn b_alpha(l: u64, alpha: C64, mode: BMode) -> Result<C64> {
    check_odd_squarefree(l, "l")?;
    let lp = prime_divisors(l);
    let excl = merged(&[2], &lp);
    match mode {
        BMode::Series => {
            if alpha.re <= 0.0 {
                return Err(Error::ConvergenceRegion(format!(
                    "B series mode needs Re alpha > 0, got {alpha}"
                )));
            }
            b_series(l, alpha, B_SERIES_TERMS)
        }
        BMode::Euler2 | BMode::Euler3 if alpha.re <= -0.45 => Err(Error::ConvergenceRegion(
            format!("B Euler products need Re alpha > -0.45, got {alpha}"),
        )),
        BMode::Euler2 => {
            let x = alpha * 2.0 + 2.0;
            let prod = euler_product(&excl, &[(x, 1)], DEFAULT_PMAX, |p| {
                ONE - pneg(p, x) / (1.0 + 1.0 / p)
            })?;
            Ok(prod * lift_l(l))
        }
        BMode::Euler3 => {
            let x = alpha * 2.0 + 2.0;
            let prod = euler_product(&excl, &[(c64(2.0, 0.0), 1), (x, 1)], DEFAULT_PMAX, |p| {
                ONE - 1.0 / (p * p) - pneg(p, x) + pneg(p, x + 1.0)
            })?;
            let zeta2_2 = zeta_excl(c64(2.0, 0.0), &[2])?;
            let phi_over_l: f64 = lp.iter().map(|&p| 1.0 - 1.0 / p as f64).product();
            Ok(zeta2_2 * phi_over_l * prod)
        }
    }
}

fn b_series(l: u64, alpha: C64, n_max: u64) -> Result<C64> {
    let sieve = build_sieves(n_max)?;
    let x = alpha * 2.0 + 1.0;
    let mut acc = Compensated::new();
    for &m in &sieve.odd_squarefree {
        if gcd(m, l) != 1 {
            continue;
        }
        let mut coeff = 1.0;
        let mut r = m;
        while r > 1 {
            let p = sieve.spf[r as usize] as u64;
            coeff *= -1.0 / (p as f64 + 1.0);
            r /= p;
        }
        acc.add(pneg(m as f64, x) * coeff);
    }
    Ok(acc.value() * lift_l(l))
}

/// The defining sum `sum_{n odd <= n_max} n^{-1-2alpha} prod_{p|nl}(1+1/p)^{-1}`
/// divided by `zeta_2(1 + 2 alpha)`.
pub fn b_definition_sum(l: u64, alpha: C64, n_max: u64) -> Result<C64> {
    check_odd_squarefree(l, "l")?;
    if alpha.re <= 0.0 {
        return Err(Error::ConvergenceRegion("definition sum needs Re alpha > 0".into()));
    }
    let sieve = build_sieves(n_max)?;
    let x = alpha * 2.0 + 1.0;
    let lp = prime_divisors(l);
    let mut acc = Compensated::new();
    for n in (1..=n_max).step_by(2) {
        let mut primes: Vec<u64> = sieve.factorize(n).into_iter().map(|(p, _)| p).collect();
        primes.extend(&lp);
        primes.sort_unstable();
        primes.dedup();
        let h: f64 = primes.iter().map(|&p| 1.0 / (1.0 + 1.0 / p as f64)).product();
        acc.add(pneg(n as f64, x) * h);
    }
    Ok(acc.value() / zeta_excl(x, &[2])?)
}

// ---------------------------------------------------------------- a-sums

/// Which part of a sum over squarefree `a` coprime to `2l` to take.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ARange {
    Full,
    /// `a <= Y`.
    Head(f64),
    /// `a > Y`.
    Tail(f64),
}

/// Squarefree `a` with `mu(a)` and prime factors.
pub(crate) type Heads = Vec<(u64, i8, Vec<u64>)>;

/// Squarefree `a <= y`, coprime to `2l`, with `mu(a)` and prime factors.
pub(crate) fn squarefree_heads(l: u64, y: f64) -> Result<Heads> {
    let y = y.floor().max(0.0) as u64;
    if y == 0 {
        return Ok(Vec::new());
    }
    let sieve = build_sieves(y)?;
    Ok(sieve
        .odd_squarefree
        .iter()
        .filter(|&&a| gcd(a, l) == 1)
        .map(|&a| {
            let ps: Vec<u64> = sieve.factorize(a).into_iter().map(|(p, _)| p).collect();
            (a, sieve.mu(a), ps)
        })
        .collect())
}

fn split_range<F, G>(range: ARange, heads: Option<&Heads>, l: u64, full: F, term: G) -> Result<C64>
where
    F: FnOnce() -> Result<C64>,
    G: Fn(u64, i8, &[u64]) -> C64,
{
    let head = |y: f64| -> Result<C64> {
        let owned;
        let list = match heads {
            Some(h) => h,
            None => {
                owned = squarefree_heads(l, y)?;
                &owned
            }
        };
        let acc: Compensated = list
            .iter()
            .filter(|(a, _, _)| *a as f64 <= y)
            .map(|(a, mu, ps)| term(*a, *mu, ps))
            .collect();
        Ok(acc.value())
    };
    match range {
        ARange::Full => full(),
        ARange::Head(y) => head(y),
        ARange::Tail(y) => Ok(full()? - head(y)?),
    }
}

/// `sum_{(a,2l)=1} mu(a) a^{-2} zeta_{2a}(1+2z) / zeta_{2al}(2+2z)`.
pub fn a_sum_plus(z: C64, l: u64, range: ARange) -> Result<C64> {
    a_sum_plus_with(z, l, range, DEFAULT_PMAX)
}

pub fn a_sum_plus_with(z: C64, l: u64, range: ARange, pmax: u64) -> Result<C64> {
    a_sum_plus_impl(z, l, range, None, pmax)
}

pub(crate) fn a_sum_plus_impl(
    z: C64,
    l: u64,
    range: ARange,
    heads: Option<&Heads>,
    pmax: u64,
) -> Result<C64> {
    check_odd_squarefree(l, "l")?;
    let x = z * 2.0 + 1.0;
    let y = z * 2.0 + 2.0;
    let excl = merged(&[2], &prime_divisors(l));
    let zeta2_x = zeta_excl(x, &[2])?;
    let full = || -> Result<C64> {
        let prod = euler_product(&excl, &[(c64(2.0, 0.0), 1), (y, 1)], pmax, |p| {
            ONE - pneg(p, y) - 1.0 / (p * p) + pneg(p, x + 2.0)
        })?;
        Ok(zeta2_x * prod)
    };
    let inv_zeta_2l_y = ONE / zeta_excl(y, &excl)?;
    split_range(range, heads, l, full, |a, mu, ps| {
        let local: C64 = ps
            .iter()
            .map(|&p| (ONE - pneg(p as f64, x)) / (ONE - pneg(p as f64, y)))
            .product();
        zeta2_x * inv_zeta_2l_y * local * (mu as f64 / (a as f64 * a as f64))
    })
}

/// `sum_{(a,2l)=1} mu(a) a^{-t} prod_{p|a} (1+1/p)^{-1}`.
pub fn a_sum_minus(t: C64, l: u64, range: ARange) -> Result<C64> {
    a_sum_minus_with(t, l, range, DEFAULT_PMAX)
}

pub fn a_sum_minus_with(t: C64, l: u64, range: ARange, pmax: u64) -> Result<C64> {
    a_sum_minus_impl(t, l, range, None, pmax)
}

pub(crate) fn a_sum_minus_impl(
    t: C64,
    l: u64,
    range: ARange,
    heads: Option<&Heads>,
    pmax: u64,
) -> Result<C64> {
    check_odd_squarefree(l, "l")?;
    if t.re <= 1.05 {
        return Err(Error::ConvergenceRegion(format!("a-sum needs Re t > 1.05, got {t}")));
    }
    let excl = merged(&[2], &prime_divisors(l));
    let full = || euler_product(&excl, &[(t, 1)], pmax, |p| ONE - pneg(p, t) / (1.0 + 1.0 / p));
    split_range(range, heads, l, full, |a, mu, ps| {
        let h: f64 = ps.iter().map(|&p| 1.0 / (1.0 + 1.0 / p as f64)).product();
        pneg(a as f64, t) * (mu as f64 * h)
    })
}

// ---------------------------------------------------------------- C

/// `w = +(alpha + s)` or `w = -(alpha + s)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WChoice {
    Plus,
    Minus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesMode {
    Brute,
    Closed,
}

/// Cutoff in `c` for the brute `C` sum.
pub const C_BRUTE_CUTOFF: u64 = 1 << 21;

/// `C(w, z)` with `z = alpha + s`.
pub fn c_series(w: WChoice, z: C64, l: u64, y: f64, mode: SeriesMode) -> Result<C64> {
    match mode {
        SeriesMode::Closed => c_closed(w, z, l, y),
        SeriesMode::Brute => c_brute(w, z, l, y, C_BRUTE_CUTOFF),
    }
}

fn c_closed(w: WChoice, z: C64, l: u64, y: f64) -> Result<C64> {
    check_odd_squarefree(l, "l")?;
    let lp = prime_divisors(l);
    match w {
        WChoice::Plus => {
            let zeta2_2 = zeta_excl(c64(2.0, 0.0), &[2])?;
            let phi_over_l: f64 = lp.iter().map(|&p| 1.0 - 1.0 / p as f64).product();
            Ok(zeta2_2 * phi_over_l * a_sum_plus(z, l, ARange::Tail(y))?)
        }
        WChoice::Minus => {
            let zeta2 = zeta_excl(ONE - z * 2.0, &[2])?;
            Ok(zeta2 * lift_l(l) * a_sum_minus(c64(2.0, 0.0) - z * 2.0, l, ARange::Tail(y))?)
        }
    }
}

/// Truncated triple sum over `(c, a | c, r | c)`, with `zeta_2(1+2w) B_w(lr)`
/// expanded multiplicatively in `r`, extrapolated in the cutoff.
pub fn c_brute(w: WChoice, z: C64, l: u64, y: f64, cmax: u64) -> Result<C64> {
    check_odd_squarefree(l, "l")?;
    let wv = match w {
        WChoice::Plus => z,
        WChoice::Minus => -z,
    };
    let cexp = wv - z + 2.0;
    let rexp = wv + z + 1.0;
    if cexp.re < 1.3 {
        return Err(Error::ConvergenceRegion(format!("c-sum exponent {cexp} below 1.3")));
    }
    let b_l = b_alpha(l, wv, BMode::Euler2)? * zeta_excl(wv * 2.0 + 1.0, &[2])?;
    let bx = wv * 2.0 + 2.0;
    let sieve = build_sieves(cmax)?;
    let half = cmax / 2;
    let mut acc_half = C64::new(0.0, 0.0);
    let mut acc = Compensated::new();
    let mut divisors: Vec<u64> = Vec::with_capacity(64);
    let mut captured = false;
    for c in (1..=cmax).step_by(2) {
        if c > half && !captured {
            acc_half = acc.value();
            captured = true;
        }
        if c > 1 && gcd(c, l) != 1 {
            continue;
        }
        let ps: Vec<u64> = sieve.factorize(c).into_iter().map(|(p, _)| p).collect();
        // sum over squarefree a | c with a > Y
        divisors.clear();
        divisors.push(1);
        for &p in &ps {
            for i in 0..divisors.len() {
                divisors.push(divisors[i] * p);
            }
        }
        let asum: i64 = divisors
            .iter()
            .filter(|&&a| a as f64 > y)
            .map(|&a| moebius_from(&ps, a))
            .sum();
        if asum != 0 {
            // sum_{r | c} mu(r) r^{-rexp} B_w(lr)/B_w(l)
            let mut rsum = ONE;
            for &p in &ps {
                let pf = p as f64;
                let lift = (1.0 / (1.0 + 1.0 / pf)) / (ONE - pneg(pf, bx) / (1.0 + 1.0 / pf));
                rsum *= ONE - pneg(pf, rexp) * lift;
            }
            acc.add(pneg(c as f64, cexp) * rsum * asum as f64);
        }
    }
    let full = acc.value();
    // tail ~ K C^{1 - cexp}
    let r = rpow(2.0, cexp - 1.0);
    let extrapolated = (r * full - acc_half) / (r - 1.0);
    Ok(b_l * extrapolated)
}

fn moebius_from(primes: &[u64], a: u64) -> i64 {
    let k = primes.iter().filter(|&&p| a % p == 0).count();
    if k % 2 == 0 {
        1
    } else {
        -1
    }
}

/// The `p`-local factor of the `C(w, z)` product for `p | a` or `p nmid a`,
/// in the form before the case split.
pub fn c_local_factor(w: WChoice, z: C64, p: u64, p_divides_a: bool) -> C64 {
    let pf = p as f64;
    let wv = match w {
        WChoice::Plus => z,
        WChoice::Minus => -z,
    };
    let g = if p_divides_a { 1.0 } else { 1.0 / pf };
    let lift = 1.0 / (1.0 + 1.0 / pf);
    let q = pneg(pf, wv * 2.0 + 1.0);
    ONE - q + q * lift - pneg(pf, z + wv + 1.0) * rpow(g, wv - z + 2.0) * lift
}

/// The same factor as a truncated sum over `r in {0,1}`, `j >= 0`.
pub fn c_local_factor_brute(w: WChoice, z: C64, p: u64, p_divides_a: bool, jmax: u32) -> C64 {
    let pf = p as f64;
    let wv = match w {
        WChoice::Plus => z,
        WChoice::Minus => -z,
    };
    let g = if p_divides_a { 1.0 } else { 1.0 / pf };
    let lift = 1.0 / (1.0 + 1.0 / pf);
    let mut acc = Compensated::new();
    for r in 0..=1u32 {
        for j in 0..=jmax {
            let mut term = pneg(pf, (wv * 2.0 + 1.0) * j as f64);
            if r == 1 {
                term *= -pneg(pf, z + wv + 1.0) * rpow(g, wv - z + 2.0);
            }
            if j + r > 0 {
                term *= lift;
            }
            acc.add(term);
        }
    }
    acc.value() * (ONE - pneg(pf, wv * 2.0 + 1.0))
}

// ---------------------------------------------------------------- J_p, H

/// `L_E(s, chi_k)`, with the principal case valid up to the pole at 1.
fn char_l(s: C64, k: i64, excluded: &[u64]) -> Result<C64> {
    if k == 1 {
        zeta_excl(s, excluded)
    } else {
        real_char_l(s, k, excluded)
    }
}

fn check_odd_prime(p: u64) -> Result<()> {
    if p < 3 || p % 2 == 0 || factorize(p).len() != 1 || factorize(p)[0].1 != 1 {
        return invalid(format!("{p} is not an odd prime"));
    }
    Ok(())
}

/// `H_p(k1; v, w)`, the local factor at `p nmid 2al`.
pub fn h_local(k1: i64, p: u64, v: C64, w: C64) -> Result<C64> {
    check_odd_prime(p)?;
    let pf = p as f64;
    let chi = kronecker(k1, p as i64) as f64;
    let den = (ONE - pneg(pf, v)) * (ONE - pneg(pf, v + w * 2.0)) * (ONE - pneg(pf, w + 0.5) * chi);
    if den.norm() == 0.0 {
        return Err(Error::Pole {
            function: "H_p",
            at: format!("p={p}, v={v}, w={w}"),
        });
    }
    Ok((ONE - pneg(pf, w * 2.0 + 1.0)) * (ONE - pneg(pf, v + w + 0.5) * chi) / den)
}

/// `J_p(k1; v, w)`.
pub fn j_p(k1: i64, p: u64, v: C64, w: C64) -> Result<C64> {
    check_odd_prime(p)?;
    let pf = p as f64;
    let chi = kronecker(k1, p as i64) as f64;
    let a = ONE - pneg(pf, v + w * 2.0);
    let b = ONE - pneg(pf, w + 0.5) * chi;
    let den = (ONE - pneg(pf, v)) * a * b;
    if den.norm() == 0.0 {
        return Err(Error::Pole {
            function: "J_p",
            at: format!("p={p}, v={v}, w={w}"),
        });
    }
    let num = -(a * b) + (ONE - pneg(pf, w * 2.0 + 1.0)) * (ONE - pneg(pf, v + w + 0.5) * chi);
    Ok(rpow(pf, w) * num / den)
}

/// `J_p` as the truncated double sum `sum_{j,r} G_{k1 p^{2j}}(p^{r+1}) / p^{r+1+jv+rw}`.
pub fn j_p_brute(k1: i64, p: u64, v: C64, w: C64, jmax: u32, rmax: u32) -> Result<C64> {
    check_odd_prime(p)?;
    let pf = p as f64;
    let mut acc = Compensated::new();
    for j in 0..=jmax {
        let k = k1 as i128 * (p as i128).pow(2 * j);
        if k.unsigned_abs() > i64::MAX as u128 {
            break;
        }
        for r in 0..=rmax {
            let g = gauss_prime_power(k as i64, p, r + 1);
            if g.norm() == 0.0 {
                continue;
            }
            acc.add(g / pf.powi(r as i32 + 1) * pneg(pf, v * j as f64 + w * r as f64));
        }
    }
    Ok(acc.value())
}

/// Truncations of the brute `H`/`A` double sums.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BruteLimits {
    pub n_max: u64,
    pub k2_max: u64,
    /// Largest squarefree `k1` (the `A` series only).
    pub k1_max: u64,
}

impl Default for BruteLimits {
    fn default() -> Self {
        Self {
            n_max: 2000,
            k2_max: 200,
            k1_max: 60,
        }
    }
}

/// Which `k2` enter a brute `H` sum.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum K2Weights {
    All,
    /// `(-1)^{k2}`.
    Alternating,
    EvenOnly,
}

fn h_region(v: C64, w: C64) -> Result<()> {
    if v.re < 2.0 || w.re < 1.2 {
        return Err(Error::ConvergenceRegion(format!(
            "brute H needs Re v >= 2, Re w >= 1.2 (v={v}, w={w})"
        )));
    }
    Ok(())
}

/// `G_k(m)/m` from a factorization of `m`.
fn gauss_normalized(k: i64, factors: &[(u64, u32)]) -> C64 {
    let mut acc = ONE;
    for &(p, beta) in factors {
        let g = gauss_prime_power(k, p, beta);
        if g.norm() == 0.0 {
            return C64::new(0.0, 0.0);
        }
        acc *= g / (p as f64).powi(beta as i32);
    }
    acc
}

fn merge_factors(a: &[(u64, u32)], b: &[(u64, u32)]) -> Vec<(u64, u32)> {
    let mut out: Vec<(u64, u32)> = a.to_vec();
    for &(p, e) in b {
        match out.iter_mut().find(|(q, _)| *q == p) {
            Some(slot) => slot.1 += e,
            None => out.push((p, e)),
        }
    }
    out
}

struct NTable {
    factors: Vec<Vec<(u64, u32)>>,
    weights: Vec<C64>,
}

fn n_table(l: u64, a: u64, w: C64, n_max: u64) -> Result<NTable> {
    let sieve = build_sieves(n_max)?;
    let lf = factorize(l);
    let mut factors = Vec::new();
    let mut weights = Vec::new();
    for n in (1..=n_max).step_by(2) {
        if gcd(n, a) != 1 {
            continue;
        }
        factors.push(merge_factors(&sieve.factorize(n), &lf));
        weights.push(pneg(n as f64, w));
    }
    Ok(NTable { factors, weights })
}

/// Brute `sum_{k2 <= K2} sum_{n <= N, (n,2a)=1} G_{k1 k2^2}(ln)/(ln) k2^{-v} n^{-w}`.
pub fn h_brute(k1: i64, l: u64, a: u64, v: C64, w: C64, lim: BruteLimits, k2w: K2Weights) -> Result<C64> {
    check_h_args(k1, l, a)?;
    h_region(v, w)?;
    h_brute_unchecked(k1, l, a, v, w, lim, k2w)
}

fn h_brute_unchecked(
    k1: i64,
    l: u64,
    a: u64,
    v: C64,
    w: C64,
    lim: BruteLimits,
    k2w: K2Weights,
) -> Result<C64> {
    let table = n_table(l, a, w, lim.n_max)?;
    let mut acc = Compensated::new();
    for k2 in 1..=lim.k2_max {
        let sign = match k2w {
            K2Weights::All => 1.0,
            K2Weights::Alternating => if k2 % 2 == 0 { 1.0 } else { -1.0 },
            K2Weights::EvenOnly => if k2 % 2 == 0 { 1.0 } else { continue },
        };
        let k = k1 * (k2 * k2) as i64;
        let kw = pneg(k2 as f64, v) * sign;
        let mut inner = Compensated::new();
        for (f, nw) in table.factors.iter().zip(&table.weights) {
            let g = gauss_normalized(k, f);
            if g.norm() != 0.0 {
                inner.add(g * *nw);
            }
        }
        acc.add(inner.value() * kw);
    }
    Ok(acc.value())
}

fn check_h_args(k1: i64, l: u64, a: u64) -> Result<()> {
    check_odd_squarefree(l, "l")?;
    if k1 == 0 || !is_squarefree(k1.unsigned_abs()) {
        return invalid(format!("k1 = {k1} must be nonzero squarefree"));
    }
    if a == 0 || a % 2 == 0 {
        return invalid(format!("a = {a} must be odd positive"));
    }
    if gcd(a, l) != 1 {
        return invalid(format!("a = {a} must be coprime to l = {l}"));
    }
    Ok(())
}

/// Closed form of `H(k1, l; v, w)`.
pub fn h_closed(k1: i64, l: u64, a: u64, v: C64, w: C64) -> Result<C64> {
    check_h_args(k1, l, a)?;
    let lp = prime_divisors(l);
    let excl = merged(&merged(&[2], &prime_divisors(a)), &lp);
    let num = zeta_excl(v, &lp)?
        * zeta_excl(v + w * 2.0, &excl)?
        * char_l(w + 0.5, k1, &excl)?;
    let den = zeta_excl(w * 2.0 + 1.0, &excl)? * char_l(v + w + 0.5, k1, &excl)?;
    let mut value = num / den;
    for &p in &lp {
        value *= j_p(k1, p, v, w)?;
    }
    Ok(value)
}

pub fn h_series(k1: i64, l: u64, a: u64, v: C64, w: C64, mode: SeriesMode) -> Result<C64> {
    match mode {
        SeriesMode::Closed => h_closed(k1, l, a, v, w),
        SeriesMode::Brute => h_brute(k1, l, a, v, w, BruteLimits::default(), K2Weights::All),
    }
}

/// `H_{-1} = (2^{1-v} - 1) H`, or the brute sum with `(-1)^{k2}`.
pub fn h_minus1(k1: i64, l: u64, a: u64, v: C64, w: C64, mode: SeriesMode) -> Result<C64> {
    match mode {
        SeriesMode::Closed => Ok((rpow(2.0, ONE - v) - 1.0) * h_closed(k1, l, a, v, w)?),
        SeriesMode::Brute => h_brute(k1, l, a, v, w, BruteLimits::default(), K2Weights::Alternating),
    }
}

// ---------------------------------------------------------------- A

fn a_region(u: C64, w: C64) -> Result<()> {
    if u.re < 1.5 || w.re < 1.2 {
        return Err(Error::ConvergenceRegion(format!(
            "brute A needs Re u >= 1.5, Re w >= 1.2 (u={u}, w={w})"
        )));
    }
    Ok(())
}

fn check_eps(eps: i64) -> Result<()> {
    if eps != 1 && eps != -1 {
        return invalid(format!("epsilon must be +-1, got {eps}"));
    }
    Ok(())
}

/// `A_{eps,l}(u, w)` restricted to squarefree parts `k1 <= K1` on both sides.
pub fn a_series(eps: i64, l: u64, a: u64, u: C64, w: C64, mode: SeriesMode) -> Result<C64> {
    let lim = BruteLimits {
        n_max: 2000,
        k2_max: 60,
        k1_max: 60,
    };
    match mode {
        SeriesMode::Closed => a_closed(eps, l, a, u, w, lim.k1_max),
        SeriesMode::Brute => a_brute(eps, l, a, u, w, lim),
    }
}

/// Literal double sum over `n` and `k = k1 k2^2` with `(-1)^k`.
pub fn a_brute(eps: i64, l: u64, a: u64, u: C64, w: C64, lim: BruteLimits) -> Result<C64> {
    check_eps(eps)?;
    check_h_args(1, l, a)?;
    a_region(u, w)?;
    let table = n_table(l, a, w, lim.n_max)?;
    let mut acc = Compensated::new();
    for k1 in (1..=lim.k1_max).filter(|&k| is_squarefree(k)) {
        for k2 in 1..=lim.k2_max {
            let k = k1 * k2 * k2;
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            let kk = eps * k as i64;
            let kw = pneg(k as f64, u) * sign;
            let mut inner = Compensated::new();
            for (f, nw) in table.factors.iter().zip(&table.weights) {
                let g = gauss_normalized(kk, f);
                if g.norm() != 0.0 {
                    inner.add(g * *nw);
                }
            }
            acc.add(inner.value() * kw);
        }
    }
    Ok(acc.value())
}

/// Closed form summed over squarefree `k1 <= k1_max`.
pub fn a_closed(eps: i64, l: u64, a: u64, u: C64, w: C64, k1_max: u64) -> Result<C64> {
    let acc: Compensated = (1..=k1_max)
        .filter(|&k| is_squarefree(k))
        .map(|k1| a_closed_term(eps, k1, l, a, u, w))
        .collect::<Result<_>>()?;
    Ok(acc.value())
}

/// The `k1` term of the closed `A_{eps,l}(u, w)`.
pub fn a_closed_term(eps: i64, k1: u64, l: u64, a: u64, u: C64, w: C64) -> Result<C64> {
    check_eps(eps)?;
    check_h_args(1, l, a)?;
    if k1 == 0 || !is_squarefree(k1) {
        return invalid(format!("k1 = {k1} must be positive squarefree"));
    }
    let lp = prime_divisors(l);
    let excl = merged(&merged(&[2], &prime_divisors(a)), &lp);
    let v = u * 2.0;
    let ek = eps * k1 as i64;
    let mut term = zeta_excl(v, &lp)? * zeta_excl(v + w * 2.0, &excl)?
        / zeta_excl(w * 2.0 + 1.0, &excl)?
        * pneg(k1 as f64, u)
        * char_l(w + 0.5, ek, &excl)?
        / char_l(v + w + 0.5, ek, &excl)?;
    if k1 % 2 == 1 {
        term *= rpow(2.0, ONE - v) - 1.0;
    }
    for &p in &lp {
        term *= j_p(ek, p, v, w)?;
    }
    Ok(term)
}
