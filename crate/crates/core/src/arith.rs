//! Integer kernels: Kronecker symbols, multiplicative-function sieves and
//! squarefree enumeration.

use std::sync::OnceLock;

use crate::error::{invalid, Error, Result};

/// Largest sieve we are willing to allocate (about 9 bytes per entry).
pub const MAX_SIEVE: u64 = 50_000_000;

/// Jacobi symbol `(a/n)` for odd positive `n`, binary algorithm.
pub fn jacobi(a: u64, n: u64) -> i8 {
    debug_assert!(n % 2 == 1);
    let mut a = a % n;
    let mut n = n;
    let mut t = 1i8;
    while a != 0 {
        let tz = a.trailing_zeros();
        a >>= tz;
        if tz % 2 == 1 && matches!(n % 8, 3 | 5) {
            t = -t;
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            t = -t;
        }
        a %= n;
    }
    if n == 1 {
        t
    } else {
        0
    }
}

/// Kronecker symbol `(a/n)` for arbitrary integers.
pub fn kronecker(a: i64, n: i64) -> i8 {
    if n == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    let mut k = 1i8;
    if n < 0 && a < 0 {
        k = -1;
    }
    let mut m = n.unsigned_abs();
    let v = m.trailing_zeros();
    if v > 0 {
        if a % 2 == 0 {
            return 0;
        }
        if v % 2 == 1 && matches!(a.rem_euclid(8), 3 | 5) {
            k = -k;
        }
        m >>= v;
    }
    let reduced = (a as i128).rem_euclid(m as i128) as u64;
    k * jacobi(reduced, m)
}

pub fn is_squarefree(n: u64) -> bool {
    if n == 0 {
        return false;
    }
    factorize(n).iter().all(|&(_, e)| e == 1)
}

/// Validates the discriminant parameter `d` of `chi_{8d}`.
pub fn check_odd_squarefree(d: u64, what: &str) -> Result<()> {
    if d == 0 || d % 2 == 0 || !is_squarefree(d) {
        return invalid(format!("{what} = {d} must be odd, squarefree and positive"));
    }
    Ok(())
}

/// The even primitive character `chi_{8d}(n) = (8d/n)` of conductor `8d`.
pub fn chi8d(d: u64, n: u64) -> Result<i8> {
    check_odd_squarefree(d, "d")?;
    if n == 0 {
        return invalid("n must be positive");
    }
    Ok(chi8d_unchecked(d, n))
}

#[inline]
pub(crate) fn chi8d_unchecked(d: u64, n: u64) -> i8 {
    if n % 2 == 0 {
        return 0;
    }
    // (8d/n) = (2/n)^3 (d/n) = (2/n)(d/n) for odd n
    let two = if matches!(n % 8, 3 | 5) { -1 } else { 1 };
    two * jacobi(d % n, n)
}

/// Trial-division factorization, ascending primes.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    if n < 2 {
        return out;
    }
    let tz = n.trailing_zeros();
    if tz > 0 {
        out.push((2, tz));
        n >>= tz;
    }
    let mut p = 3u64;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 2;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn prime_divisors(n: u64) -> Vec<u64> {
    factorize(n).into_iter().map(|(p, _)| p).collect()
}

/// Möbius function by trial division.
pub fn moebius(n: u64) -> i8 {
    let f = factorize(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Euler totient by trial division.
pub fn totient(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}

/// Primes `<= limit` by the sieve of Eratosthenes.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            primes.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    primes
}

/// Shared prime table for Euler products.
pub(crate) fn small_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| primes_up_to(1 << 20))
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Dense multiplicative-function tables up to `limit`.
#[derive(Clone, Debug)]
pub struct SieveTables {
    pub limit: u64,
    /// `moebius[n]` for `1 <= n <= limit`; index 0 is unused.
    pub moebius: Vec<i8>,
    pub totient: Vec<u64>,
    /// Smallest prime factor; `spf[1] = 1`.
    pub spf: Vec<u32>,
    pub primes: Vec<u64>,
    pub odd_squarefree: Vec<u64>,
}

/// Linear sieve for `mu`, `phi` and the smallest prime factor.
pub fn build_sieves(limit: u64) -> Result<SieveTables> {
    if limit == 0 {
        return invalid("sieve limit must be at least 1");
    }
    if limit > MAX_SIEVE {
        return Err(Error::TooLarge(format!(
            "sieve limit {limit} exceeds {MAX_SIEVE}"
        )));
    }
    let n = limit as usize;
    let mut moebius = vec![0i8; n + 1];
    let mut totient = vec![0u64; n + 1];
    let mut spf = vec![0u32; n + 1];
    let mut primes: Vec<u64> = Vec::new();
    moebius[1] = 1;
    totient[1] = 1;
    spf[1] = 1;
    for i in 2..=n {
        if spf[i] == 0 {
            spf[i] = i as u32;
            moebius[i] = -1;
            totient[i] = (i - 1) as u64;
            primes.push(i as u64);
        }
        for &p in &primes {
            let p = p as usize;
            let ip = i * p;
            if p > spf[i] as usize || ip > n {
                break;
            }
            spf[ip] = p as u32;
            if i % p == 0 {
                moebius[ip] = 0;
                totient[ip] = totient[i] * p as u64;
            } else {
                moebius[ip] = -moebius[i];
                totient[ip] = totient[i] * (p as u64 - 1);
            }
        }
    }
    let odd_squarefree = (1..=n)
        .step_by(2)
        .filter(|&i| moebius[i] != 0)
        .map(|i| i as u64)
        .collect();
    Ok(SieveTables {
        limit,
        moebius,
        totient,
        spf,
        primes,
        odd_squarefree,
    })
}

impl SieveTables {
    pub fn mu(&self, n: u64) -> i8 {
        self.moebius[n as usize]
    }

    pub fn phi(&self, n: u64) -> u64 {
        self.totient[n as usize]
    }

    pub fn covers(&self, n: u64) -> Result<()> {
        if n > self.limit {
            return Err(Error::SieveLimit {
                needed: n,
                limit: self.limit,
            });
        }
        Ok(())
    }

    /// Factorization through the smallest-prime-factor table.
    pub fn factorize(&self, mut n: u64) -> Vec<(u64, u32)> {
        let mut out: Vec<(u64, u32)> = Vec::new();
        while n > 1 {
            let p = self.spf[n as usize] as u64;
            n /= p;
            match out.last_mut() {
                Some((q, e)) if *q == p => *e += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }

    /// Odd squarefree integers in the closed interval `[lo, hi]`.
    pub fn odd_squarefree_in(&self, lo: u64, hi: u64) -> &[u64] {
        let start = self.odd_squarefree.partition_point(|&d| d < lo);
        let end = self.odd_squarefree.partition_point(|&d| d <= hi);
        &self.odd_squarefree[start..end.max(start)]
    }
}
