use crate::arith::{prime_divisors, totient};
use crate::error::{invalid, Result};
use crate::series::{a_sum_minus_impl, a_sum_plus_impl, lift_l, squarefree_heads, ARange, Heads};
use crate::specfun::{big_g_unchecked, g_alpha, gamma_alpha, rpow, zeta_excl, GSpec, ShiftTwist};
use crate::weights::{integrate_vertical, ContourSpec, SmoothWeight};
use crate::{c64, C64};

use super::{main_term_parts, zeta2_2};

/// Prime cutoff of the Euler products evaluated at every quadrature node.
pub const PIECE_PMAX: u64 = 1 << 15;

/// Absolute tolerance on the last height-doubling strip.
const STRIP_TOL: f64 = 1e-13;

/// Contour used for the pieces: `|Re s| = 0.05`, initial height 8.
pub fn moment_contour() -> ContourSpec {
    ContourSpec::new(0.05, 8.0, 0.008).expect("valid contour")
}

struct Setup {
    x: f64,
    alpha: C64,
    l: u64,
    gspec: GSpec,
    eps: f64,
    step: f64,
    height: f64,
}

fn setup(x: f64, st: ShiftTwist, contour: ContourSpec) -> Result<Setup> {
    let gspec = GSpec::remark_zero(st.alpha)?;
    contour.validate()?;
    let eps = contour.abscissa.abs();
    if !(eps > 0.0 && eps < 0.25) {
        return invalid(format!("contour offset {eps} must lie in (0, 1/4)"));
    }
    Ok(Setup {
        x,
        alpha: st.alpha,
        l: st.l,
        gspec,
        eps,
        // the 1/s pole sits eps away from the line
        step: contour.step.min(eps / 6.0),
        height: contour.height,
    })
}

impl Setup {
    /// `Phi~(1 + s/2) G(s)/s g_alpha(s) X^{s/2}`.
    fn common(&self, weight: &SmoothWeight, s: C64) -> Result<C64> {
        Ok(weight.mellin(s * 0.5 + 1.0) * big_g_unchecked(s, &self.gspec) / s
            * g_alpha(s, self.alpha)?
            * rpow(self.x, s * 0.5))
    }

    fn integrate<F>(&self, abscissa: f64, f: F) -> Result<C64>
    where
        F: Fn(C64) -> Result<C64>,
    {
        integrate_vertical(f, abscissa, self.step, self.height, STRIP_TOL)
    }
}

fn phi_over(n: u64) -> f64 {
    totient(n) as f64 / n as f64
}

fn excl(extra: &[u64], more: &[u64]) -> Vec<u64> {
    let mut v: Vec<u64> = std::iter::once(2).chain(extra.iter().copied()).chain(more.iter().copied()).collect();
    v.sort_unstable();
    v.dedup();
    v
}

/// `M_N(k=0)`: finite `a <= Y` sum on `Re s = eps`.
pub fn term_mn_k0(x: f64, st: ShiftTwist, weight: &SmoothWeight, y: f64, contour: ContourSpec) -> Result<C64> {
    let su = setup(x, st, contour)?;
    let heads = squarefree_heads(su.l, y)?;
    if heads.is_empty() {
        return Ok(c64(0.0, 0.0));
    }
    let lp = prime_divisors(su.l);
    let lf = su.l as f64;
    let pre = rpow(lf, -su.alpha - 0.5) * (x * phi_over(su.l) / 2.0);
    let integral = su.integrate(su.eps, |s| {
        let z = su.alpha + s;
        let mut asum = c64(0.0, 0.0);
        for (a, mu, ps) in &heads {
            let num = zeta_excl(z * 2.0 + 1.0, &excl(ps, &[]))?;
            let den = zeta_excl(z * 2.0 + 2.0, &excl(ps, &lp))?;
            asum += num / den * (*mu as f64 / (*a as f64 * *a as f64));
        }
        Ok(su.common(weight, s)? * rpow(lf, -s) * asum)
    })?;
    Ok(pre * integral)
}

/// `M_{R1}`: the `a > Y` tail on `Re s = eps`.
pub fn term_mr1(x: f64, st: ShiftTwist, weight: &SmoothWeight, y: f64, contour: ContourSpec) -> Result<C64> {
    let su = setup(x, st, contour)?;
    let heads = squarefree_heads(su.l, y)?;
    let lf = su.l as f64;
    let pre = rpow(lf, -su.alpha - 0.5) * (x * phi_over(su.l) / 2.0);
    let integral = su.integrate(su.eps, |s| {
        let tail = a_sum_plus_impl(su.alpha + s, su.l, ARange::Tail(y), Some(&heads), PIECE_PMAX)?;
        Ok(su.common(weight, s)? * rpow(lf, -s) * tail)
    })?;
    Ok(pre * integral)
}

fn minus_prefactor(x: f64, l: u64) -> C64 {
    -c64(x * lift_l(l) / (2.0 * (l as f64).sqrt()), 0.0) / zeta2_2()
}

/// `M_{-N}(k1 = 1)`: finite `a <= Y` sum on `Re s = -eps`.
pub fn term_mmn_k1(x: f64, st: ShiftTwist, weight: &SmoothWeight, y: f64, contour: ContourSpec) -> Result<C64> {
    let su = setup(x, st, contour)?;
    let heads = squarefree_heads(su.l, y)?;
    if heads.is_empty() {
        return Ok(c64(0.0, 0.0));
    }
    let integral = su.integrate(-su.eps, |s| {
        let z = su.alpha + s;
        let mut asum = c64(0.0, 0.0);
        for (a, mu, ps) in &heads {
            let af = *a as f64;
            let lift: f64 = ps.iter().map(|&p| 1.0 / (1.0 + 1.0 / p as f64)).product();
            asum += rpow(su.l as f64 * af * af, -z) * (*mu as f64 * lift / (af * af));
        }
        Ok(su.common(weight, s)? * zeta_excl(z * 2.0 + 1.0, &[2])? * asum)
    })?;
    Ok(minus_prefactor(x, su.l) * integral)
}

/// `M_{-R2}`: the `a > Y` tail on `Re s = -eps`.
pub fn term_mmr2(x: f64, st: ShiftTwist, weight: &SmoothWeight, y: f64, contour: ContourSpec) -> Result<C64> {
    let su = setup(x, st, contour)?;
    let heads = squarefree_heads(su.l, y)?;
    let integral = su.integrate(-su.eps, |s| {
        let z = su.alpha + s;
        let tail = a_sum_minus_impl(z * 2.0 + 2.0, su.l, ARange::Tail(y), Some(&heads), PIECE_PMAX)?;
        Ok(su.common(weight, s)? * zeta_excl(z * 2.0 + 1.0, &[2])? * rpow(su.l as f64, -z) * tail)
    })?;
    Ok(minus_prefactor(x, su.l) * integral)
}

/// `M_{-R2}` before `g_{-alpha}(-s) gamma_{-alpha-s} gamma_alpha` is collapsed
/// to `g_alpha(s)`.
pub fn term_mmr2_unsimplified(
    x: f64,
    st: ShiftTwist,
    weight: &SmoothWeight,
    y: f64,
    contour: ContourSpec,
) -> Result<C64> {
    let su = setup(x, st, contour)?;
    let heads: Heads = squarefree_heads(su.l, y)?;
    let lf = su.l as f64;
    let gamma_a = gamma_alpha(su.alpha)?;
    let pre = minus_prefactor(x, su.l) * rpow(lf, -su.alpha);
    let integral = su.integrate(-su.eps, |s| {
        let z = su.alpha + s;
        let tail = a_sum_minus_impl(z * 2.0 + 2.0, su.l, ARange::Tail(y), Some(&heads), PIECE_PMAX)?;
        let gammas = g_alpha(-s, -su.alpha)? * gamma_alpha(-z)? * gamma_a;
        Ok(rpow(x, s * 0.5)
            * rpow(lf, -s)
            * big_g_unchecked(s, &su.gspec)
            / s
            * gammas
            * weight.mellin(s * 0.5 + 1.0)
            * zeta_excl(z * 2.0 + 1.0, &[2])?
            * tail)
    })?;
    Ok(pre * integral)
}

/// The four pieces of the first main-term identity and its closed right side.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Cancellation {
    pub mn_k0: C64,
    pub mmn_k1: C64,
    pub mr1: C64,
    pub mmr2: C64,
    pub lhs: C64,
    pub rhs: C64,
}

impl Cancellation {
    pub fn discrepancy(&self) -> f64 {
        (self.lhs - self.rhs).norm()
    }

    pub fn relative(&self) -> f64 {
        self.discrepancy() / self.rhs.norm()
    }

    fn scaled(self, c: C64) -> Self {
        Self {
            mn_k0: self.mn_k0 * c,
            mmn_k1: self.mmn_k1 * c,
            mr1: self.mr1 * c,
            mmr2: self.mmr2 * c,
            lhs: self.lhs * c,
            rhs: self.rhs * c,
        }
    }
}

/// Sum of the four pieces against the `s = 0` residue.
pub fn check_cancellation(
    x: f64,
    st: ShiftTwist,
    weight: &SmoothWeight,
    y: f64,
    contour: ContourSpec,
) -> Result<Cancellation> {
    let mn_k0 = term_mn_k0(x, st, weight, y, contour)?;
    let mmn_k1 = term_mmn_k1(x, st, weight, y, contour)?;
    let mr1 = term_mr1(x, st, weight, y, contour)?;
    let mmr2 = term_mmr2(x, st, weight, y, contour)?;
    let rhs = residue_at_zero(x, st, weight)?;
    Ok(Cancellation {
        mn_k0,
        mmn_k1,
        mr1,
        mmr2,
        lhs: mn_k0 + mmn_k1 + mr1 + mmr2,
        rhs,
    })
}

fn residue_at_zero(x: f64, st: ShiftTwist, weight: &SmoothWeight) -> Result<C64> {
    Ok(main_term_parts(x, st, weight)?.0)
}

/// The mirrored identity: all four pieces transported by the involution,
/// against the second main-term addend.
pub fn check_cancellation_mirror(
    x: f64,
    st: ShiftTwist,
    weight: &SmoothWeight,
    y: f64,
    contour: ContourSpec,
) -> Result<Cancellation> {
    let swapped = ShiftTwist::new(-st.alpha, st.l)?;
    let shifted = weight.shifted(-st.alpha);
    let factor = gamma_alpha(st.alpha)? * rpow(x, -st.alpha);
    let mut c = check_cancellation(x, swapped, &shifted, y, contour)?.scaled(factor);
    c.rhs = main_term_parts(x, st, weight)?.1;
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn st(a: C64, l: u64) -> ShiftTwist {
        ShiftTwist::new(a, l).unwrap()
    }

    fn contour(eps: f64) -> ContourSpec {
        ContourSpec { abscissa: eps, ..moment_contour() }
    }

    #[test]
    fn empty_heads() {
        let w = SmoothWeight::bump12();
        let s = st(c64(0.04, 0.02), 1);
        assert_eq!(term_mn_k0(1e4, s, &w, 0.5, moment_contour()).unwrap(), c64(0.0, 0.0));
        assert_eq!(term_mmn_k1(1e4, s, &w, 0.5, moment_contour()).unwrap(), c64(0.0, 0.0));
        assert!(term_mn_k0(1e4, st(c64(0.0, 0.0), 1), &w, 10.0, moment_contour()).is_err());
    }

    #[test]
    fn mn_k0_contour_independence() {
        let w = SmoothWeight::bump12();
        let s = st(c64(0.04, 0.02), 1);
        let a = term_mn_k0(1e4, s, &w, 10.0, contour(0.05)).unwrap();
        let b = term_mn_k0(1e4, s, &w, 10.0, contour(0.1)).unwrap();
        assert!((a - b).norm() < 1e-8 * a.norm(), "{a} vs {b}");
    }

    #[test]
    fn mmn_k1_contour_and_single_term() {
        let w = SmoothWeight::bump12();
        let s = st(c64(0.04, 0.02), 1);
        let x = 1e4;
        let a = term_mmn_k1(x, s, &w, 10.0, contour(0.05)).unwrap();
        let b = term_mmn_k1(x, s, &w, 10.0, contour(0.025)).unwrap();
        assert!((a - b).norm() < 1e-8 * a.norm(), "{a} vs {b}");

        let one = term_mmn_k1(x, s, &w, 1.0, moment_contour()).unwrap();
        let g = GSpec::remark_zero(s.alpha).unwrap();
        let alpha = s.alpha;
        let hand = integrate_vertical(
            |t| {
                Ok(w.mellin(t * 0.5 + 1.0)
                    * rpow(x, t * 0.5)
                    * rpow(1.0, -alpha - t)
                    * big_g_unchecked(t, &g)
                    / t
                    * g_alpha(t, alpha)?
                    * zeta_excl(alpha * 2.0 + t * 2.0 + 1.0, &[2])?)
            },
            -0.05,
            0.008,
            8.0,
            1e-14,
        )
        .unwrap()
            * (-x / 2.0)
            / zeta_excl(c64(2.0, 0.0), &[2]).unwrap();
        assert!((one - hand).norm() < 1e-9 * hand.norm());
        // the leading sign
        assert!((one + hand).norm() > hand.norm());
    }

    #[test]
    fn mmr2_simplified_form() {
        let w = SmoothWeight::bump12();
        let s = st(c64(0.04, 0.02), 3);
        let a = term_mmr2(1e4, s, &w, 5.0, moment_contour()).unwrap();
        let b = term_mmr2_unsimplified(1e4, s, &w, 5.0, moment_contour()).unwrap();
        assert!((a - b).norm() < 1e-9 * a.norm(), "{a} vs {b}");
    }

    #[test]
    fn mr1_empty_tail_and_height_stability() {
        let w = SmoothWeight::bump12();
        let s = st(c64(0.04, 0.02), 1);
        let r = term_mr1(1e4, s, &w, 10.0, moment_contour()).unwrap();
        let tall = ContourSpec { height: 16.0, ..moment_contour() };
        let r2 = term_mr1(1e4, s, &w, 10.0, tall).unwrap();
        assert!((r - r2).norm() < 1e-8 * r.norm());
        let big = term_mr1(1e4, s, &w, 2000.0, moment_contour()).unwrap();
        assert!(big.norm() < 1e-3 * r.norm(), "{big} {r}");
    }

    #[test]
    fn cancellation_point() {
        let w = SmoothWeight::bump12();
        let c = check_cancellation(1e4, st(c64(0.04, 0.02), 1), &w, 10.0, moment_contour()).unwrap();
        assert!(c.relative() < 1e-6, "{c:?}");
    }
}
