//! The bump weight `Phi`, its Mellin and Fourier transforms, vertical-line
//! quadrature, and the AFE kernel `V_alpha(x)` with an interpolating cache.

use std::f64::consts::PI;
use std::sync::Arc;

use crate::error::{invalid, Error, Result};
use crate::specfun::{big_g_unchecked, g_alpha, GSpec};
use crate::sum::Compensated;
use crate::{c64, C64};

/// Trapezoid rule on `[a, b]` for a function vanishing to all orders at both
/// ends, doubling the node count (starting from at least `min_panels`)
/// until successive estimates agree.
pub fn trapezoid_flat<F>(f: F, a: f64, b: f64, tol: f64, min_panels: usize) -> Result<C64>
where
    F: Fn(f64) -> C64,
{
    let mut n = min_panels.max(32);
    let mut h = (b - a) / n as f64;
    let mut sum: C64 = (1..n).map(|k| f(a + k as f64 * h)).sum();
    let mut prev = sum * h;
    while n < 1 << 22 {
        let mid: C64 = (0..n).map(|k| f(a + (k as f64 + 0.5) * h)).sum();
        sum += mid;
        n *= 2;
        h *= 0.5;
        let est = sum * h;
        if (est - prev).norm() <= tol * est.norm().max(1.0) {
            return Ok(est);
        }
        prev = est;
    }
    Err(Error::TailNotConverged {
        bound: (sum * h - prev).norm(),
        tolerance: tol,
    })
}

/// Smooth compactly supported weight `x^shift * exp(-1/((x - x0)(x1 - x)))`
/// on `(x0, x1)`.
#[derive(Clone, Debug)]
pub struct SmoothWeight {
    x0: f64,
    x1: f64,
    shift: C64,
    // (log x, h * bump(x)) trapezoid nodes for the Mellin transform
    nodes: Arc<Vec<(f64, f64)>>,
}

impl PartialEq for SmoothWeight {
    fn eq(&self, other: &Self) -> bool {
        self.x0 == other.x0 && self.x1 == other.x1 && self.shift == other.shift
    }
}

impl Default for SmoothWeight {
    fn default() -> Self {
        Self::bump12()
    }
}

fn bump(x0: f64, x1: f64, x: f64) -> f64 {
    if x <= x0 || x >= x1 {
        0.0
    } else {
        (-1.0 / ((x - x0) * (x1 - x))).exp()
    }
}

impl SmoothWeight {
    /// The default weight supported on `[1, 2]`.
    pub fn bump12() -> Self {
        Self::bump(1.0, 2.0).expect("valid support")
    }

    pub fn bump(x0: f64, x1: f64) -> Result<Self> {
        if !(x0 > 0.0 && x1 > x0 && x1.is_finite()) {
            return invalid(format!("bump support [{x0}, {x1}] must satisfy 0 < x0 < x1"));
        }
        // The bump is flat at both ends; 2048 panels resolve Mellin
        // frequencies well past |Im s| = 200 on supports of length <= 10.
        let n = 2048 * ((x1 - x0).ceil() as usize).max(1);
        let h = (x1 - x0) / n as f64;
        let nodes = (1..n)
            .map(|k| {
                let x = x0 + k as f64 * h;
                (x.ln(), h * bump(x0, x1, x))
            })
            .filter(|&(_, w)| w > 0.0)
            .collect();
        Ok(Self {
            x0,
            x1,
            shift: c64(0.0, 0.0),
            nodes: Arc::new(nodes),
        })
    }

    /// Looks up a weight by name (`"bump12"`).
    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "bump12" => Ok(Self::bump12()),
            other => invalid(format!("unknown weight {other:?}")),
        }
    }

    /// `"bump12"` for the default weight, otherwise a description.
    pub fn name(&self) -> String {
        let base = if (self.x0, self.x1) == (1.0, 2.0) {
            "bump12".to_string()
        } else {
            format!("bump[{},{}]", self.x0, self.x1)
        };
        if self.shift == c64(0.0, 0.0) {
            base
        } else {
            format!("{base}*x^({})", self.shift)
        }
    }

    pub fn support(&self) -> (f64, f64) {
        (self.x0, self.x1)
    }

    pub fn shift(&self) -> C64 {
        self.shift
    }

    /// `Phi_u(x) = x^u Phi(x)`.
    pub fn shifted(&self, u: C64) -> Self {
        Self {
            shift: self.shift + u,
            ..self.clone()
        }
    }

    /// The unshifted bump.
    pub fn base(&self, x: f64) -> f64 {
        bump(self.x0, self.x1, x)
    }

    pub fn evaluate(&self, x: f64) -> C64 {
        let b = self.base(x);
        if b == 0.0 {
            return c64(0.0, 0.0);
        }
        if self.shift == c64(0.0, 0.0) {
            c64(b, 0.0)
        } else {
            (self.shift * x.ln()).exp() * b
        }
    }

    /// Mellin transform `int Phi(x) x^{s-1} dx`.
    pub fn mellin(&self, s: C64) -> C64 {
        let e = s + self.shift - 1.0;
        let acc: Compensated = self
            .nodes
            .iter()
            .map(|&(lx, w)| (e * lx).exp() * w)
            .collect();
        acc.value()
    }

    /// Mellin transform by adaptive trapezoid refinement.
    pub fn mellin_adaptive(&self, s: C64, tol: f64) -> Result<C64> {
        let e = s + self.shift - 1.0;
        let panels = (2.0 * e.im.abs() * (self.x1 / self.x0).ln()) as usize;
        trapezoid_flat(|x| (e * x.ln()).exp() * self.base(x), self.x0, self.x1, tol, panels)
    }

    /// Fourier transform `int Phi(x) e(-x xi) dx`.
    pub fn fourier(&self, xi: f64) -> Result<C64> {
        let shift = self.shift;
        trapezoid_flat(
            |x| {
                let b = self.base(x);
                if b == 0.0 {
                    return c64(0.0, 0.0);
                }
                (c64(0.0, -2.0 * PI * x * xi) + shift * x.ln()).exp() * b
            },
            self.x0,
            self.x1,
            1e-14,
            (8.0 * xi.abs() * (self.x1 - self.x0)) as usize,
        )
    }
}

/// Vertical-line quadrature parameters: `s = abscissa + i t`, `|t| <= height`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ContourSpec {
    pub abscissa: f64,
    pub height: f64,
    pub step: f64,
}

impl Default for ContourSpec {
    /// Abscissa 1; height and step sized for the default gaussian `G`.
    fn default() -> Self {
        Self {
            abscissa: 1.0,
            height: 40.0,
            step: 0.05,
        }
    }
}

impl ContourSpec {
    pub fn new(abscissa: f64, height: f64, step: f64) -> Result<Self> {
        let spec = Self {
            abscissa,
            height,
            step,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.height > 0.0 && self.step > 0.0 && self.step <= self.height / 50.0) {
            return invalid(format!(
                "contour needs height > 0 and 0 < step <= height/50, got {self:?}"
            ));
        }
        if !self.abscissa.is_finite() {
            return invalid("contour abscissa must be finite");
        }
        Ok(())
    }

    /// Nodes `s_k` and trapezoid weights `h / (2 pi)` so that
    /// `(1/2 pi i) int f(s) ds ~ sum_k w_k f(s_k)`.
    pub fn nodes(&self) -> impl Iterator<Item = (C64, f64)> + '_ {
        let n = (self.height / self.step).ceil() as i64;
        let h = self.height / n as f64;
        let w = h / (2.0 * PI);
        (-n..=n).map(move |k| {
            let end = if k.abs() == n { 0.5 } else { 1.0 };
            (c64(self.abscissa, k as f64 * h), w * end)
        })
    }
}

/// `(1/2 pi i) int_{(c)} f(s) ds` by the trapezoid rule, doubling the height
/// from `height0` until the added strip contributes at most `tol`.
pub fn integrate_vertical<F>(f: F, abscissa: f64, step: f64, height0: f64, tol: f64) -> Result<C64>
where
    F: Fn(C64) -> Result<C64>,
{
    let w = step / (2.0 * PI);
    let mut acc = Compensated::new();
    acc.add(f(c64(abscissa, 0.0))? * w);
    let mut k = 1i64;
    let mut kmax = (height0 / step).ceil() as i64;
    let mut first = true;
    loop {
        let mut strip = Compensated::new();
        while k <= kmax {
            let t = k as f64 * step;
            strip.add(f(c64(abscissa, t))? * w);
            strip.add(f(c64(abscissa, -t))? * w);
            k += 1;
        }
        let added = strip.value();
        acc.add(added);
        if !first && added.norm() <= tol {
            return Ok(acc.value());
        }
        first = false;
        if kmax as f64 * step > 4096.0 {
            return Err(Error::TailNotConverged {
                bound: added.norm(),
                tolerance: tol,
            });
        }
        kmax *= 2;
    }
}

/// Precomputed quadrature for `V_alpha(x) = (1/2 pi i) int G(s)/s g_alpha(s) x^{-s} ds`.
#[derive(Clone, Debug)]
pub struct VKernel {
    alpha: C64,
    gspec: GSpec,
    contour: ContourSpec,
    nodes: Vec<(C64, C64)>,
}

impl VKernel {
    pub fn new(alpha: C64, gspec: GSpec, contour: ContourSpec) -> Result<Self> {
        gspec.validate()?;
        contour.validate()?;
        if contour.abscissa <= 0.0 {
            return invalid("V contour must lie right of s = 0");
        }
        let nodes = contour
            .nodes()
            .map(|(s, w)| Ok((s, big_g_unchecked(s, &gspec) / s * g_alpha(s, alpha)? * w)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            alpha,
            gspec,
            contour,
            nodes,
        })
    }

    pub fn alpha(&self) -> C64 {
        self.alpha
    }

    pub fn gspec(&self) -> GSpec {
        self.gspec
    }

    pub fn contour(&self) -> ContourSpec {
        self.contour
    }

    pub fn eval(&self, x: f64) -> Result<C64> {
        if !(x > 0.0) {
            return invalid(format!("V needs x > 0, got {x}"));
        }
        Ok(self.eval_log(x.ln()))
    }

    fn eval_log(&self, lx: f64) -> C64 {
        let acc: Compensated = self.nodes.iter().map(|&(s, w)| (-s * lx).exp() * w).collect();
        acc.value()
    }
}

/// `V_alpha(x)` by direct quadrature.
pub fn v_alpha(x: f64, alpha: C64, gspec: GSpec, contour: ContourSpec) -> Result<C64> {
    VKernel::new(alpha, gspec, contour)?.eval(x)
}

/// Lowest tabulated argument of [`VCache`].
pub const V_CACHE_XMIN: f64 = 1e-7;
/// Values below this are treated as zero beyond the cache cut.
pub const V_NEGLIGIBLE: f64 = 1e-15;
const V_CACHE_DU: f64 = 1.0 / 256.0;

/// `V_alpha` tabulated on a uniform grid in `log x` with four-point
/// Lagrange interpolation.
#[derive(Clone, Debug)]
pub struct VCache {
    alpha: C64,
    u0: f64,
    du: f64,
    values: Vec<C64>,
    x_cut: f64,
}

impl VCache {
    /// Tabulates on `[V_CACHE_XMIN, xmax]` with the default contour.
    pub fn build(alpha: C64, gspec: GSpec, xmax: f64) -> Result<Self> {
        Self::build_with(&VKernel::new(alpha, gspec, ContourSpec::default())?, xmax)
    }

    pub fn build_with(kernel: &VKernel, xmax: f64) -> Result<Self> {
        if !(xmax >= 1.0 && xmax.is_finite()) {
            return invalid(format!("cache xmax = {xmax} must be >= 1"));
        }
        let u0 = V_CACHE_XMIN.ln() - 2.0 * V_CACHE_DU;
        let n = ((xmax.ln() - u0) / V_CACHE_DU).ceil() as usize + 3;
        let values: Vec<C64> = (0..n)
            .map(|k| kernel.eval_log(u0 + k as f64 * V_CACHE_DU))
            .collect();
        let last_big = values.iter().rposition(|v| v.norm() > V_NEGLIGIBLE);
        let x_cut = match last_big {
            Some(k) if k + 2 >= n => {
                return Err(Error::TailNotConverged {
                    bound: values[k].norm(),
                    tolerance: V_NEGLIGIBLE,
                })
            }
            Some(k) => (u0 + (k + 1) as f64 * V_CACHE_DU).exp(),
            None => V_CACHE_XMIN,
        };
        Ok(Self {
            alpha: kernel.alpha(),
            u0,
            du: V_CACHE_DU,
            values,
            x_cut,
        })
    }

    pub fn alpha(&self) -> C64 {
        self.alpha
    }

    /// Beyond this argument `|V| <= 1e-15` on the grid.
    pub fn x_cut(&self) -> f64 {
        self.x_cut
    }

    pub fn xmax(&self) -> f64 {
        (self.u0 + (self.values.len() - 3) as f64 * self.du).exp()
    }

    /// Interpolated `V_alpha(x)`; zero beyond the cut.
    pub fn eval(&self, x: f64) -> Result<C64> {
        if !(x > 0.0) {
            return invalid(format!("V needs x > 0, got {x}"));
        }
        if x < V_CACHE_XMIN {
            return invalid(format!("x = {x:e} below cached range"));
        }
        Ok(self.eval_log(x.ln()))
    }

    /// Interpolation in `u = log x`, for `u >= log V_CACHE_XMIN`.
    #[inline]
    pub(crate) fn eval_log(&self, u: f64) -> C64 {
        let t = (u - self.u0) / self.du;
        let i = t.floor() as usize;
        if i + 2 >= self.values.len() {
            return c64(0.0, 0.0);
        }
        let f = t - i as f64;
        let (fm, f1, f2) = (f + 1.0, f - 1.0, f - 2.0);
        let w0 = -f * f1 * f2 / 6.0;
        let w1 = fm * f1 * f2 / 2.0;
        let w2 = -fm * f * f2 / 2.0;
        let w3 = fm * f * f1 / 6.0;
        let v = &self.values[i - 1..i + 3];
        v[0] * w0 + v[1] * w1 + v[2] * w2 + v[3] * w3
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn simpson(f: impl Fn(f64) -> C64, a: f64, b: f64, n: usize) -> C64 {
        let h = (b - a) / n as f64;
        let mut acc = f(a) + f(b);
        for k in 1..n {
            acc += f(a + k as f64 * h) * if k % 2 == 1 { 4.0 } else { 2.0 };
        }
        acc * h / 3.0
    }

    #[test]
    fn weight_support_and_sign() {
        let w = SmoothWeight::bump12();
        assert_eq!(w.evaluate(0.9), c64(0.0, 0.0));
        assert_eq!(w.evaluate(2.0), c64(0.0, 0.0));
        assert!(w.base(1.5) > 0.0);
        assert!((w.base(1.5) - (-4.0f64).exp()).abs() < 1e-16);
        assert!(SmoothWeight::bump(2.0, 1.0).is_err());
        assert!(SmoothWeight::bump(0.0, 1.0).is_err());
        assert!(SmoothWeight::by_name("nope").is_err());
    }

    #[test]
    fn mellin_at_one_is_integral() {
        let w = SmoothWeight::bump12();
        let oracle = simpson(|x| c64(w.base(x), 0.0), 1.0, 2.0, 40_000);
        assert!((w.mellin(c64(1.0, 0.0)) - oracle).norm() < 1e-12);
    }

    #[test]
    fn mellin_matches_adaptive_and_simpson() {
        let w = SmoothWeight::bump12();
        for s in [c64(1.3, 1.0), c64(0.5, 40.0), c64(-2.0, -120.0), c64(3.0, 7.5)] {
            let table = w.mellin(s);
            let adaptive = w.mellin_adaptive(s, 1e-15).unwrap();
            let simp = simpson(|x| (s * x.ln()).exp() / x * w.base(x), 1.0, 2.0, 80_000);
            assert!((table - adaptive).norm() < 1e-13, "{s}");
            assert!((table - simp).norm() < 1e-12, "{s}");
        }
    }

    #[test]
    fn shifted_weight_rule() {
        let w = SmoothWeight::bump12();
        let u = c64(0.2, 0.0);
        let s = c64(1.3, 1.0);
        assert!((w.shifted(u).mellin(s) - w.mellin(s + u)).norm() < 1e-14);
        let x = 1.4;
        let direct = w.shifted(u).evaluate(x);
        assert!((direct - c64(w.base(x) * x.powf(0.2), 0.0)).norm() < 1e-16);
    }

    #[test]
    fn mellin_decays_on_vertical_lines() {
        let w = SmoothWeight::bump12();
        for sigma in [0.5, 1.0, 2.0] {
            let mut prev = f64::INFINITY;
            for t in (0..=40).step_by(5) {
                let m = w.mellin(c64(sigma, t as f64)).norm();
                assert!(m < prev, "sigma={sigma} t={t}");
                prev = m;
            }
        }
    }

    #[test]
    fn fourier_against_simpson() {
        let w = SmoothWeight::bump12();
        for xi in [0.0, 0.7, 3.0, -5.5] {
            let f = w.fourier(xi).unwrap();
            let simp = simpson(
                |x| c64(0.0, -2.0 * PI * x * xi).exp() * w.base(x),
                1.0,
                2.0,
                40_000,
            );
            assert!((f - simp).norm() < 1e-12, "{xi}");
        }
    }

    #[test]
    fn contour_spec_validation() {
        assert!(ContourSpec::new(1.0, 10.0, 0.5).is_err());
        assert!(ContourSpec::new(1.0, 10.0, 0.1).is_ok());
        let c = ContourSpec::new(1.0, 1.0, 0.02).unwrap();
        let total: f64 = c.nodes().map(|(_, w)| w).sum();
        assert!((total - 2.0 / (2.0 * PI)).abs() < 1e-14);
    }

    #[test]
    fn integrate_vertical_gaussian() {
        // (1/2 pi i) int_{(0)} e^{s^2} ds = 1 / (2 sqrt(pi))
        let v = integrate_vertical(|s| Ok((s * s).exp()), 0.0, 0.05, 2.0, 1e-15).unwrap();
        assert!((v - c64(0.5 / PI.sqrt(), 0.0)).norm() < 1e-14);
    }

    #[test]
    fn v_small_and_large_x() {
        let g = GSpec::default();
        let c = ContourSpec::default();
        let zero = c64(0.0, 0.0);
        assert!((v_alpha(1e-6, zero, g, c).unwrap() - 1.0).norm() < 1e-3);
        assert!(v_alpha(100.0, zero, g, c).unwrap().norm() < 1e-6);
        assert!(v_alpha(0.0, zero, g, c).is_err());
    }

    #[test]
    fn v_contour_independence() {
        let g = GSpec::default();
        let alpha = c64(0.02, 0.0);
        for x in [1.0, 0.01, 7.0] {
            let a = v_alpha(x, alpha, g, ContourSpec::new(1.0, 40.0, 0.05).unwrap()).unwrap();
            let b = v_alpha(x, alpha, g, ContourSpec::new(2.0, 40.0, 0.05).unwrap()).unwrap();
            assert!((a - b).norm() < 1e-9, "{x}: {a} vs {b}");
        }
    }

    #[test]
    fn v_residue_shift() {
        // moving the line to Re s = -0.3 crosses only the pole at s = 0
        let g = GSpec::default();
        let alpha = c64(0.05, 0.1);
        let left = VKernel::new(alpha, g, ContourSpec::new(-0.3, 40.0, 0.05).unwrap());
        assert!(left.is_err());
        let x: f64 = 0.4;
        let direct = integrate_vertical(
            |s| Ok(big_g_unchecked(s, &g) / s * g_alpha(s, alpha)? * (-s * x.ln()).exp()),
            -0.2,
            0.05,
            40.0,
            1e-16,
        )
        .unwrap();
        let v = v_alpha(x, alpha, g, ContourSpec::default()).unwrap();
        assert!((v - direct - 1.0).norm() < 1e-10);
    }

    #[test]
    fn cache_matches_direct() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for alpha in [c64(0.0, 0.0), c64(0.02, 0.0), c64(0.0, 0.05), c64(-0.25, 3.0)] {
            let kernel = VKernel::new(alpha, GSpec::default(), ContourSpec::default()).unwrap();
            let cache = VCache::build_with(&kernel, 64.0).unwrap();
            let mut probes: Vec<f64> = (0..100).map(|_| 10f64.powf(rng.gen_range(-6.0..1.8))).collect();
            probes.extend([1.0, 64.0]);
            for x in probes {
                let d = (cache.eval(x).unwrap() - kernel.eval(x).unwrap()).norm();
                assert!(d <= 1e-8, "alpha={alpha} x={x} diff={d:e}");
            }
            assert!(cache.x_cut() < 40.0);
        }
    }

    #[test]
    fn cache_tail_monotone() {
        let cache = VCache::build(c64(0.1, 0.0), GSpec::default(), 64.0).unwrap();
        let mut prev = f64::INFINITY;
        let mut x = 10.0;
        while x <= 64.0 {
            let v = cache.eval(x).unwrap().norm();
            assert!(v <= prev + V_NEGLIGIBLE, "{x}");
            prev = v;
            x *= 1.01;
        }
    }
}
