use std::io::{Read, Write};

use num_traits::{Float, Num};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::lvalue::{AfeEvaluator, AfeParams};
use crate::specfun::ShiftTwist;
use crate::sum::Compensated;
use crate::weights::SmoothWeight;
use crate::{c64, C64};

use super::{brute_moment, main_term_auto, twisted_values, MomentRequest};

/// Error bound assumed for each AFE value, relative to `1 + |L|`.
pub const AFE_VALUE_ERROR: f64 = 1e-10;

/// Error bound assumed for the main term, relative.
pub const MAIN_TERM_ERROR: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ResidualRow {
    pub x: f64,
    pub brute: C64,
    pub main: C64,
    pub residual: C64,
    pub err_budget: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ResidualTable {
    pub rows: Vec<ResidualRow>,
    pub alpha: C64,
    pub l: u64,
    pub weight: String,
    pub seed: Option<u64>,
}

#[derive(Serialize, Deserialize)]
struct CsvRow {
    #[serde(rename = "X")]
    x: f64,
    brute_re: f64,
    brute_im: f64,
    main_re: f64,
    main_im: f64,
    res_re: f64,
    res_im: f64,
    err_budget: f64,
}

impl ResidualTable {
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for r in &self.rows {
            w.serialize(CsvRow {
                x: r.x,
                brute_re: r.brute.re,
                brute_im: r.brute.im,
                main_re: r.main.re,
                main_im: r.main.im,
                res_re: r.residual.re,
                res_im: r.residual.im,
                err_budget: r.err_budget,
            })?;
        }
        w.flush()?;
        Ok(())
    }

    /// Reads rows back; metadata is not part of the CSV and is left blank.
    pub fn read_csv<R: Read>(input: R) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(input);
        let mut rows = Vec::new();
        for rec in rdr.deserialize() {
            let r: CsvRow = rec?;
            rows.push(ResidualRow {
                x: r.x,
                brute: c64(r.brute_re, r.brute_im),
                main: c64(r.main_re, r.main_im),
                residual: c64(r.res_re, r.res_im),
                err_budget: r.err_budget,
            });
        }
        Ok(Self {
            rows,
            alpha: c64(0.0, 0.0),
            l: 1,
            weight: String::new(),
            seed: None,
        })
    }
}

/// `points` values from `xmin` to `xmax` in geometric progression.
pub fn geometric_grid(xmin: f64, xmax: f64, points: usize) -> Result<Vec<f64>> {
    if !(xmin > 0.0 && xmax >= xmin && xmax.is_finite()) || points == 0 {
        return invalid(format!("bad grid [{xmin}, {xmax}] with {points} points"));
    }
    if points == 1 {
        return Ok(vec![xmin]);
    }
    let ratio = (xmax / xmin).ln() / (points - 1) as f64;
    Ok((0..points)
        .map(|k| {
            let x = xmin * (ratio * k as f64).exp();
            // snap rounding noise, e.g. 8191.999999999998
            if (x - x.round()).abs() <= 1e-12 * x {
                x.round()
            } else {
                x
            }
        })
        .collect())
}

fn check_grid(grid: &[f64]) -> Result<Vec<f64>> {
    if grid.is_empty() {
        return invalid("empty X grid");
    }
    let mut g = grid.to_vec();
    g.sort_by(|a, b| a.partial_cmp(b).expect("finite grid"));
    Ok(g)
}

/// Brute moment, main term and residual for every `X`, with one pass of
/// L-values shared by the whole grid.
pub fn residual_scan(
    grid: &[f64],
    st: ShiftTwist,
    weight: &SmoothWeight,
    afe: &AfeParams,
) -> Result<ResidualTable> {
    let grid = check_grid(grid)?;
    for &x in &grid {
        MomentRequest::new(x, st, weight.clone(), *afe)?;
    }
    let (x0, x1) = weight.support();
    let lo = (x0 * grid[0]).ceil().max(1.0) as u64;
    let hi = (x1 * grid[grid.len() - 1]).floor() as u64;
    let eval = AfeEvaluator::new(st.alpha, afe, hi.max(1))?;
    let values = twisted_values(&eval, st.l, lo, hi)?;
    let mut rows = Vec::with_capacity(grid.len());
    for &x in &grid {
        let d_lo = (x0 * x).ceil().max(1.0) as u64;
        let d_hi = (x1 * x).floor() as u64;
        let start = values.partition_point(|&(d, _)| d < d_lo);
        let end = values.partition_point(|&(d, _)| d <= d_hi);
        let mut acc = Compensated::new();
        let mut budget = 0.0;
        for &(d, v) in &values[start..end.max(start)] {
            let w = weight.evaluate(d as f64 / x);
            acc.add(v * w);
            budget += w.norm() * AFE_VALUE_ERROR * (1.0 + v.norm());
        }
        rows.push(row(x, acc.value(), st, weight, budget)?);
    }
    Ok(table(rows, st, weight))
}

/// The same scan with an independent brute-force run per `X`.
pub fn residual_scan_uncached(
    grid: &[f64],
    st: ShiftTwist,
    weight: &SmoothWeight,
    afe: &AfeParams,
) -> Result<ResidualTable> {
    let grid = check_grid(grid)?;
    let mut rows = Vec::with_capacity(grid.len());
    for &x in &grid {
        let brute = brute_moment(&MomentRequest::new(x, st, weight.clone(), *afe)?)?;
        rows.push(row(x, brute, st, weight, f64::NAN)?);
    }
    Ok(table(rows, st, weight))
}

fn row(x: f64, brute: C64, st: ShiftTwist, weight: &SmoothWeight, budget: f64) -> Result<ResidualRow> {
    let main = main_term_auto(x, st, weight)?;
    Ok(ResidualRow {
        x,
        brute,
        main,
        residual: brute - main,
        err_budget: budget + main.norm() * MAIN_TERM_ERROR,
    })
}

fn table(rows: Vec<ResidualRow>, st: ShiftTwist, weight: &SmoothWeight) -> ResidualTable {
    ResidualTable {
        rows,
        alpha: st.alpha,
        l: st.l,
        weight: weight.name(),
        seed: None,
    }
}

/// Least-squares and Theil-Sen slopes of `log y` against `log x`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExponentFit<T> {
    pub slope: T,
    pub stderr: T,
    pub intercept: T,
    pub robust_slope: T,
}

/// Power-law exponent of positive data `y ~ c x^slope`.
pub fn fit_exponent<T: Float>(xs: &[T], ys: &[T]) -> Result<ExponentFit<T>> {
    if xs.len() != ys.len() || xs.len() < 5 {
        return Err(Error::Degenerate(format!(
            "need at least 5 paired points, got {} and {}",
            xs.len(),
            ys.len()
        )));
    }
    if xs.iter().chain(ys).any(|&v| !(v > T::zero()) || !v.is_finite()) {
        return Err(Error::Degenerate("all values must be positive and finite".into()));
    }
    let lx: Vec<T> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<T> = ys.iter().map(|y| y.ln()).collect();
    let n = T::from(lx.len()).unwrap();
    let mx = lx.iter().fold(T::zero(), |a, &b| a + b) / n;
    let my = ly.iter().fold(T::zero(), |a, &b| a + b) / n;
    let sxx = lx.iter().fold(T::zero(), |a, &x| a + (x - mx) * (x - mx));
    if sxx == T::zero() {
        return Err(Error::Degenerate("all x values coincide".into()));
    }
    let sxy = lx.iter().zip(&ly).fold(T::zero(), |a, (&x, &y)| a + (x - mx) * (y - my));
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss = lx.iter().zip(&ly).fold(T::zero(), |a, (&x, &y)| {
        let r = y - intercept - slope * x;
        a + r * r
    });
    let two = T::one() + T::one();
    let stderr = (rss / (n - two) / sxx).sqrt();
    let mut pair_slopes = Vec::new();
    for i in 0..lx.len() {
        for j in i + 1..lx.len() {
            if lx[j] != lx[i] {
                pair_slopes.push((ly[j] - ly[i]) / (lx[j] - lx[i]));
            }
        }
    }
    pair_slopes.sort_by(|a, b| a.partial_cmp(b).expect("finite slopes"));
    let m = pair_slopes.len();
    let robust_slope = if m % 2 == 1 {
        pair_slopes[m / 2]
    } else {
        (pair_slopes[m / 2 - 1] + pair_slopes[m / 2]) / two
    };
    Ok(ExponentFit {
        slope,
        stderr,
        intercept,
        robust_slope,
    })
}

/// Exponent fit of `|residual|` against `X`.
pub fn fit_table(table: &ResidualTable) -> Result<ExponentFit<f64>> {
    let xs: Vec<f64> = table.rows.iter().map(|r| r.x).collect();
    let ys: Vec<f64> = table.rows.iter().map(|r| r.residual.norm()).collect();
    fit_exponent(&xs, &ys)
}

/// `f_0, f_1, ..., f_n` with `f_{k+1} = (f_k + 1/2) / 2`.
pub fn recursion_schedule<T>(f0: T, n: usize) -> Result<Vec<T>>
where
    T: Num + Copy + PartialOrd + std::fmt::Debug,
{
    let two = T::one() + T::one();
    let half = T::one() / two;
    if f0 < half || f0 > T::one() {
        return invalid(format!("f0 = {f0:?} must lie in [1/2, 1]"));
    }
    let mut out = Vec::with_capacity(n + 1);
    let mut f = f0;
    out.push(f);
    for _ in 0..n {
        f = (f + half) / two;
        out.push(f);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn schedule_contracts_to_half(f0 in 0.5f64..=1.0, n in 1usize..40) {
            let f = recursion_schedule(f0, n).unwrap();
            prop_assert!(f.windows(2).all(|w| w[1] <= w[0] && w[1] >= 0.5));
            let expected = 0.5 + (f0 - 0.5) / 2f64.powi(n as i32);
            prop_assert!((f[n] - expected).abs() <= 1e-15);
        }
    }

    #[test]
    fn schedule_exact() {
        let r = |a, b| Ratio::new(a, b);
        let s = recursion_schedule(r(1i64, 1), 3).unwrap();
        assert_eq!(s, vec![r(1, 1), r(3, 4), r(5, 8), r(9, 16)]);
        assert_eq!(recursion_schedule(r(1, 2), 4).unwrap(), vec![r(1, 2); 5]);
        assert!(recursion_schedule(r(2, 1), 1).is_err());
        assert!(recursion_schedule(0.4f64, 1).is_err());
        let f = recursion_schedule(0.9f64, 40).unwrap();
        assert!(f.windows(2).all(|w| w[1] < w[0]));
        assert!((f[40] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn fit_synthetic() {
        let xs: Vec<f64> = (10..18).map(|k| 2f64.powi(k)).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 * x.sqrt()).collect();
        let f = fit_exponent(&xs, &ys).unwrap();
        assert!((f.slope - 0.5).abs() < 1e-9 && (f.robust_slope - 0.5).abs() < 1e-9);
        let ys: Vec<f64> = xs.iter().map(|x| x.powf(0.75) * (1.0 + 0.1 * x.ln().sin())).collect();
        let f = fit_exponent(&xs, &ys).unwrap();
        assert!((0.70..=0.80).contains(&f.slope), "{f:?}");
        let f32s: Vec<f32> = xs.iter().map(|&x| x as f32).collect();
        let g = fit_exponent(&f32s, &f32s).unwrap();
        assert!((g.slope - 1.0).abs() < 1e-4);
        assert!(fit_exponent(&xs[..4], &ys[..4]).is_err());
        let mut zero = ys.clone();
        zero[2] = 0.0;
        assert!(fit_exponent(&xs, &zero).is_err());
    }

    #[test]
    fn grid() {
        let g = geometric_grid(1024.0, 131072.0, 8).unwrap();
        assert_eq!(g.len(), 8);
        assert_eq!(g, [1024.0, 2048.0, 4096.0, 8192.0, 16384.0, 32768.0, 65536.0, 131072.0]);
        assert!(geometric_grid(0.0, 1.0, 3).is_err());
    }

    #[test]
    fn scan_cache_and_csv() {
        let st = ShiftTwist::new(c64(0.0, 0.0), 1).unwrap();
        let w = SmoothWeight::bump12();
        let afe = AfeParams::default();
        let grid = [256.0, 512.0, 1024.0];
        let cached = residual_scan(&grid, st, &w, &afe).unwrap();
        let direct = residual_scan_uncached(&grid, st, &w, &afe).unwrap();
        for (a, b) in cached.rows.iter().zip(&direct.rows) {
            assert!((a.brute - b.brute).norm() <= 1e-12 * b.brute.norm());
            assert_eq!(a.residual, a.brute - a.main);
        }
        let single = residual_scan(&grid[..1], st, &w, &afe).unwrap();
        assert_eq!(single.rows[0], cached.rows[0]);
        let mut buf = Vec::new();
        cached.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("X,brute_re,brute_im,main_re,main_im,res_re,res_im,err_budget\n"));
        let back = ResidualTable::read_csv(&buf[..]).unwrap();
        assert_eq!(back.rows, cached.rows);
    }
}
