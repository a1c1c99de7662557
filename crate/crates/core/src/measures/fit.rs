//! Least-squares quadratic fits of `C_FS` along `n`.

use std::ops::RangeInclusive;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::{fisher_shannon, ground_values};
use crate::entropy::QuadSettings;
use crate::error::{Error, Result};
use crate::orbital::QuantumNumbers;

/// `y ≈ a x² + b x + c`, with `r` the Pearson correlation between fitted
/// and observed values.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuadraticFit {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub r: f64,
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
}

impl QuadraticFit {
    pub fn predict(&self, x: f64) -> f64 {
        (self.a * x + self.b) * x + self.c
    }
}

fn pearson(u: &[f64], v: &[f64]) -> f64 {
    let len = u.len() as f64;
    let mu = u.iter().sum::<f64>() / len;
    let mv = v.iter().sum::<f64>() / len;
    let (mut suv, mut suu, mut svv) = (0.0, 0.0, 0.0);
    for (x, y) in u.iter().zip(v) {
        suv += (x - mu) * (y - mv);
        suu += (x - mu) * (x - mu);
        svv += (y - mv) * (y - mv);
    }
    if suu == 0.0 && svv == 0.0 {
        return 1.0;
    }
    suv / (suu * svv).sqrt()
}

/// Ordinary least squares for a quadratic through at least four points.
pub fn fit_quadratic(xs: &[f64], ys: &[f64]) -> Result<QuadraticFit> {
    if xs.len() != ys.len() {
        return Err(Error::Fit(format!("{} abscissas but {} ordinates", xs.len(), ys.len())));
    }
    if xs.len() < 4 {
        return Err(Error::Fit(format!(
            "quadratic fit needs at least 4 points, got {}",
            xs.len()
        )));
    }
    // centre and scale x so the design matrix stays well conditioned
    let mean = xs.iter().sum::<f64>() / xs.len() as f64;
    let scale = xs.iter().map(|x| (x - mean).abs()).fold(0.0, f64::max);
    if scale == 0.0 {
        return Err(Error::Fit("degenerate design matrix: all abscissas equal".into()));
    }
    let design = DMatrix::from_fn(xs.len(), 3, |i, j| ((xs[i] - mean) / scale).powi(2 - j as i32));
    let svd = design.svd(true, true);
    let smax = svd.singular_values.max();
    if svd.singular_values.min() <= 1e-12 * smax {
        return Err(Error::Fit(
            "degenerate design matrix: fewer than 3 distinct abscissas".into(),
        ));
    }
    let coef = svd
        .solve(&DVector::from_column_slice(ys), 0.0)
        .map_err(|e| Error::Fit(e.to_string()))?;
    // expand p(t) with t = (x - mean)/scale back to powers of x
    let (p2, p1, p0) = (coef[0] / (scale * scale), coef[1] / scale, coef[2]);
    let a = p2;
    let b = p1 - 2.0 * p2 * mean;
    let c = p0 - p1 * mean + p2 * mean * mean;

    let fitted: Vec<f64> = xs
        .iter()
        .map(|x| {
            let t = (x - mean) / scale;
            (coef[0] * t + coef[1]) * t + coef[2]
        })
        .collect();
    Ok(QuadraticFit {
        a,
        b,
        c,
        r: pearson(&fitted, ys),
        xs: xs.to_vec(),
        ys: ys.to_vec(),
    })
}

/// `n = l+1 ..= max(20, l+10)`.
pub fn default_fit_range(l: u32) -> RangeInclusive<u32> {
    (l + 1)..=(l + 10).max(20)
}

/// Quadratic fit of `C_FS(n, l, m)` over `n_range`. With `normalize`, the
/// ordinates are `ζ_FS = C_FS / C_FS(1,0,0)`.
pub fn fit_fisher_shannon_quadratic(
    l: u32,
    m: i32,
    n_range: RangeInclusive<u32>,
    normalize: bool,
    settings: &QuadSettings,
) -> Result<QuadraticFit> {
    if *n_range.start() <= l {
        return Err(Error::domain(format!(
            "fit range starts at n = {} but l = {l} needs n >= {}",
            n_range.start(),
            l + 1
        )));
    }
    let scale = if normalize {
        ground_values(settings)?.fisher_shannon
    } else {
        1.0
    };
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for n in n_range {
        let q = QuantumNumbers::hydrogen(n, l, m)?;
        xs.push(f64::from(n));
        ys.push(fisher_shannon(&q, settings)? / scale);
    }
    fit_quadratic(&xs, &ys)
}
