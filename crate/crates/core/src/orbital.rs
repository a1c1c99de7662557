//! Hydrogenic bound states: quantum numbers, energies, radial and angular
//! wavefunctions, and the position-space probability density.
//!
//! Spherical harmonics are built from orthonormal Gegenbauer polynomials,
//! `|Y_{l,m}|² = C̃_{l-|m|}^{|m|+1/2}(cos θ)² sin^{2|m|}θ / 2π`, which only
//! involves `|m|`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::specfun::{gegenbauer_orthonormal, laguerre_orthonormal};

/// Orbital label `(n, l, m)` together with the nuclear charge `Z`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuantumNumbers {
    n: u32,
    l: u32,
    m: i32,
    #[serde(rename = "Z")]
    z: f64,
}

impl QuantumNumbers {
    pub fn new(n: u32, l: u32, m: i32, z: f64) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidOrbital("n out of range n ≥ 1".into()));
        }
        if l >= n {
            return Err(Error::InvalidOrbital("l out of range 0 ≤ l ≤ n-1".into()));
        }
        if m.unsigned_abs() > l {
            return Err(Error::InvalidOrbital("m out of range |m| ≤ l".into()));
        }
        if !(z > 0.0 && z.is_finite()) {
            return Err(Error::InvalidOrbital("Z out of range Z > 0".into()));
        }
        Ok(Self { n, l, m, z })
    }

    /// Hydrogen (`Z = 1`).
    pub fn hydrogen(n: u32, l: u32, m: i32) -> Result<Self> {
        Self::new(n, l, m, 1.0)
    }

    pub fn ground_state() -> Self {
        Self {
            n: 1,
            l: 0,
            m: 0,
            z: 1.0,
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    pub fn m(&self) -> i32 {
        self.m
    }

    pub fn abs_m(&self) -> u32 {
        self.m.unsigned_abs()
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    /// Number of radial nodes, `n - l - 1`.
    pub fn radial_nodes(&self) -> u32 {
        self.n - self.l - 1
    }

    /// `r̃ = 2Zr/n`.
    pub fn scaled_radius(&self, r: f64) -> f64 {
        2.0 * self.z * r / f64::from(self.n)
    }

    pub fn with_z(&self, z: f64) -> Result<Self> {
        Self::new(self.n, self.l, self.m, z)
    }

    pub fn with_m(&self, m: i32) -> Result<Self> {
        Self::new(self.n, self.l, m, self.z)
    }
}

impl std::fmt::Display for QuantumNumbers {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{},{}; Z={})", self.n, self.l, self.m, self.z)
    }
}

/// `E = -Z²/(2n²)` in hartree.
pub fn energy(q: &QuantumNumbers) -> f64 {
    let n = f64::from(q.n);
    -q.z * q.z / (2.0 * n * n)
}

fn check_radius(r: f64) -> Result<()> {
    if r >= 0.0 && r.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("radius r = {r} must be finite and non-negative")))
    }
}

fn check_theta(theta: f64) -> Result<()> {
    if (0.0..=PI).contains(&theta) {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "polar angle theta = {theta} must lie in [0, pi]"
        )))
    }
}

/// Normalized radial eigenfunction `R_{n,l}(r)`.
///
/// Written as `(2Z^{3/2}/n²) r̃^l e^{-r̃/2} L̃_{n-l-1}^{2l+1}(r̃)`, the cancelled
/// form of `[ω_{2l+1}(r̃)/r̃]^{1/2}`, so `r = 0` needs no special division.
pub fn radial_wavefunction(q: &QuantumNumbers, r: f64) -> Result<f64> {
    check_radius(r)?;
    Ok(radial_unchecked(q, r))
}

pub(crate) fn radial_unchecked(q: &QuantumNumbers, r: f64) -> f64 {
    let n = f64::from(q.n);
    let rt = q.scaled_radius(r);
    let alpha = f64::from(2 * q.l + 1);
    let envelope = if rt == 0.0 {
        if q.l == 0 {
            1.0
        } else {
            0.0
        }
    } else {
        (f64::from(q.l) * rt.ln() - 0.5 * rt).exp()
    };
    let poly = laguerre_orthonormal(q.radial_nodes() as usize, alpha, rt)
        .expect("alpha and r̃ are in range for a validated orbital");
    2.0 * q.z.powf(1.5) / (n * n) * envelope * poly
}

/// `|Y_{l,m}(θ, φ)|²`, independent of `φ`.
pub fn spherical_harmonic_sq(l: u32, m: i32, theta: f64) -> Result<f64> {
    if m.unsigned_abs() > l {
        return Err(Error::InvalidOrbital("m out of range |m| ≤ l".into()));
    }
    check_theta(theta)?;
    Ok(harmonic_sq_unchecked(l, m.unsigned_abs(), theta))
}

pub(crate) fn harmonic_sq_unchecked(l: u32, abs_m: u32, theta: f64) -> f64 {
    let lambda = f64::from(abs_m) + 0.5;
    let x = theta.cos().clamp(-1.0, 1.0);
    let c = gegenbauer_orthonormal((l - abs_m) as usize, lambda, x).expect("lambda and cos θ are in range");
    let s2 = theta.sin().powi(2 * abs_m as i32);
    c * c * s2 / (2.0 * PI)
}

/// Angular probability density `Θ_{l,m}(θ) = |Y_{l,m}|² sin θ`.
pub fn angular_density(l: u32, m: i32, theta: f64) -> Result<f64> {
    Ok(spherical_harmonic_sq(l, m, theta)? * theta.sin())
}

/// Radial probability density `D_{n,l}(r) = r² R_{n,l}(r)²`.
pub fn radial_density(q: &QuantumNumbers, r: f64) -> Result<f64> {
    let rr = radial_wavefunction(q, r)?;
    Ok(r * r * rr * rr)
}

/// `ψ_{n,l,m}(r, θ, φ)` as `(re, im)`, using the Gegenbauer-form harmonic
/// (no Condon–Shortley phase).
pub fn wavefunction(q: &QuantumNumbers, r: f64, theta: f64, phi: f64) -> Result<(f64, f64)> {
    let radial = radial_wavefunction(q, r)?;
    check_theta(theta)?;
    let abs_m = q.abs_m();
    let lambda = f64::from(abs_m) + 0.5;
    let c = gegenbauer_orthonormal((q.l - abs_m) as usize, lambda, theta.cos().clamp(-1.0, 1.0))?;
    let amplitude = radial * c * theta.sin().powi(abs_m as i32) / (2.0 * PI).sqrt();
    let angle = f64::from(q.m) * phi;
    Ok((amplitude * angle.cos(), amplitude * angle.sin()))
}

/// `ρ(r, θ) = R_{n,l}(r)² |Y_{l,m}(θ)|²`.
pub fn total_density(q: &QuantumNumbers, r: f64, theta: f64) -> Result<f64> {
    let radial = radial_wavefunction(q, r)?;
    let angular = spherical_harmonic_sq(q.l, q.m, theta)?;
    Ok(radial * radial * angular)
}

/// `ρ(r, θ, φ)`; the azimuth never enters the computation.
pub fn density_at(q: &QuantumNumbers, r: f64, theta: f64, _phi: f64) -> Result<f64> {
    total_density(q, r, theta)
}

/// A tabulated one-dimensional density.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityProfile {
    pub abscissas: Vec<f64>,
    pub values: Vec<f64>,
}

impl DensityProfile {
    /// Trapezoidal integral over the tabulated range.
    pub fn trapezoid(&self) -> f64 {
        self.abscissas
            .windows(2)
            .zip(self.values.windows(2))
            .map(|(x, y)| 0.5 * (x[1] - x[0]) * (y[0] + y[1]))
            .sum()
    }

    /// Abscissa of the largest tabulated value.
    pub fn argmax(&self) -> Option<f64> {
        self.values
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .map(|(i, _)| self.abscissas[i])
    }
}

/// Sampling grid for [`sample_profiles`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    /// Radial extent in bohr; `None` means `5n²/Z`.
    pub r_max: Option<f64>,
    pub r_points: usize,
    pub theta_points: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            r_max: None,
            r_points: 2000,
            theta_points: 1000,
        }
    }
}

impl GridSpec {
    pub fn radial_extent(&self, q: &QuantumNumbers) -> f64 {
        self.r_max.unwrap_or_else(|| {
            let n = f64::from(q.n());
            5.0 * n * n / q.z()
        })
    }

    fn validate(&self, q: &QuantumNumbers) -> Result<()> {
        let r_max = self.radial_extent(q);
        if !(r_max > 0.0 && r_max.is_finite()) {
            return Err(Error::Grid(format!("r_max = {r_max} must be positive")));
        }
        if self.r_points < 2 || self.theta_points < 2 {
            return Err(Error::Grid("grids need at least two points".into()));
        }
        Ok(())
    }
}

fn linspace(start: f64, stop: f64, points: usize) -> Vec<f64> {
    let step = (stop - start) / (points - 1) as f64;
    (0..points)
        .map(|i| if i + 1 == points { stop } else { start + step * i as f64 })
        .collect()
}

/// Tabulates `D_{n,l}(r)` on `[0, r_max]` and `Θ_{l,m}(θ)` on `[0, π]`.
pub fn sample_profiles(q: &QuantumNumbers, grid: &GridSpec) -> Result<(DensityProfile, DensityProfile)> {
    grid.validate(q)?;
    let radii = linspace(0.0, grid.radial_extent(q), grid.r_points);
    let radial_values = radii
        .iter()
        .map(|&r| {
            let rr = radial_unchecked(q, r);
            r * r * rr * rr
        })
        .collect();
    let thetas = linspace(0.0, PI, grid.theta_points);
    let angular_values = thetas
        .iter()
        .map(|&t| harmonic_sq_unchecked(q.l(), q.abs_m(), t) * t.sin().max(0.0))
        .collect();
    Ok((
        DensityProfile {
            abscissas: radii,
            values: radial_values,
        },
        DensityProfile {
            abscissas: thetas,
            values: angular_values,
        },
    ))
}
