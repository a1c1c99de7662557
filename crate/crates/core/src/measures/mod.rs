//! Closed-form spreading measures, composite complexities, their
//! variational upper bounds, and ground-state-normalized ratios.

pub mod fit;

use std::collections::HashMap;
use std::f64::consts::{E, PI};
use std::sync::{OnceLock, RwLock};

use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::entropy::{shannon_entropy, EntropyBreakdown, QuadSettings};
use crate::error::Result;
use crate::orbital::QuantumNumbers;
use crate::specfun::{ln_binomial, ln_gamma_pos, log_sum_exp};
use crate::wigner::{rational_to_f64, three_j_squared};

pub use fit::{default_fit_range, fit_fisher_shannon_quadratic, fit_quadratic, QuadraticFit};

/// `V[ρ] = ⟨r²⟩ - ⟨r⟩²`.
pub fn variance(q: &QuantumNumbers) -> f64 {
    let n = f64::from(q.n());
    let l = f64::from(q.l());
    let z = q.z();
    (n * n * (n * n + 2.0) - l * l * (l + 1.0) * (l + 1.0)) / (4.0 * z * z)
}

/// `I[ρ] = ∫ ρ |∇ ln ρ|² d³r`.
pub fn fisher(q: &QuantumNumbers) -> f64 {
    let n = f64::from(q.n());
    let z = q.z();
    4.0 * z * z / n.powi(3) * (n - f64::from(q.abs_m()))
}

/// `⟨r⟩`.
pub fn mean_radius(q: &QuantumNumbers) -> f64 {
    let n = f64::from(q.n());
    let l = f64::from(q.l());
    (3.0 * n * n - l * (l + 1.0)) / (2.0 * q.z())
}

/// `⟨r²⟩`.
pub fn mean_square_radius(q: &QuantumNumbers) -> f64 {
    let r = mean_radius(q);
    variance(q) + r * r
}

/// Radial factor `∫ r² R⁴ dr` of the disequilibrium (carries `Z³`).
pub fn radial_disequilibrium(q: &QuantumNumbers) -> f64 {
    let n = q.n();
    let l = u64::from(q.l());
    let nr = u64::from(q.radial_nodes());
    let terms = (0..=nr).map(|k| {
        2.0 * ln_binomial(2 * nr - 2 * k, nr - k) + ln_binomial(2 * k, k) + ln_gamma_pos((4 * l + 2 * k + 3) as f64)
            - 2.0 * ln_gamma_pos((2 * l + k + 2) as f64)
    });
    let nf = f64::from(n);
    let ln_prefactor = (2.0 - 4.0 * nf) * std::f64::consts::LN_2 - 5.0 * nf.ln();
    (ln_prefactor + log_sum_exp(terms)).exp() * q.z().powi(3)
}

/// Angular factor `∫ |Y_lm|⁴ dΩ`, from the linearization of `|Y_lm|²`.
///
/// The sum over `l'` is accumulated exactly and rounded once.
pub fn angular_disequilibrium(l: u32, m: i32) -> f64 {
    let li = l as i32;
    let mi = m.abs();
    let mut sum = BigRational::zero();
    for lp in (0..=2 * li).step_by(2) {
        if 2 * mi > lp {
            continue;
        }
        let zero = three_j_squared(li, li, lp, 0, 0, 0).expect("valid angular momenta");
        let mixed = three_j_squared(li, li, lp, mi, mi, -2 * mi).expect("valid angular momenta");
        sum += zero * mixed * BigRational::from_integer((2 * lp + 1).into());
    }
    let hat_l_sq = f64::from(2 * l + 1);
    hat_l_sq * hat_l_sq / (4.0 * PI) * rational_to_f64(&sum)
}

/// `⟨ρ⟩ = ∫ ρ² d³r = Z³ D(n,l,m)`.
pub fn disequilibrium(q: &QuantumNumbers) -> f64 {
    radial_disequilibrium(q) * angular_disequilibrium(q.l(), q.m())
}

/// Charge-free `D(n,l,m)`.
pub fn disequilibrium_shape(q: &QuantumNumbers) -> f64 {
    disequilibrium(q) / q.z().powi(3)
}

/// `C_CR = I · V`.
pub fn cramer_rao(q: &QuantumNumbers) -> f64 {
    let n = f64::from(q.n());
    let l = f64::from(q.l());
    (n - f64::from(q.abs_m())) / n.powi(3) * (n * n * (n * n + 2.0) - l * l * (l + 1.0) * (l + 1.0))
}

fn fisher_shannon_from(q: &QuantumNumbers, b: f64) -> f64 {
    let n = f64::from(q.n());
    4.0 * (n - f64::from(q.abs_m())) / n.powi(3) / (2.0 * PI * E) * (2.0 * b / 3.0).exp()
}

/// `C_FS = I · J` with the entropic power `J = e^{2S/3}/(2πe)`.
pub fn fisher_shannon(q: &QuantumNumbers, settings: &QuadSettings) -> Result<f64> {
    Ok(fisher_shannon_from(q, shannon_entropy(q, settings)?.b))
}

/// `C_SC = ⟨ρ⟩ · e^S`.
pub fn shape_complexity(q: &QuantumNumbers, settings: &QuadSettings) -> Result<f64> {
    Ok(disequilibrium_shape(q) * shannon_entropy(q, settings)?.b.exp())
}

/// Shannon entropic power `H = e^S`.
pub fn entropic_power(shannon: f64) -> f64 {
    shannon.exp()
}

/// `J = e^{2S/3} / (2πe)`, the power entering `C_FS`.
pub fn modified_entropic_power(shannon: f64) -> f64 {
    (2.0 * shannon / 3.0).exp() / (2.0 * PI * E)
}

/// Upper bounds on `C_FS` and `C_SC` from the maximum-entropy bound at
/// fixed `⟨r⟩`, with the relative gaps `ξ = (B - C)/C`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Bounds {
    pub bound_fs: f64,
    pub bound_sc: f64,
    pub xi_fs: f64,
    pub xi_sc: f64,
}

fn bound_fs(q: &QuantumNumbers) -> f64 {
    let n = f64::from(q.n());
    let l = f64::from(q.l());
    let s = 3.0 * n * n - l * (l + 1.0);
    2.0 * E / (9.0 * PI.cbrt()) * (n - f64::from(q.abs_m())) / n.powi(3) * s * s
}

fn bound_sc(q: &QuantumNumbers, shape: f64) -> f64 {
    let n = f64::from(q.n());
    let l = f64::from(q.l());
    let s = 3.0 * n * n - l * (l + 1.0);
    PI * E.powi(3) / 27.0 * s.powi(3) * shape
}

fn bounds_from(q: &QuantumNumbers, c_fs: f64, c_sc: f64, shape: f64) -> Bounds {
    let bound_fs = bound_fs(q);
    let bound_sc = bound_sc(q, shape);
    Bounds {
        bound_fs,
        bound_sc,
        xi_fs: (bound_fs - c_fs) / c_fs,
        xi_sc: (bound_sc - c_sc) / c_sc,
    }
}

pub fn bounds(q: &QuantumNumbers, settings: &QuadSettings) -> Result<Bounds> {
    let b = shannon_entropy(q, settings)?.b;
    let shape = disequilibrium_shape(q);
    Ok(bounds_from(q, fisher_shannon_from(q, b), shape * b.exp(), shape))
}

/// The composite measures that admit a ground-state normalization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Complexity {
    CramerRao,
    FisherShannon,
    ShapeComplexity,
}

#[derive(Debug, Clone, Copy)]
struct GroundValues {
    cramer_rao: f64,
    fisher_shannon: f64,
    shape_complexity: f64,
}

impl GroundValues {
    fn get(&self, kind: Complexity) -> f64 {
        match kind {
            Complexity::CramerRao => self.cramer_rao,
            Complexity::FisherShannon => self.fisher_shannon,
            Complexity::ShapeComplexity => self.shape_complexity,
        }
    }
}

fn ground_values(settings: &QuadSettings) -> Result<GroundValues> {
    static CACHE: OnceLock<RwLock<HashMap<QuadSettings, GroundValues>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(v) = cache.read().expect("ground cache poisoned").get(settings) {
        return Ok(*v);
    }
    let g = QuantumNumbers::ground_state();
    let values = GroundValues {
        cramer_rao: cramer_rao(&g),
        fisher_shannon: fisher_shannon(&g, settings)?,
        shape_complexity: shape_complexity(&g, settings)?,
    };
    cache.write().expect("ground cache poisoned").insert(*settings, values);
    Ok(values)
}

/// `ζ = C(n,l,m) / C(1,0,0)`, with the ground state evaluated under the
/// same quadrature settings.
pub fn zeta(kind: Complexity, q: &QuantumNumbers, settings: &QuadSettings) -> Result<f64> {
    let value = match kind {
        Complexity::CramerRao => cramer_rao(q),
        Complexity::FisherShannon => fisher_shannon(q, settings)?,
        Complexity::ShapeComplexity => shape_complexity(q, settings)?,
    };
    Ok(value / ground_values(settings)?.get(kind))
}

/// Every measure of one orbital, sharing a single entropy evaluation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasureReport {
    pub q: QuantumNumbers,
    pub variance: f64,
    pub fisher: f64,
    pub shannon: f64,
    /// `H = e^S`.
    pub entropic_power: f64,
    /// `J = e^{2S/3}/(2πe)`.
    pub modified_entropic_power: f64,
    pub disequilibrium: f64,
    pub mean_radius: f64,
    pub cramer_rao: f64,
    pub fisher_shannon: f64,
    pub shape_complexity: f64,
    pub bound_fs: f64,
    pub bound_sc: f64,
    pub xi_fs: f64,
    pub xi_sc: f64,
    pub zeta_cr: f64,
    pub zeta_fs: f64,
    pub zeta_sc: f64,
    pub entropy: EntropyBreakdown,
}

impl MeasureReport {
    pub fn compute(q: &QuantumNumbers, settings: &QuadSettings) -> Result<Self> {
        let entropy = shannon_entropy(q, settings)?;
        let variance = variance(q);
        let fisher = fisher(q);
        let disequilibrium = disequilibrium(q);
        let shape = disequilibrium_shape(q);
        let cramer_rao = fisher * variance;
        let fisher_shannon = fisher_shannon_from(q, entropy.b);
        let shape_complexity = shape * entropy.b.exp();
        let b = bounds_from(q, fisher_shannon, shape_complexity, shape);
        let ground = ground_values(settings)?;
        Ok(Self {
            q: *q,
            variance,
            fisher,
            shannon: entropy.s_total,
            entropic_power: entropic_power(entropy.s_total),
            modified_entropic_power: modified_entropic_power(entropy.s_total),
            disequilibrium,
            mean_radius: mean_radius(q),
            cramer_rao,
            fisher_shannon,
            shape_complexity,
            bound_fs: b.bound_fs,
            bound_sc: b.bound_sc,
            xi_fs: b.xi_fs,
            xi_sc: b.xi_sc,
            zeta_cr: cramer_rao / ground.cramer_rao,
            zeta_fs: fisher_shannon / ground.fisher_shannon,
            zeta_sc: shape_complexity / ground.shape_complexity,
            entropy,
        })
    }
}
