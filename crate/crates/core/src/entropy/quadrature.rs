//! Gaussian quadrature rules from the Jacobi matrix of a three-term
//! recurrence (Golub–Welsch), with Newton-polished nodes and
//! Christoffel-function weights.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::specfun::ln_gamma_pos;

/// Weight family of a Gaussian rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RuleFamily {
    /// `x^α e^{-x}` on `[0, ∞)`.
    GaussLaguerre { alpha: f64 },
    /// `1` on `[-1, 1]`.
    GaussLegendre,
    /// `(1-x²)^{λ-1/2}` on `[-1, 1]`.
    GaussGegenbauer { lambda: f64 },
}

impl RuleFamily {
    fn validate(&self) -> Result<()> {
        match *self {
            RuleFamily::GaussLaguerre { alpha } if !(alpha > -1.0 && alpha.is_finite()) => Err(Error::domain(format!(
                "Gauss-Laguerre parameter alpha = {alpha} must exceed -1"
            ))),
            RuleFamily::GaussGegenbauer { lambda } if !(lambda > -0.5 && lambda.is_finite()) => Err(Error::domain(
                format!("Gauss-Gegenbauer parameter lambda = {lambda} must exceed -1/2"),
            )),
            _ => Ok(()),
        }
    }

    /// Diagonal recurrence coefficient `a_k` of the monic polynomials.
    fn diagonal(&self, k: usize) -> f64 {
        match *self {
            RuleFamily::GaussLaguerre { alpha } => 2.0 * k as f64 + alpha + 1.0,
            _ => 0.0,
        }
    }

    /// Off-diagonal coefficient `b_k` (`k ≥ 1`), the square of the Jacobi
    /// matrix sub-diagonal.
    fn off_diagonal_sq(&self, k: usize) -> f64 {
        let k = k as f64;
        match *self {
            RuleFamily::GaussLaguerre { alpha } => k * (k + alpha),
            RuleFamily::GaussLegendre => k * k / (4.0 * k * k - 1.0),
            RuleFamily::GaussGegenbauer { lambda } => {
                if lambda == 0.0 && k == 1.0 {
                    0.5
                } else {
                    k * (k + 2.0 * lambda - 1.0) / (4.0 * (k + lambda) * (k + lambda - 1.0))
                }
            }
        }
    }

    /// Total mass `μ₀` of the weight.
    fn mass(&self) -> f64 {
        match *self {
            RuleFamily::GaussLaguerre { alpha } => ln_gamma_pos(alpha + 1.0).exp(),
            RuleFamily::GaussLegendre => 2.0,
            RuleFamily::GaussGegenbauer { lambda } => {
                (0.5 * std::f64::consts::PI.ln() + ln_gamma_pos(lambda + 0.5) - ln_gamma_pos(lambda + 1.0)).exp()
            }
        }
    }

    fn cache_key(&self) -> (u8, u64) {
        match *self {
            RuleFamily::GaussLaguerre { alpha } => (0, alpha.to_bits()),
            RuleFamily::GaussLegendre => (1, 0),
            RuleFamily::GaussGegenbauer { lambda } => (2, lambda.to_bits()),
        }
    }
}

/// Nodes and weights of an `order`-point Gaussian rule.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    family: RuleFamily,
    order: usize,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn family(&self) -> RuleFamily {
        self.family
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Weights are positive where representable; far Laguerre weights
    /// underflow to zero.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `Σ w_i f(x_i)`, i.e. `∫ w(x) f(x) dx` over the family's support.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .filter(|(_, &w)| w > 0.0)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    /// `∫_a^b f(x) dx` by affine mapping of a Legendre rule.
    ///
    /// Only meaningful for [`RuleFamily::GaussLegendre`].
    pub fn integrate_interval<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        debug_assert!(matches!(self.family, RuleFamily::GaussLegendre));
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        half * self.integrate(|t| f(mid + half * t))
    }
}

/// Builds a Gaussian rule of the given family and order.
pub fn build_rule(family: RuleFamily, order: usize) -> Result<QuadratureRule> {
    family.validate()?;
    if order == 0 {
        return Err(Error::domain("quadrature order must be at least 1"));
    }

    let mut jacobi = DMatrix::<f64>::zeros(order, order);
    for k in 0..order {
        jacobi[(k, k)] = family.diagonal(k);
        if k + 1 < order {
            let off = family.off_diagonal_sq(k + 1).sqrt();
            jacobi[(k, k + 1)] = off;
            jacobi[(k + 1, k)] = off;
        }
    }
    let eigen = SymmetricEigen::try_new(jacobi, f64::EPSILON, 10_000)
        .ok_or_else(|| Error::Eigen(format!("Jacobi matrix of order {order} did not converge")))?;
    let mut nodes: Vec<f64> = eigen.eigenvalues.iter().copied().collect();
    nodes.sort_by(|a, b| a.total_cmp(b));

    for x in nodes.iter_mut() {
        *x = newton_polish(&family, order, *x);
    }
    if nodes.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::Eigen(format!(
            "nodes of the order-{order} rule are not strictly increasing"
        )));
    }
    let mass = family.mass();
    let weights = nodes
        .iter()
        .map(|&x| christoffel_weight(&family, order, mass, x))
        .collect();

    Ok(QuadratureRule {
        family,
        order,
        nodes,
        weights,
    })
}

/// Shared, memoized rule. Rules are immutable once built.
pub fn cached_rule(family: RuleFamily, order: usize) -> Result<Arc<QuadratureRule>> {
    type Cache = RwLock<HashMap<((u8, u64), usize), Arc<QuadratureRule>>>;
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let key = (family.cache_key(), order);
    if let Some(rule) = cache.read().expect("rule cache poisoned").get(&key) {
        return Ok(Arc::clone(rule));
    }
    let rule = Arc::new(build_rule(family, order)?);
    cache
        .write()
        .expect("rule cache poisoned")
        .entry(key)
        .or_insert_with(|| Arc::clone(&rule));
    Ok(rule)
}

const RESCALE: f64 = 1e150;

/// Value and derivative of the monic degree-`order` polynomial, both
/// multiplied by a common positive factor (only their ratio is used).
fn monic_with_derivative(family: &RuleFamily, order: usize, x: f64) -> (f64, f64) {
    let (mut p_prev, mut p) = (0.0, 1.0);
    let (mut d_prev, mut d) = (0.0, 0.0);
    for k in 0..order {
        let a = family.diagonal(k);
        let b = if k == 0 { 0.0 } else { family.off_diagonal_sq(k) };
        let p_next = (x - a) * p - b * p_prev;
        let d_next = p + (x - a) * d - b * d_prev;
        p_prev = p;
        p = p_next;
        d_prev = d;
        d = d_next;
        if p.abs() > RESCALE || d.abs() > RESCALE {
            p /= RESCALE;
            p_prev /= RESCALE;
            d /= RESCALE;
            d_prev /= RESCALE;
        }
    }
    (p, d)
}

fn newton_polish(family: &RuleFamily, order: usize, mut x: f64) -> f64 {
    for _ in 0..8 {
        let (p, d) = monic_with_derivative(family, order, x);
        if d == 0.0 {
            break;
        }
        let step = p / d;
        x -= step;
        if step.abs() <= 4.0 * f64::EPSILON * x.abs().max(1.0) {
            break;
        }
    }
    x
}

/// `w = 1 / Σ_{k<N} q_k(x)²` with `q_k` orthonormal; accumulated with
/// rescaling so large Laguerre nodes underflow to zero instead of NaN.
fn christoffel_weight(family: &RuleFamily, order: usize, mass: f64, x: f64) -> f64 {
    let mut q_prev = 0.0;
    let mut q = 1.0 / mass.sqrt();
    let mut sum = q * q;
    let mut scale_steps = 0i32;
    for k in 0..order.saturating_sub(1) {
        let a = family.diagonal(k);
        let sb = if k == 0 { 0.0 } else { family.off_diagonal_sq(k).sqrt() };
        let sb_next = family.off_diagonal_sq(k + 1).sqrt();
        let q_next = ((x - a) * q - sb * q_prev) / sb_next;
        q_prev = q;
        q = q_next;
        sum += q * q;
        if q.abs() > RESCALE {
            q /= RESCALE;
            q_prev /= RESCALE;
            sum /= RESCALE * RESCALE;
            scale_steps += 1;
        }
    }
    if scale_steps == 0 {
        1.0 / sum
    } else {
        (-(sum.ln()) - 2.0 * f64::from(scale_steps) * RESCALE.ln()).exp()
    }
}
