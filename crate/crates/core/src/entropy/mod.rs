//! Entropic integrals of orthonormal polynomials and the assembled
//! Shannon entropy of a hydrogenic orbital.
//!
//! `E_i(ỹ) = ∫ xⁱ w(x) ỹ(x)² ln ỹ(x)² dx` has a logarithmic singularity at
//! every zero of `ỹ`. The zeros are the nodes of the family's own Gauss
//! rule, so the support is split there and each piece is integrated with
//! Gauss–Legendre (plus a shifted Gauss–Laguerre tail on `[0, ∞)`). The
//! order is climbed along [`ORDER_LADDER`] until two successive estimates
//! agree.

pub mod quadrature;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::orbital::QuantumNumbers;
use crate::specfun::{digamma_pos, gegenbauer_orthonormal, laguerre_orthonormal};

pub use quadrature::{build_rule, cached_rule, QuadratureRule, RuleFamily};

/// Quadrature orders tried in turn for the entropic integrals.
pub const ORDER_LADDER: [usize; 5] = [64, 96, 128, 192, 256];

const REL_TOL: f64 = 1e-9;
const ABS_TOL: f64 = 1e-12;

/// Controls the order ladder of the entropic integrals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct QuadSettings {
    /// Highest rung of [`ORDER_LADDER`] that may be used.
    pub max_order: usize,
}

impl Default for QuadSettings {
    fn default() -> Self {
        Self { max_order: 256 }
    }
}

impl QuadSettings {
    pub fn new(max_order: usize) -> Result<Self> {
        let s = Self { max_order };
        s.ladder()?;
        Ok(s)
    }

    fn ladder(&self) -> Result<Vec<usize>> {
        let rungs: Vec<usize> = ORDER_LADDER.iter().copied().filter(|&o| o <= self.max_order).collect();
        if rungs.len() < 2 {
            return Err(Error::domain(format!(
                "quadrature max order {} leaves fewer than two ladder rungs (need >= {})",
                self.max_order, ORDER_LADDER[1]
            )));
        }
        Ok(rungs)
    }
}

/// A converged entropic integral with the rung it converged at.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntropicIntegral {
    pub value: f64,
    pub order: usize,
    /// `|I(order) - I(previous order)|`.
    pub delta: f64,
}

/// `v ln v`, continued by `0` at `v = 0`.
pub(crate) fn xlogx(v: f64) -> f64 {
    if v <= 1e-300 {
        0.0
    } else {
        v * v.ln()
    }
}

fn climb_ladder<F>(what: impl Fn() -> String, settings: &QuadSettings, mut estimate: F) -> Result<EntropicIntegral>
where
    F: FnMut(usize) -> Result<f64>,
{
    let rungs = settings.ladder()?;
    let mut previous = estimate(rungs[0])?;
    for pair in rungs.windows(2) {
        let current = estimate(pair[1])?;
        let delta = (current - previous).abs();
        if delta < REL_TOL * current.abs() || delta < ABS_TOL {
            return Ok(EntropicIntegral {
                value: current,
                order: pair[1],
                delta,
            });
        }
        if pair[1] == *rungs.last().expect("non-empty") {
            return Err(Error::Convergence {
                what: what(),
                previous_order: pair[0],
                previous,
                order: pair[1],
                estimate: current,
            });
        }
        previous = current;
    }
    unreachable!("ladder has at least two rungs")
}

/// `E_i(L̃_k^α) = ∫₀^∞ xⁱ x^α e^{-x} L̃_k^α(x)² ln L̃_k^α(x)² dx` for
/// `i ∈ {0, 1}`.
///
/// Pieces touching `x = 0` use Gauss–Legendre, which loses its fast
/// convergence when `α + i` is not a non-negative integer.
pub fn entropic_integral_laguerre(
    degree: usize,
    alpha: f64,
    power: u32,
    settings: &QuadSettings,
) -> Result<EntropicIntegral> {
    if !(alpha > -1.0 && alpha.is_finite()) {
        return Err(Error::domain(format!(
            "Laguerre parameter alpha = {alpha} must exceed -1"
        )));
    }
    if power > 1 {
        return Err(Error::domain(format!(
            "entropic integral power i = {power} must be 0 or 1"
        )));
    }
    let exponent = alpha + f64::from(power);
    let poly_sq = |x: f64| {
        let y = laguerre_orthonormal(degree, alpha, x).expect("validated arguments");
        y * y
    };

    if degree == 0 {
        // constant polynomial: the weight x^{α+i} e^{-x} is absorbed exactly
        return climb_ladder(
            || format!("E_{power}(L~_0^{alpha})"),
            settings,
            |order| {
                let rule = cached_rule(RuleFamily::GaussLaguerre { alpha: exponent }, order)?;
                Ok(rule.integrate(|x| xlogx(poly_sq(x))))
            },
        );
    }

    let zeros = cached_rule(RuleFamily::GaussLaguerre { alpha }, degree)?
        .nodes()
        .to_vec();
    let last = *zeros.last().expect("degree >= 1");
    let tail_start = last + 20.0 + 0.5 * last;
    let mut breaks = Vec::with_capacity(zeros.len() + 2);
    breaks.push(0.0);
    breaks.extend_from_slice(&zeros);
    breaks.push(tail_start);

    let integrand = |x: f64| {
        if x <= 0.0 {
            return 0.0;
        }
        (exponent * x.ln() - x).exp() * xlogx(poly_sq(x))
    };

    climb_ladder(
        || format!("E_{power}(L~_{degree}^{alpha})"),
        settings,
        |order| {
            let legendre = cached_rule(RuleFamily::GaussLegendre, order)?;
            let body: f64 = breaks
                .windows(2)
                .map(|w| legendre.integrate_interval(w[0], w[1], integrand))
                .sum();
            let laguerre = cached_rule(RuleFamily::GaussLaguerre { alpha: 0.0 }, order)?;
            let tail = laguerre.integrate(|t| {
                let x = tail_start + t;
                (exponent * x.ln() - tail_start).exp() * xlogx(poly_sq(x))
            });
            Ok(body + tail)
        },
    )
}

/// `E(C̃_k^λ) = ∫₋₁¹ (1-x²)^{λ-1/2} C̃_k^λ(x)² ln C̃_k^λ(x)² dx` for
/// half-integer `λ ≥ 1/2`, where the weight is a polynomial.
pub fn entropic_integral_gegenbauer(degree: usize, lambda: f64, settings: &QuadSettings) -> Result<EntropicIntegral> {
    let weight_power = lambda - 0.5;
    if !(weight_power >= 0.0 && weight_power.fract() == 0.0) {
        return Err(Error::domain(format!(
            "Gegenbauer entropic integral needs lambda = |m| + 1/2, got {lambda}"
        )));
    }
    let weight_power = weight_power as i32;
    let poly_sq = |x: f64| {
        let c = gegenbauer_orthonormal(degree, lambda, x.clamp(-1.0, 1.0)).expect("validated arguments");
        c * c
    };
    let integrand = |x: f64| (1.0 - x * x).powi(weight_power) * xlogx(poly_sq(x));

    let mut breaks = vec![-1.0];
    if degree > 0 {
        breaks.extend_from_slice(cached_rule(RuleFamily::GaussGegenbauer { lambda }, degree)?.nodes());
    }
    breaks.push(1.0);

    climb_ladder(
        || format!("E(C~_{degree}^{lambda})"),
        settings,
        |order| {
            let legendre = cached_rule(RuleFamily::GaussLegendre, order)?;
            Ok(breaks
                .windows(2)
                .map(|w| legendre.integrate_interval(w[0], w[1], integrand))
                .sum())
        },
    )
}

/// `A₁(n, l)`, the closed-form part of the radial entropy.
pub fn radial_constant(n: u32, l: u32) -> f64 {
    let nf = f64::from(n);
    let lf = f64::from(l);
    (nf.powi(4) / 4.0).ln() + (3.0 * nf * nf - lf * (lf + 1.0)) / nf
        - 2.0 * lf * ((2.0 * nf - 2.0 * lf - 1.0) / (2.0 * nf) + digamma_pos(nf + lf + 1.0))
}

/// `A₂(l, m)`, the closed-form part of the angular entropy (depends on `|m|`).
pub fn angular_constant(l: u32, m: i32) -> f64 {
    let lf = f64::from(l);
    let mf = f64::from(m.unsigned_abs());
    (2.0 * mf + 1.0) * std::f64::consts::LN_2 + std::f64::consts::PI.ln()
        - 2.0 * mf * (digamma_pos(lf + mf + 1.0) - digamma_pos(lf + 0.5) - 1.0 / (2.0 * lf + 1.0))
}

/// Signs with which the entropic integrals enter `S(R)` and `S(Y)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignConvention {
    pub radial: f64,
    pub angular: f64,
}

impl SignConvention {
    /// `S(R) = A₁ - E₁/(2n) - 3 ln Z`, `S(Y) = A₂ - E`; both entropic
    /// integrals are taken with the `+ y² ln y²` integrand.
    pub const CALIBRATED: Self = Self {
        radial: -1.0,
        angular: -1.0,
    };
}

impl Default for SignConvention {
    fn default() -> Self {
        Self::CALIBRATED
    }
}

/// Pieces of `S[ρ] = S(R) + S(Y)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntropyBreakdown {
    #[serde(rename = "A1")]
    pub a1: f64,
    #[serde(rename = "A2")]
    pub a2: f64,
    #[serde(rename = "E1_laguerre")]
    pub e1_laguerre: f64,
    #[serde(rename = "E_gegenbauer")]
    pub e_gegenbauer: f64,
    #[serde(rename = "S_radial")]
    pub s_radial: f64,
    #[serde(rename = "S_angular")]
    pub s_angular: f64,
    #[serde(rename = "S_total")]
    pub s_total: f64,
    /// `B(n,l,m) = S[ρ] + 3 ln Z`, the charge-free part.
    #[serde(rename = "B")]
    pub b: f64,
    pub radial_quadrature: EntropicIntegral,
    pub angular_quadrature: EntropicIntegral,
}

/// Shannon entropy `S[ρ] = -∫ ρ ln ρ d³r` of the orbital.
pub fn shannon_entropy(q: &QuantumNumbers, settings: &QuadSettings) -> Result<EntropyBreakdown> {
    shannon_entropy_with(q, settings, SignConvention::CALIBRATED)
}

/// [`shannon_entropy`] with an explicit sign convention.
pub fn shannon_entropy_with(
    q: &QuantumNumbers,
    settings: &QuadSettings,
    signs: SignConvention,
) -> Result<EntropyBreakdown> {
    let (n, l, abs_m) = (q.n(), q.l(), q.abs_m());
    let radial = entropic_integral_laguerre(q.radial_nodes() as usize, f64::from(2 * l + 1), 1, settings)?;
    let angular = entropic_integral_gegenbauer((l - abs_m) as usize, f64::from(abs_m) + 0.5, settings)?;

    let a1 = radial_constant(n, l);
    let a2 = angular_constant(l, q.m());
    let ln_z3 = 3.0 * q.z().ln();
    let s_radial = a1 + signs.radial * radial.value / (2.0 * f64::from(n)) - ln_z3;
    let s_angular = a2 + signs.angular * angular.value;
    let s_total = s_radial + s_angular;
    Ok(EntropyBreakdown {
        a1,
        a2,
        e1_laguerre: radial.value,
        e_gegenbauer: angular.value,
        s_radial,
        s_angular,
        s_total,
        b: s_total + ln_z3,
        radial_quadrature: radial,
        angular_quadrature: angular,
    })
}
