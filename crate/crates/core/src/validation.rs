//! Closed form against oracle, quantity by quantity.

use serde::Serialize;

use crate::entropy::{shannon_entropy, QuadSettings};
use crate::error::Result;
use crate::measures::{disequilibrium, fisher, variance};
use crate::oracle::{oracle_disequilibrium, oracle_fisher, oracle_shannon, oracle_variance, OracleResult};
use crate::orbital::QuantumNumbers;

/// Acceptance thresholds. Entropy is compared absolutely, the rest
/// relatively.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    pub variance_rel: f64,
    pub fisher_rel: f64,
    pub disequilibrium_rel: f64,
    pub shannon_abs: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            variance_rel: 1e-8,
            fisher_rel: 1e-6,
            disequilibrium_rel: 1e-8,
            shannon_abs: 1e-7,
        }
    }
}

impl Tolerances {
    /// The same threshold for every quantity.
    pub fn uniform(tol: f64) -> Self {
        Self {
            variance_rel: tol,
            fisher_rel: tol,
            disequilibrium_rel: tol,
            shannon_abs: tol,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Quantity {
    #[serde(rename = "V")]
    Variance,
    #[serde(rename = "I")]
    Fisher,
    #[serde(rename = "deseq")]
    Disequilibrium,
    #[serde(rename = "S")]
    Shannon,
}

impl Quantity {
    pub const ALL: [Quantity; 4] = [Self::Variance, Self::Fisher, Self::Disequilibrium, Self::Shannon];

    pub fn label(self) -> &'static str {
        match self {
            Self::Variance => "V",
            Self::Fisher => "I",
            Self::Disequilibrium => "deseq",
            Self::Shannon => "S",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationRow {
    pub orbital: QuantumNumbers,
    pub quantity: Quantity,
    pub closed_form: f64,
    pub oracle: f64,
    pub abs_diff: f64,
    pub rel_diff: f64,
    pub tolerance: f64,
    pub pass: bool,
    /// Set when either side failed to evaluate; the row then fails.
    pub error: Option<String>,
}

/// Orbitals with `n ≤ n_max` and `m ≥ 0`, ordered by `(n, l, m)`.
pub fn orbitals_up_to(n_max: u32, z: f64) -> Result<Vec<QuantumNumbers>> {
    let mut out = Vec::new();
    for n in 1..=n_max {
        for l in 0..n {
            for m in 0..=l as i32 {
                out.push(QuantumNumbers::new(n, l, m, z)?);
            }
        }
    }
    Ok(out)
}

fn row(
    q: &QuantumNumbers,
    quantity: Quantity,
    closed: Result<f64>,
    oracle: Result<OracleResult>,
    tolerance: f64,
) -> ValidationRow {
    match (closed, oracle) {
        (Ok(closed_form), Ok(o)) => {
            let abs_diff = (closed_form - o.value).abs();
            let rel_diff = abs_diff / closed_form.abs();
            let measured = if quantity == Quantity::Shannon {
                abs_diff
            } else {
                rel_diff
            };
            ValidationRow {
                orbital: *q,
                quantity,
                closed_form,
                oracle: o.value,
                abs_diff,
                rel_diff,
                tolerance,
                pass: measured <= tolerance,
                error: None,
            }
        }
        (closed, oracle) => ValidationRow {
            orbital: *q,
            quantity,
            closed_form: closed.as_ref().copied().unwrap_or(f64::NAN),
            oracle: oracle.as_ref().map(|o| o.value).unwrap_or(f64::NAN),
            abs_diff: f64::NAN,
            rel_diff: f64::NAN,
            tolerance,
            pass: false,
            error: Some(
                [closed.err(), oracle.err()]
                    .into_iter()
                    .flatten()
                    .map(|e| e.to_string())
                    .collect::<Vec<_>>()
                    .join("; "),
            ),
        },
    }
}

/// Compares one quantity of one orbital.
pub fn validate_quantity(
    q: &QuantumNumbers,
    quantity: Quantity,
    tol: &Tolerances,
    settings: &QuadSettings,
) -> ValidationRow {
    match quantity {
        Quantity::Variance => row(q, quantity, Ok(variance(q)), oracle_variance(q), tol.variance_rel),
        Quantity::Fisher => row(q, quantity, Ok(fisher(q)), oracle_fisher(q), tol.fisher_rel),
        Quantity::Disequilibrium => row(
            q,
            quantity,
            Ok(disequilibrium(q)),
            oracle_disequilibrium(q),
            tol.disequilibrium_rel,
        ),
        Quantity::Shannon => row(
            q,
            quantity,
            shannon_entropy(q, settings).map(|s| s.s_total),
            oracle_shannon(q),
            tol.shannon_abs,
        ),
    }
}

/// All four comparisons for one orbital.
pub fn validate_orbital(q: &QuantumNumbers, tol: &Tolerances, settings: &QuadSettings) -> Vec<ValidationRow> {
    Quantity::ALL
        .iter()
        .map(|&quantity| validate_quantity(q, quantity, tol, settings))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orbital_count() {
        assert_eq!(orbitals_up_to(6, 1.0).unwrap().len(), 56);
        assert_eq!(orbitals_up_to(1, 1.0).unwrap(), vec![QuantumNumbers::ground_state()]);
    }

    #[test]
    fn small_orbitals_pass() {
        let s = QuadSettings::default();
        for q in orbitals_up_to(2, 1.0).unwrap() {
            for r in validate_orbital(&q, &Tolerances::default(), &s) {
                assert!(r.pass, "{r:?}");
            }
        }
    }

    #[test]
    fn zero_tolerance_fails_inexact_rows() {
        let s = QuadSettings::default();
        let q = QuantumNumbers::hydrogen(2, 1, 1).unwrap();
        let rows = validate_orbital(&q, &Tolerances::uniform(0.0), &s);
        assert!(rows.iter().any(|r| !r.pass));
        assert!(rows.iter().all(|r| r.error.is_none()));
    }
}
