//! Acceptance suite. Runs without the libtest harness so that every
//! criterion prints exactly one PASS/FAIL line; the process exits non-zero
//! when any criterion fails.

use std::f64::consts::{E, PI};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use hydrogenic::entropy::{shannon_entropy, shannon_entropy_with, QuadSettings, SignConvention};
use hydrogenic::measures::fit::{default_fit_range, fit_fisher_shannon_quadratic};
use hydrogenic::measures::{
    bounds, cramer_rao, disequilibrium, fisher, fisher_shannon, shape_complexity, variance, zeta, Complexity,
};
use hydrogenic::oracle::oracle_shannon;
use hydrogenic::orbital::QuantumNumbers;
use hydrogenic::validation::{orbitals_up_to, validate_orbital, Tolerances};
use hydrogenic::wigner::{three_j_squared, three_j_uncached};
use num_rational::BigRational;
use num_traits::{One, Zero};

type Outcome = Result<String, String>;

struct Criterion {
    id: u32,
    title: &'static str,
    budget: Duration,
    run: fn() -> Outcome,
}

fn q(n: u32, l: u32, m: i32) -> QuantumNumbers {
    QuantumNumbers::hydrogen(n, l, m).expect("valid orbital")
}

fn settings() -> QuadSettings {
    QuadSettings::default()
}

/// Collects failed checks so one criterion can report all of them.
#[derive(Default)]
struct Checks {
    failures: Vec<String>,
    count: usize,
}

impl Checks {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.count += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn close(&mut self, label: &str, got: f64, expected: f64, tol: f64) {
        let diff = (got - expected).abs();
        self.check(diff <= tol * expected.abs().max(1.0), || {
            format!("{label}: {got:.12} vs {expected:.12} (diff {diff:.2e})")
        });
    }

    fn finish(self, summary: String) -> Outcome {
        if self.failures.is_empty() {
            Ok(format!("{} checks; {summary}", self.count))
        } else {
            let shown: Vec<_> = self.failures.iter().take(4).cloned().collect();
            Err(format!(
                "{}/{} checks failed; {}{}",
                self.failures.len(),
                self.count,
                shown.join("; "),
                if self.failures.len() > 4 { "; ..." } else { "" }
            ))
        }
    }
}

fn ground_state_values() -> Outcome {
    let s = settings();
    let mut c = Checks::default();
    for z in [1.0, 3.0] {
        let g = QuantumNumbers::new(1, 0, 0, z).expect("ground state");
        c.close(&format!("C_CR Z={z}"), cramer_rao(&g), 3.0, 1e-9);
        c.close(
            &format!("<rho> Z={z}"),
            disequilibrium(&g),
            z.powi(3) / (8.0 * PI),
            1e-9,
        );
        c.close(&format!("V Z={z}"), variance(&g), 3.0 / (4.0 * z * z), 1e-9);
        c.close(&format!("I Z={z}"), fisher(&g), 4.0 * z * z, 1e-9);
        let entropy = shannon_entropy(&g, &s).map_err(|e| e.to_string())?.s_total;
        c.close(&format!("S Z={z}"), entropy, 3.0 + PI.ln() - 3.0 * z.ln(), 1e-7);
        let fs = fisher_shannon(&g, &s).map_err(|e| e.to_string())?;
        c.close(&format!("C_FS Z={z}"), fs, 2.0 * E / PI.cbrt(), 1e-7);
        let sc = shape_complexity(&g, &s).map_err(|e| e.to_string())?;
        c.close(&format!("C_SC Z={z}"), sc, E.powi(3) / 8.0, 1e-7);
    }
    c.finish("Z in {1, 3}".into())
}

fn oracle_agreement() -> Outcome {
    let s = settings();
    let tol = Tolerances::default();
    let orbitals = orbitals_up_to(6, 1.0).map_err(|e| e.to_string())?;
    let mut c = Checks::default();
    let mut worst = [0.0f64; 4];
    for orbital in &orbitals {
        for (i, row) in validate_orbital(orbital, &tol, &s).into_iter().enumerate() {
            let metric = if i == 3 { row.abs_diff } else { row.rel_diff };
            worst[i] = worst[i].max(metric);
            c.check(row.pass, || {
                format!(
                    "({},{},{}) {}: {} vs oracle {} {}",
                    orbital.n(),
                    orbital.l(),
                    orbital.m(),
                    row.quantity.label(),
                    row.closed_form,
                    row.oracle,
                    row.error.clone().unwrap_or_default()
                )
            });
        }
    }
    let summary = format!(
        "{} orbitals; worst V {:.1e} rel, I {:.1e} rel, <rho> {:.1e} rel, S {:.1e} abs",
        orbitals.len(),
        worst[0],
        worst[1],
        worst[2],
        worst[3]
    );
    if orbitals.len() != 56 {
        return Err(format!("expected 56 orbitals; {summary}"));
    }
    c.finish(summary)
}

fn charge_invariance() -> Outcome {
    let s = settings();
    let sample = [
        (1, 0, 0),
        (2, 0, 0),
        (2, 1, 1),
        (3, 2, 0),
        (4, 3, -2),
        (5, 1, 0),
        (6, 5, 5),
        (8, 4, 2),
        (10, 0, 0),
        (12, 7, -3),
    ];
    let mut c = Checks::default();
    let mut worst = 0.0f64;
    for &(n, l, m) in &sample {
        let at = |z: f64| -> Result<[f64; 3], String> {
            let orbital = QuantumNumbers::new(n, l, m, z).map_err(|e| e.to_string())?;
            Ok([
                cramer_rao(&orbital),
                fisher_shannon(&orbital, &s).map_err(|e| e.to_string())?,
                shape_complexity(&orbital, &s).map_err(|e| e.to_string())?,
            ])
        };
        let reference = at(1.0)?;
        for z in [2.0, 10.0, 50.0] {
            let other = at(z)?;
            for (k, name) in ["C_CR", "C_FS", "C_SC"].iter().enumerate() {
                let diff = (other[k] - reference[k]).abs();
                worst = worst.max(diff);
                c.check(diff <= 1e-10, || format!("{name}({n},{l},{m}) Z={z}: diff {diff:.2e}"));
            }
        }
    }
    c.finish(format!("10 orbitals x Z in {{2, 10, 50}}; worst abs diff {worst:.1e}"))
}

fn s_state_ordering() -> Outcome {
    let s = settings();
    let mut c = Checks::default();
    let mut sc_values = Vec::new();
    for n in 1..=10 {
        let orbital = q(n, 0, 0);
        let z = |k| zeta(k, &orbital, &s).map_err(|e| e.to_string());
        let (cr, fs, sc) = (
            z(Complexity::CramerRao)?,
            z(Complexity::FisherShannon)?,
            z(Complexity::ShapeComplexity)?,
        );
        if n >= 2 {
            c.check(fs > cr && cr > sc, || {
                format!("n={n}: zeta FS {fs:.5}, CR {cr:.5}, SC {sc:.5}")
            });
        }
        c.check((1.0..=1.05).contains(&sc), || {
            format!("n={n}: zeta_SC {sc:.6} outside [1, 1.05]")
        });
        sc_values.push(sc);
    }
    c.finish(format!(
        "zeta_SC(n,0,0) spans {:.5}..{:.5}",
        sc_values.iter().cloned().fold(f64::MAX, f64::min),
        sc_values.iter().cloned().fold(f64::MIN, f64::max)
    ))
}

fn magnetic_dependence() -> Outcome {
    let s = settings();
    let mut c = Checks::default();
    let z = |k, m| zeta(k, &q(20, 17, m), &s).map_err(|e| e.to_string());
    let end = z(Complexity::ShapeComplexity, 17)?;
    c.check((end - 0.6).abs() <= 0.05, || format!("zeta_SC(20,17,17) = {end:.5}"));
    for kind in [Complexity::FisherShannon, Complexity::CramerRao] {
        let values: Vec<f64> = (0..=17).map(|m| z(kind, m)).collect::<Result<_, _>>()?;
        for (m, w) in values.windows(2).enumerate() {
            c.check(w[1] < w[0], || {
                format!("{kind:?} not decreasing at m={}: {} -> {}", m + 1, w[0], w[1])
            });
        }
    }
    c.finish(format!("zeta_SC(20,17,17) = {end:.5}"))
}

fn azimuthal_band() -> Outcome {
    let s = settings();
    let mut c = Checks::default();
    let values: Vec<f64> = (1..20)
        .map(|l| zeta(Complexity::ShapeComplexity, &q(20, l, 1), &s).map_err(|e| e.to_string()))
        .collect::<Result<_, _>>()?;
    for (i, &v) in values.iter().enumerate() {
        c.check(v > 0.76 - 0.03 && v <= 1.0, || {
            format!("zeta_SC(20,{},1) = {v:.5} outside (0.73, 1]", i + 1)
        });
    }
    // decreasing trend: negative least-squares slope and a lower last value
    let ls: Vec<f64> = (1..20).map(f64::from).collect();
    let mean_l = ls.iter().sum::<f64>() / ls.len() as f64;
    let mean_v = values.iter().sum::<f64>() / values.len() as f64;
    let slope: f64 = ls
        .iter()
        .zip(&values)
        .map(|(l, v)| (l - mean_l) * (v - mean_v))
        .sum::<f64>()
        / ls.iter().map(|l| (l - mean_l).powi(2)).sum::<f64>();
    c.check(slope < 0.0, || format!("trend slope {slope:.3e} is not negative"));
    let (first, last) = (values[0], values[values.len() - 1]);
    c.check(last < first, || {
        format!("zeta_SC(20,19,1) = {last:.5} not below zeta_SC(20,1,1) = {first:.5}")
    });
    c.finish(format!("range {last:.5}..{first:.5}, slope {slope:.2e}"))
}

fn fisher_shannon_fit() -> Outcome {
    let s = settings();
    let mut c = Checks::default();
    let mut summary = Vec::new();
    for &(l, m, a, b, cc, ta, tb, tc) in &[
        (0u32, 0i32, 0.565, 1.202, -1.270, 0.05, 0.15, 0.3),
        (3, 1, 0.451, 0.459, -4.672, 0.05, 0.2, 0.5),
    ] {
        let fit = fit_fisher_shannon_quadratic(l, m, default_fit_range(l), true, &s).map_err(|e| e.to_string())?;
        c.check((fit.a - a).abs() <= ta, || format!("({l},{m}) a = {:.5}", fit.a));
        c.check((fit.b - b).abs() <= tb, || format!("({l},{m}) b = {:.5}", fit.b));
        c.check((fit.c - cc).abs() <= tc, || format!("({l},{m}) c = {:.5}", fit.c));
        c.check(fit.r > 0.999, || format!("({l},{m}) R = {:.7}", fit.r));
        summary.push(format!(
            "({l},{m}): a {:.5} b {:.5} c {:.5} R {:.7}",
            fit.a, fit.b, fit.c, fit.r
        ));
    }
    c.finish(summary.join(", "))
}

fn upper_bounds() -> Outcome {
    let s = settings();
    let mut c = Checks::default();
    let mut orbitals = Vec::new();
    for n in 1..=6 {
        for l in 0..n {
            for m in -(l as i32)..=l as i32 {
                orbitals.push(q(n, l, m));
            }
        }
    }
    orbitals.extend([q(20, 0, 0), q(20, 10, 0), q(20, 19, 0)]);
    let mut tightest = f64::MAX;
    for orbital in &orbitals {
        let b = bounds(orbital, &s).map_err(|e| e.to_string())?;
        let fs = fisher_shannon(orbital, &s).map_err(|e| e.to_string())?;
        let sc = shape_complexity(orbital, &s).map_err(|e| e.to_string())?;
        let label = || format!("({},{},{})", orbital.n(), orbital.l(), orbital.m());
        if orbital.n() > 1 {
            tightest = tightest.min(b.xi_fs.min(b.xi_sc));
            c.check(fs <= b.bound_fs, || {
                format!("{} C_FS {fs} > B_FS {}", label(), b.bound_fs)
            });
            c.check(sc <= b.bound_sc, || {
                format!("{} C_SC {sc} > B_SC {}", label(), b.bound_sc)
            });
        }
    }
    let g = bounds(&QuantumNumbers::ground_state(), &s).map_err(|e| e.to_string())?;
    c.check(g.xi_fs.abs() <= 1e-9, || format!("xi_FS(1,0,0) = {:.2e}", g.xi_fs));
    c.check(g.xi_sc.abs() <= 1e-9, || format!("xi_SC(1,0,0) = {:.2e}", g.xi_sc));
    c.finish(format!(
        "{} orbitals; ground xi_FS {:.1e}, xi_SC {:.1e}; smallest excited-state xi {tightest:.3e}",
        orbitals.len(),
        g.xi_fs,
        g.xi_sc
    ))
}

fn lower_bounds() -> Outcome {
    let s = settings();
    let mut c = Checks::default();
    let mut lowest_cr = (f64::MAX, (0, 0, 0));
    for n in 1..=30u32 {
        for l in 0..n {
            for m in -(l as i32)..=l as i32 {
                let v = cramer_rao(&q(n, l, m));
                if v < lowest_cr.0 {
                    lowest_cr = (v, (n, l, m));
                }
                c.check(v >= 3.0, || format!("C_CR({n},{l},{m}) = {v:.6}"));
            }
        }
    }
    let mut lowest_fs = f64::MAX;
    for n in 1..=6u32 {
        for l in 0..n {
            for m in -(l as i32)..=l as i32 {
                let v = fisher_shannon(&q(n, l, m), &s).map_err(|e| e.to_string())?;
                lowest_fs = lowest_fs.min(v);
                c.check(v >= 3.0, || format!("C_FS({n},{l},{m}) = {v:.6}"));
            }
        }
    }
    let (v, (n, l, m)) = lowest_cr;
    c.finish(format!("min C_CR {v:.6} at ({n},{l},{m}); min C_FS {lowest_fs:.6}"))
}

fn wigner_identities() -> Outcome {
    let mut c = Checks::default();
    let err = |e: hydrogenic::Error| e.to_string();
    for l in 0..=19i32 {
        // Σ_{L} (2L+1) (l l L; m -m 0)² = 1 for every m
        for m in -l..=l {
            let mut total = BigRational::zero();
            for big_l in 0..=2 * l {
                total += three_j_squared(l, l, big_l, m, -m, 0).map_err(err)?
                    * BigRational::from_integer((2 * big_l + 1).into());
            }
            c.check(total.is_one(), || format!("sum over L for l={l}, m={m} is {total}"));
        }
        for big_l in 0..=2 * l {
            // Σ_m (l l L; m -m 0)² = 1/(2L+1)
            let mut total = BigRational::zero();
            for m in -l..=l {
                total += three_j_squared(l, l, big_l, m, -m, 0).map_err(err)?;
            }
            let expected = BigRational::new(1.into(), (2 * big_l + 1).into());
            c.check(total == expected, || {
                format!("sum over m for l={l}, L={big_l} is {total}")
            });

            let phase_odd = big_l % 2 == 1;
            for m in -l..=l {
                let base = three_j_uncached(l, l, big_l, m, -m, 0).map_err(err)?;
                let flip = |w: hydrogenic::wigner::SignedSqrtRational| if phase_odd { w.negate() } else { w };
                let cyclic1 = three_j_uncached(l, big_l, l, -m, 0, m).map_err(err)?;
                let cyclic2 = three_j_uncached(big_l, l, l, 0, m, -m).map_err(err)?;
                // swapping the equal columns is also the m -> -m reflection
                let swap12 = flip(three_j_uncached(l, l, big_l, -m, m, 0).map_err(err)?);
                let swap13 = flip(three_j_uncached(big_l, l, l, 0, -m, m).map_err(err)?);
                let swap23 = flip(three_j_uncached(l, big_l, l, m, 0, -m).map_err(err)?);
                let all = [cyclic1, cyclic2, swap12, swap13, swap23];
                c.check(all.iter().all(|w| *w == base), || {
                    format!("symmetry of ({l} {l} {big_l}; {m} {} 0)", -m)
                });
            }
        }
    }
    c.finish("every (l l L; m -m 0) with l <= 19".into())
}

fn sign_calibration() -> Outcome {
    let s = settings();
    let mut c = Checks::default();
    let orbitals = [q(2, 0, 0), q(2, 1, 0), q(3, 2, 2)];
    let oracle: Vec<f64> = orbitals
        .iter()
        .map(|o| oracle_shannon(o).map(|r| r.value).map_err(|e| e.to_string()))
        .collect::<Result<_, _>>()?;
    let entropy = |o: &QuantumNumbers, signs| {
        shannon_entropy_with(o, &s, signs)
            .map(|b| b.s_total)
            .map_err(|e| e.to_string())
    };
    let mut worst = 0.0f64;
    for (o, &reference) in orbitals.iter().zip(&oracle) {
        let got = entropy(o, SignConvention::CALIBRATED)?;
        let diff = (got - reference).abs();
        worst = worst.max(diff);
        c.check(diff <= 1e-7, || {
            format!("({},{},{}): {got} vs oracle {reference}", o.n(), o.l(), o.m())
        });
    }
    let flips = [
        SignConvention {
            radial: 1.0,
            angular: -1.0,
        },
        SignConvention {
            radial: -1.0,
            angular: 1.0,
        },
        SignConvention {
            radial: 1.0,
            angular: 1.0,
        },
    ];
    for signs in flips {
        let mut detected = false;
        for (o, &reference) in orbitals.iter().zip(&oracle) {
            detected |= (entropy(o, signs)? - reference).abs() > 1e-7;
        }
        c.check(detected, || format!("flip {signs:?} not detected"));
    }
    c.finish(format!("worst abs diff {worst:.1e}; all 3 flips detected"))
}

fn main() -> ExitCode {
    let criteria = [
        Criterion {
            id: 1,
            title: "ground-state closed forms",
            budget: Duration::from_secs(1),
            run: ground_state_values,
        },
        Criterion {
            id: 2,
            title: "oracle agreement for n <= 6",
            budget: Duration::from_secs(300),
            run: oracle_agreement,
        },
        Criterion {
            id: 3,
            title: "charge invariance of C_CR, C_FS, C_SC",
            budget: Duration::from_secs(10),
            run: charge_invariance,
        },
        Criterion {
            id: 4,
            title: "ordering of zeta over s states",
            budget: Duration::from_secs(30),
            run: s_state_ordering,
        },
        Criterion {
            id: 5,
            title: "zeta along m at (20,17)",
            budget: Duration::from_secs(60),
            run: magnetic_dependence,
        },
        Criterion {
            id: 6,
            title: "zeta_SC band at (20,l,1)",
            budget: Duration::from_secs(120),
            run: azimuthal_band,
        },
        Criterion {
            id: 7,
            title: "quadratic fit of C_FS",
            budget: Duration::from_secs(60),
            run: fisher_shannon_fit,
        },
        Criterion {
            id: 8,
            title: "upper bounds B_FS and B_SC",
            budget: Duration::from_secs(180),
            run: upper_bounds,
        },
        Criterion {
            id: 9,
            title: "lower bounds C_CR >= 3 and C_FS >= 3",
            budget: Duration::from_secs(60),
            run: lower_bounds,
        },
        Criterion {
            id: 10,
            title: "exact 3j identities",
            budget: Duration::from_secs(60),
            run: wigner_identities,
        },
        Criterion {
            id: 11,
            title: "entropy sign calibration",
            budget: Duration::from_secs(10),
            run: sign_calibration,
        },
    ];
    let mut failed = 0;
    for criterion in &criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(criterion.run))
            .unwrap_or_else(|p| Err(format!("panicked: {}", panic_message(&p))));
        let elapsed = start.elapsed();
        let timing = format!(
            "{:.2}s of {}s budget{}",
            elapsed.as_secs_f64(),
            criterion.budget.as_secs(),
            if elapsed > criterion.budget {
                ", over budget"
            } else {
                ""
            }
        );
        match outcome {
            Ok(detail) => println!(
                "criterion {:>2} PASS  {}: {detail} ({timing})",
                criterion.id, criterion.title
            ),
            Err(detail) => {
                failed += 1;
                println!(
                    "criterion {:>2} FAIL  {}: {detail} ({timing})",
                    criterion.id, criterion.title
                );
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn panic_message(payload: &Box<dyn std::any::Any + Send>) -> String {
    payload
        .downcast_ref::<String>()
        .cloned()
        .or_else(|| payload.downcast_ref::<&str>().map(|s| s.to_string()))
        .unwrap_or_else(|| "unknown panic".into())
}
