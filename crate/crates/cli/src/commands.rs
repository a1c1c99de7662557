use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use hydrogenic::measures::{default_fit_range, fit_fisher_shannon_quadratic, MeasureReport};
use hydrogenic::orbital::{sample_profiles, DensityProfile, GridSpec};
use hydrogenic::validation::{orbitals_up_to, validate_orbital, Tolerances, ValidationRow};
use hydrogenic::{QuadSettings, QuantumNumbers};
use rayon::prelude::*;
use serde_json::json;

use crate::table::{Cell, Table};
use crate::{Axis, Cli, Command, Format, GlobalOpts};

pub enum Outcome {
    Success,
    ValidationFailed,
}

const VALIDATE_N_LIMIT: u32 = 8;

pub fn run(cli: &Cli) -> Result<Outcome> {
    let g = &cli.global;
    if !(g.z > 0.0 && g.z.is_finite()) {
        bail!("Z out of range Z > 0 (got {})", g.z);
    }
    let settings = QuadSettings::new(g.quad_max_order)?;
    if let Some(jobs) = g.jobs {
        if jobs == 0 {
            bail!("--jobs must be at least 1");
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .context("configuring worker pool")?;
    }

    match &cli.command {
        Command::Orbital { n, l, m } => {
            let q = QuantumNumbers::new(*n, *l, *m, g.z)?;
            let report = MeasureReport::compute(&q, &settings)?;
            let mut table = Table::new(REPORT_COLUMNS);
            table.push(report_row(&report, settings.max_order));
            match g.format {
                // a single object rather than a one-element array
                Format::Json => emit_json(g, &table.to_json()[0])?,
                Format::Csv => emit(g, &table)?,
            }
        }
        Command::Sweep {
            vary,
            from,
            to,
            n,
            l,
            m,
            measures,
            normalize,
        } => {
            let table = sweep(
                g,
                &settings,
                *vary,
                *from,
                *to,
                (*n, *l, *m),
                measures.as_deref(),
                *normalize,
            )?;
            emit(g, &table)?;
        }
        Command::Bounds { n_max } => emit(g, &bounds(g, &settings, *n_max)?)?,
        Command::Profiles {
            n,
            l,
            m,
            r_max,
            r_points,
            theta_points,
        } => {
            let q = QuantumNumbers::new(*n, *l, *m, g.z)?;
            let grid = GridSpec {
                r_max: *r_max,
                r_points: *r_points,
                theta_points: *theta_points,
            };
            let (radial, angular) = sample_profiles(&q, &grid)?;
            profiles(g, &radial, &angular)?;
        }
        Command::Fit {
            l,
            m,
            n_from,
            n_to,
            raw,
        } => {
            let default = default_fit_range(*l);
            let range = n_from.unwrap_or(*default.start())..=n_to.unwrap_or(*default.end());
            let fit = fit_fisher_shannon_quadratic(*l, *m, range.clone(), !raw, &settings)?;
            let mut table = Table::new(["l", "m", "n_from", "n_to", "normalized", "a", "b", "c", "R"]);
            table.push(vec![
                (*l).into(),
                (*m).into(),
                (*range.start()).into(),
                (*range.end()).into(),
                (!raw).into(),
                fit.a.into(),
                fit.b.into(),
                fit.c.into(),
                fit.r.into(),
            ]);
            match g.format {
                Format::Csv => emit(g, &table)?,
                Format::Json => {
                    let mut object = table.to_json()[0].clone();
                    let mut points = Table::new(["n", "value"]);
                    for (x, y) in fit.xs.iter().zip(&fit.ys) {
                        points.push(vec![(*x as i64).into(), (*y).into()]);
                    }
                    object["points"] = points.to_json();
                    object["R_definition"] = json!("Pearson correlation of fitted and computed values");
                    emit_json(g, &object)?;
                }
            }
        }
        Command::Validate { n_max, allow_large } => {
            if *n_max == 0 {
                bail!("n_max must be at least 1");
            }
            if *n_max > VALIDATE_N_LIMIT && !allow_large {
                bail!("n_max = {n_max} exceeds {VALIDATE_N_LIMIT}; pass --allow-large to run anyway");
            }
            let tol = g.tol.map_or_else(Tolerances::default, Tolerances::uniform);
            let orbitals = orbitals_up_to(*n_max, g.z)?;
            let rows: Vec<ValidationRow> = orbitals
                .par_iter()
                .flat_map_iter(|q| validate_orbital(q, &tol, &settings))
                .collect();
            emit(g, &validation_table(&rows))?;
            let failures: Vec<&ValidationRow> = rows.iter().filter(|r| !r.pass).collect();
            if !failures.is_empty() {
                eprintln!("{} of {} checks failed:", failures.len(), rows.len());
                for r in failures {
                    eprintln!(
                        "  {} {}: closed form {} vs oracle {} (abs {:e}, rel {:e}, tol {:e}){}",
                        r.orbital,
                        r.quantity.label(),
                        r.closed_form,
                        r.oracle,
                        r.abs_diff,
                        r.rel_diff,
                        r.tolerance,
                        r.error.as_deref().map(|e| format!(": {e}")).unwrap_or_default()
                    );
                }
                return Ok(Outcome::ValidationFailed);
            }
        }
    }
    Ok(Outcome::Success)
}

const REPORT_COLUMNS: [&str; 32] = [
    "n",
    "l",
    "m",
    "Z",
    "V",
    "I",
    "S",
    "H",
    "J",
    "deseq",
    "mean_r",
    "C_CR",
    "C_FS",
    "C_SC",
    "B_FS",
    "B_SC",
    "xi_FS",
    "xi_SC",
    "zeta_CR",
    "zeta_FS",
    "zeta_SC",
    "A1",
    "A2",
    "E1_laguerre",
    "E_gegenbauer",
    "S_radial",
    "S_angular",
    "radial_quad_order",
    "radial_quad_delta",
    "angular_quad_order",
    "angular_quad_delta",
    "quad_max_order",
];

fn report_row(r: &MeasureReport, max_order: usize) -> Vec<Cell> {
    let e = &r.entropy;
    vec![
        r.q.n().into(),
        r.q.l().into(),
        r.q.m().into(),
        r.q.z().into(),
        r.variance.into(),
        r.fisher.into(),
        r.shannon.into(),
        r.entropic_power.into(),
        r.modified_entropic_power.into(),
        r.disequilibrium.into(),
        r.mean_radius.into(),
        r.cramer_rao.into(),
        r.fisher_shannon.into(),
        r.shape_complexity.into(),
        r.bound_fs.into(),
        r.bound_sc.into(),
        r.xi_fs.into(),
        r.xi_sc.into(),
        r.zeta_cr.into(),
        r.zeta_fs.into(),
        r.zeta_sc.into(),
        e.a1.into(),
        e.a2.into(),
        e.e1_laguerre.into(),
        e.e_gegenbauer.into(),
        e.s_radial.into(),
        e.s_angular.into(),
        e.radial_quadrature.order.into(),
        e.radial_quadrature.delta.into(),
        e.angular_quadrature.order.into(),
        e.angular_quadrature.delta.into(),
        max_order.into(),
    ]
}

const SWEEP_KEYS: [&str; 4] = ["n", "l", "m", "Z"];
const SWEEP_MEASURES: [&str; 11] = [
    "V", "I", "S", "H", "deseq", "C_CR", "C_FS", "C_SC", "zeta_CR", "zeta_FS", "zeta_SC",
];

#[allow(clippy::too_many_arguments)]
fn sweep(
    g: &GlobalOpts,
    settings: &QuadSettings,
    vary: Axis,
    from: i32,
    to: i32,
    fixed: (Option<u32>, Option<u32>, Option<i32>),
    measures: Option<&[String]>,
    normalize: bool,
) -> Result<Table> {
    if from > to {
        bail!("empty sweep range {from}..={to}");
    }
    if let Some(list) = measures {
        for name in list {
            if !SWEEP_MEASURES.contains(&name.as_str()) {
                bail!(
                    "unknown measure column {name:?}; choose from {}",
                    SWEEP_MEASURES.join(",")
                );
            }
        }
    }
    let need =
        |value: Option<i64>, name: &str| value.with_context(|| format!("sweeping {vary:?} needs a fixed --{name}"));
    let labels: Vec<(i64, i64, i64)> = (from..=to)
        .map(|v| {
            let v = i64::from(v);
            Ok(match vary {
                Axis::N => (
                    v,
                    need(fixed.1.map(i64::from), "l")?,
                    need(fixed.2.map(i64::from), "m")?,
                ),
                Axis::L => (
                    need(fixed.0.map(i64::from), "n")?,
                    v,
                    need(fixed.2.map(i64::from), "m")?,
                ),
                Axis::M => (
                    need(fixed.0.map(i64::from), "n")?,
                    need(fixed.1.map(i64::from), "l")?,
                    v,
                ),
            })
        })
        .collect::<Result<_>>()?;

    let rows: Vec<Vec<Cell>> = labels
        .par_iter()
        .map(|&(n, l, m)| sweep_row(n, l, m, g.z, settings))
        .collect();

    let mut table = Table::new(SWEEP_KEYS.iter().chain(&SWEEP_MEASURES).chain(&["error"]).copied());
    for row in rows {
        table.push(row);
    }
    table.retain_columns(|c| {
        if SWEEP_KEYS.contains(&c) || c == "error" {
            return true;
        }
        if !normalize && c.starts_with("zeta_") {
            return false;
        }
        measures.is_none_or(|list| list.iter().any(|name| name == c))
    });
    Ok(table)
}

fn sweep_row(n: i64, l: i64, m: i64, z: f64, settings: &QuadSettings) -> Vec<Cell> {
    let blank = |error: String| {
        let mut row: Vec<Cell> = vec![n.into(), l.into(), m.into(), z.into()];
        row.extend(SWEEP_MEASURES.iter().map(|_| Cell::Empty));
        row.push(error.into());
        row
    };
    let q = match (u32::try_from(n), u32::try_from(l), i32::try_from(m)) {
        (Ok(n), Ok(l), Ok(m)) => match QuantumNumbers::new(n, l, m, z) {
            Ok(q) => q,
            Err(e) => return blank(e.to_string()),
        },
        _ => return blank(format!("invalid orbital: ({n},{l},{m}) has a negative n or l")),
    };
    match MeasureReport::compute(&q, settings) {
        Ok(r) => vec![
            n.into(),
            l.into(),
            m.into(),
            z.into(),
            r.variance.into(),
            r.fisher.into(),
            r.shannon.into(),
            r.entropic_power.into(),
            r.disequilibrium.into(),
            r.cramer_rao.into(),
            r.fisher_shannon.into(),
            r.shape_complexity.into(),
            r.zeta_cr.into(),
            r.zeta_fs.into(),
            r.zeta_sc.into(),
            Cell::Empty,
        ],
        Err(e) => blank(e.to_string()),
    }
}

fn bounds(g: &GlobalOpts, settings: &QuadSettings, n_max: u32) -> Result<Table> {
    if n_max == 0 {
        bail!("n_max must be at least 1");
    }
    let orbitals: Vec<QuantumNumbers> = (1..=n_max)
        .flat_map(|n| (0..n).map(move |l| (n, l)))
        .map(|(n, l)| QuantumNumbers::new(n, l, 0, g.z))
        .collect::<Result<_, _>>()?;
    let reports: Vec<MeasureReport> = orbitals
        .par_iter()
        .map(|q| MeasureReport::compute(q, settings))
        .collect::<Result<_, _>>()?;
    let mut table = Table::new(["n", "l", "m", "Z", "C_FS", "B_FS", "xi_FS", "C_SC", "B_SC", "xi_SC"]);
    for r in reports {
        table.push(vec![
            r.q.n().into(),
            r.q.l().into(),
            r.q.m().into(),
            r.q.z().into(),
            r.fisher_shannon.into(),
            r.bound_fs.into(),
            r.xi_fs.into(),
            r.shape_complexity.into(),
            r.bound_sc.into(),
            r.xi_sc.into(),
        ]);
    }
    Ok(table)
}

fn profile_table(p: &DensityProfile, abscissa: &str, value: &str) -> Table {
    let mut t = Table::new([abscissa, value]);
    for (x, y) in p.abscissas.iter().zip(&p.values) {
        t.push(vec![(*x).into(), (*y).into()]);
    }
    t
}

fn profiles(g: &GlobalOpts, radial: &DensityProfile, angular: &DensityProfile) -> Result<()> {
    let radial = profile_table(radial, "r", "D");
    let angular = profile_table(angular, "theta", "Theta");
    let ext = match g.format {
        Format::Csv => "csv",
        Format::Json => "json",
    };
    match &g.out {
        Some(prefix) => {
            for (table, part) in [(&radial, "radial"), (&angular, "angular")] {
                let path = suffixed(prefix, part, ext);
                let mut w = create(&path)?;
                write_table(&mut w, g.format, table)?;
                w.flush()?;
            }
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            match g.format {
                Format::Csv => {
                    radial.write_csv(&mut w)?;
                    writeln!(w)?;
                    angular.write_csv(&mut w)?;
                }
                Format::Json => {
                    let value = json!({ "radial": radial.to_json(), "angular": angular.to_json() });
                    writeln!(w, "{}", serde_json::to_string_pretty(&value)?)?;
                }
            }
        }
    }
    Ok(())
}

fn suffixed(prefix: &Path, part: &str, ext: &str) -> PathBuf {
    let mut name = prefix.as_os_str().to_owned();
    name.push(format!("_{part}.{ext}"));
    PathBuf::from(name)
}

fn validation_table(rows: &[ValidationRow]) -> Table {
    let mut t = Table::new([
        "orbital",
        "quantity",
        "closed_form",
        "oracle",
        "abs_diff",
        "rel_diff",
        "tolerance",
        "pass",
        "error",
    ]);
    for r in rows {
        let q = &r.orbital;
        t.push(vec![
            format!("({} {} {})", q.n(), q.l(), q.m()).into(),
            r.quantity.label().into(),
            r.closed_form.into(),
            r.oracle.into(),
            r.abs_diff.into(),
            r.rel_diff.into(),
            r.tolerance.into(),
            r.pass.into(),
            r.error.clone().into(),
        ]);
    }
    t
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    Ok(BufWriter::new(file))
}

fn write_table(w: &mut dyn Write, format: Format, table: &Table) -> Result<()> {
    match format {
        Format::Csv => table.write_csv(w)?,
        Format::Json => writeln!(w, "{}", serde_json::to_string_pretty(&table.to_json())?)?,
    }
    Ok(())
}

fn emit(g: &GlobalOpts, table: &Table) -> Result<()> {
    match &g.out {
        Some(path) => {
            let mut w = create(path)?;
            write_table(&mut w, g.format, table)?;
            w.flush()?;
        }
        None => write_table(&mut io::stdout().lock(), g.format, table)?,
    }
    Ok(())
}

fn emit_json(g: &GlobalOpts, value: &serde_json::Value) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    match &g.out {
        Some(path) => {
            let mut w = create(path)?;
            writeln!(w, "{text}")?;
            w.flush()?;
        }
        None => writeln!(io::stdout().lock(), "{text}")?,
    }
    Ok(())
}
