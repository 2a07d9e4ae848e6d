//! Task runners: each turns a loaded configuration into an `OutputTable`.

use zite_core::{
    assemble_with, convergence_study, estimate_n, eval_eigenfunction, solve, Conductivity,
    DispersionQuery, DomainKind, KType, QuadratureInfo, RefractiveIndex, Spectrum,
};

use crate::config::LoadedConfig;
use crate::output::{Cell, OutputTable};
use crate::AppError;

/// Eigenfunction samples as (x1, x2, value) triples.
pub type GridSamples = Vec<(f64, f64, f64)>;

fn runtime(e: zite_core::CoreError) -> AppError {
    AppError::Runtime(e.to_string())
}

/// Shared header: config hash, basis size, quadrature resolution.
fn base_meta(
    loaded: &LoadedConfig,
    basis_size: usize,
    quad: Option<&QuadratureInfo>,
) -> Vec<(&'static str, Cell)> {
    let mut meta = vec![
        ("config_hash", Cell::Text(loaded.hash.clone())),
        ("basis_size", Cell::Int(basis_size)),
    ];
    match quad {
        Some(q) => {
            meta.push(("volume_order", Cell::Int(q.volume_order)));
            meta.push(("boundary_order", Cell::Int(q.boundary_order)));
            meta.push(("volume_points", Cell::Int(q.volume_points)));
            meta.push(("boundary_points", Cell::Int(q.boundary_points)));
        }
        None => {
            let domain = loaded.config.domain().expect("validated earlier");
            meta.push(("volume_order", Cell::Int(domain.volume_quadrature_order)));
            meta.push((
                "boundary_order",
                Cell::Int(domain.boundary_quadrature_order),
            ));
        }
    }
    meta
}

/// Assemble and solve the configured system.
fn solve_configured(loaded: &LoadedConfig) -> Result<(Spectrum, QuadratureInfo), AppError> {
    let cfg = &loaded.config;
    let basis = cfg.basis()?;
    let n = cfg.refractive_index()?;
    let eta = cfg.conductivity()?;
    let system = assemble_with(&basis, &n, &eta, &cfg.assembly_options()).map_err(runtime)?;
    let spectrum = solve(&system).map_err(runtime)?;
    Ok((spectrum, system.quadrature))
}

pub fn run_compute(
    loaded: &LoadedConfig,
    grid_resolution: Option<usize>,
) -> Result<(OutputTable, Option<GridSamples>), AppError> {
    let cfg = &loaded.config;
    let basis = cfg.basis()?;
    let n = cfg.refractive_index()?;
    let eta = cfg.conductivity()?;
    let count = cfg.eigenvalue_count()?;
    let system = assemble_with(&basis, &n, &eta, &cfg.assembly_options()).map_err(runtime)?;
    let spectrum = solve(&system).map_err(runtime)?;

    let mut rows = Vec::new();
    let mut index = 0usize;
    for (pairs, k_type) in [
        (&spectrum.real, KType::Real),
        (&spectrum.imaginary, KType::Imaginary),
    ] {
        for pair in pairs.iter() {
            if rows.len() >= count {
                break;
            }
            index += 1;
            rows.push(vec![
                Cell::Int(index),
                Cell::Real(pair.k),
                Cell::Text(k_type.label().to_string()),
                Cell::Real(system.residual(pair.k, k_type, &pair.omega)),
            ]);
        }
    }

    let grid = match grid_resolution {
        Some(res) => Some(eigenfunction_grid(&spectrum, cfg.domain_kind()?, res)?),
        None => None,
    };

    let table = OutputTable {
        meta: base_meta(loaded, basis.len(), Some(&system.quadrature)),
        columns: vec!["index", "k_value", "k_type", "residual"],
        rows,
        footer: vec![],
    };
    Ok((table, grid))
}

/// Sample the first eigenfunction on a uniform parameter grid: polar
/// (r x theta) on the disk, Cartesian on the square.
fn eigenfunction_grid(
    spectrum: &Spectrum,
    kind: DomainKind,
    res: usize,
) -> Result<GridSamples, AppError> {
    let mut points = Vec::with_capacity(res * res);
    match kind {
        DomainKind::UnitDisk => {
            for i in 0..res {
                let r = i as f64 / (res - 1) as f64;
                for j in 0..res {
                    let theta = 2.0 * std::f64::consts::PI * j as f64 / res as f64;
                    points.push((r * theta.cos(), r * theta.sin()));
                }
            }
        }
        DomainKind::UnitSquare => {
            for i in 0..res {
                let x1 = i as f64 / (res - 1) as f64;
                for j in 0..res {
                    let x2 = j as f64 / (res - 1) as f64;
                    points.push((x1, x2));
                }
            }
        }
    }
    let values = eval_eigenfunction(spectrum, 0, &points).map_err(runtime)?;
    Ok(points
        .iter()
        .zip(values.iter())
        .map(|(&(x1, x2), &v)| (x1, x2, v))
        .collect())
}

pub fn run_reference(loaded: &LoadedConfig) -> Result<OutputTable, AppError> {
    let cfg = &loaded.config;
    if cfg.domain_kind()? != DomainKind::UnitDisk {
        return Err(AppError::Config(
            "the reference task is defined on the unit disk only".into(),
        ));
    }
    let RefractiveIndex::Constant(n) = cfg.refractive_index()? else {
        return Err(AppError::Config(
            "the reference task requires a constant refractive index".into(),
        ));
    };
    let Conductivity::Constant(eta) = cfg.conductivity()? else {
        return Err(AppError::Config(
            "the reference task requires a constant conductivity".into(),
        ));
    };
    let mut query = DispersionQuery::new(n, eta).map_err(|e| AppError::Config(e.to_string()))?;
    if let Some(m_max) = cfg.task.m_max {
        query.m_max = m_max;
    }
    if let Some(window) = cfg.task.k_window {
        query.k_window = (window[0], window[1]);
    }
    if let Some(step) = cfg.task.scan_step {
        query.scan_step = step;
    }
    let count = cfg.eigenvalue_count()?;
    let roots = query.exact_eigenvalues(count).map_err(runtime)?;

    let compare = cfg.task.compare_compute.unwrap_or(false);
    let computed = if compare {
        let (spectrum, _) = solve_configured(loaded)?;
        if spectrum.real.len() < roots.len() {
            return Err(AppError::Runtime(format!(
                "comparison needs {} real eigenvalues but the solver returned {}",
                roots.len(),
                spectrum.real.len()
            )));
        }
        Some(
            spectrum
                .real
                .iter()
                .take(roots.len())
                .map(|p| p.k)
                .collect::<Vec<_>>(),
        )
    } else {
        None
    };

    let mut columns = vec!["index", "m", "k_exact"];
    if compare {
        columns.push("rel_error_vs_compute");
    }
    let rows = roots
        .iter()
        .enumerate()
        .map(|(i, root)| {
            let mut row = vec![
                Cell::Int(i + 1),
                Cell::Int(root.m as usize),
                Cell::Real(root.k),
            ];
            if let Some(ks) = &computed {
                row.push(Cell::Real((ks[i] - root.k).abs() / root.k));
            }
            row
        })
        .collect();

    Ok(OutputTable {
        meta: base_meta(loaded, cfg.basis()?.len(), None),
        columns,
        rows,
        footer: vec![],
    })
}

pub fn run_estimate(loaded: &LoadedConfig) -> Result<OutputTable, AppError> {
    let cfg = &loaded.config;
    let kind = cfg.domain_kind()?;
    let regime = cfg.regime()?;
    let method = cfg.estimate_method()?;
    let n_field = cfg.refractive_index()?;
    let average_n = n_field.average_value(&cfg.domain()?).map_err(runtime)?;

    let (k1, quad) = match cfg.task.k1 {
        Some(k1) => {
            if !(k1.is_finite() && k1 > 0.0) {
                return Err(AppError::Config(format!(
                    "task k1 must be positive and finite, got {k1}"
                )));
            }
            (k1, None)
        }
        None => {
            let (spectrum, quad) = solve_configured(loaded)?;
            let first = spectrum
                .real
                .first()
                .ok_or_else(|| AppError::Runtime("no real eigenvalue to estimate from".into()))?;
            (first.k, Some(quad))
        }
    };
    let n_approx = estimate_n(k1, regime, kind, &method).map_err(runtime)?;

    let mut meta = base_meta(loaded, cfg.basis()?.len(), quad.as_ref());
    meta.push(("average_n", Cell::Real(average_n)));
    Ok(OutputTable {
        meta,
        columns: vec!["k1", "regime", "method", "n_approx"],
        rows: vec![vec![
            Cell::Real(k1),
            Cell::Text(regime.label().to_string()),
            Cell::Text(method.label().to_string()),
            Cell::Real(n_approx),
        ]],
        footer: vec![],
    })
}

pub fn run_convergence(loaded: &LoadedConfig) -> Result<OutputTable, AppError> {
    let cfg = &loaded.config;
    let kind = cfg.domain_kind()?;
    let sizes = cfg.basis_sizes()?;
    let n = cfg.refractive_index()?;
    let eta = cfg.conductivity()?;
    let table = convergence_study(kind, &n, &eta, &sizes).map_err(runtime)?;

    let rows = table
        .rows
        .iter()
        .map(|row| {
            vec![
                Cell::Int(row.n_basis),
                Cell::Real(row.k1),
                Cell::Real(row.error),
            ]
        })
        .collect();
    Ok(OutputTable {
        meta: base_meta(loaded, *sizes.last().unwrap(), None),
        columns: vec!["N", "k1", "error"],
        rows,
        footer: vec![("fitted_slope", Cell::Real(table.slope))],
    })
}
