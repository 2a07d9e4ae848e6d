//! TOML run configuration: schema, loading, and conversion to core types.
//!
//! Any schema violation (unknown field, missing/misspelled parameter,
//! wrong coefficient family for the domain) is a config error, reported
//! with exit code 2 before any computation starts.

use std::path::Path;

use serde::Deserialize;
use sha2::{Digest, Sha256};
use zite_core::{
    build_disk_basis, build_square_basis, AssemblyOptions, BasisSet, Conductivity, Domain,
    DomainKind, EstimateMethod, RefractiveIndex, Regime,
};

use crate::AppError;

pub const DEFAULT_EIGENVALUE_COUNT: usize = 4;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub domain: DomainSection,
    pub basis: BasisSection,
    pub coefficients: CoefficientsSection,
    #[serde(default)]
    pub task: TaskSection,
    #[serde(default)]
    pub output: OutputSection,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainSection {
    /// "unit_disk" or "unit_square".
    pub kind: String,
    pub volume_order: Option<usize>,
    pub boundary_order: Option<usize>,
    /// Disk: fixed number of radial Gauss panels (default: auto).
    pub radial_panels: Option<usize>,
    /// Disk: split the radial rule at a coefficient jump (default: true).
    pub split_at_radius: Option<bool>,
    /// Disk: fixed angular node count (default: auto).
    pub angular_points: Option<usize>,
    /// Square: fixed Gauss points per dimension (default: auto).
    pub volume_points: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisSection {
    pub p_max: u32,
    pub q_max: u32,
    /// "lexicographic" (default) or "by_lambda".
    pub ordering: Option<String>,
    /// Disk only: append the sine family (default: false).
    pub include_sine: Option<bool>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoefficientsSection {
    pub n: CoefficientSpec,
    pub eta: CoefficientSpec,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoefficientSpec {
    pub family: String,
    pub value: Option<f64>,
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub r0: Option<f64>,
    pub inner: Option<f64>,
    pub outer: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaskSection {
    /// Optional; must match the subcommand when present.
    pub kind: Option<String>,
    pub eigenvalue_count: Option<usize>,
    /// Root-scan window for the reference task.
    pub k_window: Option<[f64; 2]>,
    pub scan_step: Option<f64>,
    pub m_max: Option<u32>,
    /// Reference task: append a column comparing against the solver.
    pub compare_compute: Option<bool>,
    /// Estimate task: "large_eta" or "small_eta".
    pub regime: Option<String>,
    /// Estimate task: "closed_form" (default) or "poly_fit".
    pub method: Option<String>,
    pub poly_degree: Option<usize>,
    pub poly_samples: Option<usize>,
    pub n_range: Option<[f64; 2]>,
    /// Estimate task: direct first eigenvalue; when absent the solver
    /// computes it from the configured coefficients.
    pub k1: Option<f64>,
    /// Convergence task: strictly increasing basis sizes.
    pub basis_sizes: Option<Vec<usize>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    /// Eigenfunction grid resolution (compute task; same as --grid).
    pub grid_resolution: Option<usize>,
}

pub struct LoadedConfig {
    pub config: Config,
    /// First 12 hex digits of the SHA-256 of the raw config file.
    pub hash: String,
}

pub fn load(path: &Path) -> Result<LoadedConfig, AppError> {
    let bytes = std::fs::read(path)
        .map_err(|e| AppError::Config(format!("cannot read {}: {e}", path.display())))?;
    let text = std::str::from_utf8(&bytes)
        .map_err(|_| AppError::Config(format!("{} is not UTF-8", path.display())))?;
    let config: Config =
        toml::from_str(text).map_err(|e| AppError::Config(format!("invalid config: {e}")))?;
    let digest = Sha256::digest(&bytes);
    let hash = digest
        .iter()
        .take(6)
        .map(|b| format!("{b:02x}"))
        .collect::<String>();
    Ok(LoadedConfig { config, hash })
}

fn config_err<T>(msg: impl Into<String>) -> Result<T, AppError> {
    Err(AppError::Config(msg.into()))
}

/// Require that every parameter outside `allowed` is absent.
fn ensure_only(spec: &CoefficientSpec, allowed: &[&str]) -> Result<(), AppError> {
    let fields: [(&str, bool); 6] = [
        ("value", spec.value.is_some()),
        ("a", spec.a.is_some()),
        ("b", spec.b.is_some()),
        ("r0", spec.r0.is_some()),
        ("inner", spec.inner.is_some()),
        ("outer", spec.outer.is_some()),
    ];
    for (name, present) in fields {
        if present && !allowed.contains(&name) {
            return config_err(format!(
                "parameter `{name}` does not apply to family `{}`",
                spec.family
            ));
        }
    }
    Ok(())
}

fn require(value: Option<f64>, name: &str, family: &str) -> Result<f64, AppError> {
    value.ok_or_else(|| AppError::Config(format!("family `{family}` requires parameter `{name}`")))
}

impl Config {
    pub fn domain_kind(&self) -> Result<DomainKind, AppError> {
        match self.domain.kind.as_str() {
            "unit_disk" => Ok(DomainKind::UnitDisk),
            "unit_square" => Ok(DomainKind::UnitSquare),
            other => config_err(format!(
                "unknown domain kind `{other}` (expected unit_disk or unit_square)"
            )),
        }
    }

    pub fn domain(&self) -> Result<Domain, AppError> {
        let kind = self.domain_kind()?;
        Domain::with_orders(
            kind,
            self.domain.volume_order.unwrap_or(12),
            self.domain.boundary_order.unwrap_or(12),
        )
        .map_err(|e| AppError::Config(e.to_string()))
    }

    pub fn assembly_options(&self) -> AssemblyOptions {
        AssemblyOptions {
            radial_panels: self.domain.radial_panels,
            split_at_radius: self.domain.split_at_radius.unwrap_or(true),
            angular_points: self.domain.angular_points,
            volume_points: self.domain.volume_points,
        }
    }

    pub fn basis(&self) -> Result<BasisSet, AppError> {
        let domain = self.domain()?;
        let include_sine = self.basis.include_sine.unwrap_or(false);
        let basis = match domain.kind {
            DomainKind::UnitDisk => {
                build_disk_basis(self.basis.p_max, self.basis.q_max, include_sine)
            }
            DomainKind::UnitSquare => {
                if include_sine {
                    return config_err("include_sine applies only to the unit disk");
                }
                build_square_basis(self.basis.p_max, self.basis.q_max)
            }
        }
        .map_err(|e| AppError::Config(e.to_string()))?;
        let basis = basis
            .with_domain(domain)
            .map_err(|e| AppError::Config(e.to_string()))?;
        match self.basis.ordering.as_deref() {
            None | Some("lexicographic") => Ok(basis),
            Some("by_lambda") => Ok(basis.sorted_by_lambda()),
            Some(other) => config_err(format!(
                "unknown ordering `{other}` (expected lexicographic or by_lambda)"
            )),
        }
    }

    pub fn refractive_index(&self) -> Result<RefractiveIndex, AppError> {
        let spec = &self.coefficients.n;
        let family = spec.family.as_str();
        let n = match family {
            "constant" => {
                ensure_only(spec, &["value"])?;
                RefractiveIndex::constant(require(spec.value, "value", family)?)
            }
            "radial_exp_bump" => {
                ensure_only(spec, &["a", "b"])?;
                RefractiveIndex::radial_exp_bump(
                    require(spec.a, "a", family)?,
                    require(spec.b, "b", family)?,
                )
            }
            "piecewise_radial" => {
                ensure_only(spec, &["r0", "inner", "outer"])?;
                RefractiveIndex::piecewise_radial(
                    require(spec.r0, "r0", family)?,
                    require(spec.inner, "inner", family)?,
                    require(spec.outer, "outer", family)?,
                )
            }
            "separable_poly" => {
                ensure_only(spec, &[])?;
                Ok(RefractiveIndex::SeparablePoly)
            }
            other => return config_err(format!("unknown refractive-index family `{other}`")),
        }
        .map_err(|e| AppError::Config(e.to_string()))?;
        n.validate_for(self.domain_kind()?)
            .map_err(|e| AppError::Config(e.to_string()))?;
        Ok(n)
    }

    pub fn conductivity(&self) -> Result<Conductivity, AppError> {
        let spec = &self.coefficients.eta;
        let family = spec.family.as_str();
        let eta = match family {
            "constant" => {
                ensure_only(spec, &["value"])?;
                Conductivity::constant(require(spec.value, "value", family)?)
            }
            "inverse_angular" => {
                ensure_only(spec, &["a", "b"])?;
                Conductivity::inverse_angular(
                    require(spec.a, "a", family)?,
                    require(spec.b, "b", family)?,
                )
            }
            "scaled_angular" => {
                ensure_only(spec, &["a", "b"])?;
                Conductivity::scaled_angular(
                    require(spec.a, "a", family)?,
                    require(spec.b, "b", family)?,
                )
            }
            other => return config_err(format!("unknown conductivity family `{other}`")),
        }
        .map_err(|e| AppError::Config(e.to_string()))?;
        eta.validate_for(self.domain_kind()?)
            .map_err(|e| AppError::Config(e.to_string()))?;
        Ok(eta)
    }

    pub fn validate_task_kind(&self, expected: &str) -> Result<(), AppError> {
        if let Some(kind) = &self.task.kind {
            if kind != expected {
                return config_err(format!(
                    "config declares task kind `{kind}` but the `{expected}` subcommand was used"
                ));
            }
        }
        Ok(())
    }

    pub fn eigenvalue_count(&self) -> Result<usize, AppError> {
        let count = self
            .task
            .eigenvalue_count
            .unwrap_or(DEFAULT_EIGENVALUE_COUNT);
        if count == 0 || count > 1024 {
            return config_err(format!("eigenvalue_count {count} outside 1..=1024"));
        }
        Ok(count)
    }

    pub fn regime(&self) -> Result<Regime, AppError> {
        match self.task.regime.as_deref() {
            Some("large_eta") => Ok(Regime::LargeEta),
            Some("small_eta") => Ok(Regime::SmallEta),
            Some(other) => config_err(format!(
                "unknown regime `{other}` (expected large_eta or small_eta)"
            )),
            None => config_err("the estimate task requires `regime` under [task]"),
        }
    }

    pub fn estimate_method(&self) -> Result<EstimateMethod, AppError> {
        match self.task.method.as_deref() {
            None | Some("closed_form") => {
                if self.task.poly_degree.is_some()
                    || self.task.poly_samples.is_some()
                    || self.task.n_range.is_some()
                {
                    return config_err(
                        "poly_degree/poly_samples/n_range apply only to method = \"poly_fit\"",
                    );
                }
                Ok(EstimateMethod::ClosedForm)
            }
            Some("poly_fit") => {
                let EstimateMethod::PolyFit {
                    degree: d0,
                    samples: s0,
                    n_range: r0,
                } = EstimateMethod::default_poly_fit()
                else {
                    unreachable!()
                };
                Ok(EstimateMethod::PolyFit {
                    degree: self.task.poly_degree.unwrap_or(d0),
                    samples: self.task.poly_samples.unwrap_or(s0),
                    n_range: self.task.n_range.map(|r| (r[0], r[1])).unwrap_or(r0),
                })
            }
            Some(other) => config_err(format!(
                "unknown method `{other}` (expected closed_form or poly_fit)"
            )),
        }
    }

    pub fn basis_sizes(&self) -> Result<Vec<usize>, AppError> {
        self.task.basis_sizes.clone().ok_or_else(|| {
            AppError::Config("the convergence task requires `basis_sizes` under [task]".into())
        })
    }

    pub fn grid_resolution(&self) -> Result<Option<usize>, AppError> {
        match self.output.grid_resolution {
            None => Ok(None),
            Some(res) if (2..=4096).contains(&res) => Ok(Some(res)),
            Some(res) => config_err(format!("grid_resolution {res} outside 2..=4096")),
        }
    }
}
