//! Exact reference spectra and effective-index estimation.
//!
//! For a constant index n and constant conductivity eta on the unit disk the
//! eigenvalues k are the positive roots of the transcendental dispersion
//! relation, per angular order m,
//!   d_m(k) = k sqrt(n) J'_m(k sqrt(n)) - (eta + m) J_m(k sqrt(n)).
//! The conductivity limits give closed-form spectra: as eta -> infinity the
//! eigenvalues approach a modified Dirichlet spectrum tau = j_{m,q}/sqrt(n),
//! and as eta -> 0 a modified plate-buckling spectrum whose disk form is
//! tau = x_{m,q}/sqrt(n) with x J'_m(x) = m J_m(x). Either limit inverts in
//! closed form to an effective constant index from a first eigenvalue.

use nalgebra::{DMatrix, DVector};

use crate::basis::DomainKind;
use crate::error::{CoreError, CoreResult};
use crate::specfun::{bessel_j, bessel_j_prime, bessel_zero, bessel_zero_table, bisect};

/// Default highest angular order scanned for exact roots.
pub const DEFAULT_M_MAX: u32 = 5;
/// Default scan window for exact roots.
pub const DEFAULT_K_WINDOW: (f64, f64) = (1e-4, 6.0);
/// Default scan step used to bracket sign changes.
pub const DEFAULT_SCAN_STEP: f64 = 1e-3;

/// Parameters of the constant-coefficient dispersion relation on the disk.
#[derive(Debug, Clone, Copy)]
pub struct DispersionQuery {
    pub n: f64,
    pub eta: f64,
    pub m_max: u32,
    pub k_window: (f64, f64),
    pub scan_step: f64,
}

/// One root of the dispersion relation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactRoot {
    pub k: f64,
    pub m: u32,
}

impl DispersionQuery {
    pub fn new(n: f64, eta: f64) -> CoreResult<Self> {
        if !(n.is_finite() && n > 0.0) {
            return Err(CoreError::InvalidArgument(format!(
                "refractive index must be positive and finite, got {n}"
            )));
        }
        if !(eta.is_finite() && eta > 0.0) {
            return Err(CoreError::InvalidArgument(format!(
                "conductivity must be positive and finite, got {eta}"
            )));
        }
        Ok(DispersionQuery {
            n,
            eta,
            m_max: DEFAULT_M_MAX,
            k_window: DEFAULT_K_WINDOW,
            scan_step: DEFAULT_SCAN_STEP,
        })
    }

    fn validate_window(&self) -> CoreResult<()> {
        let (lo, hi) = self.k_window;
        if !(lo.is_finite() && hi.is_finite() && lo > 0.0 && hi > lo) {
            return Err(CoreError::InvalidArgument(format!(
                "k window ({lo}, {hi}) must satisfy 0 < lo < hi"
            )));
        }
        if !(self.scan_step.is_finite() && self.scan_step > 0.0) {
            return Err(CoreError::InvalidArgument(format!(
                "scan step must be positive, got {}",
                self.scan_step
            )));
        }
        Ok(())
    }

    /// d_m(k) = k sqrt(n) J'_m(k sqrt(n)) - (eta + m) J_m(k sqrt(n)).
    pub fn dispersion_value(&self, m: u32, k: f64) -> CoreResult<f64> {
        if !(k.is_finite() && k > 0.0) {
            return Err(CoreError::InvalidArgument(format!(
                "dispersion argument k must be positive, got {k}"
            )));
        }
        let z = k * self.n.sqrt();
        Ok(z * bessel_j_prime(m, z)? - (self.eta + m as f64) * bessel_j(m, z)?)
    }

    /// The `count` smallest roots over angular orders 0..=m_max within the
    /// window, merged and sorted ascending in k.
    pub fn exact_eigenvalues(&self, count: usize) -> CoreResult<Vec<ExactRoot>> {
        if count == 0 {
            return Err(CoreError::InvalidArgument(
                "root count must be positive".into(),
            ));
        }
        self.validate_window()?;
        let (lo, hi) = self.k_window;
        let mut roots = Vec::new();
        for m in 0..=self.m_max {
            let f = |k: f64| self.dispersion_value(m, k).unwrap_or(f64::NAN);
            let steps = ((hi - lo) / self.scan_step).ceil() as usize;
            let mut ka = lo;
            let mut fa = f(ka);
            for s in 1..=steps {
                let kb = (lo + s as f64 * self.scan_step).min(hi);
                let fb = f(kb);
                if fa == 0.0 {
                    roots.push(ExactRoot { k: ka, m });
                } else if fa.is_finite() && fb.is_finite() && fa * fb < 0.0 {
                    roots.push(ExactRoot {
                        k: bisect(&f, ka, kb),
                        m,
                    });
                }
                ka = kb;
                fa = fb;
                if ka >= hi {
                    break;
                }
            }
        }
        roots.sort_by(|a, b| a.k.partial_cmp(&b.k).unwrap());
        roots.dedup_by(|a, b| (a.k - b.k).abs() < 1e-9 && a.m == b.m);
        if roots.len() < count {
            return Err(CoreError::InsufficientRoots {
                requested: count,
                found: roots.len(),
            });
        }
        roots.truncate(count);
        Ok(roots)
    }
}

/// Which conductivity limit a closed-form spectrum belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LimitKind {
    /// eta -> infinity: Dirichlet spectrum scaled by 1/sqrt(n).
    ModifiedDirichlet,
    /// eta -> 0: plate-buckling spectrum scaled by 1/sqrt(n).
    ModifiedPlateBuckling,
}

impl LimitKind {
    pub fn label(&self) -> &'static str {
        match self {
            LimitKind::ModifiedDirichlet => "modified-dirichlet",
            LimitKind::ModifiedPlateBuckling => "modified-plate-buckling",
        }
    }
}

/// One limit-spectrum value tau with its (m, q) or (p, q) mode indices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitEigenvalue {
    pub tau: f64,
    pub kind: LimitKind,
    pub mode: (u32, u32),
}

fn check_limit_args(n: f64, count: usize) -> CoreResult<()> {
    if !(n.is_finite() && n > 0.0) {
        return Err(CoreError::InvalidArgument(format!(
            "refractive index must be positive and finite, got {n}"
        )));
    }
    if count == 0 || count > 64 {
        return Err(CoreError::InvalidArgument(format!(
            "limit spectrum count {count} outside 1..=64"
        )));
    }
    Ok(())
}

/// The `count` smallest modified Dirichlet values tau_{m,q} = j_{m,q}/sqrt(n)
/// (disk) or tau_{p,q} = pi sqrt(p^2+q^2)/sqrt(n) (square), sorted ascending.
pub fn modified_dirichlet(
    kind: DomainKind,
    n: f64,
    count: usize,
) -> CoreResult<Vec<LimitEigenvalue>> {
    check_limit_args(n, count)?;
    let scale = 1.0 / n.sqrt();
    let mut out = Vec::new();
    match kind {
        DomainKind::UnitDisk => {
            // j_{m,q} grows with both indices, so a (count+2)^2 table covers
            // the count smallest.
            let extent = count as u32 + 2;
            let table = bessel_zero_table(extent, extent)?;
            for (m, zeros) in table.iter().enumerate() {
                for (qi, &j) in zeros.iter().enumerate() {
                    out.push(LimitEigenvalue {
                        tau: j * scale,
                        kind: LimitKind::ModifiedDirichlet,
                        mode: (m as u32, qi as u32 + 1),
                    });
                }
            }
        }
        DomainKind::UnitSquare => {
            let extent = count as u32 + 2;
            for p in 1..=extent {
                for q in 1..=extent {
                    let tau = std::f64::consts::PI * ((p * p + q * q) as f64).sqrt();
                    out.push(LimitEigenvalue {
                        tau: tau * scale,
                        kind: LimitKind::ModifiedDirichlet,
                        mode: (p, q),
                    });
                }
            }
        }
    }
    out.sort_by(|a, b| a.tau.partial_cmp(&b.tau).unwrap());
    out.truncate(count);
    Ok(out)
}

/// The `count` smallest modified plate-buckling values on the disk:
/// tau = x_{m,q}/sqrt(n) with x_{m,q} the q-th positive root of
/// x J'_m(x) - m J_m(x). Found by scan-and-bisect, independent of the
/// identity x_{m,q} = j_{m+1,q}.
pub fn modified_plate_buckling(n: f64, count: usize) -> CoreResult<Vec<LimitEigenvalue>> {
    check_limit_args(n, count)?;
    let scale = 1.0 / n.sqrt();
    let x_hi = 6.0 + 3.5 * count as f64;
    let m_hi = count as u32 + 2;
    let step = 1e-2;
    let mut out = Vec::new();
    for m in 0..=m_hi {
        let g = |x: f64| {
            let jp = bessel_j_prime(m, x).unwrap_or(f64::NAN);
            let j = bessel_j(m, x).unwrap_or(f64::NAN);
            x * jp - m as f64 * j
        };
        let mut q = 0u32;
        let steps = (x_hi / step).ceil() as usize;
        let mut xa = 1e-3;
        let mut ga = g(xa);
        for s in 1..=steps {
            let xb = (1e-3 + s as f64 * step).min(x_hi);
            let gb = g(xb);
            if ga * gb < 0.0 {
                q += 1;
                out.push(LimitEigenvalue {
                    tau: bisect(&g, xa, xb) * scale,
                    kind: LimitKind::ModifiedPlateBuckling,
                    mode: (m, q),
                });
            }
            xa = xb;
            ga = gb;
            if xa >= x_hi {
                break;
            }
        }
    }
    out.sort_by(|a, b| a.tau.partial_cmp(&b.tau).unwrap());
    if out.len() < count {
        return Err(CoreError::InsufficientRoots {
            requested: count,
            found: out.len(),
        });
    }
    out.truncate(count);
    Ok(out)
}

/// Which conductivity limit the estimate assumes the data came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    LargeEta,
    SmallEta,
}

impl Regime {
    pub fn label(&self) -> &'static str {
        match self {
            Regime::LargeEta => "large-eta",
            Regime::SmallEta => "small-eta",
        }
    }
}

/// How tau_1(n) = tau_1(1)/sqrt(n) is inverted.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EstimateMethod {
    /// n = (tau_1(1)/k_1)^2 exactly.
    ClosedForm,
    /// Global least-squares polynomial fit of tau_1(n) over n_range in a
    /// normalized variable, then a bisection solve of fit(n) = k_1.
    PolyFit {
        degree: usize,
        samples: usize,
        n_range: (f64, f64),
    },
}

impl EstimateMethod {
    pub fn default_poly_fit() -> Self {
        EstimateMethod::PolyFit {
            degree: 4,
            samples: 51,
            n_range: (2.0, 7.0),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            EstimateMethod::ClosedForm => "closed-form",
            EstimateMethod::PolyFit { .. } => "poly-fit",
        }
    }
}

/// First limit eigenvalue tau_1(1) at unit index for the given regime/domain.
pub fn limit_tau1(kind: DomainKind, regime: Regime) -> CoreResult<f64> {
    match (kind, regime) {
        (DomainKind::UnitDisk, Regime::LargeEta) => bessel_zero(0, 1),
        (DomainKind::UnitDisk, Regime::SmallEta) => bessel_zero(1, 1),
        (DomainKind::UnitSquare, Regime::LargeEta) => Ok(std::f64::consts::PI * 2.0f64.sqrt()),
        (DomainKind::UnitSquare, Regime::SmallEta) => Err(CoreError::Unsupported(
            "small-conductivity limit spectrum on the square has no closed form".into(),
        )),
    }
}

/// Estimate a constant effective index from a first eigenvalue via the
/// limit relation tau_1(n) = tau_1(1)/sqrt(n).
pub fn estimate_n(
    k1: f64,
    regime: Regime,
    kind: DomainKind,
    method: &EstimateMethod,
) -> CoreResult<f64> {
    if !(k1.is_finite() && k1 > 0.0) {
        return Err(CoreError::InvalidArgument(format!(
            "first eigenvalue must be positive and finite, got {k1}"
        )));
    }
    let tau1 = limit_tau1(kind, regime)?;
    match *method {
        EstimateMethod::ClosedForm => {
            let r = tau1 / k1;
            Ok(r * r)
        }
        EstimateMethod::PolyFit {
            degree,
            samples,
            n_range,
        } => {
            if degree == 0 || degree > 16 {
                return Err(CoreError::InvalidArgument(format!(
                    "fit degree {degree} outside 1..=16"
                )));
            }
            if samples <= degree {
                return Err(CoreError::InvalidArgument(format!(
                    "fit needs more than degree + 1 = {} samples, got {samples}",
                    degree + 1
                )));
            }
            let (n_lo, n_hi) = n_range;
            if !(n_lo.is_finite() && n_hi.is_finite() && n_lo > 0.0 && n_hi > n_lo) {
                return Err(CoreError::InvalidArgument(format!(
                    "fit range ({n_lo}, {n_hi}) must satisfy 0 < lo < hi"
                )));
            }
            let mid = 0.5 * (n_lo + n_hi);
            let half = 0.5 * (n_hi - n_lo);
            // Least-squares fit of tau_1(n) in t = (n - mid)/half.
            let mut vand = DMatrix::<f64>::zeros(samples, degree + 1);
            let mut rhs = DVector::<f64>::zeros(samples);
            for s in 0..samples {
                let t = if samples == 1 {
                    0.0
                } else {
                    -1.0 + 2.0 * s as f64 / (samples - 1) as f64
                };
                let n_s = mid + half * t;
                let mut pw = 1.0;
                for d in 0..=degree {
                    vand[(s, d)] = pw;
                    pw *= t;
                }
                rhs[s] = tau1 / n_s.sqrt();
            }
            let coeffs = vand
                .svd(true, true)
                .solve(&rhs, 1e-14)
                .map_err(|e| CoreError::InvalidArgument(e.to_string()))?;
            let fit = |t: f64| {
                let mut acc = 0.0;
                for d in (0..=degree).rev() {
                    acc = acc * t + coeffs[d];
                }
                acc
            };
            let f = |t: f64| fit(t) - k1;
            let (fa, fb) = (f(-1.0), f(1.0));
            if fa == 0.0 {
                return Ok(n_lo);
            }
            if fb == 0.0 {
                return Ok(n_hi);
            }
            if fa * fb > 0.0 {
                return Err(CoreError::OutOfRange(format!(
                    "first eigenvalue {k1} lies outside the fitted window \
                     [{:.6}, {:.6}]",
                    fit(1.0),
                    fit(-1.0)
                )));
            }
            let t_root = bisect(&f, -1.0, 1.0);
            Ok(mid + half * t_root)
        }
    }
}
