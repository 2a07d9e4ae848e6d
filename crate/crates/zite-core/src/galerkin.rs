//! Spectral-Galerkin discretization of the fourth-order eigenproblem.
//!
//! In the Dirichlet eigenbasis {phi_i} the problem a(w, phi) = k^2 b(w, phi)
//! becomes the generalized matrix eigenproblem (A - k^2 B) omega = 0 with
//!   A_ij = lambda_i lambda_j int_D (1/n) phi_i phi_j dx            (SPD)
//!   B_ij = lambda_i delta_ij - oint_dD (1/eta) dnu(phi_i) dnu(phi_j) ds.
//! A is reduced by Cholesky A = L L^T to the single symmetric problem
//! S y = mu y with S = L^-1 B L^-T, and k = 1/sqrt(mu): real for mu > 0,
//! purely imaginary (reported as a positive magnitude) for mu < 0.

use nalgebra::{DMatrix, DVector};

use crate::basis::{BasisOrdering, BasisSet, DomainKind};
use crate::coefficients::{Conductivity, RefractiveIndex};
use crate::error::{CoreError, CoreResult};
use crate::specfun::{bessel_j_prime, bessel_j_raw, bessel_zero, composite_rule, gauss_legendre};

/// Relative rank cutoff for reduced eigenvalues: |mu| > MU_TOL_REL * max|mu|.
pub const MU_TOL_REL: f64 = 1e-10;

/// Overrides for the quadrature used during assembly. `None`/defaults let the
/// assembler pick node counts that integrate every basis/coefficient product
/// in scope to near machine precision.
#[derive(Debug, Clone)]
pub struct AssemblyOptions {
    /// Disk: number of radial Gauss panels (None = scaled with max frequency).
    pub radial_panels: Option<usize>,
    /// Disk: split the radial rule at a coefficient jump radius (default true).
    pub split_at_radius: bool,
    /// Disk: angular trapezoid points (None = exact for all products in scope).
    pub angular_points: Option<usize>,
    /// Square: Gauss points per dimension (None = auto).
    pub volume_points: Option<usize>,
}

impl Default for AssemblyOptions {
    fn default() -> Self {
        AssemblyOptions {
            radial_panels: None,
            split_at_radius: true,
            angular_points: None,
            volume_points: None,
        }
    }
}

/// Effective quadrature resolution used by an assembly.
/// A count of 0 means the corresponding block was assembled in closed form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadratureInfo {
    /// Configured Gauss order (per radial panel / per dimension).
    pub volume_order: usize,
    /// Configured boundary order (minimum node count).
    pub boundary_order: usize,
    /// Total volume nodes actually used.
    pub volume_points: usize,
    /// Total boundary nodes actually used.
    pub boundary_points: usize,
}

/// Assembled generalized eigensystem (A - k^2 B) omega = 0.
#[derive(Debug, Clone)]
pub struct GalerkinSystem {
    pub a: DMatrix<f64>,
    pub b: DMatrix<f64>,
    pub basis: BasisSet,
    pub n: RefractiveIndex,
    pub eta: Conductivity,
    pub quadrature: QuadratureInfo,
}

/// Whether an eigenvalue k is real or purely imaginary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KType {
    Real,
    Imaginary,
}

impl KType {
    pub fn label(&self) -> &'static str {
        match self {
            KType::Real => "real",
            KType::Imaginary => "imaginary",
        }
    }
}

/// One eigenvalue with its coefficient vector (unit Euclidean norm).
#[derive(Debug, Clone)]
pub struct Eigenpair {
    /// k for real eigenvalues; |k| for purely imaginary ones.
    pub k: f64,
    pub omega: DVector<f64>,
}

/// Solved spectrum; `real` and `imaginary` are each sorted ascending in k.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub basis: BasisSet,
    pub real: Vec<Eigenpair>,
    pub imaginary: Vec<Eigenpair>,
}

/// One row of a basis-refinement study.
#[derive(Debug, Clone, Copy)]
pub struct ConvergenceRow {
    pub n_basis: usize,
    pub k1: f64,
    /// |k1(N) - k1(N_finest)|; 0 for the finest level itself.
    pub error: f64,
}

/// Basis-refinement table with the fitted slope of log(error) vs log(N).
#[derive(Debug, Clone)]
pub struct ConvergenceTable {
    pub rows: Vec<ConvergenceRow>,
    pub slope: f64,
}

fn round_up_multiple(x: usize, m: usize) -> usize {
    x.div_ceil(m) * m
}

/// Assemble with default (auto-converged) quadrature.
pub fn assemble(
    basis: &BasisSet,
    n: &RefractiveIndex,
    eta: &Conductivity,
) -> CoreResult<GalerkinSystem> {
    assemble_with(basis, n, eta, &AssemblyOptions::default())
}

/// Assemble with explicit quadrature overrides.
pub fn assemble_with(
    basis: &BasisSet,
    n: &RefractiveIndex,
    eta: &Conductivity,
    options: &AssemblyOptions,
) -> CoreResult<GalerkinSystem> {
    if basis.is_empty() {
        return Err(CoreError::InvalidArgument("basis set is empty".into()));
    }
    n.validate_for(basis.domain.kind)?;
    eta.validate_for(basis.domain.kind)?;
    let (a, b, quadrature) = match basis.domain.kind {
        DomainKind::UnitDisk => assemble_disk(basis, n, eta, options)?,
        DomainKind::UnitSquare => assemble_square(basis, n, eta, options)?,
    };
    let a = symmetrized(a);
    let b = symmetrized(b);
    Ok(GalerkinSystem {
        a,
        b,
        basis: basis.clone(),
        n: n.clone(),
        eta: eta.clone(),
        quadrature,
    })
}

fn symmetrized(m: DMatrix<f64>) -> DMatrix<f64> {
    let mt = m.transpose();
    0.5 * (m + mt)
}

/// Angular trapezoid node count. Basis products are trig polynomials of
/// frequency at most 2 p_max, integrated exactly; a non-constant conductivity
/// is analytic but not polynomial, so its aliasing error is pushed below
/// roundoff by a 96-point floor (geometric decay of Fourier coefficients).
fn angular_count(basis: &BasisSet, options: &AssemblyOptions, resolve_coefficient: bool) -> usize {
    options.angular_points.unwrap_or_else(|| {
        let mut need = 2 * basis.max_mode_p() as usize + 6;
        if resolve_coefficient {
            need = need.max(96);
        }
        round_up_multiple(need.max(basis.domain.boundary_quadrature_order), 4)
    })
}

fn assemble_disk(
    basis: &BasisSet,
    n: &RefractiveIndex,
    eta: &Conductivity,
    options: &AssemblyOptions,
) -> CoreResult<(DMatrix<f64>, DMatrix<f64>, QuadratureInfo)> {
    let nf = basis.len();
    let funcs = &basis.functions;
    let lambda: Vec<f64> = funcs.iter().map(|f| f.lambda).collect();
    let freq: Vec<f64> = funcs.iter().map(|f| f.frequency()).collect();

    let order = basis.domain.volume_quadrature_order;
    let m_ang = angular_count(basis, options, !matches!(eta, Conductivity::Constant(_)));
    let theta: Vec<f64> = (0..m_ang)
        .map(|l| 2.0 * std::f64::consts::PI * l as f64 / m_ang as f64)
        .collect();
    let w_ang = 2.0 * std::f64::consts::PI / m_ang as f64;
    // Angular factor tables T[i][l].
    let t_tab: Vec<Vec<f64>> = funcs
        .iter()
        .map(|f| {
            theta
                .iter()
                .map(|&th| match f.parity {
                    crate::basis::Parity::Cosine => (f.mode_p as f64 * th).cos(),
                    crate::basis::Parity::Sine => (f.mode_p as f64 * th).sin(),
                })
                .collect()
        })
        .collect();

    // Stiffness matrix A.
    let mut a = DMatrix::<f64>::zeros(nf, nf);
    let mut volume_points = 0usize;
    if let RefractiveIndex::Constant(c) = n {
        for i in 0..nf {
            a[(i, i)] = lambda[i] * lambda[i] / c;
        }
    } else {
        // Composite radial Gauss rule; panel count scales with the largest
        // radial frequency so products J_p(j_i r) J_p(j_j r) converge to
        // machine precision. A coefficient jump radius becomes a panel break.
        let j_max = basis.max_frequency();
        let auto_panels = ((j_max / (0.25 * order as f64)).ceil() as usize).max(2);
        let panels = options.radial_panels.unwrap_or(auto_panels).max(1);
        let mut breaks: Vec<f64> = (0..=panels).map(|i| i as f64 / panels as f64).collect();
        if options.split_at_radius {
            if let Some(r0) = n.discontinuity_radius() {
                if breaks.iter().all(|b| (b - r0).abs() > 1e-12) {
                    breaks.push(r0);
                    breaks.sort_by(|x, y| x.partial_cmp(y).unwrap());
                }
            }
        }
        let gl = gauss_legendre(order)?;
        let (r_nodes, r_weights) = composite_rule(&gl, &breaks);
        let nr = r_nodes.len();
        volume_points = nr * m_ang;
        // Radial factor tables R[i][kk] (normalization folded in).
        let r_tab: Vec<Vec<f64>> = funcs
            .iter()
            .enumerate()
            .map(|(i, f)| {
                r_nodes
                    .iter()
                    .map(|&r| f.norm_const * bessel_j_raw(f.mode_p, freq[i] * r))
                    .collect()
            })
            .collect();
        // 1/n on the tensor grid.
        let ninv: Vec<Vec<f64>> = r_nodes
            .iter()
            .map(|&r| {
                theta
                    .iter()
                    .map(|&th| 1.0 / n.n_at(r * th.cos(), r * th.sin()))
                    .collect()
            })
            .collect();
        for i in 0..nf {
            for j in i..nf {
                let mut sum = 0.0;
                for kk in 0..nr {
                    let mut ang = 0.0;
                    for l in 0..m_ang {
                        ang += ninv[kk][l] * t_tab[i][l] * t_tab[j][l];
                    }
                    sum += r_weights[kk] * r_nodes[kk] * r_tab[i][kk] * r_tab[j][kk] * ang;
                }
                let v = lambda[i] * lambda[j] * w_ang * sum;
                a[(i, j)] = v;
                a[(j, i)] = v;
            }
        }
    }

    // B: exact diagonal volume part minus the boundary coupling.
    let mut b = DMatrix::<f64>::zeros(nf, nf);
    for i in 0..nf {
        b[(i, i)] = lambda[i];
    }
    let dnu: Vec<f64> = funcs
        .iter()
        .enumerate()
        .map(|(i, f)| {
            f.norm_const * freq[i] * bessel_j_prime(f.mode_p, freq[i]).unwrap_or(f64::NAN)
        })
        .collect();
    let mut boundary_points = 0usize;
    if let Conductivity::Constant(c) = eta {
        // Closed form: angular factors are orthogonal on the circle.
        for i in 0..nf {
            for j in i..nf {
                let (fi, fj) = (&funcs[i], &funcs[j]);
                if fi.mode_p != fj.mode_p || fi.parity != fj.parity {
                    continue;
                }
                let ang = if fi.mode_p == 0 {
                    2.0 * std::f64::consts::PI
                } else {
                    std::f64::consts::PI
                };
                let v = dnu[i] * dnu[j] * ang / c;
                b[(i, j)] -= v;
                if i != j {
                    b[(j, i)] -= v;
                }
            }
        }
    } else {
        boundary_points = m_ang;
        let etainv: Vec<f64> = theta.iter().map(|&th| 1.0 / eta.eta_at_angle(th)).collect();
        for i in 0..nf {
            for j in i..nf {
                let mut sum = 0.0;
                for l in 0..m_ang {
                    sum += etainv[l] * t_tab[i][l] * t_tab[j][l];
                }
                let v = dnu[i] * dnu[j] * w_ang * sum;
                b[(i, j)] -= v;
                if i != j {
                    b[(j, i)] -= v;
                }
            }
        }
    }

    let info = QuadratureInfo {
        volume_order: order,
        boundary_order: basis.domain.boundary_quadrature_order,
        volume_points,
        boundary_points,
    };
    Ok((a, b, info))
}

fn assemble_square(
    basis: &BasisSet,
    n: &RefractiveIndex,
    eta: &Conductivity,
    options: &AssemblyOptions,
) -> CoreResult<(DMatrix<f64>, DMatrix<f64>, QuadratureInfo)> {
    let nf = basis.len();
    let funcs = &basis.functions;
    let lambda: Vec<f64> = funcs.iter().map(|f| f.lambda).collect();
    let max_mode = basis.max_mode() as usize;

    let order = basis.domain.volume_quadrature_order;
    let mut a = DMatrix::<f64>::zeros(nf, nf);
    let mut volume_points = 0usize;
    if let RefractiveIndex::Constant(c) = n {
        for i in 0..nf {
            a[(i, i)] = lambda[i] * lambda[i] / c;
        }
    } else {
        let ng = options
            .volume_points
            .unwrap_or((4 * max_mode + 4).max(order));
        let gl = gauss_legendre(ng.min(crate::specfun::MAX_QUADRATURE_ORDER))?;
        let (x, w) = gl.mapped_to(0.0, 1.0);
        let npts = x.len();
        volume_points = npts * npts;
        // 1D sine tables S[p][node] for p = 1..=max_mode.
        let sine: Vec<Vec<f64>> = (0..=max_mode)
            .map(|p| {
                x.iter()
                    .map(|&xi| (p as f64 * std::f64::consts::PI * xi).sin())
                    .collect()
            })
            .collect();
        let ninv: Vec<Vec<f64>> = x
            .iter()
            .map(|&xa| x.iter().map(|&xb| 1.0 / n.n_at(xa, xb)).collect())
            .collect();
        for i in 0..nf {
            let (pi_, qi) = (funcs[i].mode_p as usize, funcs[i].mode_q as usize);
            for j in i..nf {
                let (pj, qj) = (funcs[j].mode_p as usize, funcs[j].mode_q as usize);
                let mut sum = 0.0;
                for aidx in 0..npts {
                    let sx = sine[pi_][aidx] * sine[pj][aidx] * w[aidx];
                    if sx == 0.0 {
                        continue;
                    }
                    let mut inner = 0.0;
                    for bidx in 0..npts {
                        inner += w[bidx] * ninv[aidx][bidx] * sine[qi][bidx] * sine[qj][bidx];
                    }
                    sum += sx * inner;
                }
                // Basis functions carry the factor 2 each: 2*2 = 4.
                let v = lambda[i] * lambda[j] * 4.0 * sum;
                a[(i, j)] = v;
                a[(j, i)] = v;
            }
        }
    }

    // B: diagonal volume part minus the closed-form boundary coupling.
    // For phi = 2 sin(p pi x1) sin(q pi x2) the four-edge integral of
    // dnu(phi_i) dnu(phi_j) is
    //   4 p p' pi^2 [q = q', p + p' even] + 4 q q' pi^2 [p = p', q + q' even].
    let mut b = DMatrix::<f64>::zeros(nf, nf);
    for i in 0..nf {
        b[(i, i)] = lambda[i];
    }
    let Conductivity::Constant(eta_c) = eta else {
        unreachable!("validated: only constant conductivity on the square");
    };
    let pi2 = std::f64::consts::PI * std::f64::consts::PI;
    for i in 0..nf {
        let (p, q) = (funcs[i].mode_p as usize, funcs[i].mode_q as usize);
        for j in i..nf {
            let (pp, qq) = (funcs[j].mode_p as usize, funcs[j].mode_q as usize);
            let mut g = 0.0;
            if q == qq && (p + pp) % 2 == 0 {
                g += 4.0 * (p * pp) as f64 * pi2;
            }
            if p == pp && (q + qq) % 2 == 0 {
                g += 4.0 * (q * qq) as f64 * pi2;
            }
            if g != 0.0 {
                let v = g / eta_c;
                b[(i, j)] -= v;
                if i != j {
                    b[(j, i)] -= v;
                }
            }
        }
    }

    let info = QuadratureInfo {
        volume_order: order,
        boundary_order: basis.domain.boundary_quadrature_order,
        volume_points,
        boundary_points: 0,
    };
    Ok((a, b, info))
}

impl GalerkinSystem {
    /// Relative residual |A w - sigma B w| / (|A w| + |sigma| |B w|) of an
    /// eigenpair, with sigma = k^2 (real) or -k^2 (imaginary).
    pub fn residual(&self, k: f64, k_type: KType, omega: &DVector<f64>) -> f64 {
        let sigma = match k_type {
            KType::Real => k * k,
            KType::Imaginary => -(k * k),
        };
        let aw = &self.a * omega;
        let bw = &self.b * omega;
        let num = (&aw - sigma * &bw).norm();
        let den = aw.norm() + sigma.abs() * bw.norm();
        if den == 0.0 {
            num
        } else {
            num / den
        }
    }
}

/// Solve the assembled system by Cholesky reduction.
pub fn solve(system: &GalerkinSystem) -> CoreResult<Spectrum> {
    let chol = nalgebra::Cholesky::new(system.a.clone()).ok_or(CoreError::IndefiniteStiffness)?;
    let l = chol.l();
    // S = L^-1 B L^-T, assembled via two triangular solves.
    let x = l
        .solve_lower_triangular(&system.b)
        .ok_or(CoreError::IndefiniteStiffness)?;
    let s = l
        .solve_lower_triangular(&x.transpose())
        .ok_or(CoreError::IndefiniteStiffness)?;
    let s = symmetrized(s);
    let eig = nalgebra::SymmetricEigen::new(s);

    let mu_max = eig
        .eigenvalues
        .iter()
        .fold(0.0f64, |acc, &m| acc.max(m.abs()));
    let tol = MU_TOL_REL * mu_max;
    let lt = l.transpose();
    let mut real = Vec::new();
    let mut imaginary = Vec::new();
    for (idx, &mu) in eig.eigenvalues.iter().enumerate() {
        if mu.abs() <= tol {
            continue;
        }
        let k = (1.0 / mu.abs()).sqrt();
        let y = eig.eigenvectors.column(idx).into_owned();
        let mut omega = lt
            .solve_upper_triangular(&y)
            .ok_or(CoreError::IndefiniteStiffness)?;
        let norm = omega.norm();
        if norm > 0.0 {
            omega /= norm;
        }
        // Deterministic sign: largest-magnitude coefficient positive.
        let mut lead = 0usize;
        for i in 0..omega.len() {
            if omega[i].abs() > omega[lead].abs() {
                lead = i;
            }
        }
        if omega[lead] < 0.0 {
            omega = -omega;
        }
        let pair = Eigenpair { k, omega };
        if mu > 0.0 {
            real.push(pair);
        } else {
            imaginary.push(pair);
        }
    }
    if real.is_empty() && imaginary.is_empty() {
        return Err(CoreError::EmptySpectrum);
    }
    real.sort_by(|a, b| a.k.partial_cmp(&b.k).unwrap());
    imaginary.sort_by(|a, b| a.k.partial_cmp(&b.k).unwrap());
    Ok(Spectrum {
        basis: system.basis.clone(),
        real,
        imaginary,
    })
}

/// Evaluate the `index`-th real eigenfunction sum_i omega_i phi_i at points.
pub fn eval_eigenfunction(
    spectrum: &Spectrum,
    index: usize,
    points: &[(f64, f64)],
) -> CoreResult<Vec<f64>> {
    let pair = spectrum.real.get(index).ok_or_else(|| {
        CoreError::InvalidArgument(format!(
            "eigenfunction index {index} out of range (have {} real eigenvalues)",
            spectrum.real.len()
        ))
    })?;
    let mut values = Vec::with_capacity(points.len());
    for &(x1, x2) in points {
        let mut v = 0.0;
        for (i, f) in spectrum.basis.functions.iter().enumerate() {
            v += pair.omega[i] * f.eval(x1, x2)?;
        }
        values.push(v);
    }
    Ok(values)
}

/// ByLambda pool that provably contains the `n_max` globally smallest
/// Dirichlet eigenvalues of the domain.
fn truncation_pool(kind: DomainKind, n_max: usize) -> CoreResult<BasisSet> {
    match kind {
        DomainKind::UnitDisk => {
            let (mut p_pool, mut q_pool) = (8u32, 6u32);
            for _ in 0..40 {
                let basis =
                    crate::basis::build_disk_basis(p_pool, q_pool, false)?.sorted_by_lambda();
                if basis.len() >= n_max {
                    let lam_max = basis.functions[n_max - 1].lambda;
                    let jp = bessel_zero(p_pool + 1, 1)?;
                    let jq = bessel_zero(0, q_pool + 1)?;
                    let excluded_min = (jp * jp).min(jq * jq);
                    if lam_max < excluded_min {
                        return Ok(basis);
                    }
                }
                p_pool += 3;
                q_pool += 2;
            }
            Err(CoreError::InvalidArgument(
                "could not certify a ByLambda pool for the disk".into(),
            ))
        }
        DomainKind::UnitSquare => {
            let mut m = 6u32;
            let pi2 = std::f64::consts::PI * std::f64::consts::PI;
            for _ in 0..40 {
                let basis = crate::basis::build_square_basis(m, m)?.sorted_by_lambda();
                if basis.len() >= n_max {
                    let lam_max = basis.functions[n_max - 1].lambda;
                    let excluded_min = pi2 * ((m + 1) * (m + 1) + 1) as f64;
                    if lam_max < excluded_min {
                        return Ok(basis);
                    }
                }
                m += 2;
            }
            Err(CoreError::InvalidArgument(
                "could not certify a ByLambda pool for the square".into(),
            ))
        }
    }
}

/// First-eigenvalue convergence under ByLambda basis refinement.
///
/// Sizes must be at least 3, strictly increasing. Errors are measured against
/// the finest level; the slope is the least-squares fit of log(error) against
/// log(N) over the coarser levels.
pub fn convergence_study(
    kind: DomainKind,
    n: &RefractiveIndex,
    eta: &Conductivity,
    sizes: &[usize],
) -> CoreResult<ConvergenceTable> {
    if sizes.len() < 3 {
        return Err(CoreError::InvalidArgument(
            "convergence study needs at least 3 basis sizes".into(),
        ));
    }
    for w in sizes.windows(2) {
        if w[1] <= w[0] {
            return Err(CoreError::InvalidArgument(
                "basis sizes must be strictly increasing".into(),
            ));
        }
    }
    if sizes[0] < 4 {
        return Err(CoreError::InvalidArgument(
            "smallest basis size must be at least 4".into(),
        ));
    }
    let n_max = *sizes.last().unwrap();
    let pool = truncation_pool(kind, n_max)?;
    let mut k1s = Vec::with_capacity(sizes.len());
    for &size in sizes {
        let basis = pool.clone().truncated(size)?;
        debug_assert_eq!(basis.ordering, BasisOrdering::ByLambda);
        let system = assemble(&basis, n, eta)?;
        let spectrum = solve(&system)?;
        let k1 = spectrum.real.first().ok_or(CoreError::EmptySpectrum)?.k;
        k1s.push(k1);
    }
    let k_ref = *k1s.last().unwrap();
    let rows: Vec<ConvergenceRow> = sizes
        .iter()
        .zip(&k1s)
        .map(|(&n_basis, &k1)| ConvergenceRow {
            n_basis,
            k1,
            error: (k1 - k_ref).abs(),
        })
        .collect();
    // Fit over the coarser levels with nonzero error.
    let pts: Vec<(f64, f64)> = rows[..rows.len() - 1]
        .iter()
        .filter(|r| r.error > 0.0)
        .map(|r| ((r.n_basis as f64).ln(), r.error.ln()))
        .collect();
    if pts.len() < 2 {
        return Err(CoreError::OutOfRange(
            "convergence errors vanished; slope is undefined".into(),
        ));
    }
    let m = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    let slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    Ok(ConvergenceTable { rows, slope })
}

#[cfg(test)]
#[allow(clippy::needless_range_loop)] // (i, j) Gram-matrix loops read naturally indexed
mod tests {
    use super::*;
    use crate::basis::{build_disk_basis, build_square_basis, Domain};
    use approx::assert_relative_eq;

    fn disk_const_system() -> GalerkinSystem {
        let basis = build_disk_basis(5, 4, false).unwrap();
        let n = RefractiveIndex::constant(4.0).unwrap();
        let eta = Conductivity::constant(25.0).unwrap();
        assemble(&basis, &n, &eta).unwrap()
    }

    #[test]
    fn constant_n_gives_diagonal_stiffness() {
        let sys = disk_const_system();
        for i in 0..sys.basis.len() {
            let lam = sys.basis.functions[i].lambda;
            assert_relative_eq!(sys.a[(i, i)], lam * lam / 4.0, max_relative = 1e-14);
            for j in 0..sys.basis.len() {
                if i != j {
                    assert!(sys.a[(i, j)].abs() <= 1e-10 * sys.a[(i, i)]);
                }
            }
        }
    }

    #[test]
    fn quadrature_path_matches_analytic_for_constant_coefficients() {
        // radial_exp_bump(4, 0) is the constant 4 evaluated through quadrature.
        let basis = build_disk_basis(4, 3, true).unwrap();
        let eta = Conductivity::constant(25.0).unwrap();
        let exact = assemble(&basis, &RefractiveIndex::constant(4.0).unwrap(), &eta).unwrap();
        let quad = assemble(
            &basis,
            &RefractiveIndex::radial_exp_bump(4.0, 0.0).unwrap(),
            &eta,
        )
        .unwrap();
        let scale = exact.a.norm();
        assert!((exact.a.clone() - quad.a.clone()).norm() <= 1e-10 * scale);
    }

    #[test]
    fn square_boundary_matrix_matches_edge_quadrature() {
        // Verify the closed-form boundary coupling against direct per-edge
        // Gauss integration of dnu(phi_i) dnu(phi_j).
        let basis = build_square_basis(3, 3).unwrap();
        let eta = Conductivity::constant(10.0).unwrap();
        let sys = assemble(&basis, &RefractiveIndex::constant(4.0).unwrap(), &eta).unwrap();
        let gl = gauss_legendre(24).unwrap();
        let (s_nodes, s_weights) = gl.mapped_to(0.0, 1.0);
        let nfun = basis.len();
        let mut g = vec![vec![0.0; nfun]; nfun];
        for edge in 0..4usize {
            for (kk, &s) in s_nodes.iter().enumerate() {
                let bp = crate::basis::BoundaryPoint::Edge { edge, s };
                let d: Vec<f64> = basis
                    .functions
                    .iter()
                    .map(|f| f.normal_derivative(&bp).unwrap())
                    .collect();
                for i in 0..nfun {
                    for j in 0..nfun {
                        g[i][j] += s_weights[kk] * d[i] * d[j];
                    }
                }
            }
        }
        for i in 0..nfun {
            for j in 0..nfun {
                let want =
                    basis.functions[i].lambda * if i == j { 1.0 } else { 0.0 } - g[i][j] / 10.0;
                assert!(
                    (sys.b[(i, j)] - want).abs() <= 1e-8 * want.abs().max(1.0),
                    "B[{i}][{j}] = {} vs quadrature {want}",
                    sys.b[(i, j)]
                );
            }
        }
    }

    #[test]
    fn matrices_are_symmetric_and_a_is_positive_definite() {
        let basis = build_disk_basis(3, 3, false).unwrap();
        let n = RefractiveIndex::radial_exp_bump(4.0, 1.0).unwrap();
        let eta = Conductivity::inverse_angular(10.0, 1.0).unwrap();
        let sys = assemble(&basis, &n, &eta).unwrap();
        let nfun = basis.len();
        for i in 0..nfun {
            for j in 0..nfun {
                assert!((sys.a[(i, j)] - sys.a[(j, i)]).abs() <= 1e-12 * sys.a.norm());
                assert!((sys.b[(i, j)] - sys.b[(j, i)]).abs() <= 1e-12 * sys.b.norm());
            }
        }
        assert!(nalgebra::Cholesky::new(sys.a.clone()).is_some());
    }

    #[test]
    fn solve_reports_unit_norm_vectors_and_small_residuals() {
        let sys = disk_const_system();
        let spectrum = solve(&sys).unwrap();
        assert!(!spectrum.real.is_empty());
        for pair in spectrum.real.iter().chain(spectrum.imaginary.iter()) {
            assert_relative_eq!(pair.omega.norm(), 1.0, max_relative = 1e-12);
        }
        for pair in &spectrum.real {
            assert!(sys.residual(pair.k, KType::Real, &pair.omega) <= 1e-8);
            assert!(pair.k > 0.0);
        }
        for pair in &spectrum.imaginary {
            assert!(sys.residual(pair.k, KType::Imaginary, &pair.omega) <= 1e-8);
            assert!(pair.k > 0.0);
        }
        for w in spectrum.real.windows(2) {
            assert!(w[0].k <= w[1].k);
        }
    }

    #[test]
    fn indefinite_stiffness_is_detected() {
        let mut sys = disk_const_system();
        sys.a[(0, 0)] = -1.0;
        match solve(&sys) {
            Err(CoreError::IndefiniteStiffness) => {}
            other => panic!("expected IndefiniteStiffness, got {other:?}"),
        }
    }

    #[test]
    fn zero_b_matrix_yields_empty_spectrum_error() {
        let mut sys = disk_const_system();
        sys.b.fill(0.0);
        match solve(&sys) {
            Err(CoreError::EmptySpectrum) => {}
            other => panic!("expected EmptySpectrum, got {other:?}"),
        }
    }

    #[test]
    fn quadrature_doubling_moves_k1_by_less_than_1e8() {
        let basis = build_disk_basis(5, 4, false).unwrap();
        let n = RefractiveIndex::radial_exp_bump(4.0, 1.0).unwrap();
        let eta = Conductivity::constant(25.0).unwrap();
        let coarse = solve(&assemble(&basis, &n, &eta).unwrap()).unwrap();
        let basis_fine = basis
            .with_domain(Domain::with_orders(DomainKind::UnitDisk, 24, 24).unwrap())
            .unwrap();
        let fine = solve(&assemble(&basis_fine, &n, &eta).unwrap()).unwrap();
        assert!((coarse.real[0].k - fine.real[0].k).abs() <= 1e-8);
    }

    #[test]
    fn eval_eigenfunction_validates_index_and_points() {
        let sys = disk_const_system();
        let spectrum = solve(&sys).unwrap();
        assert!(eval_eigenfunction(&spectrum, 999, &[(0.0, 0.0)]).is_err());
        assert!(eval_eigenfunction(&spectrum, 0, &[(2.0, 0.0)]).is_err());
        let vals = eval_eigenfunction(&spectrum, 0, &[(0.0, 0.0), (1.0, 0.0), (0.3, 0.2)]).unwrap();
        // Dirichlet basis: the eigenfunction vanishes on the boundary.
        assert!(vals[1].abs() < 1e-10);
        assert!(vals[0].abs() > 0.1); // nontrivial at the center
    }

    #[test]
    fn first_eigenfunction_has_unit_l2_norm() {
        // phi_i are L2-orthonormal and omega has unit Euclidean norm, so the
        // eigenfunction integrates to 1 in L2; verify the evaluation wiring.
        let sys = disk_const_system();
        let spectrum = solve(&sys).unwrap();
        let gl = gauss_legendre(16).unwrap();
        let breaks: Vec<f64> = (0..=8).map(|i| i as f64 / 8.0).collect();
        let (r_nodes, r_weights) = composite_rule(&gl, &breaks);
        let m_ang = 64usize;
        let w_ang = 2.0 * std::f64::consts::PI / m_ang as f64;
        let mut points = Vec::new();
        let mut weights = Vec::new();
        for (&r, &wr) in r_nodes.iter().zip(r_weights.iter()) {
            for l in 0..m_ang {
                let th = 2.0 * std::f64::consts::PI * l as f64 / m_ang as f64;
                points.push((r * th.cos(), r * th.sin()));
                weights.push(wr * w_ang * r);
            }
        }
        let values = eval_eigenfunction(&spectrum, 0, &points).unwrap();
        let norm_sq: f64 = values
            .iter()
            .zip(weights.iter())
            .map(|(v, w)| w * v * v)
            .sum();
        assert_relative_eq!(norm_sq, 1.0, max_relative = 1e-6);
    }

    #[test]
    fn convergence_study_validates_sizes() {
        let n = RefractiveIndex::constant(4.0).unwrap();
        let eta = Conductivity::constant(25.0).unwrap();
        assert!(convergence_study(DomainKind::UnitDisk, &n, &eta, &[8, 16]).is_err());
        assert!(convergence_study(DomainKind::UnitDisk, &n, &eta, &[8, 8, 16]).is_err());
        assert!(convergence_study(DomainKind::UnitDisk, &n, &eta, &[16, 8, 24]).is_err());
    }

    #[test]
    fn angular_eta_preserves_cos_sin_block_structure() {
        // eta families in scope have frequency <= 4 and are even in theta,
        // so cosine and sine blocks stay uncoupled.
        let basis = build_disk_basis(3, 2, true).unwrap();
        let n = RefractiveIndex::constant(4.0).unwrap();
        let eta = Conductivity::scaled_angular(25.0, 1.0).unwrap();
        let sys = assemble(&basis, &n, &eta).unwrap();
        let ncos = 8; // p = 0..=3, q = 1..=2
        for i in 0..ncos {
            for j in ncos..basis.len() {
                assert!(
                    sys.b[(i, j)].abs() < 1e-9,
                    "cos-sin coupling at ({i},{j}): {}",
                    sys.b[(i, j)]
                );
            }
        }
    }
}
