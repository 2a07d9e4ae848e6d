//! Dirichlet-Laplacian eigenbases of the unit disk and the unit square.
//!
//! Disk (radius 1, center origin): phi = c * J_p(j_{p,q} r) * {cos,sin}(p theta),
//! lambda = j_{p,q}^2, with c chosen so the L2 norm over the disk is 1.
//! Square (0,1)^2: phi = 2 sin(p pi x1) sin(q pi x2), lambda = pi^2 (p^2 + q^2).

use crate::error::{CoreError, CoreResult};
use crate::specfun::{bessel_j_prime, bessel_j_raw, bessel_zero_table, DEFAULT_QUADRATURE_ORDER};

/// Geometry on which the eigenproblem is posed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DomainKind {
    UnitDisk,
    UnitSquare,
}

impl DomainKind {
    pub fn label(&self) -> &'static str {
        match self {
            DomainKind::UnitDisk => "unit_disk",
            DomainKind::UnitSquare => "unit_square",
        }
    }
}

/// Domain plus the quadrature orders used when integrating over it.
///
/// `volume_quadrature_order` is the Gauss order per radial panel (disk) or
/// per dimension (square); `boundary_quadrature_order` is the minimum number
/// of boundary nodes. Assembly may raise the effective node counts so that
/// all basis/coefficient products in scope are integrated to near machine
/// precision; see `galerkin::AssemblyOptions`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Domain {
    pub kind: DomainKind,
    pub volume_quadrature_order: usize,
    pub boundary_quadrature_order: usize,
}

impl Domain {
    pub fn unit_disk() -> Self {
        Domain {
            kind: DomainKind::UnitDisk,
            volume_quadrature_order: DEFAULT_QUADRATURE_ORDER,
            boundary_quadrature_order: DEFAULT_QUADRATURE_ORDER,
        }
    }

    pub fn unit_square() -> Self {
        Domain {
            kind: DomainKind::UnitSquare,
            volume_quadrature_order: DEFAULT_QUADRATURE_ORDER,
            boundary_quadrature_order: DEFAULT_QUADRATURE_ORDER,
        }
    }

    /// Same domain with explicit quadrature orders (each must be >= 4).
    pub fn with_orders(kind: DomainKind, volume: usize, boundary: usize) -> CoreResult<Self> {
        if volume < 4 || boundary < 4 {
            return Err(CoreError::InvalidArgument(format!(
                "quadrature orders must be >= 4, got volume {volume}, boundary {boundary}"
            )));
        }
        if volume > crate::specfun::MAX_QUADRATURE_ORDER || boundary > 4096 {
            return Err(CoreError::InvalidArgument(
                "quadrature order too large".into(),
            ));
        }
        Ok(Domain {
            kind,
            volume_quadrature_order: volume,
            boundary_quadrature_order: boundary,
        })
    }
}

/// Angular factor of a disk mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Parity {
    Cosine,
    Sine,
}

/// A point on the boundary of a domain.
///
/// For the square the edges are numbered counterclockwise starting at the
/// origin, with s the arclength from the edge's first vertex:
/// edge 0: (0,0)->(1,0); edge 1: (1,0)->(1,1); edge 2: (1,1)->(0,1);
/// edge 3: (0,1)->(0,0). s lies in [0,1].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundaryPoint {
    /// Angle in radians on the unit circle.
    Angle(f64),
    /// Square edge id (0..4) and arclength along it.
    Edge { edge: usize, s: f64 },
}

impl BoundaryPoint {
    /// Cartesian coordinates of the boundary point.
    pub fn position(&self, kind: DomainKind) -> CoreResult<(f64, f64)> {
        match (kind, self) {
            (DomainKind::UnitDisk, BoundaryPoint::Angle(t)) => Ok((t.cos(), t.sin())),
            (DomainKind::UnitSquare, BoundaryPoint::Edge { edge, s }) => {
                if !(0.0..=1.0).contains(s) {
                    return Err(CoreError::InvalidArgument(format!(
                        "edge parameter s must be in [0,1], got {s}"
                    )));
                }
                match edge {
                    0 => Ok((*s, 0.0)),
                    1 => Ok((1.0, *s)),
                    2 => Ok((1.0 - *s, 1.0)),
                    3 => Ok((0.0, 1.0 - *s)),
                    _ => Err(CoreError::InvalidArgument(format!(
                        "square edge id must be 0..4, got {edge}"
                    ))),
                }
            }
            _ => Err(CoreError::InvalidArgument(
                "boundary point variant does not match the domain".into(),
            )),
        }
    }
}

/// One Dirichlet eigenfunction.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisFunction {
    pub kind: DomainKind,
    pub parity: Parity,
    /// Angular order (disk) or first sine index (square).
    pub mode_p: u32,
    /// Radial zero index, counting from 1 (disk) or second sine index (square).
    pub mode_q: u32,
    /// Dirichlet eigenvalue: j_{p,q}^2 (disk) or pi^2 (p^2+q^2) (square).
    pub lambda: f64,
    /// L2 normalization constant.
    pub norm_const: f64,
}

const CLOSURE_TOL: f64 = 1e-12;

impl BasisFunction {
    /// sqrt(lambda): j_{p,q} on the disk, pi sqrt(p^2+q^2) on the square.
    pub fn frequency(&self) -> f64 {
        self.lambda.sqrt()
    }

    /// Value at a Cartesian point of the closed domain.
    pub fn eval(&self, x1: f64, x2: f64) -> CoreResult<f64> {
        match self.kind {
            DomainKind::UnitDisk => {
                let r = x1.hypot(x2);
                if r > 1.0 + CLOSURE_TOL {
                    return Err(CoreError::InvalidArgument(format!(
                        "point ({x1}, {x2}) lies outside the closed unit disk"
                    )));
                }
                let theta = x2.atan2(x1);
                let j = self.frequency();
                let radial = bessel_j_raw(self.mode_p, j * r.min(1.0));
                Ok(self.norm_const * radial * self.angular(theta))
            }
            DomainKind::UnitSquare => {
                if !(-CLOSURE_TOL..=1.0 + CLOSURE_TOL).contains(&x1)
                    || !(-CLOSURE_TOL..=1.0 + CLOSURE_TOL).contains(&x2)
                {
                    return Err(CoreError::InvalidArgument(format!(
                        "point ({x1}, {x2}) lies outside the closed unit square"
                    )));
                }
                let p = self.mode_p as f64 * std::f64::consts::PI;
                let q = self.mode_q as f64 * std::f64::consts::PI;
                Ok(self.norm_const * (p * x1).sin() * (q * x2).sin())
            }
        }
    }

    fn angular(&self, theta: f64) -> f64 {
        let pt = self.mode_p as f64 * theta;
        match self.parity {
            Parity::Cosine => pt.cos(),
            Parity::Sine => pt.sin(),
        }
    }

    fn angular_derivative(&self, theta: f64) -> f64 {
        let p = self.mode_p as f64;
        let pt = p * theta;
        match self.parity {
            Parity::Cosine => -p * pt.sin(),
            Parity::Sine => p * pt.cos(),
        }
    }

    /// Cartesian gradient at an interior or boundary point.
    pub fn gradient(&self, x1: f64, x2: f64) -> CoreResult<(f64, f64)> {
        match self.kind {
            DomainKind::UnitDisk => {
                let r = x1.hypot(x2);
                if r > 1.0 + CLOSURE_TOL {
                    return Err(CoreError::InvalidArgument(format!(
                        "point ({x1}, {x2}) lies outside the closed unit disk"
                    )));
                }
                let j = self.frequency();
                let p = self.mode_p;
                if r < 1e-12 {
                    // Series limit at the center: only p = 1 has a nonzero gradient.
                    if p == 1 {
                        let g = self.norm_const * 0.5 * j;
                        return Ok(match self.parity {
                            Parity::Cosine => (g, 0.0),
                            Parity::Sine => (0.0, g),
                        });
                    }
                    return Ok((0.0, 0.0));
                }
                let theta = x2.atan2(x1);
                let rr = r.min(1.0);
                let dr = self.norm_const * j * bessel_j_prime(p, j * rr)? * self.angular(theta);
                let dt =
                    self.norm_const * bessel_j_raw(p, j * rr) * self.angular_derivative(theta) / r;
                let (ct, st) = (theta.cos(), theta.sin());
                Ok((dr * ct - dt * st, dr * st + dt * ct))
            }
            DomainKind::UnitSquare => {
                if !(-CLOSURE_TOL..=1.0 + CLOSURE_TOL).contains(&x1)
                    || !(-CLOSURE_TOL..=1.0 + CLOSURE_TOL).contains(&x2)
                {
                    return Err(CoreError::InvalidArgument(format!(
                        "point ({x1}, {x2}) lies outside the closed unit square"
                    )));
                }
                let p = self.mode_p as f64 * std::f64::consts::PI;
                let q = self.mode_q as f64 * std::f64::consts::PI;
                Ok((
                    self.norm_const * p * (p * x1).cos() * (q * x2).sin(),
                    self.norm_const * q * (p * x1).sin() * (q * x2).cos(),
                ))
            }
        }
    }

    /// Laplacian at a point: exactly -lambda * phi for an eigenfunction.
    pub fn laplacian(&self, x1: f64, x2: f64) -> CoreResult<f64> {
        Ok(-self.lambda * self.eval(x1, x2)?)
    }

    /// Outward normal derivative at a boundary point.
    ///
    /// Disk: c * j * J_p'(j) * {cos,sin}(p theta).
    /// Square, e.g. edge 0 (x2 = 0): -2 q pi sin(p pi x1).
    pub fn normal_derivative(&self, point: &BoundaryPoint) -> CoreResult<f64> {
        match (self.kind, point) {
            (DomainKind::UnitDisk, BoundaryPoint::Angle(theta)) => {
                let j = self.frequency();
                Ok(self.norm_const * j * bessel_j_prime(self.mode_p, j)? * self.angular(*theta))
            }
            (DomainKind::UnitSquare, BoundaryPoint::Edge { .. }) => {
                let (x1, x2) = point.position(self.kind)?;
                let g = self.gradient(x1, x2)?;
                let BoundaryPoint::Edge { edge, .. } = point else {
                    unreachable!()
                };
                let normal = match edge {
                    0 => (0.0, -1.0),
                    1 => (1.0, 0.0),
                    2 => (0.0, 1.0),
                    3 => (-1.0, 0.0),
                    _ => unreachable!("validated in position()"),
                };
                Ok(g.0 * normal.0 + g.1 * normal.1)
            }
            _ => Err(CoreError::InvalidArgument(
                "boundary point variant does not match the basis domain".into(),
            )),
        }
    }
}

/// Order in which basis functions are listed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisOrdering {
    /// Mode-grid order: cosine family before sine, p-major, then q.
    Lexicographic,
    /// Ascending Dirichlet eigenvalue (ties broken by parity, then p, q).
    ByLambda,
}

/// An ordered collection of Dirichlet eigenfunctions on one domain.
#[derive(Debug, Clone)]
pub struct BasisSet {
    pub domain: Domain,
    pub functions: Vec<BasisFunction>,
    pub ordering: BasisOrdering,
}

impl BasisSet {
    pub fn len(&self) -> usize {
        self.functions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functions.is_empty()
    }

    /// Largest mode_p in the set (drives angular quadrature resolution).
    pub fn max_mode_p(&self) -> u32 {
        self.functions.iter().map(|f| f.mode_p).max().unwrap_or(0)
    }

    /// Largest mode index in either direction.
    pub fn max_mode(&self) -> u32 {
        self.functions
            .iter()
            .map(|f| f.mode_p.max(f.mode_q))
            .max()
            .unwrap_or(0)
    }

    /// Largest frequency sqrt(lambda) in the set.
    pub fn max_frequency(&self) -> f64 {
        self.functions
            .iter()
            .map(|f| f.frequency())
            .fold(0.0, f64::max)
    }

    /// Replace the domain (same kind) to carry custom quadrature orders.
    pub fn with_domain(mut self, domain: Domain) -> CoreResult<Self> {
        if domain.kind != self.domain.kind {
            return Err(CoreError::InvalidArgument(
                "domain kind mismatch in with_domain".into(),
            ));
        }
        self.domain = domain;
        Ok(self)
    }

    /// Stable re-sort by ascending lambda; deterministic tie-breaks.
    pub fn sorted_by_lambda(mut self) -> Self {
        self.functions.sort_by(|a, b| {
            a.lambda
                .partial_cmp(&b.lambda)
                .unwrap()
                .then(a.parity.cmp(&b.parity))
                .then(a.mode_p.cmp(&b.mode_p))
                .then(a.mode_q.cmp(&b.mode_q))
        });
        self.ordering = BasisOrdering::ByLambda;
        self
    }

    /// Keep the first `n` functions.
    pub fn truncated(mut self, n: usize) -> CoreResult<Self> {
        if n == 0 || n > self.functions.len() {
            return Err(CoreError::InvalidArgument(format!(
                "truncation size {n} outside 1..={}",
                self.functions.len()
            )));
        }
        self.functions.truncate(n);
        Ok(self)
    }
}

/// Disk eigenbasis: cosine modes p = 0..=p_max, q = 1..=q_max, followed by
/// sine modes p = 1..=p_max when `include_sine` (sin(0) is trivial).
///
/// Normalization over the unit disk: ||J_p(j r) cos(p theta)||^2 =
/// pi J_1(j)^2 for p = 0 and (pi/2) J_{p+1}(j)^2 for p >= 1.
pub fn build_disk_basis(p_max: u32, q_max: u32, include_sine: bool) -> CoreResult<BasisSet> {
    if q_max == 0 {
        return Err(CoreError::InvalidArgument(
            "disk basis needs q_max >= 1".into(),
        ));
    }
    let zeros = bessel_zero_table(p_max, q_max)?;
    let mut functions = Vec::new();
    let push_family = |parity: Parity, functions: &mut Vec<BasisFunction>| -> CoreResult<()> {
        let p_lo = if parity == Parity::Sine { 1 } else { 0 };
        for p in p_lo..=p_max {
            for q in 1..=q_max {
                let j = zeros[p as usize][q as usize - 1];
                let jp1 = bessel_j_raw(p + 1, j);
                let norm_sq = if p == 0 {
                    std::f64::consts::PI * jp1 * jp1
                } else {
                    0.5 * std::f64::consts::PI * jp1 * jp1
                };
                functions.push(BasisFunction {
                    kind: DomainKind::UnitDisk,
                    parity,
                    mode_p: p,
                    mode_q: q,
                    lambda: j * j,
                    norm_const: 1.0 / norm_sq.sqrt(),
                });
            }
        }
        Ok(())
    };
    push_family(Parity::Cosine, &mut functions)?;
    if include_sine {
        push_family(Parity::Sine, &mut functions)?;
    }
    Ok(BasisSet {
        domain: Domain::unit_disk(),
        functions,
        ordering: BasisOrdering::Lexicographic,
    })
}

/// Square eigenbasis: 2 sin(p pi x1) sin(q pi x2), p = 1..=p_max, q = 1..=q_max,
/// p-major order. Already L2-normalized on (0,1)^2.
pub fn build_square_basis(p_max: u32, q_max: u32) -> CoreResult<BasisSet> {
    if p_max == 0 || q_max == 0 {
        return Err(CoreError::InvalidArgument(
            "square basis needs p_max, q_max >= 1".into(),
        ));
    }
    let pi2 = std::f64::consts::PI * std::f64::consts::PI;
    let mut functions = Vec::with_capacity((p_max * q_max) as usize);
    for p in 1..=p_max {
        for q in 1..=q_max {
            functions.push(BasisFunction {
                kind: DomainKind::UnitSquare,
                parity: Parity::Sine,
                mode_p: p,
                mode_q: q,
                lambda: pi2 * (p * p + q * q) as f64,
                norm_const: 2.0,
            });
        }
    }
    Ok(BasisSet {
        domain: Domain::unit_square(),
        functions,
        ordering: BasisOrdering::Lexicographic,
    })
}

#[cfg(test)]
#[allow(clippy::needless_range_loop)] // (i, j) Gram-matrix loops read naturally indexed
mod tests {
    use super::*;
    use crate::specfun::{bessel_zero, gauss_legendre};
    use approx::assert_relative_eq;

    #[test]
    fn disk_basis_has_expected_size_and_lambdas() {
        let basis = build_disk_basis(5, 4, false).unwrap();
        assert_eq!(basis.len(), 24);
        let j01 = bessel_zero(0, 1).unwrap();
        assert_relative_eq!(basis.functions[0].lambda, j01 * j01, max_relative = 1e-12);
        // p-major ordering: entry 4 is (p=1, q=1).
        assert_eq!(basis.functions[4].mode_p, 1);
        assert_eq!(basis.functions[4].mode_q, 1);
        let with_sine = build_disk_basis(5, 4, true).unwrap();
        assert_eq!(with_sine.len(), 24 + 20);
    }

    #[test]
    fn disk_modes_vanish_on_the_boundary() {
        let basis = build_disk_basis(3, 2, true).unwrap();
        for f in &basis.functions {
            for &theta in &[0.0f64, 0.7, 2.0, 4.5] {
                let v = f.eval(theta.cos(), theta.sin()).unwrap();
                assert!(
                    v.abs() < 1e-10,
                    "mode ({},{}) boundary value {v}",
                    f.mode_p,
                    f.mode_q
                );
            }
        }
    }

    #[test]
    fn square_modes_vanish_on_the_boundary() {
        let basis = build_square_basis(3, 3).unwrap();
        for f in &basis.functions {
            assert!(f.eval(0.0, 0.3).unwrap().abs() < 1e-12);
            assert!(f.eval(1.0, 0.3).unwrap().abs() < 1e-12);
            assert!(f.eval(0.4, 0.0).unwrap().abs() < 1e-12);
            assert!(f.eval(0.4, 1.0).unwrap().abs() < 1e-12);
        }
    }

    #[test]
    fn eval_rejects_points_outside_the_closure() {
        let disk = build_disk_basis(1, 1, false).unwrap();
        assert!(disk.functions[0].eval(1.01, 0.0).is_err());
        let square = build_square_basis(1, 1).unwrap();
        assert!(square.functions[0].eval(-0.01, 0.5).is_err());
        assert!(square.functions[0].eval(0.5, 1.01).is_err());
    }

    #[test]
    fn square_normal_derivative_closed_form() {
        // (p,q) = (1,1) at edge 0, x1 = 1/2: -2 pi.
        let basis = build_square_basis(2, 2).unwrap();
        let f11 = &basis.functions[0];
        let got = f11
            .normal_derivative(&BoundaryPoint::Edge { edge: 0, s: 0.5 })
            .unwrap();
        assert_relative_eq!(got, -2.0 * std::f64::consts::PI, max_relative = 1e-13);
        // Edge 1 (x1 = 1): 2 p pi (-1)^p sin(q pi s).
        let got = f11
            .normal_derivative(&BoundaryPoint::Edge { edge: 1, s: 0.25 })
            .unwrap();
        let want = -2.0 * std::f64::consts::PI * (std::f64::consts::PI * 0.25).sin();
        assert_relative_eq!(got, want, max_relative = 1e-13);
    }

    #[test]
    fn disk_normal_derivative_closed_form() {
        let basis = build_disk_basis(2, 2, false).unwrap();
        for f in &basis.functions {
            let j = f.frequency();
            let want = f.norm_const * j * crate::specfun::bessel_j_prime(f.mode_p, j).unwrap();
            let got = f.normal_derivative(&BoundaryPoint::Angle(0.0)).unwrap();
            assert_relative_eq!(got, want, max_relative = 1e-12);
        }
    }

    #[test]
    fn boundary_point_variants_must_match_domain() {
        let disk = build_disk_basis(1, 1, false).unwrap();
        assert!(disk.functions[0]
            .normal_derivative(&BoundaryPoint::Edge { edge: 0, s: 0.5 })
            .is_err());
        let square = build_square_basis(1, 1).unwrap();
        assert!(square.functions[0]
            .normal_derivative(&BoundaryPoint::Angle(0.1))
            .is_err());
    }

    /// L2 inner products over the disk by composite Gauss (radial) x
    /// trapezoid (angular) quadrature.
    fn disk_l2_gram(basis: &BasisSet) -> Vec<Vec<f64>> {
        let gl = gauss_legendre(16).unwrap();
        let breaks: Vec<f64> = (0..=8).map(|i| i as f64 / 8.0).collect();
        let (r, wr) = crate::specfun::composite_rule(&gl, &breaks);
        let m = 4 * basis.max_mode_p() as usize + 8;
        let wt = 2.0 * std::f64::consts::PI / m as f64;
        let n = basis.len();
        let mut gram = vec![vec![0.0; n]; n];
        for (k, &rk) in r.iter().enumerate() {
            for l in 0..m {
                let th = 2.0 * std::f64::consts::PI * l as f64 / m as f64;
                let (x1, x2) = (rk * th.cos(), rk * th.sin());
                let vals: Vec<f64> = basis
                    .functions
                    .iter()
                    .map(|f| f.eval(x1, x2).unwrap())
                    .collect();
                let w = wr[k] * rk * wt;
                for i in 0..n {
                    for j in i..n {
                        gram[i][j] += w * vals[i] * vals[j];
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..i {
                gram[i][j] = gram[j][i];
            }
        }
        gram
    }

    #[test]
    fn disk_basis_is_orthonormal() {
        let basis = build_disk_basis(3, 2, true).unwrap();
        let gram = disk_l2_gram(&basis);
        for i in 0..basis.len() {
            for j in 0..basis.len() {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!(
                    (gram[i][j] - want).abs() < 1e-9,
                    "gram[{i}][{j}] = {}",
                    gram[i][j]
                );
            }
        }
    }

    #[test]
    fn square_basis_is_orthonormal() {
        let basis = build_square_basis(3, 3).unwrap();
        let gl = gauss_legendre(24).unwrap();
        let (x, w) = gl.mapped_to(0.0, 1.0);
        let n = basis.len();
        let mut gram = vec![vec![0.0; n]; n];
        for (a, &xa) in x.iter().enumerate() {
            for (b, &xb) in x.iter().enumerate() {
                let vals: Vec<f64> = basis
                    .functions
                    .iter()
                    .map(|f| f.eval(xa, xb).unwrap())
                    .collect();
                let ww = w[a] * w[b];
                for i in 0..n {
                    for j in 0..n {
                        gram[i][j] += ww * vals[i] * vals[j];
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((gram[i][j] - want).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn gradient_products_integrate_to_lambda() {
        // Green's identity for Dirichlet eigenfunctions:
        // int grad(phi_i) . grad(phi_j) = lambda_i delta_ij.
        let basis = build_disk_basis(2, 2, false).unwrap();
        let gl = gauss_legendre(16).unwrap();
        let breaks: Vec<f64> = (0..=8).map(|i| i as f64 / 8.0).collect();
        let (r, wr) = crate::specfun::composite_rule(&gl, &breaks);
        let m = 4 * basis.max_mode_p() as usize + 8;
        let wt = 2.0 * std::f64::consts::PI / m as f64;
        let n = basis.len();
        let mut gram = vec![vec![0.0; n]; n];
        for (k, &rk) in r.iter().enumerate() {
            for l in 0..m {
                let th = 2.0 * std::f64::consts::PI * l as f64 / m as f64;
                let (x1, x2) = (rk * th.cos(), rk * th.sin());
                let grads: Vec<(f64, f64)> = basis
                    .functions
                    .iter()
                    .map(|f| f.gradient(x1, x2).unwrap())
                    .collect();
                let w = wr[k] * rk * wt;
                for i in 0..n {
                    for j in 0..n {
                        gram[i][j] += w * (grads[i].0 * grads[j].0 + grads[i].1 * grads[j].1);
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                let want = if i == j {
                    basis.functions[i].lambda
                } else {
                    0.0
                };
                let scale = basis.functions[i].lambda.max(1.0);
                assert!(
                    (gram[i][j] - want).abs() < 1e-8 * scale,
                    "grad gram [{i}][{j}]: {} vs {want}",
                    gram[i][j]
                );
            }
        }
    }

    #[test]
    fn finite_difference_laplacian_matches_eigenvalue() {
        // 5-point Laplacian residual (Delta + lambda) phi = O(h^2).
        for (basis, pts) in [
            (
                build_disk_basis(2, 2, false).unwrap(),
                vec![(0.3, 0.1), (0.0, 0.0), (-0.4, 0.35)],
            ),
            (
                build_square_basis(2, 2).unwrap(),
                vec![(0.3, 0.4), (0.51, 0.52), (0.7, 0.21)],
            ),
        ] {
            for f in &basis.functions {
                for &(x, y) in &pts {
                    let mut prev_err = f64::INFINITY;
                    for &h in &[1e-3, 5e-4] {
                        let lap_fd = (f.eval(x + h, y).unwrap()
                            + f.eval(x - h, y).unwrap()
                            + f.eval(x, y + h).unwrap()
                            + f.eval(x, y - h).unwrap()
                            - 4.0 * f.eval(x, y).unwrap())
                            / (h * h);
                        let err = (lap_fd + f.lambda * f.eval(x, y).unwrap()).abs();
                        // O(h^2): halving h divides the residual by ~4.
                        assert!(err < prev_err.max(1e-7) * 0.5 || err < 1e-6 * f.lambda);
                        prev_err = err;
                    }
                }
            }
        }
    }

    #[test]
    fn laplacian_method_uses_eigenvalue_identity() {
        let basis = build_square_basis(2, 2).unwrap();
        let f = &basis.functions[2];
        let got = f.laplacian(0.3, 0.6).unwrap();
        assert_relative_eq!(got, -f.lambda * f.eval(0.3, 0.6).unwrap(), epsilon = 1e-14);
    }

    #[test]
    fn weyl_growth_bound_on_square() {
        // lambda_j / j stays near the Weyl constant 4 pi (boundary terms push
        // it above) for the 144 lowest modes.
        let basis = build_square_basis(12, 12).unwrap().sorted_by_lambda();
        for (idx, f) in basis.functions.iter().enumerate().skip(4) {
            let ratio = f.lambda / (idx + 1) as f64;
            assert!(
                (12.0..=21.0).contains(&ratio),
                "Weyl ratio out of bounds at j={}: {ratio}",
                idx + 1
            );
        }
    }

    #[test]
    fn by_lambda_ordering_is_monotone_and_deterministic() {
        let basis = build_disk_basis(4, 3, true).unwrap().sorted_by_lambda();
        for w in basis.functions.windows(2) {
            assert!(w[0].lambda <= w[1].lambda);
        }
        assert_eq!(basis.ordering, BasisOrdering::ByLambda);
        // Degenerate cosine/sine pairs: cosine listed first.
        let pairs: Vec<_> = basis
            .functions
            .iter()
            .zip(basis.functions.iter().skip(1))
            .filter(|(a, b)| (a.lambda - b.lambda).abs() < 1e-12)
            .collect();
        for (a, b) in pairs {
            assert_eq!(a.parity, Parity::Cosine);
            assert_eq!(b.parity, Parity::Sine);
        }
    }

    #[test]
    fn truncation_validates_bounds() {
        let basis = build_square_basis(2, 2).unwrap();
        assert!(basis.clone().truncated(0).is_err());
        assert!(basis.clone().truncated(5).is_err());
        assert_eq!(basis.truncated(3).unwrap().len(), 3);
    }

    #[test]
    fn domain_orders_are_validated() {
        assert!(Domain::with_orders(DomainKind::UnitDisk, 3, 12).is_err());
        assert!(Domain::with_orders(DomainKind::UnitDisk, 12, 3).is_err());
        let d = Domain::with_orders(DomainKind::UnitSquare, 8, 16).unwrap();
        assert_eq!(d.volume_quadrature_order, 8);
    }

    #[test]
    fn gradient_at_disk_center_is_finite_and_correct() {
        let basis = build_disk_basis(2, 1, true).unwrap();
        for f in &basis.functions {
            let (gx, gy) = f.gradient(0.0, 0.0).unwrap();
            assert!(gx.is_finite() && gy.is_finite());
            // Compare with a central difference through the origin.
            let h = 1e-6;
            let fx = (f.eval(h, 0.0).unwrap() - f.eval(-h, 0.0).unwrap()) / (2.0 * h);
            let fy = (f.eval(0.0, h).unwrap() - f.eval(0.0, -h).unwrap()) / (2.0 * h);
            assert!((gx - fx).abs() < 1e-6, "d/dx at center: {gx} vs {fx}");
            assert!((gy - fy).abs() < 1e-6, "d/dy at center: {gy} vs {fy}");
        }
    }
}
