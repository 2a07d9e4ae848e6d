//! Refractive-index and conductivity coefficient families.
//!
//! All families are named (no expression parsing): the refractive index n is
//! a positive function on the domain, the conductivity eta a positive
//! function on its boundary.

use crate::basis::{BoundaryPoint, Domain, DomainKind};
use crate::error::{CoreError, CoreResult};
use crate::specfun::{composite_rule, gauss_legendre};

/// Refractive index n(x) on the domain.
#[derive(Debug, Clone, PartialEq)]
pub enum RefractiveIndex {
    /// n = c.
    Constant(f64),
    /// n = a + b exp(-r^2), radially symmetric about the origin.
    RadialExpBump { a: f64, b: f64 },
    /// n = inner for r < r0, outer for r >= r0 (half-open at r0). Disk only.
    PiecewiseRadial { r0: f64, inner: f64, outer: f64 },
    /// n = (x1^2/2 + 2)(x2^2/2 + 2). Square only.
    SeparablePoly,
}

impl RefractiveIndex {
    pub fn constant(c: f64) -> CoreResult<Self> {
        if !(c.is_finite() && c > 0.0) {
            return Err(CoreError::InvalidArgument(format!(
                "constant refractive index must be positive, got {c}"
            )));
        }
        Ok(RefractiveIndex::Constant(c))
    }

    pub fn radial_exp_bump(a: f64, b: f64) -> CoreResult<Self> {
        // Minimum over r^2 in [0, 2] (the square's far corner).
        let min = a + if b >= 0.0 { b * (-2.0f64).exp() } else { b };
        if !(a.is_finite() && b.is_finite() && min > 0.0) {
            return Err(CoreError::InvalidArgument(format!(
                "radial_exp_bump({a}, {b}) is not positive on the domain"
            )));
        }
        Ok(RefractiveIndex::RadialExpBump { a, b })
    }

    pub fn piecewise_radial(r0: f64, inner: f64, outer: f64) -> CoreResult<Self> {
        if !(r0.is_finite() && 0.0 < r0 && r0 < 1.0) {
            return Err(CoreError::InvalidArgument(format!(
                "piecewise_radial needs 0 < r0 < 1, got {r0}"
            )));
        }
        if !(inner > 0.0 && outer > 0.0) {
            return Err(CoreError::InvalidArgument(
                "piecewise_radial values must be positive".into(),
            ));
        }
        Ok(RefractiveIndex::PiecewiseRadial { r0, inner, outer })
    }

    /// CLI family tag.
    pub fn tag(&self) -> &'static str {
        match self {
            RefractiveIndex::Constant(_) => "constant",
            RefractiveIndex::RadialExpBump { .. } => "radial_exp_bump",
            RefractiveIndex::PiecewiseRadial { .. } => "piecewise_radial",
            RefractiveIndex::SeparablePoly => "separable_poly",
        }
    }

    /// Check the family is defined on the given domain kind.
    pub fn validate_for(&self, kind: DomainKind) -> CoreResult<()> {
        match (self, kind) {
            (RefractiveIndex::PiecewiseRadial { .. }, DomainKind::UnitSquare) => Err(
                CoreError::Unsupported("piecewise_radial is defined on the unit disk only".into()),
            ),
            (RefractiveIndex::SeparablePoly, DomainKind::UnitDisk) => Err(CoreError::Unsupported(
                "separable_poly is defined on the unit square only".into(),
            )),
            _ => Ok(()),
        }
    }

    /// Point value at Cartesian coordinates.
    pub fn n_at(&self, x1: f64, x2: f64) -> f64 {
        match self {
            RefractiveIndex::Constant(c) => *c,
            RefractiveIndex::RadialExpBump { a, b } => a + b * (-(x1 * x1 + x2 * x2)).exp(),
            RefractiveIndex::PiecewiseRadial { r0, inner, outer } => {
                if x1.hypot(x2) < *r0 {
                    *inner
                } else {
                    *outer
                }
            }
            RefractiveIndex::SeparablePoly => (0.5 * x1 * x1 + 2.0) * (0.5 * x2 * x2 + 2.0),
        }
    }

    /// True when the family depends only on r = |x| (or not at all).
    pub fn is_radial(&self) -> bool {
        !matches!(self, RefractiveIndex::SeparablePoly)
    }

    /// Radius of a jump discontinuity, if the family has one.
    pub fn discontinuity_radius(&self) -> Option<f64> {
        match self {
            RefractiveIndex::PiecewiseRadial { r0, .. } => Some(*r0),
            _ => None,
        }
    }

    /// Mean value over the domain (|disk| = pi, |square| = 1).
    pub fn average_value(&self, domain: &Domain) -> CoreResult<f64> {
        self.validate_for(domain.kind)?;
        if let RefractiveIndex::Constant(c) = self {
            return Ok(*c);
        }
        let gl = gauss_legendre(16)?;
        match domain.kind {
            DomainKind::UnitDisk => {
                let mut breaks = vec![0.0, 0.25, 0.5, 0.75, 1.0];
                if let Some(r0) = self.discontinuity_radius() {
                    if breaks.iter().all(|b| (b - r0).abs() > 1e-12) {
                        breaks.push(r0);
                        breaks.sort_by(|a, b| a.partial_cmp(b).unwrap());
                    }
                }
                let (r, wr) = composite_rule(&gl, &breaks);
                let m = 32;
                let wt = 2.0 * std::f64::consts::PI / m as f64;
                let mut total = 0.0;
                for (k, &rk) in r.iter().enumerate() {
                    for l in 0..m {
                        let th = 2.0 * std::f64::consts::PI * l as f64 / m as f64;
                        total += wr[k] * rk * wt * self.n_at(rk * th.cos(), rk * th.sin());
                    }
                }
                Ok(total / std::f64::consts::PI)
            }
            DomainKind::UnitSquare => {
                let (x, w) = gl.mapped_to(0.0, 1.0);
                let mut total = 0.0;
                for (a, &xa) in x.iter().enumerate() {
                    for (b, &xb) in x.iter().enumerate() {
                        total += w[a] * w[b] * self.n_at(xa, xb);
                    }
                }
                Ok(total)
            }
        }
    }
}

/// Conductivity eta on the boundary.
#[derive(Debug, Clone, PartialEq)]
pub enum Conductivity {
    /// eta = c.
    Constant(f64),
    /// eta(theta) = 1 / (a + b sin^2(2 theta)). Disk only.
    InverseAngular { a: f64, b: f64 },
    /// eta(theta) = a (2 + b sin^4(theta)). Disk only.
    ScaledAngular { a: f64, b: f64 },
}

impl Conductivity {
    pub fn constant(c: f64) -> CoreResult<Self> {
        if !(c.is_finite() && c > 0.0) {
            return Err(CoreError::InvalidArgument(format!(
                "constant conductivity must be positive, got {c}"
            )));
        }
        Ok(Conductivity::Constant(c))
    }

    pub fn inverse_angular(a: f64, b: f64) -> CoreResult<Self> {
        // Denominator a + b s, s = sin^2(2 theta) in [0,1], must stay positive.
        if !(a > 0.0 && a + b > 0.0) {
            return Err(CoreError::InvalidArgument(format!(
                "inverse_angular({a}, {b}) denominator is not positive"
            )));
        }
        Ok(Conductivity::InverseAngular { a, b })
    }

    pub fn scaled_angular(a: f64, b: f64) -> CoreResult<Self> {
        if !(a > 0.0 && 2.0 + b.min(0.0) > 0.0) {
            return Err(CoreError::InvalidArgument(format!(
                "scaled_angular({a}, {b}) is not positive"
            )));
        }
        Ok(Conductivity::ScaledAngular { a, b })
    }

    pub fn tag(&self) -> &'static str {
        match self {
            Conductivity::Constant(_) => "constant",
            Conductivity::InverseAngular { .. } => "inverse_angular",
            Conductivity::ScaledAngular { .. } => "scaled_angular",
        }
    }

    pub fn validate_for(&self, kind: DomainKind) -> CoreResult<()> {
        if kind == DomainKind::UnitSquare && !matches!(self, Conductivity::Constant(_)) {
            return Err(CoreError::Unsupported(
                "angular conductivity families are defined on the unit disk only".into(),
            ));
        }
        Ok(())
    }

    /// Value at an angle on the unit circle.
    pub fn eta_at_angle(&self, theta: f64) -> f64 {
        match self {
            Conductivity::Constant(c) => *c,
            Conductivity::InverseAngular { a, b } => {
                let s = (2.0 * theta).sin();
                1.0 / (a + b * s * s)
            }
            Conductivity::ScaledAngular { a, b } => {
                let s = theta.sin();
                a * (2.0 + b * s.powi(4))
            }
        }
    }

    /// Value at a boundary point of the given domain.
    pub fn eta_at(&self, kind: DomainKind, point: &BoundaryPoint) -> CoreResult<f64> {
        self.validate_for(kind)?;
        match (kind, point) {
            (DomainKind::UnitDisk, BoundaryPoint::Angle(t)) => Ok(self.eta_at_angle(*t)),
            (DomainKind::UnitSquare, BoundaryPoint::Edge { .. }) => {
                point.position(kind)?; // validates edge id and s
                match self {
                    Conductivity::Constant(c) => Ok(*c),
                    _ => unreachable!("validated above"),
                }
            }
            _ => Err(CoreError::InvalidArgument(
                "boundary point variant does not match the domain".into(),
            )),
        }
    }

    /// Mean of eta over the boundary.
    pub fn average_value(&self, domain: &Domain) -> CoreResult<f64> {
        self.validate_for(domain.kind)?;
        match self {
            Conductivity::Constant(c) => Ok(*c),
            _ => {
                let m = 256;
                let mut total = 0.0;
                for l in 0..m {
                    let th = 2.0 * std::f64::consts::PI * l as f64 / m as f64;
                    total += self.eta_at_angle(th);
                }
                Ok(total / m as f64)
            }
        }
    }
}
