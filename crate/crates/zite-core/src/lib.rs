//! Zero-index transmission eigenvalues with a conductive boundary.
//!
//! The library discretizes the fourth-order eigenproblem
//!   Delta((1/n) Delta w) = -k^2 Delta w  in D,  w = 0 on dD,
//! with a conductive boundary condition of parameter eta, by a spectral
//! Galerkin method in the Dirichlet eigenbasis of the unit disk or unit
//! square. It also evaluates the exact constant-coefficient dispersion
//! relation on the disk and the closed-form conductivity-limit spectra,
//! from which a constant effective refractive index can be estimated.
//!
//! Modules, bottom up:
//! - [`error`]: shared error type.
//! - [`specfun`]: Bessel functions, their zeros, Gauss-Legendre rules.
//! - [`basis`]: domains and Dirichlet eigenbases.
//! - [`coefficients`]: refractive-index and conductivity families.
//! - [`galerkin`]: assembly, eigensolver, convergence studies.
//! - [`reference`]: dispersion-relation roots, limit spectra, index estimation.

pub mod basis;
pub mod coefficients;
pub mod error;
pub mod galerkin;
pub mod reference;
pub mod specfun;

pub use basis::{
    build_disk_basis, build_square_basis, BasisFunction, BasisOrdering, BasisSet, BoundaryPoint,
    Domain, DomainKind, Parity,
};
pub use coefficients::{Conductivity, RefractiveIndex};
pub use error::{CoreError, CoreResult};
pub use galerkin::{
    assemble, assemble_with, convergence_study, eval_eigenfunction, solve, AssemblyOptions,
    ConvergenceRow, ConvergenceTable, Eigenpair, GalerkinSystem, KType, QuadratureInfo, Spectrum,
};
pub use reference::{
    estimate_n, limit_tau1, modified_dirichlet, modified_plate_buckling, DispersionQuery,
    EstimateMethod, ExactRoot, LimitEigenvalue, LimitKind, Regime,
};
pub use specfun::{bessel_j, bessel_j_prime, bessel_zero, gauss_legendre, QuadratureRule};
