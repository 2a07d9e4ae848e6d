//! Regression pins for the assembled eigensolver.
//!
//! Every value below was frozen from an independent high-precision prototype
//! (150-bit arithmetic for special functions, cross-checked quadrature with
//! drift below 1e-12). The solver must keep reproducing them.

use approx::assert_relative_eq;
use zite_core::{
    assemble, assemble_with, build_disk_basis, build_square_basis, convergence_study, solve,
    AssemblyOptions, Conductivity, DomainKind, KType, RefractiveIndex, Spectrum,
};

const PIN_TOL: f64 = 1e-9;

fn disk_spectrum(n: &RefractiveIndex, eta: &Conductivity) -> Spectrum {
    let basis = build_disk_basis(5, 4, false).unwrap();
    solve(&assemble(&basis, n, eta).unwrap()).unwrap()
}

fn assert_real_prefix(spectrum: &Spectrum, want: &[f64]) {
    assert!(spectrum.real.len() >= want.len());
    for (pair, &k) in spectrum.real.iter().zip(want.iter()) {
        assert_relative_eq!(pair.k, k, max_relative = PIN_TOL);
    }
}

#[test]
fn disk_constant_n4_eta25() {
    let spec = disk_spectrum(
        &RefractiveIndex::constant(4.0).unwrap(),
        &Conductivity::constant(25.0).unwrap(),
    );
    assert_real_prefix(
        &spec,
        &[1.25192502527, 1.99248157756, 2.66785309259, 2.87859297228],
    );
}

#[test]
fn disk_constant_n4_eta01_real_and_imaginary() {
    let spec = disk_spectrum(
        &RefractiveIndex::constant(4.0).unwrap(),
        &Conductivity::constant(0.1).unwrap(),
    );
    assert_real_prefix(
        &spec,
        &[2.00233305949, 2.68333698632, 3.32987955984, 3.69371053046],
    );
    let want_imag = [
        0.238676236934,
        0.351375436523,
        0.446594992776,
        0.533508967481,
    ];
    assert!(spec.imaginary.len() >= want_imag.len());
    for (pair, &k) in spec.imaginary.iter().zip(want_imag.iter()) {
        assert_relative_eq!(pair.k, k, max_relative = PIN_TOL);
    }
}

#[test]
fn disk_constant_n4_eta10() {
    let spec = disk_spectrum(
        &RefractiveIndex::constant(4.0).unwrap(),
        &Conductivity::constant(10.0).unwrap(),
    );
    assert_real_prefix(
        &spec,
        &[1.33038117271, 2.10307988771, 2.80105722243, 3.07068000662],
    );
}

#[test]
fn disk_exp_bump_eta25_eta01_and_angular() {
    let n1 = RefractiveIndex::radial_exp_bump(4.0, 1.0).unwrap();
    let spec = disk_spectrum(&n1, &Conductivity::constant(25.0).unwrap());
    assert_real_prefix(&spec, &[1.13937167799, 1.82898895186, 2.46218275501]);

    let spec = disk_spectrum(&n1, &Conductivity::constant(0.1).unwrap());
    assert_real_prefix(&spec, &[1.83076806979, 2.45626012089, 3.0575386333]);

    let eta_var = Conductivity::inverse_angular(10.0, 1.0).unwrap();
    let spec = disk_spectrum(&n1, &eta_var);
    assert_real_prefix(&spec, &[1.8313690667, 2.45673425512, 3.05774868978]);
}

#[test]
fn disk_piecewise_with_panel_split() {
    let n2 = RefractiveIndex::piecewise_radial(0.25, 2.0, 4.0).unwrap();
    let spec = disk_spectrum(&n2, &Conductivity::constant(25.0).unwrap());
    assert_real_prefix(&spec, &[1.33438702227, 2.01851243501, 2.67577408789]);

    let spec = disk_spectrum(&n2, &Conductivity::constant(0.1).unwrap());
    assert_real_prefix(&spec, &[2.20372868774, 2.77325234385, 3.36726393276]);

    let eta_var = Conductivity::inverse_angular(10.0, 1.0).unwrap();
    let spec = disk_spectrum(&n2, &eta_var);
    assert_relative_eq!(spec.real[0].k, 2.20438479766, max_relative = PIN_TOL);
}

#[test]
fn disk_piecewise_single_panel_without_split() {
    // A deliberately coarse radial rule that ignores the jump: one 12-point
    // panel across [0, 1].
    let n2 = RefractiveIndex::piecewise_radial(0.25, 2.0, 4.0).unwrap();
    let basis = build_disk_basis(5, 4, false).unwrap();
    let options = AssemblyOptions {
        radial_panels: Some(1),
        split_at_radius: false,
        ..AssemblyOptions::default()
    };
    let system = assemble_with(
        &basis,
        &n2,
        &Conductivity::constant(25.0).unwrap(),
        &options,
    )
    .unwrap();
    let spec = solve(&system).unwrap();
    assert_relative_eq!(spec.real[0].k, 1.33697297189, max_relative = PIN_TOL);
}

#[test]
fn disk_constant_n4_with_angular_conductivities() {
    let n = RefractiveIndex::constant(4.0).unwrap();
    let spec = disk_spectrum(&n, &Conductivity::inverse_angular(10.0, 1.0).unwrap());
    assert_relative_eq!(spec.real[0].k, 2.00295971105, max_relative = PIN_TOL);

    let spec = disk_spectrum(&n, &Conductivity::scaled_angular(25.0, 1.0).unwrap());
    assert_relative_eq!(spec.real[0].k, 1.2233866768, max_relative = PIN_TOL);
}

#[test]
fn first_eigenvector_is_radially_dominated() {
    // Constant coefficients keep angular orders uncoupled: the first
    // eigenvector lives entirely on the p = 0 modes.
    let spec = disk_spectrum(
        &RefractiveIndex::constant(4.0).unwrap(),
        &Conductivity::constant(25.0).unwrap(),
    );
    let omega = &spec.real[0].omega;
    let want = [0.999959507, 0.008749365, -0.001968490, 0.000746620];
    for (i, &w) in want.iter().enumerate() {
        assert!(
            (omega[i] - w).abs() <= 1e-6,
            "coefficient {i}: {} vs {w}",
            omega[i]
        );
    }
    for i in want.len()..omega.len() {
        assert!(
            omega[i].abs() <= 1e-9,
            "p > 0 coefficient {i}: {}",
            omega[i]
        );
    }
}

#[test]
fn residuals_stay_below_1e8() {
    let systems = [
        (
            RefractiveIndex::piecewise_radial(0.25, 2.0, 4.0).unwrap(),
            Conductivity::inverse_angular(10.0, 1.0).unwrap(),
        ),
        (
            RefractiveIndex::radial_exp_bump(4.0, 1.0).unwrap(),
            Conductivity::constant(0.1).unwrap(),
        ),
    ];
    let basis = build_disk_basis(5, 4, false).unwrap();
    for (n, eta) in &systems {
        let system = assemble(&basis, n, eta).unwrap();
        let spec = solve(&system).unwrap();
        for pair in &spec.real {
            assert!(system.residual(pair.k, KType::Real, &pair.omega) <= 1e-8);
        }
        for pair in &spec.imaginary {
            assert!(system.residual(pair.k, KType::Imaginary, &pair.omega) <= 1e-8);
        }
    }
}

#[test]
fn k1_decreases_with_eta_and_with_n() {
    let n4 = RefractiveIndex::constant(4.0).unwrap();
    let k = |n: &RefractiveIndex, eta: f64| {
        disk_spectrum(n, &Conductivity::constant(eta).unwrap()).real[0].k
    };
    assert!(k(&n4, 0.1) > k(&n4, 10.0));
    assert!(k(&n4, 10.0) > k(&n4, 25.0));
    let k3 = k(&RefractiveIndex::constant(3.0).unwrap(), 25.0);
    let k5 = k(&RefractiveIndex::constant(5.0).unwrap(), 25.0);
    assert!(k3 > k(&n4, 25.0));
    assert!(k(&n4, 25.0) > k5);
}

#[test]
fn square_constant_n4_over_eta_sweep() {
    let basis = build_square_basis(5, 5).unwrap();
    let n = RefractiveIndex::constant(4.0).unwrap();
    let want = [
        (1.0, 3.74326063175),
        (10.0, 2.71967162111),
        (100.0, 2.26665223128),
        (1000.0, 2.2258922507),
    ];
    for &(eta, k1) in &want {
        let spec =
            solve(&assemble(&basis, &n, &Conductivity::constant(eta).unwrap()).unwrap()).unwrap();
        assert_relative_eq!(spec.real[0].k, k1, max_relative = PIN_TOL);
    }
}

#[test]
fn square_separable_n_over_eta_sweep() {
    let basis = build_square_basis(5, 5).unwrap();
    let n = RefractiveIndex::SeparablePoly;
    let want = [
        (1.0, 3.49560965412),
        (10.0, 2.54511131648),
        (100.0, 2.11521030179),
        (1000.0, 2.07652952189),
    ];
    for &(eta, k1) in &want {
        let spec =
            solve(&assemble(&basis, &n, &Conductivity::constant(eta).unwrap()).unwrap()).unwrap();
        assert_relative_eq!(spec.real[0].k, k1, max_relative = PIN_TOL);
    }
}

#[test]
fn bylambda_refinement_reproduces_sweep() {
    let table = convergence_study(
        DomainKind::UnitDisk,
        &RefractiveIndex::constant(4.0).unwrap(),
        &Conductivity::constant(25.0).unwrap(),
        &[8, 16, 24, 36, 48],
    )
    .unwrap();
    let want_k1 = [
        1.25249563072,
        1.25211785418,
        1.25192502527,
        1.2518076557,
        1.25172860035,
    ];
    let want_err = [7.670304e-4, 3.892538e-4, 1.964249e-4, 7.905535e-5, 0.0];
    assert_eq!(table.rows.len(), 5);
    for ((row, &k1), &err) in table.rows.iter().zip(want_k1.iter()).zip(want_err.iter()) {
        assert_relative_eq!(row.k1, k1, max_relative = PIN_TOL);
        if err > 0.0 {
            assert_relative_eq!(row.error, err, max_relative = 1e-4);
        } else {
            assert_eq!(row.error, 0.0);
        }
    }
    // Errors decrease monotonically and the log-log fit is negative.
    for w in table.rows.windows(2) {
        assert!(w[1].error < w[0].error);
    }
    assert!(
        (table.slope + 1.4837).abs() < 0.01,
        "slope {} vs -1.4837",
        table.slope
    );
}
