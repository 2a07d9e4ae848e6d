//! Minimal end-to-end use of the library: assemble the disk problem with
//! constant coefficients and print the first real eigenvalue.

use zite_core::{
    assemble, build_disk_basis, solve, Conductivity, CoreError, Domain, RefractiveIndex,
};

fn main() -> Result<(), CoreError> {
    // p <= 4, q <= 4, cosine family only: 20 basis functions.
    let basis = build_disk_basis(4, 4, false)?.with_domain(Domain::unit_disk())?;
    let n = RefractiveIndex::constant(4.0)?;
    let eta = Conductivity::constant(25.0)?;
    let system = assemble(&basis, &n, &eta)?;
    let spectrum = solve(&system)?;
    println!("k1 = {}", spectrum.real[0].k); // 1.25192502527
    Ok(())
}
