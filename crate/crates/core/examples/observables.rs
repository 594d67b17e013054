// The basis of `a`, self-adjoint operators, their commutator and expectations.

use kontext::error::Result;
use kontext::fixtures;
use kontext::hilbert::{
    build_a_basis, commutator, expectation, operator_a, operator_b, represent, Branch, PhaseConvention,
};
use nalgebra::Matrix2;
use num_complex::Complex64;

pub fn run_example() -> Result<Matrix2<Complex64>> {
    let h = fixtures::h6();
    let basis = build_a_basis(&h.space, &h.a, &h.b, &h.space.whole(), Branch::Plus)?;
    println!("q = {:?}, unitarity defect {:e}", basis.q, basis.unitarity_defect());

    let a_hat = operator_a(&h.a, &basis)?;
    let b_hat = operator_b(&h.b)?;
    println!("a_hat = {}", a_hat.matrix);
    println!("self-adjoint: {}, eigenvalues {:?}", a_hat.is_self_adjoint(1e-12), a_hat.eigenvalues());
    let m = commutator(&b_hat, &a_hat);
    println!("[b_hat, a_hat] = {m}");

    let state = represent(&h.space, &h.a, &h.b, &h.space.whole(), Branch::Plus, PhaseConvention::Canonical)?;
    println!("E(a|Omega) = {:.12}", expectation(&a_hat, &state.state)?);
    println!("E(b|Omega) = {:.12}", expectation(&b_hat, &state.state)?);
    Ok(m)
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example().map(|_| ())
}
