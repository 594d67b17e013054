// Complex amplitudes of trigonometric contexts and the Born rule for `b`.

use kontext::error::Result;
use kontext::fixtures;
use kontext::hilbert::{represent, Branch, PhaseConvention};

pub fn run_example() -> Result<[f64; 2]> {
    let u = fixtures::u4();
    let c = u.context("C1");
    let plus = represent(&u.space, &u.a, &u.b, &c, Branch::Plus, PhaseConvention::Canonical)?;
    let minus = represent(&u.space, &u.a, &u.b, &c, Branch::Minus, PhaseConvention::Canonical)?;
    println!("theta = {:?}", plus.phases.theta);
    for (x, z) in plus.state.amplitudes.iter().enumerate() {
        println!("phi(b_{}) = {z:.6}   |phi|^2 = {:.12}", x + 1, z.norm_sqr());
    }
    println!("minus branch is the conjugate: {}", minus.state == plus.state.conj());
    println!("born residual {:e}", plus.born_b_residual());

    // A selection context collapses onto a basis vector.
    let b1 = represent(&u.space, &u.a, &u.b, &u.event(&["w1", "w3"]), Branch::Plus, PhaseConvention::Canonical)?;
    println!("J(B_1) = {:?}", b1.state.probabilities());
    Ok(plus.state.probabilities())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example().map(|_| ())
}
