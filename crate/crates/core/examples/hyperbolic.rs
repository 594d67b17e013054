// Split-complex amplitudes for a context whose coefficients exceed one.

use kontext::error::Result;
use kontext::fixtures;
use kontext::hyperbolic::{represent_hyperbolic, HyperbolicState};
use num_rational::BigRational;

pub fn run_example() -> Result<HyperbolicState<BigRational>> {
    let h = fixtures::h6();
    let state = represent_hyperbolic(&h.space, &h.a, &h.b, &h.context("C_hyp"))?;
    println!("lambda = {:?}", state.profile.lambda_values());
    for x in 0..2 {
        let z = state.amplitudes[x];
        println!(
            "b_{}: sign {} theta {:.12}  z = {z}  z conj(z) = {:.12}  p = {}",
            x + 1,
            state.sign[x],
            state.theta[x],
            z.split_modulus(),
            state.profile.pb[x]
        );
    }
    println!("theta = ln 3: {}", (state.theta[0] - 3f64.ln()).abs() < 1e-12);
    Ok(state)
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example().map(|_| ())
}
