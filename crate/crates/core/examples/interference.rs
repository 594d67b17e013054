// Interference coefficients and context classes on the uniform four-point model.

use kontext::calculus::{interference_lambda, transition_matrix, ContextClass};
use kontext::error::Result;
use kontext::fixtures;

pub fn run_example() -> Result<Vec<(String, ContextClass, Vec<f64>)>> {
    let u = fixtures::u4();
    let t = transition_matrix(&u.space, &u.a, &u.b)?;
    println!("P^{{b|a}} = {:?}, double stochastic: {}", t.to_f64(), t.is_double_stochastic()?);

    let mut rows = Vec::new();
    for (name, c) in [("Omega", u.space.whole()), ("C1", u.context("C1")), ("B_1", u.event(&["w1", "w3"]))] {
        let p = interference_lambda(&u.space, &u.a, &u.b, &c)?;
        println!(
            "{name:6} pb = {:?}  delta = {:?}  lambda = {:?}  {}",
            p.pb.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            p.delta.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            p.lambda_values(),
            p.class
        );
        rows.push((name.to_string(), p.class, p.lambda_values()));
    }
    Ok(rows)
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example().map(|_| ())
}
