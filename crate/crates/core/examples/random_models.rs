// Seeded random models checked against the brute-force oracle.

use kontext::calculus::interference_lambda;
use kontext::error::Result;
use kontext::model::Model;
use kontext::oracle::oracle;
use kontext::random::{double_stochastic_model, random_events, random_model};
use num_rational::BigRational;

pub fn run_example() -> Result<usize> {
    let file = random_model(8, 2, 2, 42)?;
    let model: Model<BigRational> = file.build()?;
    let (a, b) = (model.variable("a")?, model.variable("b")?);
    let mut agree = 0;
    for c in random_events(model.space.len(), 20, 7) {
        let Some(o) = oracle(model.space.weights(), a.values(), b.values(), c.mask()) else { continue };
        let p = interference_lambda(&model.space, a, b, &c)?;
        let same = p.delta == o.delta && p.lambda.iter().zip(&o.lambda_square).all(|(l, s)| l.square() == s.as_ref());
        agree += usize::from(same);
        println!("{:<28} lambda {:?}  oracle agrees: {same}", model.describe(&c), p.lambda_values());
    }

    let ds: Model<BigRational> = double_stochastic_model(3).build()?;
    println!("{}: weights {:?}", ds.title.as_deref().unwrap_or(""), ds.space.weights().iter().map(|w| w.to_string()).collect::<Vec<_>>());
    Ok(agree)
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example().map(|_| ())
}
