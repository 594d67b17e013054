// Amplitudes for a three-valued pair, built by splitting off one level set at a time.

use kontext::error::Result;
use kontext::fixtures;
use kontext::hilbert::Branch;
use kontext::multivalued::{interference_expansion, represent_multivalued};
use num_complex::Complex64;

pub fn run_example() -> Result<Vec<Complex64>> {
    let u = fixtures::u9();
    let c = u.event(&["w1", "w4", "w5", "w9"]);
    let m = represent_multivalued(&u.space, &u.a, &u.b, &c, Branch::Plus)?;
    for t in &m.traces {
        println!("b = {}", t.outcome);
        for s in &t.steps {
            println!(
                "  step {} {:?}: T = {}  coefficient {:.6}  gamma {:.6}  alpha {:.6}  beta {:.6}",
                s.j,
                s.kind,
                s.tail,
                s.coefficient.as_f64(),
                s.gamma,
                s.alpha,
                s.beta
            );
        }
        println!("  phi = {:.6}  |phi|^2 = {:.12}  p = {}", t.amplitude(), t.amplitude().norm_sqr(), t.probability());
    }
    println!("born residual {:e}", m.born_residual());
    println!("expansion residual {:e}", interference_expansion(&m, &m.profile));
    Ok(m.amplitudes.clone())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example().map(|_| ())
}
