// Classify every context of a model and look at what the trigonometric ones reach.

use kontext::error::Result;
use kontext::fixtures;
use kontext::report::{census, Census, Format, Render};

pub fn run_example() -> Result<Census> {
    let h = fixtures::h6();
    let c = census(&h.space, &h.a, &h.b, None)?;
    print!("{}", c.render(Format::Text));
    Ok(c)
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example().map(|_| ())
}
