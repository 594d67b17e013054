// The analysis report behind `kontext analyze`, rendered three ways.

use kontext::error::Result;
use kontext::fixtures;
use kontext::hilbert::Branch;
use kontext::model::{Model, ModelFile};
use kontext::report::{analyze, Format, Render};
use num_rational::BigRational;

pub fn run_example() -> Result<serde_json::Value> {
    let model: Model<BigRational> = ModelFile::from_json(fixtures::U4_JSON)?.build()?;
    let report = analyze(&model, "a", "b", &[], Branch::Plus, None)?;
    print!("{}", report.render(Format::Text));
    print!("{}", report.render(Format::Csv));
    let json = report.json();
    println!("{}", json["contexts"][0]["lambda"]);
    Ok(json)
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example().map(|_| ())
}
