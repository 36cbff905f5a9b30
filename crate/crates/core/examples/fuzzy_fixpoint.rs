//! Stratified fuzzy evaluation.
//!
//! ```bash
//! cargo run --example fuzzy_fixpoint
//! ```

use mvdatalog::engine::{self, EvalOrder};
use mvdatalog::{lang, Mode};

fn main() -> mvdatalog::Result<()> {
    let program = lang::parse_program(include_str!("../data/negation.mvd"))?;

    let strat = engine::stratify(&program);
    println!("stratified order: {}", strat.order);

    let report = engine::fixpoint(&program, Mode::Nondet, None, 100)?;
    println!("converged after {} steps:", report.iterations);
    print!("{}", report.interpretation);

    // Evaluating the negation first changes the answer.
    let bad = EvalOrder::from_sequence(&[3, 2, 1], program.rules.len())?;
    let other = engine::fixpoint(&program, Mode::Nondet, Some(&bad), 100)?;
    println!("\nwith order {bad}:");
    print!("{}", other.interpretation);
    match engine::is_model(&program, &other.interpretation) {
        Ok(()) => println!("still a model"),
        Err(v) => println!("{} rule instance(s) violated", v.len()),
    }
    Ok(())
}
