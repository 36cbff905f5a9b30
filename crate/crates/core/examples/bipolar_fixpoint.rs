//! Bipolar evaluation with a pair of fuzzy implications per rule.
//!
//! ```bash
//! cargo run --example bipolar_fixpoint
//! ```

use mvdatalog::implications::{closure_check, CLOSED_BIPOLAR_PAIRS};
use mvdatalog::{engine, lang, Mode, TruthValue};

fn main() -> mvdatalog::Result<()> {
    let program = lang::parse_program(include_str!("../data/paths_bipolar.mvd"))?;
    for (i, rule) in program.rules.iter().enumerate() {
        println!("rule {}: {} at {}", i + 1, rule.implication, rule.level);
    }

    let report = engine::fixpoint(&program, Mode::Nondet, None, 100)?;
    print!("{}", report.interpretation);
    for d in &report.diagnostics {
        println!("note: {d}");
    }

    println!("\noperator pairs known to keep levels in range:");
    for (a, b) in CLOSED_BIPOLAR_PAIRS {
        println!("  ({}, {})", a.name(), b.name());
    }
    let (alpha, beta) = (TruthValue::pair(0.6, 0.2), TruthValue::pair(0.75, 0.2));
    for rule in &program.rules {
        println!("{}: {}", rule.implication, closure_check(rule.implication, &alpha, &beta));
    }
    Ok(())
}
