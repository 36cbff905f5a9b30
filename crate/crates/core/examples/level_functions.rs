//! Head levels of single rules, checked against a brute-force search.
//!
//! The level function gives the least head value that makes a rule true.
//! The oracle finds the same value by scanning candidate heads on a grid.
//!
//! ```bash
//! cargo run --release --example level_functions
//! ```

use mvdatalog::implications::{apply_implication, level_fn, oracle_level_fn};
use mvdatalog::{ImplicationId, TruthValue, ValueSystem};

fn main() -> mvdatalog::Result<()> {
    let cases = [
        (ValueSystem::Fuzzy, TruthValue::Scalar(0.6), TruthValue::Scalar(0.75)),
        (ValueSystem::Ifs, TruthValue::pair(0.5, 0.3), TruthValue::pair(0.7, 0.2)),
        (ValueSystem::Ivs, TruthValue::pair(0.42, 0.56), TruthValue::pair(0.7, 0.9)),
    ];
    for (sys, alpha, beta) in cases {
        println!("{sys}: body {alpha}, rule level {beta}");
        for id in ImplicationId::for_system(sys) {
            let exact = level_fn(id, sys, &alpha, &beta)?;
            let scanned = oracle_level_fn(id, sys, &alpha, &beta, 0.01)?;
            let check = apply_implication(id, sys, &alpha, &exact.value)?;
            println!(
                "  {:12} level {:12} oracle {:12} I(body, level) = {check}{}",
                id.to_string(),
                exact.value.to_string(),
                scanned.to_string(),
                if exact.closure_ok { "" } else { "  (outside the system)" }
            );
        }
    }
    Ok(())
}
