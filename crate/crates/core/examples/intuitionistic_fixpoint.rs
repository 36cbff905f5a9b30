//! Transitive closure over intuitionistic levels, then the same facts seen as intervals.
//!
//! ```bash
//! cargo run --example intuitionistic_fixpoint
//! ```

use mvdatalog::values::ifs_to_ivs;
use mvdatalog::{engine, lang, Mode};

fn main() -> mvdatalog::Result<()> {
    let program = lang::parse_program(include_str!("../data/paths_ifs.mvd"))?;
    let det = engine::fixpoint(&program, Mode::Det, None, 100)?;
    let nondet = engine::fixpoint(&program, Mode::Nondet, None, 100)?;
    assert!(det.interpretation.approx_eq(&nondet.interpretation, 1e-9));

    println!("{} atoms, det took {} steps, nondet {}", det.interpretation.len(), det.iterations, nondet.iterations);
    for (atom, v) in det.interpretation.iter() {
        println!("{atom:8} ifs {v:12} ivs {}", ifs_to_ivs(v)?);
    }
    Ok(())
}
