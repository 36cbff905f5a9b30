//! Loading a program with proximity tables and combination functions from files.
//!
//! ```bash
//! cargo run --example knowledge_base
//! ```

use mvdatalog::kb::{self, parse_phi, parse_proximity, KnowledgeBase};
use mvdatalog::{engine, lang, Mode};

fn main() -> mvdatalog::Result<()> {
    let program = lang::parse_program(include_str!("../data/likes.mvd"))?;
    let bk = parse_proximity(include_str!("../data/likes.prox"), program.system)?;
    let phi = parse_phi(include_str!("../data/likes.phi"))?;

    let plain = engine::fixpoint(&program, Mode::Det, None, 100)?;
    println!("without background knowledge: {} atoms", plain.interpretation.len());

    let kb = KnowledgeBase::new(program, bk, phi)?;
    println!("universe: {:?}", kb.universe());
    let report = kb::consequence(&kb, 100)?;
    println!("consequence after {} steps:", report.iterations);
    print!("{}", report.interpretation);
    assert!(plain.interpretation.leq(&report.interpretation));
    Ok(())
}
