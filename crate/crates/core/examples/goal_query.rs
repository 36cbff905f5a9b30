//! Answering a goal from only the facts it can reach.
//!
//! ```bash
//! cargo run --example goal_query
//! ```

use mvdatalog::kb::{self, parse_phi, parse_proximity, KnowledgeBase};
use mvdatalog::query::{answer, Goal, QueryLimits};
use mvdatalog::lang;

fn main() -> mvdatalog::Result<()> {
    let program = lang::parse_program(include_str!("../data/likes.mvd"))?;
    let bk = parse_proximity(include_str!("../data/likes.prox"), program.system)?;
    let phi = parse_phi(include_str!("../data/likes.phi"))?;
    let kb = KnowledgeBase::new(program, bk, phi)?;

    let goal = Goal::parse("li('M', X)", None, &kb)?;
    let found = answer(&kb, &goal, QueryLimits::default())?;
    print!("search tree:\n{}", found.tree);
    println!("starting facts:");
    for (a, v) in &found.starting_facts {
        println!("  {a} = {v}");
    }
    println!("answers:");
    let full = kb::consequence(&kb, 100)?.interpretation;
    for (a, v) in &found.atoms {
        println!("  {a} = {v} (full consequence: {})", full.value(a));
    }

    let strict = Goal::parse("li('M', 'V')", Some("(0.9, 0.9)"), &kb)?;
    println!("at least (0.9, 0.9): {} answers", answer(&kb, &strict, QueryLimits::default())?.atoms.len());
    Ok(())
}
