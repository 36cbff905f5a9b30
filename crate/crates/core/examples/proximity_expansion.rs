//! How a single fact spreads to neighbouring predicates and constants.
//!
//! ```bash
//! cargo run --example proximity_expansion
//! ```

use mvdatalog::kb::{phi_apply, BackgroundKnowledge, KnowledgeBase, PhiId, PhiSpec, ProximityDomain, ProximityRelation};
use mvdatalog::{lang, Atom, TruthValue, ValueSystem};

fn main() -> mvdatalog::Result<()> {
    let sys = ValueSystem::Ifs;
    let bk = BackgroundKnowledge {
        terms: ProximityRelation::new(ProximityDomain::Terms, sys).with("a", "b", TruthValue::pair(0.7, 0.2)),
        predicates: ProximityRelation::new(ProximityDomain::Predicates, sys).with("r", "s", TruthValue::pair(0.6, 0.3)),
    };
    let near: Vec<String> = bk.terms.proximity_set("a").iter().map(|(d, v)| format!("{d} at {v}")).collect();
    println!("terms close to a: {}", near.join(", "));
    println!("similarity (transitive)? {}", bk.terms.is_similarity());

    let alpha = TruthValue::pair(0.8, 0.1);
    let lambda = bk.predicates.get("r", "s");
    let lambda1 = bk.terms.get("a", "b");
    for phi in [PhiId::Meet, PhiId::MeetProduct] {
        println!("{phi}: s(b) = {}", phi_apply(sys, phi, &alpha, &lambda, &[lambda1])?);
    }

    let program = lang::parse_program(include_str!("../data/neighbours.mvd"))?;
    let kb = KnowledgeBase::new(program, bk, PhiSpec::new())?;
    println!("\nexpansions of r(a) = {alpha}:");
    for (atom, v) in kb.expand(&Atom::ground("r", &["a"]), &alpha) {
        println!("  {atom} = {v}");
    }
    Ok(())
}
