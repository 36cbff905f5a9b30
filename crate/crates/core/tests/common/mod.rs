#![allow(dead_code)]

use std::path::PathBuf;

use mvdatalog::kb::{parse_phi, parse_proximity, BackgroundKnowledge, KnowledgeBase, PhiId, PhiSpec};
use mvdatalog::kb::{ProximityDomain, ProximityRelation};
use mvdatalog::lang::{parse_program, Program};
use mvdatalog::{ImplicationId, TruthValue, ValueSystem};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

#[allow(unused_imports)]
pub use rand::SeedableRng;

pub type TestRng = ChaCha8Rng;

pub const CONSTANTS: [&str; 4] = ["a", "b", "c", "d"];

/// `(name, arity)`; `e*` only ever appear as facts.
pub const EDB: [(&str, usize); 2] = [("e0", 1), ("e1", 2)];
pub const IDB: [(&str, usize); 3] = [("q0", 1), ("q1", 2), ("q2", 2)];

pub fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

pub fn read(name: &str) -> String {
    std::fs::read_to_string(data(name)).unwrap()
}

pub fn program(name: &str) -> Program {
    parse_program(&read(name)).unwrap()
}

/// Loads `<stem>.mvd` with its `.prox` and `.phi` companions.
pub fn knowledge_base(stem: &str) -> KnowledgeBase {
    let p = program(&format!("{stem}.mvd"));
    let bk = parse_proximity(&read(&format!("{stem}.prox")), p.system).unwrap();
    let phi = parse_phi(&read(&format!("{stem}.phi"))).unwrap();
    KnowledgeBase::new(p, bk, phi).unwrap()
}

pub fn atom(text: &str) -> mvdatalog::Atom {
    mvdatalog::lang::parse_atom(text).unwrap()
}

/// Every value of `sys` on a grid of `1/steps`, inputs only.
pub fn grid(sys: ValueSystem, steps: usize) -> Vec<TruthValue> {
    let v = |i: usize| i as f64 / steps as f64;
    let all: Vec<TruthValue> = if sys.is_pair() {
        (0..=steps)
            .flat_map(|i| (0..=steps).map(move |j| TruthValue::Pair(v(i), v(j))))
            .collect()
    } else {
        (0..=steps).map(|i| TruthValue::Scalar(v(i))).collect()
    };
    all.into_iter().filter(|x| sys.validate_input(x).is_ok()).collect()
}

/// A valid input level strictly above bottom, on a 0.05 grid.
pub fn level(rng: &mut TestRng, sys: ValueSystem) -> TruthValue {
    loop {
        let mut c = || rng.gen_range(0..=20) as f64 / 20.0;
        let v = if sys.is_pair() {
            TruthValue::Pair(c(), c())
        } else {
            TruthValue::Scalar(c())
        };
        if sys.validate_input(&v).is_ok() && !sys.is_bottom(&v) {
            return v;
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct GenOptions {
    pub negation: bool,
    pub max_rules: usize,
    /// Restrict rule operators; `None` draws from every compatible id.
    pub implications: Option<&'static [ImplicationId]>,
}

impl Default for GenOptions {
    fn default() -> Self {
        GenOptions {
            negation: false,
            max_rules: 5,
            implications: None,
        }
    }
}

fn term(rng: &mut TestRng, vars: &[&str]) -> String {
    if rng.gen_bool(0.15) {
        CONSTANTS.choose(rng).unwrap().to_string()
    } else {
        vars.choose(rng).unwrap().to_string()
    }
}

fn args(items: &[String]) -> String {
    format!("({})", items.join(", "))
}

/// Program text over the fixed signature. Negative literals only name
/// predicates of lower rank, so every generated program is stratifiable.
pub fn program_text(rng: &mut TestRng, sys: ValueSystem, opts: GenOptions) -> String {
    let mut out = format!("%system {}.\n", sys.tag());
    for _ in 0..rng.gen_range(2..=6) {
        let (p, n) = if rng.gen_bool(0.85) {
            *EDB.choose(rng).unwrap()
        } else {
            *IDB.choose(rng).unwrap()
        };
        let cs: Vec<String> = (0..n).map(|_| CONSTANTS.choose(rng).unwrap().to_string()).collect();
        out += &format!("fact {p}{} = {}.\n", args(&cs), level(rng, sys));
    }
    let ids = match opts.implications {
        Some(ids) => ids.to_vec(),
        None => ImplicationId::for_system(sys),
    };
    for _ in 0..rng.gen_range(1..=opts.max_rules) {
        let rank = rng.gen_range(0..IDB.len());
        let (head, head_arity) = IDB[rank];
        let usable: Vec<(&str, usize)> = EDB.iter().chain(&IDB[..=rank]).copied().collect();
        let mut body = Vec::new();
        let mut bound: Vec<String> = Vec::new();
        for _ in 0..rng.gen_range(1..=2) {
            let (p, n) = *usable.choose(rng).unwrap();
            let ts: Vec<String> = (0..n).map(|_| term(rng, &["X", "Y", "Z"])).collect();
            bound.extend(ts.iter().filter(|t| t.starts_with(char::is_uppercase)).cloned());
            body.push(format!("{p}{}", args(&ts)));
        }
        bound.sort();
        bound.dedup();
        if opts.negation && !bound.is_empty() && rng.gen_bool(0.4) {
            let lower: Vec<(&str, usize)> = EDB.iter().chain(&IDB[..rank]).copied().collect();
            let (p, n) = *lower.choose(rng).unwrap();
            let vars: Vec<&str> = bound.iter().map(String::as_str).collect();
            let ts: Vec<String> = (0..n).map(|_| term(rng, &vars)).collect();
            body.push(format!("not {p}{}", args(&ts)));
        }
        let head_args: Vec<String> = (0..head_arity)
            .map(|_| match bound.choose(rng) {
                Some(v) if rng.gen_bool(0.9) => v.clone(),
                _ => CONSTANTS.choose(rng).unwrap().to_string(),
            })
            .collect();
        let id = ids.choose(rng).unwrap();
        out += &format!(
            "rule {head}{} <- {} : {id}, {}.\n",
            args(&head_args),
            body.join(", "),
            level(rng, sys)
        );
    }
    out
}

pub fn random_program(rng: &mut TestRng, sys: ValueSystem, opts: GenOptions) -> Program {
    let text = program_text(rng, sys, opts);
    parse_program(&text).unwrap_or_else(|e| panic!("generated program rejected: {e}\n{text}"))
}

/// A symmetric proximity relation on a few of `symbols`.
pub fn random_relation(
    rng: &mut TestRng,
    sys: ValueSystem,
    domain: ProximityDomain,
    symbols: &[&str],
) -> ProximityRelation {
    let mut rel = ProximityRelation::new(domain, sys);
    for i in 0..symbols.len() {
        for j in i + 1..symbols.len() {
            if rng.gen_bool(0.3) {
                rel.insert(symbols[i], symbols[j], level(rng, sys));
            }
        }
    }
    rel
}

/// Background knowledge over the generator's signature, only relating predicates of equal arity.
pub fn random_bk(rng: &mut TestRng, sys: ValueSystem) -> BackgroundKnowledge {
    BackgroundKnowledge {
        terms: random_relation(rng, sys, ProximityDomain::Terms, &CONSTANTS),
        predicates: random_relation(rng, sys, ProximityDomain::Predicates, &["e1", "q1", "q2"]),
    }
}

pub fn random_phi(rng: &mut TestRng, sys: ValueSystem) -> PhiSpec {
    let mut spec = PhiSpec::new();
    let choices: &[PhiId] = if sys == ValueSystem::Ivs {
        &[PhiId::Meet, PhiId::MeetProduct, PhiId::Product]
    } else {
        &[PhiId::Meet, PhiId::MeetProduct]
    };
    for (p, n) in EDB.iter().chain(&IDB) {
        spec.set(p, *n, *choices.choose(rng).unwrap());
    }
    spec
}
