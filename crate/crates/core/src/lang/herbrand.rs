use std::collections::{BTreeMap, BTreeSet};
use std::ops::Range;

use super::{Atom, Fact, Literal, Program, Rule, Term};
use crate::implications::ImplicationId;
use crate::values::{TruthValue, ValueSystem};

/// A variable-free instance of a program rule.
#[derive(Debug, Clone, PartialEq)]
pub struct GroundRule {
    /// Position of the source rule in `Program::rules`.
    pub rule_index: usize,
    pub head: Atom,
    pub body: Vec<GroundLiteral>,
    pub implication: ImplicationId,
    pub level: TruthValue,
}

pub type GroundLiteral = Literal;

#[derive(Debug, Clone, PartialEq)]
pub struct GroundProgram {
    pub system: ValueSystem,
    pub facts: Vec<Fact>,
    pub rules: Vec<GroundRule>,
    /// Instances of source rule `i` are `rules[ranges[i].clone()]`.
    pub ranges: Vec<Range<usize>>,
}

impl GroundProgram {
    pub fn instances(&self, rule_index: usize) -> &[GroundRule] {
        &self.rules[self.ranges[rule_index].clone()]
    }
}

/// Herbrand universe and base of `program`, with `extra_constants` added to the universe.
pub fn herbrand(
    program: &Program,
    extra_constants: &BTreeSet<String>,
) -> (BTreeSet<String>, BTreeSet<Atom>) {
    let mut universe = program.constants();
    universe.extend(extra_constants.iter().cloned());
    let base = base_over(&program.arities(), &universe);
    (universe, base)
}

/// Every ground atom over the given predicates and constants.
pub fn base_over(arities: &BTreeMap<String, usize>, universe: &BTreeSet<String>) -> BTreeSet<Atom> {
    let constants: Vec<&String> = universe.iter().collect();
    let mut base = BTreeSet::new();
    for (p, &n) in arities {
        for tuple in tuples(constants.len(), n) {
            let args = tuple.iter().map(|&i| Term::Constant(constants[i].clone())).collect();
            base.insert(Atom::new(p, args));
        }
    }
    base
}

/// All index tuples of length `n` over `0..size`, lexicographically.
fn tuples(size: usize, n: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = if n == 0 { 1 } else { size.checked_pow(n as u32).unwrap_or(usize::MAX) };
    let mut current = vec![0usize; n];
    let mut produced = 0usize;
    let empty = n > 0 && size == 0;
    std::iter::from_fn(move || {
        if empty || produced >= total {
            return None;
        }
        let out = current.clone();
        produced += 1;
        for slot in (0..n).rev() {
            current[slot] += 1;
            if current[slot] < size {
                break;
            }
            current[slot] = 0;
        }
        Some(out)
    })
}

/// Instantiates every rule over `universe`, preserving rule order.
///
/// Variables are ordered by first occurrence (head, then body) and instances
/// enumerate substitutions lexicographically with the first variable most
/// significant.
pub fn ground(program: &Program, universe: &BTreeSet<String>) -> GroundProgram {
    let constants: Vec<&String> = universe.iter().collect();
    let mut rules = Vec::new();
    let mut ranges = Vec::with_capacity(program.rules.len());
    for (index, rule) in program.rules.iter().enumerate() {
        let start = rules.len();
        let vars = rule.variables();
        for tuple in tuples(constants.len(), vars.len()) {
            let subst: BTreeMap<&str, &String> = vars
                .iter()
                .map(String::as_str)
                .zip(tuple.iter().map(|&i| constants[i]))
                .collect();
            rules.push(instantiate(index, rule, &subst));
        }
        ranges.push(start..rules.len());
    }
    GroundProgram {
        system: program.system,
        facts: program.facts.clone(),
        rules,
        ranges,
    }
}

fn instantiate(index: usize, rule: &Rule, subst: &BTreeMap<&str, &String>) -> GroundRule {
    let atom = |a: &Atom| Atom {
        predicate: a.predicate.clone(),
        args: a
            .args
            .iter()
            .map(|t| match t {
                Term::Variable(v) => Term::Constant(subst[v.as_str()].clone()),
                other => other.clone(),
            })
            .collect(),
    };
    GroundRule {
        rule_index: index,
        head: atom(&rule.head),
        body: rule
            .body
            .iter()
            .map(|l| Literal {
                atom: atom(&l.atom),
                negative: l.negative,
            })
            .collect(),
        implication: rule.implication,
        level: rule.level,
    }
}
