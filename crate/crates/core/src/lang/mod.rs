//! Programs: syntax tree, parser, safety, Herbrand sets, grounding and unification.

mod herbrand;
pub(crate) mod lexer;
pub(crate) mod parser;
mod print;
mod safety;
pub(crate) mod unify;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::implications::ImplicationId;
use crate::values::{TruthValue, ValueSystem};

pub use herbrand::{base_over, ground, herbrand, GroundLiteral, GroundProgram, GroundRule};
pub use parser::{parse_atom, parse_level, parse_program, parse_program_with};
pub use print::{print_program, quote_constant};
pub use safety::{check_safety, SafetyMode, SafetyReport};
pub use unify::{apply_substitution, unify, Substitution};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Term {
    Variable(String),
    Constant(String),
    /// Stands for the proximity set of a constant while answering queries.
    ProximityRef(String),
}

impl Term {
    pub fn var(name: &str) -> Self {
        Term::Variable(name.to_string())
    }

    pub fn constant(name: &str) -> Self {
        Term::Constant(name.to_string())
    }

    pub fn is_ground(&self) -> bool {
        !matches!(self, Term::Variable(_))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Variable(v) | Term::Constant(v) => f.write_str(v),
            Term::ProximityRef(c) => write!(f, "~{c}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Atom {
    pub predicate: String,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn new(predicate: &str, args: Vec<Term>) -> Self {
        Atom {
            predicate: predicate.to_string(),
            args,
        }
    }

    /// A ground atom over constants.
    pub fn ground(predicate: &str, args: &[&str]) -> Self {
        Atom::new(predicate, args.iter().map(|a| Term::constant(a)).collect())
    }

    pub fn arity(&self) -> usize {
        self.args.len()
    }

    pub fn is_ground(&self) -> bool {
        self.args.iter().all(|t| matches!(t, Term::Constant(_)))
    }

    /// Variables in order of first occurrence.
    pub fn variables(&self) -> impl Iterator<Item = &str> {
        self.args.iter().filter_map(|t| match t {
            Term::Variable(v) => Some(v.as_str()),
            _ => None,
        })
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.predicate)?;
        if !self.args.is_empty() {
            f.write_str("(")?;
            for (i, t) in self.args.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{t}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Literal {
    pub atom: Atom,
    pub negative: bool,
}

impl Literal {
    pub fn pos(atom: Atom) -> Self {
        Literal { atom, negative: false }
    }

    pub fn neg(atom: Atom) -> Self {
        Literal { atom, negative: true }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negative {
            f.write_str("not ")?;
        }
        write!(f, "{}", self.atom)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Rule {
    pub head: Atom,
    pub body: Vec<Literal>,
    pub implication: ImplicationId,
    pub level: TruthValue,
}

impl Rule {
    pub fn has_negation(&self) -> bool {
        self.body.iter().any(|l| l.negative)
    }

    /// Variables in order of first occurrence, head first.
    pub fn variables(&self) -> Vec<String> {
        let mut seen = Vec::<String>::new();
        let atoms = std::iter::once(&self.head).chain(self.body.iter().map(|l| &l.atom));
        for v in atoms.flat_map(Atom::variables) {
            if !seen.iter().any(|s| s == v) {
                seen.push(v.to_string());
            }
        }
        seen
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Fact {
    pub atom: Atom,
    pub level: TruthValue,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Program {
    pub system: ValueSystem,
    pub facts: Vec<Fact>,
    /// Rules with a non-empty body, in textual order.
    pub rules: Vec<Rule>,
    /// Evaluation order from a `%order` directive, 1-based rule indices.
    pub order: Option<Vec<usize>>,
    /// Safety mode from a `%safety` directive.
    pub safety: Option<SafetyMode>,
    /// Non-fatal findings made while loading.
    pub warnings: Vec<String>,
}

impl Program {
    pub fn new(system: ValueSystem) -> Self {
        Program {
            system,
            facts: Vec::new(),
            rules: Vec::new(),
            order: None,
            safety: None,
            warnings: Vec::new(),
        }
    }

    pub fn atoms(&self) -> impl Iterator<Item = &Atom> {
        self.facts.iter().map(|f| &f.atom).chain(
            self.rules
                .iter()
                .flat_map(|r| std::iter::once(&r.head).chain(r.body.iter().map(|l| &l.atom))),
        )
    }

    /// Arity of each predicate; the first occurrence wins if the program is inconsistent.
    pub fn arities(&self) -> BTreeMap<String, usize> {
        let mut out = BTreeMap::new();
        for a in self.atoms() {
            out.entry(a.predicate.clone()).or_insert(a.arity());
        }
        out
    }

    pub fn constants(&self) -> BTreeSet<String> {
        self.atoms()
            .flat_map(|a| a.args.iter())
            .filter_map(|t| match t {
                Term::Constant(c) => Some(c.clone()),
                _ => None,
            })
            .collect()
    }

    pub fn is_positive(&self) -> bool {
        !self.rules.iter().any(Rule::has_negation)
    }

    /// Facts as an interpretation-ready list, duplicates joined.
    pub fn fact_map(&self) -> BTreeMap<Atom, TruthValue> {
        let mut out: BTreeMap<Atom, TruthValue> = BTreeMap::new();
        for f in &self.facts {
            out.entry(f.atom.clone())
                .and_modify(|v| *v = self.system.join_raw(v, &f.level))
                .or_insert(f.level);
        }
        out
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_program(self))
    }
}
