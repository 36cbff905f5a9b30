//! Goal-directed answering.
//!
//! A goal is answered in two phases. First an AND/OR search tree is grown
//! top-down from the goal, ignoring levels, alternating predicate proximity
//! with unification against rule heads and facts. The program facts that end
//! in a `YES` leaf are the starting facts. Then the knowledge-base
//! consequence is computed bottom-up from those facts alone, and the atoms
//! matching the goal are returned.
//!
//! Node depths follow a fixed pattern. The goal sits at depth 0 and its
//! children at depth 1 replace ground arguments by their proximity sets.
//! Atoms at depths `3k + 1` are unified with rule heads and facts; their
//! children at `3k + 2` are rule bodies (AND nodes) or ground fact
//! candidates, whose children are `YES` or `NO`. Body members at depths
//! `3k` (`k >= 1`) branch over close predicates.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write};

use crate::engine::FixpointReport;
use crate::error::{Error, Result};
use crate::kb::{consequence_from, KnowledgeBase};
use crate::lang::parser::check_level;
use crate::lang::unify::unify_terms;
use crate::lang::{apply_substitution, parse_atom, parse_level, unify, Atom, Substitution, Term};
use crate::values::TruthValue;

pub const DEFAULT_DEPTH_LIMIT: usize = 64;

#[derive(Debug, Clone, PartialEq)]
pub struct Goal {
    pub atom: Atom,
    /// Answers must be at least this high, when given.
    pub level: Option<TruthValue>,
}

impl Goal {
    pub fn new(atom: Atom) -> Self {
        Goal { atom, level: None }
    }

    /// Parses `li('M', X)` and an optional threshold such as `(0.4, 0.5)`.
    pub fn parse(atom: &str, at_least: Option<&str>, kb: &KnowledgeBase) -> Result<Self> {
        let atom = parse_atom(atom)?;
        let level = at_least.map(|l| parse_level(l, kb.system())).transpose()?;
        Ok(Goal { atom, level })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum NodeKind {
    Goal(Atom),
    /// An atom awaiting predicate proximity (depth `3k`) or unification (depth `3k + 1`).
    Subgoal(Atom),
    /// The instantiated body of a rule whose head unified with the parent.
    RuleBody { rule: usize, atoms: Vec<Atom> },
    /// A ground atom that may be a program fact.
    FactCandidate(Atom),
    Yes,
    No,
    /// The parent repeats an atom already expanded at the same depth class.
    Repeat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Connective {
    And,
    Or,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchNode {
    pub kind: NodeKind,
    pub depth: usize,
    /// How the children combine.
    pub connective: Connective,
    pub children: Vec<usize>,
}

/// The search tree; node 0 is the root.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchTree {
    pub nodes: Vec<SearchNode>,
    /// Truncation notices.
    pub diagnostics: Vec<String>,
}

pub type StartingFacts = BTreeMap<Atom, TruthValue>;

impl SearchTree {
    pub fn root(&self) -> &SearchNode {
        &self.nodes[0]
    }

    /// Fact candidates with a `YES` child.
    pub fn yes_parents(&self) -> BTreeSet<Atom> {
        self.nodes
            .iter()
            .filter_map(|n| match &n.kind {
                NodeKind::FactCandidate(a)
                    if n.children.iter().any(|&c| self.nodes[c].kind == NodeKind::Yes) =>
                {
                    Some(a.clone())
                }
                _ => None,
            })
            .collect()
    }

    /// An indented rendering, one node per line.
    pub fn render(&self) -> String {
        let mut out = String::new();
        self.render_node(0, 0, &mut out);
        out
    }

    fn render_node(&self, id: usize, indent: usize, out: &mut String) {
        let n = &self.nodes[id];
        let label = match &n.kind {
            NodeKind::Goal(a) => format!("goal {a}"),
            NodeKind::Subgoal(a) => a.to_string(),
            NodeKind::RuleBody { rule, atoms } => {
                let body: Vec<String> = atoms.iter().map(Atom::to_string).collect();
                format!("rule {}: {}", rule + 1, body.join(" AND "))
            }
            NodeKind::FactCandidate(a) => format!("fact? {a}"),
            NodeKind::Yes => "YES".into(),
            NodeKind::No => "NO".into(),
            NodeKind::Repeat => "(repeat)".into(),
        };
        writeln!(out, "{:indent$}[{}] {label}", "", n.depth, indent = indent * 2).unwrap();
        for &c in &n.children {
            self.render_node(c, indent + 1, out);
        }
    }
}

impl fmt::Display for SearchTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

struct Builder<'a> {
    kb: &'a KnowledgeBase,
    facts: BTreeSet<Atom>,
    nodes: Vec<SearchNode>,
    seen: BTreeSet<(Atom, usize)>,
    fresh: usize,
    limit: usize,
    diagnostics: Vec<String>,
}

/// Renames variables to `_0`, `_1`, ... by first occurrence.
fn canonical(atom: &Atom) -> Atom {
    let mut names: Vec<String> = Vec::new();
    let args = atom
        .args
        .iter()
        .map(|t| match t {
            Term::Variable(v) => {
                let i = names.iter().position(|n| n == v).unwrap_or_else(|| {
                    names.push(v.clone());
                    names.len() - 1
                });
                Term::Variable(format!("_{i}"))
            }
            other => other.clone(),
        })
        .collect();
    Atom {
        predicate: atom.predicate.clone(),
        args,
    }
}

impl<'a> Builder<'a> {
    fn add(&mut self, kind: NodeKind, depth: usize) -> usize {
        let connective = if depth % 3 == 2 {
            Connective::And
        } else {
            Connective::Or
        };
        self.nodes.push(SearchNode {
            kind,
            depth,
            connective,
            children: Vec::new(),
        });
        self.nodes.len() - 1
    }

    fn child(&mut self, parent: usize, kind: NodeKind) -> usize {
        let depth = self.nodes[parent].depth + 1;
        let id = self.add(kind, depth);
        self.nodes[parent].children.push(id);
        id
    }

    /// Whether the node may be expanded; adds the cut-off leaf otherwise.
    fn admit(&mut self, id: usize, atom: &Atom) -> bool {
        let depth = self.nodes[id].depth;
        if depth >= self.limit {
            self.diagnostics.push(format!("search cut at depth {depth} below {atom}"));
            self.child(id, NodeKind::No);
            return false;
        }
        if !self.seen.insert((canonical(atom), depth % 3)) {
            self.child(id, NodeKind::Repeat);
            return false;
        }
        true
    }

    /// Term equality up to proximity.
    fn close(&self, a: &Term, b: &Term) -> bool {
        let terms = &self.kb.bk.terms;
        let near = |x: &str, y: &str| x == y || !self.kb.system().is_bottom(&terms.get(x, y));
        match (a, b) {
            (Term::Constant(x), Term::Constant(y))
            | (Term::ProximityRef(x), Term::Constant(y))
            | (Term::Constant(x), Term::ProximityRef(y)) => near(x, y),
            (Term::ProximityRef(x), Term::ProximityRef(y)) => {
                terms.proximity_set(x).iter().any(|(z, _)| near(z, y))
            }
            _ => false,
        }
    }

    /// Unification where a constant or proximity set also matches any close constant.
    fn unify(&self, a: &Atom, b: &Atom) -> Option<Substitution> {
        if a.predicate != b.predicate || a.arity() != b.arity() {
            return None;
        }
        let mut s = Substitution::new();
        for (x, y) in a.args.iter().zip(&b.args) {
            let (x, y) = (walk(x, &s), walk(y, &s));
            if x.is_ground() && y.is_ground() {
                if !self.close(&x, &y) {
                    return None;
                }
            } else if !unify_terms(&x, &y, &mut s) {
                return None;
            }
        }
        Some(s)
    }

    fn rename(&mut self, atom: &Atom) -> Atom {
        let suffix = self.fresh;
        Atom {
            predicate: atom.predicate.clone(),
            args: atom
                .args
                .iter()
                .map(|t| match t {
                    Term::Variable(v) => Term::Variable(format!("{v}'{suffix}")),
                    other => other.clone(),
                })
                .collect(),
        }
    }

    /// Depth `3k + 1`: unify with rule heads and facts.
    fn resolve(&mut self, parent: usize, atom: Atom) {
        let id = self.child(parent, NodeKind::Subgoal(atom.clone()));
        if !self.admit(id, &atom) {
            return;
        }
        let mut matched = false;
        let program = &self.kb.program;
        for (index, rule) in program.rules.iter().enumerate() {
            self.fresh += 1;
            let head = self.rename(&rule.head);
            let Some(theta) = self.unify(&atom, &head) else {
                continue;
            };
            matched = true;
            let atoms: Vec<Atom> = rule
                .body
                .iter()
                .map(|l| apply_substitution(&self.rename(&l.atom), &theta))
                .collect();
            let body = self.child(id, NodeKind::RuleBody { rule: index, atoms: atoms.clone() });
            for a in atoms {
                self.subgoal(body, a);
            }
        }
        let mut candidates = BTreeSet::new();
        for fact in program.facts.iter().filter(|f| f.atom.predicate == atom.predicate) {
            let Some(theta) = self.unify(&atom, &fact.atom) else {
                continue;
            };
            matched = true;
            let options: Vec<Vec<Term>> = atom
                .args
                .iter()
                .zip(&fact.atom.args)
                .map(|(t, f)| match walk(t, &theta) {
                    Term::ProximityRef(c) => self
                        .kb
                        .bk
                        .terms
                        .proximity_set(&c)
                        .into_iter()
                        .map(|(d, _)| Term::Constant(d))
                        .collect(),
                    Term::Constant(_) => vec![f.clone()],
                    other => vec![other],
                })
                .collect();
            for args in cartesian(&options) {
                candidates.insert(Atom::new(&atom.predicate, args));
            }
        }
        for cand in candidates {
            let yes = self.facts.contains(&cand);
            let c = self.child(id, NodeKind::FactCandidate(cand));
            self.child(c, if yes { NodeKind::Yes } else { NodeKind::No });
        }
        if !matched {
            self.child(id, NodeKind::No);
        }
    }

    /// Depth `3k`, `k >= 1`: branch over close predicates.
    fn subgoal(&mut self, parent: usize, atom: Atom) {
        let id = self.child(parent, NodeKind::Subgoal(atom.clone()));
        if !self.admit(id, &atom) {
            return;
        }
        for (p, _) in self.kb.bk.predicates.proximity_set(&atom.predicate) {
            self.resolve(id, Atom::new(&p, atom.args.clone()));
        }
    }
}

fn walk(t: &Term, s: &Substitution) -> Term {
    let mut t = t.clone();
    while let Term::Variable(v) = &t {
        match s.get(v) {
            Some(next) => t = next.clone(),
            None => break,
        }
    }
    t
}

fn cartesian(options: &[Vec<Term>]) -> Vec<Vec<Term>> {
    options.iter().fold(vec![Vec::new()], |acc, opts| {
        acc.iter()
            .flat_map(|prefix| {
                opts.iter().map(move |o| {
                    let mut v = prefix.clone();
                    v.push(o.clone());
                    v
                })
            })
            .collect()
    })
}

/// Grows the search tree of `goal`, cutting branches below `depth_limit`.
pub fn build_tree(kb: &KnowledgeBase, goal: &Goal, depth_limit: usize) -> Result<SearchTree> {
    if depth_limit < 3 {
        return Err(Error::InvalidArgument(format!(
            "depth limit {depth_limit} is below the minimum of 3"
        )));
    }
    let mut b = Builder {
        kb,
        facts: kb.program.facts.iter().map(|f| f.atom.clone()).collect(),
        nodes: Vec::new(),
        seen: BTreeSet::new(),
        fresh: 0,
        limit: depth_limit,
        diagnostics: Vec::new(),
    };
    let root = b.add(NodeKind::Goal(goal.atom.clone()), 0);
    let args: Vec<Term> = goal
        .atom
        .args
        .iter()
        .map(|t| match t {
            Term::Constant(c) => Term::ProximityRef(c.clone()),
            other => other.clone(),
        })
        .collect();
    for (q, _) in kb.bk.predicates.proximity_set(&goal.atom.predicate) {
        b.resolve(root, Atom::new(&q, args.clone()));
    }
    Ok(SearchTree {
        nodes: b.nodes,
        diagnostics: b.diagnostics,
    })
}

/// The program facts that parent a `YES` leaf, with their levels.
pub fn starting_facts(tree: &SearchTree, kb: &KnowledgeBase) -> StartingFacts {
    let facts = kb.program.fact_map();
    tree.yes_parents()
        .into_iter()
        .filter_map(|a| facts.get(&a).map(|v| (a, *v)))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QueryLimits {
    pub depth_limit: usize,
    pub max_iters: usize,
}

impl Default for QueryLimits {
    fn default() -> Self {
        QueryLimits {
            depth_limit: DEFAULT_DEPTH_LIMIT,
            max_iters: crate::engine::DEFAULT_MAX_ITERS,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Answer {
    /// Atoms of the restricted fixpoint that match the goal, sorted.
    pub atoms: Vec<(Atom, TruthValue)>,
    pub starting_facts: StartingFacts,
    pub tree: SearchTree,
    /// The consequence grown from the starting facts.
    pub report: FixpointReport,
}

/// Answers `goal` from the consequence grown out of its starting facts.
pub fn answer(kb: &KnowledgeBase, goal: &Goal, limits: QueryLimits) -> Result<Answer> {
    if let Some(level) = &goal.level {
        check_level(kb.system(), level, "goal level")?;
    }
    let tree = build_tree(kb, goal, limits.depth_limit)?;
    let start = starting_facts(&tree, kb);
    let facts: Vec<(Atom, TruthValue)> = start.iter().map(|(a, v)| (a.clone(), *v)).collect();
    let report = consequence_from(kb, &facts, None, limits.max_iters)?;
    let sys = kb.system();
    let atoms = report
        .interpretation
        .iter()
        .filter(|(a, v)| {
            unify(&goal.atom, a).is_some()
                && goal.level.as_ref().is_none_or(|min| sys.leq_raw(min, v))
        })
        .map(|(a, v)| (a.clone(), *v))
        .collect();
    Ok(Answer {
        atoms,
        starting_facts: start,
        tree,
        report,
    })
}
