//! Knowledge bases: a program plus proximity relations and kb-extended uncertainty functions.
//!
//! Every atom a rule derives also holds, to a degree, for its neighbours:
//! atoms whose predicate is close to the derived one and whose arguments are
//! close to the derived arguments. The degree is computed by the head
//! predicate's function `phi` from the derived level and the proximities
//! involved.

mod parse;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use crate::engine::{
    applicable, resolve_order, saturate, ClosureLog, Diagnostic, EvalOrder, FixpointReport,
    Interpretation,
};
use crate::error::{Error, Result};
use crate::implications::level_raw;
use crate::lang::{ground, Atom, GroundProgram, Program, Term};
use crate::values::{TruthValue, ValueSystem};

pub use parse::{parse_phi, parse_proximity};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ProximityDomain {
    Terms,
    Predicates,
}

impl fmt::Display for ProximityDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProximityDomain::Terms => "terms",
            ProximityDomain::Predicates => "predicates",
        })
    }
}

/// A reflexive, symmetric relation on constants or on predicate symbols.
///
/// Entries are kept as given; lookups check both directions, and the
/// diagonal is always top.
#[derive(Debug, Clone, PartialEq)]
pub struct ProximityRelation {
    pub domain: ProximityDomain,
    pub system: ValueSystem,
    entries: BTreeMap<(String, String), TruthValue>,
}

impl ProximityRelation {
    pub fn new(domain: ProximityDomain, system: ValueSystem) -> Self {
        ProximityRelation {
            domain,
            system,
            entries: BTreeMap::new(),
        }
    }

    /// Adds `x ~ y = v`. A repeated pair keeps the last value.
    pub fn insert(&mut self, x: &str, y: &str, v: TruthValue) {
        self.entries.insert((x.to_string(), y.to_string()), v);
    }

    pub fn with(mut self, x: &str, y: &str, v: TruthValue) -> Self {
        self.insert(x, y, v);
        self
    }

    pub fn entries(&self) -> impl Iterator<Item = (&str, &str, &TruthValue)> {
        self.entries.iter().map(|((x, y), v)| (x.as_str(), y.as_str(), v))
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `R(x, y)`, bottom for unrelated symbols.
    pub fn get(&self, x: &str, y: &str) -> TruthValue {
        if x == y {
            return self.system.top();
        }
        let key = |a: &str, b: &str| (a.to_string(), b.to_string());
        self.entries
            .get(&key(x, y))
            .or_else(|| self.entries.get(&key(y, x)))
            .copied()
            .unwrap_or_else(|| self.system.bottom())
    }

    /// Every symbol mentioned in an entry.
    pub fn symbols(&self) -> BTreeSet<String> {
        self.entries
            .keys()
            .flat_map(|(x, y)| [x.clone(), y.clone()])
            .collect()
    }

    /// Checks values, reflexivity and symmetry; returns every violation found.
    pub fn validate(&self) -> std::result::Result<(), Vec<String>> {
        let sys = self.system;
        let mut problems = Vec::new();
        for ((x, y), v) in &self.entries {
            if v.is_pair() != sys.is_pair() {
                problems.push(format!("{x} ~ {y} = {v} does not fit the {sys} system"));
                continue;
            }
            if let Err(violation) = sys.validate_input(v) {
                problems.push(format!("{x} ~ {y}: {violation}"));
            }
            if x == y && !v.approx_eq(&sys.top(), crate::values::EPS) {
                problems.push(format!("{x} ~ {x} = {v}, but a symbol is fully close to itself"));
            }
            if x < y {
                if let Some(w) = self.entries.get(&(y.clone(), x.clone())) {
                    if !v.approx_eq(w, crate::values::EPS) {
                        problems.push(format!("{x} ~ {y} = {v} but {y} ~ {x} = {w}"));
                    }
                }
            }
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(problems)
        }
    }

    /// Whether `R(x, z) >= R(x, y) meet R(y, z)` for all mentioned symbols.
    pub fn is_similarity(&self) -> bool {
        let sys = self.system;
        let symbols: Vec<String> = self.symbols().into_iter().collect();
        symbols.iter().all(|x| {
            symbols.iter().all(|y| {
                symbols.iter().all(|z| {
                    let through = sys.meet_raw(&self.get(x, y), &self.get(y, z));
                    sys.leq_raw(&through, &self.get(x, z))
                })
            })
        })
    }

    /// Symbols close to `d` with their degrees, `d` itself included, sorted by symbol.
    pub fn proximity_set(&self, d: &str) -> Vec<(String, TruthValue)> {
        let mut out: BTreeMap<String, TruthValue> = BTreeMap::new();
        out.insert(d.to_string(), self.system.top());
        for ((x, y), v) in &self.entries {
            let other = if x == d {
                y
            } else if y == d {
                x
            } else {
                continue;
            };
            if other != d && !self.system.is_bottom(v) {
                out.insert(other.clone(), *v);
            }
        }
        out.into_iter().collect()
    }
}

/// Proximity on constants and on predicate symbols.
#[derive(Debug, Clone, PartialEq)]
pub struct BackgroundKnowledge {
    pub terms: ProximityRelation,
    pub predicates: ProximityRelation,
}

impl BackgroundKnowledge {
    /// Only the reflexive pairs.
    pub fn identity(system: ValueSystem) -> Self {
        BackgroundKnowledge {
            terms: ProximityRelation::new(ProximityDomain::Terms, system),
            predicates: ProximityRelation::new(ProximityDomain::Predicates, system),
        }
    }

    pub fn system(&self) -> ValueSystem {
        self.terms.system
    }

    pub fn validate(&self) -> std::result::Result<(), Vec<String>> {
        let mut problems = Vec::new();
        for rel in [&self.terms, &self.predicates] {
            if let Err(p) = rel.validate() {
                problems.extend(p.into_iter().map(|m| format!("{} proximity: {m}", rel.domain)));
            }
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(problems)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PhiId {
    /// Meet of the derived level and every proximity degree.
    #[default]
    Meet,
    /// Meet of the derived level, the predicate degree and the product of argument degrees.
    MeetProduct,
    /// Product of everything; interval-valued programs only.
    Product,
}

impl FromStr for PhiId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "meet" => Ok(PhiId::Meet),
            "meet-product" => Ok(PhiId::MeetProduct),
            "product" => Ok(PhiId::Product),
            other => Err(Error::InvalidArgument(format!("unknown phi `{other}`"))),
        }
    }
}

impl fmt::Display for PhiId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PhiId::Meet => "meet",
            PhiId::MeetProduct => "meet-product",
            PhiId::Product => "product",
        })
    }
}

/// The function-set: a phi per functor `p/n`, meet when unlisted.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PhiSpec {
    map: BTreeMap<(String, usize), PhiId>,
}

impl PhiSpec {
    pub fn new() -> Self {
        PhiSpec::default()
    }

    pub fn set(&mut self, predicate: &str, arity: usize, phi: PhiId) {
        self.map.insert((predicate.to_string(), arity), phi);
    }

    pub fn with(mut self, predicate: &str, arity: usize, phi: PhiId) -> Self {
        self.set(predicate, arity, phi);
        self
    }

    pub fn get(&self, predicate: &str, arity: usize) -> PhiId {
        self.map
            .get(&(predicate.to_string(), arity))
            .copied()
            .unwrap_or_default()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&str, usize, PhiId)> {
        self.map.iter().map(|((p, n), phi)| (p.as_str(), *n, *phi))
    }
}

/// Product of two levels.
///
/// Interval-valued and bipolar-a pairs multiply coordinate-wise. For the
/// intuitionistic orders the second coordinate is a non-membership degree,
/// so it combines as `a2 + b2 - a2 * b2`, the interval product seen through
/// `(m1, m2) -> (m1, 1 - m2)`.
pub fn product(sys: ValueSystem, a: &TruthValue, b: &TruthValue) -> TruthValue {
    match (sys, *a, *b) {
        (_, TruthValue::Scalar(x), TruthValue::Scalar(y)) => TruthValue::Scalar(x * y),
        (ValueSystem::Ifs | ValueSystem::BipolarB, TruthValue::Pair(a1, a2), TruthValue::Pair(b1, b2)) => {
            TruthValue::Pair(a1 * b1, a2 + b2 - a2 * b2)
        }
        (_, a, b) => TruthValue::Pair(a.first() * b.first(), a.second() * b.second()),
    }
}

/// Level of a neighbour atom: `phi(alpha, lambda_pred, lambda_args...)`.
pub fn phi_apply(
    sys: ValueSystem,
    id: PhiId,
    alpha: &TruthValue,
    lambda_pred: &TruthValue,
    lambda_args: &[TruthValue],
) -> Result<TruthValue> {
    for v in std::iter::once(alpha).chain([lambda_pred]).chain(lambda_args) {
        sys.check_shape(v)?;
    }
    if id == PhiId::Product && sys != ValueSystem::Ivs {
        return Err(Error::InvalidArgument(format!(
            "the product phi is only defined for ivs, not {sys}"
        )));
    }
    Ok(phi_raw(sys, id, alpha, lambda_pred, lambda_args))
}

fn phi_raw(
    sys: ValueSystem,
    id: PhiId,
    alpha: &TruthValue,
    lambda_pred: &TruthValue,
    lambda_args: &[TruthValue],
) -> TruthValue {
    match id {
        PhiId::Meet => sys.meet_raw(&sys.meet_raw(alpha, lambda_pred), &sys.meet_all(lambda_args)),
        PhiId::MeetProduct => {
            let args = lambda_args
                .iter()
                .fold(sys.top(), |acc, l| product(sys, &acc, l));
            sys.meet_raw(&sys.meet_raw(alpha, lambda_pred), &args)
        }
        PhiId::Product => lambda_args
            .iter()
            .fold(product(sys, alpha, lambda_pred), |acc, l| product(sys, &acc, l)),
    }
}

/// Program, background knowledge and function-set over one value system.
#[derive(Debug, Clone)]
pub struct KnowledgeBase {
    pub program: Program,
    pub bk: BackgroundKnowledge,
    pub phi: PhiSpec,
    arities: BTreeMap<String, usize>,
}

impl KnowledgeBase {
    /// Validates the parts against each other.
    ///
    /// Predicates known only from the predicate proximity take the arity of
    /// the program predicate they are close to.
    pub fn new(program: Program, bk: BackgroundKnowledge, phi: PhiSpec) -> Result<Self> {
        let sys = program.system;
        for rel in [&bk.terms, &bk.predicates] {
            if rel.system != sys {
                return Err(Error::SystemMismatch(format!(
                    "{} proximity is {} but the program is {sys}",
                    rel.domain, rel.system
                )));
            }
        }
        bk.validate().map_err(|p| Error::Value(p.join("; ")))?;
        for (p, n, id) in phi.entries() {
            if id == PhiId::Product && sys != ValueSystem::Ivs {
                return Err(Error::SystemMismatch(format!(
                    "phi {p}/{n} = product needs an ivs program, not {sys}"
                )));
            }
        }

        let mut arities = program.arities();
        let pairs: Vec<(&str, &str)> = bk.predicates.entries().map(|(x, y, _)| (x, y)).collect();
        for &(x, y) in &pairs {
            if let (Some(&a), Some(&b)) = (arities.get(x), arities.get(y)) {
                if a != b {
                    return Err(Error::Arity {
                        predicate: format!("{x} ~ {y}"),
                        first: a,
                        second: b,
                    });
                }
            }
        }
        loop {
            let mut grew = false;
            for &(x, y) in &pairs {
                for (known, other) in [(x, y), (y, x)] {
                    if let Some(&n) = arities.get(known) {
                        if !arities.contains_key(other) {
                            arities.insert(other.to_string(), n);
                            grew = true;
                        }
                    }
                }
            }
            if !grew {
                break;
            }
        }
        Ok(KnowledgeBase {
            program,
            bk,
            phi,
            arities,
        })
    }

    /// A knowledge base with no proximities beyond identity and meet everywhere.
    pub fn plain(program: Program) -> Self {
        let bk = BackgroundKnowledge::identity(program.system);
        KnowledgeBase::new(program, bk, PhiSpec::new()).expect("identity background knowledge is valid")
    }

    pub fn system(&self) -> ValueSystem {
        self.program.system
    }

    /// Arities of program predicates and of the predicates close to them.
    pub fn arities(&self) -> &BTreeMap<String, usize> {
        &self.arities
    }

    /// Program constants plus every constant of the term proximity.
    pub fn universe(&self) -> BTreeSet<String> {
        let mut u = self.program.constants();
        u.extend(self.bk.terms.symbols());
        u
    }

    /// The program grounded over [`universe`](Self::universe).
    pub fn ground(&self) -> GroundProgram {
        ground(&self.program, &self.universe())
    }

    /// Neighbours of a derived atom with their levels.
    pub fn expand(&self, atom: &Atom, alpha: &TruthValue) -> Vec<(Atom, TruthValue)> {
        let sys = self.system();
        let phi = self.phi.get(&atom.predicate, atom.arity());
        let arg_sets: Vec<Vec<(String, TruthValue)>> = atom
            .args
            .iter()
            .map(|t| match t {
                Term::Constant(c) => self.bk.terms.proximity_set(c),
                other => vec![(other.to_string(), sys.top())],
            })
            .collect();
        let mut out = Vec::new();
        let sizes: Vec<usize> = arg_sets.iter().map(Vec::len).collect();
        let choices = cartesian(&sizes);
        for (q, lambda_q) in self.bk.predicates.proximity_set(&atom.predicate) {
            for choice in &choices {
                let args = choice
                    .iter()
                    .zip(&arg_sets)
                    .map(|(&i, set)| Term::Constant(set[i].0.clone()))
                    .collect();
                let lambdas: Vec<TruthValue> =
                    choice.iter().zip(&arg_sets).map(|(&i, set)| set[i].1).collect();
                out.push((Atom::new(&q, args), phi_raw(sys, phi, alpha, &lambda_q, &lambdas)));
            }
        }
        out
    }
}

/// Every index tuple with `tuple[i] < sizes[i]`, lexicographically.
fn cartesian(sizes: &[usize]) -> Vec<Vec<usize>> {
    sizes.iter().fold(vec![Vec::new()], |acc, &n| {
        acc.iter()
            .flat_map(|prefix| {
                (0..n).map(move |i| {
                    let mut t = prefix.clone();
                    t.push(i);
                    t
                })
            })
            .collect()
    })
}

fn mod_step_logged<'a>(
    kb: &KnowledgeBase,
    facts: &[(Atom, TruthValue)],
    rules: impl IntoIterator<Item = &'a crate::lang::GroundRule>,
    x: &Interpretation,
    log: &mut ClosureLog,
) -> Interpretation {
    let sys = kb.system();
    let mut next = x.clone();
    let mut fire = |rule: Option<usize>, head: &Atom, alpha: &TruthValue, next: &mut Interpretation| {
        for (atom, v) in kb.expand(head, alpha) {
            log.check(sys, rule, &atom, &v);
            next.raise(&atom, &v);
        }
    };
    for (atom, level) in facts {
        fire(None, atom, level, &mut next);
    }
    for r in rules {
        if let Some(alpha) = applicable(sys, r, x) {
            let v = level_raw(r.implication, sys, &alpha, &r.level);
            fire(Some(r.rule_index), &r.head, &v, &mut next);
        }
    }
    next
}

/// One modified consequence step.
///
/// Facts and applicable ground rules fire in parallel against `x`; each
/// derived atom is added together with all of its neighbours.
pub fn mod_nt_step(kb: &KnowledgeBase, x: &Interpretation) -> Interpretation {
    let g = kb.ground();
    let facts: Vec<(Atom, TruthValue)> = kb.program.fact_map().into_iter().collect();
    mod_step_logged(kb, &facts, &g.rules, x, &mut ClosureLog::default())
}

/// The knowledge-base consequence: least fixpoint of [`mod_nt_step`] per stratum.
pub fn consequence(kb: &KnowledgeBase, max_iters: usize) -> Result<FixpointReport> {
    let facts: Vec<(Atom, TruthValue)> = kb.program.fact_map().into_iter().collect();
    consequence_from(kb, &facts, None, max_iters)
}

/// The consequence grown from `facts` in place of the program's own facts.
pub fn consequence_from(
    kb: &KnowledgeBase,
    facts: &[(Atom, TruthValue)],
    order: Option<&EvalOrder>,
    max_iters: usize,
) -> Result<FixpointReport> {
    if max_iters == 0 {
        return Err(Error::InvalidArgument("max_iters must be at least 1".into()));
    }
    let sys = kb.system();
    let (order, warnings) = resolve_order(&kb.program, order)?;
    let g = kb.ground();
    let mut start = Interpretation::new(sys);
    for (a, v) in facts {
        start.raise(a, v);
    }
    let mut log = ClosureLog::default();
    let (x, iterations, converged) = saturate(start, &order, max_iters, |stratum, x| {
        let rules = stratum.iter().flat_map(|&i| g.instances(i));
        mod_step_logged(kb, facts, rules, x, &mut log)
    });
    let mut diagnostics: Vec<Diagnostic> = warnings.into_iter().map(Diagnostic::Warning).collect();
    diagnostics.extend(log.diagnostics);
    if !converged {
        diagnostics.push(Diagnostic::IterationLimit { limit: max_iters });
    }
    Ok(FixpointReport {
        interpretation: x,
        iterations,
        converged,
        order,
        diagnostics,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{fixpoint, Mode};
    use crate::lang::parse_program;

    const P: fn(f64, f64) -> TruthValue = TruthValue::pair;

    fn close(a: &TruthValue, b: TruthValue) {
        assert!(a.approx_eq(&b, 1e-9), "{a} != {b}");
    }

    fn ivs_terms() -> ProximityRelation {
        ProximityRelation::new(ProximityDomain::Terms, ValueSystem::Ivs).with("B", "V", P(0.8, 0.9))
    }

    #[test]
    fn proximity_validation() {
        assert!(ivs_terms().with("V", "V", P(1.0, 1.0)).validate().is_ok());
        let asym = ProximityRelation::new(ProximityDomain::Terms, ValueSystem::Ifs)
            .with("a", "b", P(0.7, 0.2))
            .with("b", "a", P(0.6, 0.2));
        assert_eq!(asym.validate().unwrap_err().len(), 1);
        let bad = ProximityRelation::new(ProximityDomain::Terms, ValueSystem::Ifs).with("a", "b", P(0.8, 0.3));
        assert!(bad.validate().is_err());
    }

    #[test]
    fn similarity() {
        assert!(ProximityRelation::new(ProximityDomain::Terms, ValueSystem::Fuzzy).is_similarity());
        let chain = ProximityRelation::new(ProximityDomain::Terms, ValueSystem::Ivs)
            .with("a", "b", P(0.8, 0.9))
            .with("b", "c", P(0.8, 0.9));
        assert!(!chain.is_similarity());
        let s = TruthValue::Scalar(0.7);
        let tri = ProximityRelation::new(ProximityDomain::Terms, ValueSystem::Fuzzy)
            .with("a", "b", s)
            .with("b", "c", s)
            .with("a", "c", s);
        assert!(tri.is_similarity());
    }

    #[test]
    fn proximity_sets() {
        let preds = ProximityRelation::new(ProximityDomain::Predicates, ValueSystem::Ivs).with("lo", "li", P(0.7, 0.9));
        assert_eq!(
            preds.proximity_set("lo"),
            vec![("li".to_string(), P(0.7, 0.9)), ("lo".to_string(), P(1.0, 1.0))]
        );
        assert_eq!(preds.proximity_set("x"), vec![("x".to_string(), P(1.0, 1.0))]);
        let terms = ProximityRelation::new(ProximityDomain::Terms, ValueSystem::Ifs).with("a", "b", P(0.7, 0.2));
        assert_eq!(
            terms.proximity_set("a"),
            vec![("a".to_string(), P(1.0, 0.0)), ("b".to_string(), P(0.7, 0.2))]
        );
    }

    #[test]
    fn phi_examples() {
        let ifs = ValueSystem::Ifs;
        close(&phi_apply(ifs, PhiId::Meet, &P(0.8, 0.1), &P(0.6, 0.3), &[P(1.0, 0.0)]).unwrap(), P(0.6, 0.3));
        close(&phi_apply(ifs, PhiId::Meet, &P(0.8, 0.1), &P(1.0, 0.0), &[P(0.7, 0.2)]).unwrap(), P(0.7, 0.2));
        let ivs = ValueSystem::Ivs;
        close(&phi_apply(ivs, PhiId::Product, &P(0.7, 0.8), &P(0.6, 0.7), &[P(1.0, 1.0)]).unwrap(), P(0.42, 0.56));
        assert!(phi_apply(ifs, PhiId::Product, &P(0.7, 0.2), &P(0.6, 0.3), &[]).is_err());
    }

    #[test]
    fn expansion_covers_all_neighbours() {
        let program = parse_program("%system ifs.\nfact r(a) = (0.8, 0.1).").unwrap();
        let bk = BackgroundKnowledge {
            terms: ProximityRelation::new(ProximityDomain::Terms, ValueSystem::Ifs).with("a", "b", P(0.7, 0.2)),
            predicates: ProximityRelation::new(ProximityDomain::Predicates, ValueSystem::Ifs).with("r", "s", P(0.6, 0.3)),
        };
        let kb = KnowledgeBase::new(program, bk, PhiSpec::new()).unwrap();
        assert_eq!(kb.arities().get("s"), Some(&1));
        let r = consequence(&kb, 100).unwrap();
        let got: Vec<String> = r.interpretation.iter().map(|(a, v)| format!("{a} = {v}")).collect();
        assert_eq!(
            got,
            vec!["r(a) = (0.8, 0.1)", "r(b) = (0.7, 0.2)", "s(a) = (0.6, 0.3)", "s(b) = (0.6, 0.3)"]
        );
    }

    #[test]
    fn arity_mismatch_is_rejected() {
        let program = parse_program("%system fuzzy.\nfact r(a) = 0.8.\nfact s(a, b) = 0.5.").unwrap();
        let mut bk = BackgroundKnowledge::identity(ValueSystem::Fuzzy);
        bk.predicates.insert("r", "s", TruthValue::Scalar(0.5));
        assert!(matches!(
            KnowledgeBase::new(program, bk, PhiSpec::new()),
            Err(Error::Arity { .. })
        ));
    }

    #[test]
    fn identity_knowledge_matches_the_engine() {
        let program = parse_program(
            "%system fuzzy.\nfact e(a, b) = 0.9.\nfact e(b, c) = 0.8.\n\
             rule t(X, Y) <- e(X, Y) : godel, 1.\nrule t(X, Z) <- e(X, Y), t(Y, Z) : lukasiewicz, 0.9.",
        )
        .unwrap();
        let engine = fixpoint(&program, Mode::Det, None, 100).unwrap();
        let kb = KnowledgeBase::plain(program);
        let c = consequence(&kb, 100).unwrap();
        assert_eq!(c.interpretation, engine.interpretation);
    }
}
