//! Bottom-up evaluation: consequence steps, stratified fixpoints and model checks.
//!
//! The deterministic step fires every applicable ground rule at once. The
//! nondeterministic step fires only the first rule instance that raises the
//! interpretation. Both are iterated stratum by stratum until nothing changes.

mod stratify;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::implications::{apply_raw, level_raw};
use crate::lang::{ground, Atom, GroundProgram, GroundRule, Program, Term};
use crate::values::{TruthValue, ValueSystem, EPS};

pub use stratify::{stratify, EvalOrder, Stratification};

pub const DEFAULT_MAX_ITERS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    /// All applicable rules in parallel.
    Det,
    /// One productive rule instance at a time.
    #[default]
    Nondet,
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "det" => Ok(Mode::Det),
            "nondet" => Ok(Mode::Nondet),
            other => Err(Error::InvalidArgument(format!("unknown mode `{other}`"))),
        }
    }
}

/// Ground atoms with their levels. Absent atoms are at bottom.
#[derive(Debug, Clone, PartialEq)]
pub struct Interpretation {
    system: ValueSystem,
    entries: BTreeMap<Atom, TruthValue>,
}

impl Interpretation {
    pub fn new(system: ValueSystem) -> Self {
        Interpretation {
            system,
            entries: BTreeMap::new(),
        }
    }

    /// The program's facts, duplicates joined.
    pub fn from_facts(program: &Program) -> Self {
        let mut x = Interpretation::new(program.system);
        for f in &program.facts {
            x.raise(&f.atom, &f.level);
        }
        x
    }

    pub fn system(&self) -> ValueSystem {
        self.system
    }

    pub fn get(&self, atom: &Atom) -> Option<&TruthValue> {
        self.entries.get(atom)
    }

    /// The level of `atom`, bottom when absent.
    pub fn value(&self, atom: &Atom) -> TruthValue {
        self.entries.get(atom).copied().unwrap_or_else(|| self.system.bottom())
    }

    /// Joins `v` into the level of `atom`; reports whether the level rose.
    pub fn raise(&mut self, atom: &Atom, v: &TruthValue) -> bool {
        if self.system.is_bottom(v) {
            return false;
        }
        match self.entries.get_mut(atom) {
            Some(old) => {
                let joined = self.system.join_raw(old, v);
                if joined.approx_eq(old, EPS) {
                    false
                } else {
                    *old = joined;
                    true
                }
            }
            None => {
                self.entries.insert(atom.clone(), *v);
                true
            }
        }
    }

    /// Whether `raise(atom, v)` would change anything.
    pub fn would_raise(&self, atom: &Atom, v: &TruthValue) -> bool {
        if self.system.is_bottom(v) {
            return false;
        }
        match self.entries.get(atom) {
            Some(old) => !self.system.join_raw(old, v).approx_eq(old, EPS),
            None => true,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Atom, &TruthValue)> {
        self.entries.iter()
    }

    pub fn atoms(&self) -> impl Iterator<Item = &Atom> {
        self.entries.keys()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn remove(&mut self, atom: &Atom) -> Option<TruthValue> {
        self.entries.remove(atom)
    }

    /// Overwrites a level, dropping the atom when `v` is bottom.
    pub fn set(&mut self, atom: Atom, v: TruthValue) {
        if self.system.is_bottom(&v) {
            self.entries.remove(&atom);
        } else {
            self.entries.insert(atom, v);
        }
    }

    /// Pointwise `self <= other`.
    pub fn leq(&self, other: &Interpretation) -> bool {
        self.entries
            .iter()
            .all(|(a, v)| self.system.leq_raw(v, &other.value(a)))
    }

    /// Same atoms with levels within `tol`.
    pub fn approx_eq(&self, other: &Interpretation, tol: f64) -> bool {
        self.len() == other.len()
            && self
                .entries
                .iter()
                .all(|(a, v)| other.get(a).is_some_and(|w| v.approx_eq(w, tol)))
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
}

impl fmt::Display for Interpretation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (a, v) in &self.entries {
            writeln!(f, "{a} = {v}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Diagnostic {
    /// A derived level outside the system's constraint.
    Closure {
        /// Source rule, `None` when a fact's neighbour escapes.
        rule: Option<usize>,
        atom: Atom,
        value: TruthValue,
        reason: String,
    },
    IterationLimit { limit: usize },
    Warning(String),
}

impl Diagnostic {
    pub fn is_closure(&self) -> bool {
        matches!(self, Diagnostic::Closure { .. })
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::Closure {
                rule,
                atom,
                value,
                reason,
            } => match rule {
                Some(r) => write!(f, "closure: rule {} derives {atom} = {value}: {reason}", r + 1),
                None => write!(f, "closure: fact expansion derives {atom} = {value}: {reason}"),
            },
            Diagnostic::IterationLimit { limit } => {
                write!(f, "iteration limit of {limit} reached before convergence")
            }
            Diagnostic::Warning(w) => f.write_str(w),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FixpointReport {
    pub interpretation: Interpretation,
    /// Step applications, including the final one that changed nothing.
    pub iterations: usize,
    pub converged: bool,
    pub order: EvalOrder,
    pub diagnostics: Vec<Diagnostic>,
}

/// Body level of a ground rule, or `None` when some body atom is absent.
///
/// Negative literals contribute the negation of their atom's level.
pub fn applicable(sys: ValueSystem, rule: &GroundRule, x: &Interpretation) -> Option<TruthValue> {
    let mut alpha = sys.top();
    for l in &rule.body {
        let v = x.get(&l.atom)?;
        let v = if l.negative { sys.negate_raw(v) } else { *v };
        alpha = sys.meet_raw(&alpha, &v);
    }
    Some(alpha)
}

/// Head level a ground rule derives from `x`.
pub(crate) fn derive(sys: ValueSystem, rule: &GroundRule, x: &Interpretation) -> Option<TruthValue> {
    applicable(sys, rule, x).map(|alpha| level_raw(rule.implication, sys, &alpha, &rule.level))
}

/// Records closure violations as diagnostics, once per (rule, atom, value).
#[derive(Default)]
pub(crate) struct ClosureLog {
    seen: BTreeSet<(Option<usize>, String)>,
    pub(crate) diagnostics: Vec<Diagnostic>,
}

impl ClosureLog {
    pub(crate) fn check(&mut self, sys: ValueSystem, rule: Option<usize>, atom: &Atom, v: &TruthValue) {
        if let Err(violation) = sys.validate(v) {
            if self.seen.insert((rule, format!("{atom}={v}"))) {
                self.diagnostics.push(Diagnostic::Closure {
                    rule,
                    atom: atom.clone(),
                    value: *v,
                    reason: violation.to_string(),
                });
            }
        }
    }
}

fn dt_step_logged<'a>(
    sys: ValueSystem,
    rules: impl IntoIterator<Item = &'a GroundRule>,
    x: &Interpretation,
    log: &mut ClosureLog,
) -> Interpretation {
    let mut next = x.clone();
    for r in rules {
        if let Some(v) = derive(sys, r, x) {
            log.check(sys, Some(r.rule_index), &r.head, &v);
            next.raise(&r.head, &v);
        }
    }
    next
}

fn nt_step_logged<'a>(
    sys: ValueSystem,
    rules: impl IntoIterator<Item = &'a GroundRule>,
    x: &Interpretation,
    log: &mut ClosureLog,
) -> Interpretation {
    let mut next = x.clone();
    for r in rules {
        if let Some(v) = derive(sys, r, x) {
            if next.raise(&r.head, &v) {
                log.check(sys, Some(r.rule_index), &r.head, &v);
                break;
            }
        }
    }
    next
}

/// One deterministic step: every applicable rule fires against `x`.
pub fn dt_step(ground: &GroundProgram, x: &Interpretation) -> Interpretation {
    dt_step_logged(ground.system, &ground.rules, x, &mut ClosureLog::default())
}

/// One nondeterministic step: the first instance, in `order`, that raises `x`.
pub fn nt_step(ground: &GroundProgram, x: &Interpretation, order: &EvalOrder) -> Interpretation {
    let rules = order.rules().flat_map(|i| ground.instances(i));
    nt_step_logged(ground.system, rules, x, &mut ClosureLog::default())
}

/// The evaluation order to use: `explicit`, else the program's `%order`, else [`stratify`].
pub fn resolve_order(program: &Program, explicit: Option<&EvalOrder>) -> Result<(EvalOrder, Vec<String>)> {
    let n = program.rules.len();
    if let Some(order) = explicit {
        if !order.covers(n) {
            return Err(Error::Stratification(format!(
                "evaluation order {order} does not cover the {n} rule(s) exactly once"
            )));
        }
        return Ok((order.clone(), Vec::new()));
    }
    if let Some(seq) = &program.order {
        return Ok((EvalOrder::from_sequence(seq, n)?, Vec::new()));
    }
    let s = stratify(program);
    Ok((s.order, s.warnings))
}

/// Iterates one step kind per stratum until nothing changes.
pub(crate) fn saturate<F>(
    start: Interpretation,
    order: &EvalOrder,
    max_iters: usize,
    mut step: F,
) -> (Interpretation, usize, bool)
where
    F: FnMut(&[usize], &Interpretation) -> Interpretation,
{
    let mut x = start;
    let mut iterations = 0;
    let single = [Vec::new()];
    let strata: &[Vec<usize>] = if order.strata.is_empty() { &single } else { &order.strata };
    for stratum in strata {
        loop {
            if iterations >= max_iters {
                return (x, iterations, false);
            }
            let next = step(stratum, &x);
            iterations += 1;
            if next.approx_eq(&x, EPS) {
                break;
            }
            x = next;
        }
    }
    (x, iterations, true)
}

/// Least fixpoint of the chosen consequence transformation.
///
/// `order` defaults to the program's `%order` directive, then to
/// [`stratify`]. Non-convergence within `max_iters` steps is reported, not
/// raised.
pub fn fixpoint(
    program: &Program,
    mode: Mode,
    order: Option<&EvalOrder>,
    max_iters: usize,
) -> Result<FixpointReport> {
    if max_iters == 0 {
        return Err(Error::InvalidArgument("max_iters must be at least 1".into()));
    }
    let (order, warnings) = resolve_order(program, order)?;
    let g = ground(program, &program.constants());
    let sys = program.system;
    let mut log = ClosureLog::default();
    let (x, iterations, converged) = saturate(Interpretation::from_facts(program), &order, max_iters, |stratum, x| {
        let rules = stratum.iter().flat_map(|&i| g.instances(i));
        match mode {
            Mode::Det => dt_step_logged(sys, rules, x, &mut log),
            Mode::Nondet => nt_step_logged(sys, rules, x, &mut log),
        }
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

/// A ground rule (or fact) that `x` fails to satisfy.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelViolation {
    /// Source rule index, `None` for a fact.
    pub rule: Option<usize>,
    pub head: Atom,
    /// `I(alpha_body, head level)`, or the head level itself for a fact.
    pub implication_value: TruthValue,
    pub required: TruthValue,
}

impl fmt::Display for ModelViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.rule {
            Some(r) => write!(f, "rule {} at head {}: ", r + 1, self.head)?,
            None => write!(f, "fact {}: ", self.head)?,
        }
        write!(f, "{} is not above {}", self.implication_value, self.required)
    }
}

/// Checks `I(alpha_body, alpha_head) >= beta` for every applicable ground rule.
///
/// Rules with an absent body atom hold vacuously. A fact holds when its atom
/// is at least at the fact's level.
pub fn is_model(program: &Program, x: &Interpretation) -> std::result::Result<(), Vec<ModelViolation>> {
    let sys = program.system;
    let mut universe = program.constants();
    universe.extend(x.constants());
    let g = ground(program, &universe);
    let mut violations = Vec::new();
    for f in &program.facts {
        let have = x.value(&f.atom);
        if !sys.leq_raw(&f.level, &have) {
            violations.push(ModelViolation {
                rule: None,
                head: f.atom.clone(),
                implication_value: have,
                required: f.level,
            });
        }
    }
    for r in &g.rules {
        if let Some(alpha) = applicable(sys, r, x) {
            let i = apply_raw(r.implication, sys, &alpha, &x.value(&r.head));
            if !sys.leq_raw(&r.level, &i) {
                violations.push(ModelViolation {
                    rule: Some(r.rule_index),
                    head: r.head.clone(),
                    implication_value: i,
                    required: r.level,
                });
            }
        }
    }
    if violations.is_empty() {
        Ok(())
    } else {
        Err(violations)
    }
}
