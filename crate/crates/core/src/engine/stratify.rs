use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::lang::Program;

/// Ordered partition of rule indices (0-based) into strata.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EvalOrder {
    pub strata: Vec<Vec<usize>>,
}

impl EvalOrder {
    /// Each listed rule (1-based) in its own stratum; the list must cover every rule once.
    pub fn from_sequence(sequence: &[usize], rule_count: usize) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for &i in sequence {
            if i == 0 || i > rule_count {
                return Err(Error::Stratification(format!(
                    "order names rule {i}, but the program has {rule_count} rule(s)"
                )));
            }
            if !seen.insert(i) {
                return Err(Error::Stratification(format!("order names rule {i} twice")));
            }
        }
        if seen.len() != rule_count {
            let missing: Vec<String> = (1..=rule_count)
                .filter(|i| !seen.contains(i))
                .map(|i| i.to_string())
                .collect();
            return Err(Error::Stratification(format!(
                "order does not mention rule(s) {}",
                missing.join(", ")
            )));
        }
        Ok(EvalOrder {
            strata: sequence.iter().map(|&i| vec![i - 1]).collect(),
        })
    }

    /// All rules in textual order, as one stratum.
    pub fn textual(rule_count: usize) -> Self {
        EvalOrder {
            strata: vec![(0..rule_count).collect()],
        }
    }

    pub fn covers(&self, rule_count: usize) -> bool {
        let mut all: Vec<usize> = self.strata.iter().flatten().copied().collect();
        all.sort_unstable();
        all == (0..rule_count).collect::<Vec<_>>()
    }

    pub fn rules(&self) -> impl Iterator<Item = usize> + '_ {
        self.strata.iter().flatten().copied()
    }
}

impl fmt::Display for EvalOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.strata {
            let idx: Vec<String> = s.iter().map(|i| (i + 1).to_string()).collect();
            write!(f, "<{}>", idx.join(","))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stratification {
    pub order: EvalOrder,
    /// Negative dependencies that could not be ordered away.
    pub warnings: Vec<String>,
}

/// Orders rules so that rules consuming a predicate negatively run after its producers.
///
/// Rule `i` feeds rule `j` when the head predicate of `i` occurs in the body
/// of `j`. Strongly connected groups of rules become strata, emitted in
/// dependency order with the smallest rule index first among ready groups. A
/// self-feeding rule forms its own stratum and is saturated in place. A
/// negation-free program is one stratum in textual order.
pub fn stratify(program: &Program) -> Stratification {
    let n = program.rules.len();
    if program.is_positive() {
        return Stratification {
            order: EvalOrder::textual(n),
            warnings: Vec::new(),
        };
    }
    // edges[i] = (j, negative)
    let mut edges: Vec<Vec<(usize, bool)>> = vec![Vec::new(); n];
    for (i, ri) in program.rules.iter().enumerate() {
        for (j, rj) in program.rules.iter().enumerate() {
            if i == j {
                continue;
            }
            let mut hit = None;
            for l in &rj.body {
                if l.atom.predicate == ri.head.predicate {
                    hit = Some(hit.unwrap_or(false) || l.negative);
                }
            }
            if let Some(neg) = hit {
                edges[i].push((j, neg));
            }
        }
    }
    let comp = tarjan(&edges);
    let ncomp = comp.iter().copied().max().map_or(0, |m| m + 1);

    let mut members: Vec<Vec<usize>> = vec![Vec::new(); ncomp];
    for (i, &c) in comp.iter().enumerate() {
        members[c].push(i);
    }
    let mut warnings = Vec::new();
    let mut preds: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); ncomp];
    for (i, out) in edges.iter().enumerate() {
        for &(j, neg) in out {
            if comp[i] != comp[j] {
                preds[comp[j]].insert(comp[i]);
            } else if neg {
                warnings.push(format!(
                    "rule {} negatively depends on rule {} within a cycle; using textual order",
                    j + 1,
                    i + 1
                ));
            }
        }
    }

    let mut done = vec![false; ncomp];
    let mut strata = Vec::with_capacity(ncomp);
    for _ in 0..ncomp {
        let next = (0..ncomp)
            .filter(|&c| !done[c] && preds[c].iter().all(|&p| done[p]))
            .min_by_key(|&c| members[c][0])
            .expect("condensation is acyclic");
        done[next] = true;
        strata.push(members[next].clone());
    }
    Stratification {
        order: EvalOrder { strata },
        warnings,
    }
}

/// Component id per node.
fn tarjan(edges: &[Vec<(usize, bool)>]) -> Vec<usize> {
    struct State<'a> {
        edges: &'a [Vec<(usize, bool)>],
        index: Vec<Option<usize>>,
        low: Vec<usize>,
        on_stack: Vec<bool>,
        stack: Vec<usize>,
        comp: Vec<usize>,
        next_index: usize,
        next_comp: usize,
    }

    fn visit(s: &mut State, v: usize) {
        s.index[v] = Some(s.next_index);
        s.low[v] = s.next_index;
        s.next_index += 1;
        s.stack.push(v);
        s.on_stack[v] = true;
        for k in 0..s.edges[v].len() {
            let w = s.edges[v][k].0;
            match s.index[w] {
                None => {
                    visit(s, w);
                    s.low[v] = s.low[v].min(s.low[w]);
                }
                Some(iw) if s.on_stack[w] => s.low[v] = s.low[v].min(iw),
                _ => {}
            }
        }
        if Some(s.low[v]) == s.index[v] {
            loop {
                let w = s.stack.pop().expect("non-empty stack");
                s.on_stack[w] = false;
                s.comp[w] = s.next_comp;
                if w == v {
                    break;
                }
            }
            s.next_comp += 1;
        }
    }

    let n = edges.len();
    let mut s = State {
        edges,
        index: vec![None; n],
        low: vec![0; n],
        on_stack: vec![false; n],
        stack: Vec::new(),
        comp: vec![0; n],
        next_index: 0,
        next_comp: 0,
    };
    for v in 0..n {
        if s.index[v].is_none() {
            visit(&mut s, v);
        }
    }
    s.comp
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::parse_program;

    #[test]
    fn example_order() {
        let p = parse_program(
            "%system fuzzy.\n%safety paper-examples.\nfact p(a) = 0.8.\nfact r(b) = 0.6.\n\
             rule s(X) <- q(X, Y) : lukasiewicz, 0.7.\n\
             rule q(X, Y) <- p(X), r(Y) : godel, 0.7.\n\
             rule q(X, Y) <- not q(Y, X) : kleene, 0.9.",
        )
        .unwrap();
        let s = stratify(&p);
        assert_eq!(s.order.strata, vec![vec![1], vec![2], vec![0]]);
        assert!(s.warnings.is_empty());
        assert_eq!(s.order.to_string(), "<2><3><1>");
    }

    #[test]
    fn positive_programs_are_one_stratum() {
        let p = parse_program("%system fuzzy.\nrule a(X) <- b(X) : godel, 1.\nrule b(X) <- a(X) : godel, 1.").unwrap();
        assert_eq!(stratify(&p).order, EvalOrder::textual(2));
    }

    #[test]
    fn negative_cycles_warn() {
        let p = parse_program(
            "%system fuzzy.\nfact r(a) = 1.\nrule p(X) <- r(X), not q(X) : godel, 1.\nrule q(X) <- r(X), not p(X) : godel, 1.",
        )
        .unwrap();
        let s = stratify(&p);
        assert_eq!(s.order.strata, vec![vec![0, 1]]);
        assert_eq!(s.warnings.len(), 2);
    }

    #[test]
    fn explicit_sequences_must_cover() {
        assert!(EvalOrder::from_sequence(&[2, 3, 1], 3).is_ok());
        assert!(EvalOrder::from_sequence(&[2, 3], 3).is_err());
        assert!(EvalOrder::from_sequence(&[2, 2, 1], 3).is_err());
        assert!(EvalOrder::from_sequence(&[4, 2, 1], 3).is_err());
    }
}
