//! Brute-force level functions.
//!
//! The oracle never looks at a closed form. It evaluates the implication on a
//! grid of head levels `gamma` and picks the least one that satisfies
//! `I(alpha, gamma) >= beta`. Head levels range over the whole unit square,
//! not just the valid part of the target lattice, since the operators are
//! defined there and several closed forms leave the lattice.
//!
//! For pair-valued operators "least" is read in one of two ways:
//!
//! * infimum: the lattice meet of every satisfying `gamma`;
//! * lexicographic: the least first coordinate, then the least second
//!   coordinate among satisfying `gamma` with that first coordinate.
//!
//! The Gödel-style `fg1`/`vg1` operators use the second reading, all others
//! the first. The scanned coordinate uses the caller's step; the other one a
//! 0.05 grid, which is enough to witness satisfiability for grid inputs.

use crate::error::{Error, Result};
use crate::values::{OrderKind, TruthValue, ValueSystem, EPS};

use super::{apply_raw, BipolarVariant, FuzzyImplication, ImplicationId};

const FREE_STEPS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Reading {
    Infimum,
    Lexicographic,
}

fn reading(id: ImplicationId) -> Reading {
    match id {
        ImplicationId::Fg1 | ImplicationId::Vg1 => Reading::Lexicographic,
        _ => Reading::Infimum,
    }
}

/// Level oracle for one operator and one body level, reusable across rule levels.
#[derive(Debug, Clone)]
pub struct LevelOracle {
    id: ImplicationId,
    sys: ValueSystem,
    alpha: TruthValue,
    n: usize,
    tables: Tables,
}

#[derive(Debug, Clone)]
enum Tables {
    /// One column of implication values per coordinate, indexed by `gamma`.
    Columns(Vec<f64>, Option<Vec<f64>>),
    /// For each scanned value of one coordinate, the maximal implication
    /// values reachable by varying the other.
    Rows {
        first: Vec<Vec<TruthValue>>,
        second: Vec<Vec<TruthValue>>,
    },
}

impl LevelOracle {
    pub fn new(id: ImplicationId, sys: ValueSystem, alpha: TruthValue, step: f64) -> Result<Self> {
        if !(step > 0.0 && step <= 0.01 + EPS) {
            return Err(Error::InvalidArgument(format!("oracle step {step} not in (0, 0.01]")));
        }
        id.check_compatible(sys)?;
        sys.check_shape(&alpha)?;
        let n = (1.0 / step).round() as usize;
        let grid = |i: usize| i as f64 / n as f64;
        let tables = match id {
            ImplicationId::Fuzzy(i) => {
                Tables::Columns((0..=n).map(|k| i.apply(alpha.first(), grid(k))).collect(), None)
            }
            ImplicationId::Bipolar(i1, i2) => {
                let (a1, a2) = (alpha.first(), alpha.second());
                let c1 = (0..=n).map(|k| i1.apply(a1, grid(k))).collect();
                let c2 = (0..=n)
                    .map(|k| second_bipolar(sys, i2, a2, grid(k)))
                    .collect();
                Tables::Columns(c1, Some(c2))
            }
            _ => {
                let free = |j: usize| j as f64 / FREE_STEPS as f64;
                let mut first = Vec::with_capacity(n + 1);
                let mut second = Vec::with_capacity(n + 1);
                for k in 0..=n {
                    let row1 = (0..=FREE_STEPS)
                        .map(|j| apply_raw(id, sys, &alpha, &TruthValue::Pair(grid(k), free(j))));
                    first.push(pareto(sys, row1));
                    let g2 = grid(second_index(sys, k, n));
                    let row2 = (0..=FREE_STEPS)
                        .map(|j| apply_raw(id, sys, &alpha, &TruthValue::Pair(free(j), g2)));
                    second.push(pareto(sys, row2));
                }
                Tables::Rows { first, second }
            }
        };
        Ok(LevelOracle {
            id,
            sys,
            alpha,
            n,
            tables,
        })
    }

    pub fn level(&self, beta: &TruthValue) -> TruthValue {
        let grid = |i: usize| i as f64 / self.n as f64;
        let bottom = self.sys.bottom();
        match &self.tables {
            Tables::Columns(c1, None) => {
                let b = beta.first();
                let g = c1.iter().position(|&v| v + EPS >= b).map_or(0.0, grid);
                TruthValue::Scalar(g.max(0.0))
            }
            Tables::Columns(c1, Some(c2)) => {
                let (b1, b2) = (beta.first(), beta.second());
                let g1 = c1.iter().position(|&v| v + EPS >= b1).map_or(0.0, grid);
                let g2 = match self.sys {
                    // larger second coordinates are lower in variant b
                    ValueSystem::BipolarB => c2
                        .iter()
                        .rposition(|&v| v <= b2 + EPS)
                        .map_or(bottom.second(), grid),
                    _ => c2
                        .iter()
                        .position(|&v| v + EPS >= b2)
                        .map_or(bottom.second(), grid),
                };
                TruthValue::Pair(g1, g2)
            }
            Tables::Rows { first, second } => {
                let hit = |row: &Vec<TruthValue>| row.iter().any(|v| self.sys.leq_raw(beta, v));
                let Some(k1) = first.iter().position(hit) else {
                    return bottom;
                };
                let g1 = grid(k1);
                let k2 = match reading(self.id) {
                    Reading::Infimum => second.iter().position(hit),
                    Reading::Lexicographic => (0..=self.n).position(|k| {
                        let g2 = grid(second_index(self.sys, k, self.n));
                        let v = apply_raw(self.id, self.sys, &self.alpha, &TruthValue::Pair(g1, g2));
                        self.sys.leq_raw(beta, &v)
                    }),
                };
                let g2 = k2.map_or(bottom.second(), |k| grid(second_index(self.sys, k, self.n)));
                TruthValue::Pair(g1, g2)
            }
        }
    }
}

/// Scans second coordinates from the bottom of the order upwards.
fn second_index(sys: ValueSystem, k: usize, n: usize) -> usize {
    match sys.order_kind() {
        OrderKind::Intuitionistic => n - k,
        _ => k,
    }
}

fn second_bipolar(sys: ValueSystem, i2: FuzzyImplication, a2: f64, g2: f64) -> f64 {
    match BipolarVariant::of(sys) {
        Some(BipolarVariant::B) => 1.0 - i2.apply(1.0 - a2, 1.0 - g2),
        _ => i2.apply(a2, g2),
    }
}

fn pareto(sys: ValueSystem, values: impl Iterator<Item = TruthValue>) -> Vec<TruthValue> {
    let mut kept: Vec<TruthValue> = Vec::new();
    for v in values {
        if kept.iter().any(|k| sys.leq_raw(&v, k)) {
            continue;
        }
        kept.retain(|k| !sys.leq_raw(k, &v));
        kept.push(v);
    }
    kept
}

/// Brute-force level of `id` at body level `alpha` and rule level `beta`.
pub fn oracle_level_fn(
    id: ImplicationId,
    sys: ValueSystem,
    alpha: &TruthValue,
    beta: &TruthValue,
    step: f64,
) -> Result<TruthValue> {
    sys.check_shape(beta)?;
    Ok(LevelOracle::new(id, sys, *alpha, step)?.level(beta))
}
