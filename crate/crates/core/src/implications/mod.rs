//! Implication operators and the uncertainty-level functions they induce.
//!
//! A rule `head <- body` annotated with implication `I` and level `beta` gives
//! its head the least level `gamma` for which `I(alpha_body, gamma) >= beta`.
//! That least level has a closed form for every operator here; [`level_fn`]
//! evaluates it and [`oracle`] recomputes it by brute force.

pub mod oracle;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::values::{TruthValue, ValueSystem, EPS};

pub use oracle::{oracle_level_fn, LevelOracle};

/// One of the three fuzzy base operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FuzzyImplication {
    Godel,
    Lukasiewicz,
    Kleene,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ImplicationId {
    Fuzzy(FuzzyImplication),
    Fk,
    Fl,
    Fg1,
    Fg2,
    Vk,
    Vl,
    Vg1,
    Vg2,
    /// Separate fuzzy operators for the two coordinates of a bipolar value.
    Bipolar(FuzzyImplication, FuzzyImplication),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BipolarVariant {
    A,
    B,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelFunctionResult {
    pub value: TruthValue,
    /// Whether `value` satisfies the target system's constraint.
    pub closure_ok: bool,
}

impl FuzzyImplication {
    pub const ALL: [FuzzyImplication; 3] = [
        FuzzyImplication::Godel,
        FuzzyImplication::Lukasiewicz,
        FuzzyImplication::Kleene,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FuzzyImplication::Godel => "godel",
            FuzzyImplication::Lukasiewicz => "lukasiewicz",
            FuzzyImplication::Kleene => "kleene",
        }
    }

    pub fn apply(self, alpha: f64, gamma: f64) -> f64 {
        match self {
            FuzzyImplication::Godel => {
                if alpha <= gamma + EPS {
                    1.0
                } else {
                    gamma
                }
            }
            FuzzyImplication::Lukasiewicz => {
                if alpha <= gamma + EPS {
                    1.0
                } else {
                    1.0 - alpha + gamma
                }
            }
            FuzzyImplication::Kleene => (1.0 - alpha).max(gamma),
        }
    }

    /// Least `gamma` with `apply(alpha, gamma) >= beta`, never below zero.
    pub fn level(self, alpha: f64, beta: f64) -> f64 {
        let f = match self {
            FuzzyImplication::Godel => alpha.min(beta),
            FuzzyImplication::Lukasiewicz => alpha + beta - 1.0,
            FuzzyImplication::Kleene => {
                if alpha + beta <= 1.0 + EPS {
                    0.0
                } else {
                    beta
                }
            }
        };
        f.max(0.0)
    }
}

impl fmt::Display for FuzzyImplication {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FuzzyImplication {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FuzzyImplication::ALL
            .into_iter()
            .find(|i| i.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown fuzzy implication `{s}`")))
    }
}

impl ImplicationId {
    /// Every non-bipolar id.
    pub const SINGLE: [ImplicationId; 11] = [
        ImplicationId::Fuzzy(FuzzyImplication::Godel),
        ImplicationId::Fuzzy(FuzzyImplication::Lukasiewicz),
        ImplicationId::Fuzzy(FuzzyImplication::Kleene),
        ImplicationId::Fk,
        ImplicationId::Fl,
        ImplicationId::Fg1,
        ImplicationId::Fg2,
        ImplicationId::Vk,
        ImplicationId::Vl,
        ImplicationId::Vg1,
        ImplicationId::Vg2,
    ];

    pub fn godel() -> Self {
        ImplicationId::Fuzzy(FuzzyImplication::Godel)
    }

    pub fn lukasiewicz() -> Self {
        ImplicationId::Fuzzy(FuzzyImplication::Lukasiewicz)
    }

    pub fn kleene() -> Self {
        ImplicationId::Fuzzy(FuzzyImplication::Kleene)
    }

    /// All ids usable with `sys`.
    pub fn for_system(sys: ValueSystem) -> Vec<ImplicationId> {
        match sys {
            ValueSystem::Fuzzy => FuzzyImplication::ALL
                .into_iter()
                .map(ImplicationId::Fuzzy)
                .collect(),
            ValueSystem::Ifs => vec![
                ImplicationId::Fk,
                ImplicationId::Fl,
                ImplicationId::Fg1,
                ImplicationId::Fg2,
            ],
            ValueSystem::Ivs => vec![
                ImplicationId::Vk,
                ImplicationId::Vl,
                ImplicationId::Vg1,
                ImplicationId::Vg2,
            ],
            ValueSystem::BipolarA | ValueSystem::BipolarB => FuzzyImplication::ALL
                .into_iter()
                .flat_map(|a| {
                    FuzzyImplication::ALL
                        .into_iter()
                        .map(move |b| ImplicationId::Bipolar(a, b))
                })
                .collect(),
        }
    }

    pub fn is_compatible(self, sys: ValueSystem) -> bool {
        match self {
            ImplicationId::Fuzzy(_) => sys == ValueSystem::Fuzzy,
            ImplicationId::Fk | ImplicationId::Fl | ImplicationId::Fg1 | ImplicationId::Fg2 => {
                sys == ValueSystem::Ifs
            }
            ImplicationId::Vk | ImplicationId::Vl | ImplicationId::Vg1 | ImplicationId::Vg2 => {
                sys == ValueSystem::Ivs
            }
            ImplicationId::Bipolar(..) => sys.is_bipolar(),
        }
    }

    pub fn check_compatible(self, sys: ValueSystem) -> Result<()> {
        if self.is_compatible(sys) {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!(
                "implication {self} cannot be used in the {sys} system"
            )))
        }
    }

    /// Parses a single operator name; bipolar pairs are built by the caller.
    pub fn from_name(s: &str) -> Result<Self> {
        Ok(match s {
            "fk" => ImplicationId::Fk,
            "fl" => ImplicationId::Fl,
            "fg1" => ImplicationId::Fg1,
            "fg2" => ImplicationId::Fg2,
            "vk" => ImplicationId::Vk,
            "vl" => ImplicationId::Vl,
            "vg1" => ImplicationId::Vg1,
            "vg2" => ImplicationId::Vg2,
            other => ImplicationId::Fuzzy(other.parse().map_err(|_| {
                Error::InvalidArgument(format!("unknown implication `{other}`"))
            })?),
        })
    }
}

impl fmt::Display for ImplicationId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            ImplicationId::Fuzzy(i) => i.name(),
            ImplicationId::Fk => "fk",
            ImplicationId::Fl => "fl",
            ImplicationId::Fg1 => "fg1",
            ImplicationId::Fg2 => "fg2",
            ImplicationId::Vk => "vk",
            ImplicationId::Vl => "vl",
            ImplicationId::Vg1 => "vg1",
            ImplicationId::Vg2 => "vg2",
            ImplicationId::Bipolar(a, b) => return write!(f, "({a}, {b})"),
        };
        f.write_str(name)
    }
}

impl BipolarVariant {
    pub fn of(sys: ValueSystem) -> Option<BipolarVariant> {
        match sys {
            ValueSystem::BipolarA => Some(BipolarVariant::A),
            ValueSystem::BipolarB => Some(BipolarVariant::B),
            _ => None,
        }
    }

    pub fn system(self) -> ValueSystem {
        match self {
            BipolarVariant::A => ValueSystem::BipolarA,
            BipolarVariant::B => ValueSystem::BipolarB,
        }
    }
}

fn check_inputs(id: ImplicationId, sys: ValueSystem, a: &TruthValue, b: &TruthValue) -> Result<()> {
    id.check_compatible(sys)?;
    sys.check_shape(a)?;
    sys.check_shape(b)
}

/// `I(alpha, gamma)`.
pub fn apply_implication(
    id: ImplicationId,
    sys: ValueSystem,
    alpha: &TruthValue,
    gamma: &TruthValue,
) -> Result<TruthValue> {
    check_inputs(id, sys, alpha, gamma)?;
    Ok(apply_raw(id, sys, alpha, gamma))
}

pub(crate) fn apply_raw(
    id: ImplicationId,
    sys: ValueSystem,
    alpha: &TruthValue,
    gamma: &TruthValue,
) -> TruthValue {
    use TruthValue::{Pair, Scalar};
    let (a1, a2, g1, g2) = (alpha.first(), alpha.second(), gamma.first(), gamma.second());
    match id {
        ImplicationId::Fuzzy(i) => Scalar(i.apply(a1, g1)),
        ImplicationId::Fk => Pair(a2.max(g1), a1.min(g2)),
        ImplicationId::Fl => Pair((a2 + g1).min(1.0), (a1 + g2 - 1.0).max(0.0)),
        ImplicationId::Fg1 => {
            if a1 <= g1 + EPS {
                Pair(1.0, 0.0)
            } else if a2 + EPS >= g2 {
                Pair(g1, 0.0)
            } else {
                Pair(g1, g2)
            }
        }
        ImplicationId::Fg2 => {
            if a1 <= g1 + EPS && a2 + EPS >= g2 {
                Pair(1.0, 0.0)
            } else {
                Pair(g1, g2)
            }
        }
        ImplicationId::Vk => Pair((1.0 - a2).max(g1), (1.0 - a1).max(g2)),
        ImplicationId::Vl => Pair((1.0 - a2 + g1).min(1.0), (1.0 - a1 + g2).min(1.0)),
        ImplicationId::Vg1 => {
            if a1 <= g1 + EPS {
                Pair(1.0, 1.0)
            } else if g2 + EPS >= a2 {
                Pair(g1, 1.0)
            } else {
                Pair(g1, g2)
            }
        }
        ImplicationId::Vg2 => {
            if a1 <= g1 + EPS && a2 <= g2 + EPS {
                Pair(1.0, 1.0)
            } else {
                Pair(g1, g2)
            }
        }
        ImplicationId::Bipolar(i1, i2) => {
            let c1 = i1.apply(a1, g1);
            match sys {
                ValueSystem::BipolarB => Pair(c1, 1.0 - i2.apply(1.0 - a2, 1.0 - g2)),
                _ => Pair(c1, i2.apply(a2, g2)),
            }
        }
    }
}

/// The head level of a rule with body level `alpha_body` and rule level `beta`.
pub fn level_fn(
    id: ImplicationId,
    sys: ValueSystem,
    alpha_body: &TruthValue,
    beta: &TruthValue,
) -> Result<LevelFunctionResult> {
    check_inputs(id, sys, alpha_body, beta)?;
    Ok(level_result(sys, level_raw(id, sys, alpha_body, beta)))
}

fn level_result(sys: ValueSystem, value: TruthValue) -> LevelFunctionResult {
    LevelFunctionResult {
        value,
        closure_ok: sys.validate(&value).is_ok(),
    }
}

pub(crate) fn level_raw(
    id: ImplicationId,
    sys: ValueSystem,
    alpha: &TruthValue,
    beta: &TruthValue,
) -> TruthValue {
    use TruthValue::{Pair, Scalar};
    let (a1, a2, b1, b2) = (alpha.first(), alpha.second(), beta.first(), beta.second());
    match id {
        ImplicationId::Fuzzy(i) => Scalar(i.level(a1, b1)),
        ImplicationId::Fk => Pair(
            if a2 + EPS >= b1 { 0.0 } else { b1 },
            if a1 <= b2 + EPS { 1.0 } else { b2 },
        ),
        ImplicationId::Fl => Pair((b1 - a2).max(0.0), (1.0 - a1 + b2).min(1.0)),
        ImplicationId::Fg1 => Pair(
            a1.min(b1),
            if a1 <= b1 + EPS { 1.0 } else { a2.max(b2) },
        ),
        ImplicationId::Fg2 => Pair(a1.min(b1), a2.max(b2)),
        ImplicationId::Vk => Pair(
            if 1.0 - a2 + EPS >= b1 { 0.0 } else { b1 },
            if 1.0 - a1 + EPS >= b2 { 0.0 } else { b2 },
        ),
        ImplicationId::Vl => Pair((a2 + b1 - 1.0).max(0.0), (a1 + b2 - 1.0).max(0.0)),
        ImplicationId::Vg1 => Pair(
            a1.min(b1),
            if a1 <= b1 + EPS { 0.0 } else { a2.min(b2) },
        ),
        ImplicationId::Vg2 => Pair(a1.min(b1), a2.min(b2)),
        ImplicationId::Bipolar(i1, i2) => {
            let variant = BipolarVariant::of(sys).unwrap_or(BipolarVariant::A);
            bipolar_raw(variant, i1, i2, alpha, beta)
        }
    }
}

/// Head level for a bipolar rule: one fuzzy level per coordinate.
///
/// Variant "b" evaluates the second coordinate on complemented values and
/// complements the result.
pub fn bipolar_level(
    variant: BipolarVariant,
    id1: ImplicationId,
    id2: ImplicationId,
    alpha: &TruthValue,
    beta: &TruthValue,
) -> Result<LevelFunctionResult> {
    let (ImplicationId::Fuzzy(i1), ImplicationId::Fuzzy(i2)) = (id1, id2) else {
        return Err(Error::InvalidArgument(format!(
            "bipolar levels need fuzzy operators, got {id1} and {id2}"
        )));
    };
    let sys = variant.system();
    sys.check_shape(alpha)?;
    sys.check_shape(beta)?;
    Ok(level_result(sys, bipolar_raw(variant, i1, i2, alpha, beta)))
}

fn bipolar_raw(
    variant: BipolarVariant,
    i1: FuzzyImplication,
    i2: FuzzyImplication,
    alpha: &TruthValue,
    beta: &TruthValue,
) -> TruthValue {
    let (a1, a2, b1, b2) = (alpha.first(), alpha.second(), beta.first(), beta.second());
    let c1 = i1.level(a1, b1);
    let c2 = match variant {
        BipolarVariant::A => i2.level(a2, b2),
        BipolarVariant::B => 1.0 - i2.level(1.0 - a2, 1.0 - b2),
    };
    TruthValue::Pair(c1, c2)
}

/// Operator pairs for which bipolar levels stay inside the IFS triangle.
pub const CLOSED_BIPOLAR_PAIRS: [(FuzzyImplication, FuzzyImplication); 5] = [
    (FuzzyImplication::Godel, FuzzyImplication::Godel),
    (FuzzyImplication::Lukasiewicz, FuzzyImplication::Lukasiewicz),
    (FuzzyImplication::Lukasiewicz, FuzzyImplication::Godel),
    (FuzzyImplication::Kleene, FuzzyImplication::Kleene),
    (FuzzyImplication::Lukasiewicz, FuzzyImplication::Kleene),
];

/// Sufficient condition for the level of `id` to stay inside its system.
///
/// Interval-valued ids are checked on the intuitionistic images of their
/// arguments. Only used for diagnostics; a `false` does not prove an escape.
pub fn closure_check(id: ImplicationId, alpha: &TruthValue, beta: &TruthValue) -> bool {
    let (a1, mut a2, b1, mut b2) = (alpha.first(), alpha.second(), beta.first(), beta.second());
    if matches!(
        id,
        ImplicationId::Vk | ImplicationId::Vl | ImplicationId::Vg1
    ) {
        a2 = 1.0 - a2;
        b2 = 1.0 - b2;
    }
    match id {
        ImplicationId::Fuzzy(_) | ImplicationId::Fg2 | ImplicationId::Vg2 => true,
        ImplicationId::Fg1 | ImplicationId::Vg1 => a1 > b1 + EPS,
        ImplicationId::Fk | ImplicationId::Fl | ImplicationId::Vk | ImplicationId::Vl => {
            a1 + a2 + EPS >= b1 + b2
        }
        ImplicationId::Bipolar(i1, i2) => CLOSED_BIPOLAR_PAIRS.contains(&(i1, i2)),
    }
}
