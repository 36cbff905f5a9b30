//! Truth values and the lattices they live in.
//!
//! A fuzzy level is a single real in `[0, 1]`. The intuitionistic (IFS),
//! interval-valued (IVS) and bipolar systems use pairs. Each system fixes an
//! order, and with it meet, join, bottom and top:
//!
//! | system      | order on `(x1, x2) <= (y1, y2)` | bottom   | top      |
//! |-------------|---------------------------------|----------|----------|
//! | `fuzzy`     | `x <= y`                        | `0`      | `1`      |
//! | `ifs`       | `x1 <= y1` and `x2 >= y2`       | `(0, 1)` | `(1, 0)` |
//! | `ivs`       | `x1 <= y1` and `x2 <= y2`       | `(0, 0)` | `(1, 1)` |
//! | `bipolar-a` | coordinate-wise, like `ivs`     | `(0, 0)` | `(1, 1)` |
//! | `bipolar-b` | like `ifs`                      | `(0, 1)` | `(1, 0)` |
//!
//! Bipolar variant "a" evaluates both coordinates as ordinary fuzzy levels,
//! so its order is the plain product order. Variant "b" complements the second
//! coordinate before evaluating it, which turns the product order into the
//! IFS order on the original values.
//!
//! All comparisons use the absolute tolerance [`EPS`].

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance for every comparison between reals.
pub const EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ValueSystem {
    Fuzzy,
    Ifs,
    Ivs,
    BipolarA,
    BipolarB,
}

/// Which partial order a system uses on its values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum OrderKind {
    Scalar,
    /// Membership up, non-membership down.
    Intuitionistic,
    /// Both coordinates up.
    Product,
}

/// A level: a fuzzy scalar or a pair of reals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum TruthValue {
    Scalar(f64),
    Pair(f64, f64),
}

/// Bottom and top element of a system's lattice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeConstants {
    pub bottom: TruthValue,
    pub top: TruthValue,
}

/// Why a value does not belong to a value system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation(pub String);

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl TruthValue {
    pub fn pair(m1: f64, m2: f64) -> Self {
        TruthValue::Pair(m1, m2)
    }

    pub fn is_pair(&self) -> bool {
        matches!(self, TruthValue::Pair(..))
    }

    /// The components as a slice-like vector, used for JSON output.
    pub fn components(&self) -> Vec<f64> {
        match *self {
            TruthValue::Scalar(m) => vec![m],
            TruthValue::Pair(a, b) => vec![a, b],
        }
    }

    /// Component-wise closeness within `tol`; values of different shape are never close.
    pub fn approx_eq(&self, other: &TruthValue, tol: f64) -> bool {
        match (*self, *other) {
            (TruthValue::Scalar(a), TruthValue::Scalar(b)) => (a - b).abs() <= tol,
            (TruthValue::Pair(a1, a2), TruthValue::Pair(b1, b2)) => {
                (a1 - b1).abs() <= tol && (a2 - b2).abs() <= tol
            }
            _ => false,
        }
    }

    pub fn first(&self) -> f64 {
        match *self {
            TruthValue::Scalar(m) => m,
            TruthValue::Pair(a, _) => a,
        }
    }

    pub fn second(&self) -> f64 {
        match *self {
            TruthValue::Scalar(m) => m,
            TruthValue::Pair(_, b) => b,
        }
    }
}

/// Renders a real with at most nine decimals and no trailing zeros.
pub fn format_number(x: f64) -> String {
    let s = format!("{:.9}", x);
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

impl fmt::Display for TruthValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            TruthValue::Scalar(m) => f.write_str(&format_number(m)),
            TruthValue::Pair(a, b) => {
                write!(f, "({}, {})", format_number(a), format_number(b))
            }
        }
    }
}

impl ValueSystem {
    pub const ALL: [ValueSystem; 5] = [
        ValueSystem::Fuzzy,
        ValueSystem::Ifs,
        ValueSystem::Ivs,
        ValueSystem::BipolarA,
        ValueSystem::BipolarB,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            ValueSystem::Fuzzy => "fuzzy",
            ValueSystem::Ifs => "ifs",
            ValueSystem::Ivs => "ivs",
            ValueSystem::BipolarA => "bipolar-a",
            ValueSystem::BipolarB => "bipolar-b",
        }
    }

    pub fn is_pair(self) -> bool {
        !matches!(self, ValueSystem::Fuzzy)
    }

    pub fn is_bipolar(self) -> bool {
        matches!(self, ValueSystem::BipolarA | ValueSystem::BipolarB)
    }

    pub(crate) fn order_kind(self) -> OrderKind {
        match self {
            ValueSystem::Fuzzy => OrderKind::Scalar,
            ValueSystem::Ifs | ValueSystem::BipolarB => OrderKind::Intuitionistic,
            ValueSystem::Ivs | ValueSystem::BipolarA => OrderKind::Product,
        }
    }

    pub fn constants(self) -> LatticeConstants {
        match self.order_kind() {
            OrderKind::Scalar => LatticeConstants {
                bottom: TruthValue::Scalar(0.0),
                top: TruthValue::Scalar(1.0),
            },
            OrderKind::Intuitionistic => LatticeConstants {
                bottom: TruthValue::Pair(0.0, 1.0),
                top: TruthValue::Pair(1.0, 0.0),
            },
            OrderKind::Product => LatticeConstants {
                bottom: TruthValue::Pair(0.0, 0.0),
                top: TruthValue::Pair(1.0, 1.0),
            },
        }
    }

    pub fn bottom(self) -> TruthValue {
        self.constants().bottom
    }

    pub fn top(self) -> TruthValue {
        self.constants().top
    }

    /// Rejects values whose shape does not match the system.
    pub fn check_shape(self, a: &TruthValue) -> Result<()> {
        if a.is_pair() == self.is_pair() {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!(
                "{} value {} used in the {} system",
                if a.is_pair() { "pair" } else { "scalar" },
                a,
                self.tag()
            )))
        }
    }

    /// Checks the system's constraint on a value. Violations are data, not faults.
    pub fn validate(self, a: &TruthValue) -> std::result::Result<(), Violation> {
        let in_unit = |x: f64| (-EPS..=1.0 + EPS).contains(&x);
        match (self, *a) {
            (ValueSystem::Fuzzy, TruthValue::Scalar(m)) => {
                if in_unit(m) {
                    Ok(())
                } else {
                    Err(Violation(format!("{} is outside [0, 1]", format_number(m))))
                }
            }
            (ValueSystem::Fuzzy, TruthValue::Pair(..)) => Err(Violation(format!(
                "pair {} in the fuzzy system",
                a
            ))),
            (_, TruthValue::Scalar(m)) => Err(Violation(format!(
                "scalar {} in the {} system",
                format_number(m),
                self.tag()
            ))),
            (sys, TruthValue::Pair(m1, m2)) => {
                if !in_unit(m1) || !in_unit(m2) {
                    return Err(Violation(format!("{} has a component outside [0, 1]", a)));
                }
                match sys {
                    ValueSystem::Ifs if m1 + m2 > 1.0 + EPS => Err(Violation(format!(
                        "{} violates m1 + m2 <= 1 (sum {})",
                        a,
                        format_number(m1 + m2)
                    ))),
                    ValueSystem::Ivs if m1 > m2 + EPS => Err(Violation(format!(
                        "{} violates m1 <= m2 ({} > {})",
                        a,
                        format_number(m1),
                        format_number(m2)
                    ))),
                    _ => Ok(()),
                }
            }
        }
    }

    /// The constraint required of facts, rule levels and proximity values.
    ///
    /// Identical to [`validate`](Self::validate) except that bipolar inputs must
    /// additionally satisfy the IFS sum constraint.
    pub fn validate_input(self, a: &TruthValue) -> std::result::Result<(), Violation> {
        self.validate(a)?;
        if let (true, TruthValue::Pair(m1, m2)) = (self.is_bipolar(), *a) {
            if m1 + m2 > 1.0 + EPS {
                return Err(Violation(format!(
                    "{} violates m1 + m2 <= 1 required of bipolar inputs",
                    a
                )));
            }
        }
        Ok(())
    }

    fn check_pair_shapes(self, a: &TruthValue, b: &TruthValue) -> Result<()> {
        self.check_shape(a)?;
        self.check_shape(b)
    }

    pub fn leq(self, a: &TruthValue, b: &TruthValue) -> Result<bool> {
        self.check_pair_shapes(a, b)?;
        Ok(self.leq_raw(a, b))
    }

    pub fn meet(self, a: &TruthValue, b: &TruthValue) -> Result<TruthValue> {
        self.check_pair_shapes(a, b)?;
        Ok(self.meet_raw(a, b))
    }

    pub fn join(self, a: &TruthValue, b: &TruthValue) -> Result<TruthValue> {
        self.check_pair_shapes(a, b)?;
        Ok(self.join_raw(a, b))
    }

    pub fn negate(self, a: &TruthValue) -> Result<TruthValue> {
        self.check_shape(a)?;
        Ok(self.negate_raw(a))
    }

    // The `_raw` variants assume shapes were checked when the program was loaded.

    pub(crate) fn leq_raw(self, a: &TruthValue, b: &TruthValue) -> bool {
        let (a1, a2, b1, b2) = (a.first(), a.second(), b.first(), b.second());
        match self.order_kind() {
            OrderKind::Scalar => a1 <= b1 + EPS,
            OrderKind::Intuitionistic => a1 <= b1 + EPS && a2 + EPS >= b2,
            OrderKind::Product => a1 <= b1 + EPS && a2 <= b2 + EPS,
        }
    }

    pub(crate) fn meet_raw(self, a: &TruthValue, b: &TruthValue) -> TruthValue {
        let (a1, a2, b1, b2) = (a.first(), a.second(), b.first(), b.second());
        match self.order_kind() {
            OrderKind::Scalar => TruthValue::Scalar(a1.min(b1)),
            OrderKind::Intuitionistic => TruthValue::Pair(a1.min(b1), a2.max(b2)),
            OrderKind::Product => TruthValue::Pair(a1.min(b1), a2.min(b2)),
        }
    }

    pub(crate) fn join_raw(self, a: &TruthValue, b: &TruthValue) -> TruthValue {
        let (a1, a2, b1, b2) = (a.first(), a.second(), b.first(), b.second());
        match self.order_kind() {
            OrderKind::Scalar => TruthValue::Scalar(a1.max(b1)),
            OrderKind::Intuitionistic => TruthValue::Pair(a1.max(b1), a2.min(b2)),
            OrderKind::Product => TruthValue::Pair(a1.max(b1), a2.max(b2)),
        }
    }

    pub(crate) fn negate_raw(self, a: &TruthValue) -> TruthValue {
        match (self, *a) {
            (_, TruthValue::Scalar(m)) => TruthValue::Scalar(1.0 - m),
            (ValueSystem::Ifs, TruthValue::Pair(m1, m2)) => TruthValue::Pair(m2, m1),
            (ValueSystem::Ivs, TruthValue::Pair(m1, m2)) => TruthValue::Pair(1.0 - m2, 1.0 - m1),
            (_, TruthValue::Pair(m1, m2)) => TruthValue::Pair(1.0 - m1, 1.0 - m2),
        }
    }

    /// Equal to bottom within the tolerance.
    pub fn is_bottom(self, a: &TruthValue) -> bool {
        a.approx_eq(&self.bottom(), EPS)
    }

    /// Meet of a non-empty sequence; `top` for an empty one.
    pub(crate) fn meet_all<'a>(self, values: impl IntoIterator<Item = &'a TruthValue>) -> TruthValue {
        values
            .into_iter()
            .fold(self.top(), |acc, v| self.meet_raw(&acc, v))
    }
}

impl fmt::Display for ValueSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for ValueSystem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ValueSystem::ALL
            .into_iter()
            .find(|sys| sys.tag() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown value system `{s}`")))
    }
}

/// `(m1, m2) -> (m1, 1 - m2)`; the input must be a valid IFS pair.
pub fn ifs_to_ivs(a: &TruthValue) -> Result<TruthValue> {
    convert(a, ValueSystem::Ifs)
}

/// `(m1, m2) -> (m1, 1 - m2)`; the input must be a valid IVS pair.
pub fn ivs_to_ifs(a: &TruthValue) -> Result<TruthValue> {
    convert(a, ValueSystem::Ivs)
}

fn convert(a: &TruthValue, from: ValueSystem) -> Result<TruthValue> {
    from.validate(a)
        .map_err(|v| Error::InvalidArgument(v.to_string()))?;
    match *a {
        TruthValue::Pair(m1, m2) => Ok(TruthValue::Pair(m1, 1.0 - m2)),
        TruthValue::Scalar(_) => unreachable!("validated as a pair"),
    }
}
