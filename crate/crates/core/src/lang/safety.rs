use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use super::Rule;
use crate::error::Error;

/// How strictly negative literals are checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SafetyMode {
    /// Variables of a negative literal must occur in some positive literal.
    #[default]
    Strict,
    /// Negative-only variables are reported as warnings.
    Warn,
}

impl FromStr for SafetyMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "strict" => Ok(SafetyMode::Strict),
            "paper-examples" => Ok(SafetyMode::Warn),
            other => Err(Error::InvalidArgument(format!("unknown safety mode `{other}`"))),
        }
    }
}

impl fmt::Display for SafetyMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SafetyMode::Strict => "strict",
            SafetyMode::Warn => "paper-examples",
        })
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SafetyReport {
    /// Head variables missing from the body.
    pub unsafe_head: Vec<String>,
    /// Variables of negative literals missing from every positive literal.
    pub unsafe_negative: Vec<String>,
}

impl SafetyReport {
    pub fn is_safe(&self) -> bool {
        self.unsafe_head.is_empty() && self.unsafe_negative.is_empty()
    }
}

pub fn check_safety(rule: &Rule) -> SafetyReport {
    let body: BTreeSet<&str> = rule.body.iter().flat_map(|l| l.atom.variables()).collect();
    let positive: BTreeSet<&str> = rule
        .body
        .iter()
        .filter(|l| !l.negative)
        .flat_map(|l| l.atom.variables())
        .collect();
    let mut report = SafetyReport::default();
    for v in rule.head.variables() {
        if !body.contains(v) && !report.unsafe_head.iter().any(|s| s == v) {
            report.unsafe_head.push(v.to_string());
        }
    }
    for v in rule
        .body
        .iter()
        .filter(|l| l.negative)
        .flat_map(|l| l.atom.variables())
    {
        if !positive.contains(v) && !report.unsafe_negative.iter().any(|s| s == v) {
            report.unsafe_negative.push(v.to_string());
        }
    }
    report
}
