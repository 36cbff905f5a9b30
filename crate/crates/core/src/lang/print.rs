use std::fmt::Write;

use super::lexer::{is_ident_char, is_ident_start};
use super::{Atom, Program, SafetyMode, Term};

/// Renders a constant so that it reparses as the same constant.
pub fn quote_constant(c: &str) -> String {
    let bare = c.starts_with(|ch: char| is_ident_start(ch) && !ch.is_ascii_uppercase() && ch != '_')
        && c.chars().all(is_ident_char);
    if bare {
        c.to_string()
    } else {
        format!("'{c}'")
    }
}

fn source_atom(a: &Atom) -> String {
    let mut s = a.predicate.clone();
    if !a.args.is_empty() {
        let args: Vec<String> = a
            .args
            .iter()
            .map(|t| match t {
                Term::Variable(v) => v.clone(),
                Term::Constant(c) => quote_constant(c),
                Term::ProximityRef(c) => format!("~{}", quote_constant(c)),
            })
            .collect();
        write!(s, "({})", args.join(", ")).unwrap();
    }
    s
}

/// Renders a program in the concrete syntax accepted by the parser.
pub fn print_program(p: &Program) -> String {
    let mut out = format!("%system {}.\n", p.system);
    if let Some(mode) = p.safety {
        if mode != SafetyMode::Strict {
            writeln!(out, "%safety {mode}.").unwrap();
        }
    }
    if let Some(order) = &p.order {
        let idx: Vec<String> = order.iter().map(usize::to_string).collect();
        writeln!(out, "%order {}.", idx.join(", ")).unwrap();
    }
    for f in &p.facts {
        writeln!(out, "fact {} = {}.", source_atom(&f.atom), f.level).unwrap();
    }
    for r in &p.rules {
        let body: Vec<String> = r
            .body
            .iter()
            .map(|l| format!("{}{}", if l.negative { "not " } else { "" }, source_atom(&l.atom)))
            .collect();
        writeln!(
            out,
            "rule {} <- {} : {}, {}.",
            source_atom(&r.head),
            body.join(", "),
            r.implication,
            r.level
        )
        .unwrap();
    }
    out
}
