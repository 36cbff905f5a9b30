use std::collections::BTreeMap;

use super::lexer::{Cursor, Tok};
use super::{check_safety, Atom, Fact, Literal, Program, Rule, SafetyMode, Term};
use crate::error::{Error, Result, Span};
use crate::implications::ImplicationId;
use crate::values::{TruthValue, ValueSystem};

/// Parses a program, taking the safety mode from its `%safety` directive.
pub fn parse_program(text: &str) -> Result<Program> {
    parse_program_with(text, None)
}

/// Parses a program; `safety` overrides any `%safety` directive in the text.
pub fn parse_program_with(text: &str, safety: Option<SafetyMode>) -> Result<Program> {
    let mut cur = Cursor::new(text)?;
    let mut spans = Spans::default();
    let mut program = header(&mut cur)?;
    while !cur.at_end() {
        let span = cur.span();
        match cur.peek() {
            Some(Tok::Percent) => directive(&mut cur, &mut program)?,
            Some(Tok::Ident(kw)) if kw == "fact" => {
                cur.next();
                let atom = atom(&mut cur)?;
                cur.expect(&Tok::Eq)?;
                let level = level(&mut cur)?;
                cur.expect(&Tok::Dot)?;
                spans.facts.push(span);
                program.facts.push(Fact { atom, level });
            }
            Some(Tok::Ident(kw)) if kw == "rule" => {
                cur.next();
                let rule = rule(&mut cur)?;
                spans.rules.push(span);
                program.rules.push(rule);
            }
            _ => return Err(cur.error("`fact`, `rule` or a directive")),
        }
    }
    let mode = safety.or(program.safety).unwrap_or_default();
    check_program(&mut program, &spans, mode)?;
    Ok(program)
}

#[derive(Default)]
struct Spans {
    facts: Vec<Span>,
    rules: Vec<Span>,
}

fn header(cur: &mut Cursor) -> Result<Program> {
    if cur.peek() != Some(&Tok::Percent) || cur.peek_at(1) != Some(&Tok::Ident("system".into())) {
        return Err(cur.error("a `%system` header"));
    }
    cur.next();
    cur.next();
    let program = Program::new(system_tag(cur)?);
    cur.expect(&Tok::Dot)?;
    Ok(program)
}

pub(crate) fn system_tag(cur: &mut Cursor) -> Result<ValueSystem> {
    let span = cur.span();
    let tag = cur.ident()?;
    tag.parse()
        .map_err(|_| Error::syntax(span, format!("unknown value system `{tag}`")))
}

fn directive(cur: &mut Cursor, program: &mut Program) -> Result<()> {
    cur.expect(&Tok::Percent)?;
    let span = cur.span();
    match cur.ident()?.as_str() {
        "system" => return Err(Error::syntax(span, "repeated `%system` header")),
        "order" => {
            let mut order = vec![cur.uint()?];
            while cur.eat(&Tok::Comma) {
                order.push(cur.uint()?);
            }
            program.order = Some(order);
        }
        "safety" => {
            let span = cur.span();
            let mode = cur.ident()?;
            program.safety = Some(
                mode.parse()
                    .map_err(|_| Error::syntax(span, format!("unknown safety mode `{mode}`")))?,
            );
        }
        other => return Err(Error::syntax(span, format!("unknown directive `%{other}`"))),
    }
    cur.expect(&Tok::Dot)
}

fn rule(cur: &mut Cursor) -> Result<Rule> {
    let head = atom(cur)?;
    cur.expect(&Tok::Arrow)?;
    let mut body = vec![literal(cur)?];
    while cur.eat(&Tok::Comma) {
        body.push(literal(cur)?);
    }
    cur.expect(&Tok::Colon)?;
    let implication = implication(cur)?;
    cur.expect(&Tok::Comma)?;
    let level = level(cur)?;
    cur.expect(&Tok::Dot)?;
    Ok(Rule {
        head,
        body,
        implication,
        level,
    })
}

fn literal(cur: &mut Cursor) -> Result<Literal> {
    let negated = matches!(cur.peek(), Some(Tok::Ident(s)) if s == "not")
        && matches!(cur.peek_at(1), Some(Tok::Ident(_)));
    if negated {
        cur.next();
    }
    Ok(Literal {
        atom: atom(cur)?,
        negative: negated,
    })
}

fn implication(cur: &mut Cursor) -> Result<ImplicationId> {
    let span = cur.span();
    let named = |name: String| {
        ImplicationId::from_name(&name).map_err(|e| Error::syntax(span, e.to_string()))
    };
    if cur.eat(&Tok::LParen) {
        let first = named(cur.ident()?)?;
        cur.expect(&Tok::Comma)?;
        let second = named(cur.ident()?)?;
        cur.expect(&Tok::RParen)?;
        match (first, second) {
            (ImplicationId::Fuzzy(a), ImplicationId::Fuzzy(b)) => Ok(ImplicationId::Bipolar(a, b)),
            _ => Err(Error::syntax(span, "an operator pair must combine two fuzzy operators")),
        }
    } else {
        named(cur.ident()?)
    }
}

pub(crate) fn atom(cur: &mut Cursor) -> Result<Atom> {
    let predicate = cur.ident()?;
    let mut args = Vec::new();
    if cur.eat(&Tok::LParen) {
        args.push(term(cur)?);
        while cur.eat(&Tok::Comma) {
            args.push(term(cur)?);
        }
        cur.expect(&Tok::RParen)?;
    }
    Ok(Atom { predicate, args })
}

fn term(cur: &mut Cursor) -> Result<Term> {
    match cur.next().map(|t| t.tok) {
        Some(Tok::Ident(s)) => {
            if s.starts_with(|c: char| c.is_ascii_uppercase() || c == '_') {
                Ok(Term::Variable(s))
            } else {
                Ok(Term::Constant(s))
            }
        }
        Some(Tok::Quoted(s)) => Ok(Term::Constant(s)),
        Some(Tok::Tilde) => match cur.next().map(|t| t.tok) {
            Some(Tok::Ident(s)) | Some(Tok::Quoted(s)) => Ok(Term::ProximityRef(s)),
            _ => Err(cur.error("a constant after `~`")),
        },
        _ => Err(cur.error("a term")),
    }
}

pub(crate) fn level(cur: &mut Cursor) -> Result<TruthValue> {
    if cur.eat(&Tok::LParen) {
        let a = cur.number()?;
        cur.expect(&Tok::Comma)?;
        let b = cur.number()?;
        cur.expect(&Tok::RParen)?;
        Ok(TruthValue::Pair(a, b))
    } else {
        Ok(TruthValue::Scalar(cur.number()?))
    }
}

/// Parses a single atom such as `li(M, X)`; a trailing `.` is optional.
pub fn parse_atom(text: &str) -> Result<Atom> {
    let mut cur = Cursor::new(text)?;
    let a = atom(&mut cur)?;
    cur.eat(&Tok::Dot);
    if !cur.at_end() {
        return Err(cur.error("end of input"));
    }
    Ok(a)
}

/// Parses a level such as `0.8` or `(0.4, 0.5)` and checks it against `sys`.
pub fn parse_level(text: &str, sys: ValueSystem) -> Result<TruthValue> {
    let mut cur = Cursor::new(text)?;
    let v = level(&mut cur)?;
    if !cur.at_end() {
        return Err(cur.error("end of input"));
    }
    check_level(sys, &v, "level")?;
    Ok(v)
}

pub(crate) fn check_level(sys: ValueSystem, v: &TruthValue, what: &str) -> Result<()> {
    if v.is_pair() != sys.is_pair() {
        return Err(Error::SystemMismatch(format!(
            "{what} {v} does not fit the {sys} system"
        )));
    }
    sys.validate_input(v)
        .map_err(|violation| Error::Value(format!("{what}: {violation}")))
}

fn check_program(program: &mut Program, spans: &Spans, mode: SafetyMode) -> Result<()> {
    let sys = program.system;
    let mut arities: BTreeMap<&str, usize> = BTreeMap::new();
    for a in program.atoms() {
        if let Some(&n) = arities.get(a.predicate.as_str()) {
            if n != a.arity() {
                return Err(Error::Arity {
                    predicate: a.predicate.clone(),
                    first: n,
                    second: a.arity(),
                });
            }
        } else {
            arities.insert(&a.predicate, a.arity());
        }
    }

    let above_bottom = |v: &TruthValue, what: &str| {
        if sys.is_bottom(v) {
            Err(Error::Value(format!("{what}: level {v} must be above bottom")))
        } else {
            Ok(())
        }
    };
    for (f, span) in program.facts.iter().zip(&spans.facts) {
        let what = format!("{span}: fact {}", f.atom);
        check_level(sys, &f.level, &what)?;
        above_bottom(&f.level, &what)?;
        if let Some(v) = f.atom.variables().next() {
            return Err(Error::Safety(format!(
                "{span}: fact {} has variable {v}",
                f.atom
            )));
        }
        if f.atom.args.iter().any(|t| matches!(t, Term::ProximityRef(_))) {
            return Err(Error::syntax(*span, "proximity references are not allowed in programs"));
        }
    }

    let mut warnings = Vec::new();
    for (i, (r, span)) in program.rules.iter().zip(&spans.rules).enumerate() {
        let what = format!("{span}: rule {}", i + 1);
        if !r.implication.is_compatible(sys) {
            return Err(Error::SystemMismatch(format!(
                "{what}: implication {} cannot be used in the {sys} system",
                r.implication
            )));
        }
        check_level(sys, &r.level, &what)?;
        above_bottom(&r.level, &what)?;
        let atoms = std::iter::once(&r.head).chain(r.body.iter().map(|l| &l.atom));
        if atoms
            .flat_map(|a| a.args.iter())
            .any(|t| matches!(t, Term::ProximityRef(_)))
        {
            return Err(Error::syntax(*span, "proximity references are not allowed in programs"));
        }
        let report = check_safety(r);
        if !report.unsafe_head.is_empty() {
            return Err(Error::Safety(format!(
                "{what}: head variable(s) {} do not occur in the body",
                report.unsafe_head.join(", ")
            )));
        }
        if !report.unsafe_negative.is_empty() {
            let msg = format!(
                "{what}: variable(s) {} occur only in negative literals",
                report.unsafe_negative.join(", ")
            );
            match mode {
                SafetyMode::Strict => return Err(Error::Safety(msg)),
                SafetyMode::Warn => warnings.push(format!("warning: {msg}")),
            }
        }
    }
    program.warnings.extend(warnings);
    Ok(())
}
