use super::{BackgroundKnowledge, PhiId, PhiSpec, ProximityDomain};
use crate::error::{Error, Result};
use crate::lang::lexer::{Cursor, Tok};
use crate::lang::parser::{check_level, level, system_tag};
use crate::values::ValueSystem;

fn symbol(cur: &mut Cursor) -> Result<String> {
    match cur.peek() {
        Some(Tok::Quoted(s)) => {
            let s = s.clone();
            cur.next();
            Ok(s)
        }
        _ => cur.ident(),
    }
}

/// Parses a proximity file for a program over `system`.
///
/// ```text
/// %system ivs.
/// %domain terms.
/// 'B' ~ 'V' = (0.8, 0.9).
/// %domain predicates.
/// lo ~ li = (0.7, 0.9).
/// ```
pub fn parse_proximity(text: &str, system: ValueSystem) -> Result<BackgroundKnowledge> {
    let mut cur = Cursor::new(text)?;
    let mut bk = BackgroundKnowledge::identity(system);
    let mut domain: Option<ProximityDomain> = None;
    let mut first = true;
    while !cur.at_end() {
        let span = cur.span();
        if cur.eat(&Tok::Percent) {
            let kw_span = cur.span();
            match cur.ident()?.as_str() {
                "system" if first => {
                    let declared = system_tag(&mut cur)?;
                    if declared != system {
                        return Err(Error::SystemMismatch(format!(
                            "{span}: proximity file is {declared} but the program is {system}"
                        )));
                    }
                }
                "domain" => {
                    let d_span = cur.span();
                    domain = Some(match cur.ident()?.as_str() {
                        "terms" => ProximityDomain::Terms,
                        "predicates" => ProximityDomain::Predicates,
                        other => {
                            return Err(Error::syntax(d_span, format!("unknown domain `{other}`")))
                        }
                    });
                }
                other => {
                    return Err(Error::syntax(kw_span, format!("unexpected directive `%{other}`")))
                }
            }
            cur.expect(&Tok::Dot)?;
        } else {
            let Some(d) = domain else {
                return Err(Error::syntax(span, "entry before any `%domain` section"));
            };
            let x = symbol(&mut cur)?;
            cur.expect(&Tok::Tilde)?;
            let y = symbol(&mut cur)?;
            cur.expect(&Tok::Eq)?;
            let v = level(&mut cur)?;
            cur.expect(&Tok::Dot)?;
            check_level(system, &v, &format!("{span}: {x} ~ {y}"))?;
            let rel = match d {
                ProximityDomain::Terms => &mut bk.terms,
                ProximityDomain::Predicates => &mut bk.predicates,
            };
            if rel.entries.contains_key(&(x.clone(), y.clone())) {
                return Err(Error::Value(format!("{span}: {x} ~ {y} is given twice")));
            }
            rel.insert(&x, &y, v);
        }
        first = false;
    }
    bk.validate().map_err(|p| Error::Value(p.join("; ")))?;
    Ok(bk)
}

/// Parses a function-set file of lines `phi p/n = meet|meet-product|product.`
pub fn parse_phi(text: &str) -> Result<PhiSpec> {
    let mut cur = Cursor::new(text)?;
    let mut spec = PhiSpec::new();
    while !cur.at_end() {
        cur.keyword("phi")?;
        let predicate = cur.ident()?;
        cur.expect(&Tok::Slash)?;
        let arity = cur.uint()?;
        cur.expect(&Tok::Eq)?;
        let span = cur.span();
        let id: PhiId = cur
            .ident()?
            .parse()
            .map_err(|e: Error| Error::syntax(span, e.to_string()))?;
        cur.expect(&Tok::Dot)?;
        spec.set(&predicate, arity, id);
    }
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::values::TruthValue;

    const PROX: &str = "%system ivs.\n%domain terms.\n'B' ~ 'V' = (0.8, 0.9).\n\
        %domain predicates.\nlo ~ li = (0.7, 0.9).\ngc ~ fv = (0.8, 0.9).\n";

    #[test]
    fn proximity_file() {
        let bk = parse_proximity(PROX, ValueSystem::Ivs).unwrap();
        assert_eq!(bk.terms.get("V", "B"), TruthValue::Pair(0.8, 0.9));
        assert_eq!(bk.predicates.proximity_set("gc").len(), 2);
    }

    #[test]
    fn proximity_file_errors() {
        assert!(matches!(parse_proximity(PROX, ValueSystem::Ifs), Err(Error::SystemMismatch(_))));
        assert!(matches!(
            parse_proximity("lo ~ li = 0.5.", ValueSystem::Fuzzy),
            Err(Error::Syntax { .. })
        ));
        let asym = "%domain terms.\na ~ b = (0.7, 0.2).\nb ~ a = (0.6, 0.2).";
        assert!(matches!(parse_proximity(asym, ValueSystem::Ifs), Err(Error::Value(_))));
    }

    #[test]
    fn phi_file() {
        let spec = parse_phi("phi lo/2 = meet-product.\nphi mf/1 = product.\n# note\n").unwrap();
        assert_eq!(spec.get("lo", 2), PhiId::MeetProduct);
        assert_eq!(spec.get("mf", 1), PhiId::Product);
        assert_eq!(spec.get("fv", 1), PhiId::Meet);
        assert!(parse_phi("phi lo/2 = max.").is_err());
    }
}
