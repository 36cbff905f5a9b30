use std::collections::BTreeMap;

use super::{Atom, Term};

/// Variable bindings. Bound terms may themselves be variables bound elsewhere.
pub type Substitution = BTreeMap<String, Term>;

fn walk<'a>(t: &'a Term, s: &'a Substitution) -> &'a Term {
    let mut t = t;
    while let Term::Variable(v) = t {
        match s.get(v) {
            Some(next) => t = next,
            None => break,
        }
    }
    t
}

/// Whether two ground terms may be identified.
///
/// A proximity reference behaves as its constant.
fn same_constant(a: &Term, b: &Term) -> bool {
    match (a, b) {
        (Term::Constant(x) | Term::ProximityRef(x), Term::Constant(y) | Term::ProximityRef(y)) => x == y,
        _ => false,
    }
}

/// Extends `s` so that `a` and `b` become equal, if possible.
pub(crate) fn unify_terms(a: &Term, b: &Term, s: &mut Substitution) -> bool {
    let (a, b) = (walk(a, s).clone(), walk(b, s).clone());
    match (&a, &b) {
        (Term::Variable(x), Term::Variable(y)) if x == y => true,
        (Term::Variable(x), _) => {
            s.insert(x.clone(), b);
            true
        }
        (_, Term::Variable(y)) => {
            s.insert(y.clone(), a);
            true
        }
        _ => same_constant(&a, &b),
    }
}

/// Most general unifier of two function-free atoms.
pub fn unify(a: &Atom, b: &Atom) -> Option<Substitution> {
    if a.predicate != b.predicate || a.arity() != b.arity() {
        return None;
    }
    let mut s = Substitution::new();
    for (x, y) in a.args.iter().zip(&b.args) {
        if !unify_terms(x, y, &mut s) {
            return None;
        }
    }
    Some(s)
}

pub fn apply_substitution(atom: &Atom, s: &Substitution) -> Atom {
    Atom {
        predicate: atom.predicate.clone(),
        args: atom.args.iter().map(|t| walk(t, s).clone()).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::parse_atom;

    #[test]
    fn binds_variables() {
        let s = unify(&parse_atom("li('M', X)").unwrap(), &parse_atom("li('M', 'V')").unwrap()).unwrap();
        assert_eq!(s.get("X"), Some(&Term::constant("V")));
        assert_eq!(s.len(), 1);
    }

    #[test]
    fn clashes_fail() {
        assert!(unify(&parse_atom("p(a)").unwrap(), &parse_atom("p(b)").unwrap()).is_none());
        assert!(unify(&parse_atom("p(a)").unwrap(), &parse_atom("q(a)").unwrap()).is_none());
        assert!(unify(&parse_atom("p(X, X)").unwrap(), &parse_atom("p(a, b)").unwrap()).is_none());
    }

    #[test]
    fn proximity_reference_matches_its_constant() {
        let a = parse_atom("p(c)").unwrap();
        let b = Atom::new("p", vec![Term::ProximityRef("c".into())]);
        assert!(unify(&a, &b).is_some());
    }

    #[test]
    fn chains_resolve() {
        let a = parse_atom("p(X, Y)").unwrap();
        let b = parse_atom("p(Y, a)").unwrap();
        let s = unify(&a, &b).unwrap();
        assert_eq!(apply_substitution(&a, &s), parse_atom("p(a, a)").unwrap());
    }
}
