//! Brute-force oracles that ignore canonical forms: type equivalence by
//! breadth-first search over the four isomorphism axioms, and reduction
//! modulo equivalence by enumerating the whole class.

use std::collections::{BTreeSet, HashSet, VecDeque};

use crate::canon::canonical_key;
use crate::equiv::eq_class;
use crate::reduce::{reducts_basic, reducts_full};
use crate::term::{AlphaKey, Term};
use crate::types::Type;

/// Every type one axiom step away from `t`, at any position, in either
/// direction.
pub fn type_neighbors(t: &Type) -> Vec<Type> {
    let mut out = Vec::new();
    root_steps(t, &mut out);
    match t {
        Type::Atom => {}
        Type::Arrow(a, b) => {
            for na in type_neighbors(a) {
                out.push(Type::Arrow(Box::new(na), b.clone()));
            }
            for nb in type_neighbors(b) {
                out.push(Type::Arrow(a.clone(), Box::new(nb)));
            }
        }
        Type::Conj(a, b) => {
            for na in type_neighbors(a) {
                out.push(Type::Conj(Box::new(na), b.clone()));
            }
            for nb in type_neighbors(b) {
                out.push(Type::Conj(a.clone(), Box::new(nb)));
            }
        }
    }
    out
}

fn root_steps(t: &Type, out: &mut Vec<Type>) {
    match t {
        Type::Atom => {}
        Type::Conj(a, b) => {
            out.push(Type::Conj(b.clone(), a.clone()));
            if let Type::Conj(a1, a2) = &**a {
                out.push(Type::Conj(a1.clone(), Box::new(Type::Conj(a2.clone(), b.clone()))));
            }
            if let Type::Conj(b1, b2) = &**b {
                out.push(Type::Conj(Box::new(Type::Conj(a.clone(), b1.clone())), b2.clone()));
            }
            if let (Type::Arrow(a1, c1), Type::Arrow(a2, c2)) = (&**a, &**b) {
                if a1 == a2 {
                    out.push(Type::Arrow(
                        a1.clone(),
                        Box::new(Type::Conj(c1.clone(), c2.clone())),
                    ));
                }
            }
        }
        Type::Arrow(a, b) => {
            if let Type::Conj(b1, b2) = &**b {
                out.push(Type::Conj(
                    Box::new(Type::Arrow(a.clone(), b1.clone())),
                    Box::new(Type::Arrow(a.clone(), b2.clone())),
                ));
            }
            if let Type::Conj(a1, a2) = &**a {
                out.push(Type::Arrow(a1.clone(), Box::new(Type::Arrow(a2.clone(), b.clone()))));
            }
            if let Type::Arrow(b1, b2) = &**b {
                out.push(Type::Arrow(Box::new(Type::Conj(a.clone(), b1.clone())), b2.clone()));
            }
        }
    }
}

/// Every type reachable from `t` through types of size at most
/// `size_budget`.
pub fn brute_closure(t: &Type, size_budget: usize) -> HashSet<Type> {
    let mut seen = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(t.clone());
    queue.push_back(t.clone());
    while let Some(cur) = queue.pop_front() {
        for nb in type_neighbors(&cur) {
            if nb.size() <= size_budget && !seen.contains(&nb) {
                seen.insert(nb.clone());
                queue.push_back(nb);
            }
        }
    }
    seen
}

/// Whether `b` is reachable from `a` without passing through a type larger
/// than `size_budget`. Sound; complete once the budget is large enough.
pub fn brute_equiv(a: &Type, b: &Type, size_budget: usize) -> bool {
    a == b || brute_closure(a, size_budget).contains(b)
}

/// Classes reached in one step from some member of the class of `r`, found
/// by enumerating the class and reducing every member syntactically. With
/// `full` unset only basic steps count. Keys are canonical.
pub fn brute_reduct_classes(r: &Term, full: bool) -> BTreeSet<AlphaKey> {
    let mut out = BTreeSet::new();
    for member in eq_class(r).members() {
        let reducts = if full {
            reducts_full(member)
        } else {
            reducts_basic(member)
        };
        for (t, _) in reducts.expect("members of a well-typed class are well-typed") {
            out.insert(canonical_key(&t));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t() -> Type {
        Type::Atom
    }

    #[test]
    fn examples() {
        let pair = Type::conj(t(), t());
        assert!(brute_equiv(&pair, &pair, 3));
        let lhs = Type::arrow(t(), pair.clone());
        let rhs = Type::conj(Type::arrow(t(), t()), Type::arrow(t(), t()));
        assert!(brute_equiv(&lhs, &rhs, 7));
        assert!(brute_equiv(&rhs, &lhs, 7));
        assert!(!brute_equiv(&t(), &pair, 5));
        assert!(!brute_equiv(&t(), &Type::arrow(t(), t()), 9));
    }

    #[test]
    fn curry_both_ways() {
        let curried = Type::arrow(t(), Type::arrow(t(), t()));
        let paired = Type::arrow(Type::conj(t(), t()), t());
        assert!(brute_equiv(&curried, &paired, 5));
        assert!(brute_equiv(&paired, &curried, 5));
    }
}
