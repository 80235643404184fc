//! The symmetric term equivalence and its finite classes.
//!
//! One step of the equivalence rewrites a single position with one of
//!
//! ```text
//!     r * s          ~  s * r                 (comm)
//!     (r * s) * t    ~  r * (s * t)           (asso)
//!     \x. (r * s)    ~  (\x. r) * (\x. s)     (dist)
//!     r s t          ~  r (s * t)             (curry)
//! ```
//!
//! in either direction. The reflexive-transitive closure preserves the
//! measure M and the free variables, so every class is finite and can be
//! enumerated by breadth-first search.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, VecDeque};
use std::sync::Arc;

use crate::term::{
    all_names, alpha_key, fresh_name, free_vars, rename_binder, term_measure, AlphaKey, Term,
};

/// Every term one equivalence step away from `r`, at any position, in either
/// direction. May contain alpha-equivalent duplicates.
pub fn eq_neighbors(r: &Term) -> Vec<Term> {
    let mut out = Vec::new();
    neighbors_into(r, &mut out);
    out
}

fn neighbors_into(r: &Term, out: &mut Vec<Term>) {
    root_neighbors(r, out);
    match r {
        Term::Var(_) => {}
        Term::Abs(x, b) => {
            for nb in eq_neighbors(b) {
                out.push(Term::abs(x.clone(), nb));
            }
        }
        Term::App(f, a) => {
            for nf in eq_neighbors(f) {
                out.push(Term::App(Arc::new(nf), a.clone()));
            }
            for na in eq_neighbors(a) {
                out.push(Term::App(f.clone(), Arc::new(na)));
            }
        }
        Term::Prod(a, b) => {
            for na in eq_neighbors(a) {
                out.push(Term::Prod(Arc::new(na), b.clone()));
            }
            for nb in eq_neighbors(b) {
                out.push(Term::Prod(a.clone(), Arc::new(nb)));
            }
        }
        Term::Proj(t, b) => {
            for nb in eq_neighbors(b) {
                out.push(Term::proj(t.clone(), nb));
            }
        }
    }
}

fn root_neighbors(r: &Term, out: &mut Vec<Term>) {
    match r {
        Term::Prod(a, b) => {
            // comm
            out.push(Term::Prod(b.clone(), a.clone()));
            // asso, both directions
            if let Term::Prod(a1, a2) = &**a {
                out.push(Term::Prod(a1.clone(), Arc::new(Term::Prod(a2.clone(), b.clone()))));
            }
            if let Term::Prod(b1, b2) = &**b {
                out.push(Term::Prod(Arc::new(Term::Prod(a.clone(), b1.clone())), b2.clone()));
            }
            // dist, right to left
            if let (Term::Abs(x, r1), Term::Abs(y, r2)) = (&**a, &**b) {
                if x.sort == y.sort {
                    out.push(merge_abstractions(x, r1, y, r2));
                }
            }
        }
        Term::Abs(x, b) => {
            // dist, left to right
            if let Term::Prod(b1, b2) = &**b {
                out.push(Term::Prod(
                    Arc::new(Term::Abs(x.clone(), b1.clone())),
                    Arc::new(Term::Abs(x.clone(), b2.clone())),
                ));
            }
        }
        Term::App(f, a) => {
            // curry, both directions
            if let Term::App(f1, s) = &**f {
                out.push(Term::App(f1.clone(), Arc::new(Term::Prod(s.clone(), a.clone()))));
            }
            if let Term::Prod(s, t) = &**a {
                out.push(Term::App(Arc::new(Term::App(f.clone(), s.clone())), t.clone()));
            }
        }
        Term::Var(_) | Term::Proj(..) => {}
    }
}

/// `(\x. r1) * (\y. r2)` to `\z. (r1' * r2')`, with both binders renamed to a
/// common `z` of the shared sort.
fn merge_abstractions(
    x: &crate::term::VarSort,
    r1: &Arc<Term>,
    y: &crate::term::VarSort,
    r2: &Arc<Term>,
) -> Term {
    if x == y {
        return Term::abs(x.clone(), Term::Prod(r1.clone(), r2.clone()));
    }
    let right = Term::Abs(y.clone(), r2.clone());
    let right_names: std::collections::BTreeSet<Arc<str>> =
        free_vars(&right).into_iter().map(|v| v.name).collect();
    if !right_names.contains(&x.name) {
        // keep the left binder; pull the right body onto it
        let (_, body2) = rename_binder(y, r2, x.name.clone());
        return Term::abs(x.clone(), Term::Prod(r1.clone(), Arc::new(body2)));
    }
    let mut avoid = all_names(r1);
    avoid.extend(all_names(r2));
    avoid.insert(x.name.clone());
    avoid.insert(y.name.clone());
    let z = fresh_name(&x.name, &avoid);
    let (zx, body1) = rename_binder(x, r1, z.clone());
    let (_, body2) = rename_binder(y, r2, z);
    Term::abs(zx, Term::prod(body1, body2))
}

/// A finite equivalence class, keyed by alpha-key. Iteration follows key
/// order, so the first member is the representative.
#[derive(Clone, Debug)]
pub struct EqClass {
    members: BTreeMap<AlphaKey, Term>,
}

impl EqClass {
    pub fn representative(&self) -> &Term {
        self.members.values().next().expect("classes are non-empty")
    }

    pub fn representative_key(&self) -> &AlphaKey {
        self.members.keys().next().expect("classes are non-empty")
    }

    pub fn members(&self) -> impl Iterator<Item = &Term> {
        self.members.values()
    }

    pub fn keyed_members(&self) -> impl Iterator<Item = (&AlphaKey, &Term)> {
        self.members.iter()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, key: &AlphaKey) -> bool {
        self.members.contains_key(key)
    }

    pub fn contains_term(&self, r: &Term) -> bool {
        self.contains(&alpha_key(r))
    }
}

/// Breadth-first closure of `r` under [`eq_neighbors`].
pub fn eq_class(r: &Term) -> EqClass {
    let mut members = BTreeMap::new();
    let mut queue = VecDeque::new();
    members.insert(alpha_key(r), r.clone());
    queue.push_back(r.clone());
    while let Some(cur) = queue.pop_front() {
        for nb in eq_neighbors(&cur) {
            if let Entry::Vacant(slot) = members.entry(alpha_key(&nb)) {
                slot.insert(nb.clone());
                queue.push_back(nb);
            }
        }
    }
    EqClass { members }
}

pub fn terms_equiv(r: &Term, s: &Term) -> bool {
    if term_measure(r) != term_measure(s) || free_vars(r) != free_vars(s) {
        return false;
    }
    let target = alpha_key(s);
    alpha_key(r) == target || eq_class(r).contains(&target)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::VarSort;
    use crate::types::CanonicalType;

    fn var(name: &str) -> Term {
        Term::Var(VarSort::new(name, CanonicalType::atom()))
    }

    fn has(terms: &[Term], t: &Term) -> bool {
        let key = alpha_key(t);
        terms.iter().any(|u| alpha_key(u) == key)
    }

    #[test]
    fn comm_neighbor() {
        let r = Term::prod(var("x"), var("y"));
        let nbs = eq_neighbors(&r);
        assert_eq!(nbs, vec![Term::prod(var("y"), var("x"))]);
    }

    #[test]
    fn curry_neighbor() {
        let r = Term::app(Term::app(var("f"), var("s")), var("t"));
        assert!(has(
            &eq_neighbors(&r),
            &Term::app(var("f"), Term::prod(var("s"), var("t")))
        ));
    }

    #[test]
    fn dist_neighbor() {
        let x = VarSort::new("x", CanonicalType::atom());
        let r = Term::abs(x.clone(), Term::prod(var("y"), Term::Var(x.clone())));
        let expected = Term::prod(
            Term::abs(x.clone(), var("y")),
            Term::abs(x.clone(), Term::Var(x)),
        );
        assert!(has(&eq_neighbors(&r), &expected));
    }

    #[test]
    fn dist_back_with_different_binders() {
        let x = VarSort::new("x", CanonicalType::atom());
        let y = VarSort::new("y", CanonicalType::atom());
        let r = Term::prod(
            Term::abs(x.clone(), Term::Var(x.clone())),
            Term::abs(y.clone(), Term::Var(y.clone())),
        );
        let expected = Term::abs(x.clone(), Term::prod(Term::Var(x.clone()), Term::Var(x)));
        assert!(has(&eq_neighbors(&r), &expected));
    }

    #[test]
    fn dist_back_avoids_capture() {
        // (\x. x) * (\y. x)  : the right body mentions a free x
        let x = VarSort::new("x", CanonicalType::atom());
        let y = VarSort::new("y", CanonicalType::atom());
        let r = Term::prod(
            Term::abs(x.clone(), Term::Var(x.clone())),
            Term::abs(y.clone(), Term::Var(x.clone())),
        );
        let merged = eq_neighbors(&r)
            .into_iter()
            .find(|t| matches!(t, Term::Abs(..)))
            .unwrap();
        assert_eq!(free_vars(&merged), free_vars(&r));
        let z = VarSort::new("z", CanonicalType::atom());
        let expected = Term::abs(z.clone(), Term::prod(Term::Var(z), Term::Var(x)));
        assert_eq!(alpha_key(&merged), alpha_key(&expected));
    }

    #[test]
    fn class_sizes() {
        assert_eq!(eq_class(&var("x")).len(), 1);
        assert_eq!(eq_class(&Term::prod(var("x1"), var("x2"))).len(), 2);
        let three = Term::prod(Term::prod(var("x1"), var("x2")), var("x3"));
        assert_eq!(eq_class(&three).len(), 12);
    }

    #[test]
    fn equivalence_examples() {
        assert!(terms_equiv(
            &Term::prod(var("x"), var("y")),
            &Term::prod(var("y"), var("x"))
        ));
        let f = VarSort::new("f", CanonicalType::atom());
        let eta = Term::abs(
            VarSort::new("y", CanonicalType::atom()),
            Term::app(var("x"), var("y")),
        );
        assert!(!terms_equiv(&var("x"), &eta));
        let curried = Term::app(Term::app(Term::Var(f.clone()), var("s")), var("t"));
        let paired = Term::app(Term::Var(f), Term::prod(var("s"), var("t")));
        assert!(terms_equiv(&curried, &paired));
    }
}
