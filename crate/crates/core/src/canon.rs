//! Canonical representatives of term equivalence classes.
//!
//! Orienting the equivalence gives a normal form reached without enumerating
//! the class: abstractions distribute over products, products are flattened
//! and sorted, and an application takes a sorted multiset of arguments, so
//! `r (s * t)`, `r s t` and `r t s` share the form `r s t`. Two terms are
//! equivalent exactly when their canonical forms are alpha-equivalent.

use std::sync::Arc;

use crate::term::{alpha_key, alpha_key_in, AlphaKey, Term, VarSort};

/// Canonical form of a closed-scope term.
pub fn canonical(r: &Term) -> Term {
    canonical_in(r, &mut Vec::new())
}

/// Canonical form of `r` sitting under the binders in `scope`.
pub fn canonical_in(r: &Term, scope: &mut Vec<VarSort>) -> Term {
    match r {
        Term::Var(_) => r.clone(),
        Term::Abs(x, b) => {
            scope.push(x.clone());
            let body = canonical_in(b, scope);
            scope.pop();
            mk_abs(x, body, scope)
        }
        Term::App(f, a) => {
            let f = canonical_in(f, scope);
            let a = canonical_in(a, scope);
            mk_app(f, a, scope)
        }
        Term::Prod(a, b) => {
            let mut parts = components(&canonical_in(a, scope));
            parts.extend(components(&canonical_in(b, scope)));
            from_components(parts, scope)
        }
        Term::Proj(t, b) => Term::proj(t.clone(), canonical_in(b, scope)),
    }
}

/// Key of the class of `r`.
pub fn canonical_key(r: &Term) -> AlphaKey {
    alpha_key(&canonical(r))
}

/// Factors of a right-nested product; a non-product is its only factor.
pub fn components(r: &Term) -> Vec<Arc<Term>> {
    let mut out = Vec::new();
    let mut cur = r;
    while let Term::Prod(a, b) = cur {
        out.push(a.clone());
        cur = b;
    }
    out.push(Arc::new(cur.clone()));
    out
}

/// Head and arguments of a left-nested application.
pub fn spine(r: &Term) -> (Arc<Term>, Vec<Arc<Term>>) {
    let mut args = Vec::new();
    let mut cur = r;
    while let Term::App(f, a) = cur {
        args.push(a.clone());
        cur = f;
    }
    args.reverse();
    (Arc::new(cur.clone()), args)
}

/// Sorts canonical factors (none a product) and nests them to the right.
pub fn from_components(mut parts: Vec<Arc<Term>>, scope: &[VarSort]) -> Term {
    sort_in(&mut parts, scope);
    let mut iter = parts.into_iter().rev();
    let last = iter.next().expect("at least one factor");
    iter.fold(last, |acc, p| Arc::new(Term::Prod(p, acc)))
        .as_ref()
        .clone()
}

/// `\x. body` for a canonical body, distributing over a product.
pub fn mk_abs(x: &VarSort, body: Term, scope: &[VarSort]) -> Term {
    if !matches!(body, Term::Prod(..)) {
        return Term::abs(x.clone(), body);
    }
    let parts = components(&body)
        .into_iter()
        .map(|p| Arc::new(Term::Abs(x.clone(), p)))
        .collect();
    from_components(parts, scope)
}

/// `f a` for canonical `f` and `a`.
pub fn mk_app(f: Term, a: Term, scope: &[VarSort]) -> Term {
    let (head, mut args) = spine(&f);
    args.extend(components(&a));
    apply_sorted(head, args, scope)
}

/// `head` applied to canonical arguments, each possibly a product.
pub fn mk_apps(head: Term, args: &[Arc<Term>], scope: &[VarSort]) -> Term {
    args.iter()
        .fold(head, |acc, a| mk_app(acc, (**a).clone(), scope))
}

fn apply_sorted(head: Arc<Term>, mut args: Vec<Arc<Term>>, scope: &[VarSort]) -> Term {
    if args.is_empty() {
        return (*head).clone();
    }
    sort_in(&mut args, scope);
    args.into_iter()
        .fold(head, |acc, a| Arc::new(Term::App(acc, a)))
        .as_ref()
        .clone()
}

fn sort_in(parts: &mut [Arc<Term>], scope: &[VarSort]) {
    if parts.len() > 1 {
        parts.sort_by_cached_key(|p| alpha_key_in(p, scope));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equiv::eq_class;
    use crate::types::CanonicalType;

    fn tau() -> CanonicalType {
        CanonicalType::atom()
    }
    fn var(name: &str) -> Term {
        Term::Var(VarSort::new(name, tau()))
    }

    #[test]
    fn flattens_products_and_arguments() {
        let a = Term::prod(Term::prod(var("c"), var("a")), var("b"));
        let b = Term::prod(var("b"), Term::prod(var("a"), var("c")));
        assert_eq!(canonical(&a), canonical(&b));
        let f = var("f");
        let curried = Term::app(Term::app(f.clone(), var("t")), var("s"));
        let paired = Term::app(f, Term::prod(var("s"), var("t")));
        assert_eq!(canonical(&curried), canonical(&paired));
    }

    #[test]
    fn distributes_abstractions() {
        let x = VarSort::new("x", tau());
        let y = VarSort::new("y", tau());
        let merged = Term::abs(x.clone(), Term::prod(Term::Var(x.clone()), var("z")));
        let split = Term::prod(
            Term::abs(y.clone(), var("z")),
            Term::abs(y.clone(), Term::Var(y)),
        );
        assert_eq!(canonical_key(&merged), canonical_key(&split));
    }

    #[test]
    fn canonical_form_is_a_member() {
        let x = VarSort::new("x", tau());
        let r = Term::abs(
            x.clone(),
            Term::prod(Term::prod(var("b"), Term::Var(x)), var("a")),
        );
        assert!(eq_class(&r).contains_term(&canonical(&r)));
    }
}
