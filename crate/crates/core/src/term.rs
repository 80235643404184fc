//! Terms with sorted variables.
//!
//! Each variable carries the canonical type of the set it is drawn from, so
//! `x` at sort `A` and `x` at sort `B` are different variables whenever
//! `A` and `B` are not equivalent. Free variables need no context.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::types::CanonicalType;

/// A variable: a name together with its sort.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarSort {
    pub name: Arc<str>,
    pub sort: CanonicalType,
}

impl VarSort {
    pub fn new(name: impl Into<Arc<str>>, sort: CanonicalType) -> VarSort {
        VarSort {
            name: name.into(),
            sort,
        }
    }

    fn renamed(&self, name: Arc<str>) -> VarSort {
        VarSort {
            name,
            sort: self.sort.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Var(VarSort),
    Abs(VarSort, Arc<Term>),
    App(Arc<Term>, Arc<Term>),
    Prod(Arc<Term>, Arc<Term>),
    /// Projection onto a conjunct, indexed by its (canonical) type.
    Proj(CanonicalType, Arc<Term>),
}

impl Term {
    pub fn var(v: VarSort) -> Term {
        Term::Var(v)
    }

    pub fn abs(binder: VarSort, body: Term) -> Term {
        Term::Abs(binder, Arc::new(body))
    }

    pub fn app(fun: Term, arg: Term) -> Term {
        Term::App(Arc::new(fun), Arc::new(arg))
    }

    pub fn prod(left: Term, right: Term) -> Term {
        Term::Prod(Arc::new(left), Arc::new(right))
    }

    pub fn proj(target: CanonicalType, body: Term) -> Term {
        Term::Proj(target, Arc::new(body))
    }

    pub fn is_intro(&self) -> bool {
        matches!(self, Term::Abs(..) | Term::Prod(..))
    }

    pub fn is_elim(&self) -> bool {
        matches!(self, Term::App(..) | Term::Proj(..))
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    /// Direct subterms, in path order.
    pub fn children(&self) -> Vec<&Arc<Term>> {
        match self {
            Term::Var(_) => vec![],
            Term::Abs(_, b) | Term::Proj(_, b) => vec![b],
            Term::App(a, b) | Term::Prod(a, b) => vec![a, b],
        }
    }

    /// The subterm at `path`, if the path is valid.
    pub fn at(&self, path: &[u8]) -> Option<&Term> {
        let mut cur = self;
        for &step in path {
            cur = cur.children().get(step as usize)?;
        }
        Some(cur)
    }

    pub fn free_vars(&self) -> BTreeSet<VarSort> {
        free_vars(self)
    }

    /// S: one per node.
    pub fn size(&self) -> usize {
        term_size(self)
    }
}

pub fn free_vars(r: &Term) -> BTreeSet<VarSort> {
    let mut out = BTreeSet::new();
    collect_free(r, &mut Vec::new(), &mut out);
    out
}

fn collect_free<'a>(r: &'a Term, bound: &mut Vec<&'a VarSort>, out: &mut BTreeSet<VarSort>) {
    match r {
        Term::Var(v) => {
            if !bound.contains(&v) {
                out.insert(v.clone());
            }
        }
        Term::Abs(x, b) => {
            bound.push(x);
            collect_free(b, bound, out);
            bound.pop();
        }
        Term::App(a, b) | Term::Prod(a, b) => {
            collect_free(a, bound, out);
            collect_free(b, bound, out);
        }
        Term::Proj(_, b) => collect_free(b, bound, out),
    }
}

pub fn is_free_in(x: &VarSort, r: &Term) -> bool {
    match r {
        Term::Var(v) => v == x,
        Term::Abs(y, b) => y != x && is_free_in(x, b),
        Term::App(a, b) | Term::Prod(a, b) => is_free_in(x, a) || is_free_in(x, b),
        Term::Proj(_, b) => is_free_in(x, b),
    }
}

/// Every name occurring in `r`, bound or free.
pub fn all_names(r: &Term) -> BTreeSet<Arc<str>> {
    fn go(r: &Term, out: &mut BTreeSet<Arc<str>>) {
        match r {
            Term::Var(v) => {
                out.insert(v.name.clone());
            }
            Term::Abs(x, b) => {
                out.insert(x.name.clone());
                go(b, out);
            }
            Term::App(a, b) | Term::Prod(a, b) => {
                go(a, out);
                go(b, out);
            }
            Term::Proj(_, b) => go(b, out),
        }
    }
    let mut out = BTreeSet::new();
    go(r, &mut out);
    out
}

/// A name derived from `base` (trailing digits stripped, then the least
/// numeric suffix) that is not in `avoid`.
pub fn fresh_name(base: &str, avoid: &BTreeSet<Arc<str>>) -> Arc<str> {
    let stem = base.trim_end_matches(|c: char| c.is_ascii_digit());
    let stem = if stem.is_empty() { "x" } else { stem };
    (1..)
        .map(|n| format!("{stem}{n}"))
        .find(|name| !avoid.contains(name.as_str()))
        .map(Arc::from)
        .expect("infinitely many candidates")
}

/// Capture-avoiding substitution `r[s/x]`.
pub fn subst(r: &Term, x: &VarSort, s: &Term) -> Term {
    let s_names: BTreeSet<Arc<str>> = free_vars(s).into_iter().map(|v| v.name).collect();
    subst_in(r, x, s, &s_names)
}

fn subst_in(r: &Term, x: &VarSort, s: &Term, s_names: &BTreeSet<Arc<str>>) -> Term {
    match r {
        Term::Var(v) if v == x => s.clone(),
        Term::Var(_) => r.clone(),
        Term::Abs(y, b) => {
            if y == x || !is_free_in(x, b) {
                return r.clone();
            }
            if s_names.contains(&y.name) {
                let mut avoid = s_names.clone();
                avoid.extend(all_names(b));
                avoid.insert(x.name.clone());
                let fresh = y.renamed(fresh_name(&y.name, &avoid));
                let body = subst(b, y, &Term::Var(fresh.clone()));
                Term::abs(fresh, subst_in(&body, x, s, s_names))
            } else {
                Term::abs(y.clone(), subst_in(b, x, s, s_names))
            }
        }
        Term::App(a, b) => Term::app(subst_in(a, x, s, s_names), subst_in(b, x, s, s_names)),
        Term::Prod(a, b) => Term::prod(subst_in(a, x, s, s_names), subst_in(b, x, s, s_names)),
        Term::Proj(t, b) => Term::proj(t.clone(), subst_in(b, x, s, s_names)),
    }
}

/// Renames the binder of an abstraction to `name`, rewriting its bound
/// occurrences.
pub fn rename_binder(binder: &VarSort, body: &Term, name: Arc<str>) -> (VarSort, Term) {
    let fresh = binder.renamed(name);
    let body = subst(body, binder, &Term::Var(fresh.clone()));
    (fresh, body)
}

/// Alpha-renames every binder to the first of `x`, `y`, `z`, `w`, `u`,
/// `v`, `x1`, `x2`, ... not already visible, for display.
pub fn tidy_binders(r: &Term) -> Term {
    let visible: BTreeSet<Arc<str>> = free_vars(r).into_iter().map(|v| v.name).collect();
    tidy_in(r, &visible)
}

fn tidy_in(r: &Term, visible: &BTreeSet<Arc<str>>) -> Term {
    match r {
        Term::Var(_) => r.clone(),
        Term::Abs(x, b) => {
            let name = ["x", "y", "z", "w", "u", "v"]
                .into_iter()
                .map(Arc::from)
                .find(|n: &Arc<str>| !visible.contains(n))
                .unwrap_or_else(|| fresh_name("x", visible));
            let (x, body) = if name == x.name {
                (x.clone(), (**b).clone())
            } else {
                rename_binder(x, b, name.clone())
            };
            let mut inner = visible.clone();
            inner.insert(name);
            Term::abs(x, tidy_in(&body, &inner))
        }
        Term::App(a, b) => Term::app(tidy_in(a, visible), tidy_in(b, visible)),
        Term::Prod(a, b) => Term::prod(tidy_in(a, visible), tidy_in(b, visible)),
        Term::Proj(t, b) => Term::proj(t.clone(), tidy_in(b, visible)),
    }
}

/// S(r): variables count 1, every constructor adds 1.
pub fn term_size(r: &Term) -> usize {
    match r {
        Term::Var(_) => 1,
        Term::Abs(_, b) | Term::Proj(_, b) => 1 + term_size(b),
        Term::App(a, b) | Term::Prod(a, b) => 1 + term_size(a) + term_size(b),
    }
}

/// P(r): number of pairs visible through abstractions.
pub fn pair_count(r: &Term) -> usize {
    match r {
        Term::Var(_) | Term::App(..) | Term::Proj(..) => 0,
        Term::Abs(_, b) => pair_count(b),
        Term::Prod(a, b) => 1 + pair_count(a) + pair_count(b),
    }
}

/// M(r), invariant under the term equivalence.
pub fn term_measure(r: &Term) -> usize {
    match r {
        Term::Var(_) => 1,
        Term::Abs(_, b) => 1 + term_measure(b) + pair_count(b),
        Term::App(a, b) | Term::Prod(a, b) => 1 + term_measure(a) + term_measure(b),
        Term::Proj(_, b) => 1 + term_measure(b),
    }
}

/// One token of an [`AlphaKey`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum KeyToken {
    /// A bound occurrence, by distance to its binder.
    Bound(u32),
    Free(VarSort),
    Abs(CanonicalType),
    App,
    Prod,
    Proj(CanonicalType),
}

/// Prefix encoding of a term with bound names erased; equal keys mean
/// alpha-equivalent terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AlphaKey(Vec<KeyToken>);

impl AlphaKey {
    pub fn tokens(&self) -> &[KeyToken] {
        &self.0
    }
}

pub fn alpha_key(r: &Term) -> AlphaKey {
    alpha_key_in(r, &[])
}

/// Alpha-key of `r` inside the binders `scope` (outermost first): occurrences
/// of those binders are keyed by depth, as if `r` sat under them.
pub fn alpha_key_in(r: &Term, scope: &[VarSort]) -> AlphaKey {
    fn go<'a>(r: &'a Term, binders: &mut Vec<&'a VarSort>, out: &mut Vec<KeyToken>) {
        match r {
            Term::Var(v) => match binders.iter().rev().position(|b| *b == v) {
                Some(depth) => out.push(KeyToken::Bound(depth as u32)),
                None => out.push(KeyToken::Free(v.clone())),
            },
            Term::Abs(x, b) => {
                out.push(KeyToken::Abs(x.sort.clone()));
                binders.push(x);
                go(b, binders, out);
                binders.pop();
            }
            Term::App(a, b) => {
                out.push(KeyToken::App);
                go(a, binders, out);
                go(b, binders, out);
            }
            Term::Prod(a, b) => {
                out.push(KeyToken::Prod);
                go(a, binders, out);
                go(b, binders, out);
            }
            Term::Proj(t, b) => {
                out.push(KeyToken::Proj(t.clone()));
                go(b, binders, out);
            }
        }
    }
    let mut out = Vec::with_capacity(2 * term_size(r));
    go(r, &mut scope.iter().collect(), &mut out);
    AlphaKey(out)
}

pub fn alpha_eq(r: &Term, s: &Term) -> bool {
    alpha_key(r) == alpha_key(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::{canonicalize, Type};

    fn tau() -> CanonicalType {
        CanonicalType::atom()
    }
    fn v(name: &str) -> VarSort {
        VarSort::new(name, tau())
    }
    fn var(name: &str) -> Term {
        Term::Var(v(name))
    }

    #[test]
    fn tidy_binders_renames_without_capture() {
        let x1 = v("x1");
        let x = v("x");
        // \x1. \x. x1 x  becomes  \x. \y. x y
        let r = Term::abs(
            x1.clone(),
            Term::abs(x.clone(), Term::app(Term::Var(x1), Term::Var(x))),
        );
        let t = tidy_binders(&r);
        assert!(alpha_eq(&t, &r));
        assert_eq!(
            t,
            Term::abs(v("x"), Term::abs(v("y"), Term::app(var("x"), var("y"))))
        );
        let open = Term::abs(v("x1"), Term::app(var("x"), var("x1")));
        let t = tidy_binders(&open);
        assert!(alpha_eq(&t, &open));
        assert_eq!(t, Term::abs(v("y"), Term::app(var("x"), var("y"))));
    }

    #[test]
    fn free_var_examples() {
        assert_eq!(free_vars(&var("x")), BTreeSet::from([v("x")]));
        let id = Term::abs(v("x"), var("x"));
        assert!(free_vars(&id).is_empty());
        assert_eq!(
            free_vars(&Term::app(id, var("y"))),
            BTreeSet::from([v("y")])
        );
    }

    #[test]
    fn same_name_other_sort_is_free() {
        let pair = canonicalize(&Type::conj(Type::Atom, Type::Atom));
        let r = Term::abs(VarSort::new("x", pair), var("x"));
        assert_eq!(free_vars(&r), BTreeSet::from([v("x")]));
    }

    #[test]
    fn subst_examples() {
        let s = Term::app(var("f"), var("z"));
        assert_eq!(subst(&var("x"), &v("x"), &s), s);
        assert_eq!(subst(&var("y"), &v("x"), &s), var("y"));
        // (\y. x)[y/x] must rename the binder
        let r = Term::abs(v("y"), var("x"));
        let out = subst(&r, &v("x"), &var("y"));
        match &out {
            Term::Abs(b, body) => {
                assert_ne!(b.name.as_ref(), "y");
                assert_eq!(**body, var("y"));
            }
            other => panic!("expected abstraction, got {other:?}"),
        }
        assert!(alpha_eq(&out, &Term::abs(v("w"), var("y"))));
    }

    #[test]
    fn subst_stops_at_binder() {
        let r = Term::abs(v("x"), var("x"));
        assert_eq!(subst(&r, &v("x"), &var("y")), r);
    }

    #[test]
    fn measures() {
        assert_eq!(term_measure(&var("x")), 1);
        let dist_l = Term::abs(v("x"), Term::prod(var("x"), var("x")));
        let dist_r = Term::prod(
            Term::abs(v("x"), var("x")),
            Term::abs(v("x"), var("x")),
        );
        assert_eq!(term_measure(&dist_l), 5);
        assert_eq!(term_measure(&dist_r), 5);
        let curried = Term::app(Term::app(var("x"), var("y")), var("z"));
        let paired = Term::app(var("x"), Term::prod(var("y"), var("z")));
        assert_eq!(term_measure(&curried), 5);
        assert_eq!(term_measure(&paired), 5);
        assert_eq!(pair_count(&dist_r), 1);
        assert_eq!(term_size(&dist_l), 4);
    }

    #[test]
    fn alpha_key_examples() {
        let idx = Term::abs(v("x"), var("x"));
        let idy = Term::abs(v("y"), var("y"));
        assert_eq!(alpha_key(&idx), alpha_key(&idy));
        let pair = canonicalize(&Type::conj(Type::Atom, Type::Atom));
        let idp = Term::abs(VarSort::new("x", pair.clone()), Term::Var(VarSort::new("x", pair)));
        assert_ne!(alpha_key(&idx), alpha_key(&idp));
        assert_ne!(alpha_key(&var("x")), alpha_key(&var("y")));
    }

    #[test]
    fn fresh_names() {
        let avoid: BTreeSet<Arc<str>> = ["y".into(), "y1".into()].into_iter().collect();
        assert_eq!(fresh_name("y", &avoid).as_ref(), "y2");
        assert_eq!(fresh_name("x7", &avoid).as_ref(), "x1");
    }
}
