//! Exhaustive and seeded random generators for types and well-typed terms.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::reduce::head_contractions;
use crate::term::{Term, VarSort};
use crate::types::{arrow_residual, conj_residual, CanonicalType, Type};
use crate::typing::infer;

/// Knobs shared by the generators and the property suites.
#[derive(Clone, Debug)]
pub struct GenConfig {
    pub max_type_size: usize,
    pub max_term_size: usize,
    /// Binder and free-variable sorts.
    pub sort_pool: Vec<CanonicalType>,
    pub seed: u64,
    /// Number of random open terms.
    pub sample_count: usize,
    /// Largest reduction graph explored per term.
    pub node_budget: usize,
}

impl Default for GenConfig {
    fn default() -> GenConfig {
        GenConfig {
            max_type_size: 7,
            max_term_size: 8,
            sort_pool: default_sort_pool(),
            seed: 0,
            sample_count: 1000,
            node_budget: 3000,
        }
    }
}

/// Distinct canonical types among all types of size at most 5.
pub fn default_sort_pool() -> Vec<CanonicalType> {
    let pool: BTreeSet<CanonicalType> = gen_types(5).iter().map(Type::canonicalize).collect();
    pool.into_iter().collect()
}

/// Every type of size at most `max_size`, smallest first.
pub fn gen_types(max_size: usize) -> Vec<Type> {
    let mut by_size: Vec<Vec<Type>> = vec![Vec::new(); max_size + 1];
    if max_size >= 1 {
        by_size[1].push(Type::Atom);
    }
    for n in (3..=max_size).step_by(2) {
        let mut layer = Vec::new();
        for l in (1..n - 1).step_by(2) {
            let r = n - 1 - l;
            for a in &by_size[l] {
                for b in &by_size[r] {
                    layer.push(Type::arrow(a.clone(), b.clone()));
                    layer.push(Type::conj(a.clone(), b.clone()));
                }
            }
        }
        by_size[n] = layer;
    }
    by_size.into_iter().flatten().collect()
}

/// Every strict conjunct of `t`: each `A` with `t = A & C` for some `C`.
pub fn strict_conjuncts(t: &CanonicalType) -> Vec<CanonicalType> {
    let mut out = BTreeSet::new();
    for (a, b) in t.conj_splits() {
        out.insert(a);
        out.insert(b);
    }
    out.into_iter().collect()
}

type Typed = Arc<Vec<(Term, CanonicalType)>>;

/// Which terms [`TermEnumerator`] produces.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Normality {
    /// Every well-typed term.
    Any,
    /// Terms without a basic reduct; expansions may remain at the root.
    Basic,
    /// Terms without any reduct.
    Full,
}

/// Exhaustive enumeration of well-typed terms by size, optionally restricted
/// to syntactic normal forms. Binders are named after their depth (`x0`,
/// `x1`, ...), so terms are determined by the sorts in scope.
///
/// A term is normal exactly when it has no head contraction, its sub-terms
/// in function position or under a projection are basic-normal, its other
/// sub-terms are normal, and, for full normality, an elimination or variable
/// has type `t` (anything else expands). A term normal modulo equivalence is
/// normal as written, so filtering the normal enumeration finds every such
/// term at a fraction of the cost.
///
/// Abstractions and projections are streamed; only the operands of
/// applications and products are memoised.
pub struct TermEnumerator {
    pool: Vec<CanonicalType>,
    memo: HashMap<(usize, Vec<CanonicalType>, Normality), Typed>,
}

impl TermEnumerator {
    pub fn new(pool: Vec<CanonicalType>) -> TermEnumerator {
        TermEnumerator {
            pool,
            memo: HashMap::new(),
        }
    }

    /// Calls `f` on every closed term of exactly `size` of the given kind.
    pub fn visit_closed(
        &mut self,
        size: usize,
        kind: Normality,
        f: &mut dyn FnMut(&Term, &CanonicalType),
    ) {
        self.visit(size, &[], kind, f);
    }

    /// Closed terms of exactly `size` of the given kind.
    pub fn closed(&mut self, size: usize, kind: Normality) -> Typed {
        self.family(size, &[], kind)
    }

    fn family(&mut self, size: usize, scope: &[CanonicalType], kind: Normality) -> Typed {
        let key = (size, scope.to_vec(), kind);
        if let Some(hit) = self.memo.get(&key) {
            return hit.clone();
        }
        let mut out = Vec::new();
        self.visit(size, scope, kind, &mut |t, ty| out.push((t.clone(), ty.clone())));
        let out = Arc::new(out);
        self.memo.insert(key, out.clone());
        out
    }

    fn visit(
        &mut self,
        size: usize,
        scope: &[CanonicalType],
        kind: Normality,
        f: &mut dyn FnMut(&Term, &CanonicalType),
    ) {
        let (body_kind, head_kind, arg_kind) = match kind {
            Normality::Any => (Normality::Any, Normality::Any, Normality::Any),
            _ => (Normality::Full, Normality::Basic, Normality::Full),
        };
        let normal = kind != Normality::Any;
        let expandable = |ty: &CanonicalType| kind == Normality::Full && !ty.is_atom();
        if size == 1 {
            for (depth, sort) in scope.iter().enumerate() {
                if !expandable(sort) {
                    f(&Term::Var(binder(depth, sort)), sort);
                }
            }
            return;
        }
        for sort in self.pool.clone() {
            let mut inner = scope.to_vec();
            inner.push(sort.clone());
            let x = binder(scope.len(), &sort);
            self.visit(size - 1, &inner, body_kind, &mut |body, ty| {
                f(&Term::abs(x.clone(), body.clone()), &sort.arrow(ty));
            });
        }
        self.visit(size - 1, scope, head_kind, &mut |body, ty| {
            for target in strict_conjuncts(ty) {
                if expandable(&target) {
                    continue;
                }
                let t = Term::proj(target.clone(), body.clone());
                if !normal || head_contractions(&t).is_empty() {
                    f(&t, &target);
                }
            }
        });
        for left in 1..size - 1 {
            let right = size - 1 - left;
            let funs = self.family(left, scope, head_kind);
            let args = self.family(right, scope, arg_kind);
            for (g, tg) in funs.iter() {
                for (a, ta) in args.iter() {
                    let Some(ty) = arrow_residual(tg, ta) else {
                        continue;
                    };
                    if expandable(&ty) {
                        continue;
                    }
                    let t = Term::app(g.clone(), a.clone());
                    if !normal || head_contractions(&t).is_empty() {
                        f(&t, &ty);
                    }
                }
            }
            let lhs = self.family(left, scope, body_kind);
            let rhs = self.family(right, scope, body_kind);
            for (a, ta) in lhs.iter() {
                for (b, tb) in rhs.iter() {
                    f(&Term::prod(a.clone(), b.clone()), &ta.conj(tb));
                }
            }
        }
    }
}

fn binder(depth: usize, sort: &CanonicalType) -> VarSort {
    VarSort::new(format!("x{depth}"), sort.clone())
}

/// Closed well-typed terms of size at most `max_size` with binders drawn
/// from `pool`, smallest first.
pub fn closed_terms(max_size: usize, pool: &[CanonicalType]) -> Vec<Term> {
    let mut e = TermEnumerator::new(pool.to_vec());
    let mut out = Vec::new();
    for n in 1..=max_size {
        e.visit_closed(n, Normality::Any, &mut |t, _| out.push(t.clone()));
    }
    out
}

/// Number of closed well-typed terms of each size up to `max_size`, without
/// building them. Entry `n` counts the terms of size exactly `n`.
pub fn count_closed_terms(max_size: usize, pool: &[CanonicalType]) -> Vec<u128> {
    let mut counter = Counter {
        pool: pool.to_vec(),
        memo: HashMap::new(),
    };
    (0..=max_size)
        .map(|n| {
            if n == 0 {
                0
            } else {
                counter.by_type(n, &[]).values().sum()
            }
        })
        .collect()
}

type TypeCounts = Arc<HashMap<CanonicalType, u128>>;

struct Counter {
    pool: Vec<CanonicalType>,
    memo: HashMap<(usize, Vec<CanonicalType>), TypeCounts>,
}

impl Counter {
    /// Terms of exactly `size` over `scope` (a sorted multiset of sorts: the
    /// count only depends on which sorts are in scope, not their order),
    /// tallied by type.
    fn by_type(&mut self, size: usize, scope: &[CanonicalType]) -> TypeCounts {
        let key = (size, scope.to_vec());
        if let Some(hit) = self.memo.get(&key) {
            return hit.clone();
        }
        let mut out: HashMap<CanonicalType, u128> = HashMap::new();
        if size == 1 {
            for sort in scope {
                *out.entry(sort.clone()).or_default() += 1;
            }
        } else {
            for sort in self.pool.clone() {
                let mut inner = scope.to_vec();
                inner.push(sort.clone());
                inner.sort();
                for (ty, n) in self.by_type(size - 1, &inner).iter() {
                    *out.entry(sort.arrow(ty)).or_default() += n;
                }
            }
            for (ty, n) in self.by_type(size - 1, scope).iter() {
                for target in strict_conjuncts(ty) {
                    *out.entry(target).or_default() += n;
                }
            }
            for left in 1..size - 1 {
                let lhs = self.by_type(left, scope);
                let rhs = self.by_type(size - 1 - left, scope);
                for (ta, na) in lhs.iter() {
                    for (tb, nb) in rhs.iter() {
                        if let Some(ty) = arrow_residual(ta, tb) {
                            *out.entry(ty).or_default() += na * nb;
                        }
                        *out.entry(ta.conj(tb)).or_default() += na * nb;
                    }
                }
            }
        }
        let out = Arc::new(out);
        self.memo.insert(key, out.clone());
        out
    }
}

/// Type-directed random generator for open terms.
struct RandomTerms<'a> {
    rng: ChaCha8Rng,
    pool: &'a [CanonicalType],
    /// Free variables created so far; each sort gets one name.
    free: Vec<VarSort>,
}

impl RandomTerms<'_> {
    fn free_var(&mut self, sort: &CanonicalType) -> Term {
        if let Some(v) = self.free.iter().find(|v| &v.sort == sort) {
            return Term::Var(v.clone());
        }
        let v = VarSort::new(format!("y{}", self.free.len()), sort.clone());
        self.free.push(v.clone());
        Term::Var(v)
    }

    /// A term of type `goal` and size at most `budget`, with `scope` bound.
    fn term(&mut self, goal: &CanonicalType, budget: usize, scope: &mut Vec<VarSort>) -> Term {
        let in_scope: Vec<VarSort> = scope.iter().filter(|v| &v.sort == goal).cloned().collect();
        if budget < 3 {
            return match in_scope.choose(&mut self.rng) {
                Some(v) if self.rng.gen_bool(0.8) => Term::Var(v.clone()),
                _ => self.free_var(goal),
            };
        }
        let domains = goal.arrow_domains();
        let splits = goal.conj_splits();
        loop {
            match self.rng.gen_range(0..6) {
                0 => {
                    if let Some(v) = in_scope.choose(&mut self.rng) {
                        return Term::Var(v.clone());
                    }
                    return self.free_var(goal);
                }
                1 if !domains.is_empty() => {
                    let domain = domains.choose(&mut self.rng).unwrap().clone();
                    let codomain = arrow_residual(goal, &domain).unwrap();
                    let x = VarSort::new(format!("x{}", scope.len()), domain);
                    scope.push(x.clone());
                    let body = self.term(&codomain, budget - 1, scope);
                    scope.pop();
                    return Term::abs(x, body);
                }
                2 if !splits.is_empty() => {
                    let (a, b) = splits.choose(&mut self.rng).unwrap().clone();
                    let (a, b) = if self.rng.gen_bool(0.5) { (a, b) } else { (b, a) };
                    let half = (budget - 1) / 2;
                    let left = self.term(&a, half, scope);
                    let right = self.term(&b, budget - 1 - half, scope);
                    return Term::prod(left, right);
                }
                3 | 4 => {
                    let arg_ty = self.pool.choose(&mut self.rng).unwrap().clone();
                    let fun_ty = arg_ty.arrow(goal);
                    let half = (budget - 1) / 2;
                    let fun = self.term(&fun_ty, budget - 1 - half, scope);
                    let arg = self.term(&arg_ty, half, scope);
                    return Term::app(fun, arg);
                }
                5 => {
                    let extra = self.pool.choose(&mut self.rng).unwrap().clone();
                    let whole = goal.conj(&extra);
                    debug_assert!(conj_residual(&whole, goal).is_some());
                    let body = self.term(&whole, budget - 1, scope);
                    return Term::proj(goal.clone(), body);
                }
                _ => {}
            }
        }
    }
}

/// Seeded random open terms: each picks a goal sort from the pool and a size
/// budget up to `max_size`, then builds the term top-down.
pub fn random_terms(
    pool: &[CanonicalType],
    max_size: usize,
    count: usize,
    seed: u64,
) -> Vec<Term> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let mut gen = RandomTerms {
            rng: ChaCha8Rng::seed_from_u64(rng.gen()),
            pool,
            free: Vec::new(),
        };
        let goal = pool.choose(&mut gen.rng).expect("non-empty pool").clone();
        let budget = gen.rng.gen_range(1..=max_size.max(1));
        let t = gen.term(&goal, budget, &mut Vec::new());
        debug_assert_eq!(infer(&t).as_ref(), Ok(&goal));
        out.push(t);
    }
    out
}

/// Exhaustive closed terms up to `cfg.max_term_size` followed by
/// `cfg.sample_count` random open terms.
pub fn gen_well_typed_terms(cfg: &GenConfig) -> Vec<Term> {
    let mut out = closed_terms(cfg.max_term_size, &cfg.sort_pool);
    out.extend(random_terms(
        &cfg.sort_pool,
        cfg.max_term_size.max(3),
        cfg.sample_count,
        cfg.seed,
    ));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::alpha_eq;

    #[test]
    fn type_counts() {
        assert_eq!(gen_types(1), vec![Type::Atom]);
        assert_eq!(gen_types(3).len(), 3);
        assert_eq!(gen_types(5).len(), 11);
        assert_eq!(gen_types(7).len(), 51);
        assert_eq!(default_sort_pool().len(), 8);
    }

    #[test]
    fn closed_terms_are_well_typed() {
        let terms = closed_terms(5, &default_sort_pool());
        let counts = count_closed_terms(5, &default_sort_pool());
        assert_eq!(counts.iter().sum::<u128>(), terms.len() as u128);
        assert!(!terms.is_empty());
        for t in &terms {
            assert!(infer(t).is_ok(), "{t:?}");
            assert!(t.free_vars().is_empty());
        }
        let tau = CanonicalType::atom();
        let x = VarSort::new("x", tau);
        let id = Term::abs(x.clone(), Term::Var(x));
        assert!(closed_terms(3, &default_sort_pool())
            .iter()
            .any(|t| alpha_eq(t, &id)));
    }

    #[test]
    fn normal_enumeration_matches_filtering() {
        use crate::reduce::{reducts_basic, reducts_full};
        let pool = default_sort_pool();
        let mut e = TermEnumerator::new(pool.clone());
        for n in 1..=5 {
            let all = e.closed(n, Normality::Any);
            let keys = |kind| -> BTreeSet<_> {
                let mut out = BTreeSet::new();
                TermEnumerator::new(pool.clone())
                    .visit_closed(n, kind, &mut |t, _| {
                        out.insert(crate::term::alpha_key(t));
                    });
                out
            };
            let full: BTreeSet<_> = all
                .iter()
                .filter(|(t, _)| reducts_full(t).unwrap().is_empty())
                .map(|(t, _)| crate::term::alpha_key(t))
                .collect();
            let basic: BTreeSet<_> = all
                .iter()
                .filter(|(t, _)| reducts_basic(t).unwrap().is_empty())
                .map(|(t, _)| crate::term::alpha_key(t))
                .collect();
            assert_eq!(keys(Normality::Full), full, "size {n}");
            assert_eq!(keys(Normality::Basic), basic, "size {n}");
        }
    }

    #[test]
    fn random_terms_are_typed_and_deterministic() {
        let pool = default_sort_pool();
        let a = random_terms(&pool, 10, 200, 7);
        let b = random_terms(&pool, 10, 200, 7);
        assert_eq!(a, b);
        for t in &a {
            assert!(infer(t).is_ok());
        }
    }
}
