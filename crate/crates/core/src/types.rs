//! Types over the single atom `t`, and their canonical forms modulo the
//! isomorphisms
//!
//! ```text
//!     A & B        = B & A
//!     A & (B & C)  = (A & B) & C
//!     A -> (B & C) = (A -> B) & (A -> C)
//!     (A & B) -> C = A -> B -> C
//! ```
//!
//! Every type is equivalent to the conjunction of its *prime factors*, each of
//! the form `C -> t` (or the bare atom, which we treat as a factor with an
//! absent premise). A [`CanonicalType`] is that multiset of factors, with each
//! premise canonical in turn and the whole list sorted. Two types are
//! equivalent exactly when their canonical forms are structurally equal.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

/// A syntactic type: `t`, `A -> B` or `A & B`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Type {
    Atom,
    Arrow(Box<Type>, Box<Type>),
    Conj(Box<Type>, Box<Type>),
}

impl Type {
    pub fn arrow(domain: Type, codomain: Type) -> Type {
        Type::Arrow(Box::new(domain), Box::new(codomain))
    }

    pub fn conj(left: Type, right: Type) -> Type {
        Type::Conj(Box::new(left), Box::new(right))
    }

    /// `s(t) = 1`, `s(A -> B) = s(A & B) = s(A) + s(B) + 1`.
    pub fn size(&self) -> usize {
        match self {
            Type::Atom => 1,
            Type::Arrow(a, b) | Type::Conj(a, b) => a.size() + b.size() + 1,
        }
    }

    pub fn canonicalize(&self) -> CanonicalType {
        canonicalize(self)
    }

    /// Measure of the type; invariant under equivalence.
    pub fn measure(&self) -> usize {
        self.canonicalize().measure()
    }
}

pub fn size(t: &Type) -> usize {
    t.size()
}

/// A prime type `C -> t`, or the atom `t` when the premise is absent.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PrimeFactor {
    premise: Option<CanonicalType>,
}

impl PrimeFactor {
    pub const ATOM: PrimeFactor = PrimeFactor { premise: None };

    pub fn new(premise: Option<CanonicalType>) -> PrimeFactor {
        PrimeFactor { premise }
    }

    pub fn premise(&self) -> Option<&CanonicalType> {
        self.premise.as_ref()
    }

    pub fn is_atom(&self) -> bool {
        self.premise.is_none()
    }

    /// `m(C -> t) = m(C) + 1`, with `m(absent) = 0`.
    pub fn measure(&self) -> usize {
        self.premise.as_ref().map_or(0, CanonicalType::measure) + 1
    }

    /// The factor as a right-nested chain of arrows ending in `t`.
    pub fn to_type(&self) -> Type {
        match &self.premise {
            None => Type::Atom,
            Some(premise) => premise
                .factors
                .iter()
                .rev()
                .fold(Type::Atom, |acc, f| Type::arrow(f.to_type(), acc)),
        }
    }
}

impl Ord for PrimeFactor {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.premise, &other.premise) {
            (None, None) => Ordering::Equal,
            (None, Some(_)) => Ordering::Less,
            (Some(_), None) => Ordering::Greater,
            (Some(a), Some(b)) => a.cmp(b),
        }
    }
}

impl PartialOrd for PrimeFactor {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Normal form of a type: a non-empty multiset of prime factors kept sorted.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CanonicalType {
    factors: Arc<[PrimeFactor]>,
}

impl CanonicalType {
    pub fn atom() -> CanonicalType {
        CanonicalType::from_factors(vec![PrimeFactor::ATOM])
            .expect("one factor is never empty")
    }

    /// Builds a canonical type from an arbitrary list of factors, sorting
    /// them. Returns `None` for an empty list.
    pub fn from_factors(mut factors: Vec<PrimeFactor>) -> Option<CanonicalType> {
        if factors.is_empty() {
            return None;
        }
        factors.sort();
        Some(CanonicalType {
            factors: factors.into(),
        })
    }

    pub fn factors(&self) -> &[PrimeFactor] {
        &self.factors
    }

    pub fn factor_count(&self) -> usize {
        self.factors.len()
    }

    pub fn is_atom(&self) -> bool {
        self.factors.len() == 1 && self.factors[0].is_atom()
    }

    /// Canonical form of `self & other`.
    pub fn conj(&self, other: &CanonicalType) -> CanonicalType {
        CanonicalType {
            factors: merge_sorted(&self.factors, &other.factors).into(),
        }
    }

    /// Canonical form of `self -> codomain`: every factor `C -> t` of the
    /// codomain becomes `(self & C) -> t`.
    pub fn arrow(&self, codomain: &CanonicalType) -> CanonicalType {
        let factors = codomain
            .factors
            .iter()
            .map(|f| {
                let premise = match &f.premise {
                    None => self.clone(),
                    Some(p) => self.conj(p),
                };
                PrimeFactor::new(Some(premise))
            })
            .collect();
        CanonicalType::from_factors(factors).expect("codomain is non-empty")
    }

    /// `m(A) = sum over prime factors C_i -> t of (m(C_i) + 1)`.
    pub fn measure(&self) -> usize {
        self.factors.iter().map(PrimeFactor::measure).sum()
    }

    /// Right-nested conjunction of the factors, in sorted order.
    pub fn to_type(&self) -> Type {
        let mut iter = self.factors.iter().rev();
        let last = iter.next().expect("non-empty").to_type();
        iter.fold(last, |acc, f| Type::conj(f.to_type(), acc))
    }

    /// Every way of writing `self` as `A & B`, as unordered pairs with
    /// `A <= B`.
    pub fn conj_splits(&self) -> Vec<(CanonicalType, CanonicalType)> {
        let mut out = Vec::new();
        for part in sub_multisets(&self.factors) {
            if part.is_empty() || part.len() == self.factors.len() {
                continue;
            }
            let left = CanonicalType::from_factors(part.clone()).unwrap();
            let right = CanonicalType::from_factors(
                subtract_sorted(&self.factors, &part).expect("part is a sub-multiset"),
            )
            .unwrap();
            if left <= right {
                out.push((left, right));
            }
        }
        out
    }

    /// Every `A` such that `self = A -> B` for some `B`, in ascending order.
    pub fn arrow_domains(&self) -> Vec<CanonicalType> {
        let Some(first) = self.factors.first().and_then(PrimeFactor::premise) else {
            return Vec::new();
        };
        let mut out: Vec<CanonicalType> = sub_multisets(&first.factors)
            .into_iter()
            .filter_map(CanonicalType::from_factors)
            .filter(|domain| arrow_residual(self, domain).is_some())
            .collect();
        out.sort();
        out
    }
}

impl Ord for CanonicalType {
    fn cmp(&self, other: &Self) -> Ordering {
        self.factors
            .len()
            .cmp(&other.factors.len())
            .then_with(|| self.factors.iter().cmp(other.factors.iter()))
    }
}

impl PartialOrd for CanonicalType {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for CanonicalType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_type())
    }
}

impl fmt::Display for CanonicalType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_type())
    }
}

/// Prime factors of `t`, sorted, with canonical premises.
pub fn prime_factors(t: &Type) -> Vec<PrimeFactor> {
    canonicalize(t).factors.to_vec()
}

pub fn canonicalize(t: &Type) -> CanonicalType {
    match t {
        Type::Atom => CanonicalType::atom(),
        Type::Arrow(a, b) => canonicalize(a).arrow(&canonicalize(b)),
        Type::Conj(a, b) => canonicalize(a).conj(&canonicalize(b)),
    }
}

pub fn types_equiv(a: &Type, b: &Type) -> bool {
    canonicalize(a) == canonicalize(b)
}

pub fn measure(t: &Type) -> usize {
    t.measure()
}

/// The `B` with `t = s -> B`, if any. Each factor `C_i -> t` of `t` must have
/// `PF(s)` as a sub-multiset of `PF(C_i)`; the leftovers form `PF(B)`.
pub fn arrow_residual(t: &CanonicalType, s: &CanonicalType) -> Option<CanonicalType> {
    let mut leftovers = Vec::with_capacity(t.factors.len());
    for factor in t.factors.iter() {
        let premise = factor.premise.as_ref()?;
        let rest = subtract_sorted(&premise.factors, &s.factors)?;
        leftovers.push(PrimeFactor::new(CanonicalType::from_factors(rest)));
    }
    CanonicalType::from_factors(leftovers)
}

/// The `C` with `t = s & C`, if any. `C` must be non-empty, so
/// `conj_residual(A, A)` is absent.
pub fn conj_residual(t: &CanonicalType, s: &CanonicalType) -> Option<CanonicalType> {
    CanonicalType::from_factors(subtract_sorted(&t.factors, &s.factors)?)
}

fn merge_sorted<T: Ord + Clone>(a: &[T], b: &[T]) -> Vec<T> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if a[i] <= b[j] {
            out.push(a[i].clone());
            i += 1;
        } else {
            out.push(b[j].clone());
            j += 1;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Sorted multiset difference `a \ b`; `None` unless `b` is contained in `a`.
fn subtract_sorted<T: Ord + Clone>(a: &[T], b: &[T]) -> Option<Vec<T>> {
    let mut out = Vec::with_capacity(a.len().saturating_sub(b.len()));
    let mut j = 0;
    for x in a {
        match b.get(j).map(|y| x.cmp(y)) {
            Some(Ordering::Equal) => j += 1,
            Some(Ordering::Greater) => return None,
            _ => out.push(x.clone()),
        }
    }
    (j == b.len()).then_some(out)
}

/// All distinct sub-multisets of a sorted slice, each sorted.
fn sub_multisets<T: Ord + Clone>(items: &[T]) -> Vec<Vec<T>> {
    // group runs of equal elements, then choose a multiplicity for each run
    let mut runs: Vec<(&T, usize)> = Vec::new();
    for x in items {
        match runs.last_mut() {
            Some((y, n)) if *y == x => *n += 1,
            _ => runs.push((x, 1)),
        }
    }
    let mut out = vec![Vec::new()];
    for (x, n) in runs {
        let mut next = Vec::with_capacity(out.len() * (n + 1));
        for prefix in &out {
            for k in 0..=n {
                let mut v = prefix.clone();
                v.extend(std::iter::repeat_n(x.clone(), k));
                next.push(v);
            }
        }
        out = next;
    }
    out
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // `&` binds tighter than `->`; both associate to the right.
        match self {
            Type::Atom => write!(f, "t"),
            Type::Arrow(a, b) => {
                if matches!(**a, Type::Arrow(..)) {
                    write!(f, "({a})->{b}")
                } else {
                    write!(f, "{a}->{b}")
                }
            }
            Type::Conj(a, b) => {
                if matches!(**a, Type::Atom) {
                    write!(f, "{a}&")?;
                } else {
                    write!(f, "({a})&")?;
                }
                if matches!(**b, Type::Arrow(..)) {
                    write!(f, "({b})")
                } else {
                    write!(f, "{b}")
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t() -> Type {
        Type::Atom
    }
    fn arr(a: Type, b: Type) -> Type {
        Type::arrow(a, b)
    }
    fn conj(a: Type, b: Type) -> Type {
        Type::conj(a, b)
    }

    #[test]
    fn sizes() {
        assert_eq!(t().size(), 1);
        assert_eq!(arr(t(), conj(t(), t())).size(), 5);
        assert_eq!(conj(arr(t(), t()), arr(t(), t())).size(), 7);
    }

    #[test]
    fn prime_factor_examples() {
        assert_eq!(prime_factors(&t()), vec![PrimeFactor::ATOM]);
        assert_eq!(
            prime_factors(&conj(t(), t())),
            vec![PrimeFactor::ATOM, PrimeFactor::ATOM]
        );
        let t_to_t = PrimeFactor::new(Some(CanonicalType::atom()));
        assert_eq!(
            prime_factors(&arr(t(), conj(t(), t()))),
            vec![t_to_t.clone(), t_to_t]
        );
    }

    #[test]
    fn canonical_examples() {
        let a = t();
        let b = arr(t(), t());
        assert_eq!(
            canonicalize(&conj(a.clone(), b.clone())),
            canonicalize(&conj(b, a))
        );
        assert_eq!(
            canonicalize(&arr(t(), conj(t(), t()))),
            canonicalize(&conj(arr(t(), t()), arr(t(), t())))
        );
        assert_eq!(
            canonicalize(&arr(conj(t(), t()), t())),
            canonicalize(&arr(t(), arr(t(), t())))
        );
    }

    #[test]
    fn equivalence_examples() {
        assert!(types_equiv(&t(), &t()));
        assert!(!types_equiv(&t(), &arr(t(), t())));
        assert!(types_equiv(
            &conj(t(), conj(t(), t())),
            &conj(conj(t(), t()), t())
        ));
    }

    #[test]
    fn measure_examples() {
        assert_eq!(measure(&t()), 1);
        assert_eq!(measure(&arr(t(), conj(t(), t()))), 4);
        assert_eq!(measure(&conj(arr(t(), t()), arr(t(), t()))), 4);
        assert_eq!(measure(&conj(t(), t())), 2);
    }

    #[test]
    fn arrow_residual_examples() {
        let atom = CanonicalType::atom();
        assert_eq!(
            arrow_residual(&canonicalize(&arr(t(), t())), &atom),
            Some(atom.clone())
        );
        assert_eq!(
            arrow_residual(&canonicalize(&conj(arr(t(), t()), arr(t(), t()))), &atom),
            Some(canonicalize(&conj(t(), t())))
        );
        assert_eq!(arrow_residual(&atom, &atom), None);
    }

    #[test]
    fn conj_residual_examples() {
        let atom = CanonicalType::atom();
        assert_eq!(
            conj_residual(&canonicalize(&conj(t(), t())), &atom),
            Some(atom.clone())
        );
        let t_to_t = canonicalize(&arr(t(), t()));
        assert_eq!(
            conj_residual(&canonicalize(&arr(t(), conj(t(), t()))), &t_to_t),
            Some(t_to_t)
        );
        assert_eq!(conj_residual(&atom, &atom), None);
    }

    #[test]
    fn atom_sorts_first() {
        let atom = CanonicalType::atom();
        let t_to_t = canonicalize(&arr(t(), t()));
        let both = atom.conj(&t_to_t);
        assert_eq!(both.factors()[0], PrimeFactor::ATOM);
        assert!(atom < t_to_t);
        assert!(t_to_t < both);
    }

    #[test]
    fn decanonicalize_shape() {
        // (t & t) -> t  ~  t -> t -> t, printed right-nested
        let c = canonicalize(&arr(conj(t(), t()), t()));
        assert_eq!(c.to_type(), arr(t(), arr(t(), t())));
        let d = canonicalize(&arr(t(), conj(t(), t())));
        assert_eq!(d.to_type(), conj(arr(t(), t()), arr(t(), t())));
        assert_eq!(d.to_string(), "(t->t)&(t->t)");
    }

    #[test]
    fn splits_and_domains() {
        let three = canonicalize(&conj(t(), conj(t(), arr(t(), t()))));
        // {t}{t,t->t}, {t->t}{t,t}
        assert_eq!(three.conj_splits().len(), 2);
        let curried = canonicalize(&arr(t(), arr(arr(t(), t()), t())));
        // t, t->t, and t & (t->t)
        assert_eq!(curried.arrow_domains().len(), 3);
        assert!(CanonicalType::atom().arrow_domains().is_empty());
        assert!(CanonicalType::atom().conj_splits().is_empty());
    }

    #[test]
    fn no_common_domain() {
        // (t->t) & ((t->t)->t) has no arrow decomposition
        let c = canonicalize(&conj(arr(t(), t()), arr(arr(t(), t()), t())));
        assert!(c.arrow_domains().is_empty());
    }
}
