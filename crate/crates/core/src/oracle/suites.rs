//! Executable property suites. Each suite checks a family of meta-theorems
//! over generated types or terms and reports every violated clause with a
//! counterexample in surface syntax.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use super::brute::{brute_closure, brute_equiv};
use super::gen::{closed_terms, gen_types, random_terms, GenConfig, Normality, TermEnumerator};
use crate::canon::{canonical, canonical_key, components};
use crate::equiv::{eq_class, eq_neighbors, terms_equiv};
use crate::reduce::{is_basic_normal_modulo, reducts_full, Explorer, ReduceError};
use crate::syntax::{parse_term, print_unit};
use crate::term::{
    alpha_key, all_names, fresh_name, free_vars, subst, term_measure, term_size, AlphaKey, Term,
    VarSort,
};
use crate::types::{canonicalize, conj_residual, types_equiv, CanonicalType, Type};
use crate::typing::{check, infer};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    TypeEquiv,
    TypeMeasure,
    TermMeasure,
    Typing,
    SubjectReduction,
    Normalisation,
    ProductShape,
    Consistency,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::TypeEquiv,
        Suite::TypeMeasure,
        Suite::TermMeasure,
        Suite::Typing,
        Suite::SubjectReduction,
        Suite::Normalisation,
        Suite::ProductShape,
        Suite::Consistency,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::TypeEquiv => "type-equiv",
            Suite::TypeMeasure => "type-measure",
            Suite::TermMeasure => "term-measure",
            Suite::Typing => "typing",
            Suite::SubjectReduction => "subject-reduction",
            Suite::Normalisation => "normalisation",
            Suite::ProductShape => "product-shape",
            Suite::Consistency => "consistency",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Error)]
#[error("unknown suite `{0}`")]
pub struct UnknownSuite(pub String);

impl FromStr for Suite {
    type Err = UnknownSuite;

    fn from_str(s: &str) -> Result<Suite, UnknownSuite> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| UnknownSuite(s.to_string()))
    }
}

/// A violated clause and the input that violates it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub clause: String,
    pub counterexample: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub cases: usize,
    pub failures: Vec<Failure>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Failures of one case, kept in case order when cases run in parallel.
#[derive(Default)]
struct Findings(Vec<Failure>);

impl Findings {
    fn fail(&mut self, clause: &str, counterexample: impl Into<String>) {
        self.0.push(Failure {
            clause: clause.to_string(),
            counterexample: counterexample.into(),
        });
    }

    fn require(&mut self, ok: bool, clause: &str, counterexample: impl FnOnce() -> String) {
        if !ok {
            self.fail(clause, counterexample());
        }
    }
}

struct Run {
    suite: Suite,
    cases: usize,
    failures: Vec<Failure>,
}

impl Run {
    fn new(suite: Suite) -> Run {
        Run {
            suite,
            cases: 0,
            failures: Vec::new(),
        }
    }

    fn case(&mut self, findings: Findings) {
        self.cases += 1;
        self.failures.extend(findings.0);
    }

    /// Checks `cases` independently, possibly in parallel; failures are
    /// merged in case order.
    fn each<T: Sync>(&mut self, cases: &[T], check: impl Fn(&T, &mut Findings) + Sync) {
        let found: Vec<Findings> = cases
            .par_iter()
            .map(|c| {
                let mut f = Findings::default();
                check(c, &mut f);
                f
            })
            .collect();
        for f in found {
            self.case(f);
        }
    }

    fn finish(self) -> SuiteReport {
        SuiteReport {
            suite: self.suite,
            cases: self.cases,
            failures: self.failures,
        }
    }
}

pub fn run_suite(suite: Suite, cfg: &GenConfig) -> SuiteReport {
    let mut run = Run::new(suite);
    match suite {
        Suite::TypeEquiv => type_equiv(cfg, &mut run),
        Suite::TypeMeasure => type_measure(cfg, &mut run),
        Suite::TermMeasure => term_measure_suite(cfg, &mut run),
        Suite::Typing => typing(cfg, &mut run),
        Suite::SubjectReduction => subject_reduction(cfg, &mut run),
        Suite::Normalisation => normalisation(cfg, &mut run),
        Suite::ProductShape => product_shape(cfg, &mut run),
        Suite::Consistency => consistency(cfg, &mut run),
    }
    run.finish()
}

// ---------------------------------------------------------------------------
// Types

/// Prime factors computed on the syntax, without canonical forms: each is
/// `premise -> t`, with no premise standing for `t` itself.
pub fn syntactic_prime_factors(t: &Type) -> Vec<Option<Type>> {
    match t {
        Type::Atom => vec![None],
        Type::Arrow(a, b) => syntactic_prime_factors(b)
            .into_iter()
            .map(|p| {
                Some(match p {
                    None => (**a).clone(),
                    Some(c) => Type::conj((**a).clone(), c),
                })
            })
            .collect(),
        Type::Conj(a, b) => {
            let mut out = syntactic_prime_factors(a);
            out.extend(syntactic_prime_factors(b));
            out
        }
    }
}

fn factor_type(premise: &Option<Type>) -> Type {
    match premise {
        None => Type::Atom,
        Some(c) => Type::arrow(c.clone(), Type::Atom),
    }
}

/// Right-nested conjunction of the prime factors of `t`.
pub fn conj_of_prime_factors(t: &Type) -> Type {
    let factors = syntactic_prime_factors(t);
    let mut iter = factors.iter().rev();
    let last = factor_type(iter.next().expect("at least one factor"));
    iter.fold(last, |acc, p| Type::conj(factor_type(p), acc))
}

/// The type measure from its definition over syntactic prime factors.
pub fn syntactic_measure(t: &Type) -> usize {
    syntactic_prime_factors(t)
        .iter()
        .map(|p| p.as_ref().map_or(0, syntactic_measure) + 1)
        .sum()
}

/// Prime factors as a multiset of classes.
fn factor_classes(t: &Type) -> Vec<CanonicalType> {
    let mut out: Vec<CanonicalType> = syntactic_prime_factors(t)
        .iter()
        .map(|p| canonicalize(&factor_type(p)))
        .collect();
    out.sort();
    out
}

fn pair(a: &Type, b: &Type) -> String {
    format!("{a} ; {b}")
}

fn type_equiv(cfg: &GenConfig, run: &mut Run) {
    let types = gen_types(cfg.max_type_size);
    let budget = cfg.max_type_size + 2;
    let closures: Vec<HashSet<Type>> = types.par_iter().map(|t| brute_closure(t, budget)).collect();
    for (a, closure) in types.iter().zip(&closures) {
        let mut f = Findings::default();
        for b in &types {
            let brute = closure.contains(b);
            f.require(
                brute == types_equiv(a, b),
                "types_equiv agrees with brute-force search",
                || pair(a, b),
            );
            if brute {
                f.require(
                    factor_classes(a) == factor_classes(b),
                    "equivalent types have equivalent prime factors",
                    || pair(a, b),
                );
            }
        }
        run.case(f);
    }

    run.each(&types, |a, f| {
        let pf = conj_of_prime_factors(a);
        let budget = a.size().max(pf.size()) + 2;
        f.require(
            brute_equiv(a, &pf, budget),
            "a type is equivalent to the conjunction of its prime factors",
            || pair(a, &pf),
        );
    });

    let small = gen_types(cfg.max_type_size.min(5));
    let pairs: Vec<(&Type, &Type)> = small
        .iter()
        .flat_map(|a| small.iter().map(move |b| (a, b)))
        .collect();
    run.each(&pairs, |&(a, b), f| decomposition(a, b, f));

    let triples: Vec<(&Type, &Type, &Type)> = pairs
        .iter()
        .flat_map(|&(a, b)| small.iter().map(move |c| (a, b, c)))
        .collect();
    run.each(&triples, |&(a, b, c), f| {
        let show = || format!("{a} ; {b} ; {c}");
        if types_equiv(&Type::conj(a.clone(), b.clone()), &Type::conj(a.clone(), c.clone())) {
            f.require(
                types_equiv(b, c),
                "a common conjunct cancels: A&B = A&C implies B = C",
                show,
            );
        }
        if types_equiv(&Type::arrow(a.clone(), b.clone()), &Type::arrow(a.clone(), c.clone())) {
            f.require(
                types_equiv(b, c),
                "a common premise cancels: A->B = A->C implies B = C",
                show,
            );
        }
    });
}

/// Decomposition properties of `A -> B` and `A & B`.
fn decomposition(a: &Type, b: &Type, f: &mut Findings) {
    let ca = canonicalize(a);
    let cb = canonicalize(b);
    let imp = ca.arrow(&cb);

    // Each split of A -> B is A -> B1 and A -> B2 with B = B1 & B2.
    for (c1, c2) in imp.conj_splits() {
        let ok = cb.conj_splits().iter().any(|(b1, b2)| {
            (c1 == ca.arrow(b1) && c2 == ca.arrow(b2)) || (c1 == ca.arrow(b2) && c2 == ca.arrow(b1))
        });
        f.require(ok, "a split of an arrow splits its codomain", || {
            format!("{a} ; {b} ; {c1} ; {c2}")
        });
    }

    // A -> B = C -> t means A = C and B = t, or C = A & B' and B = B' -> t.
    if imp.factor_count() == 1 {
        let c = imp.factors()[0].premise().expect("an arrow has a premise").clone();
        let ok = (c == ca && cb.is_atom())
            || conj_residual(&c, &ca).is_some_and(|rest| cb == rest.arrow(&CanonicalType::atom()));
        f.require(ok, "an arrow equal to a prime type uncurries", || pair(a, b));
    }

    // A & B = C & D decomposes into four possibly empty pieces.
    let conj = ca.conj(&cb);
    let pieces = |t: &CanonicalType| {
        let mut out = vec![(Some(t.clone()), None), (None, Some(t.clone()))];
        for (l, r) in t.conj_splits() {
            out.push((Some(l.clone()), Some(r.clone())));
            out.push((Some(r), Some(l)));
        }
        out
    };
    let join = |x: &Option<CanonicalType>, y: &Option<CanonicalType>| match (x, y) {
        (Some(x), Some(y)) => Some(x.conj(y)),
        (Some(x), None) | (None, Some(x)) => Some(x.clone()),
        (None, None) => None,
    };
    for (c, d) in conj.conj_splits() {
        let ok = pieces(&ca).iter().any(|(a1, a2)| {
            pieces(&cb).iter().any(|(b1, b2)| {
                join(a1, b1).as_ref() == Some(&c) && join(a2, b2).as_ref() == Some(&d)
            })
        });
        f.require(ok, "equal conjunctions share a four-way decomposition", || {
            format!("{a} ; {b} ; {c} ; {d}")
        });
    }
}

fn type_measure(cfg: &GenConfig, run: &mut Run) {
    let t = Type::Atom;
    let lhs = Type::arrow(t.clone(), Type::conj(t.clone(), t.clone()));
    let rhs = Type::conj(Type::arrow(t.clone(), t.clone()), Type::arrow(t.clone(), t));
    let mut f = Findings::default();
    for x in [&lhs, &rhs] {
        f.require(
            syntactic_measure(x) == 4 && x.measure() == 4,
            "the measure of t->t&t and of (t->t)&(t->t) is 4",
            || x.to_string(),
        );
    }
    run.case(f);

    let types = gen_types(cfg.max_type_size);
    let measures: Vec<usize> = types.iter().map(syntactic_measure).collect();
    run.each(&types, |a, f| {
        let m = syntactic_measure(a);
        f.require(m == a.measure(), "the measure of a type is computed correctly", || {
            a.to_string()
        });
        for other in brute_closure(a, a.size() + 2) {
            f.require(
                syntactic_measure(&other) == m,
                "equivalent types have equal measures",
                || pair(a, &other),
            );
        }
    });
    let indices: Vec<usize> = (0..types.len()).collect();
    run.each(&indices, |&i, f| {
        let a = &types[i];
        for (b, &mb) in types.iter().zip(&measures) {
            let ma = measures[i];
            let conj = syntactic_measure(&Type::conj(a.clone(), b.clone()));
            let imp = syntactic_measure(&Type::arrow(a.clone(), b.clone()));
            f.require(conj > ma, "a conjunction measures more than its left conjunct", || {
                pair(a, b)
            });
            f.require(imp > ma, "an arrow measures more than its domain", || pair(a, b));
            f.require(imp > mb, "an arrow measures more than its codomain", || pair(a, b));
        }
    });
}

// ---------------------------------------------------------------------------
// Terms

/// Exhaustive closed terms up to size 4 (or the configured size, if
/// smaller) followed by the seeded random sample.
pub fn term_corpus(cfg: &GenConfig) -> Vec<Term> {
    let mut out = closed_terms(cfg.max_term_size.min(4), &cfg.sort_pool);
    out.extend(random_terms(
        &cfg.sort_pool,
        cfg.max_term_size.max(3),
        cfg.sample_count,
        cfg.seed,
    ));
    out
}

fn show(r: &Term) -> String {
    print_unit(r)
}

fn term_measure_suite(cfg: &GenConfig, run: &mut Run) {
    let tau = CanonicalType::atom();
    let x = |i: usize| Term::Var(VarSort::new(format!("x{i}"), tau.clone()));
    let triple = Term::prod(Term::prod(x(1), x(2)), x(3));
    let mut f = Findings::default();
    let n = eq_class(&triple).len();
    f.require(n == 12, "a product of three variables has 12 arrangements", || {
        format!("{} has {n}", show(&triple))
    });
    run.case(f);

    run.each(&term_corpus(cfg), |r, f| {
        let m = term_measure(r);
        let fv = free_vars(r);
        let class = eq_class(r);
        for s in class.members() {
            f.require(term_measure(s) == m, "equivalent terms have equal measures", || {
                format!("{} ; {}", show(r), show(s))
            });
            f.require(free_vars(s) == fv, "equivalent terms have the same free variables", || {
                format!("{} ; {}", show(r), show(s))
            });
            f.require(
                term_size(s) <= m,
                "class members are no larger than the measure",
                || format!("{} ; {}", show(r), show(s)),
            );
        }
        f.require(
            class.contains_term(&canonical(r)),
            "the canonical form lies in the class",
            || show(r),
        );
    });
}

/// Smallest closed inhabitant of each sort that has one.
fn inhabitants(pool: &[CanonicalType]) -> BTreeMap<CanonicalType, Term> {
    let mut out = BTreeMap::new();
    for r in closed_terms(5, pool) {
        let ty = infer(&r).expect("generated terms are well-typed");
        out.entry(ty).or_insert(r);
    }
    out
}

/// A term of sort `sort` to substitute into `r`: a closed inhabitant, or a
/// redex around a fresh variable when there is none.
fn replacement(sort: &CanonicalType, r: &Term, known: &BTreeMap<CanonicalType, Term>) -> Term {
    if let Some(s) = known.get(sort) {
        return s.clone();
    }
    let avoid = all_names(r);
    let w = VarSort::new(fresh_name("w", &avoid), sort.clone());
    let z = VarSort::new(fresh_name("z", &avoid), sort.clone());
    Term::app(Term::abs(w.clone(), Term::Var(w)), Term::Var(z))
}

fn subterms(r: &Term) -> Vec<&Term> {
    let mut out = vec![r];
    let mut i = 0;
    while i < out.len() {
        let cur = out[i];
        out.extend(cur.children().into_iter().map(Arc::as_ref));
        i += 1;
    }
    out
}

fn typing(cfg: &GenConfig, run: &mut Run) {
    let known = inhabitants(&cfg.sort_pool);
    let probes = gen_types(5);
    run.each(&term_corpus(cfg), |r, f| {
        let ty = infer(r).expect("generated terms are well-typed");

        let reparsed = parse_term(&print_unit(r)).ok();
        f.require(
            reparsed.as_ref().map(infer).and_then(Result::ok).as_ref() == Some(&ty),
            "a term read back from its printed form has the same type",
            || show(r),
        );
        let syntactic = ty.to_type();
        for a in &probes {
            if check(r, a) && syntactic.size() <= 9 {
                f.require(
                    brute_equiv(a, &syntactic, a.size().max(syntactic.size()) + 2),
                    "every type of a term is equivalent to the inferred one",
                    || format!("{} ; {a}", show(r)),
                );
            }
        }

        for s in subterms(r) {
            generation(s, f);
        }

        let mut targets: Vec<(VarSort, &Term)> = free_vars(r).into_iter().map(|x| (x, r)).collect();
        if let Term::Abs(x, body) = r {
            targets.push((x.clone(), body));
        }
        for (x, body) in targets {
            let before = infer(body).expect("sub-terms of well-typed terms are well-typed");
            let s = replacement(&x.sort, body, &known);
            let after = infer(&subst(body, &x, &s));
            f.require(after.as_ref() == Ok(&before), "substitution preserves types", || {
                format!("{} ; {} := {}", show(body), x.name, show(&s))
            });
        }
    });
}

/// Inversion of the typing rules at the root of `s`.
fn generation(s: &Term, f: &mut Findings) {
    let ty = infer(s).expect("sub-terms of well-typed terms are well-typed").to_type();
    let of = |t: &Arc<Term>| infer(t).expect("well-typed").to_type();
    let ok = match s {
        Term::Var(x) => types_equiv(&x.sort.to_type(), &ty),
        Term::Abs(x, b) => types_equiv(&Type::arrow(x.sort.to_type(), of(b)), &ty),
        Term::App(g, a) => types_equiv(&of(g), &Type::arrow(of(a), ty.clone())),
        Term::Prod(a, b) => types_equiv(&Type::conj(of(a), of(b)), &ty),
        Term::Proj(target, b) => {
            let body = infer(b).expect("well-typed");
            types_equiv(&target.to_type(), &ty)
                && conj_residual(&body, target)
                    .is_some_and(|rest| types_equiv(&Type::conj(ty.clone(), rest.to_type()), &body.to_type()))
        }
    };
    f.require(ok, "the type of a term is built from the types of its parts", || {
        show(s)
    });
}

fn subject_reduction(cfg: &GenConfig, run: &mut Run) {
    run.each(&term_corpus(cfg), |r, f| {
        let ty = infer(r).expect("generated terms are well-typed");
        for s in eq_neighbors(r) {
            f.require(infer(&s).as_ref() == Ok(&ty), "equivalence preserves types", || {
                format!("{} ; {}", show(r), show(&s))
            });
        }
        for (s, label) in reducts_full(r).expect("well-typed") {
            f.require(infer(&s).as_ref() == Ok(&ty), "reduction preserves types", || {
                format!("{} ; {label} ; {}", show(r), show(&s))
            });
        }
        for step in Explorer::new().reducts_modulo(r).expect("well-typed") {
            let s = &step.representative;
            f.require(
                infer(s).as_ref() == Ok(&ty),
                "reduction modulo equivalence preserves types",
                || format!("{} ; {} ; {}", show(r), step.label, show(s)),
            );
        }
    });
}

fn normalisation(cfg: &GenConfig, run: &mut Run) {
    let mut cases = closed_terms(cfg.max_term_size, &cfg.sort_pool);
    cases.extend(random_terms(
        &cfg.sort_pool,
        cfg.max_term_size.max(3),
        cfg.sample_count,
        cfg.seed,
    ));
    let budget = cfg.node_budget;
    run.each(&cases, |r, f| {
        let mut explorer = Explorer::new();
        match explorer.reduction_graph(r, budget) {
            Err(ReduceError::BudgetExceeded { .. }) => f.fail(
                "the reduction graph closes within the node budget",
                format!("{} ; budget {budget}", show(r)),
            ),
            Err(e) => f.fail("the reduction graph can be built", format!("{} ; {e}", show(r))),
            Ok(graph) => {
                f.require(graph.is_acyclic(), "the reduction graph is acyclic", || show(r));
                if graph.is_acyclic() {
                    let nf = explorer.normalize(r).expect("well-typed").normal_form;
                    f.require(
                        explorer.is_normal_modulo(&nf).expect("well-typed"),
                        "normalisation ends in a normal form",
                        || show(r),
                    );
                    f.require(
                        graph.nodes.iter().any(|n| alpha_key(n) == alpha_key(&nf)),
                        "the normal form is reachable",
                        || show(r),
                    );
                }
            }
        }
    });
}

fn keys_of(parts: &[Arc<Term>]) -> Vec<AlphaKey> {
    let mut keys: Vec<AlphaKey> = parts.iter().map(|p| alpha_key(p)).collect();
    keys.sort();
    keys
}

fn product_shape(cfg: &GenConfig, run: &mut Run) {
    let corpus = term_corpus(cfg);
    let n = corpus.len();
    let products: Vec<(&Term, &Term)> = (0..n)
        .map(|i| (&corpus[i], &corpus[(i * 7 + 3) % n]))
        .filter(|(r, s)| term_measure(r) + term_measure(s) <= 14)
        .collect();
    run.each(&products, |&(r, s), f| {
        let p = Term::prod(r.clone(), s.clone());
        let whole = {
            let mut k = keys_of(&components(&canonical(r)));
            k.extend(keys_of(&components(&canonical(s))));
            k.sort();
            k
        };
        for t in eq_class(&p).members() {
            match t {
                Term::Prod(u, v) => {
                    let mut k = keys_of(&components(&canonical(u)));
                    k.extend(keys_of(&components(&canonical(v))));
                    k.sort();
                    f.require(
                        k == whole,
                        "a product equivalent to r*s regroups the factors of r and s",
                        || format!("{} ; {}", show(&p), show(t)),
                    );
                }
                Term::Abs(x, a) => {
                    let ok = eq_class(a).members().any(|m| match m {
                        Term::Prod(a1, a2) => {
                            terms_equiv(&Term::abs(x.clone(), (**a1).clone()), r)
                                && terms_equiv(&Term::abs(x.clone(), (**a2).clone()), s)
                        }
                        _ => false,
                    });
                    f.require(
                        ok,
                        "an abstraction equivalent to r*s abstracts a product of their bodies",
                        || format!("{} ; {}", show(&p), show(t)),
                    );
                }
                _ => f.fail(
                    "a term equivalent to a product is a product or an abstraction",
                    format!("{} ; {}", show(&p), show(t)),
                ),
            }
        }

        let mut explorer = Explorer::new();
        let left = explorer.reducts_modulo(r).expect("well-typed");
        let right = explorer.reducts_modulo(s).expect("well-typed");
        for step in explorer.reducts_modulo(&p).expect("well-typed") {
            let target = alpha_key(&step.representative);
            let ok = left.iter().any(|u| {
                canonical_key(&Term::prod(u.representative.clone(), s.clone())) == target
            }) || right.iter().any(|u| {
                canonical_key(&Term::prod(r.clone(), u.representative.clone())) == target
            });
            f.require(ok, "a product reduces in exactly one component", || {
                format!("{} ; {}", show(&p), show(&step.representative))
            });
        }
    });

    let mut apps: Vec<(Term, Term)> = Vec::new();
    let mut seen = HashSet::new();
    for r in &corpus {
        for s in subterms(r) {
            if let Term::App(g, a) = s {
                if g.is_intro() && term_measure(s) <= 14 && seen.insert(alpha_key(s)) {
                    apps.push(((**g).clone(), (**a).clone()));
                }
            }
        }
    }
    run.each(&apps, |(g, a), f| {
        let whole = Term::app(g.clone(), a.clone());
        for t in eq_class(&whole).members() {
            if let Term::App(h, b) = t {
                if h.is_intro() {
                    f.require(
                        terms_equiv(h, g) && terms_equiv(b, a),
                        "equivalent applications of introductions agree on both sides",
                        || format!("{} ; {}", show(&whole), show(t)),
                    );
                }
            }
        }
    });
}

/// Whether some sub-multiset of `parts` conjoins to exactly `goal`.
fn some_parts_have_type(types: &[CanonicalType], goal: &CanonicalType) -> bool {
    let n = types.len();
    (1u32..(1 << n) - 1).any(|mask| {
        let chosen = (0..n).filter(|i| mask & (1 << i) != 0).map(|i| &types[i]);
        let mut acc: Option<CanonicalType> = None;
        for t in chosen {
            acc = Some(match acc {
                None => t.clone(),
                Some(a) => a.conj(t),
            });
        }
        acc.as_ref() == Some(goal)
    })
}

fn consistency(cfg: &GenConfig, run: &mut Run) {
    let mut e = TermEnumerator::new(cfg.sort_pool.clone());
    for n in 1..=cfg.max_term_size {
        e.visit_closed(n, Normality::Full, &mut |r, ty| {
            let mut f = Findings::default();
            if !Explorer::new().is_normal_modulo(r).expect("well-typed") {
                return;
            }
            f.require(!ty.is_atom(), "no closed normal term has type t", || show(r));
            f.require(r.is_intro(), "closed normal terms are introductions", || show(r));
            run.case(f);
        });
    }
    for n in 1..=cfg.max_term_size {
        e.visit_closed(n, Normality::Basic, &mut |r, ty| {
            // Normality is read modulo equivalence: `proj[A] (\x. x * x * x)`
            // has no basic redex as written, but an equivalent term does.
            if ty.factor_count() < 2 || !is_basic_normal_modulo(r).expect("well-typed") {
                return;
            }
            let mut f = Findings::default();
            let parts = components(&canonical(r));
            let types: Vec<CanonicalType> = parts
                .iter()
                .map(|p| infer(p).expect("factors of a well-typed product are well-typed"))
                .collect();
            for (a, b) in ty.conj_splits() {
                f.require(
                    some_parts_have_type(&types, &a),
                    "a closed basic-normal term of type A&B is equivalent to a product of an A and a B",
                    || format!("{} ; {a} ; {b}", show(r)),
                );
            }
            run.case(f);
        });
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> GenConfig {
        GenConfig {
            max_type_size: 5,
            max_term_size: 3,
            sample_count: 60,
            ..GenConfig::default()
        }
    }

    #[test]
    fn names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn prime_factors_on_syntax() {
        let t = Type::Atom;
        let curried = Type::arrow(t.clone(), Type::arrow(t.clone(), t.clone()));
        assert_eq!(
            syntactic_prime_factors(&curried),
            vec![Some(Type::conj(t.clone(), t.clone()))]
        );
        assert_eq!(syntactic_measure(&curried), 3);
        let split = Type::arrow(t.clone(), Type::conj(t.clone(), t.clone()));
        assert_eq!(
            conj_of_prime_factors(&split),
            Type::conj(Type::arrow(t.clone(), t.clone()), Type::arrow(t.clone(), t))
        );
    }

    #[test]
    fn small_suites_pass() {
        for s in Suite::ALL {
            let mut cfg = small();
            if s == Suite::Normalisation {
                cfg.max_term_size = 2;
            }
            let report = run_suite(s, &cfg);
            assert!(report.cases > 0, "{s} ran no cases");
            assert!(report.passed(), "{s}: {:?}", &report.failures[..report.failures.len().min(3)]);
        }
    }

    #[test]
    fn projection_of_identity_outgrows_the_budget() {
        // One closed term of size 3 has a reduction graph of well over a
        // million classes; its root is an elimination of arrow type, so
        // every class along the way keeps expanding.
        let cfg = GenConfig {
            max_term_size: 3,
            sample_count: 0,
            node_budget: 500,
            ..GenConfig::default()
        };
        let report = run_suite(Suite::Normalisation, &cfg);
        let culprits: Vec<&str> = report
            .failures
            .iter()
            .map(|f| f.counterexample.as_str())
            .collect();
        assert!(culprits
            .iter()
            .any(|c| c.starts_with("proj[(t->t->t->t)&(t->t->t->t)] (\\x0:t&t&t. x0)")));
    }

    #[test]
    fn deterministic() {
        let cfg = small();
        let a = run_suite(Suite::SubjectReduction, &cfg);
        let b = run_suite(Suite::SubjectReduction, &cfg);
        assert_eq!(a.cases, b.cases);
        assert_eq!(a.failures, b.failures);
    }
}
