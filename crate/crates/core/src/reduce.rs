//! Reduction modulo the term equivalence.
//!
//! Three contractions fire at the head of a term:
//!
//! ```text
//!     (\x:A. r) s    ->  r[s/x]        if s : A             (beta)
//!     proj[A](r * s) ->  r             if r : A             (pi)
//!     (r * s) t      ->  r t * s t                          (zeta)
//! ```
//!
//! and two expansions apply to eliminations and variables:
//!
//! ```text
//!     r  ->  \x:A. r x                 if r : A -> B        (eta)
//!     r  ->  proj[A] r * proj[B] r     if r : A & B         (delta)
//! ```
//!
//! Expansions are forbidden in head-sensitive positions. The *basic*
//! relation allows full reduction inside abstraction bodies, application
//! arguments and product components, but only basic reduction in function
//! position and under a projection; the *full* relation adds expansions at
//! the root. Reduction modulo equivalence fires a full step on any member of
//! the class and lands on the class of the reduct; classes are handled
//! through their canonical forms, so they are never enumerated.

use std::cmp::Reverse;
use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::canon::{
    canonical, canonical_in, canonical_key, components, from_components, mk_abs, mk_app, mk_apps,
    spine,
};
use crate::term::{all_names, alpha_key, fresh_name, subst, AlphaKey, Term, VarSort};
use crate::types::CanonicalType;
use crate::typing::{infer, Path, TypeError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Rule {
    Beta,
    Pi,
    Zeta,
    Eta,
    Delta,
}

impl Rule {
    pub fn is_expansion(self) -> bool {
        matches!(self, Rule::Eta | Rule::Delta)
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// A rule together with the position where it fired.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct RuleLabel {
    pub rule: Rule,
    pub path: Path,
}

impl RuleLabel {
    fn new(rule: Rule, path: &[u8]) -> RuleLabel {
        RuleLabel {
            rule,
            path: Path(path.to_vec()),
        }
    }
}

impl fmt::Display for RuleLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.rule, self.path)
    }
}

#[derive(Debug, Error)]
pub enum ReduceError {
    #[error("ill-typed term: {0}")]
    IllTyped(#[from] TypeError),
    #[error("reduction graph exceeded its budget of {budget} nodes")]
    BudgetExceeded {
        budget: usize,
        partial: Box<ReductionGraph>,
    },
    #[error("reduction graph has a cycle through node {node}")]
    Cycle { node: usize },
}

/// One-step reducts of a term.
pub type Reducts = Vec<(Term, RuleLabel)>;

/// Basic one-step reducts: contractions, plus the contextual closure that
/// keeps expansions out of function position and projection bodies.
pub fn reducts_basic(r: &Term) -> Result<Reducts, ReduceError> {
    infer(r)?;
    let mut cx = Stepper::new(r);
    cx.basic(r, &mut Vec::new());
    Ok(cx.out)
}

/// Full one-step reducts: the basic ones plus root expansions when `r` is an
/// elimination or a variable.
pub fn reducts_full(r: &Term) -> Result<Reducts, ReduceError> {
    infer(r)?;
    Ok(full_unchecked(r))
}

fn full_unchecked(r: &Term) -> Reducts {
    let mut cx = Stepper::new(r);
    cx.full(r, &mut Vec::new());
    cx.out
}

/// Contractions available at the root of `r` itself.
pub fn head_contractions(r: &Term) -> Vec<(Term, Rule)> {
    let mut out = Vec::new();
    match r {
        Term::App(f, s) => match &**f {
            Term::Abs(x, body) => {
                if infer(s).is_ok_and(|a| a == x.sort) {
                    out.push((subst(body, x, s), Rule::Beta));
                }
            }
            Term::Prod(u, v) => out.push((
                Term::prod(Term::App(u.clone(), s.clone()), Term::App(v.clone(), s.clone())),
                Rule::Zeta,
            )),
            _ => {}
        },
        Term::Proj(target, b) => {
            if let Term::Prod(u, _) = &**b {
                if infer(u).is_ok_and(|a| &a == target) {
                    out.push(((**u).clone(), Rule::Pi));
                }
            }
        }
        _ => {}
    }
    out
}

/// Root expansions of `r`, assumed to be an elimination or a variable of
/// type `ty`. Eta candidates come first, largest domain first.
fn expansions(r: &Arc<Term>, ty: &CanonicalType, avoid: &BTreeSet<Arc<str>>) -> Vec<(Term, Rule)> {
    let mut out = Vec::new();
    let domains = ty.arrow_domains();
    if !domains.is_empty() {
        let name = fresh_name("x", avoid);
        for domain in domains.into_iter().rev() {
            let x = VarSort::new(name.clone(), domain);
            let body = Term::App(r.clone(), Arc::new(Term::Var(x.clone())));
            out.push((Term::abs(x, body), Rule::Eta));
        }
    }
    for (a, b) in ty.conj_splits() {
        out.push((
            Term::prod(Term::Proj(a, r.clone()), Term::Proj(b, r.clone())),
            Rule::Delta,
        ));
    }
    out
}

struct Stepper {
    avoid: BTreeSet<Arc<str>>,
    out: Reducts,
}

impl Stepper {
    fn new(root: &Term) -> Stepper {
        Stepper {
            avoid: all_names(root),
            out: Vec::new(),
        }
    }

    /// Reducts of the subterm `r` at `path`, rebuilt by `wrap` into the
    /// enclosing term.
    fn basic(&mut self, r: &Term, path: &mut Vec<u8>) {
        for (t, rule) in head_contractions(r) {
            self.out.push((t, RuleLabel::new(rule, path)));
        }
        match r {
            Term::Var(_) => {}
            Term::Abs(x, b) => self.descend(path, 0, b, true, |t| Term::abs(x.clone(), t)),
            Term::App(f, a) => {
                self.descend(path, 0, f, false, |t| Term::App(Arc::new(t), a.clone()));
                self.descend(path, 1, a, true, |t| Term::App(f.clone(), Arc::new(t)));
            }
            Term::Prod(a, b) => {
                self.descend(path, 0, a, true, |t| Term::Prod(Arc::new(t), b.clone()));
                self.descend(path, 1, b, true, |t| Term::Prod(a.clone(), Arc::new(t)));
            }
            Term::Proj(ty, b) => self.descend(path, 0, b, false, |t| Term::proj(ty.clone(), t)),
        }
    }

    fn full(&mut self, r: &Term, path: &mut Vec<u8>) {
        self.basic(r, path);
        if r.is_elim() || r.is_var() {
            let ty = infer(r).expect("subterms of well-typed terms are well-typed");
            let shared = Arc::new(r.clone());
            for (t, rule) in expansions(&shared, &ty, &self.avoid) {
                self.out.push((t, RuleLabel::new(rule, path)));
            }
        }
    }

    fn descend(
        &mut self,
        path: &mut Vec<u8>,
        step: u8,
        child: &Term,
        allow_expansion: bool,
        wrap: impl Fn(Term) -> Term,
    ) {
        let start = self.out.len();
        path.push(step);
        if allow_expansion {
            self.full(child, path);
        } else {
            self.basic(child, path);
        }
        path.pop();
        for entry in &mut self.out[start..] {
            let inner = std::mem::replace(&mut entry.0, Term::Var(placeholder()));
            entry.0 = wrap(inner);
        }
    }
}

fn placeholder() -> VarSort {
    VarSort::new("", CanonicalType::atom())
}

/// Ordering key for the normalisation strategy; smaller is preferred.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Priority {
    Contraction,
    Expansion {
        depth: usize,
        rule: Rule,
        wider_domain: Reverse<Option<CanonicalType>>,
    },
}

/// A one-step reduct of a whole class, in canonical form.
struct ClassReduct {
    term: Term,
    label: RuleLabel,
    priority: Priority,
}

/// Enumerates the reducts of every member of a class by inspecting its
/// canonical form only. Redexes hidden behind the equivalence are found by
/// regrouping: the arguments of an application can be supplied in any
/// blocks, a product splits along any sub-multiset of its factors, and a
/// product of abstractions with one binder sort is an abstraction.
struct ClassStepper {
    avoid: BTreeSet<Arc<str>>,
    out: Vec<ClassReduct>,
}

impl ClassStepper {
    fn new(root: &Term) -> ClassStepper {
        ClassStepper {
            avoid: all_names(root),
            out: Vec::new(),
        }
    }

    fn push(&mut self, term: Term, rule: Rule, path: &[u8], domain: Option<CanonicalType>) {
        let priority = if rule.is_expansion() {
            Priority::Expansion {
                depth: path.len(),
                rule,
                wider_domain: Reverse(domain),
            }
        } else {
            Priority::Contraction
        };
        self.out.push(ClassReduct {
            term,
            label: RuleLabel::new(rule, path),
            priority,
        });
    }

    /// Rebuilds the reducts pushed since `start` into their context.
    fn wrap(&mut self, start: usize, f: impl Fn(Term) -> Term) {
        for entry in &mut self.out[start..] {
            let inner = std::mem::replace(&mut entry.term, Term::Var(placeholder()));
            entry.term = f(inner);
        }
    }

    fn steps(&mut self, c: &Term, full: bool, scope: &mut Vec<VarSort>, path: &mut Vec<u8>) {
        match c {
            Term::Var(_) => {}
            Term::Abs(x, b) => {
                let start = self.out.len();
                scope.push(x.clone());
                path.push(0);
                self.steps(b, true, scope, path);
                path.pop();
                scope.pop();
                self.wrap(start, |t| mk_abs(x, t, scope));
            }
            Term::Prod(..) => self.product(c, scope, path),
            Term::Proj(target, b) => {
                let start = self.out.len();
                path.push(0);
                self.steps(b, false, scope, path);
                path.pop();
                self.wrap(start, |t| Term::proj(target.clone(), t));
                self.projection(target, b, scope, path);
            }
            Term::App(..) => self.application(c, scope, path),
        }
        if full && (c.is_elim() || c.is_var()) {
            self.expansions(c, scope, &*path);
        }
    }

    fn product(&mut self, c: &Term, scope: &mut Vec<VarSort>, path: &mut Vec<u8>) {
        let parts = components(c);
        let k = parts.len();
        for i in 0..k {
            if i > 0 && parts[i] == parts[i - 1] {
                continue;
            }
            let depth = path.len();
            path.extend(std::iter::repeat_n(1, i));
            if i + 1 < k {
                path.push(0);
            }
            let start = self.out.len();
            self.steps(&parts[i], true, scope, path);
            path.truncate(depth);
            self.wrap(start, |t| {
                let mut rest = parts.clone();
                rest.remove(i);
                rest.extend(components(&t));
                from_components(rest, scope)
            });
        }
    }

    fn projection(
        &mut self,
        target: &CanonicalType,
        b: &Term,
        scope: &mut Vec<VarSort>,
        path: &mut Vec<u8>,
    ) {
        if !matches!(b, Term::Prod(..)) {
            return;
        }
        let parts = components(b);
        let types = part_types(&parts);
        for (chosen, _) in splits(&parts, &types, false) {
            if chosen.1 == *target {
                self.push(from_components(chosen.0, scope), Rule::Pi, path, None);
            }
        }
    }

    fn application(&mut self, c: &Term, scope: &mut Vec<VarSort>, path: &mut Vec<u8>) {
        let (head, args) = spine(c);
        let n = args.len();
        // arguments: the last one sits at `1`, earlier ones further left
        for j in 0..n {
            if j > 0 && args[j] == args[j - 1] {
                continue;
            }
            let depth = path.len();
            path.extend(std::iter::repeat_n(0, n - 1 - j));
            path.push(1);
            let start = self.out.len();
            self.steps(&args[j], true, scope, path);
            path.truncate(depth);
            self.wrap(start, |t| {
                let mut rest = args.clone();
                rest.remove(j);
                mk_app(mk_apps((*head).clone(), &rest, scope), t, scope)
            });
        }
        // the head is in function position
        let depth = path.len();
        path.extend(std::iter::repeat_n(0, n));
        let start = self.out.len();
        self.steps(&head, false, scope, path);
        path.truncate(depth);
        self.wrap(start, |t| mk_apps(t, &args, scope));

        for (reduct, rule) in app_contractions(&head, &args, scope, false) {
            self.push(reduct, rule, path, None);
        }
    }

    fn expansions(&mut self, c: &Term, scope: &mut Vec<VarSort>, path: &[u8]) {
        let ty = infer(c).expect("subterms of well-typed terms are well-typed");
        let domains = ty.arrow_domains();
        if !domains.is_empty() {
            let name = fresh_name("x", &self.avoid);
            for domain in domains.into_iter().rev() {
                let z = VarSort::new(name.clone(), domain.clone());
                scope.push(z.clone());
                let body = mk_app(c.clone(), Term::Var(z.clone()), scope);
                scope.pop();
                self.push(mk_abs(&z, body, scope), Rule::Eta, path, Some(domain));
            }
        }
        for (a, b) in ty.conj_splits() {
            let parts = vec![
                Arc::new(Term::proj(a, c.clone())),
                Arc::new(Term::proj(b, c.clone())),
            ];
            self.push(from_components(parts, scope), Rule::Delta, path, None);
        }
    }
}

fn part_types(parts: &[Arc<Term>]) -> Vec<CanonicalType> {
    parts
        .iter()
        .map(|p| infer(p).expect("subterms of well-typed terms are well-typed"))
        .collect()
}

/// A sub-multiset of factors with the conjunction of their types.
type Selection = (Vec<Arc<Term>>, CanonicalType);

/// Every way to pick a non-empty sub-multiset of the sorted `parts`, paired
/// with what is left. With `allow_all` the whole multiset may be picked and
/// the rest is then empty.
fn splits(
    parts: &[Arc<Term>],
    types: &[CanonicalType],
    allow_all: bool,
) -> Vec<(Selection, Vec<Arc<Term>>)> {
    // runs of equal factors, chosen by multiplicity
    let mut runs: Vec<(usize, usize)> = Vec::new();
    for i in 0..parts.len() {
        match runs.last_mut() {
            Some((s, n)) if parts[*s] == parts[i] => *n += 1,
            _ => runs.push((i, 1)),
        }
    }
    let mut counts = vec![0usize; runs.len()];
    let mut out = Vec::new();
    loop {
        let picked: usize = counts.iter().sum();
        if picked > 0 && (allow_all || picked < parts.len()) {
            let mut chosen = Vec::new();
            let mut rest = Vec::new();
            let mut ty: Option<CanonicalType> = None;
            for (&(s, n), &m) in runs.iter().zip(&counts) {
                for i in s..s + n {
                    if i - s < m {
                        chosen.push(parts[i].clone());
                        ty = Some(match ty {
                            None => types[i].clone(),
                            Some(t) => t.conj(&types[i]),
                        });
                    } else {
                        rest.push(parts[i].clone());
                    }
                }
            }
            out.push(((chosen, ty.expect("non-empty")), rest));
        }
        // next multiplicity vector
        let mut i = 0;
        loop {
            if i == runs.len() {
                return out;
            }
            if counts[i] < runs[i].1 {
                counts[i] += 1;
                break;
            }
            counts[i] = 0;
            i += 1;
        }
    }
}

/// Beta and zeta contractions of `head` applied to `args`, over every member
/// of the class. The first block of arguments feeds the redex and the rest
/// is applied to the contractum. With `whole_only` the block is all of
/// `args`, which finds the contractions at the root of some member.
fn app_contractions(
    head: &Term,
    args: &[Arc<Term>],
    scope: &mut Vec<VarSort>,
    whole_only: bool,
) -> Vec<(Term, Rule)> {
    let mut out = Vec::new();
    let abstractions = head_abstractions(head);
    let factors = match head {
        Term::Prod(..) => components(head),
        _ => Vec::new(),
    };
    if abstractions.is_none() && factors.is_empty() {
        return out;
    }
    let types = part_types(args);
    for ((block, block_ty), rest) in splits(args, &types, true) {
        if whole_only && !rest.is_empty() {
            continue;
        }
        let s = from_components(block, scope);
        if let Some((sort, bodies)) = &abstractions {
            if *sort == block_ty {
                let mut parts = Vec::new();
                for (x, body) in bodies {
                    parts.extend(components(&canonical_in(&subst(body, x, &s), scope)));
                }
                let reduct = from_components(parts, scope);
                out.push((mk_apps(reduct, &rest, scope), Rule::Beta));
            }
        }
        if factors.len() > 1 {
            let factor_types = part_types(&factors);
            for ((left, _), right) in splits(&factors, &factor_types, false) {
                let l = mk_app(from_components(left, scope), s.clone(), scope);
                let r = mk_app(from_components(right, scope), s.clone(), scope);
                let mut parts = components(&l);
                parts.extend(components(&r));
                let reduct = from_components(parts, scope);
                out.push((mk_apps(reduct, &rest, scope), Rule::Zeta));
            }
        }
    }
    out
}

/// The abstraction in the class of `head`, as its binder sort and the
/// binder and body of each factor: either `head` itself, or a product whose
/// factors all abstract over one sort.
fn head_abstractions(head: &Term) -> Option<(CanonicalType, Vec<(VarSort, Arc<Term>)>)> {
    let parts = components(head);
    let mut sort: Option<CanonicalType> = None;
    let mut bodies = Vec::with_capacity(parts.len());
    for p in &parts {
        let Term::Abs(x, b) = &**p else {
            return None;
        };
        match &sort {
            Some(s) if *s != x.sort => return None,
            _ => sort = Some(x.sort.clone()),
        }
        bodies.push((x.clone(), b.clone()));
    }
    sort.map(|s| (s, bodies))
}

/// Reducts of the class whose canonical form is `c`; `full` admits
/// expansions at the root.
fn class_reducts(c: &Term, full: bool) -> Vec<ClassReduct> {
    let mut stepper = ClassStepper::new(c);
    stepper.steps(c, full, &mut Vec::new(), &mut Vec::new());
    stepper.out
}

/// A reduct class reached in one step, named by its canonical form.
#[derive(Clone, Debug)]
pub struct ClassStep {
    pub representative: Term,
    pub label: RuleLabel,
}

impl ClassStep {
    /// Whether `r` belongs to the class reached.
    pub fn contains(&self, r: &Term) -> bool {
        canonical_key(r) == alpha_key(&self.representative)
    }
}

#[derive(Clone)]
struct Successor {
    target: usize,
    label: RuleLabel,
    priority: Priority,
}

/// Explores reduction modulo equivalence, memoising classes by canonical
/// form and the one-step reducts of every class it has expanded.
#[derive(Default)]
pub struct Explorer {
    ids: HashMap<AlphaKey, usize>,
    reps: Vec<Term>,
    keys: Vec<AlphaKey>,
    successors: Vec<Option<Arc<[Successor]>>>,
}

impl Explorer {
    pub fn new() -> Explorer {
        Explorer::default()
    }

    /// Canonical representative of the class of `r`.
    pub fn representative(&mut self, r: &Term) -> Term {
        let id = self.class_id(r);
        self.reps[id].clone()
    }

    /// Number of classes seen so far.
    pub fn class_count(&self) -> usize {
        self.reps.len()
    }

    fn class_id(&mut self, r: &Term) -> usize {
        self.intern(canonical(r))
    }

    fn intern(&mut self, c: Term) -> usize {
        let key = alpha_key(&c);
        if let Some(&id) = self.ids.get(&key) {
            return id;
        }
        let id = self.reps.len();
        self.ids.insert(key.clone(), id);
        self.reps.push(c);
        self.keys.push(key);
        self.successors.push(None);
        id
    }

    /// One step from class `id`: each target class once, with the label of
    /// its most preferred step.
    fn successors_of(&mut self, id: usize) -> Arc<[Successor]> {
        if let Some(known) = &self.successors[id] {
            return known.clone();
        }
        let rep = self.reps[id].clone();
        let mut best: Vec<Successor> = Vec::new();
        let mut slot: HashMap<usize, usize> = HashMap::new();
        for reduct in class_reducts(&rep, true) {
            let target = self.intern(reduct.term);
            match slot.get(&target) {
                Some(&i) => {
                    if reduct.priority < best[i].priority {
                        best[i].priority = reduct.priority;
                        best[i].label = reduct.label;
                    }
                }
                None => {
                    slot.insert(target, best.len());
                    best.push(Successor {
                        target,
                        label: reduct.label,
                        priority: reduct.priority,
                    });
                }
            }
        }
        let succ: Arc<[Successor]> = best.into();
        self.successors[id] = Some(succ.clone());
        succ
    }

    pub fn reducts_modulo(&mut self, r: &Term) -> Result<Vec<ClassStep>, ReduceError> {
        infer(r)?;
        let id = self.class_id(r);
        Ok(self
            .successors_of(id)
            .iter()
            .map(|s| ClassStep {
                representative: self.reps[s.target].clone(),
                label: s.label.clone(),
            })
            .collect())
    }

    pub fn is_normal_modulo(&mut self, r: &Term) -> Result<bool, ReduceError> {
        infer(r)?;
        let id = self.class_id(r);
        Ok(self.successors_of(id).is_empty())
    }

    /// Reduces `r` to a normal form, recording every step.
    ///
    /// Contractions are preferred to expansions. Among contractions the
    /// target class with the least canonical form wins. Among expansions the
    /// outermost one wins, eta before delta, the largest eta domain first,
    /// then the least target class.
    pub fn normalize(&mut self, r: &Term) -> Result<Normalized, ReduceError> {
        infer(r)?;
        let mut trace = Vec::new();
        let mut current = self.class_id(r);
        loop {
            let succ = self.successors_of(current);
            let best = succ
                .iter()
                .min_by(|a, b| {
                    (&a.priority, &self.keys[a.target]).cmp(&(&b.priority, &self.keys[b.target]))
                });
            match best {
                None => {
                    return Ok(Normalized {
                        normal_form: self.reps[current].clone(),
                        trace,
                    })
                }
                Some(step) => {
                    trace.push(TraceStep {
                        label: step.label.clone(),
                        from: self.reps[current].clone(),
                        to: self.reps[step.target].clone(),
                    });
                    current = step.target;
                }
            }
        }
    }

    /// Breadth-first reduction graph over classes, up to `node_budget` nodes.
    pub fn reduction_graph(
        &mut self,
        r: &Term,
        node_budget: usize,
    ) -> Result<ReductionGraph, ReduceError> {
        infer(r)?;
        let root = self.class_id(r);
        let mut node_of: HashMap<usize, usize> = HashMap::new();
        let mut graph = ReductionGraph {
            nodes: Vec::new(),
            edges: Vec::new(),
            closed: false,
        };
        let mut class_ids = Vec::new();
        node_of.insert(root, 0);
        graph.nodes.push(self.reps[root].clone());
        class_ids.push(root);
        let mut next = 0;
        while next < graph.nodes.len() {
            let from = next;
            next += 1;
            for step in self.successors_of(class_ids[from]).iter() {
                let to = match node_of.get(&step.target) {
                    Some(&n) => n,
                    None => {
                        if graph.nodes.len() >= node_budget {
                            return Err(ReduceError::BudgetExceeded {
                                budget: node_budget,
                                partial: Box::new(graph),
                            });
                        }
                        let n = graph.nodes.len();
                        node_of.insert(step.target, n);
                        graph.nodes.push(self.reps[step.target].clone());
                        class_ids.push(step.target);
                        n
                    }
                };
                graph.edges.push(GraphEdge {
                    from,
                    to,
                    label: step.label.clone(),
                });
            }
        }
        graph.closed = true;
        Ok(graph)
    }

    /// Length of the longest reduction from `r`.
    pub fn longest_reduction(&mut self, r: &Term, node_budget: usize) -> Result<usize, ReduceError> {
        self.reduction_graph(r, node_budget)?.longest_path()
    }
}

#[derive(Clone, Debug)]
pub struct TraceStep {
    pub label: RuleLabel,
    /// Canonical form of the class the step leaves.
    pub from: Term,
    /// Canonical form of the class the step reaches.
    pub to: Term,
}

#[derive(Clone, Debug)]
pub struct Normalized {
    pub normal_form: Term,
    pub trace: Vec<TraceStep>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphEdge {
    pub from: usize,
    pub to: usize,
    pub label: RuleLabel,
}

/// Classes reachable from a root (node 0), each named by its canonical form.
#[derive(Clone, Debug)]
pub struct ReductionGraph {
    pub nodes: Vec<Term>,
    pub edges: Vec<GraphEdge>,
    /// Whether exploration reached closure.
    pub closed: bool,
}

impl ReductionGraph {
    pub fn root(&self) -> &Term {
        &self.nodes[0]
    }

    pub fn successors(&self) -> Vec<Vec<usize>> {
        let mut succ = vec![Vec::new(); self.nodes.len()];
        for e in &self.edges {
            if !succ[e.from].contains(&e.to) {
                succ[e.from].push(e.to);
            }
        }
        succ
    }

    /// Nodes without outgoing edges.
    pub fn sinks(&self) -> Vec<usize> {
        self.successors()
            .iter()
            .enumerate()
            .filter(|(_, s)| s.is_empty())
            .map(|(i, _)| i)
            .collect()
    }

    /// A node on a cycle, if there is one.
    pub fn find_cycle(&self) -> Option<usize> {
        self.topological_order().err()
    }

    pub fn is_acyclic(&self) -> bool {
        self.find_cycle().is_none()
    }

    fn topological_order(&self) -> Result<Vec<usize>, usize> {
        let succ = self.successors();
        let n = self.nodes.len();
        let mut indegree = vec![0usize; n];
        for s in &succ {
            for &t in s {
                indegree[t] += 1;
            }
        }
        let mut ready: Vec<usize> = (0..n).filter(|&i| indegree[i] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(i) = ready.pop() {
            order.push(i);
            for &t in &succ[i] {
                indegree[t] -= 1;
                if indegree[t] == 0 {
                    ready.push(t);
                }
            }
        }
        if order.len() == n {
            Ok(order)
        } else {
            Err((0..n).find(|&i| indegree[i] > 0).expect("some node is left"))
        }
    }

    /// Longest path from the root, in edges.
    pub fn longest_path(&self) -> Result<usize, ReduceError> {
        let order = self
            .topological_order()
            .map_err(|node| ReduceError::Cycle { node })?;
        let succ = self.successors();
        let mut longest = vec![0usize; self.nodes.len()];
        for &i in order.iter().rev() {
            longest[i] = succ[i].iter().map(|&t| longest[t] + 1).max().unwrap_or(0);
        }
        Ok(longest[0])
    }

    pub fn node_keys(&self) -> Vec<AlphaKey> {
        self.nodes.iter().map(alpha_key).collect()
    }
}

pub fn reducts_modulo(r: &Term) -> Result<Vec<ClassStep>, ReduceError> {
    Explorer::new().reducts_modulo(r)
}

pub fn is_normal_modulo(r: &Term) -> Result<bool, ReduceError> {
    Explorer::new().is_normal_modulo(r)
}

/// Classes reached by a basic step from some member of the class of `r`.
pub fn basic_reducts_modulo(r: &Term) -> Result<Vec<ClassStep>, ReduceError> {
    infer(r)?;
    let mut seen = BTreeSet::new();
    Ok(class_reducts(&canonical(r), false)
        .into_iter()
        .filter(|step| seen.insert(alpha_key(&step.term)))
        .map(|step| ClassStep {
            representative: step.term,
            label: step.label,
        })
        .collect())
}

/// Whether no member of `r`'s class has a basic reduct.
pub fn is_basic_normal_modulo(r: &Term) -> Result<bool, ReduceError> {
    infer(r)?;
    Ok(class_reducts(&canonical(r), false).is_empty())
}

pub fn normalize(r: &Term) -> Result<Normalized, ReduceError> {
    Explorer::new().normalize(r)
}

pub fn reduction_graph(r: &Term, node_budget: usize) -> Result<ReductionGraph, ReduceError> {
    Explorer::new().reduction_graph(r, node_budget)
}

pub fn longest_reduction(r: &Term, node_budget: usize) -> Result<usize, ReduceError> {
    Explorer::new().longest_reduction(r, node_budget)
}

/// Whether applying or projecting `r` can never create a head contraction.
///
/// Probes `r x` for a fresh `x` of every arrow domain of `r`'s type and
/// `proj[A] r` for every conjunct `A`, and looks for a contraction at the
/// root of any member of each probe's class.
pub fn is_neutral(r: &Term) -> Result<bool, ReduceError> {
    let ty = infer(r)?;
    let c = canonical(r);
    let mut scope = Vec::new();
    let name = fresh_name("x", &all_names(&c));
    for domain in ty.arrow_domains() {
        let x = Arc::new(Term::Var(VarSort::new(name.clone(), domain)));
        let (head, mut args) = spine(&c);
        args.push(x);
        args.sort_by_cached_key(|a| alpha_key(a));
        if !app_contractions(&head, &args, &mut scope, true).is_empty() {
            return Ok(false);
        }
    }
    if let Term::Prod(..) = c {
        let parts = components(&c);
        let types = part_types(&parts);
        for (a, b) in ty.conj_splits() {
            let hit = splits(&parts, &types, false)
                .iter()
                .any(|((_, t), _)| *t == a || *t == b);
            if hit {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
