//! A simply typed lambda calculus with pairs in which isomorphic types are
//! equal, extended with eta and surjective-pairing expansions.
//!
//! - [`types`]: types, prime factors, canonical forms and residuals.
//! - [`term`]: terms, substitution, alpha-keys and measures.
//! - [`typing`]: type synthesis.
//! - [`equiv`]: the term equivalence and its classes.
//! - [`canon`]: canonical representatives of those classes.
//! - [`reduce`]: reduction modulo equivalence, normalisation, reduction graphs.
//! - [`oracle`]: generators, brute-force oracles and property suites.
//! - [`syntax`]: parser and pretty-printer.

pub mod canon;
pub mod equiv;
pub mod oracle;
pub mod reduce;
pub mod syntax;
pub mod term;
pub mod types;
pub mod typing;

pub use equiv::{eq_class, eq_neighbors, terms_equiv, EqClass};
pub use reduce::{Explorer, ReduceError, ReductionGraph, Rule, RuleLabel};
pub use term::{alpha_key, AlphaKey, Term, VarSort};
pub use types::{canonicalize, types_equiv, CanonicalType, PrimeFactor, Type};
pub use typing::{check, infer, Judgment, Path, TypeError, TypeErrorKind};
