//! Type synthesis.
//!
//! The conversion rule is built into the representation: every synthesized
//! type is canonical, and the two elimination forms consult the residual
//! operations to invert `A -> B` and `A & B`.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::term::Term;
use crate::types::{arrow_residual, canonicalize, conj_residual, CanonicalType, Type};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum TypeErrorKind {
    /// The function position has no arrow decomposition at all.
    NotAFunction,
    /// The function is an arrow, but not from the argument's type.
    ArgumentMismatch,
    /// The projection target is not a strict conjunct of the body's type.
    NotAConjunct,
    UnboundVariable,
}

impl fmt::Display for TypeErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// A position in a term, as the sequence of child indices from the root.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Path(pub Vec<u8>);

impl Path {
    pub fn root() -> Path {
        Path(Vec::new())
    }

    pub fn child(&self, i: u8) -> Path {
        let mut steps = self.0.clone();
        steps.push(i);
        Path(steps)
    }

    pub fn prepend(&self, i: u8) -> Path {
        let mut steps = Vec::with_capacity(self.0.len() + 1);
        steps.push(i);
        steps.extend_from_slice(&self.0);
        Path(steps)
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "@")?;
        for (i, step) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ".")?;
            }
            write!(f, "{step}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{kind} at {path}")]
pub struct TypeError {
    pub kind: TypeErrorKind,
    pub path: Path,
}

/// Outcome of type synthesis.
pub type Judgment = Result<CanonicalType, TypeError>;

pub fn infer(r: &Term) -> Judgment {
    infer_at(r, &mut Vec::new())
}

fn infer_at(r: &Term, path: &mut Vec<u8>) -> Judgment {
    let fail = |kind, path: &Vec<u8>| {
        Err(TypeError {
            kind,
            path: Path(path.clone()),
        })
    };
    match r {
        Term::Var(v) => Ok(v.sort.clone()),
        Term::Abs(x, b) => {
            let body = within(path, 0, |p| infer_at(b, p))?;
            Ok(x.sort.arrow(&body))
        }
        Term::App(f, a) => {
            let fun = within(path, 0, |p| infer_at(f, p))?;
            let arg = within(path, 1, |p| infer_at(a, p))?;
            match arrow_residual(&fun, &arg) {
                Some(result) => Ok(result),
                None if fun.arrow_domains().is_empty() => fail(TypeErrorKind::NotAFunction, path),
                None => fail(TypeErrorKind::ArgumentMismatch, path),
            }
        }
        Term::Prod(a, b) => {
            let left = within(path, 0, |p| infer_at(a, p))?;
            let right = within(path, 1, |p| infer_at(b, p))?;
            Ok(left.conj(&right))
        }
        Term::Proj(target, b) => {
            let body = within(path, 0, |p| infer_at(b, p))?;
            if conj_residual(&body, target).is_some() {
                Ok(target.clone())
            } else {
                fail(TypeErrorKind::NotAConjunct, path)
            }
        }
    }
}

fn within<T>(path: &mut Vec<u8>, step: u8, f: impl FnOnce(&mut Vec<u8>) -> T) -> T {
    path.push(step);
    let out = f(path);
    path.pop();
    out
}

pub fn check(r: &Term, a: &Type) -> bool {
    check_canonical(r, &canonicalize(a))
}

pub fn check_canonical(r: &Term, a: &CanonicalType) -> bool {
    infer(r).is_ok_and(|t| &t == a)
}

pub fn is_well_typed(r: &Term) -> bool {
    infer(r).is_ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::VarSort;

    fn tau() -> CanonicalType {
        CanonicalType::atom()
    }
    fn v(name: &str, sort: CanonicalType) -> VarSort {
        VarSort::new(name, sort)
    }
    fn ty_pair() -> Type {
        Type::conj(Type::Atom, Type::Atom)
    }

    #[test]
    fn identity() {
        let x = v("x", tau());
        let id = Term::abs(x.clone(), Term::Var(x));
        assert_eq!(
            infer(&id),
            Ok(canonicalize(&Type::arrow(Type::Atom, Type::Atom)))
        );
        assert!(check(&id, &Type::arrow(Type::Atom, Type::Atom)));
        assert!(!check(&id, &Type::Atom));
    }

    #[test]
    fn pairing_function() {
        let x = v("x", tau());
        let y = v("y", tau());
        let r = Term::abs(
            x.clone(),
            Term::abs(y.clone(), Term::prod(Term::Var(x), Term::Var(y))),
        );
        let expected = Type::arrow(ty_pair(), ty_pair());
        assert_eq!(infer(&r), Ok(canonicalize(&expected)));
        assert!(check(&r, &expected));
    }

    #[test]
    fn projection() {
        let x = v("x", canonicalize(&ty_pair()));
        assert_eq!(infer(&Term::proj(tau(), Term::Var(x.clone()))), Ok(tau()));
        // a whole type is not a strict conjunct of itself
        let whole = Term::proj(canonicalize(&ty_pair()), Term::Var(x));
        assert_eq!(
            infer(&whole).unwrap_err().kind,
            TypeErrorKind::NotAConjunct
        );
    }

    #[test]
    fn application_errors() {
        let x = Term::Var(v("x", tau()));
        let y = Term::Var(v("y", tau()));
        let err = infer(&Term::app(x, y.clone())).unwrap_err();
        assert_eq!(err.kind, TypeErrorKind::NotAFunction);
        assert_eq!(err.path, Path::root());

        let f = Term::Var(v("f", canonicalize(&Type::arrow(ty_pair(), Type::Atom))));
        let z = Term::Var(v("z", canonicalize(&Type::arrow(Type::Atom, Type::Atom))));
        let nested = Term::abs(v("w", tau()), Term::app(f, z));
        let err = infer(&nested).unwrap_err();
        assert_eq!(err.kind, TypeErrorKind::ArgumentMismatch);
        assert_eq!(err.path, Path(vec![0]));
    }

    #[test]
    fn partial_application_by_isomorphism() {
        // (\x:t&t. x) y  with y:t  has type t -> t&t
        let pair = canonicalize(&ty_pair());
        let x = v("x", pair);
        let r = Term::app(Term::abs(x.clone(), Term::Var(x)), Term::Var(v("y", tau())));
        assert_eq!(
            infer(&r),
            Ok(canonicalize(&Type::arrow(Type::Atom, ty_pair())))
        );
    }
}
