//! ASCII surface syntax.
//!
//! ```text
//!     T    ::= "t" | T "->" T | T "&" T | "(" T ")"
//!     r    ::= ident | "\" ident ":" T "." r | r r | r "*" r
//!            | "proj[" T "]" r | "(" r ")"
//!     unit ::= { ident ":" T ";" } ( r | "type" T )
//! ```
//!
//! `&` binds tighter than `->`, and both associate to the right. Application
//! is left-associative and binds tighter than `*`, which associates to the
//! right. `proj[T]` takes a single application argument, so `proj[t] x y`
//! is `(proj[t] x) y`. A lambda extends as far right as possible.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::term::{free_vars, Term, VarSort};
use crate::types::{canonicalize, CanonicalType, Type};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SyntaxError {
    #[error("{line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{line}:{column}: unbound variable `{name}`")]
    Unbound {
        name: String,
        line: usize,
        column: usize,
    },
    #[error("{line}:{column}: `{name}` is declared twice")]
    DuplicateDeclaration {
        name: String,
        line: usize,
        column: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Payload {
    Term(Term),
    Type(Type),
}

/// A parsed input: free-variable declarations and a payload.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SourceUnit {
    pub context: Vec<(String, Type)>,
    pub payload: Payload,
}

impl SourceUnit {
    pub fn term(&self) -> Option<&Term> {
        match &self.payload {
            Payload::Term(r) => Some(r),
            Payload::Type(_) => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Lambda,
    Colon,
    Dot,
    Star,
    Semi,
    LParen,
    RParen,
    Arrow,
    Amp,
    ProjOpen,
    RBracket,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Lambda => write!(f, "`\\`"),
            Tok::Colon => write!(f, "`:`"),
            Tok::Dot => write!(f, "`.`"),
            Tok::Star => write!(f, "`*`"),
            Tok::Semi => write!(f, "`;`"),
            Tok::LParen => write!(f, "`(`"),
            Tok::RParen => write!(f, "`)`"),
            Tok::Arrow => write!(f, "`->`"),
            Tok::Amp => write!(f, "`&`"),
            Tok::ProjOpen => write!(f, "`proj[`"),
            Tok::RBracket => write!(f, "`]`"),
            Tok::Eof => write!(f, "end of input"),
        }
    }
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(src: &str) -> Result<Vec<Spanned>, SyntaxError> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let (mut i, mut line, mut column) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (start_line, start_col) = (line, column);
        let mut push = |tok, width: usize, i: &mut usize, column: &mut usize| {
            out.push(Spanned {
                tok,
                line: start_line,
                column: start_col,
            });
            *i += width;
            *column += width;
        };
        match c {
            '\n' => {
                i += 1;
                line += 1;
                column = 1;
            }
            c if c.is_whitespace() => {
                i += 1;
                column += 1;
            }
            '#' => {
                // comment to end of line
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
            }
            '\\' => push(Tok::Lambda, 1, &mut i, &mut column),
            ':' => push(Tok::Colon, 1, &mut i, &mut column),
            '.' => push(Tok::Dot, 1, &mut i, &mut column),
            '*' => push(Tok::Star, 1, &mut i, &mut column),
            ';' => push(Tok::Semi, 1, &mut i, &mut column),
            '(' => push(Tok::LParen, 1, &mut i, &mut column),
            ')' => push(Tok::RParen, 1, &mut i, &mut column),
            '&' => push(Tok::Amp, 1, &mut i, &mut column),
            ']' => push(Tok::RBracket, 1, &mut i, &mut column),
            '-' if chars.get(i + 1) == Some(&'>') => push(Tok::Arrow, 2, &mut i, &mut column),
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut j = i;
                while j < chars.len()
                    && (chars[j].is_ascii_alphanumeric() || chars[j] == '_' || chars[j] == '\'')
                {
                    j += 1;
                }
                let word: String = chars[i..j].iter().collect();
                if word == "proj" && chars.get(j) == Some(&'[') {
                    push(Tok::ProjOpen, j + 1 - i, &mut i, &mut column);
                } else {
                    push(Tok::Ident(word), j - i, &mut i, &mut column);
                }
            }
            other => {
                return Err(SyntaxError::Parse {
                    line,
                    column,
                    message: format!("unexpected character `{other}`"),
                })
            }
        }
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        column,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    context: BTreeMap<String, CanonicalType>,
    scope: Vec<VarSort>,
}

impl Parser {
    fn new(src: &str) -> Result<Parser, SyntaxError> {
        Ok(Parser {
            toks: lex(src)?,
            pos: 0,
            context: BTreeMap::new(),
            scope: Vec::new(),
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn here(&self) -> (usize, usize) {
        let s = &self.toks[self.pos];
        (s.line, s.column)
    }

    fn bump(&mut self) -> Tok {
        let tok = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        tok
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, SyntaxError> {
        let (line, column) = self.here();
        Err(SyntaxError::Parse {
            line,
            column,
            message: message.into(),
        })
    }

    fn expect(&mut self, tok: Tok) -> Result<(), SyntaxError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.error(format!("expected {tok}, found {}", self.peek()))
        }
    }

    fn ident(&mut self) -> Result<String, SyntaxError> {
        match self.peek().clone() {
            Tok::Ident(name) => {
                self.bump();
                Ok(name)
            }
            other => self.error(format!("expected an identifier, found {other}")),
        }
    }

    fn finish(&mut self) -> Result<(), SyntaxError> {
        match self.peek() {
            Tok::Eof => Ok(()),
            other => self.error(format!("unexpected {other}")),
        }
    }

    fn ty(&mut self) -> Result<Type, SyntaxError> {
        let left = self.ty_conj()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            Ok(Type::arrow(left, self.ty()?))
        } else {
            Ok(left)
        }
    }

    fn ty_conj(&mut self) -> Result<Type, SyntaxError> {
        let left = self.ty_atom()?;
        if *self.peek() == Tok::Amp {
            self.bump();
            Ok(Type::conj(left, self.ty_conj()?))
        } else {
            Ok(left)
        }
    }

    fn ty_atom(&mut self) -> Result<Type, SyntaxError> {
        match self.peek().clone() {
            Tok::Ident(name) if name == "t" => {
                self.bump();
                Ok(Type::Atom)
            }
            Tok::LParen => {
                self.bump();
                let inner = self.ty()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            other => self.error(format!("expected a type, found {other}")),
        }
    }

    fn term(&mut self) -> Result<Term, SyntaxError> {
        if *self.peek() == Tok::Lambda {
            return self.lambda();
        }
        let left = self.app()?;
        if *self.peek() == Tok::Star {
            self.bump();
            Ok(Term::prod(left, self.term()?))
        } else {
            Ok(left)
        }
    }

    fn lambda(&mut self) -> Result<Term, SyntaxError> {
        self.expect(Tok::Lambda)?;
        let name = self.ident()?;
        self.expect(Tok::Colon)?;
        let sort = canonicalize(&self.ty()?);
        self.expect(Tok::Dot)?;
        let binder = VarSort::new(name, sort);
        self.scope.push(binder.clone());
        let body = self.term();
        self.scope.pop();
        Ok(Term::abs(binder, body?))
    }

    fn starts_prefix(&self) -> bool {
        matches!(self.peek(), Tok::Ident(_) | Tok::LParen | Tok::ProjOpen)
    }

    fn app(&mut self) -> Result<Term, SyntaxError> {
        let mut head = self.prefix()?;
        loop {
            if self.starts_prefix() {
                let arg = self.prefix()?;
                head = Term::app(head, arg);
            } else if *self.peek() == Tok::Lambda {
                let arg = self.lambda()?;
                return Ok(Term::app(head, arg));
            } else {
                return Ok(head);
            }
        }
    }

    fn prefix(&mut self) -> Result<Term, SyntaxError> {
        if *self.peek() == Tok::ProjOpen {
            self.bump();
            let target = canonicalize(&self.ty()?);
            self.expect(Tok::RBracket)?;
            let body = self.prefix()?;
            return Ok(Term::proj(target, body));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Term, SyntaxError> {
        match self.peek().clone() {
            Tok::Ident(name) => {
                let (line, column) = self.here();
                self.bump();
                if let Some(v) = self.scope.iter().rev().find(|v| *v.name == *name) {
                    return Ok(Term::Var(v.clone()));
                }
                match self.context.get(&name) {
                    Some(sort) => Ok(Term::Var(VarSort::new(name, sort.clone()))),
                    None => Err(SyntaxError::Unbound { name, line, column }),
                }
            }
            Tok::LParen => {
                self.bump();
                let inner = self.term()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            other => self.error(format!("expected a term, found {other}")),
        }
    }

    fn unit(&mut self) -> Result<SourceUnit, SyntaxError> {
        let mut context = Vec::new();
        while matches!(self.peek(), Tok::Ident(_)) && *self.peek_at(1) == Tok::Colon {
            let (line, column) = self.here();
            let name = self.ident()?;
            self.expect(Tok::Colon)?;
            let ty = self.ty()?;
            self.expect(Tok::Semi)?;
            if self.context.contains_key(&name) {
                return Err(SyntaxError::DuplicateDeclaration { name, line, column });
            }
            self.context.insert(name.clone(), canonicalize(&ty));
            context.push((name, ty));
        }
        let payload = if matches!(self.peek(), Tok::Ident(w) if w == "type") {
            self.bump();
            Payload::Type(self.ty()?)
        } else {
            Payload::Term(self.term()?)
        };
        self.finish()?;
        Ok(SourceUnit { context, payload })
    }
}

pub fn parse_type(text: &str) -> Result<Type, SyntaxError> {
    let mut p = Parser::new(text)?;
    let ty = p.ty()?;
    p.finish()?;
    Ok(ty)
}

pub fn parse_unit(text: &str) -> Result<SourceUnit, SyntaxError> {
    Parser::new(text)?.unit()
}

/// Parses a unit whose payload must be a term.
pub fn parse_term(text: &str) -> Result<Term, SyntaxError> {
    let unit = parse_unit(text)?;
    match unit.payload {
        Payload::Term(r) => Ok(r),
        Payload::Type(_) => Err(SyntaxError::Parse {
            line: 1,
            column: 1,
            message: "expected a term, found a type".into(),
        }),
    }
}

/// Prints a term with minimal parentheses. Free variables are printed by
/// name; see [`print_unit`] for a self-contained rendering.
pub fn print_term(r: &Term) -> String {
    let mut out = String::new();
    write_term(r, 0, &mut out);
    out
}

/// Prints the free-variable declarations followed by the term, in a form
/// [`parse_unit`] reads back to the same term.
pub fn print_unit(r: &Term) -> String {
    let mut out = String::new();
    for v in free_vars(r) {
        out.push_str(&format!("{}:{}; ", v.name, v.sort));
    }
    out.push_str(&print_term(r));
    out
}

// Levels: 0 accepts everything, 1 an application or tighter, 2 a
// projection or variable.
fn write_term(r: &Term, level: u8, out: &mut String) {
    let needed = match r {
        Term::Abs(..) | Term::Prod(..) => 0,
        Term::App(..) => 1,
        Term::Proj(..) | Term::Var(_) => 2,
    };
    let parens = level > needed;
    if parens {
        out.push('(');
    }
    match r {
        Term::Var(v) => out.push_str(&v.name),
        Term::Abs(x, b) => {
            out.push_str(&format!("\\{}:{}. ", x.name, x.sort));
            write_term(b, 0, out);
        }
        Term::App(f, a) => {
            write_term(f, 1, out);
            out.push(' ');
            write_term(a, 2, out);
        }
        Term::Prod(a, b) => {
            write_term(a, 1, out);
            out.push_str(" * ");
            write_term(b, 0, out);
        }
        Term::Proj(t, b) => {
            out.push_str(&format!("proj[{t}] "));
            write_term(b, 2, out);
        }
    }
    if parens {
        out.push(')');
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tau() -> CanonicalType {
        CanonicalType::atom()
    }

    #[test]
    fn type_precedence() {
        assert_eq!(
            parse_type("t -> t & t").unwrap(),
            Type::arrow(Type::Atom, Type::conj(Type::Atom, Type::Atom))
        );
        assert_eq!(
            parse_type("t -> t -> t").unwrap(),
            Type::arrow(Type::Atom, Type::arrow(Type::Atom, Type::Atom))
        );
        assert_eq!(
            parse_type("(t -> t) -> t").unwrap(),
            Type::arrow(Type::arrow(Type::Atom, Type::Atom), Type::Atom)
        );
    }

    #[test]
    fn lambda_and_projection() {
        let x = VarSort::new("x", tau());
        assert_eq!(
            parse_term("\\x:t. x").unwrap(),
            Term::abs(x.clone(), Term::Var(x))
        );
        let y = Term::Var(VarSort::new("y", tau()));
        assert_eq!(
            parse_term("y:t; proj[t] (y * y)").unwrap(),
            Term::proj(tau(), Term::prod(y.clone(), y))
        );
    }

    #[test]
    fn application_binds_tighter_than_product() {
        let unit = "f:t->t; x:t; f x * x";
        let f = Term::Var(VarSort::new("f", canonicalize(&parse_type("t->t").unwrap())));
        let x = Term::Var(VarSort::new("x", tau()));
        assert_eq!(
            parse_term(unit).unwrap(),
            Term::prod(Term::app(f, x.clone()), x)
        );
    }

    #[test]
    fn errors_carry_locations() {
        match parse_term("\\x:t.\n  x )") {
            Err(SyntaxError::Parse { line, column, .. }) => assert_eq!((line, column), (2, 5)),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_term("y"),
            Err(SyntaxError::Unbound { .. })
        ));
        assert!(matches!(
            parse_term("y:t; y:t; y"),
            Err(SyntaxError::DuplicateDeclaration { .. })
        ));
        assert!(parse_type("t ->").is_err());
    }

    #[test]
    fn type_payload() {
        let unit = parse_unit("type t & t").unwrap();
        assert_eq!(unit.payload, Payload::Type(Type::conj(Type::Atom, Type::Atom)));
    }

    #[test]
    fn printing() {
        for src in [
            "\\x:t. x",
            "x:t; y:t; proj[t] (x * y)",
            "f:t->t->t; x:t; f x x",
            "f:(t->t)->t; f (\\x:t. x)",
            "x:t; y:t; z:t; (x * y) * z",
            "x:t&t; proj[t] proj[t&t] x",
            "\\x:t&t. proj[t] x",
            "f:t->t; x:t; (\\y:t. y) * f x",
        ] {
            let r = parse_term(src).unwrap();
            let printed = print_unit(&r);
            assert_eq!(parse_term(&printed).unwrap(), r, "{src} printed as {printed}");
        }
        assert_eq!(
            print_term(&parse_term("proj[(t&t)->t] (\\x:t&t. x)").unwrap()),
            "proj[t->t->t] (\\x:t&t. x)"
        );
    }
}
