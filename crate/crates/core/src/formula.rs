//! Formulas of first-order logic extended with the "infinitely many" and
//! "m many mod n" quantifiers, and a recursive-descent parser for them.
//!
//! Grammar (loosest binding first):
//!
//! ```text
//! formula := iff ; iff := impl ("<->" impl)* ; impl := or ("->" or)* ;
//! or := and ("|" and)* ; and := unary ("&" unary)* ;
//! unary := "~" unary | quant | atom | "(" formula ")" ;
//! quant := ("A"|"E"|"EI"|"E[" nat "," nat "]") ident "." unary ;
//! atom := ident "(" term ("," term)* ")" | term "=" term ;
//! term := ident | quoted-string-constant ;
//! ```
//!
//! `<->` chains associate to the left, `->` chains to the right.

use std::fmt;

use crate::error::{Error, Result};

/// Byte span of a node in the source text, for diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

/// A variable or a quoted string constant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Term {
    Var(String),
    Const(String),
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::Const(c) => write!(f, "\"{c}\""),
        }
    }
}

/// Formula AST. Every node carries its source span.
#[derive(Debug, Clone, PartialEq)]
pub struct Formula {
    pub kind: FormulaKind,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub enum FormulaKind {
    Atom { rel: String, args: Vec<Term> },
    Equal(Term, Term),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Exists(String, Box<Formula>),
    Forall(String, Box<Formula>),
    ExistsInf(String, Box<Formula>),
    ExistsMod {
        modulus: u32,
        residue: u32,
        var: String,
        body: Box<Formula>,
    },
}

impl Formula {
    /// Free variables in order of first occurrence.
    pub fn free_vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut Vec<String>) {
        fn term(t: &Term, bound: &[String], out: &mut Vec<String>) {
            if let Term::Var(v) = t {
                if !bound.contains(v) && !out.contains(v) {
                    out.push(v.clone());
                }
            }
        }
        match &self.kind {
            FormulaKind::Atom { args, .. } => {
                for a in args {
                    term(a, bound, out);
                }
            }
            FormulaKind::Equal(a, b) => {
                term(a, bound, out);
                term(b, bound, out);
            }
            FormulaKind::Not(f) => f.collect_free(bound, out),
            FormulaKind::And(a, b)
            | FormulaKind::Or(a, b)
            | FormulaKind::Implies(a, b)
            | FormulaKind::Iff(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            FormulaKind::Exists(v, f) | FormulaKind::Forall(v, f) | FormulaKind::ExistsInf(v, f) => {
                bound.push(v.clone());
                f.collect_free(bound, out);
                bound.pop();
            }
            FormulaKind::ExistsMod { var, body, .. } => {
                bound.push(var.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            FormulaKind::Atom { rel, args } => {
                write!(f, "{rel}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
            FormulaKind::Equal(a, b) => write!(f, "{a} = {b}"),
            FormulaKind::Not(x) => write!(f, "~({x})"),
            FormulaKind::And(a, b) => write!(f, "({a} & {b})"),
            FormulaKind::Or(a, b) => write!(f, "({a} | {b})"),
            FormulaKind::Implies(a, b) => write!(f, "({a} -> {b})"),
            FormulaKind::Iff(a, b) => write!(f, "({a} <-> {b})"),
            FormulaKind::Exists(v, b) => write!(f, "E {v}. ({b})"),
            FormulaKind::Forall(v, b) => write!(f, "A {v}. ({b})"),
            FormulaKind::ExistsInf(v, b) => write!(f, "EI {v}. ({b})"),
            FormulaKind::ExistsMod {
                modulus,
                residue,
                var,
                body,
            } => write!(f, "E[{modulus},{residue}] {var}. ({body})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    StrLit(String),
    Nat(u32),
    Tilde,
    Amp,
    Pipe,
    Arrow,
    DArrow,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Dot,
    Eq,
}

#[derive(Debug, Clone)]
struct Lexeme {
    tok: Tok,
    pos: usize,
}

fn lex(src: &str) -> Result<Vec<Lexeme>> {
    let mut out = Vec::new();
    let bytes = src.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let pos = i;
        let tok = match c {
            '~' => {
                i += 1;
                Tok::Tilde
            }
            '&' => {
                i += 1;
                Tok::Amp
            }
            '|' => {
                i += 1;
                Tok::Pipe
            }
            '(' => {
                i += 1;
                Tok::LParen
            }
            ')' => {
                i += 1;
                Tok::RParen
            }
            '[' => {
                i += 1;
                Tok::LBracket
            }
            ']' => {
                i += 1;
                Tok::RBracket
            }
            ',' => {
                i += 1;
                Tok::Comma
            }
            '.' => {
                i += 1;
                Tok::Dot
            }
            '=' => {
                i += 1;
                Tok::Eq
            }
            '-' => {
                if bytes.get(i + 1) == Some(&b'>') {
                    i += 2;
                    Tok::Arrow
                } else {
                    return Err(position_error(src, pos, "expected `->`"));
                }
            }
            '<' => {
                if bytes.get(i + 1) == Some(&b'-') && bytes.get(i + 2) == Some(&b'>') {
                    i += 3;
                    Tok::DArrow
                } else {
                    return Err(position_error(src, pos, "expected `<->`"));
                }
            }
            '"' => {
                i += 1;
                let start = i;
                while i < bytes.len() && bytes[i] != b'"' {
                    i += 1;
                }
                if i == bytes.len() {
                    return Err(position_error(src, pos, "unterminated string constant"));
                }
                let lit = src[start..i].to_string();
                i += 1;
                Tok::StrLit(lit)
            }
            c if c.is_ascii_digit() => {
                let start = i;
                while i < bytes.len() && (bytes[i] as char).is_ascii_digit() {
                    i += 1;
                }
                let n: u32 = src[start..i]
                    .parse()
                    .map_err(|_| position_error(src, start, "number too large"))?;
                Tok::Nat(n)
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < bytes.len()
                    && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                Tok::Ident(src[start..i].to_string())
            }
            other => {
                return Err(position_error(
                    src,
                    pos,
                    &format!("unexpected character {other:?}"),
                ))
            }
        };
        out.push(Lexeme { tok, pos });
    }
    Ok(out)
}

fn position_error(src: &str, pos: usize, msg: &str) -> Error {
    let mut line = 1;
    let mut col = 1;
    for (i, c) in src.char_indices() {
        if i >= pos {
            break;
        }
        if c == '\n' {
            line += 1;
            col = 1;
        } else {
            col += 1;
        }
    }
    Error::Syntax {
        line,
        col,
        msg: msg.to_string(),
    }
}

struct Parser<'a> {
    src: &'a str,
    toks: Vec<Lexeme>,
    at: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|l| &l.tok)
    }

    fn peek_ahead(&self, n: usize) -> Option<&Tok> {
        self.toks.get(self.at + n).map(|l| &l.tok)
    }

    fn pos(&self) -> usize {
        self.toks
            .get(self.at)
            .map(|l| l.pos)
            .unwrap_or(self.src.len())
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.at).map(|l| l.tok.clone());
        if t.is_some() {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if self.peek() == Some(&tok) {
            self.at += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected {what}")))
        }
    }

    fn err(&self, msg: &str) -> Error {
        position_error(self.src, self.pos(), msg)
    }

    fn formula(&mut self) -> Result<Formula> {
        self.iff()
    }

    fn iff(&mut self) -> Result<Formula> {
        let mut lhs = self.implication()?;
        while self.peek() == Some(&Tok::DArrow) {
            self.bump();
            let rhs = self.implication()?;
            let span = Span {
                start: lhs.span.start,
                end: rhs.span.end,
            };
            lhs = Formula {
                kind: FormulaKind::Iff(Box::new(lhs), Box::new(rhs)),
                span,
            };
        }
        Ok(lhs)
    }

    fn implication(&mut self) -> Result<Formula> {
        let lhs = self.or()?;
        if self.peek() == Some(&Tok::Arrow) {
            self.bump();
            let rhs = self.implication()?; // right-associative
            let span = Span {
                start: lhs.span.start,
                end: rhs.span.end,
            };
            Ok(Formula {
                kind: FormulaKind::Implies(Box::new(lhs), Box::new(rhs)),
                span,
            })
        } else {
            Ok(lhs)
        }
    }

    fn or(&mut self) -> Result<Formula> {
        let mut lhs = self.and()?;
        while self.peek() == Some(&Tok::Pipe) {
            self.bump();
            let rhs = self.and()?;
            let span = Span {
                start: lhs.span.start,
                end: rhs.span.end,
            };
            lhs = Formula {
                kind: FormulaKind::Or(Box::new(lhs), Box::new(rhs)),
                span,
            };
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula> {
        let mut lhs = self.unary()?;
        while self.peek() == Some(&Tok::Amp) {
            self.bump();
            let rhs = self.unary()?;
            let span = Span {
                start: lhs.span.start,
                end: rhs.span.end,
            };
            lhs = Formula {
                kind: FormulaKind::And(Box::new(lhs), Box::new(rhs)),
                span,
            };
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula> {
        let start = self.pos();
        match self.peek() {
            Some(Tok::Tilde) => {
                self.bump();
                let body = self.unary()?;
                let span = Span {
                    start,
                    end: body.span.end,
                };
                Ok(Formula {
                    kind: FormulaKind::Not(Box::new(body)),
                    span,
                })
            }
            Some(Tok::LParen) => {
                self.bump();
                let inner = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            Some(Tok::Ident(name)) => {
                let name = name.clone();
                if self.is_quantifier_here(&name) {
                    self.quantifier(start, &name)
                } else {
                    self.atom()
                }
            }
            Some(Tok::StrLit(_)) => self.atom(),
            _ => Err(self.err("expected a formula")),
        }
    }

    /// `A`, `E`, `EI` start a quantifier when followed by `ident .`;
    /// `E` also starts one when followed by `[n,m]`.
    fn is_quantifier_here(&self, name: &str) -> bool {
        match name {
            "A" | "E" | "EI" => match (self.peek_ahead(1), self.peek_ahead(2)) {
                (Some(Tok::Ident(_)), Some(Tok::Dot)) => true,
                (Some(Tok::LBracket), _) => name == "E",
                _ => false,
            },
            _ => false,
        }
    }

    fn quantifier(&mut self, start: usize, name: &str) -> Result<Formula> {
        self.bump(); // the quantifier keyword
        let (modulus, residue) = if name == "E" && self.peek() == Some(&Tok::LBracket) {
            self.bump();
            let n = match self.bump() {
                Some(Tok::Nat(n)) => n,
                _ => return Err(self.err("expected modulus in E[n,m]")),
            };
            self.expect(Tok::Comma, "`,` in E[n,m]")?;
            let m = match self.bump() {
                Some(Tok::Nat(m)) => m,
                _ => return Err(self.err("expected residue in E[n,m]")),
            };
            self.expect(Tok::RBracket, "`]` in E[n,m]")?;
            if n == 0 || m >= n {
                return Err(position_error(
                    self.src,
                    start,
                    &format!("malformed mod pair: need 0 <= m < n, got n={n}, m={m}"),
                ));
            }
            (Some(n), Some(m))
        } else {
            (None, None)
        };
        let var = match self.bump() {
            Some(Tok::Ident(v)) => v,
            _ => return Err(self.err("expected a variable after the quantifier")),
        };
        self.expect(Tok::Dot, "`.` after the quantified variable")?;
        let body = Box::new(self.unary()?);
        let span = Span {
            start,
            end: body.span.end,
        };
        let kind = match (name, modulus) {
            ("A", _) => FormulaKind::Forall(var, body),
            ("EI", _) => FormulaKind::ExistsInf(var, body),
            ("E", Some(n)) => FormulaKind::ExistsMod {
                modulus: n,
                residue: residue.unwrap(),
                var,
                body,
            },
            ("E", None) => FormulaKind::Exists(var, body),
            _ => unreachable!(),
        };
        Ok(Formula { kind, span })
    }

    fn atom(&mut self) -> Result<Formula> {
        let start = self.pos();
        let first = self.term()?;
        match self.peek() {
            Some(Tok::LParen) => {
                let rel = match first {
                    Term::Var(name) => name,
                    Term::Const(_) => {
                        return Err(self.err("relation name cannot be a string constant"))
                    }
                };
                self.bump();
                let mut args = vec![self.term()?];
                while self.peek() == Some(&Tok::Comma) {
                    self.bump();
                    args.push(self.term()?);
                }
                self.expect(Tok::RParen, "`)` after atom arguments")?;
                let end = self.prev_end();
                Ok(Formula {
                    kind: FormulaKind::Atom { rel, args },
                    span: Span { start, end },
                })
            }
            Some(Tok::Eq) => {
                self.bump();
                let rhs = self.term()?;
                let end = self.prev_end();
                Ok(Formula {
                    kind: FormulaKind::Equal(first, rhs),
                    span: Span { start, end },
                })
            }
            _ => Err(self.err("expected `(` or `=` to complete the atom")),
        }
    }

    fn prev_end(&self) -> usize {
        self.toks
            .get(self.at.saturating_sub(1))
            .map(|l| l.pos + 1)
            .unwrap_or(self.src.len())
    }

    fn term(&mut self) -> Result<Term> {
        match self.peek() {
            Some(Tok::Ident(_)) => match self.bump() {
                Some(Tok::Ident(v)) => Ok(Term::Var(v)),
                _ => unreachable!(),
            },
            Some(Tok::StrLit(_)) => match self.bump() {
                Some(Tok::StrLit(s)) => Ok(Term::Const(s)),
                _ => unreachable!(),
            },
            _ => Err(self.err("expected a variable or a string constant")),
        }
    }
}

/// Parses a formula and alpha-renames shadowed binders so that every bound
/// variable is distinct from all free variables and from other binders.
pub fn parse_formula(text: &str) -> Result<Formula> {
    let toks = lex(text)?;
    let mut parser = Parser { src: text, toks, at: 0 };
    let formula = parser.formula()?;
    if parser.at != parser.toks.len() {
        return Err(parser.err("unexpected trailing input"));
    }
    let mut taken: Vec<String> = formula.free_vars();
    let renamed = alpha_rename(&formula, &mut Vec::new(), &mut taken);
    Ok(renamed)
}

/// Rewrites binders so that every binder introduces a fresh name.
fn alpha_rename(
    f: &Formula,
    scope: &mut Vec<(String, String)>,
    taken: &mut Vec<String>,
) -> Formula {
    fn rename_term(t: &Term, scope: &[(String, String)]) -> Term {
        match t {
            Term::Var(v) => {
                for (old, new) in scope.iter().rev() {
                    if old == v {
                        return Term::Var(new.clone());
                    }
                }
                Term::Var(v.clone())
            }
            c => c.clone(),
        }
    }
    let kind = match &f.kind {
        FormulaKind::Atom { rel, args } => FormulaKind::Atom {
            rel: rel.clone(),
            args: args.iter().map(|t| rename_term(t, scope)).collect(),
        },
        FormulaKind::Equal(a, b) => {
            FormulaKind::Equal(rename_term(a, scope), rename_term(b, scope))
        }
        FormulaKind::Not(x) => FormulaKind::Not(Box::new(alpha_rename(x, scope, taken))),
        FormulaKind::And(a, b) => FormulaKind::And(
            Box::new(alpha_rename(a, scope, taken)),
            Box::new(alpha_rename(b, scope, taken)),
        ),
        FormulaKind::Or(a, b) => FormulaKind::Or(
            Box::new(alpha_rename(a, scope, taken)),
            Box::new(alpha_rename(b, scope, taken)),
        ),
        FormulaKind::Implies(a, b) => FormulaKind::Implies(
            Box::new(alpha_rename(a, scope, taken)),
            Box::new(alpha_rename(b, scope, taken)),
        ),
        FormulaKind::Iff(a, b) => FormulaKind::Iff(
            Box::new(alpha_rename(a, scope, taken)),
            Box::new(alpha_rename(b, scope, taken)),
        ),
        FormulaKind::Exists(v, b) => {
            let (fresh, body) = rename_binder(v, b, scope, taken);
            FormulaKind::Exists(fresh, Box::new(body))
        }
        FormulaKind::Forall(v, b) => {
            let (fresh, body) = rename_binder(v, b, scope, taken);
            FormulaKind::Forall(fresh, Box::new(body))
        }
        FormulaKind::ExistsInf(v, b) => {
            let (fresh, body) = rename_binder(v, b, scope, taken);
            FormulaKind::ExistsInf(fresh, Box::new(body))
        }
        FormulaKind::ExistsMod {
            modulus,
            residue,
            var,
            body,
        } => {
            let (fresh, body) = rename_binder(var, body, scope, taken);
            FormulaKind::ExistsMod {
                modulus: *modulus,
                residue: *residue,
                var: fresh,
                body: Box::new(body),
            }
        }
    };
    Formula { kind, span: f.span }
}

fn rename_binder(
    var: &str,
    body: &Formula,
    scope: &mut Vec<(String, String)>,
    taken: &mut Vec<String>,
) -> (String, Formula) {
    let fresh = if taken.iter().any(|t| t == var) {
        let mut n = 1;
        loop {
            let candidate = format!("{var}_{n}");
            if !taken.iter().any(|t| t == &candidate) {
                break candidate;
            }
            n += 1;
        }
    } else {
        var.to_string()
    };
    taken.push(fresh.clone());
    scope.push((var.to_string(), fresh.clone()));
    let renamed = alpha_rename(body, scope, taken);
    scope.pop();
    (fresh, renamed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_nested_quantifiers_with_free_var() {
        let f = parse_formula("A x. A y. (Add(x,y,z) -> Add(y,x,z))").unwrap();
        assert_eq!(f.free_vars(), vec!["z".to_string()]);
        match &f.kind {
            FormulaKind::Forall(v, _) => assert_eq!(v, "x"),
            other => panic!("expected Forall, got {other:?}"),
        }
    }

    #[test]
    fn parses_exists_inf() {
        let f = parse_formula("EI y. Le(x,y)").unwrap();
        assert!(matches!(f.kind, FormulaKind::ExistsInf(ref v, _) if v == "y"));
        assert_eq!(f.free_vars(), vec!["x".to_string()]);
    }

    #[test]
    fn parses_exists_mod() {
        let f = parse_formula("E[2,0] z. Between(x,z,y)").unwrap();
        match f.kind {
            FormulaKind::ExistsMod { modulus, residue, .. } => {
                assert_eq!((modulus, residue), (2, 0));
            }
            other => panic!("expected ExistsMod, got {other:?}"),
        }
    }

    #[test]
    fn rejects_malformed_mod_pair() {
        assert!(matches!(
            parse_formula("E[2,2] z. P(z)"),
            Err(Error::Syntax { .. })
        ));
        assert!(matches!(
            parse_formula("E[0,0] z. P(z)"),
            Err(Error::Syntax { .. })
        ));
    }

    #[test]
    fn syntax_error_carries_position() {
        match parse_formula("A x. (P(x) &") {
            Err(Error::Syntax { line, col, .. }) => {
                assert_eq!(line, 1);
                assert!(col >= 12);
            }
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn equality_and_constants() {
        let f = parse_formula("x = \"101\"").unwrap();
        assert_eq!(
            f.kind,
            FormulaKind::Equal(Term::Var("x".into()), Term::Const("101".into()))
        );
    }

    #[test]
    fn shadowed_binder_is_renamed() {
        let f = parse_formula("E x. (P(x) & E x. Q(x))").unwrap();
        if let FormulaKind::Exists(outer, body) = &f.kind {
            if let FormulaKind::And(_, rhs) = &body.kind {
                if let FormulaKind::Exists(inner, inner_body) = &rhs.kind {
                    assert_ne!(outer, inner);
                    assert_eq!(
                        inner_body.free_vars(),
                        vec![inner.clone()],
                        "inner body must use the renamed binder"
                    );
                    return;
                }
            }
        }
        panic!("unexpected shape: {f:?}");
    }

    #[test]
    fn binder_shadowing_free_var_is_renamed() {
        // x occurs free (in P(x)) and bound (in E x. Q(x)).
        let f = parse_formula("P(x) & E x. Q(x)").unwrap();
        assert_eq!(f.free_vars(), vec!["x".to_string()]);
        if let FormulaKind::And(_, rhs) = &f.kind {
            if let FormulaKind::Exists(v, _) = &rhs.kind {
                assert_ne!(v, "x");
                return;
            }
        }
        panic!("unexpected shape: {f:?}");
    }

    #[test]
    fn implication_is_right_associative() {
        let f = parse_formula("P(x) -> Q(x) -> R(x)").unwrap();
        match &f.kind {
            FormulaKind::Implies(_, rhs) => {
                assert!(matches!(rhs.kind, FormulaKind::Implies(_, _)));
            }
            other => panic!("expected Implies, got {other:?}"),
        }
    }

    #[test]
    fn quantifier_body_binds_tightly() {
        // `A x. P(x) & Q(y)` is `(A x. P(x)) & Q(y)`.
        let f = parse_formula("A x. P(x) & Q(y)").unwrap();
        assert!(matches!(f.kind, FormulaKind::And(_, _)));
    }

    #[test]
    fn relation_named_like_quantifier_still_parses() {
        let f = parse_formula("E(x, y)").unwrap();
        assert!(matches!(f.kind, FormulaKind::Atom { ref rel, .. } if rel == "E"));
    }

    #[test]
    fn display_roundtrips_through_parser() {
        let texts = [
            "A x. E y. (Le(x,y) & ~x = y)",
            "EI y. Le(x,y)",
            "E[3,1] z. (P(z) | Q(z))",
            "(P(x) -> Q(x)) <-> R(x)",
            "x = \"01\"",
        ];
        for t in texts {
            let f = parse_formula(t).unwrap();
            let round = parse_formula(&f.to_string()).unwrap();
            assert_eq!(f.to_string(), round.to_string());
        }
    }
}
