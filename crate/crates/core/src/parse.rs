//! The `.alg` problem format and the polynomial expression grammar.
//!
//! ```text
//! # SL(2): determinant one
//! n 2
//! field Q            # or: field F 5
//! x1*x4 - x2*x3 - 1
//! ```
//!
//! Header lines come first; every later non-empty line is one generator.
//! Expressions use integer literals, variables `x<k>`, `+ - * ^` and
//! parentheses. `^` binds tightest, then unary minus, then `*`, then binary
//! `+`/`-`. Exponents are non-negative integer literals.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use thiserror::Error;

use crate::coeff::{CoeffError, Field, Fp, PrimeModulus, Rational};
use crate::poly::{Polynomial, VarRing};
use crate::symmat;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("{0}")]
    Syntax(String),
    #[error("variable {name} out of range for n={n} (valid: x1..x{max})", max = n * n)]
    VariableOutOfRange { name: String, n: usize },
    #[error("unknown variable {0}")]
    UnknownVariable(String),
    #[error("malformed coefficient {0:?}")]
    MalformedCoefficient(String),
    #[error("{0}")]
    Field(#[from] CoeffError),
    #[error("missing header line `{0}`")]
    MissingHeader(&'static str),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.kind)
    }
}

/// A parsed problem: the matrix size and the generators of `I` in the ring
/// `K[x1, …, x_{n²}]`.
#[derive(Clone, Debug)]
pub struct ProblemSpec<K: Field> {
    pub n: usize,
    pub ring: Arc<VarRing<K>>,
    pub generators: Vec<Polynomial<K>>,
}

impl<K: Field> ProblemSpec<K> {
    pub fn new(n: usize, ctx: K::Ctx, generators: Vec<Polynomial<K>>) -> Self {
        let ring = symmat::x_ring::<K>(n, ctx);
        let generators = generators
            .into_iter()
            .map(|g| g.embed(&ring).expect("generator outside x1..x_{n^2}"))
            .collect();
        ProblemSpec { n, ring, generators }
    }

    pub fn empty(n: usize, ctx: K::Ctx) -> Self {
        let ring = symmat::x_ring::<K>(n, ctx);
        ProblemSpec { n, ring, generators: Vec::new() }
    }

    /// Parses generators given as expressions in the problem's ring.
    pub fn from_strs(n: usize, ctx: K::Ctx, gens: &[&str]) -> Result<Self, ParseError> {
        let ring = symmat::x_ring::<K>(n, ctx);
        let generators = gens.iter().map(|g| parse_poly(g, &ring)).collect::<Result<_, _>>()?;
        Ok(ProblemSpec { n, ring, generators })
    }
}

/// A problem over whichever field its header names.
#[derive(Clone, Debug)]
pub enum AnyProblem {
    Rational(ProblemSpec<Rational>),
    Prime(ProblemSpec<Fp>),
}

impl AnyProblem {
    pub fn n(&self) -> usize {
        match self {
            AnyProblem::Rational(p) => p.n,
            AnyProblem::Prime(p) => p.n,
        }
    }

    pub fn generator_count(&self) -> usize {
        match self {
            AnyProblem::Rational(p) => p.generators.len(),
            AnyProblem::Prime(p) => p.generators.len(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Var(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    col: usize,
}

fn lex(text: &str, line: usize, col0: usize) -> Result<Vec<Spanned>, ParseError> {
    let err = |col: usize, kind| ParseError { line, column: col, kind };
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = col0 + i;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let simple = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(tok) = simple {
            out.push(Spanned { tok, col });
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let lit: String = chars[start..i].iter().collect();
            if !lit.chars().all(|d| d.is_ascii_digit()) {
                return Err(err(col, ParseErrorKind::MalformedCoefficient(lit)));
            }
            let v: BigInt = lit.parse().expect("digits");
            out.push(Spanned { tok: Tok::Int(v), col });
            continue;
        }
        if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let name: String = chars[start..i].iter().collect();
            out.push(Spanned { tok: Tok::Var(name), col });
            continue;
        }
        return Err(err(col, ParseErrorKind::Syntax(format!("unexpected character {c:?}"))));
    }
    Ok(out)
}

struct Parser<'a, K: Field> {
    toks: Vec<Spanned>,
    pos: usize,
    ring: &'a Arc<VarRing<K>>,
    line: usize,
    end_col: usize,
}

impl<'a, K: Field> Parser<'a, K> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |s| s.col)
    }

    fn error(&self, kind: ParseErrorKind) -> ParseError {
        ParseError { line: self.line, column: self.col(), kind }
    }

    fn syntax(&self, msg: impl Into<String>) -> ParseError {
        self.error(ParseErrorKind::Syntax(msg.into()))
    }

    fn expr(&mut self) -> Result<Polynomial<K>, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial<K>, ParseError> {
        let mut acc = self.unary()?;
        while let Some(Tok::Star) = self.peek() {
            self.pos += 1;
            acc = &acc * &self.unary()?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Polynomial<K>, ParseError> {
        if let Some(Tok::Minus) = self.peek() {
            self.pos += 1;
            return Ok(self.unary()?.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<Polynomial<K>, ParseError> {
        let base = self.atom()?;
        if let Some(Tok::Caret) = self.peek() {
            self.pos += 1;
            let e = match self.peek() {
                Some(Tok::Int(v)) => {
                    let e = u32::try_from(v.clone())
                        .map_err(|_| self.syntax(format!("exponent {v} too large")))?;
                    self.pos += 1;
                    e
                }
                _ => return Err(self.syntax("expected a non-negative integer exponent after '^'")),
            };
            if let Some(Tok::Caret) = self.peek() {
                return Err(self.syntax("chained '^' needs parentheses"));
            }
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Polynomial<K>, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Int(v)) => {
                self.pos += 1;
                Ok(Polynomial::constant(self.ring, K::from_bigint(self.ring.ctx(), &v)))
            }
            Some(Tok::Var(name)) => {
                let p = self.variable(&name)?;
                self.pos += 1;
                Ok(p)
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                match self.peek() {
                    Some(Tok::RParen) => {
                        self.pos += 1;
                        Ok(inner)
                    }
                    _ => Err(self.syntax("expected ')'")),
                }
            }
            Some(t) => Err(self.syntax(format!("unexpected {}", describe(&t)))),
            None => Err(self.syntax("unexpected end of expression")),
        }
    }

    fn variable(&self, name: &str) -> Result<Polynomial<K>, ParseError> {
        if let Some(i) = self.ring.var_index(name) {
            return Ok(Polynomial::var(self.ring, i));
        }
        if let (Some(n), Some(k)) = (self.ring.matrix_dim(), name.strip_prefix('x')) {
            if !k.is_empty() && k.chars().all(|c| c.is_ascii_digit()) {
                return Err(self.error(ParseErrorKind::VariableOutOfRange { name: name.to_string(), n }));
            }
        }
        Err(self.error(ParseErrorKind::UnknownVariable(name.to_string())))
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Int(v) => format!("number {v}"),
        Tok::Var(v) => format!("variable {v}"),
        Tok::Plus => "'+'".into(),
        Tok::Minus => "'-'".into(),
        Tok::Star => "'*'".into(),
        Tok::Caret => "'^'".into(),
        Tok::LParen => "'('".into(),
        Tok::RParen => "')'".into(),
    }
}

fn parse_at<K: Field>(
    text: &str,
    ring: &Arc<VarRing<K>>,
    line: usize,
    col0: usize,
) -> Result<Polynomial<K>, ParseError> {
    let toks = lex(text, line, col0)?;
    let end_col = col0 + text.chars().count();
    let mut p = Parser { toks, pos: 0, ring, line, end_col };
    let f = p.expr()?;
    if p.pos != p.toks.len() {
        let t = p.toks[p.pos].tok.clone();
        return Err(p.syntax(format!("unexpected {} (missing operator?)", describe(&t))));
    }
    Ok(f)
}

/// Parses one expression into the expanded polynomial over `ring`.
pub fn parse_poly<K: Field>(text: &str, ring: &Arc<VarRing<K>>) -> Result<Polynomial<K>, ParseError> {
    parse_at(text, ring, 1, 1)
}

enum FieldHeader {
    Q,
    F(PrimeModulus),
}

/// Parses a whole `.alg` problem file.
pub fn parse_problem(text: &str) -> Result<AnyProblem, ParseError> {
    let mut n: Option<usize> = None;
    let mut field: Option<FieldHeader> = None;
    let mut body: Vec<(usize, usize, &str)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        let trimmed = content.trim_start();
        if trimmed.trim().is_empty() {
            continue;
        }
        let col = content.chars().count() - trimmed.chars().count() + 1;
        let err = |column: usize, kind| ParseError { line: line_no, column, kind };
        let mut words = trimmed.split_whitespace();
        let head = words.next().unwrap_or("");
        if body.is_empty() && (head == "n" || head == "field") {
            let rest: Vec<&str> = words.collect();
            if head == "n" {
                let v = match rest.as_slice() {
                    [v] => v.parse::<usize>().ok().filter(|&v| v >= 1),
                    _ => None,
                };
                let v = v.ok_or_else(|| {
                    err(col, ParseErrorKind::Syntax("expected `n <positive integer>`".into()))
                })?;
                n = Some(v);
            } else {
                field = Some(match rest.as_slice() {
                    ["Q"] => FieldHeader::Q,
                    ["F", p] => {
                        let p: u64 = p.parse().map_err(|_| {
                            err(col, ParseErrorKind::Syntax(format!("bad characteristic {p:?}")))
                        })?;
                        FieldHeader::F(PrimeModulus::new(p).map_err(|e| err(col, e.into()))?)
                    }
                    _ => {
                        return Err(err(col, ParseErrorKind::Syntax("expected `field Q` or `field F <p>`".into())))
                    }
                });
            }
            continue;
        }
        body.push((line_no, col, trimmed));
    }

    let first_line = body.first().map_or(1, |b| b.0);
    let n = n.ok_or(ParseError { line: first_line, column: 1, kind: ParseErrorKind::MissingHeader("n <int>") })?;
    let field = field.ok_or(ParseError {
        line: first_line,
        column: 1,
        kind: ParseErrorKind::MissingHeader("field Q | field F <p>"),
    })?;

    fn gens<K: Field>(
        n: usize,
        ctx: K::Ctx,
        body: &[(usize, usize, &str)],
    ) -> Result<ProblemSpec<K>, ParseError> {
        let ring = symmat::x_ring::<K>(n, ctx);
        let generators = body
            .iter()
            .map(|(line, col, text)| parse_at(text, &ring, *line, *col))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(ProblemSpec { n, ring, generators })
    }

    Ok(match field {
        FieldHeader::Q => AnyProblem::Rational(gens::<Rational>(n, (), &body)?),
        FieldHeader::F(p) => AnyProblem::Prime(gens::<Fp>(n, p, &body)?),
    })
}
