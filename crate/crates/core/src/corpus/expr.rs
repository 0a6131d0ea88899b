//! Parser for subtraction-free expressions such as `y1*(p2*y2 + 1)/(p2 ⊕ 1)`.
//!
//! Grammar: sums of products of powers; `*` and `/` bind tighter than `+`
//! and `⊕`; `^` takes a signed integer. A sum written with `⊕` (or `(+)`) is
//! evaluated in the tropical semifield and embedded as a monomial.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::exact_algebra::{PosRatFunc, Vars};
use crate::seeds::trop_to_func;
use crate::semifields::TropMonomial;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Num(BigInt),
    Var(String),
    Add(Vec<Expr>),
    Oplus(Vec<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i32),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Plus,
    Oplus,
    Star,
    Slash,
    Caret,
    Minus,
    LParen,
    RParen,
}

fn lex(s: &str) -> Result<Vec<Tok>> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            out.push(Tok::Num(text.parse().expect("digits")));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if c == '(' && chars.get(i + 1) == Some(&'+') && chars.get(i + 2) == Some(&')') {
            out.push(Tok::Oplus);
            i += 3;
        } else {
            out.push(match c {
                '+' => Tok::Plus,
                '⊕' => Tok::Oplus,
                '*' => Tok::Star,
                '/' => Tok::Slash,
                '^' => Tok::Caret,
                '-' => Tok::Minus,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                _ => return Err(Error::Parse(format!("unexpected character {c:?} in {s:?}"))),
            });
            i += 1;
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn sum(&mut self) -> Result<Expr> {
        let first = self.product()?;
        let mut terms = vec![first];
        let mut kind: Option<Tok> = None;
        while let Some(t @ (Tok::Plus | Tok::Oplus)) = self.peek().cloned() {
            if kind.as_ref().is_some_and(|k| *k != t) {
                return Err(Error::Parse("mixed + and ⊕ in one sum; add parentheses".into()));
            }
            kind = Some(t);
            self.pos += 1;
            terms.push(self.product()?);
        }
        Ok(match kind {
            None => terms.pop().expect("one term"),
            Some(Tok::Plus) => Expr::Add(terms),
            Some(_) => Expr::Oplus(terms),
        })
    }

    fn product(&mut self) -> Result<Expr> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    acc = Expr::Mul(Box::new(acc), Box::new(self.power()?));
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    acc = Expr::Div(Box::new(acc), Box::new(self.power()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.pos += 1;
        let neg = if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            true
        } else {
            false
        };
        match self.next() {
            Some(Tok::Num(n)) => {
                let e: i32 = (&n)
                    .try_into()
                    .map_err(|_| Error::Parse(format!("exponent {n} too large")))?;
                Ok(Expr::Pow(Box::new(base), if neg { -e } else { e }))
            }
            t => Err(Error::Parse(format!("expected integer exponent, found {t:?}"))),
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.next() {
            Some(Tok::Num(n)) => Ok(Expr::Num(n)),
            Some(Tok::Ident(s)) => Ok(Expr::Var(s)),
            Some(Tok::LParen) => {
                let e = self.sum()?;
                match self.next() {
                    Some(Tok::RParen) => Ok(e),
                    t => Err(Error::Parse(format!("expected ')', found {t:?}"))),
                }
            }
            t => Err(Error::Parse(format!("unexpected token {t:?}"))),
        }
    }
}

pub fn parse_expr(s: &str) -> Result<Expr> {
    let mut p = Parser { toks: lex(s)?, pos: 0 };
    let e = p.sum()?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse(format!("trailing input in {s:?}")));
    }
    Ok(e)
}

/// Parse `lhs = rhs`.
pub fn parse_relation(s: &str) -> Result<(Expr, Expr)> {
    let (l, r) = s
        .split_once('=')
        .ok_or_else(|| Error::Parse(format!("relation {s:?} has no '='")))?;
    Ok((parse_expr(l)?, parse_expr(r)?))
}

/// Bindings for evaluation. Names in `trop` are tropical generators, embedded
/// at `trop_offset` of `vars` when a `⊕` sum is used inside a function.
#[derive(Clone, Debug)]
pub struct Env {
    pub vars: Vars,
    pub values: BTreeMap<String, PosRatFunc>,
    pub trop: BTreeMap<String, TropMonomial>,
    pub trop_offset: usize,
}

impl Env {
    /// Every variable of `vars` bound to itself.
    pub fn from_vars(vars: &Vars) -> Self {
        let values = vars
            .names()
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), PosRatFunc::var(vars, i)))
            .collect();
        Env {
            vars: vars.clone(),
            values,
            trop: BTreeMap::new(),
            trop_offset: 0,
        }
    }

    /// Bind tropical generators `names[i]` to the i-th generator of rank `names.len()`.
    pub fn with_trop_generators(mut self, names: &[String], offset: usize) -> Self {
        let r = names.len();
        for (i, n) in names.iter().enumerate() {
            self.trop.insert(n.clone(), TropMonomial::generator(r, i));
        }
        self.trop_offset = offset;
        self
    }

    pub fn bind(&mut self, name: &str, value: PosRatFunc) {
        self.values.insert(name.to_string(), value);
    }

    pub fn eval(&self, e: &Expr) -> Result<PosRatFunc> {
        Ok(match e {
            Expr::Num(n) => PosRatFunc::constant(&self.vars, BigRational::from_integer(n.clone()))?,
            Expr::Var(s) => self
                .values
                .get(s)
                .cloned()
                .ok_or_else(|| Error::Parse(format!("unbound variable {s}")))?,
            Expr::Add(ts) => {
                let items = ts.iter().map(|t| self.eval(t)).collect::<Result<Vec<_>>>()?;
                PosRatFunc::sum(&items)
            }
            Expr::Oplus(_) => trop_to_func(&self.vars, self.trop_offset, &self.eval_trop(e)?),
            Expr::Mul(a, b) => self.eval(a)?.mul(&self.eval(b)?),
            Expr::Div(a, b) => self.eval(a)?.div(&self.eval(b)?),
            Expr::Pow(a, k) => self.eval(a)?.pow(*k),
        })
    }

    pub fn eval_trop(&self, e: &Expr) -> Result<TropMonomial> {
        let r = self.trop.values().next().map_or(0, TropMonomial::rank);
        Ok(match e {
            Expr::Num(_) => TropMonomial::one(r),
            Expr::Var(s) => self
                .trop
                .get(s)
                .cloned()
                .ok_or_else(|| Error::Parse(format!("{s} is not a tropical generator")))?,
            Expr::Add(_) => return Err(Error::Parse("ordinary + inside a tropical expression".into())),
            Expr::Oplus(ts) => {
                let mut it = ts.iter();
                let first = self.eval_trop(it.next().expect("nonempty"))?;
                it.try_fold(first, |acc, t| acc.trop_add(&self.eval_trop(t)?))?
            }
            Expr::Mul(a, b) => self.eval_trop(a)?.mul(&self.eval_trop(b)?),
            Expr::Div(a, b) => self.eval_trop(a)?.div(&self.eval_trop(b)?),
            Expr::Pow(a, k) => self.eval_trop(a)?.pow(*k),
        })
    }

    pub fn eval_str(&self, s: &str) -> Result<PosRatFunc> {
        self.eval(&parse_expr(s)?)
    }

    pub fn eval_trop_str(&self, s: &str) -> Result<TropMonomial> {
        self.eval_trop(&parse_expr(s)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_algebra::VarSet;

    fn env() -> Env {
        let vars = VarSet::new(["y1", "y2", "p1", "p2"]);
        Env::from_vars(&vars).with_trop_generators(&["p1".into(), "p2".into()], 2)
    }

    #[test]
    fn parses_and_evaluates() {
        let e = env();
        let f = e.eval_str("y1*(p2*y2 + 1)/(p2 ⊕ 1)").unwrap();
        let g = e.eval_str("y1*(1 + y2*p2)").unwrap();
        assert!(f.rat_equal(&g));
        assert!(e.eval_str("(y1^-2)^-1").unwrap().rat_equal(&e.eval_str("y1*y1").unwrap()));
    }

    #[test]
    fn tropical_sums() {
        let e = env();
        let t = e.eval_trop_str("(p1*p2 ⊕ p1 ⊕ 1)/p2").unwrap();
        assert_eq!(t, TropMonomial(vec![0, -1]));
        let t = e.eval_trop_str("p1*(p2 (+) 1)").unwrap();
        assert_eq!(t, TropMonomial(vec![1, 0]));
        assert_eq!(e.eval_trop_str("p1^-1/p2^2").unwrap(), TropMonomial(vec![-1, -2]));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(parse_expr("y1 +").is_err());
        assert!(parse_expr("y1 + y2 ⊕ 1").is_err());
        assert!(parse_expr("(y1").is_err());
        assert!(parse_expr("y1 - y2").is_err());
        assert!(env().eval_str("z").is_err());
        assert!(env().eval_trop_str("p1 + 1").is_err());
        let (l, r) = parse_relation("a*b = c + 1").unwrap();
        assert_eq!(l, Expr::Mul(Box::new(Expr::Var("a".into())), Box::new(Expr::Var("b".into()))));
        assert!(matches!(r, Expr::Add(_)));
    }
}
