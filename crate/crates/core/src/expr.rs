//! Small expression language shared by every text format.
//!
//! Grammar: sums of products of atoms, with `^` powers, `/` by a number,
//! parentheses and symmetrized products `{a,b,...}` (average over all orderings).

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Maps identifiers to variable indices and back.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Symbols {
    /// `prefix1`, `prefix2`, ... (1-based in text, 0-based internally).
    Indexed(String, usize),
    Named(Vec<String>),
}

impl Symbols {
    pub fn indexed(prefix: &str, n: usize) -> Self {
        Symbols::Indexed(prefix.to_string(), n)
    }

    pub fn named(names: &[&str]) -> Self {
        Symbols::Named(names.iter().map(|s| s.to_string()).collect())
    }

    pub fn len(&self) -> usize {
        match self {
            Symbols::Indexed(_, n) => *n,
            Symbols::Named(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn name(&self, i: usize) -> String {
        match self {
            Symbols::Indexed(p, _) => format!("{p}{}", i + 1),
            Symbols::Named(v) => v[i].clone(),
        }
    }

    pub fn lookup(&self, ident: &str) -> Option<usize> {
        match self {
            Symbols::Indexed(p, n) => {
                let rest = ident.strip_prefix(p.as_str())?;
                if rest.is_empty() || !rest.bytes().all(|b| b.is_ascii_digit()) || rest.starts_with('0') {
                    return None;
                }
                let k: usize = rest.parse().ok()?;
                (1..=*n).contains(&k).then(|| k - 1)
            }
            Symbols::Named(v) => v.iter().position(|s| s == ident),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(Rational),
    Sym(usize),
    Add(Vec<Expr>),
    Neg(Box<Expr>),
    Mul(Vec<Expr>),
    Pow(Box<Expr>, u32),
    SymProd(Vec<Expr>),
}

/// Target of expression evaluation.
pub trait Ring {
    type E: Clone;
    fn constant(&self, r: &Rational) -> Self::E;
    fn symbol(&self, i: usize) -> Self::E;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn scale(&self, a: &Self::E, r: &Rational) -> Self::E;
}

impl Expr {
    pub fn eval<R: Ring>(&self, ring: &R) -> R::E {
        match self {
            Expr::Num(r) => ring.constant(r),
            Expr::Sym(i) => ring.symbol(*i),
            Expr::Add(v) => {
                let mut acc = ring.constant(&Rational::from_integer(0.into()));
                for e in v {
                    acc = ring.add(&acc, &e.eval(ring));
                }
                acc
            }
            Expr::Neg(e) => ring.scale(&e.eval(ring), &Rational::from_integer((-1).into())),
            Expr::Mul(v) => {
                let mut acc = ring.constant(&Rational::from_integer(1.into()));
                for e in v {
                    acc = ring.mul(&acc, &e.eval(ring));
                }
                acc
            }
            Expr::Pow(e, k) => {
                let b = e.eval(ring);
                let mut acc = ring.constant(&Rational::from_integer(1.into()));
                for _ in 0..*k {
                    acc = ring.mul(&acc, &b);
                }
                acc
            }
            Expr::SymProd(v) => {
                let vals: Vec<R::E> = v.iter().map(|e| e.eval(ring)).collect();
                let mut acc = ring.constant(&Rational::from_integer(0.into()));
                let mut count = 0u64;
                for perm in permutations(vals.len()) {
                    let mut t = ring.constant(&Rational::from_integer(1.into()));
                    for i in perm {
                        t = ring.mul(&t, &vals[i]);
                    }
                    acc = ring.add(&acc, &t);
                    count += 1;
                }
                ring.scale(&acc, &Rational::new(1.into(), count.into()))
            }
        }
    }
}

/// All orderings of 0..k.
pub fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, k - 1);
            out.push(q);
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Op(char),
}

fn lex(s: &str) -> Result<Vec<(usize, Tok)>> {
    let b = s.as_bytes();
    let mut i = 0;
    let mut out = Vec::new();
    while i < b.len() {
        let c = b[i] as char;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < b.len() && b[i].is_ascii_digit() {
                i += 1;
            }
            out.push((st, Tok::Int(s[st..i].parse().unwrap())));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let st = i;
            while i < b.len() && (b[i].is_ascii_alphanumeric() || b[i] == b'_') {
                i += 1;
            }
            out.push((st, Tok::Ident(s[st..i].to_string())));
        } else if "+-*/^(){},".contains(c) {
            out.push((i, Tok::Op(c)));
            i += 1;
        } else {
            return Err(Error::Parse { offset: i, message: format!("unexpected character `{c}`") });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    syms: &'a Symbols,
    end: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.0).unwrap_or(self.end)
    }

    fn err<T>(&self, m: impl Into<String>) -> Result<T> {
        Err(Error::Parse { offset: self.offset(), message: m.into() })
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut terms = Vec::new();
        let mut first = true;
        loop {
            let neg = if self.eat('-') {
                true
            } else {
                if !self.eat('+') && !first {
                    break;
                }
                false
            };
            first = false;
            let t = self.term()?;
            terms.push(if neg { Expr::Neg(Box::new(t)) } else { t });
            if !matches!(self.peek(), Some(Tok::Op('+')) | Some(Tok::Op('-'))) {
                break;
            }
        }
        Ok(if terms.len() == 1 { terms.pop().unwrap() } else { Expr::Add(terms) })
    }

    fn term(&mut self) -> Result<Expr> {
        let mut factors = vec![self.factor()?];
        loop {
            if self.eat('*') {
                factors.push(self.factor()?);
            } else if self.eat('/') {
                match self.factor()? {
                    Expr::Num(r) if r != Rational::from_integer(0.into()) => {
                        factors.push(Expr::Num(Rational::from_integer(1.into()) / r))
                    }
                    _ => return self.err("division only by a nonzero number"),
                }
            } else {
                break;
            }
        }
        Ok(if factors.len() == 1 { factors.pop().unwrap() } else { Expr::Mul(factors) })
    }

    fn factor(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.eat('^') {
            match self.peek().cloned() {
                Some(Tok::Int(k)) => {
                    self.pos += 1;
                    let k: u32 = k.try_into().or_else(|_| self.err("exponent too large"))?;
                    Ok(Expr::Pow(Box::new(base), k))
                }
                _ => self.err("expected integer exponent"),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(Expr::Num(Rational::from_integer(n)))
            }
            Some(Tok::Ident(id)) => match self.syms.lookup(&id) {
                Some(i) => {
                    self.pos += 1;
                    Ok(Expr::Sym(i))
                }
                None => self.err(format!("unknown symbol `{id}`")),
            },
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return self.err("expected `)`");
                }
                Ok(e)
            }
            Some(Tok::Op('{')) => {
                self.pos += 1;
                let mut items = vec![self.expr()?];
                while self.eat(',') {
                    items.push(self.expr()?);
                }
                if !self.eat('}') {
                    return self.err("expected `}`");
                }
                Ok(Expr::SymProd(items))
            }
            _ => self.err("expected a term"),
        }
    }
}

pub fn parse_expr(s: &str, syms: &Symbols) -> Result<Expr> {
    let toks = lex(s)?;
    if toks.is_empty() {
        return Err(Error::Parse { offset: 0, message: "empty expression".into() });
    }
    let mut p = Parser { toks, pos: 0, syms, end: s.len() };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(e)
}
