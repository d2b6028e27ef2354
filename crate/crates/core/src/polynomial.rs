use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::error::{check_dim, Result};
use crate::expr::{parse_expr, Ring, Symbols};
use crate::monomial::Monomial;
use crate::rational::Rational;

/// Sparse commutative polynomial with exact rational coefficients in `n` variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    n: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero(n: usize) -> Self {
        Polynomial { n, terms: BTreeMap::new() }
    }

    pub fn constant(n: usize, c: Rational) -> Self {
        Self::term(c, Monomial::one(n))
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, Rational::one())
    }

    /// The coordinate x_{i+1}.
    pub fn var(n: usize, i: usize) -> Self {
        Self::term(Rational::one(), Monomial::var(n, i))
    }

    pub fn term(c: Rational, m: Monomial) -> Self {
        let n = m.dim();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial { n, terms }
    }

    pub fn from_terms(n: usize, it: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = Polynomial::zero(n);
        for (m, c) in it {
            assert_eq!(m.dim(), n, "monomial dimension");
            p.add_term(m, c);
        }
        p
    }

    /// Linear form sum_i v_i x_i.
    pub fn linear(v: &[Rational]) -> Self {
        let n = v.len();
        Self::from_terms(n, v.iter().enumerate().map(|(i, c)| (Monomial::var(n, i), c.clone())))
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn term_map(&self) -> &BTreeMap<Monomial, Rational> {
        &self.terms
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut it = self.terms.keys().map(|m| m.degree());
        match it.next() {
            None => true,
            Some(d) => it.all(|e| e == d),
        }
    }

    pub fn homogeneous_part(&self, d: u32) -> Polynomial {
        Polynomial {
            n: self.n,
            terms: self.terms.iter().filter(|(m, _)| m.degree() == d).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Polynomial, c: &Rational) {
        assert_eq!(self.n, other.n, "polynomial dimension mismatch");
        if c.is_zero() {
            return;
        }
        for (m, d) in &other.terms {
            self.add_term(m.clone(), d * c);
        }
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.n);
        }
        Polynomial { n: self.n, terms: self.terms.iter().map(|(m, d)| (m.clone(), d * c)).collect() }
    }

    pub fn checked_add(&self, other: &Polynomial) -> Result<Polynomial> {
        check_dim(self.n, other.n)?;
        let mut r = self.clone();
        r.add_scaled(other, &Rational::one());
        Ok(r)
    }

    pub fn checked_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        check_dim(self.n, other.n)?;
        let mut r = Polynomial::zero(self.n);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                r.add_term(m1.mul(m2), c1 * c2);
            }
        }
        Ok(r)
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        let mut acc = Polynomial::one(self.n);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Partial derivative with respect to x_{i+1}.
    pub fn derivative(&self, i: usize) -> Polynomial {
        let mut r = Polynomial::zero(self.n);
        for (m, c) in &self.terms {
            let e = m.exponents()[i];
            if e > 0 {
                r.add_term(m.with_delta(i, -1).unwrap(), c * Rational::from_integer(e.into()));
            }
        }
        r
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.n, "evaluation point dimension");
        let mut s = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m.exponents()) {
                for _ in 0..e {
                    t *= x;
                }
            }
            s += t;
        }
        s
    }

    /// Replaces x_{i+1} by `values[i]`; all values share one ambient dimension.
    pub fn substitute(&self, values: &[Polynomial]) -> Result<Polynomial> {
        check_dim(self.n, values.len())?;
        let target = values.first().map(|v| v.n).unwrap_or(0);
        for v in values {
            check_dim(target, v.n)?;
        }
        let mut powers: Vec<Vec<Polynomial>> = values.iter().map(|v| vec![Polynomial::one(v.n)]).collect();
        let mut r = Polynomial::zero(target);
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(target, c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap() * &values[i];
                    powers[i].push(next);
                }
                t = &t * &powers[i][e as usize];
            }
            r.add_scaled(&t, &Rational::one());
        }
        Ok(r)
    }

    /// Leading-coefficient-one multiple; zero stays zero.
    pub fn monic(&self) -> Polynomial {
        match self.leading_term() {
            Some((_, c)) => self.scale(&(Rational::one() / c)),
            None => self.clone(),
        }
    }

    pub fn parse(s: &str, n: usize) -> Result<Polynomial> {
        Self::parse_with(s, &Symbols::indexed("x", n))
    }

    pub fn parse_with(s: &str, syms: &Symbols) -> Result<Polynomial> {
        let e = parse_expr(s, syms)?;
        Ok(e.eval(&PolyRing { n: syms.len() }))
    }

    pub fn format_with(&self, syms: &Symbols) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let factors: Vec<String> = m
                .exponents()
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| if e == 1 { syms.name(i) } else { format!("{}^{}", syms.name(i), e) })
                .collect();
            if factors.is_empty() {
                out.push_str(&a.to_string());
            } else {
                if !a.is_one() {
                    out.push_str(&a.to_string());
                    out.push('*');
                }
                out.push_str(&factors.join("*"));
            }
        }
        out
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format_with(&Symbols::indexed("x", self.n)))
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, o: &Polynomial) -> Polynomial {
        self.checked_add(o).expect("polynomial dimension mismatch")
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, o: &Polynomial) -> Polynomial {
        let mut r = self.clone();
        r.add_scaled(o, &-Rational::one());
        r
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, o: &Polynomial) -> Polynomial {
        self.checked_mul(o).expect("polynomial dimension mismatch")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&-Rational::one())
    }
}

/// Commutative evaluation into polynomials in `n` variables.
pub struct PolyRing {
    pub n: usize,
}

impl Ring for PolyRing {
    type E = Polynomial;
    fn constant(&self, r: &Rational) -> Polynomial {
        Polynomial::constant(self.n, r.clone())
    }
    fn symbol(&self, i: usize) -> Polynomial {
        Polynomial::var(self.n, i)
    }
    fn add(&self, a: &Polynomial, b: &Polynomial) -> Polynomial {
        a + b
    }
    fn mul(&self, a: &Polynomial, b: &Polynomial) -> Polynomial {
        a * b
    }
    fn scale(&self, a: &Polynomial, r: &Rational) -> Polynomial {
        a.scale(r)
    }
}

/// Commutative evaluation where symbol i stands for `values[i]`.
pub struct SubstRing<'a> {
    pub n: usize,
    pub values: &'a [Polynomial],
}

impl Ring for SubstRing<'_> {
    type E = Polynomial;
    fn constant(&self, r: &Rational) -> Polynomial {
        Polynomial::constant(self.n, r.clone())
    }
    fn symbol(&self, i: usize) -> Polynomial {
        self.values[i].clone()
    }
    fn add(&self, a: &Polynomial, b: &Polynomial) -> Polynomial {
        a + b
    }
    fn mul(&self, a: &Polynomial, b: &Polynomial) -> Polynomial {
        a * b
    }
    fn scale(&self, a: &Polynomial, r: &Rational) -> Polynomial {
        a.scale(r)
    }
}
