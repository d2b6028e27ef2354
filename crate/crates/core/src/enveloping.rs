use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::One;

use crate::error::{check_dim, Result};
use crate::expr::{parse_expr, permutations, Ring, Symbols};
use crate::lie::LieAlgebraModel;
use crate::monomial::Monomial;
use crate::polynomial::Polynomial;
use crate::rational::Rational;

/// Element of U(g) in the PBW basis X1^a1 ... Xn^an (X1 < ... < Xn).
///
/// Stored as the coefficient map of normal-ordered monomials.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PbwElement(Polynomial);

impl PbwElement {
    pub fn zero(n: usize) -> Self {
        PbwElement(Polynomial::zero(n))
    }

    pub fn one(n: usize) -> Self {
        PbwElement(Polynomial::one(n))
    }

    pub fn generator(n: usize, i: usize) -> Self {
        PbwElement(Polynomial::var(n, i))
    }

    /// Element with the given normal-ordered coefficient map.
    pub fn from_normal_ordered(p: Polynomial) -> Self {
        PbwElement(p)
    }

    /// Coefficients as a commutative polynomial (monomial = normal-ordered word).
    pub fn coefficients(&self) -> &Polynomial {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// Filtration degree.
    pub fn degree(&self) -> Option<u32> {
        self.0.degree()
    }

    /// Top filtration component read as a commutative polynomial.
    pub fn symbol(&self) -> Polynomial {
        match self.degree() {
            Some(d) => self.0.homogeneous_part(d),
            None => Polynomial::zero(self.dim()),
        }
    }

    pub fn add(&self, o: &PbwElement) -> PbwElement {
        PbwElement(&self.0 + &o.0)
    }

    pub fn sub(&self, o: &PbwElement) -> PbwElement {
        PbwElement(&self.0 - &o.0)
    }

    pub fn scale(&self, c: &Rational) -> PbwElement {
        PbwElement(self.0.scale(c))
    }

    pub fn format_with(&self, syms: &Symbols) -> String {
        self.0.format_with(syms)
    }
}

impl fmt::Display for PbwElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.format_with(&Symbols::indexed("X", self.dim())))
    }
}

/// Multiplication context for U(g), memoizing normal-ordering steps.
pub struct Enveloping<'a> {
    algebra: &'a LieAlgebraModel,
    right: RefCell<HashMap<(Monomial, usize), Polynomial>>,
    sym: RefCell<HashMap<Monomial, Polynomial>>,
}

impl<'a> Enveloping<'a> {
    pub fn new(algebra: &'a LieAlgebraModel) -> Self {
        Enveloping { algebra, right: RefCell::new(HashMap::new()), sym: RefCell::new(HashMap::new()) }
    }

    pub fn algebra(&self) -> &LieAlgebraModel {
        self.algebra
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    /// u * X_k in normal order.
    fn mono_times_gen(&self, u: &Monomial, k: usize) -> Polynomial {
        let n = self.dim();
        let last = u.exponents().iter().rposition(|&e| e > 0);
        match last {
            None => return Polynomial::term(Rational::one(), Monomial::var(n, k)),
            Some(m) if m <= k => return Polynomial::term(Rational::one(), u.with_delta(k, 1).unwrap()),
            _ => {}
        }
        if let Some(r) = self.right.borrow().get(&(u.clone(), k)) {
            return r.clone();
        }
        let m = last.unwrap();
        let head = u.with_delta(m, -1).unwrap();
        // head X_m X_k = (head X_k) X_m + head [X_m, X_k]
        let mut out = Polynomial::zero(n);
        let hk = self.mono_times_gen(&head, k);
        for (t, c) in hk.terms() {
            out.add_scaled(&self.mono_times_gen(t, m), c);
        }
        for (l, c) in self.algebra.structure(m, k) {
            out.add_scaled(&self.mono_times_gen(&head, *l), c);
        }
        self.right.borrow_mut().insert((u.clone(), k), out.clone());
        out
    }

    fn times_gen(&self, a: &Polynomial, k: usize) -> Polynomial {
        let mut out = Polynomial::zero(self.dim());
        for (t, c) in a.terms() {
            out.add_scaled(&self.mono_times_gen(t, k), c);
        }
        out
    }

    /// Right multiplication by the word X_{w1} X_{w2} ...
    fn times_word(&self, a: &Polynomial, word: &[usize]) -> Polynomial {
        word.iter().fold(a.clone(), |acc, &k| self.times_gen(&acc, k))
    }

    pub fn multiply(&self, a: &PbwElement, b: &PbwElement) -> Result<PbwElement> {
        check_dim(self.dim(), a.dim())?;
        check_dim(self.dim(), b.dim())?;
        let mut out = Polynomial::zero(self.dim());
        for (v, c) in b.0.terms() {
            out.add_scaled(&self.times_word(&a.0, &v.letters()), c);
        }
        Ok(PbwElement(out))
    }

    pub fn commutator(&self, a: &PbwElement, b: &PbwElement) -> Result<PbwElement> {
        Ok(self.multiply(a, b)?.sub(&self.multiply(b, a)?))
    }

    /// Product of a word of generators.
    pub fn word(&self, letters: &[usize]) -> PbwElement {
        PbwElement(self.times_word(&Polynomial::one(self.dim()), letters))
    }

    /// Symmetrization map by the literal average over all n! orderings.
    pub fn symmetrize_oracle(&self, p: &Polynomial) -> PbwElement {
        let n = self.dim();
        let mut out = Polynomial::zero(n);
        for (m, c) in p.terms() {
            let letters = m.letters();
            let perms = permutations(letters.len());
            let mut acc = Polynomial::zero(n);
            for perm in &perms {
                let w: Vec<usize> = perm.iter().map(|&i| letters[i]).collect();
                acc.add_scaled(&self.times_word(&Polynomial::one(n), &w), &Rational::one());
            }
            out.add_scaled(&acc, &(c / Rational::from_integer(perms.len().into())));
        }
        PbwElement(out)
    }

    /// Symmetrization via Sym(m) = sum_l (e_l/|m|) Sym(m / x_l) X_l, memoized.
    pub fn symmetrize(&self, p: &Polynomial) -> PbwElement {
        let mut out = Polynomial::zero(self.dim());
        for (m, c) in p.terms() {
            out.add_scaled(&self.sym_monomial(m), c);
        }
        PbwElement(out)
    }

    fn sym_monomial(&self, m: &Monomial) -> Polynomial {
        let n = self.dim();
        let d = m.degree();
        if d <= 1 {
            return Polynomial::term(Rational::one(), m.clone());
        }
        if let Some(r) = self.sym.borrow().get(m) {
            return r.clone();
        }
        let mut out = Polynomial::zero(n);
        for (l, &e) in m.exponents().iter().enumerate() {
            if e == 0 {
                continue;
            }
            let rest = self.sym_monomial(&m.with_delta(l, -1).unwrap());
            out.add_scaled(&self.times_gen(&rest, l), &Rational::new(e.into(), d.into()));
        }
        self.sym.borrow_mut().insert(m.clone(), out.clone());
        out
    }

    /// Parses a noncommutative expression in X1..Xn (products are taken in the written order).
    pub fn parse(&self, s: &str) -> Result<PbwElement> {
        self.parse_with(s, &Symbols::indexed("X", self.dim()))
    }

    pub fn parse_with(&self, s: &str, syms: &Symbols) -> Result<PbwElement> {
        Ok(parse_expr(s, syms)?.eval(self))
    }
}

impl Ring for Enveloping<'_> {
    type E = PbwElement;
    fn constant(&self, r: &Rational) -> PbwElement {
        PbwElement::one(self.dim()).scale(r)
    }
    fn symbol(&self, i: usize) -> PbwElement {
        PbwElement::generator(self.dim(), i)
    }
    fn add(&self, a: &PbwElement, b: &PbwElement) -> PbwElement {
        PbwElement::add(a, b)
    }
    fn mul(&self, a: &PbwElement, b: &PbwElement) -> PbwElement {
        self.multiply(a, b).expect("same algebra")
    }
    fn scale(&self, a: &PbwElement, r: &Rational) -> PbwElement {
        PbwElement::scale(a, r)
    }
}

/// Noncommutative evaluation where symbol i stands for a given element.
pub struct GeneratorRing<'a, 'b> {
    pub env: &'a Enveloping<'b>,
    pub values: &'a [PbwElement],
}

impl Ring for GeneratorRing<'_, '_> {
    type E = PbwElement;
    fn constant(&self, r: &Rational) -> PbwElement {
        self.env.constant(r)
    }
    fn symbol(&self, i: usize) -> PbwElement {
        self.values[i].clone()
    }
    fn add(&self, a: &PbwElement, b: &PbwElement) -> PbwElement {
        PbwElement::add(a, b)
    }
    fn mul(&self, a: &PbwElement, b: &PbwElement) -> PbwElement {
        self.env.mul(a, b)
    }
    fn scale(&self, a: &PbwElement, r: &Rational) -> PbwElement {
        PbwElement::scale(a, r)
    }
}

pub fn nc_multiply(algebra: &LieAlgebraModel, a: &PbwElement, b: &PbwElement) -> Result<PbwElement> {
    Enveloping::new(algebra).multiply(a, b)
}

pub fn commutator(algebra: &LieAlgebraModel, a: &PbwElement, b: &PbwElement) -> Result<PbwElement> {
    Enveloping::new(algebra).commutator(a, b)
}

pub fn symmetrize(algebra: &LieAlgebraModel, p: &Polynomial) -> PbwElement {
    Enveloping::new(algebra).symmetrize_oracle(p)
}

/// Filtration-degree histogram helper used by reports.
pub fn degree_parts(a: &PbwElement) -> BTreeMap<u32, Polynomial> {
    let mut out = BTreeMap::new();
    for (m, c) in a.0.terms() {
        out.entry(m.degree()).or_insert_with(|| Polynomial::zero(a.dim())).add_term(m.clone(), c.clone());
    }
    out.retain(|_, p: &mut Polynomial| !p.is_zero());
    out
}
