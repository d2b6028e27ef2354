use std::cmp::Reverse;
use std::collections::BTreeMap;

use num_traits::One;

use crate::commutant::{poly_vec, vec_poly};
use crate::error::{Error, Result};
use crate::expr::Symbols;
use crate::lie::LieAlgebraModel;
use crate::linalg::Echelon;
use crate::monomial::{monomials_of_degree, Monomial};
use crate::poisson::lie_poisson_bracket;
use crate::polynomial::Polynomial;
use crate::rational::Rational;

/// Pairwise brackets of generators expressed through monomials in the generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BracketTable {
    pub names: Vec<String>,
    pub generators: Vec<Polynomial>,
    pub expression_degree: u32,
    /// (i, j) with i < j -> {A_i, A_j} as a polynomial in the generator symbols.
    pub entries: BTreeMap<(usize, usize), Polynomial>,
    /// (i, j) -> part of the bracket outside the expression span (x-coordinates); only nonzero ones.
    pub remainders: BTreeMap<(usize, usize), Polynomial>,
    /// (i, j) -> directly computed bracket in x-coordinates.
    pub brackets: BTreeMap<(usize, usize), Polynomial>,
}

impl BracketTable {
    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn symbols(&self) -> Symbols {
        Symbols::Named(self.names.clone())
    }

    pub fn x_dim(&self) -> usize {
        self.generators.first().map(|g| g.dim()).unwrap_or(0)
    }

    /// {A_i, A_j} for any ordered pair.
    pub fn entry(&self, i: usize, j: usize) -> Polynomial {
        let m = self.len();
        if i == j {
            return Polynomial::zero(m);
        }
        if i < j {
            self.entries[&(i, j)].clone()
        } else {
            -&self.entries[&(j, i)]
        }
    }

    pub fn is_closed(&self) -> bool {
        self.remainders.is_empty()
    }

    pub fn is_abelian(&self) -> bool {
        self.brackets.values().all(|b| b.is_zero())
    }

    /// Substitutes the generator polynomials into an expression in the generator symbols.
    pub fn expand(&self, expr: &Polynomial) -> Polynomial {
        if self.is_empty() {
            return expr.clone();
        }
        expr.substitute(&self.generators).expect("expression dimension")
    }

    /// Re-expansion check: expression plus remainder reproduces every bracket.
    pub fn verify(&self) -> Result<()> {
        for ((i, j), b) in &self.brackets {
            let mut e = self.expand(&self.entries[&(*i, *j)]);
            if let Some(r) = self.remainders.get(&(*i, *j)) {
                e = &e + r;
            }
            if &e != b {
                return Err(Error::Inconsistent(format!(
                    "entry ({}, {}) does not re-expand to the bracket",
                    self.names[*i], self.names[*j]
                )));
            }
        }
        Ok(())
    }

    /// Largest generator-degree appearing in any entry.
    pub fn max_entry_degree(&self) -> u32 {
        self.entries.values().filter_map(|e| e.degree()).max().unwrap_or(0)
    }
}

/// Ordered expression basis: generator monomials of degree 0..=d, low degrees first.
pub fn generator_monomials(m: usize, d: u32) -> Vec<Monomial> {
    (0..=d).flat_map(|k| monomials_of_degree(m, k)).collect()
}

/// Closes the Poisson algebra generated by `generators`.
///
/// Every bracket is written in the span of generator monomials of degree at
/// most `expression_degree`; among the possible expressions the one using the
/// earliest independent basis monomials is chosen.
pub fn close_algebra(
    algebra: &LieAlgebraModel,
    generators: &[(String, Polynomial)],
    expression_degree: u32,
) -> Result<BracketTable> {
    if expression_degree == 0 {
        return Err(Error::InvalidDegree("expression_degree must be at least 1".into()));
    }
    let n = algebra.dim();
    for (i, (name, g)) in generators.iter().enumerate() {
        if g.is_zero() {
            return Err(Error::InvalidSubalgebra(format!("generator {name} is zero")));
        }
        if generators[..i].iter().any(|(_, h)| h == g) {
            return Err(Error::InvalidSubalgebra(format!("generator {name} is repeated")));
        }
        crate::error::check_dim(n, g.dim())?;
    }
    let m = generators.len();
    let names: Vec<String> = generators.iter().map(|(s, _)| s.clone()).collect();
    let gens: Vec<Polynomial> = generators.iter().map(|(_, g)| g.clone()).collect();
    let basis = generator_monomials(m, expression_degree);
    let mut span: Echelon<Reverse<Monomial>> = Echelon::new();
    for (t, mono) in basis.iter().enumerate() {
        let e = Polynomial::term(Rational::one(), mono.clone()).substitute(&gens);
        let e = if m == 0 { Polynomial::one(n) } else { e? };
        span.insert(&poly_vec(&e), Some(t));
    }
    let mut entries = BTreeMap::new();
    let mut remainders = BTreeMap::new();
    let mut brackets = BTreeMap::new();
    for i in 0..m {
        for j in i + 1..m {
            let b = lie_poisson_bracket(algebra, &gens[i], &gens[j])?;
            let (res, combo) = span.reduce(&poly_vec(&b));
            let expr = Polynomial::from_terms(m, combo.iter().map(|(t, c)| (basis[*t].clone(), c.clone())));
            if !res.is_empty() {
                remainders.insert((i, j), vec_poly(n, &res));
            }
            entries.insert((i, j), expr);
            brackets.insert((i, j), b);
        }
    }
    let table = BracketTable { names, generators: gens, expression_degree, entries, remainders, brackets };
    table.verify()?;
    Ok(table)
}

/// Names A1..Am for a list of polynomials.
pub fn name_generators(prefix: &str, polys: &[Polynomial]) -> Vec<(String, Polynomial)> {
    polys.iter().enumerate().map(|(i, p)| (format!("{prefix}{}", i + 1), p.clone())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poisson::c2_casimirs;

    fn p(s: &str) -> Polynomial {
        Polynomial::parse(s, 6).unwrap()
    }

    fn q1() -> Vec<(String, Polynomial)> {
        let g = ["x1", "x2", "x1*x3 + x2*x4", "x2*x6 + x3^2", "x1*x6 - 2*x3*x4 - x2*x5", "x1*x5 - x4^2"];
        name_generators("A", &g.iter().map(|s| p(s)).collect::<Vec<_>>())
    }

    #[test]
    fn q1_table() {
        let g = LieAlgebraModel::c2();
        let t = close_algebra(&g, &q1(), 2).unwrap();
        assert!(t.is_closed());
        let a = Symbols::indexed("A", 6);
        let e = |s: &str| Polynomial::parse_with(s, &a).unwrap();
        assert_eq!(t.entry(1, 2), e("A1^2 + A2^2"));
        assert_eq!(t.entry(1, 3), e("2*A3"));
        assert_eq!(t.entry(1, 5), e("-2*A3"));
        assert_eq!(t.entry(2, 1), e("-A1^2 - A2^2"));
        assert_eq!(t.entry(2, 3).format_with(&t.symbols()), "-A1*A5 - 2*A2*A6");
    }

    #[test]
    fn casimirs_commute() {
        let g = LieAlgebraModel::c2();
        let t = close_algebra(&g, &name_generators("A", &c2_casimirs()), 2).unwrap();
        assert!(t.is_abelian() && t.is_closed());
    }

    #[test]
    fn remainders_are_reported() {
        let g = LieAlgebraModel::c2();
        let t = close_algebra(&g, &name_generators("A", &[p("x1"), p("x3")]), 2).unwrap();
        assert_eq!(t.remainders[&(0, 1)], p("-x2"));
        assert!(t.entry(0, 1).is_zero());
        let t = close_algebra(&g, &name_generators("A", &[p("x1"), p("x5")]), 1).unwrap();
        assert_eq!(t.remainders[&(0, 1)], p("2*x4"));
    }

    #[test]
    fn rejects_bad_generators() {
        let g = LieAlgebraModel::c2();
        assert!(close_algebra(&g, &name_generators("A", &[p("x1"), p("x1")]), 2).is_err());
        assert!(close_algebra(&g, &name_generators("A", &[p("0")]), 2).is_err());
    }
}
