use std::cmp::Reverse;
use std::collections::{BTreeMap, HashMap};

use num_traits::One;

use crate::closure::generator_monomials;
use crate::commutant::{poly_vec, vec_poly, CommutantResult};
use crate::enveloping::{Enveloping, PbwElement};
use crate::error::{check_dim, Error, Result};
use crate::expr::Symbols;
use crate::lie::{LieAlgebraModel, SubalgebraSpec};
use crate::linalg::Echelon;
use crate::monomial::Monomial;
use crate::poisson::lie_poisson_bracket;
use crate::polynomial::Polynomial;
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuantumFailure {
    /// Index of the subalgebra generator.
    pub generator: usize,
    /// Index of the tested element.
    pub element: usize,
    pub commutator: PbwElement,
}

/// Checks [X, E] = 0 for every subalgebra generator X and element E.
pub fn verify_quantum_commutant(
    algebra: &LieAlgebraModel,
    spec: &SubalgebraSpec,
    elements: &[PbwElement],
) -> Result<Vec<QuantumFailure>> {
    let env = Enveloping::new(algebra);
    let n = algebra.dim();
    let mut out = Vec::new();
    for (gi, g) in spec.generators.iter().enumerate() {
        let x = PbwElement::from_normal_ordered(Polynomial::linear(g));
        for (ei, e) in elements.iter().enumerate() {
            check_dim(n, e.dim())?;
            let c = env.commutator(&x, e)?;
            if !c.is_zero() {
                out.push(QuantumFailure { generator: gi, element: ei, commutator: c });
            }
        }
    }
    Ok(out)
}

/// Symmetrizes every stratum of a classical commutant and checks the images commute with the subalgebra.
pub fn verify_symmetrized_commutant(
    algebra: &LieAlgebraModel,
    spec: &SubalgebraSpec,
    commutant: &CommutantResult,
) -> Result<BTreeMap<u32, Vec<QuantumFailure>>> {
    let env = Enveloping::new(algebra);
    let mut out = BTreeMap::new();
    for (h, ps) in &commutant.strata {
        let images: Vec<PbwElement> = ps.iter().map(|p| env.symmetrize(p)).collect();
        out.insert(*h, verify_quantum_commutant(algebra, spec, &images)?);
    }
    Ok(out)
}

/// Commutator table of quantum generators.
///
/// Entries are written in symmetrized generator monomials: the monomial
/// A1*A5 of an entry stands for the average of A1 A5 and A5 A1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuantumBracketTable {
    pub names: Vec<String>,
    pub generators: Vec<PbwElement>,
    pub expression_degree: u32,
    /// (i, j), i < j -> part of [A_i, A_j] of leading weight deg A_i + deg A_j - 1 or more.
    pub entries: BTreeMap<(usize, usize), Polynomial>,
    /// (i, j) -> lower-weight correction terms.
    pub lower_order_terms: BTreeMap<(usize, usize), Polynomial>,
    pub remainders: BTreeMap<(usize, usize), PbwElement>,
    pub commutators: BTreeMap<(usize, usize), PbwElement>,
}

impl QuantumBracketTable {
    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn symbols(&self) -> Symbols {
        Symbols::Named(self.names.clone())
    }

    pub fn is_closed(&self) -> bool {
        self.remainders.is_empty()
    }

    pub fn is_abelian(&self) -> bool {
        self.commutators.values().all(|c| c.is_zero())
    }

    /// Full expression (entry plus lower-order terms) for any ordered pair.
    pub fn full_entry(&self, i: usize, j: usize) -> Polynomial {
        let m = self.len();
        if i == j {
            return Polynomial::zero(m);
        }
        let (a, b, s) = if i < j { (i, j, 1) } else { (j, i, -1) };
        (&self.entries[&(a, b)] + &self.lower_order_terms[&(a, b)]).scale(&Rational::from_integer(s.into()))
    }

    pub fn weight(&self, m: &Monomial) -> u32 {
        m.exponents().iter().zip(&self.generators).map(|(e, g)| e * g.degree().unwrap_or(0)).sum()
    }

    /// Re-expands an expression in symmetrized generator monomials.
    pub fn expand(&self, algebra: &LieAlgebraModel, expr: &Polynomial) -> PbwElement {
        let env = Enveloping::new(algebra);
        let mut cache = HashMap::new();
        let mut out = PbwElement::zero(algebra.dim());
        for (m, c) in expr.terms() {
            out = out.add(&sym_generator_monomial(&env, &self.generators, m, &mut cache).scale(c));
        }
        out
    }

    pub fn verify(&self, algebra: &LieAlgebraModel) -> Result<()> {
        for ((i, j), c) in &self.commutators {
            let mut e = self.expand(algebra, &self.full_entry(*i, *j));
            if let Some(r) = self.remainders.get(&(*i, *j)) {
                e = e.add(r);
            }
            if &e != c {
                return Err(Error::Inconsistent(format!(
                    "quantum entry ({}, {}) does not re-expand to the commutator",
                    self.names[*i], self.names[*j]
                )));
            }
        }
        Ok(())
    }

    /// Pairs whose leading-weight entry, read commutatively on the generator
    /// symbols, differs from the Lie-Poisson bracket of the symbols.
    pub fn classical_limit_failures(&self, algebra: &LieAlgebraModel) -> Result<Vec<(usize, usize)>> {
        let symbols: Vec<Polynomial> = self.generators.iter().map(|g| g.symbol()).collect();
        let mut bad = Vec::new();
        for ((i, j), e) in &self.entries {
            let lead = self.weight_part(e, self.leading_weight(*i, *j));
            let expanded = if symbols.is_empty() { lead.clone() } else { lead.substitute(&symbols)? };
            let b = lie_poisson_bracket(algebra, &symbols[*i], &symbols[*j])?;
            let top = match b.degree() {
                Some(d) if d == self.leading_weight(*i, *j) => b,
                _ => Polynomial::zero(algebra.dim()),
            };
            if expanded != top {
                bad.push((*i, *j));
            }
        }
        Ok(bad)
    }

    pub fn leading_weight(&self, i: usize, j: usize) -> u32 {
        (self.generators[i].degree().unwrap_or(0) + self.generators[j].degree().unwrap_or(0)).saturating_sub(1)
    }

    fn weight_part(&self, e: &Polynomial, w: u32) -> Polynomial {
        Polynomial::from_terms(
            e.dim(),
            e.terms().filter(|(m, _)| self.weight(m) == w).map(|(m, c)| (m.clone(), c.clone())),
        )
    }

    /// Text form of an expression: symmetrized products print as `{A1,A5}`.
    pub fn format_expr(&self, e: &Polynomial) -> String {
        format_symmetrized(e, &self.symbols())
    }
}

/// Formats a polynomial whose monomials denote symmetrized products.
pub fn format_symmetrized(e: &Polynomial, syms: &Symbols) -> String {
    use num_traits::Signed;
    if e.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, (m, c)) in e.terms().rev().enumerate() {
        let neg = c.is_negative();
        let a = c.abs();
        if k == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let letters = m.letters();
        let distinct = m.exponents().iter().filter(|&&x| x > 0).count();
        let body = if letters.is_empty() {
            None
        } else if distinct == 1 {
            let e = letters.len();
            Some(if e == 1 { syms.name(letters[0]) } else { format!("{}^{}", syms.name(letters[0]), e) })
        } else {
            Some(format!("{{{}}}", letters.iter().map(|&l| syms.name(l)).collect::<Vec<_>>().join(",")))
        };
        match body {
            None => out.push_str(&a.to_string()),
            Some(b) => {
                if !a.is_one() {
                    out.push_str(&a.to_string());
                    out.push('*');
                }
                out.push_str(&b);
            }
        }
    }
    out
}

/// Sym(A^e) = sum_l (e_l/|e|) Sym(A^(e - e_l)) A_l.
fn sym_generator_monomial(
    env: &Enveloping,
    gens: &[PbwElement],
    m: &Monomial,
    cache: &mut HashMap<Monomial, PbwElement>,
) -> PbwElement {
    let n = env.dim();
    let d = m.degree();
    if d == 0 {
        return PbwElement::one(n);
    }
    if let Some(r) = cache.get(m) {
        return r.clone();
    }
    let mut out = PbwElement::zero(n);
    for (l, &e) in m.exponents().iter().enumerate() {
        if e == 0 {
            continue;
        }
        let rest = sym_generator_monomial(env, gens, &m.with_delta(l, -1).unwrap(), cache);
        let prod = env.multiply(&rest, &gens[l]).expect("same algebra");
        out = out.add(&prod.scale(&Rational::new(e.into(), d.into())));
    }
    cache.insert(m.clone(), out.clone());
    out
}

/// Closes the associative algebra generated by quantum generators under commutators.
pub fn close_quantum_algebra(
    algebra: &LieAlgebraModel,
    generators: &[(String, PbwElement)],
    expression_degree: u32,
) -> Result<QuantumBracketTable> {
    if expression_degree == 0 {
        return Err(Error::InvalidDegree("expression_degree must be at least 1".into()));
    }
    let n = algebra.dim();
    for (i, (name, g)) in generators.iter().enumerate() {
        check_dim(n, g.dim())?;
        if g.is_zero() {
            return Err(Error::InvalidSubalgebra(format!("generator {name} is zero")));
        }
        if generators[..i].iter().any(|(_, h)| h == g) {
            return Err(Error::InvalidSubalgebra(format!("generator {name} is repeated")));
        }
    }
    let env = Enveloping::new(algebra);
    let m = generators.len();
    let names: Vec<String> = generators.iter().map(|(s, _)| s.clone()).collect();
    let gens: Vec<PbwElement> = generators.iter().map(|(_, g)| g.clone()).collect();
    let basis = generator_monomials(m, expression_degree);
    let mut cache = HashMap::new();
    let mut span: Echelon<Reverse<Monomial>> = Echelon::new();
    for (t, mono) in basis.iter().enumerate() {
        let e = sym_generator_monomial(&env, &gens, mono, &mut cache);
        span.insert(&poly_vec(e.coefficients()), Some(t));
    }
    let mut table = QuantumBracketTable {
        names,
        generators: gens.clone(),
        expression_degree,
        entries: BTreeMap::new(),
        lower_order_terms: BTreeMap::new(),
        remainders: BTreeMap::new(),
        commutators: BTreeMap::new(),
    };
    for i in 0..m {
        for j in i + 1..m {
            let c = env.commutator(&gens[i], &gens[j])?;
            let (res, combo) = span.reduce(&poly_vec(c.coefficients()));
            let w = table.leading_weight(i, j);
            let mut main = Polynomial::zero(m);
            let mut lower = Polynomial::zero(m);
            for (t, coef) in &combo {
                let mono = basis[*t].clone();
                if table.weight(&mono) >= w {
                    main.add_term(mono, coef.clone());
                } else {
                    lower.add_term(mono, coef.clone());
                }
            }
            if !res.is_empty() {
                table.remainders.insert((i, j), PbwElement::from_normal_ordered(vec_poly(n, &res)));
            }
            table.entries.insert((i, j), main);
            table.lower_order_terms.insert((i, j), lower);
            table.commutators.insert((i, j), c);
        }
    }
    table.verify(algebra)?;
    Ok(table)
}

/// Quantum generators obtained by symmetrizing classical ones.
pub fn symmetrize_generators(
    algebra: &LieAlgebraModel,
    generators: &[(String, Polynomial)],
) -> Vec<(String, PbwElement)> {
    let env = Enveloping::new(algebra);
    generators.iter().map(|(s, p)| (s.clone(), env.symmetrize(p))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::catalog_entry;

    fn p(s: &str) -> Polynomial {
        Polynomial::parse(s, 6).unwrap()
    }

    fn q1() -> Vec<(String, Polynomial)> {
        ["x1", "x2", "x1*x3 + x2*x4", "x2*x6 + x3^2", "x1*x6 - 2*x3*x4 - x2*x5", "x1*x5 - x4^2"]
            .iter()
            .enumerate()
            .map(|(i, s)| (format!("A{}", i + 1), p(s)))
            .collect()
    }

    #[test]
    fn q1_quantum_table() {
        let g = LieAlgebraModel::c2();
        let t = close_quantum_algebra(&g, &symmetrize_generators(&g, &q1()), 2).unwrap();
        assert!(t.is_closed());
        let syms = Symbols::indexed("A", 6);
        let e = |s: &str| Polynomial::parse_with(s, &syms).unwrap();
        assert_eq!(t.full_entry(1, 2), e("A1^2 + A2^2"));
        assert_eq!(t.full_entry(1, 3), e("2*A3"));
        assert_eq!(t.full_entry(1, 5), e("-2*A3"));
        assert!(t.classical_limit_failures(&g).unwrap().is_empty());
    }

    #[test]
    fn commutant_checks() {
        let g = LieAlgebraModel::c2();
        let a1 = catalog_entry("a1").unwrap();
        let images: Vec<PbwElement> = symmetrize_generators(&g, &q1()).into_iter().map(|(_, e)| e).collect();
        assert!(verify_quantum_commutant(&g, &a1, &images).unwrap().is_empty());
        let x3 = PbwElement::generator(6, 2);
        let f = verify_quantum_commutant(&g, &a1, &[x3]).unwrap();
        assert_eq!(f.len(), 1);
        assert_eq!(f[0].commutator.to_string(), "-X2");
    }

    #[test]
    fn abelian_input_gives_zero_table() {
        let g = LieAlgebraModel::c2();
        let gens =
            vec![("A1".to_string(), PbwElement::generator(6, 0)), ("A2".to_string(), PbwElement::generator(6, 1))];
        let t = close_quantum_algebra(&g, &gens, 2).unwrap();
        assert!(t.is_abelian());
        assert!(close_quantum_algebra(&g, &[], 2).unwrap().entries.is_empty());
    }

    #[test]
    fn symmetrized_format_round_trips() {
        let syms = Symbols::indexed("A", 3);
        let e = Polynomial::parse_with("2*A1*A2 - A3^2 + A1*A1*A3 + 1", &syms).unwrap();
        assert_eq!(format_symmetrized(&e, &syms), "{A1,A1,A3} + 2*{A1,A2} - A3^2 + 1");
    }
}
