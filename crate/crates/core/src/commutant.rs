use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::lie::{LieAlgebraModel, SubalgebraSpec};
use crate::linalg::{Echelon, ExactMatrix, SparseVec};
use crate::monomial::{monomials_of_degree, Monomial};
use crate::poisson::{generator_poly, lie_poisson_bracket};
use crate::polynomial::Polynomial;
use crate::rational::Rational;

/// Degree-stratified polynomial commutant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommutantResult {
    pub subalgebra: String,
    pub max_degree: u32,
    /// Degree h -> basis of new solutions modulo products of lower strata.
    pub strata: BTreeMap<u32, Vec<Polynomial>>,
    /// Degree h -> dimension of the full homogeneous solution space.
    pub kernel_dims: BTreeMap<u32, usize>,
    /// Canonical basis of the span of products of lower strata, all degrees.
    pub discarded_products: Vec<Polynomial>,
}

impl CommutantResult {
    pub fn all(&self) -> Vec<Polynomial> {
        self.strata.values().flatten().cloned().collect()
    }

    pub fn stratum(&self, h: u32) -> &[Polynomial] {
        self.strata.get(&h).map(|v| v.as_slice()).unwrap_or(&[])
    }

    /// Whether `p` (homogeneous) lies in the commutant space of its degree,
    /// i.e. in the span of the stratum plus products.
    pub fn contains(&self, p: &Polynomial) -> bool {
        let d = match p.degree() {
            None => return true,
            Some(d) => d,
        };
        if !p.is_homogeneous() || d > self.max_degree {
            return false;
        }
        let mut e: Echelon<std::cmp::Reverse<Monomial>> = Echelon::new();
        for q in self.stratum(d).iter().chain(self.discarded_products.iter().filter(|q| q.degree() == Some(d))) {
            e.insert(&poly_vec(q), None);
        }
        e.contains(&poly_vec(p))
    }
}

pub(crate) fn poly_vec(p: &Polynomial) -> SparseVec<std::cmp::Reverse<Monomial>> {
    p.terms().map(|(m, c)| (std::cmp::Reverse(m.clone()), c.clone())).collect()
}

pub(crate) fn vec_poly(n: usize, v: &SparseVec<std::cmp::Reverse<Monomial>>) -> Polynomial {
    Polynomial::from_terms(n, v.iter().map(|(m, c)| (m.0.clone(), c.clone())))
}

/// Polynomial commutant of a subalgebra up to `max_degree`.
pub fn solve_commutant(algebra: &LieAlgebraModel, spec: &SubalgebraSpec, max_degree: u32) -> Result<CommutantResult> {
    let constraints: Vec<Polynomial> = spec.generators.iter().map(|g| generator_poly(g)).collect();
    solve_commutant_of(algebra, &spec.label, &constraints, max_degree)
}

/// Polynomials Poisson-commuting with every element of `constraints`, stratified by degree.
pub fn solve_commutant_of(
    algebra: &LieAlgebraModel,
    label: &str,
    constraints: &[Polynomial],
    max_degree: u32,
) -> Result<CommutantResult> {
    if max_degree == 0 {
        return Err(Error::InvalidDegree("max_degree must be at least 1".into()));
    }
    let n = algebra.dim();
    let mut strata: BTreeMap<u32, Vec<Polynomial>> = BTreeMap::new();
    let mut kernel_dims = BTreeMap::new();
    let mut discarded = Vec::new();
    for h in 1..=max_degree {
        let kernel = homogeneous_solutions(algebra, constraints, h)?;
        kernel_dims.insert(h, kernel.len());
        let lower: Vec<(u32, &Polynomial)> =
            strata.iter().flat_map(|(d, ps)| ps.iter().map(move |p| (*d, p))).collect();
        let mut prods = Echelon::new();
        for q in products_of_degree(n, &lower, h) {
            prods.insert(&poly_vec(&q), None);
        }
        let mut fresh = Echelon::new();
        for k in &kernel {
            let (res, _) = prods.reduce(&poly_vec(k));
            fresh.insert(&res, None);
        }
        discarded.extend(prods.rows().map(|v| vec_poly(n, v)));
        let reps: Vec<Polynomial> = fresh.rows().map(|v| vec_poly(n, v)).collect();
        if !reps.is_empty() {
            strata.insert(h, reps);
        }
    }
    Ok(CommutantResult {
        subalgebra: label.to_string(),
        max_degree,
        strata,
        kernel_dims,
        discarded_products: discarded,
    })
}

/// Reduced echelon basis of homogeneous degree-h polynomials commuting with all constraints.
pub fn homogeneous_solutions(algebra: &LieAlgebraModel, constraints: &[Polynomial], h: u32) -> Result<Vec<Polynomial>> {
    let n = algebra.dim();
    let monos = monomials_of_degree(n, h);
    let mut rows: BTreeMap<(usize, Monomial), SparseVec<usize>> = BTreeMap::new();
    for (col, m) in monos.iter().enumerate() {
        let mp = Polynomial::term(Rational::from_integer(1.into()), m.clone());
        for (ci, f) in constraints.iter().enumerate() {
            let b = lie_poisson_bracket(algebra, &mp, f)?;
            for (t, c) in b.terms() {
                rows.entry((ci, t.clone())).or_default().insert(col, c.clone());
            }
        }
    }
    let mat = ExactMatrix::from_sparse_rows(monos.len(), rows.into_values().collect());
    Ok(mat
        .kernel()
        .into_iter()
        .map(|v| Polynomial::from_terms(n, v.into_iter().zip(monos.iter().cloned()).map(|(c, m)| (m, c))))
        .collect())
}

/// All products of at least two elements (with repetition) of total degree h.
fn products_of_degree(n: usize, lower: &[(u32, &Polynomial)], h: u32) -> Vec<Polynomial> {
    let mut out = Vec::new();
    fn rec(
        lower: &[(u32, &Polynomial)],
        start: usize,
        deg: u32,
        count: usize,
        cur: Polynomial,
        h: u32,
        out: &mut Vec<Polynomial>,
    ) {
        if deg == h {
            if count >= 2 {
                out.push(cur);
            }
            return;
        }
        for i in start..lower.len() {
            let (d, p) = lower[i];
            if deg + d <= h {
                rec(lower, i, deg + d, count + 1, &cur * p, h, out);
            }
        }
    }
    rec(lower, 0, 0, 0, Polynomial::one(n), h, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::catalog_entry;
    use crate::poisson::c2_casimirs;

    fn p(s: &str) -> Polynomial {
        Polynomial::parse(s, 6).unwrap()
    }

    fn span_eq(a: &[Polynomial], b: &[Polynomial]) -> bool {
        let mut ea = Echelon::new();
        for q in a {
            ea.insert(&poly_vec(q), None);
        }
        let mut eb = ea.clone();
        let grew = b.iter().any(|q| eb.insert(&poly_vec(q), None));
        !grew && a.len() == b.len() && ea.rank() == b.len()
    }

    #[test]
    fn full_algebra_gives_casimirs() {
        let g = LieAlgebraModel::c2();
        let r = solve_commutant(&g, &SubalgebraSpec::full(&g, "c2"), 2).unwrap();
        assert!(r.stratum(1).is_empty());
        assert!(span_eq(r.stratum(2), &c2_casimirs()));
    }

    #[test]
    fn a1_low_strata() {
        let g = LieAlgebraModel::c2();
        let r = solve_commutant(&g, &catalog_entry("a1").unwrap(), 2).unwrap();
        assert_eq!(r.stratum(1), &[p("x1"), p("x2")]);
        assert_eq!(r.stratum(2).len(), 4);
        assert_eq!(r.kernel_dims[&2], 7);
        for q in ["x1*x3 + x2*x4", "x2*x6 + x3^2", "x1*x6 - 2*x3*x4 - x2*x5", "x4^2 - x1*x5"] {
            assert!(r.contains(&p(q)), "{q}");
        }
        assert!(!r.contains(&p("x3^2")));
    }

    #[test]
    fn borel_has_only_two_quadratics() {
        let g = LieAlgebraModel::c2();
        let r = solve_commutant(&g, &catalog_entry("borel").unwrap(), 3).unwrap();
        assert!(span_eq(r.stratum(2), &[p("-x6*x1 + x2*x5 + 2*x3*x4"), c2_casimirs()[0].clone()]));
        assert!(r.stratum(1).is_empty() && r.stratum(3).is_empty());
    }

    #[test]
    fn rejects_degree_zero() {
        let g = LieAlgebraModel::c2();
        assert!(solve_commutant(&g, &catalog_entry("a1").unwrap(), 0).is_err());
    }
}
