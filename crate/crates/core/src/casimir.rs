use std::collections::BTreeMap;

use num_traits::One;

use crate::closure::BracketTable;
use crate::error::{Error, Result};
use crate::lie::LieAlgebraModel;
use crate::linalg::{ExactMatrix, SparseVec};
use crate::monomial::{monomials_of_degree, Monomial};
use crate::poisson::{functional_independence, lie_poisson_bracket};
use crate::polynomial::Polynomial;
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CasimirSet {
    pub degree: u32,
    /// Basis of Casimirs, polynomials in the generator symbols.
    pub casimirs: Vec<Polynomial>,
    /// Generic Jacobian rank in the generator symbols.
    pub independent_count: usize,
    /// Generic Jacobian rank after substituting the generators (x-coordinates).
    pub realized_rank: usize,
}

/// {K, A_j} computed formally from the table: sum_i dK/dA_i {A_i, A_j}.
pub fn formal_bracket(table: &BracketTable, k: &Polynomial, j: usize) -> Polynomial {
    let m = table.len();
    let mut out = Polynomial::zero(m);
    for i in 0..m {
        if i == j {
            continue;
        }
        let d = k.derivative(i);
        if d.is_zero() {
            continue;
        }
        out.add_scaled(&(&d * &table.entry(i, j)), &Rational::one());
    }
    out
}

/// Casimirs of a closed bracket table up to generator-degree `degree`.
pub fn find_casimirs(algebra: &LieAlgebraModel, table: &BracketTable, degree: u32, seed: u64) -> Result<CasimirSet> {
    if !table.is_closed() {
        return Err(Error::NotClosed(table.remainders.len()));
    }
    if degree == 0 {
        return Err(Error::InvalidDegree("Casimir degree must be at least 1".into()));
    }
    let m = table.len();
    // Columns in descending order so each basis element leads with its largest monomial.
    let mut cols: Vec<Monomial> = (1..=degree).flat_map(|d| monomials_of_degree(m, d)).collect();
    cols.sort_by(|a, b| b.cmp(a));
    let mut rows: BTreeMap<(usize, Monomial), SparseVec<usize>> = BTreeMap::new();
    for (c, mono) in cols.iter().enumerate() {
        let k = Polynomial::term(Rational::one(), mono.clone());
        for j in 0..m {
            for (t, v) in formal_bracket(table, &k, j).terms() {
                rows.entry((j, t.clone())).or_default().insert(c, v.clone());
            }
        }
    }
    let mat = ExactMatrix::from_sparse_rows(cols.len(), rows.into_values().collect());
    let mut casimirs: Vec<Polynomial> = mat
        .kernel()
        .into_iter()
        .map(|v| Polynomial::from_terms(m, v.into_iter().zip(cols.iter().cloned()).map(|(c, mo)| (mo, c))))
        .collect();
    casimirs.sort_by(|a, b| a.leading_term().map(|t| t.0).cmp(&b.leading_term().map(|t| t.0)));
    for k in &casimirs {
        let kx = table.expand(k);
        for (j, g) in table.generators.iter().enumerate() {
            if !lie_poisson_bracket(algebra, &kx, g)?.is_zero() {
                return Err(Error::Inconsistent(format!(
                    "formal Casimir {} fails to commute with {} in x-coordinates",
                    k.format_with(&table.symbols()),
                    table.names[j]
                )));
            }
        }
    }
    let (independent_count, realized_rank) = if casimirs.is_empty() {
        (0, 0)
    } else {
        let expanded: Vec<Polynomial> = casimirs.iter().map(|k| table.expand(k)).collect();
        (functional_independence(&casimirs, seed)?, functional_independence(&expanded, seed)?)
    };
    Ok(CasimirSet { degree, casimirs, independent_count, realized_rank })
}

/// Whether a formal expression in the generators is a Casimir of the table.
pub fn is_formal_casimir(table: &BracketTable, k: &Polynomial) -> bool {
    (0..table.len()).all(|j| formal_bracket(table, k, j).is_zero())
}

/// Whether the x-expansion of `k` Poisson-commutes with every generator.
pub fn is_realized_casimir(algebra: &LieAlgebraModel, table: &BracketTable, k: &Polynomial) -> Result<bool> {
    let kx = table.expand(k);
    for g in &table.generators {
        if !lie_poisson_bracket(algebra, &kx, g)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closure::{close_algebra, name_generators};
    use crate::expr::Symbols;
    use crate::random::DEFAULT_SEED;

    fn p(s: &str) -> Polynomial {
        Polynomial::parse(s, 6).unwrap()
    }

    #[test]
    fn q1_casimirs() {
        let g = LieAlgebraModel::c2();
        let gens = ["x1", "x2", "x1*x3 + x2*x4", "x2*x6 + x3^2", "x1*x6 - 2*x3*x4 - x2*x5", "x1*x5 - x4^2"];
        let t = close_algebra(&g, &name_generators("A", &gens.map(p)), 2).unwrap();
        let c = find_casimirs(&g, &t, 3, DEFAULT_SEED).unwrap();
        let a = Symbols::indexed("A", 6);
        for k in ["A1", "A5", "A4 + A6", "(A1^2 + A2^2)*A6 + A1*A2*A5 + A3^2"] {
            let k = Polynomial::parse_with(k, &a).unwrap();
            assert!(is_formal_casimir(&t, &k));
        }
        assert_eq!(c.independent_count, 4);
        assert_eq!(c.realized_rank, 3);
    }

    #[test]
    fn abelian_generators_are_casimirs() {
        let g = LieAlgebraModel::c2();
        let t = close_algebra(&g, &name_generators("A", &[p("x1"), p("x2")]), 2).unwrap();
        let c = find_casimirs(&g, &t, 1, DEFAULT_SEED).unwrap();
        assert_eq!(c.casimirs.len(), 2);
    }

    #[test]
    fn rejects_open_tables() {
        let g = LieAlgebraModel::c2();
        let t = close_algebra(&g, &name_generators("A", &[p("x1"), p("x3")]), 2).unwrap();
        assert!(find_casimirs(&g, &t, 2, DEFAULT_SEED).is_err());
    }
}
