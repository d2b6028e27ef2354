use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::linalg::{axpy, Echelon, ExactMatrix, SparseVec};
use crate::rational::{parse_rational, rat, Rational};

const C2_JSON: &str = include_str!("../data/c2.json");

/// Finite-dimensional Lie algebra given by structure constants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebraModel {
    names: Vec<String>,
    /// c[j][k] = [X_j, X_k] as a sparse vector over the basis.
    c: Vec<Vec<SparseVec<usize>>>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    /// Pairs (j, k), 1-based, where [X_j, X_k] != -[X_k, X_j] or [X_j, X_j] != 0.
    pub antisymmetry_failures: Vec<(usize, usize)>,
    /// Triples (i, j, k), 1-based, violating the Jacobi identity.
    pub jacobi_failures: Vec<(usize, usize, usize)>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.antisymmetry_failures.is_empty() && self.jacobi_failures.is_empty()
    }
}

#[derive(Serialize, Deserialize)]
struct BracketJson {
    i: usize,
    j: usize,
    terms: Vec<(usize, String)>,
}

#[derive(Serialize, Deserialize)]
struct AlgebraJson {
    dim: usize,
    names: Vec<String>,
    brackets: Vec<BracketJson>,
}

impl LieAlgebraModel {
    /// Builds the model from brackets of pairs (j, k), 0-based, completing
    /// antisymmetrically, without validation.
    pub fn from_pairs_unchecked(names: Vec<String>, pairs: &[((usize, usize), SparseVec<usize>)]) -> Result<Self> {
        let n = names.len();
        let mut c = vec![vec![SparseVec::new(); n]; n];
        for ((j, k), v) in pairs {
            if *j >= n || *k >= n || v.keys().any(|&l| l >= n) {
                return Err(Error::InvalidAlgebra(format!("bracket index out of range in ({}, {})", j + 1, k + 1)));
            }
            if j == k {
                if !v.is_empty() {
                    return Err(Error::InvalidAlgebra(format!("[X{0}, X{0}] must vanish", j + 1)));
                }
                continue;
            }
            if !c[*j][*k].is_empty() {
                return Err(Error::InvalidAlgebra(format!("bracket ({}, {}) given twice", j + 1, k + 1)));
            }
            let v: SparseVec<usize> = v.iter().filter(|(_, x)| !x.is_zero()).map(|(l, x)| (*l, x.clone())).collect();
            c[*k][*j] = v.iter().map(|(l, x)| (*l, -x)).collect();
            c[*j][*k] = v;
        }
        Ok(LieAlgebraModel { names, c })
    }

    /// Like `from_pairs_unchecked`, then rejects models failing Jacobi.
    pub fn from_pairs(names: Vec<String>, pairs: &[((usize, usize), SparseVec<usize>)]) -> Result<Self> {
        let m = Self::from_pairs_unchecked(names, pairs)?;
        let r = m.validate();
        if !r.is_valid() {
            return Err(Error::InvalidAlgebra(format!("Jacobi identity fails at {:?}", r.jacobi_failures)));
        }
        Ok(m)
    }

    pub fn abelian(n: usize) -> Self {
        let names = (1..=n).map(|i| format!("X{i}")).collect();
        LieAlgebraModel { names, c: vec![vec![SparseVec::new(); n]; n] }
    }

    /// Parses the structure-constant JSON format (1-based indices, i < j pairs).
    pub fn from_json(s: &str) -> Result<Self> {
        let m = Self::from_json_unchecked(s)?;
        let r = m.validate();
        if !r.is_valid() {
            return Err(Error::InvalidAlgebra(format!("Jacobi identity fails at {:?}", r.jacobi_failures)));
        }
        Ok(m)
    }

    /// Parses without checking the Jacobi identity.
    pub fn from_json_unchecked(s: &str) -> Result<Self> {
        let a: AlgebraJson = serde_json::from_str(s)?;
        if a.names.len() != a.dim {
            return Err(Error::DimensionMismatch { expected: a.dim, found: a.names.len() });
        }
        let mut pairs = Vec::new();
        for b in &a.brackets {
            if b.i == 0 || b.j == 0 || b.i > a.dim || b.j > a.dim {
                return Err(Error::InvalidAlgebra(format!("bracket ({}, {}) out of range", b.i, b.j)));
            }
            if b.i >= b.j {
                return Err(Error::InvalidAlgebra(format!("bracket ({}, {}) must list i < j", b.i, b.j)));
            }
            let mut v = SparseVec::new();
            for (l, c) in &b.terms {
                if *l == 0 || *l > a.dim {
                    return Err(Error::InvalidAlgebra(format!("term index {l} out of range")));
                }
                axpy(&mut v, &Rational::one(), &[(l - 1, parse_rational(c)?)].into_iter().collect());
            }
            pairs.push(((b.i - 1, b.j - 1), v));
        }
        Self::from_pairs_unchecked(a.names, &pairs)
    }

    pub fn to_json(&self) -> String {
        let mut brackets = Vec::new();
        for j in 0..self.dim() {
            for k in j + 1..self.dim() {
                if !self.c[j][k].is_empty() {
                    brackets.push(BracketJson {
                        i: j + 1,
                        j: k + 1,
                        terms: self.c[j][k].iter().map(|(l, x)| (l + 1, x.to_string())).collect(),
                    });
                }
            }
        }
        serde_json::to_string_pretty(&AlgebraJson { dim: self.dim(), names: self.names.clone(), brackets }).unwrap()
    }

    /// The conformal algebra c(2) in the basis X1..X6.
    pub fn c2() -> Self {
        Self::from_json(C2_JSON).expect("built-in c(2) model")
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// [X_j, X_k] (0-based).
    pub fn structure(&self, j: usize, k: usize) -> &SparseVec<usize> {
        &self.c[j][k]
    }

    pub fn is_abelian(&self) -> bool {
        self.c.iter().all(|r| r.iter().all(|v| v.is_empty()))
    }

    pub fn validate(&self) -> ValidationReport {
        let n = self.dim();
        let mut rep = ValidationReport::default();
        for j in 0..n {
            if !self.c[j][j].is_empty() {
                rep.antisymmetry_failures.push((j + 1, j + 1));
            }
            for k in j + 1..n {
                let mut s = self.c[j][k].clone();
                axpy(&mut s, &Rational::one(), &self.c[k][j]);
                if !s.is_empty() {
                    rep.antisymmetry_failures.push((j + 1, k + 1));
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let mut s = SparseVec::new();
                    for (a, b, c) in [(i, j, k), (j, k, i), (k, i, j)] {
                        // [X_a, [X_b, X_c]]
                        for (l, x) in &self.c[b][c] {
                            axpy(&mut s, x, &self.c[a][*l]);
                        }
                    }
                    if !s.is_empty() {
                        rep.jacobi_failures.push((i + 1, j + 1, k + 1));
                    }
                }
            }
        }
        rep
    }

    pub fn bracket_sparse(&self, u: &SparseVec<usize>, v: &SparseVec<usize>) -> SparseVec<usize> {
        let mut s = SparseVec::new();
        for (j, a) in u {
            for (k, b) in v {
                axpy(&mut s, &(a * b), &self.c[*j][*k]);
            }
        }
        s
    }

    /// Bilinear bracket of coordinate vectors.
    pub fn bracket(&self, u: &[Rational], v: &[Rational]) -> Result<Vec<Rational>> {
        check_dim(self.dim(), u.len())?;
        check_dim(self.dim(), v.len())?;
        Ok(crate::linalg::dense(&self.bracket_sparse(&sparse(u), &sparse(v)), self.dim()))
    }

    /// Matrix of ad(u) acting on coordinate columns.
    pub fn ad(&self, u: &[Rational]) -> ExactMatrix {
        let n = self.dim();
        let mut m = ExactMatrix::zeros(n, n);
        let us = sparse(u);
        for k in 0..n {
            let col = self.bracket_sparse(&us, &[(k, Rational::one())].into_iter().collect());
            for (l, x) in col {
                m.set(l, k, x);
            }
        }
        m
    }

    /// Killing form K(X_i, X_j) = tr(ad X_i ad X_j).
    pub fn killing_form(&self) -> ExactMatrix {
        let n = self.dim();
        let ads: Vec<ExactMatrix> = (0..n).map(|i| self.ad(&unit(n, i))).collect();
        let mut k = ExactMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let p = ads[i].mul(&ads[j]).unwrap();
                let tr = (0..n).fold(Rational::zero(), |s, d| s + p.get(d, d));
                k.set(i, j, tr);
            }
        }
        k
    }
}

pub fn unit(n: usize, i: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); n];
    v[i] = Rational::one();
    v
}

pub(crate) fn sparse(v: &[Rational]) -> SparseVec<usize> {
    v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect()
}

/// An ordered list of linear combinations of basis elements spanning a subalgebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubalgebraSpec {
    pub label: String,
    pub generators: Vec<Vec<Rational>>,
}

impl SubalgebraSpec {
    /// Checks linear independence and closure under the bracket.
    pub fn new(algebra: &LieAlgebraModel, label: &str, generators: Vec<Vec<Rational>>) -> Result<Self> {
        let n = algebra.dim();
        let mut span = Echelon::new();
        for g in &generators {
            check_dim(n, g.len())?;
            if !span.insert(&sparse(g), None) {
                return Err(Error::InvalidSubalgebra(format!("{label}: generators are linearly dependent")));
            }
        }
        for (a, g) in generators.iter().enumerate() {
            for (b, h) in generators.iter().enumerate().skip(a + 1) {
                let br = algebra.bracket_sparse(&sparse(g), &sparse(h));
                if !span.contains(&br) {
                    return Err(Error::InvalidSubalgebra(format!(
                        "{label}: bracket of generators {} and {} leaves the span",
                        a + 1,
                        b + 1
                    )));
                }
            }
        }
        Ok(SubalgebraSpec { label: label.to_string(), generators })
    }

    /// The whole algebra, spanned by its basis.
    pub fn full(algebra: &LieAlgebraModel, label: &str) -> Self {
        let n = algebra.dim();
        SubalgebraSpec { label: label.to_string(), generators: (0..n).map(|i| unit(n, i)).collect() }
    }

    pub fn dim(&self) -> usize {
        self.generators.len()
    }

    pub fn is_abelian(&self, algebra: &LieAlgebraModel) -> bool {
        self.generators.iter().enumerate().all(|(a, g)| {
            self.generators[a + 1..].iter().all(|h| algebra.bracket_sparse(&sparse(g), &sparse(h)).is_empty())
        })
    }

    /// Human-readable generator list, e.g. `X3 - X4, X1`.
    pub fn describe(&self, algebra: &LieAlgebraModel) -> String {
        let syms = crate::expr::Symbols::Named(algebra.names().to_vec());
        self.generators
            .iter()
            .map(|g| crate::polynomial::Polynomial::linear(g).format_with(&syms))
            .collect::<Vec<_>>()
            .join(", ")
    }
}

/// {X in g : [X, a] = 0}.
pub fn centralizer_in_g(algebra: &LieAlgebraModel, spec: &SubalgebraSpec) -> SubalgebraSpec {
    let n = algebra.dim();
    // Unknown X = sum_j t_j X_j; rows are (generator, component) pairs.
    let mut rows: BTreeMap<(usize, usize), SparseVec<usize>> = BTreeMap::new();
    for (a, g) in spec.generators.iter().enumerate() {
        let gs = sparse(g);
        for j in 0..n {
            let col = algebra.bracket_sparse(&[(j, Rational::one())].into_iter().collect(), &gs);
            for (l, x) in col {
                rows.entry((a, l)).or_default().insert(j, x);
            }
        }
    }
    let m = ExactMatrix::from_sparse_rows(n, rows.into_values().collect());
    SubalgebraSpec { label: format!("centralizer({})", spec.label), generators: m.kernel() }
}

/// New basis B_i = sum_j matrix[i][j] X_j.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisChange {
    matrix: ExactMatrix,
    inverse: ExactMatrix,
}

impl BasisChange {
    pub fn new(matrix: ExactMatrix) -> Result<Self> {
        let inverse = matrix.inverse()?;
        Ok(BasisChange { matrix, inverse })
    }

    pub fn matrix(&self) -> &ExactMatrix {
        &self.matrix
    }

    pub fn inverse(&self) -> BasisChange {
        BasisChange { matrix: self.inverse.clone(), inverse: self.matrix.clone() }
    }

    /// B1 = -2X3, B2 = -2X4, B3 = X2, B4 = X1, B5 = -X6, B6 = X5.
    pub fn c2_to_so31() -> Self {
        let mut m = ExactMatrix::zeros(6, 6);
        for (i, j, c) in [(0, 2, -2), (1, 3, -2), (2, 1, 1), (3, 0, 1), (4, 5, -1), (5, 4, 1)] {
            m.set(i, j, rat(c, 1));
        }
        Self::new(m).unwrap()
    }
}

/// Structure constants of `algebra` expressed in the basis given by `change`.
pub fn apply_basis_change(algebra: &LieAlgebraModel, change: &BasisChange) -> Result<LieAlgebraModel> {
    let n = algebra.dim();
    check_dim(n, change.matrix.rows())?;
    let rows: Vec<SparseVec<usize>> = (0..n).map(|i| change.matrix.row(i).clone()).collect();
    let inv_t = change.inverse.transpose();
    let mut pairs = Vec::new();
    for i in 0..n {
        for k in i + 1..n {
            let w = algebra.bracket_sparse(&rows[i], &rows[k]);
            // coordinates c with w = sum_m c_m B_m, i.e. c = M^{-T} w
            let c = inv_t.mul_vec(&crate::linalg::dense(&w, n))?;
            pairs.push(((i, k), sparse(&c)));
        }
    }
    let names = (1..=n).map(|i| format!("B{i}")).collect();
    LieAlgebraModel::from_pairs(names, &pairs)
}

fn spec_from(algebra: &LieAlgebraModel, label: &str, gens: &[&[(usize, i64, i64)]]) -> SubalgebraSpec {
    let n = algebra.dim();
    let generators = gens
        .iter()
        .map(|g| {
            let mut v = vec![Rational::zero(); n];
            for &(i, p, q) in g.iter() {
                v[i - 1] = rat(p, q);
            }
            v
        })
        .collect();
    SubalgebraSpec::new(algebra, label, generators).expect("catalog entry is a subalgebra")
}

pub const CATALOG_LABELS: &[&str] = &[
    "a1", "a2", "a3", "a4", "a5", "a6", "a_12", "a_34", "a_56", "a_14", "a_24", "a_45", "a_46", "a_123", "a_563",
    "a_145", "a_246", "a_124", "a_564", "a_su2", "n33", "borel",
];

/// Subalgebras of c(2) used by the reduction chains.
pub fn catalog() -> Vec<SubalgebraSpec> {
    let g = LieAlgebraModel::c2();
    let b = |i: usize| [(i, 1i64, 1i64)];
    let mut out = Vec::new();
    for i in 1..=6 {
        out.push(spec_from(&g, &format!("a{i}"), &[&b(i)]));
    }
    for (label, i, j) in
        [("a_12", 1, 2), ("a_34", 3, 4), ("a_56", 5, 6), ("a_14", 1, 4), ("a_24", 2, 4), ("a_45", 4, 5), ("a_46", 4, 6)]
    {
        out.push(spec_from(&g, label, &[&b(i), &b(j)]));
    }
    for (label, i, j, k) in [
        ("a_123", 1, 2, 3),
        ("a_563", 5, 6, 3),
        ("a_145", 1, 4, 5),
        ("a_246", 2, 4, 6),
        ("a_124", 1, 2, 4),
        ("a_564", 5, 6, 4),
    ] {
        out.push(spec_from(&g, label, &[&b(i), &b(j), &b(k)]));
    }
    out.push(spec_from(&g, "a_su2", &[&b(3), &[(6, 1, 2), (2, 1, 2)], &[(1, 1, 2), (5, 1, 2)]]));
    out.push(spec_from(&g, "n33", &[&[(3, 1, 1), (4, -1, 1)], &b(1), &b(2)]));
    out.push(spec_from(&g, "borel", &[&b(3), &b(4), &b(5), &b(6)]));
    out
}

pub fn catalog_entry(label: &str) -> Result<SubalgebraSpec> {
    catalog()
        .into_iter()
        .find(|s| s.label == label)
        .ok_or_else(|| Error::UnknownLabel { label: label.to_string(), valid: CATALOG_LABELS.join(", ") })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn x(i: usize) -> Vec<Rational> {
        unit(6, i - 1)
    }

    #[test]
    fn c2_is_valid() {
        assert!(LieAlgebraModel::c2().validate().is_valid());
        assert!(LieAlgebraModel::abelian(4).validate().is_valid());
    }

    #[test]
    fn flipped_sign_breaks_jacobi() {
        let g = LieAlgebraModel::c2();
        let mut pairs = Vec::new();
        for j in 0..6 {
            for k in j + 1..6 {
                let mut v = g.structure(j, k).clone();
                if (j, k) == (0, 2) {
                    v = v.into_iter().map(|(l, c)| (l, -c)).collect();
                }
                pairs.push(((j, k), v));
            }
        }
        let bad = LieAlgebraModel::from_pairs_unchecked(g.names().to_vec(), &pairs).unwrap();
        let rep = bad.validate();
        assert!(!rep.is_valid());
        assert!(rep.jacobi_failures.contains(&(1, 3, 5)));
        assert!(LieAlgebraModel::from_pairs(g.names().to_vec(), &pairs).is_err());
    }

    #[test]
    fn table_brackets() {
        let g = LieAlgebraModel::c2();
        assert_eq!(g.bracket(&x(1), &x(4)).unwrap(), x(1));
        assert!(g.bracket(&x(3), &x(4)).unwrap().iter().all(|c| c.is_zero()));
        let b = g.bracket(&x(1), &x(5)).unwrap();
        assert_eq!(b, x(4).iter().map(|c| c * int(2)).collect::<Vec<_>>());
        assert!(g.bracket(&x(1), &x(4)[..3]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let g = LieAlgebraModel::c2();
        assert_eq!(LieAlgebraModel::from_json(&g.to_json()).unwrap(), g);
        assert!(LieAlgebraModel::from_json("{\"dim\":2,\"names\":[\"a\"],\"brackets\":[]}").is_err());
    }

    #[test]
    fn centralizers() {
        let g = LieAlgebraModel::c2();
        let z = centralizer_in_g(&g, &catalog_entry("a_12").unwrap());
        assert_eq!(z.generators, vec![x(1), x(2)]);
        let z = centralizer_in_g(&g, &SubalgebraSpec::full(&g, "c2"));
        assert!(z.generators.is_empty());
        let z = centralizer_in_g(&g, &catalog_entry("a3").unwrap());
        assert_eq!(z.generators, vec![x(3), x(4)]);
    }

    #[test]
    fn so31_basis() {
        let g = LieAlgebraModel::c2();
        let ch = BasisChange::c2_to_so31();
        let h = apply_basis_change(&g, &ch).unwrap();
        assert!(h.validate().is_valid());
        assert!(h.structure(0, 1).is_empty());
        let back = apply_basis_change(&h, &ch.inverse()).unwrap();
        assert_eq!(back.c, g.c);
        let id = BasisChange::new(ExactMatrix::identity(6)).unwrap();
        assert_eq!(apply_basis_change(&g, &id).unwrap().c, g.c);
        assert!(BasisChange::new(ExactMatrix::zeros(6, 6)).is_err());
    }

    #[test]
    fn catalog_is_closed() {
        let cat = catalog();
        assert_eq!(cat.len(), CATALOG_LABELS.len());
        for (s, l) in cat.iter().zip(CATALOG_LABELS) {
            assert_eq!(&s.label, l);
        }
        assert!(catalog_entry("zzz").is_err());
        let g = LieAlgebraModel::c2();
        assert!(!catalog_entry("a_145").unwrap().is_abelian(&g));
        assert!(catalog_entry("a_34").unwrap().is_abelian(&g));
    }
}
