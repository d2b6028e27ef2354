use crate::error::{check_dim, Error, Result};
use crate::lie::{LieAlgebraModel, SubalgebraSpec};
use crate::linalg::ExactMatrix;
use crate::monomial::Monomial;
use crate::polynomial::Polynomial;
use crate::random::{odd_point, rng};
use crate::rational::Rational;

/// {p, q}(x) = sum C_jk^l x_l dp/dx_j dq/dx_k.
pub fn lie_poisson_bracket(algebra: &LieAlgebraModel, p: &Polynomial, q: &Polynomial) -> Result<Polynomial> {
    let n = algebra.dim();
    check_dim(n, p.dim())?;
    check_dim(n, q.dim())?;
    let dp: Vec<Polynomial> = (0..n).map(|j| p.derivative(j)).collect();
    let dq: Vec<Polynomial> = (0..n).map(|k| q.derivative(k)).collect();
    let mut out = Polynomial::zero(n);
    for j in 0..n {
        if dp[j].is_zero() {
            continue;
        }
        for k in 0..n {
            let c = algebra.structure(j, k);
            if c.is_empty() || dq[k].is_zero() {
                continue;
            }
            let lin = Polynomial::from_terms(n, c.iter().map(|(l, x)| (Monomial::var(n, *l), x.clone())));
            out.add_scaled(&(&(&lin * &dp[j]) * &dq[k]), &Rational::from_integer(1.into()));
        }
    }
    Ok(out)
}

/// Generator of a subalgebra as a linear polynomial in the dual coordinates.
pub fn generator_poly(v: &[Rational]) -> Polynomial {
    Polynomial::linear(v)
}

pub fn jacobian_at(polys: &[Polynomial], point: &[Rational]) -> ExactMatrix {
    let n = point.len();
    let rows = polys.iter().map(|p| (0..n).map(|j| p.derivative(j).eval(point)).collect()).collect::<Vec<_>>();
    if rows.is_empty() {
        return ExactMatrix::zeros(0, n);
    }
    ExactMatrix::from_rows(rows)
}

/// Generic rank of a point-dependent matrix: the largest rank seen, once it
/// has been observed at two independent random points.
pub fn generic_rank(n: usize, seed: u64, mut rank_at: impl FnMut(&[Rational]) -> usize) -> usize {
    let mut r = rng(seed);
    let mut best = 0;
    let mut hits = 0;
    for _ in 0..12 {
        let pt = odd_point(&mut r, n);
        let k = rank_at(&pt);
        if k > best {
            best = k;
            hits = 1;
        } else if k == best {
            hits += 1;
        }
        if hits >= 2 {
            break;
        }
    }
    best
}

/// Number of functionally independent polynomials (generic Jacobian rank).
pub fn functional_independence(polys: &[Polynomial], seed: u64) -> Result<usize> {
    let n = match polys.first() {
        Some(p) => p.dim(),
        None => return Err(Error::InvalidDegree("empty polynomial list".into())),
    };
    for p in polys {
        check_dim(n, p.dim())?;
    }
    Ok(generic_rank(n, seed, |pt| jacobian_at(polys, pt).rank()))
}

/// Matrix A_{a,k} = {a, x_k} whose generic rank r gives N = n - r.
pub fn coefficient_matrix(algebra: &LieAlgebraModel, spec: &SubalgebraSpec) -> Vec<Vec<Polynomial>> {
    let n = algebra.dim();
    spec.generators
        .iter()
        .map(|g| {
            (0..n).map(|k| lie_poisson_bracket(algebra, &generator_poly(g), &Polynomial::var(n, k)).unwrap()).collect()
        })
        .collect()
}

/// Maximal number of functionally independent commutant elements, n - rank A.
pub fn independence_bound(algebra: &LieAlgebraModel, spec: &SubalgebraSpec, seed: u64) -> usize {
    let a = coefficient_matrix(algebra, spec);
    let n = algebra.dim();
    let r = generic_rank(n, seed, |pt| {
        if a.is_empty() {
            return 0;
        }
        ExactMatrix::from_rows(a.iter().map(|row| row.iter().map(|p| p.eval(pt)).collect()).collect()).rank()
    });
    n - r
}

/// Algebraic Hamiltonian assembled from subalgebra coordinates and Casimirs.
#[derive(Clone, Debug, Default)]
pub struct HamiltonianSpec {
    pub subalgebra: String,
    /// ((a, b), alpha): alpha * y_a * y_b, with y_a the dual coordinate of generator a (0-based).
    pub quadratic: Vec<((usize, usize), Rational)>,
    /// (a, beta): beta * y_a.
    pub linear: Vec<(usize, Rational)>,
    /// Coefficients of the algebra's quadratic Casimirs.
    pub casimir: Vec<Rational>,
}

pub fn build_hamiltonian(
    algebra: &LieAlgebraModel,
    sub: &SubalgebraSpec,
    casimirs: &[Polynomial],
    spec: &HamiltonianSpec,
) -> Result<Polynomial> {
    let n = algebra.dim();
    let s = sub.dim();
    let y: Vec<Polynomial> = sub.generators.iter().map(|g| generator_poly(g)).collect();
    let out_of_range = |i: usize| Error::IndexOutOfRange { index: i + 1, max: s };
    let mut h = Polynomial::zero(n);
    for ((a, b), c) in &spec.quadratic {
        let ya = y.get(*a).ok_or_else(|| out_of_range(*a))?;
        let yb = y.get(*b).ok_or_else(|| out_of_range(*b))?;
        h.add_scaled(&(ya * yb), c);
    }
    for (a, c) in &spec.linear {
        h.add_scaled(y.get(*a).ok_or_else(|| out_of_range(*a))?, c);
    }
    if spec.casimir.len() > casimirs.len() {
        return Err(Error::IndexOutOfRange { index: spec.casimir.len(), max: casimirs.len() });
    }
    for (c, k) in spec.casimir.iter().zip(casimirs) {
        h.add_scaled(k, c);
    }
    Ok(h)
}

/// Elements of `others` that fail to Poisson-commute with `h`.
pub fn non_commuting(algebra: &LieAlgebraModel, h: &Polynomial, others: &[Polynomial]) -> Result<Vec<usize>> {
    let mut bad = Vec::new();
    for (i, p) in others.iter().enumerate() {
        if !lie_poisson_bracket(algebra, h, p)?.is_zero() {
            bad.push(i);
        }
    }
    Ok(bad)
}

/// The quadratic Casimirs of c(2).
pub fn c2_casimirs() -> [Polynomial; 2] {
    [
        Polynomial::parse("x3^2 - x4^2 + x1*x5 + x2*x6", 6).unwrap(),
        Polynomial::parse("2*x3*x4 + x2*x5 - x1*x6", 6).unwrap(),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::catalog_entry;
    use crate::random::DEFAULT_SEED;
    use crate::rational::int;

    fn p(s: &str) -> Polynomial {
        Polynomial::parse(s, 6).unwrap()
    }

    #[test]
    fn coordinate_brackets() {
        let g = LieAlgebraModel::c2();
        assert_eq!(lie_poisson_bracket(&g, &p("x1"), &p("x3")).unwrap(), p("-x2"));
        assert_eq!(lie_poisson_bracket(&g, &p("x1"), &p("x5")).unwrap(), p("2*x4"));
        let q = p("x1*x3 + x5^2");
        assert!(lie_poisson_bracket(&g, &q, &q).unwrap().is_zero());
        assert!(lie_poisson_bracket(&g, &p("x1"), &Polynomial::var(3, 0)).is_err());
    }

    #[test]
    fn casimirs_are_central() {
        let g = LieAlgebraModel::c2();
        for c in c2_casimirs() {
            for j in 0..6 {
                assert!(lie_poisson_bracket(&g, &c, &Polynomial::var(6, j)).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn independence() {
        assert_eq!(functional_independence(&c2_casimirs(), DEFAULT_SEED).unwrap(), 2);
        assert_eq!(functional_independence(&[p("x1"), p("x1^2")], DEFAULT_SEED).unwrap(), 1);
        let g = LieAlgebraModel::c2();
        assert_eq!(independence_bound(&g, &catalog_entry("a1").unwrap(), DEFAULT_SEED), 5);
        assert_eq!(independence_bound(&g, &catalog_entry("a_12").unwrap(), DEFAULT_SEED), 4);
    }

    #[test]
    fn hamiltonians() {
        let g = LieAlgebraModel::c2();
        let cas = c2_casimirs();
        let a1 = catalog_entry("a1").unwrap();
        let spec = HamiltonianSpec { subalgebra: "a1".into(), linear: vec![(0, int(1))], ..Default::default() };
        assert_eq!(build_hamiltonian(&g, &a1, &cas, &spec).unwrap(), p("x1"));
        let a24 = catalog_entry("a_24").unwrap();
        let spec =
            HamiltonianSpec { subalgebra: "a_24".into(), quadratic: vec![((0, 1), int(1))], ..Default::default() };
        let h = build_hamiltonian(&g, &a24, &cas, &spec).unwrap();
        assert_eq!(h, p("x2*x4"));
        let phis = [p("x2*x6 - x4^2"), p("2*x3*x4 + x2*x5 - x1*x6"), p("x1*x5 + x3^2")];
        assert!(non_commuting(&g, &h, &phis).unwrap().is_empty());
        let zero = HamiltonianSpec::default();
        assert!(build_hamiltonian(&g, &a1, &cas, &zero).unwrap().is_zero());
        let bad = HamiltonianSpec { linear: vec![(1, int(1))], ..Default::default() };
        assert!(build_hamiltonian(&g, &a1, &cas, &bad).is_err());
    }
}
