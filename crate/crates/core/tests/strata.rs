use std::collections::BTreeSet;

use commutant_forge::commutant::{solve_commutant, CommutantResult};
use commutant_forge::lie::catalog_entry;
use commutant_forge::monomial::monomials_of_degree;
use commutant_forge::poisson::lie_poisson_bracket;
use commutant_forge::{ExactMatrix, LieAlgebraModel, Monomial, Polynomial, Rational, SubalgebraSpec};

fn rank_of(polys: &[Polynomial]) -> usize {
    let monos: BTreeSet<Monomial> = polys.iter().flat_map(|p| p.terms().map(|(m, _)| m.clone())).collect();
    if monos.is_empty() {
        return 0;
    }
    ExactMatrix::from_rows(polys.iter().map(|p| monos.iter().map(|m| p.coeff(m)).collect()).collect()).rank()
}

fn kernel_dim(g: &LieAlgebraModel, spec: &SubalgebraSpec, h: u32) -> usize {
    let basis = monomials_of_degree(6, h);
    let cols: Vec<Vec<Rational>> = basis
        .iter()
        .map(|m| {
            let p = Polynomial::term(Rational::from_integer(1.into()), m.clone());
            let images: Vec<Polynomial> =
                spec.generators.iter().map(|v| lie_poisson_bracket(g, &p, &Polynomial::linear(v)).unwrap()).collect();
            let targets = monomials_of_degree(6, h);
            images.iter().flat_map(|q| targets.iter().map(|t| q.coeff(t)).collect::<Vec<_>>()).collect()
        })
        .collect();
    basis.len() - ExactMatrix::from_rows(cols).rank()
}

/// Products of lower strata landing in degree h.
fn products(res: &CommutantResult, h: u32) -> Vec<Polynomial> {
    fn rec(res: &CommutantResult, h: u32, min: u32, acc: Polynomial, out: &mut Vec<Polynomial>) {
        if h == 0 {
            out.push(acc);
            return;
        }
        for d in min..=h {
            for p in res.stratum(d) {
                rec(res, h - d, d, &acc * p, out);
            }
        }
    }
    let mut out = Vec::new();
    let one = Polynomial::one(6);
    for d in 1..h {
        for p in res.stratum(d) {
            rec(res, h - d, d, &one * p, &mut out);
        }
    }
    out
}

fn check(label: &str, max_degree: u32, new: &[usize], kernel: &[usize]) {
    let g = LieAlgebraModel::c2();
    let spec = catalog_entry(label).unwrap();
    let res = solve_commutant(&g, &spec, max_degree).unwrap();
    for h in 1..=max_degree {
        let k = kernel_dim(&g, &spec, h);
        assert_eq!(res.kernel_dims[&h], k, "{label} kernel at degree {h}");
        assert_eq!(k, kernel[h as usize - 1], "{label} derived kernel at degree {h}");
        let prods = products(&res, h);
        let expected_new = k - rank_of(&prods);
        assert_eq!(res.stratum(h).len(), expected_new, "{label} new at degree {h}");
        assert_eq!(expected_new, new[h as usize - 1], "{label} derived new at degree {h}");
        let mut all = prods.clone();
        all.extend(res.stratum(h).iter().cloned());
        assert_eq!(rank_of(&all), k, "{label} strata do not span the kernel at degree {h}");
    }
}

#[test]
fn one_dimensional() {
    check("a1", 4, &[2, 4, 0, 0], &[2, 7, 12, 26]);
    check("a3", 4, &[2, 4, 0, 0], &[2, 7, 12, 26]);
    check("a4", 4, &[2, 4, 0, 0], &[2, 7, 12, 26]);
}

#[test]
fn two_dimensional() {
    check("a_12", 4, &[2, 2, 0, 0], &[2, 5, 8, 14]);
    check("a_14", 4, &[0, 3, 0, 0], &[0, 3, 0, 6]);
}

#[test]
fn three_dimensional_and_borel() {
    check("a_su2", 4, &[0, 3, 0, 0], &[0, 3, 0, 6]);
    check("borel", 4, &[0, 2, 0, 0], &[0, 2, 0, 3]);
}

#[test]
fn full_algebra() {
    let g = LieAlgebraModel::c2();
    let spec = SubalgebraSpec::full(&g, "full");
    let res = solve_commutant(&g, &spec, 4).unwrap();
    assert_eq!(res.kernel_dims.values().copied().collect::<Vec<_>>(), vec![0, 2, 0, 3]);
    assert!(res.stratum(4).is_empty());
}
