use num_traits::One;
use proptest::prelude::*;

use commutant_forge::enveloping::{Enveloping, PbwElement};
use commutant_forge::poisson::lie_poisson_bracket;
use commutant_forge::realization::{canonical_poisson, realize_classical, realize_diffop, DiffOp};
use commutant_forge::{kernel, ExactMatrix, LieAlgebraModel, Monomial, Polynomial, Rational};

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn build(n: usize, terms: Vec<(Vec<u32>, i64, i64)>) -> Polynomial {
    let mut p = Polynomial::zero(n);
    for (e, c, d) in terms {
        p.add_term(Monomial::new(e), rat(c, d));
    }
    p
}

/// Polynomial in `n` variables of total degree at most `deg`.
fn arb_poly(n: usize, deg: u32) -> impl Strategy<Value = Polynomial> {
    let term = (prop::collection::vec(0..=deg, n), -6i64..=6, 1i64..=3).prop_map(move |(mut e, c, d)| {
        while e.iter().sum::<u32>() > deg {
            let i = e.iter().position(|&v| v > 0).unwrap();
            e[i] -= 1;
        }
        (e, c, d)
    });
    prop::collection::vec(term, 0..5).prop_map(move |t| build(n, t))
}

fn arb_diffop() -> impl Strategy<Value = DiffOp> {
    prop::collection::vec((prop::array::uniform4(0u32..=2), -4i64..=4), 0..4)
        .prop_map(|ts| ts.into_iter().fold(DiffOp::zero(), |acc, (e, c)| acc.add(&DiffOp::term(rat(c, 1), e))))
}

fn c2() -> LieAlgebraModel {
    LieAlgebraModel::c2()
}

fn br(p: &Polynomial, q: &Polynomial) -> Polynomial {
    lie_poisson_bracket(&c2(), p, q).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_laws(a in arb_poly(4, 3), b in arb_poly(4, 3), c in arb_poly(4, 2)) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &Polynomial::one(4), a.clone());
    }

    #[test]
    fn parse_round_trip(a in arb_poly(6, 4)) {
        prop_assert_eq!(Polynomial::parse(&a.to_string(), 6).unwrap(), a);
    }

    #[test]
    fn kernel_vectors_are_annihilated(rows in prop::collection::vec(prop::collection::vec(-3i64..=3, 5), 1..5)) {
        let m = ExactMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| rat(v, 1)).collect()).collect());
        let k = kernel(&m);
        prop_assert_eq!(k.len() + m.rank(), 5);
        for v in &k {
            prop_assert!(m.mul_vec(v).unwrap().iter().all(|c| *c == rat(0, 1)));
        }
    }

    #[test]
    fn poisson_bracket_laws(a in arb_poly(6, 2), b in arb_poly(6, 2), c in arb_poly(6, 2)) {
        prop_assert_eq!(br(&a, &b), -&br(&b, &a));
        prop_assert_eq!(br(&a, &(&b * &c)), &(&br(&a, &b) * &c) + &(&b * &br(&a, &c)));
        let j = &(&br(&a, &br(&b, &c)) + &br(&b, &br(&c, &a))) + &br(&c, &br(&a, &b));
        prop_assert!(j.is_zero());
    }

    #[test]
    fn enveloping_associative(a in arb_poly(6, 2), b in arb_poly(6, 2), c in arb_poly(6, 2)) {
        let g = c2();
        let env = Enveloping::new(&g);
        let (a, b, c) = (env.symmetrize(&a), PbwElement::from_normal_ordered(b), env.symmetrize(&c));
        let left = env.multiply(&env.multiply(&a, &b).unwrap(), &c).unwrap();
        let right = env.multiply(&a, &env.multiply(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn commutator_jacobi(a in arb_poly(6, 2), b in arb_poly(6, 2), c in arb_poly(6, 1)) {
        let g = c2();
        let env = Enveloping::new(&g);
        let (a, b, c) = (env.symmetrize(&a), env.symmetrize(&b), env.symmetrize(&c));
        let cm = |x: &PbwElement, y: &PbwElement| env.commutator(x, y).unwrap();
        let j = cm(&a, &cm(&b, &c)).add(&cm(&b, &cm(&c, &a))).add(&cm(&c, &cm(&a, &b)));
        prop_assert!(j.is_zero());
    }

    #[test]
    fn symmetrization_filtration(a in arb_poly(6, 3)) {
        let g = c2();
        let env = Enveloping::new(&g);
        let s = env.symmetrize(&a);
        prop_assert_eq!(s.degree(), a.degree());
        if let Some(d) = a.degree() {
            prop_assert_eq!(s.symbol(), a.homogeneous_part(d));
        }
    }

    #[test]
    fn symmetrization_equivariant(a in arb_poly(6, 3), j in 0usize..6) {
        let g = c2();
        let env = Enveloping::new(&g);
        let left = env.symmetrize(&br(&Polynomial::var(6, j), &a));
        let right = env.commutator(&PbwElement::generator(6, j), &env.symmetrize(&a)).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn diffop_composition_associative(a in arb_diffop(), b in arb_diffop(), c in arb_diffop()) {
        prop_assert_eq!(a.compose(&b).compose(&c), a.compose(&b.compose(&c)));
        prop_assert_eq!(a.commutator(&b), b.commutator(&a).scale(&-Rational::one()));
    }

    #[test]
    fn realization_is_a_homomorphism(a in arb_poly(6, 2), b in arb_poly(6, 2)) {
        let left = realize_classical(&br(&a, &b)).unwrap();
        let right = canonical_poisson(&realize_classical(&a).unwrap(), &realize_classical(&b).unwrap());
        prop_assert_eq!(left, right);
    }

    #[test]
    fn diffop_realization_is_a_representation(i in 1usize..=6, j in 1usize..=6) {
        let bracket = br(&Polynomial::var(6, i - 1), &Polynomial::var(6, j - 1));
        let mut want = DiffOp::zero();
        for (m, c) in bracket.terms() {
            let k = m.exponents().iter().position(|&e| e == 1).unwrap() + 1;
            want = want.add(&realize_diffop(k).unwrap().scale(c));
        }
        prop_assert_eq!(realize_diffop(i).unwrap().commutator(&realize_diffop(j).unwrap()), want);
    }
}
