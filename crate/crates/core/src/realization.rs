use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{check_dim, Error, Result};
use crate::expr::{parse_expr, Symbols};
use crate::linalg::{Echelon, SparseVec};
use crate::monomial::Monomial;
use crate::polynomial::{Polynomial, SubstRing};
use crate::rational::Rational;

/// Differential operator sum c x^ax y^ay Dx^dx Dy^dy, coefficients to the left.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct DiffOp {
    terms: BTreeMap<[u32; 4], Rational>,
}

fn falling(c: u32, i: u32) -> Rational {
    if i > c {
        return Rational::zero();
    }
    (0..i).fold(Rational::one(), |acc, k| acc * Rational::from_integer((c - k).into()))
}

fn binomial(n: u32, k: u32) -> Rational {
    falling(n, k) / falling(k, k)
}

impl DiffOp {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn term(c: Rational, e: [u32; 4]) -> Self {
        let mut d = Self::zero();
        d.add_term(e, c);
        d
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32; 4], &Rational)> {
        self.terms.iter()
    }

    fn add_term(&mut self, e: [u32; 4], c: Rational) {
        if c.is_zero() {
            return;
        }
        let v = self.terms.entry(e).or_insert_with(Rational::zero);
        *v += c;
        if v.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn add(&self, o: &DiffOp) -> DiffOp {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(*e, c.clone());
        }
        r
    }

    pub fn scale(&self, c: &Rational) -> DiffOp {
        let mut r = DiffOp::zero();
        for (e, d) in &self.terms {
            r.add_term(*e, d * c);
        }
        r
    }

    /// Composition self o o, by the Leibniz rule.
    pub fn compose(&self, o: &DiffOp) -> DiffOp {
        let mut r = DiffOp::zero();
        for ([a, b, p, q], c1) in &self.terms {
            for ([c, d, s, t], c2) in &o.terms {
                for i in 0..=(*p).min(*c) {
                    let ki = binomial(*p, i) * falling(*c, i);
                    for j in 0..=(*q).min(*d) {
                        let kj = binomial(*q, j) * falling(*d, j);
                        r.add_term([a + c - i, b + d - j, p - i + s, q - j + t], c1 * c2 * &ki * &kj);
                    }
                }
            }
        }
        r
    }

    pub fn commutator(&self, o: &DiffOp) -> DiffOp {
        self.compose(o).add(&o.compose(self).scale(&-Rational::one()))
    }

    fn as_poly(&self) -> Polynomial {
        Polynomial::from_terms(4, self.terms.iter().map(|(e, c)| (Monomial::new(e.to_vec()), c.clone())))
    }

    /// Parses normal-ordered terms in x, y, Dx, Dy.
    pub fn parse(s: &str) -> Result<DiffOp> {
        let p = Polynomial::parse_with(s, &diffop_symbols())?;
        let mut d = DiffOp::zero();
        for (m, c) in p.terms() {
            let e = m.exponents();
            d.add_term([e[0], e[1], e[2], e[3]], c.clone());
        }
        Ok(d)
    }
}

impl fmt::Display for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.as_poly().format_with(&diffop_symbols()))
    }
}

pub fn diffop_symbols() -> Symbols {
    Symbols::named(&["x", "y", "Dx", "Dy"])
}

pub fn phase_symbols() -> Symbols {
    Symbols::named(&["x", "y", "px", "py"])
}

/// The first-order operator realizing X_j (1-based) on the plane.
pub fn realize_diffop(j: usize) -> Result<DiffOp> {
    let s = match j {
        1 => "Dx",
        2 => "Dy",
        3 => "y*Dx - x*Dy",
        4 => "x*Dx + y*Dy",
        5 => "x^2*Dx - y^2*Dx + 2*x*y*Dy",
        6 => "2*x*y*Dx + y^2*Dy - x^2*Dy",
        _ => return Err(Error::IndexOutOfRange { index: j, max: 6 }),
    };
    DiffOp::parse(s)
}

pub fn diffop_commutator(a: &DiffOp, b: &DiffOp) -> DiffOp {
    a.commutator(b)
}

/// Polynomial in x, y, px, py.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PhasePoly(Polynomial);

impl PhasePoly {
    pub fn new(p: Polynomial) -> Result<Self> {
        check_dim(4, p.dim())?;
        Ok(PhasePoly(p))
    }

    pub fn zero() -> Self {
        PhasePoly(Polynomial::zero(4))
    }

    pub fn poly(&self) -> &Polynomial {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn parse(s: &str) -> Result<Self> {
        Ok(PhasePoly(Polynomial::parse_with(s, &phase_symbols())?))
    }
}

impl fmt::Display for PhasePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.format_with(&phase_symbols()))
    }
}

/// Canonical bracket sum (df/dp dg/dq - df/dq dg/dp), so that {px, x} = 1.
pub fn canonical_poisson(f: &PhasePoly, g: &PhasePoly) -> PhasePoly {
    let mut r = Polynomial::zero(4);
    for (q, p) in [(0, 2), (1, 3)] {
        r.add_scaled(&(&f.0.derivative(p) * &g.0.derivative(q)), &Rational::one());
        r.add_scaled(&(&f.0.derivative(q) * &g.0.derivative(p)), &-Rational::one());
    }
    PhasePoly(r)
}

/// Images of x1..x6 in phase space.
pub fn coordinate_images() -> Vec<Polynomial> {
    ["px", "py", "y*px - x*py", "x*px + y*py", "(x^2 - y^2)*px + 2*x*y*py", "2*x*y*px + (y^2 - x^2)*py"]
        .iter()
        .map(|s| Polynomial::parse_with(s, &phase_symbols()).unwrap())
        .collect()
}

/// Substitutes the momentum realization into a polynomial in x1..x6.
pub fn realize_classical(p: &Polynomial) -> Result<PhasePoly> {
    check_dim(6, p.dim())?;
    Ok(PhasePoly(p.substitute(&coordinate_images())?))
}

/// Realized generators and all their canonical brackets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealizedTable {
    pub names: Vec<String>,
    pub realized: Vec<PhasePoly>,
    pub brackets: BTreeMap<(usize, usize), PhasePoly>,
}

impl RealizedTable {
    pub fn new(generators: &[(String, Polynomial)]) -> Result<Self> {
        let realized = generators.iter().map(|(_, g)| realize_classical(g)).collect::<Result<Vec<_>>>()?;
        let mut brackets = BTreeMap::new();
        for i in 0..realized.len() {
            for j in i + 1..realized.len() {
                brackets.insert((i, j), canonical_poisson(&realized[i], &realized[j]));
            }
        }
        let names = generators.iter().map(|(s, _)| s.clone()).collect();
        Ok(RealizedTable { names, realized, brackets })
    }

    pub fn bracket(&self, i: usize, j: usize) -> PhasePoly {
        if i == j {
            return PhasePoly::zero();
        }
        if i < j {
            self.brackets[&(i, j)].clone()
        } else {
            PhasePoly(-&self.brackets[&(j, i)].0)
        }
    }

    /// Names of generators realizing to zero.
    pub fn zero_generators(&self) -> Vec<usize> {
        self.realized.iter().enumerate().filter(|(_, r)| r.is_zero()).map(|(i, _)| i).collect()
    }

    /// Evaluates an expression in the realized generator symbols (commutative).
    pub fn evaluate(&self, expr: &str, syms: &Symbols) -> Result<PhasePoly> {
        let e = parse_expr(expr, syms)?;
        let vals: Vec<Polynomial> = self.realized.iter().map(|r| r.0.clone()).collect();
        Ok(PhasePoly(e.eval(&SubstRing { n: 4, values: &vals })))
    }

    /// Whether lhs = rhs holds identically in phase space.
    pub fn holds(&self, lhs: &str, rhs: &str, syms: &Symbols) -> Result<bool> {
        Ok(self.evaluate(lhs, syms)? == self.evaluate(rhs, syms)?)
    }

    /// If the brackets among `indices` lie in the span of those realized
    /// generators and constants, returns each bracket's coefficients
    /// (last slot = constant term).
    pub fn linear_closure(&self, indices: &[usize]) -> Option<BTreeMap<(usize, usize), Vec<Rational>>> {
        let mut span: Echelon<std::cmp::Reverse<Monomial>> = Echelon::new();
        let k = indices.len();
        let vec = |p: &Polynomial| -> SparseVec<std::cmp::Reverse<Monomial>> {
            p.terms().map(|(m, c)| (std::cmp::Reverse(m.clone()), c.clone())).collect()
        };
        for (t, &i) in indices.iter().enumerate() {
            span.insert(&vec(&self.realized[i].0), Some(t));
        }
        span.insert(&vec(&Polynomial::one(4)), Some(k));
        let mut out = BTreeMap::new();
        for (a, &i) in indices.iter().enumerate() {
            for &j in &indices[a + 1..] {
                let (res, combo) = span.reduce(&vec(&self.bracket(i, j).0));
                if !res.is_empty() {
                    return None;
                }
                let mut c = vec![Rational::zero(); k + 1];
                for (t, v) in combo {
                    c[t] = v;
                }
                out.insert((i, j), c);
            }
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::LieAlgebraModel;
    use crate::poisson::{c2_casimirs, lie_poisson_bracket};
    use crate::rational::int;

    fn x(s: &str) -> Polynomial {
        Polynomial::parse(s, 6).unwrap()
    }

    #[test]
    fn operators() {
        assert_eq!(realize_diffop(1).unwrap().to_string(), "Dx");
        assert_eq!(realize_diffop(4).unwrap().to_string(), "x*Dx + y*Dy");
        assert_eq!(realize_diffop(6).unwrap(), DiffOp::parse("2*x*y*Dx + (y^2 - x^2)*Dy").unwrap());
        assert!(realize_diffop(7).is_err());
    }

    #[test]
    fn operator_commutators() {
        let r = |j| realize_diffop(j).unwrap();
        assert_eq!(diffop_commutator(&r(1), &r(3)), r(2).scale(&int(-1)));
        assert!(diffop_commutator(&r(3), &r(4)).is_zero());
        assert_eq!(diffop_commutator(&r(1), &r(5)), r(4).scale(&int(2)));
    }

    #[test]
    fn leibniz() {
        let dx = DiffOp::parse("Dx").unwrap();
        let x2 = DiffOp::parse("x^2").unwrap();
        assert_eq!(dx.compose(&x2).to_string(), "x^2*Dx + 2*x");
        let d2 = DiffOp::parse("Dx^2").unwrap();
        assert_eq!(d2.compose(&x2).to_string(), "x^2*Dx^2 + 4*x*Dx + 2");
    }

    #[test]
    fn classical_images() {
        assert_eq!(realize_classical(&x("x1")).unwrap().to_string(), "px");
        for c in c2_casimirs() {
            assert!(realize_classical(&c).unwrap().is_zero());
        }
        let a4 = realize_classical(&x("x2*x6 + x3^2")).unwrap();
        assert_eq!(a4, PhasePoly::parse("y^2*(px^2 + py^2)").unwrap());
        assert!(realize_classical(&Polynomial::var(3, 0)).is_err());
    }

    #[test]
    fn canonical_bracket() {
        let f = PhasePoly::parse("x^2*py + px").unwrap();
        assert!(canonical_poisson(&f, &f).is_zero());
        let px = PhasePoly::parse("px").unwrap();
        let xx = PhasePoly::parse("x").unwrap();
        assert_eq!(canonical_poisson(&px, &xx).to_string(), "1");
        let g = LieAlgebraModel::c2();
        let (a, b) = (x("x1"), x("x5"));
        let lhs = canonical_poisson(&realize_classical(&a).unwrap(), &realize_classical(&b).unwrap());
        assert_eq!(lhs, realize_classical(&x("2*x4")).unwrap());
        assert_eq!(lhs, realize_classical(&lie_poisson_bracket(&g, &a, &b).unwrap()).unwrap());
    }

    #[test]
    fn e2_central_extension() {
        let gens: Vec<(String, Polynomial)> = ["x1", "x2", "x3", "x1*x5 + x2*x6 - x4^2", "x1*x6 - x2*x5 - 2*x3*x4"]
            .iter()
            .enumerate()
            .map(|(i, s)| (format!("R{}", i + 1), x(s)))
            .collect();
        let t = RealizedTable::new(&gens).unwrap();
        let c = t.linear_closure(&[0, 1, 2]).unwrap();
        assert_eq!(c[&(0, 2)], vec![int(0), int(-1), int(0), int(0)]);
        assert_eq!(c[&(1, 2)], vec![int(1), int(0), int(0), int(0)]);
        assert_eq!(t.zero_generators(), vec![4]);
    }
}
