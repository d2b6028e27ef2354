use std::cmp::Ordering;

/// Exponent vector of a commutative monomial. Ordered graded lexicographically with x1 > x2 > ... > xn.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn var(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn with_delta(&self, i: usize, delta: i32) -> Option<Monomial> {
        let v = self.0[i] as i64 + delta as i64;
        if v < 0 {
            return None;
        }
        let mut e = self.0.clone();
        e[i] = v as u32;
        Some(Monomial(e))
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Indices of the variables, repeated by multiplicity, in increasing order.
    pub fn letters(&self) -> Vec<usize> {
        self.0.iter().enumerate().flat_map(|(i, &e)| std::iter::repeat(i).take(e as usize)).collect()
    }

    pub fn from_letters(n: usize, letters: &[usize]) -> Monomial {
        let mut e = vec![0; n];
        for &l in letters {
            e[l] += 1;
        }
        Monomial(e)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All monomials of total degree `d` in `n` variables, largest first.
pub fn monomials_of_degree(n: usize, d: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; n];
    fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        let n = cur.len();
        if i + 1 == n {
            cur[i] = left;
            out.push(Monomial(cur.clone()));
            cur[i] = 0;
            return;
        }
        for e in (0..=left).rev() {
            cur[i] = e;
            rec(i + 1, left - e, cur, out);
        }
        cur[i] = 0;
    }
    if n == 0 {
        if d == 0 {
            out.push(Monomial(vec![]));
        }
        return out;
    }
    rec(0, d, &mut cur, &mut out);
    out
}

/// All monomials with 1 <= degree <= d (or 0 <= degree if `with_constant`), in increasing order.
pub fn monomials_up_to(n: usize, d: u32, with_constant: bool) -> Vec<Monomial> {
    let start = if with_constant { 0 } else { 1 };
    let mut out = Vec::new();
    for k in start..=d {
        let mut m = monomials_of_degree(n, k);
        m.reverse();
        out.extend(m);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graded_lex_order() {
        let x1 = Monomial::new(vec![1, 0, 0]);
        let x2 = Monomial::new(vec![0, 1, 0]);
        let x3sq = Monomial::new(vec![0, 0, 2]);
        assert!(x1 > x2);
        assert!(x3sq > x1);
        assert!(Monomial::new(vec![1, 1, 0]) > x3sq);
    }

    #[test]
    fn degree_enumeration_is_descending() {
        let ms = monomials_of_degree(6, 3);
        assert_eq!(ms.len(), 56);
        assert!(ms.windows(2).all(|w| w[0] > w[1]));
        assert_eq!(monomials_up_to(3, 2, true).len(), 10);
    }
}
