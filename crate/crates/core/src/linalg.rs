use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{check_dim, Error, Result};
use crate::rational::Rational;

pub type SparseVec<K> = BTreeMap<K, Rational>;

/// `a += c * b` on sparse vectors, dropping cancelled entries.
pub fn axpy<K: Ord + Clone>(a: &mut SparseVec<K>, c: &Rational, b: &SparseVec<K>) {
    if c.is_zero() {
        return;
    }
    for (k, v) in b {
        let t = c * v;
        match a.get_mut(k) {
            Some(x) => {
                *x += t;
                if x.is_zero() {
                    a.remove(k);
                }
            }
            None => {
                a.insert(k.clone(), t);
            }
        }
    }
}

#[derive(Clone, Debug)]
struct Row<K> {
    vec: SparseVec<K>,
    tag: SparseVec<usize>,
}

/// Incrementally maintained reduced row echelon form.
///
/// The pivot of a row is its smallest key. Rows stay fully reduced: no row
/// carries an entry in another row's pivot column. Each row remembers the
/// combination of inserted vectors (by tag index) that produced it.
#[derive(Clone, Debug)]
pub struct Echelon<K: Ord + Clone> {
    rows: BTreeMap<K, Row<K>>,
}

impl<K: Ord + Clone> Default for Echelon<K> {
    fn default() -> Self {
        Echelon { rows: BTreeMap::new() }
    }
}

impl<K: Ord + Clone> Echelon<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = &K> {
        self.rows.keys()
    }

    /// Rows in pivot order.
    pub fn rows(&self) -> impl Iterator<Item = &SparseVec<K>> {
        self.rows.values().map(|r| &r.vec)
    }

    /// Reduces `v` against the current rows; returns the residue and the
    /// tag combination c with `v = residue + sum c_t * inserted_t`.
    pub fn reduce(&self, v: &SparseVec<K>) -> (SparseVec<K>, SparseVec<usize>) {
        let mut r = v.clone();
        let mut combo = SparseVec::new();
        let hits: Vec<K> = v.keys().filter(|k| self.rows.contains_key(*k)).cloned().collect();
        for k in hits {
            let c = match r.get(&k) {
                Some(c) => c.clone(),
                None => continue,
            };
            let row = &self.rows[&k];
            axpy(&mut r, &-&c, &row.vec);
            axpy(&mut combo, &c, &row.tag);
        }
        (r, combo)
    }

    pub fn contains(&self, v: &SparseVec<K>) -> bool {
        self.reduce(v).0.is_empty()
    }

    /// Inserts `v` tagged with index `tag`; returns false when `v` is already in the span.
    pub fn insert(&mut self, v: &SparseVec<K>, tag: Option<usize>) -> bool {
        let (mut r, combo) = self.reduce(v);
        if r.is_empty() {
            return false;
        }
        let mut t = SparseVec::new();
        axpy(&mut t, &-Rational::one(), &combo);
        if let Some(i) = tag {
            t.insert(i, Rational::one());
        }
        let (lead, lc) = r.iter().next().map(|(k, c)| (k.clone(), c.clone())).unwrap();
        let inv = Rational::one() / &lc;
        for x in r.values_mut() {
            *x *= &inv;
        }
        for x in t.values_mut() {
            *x *= &inv;
        }
        for row in self.rows.values_mut() {
            if let Some(c) = row.vec.get(&lead).cloned() {
                axpy(&mut row.vec, &-&c, &r);
                axpy(&mut row.tag, &-&c, &t);
            }
        }
        self.rows.insert(lead, Row { vec: std::mem::take(&mut r), tag: t });
        true
    }
}

/// Exact rational matrix with sparse rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<SparseVec<usize>>,
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix { rows, cols, data: vec![SparseVec::new(); rows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let cols = rows.first().map(|r| r.len()).unwrap_or(0);
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.into_iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged matrix");
            for (j, v) in r.into_iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn from_sparse_rows(cols: usize, data: Vec<SparseVec<usize>>) -> Self {
        assert!(data.iter().all(|r| r.keys().all(|&k| k < cols)), "column out of range");
        ExactMatrix { rows: data.len(), cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Rational {
        self.data[i].get(&j).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        assert!(j < self.cols, "column out of range");
        if v.is_zero() {
            self.data[i].remove(&j);
        } else {
            self.data[i].insert(j, v);
        }
    }

    pub fn row(&self, i: usize) -> &SparseVec<usize> {
        &self.data[i]
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        check_dim(self.cols, v.len())?;
        Ok(self.data.iter().map(|r| r.iter().fold(Rational::zero(), |s, (&j, c)| s + c * &v[j])).collect())
    }

    pub fn transpose(&self) -> ExactMatrix {
        let mut t = Self::zeros(self.cols, self.rows);
        for (i, r) in self.data.iter().enumerate() {
            for (&j, c) in r {
                t.data[j].insert(i, c.clone());
            }
        }
        t
    }

    pub fn mul(&self, o: &ExactMatrix) -> Result<ExactMatrix> {
        check_dim(self.cols, o.rows)?;
        let mut m = Self::zeros(self.rows, o.cols);
        for (i, r) in self.data.iter().enumerate() {
            let mut acc = SparseVec::new();
            for (&k, c) in r {
                axpy(&mut acc, c, &o.data[k]);
            }
            m.data[i] = acc;
        }
        Ok(m)
    }

    fn echelon(&self) -> Echelon<usize> {
        let mut e = Echelon::new();
        for r in &self.data {
            e.insert(r, None);
        }
        e
    }

    /// Reduced row echelon form (zero rows dropped) and pivot columns.
    pub fn rref(&self) -> (ExactMatrix, Vec<usize>) {
        let e = self.echelon();
        let pivots: Vec<usize> = e.pivots().cloned().collect();
        (ExactMatrix::from_sparse_rows(self.cols, e.rows().cloned().collect()), pivots)
    }

    pub fn rank(&self) -> usize {
        self.echelon().rank()
    }

    /// Null-space basis as the rows of a reduced echelon matrix.
    pub fn kernel(&self) -> Vec<Vec<Rational>> {
        let e = self.echelon();
        let pivot_rows: Vec<(usize, &SparseVec<usize>)> = e.pivots().cloned().zip(e.rows()).collect();
        let is_pivot: Vec<bool> = {
            let mut v = vec![false; self.cols];
            for (p, _) in &pivot_rows {
                v[*p] = true;
            }
            v
        };
        let mut k = Echelon::new();
        for f in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = SparseVec::new();
            v.insert(f, Rational::one());
            for (p, row) in &pivot_rows {
                if let Some(c) = row.get(&f) {
                    v.insert(*p, -c);
                }
            }
            k.insert(&v, None);
        }
        k.rows().map(|r| dense(r, self.cols)).collect()
    }

    /// Inverse of a square matrix.
    pub fn inverse(&self) -> Result<ExactMatrix> {
        check_dim(self.rows, self.cols)?;
        let n = self.rows;
        let mut e = Echelon::new();
        for (i, r) in self.data.iter().enumerate() {
            e.insert(r, Some(i));
        }
        if e.rank() < n {
            return Err(Error::SingularMatrix);
        }
        // Row p of the RREF is e_p = sum_i tag_i * row_i, so the tags form the inverse.
        let mut inv = Self::zeros(n, n);
        for (p, row) in e.rows.iter() {
            inv.data[*p] = row.tag.clone();
        }
        Ok(inv)
    }
}

pub fn dense(v: &SparseVec<usize>, n: usize) -> Vec<Rational> {
    let mut d = vec![Rational::zero(); n];
    for (&k, c) in v {
        d[k] = c.clone();
    }
    d
}

pub fn kernel(m: &ExactMatrix) -> Vec<Vec<Rational>> {
    m.kernel()
}

pub fn rank_at_point(m: &ExactMatrix) -> usize {
    m.rank()
}
