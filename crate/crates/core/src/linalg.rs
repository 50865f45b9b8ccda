//! Exact rational linear algebra.
//!
//! Matrices are stored as sparse rows. Kernel, image and solve share one
//! column-echelon routine: a column is a pivot column exactly when it is
//! independent of the columns to its left, which is the pivot set of the
//! reduced row echelon form. Kernel vectors and solutions are therefore the
//! same ones read off the RREF with free variables set to zero.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::algebra::Rational;

/// Sparse vector: index -> nonzero entry.
pub type SparseVec = BTreeMap<usize, Rational>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("right-hand side is not in the image")]
    NoSolution,
    #[error("subspace is not contained in the ambient span (vector {index})")]
    NotSubspace { index: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
}

/// `v += c * w`, dropping entries that cancel.
pub fn axpy(v: &mut SparseVec, c: &Rational, w: &SparseVec) {
    if c.is_zero() {
        return;
    }
    for (k, x) in w {
        let entry = v.entry(*k).or_insert_with(Rational::zero);
        *entry += c * x;
        if entry.is_zero() {
            v.remove(k);
        }
    }
}

pub fn scale(v: &SparseVec, c: &Rational) -> SparseVec {
    if c.is_zero() {
        return SparseVec::new();
    }
    v.iter().map(|(k, x)| (*k, x * c)).collect()
}

pub fn dense_to_sparse(v: &[Rational]) -> SparseVec {
    v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(k, x)| (k, x.clone())).collect()
}

pub fn sparse_to_dense(v: &SparseVec, dim: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); dim];
    for (k, x) in v {
        out[*k] = x.clone();
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<SparseVec>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix { rows, cols, data: vec![SparseVec::new(); rows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = QMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_dense(rows: Vec<Vec<Rational>>) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
        QMatrix { rows: rows.len(), cols, data: rows.iter().map(|r| dense_to_sparse(r)).collect() }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        QMatrix::from_dense(
            rows.iter().map(|r| r.iter().map(|&x| Rational::from_integer(x.into())).collect()).collect(),
        )
    }

    /// Builds a matrix from its columns, each a sparse vector of length `rows`.
    pub fn from_columns(rows: usize, columns: &[SparseVec]) -> Self {
        let mut m = QMatrix::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            for (i, x) in c {
                assert!(*i < rows, "column entry out of range");
                m.data[*i].insert(j, x.clone());
            }
        }
        m
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

    pub fn set(&mut self, i: usize, j: usize, x: Rational) {
        assert!(i < self.rows && j < self.cols);
        if x.is_zero() {
            self.data[i].remove(&j);
        } else {
            self.data[i].insert(j, x);
        }
    }

    pub fn row(&self, i: usize) -> &SparseVec {
        &self.data[i]
    }

    pub fn to_dense(&self) -> Vec<Vec<Rational>> {
        self.data.iter().map(|r| sparse_to_dense(r, self.cols)).collect()
    }

    pub fn columns(&self) -> Vec<SparseVec> {
        let mut cols = vec![SparseVec::new(); self.cols];
        for (i, r) in self.data.iter().enumerate() {
            for (j, x) in r {
                cols[*j].insert(i, x.clone());
            }
        }
        cols
    }

    pub fn mul_vec(&self, v: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (i, r) in self.data.iter().enumerate() {
            let mut acc = Rational::zero();
            for (j, x) in r {
                if let Some(y) = v.get(j) {
                    acc += x * y;
                }
            }
            if !acc.is_zero() {
                out.insert(i, acc);
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|r| r.is_empty())
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(|r| r.len()).sum()
    }
}

/// Ordered list of linearly independent vectors in `k^ambient`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubspaceBasis {
    pub ambient: usize,
    pub vectors: Vec<SparseVec>,
}

impl SubspaceBasis {
    pub fn new(ambient: usize, vectors: Vec<SparseVec>) -> Self {
        SubspaceBasis { ambient, vectors }
    }

    pub fn full(ambient: usize) -> Self {
        SubspaceBasis::new(ambient, (0..ambient).map(|k| SparseVec::from([(k, Rational::one())])).collect())
    }

    pub fn empty(ambient: usize) -> Self {
        SubspaceBasis::new(ambient, Vec::new())
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn dense(&self) -> Vec<Vec<Rational>> {
        self.vectors.iter().map(|v| sparse_to_dense(v, self.ambient)).collect()
    }

    pub fn is_independent(&self) -> bool {
        rank_of(&self.vectors) == self.vectors.len()
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        let mut e = Echelon::new(false);
        for w in &self.vectors {
            let _ = e.insert(w.clone(), SparseVec::new());
        }
        e.reduce(v.clone(), SparseVec::new()).0.is_empty()
    }
}

struct EchelonRow {
    vec: SparseVec,
    combo: SparseVec,
}

/// Incremental echelon form of a list of vectors. Each stored row has
/// leading entry 1 and optionally remembers which input combination it is.
struct Echelon {
    rows: Vec<EchelonRow>,
    by_lead: BTreeMap<usize, usize>,
    track: bool,
}

impl Echelon {
    fn new(track: bool) -> Self {
        Echelon { rows: Vec::new(), by_lead: BTreeMap::new(), track }
    }

    /// Reduces `v` against stored rows. Returns the residual and the
    /// combination accumulated alongside (`combo - sum c_k combo_k`).
    fn reduce(&self, mut v: SparseVec, mut combo: SparseVec) -> (SparseVec, SparseVec) {
        let mut cursor = 0usize;
        loop {
            let next = v
                .range(cursor..)
                .find(|(k, _)| self.by_lead.contains_key(k))
                .map(|(k, c)| (*k, c.clone()));
            let Some((k, c)) = next else { break };
            let row = &self.rows[self.by_lead[&k]];
            let neg = -c;
            axpy(&mut v, &neg, &row.vec);
            if self.track {
                axpy(&mut combo, &neg, &row.combo);
            }
            cursor = k + 1;
        }
        (v, combo)
    }

    /// Inserts `v`; returns the lead index if it was independent, else the
    /// reduced combination (a relation) when tracking.
    fn insert(&mut self, v: SparseVec, combo: SparseVec) -> Result<usize, SparseVec> {
        let (r, c) = self.reduce(v, combo);
        match r.iter().next() {
            None => Err(c),
            Some((&lead, x)) => {
                let inv = Rational::one() / x;
                let vec = scale(&r, &inv);
                let combo = if self.track { scale(&c, &inv) } else { SparseVec::new() };
                self.by_lead.insert(lead, self.rows.len());
                self.rows.push(EchelonRow { vec, combo });
                Ok(lead)
            }
        }
    }
}

fn rank_of(vectors: &[SparseVec]) -> usize {
    let mut e = Echelon::new(false);
    vectors.iter().filter(|v| e.insert((*v).clone(), SparseVec::new()).is_ok()).count()
}

/// Column-echelon decomposition of a matrix: pivot columns, a kernel basis
/// and a solver for `m x = b`.
pub struct ColumnReduction {
    rows: usize,
    cols: usize,
    echelon: Echelon,
    pivots: Vec<usize>,
    kernel: Vec<SparseVec>,
    columns: Vec<SparseVec>,
}

impl ColumnReduction {
    pub fn new(m: &QMatrix) -> Self {
        ColumnReduction::from_columns(m.rows(), m.columns())
    }

    pub fn from_columns(rows: usize, columns: Vec<SparseVec>) -> Self {
        let mut echelon = Echelon::new(true);
        let mut pivots = Vec::new();
        let mut kernel = Vec::new();
        for (j, c) in columns.iter().enumerate() {
            match echelon.insert(c.clone(), SparseVec::from([(j, Rational::one())])) {
                Ok(_) => pivots.push(j),
                Err(relation) => kernel.push(relation),
            }
        }
        ColumnReduction { rows, cols: columns.len(), echelon, pivots, kernel, columns }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn kernel_basis(&self) -> SubspaceBasis {
        SubspaceBasis::new(self.cols, self.kernel.clone())
    }

    pub fn image_basis(&self) -> SubspaceBasis {
        SubspaceBasis::new(self.rows, self.pivots.iter().map(|&j| self.columns[j].clone()).collect())
    }

    pub fn in_image(&self, b: &SparseVec) -> bool {
        self.echelon.reduce(b.clone(), SparseVec::new()).0.is_empty()
    }

    /// Solution supported on pivot columns.
    pub fn solve(&self, b: &SparseVec) -> Result<SparseVec, LinalgError> {
        let (r, c) = self.echelon.reduce(b.clone(), SparseVec::new());
        if !r.is_empty() {
            return Err(LinalgError::NoSolution);
        }
        // r = b - m*(-c)  =>  m*(-c) = b
        Ok(c.into_iter().map(|(k, x)| (k, -x)).collect())
    }
}

/// Reduced row echelon form and pivot columns.
pub fn rref(m: &QMatrix) -> (QMatrix, Vec<usize>) {
    let mut e = Echelon::new(false);
    for r in &m.data {
        let _ = e.insert(r.clone(), SparseVec::new());
    }
    let mut leads: Vec<usize> = e.by_lead.keys().copied().collect();
    leads.sort_unstable();
    // back substitution, bottom-up
    let mut reduced: BTreeMap<usize, SparseVec> = BTreeMap::new();
    for &p in leads.iter().rev() {
        let mut row = e.rows[e.by_lead[&p]].vec.clone();
        let later: Vec<(usize, Rational)> =
            row.range(p + 1..).filter(|(k, _)| reduced.contains_key(k)).map(|(k, x)| (*k, x.clone())).collect();
        for (k, x) in later {
            let neg = -x;
            axpy(&mut row, &neg, &reduced[&k]);
        }
        reduced.insert(p, row);
    }
    let mut out = QMatrix::zeros(m.rows, m.cols);
    for (i, p) in leads.iter().enumerate() {
        out.data[i] = reduced.remove(p).unwrap_or_default();
    }
    (out, leads)
}

pub fn kernel_basis(m: &QMatrix) -> SubspaceBasis {
    ColumnReduction::new(m).kernel_basis()
}

pub fn image_basis(m: &QMatrix) -> SubspaceBasis {
    ColumnReduction::new(m).image_basis()
}

pub fn rank(m: &QMatrix) -> usize {
    ColumnReduction::new(m).rank()
}

pub fn solve(m: &QMatrix, b: &SparseVec) -> Result<SparseVec, LinalgError> {
    ColumnReduction::new(m).solve(b)
}

/// Representatives of `span(ambient) / span(sub)`, chosen greedily from the
/// ambient basis in order.
pub fn quotient_basis(sub: &SubspaceBasis, ambient: &SubspaceBasis) -> Result<SubspaceBasis, LinalgError> {
    if sub.ambient != ambient.ambient {
        return Err(LinalgError::DimensionMismatch { expected: ambient.ambient, found: sub.ambient });
    }
    let mut amb = Echelon::new(false);
    for v in &ambient.vectors {
        let _ = amb.insert(v.clone(), SparseVec::new());
    }
    for (index, v) in sub.vectors.iter().enumerate() {
        if !amb.reduce(v.clone(), SparseVec::new()).0.is_empty() {
            return Err(LinalgError::NotSubspace { index });
        }
    }
    let mut e = Echelon::new(false);
    for v in &sub.vectors {
        let _ = e.insert(v.clone(), SparseVec::new());
    }
    let chosen = ambient
        .vectors
        .iter()
        .filter(|v| e.insert((*v).clone(), SparseVec::new()).is_ok())
        .cloned()
        .collect();
    Ok(SubspaceBasis::new(ambient.ambient, chosen))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;
    use proptest::prelude::*;

    fn sv(v: &[i64]) -> SparseVec {
        dense_to_sparse(&v.iter().map(|&x| rat(x)).collect::<Vec<_>>())
    }

    #[test]
    fn rref_examples() {
        let (r, p) = rref(&QMatrix::from_i64(&[&[2, 4], &[1, 2]]));
        assert_eq!(r, QMatrix::from_i64(&[&[1, 2], &[0, 0]]));
        assert_eq!(p, vec![0]);

        let id = QMatrix::identity(3);
        let (r, p) = rref(&id);
        assert_eq!(r, id);
        assert_eq!(p, vec![0, 1, 2]);

        let z = QMatrix::zeros(2, 3);
        let (r, p) = rref(&z);
        assert_eq!(r, z);
        assert!(p.is_empty());
    }

    #[test]
    fn kernel_and_image_examples() {
        let k = kernel_basis(&QMatrix::from_i64(&[&[1, 1]]));
        assert_eq!(k.dim(), 1);
        assert_eq!(k.vectors[0], sv(&[-1, 1]));
        // (1,-1) spans the same line
        assert!(k.contains(&sv(&[1, -1])));

        assert_eq!(kernel_basis(&QMatrix::zeros(2, 2)).dim(), 2);
        assert_eq!(image_basis(&QMatrix::from_i64(&[&[1, 2], &[2, 4]])).dim(), 1);
    }

    #[test]
    fn solve_examples() {
        assert_eq!(solve(&QMatrix::from_i64(&[&[2]]), &sv(&[4])).unwrap(), sv(&[2]));
        assert_eq!(solve(&QMatrix::from_i64(&[&[1, 1]]), &sv(&[3])).unwrap(), sv(&[3, 0]));
        assert_eq!(solve(&QMatrix::from_i64(&[&[0]]), &sv(&[1])), Err(LinalgError::NoSolution));
    }

    #[test]
    fn quotient_examples() {
        let q = quotient_basis(&SubspaceBasis::new(2, vec![sv(&[1, 0])]), &SubspaceBasis::full(2)).unwrap();
        assert_eq!(q.vectors, vec![sv(&[0, 1])]);
        let full = SubspaceBasis::full(2);
        assert!(quotient_basis(&full, &full).unwrap().is_empty());
        let q = quotient_basis(&SubspaceBasis::empty(1), &SubspaceBasis::full(1)).unwrap();
        assert_eq!(q.vectors, vec![sv(&[1])]);
    }

    #[test]
    fn quotient_rejects_non_subspace() {
        let sub = SubspaceBasis::new(2, vec![sv(&[1, 1])]);
        let amb = SubspaceBasis::new(2, vec![sv(&[1, 0])]);
        assert_eq!(quotient_basis(&sub, &amb), Err(LinalgError::NotSubspace { index: 0 }));
    }

    fn matrix_strategy() -> impl Strategy<Value = QMatrix> {
        (1usize..6, 1usize..7).prop_flat_map(|(r, c)| {
            proptest::collection::vec(proptest::collection::vec(-3i64..4, c), r).prop_map(|rows| {
                QMatrix::from_dense(rows.into_iter().map(|r| r.into_iter().map(rat).collect()).collect())
            })
        })
    }

    proptest! {
        #[test]
        fn rank_nullity(m in matrix_strategy()) {
            let red = ColumnReduction::new(&m);
            let k = red.kernel_basis();
            let im = red.image_basis();
            prop_assert_eq!(k.dim() + im.dim(), m.cols());
            for v in &k.vectors {
                prop_assert!(m.mul_vec(v).is_empty());
            }
            prop_assert!(k.is_independent());
            let (_, p) = rref(&m);
            prop_assert_eq!(p.as_slice(), red.pivots());
        }

        #[test]
        fn kernel_matches_rref_free_columns(m in matrix_strategy()) {
            let (r, p) = rref(&m);
            let free: Vec<usize> = (0..m.cols()).filter(|j| !p.contains(j)).collect();
            let k = kernel_basis(&m);
            prop_assert_eq!(k.dim(), free.len());
            for (v, f) in k.vectors.iter().zip(&free) {
                let mut expected = SparseVec::from([(*f, rat(1))]);
                for (i, piv) in p.iter().enumerate() {
                    let x = r.get(i, *f);
                    if !x.is_zero() {
                        expected.insert(*piv, -x);
                    }
                }
                prop_assert_eq!(v, &expected);
            }
        }

        #[test]
        fn solve_is_exact(m in matrix_strategy(), seed in proptest::collection::vec(-3i64..4, 7)) {
            let x0: SparseVec = dense_to_sparse(&seed[..m.cols()].iter().map(|&x| rat(x)).collect::<Vec<_>>());
            let b = m.mul_vec(&x0);
            let x = solve(&m, &b).unwrap();
            prop_assert_eq!(m.mul_vec(&x), b);
        }

        #[test]
        fn quotient_completes_independently(m in matrix_strategy()) {
            let im = image_basis(&m);
            let q = quotient_basis(&im, &SubspaceBasis::full(m.rows())).unwrap();
            let mut all = im.vectors.clone();
            all.extend(q.vectors.iter().cloned());
            prop_assert_eq!(rank_of(&all), all.len());
            prop_assert_eq!(all.len(), m.rows());
        }
    }
}
