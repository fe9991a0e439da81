//! Exact rational matrices, Gram matrices of partition vectors and their
//! (generalized) inverses.
//!
//! Nothing in this module touches floating point. Products go through a
//! common-denominator integer representation, inversion through fraction-free
//! Gauss-Jordan elimination, and rank decisions through fraction-free row
//! reduction with content removal.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::partitions::{enumerate_partitions, CategoryId, ColoredWord, SetPartition};

mod cache;

pub use cache::WeingartenCache;

/// Arbitrary-precision rational; always normalized with a positive denominator.
pub type ExactScalar = BigRational;

pub(crate) fn int(n: impl Into<BigInt>) -> ExactScalar {
    BigRational::from_integer(n.into())
}

pub(crate) fn pow(base: usize, exp: usize) -> BigInt {
    num_traits::pow(BigInt::from(base), exp)
}

/// Dense row-major matrix of exact rationals.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<ExactScalar>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix {
            rows,
            cols,
            data: vec![ExactScalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = ExactScalar::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<ExactScalar>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::LengthMismatch {
                    expected: c,
                    actual: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(RationalMatrix { rows: r, cols: c, data })
    }

    /// Convenience constructor from small integers.
    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| int(x)).collect())
                .collect(),
        )
        .expect("ragged integer matrix")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &ExactScalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: ExactScalar) {
        self.data[r * self.cols + c] = value;
    }

    pub fn row(&self, r: usize) -> &[ExactScalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<ExactScalar>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c).clone();
            }
        }
        t
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|r| (0..r).all(|c| self.get(r, c) == self.get(c, r)))
    }

    /// Principal submatrix on the given row/column positions.
    pub fn restrict(&self, keep: &[usize]) -> Self {
        let mut m = Self::zeros(keep.len(), keep.len());
        for (i, &r) in keep.iter().enumerate() {
            for (j, &c) in keep.iter().enumerate() {
                m.data[i * keep.len() + j] = self.get(r, c).clone();
            }
        }
        m
    }

    /// Exact product, computed over a common denominator.
    pub fn mul(&self, other: &RationalMatrix) -> Result<RationalMatrix> {
        if self.cols != other.rows {
            return Err(Error::LengthMismatch {
                expected: self.cols,
                actual: other.rows,
            });
        }
        let a = ScaledMatrix::from_rational(self);
        let b = ScaledMatrix::from_rational(other);
        Ok(a.mul(&b).to_rational())
    }
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> = self
            .to_rows()
            .iter()
            .map(|r| r.iter().map(ToString::to_string).collect())
            .collect();
        write!(f, "RationalMatrix{rows:?}")
    }
}

/// `num / den` with an integer matrix `num`; the workhorse for exact products.
#[derive(Clone, Debug)]
pub(crate) struct ScaledMatrix {
    pub(crate) rows: usize,
    pub(crate) cols: usize,
    pub(crate) num: Vec<BigInt>,
    pub(crate) den: BigInt,
}

impl ScaledMatrix {
    pub(crate) fn from_rational(m: &RationalMatrix) -> Self {
        let den = m
            .data
            .iter()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let num = m
            .data
            .iter()
            .map(|x| x.numer() * (&den / x.denom()))
            .collect();
        ScaledMatrix {
            rows: m.rows,
            cols: m.cols,
            num,
            den,
        }
    }

    pub(crate) fn mul(&self, other: &ScaledMatrix) -> ScaledMatrix {
        let mut num = vec![BigInt::zero(); self.rows * other.cols];
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.num[r * self.cols + k];
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = &other.num[k * other.cols + c];
                    if !b.is_zero() {
                        num[r * other.cols + c] += a * b;
                    }
                }
            }
        }
        ScaledMatrix {
            rows: self.rows,
            cols: other.cols,
            num,
            den: &self.den * &other.den,
        }
    }

    pub(crate) fn to_rational(&self) -> RationalMatrix {
        RationalMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .num
                .iter()
                .map(|n| BigRational::new(n.clone(), self.den.clone()))
                .collect(),
        }
    }
}

/// Scales every row by the lcm of its denominators, giving an integer matrix.
fn integer_rows(m: &RationalMatrix) -> (Vec<Vec<BigInt>>, Vec<BigInt>) {
    let mut rows = Vec::with_capacity(m.rows);
    let mut scales = Vec::with_capacity(m.rows);
    for r in 0..m.rows {
        let row = m.row(r);
        let d = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        rows.push(row.iter().map(|x| x.numer() * (&d / x.denom())).collect());
        scales.push(d);
    }
    (rows, scales)
}

fn remove_content(v: &mut [BigInt]) {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in v.iter_mut() {
            *x /= &g;
        }
    }
}

/// Greedy maximal independent set of rows, scanning in order: a row is kept iff
/// it raises the rank of the rows kept so far. Decided by fraction-free
/// elimination with content removal.
pub fn independent_rows(m: &RationalMatrix) -> Vec<usize> {
    let (rows, _) = integer_rows(m);
    let mut echelon: Vec<(usize, Vec<BigInt>)> = Vec::new();
    let mut kept = Vec::new();
    for (r, mut v) in rows.into_iter().enumerate() {
        for (pivot, b) in &echelon {
            if v[*pivot].is_zero() {
                continue;
            }
            let g = v[*pivot].gcd(&b[*pivot]);
            let bv = &b[*pivot] / &g;
            let vv = &v[*pivot] / &g;
            for (x, y) in v.iter_mut().zip(b) {
                *x = &bv * &*x - &vv * y;
            }
            remove_content(&mut v);
        }
        if let Some(pivot) = v.iter().position(|x| !x.is_zero()) {
            echelon.push((pivot, v));
            kept.push(r);
        }
    }
    kept
}

pub fn rank(m: &RationalMatrix) -> usize {
    independent_rows(m).len()
}

/// Exact inverse by fraction-free Gauss-Jordan elimination on the row-scaled
/// integer matrix; every division in the sweep is exact.
pub fn solve_inverse(m: &RationalMatrix) -> Result<RationalMatrix> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    let n = m.rows;
    let (rows, scales) = integer_rows(m);
    let width = 2 * n;
    let mut a: Vec<Vec<BigInt>> = rows
        .into_iter()
        .enumerate()
        .map(|(i, mut row)| {
            row.extend((0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }));
            row
        })
        .collect();
    let mut prev = BigInt::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&r| !a[r][k].is_zero()) else {
            let independent = independent_rows(m);
            let row = (0..n)
                .zip(independent.iter().copied().chain(std::iter::repeat(usize::MAX)))
                .find(|(r, kept)| r != kept)
                .map_or(n - 1, |(r, _)| r);
            return Err(Error::Singular { row });
        };
        a.swap(k, p);
        let pivot_row = a[k].clone();
        let pivot = pivot_row[k].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == k {
                continue;
            }
            let factor = row[k].clone();
            for j in 0..width {
                let v = &pivot * &row[j] - &factor * &pivot_row[j];
                debug_assert!((&v % &prev).is_zero(), "inexact Bareiss division");
                row[j] = v / &prev;
            }
        }
        prev = pivot;
    }
    // Left block is now det * I (up to row swaps already applied).
    let mut inv = RationalMatrix::zeros(n, n);
    for (i, row) in a.iter().enumerate() {
        let d = &row[i];
        for j in 0..n {
            // (D A)^{-1} = A^{-1} D^{-1}, so undo the row scaling on the columns.
            let v = BigRational::new(&row[n + j] * &scales[j], d.clone());
            inv.set(i, j, v);
        }
    }
    Ok(inv)
}

/// Gram matrix `G(π, σ) = N^{|π ∨ σ|}` over the category's partitions of a word.
#[derive(Clone, Debug, PartialEq)]
pub struct GramMatrix {
    pub category: CategoryId,
    pub word: ColoredWord,
    pub n: usize,
    pub index: Vec<SetPartition>,
    pub entries: RationalMatrix,
}

pub fn gram_matrix(category: CategoryId, word: &ColoredWord, n: usize) -> Result<GramMatrix> {
    if n == 0 {
        return Err(Error::InvalidArgument("dimension N must be at least 1".into()));
    }
    let index = enumerate_partitions(category, word);
    let size = index.len();
    let mut entries = RationalMatrix::zeros(size, size);
    for i in 0..size {
        for j in i..size {
            let blocks = index[i].join(&index[j])?.block_count();
            let v = int(pow(n, blocks));
            entries.set(j, i, v.clone());
            entries.set(i, j, v);
        }
    }
    Ok(GramMatrix {
        category,
        word: word.clone(),
        n,
        index,
        entries,
    })
}

/// Reflexive generalized inverse of a Gram matrix, supported on a basis subset.
#[derive(Clone, Debug, PartialEq)]
pub struct WeingartenMatrix {
    pub gram: GramMatrix,
    /// Positions (into `gram.index`) of the partitions whose vectors form the basis.
    pub basis: Vec<usize>,
    pub entries: RationalMatrix,
}

impl WeingartenMatrix {
    pub fn index(&self) -> &[SetPartition] {
        &self.gram.index
    }

    pub fn is_full_rank(&self) -> bool {
        self.basis.len() == self.gram.index.len()
    }

    pub fn get(&self, pi: usize, sigma: usize) -> &ExactScalar {
        self.entries.get(pi, sigma)
    }
}

/// Inverts the Gram matrix, or, when it is singular, the restriction to the
/// greedy basis of independent rows (zeros elsewhere).
pub fn weingarten_matrix(gram: GramMatrix) -> Result<WeingartenMatrix> {
    let size = gram.index.len();
    let basis = independent_rows(&gram.entries);
    let restricted = gram.entries.restrict(&basis);
    let inv = solve_inverse(&restricted)?;
    let mut entries = RationalMatrix::zeros(size, size);
    for (i, &r) in basis.iter().enumerate() {
        for (j, &c) in basis.iter().enumerate() {
            entries.set(r, c, inv.get(i, j).clone());
        }
    }
    Ok(WeingartenMatrix {
        gram,
        basis,
        entries,
    })
}

/// The partition vector `ξ_π = Σ δ_π(i) e_{i_1} ⊗ ... ⊗ e_{i_k}` as a 0/1 array of length `N^k`.
/// Multi-indices are enumerated with the first leg most significant.
pub fn partition_vector(p: &SetPartition, n: usize) -> Vec<u8> {
    let k = p.ground_size();
    let len = n.pow(k as u32);
    let mut idx = vec![0usize; k];
    let mut out = Vec::with_capacity(len);
    for flat in 0..len {
        let mut rest = flat;
        for slot in idx.iter_mut().rev() {
            *slot = rest % n;
            rest /= n;
        }
        out.push(u8::from(p.fits(&idx)));
    }
    out
}

/// Materialized reconstruction operator `Σ_{π,σ} W(π,σ) ξ_π ξ_σ*` on `(C^N)^{⊗k}`.
pub fn reconstruction_operator(w: &WeingartenMatrix) -> RationalMatrix {
    let n = w.gram.n;
    let vectors: Vec<Vec<u8>> = w
        .basis
        .iter()
        .map(|&b| partition_vector(&w.gram.index[b], n))
        .collect();
    let dim = n.pow(w.gram.word.len() as u32);
    let weights = ScaledMatrix::from_rational(&w.entries.restrict(&w.basis));
    let b = w.basis.len();
    let mut num = vec![BigInt::zero(); dim * dim];
    for (i, xi) in vectors.iter().enumerate() {
        for (j, xj) in vectors.iter().enumerate() {
            let c = &weights.num[i * b + j];
            if c.is_zero() {
                continue;
            }
            for (a, _) in xi.iter().enumerate().filter(|(_, &v)| v == 1) {
                for (bb, _) in xj.iter().enumerate().filter(|(_, &v)| v == 1) {
                    num[a * dim + bb] += c;
                }
            }
        }
    }
    ScaledMatrix {
        rows: dim,
        cols: dim,
        num,
        den: weights.den,
    }
    .to_rational()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> ExactScalar {
        BigRational::new(n.into(), d.into())
    }

    fn w(s: &str) -> ColoredWord {
        s.parse().unwrap()
    }

    #[test]
    fn inverse_examples() {
        let id = RationalMatrix::identity(3);
        assert_eq!(solve_inverse(&id).unwrap(), id);
        let m = RationalMatrix::from_i64(&[vec![2, 1], vec![1, 1]]);
        assert_eq!(
            solve_inverse(&m).unwrap(),
            RationalMatrix::from_i64(&[vec![1, -1], vec![-1, 2]])
        );
    }

    #[test]
    fn hilbert_inverse() {
        let h = RationalMatrix::from_rows(
            (0..3)
                .map(|i| (0..3).map(|j| q(1, i + j + 1)).collect())
                .collect(),
        )
        .unwrap();
        let inv = solve_inverse(&h).unwrap();
        let expected = RationalMatrix::from_i64(&[
            vec![9, -36, 30],
            vec![-36, 192, -180],
            vec![30, -180, 180],
        ]);
        assert_eq!(inv, expected);
        assert_eq!(h.mul(&inv).unwrap(), RationalMatrix::identity(3));
    }

    #[test]
    fn inverse_needs_pivoting() {
        let m = RationalMatrix::from_i64(&[vec![0, 1, 2], vec![1, 0, 3], vec![4, -3, 8]]);
        let inv = solve_inverse(&m).unwrap();
        assert_eq!(m.mul(&inv).unwrap(), RationalMatrix::identity(3));
    }

    #[test]
    fn singular_names_first_dependent_row() {
        let m = RationalMatrix::from_i64(&[vec![1, 2, 3], vec![2, 4, 6], vec![0, 1, 1]]);
        assert!(matches!(solve_inverse(&m), Err(Error::Singular { row: 1 })));
        let m = RationalMatrix::from_i64(&[vec![1, 0, 1], vec![0, 1, 1], vec![1, 1, 2]]);
        assert!(matches!(solve_inverse(&m), Err(Error::Singular { row: 2 })));
        assert!(matches!(
            solve_inverse(&RationalMatrix::zeros(2, 3)),
            Err(Error::NotSquare { .. })
        ));
    }

    #[test]
    fn empty_matrix_inverts() {
        let m = RationalMatrix::zeros(0, 0);
        assert_eq!(solve_inverse(&m).unwrap().rows(), 0);
    }

    #[test]
    fn gram_examples() {
        let g = gram_matrix(CategoryId::U, &w("ob"), 7).unwrap();
        assert_eq!(g.entries, RationalMatrix::from_i64(&[vec![7]]));
        let g = gram_matrix(CategoryId::OPlus, &w("oooo"), 5).unwrap();
        assert_eq!(g.entries, RationalMatrix::from_i64(&[vec![25, 5], vec![5, 25]]));
        let g = gram_matrix(CategoryId::S, &w("oo"), 3).unwrap();
        assert_eq!(
            g.index.iter().map(ToString::to_string).collect::<Vec<_>>(),
            ["12", "1|2"]
        );
        assert_eq!(g.entries, RationalMatrix::from_i64(&[vec![3, 3], vec![3, 9]]));
        // listed as (1|2, 12) the same matrix reads [[9, 3], [3, 3]]
        let swapped = RationalMatrix::from_rows(vec![
            vec![g.entries.get(1, 1).clone(), g.entries.get(1, 0).clone()],
            vec![g.entries.get(0, 1).clone(), g.entries.get(0, 0).clone()],
        ])
        .unwrap();
        assert_eq!(swapped, RationalMatrix::from_i64(&[vec![9, 3], vec![3, 3]]));
        assert!(gram_matrix(CategoryId::U, &w("oo"), 3).unwrap().index.is_empty());
    }

    #[test]
    fn weingarten_examples() {
        let wm = weingarten_matrix(gram_matrix(CategoryId::U, &w("ob"), 7).unwrap()).unwrap();
        assert_eq!(*wm.get(0, 0), q(1, 7));
        for n in 2..6i64 {
            let wm = weingarten_matrix(gram_matrix(CategoryId::OPlus, &w("oooo"), n as usize).unwrap())
                .unwrap();
            let c = n * n * (n * n - 1);
            assert_eq!(*wm.get(0, 0), q(n * n, c));
            assert_eq!(*wm.get(0, 1), q(-n, c));
            assert_eq!(
                wm.gram.entries.mul(&wm.entries).unwrap(),
                RationalMatrix::identity(2)
            );
        }
    }

    #[test]
    fn singular_gram_uses_greedy_basis() {
        let g = gram_matrix(CategoryId::S, &w("ooo"), 2).unwrap();
        let r = rank(&g.entries);
        // at N = 2 no triple has three distinct values, so ξ_{1|2|3} lies in
        // the span of the other four vectors
        assert_eq!(r, 4);
        let wm = weingarten_matrix(g).unwrap();
        assert_eq!(wm.basis.len(), r);
        let gg = &wm.gram.entries;
        assert_eq!(gg.mul(&wm.entries).unwrap().mul(gg).unwrap(), *gg);
        assert_eq!(
            wm.entries.mul(gg).unwrap().mul(&wm.entries).unwrap(),
            wm.entries
        );
    }

    #[test]
    fn partition_vector_layout() {
        let p: SetPartition = "12".parse().unwrap();
        assert_eq!(partition_vector(&p, 2), vec![1, 0, 0, 1]);
        let p: SetPartition = "1|2".parse().unwrap();
        assert_eq!(partition_vector(&p, 2), vec![1, 1, 1, 1]);
    }
}
