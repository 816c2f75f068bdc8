//! Dense nonnegative matrices and the entrywise (Hadamard) constructions
//! the inequality suites are built from.
//!
//! Storage is row-major `Vec<f64>`. Entries are validated nonnegative and
//! finite at construction and the type exposes no mutation, so a value can
//! be shared freely across threads. Entrywise powers follow the convention
//! `0^0 = 1`, and `0^a = 0` exactly for `a > 0` — no epsilon flooring
//! anywhere, which keeps zero patterns (and hence exact-zero spectral radii)
//! intact through every construction.

use crate::error::{Error, Result};

/// Hard cap on matrix dimension. Everything here is dense and O(n^3).
pub const MAX_DIM: usize = 256;

/// Slack allowed when validating weight sums.
const WEIGHT_SUM_TOL: f64 = 1e-12;

/// Square matrix with nonnegative finite entries, immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct NonNegativeMatrix {
    n: usize,
    data: Vec<f64>,
}

impl NonNegativeMatrix {
    /// Builds from row-major data, rejecting negative, NaN or infinite
    /// entries and any shape that is not square with 1 <= n <= 256.
    pub fn new(n: usize, data: Vec<f64>) -> Result<Self> {
        if n == 0 || n > MAX_DIM {
            return Err(Error::BadDimension { n });
        }
        if data.len() != n * n {
            return Err(Error::DataShape { expected: n * n, got: data.len() });
        }
        for (idx, &v) in data.iter().enumerate() {
            let (row, col) = (idx / n, idx % n);
            if v.is_infinite() {
                return Err(Error::NonFiniteEntry { row, col, value: v });
            }
            if !(v >= 0.0) {
                return Err(Error::NegativeEntry { row, col, value: v });
            }
        }
        Ok(Self { n, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::DataShape { expected: n * n, got: row.len() * n });
            }
            data.extend_from_slice(row);
        }
        Self::new(n, data)
    }

    pub fn identity(n: usize) -> Self {
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            data[i * n + i] = 1.0;
        }
        Self { n, data }
    }

    pub fn zero(n: usize) -> Self {
        Self { n, data: vec![0.0; n * n] }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    /// Row-major view of all entries.
    #[inline]
    pub fn entries(&self) -> &[f64] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0.0)
    }

    pub fn max_entry(&self) -> f64 {
        self.data.iter().cloned().fold(0.0, f64::max)
    }

    /// Largest row sum; the l-infinity operator norm.
    pub fn max_row_sum(&self) -> f64 {
        (0..self.n)
            .map(|i| self.data[i * self.n..(i + 1) * self.n].iter().sum())
            .fold(0.0, f64::max)
    }

    /// Largest column sum; the l-1 operator norm.
    pub fn max_col_sum(&self) -> f64 {
        let mut sums = vec![0.0; self.n];
        for i in 0..self.n {
            for j in 0..self.n {
                sums[j] += self.data[i * self.n + j];
            }
        }
        sums.into_iter().fold(0.0, f64::max)
    }

    /// Entrywise product.
    pub fn hadamard(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| a * b)
            .collect();
        Ok(Self { n: self.n, data })
    }

    /// Entrywise power with the convention `0^0 = 1`, so exponent 0 yields
    /// the all-ones matrix regardless of zeros; `0^a = 0` exactly for a > 0.
    pub fn hadamard_power(&self, alpha: f64) -> Result<Self> {
        if !(alpha >= 0.0) {
            return Err(Error::NegativeExponent { alpha });
        }
        let data = self.data.iter().map(|&a| a.powf(alpha)).collect();
        Ok(Self { n: self.n, data })
    }

    /// Ordinary matrix product; nonnegativity is preserved.
    pub fn matmul(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let n = self.n;
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for k in 0..n {
                let aik = self.data[i * n + k];
                if aik == 0.0 {
                    continue;
                }
                let brow = &other.data[k * n..(k + 1) * n];
                let crow = &mut data[i * n..(i + 1) * n];
                for j in 0..n {
                    crow[j] += aik * brow[j];
                }
            }
        }
        Ok(Self { n, data })
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                data[j * n + i] = self.data[i * n + j];
            }
        }
        Self { n, data }
    }

    /// Gram matrix `A^T A`; symmetric, positive semidefinite, nonnegative.
    pub fn gram(&self) -> Self {
        self.transpose().matmul(self).expect("same dimension")
    }

    /// `(A + A^T) / 2`.
    pub fn symmetric_part(&self) -> Self {
        let n = self.n;
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                data[i * n + j] = 0.5 * (self.data[i * n + j] + self.data[j * n + i]);
            }
        }
        Self { n, data }
    }

    /// k-th ordinary power; k = 0 gives the identity.
    pub fn matrix_power(&self, k: usize) -> Self {
        let mut acc = Self::identity(self.n);
        for _ in 0..k {
            acc = acc.matmul(self).expect("same dimension");
        }
        acc
    }

    /// True when the support digraph is acyclic, i.e. the matrix is
    /// nilpotent. For nonnegative matrices the support of a product equals
    /// the boolean product of supports (no cancellation can occur), so this
    /// is exact: it holds iff the spectral radius is exactly zero.
    pub fn is_nilpotent_pattern(&self) -> bool {
        let n = self.n;
        let words = n.div_ceil(64);
        let mut pat: Vec<u64> = vec![0; n * words];
        for i in 0..n {
            for j in 0..n {
                if self.data[i * self.n + j] != 0.0 {
                    pat[i * words + j / 64] |= 1 << (j % 64);
                }
            }
        }
        // Square the boolean pattern until the exponent reaches n.
        let mut reach = 1usize;
        while reach < n {
            let mut next = vec![0u64; n * words];
            for i in 0..n {
                for j in 0..n {
                    if pat[i * words + j / 64] >> (j % 64) & 1 == 1 {
                        for w in 0..words {
                            next[i * words + w] |= pat[j * words + w];
                        }
                    }
                }
            }
            pat = next;
            reach *= 2;
        }
        pat.iter().all(|&w| w == 0)
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { left: self.n, right: other.n });
        }
        Ok(())
    }
}

/// Declared constraint on a weight vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightConstraint {
    /// Weights sum to 1 (within 1e-12).
    SumOne,
    /// Weights sum to at least 1 (within 1e-12 below).
    SumAtLeastOne,
}

impl WeightConstraint {
    pub fn tag(&self) -> &'static str {
        match self {
            WeightConstraint::SumOne => "sum1",
            WeightConstraint::SumAtLeastOne => "sumge1",
        }
    }
}

/// Strictly positive weights with a validated sum constraint.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector {
    weights: Vec<f64>,
    constraint: WeightConstraint,
}

impl WeightVector {
    pub fn new(weights: Vec<f64>, constraint: WeightConstraint) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::EmptyList);
        }
        for (index, &w) in weights.iter().enumerate() {
            if !(w > 0.0) || !w.is_finite() {
                return Err(Error::NonPositiveWeight { index, value: w });
            }
        }
        let sum: f64 = weights.iter().sum();
        match constraint {
            WeightConstraint::SumOne => {
                if (sum - 1.0).abs() > WEIGHT_SUM_TOL {
                    return Err(Error::WeightSum { sum, required: "sum = 1" });
                }
            }
            WeightConstraint::SumAtLeastOne => {
                if sum < 1.0 - WEIGHT_SUM_TOL {
                    return Err(Error::WeightSum { sum, required: "sum >= 1" });
                }
            }
        }
        Ok(Self { weights, constraint })
    }

    /// Equal weights 1/m, tagged SumOne.
    pub fn equal(m: usize) -> Self {
        let w = vec![1.0 / m as f64; m];
        Self::new(w, WeightConstraint::SumOne).expect("equal weights are valid")
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn sum(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn constraint(&self) -> WeightConstraint {
        self.constraint
    }
}

/// Entrywise weighted geometric mean `prod_j A_j^(a_j)`.
pub fn weighted_geometric_mean(
    mats: &[NonNegativeMatrix],
    w: &WeightVector,
) -> Result<NonNegativeMatrix> {
    if mats.is_empty() {
        return Err(Error::EmptyList);
    }
    if mats.len() != w.len() {
        return Err(Error::WeightCount { mats: mats.len(), weights: w.len() });
    }
    let n = mats[0].n();
    let mut acc = NonNegativeMatrix::identity(n).hadamard_power(0.0)?; // all-ones
    for (m, &a) in mats.iter().zip(w.weights()) {
        acc = acc.hadamard(&m.hadamard_power(a)?)?;
    }
    Ok(acc)
}

/// Weighted geometric mean of the list rotated to start at `start`
/// (1-based): weight j multiplies the (start + j - 1)-th operator, indices
/// cyclic.
pub fn rotated_geometric_mean(
    mats: &[NonNegativeMatrix],
    w: &WeightVector,
    start: usize,
) -> Result<NonNegativeMatrix> {
    let m = mats.len();
    if m == 0 {
        return Err(Error::EmptyList);
    }
    if start == 0 || start > m {
        return Err(Error::IndexOutOfRange { index: start, len: m });
    }
    let rotated: Vec<NonNegativeMatrix> =
        (0..m).map(|k| mats[(start - 1 + k) % m].clone()).collect();
    weighted_geometric_mean(&rotated, w)
}

/// Ordinary product of the list rotated to start at `start` (1-based):
/// `A_start ... A_m A_1 ... A_(start-1)`.
pub fn cyclic_product(mats: &[NonNegativeMatrix], start: usize) -> Result<NonNegativeMatrix> {
    let m = mats.len();
    if m == 0 {
        return Err(Error::EmptyList);
    }
    if start == 0 || start > m {
        return Err(Error::IndexOutOfRange { index: start, len: m });
    }
    let mut acc = mats[start - 1].clone();
    for k in 1..m {
        acc = acc.matmul(&mats[(start - 1 + k) % m])?;
    }
    Ok(acc)
}

/// Length-`len` product of cyclically consecutive operators starting at
/// `start` (1-based), transposing every factor at even position when
/// `transpose_even` is set (positions count from 0) and every odd position
/// otherwise.
pub fn alternating_cyclic_product(
    mats: &[NonNegativeMatrix],
    start: usize,
    len: usize,
    transpose_even: bool,
) -> Result<NonNegativeMatrix> {
    let m = mats.len();
    if m == 0 {
        return Err(Error::EmptyList);
    }
    if start == 0 || start > m {
        return Err(Error::IndexOutOfRange { index: start, len: m });
    }
    let mut acc = NonNegativeMatrix::identity(mats[0].n());
    for k in 0..len {
        let mat = &mats[(start - 1 + k) % m];
        let factor = if (k % 2 == 0) == transpose_even { mat.transpose() } else { mat.clone() };
        acc = acc.matmul(&factor)?;
    }
    Ok(acc)
}

/// The descending alternating product `A_m A_(m-1)^T ... A_2 A_1^T` for
/// even-length lists.
pub fn reversed_alternating_product(mats: &[NonNegativeMatrix]) -> Result<NonNegativeMatrix> {
    let m = mats.len();
    if m == 0 {
        return Err(Error::EmptyList);
    }
    if m % 2 != 0 {
        return Err(Error::ParityMismatch { len: m, required: "even" });
    }
    let mut acc = NonNegativeMatrix::identity(mats[0].n());
    for p in 0..m {
        let mat = &mats[m - 1 - p];
        let factor = if p % 2 == 1 { mat.transpose() } else { mat.clone() };
        acc = acc.matmul(&factor)?;
    }
    Ok(acc)
}

/// Hadamard mean, with exponent `alpha` on every factor, of the m cyclic
/// shifts of the alternating-transpose product of an even-length list.
/// Shift i contributes `A_i^T A_(i+1) A_(i+2)^T ... A_(i-1)` (length m,
/// transposes on even positions).
pub fn alternating_product_mean_even_pow(
    mats: &[NonNegativeMatrix],
    alpha: f64,
) -> Result<NonNegativeMatrix> {
    let m = mats.len();
    if m == 0 {
        return Err(Error::EmptyList);
    }
    if m % 2 != 0 {
        return Err(Error::ParityMismatch { len: m, required: "even" });
    }
    let min = 1.0 / m as f64;
    if alpha < min - 1e-15 {
        return Err(Error::ExponentRange { alpha, min });
    }
    let mut acc = NonNegativeMatrix::identity(mats[0].n()).hadamard_power(0.0)?;
    for i in 1..=m {
        let factor = alternating_cyclic_product(mats, i, m, true)?;
        acc = acc.hadamard(&factor.hadamard_power(alpha)?)?;
    }
    Ok(acc)
}

/// Hadamard (1/m)-mean of the cyclic alternating-transpose products of an
/// even-length list.
pub fn alternating_product_mean_even(mats: &[NonNegativeMatrix]) -> Result<NonNegativeMatrix> {
    if mats.is_empty() {
        return Err(Error::EmptyList);
    }
    alternating_product_mean_even_pow(mats, 1.0 / mats.len() as f64)
}

/// Odd-length analogue: each of the m shifts contributes the length-2m
/// alternating-transpose product starting at that index (transposes again on
/// even positions), and the m factors are Hadamard-combined with exponent
/// `alpha` each.
pub fn alternating_product_mean_odd_pow(
    mats: &[NonNegativeMatrix],
    alpha: f64,
) -> Result<NonNegativeMatrix> {
    let m = mats.len();
    if m == 0 {
        return Err(Error::EmptyList);
    }
    if m % 2 != 1 {
        return Err(Error::ParityMismatch { len: m, required: "odd" });
    }
    let min = 1.0 / m as f64;
    if alpha < min - 1e-15 {
        return Err(Error::ExponentRange { alpha, min });
    }
    let mut acc = NonNegativeMatrix::identity(mats[0].n()).hadamard_power(0.0)?;
    for i in 1..=m {
        let factor = alternating_cyclic_product(mats, i, 2 * m, true)?;
        acc = acc.hadamard(&factor.hadamard_power(alpha)?)?;
    }
    Ok(acc)
}

/// Hadamard (1/m)-mean of the length-2m alternating products of an
/// odd-length list.
pub fn alternating_product_mean_odd(mats: &[NonNegativeMatrix]) -> Result<NonNegativeMatrix> {
    if mats.is_empty() {
        return Err(Error::EmptyList);
    }
    alternating_product_mean_odd_pow(mats, 1.0 / mats.len() as f64)
}

/// Outcome of an entrywise `A <= B` comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntrywiseCheck {
    pub pass: bool,
    /// Largest value of `a_ij - b_ij - tol*max(1, b_ij)`; positive means a
    /// violation of that size.
    pub worst_excess: f64,
    pub worst_index: (usize, usize),
    pub lhs_at_worst: f64,
    pub rhs_at_worst: f64,
}

/// Entrywise comparison `a_ij <= b_ij + tol*max(1, b_ij)` with the worst
/// offender reported.
pub fn entrywise_leq(
    a: &NonNegativeMatrix,
    b: &NonNegativeMatrix,
    tol: f64,
) -> Result<EntrywiseCheck> {
    if a.n() != b.n() {
        return Err(Error::DimensionMismatch { left: a.n(), right: b.n() });
    }
    let n = a.n();
    let mut worst = f64::NEG_INFINITY;
    let mut at = (0, 0);
    for i in 0..n {
        for j in 0..n {
            let excess = a.get(i, j) - b.get(i, j) - tol * b.get(i, j).max(1.0);
            if excess > worst {
                worst = excess;
                at = (i, j);
            }
        }
    }
    Ok(EntrywiseCheck {
        pass: worst <= 0.0,
        worst_excess: worst,
        worst_index: at,
        lhs_at_worst: a.get(at.0, at.1),
        rhs_at_worst: b.get(at.0, at.1),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m2(rows: [[f64; 2]; 2]) -> NonNegativeMatrix {
        NonNegativeMatrix::from_rows(&[rows[0].to_vec(), rows[1].to_vec()]).unwrap()
    }

    fn assert_close(a: &NonNegativeMatrix, b: &NonNegativeMatrix, tol: f64) {
        assert_eq!(a.n(), b.n());
        for (x, y) in a.entries().iter().zip(b.entries()) {
            assert!(
                (x - y).abs() <= tol * y.abs().max(1.0),
                "entries differ: {x} vs {y}"
            );
        }
    }

    #[test]
    fn construction_rejects_bad_input() {
        assert!(NonNegativeMatrix::new(2, vec![0.0, 1.0, -0.5, 2.0]).is_err());
        assert!(NonNegativeMatrix::new(2, vec![0.0, f64::NAN, 0.0, 0.0]).is_err());
        assert!(NonNegativeMatrix::new(2, vec![0.0, f64::INFINITY, 0.0, 0.0]).is_err());
        assert!(NonNegativeMatrix::new(2, vec![1.0; 3]).is_err());
        assert!(NonNegativeMatrix::new(0, vec![]).is_err());
        assert!(NonNegativeMatrix::new(257, vec![0.0; 257 * 257]).is_err());
    }

    #[test]
    fn hadamard_product_examples() {
        let i2 = NonNegativeMatrix::identity(2);
        assert_eq!(i2.hadamard(&i2).unwrap(), i2);

        let a = m2([[0.0, 1.0], [0.0, 1.0]]);
        let b = m2([[1.0, 1.0], [0.0, 0.0]]);
        assert_eq!(a.hadamard(&b).unwrap(), m2([[0.0, 1.0], [0.0, 0.0]]));

        let c = m2([[1.0, 2.0], [3.0, 4.0]]);
        let d = m2([[4.0, 3.0], [2.0, 1.0]]);
        assert_eq!(c.hadamard(&d).unwrap(), m2([[4.0, 6.0], [6.0, 4.0]]));

        let e = NonNegativeMatrix::identity(3);
        assert!(matches!(
            c.hadamard(&e),
            Err(Error::DimensionMismatch { left: 2, right: 3 })
        ));
    }

    #[test]
    fn hadamard_power_examples() {
        let a = m2([[4.0, 9.0], [0.0, 1.0]]);
        assert_eq!(a.hadamard_power(0.5).unwrap(), m2([[2.0, 3.0], [0.0, 1.0]]));

        // 0^0 = 1: exponent 0 gives all-ones even with zero entries.
        let z = m2([[0.0, 5.0], [7.0, 0.0]]);
        assert_eq!(z.hadamard_power(0.0).unwrap(), m2([[1.0, 1.0], [1.0, 1.0]]));

        let b = m2([[0.3, 1.7], [0.0, 2.2]]);
        assert_eq!(b.hadamard_power(1.0).unwrap(), b);

        assert!(b.hadamard_power(-0.1).is_err());
    }

    #[test]
    fn weighted_geometric_mean_examples() {
        let a = m2([[0.5, 2.0], [3.0, 0.0]]);
        let w = WeightVector::equal(2);
        let mean = weighted_geometric_mean(&[a.clone(), a.clone()], &w).unwrap();
        assert_close(&mean, &a, 1e-15);

        let p = m2([[1.0, 4.0], [9.0, 16.0]]);
        let q = m2([[4.0, 1.0], [1.0, 4.0]]);
        let mean = weighted_geometric_mean(&[p, q], &w).unwrap();
        assert_eq!(mean, m2([[2.0, 2.0], [3.0, 8.0]]));

        assert!(weighted_geometric_mean(&[], &w).is_err());
    }

    #[test]
    fn weighted_geometric_mean_matches_scalar_oracle() {
        // Three matrices, equal thirds: entrywise cube root of the products.
        let mats = [
            m2([[0.2, 1.3], [2.5, 0.0]]),
            m2([[1.1, 0.4], [0.9, 3.0]]),
            m2([[2.2, 0.7], [1.5, 0.8]]),
        ];
        let w = WeightVector::equal(3);
        let mean = weighted_geometric_mean(&mats, &w).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let scalar = mats
                    .iter()
                    .map(|m| m.get(i, j).powf(1.0 / 3.0))
                    .product::<f64>();
                assert!((mean.get(i, j) - scalar).abs() <= 1e-14);
            }
        }
    }

    #[test]
    fn matmul_transpose_identity() {
        let a = m2([[0.0, 1.0], [0.0, 1.0]]);
        let b = m2([[1.0, 1.0], [0.0, 0.0]]);
        // Used by the closing counterexample: the triple product collapses.
        assert_eq!(a.matmul(&b).unwrap(), NonNegativeMatrix::zero(2));

        let c = m2([[1.0, 2.0], [3.0, 4.0]]);
        assert_eq!(c.transpose(), m2([[1.0, 3.0], [2.0, 4.0]]));
        assert_eq!(c.matmul(&NonNegativeMatrix::identity(2)).unwrap(), c);
    }

    #[test]
    fn rotated_mean_follows_cyclic_order() {
        let a1 = m2([[1.0, 2.0], [3.0, 4.0]]);
        let a2 = m2([[0.5, 1.5], [2.5, 3.5]]);
        let w = WeightVector::new(vec![0.7, 0.3], WeightConstraint::SumOne).unwrap();
        // start = 2 puts weight 1 on the second operator.
        let got = rotated_geometric_mean(&[a1.clone(), a2.clone()], &w, 2).unwrap();
        let expect = a2
            .hadamard_power(0.7)
            .unwrap()
            .hadamard(&a1.hadamard_power(0.3).unwrap())
            .unwrap();
        assert_eq!(got, expect);

        // Equal weights: every rotation is the same matrix.
        let weq = WeightVector::equal(2);
        let r1 = rotated_geometric_mean(&[a1.clone(), a2.clone()], &weq, 1).unwrap();
        let r2 = rotated_geometric_mean(&[a1.clone(), a2.clone()], &weq, 2).unwrap();
        assert_close(&r1, &r2, 1e-15);

        assert!(rotated_geometric_mean(&[a1, a2], &w, 3).is_err());
    }

    #[test]
    fn rotated_mean_scalar_oracle_m3() {
        let mats = [
            m2([[0.2, 1.3], [2.5, 0.4]]),
            m2([[1.1, 0.4], [0.9, 3.0]]),
            m2([[2.2, 0.7], [1.5, 0.8]]),
        ];
        let w = WeightVector::new(vec![0.5, 0.3, 0.2], WeightConstraint::SumOne).unwrap();
        let got = rotated_geometric_mean(&mats, &w, 2).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let scalar = mats[1].get(i, j).powf(0.5)
                    * mats[2].get(i, j).powf(0.3)
                    * mats[0].get(i, j).powf(0.2);
                assert!((got.get(i, j) - scalar).abs() <= 1e-14);
            }
        }
    }

    #[test]
    fn cyclic_product_examples() {
        let a1 = m2([[1.0, 2.0], [0.0, 1.0]]);
        let a2 = m2([[0.0, 1.0], [1.0, 0.0]]);
        let a3 = m2([[2.0, 0.0], [0.0, 3.0]]);
        let mats = [a1.clone(), a2.clone(), a3.clone()];

        let p2 = cyclic_product(&mats, 2).unwrap();
        assert_eq!(p2, a2.matmul(&a3).unwrap().matmul(&a1).unwrap());

        let p1 = cyclic_product(&mats, 1).unwrap();
        assert_eq!(p1, a1.matmul(&a2).unwrap().matmul(&a3).unwrap());

        let eyes = [NonNegativeMatrix::identity(2); 1];
        assert_eq!(cyclic_product(&eyes, 1).unwrap(), NonNegativeMatrix::identity(2));

        assert!(cyclic_product(&mats, 4).is_err());
        assert!(cyclic_product(&mats, 0).is_err());
    }

    #[test]
    fn gram_examples() {
        let a = m2([[0.0, 1.0], [0.0, 1.0]]);
        assert_eq!(a.gram(), m2([[0.0, 0.0], [0.0, 2.0]]));
        let i2 = NonNegativeMatrix::identity(2);
        assert_eq!(i2.gram(), i2);

        let b = m2([[0.3, 1.9], [2.4, 0.6]]);
        let s = b.gram();
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(s.get(i, j), s.get(j, i));
            }
        }
    }

    #[test]
    fn alternating_mean_even_m2_is_composition() {
        let a1 = m2([[0.4, 1.2], [2.0, 0.3]]);
        let a2 = m2([[1.5, 0.2], [0.7, 2.4]]);
        let got = alternating_product_mean_even(&[a1.clone(), a2.clone()]).unwrap();
        let expect = a1
            .transpose()
            .matmul(&a2)
            .unwrap()
            .hadamard_power(0.5)
            .unwrap()
            .hadamard(
                &a2.transpose()
                    .matmul(&a1)
                    .unwrap()
                    .hadamard_power(0.5)
                    .unwrap(),
            )
            .unwrap();
        assert_eq!(got, expect);
    }

    #[test]
    fn alternating_mean_even_m4_transcription() {
        let mats = [
            m2([[0.4, 1.2], [2.0, 0.3]]),
            m2([[1.5, 0.2], [0.7, 2.4]]),
            m2([[0.9, 0.0], [1.1, 0.5]]),
            m2([[0.1, 2.2], [0.8, 1.3]]),
        ];
        let [ref a1, ref a2, ref a3, ref a4] = mats;
        let t = |m: &NonNegativeMatrix| m.transpose();
        let prod = |ms: &[&NonNegativeMatrix]| {
            ms[1..].iter().fold((*ms[0]).clone(), |acc, m| acc.matmul(m).unwrap())
        };
        // Literal factor-by-factor transcription of the four shifts.
        let f1 = prod(&[&t(a1), a2, &t(a3), a4]);
        let f2 = prod(&[&t(a2), a3, &t(a4), a1]);
        let f3 = prod(&[&t(a3), a4, &t(a1), a2]);
        let f4 = prod(&[&t(a4), a1, &t(a2), a3]);
        let quarter = 1.0 / 4.0;
        let expect = f1
            .hadamard_power(quarter)
            .unwrap()
            .hadamard(&f2.hadamard_power(quarter).unwrap())
            .unwrap()
            .hadamard(&f3.hadamard_power(quarter).unwrap())
            .unwrap()
            .hadamard(&f4.hadamard_power(quarter).unwrap())
            .unwrap();
        let got = alternating_product_mean_even(&mats).unwrap();
        assert_close(&got, &expect, 1e-14);

        let eyes = vec![NonNegativeMatrix::identity(2); 4];
        assert_eq!(
            alternating_product_mean_even(&eyes).unwrap(),
            NonNegativeMatrix::identity(2)
        );
        assert!(alternating_product_mean_even(&mats[..3]).is_err());
    }

    #[test]
    fn alternating_mean_odd_examples() {
        // m = 1 degenerates to the gram matrix.
        let a = m2([[0.4, 1.2], [2.0, 0.3]]);
        let got = alternating_product_mean_odd(std::slice::from_ref(&a)).unwrap();
        assert_close(&got, &a.gram(), 1e-14);

        // m = 3: three length-6 factors.
        let mats = [
            m2([[0.4, 1.2], [2.0, 0.3]]),
            m2([[1.5, 0.2], [0.7, 2.4]]),
            m2([[0.9, 0.1], [1.1, 0.5]]),
        ];
        let [ref a1, ref a2, ref a3] = mats;
        let t = |m: &NonNegativeMatrix| m.transpose();
        let prod = |ms: &[&NonNegativeMatrix]| {
            ms[1..].iter().fold((*ms[0]).clone(), |acc, m| acc.matmul(m).unwrap())
        };
        let g1 = prod(&[&t(a1), a2, &t(a3), a1, &t(a2), a3]);
        let g2 = prod(&[&t(a2), a3, &t(a1), a2, &t(a3), a1]);
        let g3 = prod(&[&t(a3), a1, &t(a2), a3, &t(a1), a2]);
        let third = 1.0 / 3.0;
        let expect = g1
            .hadamard_power(third)
            .unwrap()
            .hadamard(&g2.hadamard_power(third).unwrap())
            .unwrap()
            .hadamard(&g3.hadamard_power(third).unwrap())
            .unwrap();
        let got = alternating_product_mean_odd(&mats).unwrap();
        assert_close(&got, &expect, 1e-14);

        assert!(alternating_product_mean_odd(&mats[..2]).is_err());
    }

    #[test]
    fn alternating_mean_pow_specializes_and_validates() {
        let mats = [
            m2([[0.4, 1.2], [2.0, 0.3]]),
            m2([[1.5, 0.2], [0.7, 2.4]]),
        ];
        let plain = alternating_product_mean_even(&mats).unwrap();
        let pow = alternating_product_mean_even_pow(&mats, 0.5).unwrap();
        assert_eq!(plain, pow);

        // alpha = 1 on two operators: (A1^T A2) o (A2^T A1).
        let full = alternating_product_mean_even_pow(&mats, 1.0).unwrap();
        let expect = mats[0]
            .transpose()
            .matmul(&mats[1])
            .unwrap()
            .hadamard(&mats[1].transpose().matmul(&mats[0]).unwrap())
            .unwrap();
        assert_close(&full, &expect, 1e-14);

        assert!(alternating_product_mean_even_pow(&mats, 0.4).is_err());
        let odd = [mats[0].clone()];
        assert!(alternating_product_mean_odd_pow(&odd, 0.5).is_ok());
        assert!(alternating_product_mean_odd_pow(&odd, 0.9).is_err());
    }

    #[test]
    fn entrywise_leq_examples() {
        let a = m2([[0.0, 1.0], [0.0, 0.0]]);
        let z = NonNegativeMatrix::zero(2);
        let refl = entrywise_leq(&a, &a, 0.0).unwrap();
        assert!(refl.pass);

        let bad = entrywise_leq(&a, &z, 0.0).unwrap();
        assert!(!bad.pass);
        assert_eq!(bad.worst_excess, 1.0);
        assert_eq!(bad.worst_index, (0, 1));
    }

    #[test]
    fn weight_vector_validation() {
        assert!(WeightVector::new(vec![0.5, 0.5], WeightConstraint::SumOne).is_ok());
        assert!(WeightVector::new(vec![0.5, 0.6], WeightConstraint::SumOne).is_err());
        assert!(WeightVector::new(vec![0.5, 0.6], WeightConstraint::SumAtLeastOne).is_ok());
        assert!(WeightVector::new(vec![0.5, 0.4], WeightConstraint::SumAtLeastOne).is_err());
        assert!(WeightVector::new(vec![0.5, 0.0, 0.5], WeightConstraint::SumOne).is_err());
        assert!(WeightVector::new(vec![], WeightConstraint::SumOne).is_err());
        assert!(WeightVector::new(vec![1.0, 1.0], WeightConstraint::SumAtLeastOne).is_ok());
    }

    #[test]
    fn nilpotent_pattern_detection() {
        assert!(NonNegativeMatrix::zero(3).is_nilpotent_pattern());
        assert!(m2([[0.0, 1.0], [0.0, 0.0]]).is_nilpotent_pattern());
        assert!(!m2([[0.0, 1.0], [1.0, 0.0]]).is_nilpotent_pattern());
        assert!(!NonNegativeMatrix::identity(4).is_nilpotent_pattern());
        // Strictly upper triangular 4x4 chain.
        let mut data = vec![0.0; 16];
        data[1] = 1.0;
        data[6] = 2.0;
        data[11] = 3.0;
        assert!(NonNegativeMatrix::new(4, data).unwrap().is_nilpotent_pattern());
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn small_matrix(max_n: usize) -> impl Strategy<Value = NonNegativeMatrix> {
            (1..=max_n).prop_flat_map(|n| {
                proptest::collection::vec(
                    prop_oneof![3 => 0.0..1.0f64, 1 => Just(0.0)],
                    n * n,
                )
                .prop_map(move |data| NonNegativeMatrix::new(n, data).unwrap())
            })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            // Power composition: (A^(a))^(b) = A^(ab) for a, b > 0.
            #[test]
            fn power_composition(m in small_matrix(6), a in 0.1..2.0f64, b in 0.1..2.0f64) {
                let lhs = m.hadamard_power(a).unwrap().hadamard_power(b).unwrap();
                let rhs = m.hadamard_power(a * b).unwrap();
                for (x, y) in lhs.entries().iter().zip(rhs.entries()) {
                    prop_assert!((x - y).abs() <= 1e-12 * y.abs().max(1.0));
                }
            }

            // Weighted AM-GM: the geometric mean never exceeds the
            // arithmetic mean entrywise.
            #[test]
            fn am_gm(m1 in small_matrix(5), seed in 0u64..1000, w1 in 0.05..0.95f64) {
                let n = m1.n();
                let m2 = {
                    let data = (0..n * n)
                        .map(|i| ((seed + i as u64) as f64 * 0.7137).sin().abs())
                        .collect();
                    NonNegativeMatrix::new(n, data).unwrap()
                };
                let w = WeightVector::new(vec![w1, 1.0 - w1], WeightConstraint::SumOne).unwrap();
                let geo = weighted_geometric_mean(&[m1.clone(), m2.clone()], &w).unwrap();
                for i in 0..n {
                    for j in 0..n {
                        let arith = w1 * m1.get(i, j) + (1.0 - w1) * m2.get(i, j);
                        prop_assert!(geo.get(i, j) <= arith + 1e-12 * arith.max(1.0));
                    }
                }
            }

            // Every construction preserves nonnegativity (constructors
            // reject anything else, so it suffices that they succeed).
            #[test]
            fn closures_stay_nonnegative(a in small_matrix(5), alpha in 0.0..2.0f64) {
                let b = a.transpose();
                let raw = a.matmul(&b).unwrap();
                prop_assert!(raw.entries().iter().all(|&v| v >= 0.0));
                let h = a.hadamard(&b).unwrap();
                prop_assert!(h.entries().iter().all(|&v| v >= 0.0));
                let p = a.hadamard_power(alpha).unwrap();
                prop_assert!(p.entries().iter().all(|&v| v >= 0.0));
            }
        }
    }
}
