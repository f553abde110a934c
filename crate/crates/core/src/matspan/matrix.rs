use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_complex::Complex64;

use super::MatError;

/// Dense complex matrix, row-major.
///
/// Products skip zero entries of the left factor, so tensor products of
/// permutation and diagonal matrices multiply in roughly `nnz * n` time even
/// though storage is dense.
#[derive(Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

impl CMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self, MatError> {
        if rows == 0 || cols == 0 {
            return Err(MatError::EmptyShape);
        }
        if data.len() != rows * cols {
            return Err(MatError::DataLength {
                expected: rows * cols,
                found: data.len(),
            });
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(MatError::NonFinite);
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.data[i * cols + j] = f(i, j);
            }
        }
        m
    }

    /// Builds a matrix from real entries given row by row.
    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Self::from_fn(rows.len(), cols, |i, j| Complex64::new(rows[i][j], 0.0))
    }

    pub fn diagonal(entries: &[Complex64]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, z) in entries.iter().enumerate() {
            m.data[i * n + i] = *z;
        }
        m
    }

    /// Matrix unit with a single 1 at `(i, j)`.
    pub fn unit(rows: usize, cols: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(rows, cols);
        m.data[i * cols + j] = ONE;
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    #[inline]
    pub fn data_mut(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, z: Complex64) {
        self.data[i * self.cols + j] = z;
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn conj(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &CMatrix) -> Self {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut out = Self::zeros(rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a == ZERO {
                    continue;
                }
                for k in 0..other.rows {
                    let row = (i * other.rows + k) * cols + j * other.cols;
                    let src = &other.data[k * other.cols..(k + 1) * other.cols];
                    for (dst, b) in out.data[row..row + other.cols].iter_mut().zip(src) {
                        *dst = a * b;
                    }
                }
            }
        }
        out
    }

    /// Kronecker product of a list of factors, left to right.
    pub fn kron_all(factors: &[&CMatrix]) -> Self {
        let (first, rest) = factors.split_first().expect("at least one factor");
        rest.iter().fold((*first).clone(), |acc, f| acc.kron(f))
    }

    /// Hilbert–Schmidt inner product `trace(self* other)`.
    pub fn hs_inner(&self, other: &CMatrix) -> Complex64 {
        assert_eq!(self.shape(), other.shape(), "shape mismatch in hs_inner");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn trace(&self) -> Complex64 {
        assert!(self.is_square());
        (0..self.rows).map(|i| self.get(i, i)).sum()
    }

    /// Frobenius distance `‖self − other‖`.
    pub fn distance(&self, other: &CMatrix) -> f64 {
        assert_eq!(self.shape(), other.shape(), "shape mismatch in distance");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn commutator(&self, other: &CMatrix) -> Self {
        &(self * other) - &(other * self)
    }

    /// `‖U*U − 1‖ + ‖UU* − 1‖`.
    pub fn unitarity_residual(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let id = CMatrix::identity(self.rows);
        let adj = self.adjoint();
        (&adj * self).distance(&id) + (self * &adj).distance(&id)
    }

    /// Largest absolute off-diagonal entry.
    pub fn off_diagonal_max(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                if i != j {
                    worst = worst.max(self.get(i, j).norm());
                }
            }
        }
        worst
    }

    /// Positions (flat indices) of exactly nonzero entries.
    pub fn support(&self) -> Vec<usize> {
        self.data
            .iter()
            .enumerate()
            .filter(|(_, z)| **z != ZERO)
            .map(|(k, _)| k)
            .collect()
    }

    /// Places `blocks` on the diagonal.
    pub fn block_diagonal(blocks: &[&CMatrix]) -> Self {
        let rows: usize = blocks.iter().map(|b| b.rows).sum();
        let cols: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            out.set_block(r0, c0, b);
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    /// Writes `block` with its top-left corner at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &CMatrix) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols);
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.set(r0 + i, c0 + j, block.get(i, j));
            }
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |i, j| self.get(r0 + i, c0 + j))
    }

    /// Entries as `[re, im]` pairs, row by row.
    pub fn to_pairs(&self) -> Vec<Vec<[f64; 2]>> {
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| {
                        let z = self.get(i, j);
                        [z.re, z.im]
                    })
                    .collect()
            })
            .collect()
    }

    pub fn from_pairs(rows: &[Vec<[f64; 2]>]) -> Result<Self, MatError> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(MatError::Ragged);
        }
        let data = rows
            .iter()
            .flat_map(|row| row.iter().map(|p| Complex64::new(p[0], p[1])))
            .collect();
        Self::new(r, c, data)
    }
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self.get(i, j);
                write!(f, "{:+.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;

    fn mul(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(
            self.cols, rhs.rows,
            "shape mismatch in product: {}x{} * {}x{}",
            self.rows, self.cols, rhs.rows, rhs.cols
        );
        let n = rhs.cols;
        let mut out = CMatrix::zeros(self.rows, n);
        let nnz = rhs.data.iter().filter(|z| **z != ZERO).count();
        if nnz * 4 < rhs.data.len() {
            // Row-wise index lists for a sparse right factor.
            let mut starts = Vec::with_capacity(rhs.rows + 1);
            let mut entries = Vec::with_capacity(nnz);
            for k in 0..rhs.rows {
                starts.push(entries.len());
                for j in 0..n {
                    let b = rhs.data[k * n + j];
                    if b != ZERO {
                        entries.push((j, b));
                    }
                }
            }
            starts.push(entries.len());
            for i in 0..self.rows {
                let dst = i * n;
                for k in 0..self.cols {
                    let a = self.data[i * self.cols + k];
                    if a == ZERO {
                        continue;
                    }
                    for &(j, b) in &entries[starts[k]..starts[k + 1]] {
                        out.data[dst + j] += a * b;
                    }
                }
            }
            return out;
        }
        for i in 0..self.rows {
            let dst = i * n;
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == ZERO {
                    continue;
                }
                let src = &rhs.data[k * n..(k + 1) * n];
                for (o, b) in out.data[dst..dst + n].iter_mut().zip(src) {
                    *o += a * b;
                }
            }
        }
        out
    }
}

impl Mul for CMatrix {
    type Output = CMatrix;

    fn mul(self, rhs: CMatrix) -> CMatrix {
        &self * &rhs
    }
}

impl Mul<Complex64> for &CMatrix {
    type Output = CMatrix;

    fn mul(self, rhs: Complex64) -> CMatrix {
        self.scale(rhs)
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;

    fn add(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.shape(), rhs.shape(), "shape mismatch in sum");
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Add for CMatrix {
    type Output = CMatrix;

    fn add(self, rhs: CMatrix) -> CMatrix {
        &self + &rhs
    }
}

impl AddAssign<&CMatrix> for CMatrix {
    fn add_assign(&mut self, rhs: &CMatrix) {
        assert_eq!(self.shape(), rhs.shape(), "shape mismatch in sum");
        for (a, b) in self.data.iter_mut().zip(&rhs.data) {
            *a += b;
        }
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;

    fn sub(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.shape(), rhs.shape(), "shape mismatch in difference");
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Sub for CMatrix {
    type Output = CMatrix;

    fn sub(self, rhs: CMatrix) -> CMatrix {
        &self - &rhs
    }
}

impl Neg for &CMatrix {
    type Output = CMatrix;

    fn neg(self) -> CMatrix {
        self.scale_real(-1.0)
    }
}

/// Pauli matrices and friends, used throughout the tests and presets.
pub mod pauli {
    use super::*;

    pub fn sigma_x() -> CMatrix {
        CMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]])
    }

    pub fn sigma_y() -> CMatrix {
        let i = Complex64::new(0.0, 1.0);
        CMatrix::new(2, 2, vec![ZERO, -i, i, ZERO]).unwrap()
    }

    pub fn sigma_z() -> CMatrix {
        CMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]])
    }
}

#[cfg(test)]
mod tests {
    use super::pauli::*;
    use super::*;

    #[test]
    fn rejects_non_finite_entries() {
        let bad = vec![Complex64::new(f64::NAN, 0.0)];
        assert_eq!(CMatrix::new(1, 1, bad), Err(MatError::NonFinite));
        assert!(matches!(
            CMatrix::new(2, 2, vec![ONE; 3]),
            Err(MatError::DataLength { .. })
        ));
    }

    #[test]
    fn pauli_algebra() {
        let i = Complex64::new(0.0, 1.0);
        let xz = &sigma_x() * &sigma_z();
        assert!(xz.distance(&sigma_y().scale(-i)) < 1e-15);
        assert!(sigma_x().commutator(&sigma_z()).norm() > 1.0);
        assert!(sigma_y().unitarity_residual() < 1e-15);
    }

    #[test]
    fn kron_matches_index_formula() {
        let a = CMatrix::from_fn(2, 3, |i, j| Complex64::new((i * 3 + j) as f64, 1.0));
        let b = CMatrix::from_fn(3, 2, |i, j| Complex64::new(1.0, (i + 2 * j) as f64));
        let k = a.kron(&b);
        assert_eq!(k.shape(), (6, 6));
        for i in 0..2 {
            for j in 0..3 {
                for p in 0..3 {
                    for q in 0..2 {
                        assert_eq!(k.get(i * 3 + p, j * 2 + q), a.get(i, j) * b.get(p, q));
                    }
                }
            }
        }
    }

    #[test]
    fn sparse_product_agrees_with_naive() {
        let a = CMatrix::from_fn(4, 3, |i, j| {
            if (i + j) % 2 == 0 {
                Complex64::new(i as f64 - 1.0, j as f64)
            } else {
                ZERO
            }
        });
        let b = CMatrix::from_fn(3, 5, |i, j| Complex64::new((i * j) as f64, 0.5));
        let p = &a * &b;
        for i in 0..4 {
            for j in 0..5 {
                let naive: Complex64 = (0..3).map(|k| a.get(i, k) * b.get(k, j)).sum();
                assert!((p.get(i, j) - naive).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn pairs_round_trip() {
        let m = sigma_y();
        assert_eq!(CMatrix::from_pairs(&m.to_pairs()).unwrap(), m);
        assert_eq!(
            CMatrix::from_pairs(&[vec![[1.0, 0.0]], vec![]]),
            Err(MatError::Ragged)
        );
    }
}
