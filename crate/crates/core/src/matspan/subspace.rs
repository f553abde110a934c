use num_complex::Complex64;

use super::linalg::{left_singular, singular_values, Coords};
use super::matrix::{CMatrix, ZERO};
use super::{MatError, Tolerance};

/// Entries below this fraction of a basis vector's largest entry are
/// rounding debris from cancellation and get zeroed, which keeps spans of
/// sparse operators sparse.
const CHOP: f64 = 1e-14;

/// Linear subspace of `rows × cols` matrices with a Hilbert–Schmidt
/// orthonormal basis.
///
/// Each basis vector carries its support so that projections only touch
/// nonzero positions.
#[derive(Clone, Debug)]
pub struct Subspace {
    rows: usize,
    cols: usize,
    basis: Vec<CMatrix>,
    supports: Vec<Vec<usize>>,
}

impl Subspace {
    /// The zero subspace. A `0 × 0` shape stands for "no ambient yet".
    pub fn empty(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            basis: Vec::new(),
            supports: Vec::new(),
        }
    }

    /// Span of `vectors` inside the given ambient shape.
    pub fn spanned_by(
        rows: usize,
        cols: usize,
        vectors: &[CMatrix],
        tol: Tolerance,
    ) -> Result<Self, MatError> {
        let mut s = Self::empty(rows, cols);
        for v in vectors {
            s.check_shape(v)?;
        }
        let scale = vectors.iter().map(CMatrix::norm).fold(0.0, f64::max);
        s.extend_scaled(vectors, tol, scale)?;
        s.svd_cleanup(vectors, tol);
        Ok(s)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    /// Side length of the ambient square matrices.
    pub fn ambient_dim(&self) -> usize {
        self.rows
    }

    pub fn basis(&self) -> &[CMatrix] {
        &self.basis
    }

    fn check_shape(&self, x: &CMatrix) -> Result<(), MatError> {
        if x.shape() == (self.rows, self.cols) {
            Ok(())
        } else {
            Err(MatError::ShapeMismatch {
                expected: (self.rows, self.cols),
                found: x.shape(),
            })
        }
    }

    fn inner_on_support(&self, k: usize, x: &[Complex64]) -> Complex64 {
        let b = self.basis[k].data();
        self.supports[k].iter().map(|&p| b[p].conj() * x[p]).sum()
    }

    fn subtract_on_support(&self, k: usize, c: Complex64, x: &mut [Complex64]) {
        let b = self.basis[k].data();
        for &p in &self.supports[k] {
            x[p] -= c * b[p];
        }
    }

    /// Coordinates of the orthogonal projection of `x`.
    pub fn coords(&self, x: &CMatrix) -> Vec<Complex64> {
        assert_eq!(x.shape(), self.shape(), "shape mismatch in coords");
        (0..self.dim())
            .map(|k| self.inner_on_support(k, x.data()))
            .collect()
    }

    /// `Σ c_k b_k`.
    pub fn combine(&self, coeffs: &[Complex64]) -> CMatrix {
        assert_eq!(coeffs.len(), self.dim(), "coefficient count");
        let mut out = CMatrix::zeros(self.rows.max(1), self.cols.max(1));
        let data = out.data_mut();
        for (k, c) in coeffs.iter().enumerate() {
            if *c == ZERO {
                continue;
            }
            let b = self.basis[k].data();
            for &p in &self.supports[k] {
                data[p] += c * b[p];
            }
        }
        out
    }

    pub fn project(&self, x: &CMatrix) -> CMatrix {
        self.combine(&self.coords(x))
    }

    /// Residual `x − P x`, obtained by explicit subtraction (two passes).
    fn residual_vector(&self, x: &CMatrix) -> CMatrix {
        let mut r = x.clone();
        for _ in 0..2 {
            for k in 0..self.dim() {
                let c = self.inner_on_support(k, r.data());
                if c != ZERO {
                    self.subtract_on_support(k, c, r.data_mut());
                }
            }
        }
        r
    }

    /// Distance from `x` to the subspace, relative to `max(1, ‖x‖)`.
    pub fn residual(&self, x: &CMatrix) -> f64 {
        if self.rows == 0 {
            return if x.norm() == 0.0 { 0.0 } else { 1.0 };
        }
        self.residual_vector(x).norm() / x.norm().max(1.0)
    }

    pub fn contains(&self, x: &CMatrix, tol: Tolerance) -> bool {
        self.residual(x) < tol.eps_eq
    }

    /// Largest residual of `other`'s basis against `self`.
    pub fn containment_residual(&self, other: &Subspace) -> f64 {
        other
            .basis
            .iter()
            .map(|b| self.residual(b))
            .fold(0.0, f64::max)
    }

    pub fn contains_subspace(&self, other: &Subspace, tol: Tolerance) -> bool {
        other.dim() <= self.dim() && self.containment_residual(other) < tol.eps_eq
    }

    /// Adds vectors whose residual exceeds `eps_rank` times the largest
    /// candidate norm (or the existing scale, whichever is larger).
    /// Returns how many basis vectors were added.
    pub fn extend(&mut self, candidates: &[CMatrix], tol: Tolerance) -> Result<usize, MatError> {
        let scale = candidates
            .iter()
            .map(CMatrix::norm)
            .fold(if self.is_empty() { 0.0 } else { 1.0 }, f64::max);
        self.extend_scaled(candidates, tol, scale)
    }

    /// Adds one vector against an orthonormal-scale threshold; used by the
    /// closure loop where candidates are products of unit vectors.
    pub(crate) fn extend_unit_scale(&mut self, x: &CMatrix, tol: Tolerance) -> bool {
        if self.dim() == self.rows * self.cols {
            return false;
        }
        let r = self.residual_vector(x);
        let n = r.norm();
        if n <= tol.eps_rank || n == 0.0 {
            return false;
        }
        self.push_normalized(r, n);
        true
    }

    fn extend_scaled(
        &mut self,
        candidates: &[CMatrix],
        tol: Tolerance,
        scale: f64,
    ) -> Result<usize, MatError> {
        let before = self.dim();
        for x in candidates {
            self.check_shape(x)?;
            if self.dim() == self.rows * self.cols {
                break;
            }
            let r = self.residual_vector(x);
            let n = r.norm();
            if n <= tol.eps_rank * scale || n == 0.0 {
                continue;
            }
            self.push_normalized(r, n);
        }
        Ok(self.dim() - before)
    }

    fn push_normalized(&mut self, mut r: CMatrix, n: f64) {
        let inv = 1.0 / n;
        let data = r.data_mut();
        let mut big: f64 = 0.0;
        for z in data.iter_mut() {
            *z *= inv;
            big = big.max(z.norm());
        }
        for z in data.iter_mut() {
            if z.norm() <= CHOP * big {
                *z = ZERO;
            }
        }
        let fix = 1.0 / r.norm();
        let support = r.support();
        for &p in &support {
            r.data_mut()[p] *= fix;
        }
        self.basis.push(r);
        self.supports.push(support);
    }

    /// Cross-checks the Gram–Schmidt rank against the singular values of
    /// the coefficient matrix `Q* X`; if some direction is weaker than
    /// `eps_rank` relative to the largest, the basis is replaced by the
    /// dominant left singular directions.
    fn svd_cleanup(&mut self, vectors: &[CMatrix], tol: Tolerance) {
        let r = self.dim();
        if r == 0 {
            return;
        }
        let mut coeffs = Coords::zeros(r, vectors.len());
        for (i, v) in vectors.iter().enumerate() {
            for (p, c) in self.coords(v).into_iter().enumerate() {
                coeffs[(p, i)] = c;
            }
        }
        let s = singular_values(&coeffs);
        let top = s.first().copied().unwrap_or(0.0);
        let keep = s.iter().filter(|&&x| x > tol.eps_rank * top).count();
        if keep == r {
            return;
        }
        let (u, _) = left_singular(&coeffs);
        let old = std::mem::replace(self, Self::empty(self.rows, self.cols));
        for l in 0..keep {
            let coeffs: Vec<Complex64> = (0..r).map(|p| u[(p, l)]).collect();
            let v = old.combine(&coeffs);
            let r = self.residual_vector(&v);
            let n = r.norm();
            self.push_normalized(r, n);
        }
    }

    /// `max |⟨b_i, b_j⟩ − δ_ij|`.
    pub fn orthonormality_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.dim() {
            for j in i..self.dim() {
                let g = self.basis[i].hs_inner(&self.basis[j]);
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((g - target).norm());
            }
        }
        worst
    }

    /// Span of the images of the basis under `f`, in the given shape.
    pub fn image(
        &self,
        rows: usize,
        cols: usize,
        f: impl Fn(&CMatrix) -> CMatrix,
        tol: Tolerance,
    ) -> Result<Subspace, MatError> {
        let images: Vec<CMatrix> = self.basis.iter().map(f).collect();
        Subspace::spanned_by(rows, cols, &images, tol)
    }
}

/// Orthonormal basis of the span of `vectors`; the empty list gives the zero
/// subspace with no ambient shape.
pub fn span_basis(vectors: &[CMatrix], tol: Tolerance) -> Result<Subspace, MatError> {
    match vectors.first() {
        None => Ok(Subspace::empty(0, 0)),
        Some(v) => Subspace::spanned_by(v.rows(), v.cols(), vectors, tol),
    }
}

/// Equality of spans via mutual projection residuals.
pub fn subspace_equal(s: &Subspace, t: &Subspace, tol: Tolerance) -> Result<bool, MatError> {
    let shapeless = |x: &Subspace| x.shape() == (0, 0);
    if s.shape() != t.shape() && !shapeless(s) && !shapeless(t) {
        return Err(MatError::ShapeMismatch {
            expected: s.shape(),
            found: t.shape(),
        });
    }
    if s.dim() != t.dim() {
        return Ok(false);
    }
    if s.dim() == 0 {
        return Ok(true);
    }
    Ok(s.containment_residual(t) < tol.eps_eq && t.containment_residual(s) < tol.eps_eq)
}
