use num_complex::Complex64;

use super::linalg::{null_space, Coords};
use super::matrix::CMatrix;
use super::subspace::Subspace;
use super::{MatError, Tolerance};

/// A *-subalgebra of `M_n`, stored as an orthonormal basis.
#[derive(Clone, Debug)]
pub struct AlgebraBasis {
    subspace: Subspace,
    contains_identity: bool,
}

impl AlgebraBasis {
    /// Accepts `subspace` after checking closure under products and adjoints.
    pub fn certify(subspace: Subspace, tol: Tolerance) -> Result<Self, MatError> {
        let (ok, residual) = is_star_subalgebra(&subspace, tol);
        if !ok {
            return Err(MatError::NotClosed { residual });
        }
        Ok(Self::trusted(subspace, tol))
    }

    /// Wraps a subspace already known to be a *-subalgebra.
    pub(crate) fn trusted(subspace: Subspace, tol: Tolerance) -> Self {
        let n = subspace.ambient_dim();
        let contains_identity = n > 0 && subspace.contains(&CMatrix::identity(n), tol);
        Self {
            subspace,
            contains_identity,
        }
    }

    /// The full matrix algebra `M_n`, basis of matrix units in row-major order.
    pub fn full(n: usize) -> Self {
        let units: Vec<CMatrix> = (0..n * n)
            .map(|k| CMatrix::unit(n, n, k / n, k % n))
            .collect();
        let subspace = Subspace::spanned_by(n, n, &units, Tolerance::default())
            .expect("matrix units share a shape");
        Self {
            subspace,
            contains_identity: true,
        }
    }

    pub fn subspace(&self) -> &Subspace {
        &self.subspace
    }

    pub fn basis(&self) -> &[CMatrix] {
        self.subspace.basis()
    }

    pub fn dim(&self) -> usize {
        self.subspace.dim()
    }

    pub fn ambient_dim(&self) -> usize {
        self.subspace.ambient_dim()
    }

    pub fn contains_identity(&self) -> bool {
        self.contains_identity
    }

    pub fn is_commutative(&self, tol: Tolerance) -> bool {
        let b = self.basis();
        (0..b.len()).all(|i| (i + 1..b.len()).all(|j| b[i].commutator(&b[j]).norm() < tol.eps_eq))
    }

    /// Nonzero structure constants `b_i b_j = Σ_k c_ijk b_k` as triplets.
    pub fn structure_constants(&self) -> Vec<(usize, usize, usize, Complex64)> {
        let b = self.basis();
        let mut out = Vec::new();
        for i in 0..b.len() {
            for j in 0..b.len() {
                let coords = self.subspace.coords(&(&b[i] * &b[j]));
                for (k, c) in coords.into_iter().enumerate() {
                    if c.norm() > 1e-12 {
                        out.push((i, j, k, c));
                    }
                }
            }
        }
        out
    }
}

/// Checks `b_i b_j ∈ S` and `b_i* ∈ S` for all basis elements; returns the
/// verdict and the worst projection residual.
pub fn is_star_subalgebra(s: &Subspace, tol: Tolerance) -> (bool, f64) {
    let b = s.basis();
    let mut worst: f64 = 0.0;
    for x in b {
        worst = worst.max(s.residual(&x.adjoint()));
    }
    for x in b {
        for y in b {
            worst = worst.max(s.residual(&(x * y)));
        }
    }
    (worst < tol.eps_eq, worst)
}

/// Smallest *-subalgebra containing the generators.
///
/// Starts from the span of the generators and their adjoints, then
/// repeatedly adds products involving newly found basis vectors, in
/// lexicographic order, until the dimension stops growing.
pub fn multiplicative_closure(
    generators: &[CMatrix],
    tol: Tolerance,
) -> Result<AlgebraBasis, MatError> {
    let Some(first) = generators.first() else {
        return Ok(AlgebraBasis::trusted(Subspace::empty(0, 0), tol));
    };
    let (n, m) = first.shape();
    if n != m {
        return Err(MatError::NotSquare(n, m));
    }
    let mut s = Subspace::empty(n, n);
    let mut seeds = Vec::with_capacity(2 * generators.len());
    for g in generators {
        if g.shape() != (n, n) {
            return Err(MatError::ShapeMismatch {
                expected: (n, n),
                found: g.shape(),
            });
        }
        seeds.push(g.clone());
        seeds.push(g.adjoint());
    }
    s.extend(&seeds, tol)?;
    let full = n * n;
    let mut frontier = 0;
    loop {
        let end = s.dim();
        if frontier == end || end == full {
            break;
        }
        for k in frontier..end {
            let adj = s.basis()[k].adjoint();
            s.extend_unit_scale(&adj, tol);
        }
        for i in 0..end {
            for j in 0..end {
                if i < frontier && j < frontier {
                    continue;
                }
                let p = &s.basis()[i] * &s.basis()[j];
                s.extend_unit_scale(&p, tol);
            }
        }
        frontier = end;
    }
    Ok(AlgebraBasis::trusted(s, tol))
}

/// Center of a *-subalgebra, as the kernel of `x ↦ ([x, b_j])_j` in
/// basis coordinates.
pub fn center(a: &AlgebraBasis, tol: Tolerance) -> Subspace {
    let s = a.subspace();
    let b = s.basis();
    let m = b.len();
    if m == 0 {
        return Subspace::empty(s.shape().0, s.shape().1);
    }
    let mut stacked = Coords::zeros(m * m, m);
    for i in 0..m {
        for j in 0..m {
            let c = s.coords(&b[i].commutator(&b[j]));
            for (p, z) in c.into_iter().enumerate() {
                stacked[(j * m + p, i)] = z;
            }
        }
    }
    let top = stacked.norm().max(1.0);
    let kernel = null_space(&stacked, tol.eps_rank * top);
    let elements: Vec<CMatrix> = (0..kernel.ncols())
        .map(|c| {
            let coeffs: Vec<Complex64> = (0..m).map(|i| kernel[(i, c)]).collect();
            s.combine(&coeffs)
        })
        .collect();
    let (r, c) = s.shape();
    Subspace::spanned_by(r, c, &elements, tol).expect("center elements share the ambient shape")
}

#[cfg(test)]
mod tests {
    use super::super::matrix::pauli::*;
    use super::super::subspace::{span_basis, subspace_equal};
    use super::*;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn two_paulis_generate_m2() {
        let a = multiplicative_closure(&[sigma_x(), sigma_z()], tol()).unwrap();
        assert_eq!(a.dim(), 4);
        assert!(a.contains_identity());
    }

    #[test]
    fn self_adjoint_unitary_generates_its_powers() {
        let d = CMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]]);
        let a = multiplicative_closure(std::slice::from_ref(&d), tol()).unwrap();
        let expect = span_basis(&[d, CMatrix::identity(2)], tol()).unwrap();
        assert!(subspace_equal(a.subspace(), &expect, tol()).unwrap());
        assert!(a.is_commutative(tol()));
    }

    #[test]
    fn matrix_unit_generates_m2() {
        let a = multiplicative_closure(&[CMatrix::unit(2, 2, 0, 1)], tol()).unwrap();
        assert_eq!(a.dim(), 4);
    }

    #[test]
    fn closure_of_rank_one_projection_is_non_unital() {
        let a = multiplicative_closure(&[CMatrix::unit(3, 3, 0, 0)], tol()).unwrap();
        assert_eq!(a.dim(), 1);
        assert!(!a.contains_identity());
    }

    #[test]
    fn centers() {
        assert_eq!(center(&AlgebraBasis::full(2), tol()).dim(), 1);
        let diag = multiplicative_closure(&[CMatrix::unit(2, 2, 0, 0)], tol()).unwrap();
        let diag = multiplicative_closure(&[diag.basis()[0].clone(), CMatrix::identity(2)], tol())
            .unwrap();
        assert_eq!(center(&diag, tol()).dim(), 2);
        // M2 ⊕ M3 inside M5: one scalar per block.
        let mut gens = Vec::new();
        for (off, n) in [(0, 2), (2, 3)] {
            for i in 0..n {
                for j in 0..n {
                    gens.push(CMatrix::unit(5, 5, off + i, off + j));
                }
            }
        }
        let blocks = AlgebraBasis::certify(span_basis(&gens, tol()).unwrap(), tol()).unwrap();
        assert_eq!(blocks.dim(), 13);
        let z = center(&blocks, tol());
        assert_eq!(z.dim(), 2);
        for x in z.basis() {
            assert!(blocks.subspace().contains(x, tol()));
            for b in blocks.basis() {
                assert!(x.commutator(b).norm() < tol().eps_eq);
            }
        }
    }

    #[test]
    fn certify_rejects_non_algebra() {
        let s = span_basis(&[sigma_x()], tol()).unwrap();
        assert!(matches!(
            AlgebraBasis::certify(s, tol()),
            Err(MatError::NotClosed { .. })
        ));
    }

    #[test]
    fn structure_constants_of_m2_units() {
        let a = AlgebraBasis::full(2);
        let sc = a.structure_constants();
        // e_ij e_kl = δ_jk e_il gives 8 nonzero constants.
        assert_eq!(sc.len(), 8);
    }
}
