use num_complex::Complex64;

use super::CoactError;
use crate::abgroup::{Bicharacter, FinAbGroup, GroupHom};
use crate::matspan::linalg::{pseudo_inverse, Coords};
use crate::matspan::{AlgebraBasis, CMatrix, Subspace, Tolerance, ZERO};
use crate::qgroup::translation;

/// A *-subalgebra `C ⊆ M_n` with a decomposition `C = ⊕_g C_g` satisfying
/// `C_g C_h ⊆ C_{g+h}` and `C_g* = C_{−g}`.
///
/// Degrees are lexicographic indices into the group's elements. The
/// homogeneous basis is the concatenation of orthonormal bases of the
/// components; the components need not be mutually orthogonal.
#[derive(Debug, Clone)]
pub struct GradedAlgebra {
    group: FinAbGroup,
    algebra: AlgebraBasis,
    components: Vec<Subspace>,
    basis: Vec<CMatrix>,
    degrees: Vec<usize>,
    to_homogeneous: Coords,
    grading_residual: f64,
}

impl GradedAlgebra {
    /// Builds and certifies a grading from homogeneous spanning sets.
    /// Repeated degrees are merged.
    pub fn new(
        group: FinAbGroup,
        n: usize,
        parts: Vec<(usize, Vec<CMatrix>)>,
        tol: Tolerance,
    ) -> Result<Self, CoactError> {
        let order = group.order();
        let mut per_degree: Vec<Vec<CMatrix>> = vec![Vec::new(); order];
        for (deg, elements) in parts {
            if deg >= order {
                return Err(CoactError::DegreeOutOfRange(deg));
            }
            per_degree[deg].extend(elements);
        }
        let mut components = Vec::with_capacity(order);
        let mut basis = Vec::new();
        let mut degrees = Vec::new();
        for (deg, elements) in per_degree.iter().enumerate() {
            let s = Subspace::spanned_by(n, n, elements, tol)?;
            for b in s.basis() {
                basis.push(b.clone());
                degrees.push(deg);
            }
            components.push(s);
        }
        let whole = Subspace::spanned_by(n, n, &basis, tol)?;
        if whole.dim() != basis.len() {
            return Err(CoactError::ComponentsDependent {
                expected: basis.len(),
                found: whole.dim(),
            });
        }
        let algebra = AlgebraBasis::certify(whole, tol)?;

        let mut worst_adj: f64 = 0.0;
        let mut worst_mul: f64 = 0.0;
        for (b, &g) in basis.iter().zip(&degrees) {
            let neg = group.index_of(&group.neg(&group.element_at(g)));
            worst_adj = worst_adj.max(components[neg].residual(&b.adjoint()));
        }
        for (x, &g) in basis.iter().zip(&degrees) {
            let ge = group.element_at(g);
            for (y, &h) in basis.iter().zip(&degrees) {
                let sum = group.index_of(&group.add(&ge, &group.element_at(h)));
                worst_mul = worst_mul.max(components[sum].residual(&(x * y)));
            }
        }
        if worst_adj >= tol.eps_eq {
            return Err(CoactError::GradingViolated {
                what: "adjoint of C_g outside C_{-g}",
                residual: worst_adj,
            });
        }
        if worst_mul >= tol.eps_eq {
            return Err(CoactError::GradingViolated {
                what: "C_g C_h outside C_{g+h}",
                residual: worst_mul,
            });
        }

        let m = basis.len();
        let q = algebra.subspace();
        let mut t = Coords::zeros(m, m);
        for (k, b) in basis.iter().enumerate() {
            for (p, c) in q.coords(b).into_iter().enumerate() {
                t[(p, k)] = c;
            }
        }
        Ok(Self {
            group,
            algebra,
            components,
            basis,
            degrees,
            to_homogeneous: pseudo_inverse(&t, 1e-12),
            grading_residual: worst_adj.max(worst_mul),
        })
    }

    pub fn group(&self) -> &FinAbGroup {
        &self.group
    }

    pub fn algebra(&self) -> &AlgebraBasis {
        &self.algebra
    }

    pub fn ambient_dim(&self) -> usize {
        self.algebra.ambient_dim()
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn component(&self, g: usize) -> &Subspace {
        &self.components[g]
    }

    pub fn component_dims(&self) -> Vec<usize> {
        self.components.iter().map(Subspace::dim).collect()
    }

    pub fn homogeneous_basis(&self) -> &[CMatrix] {
        &self.basis
    }

    /// Degree index of each homogeneous basis element.
    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn grading_residual(&self) -> f64 {
        self.grading_residual
    }

    pub fn is_trivially_graded(&self) -> bool {
        self.degrees.iter().all(|&d| d == 0)
    }

    /// Coordinates of `x ∈ C` in the homogeneous basis.
    pub fn homogeneous_coords(&self, x: &CMatrix) -> Vec<Complex64> {
        let c = Coords::from_vec(self.dim(), 1, self.algebra.subspace().coords(x));
        (&self.to_homogeneous * c).as_slice().to_vec()
    }

    /// Homogeneous parts `x_g`, indexed by degree.
    pub fn decompose(&self, x: &CMatrix) -> Vec<CMatrix> {
        let n = self.ambient_dim();
        let mut parts = vec![CMatrix::zeros(n, n); self.group.order()];
        for ((c, b), &g) in self
            .homogeneous_coords(x)
            .iter()
            .zip(&self.basis)
            .zip(&self.degrees)
        {
            if *c != ZERO {
                parts[g] += &b.scale(*c);
            }
        }
        parts
    }

    /// `γ(x) = Σ_g x_g ⊗ λ_g` on `C^n ⊗ ℓ²(G)`.
    pub fn coact(&self, x: &CMatrix) -> CMatrix {
        let n = self.ambient_dim();
        let order = self.group.order();
        let mut out = CMatrix::zeros(n * order, n * order);
        for (g, part) in self.decompose(x).iter().enumerate() {
            if part.norm() > 0.0 {
                out += &part.kron(&translation(&self.group, g));
            }
        }
        out
    }

    /// Same homogeneous basis with new degree labels.
    pub fn relabel(
        &self,
        group: FinAbGroup,
        degree_map: impl Fn(usize) -> usize,
        tol: Tolerance,
    ) -> Result<Self, CoactError> {
        let parts = self
            .basis
            .iter()
            .zip(&self.degrees)
            .map(|(b, &g)| (degree_map(g), vec![b.clone()]))
            .collect();
        Self::new(group, self.ambient_dim(), parts, tol)
    }

    /// `Ad_u`: same degrees, conjugated elements.
    pub fn conjugated(&self, u: &CMatrix, tol: Tolerance) -> Result<Self, CoactError> {
        let residual = u.unitarity_residual();
        if residual >= tol.eps_eq {
            return Err(CoactError::NotUnitary { residual });
        }
        let ua = u.adjoint();
        let parts = self
            .basis
            .iter()
            .zip(&self.degrees)
            .map(|(b, &g)| (g, vec![&(u * b) * &ua]))
            .collect();
        Self::new(self.group.clone(), self.ambient_dim(), parts, tol)
    }

    /// Block-diagonal sum `C ⊕ D` over the same group.
    pub fn direct_sum(&self, other: &GradedAlgebra, tol: Tolerance) -> Result<Self, CoactError> {
        if self.group != other.group {
            return Err(CoactError::Mismatch);
        }
        let (n1, n2) = (self.ambient_dim(), other.ambient_dim());
        let z1 = CMatrix::zeros(n1, n1);
        let z2 = CMatrix::zeros(n2, n2);
        let mut parts: Vec<(usize, Vec<CMatrix>)> = Vec::new();
        for (b, &g) in self.basis.iter().zip(&self.degrees) {
            parts.push((g, vec![CMatrix::block_diagonal(&[b, &z2])]));
        }
        for (b, &g) in other.basis.iter().zip(&other.degrees) {
            parts.push((g, vec![CMatrix::block_diagonal(&[&z1, b])]));
        }
        Self::new(self.group.clone(), n1 + n2, parts, tol)
    }

    /// `C₀ ⊗ C` with `C₀` in degree zero.
    pub fn tensor_trivial_left(
        &self,
        c0: &AlgebraBasis,
        tol: Tolerance,
    ) -> Result<Self, CoactError> {
        let mut parts = Vec::new();
        for a in c0.basis() {
            for (b, &g) in self.basis.iter().zip(&self.degrees) {
                parts.push((g, vec![a.kron(b)]));
            }
        }
        Self::new(
            self.group.clone(),
            c0.ambient_dim() * self.ambient_dim(),
            parts,
            tol,
        )
    }

    // Presets.

    /// `C*(G) ⊆ B(ℓ²G)` with `deg λ_g = g`: the comultiplication as a coaction.
    pub fn group_algebra(group: &FinAbGroup, tol: Tolerance) -> Result<Self, CoactError> {
        let parts = (0..group.order())
            .map(|g| (g, vec![translation(group, g)]))
            .collect();
        Self::new(group.clone(), group.order(), parts, tol)
    }

    /// `C(G) ⊆ B(ℓ²G)` with the character `x ↦ conj⟨x,k⟩` in degree `k`.
    pub fn function_algebra(group: &FinAbGroup, tol: Tolerance) -> Result<Self, CoactError> {
        let pairing = Bicharacter::pairing(group);
        let els = group.elements();
        let parts = els
            .iter()
            .enumerate()
            .map(|(k, ke)| {
                let d: Vec<Complex64> = els.iter().map(|x| pairing.value(x, ke).conj()).collect();
                (k, vec![CMatrix::diagonal(&d)])
            })
            .collect();
        Self::new(group.clone(), group.order(), parts, tol)
    }

    /// `End(V)` for `V = ⊕ C e_i` with `deg e_i = degrees[i]`; the matrix
    /// unit `E_ij` has degree `deg e_i − deg e_j`.
    pub fn graded_full_matrix(
        group: &FinAbGroup,
        degrees: &[usize],
        tol: Tolerance,
    ) -> Result<Self, CoactError> {
        let n = degrees.len();
        let mut parts = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let d = group.sub(&group.element_at(degrees[i]), &group.element_at(degrees[j]));
                parts.push((group.index_of(&d), vec![CMatrix::unit(n, n, i, j)]));
            }
        }
        Self::new(group.clone(), n, parts, tol)
    }

    /// Everything in degree zero.
    pub fn trivially_graded(
        group: &FinAbGroup,
        algebra: &AlgebraBasis,
        tol: Tolerance,
    ) -> Result<Self, CoactError> {
        Self::new(
            group.clone(),
            algebra.ambient_dim(),
            vec![(0, algebra.basis().to_vec())],
            tol,
        )
    }
}

/// Relabels each degree `g` as `f(g)`.
pub fn transport_grading(
    c: &GradedAlgebra,
    f: &GroupHom,
    tol: Tolerance,
) -> Result<GradedAlgebra, CoactError> {
    if f.source() != c.group() {
        return Err(CoactError::Mismatch);
    }
    let (src, dst) = (f.source().clone(), f.target().clone());
    c.relabel(
        dst.clone(),
        |g| dst.index_of(&f.apply(&src.element_at(g))),
        tol,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matspan::pauli::{sigma_x, sigma_z};

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn z(n: usize) -> FinAbGroup {
        FinAbGroup::cyclic(n)
    }

    #[test]
    fn presets_have_expected_components() {
        let c = GradedAlgebra::group_algebra(&z(4), tol()).unwrap();
        assert_eq!(c.component_dims(), vec![1, 1, 1, 1]);
        let f =
            GradedAlgebra::function_algebra(&FinAbGroup::new(vec![2, 2]).unwrap(), tol()).unwrap();
        assert_eq!(f.dim(), 4);
        let m = GradedAlgebra::graded_full_matrix(&z(2), &[0, 1], tol()).unwrap();
        assert_eq!(m.component_dims(), vec![2, 2]);
        let m = GradedAlgebra::graded_full_matrix(&z(3), &[0, 1, 1], tol()).unwrap();
        assert_eq!(m.component_dims(), vec![5, 2, 2]);
    }

    #[test]
    fn decomposition_reassembles() {
        let m = GradedAlgebra::graded_full_matrix(&z(2), &[0, 1], tol()).unwrap();
        let x = CMatrix::from_fn(2, 2, |i, j| Complex64::new(i as f64 + 1.0, j as f64 - 0.5));
        let parts = m.decompose(&x);
        assert!((&parts[0] + &parts[1]).distance(&x) < 1e-14);
        assert_eq!(parts[0].get(0, 1), ZERO);
        assert_eq!(parts[1].get(0, 0), ZERO);
    }

    #[test]
    fn rejects_bad_gradings() {
        // Both diagonal units in degree 1 of Z/2: E00·E00 = E00 lands in degree 0.
        let r = GradedAlgebra::new(
            z(2),
            2,
            vec![(
                1,
                vec![CMatrix::unit(2, 2, 0, 0), CMatrix::unit(2, 2, 1, 1)],
            )],
            tol(),
        );
        assert!(matches!(r, Err(CoactError::GradingViolated { .. })));
        let r = GradedAlgebra::new(
            z(2),
            2,
            vec![(0, vec![sigma_x()]), (1, vec![sigma_x()])],
            tol(),
        );
        assert!(matches!(r, Err(CoactError::ComponentsDependent { .. })));
        let r = GradedAlgebra::new(z(2), 2, vec![(0, vec![sigma_x()])], tol());
        assert!(matches!(r, Err(CoactError::Mat(_))));
        let r = GradedAlgebra::new(z(2), 2, vec![(2, vec![sigma_z()])], tol());
        assert!(matches!(r, Err(CoactError::DegreeOutOfRange(2))));
    }

    #[test]
    fn transport_examples() {
        let c = GradedAlgebra::group_algebra(&z(4), tol()).unwrap();
        let id = GroupHom::identity(&z(4));
        assert_eq!(
            transport_grading(&c, &id, tol()).unwrap().degrees(),
            c.degrees()
        );
        let q = GroupHom::new(z(4), z(2), vec![vec![1]]).unwrap();
        let t = transport_grading(&c, &q, tol()).unwrap();
        assert_eq!(t.component_dims(), vec![2, 2]);
        for g in 0..4 {
            assert!(t.component(g % 2).contains(&translation(&z(4), g), tol()));
        }
        let zero = GroupHom::zero(&z(4), &z(2));
        assert!(transport_grading(&c, &zero, tol())
            .unwrap()
            .is_trivially_graded());
    }

    #[test]
    fn sums_tensors_and_conjugates_remain_graded() {
        let c = GradedAlgebra::group_algebra(&z(2), tol()).unwrap();
        let m = GradedAlgebra::graded_full_matrix(&z(2), &[0, 1], tol()).unwrap();
        let s = c.direct_sum(&m, tol()).unwrap();
        assert_eq!(s.dim(), 6);
        assert_eq!(s.ambient_dim(), 4);
        let t = m
            .tensor_trivial_left(&AlgebraBasis::full(2), tol())
            .unwrap();
        assert_eq!(t.dim(), 16);
        let h = CMatrix::from_real_rows(&[&[1.0, 1.0], &[1.0, -1.0]]).scale_real(0.5f64.sqrt());
        let k = m.conjugated(&h, tol()).unwrap();
        assert_eq!(k.component_dims(), vec![2, 2]);
    }
}
