use serde::Serialize;

use super::coaction::fourier_slices;
use super::{coaction_to_grading, CoactError, CoactionMap, GradedAlgebra};
use crate::matspan::{CMatrix, Subspace, Tolerance};
use crate::qgroup::translation;

#[derive(Debug, Clone, Serialize)]
pub struct CocycleReport {
    pub unitarity_residual: f64,
    /// Distance of `u` from `C ⊗ A`.
    pub range_residual: f64,
    /// `u₁₂ (γ⊗id)(u) − (id⊗Δ)(u)`.
    pub cocycle_residual: f64,
    /// `dim span γ(C)·u*·(1⊗A)`.
    pub density_dim: usize,
    pub density_expected: usize,
    pub pass: bool,
}

/// A unitary `u = Σ_g u_g ⊗ λ_g ∈ C ⊗ C*(G)` satisfying the cocycle identity
/// for the coaction of a grading.
#[derive(Debug, Clone)]
pub struct Cocycle {
    u: CMatrix,
    parts: Vec<CMatrix>,
    report: CocycleReport,
}

impl Cocycle {
    /// Measures everything; never fails.
    pub fn check(
        c: &GradedAlgebra,
        u: &CMatrix,
        tol: Tolerance,
    ) -> Result<CocycleReport, CoactError> {
        let group = c.group();
        let order = group.order();
        let n = c.ambient_dim();
        let big = n * order;
        if u.shape() != (big, big) {
            return Err(CoactError::Mismatch);
        }
        let unitarity_residual = u.unitarity_residual();
        let parts = fourier_slices(group, n, u);
        let lambdas: Vec<CMatrix> = (0..order).map(|g| translation(group, g)).collect();

        let mut range_residual: f64 = 0.0;
        let mut rebuilt = CMatrix::zeros(big, big);
        let mut gamma_u = CMatrix::zeros(big * order, big * order);
        let mut delta_u = CMatrix::zeros(big * order, big * order);
        for (x, l) in parts.iter().zip(&lambdas) {
            range_residual = range_residual.max(c.algebra().subspace().residual(x));
            rebuilt += &x.kron(l);
            if x.max_abs() > 0.0 {
                gamma_u += &c.coact(x).kron(l);
                delta_u += &x.kron(l).kron(l);
            }
        }
        range_residual = range_residual.max(rebuilt.distance(u));
        let u12 = u.kron(&CMatrix::identity(order));
        let cocycle_residual = (&u12 * &gamma_u).distance(&delta_u);

        let ua = u.adjoint();
        let mut vectors = Vec::with_capacity(c.dim() * order);
        for b in c.algebra().basis() {
            let left = &c.coact(b) * &ua;
            for l in &lambdas {
                vectors.push(&left * &CMatrix::identity(n).kron(l));
            }
        }
        let density_dim = Subspace::spanned_by(big, big, &vectors, tol)?.dim();
        let density_expected = c.dim() * order;
        Ok(CocycleReport {
            unitarity_residual,
            range_residual,
            cocycle_residual,
            density_dim,
            density_expected,
            pass: unitarity_residual < tol.eps_eq
                && range_residual < tol.eps_eq
                && cocycle_residual < tol.eps_eq
                && density_dim == density_expected,
        })
    }

    pub fn new(c: &GradedAlgebra, u: CMatrix, tol: Tolerance) -> Result<Self, CoactError> {
        let report = Self::check(c, &u, tol)?;
        if report.unitarity_residual >= tol.eps_eq {
            return Err(CoactError::NotUnitary {
                residual: report.unitarity_residual,
            });
        }
        if report.range_residual >= tol.eps_eq || report.cocycle_residual >= tol.eps_eq {
            return Err(CoactError::NotCocycle {
                residual: report.range_residual.max(report.cocycle_residual),
            });
        }
        if report.density_dim != report.density_expected {
            return Err(CoactError::Density {
                expected: report.density_expected,
                found: report.density_dim,
            });
        }
        let parts = fourier_slices(c.group(), c.ambient_dim(), &u);
        Ok(Self { u, parts, report })
    }

    pub fn unitary(&self) -> &CMatrix {
        &self.u
    }

    /// `u_g` with `u = Σ u_g ⊗ λ_g`.
    pub fn parts(&self) -> &[CMatrix] {
        &self.parts
    }

    pub fn report(&self) -> &CocycleReport {
        &self.report
    }
}

/// `u = Σ_g E_g ⊗ λ_g` for orthogonal projections `E_g ∈ C₀` summing to 1.
pub fn corepresentation_cocycle(
    c: &GradedAlgebra,
    projections: &[CMatrix],
    tol: Tolerance,
) -> Result<Cocycle, CoactError> {
    let group = c.group();
    if projections.len() != group.order() {
        return Err(CoactError::Mismatch);
    }
    let n = c.ambient_dim();
    let mut u = CMatrix::zeros(n * group.order(), n * group.order());
    for (g, e) in projections.iter().enumerate() {
        u += &e.kron(&translation(group, g));
    }
    Cocycle::new(c, u, tol)
}

/// `γ_u = Ad_u ∘ γ`, returned with its recovered grading.
pub fn twist_by_cocycle(
    c: &GradedAlgebra,
    u: &Cocycle,
    tol: Tolerance,
) -> Result<(GradedAlgebra, CoactionMap), CoactError> {
    let ua = u.u.adjoint();
    let raw = CoactionMap::from_fn(c.group().clone(), c.algebra().clone(), |b| {
        &(&u.u * &c.coact(b)) * &ua
    })?;
    let graded = coaction_to_grading(&raw, tol)?;
    Ok((graded, raw))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abgroup::FinAbGroup;
    use crate::coact::verify_coaction;
    use crate::matspan::AlgebraBasis;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn unit_cocycle_changes_nothing() {
        let g = FinAbGroup::cyclic(2);
        let c = GradedAlgebra::graded_full_matrix(&g, &[0, 1], tol()).unwrap();
        let u = Cocycle::new(&c, CMatrix::identity(4), tol()).unwrap();
        let (t, _) = twist_by_cocycle(&c, &u, tol()).unwrap();
        for (b, &d) in t.homogeneous_basis().iter().zip(t.degrees()) {
            assert!(c.component(d).contains(b, tol()));
        }
    }

    #[test]
    fn corepresentation_twist_of_trivial_m2() {
        let g = FinAbGroup::cyclic(2);
        let c = GradedAlgebra::trivially_graded(&g, &AlgebraBasis::full(2), tol()).unwrap();
        let e = [CMatrix::unit(2, 2, 0, 0), CMatrix::unit(2, 2, 1, 1)];
        let u = corepresentation_cocycle(&c, &e, tol()).unwrap();
        let (t, raw) = twist_by_cocycle(&c, &u, tol()).unwrap();
        assert!(verify_coaction(&raw, tol()).pass);
        let expected = GradedAlgebra::graded_full_matrix(&g, &[0, 1], tol()).unwrap();
        for d in 0..2 {
            assert!(t
                .component(d)
                .contains_subspace(expected.component(d), tol()));
            assert_eq!(t.component(d).dim(), 2);
        }
    }

    #[test]
    fn inner_coactions_over_z3_pass() {
        let g = FinAbGroup::cyclic(3);
        let c = GradedAlgebra::trivially_graded(&g, &AlgebraBasis::full(3), tol()).unwrap();
        let e: Vec<CMatrix> = (0..3).map(|i| CMatrix::unit(3, 3, i, i)).collect();
        let u = corepresentation_cocycle(&c, &e, tol()).unwrap();
        let (t, raw) = twist_by_cocycle(&c, &u, tol()).unwrap();
        assert!(verify_coaction(&raw, tol()).pass);
        assert_eq!(t.component_dims(), vec![3, 3, 3]);
    }

    #[test]
    fn non_cocycle_is_rejected() {
        let g = FinAbGroup::cyclic(2);
        let c = GradedAlgebra::trivially_graded(&g, &AlgebraBasis::full(2), tol()).unwrap();
        // A unitary in C ⊗ A that is not a corepresentation.
        let u = crate::matspan::pauli::sigma_x().kron(&translation(&g, 1));
        assert!(matches!(
            Cocycle::new(&c, u, tol()),
            Err(CoactError::NotCocycle { .. })
        ));
        let bad = CMatrix::identity(4).scale_real(2.0);
        assert!(matches!(
            Cocycle::new(&c, bad, tol()),
            Err(CoactError::NotUnitary { .. })
        ));
    }
}
