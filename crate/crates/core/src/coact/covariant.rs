use serde::Serialize;

use super::{CoactError, GradedAlgebra};
use crate::abgroup::FinAbGroup;
use crate::matspan::{CMatrix, Subspace, Tolerance};
use crate::qgroup::{indicator, multiplicative_unitary, translation};

/// `K = ⊕_g K_g`, given by the projections `E_g`.
#[derive(Debug, Clone)]
pub struct GradedHilbertSpace {
    group: FinAbGroup,
    dim: usize,
    projections: Vec<CMatrix>,
}

impl GradedHilbertSpace {
    pub fn new(
        group: FinAbGroup,
        projections: Vec<CMatrix>,
        tol: Tolerance,
    ) -> Result<Self, CoactError> {
        if projections.len() != group.order() || projections.is_empty() {
            return Err(CoactError::Mismatch);
        }
        let dim = projections[0].rows();
        if projections.iter().any(|p| p.shape() != (dim, dim)) {
            return Err(CoactError::Mismatch);
        }
        let mut sum = CMatrix::zeros(dim, dim);
        let mut worst: f64 = 0.0;
        for (a, p) in projections.iter().enumerate() {
            worst = worst.max((p * p).distance(p)).max(p.adjoint().distance(p));
            for q in &projections[a + 1..] {
                worst = worst.max((p * q).max_abs());
            }
            sum += p;
        }
        worst = worst.max(sum.distance(&CMatrix::identity(dim)));
        if worst >= tol.eps_eq {
            return Err(CoactError::GradingViolated {
                what: "projections are not an orthogonal decomposition of the identity",
                residual: worst,
            });
        }
        Ok(Self {
            group,
            dim,
            projections,
        })
    }

    /// `K = C^m ⊗ ℓ²(G)` with `E_a = 1 ⊗ P_a`.
    pub fn regular(group: &FinAbGroup, m: usize) -> Self {
        let one = CMatrix::identity(m);
        Self {
            group: group.clone(),
            dim: m * group.order(),
            projections: (0..group.order())
                .map(|a| one.kron(&indicator(group, a)))
                .collect(),
        }
    }

    pub fn group(&self) -> &FinAbGroup {
        &self.group
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn projection(&self, g: usize) -> &CMatrix {
        &self.projections[g]
    }

    pub fn projections(&self) -> &[CMatrix] {
        &self.projections
    }

    pub fn component_dims(&self) -> Vec<usize> {
        self.projections
            .iter()
            .map(|p| p.trace().re.round() as usize)
            .collect()
    }

    /// `U = Σ_g E_g ⊗ λ_g`.
    pub fn corepresentation(&self) -> CMatrix {
        let order = self.group.order();
        let mut u = CMatrix::zeros(self.dim * order, self.dim * order);
        for (g, e) in self.projections.iter().enumerate() {
            u += &e.kron(&translation(&self.group, g));
        }
        u
    }

    /// `(id⊗Δ)U − U₁₂U₁₃`, with `Δ` implemented by `W`.
    pub fn corepresentation_residual(&self) -> f64 {
        let order = self.group.order();
        let u = self.corepresentation();
        let w23 = CMatrix::identity(self.dim).kron(&multiplicative_unitary(&self.group));
        let one = CMatrix::identity(order);
        let lhs = &(&w23 * &u.kron(&one)) * &w23.adjoint();
        let u12 = u.kron(&one);
        let u13 = {
            let mut m = CMatrix::zeros(self.dim * order * order, self.dim * order * order);
            for (g, e) in self.projections.iter().enumerate() {
                m += &e.kron(&one).kron(&translation(&self.group, g));
            }
            m
        };
        lhs.distance(&(&u12 * &u13))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CovariantReport {
    pub multiplicativity_residual: f64,
    pub star_residual: f64,
    /// `max ‖E_{g+h} φ(x) E_h − φ(x) E_h‖` over homogeneous `x ∈ C_g`.
    pub covariance_residual: f64,
    /// `‖U(φ(x)⊗1)U* − φ(x)⊗λ_g‖` over homogeneous `x ∈ C_g`.
    pub corepresentation_form_residual: f64,
    pub rank: usize,
    pub faithful: bool,
    pub pass: bool,
}

/// A representation `φ: C → B(K)` on a graded space with `φ(C_g)K_h ⊆ K_{g+h}`.
#[derive(Debug, Clone)]
pub struct CovariantRep {
    algebra: GradedAlgebra,
    space: GradedHilbertSpace,
    /// `φ` on the homogeneous basis of `algebra`.
    images: Vec<CMatrix>,
    report: CovariantReport,
}

impl CovariantRep {
    pub fn new(
        algebra: GradedAlgebra,
        space: GradedHilbertSpace,
        images: Vec<CMatrix>,
        tol: Tolerance,
    ) -> Result<Self, CoactError> {
        if algebra.group() != space.group() || images.len() != algebra.dim() {
            return Err(CoactError::Mismatch);
        }
        if images.iter().any(|m| m.shape() != (space.dim, space.dim)) {
            return Err(CoactError::Mismatch);
        }
        let mut rep = Self {
            algebra,
            space,
            images,
            report: CovariantReport {
                multiplicativity_residual: 0.0,
                star_residual: 0.0,
                covariance_residual: 0.0,
                corepresentation_form_residual: 0.0,
                rank: 0,
                faithful: false,
                pass: false,
            },
        };
        rep.report = rep.certify(tol);
        let r = &rep.report;
        if !r.faithful {
            return Err(CoactError::NotFaithful {
                rank: r.rank,
                dim: rep.algebra.dim(),
            });
        }
        if !r.pass {
            let residual = r
                .multiplicativity_residual
                .max(r.star_residual)
                .max(r.covariance_residual)
                .max(r.corepresentation_form_residual);
            return Err(CoactError::GradingViolated {
                what: "not a covariant representation",
                residual,
            });
        }
        Ok(rep)
    }

    fn certify(&self, tol: Tolerance) -> CovariantReport {
        let basis = self.algebra.homogeneous_basis();
        let degrees = self.algebra.degrees();
        let group = self.space.group();
        let scale = |m: &CMatrix| m.norm().max(1.0);
        let mut mult: f64 = 0.0;
        let mut star: f64 = 0.0;
        for (i, bi) in basis.iter().enumerate() {
            let a = self.apply(&bi.adjoint());
            star = star.max(a.distance(&self.images[i].adjoint()) / scale(&a));
            for (j, bj) in basis.iter().enumerate() {
                let lhs = self.apply(&(bi * bj));
                let rhs = &self.images[i] * &self.images[j];
                mult = mult.max(lhs.distance(&rhs) / scale(&rhs));
            }
        }
        let mut cov: f64 = 0.0;
        let mut form: f64 = 0.0;
        let u = self.space.corepresentation();
        let ua = u.adjoint();
        let one = CMatrix::identity(group.order());
        for (x, &g) in self.images.iter().zip(degrees) {
            let ge = group.element_at(g);
            for h in 0..group.order() {
                let gh = group.index_of(&group.add(&ge, &group.element_at(h)));
                let xe = x * self.space.projection(h);
                cov = cov.max((self.space.projection(gh) * &xe).distance(&xe));
            }
            let lhs = &(&u * &x.kron(&one)) * &ua;
            form = form.max(lhs.distance(&x.kron(&translation(group, g))));
        }
        let d = self.space.dim;
        let rank = Subspace::spanned_by(d, d, &self.images, tol)
            .map(|s| s.dim())
            .unwrap_or(0);
        let faithful = rank == self.algebra.dim();
        CovariantReport {
            multiplicativity_residual: mult,
            star_residual: star,
            covariance_residual: cov,
            corepresentation_form_residual: form,
            rank,
            faithful,
            pass: faithful
                && mult < tol.eps_eq
                && star < tol.eps_eq
                && cov < tol.eps_eq
                && form < tol.eps_eq,
        }
    }

    pub fn algebra(&self) -> &GradedAlgebra {
        &self.algebra
    }

    pub fn space(&self) -> &GradedHilbertSpace {
        &self.space
    }

    pub fn report(&self) -> &CovariantReport {
        &self.report
    }

    /// `φ` on the homogeneous basis.
    pub fn images(&self) -> &[CMatrix] {
        &self.images
    }

    pub fn apply(&self, x: &CMatrix) -> CMatrix {
        let d = self.space.dim;
        let mut out = CMatrix::zeros(d, d);
        for (z, m) in self.algebra.homogeneous_coords(x).iter().zip(&self.images) {
            if z.norm() > 1e-15 {
                out += &m.scale(*z);
            }
        }
        out
    }
}

/// `φ(c) = c ⊗ λ_g` for `c ∈ C_g` on `C^n ⊗ ℓ²(G)`, graded by the second leg.
pub fn canonical_covariant_rep(
    c: &GradedAlgebra,
    tol: Tolerance,
) -> Result<CovariantRep, CoactError> {
    let space = GradedHilbertSpace::regular(c.group(), c.ambient_dim());
    let images = c
        .homogeneous_basis()
        .iter()
        .zip(c.degrees())
        .map(|(b, &g)| b.kron(&translation(c.group(), g)))
        .collect();
    CovariantRep::new(c.clone(), space, images, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matspan::AlgebraBasis;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn group_algebra_rep_is_lambda_tensor_lambda() {
        let g = FinAbGroup::cyclic(2);
        let c = GradedAlgebra::group_algebra(&g, tol()).unwrap();
        let rep = canonical_covariant_rep(&c, tol()).unwrap();
        let l = translation(&g, 1);
        assert!(rep.apply(&l).distance(&l.kron(&l)) < 1e-14);
        assert_eq!(rep.space().component_dims(), vec![2, 2]);
        assert!(rep.space().corepresentation_residual() < 1e-14);
    }

    #[test]
    fn trivially_graded_rep_is_amplification() {
        let g = FinAbGroup::cyclic(3);
        let c = GradedAlgebra::trivially_graded(&g, &AlgebraBasis::full(2), tol()).unwrap();
        let rep = canonical_covariant_rep(&c, tol()).unwrap();
        let x = CMatrix::unit(2, 2, 0, 1);
        assert!(rep.apply(&x).distance(&x.kron(&CMatrix::identity(3))) < 1e-14);
    }

    #[test]
    fn graded_m2_rep_is_faithful_and_covariant() {
        let g = FinAbGroup::cyclic(2);
        let c = GradedAlgebra::graded_full_matrix(&g, &[0, 1], tol()).unwrap();
        let rep = canonical_covariant_rep(&c, tol()).unwrap();
        let r = rep.report();
        assert_eq!(r.rank, 4);
        assert_eq!(r.covariance_residual, 0.0);
        assert!(r.corepresentation_form_residual < 1e-14);
    }

    #[test]
    fn mismatched_grading_is_rejected() {
        let g = FinAbGroup::cyclic(2);
        let c = GradedAlgebra::graded_full_matrix(&g, &[0, 1], tol()).unwrap();
        let space = GradedHilbertSpace::regular(&g, 2);
        // φ(c) = c ⊗ 1 does not shift degrees.
        let images = c
            .homogeneous_basis()
            .iter()
            .map(|b| b.kron(&CMatrix::identity(2)))
            .collect();
        assert!(CovariantRep::new(c, space, images, tol()).is_err());
    }

    #[test]
    fn non_orthogonal_projections_rejected() {
        let g = FinAbGroup::cyclic(2);
        let p = CMatrix::identity(2);
        assert!(GradedHilbertSpace::new(g, vec![p.clone(), p], tol()).is_err());
    }
}
