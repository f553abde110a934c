use num_complex::Complex64;
use serde::Serialize;

use super::{transport_grading, CoactError, GradedAlgebra};
use crate::abgroup::{Bicharacter, FinAbGroup, GroupHom};
use crate::matspan::{CMatrix, Tolerance};

/// The `H`-action `θ_h(c) = χ(g,h)·c` for `c ∈ C_g`.
#[derive(Debug, Clone)]
pub struct BicharacterAction {
    algebra: GradedAlgebra,
    chi: Bicharacter,
    report: ActionReport,
}

#[derive(Debug, Clone, Serialize)]
pub struct ActionReport {
    pub multiplicativity_residual: f64,
    pub star_residual: f64,
    /// `θ_{h+h'} − θ_h θ_{h'}` on the homogeneous basis.
    pub homomorphism_residual: f64,
    pub pass: bool,
}

impl BicharacterAction {
    pub fn algebra(&self) -> &GradedAlgebra {
        &self.algebra
    }

    pub fn bicharacter(&self) -> &Bicharacter {
        &self.chi
    }

    pub fn acting_group(&self) -> &FinAbGroup {
        self.chi.right()
    }

    pub fn report(&self) -> &ActionReport {
        &self.report
    }

    fn phase(&self, g: usize, h: usize) -> Complex64 {
        let (gl, hr) = (self.chi.left(), self.chi.right());
        self.chi.value(&gl.element_at(g), &hr.element_at(h))
    }

    pub fn apply(&self, h: usize, x: &CMatrix) -> CMatrix {
        let n = self.algebra.ambient_dim();
        let mut out = CMatrix::zeros(n, n);
        for (g, part) in self.algebra.decompose(x).iter().enumerate() {
            out += &part.scale(self.phase(g, h));
        }
        out
    }

    /// The same action as an `Ĥ`-grading, with `Ĥ` identified with `H` by
    /// the pairing: `C_g` moves to the degree `k` with `χ(g,·) = ⟨·,k⟩`.
    pub fn induced_grading(&self, tol: Tolerance) -> Result<GradedAlgebra, CoactError> {
        transport_grading(&self.algebra, &character_map(&self.chi), tol)
    }
}

/// `g ↦ k` with `χ(g,h) = ⟨h,k⟩` for all `h`.
pub fn character_map(chi: &Bicharacter) -> GroupHom {
    let f = chi.dual().as_hom();
    let target = f.target().clone();
    let neg = GroupHom::identity(&target);
    let matrix = neg
        .matrix()
        .iter()
        .map(|row| row.iter().map(|&a| -(a as i64)).collect())
        .collect();
    let neg = GroupHom::new(target.clone(), target, matrix).expect("negation is a homomorphism");
    neg.compose(&f).expect("composable")
}

pub fn action_from_bicharacter(
    c: &GradedAlgebra,
    chi: &Bicharacter,
    tol: Tolerance,
) -> Result<BicharacterAction, CoactError> {
    if chi.left() != c.group() {
        return Err(CoactError::Mismatch);
    }
    let mut action = BicharacterAction {
        algebra: c.clone(),
        chi: chi.clone(),
        report: ActionReport {
            multiplicativity_residual: 0.0,
            star_residual: 0.0,
            homomorphism_residual: 0.0,
            pass: false,
        },
    };
    let h_group = chi.right().clone();
    let basis = c.homogeneous_basis();
    let mut mult: f64 = 0.0;
    let mut star: f64 = 0.0;
    let mut hom: f64 = 0.0;
    for h in 0..h_group.order() {
        let images: Vec<CMatrix> = basis.iter().map(|b| action.apply(h, b)).collect();
        for (i, bi) in basis.iter().enumerate() {
            star = star.max(
                action
                    .apply(h, &bi.adjoint())
                    .distance(&images[i].adjoint()),
            );
            for (j, bj) in basis.iter().enumerate() {
                mult = mult.max(
                    action
                        .apply(h, &(bi * bj))
                        .distance(&(&images[i] * &images[j])),
                );
            }
        }
        let he = h_group.element_at(h);
        for k in 0..h_group.order() {
            let hk = h_group.index_of(&h_group.add(&he, &h_group.element_at(k)));
            for b in basis {
                let lhs = action.apply(hk, b);
                let rhs = action.apply(h, &action.apply(k, b));
                hom = hom.max(lhs.distance(&rhs));
            }
        }
    }
    action.report = ActionReport {
        multiplicativity_residual: mult,
        star_residual: star,
        homomorphism_residual: hom,
        pass: mult < tol.eps_eq && star < tol.eps_eq && hom < tol.eps_eq,
    };
    Ok(action)
}
