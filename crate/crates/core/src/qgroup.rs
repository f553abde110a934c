//! The quantum groups `C*(G)` and `C(G)` on `ℓ²(G)`, built from the
//! Kac–Takesaki operator `W(δ_a ⊗ δ_b) = δ_a ⊗ δ_{a+b}`.
//!
//! The basis of `ℓ²(G)` follows [`FinAbGroup::elements`]. `λ_g δ_k = δ_{g+k}`
//! and `P_g` is the projection onto `δ_g`, so `W = Σ_g P_g ⊗ λ_g`.

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::abgroup::{Bicharacter, FinAbGroup};
use crate::matspan::legs::{embed, first_leg_slices, flip, second_leg_slices};
use crate::matspan::{
    span_basis, subspace_equal, AlgebraBasis, CMatrix, MatError, Subspace, Tolerance, ONE,
};

/// Default bound on `|G|` for [`build`].
pub const ORDER_CAP: usize = 12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QgroupError {
    #[error("group order {order} exceeds the cap {cap}")]
    CapExceeded { order: usize, cap: usize },
    #[error("element is not in the algebra (residual {residual:.3e})")]
    NotInAlgebra { residual: f64 },
    #[error("matrix must be {expected}x{expected}")]
    Shape { expected: usize },
    #[error("bicharacter matrix must be diagonal (off-diagonal entry {0:.3e})")]
    NotDiagonal(f64),
    #[error("certification of {what} failed (residual {residual:.3e})")]
    Certification { what: &'static str, residual: f64 },
    #[error(transparent)]
    Mat(#[from] MatError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    /// `C*(G)`, spanned by translations.
    GroupAlgebra,
    /// `C(G)`, spanned by indicator projections.
    FunctionAlgebra,
}

/// Residuals recorded while building a model.
#[derive(Debug, Clone, Default, Serialize)]
pub struct Certificate {
    pub unitarity: f64,
    pub pentagon: f64,
    pub comultiplication_w: f64,
    pub coassociativity: f64,
    pub antipode_involution: f64,
    pub antipode_anti_comultiplicative: f64,
    pub first_leg_slices_match: bool,
    pub second_leg_slices_match: bool,
    pub podles_dim: usize,
}

/// A finite quantum group on `ℓ²(G)` with its multiplicative unitary.
///
/// `algebra` is the first-leg slice span of `w`, `dual_algebra` the
/// second-leg slice span; `Δ(x) = W(x ⊗ 1)W*`.
#[derive(Debug, Clone)]
pub struct QuantumGroupModel {
    group: FinAbGroup,
    side: Side,
    w: CMatrix,
    algebra: AlgebraBasis,
    dual_algebra: AlgebraBasis,
    lambda: Vec<CMatrix>,
    indicator: Vec<CMatrix>,
    certificate: Certificate,
}

/// Left translation `λ_g` on `ℓ²(G)`.
pub fn translation(group: &FinAbGroup, g: usize) -> CMatrix {
    let n = group.order();
    let ge = group.element_at(g);
    let mut m = CMatrix::zeros(n, n);
    for (k, e) in group.elements().iter().enumerate() {
        m.set(group.index_of(&group.add(&ge, e)), k, ONE);
    }
    m
}

/// Projection onto `δ_g`.
pub fn indicator(group: &FinAbGroup, g: usize) -> CMatrix {
    let n = group.order();
    CMatrix::unit(n, n, g, g)
}

/// `I δ_g = δ_{−g}`.
pub fn inversion(group: &FinAbGroup) -> CMatrix {
    let n = group.order();
    let mut m = CMatrix::zeros(n, n);
    for (k, e) in group.elements().iter().enumerate() {
        m.set(group.index_of(&group.neg(e)), k, ONE);
    }
    m
}

/// Fourier unitary whose `k`-th column is the character vector
/// `(1/√n) Σ_x conj⟨x,k⟩ δ_x`; it diagonalizes translations:
/// `F* λ_g F = diag(⟨g,k⟩)`.
pub fn fourier(group: &FinAbGroup) -> CMatrix {
    let pairing = Bicharacter::pairing(group);
    let els = group.elements();
    let s = 1.0 / (els.len() as f64).sqrt();
    CMatrix::from_fn(els.len(), els.len(), |x, k| {
        pairing.value(&els[x], &els[k]).conj() * s
    })
}

/// Diagonal matrix with entry `χ(g,h)` at `δ_g ⊗ δ_h`.
pub fn bicharacter_matrix(chi: &Bicharacter) -> CMatrix {
    let diag: Vec<Complex64> = chi.table().into_iter().flatten().collect();
    CMatrix::diagonal(&diag)
}

/// The Kac–Takesaki operator `W = Σ_g P_g ⊗ λ_g`.
pub fn multiplicative_unitary(group: &FinAbGroup) -> CMatrix {
    let n = group.order();
    let mut w = CMatrix::zeros(n * n, n * n);
    for g in 0..n {
        w += &indicator(group, g).kron(&translation(group, g));
    }
    w
}

/// `‖W₂₃W₁₂ − W₁₂W₁₃W₂₃‖`.
pub fn pentagon_residual(w: &CMatrix, n: usize) -> f64 {
    let dims = [n, n, n];
    let w12 = embed(w, &[1, 2], &dims);
    let w13 = embed(w, &[1, 3], &dims);
    let w23 = embed(w, &[2, 3], &dims);
    (&w23 * &w12).distance(&(&(&w12 * &w13) * &w23))
}

impl QuantumGroupModel {
    pub fn group(&self) -> &FinAbGroup {
        &self.group
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn w(&self) -> &CMatrix {
        &self.w
    }

    pub fn algebra(&self) -> &AlgebraBasis {
        &self.algebra
    }

    pub fn dual_algebra(&self) -> &AlgebraBasis {
        &self.dual_algebra
    }

    pub fn lambda(&self, g: usize) -> &CMatrix {
        &self.lambda[g]
    }

    pub fn lambdas(&self) -> &[CMatrix] {
        &self.lambda
    }

    pub fn indicator(&self, g: usize) -> &CMatrix {
        &self.indicator[g]
    }

    pub fn indicators(&self) -> &[CMatrix] {
        &self.indicator
    }

    pub fn certificate(&self) -> &Certificate {
        &self.certificate
    }

    pub fn dim(&self) -> usize {
        self.group.order()
    }

    /// Natural basis of `algebra`: translations or indicators.
    pub fn algebra_elements(&self) -> &[CMatrix] {
        match self.side {
            Side::GroupAlgebra => &self.lambda,
            Side::FunctionAlgebra => &self.indicator,
        }
    }

    fn check_member(&self, x: &CMatrix, tol: Tolerance) -> Result<(), QgroupError> {
        let n = self.dim();
        if x.shape() != (n, n) {
            return Err(QgroupError::Shape { expected: n });
        }
        let residual = self.algebra.subspace().residual(x);
        if residual >= tol.eps_eq {
            return Err(QgroupError::NotInAlgebra { residual });
        }
        Ok(())
    }

    fn delta_raw(&self, x: &CMatrix) -> CMatrix {
        let id = CMatrix::identity(self.dim());
        &(&self.w * &x.kron(&id)) * &self.w.adjoint()
    }

    fn antipode_raw(&self, x: &CMatrix) -> CMatrix {
        let i = inversion(&self.group);
        &(&i * x) * &i
    }

    /// `Δ(x) = W(x ⊗ 1)W*`.
    pub fn comultiplication(&self, x: &CMatrix, tol: Tolerance) -> Result<CMatrix, QgroupError> {
        self.check_member(x, tol)?;
        Ok(self.delta_raw(x))
    }

    /// `R(x) = I x I` with `I δ_g = δ_{−g}`; on `C*(G)` this is `λ_g ↦ λ_{−g}`
    /// and on `C(G)` it is `f ↦ f(−·)`.
    pub fn unitary_antipode(&self, x: &CMatrix, tol: Tolerance) -> Result<CMatrix, QgroupError> {
        self.check_member(x, tol)?;
        Ok(self.antipode_raw(x))
    }

    /// `(Δ ⊗ id)X = W₁₂ X₁₃ W₁₂*` for `X` on three legs' worth of `ℓ²(G)`.
    pub fn delta_first_leg(&self, x: &CMatrix) -> CMatrix {
        let n = self.dim();
        let dims = [n, n, n];
        let w12 = embed(&self.w, &[1, 2], &dims);
        &(&w12 * &embed(x, &[1, 3], &dims)) * &w12.adjoint()
    }

    /// `(id ⊗ Δ)X = W₂₃ X₁₂ W₂₃*`.
    pub fn delta_second_leg(&self, x: &CMatrix) -> CMatrix {
        let n = self.dim();
        let dims = [n, n, n];
        let w23 = embed(&self.w, &[2, 3], &dims);
        &(&w23 * &embed(x, &[1, 2], &dims)) * &w23.adjoint()
    }

    /// `dim span Δ(A)(1 ⊗ A)`, which must be `|G|²`.
    pub fn podles_dim(&self, tol: Tolerance) -> usize {
        let id = CMatrix::identity(self.dim());
        let mut products = Vec::new();
        for a in self.algebra_elements() {
            let d = self.delta_raw(a);
            for b in self.algebra_elements() {
                products.push(&d * &id.kron(b));
            }
        }
        span_basis(&products, tol).map(|s| s.dim()).unwrap_or(0)
    }

    fn certify(mut self, tol: Tolerance) -> Result<Self, QgroupError> {
        let n = self.dim();
        let strict = |what: &'static str, residual: f64| {
            if residual < tol.eps_eq {
                Ok(residual)
            } else {
                Err(QgroupError::Certification { what, residual })
            }
        };
        let mut c = Certificate {
            unitarity: strict("unitarity", self.w.unitarity_residual())?,
            pentagon: strict("pentagon", pentagon_residual(&self.w, n))?,
            ..Certificate::default()
        };

        let dims = [n, n, n];
        let w12 = embed(&self.w, &[1, 2], &dims);
        let w13 = embed(&self.w, &[1, 3], &dims);
        let lhs = self.delta_second_leg(&self.w);
        c.comultiplication_w = strict("comultiplication", lhs.distance(&(&w12 * &w13)))?;

        let sigma = flip(n, n);
        let mut coassoc: f64 = 0.0;
        let mut inv: f64 = 0.0;
        let mut opp: f64 = 0.0;
        for a in self.algebra_elements() {
            let d = self.delta_raw(a);
            coassoc = coassoc.max(
                self.delta_first_leg(&d)
                    .distance(&self.delta_second_leg(&d)),
            );
            let r = self.antipode_raw(a);
            inv = inv.max(self.antipode_raw(&r).distance(a));
            let ii = inversion(&self.group).kron(&inversion(&self.group));
            let rr = &(&ii * &d) * &ii;
            let flipped = &(&sigma * &rr) * &sigma.adjoint();
            opp = opp.max(self.delta_raw(&r).distance(&flipped));
        }
        c.coassociativity = strict("coassociativity", coassoc)?;
        c.antipode_involution = strict("antipode involution", inv)?;
        c.antipode_anti_comultiplicative = strict("antipode", opp)?;

        let first = span_basis(&first_leg_slices(&self.w, n, n), tol)?;
        let second = span_basis(&second_leg_slices(&self.w, n, n), tol)?;
        c.first_leg_slices_match = subspace_equal(&first, self.algebra.subspace(), tol)?;
        c.second_leg_slices_match = subspace_equal(&second, self.dual_algebra.subspace(), tol)?;
        if !(c.first_leg_slices_match && c.second_leg_slices_match) {
            return Err(QgroupError::Certification {
                what: "slice spans",
                residual: first.containment_residual(self.algebra.subspace()),
            });
        }
        c.podles_dim = self.podles_dim(tol);
        if c.podles_dim != n * n {
            return Err(QgroupError::Certification {
                what: "Podleś span",
                residual: (n * n - c.podles_dim) as f64,
            });
        }
        self.certificate = c;
        Ok(self)
    }

    /// The dual quantum group, with `Ŵ = ΣW*Σ`.
    pub fn dual_model(&self, tol: Tolerance) -> Result<Self, QgroupError> {
        let n = self.dim();
        let sigma = flip(n, n);
        let w_hat = &(&sigma * &self.w.adjoint()) * &sigma;
        let side = match self.side {
            Side::GroupAlgebra => Side::FunctionAlgebra,
            Side::FunctionAlgebra => Side::GroupAlgebra,
        };
        Self {
            group: self.group.clone(),
            side,
            w: w_hat,
            algebra: self.dual_algebra.clone(),
            dual_algebra: self.algebra.clone(),
            lambda: self.lambda.clone(),
            indicator: self.indicator.clone(),
            certificate: Certificate::default(),
        }
        .certify(tol)
    }
}

fn algebra_from(elements: &[CMatrix], tol: Tolerance) -> Result<AlgebraBasis, QgroupError> {
    Ok(AlgebraBasis::certify(span_basis(elements, tol)?, tol)?)
}

/// Builds and certifies `(C*(G), Δ)` on `ℓ²(G)`, with `|G| ≤ ORDER_CAP`.
pub fn build(group: &FinAbGroup, tol: Tolerance) -> Result<QuantumGroupModel, QgroupError> {
    build_with_cap(group, ORDER_CAP, tol)
}

pub fn build_with_cap(
    group: &FinAbGroup,
    cap: usize,
    tol: Tolerance,
) -> Result<QuantumGroupModel, QgroupError> {
    let n = group.order();
    if n > cap {
        return Err(QgroupError::CapExceeded { order: n, cap });
    }
    let lambda: Vec<CMatrix> = (0..n).map(|g| translation(group, g)).collect();
    let indicator: Vec<CMatrix> = (0..n).map(|g| self::indicator(group, g)).collect();
    QuantumGroupModel {
        group: group.clone(),
        side: Side::GroupAlgebra,
        w: multiplicative_unitary(group),
        algebra: algebra_from(&lambda, tol)?,
        dual_algebra: algebra_from(&indicator, tol)?,
        lambda,
        indicator,
        certificate: Certificate::default(),
    }
    .certify(tol)
}

/// Residuals of the two bicharacter equations for a diagonal `χ` on
/// `ℓ²(G) ⊗ ℓ²(H)`.
#[derive(Debug, Clone, Serialize)]
pub struct BicharacterReport {
    pub first_leg: f64,
    pub second_leg: f64,
    pub pass: bool,
}

/// Checks `(Δ̂_G ⊗ id)χ = χ₂₃χ₁₃` and `(id ⊗ Δ̂_H)χ = χ₁₂χ₁₃`, where `Δ̂`
/// is the comultiplication of `C(G)` (convolution on indicators).
pub fn verify_bicharacter_equations(
    g: &QuantumGroupModel,
    h: &QuantumGroupModel,
    chi: &CMatrix,
    tol: Tolerance,
) -> Result<BicharacterReport, QgroupError> {
    let (ng, nh) = (g.dim(), h.dim());
    if chi.shape() != (ng * nh, ng * nh) {
        return Err(QgroupError::Shape { expected: ng * nh });
    }
    let off = chi.off_diagonal_max();
    if off > tol.eps_eq {
        return Err(QgroupError::NotDiagonal(off));
    }
    let d = |i: usize| chi.get(i, i);
    let mut first: f64 = 0.0;
    for a in 0..ng {
        for b in 0..ng {
            let sum = g
                .group
                .index_of(&g.group.add(&g.group.element_at(a), &g.group.element_at(b)));
            for y in 0..nh {
                let lhs = d(sum * nh + y);
                let rhs = d(b * nh + y) * d(a * nh + y);
                first = first.max((lhs - rhs).norm());
            }
        }
    }
    let mut second: f64 = 0.0;
    for x in 0..ng {
        for a in 0..nh {
            for b in 0..nh {
                let sum = h
                    .group
                    .index_of(&h.group.add(&h.group.element_at(a), &h.group.element_at(b)));
                let lhs = d(x * nh + sum);
                let rhs = d(x * nh + a) * d(x * nh + b);
                second = second.max((lhs - rhs).norm());
            }
        }
    }
    Ok(BicharacterReport {
        first_leg: first,
        second_leg: second,
        pass: first < tol.eps_eq && second < tol.eps_eq,
    })
}

/// Operator form of the first bicharacter equation, using the dual
/// model's comultiplication: `‖(Δ̂ ⊗ id)χ − χ₂₃χ₁₃‖` with `χ` on
/// `ℓ²(G) ⊗ ℓ²(G)`. Used to cross-check the index form.
pub fn bicharacter_first_leg_operator_residual(dual: &QuantumGroupModel, chi: &CMatrix) -> f64 {
    let n = dual.dim();
    let dims = [n, n, n];
    let lhs = dual.delta_first_leg(chi);
    let rhs = &embed(chi, &[2, 3], &dims) * &embed(chi, &[1, 3], &dims);
    lhs.distance(&rhs)
}

/// Rewrites `W = Σ P_g ⊗ λ_g` in the Fourier basis of the second leg,
/// where it becomes the diagonal of the canonical pairing.
pub fn reduced_bicharacter_diagonal(model: &QuantumGroupModel) -> CMatrix {
    let f = fourier(&model.group);
    let id = CMatrix::identity(model.dim());
    let u = id.kron(&f);
    &(&u.adjoint() * &model.w) * &u
}

/// Subspace spanned by the algebra's natural basis, for quick membership.
pub fn natural_span(model: &QuantumGroupModel, tol: Tolerance) -> Subspace {
    span_basis(model.algebra_elements(), tol).expect("basis matrices share a shape")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abgroup::FinAbGroup;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn z2_w_is_block_diagonal() {
        let g = FinAbGroup::cyclic(2);
        let w = multiplicative_unitary(&g);
        // Oracle: evaluate δ_a ⊗ δ_b ↦ δ_a ⊗ δ_{a+b} directly.
        let mut expect = CMatrix::zeros(4, 4);
        for a in 0..2 {
            for b in 0..2 {
                expect.set(a * 2 + (a + b) % 2, a * 2 + b, ONE);
            }
        }
        assert_eq!(w, expect);
        let sx = crate::matspan::pauli::sigma_x();
        assert_eq!(w.block(2, 2, 2, 2), sx);
        assert_eq!(w.block(0, 0, 2, 2), CMatrix::identity(2));
    }

    #[test]
    fn pentagon_is_exact() {
        for cycles in [vec![2], vec![3], vec![2, 2]] {
            let g = FinAbGroup::new(cycles).unwrap();
            let n = g.order();
            assert_eq!(pentagon_residual(&multiplicative_unitary(&g), n), 0.0);
        }
    }

    #[test]
    fn z3_model() {
        let m = build(&FinAbGroup::cyclic(3), tol()).unwrap();
        assert_eq!(m.algebra().dim(), 3);
        assert_eq!(m.dual_algebra().dim(), 3);
        assert!(m.algebra().is_commutative(tol()));
        assert_eq!(m.certificate().podles_dim, 9);
    }

    #[test]
    fn comultiplication_of_translations() {
        let m = build(&FinAbGroup::cyclic(2), tol()).unwrap();
        let id = CMatrix::identity(2);
        assert_eq!(m.comultiplication(&id, tol()).unwrap(), id.kron(&id));
        let l1 = m.lambda(1).clone();
        assert!(
            m.comultiplication(&l1, tol())
                .unwrap()
                .distance(&l1.kron(&l1))
                < 1e-15
        );
        let x = m.lambda(0) + m.lambda(1);
        let expect = &m.lambda(0).kron(m.lambda(0)) + &l1.kron(&l1);
        assert!(m.comultiplication(&x, tol()).unwrap().distance(&expect) < 1e-15);
        assert!(matches!(
            m.comultiplication(m.indicator(0), tol()),
            Err(QgroupError::NotInAlgebra { .. })
        ));
    }

    #[test]
    fn antipode_inverts() {
        let m = build(&FinAbGroup::cyclic(4), tol()).unwrap();
        assert_eq!(
            m.unitary_antipode(m.lambda(1), tol()).unwrap(),
            *m.lambda(3)
        );
        assert_eq!(
            m.unitary_antipode(m.lambda(0), tol()).unwrap(),
            *m.lambda(0)
        );
        // R is an anti-homomorphism on the commutative algebra.
        let x = m.lambda(1) + &m.lambda(2).scale(Complex64::new(0.5, -2.0));
        let y = m.lambda(3) + m.lambda(1);
        let rxy = m.unitary_antipode(&(&x * &y), tol()).unwrap();
        let ry = m.unitary_antipode(&y, tol()).unwrap();
        let rx = m.unitary_antipode(&x, tol()).unwrap();
        assert!(rxy.distance(&(&ry * &rx)) < 1e-12);
        let back = m.unitary_antipode(&rx, tol()).unwrap();
        assert!(back.distance(&x) < 1e-14);
    }

    #[test]
    fn dual_comultiplication_is_convolution() {
        let m = build(&FinAbGroup::cyclic(2), tol()).unwrap();
        let d = m.dual_model(tol()).unwrap();
        assert_eq!(d.side(), Side::FunctionAlgebra);
        let p = |g: usize| indicator(&FinAbGroup::cyclic(2), g);
        let got = d.comultiplication(&p(1), tol()).unwrap();
        let expect = &p(0).kron(&p(1)) + &p(1).kron(&p(0));
        assert!(got.distance(&expect) < 1e-15);
        assert_eq!(pentagon_residual(d.w(), 2), 0.0);
        // Dual comultiplication equation: (Δ̂ ⊗ id)W = W₂₃W₁₃.
        let dims = [2, 2, 2];
        let lhs = d.delta_first_leg(m.w());
        let rhs = &embed(m.w(), &[2, 3], &dims) * &embed(m.w(), &[1, 3], &dims);
        assert!(lhs.distance(&rhs) < 1e-14);
    }

    #[test]
    fn double_dual_returns_the_original() {
        let m = build(&FinAbGroup::new(vec![2, 2]).unwrap(), tol()).unwrap();
        let dd = m.dual_model(tol()).unwrap().dual_model(tol()).unwrap();
        assert_eq!(dd.w(), m.w());
        for g in 0..4 {
            let a = m.comultiplication(m.lambda(g), tol()).unwrap();
            let b = dd.comultiplication(m.lambda(g), tol()).unwrap();
            assert!(a.distance(&b) < 1e-15);
        }
    }

    #[test]
    fn bicharacter_equations() {
        let g = FinAbGroup::cyclic(2);
        let m = build(&g, tol()).unwrap();
        let chi = bicharacter_matrix(&Bicharacter::cyclic(2, 1));
        assert!(
            verify_bicharacter_equations(&m, &m, &chi, tol())
                .unwrap()
                .pass
        );
        let one = CMatrix::identity(4);
        assert!(
            verify_bicharacter_equations(&m, &m, &one, tol())
                .unwrap()
                .pass
        );
        let mut bad = chi.clone();
        bad.set(3, 3, bad.get(3, 3) + Complex64::new(1e-2, 0.0));
        let r = verify_bicharacter_equations(&m, &m, &bad, tol()).unwrap();
        assert!(!r.pass && r.first_leg > 1e-3);
        assert!(matches!(
            verify_bicharacter_equations(&m, &m, &multiplicative_unitary(&g), tol()),
            Err(QgroupError::NotDiagonal(_))
        ));
        let d = m.dual_model(tol()).unwrap();
        assert!(bicharacter_first_leg_operator_residual(&d, &chi) < 1e-14);
        assert!(bicharacter_first_leg_operator_residual(&d, &bad) > 1e-3);
    }

    #[test]
    fn reduced_bicharacter_is_the_pairing() {
        for cycles in [vec![3], vec![2, 2], vec![4]] {
            let g = FinAbGroup::new(cycles).unwrap();
            let m = build(&g, tol()).unwrap();
            let diag = reduced_bicharacter_diagonal(&m);
            let expect = bicharacter_matrix(&Bicharacter::pairing(&g));
            assert!(diag.distance(&expect) < 1e-12);
            assert!(
                verify_bicharacter_equations(&m, &m, &diag, tol())
                    .unwrap()
                    .pass
            );
        }
    }

    #[test]
    fn cap_is_enforced() {
        let g = FinAbGroup::cyclic(13);
        assert!(matches!(
            build(&g, tol()),
            Err(QgroupError::CapExceeded { .. })
        ));
    }
}
