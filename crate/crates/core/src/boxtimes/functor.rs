use super::crossed::{build_via_heisenberg, equivalent, CrossedProduct};
use super::BoxError;
use crate::abgroup::{pullback, Bicharacter, GroupHom};
use crate::coact::{transport_grading, GradedAlgebra};
use crate::heis::canonical_heisenberg;
use crate::matspan::{
    find_generator_isomorphism, find_generator_morphism, AlgebraBasis, CMatrix, IsoSearch,
    LinearMap, Subspace, Tolerance,
};

/// A grading-preserving *-homomorphism `C₁ → C₂` over the same group.
#[derive(Debug, Clone)]
pub struct GradedMorphism {
    source: GradedAlgebra,
    target: GradedAlgebra,
    images: Vec<CMatrix>,
    injective: bool,
    surjective: bool,
}

impl GradedMorphism {
    pub fn new(
        source: &GradedAlgebra,
        target: &GradedAlgebra,
        f: impl Fn(&CMatrix) -> CMatrix,
        tol: Tolerance,
    ) -> Result<Self, BoxError> {
        if source.group() != target.group() {
            return Err(BoxError::GroupMismatch);
        }
        let images: Vec<CMatrix> = source.homogeneous_basis().iter().map(f).collect();
        let n = target.ambient_dim();
        if images.iter().any(|m| m.shape() != (n, n)) {
            return Err(BoxError::GroupMismatch);
        }
        let mut equivariance: f64 = 0.0;
        for (y, &g) in images.iter().zip(source.degrees()) {
            equivariance = equivariance.max(target.component(g).residual(y));
        }
        if equivariance >= tol.eps_eq {
            return Err(BoxError::NotEquivariant {
                residual: equivariance,
            });
        }
        let mut m = Self {
            source: source.clone(),
            target: target.clone(),
            images,
            injective: false,
            surjective: false,
        };
        let basis = source.homogeneous_basis();
        let mut worst: f64 = 0.0;
        for (i, bi) in basis.iter().enumerate() {
            worst = worst.max(m.apply(&bi.adjoint()).distance(&m.images[i].adjoint()));
            for (j, bj) in basis.iter().enumerate() {
                let rhs = &m.images[i] * &m.images[j];
                worst = worst.max(m.apply(&(bi * bj)).distance(&rhs) / rhs.norm().max(1.0));
            }
        }
        if worst >= tol.eps_eq {
            return Err(BoxError::NotMorphism { residual: worst });
        }
        let rank = Subspace::spanned_by(n, n, &m.images, tol)?.dim();
        m.injective = rank == source.dim();
        m.surjective = rank == target.dim();
        Ok(m)
    }

    pub fn identity(c: &GradedAlgebra, tol: Tolerance) -> Result<Self, BoxError> {
        Self::new(c, c, CMatrix::clone, tol)
    }

    pub fn source(&self) -> &GradedAlgebra {
        &self.source
    }

    pub fn target(&self) -> &GradedAlgebra {
        &self.target
    }

    pub fn is_injective(&self) -> bool {
        self.injective
    }

    pub fn is_surjective(&self) -> bool {
        self.surjective
    }

    pub fn apply(&self, x: &CMatrix) -> CMatrix {
        let n = self.target.ambient_dim();
        let mut out = CMatrix::zeros(n, n);
        for (z, m) in self.source.homogeneous_coords(x).iter().zip(&self.images) {
            if z.norm() > 1e-15 {
                out += &m.scale(*z);
            }
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct FunctorMap {
    pub map: LinearMap,
    pub injective: bool,
    pub surjective: bool,
    pub multiplicativity_residual: f64,
}

/// `f ⊠ g: ι_{C₁}(c)ι_{D₁}(d) ↦ ι_{C₂}(f c)ι_{D₂}(g d)`, certified well
/// defined and multiplicative.
pub fn functor_map(
    f: &GradedMorphism,
    g: &GradedMorphism,
    x1: &CrossedProduct,
    x2: &CrossedProduct,
    tol: Tolerance,
) -> Result<FunctorMap, BoxError> {
    let cs = x1.c().homogeneous_basis();
    let ds = x1.d().homogeneous_basis();
    let v = x1.family(cs, ds);
    let fc: Vec<CMatrix> = cs.iter().map(|c| f.apply(c)).collect();
    let gd: Vec<CMatrix> = ds.iter().map(|d| g.apply(d)).collect();
    let w = x2.family(&fc, &gd);
    let search = find_generator_morphism(x1.algebra(), &v, x2.algebra(), &w, tol);
    let multiplicativity_residual = search.multiplicativity_residual;
    match search.map {
        Some(map) => Ok(FunctorMap {
            injective: map.is_injective(tol),
            surjective: map.is_surjective(tol),
            map,
            multiplicativity_residual,
        }),
        None => Err(BoxError::WellDefinedness(
            search.failure.expect("a failed search records its reason"),
        )),
    }
}

/// `D ⊠_χ̂ C` from the canonical pair of `χ̂`, with the equivalence matching
/// `ι_C ↔ ι′_C` and `ι_D ↔ ι′_D`.
pub fn symmetry(
    x: &CrossedProduct,
    tol: Tolerance,
) -> Result<(CrossedProduct, IsoSearch), BoxError> {
    let dual = x.bicharacter().dual();
    let y = build_via_heisenberg(x.d(), x.c(), &dual, &canonical_heisenberg(&dual), tol)?;
    let cs = x.c().homogeneous_basis();
    let ds = x.d().homogeneous_basis();
    let v = x.family(cs, ds);
    let mut w = Vec::with_capacity(v.len());
    for c in cs {
        let yc = y.iota_d(c);
        for d in ds {
            w.push(&yc * &y.iota_c(d));
        }
    }
    let iso = find_generator_isomorphism(x.algebra(), &v, y.algebra(), &w, tol);
    Ok((y, iso))
}

#[derive(Debug, Clone)]
pub struct Reparametrized {
    /// `f_*C ⊠_{χ₂} g_*D`.
    pub transported: CrossedProduct,
    /// `C ⊠_χ D` with `χ = χ₂ ∘ (f × g)`.
    pub pulled_back: CrossedProduct,
    pub iso: IsoSearch,
}

/// Compares the product over the transported gradings with the product for
/// the pulled-back bicharacter.
pub fn qgr_morphism_reparametrize(
    c: &GradedAlgebra,
    d: &GradedAlgebra,
    f: &GroupHom,
    g: &GroupHom,
    chi2: &Bicharacter,
    tol: Tolerance,
) -> Result<Reparametrized, BoxError> {
    let c2 = transport_grading(c, f, tol)?;
    let d2 = transport_grading(d, g, tol)?;
    let transported = build_via_heisenberg(&c2, &d2, chi2, &canonical_heisenberg(chi2), tol)?;
    let chi = pullback(chi2, f, g)?;
    let pulled_back = build_via_heisenberg(c, d, &chi, &canonical_heisenberg(&chi), tol)?;
    let iso = equivalent(&pulled_back, &transported, tol);
    Ok(Reparametrized {
        transported,
        pulled_back,
        iso,
    })
}

/// `(C₀⊗C) ⊠_χ (D₀⊗D) ≅ C₀ ⊗ D₀ ⊗ (C ⊠_χ D)` with `C₀`, `D₀` trivially
/// graded, matching `ι(a⊗c)ι(b⊗d) ↔ a ⊗ b ⊗ ι_C(c)ι_D(d)`.
pub fn associativity_check(
    c0: &AlgebraBasis,
    c: &GradedAlgebra,
    d0: &AlgebraBasis,
    d: &GradedAlgebra,
    chi: &Bicharacter,
    tol: Tolerance,
) -> Result<IsoSearch, BoxError> {
    let pair = canonical_heisenberg(chi);
    let left = build_via_heisenberg(
        &c.tensor_trivial_left(c0, tol)?,
        &d.tensor_trivial_left(d0, tol)?,
        chi,
        &pair,
        tol,
    )?;
    let inner = build_via_heisenberg(c, d, chi, &pair, tol)?;
    let (cs, ds) = (c.homogeneous_basis(), d.homogeneous_basis());
    let mut v = Vec::new();
    let mut w = Vec::new();
    for a in c0.basis() {
        for b in d0.basis() {
            let ab = a.kron(b);
            for ci in cs {
                let x = left.iota_c(&a.kron(ci));
                for dj in ds {
                    v.push(&x * &left.iota_d(&b.kron(dj)));
                    w.push(ab.kron(&(&inner.iota_c(ci) * &inner.iota_d(dj))));
                }
            }
        }
    }
    let n = w[0].rows();
    let right_span = Subspace::spanned_by(n, n, &w, tol)?;
    let right = AlgebraBasis::certify(right_span, tol)?;
    Ok(find_generator_isomorphism(
        left.algebra(),
        &v,
        &right,
        &w,
        tol,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abgroup::FinAbGroup;
    use crate::matspan::pauli::{sigma_x, sigma_z};
    use crate::qgroup::translation;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn skew_m2() -> (GradedAlgebra, GradedAlgebra, Bicharacter) {
        let g = FinAbGroup::cyclic(2);
        let c = GradedAlgebra::group_algebra(&g, tol()).unwrap();
        let m = GradedAlgebra::graded_full_matrix(&g, &[0, 1], tol()).unwrap();
        (c, m, Bicharacter::cyclic(2, 1))
    }

    fn embed_z2(x: &CMatrix) -> CMatrix {
        // a·1 + b·λ₁ ↦ a·1 + b·σx
        let a = x.get(0, 0);
        let b = x.get(1, 0);
        &CMatrix::identity(2).scale(a) + &sigma_x().scale(b)
    }

    #[test]
    fn identity_functor_is_identity() {
        let (c, _, chi) = skew_m2();
        let x = build_via_heisenberg(&c, &c, &chi, &canonical_heisenberg(&chi), tol()).unwrap();
        let id = GradedMorphism::identity(&c, tol()).unwrap();
        let fm = functor_map(&id, &id, &x, &x, tol()).unwrap();
        for b in x.algebra().basis() {
            assert!(fm.map.apply(b).distance(b) < 1e-12);
        }
        assert!(fm.injective && fm.surjective);
    }

    #[test]
    fn graded_embedding_gives_injective_map() {
        let (c, m, chi) = skew_m2();
        let f = GradedMorphism::new(&c, &m, embed_z2, tol()).unwrap();
        assert!(f.is_injective() && !f.is_surjective());
        let id = GradedMorphism::identity(&c, tol()).unwrap();
        let pair = canonical_heisenberg(&chi);
        let x1 = build_via_heisenberg(&c, &c, &chi, &pair, tol()).unwrap();
        let x2 = build_via_heisenberg(&m, &c, &chi, &pair, tol()).unwrap();
        let fm = functor_map(&f, &id, &x1, &x2, tol()).unwrap();
        assert!(fm.injective && !fm.surjective);
    }

    #[test]
    fn non_equivariant_map_rejected() {
        let (c, m, _) = skew_m2();
        // λ₁ ↦ σz puts an odd element in even degree.
        let r = GradedMorphism::new(
            &c,
            &m,
            |x| &CMatrix::identity(2).scale(x.get(0, 0)) + &sigma_z().scale(x.get(1, 0)),
            tol(),
        );
        assert!(matches!(r, Err(BoxError::NotEquivariant { .. })));
    }

    #[test]
    fn quotient_of_direct_sum_is_surjective() {
        let (c, m, chi) = skew_m2();
        let sum = m.direct_sum(&c, tol()).unwrap();
        let q = GradedMorphism::new(&sum, &m, |x| x.block(0, 0, 2, 2), tol()).unwrap();
        assert!(q.is_surjective() && !q.is_injective());
        let id = GradedMorphism::identity(&c, tol()).unwrap();
        let pair = canonical_heisenberg(&chi);
        let x1 = build_via_heisenberg(&sum, &c, &chi, &pair, tol()).unwrap();
        let x2 = build_via_heisenberg(&m, &c, &chi, &pair, tol()).unwrap();
        let fm = functor_map(&q, &id, &x1, &x2, tol()).unwrap();
        assert!(fm.surjective && !fm.injective);
        assert_eq!(x1.dim(), 12);
    }

    #[test]
    fn symmetry_both_orders() {
        let (c, m, chi) = skew_m2();
        let x = build_via_heisenberg(&c, &m, &chi, &canonical_heisenberg(&chi), tol()).unwrap();
        let (y, iso) = symmetry(&x, tol()).unwrap();
        assert!(iso.found(), "{:?}", iso.failure);
        assert_eq!(y.dim(), 8);
        let z3 = GradedAlgebra::group_algebra(&FinAbGroup::cyclic(3), tol()).unwrap();
        let chi3 = Bicharacter::cyclic(3, 1);
        let t = build_via_heisenberg(&z3, &z3, &chi3, &canonical_heisenberg(&chi3), tol()).unwrap();
        assert!(symmetry(&t, tol()).unwrap().1.found());
    }

    #[test]
    fn quotient_reparametrization() {
        let z4 = FinAbGroup::cyclic(4);
        let z2 = FinAbGroup::cyclic(2);
        let c = GradedAlgebra::group_algebra(&z4, tol()).unwrap();
        let d = GradedAlgebra::graded_full_matrix(&z4, &[0, 1], tol()).unwrap();
        let q = GroupHom::new(z4.clone(), z2.clone(), vec![vec![1]]).unwrap();
        let r =
            qgr_morphism_reparametrize(&c, &d, &q, &q, &Bicharacter::cyclic(2, 1), tol()).unwrap();
        assert!(r.iso.found(), "{:?}", r.iso.failure);
        assert_eq!(r.pulled_back.dim(), 16);
        let l1 = translation(&z4, 1);
        let a = r.pulled_back.iota_c(&l1);
        let b = r.pulled_back.iota_d(&CMatrix::unit(2, 2, 0, 1));
        // Degrees 1 and 3 in Z/4 both map to 1 in Z/2: sign −1.
        assert!((&b * &a).distance(&(&a * &b).scale_real(-1.0)) < 1e-12);
    }

    #[test]
    fn untwisted_factors_split_off() {
        let (c, _, chi) = skew_m2();
        let m2 = AlgebraBasis::full(2);
        let one = AlgebraBasis::full(1);
        let iso = associativity_check(&m2, &c, &one, &c, &chi, tol()).unwrap();
        assert!(iso.found(), "{:?}", iso.failure);
    }
}
