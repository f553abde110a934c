use super::AppsError;
use crate::abgroup::{Bicharacter, FinAbGroup};
use crate::boxtimes::{build_via_heisenberg, equivalent, CrossedProduct, Route};
use crate::coact::{verify_left_coaction, CoactionReport, GradedAlgebra};
use crate::heis::canonical_heisenberg;
use crate::matspan::{find_generator_isomorphism, AlgebraBasis, CMatrix, IsoSearch, Tolerance};
use crate::qgroup::{indicator, translation};
use crate::report::Report;

/// Heisenberg-route comparisons are skipped when the ambient size
/// `n·|G|·|G|` exceeds this.
const COMPARE_AMBIENT_MAX: usize = 64;

/// `C ⋊ Ĝ` realized directly in `C ⊗ B(ℓ²G)` and, when small enough, as
/// `C ⊠ C(G)` through the canonical Heisenberg pair of the pairing.
#[derive(Debug, Clone)]
pub struct ReducedCrossed {
    /// `ι_C(c) = Σ c_g ⊗ λ_g`, `ι_Â(e_k) = 1 ⊗ diag(conj⟨·,k⟩)`.
    pub direct: CrossedProduct,
    pub boxtimes: Option<CrossedProduct>,
    pub equivalence: Option<IsoSearch>,
}

impl ReducedCrossed {
    pub fn dim(&self) -> usize {
        self.direct.dim()
    }

    pub fn expected_dim(&self) -> usize {
        self.direct.c().dim() * self.direct.c().group().order()
    }

    pub fn report(&self, tol: Tolerance) -> Report {
        let c = self.direct.c();
        let mut r = Report::new(
            "crossed",
            serde_json::json!({"group": c.group().cycles(), "component_dims": c.component_dims()}),
            tol,
        );
        r.witness = self.direct.route().label();
        r.dim("dim", self.dim())
            .dim("expected_dim", self.expected_dim())
            .residual("commutation", self.direct.report().commutation_residual)
            .verdict("direct_certified", self.direct.report().pass)
            .verdict("dimension_law", self.dim() == self.expected_dim());
        if let Some(e) = &self.equivalence {
            r.residual("equivalence_multiplicativity", e.multiplicativity_residual)
                .verdict("boxtimes_equivalent", e.found());
        }
        r.iso_found = self.equivalence.as_ref().is_none_or(IsoSearch::found);
        r
    }
}

pub fn reduced_crossed_product(
    c: &GradedAlgebra,
    tol: Tolerance,
) -> Result<ReducedCrossed, AppsError> {
    let group = c.group().clone();
    let order = group.order();
    let n = c.ambient_dim();
    let a_hat = GradedAlgebra::function_algebra(&group, tol)?;
    let chi = Bicharacter::pairing(&group);
    let iota_c = c
        .homogeneous_basis()
        .iter()
        .zip(c.degrees())
        .map(|(b, &g)| b.kron(&translation(&group, g)))
        .collect();
    let one = CMatrix::identity(n);
    let iota_d = a_hat
        .homogeneous_basis()
        .iter()
        .map(|e| one.kron(e))
        .collect();
    let direct = CrossedProduct::from_embeddings(
        c.clone(),
        a_hat.clone(),
        chi.clone(),
        iota_c,
        iota_d,
        Route::Custom {
            label: "direct".into(),
        },
        tol,
    )?;
    let (boxtimes, equivalence) = if n * order * order <= COMPARE_AMBIENT_MAX {
        let x = build_via_heisenberg(c, &a_hat, &chi, &canonical_heisenberg(&chi), tol)?;
        let e = equivalent(&direct, &x, tol);
        (Some(x), Some(e))
    } else {
        (None, None)
    };
    Ok(ReducedCrossed {
        direct,
        boxtimes,
        equivalence,
    })
}

/// The `Ĝ`-grading of `C ⋊ Ĝ` (with `Ĝ` labelled by `G` through the
/// pairing) and its left coaction `x ↦ Σ_k λ_k ⊗ x_k`.
#[derive(Debug, Clone)]
pub struct DualCoaction {
    pub grading: GradedAlgebra,
    pub images: Vec<CMatrix>,
    pub report: CoactionReport,
    /// `ι_C(C)` lies in degree zero.
    pub iota_c_residual: f64,
}

pub fn dual_coaction(x: &ReducedCrossed, tol: Tolerance) -> Result<DualCoaction, AppsError> {
    let direct = &x.direct;
    let group = direct.d().group().clone();
    let m = direct.d().dim();
    let mut parts: Vec<(usize, Vec<CMatrix>)> =
        (0..group.order()).map(|k| (k, Vec::new())).collect();
    for (idx, p) in direct.products().iter().enumerate() {
        let k = direct.d().degrees()[idx % m];
        parts[k].1.push(p.clone());
    }
    let grading = GradedAlgebra::new(group.clone(), direct.ambient_dim(), parts, tol)?;
    let images: Vec<CMatrix> = grading
        .algebra()
        .basis()
        .iter()
        .map(|b| {
            let mut y = CMatrix::zeros(group.order() * b.rows(), group.order() * b.cols());
            for (k, part) in grading.decompose(b).iter().enumerate() {
                y += &translation(&group, k).kron(part);
            }
            y
        })
        .collect();
    let report = verify_left_coaction(&group, grading.algebra(), &images, tol)?;
    let iota_c_residual = direct
        .iota_c_images()
        .iter()
        .map(|y| grading.component(0).residual(y))
        .fold(0.0, f64::max);
    Ok(DualCoaction {
        grading,
        images,
        report,
        iota_c_residual,
    })
}

impl DualCoaction {
    pub fn report(&self, tol: Tolerance) -> Report {
        let mut r = Report::new("dual_coaction", serde_json::json!({}), tol);
        r.dim("dim", self.grading.dim())
            .dim("podles_dim", self.report.podles_dim)
            .residual("comodule", self.report.comodule_residual)
            .residual("multiplicativity", self.report.multiplicativity_residual)
            .residual("iota_c_degree_zero", self.iota_c_residual)
            .verdict("coaction_axioms", self.report.pass)
            .verdict("iota_c_invariant", self.iota_c_residual < tol.eps_eq);
        r.iso_found = true;
        r
    }
}

/// `C*(G) ⋊ Ĝ ≅ M_{|G|}` through `ι_C(λ_g)ι_Â(e_k) ↦ λ_g·e_k`.
pub fn group_algebra_crossed_is_full(
    group: &FinAbGroup,
    tol: Tolerance,
) -> Result<(ReducedCrossed, IsoSearch), AppsError> {
    let c = GradedAlgebra::group_algebra(group, tol)?;
    let x = reduced_crossed_product(&c, tol)?;
    let a_hat = x.direct.d();
    let n = group.order();
    let (mut from, mut to) = (Vec::new(), Vec::new());
    for g in 0..n {
        let l = translation(group, g);
        for e in a_hat.homogeneous_basis() {
            from.push(&x.direct.iota_c(&l) * &x.direct.iota_d(e));
            to.push(&l * e);
        }
    }
    let iso =
        find_generator_isomorphism(x.direct.algebra(), &from, &AlgebraBasis::full(n), &to, tol);
    Ok((x, iso))
}

/// `C ⊠ D` inside `(C ⋊ Ĝ) ⊗ (D ⋊ Ĥ)` via `ι₁(c) = ι_C(c) ⊗ 1` and
/// `ι₂(d) = χ*(1 ⊗ ι_D(d))χ`, `χ` acting on the two dual legs.
#[derive(Debug, Clone)]
pub struct ReducedEmbedding {
    pub image: CrossedProduct,
    /// The induced map from the Heisenberg build.
    pub iso: IsoSearch,
    pub ambient_dim: usize,
}

pub fn embed_in_reduced(
    c: &GradedAlgebra,
    d: &GradedAlgebra,
    chi: &Bicharacter,
    tol: Tolerance,
) -> Result<ReducedEmbedding, AppsError> {
    let (g, h) = (c.group(), d.group());
    let xc = reduced_crossed_product(c, tol)?;
    let xd = reduced_crossed_product(d, tol)?;
    let (n1, n2) = (xc.direct.ambient_dim(), xd.direct.ambient_dim());
    let (one_c, one_g) = (
        CMatrix::identity(c.ambient_dim()),
        CMatrix::identity(d.ambient_dim()),
    );
    let mut chi_big = CMatrix::zeros(n1 * n2, n1 * n2);
    for (a, ae) in g.elements().iter().enumerate() {
        let pa = one_c.kron(&indicator(g, a));
        for (b, be) in h.elements().iter().enumerate() {
            let pb = one_g.kron(&indicator(h, b));
            chi_big += &pa.kron(&pb).scale(chi.value(ae, be));
        }
    }
    let chi_adj = chi_big.adjoint();
    let id1 = CMatrix::identity(n1);
    let id2 = CMatrix::identity(n2);
    let iota_1 = xc
        .direct
        .iota_c_images()
        .iter()
        .map(|y| y.kron(&id2))
        .collect();
    let iota_2 = xd
        .direct
        .iota_c_images()
        .iter()
        .map(|y| &(&chi_adj * &id1.kron(y)) * &chi_big)
        .collect();
    let image = CrossedProduct::from_embeddings(
        c.clone(),
        d.clone(),
        chi.clone(),
        iota_1,
        iota_2,
        Route::Custom {
            label: "reduced-embedding".into(),
        },
        tol,
    )?;
    let reference = build_via_heisenberg(c, d, chi, &canonical_heisenberg(chi), tol)?;
    let iso = equivalent(&reference, &image, tol);
    Ok(ReducedEmbedding {
        image,
        iso,
        ambient_dim: n1 * n2,
    })
}

impl ReducedEmbedding {
    pub fn report(&self, tol: Tolerance) -> Report {
        let mut r = Report::new("embed_in_reduced", serde_json::json!({}), tol);
        r.witness = self.image.route().label();
        r.dim("image", self.image.dim())
            .dim("expected", self.image.report().expected_dim)
            .dim("ambient", self.ambient_dim)
            .residual("commutation", self.image.report().commutation_residual)
            .verdict("image_certified", self.image.report().pass)
            .verdict("faithful", self.iso.found());
        r.iso_found = self.iso.found();
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::apps::group_algebra_images;
    use crate::matspan::center;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn group_algebra_gives_full_matrices() {
        for g in [
            FinAbGroup::cyclic(2),
            FinAbGroup::cyclic(3),
            FinAbGroup::new(vec![2, 2]).unwrap(),
        ] {
            let (x, iso) = group_algebra_crossed_is_full(&g, tol()).unwrap();
            assert_eq!(x.dim(), g.order() * g.order());
            assert_eq!(center(x.direct.algebra(), tol()).dim(), 1);
            assert!(iso.found(), "{:?}", iso.failure);
        }
    }

    #[test]
    fn trivial_coaction_shape() {
        let g = FinAbGroup::cyclic(3);
        let c = GradedAlgebra::trivially_graded(&g, &AlgebraBasis::full(2), tol()).unwrap();
        let x = reduced_crossed_product(&c, tol()).unwrap();
        assert_eq!(x.dim(), 12);
        assert!(!x.direct.algebra().is_commutative(tol()));
        let comm = GradedAlgebra::function_algebra(&FinAbGroup::cyclic(2), tol()).unwrap();
        let comm = GradedAlgebra::trivially_graded(comm.group(), comm.algebra(), tol()).unwrap();
        let y = reduced_crossed_product(&comm, tol()).unwrap();
        assert!(y.direct.algebra().is_commutative(tol()));
        assert!(y.equivalence.unwrap().found());
    }

    #[test]
    fn m2_diag_offdiag() {
        let g = FinAbGroup::cyclic(2);
        let c = GradedAlgebra::graded_full_matrix(&g, &[0, 1], tol()).unwrap();
        let x = reduced_crossed_product(&c, tol()).unwrap();
        assert_eq!(x.dim(), 8);
        assert!(x.equivalence.as_ref().unwrap().found());
        let d = dual_coaction(&x, tol()).unwrap();
        assert!(d.report.pass);
        assert!(d.iota_c_residual < 1e-12);
    }

    #[test]
    fn regular_z2_dual_grading_is_diag_offdiag() {
        let g = FinAbGroup::cyclic(2);
        let (x, iso) = group_algebra_crossed_is_full(&g, tol()).unwrap();
        let d = dual_coaction(&x, tol()).unwrap();
        assert!(d.report.pass && d.report.comodule_residual < 1e-12);
        // Through the iso, degree 0 is span{1, σx}; the Fourier transform
        // turns it into the diagonal.
        let map = iso.map.unwrap();
        let f = crate::qgroup::fourier(&g);
        let fa = f.adjoint();
        for (b, &k) in d
            .grading
            .homogeneous_basis()
            .iter()
            .zip(d.grading.degrees())
        {
            let y = &(&fa * &map.apply(b)) * &f;
            let off = y.off_diagonal_max();
            let diag = (y.get(0, 0).norm()).max(y.get(1, 1).norm());
            if k == 0 {
                assert!(off < 1e-12);
            } else {
                assert!(diag < 1e-12);
            }
        }
    }

    #[test]
    fn embedding_examples() {
        let g = FinAbGroup::cyclic(2);
        let c = GradedAlgebra::group_algebra(&g, tol()).unwrap();
        let e = embed_in_reduced(&c, &c, &Bicharacter::cyclic(2, 1), tol()).unwrap();
        assert_eq!(e.image.dim(), 4);
        assert!(e.iso.found());
        let t = embed_in_reduced(&c, &c, &Bicharacter::trivial(&g, &g), tol()).unwrap();
        assert!(t.iso.found());
        assert!(t.image.algebra().is_commutative(tol()));
        let z3 = FinAbGroup::cyclic(3);
        let c3 = GradedAlgebra::group_algebra(&z3, tol()).unwrap();
        let e3 = embed_in_reduced(&c3, &c3, &Bicharacter::cyclic(3, 1), tol()).unwrap();
        assert_eq!(e3.image.dim(), 9);
        assert!(e3.iso.found());
    }

    #[test]
    fn group_algebra_images_match_translations() {
        let g = FinAbGroup::cyclic(3);
        let c = GradedAlgebra::group_algebra(&g, tol()).unwrap();
        let imgs = group_algebra_images(&c, |a| translation(&g, a));
        for (b, y) in c.homogeneous_basis().iter().zip(&imgs) {
            assert!(b.distance(y) < 1e-12);
        }
    }
}
