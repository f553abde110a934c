use num_complex::Complex64;
use serde::Serialize;

use super::{CoactError, GradedAlgebra};
use crate::abgroup::FinAbGroup;
use crate::matspan::legs::{flip, slice_second};
use crate::matspan::{AlgebraBasis, CMatrix, Subspace, Tolerance};
use crate::qgroup::{multiplicative_unitary, translation};

/// Largest `n·|G|²` for which the three-leg span identity is evaluated.
const LEMMA_AMBIENT_CAP: usize = 128;

/// A linear map `γ: C → C ⊗ C*(G)`, stored by its values on the orthonormal
/// basis of `C`. Maps built from a grading remember it.
#[derive(Debug, Clone)]
pub struct CoactionMap {
    group: FinAbGroup,
    algebra: AlgebraBasis,
    images: Vec<CMatrix>,
    grading: Option<GradedAlgebra>,
}

impl CoactionMap {
    pub fn from_images(
        group: FinAbGroup,
        algebra: AlgebraBasis,
        images: Vec<CMatrix>,
    ) -> Result<Self, CoactError> {
        let big = algebra.ambient_dim() * group.order();
        if images.len() != algebra.dim() || images.iter().any(|m| m.shape() != (big, big)) {
            return Err(CoactError::Mismatch);
        }
        Ok(Self {
            group,
            algebra,
            images,
            grading: None,
        })
    }

    pub fn from_fn(
        group: FinAbGroup,
        algebra: AlgebraBasis,
        f: impl Fn(&CMatrix) -> CMatrix,
    ) -> Result<Self, CoactError> {
        let images = algebra.basis().iter().map(f).collect();
        Self::from_images(group, algebra, images)
    }

    /// `c ↦ c ⊗ 1`.
    pub fn trivial(group: FinAbGroup, algebra: AlgebraBasis) -> Self {
        let one = CMatrix::identity(group.order());
        let images = algebra.basis().iter().map(|b| b.kron(&one)).collect();
        Self {
            group,
            algebra,
            images,
            grading: None,
        }
    }

    pub fn group(&self) -> &FinAbGroup {
        &self.group
    }

    pub fn algebra(&self) -> &AlgebraBasis {
        &self.algebra
    }

    pub fn images(&self) -> &[CMatrix] {
        &self.images
    }

    pub fn grading(&self) -> Option<&GradedAlgebra> {
        self.grading.as_ref()
    }

    pub fn apply(&self, x: &CMatrix) -> CMatrix {
        combine(&self.images, &self.algebra.subspace().coords(x))
    }

    /// `x_g = (id ⊗ ω_g) y` with `ω_g(λ_k) = δ_{gk}`, for `y` on `C^n ⊗ ℓ²G`.
    pub fn fourier_slices(&self, y: &CMatrix) -> Vec<CMatrix> {
        fourier_slices(&self.group, self.algebra.ambient_dim(), y)
    }
}

fn combine(images: &[CMatrix], coords: &[Complex64]) -> CMatrix {
    let (r, c) = images[0].shape();
    let mut out = CMatrix::zeros(r, c);
    for (m, z) in images.iter().zip(coords) {
        if z.norm() > 1e-15 {
            out += &m.scale(*z);
        }
    }
    out
}

pub(crate) fn fourier_slices(group: &FinAbGroup, n: usize, y: &CMatrix) -> Vec<CMatrix> {
    let order = group.order();
    (0..order)
        .map(|g| slice_second(y, n, order, &translation(group, g)).scale_real(1.0 / order as f64))
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct CoactionReport {
    pub dim: usize,
    pub rank: usize,
    pub injective: bool,
    /// Distance of `γ(C)` from `C ⊗ A`.
    pub range_residual: f64,
    pub multiplicativity_residual: f64,
    pub star_residual: f64,
    /// `(γ⊗id)γ − (id⊗Δ)γ` on the basis.
    pub comodule_residual: f64,
    pub podles_dim: usize,
    pub podles_expected: usize,
    /// `span (id⊗Δ)γ(C)·(1⊗1⊗A) = span γ(C)⊗A`; `None` above the size cap.
    pub lemma_span: Option<bool>,
    pub pass: bool,
}

/// Checks injectivity, the comodule identity and Podleś density of a right
/// coaction. Failing checks are reported, never thrown.
pub fn verify_coaction(gamma: &CoactionMap, tol: Tolerance) -> CoactionReport {
    let group = &gamma.group;
    let order = group.order();
    let n = gamma.algebra.ambient_dim();
    let big = n * order;
    let basis = gamma.algebra.basis();
    let dim = basis.len();
    let scale = |m: &CMatrix| m.norm().max(1.0);

    let rank = Subspace::spanned_by(big, big, &gamma.images, tol)
        .map(|s| s.dim())
        .unwrap_or(0);

    // Fourier coefficients of each image and their distance from C.
    let lambdas: Vec<CMatrix> = (0..order).map(|g| translation(group, g)).collect();
    let mut range_residual: f64 = 0.0;
    let mut coefficients = Vec::with_capacity(dim);
    for y in &gamma.images {
        let parts = gamma.fourier_slices(y);
        let mut rebuilt = CMatrix::zeros(big, big);
        for (x, l) in parts.iter().zip(&lambdas) {
            range_residual = range_residual.max(gamma.algebra.subspace().residual(x));
            rebuilt += &x.kron(l);
        }
        range_residual = range_residual.max(rebuilt.distance(y) / scale(y));
        coefficients.push(parts);
    }

    let mut mult: f64 = 0.0;
    let mut star: f64 = 0.0;
    for (i, bi) in basis.iter().enumerate() {
        let adj = gamma.apply(&bi.adjoint());
        star = star.max(adj.distance(&gamma.images[i].adjoint()) / scale(&adj));
        for (j, bj) in basis.iter().enumerate() {
            let lhs = gamma.apply(&(bi * bj));
            let rhs = &gamma.images[i] * &gamma.images[j];
            mult = mult.max(lhs.distance(&rhs) / scale(&rhs));
        }
    }

    let w23 = CMatrix::identity(n).kron(&multiplicative_unitary(group));
    let w23a = w23.adjoint();
    let one = CMatrix::identity(order);
    let mut comodule: f64 = 0.0;
    let mut delta_images = Vec::with_capacity(dim);
    for (y, parts) in gamma.images.iter().zip(&coefficients) {
        let rhs = &(&w23 * &y.kron(&one)) * &w23a;
        let mut lhs = CMatrix::zeros(big * order, big * order);
        for (x, l) in parts.iter().zip(&lambdas) {
            if x.max_abs() > 0.0 {
                lhs += &gamma.apply(x).kron(l);
            }
        }
        comodule = comodule.max(lhs.distance(&rhs) / scale(&rhs));
        delta_images.push(rhs);
    }

    let mut podles_vectors = Vec::with_capacity(dim * order);
    for y in &gamma.images {
        for l in &lambdas {
            podles_vectors.push(y * &CMatrix::identity(n).kron(l));
        }
    }
    let podles_dim = Subspace::spanned_by(big, big, &podles_vectors, tol)
        .map(|s| s.dim())
        .unwrap_or(0);
    let podles_expected = dim * order;

    let lemma_span = (big * order <= LEMMA_AMBIENT_CAP).then(|| {
        let n3 = big * order;
        let mut left = Vec::with_capacity(dim * order);
        let mut right = Vec::with_capacity(dim * order);
        for (d, y) in delta_images.iter().zip(&gamma.images) {
            for l in &lambdas {
                left.push(d * &CMatrix::identity(big).kron(l));
                right.push(y.kron(l));
            }
        }
        match (
            Subspace::spanned_by(n3, n3, &left, tol),
            Subspace::spanned_by(n3, n3, &right, tol),
        ) {
            (Ok(s), Ok(t)) => crate::matspan::subspace_equal(&s, &t, tol).unwrap_or(false),
            _ => false,
        }
    });

    let injective = rank == dim;
    let pass = injective
        && range_residual < tol.eps_eq
        && mult < tol.eps_eq
        && star < tol.eps_eq
        && comodule < tol.eps_eq
        && podles_dim == podles_expected
        && lemma_span != Some(false);
    CoactionReport {
        dim,
        rank,
        injective,
        range_residual,
        multiplicativity_residual: mult,
        star_residual: star,
        comodule_residual: comodule,
        podles_dim,
        podles_expected,
        lemma_span,
        pass,
    }
}

/// Left coactions `C → C*(G) ⊗ C` are checked by flipping the legs into a
/// right coaction; `C*(G)` is cocommutative, so the axioms correspond.
pub fn verify_left_coaction(
    group: &FinAbGroup,
    algebra: &AlgebraBasis,
    images: &[CMatrix],
    tol: Tolerance,
) -> Result<CoactionReport, CoactError> {
    let sigma = flip(group.order(), algebra.ambient_dim());
    let sa = sigma.adjoint();
    let flipped = images.iter().map(|y| &(&sigma * y) * &sa).collect();
    let gamma = CoactionMap::from_images(group.clone(), algebra.clone(), flipped)?;
    Ok(verify_coaction(&gamma, tol))
}

/// The coaction `c ↦ Σ_g c_g ⊗ λ_g` of a grading.
pub fn grading_to_coaction(c: &GradedAlgebra) -> CoactionMap {
    let images = c.algebra().basis().iter().map(|b| c.coact(b)).collect();
    CoactionMap {
        group: c.group().clone(),
        algebra: c.algebra().clone(),
        images,
        grading: Some(c.clone()),
    }
}

/// Recovers the grading of a raw coaction: `C_g` is the image of the slice
/// map `c ↦ (id ⊗ ω_g)γ(c)`. Fails if any axiom does not hold.
pub fn coaction_to_grading(
    gamma: &CoactionMap,
    tol: Tolerance,
) -> Result<GradedAlgebra, CoactError> {
    if let Some(g) = &gamma.grading {
        return Ok(g.clone());
    }
    let report = verify_coaction(gamma, tol);
    if !report.pass {
        let (what, residual) = if !report.injective {
            ("not injective", (report.dim - report.rank) as f64)
        } else if report.range_residual >= tol.eps_eq {
            ("image leaves C ⊗ A", report.range_residual)
        } else if report.multiplicativity_residual >= tol.eps_eq {
            ("not multiplicative", report.multiplicativity_residual)
        } else if report.star_residual >= tol.eps_eq {
            ("not *-preserving", report.star_residual)
        } else if report.comodule_residual >= tol.eps_eq {
            ("comodule identity fails", report.comodule_residual)
        } else {
            (
                "Podleś density fails",
                (report.podles_expected - report.podles_dim) as f64,
            )
        };
        return Err(CoactError::NotCoaction { what, residual });
    }
    let mut parts: Vec<(usize, Vec<CMatrix>)> =
        (0..gamma.group.order()).map(|g| (g, Vec::new())).collect();
    for y in &gamma.images {
        for (g, x) in gamma.fourier_slices(y).into_iter().enumerate() {
            parts[g].1.push(x);
        }
    }
    let graded = GradedAlgebra::new(gamma.group.clone(), gamma.algebra.ambient_dim(), parts, tol)?;
    let mut worst: f64 = 0.0;
    for (b, y) in gamma.algebra.basis().iter().zip(&gamma.images) {
        worst = worst.max(graded.coact(b).distance(y));
    }
    if worst >= tol.eps_eq {
        return Err(CoactError::NotCoaction {
            what: "slice maps are not the grading projections",
            residual: worst,
        });
    }
    Ok(graded)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matspan::pauli::sigma_z;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn trivial_coaction_on_m2_passes() {
        let g = FinAbGroup::cyclic(3);
        let gamma = CoactionMap::trivial(g, AlgebraBasis::full(2));
        let r = verify_coaction(&gamma, tol());
        assert!(r.pass, "{r:?}");
        assert_eq!(r.podles_dim, 12);
        assert_eq!(r.lemma_span, Some(true));
        let graded = coaction_to_grading(&gamma, tol()).unwrap();
        assert!(graded.is_trivially_graded());
    }

    #[test]
    fn comultiplication_of_group_algebra_passes() {
        let g = FinAbGroup::cyclic(2);
        let c = GradedAlgebra::group_algebra(&g, tol()).unwrap();
        let gamma = grading_to_coaction(&c);
        let r = verify_coaction(&gamma, tol());
        assert!(r.pass, "{r:?}");
        // Same as Δ(x) = W(x⊗1)W*.
        let w = multiplicative_unitary(&g);
        let l = translation(&g, 1);
        let delta = &(&w * &l.kron(&CMatrix::identity(2))) * &w.adjoint();
        assert!(gamma.apply(&l).distance(&delta) < 1e-14);
    }

    #[test]
    fn constant_degree_one_map_fails() {
        let g = FinAbGroup::cyclic(2);
        let diag = Subspace::spanned_by(
            2,
            2,
            &[CMatrix::unit(2, 2, 0, 0), CMatrix::unit(2, 2, 1, 1)],
            tol(),
        )
        .unwrap();
        let alg = AlgebraBasis::certify(diag, tol()).unwrap();
        let l1 = translation(&g, 1);
        let gamma = CoactionMap::from_fn(g, alg, |c| c.kron(&l1)).unwrap();
        let r = verify_coaction(&gamma, tol());
        assert!(!r.pass);
        assert!(r.multiplicativity_residual > 0.1);
        assert!(matches!(
            coaction_to_grading(&gamma, tol()),
            Err(CoactError::NotCoaction { .. })
        ));
    }

    #[test]
    fn raw_map_recovers_grading() {
        let g = FinAbGroup::cyclic(2);
        let m = GradedAlgebra::graded_full_matrix(&g, &[0, 1], tol()).unwrap();
        let raw = CoactionMap::from_images(
            g.clone(),
            m.algebra().clone(),
            grading_to_coaction(&m).images().to_vec(),
        )
        .unwrap();
        let back = coaction_to_grading(&raw, tol()).unwrap();
        assert_eq!(back.component_dims(), vec![2, 2]);
        assert!(back.component(0).contains(&sigma_z(), tol()));
    }

    #[test]
    fn left_variant_mirrors_right() {
        let g = FinAbGroup::cyclic(3);
        let c = GradedAlgebra::group_algebra(&g, tol()).unwrap();
        let left: Vec<CMatrix> = c
            .algebra()
            .basis()
            .iter()
            .map(|b| {
                let parts = c.decompose(b);
                let mut out = CMatrix::zeros(9, 9);
                for (k, p) in parts.iter().enumerate() {
                    out += &translation(&g, k).kron(p);
                }
                out
            })
            .collect();
        let r = verify_left_coaction(&g, c.algebra(), &left, tol()).unwrap();
        assert!(r.pass, "{r:?}");
    }
}
