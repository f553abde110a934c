use num_complex::Complex64;

use super::{group_algebra_images, AppsError};
use crate::abgroup::{gcd, Bicharacter, FinAbGroup};
use crate::boxtimes::{build_via_heisenberg, equivalent, CrossedProduct, Route};
use crate::coact::GradedAlgebra;
use crate::heis::canonical_heisenberg;
use crate::matspan::{
    center, find_generator_isomorphism, root_of_unity, AlgebraBasis, CMatrix, IsoSearch, Tolerance,
};
use crate::qgroup::translation;
use crate::report::Report;

/// Heisenberg comparisons are skipped above this `N` (ambient `N³`).
const HEISENBERG_COMPARE_MAX: usize = 3;

/// `C*(Z/N) ⊠ C*(Z/N)` for `χ(a,b) = exp(2πi·kab/N)`.
#[derive(Debug, Clone)]
pub struct FiniteTorus {
    pub n: usize,
    pub k: usize,
    pub crossed: CrossedProduct,
    /// `ι_C(λ₁)` and `ι_D(λ₁)`.
    pub u: CMatrix,
    pub v: CMatrix,
    /// `‖vu − e^{−2πik/N} uv‖`.
    pub relation_residual: f64,
    /// `‖u^N − 1‖ + ‖v^N − 1‖` against the unit of the algebra.
    pub order_residual: f64,
    pub center_dim: usize,
    pub expected_center_dim: usize,
    /// To `M_N`, attempted when `gcd(k,N) = 1`.
    pub matrix_iso: Option<IsoSearch>,
    /// Against the canonical Heisenberg build, for small `N`.
    pub heisenberg_iso: Option<IsoSearch>,
}

fn power(x: &CMatrix, e: usize) -> CMatrix {
    let mut out = CMatrix::identity(x.rows());
    for _ in 0..e {
        out = &out * x;
    }
    out
}

/// `diag(ω^{−k·x})` on `ℓ²(Z/N)`.
fn clock(n: usize, k: usize) -> CMatrix {
    let d: Vec<Complex64> = (0..n)
        .map(|x| root_of_unity(-((k * x) as i64), n as i64))
        .collect();
    CMatrix::diagonal(&d)
}

/// Realized on `ℓ²(Z/N) ⊗ ℓ²(Z/N)` by `u = λ₁ ⊗ 1`, `v = clock_k ⊗ clock_{N−1}`;
/// the second factor keeps `v` of full order when `gcd(k,N) > 1`.
pub fn finite_torus(n: usize, k: usize, tol: Tolerance) -> Result<FiniteTorus, AppsError> {
    if n < 2 || k >= n {
        return Err(AppsError::Parameter(format!(
            "need N ≥ 2 and 0 ≤ k < N, got N={n}, k={k}"
        )));
    }
    let g = FinAbGroup::cyclic(n);
    let c = GradedAlgebra::group_algebra(&g, tol)?;
    let chi = Bicharacter::cyclic(n, k);
    let one = CMatrix::identity(n);
    let u1 = translation(&g, 1).kron(&one);
    let v1 = clock(n, k).kron(&clock(n, n - 1));
    let iota_c = group_algebra_images(&c, |a| power(&u1, a));
    let iota_d = group_algebra_images(&c, |b| power(&v1, b));
    let crossed = CrossedProduct::from_embeddings(
        c.clone(),
        c.clone(),
        chi.clone(),
        iota_c,
        iota_d,
        Route::Custom {
            label: "clock-shift".into(),
        },
        tol,
    )?;

    let l1 = translation(&g, 1);
    let u = crossed.iota_c(&l1);
    let v = crossed.iota_d(&l1);
    let q = root_of_unity(-(k as i64), n as i64);
    let relation_residual = (&v * &u).distance(&(&u * &v).scale(q));
    let unit = super::unit_of(crossed.algebra());
    let order_residual = power(&u, n).distance(&unit) + power(&v, n).distance(&unit);
    let center_dim = center(crossed.algebra(), tol).dim();
    let d = gcd(k, n);

    let matrix_iso = (d == 1).then(|| {
        let (mut from, mut to) = (Vec::new(), Vec::new());
        let (shift, clk) = (translation(&g, 1), clock(n, k));
        for a in 0..n {
            for b in 0..n {
                from.push(&power(&u, a) * &power(&v, b));
                to.push(&power(&shift, a) * &power(&clk, b));
            }
        }
        find_generator_isomorphism(crossed.algebra(), &from, &AlgebraBasis::full(n), &to, tol)
    });
    let heisenberg_iso = if n <= HEISENBERG_COMPARE_MAX {
        let h = build_via_heisenberg(&c, &c, &chi, &canonical_heisenberg(&chi), tol)?;
        Some(equivalent(&crossed, &h, tol))
    } else {
        None
    };
    Ok(FiniteTorus {
        n,
        k,
        crossed,
        u,
        v,
        relation_residual,
        order_residual,
        center_dim,
        expected_center_dim: d * d,
        matrix_iso,
        heisenberg_iso,
    })
}

impl FiniteTorus {
    pub fn report(&self, tol: Tolerance) -> Report {
        let mut r = Report::new("torus", serde_json::json!({"n": self.n, "k": self.k}), tol);
        r.witness = self.crossed.route().label();
        let x = self.crossed.report();
        r.dim("dim", self.crossed.dim())
            .dim("expected_dim", self.n * self.n)
            .dim("center_dim", self.center_dim)
            .dim("expected_center_dim", self.expected_center_dim)
            .residual("relation", self.relation_residual)
            .residual("order", self.order_residual)
            .residual("commutation", x.commutation_residual)
            .verdict("crossed_product", x.pass)
            .verdict(
                "relation",
                self.relation_residual < tol.eps_eq && self.order_residual < tol.eps_eq,
            )
            .verdict("dimension", self.crossed.dim() == self.n * self.n)
            .verdict("center", self.center_dim == self.expected_center_dim);
        if let Some(iso) = &self.matrix_iso {
            r.verdict("isomorphic_to_matrix_algebra", iso.found());
        }
        if let Some(iso) = &self.heisenberg_iso {
            r.verdict("heisenberg_equivalent", iso.found());
        }
        r.iso_found = self.matrix_iso.as_ref().is_none_or(IsoSearch::found)
            && self.heisenberg_iso.as_ref().is_none_or(IsoSearch::found);
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn n2_k1_is_m2() {
        let t = finite_torus(2, 1, tol()).unwrap();
        assert_eq!(t.crossed.dim(), 4);
        assert_eq!(t.center_dim, 1);
        assert!(t.matrix_iso.as_ref().unwrap().found());
        assert!(t.heisenberg_iso.as_ref().unwrap().found());
        assert!(t.report(tol()).pass());
    }

    #[test]
    fn k0_is_commutative() {
        let t = finite_torus(4, 0, tol()).unwrap();
        assert_eq!(t.center_dim, 16);
        assert!(t.crossed.algebra().is_commutative(tol()));
    }

    #[test]
    fn n4_k2_center() {
        let t = finite_torus(4, 2, tol()).unwrap();
        assert_eq!(t.center_dim, 4);
        assert!(t.matrix_iso.is_none());
        assert!(t.report(tol()).pass());
    }

    #[test]
    fn n3_orientation_and_heisenberg() {
        let t = finite_torus(3, 1, tol()).unwrap();
        assert!(t.relation_residual < 1e-12);
        // The opposite orientation fails.
        let q = root_of_unity(1, 3);
        assert!((&t.v * &t.u).distance(&(&t.u * &t.v).scale(q)) > 0.1);
        assert!(t.heisenberg_iso.as_ref().unwrap().found());
    }

    #[test]
    fn out_of_range() {
        assert!(finite_torus(1, 0, tol()).is_err());
        assert!(finite_torus(3, 3, tol()).is_err());
    }
}
