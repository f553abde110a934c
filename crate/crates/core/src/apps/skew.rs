use super::AppsError;
use crate::abgroup::{Bicharacter, FinAbGroup};
use crate::boxtimes::{build_via_heisenberg, CrossedProduct};
use crate::coact::{canonical_covariant_rep, CovariantRep, GradedAlgebra};
use crate::heis::canonical_heisenberg;
use crate::matspan::pauli::{sigma_x, sigma_z};
use crate::matspan::{
    center, find_generator_isomorphism, AlgebraBasis, CMatrix, IsoSearch, Subspace, Tolerance,
};
use crate::qgroup::translation;
use crate::report::Report;

/// `C ⊗̂ D` from the sign rule, next to `C ⊠ D` for the nontrivial
/// bicharacter of `Z/2`.
#[derive(Debug, Clone)]
pub struct SkewTensor {
    pub koszul: AlgebraBasis,
    /// `c_i ⊗̂ d_j` in the graded representation, index `i·dim D + j`.
    pub koszul_family: Vec<CMatrix>,
    pub boxtimes: CrossedProduct,
    /// Product table against `(−1)^{deg c₂·deg d₁}`.
    pub table_residual: f64,
    /// Adjoints against `(−1)^{deg c·deg d}`.
    pub star_residual: f64,
    pub center_dim: usize,
    pub iso: IsoSearch,
}

fn parity(g: usize) -> f64 {
    if g == 0 {
        1.0
    } else {
        -1.0
    }
}

/// `(φ(x)⊗1)(Γ^{deg y}⊗ψ(y))`, extended bilinearly over homogeneous parts.
fn koszul(
    phi: &CovariantRep,
    psi: &CovariantRep,
    gamma: &CMatrix,
    x: &CMatrix,
    y: &CMatrix,
) -> CMatrix {
    let one_l = CMatrix::identity(psi.space().dim());
    let one_k = CMatrix::identity(phi.space().dim());
    let xs = phi.algebra().decompose(x);
    let ys = psi.algebra().decompose(y);
    let size = phi.space().dim() * psi.space().dim();
    let mut out = CMatrix::zeros(size, size);
    for xp in &xs {
        if xp.max_abs() == 0.0 {
            continue;
        }
        let left = phi.apply(xp).kron(&one_l);
        for (h, yp) in ys.iter().enumerate() {
            if yp.max_abs() == 0.0 {
                continue;
            }
            let g = if h == 0 { &one_k } else { gamma };
            out += &(&left * &g.kron(&psi.apply(yp)));
        }
    }
    out
}

pub fn skew_tensor(
    c: &GradedAlgebra,
    d: &GradedAlgebra,
    tol: Tolerance,
) -> Result<SkewTensor, AppsError> {
    let z2 = FinAbGroup::cyclic(2);
    if c.group() != &z2 || d.group() != &z2 {
        return Err(AppsError::WrongGroup("Z/2"));
    }
    let phi = canonical_covariant_rep(c, tol)?;
    let psi = canonical_covariant_rep(d, tol)?;
    let gamma = phi.space().projection(0) - phi.space().projection(1);

    let (cs, ds) = (c.homogeneous_basis(), d.homogeneous_basis());
    let (gc, gd) = (c.degrees(), d.degrees());
    let mut family = Vec::with_capacity(cs.len() * ds.len());
    for ci in cs {
        for dj in ds {
            family.push(koszul(&phi, &psi, &gamma, ci, dj));
        }
    }
    let m = ds.len();
    let mut table: f64 = 0.0;
    let mut star: f64 = 0.0;
    for (i, ci) in cs.iter().enumerate() {
        for (j, dj) in ds.iter().enumerate() {
            let a = &family[i * m + j];
            let sign = parity(gc[i] * gd[j]);
            let expected =
                koszul(&phi, &psi, &gamma, &ci.adjoint(), &dj.adjoint()).scale_real(sign);
            star = star.max(a.adjoint().distance(&expected));
            for (k, ck) in cs.iter().enumerate() {
                for (l, dl) in ds.iter().enumerate() {
                    let sign = parity(gc[k] * gd[j]);
                    let expected =
                        koszul(&phi, &psi, &gamma, &(ci * ck), &(dj * dl)).scale_real(sign);
                    table = table.max((a * &family[k * m + l]).distance(&expected));
                }
            }
        }
    }
    let n = family[0].rows();
    let koszul_alg = AlgebraBasis::certify(Subspace::spanned_by(n, n, &family, tol)?, tol)?;
    let chi = Bicharacter::cyclic(2, 1);
    let boxtimes = build_via_heisenberg(c, d, &chi, &canonical_heisenberg(&chi), tol)?;
    let iso = find_generator_isomorphism(
        &koszul_alg,
        &family,
        boxtimes.algebra(),
        boxtimes.products(),
        tol,
    );
    let center_dim = center(&koszul_alg, tol).dim();
    Ok(SkewTensor {
        koszul: koszul_alg,
        koszul_family: family,
        boxtimes,
        table_residual: table,
        star_residual: star,
        center_dim,
        iso,
    })
}

impl SkewTensor {
    pub fn report(&self, name: &str, inputs: serde_json::Value, tol: Tolerance) -> Report {
        let mut r = Report::new(name, inputs, tol);
        r.witness = self.boxtimes.route().label();
        r.dim("skew", self.koszul.dim())
            .dim("boxtimes", self.boxtimes.dim())
            .dim("expected", self.boxtimes.report().expected_dim)
            .dim("center", self.center_dim)
            .residual("sign_table", self.table_residual)
            .residual("sign_star", self.star_residual)
            .residual("commutation", self.boxtimes.report().commutation_residual)
            .residual("iso_multiplicativity", self.iso.multiplicativity_residual)
            .verdict(
                "sign_rule",
                self.table_residual < tol.eps_eq && self.star_residual < tol.eps_eq,
            )
            .verdict("boxtimes_certified", self.boxtimes.report().pass)
            .verdict("isomorphic", self.iso.found());
        r.iso_found = self.iso.found();
        r
    }
}

/// `C*(Z/2) ⊗̂ C*(Z/2)` identified with `M₂`: `g₁ ↦ diag(1,−1)`,
/// `g₂ ↦ offdiag(1,1)`.
#[derive(Debug, Clone)]
pub struct SkewM2 {
    pub skew: SkewTensor,
    pub g1: CMatrix,
    pub g2: CMatrix,
    /// `‖g₁g₂ + g₂g₁‖`, self-adjointness and unitarity of both.
    pub anticommutator: f64,
    pub involution_residual: f64,
    pub m2_iso: IsoSearch,
}

pub fn skew_m2_generators(tol: Tolerance) -> Result<SkewM2, AppsError> {
    let z2 = FinAbGroup::cyclic(2);
    let c = GradedAlgebra::group_algebra(&z2, tol)?;
    let skew = skew_tensor(&c, &c, tol)?;
    let l1 = translation(&z2, 1);
    let x = &skew.boxtimes;
    let g1 = x.iota_c(&l1);
    let g2 = x.iota_d(&l1);
    let one = super::unit_of(x.algebra());
    let anticommutator = (&(&g1 * &g2) + &(&g2 * &g1)).max_abs();
    let mut inv: f64 = 0.0;
    for g in [&g1, &g2] {
        inv = inv
            .max(g.distance(&g.adjoint()))
            .max((g * g).distance(&one));
    }
    let (sz, sx) = (sigma_z(), sigma_x());
    let v = vec![one.clone(), g1.clone(), g2.clone(), &g1 * &g2];
    let w = vec![CMatrix::identity(2), sz.clone(), sx.clone(), &sz * &sx];
    let m2_iso = find_generator_isomorphism(x.algebra(), &v, &AlgebraBasis::full(2), &w, tol);
    Ok(SkewM2 {
        skew,
        g1: sz,
        g2: sx,
        anticommutator,
        involution_residual: inv,
        m2_iso,
    })
}

impl SkewM2 {
    pub fn report(&self, tol: Tolerance) -> Report {
        let mut r = self.skew.report(
            "skew",
            serde_json::json!({"C": "C*(Z/2)", "D": "C*(Z/2)"}),
            tol,
        );
        r.residual("anticommutator", self.anticommutator)
            .residual("involution", self.involution_residual)
            .verdict(
                "anticommuting_involutions",
                self.anticommutator < tol.eps_eq && self.involution_residual < tol.eps_eq,
            )
            .verdict("isomorphic_to_m2", self.m2_iso.found())
            .matrix("g1", &self.g1)
            .matrix("g2", &self.g2);
        r.iso_found = r.iso_found && self.m2_iso.found();
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
    fn m2_generators() {
        let s = skew_m2_generators(tol()).unwrap();
        assert!(s.m2_iso.found(), "{:?}", s.m2_iso.failure);
        assert!(s.anticommutator < 1e-12 && s.involution_residual < 1e-12);
        assert!(s.skew.iso.found());
        assert_eq!(s.skew.center_dim, 1);
        assert!(s.report(tol()).pass());
    }

    #[test]
    fn clifford_presentation() {
        // Cl₁ as span{1, σx} with σx odd.
        let z2 = FinAbGroup::cyclic(2);
        let cl1 = GradedAlgebra::new(
            z2,
            2,
            vec![(0, vec![CMatrix::identity(2)]), (1, vec![sigma_x()])],
            tol(),
        )
        .unwrap();
        let s = skew_tensor(&cl1, &cl1, tol()).unwrap();
        assert_eq!(s.koszul.dim(), 4);
        assert_eq!(s.center_dim, 1);
        assert!(s.iso.found());
    }

    #[test]
    fn trivial_gradings_give_plain_tensor() {
        let z2 = FinAbGroup::cyclic(2);
        let c = GradedAlgebra::trivially_graded(&z2, &AlgebraBasis::full(2), tol()).unwrap();
        let s = skew_tensor(&c, &c, tol()).unwrap();
        assert!(s.iso.found());
        assert_eq!(s.koszul.dim(), 16);
        // Plain tensor product of M₂ with itself: the two legs commute.
        let x = CMatrix::unit(2, 2, 0, 1);
        let a = s.boxtimes.iota_c(&x);
        let b = s.boxtimes.iota_d(&x);
        assert!(a.commutator(&b).max_abs() < 1e-14);
    }

    #[test]
    fn wrong_group_rejected() {
        let c = GradedAlgebra::group_algebra(&FinAbGroup::cyclic(3), tol()).unwrap();
        assert!(matches!(
            skew_tensor(&c, &c, tol()),
            Err(AppsError::WrongGroup(_))
        ));
    }
}
