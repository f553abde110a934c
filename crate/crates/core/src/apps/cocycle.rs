use super::{unit_of, AppsError};
use crate::abgroup::{Bicharacter, FinAbGroup};
use crate::boxtimes::{build_via_heisenberg, CrossedProduct};
use crate::coact::{corepresentation_cocycle, twist_by_cocycle, Cocycle, GradedAlgebra};
use crate::heis::canonical_heisenberg;
use crate::matspan::linalg::{pseudo_inverse, Coords};
use crate::matspan::{
    center, find_generator_isomorphism, AlgebraBasis, CMatrix, IsoSearch, Subspace, Tolerance,
};
use crate::report::Report;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Side {
    C,
    D,
}

fn heisenberg(
    c: &GradedAlgebra,
    d: &GradedAlgebra,
    chi: &Bicharacter,
    tol: Tolerance,
) -> Result<CrossedProduct, AppsError> {
    Ok(build_via_heisenberg(
        c,
        d,
        chi,
        &canonical_heisenberg(chi),
        tol,
    )?)
}

/// One side of the transfer: `x0` to the product with that side's coaction
/// twisted by `u`, through the linking algebra `M₂ ⊗ C` with cocycle
/// `E₁₁ ⊗ 1 + E₂₂ ⊗ u` and the partial isometry `ι(E₂₁ ⊗ 1)`.
struct Transfer {
    target: CrossedProduct,
    iso: IsoSearch,
    solve_residual: f64,
}

fn transfer(
    x0: &CrossedProduct,
    side: Side,
    u: &Cocycle,
    tol: Tolerance,
) -> Result<Transfer, AppsError> {
    let chi = x0.bicharacter();
    let (old, other) = match side {
        Side::C => (x0.c(), x0.d()),
        Side::D => (x0.d(), x0.c()),
    };
    let (twisted, _) = twist_by_cocycle(old, u, tol)?;
    let big = old.ambient_dim() * old.group().order();
    let e = |i, j| CMatrix::unit(2, 2, i, j);
    let l = old.tensor_trivial_left(&AlgebraBasis::full(2), tol)?;
    let w = &e(0, 0).kron(&CMatrix::identity(big)) + &e(1, 1).kron(u.unitary());
    let w = Cocycle::new(&l, w, tol)?;
    let (link, _) = twist_by_cocycle(&l, &w, tol)?;

    let (xl, target) = match side {
        Side::C => (
            heisenberg(&link, other, chi, tol)?,
            heisenberg(&twisted, other, chi, tol)?,
        ),
        Side::D => (
            heisenberg(other, &link, chi, tol)?,
            heisenberg(other, &twisted, chi, tol)?,
        ),
    };
    let corner = |i: usize, x: &CMatrix| e(i, i).kron(x);
    // `ι(a) ι(b)` with `a` on the linking side, in x0's leg order.
    let pair = |a: &CMatrix, b: &CMatrix| match side {
        Side::C => &xl.iota_c(a) * &xl.iota_d(b),
        Side::D => &xl.iota_c(b) * &xl.iota_d(a),
    };
    let s = match side {
        Side::C => xl.iota_c(&e(1, 0).kron(&unit_of(old.algebra()))),
        Side::D => xl.iota_d(&e(1, 0).kron(&unit_of(old.algebra()))),
    };
    let sa = s.adjoint();

    let (src_c, src_d) = (x0.c().homogeneous_basis(), x0.d().homogeneous_basis());
    let (dst_c, dst_d) = (
        target.c().homogeneous_basis(),
        target.d().homogeneous_basis(),
    );
    let lifted: Vec<CMatrix> = match side {
        Side::C => dst_c
            .iter()
            .flat_map(|a| dst_d.iter().map(move |b| (a, b)))
            .map(|(a, b)| pair(&corner(1, a), b))
            .collect(),
        Side::D => dst_c
            .iter()
            .flat_map(|a| dst_d.iter().map(move |b| (a, b)))
            .map(|(a, b)| pair(&corner(1, b), a))
            .collect(),
    };
    let space = xl.algebra().subspace();
    let mut basis = Coords::zeros(space.dim(), lifted.len());
    for (k, f) in lifted.iter().enumerate() {
        for (r, z) in space.coords(f).into_iter().enumerate() {
            basis[(r, k)] = z;
        }
    }
    let inv = pseudo_inverse(&basis, tol.eps_rank);

    let mut images = Vec::with_capacity(x0.products().len());
    let mut solve_residual: f64 = 0.0;
    for ci in src_c {
        for dj in src_d {
            let inner = match side {
                Side::C => pair(&corner(0, ci), dj),
                Side::D => pair(&corner(0, dj), ci),
            };
            let z = &(&s * &inner) * &sa;
            let zc = Coords::from_vec(space.dim(), 1, space.coords(&z));
            let coeffs = &inv * &zc;
            solve_residual = solve_residual
                .max((&basis * &coeffs - &zc).norm())
                .max(space.residual(&z));
            let mut y = CMatrix::zeros(target.ambient_dim(), target.ambient_dim());
            for (p, c) in target.products().iter().zip(coeffs.iter()) {
                if c.norm() > 1e-15 {
                    y += &p.scale(*c);
                }
            }
            images.push(y);
        }
    }
    let iso =
        find_generator_isomorphism(x0.algebra(), x0.products(), target.algebra(), &images, tol);
    Ok(Transfer {
        target,
        iso,
        solve_residual,
    })
}

/// `(C,γ) ⊠ (D,δ) ≅ (C,γ_u) ⊠ (D,δ_v)`, certified.
#[derive(Debug, Clone)]
pub struct CocycleConjugacy {
    pub untwisted: CrossedProduct,
    pub twisted: CrossedProduct,
    /// Composite of the per-side transfers, re-certified end to end.
    pub iso: IsoSearch,
    pub side_isos_found: bool,
    pub solve_residual: f64,
}

pub fn cocycle_conjugacy(
    c: &GradedAlgebra,
    u: Option<&Cocycle>,
    d: &GradedAlgebra,
    v: Option<&Cocycle>,
    chi: &Bicharacter,
    tol: Tolerance,
) -> Result<CocycleConjugacy, AppsError> {
    let x0 = heisenberg(c, d, chi, tol)?;
    let mut current = x0.clone();
    let mut family: Vec<CMatrix> = x0.products().to_vec();
    let mut side_isos_found = true;
    let mut solve_residual: f64 = 0.0;
    for (side, cocycle) in [(Side::C, u), (Side::D, v)] {
        let Some(cocycle) = cocycle else { continue };
        let t = transfer(&current, side, cocycle, tol)?;
        solve_residual = solve_residual.max(t.solve_residual);
        match &t.iso.map {
            Some(map) => family = family.iter().map(|x| map.apply(x)).collect(),
            None => side_isos_found = false,
        }
        current = t.target;
    }
    let iso = if side_isos_found {
        find_generator_isomorphism(x0.algebra(), x0.products(), current.algebra(), &family, tol)
    } else {
        // Fall back to the canonical families; this only succeeds when the
        // twist did not change the crossed product.
        let cs = x0.c().homogeneous_basis();
        let ds = x0.d().homogeneous_basis();
        let w = current.family(cs, ds);
        find_generator_isomorphism(x0.algebra(), x0.products(), current.algebra(), &w, tol)
    };
    Ok(CocycleConjugacy {
        untwisted: x0,
        twisted: current,
        iso,
        side_isos_found,
        solve_residual,
    })
}

impl CocycleConjugacy {
    pub fn report(&self, name: &str, inputs: serde_json::Value, tol: Tolerance) -> Report {
        let mut r = Report::new(name, inputs, tol);
        r.witness = self.twisted.route().label();
        r.dim("untwisted", self.untwisted.dim())
            .dim("twisted", self.twisted.dim())
            .residual("corner_solve", self.solve_residual)
            .residual("iso_multiplicativity", self.iso.multiplicativity_residual)
            .verdict("side_transfers", self.side_isos_found)
            .verdict("isomorphic", self.iso.found());
        r.iso_found = self.iso.found();
        r
    }
}

/// `(C, γ_u) ⊠ D ≅ C ⊗ D` for an inner coaction `γ_u = Ad_u ∘ τ` of a
/// trivially graded `C`.
#[derive(Debug, Clone)]
pub struct InnerInstance {
    pub conjugacy: CocycleConjugacy,
    pub tensor: AlgebraBasis,
    /// `(C, τ) ⊠ D → C ⊗ D`, `ι(c)ι(d) ↦ c ⊗ d`.
    pub tensor_iso: IsoSearch,
    pub center_dim: usize,
}

fn tensor_algebra(
    c: &AlgebraBasis,
    d: &AlgebraBasis,
    tol: Tolerance,
) -> Result<AlgebraBasis, AppsError> {
    let n = c.ambient_dim() * d.ambient_dim();
    let v: Vec<CMatrix> = c
        .basis()
        .iter()
        .flat_map(|a| d.basis().iter().map(move |b| a.kron(b)))
        .collect();
    Ok(AlgebraBasis::certify(
        Subspace::spanned_by(n, n, &v, tol)?,
        tol,
    )?)
}

fn with_tensor(conjugacy: CocycleConjugacy, tol: Tolerance) -> Result<InnerInstance, AppsError> {
    let x0 = &conjugacy.untwisted;
    let tensor = tensor_algebra(x0.c().algebra(), x0.d().algebra(), tol)?;
    let w: Vec<CMatrix> = x0
        .c()
        .homogeneous_basis()
        .iter()
        .flat_map(|a| x0.d().homogeneous_basis().iter().map(move |b| a.kron(b)))
        .collect();
    let tensor_iso = find_generator_isomorphism(x0.algebra(), x0.products(), &tensor, &w, tol);
    let center_dim = center(conjugacy.twisted.algebra(), tol).dim();
    Ok(InnerInstance {
        conjugacy,
        tensor,
        tensor_iso,
        center_dim,
    })
}

pub fn inner_coaction_instance(
    c0: &AlgebraBasis,
    projections: &[CMatrix],
    d: &GradedAlgebra,
    chi: &Bicharacter,
    tol: Tolerance,
) -> Result<InnerInstance, AppsError> {
    let c = GradedAlgebra::trivially_graded(chi.left(), c0, tol)?;
    let u = corepresentation_cocycle(&c, projections, tol)?;
    let conjugacy = cocycle_conjugacy(&c, Some(&u), d, None, chi, tol)?;
    with_tensor(conjugacy, tol)
}

/// `K(C²) ⊠ K(C²) ≅ K(C² ⊗ C²)` for the inner coactions of the
/// corepresentation `E₀ ⊗ 1 + E₁ ⊗ λ₁` on both sides.
pub fn compact_operators_example(tol: Tolerance) -> Result<InnerInstance, AppsError> {
    let g = FinAbGroup::cyclic(2);
    let m2 = GradedAlgebra::trivially_graded(&g, &AlgebraBasis::full(2), tol)?;
    let e = [CMatrix::unit(2, 2, 0, 0), CMatrix::unit(2, 2, 1, 1)];
    let u = corepresentation_cocycle(&m2, &e, tol)?;
    let chi = Bicharacter::cyclic(2, 1);
    let conjugacy = cocycle_conjugacy(&m2, Some(&u), &m2, Some(&u), &chi, tol)?;
    with_tensor(conjugacy, tol)
}

impl InnerInstance {
    pub fn report(&self, name: &str, inputs: serde_json::Value, tol: Tolerance) -> Report {
        let mut r = self.conjugacy.report(name, inputs, tol);
        r.dim("tensor", self.tensor.dim())
            .dim("center_dim", self.center_dim)
            .verdict("isomorphic_to_tensor", self.tensor_iso.found());
        r.iso_found = r.iso_found && self.tensor_iso.found();
        r
    }
}
