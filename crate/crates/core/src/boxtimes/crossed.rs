use num_complex::Complex64;
use serde::Serialize;

use super::BoxError;
use crate::abgroup::Bicharacter;
use crate::coact::{CovariantRep, GradedAlgebra, GradedHilbertSpace};
use crate::heis::{is_heisenberg, RepPair};
use crate::matspan::legs::embed;
use crate::matspan::linalg::{pseudo_inverse, Coords};
use crate::matspan::{
    find_isomorphism_with_generators, subspace_equal, AlgebraBasis, CMatrix, IsoSearch, MatError,
    Subspace, Tolerance,
};

/// Entry budget for explicit span checks.
const SPAN_ENTRY_CAP: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Route {
    /// Ambient `C^{n_C} ⊗ C^{n_D} ⊗ C^{carrier}`.
    Heisenberg {
        witness: String,
        n_c: usize,
        n_d: usize,
        carrier: usize,
    },
    /// Ambient `K ⊗ L` of two covariant representations.
    Covariant {
        k: usize,
        l: usize,
    },
    Custom {
        label: String,
    },
}

impl Route {
    pub fn label(&self) -> String {
        match self {
            Route::Heisenberg { witness, .. } => format!("heisenberg:{witness}"),
            Route::Covariant { .. } => "covariant".into(),
            Route::Custom { label } => label.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CrossedReport {
    pub dim: usize,
    pub expected_dim: usize,
    /// `span ι_D(D)ι_C(C) = span ι_C(C)ι_D(D)`.
    pub reverse_span_equal: bool,
    /// `‖ι_D(d)ι_C(c) − conj χ(g,h) ι_C(c)ι_D(d)‖` over homogeneous pairs.
    pub commutation_residual: f64,
    pub iota_c_residual: f64,
    pub iota_d_residual: f64,
    pub iota_c_injective: bool,
    pub iota_d_injective: bool,
    pub pass: bool,
}

/// `C ⊠_χ D` with its two embeddings, given on the homogeneous bases.
#[derive(Debug, Clone)]
pub struct CrossedProduct {
    c: GradedAlgebra,
    d: GradedAlgebra,
    chi: Bicharacter,
    algebra: AlgebraBasis,
    iota_c: Vec<CMatrix>,
    iota_d: Vec<CMatrix>,
    products: Vec<CMatrix>,
    route: Route,
    z: Option<ZUnitary>,
    report: CrossedReport,
}

fn hom_residual(
    source: &GradedAlgebra,
    images: &[CMatrix],
    apply: impl Fn(&CMatrix) -> CMatrix,
) -> f64 {
    let basis = source.homogeneous_basis();
    let scale = |m: &CMatrix| m.norm().max(1.0);
    let mut worst: f64 = 0.0;
    for (i, bi) in basis.iter().enumerate() {
        let a = apply(&bi.adjoint());
        worst = worst.max(a.distance(&images[i].adjoint()) / scale(&a));
        for (j, bj) in basis.iter().enumerate() {
            let rhs = &images[i] * &images[j];
            worst = worst.max(apply(&(bi * bj)).distance(&rhs) / scale(&rhs));
        }
    }
    worst
}

fn combine_homogeneous(g: &GradedAlgebra, images: &[CMatrix], x: &CMatrix) -> CMatrix {
    let (r, c) = images[0].shape();
    let mut out = CMatrix::zeros(r, c);
    for (z, m) in g.homogeneous_coords(x).iter().zip(images) {
        if z.norm() > 1e-15 {
            out += &m.scale(*z);
        }
    }
    out
}

impl CrossedProduct {
    /// Certifies a pair of embeddings as a crossed product for `χ`.
    pub fn from_embeddings(
        c: GradedAlgebra,
        d: GradedAlgebra,
        chi: Bicharacter,
        iota_c: Vec<CMatrix>,
        iota_d: Vec<CMatrix>,
        route: Route,
        tol: Tolerance,
    ) -> Result<Self, BoxError> {
        if chi.left() != c.group() || chi.right() != d.group() {
            return Err(BoxError::GroupMismatch);
        }
        if iota_c.len() != c.dim()
            || iota_d.len() != d.dim()
            || iota_c.is_empty()
            || iota_d.is_empty()
        {
            return Err(BoxError::Mat(MatError::ShapeMismatch {
                expected: (c.dim(), d.dim()),
                found: (iota_c.len(), iota_d.len()),
            }));
        }
        let n = iota_c[0].rows();
        let mut products = Vec::with_capacity(c.dim() * d.dim());
        let mut reverse = Vec::with_capacity(c.dim() * d.dim());
        let mut commutation: f64 = 0.0;
        let (gg, hg) = (c.group(), d.group());
        for (x, &g) in iota_c.iter().zip(c.degrees()) {
            for (y, &h) in iota_d.iter().zip(d.degrees()) {
                let xy = x * y;
                let yx = y * x;
                let z = chi.value(&gg.element_at(g), &hg.element_at(h)).conj();
                commutation = commutation.max(yx.distance(&xy.scale(z)) / xy.norm().max(1.0));
                products.push(xy);
                reverse.push(yx);
            }
        }
        let span = Subspace::spanned_by(n, n, &products, tol)?;
        let algebra = AlgebraBasis::certify(span, tol).map_err(|e| match e {
            MatError::NotClosed { residual } => BoxError::NotClosed { residual },
            other => BoxError::Mat(other),
        })?;
        let rev = Subspace::spanned_by(n, n, &reverse, tol)?;
        let reverse_span_equal = subspace_equal(algebra.subspace(), &rev, tol)?;

        let iota_c_residual = hom_residual(&c, &iota_c, |x| combine_homogeneous(&c, &iota_c, x));
        let iota_d_residual = hom_residual(&d, &iota_d, |x| combine_homogeneous(&d, &iota_d, x));
        let iota_c_injective = Subspace::spanned_by(n, n, &iota_c, tol)?.dim() == c.dim();
        let iota_d_injective = Subspace::spanned_by(n, n, &iota_d, tol)?.dim() == d.dim();
        let expected_dim = c.dim() * d.dim();
        let dim = algebra.dim();
        let pass = dim == expected_dim
            && reverse_span_equal
            && commutation < tol.eps_eq
            && iota_c_residual < tol.eps_eq
            && iota_d_residual < tol.eps_eq
            && iota_c_injective
            && iota_d_injective;
        Ok(Self {
            c,
            d,
            chi,
            algebra,
            iota_c,
            iota_d,
            products,
            route,
            z: None,
            report: CrossedReport {
                dim,
                expected_dim,
                reverse_span_equal,
                commutation_residual: commutation,
                iota_c_residual,
                iota_d_residual,
                iota_c_injective,
                iota_d_injective,
                pass,
            },
        })
    }

    pub fn c(&self) -> &GradedAlgebra {
        &self.c
    }

    pub fn d(&self) -> &GradedAlgebra {
        &self.d
    }

    pub fn bicharacter(&self) -> &Bicharacter {
        &self.chi
    }

    pub fn algebra(&self) -> &AlgebraBasis {
        &self.algebra
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn ambient_dim(&self) -> usize {
        self.algebra.ambient_dim()
    }

    pub fn route(&self) -> &Route {
        &self.route
    }

    pub fn z(&self) -> Option<&ZUnitary> {
        self.z.as_ref()
    }

    pub fn report(&self) -> &CrossedReport {
        &self.report
    }

    /// `ι_C` on the homogeneous basis of `C`.
    pub fn iota_c_images(&self) -> &[CMatrix] {
        &self.iota_c
    }

    pub fn iota_d_images(&self) -> &[CMatrix] {
        &self.iota_d
    }

    pub fn iota_c(&self, x: &CMatrix) -> CMatrix {
        combine_homogeneous(&self.c, &self.iota_c, x)
    }

    pub fn iota_d(&self, x: &CMatrix) -> CMatrix {
        combine_homogeneous(&self.d, &self.iota_d, x)
    }

    /// `ι_C(c_i) ι_D(d_j)` at index `i·dim D + j`.
    pub fn products(&self) -> &[CMatrix] {
        &self.products
    }

    /// `ι_C(c_i) ι_D(d_j)` for arbitrary families of elements.
    pub fn family(&self, cs: &[CMatrix], ds: &[CMatrix]) -> Vec<CMatrix> {
        let ic: Vec<CMatrix> = cs.iter().map(|x| self.iota_c(x)).collect();
        let id: Vec<CMatrix> = ds.iter().map(|y| self.iota_d(y)).collect();
        ic.iter()
            .flat_map(|x| id.iter().map(move |y| x * y))
            .collect()
    }

    /// Structure constants `P_a P_b = Σ_k s_{abk} P_k` in the product basis
    /// `P_{i·dim D + j} = ι_C(c_i)ι_D(d_j)`; entries below `1e-12` dropped.
    pub fn structure_constants(&self) -> Vec<(usize, usize, usize, Complex64)> {
        let m = self.products.len();
        let s = self.algebra.subspace();
        let mut basis = Coords::zeros(s.dim(), m);
        for (k, p) in self.products.iter().enumerate() {
            for (r, z) in s.coords(p).into_iter().enumerate() {
                basis[(r, k)] = z;
            }
        }
        let inv = pseudo_inverse(&basis, 1e-12);
        let mut out = Vec::new();
        for a in 0..m {
            for b in 0..m {
                let prod = &self.products[a] * &self.products[b];
                if prod.max_abs() == 0.0 {
                    continue;
                }
                let c = Coords::from_vec(s.dim(), 1, s.coords(&prod));
                let coeffs = &inv * c;
                for (k, z) in coeffs.iter().enumerate() {
                    if z.norm() > 1e-12 {
                        out.push((a, b, k, *z));
                    }
                }
            }
        }
        out
    }
}

/// `ι_C(c) = c ⊗ 1 ⊗ U_g`, `ι_D(d) = 1 ⊗ d ⊗ V_h` for homogeneous `c ∈ C_g`,
/// `d ∈ D_h`.
pub fn build_via_heisenberg(
    c: &GradedAlgebra,
    d: &GradedAlgebra,
    chi: &Bicharacter,
    pair: &RepPair,
    tol: Tolerance,
) -> Result<CrossedProduct, BoxError> {
    if chi.left() != c.group()
        || chi.right() != d.group()
        || pair.left_group() != c.group()
        || pair.right_group() != d.group()
    {
        return Err(BoxError::GroupMismatch);
    }
    let check = is_heisenberg(pair, chi, tol)?;
    if !check.pass {
        return Err(BoxError::NotHeisenberg {
            residual: check.residual,
        });
    }
    let (nc, nd, l) = (c.ambient_dim(), d.ambient_dim(), pair.space_dim());
    let dims = [nc, nd, l];
    let iota_c = c
        .homogeneous_basis()
        .iter()
        .zip(c.degrees())
        .map(|(b, &g)| embed(&b.kron(pair.u(g)), &[1, 3], &dims))
        .collect();
    let one_c = CMatrix::identity(nc);
    let iota_d = d
        .homogeneous_basis()
        .iter()
        .zip(d.degrees())
        .map(|(b, &h)| one_c.kron(&b.kron(pair.v(h))))
        .collect();
    CrossedProduct::from_embeddings(
        c.clone(),
        d.clone(),
        chi.clone(),
        iota_c,
        iota_d,
        Route::Heisenberg {
            witness: pair.witness().label(),
            n_c: nc,
            n_d: nd,
            carrier: l,
        },
        tol,
    )
}

/// `Z = Σ_{a,b} conj χ(a,b) E_a ⊗ F_b` on `K ⊗ L`.
#[derive(Debug, Clone)]
pub struct ZUnitary {
    matrix: CMatrix,
    k: GradedHilbertSpace,
    l: GradedHilbertSpace,
    chi: Bicharacter,
}

impl ZUnitary {
    pub fn new(
        k: &GradedHilbertSpace,
        l: &GradedHilbertSpace,
        chi: &Bicharacter,
    ) -> Result<Self, BoxError> {
        if chi.left() != k.group() || chi.right() != l.group() {
            return Err(BoxError::GroupMismatch);
        }
        let (gk, gl) = (k.group(), l.group());
        let mut matrix = CMatrix::zeros(k.dim() * l.dim(), k.dim() * l.dim());
        for (a, e) in k.projections().iter().enumerate() {
            for (b, f) in l.projections().iter().enumerate() {
                let z = chi.value(&gk.element_at(a), &gl.element_at(b)).conj();
                matrix += &e.kron(f).scale(z);
            }
        }
        Ok(Self {
            matrix,
            k: k.clone(),
            l: l.clone(),
            chi: chi.clone(),
        })
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// `‖U_{1α} U_{2β} Z₁₂ − U_{2β} U_{1α}‖` on `K ⊗ L ⊗ carrier`, where
    /// `U_{1α} = Σ E_g ⊗ 1 ⊗ U_g` and `U_{2β} = Σ 1 ⊗ F_h ⊗ V_h`.
    pub fn commutation_residual(&self, pair: &RepPair) -> Result<f64, BoxError> {
        if pair.left_group() != self.chi.left() || pair.right_group() != self.chi.right() {
            return Err(BoxError::GroupMismatch);
        }
        let (dk, dl, m) = (self.k.dim(), self.l.dim(), pair.space_dim());
        let dims = [dk, dl, m];
        let size = dk * dl * m;
        let mut u1 = CMatrix::zeros(size, size);
        for (g, e) in self.k.projections().iter().enumerate() {
            u1 += &embed(&e.kron(pair.u(g)), &[1, 3], &dims);
        }
        let mut u2 = CMatrix::zeros(size, size);
        let one_k = CMatrix::identity(dk);
        for (h, f) in self.l.projections().iter().enumerate() {
            u2 += &one_k.kron(&f.kron(pair.v(h)));
        }
        let z12 = self.matrix.kron(&CMatrix::identity(m));
        Ok((&(&u1 * &u2) * &z12).distance(&(&u2 * &u1)))
    }
}

/// `ι_C(c) = φ(c) ⊗ 1`, `ι_D(d) = Z (1 ⊗ ψ(d)) Z*` on `K ⊗ L`.
pub fn build_via_covariant(
    cov_c: &CovariantRep,
    cov_d: &CovariantRep,
    chi: &Bicharacter,
    tol: Tolerance,
) -> Result<CrossedProduct, BoxError> {
    let z = ZUnitary::new(cov_c.space(), cov_d.space(), chi)?;
    let (k, l) = (cov_c.space().dim(), cov_d.space().dim());
    let one_k = CMatrix::identity(k);
    let one_l = CMatrix::identity(l);
    let za = z.matrix.adjoint();
    let iota_c = cov_c.images().iter().map(|x| x.kron(&one_l)).collect();
    let iota_d = cov_d
        .images()
        .iter()
        .map(|y| &(&z.matrix * &one_k.kron(y)) * &za)
        .collect();
    let mut x = CrossedProduct::from_embeddings(
        cov_c.algebra().clone(),
        cov_d.algebra().clone(),
        chi.clone(),
        iota_c,
        iota_d,
        Route::Covariant { k, l },
        tol,
    )?;
    x.z = Some(z);
    Ok(x)
}

/// Searches for the equivalence `X1 → X2` fixing both embeddings. Both must
/// be built over the same algebras `C`, `D` (the gradings may differ).
///
/// The family is the product basis followed by `ι_C(c_i)` and `ι_D(d_j)`;
/// the latter generate `X1`, so multiplicativity is checked against them.
pub fn equivalent(x1: &CrossedProduct, x2: &CrossedProduct, tol: Tolerance) -> IsoSearch {
    let cs = x1.c.homogeneous_basis();
    let ds = x1.d.homogeneous_basis();
    let mut v = x1.products.clone();
    let mut w = x2.family(cs, ds);
    let start = v.len();
    v.extend(x1.iota_c.iter().cloned());
    v.extend(x1.iota_d.iter().cloned());
    w.extend(cs.iter().map(|c| x2.iota_c(c)));
    w.extend(ds.iter().map(|d| x2.iota_d(d)));
    let generators: Vec<usize> = (start..v.len()).collect();
    find_isomorphism_with_generators(&x1.algebra, &v, &x2.algebra, &w, &generators, tol)
}

#[derive(Debug, Clone, Serialize)]
pub struct PodlesReport {
    pub dim: usize,
    pub expected: usize,
    pub equal: bool,
}

/// `span (C⊠D)·(1 ⊗ 1 ⊗ M_L) = C ⊗ D ⊗ M_L` on the three-leg ambient space.
///
/// Right multiplication by `1 ⊗ 1 ⊗ E_ij` moves column block `i` to block
/// `j`, so both sides are `V ⊗ ⟨e_j⟩` for the span `V` of column blocks.
/// Only the `V`s are compared.
pub fn podles_span_check(x: &CrossedProduct, tol: Tolerance) -> Result<PodlesReport, BoxError> {
    let Route::Heisenberg {
        n_c, n_d, carrier, ..
    } = x.route
    else {
        return Err(BoxError::WrongRoute);
    };
    let m = n_c * n_d;
    let n = m * carrier;
    let count = x.dim() * carrier;
    if count * n * m > SPAN_ENTRY_CAP {
        return Err(BoxError::TooLarge {
            what: "Podleś span check",
            needed: count * n * m,
            cap: SPAN_ENTRY_CAP,
        });
    }
    let mut left = Vec::with_capacity(count);
    for a in x.algebra.basis() {
        for i in 0..carrier {
            left.push(CMatrix::from_fn(n, m, |r, c| a.get(r, c * carrier + i)));
        }
    }
    let mut right = Vec::new();
    for c in x.c.algebra().basis() {
        for d in x.d.algebra().basis() {
            let cd = c.kron(d);
            for i in 0..carrier {
                right.push(cd.kron(&CMatrix::unit(carrier, 1, i, 0)));
            }
        }
    }
    let s = Subspace::spanned_by(n, m, &left, tol)?;
    let t = Subspace::spanned_by(n, m, &right, tol)?;
    Ok(PodlesReport {
        dim: s.dim() * carrier,
        expected: x.c.dim() * x.d.dim() * carrier * carrier,
        equal: subspace_equal(&s, &t, tol)?,
    })
}
