use super::AppsError;
use crate::abgroup::{Bicharacter, FinAbGroup};
use crate::boxtimes::{build_via_heisenberg, CrossedProduct};
use crate::coact::GradedAlgebra;
use crate::heis::canonical_heisenberg;
use crate::matspan::{
    find_generator_isomorphism, subspace_equal, AlgebraBasis, CMatrix, IsoSearch, Subspace,
    Tolerance,
};
use crate::report::Report;

/// A graded right Hilbert `C`-module `E ⊆ M_{n×m}` with `C ⊆ M_m`, together
/// with its linking algebra `[[K(E), E], [E*, C]] ⊆ M_{n+m}`.
#[derive(Debug, Clone)]
pub struct GradedHilbertModule {
    over: GradedAlgebra,
    rows: usize,
    basis: Vec<CMatrix>,
    degrees: Vec<usize>,
    compact: GradedAlgebra,
    linking: GradedAlgebra,
}

fn block(size: usize, r0: usize, c0: usize, x: &CMatrix) -> CMatrix {
    let mut out = CMatrix::zeros(size, size);
    out.set_block(r0, c0, x);
    out
}

impl GradedHilbertModule {
    /// `parts` lists homogeneous `n × m` elements by degree.
    pub fn new(
        over: GradedAlgebra,
        rows: usize,
        parts: Vec<(usize, Vec<CMatrix>)>,
        tol: Tolerance,
    ) -> Result<Self, AppsError> {
        let group = over.group().clone();
        let m = over.ambient_dim();
        let mut raw = Vec::new();
        for (g, xs) in parts {
            if g >= group.order() {
                return Err(AppsError::Parameter(format!(
                    "degree {g} outside the group"
                )));
            }
            for x in xs {
                if x.shape() != (rows, m) {
                    return Err(AppsError::Parameter(format!(
                        "module element has shape {:?}, expected ({rows}, {m})",
                        x.shape()
                    )));
                }
                raw.push((g, x));
            }
        }
        // Orthonormalize within each degree.
        let mut basis = Vec::new();
        let mut degrees = Vec::new();
        for g in 0..group.order() {
            let xs: Vec<CMatrix> = raw
                .iter()
                .filter(|(h, _)| *h == g)
                .map(|(_, x)| x.clone())
                .collect();
            if xs.is_empty() {
                continue;
            }
            let s = Subspace::spanned_by(rows, m, &xs, tol)?;
            degrees.extend(std::iter::repeat_n(g, s.dim()));
            basis.extend(s.basis().iter().cloned());
        }
        if basis.is_empty() {
            return Err(AppsError::Parameter("module is zero".into()));
        }
        let span_e = Subspace::spanned_by(rows, m, &basis, tol)?;

        let mut right: f64 = 0.0;
        let mut inner: f64 = 0.0;
        for (e, &g) in basis.iter().zip(&degrees) {
            for (c, &h) in over.homogeneous_basis().iter().zip(over.degrees()) {
                let ec = e * c;
                right = right.max(span_e.residual(&ec));
                let gh = group.index_of(&group.add(&group.element_at(g), &group.element_at(h)));
                right = right.max(residual_in_degree(&basis, &degrees, gh, &ec, tol)?);
            }
            for f in &basis {
                inner = inner.max(over.algebra().subspace().residual(&(&e.adjoint() * f)));
            }
        }
        if right >= tol.eps_eq {
            return Err(AppsError::Certification {
                what: "E·C ⊆ E with additive degrees",
                residual: right,
            });
        }
        if inner >= tol.eps_eq {
            return Err(AppsError::Certification {
                what: "E*·E ⊆ C",
                residual: inner,
            });
        }

        let mut k_parts: Vec<(usize, Vec<CMatrix>)> = Vec::new();
        for (e, &g) in basis.iter().zip(&degrees) {
            for (f, &h) in basis.iter().zip(&degrees) {
                let d = group.index_of(&group.sub(&group.element_at(g), &group.element_at(h)));
                k_parts.push((d, vec![e * &f.adjoint()]));
            }
        }
        let compact = GradedAlgebra::new(group.clone(), rows, k_parts.clone(), tol)?;

        let size = rows + m;
        let mut l_parts: Vec<(usize, Vec<CMatrix>)> = Vec::new();
        for (b, &g) in compact.homogeneous_basis().iter().zip(compact.degrees()) {
            l_parts.push((g, vec![block(size, 0, 0, b)]));
        }
        for (e, &g) in basis.iter().zip(&degrees) {
            let neg = group.index_of(&group.neg(&group.element_at(g)));
            l_parts.push((g, vec![block(size, 0, rows, e)]));
            l_parts.push((neg, vec![block(size, rows, 0, &e.adjoint())]));
        }
        for (c, &g) in over.homogeneous_basis().iter().zip(over.degrees()) {
            l_parts.push((g, vec![block(size, rows, rows, c)]));
        }
        let linking = GradedAlgebra::new(group, size, l_parts, tol)?;
        Ok(Self {
            over,
            rows,
            basis,
            degrees,
            compact,
            linking,
        })
    }

    /// `E = C` over itself.
    pub fn trivial(c: &GradedAlgebra, tol: Tolerance) -> Result<Self, AppsError> {
        let parts = c
            .homogeneous_basis()
            .iter()
            .zip(c.degrees())
            .map(|(b, &g)| (g, vec![b.clone()]))
            .collect();
        Self::new(c.clone(), c.ambient_dim(), parts, tol)
    }

    /// Row vectors `M_{1×m}` over `End(V)`, `deg e_j = −deg v_j`; `K(E)` is
    /// the scalars.
    pub fn row(group: &FinAbGroup, degrees: &[usize], tol: Tolerance) -> Result<Self, AppsError> {
        let c = GradedAlgebra::graded_full_matrix(group, degrees, tol)?;
        let m = degrees.len();
        let parts = degrees
            .iter()
            .enumerate()
            .map(|(j, &d)| {
                let g = group.index_of(&group.neg(&group.element_at(d)));
                (g, vec![CMatrix::unit(1, m, 0, j)])
            })
            .collect();
        Self::new(c, 1, parts, tol)
    }

    pub fn over(&self) -> &GradedAlgebra {
        &self.over
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn homogeneous_basis(&self) -> &[CMatrix] {
        &self.basis
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    /// `K(E) = span E E*` in `M_n`.
    pub fn compact(&self) -> &GradedAlgebra {
        &self.compact
    }

    pub fn linking(&self) -> &GradedAlgebra {
        &self.linking
    }

    fn size(&self) -> usize {
        self.rows + self.over.ambient_dim()
    }

    pub fn embed_module(&self, e: &CMatrix) -> CMatrix {
        block(self.size(), 0, self.rows, e)
    }

    pub fn embed_algebra(&self, c: &CMatrix) -> CMatrix {
        block(self.size(), self.rows, self.rows, c)
    }

    pub fn embed_compact(&self, k: &CMatrix) -> CMatrix {
        block(self.size(), 0, 0, k)
    }
}

fn residual_in_degree(
    basis: &[CMatrix],
    degrees: &[usize],
    g: usize,
    x: &CMatrix,
    tol: Tolerance,
) -> Result<f64, AppsError> {
    let part: Vec<CMatrix> = basis
        .iter()
        .zip(degrees)
        .filter(|(_, &h)| h == g)
        .map(|(b, _)| b.clone())
        .collect();
    if part.is_empty() {
        return Ok(x.norm());
    }
    let (r, c) = x.shape();
    Ok(Subspace::spanned_by(r, c, &part, tol)?.residual(x))
}

/// `E ⊠ F` inside `C′ ⊠ D′` for the linking algebras `C′`, `D′`.
#[derive(Debug, Clone)]
pub struct ModuleBoxtimes {
    pub linking: CrossedProduct,
    pub module: Subspace,
    /// `span ι(C)ι(D)` in the same ambient.
    pub algebra: Subspace,
    pub right_module_residual: f64,
    pub inner_product_residual: f64,
    /// `span (E⊠F)(E⊠F)* = span ι(K(E))ι(K(F))`.
    pub compact_span_equal: bool,
    pub compact_iso: IsoSearch,
    /// `span ι(E)ι(F) = span ι(F)ι(E)`.
    pub exchange_equal: bool,
}

pub fn module_boxtimes(
    e: &GradedHilbertModule,
    f: &GradedHilbertModule,
    chi: &Bicharacter,
    tol: Tolerance,
) -> Result<ModuleBoxtimes, AppsError> {
    let linking = build_via_heisenberg(
        e.linking(),
        f.linking(),
        chi,
        &canonical_heisenberg(chi),
        tol,
    )?;
    let n = linking.ambient_dim();
    let span = |v: &[CMatrix]| Subspace::spanned_by(n, n, v, tol);

    let ie: Vec<CMatrix> = e
        .homogeneous_basis()
        .iter()
        .map(|x| linking.iota_c(&e.embed_module(x)))
        .collect();
    let jf: Vec<CMatrix> = f
        .homogeneous_basis()
        .iter()
        .map(|x| linking.iota_d(&f.embed_module(x)))
        .collect();
    let pairs = |a: &[CMatrix], b: &[CMatrix]| -> Vec<CMatrix> {
        a.iter()
            .flat_map(|x| b.iter().map(move |y| x * y))
            .collect()
    };
    let ef = pairs(&ie, &jf);
    let module = span(&ef)?;
    let exchange_equal = subspace_equal(&module, &span(&pairs(&jf, &ie))?, tol)?;

    let ic: Vec<CMatrix> = e
        .over()
        .homogeneous_basis()
        .iter()
        .map(|x| linking.iota_c(&e.embed_algebra(x)))
        .collect();
    let jd: Vec<CMatrix> = f
        .over()
        .homogeneous_basis()
        .iter()
        .map(|x| linking.iota_d(&f.embed_algebra(x)))
        .collect();
    let cd = pairs(&ic, &jd);
    let algebra = span(&cd)?;

    let mut right: f64 = 0.0;
    let mut inner: f64 = 0.0;
    for x in module.basis() {
        for y in &cd {
            right = right.max(module.residual(&(x * y)));
        }
        for y in module.basis() {
            inner = inner.max(algebra.residual(&(&x.adjoint() * y)));
        }
    }

    let jl: Vec<CMatrix> = f
        .compact()
        .homogeneous_basis()
        .iter()
        .map(|l| linking.iota_d(&f.embed_compact(l)))
        .collect();
    let ik: Vec<CMatrix> = e
        .compact()
        .homogeneous_basis()
        .iter()
        .map(|k| linking.iota_c(&e.embed_compact(k)))
        .collect();
    let kk = pairs(&ik, &jl);
    let k_span = span(&kk)?;
    let outer: Vec<CMatrix> = module
        .basis()
        .iter()
        .flat_map(|x| module.basis().iter().map(move |y| x * &y.adjoint()))
        .collect();
    let compact_span_equal = subspace_equal(&span(&outer)?, &k_span, tol)?;

    let standalone = build_via_heisenberg(
        e.compact(),
        f.compact(),
        chi,
        &canonical_heisenberg(chi),
        tol,
    )?;
    let k_alg = AlgebraBasis::certify(k_span, tol)?;
    let compact_iso = find_generator_isomorphism(
        standalone.algebra(),
        standalone.products(),
        &k_alg,
        &kk,
        tol,
    );
    Ok(ModuleBoxtimes {
        linking,
        module,
        algebra,
        right_module_residual: right,
        inner_product_residual: inner,
        compact_span_equal,
        compact_iso,
        exchange_equal,
    })
}

impl ModuleBoxtimes {
    pub fn report(&self, name: &str, inputs: serde_json::Value, tol: Tolerance) -> Report {
        let mut r = Report::new(name, inputs, tol);
        r.witness = self.linking.route().label();
        r.dim("module", self.module.dim())
            .dim("algebra", self.algebra.dim())
            .dim("linking", self.linking.dim())
            .residual("right_module", self.right_module_residual)
            .residual("inner_product", self.inner_product_residual)
            .verdict("right_module", self.right_module_residual < tol.eps_eq)
            .verdict("inner_product", self.inner_product_residual < tol.eps_eq)
            .verdict("compact_span", self.compact_span_equal)
            .verdict("compact_iso", self.compact_iso.found())
            .verdict("exchange", self.exchange_equal);
        r.iso_found = self.compact_iso.found();
        r
    }
}

/// `span (ι(E₁)ι(F₁))(ι(E₂)ι(F₂)) = span ι(E₁E₂)ι(F₁F₂)` in
/// `End(V₁⊕V₂⊕V₃) ⊠ End(W₁⊕W₂⊕W₃)`, with `E₁ = Hom(V₂,V₁)`,
/// `E₂ = Hom(V₃,V₂)` and likewise for `F`.
#[derive(Debug, Clone)]
pub struct CompositionCheck {
    pub crossed: CrossedProduct,
    pub span_equal: bool,
    pub dim: usize,
    pub expected_dim: usize,
    /// `ι(e)ι(f)ι(e′)ι(f′) − conj χ(deg e′, deg f)·ι(ee′)ι(ff′)`.
    pub generator_residual: f64,
}

/// Homogeneous basis of `Hom(V_b, V_a)` inside `End(V)`.
fn hom_block(c: &GradedAlgebra, blocks: &[usize], a: usize, b: usize) -> Vec<(usize, CMatrix)> {
    let offset = |i: usize| blocks[..i].iter().sum::<usize>();
    let (r0, c0) = (offset(a), offset(b));
    let n = c.ambient_dim();
    let mut out = Vec::new();
    for i in 0..blocks[a] {
        for j in 0..blocks[b] {
            let x = CMatrix::unit(n, n, r0 + i, c0 + j);
            let g = c
                .decompose(&x)
                .iter()
                .position(|p| p.max_abs() > 0.5)
                .expect("matrix units are homogeneous");
            out.push((g, x));
        }
    }
    out
}

/// `v_blocks`/`w_blocks` give the sizes of `V₁,V₂,V₃` and `W₁,W₂,W₃`;
/// `v_degrees`/`w_degrees` grade the concatenated bases.
pub fn composition_check(
    v_blocks: [usize; 3],
    v_degrees: &[usize],
    w_blocks: [usize; 3],
    w_degrees: &[usize],
    chi: &Bicharacter,
    tol: Tolerance,
) -> Result<CompositionCheck, AppsError> {
    if v_blocks.iter().sum::<usize>() != v_degrees.len()
        || w_blocks.iter().sum::<usize>() != w_degrees.len()
    {
        return Err(AppsError::Parameter(
            "block sizes do not match the degree lists".into(),
        ));
    }
    let c = GradedAlgebra::graded_full_matrix(chi.left(), v_degrees, tol)?;
    let d = GradedAlgebra::graded_full_matrix(chi.right(), w_degrees, tol)?;
    let x = build_via_heisenberg(&c, &d, chi, &canonical_heisenberg(chi), tol)?;
    let n = x.ambient_dim();
    let (e1, e2, e12) = (
        hom_block(&c, &v_blocks, 0, 1),
        hom_block(&c, &v_blocks, 1, 2),
        hom_block(&c, &v_blocks, 0, 2),
    );
    let (f1, f2, f12) = (
        hom_block(&d, &w_blocks, 0, 1),
        hom_block(&d, &w_blocks, 1, 2),
        hom_block(&d, &w_blocks, 0, 2),
    );

    let value =
        |g: usize, h: usize| chi.value(&chi.left().element_at(g), &chi.right().element_at(h));
    let mut lhs = Vec::new();
    let mut generator_residual: f64 = 0.0;
    for (_, e) in &e1 {
        for (gf, f) in &f1 {
            let ef = &x.iota_c(e) * &x.iota_d(f);
            for (ge2, e2x) in &e2 {
                for (_, f2x) in &f2 {
                    let y = &(&ef * &x.iota_c(e2x)) * &x.iota_d(f2x);
                    let expected = (&x.iota_c(&(e * e2x)) * &x.iota_d(&(f * f2x)))
                        .scale(value(*ge2, *gf).conj());
                    generator_residual = generator_residual.max(y.distance(&expected));
                    lhs.push(y);
                }
            }
        }
    }
    let rhs: Vec<CMatrix> = e12
        .iter()
        .flat_map(|(_, a)| f12.iter().map(move |(_, b)| (a, b)))
        .map(|(a, b)| &x.iota_c(a) * &x.iota_d(b))
        .collect();
    let s = Subspace::spanned_by(n, n, &lhs, tol)?;
    let t = Subspace::spanned_by(n, n, &rhs, tol)?;
    let span_equal = subspace_equal(&s, &t, tol)?;
    Ok(CompositionCheck {
        crossed: x,
        span_equal,
        dim: s.dim(),
        expected_dim: e12.len() * f12.len(),
        generator_residual,
    })
}

impl CompositionCheck {
    pub fn report(&self, tol: Tolerance) -> Report {
        let mut r = Report::new("composition", serde_json::json!({}), tol);
        r.witness = self.crossed.route().label();
        r.dim("composite", self.dim)
            .dim("expected", self.expected_dim)
            .residual("generators", self.generator_residual)
            .verdict("span_equal", self.span_equal)
            .verdict("dimension", self.dim == self.expected_dim)
            .verdict("generator_identity", self.generator_residual < tol.eps_eq);
        r.iso_found = self.span_equal;
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
    fn row_module_compacts_are_scalars() {
        let g = FinAbGroup::cyclic(2);
        let e = GradedHilbertModule::row(&g, &[0, 1], tol()).unwrap();
        assert_eq!(e.compact().dim(), 1);
        assert_eq!(e.linking().dim(), 1 + 2 + 2 + 4);
    }

    #[test]
    fn bad_module_rejected() {
        let g = FinAbGroup::cyclic(2);
        let c = GradedAlgebra::graded_full_matrix(&g, &[0, 1], tol()).unwrap();
        // e₀ alone is not closed under the right action.
        let r = GradedHilbertModule::new(c, 1, vec![(0, vec![CMatrix::unit(1, 2, 0, 0)])], tol());
        assert!(matches!(r, Err(AppsError::Certification { .. })));
    }

    #[test]
    fn row_with_trivial() {
        let g = FinAbGroup::cyclic(2);
        let e = GradedHilbertModule::row(&g, &[0, 1], tol()).unwrap();
        let d = GradedAlgebra::group_algebra(&g, tol()).unwrap();
        let f = GradedHilbertModule::trivial(&d, tol()).unwrap();
        let m = module_boxtimes(&e, &f, &Bicharacter::cyclic(2, 1), tol()).unwrap();
        assert_eq!(m.module.dim(), 2 * 2);
        assert!(m.right_module_residual < 1e-10 && m.inner_product_residual < 1e-10);
        assert!(m.compact_span_equal && m.exchange_equal);
        assert!(m.compact_iso.found());
    }

    #[test]
    fn trivial_modules_reproduce_the_algebra() {
        let g = FinAbGroup::cyclic(2);
        let c = GradedAlgebra::group_algebra(&g, tol()).unwrap();
        let e = GradedHilbertModule::trivial(&c, tol()).unwrap();
        let m = module_boxtimes(&e, &e, &Bicharacter::cyclic(2, 1), tol()).unwrap();
        assert_eq!(m.module.dim(), 4);
        assert_eq!(m.algebra.dim(), 4);
        assert!(m.report("modules", serde_json::json!({}), tol()).pass());
    }

    #[test]
    fn composition_on_blocks() {
        let r = composition_check(
            [1, 2, 1],
            &[0, 1, 0, 1],
            [1, 1, 1],
            &[1, 0, 1],
            &Bicharacter::cyclic(2, 1),
            tol(),
        )
        .unwrap();
        assert!(r.span_equal, "{} vs {}", r.dim, r.expected_dim);
        assert_eq!(r.dim, 1);
        assert!(r.generator_residual < 1e-12);
    }
}
