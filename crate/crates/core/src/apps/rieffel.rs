use std::collections::BTreeMap;

use num_complex::Complex64;

use super::AppsError;
use crate::abgroup::Bicharacter;
use crate::boxtimes::{build_via_heisenberg, CrossedProduct};
use crate::coact::GradedAlgebra;
use crate::heis::canonical_heisenberg;
use crate::matspan::linalg::{pseudo_inverse, Coords};
use crate::matspan::Tolerance;
use crate::report::{triplets, Report};

/// Drop threshold for structure constants.
const SPARSE_EPS: f64 = 1e-12;

type Sparse = BTreeMap<usize, Complex64>;

/// Structure constants of the cocycle twist of `C ⊗ D` on the basis
/// `c_i ⊗ d_j` (index `i·dim D + j`), together with its involution.
#[derive(Debug, Clone)]
pub struct TwistedProductTable {
    pub dim_c: usize,
    pub dim_d: usize,
    /// `products[a][b]` is `e_a ·_Ψ e_b` in basis coordinates.
    products: Vec<Vec<Sparse>>,
    stars: Vec<Sparse>,
}

impl TwistedProductTable {
    pub fn dim(&self) -> usize {
        self.dim_c * self.dim_d
    }

    /// Nonzero entries `(a, b, k, s)` of `e_a e_b = Σ s e_k`.
    pub fn constants(&self) -> Vec<(usize, usize, usize, Complex64)> {
        let mut out = Vec::new();
        for (a, row) in self.products.iter().enumerate() {
            for (b, v) in row.iter().enumerate() {
                out.extend(v.iter().map(|(&k, &s)| (a, b, k, s)));
            }
        }
        out
    }

    pub fn star(&self, a: usize) -> &Sparse {
        &self.stars[a]
    }

    fn mul(&self, x: &Sparse, y: &Sparse) -> Sparse {
        let mut out = Sparse::new();
        for (&a, &s) in x {
            for (&b, &t) in y {
                for (&k, &r) in &self.products[a][b] {
                    *out.entry(k).or_default() += s * t * r;
                }
            }
        }
        out
    }

    /// Largest `‖(e_a e_b) e_c − e_a (e_b e_c)‖` over basis triples.
    pub fn associativity_residual(&self) -> f64 {
        let m = self.dim();
        let unit = |a: usize| Sparse::from([(a, Complex64::new(1.0, 0.0))]);
        let mut worst: f64 = 0.0;
        for a in 0..m {
            for b in 0..m {
                let ab = &self.products[a][b];
                if ab.is_empty() {
                    continue;
                }
                for c in 0..m {
                    let left = self.mul(ab, &unit(c));
                    let right = self.mul(&unit(a), &self.products[b][c]);
                    worst = worst.max(sparse_distance(&left, &right));
                }
            }
        }
        worst
    }
}

fn sparse_distance(x: &Sparse, y: &Sparse) -> f64 {
    let mut keys: Vec<usize> = x.keys().chain(y.keys()).copied().collect();
    keys.sort_unstable();
    keys.dedup();
    keys.iter()
        .map(|k| {
            let a = x.get(k).copied().unwrap_or_default();
            let b = y.get(k).copied().unwrap_or_default();
            (a - b).norm_sqr()
        })
        .fold(0.0, |s, x| s + x)
        .sqrt()
}

fn sparse(v: impl IntoIterator<Item = (usize, Complex64)>) -> Sparse {
    v.into_iter()
        .filter(|(_, z)| z.norm() > SPARSE_EPS)
        .collect()
}

/// `Ψ((g₁,h₁),(g₂,h₂)) = conj χ(g₂,h₁)`.
fn psi(chi: &Bicharacter, g2: usize, h1: usize) -> Complex64 {
    chi.value(&chi.left().element_at(g2), &chi.right().element_at(h1))
        .conj()
}

/// `(c_i ⊗ d_j)·_Ψ(c_k ⊗ d_l) = Ψ·(c_i c_k ⊗ d_j d_l)` and
/// `(c ⊗ d)* = conj χ(g,h)·(c* ⊗ d*)`, expanded in the homogeneous bases.
pub fn twisted_table(
    c: &GradedAlgebra,
    d: &GradedAlgebra,
    chi: &Bicharacter,
) -> TwistedProductTable {
    let (cs, ds) = (c.homogeneous_basis(), d.homogeneous_basis());
    let (gc, gd) = (c.degrees(), d.degrees());
    let (n, m) = (cs.len(), ds.len());
    let sc_c: Vec<Vec<Vec<Complex64>>> = cs
        .iter()
        .map(|x| cs.iter().map(|y| c.homogeneous_coords(&(x * y))).collect())
        .collect();
    let sc_d: Vec<Vec<Vec<Complex64>>> = ds
        .iter()
        .map(|x| ds.iter().map(|y| d.homogeneous_coords(&(x * y))).collect())
        .collect();
    let star_c: Vec<Vec<Complex64>> = cs
        .iter()
        .map(|x| c.homogeneous_coords(&x.adjoint()))
        .collect();
    let star_d: Vec<Vec<Complex64>> = ds
        .iter()
        .map(|x| d.homogeneous_coords(&x.adjoint()))
        .collect();

    let tensor = |x: &[Complex64], y: &[Complex64], s: Complex64| {
        sparse(x.iter().enumerate().flat_map(|(p, &a)| {
            y.iter()
                .enumerate()
                .map(move |(q, &b)| (p * m + q, s * a * b))
        }))
    };
    let mut products = vec![vec![Sparse::new(); n * m]; n * m];
    let mut stars = Vec::with_capacity(n * m);
    for i in 0..n {
        for j in 0..m {
            let g = chi.left().element_at(gc[i]);
            let h = chi.right().element_at(gd[j]);
            stars.push(tensor(&star_c[i], &star_d[j], chi.value(&g, &h).conj()));
            for k in 0..n {
                for l in 0..m {
                    products[i * m + j][k * m + l] =
                        tensor(&sc_c[i][k], &sc_d[j][l], psi(chi, gc[k], gd[j]));
                }
            }
        }
    }
    TwistedProductTable {
        dim_c: n,
        dim_d: m,
        products,
        stars,
    }
}

/// Largest two-cocycle defect of `Ψ` on `G × H`:
/// `Ψ(x,y)Ψ(x+y,z) − Ψ(y,z)Ψ(x,y+z)`.
pub fn psi_cocycle_residual(chi: &Bicharacter) -> f64 {
    let (g, h) = (chi.left(), chi.right());
    let pairs: Vec<(usize, usize)> = (0..g.order())
        .flat_map(|a| (0..h.order()).map(move |b| (a, b)))
        .collect();
    let add = |x: (usize, usize), y: (usize, usize)| {
        (
            g.index_of(&g.add(&g.element_at(x.0), &g.element_at(y.0))),
            h.index_of(&h.add(&h.element_at(x.1), &h.element_at(y.1))),
        )
    };
    let p = |x: (usize, usize), y: (usize, usize)| psi(chi, y.0, x.1);
    let mut worst: f64 = 0.0;
    for &x in &pairs {
        for &y in &pairs {
            for &z in &pairs {
                let lhs = p(x, y) * p(add(x, y), z);
                let rhs = p(y, z) * p(x, add(y, z));
                worst = worst.max((lhs - rhs).norm());
            }
        }
    }
    worst
}

/// The cocycle twist next to `C ⊠ D`, compared on structure constants and
/// involutions in the product basis.
#[derive(Debug, Clone)]
pub struct RieffelComparison {
    pub table: TwistedProductTable,
    pub boxtimes: CrossedProduct,
    pub structure_residual: f64,
    pub star_residual: f64,
    pub associativity_residual: f64,
    pub psi_residual: f64,
    /// The product basis of `C ⊠ D` is a basis, so matching constants
    /// make `c ⊗ d ↦ ι_C(c)ι_D(d)` an isomorphism.
    pub iso_found: bool,
}

/// Coordinates of `x` in the (non-orthonormal) product basis of `X`.
fn product_coords(x: &CrossedProduct, inv: &Coords, y: &crate::matspan::CMatrix) -> Sparse {
    let s = x.algebra().subspace();
    let c = Coords::from_vec(s.dim(), 1, s.coords(y));
    sparse((inv * c).iter().copied().enumerate())
}

pub fn rieffel_twist_compare(
    c: &GradedAlgebra,
    d: &GradedAlgebra,
    chi: &Bicharacter,
    tol: Tolerance,
) -> Result<RieffelComparison, AppsError> {
    let table = twisted_table(c, d, chi);
    let boxtimes = build_via_heisenberg(c, d, chi, &canonical_heisenberg(chi), tol)?;

    let mut from_box: BTreeMap<(usize, usize), Sparse> = BTreeMap::new();
    for (a, b, k, s) in boxtimes.structure_constants() {
        from_box.entry((a, b)).or_default().insert(k, s);
    }
    let m = table.dim();
    let mut structure_residual: f64 = 0.0;
    for a in 0..m {
        for b in 0..m {
            let empty = Sparse::new();
            let lhs = from_box.get(&(a, b)).unwrap_or(&empty);
            structure_residual =
                structure_residual.max(sparse_distance(lhs, &table.products[a][b]));
        }
    }

    let s = boxtimes.algebra().subspace();
    let mut basis = Coords::zeros(s.dim(), m);
    for (k, p) in boxtimes.products().iter().enumerate() {
        for (r, z) in s.coords(p).into_iter().enumerate() {
            basis[(r, k)] = z;
        }
    }
    let inv = pseudo_inverse(&basis, SPARSE_EPS);
    let star_residual = boxtimes
        .products()
        .iter()
        .enumerate()
        .map(|(a, p)| {
            sparse_distance(
                &product_coords(&boxtimes, &inv, &p.adjoint()),
                table.star(a),
            )
        })
        .fold(0.0, f64::max);

    let associativity_residual = table.associativity_residual();
    let psi_residual = psi_cocycle_residual(chi);
    let iso_found =
        boxtimes.dim() == m && structure_residual < tol.eps_eq && star_residual < tol.eps_eq;
    Ok(RieffelComparison {
        table,
        boxtimes,
        structure_residual,
        star_residual,
        associativity_residual,
        psi_residual,
        iso_found,
    })
}

impl RieffelComparison {
    pub fn report(&self, inputs: serde_json::Value, tol: Tolerance) -> Report {
        let mut r = Report::new("rieffel", inputs, tol);
        r.witness = self.boxtimes.route().label();
        r.dim("dim", self.table.dim())
            .dim("boxtimes", self.boxtimes.dim())
            .residual("structure_constants", self.structure_residual)
            .residual("star", self.star_residual)
            .residual("associativity", self.associativity_residual)
            .residual("psi_cocycle", self.psi_residual)
            .verdict("psi_two_cocycle", self.psi_residual < tol.eps_eq)
            .verdict("associative", self.associativity_residual < tol.eps_eq)
            .verdict("isomorphic", self.iso_found);
        r.iso_found = self.iso_found;
        r.structure_constants = Some(triplets(&self.table.constants()));
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abgroup::FinAbGroup;
    use crate::matspan::AlgebraBasis;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn trivial_chi_is_untwisted() {
        let g = FinAbGroup::cyclic(2);
        let c = GradedAlgebra::graded_full_matrix(&g, &[0, 1], tol()).unwrap();
        let chi = Bicharacter::trivial(&g, &g);
        let r = rieffel_twist_compare(&c, &c, &chi, tol()).unwrap();
        assert!(r.iso_found);
        assert_eq!(r.psi_residual, 0.0);
        for (_, _, _, s) in r.table.constants() {
            assert!((s.im).abs() < 1e-15 && s.re > 0.0);
        }
    }

    #[test]
    fn z2_signs_are_koszul() {
        let g = FinAbGroup::cyclic(2);
        let chi = Bicharacter::cyclic(2, 1);
        for (g2, h1) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            let expected = if g2 * h1 == 1 { -1.0 } else { 1.0 };
            assert!((psi(&chi, g2, h1) - Complex64::new(expected, 0.0)).norm() < 1e-15);
        }
        let c = GradedAlgebra::group_algebra(&g, tol()).unwrap();
        assert!(
            rieffel_twist_compare(&c, &c, &chi, tol())
                .unwrap()
                .iso_found
        );
    }

    #[test]
    fn torus_three_constants_are_cube_roots() {
        let g = FinAbGroup::cyclic(3);
        let c = GradedAlgebra::group_algebra(&g, tol()).unwrap();
        let r = rieffel_twist_compare(&c, &c, &Bicharacter::cyclic(3, 1), tol()).unwrap();
        assert!(r.iso_found);
        assert!(r.associativity_residual < 1e-12);
        // Normalized bases scale every product by 1/√3 on each leg.
        for (_, _, _, s) in r.table.constants() {
            let t = s * 3.0;
            assert!((t.norm() - 1.0).abs() < 1e-12);
            assert!((t * t * t - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn mixed_groups() {
        let g = FinAbGroup::cyclic(2);
        let h = FinAbGroup::cyclic(4);
        let c = GradedAlgebra::graded_full_matrix(&g, &[0, 1], tol()).unwrap();
        let d = GradedAlgebra::trivially_graded(&h, &AlgebraBasis::full(2), tol()).unwrap();
        let d = d
            .direct_sum(&GradedAlgebra::group_algebra(&h, tol()).unwrap(), tol())
            .unwrap();
        let chi = Bicharacter::new(g, h, vec![vec![1]]).unwrap();
        let r = rieffel_twist_compare(&c, &d, &chi, tol()).unwrap();
        assert!(r.iso_found, "{} {}", r.structure_residual, r.star_residual);
        assert!(r.report(serde_json::json!({}), tol()).pass());
    }
}
