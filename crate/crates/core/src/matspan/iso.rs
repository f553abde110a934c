use num_complex::Complex64;
use serde::Serialize;

use super::algebra::AlgebraBasis;
use super::linalg::{pseudo_inverse, rank, Coords};
use super::matrix::CMatrix;
use super::subspace::Subspace;
use super::Tolerance;

/// Linear map between two subspaces, stored in their orthonormal bases.
#[derive(Clone, Debug)]
pub struct LinearMap {
    source: Subspace,
    target: Subspace,
    matrix: Coords,
}

impl LinearMap {
    pub fn apply(&self, x: &CMatrix) -> CMatrix {
        let c = Coords::from_vec(self.source.dim(), 1, self.source.coords(x));
        let y = &self.matrix * c;
        self.target.combine(y.as_slice())
    }

    pub fn source(&self) -> &Subspace {
        &self.source
    }

    pub fn target(&self) -> &Subspace {
        &self.target
    }

    pub fn rank(&self, tol: Tolerance) -> usize {
        rank(&self.matrix, tol.eps_rank)
    }

    pub fn is_injective(&self, tol: Tolerance) -> bool {
        self.rank(tol) == self.source.dim()
    }

    pub fn is_surjective(&self, tol: Tolerance) -> bool {
        self.rank(tol) == self.target.dim()
    }

    /// Coordinate matrix, `target.dim() × source.dim()`, row-major.
    pub fn coordinate_matrix(&self) -> Vec<Vec<Complex64>> {
        (0..self.matrix.nrows())
            .map(|i| {
                (0..self.matrix.ncols())
                    .map(|j| self.matrix[(i, j)])
                    .collect()
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum IsoFailure {
    FamilyLength { source: usize, target: usize },
    FamilyOutsideAlgebra { residual: f64 },
    SourceNotSpanned { rank: usize, dim: usize },
    TargetNotSpanned { rank: usize, dim: usize },
    DimensionMismatch { source: usize, target: usize },
    InconsistentRelations { residual: f64 },
    NotMultiplicative { residual: f64 },
    NotStarPreserving { residual: f64 },
}

/// Outcome of a relation-transport search. `map` is present exactly when
/// every certification passed.
#[derive(Debug, Clone)]
pub struct IsoSearch {
    pub map: Option<LinearMap>,
    pub failure: Option<IsoFailure>,
    pub consistency_residual: f64,
    pub multiplicativity_residual: f64,
    pub star_residual: f64,
}

impl IsoSearch {
    pub fn found(&self) -> bool {
        self.map.is_some()
    }

    fn fail(failure: IsoFailure) -> Self {
        Self {
            map: None,
            failure: Some(failure),
            consistency_residual: f64::NAN,
            multiplicativity_residual: f64::NAN,
            star_residual: f64::NAN,
        }
    }
}

fn coords_of(a: &AlgebraBasis, family: &[CMatrix]) -> (Coords, f64) {
    let s = a.subspace();
    let mut out = Coords::zeros(s.dim(), family.len());
    let mut outside: f64 = 0.0;
    for (i, x) in family.iter().enumerate() {
        for (p, c) in s.coords(x).into_iter().enumerate() {
            out[(p, i)] = c;
        }
        outside = outside.max(s.residual(x));
    }
    (out, outside)
}

fn column_scale(m: &Coords) -> f64 {
    m.column_iter().map(|c| c.norm()).fold(1.0, f64::max)
}

/// Searches for the *-isomorphism `A1 → A2` sending `v_i ↦ w_i`.
///
/// The map is solved on coordinates, then certified: the relations of
/// each family must hold in the other, the map must be bijective, and it
/// must respect all pairwise products and adjoints of the family.
pub fn find_generator_isomorphism(
    a1: &AlgebraBasis,
    v: &[CMatrix],
    a2: &AlgebraBasis,
    w: &[CMatrix],
    tol: Tolerance,
) -> IsoSearch {
    search(a1, v, a2, w, None, tol, true)
}

/// Like [`find_generator_isomorphism`], but multiplicativity is checked only
/// on products `v_i v_s` with `s ∈ generators`. The caller guarantees that
/// `{v_s}` generates `A1` as an algebra; then `φ(x v_s) = φ(x)φ(v_s)` for
/// all `x` extends to all products by induction on word length.
pub fn find_isomorphism_with_generators(
    a1: &AlgebraBasis,
    v: &[CMatrix],
    a2: &AlgebraBasis,
    w: &[CMatrix],
    generators: &[usize],
    tol: Tolerance,
) -> IsoSearch {
    search(a1, v, a2, w, Some(generators), tol, true)
}

/// Like [`find_generator_isomorphism`] but only asks for a well-defined
/// *-homomorphism; the target family need not span and the map need not be
/// bijective.
pub fn find_generator_morphism(
    a1: &AlgebraBasis,
    v: &[CMatrix],
    a2: &AlgebraBasis,
    w: &[CMatrix],
    tol: Tolerance,
) -> IsoSearch {
    search(a1, v, a2, w, None, tol, false)
}

fn search(
    a1: &AlgebraBasis,
    v: &[CMatrix],
    a2: &AlgebraBasis,
    w: &[CMatrix],
    generators: Option<&[usize]>,
    tol: Tolerance,
    bijective: bool,
) -> IsoSearch {
    if v.len() != w.len() {
        return IsoSearch::fail(IsoFailure::FamilyLength {
            source: v.len(),
            target: w.len(),
        });
    }
    let (d1, d2) = (a1.dim(), a2.dim());
    if bijective && d1 != d2 {
        return IsoSearch::fail(IsoFailure::DimensionMismatch {
            source: d1,
            target: d2,
        });
    }
    let (vc, out_v) = coords_of(a1, v);
    let (wc, out_w) = coords_of(a2, w);
    if out_v.max(out_w) >= tol.eps_eq {
        return IsoSearch::fail(IsoFailure::FamilyOutsideAlgebra {
            residual: out_v.max(out_w),
        });
    }
    let rv = rank(&vc, tol.eps_rank);
    if rv != d1 {
        return IsoSearch::fail(IsoFailure::SourceNotSpanned { rank: rv, dim: d1 });
    }
    if bijective {
        let rw = rank(&wc, tol.eps_rank);
        if rw != d2 {
            return IsoSearch::fail(IsoFailure::TargetNotSpanned { rank: rw, dim: d2 });
        }
    }

    let phi = &wc * pseudo_inverse(&vc, tol.eps_rank);
    let mut consistency = (&phi * &vc - &wc).norm() / column_scale(&wc);
    if bijective {
        let back = &vc * pseudo_inverse(&wc, tol.eps_rank);
        consistency = consistency.max((&back * &wc - &vc).norm() / column_scale(&vc));
    }
    if consistency >= tol.eps_eq {
        let mut r = IsoSearch::fail(IsoFailure::InconsistentRelations {
            residual: consistency,
        });
        r.consistency_residual = consistency;
        return r;
    }

    let s1 = a1.subspace();
    let s2 = a2.subspace();
    let transport = |x: &CMatrix, y: &CMatrix| -> f64 {
        // ‖φ(x) − y‖ in coordinates, plus the part of y outside A2.
        let cx = Coords::from_vec(d1, 1, s1.coords(x));
        let cy = Coords::from_vec(d2, 1, s2.coords(y));
        let diff = (&phi * cx - cy).norm();
        let outside = s2.residual(y) * y.norm().max(1.0);
        (diff + outside) / y.norm().max(1.0)
    };

    let all: Vec<usize> = (0..v.len()).collect();
    let right = match generators {
        Some(g) if g.iter().all(|&s| s < v.len()) => g,
        Some(_) => {
            return IsoSearch::fail(IsoFailure::FamilyLength {
                source: v.len(),
                target: w.len(),
            })
        }
        None => &all,
    };
    let mut mult: f64 = 0.0;
    for i in 0..v.len() {
        for &j in right {
            mult = mult.max(transport(&(&v[i] * &v[j]), &(&w[i] * &w[j])));
        }
    }
    let mut star: f64 = 0.0;
    for (x, y) in v.iter().zip(w) {
        star = star.max(transport(&x.adjoint(), &y.adjoint()));
    }

    let mut result = IsoSearch {
        map: None,
        failure: None,
        consistency_residual: consistency,
        multiplicativity_residual: mult,
        star_residual: star,
    };
    if mult >= tol.eps_eq {
        result.failure = Some(IsoFailure::NotMultiplicative { residual: mult });
    } else if star >= tol.eps_eq {
        result.failure = Some(IsoFailure::NotStarPreserving { residual: star });
    } else {
        result.map = Some(LinearMap {
            source: s1.clone(),
            target: s2.clone(),
            matrix: phi,
        });
    }
    result
}
