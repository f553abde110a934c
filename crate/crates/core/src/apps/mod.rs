//! Named scenarios. Each builds its objects, certifies the expected
//! identification and can summarize itself as a [`Report`](crate::report::Report).

mod cocycle;
mod crossed;
mod modules;
mod rieffel;
mod skew;
mod torus;

use thiserror::Error;

use crate::abgroup::GroupError;
use crate::boxtimes::BoxError;
use crate::coact::CoactError;
use crate::coact::GradedAlgebra;
use crate::matspan::{AlgebraBasis, CMatrix, MatError};
use crate::qgroup::translation;

pub use cocycle::{
    cocycle_conjugacy, compact_operators_example, inner_coaction_instance, CocycleConjugacy,
    InnerInstance,
};
pub use crossed::{
    dual_coaction, embed_in_reduced, group_algebra_crossed_is_full, reduced_crossed_product,
    DualCoaction, ReducedCrossed, ReducedEmbedding,
};
pub use modules::{
    composition_check, module_boxtimes, CompositionCheck, GradedHilbertModule, ModuleBoxtimes,
};
pub use rieffel::{
    psi_cocycle_residual, rieffel_twist_compare, twisted_table, RieffelComparison,
    TwistedProductTable,
};
pub use skew::{skew_m2_generators, skew_tensor, SkewM2, SkewTensor};
pub use torus::{finite_torus, FiniteTorus};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AppsError {
    #[error(transparent)]
    Mat(#[from] MatError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Coact(#[from] CoactError),
    #[error(transparent)]
    Box(#[from] BoxError),
    #[error("parameter out of range: {0}")]
    Parameter(String),
    #[error("gradings must be over {0}")]
    WrongGroup(&'static str),
    #[error("{what} failed (residual {residual:.3e})")]
    Certification { what: &'static str, residual: f64 },
}

/// The unit of a finite-dimensional *-subalgebra: the Hilbert–Schmidt
/// projection of the identity.
pub(crate) fn unit_of(a: &AlgebraBasis) -> CMatrix {
    a.subspace().project(&CMatrix::identity(a.ambient_dim()))
}

/// Images of the homogeneous basis of [`GradedAlgebra::group_algebra`] under
/// the map `λ_g ↦ f(g)`.
pub(crate) fn group_algebra_images(
    c: &GradedAlgebra,
    f: impl Fn(usize) -> CMatrix,
) -> Vec<CMatrix> {
    let order = c.group().order() as f64;
    c.homogeneous_basis()
        .iter()
        .zip(c.degrees())
        .map(|(b, &g)| {
            let s = translation(c.group(), g).hs_inner(b) / order;
            f(g).scale(s)
        })
        .collect()
}
