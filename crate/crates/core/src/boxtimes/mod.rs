//! `C ⊠_χ D` built two ways: from a Heisenberg pair on a three-leg ambient
//! space, and from covariant representations twisted by the block-scalar
//! unitary `Z`. Equivalences are always searched on the marked families
//! `ι_C(c_i) ι_D(d_j)`.

mod crossed;
mod functor;

use thiserror::Error;

use crate::abgroup::GroupError;
use crate::coact::CoactError;
use crate::heis::HeisError;
use crate::matspan::{IsoFailure, MatError};

pub use crossed::{
    build_via_covariant, build_via_heisenberg, equivalent, podles_span_check, CrossedProduct,
    CrossedReport, PodlesReport, Route, ZUnitary,
};
pub use functor::{
    associativity_check, functor_map, qgr_morphism_reparametrize, symmetry, FunctorMap,
    GradedMorphism, Reparametrized,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BoxError {
    #[error(transparent)]
    Mat(#[from] MatError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Coact(#[from] CoactError),
    #[error(transparent)]
    Heis(#[from] HeisError),
    #[error("pair is not χ-Heisenberg (residual {residual:.3e})")]
    NotHeisenberg { residual: f64 },
    #[error("groups of the algebras, bicharacter and pair do not match")]
    GroupMismatch,
    #[error("span of ι_C(C)·ι_D(D) is not closed under products (residual {residual:.3e})")]
    NotClosed { residual: f64 },
    #[error("{what} needs {needed} matrix entries, above the cap of {cap}")]
    TooLarge {
        what: &'static str,
        needed: usize,
        cap: usize,
    },
    #[error("operation needs a crossed product built from a Heisenberg pair")]
    WrongRoute,
    #[error("map is not equivariant (residual {residual:.3e})")]
    NotEquivariant { residual: f64 },
    #[error("map is not a *-homomorphism (residual {residual:.3e})")]
    NotMorphism { residual: f64 },
    #[error("induced map is not well defined: {0:?}")]
    WellDefinedness(IsoFailure),
}
