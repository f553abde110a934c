//! Coactions of `C*(G)` on finite-dimensional algebras, stored as
//! `G`-gradings, together with covariant representations, cocycles and
//! transport along group homomorphisms.

mod action;
mod coaction;
mod cocycle;
mod covariant;
mod graded;

use thiserror::Error;

use crate::abgroup::GroupError;
use crate::matspan::MatError;
use crate::qgroup::QgroupError;

pub use action::{action_from_bicharacter, character_map, ActionReport, BicharacterAction};
pub use coaction::{
    coaction_to_grading, grading_to_coaction, verify_coaction, verify_left_coaction, CoactionMap,
    CoactionReport,
};
pub use cocycle::{corepresentation_cocycle, twist_by_cocycle, Cocycle, CocycleReport};
pub use covariant::{canonical_covariant_rep, CovariantRep, CovariantReport, GradedHilbertSpace};
pub use graded::{transport_grading, GradedAlgebra};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CoactError {
    #[error(transparent)]
    Mat(#[from] MatError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Qgroup(#[from] QgroupError),
    #[error("degree index {0} is outside the group")]
    DegreeOutOfRange(usize),
    #[error("components are linearly dependent: they span {found} dimensions, not {expected}")]
    ComponentsDependent { expected: usize, found: usize },
    #[error("grading violated: {what} (residual {residual:.3e})")]
    GradingViolated { what: &'static str, residual: f64 },
    #[error("map is not a coaction: {what} (residual {residual:.3e})")]
    NotCoaction { what: &'static str, residual: f64 },
    #[error("Podleś density fails: span has dimension {found}, expected {expected}")]
    Density { expected: usize, found: usize },
    #[error("cocycle condition fails (residual {residual:.3e})")]
    NotCocycle { residual: f64 },
    #[error("operator is not unitary (residual {residual:.3e})")]
    NotUnitary { residual: f64 },
    #[error("representation is not faithful: rank {rank} < dim {dim}")]
    NotFaithful { rank: usize, dim: usize },
    #[error("groups or shapes do not match")]
    Mismatch,
}
