//! Complex matrices, Hilbert–Schmidt spans, *-algebra closures and
//! isomorphism certification.

mod algebra;
mod iso;
pub mod legs;
pub(crate) mod linalg;
mod matrix;
mod subspace;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use algebra::{center, is_star_subalgebra, multiplicative_closure, AlgebraBasis};
pub use iso::{
    find_generator_isomorphism, find_generator_morphism, find_isomorphism_with_generators,
    IsoFailure, IsoSearch, LinearMap,
};
pub use matrix::{pauli, CMatrix, ONE, ZERO};
pub use subspace::{span_basis, subspace_equal, Subspace};

pub use num_complex::Complex64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MatError {
    #[error("matrix dimensions must be positive")]
    EmptyShape,
    #[error("expected {expected} entries, found {found}")]
    DataLength { expected: usize, found: usize },
    #[error("matrix entries must be finite")]
    NonFinite,
    #[error("rows have different lengths")]
    Ragged,
    #[error("shape mismatch: expected {expected:?}, found {found:?}")]
    ShapeMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("matrix must be square, found {0}x{1}")]
    NotSquare(usize, usize),
    #[error("span is not closed under products and adjoints (residual {residual:.3e})")]
    NotClosed { residual: f64 },
    #[error("tolerances must satisfy 0 < eps < 1e-3 (eps_rank = {eps_rank}, eps_eq = {eps_eq})")]
    InvalidTolerance { eps_rank: f64, eps_eq: f64 },
}

/// Thresholds for rank decisions and identity checks.
///
/// `eps_rank` is relative to the largest vector in a span computation;
/// `eps_eq` bounds Frobenius residuals of identities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub eps_rank: f64,
    pub eps_eq: f64,
}

impl Tolerance {
    pub fn new(eps_rank: f64, eps_eq: f64) -> Result<Self, MatError> {
        let ok = |e: f64| e > 0.0 && e < 1e-3;
        if ok(eps_rank) && ok(eps_eq) {
            Ok(Self { eps_rank, eps_eq })
        } else {
            Err(MatError::InvalidTolerance { eps_rank, eps_eq })
        }
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            eps_rank: 1e-9,
            eps_eq: 1e-8,
        }
    }
}

/// Complex number from polar angle `2π·num/den`, exact on quarter turns.
pub fn root_of_unity(num: i64, den: i64) -> Complex64 {
    assert!(den > 0, "denominator must be positive");
    let r = num.rem_euclid(den);
    if (4 * r) % den == 0 {
        return match 4 * r / den {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
    }
    Complex64::from_polar(1.0, std::f64::consts::TAU * r as f64 / den as f64)
}
