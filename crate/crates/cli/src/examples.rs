//! Presets for `qtwist example`.

use clap::Subcommand;
use qtwist_core::abgroup::Bicharacter;
use qtwist_core::abgroup::FinAbGroup;
use qtwist_core::apps::{finite_torus, rieffel_twist_compare, AppsError};
use qtwist_core::coact::GradedAlgebra;
use qtwist_core::matspan::Tolerance;
use qtwist_core::report::Report;
use qtwist_core::suite;

#[derive(Subcommand, Debug, Clone, PartialEq)]
pub enum Preset {
    /// Graded M₂ generators and the Clifford presentation.
    Skew,
    /// C*(Z/N) ⊠ C*(Z/N) with χ(a,b) = exp(2πi·k·ab/N).
    Torus {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        k: usize,
    },
    /// Reduced crossed products, dual coactions and the embedding theorem.
    Crossed,
    /// The cocycle twist of C*(Z/N) ⊗ C*(Z/N) against the span construction.
    Rieffel {
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        k: usize,
    },
    /// Inner coactions and K(C²) ⊠ K(C²).
    Inner,
    /// Graded Hilbert modules and the composition isomorphism.
    Modules,
}

pub fn run(preset: &Preset, tol: Tolerance) -> Result<Vec<Report>, AppsError> {
    Ok(match *preset {
        Preset::Skew => suite::skew_scenarios(tol),
        Preset::Torus { n, k } => vec![finite_torus(n, k, tol)?.report(tol)],
        Preset::Crossed => suite::crossed_scenarios(tol),
        Preset::Rieffel { n, k } => {
            if n < 2 || k >= n {
                return Err(AppsError::Parameter(format!(
                    "need N ≥ 2 and 0 ≤ k < N, got N={n}, k={k}"
                )));
            }
            let c = GradedAlgebra::group_algebra(&FinAbGroup::cyclic(n), tol)?;
            let chi = Bicharacter::cyclic(n, k);
            let cmp = rieffel_twist_compare(&c, &c, &chi, tol)?;
            let ins = serde_json::json!({ "C": format!("C*(Z/{n})"), "D": format!("C*(Z/{n})"), "chi": [[k]] });
            vec![cmp.report(ins, tol)]
        }
        Preset::Inner => suite::cocycle_scenarios(tol),
        Preset::Modules => suite::module_scenarios(tol),
    })
}
