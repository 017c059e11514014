//! Library side of the `hopfkit` command-line tool: config parsing, the
//! analysis report, trajectory and sweep output, and the reproduction suite
//! run by `hopfkit verify`.
//!
//! Exit codes:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success |
//! | 1 | `verify`: at least one criterion failed |
//! | 2 | invalid config, arguments or unreadable/unwritable file |
//! | 3 | no interior equilibrium |
//! | 4 | no Hopf point, or the normal form is degenerate there |
//! | 5 | integrator divergence |

pub mod analyze;
pub mod config;
pub mod output;
pub mod simulate;
pub mod sweep;
pub mod verify;

use hopfkit_core::Error;
use thiserror::Error as ThisError;

pub use config::RunConfig;

#[derive(Debug, ThisError)]
pub enum CliError {
    #[error("invalid config: {0}")]
    Config(String),

    #[error("cannot write {path}: {source}")]
    Write { path: String, source: std::io::Error },

    #[error(transparent)]
    Analysis(#[from] Error),

    #[error("{failed} of {total} acceptance criteria failed")]
    VerifyFailed { failed: usize, total: usize },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Config(_) | Self::Write { .. } => 2,
            Self::VerifyFailed { .. } => 1,
            Self::Analysis(e) => match e {
                Error::InvalidParams(_) | Error::InvalidKernel(_) | Error::InvalidSimConfig(_) => 2,
                Error::NoInteriorEquilibrium => 3,
                Error::NoHopfPoint(_)
                | Error::DegenerateCrossing(_)
                | Error::BranchInconsistency { .. }
                | Error::Transversality(_)
                | Error::DegenerateNormalization(_)
                | Error::Resonance(_)
                | Error::DivergentPairing(_)
                | Error::KernelPole { .. } => 4,
                Error::Divergence { .. } => 5,
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_code_table() {
        assert_eq!(CliError::Config(String::new()).exit_code(), 2);
        assert_eq!(CliError::VerifyFailed { failed: 1, total: 11 }.exit_code(), 1);
        assert_eq!(CliError::from(Error::NoInteriorEquilibrium).exit_code(), 3);
        assert_eq!(CliError::from(Error::NoHopfPoint(String::new())).exit_code(), 4);
        assert_eq!(CliError::from(Error::Resonance(1e13)).exit_code(), 4);
        assert_eq!(CliError::from(Error::Divergence { t_last_valid: 1.0 }).exit_code(), 5);
        assert_eq!(CliError::from(Error::InvalidSimConfig(String::new())).exit_code(), 2);
    }
}
