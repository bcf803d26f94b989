//! Numerical library for the singular oscillator `h₀ = −d²/dx² + x²/4 + b/x²`
//! and its first-order Darboux partner.
//!
//! The modules follow the physics from the bottom up: special functions,
//! the initial system and its coherent states, the Darboux layer, the
//! transformed coherent states and their measure, the holomorphic disk
//! representation, and the classical phase-space geometry. [`report`]
//! assembles every relation into a machine-checkable verification report,
//! [`emit`] tabulates datasets, and [`cli`] puts both on the command line.

pub mod cli;
pub mod darboux;
pub mod emit;
pub mod error;
pub mod geometry;
pub mod holomorphic;
pub mod numerics;
pub mod oscillator;
pub mod report;
pub mod specfun;
pub mod transformed_coherent;

pub use error::{Error, Result};

/// Which of the two systems an object belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum System {
    Initial,
    Transformed,
}

impl std::str::FromStr for System {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "initial" => Ok(Self::Initial),
            "transformed" => Ok(Self::Transformed),
            other => Err(Error::Usage(format!(
                "unknown system `{other}` (expected initial or transformed)"
            ))),
        }
    }
}
