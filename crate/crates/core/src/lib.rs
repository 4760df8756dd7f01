//! A value-oracle laboratory for minimizing and maximizing ratios of
//! monotone supermodular set functions.
//!
//! * [`setcore`]: ground sets, subsets, enumeration, seeded sampling.
//! * [`oracle`]: the two adversarial function families, query-counting
//!   oracles, instance descriptors.
//! * [`verify`]: exhaustive supermodularity/monotonicity/non-negativity checks.
//! * [`optimize`]: exact and heuristic ratio optimization, min/max duality.
//! * [`game`]: the planted-instance query game, exact distinguishing
//!   probabilities, lazy plant construction.
//! * [`report`]: CSV/JSON output.

pub mod cli;
pub mod error;
pub mod game;
pub mod optimize;
pub mod oracle;
pub mod report;
pub mod setcore;
pub mod value;
pub mod verify;

pub use error::{Error, Result};
pub use setcore::{GroundSize, Subset};
pub use value::ExactValue;
