//! Set-function families and the query-counting value oracle.
//!
//! Two adversarial families live here. The *decreasing* family pairs
//! `f(S) = α + ε − min{α, |S|}` with a planted
//! `g_R(S) = α + ε − min{β + |S ∩ R̄|, α, |S|}`; the two agree except on sets
//! that contain most of `R`. The *increasing* family pairs a steep
//! `f` with a `g` that is linear below `⌊n/2⌋` and jumps above it; the planted
//! `g_R` differs from `g` only at `S = R`, where it is `1`.
//!
//! Algorithms only ever see [`CountingOracle`] / [`RatioOracle`] handles;
//! instance parameters and plants stay on the harness side.

mod counting;
mod descriptor;
mod families;

pub use counting::{ratio, CountingOracle, RatioOracle, TranscriptEntry};
pub use descriptor::{Family, DEFAULT_M, InstanceDescriptor, PlantSpec, ResolvedInstance};
pub use families::{
    derive_decreasing_params, eval_f_dec, eval_f_inc, eval_g_dec, eval_g_inc, eval_g_inc_planted,
    Bundled, DecreasingInstance, FnSetFunction, FunctionTable, IncreasingInstance, SetFunction,
};
