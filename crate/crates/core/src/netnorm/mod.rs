//! Averaging function, net norms N_{p,q}, weighted ℓ^p norms with their
//! duality extremizer, and discrete Lorentz norms.

mod averaging;
mod heuristic;
mod net;
mod norms;

pub use averaging::{
    averaging, averaging_table, monotonicity_counters, AveragingTable, Engine, LevelValue,
};
pub use net::CoefficientNet;
pub use norms::{
    duality_extremizer, duality_pairing, duality_quotient, ellp_duality_gap, ellp_norm,
    lorentz_discrete_norm, net_norm, norm_from_table, rearrangement, DualityGap, NetNorm, NormParams,
};
