//! Independent checks of the closed-form machinery: brute-force lattice
//! oracles, exhaustive stabilizer enumeration, and a Monte-Carlo estimate
//! of both sides of the L² inequality over `F_ε`.
//!
//! The oracles deliberately avoid the enumeration and cone code in
//! [`crate::lattice`] and the interval code in [`crate::domains`].

mod montecarlo;
mod oracle;
mod random;
mod stabilizer;
pub mod suites;

pub use montecarlo::{mc_l2_inequality, McReport, TestFunction, MIN_MC_SAMPLES};
pub use oracle::{oracle_admissible_t, oracle_min_in_cone, OracleConfig};
pub use random::{
    random_group_element, random_kan, random_lattice, stream_rng, STREAM_GROUP, STREAM_LATTICE, STREAM_LHS, STREAM_RHS,
};
pub use stabilizer::{pairs_up_to_sign, stabilizer_enumeration, stabilizer_enumeration_with, FundamentalSet};
