//! Kraus maps (CPTP channels) on finite-dimensional quantum systems.
//!
//! The crate builds, verifies and converts channel representations
//! ([`channel`]), synthesizes channels that carry one state to another
//! ([`synthesis`]), and searches compositions of a fixed control alphabet for
//! reachable states and channels ([`reach`]). Files use the JSON formats in
//! [`io`]; the `kraus` binary exposes all of it on the command line.

pub mod channel;
pub mod cli;
pub mod error;
pub mod io;
pub mod linalg;
pub mod reach;
pub mod state;
pub mod synthesis;
pub mod tolerance;

pub use channel::{
    apply, choi_distance, choi_to_kraus, compose, from_unitary, kraus_rank, kraus_to_choi, make_kraus, maps_equal,
    partial_trace, random_channel, stinespring_dilate, unitary_mix, ChoiMatrix, Dilation, KrausMap, Subsystem,
};
pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, ComplexVector};
pub use num_complex::Complex64;
pub use state::{
    kinematically_equivalent, random_density, spectral_decompose, state_metrics, thermal_state, trace_distance,
    validate_density, DensityMatrix, PureState, Spectrum, StateMetrics,
};
pub use tolerance::Tolerances;
