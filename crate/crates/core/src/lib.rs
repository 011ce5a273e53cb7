//! Fermionic communication channels between an inertial observer and a
//! uniformly accelerated one, beyond the single-mode approximation.
//!
//! Channel states are built in Alice's and Bob's inertial frame, Bob's mode
//! is replaced by its Unruh modes, and one Rindler wedge is traced out
//! before computing mutual information, conditional entropy and the
//! strong-additivity functional.

pub mod eigen;
pub mod error;
pub mod fock;
pub mod info;
pub mod oracle;
pub mod output;
pub mod sweep;
pub mod unruh;
pub mod verify;

pub use error::{Error, Result};
pub use fock::{DensityMatrix, Isometry, StateVector, SubsystemLabel, SubsystemLayout};
pub use info::{AdditivityForm, BipartiteSplit, TripartiteSplit};
pub use sweep::{figure_preset, run_sweep, Figure, Measure, SweepRecord, SweepSpec};
pub use unruh::{AccelerationParams, ChannelSpec, Family, Region};
