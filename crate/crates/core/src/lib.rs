//! Simulation and pulse design for STIRAP-controlled single-photon emission
//! and absorption by a four-level atom in free space.
//!
//! Units: ħ = 1 throughout. Rates (Γ, Ω, Δ) and times may be given in any
//! consistent unit; the reference configuration works in units of 1/Γ.

pub mod dynamics;
pub mod envelope;
pub mod error;
pub mod grid;
pub mod interp;
pub mod ode;
pub mod params;
pub mod protocol;
pub mod pulse;
pub mod state;

pub use dynamics::{DriveTerm, Trajectory};
pub use envelope::PhotonEnvelope;
pub use error::{Error, Result};
pub use grid::TimeGrid;
pub use interp::Interpolate;
pub use params::PhysicalParams;
pub use protocol::{ChannelModel, QubitState, TransferOutcome};
pub use pulse::{AdiabaticityReport, InversionOptions, PulseSchedule};
pub use state::AtomState;
