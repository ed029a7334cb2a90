//! Invariants, virial functionals with their derivative identities, and windowed norms.

pub mod functionals;
pub mod record;
pub mod schedule;
pub mod weights;
pub mod windows;

pub use functionals::{
    edge_mass_flag, hamiltonian, invariants, j_functional, j_rate, je_functional, je_rate, momentum_identity, v_functional, v_rate,
    weighted_moment, weighted_moment_rate, weighted_moment_seam, Invariants, MomentumIdentity,
};
pub use record::{DiagnosticRecord, CSV_COLUMNS};
pub use schedule::WeightSchedule;
pub use weights::{Weight, WeightKind};
pub use windows::{corollary_integrand, far_field_l2, local_sobolev, smoothing_halfnorm, window_mass, Window};
