//! Eigenvalue branches of `L(·, η)` along `η ∈ [0, 1]`: velocities,
//! continuation, collisions, and the pairing of negative with positive
//! eigenvalues.

pub mod assignment;
pub mod derivative;
pub mod pairing;
pub mod track;

pub use derivative::{branch_derivative, lambda_derivative};
pub use pairing::{count_identity, pair_spectrum, CountIdentity, PairingReport, PAIR_SLACK};
pub use track::{
    classify_events, track, track_with, velocity_at, Branch, CollisionEvent, EventKind, TrackOptions, TrajectorySet,
};
