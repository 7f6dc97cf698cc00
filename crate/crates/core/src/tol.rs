//! Numerical tolerances shared across the crate.

/// Accepted deviation of `‖x‖` from 1 when validating a sphere point.
pub const UNIT_NORM: f64 = 1e-9;

/// Accuracy expected of freshly computed unit vectors and algebraic identities.
pub const FRESH: f64 = 1e-12;

/// Below this, `‖Q − (P·Q)P‖` (or `|P·ped|`, or a Gram determinant) counts as degenerate.
pub const DEGENERACY: f64 = 1e-9;

/// Orthogonality defect accepted for slice frames and rotations.
pub const ORTHOGONALITY: f64 = 1e-9;

/// Round-trip accuracy for preimage constructions.
pub const ROUND_TRIP: f64 = 1e-10;
