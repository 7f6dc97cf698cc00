//! The quadratic map `Φ_P(x) = 2(x·P)x − P` on the unit sphere S^n and the unit
//! disk D^{n+1}.
//!
//! * [`geometry`]: vectors, sphere and disk points, slice frames, rotations.
//! * [`dynamics`]: the map, its orbits, exact circle angles, preimages, conjugacies.
//! * [`chaos`]: constructive witnesses and probes for sensitivity, accessibility,
//!   transitivity, mixing, periodic density and Lyapunov exponents.
//! * [`curves`]: plane pedal/orthotomic curves and the spherical orthotomic.

pub mod chaos;
pub mod curves;
pub mod dynamics;
pub mod geometry;
pub mod sampling;
pub mod tol;

pub use dynamics::{iterate, phi, Angle, DynamicsError, Orbit, Pole, Renormalize};
pub use geometry::{AmbientVector, DiskPoint, GeometryError, Rotation, SliceFrame, SpherePoint};
