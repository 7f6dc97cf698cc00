//! Conjugacies and factor maps of `Φ_P`.
//!
//! * On S⁰ (`P = ±1`) the affine change of variable `h_P` conjugates `Φ_P|[-1,1]`
//!   to the logistic map `4x(1−x)`.
//! * `t = x·P` intertwines `Φ_P` with the Chebyshev map `t ↦ 2t² − 1` in every
//!   dimension.
//! * Rotations intertwine the maps of different poles: `Φ_{RP}(Rx) = RΦ_P(x)`.
//! * Dropping the last coordinate intertwines `Φ_{(P,0)}` on S^{n+1} with `Φ_P` on
//!   D^{n+1}, making the disk dynamics a factor of a sphere dynamics.

use super::{DynamicsError, Pole, Result};
use crate::geometry::{AmbientVector, Rotation, SpherePoint};

/// `h_P⁻¹(Φ_P(h_P(x)))` on `[0, 1]`, where `h_P(x) = −2x+1` for `P = 1` and
/// `2x−1` for `P = −1`.
pub fn interval_conjugacy(pole: &Pole, x: f64) -> Result<f64> {
    if pole.len() != 1 {
        return Err(DynamicsError::DimensionMismatch { pole: pole.len(), point: 1 });
    }
    if !(0.0..=1.0).contains(&x) {
        return Err(DynamicsError::Domain { what: "x", value: x, domain: "[0, 1]" });
    }
    let sign = pole.vector().coords()[0].signum();
    let h = |x: f64| -sign * (2.0 * x - 1.0);
    let h_inv = |y: f64| (1.0 - sign * y) / 2.0;
    let image = pole.apply(&AmbientVector::from_raw(vec![h(x)]));
    Ok(h_inv(image.coords()[0]))
}

/// The Chebyshev coordinate `t = x·P`.
pub fn chebyshev_projection(pole: &Pole, x: &AmbientVector) -> Result<f64> {
    pole.check(x)?;
    Ok(x.dot(pole.vector()))
}

/// `t ↦ 2t² − 1`, the factor of `Φ_P` seen through [`chebyshev_projection`].
pub fn chebyshev_step(t: f64) -> f64 {
    2.0 * t * t - 1.0
}

/// Both sides of `Φ_{RP}(Rx) = RΦ_P(x)`.
pub fn equivariance_conjugate(
    rotation: &Rotation,
    pole: &Pole,
    x: &AmbientVector,
) -> Result<(AmbientVector, AmbientVector)> {
    pole.check(x)?;
    if rotation.dim() != pole.len() {
        return Err(DynamicsError::DimensionMismatch { pole: pole.len(), point: rotation.dim() });
    }
    let rotated_pole = Pole::new(SpherePoint::normalize(&rotation.apply(pole.vector()))?);
    let left = rotated_pole.apply(&rotation.apply(x));
    let right = rotation.apply(&pole.apply(x));
    Ok((left, right))
}

/// Drops the last coordinate: ℝ^{n+2} → ℝ^{n+1}.
pub fn equatorial_projection(x: &AmbientVector) -> Result<AmbientVector> {
    let c = x.coords();
    if c.len() < 2 {
        return Err(DynamicsError::DimensionMismatch { pole: 2, point: c.len() });
    }
    Ok(AmbientVector::new(c[..c.len() - 1].to_vec())?)
}

/// `(y, √(1 − ‖y‖²))`, a point of S^{n+1} over `y ∈ D^{n+1}`.
pub fn lift_to_sphere(y: &AmbientVector) -> Result<SpherePoint> {
    let n2 = y.dot(y);
    if n2 > 1.0 + 2.0 * crate::tol::UNIT_NORM {
        return Err(DynamicsError::Domain { what: "‖y‖²", value: n2, domain: "the unit disk" });
    }
    let mut c = y.coords().to_vec();
    c.push((1.0 - n2).max(0.0).sqrt());
    Ok(SpherePoint::normalize(&AmbientVector::new(c)?)?)
}

/// `(P, 0)` on the equator of S^{n+1}.
pub fn lift_pole(pole: &Pole) -> Pole {
    let mut c = pole.vector().coords().to_vec();
    c.push(0.0);
    Pole::from_coords(c).expect("unit vector with an extra zero")
}
