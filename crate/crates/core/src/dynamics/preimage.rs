use super::{DynamicsError, Pole, Result};
use crate::geometry::{default_orthogonal, AmbientVector, GeometryError, SpherePoint};
use crate::tol;

/// A point `x ∈ S^n` with `Φ_P(x) = y`.
///
/// For `y ≠ −P` this is the normalized midpoint `(y+P)/‖y+P‖`. For `y = −P` every
/// `x ⊥ P` works and the deterministic choice of [`default_orthogonal`] is returned;
/// on S⁰ there is no such point.
pub fn preimage_sphere(pole: &Pole, y: &SpherePoint) -> Result<SpherePoint> {
    pole.check(y.vector())?;
    let sum = y.vector().add(pole.vector());
    if sum.norm() < tol::DEGENERACY {
        return default_orthogonal(pole.point()).map_err(|e| match e {
            GeometryError::NoOrthogonalDirection => DynamicsError::NoPreimage,
            other => other.into(),
        });
    }
    let midpoint = sum.scale(0.5);
    Ok(SpherePoint::normalize(&midpoint)?)
}

/// A point `x` of the open disk with `Φ_P(x) = y`, for `‖y‖ < 1`.
///
/// With `s = y + P` this is `x = s / √(2 s·P)`. The textbook form
/// `a·s/‖s‖` with `a² = (1 + ‖y‖² + 2y·P) / (2y·P + 2)` cancels badly near `−P`;
/// its numerator is just `‖s‖²` and its denominator `2 s·P`. Targets within
/// `1e-9` of the boundary are rejected because `s·P` can vanish there.
pub fn preimage_disk(pole: &Pole, y: &AmbientVector) -> Result<AmbientVector> {
    pole.check(y)?;
    let norm = y.norm();
    if 1.0 - norm < tol::DEGENERACY {
        return Err(DynamicsError::NotInterior { norm, margin: tol::DEGENERACY });
    }
    let sum = y.add(pole.vector());
    Ok(sum.scale(1.0 / (2.0 * sum.dot(pole.vector())).sqrt()))
}
