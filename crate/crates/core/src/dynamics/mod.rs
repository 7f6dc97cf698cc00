//! The quadratic map `Φ_P(x) = 2(x·P)x − P` and its orbits.
//!
//! `Φ_P` maps the unit sphere into itself, the closed unit disk onto itself, and
//! every plane `span(P, x)` into itself. On the great circle of such a plane it acts
//! as the angle doubling `θ ↦ 2θ` (measured from `P`), which is the source of all
//! the chaotic behaviour studied in [`crate::chaos`].

mod angle;
mod conjugacy;
mod preimage;

pub use angle::{angle_orbit, angle_step, Angle};
pub use conjugacy::{
    chebyshev_projection, chebyshev_step, equatorial_projection, equivariance_conjugate, interval_conjugacy,
    lift_pole, lift_to_sphere,
};
pub use preimage::{preimage_disk, preimage_sphere};

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{orthonormal_complement, AmbientVector, GeometryError, SpherePoint};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DynamicsError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("pole lives in ℝ^{pole} but the point has {point} coordinates")]
    DimensionMismatch { pole: usize, point: usize },
    #[error("cannot mix exact and floating angles")]
    MixedRepresentation,
    #[error("invalid angle: {0}")]
    InvalidAngle(String),
    #[error("−P has no preimage on S⁰")]
    NoPreimage,
    #[error("‖y‖ = {norm} is not in the open disk (margin {margin:e})")]
    NotInterior { norm: f64, margin: f64 },
    #[error("{what} = {value} is outside {domain}")]
    Domain { what: &'static str, value: f64, domain: &'static str },
}

pub type Result<T, E = DynamicsError> = std::result::Result<T, E>;

/// The parameter `P ∈ S^n` of the map.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Pole(SpherePoint);

impl Pole {
    pub fn new(point: SpherePoint) -> Self {
        Self(point)
    }

    pub fn from_coords(coords: Vec<f64>) -> Result<Self> {
        Ok(Self(SpherePoint::from_coords(coords)?))
    }

    /// `P = (cos α, sin α)` on S¹.
    pub fn from_angle(alpha: f64) -> Self {
        let (s, c) = alpha.sin_cos();
        Self(SpherePoint::normalize(&AmbientVector::from_raw(vec![c, s])).expect("unit circle point"))
    }

    pub fn point(&self) -> &SpherePoint {
        &self.0
    }

    pub fn vector(&self) -> &AmbientVector {
        self.0.vector()
    }

    /// Ambient dimension n+1.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Sphere dimension n.
    pub fn sphere_dim(&self) -> usize {
        self.0.len() - 1
    }

    fn check(&self, x: &AmbientVector) -> Result<()> {
        if x.len() != self.len() {
            return Err(DynamicsError::DimensionMismatch { pole: self.len(), point: x.len() });
        }
        Ok(())
    }

    /// Unchecked evaluation, for hot loops over already validated inputs.
    pub(crate) fn apply(&self, x: &AmbientVector) -> AmbientVector {
        let p = self.vector();
        x.scale(2.0 * x.dot(p)).sub(p)
    }
}

/// `Φ_P(x) = 2(x·P)x − P`.
pub fn phi(pole: &Pole, x: &AmbientVector) -> Result<AmbientVector> {
    pole.check(x)?;
    Ok(pole.apply(x))
}

/// Whether iterates are radially projected back onto the sphere after each step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Renormalize {
    Off,
    /// Intended for sphere orbits; a disk orbit would be pushed onto the boundary.
    #[default]
    EveryStep,
}

/// A finite orbit `x₀, Φ(x₀), …, Φ^k(x₀)` with per-step diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Orbit {
    points: Vec<AmbientVector>,
    norm_drift: Vec<f64>,
    slice_residual: Vec<f64>,
}

impl Orbit {
    pub fn points(&self) -> &[AmbientVector] {
        &self.points
    }

    /// `|‖x_k‖ − 1|` per step.
    pub fn norm_drift(&self) -> &[f64] {
        &self.norm_drift
    }

    /// Distance of `x_k` from `span(P, x₀)` per step.
    pub fn slice_residual(&self) -> &[f64] {
        &self.slice_residual
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn last(&self) -> &AmbientVector {
        self.points.last().expect("orbits are non-empty")
    }

    pub fn max_norm_drift(&self) -> f64 {
        self.norm_drift.iter().copied().fold(0.0, f64::max)
    }

    pub fn max_slice_residual(&self) -> f64 {
        self.slice_residual.iter().copied().fold(0.0, f64::max)
    }
}

/// Orthonormal basis of `span(P, x₀)`: `P` plus the complement when `x₀ ∦ P`.
struct SlicePlane {
    pole: AmbientVector,
    complement: Option<AmbientVector>,
}

impl SlicePlane {
    fn new(pole: &Pole, x0: &AmbientVector) -> Self {
        let complement = x0
            .normalized()
            .ok()
            .and_then(|q| SpherePoint::new(q).ok())
            .and_then(|q| orthonormal_complement(pole.point(), &q).ok())
            .map(SpherePoint::into_vector);
        Self { pole: pole.vector().clone(), complement }
    }

    fn residual(&self, x: &AmbientVector) -> f64 {
        let mut r = x.add_scaled(-x.dot(&self.pole), &self.pole);
        if let Some(w) = &self.complement {
            r = r.add_scaled(-x.dot(w), w);
        }
        r.norm()
    }
}

/// Iterates `Φ_P` `steps` times from `x0`.
pub fn iterate(pole: &Pole, x0: &AmbientVector, steps: usize, renormalize: Renormalize) -> Result<Orbit> {
    pole.check(x0)?;
    let plane = SlicePlane::new(pole, x0);
    let mut points = Vec::with_capacity(steps + 1);
    let mut norm_drift = Vec::with_capacity(steps + 1);
    let mut slice_residual = Vec::with_capacity(steps + 1);
    let mut record = |x: AmbientVector| {
        norm_drift.push((x.norm() - 1.0).abs());
        slice_residual.push(plane.residual(&x));
        points.push(x);
    };
    record(x0.clone());
    let mut x = x0.clone();
    for _ in 0..steps {
        x = pole.apply(&x);
        if renormalize == Renormalize::EveryStep {
            let n = x.norm();
            if n > 0.0 {
                x = x.scale(1.0 / n);
            }
        }
        record(x.clone());
    }
    Ok(Orbit { points, norm_drift, slice_residual })
}

/// Angle of `P = (cos α, sin α)` on S¹, in `[0, 2π)`.
pub fn circle_angle(x: &AmbientVector) -> f64 {
    let c = x.coords();
    let theta = c[1].atan2(c[0]).rem_euclid(TAU);
    if theta >= TAU {
        0.0
    } else {
        theta
    }
}
