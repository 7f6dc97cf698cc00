//! Executable versions of sensitivity, accessibility, transitivity and mixing for
//! `Φ_P` on spheres and disks, with constructive witnesses where the slice-circle
//! structure allows them and seeded bounded-horizon probes elsewhere.
//!
//! Open sets are realized as chord-metric balls. Every witness can be replayed
//! from its stored points, so a report is checkable without trusting the code that
//! built it.

mod accessibility;
mod lyapunov;
mod mixing;
mod periodic;
mod report;
mod sensitivity;
mod transitivity;

pub use accessibility::accessibility_witness;
pub use lyapunov::{lyapunov_estimate, LyapunovSystem, MIN_LYAPUNOV_STEPS};
pub use mixing::{mixing_probe, ExactArc, MixingVerdict};
pub use periodic::{circular_max_gap, has_period, interval_periodic_points, periodic_points_circle};
pub use report::{analyze, AnalysisConfig, Basis, ChaosReport, Classification, PeriodicDensity, System, Verdict};
pub use sensitivity::{disk_sensitivity_witness, sensitivity_witness};
pub use transitivity::{
    disk_slice_confinement_certificate, slice_confinement_certificate, transitivity_probe, ProbeSummary,
    SliceCertificate,
};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dynamics::{DynamicsError, Pole};
use crate::geometry::{AmbientVector, DiskPoint, GeometryError, SpherePoint};
use crate::tol;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ChaosError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("no witness within {max_k} steps (best separation {best})")]
    BudgetExceeded { max_k: usize, best: f64 },
    #[error("configuration is degenerate (Gram determinant {gram:e})")]
    DegenerateConfiguration { gram: f64 },
    #[error("orbit hit a critical point at step {step}")]
    DerivativeSingular { step: usize },
    #[error("balls live in different state spaces")]
    DomainMismatch,
}

pub type Result<T, E = ChaosError> = std::result::Result<T, E>;

/// The state space: the sphere S^n or the closed disk D^{n+1}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Domain {
    Sphere,
    Disk,
}

impl Domain {
    pub fn contains(self, x: &AmbientVector) -> bool {
        let n = x.norm();
        match self {
            Domain::Sphere => (n - 1.0).abs() <= tol::UNIT_NORM,
            Domain::Disk => n <= 1.0 + tol::UNIT_NORM,
        }
    }

    /// One step of `Φ_P`, projected back onto the sphere for sphere orbits.
    pub(crate) fn advance(self, pole: &Pole, x: &AmbientVector) -> AmbientVector {
        let y = pole.apply(x);
        match self {
            Domain::Sphere => {
                let n = y.norm();
                if n > 0.0 {
                    y.scale(1.0 / n)
                } else {
                    y
                }
            }
            Domain::Disk => y,
        }
    }

    pub(crate) fn advance_by(self, pole: &Pole, x: &AmbientVector, steps: usize) -> AmbientVector {
        (0..steps).fold(x.clone(), |x, _| self.advance(pole, &x))
    }
}

/// Open chord-metric ball `{x ∈ domain : ‖x − center‖ < radius}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OpenBall {
    center: AmbientVector,
    radius: f64,
    domain: Domain,
}

impl OpenBall {
    pub fn on_sphere(center: SpherePoint, radius: f64) -> Result<Self> {
        Self::checked(center.into_vector(), radius, Domain::Sphere)
    }

    pub fn in_disk(center: DiskPoint, radius: f64) -> Result<Self> {
        Self::checked(center.into_vector(), radius, Domain::Disk)
    }

    pub fn new(center: AmbientVector, radius: f64, domain: Domain) -> Result<Self> {
        match domain {
            Domain::Sphere => Self::on_sphere(SpherePoint::new(center)?, radius),
            Domain::Disk => Self::in_disk(DiskPoint::new(center)?, radius),
        }
    }

    fn checked(center: AmbientVector, radius: f64, domain: Domain) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(ChaosError::InvalidParameter(format!("ball radius must be positive, got {radius}")));
        }
        Ok(Self { center, radius, domain })
    }

    pub fn center(&self) -> &AmbientVector {
        &self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn len(&self) -> usize {
        self.center.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, x: &AmbientVector) -> bool {
        x.len() == self.center.len() && x.distance(&self.center) < self.radius && self.domain.contains(x)
    }
}

/// What a witness claims.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Claim {
    /// `d(x, y) ≤ delta` and `d(Φ^k x, Φ^k y) > lambda`.
    Sensitive { delta: f64, lambda: f64 },
    /// `u ∈ U`, `v ∈ V`, `k > 0` and `d(Φ^k u, Φ^k v) ≤ lambda`.
    Accessible { u_ball: OpenBall, v_ball: OpenBall, lambda: f64 },
}

/// A pair of points, a step count and the separation achieved after that many steps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub pole: Pole,
    pub domain: Domain,
    pub points: [AmbientVector; 2],
    pub step: usize,
    pub separation: f64,
    pub claim: Claim,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ReplayError {
    #[error("witness point {index} is not in the state space")]
    OutsideDomain { index: usize },
    #[error("dimension mismatch")]
    DimensionMismatch,
    #[error("start points are {distance} apart, more than δ = {delta}")]
    TooFarApart { distance: f64, delta: f64 },
    #[error("separation {separation} after {step} steps does not exceed λ = {lambda}")]
    NotSeparated { step: usize, separation: f64, lambda: f64 },
    #[error("point {index} is not in its ball")]
    OutsideBall { index: usize },
    #[error("accessibility needs a positive step")]
    ZeroStep,
    #[error("separation {separation} after {step} steps exceeds λ = {lambda}")]
    NotClose { step: usize, separation: f64, lambda: f64 },
}

impl Witness {
    /// Re-simulates the witness and checks its claim. Returns the replayed separation.
    pub fn replay(&self) -> std::result::Result<f64, ReplayError> {
        let [x, y] = &self.points;
        if x.len() != self.pole.len() || y.len() != self.pole.len() {
            return Err(ReplayError::DimensionMismatch);
        }
        for (index, p) in self.points.iter().enumerate() {
            if !self.domain.contains(p) {
                return Err(ReplayError::OutsideDomain { index });
            }
        }
        let separation = pair_separation(&self.pole, self.domain, x, y, self.step);
        match &self.claim {
            Claim::Sensitive { delta, lambda } => {
                let distance = x.distance(y);
                if distance > *delta {
                    return Err(ReplayError::TooFarApart { distance, delta: *delta });
                }
                if separation.is_nan() || separation <= *lambda {
                    return Err(ReplayError::NotSeparated { step: self.step, separation, lambda: *lambda });
                }
            }
            Claim::Accessible { u_ball, v_ball, lambda } => {
                if u_ball.len() != x.len() || v_ball.len() != y.len() {
                    return Err(ReplayError::DimensionMismatch);
                }
                if !u_ball.contains(x) {
                    return Err(ReplayError::OutsideBall { index: 0 });
                }
                if !v_ball.contains(y) {
                    return Err(ReplayError::OutsideBall { index: 1 });
                }
                if self.step == 0 {
                    return Err(ReplayError::ZeroStep);
                }
                if separation > *lambda {
                    return Err(ReplayError::NotClose { step: self.step, separation, lambda: *lambda });
                }
            }
        }
        Ok(separation)
    }
}

/// `d(Φ^k x, Φ^k y)` using the domain's stepping rule.
pub(crate) fn pair_separation(pole: &Pole, domain: Domain, x: &AmbientVector, y: &AmbientVector, k: usize) -> f64 {
    domain.advance_by(pole, x, k).distance(&domain.advance_by(pole, y, k))
}

fn check_len(pole: &Pole, x: &AmbientVector) -> Result<()> {
    if pole.len() != x.len() {
        return Err(DynamicsError::DimensionMismatch { pole: pole.len(), point: x.len() }.into());
    }
    Ok(())
}
