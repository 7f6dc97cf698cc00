//! Pedal and orthotomic curves.
//!
//! In the plane the pedal of `γ` with respect to `P` is `P + ((γ − P)·N)N` and the
//! orthotomic doubles the same offset, so `ort = F_P(ped)` with `F_P(x) = 2x − P`.
//! On the sphere the orthotomic is obtained from a given pedal by `Φ_P`. Spherical
//! pedals are taken as input; this module does not construct them.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dynamics::Pole;
use crate::geometry::{GeometryError, SpherePoint};
use crate::tol;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CurveError {
    #[error("normal at s = {s} has norm {norm}, not 1")]
    NormalNotUnit { s: f64, norm: f64 },
    #[error("non-finite value at s = {s}")]
    NonFinite { s: f64 },
    #[error("pedal sample {index} is orthogonal to P (P·ped = {dot:e})")]
    PedalDegenerate { index: usize, dot: f64 },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

pub type Result<T, E = CurveError> = std::result::Result<T, E>;

pub type Vec2 = [f64; 2];

fn dot(a: Vec2, b: Vec2) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

/// `F_P(x) = 2x − P`.
pub fn f_p(x: Vec2, p: Vec2) -> Vec2 {
    [2.0 * x[0] - p[0], 2.0 * x[1] - p[1]]
}

/// A point `γ(s)` of a plane curve together with its unit normal `N(s)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlaneCurveSample {
    s: f64,
    position: Vec2,
    normal: Vec2,
}

impl PlaneCurveSample {
    pub fn new(s: f64, position: Vec2, normal: Vec2) -> Result<Self> {
        if !(s.is_finite() && position.iter().chain(&normal).all(|c| c.is_finite())) {
            return Err(CurveError::NonFinite { s });
        }
        let norm = dot(normal, normal).sqrt();
        if (norm - 1.0).abs() > tol::FRESH {
            return Err(CurveError::NormalNotUnit { s, norm });
        }
        Ok(Self { s, position, normal })
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn position(&self) -> Vec2 {
        self.position
    }

    pub fn normal(&self) -> Vec2 {
        self.normal
    }

    /// `(γ − P)·N`.
    fn support(&self, p: Vec2) -> f64 {
        dot([self.position[0] - p[0], self.position[1] - p[1]], self.normal)
    }
}

fn offset(samples: &[PlaneCurveSample], p: Vec2, factor: f64) -> Vec<Vec2> {
    samples
        .iter()
        .map(|c| {
            let h = factor * c.support(p);
            [p[0] + h * c.normal[0], p[1] + h * c.normal[1]]
        })
        .collect()
}

/// `ped(s) = P + ((γ(s) − P)·N(s)) N(s)`.
pub fn plane_pedal(samples: &[PlaneCurveSample], p: Vec2) -> Vec<Vec2> {
    offset(samples, p, 1.0)
}

/// `ort(s) = P + 2((γ(s) − P)·N(s)) N(s)`.
pub fn plane_orthotomic(samples: &[PlaneCurveSample], p: Vec2) -> Vec<Vec2> {
    offset(samples, p, 2.0)
}

/// A sample `ped(s)` of a spherical pedal curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SphereCurveSample {
    pub s: f64,
    pub pedal: SpherePoint,
}

/// `ort(s) = Φ_P(ped(s))` for each sample.
///
/// A pedal point orthogonal to `P` (within the degeneracy threshold) cannot come
/// from a well-defined pedal curve and is rejected.
pub fn sphere_orthotomic_from_pedal(samples: &[SphereCurveSample], pole: &Pole) -> Result<Vec<SpherePoint>> {
    samples
        .iter()
        .enumerate()
        .map(|(index, sample)| {
            let x = sample.pedal.vector();
            x.check_same_len(pole.vector())?;
            let dot = x.dot(pole.vector());
            if dot.abs() <= tol::DEGENERACY {
                return Err(CurveError::PedalDegenerate { index, dot });
            }
            Ok(SpherePoint::new(pole.apply(x))?)
        })
        .collect()
}

/// `‖(ort + P)/2 − (P·ped) ped‖`, which vanishes for every orthotomic point.
pub fn midpoint_residual(pole: &Pole, pedal: &SpherePoint, orthotomic: &SpherePoint) -> f64 {
    let p = pole.vector();
    let x = pedal.vector();
    let midpoint = orthotomic.vector().add(p).scale(0.5);
    midpoint.distance(&x.scale(x.dot(p)))
}

/// Analytic test curves.
pub mod builtin {
    use std::f64::consts::TAU;

    use super::{PlaneCurveSample, Result, SphereCurveSample};
    use crate::geometry::{SliceFrame, SpherePoint};

    /// `n` samples of the unit circle `γ(s) = (cos s, sin s)`, `s ∈ [0, 2π)`, with the
    /// inward normal `−γ(s)`.
    pub fn unit_circle(n: usize) -> Vec<PlaneCurveSample> {
        (0..n)
            .map(|i| {
                let s = TAU * i as f64 / n as f64;
                let (sin, cos) = s.sin_cos();
                PlaneCurveSample { s, position: [cos, sin], normal: [-cos, -sin] }
            })
            .collect()
    }

    /// `n` samples of the line `γ(s) = (s, 1)`, `s ∈ [−1, 1]`, with normal `(0, 1)`.
    pub fn line(n: usize) -> Vec<PlaneCurveSample> {
        (0..n)
            .map(|i| {
                let s = if n > 1 { -1.0 + 2.0 * i as f64 / (n - 1) as f64 } else { 0.0 };
                PlaneCurveSample { s, position: [s, 1.0], normal: [0.0, 1.0] }
            })
            .collect()
    }

    /// `n` samples of the small circle at angle `beta` from `P`:
    /// `cos β·P + sin β·W(s)`, where `W(s) = cos s·W₁ + sin s·W₂` runs over a great circle
    /// of `P^⊥` spanned by the orthonormal `W₁`, `W₂`.
    pub fn small_circle(
        pole: &SpherePoint,
        w1: &SpherePoint,
        w2: &SpherePoint,
        beta: f64,
        n: usize,
    ) -> Result<Vec<SphereCurveSample>> {
        // Validates orthogonality of the three directions pairwise with P.
        SliceFrame::new(pole.clone(), w1.clone())?;
        SliceFrame::new(pole.clone(), w2.clone())?;
        SliceFrame::new(w1.clone(), w2.clone())?;
        (0..n)
            .map(|i| {
                let s = TAU * i as f64 / n as f64;
                let w = w1.vector().scale(s.cos()).add_scaled(s.sin(), w2.vector());
                let x = pole.vector().scale(beta.cos()).add_scaled(beta.sin(), &w);
                Ok(SphereCurveSample { s, pedal: SpherePoint::normalize(&x)? })
            })
            .collect()
    }
}
