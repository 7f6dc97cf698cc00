use std::f64::consts::TAU;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{ChaosError, Domain, OpenBall, Result};
use crate::dynamics::{circle_angle, Angle};

/// An open arc of the circle with exact endpoints, measured in turns.
///
/// Arcs of length `≥ 1` are the full circle (or the circle minus a point, which
/// meets every open set all the same).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactArc {
    start: BigRational,
    length: BigRational,
}

fn reduce(r: BigRational) -> BigRational {
    let f = r.floor();
    r - f
}

impl ExactArc {
    pub fn new(start: BigRational, length: BigRational) -> Result<Self> {
        if !length.is_positive() {
            return Err(ChaosError::InvalidParameter("arc length must be positive".into()));
        }
        let length = if length >= BigRational::one() { BigRational::one() } else { length };
        Ok(Self { start: reduce(start), length })
    }

    /// The arc `(c − h, c + h)` around an exact center.
    pub fn centered(center: &Angle, half_width: BigRational) -> Result<Self> {
        let c = center
            .as_turns()
            .ok_or_else(|| ChaosError::InvalidParameter("arc center must be exact".into()))?;
        Self::new(c - &half_width, half_width * BigInt::from(2))
    }

    pub fn full() -> Self {
        Self { start: BigRational::zero(), length: BigRational::one() }
    }

    /// A dyadic arc inside a chord ball on S¹: center and half-width are the exact
    /// values of their f64 approximations, the half-width shrunk by `1e-12`.
    pub fn inside_ball(ball: &OpenBall) -> Result<Self> {
        if ball.domain() != Domain::Sphere || ball.len() != 2 {
            return Err(ChaosError::InvalidParameter("arcs live on S¹".into()));
        }
        let to_exact = |v: f64| {
            BigRational::from_float(v).ok_or_else(|| ChaosError::InvalidParameter(format!("{v} is not finite")))
        };
        let center = to_exact(circle_angle(ball.center()) / TAU)?;
        let half = 2.0 * (ball.radius().min(2.0) / 2.0).asin() / TAU * (1.0 - 1e-12);
        Self::new(center.clone() - to_exact(half)?, to_exact(2.0 * half)?)
    }

    pub fn start(&self) -> &BigRational {
        &self.start
    }

    pub fn length(&self) -> &BigRational {
        &self.length
    }

    pub fn is_full(&self) -> bool {
        self.length >= BigRational::one()
    }

    /// Image under `θ ↦ 2θ − α`: the start is mapped and the length doubles until
    /// the arc wraps the whole circle.
    pub fn image(&self, alpha: &BigRational) -> Self {
        if self.is_full() {
            return Self::full();
        }
        let two = BigRational::from_integer(BigInt::from(2));
        let length = &self.length * &two;
        let length = if length >= BigRational::one() { BigRational::one() } else { length };
        Self { start: reduce(&self.start * &two - alpha), length }
    }

    pub fn intersects(&self, other: &Self) -> bool {
        if self.is_full() || other.is_full() {
            return true;
        }
        // Rotate so that `self` starts at 0.
        let offset = reduce(&other.start - &self.start);
        offset < self.length || &offset + &other.length > BigRational::one()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MixingVerdict {
    /// Least `k ≥ 1` with `Φ^m(U) ∩ V ≠ ∅` for every `m ∈ [k, horizon]`.
    pub mixing_step: Option<usize>,
    /// First `m` at which `Φ^m(U)` is the whole circle.
    pub coverage_step: Option<usize>,
    pub horizon: usize,
}

/// Exact arc-image computation of the mixing time of `θ ↦ 2θ − α` for arcs `U`, `V`.
pub fn mixing_probe(alpha: &Angle, u: &ExactArc, v: &ExactArc, horizon: usize) -> Result<MixingVerdict> {
    let a = alpha.as_turns().ok_or_else(|| ChaosError::InvalidParameter("mixing needs an exact α".into()))?;
    if horizon == 0 {
        return Err(ChaosError::InvalidParameter("horizon must be positive".into()));
    }
    let mut image = u.clone();
    let mut coverage_step = None;
    let mut mixing_step = None;
    for m in 1..=horizon {
        image = image.image(a);
        if coverage_step.is_none() && image.is_full() {
            coverage_step = Some(m);
        }
        if image.intersects(v) {
            mixing_step.get_or_insert(m);
        } else {
            mixing_step = None;
        }
        // Full images stay full; the verdict cannot change any more.
        if image.is_full() {
            break;
        }
    }
    Ok(MixingVerdict { mixing_step, coverage_step, horizon })
}
