use super::{ChaosError, Result};
use crate::dynamics::{angle_step, Angle, Pole};
use crate::geometry::{SliceFrame, SpherePoint};

/// Shortest orbit accepted by [`lyapunov_estimate`].
pub const MIN_LYAPUNOV_STEPS: usize = 1000;

/// One-dimensional systems whose Lyapunov exponent can be estimated.
#[derive(Debug, Clone, PartialEq)]
pub enum LyapunovSystem {
    /// `θ ↦ 2θ − α` from `theta0`.
    Circle { alpha: Angle, theta0: Angle },
    /// `Φ_P` on `[−1, 1]` for `P = ±1`, started from the logistic coordinate
    /// `x0 ∈ [0, 1]` (`u0 = h_P(x0)`).
    Logistic { pole: Pole, x0: f64 },
    /// `Φ_P` restricted to the great circle through `P` and `x0`.
    SphereSlice { pole: Pole, x0: SpherePoint },
}

/// Neumaier-compensated running sum.
#[derive(Default)]
struct Sum {
    total: f64,
    compensation: f64,
}

impl Sum {
    fn add(&mut self, v: f64) {
        let t = self.total + v;
        if self.total.abs() >= v.abs() {
            self.compensation += (self.total - t) + v;
        } else {
            self.compensation += (v - t) + self.total;
        }
        self.total = t;
    }

    fn value(&self) -> f64 {
        self.total + self.compensation
    }
}

/// Birkhoff average of `ln |f'(x_i)|` over the first `steps` points of the orbit.
pub fn lyapunov_estimate(system: &LyapunovSystem, steps: usize) -> Result<f64> {
    if steps < MIN_LYAPUNOV_STEPS {
        return Err(ChaosError::InvalidParameter(format!(
            "need at least {MIN_LYAPUNOV_STEPS} steps, got {steps}"
        )));
    }
    let mut sum = Sum::default();
    match system {
        LyapunovSystem::Circle { alpha, theta0 } => {
            let mut theta = theta0.clone();
            for _ in 0..steps {
                // d(2θ − α)/dθ
                sum.add(2f64.ln());
                theta = angle_step(alpha, &theta)?;
            }
        }
        LyapunovSystem::Logistic { pole, x0 } => {
            if pole.len() != 1 {
                return Err(ChaosError::InvalidParameter("the logistic factor needs P ∈ S⁰".into()));
            }
            if !(0.0..=1.0).contains(x0) {
                return Err(ChaosError::InvalidParameter(format!("x0 = {x0} is outside [0, 1]")));
            }
            let p = pole.vector().coords()[0];
            let mut u = -p * (2.0 * x0 - 1.0);
            for step in 0..steps {
                // Φ_P'(u) = 4Pu
                let derivative = 4.0 * p * u;
                if derivative == 0.0 {
                    return Err(ChaosError::DerivativeSingular { step });
                }
                sum.add(derivative.abs().ln());
                u = 2.0 * (u * p) * u - p;
            }
        }
        LyapunovSystem::SphereSlice { pole, x0 } => {
            super::check_len(pole, x0.vector())?;
            let frame = SliceFrame::through(pole.point(), x0.vector())?;
            let (p, w) = (frame.pole().vector(), frame.complement().vector());
            let mut x = x0.vector().clone();
            for _ in 0..steps {
                // unit tangent to the slice circle at x, pushed forward by
                // DΦ_x(v) = 2(v·P)x + 2(x·P)v
                let (a, b) = frame.coordinates(&x);
                let r = a.hypot(b);
                let tangent = p.scale(-b / r).add_scaled(a / r, w);
                let image = x.scale(2.0 * tangent.dot(p)).add_scaled(2.0 * x.dot(p), &tangent);
                sum.add(image.norm().ln());
                x = super::Domain::Sphere.advance(pole, &x);
            }
        }
    }
    Ok(sum.value() / steps as f64)
}

#[cfg(test)]
mod tests {
    use std::f64::consts::LN_2;

    use super::*;

    #[test]
    fn circle_is_exactly_ln2() {
        let system = LyapunovSystem::Circle { alpha: Angle::radians(0.4).unwrap(), theta0: Angle::radians(1.3).unwrap() };
        assert!((lyapunov_estimate(&system, 10_000).unwrap() - LN_2).abs() < 1e-15);
    }

    #[test]
    fn fixed_point_still_expands() {
        let alpha = Angle::turns(1, 5).unwrap();
        let system = LyapunovSystem::Circle { alpha: alpha.clone(), theta0: alpha };
        assert!((lyapunov_estimate(&system, 1000).unwrap() - LN_2).abs() < 1e-15);
        let pole = Pole::from_coords(vec![0.0, 1.0, 0.0]).unwrap();
        let system = LyapunovSystem::SphereSlice { x0: pole.point().clone(), pole };
        assert!((lyapunov_estimate(&system, 1000).unwrap() - LN_2).abs() < 1e-14);
    }

    #[test]
    fn sphere_slice_is_ln2() {
        let pole = Pole::from_coords(vec![0.6, 0.0, 0.8]).unwrap();
        let x0 = SpherePoint::from_coords(vec![0.0, 1.0, 0.0]).unwrap();
        let v = lyapunov_estimate(&LyapunovSystem::SphereSlice { pole, x0 }, 5000).unwrap();
        assert!((v - LN_2).abs() < 1e-13);
    }

    #[test]
    fn logistic_approaches_ln2() {
        let pole = Pole::from_coords(vec![1.0]).unwrap();
        let v = lyapunov_estimate(&LyapunovSystem::Logistic { pole, x0: 0.123 }, 200_000).unwrap();
        assert!((v - LN_2).abs() < 5e-3, "{v}");
    }

    #[test]
    fn critical_point_is_singular() {
        let pole = Pole::from_coords(vec![-1.0]).unwrap();
        let err = lyapunov_estimate(&LyapunovSystem::Logistic { pole, x0: 0.5 }, 1000);
        assert_eq!(err, Err(ChaosError::DerivativeSingular { step: 0 }));
    }

    #[test]
    fn short_orbits_are_rejected() {
        let system = LyapunovSystem::Circle { alpha: Angle::zero_turns(), theta0: Angle::zero_turns() };
        assert!(matches!(lyapunov_estimate(&system, 999), Err(ChaosError::InvalidParameter(_))));
    }
}
