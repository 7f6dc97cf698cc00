use std::f64::consts::{PI, TAU};

use super::{check_len, pair_separation, ChaosError, Claim, Domain, OpenBall, Result, Witness};
use crate::dynamics::Pole;
use crate::geometry::{AmbientVector, SliceFrame};

// Dyadic levels beyond this are below f64 angle resolution.
const MAX_LEVEL: u32 = 50;
const SHRINK: f64 = 1.0 - 1e-8;

/// Points `u ∈ U`, `v ∈ V` and a step `k > 0` with `Φ^k u` and `Φ^k v` within `λ`.
///
/// If one ball contains the other's center, that center serves as both points with
/// `k = 1`. Otherwise each ball is handled on its own slice:
///
/// * on the sphere, the great-circle arc through the center of the ball is doubled
///   by each step, so after `i` steps it covers a dyadic angle `2πj/2^i` whose
///   orbit lands on `P`;
/// * in the disk, the Chebyshev coordinate `t = x·P` evolves by `t ↦ 2t² − 1`, and
///   any `t = cos(2πj/2^i)` reaches `1`, which inside the disk forces `x = P`.
///
/// Both iterates then sit at `P` from step `k = max(i_U, i_V)` on.
pub fn accessibility_witness(pole: &Pole, u_ball: &OpenBall, v_ball: &OpenBall, lambda: f64) -> Result<Witness> {
    check_len(pole, u_ball.center())?;
    check_len(pole, v_ball.center())?;
    if u_ball.domain() != v_ball.domain() {
        return Err(ChaosError::DomainMismatch);
    }
    if lambda.is_nan() || lambda <= 0.0 {
        return Err(ChaosError::InvalidParameter(format!("λ must be positive, got {lambda}")));
    }
    let domain = u_ball.domain();
    let shared = if v_ball.contains(u_ball.center()) {
        Some(u_ball.center().clone())
    } else if u_ball.contains(v_ball.center()) {
        Some(v_ball.center().clone())
    } else {
        None
    };
    let (u, v, step) = match shared {
        Some(c) => (c.clone(), c, 1),
        None => {
            let (u_level, u_target) = dyadic_target(pole, u_ball)?;
            let (v_level, v_target) = dyadic_target(pole, v_ball)?;
            let k = u_level.max(v_level);
            (u_target(k), v_target(k), k as usize)
        }
    };
    let separation = pair_separation(pole, domain, &u, &v, step);
    Ok(Witness {
        pole: pole.clone(),
        domain,
        points: [u, v],
        step,
        separation,
        claim: Claim::Accessible { u_ball: u_ball.clone(), v_ball: v_ball.clone(), lambda },
    })
}

type Target = Box<dyn Fn(u32) -> AmbientVector>;

/// Smallest level `i ≥ 1` at which the ball contains a point landing on `P` after
/// `i` steps, and a constructor for such a point at any level `k ≥ i`.
fn dyadic_target(pole: &Pole, ball: &OpenBall) -> Result<(u32, Target)> {
    match ball.domain() {
        Domain::Sphere => sphere_target(pole, ball),
        Domain::Disk => disk_target(pole, ball),
    }
}

fn nearest_dyadic(theta: f64, level: u32) -> f64 {
    let cells = 2f64.powi(level as i32);
    (theta * cells / TAU).round() * TAU / cells
}

fn sphere_target(pole: &Pole, ball: &OpenBall) -> Result<(u32, Target)> {
    let frame = SliceFrame::through(pole.point(), ball.center())?;
    let theta = frame.angle(ball.center());
    let reach = 2.0 * (ball.radius().min(2.0) / 2.0).asin() * SHRINK;
    let level = (1..=MAX_LEVEL)
        .find(|&i| (nearest_dyadic(theta, i) - theta).abs() < reach)
        .ok_or(ChaosError::BudgetExceeded { max_k: MAX_LEVEL as usize, best: f64::NAN })?;
    Ok((level, Box::new(move |k| frame.embed(nearest_dyadic(theta, k)).into_vector())))
}

fn disk_target(pole: &Pole, ball: &OpenBall) -> Result<(u32, Target)> {
    let p = pole.vector().clone();
    let c = ball.center();
    let half = ball.radius().min(2.0) / 2.0;
    // Pull the center inwards so the ball of radius `half` around it lies in the disk.
    let norm = c.norm();
    let inner = if norm > 1.0 - half { c.scale((1.0 - half) / norm) } else { c.clone() };
    let t0 = inner.dot(&p);
    let reach = half * SHRINK;
    let (phi_lo, phi_hi) = ((t0 + reach).min(1.0).acos(), (t0 - reach).max(-1.0).acos());
    let hit = (1..=MAX_LEVEL).find_map(|i| {
        let cell = TAU / 2f64.powi(i as i32);
        let j = (phi_lo / cell).floor() + 1.0;
        let phi = j * cell;
        (phi < phi_hi && phi <= PI).then_some((i, phi))
    });
    let (level, phi) = hit.ok_or(ChaosError::BudgetExceeded { max_k: MAX_LEVEL as usize, best: f64::NAN })?;
    let point = inner.add_scaled(phi.cos() - t0, &p);
    Ok((level, Box::new(move |_| point.clone())))
}
