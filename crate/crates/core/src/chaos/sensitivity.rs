use super::{check_len, ChaosError, Claim, Domain, Result, Witness};
use crate::dynamics::Pole;
use crate::geometry::{AmbientVector, DiskPoint, SliceFrame, SpherePoint};

// Keeps the constructed partner strictly within δ after rounding.
const SHRINK: f64 = 1.0 - 1e-8;

fn check_params(delta: f64, lambda: f64) -> Result<()> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(ChaosError::InvalidParameter(format!("δ must be positive, got {delta}")));
    }
    if !(lambda > 0.0 && lambda < 2.0) {
        return Err(ChaosError::InvalidParameter(format!("λ must lie in (0, 2), got {lambda}")));
    }
    Ok(())
}

/// Steps `x` and `y` together until they are more than `lambda` apart.
fn separate(
    pole: &Pole,
    domain: Domain,
    x: AmbientVector,
    y: AmbientVector,
    delta: f64,
    lambda: f64,
    max_k: usize,
) -> Result<Witness> {
    let start = [x.clone(), y.clone()];
    let (mut a, mut b) = (x, y);
    let mut best = 0.0_f64;
    for step in 0..=max_k {
        let separation = a.distance(&b);
        if separation > lambda {
            return Ok(Witness {
                pole: pole.clone(),
                domain,
                points: start,
                step,
                separation,
                claim: Claim::Sensitive { delta, lambda },
            });
        }
        best = best.max(separation);
        a = domain.advance(pole, &a);
        b = domain.advance(pole, &b);
    }
    Err(ChaosError::BudgetExceeded { max_k, best })
}

/// A partner `y` of `x ∈ S^n` with `d(x, y) ≤ δ` whose orbit is more than `λ` away
/// from that of `x` after `k ≤ max_k` steps.
///
/// `y` is `x` rotated by the angle `2·asin(δ/2)` along the great circle through `P`
/// and `x` (any great circle through `P` when `x = ±P`). On that circle the map
/// doubles angular gaps, so the gap after `k` steps is `2^k` times the initial one
/// until it wraps.
pub fn sensitivity_witness(pole: &Pole, x: &SpherePoint, delta: f64, lambda: f64, max_k: usize) -> Result<Witness> {
    check_len(pole, x.vector())?;
    check_params(delta, lambda)?;
    let frame = SliceFrame::through(pole.point(), x.vector())?;
    let theta = frame.angle(x.vector());
    let offset = 2.0 * (delta.min(2.0) / 2.0).asin() * SHRINK;
    let y = frame.embed(theta + offset).into_vector();
    separate(pole, Domain::Sphere, x.vector().clone(), y, delta, lambda, max_k)
}

/// Disk version of [`sensitivity_witness`].
///
/// The partner is `x` shifted along `P` towards the interior, so the Chebyshev
/// coordinates `x·P` of the two orbits separate under `t ↦ 2t² − 1`. When no such
/// shift stays in the disk (`x` on the boundary and orthogonal to `P`), `x` is
/// rotated inside `span(P, x)` at constant norm instead.
pub fn disk_sensitivity_witness(pole: &Pole, x: &DiskPoint, delta: f64, lambda: f64, max_k: usize) -> Result<Witness> {
    let xv = x.vector();
    check_len(pole, xv)?;
    check_params(delta, lambda)?;
    let p = pole.vector();
    let t = xv.dot(p);
    let shift = delta.min(2.0) * SHRINK;
    let shifted = xv.add_scaled(if t > 0.0 { -shift } else { shift }, p);
    let y = if shifted.norm() <= 1.0 {
        shifted
    } else {
        let r = xv.norm();
        let frame = SliceFrame::through(pole.point(), xv)?;
        let theta = frame.angle(xv);
        let offset = 2.0 * (delta / (2.0 * r)).min(1.0).asin() * SHRINK;
        frame.embed(theta + offset).into_vector().scale(r)
    };
    separate(pole, Domain::Disk, xv.clone(), y, delta, lambda, max_k)
}
