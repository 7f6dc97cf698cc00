use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{ChaosError, Result};
use crate::dynamics::{angle_step, Angle, Pole};

/// Enumeration beyond this many points (2^k − 1) is refused.
const MAX_PERIOD: usize = 24;

/// All angles whose period under `θ ↦ 2θ − α` divides `k`:
/// `θ_j = α + 2πj/(2^k − 1)` for `j = 0, …, 2^k − 2`, sorted by angle.
///
/// Writing `θ = α + φ` turns the map into `φ ↦ 2φ`, whose `k`-fold iterate fixes
/// `φ` exactly when `(2^k − 1)φ ≡ 0`.
pub fn periodic_points_circle(alpha: &Angle, k: usize) -> Result<Vec<Angle>> {
    let Some(a) = alpha.as_turns() else {
        return Err(ChaosError::InvalidParameter("periodic points need an exact α".into()));
    };
    if k == 0 || k > MAX_PERIOD {
        return Err(ChaosError::InvalidParameter(format!("period must be in 1..={MAX_PERIOD}, got {k}")));
    }
    let modulus = (BigInt::one() << k) - BigInt::one();
    let count = (1usize << k) - 1;
    let mut points: Vec<BigRational> = (0..count)
        .map(|j| {
            let r = a + BigRational::new(BigInt::from(j), modulus.clone());
            r.clone() - r.floor()
        })
        .collect();
    points.sort();
    Ok(points.into_iter().map(Angle::Turns).collect())
}

/// Whether `k` exact steps return `theta` to itself.
pub fn has_period(alpha: &Angle, theta: &Angle, k: usize) -> Result<bool> {
    let mut current = theta.clone();
    for _ in 0..k {
        current = angle_step(alpha, &current)?;
    }
    Ok(&current == theta)
}

/// Largest gap, in turns, between cyclically consecutive exact angles.
pub fn circular_max_gap(points: &[Angle]) -> Option<BigRational> {
    let mut turns: Vec<&BigRational> = points.iter().map(Angle::as_turns).collect::<Option<_>>()?;
    if turns.is_empty() {
        return None;
    }
    turns.sort();
    let wrap = turns[0] + BigRational::one() - turns[turns.len() - 1];
    let max = turns.windows(2).map(|w| w[1] - w[0]).fold(wrap, |m, g| if g > m { g } else { m });
    Some(if max.is_zero() { BigRational::one() } else { max })
}

/// Points of period dividing `k` for `Φ_P` on `[−1, 1]`, `P = ±1`, obtained by
/// projecting the circle points `cos(2πj/(2^k − 1))` through the Chebyshev factor
/// (and negating them for `P = −1`, where `u ↦ −u` conjugates to `P = 1`). Sorted.
pub fn interval_periodic_points(pole: &Pole, k: usize) -> Result<Vec<f64>> {
    if pole.len() != 1 {
        return Err(ChaosError::InvalidParameter("interval periodic points need P ∈ S⁰".into()));
    }
    let sign = pole.vector().coords()[0].signum();
    let circle = periodic_points_circle(&Angle::zero_turns(), k)?;
    let mut points: Vec<f64> = circle.iter().map(|a| sign * a.to_radians().cos()).collect();
    points.sort_by(f64::total_cmp);
    points.dedup_by(|a, b| (*a - *b).abs() < 1e-15);
    Ok(points)
}
