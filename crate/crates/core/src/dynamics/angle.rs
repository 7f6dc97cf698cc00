use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{DynamicsError, Result};

/// A position on the circle.
///
/// `Turns(r)` is exact and means `θ = 2πr` with `0 ≤ r < 1` in lowest terms;
/// `Radians(θ)` is a finite float in `[0, 2π)`.
#[derive(Debug, Clone, PartialEq)]
pub enum Angle {
    Radians(f64),
    Turns(BigRational),
}

fn reduce_radians(theta: f64) -> f64 {
    let r = theta.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

fn reduce_turns(r: BigRational) -> BigRational {
    let floor = r.floor();
    r - floor
}

impl Angle {
    pub fn radians(theta: f64) -> Result<Self> {
        if !theta.is_finite() {
            return Err(DynamicsError::InvalidAngle(format!("{theta} is not finite")));
        }
        Ok(Self::Radians(reduce_radians(theta)))
    }

    /// `2π·numer/denom`, reduced modulo one turn.
    pub fn turns(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Result<Self> {
        let denom = denom.into();
        if denom.is_zero() {
            return Err(DynamicsError::InvalidAngle("zero denominator".into()));
        }
        Ok(Self::from_turns(BigRational::new(numer.into(), denom)))
    }

    pub fn from_turns(r: BigRational) -> Self {
        let r = reduce_turns(r);
        debug_assert!(is_canonical_turns(&r));
        Self::Turns(r)
    }

    pub fn zero_turns() -> Self {
        Self::Turns(BigRational::zero())
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Self::Turns(_))
    }

    pub fn as_turns(&self) -> Option<&BigRational> {
        match self {
            Self::Turns(r) => Some(r),
            Self::Radians(_) => None,
        }
    }

    pub fn to_radians(&self) -> f64 {
        match self {
            Self::Radians(theta) => *theta,
            Self::Turns(r) => TAU * ratio_to_f64(r),
        }
    }

    /// Floating copy of this angle.
    pub fn to_float(&self) -> Self {
        Self::Radians(self.to_radians())
    }

    /// Exact copy: a float angle becomes the dyadic rational equal to the f64 value
    /// of `θ/2π`.
    pub fn to_exact(&self) -> Self {
        match self {
            Self::Turns(_) => self.clone(),
            Self::Radians(theta) => {
                Self::from_turns(BigRational::from_float(theta / TAU).expect("finite by construction"))
            }
        }
    }
}

fn ratio_to_f64(r: &BigRational) -> f64 {
    // The quotient of two f64 conversions is enough: r is in [0, 1) and only feeds
    // floating-point consumers.
    match (r.numer().to_f64(), r.denom().to_f64()) {
        (Some(n), Some(d)) if d.is_finite() && n.is_finite() => n / d,
        _ => r.to_f64().unwrap_or(0.0),
    }
}

impl fmt::Display for Angle {
    /// Exact angles print as the turn fraction `p/q`, floats as radians.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Radians(theta) => write!(f, "{theta}"),
            Self::Turns(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

impl FromStr for Angle {
    type Err = DynamicsError;

    /// `p/q` is the exact angle `2π·p/q`; anything else is read as decimal radians.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some((p, q)) = s.split_once('/') {
            let parse = |t: &str| {
                t.trim().parse::<BigInt>().map_err(|e| DynamicsError::InvalidAngle(format!("{s}: {e}")))
            };
            return Self::turns(parse(p)?, parse(q)?);
        }
        let theta: f64 = s.parse().map_err(|e| DynamicsError::InvalidAngle(format!("{s}: {e}")))?;
        Self::radians(theta)
    }
}

/// The reduced circle dynamics `θ ↦ 2θ − α (mod 2π)`.
///
/// Exact inputs give exact outputs; mixing representations is an error.
pub fn angle_step(alpha: &Angle, theta: &Angle) -> Result<Angle> {
    match (alpha, theta) {
        (Angle::Radians(a), Angle::Radians(t)) => Ok(Angle::Radians(reduce_radians(2.0 * t - a))),
        (Angle::Turns(a), Angle::Turns(t)) => {
            let two = BigRational::from_integer(BigInt::from(2));
            Ok(Angle::from_turns(two * t - a))
        }
        _ => Err(DynamicsError::MixedRepresentation),
    }
}

/// `θ, step(θ), …` with `steps + 1` entries.
pub fn angle_orbit(alpha: &Angle, theta: &Angle, steps: usize) -> Result<Vec<Angle>> {
    let mut out = Vec::with_capacity(steps + 1);
    out.push(theta.clone());
    for _ in 0..steps {
        let next = angle_step(alpha, out.last().expect("non-empty"))?;
        out.push(next);
    }
    Ok(out)
}

/// Exact turn fraction, validated: denominator positive, lowest terms, `0 ≤ r < 1`.
pub(crate) fn is_canonical_turns(r: &BigRational) -> bool {
    r.denom().is_positive()
        && r.numer().gcd(r.denom()).is_one()
        && !r.is_negative()
        && r < &BigRational::one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_copy_of_float() {
        let a = Angle::radians(1.0).unwrap().to_exact();
        assert!(a.is_exact());
        assert!((a.to_radians() - 1.0).abs() < 1e-15);
        assert_eq!(Angle::radians(0.0).unwrap().to_exact(), Angle::zero_turns());
    }

    #[test]
    fn pure_doubling() {
        let step = angle_step(&Angle::radians(0.0).unwrap(), &Angle::radians(0.3).unwrap()).unwrap();
        assert!((step.to_radians() - 0.6).abs() < 1e-16);
    }

    #[test]
    fn alpha_is_fixed() {
        let a = Angle::turns(3, 7).unwrap();
        assert_eq!(angle_step(&a, &a).unwrap(), a);
        let a = Angle::radians(1.1).unwrap();
        assert!((angle_step(&a, &a).unwrap().to_radians() - 1.1).abs() < 1e-15);
    }

    #[test]
    fn exact_step_wraps_to_zero() {
        // 2·(2/3) − 1/3 = 1 ≡ 0
        let step = angle_step(&Angle::turns(1, 3).unwrap(), &Angle::turns(2, 3).unwrap()).unwrap();
        assert_eq!(step, Angle::zero_turns());
    }

    #[test]
    fn mixed_inputs_are_rejected() {
        let r = angle_step(&Angle::zero_turns(), &Angle::radians(0.1).unwrap());
        assert_eq!(r, Err(DynamicsError::MixedRepresentation));
    }

    #[test]
    fn turns_are_canonical() {
        let a = Angle::turns(-9, 6).unwrap();
        assert_eq!(a, Angle::turns(1, 2).unwrap());
        assert!(is_canonical_turns(a.as_turns().unwrap()));
        assert!(Angle::turns(1, 0).is_err());
        assert!(Angle::radians(f64::INFINITY).is_err());
        assert!((Angle::radians(-0.5).unwrap().to_radians() - (TAU - 0.5)).abs() < 1e-15);
    }

    #[test]
    fn parses_both_forms() {
        assert_eq!("2/7".parse::<Angle>().unwrap(), Angle::turns(2, 7).unwrap());
        assert_eq!("0.25".parse::<Angle>().unwrap(), Angle::Radians(0.25));
        assert!("x/2".parse::<Angle>().is_err());
        assert_eq!(Angle::turns(4, 14).unwrap().to_string(), "2/7");
    }

    #[test]
    fn exact_orbit_of_two_sevenths() {
        let orbit = angle_orbit(&Angle::zero_turns(), &Angle::turns(2, 7).unwrap(), 3).unwrap();
        let shown: Vec<String> = orbit.iter().map(ToString::to_string).collect();
        assert_eq!(shown, ["2/7", "4/7", "1/7", "2/7"]);
    }
}
