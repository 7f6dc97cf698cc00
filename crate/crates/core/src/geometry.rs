//! Dense vector algebra on ℝ^{n+1}, the unit sphere S^n, the unit disk D^{n+1},
//! slice frames and proper rotations.
//!
//! Every point type is a thin validated wrapper around [`AmbientVector`].
//! Distances are Euclidean chord distances in the ambient space.

use std::f64::consts::TAU;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::tol;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("vector must have at least one coordinate")]
    Empty,
    #[error("coordinate {index} is not finite ({value})")]
    NonFinite { index: usize, value: f64 },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("norm {norm} is not within {tolerance:e} of 1")]
    NotUnit { norm: f64, tolerance: f64 },
    #[error("norm {norm} exceeds 1 + {tolerance:e}")]
    OutsideDisk { norm: f64, tolerance: f64 },
    #[error("cannot normalize a zero vector")]
    ZeroVector,
    #[error("Q is within {threshold:e} of ±P (residual {residual:e})")]
    DegeneratePair { residual: f64, threshold: f64 },
    #[error("slice frame vectors are not orthogonal (P·W = {dot:e})")]
    NotOrthogonal { dot: f64 },
    #[error("no proper rotation of ℝ¹ maps {value} to 1")]
    NoProperRotation { value: f64 },
    #[error("no unit vector is orthogonal to a point of S⁰")]
    NoOrthogonalDirection,
    #[error("matrix is not a rotation (orthogonality defect {defect:e}, det {det})")]
    NotRotation { defect: f64, det: f64 },
}

pub type Result<T, E = GeometryError> = std::result::Result<T, E>;

/// A point of ℝ^{n+1}. At least one coordinate, all finite.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct AmbientVector(Vec<f64>);

impl AmbientVector {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(GeometryError::Empty);
        }
        if let Some((index, &value)) = coords.iter().enumerate().find(|(_, c)| !c.is_finite()) {
            return Err(GeometryError::NonFinite { index, value });
        }
        Ok(Self(coords))
    }

    /// Unchecked constructor for values produced by arithmetic on valid vectors.
    pub(crate) fn from_raw(coords: Vec<f64>) -> Self {
        debug_assert!(!coords.is_empty());
        Self(coords)
    }

    pub fn zeros(len: usize) -> Self {
        assert!(len > 0, "ambient dimension must be positive");
        Self(vec![0.0; len])
    }

    /// The `index`-th standard basis vector of ℝ^len.
    pub fn basis(len: usize, index: usize) -> Self {
        let mut v = Self::zeros(len);
        v.0[index] = 1.0;
        v
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.0
    }

    /// Number of coordinates, i.e. n+1.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn check_same_len(&self, other: &Self) -> Result<()> {
        if self.len() == other.len() {
            Ok(())
        } else {
            Err(GeometryError::DimensionMismatch { left: self.len(), right: other.len() })
        }
    }

    /// Dot product. Panics on dimension mismatch; use [`check_same_len`](Self::check_same_len)
    /// first when the operands come from user input.
    pub fn dot(&self, other: &Self) -> f64 {
        assert_eq!(self.len(), other.len(), "dot: dimension mismatch");
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self(self.0.iter().map(|c| c * factor).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.len(), other.len(), "add: dimension mismatch");
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.len(), other.len(), "sub: dimension mismatch");
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    /// `self + factor·other`
    pub fn add_scaled(&self, factor: f64, other: &Self) -> Self {
        assert_eq!(self.len(), other.len(), "add_scaled: dimension mismatch");
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + factor * b).collect())
    }

    /// Chord distance.
    pub fn distance(&self, other: &Self) -> f64 {
        assert_eq!(self.len(), other.len(), "distance: dimension mismatch");
        self.0.iter().zip(&other.0).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt()
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 {
            return Err(GeometryError::ZeroVector);
        }
        Ok(self.scale(1.0 / n))
    }

    /// Largest absolute coordinate difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.len(), other.len());
        self.0.iter().zip(&other.0).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }
}

impl fmt::Debug for AmbientVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.0).finish()
    }
}

impl TryFrom<Vec<f64>> for AmbientVector {
    type Error = GeometryError;

    fn try_from(coords: Vec<f64>) -> Result<Self> {
        Self::new(coords)
    }
}

impl From<AmbientVector> for Vec<f64> {
    fn from(v: AmbientVector) -> Self {
        v.0
    }
}

/// A point of S^n: `|‖x‖ − 1| ≤ 1e-9`.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "AmbientVector", into = "AmbientVector")]
pub struct SpherePoint(AmbientVector);

impl SpherePoint {
    pub fn new(vector: AmbientVector) -> Result<Self> {
        let norm = vector.norm();
        if (norm - 1.0).abs() > tol::UNIT_NORM {
            return Err(GeometryError::NotUnit { norm, tolerance: tol::UNIT_NORM });
        }
        Ok(Self(vector))
    }

    pub fn from_coords(coords: Vec<f64>) -> Result<Self> {
        Self::new(AmbientVector::new(coords)?)
    }

    /// Radially projects any non-zero vector onto the sphere.
    pub fn normalize(vector: &AmbientVector) -> Result<Self> {
        Ok(Self(vector.normalized()?))
    }

    pub fn basis(len: usize, index: usize) -> Self {
        Self(AmbientVector::basis(len, index))
    }

    pub fn vector(&self) -> &AmbientVector {
        &self.0
    }

    pub fn into_vector(self) -> AmbientVector {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn neg(&self) -> Self {
        Self(self.0.scale(-1.0))
    }
}

impl fmt::Debug for SpherePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SpherePoint({:?})", self.0)
    }
}

impl TryFrom<AmbientVector> for SpherePoint {
    type Error = GeometryError;

    fn try_from(v: AmbientVector) -> Result<Self> {
        Self::new(v)
    }
}

impl From<SpherePoint> for AmbientVector {
    fn from(p: SpherePoint) -> Self {
        p.0
    }
}

impl AsRef<AmbientVector> for SpherePoint {
    fn as_ref(&self) -> &AmbientVector {
        &self.0
    }
}

/// A point of the closed disk D^{n+1}: `‖x‖ ≤ 1 + 1e-9`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "AmbientVector", into = "AmbientVector")]
pub struct DiskPoint(AmbientVector);

impl DiskPoint {
    pub fn new(vector: AmbientVector) -> Result<Self> {
        let norm = vector.norm();
        if norm > 1.0 + tol::UNIT_NORM {
            return Err(GeometryError::OutsideDisk { norm, tolerance: tol::UNIT_NORM });
        }
        Ok(Self(vector))
    }

    pub fn from_coords(coords: Vec<f64>) -> Result<Self> {
        Self::new(AmbientVector::new(coords)?)
    }

    pub fn vector(&self) -> &AmbientVector {
        &self.0
    }

    pub fn into_vector(self) -> AmbientVector {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

impl TryFrom<AmbientVector> for DiskPoint {
    type Error = GeometryError;

    fn try_from(v: AmbientVector) -> Result<Self> {
        Self::new(v)
    }
}

impl From<DiskPoint> for AmbientVector {
    fn from(p: DiskPoint) -> Self {
        p.0
    }
}

impl From<SpherePoint> for DiskPoint {
    fn from(p: SpherePoint) -> Self {
        Self(p.0)
    }
}

impl AsRef<AmbientVector> for DiskPoint {
    fn as_ref(&self) -> &AmbientVector {
        &self.0
    }
}

/// The unit vector `(Q − (P·Q)P) / ‖Q − (P·Q)P‖`.
///
/// Rejects `Q ≈ ±P`, where the numerator vanishes.
pub fn orthonormal_complement(p: &SpherePoint, q: &SpherePoint) -> Result<SpherePoint> {
    p.vector().check_same_len(q.vector())?;
    let (p, q) = (p.vector(), q.vector());
    let numerator = q.add_scaled(-p.dot(q), p);
    let residual = numerator.norm();
    if residual < tol::DEGENERACY {
        return Err(GeometryError::DegeneratePair { residual, threshold: tol::DEGENERACY });
    }
    // One extra Gram-Schmidt pass keeps |W·P| at the 1e-16 level even for Q close to ±P.
    let w = numerator.scale(1.0 / residual);
    let w = w.add_scaled(-p.dot(&w), p);
    Ok(SpherePoint(w.scale(1.0 / w.norm())))
}

/// A deterministic unit vector orthogonal to `p`: the first standard basis vector
/// minimizing `|e_i·P|`, orthogonalized against `P`.
pub fn default_orthogonal(p: &SpherePoint) -> Result<SpherePoint> {
    let len = p.len();
    if len < 2 {
        return Err(GeometryError::NoOrthogonalDirection);
    }
    let index = p
        .vector()
        .coords()
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |best, (i, c)| if c.abs() < best.1 { (i, c.abs()) } else { best })
        .0;
    orthonormal_complement(p, &SpherePoint::basis(len, index))
}

/// An ordered orthonormal pair `(P, W)`; its span meets the sphere in a great circle
/// on which the quadratic map acts by angle doubling.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SliceFrame {
    pole: SpherePoint,
    complement: SpherePoint,
}

impl SliceFrame {
    pub fn new(pole: SpherePoint, complement: SpherePoint) -> Result<Self> {
        pole.vector().check_same_len(complement.vector())?;
        let dot = pole.vector().dot(complement.vector());
        if dot.abs() > tol::ORTHOGONALITY {
            return Err(GeometryError::NotOrthogonal { dot });
        }
        Ok(Self { pole, complement })
    }

    /// The frame whose great circle passes through `P` and `x`. When `x ≈ ±P` the
    /// complement falls back to [`default_orthogonal`].
    pub fn through(pole: &SpherePoint, x: &AmbientVector) -> Result<Self> {
        pole.vector().check_same_len(x)?;
        let complement = match x.normalized().map(SpherePoint) {
            Ok(q) => match orthonormal_complement(pole, &q) {
                Ok(w) => w,
                Err(GeometryError::DegeneratePair { .. }) => default_orthogonal(pole)?,
                Err(e) => return Err(e),
            },
            Err(GeometryError::ZeroVector) => default_orthogonal(pole)?,
            Err(e) => return Err(e),
        };
        Ok(Self { pole: pole.clone(), complement })
    }

    pub fn pole(&self) -> &SpherePoint {
        &self.pole
    }

    pub fn complement(&self) -> &SpherePoint {
        &self.complement
    }

    pub fn len(&self) -> usize {
        self.pole.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `cos θ·P + sin θ·W`
    pub fn embed(&self, theta: f64) -> SpherePoint {
        let (s, c) = theta.sin_cos();
        SpherePoint(self.pole.vector().scale(c).add_scaled(s, self.complement.vector()))
    }

    /// Planar coordinates `(x·P, x·W)`.
    pub fn coordinates(&self, x: &AmbientVector) -> (f64, f64) {
        (x.dot(self.pole.vector()), x.dot(self.complement.vector()))
    }

    /// Angle of the projection of `x` onto the frame plane, in `[0, 2π)`.
    pub fn angle(&self, x: &AmbientVector) -> f64 {
        let (a, b) = self.coordinates(x);
        let theta = b.atan2(a).rem_euclid(TAU);
        // rem_euclid can round up to TAU itself
        if theta >= TAU {
            0.0
        } else {
            theta
        }
    }

    /// Distance from `x` to the frame plane.
    pub fn residual(&self, x: &AmbientVector) -> f64 {
        let (a, b) = self.coordinates(x);
        x.add_scaled(-a, self.pole.vector()).add_scaled(-b, self.complement.vector()).norm()
    }

    /// Chord distance from `x` to the unit circle of the frame plane.
    pub fn circle_distance(&self, x: &AmbientVector) -> f64 {
        let (a, b) = self.coordinates(x);
        let r = a.hypot(b);
        if r == 0.0 {
            // every point of the circle is equidistant
            return (x.dot(x) + 1.0).sqrt();
        }
        x.distance(self.embed(b.atan2(a)).vector())
    }
}

/// `cos θ·P + sin θ·W` for the frame `(P, W)`.
pub fn slice_embed(frame: &SliceFrame, theta: f64) -> SpherePoint {
    frame.embed(theta)
}

/// Inverse of [`slice_embed`] for points in the slice, in `[0, 2π)`.
pub fn slice_angle(frame: &SliceFrame, x: &AmbientVector) -> f64 {
    frame.angle(x)
}

/// An orthogonal matrix with determinant one, stored row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Rotation {
    dim: usize,
    entries: Vec<f64>,
}

impl Rotation {
    pub fn identity(dim: usize) -> Self {
        let mut entries = vec![0.0; dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = 1.0;
        }
        Self { dim, entries }
    }

    /// Validates orthogonality and `det = 1` to the orthogonality tolerance.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(GeometryError::Empty);
        }
        if let Some(bad) = rows.iter().find(|r| r.len() != dim) {
            return Err(GeometryError::DimensionMismatch { left: dim, right: bad.len() });
        }
        let r = Self { dim, entries: rows.into_iter().flatten().collect() };
        let defect = r.orthogonality_defect();
        let det = r.determinant();
        if defect > tol::ORTHOGONALITY || (det - 1.0).abs() > tol::ORTHOGONALITY {
            return Err(GeometryError::NotRotation { defect, det });
        }
        Ok(r)
    }

    pub(crate) fn from_entries_unchecked(dim: usize, entries: Vec<f64>) -> Self {
        debug_assert_eq!(entries.len(), dim * dim);
        Self { dim, entries }
    }

    /// Householder reflection `I − 2vvᵀ/‖v‖²`.
    fn householder(v: &AmbientVector) -> Self {
        let dim = v.len();
        let vv = v.dot(v);
        let c = v.coords();
        let mut entries = vec![0.0; dim * dim];
        for i in 0..dim {
            for j in 0..dim {
                let delta = if i == j { 1.0 } else { 0.0 };
                entries[i * dim + j] = delta - 2.0 * c[i] * c[j] / vv;
            }
        }
        Self { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, row: usize, col: usize) -> f64 {
        self.entries[row * self.dim + col]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.entries.chunks(self.dim).map(<[f64]>::to_vec).collect()
    }

    pub fn apply(&self, x: &AmbientVector) -> AmbientVector {
        assert_eq!(x.len(), self.dim, "rotation: dimension mismatch");
        let c = x.coords();
        AmbientVector::from_raw(
            self.entries.chunks(self.dim).map(|row| row.iter().zip(c).map(|(a, b)| a * b).sum()).collect(),
        )
    }

    /// `self ∘ other`
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut entries = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                entries[i * n + j] = (0..n).map(|k| self.entry(i, k) * other.entry(k, j)).sum();
            }
        }
        Self { dim: n, entries }
    }

    pub fn transpose(&self) -> Self {
        let n = self.dim;
        let mut entries = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                entries[j * n + i] = self.entry(i, j);
            }
        }
        Self { dim: n, entries }
    }

    /// `‖RᵀR − I‖_max`
    pub fn orthogonality_defect(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in 0..n {
                let g: f64 = (0..n).map(|k| self.entry(k, i) * self.entry(k, j)).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((g - target).abs());
            }
        }
        worst
    }

    /// Determinant by LU decomposition with partial pivoting.
    pub fn determinant(&self) -> f64 {
        let n = self.dim;
        let mut a = self.entries.clone();
        let mut det = 1.0;
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&r, &s| a[r * n + col].abs().total_cmp(&a[s * n + col].abs()))
                .expect("non-empty range");
            if a[pivot * n + col] == 0.0 {
                return 0.0;
            }
            if pivot != col {
                for k in 0..n {
                    a.swap(col * n + k, pivot * n + k);
                }
                det = -det;
            }
            let p = a[col * n + col];
            det *= p;
            for r in col + 1..n {
                let f = a[r * n + col] / p;
                for k in col..n {
                    a[r * n + k] -= f * a[col * n + k];
                }
            }
        }
        det
    }
}

/// A proper rotation `R` with `R·P = e₁`, built from two Householder reflections.
///
/// The first reflection sends `P` to `∓e₁` using the numerically stable sign; the
/// second fixes the sign and brings the determinant back to +1. `P = e₁` gives the
/// identity exactly. On ℝ¹ the only proper rotation is the identity, so `P = −1` fails.
pub fn rotate_pole_to_axis(p: &SpherePoint) -> Result<Rotation> {
    let dim = p.len();
    let first = p.vector().coords()[0];
    if dim == 1 {
        return if first > 0.0 {
            Ok(Rotation::identity(1))
        } else {
            Err(GeometryError::NoProperRotation { value: first })
        };
    }
    let sign = if first >= 0.0 { 1.0 } else { -1.0 };
    let e1 = AmbientVector::basis(dim, 0);
    // H1·P = −sign·e₁
    let h1 = Rotation::householder(&p.vector().add_scaled(sign, &e1));
    let h2 = if sign > 0.0 {
        Rotation::householder(&e1)
    } else {
        Rotation::householder(&AmbientVector::basis(dim, 1))
    };
    Ok(h2.compose(&h1))
}
