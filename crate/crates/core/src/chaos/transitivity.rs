use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{check_len, ChaosError, Domain, OpenBall, Result};
use crate::dynamics::{iterate, Pole, Renormalize};
use crate::geometry::{AmbientVector, DiskPoint, SliceFrame, SpherePoint};
use crate::sampling::{random_in_ball, random_in_cap, stream_rng};
use crate::tol;

const REJECTION_TRIES: usize = 1000;

/// Outcome of a seeded search for `Φ^k(U) ∩ V ≠ ∅`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeSummary {
    /// Smallest `k ≥ 1` at which some sampled orbit was inside `V`.
    pub first_hit: Option<usize>,
    /// Index of a sample achieving `first_hit`.
    pub hitting_sample: Option<usize>,
    /// Number of samples that entered `V` at some step.
    pub hitting_samples: usize,
    pub horizon: usize,
    pub samples: usize,
    pub seed: u64,
}

impl ProbeSummary {
    pub fn hit(&self) -> bool {
        self.first_hit.is_some()
    }
}

/// Sample `index` of a probe: a point of `ball`.
pub(crate) fn sample_ball(ball: &OpenBall, seed: u64, index: u64) -> AmbientVector {
    let mut rng = stream_rng(seed, index);
    match ball.domain() {
        Domain::Sphere => {
            let center = SpherePoint::new(ball.center().clone()).expect("sphere ball center");
            random_in_cap(&mut rng, &center, ball.radius()).into_vector()
        }
        Domain::Disk => (0..REJECTION_TRIES)
            .map(|_| random_in_ball(&mut rng, ball.center(), ball.radius()))
            .find(|x| x.norm() <= 1.0)
            .unwrap_or_else(|| ball.center().clone()),
    }
}

/// Iterates `samples` seeded points of `U` for up to `max_k` steps and reports the
/// first step at which any of them lies in `V`.
///
/// Samples run in parallel; each draws from its own `(seed, index)` stream, so the
/// summary does not depend on scheduling.
pub fn transitivity_probe(
    pole: &Pole,
    u_ball: &OpenBall,
    v_ball: &OpenBall,
    max_k: usize,
    samples: usize,
    seed: u64,
) -> Result<ProbeSummary> {
    check_len(pole, u_ball.center())?;
    check_len(pole, v_ball.center())?;
    if u_ball.domain() != v_ball.domain() {
        return Err(ChaosError::DomainMismatch);
    }
    if max_k == 0 || samples == 0 {
        return Err(ChaosError::InvalidParameter("max_k and samples must be positive".into()));
    }
    let domain = u_ball.domain();
    let hits: Vec<Option<usize>> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut x = sample_ball(u_ball, seed, i as u64);
            for k in 1..=max_k {
                x = domain.advance(pole, &x);
                if x.distance(v_ball.center()) < v_ball.radius() {
                    return Some(k);
                }
            }
            None
        })
        .collect();
    let best = hits.iter().enumerate().filter_map(|(i, h)| h.map(|k| (k, i))).min();
    Ok(ProbeSummary {
        first_hit: best.map(|(k, _)| k),
        hitting_sample: best.map(|(_, i)| i),
        hitting_samples: hits.iter().filter(|h| h.is_some()).count(),
        horizon: max_k,
        samples,
        seed,
    })
}

/// Evidence that the orbit of `x0` stays on its slice and away from `R`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SliceCertificate {
    pub steps: usize,
    /// Largest distance of an iterate from `span(P, x0)`.
    pub max_residual: f64,
    /// Smallest distance of an iterate from `R`.
    pub min_distance: f64,
    /// Distance from `R` to the slice the orbit is confined to.
    pub slice_distance: f64,
    pub certified: bool,
}

fn gram_determinant(vectors: [&AmbientVector; 3]) -> f64 {
    let g = |i: usize, j: usize| vectors[i].dot(vectors[j]);
    g(0, 0) * (g(1, 1) * g(2, 2) - g(1, 2) * g(2, 1)) - g(0, 1) * (g(1, 0) * g(2, 2) - g(1, 2) * g(2, 0))
        + g(0, 2) * (g(1, 0) * g(2, 1) - g(1, 1) * g(2, 0))
}

fn certify(
    pole: &Pole,
    x0: &AmbientVector,
    r: &AmbientVector,
    steps: usize,
    domain: Domain,
) -> Result<SliceCertificate> {
    check_len(pole, x0)?;
    check_len(pole, r)?;
    if pole.len() < 3 {
        return Err(ChaosError::InvalidParameter("slice confinement needs S^m with m ≥ 2".into()));
    }
    let gram = gram_determinant([pole.vector(), x0, r]);
    if gram < tol::DEGENERACY {
        return Err(ChaosError::DegenerateConfiguration { gram });
    }
    let renormalize = match domain {
        Domain::Sphere => Renormalize::EveryStep,
        Domain::Disk => Renormalize::Off,
    };
    let orbit = iterate(pole, x0, steps, renormalize)?;
    let frame = SliceFrame::through(pole.point(), x0)?;
    let slice_distance = match domain {
        Domain::Sphere => frame.circle_distance(r),
        Domain::Disk => frame.residual(r),
    };
    let max_residual = orbit.max_slice_residual();
    let min_distance = orbit.points().iter().map(|x| x.distance(r)).fold(f64::INFINITY, f64::min);
    let certified = max_residual <= tol::DEGENERACY && min_distance >= slice_distance / 2.0;
    Ok(SliceCertificate { steps, max_residual, min_distance, slice_distance, certified })
}

/// Runs `k` renormalized steps from `x0 ∈ S^m` (`m ≥ 2`) and measures how far the
/// orbit strays from `span(P, x0)` and how close it comes to `R`.
///
/// The map sends every point of `span(P, x)` into that plane, so an orbit never
/// leaves the great circle through `P` and `x0`; when `R` is off that circle a
/// small ball around `R` is never visited. `P, x0, R` must be linearly independent.
pub fn slice_confinement_certificate(
    pole: &Pole,
    x0: &SpherePoint,
    r: &SpherePoint,
    k: usize,
) -> Result<SliceCertificate> {
    certify(pole, x0.vector(), r.vector(), k, Domain::Sphere)
}

/// Disk counterpart of [`slice_confinement_certificate`]: the orbit stays in the
/// planar disk `span(P, x0) ∩ D`, whose distance from `R` is the plane residual.
pub fn disk_slice_confinement_certificate(
    pole: &Pole,
    x0: &DiskPoint,
    r: &DiskPoint,
    k: usize,
) -> Result<SliceCertificate> {
    certify(pole, x0.vector(), r.vector(), k, Domain::Disk)
}
