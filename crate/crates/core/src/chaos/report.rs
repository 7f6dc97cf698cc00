use std::f64::consts::TAU;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::{
    accessibility_witness, circular_max_gap, disk_sensitivity_witness, disk_slice_confinement_certificate,
    interval_periodic_points, mixing_probe, periodic_points_circle, sensitivity_witness, slice_confinement_certificate,
    transitivity_probe, ChaosError, Domain, ExactArc, OpenBall, ProbeSummary, Result, SliceCertificate, Witness,
};
use crate::dynamics::{circle_angle, Angle, Pole};
use crate::geometry::{default_orthogonal, AmbientVector, DiskPoint, SpherePoint};
use crate::sampling::{random_in_disk, random_unit, stream_rng, DEFAULT_SEED};
use crate::tol;

// Disjoint stream ranges, so base points and balls never share random numbers
// with the probe samples (which use streams 0, 1, 2, …).
const BASE_STREAMS: u64 = 1 << 40;
const BALL_STREAMS: u64 = 2 << 40;

/// The system under analysis: `Φ_P` on `S^n` or on `D^{n+1}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "space", content = "pole", rename_all = "lowercase")]
pub enum System {
    Sphere(Pole),
    Disk(Pole),
}

impl System {
    pub fn pole(&self) -> &Pole {
        match self {
            System::Sphere(p) | System::Disk(p) => p,
        }
    }

    pub fn domain(&self) -> Domain {
        match self {
            System::Sphere(_) => Domain::Sphere,
            System::Disk(_) => Domain::Disk,
        }
    }

    /// The circle `S¹` or the interval `D¹`, the only systems that can be Devaney chaotic.
    pub fn is_one_dimensional(&self) -> bool {
        matches!((self, self.pole().len()), (System::Sphere(_), 2) | (System::Disk(_), 1))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisConfig {
    pub seed: u64,
    /// Sensitivity: partner distance and separation threshold.
    pub delta: f64,
    pub lambda: f64,
    pub max_k: usize,
    pub base_points: usize,
    /// Accessibility: ball radius, closeness threshold and number of ball pairs.
    pub ball_radius: f64,
    pub access_lambda: f64,
    pub ball_pairs: usize,
    /// Transitivity probes.
    pub probe_radius: f64,
    pub probe_samples: usize,
    pub horizon: usize,
    /// Period used for the periodic-density statistic.
    pub period: usize,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        Self {
            seed: DEFAULT_SEED,
            delta: 1e-6,
            lambda: 1.0,
            max_k: 64,
            base_points: 8,
            ball_radius: 0.1,
            access_lambda: 1e-10,
            ball_pairs: 8,
            probe_radius: 0.05,
            probe_samples: 64,
            horizon: 10_000,
            period: 12,
        }
    }
}

/// How a verdict was reached.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Basis {
    /// Replayable witnesses or exact arithmetic.
    Constructive,
    /// Sampled orbits within a finite horizon.
    Probe,
    /// Slice confinement of every orbit plus a probe that found no hit.
    Certificate,
    /// Something went wrong while collecting evidence.
    Failed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    /// `None` when the evidence does not settle the question.
    pub holds: Option<bool>,
    pub basis: Basis,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeriodicDensity {
    pub period: usize,
    pub count: usize,
    /// Largest gap between neighbouring periodic points (radians on the circle,
    /// coordinate distance on the interval).
    pub max_gap: f64,
    /// `2π / (2^k − 1)`.
    pub bound: f64,
    pub dense: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Classification {
    Devaney,
    Kato,
    Neither,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChaosReport {
    pub system: System,
    pub config: AnalysisConfig,
    pub sensitive: Verdict,
    pub accessible: Verdict,
    pub transitive: Verdict,
    pub periodic_density: Option<PeriodicDensity>,
    pub kato: bool,
    pub classification: Classification,
    pub witnesses: Vec<Witness>,
    pub probes: Vec<ProbeSummary>,
    pub certificates: Vec<SliceCertificate>,
}

fn random_point(domain: Domain, len: usize, seed: u64, stream: u64) -> AmbientVector {
    let mut rng = stream_rng(seed, stream);
    match domain {
        Domain::Sphere => random_unit(&mut rng, len).into_vector(),
        Domain::Disk => random_in_disk(&mut rng, len),
    }
}

fn ball(domain: Domain, center: AmbientVector, radius: f64) -> Result<OpenBall> {
    OpenBall::new(center, radius, domain)
}

fn failed(err: &ChaosError) -> Verdict {
    Verdict { holds: None, basis: Basis::Failed, note: err.to_string() }
}

fn sensitivity(system: &System, config: &AnalysisConfig, witnesses: &mut Vec<Witness>) -> Verdict {
    let pole = system.pole();
    let len = pole.len();
    let domain = system.domain();
    // P itself is the fixed point and the hardest-looking base point; always include it.
    let bases = std::iter::once(pole.vector().clone())
        .chain((0..config.base_points as u64).map(|i| random_point(domain, len, config.seed, BASE_STREAMS + i)));
    let mut worst = 0;
    for x in bases {
        let witness = match domain {
            Domain::Sphere => SpherePoint::new(x)
                .map_err(ChaosError::from)
                .and_then(|x| sensitivity_witness(pole, &x, config.delta, config.lambda, config.max_k)),
            Domain::Disk => DiskPoint::new(x)
                .map_err(ChaosError::from)
                .and_then(|x| disk_sensitivity_witness(pole, &x, config.delta, config.lambda, config.max_k)),
        };
        match witness {
            Ok(w) if w.replay().is_ok() => {
                worst = worst.max(w.step);
                witnesses.push(w);
            }
            Ok(w) => return failed(&ChaosError::InvalidParameter(format!("witness at step {} did not replay", w.step))),
            Err(e) => return failed(&e),
        }
    }
    Verdict {
        holds: Some(true),
        basis: Basis::Constructive,
        note: format!(
            "{} replayed witnesses, δ = {:e}, λ = {}, largest k = {worst}",
            config.base_points + 1,
            config.delta,
            config.lambda
        ),
    }
}

fn accessibility(system: &System, config: &AnalysisConfig, witnesses: &mut Vec<Witness>) -> Verdict {
    let pole = system.pole();
    let len = pole.len();
    let domain = system.domain();
    let mut worst = 0;
    for i in 0..config.ball_pairs as u64 {
        let u = random_point(domain, len, config.seed, BALL_STREAMS + 2 * i);
        let v = random_point(domain, len, config.seed, BALL_STREAMS + 2 * i + 1);
        let result = ball(domain, u, config.ball_radius)
            .and_then(|u| Ok((u, ball(domain, v, config.ball_radius)?)))
            .and_then(|(u, v)| accessibility_witness(pole, &u, &v, config.access_lambda));
        match result {
            Ok(w) if w.replay().is_ok() => {
                worst = worst.max(w.step);
                witnesses.push(w);
            }
            Ok(w) => return failed(&ChaosError::InvalidParameter(format!("witness at step {} did not replay", w.step))),
            Err(e) => return failed(&e),
        }
    }
    Verdict {
        holds: Some(true),
        basis: Basis::Constructive,
        note: format!(
            "{} ball pairs of radius {}, all iterates within {:e}, largest k = {worst}",
            config.ball_pairs, config.ball_radius, config.access_lambda
        ),
    }
}

/// Two unit vectors `Q, R` with `P, Q, R` orthonormal.
fn orthogonal_pair(pole: &Pole) -> Result<(AmbientVector, AmbientVector)> {
    let q = default_orthogonal(pole.point())?.into_vector();
    let p = pole.vector();
    let r = (0..pole.len())
        .map(|i| {
            let e = AmbientVector::basis(pole.len(), i);
            let e = e.add_scaled(-e.dot(p), p);
            e.add_scaled(-e.dot(&q), &q)
        })
        .fold(None::<AmbientVector>, |best, e| match best {
            Some(b) if b.norm() >= e.norm() => Some(b),
            _ => Some(e),
        })
        .expect("at least one basis vector");
    Ok((q, r.normalized()?))
}

fn transitivity(
    system: &System,
    config: &AnalysisConfig,
    probes: &mut Vec<ProbeSummary>,
    certificates: &mut Vec<SliceCertificate>,
) -> Result<Verdict> {
    let pole = system.pole();
    let len = pole.len();
    let domain = system.domain();
    if let System::Sphere(_) = system {
        if len == 2 {
            return circle_transitivity(pole, config);
        }
    }
    if system.is_one_dimensional() {
        // D¹: sampled probes between random intervals.
        let mut worst = 0;
        for i in 0..config.ball_pairs as u64 {
            let u = ball(domain, random_point(domain, len, config.seed, BALL_STREAMS + 2 * i), config.probe_radius)?;
            let v =
                ball(domain, random_point(domain, len, config.seed, BALL_STREAMS + 2 * i + 1), config.probe_radius)?;
            let summary = transitivity_probe(pole, &u, &v, config.horizon, config.probe_samples, config.seed)?;
            let hit = summary.first_hit;
            probes.push(summary);
            match hit {
                Some(k) => worst = worst.max(k),
                None => {
                    return Ok(Verdict {
                        holds: None,
                        basis: Basis::Probe,
                        note: format!("no hit within {} steps for pair {i}", config.horizon),
                    })
                }
            }
        }
        return Ok(Verdict {
            holds: Some(true),
            basis: Basis::Probe,
            note: format!("{} interval pairs, every probe hit, largest first hit {worst}", config.ball_pairs),
        });
    }
    if len < 3 {
        // The disk D² over S¹: orbits may start anywhere, but the same slice argument
        // does not apply, and no claim is made.
        return Ok(Verdict { holds: None, basis: Basis::Probe, note: "no test for this system".into() });
    }
    let (q, r) = orthogonal_pair(pole)?;
    let scale = match domain {
        Domain::Sphere => 1.0,
        Domain::Disk => 0.5,
    };
    let (q, r) = (q.scale(scale), r.scale(scale));
    let certificate = match domain {
        Domain::Sphere => {
            slice_confinement_certificate(pole, &SpherePoint::new(q.clone())?, &SpherePoint::new(r.clone())?, config.horizon)?
        }
        Domain::Disk => {
            disk_slice_confinement_certificate(pole, &DiskPoint::new(q.clone())?, &DiskPoint::new(r.clone())?, config.horizon)?
        }
    };
    let summary = transitivity_probe(
        pole,
        &ball(domain, q, config.probe_radius)?,
        &ball(domain, r, config.probe_radius)?,
        config.horizon,
        config.probe_samples,
        config.seed,
    )?;
    let hit = summary.first_hit;
    let certified = certificate.certified;
    let residual = certificate.max_residual;
    probes.push(summary);
    certificates.push(certificate);
    Ok(match (hit, certified) {
        (None, true) => Verdict {
            holds: Some(false),
            basis: Basis::Certificate,
            note: format!(
                "orbits from the ball around Q stay on their slices (residual {residual:e}) and never enter the ball \
                 around R within {} steps",
                config.horizon
            ),
        },
        (Some(k), _) => Verdict {
            holds: None,
            basis: Basis::Probe,
            note: format!("a sample entered V at step {k}; slice argument not confirmed"),
        },
        (None, false) => Verdict {
            holds: None,
            basis: Basis::Probe,
            note: "no hit within the horizon but the slice certificate failed".into(),
        },
    })
}

/// Exact arc arithmetic: arcs of the configured radius mix, so the circle map is transitive.
fn circle_transitivity(pole: &Pole, config: &AnalysisConfig) -> Result<Verdict> {
    let alpha = exact_alpha(pole)?;
    let mut worst = 0;
    for i in 0..config.ball_pairs as u64 {
        let u = ball(Domain::Sphere, random_point(Domain::Sphere, 2, config.seed, BALL_STREAMS + 2 * i), config.probe_radius)?;
        let v = ball(
            Domain::Sphere,
            random_point(Domain::Sphere, 2, config.seed, BALL_STREAMS + 2 * i + 1),
            config.probe_radius,
        )?;
        let verdict = mixing_probe(&alpha, &ExactArc::inside_ball(&u)?, &ExactArc::inside_ball(&v)?, config.horizon)?;
        match verdict.mixing_step {
            Some(k) => worst = worst.max(k),
            None => {
                return Ok(Verdict {
                    holds: None,
                    basis: Basis::Constructive,
                    note: format!("arc pair {i} does not mix within {} steps", config.horizon),
                })
            }
        }
    }
    Ok(Verdict {
        holds: Some(true),
        basis: Basis::Constructive,
        note: format!(
            "{} arc pairs of chord radius {} mix by exact arc images, largest mixing step {worst}",
            config.ball_pairs, config.probe_radius
        ),
    })
}

/// `α` as the exact dyadic rational of its f64 value, in turns.
fn exact_alpha(pole: &Pole) -> Result<Angle> {
    Ok(Angle::radians(circle_angle(pole.vector()))?.to_exact())
}

fn periodic_density(system: &System, period: usize) -> Result<Option<PeriodicDensity>> {
    if !system.is_one_dimensional() {
        return Ok(None);
    }
    let bound = TAU / ((1u64 << period) - 1) as f64;
    let (count, max_gap) = match system {
        System::Sphere(pole) => {
            let points = periodic_points_circle(&exact_alpha(pole)?, period)?;
            let gap = circular_max_gap(&points).and_then(|g| g.to_f64()).unwrap_or(1.0) * TAU;
            (points.len(), gap)
        }
        System::Disk(pole) => {
            let points = interval_periodic_points(pole, period)?;
            let ends = [-1.0, 1.0];
            let gap = points
                .windows(2)
                .map(|w| w[1] - w[0])
                .chain([points[0] - ends[0], ends[1] - points[points.len() - 1]])
                .fold(0.0, f64::max);
            (points.len(), gap)
        }
    };
    Ok(Some(PeriodicDensity { period, count, max_gap, bound, dense: max_gap <= bound * (1.0 + tol::FRESH) }))
}

/// Runs every check on `system` and classifies it.
///
/// Kato chaos needs sensitivity and accessibility. Devaney chaos additionally
/// needs transitivity and dense periodic points and is only considered for the
/// circle and the interval.
pub fn analyze(system: &System, config: &AnalysisConfig) -> Result<ChaosReport> {
    let mut witnesses = Vec::new();
    let mut probes = Vec::new();
    let mut certificates = Vec::new();
    let sensitive = sensitivity(system, config, &mut witnesses);
    let accessible = accessibility(system, config, &mut witnesses);
    let transitive =
        transitivity(system, config, &mut probes, &mut certificates).unwrap_or_else(|e| failed(&e));
    let periodic_density = periodic_density(system, config.period)?;

    let kato = sensitive.holds == Some(true) && accessible.holds == Some(true);
    let devaney = kato
        && system.is_one_dimensional()
        && transitive.holds == Some(true)
        && periodic_density.as_ref().is_some_and(|d| d.dense);
    let classification = if devaney {
        Classification::Devaney
    } else if kato {
        Classification::Kato
    } else if sensitive.holds == Some(false) || accessible.holds == Some(false) {
        Classification::Neither
    } else {
        Classification::Inconclusive
    };
    Ok(ChaosReport {
        system: system.clone(),
        config: config.clone(),
        sensitive,
        accessible,
        transitive,
        periodic_density,
        kato,
        classification,
        witnesses,
        probes,
        certificates,
    })
}
