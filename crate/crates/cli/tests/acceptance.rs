//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.
//!
//! The library produces the values; the checks recompute them here with plain
//! `f64` arrays and exact rationals so a shared bug cannot hide.

use std::f64::consts::{LN_2, TAU};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use num_rational::BigRational;
use num_traits::{One, Zero};
use quadmap::chaos::{
    accessibility_witness, lyapunov_estimate, periodic_points_circle, sensitivity_witness, transitivity_probe,
    Claim, LyapunovSystem, OpenBall,
};
use quadmap::curves::{builtin, f_p, plane_orthotomic, plane_pedal, sphere_orthotomic_from_pedal};
use quadmap::dynamics::{angle_step, interval_conjugacy, preimage_disk, preimage_sphere};
use quadmap::geometry::slice_embed;
use quadmap::{iterate, phi, AmbientVector, Angle, Pole, Renormalize, SliceFrame, SpherePoint};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

type Outcome = Result<String, String>;

fn rng(stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(0x5eed_acce);
    r.set_stream(stream);
    r
}

fn gaussian_unit(r: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..len).map(|_| r.sample(StandardNormal)).collect();
        let n = norm(&v);
        if n > 1e-3 {
            return v.iter().map(|c| c / n).collect();
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// `2(x·p)x − p` written out by hand.
fn map(p: &[f64], x: &[f64]) -> Vec<f64> {
    let t = 2.0 * dot(x, p);
    x.iter().zip(p).map(|(xi, pi)| t * xi - pi).collect()
}

/// Distance of `y` from `span(a, b)`.
fn plane_residual(a: &[f64], b: &[f64], y: &[f64]) -> f64 {
    let na = norm(a);
    let e1: Vec<f64> = a.iter().map(|c| c / na).collect();
    let b_perp: Vec<f64> = b.iter().zip(&e1).map(|(bi, ei)| bi - dot(b, &e1) * ei).collect();
    let nb = norm(&b_perp);
    let e2: Vec<f64> = b_perp.iter().map(|c| c / nb).collect();
    let (s, t) = (dot(y, &e1), dot(y, &e2));
    let r: Vec<f64> = y.iter().zip(e1.iter().zip(&e2)).map(|(yi, (u, v))| yi - s * u - t * v).collect();
    norm(&r)
}

/// Distance from `r` to the great circle `S² ∩ span(a, b)`.
fn circle_distance(a: &[f64], b: &[f64], r: &[f64]) -> f64 {
    let h = plane_residual(a, b, r);
    let in_plane = (1.0 - h * h).max(0.0).sqrt();
    (h * h + (1.0 - in_plane) * (1.0 - in_plane)).sqrt()
}

fn sphere(v: Vec<f64>) -> SpherePoint {
    SpherePoint::normalize(&AmbientVector::new(v).unwrap()).unwrap()
}

fn pole(v: Vec<f64>) -> Pole {
    Pole::new(sphere(v))
}

fn within(label: &str, worst: f64, limit: f64) -> Outcome {
    if worst <= limit {
        Ok(format!("{label} {worst:.2e} ≤ {limit:.0e}"))
    } else {
        Err(format!("{label} {worst:.2e} > {limit:.0e}"))
    }
}

fn invariance() -> Outcome {
    let mut worst = 0.0f64;
    for n in 1..=6 {
        let mut r = rng(100 + n as u64);
        for _ in 0..10_000 {
            let p = gaussian_unit(&mut r, n + 1);
            let x = gaussian_unit(&mut r, n + 1);
            let y = phi(&pole(p.clone()), &AmbientVector::new(x).unwrap()).unwrap();
            worst = worst.max((norm(y.coords()) - 1.0).abs());
        }
    }
    within("n = 1..6, 10⁴ pairs each: max |‖Φ(x)‖ − 1|", worst, 1e-12)
}

fn round_trips() -> Outcome {
    let mut r = rng(200);
    let (mut sphere_worst, mut disk_worst) = (0.0f64, 0.0f64);
    for i in 0..10_000 {
        let len = 2 + i % 5;
        let p = gaussian_unit(&mut r, len);
        let pl = pole(p.clone());
        let y: Vec<f64> = if i % 50 == 0 { p.iter().map(|c| -c).collect() } else { gaussian_unit(&mut r, len) };
        let x = preimage_sphere(&pl, &sphere(y.clone())).map_err(|e| e.to_string())?;
        sphere_worst = sphere_worst.max(dist(&map(&p, x.vector().coords()), &y));

        // −P itself is on the boundary; its branch is approached from inside.
        let y: Vec<f64> = if i % 50 == 0 {
            p.iter().map(|c| -(1.0 - 1e-6) * c).collect()
        } else {
            let radius: f64 = r.gen::<f64>().powf(1.0 / len as f64) * (1.0 - 1e-6);
            gaussian_unit(&mut r, len).iter().map(|c| c * radius).collect()
        };
        let x = preimage_disk(&pl, &AmbientVector::new(y.clone()).unwrap()).map_err(|e| e.to_string())?;
        disk_worst = disk_worst.max(dist(&map(&p, x.coords()), &y));
    }
    let worst = sphere_worst.max(disk_worst);
    within(&format!("sphere {sphere_worst:.1e}, disk {disk_worst:.1e}; max"), worst, 1e-10)
}

fn logistic_conjugacy() -> Outcome {
    const GRID: usize = 100_000;
    let mut worst = 0.0f64;
    for s in [1.0, -1.0] {
        let pl = pole(vec![s]);
        for i in 0..=GRID {
            let x = i as f64 / GRID as f64;
            let got = interval_conjugacy(&pl, x).map_err(|e| e.to_string())?;
            worst = worst.max((got - 4.0 * x * (1.0 - x)).abs());
        }
    }
    within("P = ±1, 10⁵-point grid: max error", worst, 1e-12)
}

fn angle_reduction() -> Outcome {
    // Float orbits of a doubling map lose a bit per step, so whole orbits cannot
    // agree to 1e-12; each step is compared from the same start instead.
    let mut r = rng(400);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let a = TAU * r.gen::<f64>();
        let alpha = Angle::radians(a).unwrap();
        let mut theta = Angle::radians(TAU * r.gen::<f64>()).unwrap();
        let pl = Pole::from_angle(a);
        let frame = SliceFrame::new(pl.point().clone(), sphere(vec![-a.sin(), a.cos()])).unwrap();
        for _ in 0..50 {
            let t = theta.to_radians();
            let x = AmbientVector::new(vec![t.cos(), t.sin()]).unwrap();
            let ambient = iterate(&pl, &x, 1, Renormalize::EveryStep).unwrap().last().clone();
            theta = angle_step(&alpha, &theta).unwrap();
            let embedded = slice_embed(&frame, theta.to_radians() - a);
            let oracle = [(2.0 * t - a).cos(), (2.0 * t - a).sin()];
            worst = worst
                .max(dist(ambient.coords(), embedded.vector().coords()))
                .max(dist(ambient.coords(), &oracle));
        }
    }
    within("10³ (α, θ) × 50 steps: max per-step gap", worst, 1e-12)
}

fn periodic_points() -> Outcome {
    let two = BigRational::from_integer(2.into());
    let alpha_turns = BigRational::new(1.into(), 3.into());
    let alpha = Angle::from_turns(alpha_turns.clone());
    let reduce = |q: BigRational| {
        let f = q.floor();
        q - f
    };
    for k in 1..=12u32 {
        let points = periodic_points_circle(&alpha, k as usize).map_err(|e| e.to_string())?;
        let expected = (1u64 << k) - 1;
        if points.len() as u64 != expected {
            return Err(format!("k = {k}: {} points, expected {expected}", points.len()));
        }
        let mut turns: Vec<BigRational> = Vec::with_capacity(points.len());
        for p in &points {
            let t0 = p.as_turns().ok_or("float angle")?.clone();
            let mut t = t0.clone();
            let mut first_return = None;
            for step in 1..=k {
                t = reduce(&two * &t - &alpha_turns);
                if t == t0 && first_return.is_none() {
                    first_return = Some(step);
                }
            }
            // the least period must divide k
            if first_return.is_none_or(|m| k % m != 0) || t != t0 {
                return Err(format!("k = {k}: {t0} does not return"));
            }
            turns.push(t0);
        }
        turns.sort();
        turns.dedup();
        if turns.len() as u64 != expected {
            return Err(format!("k = {k}: duplicate angles"));
        }
        let wrap = turns[0].clone() + BigRational::one() - turns.last().unwrap();
        let gap = turns.windows(2).map(|w| &w[1] - &w[0]).fold(wrap, |a, b| if b > a { b } else { a });
        if gap != BigRational::new(1.into(), expected.into()) {
            return Err(format!("k = {k}: max gap {gap} turn"));
        }
        if gap.is_zero() {
            return Err("zero gap".into());
        }
    }
    Ok("k = 1..12: 2^k − 1 exact k-periodic angles, max gap exactly 1/(2^k − 1) turn".into())
}

fn sensitivity() -> Outcome {
    let (delta, lambda) = (1e-6, 1.0);
    let mut r = rng(600);
    let mut max_k = 0;
    let mut count = 0;
    for len in [2, 3] {
        let p = gaussian_unit(&mut r, len);
        let pl = pole(p.clone());
        for i in 0..200 {
            let x = if i == 0 { p.clone() } else { gaussian_unit(&mut r, len) };
            let w = sensitivity_witness(&pl, &sphere(x), delta, lambda, 64).map_err(|e| e.to_string())?;
            w.replay().map_err(|e| e.to_string())?;
            let [a, b] = &w.points;
            let (mut a, mut b) = (a.coords().to_vec(), b.coords().to_vec());
            if dist(&a, &b) > delta {
                return Err(format!("start points {} apart", dist(&a, &b)));
            }
            if len == 3 && plane_residual(&p, &a, &b) > 1e-12 {
                return Err("partner is off the slice".into());
            }
            for _ in 0..w.step {
                a = map(&p, &a);
                b = map(&p, &b);
                let (na, nb) = (norm(&a), norm(&b));
                a.iter_mut().for_each(|c| *c /= na);
                b.iter_mut().for_each(|c| *c /= nb);
            }
            if dist(&a, &b) <= lambda {
                return Err(format!("oracle separation {} after {} steps", dist(&a, &b), w.step));
            }
            max_k = max_k.max(w.step);
            count += 1;
        }
    }
    if max_k <= 25 {
        Ok(format!("{count} base points on S¹ and S²: all replay, max k = {max_k} ≤ 25"))
    } else {
        Err(format!("max k = {max_k} > 25"))
    }
}

fn accessibility() -> Outcome {
    let radius = 0.1;
    let mut r = rng(700);
    let (mut max_k, mut worst) = (0, 0.0f64);
    for len in [2, 3] {
        for _ in 0..100 {
            let p = gaussian_unit(&mut r, len);
            let (cu, cv) = (gaussian_unit(&mut r, len), gaussian_unit(&mut r, len));
            let u_ball = OpenBall::on_sphere(sphere(cu.clone()), radius).unwrap();
            let v_ball = OpenBall::on_sphere(sphere(cv.clone()), radius).unwrap();
            let w = accessibility_witness(&pole(p.clone()), &u_ball, &v_ball, 1e-10).map_err(|e| e.to_string())?;
            w.replay().map_err(|e| e.to_string())?;
            if !matches!(w.claim, Claim::Accessible { .. }) {
                return Err("wrong claim".into());
            }
            let [u, v] = &w.points;
            let (mut u, mut v) = (u.coords().to_vec(), v.coords().to_vec());
            if dist(&u, &cu) >= radius || dist(&v, &cv) >= radius {
                return Err("witness point outside its ball".into());
            }
            for _ in 0..w.step {
                u = map(&p, &u);
                v = map(&p, &v);
            }
            worst = worst.max(dist(&u, &v));
            max_k = max_k.max(w.step);
        }
    }
    if worst <= 1e-10 && max_k <= 10 {
        Ok(format!("100 placements on S¹ and S²: max separation {worst:.1e}, max k = {max_k}"))
    } else {
        Err(format!("max separation {worst:.1e}, max k = {max_k}"))
    }
}

fn non_transitivity() -> Outcome {
    let radius = 0.05;
    let mut r = rng(800);
    let (mut triples, mut rejected, mut worst, mut closest) = (0, 0, 0.0f64, f64::INFINITY);
    while triples < 10 {
        let p = gaussian_unit(&mut r, 3);
        let q = gaussian_unit(&mut r, 3);
        let rr = gaussian_unit(&mut r, 3);
        let starts: Vec<Vec<f64>> = (0..16)
            .map(|_| loop {
                let s: Vec<f64> = q.iter().map(|c| c + radius * r.gen::<f64>() * r.sample::<f64, _>(StandardNormal)).collect();
                let n = norm(&s);
                let s: Vec<f64> = s.iter().map(|c| c / n).collect();
                if dist(&s, &q) < radius {
                    break s;
                }
            })
            .collect();
        // Keep triples whose R-ball is clear of every start point's great circle.
        if dot(&p, &q).abs() > 0.9 || starts.iter().any(|s| circle_distance(&p, s, &rr) < 2.0 * radius) {
            rejected += 1;
            continue;
        }
        triples += 1;
        let pl = pole(p.clone());
        for s in &starts {
            let orbit = iterate(&pl, &AmbientVector::new(s.clone()).unwrap(), 10_000, Renormalize::EveryStep).unwrap();
            for y in orbit.points() {
                worst = worst.max(plane_residual(&p, s, y.coords()));
                closest = closest.min(dist(y.coords(), &rr));
            }
        }
    }
    let sphere_ok = worst <= 1e-9 && closest >= radius;

    // Contrast on the circle. Exact arc widths say the image of a 0.05-ball covers
    // the circle once 2^k·4·asin(0.025) ≥ 2π.
    let cover = (0..).find(|k| 2f64.powi(*k) * 4.0 * (radius / 2.0).asin() >= TAU).unwrap();
    let mut latest = 0;
    for i in 0..100 {
        let p = gaussian_unit(&mut r, 2);
        let u = OpenBall::on_sphere(sphere(gaussian_unit(&mut r, 2)), radius).unwrap();
        let v = OpenBall::on_sphere(sphere(gaussian_unit(&mut r, 2)), radius).unwrap();
        let probe = transitivity_probe(&pole(p), &u, &v, 8, 256, 1000 + i).map_err(|e| e.to_string())?;
        match probe.first_hit {
            Some(k) => latest = latest.max(k),
            None => return Err(format!("S¹ placement {i}: no hit within 8 steps")),
        }
    }
    let summary = format!(
        "S²: {triples} triples ({rejected} rejected) × 16 starts, residual {worst:.1e}, closest approach {closest:.3}; \
         S¹: 100 arc pairs hit by k = {latest} (cover bound {cover})"
    );
    if sphere_ok {
        Ok(summary)
    } else {
        Err(summary)
    }
}

fn lyapunov() -> Outcome {
    let circle = LyapunovSystem::Circle { alpha: Angle::radians(0.4).unwrap(), theta0: Angle::radians(2.3).unwrap() };
    let circle_err = (lyapunov_estimate(&circle, 100_000).map_err(|e| e.to_string())? - LN_2).abs();
    if circle_err > 1e-12 {
        return Err(format!("circle error {circle_err:.1e}"));
    }
    let mut r = rng(900);
    let mut worst = 0.0f64;
    for i in 0..10 {
        let s = if i % 2 == 0 { 1.0 } else { -1.0 };
        let x0 = r.gen_range(0.01..0.99);
        let est = lyapunov_estimate(&LyapunovSystem::Logistic { pole: pole(vec![s]), x0 }, 1_000_000)
            .map_err(|e| e.to_string())?;
        worst = worst.max((est - LN_2).abs());
    }
    let text = format!("circle error {circle_err:.1e}; logistic k = 10⁶, 10 seeds: max error {worst:.1e}");
    if worst <= 5e-3 {
        Ok(text)
    } else {
        Err(text)
    }
}

fn curves() -> Outcome {
    let mut plane = 0.0f64;
    for p in [[0.0, 0.0], [0.4, -0.3], [2.0, 1.5]] {
        for samples in [builtin::unit_circle(1000), builtin::line(1000)] {
            let ped = plane_pedal(&samples, p);
            let ort = plane_orthotomic(&samples, p);
            for ((c, q), o) in samples.iter().zip(&ped).zip(&ort) {
                // foot of the perpendicular from p to the tangent line
                let (x, nrm) = (c.position(), c.normal());
                let h = (x[0] - p[0]) * nrm[0] + (x[1] - p[1]) * nrm[1];
                let foot = [p[0] + h * nrm[0], p[1] + h * nrm[1]];
                let f = f_p(*q, p);
                plane = plane.max(dist(o, &f)).max(dist(q, &foot)).max(dist(o, &[2.0 * foot[0] - p[0], 2.0 * foot[1] - p[1]]));
            }
        }
    }
    let mut sphere_worst = 0.0f64;
    for len in [3, 4] {
        let pl = Pole::new(SpherePoint::basis(len, 0));
        let p = pl.vector().coords().to_vec();
        for beta in [0.3, 0.8, 1.2] {
            let samples = builtin::small_circle(pl.point(), &SpherePoint::basis(len, 1), &SpherePoint::basis(len, 2), beta, 1000)
                .map_err(|e| e.to_string())?;
            let ort = sphere_orthotomic_from_pedal(&samples, &pl).map_err(|e| e.to_string())?;
            for (c, o) in samples.iter().zip(&ort) {
                let ped = c.pedal.vector().coords();
                let o = o.vector().coords();
                let t = dot(&p, ped);
                let mid: Vec<f64> = o.iter().zip(&p).map(|(a, b)| (a + b) / 2.0).collect();
                let scaled: Vec<f64> = ped.iter().map(|c| t * c).collect();
                sphere_worst = sphere_worst.max(dist(o, &map(&p, ped))).max(dist(&mid, &scaled));
            }
        }
    }
    within(&format!("plane {plane:.1e}, sphere {sphere_worst:.1e}; max"), plane.max(sphere_worst), 1e-12)
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let run = |name: &str| -> Result<(Vec<u8>, Vec<u8>), String> {
        let path = dir.path().join(name);
        let out = Command::new(env!("CARGO_BIN_EXE_quadmap"))
            .args(["verify", "--seed", "42", "--report"])
            .arg(&path)
            .env_remove("QUADMAP_SEED")
            .output()
            .map_err(|e| e.to_string())?;
        if !out.status.success() {
            return Err(format!("verify exited with {}", out.status));
        }
        Ok((out.stdout, std::fs::read(&path).map_err(|e| e.to_string())?))
    };
    let (out_a, report_a) = run("a.json")?;
    let (out_b, report_b) = run("b.json")?;
    if report_a == report_b && out_a == out_b {
        Ok(format!("two runs: identical {}-byte reports and tables", report_a.len()))
    } else {
        Err("reports differ between runs".into())
    }
}

struct Criterion {
    name: &'static str,
    check: fn() -> Outcome,
    budget: Option<Duration>,
}

fn main() -> ExitCode {
    let criteria = [
        Criterion { name: "sphere invariance", check: invariance, budget: Some(Duration::from_secs(1)) },
        Criterion { name: "preimage round trips", check: round_trips, budget: Some(Duration::from_secs(1)) },
        Criterion { name: "logistic conjugacy", check: logistic_conjugacy, budget: None },
        Criterion { name: "angle reduction", check: angle_reduction, budget: None },
        Criterion { name: "periodic density", check: periodic_points, budget: Some(Duration::from_secs(1)) },
        Criterion { name: "sensitivity", check: sensitivity, budget: None },
        Criterion { name: "accessibility", check: accessibility, budget: None },
        Criterion { name: "non-transitivity", check: non_transitivity, budget: None },
        Criterion { name: "lyapunov exponents", check: lyapunov, budget: Some(Duration::from_secs(5)) },
        Criterion { name: "curve identities", check: curves, budget: None },
        Criterion { name: "determinism", check: determinism, budget: None },
    ];
    let mut failed = 0;
    for (i, c) in criteria.iter().enumerate() {
        let start = Instant::now();
        let mut outcome = (c.check)();
        let elapsed = start.elapsed();
        if let (Ok(text), Some(budget)) = (&outcome, c.budget) {
            if elapsed > budget {
                outcome = Err(format!("{text}; took {elapsed:.2?}, budget {budget:?}"));
            }
        }
        let (status, text) = match &outcome {
            Ok(t) => ("PASS", t),
            Err(t) => {
                failed += 1;
                ("FAIL", t)
            }
        };
        println!("{status} {:>2} {:<22} {text} [{elapsed:.2?}]", i + 1, c.name);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
