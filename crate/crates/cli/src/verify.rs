use std::f64::consts::{LN_2, TAU};
use std::fs;
use std::io::Write;

use quadmap::chaos::{
    analyze, circular_max_gap, has_period, lyapunov_estimate, periodic_points_circle, AnalysisConfig, ChaosReport,
    LyapunovSystem, System,
};
use quadmap::curves::{builtin, f_p, midpoint_residual, plane_orthotomic, plane_pedal, sphere_orthotomic_from_pedal};
use quadmap::dynamics::{
    angle_step, chebyshev_projection, chebyshev_step, equivariance_conjugate, interval_conjugacy, preimage_disk,
    preimage_sphere, Angle,
};
use quadmap::sampling::{random_in_disk, random_rotation, random_unit, stream_rng};
use quadmap::{phi, tol, AmbientVector, Pole, SliceFrame, SpherePoint};
use num_rational::BigRational;
use rand::Rng;
use serde_json::json;

use crate::args::{usage, Common, Format, VerifyArgs};
use crate::commands::{emit, run_config};
use crate::output::{table, Report, VerdictRow};
use crate::CliError;

const SAMPLES: usize = 10_000;
const GRID: usize = 100_000;

fn row(name: &str, value: f64, threshold: f64, note: impl Into<String>) -> VerdictRow {
    VerdictRow { name: name.into(), passed: value <= threshold, value: Some(value), threshold: Some(threshold), note: note.into() }
}

fn flag(name: &str, passed: bool, note: impl Into<String>) -> VerdictRow {
    VerdictRow { name: name.into(), passed, value: None, threshold: None, note: note.into() }
}

fn invariant_rows(len: usize, seed: u64) -> Vec<VerdictRow> {
    let mut rows = Vec::new();

    let mut rng = stream_rng(seed, 1);
    let worst = (0..SAMPLES)
        .map(|_| {
            let p = Pole::new(random_unit(&mut rng, len));
            let x = random_unit(&mut rng, len);
            (phi(&p, x.vector()).expect("same length").norm() - 1.0).abs()
        })
        .fold(0.0, f64::max);
    rows.push(row("sphere invariance |‖Φ(x)‖ − 1|", worst, tol::FRESH, format!("{SAMPLES} random pairs")));

    let mut rng = stream_rng(seed, 2);
    let margin = (0..SAMPLES)
        .map(|_| {
            let p = Pole::new(random_unit(&mut rng, len));
            1.0 - phi(&p, &random_in_disk(&mut rng, len)).expect("same length").norm()
        })
        .fold(f64::INFINITY, f64::min);
    rows.push(VerdictRow {
        name: "disk invariance 1 − ‖Φ(x)‖".into(),
        passed: margin > 0.0,
        value: Some(margin),
        threshold: None,
        note: format!("smallest margin over {SAMPLES} random interior points"),
    });

    let mut rng = stream_rng(seed, 3);
    let worst = (0..SAMPLES)
        .map(|i| {
            let p = Pole::new(random_unit(&mut rng, len));
            // every hundredth target is −P, the branch with a whole sphere of preimages
            let y = if i % 100 == 0 { p.point().neg() } else { random_unit(&mut rng, len) };
            let x = preimage_sphere(&p, &y).expect("n ≥ 1");
            phi(&p, x.vector()).expect("same length").distance(y.vector())
        })
        .fold(0.0, f64::max);
    rows.push(row("sphere preimage round trip", worst, tol::ROUND_TRIP, "including y = −P"));

    let mut rng = stream_rng(seed, 4);
    let worst = (0..SAMPLES)
        .map(|i| {
            let p = Pole::new(random_unit(&mut rng, len));
            // −P is on the boundary; every hundredth target approaches it from inside
            let y = if i % 100 == 0 {
                p.vector().scale(-(1.0 - 1e-6))
            } else {
                random_in_disk(&mut rng, len).scale(1.0 - 1e-6)
            };
            let x = preimage_disk(&p, &y).expect("interior target");
            phi(&p, &x).expect("same length").distance(&y)
        })
        .fold(0.0, f64::max);
    rows.push(row("disk preimage round trip", worst, tol::ROUND_TRIP, "including targets near −P"));

    let worst = [1.0, -1.0]
        .iter()
        .flat_map(|&s| {
            let pole = Pole::from_coords(vec![s]).expect("unit");
            (0..=GRID).map(move |i| {
                let x = i as f64 / GRID as f64;
                (interval_conjugacy(&pole, x).expect("in [0, 1]") - 4.0 * x * (1.0 - x)).abs()
            })
        })
        .fold(0.0, f64::max);
    rows.push(row("logistic conjugacy", worst, tol::FRESH, "P = ±1 on a 1e5-point grid"));

    let mut rng = stream_rng(seed, 5);
    let mut chebyshev = 0.0f64;
    let mut closure = 0.0f64;
    for i in 0..SAMPLES {
        let p = Pole::new(random_unit(&mut rng, len));
        let x = if i % 2 == 0 { random_unit(&mut rng, len).into_vector() } else { random_in_disk(&mut rng, len) };
        let y = phi(&p, &x).expect("same length");
        let t = chebyshev_projection(&p, &x).expect("same length");
        chebyshev = chebyshev.max((chebyshev_projection(&p, &y).expect("same length") - chebyshev_step(t)).abs());
        if let Ok(frame) = SliceFrame::through(p.point(), &x) {
            closure = closure.max(frame.residual(&y));
        }
    }
    rows.push(row("chebyshev factor", chebyshev, tol::FRESH, "(Φ(x)·P) vs 2(x·P)² − 1"));
    rows.push(row("slice closure", closure, tol::FRESH, "residual of Φ(x) against span(P, x)"));

    let mut rng = stream_rng(seed, 6);
    let worst = (0..SAMPLES)
        .map(|_| {
            let r = random_rotation(&mut rng, len);
            let p = Pole::new(random_unit(&mut rng, len));
            let x = random_unit(&mut rng, len);
            let (a, b) = equivariance_conjugate(&r, &p, x.vector()).expect("same length");
            a.max_abs_diff(&b)
        })
        .fold(0.0, f64::max);
    rows.push(row("rotation equivariance", worst, tol::FRESH, "random rotations"));

    rows
}

fn circle_rows(seed: u64) -> Vec<VerdictRow> {
    let mut rows = Vec::new();

    // one step of the ambient map from slice_embed(θ) against slice_embed(2θ − α),
    // along 50-step angle orbits
    let mut rng = stream_rng(seed, 7);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let alpha = Angle::radians(TAU * rng.gen::<f64>()).expect("finite");
        let mut theta = Angle::radians(TAU * rng.gen::<f64>()).expect("finite");
        let pole = Pole::from_angle(alpha.to_radians());
        let w = AmbientVector::new(vec![-alpha.to_radians().sin(), alpha.to_radians().cos()]).expect("finite");
        let frame = SliceFrame::new(pole.point().clone(), SpherePoint::normalize(&w).expect("unit")).expect("orthonormal");
        for _ in 0..50 {
            let x = AmbientVector::new(vec![theta.to_radians().cos(), theta.to_radians().sin()]).expect("finite");
            let image = phi(&pole, &x).expect("same length");
            let image = image.scale(1.0 / image.norm());
            theta = angle_step(&alpha, &theta).expect("float angles");
            let expected = frame.embed(theta.to_radians() - alpha.to_radians());
            worst = worst.max(image.distance(expected.vector()));
        }
    }
    rows.push(row("angle reduction", worst, tol::FRESH, "1000 random (α, θ), 50 steps each"));

    let alpha = Angle::turns(1, 3).expect("non-zero denominator");
    let mut ok = true;
    let mut note = String::new();
    for k in 1..=12 {
        let points = periodic_points_circle(&alpha, k).expect("exact α");
        let gap = circular_max_gap(&points).expect("non-empty");
        let count_ok = points.len() == (1 << k) - 1;
        let gap_ok = gap == BigRational::new(1.into(), ((1i64 << k) - 1).into());
        let return_ok = points.iter().all(|p| has_period(&alpha, p, k).expect("exact"));
        if !(count_ok && gap_ok && return_ok) {
            ok = false;
            note = format!("k = {k}: count {}, gap {gap}, returns {return_ok}", points.len());
        }
    }
    if ok {
        note = "k = 1..12: 2^k − 1 exact k-periodic angles, max gap 1/(2^k − 1) turn".into();
    }
    rows.push(flag("exact periodic points", ok, note));

    let system = LyapunovSystem::Circle {
        alpha: Angle::radians(0.3).expect("finite"),
        theta0: Angle::radians(1.1).expect("finite"),
    };
    let estimate = lyapunov_estimate(&system, 10_000).expect("long enough");
    rows.push(row("circle lyapunov exponent", (estimate - LN_2).abs(), tol::FRESH, "|estimate − ln 2|"));

    rows
}

fn curve_rows(len: usize) -> Vec<VerdictRow> {
    let mut rows = Vec::new();
    let mut worst = 0.0f64;
    for p in [[0.0, 0.0], [0.3, -0.7], [1.5, 2.0]] {
        for samples in [builtin::unit_circle(1000), builtin::line(1000)] {
            for (q, o) in plane_pedal(&samples, p).iter().zip(plane_orthotomic(&samples, p)) {
                let f = f_p(*q, p);
                worst = worst.max((o[0] - f[0]).hypot(o[1] - f[1]));
            }
        }
    }
    rows.push(row("plane orthotomic = 2·pedal − P", worst, tol::FRESH, "unit circle and line, 1000 samples"));

    if len >= 3 {
        let pole = Pole::new(SpherePoint::basis(len, 0));
        let mut worst = 0.0f64;
        for beta in [0.2, 0.7, 1.3] {
            let samples =
                builtin::small_circle(pole.point(), &SpherePoint::basis(len, 1), &SpherePoint::basis(len, 2), beta, 1000)
                    .expect("orthonormal frame");
            let ort = sphere_orthotomic_from_pedal(&samples, &pole).expect("not degenerate");
            for (c, o) in samples.iter().zip(&ort) {
                let direct = phi(&pole, c.pedal.vector()).expect("same length");
                worst = worst
                    .max(o.vector().distance(&direct))
                    .max(midpoint_residual(&pole, &c.pedal, o))
                    .max((o.vector().norm() - 1.0).abs());
            }
        }
        rows.push(row("sphere orthotomic = Φ(pedal)", worst, tol::FRESH, "small circles, midpoint identity"));
    }
    rows
}

fn chaos_rows(label: &str, report: &ChaosReport, rows: &mut Vec<VerdictRow>) {
    let one_dim = report.system.is_one_dimensional();
    let len = report.system.pole().len();
    rows.push(flag(&format!("{label}: sensitive"), report.sensitive.holds == Some(true), &report.sensitive.note));
    rows.push(flag(&format!("{label}: accessible"), report.accessible.holds == Some(true), &report.accessible.note));
    let expected = if one_dim {
        Some(true)
    } else if len >= 3 {
        Some(false)
    } else {
        None
    };
    if expected.is_some() {
        let t = &report.transitive;
        let shown = match t.holds {
            Some(true) => "transitive",
            Some(false) => "not transitive",
            None => "undecided",
        };
        rows.push(flag(&format!("{label}: transitivity"), t.holds == expected, format!("{shown}: {}", t.note)));
    }
    if let Some(d) = &report.periodic_density {
        rows.push(row(
            &format!("{label}: periodic gap (k = {})", d.period),
            d.max_gap,
            d.bound * (1.0 + tol::FRESH),
            format!("{} periodic points", d.count),
        ));
    }
    let expected = if one_dim { "devaney" } else { "kato" };
    let got = serde_json::to_value(report.classification).expect("serializes");
    rows.push(flag(
        &format!("{label}: classification"),
        got == json!(expected) && report.kato,
        format!("{} (kato: {})", got.as_str().unwrap_or("?"), report.kato),
    ));
}

pub fn analysis_config(seed: u64) -> AnalysisConfig {
    AnalysisConfig { seed, probe_samples: 32, ..AnalysisConfig::default() }
}

pub fn verify_cmd(a: &VerifyArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let common: &Common = &a.common;
    let pole = common.pole()?;
    let len = pole.len();
    if len < 2 {
        return Err(usage("--dim", "verify needs n ≥ 1"));
    }
    let seed = common.seed;
    let mut rows = invariant_rows(len, seed);
    rows.extend(circle_rows(seed));
    rows.extend(curve_rows(len));

    let config = analysis_config(seed);
    let sphere = analyze(&System::Sphere(pole.clone()), &config)?;
    let disk = analyze(&System::Disk(pole.clone()), &config)?;
    chaos_rows(&format!("S^{}", len - 1), &sphere, &mut rows);
    chaos_rows(&format!("D^{len}"), &disk, &mut rows);
    // The interval D¹ is only reachable from n = 0; check it alongside the circle.
    if len == 2 {
        let interval = analyze(&System::Disk(Pole::from_coords(vec![1.0]).expect("unit")), &config)?;
        chaos_rows("D^1", &interval, &mut rows);
    }

    let witnesses = sphere.witnesses.iter().chain(&disk.witnesses).cloned().collect();
    let report = Report {
        config: run_config(
            common,
            "verify",
            &pole,
            "sphere+disk",
            Some(config.horizon),
            [("analysis".to_string(), serde_json::to_value(&config)?)].into_iter().collect(),
        ),
        verdicts: rows,
        witnesses,
        seed,
    };
    let text = match common.format {
        Some(Format::Json) => report.to_json(),
        _ => table(&report.verdicts),
    };
    emit(common, &text, stdout)?;
    if let Some(path) = &a.report {
        fs::write(path, report.to_json())?;
    }
    let failed: Vec<&str> = report.verdicts.iter().filter(|r| !r.passed).map(|r| r.name.as_str()).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Invariant(failed.join("; ")))
    }
}
