use std::collections::BTreeMap;
use std::fs;
use std::io::Write;

use quadmap::chaos::{
    accessibility_witness, circular_max_gap, disk_sensitivity_witness, disk_slice_confinement_certificate,
    lyapunov_estimate, mixing_probe, periodic_points_circle, sensitivity_witness, slice_confinement_certificate,
    transitivity_probe, ExactArc, LyapunovSystem, OpenBall, SliceCertificate, Witness,
};
use quadmap::curves::{
    builtin, midpoint_residual, plane_orthotomic, plane_pedal, sphere_orthotomic_from_pedal, PlaneCurveSample,
    SphereCurveSample,
};
use quadmap::dynamics::{angle_orbit, preimage_disk, preimage_sphere, Angle};
use quadmap::geometry::default_orthogonal;
use quadmap::sampling::{random_in_disk, random_unit, stream_rng};
use quadmap::{iterate, phi, AmbientVector, DiskPoint, Pole, Renormalize, SliceFrame, SpherePoint};
use serde_json::{json, Value};

use crate::args::*;
use crate::output::{float, orbit_csv, Report, RunConfig, Svg, Tolerances, VerdictRow};
use crate::CliError;

pub(crate) fn emit(common: &Common, text: &str, stdout: &mut dyn Write) -> Result<(), CliError> {
    match &common.out {
        Some(path) => fs::write(path, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

pub(crate) fn run_config(
    common: &Common,
    command: &str,
    pole: &Pole,
    mode: &str,
    horizon: Option<usize>,
    params: BTreeMap<String, Value>,
) -> RunConfig {
    RunConfig {
        command: command.into(),
        dim: pole.sphere_dim(),
        pole: pole.vector().coords().to_vec(),
        mode: mode.into(),
        seed: common.seed,
        horizon,
        tolerances: Tolerances::default(),
        params,
    }
}

fn mode(space: Space) -> &'static str {
    match space {
        Space::Sphere => "sphere",
        Space::Disk => "disk",
    }
}

fn params(pairs: &[(&str, Value)]) -> BTreeMap<String, Value> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

fn check_len(flag: &str, v: &AmbientVector, pole: &Pole) -> Result<(), CliError> {
    if v.len() != pole.len() {
        return Err(usage(flag, format!("has {} coordinates but P has {}", v.len(), pole.len())));
    }
    Ok(())
}

/// A point of the configured state space.
fn state_point(flag: &str, v: AmbientVector, pole: &Pole, space: Space) -> Result<AmbientVector, CliError> {
    check_len(flag, &v, pole)?;
    match space {
        Space::Sphere => Ok(SpherePoint::new(v).map_err(|e| usage(flag, e))?.into_vector()),
        Space::Disk => Ok(DiskPoint::new(v).map_err(|e| usage(flag, e))?.into_vector()),
    }
}

fn ball(flag: &str, text: &str, pole: &Pole, space: Space) -> Result<OpenBall, CliError> {
    let (center, radius) = parse_ball(flag, text)?;
    let center = state_point(flag, center, pole, space)?;
    let domain = match space {
        Space::Sphere => quadmap::chaos::Domain::Sphere,
        Space::Disk => quadmap::chaos::Domain::Disk,
    };
    OpenBall::new(center, radius, domain).map_err(|e| usage(flag, e))
}

fn witness_report(common: &Common, command: &str, pole: &Pole, extra: &[(&str, Value)], w: Witness) -> Report {
    let verdict = match w.replay() {
        Ok(sep) => VerdictRow {
            name: format!("{command} witness replays"),
            passed: true,
            value: Some(sep),
            threshold: None,
            note: format!("k = {}", w.step),
        },
        Err(e) => VerdictRow {
            name: format!("{command} witness replays"),
            passed: false,
            value: None,
            threshold: None,
            note: e.to_string(),
        },
    };
    Report {
        config: run_config(common, command, pole, mode(common.space), None, params(extra)),
        verdicts: vec![verdict],
        witnesses: vec![w],
        seed: common.seed,
    }
}

fn finish_report(common: &Common, report: &Report, stdout: &mut dyn Write) -> Result<(), CliError> {
    emit(common, &report.to_json(), stdout)?;
    match report.verdicts.iter().find(|v| !v.passed) {
        Some(v) => Err(CliError::Invariant(format!("{}: {}", v.name, v.note))),
        None => Ok(()),
    }
}

pub fn iterate_cmd(a: &IterateArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let common = &a.common;
    let format = common.format.unwrap_or(Format::Csv);
    let (pole, points, drift, residual, thetas) = if a.exact {
        let alpha = common.alpha(true)?;
        let text = a.theta.as_deref().ok_or_else(|| usage("--theta", "exact mode iterates an angle: give --theta p/q"))?;
        let theta = parse_angle("--theta", text, true)?;
        let angles = angle_orbit(&alpha, &theta, a.steps)?;
        let pole = Pole::from_angle(alpha.to_radians());
        let points: Vec<AmbientVector> = angles
            .iter()
            .map(|t| {
                let r = t.to_radians();
                AmbientVector::new(vec![r.cos(), r.sin()]).expect("finite")
            })
            .collect();
        let frame = SliceFrame::through(pole.point(), &points[0])?;
        let drift = points.iter().map(|p| (p.norm() - 1.0).abs()).collect();
        let residual = points.iter().map(|p| frame.residual(p)).collect();
        (pole, points, drift, residual, Some(angles.iter().map(Angle::to_string).collect::<Vec<_>>()))
    } else {
        let pole = common.pole()?;
        let x0 = match (&a.x0, &a.theta) {
            (Some(text), None) => parse_vector("--x0", text)?,
            (None, Some(text)) => {
                if pole.len() != 2 {
                    return Err(usage("--theta", "start angles need a pole on the circle"));
                }
                let r = parse_angle("--theta", text, false)?.to_radians();
                AmbientVector::new(vec![r.cos(), r.sin()]).expect("finite")
            }
            (Some(_), Some(_)) => return Err(usage("--x0", "give either --x0 or --theta")),
            (None, None) => return Err(usage("--x0", "a start point (--x0) or angle (--theta) is required")),
        };
        let x0 = state_point("--x0", x0, &pole, common.space)?;
        let policy = if common.space == Space::Sphere && !a.no_renormalize {
            Renormalize::EveryStep
        } else {
            Renormalize::Off
        };
        let orbit = iterate(&pole, &x0, a.steps, policy)?;
        (pole, orbit.points().to_vec(), orbit.norm_drift().to_vec(), orbit.slice_residual().to_vec(), None)
    };
    let text = match format {
        Format::Csv => orbit_csv(&points, &drift, &residual, thetas.as_ref().map(|t| ("theta", t.clone()))),
        Format::Json => {
            let m = if a.exact { "circle-exact" } else { mode(common.space) };
            let config = run_config(common, "iterate", &pole, m, Some(a.steps), params(&[]));
            let body = json!({
                "config": config,
                "points": points.iter().map(|p| p.coords().to_vec()).collect::<Vec<_>>(),
                "norm_drift": drift,
                "slice_residual": residual,
                "theta": thetas,
            });
            format!("{}\n", serde_json::to_string_pretty(&body)?)
        }
        Format::Svg => orbit_svg(&pole, &points)?,
    };
    emit(common, &text, stdout)
}

/// The orbit drawn in the slice plane `span(P, W)` of its start point.
fn orbit_svg(pole: &Pole, points: &[AmbientVector]) -> Result<String, CliError> {
    let frame = SliceFrame::through(pole.point(), &points[0])?;
    let projected: Vec<[f64; 2]> = points
        .iter()
        .map(|x| {
            let (a, b) = frame.coordinates(x);
            [a, b]
        })
        .collect();
    let mut svg = Svg::new(1.25);
    svg.circle([0.0, 0.0], 1.0, r##"fill="none" stroke="#999" stroke-width="1""##);
    svg.polyline(&projected, r##"stroke="#1f77b4" stroke-width="1""##);
    svg.dots(&projected, r##"fill="#1f77b4""##);
    svg.circle([1.0, 0.0], 0.02, r##"fill="#d62728""##);
    svg.label([1.03, 0.03], "P");
    Ok(svg.finish())
}

pub fn preimage_cmd(a: &PreimageArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let common = &a.common;
    let pole = common.pole()?;
    let y = parse_vector("--y", &a.y)?;
    check_len("--y", &y, &pole)?;
    let x = match common.space {
        Space::Sphere => {
            let y = SpherePoint::new(y.clone()).map_err(|e| usage("--y", e))?;
            preimage_sphere(&pole, &y)?.into_vector()
        }
        Space::Disk => preimage_disk(&pole, &y).map_err(|e| usage("--y", e))?,
    };
    let error = phi(&pole, &x)?.distance(&y);
    let coords: Vec<String> = x.coords().iter().map(|c| float(*c)).collect();
    let text = match common.format.unwrap_or(Format::Csv) {
        Format::Json => format!(
            "{}\n",
            serde_json::to_string_pretty(&json!({ "x": x.coords(), "round_trip_error": error }))?
        ),
        _ => format!("{}\nround-trip error {}\n", coords.join(","), float(error)),
    };
    emit(common, &text, stdout)?;
    if error > quadmap::tol::ROUND_TRIP {
        return Err(CliError::Invariant(format!("round trip Φ(x) = y off by {error:e}")));
    }
    Ok(())
}

pub fn sensitivity_cmd(a: &SensitivityArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let common = &a.common;
    let pole = common.pole()?;
    let x = match &a.x {
        Some(text) => state_point("--x", parse_vector("--x", text)?, &pole, common.space)?,
        None => {
            let mut rng = stream_rng(common.seed, 0);
            match common.space {
                Space::Sphere => random_unit(&mut rng, pole.len()).into_vector(),
                Space::Disk => random_in_disk(&mut rng, pole.len()),
            }
        }
    };
    let witness = match common.space {
        Space::Sphere => sensitivity_witness(&pole, &SpherePoint::new(x)?, a.delta, a.lambda, a.max_k)?,
        Space::Disk => disk_sensitivity_witness(&pole, &DiskPoint::new(x)?, a.delta, a.lambda, a.max_k)?,
    };
    let report = witness_report(
        common,
        "sensitivity",
        &pole,
        &[("delta", json!(a.delta)), ("lambda", json!(a.lambda)), ("max_k", json!(a.max_k))],
        witness,
    );
    finish_report(common, &report, stdout)
}

pub fn accessibility_cmd(a: &AccessibilityArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let common = &a.common;
    let pole = common.pole()?;
    let u = ball("--U", &a.u, &pole, common.space)?;
    let v = ball("--V", &a.v, &pole, common.space)?;
    let witness = accessibility_witness(&pole, &u, &v, a.lambda)?;
    let report = witness_report(common, "accessibility", &pole, &[("lambda", json!(a.lambda))], witness);
    finish_report(common, &report, stdout)
}

fn describe_certificate(c: &SliceCertificate) -> String {
    format!(
        "slice confinement over {} steps: the orbit of the U center stays within {:.3e} of span(P, x0) and comes no \
         closer than {:.6} to the V center, whose distance from that slice is {:.6} ({})",
        c.steps,
        c.max_residual,
        c.min_distance,
        c.slice_distance,
        if c.certified { "certified" } else { "not certified" }
    )
}

pub fn transitivity_cmd(a: &TransitivityArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let common = &a.common;
    let pole = common.pole()?;
    let u = ball("--U", &a.u, &pole, common.space)?;
    let v = ball("--V", &a.v, &pole, common.space)?;
    if a.max_k == 0 || a.samples == 0 {
        return Err(usage("--max-k", "--max-k and --samples must be positive"));
    }
    let summary = transitivity_probe(&pole, &u, &v, a.max_k, a.samples, common.seed)?;
    let certificate = if summary.first_hit.is_none() && pole.len() >= 3 {
        let cert = match common.space {
            Space::Sphere => slice_confinement_certificate(
                &pole,
                &SpherePoint::new(u.center().clone())?,
                &SpherePoint::new(v.center().clone())?,
                a.max_k,
            ),
            Space::Disk => disk_slice_confinement_certificate(
                &pole,
                &DiskPoint::new(u.center().clone())?,
                &DiskPoint::new(v.center().clone())?,
                a.max_k,
            ),
        };
        Some(cert)
    } else {
        None
    };
    let mut text = match summary.first_hit {
        Some(k) => format!(
            "hit at k = {k} (sample {}; {} of {} samples reach V; seed {})\n",
            summary.hitting_sample.unwrap_or(0),
            summary.hitting_samples,
            summary.samples,
            summary.seed
        ),
        None => format!("no hit within {} steps ({} samples, seed {})\n", summary.horizon, summary.samples, summary.seed),
    };
    match &certificate {
        Some(Ok(c)) => text.push_str(&format!("{}\n", describe_certificate(c))),
        Some(Err(e)) => text.push_str(&format!("slice confinement not applicable: {e}\n")),
        None => {}
    }
    if common.format == Some(Format::Json) {
        let config = run_config(
            common,
            "transitivity",
            &pole,
            mode(common.space),
            Some(a.max_k),
            params(&[("samples", json!(a.samples)), ("U", json!(u)), ("V", json!(v))]),
        );
        let body = json!({
            "config": config,
            "probe": summary,
            "certificate": certificate.and_then(|c| c.ok()),
            "seed": common.seed,
        });
        text = format!("{}\n", serde_json::to_string_pretty(&body)?);
    }
    emit(common, &text, stdout)
}

pub fn periodic_cmd(a: &PeriodicArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let common = &a.common;
    let alpha = common.alpha(true)?;
    if a.k == 0 || a.k > 24 {
        return Err(usage("--k", "period must be between 1 and 24"));
    }
    let points = periodic_points_circle(&alpha, a.k)?;
    let gap = circular_max_gap(&points).expect("non-empty");
    let gap_text = format!("{}/{}", gap.numer(), gap.denom());
    let text = match common.format.unwrap_or(Format::Csv) {
        Format::Json => format!(
            "{}\n",
            serde_json::to_string_pretty(&json!({
                "alpha": alpha.to_string(),
                "k": a.k,
                "count": points.len(),
                "max_gap_turns": gap_text,
                "points": points.iter().map(Angle::to_string).collect::<Vec<_>>(),
            }))?
        ),
        _ => {
            let mut s = String::from("index,turns,radians\n");
            for (i, p) in points.iter().enumerate() {
                s.push_str(&format!("{i},{p},{}\n", float(p.to_radians())));
            }
            s
        }
    };
    emit(common, &text, stdout)
}

pub fn lyapunov_cmd(a: &LyapunovArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let common = &a.common;
    let system = match a.system {
        LyapunovKind::Circle => {
            let exact = a.theta.as_deref().is_some_and(|t| t.contains('/'));
            let alpha = common.alpha(exact)?;
            let theta = match &a.theta {
                Some(t) => parse_angle("--theta", t, exact)?,
                None => alpha.clone(),
            };
            LyapunovSystem::Circle { alpha, theta0: theta }
        }
        LyapunovKind::Logistic => {
            let pole = common.pole()?;
            let x0 = a.x0.as_deref().unwrap_or("0.123");
            let x0: f64 = x0.trim().parse().map_err(|e| usage("--x0", e))?;
            LyapunovSystem::Logistic { pole, x0 }
        }
        LyapunovKind::Slice => {
            let pole = common.pole()?;
            let x0 = match &a.x0 {
                Some(t) => SpherePoint::new(state_point("--x0", parse_vector("--x0", t)?, &pole, Space::Sphere)?)?,
                None => random_unit(&mut stream_rng(common.seed, 0), pole.len()),
            };
            LyapunovSystem::SphereSlice { pole, x0 }
        }
    };
    let value = lyapunov_estimate(&system, a.steps).map_err(|e| match e {
        quadmap::chaos::ChaosError::InvalidParameter(m) => usage("--steps", m),
        other => other.into(),
    })?;
    let text = match common.format {
        Some(Format::Json) => format!(
            "{}\n",
            serde_json::to_string_pretty(&json!({ "steps": a.steps, "estimate": value, "ln2": std::f64::consts::LN_2 }))?
        ),
        _ => format!("{}\n", float(value)),
    };
    emit(common, &text, stdout)
}

pub fn mixing_cmd(a: &MixingArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let common = &a.common;
    let alpha = common.alpha(true)?;
    let pole = Pole::from_angle(alpha.to_radians());
    let u = ExactArc::inside_ball(&ball("--U", &a.u, &pole, Space::Sphere)?)?;
    let v = ExactArc::inside_ball(&ball("--V", &a.v, &pole, Space::Sphere)?)?;
    let verdict = mixing_probe(&alpha, &u, &v, a.horizon)?;
    let show = |k: Option<usize>| k.map_or("none".to_string(), |k| k.to_string());
    let text = match common.format {
        Some(Format::Json) => format!("{}\n", serde_json::to_string_pretty(&verdict)?),
        _ => format!(
            "mixing step {}\ncoverage step {}\nhorizon {}\n",
            show(verdict.mixing_step),
            show(verdict.coverage_step),
            verdict.horizon
        ),
    };
    emit(common, &text, stdout)
}

pub fn slice_cert_cmd(a: &SliceCertArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let common = &a.common;
    let pole = common.pole()?;
    let x0 = state_point("--x0", parse_vector("--x0", &a.x0)?, &pole, common.space)?;
    let r = state_point("--R", parse_vector("--R", &a.r)?, &pole, common.space)?;
    if pole.len() < 3 {
        return Err(usage("--dim", "slice certificates need n ≥ 2"));
    }
    let cert = match common.space {
        Space::Sphere => slice_confinement_certificate(&pole, &SpherePoint::new(x0)?, &SpherePoint::new(r)?, a.steps),
        Space::Disk => disk_slice_confinement_certificate(&pole, &DiskPoint::new(x0)?, &DiskPoint::new(r)?, a.steps),
    }
    .map_err(|e| usage("--R", e))?;
    let text = match common.format {
        Some(Format::Json) => format!("{}\n", serde_json::to_string_pretty(&cert)?),
        _ => format!(
            "steps {}\nmax_residual {}\nmin_distance {}\nslice_distance {}\ncertified {}\n",
            cert.steps,
            float(cert.max_residual),
            float(cert.min_distance),
            float(cert.slice_distance),
            cert.certified
        ),
    };
    emit(common, &text, stdout)?;
    if !cert.certified {
        return Err(CliError::Invariant("slice confinement not certified".into()));
    }
    Ok(())
}

fn read_rows(path: &std::path::Path) -> Result<Vec<Vec<f64>>, CliError> {
    let text = fs::read_to_string(path)?;
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .enumerate()
        // a header row is anything that does not parse as numbers
        .filter_map(|(i, l)| match parse_coords("--input", l) {
            Ok(v) => Some(Ok(v)),
            Err(_) if i == 0 => None,
            Err(e) => Some(Err(e)),
        })
        .collect()
}

pub fn curves_cmd(a: &CurvesArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let common = &a.common;
    let format = common.format.unwrap_or(Format::Csv);
    let spherical = a.curve == CurveKind::SmallCircle || (a.input.is_some() && common.pole.is_some());
    if spherical {
        return sphere_curves(a, format, stdout);
    }
    let point = parse_coords("--point", &a.point)?;
    let p: [f64; 2] = point.try_into().map_err(|_| usage("--point", "plane points have two coordinates"))?;
    let samples = match &a.input {
        Some(path) => read_rows(path)?
            .into_iter()
            .map(|r| match r.as_slice() {
                [s, x, y, nx, ny] => PlaneCurveSample::new(*s, [*x, *y], [*nx, *ny]).map_err(|e| usage("--input", e)),
                _ => Err(usage("--input", "plane rows are s,x,y,nx,ny")),
            })
            .collect::<Result<Vec<_>, _>>()?,
        None => match a.curve {
            CurveKind::Circle => builtin::unit_circle(a.samples),
            _ => builtin::line(a.samples),
        },
    };
    let ped = plane_pedal(&samples, p);
    let ort = plane_orthotomic(&samples, p);
    let text = match format {
        Format::Csv | Format::Json => {
            let mut s = String::from("s,x,y,pedal_x,pedal_y,orthotomic_x,orthotomic_y\n");
            for ((c, q), o) in samples.iter().zip(&ped).zip(&ort) {
                let [x, y] = c.position();
                let row = [c.s(), x, y, q[0], q[1], o[0], o[1]].map(float);
                s.push_str(&row.join(","));
                s.push('\n');
            }
            s
        }
        Format::Svg => {
            let source: Vec<[f64; 2]> = samples.iter().map(|c| c.position()).collect();
            let extent = source.iter().chain(&ped).chain(&ort).flat_map(|v| v.iter()).fold(1.0f64, |m, c| m.max(c.abs()));
            let mut svg = Svg::new(extent * 1.1);
            svg.polyline(&source, r##"stroke="#333" stroke-width="1.5""##);
            svg.polyline(&ped, r##"stroke="#1f77b4" stroke-width="1""##);
            svg.polyline(&ort, r##"stroke="#d62728" stroke-width="1""##);
            svg.circle(p, extent / 80.0, r##"fill="#000""##);
            svg.label([p[0] + extent / 40.0, p[1] + extent / 40.0], "P");
            svg.finish()
        }
    };
    emit(common, &text, stdout)
}

fn sphere_curves(a: &CurvesArgs, format: Format, stdout: &mut dyn Write) -> Result<(), CliError> {
    let common = &a.common;
    let pole = common.pole()?;
    if pole.len() < 3 && a.input.is_none() {
        return Err(usage("--P", "small circles need a pole in R^3 or higher"));
    }
    let w1 = default_orthogonal(pole.point())?;
    let w2 = if pole.len() >= 3 {
        // the first basis direction with a usable component orthogonal to P and W₁
        (0..pole.len())
            .map(|i| {
                let e = AmbientVector::basis(pole.len(), i);
                let e = e.add_scaled(-e.dot(pole.vector()), pole.vector());
                e.add_scaled(-e.dot(w1.vector()), w1.vector())
            })
            .find(|e| e.norm() > 0.5)
            .map(|e| SpherePoint::normalize(&e))
            .transpose()?
    } else {
        None
    };
    let samples = match &a.input {
        Some(path) => read_rows(path)?
            .into_iter()
            .map(|r| {
                let (s, coords) = r.split_first().ok_or_else(|| usage("--input", "empty row"))?;
                let pedal = SpherePoint::from_coords(coords.to_vec()).map_err(|e| usage("--input", e))?;
                check_len("--input", pedal.vector(), &pole)?;
                Ok(SphereCurveSample { s: *s, pedal })
            })
            .collect::<Result<Vec<_>, CliError>>()?,
        None => builtin::small_circle(pole.point(), &w1, w2.as_ref().expect("n ≥ 2"), a.beta, a.samples)?,
    };
    let ort = sphere_orthotomic_from_pedal(&samples, &pole).map_err(|e| CliError::Invariant(e.to_string()))?;
    let text = match format {
        Format::Csv | Format::Json => {
            let n = pole.len();
            let mut s = String::from("s");
            for i in 0..n {
                s.push_str(&format!(",pedal_{i}"));
            }
            for i in 0..n {
                s.push_str(&format!(",orthotomic_{i}"));
            }
            s.push_str(",midpoint_residual\n");
            for (c, o) in samples.iter().zip(&ort) {
                s.push_str(&float(c.s));
                for v in c.pedal.vector().coords().iter().chain(o.vector().coords()) {
                    s.push(',');
                    s.push_str(&float(*v));
                }
                s.push_str(&format!(",{}\n", float(midpoint_residual(&pole, &c.pedal, o))));
            }
            s
        }
        Format::Svg => {
            // view from above P: coordinates along W₁ and W₂ (or P on the circle)
            let axis = w2.as_ref().map_or(pole.vector(), |w| w.vector());
            let project = |x: &AmbientVector| [x.dot(w1.vector()), x.dot(axis)];
            let ped: Vec<[f64; 2]> = samples.iter().map(|c| project(c.pedal.vector())).collect();
            let orts: Vec<[f64; 2]> = ort.iter().map(|o| project(o.vector())).collect();
            let mut svg = Svg::new(1.1);
            svg.circle([0.0, 0.0], 1.0, r##"fill="none" stroke="#999" stroke-width="1""##);
            svg.polyline(&ped, r##"stroke="#1f77b4" stroke-width="1""##);
            svg.polyline(&orts, r##"stroke="#d62728" stroke-width="1""##);
            svg.finish()
        }
    };
    emit(common, &text, stdout)
}

pub fn replay_cmd(a: &ReplayArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let text = fs::read_to_string(&a.report)?;
    let value: Value = serde_json::from_str(&text).map_err(|e| usage("--report", e))?;
    let witnesses = value
        .get("witnesses")
        .cloned()
        .ok_or_else(|| usage("--report", "the file has no witnesses array"))?;
    let witnesses: Vec<Witness> = serde_json::from_value(witnesses).map_err(|e| usage("--report", e))?;
    let mut failures = 0;
    let mut out = String::new();
    for (i, w) in witnesses.iter().enumerate() {
        let kind = match w.claim {
            quadmap::chaos::Claim::Sensitive { .. } => "sensitive",
            quadmap::chaos::Claim::Accessible { .. } => "accessible",
        };
        match w.replay() {
            Ok(sep) => out.push_str(&format!("PASS  {i:>3} {kind:<10} k = {:<3} separation {}\n", w.step, float(sep))),
            Err(e) => {
                failures += 1;
                out.push_str(&format!("FAIL  {i:>3} {kind:<10} {e}\n"));
            }
        }
    }
    out.push_str(&format!("{} of {} witnesses replayed\n", witnesses.len() - failures, witnesses.len()));
    stdout.write_all(out.as_bytes())?;
    if failures > 0 {
        return Err(CliError::Invariant(format!("{failures} witnesses failed to replay")));
    }
    Ok(())
}
