use std::f64::consts::TAU;

use proptest::prelude::*;
use quadmap::chaos::{
    accessibility_witness, analyze, mixing_probe, sensitivity_witness, AnalysisConfig, Classification, ExactArc,
    OpenBall, System,
};
use quadmap::curves::{builtin, f_p, plane_orthotomic, plane_pedal, sphere_orthotomic_from_pedal, midpoint_residual};
use quadmap::sampling::{random_unit, stream_rng};
use quadmap::{Angle, Pole, SpherePoint};

fn circle_point(theta: f64) -> SpherePoint {
    SpherePoint::from_coords(vec![theta.cos(), theta.sin()]).unwrap()
}

/// Step count predicted by exact doubling of the angular gap `g`: the least `k`
/// with `2^k·g` (wrapped to `[0, π]`) giving a chord above `λ`.
fn doubling_oracle(gap: f64, lambda: f64) -> usize {
    let mut g = gap;
    for k in 0..64 {
        let wrapped = g.rem_euclid(std::f64::consts::TAU);
        let wrapped = wrapped.min(std::f64::consts::TAU - wrapped);
        if 2.0 * (wrapped / 2.0).sin() > lambda {
            return k;
        }
        g *= 2.0;
    }
    usize::MAX
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn circle_sensitivity_matches_doubling(alpha in 0.0f64..TAU, theta in 0.0f64..TAU) {
        let pole = Pole::from_angle(alpha);
        let w = sensitivity_witness(&pole, &circle_point(theta), 1e-6, 1.0, 64).unwrap();
        w.replay().unwrap();
        let gap = 2.0 * (0.5e-6f64).asin() * (1.0 - 1e-8);
        prop_assert_eq!(w.step, doubling_oracle(gap, 1.0));
        prop_assert!(w.step <= 25);
    }

    #[test]
    fn sphere_accessibility_is_exact(seed in any::<u64>()) {
        let mut rng = stream_rng(seed, 0);
        let pole = Pole::new(random_unit(&mut rng, 3));
        let u = OpenBall::on_sphere(random_unit(&mut rng, 3), 0.1).unwrap();
        let v = OpenBall::on_sphere(random_unit(&mut rng, 3), 0.1).unwrap();
        let w = accessibility_witness(&pole, &u, &v, 1e-10).unwrap();
        prop_assert!(w.step >= 1 && w.step <= 10);
        prop_assert!(w.replay().unwrap() <= 1e-10);
    }

    #[test]
    fn arcs_mix_by_coverage(rho_milli in 5u32..400, cu in 0u32..1000, cv in 0u32..1000) {
        let half = num_rational::BigRational::new(rho_milli.into(), 1000u32.into())
            / num_rational::BigRational::from_integer(7u32.into());
        let u = ExactArc::centered(&Angle::turns(cu, 1000).unwrap(), half.clone()).unwrap();
        let v = ExactArc::centered(&Angle::turns(cv, 1000).unwrap(), half.clone()).unwrap();
        let verdict = mixing_probe(&Angle::turns(1, 3).unwrap(), &u, &v, 64).unwrap();
        // the image of U is the full circle once 2^k·2h ≥ 1
        let width: f64 = num_traits::ToPrimitive::to_f64(&(half * num_rational::BigRational::from_integer(2.into()))).unwrap();
        let coverage = (1.0 / width).log2().ceil() as usize;
        prop_assert_eq!(verdict.coverage_step, Some(coverage.max(1)));
        prop_assert!(verdict.mixing_step.unwrap() <= coverage.max(1));
    }
}

#[test]
fn sphere_sensitivity_follows_the_circle() {
    let planar = sensitivity_witness(&Pole::from_coords(vec![1.0, 0.0]).unwrap(), &circle_point(0.1), 1e-6, 1.0, 64)
        .unwrap();
    let pole = Pole::from_coords(vec![1.0, 0.0, 0.0]).unwrap();
    let x = SpherePoint::from_coords(vec![0.1f64.cos(), 0.1f64.sin(), 0.0]).unwrap();
    let spatial = sensitivity_witness(&pole, &x, 1e-6, 1.0, 64).unwrap();
    assert_eq!(planar.step, spatial.step);
    assert!((planar.separation - spatial.separation).abs() < 1e-9);
    assert_eq!(spatial.points[1].coords()[2], 0.0);
}

#[test]
fn classifications_by_dimension() {
    let config = AnalysisConfig { horizon: 400, probe_samples: 8, base_points: 3, ball_pairs: 3, ..Default::default() };
    let cases = [
        (System::Sphere(Pole::from_angle(1.0)), Classification::Devaney),
        (System::Disk(Pole::from_coords(vec![1.0]).unwrap()), Classification::Devaney),
        (System::Sphere(Pole::from_coords(vec![0.0, 1.0, 0.0]).unwrap()), Classification::Kato),
        (System::Sphere(Pole::from_coords(vec![0.5, 0.5, 0.5, 0.5]).unwrap()), Classification::Kato),
        (System::Disk(Pole::from_coords(vec![0.0, 0.0, 1.0]).unwrap()), Classification::Kato),
    ];
    for (system, expected) in cases {
        let report = analyze(&system, &config).unwrap();
        assert_eq!(report.classification, expected, "{system:?}");
        assert!(report.kato);
        if !system.is_one_dimensional() {
            assert_eq!(report.transitive.holds, Some(false), "{system:?}");
        }
    }
}

#[test]
fn curve_identities() {
    let p = [0.25, -0.5];
    for samples in [builtin::unit_circle(1000), builtin::line(1000)] {
        for (q, o) in plane_pedal(&samples, p).iter().zip(plane_orthotomic(&samples, p)) {
            let f = f_p(*q, p);
            assert!((o[0] - f[0]).hypot(o[1] - f[1]) <= 1e-12);
        }
    }
    let pole = Pole::from_coords(vec![0.0, 0.0, 1.0]).unwrap();
    let samples = builtin::small_circle(
        pole.point(),
        &SpherePoint::basis(3, 0),
        &SpherePoint::basis(3, 1),
        0.4,
        1000,
    )
    .unwrap();
    let ort = sphere_orthotomic_from_pedal(&samples, &pole).unwrap();
    for (s, o) in samples.iter().zip(&ort) {
        assert!((o.vector().norm() - 1.0).abs() <= 1e-12);
        assert!(midpoint_residual(&pole, &s.pedal, o) <= 1e-12);
    }
}
