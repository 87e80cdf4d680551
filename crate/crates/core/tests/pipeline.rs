mod common;

use approx::assert_abs_diff_eq;
use common::*;
use robust_chaos::attractors::{fixed_points, Stability, TOL_NEUTRAL};
use robust_chaos::kneading::kneading_invariant;
use robust_chaos::robustfamily::{trace_curve, CriticalOrbit, FamilyCurve, StopReason, TOL_CURVE};
use robust_chaos::IntervalMap;

#[test]
fn default_seed_is_frozen() {
    let seed = default_seed();
    assert_abs_diff_eq!(seed.a, 7.451409765128825, epsilon = 1e-12);
    assert_abs_diff_eq!(seed.b, -18.37092731829574, epsilon = 1e-12);
    assert!(seed.residual.abs() < 1e-12);
}

#[test]
fn traced_curve_shape() {
    let curve = robust_curve();
    assert_eq!(curve.len(), 1034);
    assert!(curve.max_gap() <= 2.0 * STEP);
    assert_eq!(curve.samples[0].t, 0.0);
    assert_eq!(curve.samples[curve.len() - 1].t, 1.0);
    assert!(curve.samples.windows(2).all(|w| w[0].t < w[1].t));
    // both ends run into the boundary of the admissible region
    assert_eq!(curve.stops.len(), 2);
    assert!(curve.stops.iter().all(|s| matches!(s, StopReason::OrderingViolated(v) if !v.is_empty())));
}

#[test]
fn landing_point_is_a_repelling_fixed_point_inside_the_middle_lap() {
    for s in robust_curve().samples.iter().step_by(25) {
        let m = s.map();
        let o = CriticalOrbit::of(s.a, s.b).unwrap();
        assert!(o.residual().abs() < TOL_CURVE);
        let fps = fixed_points(&m, TOL_NEUTRAL).unwrap();
        let p = fps.iter().find(|fp| (fp.point - o.f3_c2).abs() < 1e-9).expect("f^3(c2) is a fixed point");
        assert_eq!(p.class, Stability::Repelling);
        assert!(o.c1 < p.point && p.point < o.c2);
        assert!(m.schwarzian(0.5 * (o.c1 + o.c2)).unwrap() < 0.0);
    }
}

#[test]
fn second_kneading_sequence_is_eventually_middle() {
    let n = 30;
    let expected = format!("MR{}", "M".repeat(n - 2));
    for s in robust_curve().samples.iter().step_by(10) {
        let k = kneading_invariant(&s.map(), n).unwrap();
        assert_eq!(k.k2().unwrap().to_string(), expected, "t = {}", s.t);
        assert!(k.k1().symbols[0] == robust_chaos::kneading::Symbol::R);
    }
}

fn distance_to_polyline(p: (f64, f64), curve: &FamilyCurve) -> f64 {
    curve
        .samples
        .windows(2)
        .map(|w| {
            let (ax, ay, bx, by) = (w[0].a, w[0].b, w[1].a, w[1].b);
            let (dx, dy) = (bx - ax, by - ay);
            let len2 = dx * dx + dy * dy;
            let u =
                if len2 > 0.0 { (((p.0 - ax) * dx + (p.1 - ay) * dy) / len2).clamp(0.0, 1.0) } else { 0.0 };
            (p.0 - ax - u * dx).hypot(p.1 - ay - u * dy)
        })
        .fold(f64::INFINITY, f64::min)
}

#[test]
fn halving_the_step_reproduces_the_curve() {
    let seed = default_seed();
    for h in [4e-3, 2e-3, 1e-3] {
        let coarse = trace_curve((seed.a, seed.b), h, 4000).unwrap();
        let fine = trace_curve((seed.a, seed.b), h / 2.0, 8000).unwrap();
        let worst =
            coarse.samples.iter().map(|s| distance_to_polyline((s.a, s.b), &fine)).fold(0.0, f64::max);
        assert!(worst < 10.0 * h * h, "h = {h}: {worst:e}");
    }
}

#[test]
fn csv_round_trip_keeps_parameters_exactly() {
    let curve = robust_curve();
    let mut bytes = Vec::new();
    curve.write_csv(&mut bytes).unwrap();
    let back = FamilyCurve::read_csv(&bytes[..]).unwrap();
    assert_eq!(back.samples, curve.samples);
}

#[test]
fn tracing_is_deterministic() {
    let a = robust_curve();
    let b = robust_curve();
    assert_eq!(a, b);
}
