use std::f64::consts::TAU;

use huygens_torus::lyapunov::{eval_u, eval_v, orbital_derivative, LyapunovFn};
use huygens_torus::region::RegionId;
use huygens_torus::symmetry::SymmetryMap;
use huygens_torus::torus::{torus_distance, wrap};
use huygens_torus::{LiftPoint, MapSpec, TorusPoint};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const COUPLINGS: [f64; 4] = [0.05, 0.1, 0.2, 0.3];

fn specs(a: f64) -> Vec<MapSpec> {
    vec![
        MapSpec::ring(a).unwrap(),
        MapSpec::line(a).unwrap(),
        MapSpec::ring_perturbed(a, 0.01, 0.02).unwrap(),
        MapSpec::line_perturbed(a, -0.03, 0.01).unwrap(),
    ]
}

fn torus() -> impl Strategy<Value = TorusPoint> {
    (0.0..TAU, 0.0..TAU).prop_map(|(x, y)| TorusPoint::new(x, y).unwrap())
}

proptest! {
    #[test]
    fn map_is_periodic(p in torus(), k in -3i32..=3, m in -3i32..=3, a in 0.01f64..0.33, s in 0usize..4) {
        let spec = &specs(a)[s];
        let shifted = wrap(LiftPoint::new(p.x() + TAU * k as f64, p.y() + TAU * m as f64)).unwrap();
        prop_assert!(torus_distance(spec.apply(shifted), spec.apply(p)) <= 1e-12);
    }

    #[test]
    fn jacobian_matches_central_differences(p in torus(), a in 0.01f64..0.33, s in 0usize..4) {
        let spec = &specs(a)[s];
        let j = spec.jacobian(p).unwrap();
        let h = 1e-5;
        let l = p.lift();
        for (col, (dx, dy)) in [(h, 0.0), (0.0, h)].into_iter().enumerate() {
            let fp = spec.apply_lift(LiftPoint::new(l.x + dx, l.y + dy));
            let fm = spec.apply_lift(LiftPoint::new(l.x - dx, l.y - dy));
            let d = [(fp.x - fm.x) / (2.0 * h), (fp.y - fm.y) / (2.0 * h)];
            for row in 0..2 {
                prop_assert!((j.m[row][col] - d[row]).abs() <= 1e-6);
            }
        }
    }

    #[test]
    fn v_is_mirror_invariant_and_u_is_its_swap(x in 0.0f64..TAU, y in 0.0f64..TAU) {
        let p = LiftPoint::new(x, y);
        let m = SymmetryMap::ReflAntiDiag.apply_lift(p);
        prop_assert!((eval_v(m) - eval_v(p)).abs() <= 1e-12);
        prop_assert!((eval_u(p) - eval_v(SymmetryMap::ReflDiag.apply_lift(p))).abs() <= 1e-12);
    }
}

#[test]
fn lift_commutes_with_wrap_on_random_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for a in COUPLINGS {
        for spec in specs(a) {
            for _ in 0..25_000 {
                let p = TorusPoint::new(rng.random_range(0.0..TAU), rng.random_range(0.0..TAU)).unwrap();
                let lifted = wrap(spec.apply_lift(p.lift())).unwrap();
                assert!(torus_distance(lifted, spec.apply(p)) <= 1e-12);
            }
        }
    }
}

#[test]
fn jacobian_determinant_is_positive_on_grid() {
    let n = 512;
    for a in COUPLINGS {
        for spec in [MapSpec::ring(a).unwrap(), MapSpec::line(a).unwrap()] {
            for i in 0..n {
                for j in 0..n {
                    let p = TorusPoint::new(TAU * i as f64 / n as f64, TAU * j as f64 / n as f64).unwrap();
                    let det = spec.jacobian(p).unwrap().det();
                    assert!(det > 0.0, "a={a} {p}: det {det}");
                }
            }
        }
    }
}

#[test]
fn orbital_derivative_is_mirror_invariant() {
    let spec = MapSpec::ring(0.1).unwrap();
    let s = RegionId::S.region();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut checked = 0;
    while checked < 100_000 {
        let p = LiftPoint::new(rng.random_range(0.0..TAU), rng.random_range(0.0..TAU));
        if !s.contains_open(p) {
            continue;
        }
        checked += 1;
        let m = SymmetryMap::ReflAntiDiag.apply_lift(p);
        let a = orbital_derivative(LyapunovFn::V, &spec, p).unwrap();
        let b = orbital_derivative(LyapunovFn::V, &spec, m).unwrap();
        assert!((a - b).abs() <= 1e-12, "{p:?}");
    }
}
