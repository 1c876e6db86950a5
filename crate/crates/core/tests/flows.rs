mod common;

use nalgebra::DMatrix;
use pwave_core::flows::{self, FourierLoop};
use pwave_core::sampling;

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

#[test]
fn ivp_residual_and_rk4_agreement_on_every_family() {
    let mut rng = sampling::rng(21);
    for (name, spec) in common::families() {
        let m = spec.dim();
        let x0 = sampling::point(&mut rng, m, 1.0);
        let v0 = sampling::point(&mut rng, m, 1.0);
        let c = flows::geodesic_ivp(&spec, &x0, &v0, 1.0, 2000).unwrap();
        let r = flows::geodesic_rk4(&spec, &x0, &v0, 1.0, 2000).unwrap();
        let res = flows::geodesic_residual(&spec, &c).unwrap();
        let err = max_diff(c.end(), r.end());
        assert!(res < 1e-5, "{name}: residual {res}");
        assert!(err < 1e-6, "{name}: rk4 gap {err}");
    }
}

#[test]
fn halving_the_step_shrinks_the_error() {
    let spec = common::spec(r#"{"family":"M1","f":"y^2"}"#);
    let x0 = [0.0; 6];
    let v0 = [1.0, 1.0, 0.5, -0.5, 0.2, 0.1];
    let oracle = flows::geodesic_rk4(&spec, &x0, &v0, 1.0, 4000).unwrap();
    let coarse = flows::geodesic_ivp(&spec, &x0, &v0, 1.0, 50).unwrap();
    let fine = flows::geodesic_ivp(&spec, &x0, &v0, 1.0, 100).unwrap();
    let (e1, e2) = (max_diff(coarse.end(), oracle.end()), max_diff(fine.end(), oracle.end()));
    assert!(e1 / e2 >= 3.0, "{e1} {e2}");
}

#[test]
fn bvp_round_trip_on_every_family() {
    let mut rng = sampling::rng(22);
    for (name, spec) in common::families() {
        let m = spec.dim();
        for _ in 0..3 {
            let p = sampling::point(&mut rng, m, 1.0);
            let q = sampling::point(&mut rng, m, 1.0);
            let (v0, c) = flows::geodesic_bvp(&spec, &p, &q, 4000).unwrap();
            assert!(max_diff(c.end(), &q) < 1e-8, "{name}");
            let again = flows::geodesic_ivp(&spec, &p, &v0, 1.0, 4000).unwrap();
            assert!(max_diff(again.end(), &q) < 1e-7, "{name}");
        }
        let (v0, c) = flows::geodesic_bvp(&spec, &vec![0.5; m], &vec![0.5; m], 10).unwrap();
        assert!(v0.iter().all(|v| *v == 0.0));
        assert!(c.positions.iter().all(|x| x.iter().all(|v| *v == 0.5)));
    }
}

#[test]
fn transport_preserves_inner_products_and_last_direction() {
    let mut rng = sampling::rng(23);
    for (name, spec) in common::families() {
        let m = spec.dim();
        let x0 = sampling::point(&mut rng, m, 1.0);
        let v0 = sampling::point(&mut rng, m, 1.0);
        let c = flows::geodesic_ivp(&spec, &x0, &v0, 1.0, 400).unwrap();
        let frame = DMatrix::identity(m, m);
        let frames = flows::transport_frame(&spec, &c, &frame).unwrap();
        for (n, f) in frames.iter().enumerate().step_by(50) {
            let g0 = spec.metric_matrix(&c.positions[0]).unwrap();
            let gn = spec.metric_matrix(&c.positions[n]).unwrap();
            let gram = f.transpose() * gn * f;
            assert!((gram - g0).amax() < 1e-7, "{name} node {n}");
        }
        let last = frames.last().unwrap();
        let mut em = vec![0.0; m];
        em[m - 1] = 1.0;
        assert!(max_diff(last.column(m - 1).as_slice(), &em) == 0.0, "{name}");
        // components at or below the diagonal stay fixed
        for i in 0..m {
            for j in 0..=i {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((last[(j, i)] - want).abs() < 1e-8 || j > i, "{name}");
            }
        }
    }
}

#[test]
fn m1_rectangle_holonomy_matches_rk4() {
    let spec = common::spec(r#"{"family":"M1","f":"y^2"}"#);
    let base = [0.0, 0.0, 0.5, 1.0, 0.0, 0.0];
    let lp = flows::rectangle_loop(&base, 0, 1, 1.0, 1.0, 2000);
    let h = flows::holonomy_loop(&spec, &lp, "rect x-y").unwrap();
    assert!(h.is_unipotent_upper(1e-7));
    let rk = flows::transport_frame_rk4(&spec, &lp, &DMatrix::identity(6, 6)).unwrap();
    let rk = rk.last().unwrap().transpose();
    assert!((&h.matrix - rk).amax() < 1e-6);
    assert!((&h.matrix - DMatrix::identity(6, 6)).amax() > 1e-3, "holonomy should be nontrivial");
    let g = spec.metric_at(&base).unwrap();
    assert!(h.metric_residual(&g) < 1e-7);
    let back = flows::holonomy_loop(&spec, &lp.reversed(), "reversed").unwrap();
    assert!((&h.matrix * &back.matrix - DMatrix::identity(6, 6)).amax() < 1e-6);
}

#[test]
fn walker_holonomy_has_skew_block() {
    let spec = common::spec(r#"{"family":"M3","p":2,"f":"x1^2+x1*x2^2"}"#);
    let mut rng = sampling::rng(24);
    for _ in 0..5 {
        let base = sampling::point(&mut rng, 4, 1.0);
        let lp = FourierLoop::random(&mut rng, &base, 1.0).sample(2000);
        let h = flows::holonomy_loop(&spec, &lp, "fourier").unwrap();
        let b = h.matrix.view((0, 2), (2, 2)).into_owned();
        assert!((&b + b.transpose()).amax() < 1e-7);
        assert!((h.matrix.view((0, 0), (2, 2)).into_owned() - DMatrix::identity(2, 2)).amax() < 1e-7);
        assert!(h.matrix.view((2, 0), (2, 2)).amax() < 1e-7);
        assert!(b.amax() > 1e-6);
    }
}

#[test]
fn fourier_holonomy_unipotent_on_every_family() {
    let mut rng = sampling::rng(25);
    for (name, spec) in common::families() {
        let m = spec.dim();
        let base = sampling::point(&mut rng, m, 1.0);
        let lp = FourierLoop::random(&mut rng, &base, 1.0).sample(2000);
        let h = flows::holonomy_loop(&spec, &lp, "fourier").unwrap();
        let (d, b) = h.triangularity();
        assert!(d < 1e-7 && b < 1e-7, "{name}: {d} {b}");
        let g = spec.metric_at(&base).unwrap();
        assert!(h.metric_residual(&g) < 1e-7, "{name}: {}", h.metric_residual(&g));
    }
}

#[test]
fn long_time_integration_stays_finite() {
    let mut rng = sampling::rng(26);
    for (name, spec) in common::families() {
        let m = spec.dim();
        let x0 = sampling::point(&mut rng, m, 1.0);
        let v0 = sampling::point(&mut rng, m, 1.0);
        let c = flows::geodesic_ivp(&spec, &x0, &v0, 50.0, 5000).unwrap();
        assert!(c.positions.iter().flatten().all(|v| v.is_finite()), "{name}");
    }
}
