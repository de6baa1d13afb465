use affina_core::bde::Termination;
use affina_core::{curvature_bde, discriminant, integrate_foliation, normal_form_surface, Params, SurfaceJet, SurfaceKind, TraceConfig, Window};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn check_polyline(bde: &affina_core::CurvatureBde, pl: &affina_core::Polyline, cfg: &TraceConfig) {
    assert_eq!(pl.points.len(), pl.lifted.len());
    for (i, w) in pl.points.windows(2).enumerate() {
        let (a, b) = (w[0], w[1]);
        let len2 = (b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2);
        assert!(len2.sqrt() <= cfg.initial_step * (1.0 + 1e-9), "segment {i} longer than the step bound");
        if pl.lifted[i] || pl.lifted[i + 1] {
            continue;
        }
        let m = [0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])];
        let c = bde.coeffs(m[0], m[1]);
        let (du, dv) = (b[0] - a[0], b[1] - a[1]);
        let r = c[0] * du * du + c[1] * du * dv + c[2] * dv * dv;
        let scale = c.iter().fold(0.0f64, |x, y| x.max(y.abs()));
        assert!(r.abs() <= 1e-6 * scale * len2 + 1e-300, "segment {i}: residual {r:e}, scale {scale:e}, len² {len2:e}");
    }
    for p in &pl.points {
        assert!(cfg.window.contains(*p));
    }
}

#[test]
fn random_surface_leaves_satisfy_the_equation() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let mut traced = 0;
    for _ in 0..12 {
        let mut coeffs = vec![(2, 0, 1.0), (0, 2, rng.gen_range(0.3..2.0))];
        for d in 3..=4 {
            for j in 0..=d {
                coeffs.push((d - j, j, rng.gen_range(-1.0..1.0)));
            }
        }
        let s = SurfaceJet::monge_from_coefficients(8, &coeffs);
        let bde = curvature_bde(&s);
        let cfg = TraceConfig::new(Window::square(0.3));
        for _ in 0..3 {
            let seed = [rng.gen_range(-0.2..0.2), rng.gen_range(-0.2..0.2)];
            if discriminant(&bde, seed[0], seed[1]) <= 0.0 {
                continue;
            }
            for fol in [1, 2] {
                let pl = integrate_foliation(&bde, seed, fol, &cfg).unwrap();
                assert!(pl.len() > 2);
                check_polyline(&bde, &pl, &cfg);
                traced += 1;
            }
        }
    }
    assert!(traced > 20);
}

#[test]
fn folded_model_leaves_cross_the_discriminant() {
    let p = Params::new().with_q(1, 3, 1.0).with_q(3, 0, 1.0).with_q(0, 3, 1.0);
    let s = normal_form_surface(SurfaceKind::Buchin, &p, 6).unwrap();
    let bde = curvature_bde(&s);
    let cfg = TraceConfig::new(Window::square(0.5));
    let mut lifted_any = false;
    for seed in [[0.1, 0.2], [-0.2, 0.3], [0.3, -0.1]] {
        if discriminant(&bde, seed[0], seed[1]) <= 0.0 {
            continue;
        }
        for fol in [1, 2] {
            let pl = integrate_foliation(&bde, seed, fol, &cfg).unwrap();
            check_polyline(&bde, &pl, &cfg);
            lifted_any |= pl.lifted.iter().any(|&l| l);
        }
    }
    assert!(lifted_any);
}

#[test]
fn tracing_is_deterministic() {
    let s = SurfaceJet::monge_from_coefficients(6, &[(2, 0, 1.0), (0, 2, 0.5), (3, 0, 0.4), (1, 2, -0.3), (2, 2, 0.2)]);
    let bde = curvature_bde(&s);
    let cfg = TraceConfig::new(Window::square(0.4));
    let a = integrate_foliation(&bde, [0.05, 0.1], 1, &cfg).unwrap();
    let b = integrate_foliation(&bde, [0.05, 0.1], 1, &cfg).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.termination, Termination::WindowExit);
}
