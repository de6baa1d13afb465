use affina_core::bde::{
    blowup_portrait, directions_of, foliation_vectors, invariant_parabolas, pipeline_coeffs, trace_zero_curve, BlowupSign,
    ContourConfig, LieCartanField,
};
use affina_core::classify::FoldedInvariants;
use affina_core::geometry::{principal_data, PrincipalData};
use affina_core::{
    curvature_bde, normal_form_surface, point_frame, solve_directions, Directions, Params, SurfaceJet, SurfaceKind, Window,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_quartic(rng: &mut ChaCha8Rng) -> SurfaceJet {
    let mut coeffs = Vec::new();
    for d in 2..=4 {
        for j in 0..=d {
            coeffs.push((d - j, j, rng.gen_range(-1.0..1.0)));
        }
    }
    SurfaceJet::monge_from_coefficients(8, &coeffs)
}

fn random_point(rng: &mut ChaCha8Rng, s: &SurfaceJet) -> [f64; 2] {
    loop {
        let p = [rng.gen_range(-0.4..0.4), rng.gen_range(-0.4..0.4)];
        if s.hessian_det(p[0], p[1]).abs() > 0.05 {
            return p;
        }
    }
}

#[test]
fn closed_form_and_pipeline_are_positively_proportional() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let s = random_quartic(&mut rng);
        let [u, v] = random_point(&mut rng, &s);
        let a = curvature_bde(&s).coeffs(u, v);
        let b = pipeline_coeffs(&s, u, v).unwrap();
        let k = s.hessian_det(u, v);
        let factor = k * k;
        assert!(factor > 0.0);
        let scale = a.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        for i in 0..3 {
            assert!((a[i] - factor * b[i]).abs() <= 1e-7 * scale.max(1e-12), "{a:?} vs {factor} * {b:?}");
        }
    }
}

#[test]
fn directions_are_shape_operator_eigenvectors() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut compared = 0;
    while compared < 200 {
        let s = random_quartic(&mut rng);
        let [u, v] = random_point(&mut rng, &s);
        let f = point_frame(&s, u, v).unwrap();
        let PrincipalData::TwoReal { curvatures, directions } = principal_data(&f) else { continue };
        if (curvatures[1] - curvatures[0]).abs() < 1e-3 * (1.0 + curvatures[0].abs()) {
            continue;
        }
        let Directions::Two(sol) = solve_directions(&curvature_bde(&s), u, v) else {
            panic!("real distinct curvatures but no two directions at ({u}, {v})");
        };
        for d in directions {
            let best = sol.iter().map(|x| x.distance(&d)).fold(f64::INFINITY, f64::min);
            assert!(best <= 1e-7, "eigenvector {d:?} not among {sol:?}");
        }
        compared += 1;
    }
}

#[test]
fn lie_cartan_linearization_matches_closed_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let mut compared = 0;
    while compared < 100 {
        let mut p = Params::new().with_q(1, 3, rng.gen_range(0.2..2.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 });
        for (i, j) in [(3, 0), (0, 3), (4, 0), (2, 2), (0, 4), (5, 0), (4, 1), (3, 2), (2, 3), (1, 4), (0, 5)] {
            p.set_q(i, j, rng.gen_range(-2.0..2.0));
        }
        for j in 0..=6 {
            p.set_q(6 - j, j, rng.gen_range(-2.0..2.0));
        }
        // folded points: the discriminant is tangent to the double direction
        let (q03, q22, q30) = (p.q(0, 3), p.q(2, 2), p.q(3, 0));
        p.set_q(4, 1, 0.5 * (7.0 * q22 * q30 - 2.0 * q03 * q30 * q30));
        let s = normal_form_surface(SurfaceKind::Buchin, &p, 6).unwrap();
        let inv = FoldedInvariants::from_params(&p);
        if inv.delta_lambda.abs() < 1e-3 * inv.delta_lambda_scale {
            continue;
        }
        let closed = inv.eigenvalues();
        let bde = curvature_bde(&s);
        let numeric = LieCartanField::new(&bde).linearization_eigenvalues([0.0, 0.0, 0.0]);
        let mag = closed.iter().map(|c| c.0.hypot(c.1)).fold(0.0, f64::max);
        for (c, n) in closed.iter().zip(&numeric) {
            assert!((c.0 - n.0).hypot(c.1 - n.1) <= 1e-5 * mag, "{closed:?} vs {numeric:?}");
        }
        compared += 1;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn blow_down_of_separatrix_angles(b01 in -4.0f64..1.0, b20 in -2.0f64..2.0, plus in any::<bool>()) {
        let sign = if plus { BlowupSign::A3Plus } else { BlowupSign::A3Minus };
        prop_assume!((b01 + 1.0).abs() > 1e-3);
        let Ok(portrait) = blowup_portrait(b01, b20, sign) else { return Ok(()) };
        let e = sign.cubic_sign();
        for angle in &portrait.singular_angles {
            let c = angle.t.cos();
            if c.abs() < 1e-9 {
                continue;
            }
            let pslope = angle.t.sin() / (c * c);
            let residual = |u: f64| {
                let v = pslope * u * u;
                let dv = 2.0 * pslope * u;
                e * u.powi(3) + 2.0 * (b01 * v + b20 * u * u) * dv + u * dv * dv
            };
            let scale = 1.0 + 4.0 * (b01.abs() + 1.0) * pslope * pslope + 4.0 * b20.abs() * pslope.abs();
            for u in [0.1, -0.05, 0.01] {
                prop_assert!(residual(u).abs() <= 1e-8 * scale * u.abs().powi(3));
            }
            prop_assert!(angle.parabola.is_some());
        }
        prop_assert_eq!(portrait.singular_angles.len(), 2 + 2 * invariant_parabolas(b01, b20, sign).len());
    }

    #[test]
    fn foliation_vectors_solve_the_quadratic(a in -3.0f64..3.0, b in -3.0f64..3.0, c in -3.0f64..3.0) {
        if let Some(vs) = foliation_vectors([a, b, c]) {
            for x in vs {
                let r = a * x[0] * x[0] + b * x[0] * x[1] + c * x[1] * x[1];
                prop_assert!(r.abs() <= 1e-12 * (a.abs() + b.abs() + c.abs()));
            }
        }
        match directions_of([a, b, c]) {
            Directions::Two(d) => prop_assert!(d[0].distance(&d[1]) > 0.0),
            Directions::None => prop_assert!(b * b - 4.0 * a * c < 0.0),
            _ => {}
        }
    }
}

#[test]
fn parabolic_curve_is_a_curvature_line() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let w = Window::square(0.2);
    for _ in 0..20 {
        let mut p = Params::new().with_k(1.0).with_q(3, 0, 1.0);
        for (i, j) in [(2, 1), (1, 2), (0, 3), (4, 0), (3, 1), (2, 2), (1, 3), (0, 4)] {
            p.set_q(i, j, rng.gen_range(-1.0..1.0));
        }
        let s = normal_form_surface(SurfaceKind::Parabolic, &p, 6).unwrap();
        let bde = curvature_bde(&s);
        let k = |u: f64, v: f64| s.hessian_det(u, v);
        let curve = trace_zero_curve(&k, [0.0, 0.0], &ContourConfig::new(w)).unwrap();
        assert!(curve.len() > 10);
        let e = 1e-6;
        for q in &curve.points {
            let (u, v) = (q[0], q[1]);
            let g = [(k(u + e, v) - k(u - e, v)) / (2.0 * e), (k(u, v + e) - k(u, v - e)) / (2.0 * e)];
            let n = g[0].hypot(g[1]);
            let (du, dv) = (-g[1] / n, g[0] / n);
            let c = bde.coeffs(u, v);
            let scale = c.iter().fold(0.0f64, |m, x| m.max(x.abs()));
            let r = c[0] * du * du + c[1] * du * dv + c[2] * dv * dv;
            assert!(r.abs() <= 1e-7 * scale, "residual {r} at ({u}, {v}), scale {scale}");
        }
    }
}
