use affina_core::geometry::{
    affine_normal_jet, frame_jets, pick_shape_linear, pick_xi_linear, principal_data, shape_operator_jet, PrincipalData,
};
use affina_core::{normal_form_surface, point_frame, Params, SurfaceJet, SurfaceKind};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn norm(a: [f64; 3]) -> f64 {
    dot(a, a).sqrt()
}

/// Random quartic with a non-parabolic point near the origin.
fn random_surface(rng: &mut ChaCha8Rng) -> (SurfaceJet, [f64; 2]) {
    loop {
        let mut coeffs = Vec::new();
        for d in 2..=4 {
            for j in 0..=d {
                coeffs.push((d - j, j, rng.gen_range(-1.0..1.0)));
            }
        }
        let s = SurfaceJet::monge_from_coefficients(6, &coeffs);
        let p = [rng.gen_range(-0.3..0.3), rng.gen_range(-0.3..0.3)];
        if s.hessian_det(p[0], p[1]).abs() > 0.05 {
            return (s, p);
        }
    }
}

fn random_pick(rng: &mut ChaCha8Rng, kind: SurfaceKind) -> (SurfaceJet, Params) {
    let mut p = Params::new().with_sigma(rng.gen_range(-2.0..2.0));
    for d in 4..=6 {
        for j in 0..=d {
            p.set_q(d - j, j, rng.gen_range(-2.0..2.0));
        }
    }
    (normal_form_surface(kind, &p, 6).unwrap(), p)
}

#[test]
fn conormal_identities_and_fd_derivatives() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let h = 1e-5;
    for _ in 0..200 {
        let (s, [u, v]) = random_surface(&mut rng);
        let f = point_frame(&s, u, v).unwrap();
        assert!((dot(f.nu, f.xi) - 1.0).abs() <= 1e-9);
        let at = |du: f64, dv: f64| point_frame(&s, u + du, v + dv).unwrap();
        let (pu, mu, pv, mv) = (at(h, 0.0), at(-h, 0.0), at(0.0, h), at(0.0, -h));
        let fd = |a: [f64; 3], b: [f64; 3]| [0, 1, 2].map(|i| (a[i] - b[i]) / (2.0 * h));
        let checks = [
            (fd(pu.nu, mu.nu), f.nu_u),
            (fd(pv.nu, mv.nu), f.nu_v),
            (fd(pu.xi, mu.xi), f.xi_u),
            (fd(pv.xi, mv.xi), f.xi_v),
        ];
        for (approx, exact) in checks {
            let err = norm([0, 1, 2].map(|i| approx[i] - exact[i]));
            assert!(err <= 1e-6 * norm(exact).max(1.0), "{approx:?} vs {exact:?}");
        }
        assert!(dot(f.nu, fd(pu.xi, mu.xi)).abs() <= 1e-6);
        assert!(dot(f.nu, fd(pv.xi, mv.xi)).abs() <= 1e-6);
    }
}

#[test]
fn shape_operator_is_self_adjoint_and_matches_normal_derivatives() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..200 {
        let (s, [u, v]) = random_surface(&mut rng);
        let f = point_frame(&s, u, v).unwrap();
        let b = f.shape_operator();
        let g = [[f.g11, f.g12], [f.g12, f.g22]];
        let apply = |m: [[f64; 2]; 2], x: [f64; 2]| [m[0][0] * x[0] + m[0][1] * x[1], m[1][0] * x[0] + m[1][1] * x[1]];
        let gf = |x: [f64; 2], y: [f64; 2]| {
            let gy = apply(g, y);
            x[0] * gy[0] + x[1] * gy[1]
        };
        let x = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        let y = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        let (l, r) = (gf(apply(b, x), y), gf(x, apply(b, y)));
        assert!((l - r).abs() <= 1e-9 * l.abs().max(r.abs()).max(1.0));

        let (xu, xv) = (f.x_u(&s), f.x_v(&s));
        for (d, bu, bv) in [(f.xi_u, f.b11, f.b21), (f.xi_v, f.b12, f.b22)] {
            let chart = d.map(|c| c * f.sign);
            let res = [0, 1, 2].map(|i| chart[i] - (bu * xu[i] + bv * xv[i]));
            assert!(norm(res) <= 1e-8 * norm(d).max(1e-12), "{res:?}");
        }

        let routes = [(f.l, f.m, f.m, f.n), (
            -f.sign * (f.b11 * f.g11 + f.b21 * f.g12),
            -f.sign * (f.b11 * f.g12 + f.b21 * f.g22),
            -f.sign * (f.b12 * f.g11 + f.b22 * f.g12),
            -f.sign * (f.b12 * f.g12 + f.b22 * f.g22),
        )];
        let (a, c) = (routes[0], routes[1]);
        for (x, y) in [(a.0, c.0), (a.1, c.1), (a.2, c.2), (a.3, c.3)] {
            assert!((x - y).abs() <= 1e-8 * (1.0 + x.abs()), "{x} vs {y}");
        }
    }
}

#[test]
fn cross_product_route_agrees_up_to_sign() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..100 {
        let (s, [u, v]) = random_surface(&mut rng);
        let fj = frame_jets(&s, u, v, 6).unwrap();
        let cross = fj.xi_cross().unwrap();
        let a = [0, 1, 2].map(|i| fj.xi[i].constant_term());
        let b = [0, 1, 2].map(|i| cross[i].constant_term());
        let sign = dot(a, b).signum();
        let err = norm([0, 1, 2].map(|i| a[i] - sign * b[i]));
        assert!(err <= 1e-8 * norm(a));
    }
}

#[test]
fn pick_closed_forms() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for kind in [SurfaceKind::PickElliptic, SurfaceKind::PickHyperbolic] {
        for _ in 0..100 {
            let (s, p) = random_pick(&mut rng, kind);
            let xi = affine_normal_jet(&s).unwrap();
            let want = pick_xi_linear(kind, &p).unwrap();
            for r in 0..2 {
                assert!((xi[r].coeff(1, 0) - want[r][0]).abs() <= 1e-9, "{kind} xi{r}_u");
                assert!((xi[r].coeff(0, 1) - want[r][1]).abs() <= 1e-9, "{kind} xi{r}_v");
            }
            assert!((xi[2].constant_term() - 1.0).abs() <= 1e-12);
            assert!(xi[2].coeff(1, 0).abs() <= 1e-12 && xi[2].coeff(0, 1).abs() <= 1e-12);

            let b = shape_operator_jet(&s, 0.0, 0.0).unwrap();
            let want = pick_shape_linear(kind, &p).unwrap();
            for (k, name) in ["b11", "b12", "b21", "b22"].iter().enumerate() {
                let got = [b[k].coeff(0, 0), b[k].coeff(1, 0), b[k].coeff(0, 1)];
                for t in 0..3 {
                    assert!((got[t] - want[k][t]).abs() <= 1e-9, "{kind} {name}[{t}]: {} vs {}", got[t], want[k][t]);
                }
            }
        }
    }
}

#[test]
fn shape_jet_constant_term_matches_point_frame() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..50 {
        let (s, [u, v]) = random_surface(&mut rng);
        let f = point_frame(&s, u, v).unwrap();
        let b = shape_operator_jet(&s, u, v).unwrap();
        for (j, x) in b.iter().zip([f.b11, f.b12, f.b21, f.b22]) {
            assert!((j.constant_term() - x).abs() <= 1e-10 * (1.0 + x.abs()));
        }
    }
}

#[test]
fn principal_directions_are_metric_orthogonal() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut seen = 0;
    for _ in 0..300 {
        let (s, [u, v]) = random_surface(&mut rng);
        let f = point_frame(&s, u, v).unwrap();
        if f.sign < 0.0 {
            continue;
        }
        if let PrincipalData::TwoReal { directions, .. } = principal_data(&f) {
            let (x, y) = (directions[0].unit(), directions[1].unit());
            let g = f.g11 * x[0] * y[0] + f.g12 * (x[0] * y[1] + x[1] * y[0]) + f.g22 * x[1] * y[1];
            assert!(g.abs() <= 1e-8 * (f.g11.abs() + f.g22.abs()));
            seen += 1;
        }
    }
    assert!(seen > 50);
}
