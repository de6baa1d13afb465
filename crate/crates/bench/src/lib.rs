//! Fixtures shared by the benchmarks.

use affina_core::{normal_form_surface, Params, SurfaceJet, SurfaceKind};

/// Quartic Monge chart with generic coefficients.
pub fn generic_surface(order: usize) -> SurfaceJet {
    SurfaceJet::monge_from_coefficients(
        order,
        &[(2, 0, 1.0), (1, 1, 0.2), (0, 2, 0.5), (3, 0, 0.4), (1, 2, -0.3), (0, 3, 0.1), (2, 2, 0.2), (4, 0, -0.5)],
    )
}

/// Folded cusp model.
pub fn folded_cusp() -> SurfaceJet {
    let p = Params::new().with_q(1, 3, 1.0).with_q(3, 0, 1.0).with_q(0, 3, 1.0);
    normal_form_surface(SurfaceKind::Buchin, &p, 6).expect("admissible parameters")
}
