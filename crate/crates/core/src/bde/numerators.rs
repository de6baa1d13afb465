//! Closed-form Monge-chart numerators of the regularized curvature-line equation.
//!
//! Each table lists `(coefficient, exponents)` over the height partials
//! `[h_uu, h_uv, h_vv, h_uuu, h_uuv, h_uvv, h_vvv, h_uuuu, h_uuuv, h_uuvv, h_uvvv, h_vvvv]`.
//! The stored equation is `-1/16` times these polynomials.

pub(crate) const NUM_A: &[(f64, [u8; 12])] = &[
    (4.0, [3, 0, 1, 0, 0, 0, 0, 0, 0, 0, 1, 0]),
    (-7.0, [3, 0, 0, 0, 0, 1, 1, 0, 0, 0, 0, 0]),
    (-4.0, [2, 2, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0]),
    (-12.0, [2, 1, 1, 0, 0, 0, 0, 0, 0, 1, 0, 0]),
    (14.0, [2, 1, 0, 0, 1, 0, 1, 0, 0, 0, 0, 0]),
    (21.0, [2, 1, 0, 0, 0, 2, 0, 0, 0, 0, 0, 0]),
    (4.0, [2, 0, 2, 0, 0, 0, 0, 0, 1, 0, 0, 0]),
    (1.0, [2, 0, 1, 1, 0, 0, 1, 0, 0, 0, 0, 0]),
    (-15.0, [2, 0, 1, 0, 1, 1, 0, 0, 0, 0, 0, 0]),
    (12.0, [1, 3, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0]),
    (4.0, [1, 2, 1, 0, 0, 0, 0, 0, 1, 0, 0, 0]),
    (-8.0, [1, 2, 0, 1, 0, 0, 1, 0, 0, 0, 0, 0]),
    (-48.0, [1, 2, 0, 0, 1, 1, 0, 0, 0, 0, 0, 0]),
    (-4.0, [1, 1, 2, 0, 0, 0, 0, 1, 0, 0, 0, 0]),
    (12.0, [1, 1, 1, 1, 0, 1, 0, 0, 0, 0, 0, 0]),
    (30.0, [1, 1, 1, 0, 2, 0, 0, 0, 0, 0, 0, 0]),
    (-7.0, [1, 0, 2, 1, 1, 0, 0, 0, 0, 0, 0, 0]),
    (-8.0, [0, 4, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0]),
    (4.0, [0, 3, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0]),
    (16.0, [0, 3, 0, 1, 0, 1, 0, 0, 0, 0, 0, 0]),
    (12.0, [0, 3, 0, 0, 2, 0, 0, 0, 0, 0, 0, 0]),
    (-28.0, [0, 2, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0]),
    (7.0, [0, 1, 2, 2, 0, 0, 0, 0, 0, 0, 0, 0]),
];

pub(crate) const NUM_B: &[(f64, [u8; 12])] = &[
    (4.0, [3, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1]),
    (-7.0, [3, 0, 0, 0, 0, 0, 2, 0, 0, 0, 0, 0]),
    (-4.0, [2, 2, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1]),
    (-8.0, [2, 1, 1, 0, 0, 0, 0, 0, 0, 0, 1, 0]),
    (28.0, [2, 1, 0, 0, 0, 1, 1, 0, 0, 0, 0, 0]),
    (2.0, [2, 0, 1, 0, 1, 0, 1, 0, 0, 0, 0, 0]),
    (-9.0, [2, 0, 1, 0, 0, 2, 0, 0, 0, 0, 0, 0]),
    (8.0, [1, 3, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0]),
    (-16.0, [1, 2, 0, 0, 1, 0, 1, 0, 0, 0, 0, 0]),
    (-12.0, [1, 2, 0, 0, 0, 2, 0, 0, 0, 0, 0, 0]),
    (8.0, [1, 1, 2, 0, 0, 0, 0, 0, 1, 0, 0, 0]),
    (-4.0, [1, 0, 3, 0, 0, 0, 0, 1, 0, 0, 0, 0]),
    (-2.0, [1, 0, 2, 1, 0, 1, 0, 0, 0, 0, 0, 0]),
    (9.0, [1, 0, 2, 0, 2, 0, 0, 0, 0, 0, 0, 0]),
    (-8.0, [0, 3, 1, 0, 0, 0, 0, 0, 1, 0, 0, 0]),
    (4.0, [0, 2, 2, 0, 0, 0, 0, 1, 0, 0, 0, 0]),
    (16.0, [0, 2, 1, 1, 0, 1, 0, 0, 0, 0, 0, 0]),
    (12.0, [0, 2, 1, 0, 2, 0, 0, 0, 0, 0, 0, 0]),
    (-28.0, [0, 1, 2, 1, 1, 0, 0, 0, 0, 0, 0, 0]),
    (7.0, [0, 0, 3, 2, 0, 0, 0, 0, 0, 0, 0, 0]),
];

pub(crate) const NUM_C: &[(f64, [u8; 12])] = &[
    (4.0, [2, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1]),
    (-7.0, [2, 1, 0, 0, 0, 0, 2, 0, 0, 0, 0, 0]),
    (-4.0, [2, 0, 2, 0, 0, 0, 0, 0, 0, 0, 1, 0]),
    (7.0, [2, 0, 1, 0, 0, 1, 1, 0, 0, 0, 0, 0]),
    (-4.0, [1, 3, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1]),
    (-4.0, [1, 2, 1, 0, 0, 0, 0, 0, 0, 0, 1, 0]),
    (28.0, [1, 2, 0, 0, 0, 1, 1, 0, 0, 0, 0, 0]),
    (12.0, [1, 1, 2, 0, 0, 0, 0, 0, 0, 1, 0, 0]),
    (-12.0, [1, 1, 1, 0, 1, 0, 1, 0, 0, 0, 0, 0]),
    (-30.0, [1, 1, 1, 0, 0, 2, 0, 0, 0, 0, 0, 0]),
    (-4.0, [1, 0, 3, 0, 0, 0, 0, 0, 1, 0, 0, 0]),
    (-1.0, [1, 0, 2, 1, 0, 0, 1, 0, 0, 0, 0, 0]),
    (15.0, [1, 0, 2, 0, 1, 1, 0, 0, 0, 0, 0, 0]),
    (8.0, [0, 4, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0]),
    (-12.0, [0, 3, 1, 0, 0, 0, 0, 0, 0, 1, 0, 0]),
    (-16.0, [0, 3, 0, 0, 1, 0, 1, 0, 0, 0, 0, 0]),
    (-12.0, [0, 3, 0, 0, 0, 2, 0, 0, 0, 0, 0, 0]),
    (4.0, [0, 2, 2, 0, 0, 0, 0, 0, 1, 0, 0, 0]),
    (8.0, [0, 2, 1, 1, 0, 0, 1, 0, 0, 0, 0, 0]),
    (48.0, [0, 2, 1, 0, 1, 1, 0, 0, 0, 0, 0, 0]),
    (-14.0, [0, 1, 2, 1, 0, 1, 0, 0, 0, 0, 0, 0]),
    (-21.0, [0, 1, 2, 0, 2, 0, 0, 0, 0, 0, 0, 0]),
    (7.0, [0, 0, 3, 1, 1, 0, 0, 0, 0, 0, 0, 0]),
];
