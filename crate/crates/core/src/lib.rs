//! Affine (Blaschke) differential geometry of surface germs in Monge charts:
//! truncated jets, the affine frame, the binary differential equation of
//! affine curvature lines, classification of its singular points, curve
//! tracing and SVG rendering.
#![forbid(unsafe_code)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bde;
pub mod classify;
pub mod error;
pub mod geometry;
pub mod jets;
pub mod render;

pub use bde::{
    asymptotic_bde, curvature_bde, curvature_bde_jet, discriminant, integrate_foliation, solve_directions,
    CurvatureBde, Direction, Directions, Polyline, TraceConfig, Window,
};
pub use classify::{classify_surface, SingularityReport, Tag};
pub use error::{Error, Result};
pub use geometry::{normal_form_surface, point_frame, Params, PointFrame, SurfaceJet, SurfaceKind};
pub use jets::{Jet2, Var};
pub use render::{render_svg, Scene, Style};
