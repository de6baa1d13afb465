//! Reference figures with fixed windows and seeds.

use affina_core::{render_svg, SurfaceJet, Window};

use crate::error::CliResult;
use crate::scene::{build_scene, Show};
use crate::surface_file;

pub struct Figure {
    pub name: &'static str,
    /// Surface description in the TOML format.
    pub source: &'static str,
    pub window: Window,
    pub seeds: usize,
    pub show: Show,
}

impl Figure {
    pub fn surface(&self) -> CliResult<SurfaceJet> {
        surface_file::parse(self.source)
    }

    pub fn render(&self) -> CliResult<String> {
        let scene = build_scene(&self.surface()?, self.window, self.seeds, self.show)?;
        Ok(render_svg(&scene)?)
    }
}

const FOLDED: Show = Show { parabolic: false, discriminant: true, separatrices: true };

pub const FIGURES: &[Figure] = &[
    Figure {
        name: "folded_cusp",
        source: include_str!("../figures/folded_cusp.toml"),
        window: Window { umin: -0.5, umax: 0.5, vmin: -0.5, vmax: 0.5 },
        seeds: 36,
        show: FOLDED,
    },
    Figure {
        name: "folded_saddle",
        source: include_str!("../figures/folded_saddle.toml"),
        window: Window { umin: -0.5, umax: 0.5, vmin: -0.5, vmax: 0.5 },
        seeds: 36,
        show: FOLDED,
    },
    Figure {
        name: "folded_focus",
        source: include_str!("../figures/folded_focus.toml"),
        window: Window { umin: -0.5, umax: 0.5, vmin: -0.5, vmax: 0.5 },
        seeds: 36,
        show: FOLDED,
    },
    Figure {
        name: "folded_node",
        source: include_str!("../figures/folded_node.toml"),
        window: Window { umin: -0.5, umax: 0.5, vmin: -0.5, vmax: 0.5 },
        seeds: 36,
        show: FOLDED,
    },
    Figure {
        name: "ordinary_parabolic",
        source: include_str!("../figures/ordinary_parabolic.toml"),
        window: Window { umin: -0.3, umax: 0.3, vmin: -0.3, vmax: 0.3 },
        seeds: 16,
        show: Show { parabolic: true, discriminant: false, separatrices: false },
    },
    Figure {
        name: "gauss_cusp_r3",
        source: include_str!("../figures/gauss_cusp_r3.toml"),
        window: Window { umin: -0.3, umax: 0.3, vmin: -0.3, vmax: 0.3 },
        seeds: 16,
        show: Show { parabolic: true, discriminant: true, separatrices: true },
    },
];

pub fn find(name: &str) -> Option<&'static Figure> {
    FIGURES.iter().find(|f| f.name == name)
}
