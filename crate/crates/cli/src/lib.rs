//! The `affina` command line.
//!
//! Exit codes: 0 success, 1 invalid input, 2 degenerate or unclassifiable
//! configuration, 3 numerical failure.

pub mod error;
pub mod figures;
pub mod scene;
pub mod surface_file;
pub mod verify;

use std::ffi::OsString;
use std::path::PathBuf;

use affina_core::bde::{b20_a3minus, b20bar_a3plus, blowup_portrait, BlowupPortrait, BlowupSign};
use affina_core::geometry::{principal_data, PrincipalData};
use affina_core::{classify_surface, curvature_bde, point_frame, render_svg, PointFrame, SingularityReport, Tag, TraceConfig, Window};
use clap::{Parser, Subcommand};

pub use error::{CliError, CliResult};
use scene::{build_scene, trace_leaves, Foliations, Show, TraceOutput};

#[derive(Debug, Parser)]
#[command(name = "affina", version, about = "Affine curvature lines of surface germs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Affine frame at a point of the surface.
    Analyze {
        file: PathBuf,
        /// Point `u,v`.
        #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
        at: [f64; 2],
        #[arg(long)]
        json: bool,
    },
    /// Singularity type of the curvature-line equation at the base point.
    Classify {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Curvature lines through a grid of seeds, as JSON.
    Trace {
        file: PathBuf,
        /// `umin,umax,vmin,vmax`.
        #[arg(long, value_parser = parse_window, allow_hyphen_values = true)]
        window: Window,
        #[arg(long)]
        seeds: usize,
        /// `1`, `2` or `both`.
        #[arg(long, default_value = "both", value_parser = parse_foliations)]
        foliation: Foliations,
    },
    /// SVG figure of both foliations.
    Render {
        file: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        /// `umin,umax,vmin,vmax`.
        #[arg(long, value_parser = parse_window, allow_hyphen_values = true)]
        window: Window,
        #[arg(long, default_value_t = 16)]
        seeds: usize,
        /// Extra layers: `parabolic`, `discriminant`, `separatrices`.
        #[arg(long, value_parser = parse_show, default_value = "")]
        show: Show,
    },
    /// Singular angles of the blown-up Gauss-cusp model.
    Blowup {
        #[arg(long, allow_hyphen_values = true)]
        b01: f64,
        /// Defaults to the value determined by `b01`.
        #[arg(long, allow_hyphen_values = true)]
        b20: Option<f64>,
        /// `a3plus` or `a3minus`.
        #[arg(long = "type", value_parser = parse_sign)]
        kind: BlowupSign,
        #[arg(long)]
        json: bool,
    },
    /// Randomized self-checks.
    Verify {
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// Defaults to `AFFINA_SEED`, then 42.
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn parse_floats<const N: usize>(s: &str) -> Result<[f64; N], String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != N {
        return Err(format!("expected {N} comma-separated numbers, got {:?}", s));
    }
    let mut out = [0.0; N];
    for (o, p) in out.iter_mut().zip(parts) {
        *o = p.trim().parse::<f64>().map_err(|e| format!("{p:?}: {e}"))?;
        if !o.is_finite() {
            return Err(format!("{p:?} is not finite"));
        }
    }
    Ok(out)
}

fn parse_pair(s: &str) -> Result<[f64; 2], String> {
    parse_floats::<2>(s)
}

fn parse_window(s: &str) -> Result<Window, String> {
    let [a, b, c, d] = parse_floats::<4>(s)?;
    let w = Window::new(a, b, c, d);
    if !w.is_valid() {
        return Err(format!("empty window {s:?}; expected umin < umax and vmin < vmax"));
    }
    Ok(w)
}

fn parse_foliations(s: &str) -> Result<Foliations, String> {
    Foliations::parse(s).ok_or_else(|| format!("{s:?}: expected 1, 2 or both"))
}

fn parse_show(s: &str) -> Result<Show, String> {
    Show::parse(s)
}

fn parse_sign(s: &str) -> Result<BlowupSign, String> {
    BlowupSign::parse(s).ok_or_else(|| format!("{s:?}: expected a3plus or a3minus"))
}

/// Parses `args` (program name first), runs the command and returns the
/// exit code.
pub fn run<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let mut stdout = std::io::stdout().lock();
    match execute(cli.command, &mut stdout) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Runs a parsed command, writing its report to `out`.
pub fn execute(cmd: Command, out: &mut dyn std::io::Write) -> CliResult<u8> {
    match cmd {
        Command::Analyze { file, at, json } => {
            let s = surface_file::load(&file)?;
            let f = point_frame(&s, at[0], at[1])?;
            if json {
                emit(out, &serde_json::to_string_pretty(&f)?)?;
            } else {
                emit(out, &frame_text(&f))?;
            }
            Ok(0)
        }
        Command::Classify { file, json } => {
            let s = surface_file::load(&file)?;
            let r = classify_surface(&s);
            if json {
                emit(out, &serde_json::to_string_pretty(&r)?)?;
            } else {
                emit(out, &report_text(&r))?;
            }
            if r.tag == Tag::Degenerate {
                return Err(CliError::Degenerate(r.reason.clone().unwrap_or_else(|| "unclassifiable base point".into())));
            }
            Ok(0)
        }
        Command::Trace { file, window, seeds, foliation } => {
            let s = surface_file::load(&file)?;
            let polylines = trace_leaves(&curvature_bde(&s), &TraceConfig::new(window), seeds, foliation)?;
            emit(out, &serde_json::to_string(&TraceOutput { window, polylines })?)?;
            Ok(0)
        }
        Command::Render { file, output, window, seeds, show } => {
            let s = surface_file::load(&file)?;
            let svg = render_svg(&build_scene(&s, window, seeds, show)?)?;
            std::fs::write(&output, svg).map_err(|source| CliError::Io { path: output.display().to_string(), source })?;
            Ok(0)
        }
        Command::Blowup { b01, b20, kind, json } => {
            let b20 = match b20 {
                Some(b) => b,
                None => match kind {
                    BlowupSign::A3Plus => b20bar_a3plus(b01)?,
                    BlowupSign::A3Minus => b20_a3minus(b01)?,
                },
            };
            let p = blowup_portrait(b01, b20, kind)?;
            if json {
                emit(out, &serde_json::to_string_pretty(&p)?)?;
            } else {
                emit(out, &portrait_text(&p))?;
            }
            Ok(0)
        }
        Command::Verify { trials, seed } => {
            let seed = match seed {
                Some(s) => s,
                None => match std::env::var("AFFINA_SEED") {
                    Ok(v) => v.trim().parse().map_err(|_| CliError::Input(format!("AFFINA_SEED={v:?} is not an integer")))?,
                    Err(_) => verify::DEFAULT_SEED,
                },
            };
            let checks = verify::run_suite(trials, seed);
            let mut text = format!("seed {seed}, trials {trials}\n");
            for c in &checks {
                text.push_str(&c.line());
                text.push('\n');
            }
            let failed = checks.iter().filter(|c| !c.passed).count();
            text.push_str(&format!("{} passed, {failed} failed", checks.len() - failed));
            emit(out, &text)?;
            Ok(if failed == 0 { 0 } else { 3 })
        }
    }
}

fn emit(out: &mut dyn std::io::Write, text: &str) -> CliResult<()> {
    writeln!(out, "{text}").map_err(|source| CliError::Io { path: "<stdout>".into(), source })
}

fn frame_text(f: &PointFrame) -> String {
    let v3 = |x: [f64; 3]| format!("({:.10}, {:.10}, {:.10})", x[0], x[1], x[2]);
    let mut s = String::new();
    s.push_str(&format!("point    ({}, {})\n", f.point[0], f.point[1]));
    s.push_str(&format!("L M N    {:.10} {:.10} {:.10}\n", f.big_l, f.big_m, f.big_n));
    s.push_str(&format!("metric   g11 {:.10}  g12 {:.10}  g22 {:.10}\n", f.g11, f.g12, f.g22));
    s.push_str(&format!("conormal {}\n", v3(f.nu)));
    s.push_str(&format!("normal   {}\n", v3(f.xi)));
    s.push_str(&format!("l m n    {:.10} {:.10} {:.10}\n", f.l, f.m, f.n));
    s.push_str(&format!("shape    [[{:.10}, {:.10}], [{:.10}, {:.10}]]\n", f.b11, f.b12, f.b21, f.b22));
    s.push_str(&format!("K_e      {:.10}\n", f.ke));
    s.push_str(&match principal_data(f) {
        PrincipalData::TwoReal { curvatures, directions } => {
            let (a, b) = (directions[0].unit(), directions[1].unit());
            format!(
                "principal {:.10} along ({:.6}, {:.6}); {:.10} along ({:.6}, {:.6})",
                curvatures[0], a[0], a[1], curvatures[1], b[0], b[1]
            )
        }
        PrincipalData::ComplexPair { re, im } => format!("principal complex pair {re:.10} ± {im:.10}i"),
        PrincipalData::Double { curvature, .. } => format!("principal double {curvature:.10}, not diagonalizable"),
        PrincipalData::Isotropic { curvature } => format!("principal umbilic {curvature:.10}"),
    });
    s
}

fn report_text(r: &SingularityReport) -> String {
    let mut s = r.tag.name().to_string();
    if let Some(alt) = r.alternate_tag {
        s.push_str(&format!(" (opposite normal: {})", alt.name()));
    }
    if let Some(reason) = &r.reason {
        s.push_str(&format!("\nreason: {reason}"));
    }
    for (k, v) in &r.invariants {
        s.push_str(&format!("\n{k} = {v}"));
    }
    for (k, v) in &r.genericity {
        s.push_str(&format!("\n{k}: {}", if *v { "holds" } else { "fails" }));
    }
    s
}

fn portrait_text(p: &BlowupPortrait) -> String {
    let mut s = format!(
        "{} b01 = {} b20 = {}: {} singular angles, {} nodes, {} saddles",
        p.sign.name(),
        p.b01,
        p.b20,
        p.singular_angles.len(),
        p.nodes(),
        p.saddles()
    );
    for a in &p.singular_angles {
        s.push_str(&format!("\n  t = {:.6}  {:?}  A_t = {:.6e}  -2B = {:.6e}", a.t, a.kind, a.a_t, a.minus_2b));
    }
    s
}
