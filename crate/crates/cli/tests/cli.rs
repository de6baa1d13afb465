use std::path::PathBuf;
use std::process::{Command, Output};

use affina_core::bde::BlowupPortrait;
use affina_core::{PointFrame, SingularityReport};
use affina_cli::scene::TraceOutput;

fn affina(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_affina")).args(args).output().expect("binary runs")
}

fn figure(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("figures").join(name).display().to_string()
}

fn temp_file(name: &str, contents: &str) -> String {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path.display().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn classify_elliptic_sigma_one_as_json() {
    let o = affina(&["classify", &figure("umbilic_d3.toml"), "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let report: SingularityReport = serde_json::from_str(&text).unwrap();
    assert_eq!(report.tag.name(), "D3");
    let again: SingularityReport = serde_json::from_str(&serde_json::to_string(&report).unwrap()).unwrap();
    assert_eq!(again, report);
}

#[test]
fn classify_gauss_cusp_r3() {
    let o = affina(&["classify", &figure("gauss_cusp_r3.toml"), "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let report: SingularityReport = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report.tag.name(), "GaussCuspR3");
    assert!((report.invariants["b01"] + 3.0 / 14.0).abs() < 1e-12);
    let text = stdout(&affina(&["classify", &figure("gauss_cusp_r3.toml")]));
    assert!(text.starts_with("GaussCuspR3"));
}

#[test]
fn blowup_a3_plus_example() {
    let o = affina(&["blowup", "--b01", "-0.3929", "--type", "a3plus", "--json"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let p: BlowupPortrait = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(p.singular_angles.len(), 6);
    assert_eq!(p.nodes(), 2);
    assert_eq!(p.saddles(), 4);
    let text = stdout(&affina(&["blowup", "--b01", "-0.3929", "--type", "a3plus"]));
    assert!(text.contains("6 singular angles, 2 nodes, 4 saddles"), "{text}");
}

#[test]
fn blowup_outside_the_range_is_invalid_input() {
    assert_eq!(affina(&["blowup", "--b01", "0.5", "--type", "a3plus"]).status.code(), Some(1));
}

#[test]
fn analyze_round_trips_the_frame() {
    let file = temp_file("analyze.toml", "[surface]\nkind = \"monge\"\n[surface.coefficients]\n\"2,0\" = 1.0\n\"0,2\" = 2.0\n\"3,0\" = 0.3\n");
    let o = affina(&["analyze", &file, "--at", "-0.1,0.05", "--json"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let f: PointFrame = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(f.point, [-0.1, 0.05]);
    let again: PointFrame = serde_json::from_str(&serde_json::to_string(&f).unwrap()).unwrap();
    assert_eq!(again, f);
    let text = stdout(&affina(&["analyze", &file, "--at", "-0.1,0.05"]));
    assert!(text.contains("principal"));
}

#[test]
fn analyze_at_a_parabolic_point_is_degenerate() {
    let o = affina(&["analyze", &figure("ordinary_parabolic.toml"), "--at", "0,0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn trace_emits_parseable_polylines() {
    let o = affina(&["trace", &figure("folded_saddle.toml"), "--window", "-0.3,0.3,-0.3,0.3", "--seeds", "4", "--foliation", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let t: TraceOutput = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(!t.polylines.is_empty());
    assert!(t.polylines.iter().all(|p| p.foliation == 1));
    let again: TraceOutput = serde_json::from_str(&serde_json::to_string(&t).unwrap()).unwrap();
    assert_eq!(again, t);
}

#[test]
fn render_writes_an_svg() {
    let out = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("render.svg");
    let o = affina(&[
        "render",
        &figure("ordinary_parabolic.toml"),
        "-o",
        out.to_str().unwrap(),
        "--window",
        "-0.5,0.5,-0.5,0.5",
        "--seeds",
        "4",
        "--show",
        "parabolic",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let svg = std::fs::read_to_string(out).unwrap();
    assert!(svg.contains("class=\"parabolic\""));
}

#[test]
fn invalid_inputs_exit_with_one() {
    let unknown = temp_file("unknown.toml", "[surface]\nkind = \"pick_elliptic\"\nsigma = 1.0\n");
    let high = temp_file("high.toml", "[surface]\nkind = \"monge\"\norder = 3\n[surface.coefficients]\n\"4,0\" = 1.0\n");
    for args in [
        vec!["classify", unknown.as_str()],
        vec!["classify", high.as_str()],
        vec!["classify", "/nonexistent/surface.toml"],
        vec!["trace", high.as_str(), "--window", "1,0,0,1", "--seeds", "3"],
        vec!["blowup", "--b01", "x", "--type", "a3plus"],
        vec!["frobnicate"],
    ] {
        assert_eq!(affina(&args).status.code(), Some(1), "{args:?}");
    }
}

#[test]
fn degenerate_cusp_exits_with_two() {
    let file = temp_file("degenerate.toml", "[surface]\nkind = \"parabolic\"\n[surface.params]\nk = 1.0\nq21 = 1.0\nq40 = 3.0\n");
    let o = affina(&["classify", &file]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).starts_with("Degenerate"));
}

#[test]
fn verify_is_deterministic_and_reads_the_seed_from_the_environment() {
    let a = affina(&["verify", "--trials", "4", "--seed", "5"]);
    let b = Command::new(env!("CARGO_BIN_EXE_affina"))
        .args(["verify", "--trials", "4"])
        .env("AFFINA_SEED", "5")
        .output()
        .unwrap();
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).starts_with("seed 5, trials 4"));
    assert_eq!(a.status.code(), Some(0), "{}", stdout(&a));
}
