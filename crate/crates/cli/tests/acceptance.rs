//! Acceptance suite: one line per criterion, then a single assertion.

use std::path::PathBuf;

use affina_cli::figures::FIGURES;
use affina_cli::verify::{self, Check};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 20_240_601;

fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join("golden")
}

/// Reference figures are byte-identical across runs and match the stored
/// goldens; `UPDATE_GOLDEN=1` rewrites them.
fn figure_regression() -> Check {
    let update = std::env::var("UPDATE_GOLDEN").is_ok_and(|v| v == "1");
    let mut problems = Vec::new();
    for fig in FIGURES {
        let (a, b) = match (fig.render(), fig.render()) {
            (Ok(a), Ok(b)) => (a, b),
            (a, b) => {
                problems.push(format!("{}: {:?} / {:?}", fig.name, a.err(), b.err()));
                continue;
            }
        };
        if a != b {
            problems.push(format!("{}: differs between runs", fig.name));
        }
        let path = golden_dir().join(format!("{}.svg", fig.name));
        if update {
            std::fs::write(&path, &a).expect("golden directory is writable");
        }
        match std::fs::read_to_string(&path) {
            Ok(g) if g == a => {}
            Ok(_) => problems.push(format!("{}: differs from {}", fig.name, path.display())),
            Err(e) => problems.push(format!("{}: {e}", fig.name)),
        }
    }
    Check {
        name: "output.figure_regression",
        passed: problems.is_empty(),
        detail: if problems.is_empty() { format!("{} figures", FIGURES.len()) } else { problems.join("; ") },
    }
}

#[test]
fn acceptance_criteria() {
    let rng = |k: u64| ChaCha8Rng::seed_from_u64(SEED + k);
    let results: Vec<(usize, &str, Check)> = vec![
        (1, "conormal and affine normal identities", verify::conormal(200, &mut rng(1))),
        (2, "affine normal 1-jet of the Pick forms", verify::pick_xi_jet(100, &mut rng(2))),
        (3, "shape operator 1-jet of the Pick forms", verify::pick_shape(100, &mut rng(3))),
        (4, "umbilic coefficients and Hessian identity", verify::umbilic_coefficients(200, &mut rng(4))),
        (5, "classification battery and model round trip", verify::battery(1, &mut rng(5))),
        (6, "parabolic curve is a curvature line", verify::parabolic_curve(20, &mut rng(6))),
        (7, "Gauss cusp principal part and A3+ range", verify::gauss_cusp(1000, &mut rng(7))),
        (8, "blow-up portraits", verify::blowup_portraits(1, &mut rng(8))),
        (9, "figure regression", figure_regression()),
    ];
    for (i, title, c) in &results {
        println!("criterion {i} [{}] {title}: {}", if c.passed { "PASS" } else { "FAIL" }, c.detail);
    }
    let failed: Vec<usize> = results.iter().filter(|r| !r.2.passed).map(|r| r.0).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
