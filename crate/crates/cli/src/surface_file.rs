//! TOML surface descriptions.
//!
//! ```toml
//! [surface]
//! kind = "pick_elliptic"
//! order = 6
//!
//! [surface.params]
//! sigma = 1.0
//! q50 = -16.0
//! ```
//!
//! Monge charts list height coefficients instead, in the factorial
//! convention `h = Σ c u^i v^j / (i! j!)`:
//!
//! ```toml
//! [surface]
//! kind = "monge"
//!
//! [surface.coefficients]
//! "2,0" = 1.0
//! "0,2" = 0.5
//! ```

use std::collections::BTreeMap;
use std::path::Path;

use affina_core::{normal_form_surface, Params, SurfaceJet, SurfaceKind};
use serde::Deserialize;

use crate::error::{CliError, CliResult};

pub const DEFAULT_ORDER: usize = 6;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecFile {
    surface: SurfaceSection,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SurfaceSection {
    kind: String,
    order: Option<usize>,
    #[serde(default)]
    params: BTreeMap<String, f64>,
    #[serde(default)]
    coefficients: BTreeMap<String, f64>,
}

/// Reads and validates a surface file.
pub fn load(path: &Path) -> CliResult<SurfaceJet> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
    parse(&text).map_err(|e| match e {
        CliError::Input(m) => CliError::Input(format!("{}: {m}", path.display())),
        other => other,
    })
}

/// Parses a surface description.
pub fn parse(text: &str) -> CliResult<SurfaceJet> {
    let spec: SpecFile = toml::from_str(text).map_err(|e| CliError::Input(e.message().to_string()))?;
    let s = spec.surface;
    let kind = SurfaceKind::parse(&s.kind).ok_or_else(|| {
        CliError::Input(format!(
            "unknown surface kind {:?}; expected monge, pick_elliptic, pick_hyperbolic, buchin or parabolic",
            s.kind
        ))
    })?;
    let order = s.order.unwrap_or(DEFAULT_ORDER);
    if kind == SurfaceKind::Monge {
        if !s.params.is_empty() {
            return Err(CliError::Input("monge surfaces take [surface.coefficients], not [surface.params]".into()));
        }
        let mut coeffs = Vec::new();
        for (key, &value) in &s.coefficients {
            let (i, j) = parse_exponents(key)?;
            check_order(i, j, order, key)?;
            coeffs.push((i, j, finite(value, key)?));
        }
        return Ok(SurfaceJet::monge_from_coefficients(order, &coeffs));
    }
    if !s.coefficients.is_empty() {
        return Err(CliError::Input(format!("{kind} surfaces take [surface.params], not [surface.coefficients]")));
    }
    let mut params = Params::new();
    for (key, &value) in &s.params {
        let value = finite(value, key)?;
        match key.as_str() {
            "sigma" => params.sigma = value,
            "k" => params.k = value,
            _ => {
                let (i, j) = parse_q_name(key)?;
                check_order(i, j, order, key)?;
                params.set_q(i, j, value);
            }
        }
    }
    Ok(normal_form_surface(kind, &params, order)?)
}

fn finite(x: f64, key: &str) -> CliResult<f64> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(CliError::Input(format!("{key} = {x} is not finite")))
    }
}

fn check_order(i: usize, j: usize, order: usize, key: &str) -> CliResult<()> {
    if i + j > order {
        return Err(CliError::Input(format!("coefficient {key} has degree {} above the order {order}", i + j)));
    }
    Ok(())
}

/// `"i,j"` → `(i, j)`.
fn parse_exponents(key: &str) -> CliResult<(usize, usize)> {
    let bad = || CliError::Input(format!("coefficient key {key:?} is not of the form \"i,j\""));
    let (a, b) = key.split_once(',').ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

/// `"qIJ"` with single digits `I`, `J`.
fn parse_q_name(key: &str) -> CliResult<(usize, usize)> {
    let bad = || CliError::Input(format!("unknown parameter {key:?}; expected sigma, k or qIJ"));
    let digits = key.strip_prefix('q').ok_or_else(bad)?.as_bytes();
    if digits.len() != 2 || !digits.iter().all(u8::is_ascii_digit) {
        return Err(bad());
    }
    Ok(((digits[0] - b'0') as usize, (digits[1] - b'0') as usize))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pick_file() {
        let s = parse("[surface]\nkind = \"pick_elliptic\"\n[surface.params]\nsigma = 1.0\nq50 = -16.0\n").unwrap();
        assert_eq!(s.kind, SurfaceKind::PickElliptic);
        assert_eq!(s.params.q(5, 0), -16.0);
        assert_eq!(s.order(), DEFAULT_ORDER);
    }

    #[test]
    fn monge_file() {
        let s = parse("[surface]\nkind = \"monge\"\norder = 4\n[surface.coefficients]\n\"2,0\" = 2.0\n\"0,2\" = 1.0\n").unwrap();
        assert_eq!(s.order(), 4);
        assert_eq!(s.hjet.coeff(2, 0), 1.0);
    }

    #[test]
    fn rejections() {
        for text in [
            "[surface]\nkind = \"pick_elliptic\"\ncolour = 1\n",
            "[surface]\nkind = \"pick_elliptic\"\n[surface.params]\nsigma = 1.0\nfoo = 2.0\n",
            "[surface]\nkind = \"pick_elliptic\"\norder = 4\n[surface.params]\nq50 = 1.0\n",
            "[surface]\nkind = \"monge\"\norder = 3\n[surface.coefficients]\n\"2,2\" = 1.0\n",
            "[surface]\nkind = \"monge\"\n[surface.coefficients]\n\"2;0\" = 1.0\n",
            "[surface]\nkind = \"torus\"\n",
            "[surface]\nkind = \"buchin\"\n[surface.params]\nq21 = 1.0\n",
        ] {
            assert!(matches!(parse(text), Err(CliError::Input(_))), "{text}");
        }
    }
}
