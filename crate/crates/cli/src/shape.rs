//! Shape files.
//!
//! Line-oriented text: `key=value` header lines, then one value per line.
//!
//! ```text
//! dim=2
//! type=radial
//! m=720
//! 1.0000000000000000e0
//! ...
//! ```
//!
//! Support shapes replace `m=` with `cloud=grid:<m>`, `cloud=fibonacci:<m>`
//! or `cloud=random:<m>:<seed>`. Values are written with 17 significant
//! digits, which round-trips every `f64`. Blank lines and lines starting
//! with `#` are ignored.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::str::FromStr;
use std::sync::Arc;

use minksym_core::geom::{CloudKind, DEFAULT_CLOUD_SEED};
use minksym_core::{SphereQuadrature, StarBody2D, SupportBody};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Shape {
    Radial(StarBody2D),
    Support(SupportBody),
}

/// `(ρ_in, ρ_out, M*)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShapeSummary {
    pub rho_in: f64,
    pub rho_out: f64,
    pub mean_width: f64,
}

impl Shape {
    pub fn dim(&self) -> usize {
        match self {
            Self::Radial(_) => 2,
            Self::Support(b) => b.dim(),
        }
    }

    /// Radial shapes report the radii of the body itself, support shapes
    /// the extremes of `h`.
    pub fn summary(&self) -> Result<ShapeSummary> {
        Ok(match self {
            Self::Radial(k) => ShapeSummary { rho_in: k.inner_radius(), rho_out: k.outer_radius(), mean_width: k.mean_width() },
            Self::Support(b) => {
                let (rho_in, rho_out) = b.sandwich_radii()?;
                ShapeSummary { rho_in, rho_out, mean_width: b.mean_width() }
            }
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let values = match self {
            Self::Radial(k) => {
                let _ = write!(out, "dim=2\ntype=radial\nm={}\n", k.m());
                k.radii()
            }
            Self::Support(b) => {
                let _ = write!(out, "dim={}\ntype=support\ncloud={}\n", b.dim(), cloud_spec(b.cloud().kind()));
                b.values()
            }
        };
        for v in values {
            let _ = writeln!(out, "{v:.16e}");
        }
        out
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_text()).map_err(|e| CliError::io(path, e))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text).map_err(|(line, msg)| CliError::Shape { path: path.to_path_buf(), line, msg })
    }

    /// Parses shape text; errors carry a 1-based line number.
    pub fn parse(text: &str) -> std::result::Result<Self, (usize, String)> {
        let mut dim = None;
        let mut kind = None;
        let mut m = None;
        let mut cloud = None;
        let mut values = Vec::new();
        let mut last = 0;
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            last = i + 1;
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some((key, val)) = line.split_once('=') {
                if !values.is_empty() {
                    return Err((i + 1, "header line after values".into()));
                }
                let val = val.trim();
                match key.trim() {
                    "dim" => dim = Some(parse_num::<usize>(val).map_err(|e| (i + 1, e))?),
                    "type" => kind = Some(val.to_string()),
                    "m" => m = Some(parse_num::<usize>(val).map_err(|e| (i + 1, e))?),
                    "cloud" => cloud = Some(parse_cloud(val).map_err(|e| (i + 1, e))?),
                    other => return Err((i + 1, format!("unknown header key {other:?}"))),
                }
            } else {
                values.push(parse_num::<f64>(line).map_err(|e| (i + 1, e))?);
            }
        }
        let dim = dim.ok_or((1, "missing dim= header".to_string()))?;
        let core = |e: minksym_core::Error| (last, e.to_string());
        match kind.as_deref() {
            Some("radial") => {
                if dim != 2 {
                    return Err((1, format!("radial shapes are planar, got dim={dim}")));
                }
                let m = m.ok_or((1, "radial shape needs m=".to_string()))?;
                if values.len() != m {
                    return Err((last, format!("expected {m} values, found {}", values.len())));
                }
                Ok(Self::Radial(StarBody2D::new(values).map_err(core)?))
            }
            Some("support") => {
                let kind = cloud.ok_or((1, "support shape needs cloud=".to_string()))?;
                let cloud = SphereQuadrature::from_kind(with_dim(kind, dim)).map_err(core)?;
                if cloud.dim() != dim {
                    return Err((1, format!("cloud {} is not on S^{}", cloud_spec(kind), dim - 1)));
                }
                Ok(Self::Support(SupportBody::new(Arc::new(cloud), values).map_err(core)?))
            }
            Some(other) => Err((1, format!("unknown shape type {other:?}"))),
            None => Err((1, "missing type= header".to_string())),
        }
    }
}

fn parse_num<T: FromStr>(s: &str) -> std::result::Result<T, String> {
    s.parse().map_err(|_| format!("cannot parse {s:?}"))
}

/// Parses `grid:<m>`, `fibonacci:<m>` or `random:<m>[:<seed>]`. Random clouds
/// get their dimension from the `dim=` header.
pub fn parse_cloud(spec: &str) -> std::result::Result<CloudKind, String> {
    let parts: Vec<&str> = spec.split(':').collect();
    match parts.as_slice() {
        ["grid", m] => Ok(CloudKind::Grid { m: parse_num(m)? }),
        ["fibonacci", m] => Ok(CloudKind::Fibonacci { m: parse_num(m)? }),
        ["random", m] => Ok(CloudKind::Random { n: 0, m: parse_num(m)?, seed: DEFAULT_CLOUD_SEED }),
        ["random", m, seed] => Ok(CloudKind::Random { n: 0, m: parse_num(m)?, seed: parse_num(seed)? }),
        _ => Err(format!("bad cloud spec {spec:?}; expected grid:M, fibonacci:M or random:M[:SEED]")),
    }
}

pub fn with_dim(kind: CloudKind, n: usize) -> CloudKind {
    match kind {
        CloudKind::Random { m, seed, .. } => CloudKind::Random { n, m, seed },
        other => other,
    }
}

pub fn cloud_spec(kind: CloudKind) -> String {
    match kind {
        CloudKind::Grid { m } => format!("grid:{m}"),
        CloudKind::Fibonacci { m } => format!("fibonacci:{m}"),
        CloudKind::Random { m, seed, .. } => format!("random:{m}:{seed}"),
    }
}

#[cfg(test)]
mod tests {
    use minksym_core::star2d::generators::gen_random_star;

    use super::*;

    #[test]
    fn radial_round_trip_is_exact() {
        let k = gen_random_star(9, 720, 0.1, 1.0).unwrap();
        let shape = Shape::Radial(k);
        assert_eq!(Shape::parse(&shape.to_text()).unwrap(), shape);
    }

    #[test]
    fn support_round_trip_is_exact() {
        let cloud = Arc::new(SphereQuadrature::from_kind(CloudKind::Random { n: 4, m: 64, seed: 3 }).unwrap());
        let body = SupportBody::from_fn(cloud, |d| 1.0 + d.coords()[0] / 3.0).unwrap();
        let shape = Shape::Support(body);
        let text = shape.to_text();
        assert!(text.starts_with("dim=4\ntype=support\ncloud=random:64:3\n"));
        assert_eq!(Shape::parse(&text).unwrap(), shape);
    }

    #[test]
    fn parse_errors_name_the_line() {
        assert_eq!(Shape::parse("dim=2\ntype=radial\nm=8\n1\n2\nx\n").unwrap_err().0, 6);
        assert!(Shape::parse("dim=3\ntype=radial\nm=8\n").is_err());
        assert!(Shape::parse("dim=2\ntype=radial\nm=8\n1\n").is_err());
        assert!(Shape::parse("dim=3\ntype=support\ncloud=grid:8\n").is_err());
        assert!(parse_cloud("hexagon:7").is_err());
    }
}
