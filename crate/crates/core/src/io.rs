//! CSV and JSON artifacts: samples, observables, density grids, manifests
//! and hashed run directories.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::analytic::PdfGrid;
use crate::error::{Error, Result};
use crate::harness::{Histogram, Histogram2d, TOOLKIT_VERSION};
use crate::observables::ScatteringPoint;
use crate::rmt::{EnsembleConfig, GreensSample, Sampler};
use crate::scales::ControlParams;

/// Environment variable naming the default output root.
pub const OUT_ENV: &str = "RESONANCE_STATS_OUT";

pub const SAMPLES_HEADER: &str = "u,v,x";
pub const OBSERVABLES_HEADER: &str =
    "u,v,t_re,t_im,rp_re,rp_im,rm_re,rm_im,T,R_plus,R_minus,theta_T,theta_Rp,theta_Rm,d,rho";

fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn samples_csv(samples: &[GreensSample]) -> String {
    let mut s = String::with_capacity(72 * (samples.len() + 1));
    s.push_str(SAMPLES_HEADER);
    s.push('\n');
    for g in samples {
        let _ = writeln!(s, "{},{},{}", num(g.u), num(g.v), num(g.x));
    }
    s
}

pub fn write_samples(path: &Path, samples: &[GreensSample]) -> Result<()> {
    write_file(path, &samples_csv(samples))
}

/// Reads a samples CSV; `x` is recomputed from `(u, v)`.
pub fn read_samples(path: &Path) -> Result<Vec<GreensSample>> {
    let text = read_file(path)?;
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h.trim() == SAMPLES_HEADER => {}
        other => {
            return Err(Error::Parse(format!(
                "{}: expected header `{SAMPLES_HEADER}`, found {other:?}",
                path.display()
            )))
        }
    }
    lines
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, line)| {
            let fields: Vec<&str> = line.split(',').collect();
            let parse = |k: usize| -> Result<f64> {
                fields
                    .get(k)
                    .ok_or_else(|| Error::Parse(format!("{}:{}: missing column", path.display(), i + 2)))?
                    .trim()
                    .parse::<f64>()
                    .map_err(|e| Error::Parse(format!("{}:{}: {e}", path.display(), i + 2)))
            };
            Ok(GreensSample::new(parse(0)?, parse(1)?))
        })
        .collect()
}

pub fn observables_csv(points: &[ScatteringPoint]) -> String {
    let mut s = String::with_capacity(16 * 24 * (points.len() + 1));
    s.push_str(OBSERVABLES_HEADER);
    s.push('\n');
    for p in points {
        let row = [
            p.u,
            p.v,
            p.t.re,
            p.t.im,
            p.r_plus.re,
            p.r_plus.im,
            p.r_minus.re,
            p.r_minus.im,
            p.transmission,
            p.reflection_plus,
            p.reflection_minus,
            p.theta_t,
            p.theta_r_plus,
            p.theta_r_minus,
            p.deficit,
            p.rho,
        ];
        let cells: Vec<String> = row.iter().map(|&x| num(x)).collect();
        s.push_str(&cells.join(","));
        s.push('\n');
    }
    s
}

pub fn write_observables(path: &Path, points: &[ScatteringPoint]) -> Result<()> {
    write_file(path, &observables_csv(points))
}

/// Run manifest written next to every output set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub seed: u64,
    #[serde(rename = "N")]
    pub n_levels: usize,
    pub gamma: f64,
    pub sampler: Sampler,
    pub n_samples: usize,
    pub toolkit_version: String,
    pub eta: f64,
    pub t0: f64,
    pub r0: f64,
    pub phi: f64,
    /// Whether the seed was drawn at random rather than given.
    #[serde(default)]
    pub random_seed: bool,
    /// Full configuration of the command that produced the run.
    #[serde(default)]
    pub config: serde_json::Value,
}

impl Manifest {
    pub fn new(ensemble: &EnsembleConfig, params: &ControlParams, config: serde_json::Value) -> Self {
        Self {
            seed: ensemble.seed,
            n_levels: ensemble.n_levels,
            gamma: ensemble.gamma,
            sampler: ensemble.sampler,
            n_samples: ensemble.n_samples,
            toolkit_version: TOOLKIT_VERSION.to_string(),
            eta: params.eta,
            t0: params.t0,
            r0: params.r0,
            phi: params.phi,
            random_seed: false,
            config,
        }
    }

    pub fn ensemble(&self) -> EnsembleConfig {
        EnsembleConfig {
            n_levels: self.n_levels,
            gamma: self.gamma,
            sampler: self.sampler,
            seed: self.seed,
            n_samples: self.n_samples,
        }
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        write_file(path, &serde_json::to_string_pretty(self)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        serde_json::from_str(&read_file(path)?).map_err(|e| Error::from(e).context(format!("reading {}", path.display())))
    }

    /// Differences in the physics-defining fields, as `field: ours != theirs` lines.
    pub fn diff(&self, other: &Manifest) -> Vec<String> {
        let mut out = Vec::new();
        let mut cmp = |name: &str, a: String, b: String| {
            if a != b {
                out.push(format!("{name}: {a} != {b}"));
            }
        };
        cmp("seed", self.seed.to_string(), other.seed.to_string());
        cmp("N", self.n_levels.to_string(), other.n_levels.to_string());
        cmp("gamma", self.gamma.to_string(), other.gamma.to_string());
        cmp("sampler", self.sampler.to_string(), other.sampler.to_string());
        cmp("n_samples", self.n_samples.to_string(), other.n_samples.to_string());
        cmp("eta", self.eta.to_string(), other.eta.to_string());
        cmp("t0", self.t0.to_string(), other.t0.to_string());
        cmp("r0", self.r0.to_string(), other.r0.to_string());
        out
    }
}

/// 1D `x,density` or 2D `x,y,density` rows, first axis slowest.
pub fn grid_csv(grid: &PdfGrid) -> String {
    let mut s = String::new();
    if grid.axes.len() == 1 {
        s.push_str("x,density\n");
        for (x, d) in grid.axes[0].iter().zip(&grid.densities) {
            let _ = writeln!(s, "{},{}", num(*x), num(*d));
        }
    } else {
        s.push_str("x,y,density\n");
        let ny = grid.axes[1].len();
        for (i, x) in grid.axes[0].iter().enumerate() {
            for (j, y) in grid.axes[1].iter().enumerate() {
                let _ = writeln!(s, "{},{},{}", num(*x), num(*y), num(grid.densities[i * ny + j]));
            }
        }
    }
    s
}

/// Writes `<stem>.csv` and its `<stem>.json` metadata sidecar.
pub fn write_grid(dir: &Path, stem: &str, grid: &PdfGrid) -> Result<()> {
    write_file(&dir.join(format!("{stem}.csv")), &grid_csv(grid))?;
    write_file(
        &dir.join(format!("{stem}.json")),
        &serde_json::to_string_pretty(&grid.metadata)?,
    )
}

pub fn write_histogram(path: &Path, h: &Histogram) -> Result<()> {
    let mut s = String::from("lo,hi,count,density\n");
    for ((w, c), d) in h.edges.windows(2).zip(&h.counts).zip(&h.densities) {
        let _ = writeln!(s, "{},{},{c},{}", num(w[0]), num(w[1]), num(*d));
    }
    let _ = writeln!(s, "# underflow={} overflow={}", h.underflow, h.overflow);
    write_file(path, &s)
}

pub fn write_histogram_2d(path: &Path, h: &Histogram2d) -> Result<()> {
    let mut s = String::from("x_lo,x_hi,y_lo,y_hi,count,density\n");
    let (_, ny) = h.shape();
    for (k, (c, d)) in h.counts.iter().zip(&h.densities).enumerate() {
        let (i, j) = (k / ny, k % ny);
        let _ = writeln!(
            s,
            "{},{},{},{},{c},{}",
            num(h.x_edges[i]),
            num(h.x_edges[i + 1]),
            num(h.y_edges[j]),
            num(h.y_edges[j + 1]),
            num(*d)
        );
    }
    let _ = writeln!(s, "# outside={}", h.outside);
    write_file(path, &s)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    write_file(path, &serde_json::to_string_pretty(value)?)
}

/// Output root: the explicit path, else `$RESONANCE_STATS_OUT`, else `./runs`.
pub fn output_root(explicit: Option<&Path>) -> PathBuf {
    explicit
        .map(Path::to_path_buf)
        .or_else(|| std::env::var_os(OUT_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("runs"))
}

/// Sorts object keys recursively so equal configs hash equally.
fn canonical(value: &serde_json::Value) -> serde_json::Value {
    match value {
        serde_json::Value::Object(map) => {
            let sorted: BTreeMap<_, _> = map.iter().map(|(k, v)| (k.clone(), canonical(v))).collect();
            serde_json::Value::Object(sorted.into_iter().collect())
        }
        serde_json::Value::Array(items) => serde_json::Value::Array(items.iter().map(canonical).collect()),
        other => other.clone(),
    }
}

/// First 16 hex digits of the SHA-256 of the canonical JSON of `config`.
pub fn config_hash<T: Serialize>(config: &T) -> Result<String> {
    let value = canonical(&serde_json::to_value(config)?);
    let digest = Sha256::digest(serde_json::to_string(&value)?.as_bytes());
    Ok(hex::encode(digest)[..16].to_string())
}

/// `<root>/<prefix>-<hash>`.
pub fn run_dir<T: Serialize>(root: &Path, prefix: &str, config: &T) -> Result<PathBuf> {
    Ok(root.join(format!("{prefix}-{}", config_hash(config)?)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::observables::evaluate;

    #[test]
    fn samples_round_trip_exactly() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("samples.csv");
        let samples = vec![
            GreensSample::new(0.1, 0.7),
            GreensSample::new(-1.0 / 3.0, 1e-300),
            GreensSample::new(2.5, 0.0),
        ];
        write_samples(&path, &samples).unwrap();
        let back = read_samples(&path).unwrap();
        assert_eq!(back, samples);
        let text = fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("u,v,x\n"));
        // 17 significant digits
        assert!(text.contains("-3.3333333333333331e-1"));
    }

    #[test]
    fn observables_have_sixteen_columns() {
        let p = ControlParams::perfect(1.0, 1.0);
        let pts: Vec<_> = [GreensSample::new(0.2, 0.9)].iter().map(|s| evaluate(s, &p)).collect();
        let csv = observables_csv(&pts);
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap().split(',').count(), 16);
        assert_eq!(lines.next().unwrap().split(',').count(), 16);
    }

    #[test]
    fn bad_header_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.csv");
        fs::write(&path, "a,b\n1,2\n").unwrap();
        assert!(read_samples(&path).is_err());
    }

    #[test]
    fn manifest_diff_and_keys() {
        let ens = EnsembleConfig::new(200, 1.0, 7, 1000);
        let m = Manifest::new(&ens, &ControlParams::perfect(1.0, 1.0), serde_json::Value::Null);
        let v: serde_json::Value = serde_json::to_value(&m).unwrap();
        for k in ["seed", "N", "gamma", "sampler", "n_samples", "toolkit_version"] {
            assert!(v.get(k).is_some(), "{k}");
        }
        let other = Manifest::new(&ens, &ControlParams::perfect(2.0, 1.0), serde_json::Value::Null);
        assert_eq!(m.diff(&other), vec!["eta: 1 != 2".to_string()]);
        assert!(m.diff(&m).is_empty());
    }

    #[test]
    fn hash_ignores_key_order() {
        let a: serde_json::Value = serde_json::from_str(r#"{"a":1,"b":{"c":2,"d":3}}"#).unwrap();
        let b: serde_json::Value = serde_json::from_str(r#"{"b":{"d":3,"c":2},"a":1}"#).unwrap();
        assert_eq!(config_hash(&a).unwrap(), config_hash(&b).unwrap());
        let c: serde_json::Value = serde_json::from_str(r#"{"a":2}"#).unwrap();
        assert_ne!(config_hash(&a).unwrap(), config_hash(&c).unwrap());
        assert_eq!(config_hash(&a).unwrap().len(), 16);
    }
}
