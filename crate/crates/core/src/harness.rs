//! Experiment orchestration: a JSON experiment spec in, CSV/JSON artifacts
//! and a reproducibility manifest out. Results are deterministic given the
//! spec (the seed drives every random choice) and independent of the size
//! of the worker pool.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::analysis::measure::{ebc_assumption_check, MeasureMatrix};
use crate::analysis::chung_erdos_bound;
use crate::corpus::{corpus_definition, corpus_list};
use crate::error::{Error, Result};
use crate::gaps::trajectory_from_set;
use crate::rate::RateFunction;
use crate::saddle::{enumerate_cached, validate_grid, EnumConfig, DEFAULT_NODE_BUDGET};
use crate::surface::{Mat2, SurfaceDefinition, TranslationSurface};
use crate::targets::{sweep_csv, target_sweep, SweepRow, TargetParams};

pub const TOOL: &str = "flatgap";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Radii: explicit values or a log-spaced grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GridSpec {
    Values { values: Vec<f64> },
    LogSpaced { r_min: f64, r_max: f64, samples: usize },
}

impl GridSpec {
    pub fn radii(&self) -> Result<Vec<f64>> {
        let grid = match self {
            GridSpec::Values { values } => values.clone(),
            GridSpec::LogSpaced { r_min, r_max, samples } => log_grid(*r_min, *r_max, *samples)?,
        };
        validate_grid(&grid)?;
        Ok(grid)
    }
}

/// `samples` log-spaced radii from `r_min` to `r_max` inclusive.
pub fn log_grid(r_min: f64, r_max: f64, samples: usize) -> Result<Vec<f64>> {
    if !(r_min > 0.0 && r_max > r_min && r_max.is_finite()) || samples < 2 {
        return Err(Error::Spec(format!("bad grid: r_min={r_min}, r_max={r_max}, samples={samples}")));
    }
    let (a, b) = (r_min.ln(), r_max.ln());
    Ok((0..samples)
        .map(|i| match i {
            0 => r_min,
            _ if i == samples - 1 => r_max,
            _ => (a + (b - a) * i as f64 / (samples - 1) as f64).exp(),
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TargetSpec {
    pub b: f64,
    pub c: f64,
    pub sigma: f64,
    /// Decay rate for the correlation check on the ensemble.
    #[serde(default = "default_delta")]
    pub delta: f64,
    pub k_min: u32,
    pub k_max: u32,
    /// Radius scale of the `W`/`S` bands.
    #[serde(default = "default_c_h")]
    pub c_h: f64,
    /// The constant `C` of the correlation check.
    #[serde(default = "default_ebc_constant")]
    pub ebc_constant: f64,
}

fn default_delta() -> f64 {
    0.5
}
fn default_c_h() -> f64 {
    0.5
}
fn default_ebc_constant() -> f64 {
    4.0
}
fn default_psi() -> String {
    "1".into()
}
fn default_budget() -> u64 {
    DEFAULT_NODE_BUDGET
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    /// A corpus name or a path to a surface JSON file.
    pub surface: String,
    #[serde(default = "default_psi")]
    pub psi: String,
    pub grid: GridSpec,
    #[serde(default)]
    pub targets: Option<TargetSpec>,
    /// Number of randomly rotated copies of the surface on which target hits
    /// are recorded to estimate `μ(A_k)` and `μ(A_j ∩ A_k)`.
    #[serde(default)]
    pub ensemble: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_budget")]
    pub node_budget: u64,
}

impl ExperimentSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Spec(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("specs serialize")
    }
}

/// A loaded surface with the definition it was built from.
#[derive(Clone, Debug)]
pub struct LoadedSurface {
    pub name: String,
    pub definition: SurfaceDefinition,
    pub surface: TranslationSurface,
}

/// Resolves a corpus name, or else a file path (relative to `base`).
pub fn load_surface(reference: &str, base: Option<&Path>) -> Result<LoadedSurface> {
    if corpus_list().contains(&reference) {
        let definition = corpus_definition(reference)?;
        let surface = TranslationSurface::build(&definition)?;
        return Ok(LoadedSurface { name: reference.to_string(), definition, surface });
    }
    let path = match base {
        Some(b) if Path::new(reference).is_relative() => b.join(reference),
        _ => PathBuf::from(reference),
    };
    if !path.exists() {
        return Err(crate::corpus::CorpusError::UnknownSurface(reference.to_string()).into());
    }
    let text = std::fs::read_to_string(&path).map_err(|source| Error::Input { path: path.display().to_string(), source })?;
    let definition =
        SurfaceDefinition::from_json(&text).map_err(|e| crate::surface::SurfaceError::Parse(e.to_string()))?;
    let surface = TranslationSurface::build(&definition)?;
    let name = definition.name.clone().unwrap_or_else(|| reference.to_string());
    Ok(LoadedSurface { name, definition, surface })
}

/// Artifacts of one experiment, keyed by file name.
#[derive(Clone, Debug, PartialEq)]
pub struct ResultBundle {
    pub files: BTreeMap<String, String>,
    pub warnings: Vec<String>,
}

impl ResultBundle {
    pub fn get(&self, name: &str) -> Option<&str> {
        self.files.get(name).map(String::as_str)
    }

    /// Writes every artifact into `dir`.
    pub fn write_to(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir).map_err(|source| Error::Output { path: dir.display().to_string(), source })?;
        for (name, body) in &self.files {
            let path = dir.join(name);
            std::fs::write(&path, body).map_err(|source| Error::Output { path: path.display().to_string(), source })?;
        }
        Ok(())
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// The reproducibility manifest: tool version, seed, a hash of every input
/// and of every output.
pub fn manifest(command: &str, arguments: &Value, inputs: &[String], seed: u64, outputs: &BTreeMap<String, String>) -> String {
    let mut h = Sha256::new();
    h.update(command.as_bytes());
    h.update(b"\n");
    h.update(arguments.to_string().as_bytes());
    for i in inputs {
        h.update(b"\n");
        h.update(i.as_bytes());
    }
    let inputs_sha256: String = h.finalize().iter().map(|b| format!("{b:02x}")).collect();
    let outs: BTreeMap<&str, String> = outputs.iter().map(|(k, v)| (k.as_str(), sha256_hex(v.as_bytes()))).collect();
    let m = json!({
        "tool": TOOL,
        "version": VERSION,
        "command": command,
        "arguments": arguments,
        "seed": seed,
        "inputs_sha256": inputs_sha256,
        "outputs": outs,
    });
    serde_json::to_string_pretty(&m).expect("manifests serialize") + "\n"
}

/// Runs `spec`, resolving surface paths against `base` and caching
/// enumerations in `cache` when given.
pub fn run_experiment(spec: &ExperimentSpec, base: Option<&Path>, cache: Option<&Path>) -> Result<ResultBundle> {
    let loaded = load_surface(&spec.surface, base)?;
    let s = &loaded.surface;
    let psi = RateFunction::parse(&spec.psi)?;
    let grid = spec.grid.radii()?;
    let cfg = EnumConfig { node_budget: spec.node_budget, keep_witnesses: false, parallel: true };
    let r_max = *grid.last().expect("validated grids are non-empty");
    let set = enumerate_cached(s, r_max, &cfg, cache)?;
    let traj = trajectory_from_set(&set, &psi, &grid);
    let mut warnings = traj.warnings.clone();
    let mut files = BTreeMap::new();
    files.insert("trajectory.csv".to_string(), traj.to_csv());

    let mut summary = json!({
        "surface": {
            "name": loaded.name,
            "fingerprint": s.canonical_form().fingerprint(),
            "genus": s.genus(),
            "stratum": s.stratum_signature(),
            "area": s.area(),
        },
        "psi": psi.source(),
        "seed": spec.seed,
        "trajectory": {
            "samples": traj.samples.len(),
            "dropped": traj.dropped,
            "running_min": traj.running_min(),
            "saddle_connections": set.len(),
        },
    });

    if let Some(t) = &spec.targets {
        if t.k_min > t.k_max {
            return Err(Error::Spec(format!("k_min {} exceeds k_max {}", t.k_min, t.k_max)));
        }
        let params = TargetParams::new(t.b, t.c, t.sigma, psi.clone(), t.k_min)?;
        let ks: Vec<u32> = (t.k_min..=t.k_max).collect();
        let rows = sweep_par(s, &params, t.c_h, &ks, &cfg)?;
        files.insert("sweep.csv".to_string(), sweep_csv(&rows));
        let hits: Vec<u32> = rows.iter().filter(|r| r.in_a_k).map(|r| r.k).collect();
        summary["targets"] = json!({
            "b": t.b, "c": t.c, "sigma": t.sigma, "k_min": t.k_min, "k_max": t.k_max,
            "a_k_hits": hits,
        });
        if spec.ensemble > 0 {
            let (ens, w) = ensemble_summary(s, &params, t, &ks, spec.ensemble, spec.seed, &cfg)?;
            warnings.extend(w);
            summary["ensemble"] = ens;
        }
    } else if spec.ensemble > 0 {
        return Err(Error::Spec("an ensemble needs target parameters".into()));
    }
    summary["warnings"] = json!(warnings);
    files.insert("summary.json".to_string(), serde_json::to_string_pretty(&summary).expect("summaries serialize") + "\n");
    Ok(ResultBundle { files, warnings })
}

/// `target_sweep` with the `k` values spread over the pool, merged in order.
fn sweep_par(s: &TranslationSurface, p: &TargetParams, c_h: f64, ks: &[u32], cfg: &EnumConfig) -> Result<Vec<SweepRow>> {
    let rows: Vec<Result<Vec<SweepRow>>> =
        ks.par_iter().map(|&k| target_sweep(s, p, c_h, &[k], cfg).map_err(Error::from)).collect();
    let mut out = Vec::with_capacity(ks.len());
    for r in rows {
        out.extend(r?);
    }
    Ok(out)
}

/// Target hits on `size` seeded random rotations of `s`, turned into an
/// empirical measure matrix.
fn ensemble_summary(
    s: &TranslationSurface,
    params: &TargetParams,
    t: &TargetSpec,
    ks: &[u32],
    size: usize,
    seed: u64,
    cfg: &EnumConfig,
) -> Result<(Value, Vec<String>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let angles: Vec<f64> = (0..size).map(|_| rng.gen_range(0.0..std::f64::consts::TAU)).collect();
    let member_cfg = EnumConfig { parallel: false, ..cfg.clone() };
    let hits: Vec<Result<Vec<bool>>> = angles
        .par_iter()
        .map(|&theta| {
            let rotated = s.apply_matrix(&Mat2::rotation(theta))?;
            let rows = target_sweep(&rotated, params, t.c_h, ks, &member_cfg)?;
            Ok(rows.iter().map(|r| r.in_a_k).collect())
        })
        .collect();
    let hits: Vec<Vec<bool>> = hits.into_iter().collect::<Result<_>>()?;
    let n = ks.len();
    let m = size as f64;
    let singles: Vec<f64> = (0..n).map(|k| hits.iter().filter(|h| h[k]).count() as f64 / m).collect();
    let pairs: Vec<Vec<f64>> = (0..n)
        .map(|j| (0..n).map(|k| hits.iter().filter(|h| h[j] && h[k]).count() as f64 / m).collect())
        .collect();
    let union = hits.iter().filter(|h| h.iter().any(|&b| b)).count() as f64 / m;
    let matrix = MeasureMatrix::new(singles.clone(), pairs)?;
    let mut warnings = Vec::new();
    let bound = match chung_erdos_bound(&matrix) {
        Ok(b) => Some(b),
        Err(e) => {
            warnings.push(format!("Chung–Erdős bound unavailable: {e}"));
            None
        }
    };
    let ebc = ebc_assumption_check(&matrix, t.ebc_constant, t.delta, None)?;
    Ok((
        json!({
            "size": size,
            "angles_seed": seed,
            "measures": singles,
            "empirical_union": union,
            "chung_erdos_bound": bound,
            "assumption2_monotone": ebc.assumption2.holds,
            "assumption3_holds": ebc.assumption3.holds,
            "assumption3_first_violation": ebc.assumption3.first_violation,
        }),
        warnings,
    ))
}

/// One line of the self-test.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SelftestLine {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

/// Expected strata of the bundled surfaces.
const EXPECTED_STRATA: &[(&str, &[usize])] =
    &[("torus", &[0]), ("l_2_2", &[2]), ("golden_l", &[2]), ("octagon", &[2]), ("stsurf_3", &[2])];

/// Builds every corpus surface and checks its stratum, then cross-checks the
/// square torus against a primitive-vector count.
pub fn selftest() -> Vec<SelftestLine> {
    let mut out = Vec::new();
    for name in corpus_list() {
        let expected = EXPECTED_STRATA.iter().find(|(n, _)| *n == name).map(|(_, s)| s.to_vec());
        let line = match load_surface(name, None) {
            Ok(l) => {
                let sig = l.surface.stratum_signature();
                SelftestLine {
                    name: format!("corpus {name}"),
                    pass: Some(&sig) == expected.as_ref(),
                    detail: format!("stratum {sig:?}, genus {}", l.surface.genus()),
                }
            }
            Err(e) => SelftestLine { name: format!("corpus {name}"), pass: false, detail: e.to_string() },
        };
        out.push(line);
    }
    let r: i64 = 10;
    let want = (-r..=r)
        .flat_map(|x| (-r..=r).map(move |y| (x, y)))
        .filter(|&(x, y)| (x, y) != (0, 0) && x * x + y * y <= r * r && num_integer::gcd(x, y) == 1)
        .count();
    let line = match load_surface("torus", None).and_then(|l| Ok(crate::saddle::enumerate_holonomies(&l.surface, r as f64)?)) {
        Ok(set) => SelftestLine {
            name: "torus lattice count".into(),
            pass: set.len() == want,
            detail: format!("{} saddle connections, {} primitive vectors at R = {r}", set.len(), want),
        },
        Err(e) => SelftestLine { name: "torus lattice count".into(), pass: false, detail: e.to_string() },
    };
    out.push(line);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn torus_spec() -> ExperimentSpec {
        ExperimentSpec::from_json(r#"{"surface": "torus", "grid": {"values": [1.5, 2.0, 2.5]}}"#).unwrap()
    }

    #[test]
    fn torus_trajectory_value() {
        let b = run_experiment(&torus_spec(), None, None).unwrap();
        let csv = b.get("trajectory.csv").unwrap();
        let last = csv.lines().last().unwrap();
        let scaled: f64 = last.split(',').nth(3).unwrap().parse().unwrap();
        assert!((scaled - 6.25 * 0.5f64.atan()).abs() < 1e-12);
    }

    #[test]
    fn below_systole_gives_warnings_only() {
        let spec = ExperimentSpec::from_json(r#"{"surface": "torus", "grid": {"values": [0.5, 0.9]}}"#).unwrap();
        let b = run_experiment(&spec, None, None).unwrap();
        assert_eq!(b.get("trajectory.csv").unwrap().lines().count(), 1);
        assert_eq!(b.warnings.len(), 2);
    }

    #[test]
    fn specs_reject_unknown_fields_and_bad_grids() {
        assert!(ExperimentSpec::from_json(r#"{"surface": "torus", "grid": {"values": [1]}, "bogus": 1}"#).is_err());
        let spec = ExperimentSpec::from_json(r#"{"surface": "torus", "grid": {"values": [2, 1]}}"#).unwrap();
        assert_eq!(run_experiment(&spec, None, None).unwrap_err().exit_code(), crate::error::EXIT_VALIDATION);
        assert_eq!(log_grid(1.0, 100.0, 3).unwrap(), vec![1.0, 10.000000000000002, 100.0]);
    }

    #[test]
    fn manifest_is_stable() {
        let outs: BTreeMap<String, String> = [("a.csv".to_string(), "x\n".to_string())].into();
        let m1 = manifest("gaps", &json!({"r": 1}), &["in".into()], 7, &outs);
        let m2 = manifest("gaps", &json!({"r": 1}), &["in".into()], 7, &outs);
        assert_eq!(m1, m2);
        assert!(m1.contains("\"seed\": 7"));
    }

    #[test]
    fn selftest_passes() {
        for l in selftest() {
            assert!(l.pass, "{l:?}");
        }
    }
}
