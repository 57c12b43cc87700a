use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use flatgap::analysis::{condensation_dichotomy, psi0_construct, psi_squared_dichotomy, Psi0Config};
use flatgap::error::{Error, Result, EXIT_INTERNAL};
use flatgap::gaps::{angles, gap_distribution, histogram_csv, trajectory_from_set};
use flatgap::harness::{load_surface, log_grid, manifest, run_experiment, selftest, ExperimentSpec, LoadedSurface};
use flatgap::rate::RateFunction;
use flatgap::saddle::{cache_dir_from_env, enumerate_cached, EnumConfig, DEFAULT_NODE_BUDGET};
use flatgap::targets::{sweep_csv, target_sweep, TargetParams};

/// Saddle connections, horizontal gaps and shrinking targets on translation surfaces.
///
/// Surfaces are corpus names (torus, l_2_2, golden_l, octagon, stsurf_3) or
/// paths to surface JSON files. With `--out DIR` artifacts and a
/// `manifest.json` are written to DIR; otherwise the artifact goes to stdout
/// and the manifest to stderr. Enumerations are cached in $FLATGAP_CACHE_DIR
/// when set. Exit codes: 0 success, 2 invalid input, 3 budget exceeded,
/// 4 internal failure.
#[derive(Parser, Debug)]
#[command(name = "flatgap", version)]
struct Cli {
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Output {
    /// Directory for artifacts and the manifest.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct Budget {
    /// Unfolding node budget; exceeding it exits with code 3.
    #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
    budget: u64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Validate a surface and report genus, stratum, area and fingerprint.
    Build {
        surface: String,
        /// Include the canonical form rendering.
        #[arg(long)]
        canonical: bool,
        #[command(flatten)]
        output: Output,
    },
    /// List saddle-connection holonomy vectors up to a radius, as CSV.
    Enumerate {
        surface: String,
        #[arg(long)]
        radius: f64,
        /// Drop the edge-crossing witnesses from the output.
        #[arg(long)]
        no_witnesses: bool,
        #[command(flatten)]
        budget: Budget,
        #[command(flatten)]
        output: Output,
    },
    /// Trajectory of ψ(R)·R²·ζ(R) over a radius grid.
    Gaps {
        surface: String,
        /// Rate function ψ, e.g. "sqrt(log(t+4)*loglog(t+4))".
        #[arg(long, default_value = "1")]
        psi: String,
        /// Comma-separated radii (overrides --r-min/--r-max/--samples).
        #[arg(long, value_delimiter = ',')]
        grid: Option<Vec<f64>>,
        #[arg(long, default_value_t = 1.0)]
        r_min: f64,
        #[arg(long, default_value_t = 10.0)]
        r_max: f64,
        /// Number of log-spaced radii.
        #[arg(long, default_value_t = 20)]
        samples: usize,
        /// Also write a histogram of normalized gaps at the largest radius.
        #[arg(long)]
        histogram_bins: Option<usize>,
        #[command(flatten)]
        budget: Budget,
        #[command(flatten)]
        output: Output,
    },
    /// Sweep A_k, W and S membership over k.
    Targets {
        surface: String,
        #[arg(long, default_value = "1")]
        psi: String,
        /// Geodesic step base b > 1.
        #[arg(long, default_value_t = std::f64::consts::E)]
        b: f64,
        /// Trapezoid inner edge c ∈ [0, 1).
        #[arg(long, default_value_t = 0.0)]
        c: f64,
        /// Trapezoid height σ ∈ (0, 1).
        #[arg(long, default_value_t = 0.5)]
        sigma: f64,
        #[arg(long, default_value_t = 0)]
        k_min: u32,
        #[arg(long, default_value_t = 5)]
        k_max: u32,
        /// Radius scale of the W and S bands.
        #[arg(long, default_value_t = 0.5)]
        c_h: f64,
        #[command(flatten)]
        budget: Budget,
        #[command(flatten)]
        output: Output,
    },
    /// Certify divergence/convergence of ∑ φ(bʲ)⁻¹ (or ∑ ψ(bʲ)⁻² with --psi).
    Series {
        /// φ as an expression in t.
        #[arg(long, conflicts_with = "psi", required_unless_present = "psi")]
        phi: Option<String>,
        /// ψ; the series uses φ = ψ².
        #[arg(long)]
        psi: Option<String>,
        #[arg(long, default_value_t = std::f64::consts::E)]
        base: f64,
        #[arg(long, default_value_t = 100_000)]
        terms: u64,
        /// Also build the thinned ψ₀ (needs --psi) and list its breakpoints.
        #[arg(long, requires = "psi")]
        psi0: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Run a JSON experiment spec.
    Experiment {
        spec: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Check the bundled corpus and the lattice oracle.
    Selftest {
        #[command(flatten)]
        output: Output,
    },
}

/// Writes artifacts and the manifest.
fn emit(out: &Output, command: &str, args: Value, inputs: &[String], seed: u64, files: BTreeMap<String, String>) -> Result<()> {
    let m = manifest(command, &args, inputs, seed, &files);
    match &out.out {
        Some(dir) => {
            let mut all = files;
            all.insert("manifest.json".into(), m);
            flatgap::harness::ResultBundle { files: all, warnings: Vec::new() }.write_to(dir)
        }
        None => {
            for body in files.values() {
                print!("{body}");
            }
            eprint!("{m}");
            Ok(())
        }
    }
}

fn surface_input(l: &LoadedSurface) -> String {
    l.definition.to_json()
}

fn enum_cfg(budget: &Budget, witnesses: bool) -> EnumConfig {
    EnumConfig { node_budget: budget.budget, keep_witnesses: witnesses, parallel: true }
}

fn run(cli: Cli) -> Result<bool> {
    let cache = cache_dir_from_env();
    let cache = cache.as_deref();
    match cli.command {
        Command::Build { surface, canonical, output } => {
            let l = load_surface(&surface, None)?;
            let s = &l.surface;
            let cf = s.canonical_form();
            let mut report = json!({
                "name": l.name,
                "arithmetic": s.arithmetic(),
                "polygons": s.polygons().len(),
                "genus": s.genus(),
                "stratum": s.stratum_signature(),
                "cone_angles": s.cone_points().iter().map(|c| c.angle).collect::<Vec<_>>(),
                "area": s.area(),
                "fingerprint": cf.fingerprint(),
            });
            if canonical {
                report["canonical"] = json!(cf.render());
            }
            let files = [("surface.json".to_string(), serde_json::to_string_pretty(&report).expect("json") + "\n")].into();
            emit(&output, "build", json!({"surface": surface, "canonical": canonical}), &[surface_input(&l)], 0, files)?;
        }
        Command::Enumerate { surface, radius, no_witnesses, budget, output } => {
            let l = load_surface(&surface, None)?;
            let set = enumerate_cached(&l.surface, radius, &enum_cfg(&budget, !no_witnesses), cache)?;
            let files = [("holonomies.csv".to_string(), set.to_csv())].into();
            let args = json!({"surface": surface, "radius": radius, "witnesses": !no_witnesses, "budget": budget.budget});
            emit(&output, "enumerate", args, &[surface_input(&l)], 0, files)?;
        }
        Command::Gaps { surface, psi, grid, r_min, r_max, samples, histogram_bins, budget, output } => {
            let l = load_surface(&surface, None)?;
            let rate = RateFunction::parse(&psi)?;
            let radii = match &grid {
                Some(g) => g.clone(),
                None => log_grid(r_min, r_max, samples)?,
            };
            let top = *radii.last().ok_or_else(|| Error::Spec("empty grid".into()))?;
            flatgap::saddle::validate_grid(&radii)?;
            let set = enumerate_cached(&l.surface, top, &enum_cfg(&budget, false), cache)?;
            let traj = trajectory_from_set(&set, &rate, &radii);
            for w in &traj.warnings {
                log::warn!("{w}");
            }
            let mut files = BTreeMap::from([("trajectory.csv".to_string(), traj.to_csv())]);
            if let Some(bins) = histogram_bins {
                let d = gap_distribution(&angles(&set))?;
                files.insert("gap_histogram.csv".into(), histogram_csv(&d.histogram(bins, 4.0)));
            }
            let args = json!({"surface": surface, "psi": psi, "grid": radii, "histogram_bins": histogram_bins, "budget": budget.budget});
            emit(&output, "gaps", args, &[surface_input(&l)], 0, files)?;
        }
        Command::Targets { surface, psi, b, c, sigma, k_min, k_max, c_h, budget, output } => {
            let l = load_surface(&surface, None)?;
            let rate = RateFunction::parse(&psi)?;
            if k_min > k_max {
                return Err(Error::Spec(format!("k_min {k_min} exceeds k_max {k_max}")));
            }
            let params = TargetParams::new(b, c, sigma, rate, k_min)?;
            let ks: Vec<u32> = (k_min..=k_max).collect();
            let rows = target_sweep(&l.surface, &params, c_h, &ks, &enum_cfg(&budget, false))?;
            let files = [("sweep.csv".to_string(), sweep_csv(&rows))].into();
            let args = json!({"surface": surface, "psi": psi, "b": b, "c": c, "sigma": sigma,
                              "k_min": k_min, "k_max": k_max, "c_h": c_h, "budget": budget.budget});
            emit(&output, "targets", args, &[surface_input(&l)], 0, files)?;
        }
        Command::Series { phi, psi, base, terms, psi0, output } => {
            let (verdict, rate) = match (&phi, &psi) {
                (Some(p), _) => (condensation_dichotomy(&RateFunction::parse(p)?, base, terms), None),
                (None, Some(p)) => {
                    let r = RateFunction::parse(p)?;
                    (psi_squared_dichotomy(&r, base, terms), Some(r))
                }
                (None, None) => return Err(Error::Spec("one of --phi or --psi is required".into())),
            };
            let mut files = BTreeMap::from([("verdict.json".to_string(), verdict.to_json() + "\n")]);
            if psi0 {
                let r = rate.expect("clap requires --psi with --psi0");
                let p = psi0_construct(&r, &Psi0Config::default())?;
                let mut csv = String::from("j,ln_n_j,n_j,piece_mass\n");
                for (i, (u, m)) in p.ln_breakpoints().iter().zip(p.piece_mass()).enumerate() {
                    csv.push_str(&format!("{},{u:?},{:?},{m:?}\n", i + 1, u.exp()));
                }
                files.insert("psi0.csv".into(), csv);
            }
            let args = json!({"phi": phi, "psi": psi, "base": base, "terms": terms, "psi0": psi0});
            emit(&output, "series", args, &[], 0, files)?;
        }
        Command::Experiment { spec, output } => {
            let text = std::fs::read_to_string(&spec)
                .map_err(|source| Error::Input { path: spec.display().to_string(), source })?;
            let parsed = ExperimentSpec::from_json(&text)?;
            let base = spec.parent().map(Path::to_path_buf);
            let bundle = run_experiment(&parsed, base.as_deref(), cache)?;
            for w in &bundle.warnings {
                log::warn!("{w}");
            }
            let l = load_surface(&parsed.surface, base.as_deref())?;
            let args = serde_json::to_value(&parsed).expect("specs serialize");
            emit(&output, "experiment", args, &[surface_input(&l)], parsed.seed, bundle.files)?;
        }
        Command::Selftest { output } => {
            let lines = selftest();
            let ok = lines.iter().all(|l| l.pass);
            let body: String = lines
                .iter()
                .map(|l| format!("{} {}: {}\n", if l.pass { "PASS" } else { "FAIL" }, l.name, l.detail))
                .collect();
            emit(&output, "selftest", json!({}), &[], 0, [("selftest.txt".to_string(), body)].into())?;
            return Ok(ok);
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Some(j) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build_global() {
            eprintln!("error: cannot size the worker pool: {e}");
            return ExitCode::from(EXIT_INTERNAL);
        }
    }
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_INTERNAL),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
