use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use qib_core::io::{
    parse_json, to_json_string, BasisFile, Family, GeneratorFile, StateFile, SweepConfig,
};
use qib_core::measurements::{fourier_basis, wigner_basis, FourierBasisSpec, WignerBasisSpec};
use qib_core::scenarios::ScenarioConfig;
use qib_core::states::{heisenberg_state, truncated_coherent_state};
use qib_core::{canonical_beta, certify, mean_a, qfi, saturation_sweep_with, skewness, QibError};

#[derive(Parser)]
#[command(name = "qib", version, about = "Globally optimal measurements for pure-state phase estimation")]
struct Cli {
    /// Directory for output files.
    #[arg(long, global = true, env = "QIB_OUTPUT_DIR", default_value = ".")]
    out_dir: PathBuf,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Quantum Fisher information, moments and symmetry certificate of a probe.
    Qfi {
        #[arg(long)]
        state: PathBuf,
        #[arg(long)]
        generator: PathBuf,
        /// Print JSON instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Sweep CFI against QFI over a grid of parameter offsets.
    Sweep {
        config: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        out: Format,
        /// Number of grid points (overrides the config).
        #[arg(long)]
        grid: Option<usize>,
        /// Measurement family built on the state support.
        #[arg(long)]
        family: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file; defaults to `<out-dir>/<config stem>.<csv|json>`.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run a named scenario.
    Scenario {
        /// interferometer, bosonic, block-diagonal or heisenberg-comparison
        kind: String,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        nbar: Option<usize>,
        #[arg(long)]
        j: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Write a measurement basis file.
    Basis {
        #[arg(value_enum)]
        family: FamilyArg,
        #[arg(long)]
        dim: usize,
        /// Fourier offset; the canonical value when absent.
        #[arg(long)]
        beta: Option<f64>,
        /// Fourier eigenphases, comma separated.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        eta: Option<Vec<f64>>,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        vartheta: f64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Write probe (and generator) files.
    State {
        #[command(subcommand)]
        kind: StateKind,
    },
}

#[derive(Subcommand)]
enum StateKind {
    /// Two-component probe reaching 4(<A> - A_0)^2.
    Heisenberg {
        #[arg(long)]
        generator: PathBuf,
        #[arg(long)]
        mean: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        theta: f64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Symmetrized coherent state on 0..=2 nbar; also writes the number generator.
    Coherent {
        #[arg(long)]
        nbar: usize,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        slope: f64,
        /// Prefix for `<prefix>_state.json` and `<prefix>_generator.json`.
        #[arg(long, default_value = "coherent")]
        prefix: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Fourier,
    Wigner,
}

#[derive(Serialize)]
struct RunManifest {
    command: String,
    config: Option<String>,
    parameters: serde_json::Value,
    outputs: Vec<String>,
    seed: Option<u64>,
    version: &'static str,
    duration_seconds: f64,
}

/// Input problems map to exit code 2, failed assertions to 1.
struct InputError(anyhow::Error);

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(InputError(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

impl<E: Into<anyhow::Error>> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.into())
    }
}

fn run(cli: Cli) -> std::result::Result<bool, InputError> {
    let start = Instant::now();
    let out_dir = cli.out_dir;
    match cli.command {
        Command::Qfi {
            state,
            generator,
            json,
        } => cmd_qfi(&state, &generator, json).map_err(InputError),
        Command::Sweep {
            config,
            out,
            grid,
            family,
            seed,
            output,
        } => {
            let family = family.map(|f| f.parse::<Family>()).transpose()?;
            let cfg: SweepConfig = read_json(&config)?;
            let resolved = cfg.resolve(family, grid, seed)?;
            let report = saturation_sweep_with(
                &resolved.state,
                &resolved.generator,
                &resolved.basis,
                &resolved.grid,
                resolved.tolerances,
            )?;
            let ext = match out {
                Format::Csv => "csv",
                Format::Json => "json",
            };
            let path = output.unwrap_or_else(|| {
                let stem = config.file_stem().unwrap_or_default().to_string_lossy();
                out_dir.join(format!("{stem}.{ext}"))
            });
            let body = match out {
                Format::Csv => report.to_csv(),
                Format::Json => report.to_json(),
            };
            write_file(&path, &body)?;
            println!(
                "{} points  F_Q = {:.12}  max gap {:.3e}  max residual {:.3e}  {}",
                report.epsilons.len(),
                report.qfi,
                report.max_relative_gap,
                report.max_im_residual,
                if report.saturated { "saturated" } else { "NOT saturated" }
            );
            if !report.flagged.is_empty() {
                println!("  flagged nodes at grid indices {:?}", report.flagged);
            }
            let manifest = RunManifest {
                command: "sweep".into(),
                config: Some(config.display().to_string()),
                parameters: serde_json::json!({
                    "out": ext,
                    "grid": grid,
                    "family": family,
                }),
                outputs: vec![path.display().to_string()],
                seed: Some(seed),
                version: env!("CARGO_PKG_VERSION"),
                duration_seconds: start.elapsed().as_secs_f64(),
            };
            write_file(&sibling(&path, "manifest.json"), &to_json_string(&manifest))?;
            Ok(report.saturated)
        }
        Command::Scenario {
            kind,
            config,
            nbar,
            j,
            seed,
            samples,
        } => {
            let mut cfg = match &config {
                Some(p) => {
                    let cfg: ScenarioConfig = read_json(p)?;
                    if cfg.kind() != kind {
                        return Err(anyhow::anyhow!("config describes a {} scenario, not {kind}", cfg.kind()).into());
                    }
                    cfg
                }
                None => ScenarioConfig::default_for(&kind)?,
            };
            apply_overrides(&mut cfg, nbar, j, seed, samples)?;
            let outcome = cfg.run()?;
            print!("{}", outcome.summary());

            fs::create_dir_all(&out_dir)
                .with_context(|| format!("creating {}", out_dir.display()))?;
            let mut outputs = Vec::new();
            for (name, report) in outcome.reports() {
                let path = out_dir.join(format!("{kind}_{name}.csv"));
                write_file(&path, &report.to_csv())?;
                outputs.push(path.display().to_string());
            }
            let path = out_dir.join(format!("{kind}.json"));
            write_file(&path, &to_json_string(&outcome))?;
            outputs.push(path.display().to_string());
            let manifest = RunManifest {
                command: format!("scenario {kind}"),
                config: config.map(|p| p.display().to_string()),
                parameters: serde_json::to_value(&cfg)?,
                outputs,
                seed: match &cfg {
                    ScenarioConfig::HeisenbergComparison(h) => Some(h.seed),
                    _ => None,
                },
                version: env!("CARGO_PKG_VERSION"),
                duration_seconds: start.elapsed().as_secs_f64(),
            };
            write_file(
                &out_dir.join(format!("{kind}.manifest.json")),
                &to_json_string(&manifest),
            )?;
            Ok(outcome.passed())
        }
        Command::Basis {
            family,
            dim,
            beta,
            eta,
            vartheta,
            output,
        } => {
            let basis = match family {
                FamilyArg::Fourier => fourier_basis(&FourierBasisSpec::new(
                    dim,
                    beta.unwrap_or_else(|| canonical_beta(dim)),
                    eta.unwrap_or_else(|| vec![0.0; dim]),
                )?)?,
                FamilyArg::Wigner => wigner_basis(&WignerBasisSpec::new(dim, vartheta)?)?,
            };
            emit(output.as_deref(), &to_json_string(&BasisFile::from_basis(&basis)))?;
            Ok(true)
        }
        Command::State { kind } => match kind {
            StateKind::Heisenberg {
                generator,
                mean,
                theta,
                output,
            } => {
                let gen = read_json::<GeneratorFile>(&generator)?.build()?;
                let state = heisenberg_state(&gen, mean, theta)?;
                emit(output.as_deref(), &to_json_string(&StateFile::from_state(&state)))?;
                Ok(true)
            }
            StateKind::Coherent {
                nbar,
                slope,
                prefix,
            } => {
                let (gen, state) = truncated_coherent_state(nbar, slope)?;
                write_file(
                    &out_dir.join(format!("{prefix}_state.json")),
                    &to_json_string(&StateFile::from_state(&state)),
                )?;
                write_file(
                    &out_dir.join(format!("{prefix}_generator.json")),
                    &to_json_string(&GeneratorFile::from_generator(&gen)),
                )?;
                Ok(true)
            }
        },
    }
}

fn cmd_qfi(state: &Path, generator: &Path, json: bool) -> Result<bool> {
    let gen = read_json::<GeneratorFile>(generator)?.build()?;
    let state = read_json::<StateFile>(state)?.build()?;
    let f_q = qfi(&state, &gen)?;
    let mean = mean_a(&state, &gen)?;
    let skew = match skewness(&state, &gen) {
        Ok(s) => Some(s),
        Err(QibError::DegenerateState) => None,
        Err(e) => return Err(e.into()),
    };
    let cert = certify(&state, &gen)?;
    if json {
        let value = serde_json::json!({
            "qfi": f_q,
            "mean": mean,
            "skewness": skew,
            "certificate": cert,
        });
        print!("{}", to_json_string(&value));
    } else {
        println!("F_Q        {f_q:.12}");
        println!("<A>        {mean:.12}");
        match skew {
            Some(s) => println!("skewness   {s:.12}"),
            None => println!("skewness   undefined (zero variance)"),
        }
        println!("admissible {}", cert.admissible);
        println!(
            "  support {:?}  spectrum residual {:.3e}  moduli residual {:.3e}",
            cert.support, cert.spectrum_residual, cert.moduli_residual
        );
    }
    Ok(true)
}

fn apply_overrides(
    cfg: &mut ScenarioConfig,
    nbar: Option<usize>,
    j: Option<f64>,
    seed: Option<u64>,
    samples: Option<usize>,
) -> Result<()> {
    let kind = cfg.kind();
    let reject = |flag: &str| -> Result<()> { bail!("--{flag} does not apply to the {kind} scenario") };
    match cfg {
        ScenarioConfig::Bosonic(c) => {
            if let Some(n) = nbar {
                c.nbar = n;
            }
        }
        _ if nbar.is_some() => reject("nbar")?,
        _ => {}
    }
    match cfg {
        ScenarioConfig::Interferometer(c) => {
            if let Some(j) = j {
                c.j = j;
                c.amplitudes = None;
            }
        }
        _ if j.is_some() => reject("j")?,
        _ => {}
    }
    match cfg {
        ScenarioConfig::HeisenbergComparison(c) => {
            if let Some(s) = seed {
                c.seed = s;
            }
            if let Some(n) = samples {
                c.samples = n;
            }
        }
        _ if seed.is_some() => reject("seed")?,
        _ if samples.is_some() => reject("samples")?,
        _ => {}
    }
    Ok(())
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(parse_json(&text, &path.display().to_string())?)
}

fn write_file(path: &Path, body: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    fs::write(path, body).with_context(|| format!("writing {}", path.display()))
}

fn emit(output: Option<&Path>, body: &str) -> Result<()> {
    match output {
        Some(p) => write_file(p, body),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

/// `dir/name.csv` → `dir/name.<suffix>`.
fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().unwrap_or_default().to_string_lossy();
    path.with_file_name(format!("{stem}.{suffix}"))
}
