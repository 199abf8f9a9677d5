//! Batch command-line surface for decorated-graph spectra: build product
//! graphs, derive the rational spectral map of a decoration, assemble
//! decorated spectra, sample γ curves as CSV, and run randomized
//! verification campaigns.
//!
//! Exit codes: 0 success, 1 verification failure, 2 input error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use specdec::gamma::{gamma_from_decoration, DecorationGamma};
use specdec::graph::compatibility_violation;
use specdec::operator::GraphRef;
use specdec::oracle::{run_campaign, CampaignConfig};
use specdec::spectrum::{assemble_decorated_spectrum, parse_preset};
use specdec::{
    decorate, BaseSize, Error, GraphSpec, HerglotzRational, OperatorSpec, RootedGraph,
    SpectrumSet, SymmetricOperator,
};

/// Decorated-graph spectra: products, spectral maps, and verification.
#[derive(Parser)]
#[command(name = "specdec", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the decorated product of a base graph and a rooted decoration.
    Decorate {
        /// Base graph JSON.
        #[arg(long)]
        input: PathBuf,
        /// Rooted decoration graph JSON.
        #[arg(long)]
        decoration: PathBuf,
        /// Output path; stdout when omitted.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Derive the rational spectral map of a rooted decoration.
    Gamma {
        /// Rooted decoration graph JSON.
        #[arg(long)]
        decoration: PathBuf,
        /// Decoration operator JSON (dense matrix or `{"laplacian_of": …}`);
        /// defaults to the Laplacian of the decoration graph.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Output path; stdout when omitted.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Assemble the spectrum of the decorated operator over a base spectrum.
    Spectrum {
        /// Base-spectrum preset, e.g. "zd:2" for the hypercubic band [0, 4d]
        /// with an infinite vertex set.
        #[arg(long, conflicts_with = "input")]
        preset: Option<String>,
        /// Finite base: a graph JSON (contributing its Laplacian spectrum) or
        /// an operator JSON.
        #[arg(long, required_unless_present = "preset")]
        input: Option<PathBuf>,
        /// Rooted decoration graph JSON; its Laplacian is the decoration
        /// operator.
        #[arg(long)]
        decoration: PathBuf,
        /// Output path; stdout when omitted.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Sample a spectral map over an energy range as "E,gamma,dgamma" CSV.
    SampleGamma {
        /// Spectral map JSON (`{"c": …, "poles": […], "weights": […]}`).
        #[arg(long)]
        input: PathBuf,
        /// Inclusive sampling range.
        #[arg(long, num_args = 2, value_names = ["A", "B"], allow_negative_numbers = true)]
        range: Vec<f64>,
        /// Sampling step; must be positive.
        #[arg(long)]
        step: f64,
        /// Output path; stdout when omitted.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run a randomized verification campaign and write the report.
    Verify {
        /// Campaign seed.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of randomized cases.
        #[arg(long, default_value_t = 100)]
        cases: usize,
        /// Relative eigensolver tolerance override.
        #[arg(long)]
        tol_eig: Option<f64>,
        /// Relative spectral-map matching tolerance override.
        #[arg(long)]
        tol_match: Option<f64>,
        /// Output path; stdout when omitted.
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

enum Failure {
    /// Malformed or inconsistent input (exit 2).
    Input(String),
    /// Checks ran and some failed (exit 1).
    Checks(String),
}

fn input_err(msg: impl Into<String>) -> Failure {
    Failure::Input(msg.into())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Decorate {
            input,
            decoration,
            output,
        } => run_decorate(&input, &decoration, output.as_deref()),
        Command::Gamma {
            decoration,
            input,
            output,
        } => run_gamma(&decoration, input.as_deref(), output.as_deref()),
        Command::Spectrum {
            preset,
            input,
            decoration,
            output,
        } => run_spectrum(
            preset.as_deref(),
            input.as_deref(),
            &decoration,
            output.as_deref(),
        ),
        Command::SampleGamma {
            input,
            range,
            step,
            output,
        } => run_sample_gamma(&input, &range, step, output.as_deref()),
        Command::Verify {
            seed,
            cases,
            tol_eig,
            tol_match,
            output,
        } => run_verify(seed, cases, tol_eig, tol_match, output.as_deref()),
    }
}

fn read_json<T: DeserializeOwned>(path: &Path, what: &str) -> Result<T, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| input_err(format!("cannot read {what} {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| input_err(format!("{what} {} is invalid: {e}", path.display())))
}

fn write_output(output: Option<&Path>, text: &str) -> Result<(), Failure> {
    match output {
        Some(path) => fs::write(path, text)
            .map_err(|e| input_err(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn to_pretty(value: &impl Serialize) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("output types serialize");
    text.push('\n');
    text
}

/// Loads a decoration graph, insisting on an explicit root.
fn load_decoration(path: &Path) -> Result<RootedGraph, Failure> {
    let spec: GraphSpec = read_json(path, "decoration graph")?;
    if spec.root.is_none() {
        return Err(input_err(format!(
            "decoration graph {} has no \"root\" field",
            path.display()
        )));
    }
    spec.to_rooted()
        .map_err(|e| input_err(format!("decoration graph {}: {e}", path.display())))
}

/// Resolves a relative graph reference against the directory of the operator
/// file that mentions it.
fn sibling(owner: &Path, rel: &str) -> PathBuf {
    let p = Path::new(rel);
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        owner.parent().unwrap_or_else(|| Path::new("")).join(p)
    }
}

/// Reads an operator spec and resolves it, loading any referenced graph file.
fn load_operator(path: &Path) -> Result<SymmetricOperator, Failure> {
    let spec: OperatorSpec = read_json(path, "operator")?;
    let spec = match spec {
        OperatorSpec::LaplacianOf {
            laplacian_of: GraphRef::Path(rel),
        } => OperatorSpec::LaplacianOf {
            laplacian_of: GraphRef::Inline(read_json(&sibling(path, &rel), "referenced graph")?),
        },
        other => other,
    };
    spec.resolve(|_| unreachable!("path references are pre-resolved"))
        .map_err(|e| input_err(format!("operator {}: {e}", path.display())))
}

/// Decoration operator: explicit spec if given, Laplacian otherwise. Always
/// checked for compatibility with the decoration graph.
fn decoration_operator(
    dec: &RootedGraph,
    op_path: Option<&Path>,
) -> Result<SymmetricOperator, Failure> {
    let op = match op_path {
        None => dec.graph().laplacian(),
        Some(path) => load_operator(path)?,
    };
    match compatibility_violation(&op, dec.graph()) {
        Ok(None) => Ok(op),
        Ok(Some((row, col, value))) => Err(input_err(
            Error::IncompatibleEntry { row, col, value }.to_string(),
        )),
        Err(e) => Err(input_err(e.to_string())),
    }
}

fn derive_gamma(op: &SymmetricOperator, root: usize) -> Result<DecorationGamma, Failure> {
    gamma_from_decoration(op, root)
        .map_err(|e| input_err(format!("cannot derive spectral map: {e}")))
}

fn run_decorate(input: &Path, decoration: &Path, output: Option<&Path>) -> Result<(), Failure> {
    let base_spec: GraphSpec = read_json(input, "base graph")?;
    let base = base_spec
        .to_graph()
        .map_err(|e| input_err(format!("base graph {}: {e}", input.display())))?;
    let dec = load_decoration(decoration)?;
    let product = decorate(&base, &dec).into_product();
    write_output(output, &to_pretty(&GraphSpec::from(&product)))
}

/// Serialized `gamma` result: the map, the complement spectrum copied into
/// every decoration, and whether the root vector was cyclic.
#[derive(Serialize)]
struct GammaOutput {
    c: f64,
    poles: Vec<f64>,
    weights: Vec<f64>,
    remainder: Vec<f64>,
    cyclic: bool,
}

impl From<&DecorationGamma> for GammaOutput {
    fn from(dg: &DecorationGamma) -> Self {
        Self {
            c: dg.map.c,
            poles: dg.map.poles.clone(),
            weights: dg.map.weights.clone(),
            remainder: dg.remainder.clone(),
            cyclic: dg.cyclic,
        }
    }
}

fn run_gamma(decoration: &Path, input: Option<&Path>, output: Option<&Path>) -> Result<(), Failure> {
    let dec = load_decoration(decoration)?;
    let op = decoration_operator(&dec, input)?;
    let dg = derive_gamma(&op, dec.root())?;
    write_output(output, &to_pretty(&GammaOutput::from(&dg)))
}

/// Finite base input: a graph contributing its Laplacian spectrum, or an
/// explicit operator spec.
#[derive(Deserialize)]
#[serde(untagged)]
enum BaseInput {
    Graph(GraphSpec),
    Operator(OperatorSpec),
}

fn run_spectrum(
    preset: Option<&str>,
    input: Option<&Path>,
    decoration: &Path,
    output: Option<&Path>,
) -> Result<(), Failure> {
    let dec = load_decoration(decoration)?;
    let dg = derive_gamma(&dec.graph().laplacian(), dec.root())?;
    let (base, size) = match (preset, input) {
        (Some(name), None) => parse_preset(name).map_err(|e| input_err(e.to_string()))?,
        (None, Some(path)) => {
            let op = match read_json(path, "base")? {
                BaseInput::Graph(spec) => spec
                    .to_graph()
                    .map_err(|e| input_err(format!("base graph {}: {e}", path.display())))?
                    .laplacian(),
                BaseInput::Operator(spec) => {
                    let spec = match spec {
                        OperatorSpec::LaplacianOf {
                            laplacian_of: GraphRef::Path(rel),
                        } => OperatorSpec::LaplacianOf {
                            laplacian_of: GraphRef::Inline(read_json(
                                &sibling(path, &rel),
                                "referenced graph",
                            )?),
                        },
                        other => other,
                    };
                    spec.resolve(|_| unreachable!("path references are pre-resolved"))
                        .map_err(|e| input_err(format!("base {}: {e}", path.display())))?
                }
            };
            let es = op
                .eigendecompose()
                .map_err(|e| input_err(format!("base {}: {e}", path.display())))?;
            (
                SpectrumSet::from_eigenvalues(&es.values),
                BaseSize::Finite(op.dim()),
            )
        }
        _ => unreachable!("clap enforces exactly one of --preset/--input"),
    };
    let spectrum = assemble_decorated_spectrum(&dg, &base, size)
        .map_err(|e| input_err(format!("cannot assemble spectrum: {e}")))?;
    write_output(output, &to_pretty(&spectrum))
}

fn run_sample_gamma(
    input: &Path,
    range: &[f64],
    step: f64,
    output: Option<&Path>,
) -> Result<(), Failure> {
    let mut map: HerglotzRational = read_json(input, "spectral map")?;
    map.normalize()
        .map_err(|e| input_err(format!("spectral map {}: {e}", input.display())))?;
    let (a, b) = (range[0], range[1]);
    // `is_finite`/`is_nan` checked first so NaN arguments are rejected too.
    if !step.is_finite() || step <= 0.0 {
        return Err(input_err(format!("step must be positive, got {step}")));
    }
    if a.is_nan() || b.is_nan() || a > b {
        return Err(input_err(format!("empty range [{a}, {b}]")));
    }
    // Inclusive endpoints; the slack keeps b in-range under division noise.
    let count = ((b - a) / step + 1e-9).floor() as usize;
    let mut csv = String::from("E,gamma,dgamma\n");
    for k in 0..=count {
        let e = a + k as f64 * step;
        match map.evaluate(e) {
            Ok(g) => {
                let dg = map
                    .derivative(e)
                    .expect("derivative shares the evaluation guard");
                csv.push_str(&format!("{e},{g},{dg}\n"));
            }
            Err(Error::AtPole { .. }) => csv.push_str(&format!("{e},NaN,NaN\n")),
            Err(e) => return Err(input_err(e.to_string())),
        }
    }
    write_output(output, &csv)
}

fn run_verify(
    seed: u64,
    cases: usize,
    tol_eig: Option<f64>,
    tol_match: Option<f64>,
    output: Option<&Path>,
) -> Result<(), Failure> {
    let mut config = CampaignConfig {
        seed,
        cases,
        ..Default::default()
    };
    if let Some(t) = tol_eig {
        config.tol_eig = t;
    }
    if let Some(t) = tol_match {
        config.tol_match = t;
    }
    let report = run_campaign(&config).map_err(|e| input_err(format!("campaign aborted: {e}")))?;
    write_output(output, &to_pretty(&report))?;
    if report.all_passed() {
        Ok(())
    } else {
        Err(Failure::Checks(format!(
            "verification failed: {} of {} cases have failing checks",
            report.summary.failed,
            report.summary.passed + report.summary.failed
        )))
    }
}
