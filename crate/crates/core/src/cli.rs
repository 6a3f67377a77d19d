//! Command-line front end.
//!
//! Exit codes: 0 success, 1 internal error, 2 invalid input, 3 semantic
//! failure (for example, frame samples that no density operator produces).

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::catalog::{self, builtin_set};
use crate::error::Error as MathError;
use crate::frame::born_frame;
use crate::geometry::{effects_from_vector_set, UnitVectorSet};
use crate::harmonics::admissible_harmonics;
use crate::io::{
    density_json, parse, platonic_table_text, sci, AdmissibilityReport, DecompositionJson, FormatError,
    FrameSamplesJson, MatrixJson, PovmJson, VectorSetJson,
};
use crate::operator::{DensityOperator, Effect, Povm};
use crate::{frame, random, tol};

#[derive(Debug, Parser)]
#[command(name = "qframe", version, about = "Frame functions, POVMs and harmonic admissibility for qubit measurement families")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Input file.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Output file (standard output when omitted).
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Seed for stochastic steps.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args)]
pub struct SetSource {
    /// Built-in vector set (trine, tet1, tet2, octahedron, cube, dodecahedron, icosahedron, polygon, antipodal).
    #[arg(long)]
    pub name: Option<String>,
    /// Number of polygon vertices.
    #[arg(long)]
    pub n: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify the spherical harmonics allowed for the family generated by a vector set.
    Analyze {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        source: SetSource,
        #[arg(long, default_value_t = 20)]
        lmax: usize,
        /// Zero threshold on max |sum_j Y_lr(n_j)|; defaults to 1e-8 sqrt(N).
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Allowed harmonics of the five platonic solids, compared against the reference table (l <= 15).
    Table {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 17)]
        lmax: usize,
    },
    /// Reconstruct a density operator from frame-function samples.
    ///
    /// The sample file must contain the d^2 effects 1 and (1 + tau_j)/2, where
    /// tau_j runs over the unit-norm generalized Gell-Mann matrices (symmetric,
    /// antisymmetric, then diagonal). `qframe samples` writes such a file.
    Reconstruct {
        #[command(flatten)]
        common: Common,
    },
    /// Write Born-rule frame samples for a density operator (matrix file) or a seeded random state.
    Samples {
        #[command(flatten)]
        common: Common,
        /// Dimension of the random state used when no input is given.
        #[arg(long, default_value_t = 2)]
        dim: usize,
    },
    /// Decompose an effect (matrix file) into a convex combination of projectors.
    Decompose {
        #[command(flatten)]
        common: Common,
    },
    /// Validate a POVM file or a vector-set file.
    Validate {
        #[command(flatten)]
        common: Common,
    },
    /// Emit a built-in vector set, or list the catalog when no name is given.
    Catalog {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        source: SetSource,
    },
}

#[derive(Debug)]
pub enum CliError {
    Internal(String),
    Invalid(String),
    Semantic(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Internal(_) => 1,
            CliError::Invalid(_) => 2,
            CliError::Semantic(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Internal(m) | CliError::Invalid(m) | CliError::Semantic(m) => m,
        }
    }
}

impl From<FormatError> for CliError {
    fn from(e: FormatError) -> Self {
        CliError::Invalid(e.to_string())
    }
}

fn read_input(common: &Common) -> Result<String, CliError> {
    let path = common
        .input
        .as_ref()
        .ok_or_else(|| CliError::Invalid("--input is required".into()))?;
    fs::read_to_string(path).map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))
}

fn write_output(common: &Common, text: &str) -> Result<(), CliError> {
    match &common.output {
        Some(path) => fs::write(path, text).map_err(|e| CliError::Internal(format!("{}: {e}", path.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .map_err(|e| CliError::Internal(format!("stdout: {e}")))
        }
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> Result<String, CliError> {
    serde_json::to_string_pretty(value)
        .map(|mut s| {
            s.push('\n');
            s
        })
        .map_err(|e| CliError::Internal(e.to_string()))
}

fn resolve_set(common: &Common, source: &SetSource) -> Result<UnitVectorSet, CliError> {
    match (&source.name, &common.input) {
        (Some(name), None) => builtin_set(name, source.n)
            .map(|e| e.vectors)
            .map_err(|e| CliError::Invalid(e.to_string())),
        (None, Some(_)) => {
            let text = read_input(common)?;
            Ok(parse::<VectorSetJson>(&text)?.to_set()?)
        }
        (Some(_), Some(_)) => Err(CliError::Invalid("give either --name or --input, not both".into())),
        (None, None) => Err(CliError::Invalid("a vector set is required (--name or --input)".into())),
    }
}

fn analyze(common: &Common, source: &SetSource, lmax: usize, tol_zero: Option<f64>) -> Result<(), CliError> {
    if lmax < 1 {
        return Err(CliError::Invalid("--lmax must be at least 1".into()));
    }
    if let Some(t) = tol_zero {
        if t.is_nan() || t <= 0.0 {
            return Err(CliError::Invalid("--tol must be positive".into()));
        }
    }
    let set = resolve_set(common, source)?;
    let t = tol_zero.unwrap_or_else(|| tol::harmonic_zero(set.len()));
    let report = AdmissibilityReport::from_set(&admissible_harmonics(&set, lmax, t));
    let text = match common.format {
        Format::Json => to_json(&report)?,
        Format::Text => report.to_text(),
    };
    write_output(common, &text)
}

fn table(common: &Common, lmax: usize) -> Result<(), CliError> {
    let table = catalog::platonic_table(lmax).map_err(|e| CliError::Invalid(e.to_string()))?;
    let text = match common.format {
        Format::Json => to_json(&table)?,
        Format::Text => platonic_table_text(&table),
    };
    write_output(common, &text)
}

fn reconstruct(common: &Common) -> Result<(), CliError> {
    let text = read_input(common)?;
    let samples: FrameSamplesJson = parse(&text)?;
    let values = samples.required_values()?;
    match frame::reconstruct_from_samples(samples.dim, &values) {
        Ok(w) => {
            let (min, _) = w.op().eigen_range();
            eprintln!("trace = {}, min eigenvalue = {}", sci(w.op().trace()), sci(min));
            write_output(common, &to_json(&density_json(&w))?)
        }
        Err(e @ MathError::NotDensity { .. }) => Err(CliError::Semantic(format!(
            "samples are inconsistent with any density operator: {e}"
        ))),
        Err(e) => Err(CliError::Invalid(e.to_string())),
    }
}

fn samples(common: &Common, dim: usize) -> Result<(), CliError> {
    let state = if common.input.is_some() {
        let text = read_input(common)?;
        let op = parse::<MatrixJson>(&text)?.to_operator("$")?;
        DensityOperator::new(op).map_err(|e| CliError::Invalid(e.to_string()))?
    } else {
        if dim < 1 {
            return Err(CliError::Invalid("--dim must be positive".into()));
        }
        random::density(dim, &mut random::rng(common.seed))
    };
    let out = FrameSamplesJson::from_oracle(&born_frame(state));
    write_output(common, &to_json(&out)?)
}

fn decompose(common: &Common) -> Result<(), CliError> {
    let text = read_input(common)?;
    let op = parse::<MatrixJson>(&text)?.to_operator("$")?;
    let effect = Effect::new(op).map_err(|e| CliError::Invalid(e.to_string()))?;
    let out = DecompositionJson::from_decomposition(&effect.convex_decompose());
    let text = match common.format {
        Format::Json => to_json(&out)?,
        Format::Text => out.to_text(),
    };
    write_output(common, &text)
}

#[derive(serde::Serialize)]
struct ValidationReport {
    kind: &'static str,
    valid: bool,
    dim: usize,
    outcomes: usize,
    residue: f64,
}

fn validate(common: &Common) -> Result<(), CliError> {
    let text = read_input(common)?;
    let probe: serde_json::Value = parse(&text)?;
    let povm: Povm = match probe.get("kind").and_then(|k| k.as_str()) {
        Some("povm") => parse::<PovmJson>(&text)?.to_povm()?,
        Some("vector_set") => {
            let set = parse::<VectorSetJson>(&text)?.to_set()?;
            effects_from_vector_set(&set).map_err(|e| CliError::Invalid(e.to_string()))?
        }
        other => {
            return Err(CliError::Invalid(format!(
                "`kind`: expected `povm` or `vector_set`, found {other:?}"
            )))
        }
    };
    let report = ValidationReport {
        kind: "validation",
        valid: true,
        dim: povm.dim(),
        outcomes: povm.len(),
        residue: povm.residue(),
    };
    let text = match common.format {
        Format::Json => to_json(&report)?,
        Format::Text => format!(
            "valid POVM: dim = {}, outcomes = {}, completeness residue = {}\n",
            report.dim,
            report.outcomes,
            sci(report.residue)
        ),
    };
    write_output(common, &text)
}

fn catalog_cmd(common: &Common, source: &SetSource) -> Result<(), CliError> {
    let Some(name) = &source.name else {
        let mut text = String::new();
        for n in catalog::NAMES {
            text.push_str(n);
            if n == "polygon" {
                text.push_str(" --n N");
            }
            text.push('\n');
        }
        return write_output(common, &text);
    };
    let entry = builtin_set(name, source.n).map_err(|e| CliError::Invalid(e.to_string()))?;
    let text = match common.format {
        Format::Json => to_json(&VectorSetJson::from_set(&entry.vectors))?,
        Format::Text => {
            let mut t = format!("# {} ({}), N = {}\n", entry.name, entry.notes, entry.vectors.len());
            for v in entry.vectors.vectors() {
                t.push_str(&format!("{:>14}  {:>14}  {:>14}\n", sci(v.x), sci(v.y), sci(v.z)));
            }
            t
        }
    };
    write_output(common, &text)
}

pub fn execute(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Analyze {
            common,
            source,
            lmax,
            tol,
        } => analyze(common, source, *lmax, *tol),
        Command::Table { common, lmax } => table(common, *lmax),
        Command::Reconstruct { common } => reconstruct(common),
        Command::Samples { common, dim } => samples(common, *dim),
        Command::Decompose { common } => decompose(common),
        Command::Validate { common } => validate(common),
        Command::Catalog { common, source } => catalog_cmd(common, source),
    }
}

/// Parses `args`, runs the subcommand and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.exit_code()
        }
    }
}
