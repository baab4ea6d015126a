//! Command-line front end. Every command is a pure function of its
//! arguments and seed; data files are written with a fixed key order and no
//! timestamps.
//!
//! Exit codes: 0 success, 1 verification failed, 2 invalid input or
//! parameters, 3 precondition violated (diagnostic JSON on standard error).

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use detabp_core::convert::{general_to_abp, ConvertOptions, Mode, Truncation};
use detabp_core::verify::{infer_degree, pit_equal, symbolic_equal, CertifyMethod, Evaluable};
use detabp_core::{AlgebraError, ConvertError, FieldSpec, Homogeneity, Modulus, PencilError, Poly, Scalar};
use serde_json::json;

use crate::bench;
use crate::family::{self, Family, Params, Range};
use crate::json::{self, AbpJson, Instance, JsonError, ReportJson, VerdictJson};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "detabp", version, about = "Convert determinantal representations into homogeneous ABPs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Convert a pencil into a homogeneous ABP computing its determinant.
    Convert(ConvertArgs),
    /// Compare two pencils/ABPs by randomized or symbolic identity testing.
    Verify(VerifyArgs),
    /// Generate an instance of a named family.
    Gen(GenArgs),
    /// Print size, width, layers and homogeneity of an instance.
    Stats(StatsArgs),
    /// Convert a parameter sweep and write a CSV table of sizes and bounds.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Auto,
    Regular,
    General,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Auto => Mode::Auto,
            ModeArg::Regular => Mode::Regular,
            ModeArg::General => Mode::General,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FieldArg {
    Rational,
    /// The prime field of order 2^61 - 1.
    Prime,
}

impl From<FieldArg> for FieldSpec {
    fn from(f: FieldArg) -> Self {
        match f {
            FieldArg::Rational => FieldSpec::Rational,
            FieldArg::Prime => FieldSpec::Prime(Modulus::mersenne61()),
        }
    }
}

fn parse_truncation(s: &str) -> Result<Truncation, String> {
    match s {
        "standard" => Ok(Truncation::Standard),
        "tight" => Ok(Truncation::Tight),
        _ => s
            .parse()
            .map(Truncation::Index)
            .map_err(|_| format!("expected standard, tight or a power of D, got {s:?}")),
    }
}

/// Settings shared by `convert` and `bench`.
#[derive(Debug, Args)]
pub struct ConversionArgs {
    #[arg(long, value_enum, default_value_t = ModeArg::Auto)]
    pub mode: ModeArg,
    /// Series cut-off in W: standard (D^(d-2)), tight (D^(d-r-1)) or an explicit power.
    #[arg(long, value_parser = parse_truncation, default_value = "standard")]
    pub truncation: Truncation,
    /// Constant in the size bound C * d^5 * s.
    #[arg(long = "c", default_value_t = 64)]
    pub c: u64,
    /// Constant in the size bound C' * r^3 * d^2 * s.
    #[arg(long = "c-prime", default_value_t = 64)]
    pub c_prime: u64,
    /// Random trials for homogeneity certification of large inputs.
    #[arg(long = "certify-trials", default_value_t = 64)]
    pub certify_trials: usize,
}

impl ConversionArgs {
    fn options(&self, seed: u64) -> ConvertOptions {
        ConvertOptions {
            mode: self.mode.into(),
            truncation: self.truncation,
            c: self.c,
            c_prime: self.c_prime,
            certify: Some(CertifyMethod::Auto { trials: self.certify_trials, seed }),
        }
    }
}

#[derive(Debug, Args)]
pub struct ConvertArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Degree of the determinant; inferred when omitted.
    #[arg(long)]
    pub degree: Option<usize>,
    /// Where to write the conversion report (standard output otherwise).
    #[arg(long)]
    pub report: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub conversion: ConversionArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub a: PathBuf,
    #[arg(long)]
    pub b: PathBuf,
    #[arg(long, default_value_t = 200)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Compare the expanded polynomials exactly.
    #[arg(long)]
    pub symbolic: bool,
}

#[derive(Debug, Args)]
pub struct FamilyArgs {
    #[arg(long, value_enum)]
    pub family: Family,
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    /// Degree (the k of e_k for elemsym; the total degree for r-regular).
    #[arg(long, default_value_t = 3)]
    pub d: usize,
    /// Layer width of random programs (and of each r-regular block).
    #[arg(long, default_value_t = 2)]
    pub w: usize,
    /// Number of blocks, i.e. the corank, of r-regular pencils.
    #[arg(long, default_value_t = 2)]
    pub blocks: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = FieldArg::Rational)]
    pub field: FieldArg,
}

impl FamilyArgs {
    fn params(&self) -> Params {
        Params { n: self.n, d: self.d, w: self.w, blocks: self.blocks, seed: self.seed }
    }
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    /// Write the pencil of an ABP family instead of the ABP.
    #[arg(long)]
    pub pencil: bool,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, default_value_t = 32)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    /// Inclusive sweep `key=lo..hi` over n, d, w or blocks.
    #[arg(long)]
    pub range: Range,
    #[arg(long)]
    pub csv: PathBuf,
    #[command(flatten)]
    pub conversion: ConversionArgs,
}

/// Why a command stopped.
enum Failure {
    Invalid(String),
    Precondition(serde_json::Value),
    VerifyFailed,
}

impl From<JsonError> for Failure {
    fn from(e: JsonError) -> Self {
        Failure::Invalid(e.to_string())
    }
}

impl From<family::FamilyError> for Failure {
    fn from(e: family::FamilyError) -> Self {
        Failure::Invalid(e.to_string())
    }
}

impl From<ConvertError> for Failure {
    fn from(e: ConvertError) -> Self {
        let message = e.to_string();
        match e {
            ConvertError::NotHomogeneous { expected, witness } => Failure::Precondition(json!({
                "error": "not-homogeneous",
                "expected_degree": expected,
                "degrees": witness,
                "message": message,
            })),
            ConvertError::NotRegular { r } => Failure::Precondition(json!({
                "error": "not-regular",
                "r": r,
                "message": message,
            })),
            ConvertError::SizeDegreeMismatch { s, d } => Failure::Precondition(json!({
                "error": "size-degree-mismatch",
                "s": s,
                "d": d,
                "message": message,
            })),
            ConvertError::Pencil(PencilError::ConstantPartInvertible) => Failure::Precondition(json!({
                "error": "nonzero-constant-term",
                "degrees": [0],
                "message": message,
            })),
            _ => Failure::Invalid(message),
        }
    }
}

/// Runs a parsed command, writing reports to `out` and diagnostics to
/// `err`, and returns the exit code.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match cli.command {
        Command::Convert(a) => convert(&a, out),
        Command::Verify(a) => verify(&a, out),
        Command::Gen(a) => gen(&a),
        Command::Stats(a) => stats(&a, out),
        Command::Bench(a) => bench_cmd(&a),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(Failure::VerifyFailed) => EXIT_VERIFY_FAILED,
        Err(Failure::Invalid(message)) => {
            let _ = write!(err, "{}", json::to_string(&json!({ "error": "invalid-input", "message": message })));
            EXIT_INVALID
        }
        Err(Failure::Precondition(diag)) => {
            let _ = write!(err, "{}", json::to_string(&diag));
            EXIT_PRECONDITION
        }
    }
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), Failure> {
    out.write_all(text.as_bytes()).map_err(|e| Failure::Invalid(e.to_string()))
}

fn convert(a: &ConvertArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let pencil = match json::read_instance(&a.input)? {
        Instance::Pencil(p) => p,
        Instance::Abp(_) => return Err(Failure::Invalid(format!("{}: expected a pencil", a.input.display()))),
    };
    let opts = a.conversion.options(a.seed);
    let d = match a.degree {
        Some(d) => d,
        None => match infer_degree(&pencil, a.conversion.certify_trials, a.seed)
            .map_err(|e| Failure::Invalid(e.to_string()))?
        {
            Homogeneity::Degree(d) => d,
            Homogeneity::Mixed { low, high } => {
                return Err(Failure::Precondition(json!({
                    "error": "not-homogeneous",
                    "degrees": [low, high],
                    "message": format!("determinant has components of degree {low} and {high}"),
                })))
            }
            Homogeneity::EveryDegree => {
                return Err(Failure::Precondition(json!({
                    "error": "zero-determinant",
                    "degrees": [],
                    "message": "the determinant vanishes; pass --degree explicitly",
                })))
            }
        },
    };
    let (abp, report) = general_to_abp(&pencil, d, &opts)?;
    json::write_file(&a.out, &json::to_string(&AbpJson::from_abp(&abp)))?;
    let report = json::to_string(&ReportJson::from(&report));
    match &a.report {
        Some(path) => json::write_file(path, &report)?,
        None => emit(out, &report)?,
    }
    Ok(())
}

impl Evaluable for Instance {
    fn num_vars(&self) -> usize {
        match self {
            Instance::Pencil(p) => p.num_vars(),
            Instance::Abp(a) => a.num_vars(),
        }
    }
    fn field_spec(&self) -> FieldSpec {
        match self {
            Instance::Pencil(p) => p.field_spec(),
            Instance::Abp(a) => a.field_spec(),
        }
    }
    fn degree_bound(&self) -> usize {
        match self {
            Instance::Pencil(p) => Evaluable::degree_bound(p),
            Instance::Abp(a) => Evaluable::degree_bound(a),
        }
    }
    fn evaluate_at(&self, point: &[Scalar]) -> Result<Scalar, AlgebraError> {
        match self {
            Instance::Pencil(p) => p.evaluate_at(point),
            Instance::Abp(a) => a.evaluate_at(point),
        }
    }
    fn reduced(&self, m: Modulus) -> Option<Self> {
        match self {
            Instance::Pencil(p) => Evaluable::reduced(p, m).map(Instance::Pencil),
            Instance::Abp(a) => Evaluable::reduced(a, m).map(Instance::Abp),
        }
    }
    fn expand(&self) -> Poly {
        match self {
            Instance::Pencil(p) => p.expand(),
            Instance::Abp(a) => a.expand(),
        }
    }
    fn symbolic_feasible(&self) -> bool {
        match self {
            Instance::Pencil(p) => p.symbolic_feasible(),
            Instance::Abp(a) => a.symbolic_feasible(),
        }
    }
}

fn verify(a: &VerifyArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let lhs = json::read_instance(&a.a)?;
    let rhs = json::read_instance(&a.b)?;
    let verdict = if a.symbolic {
        symbolic_equal(&lhs, &rhs)
    } else {
        pit_equal(&lhs, &rhs, a.trials, a.seed)
    }
    .map_err(|e| Failure::Invalid(e.to_string()))?;
    emit(out, &json::to_string(&VerdictJson::from(&verdict)))?;
    if verdict.is_success() {
        Ok(())
    } else {
        Err(Failure::VerifyFailed)
    }
}

fn gen(a: &GenArgs) -> Result<(), Failure> {
    let f = &a.family;
    let inst = family::generate(f.family, &f.params(), f.field.into(), a.pencil)?;
    json::write_file(&a.out, &inst.to_json_string())?;
    Ok(())
}

fn stats(a: &StatsArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let value = match json::read_instance(&a.input)? {
        Instance::Abp(abp) => json!({
            "kind": "abp",
            "nvars": abp.nvars(),
            "size": abp.size(),
            "width": abp.width(),
            "layers": abp.layers(),
            "widths": abp.widths(),
            "homogeneous": abp.is_homogeneous(),
            "degree_bound": abp.degree_bound(),
        }),
        Instance::Pencil(p) => {
            let rank = p.constant_rank();
            let degree = infer_degree(&p, a.trials, a.seed).map_err(|e| Failure::Invalid(e.to_string()))?;
            let (homogeneous, degree) = match degree {
                Homogeneity::Degree(d) => (true, Some(d)),
                Homogeneity::EveryDegree => (true, None),
                Homogeneity::Mixed { .. } => (false, None),
            };
            json!({
                "kind": "pencil",
                "nvars": p.nvars(),
                "s": p.size(),
                "r": rank.r,
                "regular": rank.is_regular(),
                "linear_part_homogeneous": p.is_homogeneous(),
                "homogeneous": homogeneous,
                "degree": degree,
            })
        }
    };
    emit(out, &json::to_string(&value))
}

fn bench_cmd(a: &BenchArgs) -> Result<(), Failure> {
    let f = &a.family;
    let opts = a.conversion.options(f.seed);
    let rows = bench::run(f.family, &f.params(), &a.range, f.field.into(), &opts).map_err(|e| match e {
        bench::BenchError::Family(e) => Failure::from(e),
        bench::BenchError::Convert { source, .. } => Failure::from(source),
    })?;
    json::write_file(&a.csv, &bench::to_csv(&rows))?;
    Ok(())
}
