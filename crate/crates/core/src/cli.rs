//! Command-line front end. Every command prints one JSON document.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num::{BigInt, Signed, Zero};
use serde_json::{json, Value};

use crate::arith::{format_rational, parse_rational_list, GaussRational, Rational};
use crate::conic::{intersect_hyperplane, SampleOptions, DEFAULT_PRECISION, DEFAULT_SAMPLES};
use crate::cycle::{classify_cycle, example_family, ThreeSpace, DEFAULT_FAMILY_RANK};
use crate::error::Error;
use crate::hnf::is_saturated;
use crate::json::{FromJson, ToJson};
use crate::matrix::Matrix;
use crate::quadspace::{
    is_isometry, lattice_invariants, make_standard_lattice, IntegralLattice, Isometry, LatticeKind, QuadraticSpace,
    StandardSpace,
};
use crate::roots::{
    bounded_root_search, enumerate_norm_vectors, orthogonal_complement_lattice, roots_orthogonal_to_threespace,
    RootList,
};
use crate::weyl::{
    check_partition_property, delta_p_bounded, is_in_o_plus, partition_by_chamber, reflect, reflection_matrix,
    PeriodPoint, Root, DEFAULT_PARTITION_DEPTH,
};

pub const PRECISION_ENV: &str = "K3CYCLES_PRECISION";

#[derive(Parser, Debug)]
#[command(name = "k3cycles", version, about = "Exact lattice and cycle computations for K3 and IHS period domains")]
pub struct Cli {
    /// Binary precision of approximate square roots (overrides K3CYCLES_PRECISION).
    #[arg(long, global = true)]
    precision: Option<u32>,
    /// Number of conic samples for non-positive three-spaces.
    #[arg(long, global = true)]
    samples: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct LatticeArgs {
    /// Standard lattice: U, E8, E8_neg, K3 or diag(+,+,+,-,...).
    #[arg(long, conflicts_with = "gram")]
    kind: Option<String>,
    /// JSON file {"gram": [[...]]} with an integral Gram matrix.
    #[arg(long)]
    gram: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Rank, parity, determinant and signature of a lattice.
    LatticeInfo {
        #[command(flatten)]
        lattice: LatticeArgs,
    },
    /// Vectors of a given norm in a definite lattice, roots orthogonal to a
    /// positive three-space (--threespace), or bounded roots orthogonal to a
    /// period point (--period) or to constraint vectors (--constraints).
    Roots {
        #[command(flatten)]
        lattice: LatticeArgs,
        #[arg(long, allow_hyphen_values = true)]
        norm: Option<String>,
        #[arg(long)]
        threespace: Option<PathBuf>,
        #[arg(long)]
        period: Option<PathBuf>,
        #[arg(long)]
        constraints: Option<PathBuf>,
        /// Coordinate bound for bounded searches.
        #[arg(long)]
        bound: Option<u64>,
    },
    /// Saturated sublattice orthogonal to constraint vectors.
    Complement {
        #[command(flatten)]
        lattice: LatticeArgs,
        /// JSON array of rational vectors.
        #[arg(long)]
        constraints: PathBuf,
    },
    /// Classify the cycle of a three-space given as JSON.
    CycleClassify {
        #[arg(long)]
        input: PathBuf,
        /// Treat the ambient Gram matrix as a lattice and decide the twistor predicate.
        #[arg(long)]
        integral: bool,
    },
    /// Intersect the cycle of a three-space with the hyperplane orthogonal to delta.
    CycleIntersect {
        #[arg(long)]
        input: PathBuf,
        /// Comma-separated rationals or @file.json.
        #[arg(long, allow_hyphen_values = true)]
        delta: String,
    },
    /// Classify V_t = C(e1 + i t e4) + C e2 + C e3 for a list of t.
    CycleSweepExample {
        /// Comma-separated rationals.
        #[arg(long, allow_hyphen_values = true)]
        t: String,
        #[arg(long, default_value_t = DEFAULT_FAMILY_RANK)]
        n: usize,
    },
    /// Reflection in a root, applied to a vector and/or as a matrix.
    Reflect {
        #[command(flatten)]
        lattice: LatticeArgs,
        /// Comma-separated integers or @file.json.
        #[arg(long, allow_hyphen_values = true)]
        root: String,
        /// Comma-separated rationals or @file.json (Gaussian entries allowed in files).
        #[arg(long, allow_hyphen_values = true)]
        vector: Option<String>,
        /// Also print the reflection matrix.
        #[arg(long)]
        matrix: bool,
    },
    /// Check whether an integer matrix (JSON file) is an isometry, and its orientation.
    IsometryCheck {
        #[command(flatten)]
        lattice: LatticeArgs,
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Split a root list (JSON file) by the sign of its pairing with kappa.
    ChamberPartition {
        #[command(flatten)]
        lattice: LatticeArgs,
        #[arg(long)]
        roots: PathBuf,
        /// Comma-separated rationals or @file.json.
        #[arg(long, allow_hyphen_values = true)]
        kappa: String,
    },
    /// Check the partition property of a positive half (root list JSON file).
    PartitionCheck {
        #[command(flatten)]
        lattice: LatticeArgs,
        #[arg(long)]
        plus: PathBuf,
        #[arg(long, default_value_t = DEFAULT_PARTITION_DEPTH)]
        depth: u32,
    },
}

/// Failure of a command: I/O problems exit with 1, everything else with 2.
#[derive(Debug)]
pub enum CliError {
    Io(String),
    Usage(String),
    Domain(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Domain(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) => 1,
            _ => 2,
        }
    }

    pub fn to_json(&self) -> Value {
        let (code, message) = match self {
            CliError::Io(m) => ("io_error", m.clone()),
            CliError::Usage(m) => ("usage_error", m.clone()),
            CliError::Domain(e) => (e.code(), e.to_string()),
        };
        json!({"code": code, "message": message})
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Runs the tool on `args` (including the program name) with the given value
/// of the precision environment variable. Returns the exit code and the text
/// for standard output.
pub fn run<I, T>(args: I, precision_env: Option<&str>) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => (0, e.to_string()),
                _ => {
                    let err = CliError::Usage(e.to_string().trim().to_string());
                    (err.exit_code(), render(&err.to_json()))
                }
            };
        }
    };
    match execute(&cli, precision_env) {
        Ok(v) => (0, render(&v)),
        Err(e) => (e.exit_code(), render(&e.to_json())),
    }
}

fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn sample_options(cli: &Cli, precision_env: Option<&str>) -> CliResult<SampleOptions> {
    let precision = match (cli.precision, precision_env) {
        (Some(p), _) => p,
        (None, Some(s)) => s
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("{PRECISION_ENV} must be a positive integer, got \"{s}\"")))?,
        (None, None) => DEFAULT_PRECISION,
    };
    if precision == 0 {
        return Err(CliError::Usage("precision must be positive".into()));
    }
    Ok(SampleOptions {
        samples: cli.samples.unwrap_or(DEFAULT_SAMPLES),
        precision,
        ..SampleOptions::default()
    })
}

fn read_json(path: &Path) -> CliResult<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Domain(Error::Parse(format!("{}: {e}", path.display()))))
}

fn read<T: FromJson>(path: &Path) -> CliResult<T> {
    Ok(T::from_json(&read_json(path)?)?)
}

/// Comma-separated rationals, or a JSON array read from `@path`.
fn vector_arg<T: FromJson>(arg: &str, from_rational: impl Fn(Rational) -> T) -> CliResult<Vec<T>> {
    match arg.strip_prefix('@') {
        Some(path) => read(Path::new(path)),
        None => Ok(parse_rational_list(arg)?.into_iter().map(from_rational).collect()),
    }
}

fn integer_vector(arg: &str) -> CliResult<Vec<BigInt>> {
    let q: Vec<Rational> = vector_arg(arg, |r| r)?;
    q.into_iter()
        .map(|x| {
            x.is_integer()
                .then(|| x.to_integer())
                .ok_or_else(|| Error::Parse(format!("expected an integer, got {}", format_rational(&x))).into())
        })
        .collect()
}

fn load_space(args: &LatticeArgs) -> CliResult<StandardSpace> {
    match (&args.kind, &args.gram) {
        (Some(kind), _) => Ok(make_standard_lattice(&kind.parse::<LatticeKind>()?)?),
        (None, Some(path)) => {
            let v = read_json(path)?;
            let space = QuadraticSpace::from_json(&v)?;
            Ok(match IntegralLattice::new(space.clone()) {
                Ok(l) => StandardSpace::Lattice(l),
                Err(_) => StandardSpace::Space(space),
            })
        }
        (None, None) => Err(CliError::Usage("one of --kind or --gram is required".into())),
    }
}

fn load_lattice(args: &LatticeArgs) -> CliResult<IntegralLattice> {
    match load_space(args)? {
        StandardSpace::Lattice(l) => Ok(l),
        StandardSpace::Space(s) => IntegralLattice::new(s).map_err(CliError::from),
    }
}

fn execute(cli: &Cli, precision_env: Option<&str>) -> CliResult<Value> {
    let options = sample_options(cli, precision_env)?;
    match &cli.command {
        Command::LatticeInfo { lattice } => lattice_info(lattice),
        Command::Roots {
            lattice,
            norm,
            threespace,
            period,
            constraints,
            bound,
        } => roots_command(lattice, norm.as_deref(), threespace, period, constraints, *bound),
        Command::Complement { lattice, constraints } => {
            let l = load_lattice(lattice)?;
            let cs: Vec<Vec<Rational>> = read(constraints)?;
            let sub = orthogonal_complement_lattice(&l, &cs)?;
            Ok(json!({
                "rank": sub.rank(),
                "basis": sub.basis().to_json(),
                "restricted_gram": sub.restricted_gram().to_json(),
                "saturated": is_saturated(sub.basis()),
            }))
        }
        Command::CycleClassify { input, integral } => {
            let v: ThreeSpace = read(input)?;
            let lattice = if *integral {
                Some(IntegralLattice::new(v.ambient().clone())?)
            } else {
                None
            };
            Ok(classify_cycle(&v, lattice.as_ref(), &options)?.to_json())
        }
        Command::CycleIntersect { input, delta } => {
            let v: ThreeSpace = read(input)?;
            let d: Vec<Rational> = vector_arg(delta, |r| r)?;
            Ok(intersect_hyperplane(&v, &d, options.precision)?.to_json())
        }
        Command::CycleSweepExample { t, n } => {
            let ts = parse_rational_list(t)?;
            let mut results = Vec::with_capacity(ts.len());
            for t in &ts {
                let c = classify_cycle(&example_family(t, *n)?, None, &options)?;
                results.push(json!({
                    "t": t.to_json(),
                    "smooth": c.smooth,
                    "hermitian_signature": c.hermitian_signature.to_json(),
                    "real": c.real,
                    "positive": c.positive,
                    "domain_status": c.domain_status.to_json(),
                }));
            }
            Ok(json!({"n": n, "results": results}))
        }
        Command::Reflect {
            lattice,
            root,
            vector,
            matrix,
        } => {
            let l = load_lattice(lattice)?;
            let delta = Root::new(&l, integer_vector(root)?)?;
            let mut out = serde_json::Map::new();
            out.insert("root".into(), delta.vec().to_vec().to_json());
            if let Some(arg) = vector {
                let x: Vec<GaussRational> = vector_arg(arg, GaussRational::from)?;
                let image = reflect(&l, &delta, &x)?;
                let real = image.iter().all(|z| z.im.is_zero());
                let value = if real {
                    image.iter().map(|z| z.re.clone()).collect::<Vec<_>>().to_json()
                } else {
                    image.to_json()
                };
                out.insert("image".into(), value);
            }
            if *matrix {
                let s = reflection_matrix(&l, &delta)?;
                out.insert("matrix".into(), s.matrix().to_json());
                let in_o_plus = match l.space().positive_frame() {
                    Some(_) => json!(is_in_o_plus(&l, &s)?),
                    None => Value::Null,
                };
                out.insert("in_o_plus".into(), in_o_plus);
            }
            Ok(Value::Object(out))
        }
        Command::IsometryCheck { lattice, matrix } => {
            let l = load_lattice(lattice)?;
            let m: Matrix<BigInt> = read(matrix)?;
            if m.nrows() != l.rank() || m.ncols() != l.rank() {
                return Err(Error::DimensionMismatch {
                    expected: l.rank(),
                    found: m.nrows(),
                }
                .into());
            }
            let ok = is_isometry(&l, &m)?;
            let in_o_plus = if ok && l.space().positive_frame().is_some() {
                json!(is_in_o_plus(&l, &Isometry::new(&l, m.clone())?)?)
            } else {
                Value::Null
            };
            let det = m.to_rational().determinant()?.to_integer();
            Ok(json!({"isometry": ok, "determinant": det.to_json(), "in_o_plus": in_o_plus}))
        }
        Command::ChamberPartition { lattice, roots, kappa } => {
            let l = load_lattice(lattice)?;
            let list: RootList = read(roots)?;
            let k: Vec<Rational> = vector_arg(kappa, |r| r)?;
            Ok(partition_by_chamber(&l, &list, &k)?.to_json())
        }
        Command::PartitionCheck { lattice, plus, depth } => {
            let l = load_lattice(lattice)?;
            let list: RootList = read(plus)?;
            Ok(check_partition_property(&l, &list, *depth)?.to_json())
        }
    }
}

fn lattice_info(args: &LatticeArgs) -> CliResult<Value> {
    let space = load_space(args)?;
    let sig = space.space().signature();
    let mut out = serde_json::Map::new();
    if let Some(kind) = &args.kind {
        out.insert("kind".into(), json!(kind));
    }
    out.insert("rank".into(), json!(space.space().rank()));
    let integral = match &space {
        StandardSpace::Lattice(l) => Some(l.clone()),
        StandardSpace::Space(s) => IntegralLattice::new(s.clone()).ok(),
    };
    match integral {
        Some(l) => {
            let inv = lattice_invariants(&l);
            out.insert("even".into(), json!(inv.even));
            out.insert("det".into(), inv.determinant.to_json());
            out.insert("unimodular".into(), json!(inv.unimodular));
        }
        None => {
            let det = space.space().gram().determinant()?;
            out.insert("det".into(), det.to_json());
        }
    }
    out.insert("signature".into(), sig.to_json());
    Ok(Value::Object(out))
}

fn roots_command(
    lattice: &LatticeArgs,
    norm: Option<&str>,
    threespace: &Option<PathBuf>,
    period: &Option<PathBuf>,
    constraints: &Option<PathBuf>,
    bound: Option<u64>,
) -> CliResult<Value> {
    let l = load_lattice(lattice)?;
    let need_bound = || bound.ok_or_else(|| CliError::Usage("--bound is required for bounded searches".into()));
    let list = match (threespace, period, constraints) {
        (Some(path), None, None) => {
            let v = read_threespace(path, &l)?;
            roots_orthogonal_to_threespace(&l, &v)?
        }
        (None, Some(path), None) => {
            let x: Vec<GaussRational> = read(path)?;
            delta_p_bounded(&l, &PeriodPoint::new(&l, x)?, need_bound()?)?
        }
        (None, None, Some(path)) => {
            let cs: Vec<Vec<Rational>> = read(path)?;
            bounded_root_search(&l, &cs, need_bound()?)?
        }
        (None, None, None) => {
            let target = match norm {
                Some(s) => crate::arith::parse_rational(s)?,
                None => Rational::from_integer(BigInt::from(-2)),
            };
            if target.is_zero() {
                return Err(Error::OutOfRange("norm must be nonzero".into()).into());
            }
            let gram = l.space().gram();
            let (g, t) = if target.is_negative() {
                (gram.map(|x| -x.clone()), -target)
            } else {
                (gram.clone(), target)
            };
            RootList::new(enumerate_norm_vectors(&g, &t)?, true, None)
        }
        _ => {
            return Err(CliError::Usage(
                "--threespace, --period and --constraints are mutually exclusive".into(),
            ))
        }
    };
    Ok(list.to_json())
}

/// A three-space file holds a full three-space object, whose ambient must
/// match the lattice, or just `{"basis": ...}`.
fn read_threespace(path: &Path, lattice: &IntegralLattice) -> CliResult<ThreeSpace> {
    let v = read_json(path)?;
    if v.get("ambient").is_some() {
        return Ok(ThreeSpace::from_json(&v)?);
    }
    let basis = v.get("basis").unwrap_or(&v);
    Ok(ThreeSpace::new(lattice.space().clone(), Matrix::from_json(basis)?)?)
}
