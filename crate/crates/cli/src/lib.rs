//! Command-line front end: argument parsing, file loading, output
//! formatting and exit codes.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};
use stackvol::groupoid::finite_sets_cardinality;
use stackvol::json::{
    bibundle_from_json, groupoid_from_json, groupoid_to_json, weights_from_json,
};
use stackvol::morita::{linking_groupoid, morita_volume_check};
use stackvol::scalar::{format_rational, rational_to_f64};
use stackvol::smooth::adjoint::default_gaussian;
use stackvol::smooth::{run_example, weyl_integration_check, CatalogOutput, Params, TestFunction};
use stackvol::{Error, FiniteGroupoid, RandomBounds, Rational, RealQuadrature};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;
pub const EXIT_IO: i32 = 3;

pub const DEFAULT_SEED: u64 = 94720;

#[derive(Parser, Debug)]
#[command(name = "stackvol", version, about = "Volumes of stacks presented by groupoids")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for random generation and Monte Carlo.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Absolute quadrature tolerance.
    #[arg(long, global = true, default_value_t = 1e-6)]
    tol: f64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact computations on finite groupoids.
    #[command(subcommand)]
    Finite(FiniteCommand),
    /// Bibundles and Morita invariance.
    #[command(subcommand)]
    Morita(MoritaCommand),
    /// Numerical catalog models.
    #[command(subcommand)]
    Smooth(SmoothCommand),
    /// Partial sums of infinite series.
    #[command(subcommand)]
    Series(SeriesCommand),
}

#[derive(Args, Debug)]
struct GroupoidArg {
    /// Groupoid JSON file.
    #[arg(long)]
    groupoid: PathBuf,
}

#[derive(Args, Debug)]
struct WeightedArgs {
    #[command(flatten)]
    groupoid: GroupoidArg,
    /// Weights JSON file.
    #[arg(long)]
    weights: PathBuf,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Method {
    Fiber,
    Orbit,
    Both,
}

#[derive(Subcommand, Debug)]
enum FiniteCommand {
    /// Sum of inverse isotropy orders over the orbits.
    Cardinality(GroupoidArg),
    /// Weighted volume.
    Volume {
        #[command(flatten)]
        args: WeightedArgs,
        #[arg(long, value_enum, default_value_t = Method::Both)]
        method: Method,
    },
    /// Measure of the preimage of a set of orbits.
    Measure {
        #[command(flatten)]
        args: WeightedArgs,
        /// Comma-separated orbit ids (orbits are numbered by first object).
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        orbits: Vec<usize>,
    },
    /// Seeded random groupoid built from (pair × group) blocks.
    Generate {
        #[arg(long, default_value_t = 8)]
        max_objects: usize,
        #[arg(long, default_value_t = 8)]
        max_group_order: usize,
        #[arg(long)]
        max_block_objects: Option<usize>,
    },
    /// Check the groupoid axioms.
    Validate(GroupoidArg),
}

#[derive(Args, Debug)]
struct MoritaArgs {
    #[arg(long)]
    left: PathBuf,
    #[arg(long)]
    right: PathBuf,
    #[arg(long)]
    bibundle: PathBuf,
}

#[derive(Subcommand, Debug)]
enum MoritaCommand {
    /// Print the linking groupoid.
    Link(MoritaArgs),
    /// Compare fiber volumes on both sides.
    Check {
        #[command(flatten)]
        args: MoritaArgs,
        #[arg(long)]
        left_weights: PathBuf,
        #[arg(long)]
        right_weights: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Phi {
    Gaussian,
    Shifted,
}

#[derive(Subcommand, Debug)]
enum SmoothCommand {
    /// Evaluate a catalog model: plane-so2, plane-o2, torus-free,
    /// adjoint-su2, symplectic-bk, poisson-sphere-bundle, su2-dual.
    Example {
        name: String,
        /// Model parameters as key=value.
        params: Vec<String>,
    },
    /// Weyl integration formula for SU(2).
    WeylCheck {
        #[arg(long, default_value_t = 1_000_000)]
        samples: usize,
        /// Relative tolerance for the comparison.
        #[arg(long, default_value_t = 0.02)]
        rel_tol: f64,
        #[arg(long, value_enum, default_value_t = Phi::Gaussian)]
        phi: Phi,
        #[arg(long, default_value_t = 1.0)]
        width: f64,
        /// Center of the shifted Gaussian.
        #[arg(long, default_value_t = 1.0)]
        center: f64,
    },
}

#[derive(Subcommand, Debug)]
enum SeriesCommand {
    /// Σ 1/n! up to the cutoff.
    FiniteSets {
        #[arg(long, default_value_t = 13)]
        cutoff: usize,
    },
}

/// Failure with its exit code.
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Malformed(_) => EXIT_IO,
            e if e.is_numerical() => EXIT_NUMERICAL,
            _ => EXIT_VALIDATION,
        };
        Failure { code, message: e.to_string() }
    }
}

fn fail(code: i32, message: impl Into<String>) -> Failure {
    Failure { code, message: message.into() }
}

/// Loaded file, with errors tagged by path.
fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| fail(EXIT_IO, format!("{}: {e}", path.display())))
}

fn tagged<T>(path: &Path, r: stackvol::Result<T>) -> Result<T, Failure> {
    r.map_err(|e| {
        let mut f = Failure::from(e);
        f.message = format!("{}: {}", path.display(), f.message);
        f
    })
}

fn load_groupoid(path: &Path) -> Result<FiniteGroupoid, Failure> {
    tagged(path, groupoid_from_json(&read(path)?))
}

fn load_weights(path: &Path, g: &FiniteGroupoid) -> Result<stackvol::RationalWeights, Failure> {
    tagged(path, weights_from_json(&read(path)?, g))
}

/// Twelve significant digits, trailing zeros trimmed.
pub fn format_real(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let exp = v.abs().log10().floor() as i32;
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        let s = format!("{v:.decimals$}");
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        format!("{v:.11e}")
    }
}

fn error_text(e: f64) -> String {
    format!("{e:.3e}")
}

struct Output {
    params: Vec<(String, String)>,
    text: Vec<String>,
    json: Value,
}

impl Output {
    fn new(command: &str, cli: &Cli) -> Self {
        Self {
            params: vec![
                ("command".into(), command.into()),
                ("seed".into(), cli.seed.to_string()),
                ("tol".into(), format!("{:e}", cli.tol)),
            ],
            text: Vec::new(),
            json: Value::Null,
        }
    }

    fn param(&mut self, key: &str, value: impl ToString) {
        self.params.push((key.into(), value.to_string()));
    }

    fn exact(&mut self, q: &Rational) {
        self.text.push(format_rational(q));
        self.json = json!({"value": format_rational(q), "exact": true});
    }

    fn real(&mut self, r: &RealQuadrature) {
        self.text.push(format!(
            "{} ± {} ({} evaluations)",
            format_real(r.value),
            error_text(r.error_estimate),
            r.evaluations
        ));
        self.json = quadrature_json(r);
    }

    fn write(&self, json_mode: bool, out: &mut dyn Write) -> std::io::Result<()> {
        if json_mode {
            let params: Map<String, Value> =
                self.params.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
            writeln!(out, "{}", json!({"params": params, "result": self.json}))
        } else {
            let echo: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            writeln!(out, "# {}", echo.join(" "))?;
            for line in &self.text {
                writeln!(out, "{line}")?;
            }
            Ok(())
        }
    }
}

fn quadrature_json(r: &RealQuadrature) -> Value {
    json!({"value": r.value, "errorEstimate": r.error_estimate, "evaluations": r.evaluations})
}

/// Run the command line `args` (including the program name). Returns the
/// process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_VALIDATION } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return code;
        }
    };
    if !(cli.tol > 0.0) {
        let _ = writeln!(err, "error: --tol must be positive");
        return EXIT_VALIDATION;
    }
    match dispatch(&cli) {
        Ok(output) => match output.write(cli.json, out) {
            Ok(()) => EXIT_OK,
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                EXIT_IO
            }
        },
        Err(f) => {
            if cli.json {
                let _ = writeln!(out, "{}", json!({"error": f.message, "exitCode": f.code}));
            }
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(cli: &Cli) -> Result<Output, Failure> {
    match &cli.command {
        Command::Finite(c) => finite(cli, c),
        Command::Morita(c) => morita(cli, c),
        Command::Smooth(c) => smooth(cli, c),
        Command::Series(SeriesCommand::FiniteSets { cutoff }) => {
            let mut o = Output::new("series finite-sets", cli);
            o.param("cutoff", cutoff);
            let s = finite_sets_cardinality(*cutoff);
            o.exact(&s);
            let approx = rational_to_f64(&s);
            o.text.push(format!("≈ {}", format_real(approx)));
            o.json["approx"] = json!(approx);
            Ok(o)
        }
    }
}

fn finite(cli: &Cli, c: &FiniteCommand) -> Result<Output, Failure> {
    match c {
        FiniteCommand::Cardinality(a) => {
            let mut o = Output::new("finite cardinality", cli);
            o.param("groupoid", a.groupoid.display());
            let g = load_groupoid(&a.groupoid)?;
            o.exact(&g.cardinality::<Rational>()?);
            Ok(o)
        }
        FiniteCommand::Volume { args, method } => {
            let mut o = Output::new("finite volume", cli);
            o.param("groupoid", args.groupoid.groupoid.display());
            o.param("weights", args.weights.display());
            o.param("method", format!("{method:?}").to_lowercase());
            let g = load_groupoid(&args.groupoid.groupoid)?;
            let w = load_weights(&args.weights, &g)?;
            match method {
                Method::Fiber => o.exact(&g.fiber_volume(&w)?),
                Method::Orbit => o.exact(&g.orbit_volume(&w)?),
                Method::Both => {
                    let fiber = g.fiber_volume(&w)?;
                    let orbit = g.orbit_volume(&w)?;
                    if fiber != orbit {
                        return Err(fail(
                            EXIT_VALIDATION,
                            format!(
                                "fiber volume {} differs from orbit volume {}",
                                format_rational(&fiber),
                                format_rational(&orbit)
                            ),
                        ));
                    }
                    o.text.push(format!("fiber {}", format_rational(&fiber)));
                    o.text.push(format!("orbit {}", format_rational(&orbit)));
                    o.json = json!({
                        "fiber": format_rational(&fiber),
                        "orbit": format_rational(&orbit),
                        "equal": true,
                    });
                }
            }
            Ok(o)
        }
        FiniteCommand::Measure { args, orbits } => {
            let mut o = Output::new("finite measure", cli);
            o.param("groupoid", args.groupoid.groupoid.display());
            o.param("weights", args.weights.display());
            let ids: Vec<String> = orbits.iter().map(|k| k.to_string()).collect();
            o.param("orbits", ids.join(","));
            let g = load_groupoid(&args.groupoid.groupoid)?;
            let w = load_weights(&args.weights, &g)?;
            o.exact(&g.orbit_set_measure(&w, orbits)?);
            Ok(o)
        }
        FiniteCommand::Generate { max_objects, max_group_order, max_block_objects } => {
            let mut o = Output::new("finite generate", cli);
            o.param("max-objects", max_objects);
            o.param("max-group-order", max_group_order);
            let mut bounds = RandomBounds::new(*max_objects, *max_group_order);
            if let Some(b) = max_block_objects {
                o.param("max-block-objects", b);
                bounds = bounds.with_max_block_objects(*b);
            }
            let g = FiniteGroupoid::random(cli.seed, bounds)?;
            let doc = groupoid_to_json(&g);
            o.text.push(serde_json::to_string_pretty(&doc).expect("JSON values serialize"));
            o.json = doc;
            Ok(o)
        }
        FiniteCommand::Validate(a) => {
            let g = load_groupoid(&a.groupoid)?;
            let report = g.validate();
            if report.is_ok() {
                let mut o = Output::new("finite validate", cli);
                o.param("groupoid", a.groupoid.display());
                o.text.push("ok".into());
                o.json = json!({"ok": true, "violations": []});
                Ok(o)
            } else {
                Err(Failure::from(Error::InvalidGroupoid(report)))
            }
        }
    }
}

fn morita(cli: &Cli, c: &MoritaCommand) -> Result<Output, Failure> {
    let (args, name) = match c {
        MoritaCommand::Link(a) => (a, "morita link"),
        MoritaCommand::Check { args, .. } => (args, "morita check"),
    };
    let mut o = Output::new(name, cli);
    o.param("left", args.left.display());
    o.param("right", args.right.display());
    o.param("bibundle", args.bibundle.display());
    let left = load_groupoid(&args.left)?;
    let right = load_groupoid(&args.right)?;
    let bundle = tagged(&args.bibundle, bibundle_from_json(&read(&args.bibundle)?, &left, &right))?;
    match c {
        MoritaCommand::Link(_) => {
            let linking = linking_groupoid(&left, &right, &bundle)?;
            let doc = groupoid_to_json(&linking);
            o.text.push(serde_json::to_string_pretty(&doc).expect("JSON values serialize"));
            o.json = doc;
        }
        MoritaCommand::Check { left_weights, right_weights, .. } => {
            o.param("left-weights", left_weights.display());
            o.param("right-weights", right_weights.display());
            let w1 = load_weights(left_weights, &left)?;
            let w2 = load_weights(right_weights, &right)?;
            let report = morita_volume_check(&left, &right, &bundle, &w1, &w2)?;
            let (l, r) = (format_rational(&report.left), format_rational(&report.right));
            o.text.push(format!("left {l}"));
            o.text.push(format!("right {r}"));
            o.text.push(if report.equal { "equal".into() } else { "mismatch".into() });
            o.json = json!({"left": l, "right": r, "equal": report.equal});
            if !report.equal {
                return Err(fail(EXIT_VALIDATION, format!("Morita volumes differ: {l} vs {r}")));
            }
        }
    }
    Ok(o)
}

fn smooth(cli: &Cli, c: &SmoothCommand) -> Result<Output, Failure> {
    match c {
        SmoothCommand::Example { name, params } => {
            let mut o = Output::new("smooth example", cli);
            o.param("model", name);
            let mut p = Params::parse(params)?;
            if p.get("tol").is_none() {
                p.set("tol", format!("{:e}", cli.tol));
            }
            if p.get("seed").is_none() {
                p.set("seed", cli.seed);
            }
            for (k, v) in p.iter() {
                match o.params.iter_mut().find(|(key, _)| key == k) {
                    Some(entry) => entry.1 = v.to_string(),
                    None => o.param(k, v),
                }
            }
            match run_example(name, &p)? {
                CatalogOutput::Value(r) => o.real(&r),
                CatalogOutput::Exact(q) => o.exact(&q),
                CatalogOutput::Table(rows) => {
                    o.text.push("t\tdensity".into());
                    for (t, d) in &rows {
                        o.text.push(format!("{}\t{}", format_real(*t), format_real(*d)));
                    }
                    o.json = Value::Array(rows.iter().map(|(t, d)| json!({"t": t, "density": d})).collect());
                }
            }
            Ok(o)
        }
        SmoothCommand::WeylCheck { samples, rel_tol, phi, width, center } => {
            let mut o = Output::new("smooth weyl-check", cli);
            o.param("samples", samples);
            o.param("rel-tol", rel_tol);
            o.param("phi", format!("{phi:?}").to_lowercase());
            o.param("width", width);
            let f = match phi {
                Phi::Gaussian if *width == 1.0 => default_gaussian(),
                Phi::Gaussian => TestFunction::Gaussian { width: *width, scale: 1.0 },
                Phi::Shifted => {
                    o.param("center", center);
                    TestFunction::ShiftedGaussian { center: *center, width: *width, scale: 1.0 }
                }
            };
            if !(*width > 0.0) {
                return Err(fail(EXIT_VALIDATION, "--width must be positive"));
            }
            let r = weyl_integration_check(&f, *samples, cli.seed, *rel_tol)?;
            o.text.push(format!("lhs {} ± {}", format_real(r.lhs.value), error_text(r.lhs.error_estimate)));
            o.text.push(format!("rhs {} ± {}", format_real(r.rhs.value), error_text(r.rhs.error_estimate)));
            o.text.push(format!("relative error {}", format_real(r.relative_error)));
            o.json = json!({
                "lhs": quadrature_json(&r.lhs),
                "rhs": quadrature_json(&r.rhs),
                "relativeError": r.relative_error,
                "passed": r.passed,
            });
            if !r.passed {
                return Err(fail(
                    EXIT_VALIDATION,
                    format!("relative error {} exceeds {}", format_real(r.relative_error), rel_tol),
                ));
            }
            Ok(o)
        }
    }
}
