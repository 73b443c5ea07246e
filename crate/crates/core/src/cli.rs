//! The `kraus` command-line tool.
//!
//! Every subcommand reads and writes the JSON formats of [`crate::io`].
//! Artifacts (states, channels, Choi matrices, dilations) go to `--output`
//! or, when that is absent, to stdout. Reports go to stdout as `key: value`
//! lines or, with `--format json`, as a JSON object carrying the same numbers.
//!
//! Exit codes: 0 success, 1 domain failure (invalid channel, inapplicable
//! strategy, residual above tolerance, target not reached), 2 unreadable or
//! malformed input or an invalid flag value.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::{Map, Value};

use crate::channel::{self, ChoiMatrix, KrausMap, Subsystem};
use crate::error::Error;
use crate::io;
use crate::linalg::c;
use crate::reach;
use crate::state::{self, DensityMatrix};
use crate::synthesis::{self, BasisChoice, Strategy};
use crate::tolerance::Tolerances;

#[derive(Debug, Parser)]
#[command(
    name = "kraus",
    version,
    about = "Construct, verify, synthesize and search Kraus maps"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalOpts {
    /// Equality tolerance for states, channels and transfer residuals.
    #[arg(long, global = true, default_value_t = Tolerances::DEFAULT.eq)]
    pub tol_eq: f64,
    /// Trace-preservation and unitarity tolerance.
    #[arg(long, global = true, default_value_t = Tolerances::DEFAULT.tp)]
    pub tol_tp: f64,
    /// Most negative eigenvalue accepted as roundoff.
    #[arg(long, global = true, default_value_t = Tolerances::DEFAULT.psd)]
    pub tol_psd: f64,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    #[value(alias = "structured")]
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Auto,
    Unitary,
    Pta,
    Atp,
    AllToAny,
    Composed,
    QubitPtp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Direction {
    /// Kraus operators to Choi matrix.
    ToChoi,
    /// Choi matrix to minimal Kraus operators.
    ToKraus,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check trace preservation and complete positivity of a channel file.
    Verify { channel: PathBuf },
    /// Build a channel taking one state to another.
    Synthesize {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        target: PathBuf,
        #[arg(long, value_enum, default_value_t = StrategyArg::Auto)]
        strategy: StrategyArg,
        /// Seeded random input basis for all-to-one maps (computational when absent).
        #[arg(long)]
        basis_seed: Option<u64>,
        /// Four complex coefficients "re,im;re,im;re,im;re,im".
        #[arg(long)]
        ptp_coeffs: Option<String>,
        /// Intermediate pure state for the composed strategy (default |0>).
        #[arg(long)]
        intermediate: Option<PathBuf>,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Apply a channel to a state. A dilation file acts on the joint space;
    /// a system-sized state is first extended by the ancilla reference |0>.
    Apply {
        channel: PathBuf,
        state: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Compose two channels; `first` acts first.
    Compose {
        #[arg(long)]
        first: PathBuf,
        #[arg(long)]
        then: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Stinespring dilation of a channel.
    Dilate {
        channel: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Convert between Kraus and Choi representations.
    Choi {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Direction::ToChoi)]
        direction: Direction,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Minimal Kraus operators from a Choi file.
    Kraus {
        choi: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Breadth-first search over compositions of a control set.
    Reach {
        #[arg(long)]
        controls: PathBuf,
        #[arg(long)]
        source: Option<PathBuf>,
        #[arg(long)]
        target: Option<PathBuf>,
        /// Search channel space for this channel instead of state space.
        #[arg(long, conflicts_with_all = ["source", "target"])]
        target_channel: Option<PathBuf>,
        #[arg(long)]
        depth: usize,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Seeded random density matrix (uses --seed).
    RandomState {
        #[arg(long)]
        dim: usize,
        /// Defaults to full rank.
        #[arg(long)]
        rank: Option<usize>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Thermal state exp(-beta H)/Z of a Hamiltonian matrix file.
    ThermalState {
        #[arg(long)]
        hamiltonian: PathBuf,
        #[arg(long)]
        beta: f64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Trace distance, purities and entropies of two states.
    Metrics { state1: PathBuf, state2: PathBuf },
    /// Partial trace of a bipartite state.
    PartialTrace {
        state: PathBuf,
        /// Factor dimensions "N,M".
        #[arg(long)]
        dims: String,
        /// Factor to trace out (1 or 2).
        #[arg(long)]
        trace_out: u8,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

/// Failure of a command, with its exit code.
#[derive(Debug)]
pub enum CliError {
    Input(String),
    Domain(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Domain(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(msg) | CliError::Domain(msg) => f.write_str(msg),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        if e.is_parse() || matches!(e, Error::InvalidArgument(_)) {
            CliError::Input(e.to_string())
        } else {
            CliError::Domain(e.to_string())
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

/// Wraps a library error with the file it came from.
fn in_file<T>(path: &Path, r: crate::Result<T>) -> CliResult<T> {
    r.map_err(|e| match CliError::from(e) {
        CliError::Input(m) => CliError::Input(format!("{}: {m}", path.display())),
        CliError::Domain(m) => CliError::Domain(format!("{}: {m}", path.display())),
    })
}

struct Ctx<'a> {
    tol: Tolerances,
    format: Format,
    out: &'a mut dyn Write,
}

impl Ctx<'_> {
    fn state(&self, path: &Path) -> CliResult<DensityMatrix> {
        in_file(path, io::parse_state(&read(path)?, &self.tol))
    }

    fn channel(&self, path: &Path) -> CliResult<KrausMap> {
        in_file(path, io::parse_channel(&read(path)?, &self.tol))
    }

    fn emit(&mut self, text: &str) -> CliResult<()> {
        self.out
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Input(format!("stdout: {e}")))
    }

    fn artifact(&mut self, value: &Value, output: Option<&Path>) -> CliResult<()> {
        let text = io::to_json_string(value);
        match output {
            Some(path) => fs::write(path, text).map_err(|e| CliError::Input(format!("{}: {e}", path.display()))),
            None => self.emit(&text),
        }
    }

    fn report(&mut self, value: &Value) -> CliResult<()> {
        let text = match self.format {
            Format::Human => io::to_human_string(value),
            Format::Json => io::to_json_string(value),
        };
        self.emit(&text)
    }
}

fn parse_coeffs(text: &str) -> CliResult<[Complex64; 4]> {
    let bad = || {
        CliError::Input(format!(
            "--ptp-coeffs expects \"re,im;re,im;re,im;re,im\", got {text:?}"
        ))
    };
    let parts: Vec<&str> = text.split(';').collect();
    if parts.len() != 4 {
        return Err(bad());
    }
    let mut out = [c(0.0, 0.0); 4];
    for (slot, part) in out.iter_mut().zip(parts) {
        let (re, im) = part.split_once(',').ok_or_else(bad)?;
        let re: f64 = re.trim().parse().map_err(|_| bad())?;
        let im: f64 = im.trim().parse().map_err(|_| bad())?;
        if !re.is_finite() || !im.is_finite() {
            return Err(bad());
        }
        *slot = c(re, im);
    }
    Ok(out)
}

fn parse_dims(text: &str) -> CliResult<(usize, usize)> {
    let bad = || CliError::Input(format!("--dims expects \"N,M\", got {text:?}"));
    let (a, b) = text.split_once(',').ok_or_else(bad)?;
    Ok((
        a.trim().parse().map_err(|_| bad())?,
        b.trim().parse().map_err(|_| bad())?,
    ))
}

fn object(pairs: Vec<(&str, Value)>) -> Value {
    let mut map = Map::new();
    for (k, v) in pairs {
        map.insert(k.to_string(), v);
    }
    Value::Object(map)
}

fn verify(ctx: &mut Ctx, path: &Path) -> CliResult<i32> {
    let doc = in_file(path, io::parse_channel_doc(&read(path)?))?;
    let ops = in_file(path, doc.to_ops())?;
    in_file(path, channel::check_operator_shapes(&ops).map(|_| ()))?;
    let tp_residual = channel::tp_residual(&ops);
    let phi = KrausMap::from_trusted(doc.dim, ops);
    let eigenvalues = channel::kraus_to_choi(&phi).eigenvalues()?;
    let min = eigenvalues.last().copied().unwrap_or(0.0);
    let cp_min = if min < -ctx.tol.psd || min >= ctx.tol.rank {
        min
    } else {
        0.0
    };
    let rank = eigenvalues.iter().filter(|&&l| l > ctx.tol.rank).count();
    let valid = tp_residual <= ctx.tol.tp && cp_min >= -ctx.tol.psd;
    ctx.report(&object(vec![
        ("tp_residual", io::float(tp_residual)),
        ("cp_min_eigenvalue", io::float(cp_min)),
        ("kraus_rank", rank.into()),
        ("is_unitary", Value::Bool(valid && rank == 1)),
        ("valid", Value::Bool(valid)),
    ]))?;
    Ok(if valid { 0 } else { 1 })
}

#[allow(clippy::too_many_arguments)]
fn synthesize(
    ctx: &mut Ctx,
    input: &Path,
    target: &Path,
    strategy: StrategyArg,
    basis_seed: Option<u64>,
    ptp_coeffs: Option<&str>,
    intermediate: Option<&Path>,
    output: &Path,
) -> CliResult<i32> {
    let rho_in = ctx.state(input)?;
    let rho_f = ctx.state(target)?;
    let basis = basis_seed.map_or(BasisChoice::Computational, BasisChoice::Seeded);
    let strategy = match strategy {
        StrategyArg::Auto => Strategy::Auto,
        StrategyArg::Unitary => Strategy::UnitaryTransfer,
        StrategyArg::Pta => Strategy::PureToAny,
        StrategyArg::Atp => Strategy::AllToPure { basis },
        StrategyArg::AllToAny => Strategy::AllToAny { basis },
        StrategyArg::Composed => {
            let intermediate = match intermediate {
                Some(path) => {
                    let rho = ctx.state(path)?;
                    let psi = synthesis::as_pure(&rho, &ctx.tol)?.ok_or_else(|| {
                        CliError::Domain(format!("{}: intermediate state is not pure", path.display()))
                    })?;
                    Some(psi)
                }
                None => None,
            };
            Strategy::ComposedPtaAtp { intermediate, basis }
        }
        StrategyArg::QubitPtp => {
            let text = ptp_coeffs.ok_or_else(|| CliError::Input("--strategy qubit-ptp needs --ptp-coeffs".into()))?;
            Strategy::QubitPtp {
                coeffs: parse_coeffs(text)?,
            }
        }
    };
    let result = synthesis::synthesize(&rho_in, &rho_f, &strategy, &ctx.tol)?;
    let residual = synthesis::transfer_residual(&result.channel, &rho_in, &rho_f)?;
    ctx.artifact(&io::channel_value(&result.channel), Some(output))?;
    ctx.report(&object(vec![
        ("strategy", Value::String(result.strategy.name().into())),
        ("n_ops", result.channel.len().into()),
        ("transfer_residual", io::float(residual)),
    ]))?;
    Ok(if residual <= ctx.tol.eq { 0 } else { 1 })
}

fn apply(ctx: &mut Ctx, channel_path: &Path, state_path: &Path, output: Option<&Path>) -> CliResult<i32> {
    let text = read(channel_path)?;
    let is_dilation = serde_json::from_str::<Value>(&text)
        .map(|v| v.get("unitary").is_some())
        .unwrap_or(false);
    let rho = ctx.state(state_path)?;
    let out = if is_dilation {
        let d = in_file(channel_path, io::parse_dilation(&text, &ctx.tol))?;
        // A system-sized state is embedded as rho (x) |0><0| on the ancilla.
        let joint = if rho.dim() == d.system_dim() {
            rho.tensor(&DensityMatrix::basis(d.ancilla_dim(), 0))
        } else {
            rho
        };
        joint.conjugate_by(d.unitary())?
    } else {
        let phi = in_file(channel_path, io::parse_channel(&text, &ctx.tol))?;
        channel::apply(&phi, &rho)?
    };
    ctx.artifact(&io::state_value(&out), output)?;
    Ok(0)
}

fn reach_cmd(
    ctx: &mut Ctx,
    controls_path: &Path,
    source: Option<&Path>,
    target: Option<&Path>,
    target_channel: Option<&Path>,
    depth: usize,
    tol: f64,
) -> CliResult<i32> {
    let controls = in_file(controls_path, io::parse_control_set(&read(controls_path)?, &ctx.tol))?;
    let (report, residual) = match target_channel {
        Some(path) => {
            let target = ctx.channel(path)?;
            let report = reach::reach_channel(&target, &controls, depth, tol)?;
            let residual = if report.reached {
                let replayed = reach::replay_channel(&controls, &report.witness)?;
                Some(channel::choi_distance(&replayed, &target)?)
            } else {
                None
            };
            (report, residual)
        }
        None => {
            let (Some(source), Some(target)) = (source, target) else {
                return Err(CliError::Input(
                    "reach needs --source and --target, or --target-channel".into(),
                ));
            };
            let rho0 = ctx.state(source)?;
            let target = ctx.state(target)?;
            let report = reach::reach_state(&rho0, &target, &controls, depth, tol)?;
            let residual = if report.reached {
                let replayed = reach::replay_state(&controls, &report.witness, &rho0)?;
                Some(state::trace_distance(&replayed, &target)?)
            } else {
                None
            };
            (report, residual)
        }
    };
    ctx.report(&io::report_value(&report, residual))?;
    Ok(if report.reached { 0 } else { 1 })
}

fn dispatch(cli: Cli, ctx: &mut Ctx) -> CliResult<i32> {
    match cli.command {
        Command::Verify { channel } => verify(ctx, &channel),
        Command::Synthesize {
            input,
            target,
            strategy,
            basis_seed,
            ptp_coeffs,
            intermediate,
            output,
        } => synthesize(
            ctx,
            &input,
            &target,
            strategy,
            basis_seed,
            ptp_coeffs.as_deref(),
            intermediate.as_deref(),
            &output,
        ),
        Command::Apply { channel, state, output } => apply(ctx, &channel, &state, output.as_deref()),
        Command::Compose { first, then, output } => {
            let phi1 = ctx.channel(&first)?;
            let phi2 = ctx.channel(&then)?;
            let composed = channel::compose(&phi2, &phi1)?;
            ctx.artifact(&io::channel_value(&composed), output.as_deref())?;
            Ok(0)
        }
        Command::Dilate { channel, output } => {
            let phi = ctx.channel(&channel)?;
            let d = channel::stinespring_dilate(&phi, &ctx.tol)?;
            ctx.artifact(&io::dilation_value(&d), output.as_deref())?;
            Ok(0)
        }
        Command::Choi {
            input,
            direction: Direction::ToChoi,
            output,
        } => {
            let phi = ctx.channel(&input)?;
            ctx.artifact(&io::choi_value(&channel::kraus_to_choi(&phi)), output.as_deref())?;
            Ok(0)
        }
        Command::Choi {
            input: choi,
            direction: Direction::ToKraus,
            output,
        }
        | Command::Kraus { choi, output } => {
            let c: ChoiMatrix = in_file(&choi, io::parse_choi(&read(&choi)?, &ctx.tol))?;
            let phi = channel::choi_to_kraus(&c, &ctx.tol)?;
            ctx.artifact(&io::channel_value(&phi), output.as_deref())?;
            Ok(0)
        }
        Command::Reach {
            controls,
            source,
            target,
            target_channel,
            depth,
            tol,
        } => reach_cmd(
            ctx,
            &controls,
            source.as_deref(),
            target.as_deref(),
            target_channel.as_deref(),
            depth,
            tol,
        ),
        Command::RandomState { dim, rank, output } => {
            let rho = state::random_density(dim, rank.unwrap_or(dim), cli.global.seed)?;
            ctx.artifact(&io::state_value(&rho), output.as_deref())?;
            Ok(0)
        }
        Command::ThermalState {
            hamiltonian,
            beta,
            output,
        } => {
            let h = in_file(&hamiltonian, io::parse_matrix(&read(&hamiltonian)?))?;
            let rho = state::thermal_state(&h, beta, &ctx.tol)?;
            ctx.artifact(&io::state_value(&rho), output.as_deref())?;
            Ok(0)
        }
        Command::Metrics { state1, state2 } => {
            let a = ctx.state(&state1)?;
            let b = ctx.state(&state2)?;
            let m = state::state_metrics(&a, &b, &ctx.tol)?;
            let equivalent = state::kinematically_equivalent(&a, &b, ctx.tol.eq)?;
            ctx.report(&object(vec![
                ("trace_distance", io::float(m.trace_distance)),
                ("purity1", io::float(m.purity1)),
                ("purity2", io::float(m.purity2)),
                ("vn_entropy1", io::float(m.vn_entropy1)),
                ("vn_entropy2", io::float(m.vn_entropy2)),
                ("kinematically_equivalent", Value::Bool(equivalent)),
            ]))?;
            Ok(0)
        }
        Command::PartialTrace {
            state: path,
            dims,
            trace_out,
            output,
        } => {
            let (left, right) = parse_dims(&dims)?;
            let which = match trace_out {
                1 => Subsystem::First,
                2 => Subsystem::Second,
                other => return Err(CliError::Input(format!("--trace-out must be 1 or 2, got {other}"))),
            };
            let rho = ctx.state(&path)?;
            let reduced = channel::partial_trace(&rho, left, right, which)?;
            ctx.artifact(&io::state_value(&reduced), output.as_deref())?;
            Ok(0)
        }
    }
}

/// Runs a parsed command, writing reports and stdout artifacts to `out`.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    let g = &cli.global;
    for (name, v) in [("--tol-eq", g.tol_eq), ("--tol-tp", g.tol_tp), ("--tol-psd", g.tol_psd)] {
        if !(v >= 0.0 && v.is_finite()) {
            return Err(CliError::Input(format!("{name} must be a finite non-negative number")));
        }
    }
    let tol = Tolerances {
        eq: g.tol_eq,
        tp: g.tol_tp,
        psd: g.tol_psd,
        ..Tolerances::DEFAULT
    };
    let mut ctx = Ctx {
        tol,
        format: g.format,
        out,
    };
    dispatch(cli, &mut ctx)
}

/// Entry point used by the binary: parses `args`, runs, and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
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
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    match run(cli, &mut lock) {
        Ok(code) => code,
        Err(e) => {
            let _ = lock.flush();
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
