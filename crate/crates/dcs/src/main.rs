//! Command-line front end: field inspection, Q-/P-grids, and the
//! self-check suite.
//!
//! Exit codes: 0 success, 2 usage error, 3 domain error (bad input
//! values, singular P-function), 4 I/O error.

use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};

use dcs::gf2n::{build_field, FieldElement, FieldSpec};
use dcs::ordering::{self, AxisOrder, BaseScheme};
use dcs::pauli::{self, Operator, PhasePoint};
use dcs::quasidist::{self, QuasiError};
use dcs::states::{self, StateVector, THETA_SYMMETRIC};
use dcs::verify;

const EXIT_DOMAIN: u8 = 3;
const EXIT_IO: u8 = 4;

#[derive(Parser)]
#[command(name = "dcs", version, about = "Discrete coherent states for n qubits over GF(2^n)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the field: polynomial, self-dual basis, h-histogram.
    FieldInfo(FieldInfoArgs),
    /// Evaluate the Q-function of a state on the phase-space grid.
    Qfunc(GridArgs),
    /// Evaluate the P-function of a state on the phase-space grid.
    Pfunc(GridArgs),
    /// Run the named identity checks and report pass/fail per check.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct FieldArgs {
    /// Number of qubits (field degree).
    #[arg(short = 'n', long = "qubits")]
    n: usize,
    /// Primitive polynomial as a hex bitmask; defaults to a built-in one.
    #[arg(long, value_parser = parse_hex)]
    poly: Option<u64>,
}

#[derive(Args)]
struct FieldInfoArgs {
    #[command(flatten)]
    field: FieldArgs,
    /// Also list every self-dual basis (small n only).
    #[arg(long)]
    all_bases: bool,
    #[arg(long, value_enum, default_value_t = TextFormat::Text)]
    format: TextFormat,
}

#[derive(Args)]
struct GridArgs {
    #[command(flatten)]
    field: FieldArgs,
    /// State to evaluate: fiducial | z-up | cs:<a>,<b> | xor:<p>,<q>[;..]
    /// | squeeze:<z> | super:<spec>+<spec> | file:<path>.
    /// Field elements are written 0 or s<k> (powers of the primitive
    /// root).
    #[arg(long, default_value = "fiducial")]
    state: String,
    /// Fiducial angle in radians, |theta| < pi/2.
    #[arg(long, default_value_t = THETA_SYMMETRIC)]
    theta: f64,
    /// Axis ordering of the printed grid.
    #[arg(long, value_enum, default_value_t = OrderScheme::H)]
    order: OrderScheme,
    /// Shift both axes so the grid maximum sits on the zero-label cell
    /// (the center cell under --order symmetric).
    #[arg(long)]
    recenter: bool,
    #[arg(long, value_enum, default_value_t = GridFormat::Csv)]
    format: GridFormat,
    /// Write the grid here instead of stdout. Relative paths resolve
    /// under $DCS_OUTPUT_DIR when that is set.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(short = 'n', long = "qubits", default_value_t = 5)]
    n: usize,
    /// Run a single named check instead of the full suite.
    #[arg(long)]
    only: Option<String>,
    #[arg(long, default_value_t = 2024)]
    seed: u64,
    /// List the available check names and exit.
    #[arg(long)]
    list: bool,
}

#[derive(Copy, Clone, ValueEnum)]
enum TextFormat {
    Text,
    Json,
}

#[derive(Copy, Clone, ValueEnum)]
enum GridFormat {
    Csv,
    Json,
}

#[derive(Copy, Clone, ValueEnum)]
enum OrderScheme {
    /// Ascending h, ties broken by exponent.
    H,
    /// h-ascending folded so the h = 0 cell sits at the center.
    Symmetric,
}

fn parse_hex(s: &str) -> Result<u64, String> {
    let s = s.trim_start_matches("0x").trim_start_matches("0X");
    u64::from_str_radix(s, 16).map_err(|e| format!("bad hex polynomial: {e}"))
}

struct CmdError {
    code: u8,
    msg: String,
}

impl CmdError {
    fn domain(msg: impl Into<String>) -> Self {
        CmdError {
            code: EXIT_DOMAIN,
            msg: msg.into(),
        }
    }

    fn io(msg: impl Into<String>) -> Self {
        CmdError {
            code: EXIT_IO,
            msg: msg.into(),
        }
    }
}

macro_rules! impl_from_domain {
    ($($ty:ty),*) => {$(
        impl From<$ty> for CmdError {
            fn from(e: $ty) -> Self {
                CmdError::domain(e.to_string())
            }
        }
    )*};
}

impl_from_domain!(
    dcs::gf2n::FieldError,
    dcs::states::StateError,
    dcs::pauli::PauliError,
    dcs::ordering::OrderingError
);

impl From<QuasiError> for CmdError {
    fn from(e: QuasiError) -> Self {
        match e {
            QuasiError::SingularPFunction { .. } => {
                CmdError::domain(format!("P-function singular: {e}"))
            }
            other => CmdError::domain(other.to_string()),
        }
    }
}

fn build(args: &FieldArgs) -> Result<Arc<FieldSpec>, CmdError> {
    Ok(Arc::new(build_field(args.n, args.poly)?))
}

fn parse_element(field: &FieldSpec, s: &str) -> Result<FieldElement, CmdError> {
    Ok(field.parse_label(s.trim())?)
}

/// Builds a state from the `--state` mini-language.
fn parse_state(field: &Arc<FieldSpec>, spec: &str, theta: f64) -> Result<StateVector, CmdError> {
    let spec = spec.trim();
    if spec == "fiducial" {
        return Ok(states::fiducial(field, theta)?);
    }
    if spec == "z-up" {
        return Ok(StateVector::basis_state(
            Arc::clone(field),
            FieldElement::ZERO,
        ));
    }
    if let Some(rest) = spec.strip_prefix("cs:") {
        let (a, b) = rest
            .split_once(',')
            .ok_or_else(|| CmdError::domain(format!("cs: wants <alpha>,<beta>, got {rest:?}")))?;
        let point = PhasePoint::new(parse_element(field, a)?, parse_element(field, b)?);
        return Ok(states::coherent_state(field, point, theta)?);
    }
    if let Some(rest) = spec.strip_prefix("xor:") {
        let mut psi = states::fiducial(field, theta)?;
        for pair in rest.split(';') {
            let (p, q) = pair
                .split_once(',')
                .ok_or_else(|| CmdError::domain(format!("xor: wants <p>,<q> pairs, got {pair:?}")))?;
            let parse = |s: &str| {
                s.trim()
                    .parse::<usize>()
                    .map_err(|e| CmdError::domain(format!("bad qubit index {s:?}: {e}")))
            };
            psi = pauli::xor_gate(parse(p)?, parse(q)?, &psi)?;
        }
        return Ok(psi);
    }
    if let Some(rest) = spec.strip_prefix("squeeze:") {
        let zeta = parse_element(field, rest)?;
        let fid = states::fiducial(field, theta)?;
        return Ok(Operator::squeeze(zeta)?.apply(&fid)?);
    }
    if let Some(rest) = spec.strip_prefix("super:") {
        let (l, r) = rest
            .split_once('+')
            .ok_or_else(|| CmdError::domain(format!("super: wants <spec>+<spec>, got {rest:?}")))?;
        let a = parse_state(field, l, theta)?;
        let b = parse_state(field, r, theta)?;
        return Ok(a
            .add(&b)?
            .normalized()
            .map_err(|e| CmdError::domain(format!("superposition vanishes: {e}")))?);
    }
    if let Some(path) = spec.strip_prefix("file:") {
        let text = std::fs::read_to_string(path.trim())
            .map_err(|e| CmdError::io(format!("cannot read {path:?}: {e}")))?;
        let json: states::StateJson = serde_json::from_str(&text)
            .map_err(|e| CmdError::domain(format!("bad state file {path:?}: {e}")))?;
        return Ok(StateVector::from_json(Arc::clone(field), &json)?
            .normalized()
            .map_err(|e| CmdError::domain(format!("state file has zero norm: {e}")))?);
    }
    Err(CmdError::domain(format!(
        "unknown state spec {spec:?}; expected fiducial | z-up | cs:<a>,<b> | \
         xor:<p>,<q>[;..] | squeeze:<z> | super:<spec>+<spec> | file:<path>"
    )))
}

fn write_output(out: &Option<PathBuf>, text: &str) -> Result<(), CmdError> {
    match out {
        None => {
            print!("{text}");
            if !text.ends_with('\n') {
                println!();
            }
            Ok(())
        }
        Some(path) => {
            let path = match std::env::var_os("DCS_OUTPUT_DIR") {
                Some(dir) if path.is_relative() => PathBuf::from(dir).join(path),
                _ => path.clone(),
            };
            std::fs::write(&path, text)
                .map_err(|e| CmdError::io(format!("cannot write {}: {e}", path.display())))
        }
    }
}

fn axes_for(
    field: &Arc<FieldSpec>,
    scheme: OrderScheme,
    recenter_on: Option<(FieldElement, FieldElement)>,
) -> Result<(AxisOrder, AxisOrder), CmdError> {
    let base = ordering::order_axis(field, BaseScheme::HAscending);
    let base = match scheme {
        OrderScheme::H => base,
        OrderScheme::Symmetric => ordering::symmetrize(&base, field)?,
    };
    Ok(match recenter_on {
        None => (base.clone(), base),
        Some((ga, gb)) => (
            ordering::recenter(&base, field, ga),
            ordering::recenter(&base, field, gb),
        ),
    })
}

/// Location of the grid maximum, used as the recentering shift.
fn grid_argmax(
    field: &FieldSpec,
    value: &impl Fn(FieldElement, FieldElement) -> f64,
) -> (FieldElement, FieldElement) {
    let mut best = (FieldElement::ZERO, FieldElement::ZERO);
    let mut best_v = f64::NEG_INFINITY;
    for a in field.elements() {
        for b in field.elements() {
            let v = value(a, b);
            if v > best_v {
                best_v = v;
                best = (a, b);
            }
        }
    }
    best
}

fn render_grid(
    field: &Arc<FieldSpec>,
    value: impl Fn(FieldElement, FieldElement) -> f64,
    args: &GridArgs,
) -> Result<String, CmdError> {
    let shift = args.recenter.then(|| grid_argmax(field, &value));
    let (alpha_axis, beta_axis) = axes_for(field, args.order, shift)?;
    Ok(match args.format {
        GridFormat::Csv => quasidist::grid_csv(field, value, &alpha_axis, &beta_axis),
        GridFormat::Json => {
            let mut v = quasidist::grid_json(field, value, &alpha_axis, &beta_axis);
            v["ordering"]["shift"] = serde_json::json!([
                field.label(alpha_axis.shift()),
                field.label(beta_axis.shift()),
            ]);
            serde_json::to_string_pretty(&v).expect("grid serializes") + "\n"
        }
    })
}

fn cmd_field_info(args: &FieldInfoArgs) -> Result<(), CmdError> {
    let field = build(&args.field)?;
    match args.format {
        TextFormat::Json => {
            let mut v = serde_json::to_value(field.info()).expect("field info serializes");
            v["h_histogram"] = serde_json::json!(field.h_histogram());
            if args.all_bases {
                check_all_bases_size(&field)?;
                let bases: Vec<Vec<String>> = field
                    .all_self_dual_bases()
                    .iter()
                    .map(|b| b.iter().map(|&t| field.label(t)).collect())
                    .collect();
                v["all_self_dual_bases"] = serde_json::json!(bases);
            }
            println!("{}", serde_json::to_string_pretty(&v).expect("serializes"));
        }
        TextFormat::Text => {
            println!("n = {}", field.n());
            println!("polynomial = 0x{:X}", field.poly());
            let labels: Vec<String> = field
                .self_dual_basis()
                .iter()
                .map(|&t| field.label(t))
                .collect();
            println!("self-dual basis = {{{}}}", labels.join(", "));
            println!("h histogram = {:?}", field.h_histogram());
            if args.all_bases {
                check_all_bases_size(&field)?;
                let all = field.all_self_dual_bases();
                println!("self-dual bases ({} total):", all.len());
                for b in all {
                    let labels: Vec<String> = b.iter().map(|&t| field.label(t)).collect();
                    println!("  {{{}}}", labels.join(", "));
                }
            }
        }
    }
    Ok(())
}

fn check_all_bases_size(field: &FieldSpec) -> Result<(), CmdError> {
    if field.n() > 8 {
        return Err(CmdError::domain(format!(
            "--all-bases enumerates exhaustively and is capped at n <= 8, got n = {}",
            field.n()
        )));
    }
    Ok(())
}

fn cmd_qfunc(args: &GridArgs) -> Result<(), CmdError> {
    let field = build(&args.field)?;
    let psi = parse_state(&field, &args.state, args.theta)?;
    let q = quasidist::q_function(&psi, args.theta)?;
    let text = render_grid(&field, |a, b| q.value(a, b), args)?;
    write_output(&args.output, &text)?;
    println!("sum_Q={:.6} sum_Q2={:.6}", q.sum(), q.sum_squares());
    Ok(())
}

fn cmd_pfunc(args: &GridArgs) -> Result<(), CmdError> {
    let field = build(&args.field)?;
    let psi = parse_state(&field, &args.state, args.theta)?;
    let p = quasidist::p_function(&psi, args.theta)?;
    let text = render_grid(&field, |a, b| p.value(a, b), args)?;
    write_output(&args.output, &text)?;
    println!("sum_P={:.6} sum_P2={:.6}", p.sum(), p.sum_squares());
    Ok(())
}

fn cmd_verify(args: &VerifyArgs) -> Result<(), CmdError> {
    if args.list {
        for name in verify::CHECK_NAMES {
            println!("{name}");
        }
        return Ok(());
    }
    let outcomes =
        verify::run_checks(args.n, args.only.as_deref(), args.seed).map_err(CmdError::domain)?;
    let mut failures = 0usize;
    for o in &outcomes {
        match &o.result {
            Ok(()) => println!("PASS {}", o.name),
            Err(msg) => {
                failures += 1;
                println!("FAIL {}: {msg}", o.name);
            }
        }
    }
    if failures > 0 {
        return Err(CmdError::domain(format!(
            "{failures}/{} checks failed",
            outcomes.len()
        )));
    }
    println!("all {} checks passed (n = {})", outcomes.len(), args.n);
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::FieldInfo(a) => cmd_field_info(a),
        Command::Qfunc(a) => cmd_qfunc(a),
        Command::Pfunc(a) => cmd_pfunc(a),
        Command::Verify(a) => cmd_verify(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.msg);
            ExitCode::from(e.code)
        }
    }
}
