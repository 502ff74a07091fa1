//! The `tnn` command line.
//!
//! Row and column flags are 1-based; offset-set flags (`--A`, `--B`, steps)
//! are 0-based. Exit status is 0 on success, 1 when a checked property
//! fails and 2 on input or usage errors.

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use itertools::Itertools;

use crate::corpus;
use crate::lindstrom;
use crate::logconcavity::{self, RootSet, Sequence};
use crate::minors::{IndexSet, OffsetSet, PolyMatrix};
use crate::network::PlanarNetwork;
use crate::polynomial::{parse_rational, Rational};
use crate::Error;

#[derive(Debug, Parser)]
#[command(name = "tnn", version, about = "Exact minors and minor matrices of planar-network weight matrices")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check that a network file describes a planar network of order n.
    Validate { file: String },
    /// Print the weight matrix.
    WeightMatrix {
        file: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Print the (A,B)-minor matrix of the weight matrix.
    MinorMatrix(MinorMatrixArgs),
    /// Compare minors of the weight matrix with sums over vertex-disjoint path families.
    VerifyLindstrom(LindstromArgs),
    /// Reproduce a built-in counterexample.
    Counterexample {
        name: String,
        /// Show the network with one symbol per edge instead of unit weights.
        #[arg(long)]
        symbolic: bool,
    },
    /// Iterate the log-concavity step on a sequence.
    Logconcavity(LogconcavityArgs),
    /// Apply minor-matrix steps to a sequence network and sweep the result.
    Conjecture(ConjectureArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
}

#[derive(Debug, Args)]
pub struct MinorMatrixArgs {
    pub file: String,
    /// Row offsets, e.g. `0,3`.
    #[arg(long = "A")]
    pub a: String,
    /// Column offsets, e.g. `0,3`.
    #[arg(long = "B")]
    pub b: String,
    #[arg(long)]
    pub det: bool,
    #[arg(long = "check-2x2")]
    pub check_2x2: bool,
    #[arg(long = "check-all", value_name = "K")]
    pub check_all: Option<usize>,
}

#[derive(Debug, Args)]
pub struct LindstromArgs {
    pub file: String,
    #[arg(long, requires = "cols", conflicts_with = "all")]
    pub rows: Option<String>,
    #[arg(long, requires = "rows")]
    pub cols: Option<String>,
    #[arg(long, value_name = "K")]
    pub all: Option<usize>,
}

#[derive(Debug, Args)]
pub struct LogconcavityArgs {
    #[arg(long, conflicts_with = "seq", required_unless_present = "seq")]
    pub roots: Option<String>,
    #[arg(long)]
    pub seq: Option<String>,
    #[arg(long, default_value_t = 1)]
    pub iterations: usize,
}

#[derive(Debug, Args)]
pub struct ConjectureArgs {
    #[arg(long, conflicts_with = "columns", required_unless_present = "columns")]
    pub roots: Option<String>,
    #[arg(long)]
    pub columns: Option<usize>,
    #[arg(long)]
    pub order: usize,
    /// `L`, `L,L`, or `;`-separated `A:B` offset pairs such as `0,1:0,1;0,2:0,2`.
    #[arg(long, default_value = "L")]
    pub steps: String,
    #[arg(long = "max-order", default_value_t = 3)]
    pub max_order: usize,
}

enum Failure {
    Property(String),
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn input<T>(msg: impl Into<String>) -> Result<T, Failure> {
    Err(Failure::Input(msg.into()))
}

/// Parses arguments and runs one command, returning the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let mut buf = Vec::new();
    let result = dispatch(&cli.command, &mut buf);
    let _ = out.write_all(&buf);
    match result {
        Ok(()) => 0,
        Err(Failure::Property(msg)) => {
            let _ = writeln!(err, "{msg}");
            1
        }
        Err(Failure::Input(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
    }
}

/// Sizes the global thread pool from `TNN_THREADS` if set.
pub fn configure_threads() -> Result<(), String> {
    let Ok(value) = std::env::var("TNN_THREADS") else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("TNN_THREADS must be a positive integer, got {value:?}"))?;
    // A pool that is already initialised keeps its size.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

fn dispatch(cmd: &Command, out: &mut Vec<u8>) -> Outcome {
    match cmd {
        Command::Validate { file } => cmd_validate(file, out),
        Command::WeightMatrix { file, format: Format::Text } => {
            let net = load(file)?;
            write!(out, "{}", net.weight_matrix().map_err(Error::from)?)?;
            Ok(())
        }
        Command::MinorMatrix(args) => cmd_minor_matrix(args, out),
        Command::VerifyLindstrom(args) => cmd_verify_lindstrom(args, out),
        Command::Counterexample { name, symbolic } => cmd_counterexample(name, *symbolic, out),
        Command::Logconcavity(args) => cmd_logconcavity(args, out),
        Command::Conjecture(args) => cmd_conjecture(args, out),
    }
}

fn read_network(file: &str) -> Result<PlanarNetwork, Failure> {
    if let Some(name) = file.strip_prefix("builtin:") {
        return corpus::builtin(name).map_or_else(|| input(format!("unknown built-in network {name:?}")), Ok);
    }
    let text = std::fs::read_to_string(file).map_err(|e| Failure::Input(format!("{file}: {e}")))?;
    PlanarNetwork::parse(&text).map_err(|e| Failure::Input(format!("{file}: {e}")))
}

/// Reads and validates a network.
fn load(file: &str) -> Result<PlanarNetwork, Failure> {
    let net = read_network(file)?;
    let report = net.validate();
    if !report.is_ok() {
        return input(format!("{file}: invalid network\n{report}"));
    }
    Ok(net)
}

fn cmd_validate(file: &str, out: &mut Vec<u8>) -> Outcome {
    let net = read_network(file)?;
    let report = net.validate();
    write!(out, "{report}")?;
    if !report.is_ok() {
        return Err(Failure::Property(format!("{file}: {} violation(s)", report.violations.len())));
    }
    Ok(())
}

fn parse_usize_list(s: &str, what: &str) -> Result<Vec<usize>, Failure> {
    s.split(',')
        .map(|t| t.trim().parse::<usize>())
        .collect::<Result<_, _>>()
        .or_else(|_| input(format!("{what}: expected comma-separated integers, got {s:?}")))
}

fn parse_offsets(s: &str, what: &str) -> Result<OffsetSet, Failure> {
    OffsetSet::new(parse_usize_list(s, what)?).map_err(|e| Failure::Input(format!("{what}: {e}")))
}

fn parse_indices(s: &str, what: &str) -> Result<IndexSet, Failure> {
    IndexSet::new(parse_usize_list(s, what)?).map_err(|e| Failure::Input(format!("{what}: {e}")))
}

fn parse_rationals(s: &str, what: &str) -> Result<Vec<Rational>, Failure> {
    let trimmed = s.trim();
    if trimmed.is_empty() {
        return Ok(Vec::new());
    }
    trimmed
        .split(',')
        .map(|t| parse_rational(t).ok_or(()))
        .collect::<Result<_, _>>()
        .or_else(|_| input(format!("{what}: expected comma-separated rationals, got {s:?}")))
}

fn cmd_minor_matrix(args: &MinorMatrixArgs, out: &mut Vec<u8>) -> Outcome {
    let net = load(&args.file)?;
    let a = parse_offsets(&args.a, "--A")?;
    let b = parse_offsets(&args.b, "--B")?;
    let w = net.weight_matrix().map_err(Error::from)?;
    let t = w.minor_matrix(&a, &b).map_err(Error::from)?;
    write!(out, "{t}")?;
    if args.det {
        match t.determinant() {
            Ok(d) => writeln!(out, "det = {d}")?,
            Err(e) => return input(e.to_string()),
        }
    }
    let mut failed = Vec::new();
    if args.check_2x2 {
        let sweep = t.minor_violations(2);
        let bad: Vec<_> = sweep.failures.iter().filter(|f| f.rows.len() == 2).collect();
        if bad.is_empty() {
            writeln!(out, "2x2 minors: subtraction-free")?;
        } else {
            writeln!(out, "2x2 minors: {} not subtraction-free", bad.len())?;
            failed.extend(bad.iter().map(|f| format!("2x2 minor {f}")));
        }
    }
    if let Some(k) = args.check_all {
        let sweep = t.all_minors_subtraction_free(k);
        match sweep.first_failure() {
            None => writeln!(out, "minors up to order {k}: subtraction-free ({} checked)", sweep.checked)?,
            Some(f) => {
                writeln!(out, "minors up to order {k}: not subtraction-free")?;
                failed.push(format!("minor {f}"));
            }
        }
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Property(failed.join("\n")))
    }
}

fn cmd_verify_lindstrom(args: &LindstromArgs, out: &mut Vec<u8>) -> Outcome {
    let net = load(&args.file)?;
    let n = net.order();
    let pairs: Vec<(IndexSet, IndexSet)> = match (&args.rows, &args.cols, args.all) {
        (Some(r), Some(c), None) => vec![(parse_indices(r, "--rows")?, parse_indices(c, "--cols")?)],
        (None, None, Some(k)) => (0..=k.min(n))
            .flat_map(|size| {
                let rows: Vec<Vec<usize>> = (1..=n).combinations(size).collect();
                rows.into_iter()
                    .flat_map(move |r| (1..=n).combinations(size).map(move |c| (r.clone(), c)))
            })
            .map(|(r, c)| (IndexSet::new(r).unwrap(), IndexSet::new(c).unwrap()))
            .collect(),
        _ => return input("give either --rows and --cols, or --all"),
    };
    let mut failed = Vec::new();
    for (rows, cols) in &pairs {
        if !lindstrom::verify_lindstrom(&net, rows, cols)? {
            failed.push(format!("I={rows} J={cols}: minor differs from disjoint-family sum"));
        }
    }
    if pairs.len() == 1 {
        let (rows, cols) = &pairs[0];
        let sum = lindstrom::disjoint_sum(&net, rows, cols)?;
        writeln!(out, "I={rows} J={cols}: {sum}")?;
    }
    if failed.is_empty() {
        writeln!(out, "lindstrom: ok ({} pairs)", pairs.len())?;
        Ok(())
    } else {
        writeln!(out, "lindstrom: {} of {} pairs fail", failed.len(), pairs.len())?;
        Err(Failure::Property(failed.join("\n")))
    }
}

fn cmd_counterexample(name: &str, symbolic: bool, out: &mut Vec<u8>) -> Outcome {
    if name != "order6" {
        return input(format!("unknown counterexample {name:?} (known: order6)"));
    }
    let net = if symbolic {
        corpus::order6_symbolic()
    } else {
        corpus::order6_unit()
    };
    let offsets = OffsetSet::new(vec![0, 3]).unwrap();
    let w = net.weight_matrix().map_err(Error::from)?;
    let t = w.minor_matrix(&offsets, &offsets).map_err(Error::from)?;
    writeln!(
        out,
        "network {}: order {}, {} vertices, {} edges",
        if symbolic { "order6-symbolic" } else { "order6-unit" },
        net.order(),
        net.vertices().len(),
        net.edges().len()
    )?;
    writeln!(out, "W =")?;
    write!(out, "{w}")?;
    writeln!(out, "T = minor matrix for A = B = {offsets}")?;
    write!(out, "{t}")?;
    writeln!(out, "det T = {}", t.determinant().map_err(Error::from)?)?;

    let generic = corpus::order6_symbolic().weight_matrix().map_err(Error::from)?;
    let (scanned, exceptions) = order6_exceptions(&generic, 3, 3);
    writeln!(
        out,
        "symbolic weights: {scanned} minor matrices with |A| <= 3 scanned, minors up to order 3"
    )?;
    writeln!(out, "exceptions: {}", exceptions.len())?;
    for (a, b, f) in &exceptions {
        writeln!(out, "  A={a} B={b} {f}")?;
    }
    Ok(())
}

/// Every minor up to `max_order` of every (A,B)-minor matrix with
/// `|A| = |B| <= max_size` that is not subtraction-free.
pub fn order6_exceptions(
    w: &PolyMatrix,
    max_size: usize,
    max_order: usize,
) -> (usize, Vec<(OffsetSet, OffsetSet, crate::minors::MinorWitness)>) {
    let sets = OffsetSet::all_up_to(w.rows().min(w.cols()), max_size);
    let mut scanned = 0;
    let mut out = Vec::new();
    for a in &sets {
        for b in sets.iter().filter(|b| b.len() == a.len()) {
            let Ok(t) = w.minor_matrix(a, b) else { continue };
            scanned += 1;
            for f in t.minor_violations(max_order).failures {
                out.push((a.clone(), b.clone(), f));
            }
        }
    }
    (scanned, out)
}

fn cmd_logconcavity(args: &LogconcavityArgs, out: &mut Vec<u8>) -> Outcome {
    let seq = match (&args.roots, &args.seq) {
        (Some(r), None) => {
            let roots = RootSet::new(parse_rationals(r, "--roots")?)?;
            logconcavity::coeffs_from_roots(&roots)
        }
        (None, Some(s)) => {
            let values = parse_rationals(s, "--seq")?;
            if values.is_empty() {
                return input("--seq: empty sequence");
            }
            Sequence(values)
        }
        _ => return input("give exactly one of --roots or --seq"),
    };
    let report = logconcavity::is_infinitely_logconcave_upto(&seq, args.iterations);
    for (i, s) in report.sequences.iter().enumerate() {
        writeln!(out, "iteration {i}: {s}")?;
    }
    match report.failure {
        None => {
            writeln!(out, "nonnegative through {} iterations", args.iterations)?;
            Ok(())
        }
        Some((it, idx)) => Err(Failure::Property(format!(
            "negative entry at iteration {it}, index {idx}: {}",
            crate::polynomial::format_rational(&report.sequences[it].0[idx])
        ))),
    }
}

/// Parses `L`, `L,L`, or `A:B;A:B` into minor-matrix steps.
pub fn parse_steps(spec: &str) -> Result<Vec<(OffsetSet, OffsetSet)>, String> {
    let spec = spec.trim();
    if spec.is_empty() {
        return Ok(Vec::new());
    }
    let mut steps = Vec::new();
    for piece in spec.split(';').map(str::trim) {
        if piece.split(',').all(|t| t.trim() == "L") {
            steps.extend(piece.split(',').map(|_| logconcavity::l_step()));
            continue;
        }
        let (a, b) = piece
            .split_once(':')
            .ok_or_else(|| format!("step {piece:?}: expected `L` or `A:B`"))?;
        let parse = |s: &str| -> Result<OffsetSet, String> {
            let v: Vec<usize> = s
                .split(',')
                .map(|t| t.trim().parse::<usize>())
                .collect::<Result<_, _>>()
                .map_err(|_| format!("step {piece:?}: bad offset list {s:?}"))?;
            OffsetSet::new(v).map_err(|e| format!("step {piece:?}: {e}"))
        };
        let (a, b) = (parse(a)?, parse(b)?);
        if a.len() != b.len() {
            return Err(format!("step {piece:?}: offset sets differ in size"));
        }
        steps.push((a, b));
    }
    Ok(steps)
}

fn cmd_conjecture(args: &ConjectureArgs, out: &mut Vec<u8>) -> Outcome {
    if args.order == 0 {
        return input("--order must be at least 1");
    }
    let net = match (&args.roots, args.columns) {
        (Some(r), None) => {
            let roots = RootSet::new(parse_rationals(r, "--roots")?)?;
            logconcavity::sequence_network(&roots, args.order)?
        }
        (None, Some(m)) => logconcavity::symbolic_sequence_network(m, args.order),
        _ => return input("give exactly one of --roots or --columns"),
    };
    let steps = parse_steps(&args.steps).map_err(Failure::Input)?;
    let report = logconcavity::conjecture_check(&net, &steps, args.max_order)?;
    writeln!(
        out,
        "steps: {}",
        steps.iter().map(|(a, b)| format!("{a}:{b}")).join(" ")
    )?;
    writeln!(out, "matrix {}x{}:", report.matrix.rows(), report.matrix.cols())?;
    write!(out, "{}", report.matrix)?;
    match report.sweep.first_failure() {
        None => {
            writeln!(
                out,
                "minors up to order {}: subtraction-free ({} checked)",
                args.max_order, report.sweep.checked
            )?;
            Ok(())
        }
        Some(f) => {
            writeln!(out, "minors up to order {}: not subtraction-free", args.max_order)?;
            Err(Failure::Property(format!("minor {f}")))
        }
    }
}
