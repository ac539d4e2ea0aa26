//! Batch command-line front end for polynomial matrix normal forms: parse
//! matrix files, run the form computations, verify predicates, generate
//! instances.
//!
//! Exit codes: `0` success (or a true predicate), `1` a false predicate or a
//! Las Vegas failure after retries, `2` malformed input, `3` internal
//! verification failure.

pub mod format;

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use polmat::bases::{approximant_basis_owp, minimal_kernel_basis, weak_popov_reduce, OrderTuple};
use polmat::forms::{self, Strategy};
use polmat::testkit;
use polmat::{Error, PolyMatrix, PrimeField, Shift};

pub use format::{parse_matrix_file, serialize_matrix, ParseError};

#[derive(Parser)]
#[command(
    name = "polmat",
    version,
    about = "Canonical forms of matrices over F_p[x]"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
enum StrategyArg {
    #[default]
    Auto,
    Completion,
    SupportPipeline,
}

impl From<StrategyArg> for Strategy {
    fn from(value: StrategyArg) -> Strategy {
        match value {
            StrategyArg::Auto => Strategy::Auto,
            StrategyArg::Completion => Strategy::Completion,
            StrategyArg::SupportPipeline => Strategy::SupportPipeline,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormArg {
    Reduced,
    WeakPopov,
    OrderedWeakPopov,
    Popov,
    Hermite,
}

impl FormArg {
    fn name(self) -> &'static str {
        match self {
            FormArg::Reduced => "reduced",
            FormArg::WeakPopov => "weak-popov",
            FormArg::OrderedWeakPopov => "ordered-weak-popov",
            FormArg::Popov => "popov",
            FormArg::Hermite => "hermite",
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Compute the (shifted) Popov form.
    Popov {
        file: PathBuf,
        /// Column shift, comma-separated integers; overrides the file shift.
        #[arg(long)]
        shift: Option<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t)]
        strategy: StrategyArg,
        /// Seed for the Las Vegas completion strategy.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Compute the Hermite form.
    Hermite {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Print the 1-based pivot support of the (shifted) Popov form.
    PivotSupport {
        file: PathBuf,
        #[arg(long)]
        shift: Option<String>,
    },
    /// Compute a column reduced right kernel basis.
    Kernel {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Compute an ordered weak Popov approximant basis at the given order.
    Approx {
        file: PathBuf,
        /// Approximation orders, comma-separated, one per column.
        #[arg(long)]
        order: String,
        /// Row shift (one entry per input row); overrides the file shift.
        #[arg(long)]
        shift: Option<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Weak Popov reduction (zero rows compacted to the bottom).
    Reduce {
        file: PathBuf,
        #[arg(long)]
        shift: Option<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check a form predicate; exits 0 when it holds, 1 when it does not.
    Check {
        file: PathBuf,
        #[arg(long, value_enum)]
        form: FormArg,
        #[arg(long)]
        shift: Option<String>,
    },
    /// Generate a uniform random matrix file.
    Rand {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        rows: usize,
        #[arg(long)]
        cols: usize,
        #[arg(long)]
        deg: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

/// Run the CLI on the given argument list and return the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version are not errors.
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            failure.code
        }
    }
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Failure {
        Failure {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match e {
            Error::InternalCheck(_)
            | Error::PivotSupportIncorrect
            | Error::NotLeftMultiple
            | Error::ConstantTermSingular => 3,
            Error::CompletionExhausted(_) => 1,
            _ => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Failure {
        Failure::input(e.to_string())
    }
}

fn read_input(path: &Path) -> Result<(PolyMatrix, Option<Shift>), Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))?;
    Ok(parse_matrix_file(&text)?)
}

fn parse_shift_flag(flag: &str) -> Result<Shift, Failure> {
    // Same bound as the file parser, for the same bookkeeping headroom.
    const SHIFT_LIMIT: i64 = 1 << 40;
    let trimmed = flag.trim();
    if trimmed.is_empty() {
        return Ok(Shift::new(Vec::new()));
    }
    let values = trimmed
        .split(',')
        .map(|t| {
            let v: i64 = t
                .trim()
                .parse()
                .map_err(|_| Failure::input(format!("bad shift entry `{}`", t.trim())))?;
            if v.abs() > SHIFT_LIMIT {
                return Err(Failure::input(format!("shift entry {v} out of range")));
            }
            Ok(v)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Shift::new(values))
}

/// The effective shift: flag wins over the file, default is zero. The
/// expected length depends on the subcommand (columns for forms, rows for
/// approximant bases).
fn effective_shift(
    flag: Option<&str>,
    file_shift: Option<Shift>,
    expected: usize,
) -> Result<(Shift, bool), Failure> {
    let (shift, explicit) = match (flag, file_shift) {
        (Some(flag), _) => (parse_shift_flag(flag)?, true),
        (None, Some(s)) => (s, true),
        (None, None) => (Shift::zero(expected), false),
    };
    if shift.len() != expected {
        return Err(Failure::input(format!(
            "shift has {} entries, expected {expected}",
            shift.len()
        )));
    }
    Ok((shift, explicit))
}

fn write_output(text: &str, output: Option<&Path>) -> Result<(), Failure> {
    match output {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::input(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn dispatch(command: Command) -> Result<i32, Failure> {
    match command {
        Command::Popov {
            file,
            shift,
            output,
            strategy,
            seed,
        } => {
            let (matrix, file_shift) = read_input(&file)?;
            let (s, explicit) = effective_shift(shift.as_deref(), file_shift, matrix.cols())?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let result = forms::popov_form_seeded(&matrix, &s, strategy.into(), &mut rng)?;
            let carried = explicit.then_some(&s);
            write_output(&serialize_matrix(&result.popov, carried), output.as_deref())?;
            Ok(0)
        }
        Command::Hermite { file, output } => {
            let (matrix, _) = read_input(&file)?;
            let result = forms::hermite_form(&matrix)?;
            write_output(&serialize_matrix(&result.popov, None), output.as_deref())?;
            Ok(0)
        }
        Command::PivotSupport { file, shift } => {
            let (matrix, file_shift) = read_input(&file)?;
            let (s, _) = effective_shift(shift.as_deref(), file_shift, matrix.cols())?;
            let support = forms::pivot_support(&matrix, &s)?;
            let one_based: Vec<String> = support.iter().map(|j| (j + 1).to_string()).collect();
            println!("{}", one_based.join(" "));
            Ok(0)
        }
        Command::Kernel { file, output } => {
            let (matrix, _) = read_input(&file)?;
            let kernel = minimal_kernel_basis(&matrix)?;
            write_output(&serialize_matrix(&kernel, None), output.as_deref())?;
            Ok(0)
        }
        Command::Approx {
            file,
            order,
            shift,
            output,
        } => {
            let (matrix, file_shift) = read_input(&file)?;
            let orders = order
                .split(',')
                .map(|t| {
                    t.trim()
                        .parse::<usize>()
                        .map_err(|_| Failure::input(format!("bad order entry `{}`", t.trim())))
                })
                .collect::<Result<Vec<_>, _>>()?;
            let sigma = OrderTuple::new(orders)?;
            // The shift applies to approximant rows, so its length is the
            // row count; a file shift only fits when the input is square.
            let (s, explicit) = effective_shift(shift.as_deref(), file_shift, matrix.rows())?;
            let basis = approximant_basis_owp(&matrix, &sigma, &s)?;
            let carried = explicit.then_some(&s);
            write_output(&serialize_matrix(&basis, carried), output.as_deref())?;
            Ok(0)
        }
        Command::Reduce {
            file,
            shift,
            output,
        } => {
            let (matrix, file_shift) = read_input(&file)?;
            let (s, explicit) = effective_shift(shift.as_deref(), file_shift, matrix.cols())?;
            let (reduced, _) = weak_popov_reduce(&matrix, &s, false)?;
            let carried = explicit.then_some(&s);
            write_output(&serialize_matrix(&reduced, carried), output.as_deref())?;
            Ok(0)
        }
        Command::Check { file, form, shift } => {
            let (matrix, file_shift) = read_input(&file)?;
            let (s, _) = effective_shift(shift.as_deref(), file_shift, matrix.cols())?;
            let holds = match form {
                FormArg::Reduced => matrix.is_reduced(&s),
                FormArg::WeakPopov => matrix.is_weak_popov(&s),
                FormArg::OrderedWeakPopov => matrix.is_ordered_weak_popov(&s),
                FormArg::Popov => matrix.is_popov(&s),
                FormArg::Hermite => matrix.is_hermite(),
            };
            println!("{}: {}", form.name(), holds);
            Ok(if holds { 0 } else { 1 })
        }
        Command::Rand {
            p,
            rows,
            cols,
            deg,
            seed,
            output,
        } => {
            let field = PrimeField::new(p)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let matrix = testkit::random_matrix(field, rows, cols, deg, &mut rng);
            write_output(&serialize_matrix(&matrix, None), output.as_deref())?;
            Ok(0)
        }
    }
}
