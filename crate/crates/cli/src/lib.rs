//! Command-line front end: problem-file parsing, command dispatch and
//! deterministic text/JSON reports.
//!
//! Exit codes: `0` success or a positive answer, `2` a well-formed negative
//! answer, `1` an input error.

pub mod commands;
pub mod problem;

use std::ffi::OsString;
use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};

pub use commands::{CliError, Report};
pub use problem::{parse_problem, ParseError, ProblemFile};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_NEGATIVE: i32 = 2;

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Strict,
    Weak,
}

#[derive(Parser, Debug)]
#[command(name = "torquo", version, about = "Characteristic pairs of torus actions")]
pub struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value = "text")]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check that lambda is a characteristic function on the complex.
    Validate { file: String },
    /// List orbit strata by face.
    Strata { file: String },
    /// Isotropy lattice of one face.
    Isotropy {
        file: String,
        /// Facet indices, e.g. `0,2`.
        #[arg(long, allow_hyphen_values = true)]
        face: String,
    },
    /// Compare two model points, written `coords|face|tag`.
    PointEq {
        file: String,
        #[arg(long, allow_hyphen_values = true)]
        p: String,
        #[arg(long, allow_hyphen_values = true)]
        q: String,
    },
    /// Check a skeletal map and matrix for compatibility.
    MapCheck {
        src: String,
        dst: String,
        #[arg(long)]
        phi: String,
        /// Row-major matrix, e.g. `1,0;0,-1`; identity if omitted.
        #[arg(long, allow_hyphen_values = true)]
        sigma: Option<String>,
    },
    /// Sample the straight-line homotopy at a point, using the source reps.
    HomotopySample {
        src: String,
        dst: String,
        #[arg(long)]
        phi: String,
        #[arg(long, allow_hyphen_values = true)]
        sigma: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        p: String,
        /// Parameter values `p/q` in [0, 1]; defaults to 0, 1/2, 1.
        #[arg(long)]
        s: Vec<String>,
    },
    /// Decide equivalence of two pairs.
    Eq {
        a: String,
        b: String,
        #[arg(long, value_enum, default_value = "weak")]
        mode: ModeArg,
    },
    /// Enumerate characteristic functions on the file's complex.
    Enumerate {
        file: String,
        #[arg(long)]
        bound: u32,
        #[arg(long)]
        normalize: bool,
        /// Also split the output into equivalence classes.
        #[arg(long)]
        group: bool,
        #[arg(long, value_enum, default_value = "weak")]
        mode: ModeArg,
    },
    /// Print the invariant signature.
    Invariants { file: String },
}

/// Parses `args` (including the program name), runs the command and writes
/// the report to `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match commands::execute(&cli.command) {
        Ok(report) => {
            let body = match cli.format {
                Format::Text => report.text,
                Format::Json => {
                    let mut s = serde_json::to_string_pretty(&report.json).expect("json values serialize");
                    s.push('\n');
                    s
                }
            };
            if out.write_all(body.as_bytes()).is_err() {
                return EXIT_INPUT;
            }
            report.code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INPUT
        }
    }
}
