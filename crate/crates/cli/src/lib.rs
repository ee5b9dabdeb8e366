//! Command-line front end: argument grammar, dispatch and exit codes.
//!
//! Exit codes: 0 on success, 1 for usage or validation errors, 2 when a
//! computation establishes an inconsistency.

mod commands;
pub mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use framed_betti::mv::{MaxRankSplit, Reading, Split};
use framed_betti::{Error, Field, MapRef};

pub use output::{Cell, Document, Format, Section};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INCONSISTENT: i32 = 2;

const MAX_GENUS: u32 = 500;

#[derive(Debug, Parser)]
#[command(name = "framed-betti", version, about = "Betti numbers of framed SU(2) moduli spaces")]
pub struct Cli {
    #[arg(long, value_enum, default_value_t, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FieldArg {
    Q,
    F2,
}

impl From<FieldArg> for Field {
    fn from(f: FieldArg) -> Self {
        match f {
            FieldArg::Q => Field::Q,
            FieldArg::F2 => Field::F2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReadingArg {
    Corrected,
    Literal,
}

impl From<ReadingArg> for Reading {
    fn from(r: ReadingArg) -> Self {
        match r {
            ReadingArg::Corrected => Reading::Corrected,
            ReadingArg::Literal => Reading::Literal,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MaxRankArg {
    HalfOfBase,
    Middle,
}

impl From<MaxRankArg> for MaxRankSplit {
    fn from(m: MaxRankArg) -> Self {
        match m {
            MaxRankArg::HalfOfBase => MaxRankSplit::HalfOfBase,
            MaxRankArg::Middle => MaxRankSplit::Middle,
        }
    }
}

fn genus() -> clap::builder::RangedI64ValueParser<u32> {
    clap::value_parser!(u32).range(1..=MAX_GENUS as i64)
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Betti numbers of the framed space of one genus.
    Betti {
        #[arg(long, value_parser = genus())]
        genus: u32,
        #[arg(long, value_enum, default_value = "f2")]
        field: FieldArg,
    },
    /// Lower-half columns for every genus up to a bound, in both fields.
    Tables {
        #[arg(long, value_parser = genus())]
        max_genus: u32,
        /// Print every degree instead of the lower half.
        #[arg(long)]
        full: bool,
        /// Restrict to one field.
        #[arg(long, value_enum)]
        field: Option<FieldArg>,
    },
    /// Betti numbers of the plus piece and of the pair (plus piece, boundary).
    Nplus {
        #[arg(long, value_parser = genus())]
        genus: u32,
    },
    /// Ranks of the boundary inclusion maps, with the side constraints.
    Profiles {
        #[arg(long, value_parser = genus())]
        genus: u32,
    },
    /// Framed Betti numbers from the cup-product action of the degree-2 class.
    Serre {
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..=2), required_unless_present = "ring_file", conflicts_with = "ring_file")]
        genus: Option<u32>,
        /// JSON ring profile: {"genus", "dims", "alpha_ranks" or "alpha_matrices"}.
        #[arg(long, value_name = "PATH")]
        ring_file: Option<PathBuf>,
    },
    /// Realizes the connecting maps of a decomposition with seeded witnesses.
    Mv {
        #[arg(long)]
        split: Split,
        /// A single degree; every degree (and the glued table) when omitted.
        #[arg(long)]
        degree: Option<i64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of consecutive seeds to realize.
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..=10_000))]
        samples: u64,
        /// Fill unknown ranks for genus 3 and up with a maximal-rank hypothesis.
        #[arg(long, value_enum)]
        max_rank: Option<MaxRankArg>,
        /// Include the summands and edges of the diagram (needs --degree).
        #[arg(long, requires = "degree")]
        dump: bool,
    },
    /// Deduces unknown ranks from the Betti numbers of the glued space.
    Infer {
        #[arg(long)]
        split: Split,
        /// Unknown map as KIND.GENUS.DEGREE, e.g. nu.2.9; repeatable.
        #[arg(long = "unknown", value_name = "MAP", value_delimiter = ',')]
        unknowns: Vec<MapRef>,
        #[arg(long, value_enum, default_value = "corrected")]
        reading: ReadingArg,
        #[arg(long, value_enum)]
        max_rank: Option<MaxRankArg>,
        /// Only these target degrees must match.
        #[arg(long, value_delimiter = ',')]
        degrees: Option<Vec<i64>>,
        /// Cap on barcodes enumerated per genus.
        #[arg(long, default_value_t = 4096)]
        limit: usize,
    },
    /// Runs the invariant suite and the comparison with reference tables.
    Verify {
        #[arg(long, value_parser = genus())]
        max_genus: u32,
    },
}

/// A rendered document together with its exit status.
pub struct Outcome {
    pub document: Document,
    pub code: i32,
}

impl Outcome {
    fn ok(document: Document) -> Self {
        Self { document, code: EXIT_OK }
    }
}

pub fn execute(cli: &Cli) -> Result<Outcome, Error> {
    match &cli.command {
        Command::Betti { genus, field } => commands::betti(*genus, (*field).into()).map(Outcome::ok),
        Command::Tables { max_genus, full, field } => {
            Ok(Outcome::ok(commands::tables(*max_genus, *full, field.map(Into::into))))
        }
        Command::Nplus { genus } => commands::nplus(*genus).map(Outcome::ok),
        Command::Profiles { genus } => commands::profiles(*genus).map(Outcome::ok),
        Command::Serre { genus, ring_file } => {
            commands::serre(*genus, ring_file.as_deref())
        }
        Command::Mv {
            split,
            degree,
            seed,
            samples,
            max_rank,
            dump,
        } => commands::mv(&commands::MvArgs {
            split: *split,
            degree: *degree,
            seed: *seed,
            samples: *samples,
            max_rank: max_rank.map(Into::into),
            dump: *dump,
        }),
        Command::Infer {
            split,
            unknowns,
            reading,
            max_rank,
            degrees,
            limit,
        } => commands::infer(&commands::InferArgs {
            split: *split,
            unknowns: unknowns.clone(),
            reading: (*reading).into(),
            max_rank: max_rank.map(Into::into),
            degrees: degrees.clone(),
            limit: *limit,
        }),
        Command::Verify { max_genus } => Ok(commands::verify(*max_genus)),
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Consistency(_) | Error::Infeasible(_) => EXIT_INCONSISTENT,
        _ => EXIT_USAGE,
    }
}

/// Parses `args` (program name first), runs the command and writes the
/// rendered document to `out` and any error to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };
    match execute(&cli) {
        Ok(o) => {
            let _ = out.write_all(o.document.render(cli.format).as_bytes());
            o.code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}
