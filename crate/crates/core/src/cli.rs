//! The `circseriate` command-line front end.
//!
//! Exit codes: 0 success, 2 usage error, 3 unreadable or invalid input,
//! 4 input rejected as not (strict) circular Robinsonian.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::DissimilarityMatrix;
use crate::model::{
    build_matrix, kendall_tau, kendall_tau_dihedral, rate_experiment, sample_uniform,
    DissimilarityFamily,
};
use crate::permutation::Permutation;
use crate::qtree::{NodeStatus, QTree, DEFAULT_ENUMERATION_CAP};
use crate::robinson::{circular_row_violation, linear_row_violation};
use crate::seriation::recursive_seriation;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INVALID: i32 = 3;
pub const EXIT_NOT_ROBINSON: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "circseriate",
    version,
    about = "Strict circular seriation of dissimilarity matrices"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Recover every circular ordering that makes the matrix strict circular Robinson.
    Seriate {
        input: PathBuf,
        /// Largest number of tree orderings to enumerate for the summary.
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
        enumerate_max: usize,
        /// Round entries to this many decimals before validation.
        #[arg(long)]
        round: Option<u32>,
        /// Print run statistics as JSON on stderr.
        #[arg(long)]
        stats: bool,
        /// Destination of the tree and ordering; stdout when absent.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Test the matrix as given, without reordering.
    Check {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Circular)]
        mode: Mode,
        #[arg(long)]
        strict: bool,
        #[arg(long)]
        round: Option<u32>,
    },
    /// Sample points on the circle and write their dissimilarity matrix.
    Gen {
        #[arg(short, long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        /// `arc`, `chord`, `warped` or `warped:<c>`.
        #[arg(long, default_value = "arc")]
        family: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Relabel the objects at random and record a solving ordering.
        #[arg(long)]
        permute: bool,
        #[arg(short, long)]
        output: PathBuf,
        /// Where the solving ordering goes; defaults to `<output>.perm`.
        #[arg(long)]
        truth: Option<PathBuf>,
    },
    /// Mean Kendall-tau diameter of the solution set across sample sizes.
    Rate {
        #[arg(long, value_delimiter = ',', required = true, value_parser = clap::value_parser!(u64).range(2..))]
        ns: Vec<u64>,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        #[arg(long, default_value = "arc")]
        family: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Kendall-tau distance between two permutation files.
    Kendall {
        p1: PathBuf,
        p2: PathBuf,
        /// Minimise over rotations and reflections of the first ordering.
        #[arg(long)]
        quotient: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Circular,
    Linear,
}

/// Serialized form of a [`QTree`]: leaves are bare integers, nodes are
/// objects. `orientable` marks nodes whose children may still be reversed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TreeDocument {
    Leaf(usize),
    Node {
        orientable: bool,
        #[serde(default, skip_serializing_if = "std::ops::Not::not")]
        free: bool,
        children: Vec<TreeDocument>,
    },
}

impl TreeDocument {
    pub fn from_tree(t: &QTree) -> Self {
        match t {
            QTree::Leaf(x) => TreeDocument::Leaf(*x),
            QTree::Node { children, status } => TreeDocument::Node {
                orientable: *status == NodeStatus::NonOrientable,
                free: *status == NodeStatus::Free,
                children: children.iter().map(Self::from_tree).collect(),
            },
        }
    }

    pub fn to_tree(&self) -> Result<QTree> {
        let t = self.to_tree_unchecked()?;
        t.validate()?;
        Ok(t)
    }

    fn to_tree_unchecked(&self) -> Result<QTree> {
        Ok(match self {
            TreeDocument::Leaf(x) => QTree::Leaf(*x),
            TreeDocument::Node {
                orientable,
                free,
                children,
            } => {
                let status = match (orientable, free) {
                    (true, true) => {
                        return Err(Error::InvalidTree("node both free and orientable".into()))
                    }
                    (true, false) => NodeStatus::NonOrientable,
                    (false, true) => NodeStatus::Free,
                    (false, false) => NodeStatus::Fixed,
                };
                QTree::Node {
                    children: children
                        .iter()
                        .map(Self::to_tree_unchecked)
                        .collect::<Result<_>>()?,
                    status,
                }
            }
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("tree documents serialize")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::InvalidTree(e.to_string()))
    }
}

/// Parses `n` lines of `n` numbers separated by commas and/or whitespace.
/// Blank lines and lines starting with `#` are skipped.
pub fn parse_matrix(text: &str, round: Option<u32>) -> Result<DissimilarityMatrix> {
    let scale = round.map(|d| 10f64.powi(d as i32));
    let mut rows = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let row = line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|tok| !tok.is_empty())
            .map(|tok| {
                let v: f64 = tok.parse().map_err(|_| {
                    Error::InvalidParameter(format!("line {}: cannot parse `{tok}`", lineno + 1))
                })?;
                Ok(match scale {
                    Some(s) => (v * s).round() / s,
                    None => v,
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    DissimilarityMatrix::from_rows(&rows)
}

/// One row per line, entries separated by a comma, printed so that they
/// parse back to the same values.
pub fn format_matrix(d: &DissimilarityMatrix) -> String {
    let mut out = String::new();
    for i in 0..d.n() {
        let row: Vec<String> = d.row(i).iter().map(f64::to_string).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub fn parse_permutation(text: &str) -> Result<Permutation> {
    let v = text
        .split_whitespace()
        .map(|tok| {
            tok.parse::<usize>()
                .map_err(|_| Error::InvalidParameter(format!("cannot parse index `{tok}`")))
        })
        .collect::<Result<Vec<_>>>()?;
    Permutation::new(v)
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NotStrictPreCircularRobinson(_) => EXIT_NOT_ROBINSON,
        _ => EXIT_INVALID,
    }
}

enum Failure {
    Lib(Error),
    Io(PathBuf, std::io::Error),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn read(path: &Path) -> std::result::Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(path.to_path_buf(), e))
}

fn write_file(path: &Path, text: &str) -> std::result::Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Io(path.to_path_buf(), e))
}

fn family(name: &str) -> std::result::Result<DissimilarityFamily, Failure> {
    name.parse()
        .map_err(|_| Failure::Usage(format!("unknown family `{name}`")))
}

/// Parses `args` (program name first) and runs the command, returning the
/// process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = if code == 0 {
                write!(out, "{}", e.render())
            } else {
                write!(err, "{}", e.render())
            };
            return code;
        }
    };
    match execute(cli.command, out, err) {
        Ok(code) => code,
        Err(Failure::Lib(e)) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
        Err(Failure::Io(path, e)) => {
            let _ = writeln!(err, "error: {}: {e}", path.display());
            EXIT_INVALID
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
    }
}

fn execute(
    cmd: Command,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> std::result::Result<i32, Failure> {
    let io = |e: std::io::Error| Failure::Io(PathBuf::from("<stdout>"), e);
    match cmd {
        Command::Seriate {
            input,
            enumerate_max,
            round,
            stats,
            output,
        } => {
            let d = parse_matrix(&read(&input)?, round)?;
            let result = recursive_seriation(&d)?;
            let doc = TreeDocument::from_tree(&result.tree);
            let text = format!("{}\n{}\n", doc.to_json(), result.representative());
            match output {
                Some(path) => write_file(&path, &text)?,
                None => out.write_all(text.as_bytes()).map_err(io)?,
            }
            if stats {
                let e = result.enumerate(enumerate_max)?;
                let summary = serde_json::json!({
                    "n": result.stats.n,
                    "accesses": result.stats.accesses,
                    "verification_accesses": result.stats.verification_accesses,
                    "levels": result.stats.levels.iter().map(|l| serde_json::json!({
                        "trees": l.trees,
                        "components": l.components,
                        "accesses": l.accesses,
                        "max_border": l.max_border,
                    })).collect::<Vec<_>>(),
                    "orderings": e.orderings.len(),
                    "overflow": e.overflow,
                });
                writeln!(err, "{summary}").map_err(io)?;
            }
            Ok(EXIT_OK)
        }
        Command::Check {
            input,
            mode,
            strict,
            round,
        } => {
            let d = parse_matrix(&read(&input)?, round)?;
            let mut ok = true;
            for i in 0..d.n() {
                let v = match mode {
                    Mode::Circular => circular_row_violation(&d, i, strict),
                    Mode::Linear => linear_row_violation(&d, i, strict),
                };
                if let Some(j) = v {
                    ok = false;
                    writeln!(out, "row {i}: violation at {j}").map_err(io)?;
                }
            }
            Ok(if ok { EXIT_OK } else { EXIT_NOT_ROBINSON })
        }
        Command::Gen {
            n,
            family: name,
            seed,
            permute,
            output,
            truth,
        } => {
            let fam = family(&name)?;
            let sample = sample_uniform(n as usize, seed)?;
            let (d, order) = build_matrix(&sample, &fam)?;
            let sorted = d.conjugate(&order)?;
            if permute {
                let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_5eed_5eed_5eed);
                let mut p: Vec<usize> = (0..n as usize).collect();
                p.shuffle(&mut rng);
                let p = Permutation::new(p)?;
                write_file(&output, &format_matrix(&sorted.conjugate(&p)?))?;
                let truth = truth.unwrap_or_else(|| {
                    let mut s = output.clone().into_os_string();
                    s.push(".perm");
                    PathBuf::from(s)
                });
                write_file(&truth, &format!("{}\n", p.inverse()))?;
            } else {
                write_file(&output, &format_matrix(&sorted))?;
            }
            Ok(EXIT_OK)
        }
        Command::Rate {
            ns,
            trials,
            family: name,
            seed,
            output,
        } => {
            let fam = family(&name)?;
            let ns: Vec<usize> = ns.into_iter().map(|n| n as usize).collect();
            let table = rate_experiment(&ns, trials as usize, &fam, seed)?;
            write_file(&output, &table.to_csv())?;
            for row in table.rows.iter().filter(|r| r.skipped > 0) {
                writeln!(err, "n = {}: {} trials skipped", row.n, row.skipped).map_err(io)?;
            }
            Ok(EXIT_OK)
        }
        Command::Kendall { p1, p2, quotient } => {
            let a = parse_permutation(&read(&p1)?)?;
            let b = parse_permutation(&read(&p2)?)?;
            let tau = if quotient {
                kendall_tau_dihedral(&a, &b)?
            } else {
                kendall_tau(&a, &b)?
            };
            writeln!(out, "{tau}").map_err(io)?;
            Ok(EXIT_OK)
        }
    }
}
