//! The `slco` command-line tool.
//!
//! Exit status: 0 on success (or equivalence), 1 on diagnostics or
//! non-equivalence, 2 on usage errors, 3 when a resource limit is hit.
//! Every failure writes one line `error: <category>: <message>` to
//! standard error.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::cs::{explore, ExploreError, ExploreLimits};
use crate::lts::{cs_to_lts, emit_aut, emit_dot, emit_lts_text, parse_lts_text, DotOptions, Lts};
use crate::reduce::{equivalent, hide_labels, reduce, HideSpec, Relation};
use crate::syntax::{parse_model, validate_model};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_LIMIT: i32 = 3;

const VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), " (lts format 1, cs format 1, aut, dot)");

#[derive(Debug, Parser)]
#[command(name = "slco", version = VERSION, about = "SLCO models to labeled transition systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a model and report diagnostics.
    Validate { model: PathBuf },
    /// Generate the state space of a model as an LTS.
    Explore {
        model: PathBuf,
        /// Also write the configurations and steps.
        #[arg(long, value_name = "FILE")]
        cs: Option<PathBuf>,
        #[arg(short, long, value_name = "FILE")]
        output: Option<PathBuf>,
        #[arg(long, default_value_t = 1, value_name = "N", value_parser = clap::value_parser!(u32).range(1..))]
        buffer_capacity: u32,
        #[arg(long, value_name = "N")]
        max_configs: Option<usize>,
    },
    /// Convert an LTS to Graphviz.
    Dot {
        input: PathBuf,
        #[arg(short, long, value_name = "FILE")]
        output: Option<PathBuf>,
    },
    /// Convert an LTS to the Aldebaran format.
    Aut {
        input: PathBuf,
        #[arg(short, long, value_name = "FILE")]
        output: Option<PathBuf>,
    },
    /// Hide labels and minimize modulo a bisimulation.
    Reduce {
        input: PathBuf,
        #[arg(long)]
        relation: Relation,
        #[command(flatten)]
        hiding: Hiding,
        #[arg(short, long, value_name = "FILE")]
        output: Option<PathBuf>,
    },
    /// Decide whether two LTSs are equivalent; exit 0 iff they are.
    Compare {
        left: PathBuf,
        right: PathBuf,
        #[arg(long)]
        relation: Relation,
        #[command(flatten)]
        hiding: Hiding,
    },
}

#[derive(Debug, Args)]
struct Hiding {
    /// Keep this label visible and hide all others (repeatable).
    #[arg(long, value_name = "LABEL", conflicts_with = "hide")]
    keep: Vec<String>,
    /// Hide this label (repeatable).
    #[arg(long, value_name = "LABEL")]
    hide: Vec<String>,
}

impl Hiding {
    fn spec(&self) -> Option<HideSpec> {
        if !self.keep.is_empty() {
            Some(HideSpec::keep(self.keep.iter().cloned()))
        } else if !self.hide.is_empty() {
            Some(HideSpec::hide(self.hide.iter().cloned()))
        } else {
            None
        }
    }

    fn apply(&self, l: Lts) -> Lts {
        match self.spec() {
            Some(spec) => hide_labels(&l, &spec),
            None => l,
        }
    }
}

struct Failure {
    code: i32,
    category: &'static str,
    message: String,
}

impl Failure {
    fn new(code: i32, category: &'static str, message: impl Into<String>) -> Self {
        Failure { code, category, message: message.into() }
    }
}

type Outcome = Result<i32, Failure>;

/// Runs the tool on `args` (including the program name) and returns the
/// exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{e}");
                return EXIT_OK;
            }
            let rendered = e.to_string();
            let mut lines = rendered.lines();
            let first = lines.next().unwrap_or_default();
            let _ = writeln!(stderr, "error: usage: {}", first.trim_start_matches("error: "));
            for line in lines {
                let _ = writeln!(stderr, "{line}");
            }
            return EXIT_USAGE;
        }
    };
    match execute(cli.command, stdout, stderr) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}: {}", f.category, f.message);
            f.code
        }
    }
}

fn execute(command: Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Outcome {
    match command {
        Command::Validate { model } => {
            let text = read(&model)?;
            let m = parse_model(&text).map_err(|d| {
                for diag in &d.0 {
                    let _ = writeln!(stderr, "{}:{diag}", model.display());
                }
                Failure::new(EXIT_FAILED, "parse", format!("{} could not be parsed", model.display()))
            })?;
            let diags = validate_model(&m);
            for diag in &diags {
                let _ = writeln!(stderr, "{}:{diag}", model.display());
            }
            let errors = diags.iter().filter(|d| d.is_error()).count();
            if errors > 0 {
                return Err(Failure::new(
                    EXIT_FAILED,
                    "diagnostics",
                    format!("{errors} error(s) in {}", model.display()),
                ));
            }
            Ok(EXIT_OK)
        }
        Command::Explore { model, cs, output, buffer_capacity, max_configs } => {
            let text = read(&model)?;
            let m = parse_model(&text).map_err(|d| diagnostics_failure(&model, "parse", &d.0, stderr))?;
            let limits = ExploreLimits { max_configurations: max_configs, buffer_capacity: buffer_capacity as usize };
            let graph = explore(&m, limits).map_err(|e| match e {
                ExploreError::InvalidModel(d) => diagnostics_failure(&model, "diagnostics", &d.0, stderr),
                e @ ExploreError::LimitExceeded { .. } => Failure::new(EXIT_LIMIT, "limit", e.to_string()),
                e => Failure::new(EXIT_FAILED, "evaluation", e.to_string()),
            })?;
            if let Some(path) = cs {
                write(Some(&path), &graph.to_cs_text(), stdout)?;
            }
            write(output.as_deref(), &emit_lts_text(&cs_to_lts(&graph)), stdout)?;
            Ok(EXIT_OK)
        }
        Command::Dot { input, output } => {
            let l = read_lts(&input)?;
            write(output.as_deref(), &emit_dot(&l, &DotOptions::default()), stdout)?;
            Ok(EXIT_OK)
        }
        Command::Aut { input, output } => {
            let l = read_lts(&input)?;
            let export = emit_aut(&l).map_err(|e| Failure::new(EXIT_FAILED, "format", e.to_string()))?;
            for w in &export.warnings {
                let _ = writeln!(stderr, "warning: {w}");
            }
            write(output.as_deref(), &export.text, stdout)?;
            Ok(EXIT_OK)
        }
        Command::Reduce { input, relation, hiding, output } => {
            let l = hiding.apply(read_lts(&input)?);
            let r = reduce(&l, relation).map_err(|e| Failure::new(EXIT_FAILED, "format", e.to_string()))?;
            write(output.as_deref(), &emit_lts_text(&r), stdout)?;
            Ok(EXIT_OK)
        }
        Command::Compare { left, right, relation, hiding } => {
            let a = hiding.apply(read_lts(&left)?);
            let b = hiding.apply(read_lts(&right)?);
            let fail = |e: crate::reduce::ReduceError| Failure::new(EXIT_FAILED, "format", e.to_string());
            let a = reduce(&a, relation).map_err(fail)?;
            let b = reduce(&b, relation).map_err(fail)?;
            if equivalent(&a, &b, relation).map_err(fail)? {
                let _ = writeln!(stdout, "equivalent ({relation} bisimulation)");
                Ok(EXIT_OK)
            } else {
                let _ = writeln!(stdout, "not equivalent ({relation} bisimulation)");
                Err(Failure::new(
                    EXIT_FAILED,
                    "not-equivalent",
                    format!("{} and {} are not {relation} bisimilar", left.display(), right.display()),
                ))
            }
        }
    }
}

fn diagnostics_failure(
    path: &Path,
    category: &'static str,
    diags: &[crate::syntax::Diagnostic],
    stderr: &mut dyn Write,
) -> Failure {
    for d in diags {
        let _ = writeln!(stderr, "{}:{d}", path.display());
    }
    Failure::new(EXIT_FAILED, category, format!("{} is not a valid model", path.display()))
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::new(EXIT_FAILED, "io", format!("{}: {e}", path.display())))
}

fn read_lts(path: &Path) -> Result<Lts, Failure> {
    let text = read(path)?;
    parse_lts_text(&text).map_err(|e| Failure::new(EXIT_FAILED, "parse", format!("{}: {e}", path.display())))
}

/// Writes `text` to `path`, or to `stdout` when no path is given.
fn write(path: Option<&Path>, text: &str, stdout: &mut dyn Write) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::new(EXIT_FAILED, "io", format!("{}: {e}", p.display()))),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| Failure::new(EXIT_FAILED, "io", format!("standard output: {e}"))),
    }
}
