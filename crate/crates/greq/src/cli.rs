//! The `greq` command.
//!
//! Exit codes: 0 when the model has no error-severity finding, 1 when it
//! has some (or only warnings under `check --strict`), 2 on usage, IO or
//! parse failures.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use greq_core::{
    compute_metrics, emit_app_model, emit_document, emit_mindmap, format_errors, parse_source,
    render_metrics_text, run_diagnostics, MapFilter, MapFormat, Model,
};

use crate::interchange::{canonical_deserialize, canonical_serialize};
use crate::to_json;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FINDINGS: i32 = 1;
pub const EXIT_FAILURE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "greq",
    version,
    about = "Goal-oriented requirements models: check, document, export"
)]
struct Args {
    /// Print only diagnostics and errors.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse the model and run the diagnostic rules.
    Check {
        file: PathBuf,
        /// Fail on warnings too.
        #[arg(long)]
        strict: bool,
    },
    /// Write the Markdown requirements document.
    Doc {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Write a concept map.
    Mindmap {
        file: PathBuf,
        #[arg(long, value_enum)]
        format: Format,
        /// Show only part of the model.
        #[arg(long, value_enum, conflicts_with = "agent")]
        focus: Option<Focus>,
        /// Show only the goals this agent is responsible for.
        #[arg(long)]
        agent: Option<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Write the WebML-style application model as JSON.
    Appmodel {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Print counts, coverage and risk per agent.
    Metrics {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Write the canonical `.greq.json` interchange form.
    Export {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Dot,
    Freemind,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Focus {
    Concepts,
}

/// Outcome of a command that did not fail outright.
struct Done {
    code: i32,
}

/// Failure already reported on the error stream.
struct Failed;

struct Io<'a> {
    stdout: &'a mut dyn Write,
    stderr: &'a mut dyn Write,
    quiet: bool,
}

impl Io<'_> {
    fn error(&mut self, message: impl std::fmt::Display) -> Failed {
        let _ = writeln!(self.stderr, "error: {message}");
        Failed
    }

    fn note(&mut self, message: impl std::fmt::Display) {
        if !self.quiet {
            let _ = writeln!(self.stderr, "{message}");
        }
    }

    fn emit(&mut self, text: &str, output: Option<&Path>) -> Result<Done, Failed> {
        match output {
            None => self
                .stdout
                .write_all(text.as_bytes())
                .map_err(|e| self.error(format_args!("cannot write output: {e}")))?,
            Some(path) => {
                std::fs::write(path, text).map_err(|e| {
                    self.error(format_args!("cannot write {}: {e}", path.display()))
                })?;
                self.note(format_args!("wrote {}", path.display()));
            }
        }
        Ok(Done { code: EXIT_OK })
    }

    /// Reads a `.greq` source, or a `.json` interchange document.
    fn load(&mut self, path: &Path) -> Result<Model, Failed> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| self.error(format_args!("cannot read {}: {e}", path.display())))?;
        let name = path
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.display().to_string());
        if path.extension().is_some_and(|e| e == "json") {
            return canonical_deserialize(&text)
                .map_err(|e| self.error(format_args!("{name}: {e}")));
        }
        parse_source(&text, &name).map_err(|errors| {
            let _ = self
                .stderr
                .write_all(format_errors(&errors, &text).as_bytes());
            let _ = writeln!(
                self.stderr,
                "error: {name}: {} parse error(s)",
                errors.len()
            );
            Failed
        })
    }
}

/// Runs the command line `argv` (program name first) and returns the exit code.
pub fn run_cli<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(args) => args,
        Err(e) => {
            let code = if e.use_stderr() {
                let _ = write!(stderr, "{}", e.render());
                EXIT_FAILURE
            } else {
                let _ = write!(stdout, "{}", e.render());
                EXIT_OK
            };
            return code;
        }
    };
    let mut io = Io {
        stdout,
        stderr,
        quiet: args.quiet,
    };
    match run(args.command, &mut io) {
        Ok(done) => done.code,
        Err(Failed) => EXIT_FAILURE,
    }
}

fn run(command: Command, io: &mut Io<'_>) -> Result<Done, Failed> {
    match command {
        Command::Check { file, strict } => {
            let model = io.load(&file)?;
            let report = run_diagnostics(&model);
            let _ = io.stderr.write_all(report.render_text().as_bytes());
            let (errors, warnings) = (report.errors().count(), report.warnings().count());
            if report.is_clean() {
                io.note(format_args!("{}: no findings", model.source_name));
            } else {
                io.note(format_args!(
                    "{}: {errors} error(s), {warnings} warning(s)",
                    model.source_name
                ));
            }
            let failed = errors > 0 || (strict && warnings > 0);
            Ok(Done {
                code: if failed { EXIT_FINDINGS } else { EXIT_OK },
            })
        }
        Command::Doc { file, output } => {
            let model = io.load(&file)?;
            let report = run_diagnostics(&model);
            io.emit(&emit_document(&model, &report), output.as_deref())
        }
        Command::Mindmap {
            file,
            format,
            focus,
            agent,
            output,
        } => {
            let model = io.load(&file)?;
            let filter = match (focus, agent) {
                (_, Some(agent)) => MapFilter::GoalsOfAgent(agent),
                (Some(Focus::Concepts), None) => MapFilter::ConceptsOnly,
                (None, None) => MapFilter::Full,
            };
            let format = match format {
                Format::Dot => MapFormat::Dot,
                Format::Freemind => MapFormat::FreeMind,
            };
            let text = emit_mindmap(&model, &filter, format).map_err(|e| io.error(e))?;
            io.emit(&text, output.as_deref())
        }
        Command::Appmodel { file, output } => {
            let model = io.load(&file)?;
            match emit_app_model(&model) {
                Ok(app) => io.emit(&to_json(&app), output.as_deref()),
                Err(e) => {
                    let _ = io
                        .stderr
                        .write_all(run_diagnostics(&model).render_text().as_bytes());
                    let _ = writeln!(io.stderr, "error: {e}");
                    Ok(Done {
                        code: EXIT_FINDINGS,
                    })
                }
            }
        }
        Command::Metrics { file, json } => {
            let model = io.load(&file)?;
            let metrics = compute_metrics(&model, &run_diagnostics(&model));
            let text = if json {
                to_json(&metrics)
            } else {
                render_metrics_text(&metrics)
            };
            io.emit(&text, None)
        }
        Command::Export { file, output } => {
            let model = io.load(&file)?;
            io.emit(&canonical_serialize(&model), output.as_deref())
        }
    }
}
