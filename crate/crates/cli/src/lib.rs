//! `ackn` command-line front end.
//!
//! Exit codes: 0 success, 1 usage error, 2 transcript parse or validation
//! error, 3 unclassified acknowledgment under `--strict`.

pub mod report;

use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};

use ackn_core::{
    analyze, parse_transcript, validate_dialogue, ClassifyOptions, CorpusReport, Dialogue,
    DialogueState, ParseError, Speaker,
};
use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use walkdir::WalkDir;

use report::{expectation_line, stats_text, AnalysisReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_STRICT: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "ackn",
    version,
    about = "Acknowledgment analysis for speech-act annotated dialogues"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct OutputFormat {
    /// Emit JSON.
    #[arg(long, conflicts_with = "text")]
    json: bool,
    /// Emit human-readable text (default).
    #[arg(long)]
    text: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exchange structure and acknowledgment classes of one transcript.
    Analyze {
        file: PathBuf,
        #[command(flatten)]
        format: OutputFormat,
        /// Also classify assessments.
        #[arg(long)]
        include_assess: bool,
        /// Exit 3 if any acknowledgment is unclassified.
        #[arg(long)]
        strict: bool,
    },
    /// Corpus statistics over files and directories of `*.txt` transcripts.
    Stats {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
        #[command(flatten)]
        format: OutputFormat,
        #[arg(long)]
        include_assess: bool,
        #[arg(long)]
        strict: bool,
    },
    /// Check transcript format and dialogue invariants.
    Validate { file: PathBuf },
    /// Print expected acts before each turn of a script, or interactively.
    Predict {
        /// Transcript to replay.
        #[arg(
            long,
            conflicts_with = "interactive",
            required_unless_present = "interactive"
        )]
        script: Option<PathBuf>,
        /// Read `SPEAKER: act` lines from standard input.
        #[arg(long)]
        interactive: bool,
        /// Speaker labels for interactive mode.
        #[arg(long, num_args = 2, value_names = ["A", "B"], default_values = ["W", "U"])]
        speakers: Vec<String>,
    },
}

enum Failure {
    Usage(String),
    Input(Vec<String>),
    Strict,
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Usage(format!("{e:#}"))
    }
}

fn diagnostic(path: &Path, e: &ParseError) -> String {
    match e {
        ParseError::Line(d) => format!("{}:{}: {}", path.display(), d.line, d.message),
        ParseError::NoTurns => format!("{}: no turns", path.display()),
    }
}

fn load(path: &Path) -> Result<Dialogue, Failure> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    parse_transcript(&text).map_err(|e| Failure::Input(vec![diagnostic(path, &e)]))
}

fn transcripts(paths: &[PathBuf]) -> Result<Vec<PathBuf>, Failure> {
    let mut files = Vec::new();
    for path in paths {
        if path.is_dir() {
            for entry in WalkDir::new(path) {
                let entry = entry.with_context(|| format!("cannot walk {}", path.display()))?;
                if entry.file_type().is_file()
                    && entry.path().extension().is_some_and(|e| e == "txt")
                {
                    files.push(entry.into_path());
                }
            }
        } else if path.is_file() {
            files.push(path.clone());
        } else {
            return Err(Failure::Usage(format!(
                "no such file or directory: {}",
                path.display()
            )));
        }
    }
    files.sort();
    files.dedup();
    Ok(files)
}

fn options(include_assess: bool) -> ClassifyOptions {
    ClassifyOptions { include_assess }
}

fn cmd_analyze(
    file: &Path,
    json: bool,
    include_assess: bool,
    strict: bool,
    out: &mut dyn Write,
) -> Result<(), Failure> {
    let d = load(file)?;
    let (tree, acks) =
        analyze(&d, options(include_assess)).map_err(|e| Failure::Usage(e.to_string()))?;
    let report = AnalysisReport::new(&d, &tree, acks);
    let rendered = if json {
        report.to_json()
    } else {
        report.to_text()
    };
    out.write_all(rendered.as_bytes()).context("write")?;
    if strict && report.has_unclassified() {
        return Err(Failure::Strict);
    }
    Ok(())
}

fn cmd_stats(
    paths: &[PathBuf],
    json: bool,
    include_assess: bool,
    strict: bool,
    out: &mut dyn Write,
) -> Result<(), Failure> {
    let files = transcripts(paths)?;
    let opts = options(include_assess);
    // `collect` keeps path order whatever the schedule.
    let partials: Vec<Result<(CorpusReport, bool), String>> = files
        .par_iter()
        .map(|path| {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("{}: cannot read: {e}", path.display()))?;
            let d = parse_transcript(&text).map_err(|e| diagnostic(path, &e))?;
            let (tree, acks) = analyze(&d, opts).map_err(|e| format!("{}: {e}", path.display()))?;
            let unclassified = acks
                .iter()
                .any(|a| a.pattern == ackn_core::PatternId::Unclassified);
            Ok((
                ackn_core::aggregate([(&d, &tree, acks.as_slice())]),
                unclassified,
            ))
        })
        .collect();

    let mut errors = Vec::new();
    let mut report = CorpusReport::new();
    let mut unclassified = false;
    for partial in partials {
        match partial {
            Ok((r, u)) => {
                report = report.merge(&r);
                unclassified |= u;
            }
            Err(e) => errors.push(e),
        }
    }
    if !errors.is_empty() {
        return Err(Failure::Input(errors));
    }
    let rendered = if json {
        let mut s = serde_json::to_string_pretty(&report).context("serialize")?;
        s.push('\n');
        s
    } else {
        stats_text(&report)
    };
    out.write_all(rendered.as_bytes()).context("write")?;
    if strict && unclassified {
        return Err(Failure::Strict);
    }
    Ok(())
}

fn cmd_validate(file: &Path, out: &mut dyn Write) -> Result<(), Failure> {
    let d = load(file)?;
    if let Err(violations) = validate_dialogue(&d) {
        return Err(Failure::Input(
            violations
                .iter()
                .map(|v| format!("{}: {v}", file.display()))
                .collect(),
        ));
    }
    writeln!(out, "{}: ok ({} turns)", file.display(), d.turns.len()).context("write")?;
    Ok(())
}

fn print_expectations(
    state: &DialogueState,
    speaker: &Speaker,
    out: &mut dyn Write,
) -> Result<(), Failure> {
    let expected = state
        .expected_acts(speaker)
        .map_err(|e| Failure::Usage(e.to_string()))?;
    for e in &expected {
        writeln!(out, "  {}", expectation_line(e)).context("write")?;
    }
    Ok(())
}

fn cmd_predict_script(file: &Path, out: &mut dyn Write) -> Result<(), Failure> {
    let d = load(file)?;
    let [a, b] = d.speakers.clone();
    let mut state = DialogueState::new(a, b).map_err(|e| Failure::Input(vec![e.to_string()]))?;
    for (i, turn) in d.turns.iter().enumerate() {
        writeln!(out, "before turn {i} ({}):", turn.speaker).context("write")?;
        print_expectations(&state, &turn.speaker, out)?;
        let acts: Vec<&str> = turn.acts().map(|a| a.as_str()).collect();
        writeln!(out, "turn {i} {}: {}", turn.speaker, acts.join(" + ")).context("write")?;
        for u in &turn.utterances {
            state
                .advance(&turn.speaker, u)
                .map_err(|e| Failure::Input(vec![format!("{}: {e}", file.display())]))?;
        }
    }
    Ok(())
}

fn cmd_predict_interactive(
    speakers: &[String],
    input: &mut dyn BufRead,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<(), Failure> {
    let parse = |s: &str| Speaker::new(s).map_err(|e| Failure::Usage(e.to_string()));
    let a = parse(&speakers[0])?;
    let b = parse(&speakers[1])?;
    let mut state =
        DialogueState::new(a.clone(), b.clone()).map_err(|e| Failure::Usage(e.to_string()))?;
    let mut current: Option<Speaker> = None;
    let mut rejected = 0;
    for (idx, line) in input.lines().enumerate() {
        let line = line.context("read stdin")?;
        let content = line.trim();
        if content.is_empty() || content.starts_with('#') {
            continue;
        }
        let parsed = if let Some(rest) = content.strip_prefix('+') {
            current
                .clone()
                .ok_or_else(|| "continuation `+` before any turn".to_string())
                .map(|s| (s, rest))
        } else {
            match content.split_once(':') {
                Some((spk, rest)) => Speaker::new(spk.trim())
                    .map(|s| (s, rest))
                    .map_err(|e| e.to_string()),
                None => Err("expected `SPEAKER: act`".to_string()),
            }
        };
        let step = parsed.and_then(|(speaker, rest)| {
            let act_text = rest.split_once('|').map_or(rest, |(a, _)| a);
            let act = act_text
                .trim()
                .parse()
                .map_err(|e: ackn_core::dialogue::UnknownAct| e.to_string())?;
            state
                .advance(&speaker, &ackn_core::Utterance::new(act))
                .map_err(|e| e.to_string())?;
            Ok(speaker)
        });
        match step {
            Ok(speaker) => {
                current = Some(speaker);
                for who in [&a, &b] {
                    writeln!(out, "next {who}:").context("write")?;
                    print_expectations(&state, who, out)?;
                }
            }
            Err(msg) => {
                rejected += 1;
                writeln!(err, "<stdin>:{}: {msg}", idx + 1).context("write")?;
            }
        }
    }
    if rejected > 0 {
        return Err(Failure::Input(vec![format!(
            "<stdin>: {rejected} line(s) rejected"
        )]));
    }
    Ok(())
}

/// Runs the CLI with explicit streams and returns the process exit code.
pub fn run<I, T>(args: I, input: &mut dyn BufRead, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(rendered.as_bytes())
            } else {
                out.write_all(rendered.as_bytes())
            };
            return code;
        }
    };

    let result = match &cli.command {
        Command::Analyze {
            file,
            format,
            include_assess,
            strict,
        } => cmd_analyze(file, format.json, *include_assess, *strict, out),
        Command::Stats {
            paths,
            format,
            include_assess,
            strict,
        } => cmd_stats(paths, format.json, *include_assess, *strict, out),
        Command::Validate { file } => cmd_validate(file, out),
        Command::Predict {
            script: Some(file), ..
        } => cmd_predict_script(file, out),
        Command::Predict { speakers, .. } => cmd_predict_interactive(speakers, input, out, err),
    };

    match result {
        Ok(()) => EXIT_OK,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Input(diagnostics)) => {
            for d in diagnostics {
                let _ = writeln!(err, "{d}");
            }
            EXIT_PARSE
        }
        Err(Failure::Strict) => {
            let _ = writeln!(err, "error: unclassified acknowledgment present (--strict)");
            EXIT_STRICT
        }
    }
}
