//! Command-line front end: argument parsing and the run driver.

use std::io::Write;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::Parser;
use thiserror::Error;

use kjlint_core::config::load_config;
use kjlint_core::pipeline::{run_analysis, AnalysisConfig};
use kjlint_core::report::{render_report, Format, RenderOptions};
use kjlint_core::Language;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FINDINGS: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_FAILURE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "kjlint", about = "Detect code smells in mixed Kotlin and Java projects")]
#[command(disable_version_flag = true, disable_help_flag = true)]
struct Args {
    /// The language of project files
    #[arg(value_parser = parse_language)]
    lang: Language,

    /// The source path
    #[arg(value_name = "srcPath")]
    src_path: PathBuf,

    /// The Languages of cross-analysis
    #[arg(short = 'w', long = "with", value_name = "TEXT", value_parser = parse_language, action = clap::ArgAction::Append)]
    with: Vec<Language>,

    /// The result file name prefix
    #[arg(short = 'p', long = "prefix", value_name = "TEXT")]
    prefix: Option<String>,

    /// The result output path
    #[arg(short = 'd', long = "outDir", value_name = "PATH")]
    out_dir: Option<PathBuf>,

    /// The Presentation of results
    #[arg(short = 'f', long = "format", value_name = "text|json", default_value = "text", value_parser = parse_format)]
    format: Format,

    /// The User-specified profiles
    #[arg(short = 'c', long = "config", value_name = "PATH")]
    config: Option<PathBuf>,

    /// Show this message and exit
    #[arg(short = 'h', long = "help", action = clap::ArgAction::Help)]
    help: Option<bool>,
}

fn parse_language(s: &str) -> Result<Language, String> {
    Language::parse(s).ok_or_else(|| format!("unsupported language {s:?} (expected kotlin or java)"))
}

fn parse_format(s: &str) -> Result<Format, String> {
    Format::parse(s).ok_or_else(|| format!("unsupported format {s:?} (expected text or json)"))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliConfig {
    pub lang: Language,
    pub src_path: PathBuf,
    pub with_languages: Vec<Language>,
    pub prefix: Option<String>,
    pub out_dir: Option<PathBuf>,
    pub format: Format,
    pub config_path: Option<PathBuf>,
}

impl CliConfig {
    pub fn languages(&self) -> impl Iterator<Item = Language> + '_ {
        std::iter::once(self.lang).chain(self.with_languages.iter().copied())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Parsed {
    Run(CliConfig),
    Help(String),
}

/// Message plus usage text, ready to print.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{0}")]
pub struct UsageError(pub String);

fn usage_text() -> String {
    use clap::CommandFactory;
    Args::command().render_usage().to_string()
}

/// Parses arguments without the program name.
pub fn parse_args<I, S>(argv: I) -> Result<Parsed, UsageError>
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let full = std::iter::once(std::ffi::OsString::from("kjlint")).chain(argv.into_iter().map(Into::into));
    let args = match Args::try_parse_from(full) {
        Ok(a) => a,
        Err(e) if e.kind() == ErrorKind::DisplayHelp => return Ok(Parsed::Help(e.render().to_string())),
        Err(e) => {
            let mut text = e.render().to_string();
            if !text.contains("Usage:") {
                text = format!("{}\n\n{}\n", text.trim_end(), usage_text());
            }
            return Err(UsageError(text));
        }
    };
    if args.with.contains(&args.lang) {
        return Err(UsageError(format!(
            "error: --with {} repeats the project language\n\n{}\n",
            args.lang,
            usage_text()
        )));
    }
    let mut with_languages = Vec::new();
    for l in args.with {
        if !with_languages.contains(&l) {
            with_languages.push(l);
        }
    }
    Ok(Parsed::Run(CliConfig {
        lang: args.lang,
        src_path: args.src_path,
        with_languages,
        prefix: args.prefix,
        out_dir: args.out_dir,
        format: args.format,
        config_path: args.config,
    }))
}

/// Runs one analysis and renders it. Returns the process exit code.
pub fn run(cfg: &CliConfig, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    if !cfg.src_path.exists() {
        let _ = writeln!(stderr, "error: srcPath {} does not exist\n\n{}", cfg.src_path.display(), usage_text());
        return EXIT_USAGE;
    }
    let detector = match load_config(cfg.config_path.as_deref()) {
        Ok(d) => d,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_FAILURE;
        }
    };
    let analysis = AnalysisConfig { languages: cfg.languages().collect(), detector };
    let result = match run_analysis(&analysis, &cfg.src_path) {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_FAILURE;
        }
    };
    let opts = RenderOptions { format: cfg.format, prefix: cfg.prefix.clone(), out_dir: cfg.out_dir.clone() };
    match render_report(&result, &opts, stdout) {
        Ok(outcome) => {
            let _ = writeln!(stderr, "{}", outcome.summary);
            for p in &outcome.written {
                let _ = writeln!(stderr, "wrote {}", p.display());
            }
            outcome.exit_code
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_FAILURE
        }
    }
}

/// Full entry point: parse, then run.
pub fn main_with<I, S>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    match parse_args(argv) {
        Ok(Parsed::Help(text)) => {
            let _ = write!(stdout, "{text}");
            EXIT_OK
        }
        Ok(Parsed::Run(cfg)) => run(&cfg, stdout, stderr),
        Err(e) => {
            let _ = write!(stderr, "{e}");
            EXIT_USAGE
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_cfg(argv: &[&str]) -> CliConfig {
        match parse_args(argv.iter().copied()).unwrap() {
            Parsed::Run(c) => c,
            Parsed::Help(_) => panic!("help"),
        }
    }

    #[test]
    fn usage_grammar_example() {
        let c = run_cfg(&["kotlin", "./sample", "--with", "java", "--outDir", "./out"]);
        assert_eq!(c.lang, Language::Kotlin);
        assert_eq!(c.src_path, PathBuf::from("./sample"));
        assert_eq!(c.with_languages, vec![Language::Java]);
        assert_eq!(c.out_dir, Some(PathBuf::from("./out")));
        assert_eq!(c.format, Format::Text);
    }

    #[test]
    fn short_flags() {
        let c = run_cfg(&["java", "src", "-w", "kotlin", "-p", "x-", "-d", "o", "-f", "json", "-c", "cfg.json"]);
        assert_eq!(c.prefix.as_deref(), Some("x-"));
        assert_eq!(c.format, Format::Json);
        assert_eq!(c.config_path, Some(PathBuf::from("cfg.json")));
    }

    #[test]
    fn help_lists_every_option() {
        let Parsed::Help(text) = parse_args(["--help"]).unwrap() else { panic!() };
        for row in ["-w, --with", "-p, --prefix", "-d, --outDir", "-f, --format", "-c, --config", "-h, --help"] {
            assert!(text.contains(row), "{row} missing from\n{text}");
        }
        assert!(matches!(parse_args(["-h"]).unwrap(), Parsed::Help(_)));
    }

    #[test]
    fn usage_errors() {
        assert!(parse_args(["kotlin"]).is_err());
        assert!(parse_args(["kotlin", "src", "--bogus"]).is_err());
        assert!(parse_args(["kotlin", "src", "-f", "xml"]).is_err());
        assert!(parse_args(["cobol", "src"]).is_err());
        let e = parse_args(["kotlin", "src", "--with", "kotlin"]).unwrap_err();
        assert!(e.0.contains("Usage"));
        let e = parse_args(["kotlin"]).unwrap_err();
        assert!(e.0.contains("Usage"));
    }
}
