use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{value_parser, Arg, ArgAction, ArgMatches, Command, ValueEnum};
use serde_json::Value;

use crate::config::{self, OutputFormat, Overrides};
use crate::error::CliError;
use crate::registry::{Entry, ParamKind, REGISTRY};
use crate::{RunManifest, OUTPUT_DIR_ENV};

fn experiment_command(e: &'static Entry) -> Command {
    let mut cmd = Command::new(e.name)
        .about(e.summary)
        .arg(
            Arg::new("config")
                .long("config")
                .value_name("FILE")
                .value_parser(value_parser!(PathBuf))
                .help("JSON config document; flags override its keys"),
        )
        .arg(
            Arg::new("trials")
                .long("trials")
                .value_parser(value_parser!(u64))
                .help(format!("number of trials [default: {}]", e.default_trials)),
        )
        .arg(
            Arg::new("seed")
                .long("seed")
                .value_parser(value_parser!(u64))
                .help(if e.sampled {
                    "RNG seed (required)"
                } else {
                    "RNG seed (unused by this experiment)"
                }),
        )
        .arg(
            Arg::new("format")
                .long("format")
                .value_parser(value_parser!(OutputFormat))
                .help("output format [default: json]"),
        )
        .arg(
            Arg::new("output")
                .long("output")
                .short('o')
                .value_name("PATH")
                .value_parser(value_parser!(PathBuf))
                .help(format!(
                    "output file [default: ${OUTPUT_DIR_ENV}/<experiment>.<ext> or stdout]"
                )),
        );
    for p in e.params {
        let value_name = match p.kind {
            ParamKind::Integer => "INT",
            ParamKind::Real => "REAL",
            ParamKind::Bool => "BOOL",
            ParamKind::Choice => "CHOICE",
            ParamKind::Dims => "DIMS",
        };
        let mut help = p.help.to_string();
        if !p.choices.is_empty() {
            help.push_str(&format!(" ({})", p.choices.join("|")));
        }
        if p.default != "null" {
            help.push_str(&format!(" [default: {}]", p.default.trim_matches('"')));
        }
        cmd = cmd.arg(
            Arg::new(p.key)
                .long(p.flag)
                .value_name(value_name)
                .help(help),
        );
    }
    cmd
}

pub fn command() -> Command {
    let run = Command::new("run")
        .about("Run one experiment and emit its manifest")
        .subcommand_required(true)
        .subcommand_value_name("EXPERIMENT")
        .subcommands(REGISTRY.iter().map(experiment_command));
    let list = Command::new("list")
        .about("List the experiment registry")
        .arg(
            Arg::new("json")
                .long("json")
                .action(ArgAction::SetTrue)
                .help("emit the registry as JSON records"),
        );
    Command::new("qsignal")
        .version(env!("CARGO_PKG_VERSION"))
        .about("Reproducible runs of the quantum no-signaling experiment gallery")
        .subcommand_required(true)
        .arg_required_else_help(true)
        .subcommand(run)
        .subcommand(list)
}

fn overrides(entry: &Entry, m: &ArgMatches) -> Overrides {
    Overrides {
        params: entry
            .params
            .iter()
            .filter_map(|p| {
                m.get_one::<String>(p.key)
                    .map(|v| (p.key.to_string(), v.clone()))
            })
            .collect(),
        trials: m.get_one::<u64>("trials").copied(),
        seed: m.get_one::<u64>("seed").copied(),
        output_format: m.get_one::<OutputFormat>("format").copied(),
        output_path: m.get_one::<PathBuf>("output").cloned(),
    }
}

fn read_document(path: &Path) -> Result<Value, CliError> {
    let text = fs::read_to_string(path)?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Validation(vec![format!("{}: not valid JSON: {e}", path.display())]))
}

fn destination(manifest: &RunManifest) -> Option<PathBuf> {
    let cfg = &manifest.config;
    if let Some(p) = &cfg.output_path {
        return Some(p.clone());
    }
    let dir = std::env::var_os(OUTPUT_DIR_ENV).filter(|d| !d.is_empty())?;
    let ext = match cfg.output_format {
        OutputFormat::Json => "json",
        OutputFormat::Csv => "csv",
    };
    let stem = match cfg.seed {
        Some(s) => format!("{}-seed{s}", cfg.experiment),
        None => cfg.experiment.clone(),
    };
    Some(PathBuf::from(dir).join(format!("{stem}.{ext}")))
}

fn emit(manifest: &RunManifest, out: &mut dyn Write) -> Result<(), CliError> {
    let body = match manifest.config.output_format {
        OutputFormat::Json => manifest.to_json()?,
        OutputFormat::Csv => manifest.to_csv()?,
    };
    match destination(manifest) {
        Some(path) => {
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                fs::create_dir_all(parent)?;
            }
            fs::write(&path, body)?;
            eprintln!("wrote {}", path.display());
        }
        None => out.write_all(body.as_bytes())?,
    }
    Ok(())
}

fn run_experiment(name: &str, m: &ArgMatches, out: &mut dyn Write) -> Result<(), CliError> {
    let entry = crate::registry::lookup(name)
        .ok_or_else(|| CliError::Usage(format!("unknown experiment '{name}'")))?;
    let doc = m
        .get_one::<PathBuf>("config")
        .map(|p| read_document(p))
        .transpose()?;
    let cfg = config::resolve(name, doc.as_ref(), &overrides(entry, m))?;
    let manifest = crate::run(&cfg)?;
    emit(&manifest, out)?;
    let failed: Vec<String> = manifest
        .failures()
        .map(|f| {
            format!(
                "{} = {} (expected {:?}, tolerance {})",
                f.name, f.value, f.expect, f.tolerance
            )
        })
        .collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Contract(failed.join("; ")))
    }
}

fn list(json: bool, out: &mut dyn Write) -> Result<(), CliError> {
    if json {
        writeln!(out, "{}", serde_json::to_string_pretty(REGISTRY)?)?;
        return Ok(());
    }
    let width = REGISTRY.iter().map(|e| e.name.len()).max().unwrap_or(0);
    let anchor_width = REGISTRY.iter().map(|e| e.anchor.len()).max().unwrap_or(0);
    for e in REGISTRY {
        writeln!(
            out,
            "{:width$}  {:anchor_width$}  {}",
            e.name, e.anchor, e.summary
        )?;
    }
    Ok(())
}

/// Parses `args` and runs the command, writing results to `out` and
/// diagnostics to stderr. Returns the process exit code.
pub fn main_with<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let matches = match command().try_get_matches_from(args) {
        Ok(m) => m,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let result = match matches.subcommand() {
        Some(("list", m)) => list(m.get_flag("json"), out),
        Some(("run", m)) => match m.subcommand() {
            Some((name, sub)) => run_experiment(name, sub, out),
            None => Err(CliError::Usage("missing experiment".into())),
        },
        _ => Err(CliError::Usage("unknown command".into())),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error [{}]: {e}", e.category());
            e.exit_code()
        }
    }
}

impl std::fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(
            self.to_possible_value()
                .expect("no skipped variants")
                .get_name(),
        )
    }
}
