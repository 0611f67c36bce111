//! Command-line front end for the ddr5sc toolkit.
//!
//! [`run`] executes one invocation in-process and returns what the binary
//! would print, so `main` and the test suites share one code path.

pub mod args;
pub mod commands;
pub mod input;
pub mod manifest;
pub mod output;

use std::ffi::OsString;
use std::path::Path;

use clap::Parser;

use crate::args::Cli;
use crate::commands::manifest_path_for;
use crate::input::{CmdResult, Failure};
use crate::manifest::RunManifest;

/// Exit code and captured streams of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Invocation {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

fn write_file(path: &Path, contents: &str) -> CmdResult<()> {
    std::fs::write(path, contents).map_err(|e| Failure::io(anyhow::anyhow!("cannot write {}: {e}", path.display())))
}

fn execute(cli: &Cli, color: bool) -> CmdResult<(u8, String)> {
    let out = commands::run(&cli.command)?;
    let format = cli.format.unwrap_or(out.default_format);
    let rendered = out.render(format, color && cli.output.is_none());
    let manifest = RunManifest::new(&out.subcommand, out.params.clone(), &out.inputs);

    let stdout = match &cli.output {
        Some(path) => {
            write_file(path, &rendered)?;
            let mpath = cli.manifest.clone().unwrap_or_else(|| manifest_path_for(path));
            write_file(&mpath, &manifest.to_json())?;
            String::new()
        }
        None => {
            if let Some(mpath) = &cli.manifest {
                write_file(mpath, &manifest.to_json())?;
            }
            rendered
        }
    };
    for (path, contents) in &out.artifacts {
        write_file(path, contents)?;
        write_file(&manifest_path_for(path), &manifest.to_json())?;
    }
    Ok((out.exit, stdout))
}

/// Runs with `args` (program name first), styling output when `color` is set.
pub fn run<I, T>(args: I, color: bool) -> Invocation
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            let code = e.exit_code() as u8;
            return if e.use_stderr() {
                Invocation { code, stdout: String::new(), stderr: text }
            } else {
                Invocation { code, stdout: text, stderr: String::new() }
            };
        }
    };
    match execute(&cli, color) {
        Ok((code, stdout)) => Invocation { code, stdout, stderr: String::new() },
        Err(f) => Invocation { code: f.code, stdout: String::new(), stderr: format!("error: {:#}\n", f.error) },
    }
}
