use std::io::IsTerminal;
use std::path::PathBuf;

use ddr5sc::report::{render_csv, render_text};
use ddr5sc::table::Table;
use serde_json::Value;

use crate::args::Format;
use crate::input::InputFile;

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Tone {
    Good,
    Bad,
}

#[derive(Clone, Debug)]
pub struct Line {
    pub text: String,
    pub tone: Option<Tone>,
}

impl Line {
    pub fn plain(text: impl Into<String>) -> Self {
        Self { text: text.into(), tone: None }
    }

    pub fn toned(text: impl Into<String>, good: bool) -> Self {
        Self { text: text.into(), tone: Some(if good { Tone::Good } else { Tone::Bad }) }
    }
}

/// Result of one subcommand, before rendering.
pub struct Output {
    pub subcommand: String,
    pub params: Value,
    pub inputs: Vec<InputFile>,
    pub default_format: Format,
    pub tables: Vec<Table>,
    pub lines: Vec<Line>,
    pub json: Value,
    /// Side files such as plot series or histograms, as (path, contents).
    pub artifacts: Vec<(PathBuf, String)>,
    pub exit: u8,
    /// Text format prints only `lines`; tables still back CSV.
    pub lines_only_text: bool,
}

impl Output {
    pub fn new(subcommand: &str, params: Value, inputs: Vec<InputFile>) -> Self {
        Self {
            subcommand: subcommand.to_string(),
            params,
            inputs,
            default_format: Format::Text,
            tables: Vec::new(),
            lines: Vec::new(),
            json: Value::Null,
            artifacts: Vec::new(),
            exit: 0,
            lines_only_text: false,
        }
    }

    pub fn render(&self, format: Format, color: bool) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json).expect("result serializes");
                s.push('\n');
                s
            }
            Format::Csv => render_csv(&self.tables),
            Format::Text => {
                let tables: &[Table] = if self.lines_only_text { &[] } else { &self.tables };
                let mut s = render_text(tables);
                if !tables.is_empty() && !self.lines.is_empty() {
                    s.push('\n');
                }
                for l in &self.lines {
                    s.push_str(&paint(&l.text, l.tone, color));
                    s.push('\n');
                }
                s
            }
        }
    }
}

fn paint(text: &str, tone: Option<Tone>, color: bool) -> String {
    match (tone, color) {
        (Some(Tone::Good), true) => format!("\x1b[32m{text}\x1b[0m"),
        (Some(Tone::Bad), true) => format!("\x1b[31m{text}\x1b[0m"),
        _ => text.to_string(),
    }
}

/// Styling only for an interactive stdout, and never with `DDR5SC_NO_COLOR` set.
pub fn color_enabled() -> bool {
    std::env::var_os("DDR5SC_NO_COLOR").is_none() && std::io::stdout().is_terminal()
}
