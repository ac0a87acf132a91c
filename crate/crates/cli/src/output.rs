use std::io::{self, IsTerminal, Write};
use std::path::PathBuf;

use serde::Serialize;
use serde_json::json;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Where the primary data goes and how it is encoded. Without `--output`
/// the command prints a human-readable report and, if `--out` is given,
/// writes CSV there.
pub struct Output {
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    color: bool,
}

impl Output {
    pub fn new(format: Option<Format>, out: Option<PathBuf>) -> Self {
        let color = std::env::var_os("GIRO_SIM_NO_COLOR").is_none() && io::stdout().is_terminal();
        Output { format, out, color }
    }

    pub fn verdict(&self, ok: bool) -> String {
        let (word, code) = if ok { ("PASS", "32") } else { ("FAIL", "31") };
        if self.color {
            format!("\x1b[{code}m{word}\x1b[0m")
        } else {
            word.to_string()
        }
    }

    pub fn heading(&self, text: &str) -> String {
        if self.color {
            format!("\x1b[1m{text}\x1b[0m")
        } else {
            text.to_string()
        }
    }

    /// True when the report belongs on stderr because stdout carries data.
    pub fn data_on_stdout(&self) -> bool {
        self.format.is_some() && self.out.is_none()
    }

    /// Writes `bytes` to `--out`, or to stdout.
    pub fn emit(&self, bytes: &[u8]) -> Result<(), CliError> {
        match &self.out {
            Some(path) => std::fs::write(path, bytes).map_err(|e| CliError::io(path, e)),
            None => {
                let mut stdout = io::stdout().lock();
                stdout
                    .write_all(bytes)
                    .and_then(|_| stdout.flush())
                    .map_err(|e| CliError::Input(format!("cannot write to stdout: {e}")))
            }
        }
    }

    /// Writes a `{command, data}` JSON envelope.
    pub fn emit_json(&self, command: &str, data: impl Serialize) -> Result<(), CliError> {
        let mut text = serde_json::to_string_pretty(&json!({
            "command": command,
            "data": data,
        }))?;
        text.push('\n');
        self.emit(text.as_bytes())
    }

    /// Prints a report line to stdout, or to stderr when stdout carries data.
    pub fn say(&self, line: impl AsRef<str>) {
        // A closed pipe (e.g. `| head`) is not an error worth reporting.
        let _ = if self.data_on_stdout() {
            writeln!(io::stderr(), "{}", line.as_ref())
        } else {
            writeln!(io::stdout(), "{}", line.as_ref())
        };
    }
}

/// CSV rows with LF terminators.
pub fn csv_bytes<R, I, S>(header: &[&str], rows: R) -> Vec<u8>
where
    R: IntoIterator<Item = I>,
    I: IntoIterator<Item = S>,
    S: AsRef<[u8]>,
{
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(header).expect("writing to memory");
    for row in rows {
        w.write_record(row).expect("writing to memory");
    }
    w.into_inner().expect("writing to memory")
}

/// Shortest representation that parses back to the same value.
pub fn num(x: f64) -> String {
    format!("{x:?}")
}
