use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use ising_traffic::config::RunConfig;
use ising_traffic::Error;

pub const EXIT_INPUT: i32 = 2;
pub const EXIT_SOLVE: i32 = 3;
pub const EXIT_IO: i32 = 4;

/// A message plus the process exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub msg: String,
}

impl Failure {
    pub fn usage(msg: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INPUT,
            msg: msg.into(),
        }
    }

    pub fn solve(msg: impl Into<String>) -> Self {
        Failure {
            code: EXIT_SOLVE,
            msg: msg.into(),
        }
    }

    /// Prefixes the message with a file or item name.
    pub fn context(mut self, what: impl fmt::Display) -> Self {
        self.msg = format!("{what}: {}", self.msg);
        self
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.msg)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Io(_) => EXIT_IO,
            Error::Compile(_) | Error::Solve(_) | Error::Divergence { .. } | Error::AllDiverged { .. } => {
                EXIT_SOLVE
            }
            _ => EXIT_INPUT,
        };
        Failure {
            code,
            msg: e.to_string(),
        }
    }
}

pub type CliResult<T> = Result<T, Failure>;

/// Settings shared by every subcommand.
pub struct Context {
    pub cfg: RunConfig,
    pub out: Option<PathBuf>,
}

impl Context {
    pub fn out_dir(&self) -> CliResult<PathBuf> {
        let dir = self
            .out
            .clone()
            .unwrap_or_else(|| PathBuf::from("ising-traffic-out"));
        fs::create_dir_all(&dir).map_err(|e| io_failure(&dir, e))?;
        Ok(dir)
    }
}

pub fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure {
        code: EXIT_IO,
        msg: format!("{}: {e}", path.display()),
    }
}

pub fn read_input(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| io_failure(path, e))
}

pub fn write_output(dir: &Path, name: &str, contents: &str) -> CliResult<PathBuf> {
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| io_failure(&path, e))?;
    Ok(path)
}

/// `key=value` report lines in insertion order.
#[derive(Default)]
pub struct Report {
    lines: Vec<String>,
}

impl Report {
    pub fn put(&mut self, key: &str, value: impl fmt::Display) {
        self.lines.push(format!("{key}={value}"));
    }

    pub fn text(&self) -> String {
        let mut s = self.lines.join("\n");
        s.push('\n');
        s
    }
}

pub fn file_stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}
