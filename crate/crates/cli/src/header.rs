//! `#`-prefixed header lines written ahead of every output table.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use crate::failure::{Failure, WithCode, USAGE};

pub struct Header {
    lines: Vec<String>,
}

impl Header {
    pub fn new(command: &str, deterministic: bool) -> Self {
        let mut lines = vec![format!(
            "alphalasso {command} {}",
            env!("CARGO_PKG_VERSION")
        )];
        if !deterministic {
            lines.push(format!("generated = {}", chrono::Utc::now().to_rfc3339()));
        }
        Header { lines }
    }

    pub fn kv(&mut self, key: &str, value: impl std::fmt::Display) -> &mut Self {
        self.lines.push(format!("{key} = {value}"));
        self
    }

    pub fn write_to(&self, w: &mut dyn Write) -> io::Result<()> {
        for l in &self.lines {
            writeln!(w, "# {l}")?;
        }
        Ok(())
    }
}

/// Write `header` then `body` to `path`, or to standard output.
pub fn emit(path: Option<&Path>, header: &Header, body: &[u8]) -> Result<(), Failure> {
    let mut w: Box<dyn Write> = match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p)
                .map_err(|e| anyhow::anyhow!("{}: {e}", p.display()))
                .code(USAGE)?,
        )),
        None => Box::new(io::stdout().lock()),
    };
    header.write_to(&mut w).code(USAGE)?;
    w.write_all(body).code(USAGE)?;
    w.flush().code(USAGE)
}
