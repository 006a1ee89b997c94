//! Output files. Each one starts with the tool version and the full
//! command configuration.

use anyhow::{Context, Result};
use serde::Serialize;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

#[derive(Serialize)]
pub struct Header {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub config: serde_json::Value,
}

impl Header {
    pub fn new<C: Serialize>(command: &'static str, config: &C) -> Self {
        Header {
            tool: "cspec",
            version: env!("CARGO_PKG_VERSION"),
            command,
            config: serde_json::to_value(config).unwrap_or(serde_json::Value::Null),
        }
    }
}

fn sink(out: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

#[derive(Serialize)]
struct Document<'a, T> {
    #[serde(flatten)]
    header: &'a Header,
    result: &'a T,
}

/// One pretty-printed JSON document with the header fields on top.
pub fn write_json<T: Serialize>(out: Option<&Path>, header: &Header, value: &T) -> Result<()> {
    let mut w = sink(out)?;
    serde_json::to_writer_pretty(&mut w, &Document { header, result: value })?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

/// Header on the first line, then one item per line.
pub fn write_jsonl<T: Serialize>(out: Option<&Path>, header: &Header, items: &[T]) -> Result<()> {
    let mut w = sink(out)?;
    serde_json::to_writer(&mut w, header)?;
    writeln!(w)?;
    for item in items {
        serde_json::to_writer(&mut w, item)?;
        writeln!(w)?;
    }
    w.flush()?;
    Ok(())
}

/// CSV with the header as a leading `#` comment line.
pub fn write_csv<T: Serialize>(path: &Path, header: &Header, rows: &[T]) -> Result<()> {
    let mut f = BufWriter::new(File::create(path).with_context(|| format!("creating {}", path.display()))?);
    writeln!(f, "# {}", serde_json::to_string(header)?)?;
    let mut w = csv::Writer::from_writer(f);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Whitespace-separated table for gnuplot.
pub fn write_table(
    path: &Path,
    header: &Header,
    columns: &[&str],
    rows: impl Iterator<Item = Vec<String>>,
) -> Result<()> {
    let mut f = BufWriter::new(File::create(path).with_context(|| format!("creating {}", path.display()))?);
    writeln!(f, "# {}", serde_json::to_string(header)?)?;
    writeln!(f, "# {}", columns.join(" "))?;
    for r in rows {
        writeln!(f, "{}", r.join(" "))?;
    }
    f.flush()?;
    Ok(())
}
