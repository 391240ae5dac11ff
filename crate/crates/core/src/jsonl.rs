//! Line-oriented record files.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use crate::benchmark::ResponseRecord;
use crate::error::{EngineError, Result};
use crate::instance::{parse_instance, Instance};

/// Parses every non-blank line; errors carry the 1-based line number.
pub fn read_records<T, R, F>(reader: R, parse: F) -> Result<Vec<T>>
where
    R: BufRead,
    F: Fn(&str) -> Result<T>,
{
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let record = parse(&line).map_err(|e| match e {
            EngineError::Io(e) => EngineError::Io(e),
            other => EngineError::MalformedRecord {
                line: i + 1,
                message: other.to_string(),
            },
        })?;
        out.push(record);
    }
    Ok(out)
}

pub fn read_instances(path: &Path) -> Result<Vec<Instance>> {
    read_records(BufReader::new(File::open(path)?), parse_instance)
}

pub fn read_responses(path: &Path) -> Result<Vec<ResponseRecord>> {
    read_records(BufReader::new(File::open(path)?), |l| Ok(serde_json::from_str(l)?))
}

/// Writes one compact JSON record per line.
pub fn write_records<T: Serialize>(writer: impl Write, records: &[T]) -> Result<()> {
    let mut w = BufWriter::new(writer);
    for r in records {
        serde_json::to_writer(&mut w, r)?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}
