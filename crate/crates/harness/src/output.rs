//! Deterministic artifact writers. No timestamps, no host details.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{HarnessError, HarnessResult};

pub const AUDIT_FORMAT: &str = "pdqw-audit/1";
pub const CONVERGENCE_FORMAT: &str = "pdqw-convergence/1";
pub const MOMENTUM_FORMAT: &str = "pdqw-momentum/1";

pub fn ensure_dir(dir: &Path) -> HarnessResult<()> {
    std::fs::create_dir_all(dir)
        .map_err(|e| HarnessError::io("io.out_dir", format!("{}: {e}", dir.display())))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> HarnessResult<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(path, text)
        .map_err(|e| HarnessError::io("io.file", format!("{}: {e}", path.display())))
}

/// A CSV file whose first line is `# format: <tag>`.
pub struct TaggedCsv {
    writer: csv::Writer<std::io::BufWriter<std::fs::File>>,
    path: PathBuf,
}

impl TaggedCsv {
    pub fn create(path: &Path, format: &str, header: &[&str]) -> HarnessResult<Self> {
        let file = std::fs::File::create(path)
            .map_err(|e| HarnessError::io("io.file", format!("{}: {e}", path.display())))?;
        let mut buf = std::io::BufWriter::new(file);
        writeln!(buf, "# format: {format}")?;
        let mut writer = csv::Writer::from_writer(buf);
        writer.write_record(header)?;
        Ok(TaggedCsv {
            writer,
            path: path.to_path_buf(),
        })
    }

    pub fn row(&mut self, fields: &[String]) -> HarnessResult<()> {
        self.writer.write_record(fields)?;
        Ok(())
    }

    pub fn finish(mut self) -> HarnessResult<PathBuf> {
        self.writer.flush()?;
        Ok(self.path)
    }
}

/// Shortest round-trip decimal form.
pub fn num(v: f64) -> String {
    format!("{v:?}")
}
