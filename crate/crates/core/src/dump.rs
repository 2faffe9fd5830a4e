//! Binary field dumps.
//!
//! A dump is one ASCII header line
//!
//! ```text
//! PDQW-FIELD v1 n_theta=<u> n_r=<u> r_min=<f> eps=<f> basis=<polar|cartesian>
//! ```
//!
//! followed by `2 · 2 · n_r · n_theta` little-endian `f64` values, `(re, im)`
//! interleaved, in component-major, radial, angular order (the in-memory
//! layout of [`SpinorField`]). Floats in the header use Rust's shortest
//! round-trip formatting.

use std::io::{BufRead, Write};

use crate::field::{PolarGrid, SpinBasis, SpinorField};
use crate::{Error, Result, C64};

pub const DUMP_MAGIC: &str = "PDQW-FIELD";
pub const DUMP_VERSION: &str = "v1";

pub fn write_field<W: Write>(mut w: W, field: &SpinorField) -> Result<()> {
    let g = field.grid();
    writeln!(
        w,
        "{DUMP_MAGIC} {DUMP_VERSION} n_theta={} n_r={} r_min={:?} eps={:?} basis={}",
        g.n_theta(),
        g.n_r(),
        g.r_min(),
        g.eps(),
        field.basis().as_str()
    )?;
    let mut buf = Vec::with_capacity(field.data().len() * 16);
    for z in field.data() {
        buf.extend_from_slice(&z.re.to_le_bytes());
        buf.extend_from_slice(&z.im.to_le_bytes());
    }
    w.write_all(&buf)?;
    w.flush()?;
    Ok(())
}

fn header_value<'a>(tokens: &[&'a str], key: &str) -> Result<&'a str> {
    tokens
        .iter()
        .find_map(|t| t.strip_prefix(key).and_then(|rest| rest.strip_prefix('=')))
        .ok_or_else(|| Error::Format(format!("dump header lacks `{key}`")))
}

fn parse<T: std::str::FromStr>(tokens: &[&str], key: &str) -> Result<T> {
    let v = header_value(tokens, key)?;
    v.parse()
        .map_err(|_| Error::Format(format!("dump header `{key}={v}` is not a valid value")))
}

pub fn read_field<R: BufRead>(mut r: R) -> Result<SpinorField> {
    let mut header = String::new();
    r.read_line(&mut header)?;
    let tokens: Vec<&str> = header.split_whitespace().collect();
    if tokens.len() < 2 || tokens[0] != DUMP_MAGIC {
        return Err(Error::Format("not a field dump (bad magic)".into()));
    }
    if tokens[1] != DUMP_VERSION {
        return Err(Error::Format(format!(
            "unsupported dump version {}",
            tokens[1]
        )));
    }
    let n_theta: usize = parse(&tokens, "n_theta")?;
    let n_r: usize = parse(&tokens, "n_r")?;
    let r_min: f64 = parse(&tokens, "r_min")?;
    let eps: f64 = parse(&tokens, "eps")?;
    let tag = header_value(&tokens, "basis")?;
    let basis =
        SpinBasis::parse(tag).ok_or_else(|| Error::Format(format!("unknown basis tag `{tag}`")))?;
    let grid = PolarGrid::new(n_theta, r_min, n_r)?;
    if (grid.eps() - eps).abs() > 1e-12 * eps.abs().max(1.0) {
        return Err(Error::Format(format!(
            "dump eps={eps} inconsistent with n_theta={n_theta} (expected {})",
            grid.eps()
        )));
    }
    let n = 2 * n_r * n_theta;
    let mut bytes = vec![0u8; n * 16];
    r.read_exact(&mut bytes).map_err(|e| match e.kind() {
        std::io::ErrorKind::UnexpectedEof => Error::Format("dump payload truncated".into()),
        _ => Error::Io(e),
    })?;
    let mut extra = [0u8; 1];
    if r.read(&mut extra)? != 0 {
        return Err(Error::Format("trailing bytes after dump payload".into()));
    }
    let data = bytes
        .chunks_exact(16)
        .map(|c| {
            let re = f64::from_le_bytes(c[..8].try_into().unwrap());
            let im = f64::from_le_bytes(c[8..].try_into().unwrap());
            C64::new(re, im)
        })
        .collect();
    SpinorField::from_raw(grid, basis, data)
}

pub fn save_field(path: &std::path::Path, field: &SpinorField) -> Result<()> {
    let f = std::fs::File::create(path)?;
    write_field(std::io::BufWriter::new(f), field)
}

pub fn load_field(path: &std::path::Path) -> Result<SpinorField> {
    let f = std::fs::File::open(path)?;
    read_field(std::io::BufReader::new(f))
}
