//! Field checkpoints: structured text with 17-significant-digit decimals.
//!
//! ```text
//! hartree5d-ckpt v1
//! n_points 4096
//! r_max 3.0000000000000000e1
//! t 1.0000000000000000e0
//! <re> <im>       one line per node
//! ```

use std::fmt;
use std::io::Write;
use std::path::Path;

use num_complex::Complex64;

use hartree5d::{RadialField, RadialGrid};

pub const HEADER: &str = "hartree5d-ckpt v1";

/// 17 significant digits: parses back to the identical f64.
pub fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug)]
pub enum CheckpointError {
    Io(std::io::Error),
    VersionMismatch { got: String },
    Truncated { line: usize, what: String },
    GridMismatch { file_n: usize, file_r: f64, want_n: usize, want_r: f64 },
}

impl fmt::Display for CheckpointError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CheckpointError::Io(e) => write!(f, "i/o: {e}"),
            CheckpointError::VersionMismatch { got } => {
                write!(f, "bad checkpoint header: expected {HEADER:?}, got {got:?}")
            }
            CheckpointError::Truncated { line, what } => {
                write!(f, "checkpoint truncated or malformed at line {line}: {what}")
            }
            CheckpointError::GridMismatch { file_n, file_r, want_n, want_r } => write!(
                f,
                "grid mismatch: checkpoint has (n_points = {file_n}, r_max = {file_r}), \
                 scenario has (n_points = {want_n}, r_max = {want_r})"
            ),
        }
    }
}

impl std::error::Error for CheckpointError {}

impl From<std::io::Error> for CheckpointError {
    fn from(e: std::io::Error) -> Self {
        CheckpointError::Io(e)
    }
}

pub fn save(path: &Path, grid: &RadialGrid, t: f64, u: &RadialField) -> Result<(), CheckpointError> {
    let mut out = String::with_capacity(48 * grid.n_points());
    out.push_str(HEADER);
    out.push('\n');
    out.push_str(&format!("n_points {}\n", grid.n_points()));
    out.push_str(&format!("r_max {}\n", format_f64(grid.r_max())));
    out.push_str(&format!("t {}\n", format_f64(t)));
    for z in u.samples() {
        out.push_str(&format_f64(z.re));
        out.push(' ');
        out.push_str(&format_f64(z.im));
        out.push('\n');
    }
    let mut f = std::fs::File::create(path)?;
    f.write_all(out.as_bytes())?;
    f.flush()?;
    Ok(())
}

fn want_line<'a>(
    lines: &mut impl Iterator<Item = &'a str>,
    line: usize,
    what: &str,
) -> Result<&'a str, CheckpointError> {
    lines
        .next()
        .ok_or_else(|| CheckpointError::Truncated { line, what: format!("missing {what}") })
}

fn parse_field(s: &str, line: usize) -> Result<f64, CheckpointError> {
    s.parse().map_err(|_| CheckpointError::Truncated {
        line,
        what: format!("bad float {s:?}"),
    })
}

pub fn load(path: &Path, grid: &RadialGrid) -> Result<(f64, RadialField), CheckpointError> {
    let text = std::fs::read_to_string(path)?;
    let mut lines = text.lines();
    let header = lines.next().unwrap_or("");
    if header != HEADER {
        return Err(CheckpointError::VersionMismatch { got: header.to_string() });
    }
    let n_line = want_line(&mut lines, 2, "n_points")?;
    let n_points: usize = n_line
        .strip_prefix("n_points")
        .map(str::trim)
        .and_then(|s| s.parse().ok())
        .ok_or(CheckpointError::Truncated { line: 2, what: "bad n_points".into() })?;
    let r_line = want_line(&mut lines, 3, "r_max")?;
    let r_max = parse_field(
        r_line
            .strip_prefix("r_max")
            .map(str::trim)
            .ok_or(CheckpointError::Truncated { line: 3, what: "bad r_max".into() })?,
        3,
    )?;
    if n_points != grid.n_points() || r_max != grid.r_max() {
        return Err(CheckpointError::GridMismatch {
            file_n: n_points,
            file_r: r_max,
            want_n: grid.n_points(),
            want_r: grid.r_max(),
        });
    }
    let t_line = want_line(&mut lines, 4, "t")?;
    let t = parse_field(
        t_line
            .strip_prefix("t")
            .map(str::trim)
            .ok_or(CheckpointError::Truncated { line: 4, what: "bad t".into() })?,
        4,
    )?;
    let mut samples = Vec::with_capacity(n_points);
    for (k, raw) in lines.enumerate() {
        let line_no = 5 + k;
        let raw = raw.trim();
        if raw.is_empty() {
            continue;
        }
        let (re, im) = raw.split_once(' ').ok_or(CheckpointError::Truncated {
            line: line_no,
            what: format!("expected `re im`, got {raw:?}"),
        })?;
        samples.push(Complex64::new(
            parse_field(re.trim(), line_no)?,
            parse_field(im.trim(), line_no)?,
        ));
    }
    if samples.len() != n_points {
        return Err(CheckpointError::Truncated {
            line: 5 + samples.len(),
            what: format!("expected {n_points} node lines, got {}", samples.len()),
        });
    }
    let field = RadialField::new(grid, samples).map_err(|e| CheckpointError::Truncated {
        line: 5,
        what: e.to_string(),
    })?;
    Ok((t, field))
}
