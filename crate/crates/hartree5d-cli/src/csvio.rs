//! Trajectory CSV emission: fixed header, 17-significant-digit decimals,
//! flushed per row so a killed run leaves a readable prefix.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use hartree5d::TrajectorySample;

pub const CSV_HEADER: &str = "t,mass,energy,grad_norm_sq,eta,variance,variance_rate,z_R,tail_mass_outer,dt";

pub struct TrajectoryWriter {
    out: BufWriter<File>,
}

fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

impl TrajectoryWriter {
    pub fn create(path: &Path) -> std::io::Result<Self> {
        let mut out = BufWriter::new(File::create(path)?);
        writeln!(out, "{CSV_HEADER}")?;
        out.flush()?;
        Ok(TrajectoryWriter { out })
    }

    /// Writes one row with an offset added to the sample time (nonzero when
    /// resuming from a checkpoint).
    pub fn write_row(&mut self, s: &TrajectorySample, t_offset: f64) -> std::io::Result<()> {
        writeln!(
            self.out,
            "{},{},{},{},{},{},{},{},{},{}",
            fmt(t_offset + s.t),
            fmt(s.mass),
            fmt(s.energy),
            fmt(s.grad_norm_sq),
            fmt(s.eta),
            fmt(s.variance),
            fmt(s.variance_rate),
            fmt(s.z_r),
            fmt(s.tail_mass_outer),
            fmt(s.dt_used),
        )?;
        self.out.flush()
    }
}

/// Parses a trajectory CSV back into rows (used by tests and the resume
/// comparison tooling).
pub fn read_rows(path: &Path) -> std::io::Result<Vec<Vec<f64>>> {
    let text = std::fs::read_to_string(path)?;
    let mut lines = text.lines();
    let header = lines.next().unwrap_or("");
    if header != CSV_HEADER {
        return Err(std::io::Error::new(
            std::io::ErrorKind::InvalidData,
            format!("bad CSV header {header:?}"),
        ));
    }
    let mut rows = Vec::new();
    for line in lines {
        if line.trim().is_empty() {
            continue;
        }
        let row: Result<Vec<f64>, _> = line.split(',').map(|v| v.trim().parse::<f64>()).collect();
        rows.push(row.map_err(|e| {
            std::io::Error::new(std::io::ErrorKind::InvalidData, format!("bad row: {e}"))
        })?);
    }
    Ok(rows)
}
