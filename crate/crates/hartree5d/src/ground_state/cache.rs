//! Disk cache for computed ground states, keyed by (n_points, r_max, tol).
//!
//! Structured text, one value per line, 17 significant digits so the f64
//! bits survive a round trip:
//!
//! ```text
//! hartree5d-gs v1
//! n_points 4096
//! r_max 3.0000000000000000e1
//! tol 9.9999999999999998e-9
//! mass <...>
//! kinetic <...>
//! lv4 <...>
//! energy <...>
//! c_hls <...>
//! <Q at node 0>
//! ...
//! ```

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::CacheError;
use crate::grid::{RadialField, RadialGrid};
use crate::ground_state::{solve_ground_state, GroundState, GroundStateError, SolverParams};

pub const HEADER: &str = "hartree5d-gs v1";

/// 17 significant digits, enough to reproduce the f64 exactly on parse.
pub fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn save(path: &Path, grid: &RadialGrid, tol: f64, gs: &GroundState) -> Result<(), CacheError> {
    let mut out = String::new();
    out.push_str(HEADER);
    out.push('\n');
    out.push_str(&format!("n_points {}\n", grid.n_points()));
    out.push_str(&format!("r_max {}\n", format_f64(grid.r_max())));
    out.push_str(&format!("tol {}\n", format_f64(tol)));
    out.push_str(&format!("mass {}\n", format_f64(gs.mass)));
    out.push_str(&format!("kinetic {}\n", format_f64(gs.kinetic)));
    out.push_str(&format!("lv4 {}\n", format_f64(gs.lv4)));
    out.push_str(&format!("energy {}\n", format_f64(gs.energy)));
    out.push_str(&format!("c_hls {}\n", format_f64(gs.c_hls)));
    for z in gs.field.samples() {
        out.push_str(&format_f64(z.re));
        out.push('\n');
    }
    let mut f = fs::File::create(path)?;
    f.write_all(out.as_bytes())?;
    Ok(())
}

fn parse_kv<'a>(
    line: Option<&'a str>,
    key: &str,
    line_no: usize,
) -> Result<&'a str, CacheError> {
    let line = line.ok_or(CacheError::Malformed {
        line: line_no,
        what: format!("missing `{key}` line"),
    })?;
    line.strip_prefix(key)
        .map(str::trim)
        .ok_or(CacheError::Malformed {
            line: line_no,
            what: format!("expected `{key} <value>`, got {line:?}"),
        })
}

fn parse_f64(s: &str, line_no: usize) -> Result<f64, CacheError> {
    s.parse().map_err(|_| CacheError::Malformed {
        line: line_no,
        what: format!("bad float {s:?}"),
    })
}

/// Loads a cached ground state, verifying the header and the grid key.
pub fn load(path: &Path, grid: &RadialGrid, tol: f64) -> Result<GroundState, CacheError> {
    let text = fs::read_to_string(path)?;
    let mut lines = text.lines();
    let header = lines.next().unwrap_or("");
    if header != HEADER {
        return Err(CacheError::VersionMismatch {
            expected: HEADER.to_string(),
            got: header.to_string(),
        });
    }
    let n_points: usize = parse_kv(lines.next(), "n_points", 2)?
        .parse()
        .map_err(|_| CacheError::Malformed { line: 2, what: "bad n_points".into() })?;
    let r_max = parse_f64(parse_kv(lines.next(), "r_max", 3)?, 3)?;
    let file_tol = parse_f64(parse_kv(lines.next(), "tol", 4)?, 4)?;
    if n_points != grid.n_points() || r_max != grid.r_max() || file_tol != tol {
        return Err(CacheError::GridMismatch {
            file_n: n_points,
            file_r: r_max,
            want_n: grid.n_points(),
            want_r: grid.r_max(),
        });
    }
    let mass = parse_f64(parse_kv(lines.next(), "mass", 5)?, 5)?;
    let kinetic = parse_f64(parse_kv(lines.next(), "kinetic", 6)?, 6)?;
    let lv4 = parse_f64(parse_kv(lines.next(), "lv4", 7)?, 7)?;
    let energy = parse_f64(parse_kv(lines.next(), "energy", 8)?, 8)?;
    let c_hls = parse_f64(parse_kv(lines.next(), "c_hls", 9)?, 9)?;
    let mut values = Vec::with_capacity(n_points);
    for (k, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        values.push(parse_f64(line.trim(), 10 + k)?);
    }
    if values.len() != n_points {
        return Err(CacheError::Malformed {
            line: 10 + values.len(),
            what: format!("expected {n_points} node values, got {}", values.len()),
        });
    }
    let field = RadialField::from_real(grid, &values).map_err(|e| CacheError::Malformed {
        line: 10,
        what: e.to_string(),
    })?;
    Ok(GroundState { field, mass, kinetic, lv4, energy, c_hls, iterations: 0 })
}

/// Loads from `path` when the key matches, otherwise solves and saves.
/// Returns the state together with a cache-hit flag.
pub fn solve_or_load(
    grid: &RadialGrid,
    params: SolverParams,
    path: &Path,
) -> Result<(GroundState, bool), GroundStateError> {
    if path.exists() {
        if let Ok(gs) = load(path, grid, params.tol) {
            return Ok((gs, true));
        }
    }
    let gs = solve_ground_state(grid, params)?;
    // failure to write the cache is not fatal for the computation
    let _ = save(path, grid, params.tol, &gs);
    Ok((gs, false))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::path::PathBuf;

    fn tmp(name: &str) -> PathBuf {
        let mut p = std::env::temp_dir();
        p.push(format!("hartree5d-cache-test-{}-{name}", std::process::id()));
        p
    }

    #[test]
    fn round_trip_is_bit_exact() {
        let grid = RadialGrid::new(512, 20.0).unwrap();
        let gs = solve_ground_state(&grid, SolverParams { tol: 1e-6, max_iters: 500 }).unwrap();
        let p = tmp("rt");
        save(&p, &grid, 1e-6, &gs).unwrap();
        let back = load(&p, &grid, 1e-6).unwrap();
        for (a, b) in gs.field.samples().iter().zip(back.field.samples()) {
            assert_eq!(a.re.to_bits(), b.re.to_bits());
        }
        assert_eq!(gs.mass.to_bits(), back.mass.to_bits());
        assert_eq!(gs.c_hls.to_bits(), back.c_hls.to_bits());
        std::fs::remove_file(&p).ok();
    }

    #[test]
    fn version_and_grid_mismatch() {
        let grid = RadialGrid::new(256, 20.0).unwrap();
        let gs = solve_ground_state(&grid, SolverParams { tol: 1e-6, max_iters: 500 }).unwrap();
        let p = tmp("mismatch");
        save(&p, &grid, 1e-6, &gs).unwrap();

        let other = RadialGrid::new(300, 20.0).unwrap();
        assert!(matches!(
            load(&p, &other, 1e-6),
            Err(CacheError::GridMismatch { .. })
        ));

        let text = std::fs::read_to_string(&p).unwrap();
        let bad = text.replacen("hartree5d-gs v1", "hartree5d-gs v9", 1);
        std::fs::write(&p, bad).unwrap();
        assert!(matches!(
            load(&p, &grid, 1e-6),
            Err(CacheError::VersionMismatch { .. })
        ));

        // truncation
        let mut lines: Vec<&str> = text.lines().collect();
        lines.truncate(lines.len() - 3);
        std::fs::write(&p, lines.join("\n")).unwrap();
        assert!(matches!(load(&p, &grid, 1e-6), Err(CacheError::Malformed { .. })));
        std::fs::remove_file(&p).ok();
    }

    #[test]
    fn solve_or_load_hits_cache() {
        let grid = RadialGrid::new(256, 20.0).unwrap();
        let p = tmp("hit");
        std::fs::remove_file(&p).ok();
        let params = SolverParams { tol: 1e-6, max_iters: 500 };
        let (g1, hit1) = solve_or_load(&grid, params, &p).unwrap();
        assert!(!hit1);
        let (g2, hit2) = solve_or_load(&grid, params, &p).unwrap();
        assert!(hit2);
        assert_eq!(g1.mass.to_bits(), g2.mass.to_bits());
        std::fs::remove_file(&p).ok();
    }
}
