//! Conserved quantities, the normalized gradient indicator eta, the
//! mass-energy ratio, the cubic threshold roots, and the regime classifier.
//!
//! The dichotomy machinery compares eta = ||grad u|| ||u|| / (||grad Q|| ||Q||)
//! against the two roots lambda_- < 1 < lambda of 3 l^2 - 2 l^3 = ratio,
//! where ratio = M(u)E(u) / (M(Q)E(Q)). Sub-threshold data (ratio < 1) must
//! have eta on one side or the other for all time; which side is decided by
//! the initial data.

use crate::error::FunctionalsError;
use crate::grid::{RadialField, RadialGrid};
use crate::ground_state::GroundState;
use crate::potential::lv_quartic;

/// Mass, kinetic, interaction and energy functionals of one field.
/// Momentum is identically zero for radial fields (the angular integral of
/// Im(conj(u) grad u) vanishes) and is carried only for completeness.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConservedSet {
    pub mass: f64,
    pub kinetic: f64,
    pub lv4: f64,
    pub energy: f64,
    pub momentum: [f64; 5],
}

/// mass = int |u|^2, kinetic = int |du/dr|^2, lv4 = ||u||_{L^V}^4,
/// energy = kinetic/2 - lv4/4.
pub fn conserved_set(grid: &RadialGrid, u: &RadialField) -> ConservedSet {
    let mass = grid.moment(u, 0);
    let kinetic = grid.kinetic(u);
    let lv4 = lv_quartic(grid, u);
    ConservedSet {
        mass,
        kinetic,
        lv4,
        energy: 0.5 * kinetic - 0.25 * lv4,
        momentum: [0.0; 5],
    }
}

/// eta = sqrt(kinetic(u) mass(u)) / sqrt(kinetic(Q) mass(Q)).
pub fn eta(grid: &RadialGrid, u: &RadialField, gs: &GroundState) -> f64 {
    let mass = grid.moment(u, 0);
    let kinetic = grid.kinetic(u);
    (kinetic * mass).sqrt() / (gs.kinetic * gs.mass).sqrt()
}

/// Default tolerance for the two-sided eta bound check and the classifier.
pub const CLASSIFY_TOL: f64 = 1e-6;

/// M(u)E(u) / (M(Q)E(Q)), checked against the two-sided bound
/// 3 eta^2 >= ratio >= 3 eta^2 - 2 eta^3. A violation beyond `tol`
/// (relative to the bound scale) means the ground-state constants or the
/// quadrature are broken, and is reported as an error.
pub fn mass_energy_ratio(
    grid: &RadialGrid,
    u: &RadialField,
    gs: &GroundState,
    tol: f64,
) -> Result<f64, FunctionalsError> {
    if gs.energy <= 0.0 {
        return Err(FunctionalsError::BadGroundState { energy: gs.energy });
    }
    let cs = conserved_set(grid, u);
    let ratio = cs.mass * cs.energy / (gs.mass * gs.energy);
    let e = eta(grid, u, gs);
    let upper = 3.0 * e * e;
    let lower = upper - 2.0 * e * e * e;
    let scale = upper.max(1.0);
    if ratio > upper + tol * scale || ratio < lower - tol * scale {
        return Err(FunctionalsError::InconsistentSandwich { ratio, lower, upper });
    }
    Ok(ratio)
}

/// Roots of 3 l^2 - 2 l^3 = ratio. `lambda_minus` lives in [0, 1) and exists
/// only for ratio >= 0; `lambda` lives in (1, inf) and exists for every
/// ratio < 1 (negative-energy data included).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdRoots {
    pub ratio: f64,
    pub lambda_minus: Option<f64>,
    pub lambda: f64,
}

fn cubic(l: f64) -> f64 {
    3.0 * l * l - 2.0 * l * l * l
}

fn cubic_deriv(l: f64) -> f64 {
    6.0 * l - 6.0 * l * l
}

/// Safeguarded Newton iteration on a bracket known to contain exactly one
/// root of cubic(l) = ratio. Falls back to bisection whenever the Newton
/// step leaves the bracket or stalls.
fn solve_cubic_on(mut lo: f64, mut hi: f64, ratio: f64) -> f64 {
    let mut x = 0.5 * (lo + hi);
    for _ in 0..200 {
        let f = cubic(x) - ratio;
        if f.abs() < 1e-13 {
            return x;
        }
        // keep the bracket: the root is where f changes sign
        let f_lo = cubic(lo) - ratio;
        if (f_lo > 0.0) == (f > 0.0) {
            lo = x;
        } else {
            hi = x;
        }
        let d = cubic_deriv(x);
        let newton = if d != 0.0 { x - f / d } else { f64::NAN };
        x = if newton.is_finite() && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if hi - lo <= f64::EPSILON * hi.abs().max(1.0) {
            break;
        }
    }
    x
}

/// Solves 3 l^2 - 2 l^3 = ratio for both branches. Rejects ratio >= 1
/// (the double root at l = 1 marks the boundary of the theory).
pub fn threshold_roots(ratio: f64) -> Result<ThresholdRoots, FunctionalsError> {
    if !(ratio < 1.0) {
        return Err(FunctionalsError::RatioOutOfRange { ratio });
    }
    let lambda_minus = if ratio >= 0.0 {
        // cubic is increasing on [0, 1]: cubic(0) = 0, cubic(1) = 1
        Some(if ratio == 0.0 { 0.0 } else { solve_cubic_on(0.0, 1.0, ratio) })
    } else {
        None
    };
    // cubic is decreasing on [1, inf): bracket outward until it drops below
    let mut hi = 1.5;
    while cubic(hi) > ratio {
        hi *= 2.0;
    }
    let lambda = solve_cubic_on(1.0, hi, ratio);
    Ok(ThresholdRoots { ratio, lambda_minus, lambda })
}

/// Verdict of the dichotomy classifier.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Regime {
    /// eta(0) <= lambda_- : global, gradient stays below the threshold.
    GlobalBounded { lambda_minus: f64 },
    /// eta(0) >= lambda : gradient stays above the threshold; divergence
    /// (finite-time or along a sequence) is expected.
    DivergentRegime { lambda: f64 },
    /// ratio >= 1: outside the hypotheses of the dichotomy.
    OutOfTheory,
    /// eta(0) strictly between the roots: forbidden by the two-sided bound,
    /// signals corrupted inputs rather than a physical regime.
    Inconsistent,
}

/// Classifies initial data by ratio and eta(0) with tolerance bands around
/// the strict inequalities.
pub fn classify(
    grid: &RadialGrid,
    u0: &RadialField,
    gs: &GroundState,
    tol: f64,
) -> Result<Regime, FunctionalsError> {
    let ratio = mass_energy_ratio(grid, u0, gs, tol.max(CLASSIFY_TOL))?;
    if ratio >= 1.0 - tol {
        return Ok(Regime::OutOfTheory);
    }
    let roots = threshold_roots(ratio)?;
    let e0 = eta(grid, u0, gs);
    if let Some(lm) = roots.lambda_minus {
        if e0 <= lm + tol {
            return Ok(Regime::GlobalBounded { lambda_minus: lm });
        }
    }
    if e0 >= roots.lambda - tol {
        return Ok(Regime::DivergentRegime { lambda: roots.lambda });
    }
    Ok(Regime::Inconsistent)
}
