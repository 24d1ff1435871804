//! Nonlocal interaction potential Phi = |x|^{-3} * rho for radial densities.
//!
//! |x|^{-3} is the Newton kernel of R^5, so the spherical mean-value property
//! collapses the 5D convolution to two cumulative 1D integrals:
//!
//!   Phi(r) = omega * ( r^{-3} int_0^r rho(s) s^4 ds  +  int_r^inf rho(s) s ds ),
//!
//! one O(N) prefix pass and one O(N) suffix pass. Beyond the mesh the density
//! is taken to vanish, so the suffix integral truncates at r_max. At the
//! origin the first term is O(r^2) and drops out.

use crate::error::GridError;
use crate::grid::{RadialField, RadialGrid, OMEGA_S4};

/// Real potential samples Phi(r_i) on the grid of the source density.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialField {
    values: Vec<f64>,
}

impl PotentialField {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }
}

/// Evaluates Phi = |x|^{-3} * rho by the two-pass cumulative trapezoid rule.
pub fn newton_potential(grid: &RadialGrid, rho: &[f64]) -> PotentialField {
    assert_eq!(rho.len(), grid.n_points(), "density length mismatch");
    let r = grid.nodes();
    let h = grid.spacing();
    let n = grid.n_points();

    // prefix[i] = int_0^{r_i} rho s^4 ds
    let mut prefix = vec![0.0; n];
    for i in 1..n {
        let a = rho[i - 1] * r[i - 1].powi(4);
        let b = rho[i] * r[i].powi(4);
        prefix[i] = prefix[i - 1] + 0.5 * h * (a + b);
    }
    // suffix[i] = int_{r_i}^{r_max} rho s ds
    let mut suffix = vec![0.0; n];
    for i in (0..n - 1).rev() {
        let a = rho[i] * r[i];
        let b = rho[i + 1] * r[i + 1];
        suffix[i] = suffix[i + 1] + 0.5 * h * (a + b);
    }

    let values = (0..n)
        .map(|i| {
            if i == 0 {
                OMEGA_S4 * suffix[0]
            } else {
                OMEGA_S4 * (prefix[i] / r[i].powi(3) + suffix[i])
            }
        })
        .collect();
    PotentialField { values }
}

/// Interaction quartic ||u||_{L^V}^4 = int Phi_{|u|^2} |u|^2 dmu, the double
/// integral of |u(x)|^2 |x-y|^{-3} |u(y)|^2.
pub fn lv_quartic(grid: &RadialGrid, u: &RadialField) -> f64 {
    let rho = u.density();
    let phi = newton_potential(grid, &rho);
    let integrand: Vec<f64> = phi.values().iter().zip(&rho).map(|(p, d)| p * d).collect();
    grid.integrate(&integrand)
}

/// Tail of the interaction quartic with the *outer* integration variable
/// restricted to r > R: int_{r > R} Phi_{|u|^2}(r) |u(r)|^2 dmu. Restricting
/// one variable (not both) matches how the localized blow-up criteria use
/// the quantity; restricting both would under-count the coupling.
pub fn tail_lv_quartic(grid: &RadialGrid, u: &RadialField, r_cut: f64) -> Result<f64, GridError> {
    let rho = u.density();
    let phi = newton_potential(grid, &rho);
    let integrand: Vec<f64> = phi.values().iter().zip(&rho).map(|(p, d)| p * d).collect();
    grid.tail_integral(&integrand, r_cut)
}
