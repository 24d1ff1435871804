//! Initial-data construction from the scenario presets.

use num_complex::Complex64;

use hartree5d::{GroundState, RadialField, RadialGrid};

use crate::config::Preset;

/// Builds the initial field. `scaled_q` multiplies the computed profile by a
/// real amplitude, which keeps the scaling algebra of the dichotomy exact.
pub fn build_initial_data(grid: &RadialGrid, preset: Preset, gs: &GroundState) -> RadialField {
    match preset {
        Preset::ScaledQ { a } => gs.field.scaled(Complex64::new(a, 0.0)),
        Preset::Gaussian { amplitude, width } => {
            let vals: Vec<f64> = grid
                .nodes()
                .iter()
                .map(|&r| amplitude * (-r * r / (2.0 * width * width)).exp())
                .collect();
            RadialField::from_real(grid, &vals).expect("gaussian preset samples are finite")
        }
        Preset::PhaseGaussian { amplitude, width, chirp } => {
            let samples: Vec<Complex64> = grid
                .nodes()
                .iter()
                .map(|&r| {
                    Complex64::from_polar(
                        amplitude * (-r * r / (2.0 * width * width)).exp(),
                        chirp * r * r,
                    )
                })
                .collect();
            RadialField::new(grid, samples).expect("chirped preset samples are finite")
        }
        Preset::Zero => RadialField::zero(grid),
    }
}
