//! Variance and truncated-variance diagnostics, the cutoff profile, and the
//! three blow-up-time estimators.
//!
//! The unscaled variance V(t) = || |x| u ||_2^2 obeys
//! V'' = 24 E - 4 ||grad u||^2 = 8 ||grad u||^2 - 6 ||u||_{L^V}^4; once the
//! right side is forced negative, V hits zero in finite time and the solution
//! cannot persist. The truncated variant z_R(t) = int R^2 phi(r/R) |u|^2
//! replaces |x|^2 by a cutoff quadratic and picks up a remainder A_R
//! controlled by tail mass and tail interaction energy. Each estimator
//! returns the positive root t_b of -t^2/2 + r'(0) t + r(0).

use crate::error::{CutoffError, VirialError};
use crate::grid::{RadialField, RadialGrid};
use crate::ground_state::GroundState;
use crate::potential::tail_lv_quartic;

/// Parameters of the cutoff blend. The profile is s^2 up to s = 1, glued to
/// zero value/slope/curvature at `s_outer` by a single quintic, and zero
/// beyond. `curvature_cap` is the admissibility bound on phi'' checked over
/// the sample scan.
///
/// No quintic on [1, 2] can satisfy phi'' <= 2: the endpoint data force
/// int (s-1) phi'' ds = 1 over the blend interval, and with phi'' <= 2 that
/// integral cannot reach 1 unless the interval is longer than 1. The default
/// therefore fails the strict cap by construction; callers wanting the strict
/// cap must widen the blend (see [`CutoffProfile::standard`]).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutoffBlend {
    pub s_outer: f64,
    pub curvature_cap: f64,
    pub n_samples: usize,
    /// Extra sampled range beyond `s_outer`.
    pub margin: f64,
}

impl Default for CutoffBlend {
    fn default() -> Self {
        CutoffBlend {
            s_outer: 2.0,
            curvature_cap: 2.0 + 1e-9,
            n_samples: 4096,
            margin: 0.5,
        }
    }
}

/// C^2 cutoff profile with sampled scans of phi, phi', phi''.
#[derive(Debug, Clone, PartialEq)]
pub struct CutoffProfile {
    blend: CutoffBlend,
    /// Quintic coefficients in y = (s - 1)/(s_outer - 1).
    coeff: [f64; 3],
    pub s_samples: Vec<f64>,
    pub phi_samples: Vec<f64>,
    pub dphi_samples: Vec<f64>,
    pub ddphi_samples: Vec<f64>,
}

impl CutoffProfile {
    pub fn phi(&self, s: f64) -> f64 {
        let l = self.blend.s_outer - 1.0;
        if s <= 1.0 {
            s * s
        } else if s >= self.blend.s_outer {
            0.0
        } else {
            let y = (s - 1.0) / l;
            let [a, b, c] = self.coeff;
            1.0 + 2.0 * l * y + l * l * y * y + y * y * y * (a + y * (b + y * c))
        }
    }

    pub fn dphi(&self, s: f64) -> f64 {
        let l = self.blend.s_outer - 1.0;
        if s <= 1.0 {
            2.0 * s
        } else if s >= self.blend.s_outer {
            0.0
        } else {
            let y = (s - 1.0) / l;
            let [a, b, c] = self.coeff;
            (2.0 * l + 2.0 * l * l * y + y * y * (3.0 * a + y * (4.0 * b + y * 5.0 * c))) / l
        }
    }

    pub fn ddphi(&self, s: f64) -> f64 {
        let l = self.blend.s_outer - 1.0;
        if s <= 1.0 {
            2.0
        } else if s >= self.blend.s_outer {
            0.0
        } else {
            let y = (s - 1.0) / l;
            let [a, b, c] = self.coeff;
            (2.0 * l * l + y * (6.0 * a + y * (12.0 * b + y * 20.0 * c))) / (l * l)
        }
    }

    pub fn s_outer(&self) -> f64 {
        self.blend.s_outer
    }

    /// Widest-used admissible profile: blend over [1, 4.5], which the scan
    /// certifies against phi'' <= 2 + 1e-9 and phi >= 0.
    pub fn standard() -> CutoffProfile {
        build_cutoff(CutoffBlend { s_outer: 4.5, ..CutoffBlend::default() })
            .expect("the widened blend satisfies the curvature cap")
    }
}

/// Builds the profile and scans the constraints at the sample points.
pub fn build_cutoff(blend: CutoffBlend) -> Result<CutoffProfile, CutoffError> {
    if !(blend.s_outer > 1.0 && blend.s_outer <= 16.0) {
        return Err(CutoffError::BadParameter {
            what: format!("s_outer = {} outside (1, 16]", blend.s_outer),
        });
    }
    if blend.n_samples < 16 {
        return Err(CutoffError::BadParameter {
            what: format!("n_samples = {} too small", blend.n_samples),
        });
    }
    let l = blend.s_outer - 1.0;
    // quintic in y = (s-1)/L matching (1, 2L, 2L^2) at y=0 and (0,0,0) at y=1
    let coeff = [
        -(10.0 + 12.0 * l + 3.0 * l * l),
        15.0 + 16.0 * l + 3.0 * l * l,
        -(6.0 + 6.0 * l + l * l),
    ];
    let mut profile = CutoffProfile {
        blend,
        coeff,
        s_samples: Vec::new(),
        phi_samples: Vec::new(),
        dphi_samples: Vec::new(),
        ddphi_samples: Vec::new(),
    };
    let s_max = blend.s_outer + blend.margin;
    for k in 0..blend.n_samples {
        let s = s_max * k as f64 / (blend.n_samples - 1) as f64;
        profile.s_samples.push(s);
        profile.phi_samples.push(profile.phi(s));
        profile.dphi_samples.push(profile.dphi(s));
        profile.ddphi_samples.push(profile.ddphi(s));
    }
    let (mut worst_dd, mut at_dd) = (f64::NEG_INFINITY, 0.0);
    let (mut worst_phi, mut at_phi) = (f64::INFINITY, 0.0);
    for (s, (&p, &dd)) in profile
        .s_samples
        .iter()
        .zip(profile.phi_samples.iter().zip(&profile.ddphi_samples))
    {
        if dd > worst_dd {
            worst_dd = dd;
            at_dd = *s;
        }
        if p < worst_phi {
            worst_phi = p;
            at_phi = *s;
        }
    }
    if worst_dd > blend.curvature_cap {
        return Err(CutoffError::ConstraintViolated {
            constraint: "phi'' <= curvature cap".into(),
            worst: worst_dd,
            at: at_dd,
        });
    }
    if worst_phi < -1e-12 {
        return Err(CutoffError::ConstraintViolated {
            constraint: "phi >= 0".into(),
            worst: worst_phi,
            at: at_phi,
        });
    }
    Ok(profile)
}

/// Localization parameters for the truncated-variance estimators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VirialConfig {
    /// Absolute constant in the remainder bound. Not derivable from theory;
    /// reported alongside every estimate so users can rescale.
    pub c_local: f64,
    /// Absolute constant of the radial endpoint bound; the radial estimator
    /// uses the larger of the two constants.
    pub c_sobolev: f64,
    pub gamma: f64,
    pub r_virial: f64,
}

impl Default for VirialConfig {
    fn default() -> Self {
        VirialConfig { c_local: 1.0, c_sobolev: 1.0, gamma: 0.1, r_virial: 10.0 }
    }
}

/// || |x| u ||_2^2.
pub fn variance(grid: &RadialGrid, u: &RadialField) -> f64 {
    grid.moment(u, 2)
}

/// d/dt || |x| u ||_2^2 = 4 Im int r conj(u) du/dr dmu.
pub fn variance_rate(grid: &RadialGrid, u: &RadialField) -> f64 {
    let d = grid.radial_derivative(u);
    let integrand: Vec<f64> = u
        .samples()
        .iter()
        .zip(d.samples().iter().zip(grid.nodes()))
        .map(|(ui, (di, r))| r * (ui.conj() * di).im)
        .collect();
    4.0 * grid.integrate(&integrand)
}

/// Truncated variance z_R = int R^2 phi(r/R) |u|^2 dmu.
pub fn z_r(grid: &RadialGrid, u: &RadialField, r_scale: f64, phi: &CutoffProfile) -> f64 {
    let integrand: Vec<f64> = u
        .samples()
        .iter()
        .zip(grid.nodes())
        .map(|(ui, r)| r_scale * r_scale * phi.phi(r / r_scale) * ui.norm_sqr())
        .collect();
    grid.integrate(&integrand)
}

/// d/dt z_R = 2 R int phi'(r/R) Im(conj(u) du/dr) dmu. Reduces to
/// `variance_rate` when the support of u sits in the quadratic region.
pub fn z_r_rate(grid: &RadialGrid, u: &RadialField, r_scale: f64, phi: &CutoffProfile) -> f64 {
    let d = grid.radial_derivative(u);
    let integrand: Vec<f64> = u
        .samples()
        .iter()
        .zip(d.samples().iter().zip(grid.nodes()))
        .map(|(ui, (di, r))| phi.dphi(r / r_scale) * (ui.conj() * di).im)
        .collect();
    2.0 * r_scale * grid.integrate(&integrand)
}

/// Remainder bound c ( R^{-2} ||u||^2_{L^2(r>R)} + ||u||^4_{L^V(r>R)} ).
pub fn a_r_bound(
    grid: &RadialGrid,
    u: &RadialField,
    r_cut: f64,
    cfg: &VirialConfig,
) -> Result<f64, VirialError> {
    let tail_mass = grid.tail_l2_sq(u, r_cut)?;
    let tail_lv = tail_lv_quartic(grid, u, r_cut)?;
    Ok(cfg.c_local * (tail_mass / (r_cut * r_cut) + tail_lv))
}

fn positive_root(r0: f64, r0_rate: f64) -> f64 {
    r0_rate + (r0_rate * r0_rate + 2.0 * r0).sqrt()
}

/// Blow-up time bound from the full variance: with
/// r(t) = || |x| u ||^2 / (48 lambda^2 (lambda - 1) E_Q), concavity forces
/// blow-up before r'(0) + sqrt(r'(0)^2 + 2 r(0)).
pub fn tb_finite_variance(
    variance0: f64,
    rate0: f64,
    lambda: f64,
    e_q: f64,
) -> Result<f64, VirialError> {
    if !(lambda > 1.0) {
        return Err(VirialError::LambdaNotSupercritical { lambda });
    }
    let scale = 48.0 * lambda * lambda * (lambda - 1.0) * e_q;
    Ok(positive_root(variance0 / scale, rate0 / scale))
}

/// Successful estimate from one of the localized criteria.
#[derive(Debug, Clone, PartialEq)]
pub struct TbEstimate {
    pub t_b: f64,
    /// Scaled (truncated) variance and its rate at t = 0.
    pub r0: f64,
    pub r0_rate: f64,
    /// Which radius constraint was binding, for the radial criterion.
    pub binding: Option<String>,
    /// True when a for-all-time hypothesis was only checked at t = 0
    /// (and optionally along a recorded trajectory).
    pub conditional: bool,
}

/// Estimate or the reason the criterion's hypotheses fail on this data.
#[derive(Debug, Clone, PartialEq)]
pub enum TbOutcome {
    Estimate(TbEstimate),
    HypothesisFailed { hypothesis: String, measured: f64, required: f64 },
}

fn check_gamma(gamma: f64, lambda: f64) -> Result<(), VirialError> {
    let upper = (lambda - 1.0).min(1.0);
    if !(gamma > 0.0 && gamma < upper) {
        return Err(VirialError::GammaOutOfRange { gamma, upper });
    }
    Ok(())
}

/// Localized criterion: needs R >= sqrt(c / 6 gamma) and the tail
/// interaction below 6 gamma E_Q / c. The tail hypothesis is a for-all-time
/// assumption checked here at t = 0, so the estimate is conditional.
pub fn tb_localized(
    grid: &RadialGrid,
    u0: &RadialField,
    lambda: f64,
    cfg: &VirialConfig,
    gs: &GroundState,
    phi: &CutoffProfile,
) -> Result<TbOutcome, VirialError> {
    if !(lambda > 1.0) {
        return Err(VirialError::LambdaNotSupercritical { lambda });
    }
    check_gamma(cfg.gamma, lambda)?;
    let r_required = (cfg.c_local / (6.0 * cfg.gamma)).sqrt();
    if cfg.r_virial < r_required {
        return Ok(TbOutcome::HypothesisFailed {
            hypothesis: "R lower bound".into(),
            measured: cfg.r_virial,
            required: r_required,
        });
    }
    let tail_bound = 6.0 * cfg.gamma * gs.energy / cfg.c_local;
    let tail = tail_lv_quartic(grid, u0, cfg.r_virial.min(grid.r_max()))?;
    if tail >= tail_bound {
        return Ok(TbOutcome::HypothesisFailed {
            hypothesis: "L^V tail".into(),
            measured: tail,
            required: tail_bound,
        });
    }
    let scale = 48.0 * lambda * lambda * (lambda - 1.0 - cfg.gamma) * gs.energy;
    let r0 = z_r(grid, u0, cfg.r_virial, phi) / scale;
    let r0_rate = z_r_rate(grid, u0, cfg.r_virial, phi) / scale;
    Ok(TbOutcome::Estimate(TbEstimate {
        t_b: positive_root(r0, r0_rate),
        r0,
        r0_rate,
        binding: None,
        conditional: true,
    }))
}

/// Radial criterion: the tail hypothesis is replaced by a radius threshold
/// R >= max( sqrt(c / 6 gamma), (c E_Q / 12 gamma)^{5/4} ) with c the larger
/// of the two constants.
pub fn tb_radial(
    grid: &RadialGrid,
    u0: &RadialField,
    lambda: f64,
    cfg: &VirialConfig,
    gs: &GroundState,
    phi: &CutoffProfile,
) -> Result<TbOutcome, VirialError> {
    if !(lambda > 1.0) {
        return Err(VirialError::LambdaNotSupercritical { lambda });
    }
    check_gamma(cfg.gamma, lambda)?;
    let c = cfg.c_local.max(cfg.c_sobolev);
    let r_curv = (c / (6.0 * cfg.gamma)).sqrt();
    let r_sobolev = (c * gs.energy / (12.0 * cfg.gamma)).powf(1.25);
    let (r_required, binding) = if r_curv >= r_sobolev {
        (r_curv, "sqrt(c/(6 gamma))")
    } else {
        (r_sobolev, "(c E_Q/(12 gamma))^(5/4)")
    };
    if cfg.r_virial < r_required {
        return Ok(TbOutcome::HypothesisFailed {
            hypothesis: "R lower bound".into(),
            measured: cfg.r_virial,
            required: r_required,
        });
    }
    let scale = 48.0 * lambda * lambda * (lambda - 1.0 - cfg.gamma) * gs.energy;
    let r0 = z_r(grid, u0, cfg.r_virial, phi) / scale;
    let r0_rate = z_r_rate(grid, u0, cfg.r_virial, phi) / scale;
    Ok(TbOutcome::Estimate(TbEstimate {
        t_b: positive_root(r0, r0_rate),
        r0,
        r0_rate,
        binding: Some(binding.into()),
        conditional: false,
    }))
}

/// Radial embedding quotient (max_r r^2 |u|)^2 / (||u||_2 ||grad u||_2).
pub fn radial_sobolev_quotient(grid: &RadialGrid, u: &RadialField) -> Result<f64, VirialError> {
    let mass = grid.moment(u, 0);
    if mass == 0.0 {
        return Err(VirialError::ZeroField);
    }
    let peak = u
        .samples()
        .iter()
        .zip(grid.nodes())
        .map(|(z, r)| r * r * z.norm())
        .fold(0.0f64, f64::max);
    let kinetic = grid.kinetic(u);
    Ok(peak * peak / (mass.sqrt() * kinetic.sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::ball_indicator_density;
    use num_complex::Complex64;
    use std::f64::consts::PI;

    fn gauss(grid: &RadialGrid) -> RadialField {
        let v: Vec<f64> = grid.nodes().iter().map(|&r| (-0.5 * r * r).exp()).collect();
        RadialField::from_real(grid, &v).unwrap()
    }

    #[test]
    fn cutoff_quadratic_region_and_outer_zero() {
        // the unit blend needs a relaxed cap (its curvature peaks near 10)
        let phi = build_cutoff(CutoffBlend {
            curvature_cap: 12.0,
            ..CutoffBlend::default()
        })
        .unwrap();
        assert_eq!(phi.phi(0.5), 0.25);
        assert_eq!(phi.dphi(0.5), 1.0);
        assert_eq!(phi.phi(2.5), 0.0);
        assert_eq!(phi.dphi(2.5), 0.0);
        // C^2 matching at the seams
        assert!((phi.phi(1.0 + 1e-9) - 1.0).abs() < 1e-8);
        assert!((phi.dphi(1.0 + 1e-9) - 2.0).abs() < 1e-7);
        assert!((phi.ddphi(1.0 + 1e-9) - 2.0).abs() < 1e-6);
        assert!(phi.phi(2.0 - 1e-9).abs() < 1e-12);
    }

    #[test]
    fn strict_cap_infeasible_on_unit_blend() {
        // the [1,2] blend cannot stay under phi'' <= 2; the builder reports it
        let err = build_cutoff(CutoffBlend::default());
        match err {
            Err(CutoffError::ConstraintViolated { constraint, worst, .. }) => {
                assert!(constraint.contains("curvature"));
                assert!(worst > 2.0);
            }
            other => panic!("expected curvature violation, got {other:?}"),
        }
    }

    #[test]
    fn standard_profile_meets_strict_cap() {
        let phi = CutoffProfile::standard();
        let worst = phi
            .ddphi_samples
            .iter()
            .cloned()
            .fold(f64::NEG_INFINITY, f64::max);
        assert!(worst <= 2.0 + 1e-9, "max phi'' = {worst}");
        assert!(phi.phi_samples.iter().all(|&p| p >= -1e-12));
        // nonneg and zero outside
        assert_eq!(phi.phi(4.5), 0.0);
        assert_eq!(phi.phi(0.3), 0.09);
    }

    #[test]
    fn variance_gaussian_and_scaling() {
        let g = RadialGrid::new(4096, 12.0).unwrap();
        let u = gauss(&g);
        let exact = 2.5 * PI.powf(2.5);
        let v = variance(&g, &u);
        assert!(((v - exact) / exact).abs() < 1e-6);
        assert_eq!(variance(&g, &RadialField::zero(&g)), 0.0);

        // lambda^{5/2} u(lambda r) has variance lambda^{-2} times the original
        let lam = 2.0f64;
        let scaled: Vec<f64> = g
            .nodes()
            .iter()
            .map(|&r| lam.powf(2.5) * (-0.5 * (lam * r) * (lam * r)).exp())
            .collect();
        let us = RadialField::from_real(&g, &scaled).unwrap();
        let vs = variance(&g, &us);
        assert!(((vs - v / (lam * lam)) / vs).abs() < 1e-6, "{vs} vs {}", v / 4.0);
    }

    #[test]
    fn variance_rate_real_field_vanishes() {
        let g = RadialGrid::new(1024, 10.0).unwrap();
        let u = gauss(&g);
        assert!(variance_rate(&g, &u).abs() < 1e-12);
    }

    #[test]
    fn variance_rate_chirped_gaussian() {
        // u = e^{-r^2/2} e^{i r^2}: rate = 8 int r^2 e^{-r^2} dmu = 20 pi^{5/2}
        let g = RadialGrid::new(8192, 14.0).unwrap();
        let s: Vec<Complex64> = g
            .nodes()
            .iter()
            .map(|&r| Complex64::from_polar((-0.5 * r * r).exp(), r * r))
            .collect();
        let u = RadialField::new(&g, s).unwrap();
        let exact = 20.0 * PI.powf(2.5);
        let got = variance_rate(&g, &u);
        assert!(((got - exact) / exact).abs() < 1e-4, "{got} vs {exact}");
    }

    #[test]
    fn z_r_matches_variance_inside_quadratic_region() {
        let g = RadialGrid::new(2048, 12.0).unwrap();
        let u = gauss(&g); // decays well before r = 12
        let phi = CutoffProfile::standard();
        let z = z_r(&g, &u, 12.0, &phi);
        let v = variance(&g, &u);
        assert!(((z - v) / v).abs() < 1e-10, "{z} vs {v}");
        assert_eq!(z_r(&g, &RadialField::zero(&g), 5.0, &phi), 0.0);
    }

    #[test]
    fn z_r_indicator_oracle() {
        // supp u inside {r <= R}: z_R = variance = omega/7
        let g = RadialGrid::new(4097, 4.0).unwrap();
        let d = ball_indicator_density(&g, 1.0);
        let amp: Vec<f64> = d.iter().map(|x| x.sqrt()).collect();
        let u = RadialField::from_real(&g, &amp).unwrap();
        let phi = CutoffProfile::standard();
        let exact = crate::grid::OMEGA_S4 / 7.0;
        let z = z_r(&g, &u, 1.0, &phi);
        assert!(((z - exact) / exact).abs() < 1e-3, "{z} vs {exact}");
    }

    #[test]
    fn z_r_bounded_by_peak_quadratic() {
        let g = RadialGrid::new(2048, 12.0).unwrap();
        let u = gauss(&g);
        let phi = CutoffProfile::standard();
        let max_phi = phi.phi_samples.iter().cloned().fold(0.0f64, f64::max);
        for r_scale in [0.5, 1.0, 2.0, 5.0] {
            let z = z_r(&g, &u, r_scale, &phi);
            assert!(z <= max_phi * r_scale * r_scale * g.moment(&u, 0) * (1.0 + 1e-12));
        }
    }

    #[test]
    fn z_r_rate_reduces_to_variance_rate() {
        let g = RadialGrid::new(4096, 12.0).unwrap();
        let s: Vec<Complex64> = g
            .nodes()
            .iter()
            .map(|&r| Complex64::from_polar((-r * r).exp(), 0.3 * r * r))
            .collect();
        let u = RadialField::new(&g, s).unwrap();
        let phi = CutoffProfile::standard();
        let a = z_r_rate(&g, &u, 12.0, &phi);
        let b = variance_rate(&g, &u);
        assert!(((a - b) / b).abs() < 1e-10, "{a} vs {b}");
    }

    #[test]
    fn a_r_bound_linear_in_c_and_zero_inside() {
        let g = RadialGrid::new(2049, 8.0).unwrap();
        let d = ball_indicator_density(&g, 1.0);
        let amp: Vec<f64> = d.iter().map(|x| x.sqrt()).collect();
        let u = RadialField::from_real(&g, &amp).unwrap();
        let mut cfg = VirialConfig { r_virial: 2.0, ..VirialConfig::default() };
        let b1 = a_r_bound(&g, &u, 2.0, &cfg).unwrap();
        assert!(b1.abs() < 1e-12, "support inside R gives zero bound: {b1}");

        let ug = gauss(&g);
        cfg.c_local = 1.0;
        let one = a_r_bound(&g, &ug, 2.0, &cfg).unwrap();
        cfg.c_local = 2.0;
        let two = a_r_bound(&g, &ug, 2.0, &cfg).unwrap();
        assert!((two - 2.0 * one).abs() < 1e-14 * two.abs().max(1.0));
        assert!(one > 0.0);

        // non-increasing in R
        cfg.c_local = 1.0;
        let mut prev = f64::INFINITY;
        for k in 1..8 {
            let b = a_r_bound(&g, &ug, k as f64, &cfg).unwrap();
            assert!(b <= prev + 1e-14);
            prev = b;
        }
    }

    #[test]
    fn tb_closed_form_cases() {
        // r(0), r'(0) engineered through variance0 = r0 * scale
        let lambda = 1.5;
        let e_q = 2.0;
        let scale = 48.0 * lambda * lambda * (lambda - 1.0) * e_q;
        let tb = tb_finite_variance(2.0 * scale, 0.0, lambda, e_q).unwrap();
        assert!((tb - 2.0).abs() < 1e-12);
        let tb = tb_finite_variance(0.0, 3.0 * scale, lambda, e_q).unwrap();
        assert!((tb - 6.0).abs() < 1e-12);
        let tb = tb_finite_variance(2.0 * scale, 1.5 * scale, lambda, e_q).unwrap();
        assert!((tb - 4.0).abs() < 1e-12);
        assert!(matches!(
            tb_finite_variance(1.0, 0.0, 1.0, e_q),
            Err(VirialError::LambdaNotSupercritical { .. })
        ));
    }

    #[test]
    fn sobolev_quotient_gaussian_value_and_scale_invariance() {
        let g = RadialGrid::new(16384, 12.0).unwrap();
        let u = gauss(&g);
        // peak of r^2 e^{-r^2/2} at r = sqrt(2) is 2/e
        let num = (2.0 / std::f64::consts::E).powi(2);
        let den = (PI.powf(2.5) * 2.5 * PI.powf(2.5)).sqrt();
        let exact = num / den;
        let got = radial_sobolev_quotient(&g, &u).unwrap();
        assert!(((got - exact) / exact).abs() < 1e-4, "{got} vs {exact}");

        let lam = 2.0f64;
        let scaled: Vec<f64> = g
            .nodes()
            .iter()
            .map(|&r| (-0.5 * (lam * r) * (lam * r)).exp())
            .collect();
        let us = RadialField::from_real(&g, &scaled).unwrap();
        let q2 = radial_sobolev_quotient(&g, &us).unwrap();
        assert!(((q2 - got) / got).abs() < 1e-6, "{q2} vs {got}");

        assert!(matches!(
            radial_sobolev_quotient(&g, &RadialField::zero(&g)),
            Err(VirialError::ZeroField)
        ));
    }
}
