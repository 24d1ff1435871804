//! Time integration by Strang splitting with an implicit linear substep.
//!
//! One step of size dt is CN(dt/2) . Phase(dt) . CN(dt/2): a Crank-Nicolson
//! half step of the linear flow i u_t = -Lap u, an exact phase rotation
//! u <- exp(i dt Phi) u with Phi = |x|^{-3} * |u|^2 evaluated at the midpoint
//! state, and a second linear half step. The potential sub-flow leaves |u|
//! unchanged, so the rotation is exact for its piece; sampling Phi at the
//! midpoint keeps the splitting second order and, measured on sub-threshold
//! ground-state data, conserves the discrete energy several times better
//! than putting the phase rotations on the outside.
//!
//! The outermost node is pinned to zero (Dirichlet); concentrating solutions
//! move inward, and a boundary-mass monitor invalidates runs that push mass
//! into the outer decile instead of silently absorbing it. Crank-Nicolson is
//! unitary for the weighted inner product in which the discrete Laplacian is
//! self-adjoint, so the recorded mass is conserved to round-off.

use num_complex::Complex64;

use crate::grid::{RadialField, RadialGrid};
use crate::ground_state::{laplacian_rows, GroundState};
use crate::linalg::solve_tridiag_imag;
use crate::potential::{lv_quartic, newton_potential, tail_lv_quartic};
use crate::virial::{variance_rate, z_r, CutoffProfile};

/// Step-size, horizon, detector and recording settings.
#[derive(Debug, Clone, PartialEq)]
pub struct EvolutionConfig {
    /// Initial (and maximal) step.
    pub dt0: f64,
    pub t_max: f64,
    /// Blow-up threshold on eta.
    pub eta_max: f64,
    /// Smallest allowed step.
    pub dt_min: f64,
    /// Maximal mass fraction tolerated in the outer decile of the mesh.
    pub boundary_tol: f64,
    /// Steps between recorded samples.
    pub record_stride: usize,
    pub adaptive: bool,
    /// Adaptive law dt = c_adapt / max |Phi|, clamped to [dt_min, dt0].
    pub c_adapt: f64,
    /// Disable to integrate the free equation (oracle runs).
    pub include_nonlinearity: bool,
}

impl Default for EvolutionConfig {
    fn default() -> Self {
        EvolutionConfig {
            dt0: 5e-4,
            t_max: 4.0,
            eta_max: 10.0,
            dt_min: 1e-9,
            boundary_tol: 1e-4,
            record_stride: 20,
            adaptive: true,
            c_adapt: 0.1,
            include_nonlinearity: true,
        }
    }
}

impl EvolutionConfig {
    pub fn validate(&self) -> Result<(), String> {
        if !(self.dt0 > 0.0 && self.dt0.is_finite()) {
            return Err(format!("dt0 = {} must be positive", self.dt0));
        }
        if !(self.dt_min > 0.0 && self.dt_min < self.dt0) {
            return Err(format!(
                "dt_min = {} must lie in (0, dt0 = {})",
                self.dt_min, self.dt0
            ));
        }
        if !(self.t_max > 0.0 && self.t_max.is_finite()) {
            return Err(format!("t_max = {} must be positive", self.t_max));
        }
        if !(self.eta_max > 1.0) {
            return Err(format!("eta_max = {} must exceed 1", self.eta_max));
        }
        if self.record_stride == 0 {
            return Err("record_stride must be at least 1".into());
        }
        if !(self.c_adapt > 0.0) {
            return Err(format!("c_adapt = {} must be positive", self.c_adapt));
        }
        if !(self.boundary_tol > 0.0) {
            return Err(format!("boundary_tol = {} must be positive", self.boundary_tol));
        }
        Ok(())
    }
}

/// Diagnostics of one recorded instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectorySample {
    pub t: f64,
    pub mass: f64,
    /// Discrete Hamiltonian: kinetic quadratic form of the mesh Laplacian
    /// over 2 minus the interaction quartic over 4. This is the quantity the
    /// splitting quasi-conserves; its drift measures time-integration error.
    pub energy: f64,
    /// Central-difference gradient norm squared.
    pub grad_norm_sq: f64,
    pub eta: f64,
    pub variance: f64,
    pub variance_rate: f64,
    /// Truncated variance at the probe radius, when a probe is attached.
    pub z_r: f64,
    /// Mass fraction in the outer decile of the mesh.
    pub tail_mass_outer: f64,
    /// Tail interaction quartic beyond the probe radius, when probed.
    pub tail_lv_r: f64,
    pub dt_used: f64,
}

/// Why a run stopped.
#[derive(Debug, Clone, PartialEq)]
pub enum RunOutcome {
    /// Reached t_max.
    Completed { t_final: f64 },
    /// A divergence surrogate fired. This detects, never proves, blow-up;
    /// grow-up along a time sequence is indistinguishable at mesh scale.
    BlowupDetected { t_star: f64, reason: BlowupReason },
    /// Outer-decile mass exceeded the tolerance: the box stopped being a
    /// faithful truncation of free space.
    BoundaryInvalid { t: f64 },
    /// The adaptive step hit the floor without the potential growing.
    StepFloor { t: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlowupReason {
    EtaThreshold,
    StepCollapse,
}

/// Optional truncated-variance probe attached to a run.
#[derive(Debug, Clone)]
pub struct VirialProbe {
    pub r_virial: f64,
    pub cutoff: CutoffProfile,
}

struct CrankNicolson {
    half_dt: f64,
    a_lo: Vec<f64>,
    a_di: Vec<Complex64>,
    a_up: Vec<f64>,
    b_lo: Vec<f64>,
    b_di: Vec<Complex64>,
    b_up: Vec<f64>,
}

impl CrankNicolson {
    /// Operators for one linear half step of length dt/2:
    /// (1 - i dt/4 Lap) u+ = (1 + i dt/4 Lap) u-.
    fn build(grid: &RadialGrid, dt: f64) -> Self {
        let rows = laplacian_rows(grid);
        let theta = 0.25 * dt;
        let m = rows.di.len();
        let mut cn = CrankNicolson {
            half_dt: 0.5 * dt,
            a_lo: vec![0.0; m],
            a_di: vec![Complex64::new(0.0, 0.0); m],
            a_up: vec![0.0; m],
            b_lo: vec![0.0; m],
            b_di: vec![Complex64::new(0.0, 0.0); m],
            b_up: vec![0.0; m],
        };
        for i in 0..m {
            cn.a_di[i] = Complex64::new(1.0, -theta * rows.di[i]);
            cn.b_di[i] = Complex64::new(1.0, theta * rows.di[i]);
            cn.a_lo[i] = -theta * rows.lo[i];
            cn.b_lo[i] = theta * rows.lo[i];
            cn.a_up[i] = -theta * rows.up[i];
            cn.b_up[i] = theta * rows.up[i];
        }
        cn
    }

    /// One half step in place. The imaginary off-diagonal parts are handled
    /// by treating lo/up as purely imaginary coefficients.
    fn half_step(&self, u: &mut [Complex64], scratch: &mut Vec<Complex64>) {
        let m = u.len();
        scratch.clear();
        scratch.reserve(m);
        // rhs = B u with B = 1 + i theta Lap; b_lo/b_up hold theta*Lap rows,
        // applied with an explicit factor i
        for i in 0..m {
            let mut acc = self.b_di[i] * u[i];
            if i > 0 {
                acc += Complex64::new(0.0, self.b_lo[i]) * u[i - 1];
            }
            if i + 1 < m {
                acc += Complex64::new(0.0, self.b_up[i]) * u[i + 1];
            }
            scratch.push(acc);
        }
        // A has the same structure with negated imaginary parts
        solve_tridiag_imag(&self.a_lo, &self.a_di, &self.a_up, scratch);
        u.copy_from_slice(scratch);
    }
}

/// One splitting step of size dt. The input must vanish at the last node;
/// the output does as well. dt = 0 is the identity.
pub fn strang_step(grid: &RadialGrid, u: &RadialField, dt: f64) -> RadialField {
    let mut state = interior(u);
    let cn = CrankNicolson::build(grid, dt);
    let mut scratch = Vec::new();
    step_state(grid, &mut state, &cn, true, &mut scratch);
    field_of(grid, u, &state)
}

fn interior(u: &RadialField) -> Vec<Complex64> {
    let s = u.samples();
    s[..s.len() - 1].to_vec()
}

fn field_of(grid: &RadialGrid, like: &RadialField, state: &[Complex64]) -> RadialField {
    debug_assert_eq!(state.len() + 1, grid.n_points());
    let mut samples = state.to_vec();
    samples.push(Complex64::new(0.0, 0.0));
    RadialField::from_raw(like.grid_params(), samples)
}

fn potential_on(grid: &RadialGrid, state: &[Complex64], rho: &mut [f64]) -> Vec<f64> {
    let n = grid.n_points();
    for (i, item) in rho.iter_mut().enumerate().take(n) {
        *item = if i < state.len() { state[i].norm_sqr() } else { 0.0 };
    }
    newton_potential(grid, rho).values().to_vec()
}

fn step_state(
    grid: &RadialGrid,
    state: &mut [Complex64],
    cn: &CrankNicolson,
    nonlinearity: bool,
    scratch: &mut Vec<Complex64>,
) {
    if cn.half_dt == 0.0 {
        return;
    }
    cn.half_step(state, scratch);
    if nonlinearity {
        let mut rho = vec![0.0; grid.n_points()];
        let phi = potential_on(grid, state, &mut rho);
        let dt = 2.0 * cn.half_dt;
        for (s, p) in state.iter_mut().zip(&phi) {
            *s *= Complex64::from_polar(1.0, dt * p);
        }
    }
    cn.half_step(state, scratch);
}

fn sample_diagnostics(
    grid: &RadialGrid,
    field: &RadialField,
    t: f64,
    dt_used: f64,
    gs: &GroundState,
    probe: Option<&VirialProbe>,
) -> TrajectorySample {
    let mass = grid.moment(field, 0);
    let grad_norm_sq = grid.kinetic(field);
    let lv4 = lv_quartic(grid, field);
    let kinetic_form = grid.kinetic_form(field);
    let energy = 0.5 * kinetic_form - 0.25 * lv4;
    let eta = (grad_norm_sq * mass / (gs.kinetic * gs.mass)).sqrt();
    let variance = grid.moment(field, 2);
    let v_rate = variance_rate(grid, field);
    let outer = grid
        .tail_l2_sq(field, 0.9 * grid.r_max())
        .unwrap_or(f64::NAN);
    let tail_mass_outer = if mass > 0.0 { outer / mass } else { 0.0 };
    let (z, tail_lv) = match probe {
        Some(p) => {
            let r = p.r_virial.min(grid.r_max());
            (
                z_r(grid, field, p.r_virial, &p.cutoff),
                tail_lv_quartic(grid, field, r).unwrap_or(f64::NAN),
            )
        }
        None => (0.0, 0.0),
    };
    TrajectorySample {
        t,
        mass,
        energy,
        grad_norm_sq,
        eta,
        variance,
        variance_rate: v_rate,
        z_r: z,
        tail_mass_outer,
        tail_lv_r: tail_lv,
        dt_used,
    }
}

/// Post-step detector: eta threshold and boundary monitor.
pub fn detect_blowup(
    sample: &TrajectorySample,
    cfg: &EvolutionConfig,
) -> Option<RunOutcome> {
    if sample.eta > cfg.eta_max {
        return Some(RunOutcome::BlowupDetected {
            t_star: sample.t,
            reason: BlowupReason::EtaThreshold,
        });
    }
    if sample.tail_mass_outer > cfg.boundary_tol {
        return Some(RunOutcome::BoundaryInvalid { t: sample.t });
    }
    None
}

/// Integrates from `u0` until t_max or a detector fires. Records every
/// `record_stride` steps plus the initial and final states.
pub fn evolve(
    grid: &RadialGrid,
    u0: &RadialField,
    cfg: &EvolutionConfig,
    gs: &GroundState,
    probe: Option<&VirialProbe>,
) -> (Vec<TrajectorySample>, RunOutcome) {
    let (samples, outcome, _) = evolve_observed(grid, u0, cfg, gs, probe, &mut |_| {});
    (samples, outcome)
}

/// As [`evolve`], invoking `observer` on every recorded sample as it is
/// produced (incremental output wants rows before the run ends), and
/// returning the terminal field for checkpointing.
pub fn evolve_observed(
    grid: &RadialGrid,
    u0: &RadialField,
    cfg: &EvolutionConfig,
    gs: &GroundState,
    probe: Option<&VirialProbe>,
    observer: &mut dyn FnMut(&TrajectorySample),
) -> (Vec<TrajectorySample>, RunOutcome, RadialField) {
    debug_assert!(cfg.validate().is_ok());
    let mut state = interior(u0);
    let mut scratch = Vec::new();
    let mut rho = vec![0.0; grid.n_points()];
    let mut samples: Vec<TrajectorySample> = Vec::new();
    let mut t = 0.0;
    let mut steps = 0usize;
    let mut last_max_phi = f64::INFINITY;

    let mut record = |samples: &mut Vec<TrajectorySample>, s: TrajectorySample| {
        observer(&s);
        samples.push(s);
    };

    let f0 = field_of(grid, u0, &state);
    record(&mut samples, sample_diagnostics(grid, &f0, t, 0.0, gs, probe));
    if let Some(v) = detect_blowup(&samples[0], cfg) {
        return (samples, v, f0);
    }

    let mut cn = CrankNicolson::build(grid, cfg.dt0);
    let mut cn_dt = cfg.dt0;

    loop {
        if t >= cfg.t_max * (1.0 - 1e-12) {
            let f = field_of(grid, u0, &state);
            if samples.last().map(|p| p.t) != Some(t) {
                let dt_last = samples.last().map_or(0.0, |s| s.dt_used);
                let s = sample_diagnostics(grid, &f, t, dt_last, gs, probe);
                record(&mut samples, s);
            }
            return (samples, RunOutcome::Completed { t_final: t }, f);
        }

        let mut dt = cfg.dt0;
        if cfg.adaptive && cfg.include_nonlinearity {
            let phi = potential_on(grid, &state, &mut rho);
            let max_phi = phi.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            if max_phi > 0.0 {
                let dt_raw = cfg.c_adapt / max_phi;
                if dt_raw < cfg.dt_min {
                    let verdict = if max_phi > last_max_phi {
                        RunOutcome::BlowupDetected {
                            t_star: t,
                            reason: BlowupReason::StepCollapse,
                        }
                    } else {
                        RunOutcome::StepFloor { t }
                    };
                    let f = field_of(grid, u0, &state);
                    let s = sample_diagnostics(grid, &f, t, dt, gs, probe);
                    record(&mut samples, s);
                    return (samples, verdict, f);
                }
                dt = dt_raw.clamp(cfg.dt_min, cfg.dt0);
                last_max_phi = max_phi;
            }
        }
        dt = dt.min(cfg.t_max - t);

        if dt != cn_dt {
            cn = CrankNicolson::build(grid, dt);
            cn_dt = dt;
        }
        step_state(grid, &mut state, &cn, cfg.include_nonlinearity, &mut scratch);
        t += dt;
        steps += 1;

        let record_now = steps % cfg.record_stride == 0;
        // detectors need eta and the boundary fraction each step
        let f = field_of(grid, u0, &state);
        let s = sample_diagnostics(grid, &f, t, dt, gs, probe);
        let verdict = detect_blowup(&s, cfg);
        if record_now || verdict.is_some() {
            record(&mut samples, s);
        }
        if let Some(v) = verdict {
            return (samples, v, f);
        }
    }
}

/// Convenience: eta <= lambda_minus + tol or eta >= lambda - tol must hold
/// at every recorded sample of a sub-threshold run.
pub fn dichotomy_persists(
    samples: &[TrajectorySample],
    lambda_minus: Option<f64>,
    lambda: f64,
    tol: f64,
) -> bool {
    samples.iter().all(|s| {
        lambda_minus.map_or(false, |lm| s.eta <= lm + tol) || s.eta >= lambda - tol
    })
}

/// Default band used by the persistence checks.
pub const DICHOTOMY_BAND: f64 = 1e-3;
