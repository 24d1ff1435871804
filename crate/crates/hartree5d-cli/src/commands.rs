//! Subcommand implementations. Each takes a parsed scenario and an output
//! directory, writes its artifacts there, and prints the JSON report to
//! stdout.
//!
//! Exit-code contract (enforced in main): 0 success, 1 validation error,
//! 2 numerical non-convergence or failed verification, 3 i/o error.

use std::path::{Path, PathBuf};

use anyhow::Context;

use hartree5d::ground_state::cache;
use hartree5d::{
    build_cutoff, classify, conserved_set, eta, evolve_observed, pohozaev_residuals,
    tb_finite_variance, tb_localized, tb_radial, threshold_roots, variance, variance_rate,
    CutoffBlend, CutoffProfile, GroundState, RadialField, RadialGrid, Regime, RunOutcome,
    SolverParams, TbOutcome, VirialConfig, VirialProbe,
};

use crate::checkpoint;
use crate::config::ScenarioConfig;
use crate::csvio::TrajectoryWriter;
use crate::presets::build_initial_data;
use crate::report::*;

/// Error category used to map failures onto exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FailureKind {
    Validation,
    Numerical,
    Io,
}

pub struct CommandError {
    pub kind: FailureKind,
    pub error: anyhow::Error,
}

impl CommandError {
    fn validation(e: impl Into<anyhow::Error>) -> Self {
        CommandError { kind: FailureKind::Validation, error: e.into() }
    }
    fn numerical(e: impl Into<anyhow::Error>) -> Self {
        CommandError { kind: FailureKind::Numerical, error: e.into() }
    }
    fn io(e: impl Into<anyhow::Error>) -> Self {
        CommandError { kind: FailureKind::Io, error: e.into() }
    }
}

type CmdResult<T> = Result<T, CommandError>;

pub fn gs_cache_path(out: &Path, cfg: &ScenarioConfig) -> PathBuf {
    out.join(format!(
        "gs_n{}_r{}_tol{:e}.txt",
        cfg.grid.n_points, cfg.grid.r_max, cfg.ground_state.tol
    ))
}

fn build_grid(cfg: &ScenarioConfig) -> CmdResult<RadialGrid> {
    RadialGrid::new(cfg.grid.n_points, cfg.grid.r_max).map_err(CommandError::validation)
}

fn obtain_ground_state(
    grid: &RadialGrid,
    cfg: &ScenarioConfig,
    out: &Path,
) -> CmdResult<(GroundState, bool)> {
    let params = SolverParams {
        tol: cfg.ground_state.tol,
        max_iters: cfg.ground_state.max_iters,
    };
    cache::solve_or_load(grid, params, &gs_cache_path(out, cfg)).map_err(CommandError::numerical)
}

fn ensure_out(out: &Path) -> CmdResult<()> {
    std::fs::create_dir_all(out)
        .with_context(|| format!("creating output directory {}", out.display()))
        .map_err(CommandError::io)
}

fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> CmdResult<String> {
    let text = serde_json::to_string_pretty(value).expect("reports serialize");
    std::fs::write(path, &text)
        .with_context(|| format!("writing {}", path.display()))
        .map_err(CommandError::io)?;
    Ok(text)
}

fn build_profile(cfg: &ScenarioConfig) -> CmdResult<CutoffProfile> {
    build_cutoff(CutoffBlend {
        s_outer: cfg.virial.cutoff_s_outer,
        ..CutoffBlend::default()
    })
    .map_err(CommandError::validation)
}

pub fn cmd_groundstate(cfg: &ScenarioConfig, out: &Path) -> CmdResult<String> {
    ensure_out(out)?;
    let grid = build_grid(cfg)?;
    let (gs, cache_hit) = obtain_ground_state(&grid, cfg, out)?;
    let (p1, p2, p3) = pohozaev_residuals(&gs);
    let report = GroundStateReport {
        n_points: cfg.grid.n_points,
        r_max: cfg.grid.r_max,
        tol: cfg.ground_state.tol,
        cache_hit,
        iterations: gs.iterations,
        mass: gs.mass,
        kinetic: gs.kinetic,
        lv4: gs.lv4,
        energy: gs.energy,
        c_hls: gs.c_hls,
        pohozaev: PohozaevReport {
            lv4_vs_kinetic: p1,
            lv4_vs_mass: p2,
            energy_vs_kinetic: p3,
        },
    };
    write_json(&out.join("groundstate.json"), &report)
}

pub fn regime_name(regime: &Regime) -> &'static str {
    match regime {
        Regime::GlobalBounded { .. } => "global_bounded",
        Regime::DivergentRegime { .. } => "divergent_regime",
        Regime::OutOfTheory => "out_of_theory",
        Regime::Inconsistent => "inconsistent",
    }
}

fn classify_report(
    grid: &RadialGrid,
    u0: &RadialField,
    gs: &GroundState,
    tol: f64,
) -> CmdResult<ClassifyReport> {
    let cs = conserved_set(grid, u0);
    let ratio = cs.mass * cs.energy / (gs.mass * gs.energy);
    let eta0 = eta(grid, u0, gs);
    let regime = classify(grid, u0, gs, tol).map_err(CommandError::numerical)?;
    let (lambda_minus, lambda) = match threshold_roots(ratio) {
        Ok(roots) => (roots.lambda_minus, Some(roots.lambda)),
        Err(_) => (None, None),
    };
    Ok(ClassifyReport {
        ratio,
        eta0,
        lambda_minus,
        lambda,
        regime: regime_name(&regime).to_string(),
    })
}

pub fn cmd_classify(cfg: &ScenarioConfig, out: &Path) -> CmdResult<String> {
    ensure_out(out)?;
    let grid = build_grid(cfg)?;
    let (gs, _) = obtain_ground_state(&grid, cfg, out)?;
    let u0 = build_initial_data(&grid, cfg.initial_data, &gs);
    let report = classify_report(&grid, &u0, &gs, cfg.classify_tol)?;
    write_json(&out.join("classify.json"), &report)
}

fn outcome_name(outcome: &RunOutcome) -> (&'static str, f64, Option<String>) {
    match outcome {
        RunOutcome::Completed { t_final } => ("completed", *t_final, None),
        RunOutcome::BlowupDetected { t_star, reason } => (
            "blowup_detected",
            *t_star,
            Some(format!("{reason:?}")),
        ),
        RunOutcome::BoundaryInvalid { t } => ("boundary_invalid", *t, None),
        RunOutcome::StepFloor { t } => ("step_floor", *t, None),
    }
}

pub fn cmd_evolve(cfg: &ScenarioConfig, out: &Path) -> CmdResult<String> {
    ensure_out(out)?;
    let grid = build_grid(cfg)?;
    let (gs, _) = obtain_ground_state(&grid, cfg, out)?;

    let (u0, t_offset) = match &cfg.resume {
        Some(path) => {
            let (t, field) = checkpoint::load(path, &grid).map_err(CommandError::validation)?;
            (field, t)
        }
        None => (build_initial_data(&grid, cfg.initial_data, &gs), 0.0),
    };

    // label the run by the classifier verdict; out-of-theory data still runs
    let classification = classify_report(&grid, &u0, &gs, cfg.classify_tol)
        .map(|r| r.regime)
        .unwrap_or_else(|_| "inconsistent".to_string());

    let profile = build_profile(cfg)?;
    let probe = VirialProbe { r_virial: cfg.virial.r_virial, cutoff: profile };

    let mut evo = cfg.evolution.clone();
    if t_offset > 0.0 {
        if t_offset >= evo.t_max {
            return Err(CommandError::validation(anyhow::anyhow!(
                "checkpoint time {t_offset} is at or past t_max = {}",
                evo.t_max
            )));
        }
        evo.t_max -= t_offset;
    }

    let csv_path = out.join("trajectory.csv");
    let mut writer = if cfg.outputs.csv {
        Some(TrajectoryWriter::create(&csv_path).map_err(CommandError::io)?)
    } else {
        None
    };
    let mut io_failure: Option<std::io::Error> = None;
    let mut checkpoints: Vec<String> = Vec::new();
    let mut row_index = 0usize;

    let mut rows_meta: Vec<(f64, f64, f64)> = Vec::new(); // (t, mass, energy)
    let mut max_eta = 0.0f64;

    let (samples, outcome, final_field) = {
        let writer_ref = &mut writer;
        let io_ref = &mut io_failure;
        let mut observer = |s: &hartree5d::TrajectorySample| {
            if let Some(w) = writer_ref.as_mut() {
                if io_ref.is_none() {
                    if let Err(e) = w.write_row(s, t_offset) {
                        *io_ref = Some(e);
                    }
                }
            }
            rows_meta.push((t_offset + s.t, s.mass, s.energy));
            if s.eta > max_eta {
                max_eta = s.eta;
            }
            row_index += 1;
        };
        evolve_observed(&grid, &u0, &evo, &gs, Some(&probe), &mut observer)
    };
    if let Some(e) = io_failure {
        return Err(CommandError::io(anyhow::Error::new(e).context("writing trajectory CSV")));
    }

    if cfg.checkpoint_stride > 0 {
        let (_, t_final, _) = outcome_name(&outcome);
        let path = out.join(format!("ckpt_final_t{:.6}.txt", t_offset + t_final));
        checkpoint::save(&path, &grid, t_offset + t_final, &final_field)
            .map_err(CommandError::io)?;
        checkpoints.push(path.display().to_string());
    }

    let (name, t_final, reason) = outcome_name(&outcome);
    let first = rows_meta.first().copied().unwrap_or((0.0, 0.0, 0.0));
    let (mut mass_drift, mut energy_drift) = (0.0f64, 0.0f64);
    for &(_, m, e) in &rows_meta {
        if first.1 != 0.0 {
            mass_drift = mass_drift.max(((m - first.1) / first.1).abs());
        }
        if first.2 != 0.0 {
            energy_drift = energy_drift.max(((e - first.2) / first.2).abs());
        }
    }

    let report = EvolveReport {
        outcome: name.to_string(),
        t_final: t_offset + t_final,
        blowup_reason: reason,
        max_eta,
        samples: samples.len(),
        mass_drift_rel: mass_drift,
        energy_drift_rel: energy_drift,
        classification,
        trajectory_csv: cfg.outputs.csv.then(|| csv_path.display().to_string()),
        checkpoints,
    };
    write_json(&out.join("outcome.json"), &report)
}

pub fn cmd_tb(cfg: &ScenarioConfig, out: &Path) -> CmdResult<String> {
    ensure_out(out)?;
    let grid = build_grid(cfg)?;
    let (gs, _) = obtain_ground_state(&grid, cfg, out)?;
    let u0 = build_initial_data(&grid, cfg.initial_data, &gs);

    // lambda from config, or the supercritical root of the measured ratio
    let (lambda, lambda_source) = match cfg.virial.lambda {
        Some(l) => (l, "config".to_string()),
        None => {
            let cs = conserved_set(&grid, &u0);
            let ratio = cs.mass * cs.energy / (gs.mass * gs.energy);
            let roots = threshold_roots(ratio).map_err(CommandError::validation)?;
            (roots.lambda, "threshold root of measured ratio".to_string())
        }
    };

    let vcfg = VirialConfig {
        c_local: cfg.virial.c_local,
        c_sobolev: cfg.virial.c_sobolev,
        gamma: cfg.virial.gamma,
        r_virial: cfg.virial.r_virial,
    };
    let profile = build_profile(cfg)?;

    let eta0 = eta(&grid, &u0, &gs);
    let prop31 = if eta0 < lambda {
        TbEntry::NotApplicable {
            not_applicable: format!("eta(0) = {eta0} below lambda = {lambda}: not in the divergent regime"),
        }
    } else {
        match tb_finite_variance(variance(&grid, &u0), variance_rate(&grid, &u0), lambda, gs.energy)
        {
            Ok(t_b) => {
                let scale = 48.0 * lambda * lambda * (lambda - 1.0) * gs.energy;
                TbEntry::Estimate {
                    t_b,
                    r0: variance(&grid, &u0) / scale,
                    r0_rate: variance_rate(&grid, &u0) / scale,
                    conditional: false,
                    binding: None,
                    c_local: vcfg.c_local,
                }
            }
            Err(e) => return Err(CommandError::validation(e)),
        }
    };

    let to_entry = |o: TbOutcome, c: f64| match o {
        TbOutcome::Estimate(e) => TbEntry::Estimate {
            t_b: e.t_b,
            r0: e.r0,
            r0_rate: e.r0_rate,
            conditional: e.conditional,
            binding: e.binding,
            c_local: c,
        },
        TbOutcome::HypothesisFailed { hypothesis, measured, required } => {
            TbEntry::HypothesisFailed { hypothesis_failed: hypothesis, measured, required }
        }
    };

    let prop32 = to_entry(
        tb_localized(&grid, &u0, lambda, &vcfg, &gs, &profile).map_err(CommandError::validation)?,
        vcfg.c_local,
    );
    let prop33 = to_entry(
        tb_radial(&grid, &u0, lambda, &vcfg, &gs, &profile).map_err(CommandError::validation)?,
        vcfg.c_local.max(vcfg.c_sobolev),
    );

    // optionally re-check the tail hypothesis along a recorded trajectory
    let trajectory_tail_check = if cfg.verify_along_trajectory {
        let probe = VirialProbe { r_virial: cfg.virial.r_virial, cutoff: profile.clone() };
        let (samples, _) = hartree5d::evolve(&grid, &u0, &cfg.evolution, &gs, Some(&probe));
        let bound = 6.0 * vcfg.gamma * gs.energy / vcfg.c_local;
        let mut violations = 0usize;
        let mut first_violation_t = None;
        for s in &samples {
            if s.tail_lv_r >= bound {
                violations += 1;
                if first_violation_t.is_none() {
                    first_violation_t = Some(s.t);
                }
            }
        }
        Some(TrajectoryTailCheck {
            bound,
            samples_checked: samples.len(),
            violations,
            first_violation_t,
        })
    } else {
        None
    };

    let report = TbReport {
        lambda,
        lambda_source,
        e_q: gs.energy,
        gamma: vcfg.gamma,
        r_virial: vcfg.r_virial,
        prop31,
        prop32,
        prop33,
        trajectory_tail_check,
    };
    write_json(&out.join("tb.json"), &report)
}

pub fn cmd_verify(cfg: &ScenarioConfig, out: &Path) -> CmdResult<(String, bool)> {
    ensure_out(out)?;
    let checks = crate::verify::run_all(cfg, out).map_err(|e| CommandError::numerical(e.error))?;
    let passed = checks.iter().filter(|c| c.pass).count();
    let failed = checks.len() - passed;
    let report = VerifyReport { passed, failed, checks };
    let text = write_json(&out.join("verify.json"), &report)?;
    Ok((text, failed == 0))
}
