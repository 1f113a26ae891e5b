//! The four commands: `simulate`, `diagnose`, `toy-ode` and `verify`.

use std::io::Write;
use std::path::{Path, PathBuf};

use crate::config::{RunConfig, ToyMode};
use crate::diagnostics::{self, AnalysisConfig, DiagnosticsRecord};
use crate::error::{Error, Result};
use crate::initial::generate_initial;
use crate::output::{write_diagnostics_csv, write_file_atomically};
use crate::solver::{RunOutput, Solver, SolverState};
use crate::spectral::{FieldKind, Grid, Snapshot};
use crate::toy_ode::{self, SweepCell, ToyState, Trajectory};
use crate::verify::{self, VerifyOptions, VerifyReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;

impl Error {
    /// Process exit code: 1 for usage, config and I/O problems, 2 for
    /// numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Instability { .. }
            | Error::StepUnderflow { .. }
            | Error::ConstraintViolation { .. } => EXIT_NUMERICAL,
            _ => EXIT_CONFIG,
        }
    }
}

fn snapshot_name(dir: &Path, step: u64) -> PathBuf {
    dir.join(format!("u_{step:08}.snap"))
}

/// Run the solver; writes snapshots as they are recorded and the CSV only
/// once the run has finished.
pub fn simulate(cfg: &RunConfig) -> Result<RunOutput> {
    let solver = Solver::new(cfg.solver_config()?)?;
    let u0 = generate_initial(&cfg.initial, solver.grid())?;
    if let Some(dir) = &cfg.snapshot_dir {
        std::fs::create_dir_all(dir)?;
    }
    let mut recorded = 0usize;
    let out = solver.run(&u0, |state, _| {
        if let (Some(dir), true) = (&cfg.snapshot_dir, cfg.snapshot_every > 0) {
            if recorded.is_multiple_of(cfg.snapshot_every) {
                Snapshot::from_velocity(&state.u_hat, state.t, cfg.viscosity)
                    .save(snapshot_name(dir, state.step_count))?;
            }
        }
        recorded += 1;
        Ok(())
    })?;
    if let Some(path) = &cfg.csv {
        write_file_atomically(path, |w| write_diagnostics_csv(w, &out.records))?;
    }
    Ok(out)
}

/// Diagnostics of velocity snapshots, sorted by time. Series columns are
/// filled when there are at least five uniformly spaced snapshots.
pub fn diagnose(cfg: &RunConfig, paths: &[PathBuf]) -> Result<Vec<DiagnosticsRecord>> {
    if paths.is_empty() {
        return Err(Error::Config("diagnose needs at least one snapshot".into()));
    }
    let mut snaps = paths
        .iter()
        .map(Snapshot::load)
        .collect::<Result<Vec<_>>>()?;
    snaps.sort_by(|a, b| a.time.total_cmp(&b.time));
    let n = snaps[0].n;
    let viscosity = snaps[0].viscosity;
    if snaps.iter().any(|s| s.n != n) {
        return Err(Error::Config("snapshots have different grid sizes".into()));
    }
    if let Some(s) = snaps.iter().find(|s| s.kind != FieldKind::Velocity) {
        return Err(Error::Config(format!("expected velocity snapshots, found {}", s.kind)));
    }
    let grid = Grid::new(n)?;
    let forcing = cfg.forcing(&grid)?;
    let analysis = AnalysisConfig {
        viscosity,
        extra_q: cfg.q_list.clone(),
    };
    let mut records = Vec::with_capacity(snaps.len());
    for s in &snaps {
        let state = SolverState::new(s.vector_field()?.to_spectral(), s.time);
        let mut f = forcing.at(s.time);
        if let Some(f) = f.as_mut() {
            crate::spectral::leray_project_in_place(f);
        }
        records.push(diagnostics::analyze(&state, f.as_ref(), &analysis));
    }
    if records.len() >= diagnostics::MIN_SERIES_RECORDS {
        let _ = diagnostics::finalize_series(&mut records, viscosity);
    }
    if let Some(path) = &cfg.csv {
        write_file_atomically(path, |w| write_diagnostics_csv(w, &records))?;
    }
    Ok(records)
}

#[derive(Clone, Debug, PartialEq)]
pub enum ToyOutput {
    Trajectory(Trajectory),
    Sweep(Vec<SweepCell>),
}

impl ToyOutput {
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        match self {
            ToyOutput::Trajectory(t) => toy_ode::write_trajectory_csv(w, t),
            ToyOutput::Sweep(c) => toy_ode::write_sweep_csv(w, c),
        }
    }
}

pub fn toy(cfg: &RunConfig) -> Result<ToyOutput> {
    let out = match &cfg.toy_mode {
        ToyMode::Matrix(m) => ToyOutput::Trajectory(toy_ode::integrate(ToyState::Matrix(*m), &cfg.toy)?),
        ToyMode::Reduced { lambda3, r } => ToyOutput::Trajectory(toy_ode::integrate(
            ToyState::reduced(*lambda3, *r).map_err(|e| Error::Config(e.to_string()))?,
            &cfg.toy,
        )?),
        ToyMode::Sweep { lambda3, r } => ToyOutput::Sweep(toy_ode::phase_sweep(lambda3, r, &cfg.toy)?),
    };
    if let Some(path) = &cfg.csv {
        write_file_atomically(path, |w| out.write_csv(w))?;
    }
    Ok(out)
}

pub fn verify(cfg: &RunConfig) -> Result<VerifyReport> {
    verify::run(&VerifyOptions {
        n: cfg.verify_n,
        seed: cfg.verify_seed,
        flip_det_sign: cfg.verify_flip_det_sign,
    })
}
