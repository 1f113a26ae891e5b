//! The property suite behind `strainflow verify`: algebraic identities,
//! operator audits, budget runs and toy-model golden cases, each reduced
//! to one pass/fail line.

use std::io::Write;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::diagnostics::{
    self, gcon_scale, gronwall_envelope, pointwise_of_velocity, vortex_stretch_terms,
};
use crate::error::Result;
use crate::initial::{random_div_free, shear, taylor_green};
use crate::solver::{energy_budget, Solver, SolverConfig, TimeStep};
use crate::spectral::{
    consistency_residual, directional_strain, isometry_audit, sym_gradient, tracefree_hessian,
    velocity_from_strain, DirectionPartition, Grid, SpectralField3,
};
use crate::sym3::{norm3, rotation_from_quaternion, TraceFreeSym3, Vec3};
use crate::toy_ode::{self, blowup_time_bound, linspace, Outcome, ToyConfig, ToyState};

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyOptions {
    /// Grid size for the field checks.
    pub n: usize,
    pub seed: u64,
    /// Test hook: negate the determinant form of the vortex-stretching
    /// identity, which must then fail.
    pub flip_det_sign: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            n: 32,
            seed: 1,
            flip_det_sign: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }

    pub fn write_table<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
        for c in &self.checks {
            writeln!(
                w,
                "{}  {:width$}  {:7.2}s  {}",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.seconds,
                c.detail
            )?;
        }
        let failed = self.failures().len();
        writeln!(w, "{} checks, {} failed", self.checks.len(), failed)
    }
}

pub fn random_tracefree<R: Rng>(rng: &mut R) -> TraceFreeSym3 {
    let mut e = [0.0; 5];
    for x in &mut e {
        *x = StandardNormal.sample(rng);
    }
    TraceFreeSym3::from_entries(e)
}

pub fn random_unit<R: Rng>(rng: &mut R) -> Vec3 {
    loop {
        let v: Vec3 = std::array::from_fn(|_| StandardNormal.sample(rng));
        let n = norm3(&v);
        if n > 1e-3 {
            return v.map(|x| x / n);
        }
    }
}

pub fn random_rotation<R: Rng>(rng: &mut R) -> crate::sym3::Mat3 {
    rotation_from_quaternion(std::array::from_fn(|_| StandardNormal.sample(rng)))
}

/// A 4×4×4 array of blocks, each block assigned at random to one of
/// 2..=6 regions with random unit directions.
pub fn random_partition<R: Rng>(grid: &Grid, rng: &mut R) -> Result<DirectionPartition> {
    let regions = rng.random_range(2..=6usize);
    let directions: Vec<Vec3> = (0..regions).map(|_| random_unit(rng)).collect();
    let b = 4;
    let n = grid.n();
    let block_labels: Vec<usize> = (0..b * b * b).map(|_| rng.random_range(0..regions)).collect();
    let labels = (0..grid.len())
        .map(|idx| {
            let (x, y, z) = grid.unravel(idx);
            block_labels[x * b / n + b * (y * b / n + b * (z * b / n))]
        })
        .collect();
    DirectionPartition::from_labels(grid, labels, directions)
}

struct Suite {
    checks: Vec<Check>,
}

impl Suite {
    fn run<F: FnOnce() -> Result<(bool, String)>>(&mut self, name: &'static str, f: F) {
        let t0 = Instant::now();
        let (passed, detail) = match f() {
            Ok(x) => x,
            Err(e) => (false, format!("error: {e}")),
        };
        self.checks.push(Check {
            name,
            passed,
            detail,
            seconds: t0.elapsed().as_secs_f64(),
        });
    }
}

/// Facts gathered from every recorded snapshot of the Taylor-Green run.
#[derive(Default)]
struct SnapshotFacts {
    lambda2_violations: usize,
    points: usize,
    vs_resid: f64,
    directional_violation: f64,
    directional_fields: usize,
}

impl SnapshotFacts {
    fn new() -> Self {
        SnapshotFacts {
            directional_violation: f64::NEG_INFINITY,
            ..Default::default()
        }
    }
}

fn vs_residual(u: &SpectralField3, flip: bool) -> f64 {
    let mut t = vortex_stretch_terms(u);
    if flip {
        t.det_form = -t.det_form;
    }
    t.residual()
}

fn directional_violation(u: &SpectralField3, part: &DirectionPartition) -> Result<f64> {
    let sv = directional_strain(u, part)?;
    let pw = pointwise_of_velocity(u);
    let mut worst = f64::NEG_INFINITY;
    for idx in 0..u.grid().len() {
        let lhs = pw.eigen[idx].lambda2.abs();
        let rhs = norm3(&sv.at(idx));
        let scale = pw.strain_sq[idx].sqrt().max(f64::MIN_POSITIVE);
        worst = worst.max((lhs - rhs) / scale);
    }
    Ok(worst)
}

fn taylor_green_config(n: usize, dt: f64) -> SolverConfig {
    let mut c = SolverConfig::new(n);
    c.time_step = TimeStep::Fixed(dt);
    c.t_end = 1.0;
    c.record_every = 10;
    c
}

fn max_abs<I: IntoIterator<Item = f64>>(it: I) -> f64 {
    it.into_iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Run every check. Field checks use `opts.n`; toy-model checks do not depend on it.
pub fn run(opts: &VerifyOptions) -> Result<VerifyReport> {
    let grid = Grid::new(opts.n)?;
    let kmax = grid.dealias_cutoff().min(4);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut suite = Suite { checks: Vec::new() };

    let matrices: Vec<TraceFreeSym3> = (0..10_000).map(|_| random_tracefree(&mut rng)).collect();

    suite.run("trace_cube_identity", || {
        let worst = matrices
            .iter()
            .map(|m| (m.tr_cubed() - 3.0 * m.det()).abs() / m.norm().powi(3))
            .fold(0.0, f64::max);
        Ok((worst < 1e-12, format!("max |tr S³ - 3 det S|/|S|³ = {worst:.2e}")))
    });

    let rotations: Vec<_> = (0..1000).map(|_| random_rotation(&mut rng)).collect();
    suite.run("det_bound", || {
        let min_gap = matrices
            .iter()
            .map(|m| m.det_bound_gap() / m.norm().powi(3))
            .fold(f64::INFINITY, f64::min);
        let axis = TraceFreeSym3::diag(-2.0, 1.0, 1.0)?;
        let eq = rotations
            .iter()
            .map(|r| {
                let m = axis.rotated(r);
                m.det_bound_gap().abs() / m.norm().powi(3)
            })
            .fold(0.0, f64::max);
        Ok((
            min_gap >= -1e-14 && eq < 1e-12,
            format!("min gap/|M|³ = {min_gap:.2e}, equality case {eq:.2e}"),
        ))
    });

    suite.run("lambda2_bound_random", || {
        let bad = matrices
            .iter()
            .filter(|m| m.lambda2_bound_gap() < -1e-12 * m.norm().powi(3))
            .count();
        Ok((bad == 0, format!("{bad} violations in {}", matrices.len())))
    });

    let fields: Vec<SpectralField3> = (0..20)
        .map(|i| random_div_free(&grid, opts.seed.wrapping_mul(1000) + i, kmax, 1.0))
        .collect::<Result<_>>()?;

    suite.run("isometry", || {
        let mut worst: f64 = 0.0;
        for u in &fields {
            for alpha in [0.0, 1.0] {
                worst = worst.max(isometry_audit(u, alpha)?.max_rel_deviation());
            }
        }
        Ok((worst < 1e-12, format!("max relative deviation {worst:.2e}")))
    });

    suite.run("strain_constraint", || {
        let mut resid: f64 = 0.0;
        let mut roundtrip: f64 = 0.0;
        for u in &fields {
            let s = sym_gradient(u);
            resid = resid.max(consistency_residual(&s));
            let back = velocity_from_strain(&s)?;
            let d = back.combine(1.0, u, -1.0);
            roundtrip = roundtrip.max((d.energy() / u.energy()).sqrt());
        }
        // trace-free Hessian of a scalar: symmetric, trace-free, not a strain
        let phi = &fields[0].components()[0];
        let hess = consistency_residual(&tracefree_hessian(&grid, phi));
        Ok((
            resid < 1e-13 && hess > 0.1 && roundtrip < 1e-12,
            format!("strain residual {resid:.2e}, Hessian residual {hess:.3}, roundtrip {roundtrip:.2e}"),
        ))
    });

    let random_vs = max_abs(fields.iter().map(|u| vs_residual(u, opts.flip_det_sign)));

    // Taylor-Green run shared by the budget, bound and snapshot checks.
    let t0 = Instant::now();
    let solver = Solver::new(taylor_green_config(opts.n, 1e-3))?;
    let mut facts = SnapshotFacts::new();
    let mut part_rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x5eed);
    let mut record_index = 0usize;
    let tg = solver.run(&taylor_green(&grid), |state, _| {
        let pw = diagnostics::pointwise_strain_analysis(state);
        facts.lambda2_violations += pw.lambda2_bound_violations();
        facts.points += pw.strains.len();
        facts.vs_resid = facts.vs_resid.max(vs_residual(&state.u_hat, opts.flip_det_sign));
        if record_index.is_multiple_of(10) && facts.directional_fields < 10 {
            let part = random_partition(&grid, &mut part_rng)?;
            facts.directional_violation =
                facts.directional_violation.max(directional_violation(&state.u_hat, &part)?);
            facts.directional_fields += 1;
        }
        record_index += 1;
        Ok(())
    });
    let tg_seconds = t0.elapsed().as_secs_f64();

    let tg = match tg {
        Ok(out) => out,
        Err(e) => {
            suite.run("taylor_green_run", || Err(e));
            return Ok(VerifyReport { checks: suite.checks });
        }
    };
    let records = tg.records;

    suite.run("lambda2_bound_snapshots", || {
        Ok((
            facts.lambda2_violations == 0,
            format!(
                "{} violations over {} points of {} snapshots",
                facts.lambda2_violations,
                facts.points,
                records.len()
            ),
        ))
    });

    suite.run("vortex_stretch_identity", || {
        let worst = facts.vs_resid.max(random_vs);
        Ok((
            worst < 1e-10,
            format!("max deviation / ∫|S|³: snapshots {:.2e}, random {random_vs:.2e}", facts.vs_resid),
        ))
    });

    suite.run("enstrophy_budget", || {
        let series: Vec<_> = records.iter().filter_map(|r| r.series).collect();
        if series.len() != records.len() {
            return Ok((false, "series terms missing".into()));
        }
        let fine = max_abs(series.iter().map(|s| s.budget_resid));
        let coarse_solver = Solver::new(taylor_green_config(opts.n, 2e-3))?;
        let coarse = coarse_solver.run(&taylor_green(&grid), |_, _| Ok(()))?;
        let coarse_max = max_abs(coarse.records.iter().filter_map(|r| r.series).map(|s| s.budget_resid));
        let ratio = coarse_max / fine;
        Ok((
            fine < 1e-5 && (11.3..=22.6).contains(&ratio),
            format!("max residual {fine:.2e} at dt=1e-3, ratio {ratio:.1} on halving dt (run {tg_seconds:.1}s)"),
        ))
    });

    suite.run("gcon_margin", || {
        let nu = solver.config().viscosity;
        let worst = records
            .iter()
            .map(|r| r.series.map_or(f64::NEG_INFINITY, |s| s.gcon_margin / gcon_scale(r, nu).max(f64::MIN_POSITIVE)))
            .fold(f64::INFINITY, f64::min);
        Ok((worst >= -1e-6, format!("min margin/scale {worst:.3e}")))
    });

    suite.run("gronwall_envelope", || {
        let env = gronwall_envelope(&records, f64::INFINITY, solver.config().viscosity)?;
        let worst = records
            .iter()
            .zip(&env)
            .map(|(r, e)| r.enstrophy / (e * (1.0 + 1e-6)))
            .fold(0.0, f64::max);
        Ok((worst <= 1.0, format!("max E/envelope {worst:.4}")))
    });

    suite.run("shear_decay", || {
        let mut c = SolverConfig::new(opts.n.min(16));
        c.time_step = TimeStep::Fixed(1e-3);
        c.t_end = 1.0;
        c.record_every = 10;
        let s = Solver::new(c)?;
        let u0 = shear(s.grid());
        let out = s.run(&u0, |_, _| Ok(()))?;
        let expect = (-out.final_state.t).exp();
        let diff = out.final_state.u_hat.combine(1.0, &u0, -expect);
        let err = (diff.energy() / u0.energy()).sqrt() / expect;
        let energy = max_abs(energy_budget(&out.records, 1.0)?);
        Ok((
            err < 1e-9 && energy < 1e-8 && out.final_state.step_count == 1000,
            format!("relative error {err:.2e}, energy equality {energy:.2e}"),
        ))
    });

    suite.run("directional_strain", || {
        let sh = shear(&grid);
        let pw = pointwise_of_velocity(&sh);
        let lam = max_abs(pw.lambda2_plus.iter().copied());
        let e3 = DirectionPartition::uniform(&grid, [0.0, 0.0, 1.0])?;
        let dir = diagnostics::directional_criterion(
            &crate::solver::SolverState::new(sh, 0.0),
            &e3,
            2.0,
        )?;
        let v = facts.directional_violation;
        Ok((
            facts.directional_fields == 10 && v <= 1e-12 && lam < 1e-14 && dir < 1e-14,
            format!(
                "{} direction fields, max (|λ₂| - |Sv|)/|S| = {v:.2e}; shear λ₂⁺ {lam:.1e}, ‖S e₃‖ {dir:.1e}",
                facts.directional_fields
            ),
        ))
    });

    let toy = ToyConfig::default();
    suite.run("toy_blowup_golden", || {
        let mut worst: f64 = 0.0;
        for c in [0.5, 1.0, 2.0] {
            let m0 = TraceFreeSym3::diag(-2.0 * c, c, c)?;
            let cfg = ToyConfig { t_end: 3.0 / c, ..toy.clone() };
            let traj = toy_ode::integrate(ToyState::Matrix(m0), &cfg)?;
            let t = traj.outcome.t_est().unwrap_or(f64::NAN);
            worst = worst.max((t * c - 1.0).abs());
        }
        Ok((worst < 1e-6, format!("max |T_est - 1/C|·C = {worst:.2e}")))
    });

    suite.run("toy_decay_golden", || {
        let mut worst: f64 = 0.0;
        for c in [0.5, 1.0, 2.0] {
            let m0 = TraceFreeSym3::diag(-c, -c, 2.0 * c)?;
            let traj = toy_ode::integrate(ToyState::Matrix(m0), &toy)?;
            let last = traj.last();
            let ToyState::Matrix(m) = last.state else { unreachable!() };
            let exact = TraceFreeSym3::diag(-1.0, -1.0, 2.0)?.scale(1.0 / (1.0 / c + last.t));
            worst = worst.max((m - exact).entries().iter().fold(0.0f64, |a, x| a.max(x.abs())));
        }
        Ok((worst < 1e-8, format!("max entry error at t = 10: {worst:.2e}")))
    });

    suite.run("toy_attractor_sweep", || {
        let cfg = ToyConfig { t_end: 1e7, ..toy.clone() };
        let l3 = linspace(0.1, 10.0, 20);
        let cells = toy_ode::phase_sweep(&l3, &linspace(0.51, 2.0, 20), &cfg)?;
        let blown = cells.iter().filter(|c| matches!(c.outcome, Outcome::BlewUp { .. })).count();
        let r_err = max_abs(cells.iter().map(|c| c.r_terminal - 2.0));
        let bound_ok = cells.iter().all(|c| match (blowup_time_bound(c.lambda3_0, c.r_0), c.outcome.t_est()) {
            (Some(b), Some(t)) => t <= b * (1.0 + 1e-6),
            _ => true,
        });
        let decay = toy_ode::phase_sweep(&l3, &[0.5], &cfg)?;
        let decayed = decay.iter().filter(|c| c.outcome == Outcome::Decayed).count();
        Ok((
            blown == cells.len() && r_err < 1e-3 && bound_ok && decayed == decay.len(),
            format!(
                "{blown}/{} blew up, max |r - 2| {r_err:.1e}, time bound {}, r₀ = 1/2 row {decayed}/{} decayed",
                cells.len(),
                if bound_ok { "held" } else { "violated" },
                decay.len()
            ),
        ))
    });

    suite.run("growth_monitors", || {
        let cubic: Vec<f64> = records.iter().filter_map(|r| r.series.map(|s| s.cubic_margin)).collect();
        let border = diagnostics::borderline_monitor(&records);
        let finite = cubic.iter().all(|x| x.is_finite()) && border.values.iter().all(|(_, v)| v.is_finite());
        let peak = border.values.iter().map(|(_, v)| *v).fold(0.0, f64::max);
        Ok((
            finite,
            format!(
                "monitor only: min cubic margin {:.3e}, peak ‖λ₂⁺‖_{{3/2}} {peak:.3e} vs reference {:.3}",
                cubic.iter().fold(f64::INFINITY, |a, b| a.min(*b)),
                border.reference
            ),
        ))
    });

    Ok(VerifyReport { checks: suite.checks })
}
