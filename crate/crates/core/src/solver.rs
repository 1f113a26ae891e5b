//! Pseudo-spectral Navier-Stokes solver on the torus.
//!
//! The velocity coefficients are advanced with an integrating-factor
//! Runge-Kutta scheme: the heat semigroup `exp(-ν|ξ|²t)` is applied exactly
//! and the Duhamel term (projected advection plus projected forcing) is
//! integrated with classical RK4. Pressure never appears explicitly; the
//! Leray projection of the nonlinear term removes it.

use num_complex::Complex64;

use crate::diagnostics::{self, AnalysisConfig, DiagnosticsRecord};
use crate::error::{Error, Result};
use crate::spectral::{
    dealias_in_place, forward_real_pair, inverse_real, inverse_real_pair, leray_project_in_place,
    Grid, PhysicalField3, SpectralField3,
};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

#[derive(Clone, Debug, PartialEq)]
pub enum TimeStep {
    Fixed(f64),
    /// `dt = courant · Δx / max|u|`, never larger than `max_dt`.
    Cfl { courant: f64, max_dt: f64 },
}

/// External body force. Fields are Leray-projected when the solver is built.
#[derive(Clone, Debug)]
pub enum Forcing {
    None,
    Steady(SpectralField3),
    /// Piecewise-linear in time between the given samples, held constant
    /// outside their range. Samples must be sorted by time.
    Sequence(Vec<(f64, SpectralField3)>),
}

impl Forcing {
    /// `amplitude · (sin y, 0, 0)`.
    pub fn shear(grid: &Grid, amplitude: f64) -> Self {
        Forcing::Steady(
            PhysicalField3::from_fn(grid, |x| [amplitude * x[1].sin(), 0.0, 0.0]).to_spectral(),
        )
    }

    /// `amplitude` times the Taylor-Green velocity field.
    pub fn taylor_green(grid: &Grid, amplitude: f64) -> Self {
        let mut f = crate::initial::taylor_green(grid);
        f.scale(amplitude);
        Forcing::Steady(f)
    }

    pub fn is_none(&self) -> bool {
        matches!(self, Forcing::None)
    }

    pub fn at(&self, t: f64) -> Option<SpectralField3> {
        match self {
            Forcing::None => None,
            Forcing::Steady(f) => Some(f.clone()),
            Forcing::Sequence(samples) => {
                let first = samples.first()?;
                if t <= first.0 {
                    return Some(first.1.clone());
                }
                for w in samples.windows(2) {
                    let (t0, f0) = (&w[0].0, &w[0].1);
                    let (t1, f1) = (&w[1].0, &w[1].1);
                    if t <= *t1 {
                        let s = (t - t0) / (t1 - t0);
                        return Some(f0.combine(1.0 - s, f1, s));
                    }
                }
                samples.last().map(|(_, f)| f.clone())
            }
        }
    }

    fn projected(&self) -> Forcing {
        let project = |f: &SpectralField3| {
            let mut g = f.clone();
            leray_project_in_place(&mut g);
            g.components_mut().iter_mut().for_each(|c| c[0] = Complex64::default());
            g
        };
        match self {
            Forcing::None => Forcing::None,
            Forcing::Steady(f) => Forcing::Steady(project(f)),
            Forcing::Sequence(s) => {
                Forcing::Sequence(s.iter().map(|(t, f)| (*t, project(f))).collect())
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct SolverConfig {
    pub n: usize,
    pub viscosity: f64,
    pub time_step: TimeStep,
    pub t_end: f64,
    pub dealias: bool,
    pub forcing: Forcing,
    /// Steps between diagnostics records.
    pub record_every: usize,
    /// Extra `q` values for `‖λ₂⁺‖_q` beyond the fixed CSV columns.
    pub extra_q: Vec<f64>,
}

impl SolverConfig {
    pub fn new(n: usize) -> Self {
        SolverConfig {
            n,
            viscosity: 1.0,
            time_step: TimeStep::Fixed(1e-3),
            t_end: 1.0,
            dealias: true,
            forcing: Forcing::None,
            record_every: 1,
            extra_q: Vec::new(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |x: f64| x.is_finite() && x > 0.0;
        if !positive(self.viscosity) {
            return Err(Error::Config(format!("viscosity must be positive, got {}", self.viscosity)));
        }
        if !positive(self.t_end) {
            return Err(Error::Config(format!("t_end must be positive, got {}", self.t_end)));
        }
        match self.time_step {
            TimeStep::Fixed(dt) if !positive(dt) => {
                return Err(Error::Config(format!("dt must be positive, got {dt}")))
            }
            TimeStep::Cfl { courant, max_dt } if !positive(courant) || !positive(max_dt) => {
                return Err(Error::Config("CFL parameters must be positive".into()))
            }
            _ => {}
        }
        if self.record_every == 0 {
            return Err(Error::Config("record_every must be at least 1".into()));
        }
        Grid::new(self.n)?;
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct SolverState {
    pub u_hat: SpectralField3,
    pub t: f64,
    pub step_count: u64,
}

impl SolverState {
    pub fn new(u_hat: SpectralField3, t: f64) -> Self {
        SolverState { u_hat, t, step_count: 0 }
    }
}

/// `P[-(u·∇)u]`: advection in divergence form `-∇·(u⊗u)` from physical-space
/// products, optionally 2/3-dealiased on input and output, then Leray-projected.
pub fn nonlinear_term(u_hat: &SpectralField3, dealias: bool) -> SpectralField3 {
    let grid = u_hat.grid().clone();
    let mut u = u_hat.clone();
    if dealias {
        dealias_in_place(&mut u);
    }
    let c = u.components();
    let (u0, u1) = inverse_real_pair(&grid, &c[0], &c[1]);
    let u2 = inverse_real(&grid, c[2].clone());
    let mul = |a: &[f64], b: &[f64]| -> Vec<f64> { a.iter().zip(b).map(|(x, y)| x * y).collect() };
    let (p00, p11) = forward_real_pair(&grid, &mul(&u0, &u0), &mul(&u1, &u1));
    let (p22, p01) = forward_real_pair(&grid, &mul(&u2, &u2), &mul(&u0, &u1));
    let (p02, p12) = forward_real_pair(&grid, &mul(&u0, &u2), &mul(&u1, &u2));
    let products = [p00, p11, p22, p01, p02, p12];
    // slot of (u_i u_j) in `products`
    const SLOT: [[usize; 3]; 3] = [[0, 3, 4], [3, 1, 5], [4, 5, 2]];
    let mut out = SpectralField3::zeros(&grid);
    for idx in 0..grid.len() {
        let k = grid.deriv_wavevector(idx);
        let v: [Complex64; 3] = std::array::from_fn(|j| {
            let mut acc = Complex64::default();
            for (i, ki) in k.iter().enumerate() {
                acc += products[SLOT[i][j]][idx] * *ki;
            }
            -I * acc
        });
        out.set(idx, v);
    }
    if dealias {
        dealias_in_place(&mut out);
    }
    leray_project_in_place(&mut out);
    out
}

pub struct Solver {
    config: SolverConfig,
    grid: Grid,
    k2: Vec<f64>,
    forcing: Forcing,
    analysis: AnalysisConfig,
}

/// Result of [`Solver::run`].
#[derive(Debug)]
pub struct RunOutput {
    pub final_state: SolverState,
    pub records: Vec<DiagnosticsRecord>,
}

impl Solver {
    pub fn new(config: SolverConfig) -> Result<Self> {
        config.validate()?;
        let grid = Grid::new(config.n)?;
        let k2 = (0..grid.len()).map(|idx| grid.wavenumber_sq(idx)).collect();
        let forcing = config.forcing.projected();
        if let Forcing::Steady(f) = &forcing {
            if f.grid() != &grid {
                return Err(Error::Config("forcing grid does not match solver grid".into()));
            }
        }
        let analysis = AnalysisConfig {
            viscosity: config.viscosity,
            extra_q: config.extra_q.clone(),
        };
        Ok(Solver {
            config,
            grid,
            k2,
            forcing,
            analysis,
        })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn config(&self) -> &SolverConfig {
        &self.config
    }

    /// Projected forcing at time `t`.
    pub fn force_at(&self, t: f64) -> Option<SpectralField3> {
        self.forcing.at(t)
    }

    /// Admissible initial state: Leray-projected, zero mean, Nyquist modes removed.
    pub fn initial_state(&self, u0: &SpectralField3) -> Result<SolverState> {
        if u0.grid() != &self.grid {
            return Err(Error::SizeMismatch {
                expected: self.grid.len(),
                actual: u0.grid().len(),
            });
        }
        let mut u = u0.clone();
        for idx in 0..self.grid.len() {
            if idx == 0 || self.grid.has_nyquist(idx) {
                u.set(idx, [Complex64::default(); 3]);
            }
        }
        leray_project_in_place(&mut u);
        Ok(SolverState::new(u, 0.0))
    }

    fn rhs(&self, u: &SpectralField3, t: f64) -> SpectralField3 {
        let mut n = nonlinear_term(u, self.config.dealias);
        if let Some(f) = self.forcing.at(t) {
            n = n.combine(1.0, &f, 1.0);
        }
        n
    }

    fn heat_factors(&self, h: f64) -> Vec<f64> {
        let nu = self.config.viscosity;
        self.k2.iter().map(|k2| (-nu * k2 * h).exp()).collect()
    }

    /// Time step the solver would take from `state`.
    pub fn next_dt(&self, state: &SolverState) -> f64 {
        match self.config.time_step {
            TimeStep::Fixed(dt) => dt,
            TimeStep::Cfl { courant, max_dt } => {
                let umax = state.u_hat.to_physical().max_abs();
                if umax > 0.0 {
                    (courant * self.grid.spacing() / umax).min(max_dt)
                } else {
                    max_dt
                }
            }
        }
    }

    /// Advance by `dt` with integrating-factor RK4.
    pub fn step_by(&self, state: &SolverState, dt: f64) -> Result<SolverState> {
        let e_full = self.heat_factors(dt);
        let e_half = self.heat_factors(0.5 * dt);
        let t = state.t;
        let u = &state.u_hat;

        let a = self.rhs(u, t);
        let mut y = u.combine(1.0, &a, 0.5 * dt);
        y.scale_modes(&e_half);
        let b = self.rhs(&y, t + 0.5 * dt);

        let mut y = u.clone();
        y.scale_modes(&e_half);
        let y = y.combine(1.0, &b, 0.5 * dt);
        let c = self.rhs(&y, t + 0.5 * dt);

        let mut y = u.clone();
        y.scale_modes(&e_full);
        let mut c_half = c.clone();
        c_half.scale_modes(&e_half);
        let y = y.combine(1.0, &c_half, dt);
        let d = self.rhs(&y, t + dt);

        // u_new = E u + dt/6 (E a + 2 E½ (b + c) + d)
        let mut next = u.clone();
        next.scale_modes(&e_full);
        let mut ea = a;
        ea.scale_modes(&e_full);
        let mut bc = b.combine(1.0, &c, 1.0);
        bc.scale_modes(&e_half);
        let next = next
            .combine(1.0, &ea, dt / 6.0)
            .combine(1.0, &bc, dt / 3.0)
            .combine(1.0, &d, dt / 6.0);

        if !next.is_finite() {
            return Err(Error::Instability {
                last_time: state.t,
                last_state: Box::new(state.clone()),
            });
        }
        let step_count = state.step_count + 1;
        let t_next = match self.config.time_step {
            TimeStep::Fixed(h) if h == dt => step_count as f64 * h,
            _ => t + dt,
        };
        Ok(SolverState {
            u_hat: next,
            t: t_next,
            step_count,
        })
    }

    pub fn step(&self, state: &SolverState) -> Result<SolverState> {
        self.step_by(state, self.next_dt(state))
    }

    pub fn analyze(&self, state: &SolverState) -> DiagnosticsRecord {
        diagnostics::analyze(state, self.force_at(state.t).as_ref(), &self.analysis)
    }

    /// Integrate from the admissible form of `u0` to `t_end`, recording
    /// diagnostics every `record_every` steps and passing each recorded
    /// state to `observer`.
    pub fn run<F>(&self, u0: &SpectralField3, mut observer: F) -> Result<RunOutput>
    where
        F: FnMut(&SolverState, &DiagnosticsRecord) -> Result<()>,
    {
        let mut state = self.initial_state(u0)?;
        let mut records = Vec::new();
        let t_end = self.config.t_end;
        let every = self.config.record_every as u64;
        loop {
            if state.step_count % every == 0 {
                let rec = self.analyze(&state);
                observer(&state, &rec)?;
                records.push(rec);
            }
            let remaining = t_end - state.t;
            if remaining <= 1e-12 * t_end {
                break;
            }
            let dt = self.next_dt(&state);
            let dt = if dt > remaining * (1.0 + 1e-9) { remaining } else { dt };
            state = self.step_by(&state, dt)?;
        }
        if let Some(last) = records.last() {
            if last.t != state.t {
                let rec = self.analyze(&state);
                observer(&state, &rec)?;
                records.push(rec);
            }
        }
        if records.len() >= diagnostics::MIN_SERIES_RECORDS {
            // A shortened final step breaks uniform spacing; leave that series unfinished.
            let _ = diagnostics::finalize_series(&mut records, self.config.viscosity);
        }
        Ok(RunOutput {
            final_state: state,
            records,
        })
    }
}

/// Residual of the energy equality
/// `½‖u(t)‖² + ν∫‖∇⊗u‖² - ∫⟨u, f⟩ = ½‖u⁰‖²`, relative to `½‖u⁰‖²`
/// (absolute when the initial energy is zero).
///
/// Time integrals use the trapezoidal rule with endpoint derivative
/// corrections, fourth order on uniformly spaced records.
pub fn energy_budget(records: &[DiagnosticsRecord], viscosity: f64) -> Result<Vec<f64>> {
    let h = diagnostics::uniform_spacing(records)?;
    let integrand: Vec<f64> = records
        .iter()
        .map(|r| viscosity * r.grad_norm_sq - r.force_work)
        .collect();
    let integral = diagnostics::cumulative_integral(&integrand, h)?;
    let e0 = records[0].energy;
    let scale = if e0 > 0.0 { e0 } else { 1.0 };
    Ok(records
        .iter()
        .zip(integral)
        .map(|(r, int)| (r.energy + int - e0) / scale)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::initial;

    fn shear(g: &Grid) -> SpectralField3 {
        initial::shear(g)
    }

    #[test]
    fn nonlinear_term_vanishes_for_zero_and_shear() {
        let g = Grid::new(16).unwrap();
        let n0 = nonlinear_term(&SpectralField3::zeros(&g), true);
        assert_eq!(n0.energy(), 0.0);
        let ns = nonlinear_term(&shear(&g), true);
        assert!(ns.energy().sqrt() < 1e-12);
    }

    #[test]
    fn nonlinear_term_is_solenoidal_and_orthogonal_to_gradients() {
        let g = Grid::new(16).unwrap();
        let nl = nonlinear_term(&initial::taylor_green(&g), true);
        assert!(nl.divergence_residual() < 1e-12);
        let phi = PhysicalField3::from_fn(&g, |x| [(x[0] + 2.0 * x[2]).sin() * x[1].cos(), 0.0, 0.0])
            .to_spectral();
        let grad = crate::spectral::scalar_gradient(&g, phi.component(0));
        let ip = nl.inner(&grad);
        let scale = (nl.inner(&nl) * grad.inner(&grad)).sqrt();
        assert!(ip.abs() < 1e-12 * scale);
    }

    #[test]
    fn shear_decays_exactly() {
        let mut cfg = SolverConfig::new(16);
        cfg.time_step = TimeStep::Fixed(1e-3);
        cfg.t_end = 0.1;
        let solver = Solver::new(cfg).unwrap();
        let g = solver.grid().clone();
        let mut s = solver.initial_state(&shear(&g)).unwrap();
        for _ in 0..100 {
            s = solver.step(&s).unwrap();
        }
        let exact = shear(&g).combine((-s.t).exp(), &shear(&g), 0.0);
        let err = s.u_hat.combine(1.0, &exact, -1.0).energy().sqrt() / exact.energy().sqrt();
        assert!(err < 1e-9, "{err}");
        assert!((s.t - 0.1).abs() < 1e-15);
    }

    #[test]
    fn zero_stays_zero() {
        let mut cfg = SolverConfig::new(8);
        cfg.t_end = 0.01;
        let solver = Solver::new(cfg).unwrap();
        let out = solver
            .run(&SpectralField3::zeros(solver.grid()), |_, _| Ok(()))
            .unwrap();
        assert_eq!(out.final_state.u_hat.energy(), 0.0);
        let resid = energy_budget(&out.records, 1.0).unwrap();
        assert!(resid.iter().all(|r| *r == 0.0));
    }

    #[test]
    fn config_validation() {
        let mut cfg = SolverConfig::new(16);
        cfg.viscosity = 0.0;
        assert!(Solver::new(cfg.clone()).is_err());
        cfg.viscosity = 1.0;
        cfg.time_step = TimeStep::Fixed(-1.0);
        assert!(Solver::new(cfg.clone()).is_err());
        cfg.time_step = TimeStep::Fixed(1e-3);
        cfg.t_end = 0.0;
        assert!(Solver::new(cfg).is_err());
    }

    #[test]
    fn instability_reports_last_finite_state() {
        let mut cfg = SolverConfig::new(8);
        cfg.time_step = TimeStep::Fixed(1e-3);
        let solver = Solver::new(cfg).unwrap();
        let mut big = initial::taylor_green(solver.grid());
        // products of 1e160 overflow
        big.scale(1e160);
        match solver.step(&SolverState::new(big, 0.0)) {
            Err(Error::Instability { last_time, last_state }) => {
                assert_eq!(last_time, 0.0);
                assert!(last_state.u_hat.is_finite());
            }
            other => panic!("expected instability, got {other:?}"),
        }
    }

    #[test]
    fn cfl_step_respects_bound() {
        let mut cfg = SolverConfig::new(16);
        cfg.time_step = TimeStep::Cfl { courant: 0.5, max_dt: 1.0 };
        let solver = Solver::new(cfg).unwrap();
        let s = solver.initial_state(&initial::taylor_green(solver.grid())).unwrap();
        let dt = solver.next_dt(&s);
        assert!((dt - 0.5 * solver.grid().spacing() / 1.0).abs() < 1e-12);
    }
}
