//! The strain self-amplification model `∂ₜM = -M² + (1/3)|M|²I` on
//! trace-free symmetric matrices, in full-matrix form and in the reduced
//! coordinates `(λ₃, r)` with `λ₁ = -rλ₃`, `λ₂ = (r - 1)λ₃`.
//!
//! Integration uses the Dormand-Prince 5(4) pair with step rejection.

use std::io::Write;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::sym3::{mat_mul, TraceFreeSym3};

/// Root of `g(r) = 2r² - 2r - 1` in `[1/2, 2]`.
pub fn growth_root() -> f64 {
    (1.0 + 3f64.sqrt()) / 2.0
}

/// `g(r) = 2r² - 2r - 1`.
pub fn g(r: f64) -> f64 {
    2.0 * r * r - 2.0 * r - 1.0
}

/// `f(r) = -2r³ + 3r² + 3r - 2`.
pub fn f(r: f64) -> f64 {
    -2.0 * r * r * r + 3.0 * r * r + 3.0 * r - 2.0
}

const R_SLACK: f64 = 1e-9;

/// `-M² + (1/3)|M|² I`.
pub fn rhs_matrix(m: &TraceFreeSym3) -> TraceFreeSym3 {
    let a = m.to_matrix();
    let sq = mat_mul(&a, &a);
    -TraceFreeSym3::deviatoric_part(&sq)
}

fn reduced_raw(lambda3: f64, r: f64) -> (f64, f64) {
    (lambda3 * lambda3 * g(r) / 3.0, lambda3 * f(r) / 3.0)
}

/// `(∂ₜλ₃, ∂ₜr) = ((1/3)λ₃² g(r), (1/3)λ₃ f(r))`.
pub fn rhs_reduced(lambda3: f64, r: f64) -> Result<(f64, f64)> {
    if !(lambda3 > 0.0 && lambda3.is_finite()) {
        return Err(Error::invalid(format!("λ₃ = {lambda3} must be positive")));
    }
    if !(0.5..=2.0).contains(&r) {
        return Err(Error::invalid(format!("r = {r} outside [1/2, 2]")));
    }
    Ok(reduced_raw(lambda3, r))
}

/// `3/(g(r₀)λ₃(0))` when `r₀ > (1+√3)/2`; an upper bound on the blow-up time.
pub fn blowup_time_bound(lambda3_0: f64, r_0: f64) -> Option<f64> {
    if r_0 > growth_root() && lambda3_0 > 0.0 {
        Some(3.0 / (g(r_0) * lambda3_0))
    } else {
        None
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ToyState {
    Matrix(TraceFreeSym3),
    Reduced { lambda3: f64, r: f64 },
}

impl ToyState {
    pub fn reduced(lambda3: f64, r: f64) -> Result<Self> {
        rhs_reduced(lambda3, r)?;
        Ok(ToyState::Reduced { lambda3, r })
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> [f64; 3] {
        match *self {
            ToyState::Matrix(m) => m.eigen_unchecked().as_array(),
            ToyState::Reduced { lambda3, r } => [-r * lambda3, (r - 1.0) * lambda3, lambda3],
        }
    }

    /// `-λ₁/λ₃`, undefined for the zero matrix.
    pub fn ratio(&self) -> Option<f64> {
        match *self {
            ToyState::Matrix(m) => m.eigen_unchecked().r,
            ToyState::Reduced { r, .. } => Some(r),
        }
    }

    pub fn lambda3(&self) -> f64 {
        self.eigenvalues()[2]
    }

    /// `|M|`.
    pub fn norm(&self) -> f64 {
        match *self {
            ToyState::Matrix(m) => m.norm(),
            ToyState::Reduced { lambda3, r } => {
                lambda3 * (r * r + (r - 1.0) * (r - 1.0) + 1.0).sqrt()
            }
        }
    }

    fn to_vec(self) -> Vec<f64> {
        match self {
            ToyState::Matrix(m) => m.entries().to_vec(),
            ToyState::Reduced { lambda3, r } => vec![lambda3, r],
        }
    }

    fn with_vec(&self, y: &[f64]) -> ToyState {
        match self {
            ToyState::Matrix(_) => {
                ToyState::Matrix(TraceFreeSym3::from_entries([y[0], y[1], y[2], y[3], y[4]]))
            }
            ToyState::Reduced { .. } => ToyState::Reduced {
                lambda3: y[0],
                r: y[1],
            },
        }
    }

    fn rhs(&self, y: &[f64], out: &mut [f64]) {
        match self {
            ToyState::Matrix(_) => {
                let m = TraceFreeSym3::from_entries([y[0], y[1], y[2], y[3], y[4]]);
                out.copy_from_slice(&rhs_matrix(&m).entries());
            }
            ToyState::Reduced { .. } => {
                let (a, b) = reduced_raw(y[0], y[1]);
                out[0] = a;
                out[1] = b;
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ToyPoint {
    pub t: f64,
    /// Size of the step that produced this point (0 for the initial point).
    /// Near blow-up steps fall below the resolution of `t` itself.
    pub h: f64,
    pub state: ToyState,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Outcome {
    /// Reached `t_end` with `|M|` at or above the decay threshold.
    Completed,
    BlewUp { t_est: f64 },
    /// Reached `t_end` with `|M|` below the decay threshold.
    Decayed,
}

impl Outcome {
    pub fn label(&self) -> &'static str {
        match self {
            Outcome::Completed => "completed",
            Outcome::BlewUp { .. } => "blew_up",
            Outcome::Decayed => "decayed",
        }
    }

    pub fn t_est(&self) -> Option<f64> {
        match self {
            Outcome::BlewUp { t_est } => Some(*t_est),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub points: Vec<ToyPoint>,
    pub outcome: Outcome,
}

impl Trajectory {
    pub fn last(&self) -> &ToyPoint {
        self.points.last().expect("trajectory has at least one point")
    }

    /// Eigenvalues and ratio at time `t`, linearly interpolated between
    /// accepted steps. `None` outside the integrated range.
    pub fn sample_at(&self, t: f64) -> Option<([f64; 3], f64)> {
        let first = self.points.first()?;
        if t < first.t || t > self.last().t {
            return None;
        }
        let i = self.points.partition_point(|p| p.t <= t);
        let eval = |p: &ToyPoint| (p.state.eigenvalues(), p.state.ratio().unwrap_or(f64::NAN));
        if i == 0 || i >= self.points.len() {
            return Some(eval(self.points.get(i.saturating_sub(1)).unwrap_or(first)));
        }
        let (a, b) = (&self.points[i - 1], &self.points[i]);
        let w = (t - a.t) / (b.t - a.t);
        let (la, ra) = eval(a);
        let (lb, rb) = eval(b);
        Some((
            std::array::from_fn(|k| la[k] + w * (lb[k] - la[k])),
            ra + w * (rb - ra),
        ))
    }

    /// Slope of `1/λ₃` against `t` over the last decade of `λ₃` growth.
    /// Needs a trajectory integrated with `keep_trajectory`.
    pub fn terminal_inverse_slope(&self) -> Option<f64> {
        let last = self.last();
        let top = last.state.lambda3();
        let i = self.points.iter().rposition(|p| p.state.lambda3() <= top / 10.0)?;
        let p = &self.points[i];
        let span: f64 = self.points[i + 1..].iter().map(|q| q.h).sum();
        Some((1.0 / top - 1.0 / p.state.lambda3()) / span)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ToyConfig {
    pub t_end: f64,
    pub rtol: f64,
    pub atol: f64,
    pub blowup_threshold: f64,
    pub decay_threshold: f64,
    pub max_steps: usize,
    /// Keep every accepted step (otherwise only the first and the last few).
    pub keep_trajectory: bool,
}

impl Default for ToyConfig {
    fn default() -> Self {
        ToyConfig {
            t_end: 10.0,
            rtol: 1e-10,
            atol: 1e-12,
            blowup_threshold: 1e12,
            decay_threshold: 1e-6,
            max_steps: 10_000_000,
            keep_trajectory: true,
        }
    }
}

// Dormand-Prince 5(4) tableau. The system is autonomous, so the nodes are not needed.
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
/// Fifth-order weights minus embedded fourth-order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

fn clamp_ratio(state: ToyState, t: f64) -> Result<ToyState> {
    match state {
        ToyState::Reduced { lambda3, r } => {
            let clamped = r.clamp(0.5, 2.0);
            if (clamped - r).abs() > R_SLACK || !r.is_finite() {
                return Err(Error::invalid(format!("r = {r} left [1/2, 2] at t = {t}")));
            }
            Ok(ToyState::Reduced { lambda3, r: clamped })
        }
        m => Ok(m),
    }
}

/// Blow-up time from the last three accepted points: a quadratic through
/// `(t, 1/λ₃)` extrapolated to its zero, starting from the secant root.
/// Abscissae are offsets rebuilt from the step sizes, which stay accurate
/// when `t` can no longer resolve them.
fn estimate_blowup(pts: &[ToyPoint]) -> f64 {
    let n = pts.len();
    let last = &pts[n - 1];
    let x = |p: &ToyPoint| 1.0 / p.state.lambda3();
    if n < 2 {
        return last.t;
    }
    let prev = &pts[n - 2];
    let h = last.h;
    let slope = (x(last) - x(prev)) / h;
    let mut d = -x(last) / slope;
    if n >= 3 {
        // Newton form p(s) = x₂ + s₂₁ s + c s (s + h), s = t - t₂
        let p0 = &pts[n - 3];
        let s10 = (x(prev) - x(p0)) / prev.h;
        let c = (slope - s10) / (h + prev.h);
        for _ in 0..3 {
            let val = x(last) + slope * d + c * d * (d + h);
            let der = slope + c * (2.0 * d + h);
            if der == 0.0 || !der.is_finite() {
                break;
            }
            d -= val / der;
        }
    }
    last.t + d
}

fn initial_step(state: &ToyState, y: &[f64], rtol: f64, atol: f64, t_end: f64) -> f64 {
    let mut k = vec![0.0; y.len()];
    state.rhs(y, &mut k);
    let sc: Vec<f64> = y.iter().map(|v| atol + rtol * v.abs()).collect();
    let d0 = y.iter().zip(&sc).map(|(v, s)| (v / s).powi(2)).sum::<f64>().sqrt();
    let d1 = k.iter().zip(&sc).map(|(v, s)| (v / s).powi(2)).sum::<f64>().sqrt();
    let h = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    h.min(t_end.abs()).max(1e-12 * t_end.abs().max(1.0))
}

/// Integrate from `t = 0` to `cfg.t_end` or until blow-up.
pub fn integrate(initial: ToyState, cfg: &ToyConfig) -> Result<Trajectory> {
    if !(cfg.t_end > 0.0 && cfg.t_end.is_finite()) {
        return Err(Error::invalid("t_end must be positive"));
    }
    if !(cfg.rtol > 0.0 && cfg.atol > 0.0) {
        return Err(Error::invalid("tolerances must be positive"));
    }
    if let ToyState::Reduced { lambda3, r } = initial {
        rhs_reduced(lambda3, r)?;
    }
    if let ToyState::Matrix(m) = initial {
        if !m.is_finite() {
            return Err(Error::invalid("initial matrix must be finite"));
        }
    }
    let dim = initial.to_vec().len();
    let mut y = initial.to_vec();
    let mut t = 0.0f64;
    let mut state = initial;
    let mut t_comp = 0.0f64;
    let mut points = vec![ToyPoint { t, h: 0.0, state }];
    let mut h = initial_step(&state, &y, cfg.rtol, cfg.atol, cfg.t_end);
    let mut k = vec![vec![0.0; dim]; 7];
    let mut stage = vec![0.0; dim];
    let mut y_new = vec![0.0; dim];
    state.rhs(&y, &mut k[0]);
    let mut steps = 0usize;
    let push = |points: &mut Vec<ToyPoint>, p: ToyPoint| {
        if !cfg.keep_trajectory && points.len() >= 8 {
            points.remove(1);
        }
        points.push(p);
    };

    while t < cfg.t_end {
        steps += 1;
        if steps > cfg.max_steps {
            return Err(Error::StepUnderflow {
                time: t,
                trajectory: Box::new(Trajectory {
                    points,
                    outcome: Outcome::Completed,
                }),
            });
        }
        let last_step = t + h >= cfg.t_end;
        if last_step {
            h = cfg.t_end - t;
        }
        for s in 1..7 {
            for i in 0..dim {
                let mut acc = y[i];
                for (j, kj) in k.iter().enumerate().take(s) {
                    acc += h * A[s][j] * kj[i];
                }
                stage[i] = acc;
            }
            state.rhs(&stage, &mut k[s]);
            if s == 6 {
                y_new.copy_from_slice(&stage);
            }
        }
        let mut err: f64 = 0.0;
        for i in 0..dim {
            let e: f64 = (0..7).map(|s| E[s] * k[s][i]).sum::<f64>() * h;
            let sc = cfg.atol + cfg.rtol * y[i].abs().max(y_new[i].abs());
            err = err.max((e / sc).abs());
        }
        if !err.is_finite() {
            err = 1e10;
        }
        if err <= 1.0 {
            if last_step {
                t = cfg.t_end;
            } else {
                // compensated sum: late steps are far below the ulp of t
                let y_t = h - t_comp;
                let sum = t + y_t;
                t_comp = (sum - t) - y_t;
                t = sum;
            }
            y.copy_from_slice(&y_new);
            state = clamp_ratio(state.with_vec(&y), t)?;
            y = state.to_vec();
            // FSAL: the seventh stage is the derivative at the new point.
            let k6 = k[6].clone();
            k[0].copy_from_slice(&k6);
            if let ToyState::Reduced { .. } = state {
                state.rhs(&y, &mut k[0]);
            }
            push(&mut points, ToyPoint { t, h, state });
            if state.lambda3() > cfg.blowup_threshold {
                let t_est = estimate_blowup(&points);
                return Ok(Trajectory {
                    points,
                    outcome: Outcome::BlewUp { t_est },
                });
            }
        }
        let factor = if err == 0.0 {
            5.0
        } else {
            (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
        };
        let h_next = h * if err <= 1.0 { factor } else { factor.min(1.0) };
        if !last_step || err > 1.0 {
            h = h_next;
        }
        // the step no longer changes the state at working precision
        let rate = y
            .iter()
            .zip(&k[0])
            .map(|(yi, fi)| fi.abs() / (yi.abs() + cfg.atol))
            .fold(0.0f64, f64::max);
        if rate > 0.0 && h * rate < 4.0 * f64::EPSILON {
            return Err(Error::StepUnderflow {
                time: t,
                trajectory: Box::new(Trajectory {
                    points,
                    outcome: Outcome::Completed,
                }),
            });
        }
    }
    let outcome = if state.norm() < cfg.decay_threshold {
        Outcome::Decayed
    } else {
        Outcome::Completed
    };
    Ok(Trajectory { points, outcome })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepCell {
    pub lambda3_0: f64,
    pub r_0: f64,
    pub outcome: Outcome,
    /// `r` at the last accepted step.
    pub r_terminal: f64,
}

/// Integrate the reduced system from every `(λ₃(0), r(0))` pair.
/// Cells are independent and run in parallel; output order is row-major
/// in `(lambda3_values, r_values)`.
pub fn phase_sweep(lambda3_values: &[f64], r_values: &[f64], cfg: &ToyConfig) -> Result<Vec<SweepCell>> {
    let cfg = ToyConfig {
        keep_trajectory: false,
        ..cfg.clone()
    };
    let cells: Vec<(f64, f64)> = lambda3_values
        .iter()
        .flat_map(|&l| r_values.iter().map(move |&r| (l, r)))
        .collect();
    cells
        .par_iter()
        .map(|&(l, r)| {
            let traj = integrate(ToyState::reduced(l, r)?, &cfg)?;
            Ok(SweepCell {
                lambda3_0: l,
                r_0: r,
                outcome: traj.outcome,
                r_terminal: traj.last().state.ratio().unwrap_or(f64::NAN),
            })
        })
        .collect()
}

/// `n` points from `a` to `b` inclusive.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect(),
    }
}

pub fn write_trajectory_csv<W: Write>(mut w: W, traj: &Trajectory) -> Result<()> {
    writeln!(w, "t,lambda1,lambda2,lambda3,r,inv_lambda3")?;
    for p in &traj.points {
        let l = p.state.eigenvalues();
        let r = p.state.ratio().unwrap_or(f64::NAN);
        writeln!(
            w,
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            p.t,
            l[0],
            l[1],
            l[2],
            r,
            1.0 / l[2]
        )?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_sweep_csv<W: Write>(mut w: W, cells: &[SweepCell]) -> Result<()> {
    writeln!(w, "lambda3_0,r_0,outcome,T_est,r_terminal")?;
    for c in cells {
        let t = c.outcome.t_est().unwrap_or(f64::NAN);
        writeln!(
            w,
            "{:.16e},{:.16e},{},{:.16e},{:.16e}",
            c.lambda3_0,
            c.r_0,
            c.outcome.label(),
            t,
            c.r_terminal
        )?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sym3::rotation_from_quaternion;

    #[test]
    fn rhs_examples() {
        let m = TraceFreeSym3::diag(-2.0, 1.0, 1.0).unwrap();
        let d = rhs_matrix(&m) - m;
        assert!(d.norm() < 1e-15);
        assert_eq!(rhs_matrix(&TraceFreeSym3::ZERO), TraceFreeSym3::ZERO);
        assert_eq!(rhs_reduced(1.5, 2.0).unwrap(), (2.25, 0.0));
        assert_eq!(rhs_reduced(2.0, 0.5).unwrap(), (-2.0, 0.0));
        let (dl, _) = rhs_reduced(1.0, growth_root()).unwrap();
        assert!(dl.abs() < 1e-15);
        assert!(rhs_reduced(1.0, 2.1).is_err());
        assert!(rhs_reduced(1.0, 0.4).is_err());
        assert!(rhs_reduced(0.0, 1.0).is_err());
    }

    #[test]
    fn bound_examples() {
        assert_eq!(blowup_time_bound(1.0, 2.0), Some(1.0));
        assert!(blowup_time_bound(1.0, 1.0).is_none());
        assert!((blowup_time_bound(1.0, 1.9).unwrap() - 3.0 / g(1.9)).abs() < 1e-15);
    }

    #[test]
    fn reduced_system_matches_matrix_rhs() {
        // eigenvalues of rhs_matrix on diag(λ₁, λ₂, λ₃) give the reduced rates
        let (l3, r) = (1.3, 1.4);
        let m = TraceFreeSym3::diag(-r * l3, (r - 1.0) * l3, l3).unwrap();
        let dm = rhs_matrix(&m);
        let (dl3, dr) = rhs_reduced(l3, r).unwrap();
        assert!((dm.m33() - dl3).abs() < 1e-13);
        // dλ₁ = -(dr λ₃ + r dλ₃)
        assert!((dm.m11() + dr * l3 + r * dl3).abs() < 1e-13);
    }

    #[test]
    fn exact_blowup_solution() {
        for c in [0.5, 1.0, 2.0] {
            let m0 = TraceFreeSym3::diag(-2.0 * c, c, c).unwrap();
            let cfg = ToyConfig {
                t_end: 3.0 / c,
                ..ToyConfig::default()
            };
            let traj = integrate(ToyState::Matrix(m0), &cfg).unwrap();
            let t = traj.outcome.t_est().expect("blew up");
            assert!((t - 1.0 / c).abs() * c < 1e-6, "c = {c}: {t}");
        }
    }

    #[test]
    fn exact_decay_solution() {
        let m0 = TraceFreeSym3::diag(-1.0, -1.0, 2.0).unwrap();
        let traj = integrate(ToyState::Matrix(m0), &ToyConfig::default()).unwrap();
        assert_eq!(traj.outcome, Outcome::Completed);
        let l3 = traj.last().state.lambda3();
        assert!((l3 - 2.0 / 11.0).abs() < 1e-8);
        let long = ToyConfig {
            t_end: 1e7,
            ..ToyConfig::default()
        };
        let traj = integrate(ToyState::Matrix(m0), &long).unwrap();
        assert_eq!(traj.outcome, Outcome::Decayed);
    }

    #[test]
    fn generic_blowup_reaches_ratio_two() {
        let cfg = ToyConfig {
            t_end: 1e3,
            ..ToyConfig::default()
        };
        let traj = integrate(ToyState::reduced(1.0, 1.0).unwrap(), &cfg).unwrap();
        let t = traj.outcome.t_est().unwrap();
        let (_, r) = traj.sample_at(t - 1e-6 * t).unwrap();
        assert!((r - 2.0).abs() < 1e-3, "{r}");
        let slope = traj.terminal_inverse_slope().unwrap();
        assert!((slope + 1.0).abs() < 1e-2, "{slope}");
        for w in traj.points.windows(2) {
            assert!(w[1].state.ratio().unwrap() >= w[0].state.ratio().unwrap());
        }
    }

    #[test]
    fn eigenvectors_are_frozen() {
        let rot = rotation_from_quaternion([0.3, -0.5, 0.7, 0.2]);
        let m0 = TraceFreeSym3::diag(-1.2, 0.1, 1.1).unwrap().rotated(&rot);
        let cfg = ToyConfig {
            t_end: 0.5,
            ..ToyConfig::default()
        };
        let traj = integrate(ToyState::Matrix(m0), &cfg).unwrap();
        let top = |m: &TraceFreeSym3| m.eigenvector(m.eigen_unchecked().lambda3).unwrap();
        let v0 = top(&m0);
        for p in &traj.points {
            let ToyState::Matrix(m) = p.state else { unreachable!() };
            let v = top(&m);
            let c = crate::sym3::dot3(&v, &v0).abs();
            assert!(1.0 - c < 1e-8);
            let l = p.state.eigenvalues();
            assert!((l[0] + l[1] + l[2]).abs() < 1e-10 * m.norm());
        }
    }

    #[test]
    fn csv_headers() {
        let traj = integrate(ToyState::reduced(1.0, 2.0).unwrap(), &ToyConfig::default()).unwrap();
        let mut out = Vec::new();
        write_trajectory_csv(&mut out, &traj).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert!(text.starts_with("t,lambda1,lambda2,lambda3,r,inv_lambda3\n"));
        let cells = phase_sweep(&[1.0], &[0.5, 2.0], &ToyConfig { t_end: 1e7, ..Default::default() }).unwrap();
        assert_eq!(cells[0].outcome, Outcome::Decayed);
        assert!(matches!(cells[1].outcome, Outcome::BlewUp { .. }));
        let mut out = Vec::new();
        write_sweep_csv(&mut out, &cells).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert!(text.starts_with("lambda3_0,r_0,outcome,T_est,r_terminal\n"));
        assert!(text.contains(",decayed,") && text.contains(",blew_up,"));
    }
}
