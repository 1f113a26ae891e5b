//! The matrix toy model: blow-up of diag(-2, 1, 1)·C at t = 1/C, decay of
//! diag(-1, -1, 2)·C, and a generic start drawn to the r = 2 attractor.

use strainflow::toy_ode::{integrate, ToyConfig, ToyState};
use strainflow::TraceFreeSym3;

fn main() -> strainflow::Result<()> {
    for c in [0.5, 1.0, 2.0] {
        let cfg = ToyConfig { t_end: 3.0 / c, ..ToyConfig::default() };
        let traj = integrate(ToyState::Matrix(TraceFreeSym3::diag(-2.0 * c, c, c)?), &cfg)?;
        let t = traj.outcome.t_est().unwrap_or(f64::NAN);
        println!("C = {c}: {} at {t:.12} (exact {:.12}), {} points", traj.outcome.label(), 1.0 / c, traj.points.len());
    }

    let traj = integrate(ToyState::Matrix(TraceFreeSym3::diag(-1.0, -1.0, 2.0)?), &ToyConfig::default())?;
    let last = traj.last();
    println!(
        "diag(-1,-1,2): {} at t = {}, λ₃ = {:.12} (exact {:.12})",
        traj.outcome.label(),
        last.t,
        last.state.lambda3(),
        2.0 / (1.0 + last.t)
    );

    let m0 = TraceFreeSym3::new(0.4, -0.9, 0.3, 0.2, -0.5);
    let traj = integrate(ToyState::Matrix(m0), &ToyConfig { t_end: 100.0, ..ToyConfig::default() })?;
    println!(
        "generic start, r₀ = {:.4}: {} with terminal r = {:.8}, d(1/λ₃)/dt → {:.6}",
        ToyState::Matrix(m0).ratio().unwrap_or(f64::NAN),
        traj.outcome.label(),
        traj.last().state.ratio().unwrap_or(f64::NAN),
        traj.terminal_inverse_slope().unwrap_or(f64::NAN)
    );
    Ok(())
}
