//! Reduced toy-model sweep over (λ₃(0), r(0)), written as CSV to stdout.

use strainflow::toy_ode::{blowup_time_bound, linspace, phase_sweep, write_sweep_csv, ToyConfig};

fn main() -> strainflow::Result<()> {
    let cfg = ToyConfig { t_end: 1e7, ..ToyConfig::default() };
    let cells = phase_sweep(&linspace(0.1, 10.0, 6), &linspace(0.5, 2.0, 7), &cfg)?;
    write_sweep_csv(std::io::stdout().lock(), &cells)?;
    for c in cells.iter().filter(|c| c.r_0 > 1.4) {
        if let (Some(t), Some(b)) = (c.outcome.t_est(), blowup_time_bound(c.lambda3_0, c.r_0)) {
            eprintln!("λ₃₀ = {:5.2}, r₀ = {:.2}: T = {t:.6} <= bound {b:.6}", c.lambda3_0, c.r_0);
        }
    }
    Ok(())
}
