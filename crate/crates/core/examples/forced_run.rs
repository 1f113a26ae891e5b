//! A forced run configured the same way as the command line, with the
//! diagnostics CSV written to stdout.

use strainflow::config::{RawConfig, RunConfig};
use strainflow::output::write_diagnostics_csv;

fn main() -> strainflow::Result<()> {
    let raw = RawConfig::parse(
        "n = 16\n\
         initial_data = taylor_green\n\
         force = shear\n\
         force_amplitude = 0.5\n\
         viscosity = 0.5\n\
         t_end = 0.2\n\
         dt = 2e-3\n\
         record_every = 5\n\
         q_list = 4, 6\n",
    )?;
    let mut cfg = RunConfig::from_raw(&raw)?;
    cfg.csv = None;
    let out = strainflow::app::simulate(&cfg)?;
    write_diagnostics_csv(std::io::stdout().lock(), &out.records)?;
    let last = out.records.last().expect("at least one record");
    eprintln!("final ‖λ₂⁺‖_4 = {:?}, ‖λ₂⁺‖_6 = {:?}", last.lambda2_norm(4.0), last.lambda2_norm(6.0));
    Ok(())
}
