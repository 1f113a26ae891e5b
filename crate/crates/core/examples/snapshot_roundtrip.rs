//! Simulate with snapshots on disk, then rebuild the diagnostics from the
//! snapshots alone.

use strainflow::app;
use strainflow::config::{RawConfig, RunConfig};

fn main() -> strainflow::Result<()> {
    let dir = std::env::temp_dir().join("strainflow_snapshot_example");
    let _ = std::fs::remove_dir_all(&dir);
    let text = format!(
        "n = 16\ninitial_data = random_div_free\nseed = 5\nt_end = 0.05\ndt = 1e-3\nrecord_every = 5\n\
         snapshot_dir = {}\nsnapshot_every = 1\n",
        dir.display()
    );
    let cfg = RunConfig::from_raw(&RawConfig::parse(&text)?)?;
    let run = app::simulate(&cfg)?;

    let mut files: Vec<_> = std::fs::read_dir(&dir)?.map(|e| e.map(|e| e.path())).collect::<Result<_, _>>()?;
    files.sort();
    let rebuilt = app::diagnose(&cfg, &files)?;
    println!("{} records in the run, {} snapshots on disk", run.records.len(), files.len());
    for (a, b) in run.records.iter().zip(&rebuilt) {
        println!("t = {:.3}: E run {:.12e}, E from snapshot {:.12e}", a.t, a.enstrophy, b.enstrophy);
    }
    std::fs::remove_dir_all(&dir)?;
    Ok(())
}
