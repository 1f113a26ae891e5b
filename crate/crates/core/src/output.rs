//! Diagnostics CSV output.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::diagnostics::DiagnosticsRecord;
use crate::error::Result;

pub const DIAGNOSTIC_COLUMNS: [&str; 16] = [
    "t",
    "E",
    "diss_H1",
    "det_int",
    "tr3_int",
    "vortex_stretch",
    "lam2p_Linf",
    "lam2p_L2",
    "lam2p_L32",
    "crit_int_qinf",
    "crit_int_q2",
    "budget_resid",
    "vs_ident_resid",
    "gcon_margin",
    "cubic_margin",
    "force_term",
];

/// One CSV row in column order. Series-dependent columns are NaN when the
/// record series could not be finalized.
pub fn diagnostic_row(r: &DiagnosticsRecord) -> [f64; 16] {
    let nan = f64::NAN;
    let s = r.series;
    [
        r.t,
        r.enstrophy,
        r.dissipation,
        r.det_integral,
        r.tr3_integral,
        r.vortex_stretch,
        r.lam2p_linf,
        r.lam2p_l2,
        r.lam2p_l32,
        s.map_or(nan, |s| s.crit_int_qinf),
        s.map_or(nan, |s| s.crit_int_q2),
        s.map_or(nan, |s| s.budget_resid),
        r.vs_ident_resid,
        s.map_or(nan, |s| s.gcon_margin),
        s.map_or(nan, |s| s.cubic_margin),
        r.force_term,
    ]
}

/// Header plus one row per record, 17 significant digits.
pub fn write_diagnostics_csv<W: Write>(mut w: W, records: &[DiagnosticsRecord]) -> Result<()> {
    writeln!(w, "{}", DIAGNOSTIC_COLUMNS.join(","))?;
    for r in records {
        let row = diagnostic_row(r);
        let cells: Vec<String> = row.iter().map(|x| format!("{x:.16e}")).collect();
        writeln!(w, "{}", cells.join(","))?;
    }
    w.flush()?;
    Ok(())
}

/// Write through a temporary sibling file and rename, so a failed write
/// never leaves a partial file at `path`.
pub fn write_file_atomically<F>(path: &Path, body: F) -> Result<()>
where
    F: FnOnce(&mut BufWriter<fs::File>) -> Result<()>,
{
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".partial");
    let tmp = std::path::PathBuf::from(tmp);
    let result = (|| {
        let mut w = BufWriter::new(fs::File::create(&tmp)?);
        body(&mut w)?;
        w.flush()?;
        drop(w);
        fs::rename(&tmp, path)?;
        Ok(())
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    result
}

/// Parse a diagnostics CSV back into its header and rows.
pub fn read_csv(text: &str) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let mut lines = text.lines();
    let header: Vec<String> = lines
        .next()
        .unwrap_or_default()
        .split(',')
        .map(|s| s.trim().to_string())
        .collect();
    let mut rows = Vec::new();
    for line in lines.filter(|l| !l.trim().is_empty()) {
        let row = line
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|_| crate::error::Error::invalid(format!("bad CSV cell {s:?}")))
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    Ok((header, rows))
}
