//! Scalar functionals of solver snapshots: enstrophy budget terms, the
//! determinant and vortex-stretching identities, `λ₂⁺` norms and the
//! regularity-criterion integrals built from them.
//!
//! Per-snapshot quantities come from [`analyze`]. Quantities that need a
//! time derivative or a time integral are filled in afterwards by
//! [`finalize_series`], using fourth-order finite differences on uniformly
//! spaced records.
//!
//! Budget identities are stated for viscosity `ν`; the dissipation term is
//! scaled by `ν`.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::solver::SolverState;
use crate::spectral::{
    gradient_tensor, neg_laplacian, sobolev_norm_sq, sym_gradient, vorticity,
    DirectionPartition, Grid, SpectralField3,
};
use crate::sym3::{dot3, EigenTriple, TraceFreeSym3};

pub const MIN_SERIES_RECORDS: usize = 5;

/// `1/(1458π⁴)`, the whole-space constant of the cubic enstrophy growth bound.
pub fn cubic_growth_constant() -> f64 {
    1.0 / (1458.0 * PI.powi(4))
}

/// `1/C_s² = 3 (π/2)^{4/3}` with `C_s = (1/√3)(2/π)^{2/3}`.
pub fn borderline_reference() -> f64 {
    let cs = (1.0 / 3f64.sqrt()) * (2.0 / PI).powf(2.0 / 3.0);
    1.0 / (cs * cs)
}

/// Time exponent `p` paired with `q` by `2/p + 3/q = 2`, for `q > 3/2`.
pub fn criterion_exponent(q: f64) -> Result<f64> {
    if q == f64::INFINITY {
        Ok(1.0)
    } else if q > 1.5 && q.is_finite() {
        Ok(2.0 * q / (2.0 * q - 3.0))
    } else {
        Err(Error::InvalidExponent(q))
    }
}

#[derive(Clone, Debug)]
pub struct AnalysisConfig {
    pub viscosity: f64,
    pub extra_q: Vec<f64>,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            viscosity: 1.0,
            extra_q: Vec::new(),
        }
    }
}

/// Columns that depend on the whole record series.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeriesTerms {
    pub de_dt: f64,
    pub crit_int_qinf: f64,
    pub crit_int_q2: f64,
    pub budget_resid: f64,
    pub gcon_margin: f64,
    pub cubic_margin: f64,
}

/// One time sample of all scalar diagnostics.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagnosticsRecord {
    pub t: f64,
    /// `½‖u‖²`
    pub energy: f64,
    /// `‖∇⊗u‖²`
    pub grad_norm_sq: f64,
    /// `‖ω‖²`
    pub vorticity_norm_sq: f64,
    /// `E = ‖S‖²`
    pub enstrophy: f64,
    /// `‖S‖²_{Ḣ¹}`
    pub dissipation: f64,
    pub det_integral: f64,
    pub tr3_integral: f64,
    /// `⟨S, ω⊗ω⟩`
    pub vortex_stretch: f64,
    /// `∫|S|³`
    pub strain_cubed_integral: f64,
    /// `∫λ₂⁺|S|²`
    pub lam2p_strain_integral: f64,
    pub lam2p_linf: f64,
    pub lam2p_l2: f64,
    pub lam2p_l32: f64,
    /// `(q, ‖λ₂⁺‖_q)` for the configured extra exponents.
    pub lam2p_extra: Vec<(f64, f64)>,
    pub vs_ident_resid: f64,
    /// `⟨-Δu, f⟩`
    pub force_term: f64,
    /// `⟨u, f⟩`
    pub force_work: f64,
    /// `‖f‖²`
    pub force_norm_sq: f64,
    pub series: Option<SeriesTerms>,
}

impl DiagnosticsRecord {
    /// `‖λ₂⁺‖_q` if it was recorded for this `q`.
    pub fn lambda2_norm(&self, q: f64) -> Option<f64> {
        if q == f64::INFINITY {
            Some(self.lam2p_linf)
        } else if q == 2.0 {
            Some(self.lam2p_l2)
        } else if q == 1.5 {
            Some(self.lam2p_l32)
        } else {
            self.lam2p_extra.iter().find(|(x, _)| *x == q).map(|(_, v)| *v)
        }
    }
}

/// Per-point strain data on the grid.
#[derive(Clone, Debug)]
pub struct PointwiseAnalysis {
    pub eigen: Vec<EigenTriple>,
    pub det: Vec<f64>,
    pub lambda2_plus: Vec<f64>,
    pub strain_sq: Vec<f64>,
    pub strains: Vec<TraceFreeSym3>,
}

impl PointwiseAnalysis {
    /// Minimum over points of `gap / |S|³`-style normalized gaps; `None` for a zero field.
    pub fn min_det_bound_gap(&self) -> f64 {
        self.strains
            .iter()
            .map(|m| m.det_bound_gap())
            .fold(f64::INFINITY, f64::min)
    }

    pub fn min_lambda2_bound_gap(&self) -> f64 {
        self.strains
            .iter()
            .map(|m| m.lambda2_bound_gap())
            .fold(f64::INFINITY, f64::min)
    }

    /// Number of points where `-det S <= ½|S|²λ₂⁺` fails beyond `1e-12 |S|³`.
    pub fn lambda2_bound_violations(&self) -> usize {
        self.strains
            .iter()
            .filter(|m| m.lambda2_bound_gap() < -1e-12 * m.norm().powi(3))
            .count()
    }

    pub fn max_strain(&self) -> f64 {
        self.strain_sq.iter().fold(0.0f64, |a, b| a.max(*b)).sqrt()
    }
}

pub fn pointwise_strain_analysis(state: &SolverState) -> PointwiseAnalysis {
    pointwise_of_velocity(&state.u_hat)
}

pub fn pointwise_of_velocity(u: &SpectralField3) -> PointwiseAnalysis {
    let s = sym_gradient(u).to_physical();
    let strains: Vec<TraceFreeSym3> = (0..u.grid().len()).map(|idx| s.at(idx)).collect();
    let eigen: Vec<EigenTriple> = strains.par_iter().map(|m| m.eigen_unchecked()).collect();
    PointwiseAnalysis {
        det: strains.iter().map(|m| m.det()).collect(),
        lambda2_plus: eigen.iter().map(|e| e.lambda2_plus).collect(),
        strain_sq: strains.iter().map(|m| m.norm_sq()).collect(),
        eigen,
        strains,
    }
}

/// Compensated sum, so that grid integrals do not depend on cancellation luck.
pub(crate) fn neumaier_sum<I: IntoIterator<Item = f64>>(it: I) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for x in it {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

fn lq_norm_raw(values: &[f64], grid: &Grid, q: f64) -> f64 {
    if q == f64::INFINITY {
        return values.iter().fold(0.0f64, |m, v| m.max(*v));
    }
    let s = neumaier_sum(values.iter().map(|v| v.powf(q)));
    (s * grid.cell_volume()).powf(1.0 / q)
}

fn check_nonnegative(values: &[f64], grid: &Grid) -> Result<()> {
    grid.check_len(values.len())?;
    if let Some(v) = values.iter().find(|v| !(**v >= 0.0)) {
        return Err(Error::invalid(format!("L^q norm of a field with value {v}")));
    }
    Ok(())
}

/// Discrete `L^q` norm of a non-negative grid function, `q ∈ (3/2, ∞]`.
pub fn lq_norm(values: &[f64], grid: &Grid, q: f64) -> Result<f64> {
    criterion_exponent(q)?;
    check_nonnegative(values, grid)?;
    Ok(lq_norm_raw(values, grid, q))
}

/// `L^{3/2}` norm, used only by the borderline monitor.
pub fn borderline_norm(values: &[f64], grid: &Grid) -> Result<f64> {
    check_nonnegative(values, grid)?;
    Ok(lq_norm_raw(values, grid, 1.5))
}

/// The three forms of the vortex-stretching term on one snapshot.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VortexStretchTerms {
    /// `⟨S, ω⊗ω⟩`
    pub stretch: f64,
    /// `-4∫det S`
    pub det_form: f64,
    /// `-(4/3)∫tr(S³)`
    pub tr3_form: f64,
    /// `∫|S|³`, which bounds all three in magnitude.
    pub scale: f64,
}

impl VortexStretchTerms {
    /// Largest pairwise difference divided by `∫|S|³` (zero for a zero field).
    pub fn residual(&self) -> f64 {
        let v = [self.stretch, self.det_form, self.tr3_form];
        let mut d: f64 = 0.0;
        for i in 0..3 {
            for j in i + 1..3 {
                d = d.max((v[i] - v[j]).abs());
            }
        }
        if self.scale > 0.0 {
            d / self.scale
        } else {
            d
        }
    }
}

struct PointTerms {
    det: f64,
    tr3: f64,
    stretch: f64,
    s3: f64,
    s2: f64,
    lam2p: f64,
}

fn point_terms(u: &SpectralField3) -> Vec<PointTerms> {
    let grid = u.grid();
    let s = sym_gradient(u).to_physical();
    let w = vorticity(u).to_physical();
    (0..grid.len())
        .into_par_iter()
        .map(|idx| {
            let m = s.at(idx);
            let om = w.at(idx);
            let s2 = m.norm_sq();
            PointTerms {
                det: m.det(),
                tr3: m.tr_cubed(),
                stretch: dot3(&om, &m.mul_vec(&om)),
                s3: s2 * s2.sqrt(),
                s2,
                lam2p: m.eigen_unchecked().lambda2_plus,
            }
        })
        .collect()
}

fn stretch_terms(pts: &[PointTerms], grid: &Grid) -> VortexStretchTerms {
    let dv = grid.cell_volume();
    VortexStretchTerms {
        stretch: dv * neumaier_sum(pts.iter().map(|p| p.stretch)),
        det_form: -4.0 * dv * neumaier_sum(pts.iter().map(|p| p.det)),
        tr3_form: -4.0 / 3.0 * dv * neumaier_sum(pts.iter().map(|p| p.tr3)),
        scale: dv * neumaier_sum(pts.iter().map(|p| p.s3)),
    }
}

pub fn vortex_stretch_terms(u: &SpectralField3) -> VortexStretchTerms {
    stretch_terms(&point_terms(u), u.grid())
}

/// Residual of `⟨S, ω⊗ω⟩ = -4∫det S = -(4/3)∫tr(S³)`, see [`VortexStretchTerms::residual`].
pub fn vortex_stretch_identity_residual(state: &SolverState) -> f64 {
    vortex_stretch_terms(&state.u_hat).residual()
}

/// All per-snapshot diagnostics. `force` is the (projected) forcing at `state.t`.
pub fn analyze(
    state: &SolverState,
    force: Option<&SpectralField3>,
    cfg: &AnalysisConfig,
) -> DiagnosticsRecord {
    let u = &state.u_hat;
    let grid = u.grid();
    let strain = sym_gradient(u);
    let pts = point_terms(u);
    let st = stretch_terms(&pts, grid);
    let dv = grid.cell_volume();
    let lam: Vec<f64> = pts.iter().map(|p| p.lam2p).collect();
    let (force_term, force_work, force_norm_sq) = match force {
        Some(f) => (neg_laplacian(u).inner(f), u.inner(f), f.inner(f)),
        None => (0.0, 0.0, 0.0),
    };
    DiagnosticsRecord {
        t: state.t,
        energy: u.energy(),
        grad_norm_sq: sobolev_norm_sq(&gradient_tensor(u), 0.0).unwrap_or(f64::NAN),
        vorticity_norm_sq: sobolev_norm_sq(&vorticity(u), 0.0).unwrap_or(f64::NAN),
        enstrophy: sobolev_norm_sq(&strain, 0.0).unwrap_or(f64::NAN),
        dissipation: sobolev_norm_sq(&strain, 1.0).unwrap_or(f64::NAN),
        det_integral: dv * neumaier_sum(pts.iter().map(|p| p.det)),
        tr3_integral: dv * neumaier_sum(pts.iter().map(|p| p.tr3)),
        vortex_stretch: st.stretch,
        strain_cubed_integral: st.scale,
        lam2p_strain_integral: dv * neumaier_sum(pts.iter().map(|p| p.lam2p * p.s2)),
        lam2p_linf: lq_norm_raw(&lam, grid, f64::INFINITY),
        lam2p_l2: lq_norm_raw(&lam, grid, 2.0),
        lam2p_l32: lq_norm_raw(&lam, grid, 1.5),
        lam2p_extra: cfg
            .extra_q
            .iter()
            .map(|&q| (q, lq_norm_raw(&lam, grid, q)))
            .collect(),
        vs_ident_resid: st.residual(),
        force_term,
        force_work,
        force_norm_sq,
        series: None,
    }
}

/// Common spacing of the record times; fails unless there are at least
/// five records spaced uniformly to `1e-6` relative.
pub fn uniform_spacing(records: &[DiagnosticsRecord]) -> Result<f64> {
    if records.len() < MIN_SERIES_RECORDS {
        return Err(Error::TooFewRecords {
            needed: MIN_SERIES_RECORDS,
            got: records.len(),
        });
    }
    let n = records.len() - 1;
    let h = (records[n].t - records[0].t) / n as f64;
    if !(h > 0.0) {
        return Err(Error::NonUniformSpacing);
    }
    for w in records.windows(2) {
        if ((w[1].t - w[0].t) - h).abs() > 1e-6 * h {
            return Err(Error::NonUniformSpacing);
        }
    }
    Ok(h)
}

/// Fourth-order finite-difference derivative of uniformly sampled values:
/// centered five-point stencil inside, one-sided five-point stencils at the
/// two points nearest each end.
pub fn time_derivative(values: &[f64], h: f64) -> Result<Vec<f64>> {
    let n = values.len();
    if n < 5 {
        return Err(Error::TooFewRecords { needed: 5, got: n });
    }
    let f = values;
    let c = 1.0 / (12.0 * h);
    let mut d = vec![0.0; n];
    d[0] = c * (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]);
    d[1] = c * (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]);
    for i in 2..n - 2 {
        d[i] = c * (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]);
    }
    let m = n - 1;
    d[m - 1] = -c * (-3.0 * f[m] - 10.0 * f[m - 1] + 18.0 * f[m - 2] - 6.0 * f[m - 3] + f[m - 4]);
    d[m] = -c * (-25.0 * f[m] + 48.0 * f[m - 1] - 36.0 * f[m - 2] + 16.0 * f[m - 3] - 3.0 * f[m - 4]);
    Ok(d)
}

/// `∫_{t₀}^{tᵢ} f` for every record: trapezoidal rule with the endpoint
/// correction `-(h²/12)(f'(tᵢ) - f'(t₀))`, fourth-order accurate.
pub fn cumulative_integral(values: &[f64], h: f64) -> Result<Vec<f64>> {
    let d = time_derivative(values, h)?;
    let mut out = Vec::with_capacity(values.len());
    let mut trap = 0.0;
    out.push(0.0);
    for i in 1..values.len() {
        trap += 0.5 * h * (values[i - 1] + values[i]);
        out.push(trap - h * h / 12.0 * (d[i] - d[0]));
    }
    Ok(out)
}

fn cumulative_trapezoid(values: &[f64], h: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(values.len());
    let mut acc = 0.0;
    out.push(0.0);
    for w in values.windows(2) {
        acc += 0.5 * h * (w[0] + w[1]);
        out.push(acc);
    }
    out
}

/// `∫‖λ₂⁺‖_q^p dt` along the series (trapezoidal), `p = 2q/(2q - 3)`.
pub fn criterion_integral(records: &[DiagnosticsRecord], q: f64) -> Result<f64> {
    Ok(*criterion_series(records, q)?.last().unwrap())
}

/// Running value of [`criterion_integral`] at every record.
pub fn criterion_series(records: &[DiagnosticsRecord], q: f64) -> Result<Vec<f64>> {
    let p = criterion_exponent(q)?;
    let h = uniform_spacing(records)?;
    let vals: Vec<f64> = records
        .iter()
        .map(|r| {
            r.lambda2_norm(q)
                .map(|v| v.powf(p))
                .ok_or_else(|| Error::invalid(format!("‖λ₂⁺‖_q was not recorded for q = {q}")))
        })
        .collect::<Result<_>>()?;
    Ok(cumulative_trapezoid(&vals, h))
}

fn enstrophy_rate(records: &[DiagnosticsRecord]) -> Result<Vec<f64>> {
    let h = uniform_spacing(records)?;
    let e: Vec<f64> = records.iter().map(|r| r.enstrophy).collect();
    time_derivative(&e, h)
}

/// `dE/dt + 2ν‖S‖²_{Ḣ¹} + 4∫det S - ⟨-Δu, f⟩`, each relative to the largest
/// of the four terms in magnitude.
pub fn enstrophy_budget_residual(records: &[DiagnosticsRecord], viscosity: f64) -> Result<Vec<f64>> {
    let de = enstrophy_rate(records)?;
    Ok(records
        .iter()
        .zip(de)
        .map(|(r, d)| {
            let terms = [d, 2.0 * viscosity * r.dissipation, 4.0 * r.det_integral, -r.force_term];
            let scale = terms.iter().fold(0.0f64, |m, x| m.max(x.abs()));
            let sum: f64 = terms.iter().sum();
            if scale > 0.0 {
                sum / scale
            } else {
                0.0
            }
        })
        .collect())
}

/// Margin of `dE/dt <= -ν‖S‖²_{Ḣ¹} + 2∫λ₂⁺|S|² + ‖f‖²/(2ν)`, i.e. right side
/// minus left side, per record.
pub fn gcon_inequality_margin(records: &[DiagnosticsRecord], viscosity: f64) -> Result<Vec<f64>> {
    let de = enstrophy_rate(records)?;
    Ok(records
        .iter()
        .zip(de)
        .map(|(r, d)| gcon_rhs(r, viscosity) - d)
        .collect())
}

fn gcon_rhs(r: &DiagnosticsRecord, viscosity: f64) -> f64 {
    -viscosity * r.dissipation + 2.0 * r.lam2p_strain_integral + r.force_norm_sq / (2.0 * viscosity)
}

/// Magnitude scale of the gcon terms, for tolerance purposes.
pub fn gcon_scale(r: &DiagnosticsRecord, viscosity: f64) -> f64 {
    let de = r.series.map(|s| s.de_dt.abs()).unwrap_or(0.0);
    [
        de,
        viscosity * r.dissipation,
        2.0 * r.lam2p_strain_integral,
        r.force_norm_sq / (2.0 * viscosity),
    ]
    .into_iter()
    .fold(0.0, f64::max)
}

/// `(E(0) + ∫‖f‖²/(2ν)) · exp(2∫‖λ₂⁺‖_∞ dt)` at every record; only `q = ∞`.
pub fn gronwall_envelope(records: &[DiagnosticsRecord], q: f64, viscosity: f64) -> Result<Vec<f64>> {
    if q != f64::INFINITY {
        return Err(Error::Unsupported(format!(
            "no explicit Gronwall constant for q = {q}; use gronwall_envelope_with_constant"
        )));
    }
    gronwall_envelope_with_constant(records, q, 2.0, viscosity)
}

/// Gronwall envelope with a caller-chosen constant `C_q`.
pub fn gronwall_envelope_with_constant(
    records: &[DiagnosticsRecord],
    q: f64,
    c_q: f64,
    viscosity: f64,
) -> Result<Vec<f64>> {
    let crit = criterion_series(records, q)?;
    let h = uniform_spacing(records)?;
    let f2: Vec<f64> = records.iter().map(|r| r.force_norm_sq / (2.0 * viscosity)).collect();
    let forced = cumulative_trapezoid(&f2, h);
    let e0 = records[0].enstrophy;
    Ok(crit
        .iter()
        .zip(forced)
        .map(|(c, f)| (e0 + f) * (c_q * c).exp())
        .collect())
}

/// `E³/(1458π⁴) - dE/dt` per record. Monitor only.
pub fn cubic_growth_check(records: &[DiagnosticsRecord]) -> Result<Vec<f64>> {
    let de = enstrophy_rate(records)?;
    let c = cubic_growth_constant();
    Ok(records
        .iter()
        .zip(de)
        .map(|(r, d)| c * r.enstrophy.powi(3) - d)
        .collect())
}

#[derive(Clone, Debug, PartialEq)]
pub struct BorderlineSeries {
    /// `1/C_s²`
    pub reference: f64,
    /// `(t, ‖λ₂⁺‖_{L^{3/2}})`
    pub values: Vec<(f64, f64)>,
}

pub fn borderline_monitor(records: &[DiagnosticsRecord]) -> BorderlineSeries {
    BorderlineSeries {
        reference: borderline_reference(),
        values: records.iter().map(|r| (r.t, r.lam2p_l32)).collect(),
    }
}

/// `‖S v‖_{L^q}` for a piecewise-constant unit direction field, `q ∈ (3/2, ∞]`.
pub fn directional_criterion(
    state: &SolverState,
    partition: &DirectionPartition,
    q: f64,
) -> Result<f64> {
    let sv = crate::spectral::directional_strain(&state.u_hat, partition)?;
    let grid = state.u_hat.grid();
    let mags: Vec<f64> = (0..grid.len())
        .map(|idx| crate::sym3::norm3(&sv.at(idx)))
        .collect();
    lq_norm(&mags, grid, q)
}

/// Fill [`DiagnosticsRecord::series`] for every record.
pub fn finalize_series(records: &mut [DiagnosticsRecord], viscosity: f64) -> Result<()> {
    let de = enstrophy_rate(records)?;
    let budget = enstrophy_budget_residual(records, viscosity)?;
    let gcon = gcon_inequality_margin(records, viscosity)?;
    let cubic = cubic_growth_check(records)?;
    let crit_inf = criterion_series(records, f64::INFINITY)?;
    let crit_2 = criterion_series(records, 2.0)?;
    for (i, r) in records.iter_mut().enumerate() {
        r.series = Some(SeriesTerms {
            de_dt: de[i],
            crit_int_qinf: crit_inf[i],
            crit_int_q2: crit_2[i],
            budget_resid: budget[i],
            gcon_margin: gcon[i],
            cubic_margin: cubic[i],
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponents() {
        assert_eq!(criterion_exponent(f64::INFINITY).unwrap(), 1.0);
        assert_eq!(criterion_exponent(2.0).unwrap(), 4.0);
        assert!(criterion_exponent(1.5).is_err());
        assert!(criterion_exponent(1.0).is_err());
        let q = 3.0;
        let p = criterion_exponent(q).unwrap();
        assert!((2.0 / p + 3.0 / q - 2.0).abs() < 1e-15);
    }

    #[test]
    fn borderline_constant_value() {
        let r = borderline_reference();
        assert!((r - 3.0 * (PI / 2.0).powf(4.0 / 3.0)).abs() < 1e-12);
        assert!((r - 5.478).abs() < 1e-3);
    }

    #[test]
    fn lq_norm_of_constant() {
        let g = Grid::new(8).unwrap();
        let c = 0.7;
        let v = vec![c; g.len()];
        for q in [2.0, 3.0, 4.5] {
            let expect = c * (2.0 * PI).powf(3.0 / q);
            assert!((lq_norm(&v, &g, q).unwrap() - expect).abs() < 1e-12 * expect);
        }
        assert_eq!(lq_norm(&v, &g, f64::INFINITY).unwrap(), c);
        assert!(lq_norm(&v, &g, 1.5).is_err());
        assert!(borderline_norm(&v, &g).is_ok());
        let mut neg = v.clone();
        neg[3] = -1.0;
        assert!(lq_norm(&neg, &g, 2.0).is_err());
    }

    #[test]
    fn derivative_stencils_exact_for_quartics() {
        let h = 0.1;
        let f: Vec<f64> = (0..9).map(|i| {
            let t = i as f64 * h;
            t.powi(4) - 2.0 * t.powi(3) + t
        }).collect();
        let d = time_derivative(&f, h).unwrap();
        for (i, di) in d.iter().enumerate() {
            let t = i as f64 * h;
            let exact = 4.0 * t.powi(3) - 6.0 * t * t + 1.0;
            assert!((di - exact).abs() < 1e-12, "{i}: {di} vs {exact}");
        }
        assert!(time_derivative(&f[..4], h).is_err());
    }

    #[test]
    fn cumulative_integral_is_fourth_order() {
        let err = |n: usize| {
            let h = 1.0 / n as f64;
            let f: Vec<f64> = (0..=n).map(|i| (-(i as f64) * h * 3.0).exp()).collect();
            let c = cumulative_integral(&f, h).unwrap();
            let exact = (1.0 - (-3.0f64).exp()) / 3.0;
            (c[n] - exact).abs()
        };
        let ratio = err(20) / err(40);
        assert!(ratio > 12.0 && ratio < 20.0, "{ratio}");
    }
}
