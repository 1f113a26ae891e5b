//! Spectral differential operators, Helmholtz projection and the
//! strain/velocity correspondence.
//!
//! All operators use [`Grid::deriv_wavevector`], so Nyquist components are
//! treated as having zero derivative. This keeps every output Hermitian.

use num_complex::Complex64;

use super::field::{
    check_same_grid, ModalField, PhysicalField3, SpectralField3, SpectralMatrixField,
    SpectralTensorField, TENSOR_ENTRIES,
};
use super::grid::Grid;
use crate::error::{Error, Result};
use crate::sym3::{check_unit, Vec3};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Residual above which [`velocity_from_strain`] refuses its input.
pub const CONSTRAINT_LIMIT: f64 = 1e-10;

/// `Ŝ_jk = (i/2)(ξ_j û_k + ξ_k û_j)` for a divergence-free `u`.
///
/// Only the five independent entries are formed, so the output is trace
/// free by construction; for non-solenoidal input the dropped `S33` carries
/// the error.
pub fn sym_gradient(u: &SpectralField3) -> SpectralTensorField {
    let grid = u.grid();
    let mut s = SpectralTensorField::zeros(grid);
    let comps = s.components_mut();
    for idx in 0..grid.len() {
        let k = grid.deriv_wavevector(idx);
        let v = u.at(idx);
        for (slot, &(j, l)) in TENSOR_ENTRIES.iter().enumerate() {
            comps[slot][idx] = 0.5 * I * (v[l] * k[j] + v[j] * k[l]);
        }
    }
    s
}

/// Full velocity gradient `(∇⊗u)_ij = ∂ᵢuⱼ`.
pub fn gradient_tensor(u: &SpectralField3) -> SpectralMatrixField {
    let grid = u.grid();
    let len = grid.len();
    let mut comps: [[Vec<Complex64>; 3]; 3] =
        std::array::from_fn(|_| std::array::from_fn(|_| vec![Complex64::default(); len]));
    for idx in 0..len {
        let k = grid.deriv_wavevector(idx);
        let v = u.at(idx);
        for (i, row) in comps.iter_mut().enumerate() {
            for (j, c) in row.iter_mut().enumerate() {
                c[idx] = I * k[i] * v[j];
            }
        }
    }
    SpectralMatrixField::new(grid, comps)
}

/// Antisymmetric part `A_ij = ½(∂ᵢuⱼ - ∂ⱼuᵢ)` as a full matrix field.
pub fn antisym_gradient(u: &SpectralField3) -> SpectralMatrixField {
    let grid = u.grid();
    let len = grid.len();
    let mut comps: [[Vec<Complex64>; 3]; 3] =
        std::array::from_fn(|_| std::array::from_fn(|_| vec![Complex64::default(); len]));
    for idx in 0..len {
        let k = grid.deriv_wavevector(idx);
        let v = u.at(idx);
        for (i, row) in comps.iter_mut().enumerate() {
            for (j, c) in row.iter_mut().enumerate() {
                c[idx] = 0.5 * I * (k[i] * v[j] - k[j] * v[i]);
            }
        }
    }
    SpectralMatrixField::new(grid, comps)
}

/// `û_k = -2i Σ_j ξ_j Ŝ_jk / |ξ|²`, with `û(0) = 0`.
///
/// Fails with [`Error::ConstraintViolation`] unless
/// `consistency_residual(s) < 1e-10`.
pub fn velocity_from_strain(s: &SpectralTensorField) -> Result<SpectralField3> {
    let residual = consistency_residual(s);
    if !(residual < CONSTRAINT_LIMIT) {
        return Err(Error::ConstraintViolation {
            residual,
            limit: CONSTRAINT_LIMIT,
        });
    }
    let grid = s.grid();
    let mut u = SpectralField3::zeros(grid);
    for idx in 0..grid.len() {
        let k = grid.deriv_wavevector(idx);
        let k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
        if k2 == 0.0 {
            continue;
        }
        let m = s.matrix_at(idx);
        let v: [Complex64; 3] = std::array::from_fn(|col| {
            let div = m[0][col] * k[0] + m[1][col] * k[1] + m[2][col] * k[2];
            -2.0 * I * div / k2
        });
        u.set(idx, v);
    }
    Ok(u)
}

/// Discrete form of the strain compatibility condition,
/// `max_ξ ‖ |ξ|²Ŝ - (ξ⊗ξ)Ŝ - Ŝ(ξ⊗ξ) ‖_F / max_ξ |ξ|² ‖Ŝ‖_F`.
///
/// Zero exactly for symmetric gradients of divergence-free fields.
pub fn consistency_residual(s: &SpectralTensorField) -> f64 {
    let grid = s.grid();
    let mut num: f64 = 0.0;
    let mut den: f64 = 0.0;
    for idx in 0..grid.len() {
        let k = grid.deriv_wavevector(idx);
        let k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
        let m = s.matrix_at(idx);
        // (ξ⊗ξ)Ŝ has entries ξ_i (ξ·Ŝ)_j where (ξ·Ŝ)_j = Σ_l ξ_l Ŝ_lj
        let ks: [Complex64; 3] =
            std::array::from_fn(|j| m[0][j] * k[0] + m[1][j] * k[1] + m[2][j] * k[2]);
        let mut res = 0.0;
        let mut mag = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                let r = m[i][j] * k2 - ks[j] * k[i] - ks[i] * k[j];
                res += r.norm_sqr();
                mag += m[i][j].norm_sqr();
            }
        }
        num = num.max(res.sqrt());
        den = den.max(k2 * mag.sqrt());
    }
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}

/// Split `v` into a divergence-free part and a gradient part,
/// `û = (I - ξ⊗ξ/|ξ|²) v̂`, `∇̂f = (ξ⊗ξ/|ξ|²) v̂`. The mean mode goes to the
/// divergence-free part.
pub fn helmholtz_project(v: &SpectralField3) -> (SpectralField3, SpectralField3) {
    let grid = v.grid();
    let mut solenoidal = v.clone();
    let mut gradient = SpectralField3::zeros(grid);
    for idx in 0..grid.len() {
        let k = grid.deriv_wavevector(idx);
        let k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
        if k2 == 0.0 {
            continue;
        }
        let w = v.at(idx);
        let kv = (w[0] * k[0] + w[1] * k[1] + w[2] * k[2]) / k2;
        let g: [Complex64; 3] = std::array::from_fn(|i| kv * k[i]);
        gradient.set(idx, g);
        solenoidal.set(idx, std::array::from_fn(|i| w[i] - g[i]));
    }
    (solenoidal, gradient)
}

/// Divergence-free part only, in place.
pub fn leray_project_in_place(v: &mut SpectralField3) {
    let grid = v.grid().clone();
    for idx in 0..grid.len() {
        let k = grid.deriv_wavevector(idx);
        let k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
        if k2 == 0.0 {
            continue;
        }
        let w = v.at(idx);
        let kv = (w[0] * k[0] + w[1] * k[1] + w[2] * k[2]) / k2;
        v.set(idx, std::array::from_fn(|i| w[i] - kv * k[i]));
    }
}

/// `ω̂ = iξ × û`.
pub fn vorticity(u: &SpectralField3) -> SpectralField3 {
    let grid = u.grid();
    let mut w = SpectralField3::zeros(grid);
    for idx in 0..grid.len() {
        let k = grid.deriv_wavevector(idx);
        let v = u.at(idx);
        w.set(
            idx,
            [
                I * (v[2] * k[1] - v[1] * k[2]),
                I * (v[0] * k[2] - v[2] * k[0]),
                I * (v[1] * k[0] - v[0] * k[1]),
            ],
        );
    }
    w
}

/// `-Δu`.
pub fn neg_laplacian(u: &SpectralField3) -> SpectralField3 {
    let grid = u.grid();
    let mut out = u.clone();
    let k2: Vec<f64> = (0..grid.len())
        .map(|idx| {
            let k = grid.deriv_wavevector(idx);
            k[0] * k[0] + k[1] * k[1] + k[2] * k[2]
        })
        .collect();
    out.scale_modes(&k2);
    out
}

/// `∇g` of a scalar given by its coefficients.
pub fn scalar_gradient(grid: &Grid, g: &[Complex64]) -> SpectralField3 {
    let mut out = SpectralField3::zeros(grid);
    for idx in 0..grid.len() {
        let k = grid.deriv_wavevector(idx);
        out.set(idx, std::array::from_fn(|i| I * k[i] * g[idx]));
    }
    out
}

/// Trace-free part of the Hessian of a scalar, `Hess f - (Δf/3) I`.
pub fn tracefree_hessian(grid: &Grid, f: &[Complex64]) -> SpectralTensorField {
    let mut h = SpectralTensorField::zeros(grid);
    let comps = h.components_mut();
    for idx in 0..grid.len() {
        let k = grid.deriv_wavevector(idx);
        let k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
        for (slot, &(i, j)) in TENSOR_ENTRIES.iter().enumerate() {
            let delta = if i == j { k2 / 3.0 } else { 0.0 };
            comps[slot][idx] = -(k[i] * k[j] - delta) * f[idx];
        }
    }
    h
}

/// `∫ S : T dx` via Parseval.
pub fn tensor_inner(s: &SpectralTensorField, t: &SpectralTensorField) -> Result<f64> {
    check_same_grid(s.grid(), t.grid())?;
    let grid = s.grid();
    let mut acc = 0.0;
    for idx in 0..grid.len() {
        let a = s.matrix_at(idx);
        let b = t.matrix_at(idx);
        for i in 0..3 {
            for j in 0..3 {
                acc += (a[i][j] * b[i][j].conj()).re;
            }
        }
    }
    Ok(acc * grid.parseval_weight())
}

/// `‖f‖²_{Ḣ^α} = (2π)³/n⁶ Σ_ξ |ξ|^{2α} |f̂(ξ)|²`, for `-3/2 < α <= 3/2`.
///
/// Negative `α` requires a mean-zero field; a mean at the roundoff level
/// (below `1e-12` of the total amplitude) is ignored.
pub fn sobolev_norm_sq<F: ModalField>(field: &F, alpha: f64) -> Result<f64> {
    if !(alpha > -1.5 && alpha <= 1.5) {
        return Err(Error::invalid(format!("Sobolev exponent {alpha} outside (-3/2, 3/2]")));
    }
    let grid = field.grid();
    let mean = field.mode_norm_sq(0);
    if alpha < 0.0 && mean > 0.0 {
        let total: f64 = (0..grid.len()).map(|i| field.mode_norm_sq(i)).sum();
        if mean > 1e-24 * total {
            return Err(Error::invalid("negative Sobolev exponent needs a mean-zero field"));
        }
    }
    let mut acc = 0.0;
    for idx in 0..grid.len() {
        let m = field.mode_norm_sq(idx);
        let k2 = grid.wavenumber_sq(idx);
        if m == 0.0 || (k2 == 0.0 && alpha != 0.0) {
            continue;
        }
        let w = if alpha == 0.0 {
            1.0
        } else if alpha == 1.0 {
            k2
        } else {
            k2.powf(alpha)
        };
        acc += w * m;
    }
    Ok(acc * grid.parseval_weight())
}

/// The four quantities that coincide for a divergence-free field.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IsometryReport {
    pub alpha: f64,
    pub strain: f64,
    pub antisym: f64,
    pub half_vorticity: f64,
    pub half_gradient: f64,
}

impl IsometryReport {
    pub fn values(&self) -> [f64; 4] {
        [self.strain, self.antisym, self.half_vorticity, self.half_gradient]
    }

    /// Largest pairwise difference relative to the largest value.
    pub fn max_rel_deviation(&self) -> f64 {
        max_pairwise_rel(&self.values())
    }
}

pub(crate) fn max_pairwise_rel(v: &[f64]) -> f64 {
    let scale = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if scale == 0.0 {
        return 0.0;
    }
    let mut d: f64 = 0.0;
    for (i, a) in v.iter().enumerate() {
        for b in &v[i + 1..] {
            d = d.max((a - b).abs());
        }
    }
    d / scale
}

/// `‖S‖²`, `‖A‖²`, `½‖ω‖²` and `½‖∇⊗u‖²` in `Ḣ^α`, for `α ∈ {0, 1}`.
pub fn isometry_audit(u: &SpectralField3, alpha: f64) -> Result<IsometryReport> {
    if alpha != 0.0 && alpha != 1.0 {
        return Err(Error::Unsupported(format!(
            "isometry audit is implemented for alpha in {{0, 1}}, got {alpha}"
        )));
    }
    Ok(IsometryReport {
        alpha,
        strain: sobolev_norm_sq(&sym_gradient(u), alpha)?,
        antisym: sobolev_norm_sq(&antisym_gradient(u), alpha)?,
        half_vorticity: 0.5 * sobolev_norm_sq(&vorticity(u), alpha)?,
        half_gradient: 0.5 * sobolev_norm_sq(&gradient_tensor(u), alpha)?,
    })
}

/// A piecewise-constant unit direction field: disjoint regions covering
/// the grid, each with its own direction.
#[derive(Clone, Debug)]
pub struct DirectionPartition {
    labels: Vec<usize>,
    directions: Vec<Vec3>,
}

impl DirectionPartition {
    /// Regions given as point masks; they must be disjoint and cover the grid.
    pub fn from_masks(grid: &Grid, regions: &[(Vec<bool>, Vec3)]) -> Result<Self> {
        let mut labels = vec![usize::MAX; grid.len()];
        let mut directions = Vec::with_capacity(regions.len());
        for (r, (mask, dir)) in regions.iter().enumerate() {
            grid.check_len(mask.len())?;
            check_unit(dir)?;
            directions.push(*dir);
            for (idx, &inside) in mask.iter().enumerate() {
                if inside {
                    if labels[idx] != usize::MAX {
                        return Err(Error::invalid(format!(
                            "regions {} and {r} overlap at point {idx}",
                            labels[idx]
                        )));
                    }
                    labels[idx] = r;
                }
            }
        }
        if let Some(idx) = labels.iter().position(|&l| l == usize::MAX) {
            return Err(Error::invalid(format!("point {idx} is not covered by any region")));
        }
        Ok(DirectionPartition { labels, directions })
    }

    /// Regions given as a label per point.
    pub fn from_labels(grid: &Grid, labels: Vec<usize>, directions: Vec<Vec3>) -> Result<Self> {
        grid.check_len(labels.len())?;
        for d in &directions {
            check_unit(d)?;
        }
        if let Some(&bad) = labels.iter().find(|&&l| l >= directions.len()) {
            return Err(Error::invalid(format!("label {bad} has no direction")));
        }
        Ok(DirectionPartition { labels, directions })
    }

    pub fn uniform(grid: &Grid, direction: Vec3) -> Result<Self> {
        Self::from_labels(grid, vec![0; grid.len()], vec![direction])
    }

    pub fn direction_at(&self, idx: usize) -> Vec3 {
        self.directions[self.labels[idx]]
    }

    pub fn label_at(&self, idx: usize) -> usize {
        self.labels[idx]
    }

    pub fn directions(&self) -> &[Vec3] {
        &self.directions
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

/// Pointwise `S(x) v(x)`.
pub fn directional_strain(
    u: &SpectralField3,
    directions: &DirectionPartition,
) -> Result<PhysicalField3> {
    let grid = u.grid();
    grid.check_len(directions.len())?;
    let s = sym_gradient(u).to_physical();
    let mut comps: [Vec<f64>; 3] = std::array::from_fn(|_| vec![0.0; grid.len()]);
    for idx in 0..grid.len() {
        let sv = s.at(idx).mul_vec(&directions.direction_at(idx));
        for (c, x) in comps.iter_mut().zip(sv) {
            c[idx] = x;
        }
    }
    PhysicalField3::from_components(grid, comps)
}

/// `½ ∂_v u + ½ ∇(u·v)` for a constant direction `v`, computed spectrally.
pub fn directional_derivative_form(u: &SpectralField3, v: &Vec3) -> Result<PhysicalField3> {
    check_unit(v)?;
    let grid = u.grid();
    let mut out = SpectralField3::zeros(grid);
    for idx in 0..grid.len() {
        let k = grid.deriv_wavevector(idx);
        let w = u.at(idx);
        let kv = k[0] * v[0] + k[1] * v[1] + k[2] * v[2];
        let uv = w[0] * v[0] + w[1] * v[1] + w[2] * v[2];
        out.set(idx, std::array::from_fn(|j| 0.5 * I * (w[j] * kv + uv * k[j])));
    }
    Ok(out.to_physical())
}

/// Largest pointwise difference between `S v` and `½∂_v u + ½∇u_v`, region
/// by region, relative to `max |S v|` (absolute when that is zero).
pub fn directional_identity_residual(
    u: &SpectralField3,
    directions: &DirectionPartition,
) -> Result<f64> {
    let sv = directional_strain(u, directions)?;
    let grid = u.grid();
    let forms: Vec<PhysicalField3> = directions
        .directions()
        .iter()
        .map(|v| directional_derivative_form(u, v))
        .collect::<Result<_>>()?;
    let mut diff: f64 = 0.0;
    for idx in 0..grid.len() {
        let a = sv.at(idx);
        let b = forms[directions.label_at(idx)].at(idx);
        for i in 0..3 {
            diff = diff.max((a[i] - b[i]).abs());
        }
    }
    let scale = sv.max_abs();
    Ok(if scale > 0.0 { diff / scale } else { diff })
}

/// Zero every mode outside the 2/3-rule band.
pub fn dealias_in_place(u: &mut SpectralField3) {
    let grid = u.grid().clone();
    let mask: Vec<f64> = (0..grid.len())
        .map(|idx| if grid.in_dealias_band(idx) { 1.0 } else { 0.0 })
        .collect();
    u.scale_modes(&mask);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::PhysicalField3;

    fn shear(g: &Grid) -> SpectralField3 {
        PhysicalField3::from_fn(g, |x| [x[1].sin(), 0.0, 0.0]).to_spectral()
    }

    fn taylor_green(g: &Grid) -> SpectralField3 {
        PhysicalField3::from_fn(g, |x| {
            [
                x[0].sin() * x[1].cos() * x[2].cos(),
                -x[0].cos() * x[1].sin() * x[2].cos(),
                0.0,
            ]
        })
        .to_spectral()
    }

    #[test]
    fn shear_strain_and_vorticity() {
        let g = Grid::new(8).unwrap();
        let u = shear(&g);
        let s = sym_gradient(&u).to_physical();
        let w = vorticity(&u).to_physical();
        for idx in 0..g.len() {
            let y = g.point(idx)[1];
            let m = s.at(idx);
            assert!((m.m12() - 0.5 * y.cos()).abs() < 1e-14);
            for e in [m.m11(), m.m22(), m.m13(), m.m23()] {
                assert!(e.abs() < 1e-14);
            }
            let wv = w.at(idx);
            assert!(wv[0].abs() < 1e-14 && wv[1].abs() < 1e-14);
            assert!((wv[2] + y.cos()).abs() < 1e-14);
        }
    }

    #[test]
    fn taylor_green_strain_and_curl_match_closed_form() {
        let g = Grid::new(16).unwrap();
        let u = taylor_green(&g);
        let s = sym_gradient(&u).to_physical();
        let w = vorticity(&u).to_physical();
        let mut err: f64 = 0.0;
        for idx in 0..g.len() {
            let [x, y, z] = g.point(idx);
            let (sx, cx, sy, cy, sz, cz) = (x.sin(), x.cos(), y.sin(), y.cos(), z.sin(), z.cos());
            let m = s.at(idx);
            let exact = [
                cx * cy * cz,         // S11
                -cx * cy * cz,        // S22
                0.0,                  // S12
                -0.5 * sx * cy * sz,  // S13
                0.5 * cx * sy * sz,   // S23
            ];
            for (a, b) in m.entries().iter().zip(exact) {
                err = err.max((a - b).abs());
            }
            let wv = w.at(idx);
            let exact_w = [-cx * sy * sz, -sx * cy * sz, 2.0 * sx * sy * cz];
            for (a, b) in wv.iter().zip(exact_w) {
                err = err.max((a - b).abs());
            }
        }
        assert!(err < 1e-13, "{err}");
    }

    #[test]
    fn constant_field_has_zero_strain() {
        let g = Grid::new(8).unwrap();
        let u = PhysicalField3::from_fn(&g, |_| [1.0, -2.0, 0.5]).to_spectral();
        let s = sym_gradient(&u);
        assert!(s.components().iter().all(|c| c.iter().all(|z| z.norm() == 0.0)));
    }

    #[test]
    fn strain_roundtrip_recovers_shear() {
        let g = Grid::new(8).unwrap();
        let u = shear(&g);
        let s = sym_gradient(&u);
        assert!(consistency_residual(&s) < 1e-13);
        let back = velocity_from_strain(&s).unwrap().to_physical();
        for idx in 0..g.len() {
            assert!((back.at(idx)[0] - g.point(idx)[1].sin()).abs() < 1e-13);
        }
    }

    #[test]
    fn zero_strain_gives_zero_velocity() {
        let g = Grid::new(8).unwrap();
        let u = velocity_from_strain(&SpectralTensorField::zeros(&g)).unwrap();
        assert_eq!(u.energy(), 0.0);
        assert_eq!(consistency_residual(&SpectralTensorField::zeros(&g)), 0.0);
    }

    fn single_mode_tensor(g: &Grid, k: [usize; 3], entries: [f64; 5]) -> SpectralTensorField {
        let mut s = SpectralTensorField::zeros(g);
        let idx = g.index(k[0], k[1], k[2]);
        let mirror = g.mirror(idx);
        for (slot, e) in entries.iter().enumerate() {
            s.components_mut()[slot][idx] = Complex64::new(*e, 0.0);
            s.components_mut()[slot][mirror] = Complex64::new(*e, 0.0);
        }
        s
    }

    #[test]
    fn hand_checked_residuals() {
        let g = Grid::new(8).unwrap();
        let s = single_mode_tensor(&g, [0, 1, 0], [0.0, 0.0, 1.0, 0.0, 0.0]);
        assert_eq!(consistency_residual(&s), 0.0);
        // ξ⊗ξ - |ξ|²/3 I at ξ = e₂: residual is exactly 1
        let h = single_mode_tensor(&g, [0, 1, 0], [-1.0 / 3.0, 2.0 / 3.0, 0.0, 0.0, 0.0]);
        let r = consistency_residual(&h);
        assert!((r - 1.0).abs() < 1e-14 && r > 0.1);
        assert!(matches!(
            velocity_from_strain(&h),
            Err(Error::ConstraintViolation { .. })
        ));
    }

    #[test]
    fn helmholtz_special_cases() {
        let g = Grid::new(8).unwrap();
        let (sol, grad) = helmholtz_project(&shear(&g));
        assert!(grad.energy() == 0.0);
        assert!((sol.energy() - shear(&g).energy()).abs() < 1e-12);
        let v = PhysicalField3::from_fn(&g, |x| [x[0].cos(), 0.0, 0.0]).to_spectral();
        let (sol, grad) = helmholtz_project(&v);
        assert!(sol.energy() < 1e-28);
        assert!((grad.energy() - v.energy()).abs() < 1e-12);
    }

    #[test]
    fn sobolev_single_mode() {
        let g = Grid::new(8).unwrap();
        let u = shear(&g);
        let vol = g.volume();
        let l2 = sobolev_norm_sq(&u, 0.0).unwrap();
        let h1 = sobolev_norm_sq(&u, 1.0).unwrap();
        assert!((l2 - vol / 2.0).abs() < 1e-12 * vol);
        assert!((h1 - vol / 2.0).abs() < 1e-12 * vol);
        assert_eq!(sobolev_norm_sq(&SpectralField3::zeros(&g), 1.0).unwrap(), 0.0);
        assert!(sobolev_norm_sq(&u, 1.6).is_err());
        assert!(sobolev_norm_sq(&u, -0.5).is_ok());
        let c = PhysicalField3::from_fn(&g, |_| [1.0, 0.0, 0.0]).to_spectral();
        assert!(sobolev_norm_sq(&c, -0.5).is_err());
    }

    #[test]
    fn isometry_for_shear() {
        let g = Grid::new(8).unwrap();
        let rep = isometry_audit(&shear(&g), 0.0).unwrap();
        let expect = g.volume() / 4.0;
        for v in rep.values() {
            assert!((v - expect).abs() < 1e-12 * expect);
        }
        let zero = isometry_audit(&SpectralField3::zeros(&g), 1.0).unwrap();
        assert_eq!(zero.values(), [0.0; 4]);
        assert!(isometry_audit(&shear(&g), 0.5).is_err());
    }

    #[test]
    fn directional_strain_of_shear() {
        let g = Grid::new(8).unwrap();
        let u = shear(&g);
        let along_z = directional_strain(&u, &DirectionPartition::uniform(&g, [0.0, 0.0, 1.0]).unwrap())
            .unwrap();
        assert!(along_z.max_abs() < 1e-15);
        let p = DirectionPartition::uniform(&g, [1.0, 0.0, 0.0]).unwrap();
        let along_x = directional_strain(&u, &p).unwrap();
        for idx in 0..g.len() {
            let v = along_x.at(idx);
            assert!((v[1] - 0.5 * g.point(idx)[1].cos()).abs() < 1e-14);
            assert!(v[0].abs() < 1e-14 && v[2].abs() < 1e-14);
        }
        assert!(directional_identity_residual(&u, &p).unwrap() < 1e-13);
    }

    #[test]
    fn partition_validation() {
        let g = Grid::new(8).unwrap();
        let all = vec![true; g.len()];
        let overlap = DirectionPartition::from_masks(
            &g,
            &[(all.clone(), [1.0, 0.0, 0.0]), (all.clone(), [0.0, 1.0, 0.0])],
        );
        assert!(overlap.is_err());
        let mut half = vec![false; g.len()];
        half[..g.len() / 2].iter_mut().for_each(|b| *b = true);
        let incomplete = DirectionPartition::from_masks(&g, &[(half, [1.0, 0.0, 0.0])]);
        assert!(incomplete.is_err());
        assert!(DirectionPartition::uniform(&g, [1.0, 1.0, 0.0]).is_err());
        assert!(DirectionPartition::from_masks(&g, &[(all, [0.0, 0.0, 1.0])]).is_ok());
    }
}
