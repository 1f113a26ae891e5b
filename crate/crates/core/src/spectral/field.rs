use std::fmt;

use num_complex::Complex64;

use super::grid::Grid;
use crate::error::{Error, Result};
use crate::sym3::TraceFreeSym3;

/// Storage order of the independent tensor entries.
pub const TENSOR_ENTRIES: [(usize, usize); 5] = [(0, 0), (1, 1), (0, 1), (0, 2), (1, 2)];

/// Fourier coefficients of a vector field.
#[derive(Clone, PartialEq)]
pub struct SpectralField3 {
    grid: Grid,
    comps: [Vec<Complex64>; 3],
}

/// Fourier coefficients of a symmetric trace-free tensor field, entries in
/// the order `S11, S22, S12, S13, S23`.
#[derive(Clone, PartialEq)]
pub struct SpectralTensorField {
    grid: Grid,
    comps: [Vec<Complex64>; 5],
}

/// Fourier coefficients of a full (non-symmetric) tensor field, e.g. `∇⊗u`
/// with entry `(i, j)` equal to `∂ᵢuⱼ`.
#[derive(Clone, PartialEq)]
pub struct SpectralMatrixField {
    grid: Grid,
    comps: [[Vec<Complex64>; 3]; 3],
}

#[derive(Clone, Debug, PartialEq)]
pub struct PhysicalField3 {
    grid: Grid,
    comps: [Vec<f64>; 3],
}

#[derive(Clone, Debug, PartialEq)]
pub struct PhysicalTensorField {
    grid: Grid,
    comps: [Vec<f64>; 5],
}

macro_rules! summary_debug {
    ($t:ty, $name:literal) => {
        impl fmt::Debug for $t {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.debug_struct($name).field("n", &self.grid.n()).finish_non_exhaustive()
            }
        }
    };
}
summary_debug!(SpectralField3, "SpectralField3");
summary_debug!(SpectralTensorField, "SpectralTensorField");
summary_debug!(SpectralMatrixField, "SpectralMatrixField");

/// Per-mode squared magnitude, summed over components with the Frobenius
/// weights of the field type.
pub trait ModalField {
    fn grid(&self) -> &Grid;
    fn mode_norm_sq(&self, idx: usize) -> f64;
}

fn zeros_c(len: usize) -> Vec<Complex64> {
    vec![Complex64::default(); len]
}

impl SpectralField3 {
    pub fn zeros(grid: &Grid) -> Self {
        let len = grid.len();
        SpectralField3 {
            grid: grid.clone(),
            comps: [zeros_c(len), zeros_c(len), zeros_c(len)],
        }
    }

    pub fn from_components(grid: &Grid, comps: [Vec<Complex64>; 3]) -> Result<Self> {
        for c in &comps {
            grid.check_len(c.len())?;
        }
        Ok(SpectralField3 {
            grid: grid.clone(),
            comps,
        })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn component(&self, i: usize) -> &[Complex64] {
        &self.comps[i]
    }

    pub fn component_mut(&mut self, i: usize) -> &mut [Complex64] {
        &mut self.comps[i]
    }

    pub fn components(&self) -> &[Vec<Complex64>; 3] {
        &self.comps
    }

    pub fn components_mut(&mut self) -> &mut [Vec<Complex64>; 3] {
        &mut self.comps
    }

    pub fn at(&self, idx: usize) -> [Complex64; 3] {
        [self.comps[0][idx], self.comps[1][idx], self.comps[2][idx]]
    }

    pub fn set(&mut self, idx: usize, v: [Complex64; 3]) {
        for (c, x) in self.comps.iter_mut().zip(v) {
            c[idx] = x;
        }
    }

    pub fn to_physical(&self) -> PhysicalField3 {
        PhysicalField3 {
            grid: self.grid.clone(),
            comps: self.comps.clone().map(|c| inverse_real(&self.grid, c)),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.comps
            .iter()
            .all(|c| c.iter().all(|z| z.re.is_finite() && z.im.is_finite()))
    }

    /// `a * self + b * other`, mode by mode.
    pub fn combine(&self, a: f64, other: &SpectralField3, b: f64) -> SpectralField3 {
        let mut out = self.clone();
        for (o, y) in out.comps.iter_mut().zip(&other.comps) {
            for (x, y) in o.iter_mut().zip(y) {
                *x = *x * a + *y * b;
            }
        }
        out
    }

    pub fn scale(&mut self, s: f64) {
        for c in &mut self.comps {
            c.iter_mut().for_each(|z| *z *= s);
        }
    }

    /// Multiply every mode by a real per-mode factor.
    pub fn scale_modes(&mut self, factors: &[f64]) {
        for c in &mut self.comps {
            for (z, f) in c.iter_mut().zip(factors) {
                *z *= *f;
            }
        }
    }

    /// `max_ξ |ξ·û(ξ)| / max_ξ |ξ||û(ξ)|` with the operator wavevector.
    pub fn divergence_residual(&self) -> f64 {
        let mut num: f64 = 0.0;
        let mut den: f64 = 0.0;
        for idx in 0..self.grid.len() {
            let k = self.grid.deriv_wavevector(idx);
            let u = self.at(idx);
            let div = u[0] * k[0] + u[1] * k[1] + u[2] * k[2];
            let kn = (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]).sqrt();
            let un = (u[0].norm_sqr() + u[1].norm_sqr() + u[2].norm_sqr()).sqrt();
            num = num.max(div.norm());
            den = den.max(kn * un);
        }
        if den == 0.0 {
            0.0
        } else {
            num / den
        }
    }

    /// `|û(0)|` summed over components.
    pub fn mean_magnitude(&self) -> f64 {
        self.comps.iter().map(|c| c[0].norm()).sum()
    }

    /// Largest violation of `û(-ξ) = conj(û(ξ))`, relative to the largest mode.
    pub fn hermitian_defect(&self) -> f64 {
        let mut defect: f64 = 0.0;
        let mut scale: f64 = 0.0;
        for c in &self.comps {
            for idx in 0..self.grid.len() {
                let m = self.grid.mirror(idx);
                defect = defect.max((c[idx] - c[m].conj()).norm());
                scale = scale.max(c[idx].norm());
            }
        }
        if scale == 0.0 {
            0.0
        } else {
            defect / scale
        }
    }

    /// Replace each coefficient by the average of itself and the conjugate of its mirror.
    pub fn symmetrize(&mut self) {
        for c in &mut self.comps {
            symmetrize(&self.grid, c);
        }
    }

    /// `∫ u·v dx` via Parseval.
    pub fn inner(&self, other: &SpectralField3) -> f64 {
        let mut acc = 0.0;
        for (a, b) in self.comps.iter().zip(&other.comps) {
            acc += a
                .iter()
                .zip(b)
                .map(|(x, y)| (x * y.conj()).re)
                .sum::<f64>();
        }
        acc * self.grid.parseval_weight()
    }

    /// `½ ∫ |u|² dx`.
    pub fn energy(&self) -> f64 {
        0.5 * self.inner(self)
    }
}

impl ModalField for SpectralField3 {
    fn grid(&self) -> &Grid {
        &self.grid
    }
    fn mode_norm_sq(&self, idx: usize) -> f64 {
        self.comps.iter().map(|c| c[idx].norm_sqr()).sum()
    }
}

impl SpectralTensorField {
    pub fn zeros(grid: &Grid) -> Self {
        let len = grid.len();
        SpectralTensorField {
            grid: grid.clone(),
            comps: std::array::from_fn(|_| zeros_c(len)),
        }
    }

    pub fn from_components(grid: &Grid, comps: [Vec<Complex64>; 5]) -> Result<Self> {
        for c in &comps {
            grid.check_len(c.len())?;
        }
        Ok(SpectralTensorField {
            grid: grid.clone(),
            comps,
        })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn components(&self) -> &[Vec<Complex64>; 5] {
        &self.comps
    }

    pub fn components_mut(&mut self) -> &mut [Vec<Complex64>; 5] {
        &mut self.comps
    }

    /// Full symmetric 3×3 coefficient matrix of one mode.
    pub fn matrix_at(&self, idx: usize) -> [[Complex64; 3]; 3] {
        let c = |k: usize| self.comps[k][idx];
        let (s11, s22, s12, s13, s23) = (c(0), c(1), c(2), c(3), c(4));
        let s33 = -s11 - s22;
        [[s11, s12, s13], [s12, s22, s23], [s13, s23, s33]]
    }

    pub fn to_physical(&self) -> PhysicalTensorField {
        PhysicalTensorField {
            grid: self.grid.clone(),
            comps: self.comps.clone().map(|c| inverse_real(&self.grid, c)),
        }
    }

    pub fn symmetrize(&mut self) {
        for c in &mut self.comps {
            symmetrize(&self.grid, c);
        }
    }
}

impl ModalField for SpectralTensorField {
    fn grid(&self) -> &Grid {
        &self.grid
    }
    fn mode_norm_sq(&self, idx: usize) -> f64 {
        let c = |k: usize| self.comps[k][idx];
        let s33 = -c(0) - c(1);
        c(0).norm_sqr()
            + c(1).norm_sqr()
            + s33.norm_sqr()
            + 2.0 * (c(2).norm_sqr() + c(3).norm_sqr() + c(4).norm_sqr())
    }
}

impl SpectralMatrixField {
    pub(crate) fn new(grid: &Grid, comps: [[Vec<Complex64>; 3]; 3]) -> Self {
        SpectralMatrixField {
            grid: grid.clone(),
            comps,
        }
    }

    pub fn entry(&self, i: usize, j: usize) -> &[Complex64] {
        &self.comps[i][j]
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }
}

impl ModalField for SpectralMatrixField {
    fn grid(&self) -> &Grid {
        &self.grid
    }
    fn mode_norm_sq(&self, idx: usize) -> f64 {
        self.comps
            .iter()
            .flat_map(|row| row.iter())
            .map(|c| c[idx].norm_sqr())
            .sum()
    }
}

impl PhysicalField3 {
    pub fn zeros(grid: &Grid) -> Self {
        let len = grid.len();
        PhysicalField3 {
            grid: grid.clone(),
            comps: [vec![0.0; len], vec![0.0; len], vec![0.0; len]],
        }
    }

    pub fn from_components(grid: &Grid, comps: [Vec<f64>; 3]) -> Result<Self> {
        for c in &comps {
            grid.check_len(c.len())?;
        }
        Ok(PhysicalField3 {
            grid: grid.clone(),
            comps,
        })
    }

    /// Sample `f(x, y, z)` at every grid point.
    pub fn from_fn(grid: &Grid, f: impl Fn([f64; 3]) -> [f64; 3]) -> Self {
        let mut out = Self::zeros(grid);
        for idx in 0..grid.len() {
            let v = f(grid.point(idx));
            for (c, x) in out.comps.iter_mut().zip(v) {
                c[idx] = x;
            }
        }
        out
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn component(&self, i: usize) -> &[f64] {
        &self.comps[i]
    }

    pub fn components(&self) -> &[Vec<f64>; 3] {
        &self.comps
    }

    pub fn into_components(self) -> [Vec<f64>; 3] {
        self.comps
    }

    pub fn at(&self, idx: usize) -> [f64; 3] {
        [self.comps[0][idx], self.comps[1][idx], self.comps[2][idx]]
    }

    pub fn to_spectral(&self) -> SpectralField3 {
        SpectralField3 {
            grid: self.grid.clone(),
            comps: self.comps.clone().map(|c| forward_real(&self.grid, &c)),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.comps
            .iter()
            .flat_map(|c| c.iter())
            .fold(0.0f64, |m, x| m.max(x.abs()))
    }
}

impl PhysicalTensorField {
    pub fn from_components(grid: &Grid, comps: [Vec<f64>; 5]) -> Result<Self> {
        for c in &comps {
            grid.check_len(c.len())?;
        }
        Ok(PhysicalTensorField {
            grid: grid.clone(),
            comps,
        })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn components(&self) -> &[Vec<f64>; 5] {
        &self.comps
    }

    pub fn at(&self, idx: usize) -> TraceFreeSym3 {
        TraceFreeSym3::from_entries(std::array::from_fn(|k| self.comps[k][idx]))
    }

    pub fn to_spectral(&self) -> SpectralTensorField {
        SpectralTensorField {
            grid: self.grid.clone(),
            comps: self.comps.clone().map(|c| forward_real(&self.grid, &c)),
        }
    }
}

/// Forward transform of a real scalar array, followed by Hermitian symmetrization.
pub fn forward_real(grid: &Grid, values: &[f64]) -> Vec<Complex64> {
    let mut data: Vec<Complex64> = values.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    grid.fft_forward_in_place(&mut data);
    symmetrize(grid, &mut data);
    data
}

/// Inverse transform keeping the real part.
pub fn inverse_real(grid: &Grid, mut coeffs: Vec<Complex64>) -> Vec<f64> {
    grid.fft_inverse_in_place(&mut coeffs);
    coeffs.into_iter().map(|z| z.re).collect()
}

/// Two real arrays through one complex transform: `FFT(a + ib)` split by
/// conjugate symmetry. Outputs are exactly Hermitian.
pub(crate) fn forward_real_pair(grid: &Grid, a: &[f64], b: &[f64]) -> (Vec<Complex64>, Vec<Complex64>) {
    let mut z: Vec<Complex64> = a.iter().zip(b).map(|(&x, &y)| Complex64::new(x, y)).collect();
    grid.fft_forward_in_place(&mut z);
    let mut fa = vec![Complex64::default(); z.len()];
    let mut fb = vec![Complex64::default(); z.len()];
    for idx in 0..z.len() {
        let m = grid.mirror(idx);
        if m < idx {
            continue;
        }
        let (p, q) = (z[idx], z[m].conj());
        let x = 0.5 * (p + q);
        let y = Complex64::new(0.0, -0.5) * (p - q);
        fa[idx] = x;
        fa[m] = x.conj();
        fb[idx] = y;
        fb[m] = y.conj();
    }
    (fa, fb)
}

/// Inverse of two Hermitian spectra through one complex transform.
pub(crate) fn inverse_real_pair(grid: &Grid, a: &[Complex64], b: &[Complex64]) -> (Vec<f64>, Vec<f64>) {
    let i = Complex64::new(0.0, 1.0);
    let mut z: Vec<Complex64> = a.iter().zip(b).map(|(x, y)| x + i * y).collect();
    grid.fft_inverse_in_place(&mut z);
    (z.iter().map(|c| c.re).collect(), z.iter().map(|c| c.im).collect())
}

pub fn symmetrize(grid: &Grid, data: &mut [Complex64]) {
    for idx in 0..grid.len() {
        let m = grid.mirror(idx);
        if m < idx {
            continue;
        }
        let avg = 0.5 * (data[idx] + data[m].conj());
        data[idx] = avg;
        data[m] = avg.conj();
    }
}

/// Physical vector field → Fourier coefficients.
pub fn fft_forward(field: &PhysicalField3) -> SpectralField3 {
    field.to_spectral()
}

/// Fourier coefficients → physical vector field.
pub fn fft_inverse(field: &SpectralField3) -> PhysicalField3 {
    field.to_physical()
}

pub(crate) fn check_same_grid(a: &Grid, b: &Grid) -> Result<()> {
    if a != b {
        return Err(Error::SizeMismatch {
            expected: a.len(),
            actual: b.len(),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn single_shear_mode_coefficients() {
        let g = Grid::new(8).unwrap();
        let u = PhysicalField3::from_fn(&g, |x| [x[1].sin(), 0.0, 0.0]).to_spectral();
        for idx in 0..g.len() {
            let k = g.wavevector(idx);
            let c = u.component(0)[idx];
            if k == [0.0, 1.0, 0.0] || k == [0.0, -1.0, 0.0] {
                assert!((c.norm() - g.len() as f64 / 2.0).abs() < 1e-9);
            } else {
                assert!(c.norm() < 1e-10, "{k:?} {c}");
            }
            assert_eq!(u.component(1)[idx], Complex64::default());
        }
    }

    #[test]
    fn roundtrip_white_noise() {
        let g = Grid::new(16).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let comps = std::array::from_fn(|_| (0..g.len()).map(|_| rng.random_range(-1.0..1.0)).collect());
        let p = PhysicalField3::from_components(&g, comps).unwrap();
        let back = p.to_spectral().to_physical();
        let mut err: f64 = 0.0;
        for i in 0..3 {
            for (a, b) in p.component(i).iter().zip(back.component(i)) {
                err = err.max((a - b).abs());
            }
        }
        assert!(err < 1e-13 * p.max_abs());
    }

    #[test]
    fn zero_field_transforms_to_zero() {
        let g = Grid::new(8).unwrap();
        let s = PhysicalField3::zeros(&g).to_spectral();
        assert!(s.components().iter().all(|c| c.iter().all(|z| *z == Complex64::default())));
    }

    #[test]
    fn size_mismatch_is_an_error() {
        let g = Grid::new(8).unwrap();
        let r = PhysicalField3::from_components(&g, [vec![0.0; 10], vec![0.0; 512], vec![0.0; 512]]);
        assert!(matches!(r, Err(Error::SizeMismatch { expected: 512, actual: 10 })));
    }
}
