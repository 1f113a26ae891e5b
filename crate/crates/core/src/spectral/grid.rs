use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

/// Uniform `n × n × n` grid on the torus `[0, 2π)³`.
///
/// Linear index of grid point `(ix, iy, iz)` and of Fourier mode
/// `(mx, my, mz)` is `ix + n * (iy + n * iz)`: x varies fastest.
///
/// Along each axis, storage slot `m` holds the integer wavenumber `m` for
/// `m <= n/2` and `m - n` otherwise, i.e. the order
/// `0, 1, …, n/2, -n/2+1, …, -1`. The Nyquist wavenumber is stored as `+n/2`.
///
/// The forward transform is unscaled and the inverse divides by `n³`.
#[derive(Clone)]
pub struct Grid {
    n: usize,
    wavenumbers: Arc<[f64]>,
    modes: Arc<ModeTables>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

/// Per-mode lookups, precomputed because every operator walks all modes.
struct ModeTables {
    mirror: Vec<usize>,
    deriv: Vec<[f64; 3]>,
    k2: Vec<f64>,
    band: Vec<bool>,
}

impl fmt::Debug for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid").field("n", &self.n).finish()
    }
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
    }
}

impl Grid {
    pub fn new(n: usize) -> Result<Self> {
        if n < 8 || !n.is_multiple_of(2) {
            return Err(Error::invalid(format!(
                "grid size must be even and at least 8, got {n}"
            )));
        }
        let wavenumbers: Arc<[f64]> = (0..n).map(|m| signed_wavenumber(m, n) as f64).collect();
        let deriv_wavenumbers: Vec<f64> = (0..n)
            .map(|m| {
                if m == n / 2 {
                    0.0
                } else {
                    signed_wavenumber(m, n) as f64
                }
            })
            .collect();
        let len = n * n * n;
        let unravel = |idx: usize| (idx % n, (idx / n) % n, idx / (n * n));
        let cut = ((n - 1) / 3) as f64;
        let mut modes = ModeTables {
            mirror: Vec::with_capacity(len),
            deriv: Vec::with_capacity(len),
            k2: Vec::with_capacity(len),
            band: Vec::with_capacity(len),
        };
        for idx in 0..len {
            let (a, b, c) = unravel(idx);
            let k = [wavenumbers[a], wavenumbers[b], wavenumbers[c]];
            modes
                .mirror
                .push((n - a) % n + n * ((n - b) % n + n * ((n - c) % n)));
            modes
                .deriv
                .push([deriv_wavenumbers[a], deriv_wavenumbers[b], deriv_wavenumbers[c]]);
            modes.k2.push(k[0] * k[0] + k[1] * k[1] + k[2] * k[2]);
            modes.band.push(k.iter().all(|x| x.abs() <= cut));
        }
        let mut planner = FftPlanner::new();
        Ok(Grid {
            n,
            wavenumbers,
            modes: Arc::new(modes),
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of points (or modes), `n³`.
    pub fn len(&self) -> usize {
        self.n * self.n * self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        2.0 * PI / self.n as f64
    }

    /// Quadrature weight `(2π/n)³`.
    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(3)
    }

    /// `(2π)³`.
    pub fn volume(&self) -> f64 {
        (2.0 * PI).powi(3)
    }

    /// Weight turning `Σ_ξ |f̂(ξ)|²` into `∫ |f|² dx`: `(2π)³ / n⁶`.
    pub fn parseval_weight(&self) -> f64 {
        let n3 = self.len() as f64;
        self.volume() / (n3 * n3)
    }

    #[inline]
    pub fn index(&self, ix: usize, iy: usize, iz: usize) -> usize {
        ix + self.n * (iy + self.n * iz)
    }

    #[inline]
    pub fn unravel(&self, idx: usize) -> (usize, usize, usize) {
        let n = self.n;
        (idx % n, (idx / n) % n, idx / (n * n))
    }

    /// Physical coordinates of a grid point.
    pub fn point(&self, idx: usize) -> [f64; 3] {
        let (ix, iy, iz) = self.unravel(idx);
        let h = self.spacing();
        [ix as f64 * h, iy as f64 * h, iz as f64 * h]
    }

    /// Integer wavevector of a mode (Nyquist stored as `+n/2`).
    pub fn wavevector(&self, idx: usize) -> [f64; 3] {
        let (a, b, c) = self.unravel(idx);
        [self.wavenumbers[a], self.wavenumbers[b], self.wavenumbers[c]]
    }

    /// Wavevector used by differential and projection operators: the
    /// Nyquist component of each axis is replaced by zero.
    #[inline]
    pub fn deriv_wavevector(&self, idx: usize) -> [f64; 3] {
        self.modes.deriv[idx]
    }

    #[inline]
    pub fn wavenumber_sq(&self, idx: usize) -> f64 {
        self.modes.k2[idx]
    }

    /// Index of the mode `-ξ`.
    #[inline]
    pub fn mirror(&self, idx: usize) -> usize {
        self.modes.mirror[idx]
    }

    pub fn has_nyquist(&self, idx: usize) -> bool {
        let (a, b, c) = self.unravel(idx);
        let h = self.n / 2;
        a == h || b == h || c == h
    }

    /// Largest wavenumber kept by the 2/3 rule; products of fields limited
    /// to `|ξᵢ| <= K` are alias-free on the retained modes since `3K < n`.
    pub fn dealias_cutoff(&self) -> usize {
        (self.n - 1) / 3
    }

    #[inline]
    pub fn in_dealias_band(&self, idx: usize) -> bool {
        self.modes.band[idx]
    }

    pub(crate) fn check_len(&self, len: usize) -> Result<()> {
        if len != self.len() {
            return Err(Error::SizeMismatch {
                expected: self.len(),
                actual: len,
            });
        }
        Ok(())
    }

    /// In-place unscaled forward 3-D transform.
    pub fn fft_forward_in_place(&self, data: &mut [Complex64]) {
        self.transform(data, &self.forward);
    }

    /// In-place inverse 3-D transform, divided by `n³`.
    pub fn fft_inverse_in_place(&self, data: &mut [Complex64]) {
        self.transform(data, &self.inverse);
        let s = 1.0 / self.len() as f64;
        data.iter_mut().for_each(|c| *c *= s);
    }

    fn transform(&self, data: &mut [Complex64], plan: &Arc<dyn Fft<f64>>) {
        let n = self.n;
        debug_assert_eq!(data.len(), n * n * n);
        // x lines are contiguous
        data.par_chunks_mut(n * n).for_each(|plane| {
            let mut scratch = vec![Complex64::default(); plan.get_inplace_scratch_len()];
            plan.process_with_scratch(plane, &mut scratch);
        });
        // y lines: gather each z-plane transposed
        data.par_chunks_mut(n * n).for_each(|plane| {
            let mut buf = vec![Complex64::default(); n * n];
            let mut scratch = vec![Complex64::default(); plan.get_inplace_scratch_len()];
            for iy in 0..n {
                for ix in 0..n {
                    buf[ix * n + iy] = plane[ix + n * iy];
                }
            }
            plan.process_with_scratch(&mut buf, &mut scratch);
            for iy in 0..n {
                for ix in 0..n {
                    plane[ix + n * iy] = buf[ix * n + iy];
                }
            }
        });
        // z lines
        let mut lines = vec![Complex64::default(); n * n * n];
        for iz in 0..n {
            for ixy in 0..n * n {
                lines[ixy * n + iz] = data[ixy + n * n * iz];
            }
        }
        lines.par_chunks_mut(n * n).for_each(|chunk| {
            let mut scratch = vec![Complex64::default(); plan.get_inplace_scratch_len()];
            plan.process_with_scratch(chunk, &mut scratch);
        });
        for iz in 0..n {
            for ixy in 0..n * n {
                data[ixy + n * n * iz] = lines[ixy * n + iz];
            }
        }
    }
}

fn signed_wavenumber(m: usize, n: usize) -> i64 {
    if m <= n / 2 {
        m as i64
    } else {
        m as i64 - n as i64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_sizes() {
        assert!(Grid::new(6).is_err());
        assert!(Grid::new(9).is_err());
        assert!(Grid::new(8).is_ok());
    }

    #[test]
    fn wavenumber_layout() {
        let g = Grid::new(8).unwrap();
        let ks: Vec<f64> = (0..8).map(|m| g.wavevector(m)[0]).collect();
        assert_eq!(ks, vec![0.0, 1.0, 2.0, 3.0, 4.0, -3.0, -2.0, -1.0]);
        assert_eq!(g.deriv_wavevector(4)[0], 0.0);
        assert_eq!(g.dealias_cutoff(), 2);
        assert_eq!(Grid::new(32).unwrap().dealias_cutoff(), 10);
        let idx = g.index(1, 2, 7);
        assert_eq!(g.wavevector(idx), [1.0, 2.0, -1.0]);
        assert_eq!(g.wavevector(g.mirror(idx)), [-1.0, -2.0, 1.0]);
    }

    #[test]
    fn fft_matches_direct_sum_for_single_mode() {
        let g = Grid::new(8).unwrap();
        let mut data = vec![Complex64::default(); g.len()];
        for idx in 0..g.len() {
            let x = g.point(idx);
            data[idx] = Complex64::new((2.0 * x[0] - x[2]).cos(), 0.0);
        }
        g.fft_forward_in_place(&mut data);
        let n3 = g.len() as f64;
        for idx in 0..g.len() {
            let k = g.wavevector(idx);
            let expect = if k == [2.0, 0.0, -1.0] || k == [-2.0, 0.0, 1.0] {
                n3 / 2.0
            } else {
                0.0
            };
            assert!((data[idx].re - expect).abs() < 1e-10, "{k:?}");
            assert!(data[idx].im.abs() < 1e-10);
        }
    }
}
