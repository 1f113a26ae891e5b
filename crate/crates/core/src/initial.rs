//! Initial velocity fields.

use std::path::PathBuf;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::spectral::{leray_project_in_place, Grid, PhysicalField3, SpectralField3, Snapshot};

#[derive(Clone, Debug, PartialEq)]
pub enum InitialData {
    TaylorGreen,
    Shear,
    RandomDivFree {
        seed: u64,
        max_wavenumber: usize,
        /// Root-mean-square velocity over the box.
        amplitude: f64,
    },
    FromFile(PathBuf),
}

/// Zero out coefficients at the FFT roundoff floor.
fn chop(u: &mut SpectralField3) {
    let max = u
        .components()
        .iter()
        .flat_map(|c| c.iter())
        .fold(0.0f64, |m, z| m.max(z.norm()));
    for c in u.components_mut() {
        for z in c.iter_mut() {
            if z.norm() < 1e-14 * max {
                *z = Complex64::new(0.0, 0.0);
            }
        }
    }
}

/// `u = (sin x cos y cos z, -cos x sin y cos z, 0)`.
pub fn taylor_green(grid: &Grid) -> SpectralField3 {
    let mut u = PhysicalField3::from_fn(grid, |x| {
        [
            x[0].sin() * x[1].cos() * x[2].cos(),
            -x[0].cos() * x[1].sin() * x[2].cos(),
            0.0,
        ]
    })
    .to_spectral();
    chop(&mut u);
    u
}

/// `u = (sin y, 0, 0)`.
pub fn shear(grid: &Grid) -> SpectralField3 {
    let mut u = PhysicalField3::from_fn(grid, |x| [x[1].sin(), 0.0, 0.0]).to_spectral();
    chop(&mut u);
    u
}

/// Gaussian modes with `max|kᵢ| <= max_wavenumber`, projected onto
/// divergence-free fields and scaled to the requested RMS velocity.
/// The same seed always gives the same field.
pub fn random_div_free(
    grid: &Grid,
    seed: u64,
    max_wavenumber: usize,
    amplitude: f64,
) -> Result<SpectralField3> {
    if max_wavenumber == 0 || 2 * max_wavenumber >= grid.n() {
        return Err(Error::invalid(format!(
            "max_wavenumber must be in 1..{} for n = {}",
            grid.n() / 2,
            grid.n()
        )));
    }
    if !(amplitude.is_finite() && amplitude >= 0.0) {
        return Err(Error::invalid(format!("amplitude {amplitude} must be finite and >= 0")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut u = SpectralField3::zeros(grid);
    let kmax = max_wavenumber as f64;
    for idx in 1..grid.len() {
        let k = grid.wavevector(idx);
        if k.iter().any(|x| x.abs() > kmax) {
            continue;
        }
        let mut v = [Complex64::new(0.0, 0.0); 3];
        for z in &mut v {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            *z = Complex64::new(re, im);
        }
        u.set(idx, v);
    }
    u.symmetrize();
    leray_project_in_place(&mut u);
    let rms = (2.0 * u.energy() / grid.volume()).sqrt();
    if rms > 0.0 {
        u.scale(amplitude / rms);
    }
    Ok(u)
}

/// Velocity snapshot on `grid`, made mean-free and divergence-free.
pub fn from_file(grid: &Grid, path: impl Into<PathBuf>) -> Result<SpectralField3> {
    let path = path.into();
    let snap = Snapshot::load(&path)?;
    if snap.n != grid.n() {
        return Err(Error::Snapshot {
            path: Some(path),
            reason: format!("snapshot has n = {}, run uses n = {}", snap.n, grid.n()),
        });
    }
    let mut u = snap.vector_field()?.to_spectral();
    u.set(0, [Complex64::new(0.0, 0.0); 3]);
    leray_project_in_place(&mut u);
    Ok(u)
}

pub fn generate_initial(spec: &InitialData, grid: &Grid) -> Result<SpectralField3> {
    match spec {
        InitialData::TaylorGreen => Ok(taylor_green(grid)),
        InitialData::Shear => Ok(shear(grid)),
        InitialData::RandomDivFree {
            seed,
            max_wavenumber,
            amplitude,
        } => random_div_free(grid, *seed, *max_wavenumber, *amplitude),
        InitialData::FromFile(p) => from_file(grid, p.clone()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn taylor_green_is_divergence_free_and_mean_free() {
        let g = Grid::new(16).unwrap();
        let u = taylor_green(&g);
        assert!(u.divergence_residual() < 1e-13);
        assert_eq!(u.mean_magnitude(), 0.0);
        // eight modes (±1,±1,±1) in each of two components
        let populated: usize = u
            .components()
            .iter()
            .map(|c| c.iter().filter(|z| z.norm() > 0.0).count())
            .sum();
        assert_eq!(populated, 16);
    }

    #[test]
    fn shear_is_one_mode_pair() {
        let g = Grid::new(16).unwrap();
        let u = shear(&g);
        let nz: Vec<usize> = (0..g.len()).filter(|&i| u.at(i)[0].norm() > 0.0).collect();
        assert_eq!(nz.len(), 2);
        for i in nz {
            let k = g.wavevector(i);
            assert_eq!((k[0], k[1].abs(), k[2]), (0.0, 1.0, 0.0));
        }
        assert!(u.component(1).iter().chain(u.component(2)).all(|z| z.norm() == 0.0));
    }

    #[test]
    fn random_field_properties() {
        let g = Grid::new(16).unwrap();
        let a = random_div_free(&g, 1, 4, 0.5).unwrap();
        let b = random_div_free(&g, 1, 4, 0.5).unwrap();
        assert_eq!(a.components(), b.components());
        assert!(a.divergence_residual() < 1e-13);
        assert!(a.hermitian_defect() == 0.0);
        assert_eq!(a.mean_magnitude(), 0.0);
        let rms = (2.0 * a.energy() / g.volume()).sqrt();
        assert!((rms - 0.5).abs() < 1e-12);
        let c = random_div_free(&g, 2, 4, 0.5).unwrap();
        assert_ne!(a.components(), c.components());
        assert!(random_div_free(&g, 1, 8, 1.0).is_err());
    }

    #[test]
    fn file_roundtrip() {
        let g = Grid::new(8).unwrap();
        let u = random_div_free(&g, 3, 2, 1.0).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("u.snap");
        Snapshot::from_velocity(&u, 0.0, 1.0).save(&path).unwrap();
        let v = from_file(&g, &path).unwrap();
        let d = v.combine(1.0, &u, -1.0);
        assert!(d.energy().sqrt() < 1e-13 * u.energy().sqrt());
        assert!(from_file(&Grid::new(16).unwrap(), &path).is_err());
        assert!(from_file(&g, dir.path().join("missing")).is_err());
    }
}
