//! Deterministic initial-data generation.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use fnls_core::field::Field;
use fnls_core::grid::Grid;
use fnls_core::norms::sobolev_norm;
use fnls_core::Cx;

use crate::config::{DataSection, PlaneWave};
use crate::error::HarnessError;

/// Build the initial datum described by the `[data]` section. Deterministic:
/// the same section and grid produce bitwise-identical fields.
pub fn make_initial_data(section: &DataSection, grid: &Arc<Grid>) -> Result<Field, HarnessError> {
    match section.family.as_str() {
        "band_limited_random" => {
            let seed = section
                .seed
                .ok_or_else(|| HarnessError::one("data: random family requires a seed"))?;
            let band = section
                .band
                .ok_or_else(|| HarnessError::one("data: band_limited_random requires band"))?;
            let amplitude = section.amplitude.ok_or_else(|| {
                HarnessError::one("data: band_limited_random requires amplitude")
            })?;
            band_limited_random(grid, seed, band, amplitude)
        }
        "gaussian_bump" => {
            let width = section
                .width
                .ok_or_else(|| HarnessError::one("data: gaussian_bump requires width"))?;
            let amplitude = section
                .amplitude
                .ok_or_else(|| HarnessError::one("data: gaussian_bump requires amplitude"))?;
            Ok(gaussian_bump(grid, width, amplitude))
        }
        "plane_wave_sum" => {
            let waves = section
                .waves
                .as_ref()
                .ok_or_else(|| HarnessError::one("data: plane_wave_sum requires waves"))?;
            plane_wave_sum(grid, waves)
        }
        other => Err(HarnessError::one(format!("data: unknown family {other:?}"))),
    }
}

/// Seeded complex Gaussians on the modes `|ξ| ≤ band`, then one global
/// scaling so that `‖u₀‖_{H²}` hits `amplitude` (which dominates
/// `‖I_N u₀‖_{H²}` for every cutoff since `m_N ≤ 1`).
pub fn band_limited_random(
    grid: &Arc<Grid>,
    seed: u64,
    band: f64,
    amplitude: f64,
) -> Result<Field, HarnessError> {
    if band > grid.nyquist_per_axis() {
        return Err(HarnessError::one(format!(
            "data: band = {band} beyond per-axis Nyquist {}",
            grid.nyquist_per_axis()
        )));
    }
    if amplitude == 0.0 {
        return Ok(Field::zeros(grid));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let radius = grid.xi_radius();
    // fixed lattice order keeps the draw sequence reproducible
    let coeffs: Vec<Cx> = (0..grid.len())
        .map(|i| {
            if radius[i] <= band {
                let re: f64 = StandardNormal.sample(&mut rng);
                let im: f64 = StandardNormal.sample(&mut rng);
                Cx::new(re, im)
            } else {
                Cx::new(0.0, 0.0)
            }
        })
        .collect();
    let mut field = Field::from_spectral(grid, coeffs);
    let h2 = sobolev_norm(&field, 2.0, false);
    if h2 == 0.0 {
        return Err(HarnessError::one(
            "data: no modes inside the requested band",
        ));
    }
    field = field.scale(Cx::new(amplitude / h2, 0.0));
    Ok(field)
}

/// `amplitude · exp(-|x - L/2|² / (2 width²))`, centered on the torus.
pub fn gaussian_bump(grid: &Arc<Grid>, width: f64, amplitude: f64) -> Field {
    let center = grid.box_length() / 2.0;
    let inv = 1.0 / (2.0 * width * width);
    let values: Vec<Cx> = (0..grid.len())
        .map(|idx| {
            let x = grid.point(idx);
            let r2: f64 = x.iter().map(|&xi| (xi - center) * (xi - center)).sum();
            Cx::new(amplitude * (-r2 * inv).exp(), 0.0)
        })
        .collect();
    Field::from_physical(grid, values)
}

pub fn plane_wave_sum(grid: &Arc<Grid>, waves: &[PlaneWave]) -> Result<Field, HarnessError> {
    let mut coeffs = vec![Cx::new(0.0, 0.0); grid.len()];
    for (i, w) in waves.iter().enumerate() {
        let idx = grid.index_of_wavevector(&w.k).ok_or_else(|| {
            HarnessError::one(format!("data: waves[{i}].k = {:?} outside the lattice", w.k))
        })?;
        coeffs[idx] += Cx::new(w.re, w.im);
    }
    Ok(Field::from_spectral(grid, coeffs))
}
