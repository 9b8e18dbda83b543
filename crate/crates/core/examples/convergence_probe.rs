use fnls_core::dynamics::{evolve, NonlinearitySpec, SolverConfig};
use fnls_core::field::Field;
use fnls_core::grid::Grid;
use fnls_core::Cx;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

fn band_limited(grid: &Arc<Grid>, band: f64, scale: f64, seed: u64) -> Field {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let radius = grid.xi_radius().to_vec();
    let coeffs: Vec<Cx> = (0..grid.len())
        .map(|i| {
            if radius[i] <= band {
                Cx::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5) * scale
            } else {
                Cx::new(0.0, 0.0)
            }
        })
        .collect();
    Field::from_spectral(grid, coeffs)
}

fn probe(n: usize, band: f64, scale: f64, horizon: f64, dts: &[f64], ref_dt: f64) {
    let grid = Grid::new_tau(1, n).unwrap();
    let spec = NonlinearitySpec::new(1).unwrap();
    let f = band_limited(&grid, band, scale, 6);
    let maxu = f.physical_or_compute().iter().map(|v| v.norm()).fold(0.0f64, f64::max);
    let run = |dt: f64| {
        let steps = (horizon / dt).round() as usize;
        let config = SolverConfig::new(dt, steps, steps).unwrap();
        evolve(&f, &config, &spec).unwrap().samples().last().unwrap().clone()
    };
    let reference = run(ref_dt);
    let base = fnls_core::dynamics::mass(&f).sqrt();
    let errs: Vec<f64> = dts.iter()
        .map(|&dt| {
            let diff = run(dt).sub(&reference).unwrap();
            fnls_core::dynamics::mass(&diff).sqrt() / base
        })
        .collect();
    let ratios: Vec<String> = errs.windows(2).map(|w| format!("{:.2}", w[0] / w[1])).collect();
    println!("n={n} band={band} scale={scale} T={horizon} max|u|={maxu:.3} errs={errs:?} ratios={ratios:?}");
}

fn main() {
    // finer-dt continuation of the stagnating case
    probe(64, 3.0, 0.12, 0.128, &[5e-4, 2.5e-4, 1.25e-4], 1.5625e-5);
    // time-resolved small-frequency grids
    probe(16, 2.0, 0.35, 0.04, &[4e-4, 2e-4, 1e-4], 1.25e-5);
    probe(16, 2.0, 0.35, 0.064, &[8e-4, 4e-4, 2e-4], 2.5e-5);
    probe(32, 2.0, 0.3, 0.04, &[4e-4, 2e-4, 1e-4], 1.25e-5);
}
