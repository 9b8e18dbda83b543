use fnls_core::dynamics::{energy, evolve, mass, NonlinearitySpec, SolverConfig};
use fnls_core::grid::Grid;
use fnls_harness::data::band_limited_random;
use std::time::Instant;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let amplitude: f64 = args.get(1).map(|s| s.parse().unwrap()).unwrap_or(1.0);
    let horizon: f64 = args.get(2).map(|s| s.parse().unwrap()).unwrap_or(0.5);
    let grid = Grid::new_tau(5, 16).unwrap();
    let spec = NonlinearitySpec::new(5).unwrap();
    let u0 = band_limited_random(&grid, 1, 2.0, amplitude).unwrap();
    let mut drifts = Vec::new();
    for &dt in &[1e-3, 5e-4] {
        let steps = (horizon / dt).round() as usize;
        let stride = steps / 10;
        let config = SolverConfig::new(dt, steps, stride).unwrap();
        let t0 = Instant::now();
        let traj = evolve(&u0, &config, &spec).unwrap();
        let wall = t0.elapsed().as_secs_f64();
        let masses: Vec<f64> = traj.samples().iter().map(|s| mass(s)).collect();
        let energies: Vec<f64> = traj.samples().iter().map(|s| energy(s, &spec)).collect();
        let m0 = masses[0];
        let mdrift = masses.iter().map(|m| (m - m0).abs() / m0).fold(0.0f64, f64::max);
        let e0 = energies[0];
        let edrift = energies.iter().map(|e| (e - e0).abs()).fold(0.0f64, f64::max);
        println!("amp={amplitude} T={horizon} dt={dt}: wall={wall:.0}s mass_drift={mdrift:.3e} energy_drift={edrift:.6e} E0={e0:.6}");
        drifts.push(edrift);
    }
    println!("ratio = {:.3}", drifts[0] / drifts[1]);
}
