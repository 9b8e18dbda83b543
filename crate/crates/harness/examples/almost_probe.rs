use fnls_core::dynamics::{NonlinearitySpec, SolverConfig};
use fnls_core::grid::Grid;
use fnls_core::imethod::{almost_conservation_experiment, IMethodConfig};
use fnls_harness::data::band_limited_random;
use std::time::Instant;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    // usage: almost_probe d n box_len band amp dt steps n_values...
    let d: usize = args[1].parse().unwrap();
    let n: usize = args[2].parse().unwrap();
    let box_len: f64 = args[3].parse().unwrap();
    let band: f64 = args[4].parse().unwrap();
    let amp: f64 = args[5].parse().unwrap();
    let dt: f64 = args[6].parse().unwrap();
    let steps: usize = args[7].parse().unwrap();
    let seed: u64 = args[8].parse().unwrap();
    let n_values: Vec<f64> = args[9..].iter().map(|s| s.parse().unwrap()).collect();
    let grid = Grid::new(d, n, box_len).unwrap();
    let spec = NonlinearitySpec::new(d).unwrap();
    let u0 = band_limited_random(&grid, seed, band, amp).unwrap();
    let stride = (steps / 10).max(1);
    let config = IMethodConfig {
        gamma: 1.8,
        delta: 0.1,
        n_values,
        solver: SolverConfig::new(dt, steps, stride).unwrap(),
        mu: 0.1,
    };
    let t0 = Instant::now();
    let rep = almost_conservation_experiment(&u0, &config, &spec).unwrap();
    println!(
        "d={d} n={n} L={box_len:.3} band={band} amp={amp} dt={dt} steps={steps} seed={seed} wall={:.0}s",
        t0.elapsed().as_secs_f64()
    );
    println!("  increments = {:?}", rep.sup_increments);
    println!("  h2(Iu0) = {:?} small_ok={}", rep.initial_modified_h2, rep.small_data_ok);
    println!("  slope = {:?}", rep.slope.map(|s| (s.slope, s.residual)));
    if let Some(m) = rep.m_norm { println!("  m_norm = {m:.4e}"); }
}
