use fnls_core::dynamics::{evolve, NonlinearitySpec, SolverConfig};
use fnls_core::field::Field;
use fnls_core::grid::Grid;
use fnls_core::par::Exec;
use fnls_core::Cx;
use std::time::Instant;

fn main() {
    let grid = Grid::new_tau(5, 16).unwrap();
    let n = grid.len();
    let src: Vec<Cx> = (0..n).map(|i| Cx::new((i as f64 * 0.37).sin(), (i as f64 * 0.11).cos())).collect();
    let mut dst = vec![Cx::new(0.0, 0.0); n];
    let fft = grid.fft();
    // warm up
    fft.forward_into(&src, &mut dst);
    for &exec in &[Exec::Seq, Exec::Par] {
        let t0 = Instant::now();
        let reps = 10;
        for _ in 0..reps {
            fft.forward_into_with(&src, &mut dst, exec);
        }
        println!("forward 16^5 {exec:?}: {:.1} ms", t0.elapsed().as_secs_f64() * 1000.0 / reps as f64);
    }
    // one fused solver step cost
    let spec = NonlinearitySpec::new(5).unwrap();
    let f = Field::from_spectral(&grid, {
        let mut c = vec![Cx::new(0.0, 0.0); n];
        for (i, r) in grid.xi_radius().iter().enumerate() {
            if *r <= 2.0 { c[i] = Cx::new(0.001, 0.0005); }
        }
        c
    });
    let config = SolverConfig::new(1e-3, 20, 20).unwrap();
    let t0 = Instant::now();
    let _ = evolve(&f, &config, &spec).unwrap();
    println!("evolve 20 steps: {:.1} ms/step", t0.elapsed().as_secs_f64() * 1000.0 / 20.0);
}
