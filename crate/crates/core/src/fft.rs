//! Multi-dimensional FFT on `n^d` lattices, built from 1-D transforms.
//!
//! A `d`-dimensional transform runs as `d` passes. Each pass transposes the
//! leading axis to the end (a blocked `n × m → m × n` transpose, `m = n^{d-1}`)
//! and immediately FFTs the now-contiguous length-`n` rows while they are hot
//! in cache. After `d` passes the layout is back to canonical order and every
//! axis has been transformed once. Passes ping-pong between the destination
//! buffer and one pooled scratch buffer; the source is only read.
//!
//! Conventions: `forward_into` produces coefficients with the normalization
//! `û(k) = n^{-d} Σ_x u(x) e^{-iξ(k)·x}`, so `u(x) = Σ_k û(k) e^{iξ(k)·x}`
//! and `inverse_into` is unnormalized. The scaling is fused into the last
//! forward pass.

use std::sync::{Arc, Mutex};

use rustfft::{Fft, FftPlanner};

use crate::par::{Exec, CHUNK};
use crate::Cx;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

struct BufferPool(Mutex<Vec<Vec<Cx>>>);

impl BufferPool {
    fn acquire(&self, len: usize) -> Vec<Cx> {
        let mut pool = self.0.lock().unwrap();
        match pool.pop() {
            Some(v) if v.len() == len => v,
            _ => vec![Cx::new(0.0, 0.0); len],
        }
    }

    fn release(&self, buf: Vec<Cx>) {
        let mut pool = self.0.lock().unwrap();
        if pool.len() < 2 {
            pool.push(buf);
        }
    }
}

/// FFT plan for an `n^d` lattice.
pub struct NdFft {
    n: usize,
    d: usize,
    len: usize,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
    pool: BufferPool,
}

impl std::fmt::Debug for NdFft {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("NdFft")
            .field("n", &self.n)
            .field("d", &self.d)
            .finish()
    }
}

impl NdFft {
    pub fn new(n: usize, d: usize) -> Self {
        assert!(n.is_power_of_two() && n >= 4 && (1..=7).contains(&d));
        let mut planner = FftPlanner::<f64>::new();
        let fwd = planner.plan_fft_forward(n);
        let inv = planner.plan_fft_inverse(n);
        let len = n.pow(d as u32);
        NdFft {
            n,
            d,
            len,
            fwd,
            inv,
            pool: BufferPool(Mutex::new(Vec::new())),
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Physical samples -> spectral coefficients (scaled by `n^{-d}`).
    pub fn forward_into(&self, src: &[Cx], dst: &mut [Cx]) {
        self.forward_into_with(src, dst, Exec::default());
    }

    pub fn forward_into_with(&self, src: &[Cx], dst: &mut [Cx], exec: Exec) {
        let scale = 1.0 / self.len as f64;
        self.run(src, dst, true, scale, exec);
    }

    /// Spectral coefficients -> physical samples (unnormalized inverse).
    pub fn inverse_into(&self, src: &[Cx], dst: &mut [Cx]) {
        self.inverse_into_with(src, dst, Exec::default());
    }

    pub fn inverse_into_with(&self, src: &[Cx], dst: &mut [Cx], exec: Exec) {
        self.run(src, dst, false, 1.0, exec);
    }

    fn run(&self, src: &[Cx], dst: &mut [Cx], forward: bool, final_scale: f64, exec: Exec) {
        assert_eq!(src.len(), self.len);
        assert_eq!(dst.len(), self.len);
        let plan = if forward { &self.fwd } else { &self.inv };

        if self.d == 1 {
            dst.copy_from_slice(src);
            let mut scratch = vec![Cx::new(0.0, 0.0); plan.get_inplace_scratch_len()];
            plan.process_with_scratch(dst, &mut scratch);
            if final_scale != 1.0 {
                for v in dst.iter_mut() {
                    *v = *v * final_scale;
                }
            }
            return;
        }

        let mut tmp = self.pool.acquire(self.len);
        // The chain must end in `dst`: with d passes alternating targets,
        // start in `dst` for odd d and in `tmp` for even d.
        let mut in_tmp = self.d % 2 == 0;
        let scale0 = if self.d == 1 { final_scale } else { 1.0 };
        if in_tmp {
            self.pass(plan, src, &mut tmp, scale0, exec);
        } else {
            self.pass(plan, src, dst, scale0, exec);
        }
        for p in 1..self.d {
            let scale = if p == self.d - 1 { final_scale } else { 1.0 };
            if in_tmp {
                self.pass(plan, &tmp, dst, scale, exec);
            } else {
                self.pass(plan, dst, &mut tmp, scale, exec);
            }
            in_tmp = !in_tmp;
        }
        debug_assert!(!in_tmp);
        self.pool.release(tmp);
    }

    /// One rotate-and-transform pass: `dst[j*n + i] = src[i*m + j]`, then FFT
    /// every length-`n` row of `dst`, scaling the output if requested.
    fn pass(&self, plan: &Arc<dyn Fft<f64>>, src: &[Cx], dst: &mut [Cx], scale: f64, exec: Exec) {
        let n = self.n;
        let m = self.len / n;
        // Tile of n rows x `block` columns, sized to stay cache-resident.
        let block = (32_768 / (16 * n)).clamp(1, 256).next_power_of_two().min(m);
        let chunk_len = block * n;
        let scratch_len = plan.get_inplace_scratch_len();

        let work = |ci: usize, chunk: &mut [Cx], tile: &mut [Cx], scratch: &mut [Cx]| {
            let j0 = ci * block;
            for i in 0..n {
                tile[i * block..(i + 1) * block]
                    .copy_from_slice(&src[i * m + j0..i * m + j0 + block]);
            }
            for (jj, row) in chunk.chunks_mut(n).enumerate() {
                for (i, v) in row.iter_mut().enumerate() {
                    *v = tile[i * block + jj];
                }
            }
            plan.process_with_scratch(chunk, scratch);
            if scale != 1.0 {
                for v in chunk.iter_mut() {
                    *v = *v * scale;
                }
            }
        };

        let par_worthwhile = self.len >= 2 * CHUNK;
        match exec {
            #[cfg(feature = "parallel")]
            Exec::Par if par_worthwhile => {
                dst.par_chunks_mut(chunk_len).enumerate().for_each_init(
                    || {
                        (
                            vec![Cx::new(0.0, 0.0); chunk_len],
                            vec![Cx::new(0.0, 0.0); scratch_len],
                        )
                    },
                    |(tile, scratch), (ci, chunk)| work(ci, chunk, tile, scratch),
                );
            }
            _ => {
                let _ = par_worthwhile;
                let mut tile = vec![Cx::new(0.0, 0.0); chunk_len];
                let mut scratch = vec![Cx::new(0.0, 0.0); scratch_len];
                for (ci, chunk) in dst.chunks_mut(chunk_len).enumerate() {
                    work(ci, chunk, &mut tile, &mut scratch);
                }
            }
        }
    }
}

/// Direct DFT with the crate normalization; O(N²), for tests and oracles.
pub fn dft_direct(grid: &crate::Grid, values: &[Cx], forward: bool) -> Vec<Cx> {
    let len = grid.len();
    assert_eq!(values.len(), len);
    let n = grid.points_per_axis();
    let d = grid.dimension();
    let unflatten = |mut idx: usize| {
        let mut js = vec![0usize; d];
        for ax in (0..d).rev() {
            js[ax] = idx % n;
            idx /= n;
        }
        js
    };
    let mut out = vec![Cx::new(0.0, 0.0); len];
    let sign = if forward { -1.0 } else { 1.0 };
    for (o, out_v) in out.iter_mut().enumerate() {
        let jo = unflatten(o);
        let mut acc = Cx::new(0.0, 0.0);
        for (i, v) in values.iter().enumerate() {
            let ji = unflatten(i);
            // exponent 2π Σ j_o j_i / n, reduced mod n in integers
            let mut phase = 0usize;
            for ax in 0..d {
                phase = (phase + jo[ax] * ji[ax]) % n;
            }
            let angle = sign * crate::TAU * phase as f64 / n as f64;
            acc += v * Cx::new(angle.cos(), angle.sin());
        }
        *out_v = if forward { acc / len as f64 } else { acc };
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Grid;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn random_values(len: usize, seed: u64) -> Vec<Cx> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..len)
            .map(|_| Cx::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
            .collect()
    }

    #[test]
    fn matches_direct_dft() {
        for &(d, n) in &[(1usize, 8usize), (2, 8), (3, 4)] {
            let grid = Grid::new_tau(d, n).unwrap();
            let v = random_values(grid.len(), 7);
            let mut fast = vec![Cx::new(0.0, 0.0); grid.len()];
            grid.fft().forward_into(&v, &mut fast);
            let slow = dft_direct(&grid, &v, true);
            let err: f64 = fast
                .iter()
                .zip(&slow)
                .map(|(a, b)| (a - b).norm_sqr())
                .sum::<f64>()
                .sqrt();
            assert!(err < 1e-12, "d={d} n={n} err={err:e}");
        }
    }

    #[test]
    fn roundtrip_identity() {
        for &(d, n) in &[(1usize, 64usize), (2, 16), (4, 8), (5, 4)] {
            let grid = Grid::new_tau(d, n).unwrap();
            let v = random_values(grid.len(), 11);
            let mut hat = vec![Cx::new(0.0, 0.0); grid.len()];
            let mut back = vec![Cx::new(0.0, 0.0); grid.len()];
            grid.fft().forward_into(&v, &mut hat);
            grid.fft().inverse_into(&hat, &mut back);
            let num: f64 = v.iter().zip(&back).map(|(a, b)| (a - b).norm_sqr()).sum();
            let den: f64 = v.iter().map(|a| a.norm_sqr()).sum();
            assert!(num.sqrt() <= 1e-12 * den.sqrt(), "d={d} n={n}");
        }
    }

    #[test]
    fn seq_and_par_agree_bitwise() {
        let grid = Grid::new_tau(3, 16).unwrap();
        let v = random_values(grid.len(), 3);
        let mut a = vec![Cx::new(0.0, 0.0); grid.len()];
        let mut b = vec![Cx::new(0.0, 0.0); grid.len()];
        grid.fft().forward_into_with(&v, &mut a, Exec::Seq);
        grid.fft().forward_into_with(&v, &mut b, Exec::Par);
        assert!(a.iter().zip(&b).all(|(x, y)| x == y));
    }

    #[test]
    fn plane_wave_single_coefficient() {
        let grid = Grid::new_tau(2, 8).unwrap();
        let amp = Cx::new(0.7, -0.3);
        let k = [3i64, -2i64];
        let vals: Vec<Cx> = (0..grid.len())
            .map(|idx| {
                let x = grid.point(idx);
                let phase = k[0] as f64 * x[0] + k[1] as f64 * x[1];
                amp * Cx::new(phase.cos(), phase.sin())
            })
            .collect();
        let mut hat = vec![Cx::new(0.0, 0.0); grid.len()];
        grid.fft().forward_into(&vals, &mut hat);
        let at = grid.index_of_wavevector(&k).unwrap();
        assert!((hat[at] - amp).norm() < 1e-13);
        let rest: f64 = hat
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != at)
            .map(|(_, c)| c.norm())
            .fold(0.0, f64::max);
        assert!(rest < 1e-13);
    }
}
