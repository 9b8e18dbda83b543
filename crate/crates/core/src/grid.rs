//! Periodic torus grids and their wavevector lattices.

use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::fft::NdFft;
use crate::TAU;

/// Uniform discretization of the torus `[0, L)^d` with `n` points per axis.
///
/// Wavevectors are `ξ(k) = 2π k / L` componentwise with integer indices
/// `k ∈ [-n/2, n/2)`, stored in FFT order (`0, 1, …, n/2-1, -n/2, …, -1`).
/// The radial frequency `|ξ(k)|` is precomputed for every lattice point since
/// every multiplier in the crate is radial.
#[derive(Debug)]
pub struct Grid {
    dimension: usize,
    points_per_axis: usize,
    box_length: f64,
    axis_wavenumbers: Vec<i64>,
    xi_radius: Vec<f64>,
    fft: OnceLock<NdFft>,
}

impl Grid {
    /// Build a grid; `n` must be a power of two `>= 4`, `1 <= d <= 7`, `L > 0`.
    pub fn new(dimension: usize, points_per_axis: usize, box_length: f64) -> Result<Arc<Grid>> {
        if dimension < 1 || dimension > 7 {
            return Err(Error::DimensionOutOfRange(dimension));
        }
        let n = points_per_axis;
        if n < 4 || !n.is_power_of_two() {
            return Err(Error::PointsNotPowerOfTwo(n));
        }
        if !(box_length > 0.0) || !box_length.is_finite() {
            return Err(Error::InvalidBoxLength(box_length));
        }

        let axis_wavenumbers: Vec<i64> = (0..n)
            .map(|j| if j < n / 2 { j as i64 } else { j as i64 - n as i64 })
            .collect();

        let len = n.checked_pow(dimension as u32).expect("grid size overflow");
        let scale = TAU / box_length;
        let mut xi_radius = vec![0.0f64; len];
        // Odometer over lattice indices; |ξ|² accumulated in integers.
        let mut digits = vec![0usize; dimension];
        let mut ksq: i64 = 0;
        for r in xi_radius.iter_mut() {
            *r = scale * (ksq as f64).sqrt();
            // increment last axis first (row-major order)
            for ax in (0..dimension).rev() {
                let old = axis_wavenumbers[digits[ax]];
                digits[ax] += 1;
                if digits[ax] == n {
                    digits[ax] = 0;
                    ksq -= old * old;
                } else {
                    let new = axis_wavenumbers[digits[ax]];
                    ksq += new * new - old * old;
                    break;
                }
            }
        }

        Ok(Arc::new(Grid {
            dimension,
            points_per_axis,
            box_length,
            axis_wavenumbers,
            xi_radius,
            fft: OnceLock::new(),
        }))
    }

    /// Grid with the default box length 2π.
    pub fn new_tau(dimension: usize, points_per_axis: usize) -> Result<Arc<Grid>> {
        Grid::new(dimension, points_per_axis, TAU)
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn points_per_axis(&self) -> usize {
        self.points_per_axis
    }

    pub fn box_length(&self) -> f64 {
        self.box_length
    }

    /// Total number of lattice points, `n^d`.
    pub fn len(&self) -> usize {
        self.xi_radius.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Volume `V = L^d`.
    pub fn volume(&self) -> f64 {
        self.box_length.powi(self.dimension as i32)
    }

    /// Cell volume `ΔV = (L/n)^d`.
    pub fn cell_volume(&self) -> f64 {
        (self.box_length / self.points_per_axis as f64).powi(self.dimension as i32)
    }

    /// Integer wavenumbers per axis in FFT order.
    pub fn axis_wavenumbers(&self) -> &[i64] {
        &self.axis_wavenumbers
    }

    /// Per-axis frequencies `2π k / L` in FFT order.
    pub fn axis_frequencies(&self) -> Vec<f64> {
        let s = TAU / self.box_length;
        self.axis_wavenumbers.iter().map(|&k| s * k as f64).collect()
    }

    /// `|ξ(k)|` for every lattice point, in storage order.
    pub fn xi_radius(&self) -> &[f64] {
        &self.xi_radius
    }

    /// Frequency component `ξ_axis(k)` of the flattened index `idx`.
    pub fn xi_component(&self, idx: usize, axis: usize) -> f64 {
        let stride = self
            .points_per_axis
            .pow((self.dimension - 1 - axis) as u32);
        let k = self.axis_wavenumbers[(idx / stride) % self.points_per_axis];
        TAU / self.box_length * k as f64
    }

    /// Largest per-axis frequency, `(2π/L)(n/2)`.
    pub fn nyquist_per_axis(&self) -> f64 {
        TAU / self.box_length * (self.points_per_axis / 2) as f64
    }

    /// Largest resolved radial frequency, `(2π/L)(n/2)√d` (lattice corner).
    pub fn xi_max_radial(&self) -> f64 {
        self.nyquist_per_axis() * (self.dimension as f64).sqrt()
    }

    /// Flattened index of the integer wavevector `k` (entries in `[-n/2, n/2)`).
    pub fn index_of_wavevector(&self, k: &[i64]) -> Option<usize> {
        if k.len() != self.dimension {
            return None;
        }
        let n = self.points_per_axis as i64;
        let mut idx = 0usize;
        for &kj in k {
            if kj < -n / 2 || kj >= n / 2 {
                return None;
            }
            let j = if kj >= 0 { kj } else { kj + n } as usize;
            idx = idx * self.points_per_axis + j;
        }
        Some(idx)
    }

    /// Physical coordinates of the flattened index.
    pub fn point(&self, idx: usize) -> Vec<f64> {
        let n = self.points_per_axis;
        let h = self.box_length / n as f64;
        let mut x = vec![0.0; self.dimension];
        let mut rem = idx;
        for ax in (0..self.dimension).rev() {
            x[ax] = (rem % n) as f64 * h;
            rem /= n;
        }
        x
    }

    /// Shared FFT plan for this grid shape.
    pub fn fft(&self) -> &NdFft {
        self.fft
            .get_or_init(|| NdFft::new(self.points_per_axis, self.dimension))
    }

    /// Two grids are compatible when they have identical shape and box.
    pub fn same_shape(&self, other: &Grid) -> bool {
        self.dimension == other.dimension
            && self.points_per_axis == other.points_per_axis
            && self.box_length == other.box_length
    }
}

/// True when `x` is `2^j` for some integer `j` (exact in f64).
pub fn is_dyadic(x: f64) -> bool {
    if !(x > 0.0) || !x.is_finite() {
        return false;
    }
    let j = x.log2().round();
    (-1000.0..=1000.0).contains(&j) && (j as i32 as f64 == j) && 2f64.powi(j as i32) == x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wavenumbers_cover_expected_range() {
        let g = Grid::new_tau(1, 8).unwrap();
        assert_eq!(g.axis_wavenumbers(), &[0, 1, 2, 3, -4, -3, -2, -1]);
        let mut sorted = g.axis_wavenumbers().to_vec();
        sorted.sort_unstable();
        assert_eq!(sorted, (-4..4).collect::<Vec<_>>());
    }

    #[test]
    fn point_count_matches_power() {
        let g = Grid::new_tau(5, 16).unwrap();
        assert_eq!(g.len(), 1_048_576);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(Grid::new(2, 6, 1.0), Err(Error::PointsNotPowerOfTwo(6))));
        assert!(matches!(Grid::new(0, 8, 1.0), Err(Error::DimensionOutOfRange(0))));
        assert!(matches!(Grid::new(8, 8, 1.0), Err(Error::DimensionOutOfRange(8))));
        assert!(matches!(Grid::new(2, 8, 0.0), Err(Error::InvalidBoxLength(_))));
        assert!(matches!(Grid::new(2, 8, -1.0), Err(Error::InvalidBoxLength(_))));
    }

    #[test]
    fn zero_mode_exists_once() {
        let g = Grid::new_tau(3, 4).unwrap();
        let zeros = g.xi_radius().iter().filter(|&&r| r == 0.0).count();
        assert_eq!(zeros, 1);
        assert_eq!(g.xi_radius()[0], 0.0);
    }

    #[test]
    fn radius_matches_components() {
        let g = Grid::new(2, 8, 3.0).unwrap();
        for idx in 0..g.len() {
            let x = g.xi_component(idx, 0);
            let y = g.xi_component(idx, 1);
            let r = (x * x + y * y).sqrt();
            assert!((r - g.xi_radius()[idx]).abs() <= 1e-12 * r.max(1.0));
        }
    }

    #[test]
    fn nyquist_and_corner() {
        let g = Grid::new_tau(5, 16).unwrap();
        assert_eq!(g.nyquist_per_axis(), 8.0);
        assert!((g.xi_max_radial() - 8.0 * 5f64.sqrt()).abs() < 1e-12);
        // the corner mode (-n/2, ..., -n/2) is resolved exactly once
        let corner = g.index_of_wavevector(&[-8, -8, -8, -8, -8]).unwrap();
        assert!((g.xi_radius()[corner] - g.xi_max_radial()).abs() < 1e-12);
    }

    #[test]
    fn wavevector_roundtrip() {
        let g = Grid::new_tau(3, 8).unwrap();
        let idx = g.index_of_wavevector(&[1, -3, 2]).unwrap();
        assert!((g.xi_component(idx, 0) - 1.0).abs() < 1e-15);
        assert!((g.xi_component(idx, 1) + 3.0).abs() < 1e-15);
        assert!((g.xi_component(idx, 2) - 2.0).abs() < 1e-15);
        assert!(g.index_of_wavevector(&[4, 0, 0]).is_none());
        assert!(g.index_of_wavevector(&[-5, 0, 0]).is_none());
    }

    #[test]
    fn dyadic_detection() {
        assert!(is_dyadic(1.0));
        assert!(is_dyadic(0.5));
        assert!(is_dyadic(1024.0));
        assert!(!is_dyadic(3.0));
        assert!(!is_dyadic(0.0));
        assert!(!is_dyadic(-2.0));
    }
}
