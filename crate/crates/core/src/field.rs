//! Complex fields on a grid, with cached physical and spectral representations.

use std::borrow::Cow;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::par::{self, Exec};
use crate::symbol::{RadialSymbol, ZeroMode};
use crate::Cx;

/// A complex-valued state on a [`Grid`].
///
/// Both representations use the convention `u(x) = Σ_k û(k) e^{iξ(k)·x}`, so
/// Parseval reads `Σ_x |u(x)|² ΔV = V Σ_k |û(k)|²`. Conversions cache the
/// other representation; mutating accessors invalidate the stale one.
#[derive(Debug, Clone)]
pub struct Field {
    grid: Arc<Grid>,
    physical: Vec<Cx>,
    spectral: Vec<Cx>,
    has_physical: bool,
    has_spectral: bool,
}

impl Field {
    pub fn zeros(grid: &Arc<Grid>) -> Field {
        Field {
            grid: Arc::clone(grid),
            physical: vec![Cx::new(0.0, 0.0); grid.len()],
            spectral: Vec::new(),
            has_physical: true,
            has_spectral: false,
        }
    }

    pub fn from_physical(grid: &Arc<Grid>, values: Vec<Cx>) -> Field {
        assert_eq!(values.len(), grid.len());
        Field {
            grid: Arc::clone(grid),
            physical: values,
            spectral: Vec::new(),
            has_physical: true,
            has_spectral: false,
        }
    }

    pub fn from_spectral(grid: &Arc<Grid>, coeffs: Vec<Cx>) -> Field {
        assert_eq!(coeffs.len(), grid.len());
        Field {
            grid: Arc::clone(grid),
            physical: Vec::new(),
            spectral: coeffs,
            has_physical: false,
            has_spectral: true,
        }
    }

    /// Plane wave `A e^{iξ(k)·x}`, built spectrally (one coefficient).
    pub fn plane_wave(grid: &Arc<Grid>, wavevector: &[i64], amplitude: Cx) -> Result<Field> {
        let idx = grid
            .index_of_wavevector(wavevector)
            .ok_or(Error::AxisOutOfRange {
                axis: wavevector.len(),
                dimension: grid.dimension(),
            })?;
        let mut coeffs = vec![Cx::new(0.0, 0.0); grid.len()];
        coeffs[idx] = amplitude;
        Ok(Field::from_spectral(grid, coeffs))
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn has_physical(&self) -> bool {
        self.has_physical
    }

    pub fn has_spectral(&self) -> bool {
        self.has_spectral
    }

    /// Ensure the spectral representation is cached; returns the coefficients.
    pub fn to_spectral(&mut self) -> &[Cx] {
        if !self.has_spectral {
            assert!(self.has_physical, "field has no representation");
            if self.spectral.len() != self.grid.len() {
                self.spectral = vec![Cx::new(0.0, 0.0); self.grid.len()];
            }
            self.grid.fft().forward_into(&self.physical, &mut self.spectral);
            self.has_spectral = true;
        }
        &self.spectral
    }

    /// Ensure the physical representation is cached; returns the samples.
    pub fn to_physical(&mut self) -> &[Cx] {
        if !self.has_physical {
            assert!(self.has_spectral, "field has no representation");
            if self.physical.len() != self.grid.len() {
                self.physical = vec![Cx::new(0.0, 0.0); self.grid.len()];
            }
            self.grid.fft().inverse_into(&self.spectral, &mut self.physical);
            self.has_physical = true;
        }
        &self.physical
    }

    /// Spectral coefficients without mutating the cache (computed fresh when
    /// absent). Prefer [`Field::to_spectral`] when a `&mut` is available.
    pub fn spectral_or_compute(&self) -> Cow<'_, [Cx]> {
        if self.has_spectral {
            Cow::Borrowed(&self.spectral[..])
        } else {
            let mut out = vec![Cx::new(0.0, 0.0); self.grid.len()];
            self.grid.fft().forward_into(&self.physical, &mut out);
            Cow::Owned(out)
        }
    }

    /// Physical samples without mutating the cache.
    pub fn physical_or_compute(&self) -> Cow<'_, [Cx]> {
        if self.has_physical {
            Cow::Borrowed(&self.physical[..])
        } else {
            let mut out = vec![Cx::new(0.0, 0.0); self.grid.len()];
            self.grid.fft().inverse_into(&self.spectral, &mut out);
            Cow::Owned(out)
        }
    }

    /// Mutable physical samples; invalidates the spectral cache.
    pub fn physical_mut(&mut self) -> &mut [Cx] {
        self.to_physical();
        self.has_spectral = false;
        &mut self.physical
    }

    /// Mutable spectral coefficients; invalidates the physical cache.
    pub fn spectral_mut(&mut self) -> &mut [Cx] {
        self.to_spectral();
        self.has_physical = false;
        &mut self.spectral
    }

    /// Cache both representations (used when a state is stored as a sample).
    pub fn cache_both(&mut self) {
        self.to_physical();
        self.to_spectral();
    }

    /// Pointwise multiply the spectral coefficients by `σ(|ξ(k)|)`.
    pub fn apply_symbol(&self, symbol: &RadialSymbol) -> Result<Field> {
        self.apply_symbol_with(symbol, Exec::default())
    }

    pub fn apply_symbol_with(&self, symbol: &RadialSymbol, exec: Exec) -> Result<Field> {
        let zero_value = match symbol.zero_mode() {
            ZeroMode::Annihilate => Cx::new(0.0, 0.0),
            ZeroMode::Value(v) => v,
            ZeroMode::Evaluate => {
                let v = symbol.eval(0.0);
                if !v.re.is_finite() || !v.im.is_finite() {
                    return Err(Error::SingularSymbolAtZero);
                }
                v
            }
        };
        let src = self.spectral_or_compute();
        let radius = self.grid.xi_radius();
        let mut out = vec![Cx::new(0.0, 0.0); self.grid.len()];
        par::map_into(exec, &src, &mut out, |i, c| {
            if i == 0 {
                zero_value * c
            } else {
                symbol.eval(radius[i]) * c
            }
        });
        Ok(Field::from_spectral(&self.grid, out))
    }

    /// Spectral derivative `∂_axis`: multiply by `iξ_axis(k)`.
    pub fn gradient_component(&self, axis: usize) -> Result<Field> {
        let d = self.grid.dimension();
        if axis >= d {
            return Err(Error::AxisOutOfRange { axis, dimension: d });
        }
        let src = self.spectral_or_compute();
        let grid = Arc::clone(&self.grid);
        let mut out = vec![Cx::new(0.0, 0.0); grid.len()];
        let gref = &grid;
        par::map_into(Exec::default(), &src, &mut out, |i, c| {
            let xi = gref.xi_component(i, axis);
            Cx::new(0.0, xi) * c
        });
        Ok(Field::from_spectral(&self.grid, out))
    }

    /// All spatial derivatives `(∂_1 u, …, ∂_d u)`.
    pub fn gradient(&self) -> Result<Vec<Field>> {
        (0..self.grid.dimension())
            .map(|ax| self.gradient_component(ax))
            .collect()
    }

    /// `self + other`, in whichever representation both share (spectral
    /// preferred; conversion is linear so the choice does not matter).
    pub fn add(&self, other: &Field) -> Result<Field> {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Field) -> Result<Field> {
        self.zip(other, |a, b| a - b)
    }

    pub fn scale(&self, factor: Cx) -> Field {
        if self.has_spectral {
            let mut out = self.spectral.clone();
            par::map_mut(Exec::default(), &mut out, |_, v| *v *= factor);
            Field::from_spectral(&self.grid, out)
        } else {
            let mut out = self.physical.clone();
            par::map_mut(Exec::default(), &mut out, |_, v| *v *= factor);
            Field::from_physical(&self.grid, out)
        }
    }

    fn zip<F: Fn(Cx, Cx) -> Cx + Sync>(&self, other: &Field, f: F) -> Result<Field> {
        if !self.grid.same_shape(&other.grid) {
            return Err(Error::GridMismatch);
        }
        if self.has_spectral && other.has_spectral {
            let a = &self.spectral;
            let b = &other.spectral;
            let mut out = vec![Cx::new(0.0, 0.0); self.grid.len()];
            par::map_into(Exec::default(), a, &mut out, |i, v| f(*v, b[i]));
            Ok(Field::from_spectral(&self.grid, out))
        } else {
            let a = self.physical_or_compute();
            let b = other.physical_or_compute();
            let mut out = vec![Cx::new(0.0, 0.0); self.grid.len()];
            par::map_into(Exec::default(), &a, &mut out, |i, v| f(*v, b[i]));
            Ok(Field::from_physical(&self.grid, out))
        }
    }

    /// Relative L² distance between two fields (test helper).
    pub fn rel_l2_distance(&self, other: &Field) -> Result<f64> {
        if !self.grid.same_shape(&other.grid) {
            return Err(Error::GridMismatch);
        }
        let a = self.physical_or_compute();
        let b = other.physical_or_compute();
        let num = par::sum_elems(Exec::default(), &a, |i, v| (v - b[i]).norm_sqr());
        let den = par::sum_elems(Exec::default(), &a, |_, v| v.norm_sqr());
        Ok(if den == 0.0 {
            num.sqrt()
        } else {
            (num / den).sqrt()
        })
    }
}
