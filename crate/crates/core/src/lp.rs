//! Littlewood-Paley projectors built from the radial bump `φ`.
//!
//! `P_{≤M}` multiplies by `φ(|ξ|/M)`, `P_M` by `φ(|ξ|/M) − φ(2|ξ|/M)`, and the
//! remaining parts are the complementary combinations, so telescoping
//! identities like `P_{≤M₂} − P_{≤M₁} = Σ_{M₁<M≤M₂} P_M` hold exactly by
//! construction.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::grid::is_dyadic;
use crate::symbol::{bump_profile, RadialSymbol, ZeroMode};
use crate::Cx;

/// Which frequency region to keep, relative to the dyadic cutoff `M`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Part {
    /// `P_{≤M}`
    Leq,
    /// `P_{>M}`
    Gt,
    /// `P_M`, supported on `M/2 ≤ |ξ| ≤ 2M`
    Band,
    /// `P_{<M} = P_{≤M} − P_M`
    Lt,
    /// `P_{≥M} = P_{>M} + P_M`
    Geq,
}

/// The multiplier of the projector `P_part` at cutoff `m`.
pub fn symbol(m: f64, part: Part) -> Result<RadialSymbol> {
    if !is_dyadic(m) {
        return Err(Error::NonDyadicCutoff(m));
    }
    let f = move |r: f64| -> f64 {
        let low = bump_profile(r / m);
        match part {
            Part::Leq => low,
            Part::Gt => 1.0 - low,
            Part::Band => low - bump_profile(2.0 * r / m),
            Part::Lt => bump_profile(2.0 * r / m),
            Part::Geq => 1.0 - bump_profile(2.0 * r / m),
        }
    };
    Ok(RadialSymbol::from_fn(
        move |r| Cx::new(f(r), 0.0),
        ZeroMode::Evaluate,
    ))
}

/// Apply the projector `P_part` at dyadic cutoff `m`.
pub fn project(field: &Field, m: f64, part: Part) -> Result<Field> {
    field.apply_symbol(&symbol(m, part)?)
}

/// Dyadic cutoffs `2^j` with `2^{j_min} ≤ low` and `2^{j_max} ≥ high`.
pub fn dyadic_range(low: f64, high: f64) -> Vec<f64> {
    assert!(low > 0.0 && high >= low);
    let j_min = low.log2().floor() as i32;
    let j_max = high.log2().ceil() as i32;
    (j_min..=j_max).map(|j| 2f64.powi(j)).collect()
}
