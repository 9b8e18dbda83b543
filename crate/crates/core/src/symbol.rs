//! Radial Fourier multipliers `ξ ↦ σ(|ξ|)`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::Cx;

/// What a multiplier does to the `ξ = 0` mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ZeroMode {
    /// Evaluate `σ(0)`; applying the symbol fails if that is not finite.
    Evaluate,
    /// Zero out the mean. The standard torus surrogate for negative-order
    /// symbols, which have no zero mode on `ℝ^d`.
    Annihilate,
    /// Use an explicit value.
    Value(Cx),
}

/// A radial Fourier-multiplier specification.
///
/// Evaluation is a pure function of `r = |ξ| ≥ 0`, so repeated evaluation at
/// the same radius is bitwise identical.
#[derive(Clone)]
pub struct RadialSymbol {
    eval: Arc<dyn Fn(f64) -> Cx + Send + Sync>,
    zero_mode: ZeroMode,
    label: &'static str,
}

impl std::fmt::Debug for RadialSymbol {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RadialSymbol")
            .field("label", &self.label)
            .field("zero_mode", &self.zero_mode)
            .finish()
    }
}

/// Transition profile of the smoothing multiplier `m_N` on `N < r < 2N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Transition {
    /// `min(1, (r/N)^{γ-2})`: matches both prescribed regions, continuous,
    /// with a kink at `r = N`.
    #[default]
    Sharp,
    /// Exponent blended by the quintic smoothstep in `log₂(r/N)`; C² and
    /// still non-increasing.
    Smoothed,
}

/// Quintic smoothstep `6t⁵ - 15t⁴ + 10t³` clamped to `[0, 1]`.
fn smoothstep(t: f64) -> f64 {
    let t = t.clamp(0.0, 1.0);
    t * t * t * (10.0 + t * (-15.0 + 6.0 * t))
}

/// The radial bump `φ`: 1 on `r ≤ 1`, 0 on `r ≥ 2`, monotone C² between.
pub fn bump_profile(r: f64) -> f64 {
    1.0 - smoothstep(r - 1.0)
}

/// The smoothing-multiplier profile: 1 on `r ≤ N`, `(r/N)^{γ-2}` on `r ≥ 2N`.
pub fn i_profile(r: f64, n: f64, gamma: f64, transition: Transition) -> f64 {
    if r <= n {
        return 1.0;
    }
    let ratio = r / n;
    match transition {
        Transition::Sharp => ratio.powf(gamma - 2.0).min(1.0),
        Transition::Smoothed => {
            let w = smoothstep(ratio.log2());
            ratio.powf((gamma - 2.0) * w)
        }
    }
}

impl RadialSymbol {
    pub fn from_fn<F>(f: F, zero_mode: ZeroMode) -> RadialSymbol
    where
        F: Fn(f64) -> Cx + Send + Sync + 'static,
    {
        RadialSymbol {
            eval: Arc::new(f),
            zero_mode,
            label: "custom",
        }
    }

    fn real<F>(f: F, zero_mode: ZeroMode, label: &'static str) -> RadialSymbol
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        RadialSymbol {
            eval: Arc::new(move |r| Cx::new(f(r), 0.0)),
            zero_mode,
            label,
        }
    }

    /// The identity multiplier.
    pub fn one() -> RadialSymbol {
        Self::real(|_| 1.0, ZeroMode::Value(Cx::new(1.0, 0.0)), "1")
    }

    /// `|ξ|^s`. Negative orders annihilate the mean by default.
    pub fn power(s: f64) -> RadialSymbol {
        let zero = if s < 0.0 {
            ZeroMode::Annihilate
        } else {
            ZeroMode::Evaluate
        };
        Self::power_with_zero_mode(s, zero)
    }

    pub fn power_with_zero_mode(s: f64, zero_mode: ZeroMode) -> RadialSymbol {
        Self::real(move |r| r.powf(s), zero_mode, "|xi|^s")
    }

    /// `⟨ξ⟩^s = (1 + |ξ|²)^{s/2}`.
    pub fn japanese_bracket(s: f64) -> RadialSymbol {
        Self::real(
            move |r| (1.0 + r * r).powf(s / 2.0),
            ZeroMode::Evaluate,
            "<xi>^s",
        )
    }

    /// `⟨Δ⟩` realized as the multiplier `1 + |ξ|²`.
    pub fn bracket_laplacian() -> RadialSymbol {
        Self::real(|r| 1.0 + r * r, ZeroMode::Evaluate, "<Delta>")
    }

    /// The bump `φ(|ξ| / scale)`.
    pub fn bump_scaled(scale: f64) -> RadialSymbol {
        Self::real(move |r| bump_profile(r / scale), ZeroMode::Evaluate, "phi")
    }

    /// The smoothing multiplier `m_N` with `N ≥ 1` and `0 ≤ γ < 2`.
    pub fn i_operator(n: f64, gamma: f64) -> Result<RadialSymbol> {
        Self::i_operator_with(n, gamma, Transition::Sharp)
    }

    pub fn i_operator_with(n: f64, gamma: f64, transition: Transition) -> Result<RadialSymbol> {
        if !(n >= 1.0) || !(0.0..2.0).contains(&gamma) {
            return Err(Error::InvalidISymbol { n, gamma });
        }
        Ok(Self::real(
            move |r| i_profile(r, n, gamma, transition),
            ZeroMode::Value(Cx::new(1.0, 0.0)),
            "m_N",
        ))
    }

    /// Free-propagator phase `e^{it|ξ|⁴}`.
    pub fn propagator(t: f64) -> RadialSymbol {
        RadialSymbol {
            eval: Arc::new(move |r| {
                let r2 = r * r;
                Cx::from_polar(1.0, t * r2 * r2)
            }),
            zero_mode: ZeroMode::Evaluate,
            label: "exp(it|xi|^4)",
        }
    }

    /// Pointwise product `σ₁ σ₂`.
    pub fn product(a: &RadialSymbol, b: &RadialSymbol) -> RadialSymbol {
        let (fa, fb) = (Arc::clone(&a.eval), Arc::clone(&b.eval));
        let zero_mode = match (a.zero_value(), b.zero_value()) {
            (None, _) | (_, None) => ZeroMode::Annihilate,
            (Some(x), Some(y)) => {
                let v = x * y;
                if v.re.is_finite() && v.im.is_finite() {
                    ZeroMode::Value(v)
                } else {
                    ZeroMode::Evaluate
                }
            }
        };
        RadialSymbol {
            eval: Arc::new(move |r| fa(r) * fb(r)),
            zero_mode,
            label: "product",
        }
    }

    /// Value used for the zero mode, `None` when the mean is annihilated.
    fn zero_value(&self) -> Option<Cx> {
        match self.zero_mode {
            ZeroMode::Annihilate => None,
            ZeroMode::Value(v) => Some(v),
            ZeroMode::Evaluate => Some((self.eval)(0.0)),
        }
    }

    pub fn eval(&self, r: f64) -> Cx {
        (self.eval)(r)
    }

    pub fn eval_real(&self, r: f64) -> f64 {
        (self.eval)(r).re
    }

    pub fn zero_mode(&self) -> ZeroMode {
        self.zero_mode
    }

    pub fn with_zero_mode(mut self, zero_mode: ZeroMode) -> RadialSymbol {
        self.zero_mode = zero_mode;
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bump_values() {
        assert_eq!(bump_profile(0.0), 1.0);
        assert_eq!(bump_profile(0.5), 1.0);
        assert_eq!(bump_profile(1.0), 1.0);
        assert_eq!(bump_profile(2.0), 0.0);
        assert_eq!(bump_profile(3.0), 0.0);
        // the chosen quintic transition at its midpoint
        assert!((bump_profile(1.5) - 0.5).abs() < 1e-15);
        // monotone on a fine sweep
        let mut prev = 1.0;
        for i in 0..=400 {
            let v = bump_profile(i as f64 * 0.01);
            assert!(v <= prev + 1e-15);
            prev = v;
        }
    }

    #[test]
    fn i_symbol_prescribed_regions() {
        let m = RadialSymbol::i_operator(2.0, 1.0).unwrap();
        assert_eq!(m.eval_real(1.0), 1.0);
        assert_eq!(m.eval_real(2.0), 1.0);
        assert_eq!(m.eval_real(8.0), 0.25);
        let smooth = RadialSymbol::i_operator_with(2.0, 1.0, Transition::Smoothed).unwrap();
        assert_eq!(smooth.eval_real(2.0), 1.0);
        assert_eq!(smooth.eval_real(8.0), 0.25);
        assert!((smooth.eval_real(4.0) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn i_symbol_monotone_and_bounded() {
        for &transition in &[Transition::Sharp, Transition::Smoothed] {
            for &(n, gamma) in &[(1.0, 0.0), (2.0, 1.0), (4.0, 1.8), (1.0, 1.5)] {
                let m = RadialSymbol::i_operator_with(n, gamma, transition).unwrap();
                let mut prev = f64::INFINITY;
                for i in 0..=2000 {
                    let r = i as f64 * 0.01;
                    let v = m.eval_real(r);
                    assert!(v <= 1.0 + 1e-15);
                    assert!(v <= prev + 1e-12, "not monotone at r={r}");
                    prev = v;
                }
            }
        }
    }

    #[test]
    fn i_symbol_rejects_bad_parameters() {
        assert!(RadialSymbol::i_operator(0.5, 1.0).is_err());
        assert!(RadialSymbol::i_operator(2.0, 2.0).is_err());
        assert!(RadialSymbol::i_operator(2.0, -0.1).is_err());
    }

    #[test]
    fn evaluation_is_deterministic() {
        let m = RadialSymbol::i_operator(4.0, 1.8).unwrap();
        for i in 0..100 {
            let r = 0.37 * i as f64;
            assert_eq!(m.eval(r), m.eval(r));
        }
    }

    #[test]
    fn propagator_is_unimodular() {
        let p = RadialSymbol::propagator(0.3);
        for i in 0..50 {
            let r = 0.5 * i as f64;
            assert!((p.eval(r).norm() - 1.0).abs() < 1e-15);
        }
        assert_eq!(RadialSymbol::propagator(0.0).eval(3.0), Cx::new(1.0, 0.0));
    }

    #[test]
    fn product_zero_mode_combines() {
        let a = RadialSymbol::power(-0.5);
        let b = RadialSymbol::one();
        assert_eq!(
            RadialSymbol::product(&a, &b).zero_mode(),
            ZeroMode::Annihilate
        );
        let c = RadialSymbol::japanese_bracket(2.0);
        let d = RadialSymbol::bracket_laplacian();
        match RadialSymbol::product(&c, &d).zero_mode() {
            ZeroMode::Value(v) => assert_eq!(v, Cx::new(1.0, 0.0)),
            other => panic!("unexpected zero mode {other:?}"),
        }
    }
}
