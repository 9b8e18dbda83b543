//! Lebesgue/Sobolev norms, admissible-pair arithmetic, mixed space-time
//! norms over trajectories, and Bernstein/Strichartz diagnostics.

use num_rational::Rational64;

use crate::dynamics::Trajectory;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::lp::{self, Part};
use crate::par::{self, Exec};
use crate::symbol::RadialSymbol;

/// An extended-real Lebesgue exponent, kept as an exact rational when finite.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exponent {
    Finite(Rational64),
    Infinity,
}

impl Exponent {
    pub fn finite(numer: i64, denom: i64) -> Exponent {
        let r = Rational64::new(numer, denom);
        assert!(r > Rational64::new(0, 1), "exponent must be positive");
        Exponent::Finite(r)
    }

    pub fn as_f64(&self) -> f64 {
        match self {
            Exponent::Finite(r) => *r.numer() as f64 / *r.denom() as f64,
            Exponent::Infinity => f64::INFINITY,
        }
    }

    /// `1/p`, with the convention `1/∞ = 0`.
    pub fn recip(&self) -> Rational64 {
        match self {
            Exponent::Finite(r) => r.recip(),
            Exponent::Infinity => Rational64::new(0, 1),
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Exponent::Infinity)
    }
}

impl std::fmt::Display for Exponent {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Exponent::Finite(r) if *r.denom() == 1 => write!(f, "{}", r.numer()),
            Exponent::Finite(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Exponent::Infinity => write!(f, "inf"),
        }
    }
}

/// `γ_{p,q} = d/2 − d/q − 4/p`, exact.
pub fn gamma_pq(p: &Exponent, q: &Exponent, d: usize) -> Rational64 {
    let d = Rational64::new(d as i64, 1);
    d / Rational64::new(2, 1) - d * q.recip() - Rational64::new(4, 1) * p.recip()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairClass {
    NotAdmissible,
    Schrodinger,
    Biharmonic,
}

/// Classify `(p, q)` in dimension `d` with exact rational arithmetic.
pub fn classify_pair(p: &Exponent, q: &Exponent, d: usize) -> PairClass {
    let half = Rational64::new(1, 2);
    let in_range = |e: &Exponent| e.recip() <= half && e.recip() >= Rational64::new(0, 1);
    if !in_range(p) || !in_range(q) {
        return PairClass::NotAdmissible;
    }
    let forbidden = *p == Exponent::finite(2, 1) && q.is_infinite() && d == 2;
    if forbidden {
        return PairClass::NotAdmissible;
    }
    let dd = Rational64::new(d as i64, 1);
    if Rational64::new(2, 1) * p.recip() + dd * q.recip() > dd / Rational64::new(2, 1) {
        return PairClass::NotAdmissible;
    }
    if gamma_pq(p, q, d) == Rational64::new(0, 1) {
        PairClass::Biharmonic
    } else {
        PairClass::Schrodinger
    }
}

/// A `(p, q)` pair with its dimension and derived `γ_{p,q}`.
#[derive(Debug, Clone)]
pub struct AdmissiblePair {
    pub p: Exponent,
    pub q: Exponent,
    pub dimension: usize,
}

impl AdmissiblePair {
    pub fn new(p: Exponent, q: Exponent, dimension: usize) -> AdmissiblePair {
        AdmissiblePair { p, q, dimension }
    }

    pub fn gamma(&self) -> Rational64 {
        gamma_pq(&self.p, &self.q, self.dimension)
    }

    pub fn class(&self) -> PairClass {
        classify_pair(&self.p, &self.q, self.dimension)
    }
}

/// The finite family of biharmonic admissible pairs over which the catalog
/// supremum `Z_I` is taken: the pairs with `q < ∞` that the commutator and
/// almost-conservation estimates actually invoke, plus `(∞, 2)`.
#[derive(Debug, Clone)]
pub struct PairCatalog {
    pub dimension: usize,
    pairs: Vec<AdmissiblePair>,
}

impl PairCatalog {
    pub fn for_dimension(d: usize) -> Result<PairCatalog> {
        if !(5..=7).contains(&d) {
            return Err(Error::CatalogDimension(d));
        }
        let di = d as i64;
        let fin = Exponent::finite;
        let mut raw: Vec<(Exponent, Exponent)> = vec![
            (Exponent::Infinity, fin(2, 1)),
            (fin(2, 1), fin(2 * di, di - 4)),
            (fin(4, 1), fin(2 * di, di - 2)),
            (fin(16, di), fin(4, 1)),
            (fin(8 * (di - 3), di), fin(2 * (di - 3), di - 4)),
            (
                fin(2 * (di - 3), di - 4),
                fin(2 * di * (di - 3), di * di - 7 * di + 16),
            ),
            (fin(16 * (di - 3), di), fin(4 * (di - 3), 2 * di - 7)),
            (
                fin(4 * (di - 3), 1),
                fin(2 * di * (di - 3), di * di - 3 * di - 2),
            ),
            (fin(32, 11), fin(8 * di, 4 * di - 11)),
            (fin(16 * (8 - di), di), fin(4 * (8 - di), 15 - 2 * di)),
        ];
        // (2(d−3)/(d−5), ·) degenerates to p = ∞ at d = 5; excluded there.
        if d > 5 {
            raw.push((
                fin(2 * (di - 3), di - 5),
                fin(2 * di * (di - 3), di * di - 7 * di + 20),
            ));
        }
        let mut pairs = Vec::with_capacity(raw.len());
        for (p, q) in raw {
            let pair = AdmissiblePair::new(p, q, d);
            if pair.class() != PairClass::Biharmonic
                || (pair.q.is_infinite() && !pair.p.is_infinite())
            {
                return Err(Error::NotBiharmonic {
                    p: pair.p.as_f64(),
                    q: pair.q.as_f64(),
                    d,
                });
            }
            pairs.push(pair);
        }
        Ok(PairCatalog { dimension: d, pairs })
    }

    pub fn pairs(&self) -> &[AdmissiblePair] {
        &self.pairs
    }
}

/// `‖u‖_{L^q_x} = (Σ_x |u(x)|^q ΔV)^{1/q}`; `q = ∞` gives `max |u(x)|`.
pub fn spatial_lq(f: &Field, q: f64) -> Result<f64> {
    if q.is_infinite() {
        let phys = f.physical_or_compute();
        return Ok(par::max_elems(Exec::default(), &phys, |_, v| v.norm()));
    }
    if !(q >= 1.0) {
        return Err(Error::InvalidLebesgueExponent(q));
    }
    let phys = f.physical_or_compute();
    let sum = if q == 2.0 {
        par::sum_elems(Exec::default(), &phys, |_, v| v.norm_sqr())
    } else {
        let half_q = 0.5 * q;
        par::sum_elems(Exec::default(), &phys, |_, v| v.norm_sqr().powf(half_q))
    };
    Ok((f.grid().cell_volume() * sum).powf(1.0 / q))
}

/// Sobolev norm from the spectral side:
/// homogeneous `(V Σ_k |ξ|^{2s} |û|²)^{1/2}`, inhomogeneous with the weight
/// `(1+|ξ|²)^s`. For `s < 0` the homogeneous weight annihilates the mean.
pub fn sobolev_norm(f: &Field, s: f64, homogeneous: bool) -> f64 {
    let spec = f.spectral_or_compute();
    let radius = f.grid().xi_radius();
    let sum = if homogeneous {
        let two_s = 2.0 * s;
        par::sum_elems(Exec::default(), &spec, |i, c| {
            if i == 0 && s != 0.0 {
                0.0
            } else {
                radius[i].powf(two_s) * c.norm_sqr()
            }
        })
    } else {
        par::sum_elems(Exec::default(), &spec, |i, c| {
            let r = radius[i];
            (1.0 + r * r).powf(s) * c.norm_sqr()
        })
    };
    (f.grid().volume() * sum).sqrt()
}

/// `L^q_x` norm of every trajectory sample.
pub fn sample_lq_norms(traj: &Trajectory, q: f64) -> Result<Vec<f64>> {
    traj.samples().iter().map(|f| spatial_lq(f, q)).collect()
}

/// Combine per-sample spatial norms into the time norm: composite trapezoid
/// for finite `p`, maximum for `p = ∞`.
pub fn time_lp_norm(traj: &Trajectory, sample_norms: &[f64], p: f64) -> Result<f64> {
    assert_eq!(sample_norms.len(), traj.len());
    if traj.len() == 0 {
        return Err(Error::EmptyTrajectory);
    }
    if p.is_infinite() {
        return Ok(sample_norms.iter().fold(0.0f64, |m, &x| m.max(x)));
    }
    if !(p >= 1.0) {
        return Err(Error::InvalidLebesgueExponent(p));
    }
    if traj.len() < 2 {
        return Err(Error::TooFewSamples {
            got: traj.len(),
            need: 2,
        });
    }
    let dt = traj.sample_dt();
    let last = sample_norms.len() - 1;
    let mut acc = 0.0;
    for (k, &x) in sample_norms.iter().enumerate() {
        let w = if k == 0 || k == last { 0.5 * dt } else { dt };
        acc += w * x.powf(p);
    }
    Ok(acc.powf(1.0 / p))
}

/// Mixed norm `‖u‖_{L^p_t L^q_x}` over the trajectory's time interval.
pub fn spacetime_norm(traj: &Trajectory, p: f64, q: f64) -> Result<f64> {
    let norms = sample_lq_norms(traj, q)?;
    time_lp_norm(traj, &norms, p)
}

/// Exponents of the Morawetz interpolation norm `M(J)`.
pub fn morawetz_exponents(d: usize) -> Result<(f64, f64)> {
    if !(5..=7).contains(&d) {
        return Err(Error::CatalogDimension(d));
    }
    let df = d as f64;
    Ok((8.0 * (df - 3.0) / df, 2.0 * (df - 3.0) / (df - 4.0)))
}

/// `‖u‖_{M(J)} = ‖u‖_{L^{8(d−3)/d}_t L^{2(d−3)/(d−4)}_x}`.
pub fn morawetz_m_norm(traj: &Trajectory, d: usize) -> Result<f64> {
    let (p, q) = morawetz_exponents(d)?;
    spacetime_norm(traj, p, q)
}

/// Which Bernstein comparison to measure (all in `L²`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BernsteinCase {
    /// `‖P_M |∇|^s f‖ / (M^s ‖P_M f‖)`; lands in `[2^{-s}, 2^s]` on the band.
    Band,
    /// `‖P_M |∇|^{-s} f‖ / (M^{-s} ‖P_M f‖)`.
    BandInverse,
    /// `‖P_{≥M} f‖ / (M^{-s} ‖|∇|^s P_{≥M} f‖)`.
    HighLower,
    /// `‖P_{≤M} |∇|^s f‖ / (M^s ‖P_{≤M} f‖)`.
    LowUpper,
}

/// Measured constant of the selected Bernstein inequality; returns 0 when the
/// projected field vanishes.
pub fn bernstein_ratio(f: &Field, m: f64, s: f64, case: BernsteinCase) -> Result<f64> {
    let (part, exponent) = match case {
        BernsteinCase::Band => (Part::Band, s),
        BernsteinCase::BandInverse => (Part::Band, -s),
        BernsteinCase::HighLower => (Part::Geq, s),
        BernsteinCase::LowUpper => (Part::Leq, s),
    };
    let projected = lp::project(f, m, part)?;
    let derived = projected.apply_symbol(&RadialSymbol::power(exponent))?;
    let base = spatial_lq(&projected, 2.0)?;
    let deriv = spatial_lq(&derived, 2.0)?;
    let (num, den) = match case {
        BernsteinCase::Band | BernsteinCase::BandInverse | BernsteinCase::LowUpper => {
            (deriv, m.powf(exponent) * base)
        }
        BernsteinCase::HighLower => (base, m.powf(-s) * deriv),
    };
    if den == 0.0 {
        return Ok(0.0);
    }
    Ok(num / den)
}

/// `‖u‖_{L^p_t L^q_x} / ‖u₀‖_{L²}` along a free-flow trajectory.
pub fn strichartz_quotient(traj: &Trajectory, pair: &AdmissiblePair) -> Result<f64> {
    if pair.class() != PairClass::Biharmonic {
        return Err(Error::NotBiharmonic {
            p: pair.p.as_f64(),
            q: pair.q.as_f64(),
            d: pair.dimension,
        });
    }
    let first = traj.samples().first().ok_or(Error::EmptyTrajectory)?;
    let l2 = spatial_lq(first, 2.0)?;
    if l2 == 0.0 {
        return Err(Error::ZeroInitialData);
    }
    Ok(spacetime_norm(traj, pair.p.as_f64(), pair.q.as_f64())? / l2)
}
