//! The modified energy `E(Iu)`, the catalog norm `Z_I`, commutator
//! diagnostics, the almost-conservation experiment, the mass-critical scaling
//! map, and the low/middle/high frequency tri-decomposition.

use std::sync::Arc;

use crate::dynamics::{
    self, energy, evolve, f_prime, kinetic_energy, NonlinearitySpec, SolverConfig, Trajectory,
};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::grid::{is_dyadic, Grid};
use crate::norms::{sample_lq_norms, sobolev_norm, time_lp_norm, PairCatalog};
use crate::par::{self, Exec};
use crate::symbol::{bump_profile, RadialSymbol, ZeroMode};
use crate::Cx;

/// Parameters of an almost-conservation run.
#[derive(Debug, Clone)]
pub struct IMethodConfig {
    /// Target regularity, `1 < γ < 2`.
    pub gamma: f64,
    /// Decay-boost parameter `δ > 0`.
    pub delta: f64,
    /// Dyadic cutoffs to compare; each `N ≥ 1` with `2N` resolved.
    pub n_values: Vec<f64>,
    pub solver: SolverConfig,
    /// Smallness constant the space-time norm is compared against (reported,
    /// not enforced).
    pub mu: f64,
}

impl IMethodConfig {
    /// Validate against a grid and the nonlinearity dimension. The hypothesis
    /// `δ < γ + 8/d − 3` is enforced; for generic small `d` it is vacuous.
    pub fn validate(&self, grid: &Grid, dimension: usize) -> Result<()> {
        self.solver.validate()?;
        if !(self.gamma > 1.0 && self.gamma < 2.0) {
            return Err(Error::InvalidSolverConfig(format!(
                "gamma = {} outside (1, 2)",
                self.gamma
            )));
        }
        let upper = self.gamma + 8.0 / dimension as f64 - 3.0;
        if !(self.delta > 0.0 && self.delta < upper) {
            return Err(Error::DeltaOutOfRange {
                delta: self.delta,
                upper,
            });
        }
        if self.n_values.is_empty() {
            return Err(Error::InvalidSolverConfig("empty N list".into()));
        }
        for &n in &self.n_values {
            check_cutoff_resolved(grid, n)?;
        }
        if !(self.mu > 0.0) {
            return Err(Error::InvalidSolverConfig("mu must be positive".into()));
        }
        Ok(())
    }
}

/// `N ≥ 1`, dyadic, with the transition band `[N, 2N]` inside the per-axis
/// Nyquist frequency.
pub fn check_cutoff_resolved(grid: &Grid, n: f64) -> Result<()> {
    if !(n >= 1.0) || !is_dyadic(n) {
        return Err(Error::InvalidISymbol { n, gamma: f64::NAN });
    }
    let nyquist = grid.nyquist_per_axis();
    if 2.0 * n > nyquist {
        return Err(Error::UnresolvedCutoff {
            n,
            reach: 2.0 * n,
            nyquist,
        });
    }
    Ok(())
}

/// `E(I_N u)`: the energy functional evaluated on the smoothed state.
pub fn modified_energy(f: &Field, n: f64, gamma: f64, spec: &NonlinearitySpec) -> Result<f64> {
    let smoothed = f.apply_symbol(&RadialSymbol::i_operator(n, gamma)?)?;
    Ok(energy(&smoothed, spec))
}

/// The catalog realization of `Z_I(J) = sup ‖⟨Δ⟩ I u‖_{L^p_t L^q_x}` over the
/// biharmonic pairs with `q < ∞` plus `(∞, 2)`.
pub fn z_norm(traj: &Trajectory, n: f64, gamma: f64) -> Result<f64> {
    let d = traj.samples()[0].grid().dimension();
    let catalog = PairCatalog::for_dimension(d)?;
    z_norm_with_catalog(traj, n, gamma, &catalog)
}

pub fn z_norm_with_catalog(
    traj: &Trajectory,
    n: f64,
    gamma: f64,
    catalog: &PairCatalog,
) -> Result<f64> {
    if traj.is_empty() {
        return Err(Error::EmptyTrajectory);
    }
    let weight = RadialSymbol::product(
        &RadialSymbol::bracket_laplacian(),
        &RadialSymbol::i_operator(n, gamma)?,
    );
    // Distinct spatial exponents across the catalog, computed once per sample.
    let mut qs: Vec<f64> = catalog.pairs().iter().map(|p| p.q.as_f64()).collect();
    qs.sort_by(f64::total_cmp);
    qs.dedup();
    let mut per_q: Vec<Vec<f64>> = vec![Vec::with_capacity(traj.len()); qs.len()];
    for sample in traj.samples() {
        let weighted = sample.apply_symbol(&weight)?;
        let phys = weighted.physical_or_compute();
        let dv = weighted.grid().cell_volume();
        for (qi, &q) in qs.iter().enumerate() {
            let norm = if q.is_infinite() {
                par::max_elems(Exec::default(), &phys, |_, v| v.norm())
            } else {
                let half_q = 0.5 * q;
                let sum =
                    par::sum_elems(Exec::default(), &phys, |_, v| v.norm_sqr().powf(half_q));
                (dv * sum).powf(1.0 / q)
            };
            per_q[qi].push(norm);
        }
    }
    let mut best = 0.0f64;
    for pair in catalog.pairs() {
        let qi = qs
            .binary_search_by(|x| x.total_cmp(&pair.q.as_f64()))
            .unwrap();
        let value = time_lp_norm(traj, &per_q[qi], pair.p.as_f64())?;
        best = best.max(value);
    }
    Ok(best)
}

/// Measured members of the commutator estimate
/// `‖∇IF(u) − (I∇u)F'(u)‖_{L²_t L^{2d/(d+2)}_x} ≲ N^{-(2-γ+δ)} Z_I^{1+8/d}`.
#[derive(Debug, Clone)]
pub struct CommutatorReport {
    pub lhs: f64,
    /// `N^{-(2-γ+δ)} Z_I^{1+8/d}`.
    pub reference: f64,
    pub ratio: Option<f64>,
    pub z: f64,
}

/// Evaluate the commutator diagnostic along a trajectory. Requires
/// `d ∈ {5,6,7}`, `1 < γ < 2`, and `0 < δ < γ − 1`.
pub fn commutator_diagnostic(
    traj: &Trajectory,
    n: f64,
    gamma: f64,
    delta: f64,
    spec: &NonlinearitySpec,
) -> Result<CommutatorReport> {
    if traj.is_empty() {
        return Err(Error::EmptyTrajectory);
    }
    let grid = Arc::clone(traj.samples()[0].grid());
    let d = grid.dimension();
    if !(5..=7).contains(&d) {
        return Err(Error::CatalogDimension(d));
    }
    if !(delta > 0.0 && delta < gamma - 1.0) {
        return Err(Error::DeltaOutOfRange {
            delta,
            upper: gamma - 1.0,
        });
    }
    let smoothing = RadialSymbol::i_operator(n, gamma)?;
    let q = 2.0 * d as f64 / (d as f64 + 2.0);
    let quarter_exp = 4.0 / spec.dimension() as f64;

    let mut spatial = Vec::with_capacity(traj.len());
    for sample in traj.samples() {
        let phys = sample.physical_or_compute();
        // F(u) pointwise, and F'(u) for the product side
        let mut fu = vec![Cx::new(0.0, 0.0); grid.len()];
        par::map_into(Exec::default(), &phys, &mut fu, |_, v| {
            v * v.norm_sqr().powf(quarter_exp)
        });
        let fu_field = Field::from_physical(&grid, fu);
        let smoothed_fu = fu_field.apply_symbol(&smoothing)?;
        let smoothed_u = sample.apply_symbol(&smoothing)?;

        let mut defect_sq = vec![0.0f64; grid.len()];
        for axis in 0..d {
            let grad_if = smoothed_fu.gradient_component(axis)?;
            let grad_if_phys = grad_if.physical_or_compute();
            let grad_iu = smoothed_u.gradient_component(axis)?;
            let grad_iu_phys = grad_iu.physical_or_compute();
            par::map_mut(Exec::default(), &mut defect_sq, |i, acc| {
                let fp = f_prime(phys[i], spec);
                let diff = grad_if_phys[i] - fp.apply(grad_iu_phys[i]);
                *acc += diff.norm_sqr();
            });
        }
        let half_q = 0.5 * q;
        let sum = par::sum_elems(Exec::default(), &defect_sq, |_, v| v.powf(half_q));
        spatial.push((grid.cell_volume() * sum).powf(1.0 / q));
    }
    let lhs = time_lp_norm(traj, &spatial, 2.0)?;
    let z = z_norm(traj, n, gamma)?;
    let reference = n.powf(-(2.0 - gamma + delta)) * z.powf(1.0 + spec.exponent());
    let ratio = if reference > 0.0 {
        Some(lhs / reference)
    } else {
        None
    };
    Ok(CommutatorReport {
        lhs,
        reference,
        ratio,
        z,
    })
}

/// Least-squares slope of `log₂ y` against `log₂ x`.
#[derive(Debug, Clone, Copy)]
pub struct SlopeFit {
    pub slope: f64,
    /// RMS residual of the fit in log₂ space.
    pub residual: f64,
}

pub fn fit_log2_slope(xs: &[f64], ys: &[f64]) -> Option<SlopeFit> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return None;
    }
    if ys.iter().any(|&y| !(y > 0.0)) || xs.iter().any(|&x| !(x > 0.0)) {
        return None;
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.log2()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.log2()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss: f64 = lx
        .iter()
        .zip(&ly)
        .map(|(x, y)| {
            let r = y - (slope * x + intercept);
            r * r
        })
        .sum();
    Some(SlopeFit {
        slope,
        residual: (ss / n).sqrt(),
    })
}

/// Everything the almost-conservation experiment measures.
#[derive(Debug, Clone)]
pub struct AlmostConservationReport {
    pub n_values: Vec<f64>,
    /// `sup_t |E(I_N u(t)) − E(I_N u₀)|` per cutoff.
    pub sup_increments: Vec<f64>,
    /// `‖I_N u₀‖_{H²}` per cutoff; the hypothesis wants these `≤ 1`.
    pub initial_modified_h2: Vec<f64>,
    pub small_data_ok: bool,
    pub slope: Option<SlopeFit>,
    /// Catalog `Z_I` per cutoff; `None` outside dimensions 5–7.
    pub z_values: Option<Vec<f64>>,
    /// `‖u‖_{M(J)}`; `None` outside dimensions 5–7.
    pub m_norm: Option<f64>,
    pub mu: f64,
    pub times: Vec<f64>,
    /// `E(I_N u(t_k))` for each cutoff (outer index follows `n_values`).
    pub modified_energy_series: Vec<Vec<f64>>,
    pub mass_series: Vec<f64>,
    pub energy_series: Vec<f64>,
    /// `‖u(t_k)‖_{Ḣ^{1/2}}` per sample.
    pub h_half_series: Vec<f64>,
    /// Running `M([0, t_k])` norms; `None` outside dimensions 5-7.
    pub m_partials: Option<Vec<f64>>,
}

/// Evolve once and measure the modified-energy increment for every cutoff.
pub fn almost_conservation_experiment(
    u0: &Field,
    config: &IMethodConfig,
    spec: &NonlinearitySpec,
) -> Result<AlmostConservationReport> {
    let grid = Arc::clone(u0.grid());
    config.validate(&grid, spec.dimension())?;
    let traj = evolve(u0, &config.solver, spec)?;

    let initial_modified_h2: Vec<f64> = config
        .n_values
        .iter()
        .map(|&n| {
            let smoothed = u0.apply_symbol(&RadialSymbol::i_operator(n, config.gamma)?)?;
            Ok(sobolev_norm(&smoothed, 2.0, false))
        })
        .collect::<Result<_>>()?;
    let small_data_ok = initial_modified_h2.iter().all(|&h| h <= 1.0 + 1e-12);

    // With the nonlinearity disabled, the conserved quantity of the flow is
    // the Ḣ² term alone; the potential term is configured off with it.
    let run_energy = |f: &Field| -> f64 {
        if config.solver.nonlinearity {
            energy(f, spec)
        } else {
            0.5 * kinetic_energy(f)
        }
    };

    let mut modified_energy_series = Vec::with_capacity(config.n_values.len());
    let mut sup_increments = Vec::with_capacity(config.n_values.len());
    for &n in &config.n_values {
        let smoothing = RadialSymbol::i_operator(n, config.gamma)?;
        let series: Vec<f64> = traj
            .samples()
            .iter()
            .map(|s| Ok(run_energy(&s.apply_symbol(&smoothing)?)))
            .collect::<Result<_>>()?;
        let e0 = series[0];
        let sup = series
            .iter()
            .map(|e| (e - e0).abs())
            .fold(0.0f64, f64::max);
        modified_energy_series.push(series);
        sup_increments.push(sup);
    }

    let slope = fit_log2_slope(&config.n_values, &sup_increments);

    let d = grid.dimension();
    let (z_values, m_norm) = if (5..=7).contains(&d) {
        let catalog = PairCatalog::for_dimension(d)?;
        let zs: Vec<f64> = config
            .n_values
            .iter()
            .map(|&n| z_norm_with_catalog(&traj, n, config.gamma, &catalog))
            .collect::<Result<_>>()?;
        (Some(zs), Some(crate::norms::morawetz_m_norm(&traj, d)?))
    } else {
        (None, None)
    };

    let mass_series: Vec<f64> = traj.samples().iter().map(|s| dynamics::mass(s)).collect();
    let energy_series: Vec<f64> = traj.samples().iter().map(|s| run_energy(s)).collect();
    let h_halfs = h_half_series(&traj);
    let m_partials = if (5..=7).contains(&d) {
        Some(m_norm_partials(&traj, d)?)
    } else {
        None
    };

    Ok(AlmostConservationReport {
        n_values: config.n_values.clone(),
        sup_increments,
        initial_modified_h2,
        small_data_ok,
        slope,
        z_values,
        m_norm,
        mu: config.mu,
        times: traj.times().to_vec(),
        modified_energy_series,
        mass_series,
        energy_series,
        h_half_series: h_halfs,
        m_partials,
    })
}

/// Direction of the mass-critical scaling map.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RescaleDirection {
    /// `u_λ(x) = λ^{-d/2} u(x/λ)` on the box of length `λL`.
    Dilate,
    /// The inverse map, from box `L` to `L/λ`.
    Contract,
}

/// A rescaled field plus the time-dilation bookkeeping `t ↦ λ⁴ t`.
#[derive(Debug, Clone)]
pub struct Rescaled {
    pub field: Field,
    /// Multiply solver times by this to map onto the rescaled solution.
    pub time_dilation: f64,
}

/// Exact spectral rescaling: mode `k` of `u` becomes mode `k` of `u_λ` on the
/// scaled box, with amplitude `λ^{∓d/2}`. Dyadic `λ` keeps the box length and
/// the amplitude factor exact in floating point.
pub fn rescale(f: &Field, lambda: f64, direction: RescaleDirection) -> Result<Rescaled> {
    if !(lambda >= 1.0) || !is_dyadic(lambda) {
        return Err(Error::NonDyadicScale(lambda));
    }
    let grid = f.grid();
    let d = grid.dimension() as i32;
    let (new_len, amp_pow, dilation) = match direction {
        RescaleDirection::Dilate => (
            grid.box_length() * lambda,
            lambda.powi(-d).sqrt(),
            lambda.powi(4),
        ),
        RescaleDirection::Contract => (
            grid.box_length() / lambda,
            lambda.powi(d).sqrt(),
            lambda.powi(-4),
        ),
    };
    let new_grid = Grid::new(grid.dimension(), grid.points_per_axis(), new_len)?;
    let mut coeffs = f.spectral_or_compute().into_owned();
    par::map_mut(Exec::default(), &mut coeffs, |_, v| *v *= amp_pow);
    Ok(Rescaled {
        field: Field::from_spectral(&new_grid, coeffs),
        time_dilation: dilation,
    })
}

/// Split `f` into low/middle/high frequency parts with the exact partition of
/// unity `χ₁ + χ₂ + χ₃ = 1`, where `χ₁ = φ(λ|ξ|)` and `χ₃ = 1 − φ(2|ξ|/N)`.
pub fn tri_decompose(f: &Field, lambda: f64, n: f64) -> Result<[Field; 3]> {
    if !(lambda > 0.0) || !(n > 0.0) || 1.0 / lambda >= n {
        return Err(Error::CutoffOrder {
            inv_lambda: 1.0 / lambda,
            n,
        });
    }
    let chi1 = move |r: f64| bump_profile(lambda * r);
    let chi3 = move |r: f64| 1.0 - bump_profile(2.0 * r / n);
    let parts: Vec<Field> = [
        RadialSymbol::from_fn(move |r| Cx::new(chi1(r), 0.0), ZeroMode::Evaluate),
        RadialSymbol::from_fn(
            move |r| Cx::new(1.0 - chi1(r) - chi3(r), 0.0),
            ZeroMode::Evaluate,
        ),
        RadialSymbol::from_fn(move |r| Cx::new(chi3(r), 0.0), ZeroMode::Evaluate),
    ]
    .iter()
    .map(|sym| f.apply_symbol(sym))
    .collect::<Result<_>>()?;
    let mut it = parts.into_iter();
    Ok([
        it.next().unwrap(),
        it.next().unwrap(),
        it.next().unwrap(),
    ])
}

/// `‖u‖_{M(J)}` convenience re-export used by reports.
pub fn m_norm(traj: &Trajectory, d: usize) -> Result<f64> {
    crate::norms::morawetz_m_norm(traj, d)
}

/// Per-sample `‖u(t)‖_{Ḣ^{1/2}}` (used by the harness time series).
pub fn h_half_series(traj: &Trajectory) -> Vec<f64> {
    traj.samples()
        .iter()
        .map(|s| sobolev_norm(s, 0.5, true))
        .collect()
}

/// Running `M([0, t_k])` norms (cumulative trapezoid in time).
pub fn m_norm_partials(traj: &Trajectory, d: usize) -> Result<Vec<f64>> {
    let (p, q) = crate::norms::morawetz_exponents(d)?;
    let norms = sample_lq_norms(traj, q)?;
    cumulative_time_lp(traj, &norms, p)
}

/// Cumulative-in-time `L^p` norms over the sample prefix `[t₀, t_k]`.
pub fn cumulative_time_lp(traj: &Trajectory, sample_norms: &[f64], p: f64) -> Result<Vec<f64>> {
    if traj.is_empty() {
        return Err(Error::EmptyTrajectory);
    }
    let dt = traj.sample_dt();
    let mut out = Vec::with_capacity(traj.len());
    out.push(0.0);
    let mut interior = 0.0f64;
    for k in 1..sample_norms.len() {
        // trapezoid over [t₀, t_k]: halves at both ends, full weights inside
        let half_ends = 0.5 * dt * (sample_norms[0].powf(p) + sample_norms[k].powf(p));
        let value = (interior + half_ends).powf(1.0 / p);
        out.push(value);
        interior += dt * sample_norms[k].powf(p);
    }
    Ok(out)
}
