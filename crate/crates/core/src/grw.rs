//! GRW spontaneous localization on 1-D grids.
//!
//! Each particle suffers, at Poisson times of rate `λ`, a hit
//! `ψ → Lᵢ(x)ψ / ‖Lᵢ(x)ψ‖` with
//! `Lᵢ(x) = (α/π)^{1/4} exp(−α(x̂ᵢ − x)²/2)` and the center `x` drawn with
//! density `‖Lᵢ(x)ψ‖²`. Between hits the state evolves unitarily.
//!
//! Simulations run in dimensionless units; [`collapse_rate_report`]
//! translates rates to physical ones with the standard parameter values.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use rand::Rng;

use crate::error::{bail, Result};
use crate::linalg::{c64, decomp, ComplexMatrix};
use crate::random;

/// Standard localization parameter, cm⁻²; `1/√α` is 10⁻⁵ cm.
pub const PHYSICAL_ALPHA_PER_CM2: f64 = 1e10;
/// Standard hit rate per nucleon, s⁻¹.
pub const PHYSICAL_LAMBDA_PER_S: f64 = 1e-16;
/// Julian year.
pub const SECONDS_PER_YEAR: f64 = 365.25 * 86_400.0;
/// Single-particle waiting time as usually quoted, years.
pub const QUOTED_YEARS_PER_HIT: f64 = 1e7;
/// Largest product-grid size simulated exactly.
pub const EXACT_CAP: usize = 1 << 16;
/// Points per localization length `1/√α` needed on the hit-center grid.
pub const CENTERS_PER_WIDTH: f64 = 8.0;

#[derive(Debug, Clone, PartialEq)]
pub struct GrwParams {
    pub alpha: f64,
    pub lambda_rate: f64,
    /// Per-particle multipliers of `lambda_rate` (mass in nucleon units);
    /// empty means 1 for every particle.
    pub rate_multipliers: Vec<f64>,
}

impl GrwParams {
    pub fn new(alpha: f64, lambda_rate: f64) -> Result<Self> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            bail!(Contract, "alpha must be positive, got {alpha}");
        }
        if !(lambda_rate >= 0.0) || !lambda_rate.is_finite() {
            bail!(Contract, "lambda must be nonnegative, got {lambda_rate}");
        }
        Ok(Self {
            alpha,
            lambda_rate,
            rate_multipliers: Vec::new(),
        })
    }

    pub fn with_multipliers(mut self, multipliers: Vec<f64>) -> Result<Self> {
        if multipliers.iter().any(|&m| !(m >= 0.0)) {
            bail!(Contract, "rate multipliers must be nonnegative");
        }
        self.rate_multipliers = multipliers;
        Ok(self)
    }

    pub fn rate_of(&self, particle: usize) -> f64 {
        self.lambda_rate * self.rate_multipliers.get(particle).copied().unwrap_or(1.0)
    }

    /// `1/√α`.
    pub fn localization_width(&self) -> f64 {
        1.0 / libm::sqrt(self.alpha)
    }
}

/// Wavefunction on the product of identical 1-D grids; particle 0 is the
/// most significant index.
#[derive(Debug, Clone, PartialEq)]
pub struct GridWavefunction {
    n_particles: usize,
    grid: Vec<f64>,
    amplitudes: Vec<Complex64>,
}

impl GridWavefunction {
    pub fn new(n_particles: usize, grid: Vec<f64>, amplitudes: Vec<Complex64>) -> Result<Self> {
        if n_particles == 0 || grid.is_empty() {
            bail!(Dimension, "need at least one particle and one grid point");
        }
        let size = checked_size(grid.len(), n_particles)?;
        if amplitudes.len() != size {
            bail!(
                Dimension,
                "{} amplitudes for {size} grid configurations",
                amplitudes.len()
            );
        }
        let n = crate::linalg::norm(&amplitudes);
        if (n - 1.0).abs() > crate::TOLERANCE {
            bail!(Contract, "wavefunction norm {n} differs from 1");
        }
        Ok(Self {
            n_particles,
            grid,
            amplitudes,
        })
    }

    /// Normalizes before validating.
    pub fn normalize(
        n_particles: usize,
        grid: Vec<f64>,
        mut amplitudes: Vec<Complex64>,
    ) -> Result<Self> {
        let n = crate::linalg::norm(&amplitudes);
        if !(n > 0.0) {
            bail!(Contract, "cannot normalize the zero wavefunction");
        }
        for a in &mut amplitudes {
            *a /= n;
        }
        Self::new(n_particles, grid, amplitudes)
    }

    /// One particle with amplitude `f(x)` on `grid`.
    pub fn single(grid: Vec<f64>, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        let amps = grid.iter().map(|&x| f(x)).collect();
        Self::normalize(1, grid, amps)
    }

    pub fn n_particles(&self) -> usize {
        self.n_particles
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        crate::linalg::norm(&self.amplitudes)
    }

    /// Grid index of `particle` in configuration `index`.
    fn coordinate(&self, index: usize, particle: usize) -> usize {
        let g = self.grid.len();
        let stride = g.pow((self.n_particles - 1 - particle) as u32);
        (index / stride) % g
    }

    /// Position probabilities of one particle.
    pub fn marginal(&self, particle: usize) -> Vec<f64> {
        let mut m = vec![0.0; self.grid.len()];
        for (i, a) in self.amplitudes.iter().enumerate() {
            m[self.coordinate(i, particle)] += a.norm_sqr();
        }
        m
    }

    /// Weight on configurations with center of mass below / above `split`.
    pub fn center_of_mass_weights(&self, split: f64) -> (f64, f64) {
        let mut below = 0.0;
        let mut above = 0.0;
        for (i, a) in self.amplitudes.iter().enumerate() {
            let com: f64 = (0..self.n_particles)
                .map(|p| self.grid[self.coordinate(i, p)])
                .sum::<f64>()
                / self.n_particles as f64;
            if com < split {
                below += a.norm_sqr();
            } else {
                above += a.norm_sqr();
            }
        }
        (below, above)
    }
}

fn checked_size(g: usize, n: usize) -> Result<usize> {
    let mut size: usize = 1;
    for _ in 0..n {
        size = match size.checked_mul(g) {
            Some(s) if s <= EXACT_CAP => s,
            _ => bail!(
                SizeLimit,
                "{g}^{n} grid configurations exceed the cap of {EXACT_CAP}"
            ),
        };
    }
    Ok(size)
}

/// Uniform grid of hit centers used for inverse-CDF sampling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CenterGrid {
    pub start: f64,
    pub step: f64,
    pub count: usize,
}

impl CenterGrid {
    /// Covers `positions` with a margin of six localization widths at
    /// [`CENTERS_PER_WIDTH`] points per width.
    pub fn resolving(params: &GrwParams, positions: &[f64]) -> Self {
        let w = params.localization_width();
        let lo = positions.iter().copied().fold(f64::INFINITY, f64::min) - 6.0 * w;
        let hi = positions.iter().copied().fold(f64::NEG_INFINITY, f64::max) + 6.0 * w;
        let step = w / CENTERS_PER_WIDTH;
        Self {
            start: lo,
            step,
            count: libm::ceil((hi - lo) / step) as usize + 1,
        }
    }

    pub fn center(&self, k: usize) -> f64 {
        self.start + self.step * k as f64
    }

    /// Set when the step does not resolve `1/√α`.
    pub fn too_coarse(&self, params: &GrwParams) -> bool {
        self.step > params.localization_width() / CENTERS_PER_WIDTH * (1.0 + 1e-12)
    }
}

/// Diagonal of `Lᵢ(x)` on a single-particle grid.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalizationOperator {
    pub x_center: f64,
    pub particle: usize,
    pub diagonal: Vec<f64>,
    /// The position grid is coarser than `1/√α / 8`.
    pub coarse_grid: bool,
}

pub fn localization_profile(alpha: f64, offset: f64) -> f64 {
    libm::pow(alpha / core::f64::consts::PI, 0.25) * libm::exp(-0.5 * alpha * offset * offset)
}

pub fn localization_operator(
    x_center: f64,
    particle: usize,
    params: &GrwParams,
    grid: &[f64],
) -> LocalizationOperator {
    let diagonal = grid
        .iter()
        .map(|&y| localization_profile(params.alpha, y - x_center))
        .collect();
    let limit = params.localization_width() / CENTERS_PER_WIDTH;
    let coarse_grid = grid
        .windows(2)
        .any(|w| (w[1] - w[0]).abs() > limit * (1.0 + 1e-12));
    LocalizationOperator {
        x_center,
        particle,
        diagonal,
        coarse_grid,
    }
}

/// `max_y |Σ_c Δc · L(y − c)² − 1|`: midpoint quadrature of the
/// completeness relation `∫ L(x)² dx = I` at every grid point.
pub fn completeness_defect(params: &GrwParams, grid: &[f64], centers: &CenterGrid) -> f64 {
    grid.iter()
        .map(|&y| {
            let s: f64 = (0..centers.count)
                .map(|k| localization_profile(params.alpha, y - centers.center(k)).powi(2))
                .sum::<f64>()
                * centers.step;
            (s - 1.0).abs()
        })
        .fold(0.0, f64::max)
}

/// Discretized hit density `p_k = Δc ‖L(c_k)ψ‖²` over the center grid.
///
/// Grid points with weight below `1e-18` and centers more than eight
/// localization widths away are skipped; the dropped mass is below 1e-13.
pub fn hit_distribution(
    state: &GridWavefunction,
    particle: usize,
    params: &GrwParams,
    centers: &CenterGrid,
) -> Vec<f64> {
    let m = state.marginal(particle);
    let mut p = vec![0.0; centers.count];
    if centers.count == 0 {
        return p;
    }
    let alpha = params.alpha;
    let reach = 8.0 * params.localization_width();
    let dc = centers.step;
    let norm = libm::sqrt(alpha / core::f64::consts::PI) * dc;
    let last = (centers.count - 1) as f64;
    for (&y, &w) in state.grid.iter().zip(&m) {
        if w < 1e-18 {
            continue;
        }
        let lo = libm::ceil((y - reach - centers.start) / dc).clamp(0.0, last) as usize;
        let hi = libm::floor((y + reach - centers.start) / dc).clamp(0.0, last) as usize;
        // exp(−α d²) along d_k = y − c_k by a two-term multiplicative recurrence
        let d = y - centers.center(lo);
        let mut f = libm::exp(-alpha * d * d);
        let mut g = libm::exp(alpha * dc * (2.0 * d - dc));
        let shrink = libm::exp(-2.0 * alpha * dc * dc);
        for pk in &mut p[lo..=hi] {
            *pk += w * norm * f;
            f *= g;
            g *= shrink;
        }
    }
    p
}

#[derive(Debug, Clone, PartialEq)]
pub struct Hit {
    pub x_center: f64,
    /// `‖L(x)ψ‖` before renormalization.
    pub pre_norm: f64,
    pub post_state: GridWavefunction,
    /// Sum of the discretized hit density (1 up to quadrature error).
    pub density_mass: f64,
}

/// Draws a hit center for `particle` and applies the hit.
pub fn sample_hit<R: Rng + ?Sized>(
    state: &GridWavefunction,
    particle: usize,
    params: &GrwParams,
    centers: &CenterGrid,
    rng: &mut R,
) -> Result<Hit> {
    if particle >= state.n_particles {
        bail!(Dimension, "particle {particle} of {}", state.n_particles);
    }
    let p = hit_distribution(state, particle, params, centers);
    let mass: f64 = p.iter().sum();
    if !(mass > 0.0) {
        bail!(Contract, "hit density vanishes on the center grid");
    }
    let target = rng.random::<f64>() * mass;
    let mut acc = 0.0;
    let mut k = p.len() - 1;
    for (i, &pi) in p.iter().enumerate() {
        acc += pi;
        if acc > target {
            k = i;
            break;
        }
    }
    let x = centers.center(k);
    let op = localization_operator(x, particle, params, &state.grid);
    let mut amps = state.amplitudes.clone();
    for (i, a) in amps.iter_mut().enumerate() {
        *a *= op.diagonal[state.coordinate(i, particle)];
    }
    let pre_norm = crate::linalg::norm(&amps);
    if !(pre_norm > 1e-150) {
        return Err(crate::Error::ImpossibleOutcome(pre_norm * pre_norm));
    }
    for a in &mut amps {
        *a /= pre_norm;
    }
    Ok(Hit {
        x_center: x,
        pre_norm,
        post_state: GridWavefunction {
            n_particles: state.n_particles,
            grid: state.grid.clone(),
            amplitudes: amps,
        },
        density_mass: mass,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrwTrajectory {
    pub jump_times: Vec<f64>,
    pub jump_particles: Vec<usize>,
    pub jump_centers: Vec<f64>,
    /// State norm right after each hit.
    pub jump_norms: Vec<f64>,
    pub final_state: GridWavefunction,
}

/// One line of the flat trajectory export.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JumpRecord {
    pub time: f64,
    pub particle: usize,
    pub center: f64,
    pub norm: f64,
}

impl GrwTrajectory {
    pub fn records(&self) -> Vec<JumpRecord> {
        (0..self.jump_times.len())
            .map(|i| JumpRecord {
                time: self.jump_times[i],
                particle: self.jump_particles[i],
                center: self.jump_centers[i],
                norm: self.jump_norms[i],
            })
            .collect()
    }

    pub fn hits_on(&self, particle: usize) -> usize {
        self.jump_particles
            .iter()
            .filter(|&&p| p == particle)
            .count()
    }
}

/// Unitary part of the dynamics: `exp(−iHt)` through one eigendecomposition.
struct Propagator {
    values: Vec<f64>,
    vectors: ComplexMatrix,
    step: f64,
}

impl Propagator {
    fn new(h: &ComplexMatrix, step: Option<f64>) -> Result<Self> {
        let (values, vectors) = decomp::eigh(h)?;
        let norm = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let max_step = if norm > 0.0 {
            0.1 / norm
        } else {
            f64::INFINITY
        };
        let step = step.unwrap_or(max_step);
        if !(step > 0.0) || step > max_step * (1.0 + 1e-12) {
            bail!(
                Contract,
                "time step {step} does not resolve ‖H‖ = {norm} (need ≤ {max_step})"
            );
        }
        Ok(Self {
            values,
            vectors,
            step,
        })
    }

    fn advance(&self, amps: &mut Vec<Complex64>, duration: f64) {
        let mut left = duration;
        while left > 0.0 {
            let dt = left.min(self.step);
            let coeffs = self.vectors.adjoint().apply(amps);
            let rotated: Vec<Complex64> = coeffs
                .iter()
                .zip(&self.values)
                .map(|(c, &e)| c * c64(libm::cos(e * dt), -libm::sin(e * dt)))
                .collect();
            *amps = self.vectors.apply(&rotated);
            left -= dt;
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct EvolveOptions<'a> {
    pub hamiltonian: Option<&'a ComplexMatrix>,
    /// Unitary step; defaults to `0.1/‖H‖`.
    pub step: Option<f64>,
    pub centers: Option<CenterGrid>,
    /// Stop at the first hit after which the smaller center-of-mass branch
    /// (split at 0) carries less than this weight.
    pub stop_when_minor_below: Option<f64>,
}

/// Runs the stochastic dynamics for `duration`.
pub fn evolve<R: Rng + ?Sized>(
    state: &GridWavefunction,
    params: &GrwParams,
    duration: f64,
    options: &EvolveOptions<'_>,
    rng: &mut R,
) -> Result<GrwTrajectory> {
    checked_size(state.grid.len(), state.n_particles)?;
    let propagator = match options.hamiltonian {
        Some(h) => {
            if h.rows() != state.amplitudes.len() || !h.is_square() {
                bail!(Dimension, "Hamiltonian does not act on the product grid");
            }
            Some(Propagator::new(h, options.step)?)
        }
        None => None,
    };
    let centers = options
        .centers
        .unwrap_or_else(|| CenterGrid::resolving(params, &state.grid));
    let rates: Vec<f64> = (0..state.n_particles).map(|p| params.rate_of(p)).collect();
    let total_rate: f64 = rates.iter().sum();

    let mut current = state.clone();
    let mut t = 0.0;
    let mut traj = GrwTrajectory {
        jump_times: Vec::new(),
        jump_particles: Vec::new(),
        jump_centers: Vec::new(),
        jump_norms: Vec::new(),
        final_state: state.clone(),
    };
    loop {
        let wait = if total_rate > 0.0 {
            random::exponential(rng, total_rate)
        } else {
            f64::INFINITY
        };
        let next = t + wait;
        let until = next.min(duration);
        if let Some(p) = &propagator {
            p.advance(&mut current.amplitudes, until - t);
        }
        if next >= duration {
            break;
        }
        t = next;
        let particle = pick_weighted(&rates, total_rate, rng);
        let hit = sample_hit(&current, particle, params, &centers, rng)?;
        current = hit.post_state;
        traj.jump_times.push(t);
        traj.jump_particles.push(particle);
        traj.jump_centers.push(hit.x_center);
        traj.jump_norms.push(current.norm());
        if let Some(threshold) = options.stop_when_minor_below {
            let (a, b) = current.center_of_mass_weights(0.0);
            if a.min(b) < threshold * (a + b) {
                break;
            }
        }
    }
    traj.final_state = current;
    Ok(traj)
}

fn pick_weighted<R: Rng + ?Sized>(weights: &[f64], total: f64, rng: &mut R) -> usize {
    let target = rng.random::<f64>() * total;
    let mut acc = 0.0;
    for (i, &w) in weights.iter().enumerate() {
        acc += w;
        if acc > target {
            return i;
        }
    }
    weights.len() - 1
}

/// `n` particles rigidly displaced together: `(|−d/2,…⟩ + |+d/2,…⟩)/√2`
/// on a two-site grid per particle.
pub fn rigid_superposition(n_particles: usize, separation: f64) -> Result<GridWavefunction> {
    let size = checked_size(2, n_particles)?;
    let mut amps = vec![c64(0.0, 0.0); size];
    let h = core::f64::consts::FRAC_1_SQRT_2;
    amps[0] = c64(h, 0.0);
    amps[size - 1] = c64(h, 0.0);
    GridWavefunction::new(n_particles, vec![-separation / 2.0, separation / 2.0], amps)
}

/// Time of the hit that collapses a rigid superposition, or `None` if it
/// survives until `max_time`.
pub fn collapse_time<R: Rng + ?Sized>(
    state: &GridWavefunction,
    params: &GrwParams,
    max_time: f64,
    threshold: f64,
    rng: &mut R,
) -> Result<Option<f64>> {
    let traj = evolve(
        state,
        params,
        max_time,
        &EvolveOptions {
            stop_when_minor_below: Some(threshold),
            ..Default::default()
        },
        rng,
    )?;
    let (a, b) = traj.final_state.center_of_mass_weights(0.0);
    Ok(if a.min(b) < threshold * (a + b) {
        traj.jump_times.last().copied()
    } else {
        None
    })
}

/// Maximum-likelihood exponential rate from event times, with `censored`
/// runs that reached `max_time` without an event.
pub fn exponential_rate_mle(times: &[f64], censored: usize, max_time: f64) -> f64 {
    let exposure: f64 = times.iter().sum::<f64>() + censored as f64 * max_time;
    times.len() as f64 / exposure
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CollapseRateReport {
    pub n_particles: f64,
    /// `n_particles × lambda_rate` in the caller's units.
    pub rate: f64,
    /// `n_particles × 10⁻¹⁶ s⁻¹`.
    pub physical_rate_per_s: f64,
    pub physical_seconds_per_hit: f64,
    pub physical_years_per_hit: f64,
    /// The single-particle figure as usually quoted, for comparison.
    pub quoted_single_particle_years: f64,
}

pub fn collapse_rate_report(n_particles: f64, params: &GrwParams) -> CollapseRateReport {
    let physical_rate_per_s = n_particles * PHYSICAL_LAMBDA_PER_S;
    CollapseRateReport {
        n_particles,
        rate: n_particles * params.lambda_rate,
        physical_rate_per_s,
        physical_seconds_per_hit: 1.0 / physical_rate_per_s,
        physical_years_per_hit: 1.0 / physical_rate_per_s / SECONDS_PER_YEAR,
        quoted_single_particle_years: QUOTED_YEARS_PER_HIT,
    }
}
