//! Popper's slit experiment on a pair of position-correlated particles.
//!
//! Each particle lives on a 1-D grid in `y` (spacing 1, centered). The
//! joint amplitude is Gaussian in the relative coordinate, with spread
//! `correlation_width`, and in the center of mass, with spread
//! `envelope_width`. Alice keeps the branch that passes her slit; Bob's
//! slit is a nonselective pass/block measurement whose width he chooses.
//! Both particles then propagate freely under the discrete Laplacian
//! before reaching the counter arrays.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{bail, Result};
use crate::linalg::{apply_local, c64, decomp, Complex64, ComplexMatrix, DimList};

pub const MIN_GRID_POINTS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PopperConfig {
    pub grid_points: usize,
    /// Spread of `y_L − y_R`, grid units.
    pub correlation_width: f64,
    /// Spread of `(y_L + y_R)/2`, grid units.
    pub envelope_width: f64,
    pub slit_width_l: f64,
    /// Bob's slit when left open.
    pub slit_width_r: f64,
    /// Bob's slit after narrowing.
    pub narrowed_width_r: f64,
    pub narrow_r: bool,
    /// Free propagation time after the slits (ħ = m = 1).
    pub evolution_time: f64,
}

impl PopperConfig {
    pub fn standard(grid_points: usize, correlation_width: f64) -> Self {
        let g = grid_points as f64;
        Self {
            grid_points,
            correlation_width,
            envelope_width: g / 10.0,
            slit_width_l: g / 4.0,
            slit_width_r: g / 4.0,
            narrowed_width_r: g / 32.0,
            narrow_r: false,
            evolution_time: g / 2.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.grid_points < MIN_GRID_POINTS {
            bail!(
                Dimension,
                "grid needs at least {MIN_GRID_POINTS} points, got {}",
                self.grid_points
            );
        }
        if !(self.correlation_width > 1.0) {
            bail!(
                Unsupported,
                "correlation width {} does not exceed the grid spacing; the exact-delta limit is not normalizable",
                self.correlation_width
            );
        }
        let extent = self.grid_points as f64;
        for (name, w) in [
            ("slit_width_l", self.slit_width_l),
            ("slit_width_r", self.slit_width_r),
            ("narrowed_width_r", self.narrowed_width_r),
        ] {
            if !(w > 0.0 && w <= extent) {
                bail!(Contract, "{name} = {w} must lie in (0, {extent}]");
            }
        }
        if !(self.envelope_width > 0.0) || !(self.evolution_time >= 0.0) {
            bail!(
                Contract,
                "envelope width must be positive and evolution time nonnegative"
            );
        }
        Ok(())
    }

    /// Counter positions, centered on the grid midpoint.
    pub fn positions(&self) -> Vec<f64> {
        let c = (self.grid_points as f64 - 1.0) / 2.0;
        (0..self.grid_points).map(|i| i as f64 - c).collect()
    }
}

/// Normalized correlated source amplitudes, index `y_L · G + y_R`.
pub fn source_amplitudes(cfg: &PopperConfig) -> Vec<Complex64> {
    let y = cfg.positions();
    let (wc, we) = (cfg.correlation_width, cfg.envelope_width);
    let mut amps = Vec::with_capacity(y.len() * y.len());
    for &yl in &y {
        for &yr in &y {
            let rel = yl - yr;
            let com = 0.5 * (yl + yr);
            amps.push(c64(
                libm::exp(-rel * rel / (4.0 * wc * wc) - com * com / (4.0 * we * we)),
                0.0,
            ));
        }
    }
    normalize(amps)
}

/// Uncorrelated product of Gaussians of spread `width`.
pub fn product_amplitudes(cfg: &PopperConfig, width: f64) -> Vec<Complex64> {
    let y = cfg.positions();
    let g: Vec<f64> = y
        .iter()
        .map(|&v| libm::exp(-v * v / (4.0 * width * width)))
        .collect();
    let mut amps = Vec::with_capacity(y.len() * y.len());
    for &a in &g {
        for &b in &g {
            amps.push(c64(a * b, 0.0));
        }
    }
    normalize(amps)
}

fn normalize(mut amps: Vec<Complex64>) -> Vec<Complex64> {
    let n = crate::linalg::norm(&amps);
    for a in &mut amps {
        *a /= n;
    }
    amps
}

fn aperture(y: &[f64], width: f64) -> Vec<bool> {
    y.iter().map(|&v| v.abs() <= width / 2.0).collect()
}

fn free_propagator(g: usize, t: f64) -> Result<ComplexMatrix> {
    // −½Δ with hard walls
    let mut h = ComplexMatrix::zeros(g, g);
    for i in 0..g {
        h[(i, i)] = c64(1.0, 0.0);
        if i + 1 < g {
            h[(i, i + 1)] = c64(-0.5, 0.0);
            h[(i + 1, i)] = c64(-0.5, 0.0);
        }
    }
    decomp::exp_i_hermitian(&h, -t)
}

/// Counter distributions behind both slits for one setting of Bob's slit.
#[derive(Debug, Clone, PartialEq)]
pub struct SlitOutcome {
    /// Alice's counter probabilities, summed over Bob's pass/block branches.
    pub alice: Vec<f64>,
    /// Bob's counter probabilities behind his open slit (pass branch only).
    pub bob_pass: Vec<f64>,
}

fn simulate(
    cfg: &PopperConfig,
    amps: &[Complex64],
    bob_width: f64,
    u: &ComplexMatrix,
) -> Result<SlitOutcome> {
    let g = cfg.grid_points;
    let dims = DimList::uniform(g, 2);
    let y = cfg.positions();
    let left = aperture(&y, cfg.slit_width_l);
    let right = aperture(&y, bob_width);
    let mut alice = vec![0.0; g];
    let mut bob_pass = vec![0.0; g];
    for pass in [true, false] {
        let branch: Vec<Complex64> = amps
            .iter()
            .enumerate()
            .map(|(i, &a)| {
                let (l, r) = (i / g, i % g);
                if left[l] && right[r] == pass {
                    a
                } else {
                    c64(0.0, 0.0)
                }
            })
            .collect();
        let evolved = apply_local(&apply_local(&branch, &dims, 0, u)?, &dims, 1, u)?;
        for (i, a) in evolved.iter().enumerate() {
            let p = a.norm_sqr();
            alice[i / g] += p;
            if pass {
                bob_pass[i % g] += p;
            }
        }
    }
    Ok(SlitOutcome { alice, bob_pass })
}

#[derive(Debug, Clone, PartialEq)]
pub struct PopperReport {
    pub config: PopperConfig,
    pub wide: SlitOutcome,
    pub narrowed: SlitOutcome,
    /// `max_y |P_wide(y) − P_narrow(y)|` for Alice.
    pub sup_deviation: f64,
    /// Standard deviation of Alice's counter distribution.
    pub alice_spread: f64,
    /// Standard deviation of Bob's counter distribution, open and narrowed.
    pub bob_spread: (f64, f64),
}

impl PopperReport {
    /// Alice's distribution for the configured setting of Bob's slit.
    pub fn alice_marginal(&self) -> &[f64] {
        if self.config.narrow_r {
            &self.narrowed.alice
        } else {
            &self.wide.alice
        }
    }
}

pub fn spread(positions: &[f64], weights: &[f64]) -> f64 {
    let total: f64 = weights.iter().sum();
    if total <= 0.0 {
        return 0.0;
    }
    let mean = positions
        .iter()
        .zip(weights)
        .map(|(y, w)| y * w)
        .sum::<f64>()
        / total;
    let var = positions
        .iter()
        .zip(weights)
        .map(|(y, w)| (y - mean) * (y - mean) * w)
        .sum::<f64>()
        / total;
    libm::sqrt(var)
}

pub fn run_popper(cfg: &PopperConfig) -> Result<PopperReport> {
    cfg.validate()?;
    run_popper_with(cfg, &source_amplitudes(cfg))
}

/// Same experiment on caller-supplied amplitudes (index `y_L · G + y_R`).
pub fn run_popper_with(cfg: &PopperConfig, amps: &[Complex64]) -> Result<PopperReport> {
    cfg.validate()?;
    let g = cfg.grid_points;
    if amps.len() != g * g {
        bail!(Dimension, "{} amplitudes for a {g}×{g} grid", amps.len());
    }
    let u = free_propagator(g, cfg.evolution_time)?;
    let wide = simulate(cfg, amps, cfg.slit_width_r, &u)?;
    let narrowed = simulate(cfg, amps, cfg.narrowed_width_r, &u)?;
    let sup_deviation = wide
        .alice
        .iter()
        .zip(&narrowed.alice)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let y = cfg.positions();
    Ok(PopperReport {
        config: *cfg,
        alice_spread: spread(&y, &wide.alice),
        bob_spread: (spread(&y, &wide.bob_pass), spread(&y, &narrowed.bob_pass)),
        wide,
        narrowed,
        sup_deviation,
    })
}
