//! End-to-end experiment pipelines: the regular-to-chaotic transition sweep
//! over the mixing weight `g`, pure-ensemble baselines, and the
//! incommensurate-oscillator spacing histogram.
//!
//! These compose the generator, spectral and fitting modules so the CLI and
//! the acceptance suite run exactly the same code. Work is parallelized
//! over `(g, member)` pairs with rayon; results are merged by index, never
//! by completion order, so output is bit-identical across thread counts.

use rayon::prelude::*;
use thiserror::Error;

use crate::ensembles::{
    mixed_hamiltonian, sample_goe, sample_gue, EnsembleError, GaussianEnsembleConfig,
    MixConfig, Normalization, OscillatorConfig,
};
use crate::fitting::{fit_q_ls, fit_q_mle, ks_distance, FitError, FitMethod, FitResult};
use crate::spectral::{
    eigenvalues, eigenvalues_hermitian, histogram, unfold, HistogramDensity,
    SpectralError, Unfolded, UnfoldedSpacings,
};
use crate::surmise::{EntropicIndex, SpacingLaw, SymmetryClass};

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Ensemble(#[from] EnsembleError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Fit(#[from] FitError),
}

/// Unfolding parameters applied identically to every spectrum in an
/// experiment (oscillator, pure ensemble, mixed).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnfoldParams {
    pub degree: usize,
    pub trim: f64,
}

impl Default for UnfoldParams {
    fn default() -> Self {
        Self { degree: 7, trim: 0.05 }
    }
}

/// Default mixing-weight grid: log-like spacing concentrated below 0.05,
/// where the transition happens, plus the pure endpoints.
pub fn default_g_grid() -> Vec<f64> {
    vec![0.0, 0.002, 0.005, 0.01, 0.015, 0.02, 0.03, 0.05, 0.1, 0.2, 0.5, 1.0]
}

/// Full parameter set of the transition experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionConfig {
    pub class: SymmetryClass,
    pub dim: usize,
    pub members: usize,
    pub alpha: f64,
    pub sigma2: f64,
    pub seed: u64,
    pub normalization: Normalization,
    pub g_values: Vec<f64>,
    pub unfold: UnfoldParams,
    pub bin_width: f64,
    pub method: FitMethod,
}

impl TransitionConfig {
    /// The reference setup: ensembles of 20 matrices of dimension 200,
    /// frequency ratio `1/sqrt(2)`, raw mixing with unit entry variance.
    pub fn reference(class: SymmetryClass, seed: u64) -> Self {
        Self {
            class,
            dim: 200,
            members: 20,
            alpha: std::f64::consts::FRAC_1_SQRT_2,
            sigma2: 1.0,
            seed,
            normalization: Normalization::Raw,
            g_values: default_g_grid(),
            unfold: UnfoldParams::default(),
            bin_width: 0.1,
            method: FitMethod::HistLs,
        }
    }
}

/// Everything measured at one value of the mixing weight.
#[derive(Debug, Clone)]
pub struct TransitionPoint {
    pub g: f64,
    pub fit: FitResult,
    pub histogram: HistogramDensity,
    pub pooled: UnfoldedSpacings,
    /// Unfolding clips summed over the ensemble members.
    pub clipped: usize,
}

impl TransitionPoint {
    pub fn clipped_fraction(&self) -> f64 {
        self.clipped as f64 / self.pooled.len() as f64
    }
}

/// Run the transition experiment: for every `g`, build the ensemble of
/// mixed Hamiltonians, eigensolve, unfold each member, pool the spacings,
/// and fit the entropic index.
pub fn transition_sweep(
    cfg: &TransitionConfig,
) -> Result<Vec<TransitionPoint>, ExperimentError> {
    let base = OscillatorConfig::new(cfg.alpha, cfg.dim)?;
    let pert =
        GaussianEnsembleConfig::new(cfg.class, cfg.dim, cfg.sigma2, cfg.seed)?;

    let items: Vec<(usize, usize)> = (0..cfg.g_values.len())
        .flat_map(|gi| (0..cfg.members).map(move |m| (gi, m)))
        .collect();
    let unfolded: Result<Vec<Unfolded>, ExperimentError> = items
        .par_iter()
        .map(|&(gi, m)| {
            let mix = MixConfig::new(
                cfg.g_values[gi],
                base,
                pert,
                cfg.members,
                cfg.normalization,
            )?;
            let h = mixed_hamiltonian(&mix, m)?;
            let spectrum = h.spectrum()?;
            Ok(unfold(&spectrum, cfg.unfold.degree, cfg.unfold.trim)?)
        })
        .collect();
    let unfolded = unfolded?;

    let mut points = Vec::with_capacity(cfg.g_values.len());
    for (gi, &g) in cfg.g_values.iter().enumerate() {
        let members = &unfolded[gi * cfg.members..(gi + 1) * cfg.members];
        let pooled = UnfoldedSpacings::pool(members.iter().map(|u| &u.spacings))?;
        let clipped = members.iter().map(|u| u.clipped).sum();
        let hist = histogram(&pooled, cfg.bin_width)?;
        let fit = match cfg.method {
            FitMethod::HistLs => fit_q_ls(&hist, cfg.class),
            FitMethod::Mle => fit_q_mle(pooled.values(), cfg.class)?,
        };
        points.push(TransitionPoint { g, fit, histogram: hist, pooled, clipped });
    }
    Ok(points)
}

/// Pooled unfolded spacings of a pure Gaussian ensemble.
#[derive(Debug, Clone)]
pub struct EnsembleBaseline {
    pub spacings: UnfoldedSpacings,
    pub clipped: usize,
}

impl EnsembleBaseline {
    pub fn clipped_fraction(&self) -> f64 {
        self.clipped as f64 / self.spacings.len() as f64
    }
}

/// Generate `members` draws of the ensemble, eigensolve, unfold each
/// spectrum, and pool the spacings. Member `k` uses the stream derived from
/// `(seed, k)`, matching the convention of the mixed ensemble.
pub fn pooled_ensemble_spacings(
    class: SymmetryClass,
    dim: usize,
    members: usize,
    sigma2: f64,
    seed: u64,
    params: UnfoldParams,
) -> Result<EnsembleBaseline, ExperimentError> {
    let cfg = GaussianEnsembleConfig::new(class, dim, sigma2, seed)?;
    let unfolded: Result<Vec<Unfolded>, ExperimentError> = (0..members)
        .into_par_iter()
        .map(|k| {
            let member_cfg =
                cfg.with_seed(crate::ensembles::member_seed(seed, k as u64));
            let spectrum = match class {
                SymmetryClass::Unitary => {
                    eigenvalues_hermitian(&sample_gue(&member_cfg)?)?
                }
                _ => eigenvalues(&sample_goe(&member_cfg)?)?,
            };
            Ok(unfold(&spectrum, params.degree, params.trim)?)
        })
        .collect();
    let unfolded = unfolded?;
    let spacings = UnfoldedSpacings::pool(unfolded.iter().map(|u| &u.spacings))?;
    let clipped = unfolded.iter().map(|u| u.clipped).sum();
    Ok(EnsembleBaseline { spacings, clipped })
}

/// The incommensurate-oscillator experiment: unfolded spacing histogram of
/// the lowest `count` ladder levels, compared against the sharpest member
/// of the bounded-support family (`beta = 1`, `q = 0`).
#[derive(Debug, Clone)]
pub struct BerryTaborRun {
    pub spacings: UnfoldedSpacings,
    pub histogram: HistogramDensity,
    pub clipped: usize,
    /// KS distance of the unfolded spacings to the `q = 0` law; the ladder
    /// is close to, but never exactly on, that law.
    pub ks_vs_q0: f64,
}

pub fn berry_tabor_run(
    alpha: f64,
    count: usize,
    bin_width: f64,
    params: UnfoldParams,
) -> Result<BerryTaborRun, ExperimentError> {
    let cfg = OscillatorConfig::new(alpha, count)?;
    let spectrum = crate::ensembles::ho_spectrum(&cfg);
    let out = unfold(&spectrum, params.degree, params.trim)?;
    let hist = histogram(&out.spacings, bin_width)?;
    let law = SpacingLaw::new(
        SymmetryClass::Orthogonal,
        EntropicIndex::new(0.0).expect("0 is in range"),
    );
    let ks = ks_distance(&out.spacings, &law);
    Ok(BerryTaborRun {
        spacings: out.spacings,
        histogram: hist,
        clipped: out.clipped,
        ks_vs_q0: ks,
    })
}
