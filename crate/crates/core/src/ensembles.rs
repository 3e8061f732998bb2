//! Matrix and spectrum generators: Gaussian orthogonal/unitary ensembles,
//! the incommensurate two-dimensional oscillator ladder, mixed
//! regular-plus-random Hamiltonians, and a rejection-sampling oracle for the
//! 2x2 bounded-support joint eigenvalue density.
//!
//! Everything is a pure function of its configuration. Randomness comes
//! from per-call ChaCha streams seeded by `(root seed, member index)`
//! through a SplitMix64 mix, so results are bit-identical regardless of
//! execution order or parallelism.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

use crate::matrix::{HermMatrix, SymMatrix};
use crate::spectral::{self, RealSpectrum, SpectralError, UnfoldedSpacings};
use crate::surmise::{EntropicIndex, SymmetryClass};

#[derive(Debug, Error)]
pub enum EnsembleError {
    #[error("generator for beta = {expected} got a config with beta = {got}")]
    ClassMismatch { expected: u32, got: u32 },
    #[error("matrix generators support beta = 1 and beta = 2 only")]
    UnsupportedClass,
    #[error("dimension must be at least 1")]
    InvalidDimension,
    #[error("variance sigma2 must be positive and finite, got {0}")]
    InvalidSigma(f64),
    #[error("frequency ratio alpha must be positive and finite, got {0}")]
    InvalidAlpha(f64),
    #[error("level count must be at least 2, got {0}")]
    InvalidCount(usize),
    #[error("hbar*omega must be positive and finite, got {0}")]
    InvalidEnergyScale(f64),
    #[error("mixing weight g must lie in [0, 1], got {0}")]
    InvalidMixWeight(f64),
    #[error("oscillator count {base} does not match perturbation dimension {perturbation}")]
    DimensionMismatch { base: usize, perturbation: usize },
    #[error("ensemble must have at least one member")]
    NoMembers,
    #[error("member index {index} out of range for {members} members")]
    MemberOutOfRange { index: usize, members: usize },
    #[error("oracle requires q < 1 (the Gaussian sentinel has its own sampler)")]
    WignerOracle,
    #[error("oracle scale must be positive and finite, got {0}")]
    InvalidScale(f64),
    #[error("sample count must be at least 1")]
    NoSamples,
    #[error("rejection acceptance rate below 1e-5; q is too close to 1 for this oracle")]
    AcceptanceTooLow,
    #[error("spectrum too degenerate to rescale to unit mean spacing")]
    DegenerateScale,
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derive the seed of an ensemble member's private stream from the root
/// seed. Distinct `(root, member)` pairs map to statistically independent
/// streams; the same pair always maps to the same stream.
pub fn member_seed(root: u64, member: u64) -> u64 {
    splitmix64(splitmix64(root) ^ member.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

fn rng_from(seed: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(seed)
}

/// Configuration of a Gaussian matrix ensemble. `sigma2` is the variance of
/// one off-diagonal entry (total variance, for the complex case); the real
/// diagonal has variance `2 sigma2 / beta`, which keeps the weight
/// `exp(-eta Tr H^2)` convention consistent across beta = 1, 2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianEnsembleConfig {
    class: SymmetryClass,
    dim: usize,
    sigma2: f64,
    seed: u64,
}

impl GaussianEnsembleConfig {
    pub fn new(
        class: SymmetryClass,
        dim: usize,
        sigma2: f64,
        seed: u64,
    ) -> Result<Self, EnsembleError> {
        if class == SymmetryClass::Symplectic {
            return Err(EnsembleError::UnsupportedClass);
        }
        if dim < 1 {
            return Err(EnsembleError::InvalidDimension);
        }
        if !(sigma2.is_finite() && sigma2 > 0.0) {
            return Err(EnsembleError::InvalidSigma(sigma2));
        }
        Ok(Self { class, dim, sigma2, seed })
    }

    pub fn class(&self) -> SymmetryClass {
        self.class
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn sigma2(&self) -> f64 {
        self.sigma2
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

/// One GOE draw: symmetric, independent zero-mean Gaussians with
/// `Var(H_ij) = sigma2` off the diagonal and `Var(H_ii) = 2 sigma2`.
/// Deterministic in the seed; entries are drawn row-wise over the upper
/// triangle.
pub fn sample_goe(cfg: &GaussianEnsembleConfig) -> Result<SymMatrix, EnsembleError> {
    if cfg.class != SymmetryClass::Orthogonal {
        return Err(EnsembleError::ClassMismatch { expected: 1, got: cfg.class.beta() });
    }
    let n = cfg.dim;
    let mut rng = rng_from(cfg.seed);
    let off_sd = cfg.sigma2.sqrt();
    let diag_sd = (2.0 * cfg.sigma2).sqrt();
    let mut h = SymMatrix::zeros(n);
    for i in 0..n {
        for j in i..n {
            let z: f64 = rng.sample(StandardNormal);
            h.set_pair(i, j, if i == j { diag_sd * z } else { off_sd * z });
        }
    }
    Ok(h)
}

/// One GUE draw: Hermitian, real diagonal of variance `sigma2`, off-diagonal
/// entries with independent real and imaginary parts of variance
/// `sigma2 / 2` each.
pub fn sample_gue(cfg: &GaussianEnsembleConfig) -> Result<HermMatrix, EnsembleError> {
    if cfg.class != SymmetryClass::Unitary {
        return Err(EnsembleError::ClassMismatch { expected: 2, got: cfg.class.beta() });
    }
    let n = cfg.dim;
    let mut rng = rng_from(cfg.seed);
    let diag_sd = cfg.sigma2.sqrt();
    let part_sd = (0.5 * cfg.sigma2).sqrt();
    let mut h = HermMatrix::zeros(n);
    for i in 0..n {
        for j in i..n {
            if i == j {
                let z: f64 = rng.sample(StandardNormal);
                h.set_pair(i, i, Complex64::new(diag_sd * z, 0.0));
            } else {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                h.set_pair(i, j, Complex64::new(part_sd * re, part_sd * im));
            }
        }
    }
    Ok(h)
}

/// Two-dimensional oscillator ladder `E = hbar_omega (n + alpha m)`.
///
/// `alpha` is meant to be an irrational ratio in (0, 1); any positive value
/// is accepted so commensurate (degenerate) spectra can be produced on
/// purpose.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorConfig {
    alpha: f64,
    count: usize,
    hbar_omega: f64,
}

impl OscillatorConfig {
    pub fn new(alpha: f64, count: usize) -> Result<Self, EnsembleError> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(EnsembleError::InvalidAlpha(alpha));
        }
        if count < 2 {
            return Err(EnsembleError::InvalidCount(count));
        }
        Ok(Self { alpha, count, hbar_omega: 1.0 })
    }

    pub fn with_energy_scale(mut self, hbar_omega: f64) -> Result<Self, EnsembleError> {
        if !(hbar_omega.is_finite() && hbar_omega > 0.0) {
            return Err(EnsembleError::InvalidEnergyScale(hbar_omega));
        }
        self.hbar_omega = hbar_omega;
        Ok(self)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn hbar_omega(&self) -> f64 {
        self.hbar_omega
    }
}

/// The `count` lowest levels of `{n + alpha m : n, m >= 0}`, ascending,
/// ties preserved. The lattice is enumerated below a cutoff that grows
/// geometrically until enough levels are collected, so no low-lying level
/// can be missed.
pub fn ho_spectrum(cfg: &OscillatorConfig) -> RealSpectrum {
    let target = cfg.count;
    let alpha = cfg.alpha;
    let mut cut = ((2.0 * alpha * target as f64).sqrt() + 2.0 * (1.0 + alpha)).max(2.0);
    loop {
        let n_max = cut.floor() as usize;
        let mut levels = Vec::new();
        for n in 0..=n_max {
            let m_max = ((cut - n as f64) / alpha).floor() as usize;
            for m in 0..=m_max {
                levels.push(n as f64 + alpha * m as f64);
            }
        }
        if levels.len() >= target {
            levels.sort_unstable_by(|a, b| a.partial_cmp(b).expect("finite levels"));
            levels.truncate(target);
            if cfg.hbar_omega != 1.0 {
                for v in &mut levels {
                    *v *= cfg.hbar_omega;
                }
            }
            return RealSpectrum::new(levels).expect("count >= 2 and ascending");
        }
        cut *= 1.5;
    }
}

/// How the two terms of a mixed Hamiltonian are scaled before mixing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    /// Use both matrices exactly as generated.
    Raw,
    /// Rescale the diagonal term and the perturbation so that each has unit
    /// mean level spacing over the central 80% of its spectrum. Makes the
    /// meaning of the mixing weight independent of `sigma2`, `hbar_omega`
    /// and (weakly) of the dimension.
    UnitMeanSpacing,
}

/// Parameters of the mixed Hamiltonian `H(g) = (1-g) D + g P`, with `D` the
/// diagonal oscillator matrix and `P` a Gaussian-ensemble draw.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixConfig {
    g: f64,
    base: OscillatorConfig,
    perturbation: GaussianEnsembleConfig,
    members: usize,
    normalization: Normalization,
}

impl MixConfig {
    pub fn new(
        g: f64,
        base: OscillatorConfig,
        perturbation: GaussianEnsembleConfig,
        members: usize,
        normalization: Normalization,
    ) -> Result<Self, EnsembleError> {
        if !(g.is_finite() && (0.0..=1.0).contains(&g)) {
            return Err(EnsembleError::InvalidMixWeight(g));
        }
        if base.count != perturbation.dim {
            return Err(EnsembleError::DimensionMismatch {
                base: base.count,
                perturbation: perturbation.dim,
            });
        }
        if members < 1 {
            return Err(EnsembleError::NoMembers);
        }
        Ok(Self { g, base, perturbation, members, normalization })
    }

    pub fn g(&self) -> f64 {
        self.g
    }

    pub fn base(&self) -> &OscillatorConfig {
        &self.base
    }

    pub fn perturbation(&self) -> &GaussianEnsembleConfig {
        &self.perturbation
    }

    pub fn members(&self) -> usize {
        self.members
    }

    pub fn normalization(&self) -> Normalization {
        self.normalization
    }
}

/// A mixed Hamiltonian, real symmetric or complex Hermitian depending on
/// the perturbing ensemble.
#[derive(Debug, Clone)]
pub enum MixedHamiltonian {
    Orthogonal(SymMatrix),
    Unitary(HermMatrix),
}

impl MixedHamiltonian {
    pub fn n(&self) -> usize {
        match self {
            Self::Orthogonal(m) => m.n(),
            Self::Unitary(m) => m.n(),
        }
    }

    /// Eigenvalues of the Hamiltonian, ascending.
    pub fn spectrum(&self) -> Result<RealSpectrum, SpectralError> {
        match self {
            Self::Orthogonal(m) => spectral::eigenvalues(m),
            Self::Unitary(m) => spectral::eigenvalues_hermitian(m),
        }
    }
}

/// Mean level spacing over the central 80% of a sorted spectrum.
fn central_mean_spacing(levels: &[f64]) -> Result<f64, EnsembleError> {
    let n = levels.len();
    let k = n / 10;
    let (lo, hi) = (k, n - 1 - k);
    if hi <= lo {
        return Err(EnsembleError::DegenerateScale);
    }
    let span = levels[hi] - levels[lo];
    if !(span.is_finite() && span > 0.0) {
        return Err(EnsembleError::DegenerateScale);
    }
    Ok(span / (hi - lo) as f64)
}

/// Build member `member_index` of the mixed ensemble `(1-g) D + g P`.
///
/// The perturbation is drawn from a stream derived from the perturbation's
/// root seed and the member index, so members are independent and the same
/// member is reproducible in isolation. `g = 0` returns exactly the
/// diagonal matrix, `g = 1` exactly the ensemble draw (under `Raw`
/// normalization).
pub fn mixed_hamiltonian(
    cfg: &MixConfig,
    member_index: usize,
) -> Result<MixedHamiltonian, EnsembleError> {
    if member_index >= cfg.members {
        return Err(EnsembleError::MemberOutOfRange {
            index: member_index,
            members: cfg.members,
        });
    }
    let levels = ho_spectrum(&cfg.base);
    let member_cfg = cfg
        .perturbation
        .with_seed(member_seed(cfg.perturbation.seed, member_index as u64));
    match cfg.perturbation.class {
        SymmetryClass::Orthogonal => {
            let p = sample_goe(&member_cfg)?;
            let (cd, cp) = mixing_weights(cfg, levels.levels(), || {
                Ok(spectral::eigenvalues(&p)?.levels().to_vec())
            })?;
            let d = SymMatrix::from_diagonal(levels.levels());
            Ok(MixedHamiltonian::Orthogonal(
                d.linear_combination(cd, &p, cp).expect("dimensions validated"),
            ))
        }
        SymmetryClass::Unitary => {
            let p = sample_gue(&member_cfg)?;
            let (cd, cp) = mixing_weights(cfg, levels.levels(), || {
                Ok(spectral::eigenvalues_hermitian(&p)?.levels().to_vec())
            })?;
            let d = HermMatrix::from_real_diagonal(levels.levels());
            Ok(MixedHamiltonian::Unitary(
                d.linear_combination(cd, &p, cp).expect("dimensions validated"),
            ))
        }
        SymmetryClass::Symplectic => Err(EnsembleError::UnsupportedClass),
    }
}

/// Coefficients `((1-g) * d_scale, g * p_scale)` for the two mixing terms.
/// The perturbation spectrum is only computed when the normalization needs
/// it.
fn mixing_weights<F>(
    cfg: &MixConfig,
    base_levels: &[f64],
    perturbation_levels: F,
) -> Result<(f64, f64), EnsembleError>
where
    F: FnOnce() -> Result<Vec<f64>, EnsembleError>,
{
    match cfg.normalization {
        Normalization::Raw => Ok((1.0 - cfg.g, cfg.g)),
        Normalization::UnitMeanSpacing => {
            let d_scale = 1.0 / central_mean_spacing(base_levels)?;
            let p_levels = perturbation_levels()?;
            let p_scale = 1.0 / central_mean_spacing(&p_levels)?;
            Ok(((1.0 - cfg.g) * d_scale, cfg.g * p_scale))
        }
    }
}

/// Configuration of the 2x2 rejection-sampling oracle for the joint density
/// `P(s, X) ~ s^beta [1 - scale (s^2/2 + 2 X^2)]_+^{1/(1-q)}`.
///
/// `scale` stands for the product `(1-q) eta`; its value only sets the raw
/// scale of `s` and drops out after the samples are renormalized to unit
/// mean, which is why the default of 1 is fine.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    class: SymmetryClass,
    q: EntropicIndex,
    scale: f64,
    samples: usize,
    seed: u64,
}

impl OracleConfig {
    pub fn new(
        class: SymmetryClass,
        q: EntropicIndex,
        samples: usize,
        seed: u64,
    ) -> Result<Self, EnsembleError> {
        Self::with_scale(class, q, 1.0, samples, seed)
    }

    pub fn with_scale(
        class: SymmetryClass,
        q: EntropicIndex,
        scale: f64,
        samples: usize,
        seed: u64,
    ) -> Result<Self, EnsembleError> {
        if class == SymmetryClass::Symplectic {
            return Err(EnsembleError::UnsupportedClass);
        }
        if q.is_wigner() {
            return Err(EnsembleError::WignerOracle);
        }
        if !(scale.is_finite() && scale > 0.0) {
            return Err(EnsembleError::InvalidScale(scale));
        }
        if samples < 1 {
            return Err(EnsembleError::NoSamples);
        }
        Ok(Self { class, q, scale, samples, seed })
    }

    pub fn class(&self) -> SymmetryClass {
        self.class
    }

    pub fn q(&self) -> EntropicIndex {
        self.q
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn samples(&self) -> usize {
        self.samples
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

/// Raw accepted `(s, X)` pairs. Proposals are uniform on the bounding box
/// of the positive-bracket region; acceptance probability
/// `(s/s_bound)^beta [1 - scale (s^2/2 + 2 X^2)]_+^{1/(1-q)}` makes the
/// accepted pairs exact draws from the joint density.
fn rejection_pairs(cfg: &OracleConfig) -> Result<Vec<(f64, f64)>, EnsembleError> {
    let beta = cfg.class.beta() as i32;
    let r = 1.0 / (1.0 - cfg.q.get());
    let s_bound = (2.0 / cfg.scale).sqrt();
    let x_bound = (0.5 / cfg.scale).sqrt();
    let mut rng = rng_from(cfg.seed);
    let mut out = Vec::with_capacity(cfg.samples);
    let max_attempts = (cfg.samples as u64).saturating_mul(100_000);
    let mut attempts = 0u64;
    while out.len() < cfg.samples {
        attempts += 1;
        if attempts > max_attempts {
            return Err(EnsembleError::AcceptanceTooLow);
        }
        let s = s_bound * rng.random::<f64>();
        let x = x_bound * (2.0 * rng.random::<f64>() - 1.0);
        let bracket = 1.0 - cfg.scale * (0.5 * s * s + 2.0 * x * x);
        if bracket <= 0.0 {
            continue;
        }
        let accept = (s / s_bound).powi(beta) * bracket.powf(r);
        if rng.random::<f64>() < accept {
            out.push((s, x));
        }
    }
    Ok(out)
}

/// Monte Carlo spacings from the 2x2 joint density, renormalized to unit
/// sample mean. This is the independent check of the closed-form spacing
/// law: marginalizing the joint density over the center-of-mass coordinate
/// and fixing the mean must reproduce it.
pub fn sample_tsallis_2x2(cfg: &OracleConfig) -> Result<UnfoldedSpacings, EnsembleError> {
    let pairs = rejection_pairs(cfg)?;
    let raw: Vec<f64> = pairs.into_iter().map(|(s, _)| s).collect();
    Ok(UnfoldedSpacings::from_raw(raw)?)
}
