//! Spacing statistics for the crossover between regular and chaotic
//! spectral fluctuations.
//!
//! The crate implements a one-parameter family of nearest-neighbor spacing
//! laws indexed by an entropic parameter `q` in [0, 1]: the classical 2x2
//! Wigner surmises at `q = 1`, sharpening through bounded-support densities
//! toward a picket-fence spectrum at `q = 0`. Around that family it builds
//! the machinery to test it against data:
//!
//! - [`surmise`] - closed-form densities, CDFs and quantiles;
//! - [`matrix`] - dense symmetric/Hermitian storage with checked
//!   constructors;
//! - [`ensembles`] - GOE/GUE generators, the incommensurate-oscillator
//!   ladder, mixed `(1-g) D + g P` Hamiltonians, and a rejection-sampling
//!   oracle for the 2x2 joint eigenvalue density;
//! - [`spectral`] - dense symmetric/Hermitian eigensolution, polynomial
//!   unfolding, spacings and histograms;
//! - [`fitting`] - least-squares and maximum-likelihood estimation of `q`,
//!   Kolmogorov-Smirnov diagnostics;
//! - [`experiment`] - the composed pipelines behind the command-line tool.
//!
//! All generators are deterministic functions of `(configuration, seed)`;
//! parallel execution cannot change any result.
//!
//! ```
//! use tsallis_rmt::{EntropicIndex, SpacingLaw, SymmetryClass};
//!
//! let q = EntropicIndex::new(0.5).unwrap();
//! let law = SpacingLaw::new(SymmetryClass::Orthogonal, q);
//! assert!((law.cdf(law.s_max()) - 1.0).abs() < 1e-9);
//! let median = law.quantile(0.5).unwrap();
//! assert!((law.cdf(median) - 0.5).abs() < 1e-9);
//! ```

pub mod ensembles;
pub mod experiment;
pub mod fitting;
pub mod matrix;
mod numeric;
pub mod spectral;
pub mod surmise;

pub use ensembles::{
    GaussianEnsembleConfig, MixConfig, MixedHamiltonian, Normalization, OracleConfig,
    OscillatorConfig,
};
pub use fitting::{FitMethod, FitResult};
pub use spectral::{HistogramDensity, RealSpectrum, UnfoldedSpacings};
pub use surmise::{EntropicIndex, SpacingLaw, SymmetryClass};
