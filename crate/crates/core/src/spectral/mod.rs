//! Spectra and their fluctuation statistics: eigensolution, polynomial
//! unfolding, nearest-neighbor spacings, and density histograms.
//!
//! Unfolding fits a smooth counting function `N(E)` (a low-degree polynomial
//! in a scaled Chebyshev basis) to the spectral staircase `(E_i, i)` over a
//! trimmed interior, then maps consecutive levels through it. The resulting
//! spacings are renormalized to unit sample mean, which is the variable the
//! closed-form spacing laws are expressed in.

mod eigen;

use thiserror::Error;

use crate::matrix::{HermMatrix, SymMatrix};
use crate::numeric;

#[derive(Debug, Error, PartialEq)]
pub enum SpectralError {
    #[error("spectrum must hold at least {needed} levels, got {got}")]
    TooFewLevels { needed: usize, got: usize },
    #[error("levels must be nondecreasing (violated at index {index})")]
    NotAscending { index: usize },
    #[error("values must be finite")]
    NonFinite,
    #[error("degenerate spectrum: all levels equal")]
    DegenerateSpectrum,
    #[error("unfolding degree must be at least 1")]
    InvalidDegree,
    #[error("trim fraction must lie in [0, 0.5), got {0}")]
    InvalidTrimFraction(f64),
    #[error("spacing at index {index} is negative")]
    NegativeSpacing { index: usize },
    #[error("spacing list is empty")]
    EmptySpacings,
    #[error("spacings have zero mean; cannot normalize")]
    ZeroMeanSpacings,
    #[error("bin width must be positive and finite, got {0}")]
    InvalidBinWidth(f64),
    #[error("histogram has no mass")]
    EmptyHistogram,
}

/// Ascending list of raw eigenvalues (energy units). At least two levels;
/// ties are allowed and preserved.
#[derive(Debug, Clone, PartialEq)]
pub struct RealSpectrum {
    levels: Vec<f64>,
}

impl RealSpectrum {
    pub fn new(levels: Vec<f64>) -> Result<Self, SpectralError> {
        if levels.len() < 2 {
            return Err(SpectralError::TooFewLevels { needed: 2, got: levels.len() });
        }
        if !levels.iter().all(|v| v.is_finite()) {
            return Err(SpectralError::NonFinite);
        }
        if let Some(index) = levels.windows(2).position(|w| w[0] > w[1]) {
            return Err(SpectralError::NotAscending { index: index + 1 });
        }
        Ok(Self { levels })
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        false // the constructor requires at least two levels
    }
}

/// Nonnegative spacings normalized to unit sample mean.
#[derive(Debug, Clone, PartialEq)]
pub struct UnfoldedSpacings {
    values: Vec<f64>,
}

impl UnfoldedSpacings {
    /// Normalize raw nonnegative spacings to sample mean 1.
    pub fn from_raw(raw: Vec<f64>) -> Result<Self, SpectralError> {
        if raw.is_empty() {
            return Err(SpectralError::EmptySpacings);
        }
        if !raw.iter().all(|v| v.is_finite()) {
            return Err(SpectralError::NonFinite);
        }
        if let Some(index) = raw.iter().position(|&v| v < 0.0) {
            return Err(SpectralError::NegativeSpacing { index });
        }
        let mean = numeric::mean(&raw);
        if mean <= 0.0 {
            return Err(SpectralError::ZeroMeanSpacings);
        }
        let values = raw.into_iter().map(|v| v / mean).collect();
        Ok(Self { values })
    }

    /// Concatenate several spacing sets and renormalize the pool.
    pub fn pool<'a, I: IntoIterator<Item = &'a UnfoldedSpacings>>(
        sets: I,
    ) -> Result<Self, SpectralError> {
        let mut all = Vec::new();
        for set in sets {
            all.extend_from_slice(&set.values);
        }
        Self::from_raw(all)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn mean(&self) -> f64 {
        numeric::mean(&self.values)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |m, &v| m.max(v))
    }
}

/// Density-normalized histogram on uniform bins starting at zero.
#[derive(Debug, Clone, PartialEq)]
pub struct HistogramDensity {
    bin_width: f64,
    bin_edges: Vec<f64>,
    density: Vec<f64>,
    n_samples: usize,
}

impl HistogramDensity {
    /// Build from explicit per-bin densities (uniform bins from zero),
    /// rescaled so the total integral is exactly 1. Intended for analytic
    /// reference histograms; data histograms come from [`histogram`].
    pub fn from_densities(
        bin_width: f64,
        density: Vec<f64>,
        n_samples: usize,
    ) -> Result<Self, SpectralError> {
        if !(bin_width.is_finite() && bin_width > 0.0) {
            return Err(SpectralError::InvalidBinWidth(bin_width));
        }
        if density.is_empty() || !density.iter().all(|v| v.is_finite() && *v >= 0.0) {
            return Err(SpectralError::EmptyHistogram);
        }
        let total: f64 = numeric::sum_compensated(density.iter().map(|d| d * bin_width));
        if total <= 0.0 {
            return Err(SpectralError::EmptyHistogram);
        }
        let density: Vec<f64> = density.into_iter().map(|d| d / total).collect();
        let bin_edges = (0..=density.len()).map(|k| k as f64 * bin_width).collect();
        Ok(Self { bin_width, bin_edges, density, n_samples })
    }

    pub fn bin_width(&self) -> f64 {
        self.bin_width
    }

    pub fn bin_edges(&self) -> &[f64] {
        &self.bin_edges
    }

    pub fn density(&self) -> &[f64] {
        &self.density
    }

    pub fn n_bins(&self) -> usize {
        self.density.len()
    }

    pub fn n_samples(&self) -> usize {
        self.n_samples
    }

    pub fn midpoint(&self, bin: usize) -> f64 {
        0.5 * (self.bin_edges[bin] + self.bin_edges[bin + 1])
    }

    /// Total integral `sum(density * bin_width)`; 1 up to rounding.
    pub fn integral(&self) -> f64 {
        numeric::sum_compensated(self.density.iter().map(|d| d * self.bin_width))
    }

    /// Midpoint of the highest-density bin.
    pub fn peak_location(&self) -> f64 {
        let mut best = 0;
        for (k, d) in self.density.iter().enumerate() {
            if *d > self.density[best] {
                best = k;
            }
        }
        self.midpoint(best)
    }
}

/// All eigenvalues of a real symmetric matrix as a spectrum. The matrix
/// must be at least 2x2, since a spectrum carries spacing information.
pub fn eigenvalues(m: &SymMatrix) -> Result<RealSpectrum, SpectralError> {
    RealSpectrum::new(eigen::symmetric_eigenvalues(m))
}

/// All eigenvalues of a complex Hermitian matrix as a spectrum.
pub fn eigenvalues_hermitian(m: &HermMatrix) -> Result<RealSpectrum, SpectralError> {
    RealSpectrum::new(eigen::hermitian_eigenvalues(m))
}

/// Result of unfolding: unit-mean spacings plus the number of spacings that
/// came out negative from the polynomial fit and were clipped to zero.
/// A clipped fraction above ~0.1% indicates the fit degree or trim is
/// inadequate for the spectrum at hand.
#[derive(Debug, Clone, PartialEq)]
pub struct Unfolded {
    pub spacings: UnfoldedSpacings,
    pub clipped: usize,
}

impl Unfolded {
    pub fn clipped_fraction(&self) -> f64 {
        self.clipped as f64 / self.spacings.len() as f64
    }
}

/// Unfold a raw spectrum: fit a degree-`degree` polynomial `N(E)` to the
/// staircase `(E_i, i)` over the interior left after trimming
/// `trim_fraction` of the levels from each edge, then take consecutive
/// differences `N(E_{i+1}) - N(E_i)` and renormalize to unit mean.
pub fn unfold(
    spectrum: &RealSpectrum,
    degree: usize,
    trim_fraction: f64,
) -> Result<Unfolded, SpectralError> {
    if degree < 1 {
        return Err(SpectralError::InvalidDegree);
    }
    if !(0.0..0.5).contains(&trim_fraction) {
        return Err(SpectralError::InvalidTrimFraction(trim_fraction));
    }
    let levels = spectrum.levels();
    let n = levels.len();
    let t = (trim_fraction * n as f64).floor() as usize;
    let kept = &levels[t..n - t];
    if kept.len() < degree + 2 {
        return Err(SpectralError::TooFewLevels { needed: degree + 2, got: kept.len() });
    }
    if kept[kept.len() - 1] == kept[0] {
        return Err(SpectralError::DegenerateSpectrum);
    }

    let counts: Vec<f64> = (t..n - t).map(|i| i as f64).collect();
    let fit = ChebyshevFit::new(kept, &counts, degree);
    let smooth: Vec<f64> = kept.iter().map(|&x| fit.eval(x)).collect();

    let mut clipped = 0usize;
    let mut raw = Vec::with_capacity(smooth.len() - 1);
    for w in smooth.windows(2) {
        let d = w[1] - w[0];
        if d < 0.0 {
            clipped += 1;
            raw.push(0.0);
        } else {
            raw.push(d);
        }
    }
    let spacings = UnfoldedSpacings::from_raw(raw)?;
    Ok(Unfolded { spacings, clipped })
}

/// Consecutive differences of a raw spectrum, renormalized to unit mean.
pub fn nn_spacings(spectrum: &RealSpectrum) -> Result<UnfoldedSpacings, SpectralError> {
    let raw: Vec<f64> = spectrum.levels().windows(2).map(|w| w[1] - w[0]).collect();
    UnfoldedSpacings::from_raw(raw)
}

/// Density-normalized histogram of spacings with uniform bins of width
/// `bin_width`, covering `[0, max + bin_width)`.
pub fn histogram(
    spacings: &UnfoldedSpacings,
    bin_width: f64,
) -> Result<HistogramDensity, SpectralError> {
    if !(bin_width.is_finite() && bin_width > 0.0) {
        return Err(SpectralError::InvalidBinWidth(bin_width));
    }
    let values = spacings.values();
    let n_bins = (spacings.max() / bin_width).floor() as usize + 1;
    let mut counts = vec![0usize; n_bins];
    for &s in values {
        let k = ((s / bin_width).floor() as usize).min(n_bins - 1);
        counts[k] += 1;
    }
    let n = values.len();
    let density: Vec<f64> =
        counts.iter().map(|&c| c as f64 / (n as f64 * bin_width)).collect();
    let bin_edges = (0..=n_bins).map(|k| k as f64 * bin_width).collect();
    Ok(HistogramDensity { bin_width, bin_edges, density, n_samples: n })
}

/// Least-squares polynomial in the Chebyshev basis on the data's own
/// interval. The basis change keeps the normal equations well conditioned
/// at degree ~7 and makes the fit exactly invariant under affine maps of
/// the abscissa.
struct ChebyshevFit {
    lo: f64,
    hi: f64,
    coeffs: Vec<f64>,
}

impl ChebyshevFit {
    fn new(xs: &[f64], ys: &[f64], degree: usize) -> Self {
        debug_assert_eq!(xs.len(), ys.len());
        let (lo, hi) = (xs[0], xs[xs.len() - 1]);
        let k = degree + 1;
        let mut gram = vec![0.0; k * k];
        let mut rhs = vec![0.0; k];
        let mut basis = vec![0.0; k];
        for (&x, &y) in xs.iter().zip(ys) {
            let t = 2.0 * (x - lo) / (hi - lo) - 1.0;
            basis[0] = 1.0;
            if k > 1 {
                basis[1] = t;
            }
            for j in 2..k {
                basis[j] = 2.0 * t * basis[j - 1] - basis[j - 2];
            }
            for i in 0..k {
                for j in i..k {
                    gram[i * k + j] += basis[i] * basis[j];
                }
                rhs[i] += basis[i] * y;
            }
        }
        for i in 0..k {
            for j in 0..i {
                gram[i * k + j] = gram[j * k + i];
            }
        }
        let coeffs = cholesky_solve(&mut gram, &mut rhs, k);
        Self { lo, hi, coeffs }
    }

    fn eval(&self, x: f64) -> f64 {
        let t = 2.0 * (x - self.lo) / (self.hi - self.lo) - 1.0;
        // Clenshaw recurrence.
        let mut b1 = 0.0;
        let mut b2 = 0.0;
        for &c in self.coeffs.iter().rev() {
            let b0 = 2.0 * t * b1 - b2 + c;
            b2 = b1;
            b1 = b0;
        }
        b1 - t * b2
    }
}

/// In-place Cholesky solve of the SPD system `G x = rhs`.
fn cholesky_solve(gram: &mut [f64], rhs: &mut [f64], k: usize) -> Vec<f64> {
    for i in 0..k {
        for j in 0..=i {
            let mut sum = gram[i * k + j];
            for m in 0..j {
                sum -= gram[i * k + m] * gram[j * k + m];
            }
            if i == j {
                assert!(sum > 0.0, "normal equations not positive definite");
                gram[i * k + i] = sum.sqrt();
            } else {
                gram[i * k + j] = sum / gram[j * k + j];
            }
        }
    }
    for i in 0..k {
        let mut sum = rhs[i];
        for m in 0..i {
            sum -= gram[i * k + m] * rhs[m];
        }
        rhs[i] = sum / gram[i * k + i];
    }
    for i in (0..k).rev() {
        let mut sum = rhs[i];
        for m in (i + 1)..k {
            sum -= gram[m * k + i] * rhs[m];
        }
        rhs[i] = sum / gram[i * k + i];
    }
    rhs.to_vec()
}


#[cfg(test)]
mod proptests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn unfolding_is_affine_invariant(scale in 0.01_f64..100.0, offset in -50.0_f64..50.0) {
            // A fixed mildly irregular spectrum under random affine maps.
            let levels: Vec<f64> = (0..120)
                .map(|i| i as f64 + 0.4 * ((i * 7 % 13) as f64 / 13.0))
                .collect();
            let base = unfold(&RealSpectrum::new(levels.clone()).unwrap(), 5, 0.05).unwrap();
            let mapped: Vec<f64> = levels.iter().map(|&x| scale * x + offset).collect();
            let moved = unfold(&RealSpectrum::new(mapped).unwrap(), 5, 0.05).unwrap();
            for (a, b) in base.spacings.values().iter().zip(moved.spacings.values()) {
                prop_assert!((a - b).abs() < 1e-9, "{a} vs {b}");
            }
        }

        #[test]
        fn normalized_spacings_have_unit_mean(raw in prop::collection::vec(0.0_f64..10.0, 2..200)) {
            prop_assume!(raw.iter().sum::<f64>() > 0.0);
            let s = UnfoldedSpacings::from_raw(raw).unwrap();
            prop_assert!((s.mean() - 1.0).abs() < 1e-12);
        }

        #[test]
        fn histogram_integrates_to_one(raw in prop::collection::vec(0.001_f64..8.0, 2..500),
                                       bin_width in 0.01_f64..1.0) {
            let s = UnfoldedSpacings::from_raw(raw).unwrap();
            let h = histogram(&s, bin_width).unwrap();
            prop_assert!((h.integral() - 1.0).abs() < 1e-12);
            prop_assert_eq!(h.n_samples(), s.len());
        }

        #[test]
        fn nn_spacing_count_is_level_count_minus_one(
            mut levels in prop::collection::vec(-100.0_f64..100.0, 3..100)
        ) {
            levels.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
            prop_assume!(levels[levels.len() - 1] > levels[0]);
            let spectrum = RealSpectrum::new(levels).unwrap();
            let s = nn_spacings(&spectrum).unwrap();
            prop_assert_eq!(s.len(), spectrum.len() - 1);
        }
    }
}
