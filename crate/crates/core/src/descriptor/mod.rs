//! Multi-scale Fourier descriptors.
//!
//! The coarsest wavelet approximation plane is scanned row-major into a real
//! sequence `u(t)` of length `N`, transformed with
//!
//! ```text
//! a_n = (1/N) · Σ_t u(t) · exp(−j·2π·n·t / N)
//! ```
//!
//! and normalized as `b_n = a_n / a_1` for `n = 2..=K+1`. The descriptor is
//! `|b_n|`.
//!
//! A circular shift of `u` multiplies `a_n` by `exp(j·2π·n·s/N)`, an amplitude
//! change multiplies every `a_n` by the same positive factor and a constant
//! offset only touches `a_0`. Dividing by the first harmonic leaves a residual
//! phase `exp(j·(n−1)·…)` that the magnitude removes, so `|b_n|` is unchanged
//! by all three. Dividing by `a_0` instead, which the textbook form of the
//! normalization writes, would not cancel the start-point phase and would
//! make the feature depend on the background level.

mod fft;
pub mod format;

pub use fft::fft_in_place;

use num_complex::Complex;
use thiserror::Error;

use crate::imaging::{preprocess, GrayImage, ImagingError, PreprocessConfig};
use crate::scalar::Real;
use crate::wavelet::{dwt2_multi, WaveletDecomposition, WaveletError, WaveletFamily};

/// Magnitude of `a_1` at or below which a sample has no usable normalizer.
pub const DEGENERATE_EPS: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum DescriptorError {
    #[error("BadLength: sequence length {0} must be a power of two and at least 4")]
    BadLength(usize),
    #[error("BadRetained: retained count {k} must lie in 2..={max}")]
    BadRetained { k: usize, max: usize },
    #[error("DegenerateDescriptor: first harmonic magnitude {0:e} is too small to normalize by")]
    Degenerate(f64),
    #[error("FormatError: {0}")]
    Format(String),
    #[error(transparent)]
    Imaging(#[from] ImagingError),
    #[error(transparent)]
    Wavelet(#[from] WaveletError),
}

impl DescriptorError {
    pub fn name(&self) -> &'static str {
        match self {
            Self::BadLength(_) => "BadLength",
            Self::BadRetained { .. } => "BadRetained",
            Self::Degenerate(_) => "DegenerateDescriptor",
            Self::Format(_) => "FormatError",
            Self::Imaging(e) => e.name(),
            Self::Wavelet(e) => e.name(),
        }
    }

    /// Pipeline stage that produced the error.
    pub fn stage(&self) -> &'static str {
        match self {
            Self::Imaging(_) => "preprocess",
            Self::Wavelet(_) => "wavelet",
            _ => "descriptor",
        }
    }
}

/// Serialized wavelet coefficients `u(t)`; length is a power of two, ≥ 4.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientSequence<T> {
    values: Vec<T>,
}

impl<T: Real> CoefficientSequence<T> {
    pub fn new(values: Vec<T>) -> Result<Self, DescriptorError> {
        let n = values.len();
        if n < 4 || !n.is_power_of_two() {
            return Err(DescriptorError::BadLength(n));
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// `a_n` for `n = 0..N`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierCoefficients<T> {
    pub coeffs: Vec<Complex<T>>,
}

/// What a descriptor was computed with. Descriptors are only comparable when
/// their metas are equal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DescriptorMeta {
    pub family: WaveletFamily,
    pub levels: usize,
    /// Number of retained magnitudes, `K`.
    pub retained: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FourierDescriptor<T> {
    pub magnitudes: Vec<T>,
    pub meta: DescriptorMeta,
}

/// Record of a similarity transform: rotation `φ` (radians), positive scale
/// `c`, translation in pixels and a start-point shift of the sequence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimilarityTransform {
    pub rotation: f64,
    pub scale: f64,
    pub translation: (f64, f64),
    pub start_shift: i64,
}

impl Default for SimilarityTransform {
    fn default() -> Self {
        Self {
            rotation: 0.0,
            scale: 1.0,
            translation: (0.0, 0.0),
            start_shift: 0,
        }
    }
}

/// Row-major scan of the coarsest approximation plane.
pub fn serialize_coefficients<T: Real>(
    dec: &WaveletDecomposition<T>,
) -> Result<CoefficientSequence<T>, DescriptorError> {
    CoefficientSequence::new(dec.approx.data().to_vec())
}

/// Forward DFT with the `1/N` factor, evaluated by FFT.
pub fn dft<T: Real>(u: &CoefficientSequence<T>) -> FourierCoefficients<T> {
    let n = T::from_usize(u.len());
    let mut buf: Vec<Complex<T>> = u
        .values()
        .iter()
        .map(|&v| Complex::new(v, T::zero()))
        .collect();
    fft_in_place(&mut buf);
    for c in &mut buf {
        *c /= n;
    }
    FourierCoefficients { coeffs: buf }
}

/// `|a_n / a_1|` for `n = 2..=K+1`, where `K = meta.retained`.
pub fn normalize_descriptor<T: Real>(
    a: &FourierCoefficients<T>,
    meta: DescriptorMeta,
) -> Result<FourierDescriptor<T>, DescriptorError> {
    let n = a.coeffs.len();
    let k = meta.retained;
    let max = n.saturating_sub(2);
    if k < 2 || k > max {
        return Err(DescriptorError::BadRetained { k, max });
    }
    let norm = a.coeffs[1].norm();
    if norm.is_nan() || norm <= T::lit(DEGENERATE_EPS) {
        return Err(DescriptorError::Degenerate(norm.to_f64_lossy()));
    }
    let magnitudes = a.coeffs[2..k + 2].iter().map(|c| c.norm() / norm).collect();
    Ok(FourierDescriptor { magnitudes, meta })
}

/// Full feature-extraction configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PipelineConfig {
    pub preprocess: PreprocessConfig,
    pub family: WaveletFamily,
    pub levels: usize,
    pub retained: usize,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            preprocess: PreprocessConfig::default(),
            family: WaveletFamily::Sym8,
            levels: 3,
            retained: 64,
        }
    }
}

impl PipelineConfig {
    pub fn meta(&self) -> DescriptorMeta {
        DescriptorMeta {
            family: self.family,
            levels: self.levels,
            retained: self.retained,
        }
    }

    pub fn with_meta(mut self, meta: DescriptorMeta) -> Self {
        self.family = meta.family;
        self.levels = meta.levels;
        self.retained = meta.retained;
        self
    }
}

/// preprocess → multi-level DWT → serialize → DFT → normalize.
pub fn extract_features<T: Real>(
    img: &GrayImage,
    cfg: &PipelineConfig,
) -> Result<FourierDescriptor<T>, DescriptorError> {
    let pre = preprocess(img, &cfg.preprocess)?;
    let dec = dwt2_multi::<T>(&pre, cfg.family, cfg.levels)?;
    let u = serialize_coefficients(&dec)?;
    normalize_descriptor(&dft(&u), cfg.meta())
}
