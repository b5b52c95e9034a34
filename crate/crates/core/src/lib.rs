//! Offline signature recognition with multi-scale Fourier descriptors.
//!
//! A scanned signature is denoised, slant- and scale-normalized, decomposed
//! with a multi-level 2D wavelet transform, and the coarsest approximation is
//! turned into a Fourier-magnitude feature vector that does not change under
//! a circular shift, amplitude scaling or constant offset of the coefficient
//! sequence. Probes are matched against an enrolled gallery under one of
//! seven distance measures.
//!
//! The numeric stages are generic over [`Real`] (`f32` or `f64`); the
//! aliases below fix the `f64` instantiation used by the gallery, the file
//! formats and the command line.

pub mod cli;
pub mod descriptor;
pub mod imaging;
pub mod metrics;
pub mod plane;
pub mod recognition;
pub mod scalar;
pub mod wavelet;

pub use descriptor::{extract_features, DescriptorMeta, PipelineConfig};
pub use imaging::{GrayImage, PreprocessConfig};
pub use metrics::{distance, DistanceMeasure};
pub use plane::Plane;
pub use scalar::Real;
pub use wavelet::WaveletFamily;

pub type Plane64 = plane::Plane<f64>;
pub type Plane32 = plane::Plane<f32>;
pub type Decomposition64 = wavelet::WaveletDecomposition<f64>;
pub type Decomposition32 = wavelet::WaveletDecomposition<f32>;
pub type FilterPair64 = wavelet::FilterPair<f64>;
pub type Descriptor64 = descriptor::FourierDescriptor<f64>;
pub type Descriptor32 = descriptor::FourierDescriptor<f32>;
pub type Sequence64 = descriptor::CoefficientSequence<f64>;
pub type Coefficients64 = descriptor::FourierCoefficients<f64>;
