use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, NumAssignOps};

/// Real scalar used by the numeric stages (wavelet, Fourier, metrics).
///
/// Implemented for `f32` and `f64`. The tolerances quoted throughout the
/// test-suite assume `f64`.
pub trait Real:
    Float + FloatConst + NumAssignOps + Sum + Debug + Display + Send + Sync + 'static
{
    /// Converts an `f64` literal; exact for `f64`, rounded for `f32`.
    #[inline]
    fn lit(v: f64) -> Self {
        Self::from(v).unwrap()
    }

    #[inline]
    fn from_usize(v: usize) -> Self {
        Self::from(v).unwrap()
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl<T> Real for T where
    T: Float + FloatConst + NumAssignOps + Sum + Debug + Display + Send + Sync + 'static
{
}
