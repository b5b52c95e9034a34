//! Multi-level separable 2D discrete wavelet transform with periodic
//! boundaries, for the Haar, Daubechies (2, 8, 15) and Symlet-8 families.

mod dwt;
mod taps;

pub use dwt::{
    dwt2_level, dwt2_multi, dwt2_multi_plane, idwt2, DetailBands, Subbands, WaveletDecomposition,
};

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::scalar::Real;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WaveletError {
    #[error("OddDimension: plane {0}x{1} cannot be split in half")]
    OddDimension(usize, usize),
    #[error("BadLevels: {width}x{height} input does not support {levels} dyadic levels")]
    BadLevels {
        width: usize,
        height: usize,
        levels: usize,
    },
    #[error("MalformedDecomposition: {0}")]
    MalformedDecomposition(String),
    #[error("UnknownFamily: {0:?}")]
    UnknownFamily(String),
}

impl WaveletError {
    pub fn name(&self) -> &'static str {
        match self {
            Self::OddDimension(..) => "OddDimension",
            Self::BadLevels { .. } => "BadLevels",
            Self::MalformedDecomposition(_) => "MalformedDecomposition",
            Self::UnknownFamily(_) => "UnknownFamily",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum WaveletFamily {
    Haar,
    Db2,
    Db8,
    Db15,
    Sym8,
}

impl WaveletFamily {
    pub const ALL: [WaveletFamily; 5] = [Self::Haar, Self::Db2, Self::Db8, Self::Db15, Self::Sym8];

    /// Number of vanishing moments; the filters have twice as many taps.
    pub fn vanishing_moments(self) -> usize {
        match self {
            Self::Haar => 1,
            Self::Db2 => 2,
            Self::Db8 | Self::Sym8 => 8,
            Self::Db15 => 15,
        }
    }

    /// Lower-case token used on the command line and in file headers.
    pub fn token(self) -> &'static str {
        match self {
            Self::Haar => "haar",
            Self::Db2 => "db2",
            Self::Db8 => "db8",
            Self::Db15 => "db15",
            Self::Sym8 => "sym8",
        }
    }

    /// Column label used in report tables.
    pub fn label(self) -> &'static str {
        match self {
            Self::Haar => "haar",
            Self::Db2 => "DB2",
            Self::Db8 => "DB8",
            Self::Db15 => "DB15",
            Self::Sym8 => "Sym8",
        }
    }

    fn scaling_taps(self) -> &'static [f64] {
        match self {
            Self::Haar => &taps::HAAR,
            Self::Db2 => &taps::DB2,
            Self::Db8 => &taps::DB8,
            Self::Db15 => &taps::DB15,
            Self::Sym8 => &taps::SYM8,
        }
    }
}

impl fmt::Display for WaveletFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for WaveletFamily {
    type Err = WaveletError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.to_ascii_lowercase();
        Self::ALL
            .into_iter()
            .find(|f| f.token() == lower)
            .ok_or_else(|| WaveletError::UnknownFamily(s.to_string()))
    }
}

/// Orthonormal analysis filter pair.
#[derive(Debug, Clone, PartialEq)]
pub struct FilterPair<T> {
    pub lowpass: Vec<T>,
    pub highpass: Vec<T>,
}

/// Analysis filters for `family`. The highpass is the quadrature mirror of
/// the lowpass: `g[k] = (−1)^k · h[L−1−k]`.
pub fn analysis_filters<T: Real>(family: WaveletFamily) -> FilterPair<T> {
    let h = family.scaling_taps();
    let len = h.len();
    let lowpass = h.iter().map(|&v| T::lit(v)).collect();
    let highpass = (0..len)
        .map(|k| {
            let v = h[len - 1 - k];
            T::lit(if k % 2 == 0 { v } else { -v })
        })
        .collect();
    FilterPair { lowpass, highpass }
}
