//! Distance measures between feature vectors. Lower always means more
//! similar, including the two similarity-based measures, which are negated.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::scalar::Real;

#[derive(Debug, Error, PartialEq)]
pub enum MetricError {
    #[error("LengthMismatch: vectors of length {0} and {1}")]
    LengthMismatch(usize, usize),
    #[error("DegenerateInput: {0}")]
    DegenerateInput(&'static str),
    #[error("UnknownMeasure: {0:?}")]
    UnknownMeasure(String),
    #[error("BadExponent: Minkowski p must be positive and finite, got {0}")]
    BadExponent(f64),
}

impl MetricError {
    pub fn name(&self) -> &'static str {
        match self {
            Self::LengthMismatch(..) => "LengthMismatch",
            Self::DegenerateInput(_) => "DegenerateInput",
            Self::UnknownMeasure(_) => "UnknownMeasure",
            Self::BadExponent(_) => "BadExponent",
        }
    }
}

pub const DEFAULT_MINKOWSKI_P: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DistanceMeasure {
    /// `(Σ|xᵢ−yᵢ|^p)^{1/p}`
    Minkowski { p: f64 },
    /// `Σ|xᵢ−yᵢ|`
    Manhattan,
    /// `√Σ(xᵢ−yᵢ)²`
    Euclidean,
    /// `−cos(X, Y)`
    AngleBased,
    /// `−r(X, Y)`, Pearson correlation.
    CorrelationBased,
    /// `Σ|xᵢ−yᵢ| / (Σ|xᵢ|·Σ|yᵢ|)`
    ModifiedManhattan,
    /// `Σ(xᵢ−yᵢ)² / (Σxᵢ²·Σyᵢ²)`
    ModifiedSse,
}

impl DistanceMeasure {
    /// All seven measures in report order, Minkowski at the default `p`.
    pub const ALL: [DistanceMeasure; 7] = [
        Self::Minkowski {
            p: DEFAULT_MINKOWSKI_P,
        },
        Self::Manhattan,
        Self::Euclidean,
        Self::AngleBased,
        Self::CorrelationBased,
        Self::ModifiedManhattan,
        Self::ModifiedSse,
    ];

    pub fn minkowski(p: f64) -> Result<Self, MetricError> {
        if p > 0.0 && p.is_finite() {
            Ok(Self::Minkowski { p })
        } else {
            Err(MetricError::BadExponent(p))
        }
    }

    /// Command-line name.
    pub fn token(&self) -> &'static str {
        match self {
            Self::Minkowski { .. } => "minkowski",
            Self::Manhattan => "manhattan",
            Self::Euclidean => "euclidean",
            Self::AngleBased => "angle",
            Self::CorrelationBased => "correlation",
            Self::ModifiedManhattan => "mod-manhattan",
            Self::ModifiedSse => "mod-sse",
        }
    }

    /// Row label used in report tables.
    pub fn label(&self) -> &'static str {
        match self {
            Self::Minkowski { .. } => "Minkowski distance",
            Self::Manhattan => "Manhattan distance",
            Self::Euclidean => "Euclidean distance",
            Self::AngleBased => "Angle-based distance",
            Self::CorrelationBased => "Correlation coefficient-based distance",
            Self::ModifiedManhattan => "Modified Manhattan distance",
            Self::ModifiedSse => "Modified SSE-based distance",
        }
    }

    /// Whether `d(X, X) = 0` (true for the L_p family and the two modified
    /// measures).
    pub fn is_zero_at_identity(&self) -> bool {
        !matches!(self, Self::AngleBased | Self::CorrelationBased)
    }
}

impl fmt::Display for DistanceMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Minkowski { p } => write!(f, "minkowski(p={p})"),
            other => f.write_str(other.token()),
        }
    }
}

impl FromStr for DistanceMeasure {
    type Err = MetricError;

    /// Parses a command-line name; `minkowski` takes the default `p`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "minkowski" => Self::Minkowski {
                p: DEFAULT_MINKOWSKI_P,
            },
            "manhattan" => Self::Manhattan,
            "euclidean" => Self::Euclidean,
            "angle" => Self::AngleBased,
            "correlation" => Self::CorrelationBased,
            "mod-manhattan" => Self::ModifiedManhattan,
            "mod-sse" => Self::ModifiedSse,
            _ => return Err(MetricError::UnknownMeasure(s.to_string())),
        })
    }
}

fn clamp_unit<T: Real>(v: T) -> T {
    v.max(-T::one()).min(T::one())
}

pub fn distance<T: Real>(m: DistanceMeasure, x: &[T], y: &[T]) -> Result<T, MetricError> {
    if x.len() != y.len() {
        return Err(MetricError::LengthMismatch(x.len(), y.len()));
    }
    if x.is_empty() {
        return Err(MetricError::DegenerateInput("empty vectors"));
    }
    let pairs = || x.iter().zip(y).map(|(&a, &b)| (a, b));
    let sum_abs_diff = || pairs().map(|(a, b)| (a - b).abs()).sum::<T>();
    let sum_sq_diff = || pairs().map(|(a, b)| (a - b) * (a - b)).sum::<T>();

    let d = match m {
        DistanceMeasure::Minkowski { p } => {
            if !(p > 0.0 && p.is_finite()) {
                return Err(MetricError::BadExponent(p));
            }
            let p = T::lit(p);
            pairs()
                .map(|(a, b)| (a - b).abs().powf(p))
                .sum::<T>()
                .powf(p.recip())
        }
        DistanceMeasure::Manhattan => sum_abs_diff(),
        DistanceMeasure::Euclidean => sum_sq_diff().sqrt(),
        DistanceMeasure::AngleBased => {
            let xy: T = pairs().map(|(a, b)| a * b).sum();
            let xx: T = x.iter().map(|&a| a * a).sum();
            let yy: T = y.iter().map(|&b| b * b).sum();
            if xx == T::zero() || yy == T::zero() {
                return Err(MetricError::DegenerateInput("angle of a zero vector"));
            }
            -clamp_unit(xy / (xx * yy).sqrt())
        }
        DistanceMeasure::CorrelationBased => {
            let constant = |v: &[T]| v.iter().all(|&a| a == v[0]);
            if constant(x) || constant(y) {
                return Err(MetricError::DegenerateInput(
                    "correlation of a constant vector",
                ));
            }
            let n = T::from_usize(x.len());
            let sx: T = x.iter().copied().sum();
            let sy: T = y.iter().copied().sum();
            let sxy: T = pairs().map(|(a, b)| a * b).sum();
            let sxx: T = x.iter().map(|&a| a * a).sum();
            let syy: T = y.iter().map(|&b| b * b).sum();
            let vx = sxx - sx * sx / n;
            let vy = syy - sy * sy / n;
            if !(vx > T::zero() && vy > T::zero()) {
                return Err(MetricError::DegenerateInput(
                    "correlation of a constant vector",
                ));
            }
            -clamp_unit((sxy - sx * sy / n) / (vx * vy).sqrt())
        }
        DistanceMeasure::ModifiedManhattan => {
            let denom = x.iter().map(|a| a.abs()).sum::<T>() * y.iter().map(|b| b.abs()).sum::<T>();
            if denom == T::zero() {
                return Err(MetricError::DegenerateInput(
                    "modified Manhattan of a zero vector",
                ));
            }
            sum_abs_diff() / denom
        }
        DistanceMeasure::ModifiedSse => {
            let denom = x.iter().map(|&a| a * a).sum::<T>() * y.iter().map(|&b| b * b).sum::<T>();
            if denom == T::zero() {
                return Err(MetricError::DegenerateInput(
                    "modified SSE of a zero vector",
                ));
            }
            sum_sq_diff() / denom
        }
    };
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(m: DistanceMeasure, x: &[f64], y: &[f64]) -> f64 {
        distance(m, x, y).unwrap()
    }

    #[test]
    fn identical_vectors() {
        let x = [0.3, 1.5, 2.25, 0.1];
        for m in DistanceMeasure::ALL {
            let expect = if m.is_zero_at_identity() { 0.0 } else { -1.0 };
            assert!((d(m, &x, &x) - expect).abs() < 1e-12, "{m}");
        }
    }

    #[test]
    fn worked_values() {
        assert_eq!(d(DistanceMeasure::Euclidean, &[0.0, 0.0], &[3.0, 4.0]), 5.0);
        assert_eq!(
            d(
                DistanceMeasure::Manhattan,
                &[1.0, 2.0, 3.0],
                &[2.0, 4.0, 6.0]
            ),
            6.0
        );
        assert_eq!(
            d(DistanceMeasure::ModifiedManhattan, &[1.0, 1.0], &[2.0, 2.0]),
            0.25
        );
        assert_eq!(
            d(DistanceMeasure::ModifiedSse, &[1.0, 0.0], &[0.0, 1.0]),
            2.0
        );
        let x = [1.0, -2.0, 0.5];
        let y: Vec<f64> = x.iter().map(|v| 7.0 * v).collect();
        assert!((d(DistanceMeasure::AngleBased, &x, &y) + 1.0).abs() < 1e-15);
    }

    #[test]
    fn minkowski_three_by_hand() {
        // |1|^3 + |2|^3 = 9
        let v = d(
            DistanceMeasure::Minkowski { p: 3.0 },
            &[0.0, 0.0],
            &[1.0, 2.0],
        );
        assert!((v - 9f64.cbrt()).abs() < 1e-15);
    }

    #[test]
    fn errors() {
        assert_eq!(
            distance(DistanceMeasure::Manhattan, &[1.0], &[1.0, 2.0]),
            Err(MetricError::LengthMismatch(1, 2))
        );
        assert!(matches!(
            distance(DistanceMeasure::AngleBased, &[0.0, 0.0], &[1.0, 2.0]),
            Err(MetricError::DegenerateInput(_))
        ));
        assert!(matches!(
            distance(DistanceMeasure::CorrelationBased, &[1.0, 1.0], &[1.0, 2.0]),
            Err(MetricError::DegenerateInput(_))
        ));
        assert!(matches!(
            distance(DistanceMeasure::ModifiedSse, &[0.0, 0.0], &[1.0, 2.0]),
            Err(MetricError::DegenerateInput(_))
        ));
        assert!(matches!(
            distance(DistanceMeasure::ModifiedManhattan, &[1.0], &[0.0]),
            Err(MetricError::DegenerateInput(_))
        ));
        assert!(DistanceMeasure::minkowski(0.0).is_err());
    }

    #[test]
    fn names_parse() {
        for m in DistanceMeasure::ALL {
            assert_eq!(m.token().parse::<DistanceMeasure>().unwrap(), m);
        }
        assert!("chebyshev".parse::<DistanceMeasure>().is_err());
    }

    #[test]
    fn correlation_is_affine_invariant() {
        let x = [0.2, 1.4, 0.9, 3.3, 2.0];
        let y = [1.1, 0.4, 2.9, 0.3, 1.0];
        let y2: Vec<f64> = y.iter().map(|v| 2.5 * v + 4.0).collect();
        let a = d(DistanceMeasure::CorrelationBased, &x, &y);
        let b = d(DistanceMeasure::CorrelationBased, &x, &y2);
        assert!((a - b).abs() < 1e-9);
    }
}
