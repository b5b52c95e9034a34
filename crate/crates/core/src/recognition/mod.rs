//! Gallery enrollment, nearest-neighbor identification, thresholded
//! verification, the evaluation harness and the synthetic dataset generator.

mod eval;
pub mod store;
mod synth;

pub use eval::{evaluate, EvalReport, Protocol};
pub use synth::{generate_synthetic, render_sample, LabeledImage, PseudoSignature, SynthSpec};

use std::collections::BTreeMap;

use thiserror::Error;

use crate::descriptor::{
    extract_features, DescriptorError, DescriptorMeta, FourierDescriptor, PipelineConfig,
};
use crate::imaging::{GrayImage, ImagingError};
use crate::metrics::{distance, DistanceMeasure, MetricError};

#[derive(Debug, Error)]
pub enum RecognitionError {
    #[error("MetaMismatch: expected {expected:?}, found {found:?}")]
    MetaMismatch {
        expected: DescriptorMeta,
        found: DescriptorMeta,
    },
    #[error("DuplicateSample: {identity}/{sample_id} is already enrolled")]
    DuplicateSample { identity: String, sample_id: String },
    #[error("EmptyGallery: nothing is enrolled")]
    EmptyGallery,
    #[error("UnknownIdentity: {0:?} is not enrolled")]
    UnknownIdentity(String),
    #[error(
        "InsufficientSamples: identity {identity:?} has {have} samples, needs more than {train_k}"
    )]
    InsufficientSamples {
        identity: String,
        have: usize,
        train_k: usize,
    },
    #[error("InvalidLabel: {0:?} cannot be used as an identity or sample id")]
    InvalidLabel(String),
    #[error("InvalidSpec: {0}")]
    InvalidSpec(String),
    #[error("FormatError: {0}")]
    Format(String),
    #[error("IoError: {0}")]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Descriptor(#[from] DescriptorError),
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    Imaging(#[from] ImagingError),
}

impl RecognitionError {
    pub fn name(&self) -> &'static str {
        match self {
            Self::MetaMismatch { .. } => "MetaMismatch",
            Self::DuplicateSample { .. } => "DuplicateSample",
            Self::EmptyGallery => "EmptyGallery",
            Self::UnknownIdentity(_) => "UnknownIdentity",
            Self::InsufficientSamples { .. } => "InsufficientSamples",
            Self::InvalidLabel(_) => "InvalidLabel",
            Self::InvalidSpec(_) => "InvalidSpec",
            Self::Format(_) => "FormatError",
            Self::Io(_) => "IoError",
            Self::Descriptor(e) => e.name(),
            Self::Metric(e) => e.name(),
            Self::Imaging(e) => e.name(),
        }
    }

    /// Pipeline stage that produced the error.
    pub fn stage(&self) -> &'static str {
        match self {
            Self::Descriptor(e) => e.stage(),
            Self::Metric(_) => "matching",
            Self::Imaging(_) => "image input",
            Self::Io(_) | Self::Format(_) => "storage",
            Self::InsufficientSamples { .. } => "evaluation",
            Self::InvalidSpec(_) => "synthesis",
            _ => "gallery",
        }
    }
}

/// Labels become directory and file names on disk.
pub(crate) fn check_label(label: &str) -> Result<(), RecognitionError> {
    let ok = !label.is_empty()
        && !label.starts_with('.')
        && !label
            .chars()
            .any(|c| c == '/' || c == '\\' || c.is_whitespace() || c.is_control());
    if ok {
        Ok(())
    } else {
        Err(RecognitionError::InvalidLabel(label.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Template {
    pub identity: String,
    pub sample_id: String,
    pub descriptor: FourierDescriptor<f64>,
}

/// Immutable set of enrolled templates sharing one descriptor meta.
/// Enrollment returns a new gallery.
#[derive(Debug, Clone, PartialEq)]
pub struct Gallery {
    meta: DescriptorMeta,
    templates: Vec<Template>,
}

impl Gallery {
    pub fn new(meta: DescriptorMeta) -> Self {
        Self {
            meta,
            templates: Vec::new(),
        }
    }

    pub fn meta(&self) -> DescriptorMeta {
        self.meta
    }

    pub fn templates(&self) -> &[Template] {
        &self.templates
    }

    pub fn len(&self) -> usize {
        self.templates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.templates.is_empty()
    }

    pub fn contains_identity(&self, identity: &str) -> bool {
        self.templates.iter().any(|t| t.identity == identity)
    }

    /// Returns a copy with `template` added.
    pub fn with_template(&self, template: Template) -> Result<Self, RecognitionError> {
        let mut next = self.clone();
        next.insert(template)?;
        Ok(next)
    }

    pub(crate) fn insert(&mut self, template: Template) -> Result<(), RecognitionError> {
        check_label(&template.identity)?;
        check_label(&template.sample_id)?;
        if template.descriptor.meta != self.meta {
            return Err(RecognitionError::MetaMismatch {
                expected: self.meta,
                found: template.descriptor.meta,
            });
        }
        if self
            .templates
            .iter()
            .any(|t| t.identity == template.identity && t.sample_id == template.sample_id)
        {
            return Err(RecognitionError::DuplicateSample {
                identity: template.identity,
                sample_id: template.sample_id,
            });
        }
        self.templates.push(template);
        Ok(())
    }
}

/// Extracts features from `img` and returns the gallery with one more
/// template. On any error the input gallery is untouched.
pub fn enroll(
    g: &Gallery,
    identity: &str,
    sample_id: &str,
    img: &GrayImage,
    cfg: &PipelineConfig,
) -> Result<Gallery, RecognitionError> {
    if cfg.meta() != g.meta {
        return Err(RecognitionError::MetaMismatch {
            expected: g.meta,
            found: cfg.meta(),
        });
    }
    check_label(identity)?;
    check_label(sample_id)?;
    let descriptor = extract_features(img, cfg)?;
    g.with_template(Template {
        identity: identity.to_string(),
        sample_id: sample_id.to_string(),
        descriptor,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatchResult {
    pub best_identity: String,
    pub best_distance: f64,
    /// Per-identity nearest-template distances, ascending; ties by label.
    pub ranking: Vec<(String, f64)>,
}

/// Per-identity minimum distance from `probe` over the gallery.
fn per_identity_minima<'g>(
    g: &'g Gallery,
    probe: &FourierDescriptor<f64>,
    m: DistanceMeasure,
) -> Result<BTreeMap<&'g str, f64>, RecognitionError> {
    if probe.meta != g.meta {
        return Err(RecognitionError::MetaMismatch {
            expected: g.meta,
            found: probe.meta,
        });
    }
    let mut best: BTreeMap<&str, f64> = BTreeMap::new();
    for t in &g.templates {
        let d = distance(m, &probe.magnitudes, &t.descriptor.magnitudes)?;
        best.entry(t.identity.as_str())
            .and_modify(|cur| {
                if d < *cur {
                    *cur = d
                }
            })
            .or_insert(d);
    }
    Ok(best)
}

pub fn identify_descriptor(
    g: &Gallery,
    probe: &FourierDescriptor<f64>,
    m: DistanceMeasure,
) -> Result<MatchResult, RecognitionError> {
    if g.is_empty() {
        return Err(RecognitionError::EmptyGallery);
    }
    let minima = per_identity_minima(g, probe, m)?;
    let mut ranking: Vec<(String, f64)> = minima
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect();
    // BTreeMap order is lexicographic and the sort is stable, so equal
    // distances keep the smaller label first.
    ranking.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (best_identity, best_distance) = ranking[0].clone();
    Ok(MatchResult {
        best_identity,
        best_distance,
        ranking,
    })
}

pub fn identify(
    g: &Gallery,
    probe: &GrayImage,
    m: DistanceMeasure,
    cfg: &PipelineConfig,
) -> Result<MatchResult, RecognitionError> {
    if g.is_empty() {
        return Err(RecognitionError::EmptyGallery);
    }
    let fd = extract_features(probe, &cfg.with_meta(g.meta))?;
    identify_descriptor(g, &fd, m)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decision {
    Genuine,
    Forgery,
}

impl Decision {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Genuine => "genuine",
            Self::Forgery => "forgery",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Verification {
    pub decision: Decision,
    pub distance: f64,
}

pub fn verify_descriptor(
    g: &Gallery,
    claimed: &str,
    probe: &FourierDescriptor<f64>,
    m: DistanceMeasure,
    threshold: f64,
) -> Result<Verification, RecognitionError> {
    if !g.contains_identity(claimed) {
        return Err(RecognitionError::UnknownIdentity(claimed.to_string()));
    }
    let distance = per_identity_minima(g, probe, m)?[claimed];
    let decision = if distance <= threshold {
        Decision::Genuine
    } else {
        Decision::Forgery
    };
    Ok(Verification { decision, distance })
}

/// Genuine iff the nearest template of `claimed` lies within `threshold`.
pub fn verify(
    g: &Gallery,
    claimed: &str,
    probe: &GrayImage,
    m: DistanceMeasure,
    threshold: f64,
    cfg: &PipelineConfig,
) -> Result<Verification, RecognitionError> {
    if !g.contains_identity(claimed) {
        return Err(RecognitionError::UnknownIdentity(claimed.to_string()));
    }
    let fd = extract_features(probe, &cfg.with_meta(g.meta))?;
    verify_descriptor(g, claimed, &fd, m, threshold)
}
