use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{identify_descriptor, Gallery, LabeledImage, RecognitionError, Template};
use crate::descriptor::{extract_features, FourierDescriptor, PipelineConfig};
use crate::metrics::{DistanceMeasure, DEFAULT_MINKOWSKI_P};
use crate::wavelet::WaveletFamily;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Protocol {
    /// Templates enrolled per identity; the rest are probes.
    pub train_per_identity: usize,
    pub seed: u64,
}

impl Default for Protocol {
    fn default() -> Self {
        Self {
            train_per_identity: 12,
            seed: 7,
        }
    }
}

/// Rank-1 recognition rates, `rates[measure][family]`, in percent.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub measures: Vec<DistanceMeasure>,
    pub families: Vec<WaveletFamily>,
    pub rates: Vec<Vec<f64>>,
    pub protocol: Protocol,
    pub identities: usize,
    /// Probes per identity, smallest over identities.
    pub test_per_identity: usize,
    pub probes: usize,
    pub warnings: Vec<String>,
}

impl EvalReport {
    pub fn rate(&self, m: DistanceMeasure, f: WaveletFamily) -> Option<f64> {
        let i = self.measures.iter().position(|&x| x == m)?;
        let j = self.families.iter().position(|&x| x == f)?;
        Some(self.rates[i][j])
    }

    /// CSV in table layout: measure rows, family columns, one decimal.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("Distance measures");
        for f in &self.families {
            write!(out, ",{}", f.label()).unwrap();
        }
        out.push('\n');
        for (m, row) in self.measures.iter().zip(&self.rates) {
            match m {
                DistanceMeasure::Minkowski { p } if *p != DEFAULT_MINKOWSKI_P => {
                    write!(out, "{} (p={p})", m.label()).unwrap()
                }
                _ => out.push_str(m.label()),
            }
            for r in row {
                write!(out, ",{r:.1}").unwrap();
            }
            out.push('\n');
        }
        out
    }
}

struct Split<'a> {
    train: Vec<&'a LabeledImage>,
    test: Vec<&'a LabeledImage>,
    identities: usize,
    test_per_identity: usize,
}

fn split<'a>(
    dataset: &'a [LabeledImage],
    protocol: &Protocol,
) -> Result<Split<'a>, RecognitionError> {
    let mut by_id: BTreeMap<&str, Vec<&LabeledImage>> = BTreeMap::new();
    for s in dataset {
        by_id.entry(s.identity.as_str()).or_default().push(s);
    }
    let k = protocol.train_per_identity;
    let mut rng = ChaCha8Rng::seed_from_u64(protocol.seed);
    let (mut train, mut test) = (Vec::new(), Vec::new());
    let mut test_per_identity = usize::MAX;
    for (id, mut samples) in by_id.iter().map(|(id, s)| (*id, s.clone())) {
        if samples.len() <= k {
            return Err(RecognitionError::InsufficientSamples {
                identity: id.to_string(),
                have: samples.len(),
                train_k: k,
            });
        }
        // Input order must not matter.
        samples.sort_by(|a, b| a.sample_id.cmp(&b.sample_id));
        samples.shuffle(&mut rng);
        test_per_identity = test_per_identity.min(samples.len() - k);
        train.extend_from_slice(&samples[..k]);
        test.extend_from_slice(&samples[k..]);
    }
    Ok(Split {
        train,
        test,
        identities: by_id.len(),
        test_per_identity: if by_id.is_empty() {
            0
        } else {
            test_per_identity
        },
    })
}

/// Enrolls `protocol.train_per_identity` seeded-random samples per identity
/// and identifies the rest, for every (measure, family) cell.
///
/// Features are extracted once per family and image, in parallel; results
/// do not depend on scheduling.
pub fn evaluate(
    dataset: &[LabeledImage],
    measures: &[DistanceMeasure],
    families: &[WaveletFamily],
    protocol: &Protocol,
    base: &PipelineConfig,
) -> Result<EvalReport, RecognitionError> {
    if protocol.train_per_identity == 0 {
        return Err(RecognitionError::InvalidSpec(
            "train count must be at least 1".into(),
        ));
    }
    let split = split(dataset, protocol)?;
    let mut warnings = Vec::new();
    if split.identities == 1 {
        warnings.push("degenerate protocol: a single identity always matches".to_string());
    }

    let mut rates = vec![vec![0.0; families.len()]; measures.len()];
    for (j, &family) in families.iter().enumerate() {
        let cfg = PipelineConfig { family, ..*base };
        let extract =
            |set: &[&LabeledImage]| -> Result<Vec<FourierDescriptor<f64>>, RecognitionError> {
                set.par_iter()
                    .map(|s| extract_features(&s.image, &cfg).map_err(RecognitionError::from))
                    .collect()
            };
        let train_fd = extract(&split.train)?;
        let test_fd = extract(&split.test)?;

        let mut gallery = Gallery::new(cfg.meta());
        for (s, fd) in split.train.iter().zip(train_fd) {
            gallery.insert(Template {
                identity: s.identity.clone(),
                sample_id: s.sample_id.clone(),
                descriptor: fd,
            })?;
        }

        let cells: Vec<f64> = measures
            .par_iter()
            .map(|&m| {
                let mut correct = 0usize;
                for (s, fd) in split.test.iter().zip(&test_fd) {
                    if identify_descriptor(&gallery, fd, m)?.best_identity == s.identity {
                        correct += 1;
                    }
                }
                Ok(if split.test.is_empty() {
                    0.0
                } else {
                    100.0 * correct as f64 / split.test.len() as f64
                })
            })
            .collect::<Result<_, RecognitionError>>()?;
        for (i, r) in cells.into_iter().enumerate() {
            rates[i][j] = r;
        }
    }

    Ok(EvalReport {
        measures: measures.to_vec(),
        families: families.to_vec(),
        rates,
        protocol: *protocol,
        identities: split.identities,
        test_per_identity: split.test_per_identity,
        probes: split.test.len(),
        warnings,
    })
}
