//! Line-oriented text format for feature vectors:
//!
//! ```text
//! SIGFD v1 <family> <levels> <K>
//! <magnitude 1>
//! ...
//! <magnitude K>
//! ```
//!
//! Magnitudes use the shortest decimal form that parses back to the same
//! `f64`, so a write/read cycle is bit-exact.

use std::fmt::Write as _;

use super::{DescriptorError, DescriptorMeta, FourierDescriptor};

pub const MAGIC: &str = "SIGFD";
pub const VERSION: &str = "v1";

pub(crate) fn meta_fields(meta: &DescriptorMeta) -> String {
    format!("{} {} {}", meta.family.token(), meta.levels, meta.retained)
}

pub(crate) fn parse_meta_fields<'a>(
    mut fields: impl Iterator<Item = &'a str>,
) -> Result<DescriptorMeta, DescriptorError> {
    let bad = |what: &str| DescriptorError::Format(format!("bad {what} in header"));
    let family = fields
        .next()
        .ok_or_else(|| bad("family"))?
        .parse()
        .map_err(|_| bad("family"))?;
    let levels = fields
        .next()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| bad("levels"))?;
    let retained = fields
        .next()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| bad("retained count"))?;
    if fields.next().is_some() {
        return Err(DescriptorError::Format("trailing header fields".into()));
    }
    Ok(DescriptorMeta {
        family,
        levels,
        retained,
    })
}

pub fn to_string(fd: &FourierDescriptor<f64>) -> String {
    let mut out = format!("{MAGIC} {VERSION} {}\n", meta_fields(&fd.meta));
    for m in &fd.magnitudes {
        writeln!(out, "{m:?}").unwrap();
    }
    out
}

pub fn from_str(text: &str) -> Result<FourierDescriptor<f64>, DescriptorError> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| DescriptorError::Format("empty descriptor file".into()))?;
    let mut fields = header.split_ascii_whitespace();
    if fields.next() != Some(MAGIC) || fields.next() != Some(VERSION) {
        return Err(DescriptorError::Format(format!(
            "expected \"{MAGIC} {VERSION}\" header, found {header:?}"
        )));
    }
    let meta = parse_meta_fields(fields)?;
    let magnitudes = lines
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            l.trim()
                .parse::<f64>()
                .map_err(|_| DescriptorError::Format(format!("bad magnitude {l:?}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if magnitudes.len() != meta.retained {
        return Err(DescriptorError::Format(format!(
            "header declares {} magnitudes, found {}",
            meta.retained,
            magnitudes.len()
        )));
    }
    if magnitudes.iter().any(|m| !m.is_finite() || *m < 0.0) {
        return Err(DescriptorError::Format(
            "magnitudes must be finite and non-negative".into(),
        ));
    }
    Ok(FourierDescriptor { magnitudes, meta })
}
