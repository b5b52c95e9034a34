//! On-disk layouts.
//!
//! Gallery:
//!
//! ```text
//! <gallery>/gallery.siggal            "SIGGAL v1 <family> <levels> <K>"
//! <gallery>/<identity>/<sample_id>.sigfd
//! ```
//!
//! Dataset: `<root>/<identity>/<sample_id>.pgm`.

use std::fs;
use std::path::{Path, PathBuf};

use super::{check_label, Gallery, LabeledImage, RecognitionError, Template};
use crate::descriptor::{format as fdformat, DescriptorMeta};
use crate::imaging::{load_image, save_image};

pub const MANIFEST: &str = "gallery.siggal";
pub const MANIFEST_MAGIC: &str = "SIGGAL";
pub const TEMPLATE_EXT: &str = "sigfd";
pub const IMAGE_EXT: &str = "pgm";

fn manifest_line(meta: &DescriptorMeta) -> String {
    format!(
        "{MANIFEST_MAGIC} {} {}\n",
        fdformat::VERSION,
        fdformat::meta_fields(meta)
    )
}

fn parse_manifest(text: &str) -> Result<DescriptorMeta, RecognitionError> {
    let line = text.lines().next().unwrap_or("");
    let mut fields = line.split_ascii_whitespace();
    if fields.next() != Some(MANIFEST_MAGIC) || fields.next() != Some(fdformat::VERSION) {
        return Err(RecognitionError::Format(format!(
            "expected \"{MANIFEST_MAGIC} {}\" manifest, found {line:?}",
            fdformat::VERSION
        )));
    }
    Ok(fdformat::parse_meta_fields(fields)?)
}

/// Sorted subdirectories of `dir`, skipping hidden entries.
fn subdirs(dir: &Path) -> Result<Vec<(String, PathBuf)>, RecognitionError> {
    let mut out = Vec::new();
    for entry in fs::read_dir(dir)? {
        let entry = entry?;
        let name = entry.file_name().to_string_lossy().into_owned();
        if entry.file_type()?.is_dir() && !name.starts_with('.') {
            out.push((name, entry.path()));
        }
    }
    out.sort();
    Ok(out)
}

/// Sorted `(stem, path)` of files with extension `ext` in `dir`.
fn files_with_ext(dir: &Path, ext: &str) -> Result<Vec<(String, PathBuf)>, RecognitionError> {
    let mut out = Vec::new();
    for entry in fs::read_dir(dir)? {
        let path = entry?.path();
        if path.is_file() && path.extension().is_some_and(|e| e == ext) {
            if let Some(stem) = path.file_stem() {
                out.push((stem.to_string_lossy().into_owned(), path));
            }
        }
    }
    out.sort();
    Ok(out)
}

pub fn gallery_exists(dir: impl AsRef<Path>) -> bool {
    dir.as_ref().join(MANIFEST).is_file()
}

pub fn load_gallery(dir: impl AsRef<Path>) -> Result<Gallery, RecognitionError> {
    let dir = dir.as_ref();
    let meta = parse_manifest(&fs::read_to_string(dir.join(MANIFEST))?)?;
    let mut g = Gallery::new(meta);
    for (identity, sub) in subdirs(dir)? {
        for (sample_id, path) in files_with_ext(&sub, TEMPLATE_EXT)? {
            let descriptor = fdformat::from_str(&fs::read_to_string(&path)?)?;
            g.insert(Template {
                identity: identity.clone(),
                sample_id,
                descriptor,
            })?;
        }
    }
    Ok(g)
}

/// Creates an empty gallery directory with its manifest.
pub fn create_gallery(
    dir: impl AsRef<Path>,
    meta: DescriptorMeta,
) -> Result<Gallery, RecognitionError> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir)?;
    fs::write(dir.join(MANIFEST), manifest_line(&meta))?;
    Ok(Gallery::new(meta))
}

/// Writes one template file. Refuses to overwrite an existing sample.
pub fn write_template(dir: impl AsRef<Path>, t: &Template) -> Result<(), RecognitionError> {
    check_label(&t.identity)?;
    check_label(&t.sample_id)?;
    let sub = dir.as_ref().join(&t.identity);
    fs::create_dir_all(&sub)?;
    let path = sub.join(format!("{}.{TEMPLATE_EXT}", t.sample_id));
    if path.exists() {
        return Err(RecognitionError::DuplicateSample {
            identity: t.identity.clone(),
            sample_id: t.sample_id.clone(),
        });
    }
    fs::write(path, fdformat::to_string(&t.descriptor))?;
    Ok(())
}

/// Writes the manifest and every template.
pub fn save_gallery(dir: impl AsRef<Path>, g: &Gallery) -> Result<(), RecognitionError> {
    let dir = dir.as_ref();
    create_gallery(dir, g.meta())?;
    for t in g.templates() {
        write_template(dir, t)?;
    }
    Ok(())
}

pub fn load_dataset(root: impl AsRef<Path>) -> Result<Vec<LabeledImage>, RecognitionError> {
    let mut out = Vec::new();
    for (identity, sub) in subdirs(root.as_ref())? {
        check_label(&identity)?;
        for (sample_id, path) in files_with_ext(&sub, IMAGE_EXT)? {
            out.push(LabeledImage {
                identity: identity.clone(),
                sample_id,
                image: load_image(&path)?,
            });
        }
    }
    Ok(out)
}

pub fn save_dataset(root: impl AsRef<Path>, set: &[LabeledImage]) -> Result<(), RecognitionError> {
    let root = root.as_ref();
    for s in set {
        check_label(&s.identity)?;
        check_label(&s.sample_id)?;
        let sub = root.join(&s.identity);
        fs::create_dir_all(&sub)?;
        save_image(sub.join(format!("{}.{IMAGE_EXT}", s.sample_id)), &s.image)?;
    }
    Ok(())
}
