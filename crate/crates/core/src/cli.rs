//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage error, 2 data or processing error. Results
//! go to `out`, diagnostics to `err`.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::descriptor::PipelineConfig;
use crate::imaging::{load_image, preprocess, save_image, PreprocessConfig};
use crate::metrics::{DistanceMeasure, MetricError};
use crate::recognition::{
    self, evaluate, generate_synthetic, identify, store, verify, Protocol, RecognitionError,
    SynthSpec, Template,
};
use crate::wavelet::{dwt2_multi, WaveletFamily};

#[derive(Debug, Parser)]
#[command(
    name = "sigfd",
    version,
    about = "Offline signature recognition with multi-scale Fourier descriptors"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Enroll one or more images of an identity; sample ids are the file stems.
    Enroll {
        gallery: PathBuf,
        identity: String,
        #[arg(required = true)]
        images: Vec<PathBuf>,
        #[command(flatten)]
        pipeline: PipelineArgs,
    },
    /// Print the best-matching identity and its distance.
    Identify {
        gallery: PathBuf,
        image: PathBuf,
        #[command(flatten)]
        measure: MeasureArgs,
        #[command(flatten)]
        pipeline: PipelineArgs,
        /// Also print the full per-identity ranking.
        #[arg(long)]
        ranking: bool,
        /// Write the probe's wavelet subbands as PGM files into this directory.
        #[arg(long, value_name = "DIR")]
        dump_subbands: Option<PathBuf>,
    },
    /// Decide genuine or forgery against a claimed identity.
    Verify {
        gallery: PathBuf,
        identity: String,
        image: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        threshold: f64,
        #[command(flatten)]
        measure: MeasureArgs,
        #[command(flatten)]
        pipeline: PipelineArgs,
    },
    /// Recognition-rate table over distance measures and wavelet families.
    Evaluate {
        dataset_root: PathBuf,
        /// Comma-separated measure names; all seven by default.
        #[arg(long, value_delimiter = ',')]
        measures: Vec<String>,
        /// Exponent for minkowski.
        #[arg(long)]
        p: Option<f64>,
        /// Comma-separated family names; all five by default.
        #[arg(long, value_delimiter = ',')]
        families: Vec<String>,
        #[arg(long, default_value_t = 12)]
        train_k: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Write the CSV here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        pipeline: PipelineArgs,
    },
    /// Generate a synthetic dataset as <out-root>/<identity>/<sample>.pgm.
    Synth {
        out_root: PathBuf,
        #[arg(long, default_value_t = 18)]
        identities: usize,
        #[arg(long, default_value_t = 24)]
        samples: usize,
        #[arg(long, default_value_t = 2024)]
        seed: u64,
        /// Rotation half-range in degrees.
        #[arg(long, default_value_t = 10.0)]
        rotation: f64,
        #[arg(long, default_value_t = 0.9)]
        scale_min: f64,
        #[arg(long, default_value_t = 1.1)]
        scale_max: f64,
        /// Translation half-range in pixels.
        #[arg(long, default_value_t = 12.0)]
        translation: f64,
        /// Salt-and-pepper fraction.
        #[arg(long, default_value_t = 0.02)]
        noise: f64,
        /// Control-point jitter half-range in pixels.
        #[arg(long, default_value_t = 1.5)]
        jitter: f64,
        #[arg(long, value_parser = parse_size, default_value = "256x256")]
        canvas: (usize, usize),
    },
}

#[derive(Debug, Args)]
struct MeasureArgs {
    #[arg(long, default_value = "manhattan")]
    measure: String,
    /// Exponent for minkowski.
    #[arg(long)]
    p: Option<f64>,
}

#[derive(Debug, Args)]
struct PipelineArgs {
    #[arg(long, default_value = "sym8")]
    family: String,
    #[arg(long, default_value_t = 3)]
    levels: usize,
    /// Retained Fourier magnitudes.
    #[arg(long = "k", default_value_t = 64)]
    retained: usize,
    #[arg(long, default_value_t = 3)]
    median_window: usize,
    #[arg(long, value_parser = parse_size, default_value = "256x256")]
    target_size: (usize, usize),
    /// Skip slant normalization.
    #[arg(long)]
    no_slant: bool,
    /// Crop to the ink bounding box before scale normalization.
    #[arg(long)]
    crop: bool,
    /// Fixed binarization threshold instead of Otsu.
    #[arg(long)]
    binarize_threshold: Option<u8>,
}

fn parse_size(s: &str) -> Result<(usize, usize), String> {
    let (w, h) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("expected WIDTHxHEIGHT, got {s:?}"))?;
    let w = w
        .trim()
        .parse()
        .map_err(|_| format!("bad width in {s:?}"))?;
    let h = h
        .trim()
        .parse()
        .map_err(|_| format!("bad height in {s:?}"))?;
    Ok((w, h))
}

/// A failure with the pipeline stage it happened in.
struct Failure {
    stage: String,
    error: RecognitionError,
}

impl Failure {
    fn new(stage: impl Into<String>, error: impl Into<RecognitionError>) -> Self {
        Self {
            stage: stage.into(),
            error: error.into(),
        }
    }
}

/// Usage problems found after clap parsing (bad measure or family names).
struct Usage(String);

enum Exit {
    Usage(Usage),
    Failure(Failure),
}

impl From<Failure> for Exit {
    fn from(f: Failure) -> Self {
        Exit::Failure(f)
    }
}

impl From<Usage> for Exit {
    fn from(u: Usage) -> Self {
        Exit::Usage(u)
    }
}

fn family(name: &str) -> Result<WaveletFamily, Usage> {
    name.parse().map_err(|e| Usage(format!("{e}")))
}

fn measure(name: &str, p: Option<f64>) -> Result<DistanceMeasure, Usage> {
    let m: DistanceMeasure = name
        .trim()
        .parse()
        .map_err(|e: MetricError| Usage(e.to_string()))?;
    match (m, p) {
        (DistanceMeasure::Minkowski { .. }, Some(p)) => {
            DistanceMeasure::minkowski(p).map_err(|e| Usage(e.to_string()))
        }
        _ => Ok(m),
    }
}

impl PipelineArgs {
    fn config(&self) -> Result<PipelineConfig, Usage> {
        let cfg = PipelineConfig {
            preprocess: PreprocessConfig {
                median_window: self.median_window,
                target_size: self.target_size,
                slant_enabled: !self.no_slant,
                crop_to_foreground: self.crop,
                binarize_threshold: self.binarize_threshold,
            },
            family: family(&self.family)?,
            levels: self.levels,
            retained: self.retained,
        };
        cfg.preprocess
            .validate()
            .map_err(|e| Usage(e.to_string()))?;
        Ok(cfg)
    }
}

fn sample_id(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

fn display(path: &Path) -> String {
    path.display().to_string()
}

fn cmd_enroll(
    out: &mut dyn Write,
    gallery: &Path,
    identity: &str,
    images: &[PathBuf],
    cfg: &PipelineConfig,
) -> Result<(), Exit> {
    let g = if store::gallery_exists(gallery) {
        store::load_gallery(gallery).map_err(|e| Failure::new("load gallery", e))?
    } else {
        recognition::Gallery::new(cfg.meta())
    };
    if g.meta() != cfg.meta() {
        return Err(Failure::new(
            "enroll",
            RecognitionError::MetaMismatch {
                expected: g.meta(),
                found: cfg.meta(),
            },
        )
        .into());
    }

    // Extract everything first so a bad image leaves the gallery untouched.
    let mut next = g.clone();
    for path in images {
        let img =
            load_image(path).map_err(|e| Failure::new(format!("load {}", display(path)), e))?;
        next = recognition::enroll(&next, identity, &sample_id(path), &img, cfg).map_err(|e| {
            let stage = format!("enroll {} ({})", display(path), e.stage());
            Failure::new(stage, e)
        })?;
    }

    if !store::gallery_exists(gallery) {
        store::create_gallery(gallery, cfg.meta())
            .map_err(|e| Failure::new("create gallery", e))?;
    }
    let added: Vec<&Template> = next.templates()[g.len()..].iter().collect();
    for t in added {
        store::write_template(gallery, t).map_err(|e| Failure::new("write gallery", e))?;
        writeln!(out, "enrolled {}/{}", t.identity, t.sample_id).ok();
    }
    Ok(())
}

fn dump_subbands(
    dir: &Path,
    img: &crate::imaging::GrayImage,
    cfg: &PipelineConfig,
) -> Result<(), Failure> {
    let stage = "dump subbands";
    let pre = preprocess(img, &cfg.preprocess).map_err(|e| Failure::new(stage, e))?;
    let dec = dwt2_multi::<f64>(&pre, cfg.family, cfg.levels)
        .map_err(|e| Failure::new(stage, crate::descriptor::DescriptorError::from(e)))?;
    fs::create_dir_all(dir).map_err(|e| Failure::new(stage, e))?;
    let write = |name: String, plane: &crate::plane::Plane<f64>| {
        save_image(dir.join(name), &plane.to_image()).map_err(|e| Failure::new(stage, e))
    };
    write(
        "preprocessed.pgm".into(),
        &crate::plane::Plane::from_image(&pre),
    )?;
    write(format!("approx_L{}.pgm", dec.levels()), &dec.approx)?;
    for (j, d) in dec.details.iter().enumerate() {
        write(format!("H_L{}.pgm", j + 1), &d.horizontal)?;
        write(format!("V_L{}.pgm", j + 1), &d.vertical)?;
        write(format!("D_L{}.pgm", j + 1), &d.diagonal)?;
    }
    Ok(())
}

fn execute(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), Exit> {
    match cli.command {
        Command::Enroll {
            gallery,
            identity,
            images,
            pipeline,
        } => cmd_enroll(out, &gallery, &identity, &images, &pipeline.config()?),

        Command::Identify {
            gallery,
            image,
            measure: m,
            pipeline,
            ranking,
            dump_subbands: dump,
        } => {
            let m = measure(&m.measure, m.p)?;
            let cfg = pipeline.config()?;
            let g = store::load_gallery(&gallery).map_err(|e| Failure::new("load gallery", e))?;
            let cfg = cfg.with_meta(g.meta());
            let probe = load_image(&image)
                .map_err(|e| Failure::new(format!("load {}", display(&image)), e))?;
            if let Some(dir) = dump {
                dump_subbands(&dir, &probe, &cfg)?;
            }
            let r = identify(&g, &probe, m, &cfg).map_err(|e| {
                let stage = format!("identify ({})", e.stage());
                Failure::new(stage, e)
            })?;
            writeln!(out, "{} {:.6}", r.best_identity, r.best_distance).ok();
            if ranking {
                for (rank, (id, d)) in r.ranking.iter().enumerate() {
                    writeln!(out, "{:>4} {id} {d:.6}", rank + 1).ok();
                }
            }
            Ok(())
        }

        Command::Verify {
            gallery,
            identity,
            image,
            threshold,
            measure: m,
            pipeline,
        } => {
            let m = measure(&m.measure, m.p)?;
            let cfg = pipeline.config()?;
            let g = store::load_gallery(&gallery).map_err(|e| Failure::new("load gallery", e))?;
            let cfg = cfg.with_meta(g.meta());
            let probe = load_image(&image)
                .map_err(|e| Failure::new(format!("load {}", display(&image)), e))?;
            let v = verify(&g, &identity, &probe, m, threshold, &cfg).map_err(|e| {
                let stage = format!("verify ({})", e.stage());
                Failure::new(stage, e)
            })?;
            writeln!(out, "{} {:.6}", v.decision.as_str(), v.distance).ok();
            Ok(())
        }

        Command::Evaluate {
            dataset_root,
            measures,
            p,
            families,
            train_k,
            seed,
            out: out_path,
            pipeline,
        } => {
            let measures = if measures.is_empty() {
                DistanceMeasure::ALL
                    .iter()
                    .map(|m| measure(m.token(), p))
                    .collect::<Result<Vec<_>, _>>()?
            } else {
                measures
                    .iter()
                    .map(|s| measure(s, p))
                    .collect::<Result<Vec<_>, _>>()?
            };
            let families = if families.is_empty() {
                WaveletFamily::ALL.to_vec()
            } else {
                families
                    .iter()
                    .map(|s| family(s.trim()))
                    .collect::<Result<Vec<_>, _>>()?
            };
            let cfg = pipeline.config()?;
            let data =
                store::load_dataset(&dataset_root).map_err(|e| Failure::new("load dataset", e))?;
            let protocol = Protocol {
                train_per_identity: train_k,
                seed,
            };
            let report = evaluate(&data, &measures, &families, &protocol, &cfg).map_err(|e| {
                let stage = format!("evaluate ({})", e.stage());
                Failure::new(stage, e)
            })?;
            for w in &report.warnings {
                writeln!(err, "warning: {w}").ok();
            }
            writeln!(
                err,
                "protocol: {} identities, {} train / >= {} test per identity, {} probes, seed {}",
                report.identities,
                protocol.train_per_identity,
                report.test_per_identity,
                report.probes,
                protocol.seed
            )
            .ok();
            let csv = report.to_csv();
            match out_path {
                Some(path) => fs::write(&path, csv).map_err(|e| Failure::new("write report", e))?,
                None => out
                    .write_all(csv.as_bytes())
                    .map_err(|e| Failure::new("write report", e))?,
            }
            Ok(())
        }

        Command::Synth {
            out_root,
            identities,
            samples,
            seed,
            rotation,
            scale_min,
            scale_max,
            translation,
            noise,
            jitter,
            canvas,
        } => {
            let spec = SynthSpec {
                n_identities: identities,
                samples_per_identity: samples,
                rotation_deg: rotation,
                scale: (scale_min, scale_max),
                translation,
                noise,
                jitter,
                canvas,
                seed,
            };
            let set = generate_synthetic(&spec).map_err(|e| Failure::new("synth", e))?;
            store::save_dataset(&out_root, &set).map_err(|e| Failure::new("write dataset", e))?;
            writeln!(
                out,
                "wrote {} images for {} identities to {}",
                set.len(),
                identities,
                display(&out_root)
            )
            .ok();
            Ok(())
        }
    }
}

/// Runs the CLI on `args` (including the program name) and returns the exit
/// code.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    write!(out, "{rendered}").ok();
                    0
                }
                _ => {
                    write!(err, "{rendered}").ok();
                    1
                }
            };
        }
    };
    match execute(cli, out, err) {
        Ok(()) => 0,
        Err(Exit::Usage(Usage(msg))) => {
            writeln!(err, "usage error: {msg}").ok();
            1
        }
        Err(Exit::Failure(Failure { stage, error })) => {
            writeln!(err, "error: {stage}: {error}").ok();
            2
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(args.iter().copied(), &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn size_parser() {
        assert_eq!(parse_size("256x128"), Ok((256, 128)));
        assert!(parse_size("256").is_err());
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(run_capture(&["sigfd"]).0, 1);
        assert_eq!(run_capture(&["sigfd", "frobnicate"]).0, 1);
        let (code, _, err) =
            run_capture(&["sigfd", "identify", "g", "p.pgm", "--measure", "cosine"]);
        assert_eq!(code, 1);
        assert!(err.contains("UnknownMeasure"));
        let (code, _, _) =
            run_capture(&["sigfd", "enroll", "g", "a", "x.pgm", "--family", "coif1"]);
        assert_eq!(code, 1);
    }

    #[test]
    fn help_exits_zero() {
        let (code, out, _) = run_capture(&["sigfd", "--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("evaluate"));
    }

    #[test]
    fn missing_gallery_is_data_error() {
        let dir = tempfile::tempdir().unwrap();
        let g = dir.path().join("nope");
        let (code, _, err) = run_capture(&["sigfd", "identify", g.to_str().unwrap(), "p.pgm"]);
        assert_eq!(code, 2);
        assert!(err.starts_with("error: load gallery: IoError"), "{err}");
    }
}
