//! Image ingestion and the preprocessing chain: median denoising,
//! binarization, slant (orientation) normalization and scale normalization.

mod filter;
mod geometry;
pub mod pgm;

pub use filter::{binarize, median_filter, otsu_threshold, Binarization};
pub use geometry::{crop_to_foreground, estimate_orientation, rotate, scale_normalize};
pub use pgm::{load_image, read_pgm, save_image, write_pgm};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ImagingError {
    #[error("IoError: {0}")]
    Io(#[from] std::io::Error),
    #[error("FormatError: {0}")]
    Format(String),
    #[error("BadWindow: median window must be odd and >= 1, got {0}")]
    BadWindow(usize),
    #[error("TooFewPixels: orientation needs at least 2 foreground pixels, got {0}")]
    TooFewPixels(usize),
    #[error("BadTarget: target size must be non-zero, got {0}x{1}")]
    BadTarget(usize, usize),
    #[error("InvalidDimensions: {width}x{height} image with {len} pixels")]
    InvalidDimensions {
        width: usize,
        height: usize,
        len: usize,
    },
    #[error("InvalidConfig: {0}")]
    InvalidConfig(String),
}

impl ImagingError {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Io(_) => "IoError",
            Self::Format(_) => "FormatError",
            Self::BadWindow(_) => "BadWindow",
            Self::TooFewPixels(_) => "TooFewPixels",
            Self::BadTarget(..) => "BadTarget",
            Self::InvalidDimensions { .. } => "InvalidDimensions",
            Self::InvalidConfig(_) => "InvalidConfig",
        }
    }
}

/// Intensity of blank paper.
pub const PAPER: u8 = 255;

/// 8-bit grayscale raster, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GrayImage {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self, ImagingError> {
        if width == 0 || height == 0 || pixels.len() != width * height {
            return Err(ImagingError::InvalidDimensions {
                width,
                height,
                len: pixels.len(),
            });
        }
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    /// # Panics
    ///
    /// If either dimension is zero.
    pub fn filled(width: usize, height: usize, value: u8) -> Self {
        assert!(width > 0 && height > 0, "image dimensions must be non-zero");
        Self {
            width,
            height,
            pixels: vec![value; width * height],
        }
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> u8) -> Self {
        assert!(width > 0 && height > 0, "image dimensions must be non-zero");
        let mut pixels = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                pixels.push(f(x, y));
            }
        }
        Self {
            width,
            height,
            pixels,
        }
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.pixels[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, v: u8) {
        self.pixels[y * self.width + x] = v;
    }

    pub fn into_pixels(self) -> Vec<u8> {
        self.pixels
    }
}

/// Boolean raster, `true` marks ink.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForegroundMask {
    width: usize,
    height: usize,
    bits: Vec<bool>,
}

impl ForegroundMask {
    pub fn new(width: usize, height: usize, bits: Vec<bool>) -> Result<Self, ImagingError> {
        if width == 0 || height == 0 || bits.len() != width * height {
            return Err(ImagingError::InvalidDimensions {
                width,
                height,
                len: bits.len(),
            });
        }
        Ok(Self {
            width,
            height,
            bits,
        })
    }

    /// Mask with the given pixel coordinates set.
    pub fn from_points(
        width: usize,
        height: usize,
        points: impl IntoIterator<Item = (usize, usize)>,
    ) -> Self {
        let mut bits = vec![false; width * height];
        for (x, y) in points {
            bits[y * width + x] = true;
        }
        Self {
            width,
            height,
            bits,
        }
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> bool {
        self.bits[y * self.width + x]
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// Coordinates `(x, y)` of all foreground pixels in row-major order.
    pub fn points(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.bits
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(move |(i, _)| (i % self.width, i / self.width))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PreprocessConfig {
    /// Odd side length of the square median window.
    pub median_window: usize,
    /// Output `(width, height)`; both powers of two.
    pub target_size: (usize, usize),
    pub slant_enabled: bool,
    /// Crop to the ink bounding box before scaling to `target_size`.
    pub crop_to_foreground: bool,
    /// Fixed binarization threshold; Otsu when `None`.
    pub binarize_threshold: Option<u8>,
}

impl Default for PreprocessConfig {
    fn default() -> Self {
        Self {
            median_window: 3,
            target_size: (256, 256),
            slant_enabled: true,
            crop_to_foreground: false,
            binarize_threshold: None,
        }
    }
}

impl PreprocessConfig {
    pub fn validate(&self) -> Result<(), ImagingError> {
        if self.median_window == 0 || self.median_window.is_multiple_of(2) {
            return Err(ImagingError::BadWindow(self.median_window));
        }
        let (w, h) = self.target_size;
        if !w.is_power_of_two() || !h.is_power_of_two() {
            return Err(ImagingError::InvalidConfig(format!(
                "target size {w}x{h} must be powers of two"
            )));
        }
        Ok(())
    }
}

/// Ink bounding-box margin, in pixels, kept around the cropped signature.
const CROP_MARGIN: usize = 2;

/// Runs the full chain: median filter, binarize (orientation only), rotate
/// the filtered grayscale by the negated slant, optionally crop to the ink
/// and resample to `cfg.target_size`.
///
/// Images without ink pass through unrotated and uncropped.
pub fn preprocess(img: &GrayImage, cfg: &PreprocessConfig) -> Result<GrayImage, ImagingError> {
    cfg.validate()?;
    let filtered = median_filter(img, cfg.median_window)?;
    let bin = binarize(&filtered, cfg.binarize_threshold);

    let mut work = filtered;
    if cfg.slant_enabled && !bin.degenerate && bin.mask.count() >= 2 {
        let theta = estimate_orientation(&bin.mask)?;
        if theta != 0.0 {
            work = rotate(&work, -theta);
        }
    }

    if cfg.crop_to_foreground && !bin.degenerate {
        // Re-threshold with the original level so rotation blur does not
        // shift the cut.
        let mask = binarize(&work, Some(bin.threshold)).mask;
        if mask.count() > 0 {
            work = crop_to_foreground(&work, &mask, CROP_MARGIN);
        }
    }

    let (tw, th) = cfg.target_size;
    scale_normalize(&work, (tw, th))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn stroke(angle_deg: f64, size: usize) -> GrayImage {
        let (s, c) = angle_deg.to_radians().sin_cos();
        let cx = size as f64 / 2.0;
        GrayImage::from_fn(size, size, |x, y| {
            let dx = x as f64 - cx;
            let dy = y as f64 - cx;
            let along = dx * c + dy * s;
            let across = -dx * s + dy * c;
            if along.abs() < size as f64 * 0.35 && across.abs() < 3.0 {
                20
            } else {
                PAPER
            }
        })
    }

    #[test]
    fn config_rejects_even_window_and_non_pow2_target() {
        let mut cfg = PreprocessConfig {
            median_window: 4,
            ..Default::default()
        };
        assert!(matches!(cfg.validate(), Err(ImagingError::BadWindow(4))));
        cfg.median_window = 3;
        cfg.target_size = (200, 256);
        assert!(matches!(
            cfg.validate(),
            Err(ImagingError::InvalidConfig(_))
        ));
    }

    #[test]
    fn horizontal_full_frame_image_is_near_identity() {
        let img = GrayImage::from_fn(
            256,
            256,
            |_, y| if (100..110).contains(&y) { 10 } else { 250 },
        );
        let cfg = PreprocessConfig {
            crop_to_foreground: false,
            ..Default::default()
        };
        let out = preprocess(&img, &cfg).unwrap();
        for (a, b) in img.pixels().iter().zip(out.pixels()) {
            assert!((*a as i32 - *b as i32).abs() <= 1);
        }
    }

    #[test]
    fn slanted_stroke_is_levelled() {
        let img = stroke(30.0, 200);
        let out = preprocess(&img, &PreprocessConfig::default()).unwrap();
        assert_eq!((out.width(), out.height()), (256, 256));
        let theta = estimate_orientation(&binarize(&out, None).mask).unwrap();
        assert!(
            theta.to_degrees().abs() < 1.0,
            "residual slant {}",
            theta.to_degrees()
        );
    }

    #[test]
    fn salt_noise_on_constant_image_is_removed() {
        let mut img = GrayImage::filled(64, 64, 200);
        for i in (0..64 * 64).step_by(37) {
            img.set(i % 64, i / 64, if i % 2 == 0 { 0 } else { 255 });
        }
        let out = preprocess(&img, &PreprocessConfig::default()).unwrap();
        assert!(out.pixels().iter().all(|&p| p == 200));
    }

    #[test]
    fn blank_page_passes_through() {
        let img = GrayImage::filled(100, 60, PAPER);
        let out = preprocess(&img, &PreprocessConfig::default()).unwrap();
        assert_eq!((out.width(), out.height()), (256, 256));
        assert!(out.pixels().iter().all(|&p| p == PAPER));
    }

    #[test]
    fn output_always_has_target_size() {
        let cfg = PreprocessConfig {
            target_size: (64, 32),
            ..Default::default()
        };
        for angle in [-40.0, 0.0, 15.0] {
            let out = preprocess(&stroke(angle, 90), &cfg).unwrap();
            assert_eq!((out.width(), out.height()), (64, 32));
        }
    }
}
