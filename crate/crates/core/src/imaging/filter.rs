use super::{ForegroundMask, GrayImage, ImagingError};

/// Square median filter with edge-replicated borders.
pub fn median_filter(img: &GrayImage, window: usize) -> Result<GrayImage, ImagingError> {
    if window == 0 || window.is_multiple_of(2) {
        return Err(ImagingError::BadWindow(window));
    }
    if window == 1 {
        return Ok(img.clone());
    }
    let r = (window / 2) as isize;
    let (w, h) = (img.width() as isize, img.height() as isize);
    let mut buf = Vec::with_capacity(window * window);
    let mut out = Vec::with_capacity(img.pixels().len());
    for y in 0..h {
        for x in 0..w {
            buf.clear();
            for dy in -r..=r {
                let sy = (y + dy).clamp(0, h - 1) as usize;
                for dx in -r..=r {
                    let sx = (x + dx).clamp(0, w - 1) as usize;
                    buf.push(img.get(sx, sy));
                }
            }
            let mid = buf.len() / 2;
            let (_, m, _) = buf.select_nth_unstable(mid);
            out.push(*m);
        }
    }
    GrayImage::new(img.width(), img.height(), out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Binarization {
    pub mask: ForegroundMask,
    /// Pixels strictly below this level are ink.
    pub threshold: u8,
    /// Set when every pixel has the same intensity; the mask is then empty.
    pub degenerate: bool,
}

/// Otsu's threshold: the level `t` maximizing the between-class variance of
/// the split `{p < t}` / `{p >= t}`.
///
/// When several levels share the maximum (an empty histogram gap) the middle
/// of that run is returned. `None` for a single-valued histogram.
pub fn otsu_threshold(img: &GrayImage) -> Option<u8> {
    let mut hist = [0u64; 256];
    for &p in img.pixels() {
        hist[p as usize] += 1;
    }
    let total = img.pixels().len() as f64;
    let sum_all: f64 = hist
        .iter()
        .enumerate()
        .map(|(i, &c)| i as f64 * c as f64)
        .sum();

    let mut best = f64::NEG_INFINITY;
    let mut first = 0usize;
    let mut last = 0usize;
    let (mut count_lo, mut sum_lo) = (0.0f64, 0.0f64);
    for t in 1..=255usize {
        count_lo += hist[t - 1] as f64;
        sum_lo += (t - 1) as f64 * hist[t - 1] as f64;
        let count_hi = total - count_lo;
        if count_lo == 0.0 || count_hi == 0.0 {
            continue;
        }
        let mean_lo = sum_lo / count_lo;
        let mean_hi = (sum_all - sum_lo) / count_hi;
        let var = count_lo * count_hi * (mean_lo - mean_hi).powi(2);
        // Relative tolerance so plateaus are detected despite rounding.
        if var > best * (1.0 + 1e-12) {
            best = var;
            first = t;
            last = t;
        } else if (var - best).abs() <= best * 1e-12 && last == t - 1 {
            last = t;
        }
    }
    if best == f64::NEG_INFINITY {
        None
    } else {
        Some(((first + last) / 2) as u8)
    }
}

/// Splits ink (dark) from paper. With `threshold == None` the level comes
/// from [`otsu_threshold`].
pub fn binarize(img: &GrayImage, threshold: Option<u8>) -> Binarization {
    let first = img.pixels()[0];
    let degenerate = img.pixels().iter().all(|&p| p == first);
    let threshold = match threshold {
        Some(t) => t,
        None if degenerate => 0,
        None => otsu_threshold(img).unwrap_or(0),
    };
    let bits = img.pixels().iter().map(|&p| p < threshold).collect();
    Binarization {
        mask: ForegroundMask::new(img.width(), img.height(), bits).expect("same dimensions"),
        threshold,
        degenerate,
    }
}
