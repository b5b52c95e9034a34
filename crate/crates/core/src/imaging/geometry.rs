use super::{ForegroundMask, GrayImage, ImagingError, PAPER};

/// Principal-axis angle of the foreground, from second-order central moments:
/// `½·atan2(2·μ11, μ20 − μ02)`, in `(−π/2, π/2]`.
///
/// Angles are in image coordinates (x right, y down), so the diagonal `y = x`
/// reads as `+π/4`. An isotropic point set returns 0.
pub fn estimate_orientation(mask: &ForegroundMask) -> Result<f64, ImagingError> {
    let n = mask.count();
    if n < 2 {
        return Err(ImagingError::TooFewPixels(n));
    }
    let (sx, sy) = mask.points().fold((0.0, 0.0), |(sx, sy), (x, y)| {
        (sx + x as f64, sy + y as f64)
    });
    let (cx, cy) = (sx / n as f64, sy / n as f64);
    let (mut mu20, mut mu02, mut mu11) = (0.0, 0.0, 0.0);
    for (x, y) in mask.points() {
        let dx = x as f64 - cx;
        let dy = y as f64 - cy;
        mu20 += dx * dx;
        mu02 += dy * dy;
        mu11 += dx * dy;
    }
    let scale = mu20 + mu02;
    let tol = 1e-9 * scale;
    if (2.0 * mu11).abs() <= tol && (mu20 - mu02).abs() <= tol {
        return Ok(0.0);
    }
    let theta = 0.5 * (2.0 * mu11).atan2(mu20 - mu02);
    // atan2 returns (−π, π]; halving keeps (−π/2, π/2].
    Ok(theta)
}

#[inline]
fn sample_bilinear(img: &GrayImage, x: f64, y: f64, fill: f64) -> f64 {
    let x0 = x.floor();
    let y0 = y.floor();
    let fx = x - x0;
    let fy = y - y0;
    let (w, h) = (img.width() as i64, img.height() as i64);
    let at = |xi: i64, yi: i64| -> f64 {
        if xi < 0 || yi < 0 || xi >= w || yi >= h {
            fill
        } else {
            img.get(xi as usize, yi as usize) as f64
        }
    };
    let (xi, yi) = (x0 as i64, y0 as i64);
    let top = at(xi, yi) * (1.0 - fx) + at(xi + 1, yi) * fx;
    let bottom = at(xi, yi + 1) * (1.0 - fx) + at(xi + 1, yi + 1) * fx;
    top * (1.0 - fy) + bottom * fy
}

#[inline]
fn to_u8(v: f64) -> u8 {
    v.round().clamp(0.0, 255.0) as u8
}

/// Rotates about the image center by `angle` radians in image coordinates
/// (the direction that adds `angle` to [`estimate_orientation`]).
///
/// Bilinear resampling; samples falling outside the source read as paper.
pub fn rotate(img: &GrayImage, angle: f64) -> GrayImage {
    if angle == 0.0 {
        return img.clone();
    }
    let (s, c) = angle.sin_cos();
    let cx = (img.width() as f64 - 1.0) / 2.0;
    let cy = (img.height() as f64 - 1.0) / 2.0;
    GrayImage::from_fn(img.width(), img.height(), |x, y| {
        let dx = x as f64 - cx;
        let dy = y as f64 - cy;
        // Inverse map: rotate the output position back by -angle.
        let sx = c * dx + s * dy + cx;
        let sy = -s * dx + c * dy + cy;
        to_u8(sample_bilinear(img, sx, sy, PAPER as f64))
    })
}

/// Bilinear resampling to exactly `target` with pixel-center alignment and
/// clamped edges.
pub fn scale_normalize(img: &GrayImage, target: (usize, usize)) -> Result<GrayImage, ImagingError> {
    let (tw, th) = target;
    if tw == 0 || th == 0 {
        return Err(ImagingError::BadTarget(tw, th));
    }
    if (tw, th) == (img.width(), img.height()) {
        return Ok(img.clone());
    }
    let rx = img.width() as f64 / tw as f64;
    let ry = img.height() as f64 / th as f64;
    let max_x = (img.width() - 1) as f64;
    let max_y = (img.height() - 1) as f64;
    Ok(GrayImage::from_fn(tw, th, |x, y| {
        let sx = ((x as f64 + 0.5) * rx - 0.5).clamp(0.0, max_x);
        let sy = ((y as f64 + 0.5) * ry - 0.5).clamp(0.0, max_y);
        to_u8(sample_bilinear(img, sx, sy, 0.0))
    }))
}

/// Crops to the bounding box of `mask`, widened by `margin` pixels and
/// clipped to the image. An empty mask returns the image unchanged.
pub fn crop_to_foreground(img: &GrayImage, mask: &ForegroundMask, margin: usize) -> GrayImage {
    let mut bounds: Option<(usize, usize, usize, usize)> = None;
    for (x, y) in mask.points() {
        bounds = Some(match bounds {
            None => (x, y, x, y),
            Some((x0, y0, x1, y1)) => (x0.min(x), y0.min(y), x1.max(x), y1.max(y)),
        });
    }
    let Some((x0, y0, x1, y1)) = bounds else {
        return img.clone();
    };
    let x0 = x0.saturating_sub(margin);
    let y0 = y0.saturating_sub(margin);
    let x1 = (x1 + margin).min(img.width() - 1);
    let y1 = (y1 + margin).min(img.height() - 1);
    GrayImage::from_fn(x1 - x0 + 1, y1 - y0 + 1, |x, y| img.get(x0 + x, y0 + y))
}
