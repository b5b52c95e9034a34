use super::{analysis_filters, FilterPair, WaveletError, WaveletFamily};
use crate::imaging::GrayImage;
use crate::plane::Plane;
use crate::scalar::Real;

/// The three detail subbands of one level.
#[derive(Debug, Clone, PartialEq)]
pub struct DetailBands<T> {
    /// Row lowpass, column highpass (LH).
    pub horizontal: Plane<T>,
    /// Row highpass, column lowpass (HL).
    pub vertical: Plane<T>,
    /// Highpass both ways (HH).
    pub diagonal: Plane<T>,
}

/// Output of a single analysis step.
#[derive(Debug, Clone, PartialEq)]
pub struct Subbands<T> {
    pub approx: Plane<T>,
    pub details: DetailBands<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WaveletDecomposition<T> {
    pub family: WaveletFamily,
    /// Coarsest approximation, after `levels` steps.
    pub approx: Plane<T>,
    /// `details[j - 1]` holds level `j`; level 1 is the finest.
    pub details: Vec<DetailBands<T>>,
}

impl<T: Real> WaveletDecomposition<T> {
    pub fn levels(&self) -> usize {
        self.details.len()
    }
}

// One periodic analysis pass over a strided 1D signal. Keeps even phases:
// out_lo[i] = Σ h[k]·x[(2i + k) mod n].
fn analyze_line<T: Real>(input: &[T], lo: &mut [T], hi: &mut [T], f: &FilterPair<T>) {
    let n = input.len();
    for i in 0..n / 2 {
        let (mut a, mut d) = (T::zero(), T::zero());
        for (k, (&h, &g)) in f.lowpass.iter().zip(&f.highpass).enumerate() {
            let x = input[(2 * i + k) % n];
            a += h * x;
            d += g * x;
        }
        lo[i] = a;
        hi[i] = d;
    }
}

// Adjoint of `analyze_line`.
fn synthesize_line<T: Real>(lo: &[T], hi: &[T], out: &mut [T], f: &FilterPair<T>) {
    let n = out.len();
    out.iter_mut().for_each(|v| *v = T::zero());
    for i in 0..n / 2 {
        for (k, (&h, &g)) in f.lowpass.iter().zip(&f.highpass).enumerate() {
            out[(2 * i + k) % n] += h * lo[i] + g * hi[i];
        }
    }
}

/// One separable analysis level: rows first, then columns.
pub fn dwt2_level<T: Real>(
    plane: &Plane<T>,
    filters: &FilterPair<T>,
) -> Result<Subbands<T>, WaveletError> {
    let (w, h) = (plane.width(), plane.height());
    if w % 2 != 0 || h % 2 != 0 || w == 0 || h == 0 {
        return Err(WaveletError::OddDimension(w, h));
    }
    let (hw, hh) = (w / 2, h / 2);

    let mut row_lo = Plane::zeros(hw, h);
    let mut row_hi = Plane::zeros(hw, h);
    let mut lo = vec![T::zero(); hw];
    let mut hi = vec![T::zero(); hw];
    for y in 0..h {
        analyze_line(plane.row(y), &mut lo, &mut hi, filters);
        for x in 0..hw {
            row_lo.set(x, y, lo[x]);
            row_hi.set(x, y, hi[x]);
        }
    }

    let columns = |src: &Plane<T>| {
        let mut low = Plane::zeros(hw, hh);
        let mut high = Plane::zeros(hw, hh);
        let mut col = vec![T::zero(); h];
        let mut lo = vec![T::zero(); hh];
        let mut hi = vec![T::zero(); hh];
        for x in 0..hw {
            for (y, c) in col.iter_mut().enumerate() {
                *c = src.get(x, y);
            }
            analyze_line(&col, &mut lo, &mut hi, filters);
            for y in 0..hh {
                low.set(x, y, lo[y]);
                high.set(x, y, hi[y]);
            }
        }
        (low, high)
    };
    let (approx, horizontal) = columns(&row_lo);
    let (vertical, diagonal) = columns(&row_hi);
    Ok(Subbands {
        approx,
        details: DetailBands {
            horizontal,
            vertical,
            diagonal,
        },
    })
}

fn idwt2_level<T: Real>(bands: &Subbands<T>, filters: &FilterPair<T>) -> Plane<T> {
    let (hw, hh) = (bands.approx.width(), bands.approx.height());
    let (w, h) = (2 * hw, 2 * hh);

    let columns = |low: &Plane<T>, high: &Plane<T>| {
        let mut out = Plane::zeros(hw, h);
        let mut lo = vec![T::zero(); hh];
        let mut hi = vec![T::zero(); hh];
        let mut col = vec![T::zero(); h];
        for x in 0..hw {
            for y in 0..hh {
                lo[y] = low.get(x, y);
                hi[y] = high.get(x, y);
            }
            synthesize_line(&lo, &hi, &mut col, filters);
            for (y, &c) in col.iter().enumerate() {
                out.set(x, y, c);
            }
        }
        out
    };
    let row_lo = columns(&bands.approx, &bands.details.horizontal);
    let row_hi = columns(&bands.details.vertical, &bands.details.diagonal);

    let mut out = Plane::zeros(w, h);
    let mut line = vec![T::zero(); w];
    for y in 0..h {
        synthesize_line(row_lo.row(y), row_hi.row(y), &mut line, filters);
        for (x, &v) in line.iter().enumerate() {
            out.set(x, y, v);
        }
    }
    out
}

/// `levels`-deep decomposition of an 8-bit image.
pub fn dwt2_multi<T: Real>(
    img: &GrayImage,
    family: WaveletFamily,
    levels: usize,
) -> Result<WaveletDecomposition<T>, WaveletError> {
    dwt2_multi_plane(&Plane::from_image(img), family, levels)
}

pub fn dwt2_multi_plane<T: Real>(
    plane: &Plane<T>,
    family: WaveletFamily,
    levels: usize,
) -> Result<WaveletDecomposition<T>, WaveletError> {
    let (w, h) = (plane.width(), plane.height());
    let ok = levels >= 1
        && levels < usize::BITS as usize
        && w % (1 << levels) == 0
        && h % (1 << levels) == 0;
    if !ok {
        return Err(WaveletError::BadLevels {
            width: w,
            height: h,
            levels,
        });
    }
    let filters = analysis_filters::<T>(family);
    let mut approx = plane.clone();
    let mut details = Vec::with_capacity(levels);
    for _ in 0..levels {
        let bands = dwt2_level(&approx, &filters)?;
        approx = bands.approx;
        details.push(bands.details);
    }
    Ok(WaveletDecomposition {
        family,
        approx,
        details,
    })
}

/// Inverse of [`dwt2_multi_plane`].
pub fn idwt2<T: Real>(dec: &WaveletDecomposition<T>) -> Result<Plane<T>, WaveletError> {
    if dec.details.is_empty() {
        return Err(WaveletError::MalformedDecomposition(
            "no detail levels".into(),
        ));
    }
    let mut size = (dec.approx.width(), dec.approx.height());
    for (j, d) in dec.details.iter().enumerate().rev() {
        for (name, p) in [("H", &d.horizontal), ("V", &d.vertical), ("D", &d.diagonal)] {
            if (p.width(), p.height()) != size {
                return Err(WaveletError::MalformedDecomposition(format!(
                    "level {} {name} plane is {}x{}, expected {}x{}",
                    j + 1,
                    p.width(),
                    p.height(),
                    size.0,
                    size.1
                )));
            }
        }
        size = (size.0 * 2, size.1 * 2);
    }

    let filters = analysis_filters::<T>(dec.family);
    let mut approx = dec.approx.clone();
    for d in dec.details.iter().rev() {
        let bands = Subbands {
            approx,
            details: d.clone(),
        };
        approx = idwt2_level(&bands, &filters);
    }
    Ok(approx)
}
