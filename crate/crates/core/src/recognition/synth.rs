//! Synthetic pseudo-signatures: smooth random strokes rendered dark on white,
//! re-drawn per sample under a random similarity transform plus salt-and-pepper
//! noise.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::RecognitionError;
use crate::descriptor::SimilarityTransform;
use crate::imaging::{GrayImage, PAPER};

const INK: f64 = 30.0;

#[derive(Debug, Clone, PartialEq)]
pub struct SynthSpec {
    pub n_identities: usize,
    pub samples_per_identity: usize,
    /// Rotation drawn uniformly from `±rotation_deg`.
    pub rotation_deg: f64,
    /// Uniform scale range `[min, max]`.
    pub scale: (f64, f64),
    /// Translation per axis drawn from `±translation` pixels.
    pub translation: f64,
    /// Fraction of pixels replaced by salt or pepper, in `[0, 0.2]`.
    pub noise: f64,
    /// Per-sample displacement of stroke control points, `±jitter` pixels.
    pub jitter: f64,
    pub canvas: (usize, usize),
    pub seed: u64,
}

impl Default for SynthSpec {
    fn default() -> Self {
        Self {
            n_identities: 18,
            samples_per_identity: 24,
            rotation_deg: 10.0,
            scale: (0.9, 1.1),
            translation: 12.0,
            noise: 0.02,
            jitter: 1.5,
            canvas: (256, 256),
            seed: 2024,
        }
    }
}

impl SynthSpec {
    /// Spec with every transform range and the noise set to zero.
    pub fn without_variation(mut self) -> Self {
        self.rotation_deg = 0.0;
        self.scale = (1.0, 1.0);
        self.translation = 0.0;
        self.noise = 0.0;
        self.jitter = 0.0;
        self
    }

    pub fn validate(&self) -> Result<(), RecognitionError> {
        let bad = |msg: String| Err(RecognitionError::InvalidSpec(msg));
        if self.n_identities == 0 || self.samples_per_identity == 0 {
            return bad("need at least one identity and one sample".into());
        }
        if !(0.0..=0.2).contains(&self.noise) {
            return bad(format!("noise fraction {} outside [0, 0.2]", self.noise));
        }
        let (lo, hi) = self.scale;
        if !(lo > 0.0 && lo <= hi && hi.is_finite()) {
            return bad(format!("scale range [{lo}, {hi}] is empty or non-positive"));
        }
        for (name, v) in [
            ("rotation", self.rotation_deg),
            ("translation", self.translation),
            ("jitter", self.jitter),
        ] {
            if !(v >= 0.0 && v.is_finite()) {
                return bad(format!(
                    "{name} range {v} must be a finite non-negative half-width"
                ));
            }
        }
        if self.canvas.0 < 32 || self.canvas.1 < 32 {
            return bad(format!("canvas {:?} is smaller than 32x32", self.canvas));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledImage {
    pub identity: String,
    pub sample_id: String,
    pub image: GrayImage,
}

/// Identity-specific stroke geometry in a frame centered on the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct PseudoSignature {
    /// Control polylines; each is smoothed with a Catmull-Rom spline.
    pub strokes: Vec<Vec<(f64, f64)>>,
    /// Pen radius in pixels at unit scale.
    pub pen: f64,
}

impl PseudoSignature {
    /// Draws a signature spanning roughly `±half_w` by `±half_h`.
    pub fn random(rng: &mut impl Rng, half_w: f64, half_h: f64) -> Self {
        let mut strokes = Vec::new();
        // Main cursive stroke running left to right.
        let n = rng.gen_range(6..=10);
        let main = (0..n)
            .map(|i| {
                let x =
                    -half_w + 2.0 * half_w * i as f64 / (n - 1) as f64 + rng.gen_range(-6.0..6.0);
                (x, rng.gen_range(-half_h..half_h))
            })
            .collect();
        strokes.push(main);
        for _ in 0..rng.gen_range(1..=3) {
            let (cx, cy) = (
                rng.gen_range(-half_w..half_w),
                rng.gen_range(-half_h..half_h),
            );
            let len = rng.gen_range(3..=5);
            strokes.push(
                (0..len)
                    .map(|_| {
                        (
                            (cx + rng.gen_range(-0.4 * half_w..0.4 * half_w))
                                .clamp(-half_w, half_w),
                            (cy + rng.gen_range(-half_h..half_h))
                                .clamp(-1.3 * half_h, 1.3 * half_h),
                        )
                    })
                    .collect(),
            );
        }
        Self {
            strokes,
            pen: rng.gen_range(1.5..2.5),
        }
    }
}

fn catmull_rom(p: &[(f64, f64)], samples_per_segment: usize) -> Vec<(f64, f64)> {
    if p.len() < 2 {
        return p.to_vec();
    }
    let at = |i: isize| p[i.clamp(0, p.len() as isize - 1) as usize];
    let mut out = Vec::new();
    for i in 0..p.len() as isize - 1 {
        let (p0, p1, p2, p3) = (at(i - 1), at(i), at(i + 1), at(i + 2));
        for s in 0..samples_per_segment {
            let t = s as f64 / samples_per_segment as f64;
            let (t2, t3) = (t * t, t * t * t);
            let f = |a: f64, b: f64, c: f64, d: f64| {
                0.5 * (2.0 * b
                    + (c - a) * t
                    + (2.0 * a - 5.0 * b + 4.0 * c - d) * t2
                    + (3.0 * b - a - 3.0 * c + d) * t3)
            };
            out.push((f(p0.0, p1.0, p2.0, p3.0), f(p0.1, p1.1, p2.1, p3.1)));
        }
    }
    out.push(p[p.len() - 1]);
    out
}

fn stamp(coverage: &mut [f64], (w, h): (usize, usize), (cx, cy): (f64, f64), r: f64) {
    let x0 = (cx - r - 1.0).floor().max(0.0) as usize;
    let y0 = (cy - r - 1.0).floor().max(0.0) as usize;
    let x1 = ((cx + r + 1.0).ceil() as isize).min(w as isize - 1);
    let y1 = ((cy + r + 1.0).ceil() as isize).min(h as isize - 1);
    if x1 < 0 || y1 < 0 {
        return;
    }
    for y in y0..=y1 as usize {
        for x in x0..=x1 as usize {
            let d = ((x as f64 - cx).powi(2) + (y as f64 - cy).powi(2)).sqrt();
            let c = (r + 0.5 - d).clamp(0.0, 1.0);
            let cell = &mut coverage[y * w + x];
            if c > *cell {
                *cell = c;
            }
        }
    }
}

/// Renders `sig` under `tf` (about the canvas center) on a blank page.
/// `start_shift` is ignored; it only applies to coefficient sequences.
pub fn render_sample(
    sig: &PseudoSignature,
    tf: &SimilarityTransform,
    canvas: (usize, usize),
) -> GrayImage {
    let (w, h) = canvas;
    let (cx, cy) = (w as f64 / 2.0, h as f64 / 2.0);
    let (s, c) = tf.rotation.sin_cos();
    let map = |(x, y): (f64, f64)| {
        (
            cx + tf.scale * (c * x - s * y) + tf.translation.0,
            cy + tf.scale * (s * x + c * y) + tf.translation.1,
        )
    };
    let mut coverage = vec![0.0; w * h];
    let r = sig.pen * tf.scale;
    for stroke in &sig.strokes {
        let pts: Vec<_> = stroke.iter().copied().map(map).collect();
        let curve = catmull_rom(&pts, 24);
        for pair in curve.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            let len = ((b.0 - a.0).powi(2) + (b.1 - a.1).powi(2)).sqrt();
            let steps = (len / 0.5).ceil().max(1.0) as usize;
            for k in 0..steps {
                let t = k as f64 / steps as f64;
                stamp(
                    &mut coverage,
                    canvas,
                    (a.0 + t * (b.0 - a.0), a.1 + t * (b.1 - a.1)),
                    r,
                );
            }
        }
        if let Some(&last) = curve.last() {
            stamp(&mut coverage, canvas, last, r);
        }
    }
    let paper = PAPER as f64;
    GrayImage::new(
        w,
        h,
        coverage
            .iter()
            .map(|&cv| (paper - cv * (paper - INK)).round() as u8)
            .collect(),
    )
    .expect("canvas is non-empty")
}

fn symmetric(rng: &mut impl Rng, half: f64) -> f64 {
    if half > 0.0 {
        rng.gen_range(-half..=half)
    } else {
        0.0
    }
}

/// Deterministic in `spec.seed`. Identities are named `id000`, `id001`, ...;
/// samples `s000`, `s001`, ...
pub fn generate_synthetic(spec: &SynthSpec) -> Result<Vec<LabeledImage>, RecognitionError> {
    spec.validate()?;
    let mut master = ChaCha8Rng::seed_from_u64(spec.seed);
    let (w, h) = spec.canvas;
    let mut out = Vec::with_capacity(spec.n_identities * spec.samples_per_identity);
    for i in 0..spec.n_identities {
        let mut rng = ChaCha8Rng::seed_from_u64(master.gen());
        let base = PseudoSignature::random(&mut rng, w as f64 * 0.33, h as f64 * 0.12);
        for sidx in 0..spec.samples_per_identity {
            let tf = SimilarityTransform {
                rotation: symmetric(&mut rng, spec.rotation_deg).to_radians(),
                scale: if spec.scale.0 < spec.scale.1 {
                    rng.gen_range(spec.scale.0..=spec.scale.1)
                } else {
                    spec.scale.0
                },
                translation: (
                    symmetric(&mut rng, spec.translation),
                    symmetric(&mut rng, spec.translation),
                ),
                start_shift: 0,
            };
            let mut sig = base.clone();
            if spec.jitter > 0.0 {
                for p in sig.strokes.iter_mut().flatten() {
                    p.0 += symmetric(&mut rng, spec.jitter);
                    p.1 += symmetric(&mut rng, spec.jitter);
                }
            }
            let mut image = render_sample(&sig, &tf, spec.canvas);
            if spec.noise > 0.0 {
                for y in 0..h {
                    for x in 0..w {
                        if rng.gen_bool(spec.noise) {
                            image.set(x, y, if rng.gen_bool(0.5) { 0 } else { PAPER });
                        }
                    }
                }
            }
            out.push(LabeledImage {
                identity: format!("id{i:03}"),
                sample_id: format!("s{sidx:03}"),
                image,
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> SynthSpec {
        SynthSpec {
            n_identities: 3,
            samples_per_identity: 4,
            canvas: (128, 128),
            ..Default::default()
        }
    }

    #[test]
    fn counts_and_labels() {
        let set = generate_synthetic(&small()).unwrap();
        assert_eq!(set.len(), 12);
        assert_eq!(set.iter().filter(|s| s.identity == "id001").count(), 4);
        assert_eq!(set[5].sample_id, "s001");
    }

    #[test]
    fn same_seed_same_images() {
        assert_eq!(
            generate_synthetic(&small()).unwrap(),
            generate_synthetic(&small()).unwrap()
        );
        let mut other = small();
        other.seed += 1;
        assert_ne!(
            generate_synthetic(&small()).unwrap(),
            generate_synthetic(&other).unwrap()
        );
    }

    #[test]
    fn zero_ranges_give_identical_samples() {
        let set = generate_synthetic(&small().without_variation()).unwrap();
        for chunk in set.chunks(4) {
            assert!(chunk.iter().all(|s| s.image == chunk[0].image));
        }
        assert_ne!(set[0].image, set[4].image);
    }

    #[test]
    fn images_contain_ink_on_paper() {
        let set = generate_synthetic(&small().without_variation()).unwrap();
        let img = &set[0].image;
        let ink = img.pixels().iter().filter(|&&p| p < 128).count();
        assert!(
            ink > 100 && ink < img.pixels().len() / 4,
            "ink pixels {ink}"
        );
        assert_eq!(img.get(0, 0), PAPER);
    }

    #[test]
    fn invalid_specs() {
        let mut s = small();
        s.noise = 0.5;
        assert!(s.validate().is_err());
        let mut s = small();
        s.scale = (1.2, 1.0);
        assert!(s.validate().is_err());
        let mut s = small();
        s.n_identities = 0;
        assert!(s.validate().is_err());
    }
}
