use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sigfd::imaging::{binarize, estimate_orientation, preprocess, ForegroundMask};
use sigfd::recognition::{
    enroll, evaluate, generate_synthetic, identify, verify, Decision, Gallery, LabeledImage,
    Protocol, SynthSpec,
};
use sigfd::{
    distance, extract_features, DistanceMeasure, GrayImage, PipelineConfig, PreprocessConfig,
    WaveletFamily,
};

fn angle_gap(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(std::f64::consts::PI);
    d.min(std::f64::consts::PI - d)
}

fn elongated_cloud(seed: u64, count: usize, phi: f64) -> ForegroundMask {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (c, s) = (phi.cos(), phi.sin());
    let pts: Vec<(usize, usize)> = (0..count)
        .map(|_| {
            let u: f64 = rng.gen_range(-70.0..70.0);
            let v: f64 = rng.gen_range(-8.0..8.0);
            let x = 128.0 + u * c - v * s;
            let y = 128.0 + u * s + v * c;
            (x.round() as usize, y.round() as usize)
        })
        .collect();
    ForegroundMask::from_points(256, 256, pts)
}

fn small_set(n_identities: usize, samples: usize, seed: u64) -> Vec<LabeledImage> {
    generate_synthetic(&SynthSpec {
        n_identities,
        samples_per_identity: samples,
        seed,
        ..Default::default()
    })
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn orientation_tracks_rotation_of_point_cloud(seed in any::<u64>(), count in 200usize..800, deg in -85.0f64..85.0) {
        let phi = deg.to_radians();
        let theta = estimate_orientation(&elongated_cloud(seed, count, phi)).unwrap();
        prop_assert!(angle_gap(theta, phi).to_degrees() < 2.0, "phi {deg} got {}", theta.to_degrees());
    }

    #[test]
    fn measures_are_symmetric(x in prop::collection::vec(-10.0f64..10.0, 1..40), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let y: Vec<f64> = x.iter().map(|_| rng.gen_range(-10.0..10.0)).collect();
        for m in DistanceMeasure::ALL {
            prop_assert_eq!(distance(m, &x, &y).ok(), distance(m, &y, &x).ok());
        }
    }

    #[test]
    fn angle_ignores_positive_scaling(x in prop::collection::vec(0.1f64..10.0, 2..40), c in 0.01f64..100.0) {
        let y: Vec<f64> = x.iter().rev().copied().collect();
        let cy: Vec<f64> = y.iter().map(|v| c * v).collect();
        let a = distance(DistanceMeasure::AngleBased, &x, &y).unwrap();
        let b = distance(DistanceMeasure::AngleBased, &x, &cy).unwrap();
        prop_assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn correlation_ignores_affine_change(
        x in prop::collection::vec(-10.0f64..10.0, 3..40),
        a in 0.01f64..100.0,
        b in -100.0f64..100.0,
    ) {
        let y: Vec<f64> = x.iter().enumerate().map(|(i, v)| v * (i as f64).sin() + 0.3 * i as f64).collect();
        let ay: Vec<f64> = y.iter().map(|v| a * v + b).collect();
        let d0 = distance(DistanceMeasure::CorrelationBased, &x, &y);
        let d1 = distance(DistanceMeasure::CorrelationBased, &x, &ay);
        if let (Ok(d0), Ok(d1)) = (d0, d1) {
            prop_assert!((d0 - d1).abs() < 1e-9);
        }
    }

    #[test]
    fn shared_constant_component_keeps_nearest(
        probe in prop::collection::vec(0.0f64..5.0, 8),
        refs in prop::collection::vec(prop::collection::vec(0.0f64..5.0, 8), 2..6),
        extra in -5.0f64..5.0,
    ) {
        for m in [DistanceMeasure::Manhattan, DistanceMeasure::Euclidean, DistanceMeasure::Minkowski { p: 3.0 }] {
            let nearest = |p: &[f64], rs: &[Vec<f64>]| {
                rs.iter()
                    .map(|r| distance(m, p, r).unwrap())
                    .enumerate()
                    .min_by(|a, b| a.1.total_cmp(&b.1))
                    .unwrap()
                    .0
            };
            let mut p2 = probe.clone();
            p2.push(extra);
            let r2: Vec<Vec<f64>> = refs.iter().map(|r| { let mut r = r.clone(); r.push(extra); r }).collect();
            prop_assert_eq!(nearest(&probe, &refs), nearest(&p2, &r2));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn preprocess_output_matches_target(
        w in 40usize..300,
        h in 40usize..300,
        tw in 4u32..9,
        th in 4u32..9,
        crop in any::<bool>(),
        seed in any::<u64>(),
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let img = GrayImage::from_fn(w, h, |x, y| {
            if (x as f64 - w as f64 / 2.0).abs() < w as f64 / 4.0 && (y % 9) < 3 { rng.gen_range(0..60) } else { 255 }
        });
        let cfg = PreprocessConfig {
            target_size: (1 << tw, 1 << th),
            crop_to_foreground: crop,
            ..Default::default()
        };
        let out = preprocess(&img, &cfg).unwrap();
        prop_assert_eq!((out.width(), out.height()), (1usize << tw, 1usize << th));
    }

    #[test]
    fn preprocess_removes_slant_of_strokes(deg in -45.0f64..45.0, seed in any::<u64>()) {
        use sigfd::descriptor::SimilarityTransform;
        use sigfd::recognition::{render_sample, PseudoSignature};
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let lift: f64 = rng.gen_range(-10.0..10.0);
        let sig = PseudoSignature {
            strokes: vec![vec![(-90.0, 0.0), (-30.0, lift), (30.0, -lift), (90.0, 0.0)]],
            pen: rng.gen_range(1.5..3.5),
        };
        let tf = SimilarityTransform { rotation: deg.to_radians(), ..Default::default() };
        let img = render_sample(&sig, &tf, (256, 256));
        let out = preprocess(&img, &PreprocessConfig::default()).unwrap();
        let residual = estimate_orientation(&binarize(&out, None).mask).unwrap();
        prop_assert!(residual.to_degrees().abs() < 2.0, "slant {deg} residual {}", residual.to_degrees());
    }
}

#[test]
fn identify_picks_own_identity_for_fresh_samples() {
    let cfg = PipelineConfig::default();
    let data = small_set(2, 4, 31);
    let mut g = Gallery::new(cfg.meta());
    for s in data.iter().filter(|s| s.sample_id != "s003") {
        g = enroll(&g, &s.identity, &s.sample_id, &s.image, &cfg).unwrap();
    }
    for probe in data.iter().filter(|s| s.sample_id == "s003") {
        let r = identify(&g, &probe.image, DistanceMeasure::Manhattan, &cfg).unwrap();
        assert_eq!(r.best_identity, probe.identity);
        assert_eq!(r.ranking.len(), 2);
        assert!(r.ranking[0].1 <= r.ranking[1].1);
    }
}

#[test]
fn midpoint_threshold_separates_genuine_from_impostor() {
    let cfg = PipelineConfig::default();
    let data = small_set(3, 4, 57);
    let mut g = Gallery::new(cfg.meta());
    for s in data
        .iter()
        .filter(|s| s.sample_id == "s000" || s.sample_id == "s001")
    {
        g = enroll(&g, &s.identity, &s.sample_id, &s.image, &cfg).unwrap();
    }
    let probes: Vec<&LabeledImage> = data
        .iter()
        .filter(|s| s.sample_id.as_str() >= "s002")
        .collect();
    let m = DistanceMeasure::Manhattan;
    let dist =
        |claim: &str, p: &LabeledImage| verify(&g, claim, &p.image, m, 0.0, &cfg).unwrap().distance;
    let genuine: Vec<f64> = probes.iter().map(|p| dist(&p.identity, p)).collect();
    let mut impostor = Vec::new();
    for p in &probes {
        for other in ["id000", "id001", "id002"]
            .into_iter()
            .filter(|c| *c != p.identity)
        {
            impostor.push(dist(other, p));
        }
    }
    let worst_genuine = genuine.iter().copied().fold(f64::MIN, f64::max);
    let best_impostor = impostor.iter().copied().fold(f64::MAX, f64::min);
    assert!(
        worst_genuine < best_impostor,
        "{worst_genuine} vs {best_impostor}"
    );
    let t = 0.5 * (worst_genuine + best_impostor);
    for p in &probes {
        assert_eq!(
            verify(&g, &p.identity, &p.image, m, t, &cfg)
                .unwrap()
                .decision,
            Decision::Genuine
        );
        let other = if p.identity == "id000" {
            "id001"
        } else {
            "id000"
        };
        assert_eq!(
            verify(&g, other, &p.image, m, t, &cfg).unwrap().decision,
            Decision::Forgery
        );
    }
}

#[test]
fn evaluate_without_variation_is_perfect() {
    let spec = SynthSpec {
        n_identities: 5,
        samples_per_identity: 4,
        seed: 99,
        ..Default::default()
    }
    .without_variation();
    let data = generate_synthetic(&spec).unwrap();
    let report = evaluate(
        &data,
        &[DistanceMeasure::Manhattan, DistanceMeasure::Euclidean],
        &[WaveletFamily::Haar, WaveletFamily::Sym8],
        &Protocol {
            train_per_identity: 2,
            seed: 3,
        },
        &PipelineConfig::default(),
    )
    .unwrap();
    for row in &report.rates {
        for &rate in row {
            assert_eq!(rate, 100.0);
        }
    }
    assert_eq!(report.probes, 10);
}

#[test]
fn enrollment_order_does_not_change_results() {
    let cfg = PipelineConfig::default();
    let data = small_set(3, 3, 12);
    let (train, probes): (Vec<_>, Vec<_>) = data.iter().partition(|s| s.sample_id != "s002");
    let build = |order: &[&LabeledImage]| {
        order.iter().fold(Gallery::new(cfg.meta()), |g, s| {
            enroll(&g, &s.identity, &s.sample_id, &s.image, &cfg).unwrap()
        })
    };
    let forward = build(&train);
    let reversed: Vec<&LabeledImage> = train.iter().rev().copied().collect();
    let backward = build(&reversed);
    for p in probes {
        for m in DistanceMeasure::ALL {
            let a = identify(&forward, &p.image, m, &cfg).unwrap();
            let b = identify(&backward, &p.image, m, &cfg).unwrap();
            assert_eq!(a, b);
        }
    }
}

#[test]
fn descriptor_length_follows_retained_count() {
    let data = small_set(1, 1, 5);
    for k in [2, 8, 30] {
        let cfg = PipelineConfig {
            retained: k,
            family: WaveletFamily::Db2,
            ..Default::default()
        };
        let fd = extract_features::<f64>(&data[0].image, &cfg).unwrap();
        assert_eq!(fd.magnitudes.len(), k);
        assert!(fd.magnitudes.iter().all(|v| v.is_finite() && *v >= 0.0));
    }
}
