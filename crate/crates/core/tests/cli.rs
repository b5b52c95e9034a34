use std::path::Path;
use std::process::{Command, Output};

use sigfd::imaging::save_image;
use sigfd::GrayImage;

fn sigfd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sigfd"))
        .args(args)
        .output()
        .unwrap()
}

fn text(bytes: &[u8]) -> String {
    String::from_utf8_lossy(bytes).into_owned()
}

fn synth(root: &Path, identities: &str, samples: &str) {
    let out = sigfd(&[
        "synth",
        root.to_str().unwrap(),
        "--identities",
        identities,
        "--samples",
        samples,
        "--seed",
        "11",
    ]);
    assert!(out.status.success(), "{}", text(&out.stderr));
}

#[test]
fn enrolled_image_identifies_with_zero_distance() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("data");
    let gallery = dir.path().join("gallery");
    synth(&data, "3", "2");
    let (g, d) = (gallery.to_str().unwrap(), data.to_str().unwrap());
    for id in ["id000", "id001", "id002"] {
        let imgs: Vec<String> = ["s000", "s001"]
            .iter()
            .map(|s| format!("{d}/{id}/{s}.pgm"))
            .collect();
        let mut args = vec!["enroll", g, id];
        args.extend(imgs.iter().map(String::as_str));
        let out = sigfd(&args);
        assert!(out.status.success(), "{}", text(&out.stderr));
    }
    let probe = format!("{d}/id001/s000.pgm");
    let out = sigfd(&["identify", g, &probe]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(text(&out.stdout), "id001 0.000000\n");

    let out = sigfd(&["verify", g, "id001", &probe, "--threshold", "0.5"]);
    assert_eq!(text(&out.stdout), "genuine 0.000000\n");
    let out = sigfd(&["verify", g, "id001", &probe, "--threshold", "-1"]);
    assert_eq!(text(&out.stdout), "forgery 0.000000\n");

    let out = sigfd(&["identify", g, &probe, "--ranking"]);
    assert_eq!(text(&out.stdout).lines().count(), 4);
}

#[test]
fn blank_image_is_rejected_with_degenerate_descriptor() {
    let dir = tempfile::tempdir().unwrap();
    let blank = dir.path().join("blank.pgm");
    save_image(&blank, &GrayImage::filled(64, 64, 255)).unwrap();
    let gallery = dir.path().join("gallery");
    let out = sigfd(&[
        "enroll",
        gallery.to_str().unwrap(),
        "someone",
        blank.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(
        text(&out.stderr).contains("DegenerateDescriptor"),
        "{}",
        text(&out.stderr)
    );
}

#[test]
fn unreadable_and_unknown_inputs_fail_cleanly() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.pgm");
    let gallery = dir.path().join("gallery");
    let out = sigfd(&[
        "enroll",
        gallery.to_str().unwrap(),
        "x",
        missing.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));

    let out = sigfd(&[
        "evaluate",
        dir.path().to_str().unwrap(),
        "--measures",
        "chebyshev",
    ]);
    assert_eq!(out.status.code(), Some(1));

    let out = sigfd(&["identify"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn evaluate_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("data");
    synth(&data, "4", "4");
    let args = [
        "evaluate",
        data.to_str().unwrap(),
        "--measures",
        "manhattan",
        "--families",
        "sym8",
        "--seed",
        "7",
        "--train-k",
        "2",
    ];
    let first = sigfd(&args);
    let second = sigfd(&args);
    assert!(first.status.success(), "{}", text(&first.stderr));
    assert_eq!(first.stdout, second.stdout);
    let csv = text(&first.stdout);
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("Distance measures,Sym8"));
    assert!(lines.next().unwrap().starts_with("Manhattan distance,"));
}
