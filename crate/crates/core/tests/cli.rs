use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use ppscrack::cli::{load_image, save_image};
use ppscrack::{Pixel, RgbImage};

const KEY: &str = "3.98235562892545,1.34536356538912,108.54365761256745,110";

fn ppscrack(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ppscrack"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = ppscrack(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn write_image(dir: &Path, name: &str, h: usize, w: usize, salt: u8) -> PathBuf {
    let img = RgbImage::from_fn(h, w, |i, j| {
        Pixel::new(
            (i * 7 + j) as u8 ^ salt,
            (i * j) as u8,
            (j * 13) as u8 ^ salt.rotate_left(3),
        )
    })
    .unwrap();
    let path = dir.join(name);
    save_image(&img, &path).unwrap();
    path
}

/// Pixel payload of a P6 file written by this tool (fixed-layout header).
fn payload(path: &Path) -> Vec<u8> {
    load_image(path).unwrap().to_raw()
}

#[test]
fn encrypt_then_decrypt_restores_payload() {
    let dir = tempfile::tempdir().unwrap();
    let plain = write_image(dir.path(), "plain.ppm", 19, 23, 5);
    for cipher in ["pps09", "mpps09"] {
        let enc = dir.path().join(format!("{cipher}.enc.ppm"));
        let dec = dir.path().join(format!("{cipher}.dec.ppm"));
        ok(&[
            "encrypt",
            "--cipher",
            cipher,
            "--key",
            KEY,
            "--in",
            s(&plain),
            "--out",
            s(&enc),
        ]);
        assert_ne!(payload(&enc), payload(&plain));
        ok(&[
            "decrypt",
            "--cipher",
            cipher,
            "--key",
            KEY,
            "--in",
            s(&enc),
            "--out",
            s(&dec),
        ]);
        assert_eq!(fs::read(&dec).unwrap(), fs::read(&plain).unwrap());
    }
}

#[test]
fn attack_pipeline_recovers_second_image() {
    let dir = tempfile::tempdir().unwrap();
    let p1 = write_image(dir.path(), "p1.ppm", 32, 40, 1);
    let p2 = write_image(dir.path(), "p2.ppm", 32, 40, 200);
    for cipher in ["pps09", "mpps09"] {
        let c1 = dir.path().join("c1.ppm");
        let c2 = dir.path().join("c2.ppm");
        let ek = dir.path().join("eqkey.ppm");
        let rec = dir.path().join("rec.ppm");
        let re_enc = dir.path().join("re.ppm");
        ok(&[
            "encrypt",
            "--cipher",
            cipher,
            "--key",
            KEY,
            "--in",
            s(&p1),
            "--out",
            s(&c1),
        ]);
        ok(&[
            "encrypt",
            "--cipher",
            cipher,
            "--key",
            KEY,
            "--in",
            s(&p2),
            "--out",
            s(&c2),
        ]);
        ok(&[
            "attack-derive",
            "--plain",
            s(&p1),
            "--cipher-img",
            s(&c1),
            "--out-eqkey",
            s(&ek),
        ]);
        ok(&[
            "attack-decrypt",
            "--eqkey",
            s(&ek),
            "--in",
            s(&c2),
            "--out",
            s(&rec),
        ]);
        assert_eq!(payload(&rec), payload(&p2), "{cipher}");
        ok(&[
            "attack-encrypt",
            "--eqkey",
            s(&ek),
            "--in",
            s(&p2),
            "--out",
            s(&re_enc),
        ]);
        assert_eq!(payload(&re_enc), payload(&c2), "{cipher}");
    }
}

#[test]
fn diff_pattern_and_bitplane_report() {
    let dir = tempfile::tempdir().unwrap();
    let pattern = dir.path().join("pattern.ppm");
    let text = ok(&[
        "diff-pattern",
        "--flip",
        "R,10,12,7",
        "--height",
        "32",
        "--width",
        "24",
        "--out",
        s(&pattern),
    ]);
    assert!(text.contains("bit7"));
    let img = load_image(&pattern).unwrap();
    assert_eq!(img.dims(), (32, 24));
    assert!(img
        .pixels()
        .iter()
        .all(|p| p.channels().iter().all(|&b| b & 0x7f == 0)));

    let zero = dir.path().join("zero.ppm");
    save_image(&RgbImage::zeros(32, 24).unwrap(), &zero).unwrap();
    let report = ok(&["bitplane-report", "--a", s(&pattern), "--b", s(&zero)]);
    let r_row = report.lines().find(|l| l.starts_with('R')).unwrap();
    let counts: Vec<u64> = r_row
        .split_whitespace()
        .skip(1)
        .map(|c| c.parse().unwrap())
        .collect();
    // columns run bit7 .. bit0
    assert!(counts[0] > 0);
    assert!(counts[1..].iter().all(|&c| c == 0));

    // --delta file gives the same pattern
    let delta = dir.path().join("delta.ppm");
    let mut d = RgbImage::zeros(32, 24).unwrap();
    d.set(10, 12, Pixel::new(0x80, 0, 0));
    save_image(&d, &delta).unwrap();
    let pattern2 = dir.path().join("pattern2.ppm");
    ok(&["diff-pattern", "--delta", s(&delta), "--out", s(&pattern2)]);
    assert_eq!(fs::read(&pattern).unwrap(), fs::read(&pattern2).unwrap());
}

#[test]
fn verify_lemmas_subcommand() {
    let text = ok(&["verify-lemmas", "--trials", "20", "--seed", "3"]);
    assert!(text.contains("20/20"));
    assert!(!ppscrack(&["verify-lemmas", "--trials", "0"])
        .status
        .success());
}

#[test]
fn randomness_subcommand_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("report.csv");
    let text = ok(&[
        "randomness",
        "--keys",
        "3",
        "--height",
        "16",
        "--width",
        "16",
        "--seed",
        "9",
        "--csv-out",
        s(&csv),
    ]);
    assert!(text.contains("frequency"));
    let body = fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = body.lines().collect();
    assert_eq!(lines[0], "key_index,test,p_value,pass");
    assert_eq!(lines.len(), 1 + 15 + 5 + 1);
    assert_eq!(
        lines.iter().filter(|l| l.starts_with("summary,")).count(),
        5
    );
    assert_eq!(
        *lines.last().unwrap(),
        "meta,sequence_bits=2048,seed=9,significance=0.01"
    );
}

#[test]
fn errors_exit_nonzero_with_one_line() {
    let dir = tempfile::tempdir().unwrap();
    let plain = write_image(dir.path(), "p.ppm", 4, 4, 0);
    let out_path = dir.path().join("o.ppm");

    let out = ppscrack(&[
        "encrypt",
        "--key",
        "7.0,1,20,200",
        "--in",
        s(&plain),
        "--out",
        s(&out_path),
    ]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("x0"));

    let truncated = dir.path().join("t.ppm");
    fs::write(&truncated, b"P6\n4 4\n255\n\x00\x01").unwrap();
    let out = ppscrack(&[
        "encrypt",
        "--key",
        KEY,
        "--in",
        s(&truncated),
        "--out",
        s(&out_path),
    ]);
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert_eq!(err.trim().lines().count(), 1, "{err}");
    assert!(err.contains("truncated"));

    let other = write_image(dir.path(), "q.ppm", 5, 4, 0);
    let out = ppscrack(&[
        "attack-derive",
        "--plain",
        s(&plain),
        "--cipher-img",
        s(&other),
        "--out-eqkey",
        s(&out_path),
    ]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("mismatch"));
}
