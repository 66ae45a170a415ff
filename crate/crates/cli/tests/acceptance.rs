//! Determinism and serialization acceptance: same-seed runs are
//! byte-identical and instance files survive parse/export/parse unchanged.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::time::{Duration, Instant};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_derham")
}

fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().expect("binary runs")
}

fn instance_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("instances").join(format!("{name}.json"))
}

#[test]
fn determinism_and_round_trip() {
    let t0 = Instant::now();

    let wu_product = instance_path("wu-product");
    let wu_product = wu_product.to_str().unwrap();
    let first = run(&["decompose", wu_product, "--json", "--seed", "0"]);
    let second = run(&["decompose", wu_product, "--json", "--seed", "0"]);
    assert!(first.status.success(), "{}", String::from_utf8_lossy(&first.stderr));
    assert_eq!(first.stdout, second.stdout, "same-seed outputs differ");
    assert!(!first.stdout.is_empty());

    for name in [
        "wu-factor",
        "wu-product",
        "definite-rotation",
        "wu-plus-plane",
        "wu-plus-line",
        "hyperbolic-trivial",
        "null-rotation",
    ] {
        let path = instance_path(name);
        let original = std::fs::read(&path).unwrap();
        let once = run(&["export", path.to_str().unwrap()]);
        assert!(once.status.success(), "{name}: export failed");
        assert_eq!(once.stdout, original, "{name}: export differs from the shipped file");

        let tmp = std::env::temp_dir().join(format!("derham-roundtrip-{name}.json"));
        std::fs::write(&tmp, &once.stdout).unwrap();
        let twice = run(&["export", tmp.to_str().unwrap()]);
        assert!(twice.status.success());
        assert_eq!(twice.stdout, once.stdout, "{name}: second export differs");
        std::fs::remove_file(&tmp).ok();
    }

    let elapsed = t0.elapsed();
    let budget = Duration::from_secs(5);
    println!("determinism and serialization: PASS in {elapsed:.2?} (budget {budget:?})");
    assert!(elapsed <= budget, "took {elapsed:?}, budget {budget:?}");
}
