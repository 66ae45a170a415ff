use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_derham")
}

fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().expect("binary runs")
}

fn instance_path(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("instances")
        .join(format!("{name}.json"))
        .to_str()
        .unwrap()
        .to_string()
}

fn fixture_path(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
        .to_str()
        .unwrap()
        .to_string()
}

fn write_temp(name: &str, contents: &str) -> PathBuf {
    let path = std::env::temp_dir().join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn stdout_str(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr_str(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn payload(out: &Output) -> serde_json::Value {
    let report: serde_json::Value = serde_json::from_str(&stdout_str(out)).unwrap();
    assert_eq!(report["schema"], 1);
    report["payload"].clone()
}

#[test]
fn analyze_reports_the_isotropic_fixed_space_and_duality() {
    let out = run(&["analyze", &instance_path("wu-factor")]);
    assert!(out.status.success());
    let text = stdout_str(&out);
    assert!(text.contains("fixed space: dim 2, isotropic: yes"), "{text}");
    assert!(text.contains("duality: holds"), "{text}");
}

#[test]
fn analyze_identity_instance_fixes_everything() {
    let out = run(&["analyze", &fixture_path("identity.json"), "--json"]);
    assert!(out.status.success());
    let p = payload(&out);
    assert_eq!(p["fixed_space"]["dim"], 3);
    assert_eq!(p["moved_span"]["dim"], 0);
    assert_eq!(p["duality"], "holds");
}

#[test]
fn zero_denominator_is_a_parse_error_with_a_field_path() {
    let path = write_temp(
        "derham-zero-denom.json",
        r#"{"name":"bad","dimension":2,"gram":[["1","1/0"],["1/0","1"]],"generators":[]}"#,
    );
    let out = run(&["analyze", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr_str(&out);
    assert!(err.contains("gram[0][1]"), "{err}");
    assert!(err.contains("zero denominator"), "{err}");
    std::fs::remove_file(&path).ok();
}

#[test]
fn non_preserving_generator_is_an_invariant_violation() {
    let path = write_temp(
        "derham-bad-gen.json",
        r#"{"name":"bad","dimension":2,"gram":[["1","0"],["0","1"]],
            "generators":[{"kind":"group","matrix":[["2","0"],["0","1"]]}]}"#,
    );
    let out = run(&["analyze", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    std::fs::remove_file(&path).ok();
}

#[test]
fn unknown_names_exit_with_code_4() {
    let out = run(&["compare", &instance_path("wu-product"), "nope", "mixed-blocks"]);
    assert_eq!(out.status.code(), Some(4));
    assert!(stderr_str(&out).contains("unknown decomposition"));

    let out = run(&["demo", "nope"]);
    assert_eq!(out.status.code(), Some(4));
    assert!(stderr_str(&out).contains("unknown demo"));

    let out = run(&["export", "nope"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn decompose_reports_the_two_isotropic_product_summands() {
    let out = run(&["decompose", &instance_path("wu-product"), "--json"]);
    assert!(out.status.success());
    let p = payload(&out);
    assert_eq!(p["p1"], 0);
    assert_eq!(p["p2"], 2);
    let summands = p["summands"].as_array().unwrap();
    assert_eq!(summands.len(), 2);
    for s in summands {
        assert_eq!(s["kind"], "fixed_isotropic");
    }
}

#[test]
fn empty_generator_list_gives_a_single_flat_part() {
    let out = run(&["decompose", &instance_path("hyperbolic-trivial"), "--json"]);
    assert!(out.status.success());
    let p = payload(&out);
    assert_eq!(p["trivial_part"]["kind"], "trivial_flat");
    assert_eq!(p["trivial_part"]["subspace"]["dim"], 2);
    assert!(p["summands"].as_array().unwrap().is_empty());
}

#[test]
fn phi_on_a_definite_instance_is_certified() {
    let out = run(&["phi", &instance_path("definite-rotation"), "--json"]);
    assert!(out.status.success());
    assert_eq!(payload(&out)["status"], "satisfied_certified");
}

#[test]
fn comparing_a_decomposition_with_itself_is_identical() {
    let out = run(&[
        "compare",
        &instance_path("wu-product"),
        "coordinate-blocks",
        "coordinate-blocks",
        "--json",
    ]);
    assert!(out.status.success());
    assert_eq!(payload(&out)["verdict"], "identical");
}

#[test]
fn comparing_the_rival_decompositions_finds_an_isometry() {
    let out = run(&[
        "compare",
        &instance_path("wu-product"),
        "coordinate-blocks",
        "mixed-blocks",
        "--json",
    ]);
    assert!(out.status.success());
    let p = payload(&out);
    assert_eq!(p["verdict"], "equivalent_up_to_isometry");
    assert!(p["isometry"].is_object());
    assert_eq!(p["counts_equal"], serde_json::json!([true, true]));
}

#[test]
fn demo_tells_the_nonuniqueness_story() {
    let out = run(&["demo", "wu-product"]);
    assert!(out.status.success());
    let text = stdout_str(&out);
    assert!(text.contains("status: violated"), "{text}");
    assert!(text.contains("nonunique_witnessed"), "{text}");
    assert!(text.contains("coordinate-blocks"), "{text}");
    assert!(text.contains("mixed-blocks"), "{text}");
    assert!(text.contains("equivalent_up_to_isometry"), "{text}");
}

#[test]
fn oracle_primes_flag_attaches_modular_evidence() {
    let out = run(&[
        "decompose",
        &instance_path("wu-factor"),
        "--json",
        "--oracle-primes",
        "5,7",
    ]);
    assert!(out.status.success());
    let p = payload(&out);
    let evidence = p["oracle"]["evidence"].as_array().unwrap();
    let primes: Vec<u64> = evidence.iter().map(|e| e["prime"].as_u64().unwrap()).collect();
    assert_eq!(primes, vec![5, 7]);
    assert_eq!(p["oracle"]["soundness_violation"], false);
}

#[test]
fn golden_reports_are_reproduced_bit_for_bit() {
    let golden_dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");

    let out = run(&["decompose", &instance_path("wu-product"), "--json"]);
    assert!(out.status.success());
    let golden = std::fs::read(golden_dir.join("wu-product.decompose.json")).unwrap();
    assert_eq!(out.stdout, golden, "decompose report drifted from the golden file");

    let out = run(&["phi", &instance_path("definite-rotation"), "--json"]);
    assert!(out.status.success());
    let golden = std::fs::read(golden_dir.join("definite-rotation.phi.json")).unwrap();
    assert_eq!(out.stdout, golden, "phi report drifted from the golden file");
}

#[test]
fn shipped_instances_match_fresh_exports() {
    for name in [
        "wu-factor",
        "wu-product",
        "definite-rotation",
        "wu-plus-plane",
        "wu-plus-line",
        "hyperbolic-trivial",
        "null-rotation",
    ] {
        let out = run(&["export", name]);
        assert!(out.status.success(), "{name}");
        let shipped = std::fs::read(instance_path(name)).unwrap();
        assert_eq!(out.stdout, shipped, "{name}: shipped instance is stale");
    }
}
