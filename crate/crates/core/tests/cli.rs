use num_complex::Complex64;
use rifscope::cli::{run, AnalysisReport, VerifyReport};
use rifscope::construct::{catalog, CATALOG};
use rifscope::{BiPoly, Rif};
use std::path::Path;
use tempfile::TempDir;

fn rifscope(args: &[&str]) -> i32 {
    run(std::iter::once("rifscope").chain(args.iter().copied()))
}

fn path_str(p: &Path) -> &str {
    p.to_str().expect("utf-8 temp path")
}

fn read_rif(path: &Path) -> Rif {
    Rif::from_json(&std::fs::read_to_string(path).unwrap(), 64).unwrap()
}

fn torus_modulus_defect(f: &Rif) -> f64 {
    (0..32)
        .map(|k| {
            let t = 0.37 + k as f64 * 0.19;
            let z = (Complex64::from_polar(1.0, t), Complex64::from_polar(1.0, 1.3 * t + 0.5));
            (f.eval(z.0, z.1).norm() - 1.0).abs()
        })
        .fold(0.0, f64::max)
}

#[test]
fn verify_passes_on_every_fixture() {
    let dir = TempDir::new().unwrap();
    for name in CATALOG {
        let out = dir.path().join(format!("{name}.json"));
        assert_eq!(rifscope(&["verify", "--fixture", name, "-o", path_str(&out)]), 0, "{name}");
        let report: VerifyReport = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
        assert!(report.passed(), "{name}: {:?}", report.checks);
        assert!(!report.checks.is_empty());
    }
}

#[test]
fn analyze_output_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for out in [&a, &b] {
        assert_eq!(rifscope(&["analyze", "--fixture", "faveform", "-o", path_str(out)]), 0);
    }
    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(text, std::fs::read_to_string(&b).unwrap());
    let report: AnalysisReport = serde_json::from_str(&text).unwrap();
    assert_eq!(report.global_k, Some(2));
    assert_eq!(report.p_star, Some(1.5));
    assert_eq!(report.singular_points.len(), 1);
    assert!(report.identity_checks.iter().all(|c| c.pass));
}

#[test]
fn analyze_reads_a_rif_file() {
    let dir = TempDir::new().unwrap();
    let rif = dir.path().join("mbm.json");
    std::fs::write(&rif, serde_json::to_string(&catalog("mbm").unwrap()).unwrap()).unwrap();
    let out = dir.path().join("report.json");
    assert_eq!(rifscope(&["analyze", path_str(&rif), "-o", path_str(&out)]), 0);
    let report: AnalysisReport = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report.rif_id, "mbm");
    assert_eq!(report.global_k, Some(8));
    assert_eq!(report.bezout.total, 16);
}

#[test]
fn portrait_writes_csv_and_json() {
    let dir = TempDir::new().unwrap();
    let csv = dir.path().join("fave.csv");
    assert_eq!(
        rifscope(&["portrait", "--fixture", "faveform", "--levels", "4", "--grid", "512", "-o", path_str(&csv)]),
        0
    );
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("lambda_re,lambda_im,flag,theta1,theta2,branch_id,component_id")
    );
    let rows: Vec<&str> = lines.collect();
    assert!(rows.len() >= 4 * 512);
    assert!(rows.iter().all(|r| r.split(',').count() == 7));

    let json = dir.path().join("fave.json");
    assert_eq!(
        rifscope(&["portrait", "--fixture", "faveform", "--levels", "4", "--grid", "512", "-o", path_str(&json)]),
        0
    );
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    let curves = v["curves"].as_array().unwrap();
    assert_eq!(curves.len(), 5);
    let value_curves: Vec<_> = curves.iter().filter(|c| c["value_for"] == serde_json::json!([0])).collect();
    assert_eq!(value_curves.len(), 1);
    assert_eq!(value_curves[0]["lambda"], serde_json::json!([1.0, 0.0]));
}

#[test]
fn construct_embed_produces_an_inner_function() {
    let dir = TempDir::new().unwrap();
    let r = BiPoly::from_real_terms(&[(0, 0, 1.0), (1, 1, -1.0)])
        .mul(&BiPoly::from_real_terms(&[(0, 0, 3.0), (1, 0, -1.0), (0, 1, -1.0), (1, 1, 3.0)]));
    let r_path = dir.path().join("r.json");
    std::fs::write(&r_path, serde_json::to_string(&r).unwrap()).unwrap();
    let out = dir.path().join("embedded.json");
    assert_eq!(rifscope(&["construct", "embed", path_str(&r_path), "-o", path_str(&out)]), 0);
    let f = read_rif(&out);
    assert!(torus_modulus_defect(&f) < 1e-10);
}

#[test]
fn construct_glue_matches_the_glued_fixture() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("glued.json");
    assert_eq!(rifscope(&["construct", "glue", "--fixture", "faveform", "-o", path_str(&out)]), 0);
    let f = read_rif(&out);
    let g = catalog("glued-fave").unwrap();
    assert_eq!(f.bidegree(), g.bidegree());
    let z = (Complex64::new(0.3, -0.2), Complex64::new(-0.1, 0.45));
    assert!((f.eval(z.0, z.1) - g.eval(z.0, z.1)).norm() < 1e-12);
    assert!(torus_modulus_defect(&f) < 1e-10);
}

#[test]
fn construct_transfer_accepts_real_and_complex_entries() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.json");
    let y = dir.path().join("y.json");
    std::fs::write(&a, "[[0, 1, 0, 1], [1, 0, 1, 0], [0, 1, 0, 1], [[1, 0], 0, 1, 0]]").unwrap();
    std::fs::write(&y, "[[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 0]]").unwrap();
    let out = dir.path().join("f.json");
    assert_eq!(
        rifscope(&["construct", "transfer", path_str(&a), path_str(&y), "-o", path_str(&out)]),
        0
    );
    let f = read_rif(&out);
    let g = catalog("bickel-pascoe").unwrap();
    let z = (Complex64::new(0.2, 0.1), Complex64::new(-0.3, 0.25));
    assert!((f.eval(z.0, z.1) - g.eval(z.0, z.1)).norm() < 1e-12);
}

#[test]
fn bad_input_exits_with_one() {
    let dir = TempDir::new().unwrap();
    let missing = dir.path().join("missing.json");
    assert_eq!(rifscope(&["analyze", path_str(&missing)]), 1);
    assert_eq!(rifscope(&["analyze", "--fixture", "no-such-fixture"]), 1);
    assert_eq!(rifscope(&["analyze"]), 1);
    assert_eq!(rifscope(&["frobnicate"]), 1);

    let garbage = dir.path().join("garbage.json");
    std::fs::write(&garbage, "{ not json").unwrap();
    assert_eq!(rifscope(&["verify", path_str(&garbage)]), 1);

    let unstable = dir.path().join("unstable.json");
    std::fs::write(
        &unstable,
        r#"{"p": {"bidegree": [1, 0], "coeffs": [[[-0.5, 0.0]], [[1.0, 0.0]]]}, "eta": [1.0, 0.0], "monomial": [0, 0]}"#,
    )
    .unwrap();
    assert_eq!(rifscope(&["analyze", path_str(&unstable)]), 1);

    let asymmetric = dir.path().join("r.json");
    std::fs::write(&asymmetric, serde_json::to_string(&BiPoly::from_real_terms(&[(0, 0, 1.0), (1, 1, -0.5)])).unwrap())
        .unwrap();
    assert_eq!(rifscope(&["construct", "embed", path_str(&asymmetric)]), 1);
}
