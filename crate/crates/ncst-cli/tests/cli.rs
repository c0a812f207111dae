//! End-to-end tests of the `ncst` binary: argument validation, exit codes,
//! output formats, reproducibility, and the published compare schema.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ncst"))
}

fn run(args: &[&str], dir: &Path) -> Output {
    bin()
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary should run")
}

fn assert_status(output: &Output, expected: i32) {
    assert_eq!(
        output.status.code(),
        Some(expected),
        "stdout:\n{}\nstderr:\n{}",
        String::from_utf8_lossy(&output.stdout),
        String::from_utf8_lossy(&output.stderr)
    );
}

fn stderr(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

fn read(path: &Path) -> String {
    fs::read_to_string(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

// ---------------------------------------------------------------------------
// sample

#[test]
fn sample_reruns_are_byte_identical_and_seeds_differ() {
    let dir = tempfile::tempdir().unwrap();
    let args = |out: &str| {
        [
            "sample", "--dist", "ncst", "--xi", "1,2", "--omega", "4,1", "--alpha", "3,3", "--r",
            "3", "-n", "50", "--seed", "42", "--out", out,
        ]
        .map(String::from)
    };
    let a1 = args("a.csv");
    let a1: Vec<&str> = a1.iter().map(String::as_str).collect();
    assert_status(&run(&a1, dir.path()), 0);
    let first = read(&dir.path().join("a.csv"));

    let a2 = args("b.csv");
    let a2: Vec<&str> = a2.iter().map(String::as_str).collect();
    assert_status(&run(&a2, dir.path()), 0);
    assert_eq!(first, read(&dir.path().join("b.csv")));

    let other = run(
        &[
            "sample", "--dist", "ncst", "--xi", "1,2", "--omega", "4,1", "--alpha", "3,3", "--r",
            "3", "-n", "50", "--seed", "43", "--out", "c.csv",
        ],
        dir.path(),
    );
    assert_status(&other, 0);
    assert_ne!(first, read(&dir.path().join("c.csv")));

    // Values carry full round-trip precision and the manifest records the run.
    let line = first.lines().nth(1).unwrap();
    for field in line.split(',') {
        let _: f64 = field.parse().expect("full-precision float");
    }
    let manifest: Value =
        serde_json::from_str(&read(&dir.path().join("a.csv.manifest.json"))).unwrap();
    assert_eq!(manifest["command"], "sample");
    assert_eq!(manifest["seed"], 42);
    assert_eq!(manifest["outputs"][0], "a.csv");
}

#[test]
fn sample_without_r_is_invalid_for_the_heavy_tailed_family() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        &[
            "sample", "--dist", "ncst", "--xi", "0", "--omega", "1", "-n", "5", "--seed", "1",
            "--out", "x.csv",
        ],
        dir.path(),
    );
    assert_status(&out, 2);
    assert!(stderr(&out).contains("--r"), "{}", stderr(&out));
}

#[test]
fn sample_rejects_a_stray_r_for_the_skew_normal() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        &[
            "sample", "--dist", "sn", "--xi", "0", "--omega", "1", "--r", "3", "-n", "5", "--seed",
            "1", "--out", "x.csv",
        ],
        dir.path(),
    );
    assert_status(&out, 2);
}

#[test]
fn sample_emits_json_tables_on_request() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        &[
            "sample", "--dist", "sn", "--xi", "0,0", "--omega", "1,1", "-n", "4", "--seed", "5",
            "--out", "x.json", "--format", "json",
        ],
        dir.path(),
    );
    assert_status(&out, 0);
    let doc: Value = serde_json::from_str(&read(&dir.path().join("x.json"))).unwrap();
    assert_eq!(doc["columns"], serde_json::json!(["t1", "t2"]));
    assert_eq!(doc["rows"].as_array().unwrap().len(), 4);
}

// ---------------------------------------------------------------------------
// density

#[test]
fn density_matches_the_closed_form_at_the_skew_normal_center() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("pts.csv"), "t1\n0.5\n").unwrap();
    let out = run(
        &[
            "density", "--dist", "sn", "--xi", "0.5", "--omega", "2", "--points", "pts.csv",
            "--seed", "0", "--out", "d.csv",
        ],
        dir.path(),
    );
    assert_status(&out, 0);
    let body = read(&dir.path().join("d.csv"));
    let last = body.lines().last().unwrap().split(',').next_back().unwrap();
    let got: f64 = last.parse().unwrap();
    // At x = xi with alpha = 0 the density is the normal density at zero.
    let expected = -0.5 * (2.0 * std::f64::consts::PI * 2.0_f64).ln();
    assert!(
        (got - expected).abs() < 1e-12,
        "got {got}, expected {expected}"
    );
}

#[test]
fn density_scans_are_reproducible_for_a_seed() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("pts.csv"), "t1,t2\n1,2\n3,3\n-1,0\n").unwrap();
    let args = |out: &str| {
        [
            "density", "--dist", "ncst", "--xi", "1,2", "--omega", "4,1", "--alpha", "3,3", "--r",
            "3", "--points", "pts.csv", "-M", "2000", "--seed", "7", "--out", out,
        ]
        .map(String::from)
    };
    for out in ["d1.csv", "d2.csv"] {
        let a = args(out);
        let a: Vec<&str> = a.iter().map(String::as_str).collect();
        assert_status(&run(&a, dir.path()), 0);
    }
    assert_eq!(
        read(&dir.path().join("d1.csv")),
        read(&dir.path().join("d2.csv"))
    );
}

#[test]
fn density_rejects_points_of_the_wrong_dimension() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("pts.csv"), "t1\n0.5\n").unwrap();
    let out = run(
        &[
            "density", "--dist", "sn", "--xi", "0,0", "--omega", "1,1", "--points", "pts.csv",
            "--seed", "0", "--out", "d.csv",
        ],
        dir.path(),
    );
    assert_status(&out, 2);
    assert!(stderr(&out).contains("2-dimensional"), "{}", stderr(&out));
}

// ---------------------------------------------------------------------------
// fit / compare

fn write_fixture(dir: &Path, n: usize, seed: u64) -> PathBuf {
    let path = dir.join("data.csv");
    let out = run(
        &[
            "sample",
            "--dist",
            "ncst",
            "--xi",
            "1,2",
            "--omega",
            "4,0,0,1",
            "--alpha",
            "3,0",
            "--r",
            "1",
            "-n",
            &n.to_string(),
            "--seed",
            &seed.to_string(),
            "--out",
            path.to_str().unwrap(),
        ],
        dir,
    );
    assert_status(&out, 0);
    path
}

#[test]
fn fit_writes_a_document_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    write_fixture(dir.path(), 80, 21);
    let out = run(
        &[
            "fit", "--data", "data.csv", "--model", "mvn", "--seed", "3", "--out", "fit.json",
        ],
        dir.path(),
    );
    assert_status(&out, 0);
    let doc: Value = serde_json::from_str(&read(&dir.path().join("fit.json"))).unwrap();
    assert_eq!(doc["fit"]["family"], "MVN");
    assert_eq!(doc["fit"]["n_obs"], 80);
    assert!(doc["fit"]["alpha"].is_null());
    assert!(doc["standardize"].is_null());
    let manifest: Value =
        serde_json::from_str(&read(&dir.path().join("fit.json.manifest.json"))).unwrap();
    assert_eq!(manifest["command"], "fit");
}

#[test]
fn fit_standardize_reports_the_transformation() {
    let dir = tempfile::tempdir().unwrap();
    write_fixture(dir.path(), 80, 22);
    let out = run(
        &[
            "fit",
            "--data",
            "data.csv",
            "--model",
            "mvn",
            "--seed",
            "3",
            "--standardize",
            "--out",
            "fit.json",
        ],
        dir.path(),
    );
    assert_status(&out, 0);
    let doc: Value = serde_json::from_str(&read(&dir.path().join("fit.json"))).unwrap();
    let sds = doc["standardize"]["sds"].as_array().unwrap();
    assert_eq!(sds.len(), 2);
    // Standardized data has (population-rescaled) unit sample variance, so
    // the fitted normal scale diagonal sits near 1.
    let omega00 = doc["fit"]["omega"][0][0].as_f64().unwrap();
    assert!((omega00 - 1.0).abs() < 0.05, "omega00 = {omega00}");
}

#[test]
fn fit_at_the_iteration_cap_still_writes_results_and_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    write_fixture(dir.path(), 40, 23);
    let out = run(
        &[
            "fit",
            "--data",
            "data.csv",
            "--model",
            "ncst",
            "--seed",
            "3",
            "-M",
            "100",
            "--report-draws",
            "100",
            "--nm-max-iter",
            "1",
            "--nm-restarts",
            "0",
            "--out",
            "fit.json",
        ],
        dir.path(),
    );
    assert_status(&out, 4);
    let doc: Value = serde_json::from_str(&read(&dir.path().join("fit.json"))).unwrap();
    assert_eq!(doc["fit"]["converged"], Value::Bool(false));
    assert_eq!(doc["fit"]["family"], "NCST");
}

#[test]
fn compare_document_validates_against_the_shipped_schema() {
    let dir = tempfile::tempdir().unwrap();
    write_fixture(dir.path(), 60, 24);
    let args = [
        "compare",
        "--data",
        "data.csv",
        "--seed",
        "5",
        "-M",
        "300",
        "--report-draws",
        "600",
        "--nm-max-iter",
        "150",
        "--nm-restarts",
        "0",
        "--out",
        "cmp.json",
    ];
    assert_status(&run(&args, dir.path()), 0);
    let body = read(&dir.path().join("cmp.json"));
    let doc: Value = serde_json::from_str(&body).unwrap();

    let schema_path =
        Path::new(env!("CARGO_MANIFEST_DIR")).join("../../schemas/compare.schema.json");
    let schema: Value = serde_json::from_str(&read(&schema_path)).unwrap();
    if let Err(violation) = schema::validate(&schema, &doc) {
        panic!("schema violation: {violation}\ndocument:\n{body}");
    }

    // Models are sorted by ascending AIC; reruns are byte-identical.
    let aics: Vec<f64> = doc["models"]
        .as_array()
        .unwrap()
        .iter()
        .map(|m| m["aic"].as_f64().unwrap())
        .collect();
    assert!(aics.windows(2).all(|w| w[0] <= w[1]), "{aics:?}");

    let rerun = [
        "compare",
        "--data",
        "data.csv",
        "--seed",
        "5",
        "-M",
        "300",
        "--report-draws",
        "600",
        "--nm-max-iter",
        "150",
        "--nm-restarts",
        "0",
        "--out",
        "cmp2.json",
    ];
    assert_status(&run(&rerun, dir.path()), 0);
    assert_eq!(body, read(&dir.path().join("cmp2.json")));
}

#[test]
fn compare_records_per_family_failures_without_aborting() {
    let dir = tempfile::tempdir().unwrap();
    write_fixture(dir.path(), 7, 25);
    let out = run(
        &[
            "compare", "--data", "data.csv", "--seed", "5", "--out", "cmp.json",
        ],
        dir.path(),
    );
    assert_status(&out, 0);
    let doc: Value = serde_json::from_str(&read(&dir.path().join("cmp.json"))).unwrap();
    assert_eq!(doc["models"].as_array().unwrap().len(), 1);
    assert_eq!(doc["models"][0]["family"], "MVN");
    assert_eq!(doc["failures"].as_array().unwrap().len(), 3);
    assert_eq!(doc["best_aic"], "MVN");
}

// ---------------------------------------------------------------------------
// quadform

#[test]
fn quadform_reports_the_reference_constants() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        &[
            "quadform",
            "--xi",
            "1,2",
            "--omega",
            "1,0,0,1",
            "--alpha",
            "3,3",
            "--r",
            "3",
            "--direction",
            "1,1",
            "-n",
            "0",
            "--out",
            "qf.json",
        ],
        dir.path(),
    );
    assert_status(&out, 0);
    let doc: Value = serde_json::from_str(&read(&dir.path().join("qf.json"))).unwrap();
    let a = &doc["analysis"];
    assert!((a["lambda"].as_f64().unwrap() - 4.5).abs() < 1e-12);
    assert!((a["c_alpha"].as_f64().unwrap() - 19.0_f64.sqrt()).abs() < 1e-12);
    assert!((a["alpha_star"].as_f64().unwrap() - (18.0_f64 / 19.0).sqrt()).abs() < 1e-12);
    assert!((a["nu"][0].as_f64().unwrap() - 3.0 / 2.0_f64.sqrt()).abs() < 1e-12);
    assert!(doc["validation"].is_null());
}

#[test]
fn quadform_validation_accepts_the_implied_reference() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        &[
            "quadform",
            "--xi",
            "1,2",
            "--omega",
            "1,0,0,1",
            "--alpha",
            "3,3",
            "--r",
            "3",
            "--w",
            "0.5,0.5,0.5,0.5",
            "-n",
            "20000",
            "--seed",
            "11",
            "--out",
            "qf.json",
        ],
        dir.path(),
    );
    assert_status(&out, 0);
    let doc: Value = serde_json::from_str(&read(&dir.path().join("qf.json"))).unwrap();
    let ks = doc["validation"]["ks"].as_f64().unwrap();
    assert!(ks < 0.02, "ks = {ks}");
    assert_eq!(doc["validation"]["qq"].as_array().unwrap().len(), 100);
}

#[test]
fn quadform_names_the_violated_condition_and_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    // W = I is not idempotent after scale-whitening against Omega = I/4.
    let out = run(
        &[
            "quadform",
            "--xi",
            "1,2",
            "--omega",
            "0.25,0.25",
            "--alpha",
            "3,3",
            "--r",
            "3",
            "--w",
            "1,0,0,1",
            "-n",
            "0",
        ],
        dir.path(),
    );
    assert_status(&out, 3);
    assert!(stderr(&out).contains("condition (i)"), "{}", stderr(&out));
}

#[test]
fn quadform_requires_a_seed_for_validation_draws() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        &[
            "quadform",
            "--xi",
            "1,2",
            "--omega",
            "1,1",
            "--alpha",
            "3,3",
            "--r",
            "3",
            "--direction",
            "1,1",
            "-n",
            "100",
        ],
        dir.path(),
    );
    assert_status(&out, 2);
    assert!(stderr(&out).contains("--seed"), "{}", stderr(&out));
}

// ---------------------------------------------------------------------------
// simstudy

#[test]
fn simstudy_emits_summaries_grids_and_a_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        &[
            "simstudy",
            "--study",
            "alpha-sweep",
            "-n",
            "2000",
            "--seed",
            "9",
            "--grid-points",
            "40",
            "--out-dir",
            "study",
        ],
        dir.path(),
    );
    assert_status(&out, 0);
    let base = dir.path().join("study");
    let summary = read(&base.join("summary.csv"));
    let lines: Vec<&str> = summary.lines().collect();
    assert_eq!(lines.len(), 1 + 6, "3 scenarios x 2 margins");
    assert!(lines[1].starts_with("alpha_sweep,alpha_0_0,t1,"));
    for name in [
        "density1d_alpha_0_0_t1.csv",
        "density1d_alpha_15_15_t2.csv",
        "density2d_alpha_3_3.csv",
        "manifest.json",
    ] {
        assert!(base.join(name).exists(), "missing {name}");
    }
    let manifest: Value = serde_json::from_str(&read(&base.join("manifest.json"))).unwrap();
    assert_eq!(manifest["outputs"].as_array().unwrap().len(), 10);
}

// ---------------------------------------------------------------------------
// wdbc

#[test]
fn wdbc_extracts_named_columns_from_headered_files() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("in.csv"),
        "id,diagnosis,fractal_dimension_se,concavity_se,symmetry_se,radius_mean\n\
         1,M,0.006,0.05,0.02,17.9\n\
         2,B,0.003,0.01,0.015,12.1\n",
    )
    .unwrap();
    let out = run(
        &["wdbc", "--input", "in.csv", "--out", "features.csv"],
        dir.path(),
    );
    assert_status(&out, 0);
    let body = read(&dir.path().join("features.csv"));
    let mut lines = body.lines();
    assert_eq!(
        lines.next().unwrap(),
        "concavity_se,symmetry_se,fractal_dimension_se"
    );
    let first: Vec<f64> = lines
        .next()
        .unwrap()
        .split(',')
        .map(|v| v.parse().unwrap())
        .collect();
    assert_eq!(first, vec![0.05, 0.02, 0.006]);
}

#[test]
fn wdbc_extracts_fixed_positions_from_headerless_files() {
    let dir = tempfile::tempdir().unwrap();
    let mut fields: Vec<String> = (0..32).map(|i| format!("{}.0", i)).collect();
    fields[1] = "M".to_string();
    fs::write(dir.path().join("in.csv"), fields.join(",") + "\n").unwrap();
    let out = run(
        &["wdbc", "--input", "in.csv", "--out", "features.csv"],
        dir.path(),
    );
    assert_status(&out, 0);
    let body = read(&dir.path().join("features.csv"));
    let row: Vec<f64> = body
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .map(|v| v.parse().unwrap())
        .collect();
    assert_eq!(row, vec![18.0, 20.0, 21.0]);
}

#[test]
fn wdbc_names_missing_columns() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("in.csv"),
        "id,concavity_se,symmetry_se\n1,0.05,0.02\n",
    )
    .unwrap();
    let out = run(&["wdbc", "--input", "in.csv", "--out", "f.csv"], dir.path());
    assert_status(&out, 2);
    assert!(
        stderr(&out).contains("fractal_dimension_se"),
        "{}",
        stderr(&out)
    );
}

#[test]
fn wdbc_rejects_negative_values_with_the_line_number() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("in.csv"),
        "concavity_se,symmetry_se,fractal_dimension_se\n0.05,0.02,0.006\n-0.01,0.02,0.006\n",
    )
    .unwrap();
    let out = run(&["wdbc", "--input", "in.csv", "--out", "f.csv"], dir.path());
    assert_status(&out, 2);
    let msg = stderr(&out);
    assert!(msg.contains("line 3"), "{msg}");
    assert!(msg.contains("concavity_se"), "{msg}");
}

// ---------------------------------------------------------------------------
// A small JSON-Schema interpreter covering the subset the shipped schema
// uses, so the schema file itself is what the test enforces.

mod schema {
    use serde_json::Value;

    pub fn validate(schema: &Value, instance: &Value) -> Result<(), String> {
        check(schema, instance, schema, "$")
    }

    fn check(schema: &Value, instance: &Value, root: &Value, path: &str) -> Result<(), String> {
        let obj = schema
            .as_object()
            .ok_or_else(|| format!("{path}: schema node is not an object"))?;

        if let Some(reference) = obj.get("$ref").and_then(Value::as_str) {
            let target = resolve(reference, root)
                .ok_or_else(|| format!("{path}: unresolvable $ref {reference}"))?;
            return check(target, instance, root, path);
        }

        if let Some(any_of) = obj.get("anyOf").and_then(Value::as_array) {
            let mut errors = Vec::new();
            for candidate in any_of {
                match check(candidate, instance, root, path) {
                    Ok(()) => return Ok(()),
                    Err(e) => errors.push(e),
                }
            }
            return Err(format!(
                "{path}: no anyOf branch matched ({})",
                errors.join("; ")
            ));
        }

        if let Some(expected) = obj.get("type").and_then(Value::as_str) {
            let ok = match expected {
                "object" => instance.is_object(),
                "array" => instance.is_array(),
                "string" => instance.is_string(),
                "number" => instance.is_number(),
                "integer" => instance.is_i64() || instance.is_u64(),
                "boolean" => instance.is_boolean(),
                "null" => instance.is_null(),
                other => return Err(format!("{path}: unsupported type {other}")),
            };
            if !ok {
                return Err(format!("{path}: expected {expected}, got {instance}"));
            }
        }

        if let Some(allowed) = obj.get("enum").and_then(Value::as_array) {
            if !allowed.contains(instance) {
                return Err(format!("{path}: {instance} not in enum"));
            }
        }

        if let Some(minimum) = obj.get("minimum").and_then(Value::as_f64) {
            let value = instance
                .as_f64()
                .ok_or_else(|| format!("{path}: minimum on non-number"))?;
            if value < minimum {
                return Err(format!("{path}: {value} below minimum {minimum}"));
            }
        }

        if let Some(map) = instance.as_object() {
            if let Some(required) = obj.get("required").and_then(Value::as_array) {
                for key in required {
                    let key = key.as_str().unwrap_or_default();
                    if !map.contains_key(key) {
                        return Err(format!("{path}: missing required property {key}"));
                    }
                }
            }
            let properties = obj.get("properties").and_then(Value::as_object);
            if let Some(props) = properties {
                for (key, sub) in props {
                    if let Some(value) = map.get(key) {
                        check(sub, value, root, &format!("{path}.{key}"))?;
                    }
                }
            }
            if obj.get("additionalProperties") == Some(&Value::Bool(false)) {
                for key in map.keys() {
                    if !properties.is_some_and(|p| p.contains_key(key)) {
                        return Err(format!("{path}: unexpected property {key}"));
                    }
                }
            }
        }

        if let Some(items) = instance.as_array() {
            if let Some(min_items) = obj.get("minItems").and_then(Value::as_u64) {
                if (items.len() as u64) < min_items {
                    return Err(format!("{path}: fewer than {min_items} items"));
                }
            }
            if let Some(item_schema) = obj.get("items") {
                for (i, item) in items.iter().enumerate() {
                    check(item_schema, item, root, &format!("{path}[{i}]"))?;
                }
            }
        }

        Ok(())
    }

    fn resolve<'a>(reference: &str, root: &'a Value) -> Option<&'a Value> {
        let mut node = root;
        for piece in reference.strip_prefix("#/")?.split('/') {
            node = node.get(piece)?;
        }
        Some(node)
    }
}
