use std::fs;
use std::path::Path;

use cyclab_cli::{execute, run, Artifact, Command, MANIFEST_FILE};
use serde_json::Value;

fn artifact<'a>(artifacts: &'a [Artifact], name: &str) -> &'a Artifact {
    artifacts.iter().find(|a| a.name == name).unwrap_or_else(|| panic!("missing {name}"))
}

fn csv_rows(artifact: &Artifact) -> Vec<Vec<String>> {
    let mut reader = csv::Reader::from_reader(artifact.bytes.as_slice());
    reader.records().map(|r| r.unwrap().iter().map(str::to_string).collect()).collect()
}

fn schema_errors(schema_file: &str, artifact: &Artifact) -> Vec<String> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas").join(schema_file);
    let schema: Value = serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap();
    let instance: Value = serde_json::from_slice(&artifact.bytes).unwrap();
    let compiled = jsonschema::JSONSchema::compile(&schema).expect("schema compiles");
    let errors = match compiled.validate(&instance) {
        Ok(()) => Vec::new(),
        Err(errors) => errors.map(|e| format!("{} at {}", e, e.instance_path)).collect(),
    };
    errors
}

fn assert_valid(schema_file: &str, artifact: &Artifact) {
    let errors = schema_errors(schema_file, artifact);
    assert!(errors.is_empty(), "{} fails {schema_file}: {errors:?}", artifact.name);
}

const SMALL_VERIFY: &str = "seed = 11\n[verify]\nsamples = 40\nradius = 6\n";

#[test]
fn verify_is_byte_identical_across_runs_and_worker_counts() {
    let first = execute(Command::Verify, SMALL_VERIFY, None, 1).unwrap();
    let second = execute(Command::Verify, SMALL_VERIFY, None, 3).unwrap();
    assert_eq!(first, second);
    let other_seed = execute(Command::Verify, SMALL_VERIFY, Some(12), 1).unwrap();
    assert_ne!(artifact(&first, "verify.csv"), artifact(&other_seed, "verify.csv"));
}

#[test]
fn verify_without_seed_is_rejected() {
    let err = execute(Command::Verify, "[verify]\nsamples = 5\n", None, 1).unwrap_err();
    assert!(format!("{err:#}").contains("needs a seed"), "{err:#}");
}

#[test]
fn verify_suites_pass_and_reports_validate() {
    let artifacts = execute(Command::Verify, SMALL_VERIFY, None, 2).unwrap();
    let rows = csv_rows(artifact(&artifacts, "verify.csv"));
    assert_eq!(rows.len(), 16);
    for row in &rows {
        assert_eq!(row[4], "40", "{row:?}");
        assert_eq!(row[5], "0", "{row:?}");
    }
    assert_valid("verify.schema.json", artifact(&artifacts, "verify.json"));
    assert_valid("manifest.schema.json", artifact(&artifacts, MANIFEST_FILE));
}

#[test]
fn manifest_records_hashes_of_every_output() {
    let artifacts = execute(Command::Verify, SMALL_VERIFY, None, 1).unwrap();
    let manifest: Value = serde_json::from_slice(&artifact(&artifacts, MANIFEST_FILE).bytes).unwrap();
    assert_eq!(manifest["seed"], 11);
    assert_eq!(manifest["command"], "verify");
    let outputs = manifest["outputs"].as_array().unwrap();
    assert_eq!(outputs.len(), artifacts.len() - 1);
    for entry in outputs {
        let file = artifact(&artifacts, entry["file"].as_str().unwrap());
        assert_eq!(entry["sha256"], cyclab_cli::output::sha256_hex(&file.bytes));
    }
}

#[test]
fn files_written_by_run_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("verify.toml");
    fs::write(&config, SMALL_VERIFY).unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    let first = run(Command::Verify, &config, &a, None, 2).unwrap();
    let second = run(Command::Verify, &config, &b, None, 1).unwrap();
    assert_eq!(first.len(), 3);
    for (x, y) in first.iter().zip(&second) {
        assert_eq!(x.file_name(), y.file_name());
        assert_eq!(fs::read(x).unwrap(), fs::read(y).unwrap());
    }
}

#[test]
fn config_errors_name_the_line() {
    let source = "seed = 1\n[scan]\np = [1.5]\nbeta = [0.1]\nlambda = [\"1/3\"]\ndegrees = [4, 8]\nsolver = { tolerance = 1e-8, max_iter = 4 }\n";
    let err = execute(Command::Scan, source, None, 1).unwrap_err();
    let message = format!("{err:#}");
    assert!(message.contains("config line 7"), "{message}");
    assert!(message.contains("max_iter"), "{message}");

    let source = "[scan]\np = [1.5]\nbeta = [0.1]\nlambda = [\"1/3\"]\ndegrees = [8, 4]\n";
    let message = format!("{:#}", execute(Command::Scan, source, None, 1).unwrap_err());
    assert!(message.contains("config line 5") && message.contains("increasing"), "{message}");

    // beta q = 0.7 * 3 > 1 for p = 1.5.
    let source = "[scan]\np = [1.5]\nbeta = [0.7]\nlambda = [\"1/3\"]\ndegrees = [4]\n";
    let message = format!("{:#}", execute(Command::Scan, source, None, 1).unwrap_err());
    assert!(message.contains("config line 3"), "{message}");
}

#[test]
fn missing_section_is_an_error() {
    let err = execute(Command::Cantor, "seed = 1\n", None, 1).unwrap_err();
    assert!(format!("{err:#}").contains("[cantor]"));
}

#[test]
fn empty_scan_grid_gives_header_only_csv() {
    let source = "[scan]\np = [1.5]\nbeta = [0.1]\nlambda = []\ndegrees = [4, 8]\n";
    let artifacts = execute(Command::Scan, source, None, 1).unwrap();
    assert_eq!(
        artifact(&artifacts, "scan.csv").bytes,
        b"p,beta,lambda,dim,cyclic_below,noncyclic_above,degree,error,certificate,trend\n"
    );
    assert_valid("scan.schema.json", artifact(&artifacts, "scan.json"));
}

#[test]
fn scan_regimes() {
    // p = 4/3: beta = 0.2 puts dim 2/3 above 1 − βq = 0.2, and beta = 0.1
    // puts dim 1/5 below (2/q)(1 − βq) = 0.3.
    let source = "[scan]\np = [1.3333333333333333]\nbeta = [0.1, 0.2]\nlambda = [\"1/5\", \"2/3\"]\ndegrees = [8, 16, 32]\n";
    let artifacts = execute(Command::Scan, source, None, 2).unwrap();
    assert_valid("scan.schema.json", artifact(&artifacts, "scan.json"));
    let rows = csv_rows(artifact(&artifacts, "scan.csv"));
    assert_eq!(rows.len(), 12);
    let value = |row: &Vec<String>, col: usize| row[col].parse::<f64>().unwrap();

    let above: Vec<_> = rows.iter().filter(|r| value(r, 3) > value(r, 5)).collect();
    assert!(above.len() >= 3);
    for row in &above {
        let certificate = value(row, 8);
        assert!(certificate > 0.0, "{row:?}");
        assert!(value(row, 7) >= certificate - 1e-9, "{row:?}");
    }

    let below: Vec<f64> = rows.iter().filter(|r| value(r, 3) < value(r, 4)).map(|r| value(r, 7)).collect();
    assert_eq!(below.len(), 3);
    assert!(below.windows(2).all(|w| w[1] < w[0]), "{below:?}");
}

#[test]
fn cantor_tables_and_hcover_turn() {
    let source = "[cantor]\nlambda = [\"1/3\", \"1/5\"]\nalphas = [0.45, 0.55]\nlevels = 40\nseries_levels = 40\n";
    let artifacts = execute(Command::Cantor, source, None, 2).unwrap();
    assert_valid("cantor.schema.json", artifact(&artifacts, "cantor.json"));
    let levels = csv_rows(artifact(&artifacts, "cantor_levels.csv"));
    assert_eq!(levels.len(), 80);
    assert_eq!(levels[0][0], "1/5");

    let series = |alpha: &str| -> Vec<(u32, f64)> {
        csv_rows(artifact(&artifacts, "cantor_hcover.csv"))
            .into_iter()
            .filter(|r| r[0] == "1/3" && r[2].starts_with(alpha))
            .map(|r| (r[3].parse().unwrap(), r[4].parse().unwrap()))
            .collect()
    };
    // Above the dimension 1/2 the cover sums fall at every level; below it
    // they rise once the 1/N correction in the digit counts has faded.
    let falling = series("5.5");
    assert!(falling.windows(2).all(|w| w[1].1 < w[0].1));
    let rising: Vec<_> = series("4.5").into_iter().filter(|(level, _)| *level >= 22).collect();
    assert!(rising.len() > 10);
    assert!(rising.windows(2).all(|w| w[1].1 > w[0].1));

    let report: Value = serde_json::from_slice(&artifact(&artifacts, "cantor.json").bytes).unwrap();
    let third = &report["schemes"][1];
    assert_eq!(third["lambda"], "1/3");
    assert_eq!(third["eidlin"][0]["verdict"], "bounded");
    assert_eq!(third["eidlin"][1]["verdict"], "diverging");
}

#[test]
fn capacity_flip_across_dimension() {
    let source = "[capacity]\nlambda = [\"1/3\"]\nalphas = [0.0, 0.45, 0.55]\n";
    let artifacts = execute(Command::Capacity, source, None, 1).unwrap();
    assert_valid("capacity.schema.json", artifact(&artifacts, "capacity.json"));
    let rows = csv_rows(artifact(&artifacts, "capacity.csv"));
    let verdicts: Vec<&str> = rows.iter().map(|r| r[12].as_str()).collect();
    assert_eq!(verdicts, ["", "bounded", "diverging"]);
    for row in &rows {
        assert!(row[9].parse::<f64>().unwrap() > 0.0, "{row:?}");
    }
}

#[test]
fn schemas_reject_malformed_reports() {
    let artifacts = execute(Command::Verify, SMALL_VERIFY, None, 1).unwrap();
    let mut report: Value = serde_json::from_slice(&artifact(&artifacts, "verify.json").bytes).unwrap();
    report["outcomes"][0]["suite"] = Value::from("bogus");
    let tampered = Artifact { name: "verify.json".into(), bytes: serde_json::to_vec(&report).unwrap() };
    assert!(!schema_errors("verify.schema.json", &tampered).is_empty());
}
