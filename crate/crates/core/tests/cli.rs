use std::fs;

use zq_distance::cli::run;

fn zqdist(args: &[&str]) -> i32 {
    run(std::iter::once("zqdist").chain(args.iter().copied()))
}

#[test]
fn sphere_rows_for_z3_cubed() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sphere.csv");
    assert_eq!(
        zqdist(&[
            "sphere",
            "--q",
            "3",
            "--d",
            "3",
            "--all-t",
            "--out",
            out.to_str().unwrap()
        ]),
        0
    );
    let text = fs::read_to_string(&out).unwrap();
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let headers = reader.headers().unwrap().clone();
    let col = |name: &str| headers.iter().position(|h| h == name).unwrap();
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    let got: Vec<(&str, &str, &str)> = rows
        .iter()
        .map(|r| {
            (
                &r[col("t")],
                &r[col("count_enumerated")],
                &r[col("error_term")],
            )
        })
        .collect();
    assert_eq!(
        got,
        vec![("0", "9", "0.0"), ("1", "6", "-3.0"), ("2", "12", "3.0")]
    );
    assert!(rows
        .iter()
        .all(|r| r[col("ratio_to_bound")].parse::<f64>().unwrap() <= 1.0));
    assert!(!text.contains('\r'));
}

#[test]
fn gauss_verify_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("gauss.json");
    let out = out.to_str().unwrap();
    assert_eq!(
        zqdist(&["gauss", "--verify", "--n-max", "99", "--format", "json", "--out", out]),
        0
    );
    let rows: Vec<serde_json::Value> =
        serde_json::from_str(&fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(rows.len(), 99);
    assert!(rows.iter().all(|r| r["pass"] == true));
}

#[test]
fn even_weight_construction_has_only_distance_zero() {
    let dir = tempfile::tempdir().unwrap();
    let set = dir.path().join("ew.txt");
    let table = dir.path().join("nu.csv");
    assert_eq!(
        zqdist(&[
            "construct",
            "even-weight",
            "--d",
            "3",
            "--out",
            set.to_str().unwrap()
        ]),
        0
    );
    let text = fs::read_to_string(&set).unwrap();
    assert_eq!(text.lines().count(), 1 + 4);
    assert_eq!(
        zqdist(&[
            "nu",
            "--input",
            set.to_str().unwrap(),
            "--out",
            table.to_str().unwrap()
        ]),
        0
    );
    let mut reader = csv::Reader::from_path(&table).unwrap();
    let headers = reader.headers().unwrap().clone();
    let t = headers.iter().position(|h| h == "t").unwrap();
    let inside = headers.iter().position(|h| h == "in_distance_set").unwrap();
    let delta: Vec<String> = reader
        .records()
        .map(Result::unwrap)
        .filter(|r| &r[inside] == "true")
        .map(|r| r[t].to_string())
        .collect();
    assert_eq!(delta, vec!["0"]);
}

#[test]
fn nu_on_random_set_agrees_with_spectral() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("nu.csv");
    let args = [
        "nu",
        "--random",
        "40",
        "--q",
        "9",
        "--d",
        "3",
        "--seed",
        "3",
        "--sets",
        "3",
        "--out",
        out.to_str().unwrap(),
    ];
    assert_eq!(zqdist(&args), 0);
    let text = fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().count(), 1 + 3 * 9);
    assert!(!text.contains(",false\n"));
}

#[test]
fn certificate_on_lattice_is_silent_and_sound() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("cert.csv");
    let args = [
        "certificate",
        "--construct",
        "lattice",
        "--p",
        "3",
        "--l",
        "2",
        "--d",
        "3",
        "--c",
        "0.5",
        "--out",
        out.to_str().unwrap(),
    ];
    assert_eq!(zqdist(&args), 0);
    let mut reader = csv::Reader::from_path(&out).unwrap();
    let headers = reader.headers().unwrap().clone();
    let fired = headers
        .iter()
        .position(|h| h == "certificate_positive")
        .unwrap();
    let records: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(records.len(), 9);
    assert!(records.iter().all(|r| &r[fired] == "false"));
}

#[test]
fn out_dir_env_sets_default_path() {
    let dir = tempfile::tempdir().unwrap();
    std::env::set_var(zq_distance::cli::OUT_DIR_ENV, dir.path());
    let code = zqdist(&["spectrum", "--q", "5", "--d", "3", "--t", "1,2"]);
    std::env::remove_var(zq_distance::cli::OUT_DIR_ENV);
    assert_eq!(code, 0);
    let text = fs::read_to_string(dir.path().join("spectrum.csv")).unwrap();
    assert_eq!(text.lines().count(), 3);
    assert!(text.lines().next().unwrap().contains("ratio_to_bound"));
}

#[test]
fn malformed_point_file_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    fs::write(&bad, "q=3 d=3\n0,0,x\n").unwrap();
    assert_eq!(zqdist(&["nu", "--input", bad.to_str().unwrap()]), 2);
}
