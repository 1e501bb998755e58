use ppwave_euler::spectra::chi_case_b;
use ppwave_euler::Params;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ppwave-euler")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

/// Header values and data rows (column line excluded).
fn split(text: &str) -> (Vec<(String, String)>, Vec<Vec<String>>) {
    let mut header = Vec::new();
    let mut rows = Vec::new();
    for line in text.lines() {
        if let Some(h) = line.strip_prefix("# ") {
            if let Some((k, v)) = h.split_once(" = ") {
                header.push((k.to_string(), v.to_string()));
            }
        } else {
            rows.push(line.split(',').map(str::to_string).collect());
        }
    }
    rows.remove(0);
    (header, rows)
}

fn meta<'a>(header: &'a [(String, String)], key: &str) -> &'a str {
    &header.iter().find(|(k, _)| k == key).unwrap_or_else(|| panic!("missing {key}")).1
}

#[test]
fn unknown_subcommand_is_a_usage_error() {
    let out = run(&["bogus"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).starts_with("error: kind=usage"));
}

#[test]
fn bad_flags_are_usage_errors() {
    assert_eq!(run(&["figures", "--which", "6"]).status.code(), Some(2));
    assert_eq!(run(&["spectrum", "--case", "A", "--k-range", "5..1"]).status.code(), Some(2));
    assert_eq!(run(&["spectrum", "--case", "A", "--levels", "3,1"]).status.code(), Some(2));
    let missing = run(&["energy", "--params", "/nonexistent/params.txt"]);
    assert_eq!(missing.status.code(), Some(2));
    assert!(stderr(&missing).starts_with("error: kind=io"));
}

#[test]
fn malformed_params_file_cites_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.txt");
    std::fs::write(&path, "[params]\nalpha_prime = 1\np_plus = one\nmu = 2\n").unwrap();
    let out = run(&["energy", "--params", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.starts_with("error: kind=parse") && err.contains("line 3"), "{err}");
}

#[test]
fn numeric_failure_exits_with_three() {
    let out = run(&["spectrum", "--case", "C", "--k-range", "1000000000..1000000000"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).starts_with("error: kind=no_bracket"), "{}", stderr(&out));
}

#[test]
fn case_a_spectrum_has_two_branches_per_k() {
    let out = run(&["spectrum", "--case", "A", "--k-range", "1..5"]);
    assert!(out.status.success());
    let (header, rows) = split(&stdout(&out));
    assert_eq!(rows.len(), 10);
    let sq7 = 7f64.sqrt();
    let first: f64 = rows[0][2].parse().unwrap();
    let second: f64 = rows[1][2].parse().unwrap();
    assert!((first - (4.0 + sq7) / 3.0).abs() < 1e-12 && (second - (4.0 - sq7) / 3.0).abs() < 1e-12);
    assert!(meta(&header, "tool").starts_with("ppwave-euler "));
}

/// Each row is reproducible from the header alone.
#[test]
fn spectrum_rows_back_substitute_from_their_header() {
    let out = run(&["spectrum", "--case", "B", "--levels", "3,1", "--k-range", "0..6", "--fixed-amplitude", "2.5"]);
    assert!(out.status.success());
    let (header, rows) = split(&stdout(&out));
    let num = |k: &str| meta(&header, k).parse::<f64>().unwrap();
    let p = Params::new(num("alpha_prime"), num("p_plus"), num("mu"), num("phi")).unwrap();
    let rt = num("fixed_amplitude");
    assert_eq!(meta(&header, "k_without_solutions"), "0");
    assert_eq!(rows.len(), 12);
    for row in rows {
        let k: f64 = row[0].parse().unwrap();
        let r: f64 = row[2].parse().unwrap();
        assert!((chi_case_b(r, rt, 3, 1, &p).unwrap() - k).abs() < 1e-10);
    }
}

#[test]
fn case_c_spectrum_columns() {
    let out = run(&["spectrum", "--case", "C"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("\nk,p_plus,r_star,residual\n"));
    let (_, rows) = split(&text);
    assert_eq!(rows.len(), 5);
    for row in rows {
        assert!(row[3].parse::<f64>().unwrap() < 1e-10);
    }
}

#[test]
fn output_is_deterministic_and_out_matches_stdout() {
    let args = ["spectrum", "--case", "B", "--levels", "2,3", "--k-range", "1..8"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.csv");
    let mut with_out = args.to_vec();
    with_out.extend(["--out", path.to_str().unwrap()]);
    let c = run(&with_out);
    assert!(c.status.success() && c.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), a.stdout);
}

#[test]
fn energy_lattice_rows() {
    let out = run(&["energy"]);
    let (_, rows) = split(&stdout(&out));
    assert_eq!(rows.len(), 4);
    let h: Vec<f64> = rows.iter().map(|r| r[2].parse().unwrap()).collect();
    assert!(h.windows(2).all(|w| w[1] > w[0]));
    assert!((h[0] - 72.385_903_491_734_8).abs() < 1e-9);
}

#[test]
fn target_check_reports_vanishing_pfaffian() {
    let out = run(&["target-check", "--points", "25", "--seed", "7"]);
    let (header, rows) = split(&stdout(&out));
    assert!(meta(&header, "max_pfaffian").parse::<f64>().unwrap() < 1e-10);
    assert_eq!(meta(&header, "seed"), "7");
    assert_eq!(rows.len(), 11);
    assert_eq!(rows[2][1].parse::<f64>().unwrap(), std::f64::consts::PI.sqrt());
}

#[test]
fn iterated_integrals() {
    let out = run(&["integrate", "--method", "iterated"]);
    let (_, rows) = split(&stdout(&out));
    assert_eq!(rows.len(), 2);
    for row in rows {
        assert!((row[1].parse::<f64>().unwrap() + 0.75).abs() < 1e-4);
    }
}

#[test]
fn density_grid_marks_zeros() {
    let out = run(&["density", "--grid", "8"]);
    let (_, rows) = split(&stdout(&out));
    assert_eq!(rows.len(), 64);
    assert_eq!(rows[0][3], "NaN");
    let xy = run(&["density", "--chart", "xy", "--grid", "6"]);
    let (_, rows) = split(&stdout(&xy));
    assert_eq!(rows.len(), 36);
    assert!(rows.iter().all(|r| r[2].parse::<f64>().unwrap().is_finite()));
}

#[test]
fn first_figure_is_a_converging_sweep() {
    let out = run(&["figures", "--which", "1"]);
    assert!(out.status.success());
    let (header, rows) = split(&stdout(&out));
    assert_eq!(rows.len(), 17);
    assert_eq!(meta(&header, "figure"), "1");
    assert!((meta(&header, "extrapolated").parse::<f64>().unwrap() - 0.75).abs() < 1e-3);
    let last: f64 = rows[16][1].parse().unwrap();
    assert!((last - 0.75).abs() < 1e-6);
}

#[test]
fn lattice_figures() {
    let (_, rows) = split(&stdout(&run(&["figures", "--which", "4"])));
    assert_eq!(rows.len(), 50);
    let (_, rows) = split(&stdout(&run(&["figures", "--which", "5"])));
    assert_eq!(rows.len(), 4);
}
