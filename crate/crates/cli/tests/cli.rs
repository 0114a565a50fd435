use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const CLASSICAL: &str = "\
[timescale]
interval 0 1

[problem]
u = 1
L = v^2
alpha = 0
beta = 1
";

const ISO: &str = "\
[timescale]
interval 0 1

[problem]
u = 1
L = v^2
alpha = 0
beta = 0

[constraint]
w = 1
G = y
K = 0.16666666666666666
";

fn epitime(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_epitime")).args(args).output().unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn summary_value(text: &str, key: &str) -> String {
    text.lines()
        .find_map(|l| l.trim_start_matches("# ").strip_prefix(&format!("{key} = ")).map(str::to_string))
        .unwrap_or_else(|| panic!("no '{key}' in\n{text}"))
}

/// `(t, y)` pairs of a solution CSV.
fn columns(csv: &str) -> Vec<(f64, f64)> {
    csv.lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with('t'))
        .map(|l| {
            let mut f = l.split(',');
            (f.next().unwrap().parse().unwrap(), f.next().unwrap().parse().unwrap())
        })
        .collect()
}

#[test]
fn solve_classical_to_stdout() {
    let dir = TempDir::new().unwrap();
    let file = write(&dir, "classical.txt", CLASSICAL);
    let o = epitime(&["solve", s(&file)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stderr(&o).is_empty());
    let out = stdout(&o);
    let rows = columns(&out);
    assert_eq!(rows.len(), 1001);
    assert!(rows.iter().all(|(t, y)| (t - y).abs() <= 1e-6));
    let f: f64 = summary_value(&out, "functional_value").parse().unwrap();
    assert!((f - 1.0).abs() <= 1e-3);
    assert!(out.contains("t,y,residual\n"));
}

#[test]
fn solve_iso_with_out_file_prints_multiplier() {
    let dir = TempDir::new().unwrap();
    let file = write(&dir, "iso.txt", ISO);
    let csv = dir.path().join("sol.csv");
    let o = epitime(&["solve", s(&file), "--out", s(&csv)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    let lambda: f64 = summary_value(&out, "lambda").parse().unwrap();
    assert!((lambda - 4.0).abs() <= 1e-2);
    assert_eq!(summary_value(&out, "normal"), "true");
    assert_eq!(summary_value(&out, "lambda0"), "1.0000000000000000e0");
    let written = std::fs::read_to_string(&csv).unwrap();
    assert!(written.starts_with("t,y,residual\n"));
    let mid = columns(&written).into_iter().find(|(t, _)| *t == 0.5).unwrap();
    assert!((mid.1 - 0.25).abs() <= 1e-3);
}

#[test]
fn solve_honours_flags() {
    let dir = TempDir::new().unwrap();
    let file = write(&dir, "classical.txt", CLASSICAL);
    let o = epitime(&["solve", s(&file), "--h", "0.25", "--tol", "1e-8", "--max-iter", "5"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(columns(&stdout(&o)).len(), 5);
    let o = epitime(&["solve", s(&file), "--tol", "-1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn zero_direction_is_an_input_error() {
    let dir = TempDir::new().unwrap();
    let file = write(&dir, "zero.txt", &CLASSICAL.replace("u = 1", "u = 0"));
    let o = epitime(&["solve", s(&file)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).is_empty());
    let err = stderr(&o);
    assert!(err.contains("line 5"), "{err}");
    assert!(err.contains("nothing to minimize or maximize"));
}

#[test]
fn numerical_failure_exits_3() {
    let dir = TempDir::new().unwrap();
    // L = y + v has a constant Hessian of zero: Newton cannot take a step
    let file = write(&dir, "flat.txt", &CLASSICAL.replace("L = v^2", "L = y + v"));
    let o = epitime(&["solve", s(&file), "--h", "0.25"]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    assert!(stdout(&o).is_empty());
    assert!(!stderr(&o).is_empty());
}

#[test]
fn usage_errors_exit_1_help_exits_0() {
    assert_eq!(epitime(&[]).status.code(), Some(1));
    assert_eq!(epitime(&["solve"]).status.code(), Some(1));
    assert_eq!(epitime(&["bogus"]).status.code(), Some(1));
    assert_eq!(epitime(&["calc", "deriv", "--scale", "points 0 1"]).status.code(), Some(1));
    let help = epitime(&["--help"]);
    assert_eq!(help.status.code(), Some(0));
    assert!(stdout(&help).contains("solve"));
}

#[test]
fn missing_and_malformed_files_exit_2() {
    let dir = TempDir::new().unwrap();
    let o = epitime(&["solve", s(&dir.path().join("absent.txt"))]);
    assert_eq!(o.status.code(), Some(2));
    let file = write(&dir, "bad.txt", &CLASSICAL.replace("v^2", "v^^2"));
    let o = epitime(&["solve", s(&file)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 6"));
}

#[test]
fn residual_of_solution_and_of_perturbation() {
    let dir = TempDir::new().unwrap();
    let file = write(&dir, "classical.txt", CLASSICAL);
    let sol = epitime(&["solve", s(&file), "--h", "0.1"]);
    let y = write(&dir, "y.csv", &stdout(&sol));
    let o = epitime(&["residual", s(&file), "--y", s(&y), "--h", "0.1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let rows = columns(&stdout(&o));
    assert_eq!(rows.len(), 9);
    assert!(rows.iter().all(|(_, r)| r.abs() <= 1e-10));

    let mut bumped = String::from("t,y\n");
    for i in 0..=10 {
        let t = i as f64 / 10.0;
        bumped.push_str(&format!("{t},{}\n", t + 0.1 * t * (1.0 - t)));
    }
    let y = write(&dir, "bumped.csv", &bumped);
    let o = epitime(&["residual", s(&file), "--y", s(&y), "--h", "0.1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(columns(&stdout(&o)).iter().all(|(_, r)| r.abs() > 0.1));

    let short = write(&dir, "short.csv", "t,y\n0,0\n1,1\n");
    let o = epitime(&["residual", s(&file), "--y", s(&short), "--h", "0.1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn epideriv_examples() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "f.csv", "t,value\n0,0\n1,2\n");
    let run = |t: &str, u: &str| {
        let o = epitime(&["epideriv", "--scale", "points 0 1", "--f", s(&f), "--t", t, "--u", u]);
        (o.status.code(), stdout(&o))
    };
    assert_eq!(run("0", "1"), (Some(0), "closed,liminf\n2.0000000000000000e0,2.0000000000000000e0\n".into()));
    assert_eq!(run("0.5", "0"), (Some(0), "closed,liminf\n0.0000000000000000e0,0.0000000000000000e0\n".into()));
    assert_eq!(run("0", "-1"), (Some(0), "closed,liminf\ninf,inf\n".into()));
    assert_eq!(run("2", "1").0, Some(2));

    let scale = write(&dir, "scale.txt", "points 0 1\n");
    let o = epitime(&["epideriv", s(&scale), "--fn", "2*t", "--t", "1", "--u", "-0.5"]);
    assert_eq!(stdout(&o), "closed,liminf\n-1.0000000000000000e0,-1.0000000000000000e0\n");
}

#[test]
fn calc_examples() {
    let o = epitime(&["calc", "deriv", "--scale", "points 0 1 2 3 4", "--fn", "t^2"]);
    let d = columns(&stdout(&o));
    assert_eq!(d, vec![(0.0, 1.0), (1.0, 3.0), (2.0, 5.0), (3.0, 7.0)]);
    let o = epitime(&["calc", "int", "--scale", "points 0 1 2 3", "--fn", "1"]);
    assert_eq!(stdout(&o), "3.0000000000000000e0\n");
    let o = epitime(&["calc", "nint", "--scale", "points 0 1 2 3", "--fn", "t"]);
    assert_eq!(stdout(&o), "6.0000000000000000e0\n");
    let o = epitime(&["calc", "int", "--scale", "points 0 1 2 3", "--fn", "t", "--from", "1", "--to", "3"]);
    assert_eq!(stdout(&o), "3.0000000000000000e0\n");
    let o = epitime(&["calc", "nabla", "--scale", "points 0 1 2", "--fn", "t^2"]);
    assert_eq!(columns(&stdout(&o)), vec![(1.0, 1.0), (2.0, 3.0)]);
    let o = epitime(&["calc", "int", "--scale", "points 0 1 2 3", "--fn", "y"]);
    assert_eq!(o.status.code(), Some(2));
    let o = epitime(&["calc", "int", "--scale", "points 0 1 2 3", "--fn", "t", "--from", "0.5"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn output_is_byte_identical_across_runs() {
    let dir = TempDir::new().unwrap();
    let file = write(&dir, "iso.txt", ISO);
    let a = epitime(&["solve", s(&file), "--h", "0.01"]);
    let b = epitime(&["solve", s(&file), "--h", "0.01"]);
    assert_eq!(a.stdout, b.stdout);
    assert!(!a.stdout.is_empty());
}

#[test]
fn bundled_problems_solve() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("problems");
    let mut count = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let o = epitime(&["solve", s(&path)]);
        assert_eq!(o.status.code(), Some(0), "{}: {}", path.display(), stderr(&o));
        let r: f64 = summary_value(&stdout(&o), "residual_max").parse().unwrap();
        assert!(r < 1e-8, "{}: residual {r}", path.display());
        count += 1;
    }
    assert!(count >= 5);
}
