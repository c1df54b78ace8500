use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn weakdiam(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_weakdiam")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_string_lossy().into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p: PathBuf = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn gen_grid_counts() {
    let out = weakdiam(&["gen", "grid", "--d", "2", "--m", "3"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert_eq!(text.lines().filter(|l| l.starts_with("v ")).count(), 9);
    assert_eq!(text.lines().filter(|l| l.starts_with("e ")).count(), 12);

    let out = weakdiam(&["gen", "tree", "--n", "1"]);
    assert_eq!(stdout(&out).lines().filter(|l| l.starts_with("v ")).count(), 1);
    assert_eq!(code(&weakdiam(&["gen", "grid"])), 2);
}

#[test]
fn colour_then_verify_round_trip() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    let (g, td, out_dir) = (path(dir, "t.g"), path(dir, "t.td"), path(dir, "out"));
    assert_eq!(code(&weakdiam(&["gen", "tree", "--n", "60", "--seed", "5", "--out", &g, "--td-out", &td])), 0);
    let out = weakdiam(&["color", "--graph", &g, "--td", &td, "--r", "1", "--r", "3", "--out-dir", &out_dir, "--mode", "test"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).contains("r=1 certified_d=1180"));
    let cert = std::fs::read_to_string(dir.join("out/certificate_r1.txt")).unwrap();
    assert!(cert.lines().any(|l| l == "d 1180"));
    assert!(cert.lines().any(|l| l == "m 2"));

    let colouring = path(dir, "out/colouring_r3.txt");
    let csv = path(dir, "report.csv");
    let out = weakdiam(&["verify", "--graph", &g, "--colouring", &colouring, "--r", "3", "--d", "3540", "--csv", &csv]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).starts_with("component_id,color,size,weak_diameter\n"));
    assert_eq!(std::fs::read_to_string(&csv).unwrap(), stdout(&out));

    assert_eq!(code(&weakdiam(&["verify", "--graph", &g, "--colouring", &colouring, "--r", "3", "--d", "0"])), 1);
    assert_eq!(code(&weakdiam(&["verify", "--graph", &g, "--colouring", &colouring, "--r", "0", "--d", "1"])), 2);
}

#[test]
fn colour_errors() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    let g = path(dir, "big.g");
    assert_eq!(code(&weakdiam(&["gen", "tree", "--n", "40", "--out", &g])), 0);
    let out = weakdiam(&["color", "--graph", &g, "--r", "1", "--out-dir", &path(dir, "o")]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("exact treewidth limit"));

    let (grid, part, td) = (path(dir, "grid.g"), path(dir, "grid.p"), path(dir, "grid.td"));
    assert_eq!(code(&weakdiam(&["gen", "grid", "--m", "4", "--out", &grid, "--partition-out", &part, "--td-out", &td])), 0);
    let out = weakdiam(&["color", "--graph", &grid, "--partition", &part, "--td", &td, "--pipeline", "partition", "--r", "1", "--out-dir", &path(dir, "o")]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("l-almost"));
    let out = weakdiam(&["color", "--graph", &grid, "--partition", &part, "--td", &td, "--pipeline", "partition", "--r", "3", "--out-dir", &path(dir, "o")]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("certified_d=3540"));

    let bad = write(dir, "bad.g", "e 0 1 -1\n");
    assert_eq!(code(&weakdiam(&["color", "--graph", &bad, "--r", "1", "--out-dir", &path(dir, "o")])), 2);
}

#[test]
fn small_graphs_without_a_decomposition() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    let g = write(dir, "k4.g", "e 0 1 1\ne 0 2 1\ne 0 3 1\ne 1 2 1\ne 1 3 1\ne 2 3 1\n");
    let out = weakdiam(&["color", "--graph", &g, "--r", "1", "--out-dir", &path(dir, "o"), "--mode", "test"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let colouring = path(dir, "o/colouring_r1.txt");
    assert_eq!(code(&weakdiam(&["verify", "--graph", &g, "--colouring", &colouring, "--r", "1", "--d", "1"])), 0);
}

#[test]
fn oracle_examples() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    let p3 = write(dir, "p3.g", "e 0 1 1\ne 1 2 1\n");
    assert_eq!(stdout(&weakdiam(&["oracle", "--graph", &p3, "--m", "2", "--r", "1"])), "0\n");
    assert_eq!(stdout(&weakdiam(&["oracle", "--graph", &p3, "--m", "1", "--r", "1"])), "2\n");
    let out = weakdiam(&["oracle", "--graph", &p3, "--m", "2", "--r", "1", "--limit", "2"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("limit"));
}

#[test]
fn bench_rows() {
    let out = weakdiam(&["bench", "--family", "trees:10..50:10", "--r", "1", "--r", "2", "--r", "5"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let rows: Vec<Vec<&str>> = text.lines().skip(1).map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 15);
    for row in &rows {
        let r: i64 = row[1].parse().unwrap();
        let certified: i64 = row[2].parse().unwrap();
        let achieved: i64 = row[3].parse().unwrap();
        assert!(achieved <= certified);
        assert_eq!(certified, 1180 * r);
    }
    let out = weakdiam(&["bench", "--family", "random:4..8:2", "--r", "1"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).lines().skip(1).all(|l| !l.ends_with(',')));
}

#[test]
fn reduce_commands() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    let w = write(dir, "w.g", "e 0 1 1/2\ne 1 2 3/4\n");
    let out = weakdiam(&["reduce", "integerize", "--graph", &w]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).starts_with("# scale 4\n"));
    assert!(stdout(&out).contains("e 1 2 3\n"));

    let tri = write(dir, "tri.g", "e 0 1 1\ne 1 2 2\ne 0 2 3\n");
    let out = weakdiam(&["gen", "subdivide", "--graph", &tri]);
    assert_eq!(stdout(&out).lines().filter(|l| l.starts_with("v ")).count(), 6);
    assert_eq!(code(&weakdiam(&["reduce", "blowup", "--graph", &w])), 2);

    // a path on three vertices inside its 1-subdivision
    let g = write(dir, "sub.g", "e 0 3 1\ne 3 1 1\ne 1 4 1\ne 4 2 1\n");
    let h = write(dir, "h.g", "e 0 1 1\ne 1 2 1\n");
    let model = write(dir, "m.txt", "p 0 0 3\np 1 1 4\np 2 2\nmap 0 0\nmap 1 1\nmap 2 2\n");
    let out = weakdiam(&["reduce", "minor", "--graph", &g, "--minor", &h, "--model", &model, "--epsilon", "1/2"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.starts_with("# alpha 3/2 beta 1\n"));
    assert!(text.contains("e 0 3 1/4\n"));
    assert!(text.contains("e 1 3 1\n"));
}
