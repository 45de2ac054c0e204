use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use clique_msf::graph::{gen_graph, msf_oracle, read_graph, write_graph, Graph, Model};
use tempfile::TempDir;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_clique-msf"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn write(dir: &TempDir, name: &str, g: &Graph) -> PathBuf {
    let p = dir.path().join(name);
    write_graph(g, &p).unwrap();
    p
}

#[test]
fn gen_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.txt");
    let b = dir.path().join("b.txt");
    for p in [&a, &b] {
        let out = bin(&[
            "gen",
            "--n",
            "16",
            "--model",
            "gnp",
            "--p",
            "0.5",
            "--seed",
            "1",
            "--out",
            path_str(p),
        ]);
        assert_eq!(code(&out), 0);
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}

#[test]
fn gen_complete_header() {
    let dir = TempDir::new().unwrap();
    let p = dir.path().join("k4.txt");
    assert_eq!(
        code(&bin(&[
            "gen",
            "--n",
            "4",
            "--model",
            "complete",
            "--out",
            path_str(&p)
        ])),
        0
    );
    assert_eq!(fs::read_to_string(&p).unwrap().lines().next(), Some("4 6"));

    let out = bin(&["gen", "--n", "4", "--model", "path"]);
    assert_eq!(
        String::from_utf8(out.stdout).unwrap().lines().next(),
        Some("4 3")
    );
}

#[test]
fn gen_rejects_bad_flags() {
    let out = bin(&["gen", "--n", "16", "--model", "gnp", "--p", "1.5"]);
    assert_eq!(code(&out), 2);
    assert!(!out.stderr.is_empty());
    assert_eq!(code(&bin(&["gen", "--n", "16", "--model", "star"])), 2);
    assert_eq!(code(&bin(&["gen", "--model", "complete"])), 2);
}

#[test]
fn sparsify_k256_with_metrics() {
    let dir = TempDir::new().unwrap();
    let g = gen_graph(256, Model::Complete, 4).unwrap();
    let input = write(&dir, "k256.txt", &g);
    let csv = dir.path().join("m.csv");
    let kept = dir.path().join("kept.txt");
    let args = [
        "sparsify",
        "--in",
        path_str(&input),
        "--k",
        "2",
        "--verify",
        "--metrics",
        path_str(&csv),
        "--out",
        path_str(&kept),
    ];
    assert_eq!(code(&bin(&args)), 0);

    let text = fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("iter,eps_exp,edges_before,edges_after,rounds_charged,rounds_explicit,cert_ok")
    );
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 3);
    assert_eq!((rows[0][0], rows[1][0], rows[2][0]), ("1", "2", "0"));
    assert!(rows.iter().all(|r| r[5].is_empty() && r[6] == "true"));
    let final_edges: usize = rows[1][3].parse().unwrap();
    assert!(final_edges <= 2048, "{final_edges}");
    assert_eq!(read_graph(&kept).unwrap().m(), final_edges);

    // byte-identical on a rerun
    let before = fs::read(&csv).unwrap();
    assert_eq!(code(&bin(&args)), 0);
    assert_eq!(fs::read(&csv).unwrap(), before);
}

#[test]
fn sparsify_explicit_fills_rounds_column() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "g.txt", &gen_graph(20, Model::Gnp(0.5), 2).unwrap());
    let csv = dir.path().join("m.csv");
    let out = bin(&[
        "sparsify",
        "--in",
        path_str(&input),
        "--k",
        "1",
        "--mode",
        "explicit",
        "--metrics",
        path_str(&csv),
    ]);
    assert_eq!(code(&out), 0);
    let text = fs::read_to_string(&csv).unwrap();
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert!(row[5].parse::<u64>().unwrap() >= row[4].parse::<u64>().unwrap());
}

#[test]
fn sparsify_zero_is_identity() {
    let dir = TempDir::new().unwrap();
    let g = gen_graph(30, Model::Gnp(0.3), 8).unwrap();
    let input = write(&dir, "g.txt", &g);
    let kept = dir.path().join("kept.txt");
    assert_eq!(
        code(&bin(&[
            "sparsify",
            "--in",
            path_str(&input),
            "--k",
            "0",
            "--out",
            path_str(&kept)
        ])),
        0
    );
    let mut want = g.edges().to_vec();
    want.sort();
    assert_eq!(read_graph(&kept).unwrap().edges(), want.as_slice());
}

#[test]
fn missing_input_is_io_error() {
    let dir = TempDir::new().unwrap();
    let missing = dir.path().join("nope.txt");
    assert_eq!(
        code(&bin(&["sparsify", "--in", path_str(&missing), "--k", "1"])),
        2
    );
    assert_eq!(code(&bin(&["mst", "--in", path_str(&missing)])), 2);
    assert_eq!(
        code(&bin(&[
            "verify",
            "--in",
            path_str(&missing),
            "--edges",
            path_str(&missing)
        ])),
        2
    );
}

#[test]
fn malformed_input_is_io_error() {
    let dir = TempDir::new().unwrap();
    let p = dir.path().join("bad.txt");
    fs::write(&p, "3 1\n0 0 4\n").unwrap();
    let out = bin(&["mst", "--in", path_str(&p)]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8(out.stderr).unwrap().contains("line 2"));
}

#[test]
fn mst_verify_matches_oracle() {
    let dir = TempDir::new().unwrap();
    let g = gen_graph(64, Model::Gnp(0.3), 7).unwrap();
    let input = write(&dir, "g.txt", &g);
    let forest = dir.path().join("f.txt");
    let out = bin(&[
        "mst",
        "--in",
        path_str(&input),
        "--verify",
        "--out",
        path_str(&forest),
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(read_graph(&forest).unwrap().edges(), msf_oracle(&g).edges());
}

#[test]
fn mst_path_lists_every_edge() {
    let dir = TempDir::new().unwrap();
    let g = gen_graph(12, Model::Path, 3).unwrap();
    let input = write(&dir, "p.txt", &g);
    let out = bin(&["mst", "--in", path_str(&input)]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("12 11"));
    assert_eq!(
        text.lines().filter(|l| l.split(' ').count() == 3).count(),
        11
    );
}

#[test]
fn mst_reports_k() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "g.txt", &gen_graph(256, Model::Gnp(0.1), 1).unwrap());
    let forest = dir.path().join("f.txt");
    let out = bin(&["mst", "--in", path_str(&input), "--out", path_str(&forest)]);
    assert_eq!(code(&out), 0);
    let summary = String::from_utf8(out.stderr).unwrap();
    assert!(summary.starts_with("k=3 rounds_charged="), "{summary}");
}

#[test]
fn verify_outcomes() {
    let dir = TempDir::new().unwrap();
    let g = gen_graph(40, Model::Gnp(0.4), 5).unwrap();
    let input = write(&dir, "g.txt", &g);
    let kept = dir.path().join("kept.txt");
    assert_eq!(
        code(&bin(&[
            "sparsify",
            "--in",
            path_str(&input),
            "--k",
            "3",
            "--out",
            path_str(&kept)
        ])),
        0
    );
    assert_eq!(
        code(&bin(&[
            "verify",
            "--in",
            path_str(&input),
            "--edges",
            path_str(&kept)
        ])),
        0
    );
    assert_eq!(
        code(&bin(&[
            "verify",
            "--in",
            path_str(&input),
            "--edges",
            path_str(&input)
        ])),
        0
    );

    let dropped = msf_oracle(&g).edges()[0];
    let minus = Graph::new(g.n(), g.edges().iter().copied().filter(|e| *e != dropped)).unwrap();
    let minus = write(&dir, "minus.txt", &minus);
    assert_eq!(
        code(&bin(&[
            "verify",
            "--in",
            path_str(&input),
            "--edges",
            path_str(&minus)
        ])),
        1
    );

    let foreign = write(
        &dir,
        "foreign.txt",
        &Graph::from_triples(40, &[(0, 1, u64::MAX)]).unwrap(),
    );
    let out = bin(&[
        "verify",
        "--in",
        path_str(&input),
        "--edges",
        path_str(&foreign),
    ]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8(out.stderr)
        .unwrap()
        .contains("not in the graph"));
}
