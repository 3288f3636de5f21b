//! End-to-end tests of the `kbound` binary: the documented invocations,
//! output encodings, and exit codes.

use kbound::report::Document;
use kbound_core::graph::generators;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn kbound(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kbound"))
        .args(args)
        .current_dir(dir)
        .env_remove("KBOUND_TOL")
        .output()
        .expect("binary runs")
}

fn write_petersen_g6(dir: &Path) -> String {
    let s = kbound::emit_graph6(&generators::petersen());
    fs::write(dir.join("petersen.g6"), format!("{s}\n")).unwrap();
    "petersen.g6".into()
}

#[test]
fn compare_petersen_example() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_petersen_g6(dir.path());
    let out = kbound(
        &[
            "compare",
            &file,
            "--k",
            "2",
            "--methods",
            "optlp,ratio",
            "--poly",
            "x2+x",
            "--output",
            "json",
        ],
        dir.path(),
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let doc: Document = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc.rows.len(), 2);
    for row in &doc.rows {
        assert!((row.bound - 1.0).abs() < 1e-6);
        assert_eq!(row.integer_bound, Some(1));
        assert_eq!(row.exact, Some(1));
        assert_eq!(row.gap, Some(0));
    }
    // optlp short-circuits at the diameter on the Petersen graph at k=2.
    assert_eq!(doc.rows[0].method, "diameter");
    assert_eq!(doc.rows[1].method, "ratio");
}

#[test]
fn bound_k2_hoffman() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("k2.el"), "2\n0 1\n").unwrap();
    let out = kbound(
        &[
            "bound",
            "k2.el",
            "--k",
            "1",
            "--methods",
            "ratio",
            "--poly",
            "x",
            "--output",
            "json",
        ],
        dir.path(),
    );
    assert!(out.status.success());
    let doc: Document = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc.rows.len(), 1);
    assert!((doc.rows[0].bound - 1.0).abs() < 1e-9);
}

#[test]
fn exact_c6_with_witness() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("c6.el"),
        "6\n0 1\n1 2\n2 3\n3 4\n4 5\n5 0\n",
    )
    .unwrap();
    let out = kbound(
        &["exact", "c6.el", "--k", "2", "--output", "json"],
        dir.path(),
    );
    assert!(out.status.success());
    let doc: Document = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc.rows[0].method, "exact_alpha");
    assert_eq!(doc.rows[0].exact, Some(2));
    assert_eq!(doc.rows[0].certificate, "set={0;3}");
}

#[test]
fn json_round_trips_through_cli() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_petersen_g6(dir.path());
    let out = kbound(
        &[
            "compare", &file, "--k", "1", "--methods",
            "framework,eigenpoly,optlp,ratio,minor,laplacian,minrank,theta,walkratio,chik,chikprime",
            "--poly", "lmin", "--output", "json",
        ],
        dir.path(),
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let doc: Document = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc.rows.len(), 11);
    // Re-serializing reproduces every field.
    let again: Document = serde_json::from_str(&serde_json::to_string(&doc).unwrap()).unwrap();
    assert_eq!(again, doc);
    // Soundness as surfaced to users: no negative gap anywhere. Fields
    // also stay comma-free so the CSV encoding cannot be corrupted.
    for row in &doc.rows {
        if let Some(gap) = row.gap {
            assert!(gap >= 0, "negative gap in row {row:?}");
        }
        assert!(!row.certificate.contains(','), "comma in {row:?}");
        assert!(!row.method.contains(','));
    }
}

#[test]
fn precondition_violation_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("p3.el"), "3\n0 1\n1 2\n").unwrap();
    let out = kbound(
        &[
            "bound",
            "p3.el",
            "--k",
            "1",
            "--methods",
            "ratio",
            "--poly",
            "x",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(3));
    let stderr = String::from_utf8_lossy(&out.stderr);
    let record: serde_json::Value = serde_json::from_str(stderr.trim()).unwrap();
    assert_eq!(record["error"]["code"], 3);
    assert_eq!(record["error"]["kind"], "precondition");
}

#[test]
fn parse_failure_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("bad.g6"), "D?").unwrap();
    let out = kbound(
        &["bound", "bad.g6", "--k", "1", "--methods", "optlp"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("truncated"), "stderr: {stderr}");

    let out = kbound(
        &["bound", "missing.g6", "--k", "1", "--methods", "optlp"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn batch_compare_with_summary() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = [
        kbound::emit_graph6(&generators::cycle(5)),
        kbound::emit_graph6(&generators::petersen()),
        kbound::emit_graph6(&generators::hypercube(3)),
    ]
    .join("\n");
    fs::write(dir.path().join("corpus.g6"), corpus).unwrap();
    let out = kbound(
        &[
            "batch",
            "corpus.g6",
            "--k",
            "1",
            "--methods",
            "optlp,laplacian",
            "--output",
            "json",
            "--jobs",
            "2",
        ],
        dir.path(),
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let doc: Document = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc.rows.len(), 6);
    // Deterministic ordering: input order, then method order.
    assert_eq!(doc.rows[0].graph, "corpus:0");
    assert_eq!(doc.rows[2].graph, "corpus:1");
    let summary = doc.summary.expect("batch emits a summary");
    assert_eq!(summary.graphs, 3);
    assert_eq!(summary.failures, 0);
    assert!(summary.mean_gap.unwrap() >= 0.0);
    assert!(summary.tight_count >= 1);
}

#[test]
fn batch_flushes_partial_results_on_failure() {
    let dir = tempfile::tempdir().unwrap();
    // Second graph (P3) is not regular, so the ratio method fails on it.
    let corpus = [
        kbound::emit_graph6(&generators::cycle(4)),
        kbound::emit_graph6(&generators::path(3)),
    ]
    .join("\n");
    fs::write(dir.path().join("corpus.g6"), corpus).unwrap();
    let out = kbound(
        &[
            "batch",
            "corpus.g6",
            "--k",
            "1",
            "--methods",
            "ratio",
            "--output",
            "json",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(3));
    let doc: Document = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc.rows.len(), 1, "the healthy graph's rows are flushed");
    assert_eq!(doc.summary.unwrap().failures, 1);
}

#[test]
fn out_file_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_petersen_g6(dir.path());
    let out_path = dir.path().join("report.csv");
    let out = kbound(
        &[
            "compare",
            &file,
            "--k",
            "1",
            "--methods",
            "laplacian",
            "--output",
            "csv",
            "--out",
            out_path.to_str().unwrap(),
        ],
        dir.path(),
    );
    assert!(out.status.success());
    let text = fs::read_to_string(&out_path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), kbound::report::CSV_HEADER);
    let row = lines.next().unwrap();
    assert!(
        row.starts_with("petersen,10,15,1,laplacian,4,4,4,false,0,"),
        "row: {row}"
    );
}

#[test]
fn bad_tolerance_env_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_petersen_g6(dir.path());
    let out = Command::new(env!("CARGO_BIN_EXE_kbound"))
        .args(["bound", &file, "--k", "1", "--methods", "optlp"])
        .current_dir(dir.path())
        .env("KBOUND_TOL", "not-a-number")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn minrank_and_param_flags() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("c5.el"), "5\n0 1\n1 2\n2 3\n3 4\n4 0\n").unwrap();
    let out = kbound(
        &[
            "bound",
            "c5.el",
            "--k",
            "1",
            "--methods",
            "minrank",
            "--field",
            "2",
            "--minrank-poly",
            "x",
            "--output",
            "json",
        ],
        dir.path(),
    );
    assert!(out.status.success());
    let doc: Document = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc.rows[0].integer_bound, Some(5));

    // Parameterized polynomial on the eigenpoly method; x(x+1)(x+2) is
    // PSD on the C5 spectrum {2, 0.618.., -1.618..}.
    let out = kbound(
        &[
            "bound",
            "c5.el",
            "--k",
            "3",
            "--methods",
            "eigenpoly",
            "--poly",
            "x3+ax2+bx",
            "--param",
            "a=3",
            "--param",
            "b=2",
            "--output",
            "json",
        ],
        dir.path(),
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}
