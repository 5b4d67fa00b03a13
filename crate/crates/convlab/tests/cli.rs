use std::path::Path;
use std::process::{Command, Output};

use convlab::format::{self, Document};

fn convlab(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_convlab")).args(args).current_dir(dir).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn search_311(dir: &Path) -> Output {
    convlab(&["search", "-n", "3", "-k", "1", "-d", "1", "--seed", "5", "--out", "c"], dir)
}

#[test]
fn search_writes_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let out = search_311(dir.path());
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("search 3 1 1\nseed 5\n"), "{text}");
    assert!(text.contains("cert MDP true\n") && text.contains("cert sMDS true\n"));
    assert!(text.ends_with("dcol 1 5\ndcol 2 6\ndfree 6\n"), "{text}");
    for ext in ["code", "real", "markov"] {
        let body = std::fs::read_to_string(dir.path().join(format!("c.{ext}"))).unwrap();
        assert!(body.starts_with("convlab v1\nfield "));
        assert_eq!(format::parse(&body).unwrap().to_text(), body);
    }
}

#[test]
fn search_with_oracles_off_marks_skipped() {
    let dir = tempfile::tempdir().unwrap();
    let out = convlab(&["search", "-n", "3", "-k", "1", "-d", "1", "--oracle", "off"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).ends_with("dcol 1 skipped\ndcol 2 skipped\ndfree skipped\n"));
}

#[test]
fn search_in_odd_characteristic() {
    let dir = tempfile::tempdir().unwrap();
    let out = convlab(&["search", "-n", "3", "-k", "1", "-d", "1", "--char", "3", "--out", "c"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("\nfield 3 "));
}

#[test]
fn search_exhaustion_and_bad_params() {
    let dir = tempfile::tempdir().unwrap();
    let out = convlab(&["search", "-n", "4", "-k", "1", "-d", "3", "--char", "2", "--trials", "1"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let out = convlab(&["search", "-n", "2", "-k", "2", "-d", "1"], dir.path());
    assert_eq!(out.status.code(), Some(3));
    let out = convlab(&["search", "-n", "3", "-k", "1", "-d", "1", "--char", "6"], dir.path());
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn certify_search_output() {
    let dir = tempfile::tempdir().unwrap();
    search_311(dir.path());
    for file in ["c.code", "c.real", "c.markov"] {
        let out = convlab(&["certify", file, "--property", "smds"], dir.path());
        assert_eq!(out.status.code(), Some(0), "{file}");
        assert!(stdout(&out).starts_with("cert sMDS true\n"));
        let out = convlab(&["certify", file, "--property", "distances"], dir.path());
        assert_eq!(out.status.code(), Some(0), "{file}");
        assert_eq!(stdout(&out), "dcol 1 5\ndcol 2 6\ndfree 6\n");
    }
}

#[test]
fn certify_reports_witness() {
    let dir = tempfile::tempdir().unwrap();
    let text = "convlab v1\nfield 3 1 0 1\nmarkov 3 1 1\nmat 2 1\n1\n1\nmat 2 1\n2\n2\n";
    std::fs::write(dir.path().join("w.markov"), text).unwrap();
    let out = convlab(&["certify", "w.markov", "--property", "mdp"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    let s = stdout(&out);
    assert!(s.starts_with("cert MDP false\nwitness rows 3 4 cols 1 2\ncounts "), "{s}");
}

#[test]
fn malformed_input_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad"), "convlab v1\nfield 3 1 0 1\nparams 3 1\n").unwrap();
    let out = convlab(&["certify", "bad", "--property", "mdp"], dir.path());
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 3"), "{err}");
    let out = convlab(&["distances", "missing"], dir.path());
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn convert_round_trip_preserves_code() {
    let dir = tempfile::tempdir().unwrap();
    search_311(dir.path());
    let out = convlab(&["convert", "c.code", "--to", "realization"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    std::fs::write(dir.path().join("r.real"), stdout(&out)).unwrap();
    let out = convlab(&["convert", "r.real", "--to", "code"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let Document::Code(back) = format::parse(&stdout(&out)).unwrap() else { panic!() };
    let orig = std::fs::read_to_string(dir.path().join("c.code")).unwrap();
    let Document::Code(orig) = format::parse(&orig).unwrap() else { panic!() };
    assert!(back.same_code(&orig).unwrap());

    let direct = convlab(&["distances", "c.real", "--jmax", "4"], dir.path());
    let via = convlab(&["distances", "r.real", "--jmax", "4"], dir.path());
    assert_eq!(stdout(&direct), stdout(&via));
}

#[test]
fn convert_zero_degree_realization() {
    let dir = tempfile::tempdir().unwrap();
    let text = "convlab v1\nfield 5 1 0 1\nreal 3 1 0\nmat 0 0\nmat 0 1\nmat 2 0\nmat 2 1\n2\n3\n";
    std::fs::write(dir.path().join("z.real"), text).unwrap();
    let out = convlab(&["convert", "z.real", "--to", "code"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "convlab v1\nfield 5 1 0 1\nparams 3 1 0\ngen 3 1 0\nmat 3 1\n2\n3\n1\n");
}

#[test]
fn distances_of_markov_file() {
    let dir = tempfile::tempdir().unwrap();
    search_311(dir.path());
    let out = convlab(&["distances", "c.markov"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let s = stdout(&out);
    assert!(s.starts_with("dcol 0 3\ndcol 1 5\ndcol 2 6\n") && s.ends_with("dfree 6\n"), "{s}");
    let out = convlab(&["distances", "c.markov", "--jmax", "3"], dir.path());
    assert_eq!(out.status.code(), Some(3));
}
