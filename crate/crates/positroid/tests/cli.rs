use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use positroid::plabic::{add_gadget, random_face_weights, random_reduced_network, Gadget};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_positroid"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn run_stdin(args: &[&str], input: &str) -> Output {
    let mut child =
        bin().args(args).stdin(Stdio::piped()).stdout(Stdio::piped()).stderr(Stdio::piped()).spawn().unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "exit {:?}: {}", o.status.code(), String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

struct TempFile(PathBuf);

impl TempFile {
    fn new(name: &str, contents: &str) -> Self {
        let path = std::env::temp_dir().join(format!("positroid-cli-{}-{name}", std::process::id()));
        std::fs::write(&path, contents).unwrap();
        TempFile(path)
    }

    fn path(&self) -> &str {
        self.0.to_str().unwrap()
    }
}

impl Drop for TempFile {
    fn drop(&mut self) {
        std::fs::remove_file(&self.0).ok();
    }
}

#[test]
fn count_prints_the_table() {
    let out = stdout(&run(&["count", "--n", "4"]));
    assert_eq!(out.lines().last(), Some("1 15 33 15 1"));
    let csv = stdout(&run(&["count", "--n", "2", "--csv"]));
    assert_eq!(csv, "k,n,count\n0,0,1\n0,1,1\n1,1,1\n0,2,1\n1,2,3\n2,2,1\n");
    let checked = stdout(&run(&["count", "--n", "6", "--q", "--check-all"]));
    assert!(checked.ends_with("# check-all consistent\n"));
    assert!(checked.contains("\n1 2 2 1\n"));
}

#[test]
fn invert_of_padded_identity_is_all_zero() {
    let f = TempFile::new("id.txt", "2 4\n1 0 0 0\n0 1 0 0\n");
    assert_eq!(stdout(&run(&["invert", f.path()])), "2 4\n2 2\n0 0\n0 0\n");
}

#[test]
fn invert_rejects_matrices_with_negative_minors() {
    let f = TempFile::new("neg.txt", "2 4\n1 0 0 1\n0 1 0 0\n");
    let o = run(&["invert", f.path()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("minor [2, 4] = -1"));
}

#[test]
fn permutation_le_round_trip() {
    let le = stdout(&run(&["perm2le", "4 3 1 2"]));
    let f = TempFile::new("le.txt", &le);
    assert_eq!(stdout(&run(&["le2perm", f.path()])), "4 3 1 2\n");
    // and in the other direction, byte for byte
    let again = stdout(&run_stdin(&["le2perm", "-"], &le));
    assert_eq!(stdout(&run(&["perm2le", again.trim()])), le);
}

#[test]
fn plabic_graph_round_trip_and_trips() {
    let g = stdout(&run(&["perm2graph", "3 1 5 4B 2 6W"]));
    let trips = stdout(&run_stdin(&["trips", "-"], &g));
    assert!(trips.starts_with("perm 3 1 5 4B 2 6W\n"), "{trips}");
    assert!(trips.ends_with("reduced yes\n"));
    let f = TempFile::new("g.txt", &g);
    let dot = stdout(&run(&["export-dot", f.path()]));
    assert!(dot.contains("graph"));
    let matroid = stdout(&run(&["matroid", f.path(), "--necklace"]));
    assert!(matroid.contains("# necklace\n"));
}

#[test]
fn le_network_measures_like_its_tableau() {
    let f = TempFile::new("t.txt", "1 2\n1\n3\n");
    let net = stdout(&run(&["le2net", f.path()]));
    let g = TempFile::new("n.txt", &net);
    let meas = stdout(&run(&["measure", g.path()]));
    let json: serde_json::Value = serde_json::from_str(&stdout(&run(&["--json", "measure", g.path()]))).unwrap();
    assert_eq!(json["k"], 1);
    assert!(meas.contains('3'), "{meas}");
    let perfect = stdout(&run(&["perfect", g.path()]));
    let p = TempFile::new("p.txt", &perfect);
    assert_eq!(stdout(&run(&["measure", p.path()])), meas);
}

#[test]
fn reduce_trace_replays_through_move() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut replayed = 0;
    for _ in 0..6 {
        let net = random_reduced_network(4, 2, &mut rng).unwrap();
        let Some(h) = add_gadget(net.graph(), Gadget::Bigon, &mut rng) else { continue };
        let start = random_face_weights(&h, &mut rng).unwrap().to_text();
        let reduced = stdout(&run_stdin(&["reduce", "-"], &start));
        let steps: Vec<&str> = reduced
            .lines()
            .filter_map(|l| l.strip_prefix("# "))
            .filter(|l| l.starts_with("move ") || l.starts_with("reduce "))
            .collect();
        assert!(!steps.is_empty());
        let mut cur = stdout(&run_stdin(&["move", "-", "--site", steps[0]], &start));
        for s in &steps[1..] {
            cur = stdout(&run_stdin(&["move", "-", "--site", s], &cur));
        }
        let network: String = reduced.lines().filter(|l| !l.starts_with('#')).map(|l| format!("{l}\n")).collect();
        assert_eq!(cur, network);
        replayed += 1;
    }
    assert!(replayed >= 3);
}

#[test]
fn moves_listing_applies() {
    let g = stdout(&run(&["perm2graph", "3 4 1 2"]));
    let sites = stdout(&run_stdin(&["moves", "-", "--list"], &g));
    assert!(!sites.is_empty());
    for site in sites.lines() {
        let out = stdout(&run_stdin(&["move", "-", "--site", site], &g));
        let trips = stdout(&run_stdin(&["trips", "-"], &out));
        assert!(trips.starts_with("perm 3 4 1 2\n"), "{site}: {trips}");
    }
}

#[test]
fn poset_and_order() {
    assert_eq!(stdout(&run(&["leq", "3 4 1 2", "3 4 1 2"])), "true\n");
    let covers = stdout(&run(&["poset", "--covers", "3 4 1 2"]));
    assert_eq!(covers.lines().count(), 4);
    for c in covers.lines() {
        assert_eq!(stdout(&run(&["leq", c, "3 4 1 2"])), "true\n");
        assert_eq!(stdout(&run(&["leq", "3 4 1 2", c])), "false\n");
    }
    let cells = stdout(&run(&["poset", "--k", "2", "--n", "4"]));
    assert_eq!(cells.lines().count(), 33);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["trips", "/nonexistent/file"]).status.code(), Some(1));
    assert_eq!(run_stdin(&["trips", "-"], "garbage\n").status.code(), Some(1));
    assert_eq!(run(&["perm2le", "2 2"]).status.code(), Some(1));
    assert_eq!(run(&["selfcheck", "--n", "9"]).status.code(), Some(1));
    let g = stdout(&run(&["perm2graph", "2 1"]));
    // a well-formed site that does not apply is a precondition failure
    assert_eq!(run_stdin(&["move", "-", "--site", "square face=99"], &g).status.code(), Some(2));
    assert_eq!(run_stdin(&["move", "-", "--site", "hop"], &g).status.code(), Some(1));
}

#[test]
fn json_errors_are_structured() {
    let o = run(&["--json", "perm2le", "2 2"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["exit_code"], 1);
}

#[test]
fn selfcheck_single_criterion() {
    let out = stdout(&run(&["selfcheck", "--n", "4", "--only", "1"]));
    assert!(out.starts_with("PASS"), "{out}");
}
