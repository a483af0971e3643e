use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn run(bin: &str, args: &[&str]) -> Output {
    Command::new(bin).args(args).output().unwrap()
}

fn qd(args: &[&str]) -> Output {
    run(env!("CARGO_BIN_EXE_qd"), args)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

struct Fixture {
    _dir: tempfile::TempDir,
    root: PathBuf,
}

impl Fixture {
    fn new() -> Self {
        let dir = tempfile::tempdir().unwrap();
        let root = dir.path().to_path_buf();
        Fixture { _dir: dir, root }
    }

    fn path(&self, name: &str) -> PathBuf {
        self.root.join(name)
    }

    fn write(&self, name: &str, text: &str) -> PathBuf {
        let p = self.path(name);
        std::fs::write(&p, text).unwrap();
        p
    }

    fn read(&self, name: &str) -> String {
        std::fs::read_to_string(self.path(name)).unwrap()
    }
}

const BANK: &str = ">a\nACGGTCAGTTCAGGATTACA\n>b\nACGGTCAGTTCAGGATTACA\n>c\nTTTTTTTTTTGGGGGGGGGG\n";

#[test]
fn out_of_range_fingerprint_is_a_usage_error() {
    let fx = Fixture::new();
    let bank = fx.write("bank.fa", BANK);
    let fof = fx.write("q.txt", "bank.fa\n");
    let out = qd(&["counter", "-b", s(&bank), "-q", s(&fof), "-o", s(&fx.path("o")), "-f", "65"]);
    assert_eq!(out.status.code(), Some(2));
    let out = qd(&["counter", "-b", s(&bank), "-q", s(&fof), "-o", s(&fx.path("o")), "-k", "32"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn missing_bank_is_a_runtime_error() {
    let fx = Fixture::new();
    let fof = fx.write("q.txt", "nothing.fa\n");
    let out = qd(&["counter", "-b", s(&fx.path("none.fa")), "-q", s(&fof), "-o", s(&fx.path("o"))]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.starts_with("error: ") && err.lines().count() == 1, "{err}");
}

#[test]
fn version_reports_mixers_and_seed() {
    let out = qd(&["--version"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains(env!("CARGO_PKG_VERSION")));
    assert!(text.contains("0xff51afd7ed558ccd"));
    assert!(text.contains("default seed"));
}

#[test]
fn counter_writes_one_line_per_query_read() {
    let fx = Fixture::new();
    let bank = fx.write("bank.fa", BANK);
    fx.write("q1.fq", "@x\nACGGTCAGTTCAGGA\n+\nIIIIIIIIIIIIIII\n");
    fx.write("q2.fa", ">y\nACACACACACAC\n>z\nGTCAGTTCAGGATT\n");
    let fof = fx.write("q.txt", "q1.fq\n\nq2.fa\n");
    let out = fx.path("counts.tsv");
    let st = run(env!("CARGO_BIN_EXE_src-counter"), &["-b", s(&bank), "-q", s(&fof), "-o", s(&out), "-k", "7"]);
    assert!(st.status.success(), "{}", String::from_utf8_lossy(&st.stderr));
    let text = fx.read("counts.tsv");
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines, ["0\tx\t9\t2.00\t2\t2\t2", "1\ty\t0\tnone", "2\tz\t8\t2.00\t2\t2\t2"]);
}

#[test]
fn linker_self_mode_and_window_check() {
    let fx = Fixture::new();
    let bank = fx.write("bank.fa", BANK);
    let fof = fx.write("q.txt", "bank.fa\n");
    let out = fx.path("links.txt");
    let st = run(
        env!("CARGO_BIN_EXE_src-linker"),
        &["-b", s(&bank), "-q", s(&fof), "-o", s(&out), "-k", "7", "-t", "1", "-s", "1"],
    );
    assert!(st.status.success(), "{}", String::from_utf8_lossy(&st.stderr));
    assert_eq!(fx.read("links.txt"), "0:1-20\n1:0-20\n2:\n");

    let st = qd(&["linker", "-b", s(&bank), "-q", s(&fof), "-o", s(&out), "-k", "7", "-t", "1", "-s", "1", "-w", "10"]);
    assert!(st.status.success());
    assert_eq!(fx.read("links.txt"), "0:1-10@0\n1:0-10@0\n2:\n");

    let st = qd(&["linker", "-b", s(&bank), "-q", s(&fof), "-o", s(&out), "-k", "7", "-w", "5"]);
    assert_eq!(st.status.code(), Some(1));
}

#[test]
fn sim_and_score_round_trip() {
    let fx = Fixture::new();
    let (reads, truth) = (fx.path("r.fa"), fx.path("t.tsv"));
    let st = run(
        env!("CARGO_BIN_EXE_qd-sim"),
        &[
            "--genome-len", "50000", "--spots", "4", "--read-len", "300", "--reads-per-spot", "5", "--error-rate",
            "0.0", "-o", s(&reads), "--truth", s(&truth),
        ],
    );
    assert!(st.status.success(), "{}", String::from_utf8_lossy(&st.stderr));
    assert_eq!(fx.read("r.fa").lines().count(), 40);
    assert_eq!(fx.read("t.tsv").lines().count(), 4 * 10);

    let fof = fx.write("q.txt", "r.fa\n");
    let links = fx.path("l.txt");
    let st = qd(&["linker", "-b", s(&reads), "-q", s(&fof), "-o", s(&links), "-k", "21", "-s", "100"]);
    assert!(st.status.success());
    let st = run(env!("CARGO_BIN_EXE_qd-score"), &["--pred", s(&links), "--truth", s(&truth)]);
    assert!(st.status.success());
    assert_eq!(String::from_utf8(st.stdout).unwrap().trim(), "100.00 100.00 100.00");

    let empty = fx.write("empty.txt", "0:\n");
    let st = qd(&["score", "--pred", s(&empty), "--truth", s(&truth)]);
    assert_eq!(String::from_utf8(st.stdout).unwrap().trim(), "0.00 100.00 0.00");
    assert!(String::from_utf8(st.stderr).unwrap().contains("warning"));
}

#[test]
fn stats_reports_and_saves_index() {
    let fx = Fixture::new();
    let bank = fx.write("bank.fa", BANK);
    let idx = fx.path("i.qd");
    let st = qd(&["stats", "-b", s(&bank), "-k", "9", "--probes", "1000", "-o", s(&idx)]);
    assert!(st.status.success(), "{}", String::from_utf8_lossy(&st.stderr));
    let text = String::from_utf8(st.stdout).unwrap();
    assert!(text.contains("keys\t14\n"), "{text}");
    assert!(text.contains("queries_per_sec"));
    assert!(std::fs::metadata(&idx).unwrap().len() > 0);

    let st = qd(&["stats", "--probes", "10"]);
    assert_eq!(st.status.code(), Some(2));
}
