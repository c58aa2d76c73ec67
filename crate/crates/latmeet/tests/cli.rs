//! Black-box tests of the binary: exit codes, formats, and the gen → meet
//! pipeline, run against the real executable.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use latmeet::files::{write_kop, write_partition, write_relation};
use latmeet::knowledge::{build_kop_array, Relation};
use latmeet::partition::{ds_to_partition, intersection, partition_to_ds, Partition};
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_latmeet"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

struct Setup {
    _dir: TempDir,
    root: PathBuf,
}

impl Setup {
    fn new() -> Setup {
        let dir = TempDir::new().unwrap();
        let root = dir.path().to_path_buf();
        Setup { _dir: dir, root }
    }

    fn file(&self, name: &str, contents: &str) -> PathBuf {
        let p = self.root.join(name);
        fs::write(&p, contents).unwrap();
        p
    }

    fn path(&self, name: &str) -> PathBuf {
        self.root.join(name)
    }
}

#[test]
fn gen_meet_pipeline_and_cross_algorithm_equality() {
    let s = Setup::new();
    let lat = s.path("lat.json");
    let f = s.path("f.json");
    let g = s.path("g.json");

    let out = run(&["gen", "lattice", "--kind", "powerset", "--param", "4", "--out", path_str(&lat)]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stderr).contains("n=16"));

    for (p, seed) in [(&f, "7"), (&g, "8")] {
        let out = run(&["gen", "endo", "--lattice", path_str(&lat), "--seed", seed, "--out", path_str(p)]);
        assert_eq!(code(&out), 0);
    }

    let h1 = s.path("h1.json");
    let out = run(&["meet", path_str(&lat), path_str(&f), path_str(&g), "--algorithm", "dmeet+", "--out", path_str(&h1)]);
    assert_eq!(code(&out), 0);
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("joins=11") && stderr.contains("meets=4"), "counters: {stderr}");

    // a conflict-driven algorithm lands on the same file, byte for byte
    let h2 = s.path("h2.json");
    let out = run(&["meet", path_str(&lat), path_str(&f), path_str(&g), "--algorithm", "gmeet", "--out", path_str(&h2)]);
    assert_eq!(code(&out), 0);
    assert_eq!(fs::read(&h1).unwrap(), fs::read(&h2).unwrap());

    let map: Vec<usize> = serde_json::from_str(&fs::read_to_string(&h1).unwrap()).unwrap();
    assert_eq!(map.len(), 16);
    assert_eq!(map[0], 0);
}

#[test]
fn meet_exit_codes() {
    let s = Setup::new();
    let m3 = s.file("m3.json", r#"{"mn": 3}"#);
    let id = s.file("id.json", "[0, 1, 2, 3, 4]");

    // distributivity guard
    let out = run(&["meet", path_str(&m3), path_str(&id), path_str(&id), "--algorithm", "dmeet"]);
    assert_eq!(code(&out), 4);

    // the same instance is fine for the general family
    let out = run(&["meet", path_str(&m3), path_str(&id), path_str(&id)]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).trim(), "[0,1,2,3,4]");

    // not a join-endomorphism: validation
    let bad = s.file("bad.json", "[0, 4, 2, 3, 1]");
    let out = run(&["meet", path_str(&m3), path_str(&bad), path_str(&id)]);
    assert_eq!(code(&out), 3);

    // wrong length: validation
    let short = s.file("short.json", "[0, 1]");
    let out = run(&["meet", path_str(&m3), path_str(&short), path_str(&id)]);
    assert_eq!(code(&out), 3);

    // garbage json / missing file / unknown algorithm: parse
    let junk = s.file("junk.json", "{nope");
    let out = run(&["meet", path_str(&junk), path_str(&id), path_str(&id)]);
    assert_eq!(code(&out), 2);
    let out = run(&["meet", path_str(&s.path("nothere.json")), path_str(&id), path_str(&id)]);
    assert_eq!(code(&out), 2);
    let out = run(&["meet", path_str(&m3), path_str(&id), path_str(&id), "--algorithm", "zmeet"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn bench_csv_columns_and_determinism() {
    let s = Setup::new();
    let csv1 = s.path("b1.csv");
    let out = run(&[
        "bench", "--kinds", "powerset", "--sizes", "4..6", "--trials", "2",
        "--algorithms", "dmeet,dmeet+", "--seed", "5", "--out", path_str(&csv1),
    ]);
    assert_eq!(code(&out), 0);
    let text = fs::read_to_string(&csv1).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "algorithm,kind,n,trial,joins,meets,nanos,seed");

    // summary rows carry the exact counter columns
    for (n, dm, dpj, dpm) in [(16, 81, 11, 4), (32, 243, 26, 5), (64, 729, 57, 6)] {
        assert!(
            text.lines().any(|l| l.starts_with(&format!("dmeet,powerset,{n},-1,{dm},{dm},"))),
            "missing dmeet summary for n={n}"
        );
        assert!(
            text.lines().any(|l| l.starts_with(&format!("dmeet+,powerset,{n},-1,{dpj},{dpm},"))),
            "missing dmeet+ summary for n={n}"
        );
    }

    // identical seed, identical everything but the nanos column
    let csv2 = s.path("b2.csv");
    let out = run(&[
        "bench", "--kinds", "powerset", "--sizes", "4..6", "--trials", "2",
        "--algorithms", "dmeet,dmeet+", "--seed", "5", "--out", path_str(&csv2),
    ]);
    assert_eq!(code(&out), 0);
    let strip = |t: &str| -> Vec<String> {
        t.lines()
            .map(|l| {
                let cols: Vec<&str> = l.split(',').collect();
                let mut cols = cols;
                if cols.len() == 8 {
                    cols[6] = "_";
                }
                cols.join(",")
            })
            .collect()
    };
    assert_eq!(strip(&text), strip(&fs::read_to_string(&csv2).unwrap()));

    // trials=0 leaves just the header
    let out = run(&["bench", "--sizes", "4", "--trials", "0"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).trim(), "algorithm,kind,n,trial,joins,meets,nanos,seed");

    // bad inputs are parse errors
    assert_eq!(code(&run(&["bench", "--kinds", "moebius"])), 2);
    assert_eq!(code(&run(&["bench", "--sizes", "9..4"])), 2);
    assert_eq!(code(&run(&["bench", "--algorithms", "zmeet"])), 2);
}

#[test]
fn dk_modes_and_exit_codes() {
    let s = Setup::new();
    let pi = Partition::new(6, vec![vec![0, 1], vec![2, 3], vec![4, 5]]).unwrap();
    let pj = Partition::new(6, vec![vec![0, 1, 2], vec![3, 4, 5]]).unwrap();
    let mut q = intersection(&mut partition_to_ds(&pi), &mut partition_to_ds(&pj)).unwrap();
    let pm = ds_to_partition(&mut q);
    let wrong = Partition::new(6, vec![vec![0, 1, 2, 3, 4, 5]]).unwrap();

    // partition files
    let fi = s.path("pi.json");
    let fj = s.path("pj.json");
    let fm = s.path("pm.json");
    let fw = s.path("wrong.json");
    write_partition(&fi, &pi).unwrap();
    write_partition(&fj, &pj).unwrap();
    write_partition(&fm, &pm).unwrap();
    write_partition(&fw, &wrong).unwrap();

    let out = run(&["dk", "--mode", "partitions", path_str(&fi), path_str(&fj), path_str(&fm)]);
    assert_eq!((code(&out), stdout(&out).trim().to_string()), (0, "true".into()));
    let out = run(&["dk", "--mode", "partitions", path_str(&fi), path_str(&fj), path_str(&fw)]);
    assert_eq!((code(&out), stdout(&out).trim().to_string()), (1, "false".into()));

    // relation files
    let (ri, rj) = (Relation::from_partition(&pi), Relation::from_partition(&pj));
    let rm = ri.intersect(&rj).unwrap();
    let gi = s.path("ri.json");
    let gj = s.path("rj.json");
    let gm = s.path("rm.json");
    write_relation(&gi, &ri).unwrap();
    write_relation(&gj, &rj).unwrap();
    write_relation(&gm, &rm).unwrap();
    let out = run(&["dk", "--mode", "relations", path_str(&gi), path_str(&gj), path_str(&gm)]);
    assert_eq!(code(&out), 0);

    // operator tables, binary round trip through the real files
    let ki = s.path("ki.kop");
    let kj = s.path("kj.kop");
    let km = s.path("km.kop");
    write_kop(&ki, &build_kop_array(&ri).unwrap()).unwrap();
    write_kop(&kj, &build_kop_array(&rj).unwrap()).unwrap();
    write_kop(&km, &build_kop_array(&rm).unwrap()).unwrap();
    let out = run(&["dk", "--mode", "operators", path_str(&ki), path_str(&kj), path_str(&km)]);
    assert_eq!((code(&out), stdout(&out).trim().to_string()), (0, "true".into()));
    let out = run(&["dk", "--mode", "operators", path_str(&ki), path_str(&kj), path_str(&kj)]);
    assert_eq!(code(&out), 1);

    // wrong arity and malformed magic
    let out = run(&["dk", "--mode", "partitions", path_str(&fi), path_str(&fj)]);
    assert_eq!(code(&out), 2);
    let bad = s.file("bad.kop", "NOTAKOPF");
    let out = run(&["dk", "--mode", "operators", path_str(&bad), path_str(&kj), path_str(&km)]);
    assert_eq!(code(&out), 2);

    // mismatched ground sets: validation
    let tiny = s.file("tiny.json", "[[0, 1]]");
    let out = run(&["dk", "--mode", "partitions", path_str(&fi), path_str(&fj), path_str(&tiny)]);
    assert_eq!(code(&out), 3);
}

#[test]
fn dk_bench_emits_all_variants() {
    let out = run(&["dk", "--bench", "--sizes", "8..9", "--trials", "2", "--seed", "3"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    for v in ["cached_operator", "noncached_operator", "relation", "disjoint_set"] {
        assert!(text.lines().any(|l| l.starts_with(&format!("{v},dk,"))), "missing {v}");
    }
}

#[test]
fn partition_subcommands() {
    let s = Setup::new();
    let a = s.file("a.json", "[[0, 1, 2], [3, 4]]");
    let b = s.file("b.json", "[[0, 1], [2, 3, 4]]");
    let q = s.file("q.json", "[[0, 1], [2], [3, 4]]");

    let out = run(&["partition", "intersect", path_str(&a), path_str(&b)]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).trim(), "[[0,1],[2],[3,4]]");

    let out = run(&["partition", "intersect", path_str(&a), path_str(&b), "--check", path_str(&q)]);
    assert_eq!(code(&out), 0);
    let out = run(&["partition", "intersect", path_str(&a), path_str(&b), "--check", path_str(&a)]);
    assert_eq!(code(&out), 1);

    let out = run(&["partition", "equal", path_str(&q), path_str(&q)]);
    assert_eq!((code(&out), stdout(&out).trim().to_string()), (0, "true".into()));
    let out = run(&["partition", "equal", path_str(&a), path_str(&b)]);
    assert_eq!(code(&out), 1);

    // overlapping blocks: validation
    let overlap = s.file("o.json", "[[0, 1], [1, 2]]");
    let out = run(&["partition", "equal", path_str(&overlap), path_str(&overlap)]);
    assert_eq!(code(&out), 3);

    // different ground sets: validation
    let small = s.file("s.json", "[[0]]");
    let out = run(&["partition", "intersect", path_str(&a), path_str(&small)]);
    assert_eq!(code(&out), 3);
}

#[test]
fn gen_partition_is_seed_deterministic() {
    let out1 = run(&["gen", "partition", "--n", "40", "--seed", "11"]);
    let out2 = run(&["gen", "partition", "--n", "40", "--seed", "11"]);
    let out3 = run(&["gen", "partition", "--n", "40", "--seed", "12"]);
    assert_eq!(code(&out1), 0);
    assert_eq!(stdout(&out1), stdout(&out2));
    assert_ne!(stdout(&out1), stdout(&out3));

    let blocks: Vec<Vec<usize>> = serde_json::from_str(stdout(&out1).trim()).unwrap();
    let mut all: Vec<usize> = blocks.into_iter().flatten().collect();
    all.sort_unstable();
    assert_eq!(all, (0..40).collect::<Vec<_>>());
}
