use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use haan_cli::exit;
use haan_cli::format::{parse_instance, parse_result};
use tempfile::TempDir;

const TRIANGLE: &str = "haan/1 instance\nagents 3\nhouses 3\nedge 0 1\nedge 0 2\nedge 1 2\npref 0 0\npref 1 0\npref 2 0\n";

fn haan(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_haan"))
        .args(args)
        .env_remove("HAAN_WORKERS")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn solve_brute_on_the_triangle() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "t.haan", TRIANGLE);
    let o = haan(&["solve", s(&f), "--algo", "brute"]);
    assert_eq!(o.status.code(), Some(exit::OK));
    let r = parse_result(&stdout(&o)).unwrap();
    assert_eq!((r.solver.as_str(), r.min_envy), ("brute", 2));
    assert_eq!(r.wall_ms, None);
}

#[test]
fn d1_refuses_two_preferences() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "d2.haan", "haan/1 instance\nagents 2\nhouses 2\nedge 0 1\npref 0 0 1\npref 1 0\n");
    let o = haan(&["solve", s(&f), "--algo", "d1"]);
    assert_eq!(o.status.code(), Some(exit::WRONG_SOLVER));
    assert!(o.stdout.is_empty());
    assert!(!o.stderr.is_empty());
}

#[test]
fn auto_with_happiness_tie_break() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "iso.haan", "haan/1 instance\nagents 2\nhouses 2\npref 0 0\npref 1 0\n");
    let out = dir.path().join("r.txt");
    let o = haan(&["solve", s(&f), "--objective", "envy-happy", "-o", s(&out), "--timing"]);
    assert_eq!(o.status.code(), Some(exit::OK));
    assert!(o.stdout.is_empty());
    let r = parse_result(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!((r.min_envy, r.happiness, r.objective.as_str()), (0, 1, "envy-happy"));
    assert!(r.wall_ms.is_some());
}

#[test]
fn error_exit_codes() {
    let dir = TempDir::new().unwrap();
    let tri = write(&dir, "t.haan", TRIANGLE);
    let few = write(&dir, "few.haan", "haan/1 instance\nagents 2\nhouses 1\n");
    let junk = write(&dir, "junk.haan", "haan/1 instance\nagents two\n");
    let bad = write(&dir, "bad.haan", "haan/1 instance\nagents 2\nhouses 2\nedge 1 1\n");
    let cases: [(&[&str], i32); 8] = [
        (&["solve", s(&few)], exit::INFEASIBLE),
        (&["solve", s(&junk)], exit::PARSE),
        (&["solve", s(&bad)], exit::INVALID_INSTANCE),
        (&["solve", s(&tri), "--algo", "brute", "--guess-limit", "2"], exit::BUDGET),
        (&["solve", s(&tri), "--algo", "simplex"], exit::UNKNOWN_ALGORITHM),
        (&["solve", "/nonexistent/x.haan"], exit::IO),
        (&["solve", s(&tri), "--algo", "vc-xp", "--cover", "0"], exit::BAD_PARAMETER),
        (&["solve"], exit::USAGE),
    ];
    for (args, code) in cases {
        let o = haan(args);
        assert_eq!(o.status.code(), Some(code), "{args:?}");
        assert!(o.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn parse_errors_name_file_and_line() {
    let dir = TempDir::new().unwrap();
    let junk = write(&dir, "junk.haan", "haan/1 instance\nagents two\n");
    let o = haan(&["solve", s(&junk)]);
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("junk.haan") && err.contains("line 2"), "{err}");
}

#[test]
fn workers_from_environment() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "t.haan", TRIANGLE);
    let run = |w: &str| {
        Command::new(env!("CARGO_BIN_EXE_haan"))
            .args(["solve", s(&f), "--algo", "envy-guess"])
            .env("HAAN_WORKERS", w)
            .output()
            .unwrap()
    };
    let one = run("1");
    assert_eq!(one.status.code(), Some(exit::OK));
    assert_eq!(one.stdout, run("4").stdout);
    assert_eq!(run("lots").status.code(), Some(exit::USAGE));
    assert_eq!(run("0").status.code(), Some(exit::BAD_PARAMETER));
}

#[test]
fn result_files_do_not_depend_on_workers() {
    let dir = TempDir::new().unwrap();
    let gen = haan(&["generate", "clique-vc-split", "--graph", "k3", "--k", "2"]);
    let f = write(&dir, "g.haan", &stdout(&gen));
    for algo in ["brute", "envy-guess", "separator", "vc-xp"] {
        let outs: Vec<Vec<u8>> = ["1", "2", "8"]
            .iter()
            .map(|w| haan(&["solve", s(&f), "--algo", algo, "--workers", w, "--objective", "envy-happy"]).stdout)
            .collect();
        assert!(!outs[0].is_empty());
        assert!(outs.windows(2).all(|w| w[0] == w[1]), "{algo}");
    }
}

#[test]
fn annotated_files_go_to_the_separator_solver() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "a.haan", "haan/1 instance\nagents 1\nhouses 2\npref 0 0\nfeasible 0 1\nangry 0\n");
    let o = haan(&["solve", s(&f)]);
    assert_eq!(o.status.code(), Some(exit::OK));
    let r = parse_result(&stdout(&o)).unwrap();
    assert_eq!((r.solver.as_str(), r.min_envy, r.allocation), ("separator", 1, vec![1]));
    assert_eq!(haan(&["solve", s(&f), "--algo", "brute"]).status.code(), Some(exit::WRONG_SOLVER));
    let none = write(&dir, "n.haan", "haan/1 instance\nagents 2\nhouses 2\nfeasible 0 1\nfeasible 1 1\n");
    assert_eq!(haan(&["solve", s(&none)]).status.code(), Some(exit::NO_FEASIBLE));
}

#[test]
fn generate_clique_bipartite_on_k4() {
    let o = haan(&["generate", "clique-bip-d2", "--graph", "k4", "--k", "3"]);
    assert_eq!(o.status.code(), Some(exit::OK));
    let f = parse_instance(&stdout(&o)).unwrap();
    assert_eq!((f.instance.n_agents(), f.instance.n_houses()), (18, 19));
    assert_eq!(f.meta("target_envy"), Some("6"));
    assert_eq!(f.meta("family"), Some("clique-bip-d2"));
}

#[test]
fn generate_halfsep_with_k_zero() {
    let o = haan(&["generate", "halfsep-3reg", "--graph", "k4", "--k", "0"]);
    assert_eq!(o.status.code(), Some(exit::OK));
    assert_eq!(parse_instance(&stdout(&o)).unwrap().meta("target_envy"), Some("0"));
}

#[test]
fn generation_is_deterministic_per_seed() {
    let run = |seed: &str| {
        haan(&["generate", "clique-bip-d2", "--graph", "random-regular:10:3", "--seed", seed, "--k", "2"]).stdout
    };
    let a = run("7");
    assert!(!a.is_empty());
    assert_eq!(a, run("7"));
    assert_ne!(a, run("8"));
}

#[test]
fn generator_errors() {
    let cases: [(&[&str], i32); 5] = [
        (&["generate", "clique-bip-d2", "--graph", "cycle:5", "--k", "6"], exit::GENERATOR),
        (&["generate", "halfsep-3reg", "--graph", "cycle:5", "--k", "1"], exit::GENERATOR),
        (&["generate", "clique-vc-split", "--graph", "k3", "--k", "2", "--t", "0"], exit::GENERATOR),
        (&["generate", "nope", "--graph", "k3", "--k", "2"], exit::USAGE),
        (&["generate", "clique-bip-d2", "--graph", "k9", "--k", "2"], exit::USAGE),
    ];
    for (args, code) in cases {
        assert_eq!(haan(args).status.code(), Some(code), "{args:?}");
    }
}

#[test]
fn witness_round_trip_through_verify() {
    let dir = TempDir::new().unwrap();
    for (family, graph, k, extra) in [
        ("clique-bip-d2", "k4", "3", vec!["--clique", "0,1,2"]),
        ("clique-vc-bip", "k3", "3", vec![]),
        ("clique-vc-split", "k4", "2", vec!["--t", "2"]),
        ("halfsep-3reg", "prism", "4", vec![]),
    ] {
        let inst = dir.path().join(format!("{family}.haan"));
        let wit = dir.path().join(format!("{family}.alloc"));
        let mut args = vec!["generate", family, "--graph", graph, "--k", k, "-o", s(&inst), "--witness-out", s(&wit)];
        args.extend(extra);
        assert_eq!(haan(&args).status.code(), Some(exit::OK), "{family}");
        let o = haan(&["verify", s(&inst), s(&wit)]);
        assert_eq!(o.status.code(), Some(exit::OK));
        let report = stdout(&o);
        assert!(report.contains("within_target true"), "{family}: {report}");
        if family == "clique-bip-d2" {
            assert!(report.contains("envious 6\n") && report.contains("target_envy 6\n"), "{report}");
        }
    }
}

#[test]
fn missing_witness_is_reported() {
    let dir = TempDir::new().unwrap();
    let wit = dir.path().join("w");
    let o = haan(&["generate", "halfsep-3reg", "--graph", "prism", "--k", "2", "--witness-out", s(&wit)]);
    assert_eq!(o.status.code(), Some(exit::GENERATOR));
    let o = haan(&["generate", "clique-vc-bip", "--graph", "k4", "--k", "3", "--clique", "0,1", "--witness-out", s(&wit)]);
    assert_eq!(o.status.code(), Some(exit::GENERATOR));
}

#[test]
fn verify_examples() {
    let dir = TempDir::new().unwrap();
    let tri = write(&dir, "t.haan", TRIANGLE);
    let dup = write(&dir, "dup", "haan/1 allocation\nallocation 0 0 1\n");
    assert_eq!(haan(&["verify", s(&tri), s(&dup)]).status.code(), Some(exit::INVALID_ALLOCATION));
    let empty = write(&dir, "e.haan", "haan/1 instance\nagents 0\nhouses 0\n");
    let none = write(&dir, "none", "haan/1 allocation\nallocation\n");
    let o = haan(&["verify", s(&empty), s(&none)]);
    assert_eq!(o.status.code(), Some(exit::OK));
    assert!(stdout(&o).contains("envious 0\n"));
    // result files are accepted as allocations
    let res = dir.path().join("r");
    haan(&["solve", s(&tri), "-o", s(&res)]);
    let o = haan(&["verify", s(&tri), s(&res)]);
    assert!(stdout(&o).contains("envious 2\nhappy 1\n"));
}

#[test]
fn verify_checks_feasibility_sets() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "a.haan", "haan/1 instance\nagents 1\nhouses 2\npref 0 0\nfeasible 0 1\nangry 0\n");
    let bad = write(&dir, "bad", "haan/1 allocation\nallocation 0\n");
    let o = haan(&["verify", s(&f), s(&bad)]);
    assert_eq!(o.status.code(), Some(exit::INVALID_ALLOCATION));
    assert!(stdout(&o).contains("feasible false"));
}

fn tiny_corpus(dir: &TempDir) {
    for i in 0..10 {
        let n = 2 + i % 4;
        let mut text = format!("haan/1 instance\nagents {n}\nhouses {}\n", n + i % 2);
        for a in 0..n - 1 {
            text.push_str(&format!("edge {a} {}\n", a + 1));
        }
        for a in 0..n {
            text.push_str(&format!("pref {a} {}\n", (a * i) % n));
        }
        write(dir, &format!("tiny{i:02}.haan"), &text);
    }
}

#[test]
fn bench_tiny_corpus() {
    let dir = TempDir::new().unwrap();
    tiny_corpus(&dir);
    write(&dir, "notes.txt", "ignored");
    for parallel in [false, true] {
        let mut args = vec!["bench", s(dir.path())];
        if parallel {
            args.push("--parallel");
        }
        let o = haan(&args);
        assert_eq!(o.status.code(), Some(exit::OK));
        let table = stdout(&o);
        let rows: Vec<&str> = table.lines().skip(1).collect();
        assert_eq!(rows.len(), 50);
        assert!(rows.iter().all(|r| r.split('\t').count() == 8));
        assert!(!table.contains("FAILURE"));
        assert!(rows[0].starts_with("tiny00.haan\tbrute\t"));
    }
}

#[test]
fn bench_records_timeouts() {
    let dir = TempDir::new().unwrap();
    // dense random instance: envy guessing over 2^|E| masks cannot finish
    let mut text = String::from("haan/1 instance\nagents 16\nhouses 17\n");
    for u in 0..16 {
        for v in u + 1..16 {
            if (u * 7 + v * 3) % 5 < 3 {
                text.push_str(&format!("edge {u} {v}\n"));
            }
        }
        text.push_str(&format!("pref {u} {} {}\n", u % 4, 4 + u % 3));
    }
    write(&dir, "big.haan", &text);
    let o = haan(&["bench", s(dir.path()), "--algos", "envy-guess", "--timeout", "0.3", "--guess-limit", "1000000000000"]);
    assert_eq!(o.status.code(), Some(exit::OK));
    assert!(stdout(&o).lines().nth(1).unwrap().contains("\ttimeout\t"), "{}", stdout(&o));
}

#[test]
fn bench_empty_corpus() {
    let dir = TempDir::new().unwrap();
    let o = haan(&["bench", s(dir.path())]);
    assert_eq!(o.status.code(), Some(exit::OK));
    assert_eq!(stdout(&o).lines().count(), 1);
}
