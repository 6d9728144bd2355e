use std::path::{Path, PathBuf};

use rainbowfrac_cli::run;
use tempfile::TempDir;

struct Outcome {
    code: i32,
    out: String,
    err: String,
}

fn cli(args: &[&str]) -> Outcome {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut argv = vec!["rainbowfrac"];
    argv.extend_from_slice(args);
    let code = run(argv, &mut out, &mut err);
    Outcome {
        code,
        out: String::from_utf8(out).unwrap(),
        err: String::from_utf8(err).unwrap(),
    }
}

fn path(dir: &TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = path(dir, name);
    std::fs::write(&p, text).unwrap();
    p
}

fn generate(dir: &TempDir, name: &str, args: &[&str]) -> PathBuf {
    let p = path(dir, name);
    let mut all = vec!["generate"];
    all.extend_from_slice(args);
    all.extend_from_slice(&["-o", s(&p)]);
    let res = cli(&all);
    assert_eq!(res.code, 0, "{}", res.err);
    p
}

#[test]
fn odd_cycle_has_no_rainbow() {
    let dir = TempDir::new().unwrap();
    let f = generate(&dir, "oc.txt", &["odd_cycle", "--k", "2"]);
    let res = cli(&["rainbow", s(&f), "--n", "5/2"]);
    assert_eq!(res.code, 1);
    assert_eq!(res.out, "ABSENT\n");
}

#[test]
fn truncated_plane_solve() {
    let dir = TempDir::new().unwrap();
    let f = generate(&dir, "tp.txt", &["truncated_plane", "--q", "2"]);
    let res = cli(&["solve", s(&f), "--nu"]);
    assert_eq!(res.code, 0);
    assert!(res.out.contains("value 2/1\n"));
    let fs: Vec<&str> = res.out.lines().filter(|l| l.starts_with("f ")).collect();
    assert_eq!(fs.len(), 4);
    assert!(fs.iter().all(|l| l.ends_with(" 1/2")));
    assert!(!res.out.contains("\ng "));

    let both = cli(&["solve", s(&f)]);
    assert!(both.out.contains("\ng 0 "));
    let tau = cli(&["solve", s(&f), "--tau"]);
    assert!(tau.out.contains("value 2/1\n") && !tau.out.contains("\nf "));
    let one = cli(&["solve", s(&f), "--color", "0"]);
    assert_eq!(one.code, 0);
    assert_eq!(cli(&["solve", s(&f), "--color", "9"]).code, 2);
}

#[test]
fn collapse_then_verify() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "tri.txt", "r 2\nv 3\ne 0 1\ne 1 2\ne 0 2\n");
    let res = cli(&["collapse", s(&f), "--n", "3/2", "--trace"]);
    assert_eq!(res.code, 0, "{}", res.err);
    assert!(res.out.starts_with("d 2\n"));
    assert!(res.out.contains("\niter 0 nbar "));
    let seq = write(&dir, "tri.seq", &res.out);
    let ok = cli(&["verify-collapse", s(&f), "--n", "3/2", "--seq", s(&seq)]);
    assert_eq!(ok.code, 0);
    assert!(ok.out.starts_with("VALID"));

    let bad = write(&dir, "bad.seq", "d 1\nstep 1 sigma 0 facet 0,1\n");
    let res = cli(&["verify-collapse", s(&f), "--n", "3/2", "--seq", s(&bad)]);
    assert_eq!(res.code, 1);
    assert!(res.out.starts_with("INVALID step 0"));
}

#[test]
fn partite_collapse() {
    let dir = TempDir::new().unwrap();
    let f = generate(&dir, "d.txt", &["drisko", "--n", "2"]);
    let res = cli(&["collapse", s(&f), "--n", "2", "--mode", "partite"]);
    assert_eq!(res.code, 0, "{}", res.err);
    let seq = write(&dir, "d.seq", &res.out);
    assert_eq!(cli(&["verify-collapse", s(&f), "--n", "2", "--seq", s(&seq)]).code, 0);
    let g = generate(&dir, "oc.txt", &["odd_cycle", "--k", "1"]);
    let res = cli(&["collapse", s(&g), "--n", "3/2", "--mode", "partite"]);
    assert_eq!(res.code, 2);
    assert!(res.err.contains("partition"));
}

#[test]
fn certificates_round_trip() {
    let dir = TempDir::new().unwrap();
    let f = generate(&dir, "oc5.txt", &["odd_cycle", "--k", "2", "--copies", "5"]);
    let res = cli(&["rainbow", s(&f), "--n", "5/2"]);
    assert_eq!(res.code, 0);
    let cert = write(&dir, "cert.txt", &res.out);
    assert_eq!(cli(&["rainbow", s(&f), "--n", "5/2", "--verify", s(&cert)]).code, 0);

    let tampered = res.out.replace("pick 1 1", "pick 0 1");
    let cert = write(&dir, "bad.txt", &tampered);
    let res = cli(&["rainbow", s(&f), "--n", "5/2", "--verify", s(&cert)]);
    assert_eq!(res.code, 1);
    assert!(res.out.starts_with("INVALID color reused"));

    let d = generate(&dir, "d3.txt", &["drisko", "--n", "2"]);
    let more = write(
        &dir,
        "d3plus.txt",
        &(std::fs::read_to_string(&d).unwrap() + "color extra\ne 0 1\ne 2 3\n"),
    );
    assert_eq!(cli(&["rainbow-integral", s(&d), "--n", "2"]).code, 1);
    let res = cli(&["rainbow-integral", s(&more), "--n", "2"]);
    assert_eq!(res.code, 0);
    let cert = write(&dir, "icert.txt", &res.out);
    assert_eq!(cli(&["rainbow-integral", s(&more), "--n", "2", "--verify", s(&cert)]).code, 0);
}

#[test]
fn floor_rn_experiment_runs() {
    let dir = TempDir::new().unwrap();
    let f = generate(&dir, "oc.txt", &["odd_cycle", "--k", "2", "--copies", "5"]);
    let res = cli(&["rainbow", s(&f), "--n", "5/2", "--floor-rn"]);
    assert!(res.out.starts_with("% searching the first 5 colors"));
    assert_eq!(res.code, 0);
    let pruned = cli(&["rainbow", s(&f), "--n", "5/2"]);
    let unpruned = cli(&["rainbow", s(&f), "--n", "5/2", "--no-prune"]);
    assert_eq!(pruned.out, unpruned.out);
}

#[test]
fn blow_up_with_sequence() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "tri.txt", "r 2\nv 3\ne 0 1\ne 1 2\ne 0 2\n");
    let cx = cli(&["complex", s(&f), "--n", "3/2"]);
    assert_eq!(cx.out, "ground 3\nfacet 0,1\nfacet 0,2\nfacet 1,2\n");
    let cx_path = write(&dir, "tri.cx", &cx.out);
    let seq = write(&dir, "tri.seq", &cli(&["collapse", s(&f), "--n", "3/2"]).out);
    let big = path(&dir, "big.cx");
    let big_seq = path(&dir, "big.seq");
    let res = cli(&[
        "blow-up", "--complex", s(&cx_path), "--mult", "0:2,1:2", "--seq", s(&seq), "-o", s(&big), "--seq-out",
        s(&big_seq),
    ]);
    assert_eq!(res.code, 0, "{}", res.err);
    let text = std::fs::read_to_string(&big).unwrap();
    assert!(text.starts_with("ground 5\n"));
    assert!(text.contains("label 1 0 2\n"));
    assert!(std::fs::read_to_string(&big_seq).unwrap().starts_with("d 2\n"));

    let res = cli(&["blow-up", "--complex", s(&cx_path), "--mult", "7:2"]);
    assert_eq!(res.code, 2);
    let res = cli(&["blow-up", "--complex", s(&cx_path), "--mult", "0:0"]);
    assert_eq!(res.code, 2);
}

#[test]
fn km_witness_outcomes() {
    let dir = TempDir::new().unwrap();
    let four = generate(&dir, "oc4.txt", &["odd_cycle", "--k", "2"]);
    let res = cli(&["km-witness", s(&four), "--n", "5/2"]);
    assert_eq!(res.code, 0);
    assert!(res.out.contains("WITNESS\n"));
    assert!(res.out.contains("complement_rank 4\n"));

    let five = generate(&dir, "oc5.txt", &["odd_cycle", "--k", "2", "--copies", "5"]);
    let res = cli(&["km-witness", s(&five), "--n", "5/2"]);
    assert_eq!(res.code, 1);
    assert!(res.out.contains("NOT_CONTAINED\nindependent "));

    let res = cli(&["km-witness", s(&four), "--n", "5/2", "--d", "3"]);
    assert_eq!(res.code, 1);
    assert!(res.out.ends_with("ABSENT\n"));
}

#[test]
fn generate_kinds() {
    let cases: &[(&[&str], usize)] = &[
        (&["drisko", "--n", "3"], 4),
        (&["bgs", "--n", "4"], 7),
        (&["odd_cycle", "--k", "1"], 2),
        (&["two_odd_cycles", "--n", "3"], 5),
        (&["truncated_plane", "--q", "3"], 9),
        (&["truncated_plane", "--q", "2", "--copies", "3"], 3),
    ];
    for (args, colors) in cases {
        let mut all = vec!["generate"];
        all.extend_from_slice(args);
        let res = cli(&all);
        assert_eq!(res.code, 0, "{args:?}: {}", res.err);
        assert_eq!(res.out.lines().filter(|l| l.starts_with("color ")).count(), *colors, "{args:?}");
    }
    assert_eq!(cli(&["generate", "bgs", "--n", "3"]).code, 2);
    assert_eq!(cli(&["generate", "truncated_plane", "--q", "4"]).code, 2);
    assert_eq!(cli(&["generate", "odd_cycle"]).code, 2);
    assert_eq!(cli(&["generate", "drisko", "--n", "2", "--copies", "3"]).code, 2);
}

#[test]
fn input_errors_exit_two() {
    let dir = TempDir::new().unwrap();
    assert_eq!(cli(&["solve", "/nonexistent/file"]).code, 2);
    assert_eq!(cli(&["frobnicate"]).code, 2);
    let f = write(&dir, "bad.txt", "r 2\nv 2\ne 0 5\n");
    let res = cli(&["solve", s(&f)]);
    assert_eq!(res.code, 2);
    assert!(!res.err.is_empty());
    let ok = write(&dir, "ok.txt", "r 2\nv 2\ne 0 1\n");
    assert_eq!(cli(&["rainbow", s(&ok), "--n", "x/2"]).code, 2);
    let edges: String = (0..16).map(|i| format!("e {} {}\n", i, i + 1)).collect();
    let big = write(&dir, "big.txt", &format!("r 2\nv 17\n{edges}"));
    let res = cli(&["complex", s(&big), "--n", "2"]);
    assert_eq!(res.code, 2);
    assert!(res.err.contains("limit"));
    assert_eq!(cli(&["--help"]).code, 0);
}

#[test]
fn output_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let f = generate(&dir, "tc.txt", &["two_odd_cycles", "--n", "3", "--copies", "6"]);
    for args in [
        vec!["rainbow", s(&f), "--n", "3"],
        vec!["collapse", s(&f), "--n", "3", "--trace"],
        vec!["solve", s(&f)],
    ] {
        let a = cli(&args);
        let b = cli(&args);
        assert_eq!(a.code, 0, "{args:?}: {}", a.err);
        assert_eq!(a.out, b.out);
    }
}
