use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use circular_seriation::cli::{parse_matrix, parse_permutation, TreeDocument};
use circular_seriation::{dihedral_elements, is_circular_robinson, NodeStatus, Permutation};
use tempfile::TempDir;

const LINEAR: &str = "\
0 1 3 4 6 7
1 0 2 3 5 6
3 2 0 1 4 5
4 3 1 0 2 4
6 5 4 2 0 3
7 6 5 4 3 0
";

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_circseriate"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().expect("exit code")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_owned()
}

#[test]
fn generated_matrix_is_strict_circular_robinson_and_reproducible() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for p in [&a, &b] {
        assert_eq!(
            code(&[
                "gen",
                "-n",
                "8",
                "--family",
                "arc",
                "--seed",
                "1",
                "-o",
                path_str(p)
            ]),
            0
        );
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert_eq!(
        code(&["check", path_str(&a), "--mode", "circular", "--strict"]),
        0
    );
    assert_eq!(code(&["gen", "-n", "0", "-o", path_str(&a)]), 2);
    assert_eq!(
        code(&["gen", "-n", "5", "--family", "spiral", "-o", path_str(&a)]),
        2
    );
}

#[test]
fn seriate_equally_spaced_points() {
    let dir = TempDir::new().unwrap();
    let mut text = String::new();
    for i in 0..5usize {
        let row: Vec<String> = (0..5usize)
            .map(|j| {
                let k = i.abs_diff(j);
                (k.min(5 - k) as f64 / 5.0).to_string()
            })
            .collect();
        text.push_str(&row.join(","));
        text.push('\n');
    }
    let input = write(&dir, "five.csv", &text);
    let out = run(&["seriate", &input]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    let mut lines = stdout.lines();
    let tree = TreeDocument::from_json(lines.next().unwrap())
        .unwrap()
        .to_tree()
        .unwrap();
    assert_eq!(tree.count_status(NodeStatus::Free), 0);
    assert_eq!(tree.count_status(NodeStatus::NonOrientable), 0);
    let rep = parse_permutation(lines.next().unwrap()).unwrap();
    assert!(dihedral_elements(5).contains(&rep));
}

#[test]
fn seriate_recovers_hidden_order() {
    let dir = TempDir::new().unwrap();
    let m = dir.path().join("m.csv");
    let o = dir.path().join("out.txt");
    assert_eq!(
        code(&[
            "gen",
            "-n",
            "40",
            "--seed",
            "3",
            "--permute",
            "-o",
            path_str(&m)
        ]),
        0
    );
    let out = run(&["seriate", path_str(&m), "-o", path_str(&o), "--stats"]);
    assert_eq!(out.status.code(), Some(0));
    let stats: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(stats["n"], 40);
    let doc = fs::read_to_string(&o).unwrap();
    let rep = dir.path().join("rep.perm");
    fs::write(&rep, doc.lines().nth(1).unwrap()).unwrap();
    let truth = format!("{}.perm", path_str(&m));
    let out = run(&["kendall", path_str(&rep), &truth, "--quotient"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "0");
}

#[test]
fn seriate_error_codes() {
    let dir = TempDir::new().unwrap();
    let ragged = write(&dir, "ragged.csv", "0 1 2\n1 0\n2 3 0\n");
    let asym = write(&dir, "asym.csv", "0 1 2\n1 0 3\n2 4 0\n");
    let garbage = write(&dir, "garbage.csv", "0 x\n1 0\n");
    let bad = write(
        &dir,
        "bad.csv",
        "0 1 5 1.5 6\n1 0 1.1 7 2\n5 1.1 0 3 1.2\n1.5 7 3 0 4\n6 2 1.2 4 0\n",
    );
    assert_eq!(code(&["seriate", &ragged]), 3);
    assert_eq!(code(&["seriate", &asym]), 3);
    assert_eq!(code(&["seriate", &garbage]), 3);
    assert_eq!(code(&["seriate", "/nonexistent/matrix.csv"]), 3);
    assert_eq!(code(&["seriate", &bad]), 4);
    assert_eq!(code(&["seriate"]), 2);
}

#[test]
fn check_linear_and_circular() {
    let dir = TempDir::new().unwrap();
    let lin = write(&dir, "linear.csv", LINEAR);
    assert_eq!(code(&["check", &lin, "--mode", "linear"]), 0);
    assert_eq!(code(&["check", &lin, "--mode", "circular"]), 0);

    let d = parse_matrix(LINEAR, None).unwrap();
    let p = Permutation::new(vec![0, 2, 1, 3, 4, 5]).unwrap();
    let shuffled = d.conjugate(&p).unwrap();
    assert!(!is_circular_robinson(&shuffled, false));
    let text: String = shuffled
        .rows()
        .iter()
        .map(|r| r.iter().map(f64::to_string).collect::<Vec<_>>().join(" ") + "\n")
        .collect();
    let shuf = write(&dir, "shuffled.csv", &text);
    let out = run(&["check", &shuf, "--mode", "circular"]);
    assert_ne!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout).unwrap().contains("row "));
}

#[test]
fn rate_table_file() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for p in [&a, &b] {
        let args = [
            "rate",
            "--ns",
            "50,100",
            "--trials",
            "10",
            "--seed",
            "2",
            "-o",
            path_str(p),
        ];
        assert_eq!(code(&args), 0);
    }
    let text = fs::read_to_string(&a).unwrap();
    assert_eq!(text, fs::read_to_string(&b).unwrap());
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,trials,mean_diam,std_diam,norm_stat,mean_eps");
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("50,10,"));
    assert_eq!(
        code(&["rate", "--ns", "50", "--trials", "0", "-o", path_str(&a)]),
        2
    );
}

#[test]
fn kendall_command() {
    let dir = TempDir::new().unwrap();
    let id = write(&dir, "id", "0 1 2 3 4\n");
    let rev = write(&dir, "rev", "4 3 2 1 0\n");
    let swap = write(&dir, "swap", "1 0 2 3 4\n");
    let short = write(&dir, "short", "0 1 2\n");
    let value = |args: &[&str]| {
        String::from_utf8(run(args).stdout)
            .unwrap()
            .trim()
            .to_owned()
    };
    assert_eq!(value(&["kendall", &id, &id]), "0");
    assert_eq!(value(&["kendall", &id, &rev]), "1");
    assert_eq!(value(&["kendall", &id, &rev, "--quotient"]), "0");
    assert_eq!(value(&["kendall", &id, &swap]), "0.1");
    assert_eq!(code(&["kendall", &id, &short]), 3);
}
