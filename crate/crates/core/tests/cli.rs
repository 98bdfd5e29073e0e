use std::path::Path;
use std::process::Command;

use election_manipulation::cli::run;
use election_manipulation::{parse_election, Rule};

fn manip(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_manip")).args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn lines_with<'a>(stdout: &'a str, key: &str) -> Vec<&'a str> {
    stdout.lines().filter_map(|l| l.strip_prefix(key)).collect()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn borda_gadget_with_witness_appended() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.vote");
    assert_eq!(
        manip(&[
            "gadget",
            "--theorem",
            "borda-ccwm",
            "--partition",
            "2,2",
            "--out",
            p(&g)
        ])
        .0,
        0
    );
    let mut text = std::fs::read_to_string(&g).unwrap();
    text.push_str("fixed: 12 : p > a > b\nfixed: 12 : p > b > a\n");
    std::fs::write(&g, text).unwrap();
    let (status, stdout, _) = manip(&["winner", "--election", p(&g)]);
    assert_eq!(status, 0);
    assert!(stdout.contains("scores: p=48 a=45 b=45\n"));
    assert!(stdout.contains("winners: p\n"));
}

#[test]
fn stv_gadget_witness_reverifies() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.vote");
    manip(&["gadget", "--theorem", "stv-ccwm", "--partition", "1,1", "--out", p(&g)]);
    let (status, stdout, _) = manip(&["manipulate", "--election", p(&g)]);
    assert_eq!(status, 0);
    assert_eq!(lines_with(&stdout, "answer: "), ["yes"]);
    let witness = lines_with(&stdout, "witness: ");
    assert_eq!(witness.len(), 2);

    // Replace the coalition with the witness as fixed votes and re-run `winner`.
    let original = std::fs::read_to_string(&g).unwrap();
    let mut text: String = original
        .lines()
        .filter(|l| !l.starts_with("coalition"))
        .map(|l| format!("{l}\n"))
        .collect();
    for w in witness {
        let (order, weight) = w.split_once(" weight ").unwrap();
        let ranking = order.trim_matches(|c| c == '(' || c == ')').replace(',', " > ");
        text.push_str(&format!("fixed: {weight} : {ranking}\n"));
    }
    std::fs::write(&g, text).unwrap();
    let (_, stdout, _) = manip(&["winner", "--election", p(&g)]);
    assert!(stdout.contains("winners: p\n"));
}

#[test]
fn no_answer_has_status_one_and_no_witness() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.vote");
    manip(&[
        "gadget",
        "--theorem",
        "maximin-ccwm",
        "--partition",
        "1,1,4",
        "--out",
        p(&g),
    ]);
    let (status, stdout, _) = manip(&["manipulate", "--election", p(&g)]);
    assert_eq!(status, 1);
    assert_eq!(lines_with(&stdout, "answer: "), ["no"]);
    assert!(lines_with(&stdout, "witness: ").is_empty());
}

#[test]
fn exhausted_budget_has_status_three() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.vote");
    manip(&[
        "gadget",
        "--theorem",
        "copeland-ccwm",
        "--partition",
        "1,1,4",
        "--out",
        p(&g),
    ]);
    let (status, stdout, _) = manip(&["manipulate", "--election", p(&g), "--budget", "2"]);
    assert_eq!(status, 3);
    assert!(stdout.contains("answer: exhausted\n"));
}

#[test]
fn verify_reports_full_agreement() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("r.csv");
    let (status, stdout, _) = manip(&[
        "verify",
        "--theorem",
        "borda-ccwm",
        "--trials",
        "50",
        "--max-items",
        "8",
        "--max-value",
        "10",
        "--seed",
        "42",
        "--csv",
        p(&csv),
    ]);
    assert_eq!(status, 0);
    assert!(stdout.contains("agreement: 1.000\n"));
    let report = std::fs::read_to_string(&csv).unwrap();
    assert!(report.starts_with("trial,items,oracle,solver,agree,nodes_expanded\n"));
    assert_eq!(report.lines().count(), 51);
}

#[test]
fn destructive_and_cup_methods() {
    let dir = tempfile::tempdir().unwrap();
    let e = dir.path().join("e.vote");
    std::fs::write(
        &e,
        "protocol: borda\ncandidates: a b h\nfixed: 3 : h > a > b\nfixed: 2 : a > h > b\ncoalition: 2\ntarget: destructive h\n",
    )
    .unwrap();
    let (status, stdout, _) = manip(&["manipulate", "--election", p(&e)]);
    assert_eq!(status, 0);
    assert!(stdout.contains("method: monotone\n"));
    assert_eq!(lines_with(&stdout, "witness: "), ["(a,b,h) weight 2"]);

    std::fs::write(
        &e,
        "protocol: cup\ncandidates: a b p\nschedule: ((a b) p)\nfixed: 3 : a > b > p\ncoalition: 4\n",
    )
    .unwrap();
    let (status, stdout, _) = manip(&["manipulate", "--election", p(&e)]);
    assert_eq!(status, 0);
    assert!(stdout.contains("method: cup\n"));
    assert!(stdout.contains("potential_winners: a b p\n"));
}

#[test]
fn randomized_cup_commands() {
    let dir = tempfile::tempdir().unwrap();
    let e = dir.path().join("e.vote");
    std::fs::write(
        &e,
        "protocol: randomized-cup\ncandidates: a b p\nfixed: 1 : a > b > p\nfixed: 1 : b > p > a\nfixed: 1 : p > a > b\ncoalition: 2\n",
    )
    .unwrap();
    let (status, stdout, _) = manip(&["winner", "--election", p(&e)]);
    assert_eq!(status, 0);
    assert!(stdout.contains("probabilities: a=1/3 b=1/3 p=1/3\n"));
    let (status, stdout, _) = manip(&["manipulate", "--election", p(&e), "--threshold", "1/2"]);
    assert_eq!(status, 0, "{stdout}");
    assert!(stdout.contains("probability: 1\n"));
}

#[test]
fn evaluate_exact_and_sampled() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().join("d.dist");
    std::fs::write(
        &d,
        "protocol: borda\ncandidates: a b p\nvoter: 1 fixed a > b > p\nvoter: 10 uniform\n",
    )
    .unwrap();
    let (status, stdout, _) = manip(&["evaluate", "--input", p(&d)]);
    assert_eq!(status, 0);
    assert!(stdout.contains("probability: 1/3\n"));
    let (status, stdout, _) = manip(&["evaluate", "--input", p(&d), "--samples", "100000", "--seed", "1"]);
    assert_eq!(status, 0);
    let ci: Vec<f64> = lines_with(&stdout, "ci95: ")[0]
        .split(' ')
        .map(|x| x.parse().unwrap())
        .collect();
    assert!(ci[0] <= 1.0 / 3.0 && 1.0 / 3.0 <= ci[1]);
    let (status, _, stderr) = manip(&["evaluate", "--input", p(&d), "--samples", "10"]);
    assert_eq!(status, 2);
    assert!(stderr.contains("--seed"));
}

#[test]
fn lift_chain_preserves_probability() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.vote");
    let (l, n, u) = (dir.path().join("l"), dir.path().join("n"), dir.path().join("u"));
    manip(&[
        "gadget",
        "--theorem",
        "borda-ccwm",
        "--partition",
        "1,1",
        "--out",
        p(&g),
    ]);
    assert_eq!(
        manip(&["lift", "--theorem", "uvcwe", "--input", p(&g), "--out", p(&l)]).0,
        0
    );
    assert_eq!(
        manip(&["lift", "--theorem", "uvcimw", "--input", p(&l), "--out", p(&n)]).0,
        0
    );
    assert_eq!(
        manip(&["lift", "--theorem", "unweight", "--input", p(&l), "--out", p(&u)]).0,
        0
    );
    let prob = |path: &Path| {
        let (_, stdout, _) = manip(&["evaluate", "--input", p(path)]);
        lines_with(&stdout, "probability: ")[0].to_string()
    };
    let base = prob(&l);
    assert_ne!(base, "0");
    assert_eq!(prob(&n), base);
    assert_eq!(prob(&u), base);
}

#[test]
fn cup_schedule_show() {
    let (status, stdout, _) = manip(&["cup-schedule", "--show", "--candidates", "a b c d e f g"]);
    assert_eq!(status, 0);
    assert!(stdout.contains("schedule: (((a b) (c d)) ((e f) g))\n"));
}

#[test]
fn input_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let e = dir.path().join("e.vote");
    std::fs::write(&e, "protocol: borda\ncandidates: a b p\nfixed: 1 : a > a > b\n").unwrap();
    let (status, _, stderr) = manip(&["winner", "--election", p(&e)]);
    assert_eq!(status, 2);
    assert!(stderr.contains("line 3"));
    assert_eq!(manip(&["frobnicate"]).0, 2);
    assert_eq!(manip(&["verify", "--theorem", "borda-ccwm", "--trials", "3"]).0, 2);
    assert_eq!(
        manip(&[
            "gadget",
            "--theorem",
            "borda-ccwm",
            "--partition",
            "1,2",
            "--out",
            p(&e)
        ])
        .0,
        2
    );
}

#[test]
fn run_is_usable_in_process() {
    let outcome = run(["manip", "cup-schedule", "--show", "--candidates", "a b p"]);
    assert_eq!(outcome.status, 0);
    assert_eq!(outcome.stdout, "schedule: ((a b) p)\nleaves: 3\n");
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.vote");
    run([
        "manip",
        "gadget",
        "--theorem",
        "copeland-ccwm",
        "--partition",
        "3,1,2",
        "--out",
        p(&g),
    ]);
    let file = parse_election(&std::fs::read_to_string(&g).unwrap()).unwrap();
    assert_eq!(file.instance.coalition_weights(), &[3, 1, 2]);
    assert_eq!(
        Rule::from_protocol(file.protocol.unwrap(), None).unwrap(),
        Rule::Copeland
    );
}
