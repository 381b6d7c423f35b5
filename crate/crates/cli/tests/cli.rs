//! End-to-end runs of the `sociolex` binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_sociolex"));
    for (k, _) in std::env::vars() {
        if k.starts_with("SDOH_") {
            cmd.env_remove(k);
        }
    }
    cmd
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "exit {:?}\n{}", out.status.code(), String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, content: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, content).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// One BRAT annotator directory over ten notes "Pt is lonely." where the
/// notes in `yes` carry a loneliness span.
fn annotator(root: &Path, name: &str, yes: &[usize]) -> PathBuf {
    let dir = root.join(name);
    std::fs::create_dir_all(&dir).unwrap();
    for i in 0..10 {
        let stem = format!("{}_p{i}_n{i}_2020-01-01", i + 1);
        write(&dir, &format!("{stem}.txt"), "Pt is lonely.");
        let ann = if yes.contains(&i) { "T1\tloneliness 6 12\tlonely\n" } else { "" };
        write(&dir, &format!("{stem}.ann"), ann);
    }
    dir
}

#[test]
fn version_reports_toolkit_and_lexicon() {
    let text = stdout(&run(&["--version"]));
    assert_eq!(text, format!("sociolex {}\nlexicon sample-1\n", env!("CARGO_PKG_VERSION")));
}

#[test]
fn agreement_on_two_annotators() {
    let tmp = tempfile::tempdir().unwrap();
    // yes-yes 4, yes-no 1, no-yes 1, no-no 4
    let a = annotator(tmp.path(), "a", &[0, 1, 2, 3, 4]);
    let b = annotator(tmp.path(), "b", &[0, 1, 2, 3, 5]);
    let text = stdout(&run(&["gold", "--iaa", s(&a), s(&b)]));
    assert!(text.contains("documents: 10"), "{text}");
    assert!(text.contains("fine κ=0.6000"), "{text}");
    assert!(text.contains("coarse κ=0.6000"), "{text}");

    let json: Value = serde_json::from_str(&stdout(&run(&["gold", "--iaa", s(&a), s(&b), "--json"]))).unwrap();
    assert!((json["fine"]["headline"].as_f64().unwrap() - 0.6).abs() < 1e-12);
}

#[test]
fn gold_then_evaluate_against_itself() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = annotator(tmp.path(), "gold", &[1, 3, 7]);
    let gold = tmp.path().join("gold.jsonl");
    stdout(&run(&["gold", s(&dir), "-o", s(&gold)]));
    let lines: Vec<Value> = std::fs::read_to_string(&gold).unwrap().lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 10);
    assert_eq!(lines.iter().filter(|r| r["none"] == false).count(), 3);

    let report = tmp.path().join("out/report.json");
    let text = stdout(&run(&["evaluate", "--gold", s(&gold), "--pred", s(&gold), "--json", s(&report), "--min-f", "1.0"]));
    assert!(text.contains("macro"), "{text}");
    let json: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(json["documents"], 10);
    assert_eq!(json["coarse"]["macro"]["f"], 1.0);
}

#[test]
fn below_threshold_exits_three() {
    let tmp = tempfile::tempdir().unwrap();
    let gold = write(tmp.path(), "gold.jsonl", concat!(
        r#"{"note_id":"a","person_id":"p","fine":["loneliness"],"coarse":["SI"],"none":false}"#, "\n",
        r#"{"note_id":"b","person_id":"q","fine":[],"coarse":[],"none":true}"#, "\n",
    ));
    let pred = write(tmp.path(), "pred.jsonl", concat!(
        r#"{"note_id":"a","person_id":"p","fine":[],"coarse":[],"none":true}"#, "\n",
        r#"{"note_id":"b","person_id":"q","fine":["loneliness"],"coarse":["SI"],"none":false}"#, "\n",
    ));
    let out = run(&["evaluate", "--gold", s(&gold), "--pred", s(&pred), "--min-f", "0.5"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("loneliness"));
}

#[test]
fn icd_comparison_counts() {
    let tmp = tempfile::tempdir().unwrap();
    let gold = write(tmp.path(), "gold.jsonl", concat!(
        r#"{"note_id":"a","person_id":"p","fine":["loneliness"],"coarse":["SI"],"none":false}"#, "\n",
        r#"{"note_id":"b","person_id":"q","fine":[],"coarse":[],"none":true}"#, "\n",
    ));
    let visits = write(tmp.path(), "visits.csv", "note_id,code\na,I10\nb,z60.2\n");
    let text = stdout(&run(&["evaluate", "--gold", s(&gold), "--pred", s(&gold), "--icd", s(&visits)]));
    assert!(text.contains("icd: coded visits 1  gold SI notes 1  overlap 0"), "{text}");
}

#[test]
fn json_errors_and_exit_codes() {
    let out = run(&["--json-errors", "evaluate", "--gold", "/nonexistent/g.jsonl", "--pred", "/nonexistent/p.jsonl"]);
    assert_eq!(out.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "io");
    assert!(err["error"]["message"].as_str().unwrap().contains("g.jsonl"));

    assert_eq!(run(&["evaluate"]).status.code(), Some(2));
    assert_eq!(run(&[]).status.code(), Some(2));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn ingest_blanks_templates_and_extract_reads_the_store() {
    let tmp = tempfile::tempdir().unwrap();
    let notes = tmp.path().join("notes");
    std::fs::create_dir(&notes).unwrap();
    write(&notes, "1_p1_n1_2020-01-01.txt", "SCREEN: lonely? Y/N\nPt reports feeling lonely.");
    let templates = write(tmp.path(), "templates.txt", "SCREEN: lonely\\? Y/N\n");
    let store = tmp.path().join("notes.jsonl");
    stdout(&run(&["--templates", s(&templates), "ingest", s(&notes), "-o", s(&store)]));
    let note: Value = serde_json::from_str(std::fs::read_to_string(&store).unwrap().trim()).unwrap();
    let raw = note["raw_text"].as_str().unwrap();
    let clean = note["clean_text"].as_str().unwrap();
    assert_eq!(raw.chars().count(), clean.chars().count());
    assert!(clean.starts_with("                   \n"));

    let rec: Value = serde_json::from_str(stdout(&run(&["extract", s(&store)])).trim()).unwrap();
    assert_eq!(rec["fine"], serde_json::json!(["loneliness"]));
    assert_eq!(rec["mentions"].as_array().unwrap().len(), 1);
    assert_eq!(rec["mentions"][0]["start"], 39);
}

#[test]
fn extract_writes_audit_pairs() {
    let tmp = tempfile::tempdir().unwrap();
    let notes = tmp.path().join("notes");
    std::fs::create_dir(&notes).unwrap();
    write(&notes, "1_p1_n1_2020-01-01.txt", "He denies loneliness. Has a home health aide.");
    let audit = tmp.path().join("audit");
    let text = stdout(&run(&["extract", s(&notes), "--ann-dir", s(&audit)]));
    let rec: Value = serde_json::from_str(text.trim()).unwrap();
    assert_eq!(rec["fine"], serde_json::json!(["instrumental_support"]));
    let ann = std::fs::read_to_string(audit.join("n1.ann")).unwrap();
    assert!(ann.contains("\tloneliness 10 20\tloneliness\nA1\tNegation T1\n"), "{ann}");
    assert!(ann.contains("instrumental_support 28 44\thome health aide"), "{ann}");
    assert_eq!(std::fs::read_to_string(audit.join("n1.txt")).unwrap(), "He denies loneliness. Has a home health aide.");
    assert_eq!(run(&["extract", s(&notes), "--engine", "llm", "--ann-dir", s(&audit), "--endpoint", "http://x"]).status.code(), Some(2));
}

/// "He denies feeling lonely": the cue sits two tokens before the match.
fn window_fixture(tmp: &Path) -> (PathBuf, PathBuf) {
    let notes = tmp.join("notes");
    std::fs::create_dir(&notes).unwrap();
    write(&notes, "1_p1_n1_2020-01-01.txt", "He denies feeling lonely.");
    let config = write(tmp, "sociolex.toml", "negation_window = 1\nlexicon = \"lex.tsv\"\n");
    write(tmp, "lex.tsv", "loneliness\tlonely\n");
    (notes, config)
}

fn labelled(out: Output) -> bool {
    let rec: Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    rec["none"] == false
}

#[test]
fn flag_beats_env_beats_config() {
    let tmp = tempfile::tempdir().unwrap();
    let (notes, config) = window_fixture(tmp.path());
    let base = ["--config", s(&config), "extract", s(&notes)];
    // config: window 1, cue out of reach
    assert!(labelled(bin().args(base).output().unwrap()));
    // env: window 5 negates
    assert!(!labelled(bin().args(base).env("SDOH_NEGATION_WINDOW", "5").output().unwrap()));
    // flag wins over env
    assert!(labelled(bin().args(base).args(["--negation-window", "1"]).env("SDOH_NEGATION_WINDOW", "5").output().unwrap()));
    // config picked up from the environment too
    assert!(labelled(bin().args(["extract", s(&notes)]).env("SDOH_CONFIG", s(&config)).output().unwrap()));
}

#[test]
fn bad_config_is_reported() {
    let tmp = tempfile::tempdir().unwrap();
    let config = write(tmp.path(), "bad.toml", "negation_windw = 3\n");
    let out = run(&["--json-errors", "--config", s(&config), "--version"]);
    assert_eq!(out.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "config");
}

#[test]
fn sample_respects_quotas_and_reports_shortfall() {
    let tmp = tempfile::tempdir().unwrap();
    let mut csv = String::from("note_id,person_id,ss_hit,si_hit,has_template\n");
    for i in 0..40 {
        csv += &format!("n{i:02},p{},{},{},{}\n", i / 2, i % 3 == 0, i % 5 == 0, i % 7 == 0);
    }
    let index = write(tmp.path(), "index.csv", &csv);
    let report = tmp.path().join("report.json");
    let args = ["sample", "--index", s(&index), "--quota", "si=20", "--quota", "random=3", "--seed", "7", "--report", s(&report)];
    let first = stdout(&run(&args));
    assert_eq!(first, stdout(&run(&args)));
    let ids: Vec<&str> = first.lines().collect();
    // eight SI notes over eight people
    let json: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(json["shortfalls"]["si"]["selected"], 8);
    assert_eq!(json["shortfalls"]["si"]["missing"], 12);
    assert_eq!(ids.len(), 11);
    let persons: std::collections::HashSet<&str> = json["selected"].as_array().unwrap().iter().map(|s| s["person_id"].as_str().unwrap()).collect();
    assert_eq!(persons.len(), 11);
    let other = stdout(&run(&["sample", "--index", s(&index), "--quota", "si=20", "--quota", "random=3", "--seed", "8"]));
    assert_eq!(other.lines().count(), 11);
}

#[test]
fn emit_finetune_dataset() {
    let tmp = tempfile::tempdir().unwrap();
    let examples = write(tmp.path(), "examples.jsonl", concat!(
        r#"{"category":"loneliness","context":"Pt feels lonely.","answer":"yes"}"#, "\n",
        r#"{"category":"loneliness","context":"Denies loneliness.","answer":"no"}"#, "\n",
    ));
    let text = stdout(&run(&["emit-finetune", "--examples", s(&examples)]));
    let rows: Vec<Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0]["target"], "yes");
    assert_eq!(rows[1]["target"], "no.");
    assert!(rows[0]["input"].as_str().unwrap().contains("Context: The Clinician wrote: \"Pt feels lonely.\""));
}

#[test]
fn expand_then_merge_lexicon() {
    let tmp = tempfile::tempdir().unwrap();
    let vectors = write(tmp.path(), "vec.txt", "4 2\nlonely 1 0\nisolated 0.9 0.1\nalone 0.8 0.3\ntable 0 1\n");
    let lex = write(tmp.path(), "lex.tsv", "loneliness\tlonely\n");
    let review = tmp.path().join("review.tsv");
    stdout(&run(&["--lexicon", s(&lex), "expand-lexicon", "--embeddings", s(&vectors), "--top-k", "2", "-o", s(&review)]));
    let text = std::fs::read_to_string(&review).unwrap();
    let isolated = text.find("isolated").expect(&text);
    let alone = text.find("alone").expect(&text);
    assert!(isolated < alone && !text.contains("table"), "{text}");
    let cos: f64 = text.lines().nth(1).unwrap().split('\t').nth(2).unwrap().parse().unwrap();
    assert!((cos - 0.9 / 0.82f64.sqrt()).abs() < 1e-6);

    let decided = text.replace("isolated\t0.993884\t", "isolated\t0.993884\taccept").replace("alone\t0.936329\t", "alone\t0.936329\treject");
    let review = write(tmp.path(), "review.tsv", &decided);
    let merged = stdout(&run(&["--lexicon", s(&lex), "merge-lexicon", "--review", s(&review)]));
    assert!(merged.contains("loneliness\tisolated\n") && merged.contains("loneliness\tlonely\n"), "{merged}");
    assert!(!merged.contains("alone"), "{merged}");
}
