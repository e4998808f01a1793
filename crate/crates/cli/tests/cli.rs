use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use monoqd_cli::{AnalysisReport, CompareReport};
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_monoqd"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

struct Specs {
    dir: TempDir,
}

impl Specs {
    fn new() -> Self {
        Specs {
            dir: tempfile::tempdir().unwrap(),
        }
    }

    fn write(&self, name: &str, json: &str) -> PathBuf {
        let p = self.dir.path().join(name);
        std::fs::write(&p, json).unwrap();
        p
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn analyze(spec: &Path, extra: &[&str]) -> AnalysisReport {
    let mut args = vec!["analyze", s(spec)];
    args.extend_from_slice(extra);
    let o = run(&args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&stdout(&o)).unwrap()
}

fn compare(a: &Path, b: &Path) -> CompareReport {
    let o = run(&["compare", s(a), s(b)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&stdout(&o)).unwrap()
}

const FOUR_I: &str =
    r#"{"d":4,"generators":["11","12","13","21","22","24","31","32","33","41","42","44"]}"#;
const FOUR_J: &str =
    r#"{"d":4,"generators":["11","12","13","14","21","22","31","32","33","41","42","44"]}"#;

type Edge = (String, String, String);

/// Minimal structural check of the DOT subset the exporter emits.
fn validate_dot(text: &str) -> Result<(usize, Vec<Edge>), String> {
    let lines: Vec<&str> = text.lines().collect();
    let head = lines.first().ok_or("empty")?;
    if !(head.starts_with("digraph ") && head.ends_with(" {")) {
        return Err(format!("bad header {head}"));
    }
    if lines.last() != Some(&"}") {
        return Err("missing closing brace".into());
    }
    let mut nodes = BTreeSet::new();
    let mut edges = Vec::new();
    for line in &lines[1..lines.len() - 1] {
        let line = line.trim();
        let body = line
            .strip_suffix(';')
            .ok_or_else(|| format!("no semicolon: {line}"))?;
        if body.matches('"').count() % 2 != 0 {
            return Err(format!("unbalanced quotes: {line}"));
        }
        let (stmt, attrs) = match body.find('[') {
            Some(i) if body.ends_with(']') => (body[..i].trim(), &body[i + 1..body.len() - 1]),
            _ => return Err(format!("no attribute list: {line}")),
        };
        let label = attrs
            .strip_prefix("label=\"")
            .and_then(|r| r.strip_suffix('"'))
            .map(str::to_string);
        if stmt == "node" {
            continue;
        }
        if let Some((a, b)) = stmt.split_once(" -> ") {
            if !nodes.contains(a) || !nodes.contains(b) {
                return Err(format!("edge to undeclared node: {line}"));
            }
            edges.push((
                a.to_string(),
                b.to_string(),
                label.ok_or("edge without label")?,
            ));
        } else {
            if stmt.is_empty() || !stmt.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return Err(format!("bad node id: {line}"));
            }
            label.ok_or("node without label")?;
            nodes.insert(stmt.to_string());
        }
    }
    Ok((nodes.len(), edges))
}

#[test]
fn analyze_two_letter_example() {
    let sp = Specs::new();
    let r = analyze(
        &sp.write("j.json", r#"{"d":2,"generators":["11","22"]}"#),
        &[],
    );
    assert_eq!(r.quantised.size, 3);
    assert_eq!(r.subshift_class, "TwoSided");
    let c = r.correspondence.unwrap();
    assert_eq!(c.dichotomy, "OE_equals_Toeplitz_CstarT");
    assert_eq!(c.kernel, "SpanOfVacuum");
    assert!(r.fock.unwrap().covariance_relations.is_some());
}

#[test]
fn analyze_zero_ideal() {
    let sp = Specs::new();
    let r = analyze(&sp.write("z.json", r#"{"d":2,"generators":[]}"#), &[]);
    assert_eq!(r.quantised.size, 1);
    assert_eq!(r.ideal.type_k, "0");
    let c = r.correspondence.unwrap();
    assert_eq!(c.dichotomy, "OE_equals_Cuntz_quotient");
    assert_eq!(c.katsura, "FullAlgebra");
}

#[test]
fn analyze_pattern_is_bounded() {
    let sp = Specs::new();
    let r = analyze(
        &sp.write(
            "p.json",
            r#"{"d":2,"patterns":[{"u":"1","v":"2","w":"1"}]}"#,
        ),
        &["--bound", "8"],
    );
    assert_eq!(r.quantised.size, 3);
    assert_eq!(r.quantised.bound, Some(8));
    assert_eq!(r.quantised.level, 2);
    let reps: Vec<&str> = r
        .quantised
        .classes
        .iter()
        .map(|c| c.representative.as_str())
        .collect();
    assert_eq!(reps, ["∅", "1", "21"]);
    assert!(r.caveat.is_some());
    assert!(!r.sofic.exact);
    assert!(r.correspondence.is_none() && r.fock.is_none());
}

#[test]
fn compare_examples() {
    let sp = Specs::new();
    let a = sp.write("a.json", FOUR_I);
    let b = sp.write("b.json", FOUR_J);
    let r = compare(&a, &b);
    assert!(!r.permutation_equal && !r.conjugate);
    assert!(r.locally_conjugate && r.unitarily_equivalent);
    assert!(r.witnesses.local_conjugacy.is_some() && r.witnesses.unitary.is_some());

    let i = sp.write("i.json", r#"{"d":2,"generators":["12","21"]}"#);
    let j = sp.write("j.json", r#"{"d":2,"generators":["11","22"]}"#);
    let r = compare(&i, &j);
    assert!(
        !r.permutation_equal && !r.conjugate && !r.locally_conjugate && !r.unitarily_equivalent
    );

    let r = compare(&a, &a);
    assert!(r.permutation_equal && r.conjugate && r.locally_conjugate && r.unitarily_equivalent);
    assert_eq!(r.witnesses.permutation, Some(vec![1, 2, 3, 4]));
}

#[test]
fn compare_across_alphabets() {
    let sp = Specs::new();
    let j = sp.write("j.json", r#"{"d":2,"generators":["11","22"]}"#);
    let k = sp.write(
        "k.json",
        r#"{"d":4,"generators":["11","13","22","24","31","33","42","44"]}"#,
    );
    let r = compare(&j, &k);
    assert!(!r.conjugate && !r.permutation_equal);
}

#[test]
fn dot_exports_match_the_figures() {
    let sp = Specs::new();
    let cases = [
        (r#"{"d":2,"generators":["11","22"]}"#, 3, 4, 0),
        (r#"{"d":2,"generators":["12","21"]}"#, 3, 4, 2),
        (r#"{"d":1}"#, 1, 1, 1),
    ];
    for (n, (json, nodes, edges, loops)) in cases.into_iter().enumerate() {
        let spec = sp.write(&format!("s{n}.json"), json);
        let out = sp.path(&format!("s{n}.dot"));
        let o = run(&["export-dot", s(&spec), "--out", s(&out)]);
        assert!(o.status.success());
        let text = std::fs::read_to_string(&out).unwrap();
        let (nn, es) = validate_dot(&text).unwrap();
        assert_eq!(nn, nodes, "{json}");
        assert_eq!(es.len(), edges, "{json}");
        assert_eq!(
            es.iter().filter(|(a, b, _)| a == b).count(),
            loops,
            "{json}"
        );
    }
}

#[test]
fn dot_graph_for_j_has_the_two_cycle() {
    let sp = Specs::new();
    let spec = sp.write("j.json", r#"{"d":2,"generators":["11","22"]}"#);
    let o = run(&["export-dot", s(&spec)]);
    let (_, es) = validate_dot(&stdout(&o)).unwrap();
    let set: BTreeSet<Edge> = es.into_iter().collect();
    let e = |a: &str, b: &str, l: &str| (a.to_string(), b.to_string(), l.to_string());
    let expect: BTreeSet<_> = [
        e("c0", "c1", "1"),
        e("c0", "c2", "2"),
        e("c2", "c1", "1"),
        e("c1", "c2", "2"),
    ]
    .into_iter()
    .collect();
    assert_eq!(set, expect);
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let sp = Specs::new();
    let a = sp.write("a.json", FOUR_I);
    let b = sp.write("b.json", FOUR_J);
    for args in [
        vec!["analyze", s(&a)],
        vec!["analyze", s(&a), "--format", "text"],
        vec!["compare", s(&a), s(&b)],
        vec!["export-dot", s(&b)],
    ] {
        let x = run(&args);
        let y = run(&args);
        assert!(x.status.success());
        assert_eq!(x.stdout, y.stdout, "{args:?}");
    }
}

#[test]
fn report_json_round_trips() {
    let sp = Specs::new();
    let spec = sp.write("i.json", r#"{"d":3,"generators":["12","231","33"]}"#);
    let o = run(&["analyze", s(&spec)]);
    let text = stdout(&o);
    let r: AnalysisReport = serde_json::from_str(&text).unwrap();
    let again = serde_json::to_string_pretty(&r).unwrap() + "\n";
    assert_eq!(again, text);
}

#[test]
fn exit_codes() {
    let sp = Specs::new();
    let bad_json = sp.write("bad.json", "{ not json");
    let single = sp.write("single.json", r#"{"d":2,"generators":["1"]}"#);
    let letter = sp.write("letter.json", r#"{"d":2,"generators":["13"]}"#);
    let unknown = sp.write("unknown.json", r#"{"d":2,"gens":["11"]}"#);
    let pattern = sp.write(
        "p.json",
        r#"{"d":2,"patterns":[{"u":"1","v":"2","w":"1"}]}"#,
    );
    let ok = sp.write("ok.json", r#"{"d":2,"generators":["11"]}"#);
    let missing = sp.path("missing.json");
    for p in [&bad_json, &single, &letter, &unknown, &missing] {
        assert_eq!(
            run(&["analyze", s(p)]).status.code(),
            Some(2),
            "{}",
            p.display()
        );
    }
    assert_eq!(
        run(&["analyze", s(&pattern), "--bound", "0"]).status.code(),
        Some(3)
    );
    assert_eq!(
        run(&["dump-operator", s(&pattern), "1"]).status.code(),
        Some(3)
    );
    assert_eq!(
        run(&["analyze", s(&ok), "--fock-depth", "1"]).status.code(),
        Some(3)
    );
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(run(&["analyze", s(&ok)]).status.code(), Some(0));
}

#[test]
fn text_format_lists_verdicts() {
    let sp = Specs::new();
    let i = sp.write("i.json", r#"{"d":2,"generators":["12","21"]}"#);
    let o = run(&["analyze", s(&i), "--format", "text"]);
    let t = stdout(&o);
    assert!(t.contains("classes: 3"));
    assert!(t.contains("envelope: ToeplitzEnvelope"));
    assert!(t.contains("norm gap: full=2 essential=1"));
}

#[test]
fn dump_operator_is_coordinate_text() {
    let sp = Specs::new();
    let i = sp.write("i.json", r#"{"d":2,"generators":["11","12"]}"#);
    let o = run(&["dump-operator", s(&i), "1", "--fock-depth", "3"]);
    assert!(o.status.success());
    let entries: Vec<Vec<i64>> = stdout(&o)
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split_whitespace().map(|x| x.parse().unwrap()).collect())
        .collect();
    // T_1 only maps e_∅ to e_1.
    assert_eq!(entries, vec![vec![1, 0, 1]]);
}

#[test]
fn corpus_runs_clean() {
    let o = run(&["corpus", "--d3-samples", "10"]);
    assert!(o.status.success(), "{}", stdout(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["violations"].as_array().unwrap().len(), 0);
    assert_eq!(v["ideals"], 3 + 383 + 10);
}
