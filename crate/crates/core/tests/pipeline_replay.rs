use std::path::{Path, PathBuf};

use mtcforge_core::code_model::Corpus;
use mtcforge_core::minilang::{parse_test_class, Limits};
use mtcforge_core::pipeline::{run_pipeline, to_json, AttemptRecord, PipelineConfig, PipelineError, RunReport, Targets};
use mtcforge_core::skeleton::{AssertionKind, Role};
use mtcforge_core::validation::{pass_rate, Decision};

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn config(out: &Path) -> PipelineConfig {
    let mut c = PipelineConfig::load(root().join("fixtures/aes.toml")).unwrap();
    c.out = out.to_path_buf();
    c
}

fn attempts<'a>(r: &'a RunReport, candidate: &str) -> &'a [AttemptRecord] {
    let pair = r.tasks[0].pairs.iter().find(|p| p.candidate.starts_with(candidate)).unwrap();
    &pair.attempts
}

#[test]
fn replay_run_is_deterministic_and_retains_the_round_trip() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let first = run_pipeline(&config(a.path())).unwrap();
    let second = run_pipeline(&config(b.path())).unwrap();
    assert_eq!(std::fs::read(&first.report_path).unwrap(), std::fs::read(&second.report_path).unwrap());
    assert_eq!(first.exit_code(), 0);

    let rt = &attempts(&first.report, "AESCodec.decryptText")[0];
    assert_eq!(rt.decision, Some(Decision::Retained));
    assert_eq!(rt.p, Some(0.8));
    assert!(rt.reason.as_deref().unwrap().starts_with("p > p′"));
    let sk = rt.skeleton.as_ref().unwrap();
    let names: Vec<&str> = sk.method_pair.iter().map(|m| m.name.as_str()).collect();
    assert_eq!(names, ["decryptText", "encryptText"]);
    assert!(sk.input_relation.is_empty());
    assert_eq!(sk.assertion_kind, AssertionKind::Eq);
    assert_eq!(sk.assertion_elements, [Role::SourceInput, Role::FollowupOutput]);

    let m = &first.report.tasks[0].metrics;
    assert_eq!((m.num_generated, m.num_executable, m.num_valid), (7, 6, 5));
    assert!(m.task_successful);
    assert!((m.pct_false_alarm - 1.0 / 6.0).abs() < 1e-12);
    let sim = &first.report.similarity[0];
    assert!(sim.l1 && sim.l2);
}

#[test]
fn refinement_paths() {
    let dir = tempfile::tempdir().unwrap();
    let r = run_pipeline(&config(dir.path())).unwrap().report;
    let a = attempts(&r, "AESCodec.decryptText");
    let stages = |i: usize| a[i].refinement.iter().map(|e| format!("{:?}", e.stage)).collect::<Vec<_>>();
    // case slip: the revision repeats it, static repair fixes it
    assert_eq!(stages(1), ["Initial", "LlmRevision", "StaticRepair"]);
    assert!(a[1].refinement[0].diagnostics[0].contains("UNRESOLVED_SYMBOL"));
    assert!(a[1].valid);
    // missing declaration fixed by the revision
    assert_eq!(stages(2), ["Initial", "LlmRevision"]);
    assert!(a[2].valid);
    assert_eq!(a[2].amplified.as_ref().unwrap().m, 9);
    assert_eq!(a[2].amplified.as_ref().unwrap().notes.dropped, ["testExtra"]);
    // executable but failing on the corpus: a false alarm
    assert!(a[3].executable && !a[3].valid);
    // prose twice
    assert!(a[4].received && !a[4].compiles);
    assert!(a[4].refinement[0].diagnostics[0].contains("NO_CODE_BLOCK"));
    // degraded amplification after a provider miss
    assert!(a[1].amplified.as_ref().unwrap().degraded);
}

#[test]
fn invalid_equivalence_is_filtered() {
    let dir = tempfile::tempdir().unwrap();
    let r = run_pipeline(&config(dir.path())).unwrap().report;
    let a = attempts(&r, "AESCodec.encryptTextWithAbecedarium");
    assert_eq!(a[0].decision, Some(Decision::Filtered));
    assert_eq!(a[0].reason.as_deref(), Some("p < p′ on mutant m004 (SDL): p=0.2, p′=1.0"));
    assert_eq!(a[1].decision, Some(Decision::Retained));
    assert!(a[2..].iter().all(|x| !x.received && x.error.as_deref().unwrap().starts_with("FIXTURE_MISS")));
}

#[test]
fn retained_round_trip_reveals_the_wrong_key() {
    let dir = tempfile::tempdir().unwrap();
    run_pipeline(&config(dir.path())).unwrap();
    let path = dir.path().join("AESCodec.encryptText/encryptText_2__decryptText_2/attempt1/amplified.mini");
    let src = std::fs::read_to_string(&path).unwrap();
    assert!(!dir.path().join("AESCodec.encryptText/encryptText_2__encryptTextWithAbecedarium_3/attempt1/amplified.mini").exists());

    let buggy = Corpus::load(root().join("corpus/aes_wrong_key")).unwrap();
    let t = parse_test_class(&buggy.program, "amplified.mini", &src).unwrap();
    assert_eq!(pass_rate(&buggy.program, &t, &Limits::default()).rate, 0.2);

    let fixed = Corpus::load(root().join("corpus/aes")).unwrap();
    let mut t = parse_test_class(&fixed.program, "amplified.mini", &src).unwrap();
    t.decl.methods.retain(|m| !mtcforge_core::minilang::print_method(m).contains("null"));
    assert_eq!(t.test_methods().count(), 4);
    assert_eq!(pass_rate(&fixed.program, &t, &Limits::default()).rate, 1.0);
}

#[test]
fn report_json_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_pipeline(&config(dir.path())).unwrap();
    let text = std::fs::read_to_string(&o.report_path).unwrap();
    let back: RunReport = serde_json::from_str(&text).unwrap();
    assert_eq!(to_json(&back), text);
    assert!(text.contains("\"schemaVersion\": 1"));
}

#[test]
fn isolated_class_has_no_pairs() {
    let dir = tempfile::tempdir().unwrap();
    let mut c = config(dir.path());
    c.corpus = root().join("corpus/isolated");
    c.targets = Targets::default();
    c.references.clear();
    c.exclude_examples.clear();
    let r = run_pipeline(&c).unwrap();
    assert!(r.report.tasks.iter().all(|t| t.pairs.is_empty() && !t.metrics.task_successful));
    assert_eq!(r.exit_code(), 0);
}

#[test]
fn missing_corpus_is_fatal() {
    let dir = tempfile::tempdir().unwrap();
    let mut c = config(dir.path());
    c.corpus = dir.path().join("nope");
    let e = run_pipeline(&c).err().unwrap();
    assert!(matches!(e, PipelineError::Corpus(_)));
    assert_eq!(e.exit_code(), 1);
}
