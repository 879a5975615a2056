use std::path::PathBuf;

use mtcforge_core::code_model::Corpus;
use mtcforge_core::minilang::{parse_program, print_program, run_test_class, Limits, OutcomeKind};

fn corpus_dir(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core").join("corpus").join(name)
}

fn load(name: &str) -> Corpus {
    let c = Corpus::load(corpus_dir(name)).unwrap_or_else(|e| panic!("{name}: {e}"));
    assert!(c.skipped_tests.is_empty(), "{name}: {:?}", c.skipped_tests);
    c
}

pub fn every_corpus_parses_and_round_trips() {
    for name in ["aes", "aes_wrong_key", "abecedarium_bug", "box", "codec", "isolated"] {
        let c = load(name);
        let printed = print_program(&c.program);
        let again = parse_program(&[("printed.mini", printed.as_str())]).unwrap();
        assert_eq!(again, c.program, "{name}");
        assert_eq!(print_program(&again), printed, "{name}: printing is not a fixed point");
    }
}

pub fn aes_shape() {
    let c = load("aes");
    let codec = c.program.class("AESCodec").unwrap();
    let names: Vec<&str> = codec.methods.iter().map(|m| m.name.as_str()).collect();
    assert_eq!(names, ["getSecretEncryptionKey", "encryptText", "decryptText", "encryptTextWithAbecedarium"]);
    assert!(codec.field("defaultKey").is_some_and(|f| f.is_static));
    assert_eq!(c.tests.len(), 2);
}

pub fn hand_computed_outputs() {
    // key "k3y-s3cr3t": shift(0) = 'k' (107) + 26, shift(1) = '3' (51) + 26.
    // "AB" -> [65 + 133, 66 + 77] = [198, 143]; with abecedarium "XYZ", 'A' -> 65 + 107 + 3 = 175.
    let c = load("aes");
    let usage = c.test("test/AESCodecUsageTest.mini").unwrap();
    let run = run_test_class(&c.program, &usage.class, &Limits::default());
    assert!(run.all_pass(), "{run:?}");
    let reference = c.test("test/AESCodecTest.mini").unwrap();
    assert!(run_test_class(&c.program, &reference.class, &Limits::default()).all_pass());
}

pub fn seeded_faults_are_observable() {
    let wrong_key = load("aes_wrong_key");
    let reference = wrong_key.test("test/AESCodecTest.mini").unwrap();
    let run = run_test_class(&wrong_key.program, &reference.class, &Limits::default());
    assert_eq!(run.outcomes["testEncryptDecrypt"].kind, OutcomeKind::AssertFail);

    let abc = load("abecedarium_bug");
    let usage = abc.test("test/AESCodecUsageTest.mini").unwrap();
    let run = run_test_class(&abc.program, &usage.class, &Limits::default());
    assert_eq!(run.outcomes["customAbecedariumChangesShift"].kind, OutcomeKind::AssertFail);
    assert_eq!(run.outcomes["encryptKnownText"].kind, OutcomeKind::Pass);
}

pub fn missing_corpus_is_an_error() {
    assert!(Corpus::load(corpus_dir("does_not_exist")).is_err());
}
