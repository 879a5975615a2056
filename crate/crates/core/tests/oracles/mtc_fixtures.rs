//! Committed MTC / non-MTC fixtures. The first line of each file names the
//! pair as `// pair: <target> <candidate>`.

use std::path::{Path, PathBuf};

use mtcforge_core::code_model::{resolve_method_spec, Corpus};
use mtcforge_core::coupling::CoupledPair;
use mtcforge_core::minilang::parse_test_class_syntax;
use mtcforge_core::validation::check_mtc_properties;

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core")
}

fn check_dir(dir: &Path, corpus: &Corpus) -> Vec<(String, bool)> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir).unwrap().map(|e| e.unwrap().path()).collect();
    files.sort();
    files
        .into_iter()
        .map(|path| {
            let src = std::fs::read_to_string(&path).unwrap();
            let names: Vec<&str> = src.lines().next().unwrap().trim_start_matches("// pair:").split_whitespace().collect();
            let method = |n: &str| resolve_method_spec(&corpus.program, &format!("AESCodec.{n}")).unwrap().remove(0);
            let pair = CoupledPair { target: method(names[0]), candidate: method(names[1]), features: vec![] };
            let test = parse_test_class_syntax(&path.display().to_string(), &src).unwrap();
            let name = path.file_name().unwrap().to_string_lossy().into_owned();
            (name, check_mtc_properties(&corpus.program, &test, &pair).is_mtc)
        })
        .collect()
}

pub fn positive_and_negative_fixtures() {
    let corpus = Corpus::load(root().join("corpus/aes")).unwrap();
    let base = root().join("tests/fixtures/mtc");
    let positive = check_dir(&base.join("positive"), &corpus);
    let negative = check_dir(&base.join("negative"), &corpus);
    assert_eq!(positive.len(), 4);
    assert_eq!(negative.len(), 4);
    for (name, is_mtc) in positive {
        assert!(is_mtc, "{name} should be an MTC");
    }
    for (name, is_mtc) in negative {
        assert!(!is_mtc, "{name} should not be an MTC");
    }
}
