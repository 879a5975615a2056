//! `UPDATE_GOLDEN=1 cargo test --test analyze_golden` rewrites the file.

use std::path::PathBuf;

use mtcforge_core::code_model::{resolve_method_spec, Corpus};
use mtcforge_core::coupling::{analyze_coupling, Category, CouplingConfig, Label};

#[test]
fn aes_encrypt_text_pairs_match_golden() {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let corpus = Corpus::load(root.join("corpus/aes")).unwrap();
    let target = resolve_method_spec(&corpus.program, "AESCodec.encryptText").unwrap().remove(0);
    let pairs = analyze_coupling(&corpus.program, &target, &CouplingConfig::default()).unwrap();

    let dec = pairs.iter().find(|p| p.candidate.name == "decryptText").unwrap();
    let intention = dec.features.iter().find(|f| f.category == Category::Intention).unwrap();
    assert!(intention.evidence.tokens.contains(&"text".to_string()));
    assert!(dec.feature(Label::SharedCalls).is_some());

    let json = serde_json::to_string_pretty(&pairs).unwrap() + "\n";
    let golden = root.join("tests/golden/aes_encryptText.analyze.json");
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&golden, &json).unwrap();
    }
    assert_eq!(json, std::fs::read_to_string(&golden).unwrap());
}
