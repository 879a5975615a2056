//! Re-records `fixtures/aes_replay.jsonl` from a scripted stand-in model.
//!
//! The script answers by pair and request kind (first prompt, revision,
//! amplification) in order; an exhausted queue is a provider miss, which is
//! not recorded and so replays as FIXTURE_MISS.
//!
//!     cargo run -p mtcforge-core --example author_fixtures

use std::collections::{HashMap, VecDeque};
use std::path::PathBuf;
use std::sync::Mutex;

use mtcforge_core::code_model::Corpus;
use mtcforge_core::llm::{ChatProvider, ChatRequest, LlmError, RecordProvider, Role};
use mtcforge_core::pipeline::{render_metrics, run_pipeline_with, PipelineConfig};

type Queues = HashMap<(&'static str, &'static str), VecDeque<Option<String>>>;

struct Scripted {
    queues: Mutex<Queues>,
}

fn kind_of(last: &str) -> &'static str {
    if last.starts_with("The test class does not run") {
        "revision"
    } else if last.starts_with("Review the conversation") {
        "amplify"
    } else {
        "initial"
    }
}

impl ChatProvider for Scripted {
    fn complete(&self, req: &ChatRequest<'_>) -> Result<String, LlmError> {
        let users: Vec<&str> = req.messages.iter().filter(|m| m.role == Role::User).map(|m| m.content.as_str()).collect();
        let pair = if users[0].contains("AESCodec_encryptText_decryptText_MTC") {
            "decrypt"
        } else if users[0].contains("AESCodec_encryptText_encryptTextWithAbecedarium_MTC") {
            "abecedarium"
        } else {
            "other"
        };
        let kind = kind_of(users.last().unwrap());
        let next = self.queues.lock().unwrap().get_mut(&(pair, kind)).and_then(|q| q.pop_front()).flatten();
        next.ok_or_else(|| LlmError::FixtureMiss(format!("{pair}/{kind}")))
    }
}

fn block(code: &str) -> String {
    format!("```java\n{}\n```", code.trim())
}

fn round_trip_method(name: &str, text: &str, key: &str) -> String {
    format!(
        "    @Test
    void {name}() {{
        string text = {text};
        SecretKey key = {key};
        list<int> encryptedText = AESCodec.encryptText(text, key);
        string decryptedText = AESCodec.decryptText(encryptedText, key);
        assertEquals(text, decryptedText);
    }}
"
    )
}

fn equivalence_method(name: &str, text: &str, abc: &str) -> String {
    format!(
        "    @Test
    void {name}() {{
        string text = {text};
        SecretKey key = AESCodec.getSecretEncryptionKey();
        list<int> plain = AESCodec.encryptText(text, key);
        list<int> custom = AESCodec.encryptTextWithAbecedarium(text, key, {abc});
        assertEquals(plain, custom);
    }}
"
    )
}

fn class(name: &str, methods: &[String]) -> String {
    format!("class {name} {{\n{}}}\n", methods.join("\n"))
}

fn script() -> Queues {
    const DEC: &str = "AESCodec_encryptText_decryptText_MTC";
    const ABC: &str = "AESCodec_encryptText_encryptTextWithAbecedarium_MTC";
    let secret = "AESCodec.getSecretEncryptionKey()";
    let mut q: Queues = HashMap::new();
    let mut push = |pair, kind, reply: Option<String>| q.entry((pair, kind)).or_default().push_back(reply);

    // Pair (encryptText, decryptText).
    let listing1 = "    @Test
    void testEncryptDecrypt() {
        string plainText = \"Hello AES!\";
        SecretKey secKey = AESCodec.getSecretEncryptionKey();
        list<int> cipherText = AESCodec.encryptText(plainText, secKey);
        string decryptedText = AESCodec.decryptText(cipherText, secKey);
        assertEquals(plainText, decryptedText);
    }
";
    push(
        "decrypt",
        "initial",
        Some(format!("The round trip decrypt(encrypt(x)) = x is a natural relation here.\n\n{}", block(&class(DEC, &[listing1.into()])))),
    );
    let slip = class(DEC, &[round_trip_method("testRoundTrip", "\"coupled methods\"", "aescodec.getSecretEncryptionKey()")]);
    push("decrypt", "initial", Some(block(&slip)));
    let undeclared = "    @Test
    void testRoundTripNumbers() {
        SecretKey key = AESCodec.getSecretEncryptionKey();
        list<int> data = AESCodec.encryptText(message, key);
        string back = AESCodec.decryptText(data, key);
        assertEquals(message, back);
    }
";
    push("decrypt", "initial", Some(block(&class(DEC, &[undeclared.into()]))));
    let false_alarm = "    @Test
    void testEncryptionHidesText() {
        string text = \"secret\";
        SecretKey key = AESCodec.getSecretEncryptionKey();
        list<int> data = AESCodec.encryptText(text, key);
        string back = AESCodec.decryptText(data, key);
        assertNotEquals(text, back);
    }
";
    push("decrypt", "initial", Some(block(&class(DEC, &[false_alarm.into()]))));
    push("decrypt", "initial", Some("I would need more information about the cipher before writing a test.".into()));

    // Revisions, in attempt order: the case slip survives the revision, the
    // missing declaration is fixed, the prose stays prose.
    push("decrypt", "revision", Some(format!("Fixed.\n{}", block(&slip))));
    let declared = "    @Test
    void testRoundTripNumbers() {
        string message = \"0123456789\";
        SecretKey key = AESCodec.getSecretEncryptionKey();
        list<int> data = AESCodec.encryptText(message, key);
        string back = AESCodec.decryptText(data, key);
        assertEquals(message, back);
    }
";
    push("decrypt", "revision", Some(block(&class(DEC, &[declared.into()]))));
    push("decrypt", "revision", Some("Sorry, I cannot produce a test class for this.".into()));

    // Amplification of the three valid candidates: the Listing-5 inputs, a
    // miss (degraded), and nine inputs plus a misnamed method.
    let listing5 = [
        round_trip_method("MTC_input1", "\"Hello!\"", secret),
        round_trip_method("MTC_input2", "null", "null"),
        round_trip_method("MTC_input3", "\"~!@\"", secret),
        round_trip_method("MTC_input4", "\"_1234\"", secret),
        round_trip_method("MTC_input5", "\"\"", "AESCodec.defaultKey"),
    ];
    push("decrypt", "amplify", Some(block(&class(DEC, &listing5))));
    push("decrypt", "amplify", None);
    let texts = ["\"a\"", "\"Z\"", "\" \"", "\"0\"", "\"aaaaaaaaaaaaaaaaaaaa\"", "\"\\\"quoted\\\"\"", "\"tab\\there\"", "\"x-y_z\"", "\"end.\""];
    let mut nine: Vec<String> = texts.iter().enumerate().map(|(i, t)| round_trip_method(&format!("MTC_input{}", i + 1), t, secret)).collect();
    nine.push(round_trip_method("testExtra", "\"extra\"", secret));
    push("decrypt", "amplify", Some(block(&class(DEC, &nine))));

    // Pair (encryptText, encryptTextWithAbecedarium): an equivalence that only
    // holds for the default abecedarium, and its valid restriction.
    push("abecedarium", "initial", Some(block(&class(ABC, &[equivalence_method("testSameCipherText", "\"Hello AES!\"", "AESCodec.abecedarium")]))));
    push(
        "abecedarium",
        "initial",
        Some(block(&class(ABC, &[equivalence_method("testDefaultAbecedarium", "\"Coupling\"", "Cipher.STANDARD_ABECEDARIUM")]))),
    );
    let invalid = [
        equivalence_method("MTC_input1", "\"Hello!\"", "\"XYZ\""),
        equivalence_method("MTC_input2", "\"~!@\"", "\"0123456789\""),
        equivalence_method("MTC_input3", "\"_1234\"", "\"abc\""),
        equivalence_method("MTC_input4", "\"long input text\"", "\"!@#$%^&*\""),
        equivalence_method("MTC_input5", "\"Hello AES!\"", "AESCodec.abecedarium"),
    ];
    push("abecedarium", "amplify", Some(block(&class(ABC, &invalid))));
    let valid = [
        equivalence_method("MTC_input1", "\"Hello!\"", "Cipher.STANDARD_ABECEDARIUM"),
        equivalence_method("MTC_input2", "\"~!@\"", "Cipher.STANDARD_ABECEDARIUM"),
        equivalence_method("MTC_input3", "\"_1234\"", "Cipher.STANDARD_ABECEDARIUM"),
        equivalence_method("MTC_input4", "\"\"", "Cipher.STANDARD_ABECEDARIUM"),
        equivalence_method("MTC_input5", "\"zzz\"", "Cipher.STANDARD_ABECEDARIUM"),
    ];
    push("abecedarium", "amplify", Some(block(&class(ABC, &valid))));
    q
}

fn main() {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let mut config = PipelineConfig::load(root.join("fixtures/aes.toml")).expect("config");
    let fixtures = root.join("fixtures/aes_replay.jsonl");
    let _ = std::fs::remove_file(&fixtures);
    let out = tempfile_dir();
    config.out = out.clone();
    config.workers = 1;
    let corpus = Corpus::load(&config.corpus).expect("corpus");
    let provider = RecordProvider::new(Scripted { queues: Mutex::new(script()) }, &fixtures).expect("fixture file");
    let outcome = run_pipeline_with(&config, &corpus, &provider).expect("run");
    print!("{}", render_metrics(&outcome.report));
    println!("recorded {}", fixtures.display());
    let _ = std::fs::remove_dir_all(out);
}

fn tempfile_dir() -> PathBuf {
    let d = std::env::temp_dir().join(format!("mtcforge-author-{}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d
}
