use std::path::{Path, PathBuf};
use std::sync::Arc;

use crate::minilang::{diag, parse_program, parse_test_class_syntax, typeck, Diagnostic, Program, TestClass, TypeInfo};

/// A test file from the corpus's `test/` directory, checked against the program.
#[derive(Debug, Clone)]
pub struct CorpusTest {
    /// Path relative to the corpus root, e.g. `test/AESCodecTest.mini`.
    pub path: String,
    pub source: String,
    pub class: TestClass,
    pub info: Arc<TypeInfo>,
}

#[derive(Debug, Clone)]
pub struct Corpus {
    pub root: PathBuf,
    pub program: Program,
    pub tests: Vec<CorpusTest>,
    /// Test files that did not parse or type-check; they are skipped.
    pub skipped_tests: Vec<Diagnostic>,
}

#[derive(Debug, thiserror::Error)]
pub enum CorpusError {
    #[error("cannot read corpus at {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("corpus has no src/*.mini files: {0}")]
    Empty(String),
    #[error("corpus does not compile:\n{}", diag::render_all(.0))]
    Diagnostics(Vec<Diagnostic>),
}

fn mini_files(dir: &Path, rel: &str) -> Result<Vec<(String, String)>, CorpusError> {
    let io = |source| CorpusError::Io { path: dir.display().to_string(), source };
    if !dir.is_dir() {
        return Ok(Vec::new());
    }
    let mut names: Vec<String> = std::fs::read_dir(dir)
        .map_err(io)?
        .filter_map(|e| e.ok())
        .map(|e| e.file_name().to_string_lossy().into_owned())
        .filter(|n| n.ends_with(".mini"))
        .collect();
    names.sort();
    names
        .into_iter()
        .map(|n| {
            let text = std::fs::read_to_string(dir.join(&n)).map_err(io)?;
            Ok((format!("{rel}/{n}"), text))
        })
        .collect()
}

impl Corpus {
    /// Loads `<root>/src/*.mini` and `<root>/test/*.mini` in path order.
    pub fn load(root: impl AsRef<Path>) -> Result<Corpus, CorpusError> {
        let root = root.as_ref();
        if !root.is_dir() {
            return Err(CorpusError::Io {
                path: root.display().to_string(),
                source: std::io::Error::new(std::io::ErrorKind::NotFound, "not a directory"),
            });
        }
        let src = mini_files(&root.join("src"), "src")?;
        if src.is_empty() {
            return Err(CorpusError::Empty(root.display().to_string()));
        }
        let tests = mini_files(&root.join("test"), "test")?;
        let mut corpus = Corpus::from_sources(&src, &tests)?;
        corpus.root = root.to_path_buf();
        Ok(corpus)
    }

    /// Builds a corpus from in-memory `(path, text)` lists.
    pub fn from_sources(src: &[(String, String)], tests: &[(String, String)]) -> Result<Corpus, CorpusError> {
        let program = parse_program(src).map_err(CorpusError::Diagnostics)?;
        let mut corpus = Corpus { root: PathBuf::new(), program, tests: Vec::new(), skipped_tests: Vec::new() };
        for (path, text) in tests {
            let class = match parse_test_class_syntax(path, text) {
                Ok(c) => c,
                Err(d) => {
                    corpus.skipped_tests.push(d);
                    continue;
                }
            };
            match typeck::check_test_class(&corpus.program, &class, path) {
                Ok(info) => corpus.tests.push(CorpusTest {
                    path: path.clone(),
                    source: text.clone(),
                    class,
                    info: Arc::new(info),
                }),
                Err(ds) => corpus.skipped_tests.extend(ds),
            }
        }
        Ok(corpus)
    }

    pub fn test(&self, path: &str) -> Option<&CorpusTest> {
        self.tests.iter().find(|t| t.path == path)
    }
}
