use crate::minilang::{check_test_class, diag::render_all, parse_test_class_syntax, Diagnostic, Program, TestClass};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ExtractionError {
    #[error("NO_CODE_BLOCK")]
    NoCodeBlock,
    #[error("PARSE_FAILED:\n{}", render_all(.0))]
    ParseFailed(Vec<Diagnostic>),
    #[error("NO_TEST_METHODS")]
    NoTestMethods,
}

impl ExtractionError {
    pub fn code(&self) -> &'static str {
        match self {
            ExtractionError::NoCodeBlock => "NO_CODE_BLOCK",
            ExtractionError::ParseFailed(_) => "PARSE_FAILED",
            ExtractionError::NoTestMethods => "NO_TEST_METHODS",
        }
    }

    pub fn diagnostics(&self) -> &[Diagnostic] {
        match self {
            ExtractionError::ParseFailed(d) => d,
            _ => &[],
        }
    }
}

/// The first fenced code block of a reply, or the whole reply when it has no
/// fence but looks like a class.
pub fn code_of(reply: &str) -> Option<String> {
    let mut lines = reply.lines();
    while let Some(l) = lines.next() {
        if l.trim_start().starts_with("```") {
            let mut body = String::new();
            for l in lines.by_ref() {
                if l.trim_start().starts_with("```") {
                    return Some(body);
                }
                body.push_str(l);
                body.push('\n');
            }
            return Some(body);
        }
    }
    reply.contains("class ").then(|| reply.to_string())
}

/// Parses a reply's code without resolving names against the corpus.
pub fn extract_syntax(reply: &str) -> Result<TestClass, ExtractionError> {
    let code = code_of(reply).ok_or(ExtractionError::NoCodeBlock)?;
    let test = parse_test_class_syntax("candidate.mini", &code).map_err(|d| ExtractionError::ParseFailed(vec![d]))?;
    if test.test_methods().next().is_none() {
        return Err(ExtractionError::NoTestMethods);
    }
    Ok(test)
}

/// Parses a reply's code and type-checks it against the corpus program, so
/// calls to undeclared methods surface as `UNRESOLVED_SYMBOL`.
pub fn extract_test_class(reply: &str, program: &Program) -> Result<TestClass, ExtractionError> {
    let test = extract_syntax(reply)?;
    check_test_class(program, &test, "candidate.mini").map_err(ExtractionError::ParseFailed)?;
    Ok(test)
}
