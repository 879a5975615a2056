use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum DiagCode {
    UnresolvedSymbol,
    TypeMismatch,
    ParseError,
    DuplicateDecl,
}

impl DiagCode {
    pub fn as_str(self) -> &'static str {
        match self {
            DiagCode::UnresolvedSymbol => "UNRESOLVED_SYMBOL",
            DiagCode::TypeMismatch => "TYPE_MISMATCH",
            DiagCode::ParseError => "PARSE_ERROR",
            DiagCode::DuplicateDecl => "DUPLICATE_DECL",
        }
    }
}

impl fmt::Display for DiagCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One compiler diagnostic. Renders as `path:line: CODE: message`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub path: String,
    pub line: u32,
    pub code: DiagCode,
    pub message: String,
    /// The offending identifier for `UNRESOLVED_SYMBOL`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symbol: Option<String>,
}

impl Diagnostic {
    pub fn new(path: impl Into<String>, line: u32, code: DiagCode, message: impl Into<String>) -> Self {
        Diagnostic { path: path.into(), line, code, message: message.into(), symbol: None }
    }

    pub fn unresolved(path: impl Into<String>, line: u32, what: &str, symbol: &str) -> Self {
        Diagnostic {
            path: path.into(),
            line,
            code: DiagCode::UnresolvedSymbol,
            message: format!("cannot find {what} `{symbol}`"),
            symbol: Some(symbol.to_string()),
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}: {}", self.path, self.line, self.code, self.message)
    }
}

pub fn render_all(diags: &[Diagnostic]) -> String {
    let mut out = String::new();
    for d in diags {
        out.push_str(&d.to_string());
        out.push('\n');
    }
    out
}
