use super::ast::Span;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    /// Magnitude only; a leading minus is a separate token.
    Int(u64),
    Str(String),
    Kw(Kw),
    Sym(&'static str),
    Eof,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kw {
    Class,
    Static,
    Void,
    Int,
    Bool,
    String,
    List,
    If,
    Else,
    While,
    Return,
    Throw,
    True,
    False,
    Null,
    New,
    This,
}

const KEYWORDS: &[(&str, Kw)] = &[
    ("class", Kw::Class),
    ("static", Kw::Static),
    ("void", Kw::Void),
    ("int", Kw::Int),
    ("bool", Kw::Bool),
    ("string", Kw::String),
    ("list", Kw::List),
    ("if", Kw::If),
    ("else", Kw::Else),
    ("while", Kw::While),
    ("return", Kw::Return),
    ("throw", Kw::Throw),
    ("true", Kw::True),
    ("false", Kw::False),
    ("null", Kw::Null),
    ("new", Kw::New),
    ("this", Kw::This),
];

pub fn is_keyword(word: &str) -> bool {
    KEYWORDS.iter().any(|(k, _)| *k == word)
}

// Two-character symbols must precede their one-character prefixes.
const SYMBOLS: &[&str] = &[
    "==", "!=", "<=", ">=", "&&", "||", "{", "}", "(", ")", "[", "]", ";", ",", ".", "=", "<", ">",
    "+", "-", "*", "/", "%", "!", "@",
];

#[derive(Debug, Clone)]
pub struct Token {
    pub tok: Tok,
    pub span: Span,
}

#[derive(Debug, Clone)]
pub struct LexError {
    pub span: Span,
    pub message: String,
}

pub fn tokenize(src: &str) -> Result<Vec<Token>, LexError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let mut line = 1u32;
    let mut col = 1u32;

    macro_rules! bump {
        () => {{
            if chars[i] == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            i += 1;
        }};
    }

    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            bump!();
            continue;
        }
        if c == '/' && chars.get(i + 1) == Some(&'/') {
            while i < chars.len() && chars[i] != '\n' {
                bump!();
            }
            continue;
        }
        if c == '/' && chars.get(i + 1) == Some(&'*') {
            let start = Span::new(line, col);
            bump!();
            bump!();
            loop {
                if i >= chars.len() {
                    return Err(LexError { span: start, message: "unterminated block comment".into() });
                }
                if chars[i] == '*' && chars.get(i + 1) == Some(&'/') {
                    bump!();
                    bump!();
                    break;
                }
                bump!();
            }
            continue;
        }

        let span = Span::new(line, col);
        if c.is_ascii_alphabetic() || c == '_' || c == '$' {
            let mut word = String::new();
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_' || chars[i] == '$') {
                word.push(chars[i]);
                bump!();
            }
            let tok = match KEYWORDS.iter().find(|(k, _)| *k == word) {
                Some((_, kw)) => Tok::Kw(*kw),
                None => Tok::Ident(word),
            };
            out.push(Token { tok, span });
            continue;
        }
        if c.is_ascii_digit() {
            let mut value: u64 = 0;
            while i < chars.len() && chars[i].is_ascii_digit() {
                let d = chars[i].to_digit(10).unwrap() as u64;
                value = value
                    .checked_mul(10)
                    .and_then(|v| v.checked_add(d))
                    .ok_or_else(|| LexError { span, message: "integer literal too large".into() })?;
                bump!();
            }
            if i < chars.len() && (chars[i].is_ascii_alphabetic() || chars[i] == '_') {
                return Err(LexError { span, message: "invalid numeric literal".into() });
            }
            out.push(Token { tok: Tok::Int(value), span });
            continue;
        }
        if c == '"' {
            bump!();
            let mut s = String::new();
            loop {
                let Some(&ch) = chars.get(i) else {
                    return Err(LexError { span, message: "unterminated string literal".into() });
                };
                match ch {
                    '"' => {
                        bump!();
                        break;
                    }
                    '\n' => return Err(LexError { span, message: "newline in string literal".into() }),
                    '\\' => {
                        bump!();
                        let Some(&esc) = chars.get(i) else {
                            return Err(LexError { span, message: "unterminated string literal".into() });
                        };
                        bump!();
                        match esc {
                            'n' => s.push('\n'),
                            't' => s.push('\t'),
                            'r' => s.push('\r'),
                            '0' => s.push('\0'),
                            '\\' => s.push('\\'),
                            '"' => s.push('"'),
                            'u' => {
                                if chars.get(i) != Some(&'{') {
                                    return Err(LexError { span, message: "expected `{` after \\u".into() });
                                }
                                bump!();
                                let mut hex = String::new();
                                while i < chars.len() && chars[i] != '}' {
                                    hex.push(chars[i]);
                                    bump!();
                                }
                                if i >= chars.len() {
                                    return Err(LexError { span, message: "unterminated unicode escape".into() });
                                }
                                bump!();
                                let ch = u32::from_str_radix(&hex, 16).ok().and_then(char::from_u32).ok_or_else(
                                    || LexError { span, message: format!("invalid unicode escape `{hex}`") },
                                )?;
                                s.push(ch);
                            }
                            other => {
                                return Err(LexError { span, message: format!("unknown escape `\\{other}`") })
                            }
                        }
                    }
                    _ => {
                        s.push(ch);
                        bump!();
                    }
                }
            }
            out.push(Token { tok: Tok::Str(s), span });
            continue;
        }
        let matched = SYMBOLS.iter().find(|sym| {
            let mut it = sym.chars();
            let first = it.next().unwrap();
            first == c && it.next().is_none_or(|second| chars.get(i + 1) == Some(&second))
        });
        match matched {
            Some(sym) => {
                for _ in 0..sym.len() {
                    bump!();
                }
                out.push(Token { tok: Tok::Sym(sym), span });
            }
            None => return Err(LexError { span, message: format!("unexpected character `{c}`") }),
        }
    }
    out.push(Token { tok: Tok::Eof, span: Span::new(line, col) });
    Ok(out)
}
