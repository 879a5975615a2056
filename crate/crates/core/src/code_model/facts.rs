use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::minilang::{walk_block_exprs, walk_stmts, Callee, ExprKind, FieldRef, IdentRes, MethodRef, Program, StmtKind, TypeInfo, TypeName};
use crate::minilang::ast::MethodDecl;

pub const DEFAULT_STOPLIST: &[&str] = &["get", "set", "is", "to", "a", "the"];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct FactsConfig {
    pub stoplist: Vec<String>,
}

impl Default for FactsConfig {
    fn default() -> Self {
        FactsConfig { stoplist: DEFAULT_STOPLIST.iter().map(|s| s.to_string()).collect() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MethodFacts {
    pub method_ref: MethodRef,
    pub name_tokens: BTreeSet<String>,
    pub para_ret_types: BTreeSet<TypeName>,
    pub calls: BTreeSet<Callee>,
    pub read_fields: BTreeSet<FieldRef>,
    pub write_fields: BTreeSet<FieldRef>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FactsError {
    #[error("UNKNOWN_METHOD: {0}")]
    UnknownMethod(String),
}

/// Splits an identifier on camelCase boundaries, underscores and digits,
/// lowercases, and drops short and stoplisted tokens.
///
/// `AESCodec` splits as `aes`, `codec`; `base642bytes` as `base`, `bytes`.
pub fn tokenize_name(name: &str, stoplist: &[String]) -> BTreeSet<String> {
    let chars: Vec<char> = name.chars().collect();
    let mut words: Vec<String> = Vec::new();
    let mut cur = String::new();
    for (i, &c) in chars.iter().enumerate() {
        if !c.is_alphabetic() {
            if !cur.is_empty() {
                words.push(std::mem::take(&mut cur));
            }
            continue;
        }
        if c.is_uppercase() && !cur.is_empty() {
            let prev = chars[i - 1];
            let next_lower = chars.get(i + 1).is_some_and(|n| n.is_lowercase());
            if prev.is_lowercase() || (prev.is_uppercase() && next_lower) {
                words.push(std::mem::take(&mut cur));
            }
        }
        cur.push(c);
    }
    if !cur.is_empty() {
        words.push(cur);
    }
    words
        .into_iter()
        .map(|w| w.to_lowercase())
        .filter(|w| w.chars().count() > 1 && !stoplist.iter().any(|s| s == w))
        .collect()
}

pub fn extract_facts(program: &Program, method: &MethodRef, cfg: &FactsConfig) -> Result<MethodFacts, FactsError> {
    let decl = program.method(method).ok_or_else(|| FactsError::UnknownMethod(method.to_string()))?;
    Ok(facts_of(decl, &method.class, program.type_info(), cfg))
}

/// Facts for every method of every class, in declaration order.
pub fn extract_all_facts(program: &Program, cfg: &FactsConfig) -> Vec<MethodFacts> {
    program
        .classes
        .iter()
        .flat_map(|c| c.methods.iter().map(move |m| facts_of(m, &c.name, program.type_info(), cfg)))
        .collect()
}

pub(crate) fn facts_of(decl: &MethodDecl, class: &str, info: &TypeInfo, cfg: &FactsConfig) -> MethodFacts {
    let mut para_ret_types: BTreeSet<TypeName> = decl.params.iter().map(|p| p.ty.clone()).collect();
    para_ret_types.insert(decl.ret.clone());
    para_ret_types.remove(&TypeName::Unit);

    let mut calls = BTreeSet::new();
    let mut reads = BTreeSet::new();
    let mut writes = BTreeSet::new();
    let mut targets = BTreeSet::new();
    walk_stmts(&decl.body, &mut |s| match &s.kind {
        StmtKind::Assign { target, .. } => {
            targets.insert(target.id);
        }
        StmtKind::Assert { kind, .. } => {
            calls.insert(Callee::Builtin(kind.builtin_name().to_string()));
        }
        _ => {}
    });
    walk_block_exprs(&decl.body, &mut |e| {
        let field = match &e.kind {
            ExprKind::Call { .. } => {
                if let Some(c) = info.calls.get(&e.id) {
                    calls.insert(c.clone());
                }
                None
            }
            ExprKind::New { class } => {
                calls.insert(Callee::Constructor(class.clone()));
                None
            }
            ExprKind::Ident(_) => match info.idents.get(&e.id) {
                Some(IdentRes::Field(f)) => Some(f.clone()),
                _ => None,
            },
            ExprKind::Field { .. } => info.fields.get(&e.id).cloned(),
            _ => None,
        };
        if let Some(f) = field {
            if targets.contains(&e.id) {
                writes.insert(f);
            } else {
                reads.insert(f);
            }
        }
    });
    MethodFacts {
        method_ref: decl.method_ref(class),
        name_tokens: tokenize_name(&decl.name, &cfg.stoplist),
        para_ret_types,
        calls,
        read_fields: reads,
        write_fields: writes,
    }
}

/// JSON shape of [`MethodFacts`] with every set rendered as sorted strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FactsRecord {
    pub method: String,
    pub name: String,
    pub name_tokens: Vec<String>,
    pub para_ret_types: Vec<String>,
    pub calls: Vec<String>,
    pub read_fields: Vec<String>,
    pub write_fields: Vec<String>,
}

impl From<&MethodFacts> for FactsRecord {
    fn from(f: &MethodFacts) -> Self {
        fn strs<T: ToString>(it: impl IntoIterator<Item = T>) -> Vec<String> {
            it.into_iter().map(|x| x.to_string()).collect()
        }
        FactsRecord {
            method: f.method_ref.to_string(),
            name: f.method_ref.name.clone(),
            name_tokens: f.name_tokens.iter().cloned().collect(),
            para_ret_types: strs(&f.para_ret_types),
            calls: strs(&f.calls),
            read_fields: strs(&f.read_fields),
            write_fields: strs(&f.write_fields),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::minilang::parse_program;

    fn toks(name: &str) -> Vec<String> {
        tokenize_name(name, &FactsConfig::default().stoplist).into_iter().collect()
    }

    #[test]
    fn tokenizer_cases() {
        assert_eq!(toks("encryptText"), ["encrypt", "text"]);
        assert_eq!(toks("AESCodec"), ["aes", "codec"]);
        assert_eq!(toks("base642bytes"), ["base", "bytes"]);
        assert_eq!(toks("get_value_x"), ["value"]);
        assert_eq!(toks("isEmpty"), ["empty"]);
        assert_eq!(toks("text"), ["text"]);
        assert!(toks("f").is_empty());
    }

    #[test]
    fn read_modify_write_counts_both_ways() {
        let p = parse_program(&[(
            "b.mini",
            "class B { int n; static int s; void f() { n = n + 1; s = 3; } int g() { return this.n; } void h() { } }",
        )])
        .unwrap();
        let cfg = FactsConfig::default();
        let f = extract_facts(&p, &MethodRef::new("B", "f", vec![]), &cfg).unwrap();
        assert_eq!(f.read_fields, BTreeSet::from([FieldRef::new("B", "n")]));
        assert_eq!(f.write_fields, BTreeSet::from([FieldRef::new("B", "n"), FieldRef::new("B", "s")]));
        let g = extract_facts(&p, &MethodRef::new("B", "g", vec![]), &cfg).unwrap();
        assert_eq!(g.read_fields, BTreeSet::from([FieldRef::new("B", "n")]));
        assert_eq!(g.para_ret_types, BTreeSet::from([TypeName::Int]));
        let h = extract_facts(&p, &MethodRef::new("B", "h", vec![]), &cfg).unwrap();
        assert!(h.calls.is_empty() && h.read_fields.is_empty() && h.write_fields.is_empty());
        assert!(h.para_ret_types.is_empty());
        assert_eq!(
            extract_facts(&p, &MethodRef::new("B", "zz", vec![]), &cfg),
            Err(FactsError::UnknownMethod("B.zz()".into()))
        );
    }
}
