//! Coupling analysis: for a target method, find the methods of the same class
//! that share intent (signature), behavior (calls) or state (fields) with it.

use std::collections::BTreeSet;
use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::code_model::{extract_facts, FactsConfig, FactsError, MethodFacts};
use crate::minilang::{AssertKind, Callee, MethodRef, Program};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Category {
    Intention,
    Behavior,
    State,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Label {
    Overloading,
    SharedSigTokensAndTypes,
    DirectCall,
    SharedCalls,
    DirectDataDep,
    SharedState,
}

impl Label {
    pub const ALL: [Label; 6] = [
        Label::Overloading,
        Label::SharedSigTokensAndTypes,
        Label::DirectCall,
        Label::SharedCalls,
        Label::DirectDataDep,
        Label::SharedState,
    ];

    pub fn category(self) -> Category {
        match self {
            Label::Overloading | Label::SharedSigTokensAndTypes => Category::Intention,
            Label::DirectCall | Label::SharedCalls => Category::Behavior,
            Label::DirectDataDep | Label::SharedState => Category::State,
        }
    }
}

/// Direction of a call or data-flow edge. For calls the arrow points from
/// caller to callee; for data dependencies from writer to reader.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Direction {
    TargetToCandidate,
    CandidateToTarget,
    Both,
}

impl Direction {
    fn from_flags(t_to_c: bool, c_to_t: bool) -> Option<Direction> {
        match (t_to_c, c_to_t) {
            (true, true) => Some(Direction::Both),
            (true, false) => Some(Direction::TargetToCandidate),
            (false, true) => Some(Direction::CandidateToTarget),
            (false, false) => None,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Evidence {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub tokens: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub types: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub calls: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub fields: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub direction: Option<Direction>,
}

impl Evidence {
    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
            && self.types.is_empty()
            && self.calls.is_empty()
            && self.fields.is_empty()
            && self.direction.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CouplingFeature {
    pub category: Category,
    pub label: Label,
    pub evidence: Evidence,
}

impl CouplingFeature {
    fn new(label: Label, evidence: Evidence) -> Self {
        CouplingFeature { category: label.category(), label, evidence }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoupledPair {
    pub target: MethodRef,
    pub candidate: MethodRef,
    pub features: Vec<CouplingFeature>,
}

impl CoupledPair {
    pub fn labels(&self) -> BTreeSet<Label> {
        self.features.iter().map(|f| f.label).collect()
    }

    pub fn feature(&self, label: Label) -> Option<&CouplingFeature> {
        self.features.iter().find(|f| f.label == label)
    }

    /// Directory-friendly name, e.g. `encryptText__decryptText`. Overloads are
    /// disambiguated by arity.
    pub fn slug(&self) -> String {
        fn part(m: &MethodRef) -> String {
            format!("{}{}", m.name, if m.params.is_empty() { String::new() } else { format!("_{}", m.params.len()) })
        }
        format!("{}__{}", part(&self.target), part(&self.candidate))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct CouplingConfig {
    pub facts: FactsConfig,
    /// Builtin callees that never count as shared calls.
    pub ignore_calls: Vec<String>,
    /// Whether the signature feature needs a shared parameter/return type in
    /// addition to a shared name token.
    pub signature_requires_type_overlap: bool,
}

impl Default for CouplingConfig {
    fn default() -> Self {
        let mut ignore_calls = vec!["print".to_string(), "len".to_string()];
        ignore_calls.extend(
            [AssertKind::Equals, AssertKind::NotEquals, AssertKind::True, AssertKind::False]
                .iter()
                .map(|k| k.builtin_name().to_string()),
        );
        CouplingConfig { facts: FactsConfig::default(), ignore_calls, signature_requires_type_overlap: true }
    }
}

fn strings<T: ToString>(items: impl IntoIterator<Item = T>) -> Vec<String> {
    items.into_iter().map(|x| x.to_string()).collect()
}

/// Matches one (target, candidate) pair; empty when nothing is shared.
pub fn match_features(t: &MethodFacts, c: &MethodFacts, cfg: &CouplingConfig) -> Vec<CouplingFeature> {
    let mut out = Vec::new();

    if t.method_ref.name == c.method_ref.name {
        out.push(CouplingFeature::new(
            Label::Overloading,
            Evidence { tokens: vec![t.method_ref.name.clone()], ..Evidence::default() },
        ));
    } else {
        let tokens: Vec<String> = t.name_tokens.intersection(&c.name_tokens).cloned().collect();
        let types = strings(t.para_ret_types.intersection(&c.para_ret_types));
        let types_ok = !types.is_empty() || !cfg.signature_requires_type_overlap;
        if !tokens.is_empty() && types_ok {
            out.push(CouplingFeature::new(Label::SharedSigTokensAndTypes, Evidence { tokens, types, ..Evidence::default() }));
        }
    }

    let t_calls_c = t.calls.contains(&Callee::Method(c.method_ref.clone()));
    let c_calls_t = c.calls.contains(&Callee::Method(t.method_ref.clone()));
    if let Some(direction) = Direction::from_flags(t_calls_c, c_calls_t) {
        let mut calls = Vec::new();
        if t_calls_c {
            calls.push(c.method_ref.to_string());
        }
        if c_calls_t {
            calls.push(t.method_ref.to_string());
        }
        out.push(CouplingFeature::new(Label::DirectCall, Evidence { calls, direction: Some(direction), ..Evidence::default() }));
    } else {
        let ignored = |callee: &&Callee| matches!(callee, Callee::Builtin(n) if cfg.ignore_calls.contains(n));
        let shared = strings(t.calls.intersection(&c.calls).filter(|x| !ignored(x)));
        if !shared.is_empty() {
            out.push(CouplingFeature::new(Label::SharedCalls, Evidence { calls: shared, ..Evidence::default() }));
        }
    }

    let t_to_c: BTreeSet<_> = t.write_fields.intersection(&c.read_fields).collect();
    let c_to_t: BTreeSet<_> = c.write_fields.intersection(&t.read_fields).collect();
    if let Some(direction) = Direction::from_flags(!t_to_c.is_empty(), !c_to_t.is_empty()) {
        let fields = strings(t_to_c.union(&c_to_t));
        out.push(CouplingFeature::new(Label::DirectDataDep, Evidence { fields, direction: Some(direction), ..Evidence::default() }));
    } else {
        let shared: BTreeSet<_> = t
            .read_fields
            .intersection(&c.read_fields)
            .chain(t.write_fields.intersection(&c.write_fields))
            .collect();
        if !shared.is_empty() {
            out.push(CouplingFeature::new(Label::SharedState, Evidence { fields: strings(shared), ..Evidence::default() }));
        }
    }
    out
}

/// Pairs `target` with every other method of its class, keeping those with at
/// least one feature, sorted by feature count (descending) then candidate.
pub fn analyze_coupling(program: &Program, target: &MethodRef, cfg: &CouplingConfig) -> Result<Vec<CoupledPair>, FactsError> {
    let t = extract_facts(program, target, &cfg.facts)?;
    let class = program.class(&target.class).expect("target resolved");
    let mut pairs = Vec::new();
    for m in &class.methods {
        let r = m.method_ref(&class.name);
        if r == *target {
            continue;
        }
        let c = extract_facts(program, &r, &cfg.facts)?;
        let features = match_features(&t, &c, cfg);
        if !features.is_empty() {
            pairs.push(CoupledPair { target: target.clone(), candidate: r, features });
        }
    }
    pairs.sort_by(|a, b| {
        b.features
            .len()
            .cmp(&a.features.len())
            .then_with(|| a.candidate.name.cmp(&b.candidate.name))
            .then_with(|| a.candidate.params.cmp(&b.candidate.params))
    });
    Ok(pairs)
}

fn label_text(f: &CouplingFeature, pair: &CoupledPair) -> String {
    let (t, c) = (&pair.target.name, &pair.candidate.name);
    let arrow = |d: Option<Direction>| match d {
        Some(Direction::TargetToCandidate) => format!("{t} -> {c}"),
        Some(Direction::CandidateToTarget) => format!("{c} -> {t}"),
        _ => format!("{t} <-> {c}"),
    };
    match f.label {
        Label::Overloading => "Overloading method".to_string(),
        Label::SharedSigTokensAndTypes => "Sharing name tokens and consuming/producing the same data types".to_string(),
        Label::DirectCall => format!("Direct call dependency ({})", arrow(f.evidence.direction)),
        Label::SharedCalls => "Invoking the same APIs".to_string(),
        Label::DirectDataDep => format!("Direct data dependency ({})", arrow(f.evidence.direction)),
        Label::SharedState => "Sharing the same dependent/dependency".to_string(),
    }
}

fn signature(m: &MethodRef, program: Option<&Program>) -> String {
    let ret = program.and_then(|p| p.method(m)).map(|d| d.ret.to_string()).unwrap_or_else(|| "?".into());
    let params = strings(&m.params).join(", ");
    format!("`{}`: ({params}) -> {ret}", m.name)
}

/// Renders the features grouped by category. Byte-stable.
pub fn feature_summary(pair: &CoupledPair, program: Option<&Program>) -> String {
    let mut out = String::new();
    for (category, heading) in [(Category::Intention, "Intention"), (Category::Behavior, "Behavior"), (Category::State, "State")] {
        let features: Vec<&CouplingFeature> = pair.features.iter().filter(|f| f.category == category).collect();
        if features.is_empty() {
            continue;
        }
        writeln!(out, "### {heading}:").unwrap();
        for f in features {
            writeln!(out, "    * {}", label_text(f, pair)).unwrap();
            let e = &f.evidence;
            match f.label {
                Label::Overloading | Label::SharedSigTokensAndTypes => {
                    if f.label == Label::SharedSigTokensAndTypes {
                        writeln!(out, "        * shared name tokens: {}", e.tokens.join(", ")).unwrap();
                        if !e.types.is_empty() {
                            writeln!(out, "        * shared types: {}", e.types.join(", ")).unwrap();
                        }
                    }
                    writeln!(
                        out,
                        "        * {} , {}",
                        signature(&pair.target, program),
                        signature(&pair.candidate, program)
                    )
                    .unwrap();
                }
                Label::DirectCall | Label::SharedCalls => {
                    writeln!(out, "        * calls: {}", e.calls.iter().map(|c| format!("`{c}`")).collect::<Vec<_>>().join(", "))
                        .unwrap();
                }
                Label::DirectDataDep | Label::SharedState => {
                    writeln!(out, "        * fields: {}", e.fields.iter().map(|c| format!("`{c}`")).collect::<Vec<_>>().join(", "))
                        .unwrap();
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::minilang::{parse_program, TypeName};

    fn prog(src: &str) -> Program {
        parse_program(&[("c.mini", src)]).unwrap()
    }

    #[test]
    fn overloads_are_coupled() {
        let p = prog(
            "class Codec { static list<int> base642bytes(string s) { return [len(s)]; } static list<int> base642bytes(string s, string code) { return [len(s), len(code)]; } }",
        );
        let t = MethodRef::new("Codec", "base642bytes", vec![TypeName::Str]);
        let pairs = analyze_coupling(&p, &t, &CouplingConfig::default()).unwrap();
        assert_eq!(pairs.len(), 1);
        assert_eq!(pairs[0].labels(), BTreeSet::from([Label::Overloading]));
        assert!(feature_summary(&pairs[0], Some(&p)).contains("Overloading method"));
    }

    #[test]
    fn unrelated_methods_are_not_paired() {
        let p = prog("class U { int alpha(int x) { return x; } string beta() { return \"\"; } }");
        let t = MethodRef::new("U", "alpha", vec![TypeName::Int]);
        assert!(analyze_coupling(&p, &t, &CouplingConfig::default()).unwrap().is_empty());
    }

    #[test]
    fn direct_edges_record_direction() {
        let p = prog("class D { int n; void put(int x) { n = x; } int take() { put(1); return n; } }");
        let t = MethodRef::new("D", "put", vec![TypeName::Int]);
        let pairs = analyze_coupling(&p, &t, &CouplingConfig::default()).unwrap();
        let call = pairs[0].feature(Label::DirectCall).unwrap();
        assert_eq!(call.evidence.direction, Some(Direction::CandidateToTarget));
        let dep = pairs[0].feature(Label::DirectDataDep).unwrap();
        assert_eq!(dep.evidence.direction, Some(Direction::TargetToCandidate));
        assert_eq!(dep.evidence.fields, ["D.n"]);
        let text = feature_summary(&pairs[0], Some(&p));
        assert!(text.contains("Direct call dependency (take -> put)"), "{text}");
        assert!(text.contains("Direct data dependency (put -> take)"), "{text}");
    }

    #[test]
    fn ignored_builtins_do_not_couple() {
        let p = prog("class P { void one() { print(1); } void two() { print(2); } }");
        let t = MethodRef::new("P", "one", vec![]);
        assert!(analyze_coupling(&p, &t, &CouplingConfig::default()).unwrap().is_empty());
    }

    #[test]
    fn signature_switch() {
        let p = prog("class S { int readText() { return 1; } string writeText() { return \"\"; } }");
        let t = MethodRef::new("S", "readText", vec![]);
        assert!(analyze_coupling(&p, &t, &CouplingConfig::default()).unwrap().is_empty());
        let loose = CouplingConfig { signature_requires_type_overlap: false, ..CouplingConfig::default() };
        let pairs = analyze_coupling(&p, &t, &loose).unwrap();
        assert_eq!(pairs[0].labels(), BTreeSet::from([Label::SharedSigTokensAndTypes]));
    }
}
