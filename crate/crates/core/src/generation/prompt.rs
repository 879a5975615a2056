use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::code_model::{retrieve_invocation_examples, Corpus, InvocationExample, DEFAULT_MAX_EXAMPLES};
use crate::coupling::{feature_summary, CoupledPair};
use crate::minilang::{print_method, printer::print_signature, print_expr, ClassDecl, MethodRef};

pub const SYSTEM_MESSAGE: &str = "You are an expert in the mini-language described below and in metamorphic testing. \
Your task is to write a metamorphic test case (MTC) for a pair of coupled methods: build a source input, \
call one method, derive a follow-up input, call the other method, and assert the relation between the \
inputs and outputs of the two executions. \
The mini-language is a small Java-like language with the types int, bool, string, list<T> and class types, \
static and instance methods, `new C()`, and the assertions assertEquals, assertNotEquals, assertTrue and assertFalse. \
Reply with exactly one test class in a fenced code block.";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PromptConfig {
    pub max_examples: usize,
    /// Byte budget for the class-skeleton section.
    pub skeleton_budget: usize,
    /// Files excluded from invocation examples (typically the reference tests).
    pub exclude_examples: Vec<String>,
}

impl Default for PromptConfig {
    fn default() -> Self {
        PromptConfig { max_examples: DEFAULT_MAX_EXAMPLES, skeleton_budget: 4096, exclude_examples: Vec::new() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PromptBundle {
    pub system_message: String,
    pub pair_code: String,
    pub feature_text: String,
    pub invocation_examples: Vec<InvocationExample>,
    pub class_skeleton: String,
    pub skeleton_truncated: bool,
    pub mtc_template: String,
    pub test_class_name: String,
}

/// Name of the generated test class, e.g. `AESCodec_encryptText_decryptText_MTC`.
pub fn test_class_name(pair: &CoupledPair) -> String {
    format!("{}_{}_{}_MTC", pair.target.class, pair.target.name, pair.candidate.name)
}

pub fn build_prompt(pair: &CoupledPair, corpus: &Corpus, cfg: &PromptConfig) -> PromptBundle {
    let program = &corpus.program;
    let mut pair_code = String::new();
    for m in [&pair.target, &pair.candidate] {
        if let Some(d) = program.method(m) {
            pair_code.push_str(&print_method(d));
        }
    }
    let examples =
        retrieve_invocation_examples(corpus, (&pair.target, &pair.candidate), cfg.max_examples, &cfg.exclude_examples);
    let (class_skeleton, skeleton_truncated) = match program.class(&pair.target.class) {
        Some(c) => class_skeleton(c, cfg.skeleton_budget),
        None => (String::new(), false),
    };
    let name = test_class_name(pair);
    PromptBundle {
        system_message: SYSTEM_MESSAGE.to_string(),
        pair_code,
        feature_text: feature_summary(pair, Some(program)),
        invocation_examples: examples,
        class_skeleton,
        skeleton_truncated,
        mtc_template: mtc_template(&name, &pair.target, &pair.candidate),
        test_class_name: name,
    }
}

/// Fields and method signatures with bodies elided, cut at a line boundary
/// once `budget` bytes are used.
pub fn class_skeleton(class: &ClassDecl, budget: usize) -> (String, bool) {
    let mut lines = vec![format!("class {} {{", class.name)];
    for f in &class.fields {
        let mut l = format!("    {}{} {}", if f.is_static { "static " } else { "" }, f.ty, f.name);
        if let Some(init) = &f.init {
            write!(l, " = {}", print_expr(init)).unwrap();
        }
        l.push(';');
        lines.push(l);
    }
    for m in &class.methods {
        lines.push(format!("    {} {{ ... }}", print_signature(m)));
    }
    lines.push("}".into());
    let mut out = String::new();
    for l in &lines {
        if out.len() + l.len() + 1 > budget {
            out.push_str("    // ... truncated\n");
            return (out, true);
        }
        out.push_str(l);
        out.push('\n');
    }
    (out, false)
}

fn mtc_template(name: &str, a: &MethodRef, b: &MethodRef) -> String {
    format!(
        "class {name} {{\n    @Test\n    void testMR() {{\n        // 1. construct a source input\n        // 2. call {}\n        // 3. derive a follow-up input\n        // 4. call {}\n        // 5. assert the output relation\n    }}\n}}\n",
        a.qualified_name(),
        b.qualified_name()
    )
}

impl PromptBundle {
    /// The user message: every section in fixed order, each labeled even when
    /// empty.
    pub fn user_message(&self) -> String {
        let mut out = String::new();
        writeln!(out, "# Code of the paired method\n```\n{}```", self.pair_code).unwrap();
        writeln!(out, "# Coupling features on the paired methods").unwrap();
        if self.feature_text.is_empty() {
            writeln!(out, "No coupling features.").unwrap();
        } else {
            out.push_str(&self.feature_text);
        }
        writeln!(out, "# Invocation examples").unwrap();
        if self.invocation_examples.is_empty() {
            writeln!(out, "No invocation examples available.").unwrap();
        }
        for e in &self.invocation_examples {
            writeln!(out, "// from {} (calls {})\n```\n{}```", e.origin_path, e.invoked_ref.qualified_name(), e.test_method_source)
                .unwrap();
        }
        writeln!(out, "# Skeleton of the container class\n```\n{}```", self.class_skeleton).unwrap();
        writeln!(out, "# Deliverable\nComplete this test class (keep the class name `{}`):", self.test_class_name).unwrap();
        write!(out, "```\n{}```\n", self.mtc_template).unwrap();
        out
    }
}
