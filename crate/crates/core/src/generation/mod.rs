//! Prompting, reply extraction, refinement and amplification of candidate
//! metamorphic tests.

pub mod amplify;
pub mod extract;
pub mod prompt;
pub mod refine;

pub use amplify::{amplify, input_index, AmplifiedMTC, AmplifyNotes, DEFAULT_M};
pub use extract::{code_of, extract_syntax, extract_test_class, ExtractionError};
pub use prompt::{build_prompt, test_class_name, PromptBundle, PromptConfig};
pub use refine::{assess, refine, static_repair, Assessment, RefinementEntry, Stage};

use crate::code_model::Corpus;
use crate::coupling::CoupledPair;
use crate::llm::{ChatProvider, ChatSession, ModelParams};
use crate::minilang::{Limits, TestClass};

pub const DEFAULT_K: usize = 5;

#[derive(Debug, Clone)]
pub struct GenerationConfig {
    pub k: usize,
    pub prompt: PromptConfig,
    pub params: ModelParams,
    pub limits: Limits,
}

impl Default for GenerationConfig {
    fn default() -> Self {
        GenerationConfig { k: DEFAULT_K, prompt: PromptConfig::default(), params: ModelParams::default(), limits: Limits::default() }
    }
}

#[derive(Debug, Clone)]
pub struct CandidateMTC {
    pub pair: CoupledPair,
    /// 1-based index within the K repeats.
    pub attempt: usize,
    /// Last reply (or repaired source) the candidate was taken from.
    pub reply: Option<String>,
    pub test_class: Option<TestClass>,
    pub executable: bool,
    pub refinement_log: Vec<RefinementEntry>,
    /// Provider error that prevented any reply.
    pub error: Option<String>,
    /// The attempt's own conversation, reused for amplification.
    pub session: ChatSession,
}

impl CandidateMTC {
    pub fn received_reply(&self) -> bool {
        self.reply.is_some()
    }
}

/// K attempts, each on its own fork of one shared session. Attempts run in
/// order so a replay provider serves repeated prompts deterministically.
pub fn generate_for_pair(pair: &CoupledPair, corpus: &Corpus, provider: &dyn ChatProvider, cfg: &GenerationConfig) -> Vec<CandidateMTC> {
    let bundle = build_prompt(pair, corpus, &cfg.prompt);
    let user = bundle.user_message();
    let base = ChatSession::new(bundle.system_message.clone(), cfg.params.clone());
    (1..=cfg.k).map(|attempt| run_attempt(pair, corpus, provider, cfg, &base, &user, attempt)).collect()
}

fn run_attempt(
    pair: &CoupledPair,
    corpus: &Corpus,
    provider: &dyn ChatProvider,
    cfg: &GenerationConfig,
    base: &ChatSession,
    user: &str,
    attempt: usize,
) -> CandidateMTC {
    let mut session = base.fork();
    let mut c = CandidateMTC {
        pair: pair.clone(),
        attempt,
        reply: None,
        test_class: None,
        executable: false,
        refinement_log: Vec::new(),
        error: None,
        session: base.clone(),
    };
    let reply = match session.send(provider, user) {
        Ok(r) => r,
        Err(e) => {
            tracing::warn!(attempt, error = %e, "generation attempt failed");
            c.error = Some(e.to_string());
            c.session = session;
            return c;
        }
    };
    let program = &corpus.program;
    let first = assess(&reply, program, &cfg.limits);
    c.refinement_log.push(RefinementEntry { stage: Stage::Initial, diagnostics: first.diagnostics.clone() });
    let (reply, last) = if first.executable() {
        (reply, first)
    } else {
        let r = refine(&reply, first, &mut session, provider, program, &cfg.limits);
        c.refinement_log.extend(r.log);
        (r.reply, r.assessment)
    };
    c.reply = Some(reply);
    c.executable = last.executable();
    c.test_class = last.test_class;
    c.session = session;
    c
}
