use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use super::config::{PipelineConfig, Targets};
use super::report::*;
use crate::code_model::{resolve_method_spec, Corpus, CorpusError};
use crate::coupling::{analyze_coupling, CoupledPair};
use crate::generation::{amplify, generate_for_pair, CandidateMTC, GenerationConfig, PromptConfig};
use crate::llm::{ChatProvider, LlmError};
use crate::minilang::{print_test_class, run_test_class, MethodRef, Program, TestClass};
use crate::skeleton::{compare, extract_skeleton, extract_skeleton_with, MRSkeleton};
use crate::validation::{check_mtc_properties, generate_mutants, validate, Mutant};

#[derive(Debug, thiserror::Error)]
pub enum PipelineError {
    #[error(transparent)]
    Config(#[from] super::config::ConfigError),
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error("provider: {0}")]
    Provider(#[from] LlmError),
    #[error("unknown target `{0}`")]
    UnknownTarget(String),
    #[error("cannot write {0}: {1}")]
    Io(PathBuf, std::io::Error),
}

impl PipelineError {
    /// Process exit code for a fatal error.
    pub fn exit_code(&self) -> i32 {
        1
    }
}

pub struct RunOutcome {
    pub report: RunReport,
    pub report_path: PathBuf,
}

impl RunOutcome {
    /// 0 when every pair produced an executable candidate, 2 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.report.failures.is_empty() {
            0
        } else {
            2
        }
    }
}

/// Resolves the configured targets against the corpus program.
pub fn resolve_targets(program: &Program, targets: &Targets) -> Result<Vec<MethodRef>, PipelineError> {
    match targets {
        Targets::Keyword(_) => Ok(program.method_refs()),
        Targets::List(specs) => {
            let mut out = Vec::new();
            for s in specs {
                out.extend(resolve_method_spec(program, s).map_err(|_| PipelineError::UnknownTarget(s.clone()))?);
            }
            Ok(out)
        }
    }
}

/// Loads the corpus, builds the configured provider and runs everything.
pub fn run_pipeline(config: &PipelineConfig) -> Result<RunOutcome, PipelineError> {
    let corpus = Corpus::load(&config.corpus)?;
    let provider = config.provider.build()?;
    run_pipeline_with(config, &corpus, provider.as_ref())
}

pub fn generation_config(config: &PipelineConfig) -> GenerationConfig {
    GenerationConfig {
        k: config.k,
        prompt: PromptConfig {
            max_examples: crate::code_model::DEFAULT_MAX_EXAMPLES,
            skeleton_budget: config.skeleton_budget,
            exclude_examples: config.exclude_examples.clone(),
        },
        params: config.provider.params(),
        limits: config.limits,
    }
}

/// Directory name of a target, e.g. `AESCodec.encryptText`.
pub fn target_dir(program: &Program, target: &MethodRef) -> String {
    let overloaded = program.class(&target.class).map(|c| c.methods_named(&target.name).count() > 1).unwrap_or(false);
    if overloaded {
        format!("{}_{}", target.qualified_name(), target.params.len())
    } else {
        target.qualified_name()
    }
}

pub fn run_pipeline_with(config: &PipelineConfig, corpus: &Corpus, provider: &dyn ChatProvider) -> Result<RunOutcome, PipelineError> {
    config.validate()?;
    let program = &corpus.program;
    let targets = resolve_targets(program, &config.targets)?;
    let gen = generation_config(config);
    let references = load_references(corpus, &config.references);
    let mut report = RunReport {
        schema_version: SCHEMA_VERSION,
        seed: config.seed,
        k: config.k,
        m: config.m,
        tasks: Vec::new(),
        similarity: Vec::new(),
        failures: Vec::new(),
    };
    for target in &targets {
        let dir = config.out.join(target_dir(program, target));
        if dir.exists() {
            std::fs::remove_dir_all(&dir).map_err(|e| PipelineError::Io(dir.clone(), e))?;
        }
        let pairs = analyze_coupling(program, target, &config.coupling).map_err(|_| PipelineError::UnknownTarget(target.to_string()))?;
        tracing::info!(target = %target, pairs = pairs.len(), "analyzed");
        let records = crate::par_map(&pairs, config.workers, |pair| process_pair(config, corpus, provider, &gen, pair, &dir));
        let mut pair_records = Vec::new();
        for r in records {
            let r = r?;
            if !r.attempts.iter().any(|a| a.compiles) {
                report.failures.push(format!("{target} :: {}", r.candidate));
            }
            pair_records.push(r);
        }
        let mut task = TaskReport { target: target.to_string(), pairs: pair_records, metrics: Metrics::default() };
        task.metrics = Metrics::of_task(&task);
        if !references.is_empty() {
            report.similarity.push(compare_against_reference(program, target, &pairs, &task, &references));
        }
        report.tasks.push(task);
    }
    std::fs::create_dir_all(&config.out).map_err(|e| PipelineError::Io(config.out.clone(), e))?;
    let report_path = config.out.join("report.json");
    write(&report_path, &to_json(&report))?;
    Ok(RunOutcome { report, report_path })
}

fn write(path: &Path, text: &str) -> Result<(), PipelineError> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent).map_err(|e| PipelineError::Io(parent.to_path_buf(), e))?;
    }
    std::fs::write(path, text).map_err(|e| PipelineError::Io(path.to_path_buf(), e))
}

/// Generates, checks, amplifies and validates the candidates of one pair,
/// writing its files under `target_dir/<pair>/`.
fn process_pair(
    config: &PipelineConfig,
    corpus: &Corpus,
    provider: &dyn ChatProvider,
    gen: &GenerationConfig,
    pair: &CoupledPair,
    target_dir: &Path,
) -> Result<PairRecord, PipelineError> {
    let program = &corpus.program;
    let dir = target_dir.join(pair.slug());
    let candidates = generate_for_pair(pair, corpus, provider, gen);
    let mut mutants: Option<Vec<Mutant>> = None;
    let mut attempts = Vec::new();
    for mut c in candidates {
        let adir = dir.join(format!("attempt{}", c.attempt));
        if let Some(t) = &c.test_class {
            write(&adir.join("candidate.mini"), &print_test_class(t))?;
        } else if let Some(code) = c.reply.as_deref().and_then(crate::generation::code_of) {
            write(&adir.join("candidate.mini"), &code)?;
        }
        let mut rec = check_candidate(program, pair, &c, config);
        if rec.valid {
            let base = c.test_class.clone().unwrap();
            let amp = amplify(&base, &mut c.session, provider, program, pair, config.m);
            rec.amplified = Some(AmplifiedRecord { m: amp.m, degraded: amp.degraded, notes: amp.notes.clone() });
            let ms = mutants.get_or_insert_with(|| generate_mutants(program, pair, config.mutant_cap, config.seed));
            let v = validate(&amp.test_class, program, ms, &config.limits, config.workers);
            rec.p = Some(v.p);
            rec.per_mutant = v.per_mutant;
            rec.decision = Some(v.decision);
            rec.reason = Some(v.reason);
            match extract_skeleton(program, &amp.test_class, pair) {
                Ok(s) => rec.skeleton = Some(s),
                Err(e) => rec.skeleton_error = Some(e.to_string()),
            }
            if rec.retained() {
                write(&adir.join("amplified.mini"), &print_test_class(&amp.test_class))?;
            }
        }
        attempts.push(rec);
    }
    let record = PairRecord {
        candidate: pair.candidate.to_string(),
        slug: pair.slug(),
        features: pair.features.clone(),
        mutants: mutants.map_or(0, |m| m.len()),
        attempts,
    };
    let index = serde_json::to_string_pretty(&record.attempts).expect("attempts serialize") + "\n";
    write(&dir.join("candidates.json"), &index)?;
    Ok(record)
}

fn check_candidate(program: &Program, pair: &CoupledPair, c: &CandidateMTC, config: &PipelineConfig) -> AttemptRecord {
    let mut rec = AttemptRecord {
        attempt: c.attempt,
        received: c.received_reply(),
        error: c.error.clone(),
        refinement: c.refinement_log.clone(),
        ..AttemptRecord::default()
    };
    let Some(t) = &c.test_class else { return rec };
    let run = run_test_class(program, t, &config.limits);
    rec.compiles = run.class_error.is_none();
    let props = check_mtc_properties(program, t, pair);
    rec.invocation_count = props.invocation_count;
    rec.is_mtc = props.is_mtc;
    rec.executable = rec.compiles && rec.is_mtc;
    rec.passes_original = run.all_pass();
    rec.valid = rec.executable && rec.passes_original;
    rec
}

fn load_references(corpus: &Corpus, paths: &[String]) -> Vec<(String, Result<TestClass, String>)> {
    paths
        .iter()
        .map(|p| {
            let t = corpus.test(p).map(|t| t.class.clone()).ok_or_else(|| format!("{p}: not a corpus test"));
            (p.clone(), t)
        })
        .collect()
}

/// L1/L2 consistency of one target: true iff any retained generated MTC
/// matches any reference skeleton that involves the target.
pub fn compare_against_reference(
    program: &Program,
    target: &MethodRef,
    pairs: &[CoupledPair],
    task: &TaskReport,
    references: &[(String, Result<TestClass, String>)],
) -> TargetSimilarity {
    let mut methods: BTreeSet<MethodRef> = pairs.iter().map(|p| p.candidate.clone()).collect();
    methods.insert(target.clone());
    let mut refs: Vec<(String, MRSkeleton)> = Vec::new();
    let mut skipped = Vec::new();
    for (path, t) in references {
        match t {
            Ok(t) => match extract_skeleton_with(program, t, &methods) {
                Ok(s) if s.method_pair.contains(target) => refs.push((path.clone(), s)),
                Ok(_) => {}
                Err(e) => skipped.push(format!("{path}: {e}")),
            },
            Err(e) => skipped.push(e.clone()),
        }
    }
    let generated: Vec<&MRSkeleton> = task
        .pairs
        .iter()
        .flat_map(|p| &p.attempts)
        .filter(|a| a.retained())
        .filter_map(|a| a.skeleton.as_ref())
        .collect();
    let (mut l1, mut l2) = (false, false);
    for g in &generated {
        for (_, r) in &refs {
            let s = compare(g, r);
            l1 |= s.l1;
            l2 |= s.l2;
        }
    }
    TargetSimilarity { target: target.to_string(), references: refs.into_iter().map(|(p, _)| p).collect(), l1, l2, skipped }
}
