use std::error::Error;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mtcforge_core::code_model::{extract_all_facts, resolve_method_spec, Corpus, FactsRecord};
use mtcforge_core::coupling::{analyze_coupling, CoupledPair};
use mtcforge_core::generation::generate_for_pair;
use mtcforge_core::llm::{ProviderConfig, ProviderKind};
use mtcforge_core::minilang::{parse_test_class, print_test_class, MethodRef, TestClass};
use mtcforge_core::pipeline::{
    generation_config, render_metrics, resolve_targets, run_pipeline_with, target_dir, PipelineConfig, RunReport, Targets,
};
use mtcforge_core::skeleton::{compare, extract_skeleton_with, MRSkeleton, SimilarityResult};
use mtcforge_core::validation::{generate_mutants, mutant_diff, operator_name, validate, MutantRate};
use serde::Serialize;

type Fatal = Box<dyn Error>;

#[derive(Parser)]
#[command(name = "mtcforge", version, about = "Metamorphic test generation for coupled method pairs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Coupled pairs of each target, as JSON.
    Analyze(Common),
    /// Static facts of every method (or of the targets), as JSON.
    Facts(Common),
    /// Generate and refine candidate tests only; writes candidate.mini files.
    Generate(Common),
    /// Mutants of each coupled pair, as unified diffs.
    Mutate {
        #[command(flatten)]
        common: Common,
        /// Print mutant summaries as JSON instead of diffs.
        #[arg(long)]
        json: bool,
    },
    /// Validate a test class against the mutants of each coupled pair.
    Validate {
        #[command(flatten)]
        common: Common,
        /// Test class to validate.
        #[arg(long)]
        test: PathBuf,
        /// Restrict to one candidate method (`Class.name` or `Class.name(int)`).
        #[arg(long)]
        candidate: Option<String>,
    },
    /// Compare the MR skeletons of two test classes.
    SkeletonCompare {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        generated: PathBuf,
        #[arg(long)]
        reference: PathBuf,
    },
    /// Full pipeline; writes `<out>/report.json`.
    Run(Common),
    /// Re-render the metrics of a previous run from its report.json (or the
    /// directory holding it).
    Report {
        path: PathBuf,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args, Clone, Default)]
struct Common {
    /// TOML config file; paths inside are relative to it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Corpus directory (overrides the config).
    #[arg(long)]
    corpus: Option<PathBuf>,
    /// Target method, repeatable (overrides the config).
    #[arg(long = "target")]
    targets: Vec<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory (overrides the config).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    provider: Option<ProviderArg>,
    /// Fixture file for the replay and record providers.
    #[arg(long)]
    fixtures: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProviderArg {
    Replay,
    Record,
    HttpChat,
}

impl Common {
    fn config(&self) -> Result<PipelineConfig, Fatal> {
        let mut cfg = match (&self.config, &self.corpus) {
            (Some(path), _) => PipelineConfig::load(path)?,
            (None, Some(corpus)) => PipelineConfig::new(corpus, ProviderConfig::new(ProviderKind::HttpChat)),
            (None, None) => return Err("either --config or --corpus is required".into()),
        };
        if let Some(c) = &self.corpus {
            cfg.corpus = c.clone();
        }
        if !self.targets.is_empty() {
            cfg.targets = Targets::List(self.targets.clone());
        }
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if let Some(o) = &self.out {
            cfg.out = o.clone();
        }
        if let Some(p) = self.provider {
            cfg.provider.kind = match p {
                ProviderArg::Replay => ProviderKind::Replay,
                ProviderArg::Record => ProviderKind::Record,
                ProviderArg::HttpChat => ProviderKind::HttpChat,
            };
        }
        if let Some(f) = &self.fixtures {
            cfg.provider.fixtures = Some(f.clone());
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

struct Loaded {
    cfg: PipelineConfig,
    corpus: Corpus,
    targets: Vec<MethodRef>,
}

impl Loaded {
    fn new(common: &Common) -> Result<Loaded, Fatal> {
        let cfg = common.config()?;
        let corpus = Corpus::load(&cfg.corpus)?;
        let targets = resolve_targets(&corpus.program, &cfg.targets)?;
        Ok(Loaded { cfg, corpus, targets })
    }

    fn pairs(&self) -> Result<Vec<CoupledPair>, Fatal> {
        let mut out = Vec::new();
        for t in &self.targets {
            out.extend(analyze_coupling(&self.corpus.program, t, &self.cfg.coupling)?);
        }
        Ok(out)
    }

    fn test_class(&self, path: &Path) -> Result<TestClass, Fatal> {
        let src = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        parse_test_class(&self.corpus.program, &path.display().to_string(), &src).map_err(|d| {
            let lines: Vec<String> = d.iter().map(|x| x.to_string()).collect();
            lines.join("\n").into()
        })
    }
}

fn print_json<T: Serialize + ?Sized>(value: &T) {
    println!("{}", serde_json::to_string_pretty(value).expect("serializable"));
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct GeneratedRecord {
    target: String,
    candidate: String,
    attempt: usize,
    received: bool,
    executable: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct MutantRecord {
    target: String,
    candidate: String,
    id: String,
    operator: &'static str,
    method: String,
    line: u32,
    before: String,
    after: String,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct VerdictRecord {
    target: String,
    candidate: String,
    p: f64,
    per_mutant: Vec<MutantRate>,
    decision: mtcforge_core::validation::Decision,
    reason: String,
}

#[derive(Serialize)]
struct SkeletonComparison {
    generated: MRSkeleton,
    reference: MRSkeleton,
    #[serde(flatten)]
    result: SimilarityResult,
}

fn generate(common: &Common) -> Result<i32, Fatal> {
    let l = Loaded::new(common)?;
    let provider = l.cfg.provider.build()?;
    let gen = generation_config(&l.cfg);
    let mut records = Vec::new();
    let mut failed = false;
    for target in &l.targets {
        let dir = l.cfg.out.join(target_dir(&l.corpus.program, target));
        for pair in analyze_coupling(&l.corpus.program, target, &l.cfg.coupling)? {
            let candidates = generate_for_pair(&pair, &l.corpus, provider.as_ref(), &gen);
            failed |= !candidates.iter().any(|c| c.executable);
            for c in candidates {
                if let Some(t) = &c.test_class {
                    let adir = dir.join(pair.slug()).join(format!("attempt{}", c.attempt));
                    std::fs::create_dir_all(&adir)?;
                    std::fs::write(adir.join("candidate.mini"), print_test_class(t))?;
                }
                records.push(GeneratedRecord {
                    target: target.to_string(),
                    candidate: pair.candidate.to_string(),
                    attempt: c.attempt,
                    received: c.received_reply(),
                    executable: c.executable,
                    error: c.error.clone(),
                });
            }
        }
    }
    print_json(&records);
    Ok(if failed { 2 } else { 0 })
}

fn mutate(common: &Common, json: bool) -> Result<i32, Fatal> {
    let l = Loaded::new(common)?;
    let mut records = Vec::new();
    for pair in l.pairs()? {
        for m in generate_mutants(&l.corpus.program, &pair, l.cfg.mutant_cap, l.cfg.seed) {
            if json {
                records.push(MutantRecord {
                    target: pair.target.to_string(),
                    candidate: pair.candidate.to_string(),
                    id: m.id.clone(),
                    operator: operator_name(m.operator),
                    method: m.method.to_string(),
                    line: m.line,
                    before: m.diff_token.0.clone(),
                    after: m.diff_token.1.clone(),
                });
            } else {
                println!("# {} / {}", pair.target, pair.candidate);
                print!("{}", mutant_diff(&l.corpus.program, &m));
            }
        }
    }
    if json {
        print_json(&records);
    }
    Ok(0)
}

fn validate_cmd(common: &Common, test: &Path, candidate: Option<&str>) -> Result<i32, Fatal> {
    let l = Loaded::new(common)?;
    let test = l.test_class(test)?;
    let wanted: Option<Vec<MethodRef>> = candidate.map(|c| resolve_method_spec(&l.corpus.program, c)).transpose()?;
    let mut out = Vec::new();
    for pair in l.pairs()? {
        if wanted.as_ref().is_some_and(|w| !w.contains(&pair.candidate)) {
            continue;
        }
        let mutants = generate_mutants(&l.corpus.program, &pair, l.cfg.mutant_cap, l.cfg.seed);
        let v = validate(&test, &l.corpus.program, &mutants, &l.cfg.limits, l.cfg.workers);
        out.push(VerdictRecord {
            target: pair.target.to_string(),
            candidate: pair.candidate.to_string(),
            p: v.p,
            per_mutant: v.per_mutant,
            decision: v.decision,
            reason: v.reason,
        });
    }
    print_json(&out);
    Ok(0)
}

fn skeleton_compare(common: &Common, generated: &Path, reference: &Path) -> Result<i32, Fatal> {
    let l = Loaded::new(common)?;
    // Methods under test: the targets and everything they couple with.
    let mut methods: std::collections::BTreeSet<MethodRef> = l.targets.iter().cloned().collect();
    methods.extend(l.pairs()?.into_iter().map(|p| p.candidate));
    let skeleton = |path: &Path| -> Result<MRSkeleton, Fatal> {
        let t = l.test_class(path)?;
        extract_skeleton_with(&l.corpus.program, &t, &methods).map_err(|e| format!("{}: {e}", path.display()).into())
    };
    let (g, r) = (skeleton(generated)?, skeleton(reference)?);
    let result = compare(&g, &r);
    print_json(&SkeletonComparison { generated: g, reference: r, result });
    Ok(0)
}

fn run(common: &Common) -> Result<i32, Fatal> {
    let cfg = common.config()?;
    let corpus = Corpus::load(&cfg.corpus)?;
    let provider = cfg.provider.build()?;
    let outcome = run_pipeline_with(&cfg, &corpus, provider.as_ref())?;
    print!("{}", render_metrics(&outcome.report));
    for f in &outcome.report.failures {
        eprintln!("warning: no compiling candidate for {f}");
    }
    eprintln!("report: {}", outcome.report_path.display());
    Ok(outcome.exit_code())
}

fn report(path: &Path) -> Result<i32, Fatal> {
    let file = if path.is_dir() { path.join("report.json") } else { path.to_path_buf() };
    let text = std::fs::read_to_string(&file).map_err(|e| format!("cannot read {}: {e}", file.display()))?;
    let report: RunReport = serde_json::from_str(&text).map_err(|e| format!("{}: {e}", file.display()))?;
    print!("{}", render_metrics(&report));
    Ok(if report.failures.is_empty() { 0 } else { 2 })
}

fn dispatch(cli: Cli) -> Result<i32, Fatal> {
    match cli.command {
        Command::Analyze(c) => {
            let l = Loaded::new(&c)?;
            print_json(&l.pairs()?);
            Ok(0)
        }
        Command::Facts(c) => {
            let l = Loaded::new(&c)?;
            let all = extract_all_facts(&l.corpus.program, &l.cfg.coupling.facts);
            let keep_all = l.cfg.targets == Targets::default();
            let records: Vec<FactsRecord> =
                all.iter().filter(|f| keep_all || l.targets.contains(&f.method_ref)).map(FactsRecord::from).collect();
            print_json(&records);
            Ok(0)
        }
        Command::Generate(c) => generate(&c),
        Command::Mutate { common, json } => mutate(&common, json),
        Command::Validate { common, test, candidate } => validate_cmd(&common, &test, candidate.as_deref()),
        Command::SkeletonCompare { common, generated, reference } => skeleton_compare(&common, &generated, &reference),
        Command::Run(c) => run(&c),
        Command::Report { path, .. } => report(&path),
    }
}

fn main() -> ExitCode {
    tracing_subscriber::fmt()
        .with_env_filter(tracing_subscriber::EnvFilter::from_env("MTCFORGE_LOG"))
        .with_writer(std::io::stderr)
        .init();
    match dispatch(Cli::parse()) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
