use std::fs;
use std::io::Write;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::bsm::{
    self, BsmParams, BsmScorer, CachedEmbedder, Checkpoint, Embedder, PrimingExample, StepLoss,
};
use crate::error::{Error, Result};
use crate::eval::{
    self, metric_report, write_artifacts, BootstrapConfig, ClaimInput, EvalRecord, MetricReport,
    Outcome, PipelineOptions, PipelineOutput,
};
use crate::jsonl;
use crate::label::{Label, Thresholds};
use crate::llm::{FixtureTransport, HttpTransport, LlmClient, LlmEmbedder, LlmEndpointConfig, ResponseCache, Transport};
use crate::qbaf::Relation;
use crate::reward::service::{self, ServiceConfig};
use crate::reward::{AdvantageMode, RewardSpec};
use crate::scorer::{BaseScorer, ConstantScorer};

use super::{
    AdvantageArg, CacheAction, Cli, Command, DiagnoseArgs, EvaluateArgs, Phase, RunConfig,
    ScorerArgs, ScorerMode, ServeArgs, TargetSource, TrainArgs, VerifyArgs,
};

struct Context {
    cfg: RunConfig,
    fixtures: Option<Arc<FixtureTransport>>,
    cache: Option<Arc<ResponseCache>>,
}

impl Context {
    fn new(cfg: RunConfig) -> Result<Self> {
        let fixtures = match &cfg.fixtures {
            Some(dir) => Some(Arc::new(FixtureTransport::load(dir)?)),
            None => None,
        };
        let cache = match &cfg.cache_dir {
            Some(dir) => Some(Arc::new(ResponseCache::open(dir)?)),
            None => None,
        };
        Ok(Context {
            cfg,
            fixtures,
            cache,
        })
    }

    fn transport(&self, endpoint: &LlmEndpointConfig) -> Result<Arc<dyn Transport>> {
        match &self.fixtures {
            Some(f) => Ok(f.clone()),
            None => Ok(Arc::new(HttpTransport::new(endpoint.clone())?)),
        }
    }

    fn client(&self, endpoint: &LlmEndpointConfig) -> Result<LlmClient> {
        LlmClient::new(endpoint.clone(), self.transport(endpoint)?, self.cache.clone())
    }

    fn embedder(&self) -> Result<CachedEmbedder<LlmEmbedder>> {
        let e = &self.cfg.embedding;
        e.validate()?;
        Ok(CachedEmbedder::new(LlmEmbedder::new(e.model.clone(), self.transport(e)?)))
    }

    fn scorer(&self) -> Result<Box<dyn BaseScorer>> {
        Ok(match self.cfg.scorer {
            ScorerMode::Constant => Box::new(ConstantScorer::default()),
            ScorerMode::PromptedLlm => Box::new(self.client(&self.cfg.scoring)?),
            ScorerMode::TrainedBsm => {
                let path = self.cfg.checkpoint.as_ref().ok_or_else(|| {
                    Error::Config("scorer trained-bsm needs a checkpoint".into())
                })?;
                let params = Checkpoint::load(path)?.params()?;
                Box::new(BsmScorer::new(params, self.embedder()?))
            }
        })
    }
}

pub(super) fn run(cli: Cli) -> Result<ExitCode> {
    let g = &cli.global;
    let mut cfg = match &g.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(s) = g.seed {
        cfg.seed = s;
    }
    if let Some(d) = &g.cache_dir {
        cfg.cache_dir = Some(d.clone());
    }
    if let Some(d) = &g.fixtures {
        cfg.fixtures = Some(d.clone());
    }
    if let Some(p) = g.parallelism {
        cfg.parallelism = p;
    }
    cfg.training.seed = cfg.seed;

    match cli.command {
        Command::Verify(a) => verify(cfg, a),
        Command::TrainBsm(a) => train(cfg, a),
        Command::Evaluate(a) => evaluate(cfg, a),
        Command::Diagnose(a) => diagnose(cfg, a),
        Command::RewardServe(a) => serve(cfg, a),
        Command::Cache(a) => cache(cfg, a.action),
    }
}

/// Applies scorer flags and resolves the verdict thresholds.
fn apply_scorer_args(cfg: &mut RunConfig, a: &ScorerArgs) -> Result<Thresholds> {
    if let Some(m) = a.scorer {
        cfg.scorer = m;
    }
    if let Some(c) = &a.checkpoint {
        cfg.checkpoint = Some(c.clone());
    }
    cfg.validate()?;
    if !a.override_thresholds {
        if cfg.thresholds != super::ThresholdConfig::default() {
            tracing::warn!("config thresholds ignored without --override-thresholds");
        }
        return Ok(Thresholds::default());
    }
    let t = Thresholds::new(
        a.lower.unwrap_or(cfg.thresholds.lower),
        a.upper.unwrap_or(cfg.thresholds.upper),
    )?;
    if !t.is_default() {
        tracing::warn!(
            lower = t.lower,
            upper = t.upper,
            "verdict thresholds overridden; verdicts no longer follow the fixed 1/3, 2/3 map"
        );
    }
    Ok(t)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ClaimRow {
    #[serde(default)]
    id: Option<String>,
    claim: String,
    #[serde(default)]
    label: Option<Label>,
}

fn read_claim_inputs(path: &Path, require_label: bool) -> Result<Vec<ClaimInput>> {
    let rows: Vec<ClaimRow> = jsonl::read_checked(path, |r: &ClaimRow| {
        if r.claim.trim().is_empty() {
            Err("claim is empty".into())
        } else if require_label && r.label.is_none() {
            Err("missing gold label".into())
        } else {
            Ok(())
        }
    })?;
    Ok(rows
        .into_iter()
        .enumerate()
        .map(|(i, r)| ClaimInput {
            id: r.id.unwrap_or_else(|| format!("claim-{i:05}")),
            claim: r.claim,
            gold: r.label,
        })
        .collect())
}

#[derive(Serialize)]
struct RunSummary<'a> {
    seed: u64,
    scorer: ScorerMode,
    thresholds: Thresholds,
    n_claims: usize,
    n_succeeded: usize,
    n_failed: usize,
    failure_rate: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    metrics: Option<&'a MetricReport>,
}

fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    if let Some(dir) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

fn run_claims(
    ctx: &Context,
    claims: &[ClaimInput],
    thresholds: Thresholds,
    out_dir: &Path,
) -> Result<PipelineOutput> {
    let generator = ctx.client(&ctx.cfg.generation)?;
    let scorer = ctx.scorer()?;
    let opts = PipelineOptions {
        parallelism: ctx.cfg.parallelism,
        thresholds,
    };
    let out = eval::run_pipeline(claims, &generator, scorer.as_ref(), &opts)?;
    write_artifacts(out_dir, &out)?;
    for f in &out.failures {
        eprintln!("failed {}: {}", f.id, f.error);
    }
    Ok(out)
}

fn budget_exit(out: &PipelineOutput) -> ExitCode {
    if out.exceeds_failure_budget() {
        eprintln!(
            "{} of {} claims failed ({:.1}%), above the {:.0}% limit",
            out.failures.len(),
            out.total(),
            100.0 * out.failure_rate(),
            100.0 * eval::pipeline::MAX_FAILURE_RATE
        );
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}

fn verify(mut cfg: RunConfig, a: VerifyArgs) -> Result<ExitCode> {
    let thresholds = apply_scorer_args(&mut cfg, &a.scorer)?;
    let claims = match (&a.claim, &a.input) {
        (Some(c), _) => vec![ClaimInput {
            id: "claim-00000".into(),
            claim: c.clone(),
            gold: None,
        }],
        (None, Some(p)) => read_claim_inputs(p, false)?,
        (None, None) => return Err(Error::Config("pass --claim or --input".into())),
    };
    let ctx = Context::new(cfg)?;
    let out = run_claims(&ctx, &claims, thresholds, &a.out)?;
    let stdout = std::io::stdout();
    let mut w = stdout.lock();
    for r in out.records() {
        writeln!(w, "{}\t{:.6}\t{}", r.predicted, r.strength, r.claim)?;
    }
    write_json(
        &a.out.join("metrics.json"),
        &RunSummary {
            seed: ctx.cfg.seed,
            scorer: ctx.cfg.scorer,
            thresholds,
            n_claims: out.total(),
            n_succeeded: out.results.len(),
            n_failed: out.failures.len(),
            failure_rate: out.failure_rate(),
            metrics: None,
        },
    )?;
    Ok(budget_exit(&out))
}

fn evaluate(mut cfg: RunConfig, a: EvaluateArgs) -> Result<ExitCode> {
    let thresholds = apply_scorer_args(&mut cfg, &a.scorer)?;
    let ctx = Context::new(cfg)?;
    let (records, out) = match (&a.records, &a.input) {
        (Some(p), _) => (jsonl::read::<EvalRecord>(p)?, None),
        (None, Some(p)) => {
            let claims = read_claim_inputs(p, true)?;
            let out = run_claims(&ctx, &claims, thresholds, &a.out)?;
            (out.records(), Some(out))
        }
        (None, None) => return Err(Error::Config("pass --input or --records".into())),
    };
    let outcomes: Vec<Outcome> = records
        .iter()
        .map(|r| {
            r.gold
                .map(|gold| Outcome {
                    gold,
                    predicted: r.predicted,
                })
                .ok_or_else(|| Error::InvalidInput(format!("record {} has no gold label", r.id)))
        })
        .collect::<Result<_>>()?;
    let report = metric_report(
        &outcomes,
        BootstrapConfig {
            n_resamples: a.resamples,
            level: a.level,
            seed: ctx.cfg.seed,
        },
    )?;
    let n_failed = out.as_ref().map_or(0, |o| o.failures.len());
    write_json(
        &a.out.join("metrics.json"),
        &RunSummary {
            seed: ctx.cfg.seed,
            scorer: ctx.cfg.scorer,
            thresholds,
            n_claims: records.len() + n_failed,
            n_succeeded: records.len(),
            n_failed,
            failure_rate: out.as_ref().map_or(0.0, |o| o.failure_rate()),
            metrics: Some(&report),
        },
    )?;
    let show = |name: &str, i: &eval::Interval| {
        println!("{name}\t{:.4}\t[{:.4}, {:.4}]", i.point, i.low, i.high)
    };
    show("accuracy", &report.accuracy);
    show("balanced_accuracy", &report.balanced_accuracy);
    Ok(out.as_ref().map_or(ExitCode::SUCCESS, budget_exit))
}

fn diagnose(mut cfg: RunConfig, a: DiagnoseArgs) -> Result<ExitCode> {
    apply_scorer_args(&mut cfg, &a.scorer)?;
    let ctx = Context::new(cfg)?;
    let scorer = ctx.scorer()?;
    let mut report = serde_json::Map::new();
    report.insert("seed".into(), json!(ctx.cfg.seed));
    report.insert("scorer".into(), json!(ctx.cfg.scorer));
    if let Some(p) = &a.paraphrases {
        let groups = bsm::data::load_paraphrase_groups(p)?;
        let v = eval::inconsistency(&groups, scorer.as_ref())?;
        println!("inconsistency\t{v:.6}");
        report.insert("n_groups".into(), json!(groups.len()));
        report.insert("inconsistency".into(), json!(v));
    }
    if let Some(p) = &a.ranked {
        let sets = bsm::data::load_ranked_sets(p)?;
        let v = eval::ranking_agreement(&sets, scorer.as_ref())?;
        println!("ranking_agreement\t{v:.6}");
        report.insert("n_sets".into(), json!(sets.len()));
        report.insert("ranking_agreement".into(), json!(v));
    }
    write_json(&a.out, &report)?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PrimingRow {
    claim: String,
    argument: String,
    relation: Relation,
    #[serde(default)]
    target: Option<f64>,
}

fn write_loss_csv(path: &Path, trace: &[StepLoss]) -> Result<()> {
    let mut w = std::io::BufWriter::new(fs::File::create(path)?);
    writeln!(w, "step,semantic,ranking,consistency,total")?;
    let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    for s in trace {
        writeln!(
            w,
            "{},{},{},{},{}",
            s.step,
            s.semantic,
            opt(s.ranking),
            opt(s.consistency),
            s.total
        )?;
    }
    w.flush()?;
    Ok(())
}

fn loss_csv_path(out: &Path) -> PathBuf {
    out.with_extension("loss.csv")
}

fn partial_path(out: &Path) -> PathBuf {
    out.with_extension("partial.json")
}

fn train(cfg: RunConfig, a: TrainArgs) -> Result<ExitCode> {
    let mut tcfg = cfg.training.clone();
    if let Some(v) = a.learning_rate {
        tcfg.learning_rate = v;
    }
    if let Some(v) = a.lambda_rank {
        tcfg.lambda_rank = v;
    }
    if let Some(v) = a.lambda_con {
        tcfg.lambda_con = v;
    }
    tcfg.validate()?;
    let ctx = Context::new(cfg)?;
    let embedder = ctx.embedder()?;
    let par = ctx.cfg.parallelism;

    let (params, trace) = match a.phase {
        Phase::Prime => {
            let path = a
                .priming
                .as_ref()
                .ok_or_else(|| Error::Config("--phase prime needs --priming".into()))?;
            let examples = load_priming(&ctx, path, a.targets)?;
            let prompts = examples
                .iter()
                .map(|e| bsm::build_score_prompt(&e.claim, &e.argument, e.relation).map(|p| p.into_string()))
                .collect::<Result<Vec<_>>>()?;
            embedder.prefetch(&prompts, par)?;
            let head = match &a.checkpoint {
                Some(p) => Checkpoint::load(p)?.params()?,
                None => BsmParams::init(embedder.embed(&prompts[0])?.dim(), tcfg.seed),
            };
            let out = bsm::prime(&head, &examples, &embedder, &tcfg)?;
            (out.params, out.trace)
        }
        Phase::Full => {
            let path = a
                .debates
                .as_ref()
                .ok_or_else(|| Error::Config("--phase full needs --debates".into()))?;
            let debates = bsm::data::load_debates(path)?;
            let ranked = match &a.ranked {
                Some(p) => bsm::data::load_ranked_sets(p)?,
                None => Vec::new(),
            };
            let paraphrases = match &a.paraphrases {
                Some(p) => bsm::data::load_paraphrase_groups(p)?,
                None => Vec::new(),
            };
            let mut prompts = Vec::new();
            for d in &debates {
                for s in &d.supports {
                    prompts.push(bsm::build_score_prompt(&d.claim, s, Relation::Support)?.into_string());
                }
                for t in &d.attacks {
                    prompts.push(bsm::build_score_prompt(&d.claim, t, Relation::Attack)?.into_string());
                }
            }
            for r in &ranked {
                for m in &r.members {
                    prompts.push(bsm::build_score_prompt(&r.claim, m, r.relation)?.into_string());
                }
            }
            for g in &paraphrases {
                for m in &g.members {
                    prompts.push(bsm::build_score_prompt(&g.claim, m, g.relation)?.into_string());
                }
            }
            if let Err(e) = embedder.prefetch(&prompts, par) {
                tracing::warn!("embedding prefetch incomplete: {e}");
            }
            let result = if let Some(p) = &a.resume {
                let state = Checkpoint::load(p)?.train_state()?.ok_or_else(|| {
                    Error::Config(format!("{} holds no resumable state", p.display()))
                })?;
                bsm::train_phase2_resume(state, &debates, &ranked, &paraphrases, &embedder, &tcfg)
            } else {
                let head = match (&a.checkpoint, a.from_scratch) {
                    (Some(p), _) => Checkpoint::load(p)?.params()?,
                    (None, true) => {
                        let first = prompts.first().ok_or_else(|| {
                            Error::InvalidInput("debates contain no arguments".into())
                        })?;
                        BsmParams::init(embedder.embed(first)?.dim(), tcfg.seed)
                    }
                    (None, false) => {
                        return Err(Error::Config(
                            "--phase full needs a primed --checkpoint unless --from-scratch is given"
                                .into(),
                        ))
                    }
                };
                bsm::train_phase2(&head, &debates, &ranked, &paraphrases, &embedder, &tcfg)
            };
            match result {
                Ok(out) => (out.params, out.trace),
                Err(Error::Interrupted {
                    completed_steps,
                    checkpoint,
                    source,
                }) => {
                    let partial = partial_path(&a.out);
                    Checkpoint::from_state(&checkpoint, &tcfg).save(&partial)?;
                    eprintln!(
                        "saved resumable state after {completed_steps} steps to {}; rerun with --resume {}",
                        partial.display(),
                        partial.display()
                    );
                    return Err(Error::Interrupted {
                        completed_steps,
                        checkpoint,
                        source,
                    });
                }
                Err(e) => return Err(e),
            }
        }
    };
    Checkpoint::new(&params, &tcfg).save(&a.out)?;
    let csv = loss_csv_path(&a.out);
    write_loss_csv(&csv, &trace)?;
    let last = trace.last().map_or(f64::NAN, |s| s.total);
    println!(
        "wrote {} ({} steps, final loss {last:.6}); trace in {}",
        a.out.display(),
        trace.len(),
        csv.display()
    );
    Ok(ExitCode::SUCCESS)
}

fn load_priming(ctx: &Context, path: &Path, source: TargetSource) -> Result<Vec<PrimingExample>> {
    let rows: Vec<PrimingRow> = jsonl::read_checked(path, |r: &PrimingRow| {
        if source == TargetSource::File && r.target.is_none() {
            Err("missing target (use --targets llm to score with the model)".into())
        } else {
            Ok(())
        }
    })?;
    let client = match source {
        TargetSource::Llm => Some(ctx.client(&ctx.cfg.scoring)?),
        TargetSource::File => None,
    };
    rows.into_iter()
        .enumerate()
        .map(|(i, r)| {
            let target = match (&client, r.target) {
                (Some(c), _) => c.prompt_base_score(&r.claim, &r.argument, r.relation)?,
                (None, Some(t)) => t,
                (None, None) => unreachable!("checked while reading"),
            };
            let ex = PrimingExample {
                claim: r.claim,
                argument: r.argument,
                relation: r.relation,
                target,
            };
            ex.check().map_err(|message| Error::Data {
                path: path.to_path_buf(),
                line: i + 1,
                message,
            })?;
            Ok(ex)
        })
        .collect()
}

fn serve(cfg: RunConfig, a: ServeArgs) -> Result<ExitCode> {
    let spec = RewardSpec::new(a.delta.unwrap_or(cfg.delta))?;
    let svc = ServiceConfig {
        default_spec: spec,
        advantage_mode: match a.advantages {
            AdvantageArg::Normalized => AdvantageMode::Normalized,
            AdvantageArg::MeanOnly => AdvantageMode::MeanOnly,
        },
        ..ServiceConfig::default()
    };
    let addr = SocketAddr::new(a.bind, a.port);
    let rt = tokio::runtime::Builder::new_multi_thread()
        .enable_all()
        .build()?;
    rt.block_on(async move {
        let listener = service::bind(addr).await?;
        eprintln!("reward service listening on http://{}", listener.local_addr()?);
        service::serve(listener, svc, async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
    })?;
    Ok(ExitCode::SUCCESS)
}

fn cache(cfg: RunConfig, action: CacheAction) -> Result<ExitCode> {
    let dir = cfg
        .cache_dir
        .ok_or_else(|| Error::Config("no cache directory (pass --cache-dir or set cache_dir)".into()))?;
    let c = ResponseCache::open(dir)?;
    match action {
        CacheAction::Inspect => {
            let s = c.stats()?;
            println!("directory\t{}", c.dir().display());
            println!("entries\t{}", s.entries);
            println!("bytes\t{}", s.bytes);
        }
        CacheAction::Clear => println!("removed {} entries", c.clear()?),
    }
    Ok(ExitCode::SUCCESS)
}
