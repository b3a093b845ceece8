use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use log::{info, warn};
use rayon::prelude::*;

use leamr_core::alignment::{alignments_to_json, read_alignments};
use leamr_core::amr::read_corpus;
use leamr_core::corpus::{join_corpus, load_corpus, Instance};
use leamr_core::eval::mismatched_ids;
use leamr_core::sentence::load_annotations;
use leamr_core::{
    align_instance, evaluate, load_model, rules_only, save_model, train, AlignmentSet, AmrGraph, Error, Hyperparams,
    Layer, MweLexicon, Phase, TrainConfig,
};

mod render;

#[derive(Parser)]
#[command(name = "leamr", version, about = "Align AMR graphs to sentence spans")]
struct Cli {
    /// More log output (-v info, -vv debug).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    /// Worker threads; defaults to all cores.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Train alignment models with hard EM.
    Train(TrainArgs),
    /// Align a corpus with a trained model or with rules alone.
    Align(AlignArgs),
    /// Score predicted alignments against gold alignments.
    Eval(EvalArgs),
    /// Print alignments in readable form.
    Inspect(InspectArgs),
}

#[derive(Args)]
struct CorpusArgs {
    /// AMR corpus in PENMAN notation.
    #[arg(long)]
    amr: PathBuf,
    /// Annotation sidecar (JSON lines).
    #[arg(long)]
    anno: PathBuf,
}

#[derive(Args)]
struct TrainArgs {
    #[command(flatten)]
    corpus: CorpusArgs,
    /// Where to write the model.
    #[arg(long)]
    out: PathBuf,
    /// Comma-separated phases to train: subgraph, relation, reentrancy.
    #[arg(long, value_delimiter = ',')]
    phases: Option<Vec<Phase>>,
    #[arg(long)]
    lambda_dup: Option<f64>,
    #[arg(long)]
    lambda_backoff: Option<f64>,
    #[arg(long, default_value_t = 10)]
    max_iter: usize,
    /// Drop the distance terms from every score.
    #[arg(long)]
    no_distance: bool,
    /// Also write the final training alignments here.
    #[arg(long)]
    alignments: Option<PathBuf>,
}

#[derive(Args)]
struct AlignArgs {
    #[command(flatten)]
    corpus: CorpusArgs,
    #[arg(long, required_unless_present = "rules_only")]
    model: Option<PathBuf>,
    /// Emit only the rule pre-alignments.
    #[arg(long, conflicts_with = "model")]
    rules_only: bool,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long)]
    gold: PathBuf,
    #[arg(long)]
    pred: PathBuf,
    /// AMR corpus; enables the coverage column.
    #[arg(long)]
    amr: Option<PathBuf>,
    /// Layers to report; all when omitted.
    #[arg(long, value_delimiter = ',')]
    layer: Option<Vec<Layer>>,
    /// Add per-type relation and reentrancy rows.
    #[arg(long)]
    breakdown: bool,
    /// Write the JSON report here; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct InspectArgs {
    #[arg(long)]
    anno: PathBuf,
    /// Alignment file to render.
    #[arg(long, alias = "pred")]
    alignments: PathBuf,
    /// AMR corpus; adds concepts to node names.
    #[arg(long)]
    amr: Option<PathBuf>,
    /// Only this sentence.
    #[arg(long)]
    id: Option<String>,
}

/// Failures mapped to exit codes.
enum Failure {
    Mismatch(String),
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e.to_string())
    }
}

fn lexicon_for(graphs: &[AmrGraph]) -> Result<MweLexicon, Failure> {
    let mut lex = MweLexicon::from_env()?;
    lex.extend(&MweLexicon::harvest(graphs));
    Ok(lex)
}

fn read_corpus_with(args: &CorpusArgs, lexicon: Option<MweLexicon>) -> Result<(Vec<Instance>, MweLexicon), Failure> {
    let graphs = read_corpus(&args.amr)?;
    let sentences = load_annotations(&args.anno)?;
    let lex = match lexicon {
        Some(l) => l,
        None => lexicon_for(&graphs)?,
    };
    let joined = join_corpus(graphs, sentences, &lex);
    if !joined.missing.is_empty() {
        warn!(
            "skipping {} graph(s) without annotations: {}",
            joined.missing.len(),
            joined.missing.join(", ")
        );
    }
    Ok((joined.instances, lex))
}

fn write_output(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Input(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_train(args: TrainArgs) -> Result<(), Failure> {
    let graphs = read_corpus(&args.corpus.amr)?;
    let lex = lexicon_for(&graphs)?;
    let corpus = load_corpus(&args.corpus.amr, &args.corpus.anno, &lex)?;
    let mut hyper = Hyperparams::default();
    if let Some(v) = args.lambda_dup {
        hyper.lambda_dup = v;
    }
    if let Some(v) = args.lambda_backoff {
        hyper.lambda_backoff = v;
    }
    hyper.use_distance = !args.no_distance;
    let config = TrainConfig {
        hyperparams: hyper,
        max_iterations: args.max_iter,
        phases: args.phases.unwrap_or_else(|| Phase::ALL.to_vec()),
    };
    let start = Instant::now();
    let outcome = train(&corpus, &config)?;
    for entry in &outcome.log {
        eprintln!(
            "{} iteration {}: changed {} sentences, log-score {:.4}",
            entry.phase, entry.iteration, entry.changed, entry.log_score
        );
    }
    let mut params = outcome.params;
    params.lexicon = lex.entries().map(str::to_string).collect();
    save_model(&params, &args.out)?;
    info!("trained on {} sentences in {:.2?}", corpus.len(), start.elapsed());
    if let Some(path) = args.alignments {
        let sets: Vec<AlignmentSet> = corpus
            .iter()
            .zip(&outcome.states)
            .map(|(inst, st)| st.to_alignment_set(inst))
            .collect();
        write_output(Some(&path), &alignments_to_json(&sets))?;
    }
    Ok(())
}

fn cmd_align(args: AlignArgs) -> Result<(), Failure> {
    let sets: Vec<AlignmentSet> = match &args.model {
        Some(model_path) => {
            let params = load_model(model_path)?;
            let lex = (!params.lexicon.is_empty()).then(|| MweLexicon::from_text(&params.lexicon.join("\n")));
            let (corpus, _) = read_corpus_with(&args.corpus, lex)?;
            corpus
                .par_iter()
                .map(|inst| align_instance(inst, &params).to_alignment_set(inst))
                .collect()
        }
        None => {
            let (corpus, _) = read_corpus_with(&args.corpus, None)?;
            corpus
                .par_iter()
                .map(|inst| rules_only(inst).to_alignment_set(inst))
                .collect()
        }
    };
    write_output(args.out.as_deref(), &alignments_to_json(&sets))
}

fn cmd_eval(args: EvalArgs) -> Result<(), Failure> {
    let gold = read_alignments(&args.gold)?;
    let pred = read_alignments(&args.pred)?;
    let mismatched = mismatched_ids(&gold, &pred);
    let keep = |sets: Vec<AlignmentSet>| -> Vec<AlignmentSet> {
        sets.into_iter().filter(|s| !mismatched.contains(&s.id)).collect()
    };
    let (gold, pred) = (keep(gold), keep(pred));
    let graphs = args.amr.as_ref().map(read_corpus).transpose()?;
    let layers = args.layer.unwrap_or_else(|| Layer::ALL.to_vec());
    let report = evaluate(&gold, &pred, graphs.as_deref(), &layers, args.breakdown)?;
    print!("{report}");
    let mut json = serde_json::to_string_pretty(&report).expect("report serializes");
    json.push('\n');
    match &args.out {
        Some(_) => write_output(args.out.as_deref(), &json)?,
        None => println!("{json}"),
    }
    if mismatched.is_empty() {
        Ok(())
    } else {
        Err(Failure::Mismatch(format!(
            "ids present in only one file: {}",
            mismatched.join(", ")
        )))
    }
}

fn cmd_inspect(args: InspectArgs) -> Result<(), Failure> {
    let sets = read_alignments(&args.alignments)?;
    let sentences: BTreeMap<String, _> = load_annotations(&args.anno)?
        .into_iter()
        .map(|s| (s.id.clone(), s))
        .collect();
    let graphs: BTreeMap<String, AmrGraph> = match &args.amr {
        Some(p) => read_corpus(p)?.into_iter().map(|g| (g.id().to_string(), g)).collect(),
        None => BTreeMap::new(),
    };
    let mut out = String::new();
    for set in &sets {
        if args.id.as_ref().is_some_and(|id| id != &set.id) {
            continue;
        }
        let Some(sent) = sentences.get(&set.id) else {
            warn!("no annotations for `{}`", set.id);
            continue;
        };
        out.push_str(&render::render(set, sent, graphs.get(&set.id)));
        out.push('\n');
    }
    write_output(None, &out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    if let Some(n) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: cannot set up {n} worker threads: {e}");
            return ExitCode::from(2);
        }
    }
    let result = match cli.command {
        Command::Train(a) => cmd_train(a),
        Command::Align(a) => cmd_align(a),
        Command::Eval(a) => cmd_eval(a),
        Command::Inspect(a) => cmd_inspect(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Mismatch(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
