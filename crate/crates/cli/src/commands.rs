use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use anyhow::{anyhow, Context};

use relseq_core::corpus::{corpus_to_string, parse_corpus_str, validate};
use relseq_core::engine::{apply_sequence, read_rules_str, rules_to_string};
use relseq_core::error::{CorpusError, LexiconError, RuleFileError};
use relseq_core::eval::{score, LabelMerge};
use relseq_core::{AnnotatedCorpus, LexiconBundle, RelationLabel, TrainingConfig};

use crate::manifest::{sha256_hex, RunManifest};
use crate::{ApplyArgs, EvalArgs, InspectArgs, TrainArgs};

const EXIT_VALIDATION: u8 = 1;
const EXIT_IO: u8 = 2;

/// An error plus the process exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub error: anyhow::Error,
}

impl Failure {
    pub fn validation(error: anyhow::Error) -> Self {
        Failure {
            code: EXIT_VALIDATION,
            error,
        }
    }

    pub fn io(error: anyhow::Error) -> Self {
        Failure { code: EXIT_IO, error }
    }
}

fn read(path: &Path) -> Result<Vec<u8>, Failure> {
    fs::read(path).map_err(|e| Failure::io(anyhow!(e).context(format!("reading {}", path.display()))))
}

fn read_text(path: &Path) -> Result<String, Failure> {
    String::from_utf8(read(path)?)
        .map_err(|e| Failure::validation(anyhow!(e).context(format!("{} is not UTF-8", path.display()))))
}

fn write(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    fs::write(path, bytes).map_err(|e| Failure::io(anyhow!(e).context(format!("writing {}", path.display()))))
}

fn load_corpus(path: &Path) -> Result<AnnotatedCorpus, Failure> {
    let text = read_text(path)?;
    let parsed = parse_corpus_str(&text).map_err(|e| {
        let code = if matches!(e, CorpusError::Io(_)) { EXIT_IO } else { EXIT_VALIDATION };
        Failure {
            code,
            error: anyhow!(e).context(format!("in {}", path.display())),
        }
    })?;
    for w in &parsed.warnings {
        log::warn!("{}: {}", path.display(), w);
    }
    Ok(parsed.corpus)
}

fn load_lexicons(dir: Option<&Path>) -> Result<LexiconBundle, Failure> {
    let Some(dir) = dir else {
        return Ok(LexiconBundle::empty());
    };
    if !dir.is_dir() {
        log::warn!("lexicon directory {} not found; using empty lexicons", dir.display());
    }
    LexiconBundle::load_dir(dir).map_err(|e| match e {
        LexiconError::Io { .. } => Failure::io(anyhow!(e)),
        LexiconError::Malformed { .. } => Failure::validation(anyhow!(e)),
    })
}

fn load_rules(path: &Path) -> Result<relseq_core::RuleSequence, Failure> {
    let text = read_text(path)?;
    read_rules_str(&text).map_err(|e| {
        let code = if matches!(e, RuleFileError::Io(_)) { EXIT_IO } else { EXIT_VALIDATION };
        Failure {
            code,
            error: anyhow!(e).context(format!("in {}", path.display())),
        }
    })
}

fn with_suffix(path: &Path, suffix: &str) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn training_config(args: &TrainArgs) -> Result<TrainingConfig, Failure> {
    let mut cfg = match &args.config {
        Some(p) => TrainingConfig::parse(&read_text(p)?)
            .map_err(|e| Failure::validation(anyhow!(e).context(format!("in {}", p.display()))))?,
        None => TrainingConfig::default(),
    };
    if let Some(t) = args.threshold {
        cfg.gain_threshold = t;
    }
    if let Some(d) = args.max_distance {
        cfg.max_distance = d;
    }
    if let Some(c) = args.max_conditions {
        cfg.max_conditions = c;
    }
    cfg.check().map_err(|e| Failure::validation(anyhow!(e)))?;
    Ok(cfg)
}

/// Hashes every regular file directly inside `dir`, by name.
fn digest_dir(dir: &Path, into: &mut BTreeMap<String, String>) -> Result<(), Failure> {
    let Ok(entries) = fs::read_dir(dir) else {
        return Ok(());
    };
    let mut paths: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file())
        .collect();
    paths.sort();
    for p in paths {
        into.insert(p.display().to_string(), sha256_hex(&read(&p)?));
    }
    Ok(())
}

pub fn train(args: &TrainArgs) -> Result<(), Failure> {
    let started = Instant::now();
    let started_unix_secs = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let cfg = training_config(args)?;
    let corpus_bytes = read(&args.corpus)?;
    let corpus = load_corpus(&args.corpus)?;
    let lex = load_lexicons(args.lexicons.as_deref())?;

    let outcome = relseq_core::learner::train(&corpus, &cfg, &lex);
    let rules = rules_to_string(&outcome.sequence);
    write(&args.out, rules.as_bytes())?;

    let (m0, s0) = relseq_core::learner::tally(&corpus, &corpus.initial_sets());
    let gold: usize = corpus.sentences.iter().map(|a| a.gold.len()).sum();
    let mut log = String::new();
    let _ = writeln!(log, "sentences={} gold={}", corpus.len(), gold);
    let _ = writeln!(log, "iter=0 matches={} spurious={}", m0, s0);
    for step in &outcome.steps {
        let _ = writeln!(log, "{}", step);
    }
    write(&with_suffix(&args.out, ".log"), log.as_bytes())?;

    let mut inputs = BTreeMap::new();
    inputs.insert(args.corpus.display().to_string(), sha256_hex(&corpus_bytes));
    if let Some(p) = &args.config {
        inputs.insert(p.display().to_string(), sha256_hex(&read(p)?));
    }
    if let Some(dir) = &args.lexicons {
        digest_dir(dir, &mut inputs)?;
    }
    let manifest = RunManifest {
        tool_version: env!("CARGO_PKG_VERSION"),
        config: cfg,
        inputs,
        rules_sha256: sha256_hex(rules.as_bytes()),
        rules: outcome.sequence.len(),
        started_unix_secs,
        duration_secs: started.elapsed().as_secs_f64(),
    };
    let json = serde_json::to_string_pretty(&manifest).context("serializing manifest").map_err(Failure::io)?;
    write(&with_suffix(&args.out, ".manifest.json"), format!("{}\n", json).as_bytes())?;
    log::info!("learned {} rules", outcome.sequence.len());
    Ok(())
}

pub fn apply(args: &ApplyArgs) -> Result<(), Failure> {
    let seq = load_rules(&args.rules)?;
    let mut corpus = load_corpus(&args.corpus)?;
    let lex = load_lexicons(args.lexicons.as_deref())?;
    let predicted = apply_sequence(&seq, &corpus, &lex);
    for (a, p) in corpus.sentences.iter_mut().zip(predicted) {
        a.initial = p;
    }
    write(&args.out, corpus_to_string(&corpus).as_bytes())
}

fn check_shapes(predicted: &AnnotatedCorpus, gold: &AnnotatedCorpus) -> Result<(), Failure> {
    if predicted.len() != gold.len() {
        return Err(Failure::validation(anyhow!(
            "predicted corpus has {} sentences, gold has {}",
            predicted.len(),
            gold.len()
        )));
    }
    for (i, (p, g)) in predicted.sentences.iter().zip(&gold.sentences).enumerate() {
        if p.sentence.groups.len() != g.sentence.groups.len() {
            return Err(Failure::validation(anyhow!(
                "sentence {}: predicted has {} groups, gold has {}",
                i,
                p.sentence.groups.len(),
                g.sentence.groups.len()
            )));
        }
    }
    Ok(())
}

pub fn eval(args: &EvalArgs) -> Result<(), Failure> {
    let predicted = load_corpus(&args.predicted)?;
    let gold = load_corpus(&args.gold)?;
    check_shapes(&predicted, &gold)?;
    let merge = if args.merge_combined {
        LabelMerge::combined()
    } else if args.merge_mod {
        LabelMerge::modifiers()
    } else {
        LabelMerge::identity()
    };
    let e = score(&predicted.initial_sets(), &gold.gold_sets(), &merge).map_err(|e| Failure::validation(anyhow!(e)))?;
    print(&e.to_string())
}

fn print(text: &str) -> Result<(), Failure> {
    let mut out = BufWriter::new(std::io::stdout().lock());
    out.write_all(text.as_bytes())
        .and_then(|_| out.flush())
        .map_err(|e| Failure::io(anyhow!(e)))
}

pub fn inspect(args: &InspectArgs) -> Result<(), Failure> {
    if args.rules.is_none() && args.corpus.is_none() {
        return Err(Failure::validation(anyhow!("nothing to inspect: pass --rules and/or --corpus")));
    }
    let mut out = String::new();
    if let Some(p) = &args.rules {
        let seq = load_rules(p)?;
        let _ = writeln!(out, "rules: {}", seq.len());
        for (i, e) in seq.entries.iter().enumerate() {
            match &e.comment {
                Some(c) => {
                    let _ = writeln!(out, "{:>4}  {}  # {}", i + 1, e.rule, c);
                }
                None => {
                    let _ = writeln!(out, "{:>4}  {}", i + 1, e.rule);
                }
            }
        }
    }
    if let Some(p) = &args.corpus {
        let text = read_text(p)?;
        let parsed = parse_corpus_str(&text).map_err(|e| Failure::validation(anyhow!(e)))?;
        let c = &parsed.corpus;
        let groups: usize = c.sentences.iter().map(|a| a.sentence.groups.len()).sum();
        let lexemes: usize = c.sentences.iter().map(|a| a.sentence.lexemes.len()).sum();
        let _ = writeln!(out, "sentences: {}", c.len());
        let _ = writeln!(out, "groups: {}", groups);
        let _ = writeln!(out, "lexemes: {}", lexemes);
        let mut by_label: BTreeMap<RelationLabel, (usize, usize)> = BTreeMap::new();
        for a in &c.sentences {
            for r in &a.gold {
                by_label.entry(r.label).or_default().0 += 1;
            }
            for r in &a.initial {
                by_label.entry(r.label).or_default().1 += 1;
            }
        }
        let _ = writeln!(out, "{:<12} {:>6} {:>8}", "label", "gold", "initial");
        for (l, (g, i)) in by_label {
            let _ = writeln!(out, "{:<12} {:>6} {:>8}", l.as_str(), g, i);
        }
        let diagnostics: Vec<String> = parsed
            .warnings
            .iter()
            .chain(validate(c).iter())
            .map(|d| d.to_string())
            .collect();
        let _ = writeln!(out, "diagnostics: {}", diagnostics.len());
        for d in diagnostics {
            let _ = writeln!(out, "  {}", d);
        }
    }
    print(&out)
}
