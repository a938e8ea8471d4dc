//! Greedy error-driven induction of rule sequences.
//!
//! Each iteration picks the rule with the highest net gain on the current
//! labeling (gold triples gained plus spurious triples removed, minus
//! spurious triples introduced and gold triples lost), preferring fewer
//! conditions and then the canonical rule order on ties. Training stops when
//! the best gain falls below the configured threshold.
//!
//! Scores are cached per action partition. Applying a rule can only change
//! the scores of rules with the same label and offset, so only those
//! partitions are searched again.

mod config;
mod search;

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;

use crate::corpus::{AnnotatedCorpus, RelationSet};
use crate::engine::{ActionMode, Rule, RuleSequence, SequenceMeta};
use crate::lexicon::LexiconBundle;

pub use config::{TrainingConfig, DEFAULT_DETERMINERS};
use search::{FeatureTable, PartitionBest, PartitionKey, PartitionSearch};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidateScore {
    pub rule: Rule,
    /// Gold triples newly produced.
    pub gained: usize,
    /// Non-gold triples newly produced.
    pub spurious: usize,
    /// Gold triples removed.
    pub lost: usize,
    /// Non-gold triples removed.
    pub unspurious: usize,
    pub net: i64,
}

impl CandidateScore {
    fn from_counts(rule: Rule, gained: usize, spurious: usize, lost: usize, unspurious: usize) -> Self {
        let net = (gained + unspurious) as i64 - (spurious + lost) as i64;
        CandidateScore {
            rule,
            gained,
            spurious,
            lost,
            unspurious,
            net,
        }
    }

    fn from_partition(best: PartitionBest) -> Self {
        let (good, bad) = (best.good, best.bad);
        match best.rule.action.mode {
            ActionMode::Attach => CandidateScore::from_counts(best.rule, good, bad, 0, 0),
            ActionMode::Unattach => CandidateScore::from_counts(best.rule, 0, 0, bad, good),
        }
    }

    /// Selection order: higher net, then fewer conditions, then canonical
    /// rule order.
    pub fn beats(&self, other: &CandidateScore) -> bool {
        self.net > other.net
            || (self.net == other.net
                && (self.rule.conditions().len(), &self.rule)
                    < (other.rule.conditions().len(), &other.rule))
    }
}

/// Scores `rule` against the current labeling by applying it and comparing
/// the changed triples with gold.
pub fn net_gain(
    rule: &Rule,
    corpus: &AnnotatedCorpus,
    state: &[RelationSet],
    lex: &LexiconBundle,
) -> CandidateScore {
    let (mut gained, mut spurious, mut lost, mut unspurious) = (0, 0, 0, 0);
    for (annotated, current) in corpus.sentences.iter().zip(state) {
        for anchor in rule.matching_anchors(&annotated.sentence, lex) {
            let Some(t) = rule.action.triple(anchor) else {
                continue;
            };
            let wanted = annotated.gold.contains(&t);
            match (rule.action.mode, current.contains(&t), wanted) {
                (ActionMode::Attach, false, true) => gained += 1,
                (ActionMode::Attach, false, false) => spurious += 1,
                (ActionMode::Unattach, true, true) => lost += 1,
                (ActionMode::Unattach, true, false) => unspurious += 1,
                _ => {}
            }
        }
    }
    CandidateScore::from_counts(rule.clone(), gained, spurious, lost, unspurious)
}

/// Gold triples matched and spurious triples present in `state`.
pub fn tally(corpus: &AnnotatedCorpus, state: &[RelationSet]) -> (usize, usize) {
    corpus
        .sentences
        .iter()
        .zip(state)
        .fold((0, 0), |(m, s), (a, cur)| {
            let hit = cur.intersection_len(&a.gold);
            (m + hit, s + cur.len() - hit)
        })
}

/// Every grounded candidate rule for the current labeling, in canonical order.
pub fn generate_candidates(
    corpus: &AnnotatedCorpus,
    state: &[RelationSet],
    cfg: &TrainingConfig,
    lex: &LexiconBundle,
) -> Vec<Rule> {
    let table = FeatureTable::build(corpus, cfg, lex);
    let mut out: Vec<Rule> = PartitionKey::all(cfg.max_distance)
        .into_iter()
        .filter_map(|key| PartitionSearch::new(key, corpus, state, &table, cfg))
        .flat_map(|p| p.enumerate())
        .collect();
    out.sort();
    out
}

/// One selected rule with the labeling totals after applying it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrainingStep {
    pub iteration: usize,
    pub score: CandidateScore,
    pub matches: usize,
    pub spurious: usize,
}

impl fmt::Display for TrainingStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "iter={} rule={} net={} matches={} spurious={}",
            self.iteration, self.score.rule, self.score.net, self.matches, self.spurious
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrainingOutcome {
    pub sequence: RuleSequence,
    pub steps: Vec<TrainingStep>,
    /// Labeling after the last selected rule.
    pub final_state: Vec<RelationSet>,
}

/// How partition scores are refreshed after each selection.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Rescoring {
    /// Re-search only partitions sharing the selected rule's label and offset.
    #[default]
    Incremental,
    /// Re-search every partition each iteration.
    Full,
}

/// Trains a rule sequence starting from each sentence's initial labeling
/// (empty unless the corpus supplies one).
pub fn train(corpus: &AnnotatedCorpus, cfg: &TrainingConfig, lex: &LexiconBundle) -> TrainingOutcome {
    train_with(corpus, cfg, lex, Rescoring::Incremental)
}

/// Trains to correct a supplied initial labeling, e.g. another system's
/// output. Error sites are computed against that labeling.
pub fn train_from_initial(
    corpus: &AnnotatedCorpus,
    cfg: &TrainingConfig,
    lex: &LexiconBundle,
) -> TrainingOutcome {
    train_with(corpus, cfg, lex, Rescoring::Incremental)
}

pub fn train_with(
    corpus: &AnnotatedCorpus,
    cfg: &TrainingConfig,
    lex: &LexiconBundle,
    rescoring: Rescoring,
) -> TrainingOutcome {
    let mut state = corpus.initial_sets();
    let mut sequence = RuleSequence {
        meta: SequenceMeta {
            config: Some(cfg.clone()),
            ..SequenceMeta::default()
        },
        entries: Vec::new(),
    };
    let mut steps = Vec::new();
    if corpus.is_empty() {
        return TrainingOutcome {
            sequence,
            steps,
            final_state: state,
        };
    }

    let table = FeatureTable::build(corpus, cfg, lex);
    let keys = PartitionKey::all(cfg.max_distance);
    let score_partitions = |keys: &[PartitionKey], state: &[RelationSet]| -> Vec<(PartitionKey, Option<CandidateScore>)> {
        keys.par_iter()
            .map(|&key| {
                let best = PartitionSearch::new(key, corpus, state, &table, cfg)
                    .map(|p| CandidateScore::from_partition(p.best()));
                (key, best)
            })
            .collect()
    };

    let mut cache: BTreeMap<PartitionKey, Option<CandidateScore>> =
        score_partitions(&keys, &state).into_iter().collect();

    loop {
        let winner = cache
            .values()
            .flatten()
            .fold(None::<&CandidateScore>, |acc, c| match acc {
                Some(a) if !c.beats(a) => Some(a),
                _ => Some(c),
            })
            .cloned();
        let Some(winner) = winner else { break };
        if winner.net < cfg.gain_threshold {
            break;
        }

        let before = tally(corpus, &state);
        debug_assert_eq!(net_gain(&winner.rule, corpus, &state, lex), winner);
        state
            .par_iter_mut()
            .zip(&corpus.sentences)
            .for_each(|(rels, a)| {
                winner.rule.apply_in_place(&a.sentence, rels, lex);
            });
        let (matches, spurious) = tally(corpus, &state);
        debug_assert_eq!(
            (matches as i64 - spurious as i64) - (before.0 as i64 - before.1 as i64),
            winner.net
        );

        let step = TrainingStep {
            iteration: steps.len() + 1,
            score: winner.clone(),
            matches,
            spurious,
        };
        log::info!("{}", step);
        sequence.push(winner.rule.clone(), Some(format!("net={}", winner.net)));
        steps.push(step);

        let dirty: Vec<PartitionKey> = match rescoring {
            Rescoring::Incremental => keys
                .iter()
                .copied()
                .filter(|k| k.label == winner.rule.action.label && k.offset == winner.rule.action.offset)
                .collect(),
            Rescoring::Full => keys.clone(),
        };
        cache.extend(score_partitions(&dirty, &state));
    }

    TrainingOutcome {
        sequence,
        steps,
        final_state: state,
    }
}
