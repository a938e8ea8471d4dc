//! Candidate rule search for one action partition.
//!
//! A partition fixes the anchor kind and the action (mode, label, offset).
//! Every anchor where the action would change the labeling is a site: a good
//! site fixes an error, a bad site introduces one. A rule's net gain is the
//! number of good sites it matches minus the number of bad sites it matches.
//!
//! Conditions come from the features observed at sites: positive conditions
//! from good sites, negated ones from features seen at bad sites. Rules are
//! grounded: some good site satisfies every condition.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;

use crate::corpus::{AnnotatedCorpus, GroupKind, RelationLabel, RelationSet, Sentence, SyntaxGroup};
use crate::engine::{is_punct_or_cc, Action, ActionMode, Condition, ConditionKind, Rule};
use crate::lexicon::LexiconBundle;

use super::config::TrainingConfig;

/// Anchor kind plus action: the unit of independent search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub(crate) struct PartitionKey {
    pub label: RelationLabel,
    pub offset: isize,
    pub mode: ActionMode,
    pub kind: GroupKind,
}

impl PartitionKey {
    pub fn action(&self) -> Action {
        Action {
            mode: self.mode,
            label: self.label,
            offset: self.offset,
        }
    }

    pub fn all(max_distance: usize) -> Vec<PartitionKey> {
        let d = max_distance as isize;
        let mut keys = Vec::new();
        for label in RelationLabel::ALL {
            for offset in (-d..=d).filter(|o| *o != 0) {
                for mode in [ActionMode::Attach, ActionMode::Unattach] {
                    for kind in GroupKind::ALL {
                        keys.push(PartitionKey {
                            label,
                            offset,
                            mode,
                            kind,
                        });
                    }
                }
            }
        }
        keys
    }
}

/// The positive atomic conditions true at an anchor, restricted to the
/// positions a rule with action offset `offset` may test.
pub(crate) fn site_features(
    s: &Sentence,
    anchor: usize,
    offset: isize,
    cfg: &TrainingConfig,
    lex: &LexiconBundle,
) -> Vec<Condition> {
    let (lo, hi) = Rule::position_window(offset);
    let mut out = Vec::new();
    for p in lo..=hi {
        if let Some(g) = s.group_at(anchor, p) {
            group_features(s, g, p, cfg, lex, &mut out);
        }
    }
    let span = (offset.min(0), offset.max(0));
    for p in lo..hi {
        between_features(s, anchor, p, p + 1, cfg, &mut out);
    }
    if span.1 - span.0 > 1 {
        between_features(s, anchor, span.0, span.1, cfg, &mut out);
    }
    out.sort();
    out.dedup();
    out
}

fn group_features(
    s: &Sentence,
    g: &SyntaxGroup,
    p: isize,
    cfg: &TrainingConfig,
    lex: &LexiconBundle,
    out: &mut Vec<Condition>,
) {
    use ConditionKind::*;
    if p != 0 {
        out.push(Condition::new(GroupType, p, g.kind.as_str()));
    }
    for prop in &g.verb_properties {
        out.push(Condition::new(VerbGroupProperty, p, prop.as_str()));
    }
    if g.id == 0 {
        out.push(Condition::new(SentenceEndGroup, p, "first"));
    }
    if g.id + 1 == s.groups.len() {
        out.push(Condition::new(SentenceEndGroup, p, "last"));
    }
    if (p == 0 || !cfg.pp_attachment_anchor_only)
        && s.groups
            .iter()
            .any(|o| o.kind == GroupKind::In && o.attachment == Some(g.id))
    {
        out.push(Condition::new(PpAttachment, p, ""));
    }
    for l in s.lexemes_in(g) {
        let word = l.text.to_lowercase();
        if cfg.lexeme_whitelist.contains(&word) {
            out.push(Condition::new(GroupContainsLexeme, p, word));
        }
        out.push(Condition::new(GroupContainsPos, p, l.pos.clone()));
    }
    if let Some(h) = s.head_lexeme(g) {
        out.push(Condition::new(HeadWord, p, h.text.to_lowercase()));
        for stem in lex.stems_of(&h.text) {
            out.push(Condition::new(HeadWord, p, stem));
        }
        out.push(Condition::new(HeadPos, p, h.pos.clone()));
        for cat in lex.subcat_of(&h.text) {
            out.push(Condition::new(HeadSubcatCategory, p, cat));
        }
        for class in lex.classes_of(&h.text, g.kind) {
            out.push(Condition::new(HeadSemanticClass, p, class));
        }
        for list in lex.lists_containing(&h.text) {
            out.push(Condition::new(HeadInWordList, p, list));
        }
    }
    if let Some(ne) = &g.named_entity {
        out.push(Condition::new(HeadInNamedEntity, p, ne.clone()));
    }
}

fn between_features(
    s: &Sentence,
    anchor: usize,
    p: isize,
    q: isize,
    cfg: &TrainingConfig,
    out: &mut Vec<Condition>,
) {
    use ConditionKind::*;
    let (Some(a), Some(b)) = (s.group_at(anchor, p), s.group_at(anchor, q)) else {
        return;
    };
    let between = s.lexemes_between(a, b);
    for l in between {
        let word = l.text.to_lowercase();
        if cfg.lexeme_whitelist.contains(&word) {
            out.push(Condition::between(BetweenGroupsLexeme, p, q, word));
        }
        out.push(Condition::between(BetweenGroupsPos, p, q, l.pos.clone()));
    }
    if between.iter().any(is_punct_or_cc) {
        out.push(Condition::between(BetweenGroupsPunctOrCc, p, q, ""));
    }
}

/// Features of every (sentence, anchor, offset), interned so that feature ids
/// follow the canonical condition order.
pub(crate) struct FeatureTable {
    conditions: Vec<Condition>,
    offsets: Vec<isize>,
    /// `[sentence][anchor][offset index]` -> sorted feature ids.
    sites: Vec<Vec<Vec<Vec<u32>>>>,
}

impl FeatureTable {
    pub fn build(corpus: &AnnotatedCorpus, cfg: &TrainingConfig, lex: &LexiconBundle) -> Self {
        let d = cfg.max_distance as isize;
        let offsets: Vec<isize> = (-d..=d).filter(|o| *o != 0).collect();
        let raw: Vec<Vec<Vec<Vec<Condition>>>> = corpus
            .sentences
            .par_iter()
            .map(|a| {
                let s = &a.sentence;
                (0..s.groups.len())
                    .map(|anchor| {
                        offsets
                            .iter()
                            .map(|&o| {
                                if s.group_at(anchor, o).is_some() {
                                    site_features(s, anchor, o, cfg, lex)
                                } else {
                                    Vec::new()
                                }
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();

        let unique: BTreeSet<&Condition> = raw.iter().flatten().flatten().flatten().collect();
        let conditions: Vec<Condition> = unique.into_iter().cloned().collect();
        let rank: BTreeMap<&Condition, u32> = conditions
            .iter()
            .enumerate()
            .map(|(i, c)| (c, i as u32))
            .collect();
        let sites = raw
            .iter()
            .map(|sent| {
                sent.iter()
                    .map(|anchor| {
                        anchor
                            .iter()
                            .map(|feats| feats.iter().map(|c| rank[c]).collect())
                            .collect()
                    })
                    .collect()
            })
            .collect();
        FeatureTable {
            conditions,
            offsets,
            sites,
        }
    }

    fn features(&self, sentence: usize, anchor: usize, offset: isize) -> &[u32] {
        let idx = self
            .offsets
            .iter()
            .position(|o| *o == offset)
            .expect("offset within max distance");
        &self.sites[sentence][anchor][idx]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Bits(Vec<u64>);

impl Bits {
    fn zeros(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64)])
    }

    fn ones(n: usize) -> Self {
        let mut b = Bits::zeros(n);
        for i in 0..n {
            b.set(i);
        }
        b
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn flip_all(&mut self, n: usize) {
        for (w, word) in self.0.iter_mut().enumerate() {
            *word = !*word;
            let used = n.saturating_sub(w * 64);
            if used < 64 {
                *word &= (1u64 << used) - 1;
            }
        }
    }

    fn and(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn is_empty(&self) -> bool {
        self.0.iter().all(|w| *w == 0)
    }
}

struct PoolEntry {
    condition: Condition,
    good: Bits,
    bad: Bits,
}

/// Good and bad site counts matched by the best rule of a partition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct PartitionBest {
    pub rule: Rule,
    pub good: usize,
    pub bad: usize,
}

pub(crate) struct PartitionSearch {
    key: PartitionKey,
    pool: Vec<PoolEntry>,
    n_good: usize,
    n_bad: usize,
    max_conditions: usize,
}

impl PartitionSearch {
    /// Returns `None` when the partition has no good sites.
    pub fn new(
        key: PartitionKey,
        corpus: &AnnotatedCorpus,
        state: &[RelationSet],
        table: &FeatureTable,
        cfg: &TrainingConfig,
    ) -> Option<Self> {
        let mut good_sites: Vec<&[u32]> = Vec::new();
        let mut bad_sites: Vec<&[u32]> = Vec::new();
        for (n, (annotated, current)) in corpus.sentences.iter().zip(state).enumerate() {
            let s = &annotated.sentence;
            for g in s.groups.iter().filter(|g| g.kind == key.kind) {
                let Some(triple) = key.action().triple(g.id) else {
                    continue;
                };
                if triple.target >= s.groups.len() {
                    continue;
                }
                let present = current.contains(&triple);
                let wanted = annotated.gold.contains(&triple);
                let class = match (key.mode, present, wanted) {
                    (ActionMode::Attach, false, true) | (ActionMode::Unattach, true, false) => Some(true),
                    (ActionMode::Attach, false, false) | (ActionMode::Unattach, true, true) => Some(false),
                    _ => None,
                };
                match class {
                    Some(true) => good_sites.push(table.features(n, g.id, key.offset)),
                    Some(false) => bad_sites.push(table.features(n, g.id, key.offset)),
                    None => {}
                }
            }
        }
        if good_sites.is_empty() {
            return None;
        }

        let n_good = good_sites.len();
        let n_bad = bad_sites.len();
        let mut pos_good: BTreeMap<u32, Bits> = BTreeMap::new();
        for (i, feats) in good_sites.iter().enumerate() {
            for &f in feats.iter() {
                pos_good.entry(f).or_insert_with(|| Bits::zeros(n_good)).set(i);
            }
        }
        let mut pos_bad: BTreeMap<u32, Bits> = BTreeMap::new();
        for (i, feats) in bad_sites.iter().enumerate() {
            for &f in feats.iter() {
                pos_bad.entry(f).or_insert_with(|| Bits::zeros(n_bad)).set(i);
            }
        }

        let mut ids: BTreeSet<(u32, bool)> = pos_good.keys().map(|f| (*f, false)).collect();
        for f in pos_bad.keys() {
            if cfg.may_negate(table.conditions[*f as usize].kind) {
                ids.insert((*f, true));
            }
        }

        let pool = ids
            .into_iter()
            .map(|(f, negated)| {
                let mut good = pos_good.get(&f).cloned().unwrap_or_else(|| Bits::zeros(n_good));
                let mut bad = pos_bad.get(&f).cloned().unwrap_or_else(|| Bits::zeros(n_bad));
                let mut condition = table.conditions[f as usize].clone();
                if negated {
                    good.flip_all(n_good);
                    bad.flip_all(n_bad);
                    condition = condition.negate();
                }
                PoolEntry {
                    condition,
                    good,
                    bad,
                }
            })
            .collect();

        Some(PartitionSearch {
            key,
            pool,
            n_good,
            n_bad,
            max_conditions: cfg.max_conditions,
        })
    }

    fn rule(&self, chosen: &[usize]) -> Rule {
        Rule::new(
            self.key.kind,
            chosen.iter().map(|&i| self.pool[i].condition.clone()).collect(),
            self.key.action(),
        )
    }

    fn head_conflict(&self, chosen: &[usize], i: usize) -> bool {
        let c = &self.pool[i].condition;
        c.kind.is_head_family()
            && chosen.iter().any(|&j| {
                let o = &self.pool[j].condition;
                o.kind.is_head_family() && o.position == c.position
            })
    }

    /// Every grounded rule of the partition, in canonical order.
    pub fn enumerate(&self) -> Vec<Rule> {
        let mut out = Vec::new();
        let mut chosen = Vec::new();
        self.enumerate_from(&mut chosen, 0, &Bits::ones(self.n_good), &mut out);
        out
    }

    fn enumerate_from(&self, chosen: &mut Vec<usize>, start: usize, good: &Bits, out: &mut Vec<Rule>) {
        out.push(self.rule(chosen));
        if chosen.len() == self.max_conditions {
            return;
        }
        for i in start..self.pool.len() {
            if self.head_conflict(chosen, i) {
                continue;
            }
            let g = good.and(&self.pool[i].good);
            if g.is_empty() {
                continue;
            }
            chosen.push(i);
            self.enumerate_from(chosen, i + 1, &g, out);
            chosen.pop();
        }
    }

    /// The best grounded rule under (net desc, fewer conditions, canonical
    /// order). Branches are cut when their good-site count cannot beat the
    /// incumbent, or when a condition removes no bad site (any extension of
    /// such a branch is beaten by the same extension without it).
    pub fn best(&self) -> PartitionBest {
        let mut best: Option<(Vec<usize>, usize, usize)> = None;
        let mut chosen = Vec::new();
        self.search(
            &mut chosen,
            0,
            &Bits::ones(self.n_good),
            &Bits::ones(self.n_bad),
            &mut best,
        );
        let (chosen, good, bad) = best.expect("root rule is always grounded");
        PartitionBest {
            rule: self.rule(&chosen),
            good,
            bad,
        }
    }

    fn search(
        &self,
        chosen: &mut Vec<usize>,
        start: usize,
        good: &Bits,
        bad: &Bits,
        best: &mut Option<(Vec<usize>, usize, usize)>,
    ) {
        let (g, b) = (good.count(), bad.count());
        let net = g as i64 - b as i64;
        let better = match best {
            None => true,
            Some((bc, bg, bb)) => {
                let bnet = *bg as i64 - *bb as i64;
                net > bnet
                    || (net == bnet
                        && (chosen.len() < bc.len() || (chosen.len() == bc.len() && chosen < bc)))
            }
        };
        if better {
            *best = Some((chosen.clone(), g, b));
        }
        if chosen.len() == self.max_conditions {
            return;
        }
        for i in start..self.pool.len() {
            if self.head_conflict(chosen, i) {
                continue;
            }
            let b2 = bad.and(&self.pool[i].bad);
            if b2 == *bad {
                continue;
            }
            let g2 = good.and(&self.pool[i].good);
            if g2.is_empty() {
                continue;
            }
            if let Some((bc, bg, bb)) = best.as_ref() {
                let bnet = *bg as i64 - *bb as i64;
                let ub = g2.count() as i64;
                if ub < bnet || (ub == bnet && bc.len() <= chosen.len()) {
                    continue;
                }
            }
            chosen.push(i);
            self.search(chosen, i + 1, &g2, &b2, best);
            chosen.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bits_flip_respects_length() {
        let mut b = Bits::zeros(70);
        b.set(3);
        b.set(69);
        b.flip_all(70);
        assert_eq!(b.count(), 68);
        assert_eq!(Bits::ones(70).count(), 70);
        assert!(Bits::zeros(0).is_empty());
    }
}
