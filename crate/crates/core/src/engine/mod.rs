//! Condition/action rules and their deterministic application.
//!
//! A rule fires on every group of its anchor kind whose neighbourhood meets
//! all conditions. Matching for one rule is computed against the relation
//! set as it was before the rule ran, and the edits are committed as a batch.
//! Conditions never inspect relations, so a rule's edits only interact with
//! rules that have the same or the opposite action.

mod condition;
mod format;

use std::cmp::Ordering;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::{AnnotatedCorpus, GroupKind, RelationInstance, RelationLabel, RelationSet, Sentence};
use crate::learner::TrainingConfig;
use crate::lexicon::LexiconBundle;

pub use condition::{Condition, ConditionKind};
pub(crate) use condition::{fmt_offset, is_punct_or_cc};
pub use format::{read_rules, read_rules_str, rules_to_string, write_rules, RULES_HEADER, RULE_FORMAT_VERSION};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ActionMode {
    Attach,
    Unattach,
}

impl ActionMode {
    pub fn as_str(self) -> &'static str {
        match self {
            ActionMode::Attach => "attach",
            ActionMode::Unattach => "unattach",
        }
    }
}

/// Attach or remove `label` from the anchor to the group `offset` away.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Action {
    pub mode: ActionMode,
    pub label: RelationLabel,
    pub offset: isize,
}

impl Action {
    pub fn attach(label: RelationLabel, offset: isize) -> Self {
        Action {
            mode: ActionMode::Attach,
            label,
            offset,
        }
    }

    pub fn unattach(label: RelationLabel, offset: isize) -> Self {
        Action {
            mode: ActionMode::Unattach,
            label,
            offset,
        }
    }

    /// The triple this action touches when anchored at `anchor`.
    pub fn triple(&self, anchor: usize) -> Option<RelationInstance> {
        let target = anchor.checked_add_signed(self.offset)?;
        Some(RelationInstance::new(self.label, anchor, target))
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{}:{}",
            self.mode.as_str(),
            self.label,
            fmt_offset(self.offset)
        )
    }
}

/// Anchor group kind, conditions, and one action.
///
/// Conditions are kept in canonical order so that rules equal up to
/// condition order compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Rule {
    pub anchor_kind: GroupKind,
    conditions: Vec<Condition>,
    pub action: Action,
}

impl Rule {
    pub fn new(anchor_kind: GroupKind, mut conditions: Vec<Condition>, action: Action) -> Self {
        conditions.sort();
        Rule {
            anchor_kind,
            conditions,
            action,
        }
    }

    pub fn conditions(&self) -> &[Condition] {
        &self.conditions
    }

    /// Positions a condition may test: the groups spanned by the action plus
    /// their immediate neighbours.
    pub fn position_window(offset: isize) -> (isize, isize) {
        (offset.min(0) - 1, offset.max(0) + 1)
    }

    /// Structural invariants that hold for every rule regardless of the
    /// training configuration.
    pub fn check(&self) -> Result<(), String> {
        if self.action.offset == 0 {
            return Err("action offset must be non-zero".to_string());
        }
        let (lo, hi) = Rule::position_window(self.action.offset);
        let mut head_positions = Vec::new();
        for c in &self.conditions {
            c.check()?;
            if let Some(p) = c.positions().find(|p| *p < lo || *p > hi) {
                return Err(format!(
                    "condition {} tests position {} outside [{}, {}]",
                    c, p, lo, hi
                ));
            }
            if c.kind.is_head_family() {
                if head_positions.contains(&c.position) {
                    return Err(format!(
                        "more than one head-word test at position {}",
                        c.position
                    ));
                }
                head_positions.push(c.position);
            }
        }
        Ok(())
    }

    pub fn matches(&self, anchor: usize, s: &Sentence, lex: &LexiconBundle) -> bool {
        match s.groups.get(anchor) {
            Some(g) if g.kind == self.anchor_kind => {}
            _ => return false,
        }
        if s.group_at(anchor, self.action.offset).is_none() {
            return false;
        }
        self.conditions.iter().all(|c| c.eval(anchor, s, lex))
    }

    /// Anchors the rule fires on, left to right.
    pub fn matching_anchors(&self, s: &Sentence, lex: &LexiconBundle) -> Vec<usize> {
        (0..s.groups.len())
            .filter(|&a| self.matches(a, s, lex))
            .collect()
    }

    /// Applies the rule to one sentence. All anchors are matched first, then
    /// the edits are applied together.
    pub fn apply(&self, s: &Sentence, rels: &RelationSet, lex: &LexiconBundle) -> RelationSet {
        let mut out = rels.clone();
        self.apply_in_place(s, &mut out, lex);
        out
    }

    /// In-place form of [`Rule::apply`]; returns the number of triples changed.
    pub fn apply_in_place(&self, s: &Sentence, rels: &mut RelationSet, lex: &LexiconBundle) -> usize {
        let triples: Vec<_> = self
            .matching_anchors(s, lex)
            .into_iter()
            .filter_map(|a| self.action.triple(a))
            .collect();
        triples
            .iter()
            .filter(|t| match self.action.mode {
                ActionMode::Attach => rels.insert(**t),
                ActionMode::Unattach => rels.remove(t),
            })
            .count()
    }
}

impl PartialOrd for Rule {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Canonical total order: anchor kind, then action, then conditions.
impl Ord for Rule {
    fn cmp(&self, other: &Self) -> Ordering {
        self.anchor_kind
            .cmp(&other.anchor_kind)
            .then_with(|| self.action.cmp(&other.action))
            .then_with(|| self.conditions.cmp(&other.conditions))
    }
}

/// Canonical single-line form, e.g.
/// `noun{head-word@+1=be,!group-type@-1=in}->attach:subj:+2`.
impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{{", self.anchor_kind)?;
        for (i, c) in self.conditions.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", c)?;
        }
        write!(f, "}}->{}", self.action)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleEntry {
    pub rule: Rule,
    pub comment: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SequenceMeta {
    pub version: u32,
    /// Configuration the sequence was trained with; absent for hand-written rules.
    pub config: Option<TrainingConfig>,
}

impl Default for SequenceMeta {
    fn default() -> Self {
        SequenceMeta {
            version: RULE_FORMAT_VERSION,
            config: None,
        }
    }
}

/// An ordered rule list. Order is significant.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RuleSequence {
    pub meta: SequenceMeta,
    pub entries: Vec<RuleEntry>,
}

impl RuleSequence {
    pub fn from_rules<I: IntoIterator<Item = Rule>>(rules: I) -> Self {
        RuleSequence {
            meta: SequenceMeta::default(),
            entries: rules
                .into_iter()
                .map(|rule| RuleEntry {
                    rule,
                    comment: None,
                })
                .collect(),
        }
    }

    pub fn push(&mut self, rule: Rule, comment: Option<String>) {
        self.entries.push(RuleEntry { rule, comment });
    }

    pub fn rules(&self) -> impl Iterator<Item = &Rule> + '_ {
        self.entries.iter().map(|e| &e.rule)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Runs every rule in order over one sentence, starting from `initial`.
    pub fn apply_sentence(&self, s: &Sentence, initial: &RelationSet, lex: &LexiconBundle) -> RelationSet {
        let mut rels = initial.clone();
        for rule in self.rules() {
            rule.apply_in_place(s, &mut rels, lex);
        }
        rels
    }
}

pub fn eval_condition(c: &Condition, anchor: usize, s: &Sentence, lex: &LexiconBundle) -> bool {
    c.eval(anchor, s, lex)
}

pub fn rule_matches(r: &Rule, anchor: usize, s: &Sentence, lex: &LexiconBundle) -> bool {
    r.matches(anchor, s, lex)
}

pub fn apply_rule(r: &Rule, s: &Sentence, rels: &RelationSet, lex: &LexiconBundle) -> RelationSet {
    r.apply(s, rels, lex)
}

/// Applies the sequence to every sentence, starting from each sentence's
/// initial labeling. Sentences are processed in parallel; the result is in
/// corpus order.
pub fn apply_sequence(seq: &RuleSequence, corpus: &AnnotatedCorpus, lex: &LexiconBundle) -> Vec<RelationSet> {
    corpus
        .sentences
        .par_iter()
        .map(|s| seq.apply_sentence(&s.sentence, &s.initial, lex))
        .collect()
}

#[cfg(test)]
mod tests;
