//! Learning ordered transformation rules that find grammatical relations
//! (subject, object, modifiers, ...) between pre-chunked core syntax groups.
//!
//! * [`corpus`]: sentences, groups, relation graphs and the corpus file format.
//! * [`lexicon`]: stems, subcategorization, semantic classes and word lists.
//! * [`engine`]: the rule language and rule application.
//! * [`learner`]: greedy net-gain rule induction.
//! * [`eval`]: recall/precision/f-score, label merges, propositions.

pub mod corpus;
pub mod engine;
pub mod error;
pub mod eval;
pub mod learner;
pub mod lexicon;
pub mod samples;

pub use corpus::{
    AnnotatedCorpus, AnnotatedSentence, GroupKind, Lexeme, RelationInstance, RelationLabel,
    RelationSet, Sentence, SyntaxGroup, VerbProperty,
};
pub use engine::{Action, ActionMode, Condition, ConditionKind, Rule, RuleSequence};
pub use learner::{train, TrainingConfig, TrainingOutcome};
pub use lexicon::LexiconBundle;
