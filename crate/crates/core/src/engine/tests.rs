use proptest::prelude::*;

use super::*;
use crate::corpus::{AnnotatedSentence, GroupKind::*, RelationLabel::*};
use crate::error::RuleFileError;
use crate::samples::{self, relations};
use ConditionKind::*;

fn lex() -> LexiconBundle {
    samples::toy_lexicon()
}

fn sentence(corpus: &AnnotatedCorpus, i: usize) -> &Sentence {
    &corpus.sentences[i].sentence
}

#[test]
fn head_word_matches_surface_or_stem() {
    let s = samples::cat_that_ran().sentence;
    let lex = lex();
    assert!(Condition::new(HeadWord, 0, "cat").eval(2, &s, &lex));
    assert!(Condition::new(HeadWord, -1, "see").eval(2, &s, &lex));
    assert!(Condition::new(HeadWord, -1, "saw").eval(2, &s, &lex));
    assert!(!Condition::new(HeadWord, 0, "the").eval(2, &s, &lex));
}

#[test]
fn negated_test_outside_sentence_is_true() {
    let s = samples::cat_that_ran().sentence;
    let lex = lex();
    let left_in = Condition::new(GroupType, -1, "in");
    assert!(!left_in.eval(0, &s, &lex));
    assert!(left_in.clone().negate().eval(0, &s, &lex));
    assert!(left_in.eval(4, &s, &lex));
}

#[test]
fn punctuation_or_conjunction_between_coordinated_nouns() {
    let corpus = samples::showcase_corpus();
    let s = sentence(&corpus, 0);
    let lex = lex();
    let c = Condition::between(BetweenGroupsPunctOrCc, -1, 0, "");
    assert!(c.eval(5, s, &lex), "`and` lies between [cars] and [trucks]");
    assert!(!c.eval(4, s, &lex));
    assert!(Condition::between(BetweenGroupsLexeme, -1, 0, "and").eval(5, s, &lex));
    assert!(Condition::between(BetweenGroupsPos, 0, -1, "CC").eval(5, s, &lex));
}

#[test]
fn sentence_end_pp_attachment_and_entity() {
    let corpus = samples::showcase_corpus();
    let lex = lex();
    let ship = sentence(&corpus, 0);
    assert!(Condition::new(SentenceEndGroup, 0, "first").eval(0, ship, &lex));
    assert!(Condition::new(SentenceEndGroup, 0, "last").eval(5, ship, &lex));
    assert!(Condition::new(PpAttachment, 0, "").eval(2, ship, &lex));
    assert!(!Condition::new(PpAttachment, 0, "").eval(4, ship, &lex));
    let noah = sentence(&corpus, 3);
    assert!(Condition::new(HeadInNamedEntity, 0, "person").eval(2, noah, &lex));
    assert!(Condition::new(VerbGroupProperty, -1, "passive").eval(2, noah, &lex));
}

#[test]
fn sample_rule_fires_only_on_copular_subject() {
    let corpus = samples::sample_rule_fixture();
    let rule = samples::sample_rule();
    let lex = lex();
    rule.check().unwrap();
    assert_eq!(rule.matching_anchors(sentence(&corpus, 0), &lex), vec![0]);
    assert!(rule.matching_anchors(sentence(&corpus, 1), &lex).is_empty());
    assert!(rule.matching_anchors(sentence(&corpus, 2), &lex).is_empty());
    assert_eq!(
        rule.apply(sentence(&corpus, 0), &RelationSet::new(), &lex),
        relations(&[(Subj, 0, 2)])
    );
}

#[test]
fn anchor_kind_and_missing_target() {
    let s = samples::cat_that_ran().sentence;
    let lex = lex();
    let verbs = Rule::new(Verb, vec![], Action::attach(Subj, 1));
    assert_eq!(verbs.matching_anchors(&s, &lex), vec![1]);
    let far = Rule::new(Noun, vec![], Action::attach(Obj, 3));
    assert_eq!(far.matching_anchors(&s, &lex), vec![0]);
    let left = Rule::new(Noun, vec![], Action::attach(Obj, -1));
    assert_eq!(left.matching_anchors(&s, &lex), vec![2]);
}

#[test]
fn attach_is_idempotent_and_unattach_undoes_it() {
    let s = samples::cat_that_ran().sentence;
    let lex = lex();
    let attach = Rule::new(Noun, vec![], Action::attach(Subj, 1));
    let unattach = Rule::new(Noun, vec![], Action::unattach(Subj, 1));
    let start = relations(&[(Obj, 2, 1)]);
    let once = attach.apply(&s, &start, &lex);
    assert_eq!(once, relations(&[(Obj, 2, 1), (Subj, 0, 1), (Subj, 2, 3)]));
    assert_eq!(attach.apply(&s, &once, &lex), once);
    assert_eq!(unattach.apply(&s, &once, &lex), start);
}

#[test]
fn empty_sequence_keeps_initial() {
    let mut a = samples::cat_that_ran();
    a.initial = relations(&[(Mod, 3, 2)]);
    let corpus = AnnotatedCorpus { sentences: vec![a] };
    let out = apply_sequence(&RuleSequence::default(), &corpus, &lex());
    assert_eq!(out, corpus.initial_sets());
}

#[test]
fn edits_stay_within_label_and_offset() {
    let s = samples::showcase_corpus().sentences[0].sentence.clone();
    let lex = lex();
    let start = relations(&[(Obj, 2, 1), (Subj, 0, 1), (Obj, 4, 3), (Subj, 2, 3)]);
    let rule = Rule::new(Noun, vec![], Action::unattach(Subj, 1));
    let out = rule.apply(&s, &start, &lex);
    let untouched = |r: &RelationInstance| !(r.label == Subj && r.offset() == 1);
    let keep: Vec<_> = start.iter().filter(|r| untouched(r)).collect();
    assert_eq!(out.iter().filter(|r| untouched(r)).collect::<Vec<_>>(), keep);
}

/// Applies one anchor at a time in the given order, reading the evolving set.
fn sequential(rule: &Rule, s: &Sentence, rels: &RelationSet, order: &[usize], lex: &LexiconBundle) -> RelationSet {
    let mut out = rels.clone();
    for &a in order {
        if rule.matches(a, s, lex) {
            let t = rule.action.triple(a).unwrap();
            match rule.action.mode {
                ActionMode::Attach => out.insert(t),
                ActionMode::Unattach => out.remove(&t),
            };
        }
    }
    out
}

#[test]
fn scan_order_does_not_matter() {
    let corpus = samples::showcase_corpus();
    let lex = lex();
    for rule in samples::showcase_rules().rules() {
        for a in &corpus.sentences {
            let s = &a.sentence;
            let forward: Vec<usize> = (0..s.groups.len()).collect();
            let backward: Vec<usize> = forward.iter().rev().copied().collect();
            let batch = rule.apply(s, &a.gold, &lex);
            assert_eq!(batch, sequential(rule, s, &a.gold, &forward, &lex));
            assert_eq!(batch, sequential(rule, s, &a.gold, &backward, &lex));
        }
    }
}

#[test]
fn sentences_are_processed_independently() {
    let corpus = samples::showcase_corpus();
    let lex = lex();
    let seq = samples::showcase_rules();
    let whole = apply_sequence(&seq, &corpus, &lex);
    for (i, a) in corpus.sentences.iter().enumerate() {
        let alone = AnnotatedCorpus {
            sentences: vec![a.clone()],
        };
        assert_eq!(apply_sequence(&seq, &alone, &lex)[0], whole[i]);
    }
}

#[test]
fn rule_check_rejects_bad_shapes() {
    let zero = Rule::new(Noun, vec![], Action::attach(Subj, 0));
    assert!(zero.check().is_err());
    let outside = Rule::new(Noun, vec![Condition::new(GroupType, 3, "verb")], Action::attach(Subj, 1));
    assert!(outside.check().is_err());
    let two_heads = Rule::new(
        Noun,
        vec![Condition::new(HeadWord, 0, "cat"), Condition::new(HeadPos, 0, "NN")],
        Action::attach(Subj, 1),
    );
    assert!(two_heads.check().is_err());
    let between_single = Rule::new(
        Noun,
        vec![Condition::new(BetweenGroupsPos, 0, "CC")],
        Action::attach(Subj, 1),
    );
    assert!(between_single.check().is_err());
    assert!(samples::sample_rule().check().is_ok());
}

#[test]
fn rule_display() {
    assert_eq!(
        samples::sample_rule().to_string(),
        "noun{!group-type@-1=in,!head-word@0=there,head-word@+1=be}->attach:subj:+2"
    );
}

#[test]
fn rule_file_version_mismatch() {
    let text = format!("{}\n{{\"version\":2}}\n", RULES_HEADER);
    assert!(matches!(
        read_rules_str(&text),
        Err(RuleFileError::Version { expected: 1, found: 2 })
    ));
}

#[test]
fn rule_file_rejects_invalid_rule() {
    let text = format!(
        "{}\n{{\"version\":1}}\n{}\n",
        RULES_HEADER,
        r#"{"anchor":"noun","conditions":[],"action":{"mode":"attach","label":"subj","offset":0}}"#
    );
    assert!(matches!(read_rules_str(&text), Err(RuleFileError::Invalid { line: 3, .. })));
    let bad_kind = format!(
        "{}\n{{\"version\":1}}\n{}\n",
        RULES_HEADER,
        r#"{"anchor":"noun","conditions":[{"kind":"nope","pos":0}],"action":{"mode":"attach","label":"subj","offset":1}}"#
    );
    assert!(read_rules_str(&bad_kind).is_err());
}

#[test]
fn rule_file_skips_comment_lines() {
    let seq = samples::showcase_rules();
    let text = rules_to_string(&seq);
    let with_comments = text.replacen('\n', "\n# trained by hand\n", 2);
    assert_eq!(read_rules_str(&with_comments).unwrap(), seq);
}

fn arb_condition() -> impl Strategy<Value = Condition> {
    (
        prop::sample::select(ConditionKind::ALL.to_vec()),
        -3isize..=3,
        -3isize..=3,
        "[a-z]{0,5}",
        any::<bool>(),
    )
        .prop_map(|(kind, p, q, arg, neg)| {
            let c = if kind.is_between() {
                let q = if q == p { p + 1 } else { q };
                Condition::between(kind, p, q, arg)
            } else {
                Condition::new(kind, p, arg)
            };
            if neg {
                c.negate()
            } else {
                c
            }
        })
}

fn arb_rule() -> impl Strategy<Value = Rule> {
    (
        prop::sample::select(GroupKind::ALL.to_vec()),
        prop::collection::vec(arb_condition(), 0..4),
        any::<bool>(),
        prop::sample::select(RelationLabel::ALL.to_vec()),
        prop::sample::select(vec![-3isize, -2, -1, 1, 2, 3]),
    )
        .prop_map(|(kind, conds, attach, label, offset)| {
            let action = if attach {
                Action::attach(label, offset)
            } else {
                Action::unattach(label, offset)
            };
            Rule::new(kind, conds, action)
        })
        .prop_filter("valid rule", |r| r.check().is_ok())
}

proptest! {
    #[test]
    fn rule_file_round_trip(rules in prop::collection::vec(arb_rule(), 0..6), comment in proptest::option::of("[ -~]{0,12}")) {
        let mut seq = RuleSequence::default();
        for r in rules {
            seq.push(r, comment.clone());
        }
        let text = rules_to_string(&seq);
        let back = read_rules_str(&text).unwrap();
        prop_assert_eq!(&back, &seq);
        prop_assert_eq!(rules_to_string(&back), text);
    }

    #[test]
    fn application_is_idempotent(rule in arb_rule()) {
        let lex = lex();
        for a in samples::showcase_corpus().sentences {
            let AnnotatedSentence { sentence, gold, .. } = a;
            let once = rule.apply(&sentence, &gold, &lex);
            prop_assert_eq!(rule.apply(&sentence, &once, &lex), once);
        }
    }
}
