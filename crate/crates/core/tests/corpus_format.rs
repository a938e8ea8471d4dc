use proptest::prelude::*;

use relseq_core::corpus::{corpus_to_string, parse_corpus_str, validate, SyntaxGroup};
use relseq_core::samples;
use relseq_core::{
    AnnotatedCorpus, AnnotatedSentence, GroupKind, Lexeme, RelationInstance, RelationLabel, RelationSet, Sentence,
    VerbProperty,
};

const POS: [&str; 8] = ["DT", "NN", "NNS", "VBD", "IN", "JJ", "CC", ","];

fn arb_sentence() -> impl Strategy<Value = AnnotatedSentence> {
    // Each group: (kind, width, gap after, head choice, entity, verb props).
    let group = (
        prop::sample::select(GroupKind::ALL.to_vec()),
        1usize..4,
        0usize..2,
        any::<prop::sample::Index>(),
        proptest::option::of("[a-z]{1,6}"),
        prop::collection::btree_set(prop::sample::select(VerbProperty::ALL.to_vec()), 0..2),
        any::<prop::sample::Index>(),
    );
    prop::collection::vec(group, 1..6)
        .prop_flat_map(|groups| {
            let n = groups.len();
            let rel = (prop::sample::select(RelationLabel::ALL.to_vec()), 0..n, 0..n);
            (
                Just(groups),
                prop::collection::vec(rel.clone(), 0..6),
                prop::collection::vec(rel, 0..3),
                prop::collection::vec("[A-Za-z']{1,7}", 24),
                prop::collection::vec(prop::sample::select(POS.to_vec()), 24),
            )
        })
        .prop_map(|(groups, gold, initial, words, tags)| {
            let n = groups.len();
            let mut s = Sentence::default();
            let push = |s: &mut Sentence| {
                let i = s.lexemes.len();
                s.lexemes.push(Lexeme {
                    text: words[i % words.len()].clone(),
                    pos: tags[i % tags.len()].to_string(),
                    index: i,
                });
                i
            };
            for (id, (kind, width, gap, head, ne, props, attach)) in groups.into_iter().enumerate() {
                let lo = s.lexemes.len();
                for _ in 0..width {
                    push(&mut s);
                }
                let hi = s.lexemes.len() - 1;
                let mut g = SyntaxGroup::new(id, kind, (lo, hi), lo + head.index(width));
                g.named_entity = ne;
                if kind == GroupKind::Verb {
                    g.verb_properties = props;
                }
                if kind == GroupKind::In {
                    g.attachment = Some(attach.index(n));
                }
                s.groups.push(g);
                for _ in 0..gap {
                    push(&mut s);
                }
            }
            let set = |v: Vec<(RelationLabel, usize, usize)>| -> RelationSet {
                v.into_iter()
                    .filter(|(_, a, b)| a != b)
                    .map(|(l, a, b)| RelationInstance::new(l, a, b))
                    .collect()
            };
            AnnotatedSentence {
                sentence: s,
                gold: set(gold),
                initial: set(initial),
            }
        })
}

proptest! {
    #[test]
    fn generated_corpora_round_trip(sentences in prop::collection::vec(arb_sentence(), 0..5)) {
        let corpus = AnnotatedCorpus { sentences };
        prop_assert!(validate(&corpus).iter().all(|d| !d.is_error()));
        let text = corpus_to_string(&corpus);
        let parsed = parse_corpus_str(&text).unwrap();
        prop_assert!(parsed.warnings.is_empty());
        prop_assert_eq!(&parsed.corpus, &corpus);
        prop_assert_eq!(corpus_to_string(&parsed.corpus), text);
    }
}

#[test]
fn sample_corpora_are_valid_and_round_trip() {
    for corpus in [
        samples::showcase_corpus(),
        samples::copular_with_distractors(),
        samples::sample_rule_fixture(),
        AnnotatedCorpus {
            sentences: vec![samples::cat_that_ran()],
        },
    ] {
        assert!(validate(&corpus).is_empty(), "{:?}", validate(&corpus));
        let parsed = parse_corpus_str(&corpus_to_string(&corpus)).unwrap();
        assert_eq!(parsed.corpus, corpus);
    }
}

#[test]
fn infinitive_sentence_validates_clean() {
    let corpus = AnnotatedCorpus {
        sentences: vec![samples::showcase_corpus().sentences[2].clone()],
    };
    assert_eq!(validate(&corpus), vec![]);
}
