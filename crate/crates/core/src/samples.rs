//! Small hand-annotated corpora and rules, shared by tests, the acceptance
//! suite and the CLI documentation.

use crate::corpus::{
    AnnotatedCorpus, AnnotatedSentence, GroupKind, RelationInstance, RelationLabel, RelationSet, Sentence,
    SentenceBuilder, VerbProperty,
};
use crate::engine::{Action, Condition, ConditionKind, Rule, RuleSequence};
use crate::lexicon::{ClassPartition, LexiconBundle};

use ConditionKind::*;
use GroupKind::*;
use RelationLabel::*;

pub fn relations(triples: &[(RelationLabel, usize, usize)]) -> RelationSet {
    triples
        .iter()
        .map(|&(l, s, t)| RelationInstance::new(l, s, t))
        .collect()
}

pub fn annotated(sentence: Sentence, gold: &[(RelationLabel, usize, usize)]) -> AnnotatedSentence {
    AnnotatedSentence {
        sentence,
        gold: relations(gold),
        initial: RelationSet::new(),
    }
}

/// A few stems and semantic classes: forms of "be", plural nouns, and nouns
/// denoting acts.
pub fn toy_lexicon() -> LexiconBundle {
    let mut lex = LexiconBundle::empty();
    for (form, stem) in [
        ("was", "be"),
        ("is", "be"),
        ("are", "be"),
        ("were", "be"),
        ("cats", "cat"),
        ("cars", "car"),
        ("trucks", "truck"),
        ("words", "word"),
        ("saw", "see"),
        ("ran", "run"),
        ("attacks", "attack"),
    ] {
        lex.stems.insert(form, stem);
    }
    lex.classes.insert("attack", ClassPartition::Noun, "act");
    lex.classes.insert("growth", ClassPartition::Noun, "process");
    lex.classes.insert("cat", ClassPartition::Noun, "animal");
    lex.classes.insert("run", ClassPartition::Verb, "motion");
    lex.subcat.insert("see", "np");
    lex
}

/// "[I] [saw] [the cat] [that] [ran]".
pub fn cat_that_ran() -> AnnotatedSentence {
    let s = SentenceBuilder::new()
        .group(Noun, &[("I", "PRP")])
        .group(Verb, &[("saw", "VBD")])
        .group(Noun, &[("the", "DT"), ("cat", "NN")])
        .group(In, &[("that", "WDT")])
        .group(Verb, &[("ran", "VBD")])
        .build();
    annotated(s, &[(Subj, 0, 1), (Obj, 2, 1), (Subj, 2, 4), (Mod, 4, 2)])
}

fn copular(subject: &[(&str, &str)], complement_kind: GroupKind, complement: &[(&str, &str)]) -> AnnotatedSentence {
    let s = SentenceBuilder::new()
        .group(Noun, subject)
        .group(Verb, &[("was", "VBD")])
        .group(complement_kind, complement)
        .token(".", ".")
        .build();
    annotated(s, &[(Subj, 0, 2)])
}

fn existential(complement: &[(&str, &str)]) -> AnnotatedSentence {
    let s = SentenceBuilder::new()
        .group(Noun, &[("There", "EX")])
        .group(Verb, &[("was", "VBD")])
        .group(Noun, complement)
        .token(".", ".")
        .build();
    annotated(s, &[(Empty, 0, 2)])
}

/// `copies` identical sentences "[The cat] [was] [happy] .", each with the
/// subject attached to the complement.
pub fn copular_fixture(copies: usize) -> AnnotatedCorpus {
    let one = copular(&[("The", "DT"), ("cat", "NN")], Adjective, &[("happy", "JJ")]);
    AnnotatedCorpus {
        sentences: vec![one; copies],
    }
}

/// Six copular sentences with varied subjects and complements plus two
/// existential "there" sentences. Among single conditions only the head of
/// the anchor separates the copular subjects from "There".
pub fn copular_with_distractors() -> AnnotatedCorpus {
    AnnotatedCorpus {
        sentences: vec![
            copular(&[("The", "DT"), ("cat", "NN")], Adjective, &[("happy", "JJ")]),
            copular(&[("He", "PRP")], Noun, &[("a", "DT"), ("pet", "NN")]),
            copular(&[("Fred", "NNP")], Adjective, &[("tired", "JJ")]),
            copular(&[("dogs", "NNS")], Noun, &[("the", "DT"), ("winners", "NNS")]),
            copular(
                &[("The", "DT"), ("old", "JJ"), ("man", "NN")],
                Adjective,
                &[("very", "RB"), ("tall", "JJ")],
            ),
            copular(&[("She", "PRP")], Adjective, &[("asleep", "JJ")]),
            existential(&[("a", "DT"), ("cat", "NN")]),
            existential(&[("a", "DT"), ("storm", "NN")]),
        ],
    }
}

/// Noun anchor, head "be" one group to the right, no IN group to the left,
/// anchor head not "there": attach SUBJ two groups to the right.
pub fn sample_rule() -> Rule {
    Rule::new(
        Noun,
        vec![
            Condition::new(HeadWord, 1, "be"),
            Condition::new(GroupType, -1, "in").negate(),
            Condition::new(HeadWord, 0, "there").negate(),
        ],
        Action::attach(Subj, 2),
    )
}

/// A copular sentence, an existential one and one whose noun before the
/// copula follows a preposition.
pub fn sample_rule_fixture() -> AnnotatedCorpus {
    let left_in = SentenceBuilder::new()
        .group(Noun, &[("The", "DT"), ("owner", "NN")])
        .group(In, &[("of", "IN")])
        .attach(0)
        .group(Noun, &[("the", "DT"), ("dog", "NN")])
        .group(Verb, &[("was", "VBD")])
        .group(Adjective, &[("happy", "JJ")])
        .build();
    AnnotatedCorpus {
        sentences: vec![
            copular(&[("The", "DT"), ("cat", "NN")], Adjective, &[("happy", "JJ")]),
            existential(&[("a", "DT"), ("cat", "NN")]),
            annotated(left_in, &[(Subj, 0, 4), (Mod, 1, 0), (Obj, 2, 1)]),
        ],
    }
}

/// Four annotated sentences with long-distance, coordinated and
/// reduced-relative structure.
pub fn showcase_corpus() -> AnnotatedCorpus {
    let ship = SentenceBuilder::new()
        .group(Noun, &[("The", "DT"), ("ship", "NN")])
        .group(Verb, &[("was", "VBD"), ("carrying", "VBG")])
        .group(Noun, &[("oil", "NN")])
        .group(In, &[("for", "IN")])
        .attach(2)
        .group(Noun, &[("cars", "NNS")])
        .token("and", "CC")
        .group(Noun, &[("trucks", "NNS")])
        .token(".", ".")
        .build();
    let spellings = SentenceBuilder::new()
        .group(Noun, &[("That", "DT")])
        .group(Verb, &[("means", "VBZ")])
        .group(Noun, &[("the", "DT"), ("same", "JJ"), ("word", "NN")])
        .group(Verb, &[("might", "MD"), ("have", "VB")])
        .group(
            Noun,
            &[("two", "CD"), ("or", "CC"), ("three", "CD"), ("spellings", "NNS")],
        )
        .token(".", ".")
        .build();
    let loves = SentenceBuilder::new()
        .group(Noun, &[("He", "PRP")])
        .group(Verb, &[("loves", "VBZ")])
        .group(Verb, &[("to", "TO"), ("work", "VB")])
        .verb_property(VerbProperty::Infinitival)
        .group(In, &[("with", "IN")])
        .attach(2)
        .group(Noun, &[("words", "NNS")])
        .token(".", ".")
        .build();
    let noah = SentenceBuilder::new()
        .group(Noun, &[("A", "DT"), ("man", "NN")])
        .group(Verb, &[("named", "VBN")])
        .verb_property(VerbProperty::Passive)
        .group(Noun, &[("Noah", "NNP")])
        .entity("person")
        .group(Verb, &[("wrote", "VBD")])
        .group(Noun, &[("this", "DT"), ("book", "NN")])
        .token(".", ".")
        .build();
    AnnotatedCorpus {
        sentences: vec![
            annotated(
                ship,
                &[(Subj, 0, 1), (Obj, 2, 1), (Mod, 3, 2), (Obj, 4, 3), (Obj, 5, 3)],
            ),
            annotated(
                spellings,
                &[(Subj, 0, 1), (Obj, 3, 1), (Subj, 2, 3), (Obj, 4, 3)],
            ),
            annotated(
                loves,
                &[(Subj, 0, 1), (Obj, 2, 1), (Obj, 4, 3), (Subj, 0, 2), (PpObj, 3, 2)],
            ),
            annotated(
                noah,
                &[
                    (Subj, 0, 3),
                    (Obj, 0, 1),
                    (Obj, 2, 1),
                    (Obj, 4, 3),
                    (Mod, 1, 0),
                    (ModIdent, 2, 0),
                ],
            ),
        ],
    }
}

/// A hand-written sequence for [`showcase_corpus`]. It misses the PP-OBJ arc
/// of "with" and wrongly makes "Noah" the subject of "wrote".
pub fn showcase_rules() -> RuleSequence {
    let c = Condition::new;
    let between = Condition::between;
    RuleSequence::from_rules([
        Rule::new(
            Noun,
            vec![
                c(GroupType, 1, "verb"),
                c(VerbGroupProperty, 1, "passive").negate(),
            ],
            Action::attach(Subj, 1),
        ),
        Rule::new(Noun, vec![c(VerbGroupProperty, 1, "passive")], Action::attach(Obj, 1)),
        Rule::new(
            Noun,
            vec![c(GroupType, -1, "verb"), c(GroupType, 1, "verb").negate()],
            Action::attach(Obj, -1),
        ),
        Rule::new(Noun, vec![c(VerbGroupProperty, -1, "passive")], Action::attach(Obj, -1)),
        Rule::new(Noun, vec![c(GroupType, -1, "in")], Action::attach(Obj, -1)),
        Rule::new(
            Noun,
            vec![c(GroupType, -2, "in"), between(BetweenGroupsPunctOrCc, -1, 0, "")],
            Action::attach(Obj, -2),
        ),
        Rule::new(
            Verb,
            vec![c(VerbGroupProperty, 0, "infinitival"), c(GroupType, -1, "verb")],
            Action::attach(Obj, -1),
        ),
        Rule::new(
            Verb,
            vec![c(GroupContainsPos, 0, "MD"), c(GroupType, -2, "verb")],
            Action::attach(Obj, -2),
        ),
        Rule::new(Noun, vec![c(VerbGroupProperty, 2, "infinitival")], Action::attach(Subj, 2)),
        Rule::new(
            Noun,
            vec![c(VerbGroupProperty, 1, "passive"), c(GroupType, 3, "verb")],
            Action::attach(Subj, 3),
        ),
        Rule::new(
            In,
            vec![c(GroupType, -1, "noun"), c(PpAttachment, -1, "")],
            Action::attach(Mod, -1),
        ),
        Rule::new(
            Verb,
            vec![c(VerbGroupProperty, 0, "passive"), c(GroupType, -1, "noun")],
            Action::attach(Mod, -1),
        ),
        Rule::new(
            Noun,
            vec![c(HeadInNamedEntity, 0, "person"), c(VerbGroupProperty, -1, "passive")],
            Action::attach(ModIdent, -2),
        ),
    ])
}
