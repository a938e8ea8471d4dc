use std::fmt;
use std::str::FromStr;

use crate::corpus::{GroupKind, Lexeme, Sentence, SyntaxGroup, VerbProperty};
use crate::lexicon::LexiconBundle;

/// The tests a rule condition can perform.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ConditionKind {
    GroupType,
    VerbGroupProperty,
    /// `first` or `last` group of the sentence.
    SentenceEndGroup,
    /// Some IN group is attached to the tested group.
    PpAttachment,
    GroupContainsLexeme,
    GroupContainsPos,
    BetweenGroupsLexeme,
    BetweenGroupsPos,
    HeadWord,
    HeadPos,
    HeadInNamedEntity,
    HeadSubcatCategory,
    HeadSemanticClass,
    BetweenGroupsPunctOrCc,
    HeadInWordList,
}

impl ConditionKind {
    pub const ALL: [ConditionKind; 15] = [
        ConditionKind::GroupType,
        ConditionKind::VerbGroupProperty,
        ConditionKind::SentenceEndGroup,
        ConditionKind::PpAttachment,
        ConditionKind::GroupContainsLexeme,
        ConditionKind::GroupContainsPos,
        ConditionKind::BetweenGroupsLexeme,
        ConditionKind::BetweenGroupsPos,
        ConditionKind::HeadWord,
        ConditionKind::HeadPos,
        ConditionKind::HeadInNamedEntity,
        ConditionKind::HeadSubcatCategory,
        ConditionKind::HeadSemanticClass,
        ConditionKind::BetweenGroupsPunctOrCc,
        ConditionKind::HeadInWordList,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ConditionKind::GroupType => "group-type",
            ConditionKind::VerbGroupProperty => "verb-property",
            ConditionKind::SentenceEndGroup => "sentence-end",
            ConditionKind::PpAttachment => "pp-attachment",
            ConditionKind::GroupContainsLexeme => "group-lexeme",
            ConditionKind::GroupContainsPos => "group-pos",
            ConditionKind::BetweenGroupsLexeme => "between-lexeme",
            ConditionKind::BetweenGroupsPos => "between-pos",
            ConditionKind::HeadWord => "head-word",
            ConditionKind::HeadPos => "head-pos",
            ConditionKind::HeadInNamedEntity => "head-entity",
            ConditionKind::HeadSubcatCategory => "head-subcat",
            ConditionKind::HeadSemanticClass => "head-class",
            ConditionKind::BetweenGroupsPunctOrCc => "between-punct-cc",
            ConditionKind::HeadInWordList => "head-in-list",
        }
    }

    /// Tests over the lexemes strictly between two groups.
    pub fn is_between(self) -> bool {
        matches!(
            self,
            ConditionKind::BetweenGroupsLexeme
                | ConditionKind::BetweenGroupsPos
                | ConditionKind::BetweenGroupsPunctOrCc
        )
    }

    /// Tests on a group's head word. A rule may hold at most one of these per
    /// position.
    pub fn is_head_family(self) -> bool {
        matches!(
            self,
            ConditionKind::HeadWord
                | ConditionKind::HeadPos
                | ConditionKind::HeadInNamedEntity
                | ConditionKind::HeadSubcatCategory
                | ConditionKind::HeadSemanticClass
        )
    }
}

impl fmt::Display for ConditionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ConditionKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ConditionKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| format!("unknown condition kind `{}`", s))
    }
}

/// One test at a group position relative to the anchor.
///
/// Field order defines the canonical ordering of conditions.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Condition {
    pub kind: ConditionKind,
    pub position: isize,
    /// Other end of the interval for the between tests.
    pub second_position: Option<isize>,
    pub argument: String,
    pub negated: bool,
}

impl Condition {
    pub fn new(kind: ConditionKind, position: isize, argument: impl Into<String>) -> Self {
        Condition {
            kind,
            position,
            second_position: None,
            argument: argument.into(),
            negated: false,
        }
    }

    pub fn between(
        kind: ConditionKind,
        position: isize,
        second_position: isize,
        argument: impl Into<String>,
    ) -> Self {
        Condition {
            kind,
            position,
            second_position: Some(second_position),
            argument: argument.into(),
            negated: false,
        }
    }

    pub fn negate(mut self) -> Self {
        self.negated = !self.negated;
        self
    }

    /// Positions the condition looks at.
    pub fn positions(&self) -> impl Iterator<Item = isize> {
        std::iter::once(self.position).chain(self.second_position)
    }

    pub fn check(&self) -> Result<(), String> {
        match (self.kind.is_between(), self.second_position) {
            (true, None) => Err(format!("{} needs a second position", self.kind)),
            (true, Some(p)) if p == self.position => {
                Err(format!("{} interval is empty", self.kind))
            }
            (false, Some(_)) => Err(format!("{} takes a single position", self.kind)),
            _ => Ok(()),
        }
    }

    /// Evaluates the condition for the rule anchored at `anchor`. Positions
    /// outside the sentence make the un-negated test false.
    pub fn eval(&self, anchor: usize, s: &Sentence, lex: &LexiconBundle) -> bool {
        self.base_test(anchor, s, lex) != self.negated
    }

    fn base_test(&self, anchor: usize, s: &Sentence, lex: &LexiconBundle) -> bool {
        let group = match s.group_at(anchor, self.position) {
            Some(g) => g,
            None => return false,
        };
        let arg = self.argument.as_str();
        match self.kind {
            ConditionKind::GroupType => {
                GroupKind::from_str(arg).is_ok_and(|k| k == group.kind)
            }
            ConditionKind::VerbGroupProperty => {
                VerbProperty::from_str(arg).is_ok_and(|p| group.verb_properties.contains(&p))
            }
            ConditionKind::SentenceEndGroup => match arg {
                "first" => group.id == 0,
                "last" => group.id + 1 == s.groups.len(),
                _ => false,
            },
            ConditionKind::PpAttachment => s
                .groups
                .iter()
                .any(|g| g.kind == GroupKind::In && g.attachment == Some(group.id)),
            ConditionKind::GroupContainsLexeme => {
                s.lexemes_in(group).iter().any(|l| lexeme_is(l, arg))
            }
            ConditionKind::GroupContainsPos => s.lexemes_in(group).iter().any(|l| l.pos == arg),
            ConditionKind::BetweenGroupsLexeme
            | ConditionKind::BetweenGroupsPos
            | ConditionKind::BetweenGroupsPunctOrCc => {
                let other = match self.second_position.and_then(|p| s.group_at(anchor, p)) {
                    Some(g) => g,
                    None => return false,
                };
                let between = s.lexemes_between(group, other);
                match self.kind {
                    ConditionKind::BetweenGroupsLexeme => between.iter().any(|l| lexeme_is(l, arg)),
                    ConditionKind::BetweenGroupsPos => between.iter().any(|l| l.pos == arg),
                    _ => between.iter().any(is_punct_or_cc),
                }
            }
            ConditionKind::HeadWord => head(s, group).is_some_and(|h| {
                h.text.to_lowercase() == arg || lex.stems_of(&h.text).iter().any(|st| st == arg)
            }),
            ConditionKind::HeadPos => head(s, group).is_some_and(|h| h.pos == arg),
            ConditionKind::HeadInNamedEntity => group.named_entity.as_deref() == Some(arg),
            ConditionKind::HeadSubcatCategory => {
                head(s, group).is_some_and(|h| lex.subcat_of(&h.text).contains(arg))
            }
            ConditionKind::HeadSemanticClass => {
                head(s, group).is_some_and(|h| lex.classes_of(&h.text, group.kind).contains(arg))
            }
            ConditionKind::HeadInWordList => {
                head(s, group).is_some_and(|h| lex.in_word_list(&h.text, arg))
            }
        }
    }
}

fn head<'s>(s: &'s Sentence, g: &SyntaxGroup) -> Option<&'s Lexeme> {
    s.head_lexeme(g)
}

fn lexeme_is(l: &Lexeme, word: &str) -> bool {
    l.text.to_lowercase() == word
}

const PUNCT_TAGS: [&str; 9] = [",", ".", ":", "``", "''", "-LRB-", "-RRB-", "(", ")"];

pub(crate) fn is_punct_or_cc(l: &Lexeme) -> bool {
    l.pos == "CC"
        || PUNCT_TAGS.contains(&l.pos.as_str())
        || l.text.chars().all(|c| c.is_ascii_punctuation())
}

fn signed(p: isize) -> String {
    if p > 0 {
        format!("+{}", p)
    } else {
        p.to_string()
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            f.write_str("!")?;
        }
        write!(f, "{}@{}", self.kind, signed(self.position))?;
        if let Some(p) = self.second_position {
            write!(f, "..{}", signed(p))?;
        }
        if !self.argument.is_empty() {
            write!(f, "={}", self.argument)?;
        }
        Ok(())
    }
}

pub(crate) fn fmt_offset(p: isize) -> String {
    signed(p)
}

impl serde::Serialize for ConditionKind {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

impl<'de> serde::Deserialize<'de> for ConditionKind {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
