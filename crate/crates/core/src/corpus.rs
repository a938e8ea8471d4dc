//! Sentences, core syntax groups and grammatical relation graphs.
//!
//! Groups are produced upstream (chunker, tagger, attachment estimator); this
//! module only models, validates and (de)serializes them. Relations form a
//! graph per sentence: cycles and several incoming arcs are allowed.

use std::collections::BTreeSet;
use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::CorpusError;

/// Header line required at the top of every corpus file.
pub const CORPUS_HEADER: &str = "relseq-corpus v1";

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lexeme {
    pub text: String,
    pub pos: String,
    pub index: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GroupKind {
    Noun,
    Verb,
    Adverb,
    Adjective,
    /// Preposition, subordinate conjunction, wh-word or complementizer.
    In,
}

impl GroupKind {
    pub const ALL: [GroupKind; 5] = [
        GroupKind::Noun,
        GroupKind::Verb,
        GroupKind::Adverb,
        GroupKind::Adjective,
        GroupKind::In,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            GroupKind::Noun => "noun",
            GroupKind::Verb => "verb",
            GroupKind::Adverb => "adverb",
            GroupKind::Adjective => "adjective",
            GroupKind::In => "in",
        }
    }
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for GroupKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        GroupKind::ALL
            .into_iter()
            .find(|k| k.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown group kind `{}`", s))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerbProperty {
    Passive,
    Infinitival,
    /// Unconjugated present participle.
    PresentParticiple,
}

impl VerbProperty {
    pub const ALL: [VerbProperty; 3] = [
        VerbProperty::Passive,
        VerbProperty::Infinitival,
        VerbProperty::PresentParticiple,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            VerbProperty::Passive => "passive",
            VerbProperty::Infinitival => "infinitival",
            VerbProperty::PresentParticiple => "present-participle",
        }
    }
}

impl FromStr for VerbProperty {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        VerbProperty::ALL
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| format!("unknown verb property `{}`", s))
    }
}

/// A non-recursive core phrase.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SyntaxGroup {
    /// Position among the sentence's groups, left to right.
    pub id: usize,
    pub kind: GroupKind,
    /// Inclusive lexeme index range.
    pub span: (usize, usize),
    /// Lexeme index of the head word.
    pub head: usize,
    pub named_entity: Option<String>,
    pub verb_properties: BTreeSet<VerbProperty>,
    /// Estimated attachment of an IN group.
    pub attachment: Option<usize>,
}

impl SyntaxGroup {
    pub fn new(id: usize, kind: GroupKind, span: (usize, usize), head: usize) -> Self {
        SyntaxGroup {
            id,
            kind,
            span,
            head,
            named_entity: None,
            verb_properties: BTreeSet::new(),
            attachment: None,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Sentence {
    pub lexemes: Vec<Lexeme>,
    pub groups: Vec<SyntaxGroup>,
}

impl Sentence {
    /// The group `offset` groups away from `anchor`, if it exists.
    pub fn group_at(&self, anchor: usize, offset: isize) -> Option<&SyntaxGroup> {
        let id = anchor.checked_add_signed(offset)?;
        self.groups.get(id)
    }

    pub fn head_lexeme(&self, group: &SyntaxGroup) -> Option<&Lexeme> {
        self.lexemes.get(group.head)
    }

    /// Lexemes covered by the group's span.
    pub fn lexemes_in(&self, group: &SyntaxGroup) -> &[Lexeme] {
        let (lo, hi) = group.span;
        let hi = (hi + 1).min(self.lexemes.len());
        self.lexemes.get(lo..hi).unwrap_or(&[])
    }

    /// Lexemes strictly between the spans of two groups (in either order).
    pub fn lexemes_between(&self, a: &SyntaxGroup, b: &SyntaxGroup) -> &[Lexeme] {
        let (left, right) = if a.span.0 <= b.span.0 { (a, b) } else { (b, a) };
        let lo = left.span.1 + 1;
        let hi = right.span.0.min(self.lexemes.len());
        if lo >= hi {
            return &[];
        }
        &self.lexemes[lo..hi]
    }
}

/// Builds a sentence group by group. Each group's head defaults to its last
/// token.
#[derive(Debug, Default)]
pub struct SentenceBuilder {
    sentence: Sentence,
}

impl SentenceBuilder {
    pub fn new() -> Self {
        SentenceBuilder::default()
    }

    fn push_tokens(&mut self, tokens: &[(&str, &str)]) -> (usize, usize) {
        let lo = self.sentence.lexemes.len();
        for (text, pos) in tokens {
            let index = self.sentence.lexemes.len();
            self.sentence.lexemes.push(Lexeme {
                text: text.to_string(),
                pos: pos.to_string(),
                index,
            });
        }
        (lo, self.sentence.lexemes.len().saturating_sub(1))
    }

    pub fn group(mut self, kind: GroupKind, tokens: &[(&str, &str)]) -> Self {
        let span = self.push_tokens(tokens);
        let id = self.sentence.groups.len();
        self.sentence.groups.push(SyntaxGroup::new(id, kind, span, span.1));
        self
    }

    /// A lexeme outside every group.
    pub fn token(mut self, text: &str, pos: &str) -> Self {
        self.push_tokens(&[(text, pos)]);
        self
    }

    fn last(&mut self) -> &mut SyntaxGroup {
        self.sentence.groups.last_mut().expect("no group yet")
    }

    /// Sets the head of the last group to its `i`-th token.
    pub fn head(mut self, i: usize) -> Self {
        let g = self.last();
        g.head = g.span.0 + i;
        self
    }

    pub fn entity(mut self, tag: &str) -> Self {
        self.last().named_entity = Some(tag.to_string());
        self
    }

    pub fn verb_property(mut self, p: VerbProperty) -> Self {
        self.last().verb_properties.insert(p);
        self
    }

    pub fn attach(mut self, target: usize) -> Self {
        self.last().attachment = Some(target);
        self
    }

    pub fn build(self) -> Sentence {
        self.sentence
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum RelationLabel {
    #[serde(rename = "subj")]
    Subj,
    #[serde(rename = "obj")]
    Obj,
    #[serde(rename = "loc-obj")]
    LocObj,
    #[serde(rename = "indobj")]
    IndObj,
    #[serde(rename = "empty")]
    Empty,
    #[serde(rename = "pp-subj")]
    PpSubj,
    #[serde(rename = "pp-obj")]
    PpObj,
    #[serde(rename = "pp-io")]
    PpIo,
    #[serde(rename = "cop-subj")]
    CopSubj,
    #[serde(rename = "n-cop-obj")]
    NCopObj,
    #[serde(rename = "p-cop-obj")]
    PCopObj,
    #[serde(rename = "subset")]
    Subset,
    #[serde(rename = "mod")]
    Mod,
    #[serde(rename = "mod-loc")]
    ModLoc,
    #[serde(rename = "mod-time")]
    ModTime,
    #[serde(rename = "mod-poss")]
    ModPoss,
    #[serde(rename = "mod-quant")]
    ModQuant,
    #[serde(rename = "mod-ident")]
    ModIdent,
    #[serde(rename = "mod-scalar")]
    ModScalar,
}

impl RelationLabel {
    pub const ALL: [RelationLabel; 19] = [
        RelationLabel::Subj,
        RelationLabel::Obj,
        RelationLabel::LocObj,
        RelationLabel::IndObj,
        RelationLabel::Empty,
        RelationLabel::PpSubj,
        RelationLabel::PpObj,
        RelationLabel::PpIo,
        RelationLabel::CopSubj,
        RelationLabel::NCopObj,
        RelationLabel::PCopObj,
        RelationLabel::Subset,
        RelationLabel::Mod,
        RelationLabel::ModLoc,
        RelationLabel::ModTime,
        RelationLabel::ModPoss,
        RelationLabel::ModQuant,
        RelationLabel::ModIdent,
        RelationLabel::ModScalar,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RelationLabel::Subj => "subj",
            RelationLabel::Obj => "obj",
            RelationLabel::LocObj => "loc-obj",
            RelationLabel::IndObj => "indobj",
            RelationLabel::Empty => "empty",
            RelationLabel::PpSubj => "pp-subj",
            RelationLabel::PpObj => "pp-obj",
            RelationLabel::PpIo => "pp-io",
            RelationLabel::CopSubj => "cop-subj",
            RelationLabel::NCopObj => "n-cop-obj",
            RelationLabel::PCopObj => "p-cop-obj",
            RelationLabel::Subset => "subset",
            RelationLabel::Mod => "mod",
            RelationLabel::ModLoc => "mod-loc",
            RelationLabel::ModTime => "mod-time",
            RelationLabel::ModPoss => "mod-poss",
            RelationLabel::ModQuant => "mod-quant",
            RelationLabel::ModIdent => "mod-ident",
            RelationLabel::ModScalar => "mod-scalar",
        }
    }
}

impl fmt::Display for RelationLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RelationLabel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RelationLabel::ALL
            .into_iter()
            .find(|l| l.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown relation label `{}`", s))
    }
}

/// One labeled arc from `source` to `target` (group ids of one sentence).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RelationInstance {
    pub label: RelationLabel,
    pub source: usize,
    pub target: usize,
}

impl RelationInstance {
    pub fn new(label: RelationLabel, source: usize, target: usize) -> Self {
        RelationInstance {
            label,
            source,
            target,
        }
    }

    pub fn offset(&self) -> isize {
        group_offset(self.source, self.target)
    }
}

impl fmt::Display for RelationInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({}->{})", self.label, self.source, self.target)
    }
}

/// Signed distance from group `a` to group `b`; positive is rightward.
pub fn group_offset(a: usize, b: usize) -> isize {
    b as isize - a as isize
}

/// Set of relation triples of one sentence.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct RelationSet(BTreeSet<RelationInstance>);

impl RelationSet {
    pub fn new() -> Self {
        RelationSet::default()
    }

    /// Returns `false` if the triple was already present.
    pub fn insert(&mut self, rel: RelationInstance) -> bool {
        self.0.insert(rel)
    }

    /// Returns `false` if the triple was absent.
    pub fn remove(&mut self, rel: &RelationInstance) -> bool {
        self.0.remove(rel)
    }

    pub fn contains(&self, rel: &RelationInstance) -> bool {
        self.0.contains(rel)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &RelationInstance> + '_ {
        self.0.iter()
    }

    /// Number of triples shared with `other`.
    pub fn intersection_len(&self, other: &RelationSet) -> usize {
        self.0.intersection(&other.0).count()
    }
}

impl FromIterator<RelationInstance> for RelationSet {
    fn from_iter<I: IntoIterator<Item = RelationInstance>>(iter: I) -> Self {
        RelationSet(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a RelationSet {
    type Item = &'a RelationInstance;
    type IntoIter = std::collections::btree_set::Iter<'a, RelationInstance>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct AnnotatedSentence {
    pub sentence: Sentence,
    pub gold: RelationSet,
    /// Starting labeling for training or application; empty by default.
    pub initial: RelationSet,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct AnnotatedCorpus {
    pub sentences: Vec<AnnotatedSentence>,
}

impl AnnotatedCorpus {
    pub fn len(&self) -> usize {
        self.sentences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sentences.is_empty()
    }

    pub fn gold_sets(&self) -> Vec<RelationSet> {
        self.sentences.iter().map(|s| s.gold.clone()).collect()
    }

    pub fn initial_sets(&self) -> Vec<RelationSet> {
        self.sentences.iter().map(|s| s.initial.clone()).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Severity {
    Warning,
    Error,
}

/// A validation finding for one sentence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub sentence: usize,
    pub severity: Severity,
    pub message: String,
}

impl Diagnostic {
    fn error(sentence: usize, message: String) -> Self {
        Diagnostic {
            sentence,
            severity: Severity::Error,
            message,
        }
    }

    fn warning(sentence: usize, message: String) -> Self {
        Diagnostic {
            sentence,
            severity: Severity::Warning,
            message,
        }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "sentence:{} {}", self.sentence, self.message)
    }
}

/// Checks every corpus invariant. An empty result means the corpus is well formed.
pub fn validate(corpus: &AnnotatedCorpus) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    for (n, annotated) in corpus.sentences.iter().enumerate() {
        validate_sentence(n, annotated, &mut out);
    }
    out
}

fn validate_sentence(n: usize, annotated: &AnnotatedSentence, out: &mut Vec<Diagnostic>) {
    let s = &annotated.sentence;
    for (i, lexeme) in s.lexemes.iter().enumerate() {
        if lexeme.text.is_empty() {
            out.push(Diagnostic::error(n, format!("lexeme {} has empty text", i)));
        }
        if lexeme.index != i {
            out.push(Diagnostic::error(
                n,
                format!("lexeme {} carries index {}", i, lexeme.index),
            ));
        }
    }
    if s.groups.is_empty() {
        out.push(Diagnostic::warning(n, "sentence has no groups".to_string()));
    }

    let mut prev_hi: Option<usize> = None;
    for (i, g) in s.groups.iter().enumerate() {
        if g.id != i {
            out.push(Diagnostic::error(n, format!("group {} carries id {}", i, g.id)));
        }
        let (lo, hi) = g.span;
        if lo > hi || hi >= s.lexemes.len() {
            out.push(Diagnostic::error(
                n,
                format!("group {} span [{},{}] outside lexemes", i, lo, hi),
            ));
        }
        if g.head < lo || g.head > hi {
            out.push(Diagnostic::error(
                n,
                format!("group {} head {} outside span [{},{}]", i, g.head, lo, hi),
            ));
        }
        if let Some(p) = prev_hi {
            if lo <= p {
                out.push(Diagnostic::error(
                    n,
                    format!("group {} span overlaps or precedes group {}", i, i - 1),
                ));
            }
        }
        prev_hi = Some(hi);
        if !g.verb_properties.is_empty() && g.kind != GroupKind::Verb {
            out.push(Diagnostic::error(
                n,
                format!("group {} has verb properties but is a {} group", i, g.kind),
            ));
        }
        if let Some(t) = g.attachment {
            if g.kind != GroupKind::In {
                out.push(Diagnostic::error(
                    n,
                    format!("group {} has an attachment but is a {} group", i, g.kind),
                ));
            }
            if t >= s.groups.len() {
                out.push(Diagnostic::error(
                    n,
                    format!("group {} attaches to missing group {}", i, t),
                ));
            }
        }
        if matches!(&g.named_entity, Some(ne) if ne.is_empty()) {
            out.push(Diagnostic::error(n, format!("group {} has empty entity tag", i)));
        }
    }

    for (which, set) in [("gold", &annotated.gold), ("initial", &annotated.initial)] {
        for rel in set {
            if rel.source == rel.target {
                out.push(Diagnostic::error(n, format!("{} relation {} is a self loop", which, rel)));
            }
            if rel.source >= s.groups.len() || rel.target >= s.groups.len() {
                out.push(Diagnostic::error(
                    n,
                    format!("{} relation {} references a missing group", which, rel),
                ));
            }
        }
    }
}

// On-disk records. One JSON object per line after the header.

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TokenRecord {
    text: String,
    pos: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupRecord {
    kind: GroupKind,
    span: [usize; 2],
    head: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    ne: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    vprops: Vec<VerbProperty>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    attach: Option<usize>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SentenceRecord {
    tokens: Vec<TokenRecord>,
    groups: Vec<GroupRecord>,
    gold: Vec<(RelationLabel, usize, usize)>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    initial: Vec<(RelationLabel, usize, usize)>,
}

/// Result of reading a corpus file: the corpus plus non-fatal findings.
#[derive(Debug)]
pub struct ParsedCorpus {
    pub corpus: AnnotatedCorpus,
    pub warnings: Vec<Diagnostic>,
}

fn collect_relations(
    n: usize,
    which: &str,
    triples: Vec<(RelationLabel, usize, usize)>,
    warnings: &mut Vec<Diagnostic>,
) -> RelationSet {
    let mut set = RelationSet::new();
    for (label, source, target) in triples {
        let rel = RelationInstance::new(label, source, target);
        if !set.insert(rel) {
            warnings.push(Diagnostic::warning(
                n,
                format!("duplicate {} relation {} collapsed", which, rel),
            ));
        }
    }
    set
}

impl SentenceRecord {
    fn into_annotated(self, n: usize, warnings: &mut Vec<Diagnostic>) -> AnnotatedSentence {
        let lexemes = self
            .tokens
            .into_iter()
            .enumerate()
            .map(|(index, t)| Lexeme {
                text: t.text,
                pos: t.pos,
                index,
            })
            .collect();
        let groups = self
            .groups
            .into_iter()
            .enumerate()
            .map(|(id, g)| SyntaxGroup {
                id,
                kind: g.kind,
                span: (g.span[0], g.span[1]),
                head: g.head,
                named_entity: g.ne,
                verb_properties: g.vprops.into_iter().collect(),
                attachment: g.attach,
            })
            .collect();
        AnnotatedSentence {
            sentence: Sentence { lexemes, groups },
            gold: collect_relations(n, "gold", self.gold, warnings),
            initial: collect_relations(n, "initial", self.initial, warnings),
        }
    }

    fn from_annotated(s: &AnnotatedSentence) -> Self {
        let triples = |set: &RelationSet| {
            set.iter()
                .map(|r| (r.label, r.source, r.target))
                .collect::<Vec<_>>()
        };
        SentenceRecord {
            tokens: s
                .sentence
                .lexemes
                .iter()
                .map(|l| TokenRecord {
                    text: l.text.clone(),
                    pos: l.pos.clone(),
                })
                .collect(),
            groups: s
                .sentence
                .groups
                .iter()
                .map(|g| GroupRecord {
                    kind: g.kind,
                    span: [g.span.0, g.span.1],
                    head: g.head,
                    ne: g.named_entity.clone(),
                    vprops: g.verb_properties.iter().copied().collect(),
                    attach: g.attachment,
                })
                .collect(),
            gold: triples(&s.gold),
            initial: triples(&s.initial),
        }
    }
}

/// Reads a corpus file. Blank lines are skipped; an entirely empty input is an
/// empty corpus.
pub fn parse_corpus<R: BufRead>(reader: R) -> Result<ParsedCorpus, CorpusError> {
    let mut sentences = Vec::new();
    let mut warnings = Vec::new();
    let mut seen_header = false;

    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if !seen_header {
            if trimmed != CORPUS_HEADER {
                return Err(CorpusError::Header {
                    expected: CORPUS_HEADER,
                    found: trimmed.to_string(),
                });
            }
            seen_header = true;
            continue;
        }
        let record: SentenceRecord =
            serde_json::from_str(trimmed).map_err(|e| CorpusError::Syntax {
                line: lineno,
                message: e.to_string(),
            })?;
        let n = sentences.len();
        sentences.push(record.into_annotated(n, &mut warnings));
    }

    let corpus = AnnotatedCorpus { sentences };
    let mut fatal = None;
    for d in validate(&corpus) {
        if d.is_error() {
            fatal.get_or_insert(d);
        } else {
            warnings.push(d);
        }
    }
    if let Some(d) = fatal {
        return Err(CorpusError::Invariant {
            sentence: d.sentence,
            reason: d.message,
        });
    }
    for w in &warnings {
        log::warn!("{}", w);
    }
    Ok(ParsedCorpus { corpus, warnings })
}

pub fn parse_corpus_str(text: &str) -> Result<ParsedCorpus, CorpusError> {
    parse_corpus(text.as_bytes())
}

pub fn write_corpus<W: Write>(corpus: &AnnotatedCorpus, mut out: W) -> std::io::Result<()> {
    writeln!(out, "{}", CORPUS_HEADER)?;
    for s in &corpus.sentences {
        let line = serde_json::to_string(&SentenceRecord::from_annotated(s))
            .expect("corpus records always serialize");
        writeln!(out, "{}", line)?;
    }
    Ok(())
}

pub fn corpus_to_string(corpus: &AnnotatedCorpus) -> String {
    let mut buf = Vec::new();
    write_corpus(corpus, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("corpus text is UTF-8")
}

#[cfg(test)]
mod tests {
    use super::*;

    // "[I] [saw] [the cat] [that] [ran]" with subj, obj, subj, mod arcs.
    const CAT_THAT_RAN: &str = r#"relseq-corpus v1
{"tokens":[{"text":"I","pos":"PRP"},{"text":"saw","pos":"VBD"},{"text":"the","pos":"DT"},{"text":"cat","pos":"NN"},{"text":"that","pos":"WDT"},{"text":"ran","pos":"VBD"}],"groups":[{"kind":"noun","span":[0,0],"head":0},{"kind":"verb","span":[1,1],"head":1},{"kind":"noun","span":[2,3],"head":3},{"kind":"in","span":[4,4],"head":4,"attach":2},{"kind":"verb","span":[5,5],"head":5}],"gold":[["subj",0,1],["obj",2,1],["subj",2,4],["mod",4,2]]}
"#;

    #[test]
    fn parses_relation_graph_with_cycle() {
        let parsed = parse_corpus_str(CAT_THAT_RAN).unwrap();
        assert!(parsed.warnings.is_empty());
        let s = &parsed.corpus.sentences[0];
        assert_eq!(s.sentence.groups.len(), 5);
        assert_eq!(s.gold.len(), 4);
        assert!(s.gold.contains(&RelationInstance::new(RelationLabel::Subj, 2, 4)));
        assert!(s.gold.contains(&RelationInstance::new(RelationLabel::Mod, 4, 2)));
    }

    #[test]
    fn empty_input_is_empty_corpus() {
        assert!(parse_corpus_str("").unwrap().corpus.is_empty());
    }

    #[test]
    fn duplicate_gold_collapses_with_warning() {
        let text = CAT_THAT_RAN.replace(r#"["subj",0,1],"#, r#"["subj",0,1],["subj",0,1],"#);
        let parsed = parse_corpus_str(&text).unwrap();
        assert_eq!(parsed.corpus.sentences[0].gold.len(), 4);
        assert_eq!(parsed.warnings.len(), 1);
        assert!(parsed.warnings[0].message.contains("duplicate"));
    }

    #[test]
    fn syntax_error_reports_line() {
        let text = format!("{}\n\n{{\"tokens\": [}}\n", CORPUS_HEADER);
        match parse_corpus_str(&text) {
            Err(CorpusError::Syntax { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {:?}", other),
        }
    }

    #[test]
    fn unknown_field_rejected() {
        let text = CAT_THAT_RAN.replace(r#""gold":"#, r#""extra":1,"gold":"#);
        assert!(matches!(
            parse_corpus_str(&text),
            Err(CorpusError::Syntax { line: 2, .. })
        ));
    }

    #[test]
    fn missing_header_rejected() {
        let body = CAT_THAT_RAN.lines().nth(1).unwrap();
        assert!(matches!(
            parse_corpus_str(body),
            Err(CorpusError::Header { .. })
        ));
    }

    #[test]
    fn invariant_violation_names_sentence() {
        let text = CAT_THAT_RAN.replace(r#"["mod",4,2]"#, r#"["mod",4,9]"#);
        match parse_corpus_str(&text) {
            Err(CorpusError::Invariant { sentence, reason }) => {
                assert_eq!(sentence, 0);
                assert!(reason.contains("missing group"));
            }
            other => panic!("unexpected {:?}", other),
        }
    }

    #[test]
    fn offsets() {
        assert_eq!(group_offset(0, 2), 2);
        assert_eq!(group_offset(3, 1), -2);
        assert_eq!(group_offset(1, 1), 0);
    }

    #[test]
    fn attachment_on_noun_group_is_flagged() {
        let mut corpus = parse_corpus_str(CAT_THAT_RAN).unwrap().corpus;
        corpus.sentences[0].sentence.groups[0].attachment = Some(1);
        let diags = validate(&corpus);
        assert_eq!(diags.len(), 1, "{:?}", diags);
        assert_eq!(diags[0].sentence, 0);
        assert!(diags[0].to_string().starts_with("sentence:0 group 0"));
    }

    #[test]
    fn dangling_relation_is_flagged() {
        let mut corpus = parse_corpus_str(CAT_THAT_RAN).unwrap().corpus;
        corpus.sentences[0]
            .gold
            .insert(RelationInstance::new(RelationLabel::Obj, 1, 5));
        assert_eq!(validate(&corpus).len(), 1);
    }

    #[test]
    fn between_ignores_order() {
        let corpus = parse_corpus_str(CAT_THAT_RAN).unwrap().corpus;
        let s = &corpus.sentences[0].sentence;
        let (a, b) = (&s.groups[1], &s.groups[3]);
        let fwd: Vec<_> = s.lexemes_between(a, b).iter().map(|l| &l.text).collect();
        let back: Vec<_> = s.lexemes_between(b, a).iter().map(|l| &l.text).collect();
        assert_eq!(fwd, vec!["the", "cat"]);
        assert_eq!(fwd, back);
        assert!(s.lexemes_between(&s.groups[0], &s.groups[1]).is_empty());
    }

    #[test]
    fn relation_set_edits_are_idempotent() {
        let mut set = RelationSet::new();
        let r = RelationInstance::new(RelationLabel::Subj, 0, 1);
        assert!(set.insert(r));
        assert!(!set.insert(r));
        assert_eq!(set.len(), 1);
        assert!(set.remove(&r));
        assert!(!set.remove(&r));
        assert!(set.is_empty());
    }
}
