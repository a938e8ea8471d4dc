//! `relseq-rules v1` files: a header line, one metadata record, then one
//! JSON record per rule in sequence order. Lines starting with `#` are
//! ignored.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use super::{Action, ActionMode, Condition, ConditionKind, Rule, RuleEntry, RuleSequence, SequenceMeta};
use crate::corpus::{GroupKind, RelationLabel};
use crate::error::RuleFileError;
use crate::learner::TrainingConfig;

pub const RULES_HEADER: &str = "relseq-rules v1";
pub const RULE_FORMAT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MetaRecord {
    version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    config: Option<TrainingConfig>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConditionRecord {
    kind: String,
    pos: isize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pos2: Option<isize>,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    arg: String,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    neg: bool,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ActionRecord {
    mode: ActionMode,
    label: RelationLabel,
    offset: isize,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RuleRecord {
    anchor: GroupKind,
    conditions: Vec<ConditionRecord>,
    action: ActionRecord,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    comment: Option<String>,
}

impl RuleRecord {
    fn from_entry(e: &RuleEntry) -> Self {
        RuleRecord {
            anchor: e.rule.anchor_kind,
            conditions: e
                .rule
                .conditions()
                .iter()
                .map(|c| ConditionRecord {
                    kind: c.kind.as_str().to_string(),
                    pos: c.position,
                    pos2: c.second_position,
                    arg: c.argument.clone(),
                    neg: c.negated,
                })
                .collect(),
            action: ActionRecord {
                mode: e.rule.action.mode,
                label: e.rule.action.label,
                offset: e.rule.action.offset,
            },
            comment: e.comment.clone(),
        }
    }

    fn into_entry(self) -> Result<RuleEntry, String> {
        let conditions = self
            .conditions
            .into_iter()
            .map(|c| {
                Ok(Condition {
                    kind: c.kind.parse::<ConditionKind>()?,
                    position: c.pos,
                    second_position: c.pos2,
                    argument: c.arg,
                    negated: c.neg,
                })
            })
            .collect::<Result<Vec<_>, String>>()?;
        let rule = Rule::new(
            self.anchor,
            conditions,
            Action {
                mode: self.action.mode,
                label: self.action.label,
                offset: self.action.offset,
            },
        );
        rule.check()?;
        Ok(RuleEntry {
            rule,
            comment: self.comment,
        })
    }
}

pub fn read_rules<R: BufRead>(reader: R) -> Result<RuleSequence, RuleFileError> {
    let mut meta: Option<SequenceMeta> = None;
    let mut seen_header = false;
    let mut entries = Vec::new();

    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        if !seen_header {
            if trimmed != RULES_HEADER {
                return Err(RuleFileError::Header {
                    expected: RULES_HEADER,
                    found: trimmed.to_string(),
                });
            }
            seen_header = true;
            continue;
        }
        let syntax = |e: serde_json::Error| RuleFileError::Syntax {
            line: lineno,
            message: e.to_string(),
        };
        if meta.is_none() {
            let record: MetaRecord = serde_json::from_str(trimmed).map_err(syntax)?;
            if record.version != RULE_FORMAT_VERSION {
                return Err(RuleFileError::Version {
                    expected: RULE_FORMAT_VERSION,
                    found: record.version,
                });
            }
            meta = Some(SequenceMeta {
                version: record.version,
                config: record.config,
            });
            continue;
        }
        let record: RuleRecord = serde_json::from_str(trimmed).map_err(syntax)?;
        let entry = record
            .into_entry()
            .map_err(|reason| RuleFileError::Invalid { line: lineno, reason })?;
        entries.push(entry);
    }

    if !seen_header {
        return Err(RuleFileError::Header {
            expected: RULES_HEADER,
            found: String::new(),
        });
    }
    Ok(RuleSequence {
        meta: meta.unwrap_or_default(),
        entries,
    })
}

pub fn read_rules_str(text: &str) -> Result<RuleSequence, RuleFileError> {
    read_rules(text.as_bytes())
}

pub fn write_rules<W: Write>(seq: &RuleSequence, mut out: W) -> std::io::Result<()> {
    writeln!(out, "{}", RULES_HEADER)?;
    let meta = MetaRecord {
        version: seq.meta.version,
        config: seq.meta.config.clone(),
    };
    writeln!(out, "{}", serde_json::to_string(&meta).expect("metadata serializes"))?;
    for e in &seq.entries {
        let line = serde_json::to_string(&RuleRecord::from_entry(e)).expect("rules serialize");
        writeln!(out, "{}", line)?;
    }
    Ok(())
}

pub fn rules_to_string(seq: &RuleSequence) -> String {
    let mut buf = Vec::new();
    write_rules(seq, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("rule text is UTF-8")
}
