use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::engine::ConditionKind;
use crate::error::ConfigError;

/// Search restrictions and the stopping threshold for training.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrainingConfig {
    /// Training stops once the best rule gains less than this.
    pub gain_threshold: i64,
    /// Conditions per rule, not counting the anchor kind.
    pub max_conditions: usize,
    /// Largest |offset| of an action.
    pub max_distance: usize,
    /// The only lexemes single-lexeme tests may name.
    pub lexeme_whitelist: BTreeSet<String>,
    /// Condition kinds that may not be negated.
    pub negation_forbidden: BTreeSet<ConditionKind>,
    /// Restrict pp-attachment tests to the anchor itself.
    pub pp_attachment_anchor_only: bool,
}

pub const DEFAULT_DETERMINERS: [&str; 7] = ["the", "a", "an", "this", "that", "these", "those"];

impl Default for TrainingConfig {
    fn default() -> Self {
        let mut whitelist: BTreeSet<String> = ["of", "?"].iter().map(|s| s.to_string()).collect();
        whitelist.extend(DEFAULT_DETERMINERS.iter().map(|s| s.to_string()));
        TrainingConfig {
            gain_threshold: 4,
            max_conditions: 3,
            max_distance: 3,
            lexeme_whitelist: whitelist,
            negation_forbidden: [
                ConditionKind::GroupContainsLexeme,
                ConditionKind::BetweenGroupsLexeme,
                ConditionKind::GroupContainsPos,
            ]
            .into_iter()
            .collect(),
            pp_attachment_anchor_only: true,
        }
    }
}

impl TrainingConfig {
    pub fn check(&self) -> Result<(), ConfigError> {
        if self.gain_threshold < 1 {
            return Err(ConfigError::Invalid("gain_threshold must be >= 1".into()));
        }
        if self.max_distance < 1 {
            return Err(ConfigError::Invalid("max_distance must be >= 1".into()));
        }
        Ok(())
    }

    pub fn may_negate(&self, kind: ConditionKind) -> bool {
        !self.negation_forbidden.contains(&kind)
    }

    /// Reads the flat `key=value` format, starting from the defaults.
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = TrainingConfig::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| ConfigError::Syntax {
                line: i + 1,
                message: format!("expected key=value, got `{}`", line),
            })?;
            cfg.set(key.trim(), value.trim())
                .map_err(|message| ConfigError::Syntax { line: i + 1, message })?;
        }
        cfg.check()?;
        Ok(cfg)
    }

    /// Sets one field from its textual form.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        let int = |v: &str| v.parse::<i64>().map_err(|e| format!("{}: {}", key, e));
        let list = |v: &str| {
            v.split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(str::to_string)
                .collect::<Vec<_>>()
        };
        match key {
            "gain_threshold" => self.gain_threshold = int(value)?,
            "max_conditions" => {
                self.max_conditions = usize::try_from(int(value)?).map_err(|e| e.to_string())?
            }
            "max_distance" => {
                self.max_distance = usize::try_from(int(value)?).map_err(|e| e.to_string())?
            }
            "lexeme_whitelist" => {
                self.lexeme_whitelist = list(value).into_iter().map(|w| w.to_lowercase()).collect()
            }
            "negation_forbidden" => {
                self.negation_forbidden = list(value)
                    .iter()
                    .map(|k| k.parse::<ConditionKind>())
                    .collect::<Result<_, _>>()?
            }
            "pp_attachment_anchor_only" => {
                self.pp_attachment_anchor_only = value
                    .parse()
                    .map_err(|_| format!("{}: expected true or false", key))?
            }
            _ => return Err(format!("unknown key `{}`", key)),
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let join = |items: Vec<&str>| items.join(",");
        let mut out = String::new();
        let _ = writeln!(out, "gain_threshold={}", self.gain_threshold);
        let _ = writeln!(out, "max_conditions={}", self.max_conditions);
        let _ = writeln!(out, "max_distance={}", self.max_distance);
        let _ = writeln!(
            out,
            "lexeme_whitelist={}",
            join(self.lexeme_whitelist.iter().map(String::as_str).collect())
        );
        let _ = writeln!(
            out,
            "negation_forbidden={}",
            join(self.negation_forbidden.iter().map(|k| k.as_str()).collect())
        );
        let _ = writeln!(out, "pp_attachment_anchor_only={}", self.pp_attachment_anchor_only);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        let cfg = TrainingConfig::default();
        assert_eq!(cfg.gain_threshold, 4);
        assert_eq!(cfg.max_conditions, 3);
        assert_eq!(cfg.max_distance, 3);
        assert!(cfg.lexeme_whitelist.contains("of"));
        assert!(cfg.lexeme_whitelist.contains("?"));
        assert!(cfg.lexeme_whitelist.contains("the"));
        assert!(!cfg.may_negate(ConditionKind::GroupContainsPos));
        assert!(cfg.may_negate(ConditionKind::HeadWord));
    }

    #[test]
    fn text_round_trip() {
        let cfg = TrainingConfig {
            gain_threshold: 2,
            negation_forbidden: Default::default(),
            ..TrainingConfig::default()
        };
        assert_eq!(TrainingConfig::parse(&cfg.to_text()).unwrap(), cfg);
    }

    #[test]
    fn rejects_bad_lines() {
        assert!(matches!(
            TrainingConfig::parse("# c\nfoo=1\n"),
            Err(ConfigError::Syntax { line: 2, .. })
        ));
        assert!(TrainingConfig::parse("gain_threshold\n").is_err());
        assert!(matches!(
            TrainingConfig::parse("gain_threshold=0\n"),
            Err(ConfigError::Invalid(_))
        ));
        assert!(TrainingConfig::parse("negation_forbidden=nope\n").is_err());
    }
}
