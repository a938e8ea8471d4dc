//! Neo-Davidsonian reading of a relation graph.
//!
//! Noun groups introduce entity variables and a unary predicate over their
//! head. Verb groups, and nouns whose head can denote an act or a process,
//! are predicates taking the SUBJ source as first argument and the OBJ source
//! as second. MOD arcs become `mod(modifier, modified)`. An eventive group
//! gets an event variable only when something refers to it.

use std::collections::BTreeMap;
use std::fmt;

use crate::corpus::{GroupKind, RelationInstance, RelationLabel, RelationSet, Sentence, SyntaxGroup};
use crate::lexicon::LexiconBundle;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    Entity(usize),
    Event(usize),
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::Entity(n) => write!(f, "x{}", n),
            Var::Event(n) => write!(f, "e{}", n),
        }
    }
}

/// `predicate(args)`, optionally naming its event variable (`=e3`). A
/// missing first argument is written `_`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Proposition {
    pub predicate: String,
    pub args: Vec<Option<Var>>,
    pub event: Option<Var>,
}

impl fmt::Display for Proposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.predicate)?;
        for (i, a) in self.args.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            match a {
                Some(v) => write!(f, "{}", v)?,
                None => f.write_str("_")?,
            }
        }
        f.write_str(")")?;
        if let Some(e) = self.event {
            write!(f, "={}", e)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Propositions {
    pub propositions: Vec<Proposition>,
    /// Relations with no propositional reading here.
    pub unmapped: Vec<RelationInstance>,
}

impl fmt::Display for Propositions {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.propositions {
            writeln!(f, "{}", p)?;
        }
        for r in &self.unmapped {
            writeln!(f, "unmapped {}", r)?;
        }
        Ok(())
    }
}

const EVENT_NOUN_CLASSES: [&str; 2] = ["act", "process"];

fn is_eventive(s: &Sentence, g: &SyntaxGroup, lex: &LexiconBundle) -> bool {
    match g.kind {
        GroupKind::Verb => true,
        GroupKind::Noun => s.head_lexeme(g).is_some_and(|h| {
            let classes = lex.classes_of(&h.text, GroupKind::Noun);
            EVENT_NOUN_CLASSES.iter().any(|c| classes.contains(*c))
        }),
        _ => false,
    }
}

struct Vars {
    next: usize,
    assigned: BTreeMap<usize, Var>,
}

impl Vars {
    fn get(&mut self, group: usize, eventive: bool) -> Var {
        *self.assigned.entry(group).or_insert_with(|| {
            self.next += 1;
            if eventive {
                Var::Event(self.next)
            } else {
                Var::Entity(self.next)
            }
        })
    }
}

pub fn emit_propositions(s: &Sentence, rels: &RelationSet, lex: &LexiconBundle) -> Propositions {
    let eventive: Vec<bool> = s.groups.iter().map(|g| is_eventive(s, g, lex)).collect();
    let head_text = |g: &SyntaxGroup| {
        s.head_lexeme(g)
            .map(|h| h.text.clone())
            .unwrap_or_default()
    };
    let mut vars = Vars {
        next: 0,
        assigned: BTreeMap::new(),
    };
    for g in &s.groups {
        if g.kind == GroupKind::Noun && !eventive[g.id] {
            vars.get(g.id, false);
        }
    }

    let mut out = Propositions::default();
    let mapped = |r: &RelationInstance| match r.label {
        RelationLabel::Subj | RelationLabel::Obj => eventive.get(r.target).copied().unwrap_or(false),
        RelationLabel::Mod => r.source < s.groups.len() && r.target < s.groups.len(),
        _ => false,
    };
    out.unmapped = rels.iter().filter(|r| !mapped(r)).copied().collect();

    // Argument lists first so that variable numbering follows reference order.
    let mut predicates: Vec<(usize, Vec<Var>, Vec<Var>)> = Vec::new();
    for g in s.groups.iter().filter(|g| eventive[g.id]) {
        let mut args = |label| -> Vec<Var> {
            rels.iter()
                .filter(|r| r.label == label && r.target == g.id)
                .map(|r| vars.get(r.source, eventive[r.source]))
                .collect()
        };
        let subj = args(RelationLabel::Subj);
        let obj = args(RelationLabel::Obj);
        predicates.push((g.id, subj, obj));
    }
    let mods: Vec<(Var, Var)> = rels
        .iter()
        .filter(|r| r.label == RelationLabel::Mod && mapped(r))
        .map(|r| {
            (
                vars.get(r.source, eventive[r.source]),
                vars.get(r.target, eventive[r.target]),
            )
        })
        .collect();

    let mut by_group: BTreeMap<usize, Vec<Proposition>> = BTreeMap::new();
    for g in &s.groups {
        if g.kind == GroupKind::Noun && !eventive[g.id] {
            by_group.entry(g.id).or_default().push(Proposition {
                predicate: head_text(g),
                args: vec![Some(vars.assigned[&g.id])],
                event: None,
            });
        }
    }
    for (id, subj, obj) in predicates {
        let event = vars.assigned.get(&id).copied();
        let subj: Vec<Option<Var>> = if subj.is_empty() && !obj.is_empty() {
            vec![None]
        } else {
            subj.into_iter().map(Some).collect()
        };
        let obj: Vec<Option<Var>> = if obj.is_empty() { vec![] } else { obj.into_iter().map(Some).collect() };
        let mut arg_lists: Vec<Vec<Option<Var>>> = Vec::new();
        match (subj.is_empty(), obj.is_empty()) {
            (true, _) => arg_lists.push(vec![]),
            (false, true) => arg_lists.extend(subj.iter().map(|s| vec![*s])),
            (false, false) => {
                for s in &subj {
                    for o in &obj {
                        arg_lists.push(vec![*s, *o]);
                    }
                }
            }
        }
        let predicate = head_text(&s.groups[id]);
        by_group.entry(id).or_default().extend(arg_lists.into_iter().map(|args| Proposition {
            predicate: predicate.clone(),
            args,
            event,
        }));
    }

    out.propositions = by_group.into_values().flatten().collect();
    out.propositions.extend(mods.into_iter().map(|(a, b)| Proposition {
        predicate: "mod".to_string(),
        args: vec![Some(a), Some(b)],
        event: None,
    }));
    out
}
