//! Recall, precision and f-score over relation triples.
//!
//! A response triple matches a key triple when label, source and target are
//! identical, so a correctly placed arc with the wrong label counts once as a
//! missed key and once as a spurious response. A [`LabelMerge`] maps several
//! labels onto one class before matching; triples keep their multiplicity, so
//! merging never lowers recall or precision.

mod propositions;
mod report;

use std::collections::{BTreeMap, HashMap};

use crate::corpus::{RelationInstance, RelationLabel, RelationSet};
use crate::error::EvalError;

pub use propositions::{emit_propositions, Proposition, Propositions, Var};

/// Harmonic mean of precision and recall, 0 when both are 0.
pub fn fscore(p: f64, r: f64) -> f64 {
    if p + r == 0.0 {
        0.0
    } else {
        2.0 * p * r / (p + r)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Score {
    pub matches: usize,
    pub key_total: usize,
    pub response_total: usize,
}

impl Score {
    pub fn recall(&self) -> f64 {
        ratio(self.matches, self.key_total)
    }

    /// Zero for an empty response.
    pub fn precision(&self) -> f64 {
        ratio(self.matches, self.response_total)
    }

    pub fn fscore(&self) -> f64 {
        fscore(self.precision(), self.recall())
    }

    pub fn missed(&self) -> usize {
        self.key_total - self.matches
    }

    pub fn spurious(&self) -> usize {
        self.response_total - self.matches
    }

    fn add(&mut self, other: Score) {
        self.matches += other.matches;
        self.key_total += other.key_total;
        self.response_total += other.response_total;
    }
}

fn ratio(a: usize, b: usize) -> f64 {
    if b == 0 {
        0.0
    } else {
        a as f64 / b as f64
    }
}

/// Maps every label to the class it is scored as.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelMerge {
    names: BTreeMap<RelationLabel, String>,
}

pub const MERGED_MODIFIER: &str = "mod-merged";

impl Default for LabelMerge {
    fn default() -> Self {
        LabelMerge::identity()
    }
}

impl LabelMerge {
    pub fn identity() -> Self {
        LabelMerge {
            names: RelationLabel::ALL
                .iter()
                .map(|l| (*l, l.as_str().to_string()))
                .collect(),
        }
    }

    /// Generic, locational and temporal modifiers scored as one class.
    pub fn modifiers() -> Self {
        LabelMerge::identity().merge(
            &[RelationLabel::Mod, RelationLabel::ModLoc, RelationLabel::ModTime],
            MERGED_MODIFIER,
        )
    }

    /// The modifier merge plus location objects and preposition-mediated
    /// arguments.
    pub fn combined() -> Self {
        LabelMerge::modifiers().merge(
            &[
                RelationLabel::LocObj,
                RelationLabel::PpSubj,
                RelationLabel::PpObj,
                RelationLabel::PpIo,
            ],
            MERGED_MODIFIER,
        )
    }

    pub fn merge(mut self, labels: &[RelationLabel], name: &str) -> Self {
        for l in labels {
            self.names.insert(*l, name.to_string());
        }
        self
    }

    pub fn name(&self, label: RelationLabel) -> &str {
        &self.names[&label]
    }

    /// Class names in label order, without repeats.
    pub fn classes(&self) -> Vec<&str> {
        let mut out: Vec<&str> = Vec::new();
        for l in RelationLabel::ALL {
            let n = self.name(l);
            if !out.contains(&n) {
                out.push(n);
            }
        }
        out
    }
}

/// Cumulative share of key relations by length, as in `<=1 <=2 <=3 >3`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DistanceTable {
    pub within: [usize; 3],
    pub beyond: usize,
    pub total: usize,
}

impl DistanceTable {
    fn add(&mut self, rel: &RelationInstance) {
        let d = rel.offset().unsigned_abs();
        self.total += 1;
        if d > 3 {
            self.beyond += 1;
        }
        for (i, slot) in self.within.iter_mut().enumerate() {
            if d <= i + 1 {
                *slot += 1;
            }
        }
    }

    /// Fractions for `<=1`, `<=2`, `<=3` and `>3`.
    pub fn fractions(&self) -> [f64; 4] {
        [
            ratio(self.within[0], self.total),
            ratio(self.within[1], self.total),
            ratio(self.within[2], self.total),
            ratio(self.beyond, self.total),
        ]
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Evaluation {
    pub overall: Score,
    /// Per merged class, in label order; classes with no key and no response
    /// are omitted.
    pub per_label: Vec<(String, Score)>,
    pub distance: DistanceTable,
}

fn score_sentence<'m>(
    predicted: &RelationSet,
    gold: &RelationSet,
    merge: &'m LabelMerge,
    per_label: &mut HashMap<&'m str, Score>,
) -> Score {
    let mut counts: HashMap<(&str, usize, usize), (usize, usize)> = HashMap::new();
    for r in predicted {
        counts.entry((merge.name(r.label), r.source, r.target)).or_default().0 += 1;
    }
    for r in gold {
        counts.entry((merge.name(r.label), r.source, r.target)).or_default().1 += 1;
    }
    let mut total = Score::default();
    for ((name, _, _), (np, ng)) in counts {
        let s = Score {
            matches: np.min(ng),
            key_total: ng,
            response_total: np,
        };
        per_label.entry(name).or_default().add(s);
        total.add(s);
    }
    total
}

/// Scores predicted against gold labelings, sentence by sentence.
pub fn score(
    predicted: &[RelationSet],
    gold: &[RelationSet],
    merge: &LabelMerge,
) -> Result<Evaluation, EvalError> {
    if predicted.len() != gold.len() {
        return Err(EvalError::ShapeMismatch {
            sentence: predicted.len().min(gold.len()),
            reason: format!(
                "{} predicted sentences against {} gold sentences",
                predicted.len(),
                gold.len()
            ),
        });
    }
    let mut overall = Score::default();
    let mut per_label: HashMap<&str, Score> = HashMap::new();
    let mut distance = DistanceTable::default();
    for (p, g) in predicted.iter().zip(gold) {
        overall.add(score_sentence(p, g, merge, &mut per_label));
        for rel in g {
            distance.add(rel);
        }
    }
    let per_label = merge
        .classes()
        .into_iter()
        .filter_map(|name| per_label.get(name).map(|s| (name.to_string(), *s)))
        .filter(|(_, s)| s.key_total + s.response_total > 0)
        .collect();
    Ok(Evaluation {
        overall,
        per_label,
        distance,
    })
}

/// Scores with generic, time and location modifiers merged.
pub fn merged_modifier_eval(predicted: &[RelationSet], gold: &[RelationSet]) -> Result<Score, EvalError> {
    Ok(score(predicted, gold, &LabelMerge::modifiers())?.overall)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::RelationLabel::*;

    fn set(triples: &[(RelationLabel, usize, usize)]) -> RelationSet {
        triples
            .iter()
            .map(|&(l, s, t)| RelationInstance::new(l, s, t))
            .collect()
    }

    #[test]
    fn fscore_of_headline_figures() {
        assert!((fscore(0.773, 0.636) - 0.6978).abs() < 1e-4);
        assert!((fscore(0.705, 0.546) - 0.6154).abs() < 1e-4);
        assert_eq!(fscore(0.0, 0.0), 0.0);
        for x in [0.1, 0.5, 0.93] {
            assert!((fscore(x, x) - x).abs() < 1e-12);
        }
    }

    #[test]
    fn perfect_and_empty_responses() {
        let gold = vec![set(&[(Subj, 0, 1), (Obj, 2, 1)])];
        let perfect = score(&gold, &gold, &LabelMerge::identity()).unwrap().overall;
        assert_eq!((perfect.recall(), perfect.precision(), perfect.fscore()), (1.0, 1.0, 1.0));
        let empty = score(&[RelationSet::new()], &gold, &LabelMerge::identity())
            .unwrap()
            .overall;
        assert_eq!((empty.recall(), empty.precision(), empty.fscore()), (0.0, 0.0, 0.0));
    }

    #[test]
    fn mistyped_modifier_is_double_penalised_unless_merged() {
        let gold = vec![set(&[(ModTime, 3, 1)])];
        let predicted = vec![set(&[(Mod, 3, 1)])];
        let plain = score(&predicted, &gold, &LabelMerge::identity()).unwrap().overall;
        assert_eq!((plain.matches, plain.missed(), plain.spurious()), (0, 1, 1));
        let merged = merged_modifier_eval(&predicted, &gold).unwrap();
        assert_eq!((merged.matches, merged.missed(), merged.spurious()), (1, 0, 0));

        let deleted = score(&[RelationSet::new()], &gold, &LabelMerge::identity())
            .unwrap()
            .overall;
        assert_eq!((deleted.missed(), deleted.spurious()), (1, 0));
    }

    #[test]
    fn merge_on_unaffected_labels_is_neutral() {
        let gold = vec![set(&[(Subj, 0, 1), (Obj, 2, 1)])];
        let predicted = vec![set(&[(Subj, 0, 1), (Obj, 3, 1)])];
        let a = score(&predicted, &gold, &LabelMerge::identity()).unwrap().overall;
        let b = merged_modifier_eval(&predicted, &gold).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn combined_merge_folds_pp_arguments() {
        let gold = vec![set(&[(PpObj, 3, 2), (LocObj, 1, 0)])];
        let predicted = vec![set(&[(Mod, 3, 2), (ModLoc, 1, 0)])];
        let s = score(&predicted, &gold, &LabelMerge::combined()).unwrap().overall;
        assert_eq!(s.matches, 2);
        let s = score(&predicted, &gold, &LabelMerge::modifiers()).unwrap().overall;
        assert_eq!(s.matches, 0);
    }

    #[test]
    fn shape_mismatch_names_sentence() {
        let err = score(&[RelationSet::new()], &[], &LabelMerge::identity()).unwrap_err();
        assert!(matches!(err, EvalError::ShapeMismatch { sentence: 0, .. }));
    }

    #[test]
    fn distance_buckets_are_cumulative() {
        let gold = vec![set(&[(Subj, 0, 1), (Obj, 3, 1), (Subj, 0, 3), (Mod, 5, 0)])];
        let e = score(&gold, &gold, &LabelMerge::identity()).unwrap();
        assert_eq!(e.distance.within, [1, 2, 3]);
        assert_eq!(e.distance.beyond, 1);
        assert_eq!(e.distance.fractions(), [0.25, 0.5, 0.75, 0.25]);
    }
}
