//! Corpus-level acknowledgment statistics.
//!
//! A repair exchange is a root exchange whose subtree contains an `mrequest`
//! or `mdirect` act. The repair rate is the number of classified
//! acknowledgments inside repair exchanges divided by the number of distinct
//! turns those exchanges touch; the non-repair rate covers every other
//! acknowledgment and the remaining turns.

use std::collections::{BTreeMap, BTreeSet};

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::classify::{AcknClassification, PatternId, StructuralClass};
use crate::dialogue::{Dialogue, Speaker, UttRef};
use crate::exchange::ExchangeTree;

/// Acknowledgments over turns, kept as raw counts so reports merge exactly.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RateCounts {
    pub ackn: usize,
    pub turns: usize,
}

impl RateCounts {
    pub fn rate(&self) -> Option<f64> {
        (self.turns > 0).then(|| self.ackn as f64 / self.turns as f64)
    }

    fn merge(&mut self, other: RateCounts) {
        self.ackn += other.ackn;
        self.turns += other.turns;
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct CorpusReport {
    pub dialogue_count: usize,
    pub turn_count: usize,
    pub ackn_count: usize,
    /// Acknowledgments whose governing exchange has an embedded initiation.
    pub embedded_count: usize,
    pub per_class: BTreeMap<StructuralClass, usize>,
    pub per_pattern: BTreeMap<PatternId, usize>,
    pub per_speaker: BTreeMap<Speaker, usize>,
    pub repair: RateCounts,
    pub nonrepair: RateCounts,
}

impl CorpusReport {
    pub fn new() -> Self {
        CorpusReport {
            per_class: StructuralClass::ALL.into_iter().map(|c| (c, 0)).collect(),
            ..Default::default()
        }
    }

    pub fn ackn_per_turn(&self) -> Option<f64> {
        (self.turn_count > 0).then(|| self.ackn_count as f64 / self.turn_count as f64)
    }

    pub fn repair_rate(&self) -> Option<f64> {
        self.repair.rate()
    }

    pub fn nonrepair_rate(&self) -> Option<f64> {
        self.nonrepair.rate()
    }

    /// Adds one analysed dialogue.
    pub fn add(&mut self, d: &Dialogue, t: &ExchangeTree, classifications: &[AcknClassification]) {
        self.dialogue_count += 1;
        self.turn_count += d.turns.len();
        self.ackn_count += classifications.len();

        for c in classifications {
            *self.per_class.entry(c.class).or_default() += 1;
            *self.per_pattern.entry(c.pattern).or_default() += 1;
            *self.per_speaker.entry(c.speaker.clone()).or_default() += 1;
            if c.embedded {
                self.embedded_count += 1;
            }
        }

        let mut repair_sites: BTreeSet<UttRef> = BTreeSet::new();
        for root in &t.roots {
            let sites = root.utterances();
            let is_repair = sites
                .iter()
                .any(|&s| d.utterance(s).is_some_and(|u| u.act.is_meta()));
            if is_repair {
                repair_sites.extend(sites);
            }
        }
        let repair_turns: BTreeSet<usize> = repair_sites.iter().map(|s| s.turn).collect();
        let repair_ackn = classifications
            .iter()
            .filter(|c| repair_sites.contains(&c.site))
            .count();
        self.repair.merge(RateCounts {
            ackn: repair_ackn,
            turns: repair_turns.len(),
        });
        self.nonrepair.merge(RateCounts {
            ackn: classifications.len() - repair_ackn,
            turns: d.turns.len() - repair_turns.len(),
        });
    }

    /// Combines two partial reports; associative and commutative.
    pub fn merge(mut self, other: &CorpusReport) -> CorpusReport {
        self.dialogue_count += other.dialogue_count;
        self.turn_count += other.turn_count;
        self.ackn_count += other.ackn_count;
        self.embedded_count += other.embedded_count;
        for (&k, &v) in &other.per_class {
            *self.per_class.entry(k).or_default() += v;
        }
        for (&k, &v) in &other.per_pattern {
            *self.per_pattern.entry(k).or_default() += v;
        }
        for (k, &v) in &other.per_speaker {
            *self.per_speaker.entry(k.clone()).or_default() += v;
        }
        self.repair.merge(other.repair);
        self.nonrepair.merge(other.nonrepair);
        self
    }
}

/// Aggregates analysed dialogues into one report.
pub fn aggregate<'a, I>(corpus: I) -> CorpusReport
where
    I: IntoIterator<Item = (&'a Dialogue, &'a ExchangeTree, &'a [AcknClassification])>,
{
    let mut report = CorpusReport::new();
    for (d, t, c) in corpus {
        report.add(d, t, c);
    }
    report
}

impl Serialize for CorpusReport {
    /// Fixed key order; undefined ratios are omitted.
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("CorpusReport", 13)?;
        s.serialize_field("dialogue_count", &self.dialogue_count)?;
        s.serialize_field("turn_count", &self.turn_count)?;
        s.serialize_field("ackn_count", &self.ackn_count)?;
        match self.ackn_per_turn() {
            Some(r) => s.serialize_field("ackn_per_turn", &r)?,
            None => s.skip_field("ackn_per_turn")?,
        }
        s.serialize_field("embedded_count", &self.embedded_count)?;
        s.serialize_field("per_class", &self.per_class)?;
        s.serialize_field("per_pattern", &self.per_pattern)?;
        s.serialize_field("per_speaker", &self.per_speaker)?;
        match self.repair_rate() {
            Some(r) => s.serialize_field("repair_rate", &r)?,
            None => s.skip_field("repair_rate")?,
        }
        match self.nonrepair_rate() {
            Some(r) => s.serialize_field("nonrepair_rate", &r)?,
            None => s.skip_field("nonrepair_rate")?,
        }
        s.serialize_field("repair", &self.repair)?;
        s.serialize_field("nonrepair", &self.nonrepair)?;
        s.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::classify_acknowledgments;
    use crate::dialogue::{SpeechActTag, Turn, Utterance};
    use crate::exchange::parse_exchanges;
    use SpeechActTag::*;

    fn analysed(
        turns: &[(&str, &[SpeechActTag])],
    ) -> (Dialogue, ExchangeTree, Vec<AcknClassification>) {
        let d = Dialogue::new(
            "t",
            [Speaker::new("W").unwrap(), Speaker::new("U").unwrap()],
            turns
                .iter()
                .map(|(s, acts)| {
                    Turn::new(
                        Speaker::new(s).unwrap(),
                        acts.iter().map(|&a| Utterance::new(a)).collect(),
                    )
                })
                .collect(),
        );
        let t = parse_exchanges(&d);
        let c = classify_acknowledgments(&t, &d).unwrap();
        (d, t, c)
    }

    #[test]
    fn empty_corpus_has_no_ratios() {
        let r = aggregate(std::iter::empty());
        assert_eq!(r.dialogue_count, 0);
        assert_eq!(r.ackn_count, 0);
        assert_eq!(r.ackn_per_turn(), None);
        assert_eq!(r.repair_rate(), None);
        assert_eq!(r.nonrepair_rate(), None);
        let json = serde_json::to_string(&r).unwrap();
        assert!(!json.contains("ackn_per_turn"));
        assert!(json.starts_with(
            r#"{"dialogue_count":0,"turn_count":0,"ackn_count":0,"embedded_count":0"#
        ));
    }

    #[test]
    fn repair_split() {
        let (d, t, c) = analysed(&[("W", &[Inform]), ("U", &[Ackn, Mrequest]), ("W", &[Inform])]);
        let r = aggregate([(&d, &t, c.as_slice())]);
        assert_eq!(r.repair, RateCounts { ackn: 1, turns: 2 });
        assert_eq!(r.nonrepair, RateCounts { ackn: 0, turns: 1 });
        assert_eq!(r.repair_rate(), Some(0.5));
        assert_eq!(r.nonrepair_rate(), Some(0.0));
    }

    #[test]
    fn sums_and_speakers() {
        let (d, t, c) = analysed(&[
            ("W", &[Inform]),
            ("U", &[Ackn]),
            ("W", &[Ackn]),
            ("U", &[Ackn, Assess]),
        ]);
        let r = aggregate([(&d, &t, c.as_slice())]);
        assert_eq!(r.ackn_count, 3);
        assert_eq!(r.per_class.values().sum::<usize>(), 3);
        assert_eq!(r.per_pattern.values().sum::<usize>(), 3);
        assert_eq!(r.per_pattern[&PatternId::InformAckn], 2);
        assert_eq!(r.per_speaker[&Speaker::new("U").unwrap()], 2);
        assert_eq!(r.embedded_count, 1);
        assert_eq!(r.ackn_per_turn(), Some(0.75));
    }

    #[test]
    fn merge_matches_sequential_add() {
        let a = analysed(&[("W", &[Inform]), ("U", &[Ackn])]);
        let b = analysed(&[("W", &[Mdirect]), ("U", &[Ackn]), ("W", &[Ackn])]);
        let whole = aggregate([(&a.0, &a.1, a.2.as_slice()), (&b.0, &b.1, b.2.as_slice())]);
        let left = aggregate([(&a.0, &a.1, a.2.as_slice())]);
        let right = aggregate([(&b.0, &b.1, b.2.as_slice())]);
        assert_eq!(left.merge(&right), whole);
    }
}
