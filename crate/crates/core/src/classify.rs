//! Structural classes and the speech-act pattern catalogue for acknowledgments.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::dialogue::{Dialogue, Speaker, SpeechActTag, UttRef};
use crate::exchange::{utterance_coverage, CoverageError, ExchangeNode, ExchangeTree, Role};

use SpeechActTag::{Ackn, Inform, Mdirect, Mrequest, Preclose, Request};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StructuralClass {
    /// The acknowledgment is the second part of an adjacency pair.
    OtherAckn,
    /// The initiator acknowledges after the other party completed the pair.
    SelfOtherAckn,
    /// The acknowledgment sits inside the speaker's own turn, outside any pair.
    SelfAckn,
}

impl StructuralClass {
    pub const ALL: [StructuralClass; 3] = [
        StructuralClass::OtherAckn,
        StructuralClass::SelfOtherAckn,
        StructuralClass::SelfAckn,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            StructuralClass::OtherAckn => "other_ackn",
            StructuralClass::SelfOtherAckn => "self_other_ackn",
            StructuralClass::SelfAckn => "self_ackn",
        }
    }
}

impl fmt::Display for StructuralClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Catalogue pattern. Declaration order follows the catalogue columns.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PatternId {
    InformAckn,
    InformAcknMrequest,
    RequestAcknInform,
    MdirectAckn,
    PrecloseAckn,
    InformAcknAckn,
    RequestInformAckn,
    MrequestInformAckn,
    MdirectAcknAckn,
    InformAcknInform,
    MrequestPlusAckn,
    MdirectPlusAckn,
    Unclassified,
}

/// Turns of a pattern; acts inside one turn are `+`-joined.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Template(pub Vec<Vec<SpeechActTag>>);

impl Template {
    fn of(turns: &[&[SpeechActTag]]) -> Self {
        Template(turns.iter().map(|t| t.to_vec()).collect())
    }

    pub fn turns(&self) -> &[Vec<SpeechActTag>] {
        &self.0
    }
}

impl fmt::Display for Template {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, turn) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("→")?;
            }
            for (j, act) in turn.iter().enumerate() {
                if j > 0 {
                    f.write_str("+")?;
                }
                f.write_str(act.as_str())?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum PatternError {
    #[error("no template for an unclassified acknowledgment")]
    NoTemplate,
    #[error("unknown pattern `{0}`")]
    Unknown(String),
}

impl PatternId {
    /// The twelve catalogue patterns.
    pub const CATALOGUE: [PatternId; 12] = [
        PatternId::InformAckn,
        PatternId::InformAcknMrequest,
        PatternId::RequestAcknInform,
        PatternId::MdirectAckn,
        PatternId::PrecloseAckn,
        PatternId::InformAcknAckn,
        PatternId::RequestInformAckn,
        PatternId::MrequestInformAckn,
        PatternId::MdirectAcknAckn,
        PatternId::InformAcknInform,
        PatternId::MrequestPlusAckn,
        PatternId::MdirectPlusAckn,
    ];

    pub fn class(self) -> Option<StructuralClass> {
        use PatternId::*;
        match self {
            InformAckn | InformAcknMrequest | RequestAcknInform | MdirectAckn | PrecloseAckn => {
                Some(StructuralClass::OtherAckn)
            }
            InformAcknAckn | RequestInformAckn | MrequestInformAckn | MdirectAcknAckn => {
                Some(StructuralClass::SelfOtherAckn)
            }
            InformAcknInform | MrequestPlusAckn | MdirectPlusAckn => {
                Some(StructuralClass::SelfAckn)
            }
            Unclassified => None,
        }
    }

    pub fn template(self) -> Result<Template, PatternError> {
        use PatternId::*;
        Ok(match self {
            InformAckn => Template::of(&[&[Inform], &[Ackn]]),
            InformAcknMrequest => Template::of(&[&[Inform], &[Ackn, Mrequest]]),
            RequestAcknInform => Template::of(&[&[Request], &[Ackn, Inform]]),
            MdirectAckn => Template::of(&[&[Mdirect], &[Ackn]]),
            PrecloseAckn => Template::of(&[&[Preclose], &[Ackn]]),
            InformAcknAckn => Template::of(&[&[Inform], &[Ackn], &[Ackn]]),
            RequestInformAckn => Template::of(&[&[Request], &[Inform], &[Ackn]]),
            MrequestInformAckn => Template::of(&[&[Mrequest], &[Inform], &[Ackn]]),
            MdirectAcknAckn => Template::of(&[&[Mdirect], &[Ackn], &[Ackn]]),
            InformAcknInform => Template::of(&[&[Inform, Ackn, Inform]]),
            MrequestPlusAckn => Template::of(&[&[Mrequest, Ackn]]),
            MdirectPlusAckn => Template::of(&[&[Mdirect, Ackn]]),
            Unclassified => return Err(PatternError::NoTemplate),
        })
    }

    /// The catalogue pattern whose template is exactly `turns`.
    pub fn matching(turns: &[Vec<SpeechActTag>]) -> Option<PatternId> {
        Self::CATALOGUE
            .into_iter()
            .find(|p| p.template().map(|t| t.0 == turns).unwrap_or(false))
    }

    pub fn name(self) -> String {
        match self.template() {
            Ok(t) => t.to_string(),
            Err(_) => "unclassified".to_string(),
        }
    }
}

/// Ordered act template of a catalogue pattern.
pub fn pattern_template(p: PatternId) -> Result<Template, PatternError> {
    p.template()
}

impl fmt::Display for PatternId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for PatternId {
    type Err = PatternError;

    /// Accepts the arrow form and an ASCII `->` spelling.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let normalized = s.trim().replace("->", "→");
        if normalized == "unclassified" {
            return Ok(PatternId::Unclassified);
        }
        PatternId::CATALOGUE
            .into_iter()
            .find(|p| p.name() == normalized)
            .ok_or_else(|| PatternError::Unknown(s.to_string()))
    }
}

impl Serialize for PatternId {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.name())
    }
}

impl<'de> Deserialize<'de> for PatternId {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AcknFunction {
    Acknowledgment,
    Assessment,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AcknClassification {
    pub site: UttRef,
    pub speaker: Speaker,
    pub function: AcknFunction,
    pub class: StructuralClass,
    pub pattern: PatternId,
    /// The governing exchange's initiation is itself an exchange.
    pub embedded: bool,
    /// Rule trace; diagnostic text only.
    pub rationale: String,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ClassifyOptions {
    /// Also classify `assess` utterances.
    pub include_assess: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error(transparent)]
    Mismatch(#[from] CoverageError),
    #[error("tree/dialogue mismatch: acknowledgment at {0} used as an initiation")]
    AcknInitiation(UttRef),
}

enum Attach<'a> {
    Completion {
        node: &'a ExchangeNode,
        index: usize,
    },
    Acceptance {
        node: &'a ExchangeNode,
    },
}

fn index_tree(t: &ExchangeTree) -> HashMap<UttRef, Attach<'_>> {
    let mut map = HashMap::new();
    for root in &t.roots {
        for node in root.walk() {
            for (index, &site) in node.completion.iter().flatten().enumerate() {
                map.insert(site, Attach::Completion { node, index });
            }
            for &site in &node.acceptances {
                map.insert(site, Attach::Acceptance { node });
            }
        }
    }
    map
}

fn act_list(d: &Dialogue, sites: &[UttRef]) -> Vec<SpeechActTag> {
    sites
        .iter()
        .filter_map(|&s| d.utterance(s).map(|u| u.act))
        .collect()
}

fn joined(acts: &[SpeechActTag]) -> String {
    acts.iter()
        .map(|a| a.as_str())
        .collect::<Vec<_>>()
        .join("+")
}

fn classify_completion(d: &Dialogue, node: &ExchangeNode, index: usize) -> (PatternId, String) {
    let completion = node.completion.as_deref().unwrap_or(&[]);
    let trailing = act_list(d, &completion[index + 1..]);
    let rule = match (index, node.is_embedded()) {
        (0, true) => format!(
            "R4: lifts closed {} exchange by {}",
            node.initiation_act, node.initiator
        ),
        (0, false) => format!(
            "R2: completes {} exchange by {}",
            node.initiation_act, node.initiator
        ),
        _ => format!(
            "R2: continues completion of {} exchange by {}",
            node.initiation_act, node.initiator
        ),
    };
    let mut second = vec![Ackn];
    second.extend(trailing.iter().copied());
    if let Some(p) = PatternId::matching(&[vec![node.initiation_act], second]) {
        return (p, rule);
    }
    let base = PatternId::matching(&[vec![node.initiation_act], vec![Ackn]]);
    match (base, trailing.is_empty()) {
        (Some(p), false) => (
            p,
            format!("{rule}; trailing {} outside catalogue", joined(&trailing)),
        ),
        (Some(p), true) => (p, rule),
        (None, _) => (
            PatternId::Unclassified,
            format!(
                "{rule}; no catalogue pattern for {}→ackn",
                node.initiation_act
            ),
        ),
    }
}

fn classify_acceptance(d: &Dialogue, node: &ExchangeNode) -> (PatternId, String) {
    let completion_act = node
        .completion
        .as_ref()
        .and_then(|c| c.first())
        .and_then(|&s| d.utterance(s))
        .map(|u| u.act);
    let rule = format!("R3: accepts completed {} exchange", node.initiation_act);
    let Some(completion_act) = completion_act else {
        return (PatternId::Unclassified, rule);
    };
    let turns = vec![vec![node.initiation_act], vec![completion_act], vec![Ackn]];
    match PatternId::matching(&turns) {
        Some(p) => (p, rule),
        None => (
            PatternId::Unclassified,
            format!(
                "{rule}; no catalogue pattern for {}→{}→ackn",
                node.initiation_act, completion_act
            ),
        ),
    }
}

fn classify_self(d: &Dialogue, site: UttRef) -> (PatternId, String) {
    let turn = &d.turns[site.turn];
    let prev = turn.utterances[site.utterance - 1].act;
    let next = turn.utterances.get(site.utterance + 1).map(|u| u.act);
    let rule = format!("R1: self-ackn after {prev}");
    let pattern = match (prev, next) {
        (Inform, Some(Inform)) => PatternId::InformAcknInform,
        (Mrequest, _) => PatternId::MrequestPlusAckn,
        (Mdirect, _) => PatternId::MdirectPlusAckn,
        (_, None) => {
            return (
                PatternId::Unclassified,
                format!("{rule}; turn-final self-ackn"),
            )
        }
        (_, Some(n)) => {
            return (
                PatternId::Unclassified,
                format!("{rule}; no catalogue pattern for {prev}+ackn+{n}"),
            )
        }
    };
    (pattern, rule)
}

/// Classifies acknowledgment acts (ackn only) in document order.
pub fn classify_acknowledgments(
    t: &ExchangeTree,
    d: &Dialogue,
) -> Result<Vec<AcknClassification>, ClassifyError> {
    classify_with(t, d, ClassifyOptions::default())
}

pub fn classify_with(
    t: &ExchangeTree,
    d: &Dialogue,
    options: ClassifyOptions,
) -> Result<Vec<AcknClassification>, ClassifyError> {
    let coverage = utterance_coverage(t, d)?;
    let attach = index_tree(t);
    let orphan_reason: HashMap<UttRef, _> = t.orphans.iter().map(|o| (o.site, o.reason)).collect();

    let mut out = Vec::new();
    for (site, role) in coverage {
        let turn = &d.turns[site.turn];
        let act = turn.utterances[site.utterance].act;
        let function = match act {
            SpeechActTag::Ackn => AcknFunction::Acknowledgment,
            SpeechActTag::Assess if options.include_assess => AcknFunction::Assessment,
            _ => continue,
        };
        let (class, pattern, embedded, rationale) = match (role, attach.get(&site)) {
            (Role::Completion, Some(Attach::Completion { node, index })) => {
                let (p, why) = classify_completion(d, node, *index);
                (StructuralClass::OtherAckn, p, node.is_embedded(), why)
            }
            (Role::Acceptance, Some(Attach::Acceptance { node })) => {
                let (p, why) = classify_acceptance(d, node);
                (StructuralClass::SelfOtherAckn, p, node.is_embedded(), why)
            }
            (Role::SelfAckn, _) => {
                let (p, why) = classify_self(d, site);
                (StructuralClass::SelfAckn, p, false, why)
            }
            (Role::Orphan, _) => {
                let reason = orphan_reason
                    .get(&site)
                    .map(|r| r.to_string())
                    .unwrap_or_default();
                (
                    StructuralClass::SelfAckn,
                    PatternId::Unclassified,
                    false,
                    format!("R5: orphan; {reason}"),
                )
            }
            _ => return Err(ClassifyError::AcknInitiation(site)),
        };
        out.push(AcknClassification {
            site,
            speaker: turn.speaker.clone(),
            function,
            class,
            pattern,
            embedded,
            rationale,
        });
    }
    Ok(out)
}
