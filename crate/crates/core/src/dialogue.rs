//! Dialogue domain types: speech-act tags, utterances, turns and dyadic dialogues.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Speech-act label attached to every utterance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpeechActTag {
    Inform,
    Request,
    /// Meta-request: a clarification request about earlier talk.
    Mrequest,
    /// Meta-directive about the control of the conversation.
    Mdirect,
    Preclose,
    Ackn,
    Assess,
    /// Explicitly annotated act outside the catalogue.
    Other,
}

impl SpeechActTag {
    pub const ALL: [SpeechActTag; 8] = [
        SpeechActTag::Inform,
        SpeechActTag::Request,
        SpeechActTag::Mrequest,
        SpeechActTag::Mdirect,
        SpeechActTag::Preclose,
        SpeechActTag::Ackn,
        SpeechActTag::Assess,
        SpeechActTag::Other,
    ];

    /// Acts that can open an exchange.
    pub const INITIATING: [SpeechActTag; 5] = [
        SpeechActTag::Inform,
        SpeechActTag::Request,
        SpeechActTag::Mrequest,
        SpeechActTag::Mdirect,
        SpeechActTag::Preclose,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SpeechActTag::Inform => "inform",
            SpeechActTag::Request => "request",
            SpeechActTag::Mrequest => "mrequest",
            SpeechActTag::Mdirect => "mdirect",
            SpeechActTag::Preclose => "preclose",
            SpeechActTag::Ackn => "ackn",
            SpeechActTag::Assess => "assess",
            SpeechActTag::Other => "other",
        }
    }

    /// `ackn` and `assess` are the acknowledgment-family acts.
    pub fn is_ackn_family(self) -> bool {
        matches!(self, SpeechActTag::Ackn | SpeechActTag::Assess)
    }

    pub fn is_initiating(self) -> bool {
        Self::INITIATING.contains(&self)
    }

    pub fn is_meta(self) -> bool {
        matches!(self, SpeechActTag::Mrequest | SpeechActTag::Mdirect)
    }
}

impl fmt::Display for SpeechActTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown speech act `{0}`")]
pub struct UnknownAct(pub String);

impl FromStr for SpeechActTag {
    type Err = UnknownAct;

    /// Case-insensitive.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.trim().to_ascii_lowercase();
        SpeechActTag::ALL
            .into_iter()
            .find(|t| t.as_str() == lower)
            .ok_or_else(|| UnknownAct(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvalidSpeaker {
    #[error("speaker label is empty")]
    Empty,
    #[error("speaker label `{0}` contains a character outside [A-Za-z0-9_.-]")]
    BadChar(String),
    #[error("`{0}` is a reserved header keyword")]
    Reserved(String),
}

/// Speaker label: a single token such as `W` or `User`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Speaker(String);

impl Speaker {
    pub fn new(label: &str) -> Result<Self, InvalidSpeaker> {
        if label.is_empty() {
            return Err(InvalidSpeaker::Empty);
        }
        if !label
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '.' | '-'))
        {
            return Err(InvalidSpeaker::BadChar(label.to_string()));
        }
        if label == "dialogue" || label == "speakers" {
            return Err(InvalidSpeaker::Reserved(label.to_string()));
        }
        Ok(Speaker(label.to_string()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Speaker {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl TryFrom<String> for Speaker {
    type Error = InvalidSpeaker;
    fn try_from(value: String) -> Result<Self, Self::Error> {
        Speaker::new(&value)
    }
}

impl From<Speaker> for String {
    fn from(s: Speaker) -> String {
        s.0
    }
}

/// One tagged utterance. The surface text is informational only.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Utterance {
    pub act: SpeechActTag,
    text: Option<String>,
}

impl Utterance {
    pub fn new(act: SpeechActTag) -> Self {
        Utterance { act, text: None }
    }

    /// Text is stored on a single line with surrounding whitespace removed;
    /// an empty result is stored as no text.
    pub fn with_text(act: SpeechActTag, text: &str) -> Self {
        let flat: String = text
            .chars()
            .map(|c| if c == '\n' || c == '\r' { ' ' } else { c })
            .collect();
        let trimmed = flat.trim();
        Utterance {
            act,
            text: (!trimmed.is_empty()).then(|| trimmed.to_string()),
        }
    }

    pub fn text(&self) -> Option<&str> {
        self.text.as_deref()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Turn {
    pub speaker: Speaker,
    pub utterances: Vec<Utterance>,
}

impl Turn {
    pub fn new(speaker: Speaker, utterances: Vec<Utterance>) -> Self {
        Turn {
            speaker,
            utterances,
        }
    }

    pub fn acts(&self) -> impl Iterator<Item = SpeechActTag> + '_ {
        self.utterances.iter().map(|u| u.act)
    }
}

/// Position of an utterance inside a dialogue.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct UttRef {
    pub turn: usize,
    pub utterance: usize,
}

impl UttRef {
    pub fn new(turn: usize, utterance: usize) -> Self {
        UttRef { turn, utterance }
    }
}

impl fmt::Display for UttRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.turn, self.utterance)
    }
}

/// A two-party conversation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Dialogue {
    pub id: String,
    pub speakers: [Speaker; 2],
    pub turns: Vec<Turn>,
}

impl Dialogue {
    pub fn new(id: impl Into<String>, speakers: [Speaker; 2], turns: Vec<Turn>) -> Self {
        Dialogue {
            id: id.into(),
            speakers,
            turns,
        }
    }

    pub fn utterance(&self, site: UttRef) -> Option<&Utterance> {
        self.turns.get(site.turn)?.utterances.get(site.utterance)
    }

    pub fn speaker_of(&self, site: UttRef) -> Option<&Speaker> {
        self.turns.get(site.turn).map(|t| &t.speaker)
    }

    /// Every utterance with its position, in document order.
    pub fn sites(&self) -> impl Iterator<Item = (UttRef, &Turn, &Utterance)> + '_ {
        self.turns.iter().enumerate().flat_map(|(ti, turn)| {
            turn.utterances
                .iter()
                .enumerate()
                .map(move |(ui, u)| (UttRef::new(ti, ui), turn, u))
        })
    }

    pub fn utterance_count(&self) -> usize {
        self.turns.iter().map(|t| t.utterances.len()).sum()
    }

    /// The speaker that is not `speaker`, if `speaker` is a participant.
    pub fn other_speaker(&self, speaker: &Speaker) -> Option<&Speaker> {
        match &self.speakers {
            [a, b] if a == speaker => Some(b),
            [a, b] if b == speaker => Some(a),
            _ => None,
        }
    }

    /// Collapses consecutive same-speaker turns into one.
    pub fn merge_consecutive_turns(&mut self) {
        let mut merged: Vec<Turn> = Vec::with_capacity(self.turns.len());
        for turn in self.turns.drain(..) {
            match merged.last_mut() {
                Some(prev) if prev.speaker == turn.speaker => {
                    prev.utterances.extend(turn.utterances)
                }
                _ => merged.push(turn),
            }
        }
        self.turns = merged;
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    DuplicateSpeakers,
    NoTurns,
    EmptyTurn,
    UnknownSpeaker,
    ConsecutiveSameSpeaker,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rule::DuplicateSpeakers => "speaker labels not distinct",
            Rule::NoTurns => "no turns",
            Rule::EmptyTurn => "turn has no utterances",
            Rule::UnknownSpeaker => "unknown speaker",
            Rule::ConsecutiveSameSpeaker => "consecutive turns same speaker",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub rule: Rule,
    pub turn: Option<usize>,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.turn {
            Some(t) => write!(f, "{} at turn {}", self.rule, t),
            None => write!(f, "{}", self.rule),
        }
    }
}

/// Checks the dyadic-dialogue invariants. Violations are reported in turn order.
pub fn validate_dialogue(d: &Dialogue) -> Result<(), Vec<Violation>> {
    let mut violations = Vec::new();
    if d.speakers[0] == d.speakers[1] {
        violations.push(Violation {
            rule: Rule::DuplicateSpeakers,
            turn: None,
        });
    }
    if d.turns.is_empty() {
        violations.push(Violation {
            rule: Rule::NoTurns,
            turn: None,
        });
    }
    for (i, turn) in d.turns.iter().enumerate() {
        if turn.utterances.is_empty() {
            violations.push(Violation {
                rule: Rule::EmptyTurn,
                turn: Some(i),
            });
        }
        if !d.speakers.contains(&turn.speaker) {
            violations.push(Violation {
                rule: Rule::UnknownSpeaker,
                turn: Some(i),
            });
        }
        if i > 0 && d.turns[i - 1].speaker == turn.speaker {
            violations.push(Violation {
                rule: Rule::ConsecutiveSameSpeaker,
                turn: Some(i),
            });
        }
    }
    if violations.is_empty() {
        Ok(())
    } else {
        Err(violations)
    }
}
