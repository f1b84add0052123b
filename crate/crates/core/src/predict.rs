//! Incremental dialogue state and acknowledgment expectations.
//!
//! [`DialogueState`] drives the same [`ExchangeBuilder`] as the batch parser,
//! so replaying a dialogue utterance by utterance realizes the same tree.
//! Expectations for an acknowledgment are read off the attachment the builder
//! would choose for it.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classify::{PatternId, StructuralClass};
use crate::dialogue::{Dialogue, Speaker, SpeechActTag, Utterance};
use crate::exchange::{ExchangeBuilder, ExchangeSummary, ExchangeTree, Step};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strength {
    /// Structurally awaited: an open exchange waits for this speaker's completion.
    Expected,
    Admissible,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Expectation {
    pub speaker: Speaker,
    pub act: SpeechActTag,
    pub class_if_ackn: Option<StructuralClass>,
    pub pattern_if_ackn: Option<PatternId>,
    pub strength: Strength,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum PredictError {
    #[error("speaker labels must be distinct, got `{0}` twice")]
    DuplicateSpeakers(Speaker),
    #[error("`{0}` is not a participant")]
    UnknownSpeaker(Speaker),
}

#[derive(Clone, Debug)]
pub struct DialogueState {
    speakers: [Speaker; 2],
    builder: ExchangeBuilder,
}

/// The catalogue pattern an `other_ackn` completion of `initiation` most
/// plausibly takes.
fn completion_pattern(initiation: SpeechActTag) -> Option<PatternId> {
    match initiation {
        SpeechActTag::Inform => Some(PatternId::InformAckn),
        SpeechActTag::Request => Some(PatternId::RequestAcknInform),
        SpeechActTag::Mdirect => Some(PatternId::MdirectAckn),
        SpeechActTag::Preclose => Some(PatternId::PrecloseAckn),
        _ => None,
    }
}

fn acceptance_pattern(ex: &ExchangeSummary) -> Option<PatternId> {
    let completion = ex.completion_act?;
    PatternId::matching(&[
        vec![ex.initiation_act],
        vec![completion],
        vec![SpeechActTag::Ackn],
    ])
}

fn self_pattern(prev: SpeechActTag) -> Option<PatternId> {
    match prev {
        SpeechActTag::Inform => Some(PatternId::InformAcknInform),
        SpeechActTag::Mrequest => Some(PatternId::MrequestPlusAckn),
        SpeechActTag::Mdirect => Some(PatternId::MdirectPlusAckn),
        _ => None,
    }
}

impl DialogueState {
    pub fn new(a: Speaker, b: Speaker) -> Result<Self, PredictError> {
        if a == b {
            return Err(PredictError::DuplicateSpeakers(a));
        }
        Ok(DialogueState {
            speakers: [a, b],
            builder: ExchangeBuilder::new(),
        })
    }

    /// State after replaying all of `d`.
    pub fn replay(d: &Dialogue) -> Result<Self, PredictError> {
        let [a, b] = d.speakers.clone();
        let mut state = DialogueState::new(a, b)?;
        for turn in &d.turns {
            for u in &turn.utterances {
                state.advance(&turn.speaker, u)?;
            }
        }
        Ok(state)
    }

    pub fn speakers(&self) -> &[Speaker; 2] {
        &self.speakers
    }

    fn check(&self, speaker: &Speaker) -> Result<(), PredictError> {
        if self.speakers.contains(speaker) {
            Ok(())
        } else {
            Err(PredictError::UnknownSpeaker(speaker.clone()))
        }
    }

    /// Consumes one utterance. A change of speaker starts a new turn.
    pub fn advance(&mut self, speaker: &Speaker, u: &Utterance) -> Result<Step, PredictError> {
        self.check(speaker)?;
        let site = self.builder.next_site(speaker);
        Ok(self.builder.push(speaker, u.act, site))
    }

    /// Unclosed exchanges, bottom first.
    pub fn stack(&self) -> Vec<ExchangeSummary> {
        self.builder.stack()
    }

    pub fn last_closed(&self) -> Option<ExchangeSummary> {
        self.builder.last_closed()
    }

    pub fn current_turn_speaker(&self) -> Option<&Speaker> {
        self.builder.current_turn().map(|(_, s)| s)
    }

    /// The tree realized so far.
    pub fn tree(&self) -> ExchangeTree {
        self.builder.tree()
    }

    /// What `speaker` may say next: an acknowledgment entry when one would
    /// attach to an exchange, followed by the always-admissible initiations.
    pub fn expected_acts(&self, speaker: &Speaker) -> Result<Vec<Expectation>, PredictError> {
        self.check(speaker)?;
        let mut out = Vec::new();
        if let Some((class, pattern, strength)) = self.ackn_outlook(speaker) {
            out.push(Expectation {
                speaker: speaker.clone(),
                act: SpeechActTag::Ackn,
                class_if_ackn: Some(class),
                pattern_if_ackn: pattern,
                strength,
            });
        }
        out.extend(SpeechActTag::INITIATING.into_iter().map(|act| Expectation {
            speaker: speaker.clone(),
            act,
            class_if_ackn: None,
            pattern_if_ackn: None,
            strength: Strength::Admissible,
        }));
        Ok(out)
    }

    fn ackn_outlook(
        &self,
        speaker: &Speaker,
    ) -> Option<(StructuralClass, Option<PatternId>, Strength)> {
        let site = self.builder.next_site(speaker);
        let summary = |id| self.builder.summary(id);
        match self.builder.decide(speaker, SpeechActTag::Ackn, site) {
            Step::Complete(id) => Some((
                StructuralClass::OtherAckn,
                completion_pattern(summary(id).initiation_act),
                Strength::Expected,
            )),
            Step::Extend(id) => Some((
                StructuralClass::OtherAckn,
                completion_pattern(summary(id).initiation_act),
                Strength::Admissible,
            )),
            Step::Lift(id) => Some((
                StructuralClass::OtherAckn,
                completion_pattern(summary(id).initiation_act),
                Strength::Admissible,
            )),
            Step::Accept(id) | Step::AcceptMore(id) => Some((
                StructuralClass::SelfOtherAckn,
                acceptance_pattern(&summary(id)),
                Strength::Admissible,
            )),
            Step::SelfAckn => {
                let prev = self.builder.held_turn_last_act(speaker)?;
                self_pattern(prev)
                    .map(|p| (StructuralClass::SelfAckn, Some(p), Strength::Admissible))
            }
            Step::Answer(_) | Step::Open | Step::Orphan(_) => None,
        }
    }
}
