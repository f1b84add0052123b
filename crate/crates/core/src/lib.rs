//! Exchange-structure analysis of acknowledgments in task-oriented dialogue.
//!
//! The pipeline is:
//!
//! 1. [`transcript::parse_transcript`] reads a speech-act annotated transcript
//!    into a [`Dialogue`].
//! 2. [`exchange::parse_exchanges`] builds adjacency pairs, acceptance phases,
//!    within-turn self-acknowledgments and embedded exchanges.
//! 3. [`classify::classify_acknowledgments`] assigns each acknowledgment one of
//!    three structural classes and a catalogue pattern.
//! 4. [`stats::aggregate`] rolls classifications up into a [`CorpusReport`].
//!
//! [`predict::DialogueState`] runs the same exchange builder incrementally and
//! reports where acknowledgments are expected next.

pub mod classify;
pub mod dialogue;
pub mod exchange;
pub mod predict;
pub mod stats;
pub mod transcript;

pub use classify::{
    classify_acknowledgments, classify_with, pattern_template, AcknClassification, AcknFunction,
    ClassifyError, ClassifyOptions, PatternError, PatternId, StructuralClass, Template,
};
pub use dialogue::{
    validate_dialogue, Dialogue, Rule, Speaker, SpeechActTag, Turn, UttRef, Utterance, Violation,
};
pub use exchange::{
    parse_exchanges, utterance_coverage, CoverageError, ExchangeNode, ExchangeTree, Initiation,
    Orphan, OrphanReason, Role, Status, MAX_DEPTH,
};
pub use predict::{DialogueState, Expectation, PredictError, Strength};
pub use stats::{aggregate, CorpusReport, RateCounts};
pub use transcript::{parse_transcript, serialize_dialogue, ParseDiagnostic, ParseError};

/// Parses, builds exchanges and classifies in one go.
pub fn analyze(
    d: &Dialogue,
    options: ClassifyOptions,
) -> Result<(ExchangeTree, Vec<AcknClassification>), ClassifyError> {
    let tree = parse_exchanges(d);
    let classifications = classify_with(&tree, d, options)?;
    Ok((tree, classifications))
}
