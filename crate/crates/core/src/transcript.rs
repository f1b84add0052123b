//! Plain-text transcript format.
//!
//! ```text
//! # comment
//! dialogue: ex3
//! speakers: W U
//! W: request | what's your starting location?
//! U: inform | I'm at 36th and Sheridan at the Park-n-Ride.
//! W: ackn | Okay, one moment please.
//! + inform | optional same-turn continuation
//! ```
//!
//! One utterance per line. `SPEAKER: act | text` opens a turn, `+ act | text`
//! extends the current one. The `| text` part is optional. Act tags are
//! case-insensitive on input and written lowercase. Headers must precede the
//! first utterance. Without a `speakers:` header the two labels are taken in
//! order of first appearance. Consecutive turns by the same speaker are merged.

use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::dialogue::{Dialogue, Speaker, SpeechActTag, Turn, Utterance};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseDiagnostic {
    /// 1-based.
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ParseDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("{0}")]
    Line(ParseDiagnostic),
    #[error("no turns")]
    NoTurns,
}

impl ParseError {
    pub fn line(&self) -> Option<usize> {
        match self {
            ParseError::Line(d) => Some(d.line),
            ParseError::NoTurns => None,
        }
    }
}

fn fail<T>(line: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError::Line(ParseDiagnostic {
        line,
        message: message.into(),
    }))
}

fn parse_utterance(line: usize, body: &str) -> Result<Utterance, ParseError> {
    let (act, text) = match body.split_once('|') {
        Some((act, text)) => (act, text),
        None => (body, ""),
    };
    let act = act.trim();
    if act.is_empty() {
        return fail(line, "missing act tag");
    }
    let act: SpeechActTag = match act.parse() {
        Ok(a) => a,
        Err(e) => return fail(line, e.to_string()),
    };
    Ok(Utterance::with_text(act, text))
}

fn parse_speaker(line: usize, label: &str) -> Result<Speaker, ParseError> {
    Speaker::new(label.trim()).or_else(|e| fail(line, e.to_string()))
}

pub fn parse_transcript(text: &str) -> Result<Dialogue, ParseError> {
    let mut id: Option<String> = None;
    let mut declared: Option<[Speaker; 2]> = None;
    let mut seen: Vec<Speaker> = Vec::new();
    let mut turns: Vec<Turn> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.trim();
        if content.is_empty() || content.starts_with('#') {
            continue;
        }

        if let Some(rest) = content.strip_prefix('+') {
            let utterance = parse_utterance(line, rest)?;
            match turns.last_mut() {
                Some(turn) => turn.utterances.push(utterance),
                None => return fail(line, "continuation `+` before any turn"),
            }
            continue;
        }

        let Some((head, rest)) = content.split_once(':') else {
            return fail(line, "expected `SPEAKER: act`, `+ act` or a header");
        };
        let head = head.trim();

        match head {
            "dialogue" | "speakers" if !turns.is_empty() => {
                return fail(line, format!("header `{head}` after the first turn"));
            }
            "dialogue" => {
                if id.is_some() {
                    return fail(line, "duplicate `dialogue:` header");
                }
                id = Some(rest.trim().to_string());
            }
            "speakers" => {
                if declared.is_some() {
                    return fail(line, "duplicate `speakers:` header");
                }
                let labels: Vec<&str> = rest.split_whitespace().collect();
                let [a, b] = labels[..] else {
                    return fail(line, "`speakers:` needs exactly two labels");
                };
                let (a, b) = (parse_speaker(line, a)?, parse_speaker(line, b)?);
                if a == b {
                    return fail(line, "speaker labels must be distinct");
                }
                declared = Some([a, b]);
            }
            _ => {
                let speaker = parse_speaker(line, head)?;
                match &declared {
                    Some(pair) if !pair.contains(&speaker) => {
                        return fail(line, format!("unknown speaker `{speaker}`"));
                    }
                    Some(_) => {}
                    None => {
                        if !seen.contains(&speaker) {
                            if seen.len() == 2 {
                                return fail(line, format!("third speaker `{speaker}`"));
                            }
                            seen.push(speaker.clone());
                        }
                    }
                }
                let utterance = parse_utterance(line, rest)?;
                match turns.last_mut() {
                    Some(turn) if turn.speaker == speaker => turn.utterances.push(utterance),
                    _ => turns.push(Turn::new(speaker, vec![utterance])),
                }
            }
        }
    }

    if turns.is_empty() {
        return Err(ParseError::NoTurns);
    }
    let speakers = match declared {
        Some(pair) => pair,
        None => {
            let mut it = seen.into_iter();
            match (it.next(), it.next()) {
                (Some(a), Some(b)) => [a, b],
                _ => {
                    return fail(
                        text.lines().count().max(1),
                        "only one speaker appears; add a `speakers:` header",
                    )
                }
            }
        }
    };
    Ok(Dialogue::new(id.unwrap_or_default(), speakers, turns))
}

fn write_utterance(out: &mut String, u: &Utterance) {
    match u.text() {
        Some(t) => {
            let _ = writeln!(out, "{} | {}", u.act, t);
        }
        None => {
            let _ = writeln!(out, "{} |", u.act);
        }
    }
}

/// Canonical form: headers first, one utterance per line.
pub fn serialize_dialogue(d: &Dialogue) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "dialogue: {}", d.id.trim());
    let _ = writeln!(out, "speakers: {} {}", d.speakers[0], d.speakers[1]);
    for turn in &d.turns {
        for (i, u) in turn.utterances.iter().enumerate() {
            if i == 0 {
                let _ = write!(out, "{}: ", turn.speaker);
            } else {
                out.push_str("+ ");
            }
            write_utterance(&mut out, u);
        }
    }
    out
}
