//! Shared test helpers: fixture loading, random dialogues and a brute-force
//! reference classifier for single-act dialogues.
#![allow(dead_code)]

use std::path::PathBuf;

use ackn_core::{parse_transcript, Dialogue, Speaker, SpeechActTag, Turn, Utterance};
use rand::seq::SliceRandom;
use rand::Rng;

pub const FIXTURES: [&str; 5] = ["ex1", "ex2", "ex3", "ex4", "ex5"];

pub fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn fixture_path(name: &str) -> PathBuf {
    fixture_dir().join(format!("{name}.txt"))
}

pub fn load_fixture(name: &str) -> Dialogue {
    let text = std::fs::read_to_string(fixture_path(name)).expect("fixture readable");
    parse_transcript(&text).expect("fixture parses")
}

/// Expected (class, pattern, embedded) per fixture, in document order.
pub fn golden(name: &str) -> Vec<(&'static str, &'static str, bool)> {
    match name {
        "ex1" => vec![("other_ackn", "inform→ackn", false)],
        "ex2" => vec![("other_ackn", "inform→ackn+mrequest", false)],
        "ex3" => vec![("self_other_ackn", "request→inform→ackn", false)],
        "ex4" => vec![("self_ackn", "inform+ackn+inform", false)],
        "ex5" => vec![
            ("other_ackn", "inform→ackn", false),
            ("self_other_ackn", "inform→ackn→ackn", false),
            ("other_ackn", "inform→ackn", true),
        ],
        other => panic!("no golden entry for {other}"),
    }
}

pub fn speakers() -> [Speaker; 2] {
    [Speaker::new("W").unwrap(), Speaker::new("U").unwrap()]
}

/// Builds a dialogue from per-turn act lists; turns alternate starting with
/// speaker `first` (0 = W, 1 = U).
pub fn dialogue_from_acts(first: usize, turns: &[Vec<SpeechActTag>]) -> Dialogue {
    let pair = speakers();
    Dialogue::new(
        "gen",
        pair.clone(),
        turns
            .iter()
            .enumerate()
            .map(|(i, acts)| {
                Turn::new(
                    pair[(first + i) % 2].clone(),
                    acts.iter().map(|&a| Utterance::new(a)).collect(),
                )
            })
            .collect(),
    )
}

const WORDS: [&str; 8] = [
    "okay",
    "turn left",
    "on Evans",
    "uh huh",
    "right?",
    "3:30 | later",
    "sounds good",
    "one moment",
];

/// A valid dialogue of 1..=max_turns turns, each of 1..=3 utterances drawn
/// from the full act alphabet.
pub fn random_dialogue<R: Rng>(rng: &mut R, max_turns: usize) -> Dialogue {
    let turns = rng.gen_range(1..=max_turns);
    let first = rng.gen_range(0..2);
    let pair = speakers();
    let mut out = Vec::with_capacity(turns);
    for i in 0..turns {
        let n = rng.gen_range(1..=3);
        let utterances = (0..n)
            .map(|_| {
                let act = *SpeechActTag::ALL.choose(rng).unwrap();
                if rng.gen_bool(0.5) {
                    Utterance::with_text(act, WORDS.choose(rng).unwrap())
                } else {
                    Utterance::new(act)
                }
            })
            .collect();
        out.push(Turn::new(pair[(first + i) % 2].clone(), utterances));
    }
    Dialogue::new(format!("rand-{}", rng.gen::<u32>()), pair, out)
}

/// Reference classifier for dialogues whose turns each hold exactly one act
/// from {inform, request, ackn}. It tracks exchanges as plain records and
/// names patterns by string lookup in the catalogue, independently of the
/// library's builder and pattern types.
pub mod oracle {
    const CATALOGUE: [(&str, &str); 12] = [
        ("other_ackn", "inform→ackn"),
        ("other_ackn", "inform→ackn+mrequest"),
        ("other_ackn", "request→ackn+inform"),
        ("other_ackn", "mdirect→ackn"),
        ("other_ackn", "preclose→ackn"),
        ("self_other_ackn", "inform→ackn→ackn"),
        ("self_other_ackn", "request→inform→ackn"),
        ("self_other_ackn", "mrequest→inform→ackn"),
        ("self_other_ackn", "mdirect→ackn→ackn"),
        ("self_ackn", "inform+ackn+inform"),
        ("self_ackn", "mrequest+ackn"),
        ("self_ackn", "mdirect+ackn"),
    ];

    const DEPTH_LIMIT: usize = 8;

    struct Exchange {
        act: &'static str,
        by: usize,
        reply_act: Option<&'static str>,
        accepted: bool,
        depth: usize,
        lifted: bool,
    }

    fn lookup(class: &'static str, pattern: String) -> (&'static str, String, bool) {
        if CATALOGUE.contains(&(class, pattern.as_str())) {
            (class, pattern, false)
        } else {
            (class, "unclassified".to_string(), false)
        }
    }

    /// `turns[i] = (speaker, act)`. Returns (turn, class, pattern, embedded)
    /// for every `ackn` turn.
    pub fn classify(turns: &[(usize, &'static str)]) -> Vec<(usize, &'static str, String, bool)> {
        let mut exchanges: Vec<Exchange> = Vec::new();
        let mut pending: Vec<usize> = Vec::new();
        let mut last_closed: Option<usize> = None;
        let mut out = Vec::new();

        let is_open = |e: &Exchange| e.reply_act.is_none();
        let is_completed = |e: &Exchange| e.reply_act.is_some() && !e.accepted;

        for (k, &(s, act)) in turns.iter().enumerate() {
            let top = pending.last().copied();
            if act == "ackn" {
                if let Some(i) = top.filter(|&i| is_open(&exchanges[i]) && exchanges[i].by != s) {
                    exchanges[i].reply_act = Some("ackn");
                    let (c, p, _) = lookup("other_ackn", format!("{}→ackn", exchanges[i].act));
                    out.push((k, c, p, exchanges[i].lifted));
                    continue;
                }
                if let Some(i) =
                    top.filter(|&i| is_completed(&exchanges[i]) && exchanges[i].by == s)
                {
                    exchanges[i].accepted = true;
                    pending.pop();
                    last_closed = Some(i);
                    let e = &exchanges[i];
                    let (c, p, _) = lookup(
                        "self_other_ackn",
                        format!("{}→{}→ackn", e.act, e.reply_act.unwrap()),
                    );
                    out.push((k, c, p, e.lifted));
                    continue;
                }
                if let Some(i) = last_closed.filter(|&i| {
                    exchanges[i].act == "inform"
                        && exchanges[i].by != s
                        && exchanges[i].depth < DEPTH_LIMIT
                }) {
                    let outer = Exchange {
                        act: exchanges[i].act,
                        by: exchanges[i].by,
                        reply_act: Some("ackn"),
                        accepted: false,
                        depth: exchanges[i].depth + 1,
                        lifted: true,
                    };
                    if top.is_some_and(|t| is_completed(&exchanges[t])) {
                        pending.pop();
                    }
                    exchanges.push(outer);
                    pending.push(exchanges.len() - 1);
                    last_closed = None;
                    out.push((k, "other_ackn", "inform→ackn".to_string(), true));
                    continue;
                }
                out.push((k, "self_ackn", "unclassified".to_string(), false));
                continue;
            }

            if act == "inform" {
                if let Some(i) = top.filter(|&i| {
                    is_open(&exchanges[i]) && exchanges[i].act == "request" && exchanges[i].by != s
                }) {
                    exchanges[i].reply_act = Some("inform");
                    continue;
                }
            }
            if top.is_some_and(|t| is_completed(&exchanges[t])) {
                pending.pop();
            }
            exchanges.push(Exchange {
                act,
                by: s,
                reply_act: None,
                accepted: false,
                depth: 1,
                lifted: false,
            });
            pending.push(exchanges.len() - 1);
            last_closed = None;
        }
        out
    }

    /// Every act sequence of length 1..=4 over {inform, request, ackn}.
    pub fn exhaustive_sequences() -> Vec<Vec<&'static str>> {
        const ALPHABET: [&str; 3] = ["inform", "request", "ackn"];
        let mut all = Vec::new();
        let mut frontier: Vec<Vec<&'static str>> = vec![vec![]];
        for _ in 0..4 {
            let mut next = Vec::new();
            for seq in &frontier {
                for a in ALPHABET {
                    let mut s = seq.clone();
                    s.push(a);
                    next.push(s);
                }
            }
            all.extend(next.iter().cloned());
            frontier = next;
        }
        all
    }
}
