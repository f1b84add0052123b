//! JSON and text renderings of analysis results.

use std::fmt::Write as _;

use ackn_core::{
    AcknClassification, CorpusReport, Dialogue, ExchangeNode, ExchangeTree, Expectation,
    Initiation, Orphan, Speaker, SpeechActTag, Status, UttRef,
};
use serde::Serialize;

#[derive(Serialize)]
pub struct TurnRecord {
    pub index: usize,
    pub speaker: Speaker,
    pub acts: Vec<SpeechActTag>,
}

#[derive(Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InitiationRecord {
    Utterance(UttRef),
    Exchange(Box<ExchangeRecord>),
}

#[derive(Serialize)]
pub struct ExchangeRecord {
    pub initiator: Speaker,
    pub initiation_act: SpeechActTag,
    pub status: Status,
    pub depth: usize,
    pub initiation: InitiationRecord,
    pub completion: Option<Vec<UttRef>>,
    pub acceptances: Vec<UttRef>,
}

impl From<&ExchangeNode> for ExchangeRecord {
    fn from(node: &ExchangeNode) -> Self {
        ExchangeRecord {
            initiator: node.initiator.clone(),
            initiation_act: node.initiation_act,
            status: node.status(),
            depth: node.depth(),
            initiation: match &node.initiation {
                Initiation::Act(site) => InitiationRecord::Utterance(*site),
                Initiation::Embedded(inner) => {
                    InitiationRecord::Exchange(Box::new(ExchangeRecord::from(inner.as_ref())))
                }
            },
            completion: node.completion.clone(),
            acceptances: node.acceptances.clone(),
        }
    }
}

/// Per-dialogue report. Field order is the JSON key order.
#[derive(Serialize)]
pub struct AnalysisReport {
    pub dialogue_id: String,
    pub speakers: [Speaker; 2],
    pub turns: Vec<TurnRecord>,
    pub exchanges: Vec<ExchangeRecord>,
    pub self_ackn_sites: Vec<UttRef>,
    pub orphans: Vec<Orphan>,
    pub acknowledgments: Vec<AcknClassification>,
    pub stats: CorpusReport,
}

impl AnalysisReport {
    pub fn new(
        d: &Dialogue,
        tree: &ExchangeTree,
        acknowledgments: Vec<AcknClassification>,
    ) -> Self {
        let stats = ackn_core::aggregate([(d, tree, acknowledgments.as_slice())]);
        AnalysisReport {
            dialogue_id: d.id.clone(),
            speakers: d.speakers.clone(),
            turns: d
                .turns
                .iter()
                .enumerate()
                .map(|(index, t)| TurnRecord {
                    index,
                    speaker: t.speaker.clone(),
                    acts: t.acts().collect(),
                })
                .collect(),
            exchanges: tree.roots.iter().map(ExchangeRecord::from).collect(),
            self_ackn_sites: tree.self_ackn_sites.clone(),
            orphans: tree.orphans.clone(),
            acknowledgments,
            stats,
        }
    }

    pub fn has_unclassified(&self) -> bool {
        self.acknowledgments
            .iter()
            .any(|a| a.pattern == ackn_core::PatternId::Unclassified)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "dialogue {} ({} {})",
            self.dialogue_id, self.speakers[0], self.speakers[1]
        );
        out.push_str("turns\n");
        for t in &self.turns {
            let acts: Vec<&str> = t.acts.iter().map(|a| a.as_str()).collect();
            let _ = writeln!(out, "  {} {}: {}", t.index, t.speaker, acts.join(" + "));
        }
        out.push_str("exchanges\n");
        for e in &self.exchanges {
            write_exchange(&mut out, e, 1);
        }
        if !self.self_ackn_sites.is_empty() {
            let sites: Vec<String> = self.self_ackn_sites.iter().map(|s| s.to_string()).collect();
            let _ = writeln!(out, "self-acknowledgments {}", sites.join(" "));
        }
        for o in &self.orphans {
            let _ = writeln!(out, "orphan {} ({})", o.site, o.reason);
        }
        out.push_str("acknowledgments\n");
        for a in &self.acknowledgments {
            let _ = writeln!(
                out,
                "  {} {} {} {}{}  [{}]",
                a.site,
                a.speaker,
                a.class,
                a.pattern,
                if a.embedded { " embedded" } else { "" },
                a.rationale
            );
        }
        out.push_str("stats\n");
        for line in stats_text(&self.stats).lines() {
            let _ = writeln!(out, "  {line}");
        }
        out
    }
}

fn sites(list: &[UttRef]) -> String {
    list.iter()
        .map(|s| s.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn write_exchange(out: &mut String, e: &ExchangeRecord, indent: usize) {
    let pad = "  ".repeat(indent);
    let _ = write!(
        out,
        "{pad}[{}] {} by {}",
        e.status, e.initiation_act, e.initiator
    );
    if let InitiationRecord::Utterance(site) = &e.initiation {
        let _ = write!(out, " at {site}");
    }
    if let Some(c) = &e.completion {
        let _ = write!(out, "; completion {}", sites(c));
    }
    if !e.acceptances.is_empty() {
        let _ = write!(out, "; acceptances {}", sites(&e.acceptances));
    }
    out.push('\n');
    if let InitiationRecord::Exchange(inner) = &e.initiation {
        let _ = writeln!(out, "{pad}  embedded:");
        write_exchange(out, inner, indent + 2);
    }
}

fn ratio(r: Option<f64>) -> String {
    r.map(|v| format!("{v:.4}"))
        .unwrap_or_else(|| "n/a".to_string())
}

/// Key/value lines; ratios to four decimals.
pub fn stats_text(r: &CorpusReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "dialogues {}", r.dialogue_count);
    let _ = writeln!(out, "turns {}", r.turn_count);
    let _ = writeln!(out, "acknowledgments {}", r.ackn_count);
    let _ = writeln!(out, "ackn_per_turn {}", ratio(r.ackn_per_turn()));
    let _ = writeln!(out, "embedded {}", r.embedded_count);
    let _ = writeln!(out, "repair_rate {}", ratio(r.repair_rate()));
    let _ = writeln!(out, "nonrepair_rate {}", ratio(r.nonrepair_rate()));
    for (class, n) in &r.per_class {
        let _ = writeln!(out, "class {class} {n}");
    }
    for (pattern, n) in &r.per_pattern {
        let _ = writeln!(out, "pattern {pattern} {n}");
    }
    for (speaker, n) in &r.per_speaker {
        let _ = writeln!(out, "speaker {speaker} {n}");
    }
    out
}

pub fn expectation_line(e: &Expectation) -> String {
    let strength = match e.strength {
        ackn_core::Strength::Expected => "expected",
        ackn_core::Strength::Admissible => "admissible",
    };
    match (e.class_if_ackn, e.pattern_if_ackn) {
        (Some(c), Some(p)) => format!("{} {} {} {} {}", e.speaker, e.act, c, p, strength),
        (Some(c), None) => format!("{} {} {} {}", e.speaker, e.act, c, strength),
        _ => format!("{} {} {}", e.speaker, e.act, strength),
    }
}
