//! Exchange-structure parsing.
//!
//! A dialogue is read left to right, one utterance at a time, against a stack
//! of unclosed root exchanges. Acknowledgment-family acts (`ackn`, `assess`)
//! are attached by the first rule that applies:
//!
//! * **R1** not turn-initial and the same-turn predecessor is a non-ackn act:
//!   a within-turn self-acknowledgment.
//! * **R2** turn-initial and the top exchange is open and was initiated by the
//!   other speaker: completes it and starts a responding segment. Later acts in
//!   the same turn join that completion.
//! * **R3** turn-initial and the top exchange is completed and was initiated by
//!   this speaker: an acceptance, which closes it. Further ackn-family acts in
//!   the same turn are additional acceptances.
//! * **R4** turn-initial and the most recently closed root exchange was an
//!   `inform` exchange by the other speaker: that exchange is lifted into the
//!   initiation slot of a new outer exchange, completed by this act.
//! * **R5** otherwise the act is an orphan.
//!
//! Non-ackn acts extend an active responding segment; an `inform` answers an
//! open `request`/`mrequest` from the other speaker on top of the stack;
//! otherwise initiating acts open a new root exchange. `other` acts outside a
//! segment are orphans.
//!
//! Opening a root settles (drops from the stack) a completed exchange still
//! awaiting acceptance and forgets the last closed exchange, so at most one
//! completed exchange is ever on the stack and it is always on top.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dialogue::{Dialogue, Speaker, SpeechActTag, UttRef};

/// Maximum nesting depth of embedded exchanges. A root without embedding has depth 1.
pub const MAX_DEPTH: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Initiation {
    Act(UttRef),
    Embedded(Box<ExchangeNode>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Open,
    Completed,
    Closed,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Open => "open",
            Status::Completed => "completed",
            Status::Closed => "closed",
        })
    }
}

fn status_of(completion: &[UttRef], acceptances: &[UttRef]) -> Status {
    if completion.is_empty() {
        Status::Open
    } else if acceptances.is_empty() {
        Status::Completed
    } else {
        Status::Closed
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExchangeNode {
    pub initiation: Initiation,
    /// For an embedded initiation, the inner exchange's initiation act.
    pub initiation_act: SpeechActTag,
    pub initiator: Speaker,
    /// Responding segment by the non-initiator, all in one turn.
    pub completion: Option<Vec<UttRef>>,
    /// Follow-up acknowledgments by the initiator.
    pub acceptances: Vec<UttRef>,
}

impl ExchangeNode {
    pub fn status(&self) -> Status {
        status_of(self.completion.as_deref().unwrap_or(&[]), &self.acceptances)
    }

    pub fn is_embedded(&self) -> bool {
        matches!(self.initiation, Initiation::Embedded(_))
    }

    pub fn depth(&self) -> usize {
        match &self.initiation {
            Initiation::Act(_) => 1,
            Initiation::Embedded(inner) => inner.depth() + 1,
        }
    }

    /// Pre-order walk: this node, then its embedded initiation chain.
    pub fn walk(&self) -> impl Iterator<Item = &ExchangeNode> {
        std::iter::successors(Some(self), |n| match &n.initiation {
            Initiation::Embedded(inner) => Some(inner.as_ref()),
            Initiation::Act(_) => None,
        })
    }

    /// Every utterance that belongs to this exchange, including embedded ones.
    pub fn utterances(&self) -> Vec<UttRef> {
        let mut out = Vec::new();
        for node in self.walk() {
            if let Initiation::Act(site) = node.initiation {
                out.push(site);
            }
            out.extend(node.completion.iter().flatten().copied());
            out.extend(node.acceptances.iter().copied());
        }
        out.sort();
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrphanReason {
    /// No exchange the acknowledgment could relate to.
    NoAntecedent,
    /// Lifting would exceed [`MAX_DEPTH`].
    DepthLimit,
    /// An ackn-family act following another inside a turn, outside any segment.
    Stranded,
    /// `other` act outside a responding segment.
    OutOfCatalogue,
}

impl fmt::Display for OrphanReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OrphanReason::NoAntecedent => "no exchange to acknowledge",
            OrphanReason::DepthLimit => "embedding depth limit reached",
            OrphanReason::Stranded => "follows an unattached acknowledgment",
            OrphanReason::OutOfCatalogue => "act outside the catalogue",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Orphan {
    pub site: UttRef,
    pub reason: OrphanReason,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExchangeTree {
    pub roots: Vec<ExchangeNode>,
    pub self_ackn_sites: Vec<UttRef>,
    pub orphans: Vec<Orphan>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Initiation,
    Completion,
    Acceptance,
    SelfAckn,
    Orphan,
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Role::Initiation => "initiation",
            Role::Completion => "completion",
            Role::Acceptance => "acceptance",
            Role::SelfAckn => "self_ackn",
            Role::Orphan => "orphan",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CoverageError {
    #[error("tree/dialogue mismatch: dialogue has no utterances")]
    EmptyDialogue,
    #[error("tree/dialogue mismatch: {0} does not exist in the dialogue")]
    OutOfRange(UttRef),
    #[error("tree/dialogue mismatch: {0} is assigned more than one role")]
    Duplicate(UttRef),
    #[error("tree/dialogue mismatch: {0} is not covered by the tree")]
    Missing(UttRef),
}

/// Every utterance of `d` with its structural role, in document order.
pub fn utterance_coverage(
    t: &ExchangeTree,
    d: &Dialogue,
) -> Result<Vec<(UttRef, Role)>, CoverageError> {
    if d.utterance_count() == 0 {
        return Err(CoverageError::EmptyDialogue);
    }
    let mut slots: Vec<Vec<Option<Role>>> = d
        .turns
        .iter()
        .map(|turn| vec![None; turn.utterances.len()])
        .collect();
    let mut assign = |site: UttRef, role: Role| -> Result<(), CoverageError> {
        let slot = slots
            .get_mut(site.turn)
            .and_then(|t| t.get_mut(site.utterance))
            .ok_or(CoverageError::OutOfRange(site))?;
        if slot.is_some() {
            return Err(CoverageError::Duplicate(site));
        }
        *slot = Some(role);
        Ok(())
    };
    for root in &t.roots {
        for node in root.walk() {
            if let Initiation::Act(site) = node.initiation {
                assign(site, Role::Initiation)?;
            }
            for &site in node.completion.iter().flatten() {
                assign(site, Role::Completion)?;
            }
            for &site in &node.acceptances {
                assign(site, Role::Acceptance)?;
            }
        }
    }
    for &site in &t.self_ackn_sites {
        assign(site, Role::SelfAckn)?;
    }
    for orphan in &t.orphans {
        assign(orphan.site, Role::Orphan)?;
    }
    let mut out = Vec::with_capacity(d.utterance_count());
    for (ti, turn) in slots.into_iter().enumerate() {
        for (ui, role) in turn.into_iter().enumerate() {
            let site = UttRef::new(ti, ui);
            out.push((site, role.ok_or(CoverageError::Missing(site))?));
        }
    }
    Ok(out)
}

/// Arena index of an exchange inside an [`ExchangeBuilder`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct NodeId(usize);

#[derive(Clone, Debug)]
enum Init {
    Act(UttRef),
    Embedded(NodeId),
}

#[derive(Clone, Debug)]
struct Slot {
    initiation: Init,
    initiation_act: SpeechActTag,
    initiator: Speaker,
    completion: Vec<UttRef>,
    acceptances: Vec<UttRef>,
    depth: usize,
}

impl Slot {
    fn status(&self) -> Status {
        status_of(&self.completion, &self.acceptances)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Segment {
    Completion(NodeId),
    Acceptance(NodeId),
}

#[derive(Clone, Debug)]
struct Cursor {
    turn: usize,
    speaker: Speaker,
    last_act: SpeechActTag,
    segment: Option<Segment>,
}

/// Which attachment the next utterance would receive.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Step {
    /// R1.
    SelfAckn,
    /// R2: turn-initial completion of the top open exchange.
    Complete(NodeId),
    /// Continuation of this turn's responding segment.
    Extend(NodeId),
    /// R3: acceptance closing the top completed exchange.
    Accept(NodeId),
    /// Additional acceptance in the same turn.
    AcceptMore(NodeId),
    /// R4: lift a closed exchange into a new outer one.
    Lift(NodeId),
    /// `inform` answering an open request.
    Answer(NodeId),
    Open,
    Orphan(OrphanReason),
}

/// Summary of an exchange on the builder's stack.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExchangeSummary {
    pub initiator: Speaker,
    pub initiation_act: SpeechActTag,
    /// First act of the completion, if any.
    pub completion_act: Option<SpeechActTag>,
    pub status: Status,
    pub depth: usize,
}

/// Incremental exchange-structure builder shared by the batch parser and the
/// predictor.
#[derive(Clone, Debug, Default)]
pub struct ExchangeBuilder {
    nodes: Vec<Slot>,
    acts: Vec<Vec<SpeechActTag>>,
    roots: Vec<NodeId>,
    stack: Vec<NodeId>,
    last_closed: Option<NodeId>,
    self_ackn_sites: Vec<UttRef>,
    orphans: Vec<Orphan>,
    cursor: Option<Cursor>,
}

impl ExchangeBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    fn slot(&self, id: NodeId) -> &Slot {
        &self.nodes[id.0]
    }

    fn act_at(&self, site: UttRef) -> SpeechActTag {
        self.acts[site.turn][site.utterance]
    }

    pub fn summary(&self, id: NodeId) -> ExchangeSummary {
        let s = self.slot(id);
        ExchangeSummary {
            initiator: s.initiator.clone(),
            initiation_act: s.initiation_act,
            completion_act: s.completion.first().map(|&site| self.act_at(site)),
            status: s.status(),
            depth: s.depth,
        }
    }

    /// Unclosed root exchanges, bottom first.
    pub fn stack(&self) -> Vec<ExchangeSummary> {
        self.stack.iter().map(|&id| self.summary(id)).collect()
    }

    pub fn last_closed(&self) -> Option<ExchangeSummary> {
        self.last_closed.map(|id| self.summary(id))
    }

    pub fn current_turn(&self) -> Option<(usize, &Speaker)> {
        self.cursor.as_ref().map(|c| (c.turn, &c.speaker))
    }

    /// Last act of the current turn, if `speaker` holds it.
    pub fn held_turn_last_act(&self, speaker: &Speaker) -> Option<SpeechActTag> {
        self.cursor
            .as_ref()
            .filter(|c| &c.speaker == speaker)
            .map(|c| c.last_act)
    }

    /// The site the next utterance by `speaker` would occupy.
    pub fn next_site(&self, speaker: &Speaker) -> UttRef {
        match &self.cursor {
            None => UttRef::new(0, 0),
            Some(c) if &c.speaker == speaker => UttRef::new(c.turn, self.acts[c.turn].len()),
            Some(c) => UttRef::new(c.turn + 1, 0),
        }
    }

    fn top(&self) -> Option<(NodeId, &Slot)> {
        self.stack.last().map(|&id| (id, self.slot(id)))
    }

    /// Decides how an utterance by `speaker` at `site` would attach, without
    /// changing the builder.
    pub fn decide(&self, speaker: &Speaker, act: SpeechActTag, site: UttRef) -> Step {
        let in_turn = self
            .cursor
            .as_ref()
            .filter(|c| c.turn == site.turn && &c.speaker == speaker);

        if act.is_ackn_family() {
            if let Some(cursor) = in_turn {
                // R1
                if !cursor.last_act.is_ackn_family() {
                    return Step::SelfAckn;
                }
                return match cursor.segment {
                    Some(Segment::Completion(id)) => Step::Extend(id),
                    Some(Segment::Acceptance(id)) => Step::AcceptMore(id),
                    None => Step::Orphan(OrphanReason::Stranded),
                };
            }
            if let Some((id, top)) = self.top() {
                let status = top.status();
                // R2
                if status == Status::Open && &top.initiator != speaker {
                    return Step::Complete(id);
                }
                // R3
                if status == Status::Completed && &top.initiator == speaker {
                    return Step::Accept(id);
                }
            }
            // R4
            if let Some(id) = self.last_closed {
                let closed = self.slot(id);
                if closed.initiation_act == SpeechActTag::Inform && &closed.initiator != speaker {
                    if closed.depth >= MAX_DEPTH {
                        return Step::Orphan(OrphanReason::DepthLimit);
                    }
                    return Step::Lift(id);
                }
            }
            // R5
            return Step::Orphan(OrphanReason::NoAntecedent);
        }

        if let Some(Segment::Completion(id)) = in_turn.and_then(|c| c.segment) {
            return Step::Extend(id);
        }
        if act == SpeechActTag::Inform {
            if let Some((id, top)) = self.top() {
                if top.status() == Status::Open
                    && matches!(
                        top.initiation_act,
                        SpeechActTag::Request | SpeechActTag::Mrequest
                    )
                    && &top.initiator != speaker
                {
                    return Step::Answer(id);
                }
            }
        }
        if act.is_initiating() {
            Step::Open
        } else {
            Step::Orphan(OrphanReason::OutOfCatalogue)
        }
    }

    /// Attaches one utterance. Sites must arrive in document order.
    pub fn push(&mut self, speaker: &Speaker, act: SpeechActTag, site: UttRef) -> Step {
        let step = self.decide(speaker, act, site);

        let new_turn = self
            .cursor
            .as_ref()
            .is_none_or(|c| c.turn != site.turn || &c.speaker != speaker);
        if new_turn {
            self.cursor = Some(Cursor {
                turn: site.turn,
                speaker: speaker.clone(),
                last_act: act,
                segment: None,
            });
        }
        while self.acts.len() <= site.turn {
            self.acts.push(Vec::new());
        }
        self.acts[site.turn].push(act);

        let mut segment = self.cursor.as_ref().and_then(|c| c.segment);
        match step {
            Step::SelfAckn => self.self_ackn_sites.push(site),
            Step::Orphan(reason) => self.orphans.push(Orphan { site, reason }),
            Step::Complete(id) => {
                self.nodes[id.0].completion.push(site);
                segment = Some(Segment::Completion(id));
            }
            Step::Extend(id) => self.nodes[id.0].completion.push(site),
            Step::Answer(id) => {
                self.nodes[id.0].completion.push(site);
                segment = None;
            }
            Step::Accept(id) => {
                self.nodes[id.0].acceptances.push(site);
                self.stack.pop();
                self.last_closed = Some(id);
                segment = Some(Segment::Acceptance(id));
            }
            Step::AcceptMore(id) => self.nodes[id.0].acceptances.push(site),
            Step::Lift(inner) => {
                let lifted = self.slot(inner).clone();
                let outer = NodeId(self.nodes.len());
                self.nodes.push(Slot {
                    initiation: Init::Embedded(inner),
                    initiation_act: lifted.initiation_act,
                    initiator: lifted.initiator,
                    completion: vec![site],
                    acceptances: Vec::new(),
                    depth: lifted.depth + 1,
                });
                if let Some(pos) = self.roots.iter().position(|&r| r == inner) {
                    self.roots[pos] = outer;
                }
                self.settle();
                self.stack.push(outer);
                self.last_closed = None;
                segment = Some(Segment::Completion(outer));
            }
            Step::Open => {
                let id = NodeId(self.nodes.len());
                self.nodes.push(Slot {
                    initiation: Init::Act(site),
                    initiation_act: act,
                    initiator: speaker.clone(),
                    completion: Vec::new(),
                    acceptances: Vec::new(),
                    depth: 1,
                });
                self.roots.push(id);
                self.settle();
                self.stack.push(id);
                self.last_closed = None;
                segment = None;
            }
        }
        if let Some(cursor) = self.cursor.as_mut() {
            cursor.last_act = act;
            cursor.segment = segment;
        }
        step
    }

    fn settle(&mut self) {
        if let Some(&top) = self.stack.last() {
            if self.slot(top).status() == Status::Completed {
                self.stack.pop();
            }
        }
    }

    fn realize(&self, id: NodeId) -> ExchangeNode {
        let s = self.slot(id);
        ExchangeNode {
            initiation: match s.initiation {
                Init::Act(site) => Initiation::Act(site),
                Init::Embedded(inner) => Initiation::Embedded(Box::new(self.realize(inner))),
            },
            initiation_act: s.initiation_act,
            initiator: s.initiator.clone(),
            completion: (!s.completion.is_empty()).then(|| s.completion.clone()),
            acceptances: s.acceptances.clone(),
        }
    }

    /// The tree built so far.
    pub fn tree(&self) -> ExchangeTree {
        ExchangeTree {
            roots: self.roots.iter().map(|&id| self.realize(id)).collect(),
            self_ackn_sites: self.self_ackn_sites.clone(),
            orphans: self.orphans.clone(),
        }
    }
}

/// Builds the exchange tree of a validated dialogue.
pub fn parse_exchanges(d: &Dialogue) -> ExchangeTree {
    let mut builder = ExchangeBuilder::new();
    for (site, turn, utterance) in d.sites() {
        builder.push(&turn.speaker, utterance.act, site);
    }
    builder.tree()
}
