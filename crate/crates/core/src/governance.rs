//! Threshold governance, the audit register, typed reachability, commitment
//! timelines and cross-unit diagnostics.
//!
//! The audit operator `A` is realised as the recorded degree of a diagnostic
//! (0 when nothing has been recorded). The register only ever grows: items
//! can change status but are never removed, and re-recording can raise a
//! degree but never lower it.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::io::{BufRead, Write};
use std::path::Path;

use serde::{Deserialize, Serialize, Serializer};

use crate::algebra::{AlgebraPackage, Degree, Proposition};
use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::frame::{Frame, Relation};
use crate::modal::{self, RefinementKind, StatusBundle};

/// Governance thresholds. No ordering between them is imposed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GovernanceThresholds {
    /// Endorsement threshold on `Mp`.
    pub alpha: Degree,
    /// Monitoring threshold on `◇p`.
    pub beta: Degree,
    /// Review threshold on hesitation.
    pub eta: Degree,
    /// Audit-item threshold on diagnostics.
    pub delta: Degree,
    /// Revision trigger on inconsistency.
    pub iota: Degree,
}

impl Default for GovernanceThresholds {
    fn default() -> Self {
        let d = |x| Degree::new(x).expect("default threshold in range");
        GovernanceThresholds {
            alpha: d(0.8),
            beta: d(0.2),
            eta: d(0.5),
            delta: d(0.5),
            iota: d(0.5),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Action {
    Endorse,
    MonitorOrEscalate,
    RecordHesitationRequireReview,
    OpenMetaAuditItem,
}

impl Action {
    pub fn name(self) -> &'static str {
        match self {
            Action::Endorse => "endorse",
            Action::MonitorOrEscalate => "monitor_or_escalate",
            Action::RecordHesitationRequireReview => "record_hesitation_require_review",
            Action::OpenMetaAuditItem => "open_meta_audit_item",
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionSet(BTreeSet<Action>);

impl ActionSet {
    pub fn contains(&self, a: Action) -> bool {
        self.0.contains(&a)
    }

    pub fn iter(&self) -> impl Iterator<Item = Action> + '_ {
        self.0.iter().copied()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }
}

impl FromIterator<Action> for ActionSet {
    fn from_iter<I: IntoIterator<Item = Action>>(iter: I) -> Self {
        ActionSet(iter.into_iter().collect())
    }
}

impl fmt::Display for ActionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("none");
        }
        let names: Vec<&str> = self.iter().map(Action::name).collect();
        f.write_str(&names.join(", "))
    }
}

/// Threshold rule at world `w`.
pub fn apply_rule(bundle: &StatusBundle, moore_degree: Degree, th: &GovernanceThresholds, w: usize) -> ActionSet {
    let b = bundle.box_.values()[w];
    let d = bundle.diamond.values()[w];
    let h = bundle.hesitation.values()[w];
    let mut out = BTreeSet::new();
    if b >= th.alpha.value() {
        out.insert(Action::Endorse);
    }
    if d >= th.beta.value() && b < th.alpha.value() {
        out.insert(Action::MonitorOrEscalate);
    }
    if h >= th.eta.value() {
        out.insert(Action::RecordHesitationRequireReview);
    }
    if moore_degree.value() >= th.delta.value() && moore_degree.value() > 0.0 {
        out.insert(Action::OpenMetaAuditItem);
    }
    ActionSet(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiagnosticKind {
    Moore,
    Anti,
    Unsup,
    Conf,
    Hesitation,
    Inconsistency,
    Disagreement,
    MistakenReliance,
    MistakenHigherOrder,
    /// Any other audited formula, keyed by its printed form.
    Custom(String),
}

impl DiagnosticKind {
    pub fn name(&self) -> &str {
        match self {
            DiagnosticKind::Moore => "moore",
            DiagnosticKind::Anti => "anti",
            DiagnosticKind::Unsup => "unsup",
            DiagnosticKind::Conf => "conf",
            DiagnosticKind::Hesitation => "hesitation",
            DiagnosticKind::Inconsistency => "inconsistency",
            DiagnosticKind::Disagreement => "disagreement",
            DiagnosticKind::MistakenReliance => "mistaken_reliance",
            DiagnosticKind::MistakenHigherOrder => "mistaken_higher_order",
            DiagnosticKind::Custom(_) => "custom",
        }
    }
}

/// What is being diagnosed, independent of the world.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Diagnostic {
    pub kind: DiagnosticKind,
    pub proposition: String,
    pub standards: Vec<String>,
}

impl Diagnostic {
    pub fn new(kind: DiagnosticKind, proposition: impl Into<String>, standards: &[&str]) -> Self {
        Diagnostic {
            kind,
            proposition: proposition.into(),
            standards: standards.iter().map(|s| s.to_string()).collect(),
        }
    }

    pub fn refinement(kind: &RefinementKind, proposition: impl Into<String>) -> Self {
        let (k, stds) = match kind {
            RefinementKind::Moore { standard } => (DiagnosticKind::Moore, vec![standard.clone()]),
            RefinementKind::Anti { standard } => (DiagnosticKind::Anti, vec![standard.clone()]),
            RefinementKind::Unsup { evidence, standard } => {
                (DiagnosticKind::Unsup, vec![evidence.clone(), standard.clone()])
            }
            RefinementKind::Conf { evidence, standard } => {
                (DiagnosticKind::Conf, vec![evidence.clone(), standard.clone()])
            }
        };
        Diagnostic {
            kind: k,
            proposition: proposition.into(),
            standards: stds,
        }
    }

    /// Recognise the refinement shapes `p & ![M]p`, `p & [M]!p`,
    /// `[E]p & ![M]p` and `[E]p & [M]!p`; anything else is custom.
    pub fn for_formula(f: &Formula) -> Self {
        use Formula as F;
        let atom = |g: &F| match g {
            F::Atom(n) => Some(n.clone()),
            _ => None,
        };
        let boxed_atom = |g: &F| match g {
            F::Box(s, a) => atom(a).map(|n| (s.clone(), n)),
            _ => None,
        };
        let boxed_neg_atom = |g: &F| match g {
            F::Box(s, a) => match a.as_ref() {
                F::Not(b) => atom(b).map(|n| (s.clone(), n)),
                _ => None,
            },
            _ => None,
        };
        let neg_boxed_atom = |g: &F| match g {
            F::Not(a) => boxed_atom(a),
            _ => None,
        };
        if let F::And(l, r) = f {
            if let Some(p) = atom(l) {
                if let Some((m, q)) = neg_boxed_atom(r) {
                    if p == q {
                        return Diagnostic::new(DiagnosticKind::Moore, p, &[&m]);
                    }
                }
                if let Some((m, q)) = boxed_neg_atom(r) {
                    if p == q {
                        return Diagnostic::new(DiagnosticKind::Anti, p, &[&m]);
                    }
                }
            }
            if let Some((e, p)) = boxed_atom(l) {
                if let Some((m, q)) = neg_boxed_atom(r) {
                    if p == q && e != m {
                        return Diagnostic::new(DiagnosticKind::Unsup, p, &[&e, &m]);
                    }
                }
                if let Some((m, q)) = boxed_neg_atom(r) {
                    if p == q && e != m {
                        return Diagnostic::new(DiagnosticKind::Conf, p, &[&e, &m]);
                    }
                }
            }
        }
        let text = f.to_string();
        Diagnostic {
            kind: DiagnosticKind::Custom(text.clone()),
            proposition: text,
            standards: Vec::new(),
        }
    }

    /// The formula this diagnostic stands for, when it has one.
    pub fn formula(&self) -> Option<Formula> {
        let p = || Formula::atom(&self.proposition);
        let s = |i: usize| self.standards.get(i).cloned();
        Some(match self.kind {
            DiagnosticKind::Moore => Formula::moore(&self.proposition, &s(0)?),
            DiagnosticKind::Anti => Formula::anti(&self.proposition, &s(0)?),
            DiagnosticKind::Unsup => Formula::and(
                Formula::nec(s(0)?, p()),
                Formula::not(Formula::nec(s(1)?, p())),
            ),
            DiagnosticKind::Conf => Formula::and(
                Formula::nec(s(0)?, p()),
                Formula::nec(s(1)?, Formula::not(p())),
            ),
            _ => return None,
        })
    }

    pub fn at(&self, world: impl Into<String>) -> DiagnosticKey {
        DiagnosticKey {
            diagnostic: self.clone(),
            world: world.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DiagnosticKey {
    #[serde(flatten)]
    pub diagnostic: Diagnostic,
    pub world: String,
}

impl fmt::Display for DiagnosticKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = self.diagnostic.kind.name();
        write!(
            f,
            "{}({}; {}) @ {}",
            kind,
            self.diagnostic.proposition,
            self.diagnostic.standards.join(","),
            self.world
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticRecord {
    pub key: DiagnosticKey,
    pub degree: Degree,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AuditStatus {
    Open,
    Reviewed,
    Escalated,
    ClosedWithJustification,
}

impl AuditStatus {
    fn can_move_to(self, next: AuditStatus) -> bool {
        use AuditStatus::*;
        matches!(
            (self, next),
            (Open, Reviewed)
                | (Open, Escalated)
                | (Open, ClosedWithJustification)
                | (Reviewed, Escalated)
                | (Reviewed, ClosedWithJustification)
                | (Escalated, Reviewed)
                | (Escalated, ClosedWithJustification)
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatusChange {
    pub at: u64,
    pub status: AuditStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub justification: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditItem {
    pub key: DiagnosticKey,
    pub degree: f64,
    pub status: AuditStatus,
    pub history: Vec<StatusChange>,
}

/// One line of the register's event log. `seq` is the register's logical clock.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum AuditEvent {
    Recorded { seq: u64, key: DiagnosticKey, degree: f64 },
    Raised { seq: u64, key: DiagnosticKey, degree: f64 },
    Status {
        seq: u64,
        key: DiagnosticKey,
        status: AuditStatus,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        justification: Option<String>,
    },
}

impl AuditEvent {
    pub fn seq(&self) -> u64 {
        match self {
            AuditEvent::Recorded { seq, .. } | AuditEvent::Raised { seq, .. } | AuditEvent::Status { seq, .. } => *seq,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RecordOutcome {
    New,
    Raised,
    Unchanged,
    /// Degree-0 diagnostics are never recorded.
    Ignored,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct AuditRegister {
    items: BTreeMap<DiagnosticKey, AuditItem>,
    events: Vec<AuditEvent>,
    clock: u64,
}

impl AuditRegister {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn items(&self) -> impl Iterator<Item = &AuditItem> {
        self.items.values()
    }

    pub fn get(&self, key: &DiagnosticKey) -> Option<&AuditItem> {
        self.items.get(key)
    }

    pub fn events(&self) -> &[AuditEvent] {
        &self.events
    }

    pub fn clock(&self) -> u64 {
        self.clock
    }

    /// Audit degree `A d`: the recorded degree, or 0.
    pub fn degree(&self, key: &DiagnosticKey) -> f64 {
        self.items.get(key).map_or(0.0, |i| i.degree)
    }

    /// `A d` over all worlds of a frame.
    pub fn audit_proposition(&self, frame: &Frame, diagnostic: &Diagnostic) -> Proposition {
        let mut key = diagnostic.at("");
        let vals = frame
            .worlds()
            .iter()
            .map(|w| {
                key.world.clone_from(w);
                self.degree(&key)
            })
            .collect();
        Proposition::new(vals).expect("recorded degrees are in range")
    }

    pub fn record(&mut self, rec: &DiagnosticRecord) -> RecordOutcome {
        let degree = rec.degree.value();
        if degree <= 0.0 {
            return RecordOutcome::Ignored;
        }
        let outcome = match self.items.get(&rec.key) {
            None => RecordOutcome::New,
            Some(item) if degree > item.degree => RecordOutcome::Raised,
            Some(_) => RecordOutcome::Unchanged,
        };
        let seq = self.clock + 1;
        let event = match outcome {
            RecordOutcome::New => AuditEvent::Recorded {
                seq,
                key: rec.key.clone(),
                degree,
            },
            RecordOutcome::Raised => AuditEvent::Raised {
                seq,
                key: rec.key.clone(),
                degree,
            },
            _ => return outcome,
        };
        self.apply(event).expect("fresh events apply cleanly");
        outcome
    }

    pub fn set_status(
        &mut self,
        key: &DiagnosticKey,
        status: AuditStatus,
        justification: Option<String>,
    ) -> Result<()> {
        if status == AuditStatus::ClosedWithJustification
            && justification.as_deref().is_none_or(|j| j.trim().is_empty())
        {
            return Err(Error::InvalidTransition(format!("closing {key} requires a justification")));
        }
        self.apply(AuditEvent::Status {
            seq: self.clock + 1,
            key: key.clone(),
            status,
            justification,
        })
    }

    fn apply(&mut self, event: AuditEvent) -> Result<()> {
        let seq = event.seq();
        if seq <= self.clock {
            return Err(Error::NonMonotoneEpoch {
                last: self.clock,
                next: seq,
            });
        }
        match &event {
            AuditEvent::Recorded { key, degree, .. } => {
                if self.items.contains_key(key) {
                    return Err(Error::InvalidTransition(format!("{key} recorded twice")));
                }
                Degree::new(*degree)?;
                self.items.insert(
                    key.clone(),
                    AuditItem {
                        key: key.clone(),
                        degree: *degree,
                        status: AuditStatus::Open,
                        history: vec![StatusChange {
                            at: seq,
                            status: AuditStatus::Open,
                            justification: None,
                        }],
                    },
                );
            }
            AuditEvent::Raised { key, degree, .. } => {
                let item = self
                    .items
                    .get_mut(key)
                    .ok_or_else(|| Error::UnknownAuditItem(key.to_string()))?;
                if *degree <= item.degree || *degree > 1.0 {
                    return Err(Error::InvalidTransition(format!("{key} degree cannot move to {degree}")));
                }
                item.degree = *degree;
            }
            AuditEvent::Status {
                key,
                status,
                justification,
                ..
            } => {
                let item = self
                    .items
                    .get_mut(key)
                    .ok_or_else(|| Error::UnknownAuditItem(key.to_string()))?;
                if !item.status.can_move_to(*status) {
                    return Err(Error::InvalidTransition(format!(
                        "{key}: {:?} -> {:?}",
                        item.status, status
                    )));
                }
                item.status = *status;
                item.history.push(StatusChange {
                    at: seq,
                    status: *status,
                    justification: justification.clone(),
                });
            }
        }
        self.clock = seq;
        self.events.push(event);
        Ok(())
    }

    /// Rebuild a register from its event log.
    pub fn replay(events: impl IntoIterator<Item = AuditEvent>) -> Result<Self> {
        let mut reg = AuditRegister::new();
        for e in events {
            reg.apply(e)?;
        }
        Ok(reg)
    }

    pub fn to_ndjson(&self) -> String {
        let mut out = String::new();
        for e in &self.events {
            out.push_str(&serde_json::to_string(e).expect("events serialize"));
            out.push('\n');
        }
        out
    }

    pub fn from_ndjson(reader: impl BufRead) -> Result<Self> {
        let mut events = Vec::new();
        for line in reader.lines() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            events.push(serde_json::from_str(&line)?);
        }
        Self::replay(events)
    }

    /// Load from a log file; a missing file is an empty register.
    pub fn load(path: &Path) -> Result<Self> {
        match std::fs::File::open(path) {
            Ok(f) => Self::from_ndjson(std::io::BufReader::new(f)),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(Self::new()),
            Err(e) => Err(e.into()),
        }
    }

    /// Append events after the first `already_persisted` to a log file.
    pub fn append_new_events(&self, path: &Path, already_persisted: usize) -> Result<usize> {
        let mut f = std::fs::OpenOptions::new().create(true).append(true).open(path)?;
        let fresh = &self.events[already_persisted.min(self.events.len())..];
        for e in fresh {
            serde_json::to_writer(&mut f, e)?;
            f.write_all(b"\n")?;
        }
        Ok(fresh.len())
    }
}

fn formula_text<S: Serializer>(f: &Formula, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(f)
}

/// A reachability obligation the architecture generates.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Obligation {
    /// 0 for object-level risks, 1 for audit-level diagnostics.
    pub level: u8,
    #[serde(serialize_with = "formula_text")]
    pub formula: Formula,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReachEntry {
    pub proposition: String,
    pub reach0_holds: bool,
    pub reach0_max_violation: f64,
    pub reach0_failing_worlds: Vec<String>,
    pub diagnostic_max_degree: f64,
    pub reach1_holds: bool,
    pub reach1_max_violation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReachReport {
    pub standard: String,
    pub audit_standard: String,
    pub audit_relation_defaulted: bool,
    pub entries: Vec<ReachEntry>,
    pub obligations: Vec<Obligation>,
}

impl ReachReport {
    /// True when some obligation puts a stance operator over a Moorean diagnostic.
    pub fn has_box_over_moore(&self) -> bool {
        self.obligations.iter().any(|o| box_over_moore(&o.formula))
    }
}

fn box_over_moore(f: &Formula) -> bool {
    match f {
        Formula::Box(_, inner) => {
            matches!(Diagnostic::for_formula(inner).kind, DiagnosticKind::Moore) || box_over_moore(inner)
        }
        Formula::Atom(_) => false,
        Formula::Not(a) | Formula::Dia(_, a) | Formula::Dual(_, a) | Formula::Audit(a) => box_over_moore(a),
        Formula::And(a, b) | Formula::Or(a, b) => box_over_moore(a) || box_over_moore(b),
    }
}

/// Check `Reach₀: p ≤ ◇_M Mp` on each risk and `Reach₁: d ≤ ◇_A(A d)` on its
/// Moorean diagnostic `d`, recording each diagnostic into `register` first.
/// When the frame has no relation named `audit_std` the identity is used.
pub fn typed_reach_check(
    f: &Frame,
    std: &str,
    audit_std: &str,
    risk0: &[(String, Proposition)],
    register: &mut AuditRegister,
    pkg: AlgebraPackage,
) -> Result<ReachReport> {
    let defaulted = !f.has_standard(audit_std);
    let owned;
    let frame = if defaulted {
        let mut g = f.clone();
        g.add_relation(audit_std, Relation::identity(f.len()))?;
        owned = g;
        &owned
    } else {
        f
    };
    const TOL: f64 = 1e-12;
    let mut entries = Vec::new();
    let mut obligations = Vec::new();
    for (name, p) in risk0 {
        let mp = modal::box_op(frame, std, p, pkg)?;
        let reach = modal::diamond(frame, std, &mp, pkg)?;
        let failing: Vec<String> = (0..frame.len())
            .filter(|&w| p.values()[w] > reach.values()[w] + TOL)
            .map(|w| frame.world_name(w).to_string())
            .collect();
        let v0 = p.excess_over(&reach)?;

        let kind = RefinementKind::moore(std);
        let d = modal::refine(frame, p, &kind, pkg)?;
        let diag = Diagnostic::refinement(&kind, name.clone());
        for (w, &deg) in d.values().iter().enumerate() {
            register.record(&DiagnosticRecord {
                key: diag.at(frame.world_name(w)),
                degree: Degree::new(deg)?,
            });
        }
        let ad = register.audit_proposition(frame, &diag);
        let reach1 = modal::diamond(frame, audit_std, &ad, pkg)?;
        let v1 = d.excess_over(&reach1)?;

        obligations.push(Obligation {
            level: 0,
            formula: Formula::dia(std, Formula::nec(std, Formula::atom(name))),
        });
        obligations.push(Obligation {
            level: 1,
            formula: Formula::dia(audit_std, Formula::audit(Formula::moore(name, std))),
        });
        entries.push(ReachEntry {
            proposition: name.clone(),
            reach0_holds: failing.is_empty(),
            reach0_max_violation: v0,
            reach0_failing_worlds: failing,
            diagnostic_max_degree: d.values().iter().copied().fold(0.0, f64::max),
            reach1_holds: v1 <= TOL,
            reach1_max_violation: v1,
        });
    }
    Ok(ReachReport {
        standard: std.to_string(),
        audit_standard: audit_std.to_string(),
        audit_relation_defaulted: defaulted,
        entries,
        obligations,
    })
}

/// Statuses of one proposition at one world, as consumed by the timeline.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StatusSnapshot {
    pub belief: f64,
    pub belief_neg: f64,
    pub diamond: f64,
    pub hesitation: f64,
    pub inconsistency: f64,
}

impl StatusSnapshot {
    pub fn at(f: &Frame, std: &str, p: &Proposition, pkg: AlgebraPackage, w: usize) -> Result<Self> {
        let s = modal::statuses(f, std, p, pkg)?;
        let neg = modal::box_op(f, std, &p.negate(), pkg)?;
        Ok(StatusSnapshot {
            belief: s.box_.values()[w],
            belief_neg: neg.values()[w],
            diamond: s.diamond.values()[w],
            hesitation: s.hesitation.values()[w],
            inconsistency: s.inconsistency.values()[w],
        })
    }
}

/// Why an epoch was appended.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum EpochNote {
    Initial,
    /// New evidence about a fixed environment.
    Revision { evidence: String },
    /// The environment changed; the belief relation moves to a new version.
    Update { environment: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Epoch {
    pub t: u64,
    pub belief: f64,
    pub belief_neg: f64,
    pub relation_version: u32,
    pub note: EpochNote,
    pub review: bool,
    pub withdrawn: bool,
    pub precautionary: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommitmentTimeline {
    pub proposition: String,
    epochs: Vec<Epoch>,
}

impl CommitmentTimeline {
    pub fn new(proposition: impl Into<String>, initial: &StatusSnapshot) -> Self {
        CommitmentTimeline {
            proposition: proposition.into(),
            epochs: vec![Epoch {
                t: 0,
                belief: initial.belief,
                belief_neg: initial.belief_neg,
                relation_version: 0,
                note: EpochNote::Initial,
                review: false,
                withdrawn: false,
                precautionary: false,
            }],
        }
    }

    pub fn epochs(&self) -> &[Epoch] {
        &self.epochs
    }

    pub fn last(&self) -> &Epoch {
        self.epochs.last().expect("timeline has an initial epoch")
    }
}

/// Append epoch `t` to the timeline.
///
/// For a revision the previous commitment degrees carry over; for an update
/// they are taken from `statuses`, which the caller computes on the new
/// relation. Then: inconsistency `≥ ι` withdraws both commitments and blocks
/// adoption; otherwise `◇ ≥ β` with `B < α` adopts `B = ◇`. Hesitation `≥ η`
/// flags the epoch for review.
pub fn revise_commitments(
    tl: &mut CommitmentTimeline,
    t: u64,
    statuses: &StatusSnapshot,
    th: &GovernanceThresholds,
    note: EpochNote,
) -> Result<()> {
    let prev = tl.last().clone();
    if t <= prev.t {
        return Err(Error::NonMonotoneEpoch { last: prev.t, next: t });
    }
    let (mut belief, mut belief_neg, version) = match note {
        EpochNote::Initial => {
            return Err(Error::InvalidSpec("only the first epoch is initial".into()));
        }
        EpochNote::Revision { .. } => (prev.belief, prev.belief_neg, prev.relation_version),
        EpochNote::Update { .. } => (statuses.belief, statuses.belief_neg, prev.relation_version + 1),
    };
    let withdrawn = statuses.inconsistency >= th.iota.value() && statuses.inconsistency > 0.0;
    let mut precautionary = false;
    if withdrawn {
        belief = 0.0;
        belief_neg = 0.0;
    } else if statuses.diamond >= th.beta.value() && belief < th.alpha.value() {
        belief = statuses.diamond;
        precautionary = true;
    }
    tl.epochs.push(Epoch {
        t,
        belief,
        belief_neg,
        relation_version: version,
        note,
        review: statuses.hesitation >= th.eta.value(),
        withdrawn,
        precautionary,
    });
    Ok(())
}

/// Stance operators of the units being compared.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Units {
    pub beliefs: Vec<String>,
    pub assurances: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossDiagnostic {
    pub kind: DiagnosticKind,
    /// The standard used positively.
    pub i: String,
    /// The standard used negatively.
    pub j: String,
    pub degrees: Proposition,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossReport {
    pub diagnostics: Vec<CrossDiagnostic>,
    pub records: Vec<DiagnosticRecord>,
}

/// One cross term; pairs with `i == j` are excluded and read 0.
pub fn cross_term(
    f: &Frame,
    kind: &DiagnosticKind,
    i: &str,
    j: &str,
    p: &Proposition,
    pkg: AlgebraPackage,
) -> Result<Proposition> {
    if i == j {
        return Ok(Proposition::zero(f.len()));
    }
    let bj = modal::box_op(f, j, p, pkg)?;
    let positive = match kind {
        DiagnosticKind::Disagreement => modal::box_op(f, i, p, pkg)?,
        DiagnosticKind::MistakenReliance | DiagnosticKind::MistakenHigherOrder => modal::box_op(f, i, &bj, pkg)?,
        other => return Err(Error::InvalidSpec(format!("{other:?} is not a cross diagnostic"))),
    };
    positive.meet(&bj.negate())
}

/// Disagreement `B_i p ∧ ¬B_j p` and higher-order error `B_i B_j p ∧ ¬B_j p`
/// over ordered belief pairs, and mistaken reliance `B_i K_j p ∧ ¬K_j p`
/// over belief/assurance pairs. Worlds with degree `≥ δ` (and above 0) are
/// returned as records.
pub fn cross_diagnostics(
    f: &Frame,
    units: &Units,
    prop_name: &str,
    pkg: AlgebraPackage,
    delta: Degree,
) -> Result<CrossReport> {
    let total = units.beliefs.len() + units.assurances.len();
    if total < 2 {
        return Err(Error::TooFewStandards(total));
    }
    let p = f.proposition(prop_name)?;
    let mut diagnostics = Vec::new();
    let mut push = |kind: DiagnosticKind, i: &String, j: &String| -> Result<()> {
        if i != j {
            let degrees = cross_term(f, &kind, i, j, p, pkg)?;
            diagnostics.push(CrossDiagnostic {
                kind,
                i: i.clone(),
                j: j.clone(),
                degrees,
            });
        }
        Ok(())
    };
    for i in &units.beliefs {
        for j in &units.beliefs {
            push(DiagnosticKind::Disagreement, i, j)?;
            push(DiagnosticKind::MistakenHigherOrder, i, j)?;
        }
        for j in &units.assurances {
            push(DiagnosticKind::MistakenReliance, i, j)?;
        }
    }
    let mut records = Vec::new();
    for d in &diagnostics {
        let diag = Diagnostic::new(d.kind.clone(), prop_name, &[&d.i, &d.j]);
        for (w, &x) in d.degrees.values().iter().enumerate() {
            if x > 0.0 && x >= delta.value() {
                records.push(DiagnosticRecord {
                    key: diag.at(f.world_name(w)),
                    degree: Degree::new(x)?,
                });
            }
        }
    }
    Ok(CrossReport { diagnostics, records })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::frame_from_json;

    const G: AlgebraPackage = AlgebraPackage::GODEL;

    fn deg(x: f64) -> Degree {
        Degree::new(x).unwrap()
    }

    fn bundle(b: f64, d: f64, h: f64) -> StatusBundle {
        let p = |x| Proposition::new(vec![x]).unwrap();
        StatusBundle {
            box_: p(b),
            diamond: p(d),
            dual: p((b + h).min(1.0)),
            hesitation: p(h),
            inconsistency: p(0.0),
        }
    }

    #[test]
    fn rule_examples() {
        let th = GovernanceThresholds::default();
        let a = apply_rule(&bundle(0.0, 0.6, 0.9), deg(0.0), &th, 0);
        assert_eq!(a.to_string(), "monitor_or_escalate, record_hesitation_require_review");
        let a = apply_rule(&bundle(1.0, 1.0, 0.0), deg(0.0), &th, 0);
        assert_eq!(a.iter().collect::<Vec<_>>(), vec![Action::Endorse]);
        let a = apply_rule(&bundle(0.0, 1.0, 1.0), deg(1.0), &th, 0);
        assert!(a.contains(Action::OpenMetaAuditItem));
        let zero_delta = GovernanceThresholds { delta: deg(0.0), ..th };
        assert!(!apply_rule(&bundle(0.0, 0.0, 0.0), deg(0.0), &zero_delta, 0).contains(Action::OpenMetaAuditItem));
    }

    fn key() -> DiagnosticKey {
        Diagnostic::new(DiagnosticKind::Moore, "p", &["K"]).at("w0")
    }

    #[test]
    fn register_is_idempotent_and_monotone() {
        let mut reg = AuditRegister::new();
        let rec = |d| DiagnosticRecord { key: key(), degree: deg(d) };
        assert_eq!(reg.record(&rec(1.0)), RecordOutcome::New);
        assert_eq!(reg.record(&rec(1.0)), RecordOutcome::Unchanged);
        assert_eq!(reg.len(), 1);
        assert_eq!(reg.degree(&key()), 1.0);

        let mut reg = AuditRegister::new();
        reg.record(&rec(0.4));
        assert_eq!(reg.record(&rec(0.7)), RecordOutcome::Raised);
        assert_eq!(reg.record(&rec(0.5)), RecordOutcome::Unchanged);
        assert_eq!(reg.degree(&key()), 0.7);
        assert_eq!(reg.record(&DiagnosticRecord {
            key: Diagnostic::new(DiagnosticKind::Anti, "p", &["K"]).at("w0"),
            degree: deg(0.0),
        }), RecordOutcome::Ignored);
    }

    #[test]
    fn closed_items_persist_with_history() {
        let mut reg = AuditRegister::new();
        reg.record(&DiagnosticRecord { key: key(), degree: deg(1.0) });
        reg.set_status(&key(), AuditStatus::Escalated, None).unwrap();
        assert!(reg.set_status(&key(), AuditStatus::ClosedWithJustification, None).is_err());
        reg.set_status(&key(), AuditStatus::ClosedWithJustification, Some("hedged".into()))
            .unwrap();
        let item = reg.get(&key()).unwrap();
        assert_eq!(item.status, AuditStatus::ClosedWithJustification);
        assert_eq!(item.history.len(), 3);
        assert!(reg.set_status(&key(), AuditStatus::Reviewed, None).is_err());
        assert_eq!(reg.degree(&key()), 1.0);
    }

    #[test]
    fn ndjson_replay_is_exact() {
        let mut reg = AuditRegister::new();
        reg.record(&DiagnosticRecord { key: key(), degree: deg(0.1 + 0.2) });
        reg.record(&DiagnosticRecord { key: key(), degree: deg(2.0 / 3.0) });
        reg.set_status(&key(), AuditStatus::Reviewed, None).unwrap();
        let text = reg.to_ndjson();
        let back = AuditRegister::from_ndjson(text.as_bytes()).unwrap();
        assert_eq!(back, reg);
        assert_eq!(back.to_ndjson(), text);
    }

    #[test]
    fn formula_patterns_are_recognised() {
        let d = Diagnostic::for_formula(&Formula::moore("p", "K"));
        assert_eq!(d, Diagnostic::new(DiagnosticKind::Moore, "p", &["K"]));
        assert_eq!(d.formula().unwrap(), Formula::moore("p", "K"));
        let conf = crate::formula::parse("[E]p & [K]!p").unwrap();
        assert_eq!(Diagnostic::for_formula(&conf).kind, DiagnosticKind::Conf);
        let other = crate::formula::parse("p | q").unwrap();
        assert_eq!(Diagnostic::for_formula(&other).kind, DiagnosticKind::Custom("p | q".into()));
    }

    #[test]
    fn audit_formula_reads_register() {
        let mut f = Frame::with_world_count(2).unwrap();
        f.add_relation("K", Relation::universal(2)).unwrap();
        f.add_proposition("p", Proposition::new(vec![1.0, 0.0]).unwrap()).unwrap();
        let mut reg = AuditRegister::new();
        reg.record(&DiagnosticRecord { key: key(), degree: deg(1.0) });
        let phi = crate::formula::parse("A(p & ![K]p)").unwrap();
        let v = crate::formula::evaluate_with(&phi, &f, G, Some(&reg)).unwrap();
        assert_eq!(v.values(), &[1.0, 0.0]);
    }

    #[test]
    fn reach_on_crisp_breach() {
        let mut f = Frame::with_world_count(2).unwrap();
        f.add_relation("K", Relation::universal(2)).unwrap();
        let p = Proposition::new(vec![1.0, 0.0]).unwrap();
        let mut reg = AuditRegister::new();
        let r = typed_reach_check(&f, "K", "A", &[("p".into(), p)], &mut reg, G).unwrap();
        let e = &r.entries[0];
        assert!(!e.reach0_holds);
        assert_eq!(e.reach0_failing_worlds, vec!["w0".to_string()]);
        assert!(e.reach1_holds);
        assert!(r.audit_relation_defaulted);
        assert!(!r.has_box_over_moore());
        let empty = typed_reach_check(&f, "K", "A", &[], &mut reg, G).unwrap();
        assert!(empty.entries.is_empty() && empty.obligations.is_empty());
    }

    #[test]
    fn box_over_moore_is_detected() {
        let bad = Formula::nec("K", Formula::moore("p", "K"));
        assert!(box_over_moore(&bad));
        assert!(!box_over_moore(&Formula::dia("A", Formula::audit(Formula::moore("p", "K")))));
    }

    fn snap(b: f64, bn: f64, d: f64, h: f64, i: f64) -> StatusSnapshot {
        StatusSnapshot {
            belief: b,
            belief_neg: bn,
            diamond: d,
            hesitation: h,
            inconsistency: i,
        }
    }

    #[test]
    fn revision_rules() {
        let th = GovernanceThresholds::default();
        let rev = || EpochNote::Revision { evidence: "e1".into() };

        let s = snap(0.9, 0.6, 1.0, 0.0, 0.6);
        let mut tl = CommitmentTimeline::new("p", &s);
        revise_commitments(&mut tl, 1, &s, &th, rev()).unwrap();
        let e = tl.last();
        assert!(e.withdrawn && !e.precautionary);
        assert_eq!((e.belief, e.belief_neg), (0.0, 0.0));

        let s = snap(0.1, 0.0, 0.9, 0.0, 0.0);
        let mut tl = CommitmentTimeline::new("p", &s);
        revise_commitments(&mut tl, 1, &s, &th, rev()).unwrap();
        assert_eq!(tl.last().belief, 0.9);
        assert!(tl.last().precautionary);

        assert!(matches!(
            revise_commitments(&mut tl, 1, &s, &th, rev()),
            Err(Error::NonMonotoneEpoch { .. })
        ));
    }

    #[test]
    fn quiet_revision_is_stable() {
        let th = GovernanceThresholds::default();
        let s = snap(0.9, 0.0, 0.9, 0.1, 0.0);
        let mut tl = CommitmentTimeline::new("p", &s);
        revise_commitments(&mut tl, 3, &s, &th, EpochNote::Revision { evidence: "e".into() }).unwrap();
        let (a, b) = (&tl.epochs()[0], &tl.epochs()[1]);
        assert_eq!((a.belief, a.belief_neg), (b.belief, b.belief_neg));
        assert!(!b.review && !b.withdrawn && !b.precautionary);
    }

    #[test]
    fn environment_update_recomputes() {
        let th = GovernanceThresholds::default();
        let base = frame_from_json(
            r#"{"worlds": ["w0", "w1", "w2"],
                "relations": {"B": [[0, 1, 0], [0, 1, 0], [0, 0, 1]]},
                "propositions": {"p": [0, 1, 0]}}"#,
        )
        .unwrap();
        let stressed = frame_from_json(
            r#"{"worlds": ["w0", "w1", "w2"],
                "relations": {"B": [[0, 0, 1], [0, 1, 0], [0, 0, 1]]},
                "propositions": {"p": [0, 1, 0]}}"#,
        )
        .unwrap();
        let p = base.proposition("p").unwrap();
        let s0 = StatusSnapshot::at(&base, "B", p, G, 0).unwrap();
        assert_eq!(s0.belief, 1.0);
        let mut tl = CommitmentTimeline::new("p", &s0);
        let s1 = StatusSnapshot::at(&stressed, "B", p, G, 0).unwrap();
        revise_commitments(&mut tl, 1, &s1, &th, EpochNote::Update { environment: "stress set".into() }).unwrap();
        let e = tl.last();
        assert_eq!(e.relation_version, 1);
        assert_eq!((e.belief, e.belief_neg), (0.0, 1.0));
        assert!(matches!(e.note, EpochNote::Update { .. }));
    }

    fn units_frame() -> Frame {
        frame_from_json(
            r#"{"worlds": ["w0", "w1", "w2"],
                "relations": {
                    "B1": [[0, 1, 0], [0, 1, 0], [0, 0, 1]],
                    "B2": [[0, 0, 1], [0, 1, 0], [0, 0, 1]],
                    "K2": [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
                },
                "propositions": {"p": [0, 1, 0]}}"#,
        )
        .unwrap()
    }

    #[test]
    fn cross_unit_diagnostics() {
        let f = units_frame();
        let units = Units {
            beliefs: vec!["B1".into(), "B2".into()],
            assurances: vec!["K2".into()],
        };
        let r = cross_diagnostics(&f, &units, "p", G, deg(0.5)).unwrap();
        let find = |k: DiagnosticKind, i: &str, j: &str| {
            r.diagnostics
                .iter()
                .find(|d| d.kind == k && d.i == i && d.j == j)
                .unwrap()
                .degrees
                .values()[0]
        };
        assert_eq!(find(DiagnosticKind::Disagreement, "B1", "B2"), 1.0);
        assert_eq!(find(DiagnosticKind::Disagreement, "B2", "B1"), 0.0);
        assert_eq!(find(DiagnosticKind::MistakenReliance, "B1", "K2"), 1.0);
        assert!(r.diagnostics.iter().all(|d| d.i != d.j));
        assert!(r.records.iter().any(|rec| rec.key.world == "w0"));
        let p = f.proposition("p").unwrap();
        let same = cross_term(&f, &DiagnosticKind::Disagreement, "B1", "B1", p, G).unwrap();
        assert!(same.is_zero());
        let one = Units { beliefs: vec!["B1".into()], assurances: vec![] };
        assert!(matches!(cross_diagnostics(&f, &one, "p", G, deg(0.5)), Err(Error::TooFewStandards(1))));
    }
}
