//! Threshold rule, audit register with replay, typed reachability, a
//! commitment timeline and cross-unit diagnostics.

use epirisk::applications::liquidity_frame;
use epirisk::frame::{Frame, Relation};
use epirisk::governance::{
    apply_rule, cross_diagnostics, revise_commitments, typed_reach_check, AuditRegister, AuditStatus,
    CommitmentTimeline, EpochNote, GovernanceThresholds, StatusSnapshot, Units,
};
use epirisk::modal::{refine, statuses, RefinementKind};
use epirisk::{AlgebraPackage, Proposition};

const G: AlgebraPackage = AlgebraPackage::GODEL;

fn main() -> epirisk::Result<()> {
    let th = GovernanceThresholds::default();

    let liq = liquidity_frame();
    let r = liq.proposition("r")?;
    let bundle = statuses(&liq, "K", r, G)?;
    let moore = refine(&liq, r, &RefinementKind::moore("K"), G)?;
    println!("liquidity w0: {}", apply_rule(&bundle, moore.get(0), &th, 0));

    // Two-world breach: p holds only at w0, universal K.
    let mut f = Frame::with_world_count(2)?;
    f.add_relation("K", Relation::universal(2))?;
    let p = Proposition::new(vec![1.0, 0.0])?;
    let mut reg = AuditRegister::new();
    let report = typed_reach_check(&f, "K", "A", &[("p".into(), p)], &mut reg, G)?;
    println!("reach: {}", serde_json::to_string(&report.entries)?);
    println!("box over moore obligation: {}", report.has_box_over_moore());

    let key = reg.items().next().expect("moore item recorded").key.clone();
    reg.set_status(&key, AuditStatus::Reviewed, None)?;
    reg.set_status(&key, AuditStatus::ClosedWithJustification, Some("tolerance widened".into()))?;
    let log = reg.to_ndjson();
    print!("{log}");
    let replayed = AuditRegister::from_ndjson(log.as_bytes())?;
    println!("replay identical: {}", replayed == reg);

    // Precautionary adoption followed by an environment update.
    let mut b = Frame::with_world_count(3)?;
    b.add_relation("B", Relation::from_neighbourhoods(3, &[vec![1, 2], vec![1], vec![2]])?)?;
    let q = Proposition::new(vec![0.0, 0.9, 0.1])?;
    let mut tl = CommitmentTimeline::new("q", &StatusSnapshot::at(&b, "B", &q, G, 0)?);
    let s0 = StatusSnapshot::at(&b, "B", &q, G, 0)?;
    revise_commitments(&mut tl, 1, &s0, &th, EpochNote::Revision { evidence: "stress test".into() })?;
    let mut b2 = Frame::with_world_count(3)?;
    b2.add_relation("B", Relation::from_neighbourhoods(3, &[vec![1], vec![1], vec![2]])?)?;
    let s1 = StatusSnapshot::at(&b2, "B", &q, G, 0)?;
    revise_commitments(&mut tl, 2, &s1, &th, EpochNote::Update { environment: "w2 ruled out".into() })?;
    for e in tl.epochs() {
        println!("t={} B={:.2} B¬={:.2} v{} {:?}", e.t, e.belief, e.belief_neg, e.relation_version, e.note);
    }

    // Two units disagree about p.
    let mut u = Frame::with_world_count(3)?;
    u.add_relation("B1", Relation::from_neighbourhoods(3, &[vec![0, 1], vec![0, 1], vec![0, 1]])?)?;
    u.add_relation("B2", Relation::universal(3))?;
    u.add_proposition("p", Proposition::new(vec![1.0, 1.0, 0.0])?)?;
    let units = Units { beliefs: vec!["B1".into(), "B2".into()], assurances: vec![] };
    let cross = cross_diagnostics(&u, &units, "p", G, th.delta)?;
    for d in &cross.diagnostics {
        println!("{:?} ({}, {}): {:?}", d.kind, d.i, d.j, d.degrees.values());
    }
    Ok(())
}
