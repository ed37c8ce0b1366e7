//! Executable checks of the package laws, the reach principles and the
//! pressure bounds, on given frames and on seeded random frames.
//!
//! Bounds are only asserted on frames that satisfy their hypotheses. A frame
//! that fails a gate is counted as skipped, never as a failure.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraPackage, Proposition};
use crate::error::Result;
use crate::frame::{classify_frame, crisp_neighbourhood, Frame, Relation};
use crate::modal::{self, RefinementKind};

/// Tolerance on fuzzy inequalities.
pub const TOLERANCE: f64 = 1e-9;

/// Degree lattice used by the random generators.
pub const LATTICE: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];

pub const DEFAULT_FRAMES_PER_GATE: usize = 1000;

/// Standard name used for generated frames.
pub const GENERATED_STANDARD: &str = "M";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Principle {
    Rmp,
    Rrp,
    Factivity,
    Introspection,
    Monotonicity,
    Meet,
    Bottom,
    Separation,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub proposition: String,
    pub world: String,
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrincipleReport {
    pub principle: Principle,
    /// Whether the frame's structure guarantees the principle.
    pub expected: bool,
    pub holds: bool,
    pub witness: Option<Witness>,
}

impl PrincipleReport {
    /// A failure where the structure promised success.
    pub fn is_violation(&self) -> bool {
        self.expected && !self.holds
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundId {
    ThmFactivePressure,
    CorMoore,
    CorCollapse,
    CorConflict,
    ThmBeliefInternal,
    ThmBeliefReach,
    CorBeliefCollapse,
    AggFactivity,
    AggNonExclusion,
    AggConjunctionClosure,
}

impl BoundId {
    pub fn name(self) -> &'static str {
        match self {
            BoundId::ThmFactivePressure => "thm_factive_pressure",
            BoundId::CorMoore => "cor_moore",
            BoundId::CorCollapse => "cor_collapse",
            BoundId::CorConflict => "cor_conflict",
            BoundId::ThmBeliefInternal => "thm_belief_internal",
            BoundId::ThmBeliefReach => "thm_belief_reach",
            BoundId::CorBeliefCollapse => "cor_belief_collapse",
            BoundId::AggFactivity => "agg_factivity",
            BoundId::AggNonExclusion => "agg_non_exclusion",
            BoundId::AggConjunctionClosure => "agg_conjunction_closure",
        }
    }
}

/// One pointwise inequality `lhs ≤ rhs` (or equality for the collapse
/// bounds) on one risk proposition.
///
/// For the aggregated counterexamples `satisfied` means the documented
/// failure was reproduced and `value` carries the witnessing number.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub bound_id: BoundId,
    pub proposition: String,
    pub lhs: Proposition,
    pub rhs: Proposition,
    pub satisfied: bool,
    pub max_violation: f64,
    /// Set when the hypotheses did not hold; the bound was not asserted.
    pub skipped: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
}

impl BoundReport {
    fn checked(bound_id: BoundId, name: &str, lhs: Proposition, rhs: Proposition, violation: f64, tol: f64) -> Self {
        BoundReport {
            bound_id,
            proposition: name.to_string(),
            lhs,
            rhs,
            satisfied: violation <= tol,
            max_violation: violation,
            skipped: None,
            value: None,
        }
    }

    fn skipped(bound_id: BoundId, name: &str, n: usize, reason: &str) -> Self {
        BoundReport {
            bound_id,
            proposition: name.to_string(),
            lhs: Proposition::zero(n),
            rhs: Proposition::zero(n),
            satisfied: true,
            max_violation: 0.0,
            skipped: Some(reason.to_string()),
            value: None,
        }
    }

    pub fn is_skipped(&self) -> bool {
        self.skipped.is_some()
    }
}

/// First strictly largest `lhs - rhs` above tolerance over named pairs.
fn largest_gap<'a>(f: &Frame, rows: impl IntoIterator<Item = (&'a str, &'a Proposition, &'a Proposition)>) -> Option<Witness> {
    let mut best: Option<Witness> = None;
    for (name, lhs, rhs) in rows {
        for w in 0..f.len() {
            let gap = lhs.values()[w] - rhs.values()[w];
            if gap > TOLERANCE && best.as_ref().is_none_or(|b| gap > b.gap) {
                best = Some(Witness {
                    proposition: name.to_string(),
                    world: f.world_name(w).to_string(),
                    gap,
                });
            }
        }
    }
    best
}

fn report(principle: Principle, expected: bool, witness: Option<Witness>) -> PrincipleReport {
    PrincipleReport {
        principle,
        expected,
        holds: witness.is_none(),
        witness,
    }
}

/// Propositions a law check quantifies over: the frame's registered ones
/// first, then a fixed seeded sample from the lattice.
fn law_test_set(f: &Frame, samples: usize) -> Vec<(String, Proposition)> {
    let mut out: Vec<(String, Proposition)> = f
        .propositions()
        .iter()
        .map(|(k, p)| (k.clone(), p.clone()))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for i in 0..samples {
        out.push((format!("sample{i}"), random_proposition(&mut rng, f.len())));
    }
    out
}

/// Package laws on a concrete frame. Failures are data: check
/// [`PrincipleReport::is_violation`] to see whether a structural guarantee
/// was broken.
pub fn check_package_laws(f: &Frame, std: &str, pkg: AlgebraPackage) -> Result<Vec<PrincipleReport>> {
    let profile = classify_frame(f, std, pkg)?;
    let props = law_test_set(f, 64);
    let n = f.len();

    // Rows of (name, lhs, rhs) for each inequality family.
    let mut fact = Vec::new();
    let mut intro = Vec::new();
    let mut mono = Vec::new();
    let mut meet = Vec::new();
    let mut sep = Vec::new();
    for (i, (name, p)) in props.iter().enumerate() {
        let (_, q) = &props[(i + 1) % props.len()];
        let mp = modal::box_op(f, std, p, pkg)?;
        let mmp = modal::box_op(f, std, &mp, pkg)?;
        fact.push((name, mp.clone(), p.clone()));
        intro.push((name, mp.clone(), mmp));
        // p ≤ p ∨ q, so neither operator may decrease.
        let big = p.join(q)?;
        mono.push((name, mp, modal::box_op(f, std, &big, pkg)?));
        mono.push((name, modal::diamond(f, std, p, pkg)?, modal::diamond(f, std, &big, pkg)?));
        let pq = p.meet(q)?;
        meet.push((name, pq.clone(), p.clone()));
        meet.push((name, pq, q.clone()));
        if p.meet(&q.negate())?.is_zero() {
            sep.push((name, p.clone(), q.clone()));
        }
    }
    let gap = |rows: &[(&String, Proposition, Proposition)]| {
        largest_gap(f, rows.iter().map(|(k, a, b)| (k.as_str(), a, b)))
    };
    let bottom = modal::diamond(f, std, &Proposition::zero(n), pkg)?;
    let zero = Proposition::zero(n);

    Ok(vec![
        report(Principle::Factivity, profile.reflexive, gap(&fact)),
        report(Principle::Introspection, profile.fuzzy_transitive, gap(&intro)),
        report(Principle::Monotonicity, true, gap(&mono)),
        report(Principle::Meet, true, gap(&meet)),
        report(Principle::Bottom, true, largest_gap(f, [("0", &bottom, &zero)])),
        report(Principle::Separation, true, gap(&sep)),
    ])
}

/// One-step refinement closure `{p, p∧¬Mp, p∧M¬p}` of a base risk set.
pub fn rmp_closure(
    f: &Frame,
    std: &str,
    risk: &[(String, Proposition)],
    pkg: AlgebraPackage,
) -> Result<Vec<(String, Proposition)>> {
    let mut out = Vec::with_capacity(risk.len() * 3);
    for (name, p) in risk {
        out.push((name.clone(), p.clone()));
        out.push((
            format!("moore({name})"),
            modal::refine(f, p, &RefinementKind::moore(std), pkg)?,
        ));
        out.push((
            format!("anti({name})"),
            modal::refine(f, p, &RefinementKind::anti(std), pkg)?,
        ));
    }
    Ok(out)
}

/// RMP on a registered set: the refinements of each base risk are present.
pub fn check_rmp(
    f: &Frame,
    std: &str,
    base: &[(String, Proposition)],
    registered: &[(String, Proposition)],
    pkg: AlgebraPackage,
) -> Result<PrincipleReport> {
    let mut witness = None;
    'outer: for (name, p) in base {
        for kind in [RefinementKind::moore(std), RefinementKind::anti(std)] {
            let r = modal::refine(f, p, &kind, pkg)?;
            let present = registered
                .iter()
                .any(|(_, q)| q.max_abs_diff(&r).is_ok_and(|d| d <= TOLERANCE));
            if !present {
                let w = r.values().iter().position(|&x| x > 0.0).unwrap_or(0);
                witness = Some(Witness {
                    proposition: format!("{}({name})", kind.name()),
                    world: f.world_name(w).to_string(),
                    gap: r.values()[w],
                });
                break 'outer;
            }
        }
    }
    Ok(report(Principle::Rmp, true, witness))
}

/// RRP: `p ≤ ◇_M Mp` for every proposition in the set.
pub fn check_rrp(f: &Frame, std: &str, risk: &[(String, Proposition)], pkg: AlgebraPackage) -> Result<PrincipleReport> {
    let mut rows = Vec::with_capacity(risk.len());
    for (name, p) in risk {
        let reach = modal::diamond(f, std, &modal::box_op(f, std, p, pkg)?, pkg)?;
        rows.push((name.as_str(), p, reach));
    }
    Ok(report(
        Principle::Rrp,
        true,
        largest_gap(f, rows.iter().map(|(k, p, r)| (*k, *p, r))),
    ))
}

/// Registered family for the global `U` and `I_M`: the closed risk set and
/// its `M`-images.
fn registered_family(
    f: &Frame,
    std: &str,
    closed: &[(String, Proposition)],
    pkg: AlgebraPackage,
) -> Result<Vec<Proposition>> {
    let mut fam: Vec<Proposition> = closed.iter().map(|(_, p)| p.clone()).collect();
    for (_, p) in closed {
        fam.push(modal::box_op(f, std, p, pkg)?);
    }
    Ok(fam)
}

fn pointwise_sup(n: usize, props: impl IntoIterator<Item = Proposition>) -> Result<Proposition> {
    props
        .into_iter()
        .try_fold(Proposition::zero(n), |acc, p| acc.join(&p))
}

fn is_crisp_setting(f: &Frame, std: &str, props: &[(String, Proposition)]) -> Result<bool> {
    Ok(f.relation(std)?.is_crisp() && props.iter().all(|(_, p)| p.is_crisp()))
}

/// Factive bounds on each base risk. Gate: reflexive relation and RRP on
/// the one-step refinement closure.
pub fn check_factive_bounds(
    f: &Frame,
    std: &str,
    risk: &[(String, Proposition)],
    pkg: AlgebraPackage,
) -> Result<Vec<BoundReport>> {
    let n = f.len();
    let ids = [
        BoundId::ThmFactivePressure,
        BoundId::CorMoore,
        BoundId::CorConflict,
        BoundId::CorCollapse,
    ];
    let profile = classify_frame(f, std, pkg)?;
    let closed = rmp_closure(f, std, risk, pkg)?;
    let gate = if !profile.reflexive {
        Some("relation is not reflexive")
    } else if !check_rrp(f, std, &closed, pkg)?.holds {
        Some("RRP fails on the refinement closure")
    } else {
        None
    };
    if let Some(reason) = gate {
        return Ok(risk
            .iter()
            .flat_map(|(name, _)| ids.iter().map(move |&id| BoundReport::skipped(id, name, n, reason)))
            .collect());
    }

    let fam = registered_family(f, std, &closed, pkg)?;
    let u = pointwise_sup(n, fam.iter().map(Proposition::structural_uncertainty))?;
    let u_zero = u.is_zero();
    let exact = is_crisp_setting(f, std, &closed)?;
    let tol = if exact { 0.0 } else { TOLERANCE };
    let dia_u = modal::diamond(f, std, &u, pkg)?;

    let mut out = Vec::new();
    for (name, p) in risk {
        let mp = modal::box_op(f, std, p, pkg)?;
        let moore = p.meet(&mp.negate())?;
        let anti = p.meet(&modal::box_op(f, std, &p.negate(), pkg)?)?;

        let pressure = modal::diamond(f, std, &mp.meet(&moore)?, pkg)?;
        let v = moore.excess_over(&pressure)?;
        out.push(BoundReport::checked(BoundId::ThmFactivePressure, name, moore.clone(), pressure, v, tol));

        let mid = modal::diamond(f, std, &mp.meet(&mp.negate())?, pkg)?;
        let v = moore.excess_over(&mid)?.max(mid.excess_over(&dia_u)?);
        out.push(BoundReport::checked(BoundId::CorMoore, name, moore, dia_u.clone(), v, tol));

        let dia_i = modal::diamond(f, std, &modal::inconsistency(f, std, p, pkg)?, pkg)?;
        let v = anti.excess_over(&dia_i)?;
        out.push(BoundReport::checked(BoundId::CorConflict, name, anti, dia_i, v, tol));

        if u_zero {
            let v = p.max_abs_diff(&mp)?;
            out.push(BoundReport::checked(BoundId::CorCollapse, name, p.clone(), mp, v, tol));
        } else {
            out.push(BoundReport::skipped(BoundId::CorCollapse, name, n, "global U is not zero"));
        }
    }
    Ok(out)
}

/// Belief bounds on each base risk. Gate: fuzzy transitivity under `pkg`;
/// the reach and collapse bounds additionally need RRP on the closure, and
/// the collapse needs global `I_M = 0`.
pub fn check_belief_bounds(
    f: &Frame,
    std: &str,
    risk: &[(String, Proposition)],
    pkg: AlgebraPackage,
) -> Result<Vec<BoundReport>> {
    let n = f.len();
    let profile = classify_frame(f, std, pkg)?;
    if !profile.fuzzy_transitive {
        let reason = "relation is not fuzzy-transitive";
        return Ok(risk
            .iter()
            .flat_map(|(name, _)| {
                [BoundId::ThmBeliefInternal, BoundId::ThmBeliefReach, BoundId::CorBeliefCollapse]
                    .into_iter()
                    .map(move |id| BoundReport::skipped(id, name, n, reason))
            })
            .collect());
    }
    let closed = rmp_closure(f, std, risk, pkg)?;
    let rrp = check_rrp(f, std, &closed, pkg)?.holds;
    let fam = registered_family(f, std, &closed, pkg)?;
    let mut incs = Vec::with_capacity(fam.len());
    for q in &fam {
        incs.push(modal::inconsistency(f, std, q, pkg)?);
    }
    let i_zero = pointwise_sup(n, incs)?.is_zero();
    let exact = is_crisp_setting(f, std, &closed)?;
    let tol = if exact { 0.0 } else { TOLERANCE };

    let mut out = Vec::new();
    for (name, p) in risk {
        let mp = modal::box_op(f, std, p, pkg)?;
        let moore = p.meet(&mp.negate())?;
        let i_mp = modal::inconsistency(f, std, &mp, pkg)?;

        let lhs = modal::box_op(f, std, &moore, pkg)?;
        let v = lhs.excess_over(&i_mp)?;
        out.push(BoundReport::checked(BoundId::ThmBeliefInternal, name, lhs, i_mp.clone(), v, tol));

        if rrp {
            let rhs = modal::diamond(f, std, &i_mp, pkg)?;
            let v = moore.excess_over(&rhs)?;
            out.push(BoundReport::checked(BoundId::ThmBeliefReach, name, moore, rhs, v, tol));
        } else {
            out.push(BoundReport::skipped(BoundId::ThmBeliefReach, name, n, "RRP fails on the refinement closure"));
        }

        if rrp && i_zero {
            let v = p.excess_over(&mp)?;
            out.push(BoundReport::checked(BoundId::CorBeliefCollapse, name, p.clone(), mp, v, tol));
        } else {
            let reason = if rrp { "global I_M is not zero" } else { "RRP fails on the refinement closure" };
            out.push(BoundReport::skipped(BoundId::CorBeliefCollapse, name, n, reason));
        }
    }
    Ok(out)
}

/// Fixed frames on which the aggregated operators lose the structure of
/// their modal counterparts. Each report is satisfied when the failure is
/// reproduced.
pub fn aggregated_counterexamples() -> Result<Vec<BoundReport>> {
    use crate::frame::LocalMeasure;
    use crate::modal::GlobalMeasure;
    let g = AlgebraPackage::GODEL;

    // (a) two worlds, full evidence, uniform measure, p false here.
    let mut fa = Frame::with_world_count(2)?.with_uniform_local_measures(true);
    fa.add_relation("M", Relation::universal(2))?;
    let p = Proposition::new(vec![0.0, 1.0])?;
    let agg = modal::box_agg(&fa, "M", &p, g)?;
    let value = agg.values()[0];
    let mut a = BoundReport::checked(BoundId::AggFactivity, "p", agg, p, 0.0, 0.0);
    a.satisfied = value == 0.5;
    a.max_violation = value;
    a.value = Some(value);

    // (b) the only p-world carries no local mass.
    let mut fb = Frame::with_world_count(3)?;
    fb.add_relation("M", Relation::universal(3))?;
    for w in 0..3 {
        let name = format!("w{w}");
        fb.set_measure(w, LocalMeasure::new(&name, 3, &[0.5, 0.5, 0.0])?);
    }
    let q = Proposition::new(vec![0.0, 0.0, 1.0])?;
    let dia = modal::diamond(&fb, "M", &q, g)?;
    let dia_agg = modal::diamond_agg(&fb, "M", &q, g)?;
    let gap = dia.values()[0] - dia_agg.values()[0];
    let mut b = BoundReport::checked(BoundId::AggNonExclusion, "v_star", dia_agg.clone(), dia, 0.0, 0.0);
    b.satisfied = dia_agg.values()[0] == 0.0 && b.rhs.values()[0] > 0.0;
    b.max_violation = gap;
    b.value = Some(dia_agg.values()[0]);

    // (c) lottery: three events of probability 2/3 whose pairwise
    // conjunctions fall below the acceptance threshold.
    let mu = GlobalMeasure::uniform(3);
    let threshold = 2.0 / 3.0;
    let events: Vec<Proposition> = (0..3).map(|i| Proposition::indicator(3, |w| w != i)).collect();
    let accepted = events
        .iter()
        .all(|e| modal::fuzzy_event_probability(e, &mu).is_ok_and(|pr| pr.value() >= threshold - 1e-12));
    let mut worst: f64 = 1.0;
    for i in 0..3 {
        for j in (i + 1)..3 {
            let both = events[i].meet(&events[j])?;
            worst = worst.min(modal::fuzzy_event_probability(&both, &mu)?.value());
        }
    }
    let all_three = events[0].meet(&events[1])?.meet(&events[2])?;
    let mut c = BoundReport::checked(
        BoundId::AggConjunctionClosure,
        "lottery",
        events[0].meet(&events[1])?,
        Proposition::constant(3, crate::algebra::Degree::new(threshold)?),
        0.0,
        0.0,
    );
    c.satisfied = accepted && worst < threshold && all_three.is_zero();
    c.max_violation = threshold - worst;
    c.value = Some(worst);

    Ok(vec![a, b, c])
}

// ---------------------------------------------------------------------------
// Random generation

/// Structural families the generator can draw from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FrameShape {
    Any,
    Reflexive,
    /// Fuzzy-transitive under the given package (max-⊗ closure).
    FuzzyTransitive,
    /// Reflexive and fuzzy-transitive.
    Preorder,
    Crisp,
    CrispEquivalence,
    /// Serial, transitive and Euclidean crisp relation.
    Kd45,
}

pub fn random_degree(rng: &mut impl Rng) -> f64 {
    LATTICE[rng.random_range(0..LATTICE.len())]
}

pub fn random_proposition(rng: &mut impl Rng, n: usize) -> Proposition {
    Proposition::new((0..n).map(|_| random_degree(rng)).collect()).expect("lattice degrees")
}

pub fn random_crisp_proposition(rng: &mut impl Rng, n: usize) -> Proposition {
    Proposition::indicator(n, |_| rng.random_bool(0.5))
}

fn random_matrix(rng: &mut impl Rng, n: usize, crisp: bool) -> Vec<Vec<f64>> {
    let density = rng.random_range(0.2..0.9);
    (0..n)
        .map(|_| {
            (0..n)
                .map(|_| {
                    if !rng.random_bool(density) {
                        0.0
                    } else if crisp {
                        1.0
                    } else {
                        LATTICE[rng.random_range(1..LATTICE.len())]
                    }
                })
                .collect()
        })
        .collect()
}

/// Least fuzzy-transitive relation above `m` under `pkg`.
pub fn transitive_closure(mut m: Vec<Vec<f64>>, pkg: AlgebraPackage) -> Vec<Vec<f64>> {
    let n = m.len();
    loop {
        let mut changed = false;
        for w in 0..n {
            for u in 0..n {
                if m[w][u] == 0.0 {
                    continue;
                }
                for v in 0..n {
                    let t = pkg.tnorm_raw(m[w][u], m[u][v]);
                    if t > m[w][v] {
                        m[w][v] = t;
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            return m;
        }
    }
}

fn crisp_equivalence(rng: &mut impl Rng, n: usize) -> Vec<Vec<f64>> {
    let classes: Vec<usize> = (0..n).map(|_| rng.random_range(0..n)).collect();
    (0..n)
        .map(|w| (0..n).map(|v| if classes[w] == classes[v] { 1.0 } else { 0.0 }).collect())
        .collect()
}

fn crisp_kd45(rng: &mut impl Rng, n: usize) -> Vec<Vec<f64>> {
    // Each cluster of worlds points at a nonempty target set inside it,
    // and the targets see exactly that set.
    let classes: Vec<usize> = (0..n).map(|_| rng.random_range(0..n)).collect();
    let mut targets = vec![Vec::new(); n];
    for (c, slot) in targets.iter_mut().enumerate() {
        let members: Vec<usize> = (0..n).filter(|&w| classes[w] == c).collect();
        if members.is_empty() {
            continue;
        }
        let mut t: Vec<usize> = members.iter().copied().filter(|_| rng.random_bool(0.5)).collect();
        if t.is_empty() {
            t.push(members[rng.random_range(0..members.len())]);
        }
        *slot = t;
    }
    (0..n)
        .map(|w| {
            let t = &targets[classes[w]];
            (0..n).map(|v| if t.contains(&v) { 1.0 } else { 0.0 }).collect()
        })
        .collect()
}

/// A random frame on 2 to 6 worlds with one relation named [`GENERATED_STANDARD`].
pub fn random_frame(rng: &mut impl Rng, shape: FrameShape, pkg: AlgebraPackage) -> Frame {
    let n = rng.random_range(2..=6);
    let mut m = match shape {
        FrameShape::Crisp => random_matrix(rng, n, true),
        FrameShape::CrispEquivalence => crisp_equivalence(rng, n),
        FrameShape::Kd45 => crisp_kd45(rng, n),
        _ => random_matrix(rng, n, false),
    };
    if matches!(shape, FrameShape::Reflexive | FrameShape::Preorder) {
        for (w, row) in m.iter_mut().enumerate() {
            row[w] = 1.0;
        }
    }
    if matches!(shape, FrameShape::FuzzyTransitive | FrameShape::Preorder) {
        m = transitive_closure(m, pkg);
    }
    let mut f = Frame::with_world_count(n).expect("n ≥ 2");
    let rel = Relation::from_dense(GENERATED_STANDARD, &m).expect("generated degrees are valid");
    f.add_relation(GENERATED_STANDARD, rel).expect("sizes match");
    f
}

/// Base risk propositions for a generated frame. Some are drawn directly,
/// some are images `Mq` (which tend to satisfy the reach principle), some
/// are constants.
pub fn random_risk_set(
    rng: &mut impl Rng,
    f: &Frame,
    pkg: AlgebraPackage,
    crisp: bool,
) -> Vec<(String, Proposition)> {
    let n = f.len();
    let k = rng.random_range(1..=3);
    (0..k)
        .map(|i| {
            let base = if crisp {
                random_crisp_proposition(rng, n)
            } else {
                random_proposition(rng, n)
            };
            let p = match rng.random_range(0..4) {
                0 | 1 => base,
                2 => modal::box_op(f, GENERATED_STANDARD, &base, pkg).expect("generated frame"),
                _ => {
                    let c = if crisp { [0.0, 1.0][rng.random_range(0..2)] } else { random_degree(rng) };
                    Proposition::new(vec![c; n]).expect("lattice degree")
                }
            };
            (format!("r{i}"), p)
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Seeded suites

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Laws,
    Factive,
    Belief,
    Aggregated,
    All,
}

impl std::str::FromStr for Suite {
    type Err = crate::error::Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "laws" => Suite::Laws,
            "factive" => Suite::Factive,
            "belief" => Suite::Belief,
            "aggregated" => Suite::Aggregated,
            "all" => Suite::All,
            other => return Err(crate::error::Error::InvalidSpec(format!("unknown suite `{other}`"))),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuiteConfig {
    pub seed: u64,
    pub frames_per_gate: usize,
    /// Cap on generated frames per entry, to bound runtime when a gate is rare.
    pub max_attempts: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 42,
            frames_per_gate: DEFAULT_FRAMES_PER_GATE,
            max_attempts: 200_000,
        }
    }
}

/// One line of the machine-readable report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportEntry {
    pub bound_id: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub package: Option<String>,
    pub satisfied: bool,
    pub max_violation: f64,
    pub seed: u64,
    pub frames_checked: usize,
    pub frames_skipped: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub seed: u64,
    pub entries: Vec<ReportEntry>,
}

impl SuiteReport {
    pub fn all_satisfied(&self) -> bool {
        self.entries.iter().all(|e| e.satisfied)
    }

    pub fn entry(&self, bound_id: &str, package: Option<&str>) -> Option<&ReportEntry> {
        self.entries
            .iter()
            .find(|e| e.bound_id == bound_id && e.package.as_deref() == package)
    }
}

/// Outcome of one per-frame check: `None` when the gate fails.
type FrameCheck = Option<(f64, f64)>;

struct Driver {
    cfg: SuiteConfig,
    stream: u64,
}

impl Driver {
    fn run(
        &mut self,
        bound_id: &str,
        pkg: AlgebraPackage,
        shapes: &[FrameShape],
        mut check: impl FnMut(&Frame, &mut ChaCha8Rng) -> Result<Vec<FrameCheck>>,
    ) -> Result<ReportEntry> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.cfg.seed);
        rng.set_stream(self.stream);
        self.stream += 1;
        let (mut checked, mut skipped, mut attempts) = (0, 0, 0);
        let mut worst: f64 = 0.0;
        let mut ok = true;
        while checked < self.cfg.frames_per_gate && attempts < self.cfg.max_attempts {
            attempts += 1;
            let shape = shapes[rng.random_range(0..shapes.len())];
            let f = random_frame(&mut rng, shape, pkg);
            let results = check(&f, &mut rng)?;
            let applied: Vec<(f64, f64)> = results.into_iter().flatten().collect();
            if applied.is_empty() {
                skipped += 1;
                continue;
            }
            checked += 1;
            for (v, tol) in applied {
                worst = worst.max(v);
                ok &= v <= tol;
            }
        }
        Ok(ReportEntry {
            bound_id: bound_id.to_string(),
            package: Some(pkg.name().to_string()),
            satisfied: ok,
            max_violation: worst,
            seed: self.cfg.seed,
            frames_checked: checked,
            frames_skipped: skipped,
            value: None,
        })
    }
}

fn leq(a: &Proposition, b: &Proposition, tol: f64) -> Result<FrameCheck> {
    Ok(Some((a.excess_over(b)?, tol)))
}

fn bound_checks(reports: &[BoundReport], id: BoundId) -> Vec<FrameCheck> {
    reports
        .iter()
        .filter(|r| r.bound_id == id)
        .map(|r| {
            if r.is_skipped() {
                None
            } else {
                let exact = r.satisfied && r.max_violation == 0.0;
                Some((r.max_violation, if exact { 0.0 } else { TOLERANCE }))
            }
        })
        .collect()
}

const M: &str = GENERATED_STANDARD;

fn laws_entries(d: &mut Driver, pkg: AlgebraPackage, out: &mut Vec<ReportEntry>) -> Result<()> {
    use FrameShape::*;
    out.push(d.run("factivity", pkg, &[Reflexive, Preorder], |f, rng| {
        let p = random_proposition(rng, f.len());
        Ok(vec![leq(&modal::box_op(f, M, &p, pkg)?, &p, TOLERANCE)?])
    })?);
    out.push(d.run("introspection", pkg, &[FuzzyTransitive, Preorder], |f, rng| {
        let p = random_proposition(rng, f.len());
        let mp = modal::box_op(f, M, &p, pkg)?;
        Ok(vec![leq(&mp, &modal::box_op(f, M, &mp, pkg)?, TOLERANCE)?])
    })?);
    out.push(d.run("monotonicity", pkg, &[Any, Crisp], |f, rng| {
        let p = random_proposition(rng, f.len());
        let q = p.join(&random_proposition(rng, f.len()))?;
        Ok(vec![
            leq(&modal::box_op(f, M, &p, pkg)?, &modal::box_op(f, M, &q, pkg)?, TOLERANCE)?,
            leq(&modal::diamond(f, M, &p, pkg)?, &modal::diamond(f, M, &q, pkg)?, TOLERANCE)?,
        ])
    })?);
    out.push(d.run("crisp_reduction", pkg, &[Crisp, CrispEquivalence, Kd45], |f, rng| {
        let p = random_proposition(rng, f.len());
        let b = modal::box_op(f, M, &p, pkg)?;
        let dia = modal::diamond(f, M, &p, pkg)?;
        let mut v: f64 = 0.0;
        for w in 0..f.len() {
            let gamma = crisp_neighbourhood(f, M, w)?;
            let conj = gamma.iter().map(|&u| p.values()[u]).fold(1.0, f64::min);
            let disj = gamma.iter().map(|&u| p.values()[u]).fold(0.0, f64::max);
            v = v.max((b.values()[w] - conj).abs()).max((dia.values()[w] - disj).abs());
        }
        Ok(vec![Some((v, 0.0))])
    })?);
    out.push(d.run("crisp_duality", pkg, &[Crisp, CrispEquivalence, Kd45], |f, rng| {
        let p = random_crisp_proposition(rng, f.len());
        let dual = modal::dual(f, M, &p, pkg)?;
        let dia = modal::diamond(f, M, &p, pkg)?;
        Ok(vec![Some((dual.max_abs_diff(&dia)?, 0.0))])
    })?);
    out.push(d.run("bottom_preservation", pkg, &[Any, Crisp], |f, _| {
        let z = modal::diamond(f, M, &Proposition::zero(f.len()), pkg)?;
        Ok(vec![Some((z.values().iter().copied().fold(0.0, f64::max), 0.0))])
    })?);
    out.push(d.run("conjunction_separation", pkg, &[Any], |f, rng| {
        let n = f.len();
        let q = random_proposition(rng, n);
        // Half the draws are built to meet the hypothesis, half are raw.
        let p = if rng.random_bool(0.5) {
            random_proposition(rng, n)
        } else {
            Proposition::new(
                q.values()
                    .iter()
                    .map(|&x| if x == 1.0 { random_degree(rng) } else { 0.0 })
                    .collect(),
            )?
        };
        if !p.meet(&q.negate())?.is_zero() {
            return Ok(vec![None]);
        }
        Ok(vec![leq(&p, &q, 0.0)?])
    })?);
    out.push(d.run("meet", pkg, &[Any], |f, rng| {
        let n = f.len();
        let (p, q) = (random_proposition(rng, n), random_proposition(rng, n));
        let pq = p.meet(&q)?;
        let scale = random_degree(rng);
        let r = pq.map(|x| x * scale);
        Ok(vec![leq(&pq, &p, 0.0)?, leq(&pq, &q, 0.0)?, leq(&r, &pq, 0.0)?])
    })?);
    out.push(d.run("inconsistency_le_uncertainty", pkg, &[Reflexive, Preorder], |f, rng| {
        let p = random_proposition(rng, f.len());
        let i = modal::inconsistency(f, M, &p, pkg)?;
        Ok(vec![leq(&i, &p.structural_uncertainty(), TOLERANCE)?])
    })?);
    Ok(())
}

fn factive_entries(d: &mut Driver, pkg: AlgebraPackage, out: &mut Vec<ReportEntry>) -> Result<()> {
    use FrameShape::*;
    let shapes = [Reflexive, Preorder, CrispEquivalence];
    for id in [
        BoundId::ThmFactivePressure,
        BoundId::CorMoore,
        BoundId::CorConflict,
        BoundId::CorCollapse,
    ] {
        out.push(d.run(id.name(), pkg, &shapes, |f, rng| {
            let crisp = f.relation(M)?.is_crisp() && rng.random_bool(0.7);
            let risk = random_risk_set(rng, f, pkg, crisp);
            let reports = check_factive_bounds(f, M, &risk, pkg)?;
            Ok(bound_checks(&reports, id))
        })?);
    }
    Ok(())
}

fn belief_entries(d: &mut Driver, pkg: AlgebraPackage, out: &mut Vec<ReportEntry>) -> Result<()> {
    use FrameShape::*;
    let shapes = [FuzzyTransitive, Preorder, Kd45, CrispEquivalence];
    for id in [
        BoundId::ThmBeliefInternal,
        BoundId::ThmBeliefReach,
        BoundId::CorBeliefCollapse,
    ] {
        out.push(d.run(id.name(), pkg, &shapes, |f, rng| {
            let crisp = f.relation(M)?.is_crisp() && rng.random_bool(0.7);
            let risk = random_risk_set(rng, f, pkg, crisp);
            let reports = check_belief_bounds(f, M, &risk, pkg)?;
            Ok(bound_checks(&reports, id))
        })?);
    }
    Ok(())
}

fn aggregated_entries(seed: u64, out: &mut Vec<ReportEntry>) -> Result<()> {
    for r in aggregated_counterexamples()? {
        out.push(ReportEntry {
            bound_id: r.bound_id.name().to_string(),
            package: None,
            satisfied: r.satisfied,
            max_violation: r.max_violation,
            seed,
            frames_checked: 1,
            frames_skipped: 0,
            value: r.value,
        });
    }
    Ok(())
}

/// Run a suite on seeded random frames. Output is a function of the config.
pub fn run_suite(suite: Suite, cfg: SuiteConfig) -> Result<SuiteReport> {
    let mut entries = Vec::new();
    // Every (entry, package) gets its own ChaCha stream, so entries are
    // independent of which other suites ran.
    let groups: &[(Suite, u64)] = &[(Suite::Laws, 0), (Suite::Factive, 1000), (Suite::Belief, 2000)];
    for &(s, base) in groups {
        if suite != s && suite != Suite::All {
            continue;
        }
        for (k, pkg) in AlgebraPackage::all().into_iter().enumerate() {
            let mut d = Driver {
                cfg,
                stream: base + 100 * k as u64,
            };
            match s {
                Suite::Laws => laws_entries(&mut d, pkg, &mut entries)?,
                Suite::Factive => factive_entries(&mut d, pkg, &mut entries)?,
                Suite::Belief => belief_entries(&mut d, pkg, &mut entries)?,
                _ => unreachable!(),
            }
        }
    }
    if matches!(suite, Suite::Aggregated | Suite::All) {
        aggregated_entries(cfg.seed, &mut entries)?;
    }
    Ok(SuiteReport {
        suite,
        seed: cfg.seed,
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::frame_from_json;

    const G: AlgebraPackage = AlgebraPackage::GODEL;

    fn universal(n: usize) -> Frame {
        let mut f = Frame::with_world_count(n).unwrap();
        f.add_relation("K", Relation::universal(n)).unwrap();
        f
    }

    fn named(name: &str, v: &[f64]) -> (String, Proposition) {
        (name.to_string(), Proposition::new(v.to_vec()).unwrap())
    }

    #[test]
    fn contagion_factivity_witness() {
        let f = frame_from_json(
            r#"{"worlds": ["w0", "w1", "w2"],
                "relations": {"B": [[0, 1, 1], [0, 1, 0], [0, 0, 1]]},
                "propositions": {"p": [0, 1, 1]}}"#,
        )
        .unwrap();
        let laws = check_package_laws(&f, "B", G).unwrap();
        let fact = laws.iter().find(|r| r.principle == Principle::Factivity).unwrap();
        assert!(!fact.holds && !fact.expected);
        let w = fact.witness.as_ref().unwrap();
        assert_eq!((w.proposition.as_str(), w.world.as_str(), w.gap), ("p", "w0", 1.0));
        assert!(laws.iter().all(|r| !r.is_violation()));
    }

    #[test]
    fn reflexive_fuzzy_frame_is_factive() {
        let f = frame_from_json(
            r#"{"worlds": ["a", "b", "c"],
                "relations": {"K": [[1, 0.5, 0.25], [0.75, 1, 0], [0, 0.5, 1]]}}"#,
        )
        .unwrap();
        for pkg in AlgebraPackage::all() {
            let laws = check_package_laws(&f, "K", pkg).unwrap();
            assert!(laws.iter().all(|r| !r.is_violation()), "{pkg}: {laws:?}");
            assert!(laws[0].holds && laws[0].principle == Principle::Factivity);
        }
    }

    #[test]
    fn rrp_examples() {
        let f = universal(2);
        assert!(check_rrp(&f, "K", &[named("one", &[1.0, 1.0])], G).unwrap().holds);
        let r = check_rrp(&f, "K", &[named("p", &[1.0, 0.0])], G).unwrap();
        assert!(!r.holds);
        assert_eq!(r.witness.unwrap().world, "w0");
        let mut id = Frame::with_world_count(2).unwrap();
        id.add_relation("K", Relation::identity(2)).unwrap();
        assert!(check_rrp(&id, "K", &[named("p", &[0.3, 0.8])], G).unwrap().holds);
    }

    #[test]
    fn rmp_closure_contains_refinements() {
        let f = universal(2);
        let base = [named("p", &[1.0, 0.0])];
        let closed = rmp_closure(&f, "K", &base, G).unwrap();
        assert_eq!(closed.len(), 3);
        assert!(check_rmp(&f, "K", &base, &closed, G).unwrap().holds);
        assert!(!check_rmp(&f, "K", &base, &base, G).unwrap().holds);
    }

    #[test]
    fn crisp_collapse_on_equivalence_frame() {
        let mut f = Frame::with_world_count(4).unwrap();
        f.add_relation(
            "K",
            Relation::from_neighbourhoods(4, &[vec![0, 1], vec![0, 1], vec![2, 3], vec![2, 3]]).unwrap(),
        )
        .unwrap();
        let risk = [named("p", &[1.0, 1.0, 0.0, 0.0])];
        let reports = check_factive_bounds(&f, "K", &risk, G).unwrap();
        let collapse = reports.iter().find(|r| r.bound_id == BoundId::CorCollapse).unwrap();
        assert!(!collapse.is_skipped() && collapse.satisfied);
        assert_eq!(collapse.lhs, collapse.rhs);
    }

    #[test]
    fn rrp_failure_skips_factive_bounds() {
        let risk = [named("p", &[1.0, 0.0])];
        let reports = check_factive_bounds(&universal(2), "K", &risk, G).unwrap();
        assert_eq!(reports.len(), 4);
        assert!(reports.iter().all(BoundReport::is_skipped));
    }

    #[test]
    fn kd45_coherent_register_collapses() {
        let mut f = Frame::with_world_count(3).unwrap();
        f.add_relation("B", Relation::from_neighbourhoods(3, &[vec![1], vec![1], vec![2]]).unwrap())
            .unwrap();
        let risk = [named("p", &[0.0, 1.0, 1.0])];
        let reports = check_belief_bounds(&f, "B", &risk, G).unwrap();
        let c = reports.iter().find(|r| r.bound_id == BoundId::CorBeliefCollapse).unwrap();
        assert!(!c.is_skipped() && c.satisfied);
    }

    #[test]
    fn belief_bounds_skip_without_transitivity() {
        let mut f = Frame::with_world_count(3).unwrap();
        f.add_relation("B", Relation::from_neighbourhoods(3, &[vec![1], vec![2], vec![0]]).unwrap())
            .unwrap();
        let reports = check_belief_bounds(&f, "B", &[named("p", &[1.0, 0.0, 1.0])], G).unwrap();
        assert!(reports.iter().all(BoundReport::is_skipped));
    }

    #[test]
    fn aggregated_failures_reproduce() {
        let r = aggregated_counterexamples().unwrap();
        assert!(r.iter().all(|b| b.satisfied));
        assert_eq!(r[0].value, Some(0.5));
        assert_eq!(r[1].value, Some(0.0));
        assert!((r[2].value.unwrap() - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn generated_shapes_have_their_properties() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for pkg in AlgebraPackage::all() {
            for _ in 0..50 {
                let f = random_frame(&mut rng, FrameShape::Preorder, pkg);
                let p = classify_frame(&f, M, pkg).unwrap();
                assert!(p.reflexive && p.fuzzy_transitive);
                let f = random_frame(&mut rng, FrameShape::Kd45, pkg);
                let p = classify_frame(&f, M, pkg).unwrap();
                assert!(p.serial && p.transitive && p.euclidean && p.crisp);
                let f = random_frame(&mut rng, FrameShape::CrispEquivalence, pkg);
                assert!(classify_frame(&f, M, pkg).unwrap().equivalence);
            }
        }
    }

    #[test]
    fn small_suite_is_deterministic() {
        let cfg = SuiteConfig {
            seed: 9,
            frames_per_gate: 20,
            max_attempts: 2000,
        };
        let a = run_suite(Suite::All, cfg).unwrap();
        let b = run_suite(Suite::All, cfg).unwrap();
        assert_eq!(a, b);
        assert!(a.all_satisfied(), "{a:#?}");
    }
}
