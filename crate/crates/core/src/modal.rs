//! Graded modal operators over a [`Frame`].
//!
//! Conjunction is pointwise min and negation is `1 - x` regardless of the
//! package; the package only selects the t-norm and residuum used inside the
//! operators.

use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraPackage, Degree, Proposition};
use crate::error::{Error, Result};
use crate::frame::{Frame, MEASURE_TOLERANCE};

/// `(Mp)(w) = inf_v (γ(w,v) ⇒ p(v))`.
pub fn box_op(f: &Frame, std: &str, p: &Proposition, pkg: AlgebraPackage) -> Result<Proposition> {
    let rel = f.relation(std)?;
    f.check_proposition(p)?;
    let pv = p.values();
    let out = (0..f.len())
        .map(|w| {
            rel.successors(w)
                .iter()
                .fold(1.0_f64, |acc, &(v, g)| acc.min(pkg.implies_raw(g, pv[v])))
        })
        .collect();
    Ok(Proposition::from_raw(out))
}

/// `(◇p)(w) = sup_v (γ(w,v) ⊗ p(v))`.
pub fn diamond(f: &Frame, std: &str, p: &Proposition, pkg: AlgebraPackage) -> Result<Proposition> {
    let rel = f.relation(std)?;
    f.check_proposition(p)?;
    let pv = p.values();
    let out = (0..f.len())
        .map(|w| {
            rel.successors(w)
                .iter()
                .fold(0.0_f64, |acc, &(v, g)| acc.max(pkg.tnorm_raw(g, pv[v])))
        })
        .collect();
    Ok(Proposition::from_raw(out))
}

/// Non-exclusion `¬M¬p`.
pub fn dual(f: &Frame, std: &str, p: &Proposition, pkg: AlgebraPackage) -> Result<Proposition> {
    Ok(box_op(f, std, &p.negate(), pkg)?.negate())
}

/// `I_M(p) = Mp ∧ M¬p`.
pub fn inconsistency(f: &Frame, std: &str, p: &Proposition, pkg: AlgebraPackage) -> Result<Proposition> {
    let b = box_op(f, std, p, pkg)?;
    let bn = box_op(f, std, &p.negate(), pkg)?;
    b.meet(&bn)
}

/// All epistemic statuses of one proposition under one standard.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StatusBundle {
    #[serde(rename = "box")]
    pub box_: Proposition,
    pub diamond: Proposition,
    pub dual: Proposition,
    pub hesitation: Proposition,
    pub inconsistency: Proposition,
}

impl StatusBundle {
    /// Worlds where `dual - box` is negative before clipping, with the raw gap.
    pub fn negative_gaps(&self) -> Vec<(usize, f64)> {
        self.dual
            .values()
            .iter()
            .zip(self.box_.values())
            .enumerate()
            .filter_map(|(w, (d, b))| (d - b < 0.0).then_some((w, d - b)))
            .collect()
    }
}

pub fn statuses(f: &Frame, std: &str, p: &Proposition, pkg: AlgebraPackage) -> Result<StatusBundle> {
    let box_ = box_op(f, std, p, pkg)?;
    let box_neg = box_op(f, std, &p.negate(), pkg)?;
    let dual = box_neg.negate();
    let hesitation = dual.monus(&box_)?;
    let inconsistency = box_.meet(&box_neg)?;
    Ok(StatusBundle {
        diamond: diamond(f, std, p, pkg)?,
        box_,
        dual,
        hesitation,
        inconsistency,
    })
}

/// The diagnostic refinements, with the standards they mention.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RefinementKind {
    /// `p ∧ ¬Mp`
    Moore { standard: String },
    /// `p ∧ M¬p`
    Anti { standard: String },
    /// `Ep ∧ ¬Mp`
    Unsup { evidence: String, standard: String },
    /// `Ep ∧ M¬p`
    Conf { evidence: String, standard: String },
}

impl RefinementKind {
    pub fn moore(std: impl Into<String>) -> Self {
        RefinementKind::Moore { standard: std.into() }
    }

    pub fn anti(std: impl Into<String>) -> Self {
        RefinementKind::Anti { standard: std.into() }
    }

    pub fn unsup(evidence: impl Into<String>, std: impl Into<String>) -> Result<Self> {
        let (e, m) = distinct(evidence.into(), std.into())?;
        Ok(RefinementKind::Unsup { evidence: e, standard: m })
    }

    pub fn conf(evidence: impl Into<String>, std: impl Into<String>) -> Result<Self> {
        let (e, m) = distinct(evidence.into(), std.into())?;
        Ok(RefinementKind::Conf { evidence: e, standard: m })
    }

    pub fn name(&self) -> &'static str {
        match self {
            RefinementKind::Moore { .. } => "moore",
            RefinementKind::Anti { .. } => "anti",
            RefinementKind::Unsup { .. } => "unsup",
            RefinementKind::Conf { .. } => "conf",
        }
    }

    /// The standard whose support is being diagnosed.
    pub fn standard(&self) -> &str {
        match self {
            RefinementKind::Moore { standard }
            | RefinementKind::Anti { standard }
            | RefinementKind::Unsup { standard, .. }
            | RefinementKind::Conf { standard, .. } => standard,
        }
    }

    pub fn evidence(&self) -> Option<&str> {
        match self {
            RefinementKind::Unsup { evidence, .. } | RefinementKind::Conf { evidence, .. } => Some(evidence),
            _ => None,
        }
    }
}

fn distinct(e: String, m: String) -> Result<(String, String)> {
    if e == m {
        Err(Error::SameStandard(e))
    } else {
        Ok((e, m))
    }
}

pub fn refine(f: &Frame, p: &Proposition, kind: &RefinementKind, pkg: AlgebraPackage) -> Result<Proposition> {
    if let Some(e) = kind.evidence() {
        if e == kind.standard() {
            return Err(Error::SameStandard(e.to_string()));
        }
    }
    let std = kind.standard();
    match kind {
        RefinementKind::Moore { .. } => p.meet(&box_op(f, std, p, pkg)?.negate()),
        RefinementKind::Anti { .. } => p.meet(&box_op(f, std, &p.negate(), pkg)?),
        RefinementKind::Unsup { evidence, .. } => {
            box_op(f, evidence, p, pkg)?.meet(&box_op(f, std, p, pkg)?.negate())
        }
        RefinementKind::Conf { evidence, .. } => {
            box_op(f, evidence, p, pkg)?.meet(&box_op(f, std, &p.negate(), pkg)?)
        }
    }
}

/// `(M^agg p)(w) = Σ_v μ_w(v) (γ(w,v) ⇒ p(v))`.
pub fn box_agg(f: &Frame, std: &str, p: &Proposition, pkg: AlgebraPackage) -> Result<Proposition> {
    aggregate(f, std, p, |g, x| pkg.implies_raw(g, x))
}

/// `(◇^agg p)(w) = Σ_v μ_w(v) (γ(w,v) ⊗ p(v))`.
pub fn diamond_agg(f: &Frame, std: &str, p: &Proposition, pkg: AlgebraPackage) -> Result<Proposition> {
    aggregate(f, std, p, |g, x| pkg.tnorm_raw(g, x))
}

fn aggregate(f: &Frame, std: &str, p: &Proposition, op: impl Fn(f64, f64) -> f64) -> Result<Proposition> {
    let rel = f.relation(std)?;
    f.check_proposition(p)?;
    let pv = p.values();
    let mut out = Vec::with_capacity(f.len());
    for w in 0..f.len() {
        let mu = f.local_measure(std, w)?;
        let s: f64 = mu
            .weights()
            .iter()
            .map(|&(v, m)| m * op(rel.degree(w, v), pv[v]))
            .sum();
        out.push(s.clamp(0.0, 1.0));
    }
    Ok(Proposition::from_raw(out))
}

/// `ρ_p(w) = Σ_v p(v) μ_w(v)`.
pub fn local_probability(f: &Frame, std: &str, p: &Proposition, w: usize) -> Result<Degree> {
    f.check_proposition(p)?;
    if w >= f.len() {
        return Err(Error::UnknownWorld(format!("#{w}")));
    }
    let mu = f.local_measure(std, w)?;
    Ok(Degree::clamped(mu.expect(p)))
}

/// `ρ_p` at every world.
pub fn local_probabilities(f: &Frame, std: &str, p: &Proposition) -> Result<Proposition> {
    let vals = (0..f.len())
        .map(|w| local_probability(f, std, p, w).map(Degree::value))
        .collect::<Result<Vec<_>>>()?;
    Ok(Proposition::from_raw(vals))
}

/// A probability vector over the worlds of a frame.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GlobalMeasure(Vec<f64>);

impl GlobalMeasure {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        let sum: f64 = weights.iter().sum();
        let valid = weights.iter().all(|m| m.is_finite() && *m >= 0.0);
        if !valid || (sum - 1.0).abs() > MEASURE_TOLERANCE {
            return Err(Error::MeasureNotNormalized {
                world: "<global>".into(),
                sum,
            });
        }
        Ok(GlobalMeasure(weights))
    }

    pub fn uniform(n: usize) -> Self {
        GlobalMeasure(vec![1.0 / n as f64; n])
    }

    pub fn weights(&self) -> &[f64] {
        &self.0
    }
}

/// Expectation `Σ p(w) μ(w)`.
pub fn fuzzy_event_probability(p: &Proposition, mu: &GlobalMeasure) -> Result<Degree> {
    check_len(p, mu)?;
    let s: f64 = p.values().iter().zip(mu.weights()).map(|(x, m)| x * m).sum();
    Ok(Degree::clamped(s))
}

/// `μ({w : p(w) ≥ η})`.
pub fn level_probability(p: &Proposition, mu: &GlobalMeasure, eta: f64) -> Result<Degree> {
    check_len(p, mu)?;
    let s: f64 = p
        .values()
        .iter()
        .zip(mu.weights())
        .filter(|(x, _)| **x >= eta)
        .map(|(_, m)| m)
        .sum();
    Ok(Degree::clamped(s))
}

fn check_len(p: &Proposition, mu: &GlobalMeasure) -> Result<()> {
    if p.len() != mu.weights().len() {
        return Err(Error::WorldSetMismatch {
            left: p.len(),
            right: mu.weights().len(),
        });
    }
    Ok(())
}
