//! Worked risk models: the two-world catalog, lognormal model risk, flood
//! geometry with local probabilities, and interbank contagion.

use std::f64::consts::PI;
use std::io::Write;

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::algebra::{AlgebraPackage, Proposition};
use crate::error::{Error, Result};
use crate::frame::{build_metric_frame, classify_frame, Frame, FrameProfile, GridAxis, MetricFrameSpec, Relation};
use crate::modal::{self, RefinementKind};

// ---------------------------------------------------------------------------
// Normal distribution

fn standard_normal() -> Normal {
    Normal::standard()
}

/// Standard normal CDF.
pub fn normal_cdf(x: f64) -> f64 {
    standard_normal().cdf(x)
}

/// Standard normal quantile.
pub fn normal_quantile(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidConfidence(p));
    }
    Ok(standard_normal().inverse_cdf(p))
}

// ---------------------------------------------------------------------------
// Lognormal model risk

/// Loss `L ~ Lognormal(μ, σ²)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LognormalModelState {
    pub mu: f64,
    pub sigma: f64,
}

impl LognormalModelState {
    pub fn new(mu: f64, sigma: f64) -> Result<Self> {
        if !(sigma.is_finite() && sigma > 0.0 && mu.is_finite()) {
            return Err(Error::InvalidSpec(format!("lognormal state needs finite μ and σ > 0, got ({mu}, {sigma})")));
        }
        Ok(LognormalModelState { mu, sigma })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VarEs {
    pub var: f64,
    pub es: f64,
}

/// Closed-form value-at-risk and expected shortfall at level `alpha`.
pub fn lognormal_var_es(state: LognormalModelState, alpha: f64) -> Result<VarEs> {
    let z = normal_quantile(alpha)?;
    let LognormalModelState { mu, sigma } = state;
    Ok(VarEs {
        var: (mu + sigma * z).exp(),
        es: (mu + sigma * sigma / 2.0).exp() * normal_cdf(sigma - z) / (1.0 - alpha),
    })
}

// ---------------------------------------------------------------------------
// Region grids

/// Modal region of a grid cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegionLabel {
    /// `Kp`
    Robust,
    /// `p ∧ ¬Kp`
    Moore,
    /// `◇p ∧ ¬p`
    PossibleOnly,
    /// `¬◇p`
    Excluded,
}

impl RegionLabel {
    pub const ALL: [RegionLabel; 4] = [
        RegionLabel::Robust,
        RegionLabel::Moore,
        RegionLabel::PossibleOnly,
        RegionLabel::Excluded,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RegionLabel::Robust => "robust",
            RegionLabel::Moore => "moore",
            RegionLabel::PossibleOnly => "possible_only",
            RegionLabel::Excluded => "excluded",
        }
    }

    fn gray(self) -> u8 {
        match self {
            RegionLabel::Robust => 0,
            RegionLabel::Moore => 85,
            RegionLabel::PossibleOnly => 170,
            RegionLabel::Excluded => 255,
        }
    }

    fn classify(p: bool, kp: bool, dia: bool) -> Self {
        if kp {
            RegionLabel::Robust
        } else if p {
            RegionLabel::Moore
        } else if dia {
            RegionLabel::PossibleOnly
        } else {
            RegionLabel::Excluded
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedAxis {
    pub name: String,
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
}

impl NamedAxis {
    pub fn new(name: &str, lo: f64, hi: f64, steps: usize) -> Self {
        NamedAxis {
            name: name.to_string(),
            lo,
            hi,
            steps,
        }
    }

    fn grid_axis(&self) -> GridAxis {
        GridAxis::new(self.lo, self.hi, self.steps)
    }
}

/// A crisp risk region on a 2-D grid with its modal status per cell.
/// Cells are indexed with `x` varying fastest.
#[derive(Debug, Clone)]
pub struct RegionGrid {
    pub axes: [NamedAxis; 2],
    pub p: Proposition,
    pub kp: Proposition,
    pub dia: Proposition,
    pub labels: Vec<RegionLabel>,
    /// Local probability `ρ_p` under the uniform measure on each neighbourhood.
    pub rho: Proposition,
    frame: Frame,
}

pub const GRID_STANDARD: &str = "K";

impl RegionGrid {
    fn build(axes: [NamedAxis; 2], weights: [f64; 2], radius: f64, holds: impl Fn(f64, f64) -> bool) -> Result<Self> {
        let spec = MetricFrameSpec {
            standard: GRID_STANDARD.into(),
            weights: weights.to_vec(),
            radius,
            axes: vec![axes[0].grid_axis(), axes[1].grid_axis()],
        };
        let frame = build_metric_frame(&spec)?.with_uniform_local_measures(true);
        let geo = frame.geometry().expect("metric frame has geometry").clone();
        let p = Proposition::indicator(frame.len(), |w| {
            let c = geo.coords(w);
            holds(c[0], c[1])
        });
        let g = AlgebraPackage::GODEL;
        let kp = modal::box_op(&frame, GRID_STANDARD, &p, g)?;
        let dia = modal::diamond(&frame, GRID_STANDARD, &p, g)?;
        let rho = modal::local_probabilities(&frame, GRID_STANDARD, &p)?;
        let labels = (0..frame.len())
            .map(|w| RegionLabel::classify(p.values()[w] == 1.0, kp.values()[w] == 1.0, dia.values()[w] == 1.0))
            .collect();
        Ok(RegionGrid {
            axes,
            p,
            kp,
            dia,
            labels,
            rho,
            frame,
        })
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn coords(&self, cell: usize) -> (f64, f64) {
        let c = self.frame.geometry().expect("grid").coords(cell);
        (c[0], c[1])
    }

    pub fn cell(&self, ix: usize, iy: usize) -> usize {
        ix + self.axes[0].steps * iy
    }

    pub fn count(&self, label: RegionLabel) -> usize {
        self.labels.iter().filter(|&&l| l == label).count()
    }

    /// Cells of `◇p ∖ Kp`.
    pub fn hesitation_count(&self) -> usize {
        (0..self.len())
            .filter(|&w| self.dia.values()[w] == 1.0 && self.kp.values()[w] == 0.0)
            .count()
    }

    /// `Kp ⊆ p ⊆ ◇p` cell-wise.
    pub fn is_nested(&self) -> bool {
        (0..self.len()).all(|w| self.kp.values()[w] <= self.p.values()[w] && self.p.values()[w] <= self.dia.values()[w])
    }

    /// Header `x,y,p,Kp,DiaKp,label,rho`; `DiaKp` holds `◇_K p`.
    pub fn write_csv(&self, mut out: impl Write) -> Result<()> {
        writeln!(out, "x,y,p,Kp,DiaKp,label,rho")?;
        for w in 0..self.len() {
            let (x, y) = self.coords(w);
            writeln!(
                out,
                "{x:.6},{y:.6},{:.6},{:.6},{:.6},{},{:.6}",
                self.p.values()[w],
                self.kp.values()[w],
                self.dia.values()[w],
                self.labels[w].name(),
                self.rho.values()[w]
            )?;
        }
        Ok(())
    }

    /// Plain-text PGM of the labels, highest `y` on the first row.
    pub fn write_pgm(&self, mut out: impl Write) -> Result<()> {
        let (nx, ny) = (self.axes[0].steps, self.axes[1].steps);
        writeln!(out, "P2\n{nx} {ny}\n255")?;
        for iy in (0..ny).rev() {
            let row: Vec<String> = (0..nx)
                .map(|ix| self.labels[self.cell(ix, iy)].gray().to_string())
                .collect();
            writeln!(out, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelRiskParams {
    pub alpha: f64,
    /// Capital threshold on expected shortfall.
    pub c: f64,
    pub beta_mu: f64,
    pub beta_sigma: f64,
    pub mu_axis: (f64, f64),
    pub sigma_axis: (f64, f64),
    pub steps: usize,
}

impl Default for ModelRiskParams {
    fn default() -> Self {
        ModelRiskParams {
            alpha: 0.99,
            c: 100.0,
            beta_mu: 0.10,
            beta_sigma: 0.045,
            mu_axis: (1.5, 4.5),
            sigma_axis: (0.2, 1.2),
            steps: 201,
        }
    }
}

/// Breach region `ES_α(μ,σ) ≥ c` with the elliptical tolerance
/// `(Δμ/β_μ)² + (Δσ/β_σ)² ≤ 1`.
pub fn model_risk_grid(params: &ModelRiskParams) -> Result<RegionGrid> {
    if !(params.beta_mu > 0.0 && params.beta_sigma > 0.0) {
        return Err(Error::InvalidSpec("model-risk tolerances must be positive".into()));
    }
    if !(params.alpha > 0.0 && params.alpha < 1.0) {
        return Err(Error::InvalidConfidence(params.alpha));
    }
    if params.sigma_axis.0 <= 0.0 {
        return Err(Error::InvalidSpec("σ axis must be positive".into()));
    }
    let z = normal_quantile(params.alpha)?;
    let axes = [
        NamedAxis::new("mu", params.mu_axis.0, params.mu_axis.1, params.steps),
        NamedAxis::new("sigma", params.sigma_axis.0, params.sigma_axis.1, params.steps),
    ];
    let weights = [
        1.0 / (params.beta_mu * params.beta_mu),
        1.0 / (params.beta_sigma * params.beta_sigma),
    ];
    let (alpha, c) = (params.alpha, params.c);
    RegionGrid::build(axes, weights, 1.0, move |mu, sigma| {
        let es = (mu + sigma * sigma / 2.0).exp() * normal_cdf(sigma - z) / (1.0 - alpha);
        es >= c
    })
}

/// Flood severity surface on the unit square.
pub fn flood_surface(x: f64, y: f64) -> f64 {
    0.95 * x * x + 0.75 * y * y + 0.85 * x * y + 0.10 * (2.5 * PI * x).sin() * (2.0 * PI * y).sin()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FloodParams {
    /// Flood threshold: `A = {F ≥ c}`.
    pub c: f64,
    pub a_x: f64,
    pub a_y: f64,
    pub beta: f64,
    pub steps: usize,
}

impl Default for FloodParams {
    fn default() -> Self {
        FloodParams {
            c: 0.8,
            a_x: 1.0,
            a_y: 1.0,
            beta: 0.08,
            steps: 201,
        }
    }
}

pub fn flood_grid(params: &FloodParams) -> Result<RegionGrid> {
    if !(params.a_x > 0.0 && params.a_y > 0.0) {
        return Err(Error::InvalidSpec("flood metric weights must be positive".into()));
    }
    if params.beta.is_nan() || params.beta < 0.0 {
        return Err(Error::InvalidSpec(format!("flood radius {} must be non-negative", params.beta)));
    }
    let axes = [
        NamedAxis::new("x", 0.0, 1.0, params.steps),
        NamedAxis::new("y", 0.0, 1.0, params.steps),
    ];
    let c = params.c;
    RegionGrid::build(axes, [params.a_x, params.a_y], params.beta, move |x, y| flood_surface(x, y) >= c)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quadrant {
    RobustLikely,
    RobustUnlikely,
    LikelyFragile,
    UnlikelyUnsupported,
}

impl Quadrant {
    pub fn name(self) -> &'static str {
        match self {
            Quadrant::RobustLikely => "robust_likely",
            Quadrant::RobustUnlikely => "robust_unlikely",
            Quadrant::LikelyFragile => "likely_fragile",
            Quadrant::UnlikelyUnsupported => "unlikely_unsupported",
        }
    }
}

/// Governance response for one flood cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FloodAction {
    Endorse,
    EscalateInspect,
    Monitor,
    CloseWithAuditJustification,
    /// Cases the rule list leaves open.
    Review,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadrantLabel {
    pub modal: bool,
    pub possible: bool,
    pub local_prob: f64,
    pub quadrant: Quadrant,
    pub action: FloodAction,
}

/// Cross-classify modal status with local probability. `ρ ≥ rho_high`
/// counts as high; the action rules read `ρ ≤ rho_low` as low.
pub fn flood_quadrants(grid: &RegionGrid, rho_high: f64, rho_low: f64) -> Result<Vec<QuadrantLabel>> {
    if !(0.0 < rho_low && rho_low < rho_high && rho_high < 1.0) {
        return Err(Error::InvalidSpec(format!(
            "need 0 < rho_low < rho_high < 1, got {rho_low} and {rho_high}"
        )));
    }
    Ok((0..grid.len())
        .map(|w| {
            let modal = grid.kp.values()[w] == 1.0;
            let possible = grid.dia.values()[w] == 1.0;
            let rho = grid.rho.values()[w];
            let high = rho >= rho_high;
            let quadrant = match (modal, high) {
                (true, true) => Quadrant::RobustLikely,
                (true, false) => Quadrant::RobustUnlikely,
                (false, true) => Quadrant::LikelyFragile,
                (false, false) => Quadrant::UnlikelyUnsupported,
            };
            let action = if !possible {
                FloodAction::CloseWithAuditJustification
            } else if high {
                if modal {
                    FloodAction::Endorse
                } else {
                    FloodAction::EscalateInspect
                }
            } else if !modal && rho <= rho_low {
                FloodAction::Monitor
            } else {
                FloodAction::Review
            };
            QuadrantLabel {
                modal,
                possible,
                local_prob: rho,
                quadrant,
                action,
            }
        })
        .collect())
}

// ---------------------------------------------------------------------------
// Two-world catalog

fn two_world(std: &str, sets: [&[usize]; 2]) -> Frame {
    let mut f = Frame::with_world_count(2).expect("two worlds");
    let rel = Relation::from_neighbourhoods(2, &[sets[0].to_vec(), sets[1].to_vec()]).expect("valid sets");
    f.add_relation(std, rel).expect("sizes match");
    f
}

fn set_name(set: &[usize]) -> String {
    let names: Vec<String> = set.iter().map(|w| format!("w{w}")).collect();
    format!("{{{}}}", names.join(","))
}

/// Operator values at `w0` for one evidence set and one crisp proposition.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvidenceSetRow {
    pub evidence: String,
    pub p0: f64,
    pub p1: f64,
    pub box_: f64,
    pub diamond: f64,
    pub dual: f64,
}

/// Assurance statuses at `w0` under the universal relation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AssuranceRow {
    pub p0: f64,
    pub p1: f64,
    pub kp: f64,
    pub dia_kp: f64,
    pub moore: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CommitmentRow {
    pub q0: f64,
    pub q1: f64,
    pub bq: f64,
    pub dia_bq: f64,
    pub dual_bq: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrameRow {
    pub name: &'static str,
    pub evidence: [String; 2],
    pub profile: FrameProfile,
}

/// Statuses at both worlds for a fuzzy two-world relation `[[a,b],[c,d]]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FuzzyTwoWorld {
    pub gamma: [[f64; 2]; 2],
    pub p: [f64; 2],
    pub box_: [f64; 2],
    pub diamond: [f64; 2],
    pub dual: [f64; 2],
    pub hesitation: [f64; 2],
    pub moore: [f64; 2],
    pub anti: [f64; 2],
    pub inconsistency: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TwoWorldCatalog {
    pub evidence_sets: Vec<EvidenceSetRow>,
    pub assurance: Vec<AssuranceRow>,
    pub es_breach: AssuranceRow,
    pub cascade: CommitmentRow,
    pub s5_frames: Vec<FrameRow>,
    pub kd45_frames: Vec<FrameRow>,
    pub fuzzy: Option<FuzzyTwoWorld>,
}

/// ES values of the current and challenger model states, and the threshold.
pub const ES_BREACH_CASE: (f64, f64, f64) = (112.0, 96.0, 100.0);

fn pair(p: &Proposition) -> [f64; 2] {
    [p.values()[0], p.values()[1]]
}

pub fn fuzzy_two_world(pkg: AlgebraPackage, gamma: [[f64; 2]; 2], p: [f64; 2]) -> Result<FuzzyTwoWorld> {
    let mut f = Frame::with_world_count(2)?;
    f.add_relation("M", Relation::from_dense("M", &[gamma[0].to_vec(), gamma[1].to_vec()])?)?;
    let prop = Proposition::new(p.to_vec())?;
    let s = modal::statuses(&f, "M", &prop, pkg)?;
    Ok(FuzzyTwoWorld {
        gamma,
        p,
        box_: pair(&s.box_),
        diamond: pair(&s.diamond),
        dual: pair(&s.dual),
        hesitation: pair(&s.hesitation),
        moore: pair(&modal::refine(&f, &prop, &RefinementKind::moore("M"), pkg)?),
        anti: pair(&modal::refine(&f, &prop, &RefinementKind::anti("M"), pkg)?),
        inconsistency: pair(&s.inconsistency),
    })
}

fn assurance_row(f: &Frame, p: [f64; 2], pkg: AlgebraPackage) -> Result<AssuranceRow> {
    let prop = Proposition::new(p.to_vec())?;
    let kp = modal::box_op(f, "K", &prop, pkg)?;
    let dia = modal::diamond(f, "K", &prop, pkg)?;
    let moore = modal::refine(f, &prop, &RefinementKind::moore("K"), pkg)?;
    Ok(AssuranceRow {
        p0: p[0],
        p1: p[1],
        kp: kp.values()[0],
        dia_kp: dia.values()[0],
        moore: moore.values()[0],
    })
}

pub fn two_world_catalog(pkg: AlgebraPackage, fuzzy: Option<([[f64; 2]; 2], [f64; 2])>) -> Result<TwoWorldCatalog> {
    let crisp_cases = [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]];
    let sets: [&[usize]; 4] = [&[], &[0], &[1], &[0, 1]];

    let mut evidence_sets = Vec::new();
    for set in sets {
        // w1 is given the same set; only w0 is read.
        let f = two_world("M", [set, set]);
        for p in crisp_cases {
            let prop = Proposition::new(p.to_vec())?;
            evidence_sets.push(EvidenceSetRow {
                evidence: set_name(set),
                p0: p[0],
                p1: p[1],
                box_: modal::box_op(&f, "M", &prop, pkg)?.values()[0],
                diamond: modal::diamond(&f, "M", &prop, pkg)?.values()[0],
                dual: modal::dual(&f, "M", &prop, pkg)?.values()[0],
            });
        }
    }

    let universal = two_world("K", [&[0, 1], &[0, 1]]);
    let assurance = crisp_cases
        .iter()
        .map(|&p| assurance_row(&universal, p, pkg))
        .collect::<Result<Vec<_>>>()?;

    let (es0, es1, c) = ES_BREACH_CASE;
    let breach = [f64::from(u8::from(es0 >= c)), f64::from(u8::from(es1 >= c))];
    let es_breach = assurance_row(&universal, breach, pkg)?;

    let stress = two_world("B", [&[1], &[1]]);
    let q = Proposition::new(vec![0.0, 1.0])?;
    let cascade = CommitmentRow {
        q0: 0.0,
        q1: 1.0,
        bq: modal::box_op(&stress, "B", &q, pkg)?.values()[0],
        dia_bq: modal::diamond(&stress, "B", &q, pkg)?.values()[0],
        dual_bq: modal::dual(&stress, "B", &q, pkg)?.values()[0],
    };

    let frame_row = |name: &'static str, std: &str, s: [&[usize]; 2]| -> Result<FrameRow> {
        let f = two_world(std, s);
        Ok(FrameRow {
            name,
            evidence: [set_name(s[0]), set_name(s[1])],
            profile: classify_frame(&f, std, pkg)?,
        })
    };
    let s5_frames = vec![
        frame_row("identity", "K", [&[0], &[1]])?,
        frame_row("universal", "K", [&[0, 1], &[0, 1]])?,
    ];
    let kd45_frames = vec![
        frame_row("anchored_w0", "B", [&[0], &[0]])?,
        frame_row("anchored_w1", "B", [&[1], &[1]])?,
        frame_row("identity", "B", [&[0], &[1]])?,
        frame_row("universal", "B", [&[0, 1], &[0, 1]])?,
    ];

    let fuzzy = fuzzy.map(|(g, p)| fuzzy_two_world(pkg, g, p)).transpose()?;
    Ok(TwoWorldCatalog {
        evidence_sets,
        assurance,
        es_breach,
        cascade,
        s5_frames,
        kd45_frames,
        fuzzy,
    })
}

/// The liquidity frame: `γ_K(w0,·) = (1, 0.6)`, `r = (0, 0.9)`.
pub fn liquidity_frame() -> Frame {
    let mut f = Frame::with_world_count(2).expect("two worlds");
    f.add_relation("K", Relation::from_dense("K", &[vec![1.0, 0.6], vec![0.0, 1.0]]).expect("valid"))
        .expect("sizes");
    f.add_proposition("r", Proposition::new(vec![0.0, 0.9]).expect("valid"))
        .expect("sizes");
    f
}

// ---------------------------------------------------------------------------
// Contagion

/// Belief anchored on the stress states: `Γ_B(w0) = {w1, w2}`, `p = (0, 1, 1)`.
pub fn contagion_frame() -> Frame {
    let mut f = Frame::with_world_count(3).expect("three worlds");
    let rel = Relation::from_neighbourhoods(3, &[vec![1, 2], vec![1], vec![2]]).expect("valid");
    f.add_relation("B", rel).expect("sizes");
    f.add_proposition("p", Proposition::new(vec![0.0, 1.0, 1.0]).expect("valid"))
        .expect("sizes");
    f
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContagionReport {
    pub bp_w0: f64,
    pub p_w0: f64,
    pub nonfactive: bool,
    /// `Bp(w0) - p(w0)`
    pub gap: f64,
    /// `Bp(w0)` once `w0` is added to its own evidence set.
    pub bp_w0_with_actual: f64,
}

pub fn contagion_scenario(pkg: AlgebraPackage) -> Result<ContagionReport> {
    let f = contagion_frame();
    let p = f.proposition("p")?;
    let bp = modal::box_op(&f, "B", p, pkg)?.values()[0];
    let p0 = p.values()[0];

    let mut g = Frame::with_world_count(3)?;
    g.add_relation("B", Relation::from_neighbourhoods(3, &[vec![0, 1, 2], vec![1], vec![2]])?)?;
    let restored = modal::box_op(&g, "B", p, pkg)?.values()[0];
    Ok(ContagionReport {
        bp_w0: bp,
        p_w0: p0,
        nonfactive: bp > p0,
        gap: bp - p0,
        bp_w0_with_actual: restored,
    })
}

// ---------------------------------------------------------------------------
// Graded model-risk relation

/// A model specification: a data summary, a model family and parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelPoint {
    pub data: f64,
    pub family: String,
    pub theta: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentialWeights {
    pub lambda_data: f64,
    pub lambda_family: f64,
    pub lambda_theta: f64,
}

/// `γ = exp(-λ_D |Δdata| - λ_F [family differs] - λ_θ ‖Δθ‖²)`.
pub fn exponential_model_relation(points: &[ModelPoint], w: ExponentialWeights) -> Result<Relation> {
    if [w.lambda_data, w.lambda_family, w.lambda_theta]
        .iter()
        .any(|l| !(l.is_finite() && *l >= 0.0))
    {
        return Err(Error::InvalidSpec("relation weights must be non-negative".into()));
    }
    let matrix: Vec<Vec<f64>> = points
        .iter()
        .map(|a| {
            points
                .iter()
                .map(|b| {
                    if a.theta.len() != b.theta.len() {
                        return 0.0;
                    }
                    let dt: f64 = a.theta.iter().zip(&b.theta).map(|(x, y)| (x - y).powi(2)).sum();
                    let family = if a.family == b.family { 0.0 } else { 1.0 };
                    (-w.lambda_data * (a.data - b.data).abs() - w.lambda_family * family - w.lambda_theta * dt).exp()
                })
                .collect()
        })
        .collect();
    Relation::from_dense("model", &matrix)
}
