//! Evidence frames.
//!
//! A [`Frame`] holds an ordered world set, one evidence relation per named
//! standard, registered propositions and optional local measures. Relations
//! are stored by their nonzero entries: a missing pair has degree 0, which
//! contributes the neutral element to both the support infimum (`0 ⇒ a = 1`)
//! and the possibility supremum (`0 ⊗ a = 0`).
//!
//! Metric frames over regular grids use a [`GridRelation`] that stores the
//! tolerance-ball stencil instead of materialised rows.

use std::borrow::Cow;
use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraPackage, Proposition};
use crate::error::{Error, Result};

/// Tolerance on the total mass of a local measure.
pub const MEASURE_TOLERANCE: f64 = 1e-9;

// Relative slack on the closed-ball test so that grid points lying exactly on
// the boundary are not lost to rounding.
const BALL_SLACK: f64 = 1e-12;

/// JSON frame document, field names as exchanged on disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameDocument {
    pub worlds: Vec<String>,
    pub relations: BTreeMap<String, Vec<Vec<f64>>>,
    #[serde(default)]
    pub propositions: BTreeMap<String, Vec<f64>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub measures: BTreeMap<String, Vec<f64>>,
}

impl FrameDocument {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))
    }
}

/// One axis of a regular grid: `steps` equally spaced nodes from `lo` to `hi`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridAxis {
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
}

impl GridAxis {
    pub fn new(lo: f64, hi: f64, steps: usize) -> Self {
        GridAxis { lo, hi, steps }
    }

    pub fn step(&self) -> f64 {
        (self.hi - self.lo) / (self.steps - 1) as f64
    }

    pub fn coord(&self, i: usize) -> f64 {
        if i + 1 == self.steps {
            self.hi
        } else {
            self.lo + i as f64 * self.step()
        }
    }

    fn validate(&self) -> Result<()> {
        if self.steps < 2 {
            return Err(Error::InvalidSpec(format!("grid axis needs at least 2 steps, got {}", self.steps)));
        }
        if !(self.lo.is_finite() && self.hi.is_finite() && self.hi > self.lo) {
            return Err(Error::InvalidSpec(format!("grid axis [{}, {}] is empty", self.lo, self.hi)));
        }
        Ok(())
    }
}

/// Node layout of a regular grid. The first axis varies fastest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridGeometry {
    pub axes: Vec<GridAxis>,
}

impl GridGeometry {
    pub fn len(&self) -> usize {
        self.axes.iter().map(|a| a.steps).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dimension(&self) -> usize {
        self.axes.len()
    }

    pub fn indices(&self, mut w: usize) -> Vec<usize> {
        self.axes
            .iter()
            .map(|a| {
                let i = w % a.steps;
                w /= a.steps;
                i
            })
            .collect()
    }

    pub fn flat(&self, idx: &[usize]) -> usize {
        let mut w = 0;
        for (a, &i) in self.axes.iter().zip(idx).rev() {
            w = w * a.steps + i;
        }
        w
    }

    pub fn coords(&self, w: usize) -> Vec<f64> {
        self.indices(w)
            .iter()
            .zip(&self.axes)
            .map(|(&i, a)| a.coord(i))
            .collect()
    }
}

/// Parameters of a crisp weighted tolerance-ball frame on a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricFrameSpec {
    pub standard: String,
    /// Per-axis weights `a_i` of `d(w,v)^2 = Σ a_i (x_i - y_i)^2`.
    pub weights: Vec<f64>,
    /// Ball radius `β`. Zero is allowed and yields the identity relation.
    pub radius: f64,
    pub axes: Vec<GridAxis>,
}

impl MetricFrameSpec {
    pub fn dimension(&self) -> usize {
        self.axes.len()
    }

    fn validate(&self) -> Result<()> {
        if self.axes.is_empty() {
            return Err(Error::InvalidSpec("metric frame needs at least one axis".into()));
        }
        if self.weights.len() != self.axes.len() {
            return Err(Error::InvalidSpec(format!(
                "{} weights for {} axes",
                self.weights.len(),
                self.axes.len()
            )));
        }
        if let Some(a) = self.weights.iter().find(|a| !(a.is_finite() && **a > 0.0)) {
            return Err(Error::InvalidSpec(format!("metric weight {a} must be positive")));
        }
        if !(self.radius.is_finite() && self.radius >= 0.0) {
            return Err(Error::InvalidSpec(format!("radius {} must be non-negative", self.radius)));
        }
        self.axes.iter().try_for_each(GridAxis::validate)
    }
}

/// Crisp tolerance-ball relation on a grid, stored as a stencil of index offsets.
#[derive(Debug, Clone, PartialEq)]
pub struct GridRelation {
    geometry: GridGeometry,
    weights: Vec<f64>,
    radius: f64,
    // flattened, `dimension` entries per offset
    offsets: Vec<i64>,
}

impl GridRelation {
    pub fn new(geometry: GridGeometry, weights: Vec<f64>, radius: f64) -> Self {
        let dim = geometry.dimension();
        let steps: Vec<f64> = geometry.axes.iter().map(GridAxis::step).collect();
        let reach: Vec<i64> = (0..dim)
            .map(|i| {
                let r = (radius / (weights[i].sqrt() * steps[i])).floor() as i64 + 1;
                r.min(geometry.axes[i].steps as i64)
            })
            .collect();
        let mut rel = GridRelation {
            geometry,
            weights,
            radius,
            offsets: Vec::new(),
        };
        let mut cur = vec![0i64; dim];
        let mut offsets = Vec::new();
        rel.collect_offsets(0, &reach, &mut cur, &mut offsets);
        rel.offsets = offsets;
        rel
    }

    fn collect_offsets(&self, axis: usize, reach: &[i64], cur: &mut Vec<i64>, out: &mut Vec<i64>) {
        if axis == reach.len() {
            if self.within(cur) {
                out.extend_from_slice(cur);
            }
            return;
        }
        for k in -reach[axis]..=reach[axis] {
            cur[axis] = k;
            self.collect_offsets(axis + 1, reach, cur, out);
        }
        cur[axis] = 0;
    }

    /// Closed weighted ball test for an index offset.
    pub fn within(&self, offset: &[i64]) -> bool {
        let d2: f64 = offset
            .iter()
            .zip(&self.geometry.axes)
            .zip(&self.weights)
            .map(|((&k, axis), &a)| {
                let dx = k as f64 * axis.step();
                a * dx * dx
            })
            .sum();
        d2 <= self.radius * self.radius * (1.0 + BALL_SLACK)
    }

    pub fn geometry(&self) -> &GridGeometry {
        &self.geometry
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn stencil_len(&self) -> usize {
        self.offsets.len() / self.geometry.dimension()
    }

    fn degree(&self, w: usize, v: usize) -> f64 {
        let a = self.geometry.indices(w);
        let b = self.geometry.indices(v);
        let off: Vec<i64> = a.iter().zip(&b).map(|(&x, &y)| y as i64 - x as i64).collect();
        if self.within(&off) {
            1.0
        } else {
            0.0
        }
    }

    fn neighbours(&self, w: usize) -> Vec<usize> {
        let dim = self.geometry.dimension();
        let base = self.geometry.indices(w);
        let mut out = Vec::with_capacity(self.stencil_len());
        let mut idx = vec![0usize; dim];
        'next: for off in self.offsets.chunks_exact(dim) {
            for i in 0..dim {
                let t = base[i] as i64 + off[i];
                if t < 0 || t >= self.geometry.axes[i].steps as i64 {
                    continue 'next;
                }
                idx[i] = t as usize;
            }
            out.push(self.geometry.flat(&idx));
        }
        out.sort_unstable();
        out
    }
}

/// A fuzzy evidence relation `γ(w, v)`.
#[derive(Debug, Clone, PartialEq)]
pub enum Relation {
    /// Nonzero entries of each row, sorted by target world.
    Sparse { rows: Vec<Vec<(usize, f64)>> },
    Grid(GridRelation),
}

impl Relation {
    /// Build from a dense square matrix, row-indexed by source world.
    pub fn from_dense(standard: &str, matrix: &[Vec<f64>]) -> Result<Self> {
        let n = matrix.len();
        let mut rows = Vec::with_capacity(n);
        for (row_idx, row) in matrix.iter().enumerate() {
            if row.len() != n {
                return Err(Error::NonSquare {
                    standard: standard.to_string(),
                    row: row_idx,
                    len: row.len(),
                    expected: n,
                });
            }
            let mut entries = Vec::new();
            for (v, &g) in row.iter().enumerate() {
                crate::algebra::Degree::new(g)?;
                if g > 0.0 {
                    entries.push((v, g));
                }
            }
            rows.push(entries);
        }
        Ok(Relation::Sparse { rows })
    }

    /// Crisp relation from neighbourhood lists.
    pub fn from_neighbourhoods(n: usize, sets: &[Vec<usize>]) -> Result<Self> {
        if sets.len() != n {
            return Err(Error::WorldSetMismatch {
                left: n,
                right: sets.len(),
            });
        }
        let mut rows = Vec::with_capacity(n);
        for set in sets {
            let mut row: Vec<(usize, f64)> = Vec::with_capacity(set.len());
            for &v in set {
                if v >= n {
                    return Err(Error::UnknownWorld(format!("#{v}")));
                }
                row.push((v, 1.0));
            }
            row.sort_unstable_by_key(|e| e.0);
            row.dedup_by_key(|e| e.0);
            rows.push(row);
        }
        Ok(Relation::Sparse { rows })
    }

    pub fn universal(n: usize) -> Self {
        let all: Vec<usize> = (0..n).collect();
        Relation::Sparse {
            rows: (0..n).map(|_| all.iter().map(|&v| (v, 1.0)).collect()).collect(),
        }
    }

    pub fn identity(n: usize) -> Self {
        Relation::Sparse {
            rows: (0..n).map(|w| vec![(w, 1.0)]).collect(),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Relation::Sparse { rows } => rows.len(),
            Relation::Grid(g) => g.geometry.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Nonzero successors of `w` with their degrees, in world order.
    pub fn successors(&self, w: usize) -> Cow<'_, [(usize, f64)]> {
        match self {
            Relation::Sparse { rows } => Cow::Borrowed(&rows[w]),
            Relation::Grid(g) => Cow::Owned(g.neighbours(w).into_iter().map(|v| (v, 1.0)).collect()),
        }
    }

    pub fn degree(&self, w: usize, v: usize) -> f64 {
        match self {
            Relation::Sparse { rows } => rows[w]
                .binary_search_by_key(&v, |e| e.0)
                .map(|i| rows[w][i].1)
                .unwrap_or(0.0),
            Relation::Grid(g) => g.degree(w, v),
        }
    }

    pub fn is_crisp(&self) -> bool {
        match self {
            Relation::Sparse { rows } => rows.iter().flatten().all(|&(_, g)| g == 1.0),
            Relation::Grid(_) => true,
        }
    }

    /// Dense matrix form; only sensible for small frames.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let n = self.len();
        (0..n)
            .map(|w| {
                let mut row = vec![0.0; n];
                for &(v, g) in self.successors(w).iter() {
                    row[v] = g;
                }
                row
            })
            .collect()
    }
}

/// A local probability measure `μ_w`, stored by its nonzero weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalMeasure {
    weights: Vec<(usize, f64)>,
}

impl LocalMeasure {
    pub fn new(world_name: &str, n: usize, dense: &[f64]) -> Result<Self> {
        if dense.len() != n {
            return Err(Error::WorldSetMismatch {
                left: n,
                right: dense.len(),
            });
        }
        let mut weights = Vec::new();
        let mut sum = 0.0;
        for (v, &m) in dense.iter().enumerate() {
            if !(m.is_finite() && m >= 0.0) {
                return Err(Error::MeasureNotNormalized {
                    world: world_name.to_string(),
                    sum: m,
                });
            }
            sum += m;
            if m > 0.0 {
                weights.push((v, m));
            }
        }
        if (sum - 1.0).abs() > MEASURE_TOLERANCE {
            return Err(Error::MeasureNotNormalized {
                world: world_name.to_string(),
                sum,
            });
        }
        Ok(LocalMeasure { weights })
    }

    pub fn uniform_on(support: &[usize]) -> Self {
        let m = 1.0 / support.len() as f64;
        LocalMeasure {
            weights: support.iter().map(|&v| (v, m)).collect(),
        }
    }

    pub fn weights(&self) -> &[(usize, f64)] {
        &self.weights
    }

    /// Expectation of a proposition under this measure. Dividing by the
    /// summed mass makes a proposition that is 1 on the support expect to
    /// exactly 1.
    pub fn expect(&self, p: &Proposition) -> f64 {
        let total: f64 = self.weights.iter().map(|&(_, m)| m).sum();
        if total == 0.0 {
            return 0.0;
        }
        let mass: f64 = self.weights.iter().map(|&(v, m)| m * p.values()[v]).sum();
        (mass / total).min(1.0)
    }
}

/// Worlds, evidence relations, registered propositions and local measures.
#[derive(Debug, Clone)]
pub struct Frame {
    worlds: Vec<String>,
    index: HashMap<String, usize>,
    relations: BTreeMap<String, Relation>,
    propositions: BTreeMap<String, Proposition>,
    measures: BTreeMap<usize, LocalMeasure>,
    uniform_default: bool,
    geometry: Option<GridGeometry>,
}

impl Frame {
    pub fn new(worlds: Vec<String>) -> Result<Self> {
        if worlds.is_empty() {
            return Err(Error::Schema("frame needs at least one world".into()));
        }
        let mut index = HashMap::with_capacity(worlds.len());
        for (i, w) in worlds.iter().enumerate() {
            if index.insert(w.clone(), i).is_some() {
                return Err(Error::Schema(format!("duplicate world `{w}`")));
            }
        }
        Ok(Frame {
            worlds,
            index,
            relations: BTreeMap::new(),
            propositions: BTreeMap::new(),
            measures: BTreeMap::new(),
            uniform_default: false,
            geometry: None,
        })
    }

    /// Worlds named `w0, w1, ...`.
    pub fn with_world_count(n: usize) -> Result<Self> {
        Frame::new((0..n).map(|i| format!("w{i}")).collect())
    }

    pub fn len(&self) -> usize {
        self.worlds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.worlds.is_empty()
    }

    pub fn worlds(&self) -> &[String] {
        &self.worlds
    }

    pub fn world_index(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownWorld(name.to_string()))
    }

    pub fn world_name(&self, w: usize) -> &str {
        &self.worlds[w]
    }

    pub fn geometry(&self) -> Option<&GridGeometry> {
        self.geometry.as_ref()
    }

    pub fn add_relation(&mut self, standard: impl Into<String>, relation: Relation) -> Result<&mut Self> {
        if relation.len() != self.len() {
            return Err(Error::WorldSetMismatch {
                left: self.len(),
                right: relation.len(),
            });
        }
        self.relations.insert(standard.into(), relation);
        Ok(self)
    }

    pub fn add_proposition(&mut self, name: impl Into<String>, p: Proposition) -> Result<&mut Self> {
        if p.len() != self.len() {
            return Err(Error::WorldSetMismatch {
                left: self.len(),
                right: p.len(),
            });
        }
        self.propositions.insert(name.into(), p);
        Ok(self)
    }

    pub fn set_measure(&mut self, world: usize, measure: LocalMeasure) -> &mut Self {
        self.measures.insert(world, measure);
        self
    }

    /// Fall back to the uniform distribution on the crisp neighbourhood when a
    /// world has no explicit measure.
    pub fn with_uniform_local_measures(mut self, enabled: bool) -> Self {
        self.uniform_default = enabled;
        self
    }

    pub fn relation(&self, standard: &str) -> Result<&Relation> {
        self.relations
            .get(standard)
            .ok_or_else(|| Error::UnknownStandard(standard.to_string()))
    }

    pub fn standards(&self) -> impl Iterator<Item = &str> {
        self.relations.keys().map(String::as_str)
    }

    pub fn has_standard(&self, standard: &str) -> bool {
        self.relations.contains_key(standard)
    }

    pub fn proposition(&self, name: &str) -> Result<&Proposition> {
        self.propositions
            .get(name)
            .ok_or_else(|| Error::UnknownProposition(name.to_string()))
    }

    pub fn propositions(&self) -> &BTreeMap<String, Proposition> {
        &self.propositions
    }

    /// `μ_w`, explicit or (when enabled) uniform on the crisp `Γ(w)` of `standard`.
    pub fn local_measure(&self, standard: &str, w: usize) -> Result<Cow<'_, LocalMeasure>> {
        if let Some(m) = self.measures.get(&w) {
            return Ok(Cow::Borrowed(m));
        }
        if self.uniform_default {
            let support = crisp_neighbourhood(self, standard, w)?;
            if !support.is_empty() {
                return Ok(Cow::Owned(LocalMeasure::uniform_on(&support)));
            }
        }
        Err(Error::MissingMeasure(self.worlds[w].clone()))
    }

    pub fn check_proposition(&self, p: &Proposition) -> Result<()> {
        if p.len() != self.len() {
            return Err(Error::WorldSetMismatch {
                left: self.len(),
                right: p.len(),
            });
        }
        Ok(())
    }

    /// Dense document form, for frames small enough to write out.
    pub fn to_document(&self) -> FrameDocument {
        FrameDocument {
            worlds: self.worlds.clone(),
            relations: self
                .relations
                .iter()
                .map(|(k, r)| (k.clone(), r.to_dense()))
                .collect(),
            propositions: self
                .propositions
                .iter()
                .map(|(k, p)| (k.clone(), p.values().to_vec()))
                .collect(),
            measures: self
                .measures
                .iter()
                .map(|(&w, m)| {
                    let mut dense = vec![0.0; self.len()];
                    for &(v, x) in m.weights() {
                        dense[v] = x;
                    }
                    (self.worlds[w].clone(), dense)
                })
                .collect(),
        }
    }
}

/// Validate a frame document and build the frame.
pub fn build_finite_frame(doc: &FrameDocument) -> Result<Frame> {
    let mut frame = Frame::new(doc.worlds.clone())?;
    let n = frame.len();
    if doc.relations.is_empty() {
        return Err(Error::Schema("frame declares no relations".into()));
    }
    for (std, matrix) in &doc.relations {
        if matrix.len() != n {
            return Err(Error::NonSquare {
                standard: std.clone(),
                row: matrix.len(),
                len: matrix.len(),
                expected: n,
            });
        }
        frame.add_relation(std.clone(), Relation::from_dense(std, matrix)?)?;
    }
    for (name, values) in &doc.propositions {
        if values.len() != n {
            return Err(Error::Schema(format!(
                "proposition `{name}` has {} values for {n} worlds",
                values.len()
            )));
        }
        frame.add_proposition(name.clone(), Proposition::new(values.clone())?)?;
    }
    for (world, dense) in &doc.measures {
        let w = frame.world_index(world)?;
        let m = LocalMeasure::new(world, n, dense)?;
        frame.set_measure(w, m);
    }
    Ok(frame)
}

/// Parse and build a frame from JSON text.
pub fn frame_from_json(text: &str) -> Result<Frame> {
    build_finite_frame(&FrameDocument::from_json(text)?)
}

/// Grid frame whose worlds are the grid nodes and whose single relation is
/// the crisp weighted tolerance ball.
pub fn build_metric_frame(spec: &MetricFrameSpec) -> Result<Frame> {
    spec.validate()?;
    let geometry = GridGeometry {
        axes: spec.axes.clone(),
    };
    let names = (0..geometry.len())
        .map(|w| {
            let idx = geometry.indices(w);
            let parts: Vec<String> = idx.iter().map(usize::to_string).collect();
            format!("g{}", parts.join("_"))
        })
        .collect();
    let mut frame = Frame::new(names)?;
    let rel = GridRelation::new(geometry.clone(), spec.weights.clone(), spec.radius);
    frame.add_relation(spec.standard.clone(), Relation::Grid(rel))?;
    frame.geometry = Some(geometry);
    Ok(frame)
}

/// Computed properties of one evidence relation.
///
/// `reflexive` means `γ(w,w) = 1` everywhere and `symmetric` means
/// `γ(w,v) = γ(v,w)`. Seriality, transitivity and Euclideanness are read off
/// the support `{(w,v) : γ(w,v) > 0}`, which for crisp relations is the
/// relation itself. `fuzzy_transitive` checks `γ(w,u) ⊗ γ(u,v) ≤ γ(w,v)`
/// under the given package.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrameProfile {
    pub reflexive: bool,
    pub serial: bool,
    pub symmetric: bool,
    pub transitive: bool,
    pub euclidean: bool,
    pub equivalence: bool,
    pub fuzzy_transitive: bool,
    pub crisp: bool,
}

/// Rows of the modal package comparison a relation satisfies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PackageRow {
    S5,
    Kd45,
    Factive,
    NonFactive,
}

impl FrameProfile {
    pub fn package_rows(&self) -> Vec<PackageRow> {
        let mut rows = Vec::new();
        if self.reflexive && self.transitive && self.euclidean {
            rows.push(PackageRow::S5);
        }
        if self.serial && self.transitive && self.euclidean {
            rows.push(PackageRow::Kd45);
        }
        if self.reflexive {
            rows.push(PackageRow::Factive);
        }
        if self.fuzzy_transitive {
            rows.push(PackageRow::NonFactive);
        }
        rows
    }
}

pub fn classify_frame(frame: &Frame, standard: &str, pkg: AlgebraPackage) -> Result<FrameProfile> {
    let rel = frame.relation(standard)?;
    let n = frame.len();
    let rows: Vec<Cow<'_, [(usize, f64)]>> = (0..n).map(|w| rel.successors(w)).collect();

    let reflexive = (0..n).all(|w| rel.degree(w, w) == 1.0);
    let serial = rows.iter().all(|r| !r.is_empty());
    let symmetric = (0..n).all(|w| rows[w].iter().all(|&(v, g)| rel.degree(v, w) == g));
    let transitive = (0..n).all(|w| {
        rows[w]
            .iter()
            .all(|&(u, _)| rows[u].iter().all(|&(v, _)| rel.degree(w, v) > 0.0))
    });
    let euclidean = (0..n).all(|w| {
        rows[w]
            .iter()
            .all(|&(u, _)| rows[w].iter().all(|&(v, _)| rel.degree(u, v) > 0.0))
    });
    let fuzzy_transitive = (0..n).all(|w| {
        rows[w].iter().all(|&(u, gwu)| {
            rows[u]
                .iter()
                .all(|&(v, guv)| pkg.tnorm_raw(gwu, guv) <= rel.degree(w, v) + 1e-12)
        })
    });
    Ok(FrameProfile {
        reflexive,
        serial,
        symmetric,
        transitive,
        euclidean,
        equivalence: reflexive && symmetric && transitive,
        fuzzy_transitive,
        crisp: rel.is_crisp(),
    })
}

/// `Γ(w) = {v : γ(w,v) = 1}` for a crisp relation.
pub fn crisp_neighbourhood(frame: &Frame, standard: &str, w: usize) -> Result<Vec<usize>> {
    let rel = frame.relation(standard)?;
    if !rel.is_crisp() {
        return Err(Error::NotCrisp(standard.to_string()));
    }
    if w >= frame.len() {
        return Err(Error::UnknownWorld(format!("#{w}")));
    }
    Ok(rel.successors(w).iter().map(|&(v, _)| v).collect())
}
