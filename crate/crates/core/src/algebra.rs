//! Truth-degree algebra.
//!
//! Degrees live in `[0, 1]`. An [`AlgebraPackage`] fixes the t-norm used by
//! possibility operators and its residuated implication used by support
//! operators; negation is always the standard `1 - x`. Conjunction of
//! propositions is the pointwise minimum regardless of package.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance used when comparing degrees in law checks.
pub const LAW_TOLERANCE: f64 = 1e-12;

/// A truth degree in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct Degree(f64);

impl Degree {
    pub const ZERO: Degree = Degree(0.0);
    pub const ONE: Degree = Degree(1.0);

    /// Rejects NaN and anything outside `[0, 1]`.
    pub fn new(value: f64) -> Result<Self> {
        if value.is_nan() || !(0.0..=1.0).contains(&value) {
            return Err(Error::DegreeOutOfRange(value));
        }
        Ok(Degree(value))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_crisp(self) -> bool {
        self.0 == 0.0 || self.0 == 1.0
    }

    // Arithmetic inside the algebra can drift by an ulp (Łukasiewicz sums);
    // results are pulled back into the unit interval.
    pub(crate) fn clamped(value: f64) -> Self {
        Degree(value.clamp(0.0, 1.0))
    }
}

impl<'de> Deserialize<'de> for Degree {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = f64::deserialize(d)?;
        Degree::new(v).map_err(serde::de::Error::custom)
    }
}

impl TryFrom<f64> for Degree {
    type Error = Error;
    fn try_from(value: f64) -> Result<Self> {
        Degree::new(value)
    }
}

impl From<Degree> for f64 {
    fn from(d: Degree) -> f64 {
        d.0
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.6}", self.0)
    }
}

/// The t-norm families that can be selected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TNorm {
    GodelMin,
    Product,
    Lukasiewicz,
}

impl TNorm {
    pub const ALL: [TNorm; 3] = [TNorm::GodelMin, TNorm::Product, TNorm::Lukasiewicz];

    pub fn name(self) -> &'static str {
        match self {
            TNorm::GodelMin => "godel_min",
            TNorm::Product => "product",
            TNorm::Lukasiewicz => "lukasiewicz",
        }
    }
}

/// A t-norm together with its residuum and standard negation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AlgebraPackage {
    pub tnorm: TNorm,
}

impl Default for AlgebraPackage {
    fn default() -> Self {
        AlgebraPackage::GODEL
    }
}

impl AlgebraPackage {
    pub const GODEL: AlgebraPackage = AlgebraPackage {
        tnorm: TNorm::GodelMin,
    };
    pub const PRODUCT: AlgebraPackage = AlgebraPackage {
        tnorm: TNorm::Product,
    };
    pub const LUKASIEWICZ: AlgebraPackage = AlgebraPackage {
        tnorm: TNorm::Lukasiewicz,
    };

    pub fn all() -> [AlgebraPackage; 3] {
        TNorm::ALL.map(|tnorm| AlgebraPackage { tnorm })
    }

    pub fn name(&self) -> &'static str {
        self.tnorm.name()
    }

    /// `a ⊗ b`.
    pub fn tnorm(&self, a: Degree, b: Degree) -> Degree {
        Degree::clamped(self.tnorm_raw(a.0, b.0))
    }

    /// `a ⇒ b`, the residuum of the selected t-norm.
    pub fn implies(&self, a: Degree, b: Degree) -> Degree {
        Degree::clamped(self.implies_raw(a.0, b.0))
    }

    pub fn negate(&self, a: Degree) -> Degree {
        negate(a)
    }

    #[inline]
    pub(crate) fn tnorm_raw(&self, a: f64, b: f64) -> f64 {
        match self.tnorm {
            TNorm::GodelMin => a.min(b),
            TNorm::Product => a * b,
            // Unit cases are exact; `a + b - 1` rounds when one side is 1.
            TNorm::Lukasiewicz if a == 1.0 => b,
            TNorm::Lukasiewicz if b == 1.0 => a,
            TNorm::Lukasiewicz => (a - (1.0 - b)).max(0.0),
        }
    }

    #[inline]
    pub(crate) fn implies_raw(&self, a: f64, b: f64) -> f64 {
        if a <= b {
            return 1.0;
        }
        match self.tnorm {
            TNorm::GodelMin => b,
            TNorm::Product => b / a,
            TNorm::Lukasiewicz => ((1.0 - a) + b).min(1.0),
        }
    }
}

impl FromStr for AlgebraPackage {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let tnorm = match s.to_ascii_lowercase().as_str() {
            "godel" | "godel_min" | "godel-min" | "min" => TNorm::GodelMin,
            "product" | "goguen" => TNorm::Product,
            "lukasiewicz" | "luk" => TNorm::Lukasiewicz,
            other => return Err(Error::InvalidSpec(format!("unknown algebra package `{other}`"))),
        };
        Ok(AlgebraPackage { tnorm })
    }
}

impl fmt::Display for AlgebraPackage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Standard negation `1 - a`.
pub fn negate(a: Degree) -> Degree {
    Degree::clamped(1.0 - a.0)
}

/// A graded proposition: one degree per world of a frame, in world order.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Proposition {
    values: Vec<f64>,
}

impl<'de> Deserialize<'de> for Proposition {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let values = Vec::<f64>::deserialize(d)?;
        Proposition::new(values).map_err(serde::de::Error::custom)
    }
}

impl Proposition {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        for &v in &values {
            Degree::new(v)?;
        }
        Ok(Proposition { values })
    }

    pub fn constant(worlds: usize, d: Degree) -> Self {
        Proposition {
            values: vec![d.0; worlds],
        }
    }

    pub fn zero(worlds: usize) -> Self {
        Self::constant(worlds, Degree::ZERO)
    }

    pub fn from_degrees(degrees: impl IntoIterator<Item = Degree>) -> Self {
        Proposition {
            values: degrees.into_iter().map(|d| d.0).collect(),
        }
    }

    /// Crisp indicator of a predicate over world indices.
    pub fn indicator(worlds: usize, mut holds: impl FnMut(usize) -> bool) -> Self {
        Proposition {
            values: (0..worlds).map(|w| if holds(w) { 1.0 } else { 0.0 }).collect(),
        }
    }

    // Values computed by the operators are already in range.
    pub(crate) fn from_raw(values: Vec<f64>) -> Self {
        debug_assert!(values.iter().all(|v| (0.0..=1.0).contains(v)));
        Proposition { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, w: usize) -> Degree {
        Degree(self.values[w])
    }

    pub fn is_crisp(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0 || v == 1.0)
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }

    fn check_same(&self, other: &Proposition) -> Result<()> {
        if self.len() != other.len() {
            return Err(Error::WorldSetMismatch {
                left: self.len(),
                right: other.len(),
            });
        }
        Ok(())
    }

    fn zip_with(&self, other: &Proposition, f: impl Fn(f64, f64) -> f64) -> Result<Proposition> {
        self.check_same(other)?;
        Ok(Proposition::from_raw(
            self.values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        ))
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Proposition {
        Proposition::from_raw(self.values.iter().map(|&v| f(v).clamp(0.0, 1.0)).collect())
    }

    /// Pointwise minimum.
    pub fn meet(&self, other: &Proposition) -> Result<Proposition> {
        self.zip_with(other, f64::min)
    }

    /// Pointwise maximum.
    pub fn join(&self, other: &Proposition) -> Result<Proposition> {
        self.zip_with(other, f64::max)
    }

    pub fn negate(&self) -> Proposition {
        self.map(|v| 1.0 - v)
    }

    /// `U(p) = p ∧ ¬p`.
    pub fn structural_uncertainty(&self) -> Proposition {
        self.map(|v| v.min(1.0 - v))
    }

    /// Pointwise truncated difference `max(0, self - other)`.
    pub fn monus(&self, other: &Proposition) -> Result<Proposition> {
        self.zip_with(other, |a, b| (a - b).max(0.0))
    }

    /// Largest amount by which `self` exceeds `other` anywhere (0 when `self ≤ other`).
    pub fn excess_over(&self, other: &Proposition) -> Result<f64> {
        self.check_same(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&a, &b)| a - b)
            .fold(0.0, f64::max))
    }

    /// Pointwise `self ≤ other` up to `tol`.
    pub fn leq(&self, other: &Proposition, tol: f64) -> Result<bool> {
        Ok(self.excess_over(other)? <= tol)
    }

    /// Largest pointwise absolute difference.
    pub fn max_abs_diff(&self, other: &Proposition) -> Result<f64> {
        self.check_same(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&a, &b)| (a - b).abs())
            .fold(0.0, f64::max))
    }
}

/// Sup over a registered family of `U(p)(w)`; an empty family gives 0.
pub fn global_uncertainty<'a>(
    props: impl IntoIterator<Item = &'a Proposition>,
    w: usize,
) -> Degree {
    let sup = props
        .into_iter()
        .map(|p| {
            let v = p.values[w];
            v.min(1.0 - v)
        })
        .fold(0.0, f64::max);
    Degree(sup)
}
