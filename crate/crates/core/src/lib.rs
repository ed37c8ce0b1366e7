//! Graded epistemic modal operators for risk governance.
//!
//! Build a [`frame::Frame`], pick an [`algebra::AlgebraPackage`], and evaluate
//! support, possibility and diagnostic operators with [`modal`] or through the
//! formula language in [`formula`]. [`properties`] checks the algebraic bounds
//! on seeded random frames, [`applications`] holds the worked risk models and
//! [`governance`] the audit and commitment machinery built on top.

pub mod algebra;
pub mod applications;
pub mod error;
pub mod formula;
pub mod frame;
pub mod governance;
pub mod modal;
pub mod properties;

pub use algebra::{AlgebraPackage, Degree, Proposition, TNorm};
pub use error::{Error, Result};
pub use formula::{parse, Formula, ParseError};
pub use frame::{Frame, Relation};
