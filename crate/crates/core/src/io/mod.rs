//! Presentation documents, fixtures and table emission.

mod document;
mod fixtures;
mod table;

pub use document::{AlgebraSection, FieldSection, JBasis, MatrixModel, PresentationDocument};
pub use fixtures::{fixture, fixture_model, FixtureSpec, FIXTURE_NAMES};
pub use table::{AlphaHeader, BetaHeader, JsonCell, TableDocument};
