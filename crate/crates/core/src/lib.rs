//! Computational toolkit for the corona problem on the unit disc.
//!
//! Modules follow the constructive steps: [`disc`] geometry, [`blaschke`]
//! products and the sector [`ladder`], circle [`measures`], [`hoffman`] limits
//! of composition sequences, and [`corona`] Bezout solutions with certificates.

pub mod blaschke;
pub mod corona;
pub mod disc;
pub mod error;
pub mod function;
pub mod hoffman;
pub mod ladder;
pub mod measures;
pub mod quadrature;

pub use blaschke::{BlaschkeProduct, DiscSequence, Sector};
pub use disc::{CirclePoint, DiscPoint, MobiusAut, OrthogonalArc};
pub use error::{Error, Result};
pub use function::FunctionSpec;
