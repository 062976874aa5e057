//! Exact computation of quantum and symplectic cohomology for the total
//! space of the negative line bundle `O(-n) -> P^m`, with two independent
//! checks of the degree-one section counts: a torus-localization sum and a
//! Riemann–Roch computation on a blown-up surface.

pub mod error;
pub mod field;
pub mod grr;
pub mod gw;
pub mod linalg;
pub mod localization;
pub mod novikov;
pub mod pipeline;
mod poly;
pub mod quantum;

pub use error::{Error, Result};
pub use field::CoefficientField;
pub use linalg::{BasisLabel, CharPoly, LambdaMatrix};
pub use novikov::{GradingContext, NovikovScalar};
pub use pipeline::{compute_sh, Regime, RegimeKind, ShPresentation, ShRank, ShResult};
pub use quantum::{Generator, RingElement, RingPresentation};
