//! Expected-dimension engine for limit linear series on nodal curves of
//! pseudocompact type.
//!
//! The pipeline is: parse and [`validate`] a chain graph, build a
//! [`ConcentratedFamily`], read off divisor ladders per collapsed edge,
//! enumerate multivanishing strata, and [`audit`] the dimension ledger.

pub mod audit;
pub mod binary;
pub mod cli;
pub mod curve;
pub mod divisor;
pub mod error;
pub mod family;
pub mod genericity;
pub mod linalg;
pub mod multidegree;
pub mod sample;
pub mod scalar;
pub mod strata;
pub mod tropical;

pub use audit::{audit, rho, AuditOptions, DimensionReport};
pub use curve::{parse_curve, validate, ChainGraph, Curve};
pub use error::{Error, Result};
pub use family::{concentrated_family, ConcentratedFamily};
pub use multidegree::AdmissibleMultidegree;
pub use scalar::Scalar;

/// Exact rationals backed by big integers.
pub type Rational = num_rational::BigRational;
pub type ProjectivePoint = binary::ProjectivePoint<Rational>;
pub type BinaryCurve = binary::BinaryCurve<Rational>;
