//! Extending generalized splines on edge-labeled graphs over the integers.
//!
//! A graph carries a submodule `m_v·Z` at every vertex and a quotient
//! `Z/r_e·Z` at every edge. A spline is an integer vertex labeling whose
//! entries lie in their vertex modules and agree modulo every edge label.
//! This crate builds flow-up bases of the spline module three ways:
//!
//! * closed forms on path graphs ([`path_basis`]),
//! * the longest-trails technique on arbitrary graphs ([`longest_basis`]),
//! * the integer kernel of the extending GKM matrix ([`gkm`]),
//!
//! and certifies all of them against a brute-force [`oracle`].
//!
//! Every algorithm is generic over an exact integer [`Scalar`]. The
//! aliases at the crate root fix the scalar to [`Int`] (arbitrary
//! precision), which is what the CLI uses.
//!
//! Vertex indices are 0-based throughout the Rust API. The JSON documents
//! and the CLI use 1-based indices.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_integer::Integer;
use num_traits::{FromPrimitive, Signed, ToPrimitive};

pub mod arith;
pub mod cli;
pub mod error;
pub mod gkm;
pub mod graph;
pub mod lattice;
pub mod longest_basis;
pub mod oracle;
pub mod path_basis;
pub mod spline;

pub use error::{Error, Result};

/// Exact integer scalar the algorithms are written against.
///
/// Implemented for every signed integer type of `num`, in particular
/// `i64`, `i128` and [`num_bigint::BigInt`]. Fixed-width types overflow
/// on large lcm chains; use [`Int`] unless the labels are known to be small.
pub trait Scalar:
    Integer + Signed + Clone + Debug + Display + FromPrimitive + ToPrimitive + Hash + Send + Sync + 'static
{
}

impl<T> Scalar for T where
    T: Integer + Signed + Clone + Debug + Display + FromPrimitive + ToPrimitive + Hash + Send + Sync + 'static
{
}

/// Arbitrary-precision integer used by the concrete aliases below.
pub type Int = num_bigint::BigInt;

pub type Congruence = arith::Congruence<Int>;
pub type Graph = graph::EdgeLabeledGraph<Int>;
pub type Spline = spline::Spline<Int>;
pub type FlowUpClass = spline::FlowUpClass<Int>;
pub type FlowUpBasis = spline::FlowUpBasis<Int>;
pub type PathSpec = path_basis::PathSpec<Int>;
pub type CycleSpec = longest_basis::CycleSpec<Int>;
pub type Matrix = lattice::Matrix<Int>;
pub type LatticeBasis = lattice::LatticeBasis<Int>;
pub type GkmMatrix = gkm::GkmMatrix<Int>;

/// Converts a machine integer into any scalar. Panics only if `T` cannot
/// represent `v`, which never happens for the signed types `Scalar` targets
/// at the magnitudes used for labels.
pub(crate) fn from_i64<T: Scalar>(v: i64) -> T {
    T::from_i64(v).expect("scalar type cannot represent an i64 label")
}

/// Builds a vector of scalars from machine integers; handy in tests and examples.
pub fn ints<T: Scalar>(values: &[i64]) -> Vec<T> {
    values.iter().map(|&v| from_i64(v)).collect()
}
