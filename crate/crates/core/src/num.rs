//! Scalar abstractions for the numeric passes.
//!
//! Two families of scalars appear in the analytics. Tally passes (recursive
//! dependency/use counts and chain lengths) only add and compare, so they run
//! over [`Count`]; instantiated at `f64` they saturate to `+inf` instead of
//! wrapping, instantiated at `BigUint` they are exact. Score formulas and
//! PageRank need full floating-point arithmetic and run over [`Real`].

use std::iter::Sum;
use std::ops::AddAssign;

use num_bigint::BigUint;
use num_traits::{Float, FromPrimitive, One, Zero};

/// Additive tally scalar.
///
/// Requirements: a zero, a one, addition, and a total order on the values
/// actually produced (tallies are never NaN). `f64` overflows gracefully to
/// `+inf`; [`BigUint`] never overflows.
pub trait Count: Clone + PartialOrd + Zero + One {}

impl Count for f32 {}
impl Count for f64 {}
impl Count for BigUint {}

/// Floating-point scalar for score formulas and PageRank iterations.
pub trait Real: Count + Float + FromPrimitive + AddAssign + Sum {}

impl Real for f32 {}
impl Real for f64 {}
