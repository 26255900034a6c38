//! Classification of objects into feature-based default inheritance
//! hierarchies.
//!
//! A hierarchy is compiled into the sets of features inheritable from each
//! class ([`hierarchy`]); an object is then inserted by choosing
//! superclasses that let it inherit as much as possible while listing
//! locally every feature a chosen class would get wrong ([`insertion`]).
//! [`insertion::greedy_insert`] is the fast approximation,
//! [`insertion::exact_insert`] the exhaustive oracle, and [`bench`] measures
//! the two against each other.
//!
//! Weights and payoffs are generic over [`Scalar`]; the unparameterised
//! names default to exact rationals.

pub mod bench;
pub mod cli;
pub mod features;
pub mod hierarchy;
pub mod insertion;
pub mod scalar;

pub use features::{clash, Attribute, Feature, FeatureSet, ObjectSpec, Value};
pub use hierarchy::{ClassDecl, CompiledClass, CompiledSet, Hierarchy, Origin};
pub use insertion::{InsertionError, InsertionResult, IterationRecord};
pub use scalar::Scalar;

/// Exact rational weights, the default scalar.
pub type Rational = num_rational::Ratio<i64>;

pub type RationalCompiledSet = CompiledSet<Rational>;
pub type RationalInsertion = InsertionResult<Rational>;

pub type FloatCompiledSet = CompiledSet<f64>;
pub type FloatInsertion = InsertionResult<f64>;
