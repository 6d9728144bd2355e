//! Exact tools for weighted fractional matchings in colored hypergraphs:
//! LP values with certificates, rainbow matching search, the complex of
//! edge sets with small fractional matching number and its collapses,
//! partition matroids, and extremal families.

pub mod complex;
pub mod constructions;
pub mod hypergraph;
pub mod instance;
pub mod lp;
pub mod matroid;
pub mod rainbow;
pub mod rational;

pub use hypergraph::{unit_weights, ColoredFamily, CoreError, EdgeSet, Hypergraph, WeightSystem};
pub use instance::{Instance, InstanceError};
pub use lp::{
    dual_is_unique, matching_number, nu_star, tau_star, DualUniqueness, FractionalCover,
    FractionalMatching, LpError, LpResult,
};
pub use rational::Rational;
