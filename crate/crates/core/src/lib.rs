//! Numerical laboratory for the structuration of expectations.
//!
//! Two halves share this crate:
//!
//! * [`dynamics`] simulates the recursive, incursive and hyper-incursive
//!   logistic maps of double contingency, interaction, self-organization and
//!   organization, with seeded ensembles and survival sweeps.
//! * [`infotheory`], [`corpus`], [`linalg`] and [`pipeline`] measure signed
//!   three-way information (μ*), interaction information and redundancy
//!   among the rotated factor structure of a document corpus.

pub mod corpus;
pub mod dynamics;
pub mod infotheory;
pub mod linalg;
pub mod pipeline;
