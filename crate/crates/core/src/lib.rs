//! Homogeneously ordered high-girth Cayley graphs, graph lifts, and a
//! simulator for constant-time distributed algorithms in the ID, OI and PO
//! models.

pub mod group;
pub mod generators;
pub mod graph;
pub mod homogeneity;
pub mod lifts;
pub mod localsim;
pub mod ramsey;
