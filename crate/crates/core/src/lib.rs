//! Plumbing graphs for Milnor fiber boundaries of non-isolated surface
//! singularities `f + z^k`, computed from a decorated curve graph.
//!
//! The stages are: validate the curve graph, build its cyclic covering,
//! splice Hirzebruch–Jung strings into every double point, and read off
//! self-intersections from the companion function's multiplicities.
//! [`pipeline::run`] chains them.

pub mod covering;
pub mod curvegraph;
pub mod dot;
pub mod format;
pub mod numtheory;
pub mod pipeline;
pub mod plumbing;
pub mod resolution;

pub use covering::{build_covering, CoverError, CoveredGraph};
pub use curvegraph::{CurveEdge, CurveGraph, CurveVertex, DivisorClass, DivisorMult, MinK, Sign};
pub use format::{
    emit_curve_graph, emit_plumb_graph, parse_curve_graph, parse_plumb_graph, ParseError,
};
pub use numtheory::{hj_string, neg_cont_frac, HJString, NumError};
pub use pipeline::{run, Artifacts, Format, Stage, StageError};
pub use plumbing::{
    canonicalize_signs, compute_self_intersections, homology_invariants, r0_flip, PlumbGraph,
};
pub use resolution::{insert_strings, MultGraph};
