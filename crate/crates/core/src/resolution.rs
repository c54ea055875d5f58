//! Splicing Hirzebruch–Jung strings into the covered graph.
//!
//! Every covered edge is a cyclic quotient point of the lifted surface. Its
//! resolution is a chain of rational curves whose decorations come from
//! [`hj_string`]; the chain inherits the edge's sign. All vertices of the
//! result carry the multiplicity of the pulled-back companion function,
//! which is what the self-intersection step needs.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::covering::CoveredGraph;
use crate::curvegraph::{DivisorClass, DivisorMult, DoublePoint, Sign, VertexKind};
use crate::numtheory::{gcd, gcd_all, hj_string, HJString, NumError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ResolveError {
    #[error("at `{edge}`: {source}")]
    Num {
        edge: String,
        #[source]
        source: NumError,
    },
    #[error("unsupported: - edge `{0}` shares a V(g) divisor")]
    GSharedMinus(String),
    #[error("- edge `{0}` has endpoints with different pairs")]
    PairMismatch(String),
    #[error("multiplicity mismatch at `{vertex}` along `{edge}`: string gives {string}, curve has {curve}")]
    MultiplicityMismatch {
        vertex: String,
        edge: String,
        string: i64,
        curve: i64,
    },
}

/// The chain replacing one covered edge, ordered from its first endpoint
/// to its second.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StringChain {
    pub origin: String,
    pub sign: Sign,
    /// `(k_i, mu_i)` for each new curve
    pub interior: Vec<(i64, i64)>,
    /// multiplicities at the first and at the second endpoint
    pub end_mults: (i64, i64),
    pub data: HJString,
}

impl StringChain {
    pub fn len(&self) -> usize {
        self.interior.len()
    }

    pub fn is_empty(&self) -> bool {
        self.interior.is_empty()
    }
}

/// Resolution string of the double point `dp`.
///
/// The first endpoint plays the curve at the `mu_0` end of the string and
/// the second endpoint the curve at the `mu_(l+1)` end.
pub fn edge_string(dp: &DoublePoint, origin: &str) -> Result<StringChain, ResolveError> {
    let (mf_a, pair_a) = dp.first;
    let (mf_b, pair_b) = dp.second;
    let num = |source| ResolveError::Num {
        edge: origin.to_string(),
        source,
    };
    let data = match dp.sign {
        Sign::Plus => {
            // shared f-divisor mf; the pairs are the other two divisors
            let d = gcd_all([mf_a, pair_a.m, pair_b.m]).max(1);
            hj_string(mf_a / d, pair_b.m / d, pair_a.m / d, 0, pair_b.n, pair_a.n).map_err(num)?
        }
        Sign::Minus => {
            if pair_a != pair_b {
                return Err(ResolveError::PairMismatch(origin.to_string()));
            }
            if pair_a.class == DivisorClass::G || pair_a.m < 1 {
                return Err(ResolveError::GSharedMinus(origin.to_string()));
            }
            let d = gcd_all([pair_a.m, mf_a, mf_b]);
            hj_string(pair_a.m / d, mf_b / d, mf_a / d, pair_a.n, 0, 0).map_err(num)?
        }
    };
    let interior = data
        .coeffs
        .iter()
        .copied()
        .zip(data.interior_mults().iter().copied())
        .collect();
    Ok(StringChain {
        origin: origin.to_string(),
        sign: dp.sign,
        interior,
        end_mults: (data.first_mult(), data.last_mult()),
        data,
    })
}

/// Multiplicity of the companion function on the strict transform of a
/// curve decorated `(mf; pair)`.
pub fn strict_transform_multiplicity(mf: i64, pair: DivisorMult) -> i64 {
    mf * pair.n / gcd(mf, pair.m)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MultVertexKind {
    /// strict transform of a compact curve
    Curve,
    Arrowhead,
    /// curve introduced by a resolution string
    String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultVertex {
    pub id: String,
    pub kind: MultVertexKind,
    pub mult: i64,
    pub genus: i64,
    /// Euler characteristic copied from the covering (curves only)
    pub euler: Option<i64>,
    /// `-k_i` for string curves
    pub selfint_raw: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultEdge {
    pub ends: (String, String),
    pub sign: Sign,
    /// covered edge this edge comes from
    pub origin: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MultGraph {
    pub vertices: BTreeMap<String, MultVertex>,
    pub edges: Vec<MultEdge>,
}

impl MultGraph {
    pub fn neighbours<'a>(
        &'a self,
        id: &'a str,
    ) -> impl Iterator<Item = (&'a MultVertex, Sign)> + 'a {
        self.edges.iter().filter_map(move |e| {
            let other = if e.ends.0 == id {
                &e.ends.1
            } else if e.ends.1 == id {
                &e.ends.0
            } else {
                return None;
            };
            Some((&self.vertices[other], e.sign))
        })
    }
}

fn string_vertex_id(edge: &str, position: usize) -> String {
    format!("{edge}.s{position}")
}

/// Replaces every covered edge by its string.
pub fn insert_strings(cg: &CoveredGraph) -> Result<MultGraph, ResolveError> {
    let mut mg = MultGraph::default();
    for v in cg.vertices.values() {
        let kind = match v.kind {
            VertexKind::Node => MultVertexKind::Curve,
            VertexKind::Arrowhead => MultVertexKind::Arrowhead,
        };
        mg.vertices.insert(
            v.id.clone(),
            MultVertex {
                id: v.id.clone(),
                kind,
                mult: strict_transform_multiplicity(v.mf, v.pair),
                genus: v.genus().unwrap_or(0),
                euler: v.euler,
                selfint_raw: None,
            },
        );
    }

    for e in &cg.edges {
        let a = &cg.vertices[&e.endpoints.0];
        let b = &cg.vertices[&e.endpoints.1];
        let dp = DoublePoint {
            sign: e.sign,
            first: (a.mf, a.pair),
            second: (b.mf, b.pair),
        };
        let chain = edge_string(&dp, &e.id)?;

        for (vertex, got) in [(&a.id, chain.end_mults.0), (&b.id, chain.end_mults.1)] {
            let curve = mg.vertices[vertex].mult;
            if curve != got {
                return Err(ResolveError::MultiplicityMismatch {
                    vertex: vertex.clone(),
                    edge: e.id.clone(),
                    string: got,
                    curve,
                });
            }
        }

        let mut previous = a.id.clone();
        for (i, &(k, mu)) in chain.interior.iter().enumerate() {
            let id = string_vertex_id(&e.id, i + 1);
            mg.vertices.insert(
                id.clone(),
                MultVertex {
                    id: id.clone(),
                    kind: MultVertexKind::String,
                    mult: mu,
                    genus: 0,
                    euler: None,
                    selfint_raw: Some(-k),
                },
            );
            mg.edges.push(MultEdge {
                ends: (previous, id.clone()),
                sign: e.sign,
                origin: e.id.clone(),
            });
            previous = id;
        }
        mg.edges.push(MultEdge {
            ends: (previous, b.id.clone()),
            sign: e.sign,
            origin: e.id.clone(),
        });
    }
    Ok(mg)
}
