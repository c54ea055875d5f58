//! The cyclic covering of the curve graph: one vertex per connected
//! component over each curve, one edge per preimage of each double point.

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::curvegraph::{CurveGraph, CurveVertex, DivisorMult, GraphError, Sign, VertexKind};
use crate::numtheory::{gcd, gcd_all, lcm};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoverError {
    #[error("unrealizable decoration at `{subject}`: {reason}")]
    Unrealizable { subject: String, reason: String },
    #[error("input graph is invalid: {0}")]
    Invalid(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

fn unrealizable(subject: &str, reason: impl Into<String>) -> CoverError {
    CoverError::Unrealizable {
        subject: subject.to_string(),
        reason: reason.into(),
    }
}

/// Number of connected components over the curve of `v`.
///
/// For arrowheads the same gcd is taken with `pair.m = 0` and no switches.
pub fn component_count(g: &CurveGraph, v: &str) -> Result<i64, GraphError> {
    let vertex = g.vertex(v)?;
    let mut values = vec![vertex.mf, vertex.pair.m];
    for e in g.incident_edges(v) {
        values.push(g.third_divisor(e, v)?.m);
    }
    // switches only matter modulo gcd(mf, pair.m), which the gcd absorbs
    values.extend(vertex.switches.iter().copied());
    Ok(gcd_all(values))
}

/// Number of preimages of one double point of edge `e`.
pub fn edge_fiber_count(g: &CurveGraph, e: &str) -> Result<i64, GraphError> {
    let edge = g.edge(e)?;
    Ok(g.double_point(edge)?.fiber_count())
}

/// Common Euler characteristic of the components over the curve of node `v`.
pub fn euler_char(g: &CurveGraph, v: &str) -> Result<i64, CoverError> {
    let vertex = g.vertex(v)?;
    if vertex.kind != VertexKind::Node {
        return Err(CoverError::Invalid(format!(
            "`{v}` is an arrowhead and has no Euler characteristic"
        )));
    }
    let n_c = component_count(g, v)?;
    let total = euler_total(g, vertex)?;
    if n_c == 0 || total % n_c != 0 {
        return Err(unrealizable(
            v,
            format!("{total} is not divisible by n_C = {n_c}"),
        ));
    }
    let chi = total / n_c;
    if chi % 2 != 0 {
        return Err(unrealizable(v, format!("odd Euler characteristic {chi}")));
    }
    if chi > 2 {
        return Err(unrealizable(
            v,
            format!("Euler characteristic {chi} exceeds 2"),
        ));
    }
    Ok(chi)
}

/// `n_C * chi` from the base data.
fn euler_total(g: &CurveGraph, v: &CurveVertex) -> Result<i64, GraphError> {
    let degree = g.edge_degree(&v.id);
    let mut total = (2 - 2 * v.genus - degree) * gcd(v.mf, v.pair.m);
    for e in g.incident_edges(&v.id) {
        total += e.count * g.double_point(e)?.fiber_count();
    }
    Ok(total)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoveredVertex {
    pub id: String,
    pub base: String,
    pub index: i64,
    /// size of the fiber this vertex belongs to
    pub fiber: i64,
    pub kind: VertexKind,
    pub mf: i64,
    pub pair: DivisorMult,
    /// `None` for arrowheads
    pub euler: Option<i64>,
}

impl CoveredVertex {
    /// Genus of the component, `1 - chi/2`.
    pub fn genus(&self) -> Option<i64> {
        self.euler.map(|chi| 1 - chi / 2)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoveredEdge {
    pub id: String,
    pub base: String,
    /// which of the `count` parallel double points of the base edge
    pub parallel: i64,
    pub index: i64,
    pub fiber: i64,
    pub endpoints: (String, String),
    pub sign: Sign,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoveredGraph {
    pub base: CurveGraph,
    pub vertices: BTreeMap<String, CoveredVertex>,
    pub edges: Vec<CoveredEdge>,
}

fn copy_id(base: &str, index: i64) -> String {
    format!("{base}.{index}")
}

fn edge_copy_id(base: &str, count: i64, parallel: i64, index: i64) -> String {
    if count == 1 {
        format!("{base}.{index}")
    } else {
        format!("{base}.{parallel}.{index}")
    }
}

/// Builds the covering from the fiber sizes, switches and attachment offsets.
pub fn build_covering(g: &CurveGraph) -> Result<CoveredGraph, CoverError> {
    let report = g.validate();
    if let Some(issue) = report.errors().next() {
        return Err(CoverError::Invalid(issue.to_string()));
    }

    let mut fibers = HashMap::new();
    let mut vertices = BTreeMap::new();
    for v in g.vertices.values() {
        let n = component_count(g, &v.id)?;
        let euler = match v.kind {
            VertexKind::Node => Some(euler_char(g, &v.id)?),
            VertexKind::Arrowhead => None,
        };
        fibers.insert(v.id.as_str(), n);
        for index in 0..n {
            let id = copy_id(&v.id, index);
            vertices.insert(
                id.clone(),
                CoveredVertex {
                    id,
                    base: v.id.clone(),
                    index,
                    fiber: n,
                    kind: v.kind,
                    mf: v.mf,
                    pair: v.pair,
                    euler,
                },
            );
        }
    }

    let mut edges = Vec::new();
    for e in g.edges.values() {
        let (a, b) = (&e.endpoints.0, &e.endpoints.1);
        let (n_a, n_b) = (fibers[a.as_str()], fibers[b.as_str()]);
        let d = g.double_point(e)?.fiber_count();
        if d % lcm(n_a, n_b) != 0 {
            return Err(unrealizable(
                &e.id,
                format!("d_e = {d} is not a multiple of lcm({n_a}, {n_b})"),
            ));
        }
        for parallel in 0..e.count {
            for index in 0..d {
                edges.push(CoveredEdge {
                    id: edge_copy_id(&e.id, e.count, parallel, index),
                    base: e.id.clone(),
                    parallel,
                    index,
                    fiber: d,
                    endpoints: (
                        copy_id(a, (e.attach.0 + index).rem_euclid(n_a)),
                        copy_id(b, (e.attach.1 + index).rem_euclid(n_b)),
                    ),
                    sign: e.sign,
                });
            }
        }
    }
    edges.sort_by(|x, y| x.id.cmp(&y.id));

    Ok(CoveredGraph {
        base: g.clone(),
        vertices,
        edges,
    })
}

impl CoveredGraph {
    pub fn fiber_over_vertex(&self, base: &str) -> Vec<&CoveredVertex> {
        self.vertices.values().filter(|v| v.base == base).collect()
    }

    pub fn fiber_over_edge(&self, base: &str) -> Vec<&CoveredEdge> {
        self.edges.iter().filter(|e| e.base == base).collect()
    }

    /// Number of covered edge ends at vertex `id`.
    pub fn degree(&self, id: &str) -> i64 {
        self.edges
            .iter()
            .map(|e| (e.endpoints.0 == id) as i64 + (e.endpoints.1 == id) as i64)
            .sum()
    }

    /// Image of a covered vertex under the generator of the cyclic action.
    pub fn shift_vertex(&self, id: &str) -> Option<String> {
        let v = self.vertices.get(id)?;
        Some(copy_id(&v.base, (v.index + 1) % v.fiber))
    }

    /// Checks that shifting every fiber by one maps edges onto edges with
    /// shifted endpoints.
    pub fn check_equivariance(&self) -> Result<(), String> {
        let by_key: HashMap<(&str, i64, i64), &CoveredEdge> = self
            .edges
            .iter()
            .map(|e| ((e.base.as_str(), e.parallel, e.index), e))
            .collect();
        for e in &self.edges {
            let next = by_key
                .get(&(e.base.as_str(), e.parallel, (e.index + 1) % e.fiber))
                .ok_or_else(|| format!("edge {} has no successor", e.id))?;
            let a = self
                .shift_vertex(&e.endpoints.0)
                .ok_or("dangling endpoint")?;
            let b = self
                .shift_vertex(&e.endpoints.1)
                .ok_or("dangling endpoint")?;
            if next.endpoints != (a, b) || next.sign != e.sign {
                return Err(format!("shift of {} is not {}", e.id, next.id));
            }
        }
        for v in self.vertices.values() {
            let shifted = self.shift_vertex(&v.id).expect("vertex exists");
            if !self.vertices.contains_key(&shifted) {
                return Err(format!("shift of {} leaves the graph", v.id));
            }
        }
        Ok(())
    }

    /// Recomputes `n_C * chi` at every node copy from its covered degree and
    /// compares with the recorded Euler characteristic.
    pub fn riemann_hurwitz_audit(&self) -> Result<(), String> {
        for v in self.vertices.values() {
            let Some(chi) = v.euler else { continue };
            let base = &self.base.vertices[&v.base];
            let degree = self.base.edge_degree(&v.base);
            let generic = (2 - 2 * base.genus - degree) * gcd(base.mf, base.pair.m);
            let local = generic + v.fiber * self.degree(&v.id);
            if local != v.fiber * chi {
                return Err(format!(
                    "{}: n_C*chi = {} but covered degree gives {}",
                    v.id,
                    v.fiber * chi,
                    local
                ));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvegraph::CurveEdge;

    fn graph(vertices: Vec<CurveVertex>, edges: Vec<CurveEdge>) -> CurveGraph {
        let mut g = CurveGraph::new("t");
        for v in vertices {
            g.add_vertex(v).unwrap();
        }
        for e in edges {
            g.add_edge(e).unwrap();
        }
        g
    }

    #[test]
    fn component_counts() {
        // (4;6,1) with a + edge to (4;2,1): third m = 2
        let g = graph(
            vec![
                CurveVertex::node("a", 4, 6, 1, 0),
                CurveVertex::node("b", 4, 2, 1, 0),
            ],
            vec![CurveEdge::new("e", "a", "b", Sign::Plus)],
        );
        assert_eq!(component_count(&g, "a").unwrap(), 2);
        let g = graph(vec![CurveVertex::node("a", 2, 3, 1, 0)], vec![]);
        assert_eq!(component_count(&g, "a").unwrap(), 1);
        let g = graph(
            vec![CurveVertex::node("a", 4, 6, 1, 1).with_switches(vec![1, 0])],
            vec![],
        );
        assert_eq!(component_count(&g, "a").unwrap(), 1);
    }

    #[test]
    fn edge_fibers() {
        let g = graph(
            vec![
                CurveVertex::node("a", 4, 6, 1, 0),
                CurveVertex::node("b", 4, 2, 1, 0),
            ],
            vec![CurveEdge::new("e", "a", "b", Sign::Plus)],
        );
        assert_eq!(edge_fiber_count(&g, "e").unwrap(), 2);
        let g = graph(
            vec![
                CurveVertex::node("a", 2, 3, 1, 0),
                CurveVertex::arrowhead("x", 2),
            ],
            vec![CurveEdge::new("e", "a", "x", Sign::Plus)],
        );
        assert_eq!(edge_fiber_count(&g, "e").unwrap(), 1);
        let g = graph(
            vec![
                CurveVertex::node("a", 6, 9, 1, 0),
                CurveVertex::node("b", 3, 9, 1, 0),
            ],
            vec![CurveEdge::new("e", "a", "b", Sign::Minus)],
        );
        assert_eq!(edge_fiber_count(&g, "e").unwrap(), 3);
    }

    #[test]
    fn euler_characteristics() {
        let g = graph(vec![CurveVertex::node("a", 2, 3, 1, 0)], vec![]);
        assert_eq!(euler_char(&g, "a").unwrap(), 2);

        let g = graph(
            vec![
                CurveVertex::node("a", 4, 6, 1, 0),
                CurveVertex::node("b", 4, 2, 1, 0),
            ],
            vec![CurveEdge::new("e", "a", "b", Sign::Plus)],
        );
        assert_eq!(euler_char(&g, "a").unwrap(), 2);

        let g = graph(
            vec![
                CurveVertex::node("a", 2, 3, 1, 0),
                CurveVertex::arrowhead("x", 2),
                CurveVertex::arrowhead("y", 2),
            ],
            vec![
                CurveEdge::new("e1", "a", "x", Sign::Plus),
                CurveEdge::new("e2", "a", "y", Sign::Plus),
            ],
        );
        assert_eq!(euler_char(&g, "a").unwrap(), 2);
    }

    #[test]
    fn unrealizable_euler() {
        let g = graph(
            vec![CurveVertex::node("a", 4, 6, 1, 1).with_switches(vec![1, 0])],
            vec![],
        );
        assert_eq!(euler_char(&g, "a").unwrap(), 0);
        // (2-1)*gcd(2,4) + d_e = 2 + 1 = 3, n_C = 1: odd
        let g = graph(
            vec![
                CurveVertex::node("a", 2, 4, 1, 0),
                CurveVertex::node("b", 2, 1, 1, 0),
            ],
            vec![CurveEdge::new("e", "a", "b", Sign::Plus)],
        );
        assert!(matches!(
            euler_char(&g, "a"),
            Err(CoverError::Unrealizable { .. })
        ));
        assert!(matches!(
            build_covering(&g),
            Err(CoverError::Unrealizable { .. })
        ));
        // (2-0)*gcd(2,4) = 4, n_C = 2: chi = 2 is fine, but a lone vertex of
        // gcd 4 with n_C = 1 gives chi = 4 > 2
        let g = graph(
            vec![CurveVertex::node("a", 4, 4, 1, 1).with_switches(vec![1, 1])],
            vec![],
        );
        assert_eq!(euler_char(&g, "a").unwrap(), 0);
        let g = graph(vec![CurveVertex::node("a", 4, 8, 1, 0)], vec![]);
        assert_eq!(euler_char(&g, "a").unwrap(), 2);
    }

    #[test]
    fn euler_char_rejects_arrowheads() {
        let g = graph(vec![CurveVertex::arrowhead("x", 2)], vec![]);
        assert!(matches!(euler_char(&g, "x"), Err(CoverError::Invalid(_))));
    }

    #[test]
    fn mixed_fiber_sizes() {
        // n_v = 2, n_w = 3, d_(vw) = 6
        let g = graph(
            vec![
                CurveVertex::node("v", 6, 6, 1, 0),
                CurveVertex::node("w", 6, 6, 1, 0),
                CurveVertex::node("x1", 6, 2, 1, 0),
                CurveVertex::node("x2", 6, 2, 1, 0),
                CurveVertex::node("y1", 6, 3, 1, 0),
                CurveVertex::node("y2", 6, 3, 1, 0),
            ],
            vec![
                CurveEdge::new("vw", "v", "w", Sign::Plus),
                CurveEdge::new("vx1", "v", "x1", Sign::Plus),
                CurveEdge::new("vx2", "v", "x2", Sign::Plus),
                CurveEdge::new("wy1", "w", "y1", Sign::Plus),
                CurveEdge::new("wy2", "w", "y2", Sign::Plus),
            ],
        );
        let n = |v| component_count(&g, v).unwrap();
        assert_eq!((n("v"), n("w")), (2, 3));
        assert_eq!(edge_fiber_count(&g, "vw").unwrap(), 6);
        let cover = build_covering(&g).unwrap();
        let fiber = cover.fiber_over_edge("vw");
        assert_eq!(fiber.len(), 6);
        for e in fiber {
            assert_eq!(e.endpoints.0, format!("v.{}", e.index % 2));
            assert_eq!(e.endpoints.1, format!("w.{}", e.index % 3));
        }
        assert!(cover
            .vertices
            .values()
            .all(|v| v.euler.is_none_or(|chi| chi == 2)));
        cover.check_equivariance().unwrap();
        cover.riemann_hurwitz_audit().unwrap();
    }

    #[test]
    fn attach_offsets() {
        let g = graph(
            vec![
                CurveVertex::node("a", 6, 6, 1, 0),
                CurveVertex::node("b", 6, 6, 1, 0),
            ],
            vec![CurveEdge::new("e", "a", "b", Sign::Plus).with_attach(1, -2)],
        );
        let cover = build_covering(&g).unwrap();
        let fiber = cover.fiber_over_edge("e");
        assert_eq!(fiber.len(), 6);
        for e in fiber {
            assert_eq!(e.endpoints.0, format!("a.{}", (1 + e.index) % 6));
            assert_eq!(e.endpoints.1, format!("b.{}", (4 + e.index) % 6));
        }
        cover.check_equivariance().unwrap();
        cover.riemann_hurwitz_audit().unwrap();
    }

    #[test]
    fn isolated_and_parallel() {
        let g = graph(vec![CurveVertex::node("a", 2, 3, 1, 0)], vec![]);
        let cover = build_covering(&g).unwrap();
        assert_eq!(cover.vertices.len(), 1);
        assert!(cover.edges.is_empty());

        // n_a = n_b = 1 and d_(ab) = 2
        for count in [1, 2] {
            let g = graph(
                vec![
                    CurveVertex::node("a", 2, 2, 1, 0),
                    CurveVertex::node("b", 2, 2, 1, 0),
                    CurveVertex::node("c1", 2, 1, 1, 0),
                    CurveVertex::node("c2", 2, 1, 1, 0),
                    CurveVertex::node("c3", 2, 1, 1, 0),
                    CurveVertex::node("c4", 2, 1, 1, 0),
                ],
                vec![
                    CurveEdge::new("ab", "a", "b", Sign::Plus).with_count(count),
                    CurveEdge::new("ac1", "a", "c1", Sign::Plus),
                    CurveEdge::new("ac3", "a", "c3", Sign::Plus),
                    CurveEdge::new("bc2", "b", "c2", Sign::Plus),
                    CurveEdge::new("bc4", "b", "c4", Sign::Plus),
                ],
            );
            assert_eq!(component_count(&g, "a").unwrap(), 1);
            assert_eq!(component_count(&g, "b").unwrap(), 1);
            let cover = build_covering(&g).unwrap();
            let fiber = cover.fiber_over_edge("ab");
            assert_eq!(fiber.len() as i64, 2 * count);
            assert!(fiber
                .iter()
                .all(|e| e.endpoints == ("a.0".to_string(), "b.0".to_string())));
            if count == 2 {
                assert!(cover.edges.iter().any(|e| e.id == "ab.1.0"));
            }
            cover.check_equivariance().unwrap();
            cover.riemann_hurwitz_audit().unwrap();
        }
    }
}
