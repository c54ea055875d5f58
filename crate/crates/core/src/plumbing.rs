//! Plumbing graphs: self-intersections from multiplicities, the
//! intersection matrix and its invariants, and the orientation move that
//! toggles the signs around a vertex.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::curvegraph::Sign;
use crate::resolution::{MultGraph, MultVertexKind};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlumbError {
    #[error("non-integral self-intersection at `{vertex}`: {sum} is not divisible by multiplicity {mult}")]
    NonIntegral { vertex: String, sum: i64, mult: i64 },
    #[error("vertex `{0}` has multiplicity {1}, expected at least 1")]
    BadMultiplicity(String, i64),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("loop at `{0}`")]
    Loop(String),
    #[error("negative genus at `{0}`")]
    NegativeGenus(String),
}

/// Parent of each vertex in a spanning forest, with the edge index used.
type ParentMap<'a> = BTreeMap<&'a str, Option<(&'a str, usize)>>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlumbVertex {
    pub id: String,
    pub euler: i64,
    pub genus: i64,
}

/// An edge with its endpoints stored in sorted order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct PlumbEdge {
    pub a: String,
    pub b: String,
    pub sign: Sign,
}

impl PlumbEdge {
    pub fn new(a: impl Into<String>, b: impl Into<String>, sign: Sign) -> Self {
        let (a, b) = (a.into(), b.into());
        if a <= b {
            PlumbEdge { a, b, sign }
        } else {
            PlumbEdge { a: b, b: a, sign }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PlumbGraph {
    pub vertices: BTreeMap<String, PlumbVertex>,
    /// kept sorted
    pub edges: Vec<PlumbEdge>,
}

impl PlumbGraph {
    pub fn add_vertex(
        &mut self,
        id: impl Into<String>,
        euler: i64,
        genus: i64,
    ) -> Result<(), PlumbError> {
        let id = id.into();
        if genus < 0 {
            return Err(PlumbError::NegativeGenus(id));
        }
        self.vertices
            .insert(id.clone(), PlumbVertex { id, euler, genus });
        Ok(())
    }

    pub fn add_edge(&mut self, a: &str, b: &str, sign: Sign) -> Result<(), PlumbError> {
        for v in [a, b] {
            if !self.vertices.contains_key(v) {
                return Err(PlumbError::UnknownVertex(v.to_string()));
            }
        }
        if a == b {
            return Err(PlumbError::Loop(a.to_string()));
        }
        let edge = PlumbEdge::new(a, b, sign);
        let at = self.edges.partition_point(|e| *e <= edge);
        self.edges.insert(at, edge);
        Ok(())
    }

    pub fn minus_count(&self) -> usize {
        self.edges.iter().filter(|e| e.sign == Sign::Minus).count()
    }

    fn index(&self) -> BTreeMap<&str, usize> {
        self.vertices
            .keys()
            .enumerate()
            .map(|(i, k)| (k.as_str(), i))
            .collect()
    }

    /// Independent cycles: `E - V + components`.
    pub fn cycle_rank(&self) -> usize {
        let components = self.components().len();
        self.edges.len() + components - self.vertices.len()
    }

    /// Connected components as sets of vertex ids.
    pub fn components(&self) -> Vec<BTreeSet<String>> {
        let adjacency = self.adjacency();
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for start in self.vertices.keys() {
            if seen.contains(start.as_str()) {
                continue;
            }
            let mut component = BTreeSet::new();
            let mut queue = VecDeque::from([start.as_str()]);
            seen.insert(start.as_str());
            while let Some(v) = queue.pop_front() {
                component.insert(v.to_string());
                for &(w, _) in &adjacency[v] {
                    if seen.insert(w) {
                        queue.push_back(w);
                    }
                }
            }
            out.push(component);
        }
        out
    }

    fn adjacency(&self) -> BTreeMap<&str, Vec<(&str, usize)>> {
        let mut adjacency: BTreeMap<&str, Vec<(&str, usize)>> = self
            .vertices
            .keys()
            .map(|k| (k.as_str(), Vec::new()))
            .collect();
        for (i, e) in self.edges.iter().enumerate() {
            adjacency
                .get_mut(e.a.as_str())
                .unwrap()
                .push((e.b.as_str(), i));
            adjacency
                .get_mut(e.b.as_str())
                .unwrap()
                .push((e.a.as_str(), i));
        }
        adjacency
    }

    /// Edge indices of a BFS spanning forest, in vertex-id order.
    fn spanning_forest(&self) -> (BTreeSet<usize>, ParentMap<'_>) {
        let adjacency = self.adjacency();
        let mut parent: BTreeMap<&str, Option<(&str, usize)>> = BTreeMap::new();
        let mut tree = BTreeSet::new();
        for root in self.vertices.keys() {
            if parent.contains_key(root.as_str()) {
                continue;
            }
            parent.insert(root, None);
            let mut queue = VecDeque::from([root.as_str()]);
            while let Some(v) = queue.pop_front() {
                for &(w, i) in &adjacency[v] {
                    if !parent.contains_key(w) {
                        parent.insert(w, Some((v, i)));
                        tree.insert(i);
                        queue.push_back(w);
                    }
                }
            }
        }
        (tree, parent)
    }

    /// For each edge outside a spanning forest, whether the cycle it closes
    /// carries an odd number of `-` edges. Invariant under [`r0_flip`].
    pub fn fundamental_cycle_parities(&self) -> Vec<bool> {
        let (tree, parent) = self.spanning_forest();
        // parity of minus edges on the tree path from each vertex to its root
        let mut depth_parity: BTreeMap<&str, bool> = BTreeMap::new();
        fn parity_of<'a>(
            v: &'a str,
            g: &'a PlumbGraph,
            parent: &BTreeMap<&'a str, Option<(&'a str, usize)>>,
            memo: &mut BTreeMap<&'a str, bool>,
        ) -> bool {
            if let Some(&p) = memo.get(v) {
                return p;
            }
            let p = match parent[v] {
                None => false,
                Some((u, i)) => parity_of(u, g, parent, memo) ^ (g.edges[i].sign == Sign::Minus),
            };
            memo.insert(v, p);
            p
        }
        (0..self.edges.len())
            .filter(|i| !tree.contains(i))
            .map(|i| {
                let e = &self.edges[i];
                parity_of(&e.a, self, &parent, &mut depth_parity)
                    ^ parity_of(&e.b, self, &parent, &mut depth_parity)
                    ^ (e.sign == Sign::Minus)
            })
            .collect()
    }
}

/// Euler numbers from multiplicities, then arrowheads dropped.
///
/// At a compact vertex `v`: `mult(v) * e_v + sum(sign * mult(neighbour)) = 0`,
/// the sum running over every edge end at `v`, arrowheads included.
pub fn compute_self_intersections(mg: &MultGraph) -> Result<PlumbGraph, PlumbError> {
    let mut sums: BTreeMap<&str, i64> = mg.vertices.keys().map(|k| (k.as_str(), 0)).collect();
    for e in &mg.edges {
        let (a, b) = (&mg.vertices[&e.ends.0], &mg.vertices[&e.ends.1]);
        *sums.get_mut(a.id.as_str()).unwrap() += e.sign.epsilon() * b.mult;
        *sums.get_mut(b.id.as_str()).unwrap() += e.sign.epsilon() * a.mult;
    }

    let mut pg = PlumbGraph::default();
    for v in mg
        .vertices
        .values()
        .filter(|v| v.kind != MultVertexKind::Arrowhead)
    {
        if v.mult < 1 {
            return Err(PlumbError::BadMultiplicity(v.id.clone(), v.mult));
        }
        let sum = sums[v.id.as_str()];
        if sum % v.mult != 0 {
            return Err(PlumbError::NonIntegral {
                vertex: v.id.clone(),
                sum,
                mult: v.mult,
            });
        }
        pg.add_vertex(v.id.clone(), -sum / v.mult, v.genus)?;
    }
    for e in &mg.edges {
        if pg.vertices.contains_key(&e.ends.0) && pg.vertices.contains_key(&e.ends.1) {
            pg.add_edge(&e.ends.0, &e.ends.1, e.sign)?;
        }
    }
    Ok(pg)
}

/// Symmetric matrix with Euler numbers on the diagonal and signed edge
/// counts off it, rows in vertex-id order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionMatrix {
    pub labels: Vec<String>,
    pub entries: Vec<Vec<i64>>,
}

impl IntersectionMatrix {
    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.size();
        (0..n).all(|i| (0..n).all(|j| self.entries[i][j] == self.entries[j][i]))
    }

    pub fn to_bigint(&self) -> Vec<Vec<BigInt>> {
        self.entries
            .iter()
            .map(|row| row.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }
}

pub fn intersection_matrix(pg: &PlumbGraph) -> IntersectionMatrix {
    let index = pg.index();
    let n = pg.vertices.len();
    let mut entries = vec![vec![0i64; n]; n];
    for (i, v) in pg.vertices.values().enumerate() {
        entries[i][i] = v.euler;
    }
    for e in &pg.edges {
        let (i, j) = (index[e.a.as_str()], index[e.b.as_str()]);
        entries[i][j] += e.sign.epsilon();
        entries[j][i] += e.sign.epsilon();
    }
    IntersectionMatrix {
        labels: pg.vertices.keys().cloned().collect(),
        entries,
    }
}

/// Fraction-free Gaussian elimination (Bareiss).
pub fn determinant(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Rank and the absolute value of a nonzero maximal minor, by Bareiss
/// elimination with full pivoting.
pub fn rank_and_minor(m: &[Vec<BigInt>]) -> (usize, BigInt) {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut a = m.to_vec();
    let mut prev = BigInt::one();
    for k in 0..rows.min(cols) {
        let pivot = (k..rows)
            .flat_map(|i| (k..cols).map(move |j| (i, j)))
            .find(|&(i, j)| !a[i][j].is_zero());
        let Some((pi, pj)) = pivot else {
            return (k, prev.abs());
        };
        a.swap(k, pi);
        for row in a.iter_mut() {
            row.swap(k, pj);
        }
        for i in k + 1..rows {
            for j in k + 1..cols {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    (rows.min(cols), prev.abs())
}

/// Diagonal of the Smith normal form: nonnegative, each entry dividing the
/// next, zeros last.
///
/// Every nonzero invariant factor divides a nonzero maximal minor `M`, so the
/// reduction runs modulo `M` and entry sizes stay bounded. The residues are
/// mapped back with `gcd(., M)` and put in divisibility order.
pub fn smith_diagonal(m: &[Vec<BigInt>]) -> Vec<BigInt> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let size = rows.min(cols);
    let (rank, modulus) = rank_and_minor(m);
    let mut diagonal = vec![BigInt::zero(); size];
    if rank == 0 {
        return diagonal;
    }
    if modulus.is_one() {
        diagonal[..rank].fill(BigInt::one());
        return diagonal;
    }

    let reduce = |x: BigInt| x.mod_floor(&modulus);
    let mut a: Vec<Vec<BigInt>> = m
        .iter()
        .map(|row| row.iter().map(|x| reduce(x.clone())).collect())
        .collect();
    for t in 0..size {
        let Some((pi, pj)) = choose_pivot(&a, t) else {
            break;
        };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut clean = true;
            let support: Vec<usize> = (t..cols).filter(|&j| !a[t][j].is_zero()).collect();
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = &a[i][t] / &a[t][t];
                for &j in &support {
                    let v = &a[i][j] - &q * &a[t][j];
                    a[i][j] = reduce(v);
                }
                if !a[i][t].is_zero() {
                    clean = false;
                    if a[i][t] < a[t][t] {
                        a.swap(t, i);
                        break;
                    }
                }
            }
            if !clean {
                continue;
            }
            let support: Vec<usize> = (t..rows).filter(|&i| !a[i][t].is_zero()).collect();
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = &a[t][j] / &a[t][t];
                for &i in &support {
                    let v = &a[i][j] - &q * &a[i][t];
                    a[i][j] = reduce(v);
                }
                if !a[t][j].is_zero() {
                    clean = false;
                    if a[t][j] < a[t][t] {
                        for row in a.iter_mut() {
                            row.swap(t, j);
                        }
                        break;
                    }
                }
            }
            if clean {
                break;
            }
        }
        diagonal[t] = a[t][t].clone();
    }

    for d in diagonal.iter_mut() {
        *d = d.gcd(&modulus);
    }
    normalize_diagonal(&mut diagonal);
    // the top `size - rank` residues stand for zero factors
    for d in diagonal.iter_mut().skip(rank) {
        *d = BigInt::zero();
    }
    diagonal
}

/// Sorts a diagonal of positive entries into a divisibility chain with the
/// same cokernel: `diag(x, y)` is equivalent to `diag(gcd, lcm)`.
fn normalize_diagonal(d: &mut [BigInt]) {
    for i in 0..d.len() {
        for j in i + 1..d.len() {
            let g = d[i].gcd(&d[j]);
            if g != d[i] {
                let l = &d[i] / &g * &d[j];
                d[i] = g;
                d[j] = l;
            }
        }
    }
}

/// Smallest nonzero magnitude in the trailing block, ties broken by the
/// Markowitz count `(row nonzeros - 1) * (column nonzeros - 1)`.
fn choose_pivot(a: &[Vec<BigInt>], t: usize) -> Option<(usize, usize)> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut col_count = vec![0usize; cols];
    let mut row_count = vec![0usize; rows];
    for i in t..rows {
        for j in t..cols {
            if !a[i][j].is_zero() {
                row_count[i] += 1;
                col_count[j] += 1;
            }
        }
    }
    let mut best: Option<(usize, usize)> = None;
    let cost = |i: usize, j: usize| (row_count[i] - 1) * (col_count[j] - 1);
    for i in t..rows {
        for j in t..cols {
            if a[i][j].is_zero() {
                continue;
            }
            best = match best {
                Some((bi, bj)) => {
                    let (x, y) = (a[i][j].magnitude(), a[bi][bj].magnitude());
                    if x < y || (x == y && cost(i, j) < cost(bi, bj)) {
                        Some((i, j))
                    } else {
                        Some((bi, bj))
                    }
                }
                None => Some((i, j)),
            };
        }
    }
    best
}

/// Determinant, Smith invariants and the pieces of a first-homology count,
/// reported separately.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomologyInvariants {
    pub determinant: BigInt,
    /// full Smith diagonal, zeros included
    pub invariant_factors: Vec<BigInt>,
    pub size: usize,
    pub corank: usize,
    /// `2 * sum of genera`
    pub genus_rank: i64,
    /// independent cycles of the graph
    pub cycle_rank: usize,
}

impl HomologyInvariants {
    /// Invariant factors greater than one.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.invariant_factors
            .iter()
            .filter(|d| **d > BigInt::one())
            .cloned()
            .collect()
    }
}

pub fn homology_invariants(pg: &PlumbGraph) -> HomologyInvariants {
    let matrix = intersection_matrix(pg).to_bigint();
    let invariant_factors = smith_diagonal(&matrix);
    let rank = invariant_factors.iter().filter(|d| !d.is_zero()).count();
    HomologyInvariants {
        determinant: determinant(&matrix),
        size: matrix.len(),
        corank: matrix.len() - rank,
        invariant_factors,
        genus_rank: 2 * pg.vertices.values().map(|v| v.genus).sum::<i64>(),
        cycle_rank: pg.cycle_rank(),
    }
}

/// Reverses the orientation of one vertex: every incident edge changes sign.
pub fn r0_flip(pg: &PlumbGraph, v: &str) -> Result<PlumbGraph, PlumbError> {
    if !pg.vertices.contains_key(v) {
        return Err(PlumbError::UnknownVertex(v.to_string()));
    }
    let mut out = pg.clone();
    for e in out.edges.iter_mut() {
        if e.a == v || e.b == v {
            e.sign = e.sign.toggled();
        }
    }
    out.edges.sort();
    Ok(out)
}

/// Orientation flips that make every spanning-forest edge `+`, followed by
/// single-vertex flips while they lower the number of `-` edges.
pub fn canonicalize_signs(pg: &PlumbGraph) -> PlumbGraph {
    let (_, parent) = pg.spanning_forest();
    // vertices are visited root-first, so parents are resolved before children
    let mut flipped: BTreeMap<&str, bool> = BTreeMap::new();
    let order = bfs_order(pg, &parent);
    for v in order {
        let f = match parent[v] {
            None => false,
            Some((u, i)) => flipped[u] ^ (pg.edges[i].sign == Sign::Minus),
        };
        flipped.insert(v, f);
    }
    let mut out = pg.clone();
    for e in out.edges.iter_mut() {
        if flipped[e.a.as_str()] ^ flipped[e.b.as_str()] {
            e.sign = e.sign.toggled();
        }
    }

    loop {
        let mut improved = false;
        let ids: Vec<String> = out.vertices.keys().cloned().collect();
        for v in ids {
            let (minus, plus) =
                out.edges
                    .iter()
                    .filter(|e| e.a == v || e.b == v)
                    .fold((0, 0), |(m, p), e| {
                        if e.sign == Sign::Minus {
                            (m + 1, p)
                        } else {
                            (m, p + 1)
                        }
                    });
            if minus > plus {
                out = r0_flip(&out, &v).expect("vertex exists");
                improved = true;
            }
        }
        if !improved {
            break;
        }
    }
    out.edges.sort();
    out
}

fn bfs_order<'a>(pg: &'a PlumbGraph, parent: &ParentMap<'a>) -> Vec<&'a str> {
    let mut children: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    let mut roots = Vec::new();
    for (&v, p) in parent {
        match p {
            None => roots.push(v),
            Some((u, _)) => children.entry(u).or_default().push(v),
        }
    }
    let mut order = Vec::with_capacity(pg.vertices.len());
    let mut queue: VecDeque<&str> = roots.into_iter().collect();
    while let Some(v) = queue.pop_front() {
        order.push(v);
        if let Some(cs) = children.get(v) {
            queue.extend(cs.iter().copied());
        }
    }
    order
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::resolution::{MultEdge, MultVertex};

    fn mv(id: &str, kind: MultVertexKind, mult: i64) -> MultVertex {
        MultVertex {
            id: id.into(),
            kind,
            mult,
            genus: 0,
            euler: None,
            selfint_raw: None,
        }
    }

    fn mult_graph(vertices: Vec<MultVertex>, edges: &[(&str, &str, Sign)]) -> MultGraph {
        MultGraph {
            vertices: vertices.into_iter().map(|v| (v.id.clone(), v)).collect(),
            edges: edges
                .iter()
                .map(|&(a, b, sign)| MultEdge {
                    ends: (a.into(), b.into()),
                    sign,
                    origin: "e".into(),
                })
                .collect(),
        }
    }

    fn chain(eulers: &[i64], sign: Sign) -> PlumbGraph {
        let mut pg = PlumbGraph::default();
        for (i, &e) in eulers.iter().enumerate() {
            pg.add_vertex(format!("v{i:02}"), e, 0).unwrap();
        }
        for i in 1..eulers.len() {
            pg.add_edge(&format!("v{:02}", i - 1), &format!("v{i:02}"), sign)
                .unwrap();
        }
        pg
    }

    fn big(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    #[test]
    fn node_with_two_arrowheads() {
        let mg = mult_graph(
            vec![
                mv("a", MultVertexKind::Curve, 2),
                mv("x", MultVertexKind::Arrowhead, 1),
                mv("y", MultVertexKind::Arrowhead, 1),
            ],
            &[("a", "x", Sign::Plus), ("a", "y", Sign::Plus)],
        );
        let pg = compute_self_intersections(&mg).unwrap();
        assert_eq!(pg.vertices.len(), 1);
        assert_eq!(pg.vertices["a"].euler, -1);
        assert!(pg.edges.is_empty());
    }

    #[test]
    fn isolated_node_has_zero_euler() {
        let mg = mult_graph(vec![mv("a", MultVertexKind::Curve, 2)], &[]);
        assert_eq!(
            compute_self_intersections(&mg).unwrap().vertices["a"].euler,
            0
        );
    }

    #[test]
    fn chain_interior_recovers_coefficients() {
        // mus 3,1,2 with k = 5 in the middle
        let mg = mult_graph(
            vec![
                mv("a", MultVertexKind::Arrowhead, 3),
                mv("s", MultVertexKind::String, 1),
                mv("b", MultVertexKind::Arrowhead, 2),
            ],
            &[("a", "s", Sign::Plus), ("s", "b", Sign::Plus)],
        );
        assert_eq!(
            compute_self_intersections(&mg).unwrap().vertices["s"].euler,
            -5
        );
    }

    #[test]
    fn non_integral_reported() {
        let mg = mult_graph(
            vec![
                mv("a", MultVertexKind::Curve, 2),
                mv("x", MultVertexKind::Arrowhead, 1),
            ],
            &[("a", "x", Sign::Plus)],
        );
        assert_eq!(
            compute_self_intersections(&mg),
            Err(PlumbError::NonIntegral {
                vertex: "a".into(),
                sum: 1,
                mult: 2
            })
        );
    }

    #[test]
    fn matrices() {
        let mut pg = PlumbGraph::default();
        pg.add_vertex("v", -1, 0).unwrap();
        assert_eq!(intersection_matrix(&pg).entries, vec![vec![-1]]);
        assert_eq!(
            intersection_matrix(&chain(&[-2, -2], Sign::Plus)).entries,
            vec![vec![-2, 1], vec![1, -2]]
        );
        assert_eq!(
            intersection_matrix(&chain(&[-2, -2], Sign::Minus)).entries,
            vec![vec![-2, -1], vec![-1, -2]]
        );
    }

    #[test]
    fn invariants_small() {
        let mut pg = PlumbGraph::default();
        pg.add_vertex("v", 0, 0).unwrap();
        let inv = homology_invariants(&pg);
        assert_eq!(inv.determinant, BigInt::zero());
        assert_eq!(inv.corank, 1);

        let inv = homology_invariants(&chain(&[-2, -2], Sign::Minus));
        assert_eq!(inv.determinant.abs(), BigInt::from(3));
        assert_eq!(inv.torsion(), vec![BigInt::from(3)]);
    }

    #[test]
    fn a_chain_determinants() {
        for a in 2..=20i64 {
            let pg = chain(&vec![-2; (a - 1) as usize], Sign::Plus);
            assert_eq!(homology_invariants(&pg).determinant.abs(), BigInt::from(a));
        }
    }

    #[test]
    fn smith_examples() {
        assert_eq!(
            smith_diagonal(&big(&[&[2, 4], &[6, 8]])),
            big(&[&[2, 4]])[0]
        );
        assert_eq!(
            smith_diagonal(&big(&[&[2, 0], &[0, 3]])),
            big(&[&[1, 6]])[0]
        );
        assert_eq!(
            smith_diagonal(&big(&[&[0, 0], &[0, 0]])),
            big(&[&[0, 0]])[0]
        );
        assert_eq!(
            smith_diagonal(&big(&[
                &[1, -1, 0, 0],
                &[-1, 2, -1, 0],
                &[0, -1, 2, -1],
                &[0, 0, -1, 1]
            ])),
            big(&[&[1, 1, 1, 0]])[0]
        );
        assert!(smith_diagonal(&[]).is_empty());
    }

    /// Determinant by cofactor expansion, for tiny matrices.
    fn cofactor_det(m: &[Vec<i64>]) -> i64 {
        if m.is_empty() {
            return 1;
        }
        (0..m.len())
            .map(|j| {
                let minor: Vec<Vec<i64>> = m[1..]
                    .iter()
                    .map(|r| {
                        r.iter()
                            .enumerate()
                            .filter(|&(c, _)| c != j)
                            .map(|(_, &x)| x)
                            .collect()
                    })
                    .collect();
                let sign = if j % 2 == 0 { 1 } else { -1 };
                sign * m[0][j] * cofactor_det(&minor)
            })
            .sum()
    }

    fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
        (0u32..1 << n)
            .filter(|b| b.count_ones() as usize == k)
            .map(|b| (0..n).filter(|i| b >> i & 1 == 1).collect())
            .collect()
    }

    /// Invariant factors as ratios of gcds of k-minors.
    fn determinantal_divisors(m: &[Vec<i64>]) -> Vec<BigInt> {
        let n = m.len();
        let mut out = Vec::new();
        let mut previous = 1i64;
        for k in 1..=n {
            let mut g = 0i64;
            for rows in subsets(n, k) {
                for cols in subsets(n, k) {
                    let sub: Vec<Vec<i64>> = rows
                        .iter()
                        .map(|&r| cols.iter().map(|&c| m[r][c]).collect())
                        .collect();
                    g = g.gcd(&cofactor_det(&sub));
                }
            }
            if g == 0 {
                out.resize(n, BigInt::zero());
                break;
            }
            out.push(BigInt::from(g / previous));
            previous = g;
        }
        out
    }

    proptest::proptest! {
        #[test]
        fn smith_matches_minor_gcds(
            n in 1usize..=4,
            entries in proptest::collection::vec(-6i64..=6, 16),
            dependent in proptest::bool::ANY,
        ) {
            let mut m: Vec<Vec<i64>> = (0..n).map(|i| entries[i * 4..i * 4 + n].to_vec()).collect();
            if dependent && n > 1 {
                // force a rank drop: last row = 2 * first - second
                m[n - 1] = (0..n).map(|j| 2 * m[0][j] - m[1 % n][j]).collect();
            }
            let big: Vec<Vec<BigInt>> = m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
            proptest::prop_assert_eq!(smith_diagonal(&big), determinantal_divisors(&m));
            proptest::prop_assert_eq!(determinant(&big), BigInt::from(cofactor_det(&m)));
            let (rank, minor) = rank_and_minor(&big);
            let zeros = determinantal_divisors(&m).iter().filter(|d| d.is_zero()).count();
            proptest::prop_assert_eq!(rank, n - zeros);
            proptest::prop_assert!(rank == 0 || !minor.is_zero());
        }
    }

    #[test]
    fn determinant_examples() {
        assert_eq!(determinant(&big(&[&[0, 1], &[1, 0]])), BigInt::from(-1));
        assert_eq!(
            determinant(&big(&[&[2, 1, 0], &[1, 2, 1], &[0, 1, 2]])),
            BigInt::from(4)
        );
        assert_eq!(determinant(&[]), BigInt::one());
    }

    #[test]
    fn flips() {
        let mut pg = PlumbGraph::default();
        pg.add_vertex("v", -1, 0).unwrap();
        assert_eq!(r0_flip(&pg, "v").unwrap(), pg);
        assert!(matches!(
            r0_flip(&pg, "w"),
            Err(PlumbError::UnknownVertex(_))
        ));

        let pg = chain(&[-2, -3, -1, -4], Sign::Plus);
        let once = r0_flip(&pg, "v01").unwrap();
        assert_eq!(once.minus_count(), 2);
        assert_eq!(r0_flip(&once, "v01").unwrap(), pg);
    }

    #[test]
    fn tree_with_one_minus_edge() {
        // star centre c with leaves; c--l2 is minus, l2 has a child l3
        let mut pg = PlumbGraph::default();
        for v in ["c", "l1", "l2", "l3"] {
            pg.add_vertex(v, -2, 0).unwrap();
        }
        pg.add_edge("c", "l1", Sign::Plus).unwrap();
        pg.add_edge("c", "l2", Sign::Minus).unwrap();
        pg.add_edge("l2", "l3", Sign::Minus).unwrap();
        // flipping l2 turns both of its edges
        assert_eq!(r0_flip(&pg, "l2").unwrap().minus_count(), 0);
        assert_eq!(canonicalize_signs(&pg).minus_count(), 0);
    }

    #[test]
    fn odd_cycle_keeps_one_minus() {
        let mut pg = chain(&[-2, -2, -2], Sign::Plus);
        pg.add_edge("v00", "v02", Sign::Minus).unwrap();
        let canon = canonicalize_signs(&pg);
        assert_eq!(canon.minus_count(), 1);
        assert_eq!(
            canon.fundamental_cycle_parities(),
            pg.fundamental_cycle_parities()
        );
        let plus = chain(&[-2, -2, -2], Sign::Plus);
        assert_eq!(canonicalize_signs(&plus), plus);
    }

    #[test]
    fn cycle_rank_counts_parallel_edges() {
        let mut pg = chain(&[-2, -2], Sign::Plus);
        pg.add_edge("v00", "v01", Sign::Plus).unwrap();
        assert_eq!(pg.cycle_rank(), 1);
        assert_eq!(homology_invariants(&pg).cycle_rank, 1);
    }

    #[test]
    fn rejects_loops_and_negative_genus() {
        let mut pg = PlumbGraph::default();
        pg.add_vertex("v", 0, 0).unwrap();
        assert_eq!(
            pg.add_edge("v", "v", Sign::Plus),
            Err(PlumbError::Loop("v".into()))
        );
        assert_eq!(
            pg.add_vertex("w", 0, -1),
            Err(PlumbError::NegativeGenus("w".into()))
        );
    }
}
