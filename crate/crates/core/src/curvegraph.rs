//! The decorated curve-configuration graph, its validation, stars and the
//! admissible values of the covering degree `k`.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::Rational64;
use thiserror::Error;

use crate::numtheory::{gcd, lcm};

/// Edge decoration: type of the double point, later the gluing sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn toggled(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    /// `+1` or `-1`.
    pub fn epsilon(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

/// Which family of divisors a component belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DivisorClass {
    /// component of the divisor of `f`
    F,
    /// exceptional component over the origin
    O,
    /// strict transform of `V(g)`
    G,
}

/// Multiplicities `(m, n)` of the two pulled-back functions along a divisor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DivisorMult {
    pub m: i64,
    pub n: i64,
    pub class: DivisorClass,
}

impl DivisorMult {
    pub fn f(m: i64) -> Self {
        DivisorMult {
            m,
            n: 0,
            class: DivisorClass::F,
        }
    }

    pub fn o(m: i64, n: i64) -> Self {
        DivisorMult {
            m,
            n,
            class: DivisorClass::O,
        }
    }

    /// The strict transform of `V(g)`: always `(0, 1)`.
    pub fn g() -> Self {
        DivisorMult {
            m: 0,
            n: 1,
            class: DivisorClass::G,
        }
    }

    pub fn is_well_formed(&self) -> bool {
        match self.class {
            DivisorClass::F => self.n == 0 && self.m >= 1,
            DivisorClass::O => self.m >= 1 && self.n >= 1,
            DivisorClass::G => self.m == 0 && self.n == 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VertexKind {
    Node,
    Arrowhead,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveVertex {
    pub id: String,
    pub kind: VertexKind,
    /// multiplicity of the `f`-divisor containing the curve
    pub mf: i64,
    /// the second divisor: class O for nodes, class G for arrowheads
    pub pair: DivisorMult,
    pub genus: i64,
    /// one switch per generator of the fundamental group (`2 * genus` of them)
    pub switches: Vec<i64>,
}

impl CurveVertex {
    pub fn node(id: impl Into<String>, mf: i64, m: i64, n: i64, genus: i64) -> Self {
        CurveVertex {
            id: id.into(),
            kind: VertexKind::Node,
            mf,
            pair: DivisorMult::o(m, n),
            genus,
            switches: Vec::new(),
        }
    }

    pub fn arrowhead(id: impl Into<String>, mf: i64) -> Self {
        CurveVertex {
            id: id.into(),
            kind: VertexKind::Arrowhead,
            mf,
            pair: DivisorMult::g(),
            genus: 0,
            switches: Vec::new(),
        }
    }

    pub fn with_switches(mut self, switches: Vec<i64>) -> Self {
        self.switches = switches;
        self
    }

    pub fn is_node(&self) -> bool {
        self.kind == VertexKind::Node
    }

    /// `(m_f; m, n)` as written on the vertex.
    pub fn triple(&self) -> (i64, i64, i64) {
        (self.mf, self.pair.m, self.pair.n)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveEdge {
    pub id: String,
    pub endpoints: (String, String),
    pub sign: Sign,
    /// number of parallel double points this record stands for
    pub count: i64,
    /// index of the copies of each endpoint met by the first covered edge
    pub attach: (i64, i64),
}

impl CurveEdge {
    pub fn new(
        id: impl Into<String>,
        a: impl Into<String>,
        b: impl Into<String>,
        sign: Sign,
    ) -> Self {
        CurveEdge {
            id: id.into(),
            endpoints: (a.into(), b.into()),
            sign,
            count: 1,
            attach: (0, 0),
        }
    }

    pub fn with_count(mut self, count: i64) -> Self {
        self.count = count;
        self
    }

    pub fn with_attach(mut self, a: i64, b: i64) -> Self {
        self.attach = (a, b);
        self
    }

    pub fn touches(&self, v: &str) -> bool {
        self.endpoints.0 == v || self.endpoints.1 == v
    }

    /// The endpoint opposite to `v`.
    pub fn other(&self, v: &str) -> Option<&str> {
        if self.endpoints.0 == v {
            Some(&self.endpoints.1)
        } else if self.endpoints.1 == v {
            Some(&self.endpoints.0)
        } else {
            None
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("duplicate id `{0}`")]
    DuplicateId(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveGraph {
    pub name: String,
    pub vertices: BTreeMap<String, CurveVertex>,
    pub edges: BTreeMap<String, CurveEdge>,
    /// optional lower bound `s0` for `k`
    pub newton_slope_bound: Option<Rational64>,
}

/// The three divisors through a double point, seen from the two endpoints
/// of its edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DoublePoint {
    pub sign: Sign,
    /// `(m_f, pair)` of the first endpoint
    pub first: (i64, DivisorMult),
    /// `(m_f, pair)` of the second endpoint
    pub second: (i64, DivisorMult),
}

impl DoublePoint {
    /// The divisor meeting the curve of the first endpoint transversally.
    pub fn third_at_first(&self) -> DivisorMult {
        match self.sign {
            Sign::Plus => self.second.1,
            Sign::Minus => DivisorMult::f(self.second.0),
        }
    }

    pub fn third_at_second(&self) -> DivisorMult {
        match self.sign {
            Sign::Plus => self.first.1,
            Sign::Minus => DivisorMult::f(self.first.0),
        }
    }

    /// The `m`-multiplicities of the three divisors.
    pub fn mults(&self) -> [i64; 3] {
        [self.first.0, self.first.1.m, self.third_at_first().m]
    }

    /// Number of preimages of the point in the covering.
    pub fn fiber_count(&self) -> i64 {
        let [a, b, c] = self.mults();
        gcd(gcd(a, b), c)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Issue {
    pub severity: Severity,
    /// vertex or edge id the issue is about
    pub subject: String,
    pub message: String,
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{tag}: {}: {}", self.subject, self.message)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub issues: Vec<Issue>,
}

impl ValidationReport {
    pub fn errors(&self) -> impl Iterator<Item = &Issue> {
        self.issues.iter().filter(|i| i.severity == Severity::Error)
    }

    pub fn warnings(&self) -> impl Iterator<Item = &Issue> {
        self.issues
            .iter()
            .filter(|i| i.severity == Severity::Warning)
    }

    pub fn is_valid(&self) -> bool {
        self.errors().next().is_none()
    }

    fn error(&mut self, subject: &str, message: impl Into<String>) {
        self.issues.push(Issue {
            severity: Severity::Error,
            subject: subject.to_string(),
            message: message.into(),
        });
    }

    fn warning(&mut self, subject: &str, message: impl Into<String>) {
        self.issues.push(Issue {
            severity: Severity::Warning,
            subject: subject.to_string(),
            message: message.into(),
        });
    }
}

impl CurveGraph {
    pub fn new(name: impl Into<String>) -> Self {
        CurveGraph {
            name: name.into(),
            vertices: BTreeMap::new(),
            edges: BTreeMap::new(),
            newton_slope_bound: None,
        }
    }

    pub fn add_vertex(&mut self, v: CurveVertex) -> Result<(), GraphError> {
        if self.vertices.contains_key(&v.id) || self.edges.contains_key(&v.id) {
            return Err(GraphError::DuplicateId(v.id));
        }
        self.vertices.insert(v.id.clone(), v);
        Ok(())
    }

    /// Adds an edge; both endpoints must already exist.
    pub fn add_edge(&mut self, e: CurveEdge) -> Result<(), GraphError> {
        if self.edges.contains_key(&e.id) || self.vertices.contains_key(&e.id) {
            return Err(GraphError::DuplicateId(e.id));
        }
        for end in [&e.endpoints.0, &e.endpoints.1] {
            if !self.vertices.contains_key(end) {
                return Err(GraphError::UnknownVertex(end.clone()));
            }
        }
        self.edges.insert(e.id.clone(), e);
        Ok(())
    }

    pub fn vertex(&self, id: &str) -> Result<&CurveVertex, GraphError> {
        self.vertices
            .get(id)
            .ok_or_else(|| GraphError::UnknownVertex(id.to_string()))
    }

    pub fn edge(&self, id: &str) -> Result<&CurveEdge, GraphError> {
        self.edges
            .get(id)
            .ok_or_else(|| GraphError::UnknownEdge(id.to_string()))
    }

    pub fn incident_edges<'a>(&'a self, v: &'a str) -> impl Iterator<Item = &'a CurveEdge> + 'a {
        self.edges.values().filter(move |e| e.touches(v))
    }

    /// Total number of double points on the curve of `v`.
    pub fn edge_degree(&self, v: &str) -> i64 {
        self.incident_edges(v).map(|e| e.count).sum()
    }

    pub fn double_point(&self, e: &CurveEdge) -> Result<DoublePoint, GraphError> {
        let a = self.vertex(&e.endpoints.0)?;
        let b = self.vertex(&e.endpoints.1)?;
        Ok(DoublePoint {
            sign: e.sign,
            first: (a.mf, a.pair),
            second: (b.mf, b.pair),
        })
    }

    /// The third divisor at a double point, as seen from endpoint `v`.
    pub fn third_divisor(&self, e: &CurveEdge, v: &str) -> Result<DivisorMult, GraphError> {
        let dp = self.double_point(e)?;
        if e.endpoints.0 == v {
            Ok(dp.third_at_first())
        } else if e.endpoints.1 == v {
            Ok(dp.third_at_second())
        } else {
            Err(GraphError::UnknownVertex(v.to_string()))
        }
    }

    /// Checks every decoration constraint; an empty error list means valid.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        for v in self.vertices.values() {
            validate_vertex(v, &mut report);
        }

        let mut pair_signs: BTreeMap<(&str, &str), Vec<(Sign, &str)>> = BTreeMap::new();
        for e in self.edges.values() {
            let (a, b) = (&e.endpoints.0, &e.endpoints.1);
            if a == b {
                report.error(&e.id, "loops are not allowed");
            }
            if e.count < 1 {
                report.error(&e.id, format!("count must be positive, got {}", e.count));
            }
            let (Some(va), Some(vb)) = (self.vertices.get(a), self.vertices.get(b)) else {
                for end in [a, b] {
                    if !self.vertices.contains_key(end) {
                        report.error(&e.id, format!("unknown vertex `{end}`"));
                    }
                }
                continue;
            };
            let key = if a <= b {
                (a.as_str(), b.as_str())
            } else {
                (b.as_str(), a.as_str())
            };
            pair_signs.entry(key).or_default().push((e.sign, &e.id));
            match e.sign {
                Sign::Plus => {
                    if va.mf != vb.mf {
                        report.error(
                            &e.id,
                            format!("+ endpoints must share mf ({} != {})", va.mf, vb.mf),
                        );
                    }
                }
                Sign::Minus => {
                    if va.pair != vb.pair {
                        report.error(
                            &e.id,
                            format!(
                                "- endpoints must share their pair (({},{}) != ({},{}))",
                                va.pair.m, va.pair.n, vb.pair.m, vb.pair.n
                            ),
                        );
                    } else if va.pair.class == DivisorClass::G {
                        report.warning(
                            &e.id,
                            "- edge between arrowheads shares a V(g) divisor; resolution does not support it",
                        );
                    }
                }
            }
        }
        for ((a, b), signs) in pair_signs {
            let (first_sign, first_id) = signs[0];
            if let Some((_, id)) = signs.iter().find(|(s, _)| *s != first_sign) {
                report.error(
                    id,
                    format!(
                        "edges between `{a}` and `{b}` must carry the same sign as `{first_id}`"
                    ),
                );
            }
        }
        if let Some(s0) = self.newton_slope_bound {
            if *s0.denom() <= 0 {
                report.error(&self.name, "s0 must have a positive denominator");
            }
        }
        report
    }

    /// `v`, its neighbours, and the edges from `v` to them.
    pub fn star(&self, v: &str) -> Result<CurveGraph, GraphError> {
        let centre = self.vertex(v)?;
        let mut star = CurveGraph::new(format!("star_{v}"));
        star.vertices.insert(v.to_string(), centre.clone());
        for e in self.incident_edges(v) {
            let other = e.other(v).expect("incident edge");
            star.vertices
                .entry(other.to_string())
                .or_insert_with(|| self.vertices[other].clone());
            star.edges.insert(e.id.clone(), e.clone());
        }
        Ok(star)
    }

    /// Divisor constraints on `k` and the smallest even `k` meeting them.
    pub fn min_k(&self) -> MinK {
        let mut constraints = vec![KConstraint::Even];
        for v in self.vertices.values() {
            if v.pair.class == DivisorClass::O {
                constraints.push(KConstraint::Exceeds {
                    m: v.pair.m,
                    n: v.pair.n,
                    witness: v.id.clone(),
                });
                constraints.push(KConstraint::EvenQuotient {
                    m_f: v.mf,
                    n_o: v.pair.n,
                    witness: v.id.clone(),
                });
            }
        }
        for e in self.edges.values().filter(|e| e.sign == Sign::Plus) {
            let Ok(dp) = self.double_point(e) else {
                continue;
            };
            for (end, third) in [
                (&e.endpoints.0, dp.third_at_first()),
                (&e.endpoints.1, dp.third_at_second()),
            ] {
                if third.class == DivisorClass::O {
                    let witness = format!("{}@{}", e.id, end);
                    constraints.push(KConstraint::Exceeds {
                        m: third.m,
                        n: third.n,
                        witness: witness.clone(),
                    });
                    constraints.push(KConstraint::EvenQuotient {
                        m_f: dp.first.0,
                        n_o: third.n,
                        witness,
                    });
                }
            }
        }
        if let Some(s0) = self.newton_slope_bound {
            constraints.push(KConstraint::AboveSlope { s0 });
        }

        let mut step = 2i64;
        let mut floor = Rational64::from_integer(0);
        for c in &constraints {
            match c {
                KConstraint::Even => {}
                KConstraint::Exceeds { m, n, .. } if *n > 0 => {
                    floor = floor.max(Rational64::new(*m, *n));
                }
                KConstraint::EvenQuotient { m_f, n_o, .. } if *m_f > 0 => {
                    let modulus = 2 * m_f;
                    step = lcm(step, modulus / gcd(modulus, *n_o));
                }
                KConstraint::AboveSlope { s0 } => floor = floor.max(*s0),
                // malformed decorations; validate reports them
                _ => {}
            }
        }
        // smallest multiple of `step` strictly above `floor`
        let k = ((floor / step).floor().to_integer() + 1) * step;
        MinK { k, constraints }
    }
}

fn validate_vertex(v: &CurveVertex, report: &mut ValidationReport) {
    if v.mf < 1 {
        report.error(&v.id, format!("mf must be positive, got {}", v.mf));
    }
    if v.genus < 0 {
        report.error(&v.id, format!("genus must be nonnegative, got {}", v.genus));
    }
    match v.kind {
        VertexKind::Node => {
            if v.pair.class != DivisorClass::O {
                report.error(&v.id, "node pair must be an exceptional divisor");
            } else if !v.pair.is_well_formed() {
                report.error(
                    &v.id,
                    format!(
                        "node pair ({},{}) needs m >= 1 and n >= 1",
                        v.pair.m, v.pair.n
                    ),
                );
            }
            if v.genus >= 0 && v.switches.len() as i64 != 2 * v.genus {
                report.error(
                    &v.id,
                    format!(
                        "expected {} switches for genus {}, got {}",
                        2 * v.genus,
                        v.genus,
                        v.switches.len()
                    ),
                );
            }
        }
        VertexKind::Arrowhead => {
            if v.pair != DivisorMult::g() {
                report.error(&v.id, "arrowhead pair must be the V(g) divisor (0,1)");
            }
            if v.genus != 0 || !v.switches.is_empty() {
                report.error(&v.id, "arrowheads carry no genus or switches");
            }
        }
    }
}

/// One condition on `k` together with the decoration that imposes it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KConstraint {
    Even,
    /// `k * n > m`
    Exceeds {
        m: i64,
        n: i64,
        witness: String,
    },
    /// `k * n_o / m_f` is an even integer
    EvenQuotient {
        m_f: i64,
        n_o: i64,
        witness: String,
    },
    /// `k > s0`
    AboveSlope {
        s0: Rational64,
    },
}

impl KConstraint {
    pub fn holds(&self, k: i64) -> bool {
        match self {
            KConstraint::Even => k > 0 && k % 2 == 0,
            KConstraint::Exceeds { m, n, .. } => k * n > *m,
            KConstraint::EvenQuotient { m_f, n_o, .. } => *m_f > 0 && (k * n_o) % (2 * m_f) == 0,
            KConstraint::AboveSlope { s0 } => Rational64::from_integer(k) > *s0,
        }
    }
}

impl fmt::Display for KConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KConstraint::Even => write!(f, "k even"),
            KConstraint::Exceeds { m, n, witness } => write!(f, "k*{n} > {m} [{witness}]"),
            KConstraint::EvenQuotient { m_f, n_o, witness } => {
                write!(f, "k*{n_o}/{m_f} even integer [{witness}]")
            }
            KConstraint::AboveSlope { s0 } => write!(f, "k > {s0} [s0]"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinK {
    pub k: i64,
    pub constraints: Vec<KConstraint>,
}

impl MinK {
    pub fn violated(&self, k: i64) -> Vec<&KConstraint> {
        self.constraints.iter().filter(|c| !c.holds(k)).collect()
    }
}
