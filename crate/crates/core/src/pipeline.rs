//! End-to-end run from curve-graph text to a plumbing graph, keeping every
//! intermediate graph and attributing failures to the stage that raised them.

use std::fmt;
use std::str::FromStr;

use crate::covering::{build_covering, CoveredGraph};
use crate::curvegraph::{CurveGraph, MinK};
use crate::dot;
use crate::format::{self, ParseError};
use crate::plumbing::{compute_self_intersections, PlumbGraph};
use crate::resolution::{insert_strings, MultGraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Stage {
    Validate,
    Cover,
    Mult,
    Plumb,
}

impl Stage {
    pub fn name(self) -> &'static str {
        match self {
            Stage::Validate => "validate",
            Stage::Cover => "cover",
            Stage::Mult => "mult",
            Stage::Plumb => "plumb",
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Stage {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "validate" => Ok(Stage::Validate),
            "cover" => Ok(Stage::Cover),
            "mult" => Ok(Stage::Mult),
            "plumb" => Ok(Stage::Plumb),
            other => Err(format!("unknown stage `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Native,
    Dot,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "native" => Ok(Format::Native),
            "dot" => Ok(Format::Dot),
            other => Err(format!("unknown format `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StageError {
    pub stage: Stage,
    pub message: String,
}

impl StageError {
    fn at(stage: Stage, e: impl fmt::Display) -> Self {
        StageError {
            stage,
            message: e.to_string(),
        }
    }

    /// 1 for input and validation problems, 2 for failures further down.
    pub fn exit_code(&self) -> i32 {
        match self.stage {
            Stage::Validate => 1,
            _ => 2,
        }
    }
}

impl fmt::Display for StageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} stage: {}", self.stage, self.message)
    }
}

impl std::error::Error for StageError {}

impl From<ParseError> for StageError {
    fn from(e: ParseError) -> Self {
        StageError {
            stage: Stage::Validate,
            message: e.to_string(),
        }
    }
}

/// Everything computed up to the requested stage.
#[derive(Debug, Clone)]
pub struct Artifacts {
    pub curve: CurveGraph,
    pub min_k: MinK,
    pub covered: Option<CoveredGraph>,
    pub mult: Option<MultGraph>,
    pub plumb: Option<PlumbGraph>,
}

impl Artifacts {
    /// The graph of the last completed stage, rendered.
    pub fn render(&self, format: Format) -> String {
        let name = &self.curve.name;
        match (format, &self.plumb, &self.mult, &self.covered) {
            (Format::Native, Some(pg), _, _) => format::emit_plumb_graph(pg),
            (Format::Dot, Some(pg), _, _) => dot::plumb_graph_dot(pg, name),
            (Format::Native, None, Some(mg), _) => format::emit_mult_graph(mg),
            (Format::Dot, None, Some(mg), _) => dot::mult_graph_dot(mg, name),
            (Format::Native, None, None, Some(cg)) => format::emit_covered_graph(cg),
            (Format::Dot, None, None, Some(cg)) => dot::covered_graph_dot(cg),
            (Format::Native, None, None, None) => format::emit_curve_graph(&self.curve),
            (Format::Dot, None, None, None) => dot::curve_graph_dot(&self.curve),
        }
    }
}

/// Runs a parsed graph through the stages up to and including `stop_after`.
pub fn run_graph(curve: CurveGraph, stop_after: Stage) -> Result<Artifacts, StageError> {
    let report = curve.validate();
    if !report.is_valid() {
        let message = report
            .errors()
            .map(|i| i.to_string())
            .collect::<Vec<_>>()
            .join("; ");
        return Err(StageError {
            stage: Stage::Validate,
            message,
        });
    }
    let min_k = curve.min_k();
    let mut out = Artifacts {
        curve,
        min_k,
        covered: None,
        mult: None,
        plumb: None,
    };
    if stop_after == Stage::Validate {
        return Ok(out);
    }

    let covered = build_covering(&out.curve).map_err(|e| StageError::at(Stage::Cover, e))?;
    out.covered = Some(covered);
    if stop_after == Stage::Cover {
        return Ok(out);
    }

    let mult = insert_strings(out.covered.as_ref().unwrap())
        .map_err(|e| StageError::at(Stage::Mult, e))?;
    out.mult = Some(mult);
    if stop_after == Stage::Mult {
        return Ok(out);
    }

    let plumb = compute_self_intersections(out.mult.as_ref().unwrap())
        .map_err(|e| StageError::at(Stage::Plumb, e))?;
    out.plumb = Some(plumb);
    Ok(out)
}

/// Parses `text` and runs it up to `stop_after`.
pub fn run(text: &str, stop_after: Stage) -> Result<Artifacts, StageError> {
    let curve = format::parse_curve_graph(text)?;
    run_graph(curve, stop_after)
}
