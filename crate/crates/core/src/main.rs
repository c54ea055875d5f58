use std::io::{self, Read};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_bigint::BigInt;

use milnor_boundary::curvegraph::MinK;
use milnor_boundary::format::{self, DocumentKind};
use milnor_boundary::pipeline::{self, Format, Stage, StageError};
use milnor_boundary::plumbing::{canonicalize_signs, homology_invariants, PlumbGraph};
use milnor_boundary::{hj_string, parse_plumb_graph};

/// Plumbing graphs of Milnor fiber boundaries from decorated curve graphs.
#[derive(Parser)]
#[command(name = "milnor-boundary", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a curve graph and list every problem with its line.
    Validate { file: String },
    /// Print the smallest admissible k and the constraints behind it.
    Mink { file: String },
    /// Build the cyclic covering.
    Cover {
        file: String,
        #[arg(long, default_value = "native")]
        format: Format,
    },
    /// Run the pipeline, by default all the way to the plumbing graph.
    Resolve {
        file: String,
        #[arg(long, default_value = "plumb")]
        stop_after: Stage,
        #[arg(long, default_value = "native")]
        format: Format,
    },
    /// Determinant and Smith invariants of a plumbing graph (or of the one a
    /// curve graph resolves to).
    Invariants { file: String },
    /// Choose orientations that leave as few `-` edges as possible.
    Normalize { file: String },
    /// Print the Hirzebruch–Jung string Str(a; b, c | n1; n2, n3).
    String {
        a: i64,
        b: i64,
        c: i64,
        n1: i64,
        n2: i64,
        n3: i64,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl From<StageError> for Failure {
    fn from(e: StageError) -> Self {
        Failure {
            code: e.exit_code() as u8,
            message: e.to_string(),
        }
    }
}

fn input_error(message: impl ToString) -> Failure {
    Failure {
        code: 1,
        message: message.to_string(),
    }
}

fn read_input(path: &str) -> Result<String, Failure> {
    let mut text = String::new();
    if path == "-" {
        io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| input_error(format!("stdin: {e}")))?;
    } else {
        text = std::fs::read_to_string(path).map_err(|e| input_error(format!("{path}: {e}")))?;
    }
    Ok(text)
}

fn report_min_k(mk: &MinK) {
    eprintln!("k = {}", mk.k);
    for c in &mk.constraints {
        eprintln!("  {c}");
    }
}

/// A plumbing graph read directly, or produced from a curve graph.
fn load_plumb(path: &str) -> Result<PlumbGraph, Failure> {
    let text = read_input(path)?;
    match format::detect_kind(&text) {
        Some(DocumentKind::Plumb) => {
            parse_plumb_graph(&text).map_err(|e| input_error(format!("{path}:{e}")))
        }
        _ => Ok(pipeline::run(&text, Stage::Plumb)?
            .plumb
            .expect("ran to plumb")),
    }
}

fn execute(command: Command) -> Result<String, Failure> {
    match command {
        Command::Validate { file } => {
            let text = read_input(&file)?;
            let (graph, map) = format::parse_curve_document(&text)
                .map_err(|e| input_error(format!("{file}:{e}")))?;
            let report = graph.validate();
            let mut out = String::new();
            for issue in &report.issues {
                out.push_str(&format!(
                    "{file}:{}: {issue}\n",
                    map.line_of(&issue.subject)
                ));
            }
            if !report.is_valid() {
                return Err(input_error(out.trim_end()));
            }
            out.push_str(&format!(
                "ok: {} vertices, {} edges\n",
                graph.vertices.len(),
                graph.edges.len()
            ));
            Ok(out)
        }
        Command::Mink { file } => {
            let out = pipeline::run(&read_input(&file)?, Stage::Validate)?;
            let mut text = format!("k = {}\n", out.min_k.k);
            for c in &out.min_k.constraints {
                text.push_str(&format!("  {c}\n"));
            }
            Ok(text)
        }
        Command::Cover { file, format } => run_stage(&file, Stage::Cover, format),
        Command::Resolve {
            file,
            stop_after,
            format,
        } => run_stage(&file, stop_after, format),
        Command::Invariants { file } => {
            let inv = homology_invariants(&load_plumb(&file)?);
            let list = |xs: &[BigInt]| xs.iter().map(|d| format!(" {d}")).collect::<String>();
            Ok(format!(
                "size {}\ndeterminant {}\ninvariant_factors{}\ntorsion{}\ncorank {}\ngenus_rank {}\ncycle_rank {}\n",
                inv.size,
                inv.determinant,
                list(&inv.invariant_factors),
                list(&inv.torsion()),
                inv.corank,
                inv.genus_rank,
                inv.cycle_rank
            ))
        }
        Command::Normalize { file } => Ok(format::emit_plumb_graph(&canonicalize_signs(
            &load_plumb(&file)?,
        ))),
        Command::String {
            a,
            b,
            c,
            n1,
            n2,
            n3,
        } => {
            let s = hj_string(a, b, c, n1, n2, n3).map_err(|e| Failure {
                code: 2,
                message: e.to_string(),
            })?;
            let join = |xs: &[i64]| xs.iter().map(i64::to_string).collect::<Vec<_>>().join(" ");
            Ok(format!(
                "delta {}\nalpha {}\nk {}\nmu {}\n",
                s.delta,
                s.alpha,
                join(&s.coeffs),
                join(&s.mus)
            ))
        }
    }
}

fn run_stage(file: &str, stage: Stage, format: Format) -> Result<String, Failure> {
    let out = pipeline::run(&read_input(file)?, stage)?;
    report_min_k(&out.min_k);
    Ok(out.render(format))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match execute(cli.command) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
