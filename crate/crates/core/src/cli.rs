//! Command-line front end. The binary only forwards `std::env::args` here.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

use crate::biorder::{BiorderError, BiorderedSet, SingularizerWitness, TableSpec};
use crate::budget::Budgets;
use crate::complex::{
    build_gh, complex_report, components, pi1_presentation, spanning_tree, to_dot, ComplexError,
    GhComplex,
};
use crate::cover::{
    analyze_rank, build_cover, check_cover_axioms, cover_connected, gh_voltage,
    is_simply_connected, verify_rank1, CoverError, Report, RunOptions, Verdict,
};
use crate::grouppres::{gl_table, tietze_simplify, GroupError};
use crate::linmonoid::{enumerate_idempotents, LinMonoidError};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    LinMonoid(#[from] LinMonoidError),
    #[error(transparent)]
    Biorder(#[from] BiorderError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Cover(#[from] CoverError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Dot,
    Text,
}

#[derive(Debug, Parser)]
#[command(
    name = "ghc",
    version,
    about = "Idempotents, square complexes and covers for M_n(GF(q)) and finite semigroups"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Worker threads; output does not depend on this.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Cap on base and cover edges (overrides GHC_BUDGET).
    #[arg(long, global = true)]
    pub edge_budget: Option<usize>,
    /// Include per-stage wall-clock timings in reports.
    #[arg(long, global = true)]
    pub timings: bool,
}

#[derive(Debug, Args, Clone)]
pub struct Params {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub q: u32,
    #[arg(long)]
    pub k: usize,
}

#[derive(Debug, Args, Clone)]
pub struct Source {
    #[arg(long, conflicts_with = "table", requires_all = ["q", "k"])]
    pub n: Option<usize>,
    #[arg(long)]
    pub q: Option<u32>,
    #[arg(long)]
    pub k: Option<usize>,
    /// Multiplication table JSON `{"size": m, "table": [...]}`.
    #[arg(long)]
    pub table: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the rank-k idempotents of M_n(GF(q)).
    Idempotents(Params),
    /// Build the square complex of a biordered set.
    Complex(Source),
    /// List E-squares with band test and singularizer witness.
    Squares(Source),
    /// Fundamental group presentation of one component.
    Pi1 {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 0)]
        component: usize,
        /// Apply Tietze simplification.
        #[arg(long)]
        simplify: bool,
    },
    /// Build the GL_k(q) cover of the rank-k complex and check it.
    Cover(Params),
    /// Identify the rank-1 maximal subgroup with the unit group of GF(q).
    VerifyRank1 {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: u32,
    },
    /// Rank-k analysis: free group at rank n-1, GL_k(q) cover test below.
    Analyze(Params),
}

/// Output text plus process exit code (0 success or yes, 2 inconclusive).
pub struct Outcome {
    pub output: String,
    pub code: i32,
}

fn read(path: &PathBuf) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn load(src: &Source, budgets: &Budgets) -> Result<BiorderedSet, CliError> {
    match (&src.table, src.n, src.q, src.k) {
        (Some(path), _, _, _) => Ok(BiorderedSet::from_table(
            TableSpec::from_json(&read(path)?)?,
            budgets.table_size,
        )?),
        (None, Some(n), Some(q), Some(k)) => Ok(BiorderedSet::from_matrix_monoid(
            n,
            q,
            [k],
            budgets.elements,
        )?),
        _ => Err(CliError::Usage(
            "give either --table or all of --n --q --k".into(),
        )),
    }
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

#[derive(Serialize)]
struct SquareEntry {
    e: usize,
    f: usize,
    g: usize,
    h: usize,
    labels: [String; 4],
    band: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    star: Option<bool>,
    singular: bool,
    witness: Option<SingularizerWitness>,
}

fn report_outcome(r: &Report) -> Outcome {
    let code = match r.verdict {
        Verdict::Yes | Verdict::Free => 0,
        Verdict::Inconclusive => 2,
    };
    Outcome {
        output: json(r),
        code,
    }
}

pub fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    let mut budgets = Budgets::from_env().map_err(CliError::Usage)?;
    if let Some(b) = cli.edge_budget {
        budgets.edges = b;
    }
    let opts = RunOptions {
        budgets,
        timings: cli.timings,
    };
    let format = cli.format;
    let ok = |output: String| Ok(Outcome { output, code: 0 });
    match &cli.command {
        Command::Idempotents(p) => {
            let recs = enumerate_idempotents(p.n, p.q, p.k, budgets.elements)?;
            match format {
                Some(Format::Text) => ok(recs.iter().map(|r| r.matrix.encode() + "\n").collect()),
                Some(Format::Dot) => Err(CliError::Usage("idempotents has no DOT form".into())),
                _ => ok(json(&recs)),
            }
        }
        Command::Complex(src) => {
            let e = load(src, &budgets)?;
            let gh = build_gh(&e)?;
            let report = complex_report(&gh.complex)?;
            match format {
                Some(Format::Dot) => ok(to_dot(&gh.complex, Some(&report.green))),
                Some(Format::Text) => {
                    let c = &gh.complex;
                    let mut s = format!(
                        "vertices {}\nedges {}\nsquares {}\ncells {}\ncomponents {}\n",
                        c.vertices.len(),
                        c.edges.len(),
                        gh.squares.len(),
                        c.cells.len(),
                        report.components
                    );
                    for (i, h) in report.h1.iter().enumerate() {
                        s += &format!(
                            "component {i}: chi {} H1 {h} all_green {}\n",
                            report.chi[i], report.all_green[i]
                        );
                    }
                    ok(s)
                }
                _ => ok(json(&report)),
            }
        }
        Command::Squares(src) => {
            let e = load(src, &budgets)?;
            let gh: GhComplex = build_gh(&e)?;
            let mut out = Vec::new();
            let mut sewn = gh.sewn.iter().peekable();
            for sq in &gh.squares {
                let witness = match sewn.peek() {
                    Some(s) if s.square == *sq => sewn.next().map(|s| s.witness.clone()),
                    _ => None,
                };
                let star = match e.records() {
                    Some(_) => Some(e.star_identity_holds(sq)?),
                    None => None,
                };
                out.push(SquareEntry {
                    e: sq.e,
                    f: sq.f,
                    g: sq.g,
                    h: sq.h,
                    labels: sq.as_array().map(|i| e.label(i)),
                    band: e.is_rectangular_band(sq),
                    star,
                    singular: witness.is_some(),
                    witness,
                });
            }
            ok(json(&out))
        }
        Command::Pi1 {
            source,
            component,
            simplify,
        } => {
            let e = load(source, &budgets)?;
            let gh = build_gh(&e)?;
            let c = &gh.complex;
            let comps = components(c);
            let basepoint = comps
                .vertices(*component)
                .first()
                .copied()
                .ok_or(ComplexError::NoSuchComponent(*component))?;
            let tree = spanning_tree(c, &comps, *component, basepoint)?;
            let mut p = pi1_presentation(c, &comps, *component, basepoint, &tree)?;
            if *simplify {
                p = tietze_simplify(&p, budgets.tietze_moves).presentation;
            }
            match format {
                Some(Format::Json) => ok(json(&p)),
                Some(Format::Dot) => Err(CliError::Usage("pi1 has no DOT form".into())),
                _ => ok(p.to_text()),
            }
        }
        Command::Cover(p) => {
            let e = BiorderedSet::from_matrix_monoid(p.n, p.q, [p.k], budgets.elements)?;
            let gh = build_gh(&e)?;
            let base = &gh.complex;
            let linear = gl_table(p.k, p.q, budgets.elements)?;
            let phi = gh_voltage(&e, &linear)?;
            let cover = build_cover(base, &linear.table, &phi, budgets.edges)?;
            if format == Some(Format::Dot) {
                return ok(to_dot(&cover.complex, None));
            }
            let comps = components(base);
            let basepoint = gh.l_vertex_of(&e, 0);
            let tree = spanning_tree(base, &comps, comps.of_vertex[basepoint], basepoint)?;
            #[derive(Serialize)]
            struct CoverOut {
                #[serde(rename = "V")]
                v: usize,
                #[serde(rename = "E")]
                e: usize,
                #[serde(rename = "F")]
                f: usize,
                group_order: usize,
                connectivity: crate::cover::CoverConnectivity,
                axioms: crate::cover::CoverAxioms,
                simple_connectivity: crate::cover::SimpleConnectivity,
            }
            let sc = is_simply_connected(
                &cover.complex,
                cover.vertex(linear.table.identity(), basepoint),
                budgets.tietze_moves,
            )?;
            let code = if sc.verdict == Verdict::Yes { 0 } else { 2 };
            let out = CoverOut {
                v: cover.complex.vertices.len(),
                e: cover.complex.edges.len(),
                f: cover.complex.cells.len(),
                group_order: linear.table.order(),
                connectivity: cover_connected(base, &comps, &tree, &linear.table, &phi, &cover),
                axioms: check_cover_axioms(base, &cover, &linear.table, &phi),
                simple_connectivity: sc,
            };
            Ok(Outcome {
                output: json(&out),
                code,
            })
        }
        Command::VerifyRank1 { n, q } => Ok(report_outcome(&verify_rank1(*n, *q, opts)?)),
        Command::Analyze(p) => Ok(report_outcome(&analyze_rank(p.n, p.q, p.k, opts)?)),
    }
}

/// Parses, runs inside a pool of `--threads` workers, and writes the output.
/// Returns the exit code; diagnostics go to stderr.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = cli.threads {
        builder = builder.num_threads(t);
    }
    let result = match builder.build() {
        Ok(pool) => pool.install(|| execute(&cli)),
        Err(e) => Err(CliError::Usage(e.to_string())),
    };
    match result {
        Ok(outcome) => {
            let written = match &cli.out {
                Some(path) => {
                    std::fs::write(path, &outcome.output).map_err(|source| CliError::Io {
                        path: path.display().to_string(),
                        source,
                    })
                }
                None => {
                    print!("{}", outcome.output);
                    Ok(())
                }
            };
            match written {
                Ok(()) => outcome.code,
                Err(e) => {
                    eprintln!("error: {e}");
                    1
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}
