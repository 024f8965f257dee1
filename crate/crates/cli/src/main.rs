mod group;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use conjugacy::backend::{BackendError, CentralizerClass, ConjugacyVerdict, TableError};
use conjugacy::freeprod::FreeProductError;
use conjugacy::index2::{classify_extension, Index2Error, Sign};
use conjugacy::klein::{
    involution_eigenbasis, knf_centralizer, knf_conjugate_decide, parse_klein, KleinCentralizer,
    KleinError,
};
use conjugacy::pipeline::{decide_conjugacy, PipelineError, TraceEntry};
use conjugacy::trimesh::{Orientability, TriError, Triangulation};
use conjugacy::word::WordError;
use conjugacy::{KleinNF, Matrix2};
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use group::{Group, GroupFile};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}: {1}")]
    Io(String, std::io::Error),
    #[error("{0}: {1}")]
    Json(String, serde_json::Error),
    #[error("{0}")]
    Input(String),
    #[error("budget exhausted: {0}")]
    Exhausted(String),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Backend(#[from] BackendError),
    #[error(transparent)]
    Table(#[from] TableError),
    #[error(transparent)]
    FreeProduct(#[from] FreeProductError),
    #[error(transparent)]
    Index2(#[from] Index2Error),
    #[error(transparent)]
    Klein(#[from] KleinError),
    #[error(transparent)]
    Pipeline(#[from] PipelineError),
    #[error(transparent)]
    Triangulation(#[from] TriError),
}

#[derive(Parser)]
#[command(
    name = "conjugacy",
    version,
    about = "Conjugacy decisions and triangulation constructions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether WORD is trivial.
    Wp { group: PathBuf, word: String },
    /// Decide whether U and V are conjugate.
    Conj {
        group: PathBuf,
        u: String,
        v: String,
        /// Enumeration steps for every bounded search.
        #[arg(long, default_value_t = 10_000)]
        budget: usize,
    },
    /// Classify the centralizer of V.
    Centralizer {
        group: PathBuf,
        v: String,
        #[arg(long, default_value_t = 10_000)]
        budget: usize,
    },
    /// Isomorphism type of <v, t | v t v^-1 = t^EPS, v^2 = t^P>.
    #[command(name = "classify-l1")]
    ClassifyL1 {
        #[arg(allow_hyphen_values = true)]
        eps: i64,
        #[arg(allow_hyphen_values = true)]
        p: i64,
    },
    /// Klein bottle group normal forms.
    #[command(subcommand)]
    Klein(KleinCommand),
    /// Eigenvectors of an integral involution, given row by row.
    Eigenbasis {
        #[arg(allow_hyphen_values = true)]
        m00: i64,
        #[arg(allow_hyphen_values = true)]
        m01: i64,
        #[arg(allow_hyphen_values = true)]
        m10: i64,
        #[arg(allow_hyphen_values = true)]
        m11: i64,
    },
    /// Orientability of a triangulation.
    Orient { tri: PathBuf },
    /// Orientation double cover.
    Cover {
        tri: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Double along boundary faces, given as `tet:face,tet:face`; defaults
    /// to the whole boundary.
    Double {
        tri: PathBuf,
        #[arg(long)]
        faces: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cone off spherical boundary components.
    Cap {
        tri: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Presentation of the fundamental group with its orientation character.
    Pi1 { tri: PathBuf },
    /// Boundary surface components.
    Boundary { tri: PathBuf },
    /// Membership of WORD in the subgroup generated by the comma-separated
    /// words SUBGROUP.
    #[command(name = "t2-member")]
    T2Member {
        group: PathBuf,
        subgroup: String,
        word: String,
    },
}

#[derive(Subcommand)]
enum KleinCommand {
    /// Normal form a^m b^n t^e of a word in a, b, t.
    Nf {
        x: String,
    },
    Mul {
        x: String,
        y: String,
    },
    Inv {
        x: String,
    },
    Conj {
        u: String,
        v: String,
    },
    /// Centralizer of V.
    Zk {
        v: String,
    },
}

/// Answer to a decision query.
#[derive(Debug, Default, Serialize)]
struct QueryResult {
    verdict: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    trace: Option<Vec<TraceEntry>>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    diagnostics: Vec<String>,
}

enum Status {
    Decided,
    Exhausted,
}

fn verdict_result(
    v: &ConjugacyVerdict,
    fmt: impl Fn(&conjugacy::word::Word) -> String,
) -> (QueryResult, Status) {
    match v {
        ConjugacyVerdict::Conjugate(h) => (
            QueryResult {
                verdict: "conjugate".into(),
                witness: Some(fmt(h)),
                ..Default::default()
            },
            Status::Decided,
        ),
        ConjugacyVerdict::NotConjugate => (
            QueryResult {
                verdict: "not_conjugate".into(),
                ..Default::default()
            },
            Status::Decided,
        ),
        ConjugacyVerdict::Exhausted(b) => (
            QueryResult {
                verdict: "exhausted".into(),
                diagnostics: vec![format!("search gave up after {b} steps")],
                ..Default::default()
            },
            Status::Exhausted,
        ),
    }
}

fn load_tri(path: &Path) -> Result<Triangulation, CliError> {
    let text =
        std::fs::read_to_string(path).map_err(|e| CliError::Io(path.display().to_string(), e))?;
    let t: Triangulation =
        serde_json::from_str(&text).map_err(|e| CliError::Json(path.display().to_string(), e))?;
    t.validate().map_err(TriError::Invalid)?;
    Ok(t)
}

/// Writes the triangulation to `out` when given, otherwise embeds it.
fn emit_tri(mut summary: Value, t: &Triangulation, out: Option<&Path>) -> Result<Value, CliError> {
    let body = serde_json::to_value(t).expect("triangulations serialize");
    match out {
        Some(path) => {
            let text = serde_json::to_string_pretty(&body).expect("valid json");
            std::fs::write(path, text + "\n")
                .map_err(|e| CliError::Io(path.display().to_string(), e))?;
            summary["out"] = json!(path.display().to_string());
        }
        None => summary["triangulation"] = body,
    }
    Ok(summary)
}

fn parse_faces(list: &str) -> Result<Vec<(usize, usize)>, CliError> {
    list.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|item| {
            let bad = || CliError::Input(format!("face `{item}` is not of the form tet:face"));
            let (t, f) = item.trim().split_once(':').ok_or_else(bad)?;
            Ok((t.parse().map_err(|_| bad())?, f.parse().map_err(|_| bad())?))
        })
        .collect()
}

fn klein_json(x: &KleinNF) -> Value {
    json!({"nf": x.to_string(), "m": x.m, "n": x.n, "e": i64::from(x.twisted)})
}

fn run(command: Command) -> Result<(Value, Status), CliError> {
    let decided = |v: Value| Ok((v, Status::Decided));
    match command {
        Command::Wp { group, word } => {
            let g = Group::new(GroupFile::load(&group)?, 10_000)?;
            let w = g.parse(&word)?;
            let trivial = g.backend.is_identity(&w)?;
            let verdict = if trivial { "identity" } else { "not_identity" };
            decided(json!({ "verdict": verdict }))
        }
        Command::Conj {
            group,
            u,
            v,
            budget,
        } => {
            let g = Group::new(GroupFile::load(&group)?, budget)?;
            let (u, v) = (g.parse(&u)?, g.parse(&v)?);
            let (mut result, status) = match g.character()? {
                Some(chi) => {
                    let ctx = g.pipeline(chi, budget)?;
                    let d = decide_conjugacy(&ctx, &u, &v)?;
                    let (mut r, s) = verdict_result(&d.verdict, |w| g.format(w));
                    r.trace = Some(d.trace.render(ctx.alphabet()));
                    (r, s)
                }
                None => {
                    let (mut r, s) = verdict_result(&g.backend.conjugate(&u, &v)?, |w| g.format(w));
                    r.diagnostics
                        .push("no character given; answered by the backend directly".into());
                    (r, s)
                }
            };
            result.diagnostics.sort();
            Ok((serde_json::to_value(result).expect("serializable"), status))
        }
        Command::Centralizer { group, v, budget } => {
            let g = Group::new(GroupFile::load(&group)?, budget)?;
            let v = g.parse(&v)?;
            decided(match g.backend.centralizer(&v)? {
                CentralizerClass::Cyclic(r) => {
                    json!({"verdict": "cyclic", "generators": [g.format(&r)]})
                }
                CentralizerClass::RankTwoAbelian(p, q) => {
                    json!({"verdict": "rank_two_abelian", "generators": [g.format(&p), g.format(&q)]})
                }
                CentralizerClass::Delegated(tag) => json!({"verdict": "delegated", "tag": tag}),
            })
        }
        Command::ClassifyL1 { eps, p } => {
            let eps = Sign::from_int(eps)?;
            decided(json!({"class": classify_extension(eps, p).label()}))
        }
        Command::Klein(k) => {
            let parse = |s: &str| parse_klein::<i64>(s);
            match k {
                KleinCommand::Nf { x } => decided(klein_json(&parse(&x)?)),
                KleinCommand::Mul { x, y } => {
                    decided(klein_json(&parse(&x)?.multiply(&parse(&y)?)))
                }
                KleinCommand::Inv { x } => decided(klein_json(&parse(&x)?.inverse())),
                KleinCommand::Conj { u, v } => {
                    let verdict = knf_conjugate_decide(&parse(&u)?, &parse(&v)?)?;
                    let alphabet = conjugacy::klein::klein_alphabet();
                    let (r, s) = verdict_result(&verdict, |w| alphabet.format(w));
                    Ok((serde_json::to_value(r).expect("serializable"), s))
                }
                KleinCommand::Zk { v } => decided(match knf_centralizer(&parse(&v)?) {
                    KleinCentralizer::WholeGroup => json!({"centralizer": "whole_group"}),
                    KleinCentralizer::AbelianA => {
                        json!({"centralizer": "abelian", "generators": ["a", "b"]})
                    }
                    KleinCentralizer::CyclicGen(g) => {
                        json!({"centralizer": "cyclic", "generators": [g.to_string()]})
                    }
                }),
            }
        }
        Command::Eigenbasis { m00, m01, m10, m11 } => {
            let e = involution_eigenbasis(&Matrix2::new(m00, m01, m10, m11))?;
            decided(json!({
                "a": [e.a_vec.0, e.a_vec.1],
                "b": [e.b_vec.0, e.b_vec.1],
                "lattice_index": e.lattice_index,
            }))
        }
        Command::Orient { tri } => {
            let t = load_tri(&tri)?;
            if !t.complex()?.is_connected() {
                return decided(json!({"orientable": t.is_orientable()?}));
            }
            decided(match t.orientability()? {
                Orientability::Orientable(_) => json!({"orientable": true}),
                Orientability::NonOrientable(cycle) => {
                    json!({"orientable": false, "reversing_loop": cycle})
                }
            })
        }
        Command::Cover { tri, out } => {
            let t = load_tri(&tri)?;
            let cd = t.orientation_double_cover()?;
            let summary = json!({
                "tets": cd.cover.n_tets,
                "connected": cd.cover.complex()?.is_connected(),
                "projection": cd.projection,
                "deck": cd.deck,
            });
            decided(emit_tri(summary, &cd.cover, out.as_deref())?)
        }
        Command::Double { tri, faces, out } => {
            let t = load_tri(&tri)?;
            let d = match faces {
                Some(list) => t.double_along_boundary(&parse_faces(&list)?)?,
                None => t.double_along_whole_boundary()?,
            };
            let summary =
                json!({"tets": d.n_tets, "closed": d.complex()?.boundary_faces().is_empty()});
            decided(emit_tri(summary, &d, out.as_deref())?)
        }
        Command::Cap { tri, out } => {
            let t = load_tri(&tri)?;
            let c = t.cap_spherical_boundaries()?;
            let summary = json!({"tets": c.n_tets, "added": c.n_tets - t.n_tets});
            decided(emit_tri(summary, &c, out.as_deref())?)
        }
        Command::Pi1 { tri } => {
            let g = load_tri(&tri)?.pi1_presentation()?;
            let a = &g.presentation.alphabet;
            let relators: Vec<String> = g
                .presentation
                .relators
                .iter()
                .map(|r| a.format(r))
                .collect();
            decided(json!({
                "generators": a.names().collect::<Vec<_>>(),
                "relators": relators,
                "character": g.character.display(a),
                "generator_pairings": g.generator_pairings,
            }))
        }
        Command::Boundary { tri } => {
            let b = load_tri(&tri)?.boundary_components()?;
            decided(json!({ "components": b }))
        }
        Command::T2Member {
            group,
            subgroup,
            word,
        } => {
            let g = Group::new(GroupFile::load(&group)?, 10_000)?;
            let gens = subgroup
                .split(',')
                .map(|s| g.parse(s))
                .collect::<Result<Vec<_>, _>>()?;
            let oracle = conjugacy::backend::BackendMembership {
                backend: g.backend.clone(),
                gens,
            };
            let member = conjugacy::pipeline::boundary_membership_t2(&oracle, &g.parse(&word)?)?;
            decided(json!({ "member": member }))
        }
    }
}

fn print(v: &Value) {
    println!("{}", serde_json::to_string(v).expect("valid json"));
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            print(&json!({ "error": e.kind().to_string(), "usage": e.render().to_string() }));
            return ExitCode::from(1);
        }
    };
    match run(cli.command) {
        Ok((v, Status::Decided)) => {
            print(&v);
            ExitCode::SUCCESS
        }
        Ok((v, Status::Exhausted)) => {
            print(&v);
            ExitCode::from(2)
        }
        Err(CliError::Exhausted(msg)) => {
            print(&json!({ "verdict": "exhausted", "diagnostics": [msg] }));
            ExitCode::from(2)
        }
        Err(e) => {
            print(&json!({ "error": e.to_string() }));
            ExitCode::from(1)
        }
    }
}
