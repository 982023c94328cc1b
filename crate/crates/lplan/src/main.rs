use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use lplan::boundary::{find_cips, find_shortcuts, necessary_conditions, Triplet};
use lplan::graph::validate_ptpg;
use lplan::io::{parse_graph, parse_plan, render_svg, serialize_graph, serialize_plan, PlanDocument, SvgStyle};
use lplan::oracle::{generate_ptpg, GenSpec};
use lplan::pipeline::{plan, Outcome, PlanOptions};
use lplan::{EmbeddedGraph, Error};

const EXIT_OK: u8 = 0;
const EXIT_INVALID: u8 = 1;
const EXIT_NOT_CANDIDATE: u8 = 2;
const EXIT_REFUSED: u8 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Parser)]
#[command(name = "lplan", version, about = "Non-trivial L-shaped floor-plans for PTPGs")]
struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Seed for the generator.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Validate a graph and report the necessary conditions.
    Check { graph: PathBuf },
    /// Build a non-trivial L-shaped plan, or explain why none exists.
    Plan {
        graph: PathBuf,
        /// Pin the triplet, as three comma-separated labels.
        #[arg(long)]
        triplet: Option<String>,
        /// Print intermediate artifacts to stderr.
        #[arg(long)]
        trace: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw a plan document as SVG.
    Render {
        plan: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit a random PTPG document.
    Generate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        cips: Option<usize>,
    },
}

fn read(path: &Path) -> Result<Vec<u8>, String> {
    std::fs::read(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn emit(out: Option<&PathBuf>, body: &str) -> Result<(), String> {
    match out {
        Some(p) => std::fs::write(p, body).map_err(|e| format!("{}: {e}", p.display())),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

fn load(path: &Path) -> Result<EmbeddedGraph, String> {
    parse_graph(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

fn parse_triplet(g: &EmbeddedGraph, s: &str) -> Result<Triplet, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [a, b, c] = parts[..] else {
        return Err(format!("--triplet expects three labels, got {s:?}"));
    };
    let id = |l: &str| g.find(l).ok_or_else(|| format!("--triplet: unknown vertex {l:?}"));
    Ok(Triplet { a: id(a)?, b: id(b)?, c: id(c)? })
}

#[derive(Serialize)]
struct CheckReport {
    ptpg: lplan::graph::PtpgReport,
    cips: Vec<Vec<String>>,
    shortcuts: Vec<[String; 2]>,
    triplets: Vec<[String; 3]>,
    candidate: bool,
    reasons: Vec<String>,
}

fn check(g: &EmbeddedGraph, fmt: Format) -> u8 {
    let ptpg = validate_ptpg(g);
    let nec = necessary_conditions(g);
    let l = |v: usize| g.label(v).to_string();
    let mut reasons = nec.reasons.clone();
    if !ptpg.passed() {
        reasons.insert(0, "not a bi-connected PTPG".into());
    }
    let rep = CheckReport {
        cips: find_cips(g).iter().map(|c| c.vertices.iter().map(|&v| l(v)).collect()).collect(),
        shortcuts: find_shortcuts(g).iter().map(|s| [l(s.u), l(s.v)]).collect(),
        triplets: nec.triplets.iter().map(|t| [l(t.a), l(t.b), l(t.c)]).collect(),
        candidate: ptpg.passed() && nec.pass,
        reasons,
        ptpg,
    };
    match fmt {
        Format::Json => print!("{}", json(&rep)),
        Format::Text => {
            println!("ptpg: {}", if rep.ptpg.passed() { "pass" } else { "fail" });
            println!("  biconnected: {}", rep.ptpg.is_biconnected);
            println!("  non-triangular interior faces: {}", rep.ptpg.nontriangular_interior_faces.len());
            for t in &rep.ptpg.separating_triangles {
                println!("  separating triangle: {}", t.map(l).join(" "));
            }
            println!("cips: {}", rep.cips.len());
            for c in &rep.cips {
                println!("  {}", c.join(" "));
            }
            println!("shortcuts: {}", rep.shortcuts.len());
            for s in &rep.shortcuts {
                println!("  {}-{}", s[0], s[1]);
            }
            println!("triplets: {}", rep.triplets.len());
            for t in &rep.triplets {
                println!("  ({})", t.join(", "));
            }
            println!("verdict: {}", if rep.candidate { "candidate" } else { "no non-trivial L" });
        }
    }
    for r in &rep.reasons {
        eprintln!("{r}");
    }
    if rep.candidate { EXIT_OK } else { EXIT_NOT_CANDIDATE }
}

fn run_plan(
    g: &EmbeddedGraph,
    triplet: Option<&str>,
    trace: bool,
    out: Option<&PathBuf>,
    fmt: Format,
) -> Result<u8, String> {
    let pinned = triplet.map(|s| parse_triplet(g, s)).transpose()?;
    let opts = PlanOptions { triplet: pinned, trace };
    let outcome = match plan(g, &opts) {
        Ok(o) => o,
        Err(Error::InvalidInput(rep)) => {
            eprintln!("invalid input: graph is not a bi-connected PTPG");
            eprintln!("{}", json(&rep).trim_end());
            return Ok(EXIT_INVALID);
        }
        Err(e) => return Err(e.to_string()),
    };
    match &outcome {
        Outcome::Plan(p) => {
            let doc = PlanDocument::from_planned(g, p);
            emit(out, &(serialize_plan(&doc) + "\n"))?;
            if let Some(t) = &p.trace {
                match fmt {
                    Format::Json => eprint!("{}", json(t)),
                    Format::Text => {
                        eprintln!("paths: {:?}", doc.meta.paths);
                        eprintln!("P': {:?}", t.pprime);
                        eprintln!("initial REL: {} edges", t.rel_initial.len());
                        for a in &t.flips.actions {
                            eprintln!("  {}", describe(&t.labels, a));
                        }
                        eprintln!("final REL: {} edges", t.rel_final.len());
                    }
                }
            }
            Ok(EXIT_OK)
        }
        refused => {
            if fmt == Format::Json {
                print!("{}", json(refused));
            }
            eprintln!("refused: {}", refused.reason().unwrap_or_default());
            Ok(EXIT_REFUSED)
        }
    }
}

fn describe(labels: &[String], a: &lplan::flipping::Action) -> String {
    use lplan::flipping::Action;
    let name = |v: usize| labels[v].clone();
    match a {
        Action::Flip(x, y) => format!("flip {}-{}", name(*x), name(*y)),
        Action::FlipVertex(v) => format!("flip vertex {}", name(*v)),
        Action::Rotate(c) => format!("rotate ({})", c.map(name).join(", ")),
    }
}

fn render(path: &Path, out: Option<&PathBuf>) -> Result<u8, String> {
    let doc = parse_plan(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))?;
    doc.to_floorplan().map_err(|e| format!("{}: {e}", path.display()))?;
    emit(out, &render_svg(&doc, SvgStyle::default()))?;
    Ok(EXIT_OK)
}

fn main() -> ExitCode {
    // usage errors exit 1 so that 2 keeps meaning "not a candidate"
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INVALID } else { EXIT_OK });
        }
    };
    let res = match &cli.cmd {
        Cmd::Check { graph } => load(graph).map(|g| check(&g, cli.format)),
        Cmd::Plan { graph, triplet, trace, out } => {
            load(graph).and_then(|g| run_plan(&g, triplet.as_deref(), *trace, out.as_ref(), cli.format))
        }
        Cmd::Render { plan, out } => render(plan, out.as_ref()),
        Cmd::Generate { n, cips } => generate_ptpg(GenSpec { n: *n, seed: cli.seed, cip_target: *cips })
            .map(|g| {
                println!("{}", serialize_graph(&g));
                EXIT_OK
            })
            .map_err(|e| e.to_string()),
    };
    match res {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INVALID)
        }
    }
}
