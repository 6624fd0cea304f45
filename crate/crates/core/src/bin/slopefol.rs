use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::json;

use slopefol::ctf::{check_degenerate, decide_ctf, detect_tree, local_problems, CtfError, SolidTorus};
use slopefol::graph::{validate, PlumbingGraph, Role};
use slopefol::homology::homology;
use slopefol::oracle::{oracle_check, OracleCheck};
use slopefol::random::{rng, seifert_instance, PieceParams};
use slopefol::report;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Parser)]
#[command(
    name = "slopefol",
    version,
    about = "Foliation-detected slopes and taut foliation certificates for graph manifolds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long, value_enum, default_value = "text", global = true)]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Check a manifold file and report its homology.
    Validate { input: PathBuf },
    /// Rational longitude of a solid-torus manifold.
    Longitude { input: PathBuf },
    /// Detected slopes on the free torus of a solid-torus manifold.
    Detect { input: PathBuf },
    /// Decide whether a closed manifold admits a co-oriented taut foliation.
    Ctf {
        input: PathBuf,
        #[arg(long, default_value_t = 0)]
        split_edge: usize,
    },
    /// Compare the closed-form intervals with the brute-force oracles.
    OracleCheck {
        /// Manifold file; omit with --random.
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 24, value_parser = clap::value_parser!(u32).range(1..))]
        grid: u32,
        #[arg(long, default_value_t = 48, value_parser = clap::value_parser!(i64).range(2..=2000))]
        nmax: i64,
        /// Check this many random Seifert pieces instead of a file.
        #[arg(long)]
        random: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Edge to split a closed manifold along.
        #[arg(long, default_value_t = 0)]
        split_edge: usize,
    },
}

struct Fail(u8, String);

fn load(path: &PathBuf) -> Result<PlumbingGraph, Fail> {
    let text = std::fs::read_to_string(path).map_err(|e| Fail(1, format!("{}: {}", path.display(), e)))?;
    PlumbingGraph::from_json(&text).map_err(|e| Fail(1, e.to_string()))
}

fn ctf_fail(e: CtfError) -> Fail {
    match e {
        CtfError::Role { .. } | CtfError::NotQhs(_) | CtfError::Edgeless | CtfError::ExtraBoundary(_) => {
            Fail(2, e.to_string())
        }
        _ => Fail(1, e.to_string()),
    }
}

fn solid_torus(g: &PlumbingGraph) -> Result<SolidTorus<'_>, Fail> {
    SolidTorus::new(g).map_err(ctf_fail)
}

fn emit(format: Format, value: serde_json::Value, text: String) {
    match format {
        Format::Json => print!("{}", report::render(&value)),
        Format::Text => print!("{}", text),
    }
}

fn run(cli: Cli) -> Result<u8, Fail> {
    let f = cli.format;
    match cli.command {
        Command::Validate { input } => {
            let g = load(&input)?;
            let diags = validate(&g);
            let ok = diags.iter().all(|d| d.severity != slopefol::graph::Severity::Error);
            let h = ok.then(|| homology(&g));
            let mut text: String = diags.iter().map(|d| format!("{}\n", d)).collect();
            text.push_str(if ok { "valid\n" } else { "invalid\n" });
            if let Some(h) = &h {
                text.push_str(&format!("betti {} torsion {:?}\n", h.betti, h.torsion));
            }
            emit(f, report::validate_json(&diags, h.as_ref()), text);
            Ok(if ok { 0 } else { 1 })
        }
        Command::Longitude { input } => {
            let g = load(&input)?;
            let v = solid_torus(&g)?;
            let (l, order) = v.longitude().map_err(ctf_fail)?;
            let torus = g.side_name(v.root);
            let text = format!("lambda({}) = {} [tau {}], order {}\n", torus, l, l.tau_string(), order);
            emit(f, report::longitude_json(&torus, &l, &order), text);
            Ok(0)
        }
        Command::Detect { input } => {
            let g = load(&input)?;
            let v = solid_torus(&g)?;
            let tree = detect_tree(&v).map_err(ctf_fail)?;
            let deg = check_degenerate(&v).map_err(ctf_fail)?;
            let torus = g.side_name(v.root);
            emit(
                f,
                report::detection_json(&torus, &tree.result, Some(&deg)),
                report::detection_text(&torus, &tree.result, Some(&deg)),
            );
            Ok(if deg.consistent { 0 } else { 3 })
        }
        Command::Ctf { input, split_edge } => {
            let g = load(&input)?;
            let v = decide_ctf(&g, split_edge).map_err(ctf_fail)?;
            emit(f, report::ctf_json(&g, &v), report::ctf_text(&g, &v));
            Ok(0)
        }
        Command::OracleCheck {
            input,
            grid,
            nmax,
            random,
            seed,
            split_edge,
        } => {
            let grid = BigInt::from(grid);
            let mut rows: Vec<(String, OracleCheck)> = vec![];
            match (input, random) {
                (None, Some(count)) => {
                    let mut r = rng(seed);
                    let params = PieceParams::default();
                    while rows.len() < count {
                        let (p, c) = seifert_instance(&mut r, &params);
                        if let Some(chk) = oracle_check(&p, &c, &grid, nmax) {
                            rows.push((format!("random {}", rows.len()), chk));
                        }
                    }
                }
                (Some(path), None) => {
                    let g = load(&path)?;
                    let roots = match g.role {
                        Role::SolidTorus => vec![solid_torus(&g)?],
                        Role::Closed => {
                            let e = g
                                .edges
                                .get(split_edge)
                                .ok_or_else(|| ctf_fail(CtfError::NoEdge(split_edge)))?;
                            let errs: Vec<String> = validate(&g)
                                .into_iter()
                                .filter(|d| d.severity == slopefol::graph::Severity::Error)
                                .map(|d| d.message)
                                .collect();
                            if !errs.is_empty() {
                                return Err(Fail(1, errs.join("; ")));
                            }
                            vec![
                                SolidTorus::split(&g, split_edge, e.from),
                                SolidTorus::split(&g, split_edge, e.to),
                            ]
                        }
                    };
                    for v in roots {
                        let tree = detect_tree(&v).map_err(ctf_fail)?;
                        for (i, p, c) in local_problems(&v, &tree).map_err(ctf_fail)? {
                            if let Some(chk) = oracle_check(&p, &c, &grid, nmax) {
                                rows.push((format!("piece {}", g.pieces[i].id), chk));
                            }
                        }
                    }
                }
                _ => return Err(Fail(1, "give either an input file or --random".into())),
            }
            let agree = rows.iter().all(|(_, c)| c.agree);
            let mut text = String::new();
            for (name, c) in &rows {
                text.push_str(&format!(
                    "{}: core [{}, {}] grid [{}, {}] low {:?}/{:?} high {:?}/{:?} {}\n",
                    name,
                    c.core.0,
                    c.core.1,
                    c.grid.0,
                    c.grid.1,
                    c.low,
                    c.low_oracle,
                    c.high,
                    c.high_oracle,
                    if c.agree { "ok" } else { "MISMATCH" }
                ));
            }
            text.push_str(&format!(
                "{} checks, {}\n",
                rows.len(),
                if agree { "all agree" } else { "mismatch" }
            ));
            let checks: Vec<_> = rows.iter().map(|(n, c)| json!({ "name": n, "check": c })).collect();
            let value =
                json!({ "schema": report::SCHEMA, "command": "oracle-check", "agree": agree, "checks": checks });
            emit(f, value, text);
            Ok(if agree { 0 } else { 3 })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Fail(code, msg)) => {
            eprintln!("error: {}", msg);
            ExitCode::from(code)
        }
    }
}
