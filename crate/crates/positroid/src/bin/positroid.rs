//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 on malformed input or usage, 2 when the
//! input is well formed but violates a mathematical precondition.

use std::fmt::Write as _;
use std::io::Read as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use positroid::enumeration::{cell_poly, williams_poly, CountTable};
use positroid::exactmath::{fmt_rational, PluckerVector, RationalMatrix};
use positroid::lediagram::{gamma_network, invert_measurement, LeDiagram, LeTableau};
use positroid::network::{boundary_measurement_matrix, measure, perfect_and_trivalent, PlanarDirectedNetwork};
use positroid::plabic::{
    apply_step, compact_trace, is_reduced, matroid, move_sites, reduce, reduction_sites, trips, PlabicNetwork, Step,
};
use positroid::positroid::{circular_leq, covers, le_from_perm, perm_from_le, rank, DecoratedPermutation};
use positroid::selfcheck::{self, Config};
use positroid::{Error, Result};

#[derive(Parser, Debug)]
#[command(name = "positroid", version, about = "Exact combinatorics of the totally nonnegative Grassmannian")]
struct Cli {
    /// Emit one JSON document instead of the text format.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct FileArg {
    /// Input file, or `-` for standard input.
    file: String,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Boundary measurement of a network file.
    Measure {
        #[command(flatten)]
        input: FileArg,
        /// Print the boundary measurement matrix.
        #[arg(long, conflicts_with = "plucker")]
        matrix: bool,
        /// Print the Plücker coordinates (default).
        #[arg(long)]
        plucker: bool,
    },
    /// Perfect trivalent network with the same boundary measurement.
    Perfect(FileArg),
    /// Le-tableau of a totally nonnegative matrix.
    Invert(FileArg),
    /// Γ-network of a Le-tableau (or 0/1 Le-diagram).
    Le2net(FileArg),
    /// Decorated permutation of a Le-diagram.
    Le2perm(FileArg),
    /// Le-diagram of a decorated permutation.
    Perm2le {
        /// One-line notation with B/W marks on fixed points, e.g. "3 1 4B 2".
        #[arg(num_args = 1.., required = true)]
        perm: Vec<String>,
    },
    /// Reduced plabic graph of a decorated permutation.
    Perm2graph {
        #[arg(num_args = 1.., required = true)]
        perm: Vec<String>,
    },
    /// Trips and decorated trip permutation of a plabic graph.
    Trips(FileArg),
    /// Reduces a plabic network and prints the replayable trace.
    Reduce(FileArg),
    /// Bases of the matroid of a plabic graph.
    Matroid {
        #[command(flatten)]
        input: FileArg,
        /// Also print the Grassmann necklace.
        #[arg(long)]
        necklace: bool,
    },
    /// Applicable moves and reductions of a plabic graph.
    Moves {
        #[command(flatten)]
        input: FileArg,
        /// List the sites (the only mode).
        #[arg(long)]
        list: bool,
    },
    /// Applies one move or reduction, e.g. --site "square face=3".
    Move {
        #[command(flatten)]
        input: FileArg,
        #[arg(long)]
        site: String,
    },
    /// Whether PERM1 ≤ PERM2 in the circular Bruhat order.
    Leq { perm1: String, perm2: String },
    /// Covers of a cell, or all cells of Gr(k, n) with their ranks.
    Poset {
        #[arg(long, conflicts_with_all = ["k", "n"])]
        covers: Option<String>,
        #[arg(long, requires = "n")]
        k: Option<usize>,
        #[arg(long, requires = "k")]
        n: Option<usize>,
    },
    /// Number of cells N_kn for n up to N.
    Count {
        #[arg(long)]
        n: usize,
        /// Rank generating polynomials N_kn(q).
        #[arg(long)]
        q: bool,
        /// Cross-check every method and fail on disagreement.
        #[arg(long)]
        check_all: bool,
        /// CSV output.
        #[arg(long)]
        csv: bool,
    },
    /// DOT description of a plabic graph.
    ExportDot(FileArg),
    /// Runs the invariant suite.
    Selfcheck {
        /// Largest boundary size (3..=6); the acceptance sizes when omitted.
        #[arg(long)]
        n: Option<usize>,
        /// Run a single check by number.
        #[arg(long)]
        only: Option<usize>,
    },
}

/// Text and JSON renderings of a command result.
struct Output {
    text: String,
    json: Value,
    /// Exit code when the command succeeded but reports a failure.
    code: u8,
}

impl Output {
    fn new(text: String, json: Value) -> Self {
        Output { text, json, code: 0 }
    }
}

fn read_input(path: &str) -> Result<String> {
    let mut s = String::new();
    if path == "-" {
        std::io::stdin().read_to_string(&mut s).map_err(|e| Error::validation(format!("reading stdin: {e}")))?;
    } else {
        s = std::fs::read_to_string(path).map_err(|e| Error::validation(format!("reading {path}: {e}")))?;
    }
    Ok(s)
}

fn parse_perm(words: &[String]) -> Result<DecoratedPermutation> {
    words.join(" ").parse()
}

fn plucker_json(p: &PluckerVector) -> Value {
    let coords: Vec<Value> = p.iter().map(|(s, v)| json!({ "subset": s, "value": fmt_rational(v) })).collect();
    json!({ "k": p.k(), "n": p.n(), "coordinates": coords })
}

fn matrix_json(a: &RationalMatrix) -> Value {
    let rows: Vec<Vec<String>> = a.to_rows().iter().map(|r| r.iter().map(fmt_rational).collect()).collect();
    json!({ "rows": rows })
}

/// The network of a plabic file, compacted so that ids match its canonical
/// text form.
fn read_plabic(path: &str) -> Result<PlabicNetwork> {
    Ok(PlabicNetwork::parse(&read_input(path)?)?.compact())
}

/// Site ids as written in files: vertex ids are 1-based there.
fn site_text(s: &Step) -> String {
    s.map_vertices(|v| v + 1).to_string()
}

fn run(cmd: Command) -> Result<Output> {
    Ok(match cmd {
        Command::Measure { input, matrix, .. } => {
            let net = PlanarDirectedNetwork::parse(&read_input(&input.file)?)?;
            if matrix {
                let a = boundary_measurement_matrix(&net)?;
                Output::new(a.to_text(), matrix_json(&a))
            } else {
                let p = measure(&net)?;
                Output::new(p.to_text(), plucker_json(&p))
            }
        }
        Command::Perfect(input) => {
            let net = perfect_and_trivalent(&PlanarDirectedNetwork::parse(&read_input(&input.file)?)?)?;
            Output::new(net.to_text(), serde_json::to_value(net.to_doc()).expect("serializable"))
        }
        Command::Invert(input) => {
            let a = RationalMatrix::parse(&read_input(&input.file)?)?;
            let t = invert_measurement(&a)?;
            Output::new(t.to_text(), serde_json::to_value(&t).expect("serializable"))
        }
        Command::Le2net(input) => {
            let t = LeTableau::parse(&read_input(&input.file)?)?;
            let net = gamma_network(&t);
            Output::new(net.to_text(), serde_json::to_value(net.to_doc()).expect("serializable"))
        }
        Command::Le2perm(input) => {
            let text = read_input(&input.file)?;
            let d = match LeDiagram::parse(&text) {
                Ok(d) => d,
                Err(_) => LeTableau::parse(&text)?.diagram(),
            };
            let p = perm_from_le(&d);
            Output::new(format!("{}\n", p.to_text()), json!({ "perm": p.to_text() }))
        }
        Command::Perm2le { perm } => {
            let d = le_from_perm(&parse_perm(&perm)?)?;
            Output::new(d.to_text(), serde_json::to_value(&d).expect("serializable"))
        }
        Command::Perm2graph { perm } => {
            let g = positroid::plabic::from_decorated_permutation(&parse_perm(&perm)?)?;
            let net = PlabicNetwork::unit(g)?;
            Output::new(net.graph().to_text(), serde_json::to_value(net.to_doc()).expect("serializable"))
        }
        Command::Trips(input) => {
            let net = read_plabic(&input.file)?;
            let g = net.graph();
            let td = trips(g);
            let check = is_reduced(g)?;
            let perm = td.decorated().map(|p| p.to_text());
            let mut text = String::new();
            match &perm {
                Some(p) => writeln!(text, "perm {p}").expect("string write"),
                None => writeln!(text, "perm {}  # uncolored fixed points", join(&td.perm)).expect("string write"),
            }
            for t in &td.trips {
                let _ = writeln!(text, "trip {} -> {} length {}", t.start, t.end, t.steps.len());
            }
            for r in &td.round_trips {
                let _ = writeln!(text, "round-trip length {}", r.len());
            }
            let _ = match &check.violation {
                None => writeln!(text, "reduced yes"),
                Some(v) => writeln!(text, "reduced no  # {v:?}"),
            };
            let trips_json: Vec<Value> =
                td.trips.iter().map(|t| json!({ "start": t.start, "end": t.end, "length": t.steps.len() })).collect();
            let json = json!({
                "perm": td.perm,
                "decorated": perm,
                "trips": trips_json,
                "round_trips": td.round_trips.len(),
                "reduced": check.is_reduced(),
                "violation": check.violation,
            });
            Output::new(text, json)
        }
        Command::Reduce(input) => {
            let net = read_plabic(&input.file)?;
            let r = reduce(&net)?;
            let trace: Vec<String> = compact_trace(&net, &r.trace)?.iter().map(site_text).collect();
            let mut text = r.network.to_text();
            let _ = writeln!(text, "# singletons {}", r.singletons);
            for s in &trace {
                let _ = writeln!(text, "# {s}");
            }
            let json = json!({ "network": r.network.to_doc(), "singletons": r.singletons, "trace": trace });
            Output::new(text, json)
        }
        Command::Matroid { input, necklace } => {
            let net = read_plabic(&input.file)?;
            let m = matroid(net.graph())?;
            let mut text = m.to_text();
            let mut json = serde_json::to_value(&m).expect("serializable");
            if necklace {
                let neck = positroid::positroid::necklace_from_matroid(&m)?;
                text.push_str("# necklace\n");
                text.push_str(&neck.to_text());
                json["necklace"] = serde_json::to_value(neck.sets()).expect("serializable");
            }
            Output::new(text, json)
        }
        Command::Moves { input, .. } => {
            let net = read_plabic(&input.file)?;
            let g = net.graph();
            let sites: Vec<String> = move_sites(g)
                .into_iter()
                .map(Step::Move)
                .chain(reduction_sites(g).into_iter().map(Step::Reduction))
                .map(|s| site_text(&s))
                .collect();
            let text: String = sites.iter().map(|s| format!("{s}\n")).collect();
            Output::new(text, json!({ "sites": sites }))
        }
        Command::Move { input, site } => {
            let net = read_plabic(&input.file)?;
            let step: Step = site.parse()?;
            let bad = std::cell::Cell::new(false);
            let step = step.map_vertices(|v| {
                bad.set(bad.get() || v == 0);
                v.saturating_sub(1)
            });
            if bad.get() {
                return Err(Error::validation("vertex ids start at 1"));
            }
            let out = apply_step(&net, &step)?;
            Output::new(out.to_text(), serde_json::to_value(out.to_doc()).expect("serializable"))
        }
        Command::Leq { perm1, perm2 } => {
            let (p, s) = (perm1.parse()?, perm2.parse()?);
            let le = circular_leq(&p, &s)?;
            Output::new(format!("{le}\n"), json!({ "leq": le }))
        }
        Command::Poset { covers: Some(perm), .. } => {
            let p: DecoratedPermutation = perm.parse()?;
            let cs: Vec<String> = covers(&p).iter().map(|c| c.to_text()).collect();
            let text: String = cs.iter().map(|c| format!("{c}\n")).collect();
            Output::new(text, json!({ "perm": p.to_text(), "rank": rank(&p), "covers": cs }))
        }
        Command::Poset { k: Some(k), n: Some(n), .. } => {
            if k > n || n > 8 {
                return Err(Error::validation("need k ≤ n ≤ 8"));
            }
            let mut cells: Vec<(usize, String)> =
                DecoratedPermutation::all_of_type(k, n).iter().map(|p| (rank(p), p.to_text())).collect();
            cells.sort();
            let text: String = cells.iter().map(|(r, p)| format!("{r} {p}\n")).collect();
            let json: Vec<Value> = cells.iter().map(|(r, p)| json!({ "rank": r, "perm": p })).collect();
            Output::new(text, json!({ "k": k, "n": n, "cells": json }))
        }
        Command::Poset { .. } => return Err(Error::validation("poset needs --covers PERM or --k K --n N")),
        Command::Count { n, q, check_all, csv } => {
            if n > 30 {
                return Err(Error::validation("count supports n ≤ 30"));
            }
            let t = CountTable::compute(n, q);
            let mut out = Output::new(
                if csv { t.to_csv() } else { t.to_text() },
                serde_json::to_value(&t).expect("serializable"),
            );
            if q && !csv {
                let polys = t.polys.as_ref().expect("requested");
                out.text = polys
                    .iter()
                    .enumerate()
                    .flat_map(|(n, row)| row.iter().enumerate().map(move |(k, p)| format!("{k} {n} {}\n", join(p))))
                    .collect();
            }
            if check_all {
                let williams =
                    (0..=n).all(|m| (0..=m).all(|k| williams_poly(k, m).is_none_or(|w| w == cell_poly(k, m))));
                // each polynomial evaluated at q = 1 gives the count
                let at_one = t.polys.as_ref().is_none_or(|polys| {
                    polys.iter().zip(&t.formula).all(|(ps, row)| {
                        ps.iter().zip(row).all(|(p, c)| p.iter().sum::<num_bigint::BigUint>() == *c)
                    })
                });
                let ok = t.consistent() && williams && at_one;
                let _ = writeln!(out.text, "# check-all {}", if ok { "consistent" } else { "INCONSISTENT" });
                out.json["consistent"] = json!(ok);
                if !ok {
                    out.code = 2;
                }
            }
            out
        }
        Command::ExportDot(input) => {
            let net = read_plabic(&input.file)?;
            let dot = net.graph().to_dot();
            Output::new(dot.clone(), json!({ "dot": dot }))
        }
        Command::Selfcheck { n, only } => {
            let cfg = match n {
                Some(n) => Config::with_n(n)?,
                None => Config::acceptance(),
            };
            let results = match only {
                Some(id) => vec![selfcheck::run_one(id, &cfg)?],
                None => selfcheck::run(&cfg),
            };
            let text: String = results.iter().map(|r| format!("{}\n", r.line())).collect();
            let ok = results.iter().all(|r| r.passed);
            let mut out = Output::new(text, json!({ "config": cfg, "results": results, "passed": ok }));
            out.code = if ok { 0 } else { 2 };
            out
        }
    })
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let json = cli.json;
    match run(cli.command) {
        Ok(out) => {
            if json {
                println!("{}", serde_json::to_string_pretty(&out.json).expect("serializable"));
            } else {
                print!("{}", out.text);
            }
            ExitCode::from(out.code)
        }
        Err(e) => {
            if json {
                println!("{}", json!({ "error": e.to_string(), "exit_code": e.exit_code() }));
            }
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
