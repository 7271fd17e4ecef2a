//! Command-line front end: build the pyramid construction, verify edge-list
//! files, glue counterexamples, and search flip sequences.
//!
//! Exit codes: 0 = affirmative result, 1 = negative finding (not FBD, not
//! stuck, no sequence), 2 = usage or input error.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use fbd::glue::{self, Copies};
use fbd::graph::{DirectedGraph, Edge};
use fbd::io::{compact_ids, parse_edge_list, sha256_hex, write_edge_list, ReportFile};
use fbd::pyramid;
use fbd::search::{self, Mode, Outcome};
use fbd::verify::{metrics, verify_fbd};

#[derive(Parser)]
#[command(name = "fbd", version, about = "Fully blocked digraph toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Weak,
    Strict,
}

#[derive(Subcommand)]
enum Command {
    /// Build the folded pyramid construction and write it as an edge list
    Build {
        /// Tree depth (10 reproduces the published graph)
        #[arg(long, default_value_t = 10)]
        depth: u32,
        /// Remove the level-0/1 remnants (6 vertices, 48 edges at depth 10)
        #[arg(long)]
        trim: bool,
        /// Greedily merge distance-5 vertex pairs afterwards
        #[arg(long)]
        minimize: bool,
        /// Output edge-list file
        #[arg(short, long)]
        out: PathBuf,
        /// Also write a "address,corner,id" name-map sidecar
        #[arg(long)]
        name_map: Option<PathBuf>,
    },
    /// Check the four FBD conditions on an edge-list file
    Verify {
        input: PathBuf,
        /// Write a machine-readable JSON report here
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Glue copies of an FBD-graph into the stuck counterexample
    Glue {
        input: PathBuf,
        /// Picked edge "u,v" (defaults to the smallest edge)
        #[arg(long)]
        edge: Option<String>,
        /// Number of copies (3 needs a doubly blocked picked edge)
        #[arg(long, default_value_t = 6)]
        copies: u32,
        #[arg(short, long)]
        out: PathBuf,
        /// Write the cycle vertices d,e,f to this sidecar
        #[arg(long)]
        cycle_out: Option<PathBuf>,
    },
    /// Decide whether every single flip strictly increases the 3-cycle count
    Stuck { input: PathBuf },
    /// Breadth-first search for a monotone flip sequence to zero 3-cycles
    Search {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::Weak)]
        mode: ModeArg,
        /// Maximum number of states to explore
        #[arg(long, default_value_t = 1 << 22)]
        cap: u64,
    },
    /// Per-edge 3-clique statistics and the blocked/unblocked partition
    Metrics { input: PathBuf },
    /// Sample random oriented graphs and search each one (weak mode)
    Probe {
        /// Number of vertices (at most 7)
        #[arg(short = 'n', long)]
        vertices: u32,
        /// Undirected edge probability
        #[arg(short, long, default_value_t = 0.5)]
        probability: f64,
        #[arg(long, default_value_t = 10000)]
        trials: u64,
        #[arg(long)]
        seed: u64,
        /// Dump any failing instance as an edge list into this directory
        #[arg(long)]
        dump_dir: Option<PathBuf>,
    },
    /// Count FBD orientations of the complete graph K_n (1 <= n <= 5)
    Tournaments {
        #[arg(short = 'n', long)]
        vertices: u32,
    },
}

fn load_graph(path: &Path) -> Result<DirectedGraph, String> {
    let file = File::open(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let pairs =
        parse_edge_list(BufReader::new(file)).map_err(|e| format!("{}: {e}", path.display()))?;
    let (pairs, remapped) = compact_ids(&pairs);
    if remapped {
        eprintln!("warning: sparse vertex ids in {} were compacted", path.display());
    }
    Ok(DirectedGraph::from_edge_list(pairs))
}

fn write_graph(path: &Path, g: &DirectedGraph) -> Result<(), String> {
    let file = File::create(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let mut writer = BufWriter::new(file);
    write_edge_list(&mut writer, g).map_err(|e| format!("{}: {e}", path.display()))?;
    writer.flush().map_err(|e| format!("{}: {e}", path.display()))
}

fn parse_edge_arg(s: &str) -> Result<Edge, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err(format!("expected \"u,v\", got {s:?}"));
    }
    let u = parts[0].trim().parse().map_err(|_| format!("invalid vertex id {:?}", parts[0]))?;
    let v = parts[1].trim().parse().map_err(|_| format!("invalid vertex id {:?}", parts[1]))?;
    Ok(Edge::new(u, v))
}

fn run(cli: Cli) -> Result<u8, String> {
    match cli.command {
        Command::Build { depth, trim, minimize, out, name_map } => {
            let mut built = pyramid::build_fbd(depth).map_err(|e| e.to_string())?;
            if trim {
                built = pyramid::trim_levels01(&built).map_err(|e| e.to_string())?;
            }
            if minimize {
                let small =
                    pyramid::distance5_minimize(&built.graph).map_err(|e| e.to_string())?;
                println!(
                    "minimized to {} vertices, {} edges",
                    small.vertex_count(),
                    small.edge_count()
                );
                if name_map.is_some() {
                    eprintln!("warning: --name-map is ignored with --minimize");
                }
                write_graph(&out, &small)?;
                return Ok(0);
            }
            println!(
                "built depth {} graph: {} vertices, {} edges",
                depth,
                built.graph.vertex_count(),
                built.graph.edge_count()
            );
            write_graph(&out, &built.graph)?;
            if let Some(path) = name_map {
                std::fs::write(&path, built.name_map_lines())
                    .map_err(|e| format!("{}: {e}", path.display()))?;
            }
            Ok(0)
        }
        Command::Verify { input, report } => {
            let bytes =
                std::fs::read(&input).map_err(|e| format!("{}: {e}", input.display()))?;
            let pairs = parse_edge_list(&bytes[..]).map_err(|e| format!("{}: {e}", input.display()))?;
            let (pairs, remapped) = compact_ids(&pairs);
            if remapped {
                eprintln!("warning: sparse vertex ids in {} were compacted", input.display());
            }
            let g = DirectedGraph::from_edge_list(pairs);
            println!("loaded {} edges", g.edge_count());
            let result = verify_fbd(&g);
            print!("{}", result.transcript());
            if let Some((p, q)) = result.alpha_avg {
                println!("alpha avg = {p}/{q}, alpha max = {}", result.alpha_max);
            }
            if let Some(path) = report {
                let file = ReportFile::new(&result, sha256_hex(&bytes));
                let json = serde_json::to_string_pretty(&file).expect("report serializes");
                std::fs::write(&path, json).map_err(|e| format!("{}: {e}", path.display()))?;
            }
            Ok(if result.is_fbd { 0 } else { 1 })
        }
        Command::Glue { input, edge, copies, out, cycle_out } => {
            let g = load_graph(&input)?;
            let picked = match edge {
                Some(s) => parse_edge_arg(&s)?,
                None => glue::default_picked_edge(&g).ok_or("input graph has no edges")?,
            };
            let copies = match copies {
                6 => Copies::Six,
                3 => Copies::Three,
                other => return Err(format!("copies must be 6 or 3, got {other}")),
            };
            let glued = glue::glue_copies(&g, picked, copies).map_err(|e| e.to_string())?;
            let (d, e, f) = glued.cycle_vertices;
            println!(
                "glued {} copies along {picked}: {} vertices, {} edges, cycle ({d}, {e}, {f})",
                copies.count(),
                glued.graph.vertex_count(),
                glued.graph.edge_count()
            );
            write_graph(&out, &glued.graph)?;
            if let Some(path) = cycle_out {
                std::fs::write(&path, format!("{d},{e},{f}\n"))
                    .map_err(|err| format!("{}: {err}", path.display()))?;
            }
            Ok(0)
        }
        Command::Stuck { input } => {
            let g = load_graph(&input)?;
            let report = glue::is_stuck(&g).map_err(|e| e.to_string())?;
            println!(
                "3-cycles: {}, minimal flip delta: {}",
                report.three_cycle_count, report.min_delta
            );
            if report.stuck {
                println!("graph is stuck: every flip increases the 3-cycle count");
                Ok(0)
            } else {
                if let Some(e) = report.counterexample_edge {
                    println!("not stuck: flipping {e} does not increase the count");
                } else {
                    println!("not stuck: the graph has no 3-cycles");
                }
                Ok(1)
            }
        }
        Command::Search { input, mode, cap } => {
            let g = load_graph(&input)?;
            let mode = match mode {
                ModeArg::Weak => Mode::Weak,
                ModeArg::Strict => Mode::Strict,
            };
            let result = search::monotone_sequence_bfs(&g, mode, cap)
                .map_err(|e| e.to_string())?;
            match result.outcome {
                Outcome::Found(trace) => {
                    println!(
                        "found a sequence of {} flips (start count {})",
                        trace.flips.len(),
                        trace.start_count
                    );
                    for (e, c) in trace.flips.iter().zip(&trace.counts) {
                        println!("flip {e} -> {c} 3-cycles");
                    }
                    Ok(0)
                }
                Outcome::None => {
                    println!("none ({} states explored)", result.states_explored);
                    Ok(1)
                }
                Outcome::CapExceeded => {
                    println!("state cap exceeded after {} states", result.states_explored);
                    Ok(1)
                }
            }
        }
        Command::Metrics { input } => {
            let g = load_graph(&input)?;
            let m = metrics(&g);
            println!("edges: {}", g.edge_count());
            match m.alpha_avg {
                Some((p, q)) => println!("alpha avg = {p}/{q}"),
                None => println!("alpha avg undefined (no edges)"),
            }
            println!("alpha max = {}", m.alpha_max);
            println!("alpha histogram:");
            for (alpha, count) in &m.histogram {
                println!("  {alpha}: {count}");
            }
            println!("unblocked edges: {}", m.unblocked_edges.len());
            for e in &m.unblocked_edges {
                println!("  {e}");
            }
            Ok(0)
        }
        Command::Probe { vertices, probability, trials, seed, dump_dir } => {
            let summary = search::random_probe(vertices, probability, trials, seed)
                .map_err(|e| e.to_string())?;
            print!("{summary}");
            if let Some(dir) = &dump_dir {
                for failure in &summary.failures {
                    let path = dir.join(format!("probe-failure-{}.txt", failure.trial));
                    let mut text = String::new();
                    for (u, v) in &failure.edges {
                        text.push_str(&format!("{u},{v}\n"));
                    }
                    std::fs::write(&path, text)
                        .map_err(|e| format!("{}: {e}", path.display()))?;
                }
            }
            Ok(if summary.failures.is_empty() { 0 } else { 1 })
        }
        Command::Tournaments { vertices } => {
            let count = search::scan_tournaments(vertices).map_err(|e| e.to_string())?;
            println!("{count} FBD tournaments on {vertices} vertices");
            Ok(if count == 0 { 0 } else { 1 })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
