use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use pathid::circuit::{build_ghz_circuit, build_w3_circuit, W3Settings};
use pathid::fock::set_pruning_epsilon;
use pathid::format::{self, equivalence_json, graph_state_json, matchings_json, report_json, simulation_table};
use pathid::graph::{ghz_graph, to_dot, verify_equivalence, w_graph};
use pathid::optics::rhom_probabilities;
use pathid::{Circuit, Error, ExperimentGraph};

/// Exit codes. Usage errors share code 1 with parse errors so that 2 keeps
/// its single meaning.
const EXIT_INVALID: u8 = 1;
const EXIT_EMPTY: u8 = 2;
const EXIT_FAIL: u8 = 3;

/// Path-identity multiphoton state simulator
#[derive(Parser)]
#[command(name = "pathid", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Propagate a circuit file and report the post-selected state
    Simulate {
        file: PathBuf,
        /// State file to compute the fidelity against (overrides the circuit's target)
        #[arg(long)]
        target: Option<PathBuf>,
        /// List the probability of every contributing emission process
        #[arg(long)]
        breakdown: bool,
        #[arg(long)]
        json: bool,
    },
    /// Print the perfect-matching state of a graph file
    GraphState {
        file: PathBuf,
        /// Also write the graph as Graphviz DOT
        #[arg(long)]
        dot: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// List the perfect matchings of a graph file
    Matchings {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Check that a graph and a circuit produce the same state
    Verify {
        graph: PathBuf,
        circuit: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Write the GHZ_N graph, circuit and DOT files
    MakeGhz {
        n: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write the W_N graph, circuit and DOT files (odd N)
    MakeW {
        n: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Tabulate the reversed-HOM coincidence curve as CSV
    SweepRhom {
        #[arg(long)]
        steps: usize,
        #[arg(long)]
        out: PathBuf,
        /// Upper end of the phase range, in radians
        #[arg(long, default_value_t = PI)]
        max: f64,
    },
}

fn read(path: &Path) -> pathid::Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

fn write(path: &Path, text: &str) -> pathid::Result<()> {
    fs::write(path, text).map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

fn load_circuit(path: &Path) -> pathid::Result<Circuit> {
    format::parse_circuit(&read(path)?)
}

fn load_graph(path: &Path) -> pathid::Result<ExperimentGraph> {
    format::parse_graph(&read(path)?)
}

fn print_json(v: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("values serialize"));
}

fn simulate(file: &Path, target: Option<&Path>, breakdown: bool, json: bool) -> pathid::Result<u8> {
    let mut circuit = load_circuit(file)?;
    if let Some(t) = target {
        circuit.target = Some(format::parse_state(&read(t)?)?);
    }
    let report = if breakdown { circuit.run_with_breakdown()? } else { circuit.run()? };
    if json {
        print_json(&report_json(&report));
    } else {
        print!("{}", simulation_table(&report));
    }
    Ok(if report.is_empty() { EXIT_EMPTY } else { 0 })
}

fn graph_state(file: &Path, dot: Option<&Path>, json: bool) -> pathid::Result<u8> {
    let g = load_graph(file)?;
    let gs = g.state();
    let projected = if g.triggers().is_empty() { None } else { g.projected_state() };
    if let Some(p) = dot {
        write(p, &to_dot(&g))?;
    }
    if json {
        print_json(&graph_state_json(&gs, projected.as_ref()));
        return Ok(0);
    }
    println!("perfect matchings  {}", gs.matching_count);
    match &gs.normalized {
        Some(s) => println!("state              {s}"),
        None => println!("state              0"),
    }
    if !g.triggers().is_empty() {
        let shown = projected.map(|s| s.to_string()).unwrap_or_else(|| "0".into());
        println!("heralded on {}  {shown}", g.triggers().join(","));
    }
    Ok(0)
}

fn matchings(file: &Path, json: bool) -> pathid::Result<u8> {
    let g = load_graph(file)?;
    let ms = g.perfect_matchings();
    let v = matchings_json(&g, &ms);
    if json {
        print_json(&v);
    } else {
        println!("{} perfect matchings", ms.len());
        for m in v["matchings"].as_array().into_iter().flatten() {
            let edges: Vec<&str> = m.as_array().into_iter().flatten().filter_map(|e| e.as_str()).collect();
            println!("  {}", edges.join("  "));
        }
    }
    Ok(0)
}

fn verify(graph: &Path, circuit: &Path, json: bool) -> pathid::Result<u8> {
    let eq = verify_equivalence(&load_graph(graph)?, &load_circuit(circuit)?)?;
    if json {
        print_json(&equivalence_json(&eq));
    } else {
        println!("{} fidelity {:.12}", if eq.pass { "PASS" } else { "FAIL" }, eq.fidelity);
    }
    Ok(if eq.pass { 0 } else { EXIT_FAIL })
}

fn make(stem: &str, g: &ExperimentGraph, c: &Circuit, out: &Path) -> pathid::Result<u8> {
    fs::create_dir_all(out)?;
    let files = [
        (format!("{stem}_graph.json"), format::graph_to_json(g)),
        (format!("{stem}_circuit.json"), format::circuit_to_json(c)?),
        (format!("{stem}.dot"), to_dot(g)),
    ];
    for (name, text) in files {
        let p = out.join(name);
        write(&p, &format!("{}\n", text.trim_end()))?;
        println!("wrote {}", p.display());
    }
    Ok(0)
}

fn make_ghz(n: usize, out: &Path) -> pathid::Result<u8> {
    make(&format!("ghz{n}"), &ghz_graph(n)?, &build_ghz_circuit(n)?, out)
}

fn make_w(n: usize, out: &Path) -> pathid::Result<u8> {
    let g = w_graph(n)?;
    // only N = 3 has a dedicated chip; larger N get the edge-per-source layout
    let c = if n == 3 { build_w3_circuit(W3Settings::default())? } else { g.to_circuit()? };
    make(&format!("w{n}"), &g, &c, out)
}

fn sweep_rhom(steps: usize, out: &Path, max: f64) -> pathid::Result<u8> {
    if steps < 2 {
        return Err(Error::InvalidProcess(format!("sweep needs at least 2 steps, got {steps}")));
    }
    let mut w =
        csv::Writer::from_path(out).map_err(|e| Error::Io(std::io::Error::other(format!("{}: {e}", out.display()))))?;
    let mut rows = vec![["dphi".to_string(), "P11".into(), "P20".into(), "P02".into()]];
    for k in 0..steps {
        let dphi = max * k as f64 / (steps - 1) as f64;
        let p = rhom_probabilities(dphi);
        rows.push([dphi, p.p11, p.p20, p.p02].map(|x| x.to_string()));
    }
    for r in rows {
        w.write_record(&r).map_err(|e| Error::Io(std::io::Error::other(e.to_string())))?;
    }
    w.flush()?;
    println!("wrote {steps} rows to {}", out.display());
    Ok(0)
}

fn run(cli: Cli) -> pathid::Result<u8> {
    match cli.command {
        Command::Simulate { file, target, breakdown, json } => simulate(&file, target.as_deref(), breakdown, json),
        Command::GraphState { file, dot, json } => graph_state(&file, dot.as_deref(), json),
        Command::Matchings { file, json } => matchings(&file, json),
        Command::Verify { graph, circuit, json } => verify(&graph, &circuit, json),
        Command::MakeGhz { n, out } => make_ghz(n, &out),
        Command::MakeW { n, out } => make_w(n, &out),
        Command::SweepRhom { steps, out, max } => sweep_rhom(steps, &out, max),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INVALID } else { 0 });
        }
    };
    if let Ok(eps) = std::env::var("PATHID_EPSILON") {
        match eps.parse::<f64>() {
            Ok(x) if x > 0.0 && x.is_finite() => set_pruning_epsilon(x),
            _ => {
                eprintln!("error: PATHID_EPSILON must be a positive number, got `{eps}`");
                return ExitCode::from(EXIT_INVALID);
            }
        }
    }
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INVALID)
        }
    }
}
