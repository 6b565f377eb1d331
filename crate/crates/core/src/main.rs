use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rayon::prelude::*;

use copbound::corpus::{generate, CorpusGraph, CorpusSpec};
use copbound::error::{Error, Result};
use copbound::game::cop_number;
use copbound::graph::Graph;
use copbound::io::{parse_edge_list, parse_vertex_set, print_edge_list};
use copbound::params::coc;
use copbound::reduction::reduce;
use copbound::sim::{composed_turn_cap, run_game, verify_theorem, ComposedCops, Evader, GreedyEvader, OptimalEvader, RandomEvader, TheoremReport};
use copbound::strategy::{Controller, ReturnPolicy};

#[derive(Parser)]
#[command(name = "copbound", version, about = "Cop number bounds from 2-component order connectivity")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact cop number, or unknown(kmax) if kmax cops do not suffice.
    Copnumber {
        file: PathBuf,
        #[arg(long, default_value_t = 4)]
        kmax: usize,
    },
    /// Minimum ell-component order connectivity cover.
    Coc {
        file: PathBuf,
        #[arg(long, default_value_t = 2)]
        ell: usize,
    },
    /// Apply the reduction rules and print the log.
    Reduce {
        file: PathBuf,
        /// Explicit 2-cover such as "2,5"; defaults to a minimum one.
        #[arg(long)]
        cover: Option<String>,
    },
    /// Check the cop number bound on graph files or a generated corpus; CSV on stdout.
    Verify {
        files: Vec<PathBuf>,
        #[arg(long)]
        gen: Option<String>,
        #[arg(long, default_value_t = 4)]
        kmax: usize,
        /// Write the CSV here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Play the composed cop strategy against a robber and print the trace.
    Simulate {
        file: PathBuf,
        /// optimal, greedy, or random:SEED
        #[arg(long, default_value = "optimal")]
        robber: String,
        #[arg(long)]
        cap: Option<u32>,
        #[arg(long)]
        cover: Option<String>,
    },
    /// Write a generated corpus as edge-list files.
    Gen {
        #[arg(long)]
        gen: String,
        /// Overrides the seed in the corpus spec.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },
}

fn read_graph(path: &Path) -> Result<Graph> {
    let text = fs::read_to_string(path).map_err(|e| Error::Usage(format!("{}: {e}", path.display())))?;
    parse_edge_list(&text)
}

fn graph_id(path: &Path) -> String {
    path.file_stem().map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned())
}

fn cover_for(graph: &Graph, cover: Option<&str>) -> Result<copbound::graph::VertexSet> {
    match cover {
        Some(c) => parse_vertex_set(graph.n(), c),
        None => Ok(coc(graph, 2)?.cover),
    }
}

fn run(cli: Cli) -> Result<()> {
    let stdout = std::io::stdout();
    let io_err = |e: std::io::Error| Error::Usage(e.to_string());
    match cli.command {
        Command::Copnumber { file, kmax } => {
            let g = read_graph(&file)?;
            println!("{}", cop_number(&g, kmax));
        }
        Command::Coc { file, ell } => {
            if ell == 0 {
                return Err(Error::Usage("--ell must be at least 1".into()));
            }
            let g = read_graph(&file)?;
            let c = coc(&g, ell)?;
            println!("{} {}", c.size(), c.cover);
        }
        Command::Reduce { file, cover } => {
            let g = read_graph(&file)?;
            let u = cover_for(&g, cover.as_deref())?;
            print!("{}", reduce(&g, &u)?.log(&g));
        }
        Command::Verify { files, gen, kmax, out } => {
            let mut corpus = Vec::new();
            for f in &files {
                corpus.push(CorpusGraph {
                    id: graph_id(f),
                    graph: read_graph(f)?,
                });
            }
            if let Some(spec) = gen {
                corpus.extend(generate(&spec.parse::<CorpusSpec>()?));
            }
            let reports: Vec<TheoremReport> = corpus
                .par_iter()
                .map(|c| verify_theorem(&c.graph, &c.id, kmax))
                .collect();
            let sink: Box<dyn Write> = match &out {
                Some(p) => Box::new(fs::File::create(p).map_err(io_err)?),
                None => Box::new(stdout.lock()),
            };
            let mut w = csv::Writer::from_writer(sink);
            let csv_err = |e: csv::Error| Error::Usage(e.to_string());
            w.write_record(TheoremReport::HEADER).map_err(csv_err)?;
            for r in &reports {
                w.write_record(r.csv_record()).map_err(csv_err)?;
                for f in &r.failures {
                    eprintln!("{}: {f}", r.graph_id);
                }
            }
            w.flush().map_err(io_err)?;
        }
        Command::Simulate { file, robber, cap, cover } => {
            let g = read_graph(&file)?;
            let u = cover_for(&g, cover.as_deref())?;
            let trace = reduce(&g, &u)?;
            let ctl = Controller::new(&g, &u, &trace, ReturnPolicy::default())?;
            let cap = cap.unwrap_or_else(|| composed_turn_cap(&ctl));
            let mut evader: Box<dyn Evader + '_> = match robber.as_str() {
                "optimal" => Box::new(OptimalEvader::new(&ctl)),
                "greedy" => Box::new(GreedyEvader::new(&g)),
                other => match other.strip_prefix("random:").map(str::parse::<u64>) {
                    Some(Ok(seed)) => Box::new(RandomEvader::new(&g, seed)),
                    _ => return Err(Error::Usage(format!("unknown robber '{other}'"))),
                },
            };
            let t = run_game(&g, &graph_id(&file), &mut ComposedCops::new(&ctl), evader.as_mut(), cap)?;
            print!("{t}");
        }
        Command::Gen { gen, seed, out } => {
            let mut spec: CorpusSpec = gen.parse()?;
            if let Some(s) = seed {
                match &mut spec {
                    CorpusSpec::Gnp { seed, .. } | CorpusSpec::Planted { seed, .. } => *seed = s,
                }
            }
            fs::create_dir_all(&out).map_err(io_err)?;
            for c in generate(&spec) {
                fs::write(out.join(format!("{}.txt", c.id)), print_edge_list(&c.graph)).map_err(io_err)?;
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
