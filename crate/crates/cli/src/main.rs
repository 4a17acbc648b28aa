//! Command-line front end.
//!
//! Exit codes: 0 success/colored, 1 witness found (input not in class),
//! 2 input or parse error, 3 internal contradiction (a bug, never expected
//! on any input).

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use broomchi::certify::{verify, CertifiedResult, Verdict};
use broomchi::colorer::color_auto;
use broomchi::corpus::{run_corpus, CorpusOptions};
use broomchi::decompose::{find_max_q, partition_neighborhood_alpha, partition_neighborhood_chi};
use broomchi::detect::{find_induced_ktt, find_induced_tbroom};
use broomchi::dimacs::{emit_dimacs, parse_dimacs};
use broomchi::error::Error;
use broomchi::gen::{generate, Family, GenSpec};
use broomchi::graph::Graph;
use broomchi::oracle::{chromatic_number, clique_number, independence_number, ramsey_upper};

#[derive(Parser)]
#[command(name = "broomchi", version, about = "Certifying coloring for t-broom-free graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Color a graph with a certified bound, or report a witness
    Color {
        /// DIMACS .col input file
        input: PathBuf,
        #[arg(long, default_value_t = 2)]
        t: usize,
        /// auto | chair | general | ktt
        #[arg(long, default_value = "auto")]
        mode: String,
        /// Write the certificate JSON here
        #[arg(long)]
        cert: Option<PathBuf>,
    },
    /// Check class membership only
    CheckFree {
        input: PathBuf,
        #[arg(long, default_value_t = 2)]
        t: usize,
        /// Also forbid induced K_{t,t}
        #[arg(long)]
        ktt: bool,
    },
    /// Dump the neighborhood decomposition around a maximum Q as JSON
    Decompose {
        input: PathBuf,
        #[arg(long, default_value_t = 2)]
        t: usize,
        /// Use the chromatic-bound W_0 rule instead of the independence rule
        #[arg(long)]
        ktt: bool,
    },
    /// Exact oracles
    Oracle {
        /// chi | omega | alpha
        what: String,
        input: PathBuf,
    },
    /// Generate a corpus graph as DIMACS on stdout
    Gen {
        /// line_graph | cograph | complete_multipartite | rejection | negative_control
        family: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        seed: u64,
        #[arg(short, long, default_value_t = 0.5)]
        p: f64,
        #[arg(long, default_value_t = 2)]
        t: usize,
        /// rejection family: also reject induced K_{t,t}
        #[arg(long)]
        ktt: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run color + verify over every .col file in a directory
    Corpus {
        dir: PathBuf,
        #[arg(long, default_value = "auto")]
        mode: String,
        #[arg(long, default_value_t = 2)]
        t: usize,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Re-check a certificate against its graph
    Verify {
        input: PathBuf,
        cert: PathBuf,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Contradiction(_) => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}

fn load_graph(path: &Path) -> Result<Graph, Error> {
    let text = std::fs::read_to_string(path)?;
    parse_dimacs(&text)
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Color { input, t, mode, cert } => {
            let g = load_graph(&input)?;
            let result = color_auto(&g, t, &mode)?;
            let report = verify(&g, &result)?;
            if !report.accepted {
                for f in &report.failures {
                    eprintln!("self-check failed: {f}");
                }
                return Err(Error::Contradiction("own certificate rejected".into()));
            }
            if let Some(path) = cert {
                std::fs::write(&path, result.to_json())?;
            }
            match result.verdict {
                Verdict::Colored => {
                    println!(
                        "colored: omega={} colors={} bound={} mode={}",
                        result.omega,
                        result.colors_used(),
                        result.bound,
                        result.mode
                    );
                    Ok(ExitCode::SUCCESS)
                }
                Verdict::NotInClass => {
                    println!("not in class: witness={:?}", result.witness);
                    Ok(ExitCode::from(1))
                }
            }
        }
        Command::CheckFree { input, t, ktt } => {
            let g = load_graph(&input)?;
            if let Some(w) = find_induced_tbroom(&g, t)? {
                println!("contains a {t}-broom: {w:?}");
                return Ok(ExitCode::from(1));
            }
            if ktt {
                if let Some(w) = find_induced_ktt(&g, t)? {
                    println!("contains an induced K_{{{t},{t}}}: {w:?}");
                    return Ok(ExitCode::from(1));
                }
            }
            println!("free");
            Ok(ExitCode::SUCCESS)
        }
        Command::Decompose { input, t, ktt } => {
            let g = load_graph(&input)?;
            let Some(q) = find_max_q(&g, t)? else {
                println!("{{\"q\": null}}");
                return Ok(ExitCode::SUCCESS);
            };
            let part = if ktt {
                let (omega, _) = clique_number(&g);
                let limit = 3 * ramsey_upper(t, omega);
                partition_neighborhood_chi(&g, &q, limit, broomchi::colorer::W0_EXACT_CUTOFF)
            } else {
                partition_neighborhood_alpha(&g, &q)
            };
            println!("{}", decomposition_json(&q, &part));
            Ok(ExitCode::SUCCESS)
        }
        Command::Oracle { what, input } => {
            let g = load_graph(&input)?;
            match what.as_str() {
                "chi" => {
                    let (chi, _) = chromatic_number(&g)?;
                    println!("{chi}");
                }
                "omega" => println!("{}", clique_number(&g).0),
                "alpha" => println!("{}", independence_number(&g).0),
                other => return Err(Error::Input(format!("unknown oracle {other:?}"))),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Gen { family, n, seed, p, t, ktt, out } => {
            let family: Family = family.parse()?;
            let spec = GenSpec { family, n, p, seed, t, ktt };
            let g = generate(&spec)?;
            let text = emit_dimacs(&g);
            match out {
                Some(path) => std::fs::write(&path, text)?,
                None => print!("{text}"),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Corpus { dir, mode, t, report } => {
            let mut files: Vec<PathBuf> = std::fs::read_dir(&dir)?
                .filter_map(|entry| entry.ok().map(|e| e.path()))
                .filter(|p| p.extension().is_some_and(|ext| ext == "col"))
                .collect();
            files.sort();
            let mut instances = Vec::new();
            for path in files {
                let name =
                    path.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
                instances.push((name, load_graph(&path)?));
            }
            let options = CorpusOptions { t, mode, ..CorpusOptions::default() };
            let result = run_corpus(&instances, &options)?;
            let csv = result.csv();
            match report {
                Some(path) => std::fs::write(&path, &csv)?,
                None => print!("{csv}"),
            }
            eprintln!(
                "instances={} colored={} witnesses={} rejected={} max colors/omega^2 = {:.3}",
                result.rows.len(),
                result.accepted,
                result.witnesses,
                result.rejected_certificates,
                result.max_ratio
            );
            if result.ok() {
                Ok(ExitCode::SUCCESS)
            } else {
                Err(Error::Contradiction("corpus run rejected one of its own certificates".into()))
            }
        }
        Command::Verify { input, cert } => {
            let g = load_graph(&input)?;
            let text = std::fs::read_to_string(&cert)?;
            let cert = CertifiedResult::from_json(&text)?;
            let report = verify(&g, &cert)?;
            if report.accepted {
                println!("accept ({} checks)", report.checks_run);
                Ok(ExitCode::SUCCESS)
            } else {
                for f in &report.failures {
                    println!("reject: {f}");
                }
                Ok(ExitCode::from(2))
            }
        }
    }
}

fn decomposition_json(
    q: &broomchi::decompose::MultipartiteQ,
    part: &broomchi::decompose::NeighborhoodPartition,
) -> String {
    let list = |s: &broomchi::graph::VertexSet| {
        let items: Vec<String> = s.iter().map(|v| v.to_string()).collect();
        format!("[{}]", items.join(","))
    };
    let singles: Vec<String> = q.singles.iter().map(|v| v.to_string()).collect();
    format!(
        "{{\"singles\":[{}],\"last\":{},\"a\":{},\"b\":{},\"z\":{},\"w\":{},\"w0\":{},\"far\":{}}}",
        singles.join(","),
        list(&q.last),
        list(&part.a),
        list(&part.b),
        list(&part.z),
        list(&part.w),
        list(&part.w0),
        list(&part.far)
    )
}
