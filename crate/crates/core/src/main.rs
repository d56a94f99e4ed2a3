use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use hyperlag::enumeration::{count_left_compressed, enumerate_left_compressed};
use hyperlag::lagrangian::{grid_lower_bound, solve, solve_reduced, weight_classes};
use hyperlag::tuple_order::{colex_rank, colex_unrank};
use hyperlag::verify::{run_suite, SuiteConfig};
use hyperlag::{colex_graph, Hypergraph, LagrangianEstimate, RTuple, SolverConfig};

#[derive(Parser)]
#[command(
    name = "hyperlag",
    version,
    about = "Lagrangians of r-uniform hypergraphs"
)]
struct Cli {
    /// Seed for the solver's random restarts.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Tolerance for comparing Lagrangian values.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Number of random restarts on top of the uniform start.
    #[arg(long, global = true)]
    restarts: Option<usize>,
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Lagrangian of a graph in edge-list format (`-` reads stdin).
    Compute {
        file: PathBuf,
        /// Optimise over weightings constant on weight classes instead
        /// (left-compressed graphs only).
        #[arg(long)]
        reduced: bool,
        /// Also report the exact best point of the lattice with this
        /// denominator.
        #[arg(long, value_name = "D")]
        grid: Option<u64>,
    },
    /// Colex ranks and colex graphs.
    Colex {
        #[command(subcommand)]
        op: ColexOp,
    },
    /// All left-compressed r-graphs on [t] with m edges.
    Enumerate {
        r: usize,
        t: u32,
        m: u64,
        #[arg(long)]
        count_only: bool,
    },
    /// Run the claim checks and print the JSON report.
    Verify {
        /// Suite configuration (JSON); defaults to the built-in suite.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Also write the report as CSV.
        #[arg(long, value_name = "FILE")]
        csv: Option<PathBuf>,
        /// Record per-check wall-clock times (makes reports differ run to run).
        #[arg(long)]
        timings: bool,
    },
}

#[derive(Subcommand)]
enum ColexOp {
    /// 1-based colex rank of a tuple.
    Rank {
        #[arg(required = true, num_args = 2..)]
        elems: Vec<u32>,
    },
    /// The r-tuple of a given colex rank.
    Unrank { r: usize, rank: u64 },
    /// The first m r-tuples in colex order, as an edge list.
    Graph { r: usize, m: u64 },
}

/// `v` with 15 significant digits in plain decimal notation.
fn sig15(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return v.to_string();
    }
    let mag = v.abs().log10().floor() as i32;
    let decimals = (14 - mag).max(0) as usize;
    format!("{v:.decimals$}")
}

impl Cli {
    fn solver_config(&self) -> SolverConfig {
        let mut cfg = SolverConfig::default();
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if let Some(r) = self.restarts {
            cfg.restarts = r;
        }
        if let Some(t) = self.tol {
            cfg.value_tol = t;
        }
        cfg
    }
}

fn read_graph(file: &PathBuf) -> hyperlag::Result<Hypergraph> {
    let text = if file.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        s
    } else {
        fs::read_to_string(file)?
    };
    text.parse()
}

fn render_estimate(est: &LagrangianEstimate) -> String {
    let witness: Vec<String> = est.witness.values().iter().map(|&w| sig15(w)).collect();
    let support: Vec<String> = est.witness.support().iter().map(u32::to_string).collect();
    format!(
        "value: {}\nwitness: {}\nsupport: {}\nresidual: {:e}\n",
        sig15(est.value),
        witness.join(" "),
        support.join(" "),
        est.residual
    )
}

/// Output text and whether every check passed.
fn run(cli: &Cli) -> hyperlag::Result<(String, bool)> {
    let cfg = cli.solver_config();
    match &cli.cmd {
        Cmd::Compute {
            file,
            reduced,
            grid,
        } => {
            let g = read_graph(file)?;
            let est = if *reduced {
                solve_reduced(&g, &weight_classes(&g)?)?
            } else {
                solve(&g, &cfg)?
            };
            let bound = grid.map(|d| grid_lower_bound(&g, d)).transpose()?;
            let out = if cli.json {
                let mut v = serde_json::to_value(&est)?;
                if let Some(b) = &bound {
                    v["grid_lower_bound"] = json!({
                        "value": b.value.to_string(),
                        "point": b.point,
                        "denominator": b.denominator,
                    });
                }
                serde_json::to_string_pretty(&v)? + "\n"
            } else {
                let mut s = render_estimate(&est);
                if let Some(b) = &bound {
                    s += &format!("grid_lower_bound: {} ({})\n", b.value, sig15(b.to_f64()));
                }
                s
            };
            Ok((out, true))
        }
        Cmd::Colex { op } => {
            let out = match op {
                ColexOp::Rank { elems } => {
                    let rank = colex_rank(&RTuple::new(elems.clone())?);
                    if cli.json {
                        format!("{}\n", json!({ "tuple": elems, "rank": rank }))
                    } else {
                        format!("{rank}\n")
                    }
                }
                ColexOp::Unrank { r, rank } => {
                    let t = colex_unrank(*r, *rank)?;
                    if cli.json {
                        format!("{}\n", json!({ "tuple": t, "rank": rank }))
                    } else {
                        format!("{t}\n")
                    }
                }
                ColexOp::Graph { r, m } => colex_graph(*r, *m)?.to_edge_list(),
            };
            Ok((out, true))
        }
        Cmd::Enumerate {
            r,
            t,
            m,
            count_only,
        } => {
            let out = if *count_only {
                let count = count_left_compressed(*r, *t, *m)?;
                if cli.json {
                    format!("{}\n", json!({ "r": r, "t": t, "m": m, "count": count }))
                } else {
                    format!("{count}\n")
                }
            } else {
                let lists: Vec<String> = enumerate_left_compressed(*r, *t, *m)?
                    .map(|g| g.to_edge_list())
                    .collect();
                lists.join("\n")
            };
            Ok((out, true))
        }
        Cmd::Verify {
            config,
            csv,
            timings,
        } => {
            let mut suite = match config {
                Some(path) => serde_json::from_str::<SuiteConfig>(&fs::read_to_string(path)?)?,
                None => SuiteConfig::default_suite(),
            };
            if let Some(s) = cli.seed {
                suite.solver.seed = s;
            }
            if let Some(r) = cli.restarts {
                suite.solver.restarts = r;
            }
            if let Some(t) = cli.tol {
                suite.compare_tol = t;
            }
            suite.timings |= *timings;
            let report = run_suite(&suite);
            if let Some(path) = csv {
                fs::write(path, report.to_csv()?)?;
            }
            for c in &report.checks {
                let tag = if c.passed { "PASS" } else { "FAIL" };
                let params = serde_json::to_string(&c.params)?;
                eprintln!("{tag} {} {params}", c.claim_id);
            }
            Ok((report.to_json()?, report.passed))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((text, passed)) => {
            let written = match &cli.out {
                Some(path) => fs::write(path, &text),
                None => io::stdout().write_all(text.as_bytes()),
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
