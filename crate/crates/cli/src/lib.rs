//! Subcommand dispatch for the `equiquot` binary.
//!
//! Every successful run prints one JSON object
//! `{"command", "inputs", "result", "diagnostics"}`. Exit codes: 0 when the
//! computation finished (whatever the decision), 2 for bad input, 3 for a
//! numerical failure such as non-convergence.

pub mod json;

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};
use equiquot::balance::{self, DEFAULT_BALANCE_TOL, DEFAULT_MAX_ITER};
use equiquot::numeric::format_rational;
use equiquot::qwalk::DEFAULT_PST_TOL;
use equiquot::{fraciso, pseudo, quotient, qwalk, refine, symquot};
use equiquot::{Error, Graph, Matrix, Partition, Rational, DEFAULT_TOL};

use json::Json;

pub const EXIT_OK: u8 = 0;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_NUMERICAL: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "equiquot", version, about = "Equitable partitions, quotients and common-quotient relations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Absolute tolerance for binary64 comparisons (module default if unset).
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Iteration cap for balancing (module default if unset).
    #[arg(long, global = true)]
    max_iter: Option<usize>,
    /// Include wall-clock timings in the diagnostics (makes output
    /// run-dependent).
    #[arg(long, global = true)]
    timings: bool,
    #[arg(long, global = true, value_parser = ["json"], default_value = "json")]
    format: String,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Coarsest equitable partition by color refinement.
    Refine {
        graph: PathBuf,
        /// Initial coloring to refine.
        #[arg(long)]
        partition: Option<PathBuf>,
    },
    /// Combinatorial quotient of an equitable partition (exact).
    Quotient {
        graph: PathBuf,
        #[arg(long)]
        partition: PathBuf,
    },
    /// Symmetrized quotient of an equitable partition.
    Symquotient {
        graph: PathBuf,
        #[arg(long)]
        partition: PathBuf,
    },
    /// Fractional isomorphism with a doubly stochastic witness.
    Fraciso { g: PathBuf, h: PathBuf },
    /// Search for a common symmetrized quotient.
    CommonSymq {
        g: PathBuf,
        h: PathBuf,
        #[arg(long, default_value_t = refine::DEFAULT_ENUMERATION_CAP)]
        max_n: usize,
    },
    /// Isomorphic coarsest combinatorial quotients with proportional cells.
    SameQuotient { g: PathBuf, h: PathBuf },
    /// Sinkhorn balancing of a nonnegative matrix.
    Balance {
        matrix: PathBuf,
        /// One diagonal `D` with `D M D` doubly stochastic.
        #[arg(long, conflicts_with = "two_sided")]
        symmetric: bool,
        /// Alternating balance: `N = D M E` with doubly stochastic Gram products.
        #[arg(long)]
        two_sided: bool,
    },
    /// Pseudo-equitability of a partition for given vertex weights.
    PseudoCheck {
        graph: PathBuf,
        #[arg(long)]
        weights: PathBuf,
        #[arg(long)]
        partition: PathBuf,
    },
    /// Transfer fidelity `|exp(itA)[from][to]|^2` at one time.
    Pst {
        graph: PathBuf,
        #[arg(long)]
        from: usize,
        #[arg(long)]
        to: usize,
        #[arg(long, allow_hyphen_values = true)]
        time: f64,
    },
    /// Scan `[0, tmax]` for times of (near) perfect transfer.
    PstScan {
        graph: PathBuf,
        #[arg(long)]
        from: usize,
        #[arg(long)]
        to: usize,
        #[arg(long)]
        tmax: f64,
        #[arg(long)]
        steps: usize,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Refine { .. } => "refine",
            Command::Quotient { .. } => "quotient",
            Command::Symquotient { .. } => "symquotient",
            Command::Fraciso { .. } => "fraciso",
            Command::CommonSymq { .. } => "common-symq",
            Command::SameQuotient { .. } => "same-quotient",
            Command::Balance { .. } => "balance",
            Command::PseudoCheck { .. } => "pseudo-check",
            Command::Pst { .. } => "pst",
            Command::PstScan { .. } => "pst-scan",
        }
    }
}

/// What the process should print and return.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Input(String),
    Numerical(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_numerical() {
            Failure::Numerical(e.to_string())
        } else {
            Failure::Input(e.to_string())
        }
    }
}

type Run<T> = Result<T, Failure>;

struct Report {
    inputs: Vec<(String, Json)>,
    result: Vec<(String, Json)>,
    diagnostics: Vec<(String, Json)>,
}

impl Report {
    fn new() -> Self {
        Self {
            inputs: Vec::new(),
            result: Vec::new(),
            diagnostics: Vec::new(),
        }
    }

    fn input(&mut self, k: &str, v: impl Into<Json>) {
        self.inputs.push((k.into(), v.into()));
    }

    fn set(&mut self, k: &str, v: impl Into<Json>) {
        self.result.push((k.into(), v.into()));
    }

    fn diag(&mut self, k: &str, v: impl Into<Json>) {
        self.diagnostics.push((k.into(), v.into()));
    }
}

fn read(path: &Path) -> Run<String> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn read_graph(path: &Path) -> Run<Graph<Rational>> {
    Graph::parse_text(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn read_partition(path: &Path, n: usize) -> Run<Partition> {
    Partition::from_json(n, &read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn read_weights(path: &Path) -> Run<Vec<f64>> {
    serde_json::from_str(&read(path)?).map_err(|e| Failure::Input(format!("{}: weights JSON: {e}", path.display())))
}

fn path_json(p: &Path) -> Json {
    Json::Str(p.display().to_string())
}

pub fn run<I, S>(argv: I) -> Output
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Output {
                    code: EXIT_OK,
                    stdout: text,
                    stderr: String::new(),
                },
                _ => Output {
                    code: EXIT_INPUT,
                    stdout: error_json(None, "input", &text) + "\n",
                    stderr: text,
                },
            };
        }
    };
    let name = cli.command.name();
    let start = Instant::now();
    let mut report = Report::new();
    match dispatch(&cli, &mut report) {
        Ok(()) => {
            if let Some(tol) = cli.tol {
                report.input("tol", tol);
            }
            if let Some(m) = cli.max_iter {
                report.input("max_iter", m);
            }
            if cli.timings {
                report.diag("elapsed_ms", start.elapsed().as_secs_f64() * 1e3);
            }
            let out = Json::obj([
                ("command", Json::from(name)),
                ("inputs", Json::Obj(report.inputs)),
                ("result", Json::Obj(report.result)),
                ("diagnostics", Json::Obj(report.diagnostics)),
            ]);
            Output {
                code: EXIT_OK,
                stdout: format!("{out}\n"),
                stderr: String::new(),
            }
        }
        Err(Failure::Input(msg)) => Output {
            code: EXIT_INPUT,
            stdout: error_json(Some(name), "input", &msg) + "\n",
            stderr: format!("error: {msg}\n"),
        },
        Err(Failure::Numerical(msg)) => Output {
            code: EXIT_NUMERICAL,
            stdout: error_json(Some(name), "numerical", &msg) + "\n",
            stderr: format!("error: {msg}\n"),
        },
    }
}

fn error_json(command: Option<&str>, kind: &str, message: &str) -> String {
    Json::obj([
        ("command", command.map_or(Json::Null, Json::from)),
        ("error", Json::obj([("kind", Json::from(kind)), ("message", Json::from(message.trim_end()))])),
    ])
    .to_string()
}

fn dispatch(cli: &Cli, r: &mut Report) -> Run<()> {
    let tol = cli.tol;
    if let Some(t) = tol {
        if !(t.is_finite() && t >= 0.0) {
            return Err(Failure::Input("--tol must be a nonnegative number".into()));
        }
    }
    let max_iter = cli.max_iter.unwrap_or(DEFAULT_MAX_ITER);
    match &cli.command {
        Command::Refine { graph, partition } => {
            let g = read_graph(graph)?;
            r.input("graph", path_json(graph));
            let init = match partition {
                Some(p) => {
                    r.input("partition", path_json(p));
                    Some(read_partition(p, g.n())?)
                }
                None => None,
            };
            let out = refine::coarsest_equitable(g.adj(), init.as_ref(), 0.0)?;
            let b = quotient::quotient(g.adj(), &out.partition, 0.0)?;
            r.set("partition", Json::partition(&out.partition));
            r.set("rounds", out.trace.rounds.len());
            r.set("quotient", Json::exact_matrix(&b.mat));
            r.set("cell_sizes", Json::indices(&b.cell_sizes));
            r.diag("colorings", Json::Arr(out.trace.rounds.iter().map(Json::partition).collect()));
        }
        Command::Quotient { graph, partition } => {
            let g = read_graph(graph)?;
            let pi = read_partition(partition, g.n())?;
            r.input("graph", path_json(graph));
            r.input("partition", path_json(partition));
            let b = quotient::quotient(g.adj(), &pi, 0.0)?;
            r.set("cells", Json::partition(&pi));
            r.set("cell_sizes", Json::indices(&b.cell_sizes));
            r.set("exact", Json::exact_matrix(&b.mat));
            r.set("matrix", Json::matrix(&b.mat.to_f64()));
        }
        Command::Symquotient { graph, partition } => {
            let g = read_graph(graph)?;
            let pi = read_partition(partition, g.n())?;
            r.input("graph", path_json(graph));
            r.input("partition", path_json(partition));
            let s = quotient::symmetrized_quotient(g.adj(), &pi, tol.unwrap_or(DEFAULT_TOL))?;
            r.set("cells", Json::partition(&pi));
            r.set("cell_sizes", Json::indices(&s.cell_sizes));
            r.set("matrix", Json::matrix(&s.mat));
        }
        Command::Fraciso { g, h } => {
            let (gg, hh) = (read_graph(g)?, read_graph(h)?);
            r.input("g", path_json(g));
            r.input("h", path_json(h));
            let iso = fraciso::fractionally_isomorphic(gg.adj(), hh.adj(), 0.0)?;
            r.set("decision", iso.isomorphic);
            r.set("g_partition", Json::partition(&iso.g_partition));
            r.set("h_partition", Json::partition(&iso.h_partition));
            r.set("matching", Json::opt(iso.matching.as_deref().map(Json::indices)));
            r.set("quotient", Json::opt(iso.quotient.as_ref().map(|q| Json::exact_matrix(&q.mat))));
            let witness = match &iso.matching {
                Some(m) => {
                    let w: Matrix<Rational> = fraciso::witness_from_matching(&iso.g_partition, &iso.h_partition, m);
                    r.diag("witness_verified", fraciso::verify_fraciso_witness(gg.adj(), hh.adj(), &w, 0.0)?);
                    Some(Json::exact_matrix(&w))
                }
                None => None,
            };
            r.set("witness", Json::opt(witness));
        }
        Command::CommonSymq { g, h, max_n } => {
            let (gg, hh) = (read_graph(g)?, read_graph(h)?);
            r.input("g", path_json(g));
            r.input("h", path_json(h));
            r.input("max_n", *max_n);
            let tol = tol.unwrap_or(DEFAULT_TOL);
            match symquot::common_symmetrized_quotient(gg.adj(), hh.adj(), *max_n, tol)? {
                Some(c) => {
                    let d = symquot::witness_defects(gg.adj(), hh.adj(), &c.witness.m)?;
                    r.set("decision", true);
                    r.set("pi", Json::partition(&c.pi));
                    r.set("sigma", Json::partition(&c.sigma));
                    r.set("matching", Json::indices(&c.matching));
                    r.set("quotient", Json::matrix(&c.quotient));
                    r.set("witness", Json::matrix(&c.witness.m));
                    r.diag("gram_residual", d.gram_residual);
                    r.diag("intertwining_residual", d.intertwining);
                }
                None => {
                    r.set("decision", false);
                    for k in ["pi", "sigma", "matching", "quotient", "witness"] {
                        r.set(k, Json::Null);
                    }
                }
            }
        }
        Command::SameQuotient { g, h } => {
            let (gg, hh) = (read_graph(g)?, read_graph(h)?);
            r.input("g", path_json(g));
            r.input("h", path_json(h));
            let s = symquot::same_combinatorial_quotient(gg.adj(), hh.adj(), 0.0)?;
            r.set("decision", s.decision);
            r.set("pi", Json::partition(&s.pi));
            r.set("sigma", Json::partition(&s.sigma));
            r.set("lambda", Json::opt(s.lambda.as_ref().map(|l| Json::Str(format_rational(l)))));
            r.set("quotient", Json::opt(s.quotient.as_ref().map(Json::exact_matrix)));
            r.set("witness", Json::opt(s.witness.as_ref().map(Json::matrix)));
            r.set("row_sum", Json::opt(s.row_sum.map(Json::Float)));
            r.set("col_sum", Json::opt(s.col_sum.map(Json::Float)));
            if let Some(m) = &s.witness {
                r.diag("intertwining_residual", symquot::witness_defects(gg.adj(), hh.adj(), m)?.intertwining);
            }
        }
        Command::Balance {
            matrix,
            symmetric,
            two_sided,
        } => {
            let m = Matrix::<f64>::parse_text(&read(matrix)?)
                .map_err(|e| Failure::Input(format!("{}: {e}", matrix.display())))?;
            r.input("matrix", path_json(matrix));
            let tol = tol.unwrap_or(DEFAULT_BALANCE_TOL);
            let (mode, d, e, iterations, residual) = if *symmetric {
                let s = balance::symmetric_sinkhorn(&m, tol, max_iter)?;
                ("symmetric", s.d.clone(), s.d, s.iterations, s.residual)
            } else if *two_sided {
                let p = balance::alternating_balance(&m, tol, max_iter)?;
                ("two-sided", p.d, p.e, p.iterations, p.residual)
            } else {
                let p = balance::sinkhorn(&m, tol, max_iter)?;
                ("sinkhorn", p.d, p.e, p.iterations, p.residual)
            };
            let n = m.scaled(&d, &e);
            r.input("mode", mode);
            r.set("d", Json::floats(&d));
            r.set("e", Json::floats(&e));
            r.set("n", Json::matrix(&n));
            r.set("residual", residual);
            r.diag("iterations", iterations);
            if *two_sided {
                r.diag("gram_residual", balance::gram_residual(&n));
            }
        }
        Command::PseudoCheck {
            graph,
            weights,
            partition,
        } => {
            let g = read_graph(graph)?;
            let w = read_weights(weights)?;
            let pi = read_partition(partition, g.n())?;
            r.input("graph", path_json(graph));
            r.input("weights", path_json(weights));
            r.input("partition", path_json(partition));
            let tol = tol.unwrap_or(DEFAULT_TOL);
            match pseudo::is_pseudo_equitable(g.adj(), &w, &pi, tol)? {
                Some(b) => {
                    let s = pseudo::pseudo_symmetrized_quotient(g.adj(), &w, &pi, tol)?;
                    r.set("pseudo_equitable", true);
                    r.set("quotient", Json::matrix(&b.mat));
                    r.set("symmetrized_quotient", Json::matrix(&s.mat));
                }
                None => {
                    r.set("pseudo_equitable", false);
                    r.set("quotient", Json::Null);
                    r.set("symmetrized_quotient", Json::Null);
                }
            }
            r.set("cells", Json::partition(&pi));
            r.set("normalized_weights", Json::floats(&pseudo::normalize_per_cell(&w, &pi)));
        }
        Command::Pst { graph, from, to, time } => {
            let g = read_graph(graph)?;
            r.input("graph", path_json(graph));
            r.input("from", *from);
            r.input("to", *to);
            r.input("time", *time);
            let tol = tol.unwrap_or(DEFAULT_PST_TOL);
            let check = qwalk::pst_check(g.adj(), *from, *to, *time, tol)?;
            r.set("transfer", check.transfer);
            r.set("fidelity", check.fidelity);
            r.diag("unitarity_residual", qwalk::walk_matrix(g.adj(), *time)?.unitarity_residual());
        }
        Command::PstScan {
            graph,
            from,
            to,
            tmax,
            steps,
        } => {
            let g = read_graph(graph)?;
            r.input("graph", path_json(graph));
            r.input("from", *from);
            r.input("to", *to);
            r.input("tmax", *tmax);
            r.input("steps", *steps);
            let tol = tol.unwrap_or(DEFAULT_PST_TOL);
            let hits = qwalk::pst_scan(g.adj(), *from, *to, *tmax, *steps, tol)?;
            r.set(
                "times",
                Json::Arr(hits.iter().map(|&(t, f)| Json::obj([("t", Json::Float(t)), ("fidelity", Json::Float(f))])).collect()),
            );
        }
    }
    Ok(())
}
