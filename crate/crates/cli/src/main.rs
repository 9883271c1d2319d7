mod bench;

use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use iomodel::formats::{parse_instance, to_edge_list, Instance};
use iomodel::gen::{self, Plant, TrianglePlant};
use iomodel::harness::{self, ALGORITHMS};
use iomodel::recurrence::{classify, parse_recurrence, slope_check};
use iomodel::reductions::Ctx;
use iomodel::verify::{self, Params, Solvers, REDUCTIONS};
use iomodel::{MachineConfig, Mode, Word};

use bench::BenchPlan;

#[derive(Parser)]
#[command(name = "iomodel", version, about = "External-memory algorithms, reductions and miss-count benchmarks")]
struct Cli {
    /// Cache size in words.
    #[arg(long = "M", global = true, default_value_t = 1024)]
    m: usize,
    /// Line size in words.
    #[arg(long = "B", global = true, default_value_t = 16)]
    b: usize,
    /// explicit or lru; defaults to the algorithm's own mode.
    #[arg(long, global = true)]
    mode: Option<Mode>,
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Write the main output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate an instance.
    Gen {
        kind: String,
        #[arg(long, default_value_t = 64)]
        n: usize,
        /// Edge count for random sparse graphs (default 4n).
        #[arg(long)]
        edges: Option<usize>,
        /// Vector dimension (default 2 log2 n + 2).
        #[arg(long)]
        d: Option<usize>,
        #[arg(long, default_value_t = 0.5)]
        density: f64,
        /// Weight or value range.
        #[arg(long, default_value_t = 16)]
        w: Word,
        #[arg(long, default_value = "random")]
        plant: String,
        /// Extra random edges for planted-diameter graphs (default n).
        #[arg(long)]
        extra: Option<usize>,
        /// Write graphs as an edge list instead of JSON.
        #[arg(long)]
        edge_list: bool,
    },
    /// Run an algorithm on an instance and report its answer and misses.
    Solve {
        algo: String,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Engine::Io)]
        engine: Engine,
        #[arg(long)]
        json: bool,
    },
    /// Run a reduction with oracle or simulated solvers.
    Reduce {
        name: String,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = SolverKind::Oracle)]
        solver: SolverKind,
        #[arg(long)]
        edge: Option<usize>,
        #[arg(long)]
        node: Option<usize>,
        #[arg(long)]
        s: Option<usize>,
        #[arg(long)]
        t: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, value_delimiter = ',')]
        xs: Option<Vec<usize>>,
        #[arg(long, value_delimiter = ',')]
        ts: Option<Vec<usize>>,
        #[arg(long)]
        json: bool,
    },
    /// Check reductions against oracles. `all` runs every reduction except
    /// the negative controls.
    Verify {
        name: String,
        #[arg(long, value_delimiter = ',', default_value = "6,10,14")]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// Also run the exhaustive small-instance suite.
        #[arg(long)]
        exhaustive: bool,
        #[arg(long)]
        json: bool,
    },
    /// Run a grid and write CSV rows plus fitted slopes.
    Bench {
        algo: Option<String>,
        /// JSON plan; replaces the grid flags.
        #[arg(long)]
        plan: Option<PathBuf>,
        #[arg(long, value_delimiter = ',')]
        n: Vec<usize>,
        /// Cache sizes (default: --M).
        #[arg(long = "M-grid", value_delimiter = ',')]
        m_grid: Vec<usize>,
        /// Line sizes (default: --B).
        #[arg(long = "B-grid", value_delimiter = ',')]
        b_grid: Vec<usize>,
        #[arg(long, default_value_t = 5)]
        seeds: u64,
    },
    /// Classify a recurrence, e.g. "T(n)=4T(n/2)+n/B; base(M)=M/B".
    Analyze {
        recurrence: String,
        /// Compare the bound's slopes with the unrolled recurrence at
        /// (--at-n, --M, --B).
        #[arg(long)]
        check: bool,
        #[arg(long, default_value_t = 1099511627776.0)]
        at_n: f64,
    },
    /// List algorithms, reductions and generator kinds.
    List,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Engine {
    Io,
    Oracle,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SolverKind {
    Oracle,
    Algo,
}

const GEN_KINDS: &[(&str, &str)] = &[
    ("random-sparse-graph", "n nodes, --edges edges, undirected"),
    ("planted-diameter-2", "connected graph of diameter exactly 2"),
    ("planted-diameter-3+", "connected graph of diameter at least 3"),
    ("random-vectors", "two lists of n 0/1 vectors"),
    ("planted-orthogonal-pair", "vectors with an orthogonal pair"),
    ("no-orthogonal-pair", "vectors without an orthogonal pair"),
    ("hs-without-hit", "vectors where no u hits every v"),
    ("random-3sum", "three lists; --plant yes|no|random"),
    ("random-tripartite-weights", "triangle instance; --plant zero|negative|no-zero|no-negative|random"),
    ("random-matrix-pair", "two n x n matrices in [-w, w]"),
    ("random-conv3sum", "one list in [-w, w]"),
    ("random-words", "n words in [-w, w]"),
];

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read_instance(path: &Path) -> Result<Instance> {
    let text = if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        s
    } else {
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?
    };
    Ok(parse_instance(&text)?)
}

fn generate(kind: &str, n: usize, edges: Option<usize>, d: Option<usize>, density: f64, w: Word, plant: &str, extra: Option<usize>, seed: u64) -> Result<Instance> {
    let d = d.unwrap_or(2 * (usize::BITS - n.leading_zeros()) as usize + 2);
    let extra = extra.unwrap_or(n);
    Ok(match kind {
        "random-sparse-graph" => Instance::Graph(gen::random_sparse_graph(n, edges.unwrap_or(4 * n), seed)?),
        "planted-diameter-2" => Instance::Graph(gen::planted_diameter_2(n, extra, seed)?),
        "planted-diameter-3+" | "planted-diameter-3plus" => Instance::Graph(gen::planted_diameter_3plus(n, extra, seed)?),
        "random-vectors" => Instance::Vectors(gen::random_vectors(n, d, density, seed)?),
        "planted-orthogonal-pair" => Instance::Vectors(gen::planted_orthogonal_pair(n, d, density, seed)?),
        "no-orthogonal-pair" => Instance::Vectors(gen::no_orthogonal_pair(n, d, density, seed)?),
        "hs-without-hit" => Instance::Vectors(gen::hs_without_hit(n, d, density, seed)?),
        "random-3sum" => Instance::ThreeSum(gen::random_3sum(n, w, plant.parse::<Plant>()?, seed)?),
        "random-tripartite-weights" => {
            Instance::Triangle(gen::random_tripartite(n, w, plant.parse::<TrianglePlant>()?, seed)?)
        }
        "random-matrix-pair" => Instance::MatrixPair {
            a: gen::random_matrix(n, n, -w, w, seed),
            b: gen::random_matrix(n, n, -w, w, seed.wrapping_add(1)),
        },
        "random-conv3sum" => Instance::Conv3sum { a: gen::random_words(n, -w, w, seed) },
        "random-words" => Instance::Words { a: gen::random_words(n, -w, w, seed) },
        _ => bail!("unknown instance kind `{kind}`; see `iomodel list`"),
    })
}

/// Ok(true) when everything passed; Ok(false) on a verification failure.
fn run(cli: Cli) -> Result<bool> {
    match cli.cmd {
        Cmd::Gen { kind, n, edges, d, density, w, plant, extra, edge_list } => {
            let inst = generate(&kind, n, edges, d, density, w, &plant, extra, cli.seed)?;
            let text = match (&inst, edge_list) {
                (Instance::Graph(g), true) => to_edge_list(g),
                (_, true) => bail!("--edge-list only applies to graphs"),
                _ => inst.to_json() + "\n",
            };
            emit(&cli.out, &text)?;
        }
        Cmd::Solve { algo, input, engine, json } => {
            let inst = read_instance(&input)?;
            let text = match engine {
                Engine::Oracle => {
                    let ans = harness::run_oracle(&algo, &inst)?;
                    if json {
                        serde_json::to_string(&ans)? + "\n"
                    } else {
                        format!("answer {ans}\ndigest {}\n", ans.digest())
                    }
                }
                Engine::Io => {
                    let meas = harness::measure(&algo, cli.m, cli.b, cli.mode, &inst)?;
                    let mode = cli.mode.unwrap_or(harness::find_algo(&algo)?.mode);
                    if json {
                        serde_json::to_string(&meas)? + "\n"
                    } else {
                        format!(
                            "answer {}\ndigest {}\nM {} B {} mode {mode}\nmisses {}\nwritebacks {}\nlogical_accesses {}\n",
                            meas.answer,
                            meas.answer.digest(),
                            cli.m,
                            cli.b,
                            meas.stats.misses,
                            meas.stats.writebacks,
                            meas.stats.logical_accesses
                        )
                    }
                }
            };
            emit(&cli.out, &text)?;
        }
        Cmd::Reduce { name, input, solver, edge, node, s, t, k, xs, ts, json } => {
            let inst = read_instance(&input)?;
            let params = Params { edge, node, s, t, k, xs, ts };
            let solvers = match solver {
                SolverKind::Oracle => Solvers::Oracle,
                SolverKind::Algo => Solvers::Algo { m: cli.m, b: cli.b },
            };
            let mut cx = Ctx::measured(MachineConfig::lru(cli.m, cli.b)?);
            let answer = verify::run_reduction(&mut cx, &name, &inst, &params, solvers)?;
            let report = cx.report(&name, inst.digest(), &answer);
            let text = if json {
                serde_json::to_string(&report)? + "\n"
            } else {
                let mut s = format!(
                    "reduction {}\nsource {}\nanswer {}\nsolver calls {}\nconstruction misses {}\n",
                    report.reduction, report.source_digest, report.answer, report.solver_calls, report.construction_misses
                );
                for t in &report.targets {
                    s.push_str(&format!("target {} nodes {} size {}\n", t.kind, t.nodes, t.size));
                }
                s
            };
            emit(&cli.out, &text)?;
        }
        Cmd::Verify { name, sizes, trials, exhaustive, json } => {
            let names: Vec<&str> = if name == "all" {
                REDUCTIONS.iter().filter(|r| !r.control).map(|r| r.name).collect()
            } else {
                vec![verify::find_reduction(&name)?.name]
            };
            let mut all_ok = true;
            let mut text = String::new();
            let mut first_bad = None;
            for r in names {
                let rep = verify::verify(r, &sizes, trials, cli.seed, exhaustive)?;
                if json {
                    text.push_str(&serde_json::to_string(&rep)?);
                    text.push('\n');
                } else {
                    text.push_str(&format!(
                        "{} {}: {} random + {} exhaustive, solver calls max {} mean {:.2}\n",
                        if rep.passed { "PASS" } else { "FAIL" },
                        rep.reduction,
                        rep.randomized,
                        rep.exhaustive,
                        rep.max_calls,
                        rep.mean_calls
                    ));
                    if let Some(c) = &rep.counterexample {
                        text.push_str(&format!("  expected {} got {}\n  {}\n", c.expected, c.got, serde_json::to_string(&c.case)?));
                    }
                }
                if !rep.passed {
                    all_ok = false;
                    first_bad = first_bad.or(rep.counterexample);
                }
            }
            // --out receives the first counterexample, stdout the summary
            match (&cli.out, first_bad) {
                (Some(p), Some(c)) => {
                    std::fs::write(p, serde_json::to_string_pretty(&c)? + "\n")?;
                    print!("{text}");
                }
                _ => print!("{text}"),
            }
            return Ok(all_ok);
        }
        Cmd::Bench { algo, plan, n, m_grid, b_grid, seeds } => {
            let plan = match plan {
                Some(p) => serde_json::from_str::<BenchPlan>(&std::fs::read_to_string(&p)?)
                    .with_context(|| format!("reading plan {}", p.display()))?,
                None => BenchPlan {
                    algo: algo.ok_or_else(|| anyhow!("bench needs an algorithm or --plan"))?,
                    n: if n.is_empty() { vec![256, 512, 1024, 2048] } else { n },
                    m: if m_grid.is_empty() { vec![cli.m] } else { m_grid },
                    b: if b_grid.is_empty() { vec![cli.b] } else { b_grid },
                    seeds,
                    first_seed: cli.seed,
                    mode: cli.mode,
                },
            };
            harness::find_algo(&plan.algo)?;
            let rows = bench::run(&plan)?;
            let fits = bench::render_fits(&bench::fits(&rows));
            match &cli.out {
                Some(p) => {
                    let f = std::fs::File::create(p).with_context(|| format!("creating {}", p.display()))?;
                    bench::write_csv(&rows, f)?;
                    print!("{fits}");
                }
                None => {
                    bench::write_csv(&rows, std::io::stdout().lock())?;
                    eprint!("{fits}");
                }
            }
        }
        Cmd::Analyze { recurrence, check, at_n } => {
            let spec = parse_recurrence(&recurrence)?;
            let res = classify(&spec)?;
            let mut text = format!("{spec}\n{res}\n");
            let mut ok = true;
            if check {
                for a in slope_check(&spec, &res.bound, at_n, cli.m as f64, cli.b as f64, 4)? {
                    let agree = a.gap() <= 0.1;
                    ok &= agree;
                    text.push_str(&format!(
                        "slope vs {}: bound {:.3} unrolled {:.3} {}\n",
                        a.axis,
                        a.bound,
                        a.unrolled,
                        if agree { "agree" } else { "DISAGREE" }
                    ));
                }
            }
            emit(&cli.out, &text)?;
            return Ok(ok);
        }
        Cmd::List => {
            let mut s = String::from("algorithms:\n");
            for a in ALGORITHMS {
                s.push_str(&format!("  {:<28} {:<12} {:<9} {}\n", a.name, a.input, a.mode.to_string(), a.about));
            }
            s.push_str("reductions:\n");
            for r in REDUCTIONS.iter().filter(|r| !r.control) {
                s.push_str(&format!("  {:<40} {:<12} {}\n", r.name, r.source, r.about));
            }
            s.push_str("negative controls:\n");
            for r in REDUCTIONS.iter().filter(|r| r.control) {
                s.push_str(&format!("  {:<40} {:<12} {}\n", r.name, r.source, r.about));
            }
            s.push_str("generator kinds:\n");
            for (k, about) in GEN_KINDS {
                s.push_str(&format!("  {k:<28} {about}\n"));
            }
            emit(&cli.out, &s)?;
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
