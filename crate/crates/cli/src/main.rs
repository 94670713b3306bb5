//! `subsetsum`: solve all-targets subset sum or all-capacities knapsack from
//! plain-text input, generate seeded instances, and run benchmark suites.
//!
//! Exit codes: 0 success, 2 malformed input, 3 internal contract violation.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Read};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use sumset_engine::gen::{self, Shape};
use sumset_engine::knapsack::{knapsack_all_capacities, KnapsackConfig, KnapsackItem};
use sumset_engine::oracle::{bellman_dp, dp_knapsack};
use sumset_engine::solver::{all_targets, SolverConfig};
use sumset_engine::sumset::{Backend, ConvConfig, SumsetBitmap};
use sumset_engine::{Instance, WorkCounters};

/// dp is faster below this t*n product; calibrated with the scaling suite.
const AUTO_DP_THRESHOLD: u64 = 1 << 22;

#[derive(Parser)]
#[command(name = "subsetsum", version, about)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SolveAlgo {
    Dp,
    Kx,
    Dnc,
    Auto,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KnapAlgo {
    Dp,
    Reduction,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BackendArg {
    Auto,
    ShiftOr,
    Ntt,
}

impl BackendArg {
    fn to_backend(self) -> Backend {
        match self {
            BackendArg::Auto => Backend::Auto,
            BackendArg::ShiftOr => Backend::ShiftOr,
            BackendArg::Ntt => Backend::Ntt,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute every achievable sum up to the target.
    Solve {
        /// Input file, one positive integer per line ("-" for stdin).
        input: String,
        #[arg(long)]
        target: u64,
        #[arg(long, value_enum, default_value = "auto")]
        algo: SolveAlgo,
        #[arg(long, value_enum, default_value = "auto")]
        backend: BackendArg,
        /// Also reconstruct and print a witness for this sum.
        #[arg(long)]
        witness: Option<u64>,
        /// Print maximal runs "lo-hi" instead of every value.
        #[arg(long)]
        intervals: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// All-capacities 0-1 knapsack; input lines are "weight profit".
    Knapsack {
        input: String,
        #[arg(long)]
        capacity: u64,
        #[arg(long, value_enum, default_value = "reduction")]
        algo: KnapAlgo,
        /// Print the running maximum (classic capacity-at-most semantics).
        #[arg(long)]
        prefix_max: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate a seeded instance.
    Gen {
        #[arg(long, default_value = "uniform")]
        shape: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        target: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Emit "weight profit" lines instead of bare values.
        #[arg(long)]
        knapsack: bool,
        #[arg(long, default_value_t = 1_000_000)]
        profit_max: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a benchmark suite and write one CSV row per run.
    Bench {
        #[arg(long)]
        suite: String,
        /// Comma-separated list of targets t.
        #[arg(long, value_delimiter = ',')]
        sizes: Vec<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        csv: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Engine(e)) => {
            eprintln!("internal error: {e}");
            ExitCode::from(3)
        }
    }
}

enum CliError {
    Input(String),
    Engine(sumset_engine::Error),
}

impl From<sumset_engine::Error> for CliError {
    fn from(e: sumset_engine::Error) -> Self {
        CliError::Engine(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

fn read_input(path: &str) -> Result<String, CliError> {
    if path == "-" {
        let mut buf = String::new();
        io::stdin().read_to_string(&mut buf)?;
        Ok(buf)
    } else {
        Ok(fs::read_to_string(path)?)
    }
}

fn parse_values(text: &str) -> Result<Vec<u64>, CliError> {
    let mut values = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let v: u64 = line
            .parse()
            .map_err(|_| CliError::Input(format!("line {}: not a positive integer: {line:?}", lineno + 1)))?;
        if v == 0 {
            return Err(CliError::Input(format!("line {}: values must be >= 1", lineno + 1)));
        }
        values.push(v);
    }
    Ok(values)
}

fn parse_items(text: &str) -> Result<Vec<KnapsackItem>, CliError> {
    let mut items = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.split_whitespace();
        let bad = || CliError::Input(format!("line {}: expected \"weight profit\": {line:?}", lineno + 1));
        let w: u64 = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
        let p: u64 = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
        if parts.next().is_some() || w == 0 || p == 0 {
            return Err(bad());
        }
        items.push(KnapsackItem::new(w, p));
    }
    Ok(items)
}

fn write_output(out: Option<&PathBuf>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn format_values(answer: &SumsetBitmap, intervals: bool) -> String {
    let values = answer.values();
    let mut s = String::new();
    if !intervals {
        for (i, v) in values.iter().enumerate() {
            if i > 0 {
                s.push(' ');
            }
            let _ = write!(s, "{v}");
        }
    } else {
        let mut i = 0;
        let mut first = true;
        while i < values.len() {
            let mut j = i;
            while j + 1 < values.len() && values[j + 1] == values[j] + 1 {
                j += 1;
            }
            if !first {
                s.push(' ');
            }
            first = false;
            if i == j {
                let _ = write!(s, "{}", values[i]);
            } else {
                let _ = write!(s, "{}-{}", values[i], values[j]);
            }
            i = j + 1;
        }
    }
    s.push('\n');
    s
}

fn solve_with(
    algo: SolveAlgo,
    backend: Backend,
    inst: &Instance,
    witness_mode: bool,
) -> Result<(SumsetBitmap, WorkCounters, &'static str, Option<sumset_engine::Solved>), CliError> {
    let n = inst.x.total();
    let algo = match algo {
        SolveAlgo::Auto => {
            if inst.t.saturating_mul(n) < AUTO_DP_THRESHOLD {
                SolveAlgo::Dp
            } else {
                SolveAlgo::Dnc
            }
        }
        a => a,
    };
    let conv = ConvConfig { backend, ..ConvConfig::default() };
    match algo {
        SolveAlgo::Dp => Ok((bellman_dp(inst), WorkCounters::default(), "dp", None)),
        SolveAlgo::Kx | SolveAlgo::Dnc => {
            let cfg = SolverConfig {
                conv,
                // kx: never split, solve each bucket with the layered tree
                base_k: if algo == SolveAlgo::Kx { usize::MAX } else { 8 },
                witness_mode,
                ..SolverConfig::default()
            };
            let solved = all_targets(inst, &cfg)?;
            let tag = if algo == SolveAlgo::Kx { "kx" } else { "dnc" };
            Ok((
                solved.report.answer.clone(),
                solved.report.work.clone(),
                tag,
                Some(solved),
            ))
        }
        SolveAlgo::Auto => unreachable!(),
    }
}

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h = 0xcbf29ce484222325u64;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

fn profile_bytes(profits: &[Option<u64>]) -> Vec<u8> {
    let mut out = Vec::with_capacity(profits.len() * 9);
    for p in profits {
        match p {
            Some(p) => {
                out.push(1);
                out.extend_from_slice(&p.to_le_bytes());
            }
            None => out.push(0),
        }
    }
    out
}

fn run(cmd: Cmd) -> Result<(), CliError> {
    match cmd {
        Cmd::Solve { input, target, algo, backend, witness, intervals, out } => {
            let values = parse_values(&read_input(&input)?)?;
            let inst = Instance::ingest(&values, target)?;
            let want_witness = witness.is_some();
            let (answer, _, _, solved) = solve_with(algo, backend.to_backend(), &inst, want_witness)?;
            let mut text = format_values(&answer, intervals);
            if let Some(y) = witness {
                let solved = match solved {
                    Some(s) => s,
                    None => {
                        // dp path has no reconstruction trace; rerun with dnc
                        let cfg = SolverConfig { witness_mode: true, ..SolverConfig::default() };
                        all_targets(&inst, &cfg)?
                    }
                };
                let cfg = SolverConfig { witness_mode: true, ..SolverConfig::default() };
                let mut ctr = WorkCounters::default();
                let w = solved.reconstruct(y, &cfg, &mut ctr)?;
                let mut line = format!("{y}:");
                for (v, c) in w.occurrences {
                    for _ in 0..c {
                        let _ = write!(line, " {v}");
                    }
                }
                text.push_str(&line);
                text.push('\n');
            }
            write_output(out.as_ref(), &text)
        }
        Cmd::Knapsack { input, capacity, algo, prefix_max, out } => {
            let items = parse_items(&read_input(&input)?)?;
            let dense = match algo {
                KnapAlgo::Dp => dp_knapsack(&items, capacity).dense(),
                KnapAlgo::Reduction => {
                    let mut ctr = WorkCounters::default();
                    knapsack_all_capacities(&items, capacity, &KnapsackConfig::default(), &mut ctr)?.dense()
                }
            };
            let mut s = String::new();
            let mut running: Option<u64> = None;
            for (i, p) in dense.iter().enumerate() {
                if i > 0 {
                    s.push(' ');
                }
                if prefix_max {
                    running = match (running, *p) {
                        (cur, Some(p)) => Some(cur.map_or(p, |c| c.max(p))),
                        (cur, None) => cur,
                    };
                    match running {
                        Some(v) => {
                            let _ = write!(s, "{v}");
                        }
                        None => s.push('-'),
                    }
                } else {
                    match p {
                        Some(v) => {
                            let _ = write!(s, "{v}");
                        }
                        None => s.push('-'),
                    }
                }
            }
            s.push('\n');
            write_output(out.as_ref(), &s)
        }
        Cmd::Gen { shape, n, target, seed, knapsack, profit_max, out } => {
            let shape = Shape::parse(&shape)
                .ok_or_else(|| CliError::Input(format!("unknown shape {shape:?}")))?;
            let mut rng = gen::rng_for(seed);
            let mut s = String::new();
            if knapsack {
                for item in gen::gen_knapsack(&mut rng, n, target, profit_max) {
                    let _ = writeln!(s, "{} {}", item.weight, item.profit);
                }
            } else {
                for v in gen::gen_values(&mut rng, shape, n, target) {
                    let _ = writeln!(s, "{v}");
                }
            }
            write_output(out.as_ref(), &s)
        }
        Cmd::Bench { suite, sizes, seed, csv } => {
            let mut rows = String::from("algo,n,t,u,wall_ms,conv_work,peak_bytes,checksum\n");
            match suite.as_str() {
                "equiv" => bench_equiv(&sizes, seed, &mut rows)?,
                "scaling" => bench_scaling(&sizes, seed, &mut rows)?,
                "knapsack" => bench_knapsack(&sizes, seed, &mut rows)?,
                other => return Err(CliError::Input(format!("unknown suite {other:?}"))),
            }
            fs::write(&csv, rows)?;
            Ok(())
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn push_row(
    rows: &mut String,
    algo: &str,
    n: u64,
    t: u64,
    u: u64,
    wall_ms: f64,
    work: &WorkCounters,
    checksum: u64,
) {
    let peak_bytes = work.peak_window_values.div_ceil(8).max(t.div_ceil(8));
    let _ = writeln!(
        rows,
        "{algo},{n},{t},{u},{wall_ms:.3},{},{peak_bytes},{checksum:016x}",
        work.conv_input_values
    );
}

fn bench_equiv(sizes: &[u64], seed: u64, rows: &mut String) -> Result<(), CliError> {
    let mut rng = gen::rng_for(seed);
    for &t in sizes {
        for shape in Shape::ALL {
            let inst = gen::gen_instance(&mut rng, shape, 48, t);
            let n = inst.x.total();
            let u = inst.x.max_value().unwrap_or(0);
            let mut checksums = Vec::new();
            for algo in [SolveAlgo::Dp, SolveAlgo::Kx, SolveAlgo::Dnc] {
                let start = Instant::now();
                let (answer, work, tag, _) = solve_with(algo, Backend::Auto, &inst, false)?;
                let wall = start.elapsed().as_secs_f64() * 1e3;
                let checksum = fnv1a(&answer.to_bytes());
                checksums.push(checksum);
                push_row(rows, tag, n, t, u, wall, &work, checksum);
            }
            if checksums.windows(2).any(|w| w[0] != w[1]) {
                return Err(CliError::Engine(sumset_engine::Error::Internal(format!(
                    "checksum mismatch across algorithms at t={t} shape={}",
                    shape.name()
                ))));
            }
        }
    }
    Ok(())
}

fn bench_scaling(sizes: &[u64], seed: u64, rows: &mut String) -> Result<(), CliError> {
    for &t in sizes {
        let mut rng = gen::rng_for(seed ^ t);
        let inst = gen::gen_instance(&mut rng, Shape::Uniform, 256, t);
        let start = Instant::now();
        let (answer, work, tag, _) = solve_with(SolveAlgo::Dnc, Backend::Auto, &inst, false)?;
        let wall = start.elapsed().as_secs_f64() * 1e3;
        let checksum = fnv1a(&answer.to_bytes());
        push_row(rows, tag, inst.x.total(), t, inst.x.max_value().unwrap_or(0), wall, &work, checksum);
    }
    Ok(())
}

fn bench_knapsack(sizes: &[u64], seed: u64, rows: &mut String) -> Result<(), CliError> {
    let mut rng = gen::rng_for(seed);
    for &t in sizes {
        let items = gen::gen_knapsack(&mut rng, 48, t, 1_000_000);
        let n = items.len() as u64;
        let u = items.iter().map(|i| i.weight).max().unwrap_or(0);

        let start = Instant::now();
        let dp = dp_knapsack(&items, t);
        let wall = start.elapsed().as_secs_f64() * 1e3;
        let dp_sum = fnv1a(&profile_bytes(&dp.dense()));
        push_row(rows, "dp", n, t, u, wall, &WorkCounters::default(), dp_sum);

        let mut work = WorkCounters::default();
        let start = Instant::now();
        let red = knapsack_all_capacities(&items, t, &KnapsackConfig::default(), &mut work)?;
        let wall = start.elapsed().as_secs_f64() * 1e3;
        let red_sum = fnv1a(&profile_bytes(&red.dense()));
        let row_work = WorkCounters {
            conv_input_values: work.maxplus_input_values,
            peak_window_values: work.peak_window_values,
            ..WorkCounters::default()
        };
        push_row(rows, "reduction", n, t, u, wall, &row_work, red_sum);

        if dp_sum != red_sum {
            return Err(CliError::Engine(sumset_engine::Error::Internal(format!(
                "knapsack reduction disagrees with dp at t={t}"
            ))));
        }
    }
    Ok(())
}
