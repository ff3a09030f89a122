use std::fmt::Write as _;
use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use degdet::bench::{bench_instance, bench_sizes, growth_factors, render_table};
use degdet::compare::{compare_traces, Claim};
use degdet::degdet::{check_splitting_certificate, SolveOptions};
use degdet::gen::{generate, GenParams};
use degdet::instance::{parse_instance, ParseError};
use degdet::intersect::{certify_cardinality, ColumnSet};
use degdet::oracle::{brute_force, default_cap};
use degdet::solvers::Solver;
use degdet::trace::write_jsonl;
use degdet::{Degree, Instance, SolveResult};

#[derive(Parser)]
#[command(name = "degdet", version, about = "Exact weighted linear matroid intersection")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance file and print the per-cardinality optima.
    Solve {
        path: PathBuf,
        #[arg(long, value_enum, default_value_t = Algo::DegdetHeap)]
        algo: Algo,
        /// Write the event stream as JSON lines.
        #[arg(long, value_name = "FILE")]
        trace: Option<PathBuf>,
        /// Check the splitting and cardinality certificates.
        #[arg(long)]
        certify: bool,
    },
    /// Print a seeded random instance.
    Gen {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 6)]
        m: usize,
        #[arg(long, value_name = "LO:HI", default_value = "-2:2", allow_hyphen_values = true)]
        entry_range: String,
        #[arg(long, value_name = "LO:HI", default_value = "-5:5", allow_hyphen_values = true)]
        weight_range: String,
        #[arg(long, default_value_t = 0.7)]
        density: f64,
    },
    /// Run the potential and modified splitting solvers side by side and check
    /// that their graphs agree step by step.
    Compare { path: PathBuf },
    /// Time the solvers and count row operations and events.
    Bench {
        #[arg(long, value_delimiter = ',', default_value = "8,16,32")]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        repeats: usize,
        /// Benchmark this file instead of generated instances.
        #[arg(long, value_name = "FILE")]
        instance: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Algo {
    DegdetNaive,
    DegdetHeap,
    Frank,
    FrankModified,
    Oracle,
}

impl Algo {
    fn solver(self) -> Option<Solver> {
        match self {
            Algo::DegdetNaive => Some(Solver::DegdetNaive),
            Algo::DegdetHeap => Some(Solver::DegdetHeap),
            Algo::Frank => Some(Solver::Frank),
            Algo::FrankModified => Some(Solver::FrankModified),
            Algo::Oracle => None,
        }
    }
}

enum Failure {
    Io(String),
    Invalid(String),
    Check(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Io(_) => 1,
            Failure::Invalid(_) => 2,
            Failure::Check(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Io(m) | Failure::Invalid(m) | Failure::Check(m) => m,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = io::stdout();
    let mut out = BufWriter::new(out.lock());
    let result = match cli.command {
        Command::Solve { path, algo, trace, certify } => cmd_solve(&mut out, &path, algo, trace.as_deref(), certify),
        Command::Gen { seed, n, m, entry_range, weight_range, density } => {
            cmd_gen(&mut out, seed, n, m, &entry_range, &weight_range, density)
        }
        Command::Compare { path } => cmd_compare(&mut out, &path),
        Command::Bench { sizes, seed, repeats, instance } => {
            cmd_bench(&mut out, &sizes, seed, repeats, instance.as_deref())
        }
    };
    let flushed = out.flush();
    match result {
        Ok(()) if flushed.is_ok() => ExitCode::SUCCESS,
        Ok(()) => ExitCode::from(1),
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn io_err(e: io::Error) -> Failure {
    Failure::Io(e.to_string())
}

fn load(path: &Path) -> Result<Instance, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    parse_instance(&text).map_err(|e| match e {
        ParseError::Invalid(v) => Failure::Invalid(format!("{}: {v}", path.display())),
        other => Failure::Io(format!("{}: {other}", path.display())),
    })
}

/// One-based rendering of a column set.
fn show(x: &ColumnSet) -> String {
    let items: Vec<String> = x.iter().map(|i| (i + 1).to_string()).collect();
    format!("{{{}}}", items.join(", "))
}

fn cmd_solve(
    out: &mut impl Write,
    path: &Path,
    algo: Algo,
    trace: Option<&Path>,
    certify: bool,
) -> Result<(), Failure> {
    let inst = load(path)?;
    let Some(solver) = algo.solver() else {
        return solve_oracle(out, &inst, trace, certify);
    };
    let r = solver.run(&inst, SolveOptions::default()).map_err(|e| Failure::Check(e.to_string()))?;
    if let Some(t) = trace {
        let file = fs::File::create(t).map_err(|e| Failure::Io(format!("{}: {e}", t.display())))?;
        write_jsonl(&r.trace, BufWriter::new(file)).map_err(io_err)?;
    }
    writeln!(out, "solver   {}", solver.name()).map_err(io_err)?;
    print_result(out, &r).map_err(io_err)?;
    if certify {
        certify_result(out, &inst, &r)?;
    }
    Ok(())
}

fn print_result(out: &mut impl Write, r: &SolveResult) -> io::Result<()> {
    writeln!(out, "degdet   {}", r.degdet)?;
    writeln!(out, "X*       {} weight {}", show(&r.x_star), r.x_star_weight)?;
    writeln!(out, "{:>3} {:>8}  X_k", "k", "weight")?;
    for (k, o) in r.by_card.iter().enumerate() {
        match o {
            Some(o) => writeln!(out, "{k:>3} {:>8}  {}", o.weight, show(&o.x))?,
            None => writeln!(out, "{k:>3} {:>8}  -", "-")?,
        }
    }
    Ok(())
}

fn certify_result(out: &mut impl Write, inst: &Instance, r: &SolveResult) -> Result<(), Failure> {
    let mut failed = Vec::new();
    for o in r.by_card.iter().flatten() {
        let verdict = match check_splitting_certificate(inst, &o.x, &o.splitting) {
            Ok(()) => "pass".to_string(),
            Err(e) => {
                failed.push(format!("splitting at k = {}", o.x.len()));
                format!("FAIL ({e})")
            }
        };
        writeln!(out, "certify  splitting k = {}: {verdict}", o.x.len()).map_err(io_err)?;
    }
    if let Some(top) = r.by_card.iter().flatten().last() {
        dual_check(out, inst, &top.x, &mut failed)?;
    }
    finish_certify(failed)
}

fn dual_check(out: &mut impl Write, inst: &Instance, x: &ColumnSet, failed: &mut Vec<String>) -> Result<(), Failure> {
    let cert = certify_cardinality(inst.a(), inst.b(), x).map_err(|e| Failure::Check(e.to_string()))?;
    let ok = cert.value == x.len();
    if !ok {
        failed.push("cardinality".to_string());
    }
    writeln!(
        out,
        "certify  cardinality: {} (rank_A(J) + rank_B(rest) = {} with J = {}, |X| = {})",
        if ok { "pass" } else { "FAIL" },
        cert.value,
        show(&cert.columns),
        x.len()
    )
    .map_err(io_err)
}

fn finish_certify(failed: Vec<String>) -> Result<(), Failure> {
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Check(format!("certification failed: {}", failed.join(", "))))
    }
}

fn solve_oracle(out: &mut impl Write, inst: &Instance, trace: Option<&Path>, certify: bool) -> Result<(), Failure> {
    let cap = default_cap();
    let o = brute_force(inst, cap).map_err(|e| Failure::Invalid(e.to_string()))?;
    if trace.is_some() {
        eprintln!("warning: the oracle records no trace");
    }
    writeln!(out, "solver   oracle").map_err(io_err)?;
    writeln!(out, "degdet   {}", o.degdet_perfect).map_err(io_err)?;
    let best = o.best_by_card.iter().enumerate().filter_map(|(k, w)| w.map(|w| (w, k))).fold(
        None,
        |acc: Option<(i64, usize)>, (w, k)| match acc {
            Some((bw, _)) if bw >= w => acc,
            _ => Some((w, k)),
        },
    );
    if let Some((w, k)) = best {
        let x = o.best_sets[k].clone().unwrap_or_default();
        writeln!(out, "X*       {} weight {w}", show(&x)).map_err(io_err)?;
    }
    writeln!(out, "{:>3} {:>8}  X_k", "k", "weight").map_err(io_err)?;
    for (k, (w, x)) in o.best_by_card.iter().zip(&o.best_sets).enumerate() {
        let line = match (w, x) {
            (Some(w), Some(x)) => format!("{k:>3} {w:>8}  {}", show(x)),
            _ => format!("{k:>3} {:>8}  -", "-"),
        };
        writeln!(out, "{line}").map_err(io_err)?;
    }
    if certify {
        let mut failed = Vec::new();
        if let Some(x) = o.best_sets.iter().flatten().last() {
            dual_check(out, inst, x, &mut failed)?;
        }
        finish_certify(failed)?;
    }
    Ok(())
}

fn range(s: &str) -> Result<(i64, i64), Failure> {
    let bad = || Failure::Invalid(format!("expected LO:HI, found `{s}`"));
    let (lo, hi) = s.split_once(':').ok_or_else(bad)?;
    Ok((lo.trim().parse().map_err(|_| bad())?, hi.trim().parse().map_err(|_| bad())?))
}

fn cmd_gen(
    out: &mut impl Write,
    seed: u64,
    n: usize,
    m: usize,
    entries: &str,
    weights: &str,
    density: f64,
) -> Result<(), Failure> {
    let p = GenParams { n, m, entries: range(entries)?, weights: range(weights)?, density };
    let inst: Instance = generate(seed, &p).map_err(|e| Failure::Invalid(e.to_string()))?;
    out.write_all(inst.render().as_bytes()).map_err(io_err)
}

fn cmd_compare(out: &mut impl Write, path: &Path) -> Result<(), Failure> {
    let inst = load(path)?;
    let opts = SolveOptions::default();
    let h = Solver::DegdetHeap.run(&inst, opts).map_err(|e| Failure::Check(e.to_string()))?;
    let f = Solver::FrankModified.run(&inst, opts).map_err(|e| Failure::Check(e.to_string()))?;
    let report = compare_traces(&h.trace, &f.trace);
    for s in &report.steps {
        let x: ColumnSet = s.x.iter().copied().collect();
        let mut line = format!("step {:>3}  X = {:<16} dual {:>4} ", s.step, show(&x), s.dual);
        for c in Claim::ALL {
            let _ = write!(line, " ({}) {}", c.number(), if s.holds(c) { "ok" } else { "FAIL" });
        }
        writeln!(out, "{line}").map_err(io_err)?;
        for (c, d) in &s.failures {
            writeln!(out, "          {c}: {d}").map_err(io_err)?;
        }
    }
    if let Some((a, b)) = report.length {
        writeln!(out, "change points: {a} against {b}").map_err(io_err)?;
    }
    writeln!(out, "idle dual steps: {} and {}", report.idle_steps.0, report.idle_steps.1).map_err(io_err)?;
    writeln!(out, "degdet: {} and {}", h.degdet, f.degdet).map_err(io_err)?;
    let degdet_ok = h.degdet == f.degdet && h.weights_by_card() == f.weights_by_card();
    match report.first_mismatch() {
        None if degdet_ok => {
            writeln!(out, "result: consistent").map_err(io_err)?;
            Ok(())
        }
        None => Err(Failure::Check("solvers disagree on the optimum values".into())),
        Some(e) => Err(Failure::Check(e.to_string())),
    }
}

fn cmd_bench(
    out: &mut impl Write,
    sizes: &[usize],
    seed: u64,
    repeats: usize,
    file: Option<&Path>,
) -> Result<(), Failure> {
    let rows = match file {
        Some(p) => {
            let inst = load(p)?;
            let label = p.file_name().map_or_else(|| "instance".into(), |s| s.to_string_lossy().into_owned());
            bench_instance(&label, &inst, &Solver::ALL, repeats).map_err(|e| Failure::Check(e.to_string()))?
        }
        None => bench_sizes(sizes, seed, repeats, &Solver::ALL).map_err(|e| Failure::Invalid(e.to_string()))?,
    };
    out.write_all(render_table(&rows).as_bytes()).map_err(io_err)?;
    if file.is_none() && sizes.len() > 1 {
        for s in Solver::ALL {
            let f: Vec<String> = growth_factors(&rows, s).iter().map(|g| format!("{g:.1}")).collect();
            writeln!(out, "growth {:<15} {}", s.name(), f.join(" ")).map_err(io_err)?;
        }
    }
    let degdets: Vec<(String, Degree)> = rows.iter().map(|r| (r.label.clone(), r.degdet)).collect();
    if degdets.iter().any(|(l, d)| degdets.iter().any(|(l2, d2)| l == l2 && d != d2)) {
        return Err(Failure::Check("solvers disagree on degdet".into()));
    }
    Ok(())
}
