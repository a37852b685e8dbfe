//! `stackmst` command-line interface.
//!
//! Subcommands: `solve` (exact, best-out-of-k, brute-force oracle), `lp`
//! (cutting-plane relaxation and integrality gap), `gen` (instance family
//! generators emitting the v1 text format), and `bench` (CSV tables over the
//! built-in families). Exit codes: 0 success, 1 invalid input or usage,
//! 2 budget exceeded.

use std::collections::BTreeSet;
use std::io::{Read, Write};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num::ToPrimitive;
use sha2::{Digest, Sha256};

use stackmst::instance::{
    format_rational, parse_instance, parse_rational, serialize_instance, Rat,
};
use stackmst::lp::{gap_report, solve_lp, LpOptions};
use stackmst::solvers::{
    best_out_of_k, ratio_report, solve_exact, solve_oracle, Budget, GuaranteeBounds, Solution,
};
use stackmst::{generators, Error, StackInstance};

#[derive(Parser)]
#[command(name = "stackmst", version, about = "Stackelberg minimum spanning tree pricing")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance exactly or approximately.
    Solve(SolveArgs),
    /// Solve the LP relaxation by cutting planes and report the gap.
    Lp(LpArgs),
    /// Generate an instance family on stdout.
    Gen(GenArgs),
    /// Run a benchmark suite and emit CSV.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Algo {
    Exact,
    Bok,
    Oracle,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long, value_enum)]
    algo: Algo,
    /// Instance file in stackmst v1 format, or `-` for stdin.
    #[arg(long, default_value = "-")]
    input: String,
    #[arg(long, value_enum, default_value = "text")]
    output: OutputFormat,
    /// Enumeration cap (forest nodes or oracle evaluations).
    #[arg(long)]
    budget: Option<u64>,
    /// Worker count; accepted for compatibility, results are deterministic
    /// and identical for any value.
    #[arg(long, default_value_t = 1)]
    threads: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum LpReport {
    Gap,
    Value,
    Point,
}

#[derive(Args)]
struct LpArgs {
    #[arg(long, default_value = "-")]
    input: String,
    #[arg(long, value_enum, default_value = "gap")]
    report: LpReport,
    #[arg(long, value_enum, default_value = "text")]
    output: OutputFormat,
    #[arg(long)]
    budget: Option<u64>,
    /// Cutting-plane round cap.
    #[arg(long, default_value_t = 10_000)]
    iter_cap: usize,
    /// Contracted-vertex limit for exhaustive partition separation.
    #[arg(long, default_value_t = 20)]
    max_subset: usize,
}

#[derive(Args)]
struct GenArgs {
    #[command(subcommand)]
    family: GenFamily,
}

#[derive(Subcommand)]
enum GenFamily {
    /// Set-cover reduction; elements are 1-based, sets given as comma lists.
    Setcover {
        #[arg(long)]
        n: usize,
        /// Repeatable: one set per flag, e.g. --set 1,2,6
        #[arg(long = "set", required = true)]
        sets: Vec<String>,
        /// Add a fresh shared element to every set first.
        #[arg(long)]
        normalize: bool,
        /// Write the blue-edge/incidence mapping to this sidecar file.
        #[arg(long)]
        meta: Option<String>,
    },
    /// Vertex-cover reduction for connected simple graphs of max degree 3.
    Vertexcover {
        #[arg(long)]
        vertices: usize,
        /// Repeatable: one edge per flag, e.g. --edge 0,1
        #[arg(long = "edge", required = true)]
        edges: Vec<String>,
        #[arg(long)]
        meta: Option<String>,
    },
    /// Red path of costs 1, 1/2, ..., 1/k, each doubled by a blue edge.
    Harmonic {
        #[arg(long)]
        k: usize,
    },
    /// Red path with a^{k-i} edges of cost a^{i-1}, each doubled in blue.
    Geometric {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        a: u64,
    },
    /// Integrality-gap star-and-cliques family.
    Gap {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        a: u64,
        /// Pad with parallel blue edges up to this count.
        #[arg(long)]
        pad_to_b: Option<usize>,
    },
    /// Seeded random instance (ChaCha8 stream).
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        red_extra: usize,
        #[arg(long)]
        b: usize,
        /// Comma-separated positive rationals, e.g. 1,2,5/2
        #[arg(long)]
        cost_pool: String,
        #[arg(long)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum, PartialEq)]
enum Suite {
    Ratios,
    Gaps,
    Families,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_enum)]
    suite: Suite,
    /// Add float-rendered convenience columns.
    #[arg(long)]
    float: bool,
    #[arg(long)]
    budget: Option<u64>,
}

fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Budget(_) | Error::IterationCap(_) | Error::Separation(_) => 2,
        _ => 1,
    }
}

fn fail(err: Error) -> ! {
    eprintln!("error: {}", err);
    std::process::exit(exit_code(&err));
}

fn read_input(path: &str) -> std::io::Result<String> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin().read_to_string(&mut buf)?;
        Ok(buf)
    } else {
        std::fs::read_to_string(path)
    }
}

fn load_instance(path: &str) -> (StackInstance, String) {
    let text = match read_input(path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {}", path, e);
            std::process::exit(1);
        }
    };
    let digest = hex_digest(&text);
    match parse_instance(&text) {
        Ok(inst) => (inst, digest),
        Err(e) => fail(e),
    }
}

fn hex_digest(text: &str) -> String {
    let mut hasher = Sha256::new();
    hasher.update(text.as_bytes());
    let out = hasher.finalize();
    out.iter().take(8).map(|b| format!("{:02x}", b)).collect()
}

fn budget_from(flag: Option<u64>) -> Budget {
    match flag {
        Some(n) => Budget {
            forest_nodes: n,
            oracle_evals: n,
        },
        None => Budget::default(),
    }
}

fn main() {
    let cli = Cli::parse();
    match cli.command {
        Command::Solve(args) => cmd_solve(args),
        Command::Lp(args) => cmd_lp(args),
        Command::Gen(args) => cmd_gen(args),
        Command::Bench(args) => cmd_bench(args),
    }
}

fn print_solution(
    sol: &Solution,
    digest: &str,
    wall_ms: u128,
    format: OutputFormat,
) {
    match format {
        OutputFormat::Text => {
            println!("algorithm {}", sol.algorithm.name());
            println!("revenue {}", format_rational(&sol.revenue));
            let forest: Vec<String> = sol.forest.iter().map(|id| id.to_string()).collect();
            println!("forest {}", forest.join(" "));
            for (id, _) in sol.prices.iter() {
                match sol.prices.finite(id) {
                    Some(p) => println!("price {} {}", id, format_rational(p)),
                    None => println!("price {} inf", id),
                }
            }
            println!("digest {}", digest);
            println!("work {}", sol.work);
            println!("wall_ms {}", wall_ms);
        }
        OutputFormat::Json => {
            let prices: serde_json::Map<String, serde_json::Value> = sol
                .prices
                .iter()
                .map(|(id, _)| {
                    let v = match sol.prices.finite(id) {
                        Some(p) => format_rational(p),
                        None => "inf".to_string(),
                    };
                    (id.to_string(), serde_json::Value::String(v))
                })
                .collect();
            let record = serde_json::json!({
                "algorithm": sol.algorithm.name(),
                "revenue": format_rational(&sol.revenue),
                "forest": sol.forest.iter().copied().collect::<Vec<_>>(),
                "prices": prices,
                "digest": digest,
                "work": sol.work,
                "wall_ms": wall_ms,
            });
            println!("{}", serde_json::to_string_pretty(&record).unwrap());
        }
    }
}

fn cmd_solve(args: SolveArgs) {
    let _ = args.threads;
    let (inst, digest) = load_instance(&args.input);
    let budget = budget_from(args.budget);
    let start = Instant::now();
    let result = match args.algo {
        Algo::Exact => solve_exact(&inst, &budget),
        Algo::Oracle => solve_oracle(&inst, &budget),
        Algo::Bok => best_out_of_k(&inst.contract_zero_red()).map(|(sol, _)| sol),
    };
    let wall_ms = start.elapsed().as_millis();
    match result {
        Ok(sol) => print_solution(&sol, &digest, wall_ms, args.output),
        Err(e) => fail(e),
    }
}

fn cmd_lp(args: LpArgs) {
    let (inst, digest) = load_instance(&args.input);
    let inst = inst.contract_zero_red();
    let opts = LpOptions {
        iteration_cap: args.iter_cap,
        max_subset_vertices: args.max_subset,
    };
    let budget = budget_from(args.budget);
    let start = Instant::now();
    match args.report {
        LpReport::Value | LpReport::Point => {
            let sol = match solve_lp(&inst, &opts) {
                Ok(s) => s,
                Err(e) => fail(e),
            };
            let wall_ms = start.elapsed().as_millis();
            match args.output {
                OutputFormat::Text => {
                    println!("lp {}", format_rational(&sol.value));
                    println!("cuts {}", sol.cut_count);
                    println!("rounds {}", sol.rounds);
                    println!("pivots {}", sol.pivots);
                    if matches!(args.report, LpReport::Point) {
                        let b = inst.blue_count();
                        for (var, v) in sol.point.iter().enumerate() {
                            println!("x_{}_{} {}", var / b + 1, var % b, format_rational(v));
                        }
                    }
                    println!("digest {}", digest);
                    println!("wall_ms {}", wall_ms);
                }
                OutputFormat::Json => {
                    let mut record = serde_json::json!({
                        "lp": format_rational(&sol.value),
                        "cuts": sol.cut_count,
                        "rounds": sol.rounds,
                        "pivots": sol.pivots,
                        "digest": digest,
                        "wall_ms": wall_ms,
                    });
                    if matches!(args.report, LpReport::Point) {
                        let b = inst.blue_count();
                        let point: serde_json::Map<String, serde_json::Value> = sol
                            .point
                            .iter()
                            .enumerate()
                            .map(|(var, v)| {
                                (
                                    format!("x_{}_{}", var / b + 1, var % b),
                                    serde_json::Value::String(format_rational(v)),
                                )
                            })
                            .collect();
                        record["point"] = serde_json::Value::Object(point);
                    }
                    println!("{}", serde_json::to_string_pretty(&record).unwrap());
                }
            }
        }
        LpReport::Gap => {
            let report = match gap_report(&inst, &budget, &opts) {
                Ok(r) => r,
                Err(e) => fail(e),
            };
            let wall_ms = start.elapsed().as_millis();
            match args.output {
                OutputFormat::Text => {
                    println!("ip {}", format_rational(&report.ip));
                    println!("lp {}", format_rational(&report.lp));
                    println!("ratio {}", format_rational(&report.ratio));
                    println!("bound_k {}", report.bounds.bound_k);
                    println!("bound_ln_b {}", report.bounds.bound_ln_b);
                    match report.bounds.bound_ln_w {
                        Some(w) => println!("bound_ln_w {}", w),
                        None => println!("bound_ln_w undefined"),
                    }
                    println!("within_bounds {}", report.within_bounds);
                    println!("cuts {}", report.cut_count);
                    println!("rounds {}", report.rounds);
                    println!("digest {}", digest);
                    println!("wall_ms {}", wall_ms);
                }
                OutputFormat::Json => {
                    let record = serde_json::json!({
                        "ip": format_rational(&report.ip),
                        "lp": format_rational(&report.lp),
                        "ratio": format_rational(&report.ratio),
                        "bound_k": report.bounds.bound_k,
                        "bound_ln_b": report.bounds.bound_ln_b,
                        "bound_ln_w": report.bounds.bound_ln_w,
                        "within_bounds": report.within_bounds,
                        "cuts": report.cut_count,
                        "rounds": report.rounds,
                        "digest": digest,
                        "wall_ms": wall_ms,
                    });
                    println!("{}", serde_json::to_string_pretty(&record).unwrap());
                }
            }
        }
    }
}

fn parse_usize_list(s: &str) -> Result<Vec<usize>, Error> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| Error::Argument(format!("bad integer `{}`", t)))
        })
        .collect()
}

fn write_meta(path: &str, meta: &generators::ReductionMeta) {
    let mut out = String::new();
    out.push_str(&format!("n {}\n", meta.n));
    out.push_str(&format!("m {}\n", meta.m));
    for (id, (elem, set)) in meta.blue_incidence.iter().enumerate() {
        out.push_str(&format!("blue {} {} {}\n", id, elem, set));
    }
    if let Err(e) = std::fs::write(path, out) {
        eprintln!("error: cannot write {}: {}", path, e);
        std::process::exit(1);
    }
}

fn cmd_gen(args: GenArgs) {
    let result: Result<(StackInstance, Option<(generators::ReductionMeta, Option<String>)>), Error> =
        (|| match args.family {
            GenFamily::Setcover {
                n,
                sets,
                normalize,
                meta,
            } => {
                let sets: Result<Vec<BTreeSet<usize>>, Error> = sets
                    .iter()
                    .map(|s| parse_usize_list(s).map(|v| v.into_iter().collect()))
                    .collect();
                let mut sc = generators::SetCoverInstance::new(n, sets?)?;
                if normalize {
                    sc = generators::normalize_setcover(&sc);
                }
                let (inst, m) = generators::gen_setcover(&sc)?;
                Ok((inst, Some((m, meta))))
            }
            GenFamily::Vertexcover {
                vertices,
                edges,
                meta,
            } => {
                let parsed: Result<Vec<(usize, usize)>, Error> = edges
                    .iter()
                    .map(|s| {
                        let v = parse_usize_list(s)?;
                        if v.len() != 2 {
                            return Err(Error::Argument(format!("bad edge `{}`", s)));
                        }
                        Ok((v[0], v[1]))
                    })
                    .collect();
                let (inst, m) = generators::gen_vertexcover(vertices, &parsed?)?;
                Ok((inst, Some((m, meta))))
            }
            GenFamily::Harmonic { k } => Ok((generators::gen_harmonic(k)?, None)),
            GenFamily::Geometric { k, a } => Ok((generators::gen_geometric(k, a)?, None)),
            GenFamily::Gap { k, a, pad_to_b } => {
                Ok((generators::gen_gap(k, a, pad_to_b)?, None))
            }
            GenFamily::Random {
                n,
                red_extra,
                b,
                cost_pool,
                seed,
            } => {
                let pool: Result<Vec<Rat>, Error> = cost_pool
                    .split(',')
                    .map(|t| {
                        parse_rational(t.trim())
                            .ok_or_else(|| Error::Argument(format!("bad rational `{}`", t)))
                    })
                    .collect();
                Ok((generators::gen_random(n, red_extra, b, &pool?, seed)?, None))
            }
        })();
    match result {
        Ok((inst, meta)) => {
            print!("{}", serialize_instance(&inst));
            if let Some((m, Some(path))) = meta {
                write_meta(&path, &m);
            }
        }
        Err(e) => fail(e),
    }
}

struct BenchRow {
    family: String,
    k: usize,
    a: u64,
    inst: StackInstance,
}

fn cmd_bench(args: BenchArgs) {
    let budget = budget_from(args.budget);
    let mut rows: Vec<BenchRow> = Vec::new();
    let push = |rows: &mut Vec<BenchRow>, family: &str, k: usize, a: u64, inst: StackInstance| {
        rows.push(BenchRow {
            family: family.into(),
            k,
            a,
            inst,
        });
    };
    match args.suite {
        Suite::Ratios => {
            for k in 1..=6 {
                push(&mut rows, "harmonic", k, 0, generators::gen_harmonic(k).unwrap());
            }
        }
        Suite::Families => {
            for (k, a) in [(2, 2), (2, 3), (3, 2), (3, 3)] {
                push(
                    &mut rows,
                    "geometric",
                    k,
                    a,
                    generators::gen_geometric(k, a).unwrap(),
                );
            }
        }
        Suite::Gaps => {
            for a in 2..=5 {
                push(&mut rows, "gap", 2, a, generators::gen_gap(2, a, None).unwrap());
            }
        }
    }
    if rows.is_empty() {
        eprintln!("error: empty suite selection");
        std::process::exit(1);
    }

    let mut writer = csv::Writer::from_writer(std::io::stdout());
    let mut header = vec![
        "suite", "family", "k", "a", "opt", "bok", "ratio", "bound_k", "bound_ln_b",
        "bound_ln_w", "lp", "ip", "gap",
    ];
    if args.float {
        header.extend(["opt_float", "ratio_float", "gap_float"]);
    }
    writer.write_record(&header).unwrap();
    let suite_name = match args.suite {
        Suite::Ratios => "ratios",
        Suite::Gaps => "gaps",
        Suite::Families => "families",
    };
    for row in rows {
        let report = match ratio_report(&row.inst, &budget) {
            Ok(r) => r,
            Err(e) => fail(e),
        };
        let gap = match gap_report(&row.inst, &budget, &LpOptions::default()) {
            Ok(g) => g,
            Err(e) => fail(e),
        };
        let bounds: GuaranteeBounds = report.bounds;
        let mut record = vec![
            suite_name.to_string(),
            row.family.clone(),
            row.k.to_string(),
            row.a.to_string(),
            format_rational(&report.opt),
            format_rational(&report.bok),
            format_rational(&report.ratio),
            format!("{}", bounds.bound_k),
            format!("{}", bounds.bound_ln_b),
            bounds
                .bound_ln_w
                .map(|w| format!("{}", w))
                .unwrap_or_else(|| "undefined".into()),
            format_rational(&gap.lp),
            format_rational(&gap.ip),
            format_rational(&gap.ratio),
        ];
        if args.float {
            record.push(format!("{}", report.opt.to_f64().unwrap_or(f64::NAN)));
            record.push(format!("{}", report.ratio.to_f64().unwrap_or(f64::NAN)));
            record.push(format!("{}", gap.ratio.to_f64().unwrap_or(f64::NAN)));
        }
        writer.write_record(&record).unwrap();
    }
    writer.flush().unwrap();
    let _ = std::io::stdout().flush();
}
