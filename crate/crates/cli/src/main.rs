//! `dilates`: file-based CLI over the dilates-core toolkit.
//!
//! Every run is fully determined by its arguments (including seeds);
//! outputs are byte-identical across runs and worker counts. Exit codes:
//! 0 success, 1 usage or domain errors, 2 a `verify` run found violations.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_traits::ToPrimitive;

use dilates_core::bounds::{self, bound_report};
use dilates_core::circle::{parse_rational, IntervalSet};
use dilates_core::construct::{
    construct_zp_with, cycle_construction, level_measure, zero_run_levels, ConstructionParams,
    RECOMMENDED_MIN_P,
};
use dilates_core::oracle::{cd_suite, exhaustive_ex, randomized_ex, ruzsa_suite, vosper_suite};
use dilates_core::structure::{diameter, rectify};
use dilates_core::{DilateVector, ZpSet};

#[derive(Parser)]
#[command(
    name = "dilates",
    version,
    about = "sums of dilates over Z_p: kernels, constructions, bounds, searches"
)]
struct Cli {
    /// Worker threads for partitionable scans (output is worker-count-invariant).
    #[arg(long, global = true, default_value_t = 1)]
    workers: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a sum of dilates of a set file and report bounds against it.
    Sumset {
        /// Set file (line 1 `p=<prime>`, line 2 increasing residues).
        #[arg(long)]
        input: PathBuf,
        /// Dilate coefficients, e.g. `1,-2`.
        #[arg(long)]
        lambdas: String,
        /// Write the resulting sumset as a set file.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Shortest covering arithmetic progression of a set file.
    Diameter {
        #[arg(long)]
        input: PathBuf,
    },
    /// Lift a set file to the integers along its covering progression.
    Rectify {
        #[arg(long)]
        input: PathBuf,
        /// Weight cap Σ|λᵢ| the lift must support.
        #[arg(long)]
        weight: u64,
    },
    /// Build extremal sets.
    #[command(subcommand)]
    Construct(ConstructCmd),
    /// Project an interval-set file onto Z_p.
    Discretize {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Emit a CSV of lower-bound values over a (lambda, alpha) grid.
    Bounds(BoundsArgs),
    /// Extremal-set searches (CSV output).
    #[command(subcommand)]
    Extremal(ExtremalCmd),
    /// Exhaustive and randomized verification suites.
    #[command(subcommand)]
    Verify(VerifyCmd),
}

#[derive(Subcommand)]
enum ConstructCmd {
    /// Alternating vertices of the cycles of x -> (-l1/l2)x on Z_p \ {0}.
    Cycle {
        #[arg(long)]
        p: u64,
        #[arg(long, allow_negative_numbers = true)]
        l1: i64,
        #[arg(long, allow_negative_numbers = true)]
        l2: i64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Zero-run tower set with |A| >= (1/2 - eps)p and |A + lambda*A| < p.
    Rokhlin {
        #[arg(long)]
        p: u64,
        /// The dilate lambda in A + lambda*A (|lambda| >= 2).
        #[arg(long, allow_negative_numbers = true)]
        lambda: i64,
        /// Target density deficit, an exact rational like `1/4`.
        #[arg(long)]
        epsilon: String,
        /// Boundary pruning window (default scales with p; trades density for margin).
        #[arg(long)]
        window: Option<u64>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long, default_value_t = 2, allow_negative_numbers = true)]
    lambda_min: i64,
    #[arg(long, default_value_t = 10, allow_negative_numbers = true)]
    lambda_max: i64,
    /// Number of alpha grid points in [0, alpha_max).
    #[arg(long, default_value_t = 25)]
    alpha_steps: u32,
    #[arg(long, default_value_t = 0.06)]
    alpha_max: f64,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(clap::ValueEnum, Clone, Copy, PartialEq, Eq)]
enum TableFormat {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum ExtremalCmd {
    /// Exact minimum over all subsets of the given size (small p).
    Exhaustive {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        lambdas: String,
        #[arg(long)]
        size: u64,
        #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
        format: TableFormat,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Seeded local search; the result is an upper bound.
    Random {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        lambdas: String,
        #[arg(long)]
        size: u64,
        #[arg(long, default_value_t = 10_000)]
        iterations: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
        format: TableFormat,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Cauchy-Davenport over every nonempty pair of subsets of Z_p.
    Cd {
        #[arg(long)]
        p: u64,
    },
    /// Vosper's equality case over every pair with |A|,|B| >= 2.
    Vosper {
        #[arg(long)]
        p: u64,
    },
    /// Ruzsa triangle inequality on seeded random triples.
    Ruzsa {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Tower levels: disjointness, nesting, and DP-vs-interval measures.
    Tower {
        /// lambda <= -2 (the interval pipeline needs a positive multiplier).
        #[arg(long, allow_negative_numbers = true)]
        lambda: i64,
        #[arg(long)]
        m: u32,
        #[arg(long, default_value_t = 8)]
        levels: u32,
        /// Abort if any level would need more spans than this.
        #[arg(long, default_value_t = dilates_core::construct::DEFAULT_INTERVAL_CAP)]
        interval_cap: usize,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    match cli.command {
        Command::Sumset {
            input,
            lambdas,
            output,
        } => {
            let set = ZpSet::from_text(&std::fs::read_to_string(&input)?)?;
            let dv = DilateVector::parse(&lambdas)?;
            let report = bound_report(&set, &dv)?;
            let sum = set.dilate_sum(&dv)?;
            let mut out = String::new();
            out.push_str(&format!(
                "p={} size={} lambdas={}\n",
                report.p, report.set_size, dv
            ));
            out.push_str(&format!("cd={}\n", report.cd));
            out.push_str(&format!("bukh_main={}\n", report.bukh_main));
            match report.plagne_value {
                Some(v) => out.push_str(&format!("plagne={v:.6} upper_estimate=true\n")),
                None => out.push_str("plagne=n/a\n"),
            }
            out.push_str(&format!(
                "green_ruzsa_diameter={:.6}\n",
                report.green_ruzsa_diameter
            ));
            out.push_str(&format!("actual={}\n", report.actual));
            out.push_str(&format!(
                "ratio={:.6}\n",
                report.actual as f64 / report.set_size as f64
            ));
            print!("{out}");
            if let Some(path) = output {
                std::fs::write(path, sum.to_text())?;
            }
            Ok(0)
        }
        Command::Diameter { input } => {
            let set = ZpSet::from_text(&std::fs::read_to_string(&input)?)?;
            let w = diameter(&set)?;
            println!("{w}");
            Ok(0)
        }
        Command::Rectify { input, weight } => {
            let set = ZpSet::from_text(&std::fs::read_to_string(&input)?)?;
            let lift = rectify(&set, weight)?;
            let parts: Vec<String> = lift.elements().iter().map(|e| e.to_string()).collect();
            println!("{}", parts.join(" "));
            Ok(0)
        }
        Command::Construct(cmd) => run_construct(cmd, cli.workers),
        Command::Discretize { input, p, output } => {
            let ivs = IntervalSet::from_text(&std::fs::read_to_string(&input)?)?;
            let set = ivs.discretize(p)?;
            let text = set.to_text();
            match output {
                Some(path) => std::fs::write(path, text)?,
                None => print!("{text}"),
            }
            Ok(0)
        }
        Command::Bounds(args) => run_bounds(args),
        Command::Extremal(cmd) => run_extremal(cmd),
        Command::Verify(cmd) => run_verify(cmd),
    }
}

fn run_construct(cmd: ConstructCmd, workers: usize) -> anyhow::Result<u8> {
    match cmd {
        ConstructCmd::Cycle { p, l1, l2, output } => {
            let outcome = cycle_construction(p, l1, l2)?;
            let mut text = format!(
                "# lambda1={} lambda2={} k={} density={:.6}\n",
                l1,
                l2,
                outcome.cycle_len,
                outcome.set.density()
            );
            text.push_str(&outcome.set.to_text());
            match output {
                Some(path) => std::fs::write(path, text)?,
                None => print!("{text}"),
            }
            Ok(0)
        }
        ConstructCmd::Rokhlin {
            p,
            lambda,
            epsilon,
            window,
            output,
        } => {
            let eps = parse_rational(&epsilon)?;
            if p < RECOMMENDED_MIN_P {
                eprintln!("warning: p={p} is below the recommended scale {RECOMMENDED_MIN_P}; the density guarantee is loose here");
            }
            let outcome = construct_zp_with(lambda, &eps, p, window, workers)?;
            let mut text = format!(
                "# lambda={} nu={} m={} t={} epsilon={} density={:.6} sumset_density={:.6}\n",
                outcome.params.lambda,
                outcome.params.nu,
                outcome.params.m,
                outcome.params.t,
                outcome.params.epsilon,
                outcome.density,
                1.0 - outcome.deficit,
            );
            text.push_str(&format!(
                "# window={} deletions={} sumset_size={}\n",
                outcome.window, outcome.deletions, outcome.sumset_size
            ));
            text.push_str(&outcome.set.to_text());
            match output {
                Some(path) => std::fs::write(path, text)?,
                None => print!("{text}"),
            }
            Ok(0)
        }
    }
}

fn run_bounds(args: BoundsArgs) -> anyhow::Result<u8> {
    let mut out = String::new();
    out.push_str(&format!(
        "# dilates bounds lambda={}..{} alpha_steps={} alpha_max={}\n",
        args.lambda_min, args.lambda_max, args.alpha_steps, args.alpha_max
    ));
    for l in args.lambda_min..=args.lambda_max {
        let a_star = bounds::plagne_threshold(l)?;
        out.push_str(&format!("# alpha_star lambda={l} value={a_star:.6}\n"));
    }
    out.push_str("lambda,alpha,plagne_f,bukh_main_ratio,cd_ratio\n");
    for l in args.lambda_min..=args.lambda_max {
        for i in 0..args.alpha_steps {
            let alpha = args.alpha_max * i as f64 / args.alpha_steps as f64;
            let f = bounds::plagne_f(l, alpha)?;
            let bukh_ratio = 1 + l.unsigned_abs(); // weight of (1, lambda)
            let cd_ratio = if alpha == 0.0 {
                2.0
            } else {
                (1.0 / alpha).min(2.0)
            };
            out.push_str(&format!(
                "{l},{alpha:.6},{f:.6},{bukh_ratio},{cd_ratio:.6}\n"
            ));
        }
    }
    match args.output {
        Some(path) => std::fs::write(path, out)?,
        None => print!("{out}"),
    }
    Ok(0)
}

fn run_extremal(cmd: ExtremalCmd) -> anyhow::Result<u8> {
    let (record, format, output) = match cmd {
        ExtremalCmd::Exhaustive {
            p,
            lambdas,
            size,
            format,
            output,
        } => {
            let dv = DilateVector::parse(&lambdas)?;
            (exhaustive_ex(p, &dv, size)?, format, output)
        }
        ExtremalCmd::Random {
            p,
            lambdas,
            size,
            iterations,
            seed,
            format,
            output,
        } => {
            let dv = DilateVector::parse(&lambdas)?;
            (
                randomized_ex(p, &dv, size, iterations, seed)?,
                format,
                output,
            )
        }
    };
    let witness: Vec<String> = record.witness.iter().map(|x| x.to_string()).collect();
    let out = match format {
        TableFormat::Csv => format!(
            "p,k,lambdas,size,min_sumset,ratio,mode,witness\n{},{},{},{},{},{:.6},{},{}\n",
            record.p,
            record.lambdas.len(),
            record.lambdas,
            record.size,
            record.min_sumset,
            record.ratio,
            record.mode,
            witness.join(";")
        ),
        TableFormat::Json => format!(
            "{{\"p\":{},\"k\":{},\"lambdas\":\"{}\",\"size\":{},\"min_sumset\":{},\"ratio\":{:.6},\"mode\":\"{}\",\"witness\":[{}]}}\n",
            record.p,
            record.lambdas.len(),
            record.lambdas,
            record.size,
            record.min_sumset,
            record.ratio,
            record.mode,
            witness.join(",")
        ),
    };
    match output {
        Some(path) => std::fs::write(path, out)?,
        None => print!("{out}"),
    }
    Ok(0)
}

fn run_verify(cmd: VerifyCmd) -> anyhow::Result<u8> {
    match cmd {
        VerifyCmd::Cd { p } => {
            let r = cd_suite(p)?;
            println!(
                "cd p={}: {} violations / {} pairs",
                r.p, r.violations, r.pairs
            );
            Ok(if r.violations == 0 { 0 } else { 2 })
        }
        VerifyCmd::Vosper { p } => {
            let r = vosper_suite(p)?;
            println!(
                "vosper p={}: {} violations / {} equality cases / {} pairs",
                r.p, r.violations, r.equality_cases, r.pairs
            );
            Ok(if r.violations == 0 { 0 } else { 2 })
        }
        VerifyCmd::Ruzsa { p, trials, seed } => {
            let r = ruzsa_suite(p, trials, seed)?;
            println!(
                "ruzsa p={}: {} violations, {} chained violations / {} trials",
                r.p, r.violations, r.chained_violations, r.trials
            );
            Ok(if r.violations == 0 && r.chained_violations == 0 {
                0
            } else {
                2
            })
        }
        VerifyCmd::Tower {
            lambda,
            m,
            levels,
            interval_cap,
        } => {
            let mut params =
                ConstructionParams::new(lambda, m, m.max(1), dilates_core::circle::rat(1, 4))?;
            params.interval_cap = interval_cap;
            let sets = zero_run_levels(&params, levels)?;
            let mut violations = 0u64;
            for i in 0..sets.len() {
                for (j, upper) in sets.iter().enumerate().skip(i + 1) {
                    if !sets[i].intersect(upper).is_empty() {
                        eprintln!("E_{i} and E_{j} intersect");
                        violations += 1;
                    }
                }
                if i + 1 < sets.len() {
                    let dilated = sets[i + 1].dilate_mod1(params.nu)?;
                    if !sets[i].contains_set(&dilated) {
                        eprintln!("nu*E_{} is not inside E_{}", i + 1, i);
                        violations += 1;
                    }
                }
                let dp = level_measure(&params, i as u32)?;
                if dp != sets[i].measure() {
                    eprintln!(
                        "measure mismatch at level {i}: dp={dp} interval={}",
                        sets[i].measure()
                    );
                    violations += 1;
                }
            }
            println!(
                "tower nu={} m={} levels={}: {} violations (mu_total={})",
                params.nu,
                params.m,
                levels,
                violations,
                sets.iter()
                    .map(|s| s.measure().to_f64().unwrap_or(0.0))
                    .sum::<f64>()
            );
            Ok(if violations == 0 { 0 } else { 2 })
        }
    }
}
