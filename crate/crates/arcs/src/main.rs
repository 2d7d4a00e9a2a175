//! Command-line front end: construct, verify, and survey complete arcs in
//! PG(2,q). Human-readable output goes to stdout; machine formats are only
//! written under `--out`.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or input error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use arcs::{
    bound_margin, compare_to_reference, derive_seed, emit_outputs, exhaustive_min, fop_complete,
    format_arc_line, make_lex_order, parse_arc_line, primes_in_range, random_complete, ratio_stats,
    run_survey, singer_point_order, summarize, verify_arc, verify_complete, Algorithm, ArcResult,
    BoundSpec, ExperimentConfig, Plane, ReferenceTable,
};

#[derive(Parser)]
#[command(
    name = "arcs",
    version,
    about = "Complete arcs in the projective plane PG(2,q), q prime"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum OrderArg {
    Lex,
    Singer,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgArg {
    Random,
    FopLex,
    FopSinger,
}

impl From<AlgArg> for Algorithm {
    fn from(a: AlgArg) -> Algorithm {
        match a {
            AlgArg::Random => Algorithm::Random,
            AlgArg::FopLex => Algorithm::FopLex,
            AlgArg::FopSinger => Algorithm::FopSinger,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Build complete arcs by random completion
    Random {
        /// Prime order of the plane
        #[arg(short)]
        q: u64,
        /// PRNG seed; drawn from system entropy (and echoed) when omitted
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 1)]
        trials: u64,
    },
    /// Build a complete arc by one greedy pass over a fixed point order
    Fop {
        #[arg(short)]
        q: u64,
        /// Point order: the canonical lexicographic one, or the Singer cycle
        #[arg(long, value_enum)]
        order: OrderArg,
    },
    /// Run seeded trials over a prime range and write machine-readable outputs
    Survey {
        #[arg(long)]
        from: u64,
        #[arg(long)]
        to: u64,
        #[arg(long, default_value_t = 1)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Worker threads; defaults to ARCS_WORKERS or the CPU count
        #[arg(long)]
        workers: Option<usize>,
        /// Output directory for records.csv, summary.json, and plot data
        #[arg(long)]
        out: PathBuf,
        /// Reference table (CSV q,size) to compare random sizes against
        #[arg(long)]
        r#ref: Option<PathBuf>,
        /// Algorithms to run
        #[arg(long, value_enum, value_delimiter = ',', default_values_t = [AlgArg::Random])]
        alg: Vec<AlgArg>,
        /// Record wall-clock time per trial (breaks byte-reproducibility)
        #[arg(long)]
        time: bool,
    },
    /// Check arcs in the `q=<q> n=<n> pts=<i1,i2,...>` format with both oracles
    Verify {
        #[arg(long)]
        arc: PathBuf,
    },
    /// Exhaustive search for a smallest complete arc (q <= 11)
    Minimal {
        #[arg(short)]
        q: u64,
        /// Largest arc size to consider; defaults to the plane's maximum
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Integrity checks of the Singer point order
    SingerCheck {
        #[arg(short)]
        q: u64,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn print_result(result: &ArcResult) {
    let plane = Plane::new(result.q).expect("result carries a valid q");
    let seed = result
        .seed
        .map(|s| s.to_string())
        .unwrap_or_else(|| "-".into());
    println!(
        "q={} algorithm={} seed={} size={} elapsed_ms={}",
        result.q,
        result.algorithm,
        seed,
        result.size,
        result.elapsed.as_millis()
    );
    let rendered: Vec<String> = result
        .points
        .iter()
        .map(|&i| plane.point_from_index(i).expect("verified index").to_string())
        .collect();
    println!("points: {}", rendered.join(" "));
    println!("{}", format_arc_line(result.q, &result.points));
}

fn default_workers() -> usize {
    if let Ok(value) = std::env::var("ARCS_WORKERS") {
        if let Ok(n) = value.parse::<usize>() {
            if n >= 1 {
                return n;
            }
        }
    }
    std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
}

fn run(command: Command) -> arcs::Result<ExitCode> {
    match command {
        Command::Random { q, seed, trials } => {
            let plane = Plane::new(q)?;
            let base = seed.unwrap_or_else(|| rand::thread_rng().gen());
            let mut sizes = Vec::new();
            for trial in 0..trials.max(1) {
                let trial_seed = if trials <= 1 {
                    base
                } else {
                    derive_seed(base, q, trial)
                };
                let result = random_complete(&plane, trial_seed);
                print_result(&result);
                sizes.push(result.size);
            }
            if sizes.len() > 1 {
                let mean = sizes.iter().sum::<usize>() as f64 / sizes.len() as f64;
                println!(
                    "sizes: min={} mean={:.2} max={} (base seed {})",
                    sizes.iter().min().unwrap(),
                    mean,
                    sizes.iter().max().unwrap(),
                    base
                );
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Fop { q, order } => {
            let plane = Plane::new(q)?;
            let point_order = match order {
                OrderArg::Lex => make_lex_order(&plane),
                OrderArg::Singer => singer_point_order(&plane)?.into_point_order(),
            };
            let result = fop_complete(&plane, &point_order)?;
            print_result(&result);
            Ok(ExitCode::SUCCESS)
        }
        Command::Survey {
            from,
            to,
            trials,
            seed,
            workers,
            out,
            r#ref,
            alg,
            time,
        } => {
            let qs = primes_in_range(from, to)?;
            let algorithms: Vec<Algorithm> = alg.into_iter().map(Algorithm::from).collect();
            let mut cfg = ExperimentConfig::new(qs, trials, algorithms, seed);
            cfg.workers = workers.unwrap_or_else(default_workers);
            cfg.measure_time = time;
            let records = run_survey(&cfg)?;
            let summary = summarize(&cfg, &records);
            let written = emit_outputs(&records, &summary, &out)?;

            println!(
                "{} trials over {} primes in [{from}, {to}]",
                records.len(),
                cfg.qs.len()
            );
            for &algorithm in &cfg.algorithms {
                let subset: Vec<_> = records
                    .iter()
                    .filter(|r| r.algorithm == algorithm)
                    .cloned()
                    .collect();
                if let Ok(stats) = ratio_stats(&subset, from, to) {
                    println!(
                        "{algorithm}: ratio size/sqrt(q ln q) mean={:.4} min={:.4} max={:.4} over {} trials",
                        stats.mean, stats.min, stats.max, stats.count
                    );
                }
            }
            println!(
                "bound 1.83*sqrt(q ln q): {} violation(s)",
                summary.bound_violations.len()
            );
            for v in &summary.bound_violations {
                println!(
                    "  q={} {} trial {} size {} vs bound {:.2}",
                    v.q, v.algorithm, v.trial, v.size, v.bound
                );
            }

            if let Some(ref_path) = r#ref {
                let table = ReferenceTable::from_path(&ref_path)?;
                let random_records: Vec<_> = records
                    .iter()
                    .filter(|r| r.algorithm == Algorithm::Random)
                    .cloned()
                    .collect();
                let report = compare_to_reference(&random_records, &table);
                if !report.rows.is_empty() {
                    let mean_abs = report
                        .rows
                        .iter()
                        .map(|r| r.pct_diff.abs())
                        .sum::<f64>()
                        / report.rows.len() as f64;
                    let max_abs = report
                        .rows
                        .iter()
                        .map(|r| r.pct_diff.abs())
                        .fold(0.0, f64::max);
                    println!(
                        "reference comparison (series: RANDOM vs {}): {} pairs, mean |pct|={:.2} max |pct|={:.2}, {} q value(s) skipped",
                        ref_path.display(),
                        report.rows.len(),
                        mean_abs,
                        max_abs,
                        report.skipped.len()
                    );
                }
                let mut compare_csv = String::from("q,ref_size,size,pct_diff\n");
                for row in &report.rows {
                    compare_csv.push_str(&format!(
                        "{},{},{},{}\n",
                        row.q, row.ref_size, row.size, row.pct_diff
                    ));
                }
                let compare_path = out.join("compare.csv");
                std::fs::write(&compare_path, compare_csv).map_err(|source| arcs::Error::Io {
                    path: compare_path.display().to_string(),
                    source,
                })?;
                println!("wrote {}", compare_path.display());
            }

            // FOP-vs-random gap, with our lexicographic pass standing in for
            // the fixed-order series.
            let have_fop = records.iter().any(|r| r.algorithm == Algorithm::FopLex);
            let have_rand = records.iter().any(|r| r.algorithm == Algorithm::Random);
            if have_fop && have_rand {
                let mut gaps = Vec::new();
                for &q in &cfg.qs {
                    let fop: Vec<usize> = records
                        .iter()
                        .filter(|r| r.q == q && r.algorithm == Algorithm::FopLex)
                        .map(|r| r.size)
                        .collect();
                    let rnd: Vec<usize> = records
                        .iter()
                        .filter(|r| r.q == q && r.algorithm == Algorithm::Random)
                        .map(|r| r.size)
                        .collect();
                    if let (Some(&f), Some(&r)) = (fop.first(), rnd.first()) {
                        gaps.push((f as f64 - r as f64).abs() / f as f64 * 100.0);
                    }
                }
                if !gaps.is_empty() {
                    println!(
                        "fop-vs-random gap (t_L proxy: our FOP_LEX): mean |pct|={:.2} over {} primes",
                        gaps.iter().sum::<f64>() / gaps.len() as f64,
                        gaps.len()
                    );
                }
            }

            for path in written {
                println!("wrote {}", path.display());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { arc } => {
            let text = std::fs::read_to_string(&arc).map_err(|source| arcs::Error::Io {
                path: arc.display().to_string(),
                source,
            })?;
            let mut all_ok = true;
            let mut checked = 0;
            for line in text.lines() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let (q, pts) = parse_arc_line(line)?;
                let plane = Plane::new(q)?;
                checked += 1;
                if !verify_arc(&plane, &pts) {
                    println!("arc: FAIL (duplicate or collinear points), complete: not checked");
                    all_ok = false;
                    continue;
                }
                let complete = verify_complete(&plane, &pts)?;
                if complete {
                    println!("arc: OK, complete: OK");
                } else {
                    println!("arc: OK, complete: FAIL (uncovered points remain)");
                    all_ok = false;
                }
            }
            if checked == 0 {
                return Err(arcs::Error::Parse(format!(
                    "{}: no arc lines found",
                    arc.display()
                )));
            }
            Ok(if all_ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Minimal { q, cap } => {
            let plane = Plane::new(q)?;
            let cap = cap.unwrap_or_else(|| arcs::construct::default_size_cap(q));
            match exhaustive_min(&plane, cap)? {
                Some(result) => {
                    println!("minimum complete arc size: {}", result.size);
                    print_result(&result);
                }
                None => println!("no complete arc within size cap {cap}"),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::SingerCheck { q, trials, seed } => {
            let plane = Plane::new(q)?;
            let order = singer_point_order(&plane)?;
            println!(
                "q={} points={} primitive cubic: {}",
                q,
                plane.n_points(),
                order.poly()
            );
            println!("permutation: bijective over {} points", order.permutation().len());
            let seed = seed.unwrap_or_else(|| rand::thread_rng().gen());
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let preserved =
                arcs::singer::singer_is_collineation_sample(&order, trials.max(1), &mut rng);
            println!(
                "collineation sample ({} trials, seed {}): {}",
                trials.max(1),
                seed,
                if preserved { "OK" } else { "FAIL" }
            );
            let result = fop_complete(&plane, &order.into_point_order())?;
            println!(
                "fop arc under singer order: size={} (oracle verified), margin to 1.83*sqrt(q ln q): {:.2}",
                result.size,
                bound_margin(&BoundSpec::MAIN, q, result.size)
            );
            Ok(if preserved {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}
