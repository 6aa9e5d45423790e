//! Command-line front end. Exit codes: 0 success, 1 operational error,
//! 2 bound violations found by verify-bounds.

use clap::{Args, Parser, Subcommand};
use lchi::arith::LambdaTable;
use lchi::cli;
use lchi::randmodel::{self, MomentSpec, RandomModelConfig};
use lchi::scalar::Precision;
use lchi::Result;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "lchi",
    about = "Extremal statistics of L'/L(1,chi) over Dirichlet characters mod prime q"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep every odd prime in a range and write one CSV row per prime
    Compute {
        #[arg(long)]
        min: u64,
        #[arg(long)]
        max: u64,
        /// worker threads (0 = all cores)
        #[arg(long, default_value_t = 0)]
        threads: usize,
        /// extended | quad
        #[arg(long, default_value = "extended")]
        precision: String,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        checkpoint: Option<PathBuf>,
    },
    /// Evaluate one modulus at quad113 with digit-controlled output
    Single {
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = 20)]
        digits: usize,
    },
    /// Check 21/(200q) < m_q < 5/sqrt(q) on a sweep CSV
    VerifyBounds {
        #[arg(long)]
        csv: PathBuf,
        #[arg(long = "c1-num", default_value_t = 21)]
        c1_num: u64,
        #[arg(long = "c1-den", default_value_t = 200)]
        c1_den: u64,
        #[arg(long, default_value_t = 5.0)]
        c2: f64,
    },
    /// Parity and extremal statistics of a sweep CSV
    Stats {
        #[arg(long)]
        csv: PathBuf,
    },
    /// Emit per-decade scatter data and reference curves
    Plotdata {
        #[arg(long)]
        csv: PathBuf,
        #[arg(long = "out-dir")]
        out_dir: PathBuf,
    },
    /// Random Euler-product model Ld(1,X)
    #[command(subcommand, name = "random-model")]
    RandomModel(RandomModelCmd),
}

#[derive(Subcommand)]
enum RandomModelCmd {
    /// Draw seeded samples and export them
    Sample {
        #[command(flatten)]
        model: ModelArgs,
        /// output path; .bin gets the binary layout, anything else CSV
        #[arg(long)]
        out: PathBuf,
    },
    /// Characteristic function Phi(u,v)
    Charfun {
        #[arg(long)]
        u: f64,
        #[arg(long)]
        v: f64,
        #[command(flatten)]
        model: ModelArgs,
    },
    /// Empirical distance between the character ensemble at q and the model
    Discrepancy {
        #[arg(long)]
        q: u64,
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = randmodel::DISCREPANCY_DEFAULT_GRID)]
        grid: usize,
    },
    /// Exact moments E(Ld^k conj(Ld)^l) with tail bounds
    Moments {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        l: u32,
        #[arg(long, default_value_t = 1_000_000)]
        cutoff: usize,
    },
}

#[derive(Args)]
struct ModelArgs {
    #[arg(long, default_value_t = 1_000_000)]
    samples: usize,
    #[arg(long = "prime-cutoff", default_value_t = 10_000)]
    prime_cutoff: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 128)]
    points: usize,
}

impl ModelArgs {
    fn config(&self) -> RandomModelConfig {
        RandomModelConfig {
            prime_cutoff: self.prime_cutoff,
            samples: self.samples,
            seed: self.seed,
            quadrature_points: self.points,
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Compute {
            min,
            max,
            threads,
            precision,
            out,
            checkpoint,
        } => {
            let precision = Precision::parse(&precision).ok_or_else(|| {
                lchi::Error::InvalidInput(format!("unknown precision '{precision}'"))
            })?;
            let manifest = cli::SweepManifest {
                q_min: min,
                q_max: max,
                precision,
                threads,
                out,
                checkpoint,
            };
            let summary = cli::run_compute(&manifest)?;
            println!(
                "computed {} reused {} escalated {} failed {}",
                summary.computed,
                summary.reused,
                summary.escalated,
                summary.failed.len()
            );
            for (q, msg) in &summary.failed {
                eprintln!("q = {q} failed: {msg}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Single { q, digits } => {
            let rep = cli::cmd_single(q, digits)?;
            println!("q = {}", rep.q);
            println!("m_q = {}", rep.m_q);
            println!(
                "argmin: j = {} ({} character)",
                rep.argmin_j,
                rep.argmin_parity.as_str()
            );
            println!("M_q = {}", rep.big_m_q);
            println!("euler_kronecker = {}", rep.ek);
            println!("m_q_normalized = {}", rep.m_q_normalized);
            println!(
                "digits = {} (achievable at quad113: {})",
                rep.digits, rep.achievable_digits
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::VerifyBounds {
            csv,
            c1_num,
            c1_den,
            c2,
        } => {
            let rep = cli::cmd_verify_bounds(&csv, c1_num, c1_den, c2)?;
            println!("{} rows checked", rep.checked);
            if let Some((q, r)) = rep.tightest_lower {
                println!("tightest lower margin: m_q/(c1/q) = {r:.6} at q = {q}");
            }
            if let Some((q, r)) = rep.tightest_upper {
                println!("tightest upper margin: m_q/(c2/sqrt q) = {r:.6} at q = {q}");
            }
            if rep.violations.is_empty() {
                println!("no violations");
                Ok(ExitCode::SUCCESS)
            } else {
                for (q, m, lo, hi) in &rep.violations {
                    println!("VIOLATION q = {q}: m_q = {m} outside ({lo}, {hi})");
                }
                Ok(ExitCode::from(2))
            }
        }
        Command::Stats { csv } => {
            let rep = cli::cmd_stats(&csv)?;
            println!("{} rows", rep.rows);
            let pct = |c: usize| 100.0 * c as f64 / rep.rows.max(1) as f64;
            println!(
                "odd-parity minimizers: {} ({:.2}%), even: {} ({:.2}%)",
                rep.odd_minimizers,
                pct(rep.odd_minimizers),
                rep.even_minimizers,
                pct(rep.even_minimizers)
            );
            println!("escalated rows: {}", rep.escalated);
            if let Some((q, v)) = rep.max_m_q {
                println!("max m_q = {v} at q = {q}");
            }
            if let Some((q, v)) = rep.min_m_q {
                println!("min m_q = {v} at q = {q}");
            }
            if let Some((q, v)) = rep.min_normalized {
                println!("min m'_q = {v} at q = {q}");
            }
            if let Some((q, v)) = rep.max_normalized {
                println!("max m'_q = {v} at q = {q}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Plotdata { csv, out_dir } => {
            let files = cli::cmd_plotdata(&csv, &out_dir)?;
            println!("wrote {} files under {}", files.len(), out_dir.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::RandomModel(cmd) => run_random_model(cmd),
    }
}

fn run_random_model(cmd: RandomModelCmd) -> Result<ExitCode> {
    match cmd {
        RandomModelCmd::Sample { model, out } => {
            let cfg = model.config();
            let samples = randmodel::sample_ld(&cfg)?;
            if out.extension().is_some_and(|e| e == "bin") {
                randmodel::write_samples_binary(&out, &samples, &cfg)?;
            } else {
                randmodel::write_samples_csv(&out, &samples, &cfg)?;
            }
            println!(
                "seed = {} prime_cutoff = {} samples = {} -> {}",
                cfg.seed,
                cfg.prime_cutoff,
                samples.len(),
                out.display()
            );
            Ok(ExitCode::SUCCESS)
        }
        RandomModelCmd::Charfun { u, v, model } => {
            let cfg = model.config();
            let (re, im) = randmodel::phi_rand(u, v, &cfg)?;
            println!(
                "seed = {} prime_cutoff = {} points >= {}",
                cfg.seed, cfg.prime_cutoff, cfg.quadrature_points
            );
            println!("phi({u}, {v}) = {re} + {im}i  |phi| = {}", (re * re + im * im).sqrt());
            Ok(ExitCode::SUCCESS)
        }
        RandomModelCmd::Discrepancy { q, model, grid } => {
            let cfg = model.config();
            let ct = lchi::arith::CharacterTable::build(q)?;
            let st = cli::build_table_cached::<lchi::scalar::Dd>(q)?;
            let spec = lchi::lderiv::logderiv_spectrum(&ct, &st)?;
            let pts: Vec<(f64, f64)> = spec.indices().map(|j| spec.value(j).to_f64_pair()).collect();
            let samples = randmodel::sample_ld(&cfg)?;
            let d = randmodel::discrepancy_estimate(&pts, &samples, grid)?;
            println!(
                "seed = {} q = {q} samples = {} grid = {grid}",
                cfg.seed, cfg.samples
            );
            println!("discrepancy_estimate = {d}");
            Ok(ExitCode::SUCCESS)
        }
        RandomModelCmd::Moments { k, l, cutoff } => {
            let m = if k == 1 && l == 1 && cutoff > 10_000_000 {
                randmodel::exact_moment_11_prime_form(cutoff)
            } else {
                if cutoff > 20_000_000 {
                    return Err(lchi::Error::InvalidInput(
                        "cutoff above 2*10^7 is only supported for k = l = 1".into(),
                    ));
                }
                let lt = LambdaTable::build(cutoff);
                randmodel::exact_moment(&MomentSpec { k, l, cutoff }, &lt)?
            };
            println!("E(Ld^{k} conj^{l}) truncated at {cutoff} = {}", m.value);
            println!("tail_bound = {}", m.tail_bound);
            Ok(ExitCode::SUCCESS)
        }
    }
}
