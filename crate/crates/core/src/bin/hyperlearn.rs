use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use hyperlearn::designs::{
    design_for, grow_phf, random_phf, size_report, verify_cff, verify_phf, Verification,
};
use hyperlearn::harness::{
    bench, exit_code, gen_instance, replay, run, Algo, BenchConfig, DesignCache, ExperimentConfig,
};
use hyperlearn::reduced::reduction;
use hyperlearn::{DesignMatrix, Error, HashFamily, Mdnf, Result, Transcript};

#[derive(Parser)]
#[command(
    name = "hyperlearn",
    version,
    about = "Non-adaptive learning of hidden hypergraphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random reduced s-term r-MDNF
    Gen {
        #[command(flatten)]
        problem: Problem,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a cover-free family or a perfect hash family
    #[command(subcommand)]
    Design(DesignCommand),
    /// Check a design file exhaustively
    Verify {
        #[arg(long)]
        design: PathBuf,
    },
    /// Learn a hidden function with one batch of queries
    Learn {
        #[command(flatten)]
        problem: Problem,
        #[command(flatten)]
        opts: LearnOpts,
        /// Hidden function file; a generated instance otherwise
        #[arg(long)]
        hidden: Option<PathBuf>,
        /// Exit with status 3 unless the recovered function is exact
        #[arg(long)]
        check: bool,
        /// Write the recovered function here
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the query transcript here
        #[arg(long)]
        transcript: Option<PathBuf>,
        /// Report wall time (breaks byte-reproducibility)
        #[arg(long)]
        timing: bool,
    },
    /// Query counts over a grid of n against the baseline
    Bench {
        /// Comma-separated variable counts
        #[arg(long, value_delimiter = ',', default_values_t = [256usize, 1024, 4096, 16384])]
        ns: Vec<usize>,
        #[arg(long, default_value_t = 2)]
        s: usize,
        #[arg(long, default_value_t = 2)]
        r: usize,
        /// Both learners when omitted
        #[arg(long)]
        algo: Option<Algo>,
        #[arg(long, default_value_t = 0.01)]
        delta: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        reps: usize,
        #[arg(long)]
        verify: bool,
        /// Write the key=value records here
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        timing: bool,
    },
    /// Decode a recorded transcript again
    Replay {
        #[arg(long)]
        transcript: PathBuf,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        r: usize,
        #[command(flatten)]
        opts: LearnOpts,
        /// Check the transcript and the decoded function against this file
        #[arg(long)]
        hidden: Option<PathBuf>,
        #[arg(long)]
        check: bool,
    },
}

#[derive(Subcommand)]
enum DesignCommand {
    /// (n,(s,r))-cover-free family
    Cff {
        #[command(flatten)]
        problem: Problem,
        #[command(flatten)]
        build: BuildOpts,
    },
    /// (n,q,d)-perfect hash family; q and d default to the reduced learner's
    /// choice for --s and --r
    Phf {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: Option<usize>,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        s: Option<usize>,
        #[arg(long)]
        r: Option<usize>,
        #[command(flatten)]
        build: BuildOpts,
    },
}

#[derive(Args)]
struct Problem {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    s: usize,
    #[arg(long)]
    r: usize,
}

#[derive(Args)]
struct BuildOpts {
    #[arg(long, default_value_t = 0.01)]
    delta: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Verify exhaustively (retrying fresh seeds) where affordable
    #[arg(long)]
    verify: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct LearnOpts {
    #[arg(long, default_value = "direct")]
    algo: Algo,
    #[arg(long, default_value_t = 0.01)]
    delta: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Use exhaustively verified designs where affordable
    #[arg(long)]
    verify: bool,
}

impl LearnOpts {
    fn config(&self, n: usize, s: usize, r: usize) -> ExperimentConfig {
        ExperimentConfig {
            n,
            s,
            r,
            algo: self.algo,
            delta: self.delta,
            seed: self.seed,
            verify_designs: self.verify,
        }
    }
}

enum Outcome {
    Ok,
    Mismatch,
    DesignFailed,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Mismatch) => ExitCode::from(3),
        Ok(Outcome::DesignFailed) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(Error::from)
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(Error::from)
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => write(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn execute(command: Command) -> Result<Outcome> {
    match command {
        Command::Gen { problem, seed, out } => {
            let f = gen_instance(problem.n, problem.s, problem.r, seed)?;
            emit(out.as_deref(), &f.to_text())?;
            Ok(Outcome::Ok)
        }
        Command::Design(DesignCommand::Cff { problem, build }) => {
            let d = design_for(
                problem.n,
                problem.s,
                problem.r,
                build.delta,
                build.seed,
                build.verify,
            )?;
            if build.verify && d.verified() == Verification::Unverified {
                eprintln!(
                    "note: verification skipped, the design is too large to check exhaustively"
                );
            }
            emit(build.out.as_deref(), &d.to_text())?;
            if build.out.is_some() {
                let sizes = size_report(&d)?;
                println!(
                    "design kind=cff n={} s={} r={} m={} verified={} n_s_r={:.6} lower_bound={:.6}",
                    d.n(),
                    d.s(),
                    d.r(),
                    d.len(),
                    d.verified().code(),
                    sizes.n_s_r,
                    sizes.cff_lower_bound
                );
            }
            Ok(Outcome::Ok)
        }
        Command::Design(DesignCommand::Phf {
            n,
            q,
            d,
            s,
            r,
            build,
        }) => {
            let (q, d) = match (q, d, s, r) {
                (Some(q), Some(d), _, _) => (q, d),
                (q, d, Some(s), Some(r)) => {
                    let red = reduction(n, s, r);
                    (q.unwrap_or(red.q), d.unwrap_or(red.d + 1))
                }
                _ => {
                    return Err(Error::InvalidParameters(
                        "give --q and --d, or --s and --r".into(),
                    ))
                }
            };
            let (family, verified) = if build.verify {
                let b = grow_phf(n, q, d, build.delta, build.seed)?;
                if b.verification == Verification::Unverified {
                    eprintln!("note: verification skipped, too many subsets to check exhaustively");
                }
                (b.family, b.verification)
            } else {
                (
                    random_phf(n, q, d, build.delta, build.seed)?,
                    Verification::Unverified,
                )
            };
            emit(build.out.as_deref(), &family.to_text())?;
            if build.out.is_some() {
                println!(
                    "design kind=phf n={} q={} d={} N={} verified={}",
                    family.n(),
                    family.q(),
                    family.d(),
                    family.len(),
                    verified.code()
                );
            }
            Ok(Outcome::Ok)
        }
        Command::Verify { design } => verify_file(&design),
        Command::Learn {
            problem,
            opts,
            hidden,
            check,
            out,
            transcript,
            timing,
        } => {
            let config = opts.config(problem.n, problem.s, problem.r);
            for w in config.validate()? {
                eprintln!("warning: {w}");
            }
            let hidden = hidden.map(|p| Mdnf::from_text(&read(&p)?)).transpose()?;
            let outcome = run(&config, hidden, &DesignCache::from_env())?;
            if let Some(path) = out {
                write(&path, &outcome.report.recovered.to_text())?;
            }
            if let Some(path) = transcript {
                write(&path, &outcome.transcript.to_text())?;
            }
            print!("{}", outcome.report.human(timing));
            println!("{}", outcome.report.record(timing));
            if check && outcome.report.exact != Some(true) {
                return Ok(Outcome::Mismatch);
            }
            Ok(Outcome::Ok)
        }
        Command::Bench {
            ns,
            s,
            r,
            algo,
            delta,
            seed,
            reps,
            verify,
            out,
            timing,
        } => {
            let config = BenchConfig {
                ns,
                s,
                r,
                algos: algo.map_or_else(|| vec![Algo::Direct, Algo::Reduced], |a| vec![a]),
                delta,
                seed,
                reps,
                verify_designs: verify,
            };
            let table = bench(&config, &DesignCache::from_env())?;
            print!("{}", table.render(timing));
            let records = table.records(timing);
            match out {
                Some(path) => write(&path, &records)?,
                None => print!("\n{records}"),
            }
            Ok(Outcome::Ok)
        }
        Command::Replay {
            transcript,
            s,
            r,
            opts,
            hidden,
            check,
        } => {
            let transcript = Transcript::from_text(&read(&transcript)?)?;
            let config = opts.config(transcript.n(), s, r);
            let recovered = replay(&config, &transcript, &DesignCache::from_env())?;
            println!("recovered: {}", recovered.formula());
            let Some(path) = hidden else {
                return Ok(Outcome::Ok);
            };
            let hidden = Mdnf::from_text(&read(&path)?)?;
            let bad = transcript.inconsistencies(&hidden)?;
            println!("inconsistent answers: {}", bad.len());
            let exact = hyperlearn::harness::check_recovery(&recovered, &hidden)?;
            println!("exact: {exact}");
            if !bad.is_empty() || (check && !exact) {
                return Ok(Outcome::Mismatch);
            }
            Ok(Outcome::Ok)
        }
    }
}

/// Exit 2 for designs that fail or cannot be parsed.
fn verify_file(path: &Path) -> Result<Outcome> {
    let text = read(path)?;
    if text.starts_with("phf ") {
        let family = match HashFamily::from_text(&text) {
            Ok(f) => f,
            Err(e) => {
                println!("verify kind=phf result=unparseable");
                eprintln!("error: {e}");
                return Ok(Outcome::DesignFailed);
            }
        };
        let ok = verify_phf(&family)?;
        println!(
            "verify kind=phf n={} q={} d={} N={} result={}",
            family.n(),
            family.q(),
            family.d(),
            family.len(),
            if ok { "pass" } else { "fail" }
        );
        return Ok(if ok {
            Outcome::Ok
        } else {
            Outcome::DesignFailed
        });
    }
    let design = match DesignMatrix::from_text(&text) {
        Ok(d) => d,
        Err(e) => {
            println!("verify kind=cff result=unparseable");
            eprintln!("error: {e}");
            return Ok(Outcome::DesignFailed);
        }
    };
    let ok = verify_cff(&design)?;
    let sizes = size_report(&design)?;
    println!(
        "verify kind=cff n={} s={} r={} m={} result={} n_s_r={:.6} lower_bound={:.6}",
        design.n(),
        design.s(),
        design.r(),
        design.len(),
        if ok { "pass" } else { "fail" },
        sizes.n_s_r,
        sizes.cff_lower_bound
    );
    Ok(if ok {
        Outcome::Ok
    } else {
        Outcome::DesignFailed
    })
}
