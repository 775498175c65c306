//! The `loopkex` command line. Output grammar is documented in
//! `docs/cli.md`.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use loopkex_core::attack::{recover_exponent, AttackResult};
use loopkex_core::general_extension::ext_pow;
use loopkex_core::protocol::run_exchange;
use loopkex_core::{AxiomConfig, CGroupoid, Perm, ProtocolError, PublicParams, RightLoop};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::formats::{parse_group, parse_loop, split_labels, write_loop, FormatError};
use crate::parallel::recover_exponent_parallel;
use crate::transcript::TranscriptFile;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "loopkex", version, about = "Key exchange over general extensions of right loops")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check that a loop file describes a right loop.
    Validate { loop_file: PathBuf },
    /// Count the right inner mappings generating the group torsion.
    Torsion {
        loop_file: PathBuf,
        /// Also print the order of the group torsion.
        #[arg(long)]
        order: bool,
    },
    /// Check the c-groupoid axioms for the loop's c-groupoid.
    Axioms {
        loop_file: PathBuf,
        /// Enumerate the torsion in full when its order is at most N.
        #[arg(long, value_name = "N", default_value_t = 1_000_000)]
        exhaustive_cap: u64,
        /// Random torsion elements to check above the cap.
        #[arg(long, default_value_t = 1_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Print (a, x)^N as `(g^N ; beta^N)`.
    Power {
        loop_file: PathBuf,
        #[command(flatten)]
        public: PublicArgs,
        #[arg(long)]
        n: u64,
    },
    /// Run both parties of the key exchange.
    Exchange {
        loop_file: PathBuf,
        #[command(flatten)]
        public: PublicArgs,
        /// Alice's private exponent.
        #[arg(long)]
        m: Option<u64>,
        /// Bob's private exponent.
        #[arg(long)]
        n: Option<u64>,
        /// Draw missing exponents uniformly from 2..2^32 with this seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Write the canonical transcript here.
        #[arg(long, value_name = "FILE")]
        transcript: Option<PathBuf>,
        /// Replace the exponents in the transcript with "private".
        #[arg(long)]
        redact: bool,
    },
    /// Recover an exponent from an intercepted representative.
    Attack {
        loop_file: PathBuf,
        #[command(flatten)]
        public: PublicArgs,
        /// The intercepted representative.
        #[arg(long, value_name = "LABEL")]
        beta: String,
        #[arg(long, default_value_t = 1_000_000)]
        cap: u64,
        /// Scan disjoint exponent ranges on this many threads.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Append the wall-clock time (makes output non-reproducible).
        #[arg(long)]
        timing: bool,
    },
    /// Decompose a group along a subgroup and right transversal.
    Decompose {
        group_file: PathBuf,
        #[arg(long, value_name = "L1,L2,...")]
        subgroup: String,
        #[arg(long, value_name = "L1,L2,...")]
        transversal: String,
    },
    /// Write the example loop x_i o x_j = x_i (i != j), x_i o x_i = e.
    GenExample {
        #[arg(long)]
        size: usize,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct PublicArgs {
    /// Public base element of S \ {e}.
    #[arg(long, value_name = "LABEL")]
    x: String,
    /// Public element of H in cycle notation, e.g. "(x3 x4 x1)".
    #[arg(long, value_name = "CYCLES")]
    a: String,
}

/// A failed command: the message and the exit code to report.
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl ToString) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.to_string(),
        }
    }

    fn violation(message: impl ToString) -> Self {
        Failure {
            code: EXIT_FAILURE,
            message: message.to_string(),
        }
    }
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        if e.is_violation() {
            Failure::violation(e)
        } else {
            Failure::usage(e)
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::usage(e)
    }
}

/// Runs the tool on `args` (including the program name) and returns the
/// exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(failure) => {
            let _ = writeln!(err, "error: {}", failure.message);
            failure.code
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn load_loop(path: &Path) -> Result<RightLoop, Failure> {
    Ok(parse_loop(&read(path)?)?)
}

fn public_params(lp: &RightLoop, public: &PublicArgs) -> Result<PublicParams, Failure> {
    let c = Arc::new(CGroupoid::from_right_loop(lp));
    let x = lp.domain().lookup(&public.x).map_err(Failure::usage)?;
    let a = Perm::parse_cycles(&public.a, lp.domain()).map_err(Failure::usage)?;
    PublicParams::new(c, x, a).map_err(Failure::usage)
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<i32, Failure> {
    match command {
        Command::Validate { loop_file } => match parse_loop(&read(&loop_file)?) {
            Ok(_) => {
                writeln!(out, "valid")?;
                Ok(EXIT_OK)
            }
            Err(e) if e.is_violation() => {
                writeln!(out, "invalid: {e}")?;
                Ok(EXIT_FAILURE)
            }
            Err(e) => Err(e.into()),
        },
        Command::Torsion { loop_file, order } => {
            let lp = load_loop(&loop_file)?;
            let generators = lp.torsion_generators();
            writeln!(out, "generators: {}", generators.len())?;
            if order {
                writeln!(out, "order: {}", loopkex_core::bsgs_order(&generators).map_err(Failure::usage)?)?;
            }
            Ok(EXIT_OK)
        }
        Command::Axioms {
            loop_file,
            exhaustive_cap,
            samples,
            seed,
        } => {
            let lp = load_loop(&loop_file)?;
            let config = AxiomConfig {
                cap: exhaustive_cap,
                samples,
                seed,
            };
            let report = CGroupoid::from_right_loop(&lp).check_axioms(&config);
            write!(out, "{report}")?;
            Ok(if report.all_hold() { EXIT_OK } else { EXIT_FAILURE })
        }
        Command::Power { loop_file, public, n } => {
            let lp = load_loop(&loop_file)?;
            let params = public_params(&lp, &public)?;
            let power = ext_pow(params.cgroupoid(), &params.base(), n).map_err(Failure::usage)?;
            writeln!(out, "{power}")?;
            Ok(EXIT_OK)
        }
        Command::Exchange {
            loop_file,
            public,
            m,
            n,
            seed,
            transcript,
            redact,
        } => {
            let lp = load_loop(&loop_file)?;
            let params = public_params(&lp, &public)?;
            let mut rng = seed.map(ChaCha8Rng::seed_from_u64);
            let mut exponent = |given: Option<u64>, flag: &str| match (given, rng.as_mut()) {
                (Some(v), _) => Ok(v),
                (None, Some(rng)) => Ok(rng.random_range(2..1u64 << 32)),
                (None, None) => Err(Failure::usage(format!("--{flag} is required unless --seed is given"))),
            };
            let (m, n) = (exponent(m, "m")?, exponent(n, "n")?);
            let (t, code) = match run_exchange(&params, m, n) {
                Ok(t) => (t, EXIT_OK),
                Err(ProtocolError::Disagreement(t)) => (*t, EXIT_FAILURE),
                Err(e) => return Err(Failure::usage(e)),
            };
            writeln!(out, "alice -> bob: {}", lp.label(t.message_a_to_b))?;
            writeln!(out, "bob -> alice: {}", lp.label(t.message_b_to_a))?;
            if t.agreed && code == EXIT_OK {
                writeln!(out, "shared key: {}", lp.label(t.key_a))?;
            } else {
                writeln!(out, "disagreement: alice {} bob {}", lp.label(t.key_a), lp.label(t.key_b))?;
            }
            if let Some(path) = transcript {
                std::fs::write(&path, TranscriptFile::new(&lp, &t, redact).to_text())?;
            }
            Ok(code)
        }
        Command::Attack {
            loop_file,
            public,
            beta,
            cap,
            jobs,
            timing,
        } => {
            let lp = load_loop(&loop_file)?;
            let params = public_params(&lp, &public)?;
            let target = lp.domain().lookup(&beta).map_err(Failure::usage)?;
            if cap == 0 || jobs == 0 {
                return Err(Failure::usage("--cap and --jobs must be positive"));
            }
            let start = Instant::now();
            let result = if jobs == 1 {
                recover_exponent(&params, target, cap)
            } else {
                recover_exponent_parallel(&params, target, cap, jobs).map_err(Failure::usage)?
            }
            .with_elapsed(start.elapsed());
            writeln!(out, "{}", format_attack(&result, timing))?;
            Ok(if result.found { EXIT_OK } else { EXIT_FAILURE })
        }
        Command::Decompose {
            group_file,
            subgroup,
            transversal,
        } => {
            let group = parse_group(&read(&group_file)?, &split_labels(&subgroup), &split_labels(&transversal))?;
            let c = CGroupoid::from_group_transversal(&group).map_err(Failure::violation)?;
            write!(out, "{}", write_loop(c.carrier()))?;
            let n = c.size();
            let nontrivial = (0..n * n).filter(|k| !c.f(k / n, k % n).is_identity()).count();
            writeln!(out, "f: {nontrivial} of {} values non-trivial", n * n)?;
            for (label, image) in c.h_labels().unwrap_or_default() {
                writeln!(out, "h {label} acts as {image}")?;
            }
            let report = c.check_axioms(&AxiomConfig::default());
            write!(out, "{report}")?;
            Ok(if report.all_hold() { EXIT_OK } else { EXIT_FAILURE })
        }
        Command::GenExample { size, out: path } => {
            let lp = RightLoop::example(size).map_err(Failure::usage)?;
            let text = write_loop(&lp);
            match path {
                Some(path) => std::fs::write(path, text)?,
                None => out.write_all(text.as_bytes())?,
            }
            Ok(EXIT_OK)
        }
    }
}

/// One-line attack report, e.g. `found=true exponent=2 iterations=2`.
pub fn format_attack(result: &AttackResult, timing: bool) -> String {
    let exponent = result
        .exponent
        .map_or_else(|| "none".to_owned(), |r| r.to_string());
    let mut line = format!(
        "found={} exponent={} iterations={}",
        result.found, exponent, result.iterations
    );
    if let (true, Some(elapsed)) = (timing, result.elapsed) {
        line.push_str(&format!(" elapsed_us={}", elapsed.as_micros()));
    }
    line
}
