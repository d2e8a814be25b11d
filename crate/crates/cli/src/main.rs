use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use balanced_powersums::decider::{decide, sweep_each, Certificate, DecideOptions, Mode, Verdict};
use balanced_powersums::equation::verify_instance;
use balanced_powersums::lemmas::{run_lemma, Lemma, LemmaRanges};
use balanced_powersums::oracle::oracle_search_parallel;
use balanced_powersums::Error;
use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::Signed;
use serde_json::json;

const EXIT_OK: u8 = 0;
const EXIT_FALSE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_ERROR: u8 = 3;

const AFTER_HELP: &str = "\
Exit codes:
  0  success, or the expected verdict
  1  a domain-level negative result (FALSE, a counterexample, a solution for l >= 3)
  2  invalid arguments
  3  internal error

Certificates are JSON objects with schema \"1\". Integers and rationals are
decimal strings (rationals as \"p/q\"); there are no floats.";

const SWEEP_HELP: &str = "\
CSV output has the header line
  ell,verdict,num_candidate_k,num_integer_candidates,elapsed_ms
with one row per exponent. JSONL output has one object per exponent with the
same keys plus \"schema\": \"1\", or the full certificate with --full.
--no-timing leaves elapsed_ms empty (CSV) or omits it (JSONL), which makes
runs with different worker counts byte-identical. Every line is flushed as
soon as it is written.";

#[derive(Parser)]
#[command(name = "balanced-powersums", version, about = "Decide the balanced power-sum equation", after_help = AFTER_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Fast,
    Paranoid,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Fast => Mode::Fast,
            ModeArg::Paranoid => Mode::Paranoid,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Jsonl,
}

#[derive(Subcommand)]
enum Command {
    /// Decide one exponent and print its certificate
    Decide {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        ell: u32,
        #[arg(long, value_enum, default_value = "fast")]
        mode: ModeArg,
        /// Print the full JSON certificate (default)
        #[arg(long, conflicts_with = "summary")]
        json: bool,
        /// Print a one-line summary instead of JSON
        #[arg(long)]
        summary: bool,
    },
    /// Decide every exponent in a range
    #[command(after_help = SWEEP_HELP)]
    Sweep {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        ell_min: u32,
        #[arg(long)]
        ell_max: u32,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// Output file; standard output if omitted
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long, value_enum, default_value = "fast")]
        mode: ModeArg,
        /// Emit full certificates (JSONL only)
        #[arg(long)]
        full: bool,
        /// Omit wall-clock timings
        #[arg(long)]
        no_timing: bool,
    },
    /// Check one instance of the equation exactly; prints TRUE or FALSE
    Verify {
        #[arg(long, allow_hyphen_values = true)]
        n: BigInt,
        #[arg(long, allow_hyphen_values = true)]
        k: BigInt,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        ell: u32,
    },
    /// Check the supporting lemmas over finite ranges
    Lemmas {
        /// carlitz-von-staudt, macmillan-sondow, sandwich, appendix, modular-collapse or all
        #[arg(long, default_value = "all")]
        lemma: String,
        /// Power-sum lemmas: largest k
        #[arg(long, default_value_t = 500)]
        k_max: u64,
        /// Power-sum lemmas: largest odd m
        #[arg(long, default_value_t = 39)]
        m_max: u32,
        /// Sandwich and collapse: largest l
        #[arg(long, default_value_t = 60)]
        ell_max: u32,
        /// Sandwich and collapse: largest k
        #[arg(long, default_value_t = 40)]
        window_k_max: u64,
        /// Random points for the appendix chain
        #[arg(long, default_value_t = 500)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Brute-force search of the box 1 <= n <= n-max, 1 <= k <= k-max
    Oracle {
        #[arg(long)]
        ell: u32,
        #[arg(long)]
        n_max: u64,
        #[arg(long)]
        k_max: u64,
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}

fn usage(msg: &str) -> u8 {
    eprintln!("error: {msg}");
    EXIT_USAGE
}

fn verdict_code(cert: &Certificate) -> u8 {
    match cert.verdict {
        Verdict::Solutions(_) => EXIT_FALSE,
        _ => EXIT_OK,
    }
}

fn run(command: Command) -> Result<u8, Box<dyn std::error::Error>> {
    match command {
        Command::Decide {
            ell,
            mode,
            json: _,
            summary,
        } => {
            let cert = decide(ell, &DecideOptions::with_mode(mode.into()))?;
            if summary {
                println!("{}", cert.summary());
            } else {
                println!("{}", cert.to_json_line(true));
            }
            Ok(verdict_code(&cert))
        }
        Command::Sweep {
            ell_min,
            ell_max,
            workers,
            out,
            format,
            mode,
            full,
            no_timing,
        } => {
            if ell_min > ell_max {
                return Ok(usage("--ell-min must not exceed --ell-max"));
            }
            if full && matches!(format, Format::Csv) {
                return Ok(usage("--full requires --format jsonl"));
            }
            let mut sink: Box<dyn Write> = match out {
                Some(path) => Box::new(BufWriter::new(File::create(path)?)),
                None => Box::new(io::stdout().lock()),
            };
            if matches!(format, Format::Csv) {
                writeln!(
                    sink,
                    "ell,verdict,num_candidate_k,num_integer_candidates,elapsed_ms"
                )?;
                sink.flush()?;
            }
            let timing = !no_timing;
            let mut code = EXIT_OK;
            sweep_each(
                ell_min,
                ell_max,
                &DecideOptions::with_mode(mode.into()),
                workers,
                |cert| {
                    code = code.max(verdict_code(&cert));
                    let line = match format {
                        Format::Csv => csv_row(&cert, timing),
                        Format::Jsonl if full => cert.to_json_line(timing),
                        Format::Jsonl => jsonl_row(&cert, timing),
                    };
                    writeln!(sink, "{line}")
                        .and_then(|_| sink.flush())
                        .map_err(|e| Error::Precondition(format!("write failed: {e}")))
                },
            )?;
            Ok(code)
        }
        Command::Verify { n, k, ell } => {
            if !n.is_positive() || !k.is_positive() {
                return Ok(usage("n and k must be positive"));
            }
            let holds = verify_instance(&n, &k, ell)?;
            println!("{}", if holds { "TRUE" } else { "FALSE" });
            Ok(if holds { EXIT_OK } else { EXIT_FALSE })
        }
        Command::Lemmas {
            lemma,
            k_max,
            m_max,
            ell_max,
            window_k_max,
            samples,
            seed,
        } => {
            let selected: Vec<Lemma> = if lemma == "all" {
                Lemma::ALL.to_vec()
            } else {
                match lemma.parse() {
                    Ok(l) => vec![l],
                    Err(msg) => return Ok(usage(&msg)),
                }
            };
            let ranges = LemmaRanges {
                k_max,
                m_max,
                ell_max,
                window_k_max,
                samples,
                seed,
            };
            let mut code = EXIT_OK;
            for l in selected {
                let report = run_lemma(l, &ranges)?;
                println!("{report}");
                for c in &report.counterexamples {
                    println!("  counterexample: {c}");
                }
                if !report.passed() {
                    code = EXIT_FALSE;
                }
            }
            Ok(code)
        }
        Command::Oracle {
            ell,
            n_max,
            k_max,
            workers,
        } => {
            if ell == 0 {
                return Ok(usage("--ell must be positive"));
            }
            let mut stdout = io::stdout().lock();
            for (n, k) in oracle_search_parallel(ell, n_max, k_max, workers) {
                writeln!(stdout, "{n} {k}")?;
            }
            Ok(EXIT_OK)
        }
    }
}

fn elapsed_ms(cert: &Certificate) -> u64 {
    cert.elapsed.as_millis() as u64
}

fn csv_row(cert: &Certificate, timing: bool) -> String {
    format!(
        "{},{},{},{},{}",
        cert.ell,
        cert.verdict.label(),
        cert.num_candidate_k(),
        cert.num_integer_candidates(),
        if timing {
            elapsed_ms(cert).to_string()
        } else {
            String::new()
        }
    )
}

fn jsonl_row(cert: &Certificate, timing: bool) -> String {
    let mut row = json!({
        "schema": balanced_powersums::decider::SCHEMA_VERSION,
        "ell": cert.ell,
        "verdict": cert.verdict.label(),
        "num_candidate_k": cert.num_candidate_k(),
        "num_integer_candidates": cert.num_integer_candidates(),
    });
    if timing {
        row["elapsed_ms"] = json!(elapsed_ms(cert));
    }
    row.to_string()
}
