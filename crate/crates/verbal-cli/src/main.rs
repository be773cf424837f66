//! `verbal`: counting quasi-morphisms and verbal-length certificates on the
//! command line.
//!
//! Exit codes: 0 on success (including OK verdicts), 1 on usage errors, and
//! 2 when a property battery or cross-check finds a violation. Data goes to
//! stdout or `--out`; diagnostics go to stderr.

mod suite;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use verbal::{
    certify_svl_positive, certify_vl_lower_bound, count_occurrences, vl_upper_bound, witness,
    CountingQM, Error, Mode, SearchBudget, Word, WordMap,
};

#[derive(Parser)]
#[command(
    name = "verbal",
    version,
    about = "Counting quasi-morphisms and verbal-length certificates in free groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Linear,
    Cyclic,
}

impl From<ModeArg> for Mode {
    fn from(mode: ModeArg) -> Mode {
        match mode {
            ModeArg::Linear => Mode::Linear,
            ModeArg::Cyclic => Mode::Cyclic,
        }
    }
}

#[derive(Parser, Debug)]
struct BudgetArgs {
    /// Ball radius for substitution arguments
    #[arg(long = "budget-factor-len")]
    factor_len: Option<usize>,
    /// Longest product of verbal values considered
    #[arg(long = "budget-factors")]
    factors: Option<u32>,
    /// Cap on enumerated tuples and breadth-first states
    #[arg(long = "budget-states")]
    states: Option<u64>,
    /// key=value file with the same three budget keys
    #[arg(long = "budget-config")]
    config: Option<PathBuf>,
}

impl BudgetArgs {
    fn resolve(&self) -> Result<SearchBudget, Box<dyn std::error::Error>> {
        let mut budget = match &self.config {
            Some(path) => SearchBudget::parse_config(&fs::read_to_string(path)?)?,
            None => SearchBudget::default(),
        };
        if let Some(len) = self.factor_len {
            budget.max_factor_len = len;
        }
        if let Some(factors) = self.factors {
            budget.max_product_factors = factors;
        }
        if let Some(states) = self.states {
            budget.max_states = states;
        }
        Ok(budget)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Freely reduce a word and print it
    Reduce {
        /// Word to reduce, e.g. "ab B A a^2"
        #[arg(long = "g")]
        word: String,
        #[arg(long, default_value_t = 2)]
        rank: u8,
    },
    /// Count occurrences of a pattern word in a subject word
    Count {
        /// Pattern word
        #[arg(long = "w")]
        pattern: String,
        /// Subject word (cyclic mode counts around its cyclically reduced core)
        #[arg(long = "g")]
        subject: String,
        #[arg(long, value_enum, default_value_t = ModeArg::Linear)]
        mode: ModeArg,
        #[arg(long, default_value_t = 2)]
        rank: u8,
    },
    /// Evaluate the counting quasi-morphism of a pattern on a word
    Qm {
        /// Pattern word
        #[arg(long = "w")]
        pattern: String,
        /// Word to evaluate on
        #[arg(long = "g")]
        word: String,
        #[arg(long, value_enum, default_value_t = ModeArg::Linear)]
        mode: ModeArg,
        #[arg(long, default_value_t = 2)]
        rank: u8,
    },
    /// Show exponent sums, degree, and Bezout coefficients of a word map
    Wordmap {
        /// Word map, e.g. "x1 x2 x1 x2^-1" or "[x1,x2]"
        #[arg(long = "w")]
        map: String,
    },
    /// Build the witness word h_K for a word map of degree >= 2
    Witness {
        #[arg(long = "w")]
        map: String,
        #[arg(long = "K")]
        k: u32,
        /// Write the word here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit a verbal-length lower-bound certificate
    #[command(group(ArgGroup::new("element").required(true).args(["g", "g_from_witness"])))]
    Certify {
        #[arg(long = "w")]
        map: String,
        /// Element to certify
        #[arg(long = "g")]
        g: Option<String>,
        /// Use the witness word h_K for this K as the element
        #[arg(long = "g-from-witness")]
        g_from_witness: Option<u32>,
        /// Number of quasi-morphisms evaluated
        #[arg(long = "K")]
        k: u32,
        /// Exceptional-index constant recorded in the certificate
        #[arg(long = "M", default_value_t = 3)]
        m: u32,
        #[arg(long, default_value_t = 2)]
        rank: u8,
        /// Write the full report here; stdout then shows the summary only
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also emit a plain-text table of lower bound against K
        #[arg(long)]
        plot: bool,
    },
    /// Certify a positive stable verbal-length bound for a degree-0 map
    Svl {
        #[arg(long = "w")]
        map: String,
        /// Largest power measured
        #[arg(long = "n-max", default_value_t = 10)]
        n_max: u32,
        /// Factor-length budget for the element search
        #[arg(long = "max-factor-len", default_value_t = 4)]
        max_factor_len: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Bounded brute-force upper bound on the verbal length of an element
    Oracle {
        #[arg(long = "w")]
        map: String,
        #[arg(long = "g")]
        g: String,
        #[arg(long, default_value_t = 2)]
        rank: u8,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Run every property battery and write CSV reports
    Suite {
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Family depth used by the batteries
        #[arg(long = "K", default_value_t = 60)]
        k: u32,
        /// Randomized cases per battery
        #[arg(long, default_value_t = 1000)]
        trials: u32,
        /// Ball radius for the exhaustive defect scan
        #[arg(long, default_value_t = 4)]
        radius: usize,
        /// Exceptional-index constant for certificates
        #[arg(long = "M", default_value_t = 3)]
        m: u32,
        /// Directory for the CSV reports
        #[arg(long, default_value = "suite-report")]
        out: PathBuf,
        #[command(flatten)]
        budget: BudgetArgs,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            if err.use_stderr() {
                eprint!("{err}");
                return ExitCode::from(1);
            }
            // --help and --version print to stdout and succeed
            print!("{err}");
            return ExitCode::SUCCESS;
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(1)
        }
    }
}

fn emit(out: &Option<PathBuf>, full_report: &str, stdout_line: &str) -> std::io::Result<()> {
    match out {
        Some(path) => {
            fs::write(path, full_report)?;
            println!("{stdout_line}");
        }
        None => print!("{full_report}"),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode, Box<dyn std::error::Error>> {
    match cli.command {
        Command::Reduce { word, rank } => {
            println!("{}", Word::parse(&word, rank)?);
        }
        Command::Count { pattern, subject, mode, rank } => {
            let pattern = Word::parse(&pattern, rank)?;
            let subject = Word::parse(&subject, rank)?;
            let subject = match mode {
                ModeArg::Linear => subject,
                ModeArg::Cyclic => subject.cyclic_reduce().into_core(),
            };
            println!("{}", count_occurrences(&pattern, &subject, mode.into())?);
        }
        Command::Qm { pattern, word, mode, rank } => {
            let qm = CountingQM::new(Word::parse(&pattern, rank)?, mode.into())?;
            println!("{}", qm.value(&Word::parse(&word, rank)?));
        }
        Command::Wordmap { map } => {
            let map = WordMap::parse(&map)?;
            let data = map.exponent_data();
            println!("w: {map}");
            println!("arity: {}", map.arity());
            println!("length: {}", map.len());
            println!("exponent_sums: {:?}", data.exponent_sums);
            println!("degree: {}", data.degree);
            println!("bezout: {:?}", data.bezout);
            match data.degree {
                0 => println!(
                    "note: degree 0 - values live in the commutator subgroup; \
                     use `svl` for stable-length evidence"
                ),
                1 => println!(
                    "note: degree 1 - every group element is a single value, the width is 1"
                ),
                d => println!("note: degree {d} - `witness` and `certify` apply"),
            }
        }
        Command::Witness { map, k, out } => {
            let map = WordMap::parse(&map)?;
            match witness(&map, k) {
                Ok(word) => emit(&out, &format!("{word}\n"), &format!("witness written, |h_K| = {}", word.len()))?,
                Err(Error::DegreeTooSmall { degree: 1, .. }) => {
                    println!(
                        "degree 1: every group element is already a single verbal value, \
                         the width is 1, and no witness is needed"
                    );
                }
                Err(err) => return Err(err.into()),
            }
        }
        Command::Certify { map, g, g_from_witness, k, m, rank, out, plot } => {
            let map = WordMap::parse(&map)?;
            if map.exponent_data().degree == 1 {
                println!(
                    "degree 1: every group element is a single verbal value and the width is 1; \
                     nothing to certify"
                );
                return Ok(ExitCode::SUCCESS);
            }
            let element = match (g, g_from_witness) {
                (Some(text), None) => Word::parse(&text, rank)?,
                (None, Some(witness_k)) => witness(&map, witness_k)?,
                _ => unreachable!("clap enforces exactly one element source"),
            };
            let cert = certify_vl_lower_bound(&map, &element, k, m)?;
            let mut report = cert.csv();
            report.push_str(&cert.summary());
            report.push('\n');
            if plot {
                report.push_str(&cert.plot_table());
            }
            emit(&out, &report, &cert.summary())?;
        }
        Command::Svl { map, n_max, max_factor_len, out } => {
            let map = WordMap::parse(&map)?;
            let evidence = certify_svl_positive(&map, n_max, max_factor_len)?;
            let mut report = evidence.csv();
            report.push_str(&evidence.summary());
            report.push('\n');
            emit(&out, &report, &evidence.summary())?;
        }
        Command::Oracle { map, g, rank, budget } => {
            let map = WordMap::parse(&map)?;
            let g = Word::parse(&g, rank)?;
            let budget = budget.resolve()?;
            match vl_upper_bound(&map, &g, &budget) {
                Ok(Some(bound)) => println!("upper_bound: {bound}"),
                Ok(None) => println!("upper_bound: none (search space exhausted)"),
                Err(Error::BudgetExhausted(detail)) => {
                    println!("upper_bound: unknown ({detail})")
                }
                Err(err) => return Err(err.into()),
            }
        }
        Command::Suite { seed, k, trials, radius, m, out, budget } => {
            let config = suite::SuiteConfig {
                seed,
                k,
                trials,
                radius,
                m,
                budget: budget.resolve()?,
                out_dir: out,
            };
            let all_ok = suite::run(&config)?;
            return Ok(if all_ok { ExitCode::SUCCESS } else { ExitCode::from(2) });
        }
    }
    Ok(ExitCode::SUCCESS)
}
