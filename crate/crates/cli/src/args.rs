use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "pillai",
    version,
    about = "Search and certification tools for c = F_k - p^l",
    propagate_version = true
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format for results on standard output.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Starting working precision (bits) for certified reals.
    #[arg(long, global = true, default_value_t = 128,
          value_parser = clap::value_parser!(u32).range(16..=1 << 20))]
    pub precision: u32,

    /// Worker threads for the search commands.
    #[arg(long, global = true, default_value_t = default_jobs(),
          value_parser = clap::value_parser!(u64).range(1..=4096))]
    pub jobs: u64,
}

pub fn default_jobs() -> u64 {
    std::thread::available_parallelism().map_or(1, |n| n.get() as u64)
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// F_k2 - F_k3 + 1 = p^l2
    L3zero,
    /// F_k2 - F_k3 = p^l2 - p^l3 with l3 >= 1
    L3pos,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Exhaustive search over pairs 2 <= k3 < k2 <= kmax.
    Search(SearchArgs),
    /// Primes p = F_k1 - F_k2 + 1, each giving c = F_k2 - 1 two representations.
    TwoRep(TwoRepArgs),
    /// All representations c = F_k - p^l with k <= kmax.
    Count(CountArgs),
    /// Multiplicity scan over a finite box of primes and indices.
    Scan(ScanArgs),
    /// Recompute a chain of explicit constants.
    Audit(AuditArgs),
    /// Certified continued fraction and Legendre reduction.
    Cf(CfArgs),
    /// Order of appearance z(p) and the exponent e_p.
    Zp(ZpArgs),
    /// Exact Fibonacci (or Lucas) number.
    Fib(FibArgs),
    /// Run the whole verification suite.
    VerifyPaper(VerifyArgs),
}

#[derive(Args, Debug)]
pub struct SearchArgs {
    #[arg(long, value_enum)]
    pub mode: Mode,
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(2..=1_000_000))]
    pub kmax: u64,
    /// Smallest prime reported (l3zero only; l3pos always uses 5).
    #[arg(long, default_value = "5")]
    pub pmin: String,
    /// Persist finished shards here and resume from it.
    #[arg(long)]
    pub checkpoint: Option<PathBuf>,
    /// Re-test every reported prime with extra Miller-Rabin bases.
    #[arg(long)]
    pub strict_primes: bool,
    /// Also try to extend every l3zero record to a third representation.
    #[arg(long)]
    pub extend: bool,
    /// Print records to standard error as shards finish.
    #[arg(long)]
    pub stream: bool,
    /// Stop after this many new shards (for testing resumption).
    #[arg(long, hide = true)]
    pub stop_after_shards: Option<usize>,
}

#[derive(Args, Debug)]
pub struct TwoRepArgs {
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(2..=1_000_000))]
    pub kmax: u64,
    #[arg(long, default_value = "2")]
    pub pmin: String,
}

#[derive(Args, Debug)]
pub struct CountArgs {
    #[arg(short = 'p', long = "prime")]
    pub p: String,
    #[arg(short = 'c', allow_hyphen_values = true)]
    pub c: String,
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(2..=1_000_000))]
    pub kmax: u64,
}

#[derive(Args, Debug)]
pub struct ScanArgs {
    #[arg(long, default_value_t = 2)]
    pub pmin: u64,
    #[arg(long)]
    pub pmax: u64,
    #[arg(long, default_value_t = 300, value_parser = clap::value_parser!(u64).range(2..=100_000))]
    pub kmax: u64,
    /// Report every (p, c) with at least this many representations.
    #[arg(long, default_value_t = 3)]
    pub threshold: usize,
}

#[derive(Args, Debug)]
pub struct AuditArgs {
    #[command(subcommand)]
    pub chain: AuditChain,
}

#[derive(Subcommand, Debug)]
pub enum AuditChain {
    /// Constants of the bound k < C (log p)^2 (log log p)^2.
    K1 {
        #[arg(short = 'p', long = "prime", default_value = "5")]
        p: String,
        /// Also evaluate 7.2e24 (1 + log k)^2 (log p)^2 at this k.
        #[arg(long)]
        k: Option<u64>,
    },
    /// Absolute bounds on p and k1.
    Absolute,
    /// Matveev lower bound for a linear form in t logarithms.
    Matveev {
        #[arg(short = 't', default_value_t = 3)]
        t: u32,
        #[arg(short = 'd', default_value_t = 2)]
        d: u32,
        /// B, a decimal.
        #[arg(short = 'b', default_value = "1")]
        b: String,
        /// A_1,...,A_t as decimals.
        #[arg(short = 'a', value_delimiter = ',', required = true)]
        a: Vec<String>,
    },
    /// Two-logarithm bound.
    Lmn {
        #[arg(short = 'd', default_value_t = 2)]
        d: u32,
        #[arg(long)]
        log_a1: String,
        #[arg(long)]
        log_a2: String,
        #[arg(long, allow_hyphen_values = true)]
        b1: String,
        #[arg(long, allow_hyphen_values = true)]
        b2: String,
    },
    /// x / (log x)^s < T  implies  x < 2^s T (log T)^s.
    Gl {
        #[arg(short = 's')]
        s: u32,
        #[arg(short = 'T')]
        t: String,
    },
    /// S-unit counting bound on the multiplicity.
    Av {
        #[arg(short = 's')]
        s: u32,
        #[arg(short = 'r')]
        r: u32,
    },
}

#[derive(Args, Debug)]
pub struct CfArgs {
    /// Expand tau = log(alpha) / log(sqrt 5) (the default).
    #[arg(long, conflicts_with = "golden")]
    pub tau: bool,
    /// Expand the golden ratio.
    #[arg(long)]
    pub golden: bool,
    #[arg(long)]
    pub terms: Option<usize>,
    /// Bound M for the Legendre reduction, e.g. 1e35.
    #[arg(short = 'M')]
    pub m: Option<String>,
}

#[derive(Args, Debug)]
pub struct ZpArgs {
    #[arg(short = 'p', long = "prime")]
    pub p: String,
}

#[derive(Args, Debug)]
pub struct FibArgs {
    pub n: u64,
    #[arg(long)]
    pub lucas: bool,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Skip the two long searches.
    #[arg(long)]
    pub fast: bool,
    /// Same as --format json.
    #[arg(long)]
    pub json: bool,
}
