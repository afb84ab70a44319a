use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::output::Format;

/// Equidistribution and van der Corput experiment driver.
#[derive(Debug, Parser)]
#[command(name = "vdclab", version, about, propagate_version = true)]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Horizon N (accepts 100000 or 1e5)
    #[arg(long, global = true, value_parser = parse_count)]
    pub n_max: Option<u64>,
    /// Frequencies: `1..5`, `1..=5` or `1,-2,3`
    #[arg(long, global = true)]
    pub freqs: Option<String>,
    /// Verdict threshold
    #[arg(long, global = true)]
    pub threshold: Option<f64>,
    /// Window length L
    #[arg(long, global = true, value_parser = parse_count)]
    pub window: Option<u64>,
    /// Write the result here, with a provenance header
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads (results do not depend on this)
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// JSON array of {"command": "...", "args": [...]} run in order
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Exit 1 when a verdict is negative
    #[arg(long, global = true)]
    pub strict: bool,
}

/// Accepts plain integers and integral floats such as `1e5`.
pub fn parse_count(s: &str) -> Result<u64, String> {
    if let Ok(v) = s.parse::<u64>() {
        return Ok(v);
    }
    match s.parse::<f64>() {
        Ok(v) if v >= 0.0 && v.fract() == 0.0 && v <= 9.0e15 => Ok(v as u64),
        _ => Err(format!("'{s}' is not a non-negative integer")),
    }
}

fn parse_float(s: &str) -> Result<f64, String> {
    s.parse::<f64>().map_err(|_| format!("'{s}' is not a number"))
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a sequence modulo 1
    Gen(GenArgs),
    /// Weyl report, star discrepancy and verdict
    Analyze(SpecArgs),
    /// Worst window Weyl average over all window starts
    Scan(ScanArgs),
    /// Difference chains, inequality gaps and related checks
    #[command(subcommand)]
    Vdc(VdcCommand),
    /// Indicator sequences, seminorm distances, subsequences
    #[command(subcommand)]
    Besicovitch(BesicovitchCommand),
    /// p-adic and adelic fractional parts, characters, Følner averages
    #[command(subcommand)]
    Adele(AdeleCommand),
    /// Prime-dilated correlations and multiplicatively weighted sums
    #[command(subcommand)]
    Katai(KataiCommand),
    /// Characteristic vectors, reductions and descent chains
    #[command(subcommand)]
    Pet(PetCommand),
    /// IP sets, syndeticity and monochromatic pattern searches
    #[command(subcommand)]
    Ramsey(RamseyCommand),
}

#[derive(Debug, Args)]
pub struct GenArgs {
    /// Sequence spec, e.g. `poly:0,sqrt2` or `pow:1.5`
    #[arg(long)]
    pub spec: String,
    #[arg(long, default_value_t = 1)]
    pub start: u64,
}

#[derive(Debug, Args)]
pub struct SpecArgs {
    #[arg(long)]
    pub spec: String,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[arg(long)]
    pub spec: String,
    /// Largest window start M
    #[arg(long, value_parser = parse_count, default_value = "100000")]
    pub m_max: u64,
    #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
    pub h: i64,
}

#[derive(Debug, Subcommand)]
pub enum VdcCommand {
    /// Weyl reports of the difference sequences x_{n+d} - x_n
    Chain {
        #[arg(long)]
        spec: String,
        #[arg(long, default_value_t = 5)]
        depth: usize,
    },
    /// Both sides of the averaged Cauchy-Schwarz step
    Gap {
        /// u_n = e(h x_n); omit with --random
        #[arg(long, required_unless_present = "random")]
        spec: Option<String>,
        #[arg(long, default_value_t = 10)]
        depth: usize,
        #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
        h: i64,
        /// Run this many random sequences bounded by 1 instead
        #[arg(long)]
        random: Option<usize>,
        /// Depths of random trials are drawn from 1..=max-depth
        #[arg(long, default_value_t = 100)]
        max_depth: usize,
    },
    /// Correlations of u_n = e(h x_n) at shifts 1..=D
    Cov {
        #[arg(long)]
        spec: String,
        #[arg(long, default_value_t = 10)]
        depth: usize,
        #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
        h: i64,
    },
    /// Fejér conditions at a finite horizon
    Fejer {
        #[arg(long)]
        spec: String,
    },
    /// log x / |f(x) - p(x)| on a geometric grid
    Bosh {
        #[arg(long)]
        spec: String,
        /// Polynomial coefficients, constant first
        #[arg(long, default_value = "0")]
        p: String,
        /// `from,to,count`
        #[arg(long, default_value = "10,1e6,20")]
        grid: String,
    },
    /// Average gap between a(s) and a(sigma(s)) over [0, tau]
    Quad {
        /// a(s) = exp(i · inner(s))
        #[arg(long, default_value = "poly:0,1")]
        inner: String,
        #[arg(long, default_value = "pow:0.5")]
        sigma: String,
        #[arg(long, default_value = "10000", value_parser = parse_float)]
        tau: f64,
        #[arg(long, default_value = "0.05", value_parser = parse_float)]
        step: f64,
    },
}

#[derive(Debug, Subcommand)]
pub enum BesicovitchCommand {
    /// Build an indicator and summarize it
    Indicator {
        /// squarefree, qfree:6,10, beatty:sqrt2, coprime-floor:sqrt2
        #[arg(long, default_value = "squarefree")]
        source: String,
        /// Also write the raw bitset file
        #[arg(long)]
        bits: Option<PathBuf>,
        /// Also write the run-length JSON file
        #[arg(long)]
        rle: Option<PathBuf>,
    },
    /// Distance from the indicator to its rational approximations
    Distance {
        #[arg(long, default_value = "squarefree")]
        source: String,
        /// Truncation levels M
        #[arg(long, default_value = "2,3,5")]
        m: String,
    },
    /// Weyl report of x_n along the members of the indicator
    Subseq {
        #[arg(long, default_value = "squarefree")]
        source: String,
        #[arg(long)]
        spec: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum AdeleCommand {
    /// p-adic fractional part of a rational
    Pfrac {
        #[arg(long)]
        q: String,
        #[arg(long)]
        p: u64,
    },
    /// Adelic fractional part f(x)
    Frac {
        /// JSON, `diag:q` or `real:q`
        #[arg(long)]
        x: String,
    },
    /// phi(x) = x - f(x)
    Phi {
        #[arg(long)]
        x: String,
    },
    /// Character exponent and value of chi_r at u
    Char {
        #[arg(long, default_value = "1")]
        r: String,
        #[arg(long)]
        u: String,
    },
    /// Character averages over Følner levels
    Weyl {
        #[arg(long, default_value = r#"{"exceptions":{"2":"1/2"}}"#)]
        alpha: String,
        #[arg(long, default_value_t = 1)]
        degree: usize,
        #[arg(long, default_value = "1")]
        r: String,
        #[arg(long, default_value = "4,6,8")]
        levels: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum KataiCommand {
    /// (1/N) sum a(pn) conj(a(qn))
    Corr {
        /// exp:<spec>, mobius, liouville, one, const:re[,im]
        #[arg(long)]
        seq: String,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        q: u64,
    },
    /// All prime pairs up to a cutoff
    Report {
        #[arg(long)]
        seq: String,
        /// Prime cutoff P
        #[arg(long, default_value_t = 13)]
        primes: u64,
    },
    /// (1/N) sum a(n) F(n) for F = mobius or liouville
    Weighted {
        #[arg(long)]
        seq: String,
        #[arg(long, default_value = "mobius")]
        weight: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum PetCommand {
    /// Characteristic vector of a `;`-separated family
    Cv {
        #[arg(long)]
        family: String,
    },
    /// Compare two characteristic vectors
    Less {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// One reduction step
    Reduce {
        #[arg(long)]
        family: String,
        /// Index of the minimal-degree member to difference against
        #[arg(long)]
        select: Option<usize>,
    },
    /// Iterate reductions down to the base case or the budget
    Chain {
        #[arg(long)]
        family: String,
        #[arg(long, default_value_t = 200)]
        max_steps: usize,
        #[arg(long, default_value_t = 1 << 14)]
        max_size: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum RamseyCommand {
    /// First monochromatic pattern in a coloring
    Search {
        /// Coloring file: header `N r`, then N colors
        #[arg(long, conflicts_with = "colors")]
        coloring: Option<PathBuf>,
        /// Inline digits, e.g. 11221122
        #[arg(long)]
        colors: Option<String>,
        /// Displacements, e.g. `n;2n` or `floor:x:2`
        #[arg(long)]
        patterns: String,
        /// Candidate n, e.g. `1..9` (default: 1..=N)
        #[arg(long)]
        candidates: Option<String>,
    },
    /// Exhaustive monochromatic k-AP check over all 2-colorings of [1..n]
    Vdw {
        #[arg(long, default_value_t = 3)]
        k: u32,
        #[arg(long, default_value_t = 9)]
        n: u64,
    },
    /// Shared n = k^m with both pattern families inside A and B
    FloorPower {
        /// all, evens, odds, primes, random:<density>, or an indicator source
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long, default_value = "floor:x:2;floor:x^3:2")]
        spec_a: String,
        #[arg(long, default_value = "floor:x:2;floor:x^3:2")]
        spec_b: String,
        #[arg(long, default_value_t = 2)]
        m: u32,
        /// Repeat with seeds seed, seed+1, ... (random sets only)
        #[arg(long, default_value_t = 1)]
        trials: u64,
    },
    /// Finite IP sets: enumeration and window IP* test
    Ip {
        /// Generators, e.g. 1,2,4 (repeatable)
        #[arg(long, required = true)]
        gens: Vec<String>,
        /// Set tested against the IP sets
        #[arg(long)]
        set: Option<String>,
    },
    /// Maximal gap and first thick-syndetic window
    Syndetic {
        #[arg(long)]
        set: String,
        /// Gap bound g
        #[arg(long, default_value_t = 4)]
        g: u64,
    },
    /// Monochromatic 3-generator sub-IP sets in random 2-partitions of [1..2^s-1]
    SubIp {
        #[arg(long, default_value_t = 10)]
        s: u32,
        #[arg(long, default_value_t = 10)]
        trials: u64,
    },
}
