//! `tievote`: winners, manipulation, control, bribery, reductions and
//! majority-graph realization from the command line.
//!
//! Exit status is 0 for YES (or agreement), 1 for NO (or disagreement) and
//! 2 for errors. Every flag can also be set through a `TIEVOTE_` variable.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use tievote::format::parse_score;
use tievote::rules::{Score, ScoringExtension, WinnerModel};
use tievote::solvers::{Caps, DomainKind, SolverConfig};

#[derive(Parser)]
#[command(name = "tievote", version, about = "Voting problems with tied and irrational votes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub global: Global,
}

#[derive(Args)]
pub struct Global {
    /// Output format; structured output is one JSON object per line.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text, env = "TIEVOTE_FORMAT")]
    pub format: Format,
    /// Seed for sampled sweeps.
    #[arg(long, global = true, default_value_t = 0, env = "TIEVOTE_SEED")]
    pub seed: u64,
    /// Search on the calling thread only.
    #[arg(long, global = true, env = "TIEVOTE_SEQUENTIAL")]
    pub sequential: bool,
    #[command(flatten)]
    pub caps: CapArgs,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Structured,
}

fn positive_usize(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("caps must be positive".into()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}

fn positive_u128(s: &str) -> Result<u128, String> {
    match s.parse::<u128>() {
        Ok(0) => Err("caps must be positive".into()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}

/// Enumeration limits; unset flags keep the library defaults.
#[derive(Args)]
pub struct CapArgs {
    #[arg(long, global = true, env = "TIEVOTE_CAP_MANIPULATORS", value_parser = positive_usize)]
    pub cap_manipulators: Option<usize>,
    #[arg(long, global = true, env = "TIEVOTE_CAP_ASSIGNMENTS", value_parser = positive_u128)]
    pub cap_assignments: Option<u128>,
    #[arg(long, global = true, env = "TIEVOTE_CAP_DOMAIN", value_parser = positive_usize)]
    pub cap_domain: Option<usize>,
    #[arg(long, global = true, env = "TIEVOTE_CAP_ENUMERATION_CANDIDATES", value_parser = positive_usize)]
    pub cap_enumeration_candidates: Option<usize>,
    #[arg(long, global = true, env = "TIEVOTE_CAP_DP_STATES", value_parser = positive_usize)]
    pub cap_dp_states: Option<usize>,
    #[arg(long, global = true, env = "TIEVOTE_CAP_UNREGISTERED", value_parser = positive_usize)]
    pub cap_unregistered: Option<usize>,
    #[arg(long, global = true, env = "TIEVOTE_CAP_ADD_LIMIT", value_parser = positive_usize)]
    pub cap_add_limit: Option<usize>,
    #[arg(long, global = true, env = "TIEVOTE_CAP_BRIBERY_VOTERS", value_parser = positive_usize)]
    pub cap_bribery_voters: Option<usize>,
    #[arg(long, global = true, env = "TIEVOTE_CAP_BRIBE_LIMIT", value_parser = positive_usize)]
    pub cap_bribe_limit: Option<usize>,
    #[arg(long, global = true, env = "TIEVOTE_CAP_CONSTANT_CANDIDATES", value_parser = positive_usize)]
    pub cap_constant_candidates: Option<usize>,
}

impl Global {
    pub fn config(&self) -> SolverConfig {
        let mut caps = Caps::default();
        let c = &self.caps;
        let set = |slot: &mut usize, v: Option<usize>| {
            if let Some(v) = v {
                *slot = v;
            }
        };
        set(&mut caps.max_manipulators, c.cap_manipulators);
        set(&mut caps.max_domain, c.cap_domain);
        set(&mut caps.max_enumeration_candidates, c.cap_enumeration_candidates);
        set(&mut caps.max_dp_states, c.cap_dp_states);
        set(&mut caps.max_unregistered, c.cap_unregistered);
        set(&mut caps.max_add_limit, c.cap_add_limit);
        set(&mut caps.max_bribery_voters, c.cap_bribery_voters);
        set(&mut caps.max_bribe_limit, c.cap_bribe_limit);
        set(&mut caps.max_constant_candidates, c.cap_constant_candidates);
        if let Some(v) = c.cap_assignments {
            caps.max_assignments = v;
        }
        SolverConfig {
            caps,
            parallel: !self.sequential && tievote::par::parallel_available(),
        }
    }
}

/// Rule flags; on instance files they override the headers.
#[derive(Args, Clone)]
pub struct RuleArgs {
    /// borda, plurality, approval-T, scoring(s1,..,sm), copeland(α), copeland or llull.
    #[arg(long, env = "TIEVOTE_RULE")]
    pub rule: Option<String>,
    /// Tie extension for scoring rules.
    #[arg(long, env = "TIEVOTE_EXT")]
    pub ext: Option<ScoringExtension>,
    /// Copeland tie value such as 1/2.
    #[arg(long, env = "TIEVOTE_ALPHA", value_parser = parse_score)]
    pub alpha: Option<Score>,
    /// nonunique or unique.
    #[arg(long, env = "TIEVOTE_WINNER_MODEL")]
    pub winner_model: Option<WinnerModel>,
}

/// Vote domain flags for manipulators and bribed voters.
#[derive(Args, Clone)]
pub struct DomainArgs {
    /// total, top, bottom, weak, pairwise or pairwise-strict.
    #[arg(long, env = "TIEVOTE_DOMAIN")]
    pub domain: Option<DomainKind>,
    /// Single-peaked axis such as `a < p < b`.
    #[arg(long, env = "TIEVOTE_AXIS")]
    pub axis: Option<String>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ManipulationAlgo {
    Exact,
    Dp,
    MinFast,
    CopelandP,
    LlullFlow,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BriberyAlgo {
    Exact,
    TApprovalBribery,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    PartitionPrime,
    BordaMax,
    BordaRoundDown,
    BordaAvg,
    Copeland,
    X3cCcav,
}

/// A source instance for `reduce` and `verify`.
#[derive(Args, Clone)]
pub struct SourceArgs {
    /// Partition or Partition′ values, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub values: Vec<u64>,
    /// Partition′ target K̂.
    #[arg(long)]
    pub target: Option<u64>,
    /// Read --values as Partition and map them to Partition′ first.
    #[arg(long)]
    pub from_partition: bool,
    /// X3C cover size; the base has 3k elements.
    #[arg(long)]
    pub k: Option<usize>,
    /// X3C sets, 1-based, as `1,2,3;4,5,6`.
    #[arg(long)]
    pub sets: Option<String>,
    /// Copeland tie value.
    #[arg(long, env = "TIEVOTE_ALPHA", value_parser = parse_score)]
    pub alpha: Option<Score>,
    #[arg(long, env = "TIEVOTE_WINNER_MODEL")]
    pub winner_model: Option<WinnerModel>,
    /// Map sources outside a construction's normalization to trivial targets.
    #[arg(long, env = "TIEVOTE_PERMISSIVE")]
    pub permissive: bool,
}

#[derive(Args, Clone)]
pub struct SweepArgs {
    /// Check every source within the bounds instead of a single one.
    #[arg(long)]
    pub sweep: bool,
    /// Most values per source.
    #[arg(long, default_value_t = 3)]
    pub t_max: usize,
    /// Largest value.
    #[arg(long, default_value_t = 6)]
    pub val_max: u64,
    /// Partition′ targets run up to 2K plus this.
    #[arg(long, default_value_t = 0)]
    pub extra: u64,
    /// Sampled X3C families.
    #[arg(long, default_value_t = 100)]
    pub families: usize,
}

#[derive(Subcommand)]
pub enum Command {
    /// Scores and winners of a profile.
    Winners {
        input: PathBuf,
        #[command(flatten)]
        rule: RuleArgs,
    },
    /// Constructive coalitional weighted manipulation.
    Manipulate {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = ManipulationAlgo::Exact, env = "TIEVOTE_ALGO")]
        algo: ManipulationAlgo,
        #[command(flatten)]
        rule: RuleArgs,
        #[command(flatten)]
        domain: DomainArgs,
    },
    /// Constructive control by adding voters.
    ControlAv {
        input: PathBuf,
        /// Most voters to add.
        #[arg(long)]
        limit: Option<usize>,
        #[command(flatten)]
        rule: RuleArgs,
    },
    /// Weighted bribery.
    Bribe {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = BriberyAlgo::Exact, env = "TIEVOTE_ALGO")]
        algo: BriberyAlgo,
        /// Most voters to bribe.
        #[arg(long)]
        limit: Option<usize>,
        #[command(flatten)]
        rule: RuleArgs,
        #[command(flatten)]
        domain: DomainArgs,
    },
    /// Print the target instance a reduction builds from a source.
    Reduce {
        #[arg(value_enum)]
        kind: KindArg,
        #[command(flatten)]
        source: SourceArgs,
    },
    /// Decide a source and its target and check that the answers agree.
    Verify {
        #[arg(value_enum)]
        kind: KindArg,
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        sweep: SweepArgs,
    },
    /// Two weak orders to two total orders with the same majority graph.
    Realize { input: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut stdout = std::io::stdout().lock();
    match commands::run(&cli, &mut stdout) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
