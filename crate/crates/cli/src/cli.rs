use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use weingarten::{CategoryId, ColoredWord, GroupSpec, IndexSet, LimitKind, SpaceSpec, TRule};

/// Exact Weingarten integration over easy quantum groups and their homogeneous spaces.
#[derive(Debug, Parser)]
#[command(name = "wg", version)]
pub struct Cli {
    /// Persist Weingarten matrices here (one JSON record per key).
    #[arg(long, global = true, env = "WG_CACHE_DIR")]
    pub cache_dir: Option<PathBuf>,

    /// Worker threads; defaults to the machine's parallelism.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Add wall-clock timing to the output (makes it nondeterministic).
    #[arg(long, global = true)]
    pub timing: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the category's partitions of a word, in lexicographic order.
    Partitions(PartitionsArgs),
    /// Gram matrix G(π, σ) = N^{|π ∨ σ|}.
    Gram(MatrixArgs),
    /// Weingarten matrix (inverse of the Gram matrix on a basis).
    Weingarten(MatrixArgs),
    /// Moment of the entries of a Haar-distributed quantum group matrix.
    GroupMoment(GroupMomentArgs),
    /// Moment of the coordinates of a homogeneous space, in rescaled coordinates.
    SpaceMoment(SpaceMomentArgs),
    /// Defining relations of a space up to a given length.
    Relations(RelationsArgs),
    /// Check every relation against every test monomial; exits 2 on any failure.
    Verify(VerifyArgs),
    /// Exact moment of the truncated character.
    CharExact(CharExactArgs),
    /// Large-N moment of the truncated character.
    CharAsymptotic(CharAsymptoticArgs),
    /// Moments of a limit law.
    LimitMoments(LimitMomentsArgs),
    /// Classical against free moments at the same parameter.
    BpCompare(BpCompareArgs),
    /// Exact against asymptotic character moments along a family of spaces.
    Convergence(ConvergenceArgs),
    /// Independent reference computations.
    #[command(subcommand)]
    Oracle(OracleCommand),
}

#[derive(Debug, Args)]
pub struct PartitionsArgs {
    /// One category, or a comma-separated list to intersect.
    #[arg(long, value_delimiter = ',', required = true)]
    pub category: Vec<CategoryId>,
    #[arg(long)]
    pub word: ColoredWord,
}

#[derive(Debug, Args)]
pub struct MatrixArgs {
    #[arg(long)]
    pub category: CategoryId,
    #[arg(long)]
    pub word: ColoredWord,
    #[arg(long)]
    pub n: usize,
}

#[derive(Debug, Args)]
pub struct EntryArgs {
    #[arg(long)]
    pub word: ColoredWord,
    /// Comma-separated row indices, 1-based.
    #[arg(long, value_delimiter = ',', required = true)]
    pub rows: Vec<usize>,
    /// Comma-separated column indices, 1-based.
    #[arg(long, value_delimiter = ',', required = true)]
    pub cols: Vec<usize>,
}

#[derive(Debug, Args)]
pub struct GroupMomentArgs {
    /// CATEGORY:N, e.g. O+:4.
    #[arg(long)]
    pub group: GroupSpec,
    #[command(flatten)]
    pub entry: EntryArgs,
}

#[derive(Debug, Args)]
pub struct SpaceMomentArgs {
    /// e.g. O+:5/I=1,2, S:3xO:2/J=1 or a preset such as free-real-sphere:5.
    #[arg(long)]
    pub space: SpaceSpec,
    #[arg(long)]
    pub word: ColoredWord,
    /// Comma-separated coordinates; product coordinates are colon-joined, e.g. 1:2,3:1.
    #[arg(long, default_value = "")]
    pub indices: String,
}

#[derive(Debug, Args)]
pub struct RelationsArgs {
    #[arg(long)]
    pub space: SpaceSpec,
    #[arg(long, default_value_t = 4)]
    pub max_k: usize,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub space: SpaceSpec,
    #[arg(long, default_value_t = 4)]
    pub max_k: usize,
    #[arg(long, default_value_t = 2)]
    pub test_degree: usize,
    /// List every (relation, monomial) check instead of a per-relation summary.
    #[arg(long)]
    pub full: bool,
}

#[derive(Debug, Args)]
pub struct CharExactArgs {
    #[arg(long)]
    pub space: SpaceSpec,
    /// Truncation: N, an integer, or N*a/b.
    #[arg(long, default_value = "N")]
    pub t: TRule,
    #[arg(long)]
    pub word: ColoredWord,
    /// Also sum the space moments directly and report both.
    #[arg(long)]
    pub direct: bool,
}

#[derive(Debug, Args)]
pub struct CharAsymptoticArgs {
    /// One category per factor, comma-separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub category: Vec<CategoryId>,
    /// Limit parameter t, e.g. 1 or 1/2.
    #[arg(long)]
    pub t: String,
    #[arg(long)]
    pub word: ColoredWord,
}

#[derive(Debug, Args)]
pub struct LimitMomentsArgs {
    #[arg(long)]
    pub law: LimitKind,
    #[arg(long)]
    pub t: String,
    #[arg(long, default_value_t = 6)]
    pub max_k: usize,
}

#[derive(Debug, Args)]
pub struct BpCompareArgs {
    /// S, O or U.
    #[arg(long)]
    pub category: CategoryId,
    #[arg(long)]
    pub t: String,
    #[arg(long, default_value_t = 6)]
    pub max_k: usize,
}

#[derive(Debug, Args)]
pub struct ConvergenceArgs {
    /// Space template containing {N}, e.g. free-real-sphere:{N}.
    #[arg(long)]
    pub family: String,
    #[arg(long, value_delimiter = ',', required = true)]
    pub ns: Vec<usize>,
    #[arg(long)]
    pub word: ColoredWord,
    #[arg(long, default_value = "N")]
    pub t_rule: TRule,
}

#[derive(Debug, Subcommand)]
pub enum OracleCommand {
    /// Average over all N! permutation matrices.
    SnMoment(SnMomentArgs),
    /// Space moment of S_N by enumerating permutations.
    SnSpaceMoment(SnSpaceMomentArgs),
    /// Monte Carlo estimate for O_N or U_N.
    HaarMc(HaarMcArgs),
    /// Closed-form counting sequences.
    Counting(CountingArgs),
}

#[derive(Debug, Args)]
pub struct SnMomentArgs {
    #[arg(long)]
    pub n: usize,
    #[command(flatten)]
    pub entry: EntryArgs,
}

#[derive(Debug, Args)]
pub struct SnSpaceMomentArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub index: IndexSet,
    #[arg(long, value_delimiter = ',', required = true)]
    pub indices: Vec<usize>,
}

#[derive(Debug, Args)]
pub struct HaarMcArgs {
    /// O:N or U:N.
    #[arg(long)]
    pub group: GroupSpec,
    #[command(flatten)]
    pub entry: EntryArgs,
    #[arg(long, default_value_t = 1_000_000)]
    pub samples: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CountingKind {
    Bell,
    Catalan,
    DoubleFactorial,
    Poisson,
}

#[derive(Debug, Args)]
pub struct CountingArgs {
    #[arg(long, value_enum)]
    pub kind: CountingKind,
    #[arg(long)]
    pub k: usize,
    /// Parameter of the Poisson law.
    #[arg(long, default_value = "1")]
    pub t: String,
}
