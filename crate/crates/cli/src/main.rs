mod commands;
mod io;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "lmpbench", version, about = "Bisimulation workbench for finite labelled Markov processes")]
pub struct Cli {
    /// Output style.
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Json,
}

#[derive(Subcommand)]
pub enum Command {
    /// Parse and validate a model file.
    Validate { model: PathBuf },
    /// Bisimulation checks and bisimilarities between LMPs.
    #[command(subcommand)]
    Bisim(BisimCmd),
    /// Structural checks on maps and families.
    #[command(subcommand)]
    Check(CheckCmd),
    /// Modal logic.
    #[command(subcommand)]
    Logic(LogicCmd),
    /// Quotient of an LMP by its smallest stable σ-algebra.
    Quotient { model: PathBuf },
    /// Direct sum of two LMPs.
    Sum { left: PathBuf, right: PathBuf },
    /// Nondeterministic processes.
    #[command(subcommand)]
    Nlmp(NlmpCmd),
    /// The Spoiler/Duplicator game.
    #[command(subcommand)]
    Game(GameCmd),
    /// Inclusion report over a corpus.
    #[command(subcommand)]
    Report(ReportCmd),
    /// Search for separating instances.
    #[command(subcommand)]
    Search(SearchCmd),
    /// Instance generation.
    #[command(subcommand)]
    Gen(GenCmd),
}

#[derive(Args)]
pub struct Pairwise {
    pub left: PathBuf,
    pub right: PathBuf,
    /// JSON list of related state pairs to check instead of computing.
    #[arg(long)]
    pub relation: Option<PathBuf>,
    /// Decide a single pair, written `s,t`.
    #[arg(long)]
    pub pair: Option<String>,
}

#[derive(Args)]
pub struct Internal {
    pub left: PathBuf,
    /// Work on the direct sum with this process; states become L.x and R.y.
    pub right: Option<PathBuf>,
    #[arg(long)]
    pub relation: Option<PathBuf>,
    #[arg(long)]
    pub pair: Option<String>,
}

#[derive(Subcommand)]
pub enum BisimCmd {
    /// Internal state bisimulation.
    State(Internal),
    /// Internal event bisimulation.
    Event(Internal),
    /// External (×) bisimulation between two processes.
    External(Pairwise),
    /// ⊕-bisimulation; a relation refers to the states of the sum.
    Oplus(Pairwise),
    /// ∨-bisimilarity through cospans.
    Vee(Pairwise),
    /// ⊕ with an auxiliary summand.
    #[command(name = "oplusP")]
    OplusP(Pairwise),
    /// Coalgebraic bisimulation via couplings.
    Delta(Pairwise),
}

#[derive(Args)]
pub struct MapArg {
    /// JSON object from source state to target state.
    #[arg(long)]
    pub map: PathBuf,
}

#[derive(Subcommand)]
pub enum CheckCmd {
    /// Whether a map is a zigzag morphism.
    Zigzag {
        source: PathBuf,
        target: PathBuf,
        #[command(flatten)]
        map: MapArg,
    },
    /// Whether two maps out of an apex form a span of zigzags.
    Span {
        left: PathBuf,
        right: PathBuf,
        apex: PathBuf,
        #[arg(long)]
        f: PathBuf,
        #[arg(long)]
        g: PathBuf,
    },
    /// Whether two maps into an apex form a cospan identifying a pair.
    Cospan {
        left: PathBuf,
        right: PathBuf,
        apex: PathBuf,
        #[arg(long)]
        f: PathBuf,
        #[arg(long)]
        g: PathBuf,
        #[arg(long)]
        pair: String,
    },
    /// Whether a surjective zigzag is V-final.
    Vfinal {
        source: PathBuf,
        target: PathBuf,
        #[command(flatten)]
        map: MapArg,
    },
    /// Whether a family of sets is stable.
    Stable {
        model: PathBuf,
        /// JSON list of sets, each a list of states.
        #[arg(long)]
        family: PathBuf,
    },
}

#[derive(Subcommand)]
pub enum LogicCmd {
    /// States satisfying a formula, e.g. `<a>{>1/2} tt`.
    Eval { model: PathBuf, formula: String },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NlmpNotion {
    IntState,
    IntHit,
    IntEvent,
    ExtState,
    ExtHit,
    ExtEvent,
}

#[derive(Subcommand)]
pub enum NlmpCmd {
    /// Bisimulations of NLMPs; LMP inputs are embedded.
    Bisim {
        #[arg(value_enum)]
        notion: NlmpNotion,
        left: PathBuf,
        /// Required for the external notions.
        right: Option<PathBuf>,
        #[arg(long)]
        relation: Option<PathBuf>,
        #[arg(long)]
        pair: Option<String>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Role {
    Spoiler,
    Duplicator,
}

#[derive(Subcommand)]
pub enum GameCmd {
    /// Winning region and strategies.
    Solve {
        left: PathBuf,
        right: PathBuf,
        #[arg(long)]
        start: Option<String>,
    },
    /// Play against the solver on stdin/stdout.
    Play {
        left: PathBuf,
        right: PathBuf,
        #[arg(long)]
        start: String,
        #[arg(long = "as", value_enum, default_value_t = Role::Spoiler)]
        role: Role,
        /// Write the transcript here.
        #[arg(long)]
        transcript: Option<PathBuf>,
    },
    /// Re-run a transcript through the referee.
    Replay { left: PathBuf, right: PathBuf, transcript: PathBuf },
}

#[derive(Subcommand)]
pub enum ReportCmd {
    /// Markdown inclusion table for the pairs listed in `<dir>/corpus.json`.
    Table {
        dir: PathBuf,
        /// Compare against this expectations file; exit 1 on a difference.
        #[arg(long)]
        expect: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
pub enum SearchCmd {
    /// Look for states related by the first notion but not the second.
    Separation {
        /// Two of delta, span, ext, state, vee (alias event), oplus.
        #[arg(long)]
        notions: String,
        #[arg(long, default_value_t = 3)]
        max_states: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        budget: usize,
        #[arg(long, default_value_t = 1)]
        labels: usize,
        #[arg(long, default_value_t = 4)]
        denominator: u64,
        /// Skip the exhaustive phase over two-state processes.
        #[arg(long)]
        no_exhaustive: bool,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Lmp,
    Nlmp,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SigmaArg {
    Powerset,
    Coarse,
    Mixed,
}

#[derive(Subcommand)]
pub enum GenCmd {
    /// A random model file, fixed by the seed.
    Random {
        #[arg(long, value_enum, default_value_t = KindArg::Lmp)]
        kind: KindArg,
        #[arg(long, default_value_t = 6)]
        max_states: usize,
        #[arg(long)]
        max_atoms: Option<usize>,
        #[arg(long, default_value_t = 8)]
        denominator: u64,
        #[arg(long, default_value_t = 2)]
        labels: usize,
        #[arg(long, value_enum, default_value_t = SigmaArg::Mixed)]
        sigma: SigmaArg,
        #[arg(long, default_value_t = 2)]
        max_measures: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
