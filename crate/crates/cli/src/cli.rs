//! Command-line surface.

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "lfgt",
    about = "Lattice-valued subgroup computations over finite groups",
    version
)]
pub struct Cli {
    /// Emit the structured JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,

    /// Load a lattice, group or homomorphism file into the workspace so
    /// that subset files can reference it by name. May be repeated.
    #[arg(long, global = true, value_name = "FILE")]
    pub load: Vec<String>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Decide a predicate of a lattice-valued subgroup.
    Check(CheckArgs),
    /// Run a construction and print the resulting value table or series.
    Compute(ComputeArgs),
    /// Run the randomized theorem suite.
    Verify(VerifyArgs),
    /// Information about the builtin catalogs.
    Builtin {
        /// List the catalog keys.
        #[arg(long)]
        list: bool,
    },
    /// Structural diagnostics.
    Diag {
        #[command(subcommand)]
        what: DiagKind,
    },
}

#[derive(Args)]
pub struct CheckArgs {
    #[arg(value_enum)]
    pub kind: CheckKind,
    /// Subset under test (an [lsubset] file).
    #[arg(long, value_name = "FILE")]
    pub eta: String,
    /// Ambient subgroup (an [lsubset] file).
    #[arg(long, value_name = "FILE")]
    pub mu: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum CheckKind {
    Lsubgroup,
    Normal,
    Pronormal,
    Subnormal,
    Nilpotent,
    Maximal,
    SupProperty,
}

#[derive(Args)]
pub struct ComputeArgs {
    #[arg(value_enum)]
    pub op: ComputeOp,
    /// Primary operand (an [lsubset] file).
    #[arg(long, value_name = "FILE")]
    pub eta: String,
    /// Ambient subgroup (an [lsubset] file).
    #[arg(long, value_name = "FILE")]
    pub mu: Option<String>,
    /// Second operand for the set product.
    #[arg(long, value_name = "FILE")]
    pub nu: Option<String>,
    /// Second operand for the commutator.
    #[arg(long, value_name = "FILE")]
    pub theta: Option<String>,
    /// Conjugating point, written value@element (for example d@(1 2 3)).
    #[arg(long, value_name = "POINT")]
    pub point: Option<String>,
    /// Homomorphism (a [hom] file) for the image computation.
    #[arg(long, value_name = "FILE")]
    pub hom: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum ComputeOp {
    Generate,
    Conjugate,
    Normalizer,
    ClosureSeries,
    CentralChain,
    NormalizerChain,
    SetProduct,
    Image,
    Commutator,
}

#[derive(Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 100)]
    pub cases: usize,
    /// Largest group order drawn from the catalog.
    #[arg(long, default_value_t = 8)]
    pub max_group: usize,
    /// Largest lattice size drawn from the catalog.
    #[arg(long, default_value_t = 4)]
    pub max_lattice: usize,
    /// Generate upper-well-ordered (chain) lattices only.
    #[arg(long)]
    pub chain_only: bool,
    /// Generate every instance with a surjective homomorphism.
    #[arg(long)]
    pub with_hom: bool,
    /// Restrict the group catalog to nilpotent groups.
    #[arg(long)]
    pub nilpotent_ambient: bool,
}

#[derive(Subcommand)]
pub enum DiagKind {
    /// Distributivity and chain diagnostics of a lattice.
    Lattice {
        /// Lattice file or builtin catalog key.
        #[arg(long, value_name = "FILE-OR-KEY")]
        lattice: String,
    },
}
