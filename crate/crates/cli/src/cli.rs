use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ppersist::linalg::FieldSpec;

#[derive(Parser, Debug)]
#[command(name = "ppersist", version, about = "Exact persistent homology, semigroup orders and diagram commutants")]
pub struct Cli {
    /// Coefficient field: q, f2 or fp:<prime>.
    #[arg(long, global = true, default_value = "q")]
    pub field: FieldSpec,
    /// Write the JSON result here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct HomologyArgs {
    #[arg(long, default_value_t = 0)]
    pub degree: usize,
    /// Largest simplex dimension built; defaults to degree + 1.
    #[arg(long)]
    pub max_dim: Option<usize>,
}

impl HomologyArgs {
    pub fn max_dim(&self) -> usize {
        self.max_dim.unwrap_or(self.degree + 1)
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Barcode of the Rips filtration by squared scale.
    VrBarcode {
        cloud: PathBuf,
        #[command(flatten)]
        homology: HomologyArgs,
        /// Keep only points with probability at least this.
        #[arg(long)]
        lambda: Option<String>,
        #[arg(long)]
        emit_svg: Option<PathBuf>,
    },
    /// Rank of H_k(VR(t2, lambda)) -> H_k(VR(t2 + shift, to_lambda)).
    BifiltrationRank {
        cloud: PathBuf,
        #[command(flatten)]
        homology: HomologyArgs,
        #[arg(long)]
        t2: String,
        #[arg(long)]
        lambda: String,
        /// Increase of the squared scale.
        #[arg(long, default_value = "0")]
        shift: String,
        /// Target probability threshold; defaults to lambda.
        #[arg(long)]
        to_lambda: Option<String>,
    },
    /// Map on Rips homology induced by a dataset morphism.
    VrMap {
        source: PathBuf,
        target: PathBuf,
        #[arg(long)]
        map: PathBuf,
        #[command(flatten)]
        homology: HomologyArgs,
        #[arg(long)]
        t2: String,
        #[arg(long)]
        lambda: String,
        /// Use the threshold m * lambda on the target, m the smallest fiber.
        #[arg(long)]
        paper_mode_mlambda: bool,
    },
    /// Barcode of a vertex-valued sublevel filtration.
    SublevelBarcode {
        complex: PathBuf,
        #[arg(long, default_value_t = 0)]
        degree: usize,
        #[arg(long)]
        emit_svg: Option<PathBuf>,
    },
    /// H0 and H1 of a graph family over the reachability order of its base.
    GraphPersist { family: PathBuf },
    /// Natural partial order of a finite semigroup.
    SemigroupOrder {
        table: PathBuf,
        #[arg(long, value_enum, default_value_t = OrderArg::Mitsch)]
        order: OrderArg,
    },
    /// Endomorphism ring of a diagram representation.
    EndRing { diagram: PathBuf },
    /// Checks that consecutive differentials of a page compose to zero.
    SpectralCheck { page: PathBuf },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrderArg {
    Mitsch,
    Nambooripad,
}
