use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// Exact rational arithmetic.
    Exact,
    /// Double precision floating point.
    Float,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    /// Multi-index chain rule.
    Multi,
    /// Set-partition chain rule.
    Comb,
}

/// Jets on point clouds, their pullbacks, and group invariance.
#[derive(Debug, Parser)]
#[command(name = "whitney", version)]
pub struct Cli {
    #[command(flatten)]
    pub config: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

/// Options shared by every subcommand.
#[derive(Clone, Debug, Args)]
pub struct RunConfig {
    #[arg(long, value_enum, default_value = "exact", global = true)]
    pub mode: Mode,
    /// Matching and comparison tolerance in float mode.
    #[arg(long, default_value_t = 1e-9, global = true)]
    pub tol: f64,
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,
    /// Jet order.
    #[arg(long, global = true)]
    pub order: Option<u32>,
    /// Input documents, in the order the subcommand expects them.
    #[arg(long = "in", global = true)]
    pub inputs: Vec<PathBuf>,
    /// Output file (standard output if absent).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Jet of a polynomial on a point cloud.
    Jet {
        #[arg(long)]
        poly: String,
        /// Points as `x,y;x,y;..`.
        #[arg(long)]
        points: String,
    },
    /// Product of the two input jets.
    Product,
    /// Derivative `d^beta` of the input jet.
    Diff {
        /// Multi-index as `b1,b2,..`.
        #[arg(long)]
        beta: String,
    },
    /// Taylor polynomial of the input jet at a cloud point.
    Taylor {
        #[arg(long)]
        at: String,
        #[arg(long)]
        k: Option<u32>,
    },
    /// Taylor remainder of the input jet, expanded at a cloud point.
    Remainder {
        #[arg(long)]
        at: String,
        #[arg(long)]
        k: Option<u32>,
    },
    /// Whitney seminorm of the input jet.
    Seminorm {
        #[arg(long)]
        k: Option<u32>,
        /// Cloud indices `i,j,..` (all points if absent).
        #[arg(long)]
        subset: Option<String>,
    },
    /// Pullback of the input jet (on the target cloud) along a polynomial map.
    Pullback {
        /// Components separated by `;`.
        #[arg(long)]
        map: String,
        /// Source points.
        #[arg(long)]
        points: String,
        #[arg(long, value_enum, default_value = "multi")]
        method: Method,
    },
    /// Checks that pulling back the jet of `f` equals the jet of `f o phi`.
    CheckComm {
        #[arg(long)]
        poly: String,
        #[arg(long)]
        map: String,
        #[arg(long)]
        points: String,
    },
    /// Closure of the input group's generators.
    GroupClosure {
        #[arg(long, default_value_t = 1000)]
        max_order: usize,
    },
    /// Restricted action groupoid of the input group on a cloud.
    Arrows {
        #[arg(long)]
        points: String,
        #[arg(long, default_value_t = 1000)]
        max_order: usize,
    },
    /// Groupoid invariance of a jet (inputs: group, jet).
    CheckInv1 {
        #[arg(long, default_value_t = 1000)]
        max_order: usize,
    },
    /// Infinitesimal invariance of a jet (inputs: group, jet).
    CheckInv2 {
        #[arg(long, default_value_t = 1000)]
        max_order: usize,
    },
    /// Group average of a polynomial (input: group).
    Average {
        #[arg(long)]
        poly: String,
        /// Quadrature nodes for circle actions (smallest exact count if absent).
        #[arg(long)]
        nodes: Option<usize>,
        #[arg(long, default_value_t = 1000)]
        max_order: usize,
    },
    /// Invariant extension of a jet to the orbit of its cloud (inputs: group, jet).
    Extend {
        #[arg(long, default_value_t = 1000)]
        max_order: usize,
    },
    /// Catalog of Hilbert maps.
    Hilbert {
        #[command(subcommand)]
        command: HilbertCommand,
    },
    /// Isotropy group and orbit type of a point (input: group).
    Isotropy {
        #[arg(long)]
        point: String,
        #[arg(long, default_value_t = 1000)]
        max_order: usize,
    },
    /// Orbit type of `(q, p)` under the diagonal orthogonal group.
    ClassifyCotangent {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: String,
        #[arg(long)]
        p: String,
    },
    /// Generic rank of the Jacobian of a polynomial map.
    Rank {
        #[arg(long)]
        map: String,
        /// Domain dimension (highest variable used if absent).
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long, default_value_t = 8)]
        trials: usize,
    },
    /// Worked examples.
    Demo {
        #[command(subcommand)]
        command: DemoCommand,
    },
}

#[derive(Debug, Subcommand)]
pub enum HilbertCommand {
    /// Lists the catalog with its verification results.
    List,
    /// Pullback of the input jet along an entry's Hilbert map.
    Pullback {
        #[arg(long)]
        entry: String,
        #[arg(long)]
        points: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum DemoCommand {
    /// Circle acting on the plane, restricted to a single point.
    Circle,
    /// Orbit type strata of the orthogonal group on a cotangent space.
    Cotangent {
        #[arg(long, default_value_t = 2)]
        n: usize,
    },
}
