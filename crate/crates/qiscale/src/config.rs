//! Command-line configuration. The parsed [`Cli`] is the experiment config:
//! its canonical JSON, together with digests of any input files, is what the
//! config hash covers.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

pub const DEFAULT_BUDGET: usize = 1 << 23;

/// Rough heap cost of one enumerated vertex, used to turn
/// `QISCALE_BUDGET_MB` into a vertex budget.
pub const BYTES_PER_VERTEX: usize = 256;

#[derive(Parser, Serialize, Debug, Clone)]
#[command(name = "qiscale", version, about = "Measure-scaling quasi-isometry experiments on finite windows")]
pub struct Cli {
    /// Seed for every random choice of the run.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Maximum number of vertices per enumerated window.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    pub budget: usize,
    /// Directory for report.json, rows.csv and exported files.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Serialize, Debug, Clone)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Enumerate a ball of a Cayley graph and export it.
    Window {
        #[arg(long)]
        group: String,
        #[arg(long)]
        radius: u32,
    },
    /// Standard Følner family with boundary statistics.
    Folner {
        #[arg(long)]
        group: String,
        /// Number of members.
        #[arg(long)]
        n: u64,
        /// Window radius; grown until the family fits when omitted.
        #[arg(long)]
        radius: Option<u32>,
    },
    /// Trace of |f^-1(A_n)| / |A_n| along a Følner family.
    Estimate {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long, value_enum, default_value_t = Family::Boxes)]
        family: Family,
        #[arg(long)]
        n: u64,
        /// Stability tolerance, as p/q.
        #[arg(long, default_value = "1/100")]
        tol: String,
    },
    /// Measure-scaling defect for a list of candidate factors.
    Defect {
        #[command(flatten)]
        map: MapArgs,
        /// Comma list of candidate factors p/q.
        #[arg(long, default_value = "1")]
        kappa: String,
        #[command(flatten)]
        sets: SetArgs,
        #[arg(long, default_value_t = 1)]
        boundary_radius: u32,
    },
    /// Check the declared constants of a map and export it.
    VerifyQi {
        #[command(flatten)]
        map: MapArgs,
        /// Density margin; defaults to K.
        #[arg(long)]
        margin: Option<u32>,
        #[arg(long, default_value_t = 3)]
        pair_radius: u32,
    },
    /// Exact-size partition of a window.
    Partition {
        #[arg(long)]
        group: String,
        #[arg(long)]
        radius: u32,
        #[arg(long)]
        k: usize,
    },
    /// Bijection at bounded distance from a map.
    Realize {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long, default_value_t = 4)]
        l_max: u32,
    },
    /// Map matching m-pieces of the domain to n-pieces of the codomain.
    RealizeMn {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 4)]
        l_max: u32,
    },
    /// Scaling group of a lamplighter over Z or a one-ended base.
    ScLamp {
        #[arg(long)]
        n: u64,
        #[arg(long, value_enum, default_value_t = Ends::Two)]
        ends: Ends,
    },
    /// Whether F_n wr H and F_m wr H are quasi-isometric.
    QiLamp {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        m: u64,
        /// `trivial`, `reals`, a comma list of primes, or carnot/sol/bs.
        #[arg(long)]
        sc: String,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Window { .. } => "window",
            Command::Folner { .. } => "folner",
            Command::Estimate { .. } => "estimate",
            Command::Defect { .. } => "defect",
            Command::VerifyQi { .. } => "verify-qi",
            Command::Partition { .. } => "partition",
            Command::Realize { .. } => "realize",
            Command::RealizeMn { .. } => "realize-mn",
            Command::ScLamp { .. } => "sc-lamp",
            Command::QiLamp { .. } => "qi-lamp",
        }
    }

    pub fn map_args(&self) -> Option<&MapArgs> {
        match self {
            Command::Estimate { map, .. }
            | Command::Defect { map, .. }
            | Command::VerifyQi { map, .. }
            | Command::Realize { map, .. }
            | Command::RealizeMn { map, .. } => Some(map),
            _ => None,
        }
    }
}

/// Where the map comes from: a named construction or a map table between
/// two window files.
#[derive(Args, Serialize, Debug, Clone)]
pub struct MapArgs {
    /// `<k>z-in-z`, `lattice:<matrix>`, `halving`, `two-speed`,
    /// `identity:<group>`, `project:<n>` or `perturb:<group>:<p/q>`.
    #[arg(long, required_unless_present = "map_file", conflicts_with = "map_file")]
    pub map: Option<String>,
    #[arg(long, requires_all = ["domain", "codomain"])]
    pub map_file: Option<PathBuf>,
    /// Domain window file for `--map-file`.
    #[arg(long)]
    pub domain: Option<PathBuf>,
    /// Codomain window file for `--map-file`.
    #[arg(long)]
    pub codomain: Option<PathBuf>,
    /// Radius of the codomain ball on which a named map is fully tabulated.
    #[arg(long)]
    pub radius: Option<u32>,
}

#[derive(ValueEnum, Serialize, Debug, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// Standard Følner sets of the codomain group.
    Boxes,
    /// `[0, n)` in Z.
    Intervals,
    /// `[-n, 0)` in Z.
    LeftIntervals,
    /// Random connected sets.
    Random,
    /// Balls around random centers.
    Balls,
}

#[derive(Args, Serialize, Debug, Clone)]
pub struct SetArgs {
    #[arg(long, value_enum, default_value_t = Family::Random)]
    pub family: Family,
    /// Members of a box or interval family.
    #[arg(long, default_value_t = 20)]
    pub n: u64,
    /// Number of random sets.
    #[arg(long, default_value_t = 50)]
    pub count: usize,
    /// Largest random set, or largest ball radius.
    #[arg(long, default_value_t = 30)]
    pub size: usize,
    /// Random sets and ball centers stay within this depth.
    #[arg(long, default_value_t = 4)]
    pub depth: u32,
}

#[derive(ValueEnum, Serialize, Debug, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum Ends {
    One,
    Two,
}

/// Vertex budget after applying the `QISCALE_BUDGET_MB` cap.
pub fn effective_budget(flag: usize, budget_mb: Option<&str>) -> Result<usize, String> {
    match budget_mb {
        None => Ok(flag),
        Some(s) => {
            let mb: usize = s
                .trim()
                .parse()
                .map_err(|_| format!("QISCALE_BUDGET_MB must be a whole number of megabytes, got {s:?}"))?;
            Ok(flag.min(mb.saturating_mul(1 << 20) / BYTES_PER_VERTEX))
        }
    }
}
