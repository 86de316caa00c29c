use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "pwtrace", version, about = "Trace norms and sampling diagnostics for Paley-Wiener spaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Group the nodes into clusters and print them as JSON.
    Partition(PartitionArgs),
    /// Run the condition checks and print the report as JSON.
    Check(CheckArgs),
    /// Trace norm of the file's trace, with per-group terms.
    Norm(NormArgs),
    /// |S(x)|, d_N(x) and (|S|/d_N)^p on a real grid, as CSV.
    Profile(ProfileArgs),
    /// Evaluate the cardinal interpolant of the trace.
    Interpolate(InterpolateArgs),
}

/// Flags shared by every subcommand. Values given here override the file's
/// `params`.
#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Sequence file (JSON).
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub capacity: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub tau: Option<f64>,
    #[arg(long)]
    pub p: Option<f64>,
    /// Truncation radius of the generating product.
    #[arg(long)]
    pub radius: Option<f64>,
    /// Output file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Space {
    Partition,
    Neighbors,
    Halfplane,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    Upper,
    Lower,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Ls,
    Hn,
}

/// Which grouping to use.
#[derive(Debug, Clone, Args)]
pub struct Grouping {
    #[arg(long, value_enum, default_value_t = Space::Partition)]
    pub space: Space,
    /// delta-radius of the neighbor groups.
    #[arg(long, default_value_t = 0.25)]
    pub eta: f64,
    /// Half-plane of the `halfplane` space.
    #[arg(long, value_enum, default_value_t = SideArg::Upper)]
    pub side: SideArg,
    /// Boundary line `Im z = offset` of the `halfplane` space.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub offset: f64,
}

#[derive(Debug, Args)]
pub struct PartitionArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub grouping: Grouping,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_enum, default_value_t = Mode::Ls)]
    pub mode: Mode,
    /// Muckenhoupt profile window and step, `XMIN:XMAX:STEP`.
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<String>,
}

#[derive(Debug, Args)]
pub struct NormArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub grouping: Grouping,
}

#[derive(Debug, Args)]
pub struct ProfileArgs {
    #[command(flatten)]
    pub common: Common,
    /// `XMIN:XMAX:STEP`.
    #[arg(long, allow_hyphen_values = true)]
    pub grid: String,
}

#[derive(Debug, Args)]
pub struct InterpolateArgs {
    #[command(flatten)]
    pub common: Common,
    /// JSON array of `{"re", "im"}` points.
    #[arg(long)]
    pub eval: PathBuf,
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn negative_grid_bounds_parse() {
        let cli = Cli::try_parse_from(["pwtrace", "profile", "--input", "a.json", "--grid", "-5:5:0.01"]).unwrap();
        match cli.command {
            Command::Profile(a) => assert_eq!(a.grid, "-5:5:0.01"),
            _ => panic!(),
        }
    }

    #[test]
    fn norm_flags() {
        let cli = Cli::try_parse_from([
            "pwtrace", "norm", "--input", "a.json", "--space", "halfplane", "--side", "lower", "--offset", "-0.5",
        ])
        .unwrap();
        match cli.command {
            Command::Norm(a) => {
                assert_eq!(a.grouping.space, Space::Halfplane);
                assert_eq!(a.grouping.side, SideArg::Lower);
                assert_eq!(a.grouping.offset, -0.5);
            }
            _ => panic!(),
        }
    }
}
