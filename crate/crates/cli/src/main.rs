mod commands;
mod report;

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;

use report::{Format, Report};

#[derive(Parser, Debug)]
#[command(name = "dgla", version, about = "Exact deformation calculus for finite DGLAs")]
pub struct Cli {
    /// Output encoding of the report.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check a description file; the kind is taken from the file suffix
    /// (`.bix.json`, `.simp.json`, `.group.json`, `.alg.json`, `.ext.json`),
    /// anything else is read as a DGLA.
    Validate { file: PathBuf },
    /// Cohomology of the underlying complex in one degree.
    Cohomology {
        file: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        degree: i32,
    },
    #[command(subcommand)]
    Mc(McCommand),
    #[command(subcommand)]
    Gauge(GaugeCommand),
    /// First-order deformations: `H^1` with the gauge checks.
    Tangent { dgla: PathBuf },
    /// Obstruction class of an element along a small extension.
    Obstruct {
        dgla: PathBuf,
        #[arg(long)]
        extension: PathBuf,
        #[arg(long)]
        element: PathBuf,
    },
    /// Lift an element over its own algebra to a larger truncation.
    Lift {
        dgla: PathBuf,
        /// The larger algebra; generators are matched by name.
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        element: PathBuf,
    },
    /// Smooth/étale criterion for a morphism, optionally transferring a
    /// sample solution of the target back to the source.
    Etale {
        source: PathBuf,
        target: PathBuf,
        #[arg(long)]
        morphism: PathBuf,
        #[arg(long)]
        sample: Option<PathBuf>,
        #[arg(long)]
        algebra: Option<String>,
    },
    #[command(subcommand)]
    Bicomplex(BicomplexCommand),
    #[command(subcommand)]
    Model(ModelCommand),
    /// Run the seeded property suites.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "small")]
        profile: String,
        /// Re-run a single case of one property.
        #[arg(long, requires = "case_seed")]
        property: Option<String>,
        #[arg(long, requires = "property")]
        case_seed: Option<u64>,
    },
}

#[derive(Args, Debug)]
pub struct ElementArgs {
    pub dgla: PathBuf,
    /// Algebra shorthand such as `t^3`, or an algebra file; used when the
    /// element file does not name its algebra.
    #[arg(long)]
    pub algebra: Option<String>,
    #[arg(long)]
    pub element: PathBuf,
}

#[derive(Subcommand, Debug)]
pub enum McCommand {
    /// Whether the element solves `dx + ½[x,x] = 0`.
    Check(ElementArgs),
    /// The value of `dx + ½[x,x]`.
    Residual(ElementArgs),
}

#[derive(Subcommand, Debug)]
pub enum GaugeCommand {
    /// `e^a * x`
    Act {
        dgla: PathBuf,
        #[arg(long)]
        algebra: Option<String>,
        #[arg(long)]
        gauge: PathBuf,
        #[arg(long)]
        element: PathBuf,
    },
    /// `c` with `e^c = e^a e^b`.
    Compose {
        dgla: PathBuf,
        #[arg(long)]
        algebra: Option<String>,
        #[arg(long, num_args = 2, required = true)]
        gauge: Vec<PathBuf>,
    },
    /// Decide whether two solutions are gauge equivalent.
    Equiv {
        dgla: PathBuf,
        #[arg(long)]
        algebra: Option<String>,
        #[arg(long, num_args = 2, required = true)]
        element: Vec<PathBuf>,
        /// Bound on explored stage choices when `H^0` is nonzero.
        #[arg(long)]
        max_nodes: Option<usize>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Edge {
    Bottom,
    Left,
}

#[derive(Subcommand, Debug)]
pub enum BicomplexCommand {
    /// Square-zero, commuting squares and edge chain maps.
    Validate { file: PathBuf },
    /// Exactness of augmented rows and columns.
    Hypotheses { file: PathBuf },
    /// Carry a class from one edge to the other.
    Transfer {
        file: PathBuf,
        #[arg(long, value_enum)]
        from: Edge,
        #[arg(long)]
        degree: usize,
        /// Class coordinates, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        class: String,
        /// Solve interior equations with seeded kernel perturbations.
        #[arg(long)]
        randomized: Option<u64>,
    },
    /// The degree-2 staircase of a bottom-edge cocycle.
    Obstruction {
        file: PathBuf,
        /// Cocycle coordinates, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        cocycle: String,
    },
    /// Cohomology dimensions of the total complex and both edges.
    Total {
        file: PathBuf,
        #[arg(long)]
        degree: Option<usize>,
    },
}

#[derive(Subcommand, Debug)]
pub enum ModelCommand {
    /// List the catalog or show one entry.
    Catalog {
        #[arg(long)]
        name: Option<String>,
    },
    /// Group-cochain bicomplex of a representation resolution.
    GroupCech {
        file: PathBuf,
        #[arg(long)]
        p_max: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Čech bicomplex of a simplicial complex covered by closed stars.
    Simplicial {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let report = Report::usage(&e.to_string());
            emit(&report, Format::Json);
            return ExitCode::from(report.exit_code());
        }
    };
    let report = match commands::dispatch(&cli.command) {
        Ok(r) => r,
        Err(e) => Report::invalid(commands::name(&cli.command), &e),
    };
    emit(&report, cli.format);
    ExitCode::from(report.exit_code())
}

fn emit(report: &Report, format: Format) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{}", report.render(format));
}
