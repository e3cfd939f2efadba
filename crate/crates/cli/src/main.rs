use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use cxell_cli::{exit, execute, Command, Format, GenKind, RunConfig};

/// Complex ellipsoids: extremal ellipsoids and ellipsoid characterizations.
#[derive(Parser)]
#[command(name = "cxell", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,

    /// Input file (point cloud, slab file or body spec, depending on the command)
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// Output file; written atomically. Defaults to stdout
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Relative deviation accepted as a disk
    #[arg(long, global = true, default_value_t = 1e-6)]
    tol: f64,
    /// Duality-gap tolerance of the ellipsoid solvers
    #[arg(long, global = true, default_value_t = 1e-7)]
    eps: f64,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Random complex lines per test
    #[arg(long, global = true, default_value_t = 1000)]
    lines: usize,
    /// Random directions per symmetry test or projected plane
    #[arg(long, global = true, default_value_t = 64)]
    dirs: usize,
    /// Random planes per sweep
    #[arg(long, global = true, default_value_t = 20)]
    planes: usize,
    #[arg(long, global = true, default_value_t = 100_000)]
    max_iter: usize,
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
}

#[derive(Subcommand)]
enum Cmd {
    /// Minimal-volume complex ellipsoid containing a point cloud
    Mice,
    /// Maximal-volume complex ellipsoid inside a symmetric slab body
    Maie,
    /// Test a body for complex symmetry and recover its center
    Symmetry,
    /// Test whether every complex-line section of a body is a disk
    Bombon,
    /// Test random complex hyperplane sections for complex symmetry
    Sections,
    /// Test projections onto random complex 2-planes for being ellipsoids
    Projections,
    /// Generate a body spec or point cloud
    Gen {
        #[arg(value_enum)]
        kind: GenArg,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        /// Perturbation size for `perturbed`
        #[arg(long, default_value_t = 0.1)]
        amount: f64,
        /// Exponent for `lp-ball`
        #[arg(long, default_value_t = 4.0)]
        p: f64,
        /// Number of points for `points`
        #[arg(long, default_value_t = 20)]
        count: usize,
    },
    /// Run the seeded verification suite and print a scoreboard
    VerifyTheorems {
        /// Invert the acceptance test of one scoreboard entry (harness self-test)
        #[arg(long)]
        inject_fault: Option<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenArg {
    Ellipsoid,
    Perturbed,
    NonJ,
    LpBall,
    Points,
}

fn config(cli: Cli) -> RunConfig {
    let mut c = RunConfig::new(Command::Mice);
    c.command = match cli.command {
        Cmd::Mice => Command::Mice,
        Cmd::Maie => Command::Maie,
        Cmd::Symmetry => Command::Symmetry,
        Cmd::Bombon => Command::Bombon,
        Cmd::Sections => Command::Sections,
        Cmd::Projections => Command::Projections,
        Cmd::Gen { kind, dim, amount, p, count } => {
            (c.dim, c.amount, c.p, c.count) = (dim, amount, p, count);
            Command::Gen(match kind {
                GenArg::Ellipsoid => GenKind::Ellipsoid,
                GenArg::Perturbed => GenKind::Perturbed,
                GenArg::NonJ => GenKind::NonJ,
                GenArg::LpBall => GenKind::LpBall,
                GenArg::Points => GenKind::Points,
            })
        }
        Cmd::VerifyTheorems { inject_fault } => {
            c.inject_fault = inject_fault;
            Command::VerifyTheorems
        }
    };
    c.input = cli.input;
    c.output = cli.output;
    c.tol = cli.tol;
    c.eps = cli.eps;
    c.seed = cli.seed;
    c.num_lines = cli.lines;
    c.num_dirs = cli.dirs;
    c.num_planes = cli.planes;
    c.max_iter = cli.max_iter;
    c.format = match cli.format {
        FormatArg::Json => Format::Json,
        FormatArg::Csv => Format::Csv,
    };
    c
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // usage errors are input errors; help and version are not
            return ExitCode::from(if e.use_stderr() { exit::INPUT_ERROR as u8 } else { exit::SUCCESS as u8 });
        }
    };
    ExitCode::from(execute(&config(cli)) as u8)
}
