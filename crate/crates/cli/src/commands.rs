use std::path::PathBuf;

use cxell::bodies::{gen_non_j_invariant, gen_perturbed_ellipsoid, gen_random_ellipsoid, BodyOracle};
use cxell::characterize::{bombon_check, projections_ellipsoid_sweep, sections_symmetric_sweep, symmetry_center};
use cxell::extremal::{maie_symmetric, mice_with, MiceOptions};
use cxell::random::{complex_gaussian_vector, rng_from_seed};
use cxell::CharacterizationReport;
use serde::Serialize;

use crate::io::{
    pairs, read_json, to_csv, to_json, write_atomic, BodySpec, EllipsoidRecord, Pair, PointCloud, SlabFile,
    WitnessRecord,
};
use crate::{exit, suite, CliError};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    /// Minimal circumscribed ellipsoid of a point cloud.
    Mice,
    /// Maximal inscribed ellipsoid of a symmetric slab body.
    Maie,
    /// Complex-symmetry test with center reconstruction.
    Symmetry,
    /// Disk test on random complex-line sections.
    Bombon,
    /// Complex-symmetry test on random hyperplane sections.
    Sections,
    /// Ellipsoid test on projections onto random complex 2-planes.
    Projections,
    Gen(GenKind),
    VerifyTheorems,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenKind {
    Ellipsoid,
    Perturbed,
    NonJ,
    LpBall,
    Points,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub input: Option<PathBuf>,
    pub output: Option<PathBuf>,
    pub tol: f64,
    pub eps: f64,
    pub seed: u64,
    pub num_lines: usize,
    pub num_dirs: usize,
    pub num_planes: usize,
    pub max_iter: usize,
    pub format: Format,
    /// Complex dimension for `gen`.
    pub dim: usize,
    /// Perturbation size for `gen perturbed`.
    pub amount: f64,
    /// Exponent for `gen lp-ball`.
    pub p: f64,
    /// Number of points for `gen points`.
    pub count: usize,
    /// Scoreboard entry whose acceptance test is inverted (harness self-test).
    pub inject_fault: Option<String>,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            input: None,
            output: None,
            tol: 1e-6,
            eps: 1e-7,
            seed: 0,
            num_lines: 1000,
            num_dirs: 64,
            num_planes: 20,
            max_iter: 100_000,
            format: Format::Json,
            dim: 2,
            amount: 0.1,
            p: 4.0,
            count: 20,
            inject_fault: None,
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        for (name, v) in [("--tol", self.tol), ("--eps", self.eps)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(CliError::input(name, format!("must be positive, got {v}")));
            }
        }
        for (name, v) in [
            ("--lines", self.num_lines),
            ("--dirs", self.num_dirs),
            ("--planes", self.num_planes),
            ("--max-iter", self.max_iter),
            ("--dim", self.dim),
            ("--count", self.count),
        ] {
            if v == 0 {
                return Err(CliError::input(name, "must be at least 1"));
            }
        }
        Ok(())
    }

    fn input_path(&self) -> Result<&PathBuf, CliError> {
        self.input.as_ref().ok_or_else(|| CliError::input("--input", "this command needs an input file"))
    }
}

/// Formatted command output and the exit code it implies.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub text: String,
}

#[derive(Serialize)]
struct SolverRecord {
    converged: bool,
    iterations: usize,
    duality_gap: f64,
    eps: f64,
    support_points: Vec<Vec<Pair>>,
}

#[derive(Serialize)]
struct MiceRecord {
    command: &'static str,
    ellipsoid: EllipsoidRecord,
    report: SolverRecord,
}

#[derive(Serialize)]
struct MaieRecord {
    command: &'static str,
    ellipsoid: EllipsoidRecord,
}

#[derive(Serialize)]
struct CharacterizationRecord {
    command: &'static str,
    seed: u64,
    tol: f64,
    verdict: bool,
    witness: Option<WitnessRecord>,
    worst_deviation: f64,
    samples_used: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    center: Option<Vec<Pair>>,
}

impl CharacterizationRecord {
    fn new(command: &'static str, r: &CharacterizationReport) -> Self {
        Self {
            command,
            seed: r.seed,
            tol: r.tol,
            verdict: r.verdict,
            witness: WitnessRecord::from_witness(&r.worst_witness),
            worst_deviation: r.worst_deviation,
            samples_used: r.samples_used,
            center: r.center.as_ref().map(pairs),
        }
    }

    fn outcome(&self) -> Result<Outcome, CliError> {
        let code = if self.verdict { exit::SUCCESS } else { exit::PROPERTY_VIOLATED };
        Ok(Outcome { code, text: to_json(self)? })
    }
}

fn read_body(config: &RunConfig) -> Result<Box<dyn BodyOracle>, CliError> {
    read_json::<BodySpec>(config.input_path()?)?.to_body()
}

fn cmd_mice(config: &RunConfig) -> Result<Outcome, CliError> {
    let mut cloud: PointCloud = read_json(config.input_path()?)?;
    cloud.canonicalize();
    let points = cloud.to_points()?;
    let sol = mice_with(&points, &MiceOptions::new(config.eps, config.max_iter))?;
    let record = MiceRecord {
        command: "mice",
        ellipsoid: EllipsoidRecord::from_ellipsoid(&sol.ellipsoid),
        report: SolverRecord {
            converged: sol.report.converged,
            iterations: sol.report.iterations,
            duality_gap: sol.report.duality_gap,
            eps: config.eps,
            support_points: sol.report.support_points.iter().map(|&i| cloud.points[i].clone()).collect(),
        },
    };
    let code = if sol.report.converged { exit::SUCCESS } else { exit::NON_CONVERGENCE };
    Ok(Outcome { code, text: to_json(&record)? })
}

fn cmd_maie(config: &RunConfig) -> Result<Outcome, CliError> {
    let slabs = read_json::<SlabFile>(config.input_path()?)?.to_slabs()?;
    let e = match maie_symmetric(&slabs) {
        Err(cxell::Error::Unbounded) => return Err(CliError::input("slabs", "the slab body is unbounded")),
        other => other?,
    };
    let record = MaieRecord { command: "maie", ellipsoid: EllipsoidRecord::from_ellipsoid(&e) };
    Ok(Outcome { code: exit::SUCCESS, text: to_json(&record)? })
}

fn cmd_symmetry(config: &RunConfig) -> Result<Outcome, CliError> {
    let body = read_body(config)?;
    let (_, report) = symmetry_center(body.as_ref(), config.num_dirs, config.tol, config.seed)?;
    CharacterizationRecord::new("symmetry", &report).outcome()
}

fn cmd_bombon(config: &RunConfig) -> Result<Outcome, CliError> {
    let body = read_body(config)?;
    let report = bombon_check(body.as_ref(), config.num_lines, config.tol, config.seed)?;
    CharacterizationRecord::new("bombon", &report).outcome()
}

fn cmd_sections(config: &RunConfig) -> Result<Outcome, CliError> {
    let body = read_body(config)?;
    let report = sections_symmetric_sweep(body.as_ref(), config.num_planes, config.tol, config.seed, None)?;
    CharacterizationRecord::new("sections", &report).outcome()
}

fn cmd_projections(config: &RunConfig) -> Result<Outcome, CliError> {
    let body = read_body(config)?;
    if body.dim() < 3 {
        return Err(CliError::input("--input", "projections onto 2-planes need dimension at least 3"));
    }
    let report =
        projections_ellipsoid_sweep(body.as_ref(), 2, config.num_planes, config.num_dirs, config.tol, config.seed)?;
    CharacterizationRecord::new("projections", &report).outcome()
}

fn cmd_gen(config: &RunConfig, kind: GenKind) -> Result<Outcome, CliError> {
    let (seed, n) = (config.seed, config.dim);
    let text = match kind {
        GenKind::Ellipsoid => to_json(&BodySpec::from_ellipsoid(&gen_random_ellipsoid(seed, n)))?,
        GenKind::Perturbed => {
            let body = gen_perturbed_ellipsoid(seed, n, config.amount).map_err(|e| CliError::input("--amount", e))?;
            to_json(&BodySpec::from_perturbed(&body))?
        }
        GenKind::NonJ => to_json(&BodySpec::from_real_ellipsoid(&gen_non_j_invariant(seed, n)))?,
        GenKind::LpBall => {
            if !(config.p >= 1.0) || !config.p.is_finite() {
                return Err(CliError::input("--p", format!("exponent must be finite and at least 1, got {}", config.p)));
            }
            to_json(&BodySpec::LpBall { p: config.p, dim: n })?
        }
        GenKind::Points => {
            let mut rng = rng_from_seed(seed);
            let pts: Vec<_> = (0..config.count).map(|_| complex_gaussian_vector(&mut rng, n)).collect();
            to_json(&PointCloud::from_points(&pts))?
        }
    };
    Ok(Outcome { code: exit::SUCCESS, text })
}

/// Runs one command and returns its formatted output. Errors carry their
/// exit code through [`CliError::exit_code`].
pub fn run(config: &RunConfig) -> Result<Outcome, CliError> {
    config.validate()?;
    let outcome = match config.command {
        Command::Mice => cmd_mice(config)?,
        Command::Maie => cmd_maie(config)?,
        Command::Symmetry => cmd_symmetry(config)?,
        Command::Bombon => cmd_bombon(config)?,
        Command::Sections => cmd_sections(config)?,
        Command::Projections => cmd_projections(config)?,
        Command::Gen(kind) => cmd_gen(config, kind)?,
        Command::VerifyTheorems => suite::run_scoreboard(config)?,
    };
    match config.format {
        Format::Json => Ok(outcome),
        Format::Csv => Ok(Outcome { code: outcome.code, text: to_csv(&outcome.text)? }),
    }
}

/// Runs a command, writes its output (atomically, to `--output` or stdout)
/// and returns the process exit code. Errors go to stderr.
pub fn execute(config: &RunConfig) -> i32 {
    let result = run(config).and_then(|outcome| {
        match &config.output {
            Some(path) => write_atomic(path, &outcome.text)?,
            None => print!("{}", outcome.text),
        }
        Ok(outcome.code)
    });
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
