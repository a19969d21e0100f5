//! Command-line workflows. Every command prints a JSON report and exits
//! with 0 (all checks pass), 1 (a check fails) or 2 (bad input).

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::exactlin::format_scalar;
use crate::invariant::{d_equal, d_invariant, double, glue, verify_gluing};
use crate::localsys::{adjoint_system, homology_dims, twisted_complex, HomChain};
use crate::morse::{self, morse_complex};
use crate::propagator::{contraction, random_propagator, rng_from_seed, verify_propagator};
use crate::report::Report;
use crate::scenario::{
    default_cylinder_holonomies, default_torus3, homology_consistency, load_glued, load_invariant, load_scenario,
    load_scenario_unvalidated, save_glued, save_scenario, to_json, write_atomic, InvariantFile, ScenarioError,
};

#[derive(Debug, Parser)]
#[command(name = "oneloop", version, about = "Exact one-loop invariants from combinatorial Morse data")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Seed for randomized choices.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output file (or directory for `example`).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Suppress the report on stdout.
    #[arg(long, global = true)]
    pub quiet: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the Morse data side conditions.
    Validate { scenario: PathBuf },
    /// Twisted Betti numbers of the cell and Morse complexes.
    Homology { scenario: PathBuf },
    /// Contract the Morse complex and verify the propagator identity.
    Propagator { scenario: PathBuf },
    /// Compute an invariant representative; `--out` writes it to a file.
    Invariant { scenario: PathBuf },
    /// Compare two invariant files as classes.
    Compare { first: PathBuf, second: PathBuf },
    /// Glue the two parts of a glued scenario; `--out` writes the result.
    Glue { glued: PathBuf },
    /// Check the gluing formula on a glued scenario.
    VerifyGluing { glued: PathBuf },
    /// Write a generated scenario.
    Example {
        #[arg(value_enum)]
        name: ExampleName,
        #[arg(long, default_value_t = 1)]
        fiber_dim: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExampleName {
    TorusCylinder,
    TorusCylinderMirror,
    Torus3,
    DoubleCylinder,
    DoubleTorus3,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(report) => {
            if !cli.quiet {
                println!("{}", report.to_json());
            }
            if report.verdict {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                ScenarioError::Morse(_) | ScenarioError::Invariant(_) => 1,
                _ => 2,
            }
        }
    }
}

pub fn execute(cli: &Cli) -> Result<Report, ScenarioError> {
    let out = cli.out.as_deref();
    match &cli.command {
        Command::Validate { scenario } => {
            let s = load_scenario_unvalidated(scenario)?;
            Ok(morse::validate(&s.model, &s.representation, &s.morse))
        }
        Command::Homology { scenario } => homology(&load_scenario(scenario)?),
        Command::Propagator { scenario } => {
            let s = load_scenario(scenario)?;
            let mc = morse_complex(&s.model, &s.representation, &s.morse)?;
            let g = match cli.seed {
                Some(seed) => random_propagator(&mc.complex, &mut rng_from_seed(seed), 2),
                None => contraction(&mc.complex),
            }
            .map_err(|e| ScenarioError::Invariant(e.into()))?;
            if let Some(path) = out {
                write_atomic(path, &to_json(&g))?;
            }
            let mut r = verify_propagator(&mc.complex, &g);
            r.command = "propagator".into();
            Ok(r)
        }
        Command::Invariant { scenario } => {
            let s = load_scenario(scenario)?;
            let d = d_invariant(&s.model, &s.representation, &s.morse)?;
            let mut r = Report::new("invariant");
            r.pass("representative is a twisted cycle", describe_chain(&d.representative));
            if let Some(path) = out {
                let file = InvariantFile { scenario: s, c_f: d.c_f, representative: d.representative };
                write_atomic(path, &to_json(&file))?;
            }
            Ok(r)
        }
        Command::Compare { first, second } => {
            let (x, y) = (load_invariant(first)?, load_invariant(second)?);
            if x.scenario.model != y.scenario.model || x.scenario.representation != y.scenario.representation {
                return Err(ScenarioError::Build("invariants live on different models or representations".into()));
            }
            let s = &x.scenario;
            let mut r = Report::new("compare");
            match d_equal(&s.model, &s.representation, &x.representative, &y.representative)? {
                Some(cert) => r.pass(
                    "equal classes",
                    format!(
                        "lattice coefficients {:?}, 2-chain {:?}",
                        cert.n,
                        cert.w.entries().iter().map(format_scalar).collect::<Vec<_>>()
                    ),
                ),
                None => r.fail("equal classes", "difference is not a boundary plus an integral cycle"),
            }
            Ok(r)
        }
        Command::Glue { glued } => {
            let gs = load_glued(glued)?;
            let g = glue(&gs)?;
            if let Some(path) = out {
                save_scenario(path, &g.scenario)?;
            }
            let mut r = Report::new("glue");
            r.pass(
                "glued scenario passes validation",
                format!(
                    "{} vertices, {} edges, {} faces, {} 3-cells, {} trajectories",
                    g.scenario.model.vertices,
                    g.scenario.model.edges.len(),
                    g.scenario.model.faces.len(),
                    g.scenario.model.cells3.len(),
                    g.scenario.morse.trajectories.len()
                ),
            );
            Ok(r)
        }
        Command::VerifyGluing { glued } => Ok(verify_gluing(&load_glued(glued)?)),
        Command::Example { name, fiber_dim } => {
            let dir = out.unwrap_or(Path::new("."));
            example(*name, *fiber_dim, cli.seed.unwrap_or(0), dir)
        }
    }
}

fn describe_chain(c: &HomChain) -> String {
    let parts: Vec<String> = c
        .coefficients
        .iter()
        .enumerate()
        .filter(|(_, m)| !m.is_zero())
        .map(|(e, m)| format!("edge {e}: {m}"))
        .collect();
    if parts.is_empty() {
        "zero chain".into()
    } else {
        parts.join("; ")
    }
}

fn homology(s: &crate::scenario::Scenario) -> Result<Report, ScenarioError> {
    let mut r = Report::new("homology");
    let adj = adjoint_system(&s.representation)?;
    for (label, rep) in [("V", &s.representation), ("Hom", &adj)] {
        let cell = homology_dims(&twisted_complex(&s.model, rep)?)?;
        let mc = homology_dims(&morse_complex(&s.model, rep, &s.morse)?.complex)?;
        r.pass(format!("{label}: Betti numbers"), format!("cellular {cell:?}, Morse {mc:?}"));
    }
    r.absorb("", homology_consistency(s)?);
    Ok(r)
}

fn example(name: ExampleName, n: usize, seed: u64, dir: &Path) -> Result<Report, ScenarioError> {
    if n == 0 {
        return Err(ScenarioError::Build("fibre dimension must be positive".into()));
    }
    let (a, b) = default_cylinder_holonomies(n);
    let cylinder = || -> Result<_, ScenarioError> {
        let mut s = crate::scenario::build_torus_cylinder(&a, &b)?;
        s.seed = seed;
        Ok(s)
    };
    let mut r = Report::new("example");
    let written = match name {
        ExampleName::TorusCylinder => save_one(dir, cylinder()?)?,
        ExampleName::TorusCylinderMirror => save_one(dir, cylinder()?.mirrored()?)?,
        ExampleName::Torus3 => {
            let mut s = default_torus3(n)?;
            s.seed = seed;
            save_one(dir, s)?
        }
        ExampleName::DoubleCylinder => save_glued(dir, "double_cylinder", &double(&cylinder()?)?)?,
        ExampleName::DoubleTorus3 => {
            let mut s = default_torus3(n)?;
            s.seed = seed;
            save_glued(dir, "double_torus3", &double(&s)?)?
        }
    };
    r.pass("written", written.display().to_string());
    Ok(r)
}

fn save_one(dir: &Path, s: crate::scenario::Scenario) -> Result<PathBuf, ScenarioError> {
    let path = dir.join(format!("{}.json", s.name));
    save_scenario(&path, &s)?;
    Ok(path)
}
