use std::io::Write;
use std::path::{Path, PathBuf};

use arrcoh_core::arrangement::{self, IntersectionPoset};
use arrcoh_core::decomposition::{DeconeChoice, Decomposer};
use arrcoh_core::{chambers, invariants, nerve, verify, Caps};
use clap::{Parser, ValueEnum};

use crate::io::load_arrangement;
use crate::report::{
    to_json, BetaReport, ChambersReport, DecompositionReport, InvariantsReport, NerveReport, PosetReport,
    VerifyReport,
};

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Intersection poset with rank, centrality and essentiality.
    Poset,
    /// Möbius function, characteristic and Poincaré polynomials.
    Invariants,
    /// beta(A ∩ G) for every flat, with the nerve oracle alongside.
    Beta,
    /// Integer homology of the nerve of the singular set.
    Nerve,
    /// Chambers of the real arrangement.
    Chambers,
    /// Graded decomposition of H^*(M(A); Zπ).
    Decompose,
    /// Every cross-check; takes a file or a directory of `.json` files.
    Verify,
}

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

/// Cohomology of hyperplane arrangement complements with group ring
/// coefficients.
#[derive(Clone, Debug, Parser)]
#[command(name = "arrcoh", version)]
pub struct RunConfig {
    #[arg(value_enum)]
    pub command: Command,
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u32).range(1..))]
    pub max_hyperplanes: u32,
    /// Largest arrangement handed to the nerve and chamber oracles.
    #[arg(long, default_value_t = 12, value_parser = clap::value_parser!(u32).range(1..))]
    pub max_nerve_size: u32,
}

impl RunConfig {
    pub fn new(command: Command, input: impl Into<PathBuf>, format: Format) -> Self {
        RunConfig {
            command,
            input: input.into(),
            format,
            max_hyperplanes: 20,
            max_nerve_size: 12,
        }
    }

    pub fn caps(&self) -> Caps {
        Caps {
            max_hyperplanes: self.max_hyperplanes as usize,
            max_oracle_hyperplanes: self.max_nerve_size as usize,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid input: {0}")]
    Schema(#[source] serde_json::Error),
    #[error(transparent)]
    Core(#[from] arrcoh_core::Error),
    #[error("cannot write report: {0}")]
    Output(#[from] std::io::Error),
}

impl CliError {
    /// 1 for bad input, 2 for exceeded caps, 3 for internal inconsistency.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } | CliError::Schema(_) | CliError::Output(_) => 1,
            CliError::Core(arrcoh_core::Error::Input(_)) => 1,
            CliError::Core(arrcoh_core::Error::Resource { .. }) => 2,
            CliError::Core(arrcoh_core::Error::Internal(_)) => 3,
        }
    }
}

/// Runs one command, writing its report to `out`. Returns the exit code:
/// 0 on success, 3 when `verify` reports a failed check.
pub fn run(cfg: &RunConfig, out: &mut dyn Write) -> Result<i32, CliError> {
    let caps = cfg.caps();
    if cfg.command == Command::Verify {
        return run_verify(cfg, caps, out);
    }
    let a = load_arrangement(&cfg.input)?;
    let p = IntersectionPoset::build(&a, caps.max_hyperplanes)?;
    let json = cfg.format == Format::Json;
    let text = match cfg.command {
        Command::Poset => {
            let r = PosetReport::new(&p);
            if json {
                to_json(&r)
            } else {
                r.text(&p)
            }
        }
        Command::Invariants => {
            let r = InvariantsReport::new(&p)?;
            if json {
                to_json(&r)
            } else {
                r.text()
            }
        }
        Command::Beta => {
            let betas = invariants::all_betas(&p)?;
            let nerve_values = p
                .ids()
                .map(|g| {
                    let restricted = arrangement::restriction_to(&a, &p, g)?;
                    if restricted.arrangement.len() > caps.max_oracle_hyperplanes {
                        return Ok(None);
                    }
                    nerve::beta_by_nerve(&restricted.arrangement, caps.max_oracle_hyperplanes).map(Some)
                })
                .collect::<arrcoh_core::Result<Vec<_>>>()?;
            let r = BetaReport::new(&p, &betas, &nerve_values);
            if json {
                to_json(&r)
            } else {
                r.text(&p)
            }
        }
        Command::Nerve => {
            let w = nerve::sigma_wedge_check(&p, caps.max_oracle_hyperplanes)?;
            let r = NerveReport::new(&w);
            if json {
                to_json(&r)
            } else {
                r.text()
            }
        }
        Command::Chambers => {
            let r = ChambersReport::new(&chambers::enumerate_chambers(&a, caps.max_oracle_hyperplanes)?);
            if json {
                to_json(&r)
            } else {
                r.text()
            }
        }
        Command::Decompose => {
            let d = Decomposer::new(caps, DeconeChoice::First).decompose_with_poset(&a, &p)?;
            if json {
                to_json(&DecompositionReport::new(&d))
            } else {
                DecompositionReport::text(&d, &a)
            }
        }
        Command::Verify => unreachable!("handled above"),
    };
    out.write_all(text.as_bytes())?;
    Ok(0)
}

fn verify_inputs(path: &Path) -> Result<Vec<PathBuf>, CliError> {
    if !path.is_dir() {
        return Ok(vec![path.to_path_buf()]);
    }
    let io_err = |source| CliError::Io {
        path: path.display().to_string(),
        source,
    };
    let mut files = Vec::new();
    for entry in std::fs::read_dir(path).map_err(io_err)? {
        let p = entry.map_err(io_err)?.path();
        if p.extension().is_some_and(|e| e == "json") {
            files.push(p);
        }
    }
    files.sort();
    Ok(files)
}

fn run_verify(cfg: &RunConfig, caps: Caps, out: &mut dyn Write) -> Result<i32, CliError> {
    let mut reports = Vec::new();
    for file in verify_inputs(&cfg.input)? {
        let a = load_arrangement(&file)?;
        let results = verify::run_checks(&a, caps)?;
        let name = file.file_name().map_or_else(|| file.display().to_string(), |n| n.to_string_lossy().into_owned());
        reports.push(VerifyReport::new(&name, &results));
    }
    let failed = reports.iter().any(|r| !r.passed);
    match cfg.format {
        Format::Json => out.write_all(to_json(&reports).as_bytes())?,
        Format::Text => {
            for r in &reports {
                out.write_all(r.text().as_bytes())?;
            }
            let total: usize = reports.iter().map(|r| r.checks.len()).sum();
            let fails: usize = reports
                .iter()
                .flat_map(|r| &r.checks)
                .filter(|c| c.status == "FAIL")
                .count();
            writeln!(out, "{} arrangements, {total} checks, {fails} failed", reports.len())?;
        }
    }
    Ok(if failed { 3 } else { 0 })
}
