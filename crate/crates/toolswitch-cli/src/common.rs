//! Shared plumbing: seed resolution, error-to-exit-code mapping, instance
//! loading, and flag parsers for library enums.

use std::fmt::Display;
use std::path::Path;
use std::process::ExitCode;
use toolswitch::eval::EvaluatorKind;
use toolswitch::io::{parse_instance, parse_instance_as, InstanceFormat};
use toolswitch::solver::Neighborhood;
use toolswitch::Instance;

pub const DEFAULT_SEED: u64 = 1;

/// All failures a subcommand can surface. `Usage` covers bad flags, files,
/// and instance validation; `Mismatch` means `verify` found and already
/// reported a counterexample.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Mismatch,
}

impl CliError {
    pub fn usage(err: impl Display) -> Self {
        CliError::Usage(err.to_string())
    }

    pub fn report(self) -> ExitCode {
        match self {
            CliError::Usage(message) => {
                eprintln!("error: {message}");
                ExitCode::from(2)
            }
            CliError::Mismatch => ExitCode::from(1),
        }
    }
}

/// The --seed flag wins, then a parseable $TOOLSWITCH_SEED, then the
/// default. A set-but-malformed variable is an error, not a silent default.
pub fn resolve_seed(flag: Option<u64>) -> Result<u64, CliError> {
    if let Some(seed) = flag {
        return Ok(seed);
    }
    match std::env::var("TOOLSWITCH_SEED") {
        Ok(text) => text.trim().parse().map_err(|_| {
            CliError::Usage(format!(
                "TOOLSWITCH_SEED={text:?} is not an unsigned integer"
            ))
        }),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

/// Reads and parses an instance file, auto-detecting the format unless one
/// is forced.
pub fn load_instance(path: &Path, format: Option<InstanceFormat>) -> Result<Instance, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|err| CliError::Usage(format!("{}: {err}", path.display())))?;
    let parsed = match format {
        Some(format) => parse_instance_as(&text, format),
        None => parse_instance(&text),
    };
    parsed.map_err(|err| CliError::Usage(format!("{}: {err}", path.display())))
}

pub fn parse_evaluator(name: &str) -> Result<EvaluatorKind, String> {
    EvaluatorKind::from_name(name).ok_or_else(|| {
        format!("unknown evaluator {name:?} (ktns, ktns-bitwise, mpca, mpca-bitwise)")
    })
}

pub fn parse_neighborhood(name: &str) -> Result<Neighborhood, String> {
    Neighborhood::from_name(name).ok_or_else(|| {
        format!("unknown neighborhood {name:?} (adjacent-swap, any-swap, insertion)")
    })
}
