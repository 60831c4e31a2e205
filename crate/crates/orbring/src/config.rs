use crate::error::AppError;
use orbring_core::combinatorics::{CaseTag, ABELIAN_SURFACE_BETTI};
use orbring_core::ring::{build_ring, OrbifoldRing, ResourceBounds};
use std::path::PathBuf;

pub const DEFAULT_SAMPLES: usize = 10_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Command {
    Build,
    Check { suite: String },
    Multiply { a: String, b: String },
    Poincare,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Build => "build",
            Command::Check { .. } => "check",
            Command::Multiply { .. } => "multiply",
            Command::Poincare => "poincare",
        }
    }
}

/// Everything needed to reproduce one run.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub case: CaseTag,
    pub n: usize,
    pub dt: bool,
    pub command: Command,
    pub output: Option<PathBuf>,
    /// Seed for every sampled property check.
    pub seed: u64,
    /// Number of random triples or pairs drawn by sampled checks.
    pub samples: usize,
    pub bounds: ResourceBounds,
}

impl RunConfig {
    pub fn new(case: CaseTag, n: usize, dt: bool, command: Command) -> Self {
        RunConfig {
            case,
            n,
            dt,
            command,
            output: None,
            seed: 0,
            samples: DEFAULT_SAMPLES,
            bounds: ResourceBounds::default(),
        }
    }

    pub fn validate(&self) -> Result<(), AppError> {
        if self.n == 0 {
            return Err(AppError::Usage(String::from("-n must be at least 1")));
        }
        if self.bounds.max_total_dim == 0 || self.bounds.max_group_pairs == 0 {
            return Err(AppError::Usage(String::from("resource bounds must be positive")));
        }
        Ok(())
    }

    /// Base Betti numbers when they differ from the abelian surface.
    pub fn custom_betti(&self) -> Option<[usize; 5]> {
        match self.case {
            CaseTag::Hilb { betti } if betti != ABELIAN_SURFACE_BETTI => Some(betti),
            _ => None,
        }
    }

    pub fn build_ring(&self) -> Result<OrbifoldRing, AppError> {
        self.validate()?;
        Ok(build_ring(&self.case, self.n, self.dt, &self.bounds)?)
    }
}

/// Parses `b0,b1,b2,b3,b4`.
pub fn parse_betti(s: &str) -> Result<[usize; 5], AppError> {
    let parts: Vec<usize> = s
        .split(',')
        .map(|x| x.trim().parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|_| AppError::Usage(format!("--base-betti expects five integers, got {s:?}")))?;
    parts.try_into().map_err(|_| AppError::Usage(format!("--base-betti expects five integers, got {s:?}")))
}
