//! JSON documents written by the CLI.
//!
//! Basis indices in `structure_constants` are global: the sectors are laid
//! out in the order of `sectors`, each occupying `Σ betti` consecutive
//! indices, components in label order within a sector.

use crate::config::RunConfig;
use crate::error::AppError;
use orbring_core::combinatorics::age;
use orbring_core::linalg::Rational;
use orbring_core::ring::{CheckOutcome, InvariantSubring, OrbifoldRing, ProductTable};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

pub const SCHEMA_VERSION: u32 = 1;
pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Header {
    pub case: String,
    pub n: usize,
    pub dt: bool,
    pub engine_version: String,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_betti: Option<[usize; 5]>,
}

impl Header {
    pub fn from_config(cfg: &RunConfig) -> Self {
        Header {
            case: cfg.case.name().to_string(),
            n: cfg.n,
            dt: cfg.dt,
            engine_version: ENGINE_VERSION.to_string(),
            seed: cfg.seed,
            base_betti: cfg.custom_betti(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub status: Status,
    pub details: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

impl CheckRecord {
    pub fn pass(name: &str, details: String) -> Self {
        CheckRecord { name: name.to_string(), status: Status::Pass, details, counterexample: None }
    }

    pub fn fail(name: &str, details: String, counterexample: Option<String>) -> Self {
        CheckRecord { name: name.to_string(), status: Status::Fail, details, counterexample }
    }

    pub fn skipped(name: &str, details: String) -> Self {
        CheckRecord { name: name.to_string(), status: Status::Skipped, details, counterexample: None }
    }

    /// Pass or fail on two values that must agree.
    pub fn compare<T: PartialEq + std::fmt::Display>(name: &str, what: &str, engine: T, oracle: T) -> Self {
        let details = format!("{what}: engine {engine}, oracle {oracle}");
        if engine == oracle {
            Self::pass(name, details)
        } else {
            Self::fail(name, details, None)
        }
    }

    pub fn from_outcome(name: &str, scope: &str, o: &CheckOutcome) -> Self {
        let details = format!("{scope}: {} checked, {} nontrivial", o.checked, o.nontrivial);
        match &o.failure {
            None => Self::pass(name, details),
            Some(f) => Self::fail(name, details, Some(f.clone())),
        }
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SectorEntry {
    /// Cycle notation on letters `1..`.
    pub g: String,
    /// Orbit sizes of `g`, descending.
    pub partition: Vec<usize>,
    pub age: usize,
    pub component_count: usize,
    /// Betti numbers of the whole fixed locus, before the age shift.
    pub betti: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureConstant {
    pub g: String,
    pub h: String,
    pub i: usize,
    pub j: usize,
    pub target_basis: usize,
    /// Exact `"p/q"`.
    pub coeff: String,
}

/// Parsed structure constants: `(i, j)` to the terms of `e_i ⋆ e_j`.
pub type ProductMap = BTreeMap<(usize, usize), Vec<(usize, Rational)>>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingDocument {
    pub schema: u32,
    pub header: Header,
    pub sectors: Vec<SectorEntry>,
    pub poincare_total: Vec<u64>,
    pub poincare_invariants: Vec<u64>,
    pub structure_constants: Vec<StructureConstant>,
    pub checks: Vec<CheckRecord>,
}

/// Coefficients of degrees `0..=top`.
fn padded(coeffs: &[u64], top: usize) -> Vec<u64> {
    (0..=top).map(|k| coeffs.get(k).copied().unwrap_or(0)).collect()
}

impl RingDocument {
    pub fn new(
        cfg: &RunConfig,
        ring: &OrbifoldRing,
        inv: &InvariantSubring,
        table: Option<&ProductTable>,
        checks: Vec<CheckRecord>,
    ) -> Self {
        let top = ring.top_degree();
        let sectors = ring
            .sectors()
            .iter()
            .map(|s| SectorEntry {
                g: s.g.to_cycle_string(),
                partition: s.orbits().shape().parts().to_vec(),
                age: age(&s.g, &cfg.case),
                component_count: s.component_count(),
                betti: s.betti(),
            })
            .collect();
        let structure_constants = table
            .map(|t| {
                t.structure_constants()
                    .map(|(i, j, k, c)| StructureConstant {
                        g: ring.elements()[ring.basis_ref(i).sector].to_cycle_string(),
                        h: ring.elements()[ring.basis_ref(j).sector].to_cycle_string(),
                        i,
                        j,
                        target_basis: k,
                        coeff: c.to_fraction_string(),
                    })
                    .collect()
            })
            .unwrap_or_default();
        RingDocument {
            schema: SCHEMA_VERSION,
            header: Header::from_config(cfg),
            sectors,
            poincare_total: padded(ring.poincare_total().coeffs(), top),
            poincare_invariants: padded(inv.poincare().coeffs(), top),
            structure_constants,
            checks,
        }
    }

    pub fn from_json(s: &str) -> Result<Self, AppError> {
        let doc: RingDocument = serde_json::from_str(s)?;
        if doc.schema != SCHEMA_VERSION {
            return Err(AppError::Usage(format!("unsupported schema {}", doc.schema)));
        }
        Ok(doc)
    }

    /// Structure constants keyed by `(i, j)`, coefficients parsed exactly.
    pub fn product_map(&self) -> Result<ProductMap, AppError> {
        let mut out = ProductMap::new();
        for sc in &self.structure_constants {
            let c: Rational =
                sc.coeff.parse().map_err(|_| AppError::Usage(format!("coefficient {:?} is not p/q", sc.coeff)))?;
            out.entry((sc.i, sc.j)).or_default().push((sc.target_basis, c));
        }
        Ok(out)
    }
}

/// Output of `check`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub schema: u32,
    pub header: Header,
    pub suite: String,
    pub samples: usize,
    pub checks: Vec<CheckRecord>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckRecord::passed)
    }
}
