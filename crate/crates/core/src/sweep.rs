//! Grid sweeps: sample instances per grid cell and verify a set of bounds.

use std::path::PathBuf;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::BoundId;
use crate::error::{Error, Result};
use crate::verify::{verify_instance, Summary, Tolerance, Verification, VerificationRecord};
use crate::zeros::{
    derive_seed, sample_instance, DistinguishedZero, Regime, SampledInstance, SamplingOptions, ZeroPattern,
    DEFAULT_LOWER_CAP,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub regime: Regime,
    pub n: Vec<usize>,
    /// Multiplicity lists `[t_0, t_1, ...]` of the distinguished zeros.
    pub mults: Vec<Vec<usize>>,
    pub mu: Vec<usize>,
    pub k: Vec<f64>,
    pub alpha: Vec<Complex64>,
    pub instances_per_cell: usize,
    pub base_seed: u64,
    pub bound_ids: Vec<BoundId>,
    pub tol: Tolerance,
    pub output_path: Option<PathBuf>,
    pub format: OutputFormat,
}

/// One grid cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub n: usize,
    pub mults: Vec<usize>,
    pub mu: usize,
    pub k: f64,
}

impl Cell {
    pub fn label(&self) -> String {
        let t = if self.mults.is_empty() {
            "0".to_string()
        } else {
            self.mults.iter().map(|t| t.to_string()).collect::<Vec<_>>().join("_")
        };
        format!("n{:02}-t{}-mu{}-k{}", self.n, t, self.mu, self.k)
    }

    /// A pattern with this cell's shape; the zeros are placeholders that
    /// [`sample_instance`] redraws.
    pub fn pattern(&self, regime: Regime) -> Result<ZeroPattern> {
        let placeholder = match regime {
            Regime::Upper => 0.5,
            Regime::Lower => (self.k + DEFAULT_LOWER_CAP) / 2.0,
        };
        let zeros = self.mults.iter().map(|&t| DistinguishedZero::new(Complex64::new(placeholder, 0.0), t)).collect();
        let pattern = ZeroPattern::new(self.n, self.k, regime, self.mu, zeros)?;
        if pattern.base_degree() % self.mu != 0 {
            return Err(Error::Infeasible(format!(
                "base degree {} is not a multiple of mu = {}",
                pattern.base_degree(),
                self.mu
            )));
        }
        Ok(pattern)
    }
}

/// A cell, instance or (instance, bound, alpha) combination that produced no record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Skipped {
    pub id: String,
    pub bound_id: Option<BoundId>,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepOutput {
    pub verifications: Vec<Verification>,
    pub skipped: Vec<Skipped>,
    pub summary: Summary,
}

impl SweepOutput {
    pub fn records(&self) -> Vec<VerificationRecord> {
        self.verifications.iter().map(|v| v.record.clone()).collect()
    }

    /// Sorts by `(instance_id, bound_id, alpha)` and recomputes the summary.
    pub fn from_parts(mut verifications: Vec<Verification>, mut skipped: Vec<Skipped>) -> Self {
        verifications.sort_by(|a, b| {
            let (a, b) = (&a.record, &b.record);
            a.instance_id
                .cmp(&b.instance_id)
                .then(a.bound_id.cmp(&b.bound_id))
                .then(a.alpha.re.total_cmp(&b.alpha.re))
                .then(a.alpha.im.total_cmp(&b.alpha.im))
        });
        skipped.sort_by(|a, b| a.id.cmp(&b.id).then(a.bound_id.cmp(&b.bound_id)).then(a.reason.cmp(&b.reason)));
        let mut summary = Summary::from_verifications(&verifications);
        summary.skipped = skipped.len();
        Self { verifications, skipped, summary }
    }
}

/// Verifies every bound at every alpha on one sampled instance.
pub fn verify_sampled(
    instance_id: &str,
    inst: &SampledInstance,
    alphas: &[Complex64],
    bound_ids: &[BoundId],
    tol: Tolerance,
) -> (Vec<Verification>, Vec<Skipped>) {
    let mut done = Vec::new();
    let mut skipped = Vec::new();
    for &bound_id in bound_ids {
        let alpha_list: &[Complex64] = if bound_id.is_polar() { alphas } else { &alphas[..alphas.len().min(1)] };
        for &alpha in alpha_list {
            match verify_instance(instance_id, &inst.polynomial, &inst.pattern, alpha, bound_id, tol) {
                Ok(v) => done.push(v),
                Err(e) => skipped.push(Skipped {
                    id: format!("{instance_id}@{alpha}"),
                    bound_id: Some(bound_id),
                    reason: e.to_string(),
                }),
            }
        }
    }
    (done, skipped)
}

impl SweepConfig {
    pub fn cells(&self) -> Vec<Cell> {
        let mut cells = Vec::new();
        for &n in &self.n {
            for mults in &self.mults {
                for &mu in &self.mu {
                    for &k in &self.k {
                        cells.push(Cell { n, mults: mults.clone(), mu, k });
                    }
                }
            }
        }
        cells
    }

    pub fn run(&self) -> Result<SweepOutput> {
        if self.alpha.is_empty() {
            return Err(Error::InvalidParameter("sweep needs at least one alpha".into()));
        }
        if self.bound_ids.is_empty() {
            return Err(Error::InvalidParameter("sweep needs at least one bound".into()));
        }
        let cells = self.cells();
        let mut skipped = Vec::new();
        let mut jobs = Vec::new();
        for (ci, cell) in cells.iter().enumerate() {
            match cell.pattern(self.regime) {
                Ok(pattern) => {
                    for i in 0..self.instances_per_cell {
                        jobs.push((ci, cell, pattern.clone(), i));
                    }
                }
                Err(e) => skipped.push(Skipped { id: cell.label(), bound_id: None, reason: e.to_string() }),
            }
        }
        let results: Vec<(Vec<Verification>, Vec<Skipped>)> = jobs
            .into_par_iter()
            .map(|(ci, cell, pattern, i)| {
                let id = format!("{}-{i:05}", cell.label());
                let seed = derive_seed(derive_seed(self.base_seed, ci as u64), i as u64);
                match sample_instance(&pattern, seed, SamplingOptions::default()) {
                    Ok(inst) => verify_sampled(&id, &inst, &self.alpha, &self.bound_ids, self.tol),
                    Err(e) => (vec![], vec![Skipped { id, bound_id: None, reason: e.to_string() }]),
                }
            })
            .collect();
        let mut verifications = Vec::new();
        for (v, s) in results {
            verifications.extend(v);
            skipped.extend(s);
        }
        Ok(SweepOutput::from_parts(verifications, skipped))
    }
}
