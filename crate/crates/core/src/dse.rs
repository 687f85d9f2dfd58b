//! Exhaustive search over loop-based mapping parameters.
//!
//! Candidates: `hu` ranges over divisors of `H` and powers of two up to
//! `min(H, 8)`, `ru` over powers of two up to `ceil(R / rv)`, `rv` is one
//! PCU's worth of 8-bit lanes (`4 * lanes`), `hv = 1`. Each candidate is
//! mapped and validated, then simulated. The best candidate minimizes latency,
//! then PCU count, then the parameter tuple.

use std::cmp::Ordering;

use thiserror::Error;

use crate::arch::ArchConfig;
use crate::mapper::{map_loop_rnn_with, validate, ChainModel, MapError, MappingParams, Resource};
use crate::rnn::CellDims;
use crate::sim::{simulate_loop, SimError, SimOptions, SimReport};

/// Cap on `hu` candidates.
pub const MAX_HU: usize = 8;
/// Frontier width relative to the best latency.
pub const FRONTIER_SLACK: f64 = 0.05;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DseError {
    #[error("the search space is empty")]
    EmptySpace,
    #[error("no candidate fits the architecture")]
    NoValidCandidate,
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Sim(#[from] SimError),
}

pub type Result<T, E = DseError> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq)]
pub struct SearchSpace {
    pub hu: Vec<usize>,
    pub ru: Vec<usize>,
    pub rv: Vec<usize>,
    pub chain: ChainModel,
    /// Accept designs whose weights overflow the scratchpads (PMU count and
    /// capacity). PCU limits still apply.
    pub allow_oversubscribed: bool,
}

fn powers_of_two_upto(n: usize) -> Vec<usize> {
    std::iter::successors(Some(1usize), |p| p.checked_mul(2))
        .take_while(|&p| p <= n.max(1))
        .collect()
}

impl SearchSpace {
    pub fn default_for(dims: &CellDims, cfg: &ArchConfig) -> Self {
        let h = dims.h();
        let rv = 4 * cfg.lanes;
        let hu = (1..=h.min(MAX_HU))
            .filter(|&d| h.is_multiple_of(d) || d.is_power_of_two())
            .collect();
        Self {
            hu,
            ru: powers_of_two_upto(dims.r().div_ceil(rv)),
            rv: vec![rv],
            chain: ChainModel::default(),
            allow_oversubscribed: false,
        }
    }

    pub fn single(p: MappingParams) -> Self {
        Self {
            hu: vec![p.hu],
            ru: vec![p.ru],
            rv: vec![p.rv],
            chain: ChainModel::default(),
            allow_oversubscribed: false,
        }
    }

    /// Sorted, deduplicated cross product.
    pub fn candidates(&self) -> Vec<MappingParams> {
        let mut out: Vec<MappingParams> = self
            .hu
            .iter()
            .flat_map(|&hu| {
                self.ru.iter().flat_map(move |&ru| {
                    self.rv
                        .iter()
                        .filter_map(move |&rv| MappingParams::loop_based(hu, ru, rv).ok())
                })
            })
            .collect();
        out.sort();
        out.dedup();
        out
    }
}

/// The default candidate set for `dims` on `cfg`.
pub fn enumerate_candidates(dims: &CellDims, cfg: &ArchConfig) -> Result<Vec<MappingParams>> {
    cfg.validate().map_err(MapError::from)?;
    let c = SearchSpace::default_for(dims, cfg).candidates();
    if c.is_empty() {
        return Err(DseError::EmptySpace);
    }
    Ok(c)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DseResult {
    pub best: MappingParams,
    pub report: SimReport,
    /// Valid candidates within [`FRONTIER_SLACK`] of the best, best first.
    pub frontier: Vec<SimReport>,
    /// Number of candidates that passed validation.
    pub valid: usize,
    pub enumerated: usize,
}

fn rank(a: &SimReport, b: &SimReport) -> Ordering {
    a.cycles
        .cmp(&b.cycles)
        .then((a.dot_pcus + a.elem_pcus).cmp(&(b.dot_pcus + b.elem_pcus)))
        .then(a.params.cmp(&b.params))
}

/// Maps, validates and simulates one candidate; `None` when it does not fit.
pub fn evaluate(
    dims: &CellDims,
    cfg: &ArchConfig,
    space: &SearchSpace,
    p: &MappingParams,
) -> Result<Option<SimReport>> {
    let design = map_loop_rnn_with(dims, p, cfg, space.chain)?;
    let violations = validate(&design, cfg);
    let fits = violations
        .iter()
        .all(|v| space.allow_oversubscribed && v.resource != Resource::Pcu);
    if !fits {
        return Ok(None);
    }
    let opts = SimOptions {
        allow_oversubscribed: space.allow_oversubscribed,
    };
    Ok(Some(simulate_loop(&design, dims, cfg, opts)?))
}

pub fn search(dims: &CellDims, cfg: &ArchConfig, space: &SearchSpace) -> Result<DseResult> {
    let candidates = space.candidates();
    if candidates.is_empty() {
        return Err(DseError::EmptySpace);
    }
    let mut reports = Vec::new();
    for p in &candidates {
        if let Some(r) = evaluate(dims, cfg, space, p)? {
            reports.push(r);
        }
    }
    reports.sort_by(rank);
    let best = reports.first().cloned().ok_or(DseError::NoValidCandidate)?;
    // Same clock for every candidate, so cycles order latency exactly.
    let limit = best.latency_s * (1.0 + FRONTIER_SLACK);
    let frontier = reports
        .iter()
        .filter(|r| r.latency_s <= limit)
        .cloned()
        .collect();
    Ok(DseResult {
        best: best.params,
        valid: reports.len(),
        enumerated: candidates.len(),
        report: best,
        frontier,
    })
}
