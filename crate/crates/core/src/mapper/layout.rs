//! Weight placement across PMU banks.
//!
//! MapReduce unit `u` of an engine consumes, on issue `k`, columns
//! `k * rv * ru + u * rv .. + rv` of the concatenated `[W_h | W_x]` row, so a
//! unit owns the engine's rows restricted to its column chunks. Units are
//! packed onto consecutive banks in engine-major, gate-minor, unit-minor order,
//! each unit getting enough banks to read `rv` bytes per cycle (4 bytes per
//! bank port) and to hold its bytes. The gate's 32-bit biases live with unit 0.
//! The shared `[h | x]` input buffer follows the weights.

use std::ops::Range;

use serde::Serialize;

use super::{MapError, MappingParams, Result};
use crate::arch::{ArchConfig, PMU_BANKS};
use crate::rnn::CellDims;

const BANK_PORT_BYTES: usize = 4;

/// Weights of one MapReduce unit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WeightBlock {
    pub engine: usize,
    pub gate: usize,
    pub unit: usize,
    pub rows: Range<usize>,
    /// Column chunks of the concatenated matrix, ascending.
    pub cols: Vec<Range<usize>>,
    pub weight_bytes: usize,
    pub bias_bytes: usize,
    pub first_bank: usize,
    pub banks: usize,
}

impl WeightBlock {
    /// PMUs whose banks hold this block.
    pub fn pmus(&self) -> Range<usize> {
        if self.banks == 0 {
            return self.first_bank / PMU_BANKS..self.first_bank / PMU_BANKS;
        }
        self.first_bank / PMU_BANKS..(self.first_bank + self.banks - 1) / PMU_BANKS + 1
    }

    pub fn contains(&self, row: usize, col: usize) -> bool {
        self.rows.contains(&row) && self.cols.iter().any(|c| c.contains(&col))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WeightLayout {
    pub blocks: Vec<WeightBlock>,
    pub input_buffer_first_bank: usize,
    pub input_buffer_banks: usize,
    pub total_banks: usize,
    pub bank_capacity_bytes: usize,
}

impl WeightLayout {
    pub fn pmus_used(&self) -> usize {
        self.total_banks.div_ceil(PMU_BANKS)
    }

    /// Block holding weight `(gate, row, col)` of the concatenated matrix.
    pub fn locate(&self, gate: usize, row: usize, col: usize) -> Option<&WeightBlock> {
        self.blocks
            .iter()
            .find(|b| b.gate == gate && b.contains(row, col))
    }
}

fn unit_columns(r: usize, rv: usize, ru: usize, unit: usize) -> Vec<Range<usize>> {
    let stride = rv * ru;
    (0..r.div_ceil(stride))
        .map(|k| k * stride + unit * rv)
        .filter(|&start| start < r)
        .map(|start| start..(start + rv).min(r))
        .collect()
}

/// Bank plan without capacity checks; used for resource accounting.
pub(crate) fn plan_banks(dims: &CellDims, p: &MappingParams, cfg: &ArchConfig) -> WeightLayout {
    let (h, r, g) = (dims.h(), dims.r(), dims.g());
    let bank_cap = cfg.bank_capacity_bytes().max(1);
    let rows_per_engine = h.div_ceil(p.hu);
    let port_banks = p.rv.div_ceil(BANK_PORT_BYTES);
    let mut next = 0;
    let mut blocks = Vec::with_capacity(p.hu * g * p.ru);
    for engine in 0..p.hu {
        let rows = (engine * rows_per_engine).min(h)..((engine + 1) * rows_per_engine).min(h);
        for gate in 0..g {
            for unit in 0..p.ru {
                let cols = unit_columns(r, p.rv, p.ru, unit);
                let width: usize = cols.iter().map(|c| c.len()).sum();
                let weight_bytes = rows.len() * width;
                let bias_bytes = if unit == 0 { 4 * rows.len() } else { 0 };
                let banks = port_banks.max((weight_bytes + bias_bytes).div_ceil(bank_cap));
                blocks.push(WeightBlock {
                    engine,
                    gate,
                    unit,
                    rows: rows.clone(),
                    cols,
                    weight_bytes,
                    bias_bytes,
                    first_bank: next,
                    banks,
                });
                next += banks;
            }
        }
    }
    // Double-buffered [h | x], one byte per element per buffer.
    let input_buffer_banks = (p.rv * p.ru)
        .div_ceil(BANK_PORT_BYTES)
        .max((2 * r).div_ceil(bank_cap));
    WeightLayout {
        blocks,
        input_buffer_first_bank: next,
        input_buffer_banks,
        total_banks: next + input_buffer_banks,
        bank_capacity_bytes: bank_cap,
    }
}

/// Assigns every weight row-chunk of every gate to PMU banks.
pub fn weight_layout(dims: &CellDims, p: &MappingParams, cfg: &ArchConfig) -> Result<WeightLayout> {
    p.check()?;
    cfg.validate()?;
    let layout = plan_banks(dims, p, cfg);
    let available = cfg.n_pmu * PMU_BANKS;
    if layout.total_banks > available {
        return Err(MapError::Capacity {
            required: layout.total_banks * layout.bank_capacity_bytes,
            available: cfg.total_scratchpad_bytes(),
        });
    }
    Ok(layout)
}
