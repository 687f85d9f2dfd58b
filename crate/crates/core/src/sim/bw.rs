//! Tiled MVM baseline: one `hv x (rv * ru)` tile engine, gates and the
//! `W_x x` / `W_h h` products executed one after another, element-wise work
//! on a separate function unit after each `hv` chunk.

use serde::{Deserialize, Serialize};

use super::{effective_flops, utilization_2d, Activity, Bottleneck, Fraction, ModelKind, Result};
use super::{SimReport, StepBreakdown};
use crate::mapper::{MapError, MappingParams};
use crate::rnn::{flop_count, CellDims, CellKind};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BwConfig {
    pub freq_hz: f64,
    /// Serialized function-unit cycles per `hv` chunk: per-gate `W_x x + W_h h`
    /// adds, bias adds, activations, Hadamard products and the state add.
    pub elem_ops_lstm: u64,
    pub elem_ops_gru: u64,
}

impl Default for BwConfig {
    fn default() -> Self {
        // LSTM: 4 + 4 adds, 3 sigmoid, 2 tanh, 3 products, 1 add.
        // GRU: 2 + 3 adds, 2 sigmoid, 1 tanh, r*(W_hn h), its add, 1 - z,
        // 2 products, 1 add.
        Self {
            freq_hz: 250e6,
            elem_ops_lstm: 17,
            elem_ops_gru: 14,
        }
    }
}

impl BwConfig {
    pub fn elem_ops(&self, kind: CellKind) -> u64 {
        match kind {
            CellKind::Lstm => self.elem_ops_lstm,
            CellKind::Gru => self.elem_ops_gru,
        }
    }
}

/// Tile iterations of one gate's two MVMs.
fn gate_iterations(dims: &CellDims, p: &MappingParams) -> u64 {
    let chunks = dims.h().div_ceil(p.hv) as u64;
    let cols = p.rv * p.ru;
    chunks * (dims.d().div_ceil(cols) + dims.h().div_ceil(cols)) as u64
}

pub fn simulate_bw(dims: &CellDims, p: &MappingParams, cfg: &BwConfig) -> Result<SimReport> {
    p.check()?;
    if !(cfg.freq_hz.is_finite() && cfg.freq_hz > 0.0) {
        return Err(MapError::Params(format!(
            "BW frequency must be positive, got {}",
            cfg.freq_hz
        ))
        .into());
    }
    let g = dims.g() as u64;
    let mvm = g * gate_iterations(dims, p);
    let elem = dims.h().div_ceil(p.hv) as u64 * cfg.elem_ops(dims.kind);
    let step = mvm + elem;
    let cycles = dims.t() as u64 * step;
    let latency_s = cycles as f64 / cfg.freq_hz;
    let flops = flop_count(dims);
    let tile = (p.hv * p.rv * p.ru) as f64;
    Ok(SimReport {
        model: ModelKind::Bw,
        kind: dims.kind,
        h: dims.h(),
        d: dims.d(),
        t: dims.t(),
        params: *p,
        cycles,
        latency_s,
        eff_flops: effective_flops(flops, latency_s)?,
        flops,
        useful_macs: flops / 2,
        utilization: (flops / 2) as f64 / (cycles as f64 * tile),
        bottleneck: Bottleneck::between(mvm, elem),
        step: StepBreakdown {
            dot_issue_cycles: mvm,
            elem_issue_cycles: elem,
            step_cycles: step,
            pipeline_depth_cycles: 0,
        },
        dot_pcus: 0,
        elem_pcus: 0,
        pmus_used: 0,
        weight_bytes: dims.g() * dims.h() * dims.r(),
        oversubscribed: false,
        violations: Vec::new(),
        activity: Activity::default(),
        freq_hz: cfg.freq_hz,
        energy_j: None,
        power_w: None,
    })
}

/// Tile utilization of the gate MVM over the concatenated `H x R` matrix,
/// the operand the loop-based design's 1-D utilization is measured on.
pub fn bw_utilization_2d(dims: &CellDims, p: &MappingParams) -> Fraction {
    utilization_2d(dims.h(), dims.r(), p.hv, p.rv, p.ru)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bw_params() -> MappingParams {
        MappingParams::new(400, 1, 40, 6).unwrap()
    }

    #[test]
    fn lstm_256_sixteen_iterations() {
        let dims = CellDims::lstm(256, 256, 1).unwrap();
        assert_eq!(gate_iterations(&dims, &bw_params()), 4);
        let r = simulate_bw(&dims, &bw_params(), &BwConfig::default()).unwrap();
        assert_eq!(r.step.dot_issue_cycles, 16);
        assert_eq!(r.step.elem_issue_cycles, 17);
    }

    #[test]
    fn perfect_tiling_is_two_per_gate() {
        let dims = CellDims::gru(48, 48, 1).unwrap();
        let p = MappingParams::new(48, 1, 8, 6).unwrap();
        assert_eq!(3 * gate_iterations(&dims, &p), 6);
    }

    #[test]
    fn concatenated_utilization_256() {
        let dims = CellDims::lstm(256, 256, 1).unwrap();
        let u = super::super::to_f64(bw_utilization_2d(&dims, &bw_params()));
        assert!((u - 0.4551).abs() < 1e-4);
    }
}
