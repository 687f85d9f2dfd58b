//! Golden-model checks on a seeded, size-capped instance of a workload.

use serde::Serialize;

use crate::lowprec::{mixed_dot, reference::staged_dot, Float8};
use crate::rnn::{lstm1, random_instance, reference, run_sequence, CellKind, Result};

use super::Workload;

/// Dimension caps for the check instance.
pub const MAX_DIM: usize = 64;
pub const MAX_STEPS: usize = 8;
pub const TOLERANCE: f64 = 1e-12;
const LANES: usize = 16;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GoldenSummary {
    pub name: String,
    pub kind: CellKind,
    pub h: usize,
    pub d: usize,
    pub t: usize,
    pub seed: u64,
    /// Largest |cell - oracle| over all outputs.
    pub max_deviation: f64,
    /// LSTM only: row-wise assembly equal bit for bit to the full cell.
    pub lstm1_identical: Option<bool>,
    pub dot_checks: usize,
    pub dot_mismatches: usize,
    /// Largest |8-bit datapath - f64| gate pre-activation, for information.
    pub max_quantized_error: f64,
    pub pass: bool,
}

fn quantize(v: &[f64], width: usize) -> Vec<Float8> {
    let mut q: Vec<Float8> = v
        .iter()
        .map(|&x| Float8::quantize(x).expect("finite instance"))
        .collect();
    q.resize(q.len().div_ceil(width) * width, Float8::ZERO);
    q
}

pub fn run_golden(w: &Workload, seed: u64) -> Result<GoldenSummary> {
    let (h, d, t) = (w.h.min(MAX_DIM), w.d.min(MAX_DIM), w.t.min(MAX_STEPS));
    let mut inst = random_instance(w.kind, h, d, seed);
    let inputs = inst.inputs(t);
    let weights = &inst.weights;
    let outputs = run_sequence(weights, &inputs, &inst.state)?;

    let mut max_dev: f64 = 0.0;
    let mut lstm1_ok = true;
    let mut dot_checks = 0;
    let mut dot_mismatches = 0;
    let mut max_q: f64 = 0.0;
    let (mut oh, mut oc) = (inst.state.h.clone(), inst.state.c.clone());
    for (x, y) in inputs.iter().zip(&outputs) {
        // 8-bit datapath on this step's operands.
        let z: Vec<f64> = oh.iter().chain(x).copied().collect();
        let zq = quantize(&z, 4 * LANES);
        for g in 0..weights.gates() {
            for row in 0..h {
                let wrow: Vec<f64> = weights.concat_row(g, row).collect();
                let wq = quantize(&wrow, 4 * LANES);
                let fast = mixed_dot(&wq, &zq, LANES).expect("padded operands");
                let slow = staged_dot(&wq, &zq, LANES);
                dot_checks += 1;
                if fast.to_bits() != slow.to_bits() {
                    dot_mismatches += 1;
                }
                let exact: f64 = wrow.iter().zip(&z).map(|(a, b)| a * b).sum();
                max_q = max_q.max((fast as f64 - exact).abs());
            }
        }
        let next_h = match w.kind {
            CellKind::Lstm => {
                let (nh, nc) = reference::lstm_step(weights, x, &oh, &oc);
                let rows: Vec<(f64, f64)> = (0..h)
                    .map(|k| lstm1(weights, x, &oh, oc[k], k))
                    .collect::<Result<_>>()?;
                let cell = crate::rnn::lstm_cell_step(
                    weights,
                    x,
                    &crate::rnn::CellState {
                        h: oh.clone(),
                        c: oc.clone(),
                    },
                )?;
                lstm1_ok &= rows.iter().zip(cell.1.c.iter().zip(&cell.1.h)).all(
                    |(&(c, hh), (&cc, &ch))| {
                        c.to_bits() == cc.to_bits() && hh.to_bits() == ch.to_bits()
                    },
                );
                oc = nc;
                nh
            }
            CellKind::Gru => reference::gru_step(weights, x, &oh),
        };
        for (a, b) in y.iter().zip(&next_h) {
            max_dev = max_dev.max((a - b).abs());
        }
        oh = next_h;
    }
    let lstm1_identical = (w.kind == CellKind::Lstm).then_some(lstm1_ok);
    Ok(GoldenSummary {
        name: w.name.clone(),
        kind: w.kind,
        h,
        d,
        t,
        seed,
        max_deviation: max_dev,
        lstm1_identical,
        dot_checks,
        dot_mismatches,
        max_quantized_error: max_q,
        pass: max_dev <= TOLERANCE && lstm1_ok && dot_mismatches == 0,
    })
}
