//! Cycle cost model for loop-based designs and the tiled MVM baseline.
//!
//! A loop-based step issues `ceil(H / hu)` outer iterations. Each iteration
//! feeds one row per engine through `ceil(R / (rv * ru))` dot-product issues
//! and then hands the row to the element-wise chain, which accepts a new row
//! every `elem_ii` cycles. Iterations therefore start every
//! `S = max(issues, elem_ii)` cycles and a step takes `ceil(H / hu) * S`
//! cycles. Steps are strictly sequential; the pipeline depth is paid once as
//! the drain after the last issue:
//!
//! ```text
//! cycles = T * ceil(H / hu) * S + pipeline_depth
//! ```

mod bw;
mod energy;
mod report;
mod trace;
mod util;

pub use bw::{bw_utilization_2d, simulate_bw, BwConfig};
pub use energy::{calibrate, energy_estimate, EnergyCoeffs};
pub use report::{Activity, Bottleneck, ModelKind, SimReport, StepBreakdown, CSV_HEADER};
pub use trace::{replay, TraceRow, TRACE_CSV_HEADER};
pub use util::{to_f64, utilization_1d, utilization_2d, Fraction};

use thiserror::Error;

use crate::arch::ArchConfig;
use crate::mapper::{validate, MapError, MappedDesign, Violation};
use crate::rnn::{flop_count, CellDims};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("design does not fit: {}", list(.0))]
    Oversubscribed(Vec<Violation>),
    #[error("design was mapped for {design}, simulated with {dims}")]
    Mismatch { design: String, dims: String },
    #[error("latency must be positive, got {0}")]
    Latency(f64),
    #[error("energy coefficients: {0}")]
    Energy(String),
    #[error(transparent)]
    Map(#[from] MapError),
}

fn list(v: &[Violation]) -> String {
    v.iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

pub type Result<T, E = SimError> = std::result::Result<T, E>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SimOptions {
    /// Simulate designs that fail the capacity check; the report is tagged.
    pub allow_oversubscribed: bool,
}

/// Per-step timing terms of a loop-based design.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct LoopTiming {
    pub outer: u64,
    pub issues: u64,
    pub stride: u64,
    pub dot_issue: u64,
    pub elem_issue: u64,
    pub step: u64,
    pub depth: u64,
}

impl LoopTiming {
    pub fn of(design: &MappedDesign) -> Self {
        let outer = design.outer_iterations() as u64;
        let issues = design.issues_per_row() as u64;
        let ii = design.chain.elem_ii as u64;
        Self {
            outer,
            issues,
            stride: issues.max(ii),
            dot_issue: outer * issues,
            elem_issue: outer * ii,
            step: outer * issues.max(ii),
            depth: design.pipeline_depth_cycles as u64,
        }
    }
}

pub fn simulate_loop(
    design: &MappedDesign,
    dims: &CellDims,
    cfg: &ArchConfig,
    opts: SimOptions,
) -> Result<SimReport> {
    if design.kind != Some(dims.kind) || design.h != dims.h() || design.d != dims.d() {
        return Err(SimError::Mismatch {
            design: match design.kind {
                Some(k) => format!("{k} H={} D={}", design.h, design.d),
                None => "an empty design".into(),
            },
            dims: format!("{} H={} D={}", dims.kind, dims.h(), dims.d()),
        });
    }
    let violations = validate(design, cfg);
    if !violations.is_empty() && !opts.allow_oversubscribed {
        return Err(SimError::Oversubscribed(violations));
    }
    let timing = LoopTiming::of(design);
    let t = dims.t() as u64;
    let cycles = t * timing.step + timing.depth;
    let latency_s = cfg.cycles_to_seconds(cycles);
    let flops = flop_count(dims);
    let p = design.params;
    let lanes = (p.hu * dims.g() * p.rv * p.ru) as f64;
    let useful_macs = flops / 2;
    let bottleneck = Bottleneck::between(timing.dot_issue, timing.elem_issue);
    Ok(SimReport {
        model: ModelKind::Loop,
        kind: dims.kind,
        h: dims.h(),
        d: dims.d(),
        t: dims.t(),
        params: p,
        cycles,
        latency_s,
        eff_flops: effective_flops(flops, latency_s)?,
        flops,
        useful_macs: trace::count_useful_macs(design, dims),
        utilization: useful_macs as f64 / (cycles as f64 * lanes),
        bottleneck,
        step: StepBreakdown {
            dot_issue_cycles: timing.dot_issue,
            elem_issue_cycles: timing.elem_issue,
            step_cycles: timing.step,
            pipeline_depth_cycles: timing.depth,
        },
        dot_pcus: design.dot_pcus,
        elem_pcus: design.elem_pcus,
        pmus_used: design.pmus_used,
        weight_bytes: design.weight_bytes,
        oversubscribed: !violations.is_empty(),
        violations,
        activity: trace::closed_form_activity(design, dims),
        freq_hz: cfg.freq_hz,
        energy_j: None,
        power_w: None,
    })
}

/// `flop_count / latency`.
pub fn effective_flops(flops: u64, latency_s: f64) -> Result<f64> {
    if !(latency_s.is_finite() && latency_s > 0.0) {
        return Err(SimError::Latency(latency_s));
    }
    Ok(flops as f64 / latency_s)
}
