//! Activity of a loop-based run, both in closed form and by replaying the
//! schedule cycle by cycle.
//!
//! Schedule: in step `s`, outer iteration `i` starts at `s*M + i*S` and issues
//! for `I` cycles on every engine that still has a row `i`. The row enters its
//! engine's element-wise chain `depth - chain_depth` cycles after its last
//! issue and occupies the chain's `G + 1` PCUs for `chain_depth` cycles. Each
//! issue moves one partial sum per gate group across the reduction hops; each
//! row moves `G` gate values across the chain hops.

use serde::Serialize;

use super::{Activity, LoopTiming};
use crate::mapper::MappedDesign;
use crate::rnn::CellDims;

/// Column order of [`TraceRow::csv_row`].
pub const TRACE_CSV_HEADER: &str = "cycle,step,dot_pcus_active,elem_pcus_active,pmu_reads,hops";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TraceRow {
    pub cycle: u64,
    pub step: u64,
    pub dot_pcus_active: u64,
    pub elem_pcus_active: u64,
    pub pmu_reads: u64,
    pub hops: u64,
}

impl TraceRow {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.cycle,
            self.step,
            self.dot_pcus_active,
            self.elem_pcus_active,
            self.pmu_reads,
            self.hops
        )
    }
}

/// Lanes of unit `u` that carry data on issue `k`.
fn unit_width(r: usize, rv: usize, ru: usize, u: usize, k: usize) -> usize {
    let start = k * rv * ru + u * rv;
    r.saturating_sub(start).min(rv)
}

/// Bank reads per gate group on each issue (4 bytes per bank read).
fn reads_per_issue(design: &MappedDesign) -> Vec<u64> {
    let p = design.params;
    (0..design.issues_per_row())
        .map(|k| {
            (0..p.ru)
                .map(|u| unit_width(design.r(), p.rv, p.ru, u, k).div_ceil(4) as u64)
                .sum()
        })
        .collect()
}

fn gates(design: &MappedDesign) -> u64 {
    design.engines.first().map_or(0, |e| e.gates.len()) as u64
}

fn group_pcus(design: &MappedDesign) -> u64 {
    design
        .engines
        .first()
        .and_then(|e| e.gates.first())
        .map_or(0, |g| g.dot_pcus) as u64
}

/// Multiplies with a live weight, summed over every issue of every row.
pub(crate) fn count_useful_macs(design: &MappedDesign, dims: &CellDims) -> u64 {
    let p = design.params;
    let per_row: u64 = (0..design.issues_per_row())
        .flat_map(|k| (0..p.ru).map(move |u| (u, k)))
        .map(|(u, k)| unit_width(design.r(), p.rv, p.ru, u, k) as u64)
        .sum();
    let rows: u64 = design.engines.iter().map(|e| e.rows.len() as u64).sum();
    rows * per_row * gates(design) * dims.t() as u64
}

pub(crate) fn closed_form_activity(design: &MappedDesign, dims: &CellDims) -> Activity {
    let tm = LoopTiming::of(design);
    let t = dims.t() as u64;
    let g = gates(design);
    let h = design.h as u64;
    let chain = design.chain.elem_chain_depth as u64;
    let reads: u64 = reads_per_issue(design).iter().sum();
    let occupancy: u64 = design
        .engines
        .iter()
        .map(|e| e.rows.len() as u64)
        .filter(|&n| n > 0)
        .map(|n| {
            t * (n - 1) * tm.stride.min(chain)
                + (t - 1) * (tm.step - (n - 1) * tm.stride).min(chain)
                + chain
        })
        .sum();
    Activity {
        dot_pcu_cycles: t * h * tm.issues * g * group_pcus(design),
        elem_pcu_cycles: (g + 1) * occupancy,
        pmu_reads: t * h * g * reads,
        hops: t
            * h
            * g
            * (tm.issues * design.placement.reduce_hops as u64
                + design.placement.chain_hops as u64),
    }
}

/// Replays a run cycle by cycle, calling `sink` once per cycle, and returns
/// the summed activity. Emits exactly `T * step + depth` rows.
pub fn replay(design: &MappedDesign, dims: &CellDims, mut sink: impl FnMut(&TraceRow)) -> Activity {
    let tm = LoopTiming::of(design);
    let t = dims.t() as u64;
    let g = gates(design);
    let gp = group_pcus(design);
    let chain = design.chain.elem_chain_depth as u64;
    let reads = reads_per_issue(design);
    let reduce_hops = design.placement.reduce_hops as u64;
    let chain_hops = design.placement.chain_hops as u64;
    let total = t * tm.step + tm.depth;
    let entry_lag = tm.issues + tm.depth - chain;

    // Engines grouped by row count: (rows, engines).
    let mut groups: Vec<(u64, u64)> = Vec::new();
    for e in &design.engines {
        let n = e.rows.len() as u64;
        match groups.iter_mut().find(|(rows, _)| *rows == n) {
            Some(gr) => gr.1 += 1,
            None => groups.push((n, 1)),
        }
    }
    let active = |i: u64| -> u64 { groups.iter().filter(|(n, _)| *n > i).map(|(_, c)| c).sum() };

    let mut sum = Activity::default();
    for c in 0..total {
        let mut row = TraceRow {
            cycle: c,
            step: (c / tm.step.max(1)).min(t - 1),
            dot_pcus_active: 0,
            elem_pcus_active: 0,
            pmu_reads: 0,
            hops: 0,
        };
        if c < t * tm.step {
            let off = c % tm.step;
            let (i, q) = (off / tm.stride, off % tm.stride);
            if q < tm.issues {
                let a = active(i);
                row.dot_pcus_active = a * g * gp;
                row.pmu_reads = a * g * reads[q as usize];
                row.hops += a * g * reduce_hops;
            }
        }
        if let Some(x) = c.checked_sub(entry_lag) {
            for &(n, count) in &groups {
                if n == 0 {
                    continue;
                }
                let (mut s, off) = (x / tm.step, x % tm.step);
                let mut i = (off / tm.stride).min(n - 1);
                if s >= t {
                    s = t - 1;
                    i = n - 1;
                }
                let start = s * tm.step + i * tm.stride;
                if start + chain > x {
                    row.elem_pcus_active += count * (g + 1);
                    if start == x {
                        row.hops += count * g * chain_hops;
                    }
                }
            }
        }
        sum.dot_pcu_cycles += row.dot_pcus_active;
        sum.elem_pcu_cycles += row.elem_pcus_active;
        sum.pmu_reads += row.pmu_reads;
        sum.hops += row.hops;
        sink(&row);
    }
    sum
}
