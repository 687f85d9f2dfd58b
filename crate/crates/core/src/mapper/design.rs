use std::fmt::Write as _;

use serde::Serialize;

use super::{MapError, MappingParams, Result};
use crate::arch::{reduction_latency, ArchConfig, PMU_BANKS};
use crate::rnn::{CellDims, CellKind};

/// Element-wise chain timing per engine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ChainModel {
    /// Cycles between successive rows entering the chain.
    pub elem_ii: usize,
    /// Stages from dot-product result to `h` element: bias, nonlinearity,
    /// two Hadamard products, add, output.
    pub elem_chain_depth: usize,
}

impl Default for ChainModel {
    fn default() -> Self {
        Self {
            elem_ii: 1,
            elem_chain_depth: 6,
        }
    }
}

/// One MapReduce unit: `width` 8-bit lanes occupying slots
/// `first_slot..first_slot + width` of its gate group's packed PCUs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MapReduceUnit {
    pub index: usize,
    pub width: usize,
    pub first_slot: usize,
}

impl MapReduceUnit {
    /// PCU indices (within the gate group) this unit's lanes touch.
    pub fn pcus(&self, slots_per_pcu: usize) -> std::ops::Range<usize> {
        let first = self.first_slot / slots_per_pcu;
        let last = (self.first_slot + self.width - 1) / slots_per_pcu;
        first..last + 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GateGroup {
    pub gate: usize,
    pub units: Vec<MapReduceUnit>,
    pub dot_pcus: usize,
    pub elem_pcus: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Engine {
    pub index: usize,
    /// Rows of the `H` dimension this engine produces.
    pub rows: std::ops::Range<usize>,
    pub gates: Vec<GateGroup>,
    pub cell_pcus: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BufferKind {
    Register,
    Vector,
}

/// An intermediate value between pipeline units.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Buffer {
    pub name: String,
    pub kind: BufferKind,
    pub elements: usize,
    pub count: usize,
}

/// Hop counts on the critical path under a compact Manhattan placement:
/// each gate group's dot PCUs sit in a `w x w` cluster (`w = ceil(sqrt(n))`)
/// rooted at its first PCU, with the gate PCU and then the cell PCU one hop
/// further each.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct Placement {
    pub reduce_hops: usize,
    pub chain_hops: usize,
}

impl Placement {
    pub fn critical_path_hops(&self) -> usize {
        self.reduce_hops + self.chain_hops
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct MappedDesign {
    pub kind: Option<CellKind>,
    pub h: usize,
    pub d: usize,
    pub params: MappingParams,
    pub chain: ChainModel,
    pub dot_pcus: usize,
    pub elem_pcus: usize,
    pub pmus_used: usize,
    pub banks_used: usize,
    /// 8-bit weights plus 32-bit biases.
    pub weight_bytes: usize,
    pub bias_bytes: usize,
    /// Partial sums merged per gate group: one per (unit, PCU the unit spans).
    pub tree_leaves: usize,
    pub pipeline_depth_cycles: usize,
    pub placement: Placement,
    pub engines: Vec<Engine>,
    pub buffers: Vec<Buffer>,
}

impl MappedDesign {
    pub fn total_pcus(&self) -> usize {
        self.dot_pcus + self.elem_pcus
    }

    pub fn r(&self) -> usize {
        self.h + self.d
    }

    /// Outer-loop iterations per step: `ceil(H / hu)`.
    pub fn outer_iterations(&self) -> usize {
        self.h.div_ceil(self.params.hu)
    }

    /// Dot-product issues per row: `ceil(R / (rv * ru))`.
    pub fn issues_per_row(&self) -> usize {
        self.r().div_ceil(self.params.rv * self.params.ru)
    }

    /// Plain-text rendering: engines, gate groups, MapReduce units and the
    /// element-wise chain.
    pub fn describe(&self) -> String {
        let mut s = String::new();
        let kind = self
            .kind
            .map(|k| k.to_string())
            .unwrap_or_else(|| "empty".into());
        let p = self.params;
        writeln!(
            s,
            "loop-based {kind} design: H={} D={} R={} | hv={} hu={} ru={} rv={}",
            self.h,
            self.d,
            self.r(),
            p.hv,
            p.hu,
            p.ru,
            p.rv
        )
        .unwrap();
        writeln!(
            s,
            "resources: {} dot PCUs + {} element-wise PCUs, {} PMUs ({} banks), {} weight bytes",
            self.dot_pcus, self.elem_pcus, self.pmus_used, self.banks_used, self.weight_bytes
        )
        .unwrap();
        writeln!(
            s,
            "timing: {} outer iterations x {} issues/row, pipeline depth {} cycles ({} hops)",
            self.outer_iterations(),
            self.issues_per_row(),
            self.pipeline_depth_cycles,
            self.placement.critical_path_hops()
        )
        .unwrap();
        let names = self.kind.map(crate::rnn::gate_names).unwrap_or(&[]);
        for e in &self.engines {
            writeln!(
                s,
                "engine {}: rows {}..{} ({} rows)",
                e.index,
                e.rows.start,
                e.rows.end,
                e.rows.len()
            )
            .unwrap();
            for g in &e.gates {
                let act = match (self.kind, g.gate) {
                    (Some(CellKind::Lstm), 1) | (Some(CellKind::Gru), 2) => "tanh",
                    _ => "sigmoid",
                };
                writeln!(
                    s,
                    "  gate {}: {} MapReduce x rv={} on {} PCU(s) -> reduce tree ({} leaves) -> bias + {act}",
                    names.get(g.gate).copied().unwrap_or("?"),
                    g.units.len(),
                    p.rv,
                    g.dot_pcus,
                    self.tree_leaves
                )
                .unwrap();
            }
            let update = match self.kind {
                Some(CellKind::Gru) => "h = (1 - z) * n + z * h",
                _ => "c = f * c + i * j; h = o * tanh(c)",
            };
            writeln!(s, "  element-wise: {update}").unwrap();
        }
        s
    }
}

fn manhattan_radius(n: usize) -> usize {
    if n <= 1 {
        return 0;
    }
    let w = (1..).find(|w| w * w >= n).unwrap();
    (0..n).map(|k| k % w + k / w).max().unwrap()
}

fn ceil_log2(n: usize) -> usize {
    if n <= 1 {
        0
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as usize
    }
}

pub fn map_loop_rnn(dims: &CellDims, p: &MappingParams, cfg: &ArchConfig) -> Result<MappedDesign> {
    map_loop_rnn_with(dims, p, cfg, ChainModel::default())
}

pub fn map_loop_rnn_with(
    dims: &CellDims,
    p: &MappingParams,
    cfg: &ArchConfig,
    chain: ChainModel,
) -> Result<MappedDesign> {
    p.check()?;
    if p.hv != 1 {
        return Err(MapError::VectorizedHidden(p.hv));
    }
    if chain.elem_ii == 0 {
        return Err(MapError::Params("elem_ii must be >= 1".into()));
    }
    let (h, r, g) = (dims.h(), dims.r(), dims.g());
    let slots_per_pcu = 4 * cfg.lanes;
    let group_pcus = (p.rv * p.ru).div_ceil(slots_per_pcu);
    let rows_per_engine = h.div_ceil(p.hu);

    let units: Vec<MapReduceUnit> = (0..p.ru)
        .map(|u| MapReduceUnit {
            index: u,
            width: p.rv,
            first_slot: u * p.rv,
        })
        .collect();
    let tree_leaves = p.ru * p.rv.div_ceil(slots_per_pcu);

    let engines: Vec<Engine> = (0..p.hu)
        .map(|e| {
            let start = (e * rows_per_engine).min(h);
            let end = ((e + 1) * rows_per_engine).min(h);
            Engine {
                index: e,
                rows: start..end,
                gates: (0..g)
                    .map(|gate| GateGroup {
                        gate,
                        units: units.clone(),
                        dot_pcus: group_pcus,
                        elem_pcus: 1,
                    })
                    .collect(),
                cell_pcus: 1,
            }
        })
        .collect();

    let dot_pcus = p.hu * g * group_pcus;
    let elem_pcus = p.hu * (g + 1);
    let bias_bytes = g * h * 4;
    let weight_bytes = g * h * r + bias_bytes;

    let layout = super::layout::plan_banks(dims, p, cfg);
    let placement = Placement {
        reduce_hops: manhattan_radius(group_pcus),
        chain_hops: 2,
    };
    let pipeline_depth_cycles = reduction_latency(cfg.lanes)?
        + ceil_log2(tree_leaves)
        + chain.elem_chain_depth
        + placement.critical_path_hops() * cfg.hop_latency_cycles;

    let mut buffers = vec![
        Buffer {
            name: "partial sum".into(),
            kind: BufferKind::Register,
            elements: 1,
            count: p.hu * g * p.ru,
        },
        Buffer {
            name: "gate pre-activation".into(),
            kind: BufferKind::Register,
            elements: 1,
            count: p.hu * g,
        },
        Buffer {
            name: "gate activation".into(),
            kind: BufferKind::Register,
            elements: 1,
            count: p.hu * g,
        },
        Buffer {
            name: "h element".into(),
            kind: BufferKind::Register,
            elements: 1,
            count: p.hu,
        },
    ];
    if dims.kind == CellKind::Lstm {
        buffers.push(Buffer {
            name: "c element".into(),
            kind: BufferKind::Register,
            elements: 1,
            count: p.hu,
        });
    }

    Ok(MappedDesign {
        kind: Some(dims.kind),
        h,
        d: dims.d(),
        params: *p,
        chain,
        dot_pcus,
        elem_pcus,
        pmus_used: layout.total_banks.div_ceil(PMU_BANKS),
        banks_used: layout.total_banks,
        weight_bytes,
        bias_bytes,
        tree_leaves,
        pipeline_depth_cycles,
        placement,
        engines,
        buffers,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Resource {
    Pcu,
    Pmu,
    Scratchpad,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub resource: Resource,
    pub required: usize,
    pub available: usize,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let what = match self.resource {
            Resource::Pcu => "PCUs",
            Resource::Pmu => "PMUs",
            Resource::Scratchpad => "scratchpad bytes",
        };
        write!(f, "{what}: need {}, have {}", self.required, self.available)
    }
}

/// Every resource the design over-uses; empty when it fits.
pub fn validate(d: &MappedDesign, cfg: &ArchConfig) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut check = |resource, required, available| {
        if required > available {
            out.push(Violation {
                resource,
                required,
                available,
            });
        }
    };
    check(Resource::Pcu, d.total_pcus(), cfg.n_pcu);
    check(Resource::Pmu, d.pmus_used, cfg.n_pmu);
    check(
        Resource::Scratchpad,
        d.weight_bytes,
        cfg.total_scratchpad_bytes(),
    );
    out
}
