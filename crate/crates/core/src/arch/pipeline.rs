//! PCU pipeline model.
//!
//! A low-precision map-reduce on a PCU runs as a two-cycle fused prefix
//! (8-bit multiply + rearrange/pad, then 16-bit pairwise add + rearrange/pad
//! down to one `f32` per lane) followed by a folded reduction tree: the
//! `log2(lanes)` cross-lane levels plus the accumulation, each one cycle.
//!
//! The tree is folded onto the available stages with later levels on earlier
//! stages. Every level owns a disjoint range of lane FUs within its stage,
//! so one new vector can enter every cycle.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use super::{ArchError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Opcode {
    Mul8x4,
    RearrangePad,
    Add16x2,
    Add32,
    Nonlinear,
    FusedMul8Rearrange,
    FusedAdd16Rearrange,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Precision {
    F8,
    F16,
    F32,
}

fn log2_exact(lanes: usize) -> Result<usize> {
    if lanes == 0 || !lanes.is_power_of_two() {
        return Err(ArchError::Lanes(lanes));
    }
    Ok(lanes.trailing_zeros() as usize)
}

/// Cycles for one full map-reduce: `2 + log2(lanes) + 1`.
pub fn reduction_latency(lanes: usize) -> Result<usize> {
    Ok(2 + log2_exact(lanes)? + 1)
}

/// Multiply-accumulates per cycle for one PCU.
pub fn pcu_mac_throughput(lanes: usize, precision: Precision) -> usize {
    match precision {
        Precision::F8 => 4 * lanes,
        Precision::F16 => 2 * lanes,
        Precision::F32 => lanes,
    }
}

/// One tree level placed on a stage. `level == log2(lanes)` is the
/// accumulation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LevelSlot {
    pub level: usize,
    pub stage: usize,
    pub first_lane: usize,
    pub adders: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TreeSchedule {
    pub lanes: usize,
    pub stages_used: usize,
    pub slots: Vec<LevelSlot>,
}

impl TreeSchedule {
    /// Reduction plus accumulation latency in cycles (one per level).
    pub fn latency(&self) -> usize {
        self.slots.len()
    }
}

/// Places the `log2(lanes) + 1` reduction/accumulation levels on at most
/// `stages` pipeline stages.
pub fn folded_tree_schedule(lanes: usize, stages: usize) -> Result<TreeSchedule> {
    let depth = log2_exact(lanes)?;
    let adders: Vec<usize> = (0..depth)
        .map(|l| lanes >> (l + 1))
        .chain(std::iter::once(1))
        .collect();
    let required = adders.iter().sum::<usize>().div_ceil(lanes).max(1);
    if stages < required {
        return Err(ArchError::InsufficientStages {
            required,
            available: stages,
        });
    }
    let levels = adders.len();
    let stages_used = stages.min(levels);
    let mut next_lane = vec![0usize; stages_used];
    let slots = adders
        .iter()
        .enumerate()
        .map(|(level, &n)| {
            let stage = stages_used - 1 - level.min(stages_used - 1);
            let first_lane = next_lane[stage];
            next_lane[stage] += n;
            LevelSlot {
                level,
                stage,
                first_lane,
                adders: n,
            }
        })
        .collect();
    Ok(TreeSchedule {
        lanes,
        stages_used,
        slots,
    })
}

/// A lane FU claimed twice in the same cycle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hazard {
    pub cycle: usize,
    pub stage: usize,
    pub lane: usize,
}

/// Issues `vectors` back-to-back (one per cycle) through the schedule and
/// reports every double-booked FU.
pub fn replay_hazards(schedule: &TreeSchedule, vectors: usize) -> Vec<Hazard> {
    let mut busy: HashMap<(usize, usize, usize), usize> = HashMap::new();
    let mut hazards = Vec::new();
    for v in 0..vectors {
        for (offset, slot) in schedule.slots.iter().enumerate() {
            let cycle = v + offset;
            for lane in slot.first_lane..slot.first_lane + slot.adders {
                let count = busy.entry((cycle, slot.stage, lane)).or_default();
                *count += 1;
                if *count == 2 || lane >= schedule.lanes {
                    hazards.push(Hazard {
                        cycle,
                        stage: slot.stage,
                        lane,
                    });
                }
            }
        }
    }
    hazards
}

/// Opcode sets per PCU stage.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PcuPipeline {
    pub stages: Vec<BTreeSet<Opcode>>,
}

impl PcuPipeline {
    /// Fused prefix plus folded tree on `stages` stages.
    pub fn fused_low_precision(lanes: usize, stages: usize) -> Result<Self> {
        if stages < 3 {
            return Err(ArchError::InsufficientStages {
                required: 3,
                available: stages,
            });
        }
        let tree = folded_tree_schedule(lanes, stages - 2)?;
        let mut out = vec![
            BTreeSet::from([Opcode::FusedMul8Rearrange]),
            BTreeSet::from([Opcode::FusedAdd16Rearrange]),
        ];
        out.extend((0..tree.stages_used).map(|_| BTreeSet::from([Opcode::Add32])));
        Ok(Self { stages: out })
    }

    /// The unfused sequence: multiply, rearrange, 16-bit add, rearrange,
    /// register-pair add, then the (single-stage folded) tree.
    pub fn unfused_low_precision() -> Self {
        use Opcode::*;
        Self {
            stages: [Mul8x4, RearrangePad, Add16x2, RearrangePad, Add32, Add32]
                .into_iter()
                .map(|op| BTreeSet::from([op]))
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.stages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stages.is_empty()
    }

    pub fn fits(&self, available_stages: usize) -> bool {
        self.len() <= available_stages
    }
}
