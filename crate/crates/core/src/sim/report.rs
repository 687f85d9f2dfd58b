use std::fmt::Write as _;

use serde::Serialize;

use crate::mapper::{MappingParams, Violation};
use crate::rnn::CellKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Bottleneck {
    DotProduct,
    ElementWise,
    None,
}

impl Bottleneck {
    /// Larger issue term wins; a tie is balanced.
    pub fn between(dot: u64, elem: u64) -> Self {
        match dot.cmp(&elem) {
            std::cmp::Ordering::Greater => Self::DotProduct,
            std::cmp::Ordering::Less => Self::ElementWise,
            std::cmp::Ordering::Equal => Self::None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::DotProduct => "dot_product",
            Self::ElementWise => "element_wise",
            Self::None => "none",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    Loop,
    Bw,
}

impl ModelKind {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Loop => "loop",
            Self::Bw => "bw",
        }
    }
}

/// Cycles of one recurrent step; every step is identical.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct StepBreakdown {
    pub dot_issue_cycles: u64,
    pub elem_issue_cycles: u64,
    pub step_cycles: u64,
    pub pipeline_depth_cycles: u64,
}

/// Activity totals over a whole run, the inputs of the energy model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct Activity {
    pub dot_pcu_cycles: u64,
    pub elem_pcu_cycles: u64,
    pub pmu_reads: u64,
    pub hops: u64,
}

impl Activity {
    pub fn pcu_active_cycles(&self) -> u64 {
        self.dot_pcu_cycles + self.elem_pcu_cycles
    }

    pub fn scaled(&self, k: u64) -> Self {
        Self {
            dot_pcu_cycles: self.dot_pcu_cycles * k,
            elem_pcu_cycles: self.elem_pcu_cycles * k,
            pmu_reads: self.pmu_reads * k,
            hops: self.hops * k,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimReport {
    pub model: ModelKind,
    pub kind: CellKind,
    pub h: usize,
    pub d: usize,
    pub t: usize,
    pub params: MappingParams,
    pub cycles: u64,
    pub latency_s: f64,
    pub eff_flops: f64,
    pub flops: u64,
    pub useful_macs: u64,
    /// Useful MACs over provisioned MAC slots times cycles.
    pub utilization: f64,
    pub bottleneck: Bottleneck,
    pub step: StepBreakdown,
    pub dot_pcus: usize,
    pub elem_pcus: usize,
    pub pmus_used: usize,
    pub weight_bytes: usize,
    pub oversubscribed: bool,
    pub violations: Vec<Violation>,
    pub activity: Activity,
    pub freq_hz: f64,
    pub energy_j: Option<f64>,
    pub power_w: Option<f64>,
}

/// Column order of [`SimReport::csv_row`].
pub const CSV_HEADER: &str =
    "model,kind,h,d,t,hv,hu,ru,rv,cycles,latency_s,eff_tflops,utilization,\
bottleneck,step_cycles,dot_issue_cycles,elem_issue_cycles,pipeline_depth_cycles,dot_pcus,elem_pcus,\
pmus_used,weight_bytes,oversubscribed,energy_j,power_w";

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

impl SimReport {
    pub fn csv_row(&self) -> String {
        let p = self.params;
        let mut s = String::new();
        write!(
            s,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.model.as_str(),
            self.kind,
            self.h,
            self.d,
            self.t,
            p.hv,
            p.hu,
            p.ru,
            p.rv,
            self.cycles,
            self.latency_s,
            self.eff_flops / 1e12,
            self.utilization,
            self.bottleneck.as_str(),
            self.step.step_cycles,
            self.step.dot_issue_cycles,
            self.step.elem_issue_cycles,
            self.step.pipeline_depth_cycles,
            self.dot_pcus,
            self.elem_pcus,
            self.pmus_used,
            self.weight_bytes,
            self.oversubscribed,
            opt(self.energy_j),
            opt(self.power_w),
        )
        .unwrap();
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
