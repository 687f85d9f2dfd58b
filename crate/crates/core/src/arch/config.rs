use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{ArchError, Precision, Result};

/// Banks per PMU; one 32-bit word per bank per cycle.
pub const PMU_BANKS: usize = 16;

/// Grid-level architecture parameters. Loadable from TOML with the field
/// names as keys, e.g.
///
/// ```toml
/// rows = 24
/// cols = 24
/// n_pcu = 192
/// n_pmu = 384
/// lanes = 16
/// stages = 4
/// pmu_capacity_bytes = 86016
/// freq_hz = 1e9
/// hop_latency_cycles = 1
/// # peak_flops_override = 49e12
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArchConfig {
    pub rows: usize,
    pub cols: usize,
    pub n_pcu: usize,
    pub n_pmu: usize,
    pub lanes: usize,
    pub stages: usize,
    pub pmu_capacity_bytes: usize,
    pub freq_hz: f64,
    #[serde(default = "default_hop")]
    pub hop_latency_cycles: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub peak_flops_override: Option<f64>,
}

fn default_hop() -> usize {
    1
}

impl Default for ArchConfig {
    fn default() -> Self {
        Self {
            rows: 24,
            cols: 24,
            n_pcu: 192,
            n_pmu: 384,
            lanes: 16,
            stages: 4,
            pmu_capacity_bytes: 84 * 1024,
            freq_hz: 1e9,
            hop_latency_cycles: 1,
            peak_flops_override: Some(49e12),
        }
    }
}

impl ArchConfig {
    /// The RNN-serving variant: 24x24 grid, 2:1 PMU:PCU, 16 lanes, 4 stages,
    /// 84 KiB per PMU, 1 GHz.
    pub fn default_config() -> Self {
        Self::default()
    }

    /// Checkerboard layout with 1:1 PCU:PMU, 6-stage PCUs and 256 KiB PMUs.
    pub fn original_plasticine() -> Self {
        Self {
            n_pcu: 288,
            n_pmu: 288,
            stages: 6,
            pmu_capacity_bytes: 256 * 1024,
            peak_flops_override: None,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(ArchError::Invalid(msg));
        let counts = [
            ("rows", self.rows),
            ("cols", self.cols),
            ("n_pcu", self.n_pcu),
            ("n_pmu", self.n_pmu),
            ("lanes", self.lanes),
            ("stages", self.stages),
            ("pmu_capacity_bytes", self.pmu_capacity_bytes),
        ];
        if let Some((name, _)) = counts.iter().find(|(_, v)| *v == 0) {
            return bad(format!("{name} must be >= 1"));
        }
        if !self.lanes.is_power_of_two() {
            return Err(ArchError::Lanes(self.lanes));
        }
        if self.n_pcu + self.n_pmu > self.rows * self.cols {
            return bad(format!(
                "{} PCUs + {} PMUs exceed the {}x{} grid",
                self.n_pcu, self.n_pmu, self.rows, self.cols
            ));
        }
        if !(self.freq_hz.is_finite() && self.freq_hz > 0.0) {
            return bad(format!("freq_hz must be positive, got {}", self.freq_hz));
        }
        if let Some(p) = self.peak_flops_override {
            if !(p.is_finite() && p > 0.0) {
                return bad(format!("peak_flops_override must be positive, got {p}"));
            }
        }
        Ok(())
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| ArchError::Parse(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| ArchError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("plain config serializes")
    }

    pub fn total_scratchpad_bytes(&self) -> usize {
        self.n_pmu * self.pmu_capacity_bytes
    }

    pub fn bank_capacity_bytes(&self) -> usize {
        self.pmu_capacity_bytes / PMU_BANKS
    }

    /// 8-bit MACs across all PCUs x 2 FLOP/MAC x clock.
    pub fn derived_peak_flops_8bit(&self) -> f64 {
        self.n_pcu as f64
            * super::pcu_mac_throughput(self.lanes, Precision::F8) as f64
            * 2.0
            * self.freq_hz
    }

    /// The override when present, otherwise the derived peak.
    pub fn peak_flops_8bit(&self) -> f64 {
        self.peak_flops_override
            .unwrap_or_else(|| self.derived_peak_flops_8bit())
    }

    /// Compute FU slots (`stages * lanes` per PCU) over scratchpad words
    /// readable per cycle (`PMU_BANKS` per PMU).
    pub fn compute_memory_ratio(&self) -> f64 {
        let compute = (self.n_pcu * self.stages * self.lanes) as f64;
        let reads = (self.n_pmu * PMU_BANKS) as f64;
        if compute == 0.0 {
            0.0
        } else {
            compute / reads
        }
    }

    pub fn cycles_to_seconds(&self, cycles: u64) -> f64 {
        cycles as f64 / self.freq_hz
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_matches_table() {
        let c = ArchConfig::default_config();
        c.validate().unwrap();
        assert_eq!(c.n_pcu + c.n_pmu, c.rows * c.cols);
        assert_eq!(c.n_pmu, 2 * c.n_pcu);
        assert_eq!(c.total_scratchpad_bytes(), 32_256 * 1024);
        assert_eq!(c.total_scratchpad_bytes() as f64 / (1024.0 * 1024.0), 31.5);
        assert_eq!(c.derived_peak_flops_8bit(), 24.576e12);
        assert_eq!(c.peak_flops_8bit(), 49e12);
    }

    #[test]
    fn compute_memory_ratios() {
        assert_eq!(
            ArchConfig::original_plasticine().compute_memory_ratio(),
            6.0
        );
        let ours = ArchConfig::default_config().compute_memory_ratio();
        assert_eq!(ours, 2.0);
        let mut none = ArchConfig::default_config();
        none.n_pcu = 0;
        assert_eq!(none.compute_memory_ratio(), 0.0);
    }

    #[test]
    fn toml_round_trip_and_errors() {
        let c = ArchConfig::default_config();
        assert_eq!(ArchConfig::from_toml_str(&c.to_toml_string()).unwrap(), c);
        let mut text = c.to_toml_string().replace("lanes = 16", "lanes = 12");
        assert_eq!(ArchConfig::from_toml_str(&text), Err(ArchError::Lanes(12)));
        text = c.to_toml_string().replace("n_pmu = 384", "n_pmu = 400");
        assert!(matches!(
            ArchConfig::from_toml_str(&text),
            Err(ArchError::Invalid(_))
        ));
        assert!(matches!(
            ArchConfig::from_toml_str("rows = 1\nbogus = 2"),
            Err(ArchError::Parse(_))
        ));
        assert!(matches!(
            ArchConfig::from_file(Path::new("/nonexistent/arch.toml")),
            Err(ArchError::Io { .. })
        ));
    }

    #[test]
    fn hop_latency_defaults_to_one() {
        let text = "rows = 2\ncols = 2\nn_pcu = 1\nn_pmu = 2\nlanes = 4\nstages = 4\n\
                    pmu_capacity_bytes = 1024\nfreq_hz = 1e9\n";
        let c = ArchConfig::from_toml_str(text).unwrap();
        assert_eq!(c.hop_latency_cycles, 1);
        assert_eq!(c.peak_flops_override, None);
    }
}
