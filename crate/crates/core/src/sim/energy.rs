//! Activity-based energy estimate: each PCU-active cycle, PMU bank read and
//! network hop costs a fixed energy. The default coefficients are nominal;
//! [`calibrate`] rescales them to a measured power point.

use serde::{Deserialize, Serialize};

use super::{Result, SimError, SimReport};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnergyCoeffs {
    pub pj_per_pcu_cycle: f64,
    pub pj_per_pmu_read: f64,
    pub pj_per_hop: f64,
}

impl Default for EnergyCoeffs {
    fn default() -> Self {
        Self {
            pj_per_pcu_cycle: 20.0,
            pj_per_pmu_read: 5.0,
            pj_per_hop: 2.0,
        }
    }
}

impl EnergyCoeffs {
    pub fn zero() -> Self {
        Self {
            pj_per_pcu_cycle: 0.0,
            pj_per_pmu_read: 0.0,
            pj_per_hop: 0.0,
        }
    }

    pub fn scaled(&self, k: f64) -> Self {
        Self {
            pj_per_pcu_cycle: self.pj_per_pcu_cycle * k,
            pj_per_pmu_read: self.pj_per_pmu_read * k,
            pj_per_hop: self.pj_per_hop * k,
        }
    }

    fn check(&self) -> Result<()> {
        for (name, v) in [
            ("pj_per_pcu_cycle", self.pj_per_pcu_cycle),
            ("pj_per_pmu_read", self.pj_per_pmu_read),
            ("pj_per_hop", self.pj_per_hop),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(SimError::Energy(format!(
                    "{name} must be finite and >= 0, got {v}"
                )));
            }
        }
        Ok(())
    }
}

/// Joules spent by the run described by `report`.
pub fn energy_estimate(report: &SimReport, coeffs: &EnergyCoeffs) -> Result<f64> {
    coeffs.check()?;
    let a = &report.activity;
    let pj = a.pcu_active_cycles() as f64 * coeffs.pj_per_pcu_cycle
        + a.pmu_reads as f64 * coeffs.pj_per_pmu_read
        + a.hops as f64 * coeffs.pj_per_hop;
    Ok(pj * 1e-12)
}

impl SimReport {
    /// Fills `energy_j` and `power_w`.
    pub fn with_energy(mut self, coeffs: &EnergyCoeffs) -> Result<Self> {
        let e = energy_estimate(&self, coeffs)?;
        self.energy_j = Some(e);
        self.power_w = Some(e / self.latency_s);
        Ok(self)
    }
}

/// Scales `coeffs` so that `report` draws `target_w` watts.
pub fn calibrate(coeffs: &EnergyCoeffs, report: &SimReport, target_w: f64) -> Result<EnergyCoeffs> {
    let e = energy_estimate(report, coeffs)?;
    if e.is_nan() || e <= 0.0 || !(target_w.is_finite() && target_w > 0.0) {
        return Err(SimError::Energy(
            "calibration needs nonzero modeled energy and a positive target".into(),
        ));
    }
    Ok(coeffs.scaled(target_w * report.latency_s / e))
}
