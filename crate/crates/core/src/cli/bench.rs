//! Whole-table comparison: searched design, the workload's fixed parameters,
//! the tiled baseline and the reference numbers side by side.

use serde::Serialize;

use super::{builtin_workloads, bw_params, find, Workload};
use crate::arch::ArchConfig;
use crate::dse::{search, SearchSpace};
use crate::mapper::{map_loop_rnn, validate, MapError};
use crate::sim::{
    bw_utilization_2d, calibrate, simulate_bw, simulate_loop, to_f64, utilization_1d, BwConfig,
    EnergyCoeffs, SimOptions, SimReport,
};

/// Power reference point for energy calibration.
pub const CALIBRATION_WORKLOAD: &str = "lstm-1024";

/// Nominal coefficients scaled so the calibration workload, mapped with its
/// fixed parameters on `cfg`, draws its reference power. `None` when that
/// design cannot be simulated on `cfg`.
pub fn calibrated_energy(cfg: &ArchConfig) -> Option<EnergyCoeffs> {
    let table = builtin_workloads();
    let w = find(&table, CALIBRATION_WORKLOAD)?;
    let dims = w.dims().ok()?;
    let design = map_loop_rnn(&dims, &w.params?, cfg).ok()?;
    let r = simulate_loop(&design, &dims, cfg, SimOptions::default()).ok()?;
    calibrate(&EnergyCoeffs::default(), &r, w.ref_power_w?).ok()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub name: String,
    pub kind: String,
    pub h: usize,
    pub d: usize,
    pub t: usize,
    /// `fits` or `oversubscribed`.
    pub fit: String,
    pub dse_hu: usize,
    pub dse_ru: usize,
    pub dse_rv: usize,
    pub dse_cycles: u64,
    pub dse_latency_ms: f64,
    pub dse_eff_tflops: f64,
    pub dse_utilization_1d: f64,
    pub dse_bottleneck: String,
    pub dse_pcus: usize,
    pub dse_pmus: usize,
    pub params_hu: Option<usize>,
    pub params_ru: Option<usize>,
    pub params_rv: Option<usize>,
    pub params_cycles: Option<u64>,
    pub params_latency_ms: Option<f64>,
    pub params_eff_tflops: Option<f64>,
    pub params_utilization_1d: Option<f64>,
    pub params_power_w: Option<f64>,
    /// `T * ceil(H / hu) * ceil(R / (rv * ru))` for the fixed parameters.
    pub params_lower_bound_cycles: Option<u64>,
    pub ref_latency_ms: Option<f64>,
    /// Fixed-parameter latency over the reference latency.
    pub latency_ratio: Option<f64>,
    pub ref_tflops: Option<f64>,
    pub ref_power_w: Option<f64>,
    pub bw_latency_ms: f64,
    pub bw_utilization_2d: f64,
}

/// Column order of the bench CSV.
pub const BENCH_CSV_HEADER: &str = "name,kind,h,d,t,fit,dse_hu,dse_ru,dse_rv,dse_cycles,\
dse_latency_ms,dse_eff_tflops,dse_utilization_1d,dse_bottleneck,dse_pcus,dse_pmus,params_hu,\
params_ru,params_rv,params_cycles,params_latency_ms,params_eff_tflops,params_utilization_1d,\
params_power_w,params_lower_bound_cycles,ref_latency_ms,latency_ratio,ref_tflops,\
ref_power_w,bw_latency_ms,bw_utilization_2d";

fn util_1d(r: &SimReport) -> f64 {
    let p = r.params;
    to_f64(utilization_1d(r.h, r.h + r.d, p.hu, p.rv, p.ru))
}

pub fn bench_row(
    w: &Workload,
    cfg: &ArchConfig,
    energy: Option<&EnergyCoeffs>,
) -> Result<BenchRow, String> {
    let dims = w.dims().map_err(|e| e.to_string())?;
    let mut space = SearchSpace::default_for(&dims, cfg);
    let fits = search(&dims, cfg, &space);
    let (best, fit) = match fits {
        Ok(r) => (r.report, "fits"),
        Err(_) => {
            space.allow_oversubscribed = true;
            let r = search(&dims, cfg, &space).map_err(|e| format!("{}: {e}", w.name))?;
            (r.report, "oversubscribed")
        }
    };

    let fixed = match w.params {
        Some(p) => {
            let design = map_loop_rnn(&dims, &p, cfg).map_err(|e: MapError| e.to_string())?;
            let over = !validate(&design, cfg).is_empty();
            let r = simulate_loop(
                &design,
                &dims,
                cfg,
                SimOptions {
                    allow_oversubscribed: true,
                },
            )
            .map_err(|e| e.to_string())?;
            let r = match energy {
                Some(c) => r.with_energy(c).map_err(|e| e.to_string())?,
                None => r,
            };
            Some((r, over))
        }
        None => None,
    };
    let fit = match &fixed {
        Some((_, true)) => "oversubscribed",
        _ => fit,
    };

    let bw = simulate_bw(&dims, &bw_params(), &BwConfig::default()).map_err(|e| e.to_string())?;
    let fr = fixed.as_ref().map(|(r, _)| r);
    let params_latency_ms = fr.map(|r| r.latency_s * 1e3);
    Ok(BenchRow {
        name: w.name.clone(),
        kind: w.kind.to_string(),
        h: w.h,
        d: w.d,
        t: w.t,
        fit: fit.into(),
        dse_hu: best.params.hu,
        dse_ru: best.params.ru,
        dse_rv: best.params.rv,
        dse_cycles: best.cycles,
        dse_latency_ms: best.latency_s * 1e3,
        dse_eff_tflops: best.eff_flops / 1e12,
        dse_utilization_1d: util_1d(&best),
        dse_bottleneck: best.bottleneck.as_str().into(),
        dse_pcus: best.dot_pcus + best.elem_pcus,
        dse_pmus: best.pmus_used,
        params_hu: fr.map(|r| r.params.hu),
        params_ru: fr.map(|r| r.params.ru),
        params_rv: fr.map(|r| r.params.rv),
        params_cycles: fr.map(|r| r.cycles),
        params_latency_ms,
        params_eff_tflops: fr.map(|r| r.eff_flops / 1e12),
        params_utilization_1d: fr.map(util_1d),
        params_power_w: fr.and_then(|r| r.power_w),
        params_lower_bound_cycles: fr.map(|r| {
            let p = r.params;
            (r.t * r.h.div_ceil(p.hu) * (r.h + r.d).div_ceil(p.rv * p.ru)) as u64
        }),
        ref_latency_ms: w.ref_latency_ms,
        latency_ratio: params_latency_ms.zip(w.ref_latency_ms).map(|(a, b)| a / b),
        ref_tflops: w.ref_tflops,
        ref_power_w: w.ref_power_w,
        bw_latency_ms: bw.latency_s * 1e3,
        bw_utilization_2d: to_f64(bw_utilization_2d(&dims, &bw_params())),
    })
}

/// Evaluates every row in parallel; output order follows `table`.
pub fn run_bench(table: &[Workload], cfg: &ArchConfig) -> Result<Vec<BenchRow>, String> {
    let energy = calibrated_energy(cfg);
    std::thread::scope(|s| {
        let handles: Vec<_> = table
            .iter()
            .map(|w| s.spawn(|| bench_row(w, cfg, energy.as_ref())))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("bench worker panicked"))
            .collect()
    })
}

pub fn bench_csv(rows: &[BenchRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).expect("in-memory write");
    }
    let bytes = w.into_inner().expect("in-memory flush");
    let text = String::from_utf8(bytes).expect("csv is utf-8");
    if rows.is_empty() {
        format!("{BENCH_CSV_HEADER}\n")
    } else {
        text
    }
}
