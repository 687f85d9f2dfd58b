//! Acceptance suite: one PASS/FAIL line per criterion. Exits non-zero when
//! any criterion fails.

mod common;

use std::time::{Duration, Instant};

use loopcell::arch::{
    folded_tree_schedule, pcu_mac_throughput, reduction_latency, replay_hazards, ArchConfig,
    Precision,
};
use loopcell::cli::{builtin_workloads, bw_params, run_bench, BENCH_CSV_HEADER};
use loopcell::dse::{enumerate_candidates, evaluate, search, SearchSpace};
use loopcell::lowprec::{mixed_dot, Float8};
use loopcell::mapper::{map_loop_rnn, validate, MappingParams};
use loopcell::rnn::{
    flop_count, lstm1, lstm_cell_step, random_instance, run_sequence, CellDims, CellKind,
};
use loopcell::sim::{
    bw_utilization_2d, simulate_loop, to_f64, utilization_1d, Fraction, SimOptions,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn within(limit: Duration, start: Instant, detail: String) -> Outcome {
    let took = start.elapsed();
    if took <= limit {
        Ok(format!("{detail} in {:.2} s", took.as_secs_f64()))
    } else {
        Err(format!(
            "{detail} but took {:.2} s > {} s",
            took.as_secs_f64(),
            limit.as_secs()
        ))
    }
}

/// 1. Cells vs an independent scalar oracle, double precision.
fn golden_equivalence() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for seed in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (h, d, t) = (
            rng.gen_range(1..=64),
            rng.gen_range(1..=64),
            rng.gen_range(1..=8),
        );
        for kind in [CellKind::Lstm, CellKind::Gru] {
            let mut inst = random_instance(kind, h, d, seed);
            let xs = inst.inputs(t);
            let ys = run_sequence(&inst.weights, &xs, &inst.state).map_err(|e| e.to_string())?;
            let (mut sh, mut sc) = (inst.state.h.clone(), inst.state.c.clone());
            for (x, y) in xs.iter().zip(&ys) {
                let next = match kind {
                    CellKind::Lstm => {
                        let (nh, nc) = common::lstm(&inst.weights, x, &sh, &sc);
                        sc = nc;
                        nh
                    }
                    CellKind::Gru => common::gru(&inst.weights, x, &sh),
                };
                for (a, b) in y.iter().zip(&next) {
                    worst = worst.max((a - b).abs());
                }
                sh = next;
            }
        }
    }
    if worst > 1e-12 {
        return Err(format!("max deviation {worst:e} > 1e-12"));
    }
    within(
        Duration::from_secs(10),
        start,
        format!("200 instances, max deviation {worst:e}"),
    )
}

/// 2. Row-wise assembly equals the full cell bit for bit.
fn lstm1_decomposition() -> Outcome {
    let start = Instant::now();
    for seed in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + seed);
        let (h, d) = (rng.gen_range(1..=16), rng.gen_range(1..=16));
        let mut inst = random_instance(CellKind::Lstm, h, d, seed);
        let x = inst.inputs(1).remove(0);
        let (_, full) =
            lstm_cell_step(&inst.weights, &x, &inst.state).map_err(|e| e.to_string())?;
        for row in 0..h {
            let (c, hh) = lstm1(&inst.weights, &x, &inst.state.h, inst.state.c[row], row)
                .map_err(|e| e.to_string())?;
            if c.to_bits() != full.c[row].to_bits() || hh.to_bits() != full.h[row].to_bits() {
                return Err(format!("seed {seed} row {row} differs"));
            }
        }
    }
    within(
        Duration::from_secs(5),
        start,
        "100 instances bit-identical".into(),
    )
}

/// 3. Datapath and quantizer against oracles.
fn mixed_precision() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for k in 0..10_000 {
        let spread = [0.1, 2.0, 30.0, 480.0][k % 4];
        let mut v = || -> Vec<Float8> {
            (0..64)
                .map(|_| Float8::quantize(rng.gen_range(-spread..spread)).unwrap())
                .collect()
        };
        let (a, b) = (v(), v());
        let got = mixed_dot(&a, &b, 16).map_err(|e| e.to_string())?;
        let want = common::stage_dot(&a, &b, 16);
        if got.to_bits() != want.to_bits() && !(got.is_nan() && want.is_nan()) {
            return Err(format!("vector {k}: {got} vs oracle {want}"));
        }
    }
    let table = common::float8_values();
    for k in 0..100_000 {
        let x: f64 = match k % 3 {
            0 => rng.gen_range(-500.0..500.0),
            1 => rng.gen_range(-2.0..2.0),
            _ => rng.gen_range(-0.03..0.03),
        };
        let q = Float8::quantize(x).map_err(|e| e.to_string())?.to_f64();
        let best = table
            .iter()
            .map(|&(_, v)| (v - x).abs())
            .fold(f64::INFINITY, f64::min);
        if (q - x).abs() != best {
            return Err(format!("{x} quantized to {q}, nearest is {best} away"));
        }
    }
    within(
        Duration::from_secs(10),
        start,
        "10^4 dot products bit-exact, 10^5 quantizations nearest".into(),
    )
}

/// 4. Reduction latency and hazard-free folded tree.
fn latency_formulas() -> Outcome {
    let lat = reduction_latency(16).map_err(|e| e.to_string())?;
    let sched = folded_tree_schedule(16, 4).map_err(|e| e.to_string())?;
    let hazards = replay_hazards(&sched, 100);
    if lat != 7 || !hazards.is_empty() {
        return Err(format!("latency {lat}, {} hazards", hazards.len()));
    }
    Ok("reduction_latency(16) = 7, 0 hazards over 100 vectors".into())
}

/// 5. MAC throughput and the dot-PCU count.
fn throughput_identity() -> Outcome {
    let t = pcu_mac_throughput(16, Precision::F8);
    if t != 64 {
        return Err(format!("throughput {t}"));
    }
    let cfg = ArchConfig::default_config();
    let mut checked = 0;
    for w in builtin_workloads() {
        let dims = w.dims().map_err(|e| e.to_string())?;
        for p in enumerate_candidates(&dims, &cfg).map_err(|e| e.to_string())? {
            let d = map_loop_rnn(&dims, &p, &cfg).map_err(|e| e.to_string())?;
            let oracle = common::enumerate_dot_pcus(p.hu, dims.g(), p.ru, p.rv, cfg.lanes);
            if d.dot_pcus != oracle {
                return Err(format!("{} {p}: {} vs {oracle}", w.name, d.dot_pcus));
            }
            checked += 1;
        }
    }
    Ok(format!(
        "64 MACs/cycle; {checked} designs match the enumeration oracle"
    ))
}

/// 6. flop_count / reference latency reproduces reference TFLOPS within 3%.
fn tflops_identity() -> Outcome {
    let mut worst = (0.0, String::new());
    let mut rows = Vec::new();
    for w in builtin_workloads() {
        let (Some(ms), Some(tf)) = (w.ref_latency_ms, w.ref_tflops) else {
            continue;
        };
        let got = flop_count(&w.dims().unwrap()) as f64 / (ms * 1e-3) / 1e12;
        let err = (got - tf).abs() / tf;
        rows.push(format!("{} {got:.2}/{tf}", w.name));
        if err > worst.0 {
            worst = (err, w.name.clone());
        }
    }
    let detail = format!(
        "worst {} at {:.2}% ({})",
        worst.1,
        100.0 * worst.0,
        rows.join(", ")
    );
    if worst.0 <= 0.03 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

/// 7. 1-D vs 2-D fragmentation.
fn fragmentation() -> Outcome {
    for w in builtin_workloads() {
        let dims = w.dims().unwrap();
        let p = w.params.ok_or("row without parameters")?;
        let one = utilization_1d(dims.h(), dims.r(), p.hu, p.rv, p.ru);
        let two = bw_utilization_2d(&dims, &bw_params());
        if one < two {
            return Err(format!(
                "{}: 1-D {} < 2-D {}",
                w.name,
                to_f64(one),
                to_f64(two)
            ));
        }
    }
    let u256 = utilization_1d(256, 512, 6, 64, 4);
    if u256 != Fraction::new(131072, 132096) || (to_f64(u256) - 0.9922).abs() >= 5e-5 {
        return Err(format!("LSTM 256 loop utilization {u256}"));
    }
    let bw = to_f64(bw_utilization_2d(
        &CellDims::lstm(256, 256, 1).unwrap(),
        &bw_params(),
    ));
    let oracle = common::mac_count_utilization(256, 512, 400, 240);
    if (bw - oracle).abs() > 1e-15 || (bw - 0.455).abs() >= 5e-4 {
        return Err(format!("BW H=256 utilization {bw}, MAC count {oracle}"));
    }
    Ok(format!(
        "1-D >= 2-D on all 11 rows; loop 256 = {u256} = {:.4}; BW 256 = {bw:.4}",
        to_f64(u256)
    ))
}

/// 8. Simulator bounds and trends.
fn simulator_bounds() -> Outcome {
    let cfg = ArchConfig::default_config();
    let lenient = SimOptions {
        allow_oversubscribed: true,
    };
    let mut ratios = Vec::new();
    for w in builtin_workloads() {
        let dims = w.dims().unwrap();
        let p = w.params.unwrap();
        let d = map_loop_rnn(&dims, &p, &cfg).map_err(|e| e.to_string())?;
        let fits = validate(&d, &cfg).is_empty();
        let r = simulate_loop(&d, &dims, &cfg, lenient).map_err(|e| e.to_string())?;
        let lower = (dims.t() * dims.h().div_ceil(p.hu) * dims.r().div_ceil(p.rv * p.ru)) as u64;
        if r.cycles < lower {
            return Err(format!("{}: {} cycles < bound {lower}", w.name, r.cycles));
        }
        if let (true, Some(ms)) = (fits, w.ref_latency_ms) {
            let ratio = r.latency_s / (ms * 1e-3);
            ratios.push(format!("{} {ratio:.2}", w.name));
            if !(0.25..=4.0).contains(&ratio) {
                return Err(format!("{}: model/reference latency {ratio:.2}", w.name));
            }
        }
    }
    for kind in [CellKind::Lstm, CellKind::Gru] {
        let p = MappingParams::loop_based(4, 8, 64).unwrap();
        let mut last = 0;
        for h in [64, 128, 256, 300, 512, 1000, 1024] {
            for t in [1, 2, 10] {
                let dims = CellDims::new(kind, h, h, t).unwrap();
                let d = map_loop_rnn(&dims, &p, &cfg).unwrap();
                let c = simulate_loop(&d, &dims, &cfg, lenient).unwrap().cycles;
                let prev_t = if t > 1 {
                    let dt = CellDims::new(kind, h, h, t - 1).unwrap();
                    simulate_loop(&d, &dt, &cfg, lenient).unwrap().cycles
                } else {
                    0
                };
                if c < prev_t || (t == 1 && c < last) {
                    return Err(format!("{kind} latency not monotone at H={h} T={t}"));
                }
                if t == 1 {
                    last = c;
                }
            }
        }
    }
    Ok(format!(
        "lower bound holds, ratios within 4x ({}), monotone in H and T",
        ratios.join(", ")
    ))
}

/// 9. Search trend between LSTM 256 and 2048.
fn dse_trend() -> Outcome {
    let cfg = ArchConfig::default_config();
    let mut best = Vec::new();
    for h in [256, 2048] {
        let dims = CellDims::lstm(h, h, if h == 256 { 150 } else { 25 }).unwrap();
        let mut space = SearchSpace::default_for(&dims, &cfg);
        let res = match search(&dims, &cfg, &space) {
            Ok(r) => r,
            Err(_) => {
                // LSTM 2048 weights exceed the scratchpads
                space.allow_oversubscribed = true;
                search(&dims, &cfg, &space).map_err(|e| e.to_string())?
            }
        };
        let min = space
            .candidates()
            .iter()
            .filter_map(|p| evaluate(&dims, &cfg, &space, p).ok().flatten())
            .map(|r| r.cycles)
            .min();
        if Some(res.report.cycles) != min {
            return Err(format!(
                "H={h}: search {} vs brute force {min:?}",
                res.report.cycles
            ));
        }
        best.push(res.best);
    }
    let (a, b) = (best[0], best[1]);
    let detail = format!(
        "H=256 -> hu={} ru={}, H=2048 -> hu={} ru={}",
        a.hu, a.ru, b.hu, b.ru
    );
    if a.hu > b.hu && a.ru < b.ru {
        Ok(detail)
    } else {
        Err(detail)
    }
}

/// 10. Whole table end to end.
fn end_to_end() -> Outcome {
    let start = Instant::now();
    let rows = run_bench(&builtin_workloads(), &ArchConfig::default_config())?;
    let csv = loopcell::cli::bench_csv(&rows);
    let mut lines = csv.lines();
    if lines.next() != Some(BENCH_CSV_HEADER) {
        return Err("header differs from the documented schema".into());
    }
    let width = BENCH_CSV_HEADER.split(',').count();
    if lines.clone().count() != 11 || lines.any(|l| l.split(',').count() != width) {
        return Err("row count or width differs".into());
    }
    let flagged: Vec<&str> = rows
        .iter()
        .filter(|r| r.fit == "oversubscribed")
        .map(|r| r.name.as_str())
        .collect();
    if !(flagged.contains(&"gru-2560") && flagged.contains(&"gru-2816")) {
        return Err(format!("oversubscribed rows: {flagged:?}"));
    }
    within(
        Duration::from_secs(60),
        start,
        format!("11 rows, oversubscribed {flagged:?}"),
    )
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("golden equivalence", golden_equivalence),
        ("LSTM-1 decomposition", lstm1_decomposition),
        ("mixed-precision bit-exactness", mixed_precision),
        ("latency formulas", latency_formulas),
        ("throughput identity", throughput_identity),
        ("effective TFLOPS identity", tflops_identity),
        ("fragmentation ordering", fragmentation),
        ("simulator bounds and trends", simulator_bounds),
        ("DSE trends", dse_trend),
        ("end-to-end bench", end_to_end),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(d) => println!("criterion {:>2} PASS  {name}: {d}", k + 1),
            Err(d) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {d}", k + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
