//! Benchmark workloads and their TOML file format.
//!
//! ```toml
//! [[workload]]
//! name = "lstm-512"
//! kind = "LSTM"
//! h = 512
//! d = 512              # optional, defaults to h
//! t = 25
//! params = "hv=1,hu=4,ru=8,rv=64"   # optional
//! ref_latency_ms = 0.0139          # optional reference numbers
//! ref_tflops = 7.6
//! ref_power_w = 53.7
//! ```

use std::fmt::Write as _;

use serde::Deserialize;

use crate::mapper::MappingParams;
use crate::rnn::{CellDims, CellKind, RnnError};

#[derive(Debug, Clone, PartialEq)]
pub struct Workload {
    pub name: String,
    pub kind: CellKind,
    pub h: usize,
    pub d: usize,
    pub t: usize,
    pub params: Option<MappingParams>,
    pub ref_latency_ms: Option<f64>,
    pub ref_tflops: Option<f64>,
    pub ref_power_w: Option<f64>,
}

impl Workload {
    pub fn dims(&self) -> Result<CellDims, RnnError> {
        CellDims::new(self.kind, self.h, self.d, self.t)
    }
}

/// Parameters of the tiled baseline used for every row.
pub fn bw_params() -> MappingParams {
    MappingParams {
        hv: 400,
        hu: 1,
        rv: 40,
        ru: 6,
    }
}

#[allow(clippy::too_many_arguments)]
fn row(
    kind: CellKind,
    h: usize,
    t: usize,
    (hu, ru): (usize, usize),
    latency_ms: Option<f64>,
    tflops: Option<f64>,
    power_w: Option<f64>,
) -> Workload {
    Workload {
        name: format!("{}-{h}", kind.name().to_lowercase()),
        kind,
        h,
        d: h,
        t,
        params: Some(MappingParams {
            hv: 1,
            hu,
            rv: 64,
            ru,
        }),
        ref_latency_ms: latency_ms,
        ref_tflops: tflops,
        ref_power_w: power_w,
    }
}

/// DeepBench inference rows with the published loop-based parameters and
/// reference latency, throughput and power. `D = H` throughout.
pub fn builtin_workloads() -> Vec<Workload> {
    use CellKind::{Gru, Lstm};
    vec![
        row(Lstm, 256, 150, (6, 4), Some(0.0419), Some(3.8), Some(28.5)),
        row(Lstm, 512, 25, (4, 8), Some(0.0139), Some(7.6), Some(53.7)),
        row(Lstm, 1024, 25, (4, 8), Some(0.0292), Some(14.4), Some(97.2)),
        row(
            Lstm,
            1536,
            50,
            (4, 8),
            Some(0.1224),
            Some(15.4),
            Some(102.7),
        ),
        row(
            Lstm,
            2048,
            25,
            (4, 8),
            Some(0.1060),
            Some(15.8),
            Some(104.5),
        ),
        row(Gru, 512, 1, (2, 8), Some(0.0004), Some(7.6), Some(61.9)),
        row(
            Gru,
            1024,
            1500,
            (2, 8),
            Some(1.4430),
            Some(13.1),
            Some(109.1),
        ),
        row(
            Gru,
            1536,
            375,
            (2, 8),
            Some(0.7463),
            Some(14.2),
            Some(114.6),
        ),
        row(
            Gru,
            2048,
            375,
            (2, 8),
            Some(1.2833),
            Some(14.7),
            Some(101.2),
        ),
        row(
            Gru,
            2560,
            375,
            (2, 8),
            Some(1.9733),
            Some(15.0),
            Some(117.2),
        ),
        row(Gru, 2816, 750, (2, 8), None, None, None),
    ]
}

pub fn find<'a>(table: &'a [Workload], name: &str) -> Option<&'a Workload> {
    table.iter().find(|w| w.name.eq_ignore_ascii_case(name))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FileRow {
    name: String,
    kind: String,
    h: usize,
    d: Option<usize>,
    t: usize,
    params: Option<String>,
    ref_latency_ms: Option<f64>,
    ref_tflops: Option<f64>,
    ref_power_w: Option<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct File {
    #[serde(default)]
    workload: Vec<FileRow>,
}

pub fn parse_workloads(text: &str) -> Result<Vec<Workload>, String> {
    let file: File = toml::from_str(text).map_err(|e| e.to_string())?;
    let mut out: Vec<Workload> = Vec::with_capacity(file.workload.len());
    for r in file.workload {
        let kind: CellKind = r
            .kind
            .parse()
            .map_err(|e: RnnError| format!("{}: {e}", r.name))?;
        let params = r
            .params
            .as_deref()
            .map(str::parse::<MappingParams>)
            .transpose()
            .map_err(|e| format!("{}: {e}", r.name))?;
        let w = Workload {
            kind,
            h: r.h,
            d: r.d.unwrap_or(r.h),
            t: r.t,
            params,
            ref_latency_ms: r.ref_latency_ms,
            ref_tflops: r.ref_tflops,
            ref_power_w: r.ref_power_w,
            name: r.name,
        };
        w.dims().map_err(|e| format!("{}: {e}", w.name))?;
        for (what, v) in [
            ("ref_latency_ms", w.ref_latency_ms),
            ("ref_tflops", w.ref_tflops),
            ("ref_power_w", w.ref_power_w),
        ] {
            if v.is_some_and(|v| !(v.is_finite() && v > 0.0)) {
                return Err(format!("{}: {what} must be positive", w.name));
            }
        }
        if out.iter().any(|o| o.name.eq_ignore_ascii_case(&w.name)) {
            return Err(format!("duplicate workload name `{}`", w.name));
        }
        out.push(w);
    }
    Ok(out)
}

/// Canonical TOML text of a table; [`parse_workloads`] reads it back.
pub fn render_workloads(table: &[Workload]) -> String {
    let mut s = String::new();
    for (i, w) in table.iter().enumerate() {
        if i > 0 {
            s.push('\n');
        }
        s.push_str("[[workload]]\n");
        writeln!(s, "name = \"{}\"", w.name).unwrap();
        writeln!(s, "kind = \"{}\"", w.kind).unwrap();
        writeln!(s, "h = {}", w.h).unwrap();
        writeln!(s, "d = {}", w.d).unwrap();
        writeln!(s, "t = {}", w.t).unwrap();
        if let Some(p) = w.params {
            writeln!(s, "params = \"{p}\"").unwrap();
        }
        for (key, v) in [
            ("ref_latency_ms", w.ref_latency_ms),
            ("ref_tflops", w.ref_tflops),
            ("ref_power_w", w.ref_power_w),
        ] {
            if let Some(v) = v {
                writeln!(s, "{key} = {v:?}").unwrap();
            }
        }
    }
    s
}
