//! Oracles written against the equations directly, sharing no code with the
//! library beyond its data types.
#![allow(dead_code, clippy::needless_range_loop)]

use loopcell::lowprec::Float8;
use loopcell::rnn::CellWeights;

fn logistic(v: f64) -> f64 {
    1.0 / (1.0 + (-v).exp())
}

/// Pre-activation of `gate` for `row` over the concatenated `[h | x]`, summed
/// left to right in one accumulator, then the bias.
fn pre(w: &CellWeights<f64>, gate: usize, row: usize, h: &[f64], x: &[f64]) -> f64 {
    let mut s = 0.0;
    for k in 0..h.len() {
        s += w.w_h(gate).get(row, k) * h[k];
    }
    for k in 0..x.len() {
        s += w.w_x(gate).get(row, k) * x[k];
    }
    s + w.bias(gate)[row]
}

pub fn lstm(w: &CellWeights<f64>, x: &[f64], h: &[f64], c: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let mut hn = Vec::new();
    let mut cn = Vec::new();
    for row in 0..h.len() {
        let i = logistic(pre(w, 0, row, h, x));
        let j = pre(w, 1, row, h, x).tanh();
        let f = logistic(pre(w, 2, row, h, x));
        let o = logistic(pre(w, 3, row, h, x));
        let cc = f * c[row] + i * j;
        cn.push(cc);
        hn.push(o * cc.tanh());
    }
    (hn, cn)
}

pub fn gru(w: &CellWeights<f64>, x: &[f64], h: &[f64]) -> Vec<f64> {
    (0..h.len())
        .map(|row| {
            let r = logistic(pre(w, 0, row, h, x));
            let z = logistic(pre(w, 1, row, h, x));
            let mut hn = 0.0;
            for k in 0..h.len() {
                hn += w.w_h(2).get(row, k) * h[k];
            }
            let mut xn = 0.0;
            for k in 0..x.len() {
                xn += w.w_x(2).get(row, k) * x[k];
            }
            let n = (xn + w.bias(2)[row] + r * hn).tanh();
            (1.0 - z) * n + z * h[row]
        })
        .collect()
}

/// IEEE binary16 round-to-nearest-even by truncating the f64 bit pattern.
pub fn f16_round(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    let bits = x.to_bits();
    let sign = bits & (1 << 63);
    let exp = ((bits >> 52) & 0x7ff) as i32 - 1023;
    // binary16 keeps 10 fraction bits down to 2^-14, fewer below.
    let keep = if exp >= -14 { 10 } else { exp + 24 };
    if keep < 0 {
        let min_sub = 2f64.powi(-24);
        return if x.abs() > min_sub / 2.0 {
            min_sub.copysign(x)
        } else {
            0.0f64.copysign(x)
        };
    }
    let drop = 52 - keep as u32;
    let mag = bits & !(1 << 63);
    let half = 1u64 << (drop - 1);
    let rem = mag & ((1 << drop) - 1);
    let mut base = mag & !((1u64 << drop) - 1);
    if rem > half || (rem == half && (base >> drop) & 1 == 1) {
        base += 1 << drop;
    }
    let r = f64::from_bits(sign | base);
    if r.abs() >= 65520.0 {
        f64::INFINITY.copysign(x)
    } else {
        r
    }
}

/// The PCU dot product, stage by stage: f8 x f8 products rounded to f16,
/// adjacent f16 pairs summed in f16, an f32 pairwise tree over the lane sums,
/// and an f32 accumulator across issues of `4 * lanes` elements.
pub fn stage_dot(a: &[Float8], b: &[Float8], lanes: usize) -> f32 {
    let mut acc = 0.0f32;
    for (ia, ib) in a.chunks(4 * lanes).zip(b.chunks(4 * lanes)) {
        let prods: Vec<f64> = ia
            .iter()
            .zip(ib)
            .map(|(x, y)| f16_round(x.to_f64() * y.to_f64()))
            .collect();
        let mut level: Vec<f32> = prods
            .chunks(2)
            .map(|p| f16_round(p[0] + p[1]) as f32)
            .collect();
        while level.len() > 1 {
            level = level.chunks(2).map(|p| p[0] + p[1]).collect();
        }
        acc += level[0];
    }
    acc
}

/// Every Float8 value in ascending order, decoded from the bit layout.
pub fn float8_values() -> Vec<(u8, f64)> {
    (0..=255u8)
        .map(|b| {
            let s = if b & 0x80 != 0 { -1.0 } else { 1.0 };
            let e = ((b >> 3) & 0xf) as i32;
            let m = (b & 7) as f64;
            let v = if e == 0 {
                m * 2f64.powi(-9)
            } else {
                (1.0 + m / 8.0) * 2f64.powi(e - 7)
            };
            (b, s * v)
        })
        .collect()
}

/// Counts the dot-product PCUs of a loop design by instantiating every
/// MapReduce lane slot and grouping slots into PCUs per gate group.
pub fn enumerate_dot_pcus(hu: usize, gates: usize, ru: usize, rv: usize, lanes: usize) -> usize {
    let mut pcus = 0;
    for _engine in 0..hu {
        for _gate in 0..gates {
            let mut used = std::collections::BTreeSet::new();
            for unit in 0..ru {
                for lane in 0..rv {
                    used.insert((unit * rv + lane) / (4 * lanes));
                }
            }
            pcus += used.iter().max().map_or(0, |m| m + 1);
        }
    }
    pcus
}

/// Useful / provisioned MACs of an `h x r` MVM tiled `th x tr`, counted one
/// MAC slot at a time.
pub fn mac_count_utilization(h: usize, r: usize, th: usize, tr: usize) -> f64 {
    let (mut useful, mut slots) = (0u64, 0u64);
    for bi in 0..h.div_ceil(th) {
        for bj in 0..r.div_ceil(tr) {
            for i in 0..th {
                for j in 0..tr {
                    slots += 1;
                    if bi * th + i < h && bj * tr + j < r {
                        useful += 1;
                    }
                }
            }
        }
    }
    useful as f64 / slots as f64
}
