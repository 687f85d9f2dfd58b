//! Stage-faithful scalar evaluation of the mixed-precision dot product with
//! its own binary16 rounding (no `half`), used by the `golden` command.

use super::Float8;

/// Value of the binary16 number nearest to `x` (ties to even, overflow to
/// infinity, gradual underflow).
pub fn round_to_binary16(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    let a = x.abs();
    // 65504 + half an ulp (16) rounds up past the largest finite half
    if a >= 65520.0 {
        return f64::INFINITY.copysign(x);
    }
    let e = ((a.to_bits() >> 52) & 0x7ff) as i32 - 1023;
    let quantum = if e < -14 {
        2f64.powi(-24)
    } else {
        2f64.powi(e - 10)
    };
    ((a / quantum).round_ties_even() * quantum).copysign(x)
}

pub fn staged_dot(a: &[Float8], b: &[Float8], lanes: usize) -> f32 {
    let width = 4 * lanes;
    let mut acc = 0.0f32;
    let mut start = 0;
    while start < a.len() {
        let mut level: Vec<f32> = Vec::with_capacity(2 * lanes);
        let mut k = start;
        while k < start + width {
            let p0 = round_to_binary16(a[k].to_f64() * b[k].to_f64());
            let p1 = round_to_binary16(a[k + 1].to_f64() * b[k + 1].to_f64());
            level.push(round_to_binary16(p0 + p1) as f32);
            k += 2;
        }
        while level.len() > 1 {
            let mut next = Vec::with_capacity(level.len() / 2);
            for i in 0..level.len() / 2 {
                next.push(level[2 * i] + level[2 * i + 1]);
            }
            level = next;
        }
        acc += level[0];
        start += width;
    }
    acc
}
