//! Straight-line scalar evaluation of the cell equations, written
//! independently of [`super::lstm_cell_step`] (separate `W_h h` and `W_x x`
//! sums, plain indexed loops). Used by the `golden` command as its
//! comparison target.

use super::CellWeights;

fn sig(v: f64) -> f64 {
    1.0 / (1.0 + (-v).exp())
}

fn affine(w: &CellWeights<f64>, gate: usize, k: usize, h: &[f64], x: &[f64]) -> (f64, f64) {
    let mut sh = 0.0;
    for (col, hv) in h.iter().enumerate() {
        sh += w.w_h(gate).get(k, col) * hv;
    }
    let mut sx = 0.0;
    for (col, xv) in x.iter().enumerate() {
        sx += w.w_x(gate).get(k, col) * xv;
    }
    (sh, sx)
}

/// Returns `(h_next, c_next)`.
pub fn lstm_step(w: &CellWeights<f64>, x: &[f64], h: &[f64], c: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let n = h.len();
    let mut h_next = vec![0.0; n];
    let mut c_next = vec![0.0; n];
    for k in 0..n {
        let pre = |g: usize| {
            let (sh, sx) = affine(w, g, k, h, x);
            sh + sx + w.bias(g)[k]
        };
        let i = sig(pre(0));
        let j = pre(1).tanh();
        let f = sig(pre(2));
        let o = sig(pre(3));
        c_next[k] = f * c[k] + i * j;
        h_next[k] = o * c_next[k].tanh();
    }
    (h_next, c_next)
}

pub fn gru_step(w: &CellWeights<f64>, x: &[f64], h: &[f64]) -> Vec<f64> {
    let n = h.len();
    let mut out = vec![0.0; n];
    for k in 0..n {
        let (rh, rx) = affine(w, 0, k, h, x);
        let r = sig(rh + rx + w.bias(0)[k]);
        let (zh, zx) = affine(w, 1, k, h, x);
        let z = sig(zh + zx + w.bias(1)[k]);
        let (nh, nx) = affine(w, 2, k, h, x);
        let cand = (nx + w.bias(2)[k] + r * nh).tanh();
        out[k] = (1.0 - z) * cand + z * h[k];
    }
    out
}
