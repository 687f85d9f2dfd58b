//! Cell step functions.
//!
//! LSTM (gate order `i, j, f, o`):
//!
//! ```text
//! i  = sigmoid(W_hi h + W_xi x + b_i)
//! j  = tanh   (W_hj h + W_xj x + b_j)
//! f  = sigmoid(W_hf h + W_xf x + b_f)
//! o  = sigmoid(W_ho h + W_xo x + b_o)
//! c' = f * c + i * j
//! h' = o * tanh(c')          (output y = h')
//! ```
//!
//! GRU (gate order `r, z, n`), reset applied after the hidden projection:
//!
//! ```text
//! r  = sigmoid(W_hr h + W_xr x + b_r)
//! z  = sigmoid(W_hz h + W_xz x + b_z)
//! n  = tanh   (W_xn x + b_n + r * (W_hn h))
//! h' = (1 - z) * n + z * h   (output y = h')
//! ```
//!
//! Every gate pre-activation of the LSTM and the `r`/`z` gates of the GRU is
//! one dot product of a concatenated weight row `[W_h | W_x]` with `[h | x]`,
//! accumulated left to right starting from zero, then the bias is added.

use super::{CellKind, CellWeights, Real, Result, RnnError};

pub fn sigmoid<T: Real>(x: T) -> T {
    T::one() / (T::one() + (-x).exp())
}

/// Recurrent state. `c` is empty for GRU cells.
#[derive(Debug, Clone, PartialEq)]
pub struct CellState<T> {
    pub h: Vec<T>,
    pub c: Vec<T>,
}

impl<T: Real> CellState<T> {
    pub fn zeros(kind: CellKind, hidden: usize) -> Self {
        Self {
            h: vec![T::zero(); hidden],
            c: match kind {
                CellKind::Lstm => vec![T::zero(); hidden],
                CellKind::Gru => Vec::new(),
            },
        }
    }
}

/// LSTM gate activations of one step.
#[derive(Debug, Clone, PartialEq)]
pub struct GateActivations<T> {
    pub i: Vec<T>,
    pub j: Vec<T>,
    pub f: Vec<T>,
    pub o: Vec<T>,
}

fn expect_kind<T: Real>(w: &CellWeights<T>, kind: CellKind) -> Result<()> {
    if w.kind == kind {
        Ok(())
    } else {
        Err(RnnError::WrongKind {
            expected: kind,
            got: w.kind,
        })
    }
}

fn expect_vec<T: Real>(what: &'static str, v: &[T], len: usize) -> Result<()> {
    if v.len() != len {
        return Err(RnnError::Shape {
            what,
            expected: len,
            got: v.len(),
        });
    }
    if !v.iter().all(|x| x.is_finite()) {
        return Err(RnnError::NonFinite(what));
    }
    Ok(())
}

/// `[W_h | W_x] * z + b` for every row of `gate`, where `z = [h | x]`.
fn gate_mvm<T: Real>(w: &CellWeights<T>, gate: usize, z: &[T]) -> Vec<T> {
    let bias = w.bias(gate);
    (0..w.h())
        .map(|i| {
            let acc = w
                .concat_row(gate, i)
                .zip(z)
                .fold(T::zero(), |acc, (wv, &zv)| acc + wv * zv);
            acc + bias[i]
        })
        .collect()
}

pub fn lstm_cell_step<T: Real>(
    w: &CellWeights<T>,
    x: &[T],
    s: &CellState<T>,
) -> Result<(Vec<T>, CellState<T>)> {
    lstm_cell_step_with_gates(w, x, s).map(|(y, next, _)| (y, next))
}

/// [`lstm_cell_step`] that also returns the gate activations.
pub fn lstm_cell_step_with_gates<T: Real>(
    w: &CellWeights<T>,
    x: &[T],
    s: &CellState<T>,
) -> Result<(Vec<T>, CellState<T>, GateActivations<T>)> {
    expect_kind(w, CellKind::Lstm)?;
    expect_vec("x", x, w.d())?;
    expect_vec("h", &s.h, w.h())?;
    expect_vec("c", &s.c, w.h())?;

    let z: Vec<T> = s.h.iter().chain(x).copied().collect();
    let i: Vec<T> = gate_mvm(w, 0, &z).into_iter().map(sigmoid).collect();
    let j: Vec<T> = gate_mvm(w, 1, &z).into_iter().map(T::tanh).collect();
    let f: Vec<T> = gate_mvm(w, 2, &z).into_iter().map(sigmoid).collect();
    let o: Vec<T> = gate_mvm(w, 3, &z).into_iter().map(sigmoid).collect();

    let c: Vec<T> = (0..w.h()).map(|k| f[k] * s.c[k] + i[k] * j[k]).collect();
    let h: Vec<T> = (0..w.h()).map(|k| o[k] * c[k].tanh()).collect();
    Ok((
        h.clone(),
        CellState { h, c },
        GateActivations { i, j, f, o },
    ))
}

/// One element of `c_t` and `h_t`: four independent row dot products over
/// `[h | x]` followed by the element-wise chain. Only `c_prev_elem` of the
/// previous cell state is read.
pub fn lstm1<T: Real>(
    w: &CellWeights<T>,
    x: &[T],
    h: &[T],
    c_prev_elem: T,
    row: usize,
) -> Result<(T, T)> {
    expect_kind(w, CellKind::Lstm)?;
    if row >= w.h() {
        return Err(RnnError::RowOutOfRange { row, hidden: w.h() });
    }
    expect_vec("x", x, w.d())?;
    expect_vec("h", h, w.h())?;
    if !c_prev_elem.is_finite() {
        return Err(RnnError::NonFinite("c"));
    }

    let dot = |gate: usize| {
        let mut acc = T::zero();
        for (&wv, &hv) in w.w_h(gate).row(row).iter().zip(h) {
            acc = acc + wv * hv;
        }
        for (&wv, &xv) in w.w_x(gate).row(row).iter().zip(x) {
            acc = acc + wv * xv;
        }
        acc + w.bias(gate)[row]
    };
    let i = sigmoid(dot(0));
    let j = dot(1).tanh();
    let f = sigmoid(dot(2));
    let o = sigmoid(dot(3));
    let c = f * c_prev_elem + i * j;
    Ok((c, o * c.tanh()))
}

pub fn gru_cell_step<T: Real>(w: &CellWeights<T>, x: &[T], h: &[T]) -> Result<(Vec<T>, Vec<T>)> {
    expect_kind(w, CellKind::Gru)?;
    expect_vec("x", x, w.d())?;
    expect_vec("h", h, w.h())?;

    let z_in: Vec<T> = h.iter().chain(x).copied().collect();
    let r: Vec<T> = gate_mvm(w, 0, &z_in).into_iter().map(sigmoid).collect();
    let z: Vec<T> = gate_mvm(w, 1, &z_in).into_iter().map(sigmoid).collect();
    let next: Vec<T> = (0..w.h())
        .map(|k| {
            let hn = w
                .w_h(2)
                .row(k)
                .iter()
                .zip(h)
                .fold(T::zero(), |acc, (&wv, &hv)| acc + wv * hv);
            let xn = w
                .w_x(2)
                .row(k)
                .iter()
                .zip(x)
                .fold(T::zero(), |acc, (&wv, &xv)| acc + wv * xv);
            let n = (xn + w.bias(2)[k] + r[k] * hn).tanh();
            (T::one() - z[k]) * n + z[k] * h[k]
        })
        .collect();
    Ok((next.clone(), next))
}

/// Runs the cell over a `T`-step input sequence, returning `y_t` per step.
pub fn run_sequence<T: Real>(
    w: &CellWeights<T>,
    inputs: &[Vec<T>],
    s0: &CellState<T>,
) -> Result<Vec<Vec<T>>> {
    if inputs.is_empty() {
        return Err(RnnError::EmptySequence);
    }
    let mut state = s0.clone();
    let mut outputs = Vec::with_capacity(inputs.len());
    for x in inputs {
        match w.kind {
            CellKind::Lstm => {
                let (y, next) = lstm_cell_step(w, x, &state)?;
                outputs.push(y);
                state = next;
            }
            CellKind::Gru => {
                let (y, next) = gru_cell_step(w, x, &state.h)?;
                outputs.push(y);
                state.h = next;
            }
        }
    }
    Ok(outputs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rnn::random_instance;

    #[test]
    fn zero_weights_fixed_point() {
        let w = CellWeights::<f64>::zeros(CellKind::Lstm, 3, 2);
        let s = CellState::zeros(CellKind::Lstm, 3);
        let (y, next) = lstm_cell_step(&w, &[0.7, -1.3], &s).unwrap();
        assert_eq!(y, vec![0.0; 3]);
        assert_eq!(next.c, vec![0.0; 3]);
        assert_eq!(lstm1(&w, &[0.7, -1.3], &s.h, 0.0, 1).unwrap(), (0.0, 0.0));

        let g = CellWeights::<f64>::zeros(CellKind::Gru, 3, 2);
        let (y, _) = gru_cell_step(&g, &[4.0, 4.0], &[0.0; 3]).unwrap();
        assert_eq!(y, vec![0.0; 3]);
    }

    #[test]
    fn scalar_lstm_hand_value() {
        let mut w = CellWeights::<f64>::zeros(CellKind::Lstm, 1, 1);
        for g in 0..4 {
            w.w_h_mut(g).set(0, 0, 1.0);
            w.w_x_mut(g).set(0, 0, 1.0);
        }
        let s = CellState {
            h: vec![0.0],
            c: vec![1.0],
        };
        let (y, next, gates) = lstm_cell_step_with_gates(&w, &[0.0], &s).unwrap();
        assert_eq!(gates.i[0], 0.5);
        assert_eq!(gates.j[0], 0.0);
        assert_eq!(next.c[0], 0.5);
        assert!((y[0] - 0.231_058_578_630_004_9).abs() < 1e-15);
    }

    #[test]
    fn scalar_gru_hand_value() {
        // r = z = sigmoid(1), n = tanh(x + r * h) with all weights 1, h = 0.5, x = 0.5
        let mut w = CellWeights::<f64>::zeros(CellKind::Gru, 1, 1);
        for g in 0..3 {
            w.w_h_mut(g).set(0, 0, 1.0);
            w.w_x_mut(g).set(0, 0, 1.0);
        }
        let (y, _) = gru_cell_step(&w, &[0.5], &[0.5]).unwrap();
        let r = 1.0 / (1.0 + (-1.0f64).exp());
        let n = (0.5 + r * 0.5f64).tanh();
        let expected = (1.0 - r) * n + r * 0.5;
        assert_eq!(y[0], expected);
        assert!((y[0] - 0.553_545_039_660_142).abs() < 1e-14);
    }

    #[test]
    fn lstm1_rows_are_independent() {
        let inst = random_instance(CellKind::Lstm, 2, 2, 11);
        let w = &inst.weights;
        let x = [0.3, -0.2];
        let h = [0.1, 0.4];
        let a = lstm1(w, &x, &h, 0.25, 0).unwrap();
        // row 0 never reads c_prev[1]; changing it cannot matter
        let full = |c1: f64| {
            let s = CellState {
                h: h.to_vec(),
                c: vec![0.25, c1],
            };
            lstm_cell_step(w, &x, &s).unwrap().1
        };
        assert_eq!(full(0.9).c[0], full(-3.0).c[0]);
        assert_eq!(full(0.9).c[0], a.0);
        assert_ne!(full(0.9).c[1], full(-3.0).c[1]);
    }

    #[test]
    fn errors() {
        let w = CellWeights::<f64>::zeros(CellKind::Lstm, 2, 1);
        let s = CellState::zeros(CellKind::Lstm, 2);
        assert!(matches!(
            lstm_cell_step(&w, &[0.0, 0.0], &s),
            Err(RnnError::Shape { what: "x", .. })
        ));
        assert_eq!(
            lstm_cell_step(&w, &[f64::INFINITY], &s).unwrap_err(),
            RnnError::NonFinite("x")
        );
        assert_eq!(
            lstm1(&w, &[0.0], &s.h, 0.0, 2).unwrap_err(),
            RnnError::RowOutOfRange { row: 2, hidden: 2 }
        );
        assert_eq!(
            run_sequence(&w, &[], &s).unwrap_err(),
            RnnError::EmptySequence
        );
        assert!(matches!(
            gru_cell_step(&w, &[0.0], &s.h),
            Err(RnnError::WrongKind { .. })
        ));
    }

    #[test]
    fn sequence_of_one_is_one_step() {
        let inst = random_instance(CellKind::Lstm, 4, 3, 5);
        let s = CellState::zeros(CellKind::Lstm, 4);
        let x = vec![0.5, -0.5, 0.25];
        let seq = run_sequence(&inst.weights, std::slice::from_ref(&x), &s).unwrap();
        let (y, _) = lstm_cell_step(&inst.weights, &x, &s).unwrap();
        assert_eq!(seq, vec![y]);
    }

    #[test]
    fn zero_weight_sequence() {
        let w = CellWeights::<f64>::zeros(CellKind::Gru, 2, 2);
        let s = CellState::zeros(CellKind::Gru, 2);
        let out = run_sequence(&w, &vec![vec![1.0, -2.0]; 3], &s).unwrap();
        assert!(out.iter().flatten().all(|&v| v == 0.0));
    }
}
