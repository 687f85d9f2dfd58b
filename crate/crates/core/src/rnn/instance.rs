//! Seeded random instances and the JSON weight file.
//!
//! JSON schema (all arrays row-major, gates in cell order):
//!
//! ```json
//! {
//!   "kind": "lstm",
//!   "dims": { "h": 2, "d": 3 },
//!   "gate_order": ["i", "j", "f", "o"],
//!   "w_h": [[/* H*H */], ...],
//!   "w_x": [[/* H*D */], ...],
//!   "bias": [[/* H */], ...]
//! }
//! ```

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{CellKind, CellState, CellWeights, Matrix, Result, RnnError};

pub fn gate_names(kind: CellKind) -> &'static [&'static str] {
    match kind {
        CellKind::Lstm => &["i", "j", "f", "o"],
        CellKind::Gru => &["r", "z", "n"],
    }
}

/// A reproducible problem instance: weights, initial state and inputs.
#[derive(Debug, Clone)]
pub struct Instance {
    pub weights: CellWeights<f64>,
    pub state: CellState<f64>,
    rng: ChaCha8Rng,
}

impl Instance {
    /// Draws a `steps x D` input sequence from the instance's stream.
    pub fn inputs(&mut self, steps: usize) -> Vec<Vec<f64>> {
        let d = self.weights.d();
        (0..steps)
            .map(|_| (0..d).map(|_| self.rng.gen_range(-1.0..1.0)).collect())
            .collect()
    }
}

/// Weights uniform in `[-1, 1) / sqrt(R)`, biases in `[-0.5, 0.5)`, initial
/// state in `[-0.5, 0.5)`. The same seed always gives the same instance.
pub fn random_instance(kind: CellKind, h: usize, d: usize, seed: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scale = 1.0 / ((h + d) as f64).sqrt();
    let g = kind.gates();
    let mat = |rows: usize, cols: usize, rng: &mut ChaCha8Rng| {
        let data = (0..rows * cols)
            .map(|_| rng.gen_range(-1.0..1.0) * scale)
            .collect();
        Matrix::from_vec(rows, cols, data).expect("sized")
    };
    let w_h: Vec<_> = (0..g).map(|_| mat(h, h, &mut rng)).collect();
    let w_x: Vec<_> = (0..g).map(|_| mat(h, d, &mut rng)).collect();
    let bias: Vec<Vec<f64>> = (0..g)
        .map(|_| (0..h).map(|_| rng.gen_range(-0.5..0.5)).collect())
        .collect();
    let weights = CellWeights::new(kind, w_h, w_x, bias).expect("consistent shapes");
    let mut state = CellState::zeros(kind, h);
    for v in state.h.iter_mut().chain(state.c.iter_mut()) {
        *v = rng.gen_range(-0.5..0.5);
    }
    Instance {
        weights,
        state,
        rng,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FileDims {
    pub h: usize,
    pub d: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub kind: CellKind,
    pub dims: FileDims,
    #[serde(default)]
    pub gate_order: Vec<String>,
    pub w_h: Vec<Vec<f64>>,
    pub w_x: Vec<Vec<f64>>,
    pub bias: Vec<Vec<f64>>,
}

impl InstanceFile {
    pub fn from_weights(w: &CellWeights<f64>) -> Self {
        let g = w.gates();
        Self {
            kind: w.kind,
            dims: FileDims { h: w.h(), d: w.d() },
            gate_order: gate_names(w.kind).iter().map(|s| s.to_string()).collect(),
            w_h: (0..g).map(|k| w.w_h(k).as_slice().to_vec()).collect(),
            w_x: (0..g).map(|k| w.w_x(k).as_slice().to_vec()).collect(),
            bias: (0..g).map(|k| w.bias(k).to_vec()).collect(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| RnnError::Format(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    pub fn into_weights(self) -> Result<CellWeights<f64>> {
        let names = gate_names(self.kind);
        if !self.gate_order.is_empty()
            && self
                .gate_order
                .iter()
                .map(String::as_str)
                .ne(names.iter().copied())
        {
            return Err(RnnError::Format(format!(
                "gate_order must be {names:?}, got {:?}",
                self.gate_order
            )));
        }
        let FileDims { h, d } = self.dims;
        if h == 0 || d == 0 {
            return Err(RnnError::InvalidDims(format!("h={h}, d={d}")));
        }
        let w_h = self
            .w_h
            .into_iter()
            .map(|v| Matrix::from_vec(h, h, v))
            .collect::<Result<Vec<_>>>()?;
        let w_x = self
            .w_x
            .into_iter()
            .map(|v| Matrix::from_vec(h, d, v))
            .collect::<Result<Vec<_>>>()?;
        CellWeights::new(self.kind, w_h, w_x, self.bias)
    }
}
