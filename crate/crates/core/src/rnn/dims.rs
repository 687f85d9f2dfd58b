use serde::{Deserialize, Serialize};

use super::{Result, RnnError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CellKind {
    Lstm,
    Gru,
}

impl CellKind {
    pub fn gates(self) -> usize {
        match self {
            CellKind::Lstm => 4,
            CellKind::Gru => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            CellKind::Lstm => "lstm",
            CellKind::Gru => "gru",
        }
    }
}

impl std::str::FromStr for CellKind {
    type Err = RnnError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "lstm" => Ok(CellKind::Lstm),
            "gru" => Ok(CellKind::Gru),
            other => Err(RnnError::InvalidDims(format!(
                "unknown cell kind `{other}`"
            ))),
        }
    }
}

impl std::fmt::Display for CellKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            CellKind::Lstm => "LSTM",
            CellKind::Gru => "GRU",
        })
    }
}

/// Problem instance size. The reduction size `R = H + D` and the gate count
/// are derived, never stored.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CellDims {
    pub kind: CellKind,
    hidden: usize,
    input: usize,
    steps: usize,
}

impl CellDims {
    pub fn new(kind: CellKind, hidden: usize, input: usize, steps: usize) -> Result<Self> {
        if hidden == 0 || input == 0 || steps == 0 {
            return Err(RnnError::InvalidDims(format!(
                "H, D and T must be >= 1 (got H={hidden}, D={input}, T={steps})"
            )));
        }
        Ok(Self {
            kind,
            hidden,
            input,
            steps,
        })
    }

    pub fn lstm(hidden: usize, input: usize, steps: usize) -> Result<Self> {
        Self::new(CellKind::Lstm, hidden, input, steps)
    }

    pub fn gru(hidden: usize, input: usize, steps: usize) -> Result<Self> {
        Self::new(CellKind::Gru, hidden, input, steps)
    }

    /// `H`
    pub fn h(&self) -> usize {
        self.hidden
    }

    /// `D`
    pub fn d(&self) -> usize {
        self.input
    }

    /// `R = H + D`
    pub fn r(&self) -> usize {
        self.hidden + self.input
    }

    /// `G`
    pub fn g(&self) -> usize {
        self.kind.gates()
    }

    /// `T`
    pub fn t(&self) -> usize {
        self.steps
    }

    pub fn with_steps(self, steps: usize) -> Result<Self> {
        Self::new(self.kind, self.hidden, self.input, steps)
    }
}

/// Multiply-accumulate FLOPs of the gate MVMs over the whole sequence:
/// `2 * G * H * R * T`. Element-wise work is not counted.
pub fn flop_count(dims: &CellDims) -> u64 {
    2 * dims.g() as u64 * dims.h() as u64 * dims.r() as u64 * dims.t() as u64
}
