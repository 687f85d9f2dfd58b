use serde::{Deserialize, Serialize};

use super::{CellKind, Real, Result, RnnError};

/// Dense row-major matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Copy> Matrix<T> {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(RnnError::Shape {
                what: "matrix data",
                expected: rows * cols,
                got: data.len(),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn filled(rows: usize, cols: usize, value: T) -> Self {
        Self {
            rows,
            cols,
            data: vec![value; rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: T) {
        self.data[i * self.cols + j] = value;
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn map<U: Copy>(&self, f: impl Fn(T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }
}

/// Gate-ordered weights of one recurrent cell.
///
/// For gate `g`, `w_h[g]` is `H x H`, `w_x[g]` is `H x D` and `bias[g]` has
/// length `H`.
#[derive(Debug, Clone, PartialEq)]
pub struct CellWeights<T> {
    pub kind: CellKind,
    w_h: Vec<Matrix<T>>,
    w_x: Vec<Matrix<T>>,
    bias: Vec<Vec<T>>,
}

impl<T: Real> CellWeights<T> {
    pub fn new(
        kind: CellKind,
        w_h: Vec<Matrix<T>>,
        w_x: Vec<Matrix<T>>,
        bias: Vec<Vec<T>>,
    ) -> Result<Self> {
        let g = kind.gates();
        for (what, n) in [
            ("w_h gates", w_h.len()),
            ("w_x gates", w_x.len()),
            ("bias gates", bias.len()),
        ] {
            if n != g {
                return Err(RnnError::Shape {
                    what,
                    expected: g,
                    got: n,
                });
            }
        }
        let h = w_h[0].rows();
        let d = w_x[0].cols();
        if h == 0 || d == 0 {
            return Err(RnnError::InvalidDims("empty weight matrices".into()));
        }
        for gate in 0..g {
            check(("w_h rows", w_h[gate].rows()), h)?;
            check(("w_h cols", w_h[gate].cols()), h)?;
            check(("w_x rows", w_x[gate].rows()), h)?;
            check(("w_x cols", w_x[gate].cols()), d)?;
            check(("bias", bias[gate].len()), h)?;
            let finite = w_h[gate].as_slice().iter().all(|v| v.is_finite())
                && w_x[gate].as_slice().iter().all(|v| v.is_finite())
                && bias[gate].iter().all(|v| v.is_finite());
            if !finite {
                return Err(RnnError::NonFinite("weights"));
            }
        }
        Ok(Self {
            kind,
            w_h,
            w_x,
            bias,
        })
    }

    pub fn zeros(kind: CellKind, h: usize, d: usize) -> Self {
        let g = kind.gates();
        Self {
            kind,
            w_h: vec![Matrix::filled(h, h, T::zero()); g],
            w_x: vec![Matrix::filled(h, d, T::zero()); g],
            bias: vec![vec![T::zero(); h]; g],
        }
    }

    pub fn h(&self) -> usize {
        self.w_h[0].rows()
    }

    pub fn d(&self) -> usize {
        self.w_x[0].cols()
    }

    pub fn r(&self) -> usize {
        self.h() + self.d()
    }

    pub fn gates(&self) -> usize {
        self.kind.gates()
    }

    pub fn w_h(&self, gate: usize) -> &Matrix<T> {
        &self.w_h[gate]
    }

    pub fn w_x(&self, gate: usize) -> &Matrix<T> {
        &self.w_x[gate]
    }

    pub fn bias(&self, gate: usize) -> &[T] {
        &self.bias[gate]
    }

    pub fn w_h_mut(&mut self, gate: usize) -> &mut Matrix<T> {
        &mut self.w_h[gate]
    }

    pub fn w_x_mut(&mut self, gate: usize) -> &mut Matrix<T> {
        &mut self.w_x[gate]
    }

    pub fn bias_mut(&mut self, gate: usize) -> &mut [T] {
        &mut self.bias[gate]
    }

    /// Row `row` of the concatenated `H x R` matrix `[W_h | W_x]` of `gate`.
    pub fn concat_row(&self, gate: usize, row: usize) -> impl Iterator<Item = T> + '_ {
        self.w_h[gate]
            .row(row)
            .iter()
            .chain(self.w_x[gate].row(row))
            .copied()
    }

    /// Materialized `H x R` concatenated matrix of `gate`.
    pub fn concatenated(&self, gate: usize) -> Matrix<T> {
        let (h, r) = (self.h(), self.r());
        let mut data = Vec::with_capacity(h * r);
        for i in 0..h {
            data.extend(self.concat_row(gate, i));
        }
        Matrix {
            rows: h,
            cols: r,
            data,
        }
    }

    /// Converts every weight to another precision.
    pub fn cast<U: Real>(&self) -> CellWeights<U> {
        let conv = |v: T| U::from(v).expect("finite weight converts");
        CellWeights {
            kind: self.kind,
            w_h: self.w_h.iter().map(|m| m.map(conv)).collect(),
            w_x: self.w_x.iter().map(|m| m.map(conv)).collect(),
            bias: self
                .bias
                .iter()
                .map(|b| b.iter().map(|&v| conv(v)).collect())
                .collect(),
        }
    }
}

fn check((what, got): (&'static str, usize), expected: usize) -> Result<()> {
    if got == expected {
        Ok(())
    } else {
        Err(RnnError::Shape {
            what,
            expected,
            got,
        })
    }
}
