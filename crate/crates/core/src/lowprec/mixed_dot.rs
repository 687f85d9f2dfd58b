//! Mixed-precision dot product as executed by one PCU map-reduce.
//!
//! Each issue consumes `4 * lanes` pairs of `Float8` operands (one packed
//! word per lane and operand):
//!
//! 1. products are formed exactly and rounded to binary16;
//! 2. adjacent product pairs are summed in binary16 (`2 * lanes` values);
//! 3. the halves are widened to `f32` and reduced by a pairwise tree in
//!    `f32`, adjacent pairs, lowest index first, until one value remains;
//! 4. the issue sum is added to an `f32` accumulator.
//!
//! Overflow follows IEEE semantics (binary16 products beyond 65504 become
//! infinities).

use half::f16;

use super::{Float8, LowPrecError, Result};

/// Intermediate values of a single issue.
#[derive(Debug, Clone, PartialEq)]
pub struct IssueStages {
    pub products: Vec<f16>,
    pub pair_sums: Vec<f16>,
    /// Tree levels in `f32`; the first entry is the widened pair sums, the
    /// last holds the single issue sum.
    pub tree: Vec<Vec<f32>>,
}

impl IssueStages {
    pub fn sum(&self) -> f32 {
        self.tree.last().expect("tree has a root")[0]
    }
}

/// Stage-by-stage values of one issue of exactly `4 * lanes` operand pairs.
pub fn mixed_dot_issue_stages(a: &[Float8], b: &[Float8]) -> Result<IssueStages> {
    if a.len() != b.len() {
        return Err(LowPrecError::LengthMismatch(a.len(), b.len()));
    }
    let n = a.len();
    if n < 4 || !n.is_multiple_of(4) || !(n / 4).is_power_of_two() {
        return Err(LowPrecError::Lanes(n / 4));
    }
    let products: Vec<f16> = a
        .iter()
        .zip(b)
        .map(|(x, y)| f16::from_f64(x.to_f64() * y.to_f64()))
        .collect();
    let pair_sums: Vec<f16> = products
        .chunks_exact(2)
        .map(|p| f16::from_f64(p[0].to_f64() + p[1].to_f64()))
        .collect();
    let mut tree = vec![pair_sums.iter().map(|h| h.to_f32()).collect::<Vec<f32>>()];
    while tree.last().unwrap().len() > 1 {
        let next = tree
            .last()
            .unwrap()
            .chunks_exact(2)
            .map(|p| p[0] + p[1])
            .collect();
        tree.push(next);
    }
    Ok(IssueStages {
        products,
        pair_sums,
        tree,
    })
}

/// Dot product of `a` and `b` on a PCU with `lanes` SIMD lanes. The length
/// must be a multiple of `4 * lanes`; issues are accumulated in order.
pub fn mixed_dot(a: &[Float8], b: &[Float8], lanes: usize) -> Result<f32> {
    if lanes == 0 || !lanes.is_power_of_two() {
        return Err(LowPrecError::Lanes(lanes));
    }
    if a.len() != b.len() {
        return Err(LowPrecError::LengthMismatch(a.len(), b.len()));
    }
    let issue = 4 * lanes;
    if !a.len().is_multiple_of(issue) {
        return Err(LowPrecError::IssueLength {
            len: a.len(),
            issue,
        });
    }
    let mut acc = 0.0f32;
    for (ca, cb) in a.chunks_exact(issue).zip(b.chunks_exact(issue)) {
        acc += mixed_dot_issue_stages(ca, cb)?.sum();
    }
    Ok(acc)
}
