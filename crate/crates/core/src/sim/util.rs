//! Fragmentation utilization of tiled and loop-based mappings, in exact
//! rational arithmetic.

use num_rational::Ratio;
use num_traits::ToPrimitive;

pub type Fraction = Ratio<u128>;

fn padded(n: usize, tile: usize) -> u128 {
    (n.div_ceil(tile) * tile) as u128
}

/// Useful over provisioned MACs of one `H x r_hat` MVM tiled `hv x (rv * ru)`.
pub fn utilization_2d(h: usize, r_hat: usize, hv: usize, rv: usize, ru: usize) -> Fraction {
    assert!(
        h > 0 && r_hat > 0 && hv > 0 && rv > 0 && ru > 0,
        "dimensions must be >= 1"
    );
    Ratio::new((h * r_hat) as u128, padded(h, hv) * padded(r_hat, rv * ru))
}

/// Loop-based design: `hu` rows in flight, each reduced `rv * ru` columns at
/// a time over the concatenated `R`.
pub fn utilization_1d(h: usize, r: usize, hu: usize, rv: usize, ru: usize) -> Fraction {
    assert!(
        h > 0 && r > 0 && hu > 0 && rv > 0 && ru > 0,
        "dimensions must be >= 1"
    );
    Ratio::new((h * r) as u128, padded(h, hu) * padded(r, rv * ru))
}

pub fn to_f64(f: Fraction) -> f64 {
    f.to_f64().unwrap_or(f64::NAN)
}
