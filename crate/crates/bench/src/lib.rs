//! Deterministic inputs shared by the benchmarks.

use num_bigint::BigInt;
use qhecke::TruncatedSeries;

/// Dense integer series `1 + sum c_n q^n` below `bound`, with coefficients
/// from a fixed linear congruential sequence in `[-500, 500)`.
pub fn dense_unit(bound: i64) -> TruncatedSeries {
    let mut state: u64 = 0x2545_f491_4f6c_dd1d;
    let coeffs = (0..bound)
        .map(|n| {
            state = state.wrapping_mul(6_364_136_223_846_793_005).wrapping_add(1_442_695_040_888_963_407);
            if n == 0 {
                BigInt::from(1)
            } else {
                BigInt::from((state >> 33) as i64 % 1000 - 500)
            }
        })
        .collect();
    TruncatedSeries::from_integers(0, Some(bound), coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dense_unit_is_a_unit() {
        let s = dense_unit(50);
        assert_eq!(s.valuation(), 0);
        assert_eq!(s.end(), 50);
        assert_eq!(s.integer_at(0).unwrap(), BigInt::from(1));
        assert_eq!(s, dense_unit(50));
    }
}
