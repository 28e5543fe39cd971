//! In-place integer coefficient vectors for product-form expansions.
//!
//! Eta products and the bilateral sums behind the smallest-parts generating
//! functions are built from a few primitive steps: multiply or divide by
//! `(q^d; q^d)_inf`, divide by `1 - q^a`, and add shifted copies. Values
//! start small, so the vector runs on `i128` and promotes itself to
//! `BigInt` the first time a step overflows.

use num_bigint::BigInt;
use num_traits::Zero;

/// Generalized pentagonal exponents `g > 0` of `(q;q)_inf` below `limit`
/// with their signs.
pub(crate) fn pentagonal_terms(limit: usize) -> Vec<(usize, i8)> {
    let mut out = Vec::new();
    let mut k: usize = 1;
    loop {
        let sign = if k % 2 == 1 { -1 } else { 1 };
        let g1 = k * (3 * k - 1) / 2;
        let g2 = k * (3 * k + 1) / 2;
        if g1 >= limit {
            break;
        }
        out.push((g1, sign));
        if g2 < limit {
            out.push((g2, sign));
        }
        k += 1;
    }
    out
}

#[derive(Clone, Debug)]
pub(crate) enum IntVec {
    Small(Vec<i128>),
    Big(Vec<BigInt>),
}

impl IntVec {
    pub(crate) fn zeros(len: usize) -> Self {
        IntVec::Small(vec![0; len])
    }

    /// `1 + O(q^len)`.
    pub(crate) fn one(len: usize) -> Self {
        let mut v = vec![0; len];
        if len > 0 {
            v[0] = 1;
        }
        IntVec::Small(v)
    }

    pub(crate) fn len(&self) -> usize {
        match self {
            IntVec::Small(v) => v.len(),
            IntVec::Big(v) => v.len(),
        }
    }

    fn promote(&mut self) {
        if let IntVec::Small(v) = self {
            *self = IntVec::Big(v.iter().map(|&x| BigInt::from(x)).collect());
        }
    }

    /// Runs `small` on a copy; on overflow promotes and runs `big` instead.
    fn apply(
        &mut self,
        small: impl FnOnce(&mut [i128]) -> Option<()>,
        big: impl FnOnce(&mut [BigInt]),
    ) {
        if let IntVec::Small(v) = self {
            let mut trial = v.clone();
            if small(&mut trial).is_some() {
                *v = trial;
                return;
            }
            self.promote();
        }
        if let IntVec::Big(v) = self {
            big(v);
        }
    }

    /// Multiply by `(q^d; q^d)_inf`.
    pub(crate) fn mul_euler(&mut self, d: usize) {
        let len = self.len();
        if len == 0 {
            return;
        }
        let terms: Vec<(usize, i8)> = pentagonal_terms((len - 1) / d + 1)
            .into_iter()
            .map(|(g, s)| (g * d, s))
            .collect();
        self.apply(
            |v| {
                for n in (0..len).rev() {
                    let mut acc = v[n];
                    for &(g, s) in &terms {
                        if g > n {
                            break;
                        }
                        acc = if s > 0 { acc.checked_add(v[n - g])? } else { acc.checked_sub(v[n - g])? };
                    }
                    v[n] = acc;
                }
                Some(())
            },
            |v| {
                for n in (0..len).rev() {
                    let (lo, hi) = v.split_at_mut(n);
                    let target = &mut hi[0];
                    for &(g, s) in &terms {
                        if g > n {
                            break;
                        }
                        if s > 0 {
                            *target += &lo[n - g];
                        } else {
                            *target -= &lo[n - g];
                        }
                    }
                }
            },
        );
    }

    /// Divide by `(q^d; q^d)_inf`.
    pub(crate) fn div_euler(&mut self, d: usize) {
        let len = self.len();
        if len == 0 {
            return;
        }
        let terms: Vec<(usize, i8)> = pentagonal_terms((len - 1) / d + 1)
            .into_iter()
            .map(|(g, s)| (g * d, s))
            .collect();
        self.apply(
            |v| {
                for n in 0..len {
                    let mut acc = v[n];
                    for &(g, s) in &terms {
                        if g > n {
                            break;
                        }
                        acc = if s > 0 { acc.checked_sub(v[n - g])? } else { acc.checked_add(v[n - g])? };
                    }
                    v[n] = acc;
                }
                Some(())
            },
            |v| {
                for n in 0..len {
                    let (lo, hi) = v.split_at_mut(n);
                    let target = &mut hi[0];
                    for &(g, s) in &terms {
                        if g > n {
                            break;
                        }
                        if s > 0 {
                            *target -= &lo[n - g];
                        } else {
                            *target += &lo[n - g];
                        }
                    }
                }
            },
        );
    }

    /// Divide by `1 - q^a`, `a > 0`.
    pub(crate) fn div_one_minus(&mut self, a: usize) {
        let len = self.len();
        self.apply(
            |v| {
                for n in a..len {
                    v[n] = v[n].checked_add(v[n - a])?;
                }
                Some(())
            },
            |v| {
                for n in a..len {
                    let (lo, hi) = v.split_at_mut(n);
                    hi[0] += &lo[n - a];
                }
            },
        );
    }

    /// `self[shift + i] += scale * other[i]` for every index that fits.
    pub(crate) fn add_shifted(&mut self, other: &IntVec, shift: usize, scale: i64) {
        let len = self.len();
        if shift >= len {
            return;
        }
        let span = (len - shift).min(other.len());
        match other {
            IntVec::Small(o) => self.apply(
                |v| {
                    for i in 0..span {
                        let term = o[i].checked_mul(scale as i128)?;
                        v[shift + i] = v[shift + i].checked_add(term)?;
                    }
                    Some(())
                },
                |v| {
                    for i in 0..span {
                        v[shift + i] += BigInt::from(o[i]) * scale;
                    }
                },
            ),
            IntVec::Big(o) => {
                self.promote();
                if let IntVec::Big(v) = self {
                    for i in 0..span {
                        if !o[i].is_zero() {
                            v[shift + i] += &o[i] * scale;
                        }
                    }
                }
            }
        }
    }

    pub(crate) fn into_bigints(self) -> Vec<BigInt> {
        match self {
            IntVec::Small(v) => v.into_iter().map(BigInt::from).collect(),
            IntVec::Big(v) => v,
        }
    }

    pub(crate) fn set(&mut self, i: usize, value: i64) {
        match self {
            IntVec::Small(v) => v[i] = value as i128,
            IntVec::Big(v) => v[i] = BigInt::from(value),
        }
    }
}

/// Expands `sign * q^shift * N(q) / prod (1 - q^a_i)` on `[0, len)`, where
/// `N` is a list of monomials and every `a_i` may be negative. Negative
/// factors are rewritten with `1 - q^(-a) = -q^(-a) (1 - q^a)` first.
/// Returns the vector, or `None` when the term starts at or above `len`.
/// Panics if the normalized term has a negative exponent.
pub(crate) fn rational_term(
    len: usize,
    scale: i64,
    shift: i64,
    numerator: &[(i64, i64)],
    denominator: &[(i64, u32)],
) -> Option<IntVec> {
    let mut sign = scale;
    let mut shift = shift;
    let mut factors: Vec<(usize, u32)> = Vec::with_capacity(denominator.len());
    for &(a, mult) in denominator {
        assert!(a != 0, "denominator factor 1 - q^0");
        if a < 0 {
            if mult % 2 == 1 {
                sign = -sign;
            }
            shift += (-a) * mult as i64;
            factors.push(((-a) as usize, mult));
        } else {
            factors.push((a as usize, mult));
        }
    }
    let floor = shift + numerator.iter().map(|&(_, e)| e).min()?;
    assert!(floor >= 0, "bilateral term has negative exponent {floor}");
    if floor as usize >= len {
        return None;
    }
    let mut v = IntVec::zeros(len);
    for &(c, e) in numerator {
        let at = (shift + e) as usize;
        if at < len {
            let mut one = IntVec::zeros(1);
            one.set(0, c);
            v.add_shifted(&one, at, sign);
        }
    }
    for (a, mult) in factors {
        for _ in 0..mult {
            v.div_one_minus(a);
        }
    }
    Some(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_euler(len: usize) -> Vec<i64> {
        let mut v = vec![0i64; len];
        v[0] = 1;
        for n in 1..len {
            for i in (n..len).rev() {
                v[i] -= v[i - n];
            }
        }
        v
    }

    #[test]
    fn euler_product_matches_naive_expansion() {
        let len = 300;
        let mut v = IntVec::one(len);
        v.mul_euler(1);
        let got: Vec<i64> = v.into_bigints().iter().map(|x| i64::try_from(x).unwrap()).collect();
        assert_eq!(got, naive_euler(len));
    }

    #[test]
    fn division_undoes_multiplication_after_promotion() {
        let len = 700;
        let mut v = IntVec::one(len);
        for _ in 0..3 {
            v.div_euler(1);
        }
        assert!(matches!(v, IntVec::Big(_)));
        for _ in 0..3 {
            v.mul_euler(1);
        }
        let got = v.into_bigints();
        assert_eq!(got[0], BigInt::from(1));
        assert!(got[1..].iter().all(|x| x.is_zero()));
    }

    #[test]
    fn negative_factor_rewriting() {
        // q^3 / (1 - q^-1) = -q^4 / (1 - q) = -q^4 - q^5 - ...
        let v = rational_term(8, 1, 3, &[(1, 0)], &[(-1, 1)]).unwrap().into_bigints();
        let want: Vec<BigInt> = [0, 0, 0, 0, -1, -1, -1, -1].iter().map(|&x| BigInt::from(x)).collect();
        assert_eq!(v, want);
    }
}
