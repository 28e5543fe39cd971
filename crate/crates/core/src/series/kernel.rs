//! Integer polynomial kernels behind series multiplication and division.
//!
//! All routines work on numerator vectors indexed from the valuation and
//! truncate to a requested length. Three multiplication strategies are
//! chosen by a rough cost model: an `i128` accumulator when the product
//! provably fits, a zero-skipping schoolbook loop for sparse operands, and
//! Kronecker substitution (one big-integer product) for dense operands with
//! large coefficients.

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Signed, ToPrimitive, Zero};

struct Entry<'a> {
    index: usize,
    value: &'a BigInt,
    unit: i8,
}

fn nonzero(c: &[BigInt]) -> Vec<Entry<'_>> {
    c.iter()
        .enumerate()
        .filter(|(_, v)| !v.is_zero())
        .map(|(index, value)| {
            let unit = if value.is_one() {
                1
            } else if value.magnitude().is_one() {
                -1
            } else {
                0
            };
            Entry { index, value, unit }
        })
        .collect()
}

fn max_bits(entries: &[Entry<'_>]) -> u64 {
    entries.iter().map(|e| e.value.bits()).max().unwrap_or(0)
}

fn bit_length(n: u64) -> u64 {
    64 - n.leading_zeros() as u64
}

/// First `len` coefficients of `a * b`.
pub(crate) fn convolve(a: &[BigInt], b: &[BigInt], len: usize) -> Vec<BigInt> {
    let a = &a[..a.len().min(len)];
    let b = &b[..b.len().min(len)];
    let nz_a = nonzero(a);
    let nz_b = nonzero(b);
    if nz_a.is_empty() || nz_b.is_empty() {
        return vec![BigInt::zero(); len];
    }
    let bits_a = max_bits(&nz_a);
    let bits_b = max_bits(&nz_b);
    let terms = nz_a.len().min(nz_b.len()) as u64;
    let out_bits = bits_a + bits_b + bit_length(terms);

    if bits_a <= 63 && bits_b <= 63 && out_bits <= 126 {
        return convolve_small(&nz_a, &nz_b, len);
    }

    // Cost model in limb operations; constants are rough but only need to
    // separate the clearly sparse from the clearly dense regime.
    let limbs_a = bits_a.div_ceil(64) as f64;
    let limbs_b = bits_b.div_ceil(64) as f64;
    let pairs = pair_count(&nz_a, &nz_b, len) as f64;
    let school = pairs * (limbs_a * limbs_b + 6.0);
    let slot_bits = out_bits + 2;
    let slot_limbs = slot_bits.div_ceil(32) as usize;
    let total_limbs = ((a.len() + b.len()) * slot_limbs) as f64 / 2.0;
    let kron = 4.0 * total_limbs.powf(1.47) + 30.0 * (a.len() + b.len() + len) as f64;
    if school <= kron {
        convolve_school(&nz_a, &nz_b, len)
    } else {
        convolve_kronecker(a, b, len, slot_limbs)
    }
}

fn pair_count(a: &[Entry<'_>], b: &[Entry<'_>], len: usize) -> u64 {
    // Number of (i, j) pairs with i + j < len, by a two-pointer sweep.
    let mut count = 0u64;
    let mut hi = b.len();
    for e in a {
        while hi > 0 && b[hi - 1].index + e.index >= len {
            hi -= 1;
        }
        if hi == 0 {
            break;
        }
        count += hi as u64;
    }
    count
}

fn convolve_small(a: &[Entry<'_>], b: &[Entry<'_>], len: usize) -> Vec<BigInt> {
    let small = |v: &[Entry<'_>]| -> Vec<(usize, i128)> {
        v.iter()
            .map(|e| (e.index, e.value.to_i64().expect("bit bound checked") as i128))
            .collect()
    };
    let (sa, sb) = (small(a), small(b));
    let mut acc = vec![0i128; len];
    for &(i, x) in &sa {
        for &(j, y) in &sb {
            let k = i + j;
            if k >= len {
                break;
            }
            acc[k] += x * y;
        }
    }
    acc.into_iter().map(BigInt::from).collect()
}

fn convolve_school(a: &[Entry<'_>], b: &[Entry<'_>], len: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); len];
    for x in a {
        for y in b {
            let k = x.index + y.index;
            if k >= len {
                break;
            }
            let slot = &mut out[k];
            match (x.unit, y.unit) {
                (_, 1) => *slot += x.value,
                (_, -1) => *slot -= x.value,
                (1, _) => *slot += y.value,
                (-1, _) => *slot -= y.value,
                _ => *slot += x.value * y.value,
            }
        }
    }
    out
}

fn pack(c: &[BigInt], slot_limbs: usize) -> BigInt {
    let mut pos = vec![0u32; c.len() * slot_limbs];
    let mut neg: Option<Vec<u32>> = None;
    for (i, x) in c.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        let (sign, digits) = x.to_u32_digits();
        let at = i * slot_limbs;
        let target = if sign == Sign::Minus {
            neg.get_or_insert_with(|| vec![0u32; c.len() * slot_limbs])
        } else {
            &mut pos
        };
        target[at..at + digits.len()].copy_from_slice(&digits);
    }
    let p = BigInt::from_biguint(Sign::Plus, BigUint::new(pos));
    match neg {
        Some(n) => p - BigInt::from_biguint(Sign::Plus, BigUint::new(n)),
        None => p,
    }
}

fn unpack(p: &BigInt, slot_limbs: usize, len: usize) -> Vec<BigInt> {
    let (sign, digits) = p.to_u32_digits();
    let slot_bits = 32 * slot_limbs as u64;
    let half = BigUint::one() << (slot_bits - 1);
    let full = BigUint::one() << slot_bits;
    let mut out = Vec::with_capacity(len);
    let mut carry = false;
    for i in 0..len {
        let lo = i * slot_limbs;
        let slot = if lo >= digits.len() {
            BigUint::zero()
        } else {
            BigUint::from_slice(&digits[lo..(lo + slot_limbs).min(digits.len())])
        };
        let v = if carry { slot + 1u32 } else { slot };
        let c = if v >= half {
            carry = true;
            BigInt::from_biguint(Sign::Minus, &full - v)
        } else {
            carry = false;
            BigInt::from_biguint(Sign::Plus, v)
        };
        out.push(if sign == Sign::Minus { -c } else { c });
    }
    out
}

fn convolve_kronecker(a: &[BigInt], b: &[BigInt], len: usize, slot_limbs: usize) -> Vec<BigInt> {
    let pa = pack(a, slot_limbs);
    let prod = if std::ptr::eq(a, b) {
        &pa * &pa
    } else {
        let pb = pack(b, slot_limbs);
        pa * pb
    };
    unpack(&prod, slot_limbs, len)
}

/// First `len` coefficients of `a / b` where `b[0]` is `+1` or `-1`.
pub(crate) fn divide_unit(a: &[BigInt], b: &[BigInt], len: usize) -> Vec<BigInt> {
    debug_assert!(b[0].magnitude().is_one());
    let b = &b[..b.len().min(len)];
    let nz_b = nonzero(b);
    if nz_b.len() > 48 && len > 256 {
        let inv = invert_newton(b, len);
        return convolve(a, &inv, len);
    }
    if let Some(out) = divide_unit_small(a, b, len) {
        return out;
    }
    let negate = b[0].is_negative();
    let tail: Vec<&Entry<'_>> = nz_b.iter().filter(|e| e.index > 0).collect();
    let mut c: Vec<BigInt> = Vec::with_capacity(len);
    for n in 0..len {
        let mut acc = a.get(n).cloned().unwrap_or_default();
        for e in &tail {
            if e.index > n {
                break;
            }
            let prev = &c[n - e.index];
            if prev.is_zero() {
                continue;
            }
            match e.unit {
                1 => acc -= prev,
                -1 => acc += prev,
                _ => acc -= e.value * prev,
            }
        }
        if negate {
            acc = -acc;
        }
        c.push(acc);
    }
    c
}

fn divide_unit_small(a: &[BigInt], b: &[BigInt], len: usize) -> Option<Vec<BigInt>> {
    let to_small = |v: &[BigInt]| -> Option<Vec<i128>> {
        v.iter().map(|x| x.to_i64().map(i128::from)).collect()
    };
    let sa = to_small(&a[..a.len().min(len)])?;
    let sb = to_small(b)?;
    let tail: Vec<(usize, i128)> = sb
        .iter()
        .enumerate()
        .skip(1)
        .filter(|(_, v)| **v != 0)
        .map(|(i, v)| (i, *v))
        .collect();
    let lead = sb[0];
    let mut c: Vec<i128> = Vec::with_capacity(len);
    for n in 0..len {
        let mut acc = sa.get(n).copied().unwrap_or(0);
        for &(k, y) in &tail {
            if k > n {
                break;
            }
            acc = acc.checked_sub(y.checked_mul(c[n - k])?)?;
        }
        c.push(acc * lead);
    }
    Some(c.into_iter().map(BigInt::from).collect())
}

/// Newton iteration for `1 / b` to `len` terms, `b[0] = ±1`.
fn invert_newton(b: &[BigInt], len: usize) -> Vec<BigInt> {
    let two = BigInt::from(2);
    let mut g = vec![b[0].clone()];
    let mut prec = 1usize;
    while prec < len {
        let next = (2 * prec).min(len);
        let bg = convolve(&b[..b.len().min(next)], &g, next);
        // 2 - b*g
        let mut corr: Vec<BigInt> = bg.into_iter().map(|x| -x).collect();
        corr[0] += &two;
        g = convolve(&g, &corr, next);
        prec = next;
    }
    g
}

/// First `len` coefficients of `a / b` for an arbitrary nonzero `b[0]`.
///
/// Returns numerators over the common denominator `b[0]^len`.
pub(crate) fn divide_general(a: &[BigInt], b: &[BigInt], len: usize) -> (Vec<BigInt>, BigInt) {
    let lead = &b[0];
    let mut powers = Vec::with_capacity(len + 1);
    powers.push(BigInt::one());
    for i in 0..len {
        let next = &powers[i] * lead;
        powers.push(next);
    }
    // c_n = C_n / lead^(n+1),  C_n = a_n lead^n - sum_k b_k C_{n-k} lead^(k-1)
    let mut big_c: Vec<BigInt> = Vec::with_capacity(len);
    for n in 0..len {
        let mut acc = a.get(n).map(|x| x * &powers[n]).unwrap_or_default();
        for k in 1..=n.min(b.len().saturating_sub(1)) {
            if b[k].is_zero() || big_c[n - k].is_zero() {
                continue;
            }
            acc -= &b[k] * &big_c[n - k] * &powers[k - 1];
        }
        big_c.push(acc);
    }
    let nums = big_c
        .into_iter()
        .enumerate()
        .map(|(n, c)| c * &powers[len - 1 - n])
        .collect();
    (nums, powers[len].clone())
}

/// First `len` coefficients of `b^e` for `b[0] = +1 or -1` and any integer
/// `e`, by the J.C.P. Miller recurrence
/// `n b0 c(n) = sum_{k=1}^{n} ((e + 1) k - n) b(k) c(n - k)`.
///
/// Costs `O(len * nnz(b))`. When the tail of `b` lives on multiples of some
/// step the recurrence runs on the compressed sequence.
pub(crate) fn power_unit(b: &[BigInt], e: i64, len: usize) -> Vec<BigInt> {
    debug_assert!(b[0].magnitude().is_one());
    let mut out = vec![BigInt::zero(); len];
    if len == 0 {
        return out;
    }
    let negate = b[0].is_negative();
    let lead = if negate && e % 2 != 0 { -BigInt::one() } else { BigInt::one() };
    let b = &b[..b.len().min(len)];
    let step = b.iter().enumerate().skip(1).filter(|(_, c)| !c.is_zero()).fold(0, |g, (i, _)| gcd(g, i));
    if step == 0 {
        out[0] = lead;
        return out;
    }
    let m = len.div_ceil(step);
    let tail: Vec<(i64, &BigInt)> = b
        .iter()
        .enumerate()
        .skip(1)
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| ((i / step) as i64, c))
        .collect();
    let mut c: Vec<BigInt> = Vec::with_capacity(m);
    c.push(lead);
    for n in 1..m as i64 {
        let mut acc = BigInt::zero();
        for &(k, bk) in &tail {
            if k > n {
                break;
            }
            let w = (e + 1) * k - n;
            let prev = &c[(n - k) as usize];
            if w != 0 && !prev.is_zero() {
                acc += bk * prev * w;
            }
        }
        debug_assert!((&acc % n).is_zero());
        acc /= n;
        if negate {
            acc = -acc;
        }
        c.push(acc);
    }
    for (i, v) in c.into_iter().enumerate() {
        out[i * step] = v;
    }
    out
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn naive(a: &[BigInt], b: &[BigInt], len: usize) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); len];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                if i + j < len {
                    out[i + j] += x * y;
                }
            }
        }
        out
    }

    fn big_vec(v: &[i64], scale_bits: u64) -> Vec<BigInt> {
        v.iter()
            .map(|&x| BigInt::from(x) << scale_bits | BigInt::from(x.unsigned_abs() % 7))
            .collect()
    }

    #[test]
    fn miller_power_matches_repeated_products() {
        let b: Vec<BigInt> = [1i64, 0, 0, -3, 0, 0, 2, 0, 0, 5].iter().map(|&x| BigInt::from(x)).collect();
        let len = 40;
        let mut acc = vec![BigInt::one()];
        for e in 1..=5 {
            acc = naive(&acc, &b, len);
            assert_eq!(power_unit(&b, e, len), acc, "e = {e}");
        }
        let inv = power_unit(&b, -3, len);
        let cube = power_unit(&b, 3, len);
        let mut one = vec![BigInt::zero(); len];
        one[0] = BigInt::one();
        assert_eq!(naive(&inv, &cube, len), one);
        let neg: Vec<BigInt> = b.iter().map(|x| -x).collect();
        let sq = power_unit(&neg, 2, len);
        assert_eq!(sq, naive(&neg, &neg, len));
    }

    #[test]
    fn kronecker_matches_naive_with_signs() {
        let a = big_vec(&[3, -5, 0, 7, -1, 2, 0, -9], 300);
        let b = big_vec(&[-2, 4, 1, 0, -6], 200);
        let len = 10;
        let slot = ((301 + 201 + 4 + 2) as usize).div_ceil(32);
        assert_eq!(convolve_kronecker(&a, &b, len, slot), naive(&a, &b, len));
        assert_eq!(convolve_kronecker(&a, &a, len, slot + 8), naive(&a, &a, len));
    }

    #[test]
    fn newton_inverse_of_dense_series() {
        let b: Vec<BigInt> = (0..400).map(|i| BigInt::from(1 + (i * 7919) % 13) - 6 * (i % 2)).collect();
        let mut b = b;
        b[0] = BigInt::one();
        let inv = invert_newton(&b, 400);
        let prod = naive(&b, &inv, 400);
        assert!(prod[0].is_one());
        assert!(prod[1..].iter().all(|x| x.is_zero()));
    }

    #[test]
    fn general_division_recovers_quotient() {
        let a: Vec<BigInt> = [1, 2, 3].iter().map(|&x| BigInt::from(x)).collect();
        let b: Vec<BigInt> = [3, 1].iter().map(|&x| BigInt::from(x)).collect();
        let (nums, den) = divide_general(&a, &b, 4);
        // multiply back: b * (nums/den) == a
        let back = naive(&b, &nums, 4);
        for (n, v) in back.iter().enumerate() {
            let want = a.get(n).cloned().unwrap_or_default() * &den;
            assert_eq!(*v, want);
        }
    }

    proptest! {
        #[test]
        fn convolve_agrees_with_naive(
            a in prop::collection::vec(-1000i64..1000, 1..40),
            b in prop::collection::vec(-1000i64..1000, 1..40),
            shift in 0u64..200,
            len in 1usize..80,
        ) {
            let a = big_vec(&a, shift);
            let b = big_vec(&b, shift / 2);
            prop_assert_eq!(convolve(&a, &b, len), naive(&a, &b, len));
        }

        #[test]
        fn divide_unit_inverts_multiplication(
            a in prop::collection::vec(-50i64..50, 1..30),
            mut b in prop::collection::vec(-50i64..50, 1..30),
            neg in any::<bool>(),
        ) {
            b[0] = if neg { -1 } else { 1 };
            let a: Vec<BigInt> = a.into_iter().map(BigInt::from).collect();
            let b: Vec<BigInt> = b.into_iter().map(BigInt::from).collect();
            let len = 30;
            let q = divide_unit(&a, &b, len);
            let back = naive(&q, &b, len);
            for n in 0..len {
                prop_assert_eq!(&back[n], &a.get(n).cloned().unwrap_or_default());
            }
        }
    }
}
