//! Elementary number theory: characters, divisor sums, primality, and
//! reduction of rationals modulo an integer.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

/// Kronecker symbol `(a/n)` for all integers, with `(a/0) = [a = ±1]`,
/// `(a/-1) = sign(a)` and `(a/2)` from `a mod 8`.
pub fn kronecker(a: i64, n: i64) -> i32 {
    if n == 0 {
        return i32::from(a == 1 || a == -1);
    }
    let mut result = 1;
    let mut n = n;
    if n < 0 {
        n = -n;
        if a < 0 {
            result = -1;
        }
    }
    let twos = n.trailing_zeros();
    n >>= twos;
    if twos > 0 {
        if a % 2 == 0 {
            return 0;
        }
        if twos % 2 == 1 && matches!(a.rem_euclid(8), 3 | 5) {
            result = -result;
        }
    }
    result * jacobi(a.rem_euclid(n), n)
}

/// Jacobi symbol `(a/n)` for odd positive `n`.
pub fn jacobi(a: i64, n: i64) -> i32 {
    assert!(n > 0 && n % 2 == 1, "Jacobi symbol needs an odd positive modulus");
    let mut a = a.rem_euclid(n);
    let mut n = n;
    let mut result = 1;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if matches!(n % 8, 3 | 5) {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

/// A real quadratic character: trivial, or `m -> (D/m)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum QuadChar {
    Trivial,
    Kronecker(i64),
}

impl QuadChar {
    pub fn eval(&self, m: i64) -> i32 {
        match *self {
            QuadChar::Trivial => 1,
            QuadChar::Kronecker(d) => kronecker(d, m),
        }
    }
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, b, m);
        }
        b = mulmod(b, b, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin for all `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for p in WITNESSES {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in WITNESSES {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub fn is_odd_prime(n: i64) -> bool {
    n > 2 && is_prime(n as u64)
}

/// Prime factorization by trial division, as `(prime, exponent)` pairs.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_squarefree(n: i64) -> bool {
    n > 0 && factorize(n as u64).iter().all(|&(_, e)| e == 1)
}

/// Positive divisors in increasing order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// `sigma_k(n)`, zero for `n <= 0`.
pub fn sigma(k: u32, n: i64) -> BigInt {
    if n <= 0 {
        return BigInt::zero();
    }
    divisors(n as u64).into_iter().map(|d| BigInt::from(d).pow(k)).sum()
}

/// `sigma_k(n)` for every `n < len` (index 0 holds zero).
pub fn sigma_table(k: u32, len: usize) -> Vec<BigInt> {
    let fits = len < 2 || ((len as f64).log2() * (k as f64 + 1.0)) < 120.0;
    if fits {
        let mut t = vec![0i128; len];
        for d in 1..len {
            let dk = (d as i128).pow(k);
            for m in (d..len).step_by(d) {
                t[m] += dk;
            }
        }
        t.into_iter().map(BigInt::from).collect()
    } else {
        let mut t = vec![BigInt::zero(); len];
        for d in 1..len {
            let dk = BigInt::from(d).pow(k);
            for m in (d..len).step_by(d) {
                t[m] += &dk;
            }
        }
        t
    }
}

/// Bernoulli numbers `B_n` with `B_1 = -1/2`.
pub fn bernoulli(n: usize) -> BigRational {
    let mut b: Vec<BigRational> = Vec::with_capacity(n + 1);
    for m in 0..=n {
        if m == 0 {
            b.push(BigRational::one());
            continue;
        }
        // sum_{j<=m} C(m+1, j) B_j = 0
        let mut acc = BigRational::zero();
        let mut binom = BigInt::one();
        for (j, bj) in b.iter().enumerate() {
            acc += bj * BigRational::from_integer(binom.clone());
            binom = binom * BigInt::from(m + 1 - j) / BigInt::from(j + 1);
        }
        b.push(-acc / BigRational::from_integer(BigInt::from(m + 1)));
    }
    b.pop().expect("n + 1 entries")
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

/// Image of `r` in `Z/mZ`, or `None` when its denominator shares a factor
/// with `m`.
pub fn reduce_mod(r: &BigRational, m: &BigInt) -> Option<BigInt> {
    if m.is_one() {
        return Some(BigInt::zero());
    }
    let inv = mod_inverse(r.denom(), m)?;
    Some((r.numer() * inv).mod_floor(m))
}

/// `ell^e` as a rational for any integer `e`.
pub fn rational_pow(base: i64, e: i64) -> BigRational {
    let p = BigInt::from(base).pow(e.unsigned_abs() as u32);
    if e >= 0 {
        BigRational::from_integer(p)
    } else {
        BigRational::new(BigInt::one(), p)
    }
}

/// Integer square root of a nonnegative `n`.
pub fn isqrt(n: i64) -> i64 {
    if n < 0 {
        return -1;
    }
    let mut r = (n as f64).sqrt() as i64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn euler_criterion(a: i64, p: i64) -> i32 {
        let r = powmod(a.rem_euclid(p) as u64, ((p - 1) / 2) as u64, p as u64);
        match r {
            0 => 0,
            1 => 1,
            _ => -1,
        }
    }

    #[test]
    fn kronecker_matches_euler_criterion_for_odd_primes() {
        for p in [3i64, 5, 7, 11, 13, 17, 19, 23, 101] {
            for a in -60..60 {
                assert_eq!(kronecker(a, p), euler_criterion(a, p), "({a}/{p})");
            }
        }
    }

    #[test]
    fn kronecker_at_two_and_minus_one() {
        for a in -40i64..40 {
            let want = if a % 2 == 0 {
                0
            } else if matches!(a.rem_euclid(8), 1 | 7) {
                1
            } else {
                -1
            };
            assert_eq!(kronecker(a, 2), want);
            assert_eq!(kronecker(a, -1), if a < 0 { -1 } else { 1 });
        }
        assert_eq!(kronecker(1, 0), 1);
        assert_eq!(kronecker(2, 0), 0);
    }

    #[test]
    fn characters_used_by_the_congruences() {
        // (-1/p) = 1 iff p ≡ 1 mod 4; (2/p) = 1 iff p ≡ ±1 mod 8.
        for p in [3i64, 5, 7, 11, 13, 17, 23, 31, 41] {
            assert_eq!(kronecker(-1, p) == 1, p % 4 == 1);
            assert_eq!(kronecker(2, p) == 1, p % 8 == 1 || p % 8 == 7);
            assert_eq!(kronecker(12, p), kronecker(3, p));
        }
    }

    #[test]
    fn primality_and_squarefree() {
        let sieve: Vec<u64> = (0..2000u64)
            .filter(|&n| n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0))
            .collect();
        let fast: Vec<u64> = (0..2000).filter(|&n| is_prime(n)).collect();
        assert_eq!(sieve, fast);
        assert!(is_prime(18446744073709551557));
        assert!(!is_prime(3215031751));
        assert!(is_squarefree(30) && !is_squarefree(12) && !is_squarefree(0));
        assert!(!is_odd_prime(2) && is_odd_prime(41));
    }

    #[test]
    fn bernoulli_numbers() {
        let r = |n: i64, d: i64| BigRational::new(BigInt::from(n), BigInt::from(d));
        assert_eq!(bernoulli(1), r(-1, 2));
        assert_eq!(bernoulli(2), r(1, 6));
        assert_eq!(bernoulli(4), r(-1, 30));
        assert_eq!(bernoulli(6), r(1, 42));
        assert_eq!(bernoulli(12), r(-691, 2730));
        assert_eq!(bernoulli(7), r(0, 1));
    }

    #[test]
    fn sigma_table_agrees_with_divisor_sums() {
        for k in [0u32, 1, 3, 5, 11] {
            let t = sigma_table(k, 200);
            for n in 0..200 {
                assert_eq!(t[n], sigma(k, n as i64), "sigma_{k}({n})");
            }
        }
        assert_eq!(sigma(1, 12), BigInt::from(28));
        assert_eq!(sigma(1, -3), BigInt::zero());
    }

    #[test]
    fn rational_reduction() {
        let m = BigInt::from(15);
        let q = BigRational::new(BigInt::from(-1), BigInt::from(4));
        assert_eq!(reduce_mod(&q, &m), Some(BigInt::from(11)));
        let bad = BigRational::new(BigInt::from(1), BigInt::from(3));
        assert_eq!(reduce_mod(&bad, &m), None);
    }

    proptest! {
        #[test]
        fn kronecker_is_multiplicative_in_the_top(a in -200i64..200, b in -200i64..200, n in 1i64..300) {
            prop_assert_eq!(kronecker(a * b, n), kronecker(a, n) * kronecker(b, n));
        }

        #[test]
        fn kronecker_is_multiplicative_in_the_bottom(a in -200i64..200, m in 1i64..200, n in 1i64..200) {
            prop_assert_eq!(kronecker(a, m * n), kronecker(a, m) * kronecker(a, n));
        }

        #[test]
        fn sigma_three_and_one_agree_mod_two(n in 1i64..5000) {
            prop_assert!((sigma(3, n) - sigma(1, n)).is_even());
        }

        #[test]
        fn inverse_really_inverts(a in 1i64..10_000, m in 2i64..10_000) {
            let (a, m) = (BigInt::from(a), BigInt::from(m));
            match mod_inverse(&a, &m) {
                Some(x) => prop_assert!(((a * x) % &m).is_one()),
                None => prop_assert!(!a.gcd(&m).is_one()),
            }
        }
    }
}
