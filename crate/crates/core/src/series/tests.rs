use super::*;
use proptest::prelude::*;

fn int(n: i64) -> BigInt {
    BigInt::from(n)
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(int(n), int(d))
}

fn series(start: i64, bound: Option<i64>, c: &[i64]) -> TruncatedSeries {
    TruncatedSeries::from_integers(start, bound, c.iter().map(|&x| int(x)).collect())
}

/// Naive reference product on explicit dense coefficient lists.
fn naive_product(a: &TruncatedSeries, b: &TruncatedSeries, bound: i64) -> Vec<BigRational> {
    let lo = a.valuation() + b.valuation();
    let mut out = vec![BigRational::zero(); (bound - lo).max(0) as usize];
    for (i, x) in a.terms() {
        for (j, y) in b.terms() {
            if i + j < bound {
                out[(i + j - lo) as usize] += &x * &y;
            }
        }
    }
    out
}

#[test]
fn canonical_form_strips_and_reduces() {
    let s = TruncatedSeries::from_numerators(-2, Some(10), int(6), vec![int(0), int(0), int(4), int(2), int(0)]);
    assert_eq!(s.valuation(), 0);
    assert_eq!(s.denominator(), &int(3));
    assert_eq!(s.numerators(), &[int(2), int(1)]);
    assert_eq!(s.coeff_at(0).unwrap(), rat(2, 3));
    assert_eq!(s.coeff_at(-5).unwrap(), rat(0, 1));
    assert_eq!(s.coeff_at(10), Err(Error::NotComputed { exponent: 10, bound: 10 }));
}

#[test]
fn truncated_zero_keeps_its_window() {
    let z = TruncatedSeries::zero_to(7);
    assert_eq!(z.valuation(), 7);
    assert_eq!(z.coeff_at(6).unwrap(), rat(0, 1));
    assert!(z.coeff_at(7).is_err());
    assert_eq!(format!("{z}"), "O(q^7)");
}

#[test]
fn disjoint_windows_do_not_add() {
    let a = series(10, Some(20), &[1]);
    assert_eq!(a.add(&TruncatedSeries::zero_to(5)), Err(Error::NoCommonWindow));
    // Below its valuation `a` is known to vanish, so a shorter summand is fine.
    let b = series(0, Some(5), &[1]);
    assert_eq!(a.add(&b).unwrap(), b);
    // A zero summand on a short window only shrinks the result.
    let c = series(0, Some(20), &[1, 1]);
    let d = c.add(&TruncatedSeries::zero_to(1)).unwrap();
    assert_eq!(d.bound(), Some(1));
}

#[test]
fn product_window_follows_valuations() {
    let a = series(2, Some(10), &[1, 1]);
    let b = series(-1, Some(5), &[3]);
    let p = a.mul(&b);
    assert_eq!(p.valuation(), 1);
    assert_eq!(p.bound(), Some(7));
}

#[test]
fn geometric_series_inverse() {
    let a = series(0, Some(12), &[1, -1]);
    let inv = a.invert().unwrap();
    for n in 0..12 {
        assert_eq!(inv.coeff_at(n).unwrap(), rat(1, 1));
    }
    assert_eq!(inv.bound(), Some(12));
    let b = series(0, Some(6), &[2, 1]);
    let inv = b.invert().unwrap();
    for n in 0..6 {
        assert_eq!(inv.coeff_at(n).unwrap(), rat(if n % 2 == 0 { 1 } else { -1 }, 1 << (n + 1)));
    }
}

#[test]
fn laurent_inverse_shifts_the_window() {
    let a = series(3, Some(10), &[1, 1]);
    let inv = a.invert().unwrap();
    assert_eq!(inv.valuation(), -3);
    assert_eq!(inv.bound(), Some(4));
    assert_eq!(inv.coeff_at(-2).unwrap(), rat(-1, 1));
}

#[test]
fn exact_polynomial_division_needs_truncation() {
    let a = series(0, None, &[1, 1]);
    assert!(matches!(a.invert(), Err(Error::InvalidArgument(_))));
    let m = series(2, None, &[5]);
    let inv = m.invert().unwrap();
    assert!(inv.is_exact());
    assert_eq!(inv.coeff_at(-2).unwrap(), rat(1, 5));
    assert_eq!(TruncatedSeries::zero().invert(), Err(Error::NonUnit));
}

#[test]
fn integer_powers() {
    let a = series(0, Some(30), &[1, 1]);
    let p = a.pow_int(5).unwrap();
    let binom = [1, 5, 10, 10, 5, 1];
    for (n, b) in binom.iter().enumerate() {
        assert_eq!(p.coeff_at(n as i64).unwrap(), rat(*b, 1));
    }
    assert_eq!(p.coeff_at(6).unwrap(), rat(0, 1));
    assert_eq!(a.pow_int(0).unwrap(), TruncatedSeries::one());
    let inv3 = a.pow_int(-3).unwrap();
    assert_eq!(inv3.mul(&p).truncate(30).coeff_at(2).unwrap(), rat(1, 1));
}

#[test]
fn rescale_and_decimate_round_trip() {
    let a = series(1, Some(10), &[1, -2, 3]);
    let r = a.rescale(8);
    assert_eq!(r.valuation(), 8);
    assert_eq!(r.bound(), Some(80));
    assert_eq!(r.coeff_at(16).unwrap(), rat(-2, 1));
    assert_eq!(r.coeff_at(17).unwrap(), rat(0, 1));
    assert_eq!(r.decimate(8).unwrap(), a);
    assert_eq!(
        series(0, Some(10), &[1, 1]).decimate(2),
        Err(Error::NotDecimable { step: 2, exponent: 1 })
    );
    assert_eq!(series(0, Some(9), &[1]).decimate(4).unwrap().bound(), Some(3));
}

#[test]
fn theta_and_shift() {
    let a = series(-1, Some(4), &[1, 1, 1, 1, 1]);
    let t = a.theta();
    assert_eq!(t.coeff_at(-1).unwrap(), rat(-1, 1));
    assert_eq!(t.coeff_at(0).unwrap(), rat(0, 1));
    assert_eq!(t.coeff_at(3).unwrap(), rat(3, 1));
    let s = a.shift(5);
    assert_eq!((s.valuation(), s.bound()), (4, Some(9)));
}

#[test]
fn congruence_reports_first_failure() {
    let a = series(0, Some(10), &[1, 7, 14, 3]);
    let b = series(0, Some(8), &[8, 0, 0, 3, 0, 0, 0, 0]);
    let m = int(7);
    let c = a.congruent_mod(&b, &m).unwrap();
    assert!(c.holds());
    assert_eq!(c.bound, Some(8));
    let b2 = series(0, Some(8), &[8, 0, 1]);
    let c = a.congruent_mod(&b2, &m).unwrap();
    assert_eq!(c.first_failure, Some(Mismatch { exponent: 2, lhs: int(0), rhs: int(1) }));

    let half = TruncatedSeries::from_rationals(0, Some(4), &[rat(0, 1), rat(1, 2)]);
    assert_eq!(
        half.congruent_mod(&TruncatedSeries::zero_to(4), &int(4)),
        Err(Error::ModulusNotInvertible { exponent: 1 })
    );
    let quarter = TruncatedSeries::from_rationals(0, Some(4), &[rat(-1, 4)]);
    let eleven = series(0, Some(4), &[11]);
    assert!(quarter.congruent_mod(&eleven, &int(15)).unwrap().holds());
}

#[test]
fn display_form() {
    let a = TruncatedSeries::from_rationals(0, Some(5), &[rat(1, 1), rat(-1, 1), rat(0, 1), rat(3, 2)]);
    assert_eq!(a.to_string(), "1 - q + 3/2*q^3 + O(q^5)");
    assert_eq!(TruncatedSeries::zero().to_string(), "0");
}

#[test]
fn text_json_csv_encodings() {
    let a = TruncatedSeries::from_rationals(-1, Some(3), &[rat(1, 1), rat(0, 1), rat(-5, 3)]);
    let text = a.to_text();
    assert_eq!(text, "#valuation\t-1\n#bound\t3\n-1\t1/1\n0\t0/1\n1\t-5/3\n2\t0/1\n");
    assert_eq!(TruncatedSeries::from_text(&text).unwrap(), a);
    let json = a.to_json();
    assert_eq!(json, r#"{"valuation":-1,"bound":3,"coeffs":[[-1,"1/1"],[1,"-5/3"]]}"#);
    assert_eq!(TruncatedSeries::from_json(&json).unwrap(), a);
    assert_eq!(a.to_csv(), "exponent,value\n-1,1\n0,0\n1,-5/3\n2,0\n");
    let exact = series(0, None, &[2, 0, 1]);
    assert!(exact.to_text().contains("#bound\texact"));
    assert_eq!(TruncatedSeries::from_json(&exact.to_json()).unwrap(), exact);
}

fn arb_series() -> impl Strategy<Value = TruncatedSeries> {
    (-3i64..4, 1i64..25, prop::collection::vec(-20i64..20, 1..25)).prop_map(|(v, extra, c)| {
        let bound = v + extra;
        series(v, Some(bound), &c)
    })
}

fn arb_unit() -> impl Strategy<Value = TruncatedSeries> {
    (-3i64..4, prop::sample::select(vec![-3i64, -1, 1, 2]), prop::collection::vec(-20i64..20, 0..25)).prop_map(
        |(v, lead, mut c)| {
            c.insert(0, lead);
            series(v, Some(v + 25), &c)
        },
    )
}

proptest! {
    #[test]
    fn product_matches_naive(a in arb_series(), b in arb_series()) {
        let p = a.mul(&b);
        if let Some(bound) = p.bound() {
            let want = naive_product(&a, &b, bound);
            let lo = a.valuation() + b.valuation();
            for n in lo..bound {
                prop_assert_eq!(p.coeff_at(n).unwrap(), want[(n - lo) as usize].clone());
            }
        }
    }

    #[test]
    fn ring_axioms_on_common_window(a in arb_series(), b in arb_series(), c in arb_series()) {
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        if let (Ok(ab), Ok(bc)) = (a.add(&b), b.add(&c)) {
            if let (Ok(l), Ok(r)) = (ab.add(&c), a.add(&bc)) {
                prop_assert_eq!(l, r);
            }
        }
        if let (Ok(s), Ok(ac_bc)) = (a.add(&b), a.mul(&c).add(&b.mul(&c))) {
            let lhs = s.mul(&c);
            let common = lhs.end().min(ac_bc.end());
            prop_assert_eq!(lhs.truncate(common), ac_bc.truncate(common));
        }
    }

    #[test]
    fn inverse_times_self_is_one(u in arb_unit()) {
        let inv = u.invert().unwrap();
        let p = u.mul(&inv);
        prop_assert_eq!(p.bound(), Some(25));
        prop_assert_eq!(p, TruncatedSeries::one().truncate(25));
    }

    #[test]
    fn division_is_multiplication_by_inverse(a in arb_series(), u in arb_unit()) {
        let d = a.div(&u).unwrap();
        let m = a.mul(&u.invert().unwrap());
        let common = d.end().min(m.end());
        prop_assert_eq!(d.truncate(common), m.truncate(common));
    }

    #[test]
    fn theta_is_a_derivation(a in arb_series(), b in arb_series()) {
        let lhs = a.mul(&b).theta();
        let rhs = a.theta().mul(&b).add(&a.mul(&b.theta()));
        if let Ok(rhs) = rhs {
            let common = lhs.end().min(rhs.end());
            prop_assert_eq!(lhs.truncate(common), rhs.truncate(common));
        }
    }

    #[test]
    fn bound_is_never_overstated(a in arb_series(), b in arb_series(), extra in prop::collection::vec(-20i64..20, 0..10)) {
        // Changing coefficients at or past the bound must not change the product window.
        let ext_a = {
            let mut c: Vec<BigInt> = (a.valuation()..a.end()).map(|n| a.coeff_at(n).unwrap().to_integer()).collect();
            c.extend(extra.iter().map(|&x| int(x)));
            TruncatedSeries::from_integers(a.valuation(), Some(a.end() + extra.len() as i64), c)
        };
        let p = a.mul(&b);
        let q = ext_a.mul(&b);
        let common = p.end().min(q.end());
        prop_assert_eq!(p.truncate(common), q.truncate(common));
    }

    #[test]
    fn pow_matches_repeated_product(u in arb_unit(), e in -4i64..6) {
        let base = if e < 0 { u.invert().unwrap() } else { u.clone() };
        let want = (0..e.abs()).fold(TruncatedSeries::one(), |acc, _| acc.mul(&base));
        let got = u.pow_int(e).unwrap();
        let common = got.end().min(want.end());
        prop_assert_eq!(got.truncate(common), want.truncate(common));
    }

    #[test]
    fn rescale_is_multiplicative(a in arb_series(), b in arb_series(), m in 1u64..5) {
        prop_assert_eq!(a.mul(&b).rescale(m), a.rescale(m).mul(&b.rescale(m)));
    }

    #[test]
    fn text_round_trip(a in arb_series()) {
        prop_assert_eq!(TruncatedSeries::from_text(&a.to_text()).unwrap(), a.clone());
        prop_assert_eq!(TruncatedSeries::from_json(&a.to_json()).unwrap(), a);
    }
}
