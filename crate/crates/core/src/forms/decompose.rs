use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::series::TruncatedSeries;

/// First exponent with a nonzero coefficient inside the window, if any.
fn pivot(s: &TruncatedSeries) -> Option<i64> {
    s.terms().next().map(|(e, _)| e)
}

/// Writes `f` as a rational combination of `basis`.
///
/// The basis is brought to echelon form internally, so elements may share a
/// valuation. After elimination the residual must vanish on its entire
/// window, not only at the pivots.
pub fn decompose_in_basis(f: &TruncatedSeries, basis: &[TruncatedSeries]) -> Result<Vec<BigRational>> {
    let k = basis.len();
    // (reduced row, its pivot, row as a combination of the basis)
    let mut rows: Vec<(TruncatedSeries, i64, Vec<BigRational>)> = Vec::with_capacity(k);
    for (i, b) in basis.iter().enumerate() {
        let mut s = b.clone();
        let mut comb = vec![BigRational::zero(); k];
        comb[i] = BigRational::one();
        for (row, p, rc) in &rows {
            let c = s.coeff_at(*p)?;
            if c.is_zero() {
                continue;
            }
            let factor = c / row.coeff_at(*p)?;
            s = s.sub(&row.scale(&factor))?;
            for (x, y) in comb.iter_mut().zip(rc) {
                *x -= &factor * y;
            }
        }
        let p = pivot(&s).ok_or(Error::DependentBasis)?;
        rows.push((s, p, comb));
    }

    let mut residual = f.clone();
    let mut coeffs = vec![BigRational::zero(); k];
    for (row, p, comb) in &rows {
        let c = residual.coeff_at(*p)?;
        if c.is_zero() {
            continue;
        }
        let factor = c / row.coeff_at(*p)?;
        residual = residual.sub(&row.scale(&factor))?;
        for (x, y) in coeffs.iter_mut().zip(comb) {
            *x += &factor * y;
        }
    }
    match pivot(&residual) {
        Some(exponent) => Err(Error::NotInSpan { exponent }),
        None => Ok(coeffs),
    }
}

/// Writes `f / base` as `c_0 + c_1 J + ... + c_degree J^degree`.
///
/// `hauptmodul` must have negative valuation; coefficients are found from
/// the most negative exponent upward and the remainder is checked on the
/// whole window.
pub fn hauptmodul_decompose(
    f: &TruncatedSeries,
    base: &TruncatedSeries,
    hauptmodul: &TruncatedSeries,
    degree: usize,
) -> Result<Vec<BigRational>> {
    let v = hauptmodul.valuation();
    if v >= 0 || hauptmodul.is_zero() {
        return Err(Error::InvalidArgument("Hauptmodul must have a pole at infinity".into()));
    }
    let mut h = f.div(base)?;
    let mut powers = vec![TruncatedSeries::one()];
    for n in 1..=degree {
        let next = powers[n - 1].mul(hauptmodul);
        powers.push(next);
    }
    let mut coeffs = vec![BigRational::zero(); degree + 1];
    for n in (0..=degree).rev() {
        let e = n as i64 * v;
        let c = h.coeff_at(e)?;
        if c.is_zero() {
            continue;
        }
        let factor = c / powers[n].coeff_at(e)?;
        h = h.sub(&powers[n].scale(&factor))?;
        coeffs[n] = factor;
    }
    match pivot(&h) {
        Some(exponent) => Err(Error::NotPolynomialInHauptmodul { exponent }),
        None => Ok(coeffs),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn series(start: i64, bound: i64, c: &[i64]) -> TruncatedSeries {
        TruncatedSeries::from_integers(start, Some(bound), c.iter().map(|&x| BigInt::from(x)).collect())
    }

    fn int(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn recovers_combination_from_non_echelon_basis() {
        let a = series(0, 10, &[1, 2, 3, 4]);
        let b = series(0, 10, &[1, 0, 0, 1]);
        let c = series(2, 10, &[5, 1]);
        let f = a.scale_int(3).sub(&b.scale_int(2)).unwrap().add(&c).unwrap();
        assert_eq!(decompose_in_basis(&f, &[a, b, c]).unwrap(), vec![int(3), int(-2), int(1)]);
    }

    #[test]
    fn reports_residual_off_the_pivots() {
        let a = series(0, 10, &[1]);
        let b = series(1, 10, &[1]);
        let f = series(0, 10, &[2, 3, 0, 0, 0, 0, 0, 1]);
        assert_eq!(decompose_in_basis(&f, &[a.clone(), b]), Err(Error::NotInSpan { exponent: 7 }));
        assert_eq!(decompose_in_basis(&f, &[a.clone(), a.scale_int(2)]), Err(Error::DependentBasis));
    }

    #[test]
    fn polynomial_in_a_pole() {
        // J = q^-2 + 1 + q, base = 1 + q.
        let j = series(-2, 10, &[1, 0, 1, 1]);
        let base = series(0, 12, &[1, 1]);
        let target = j.mul(&j).scale_int(3).add(&j.scale_int(-1)).unwrap().add(&series(0, 20, &[7])).unwrap();
        let f = target.mul(&base);
        let c = hauptmodul_decompose(&f, &base, &j, 2).unwrap();
        assert_eq!(c, vec![int(7), int(-1), int(3)]);
        assert_eq!(hauptmodul_decompose(&base, &base, &j, 3).unwrap(), vec![int(1), int(0), int(0), int(0)]);
        let off = f.add(&series(1, 20, &[1])).unwrap();
        assert_eq!(hauptmodul_decompose(&off, &base, &j, 2), Err(Error::NotPolynomialInHauptmodul { exponent: 1 }));
    }
}
