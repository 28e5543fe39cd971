use super::*;

fn int(n: i64) -> BigInt {
    BigInt::from(n)
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(int(n), int(d))
}

fn coeffs(s: &TruncatedSeries, range: std::ops::Range<i64>) -> Vec<i64> {
    range.map(|n| i64::try_from(s.integer_at(n).unwrap()).unwrap()).collect()
}

fn same_window(a: &TruncatedSeries, b: &TruncatedSeries) -> bool {
    let end = a.end().min(b.end());
    a.truncate(end) == b.truncate(end)
}

#[test]
fn printed_expansions() {
    let pbar = NamedForm::Pbar.expand(6).unwrap();
    assert_eq!(coeffs(&pbar, 0..6), [1, 2, 4, 8, 14, 24]);
    let r = NamedForm::R.expand(32).unwrap();
    let terms: Vec<(i64, i64)> = r.terms().map(|(e, c)| (e, i64::try_from(c.to_integer()).unwrap())).collect();
    assert_eq!(terms, [(-1, 1), (7, -1), (15, 1), (23, -2), (31, 3)]);
    assert_eq!(r.coeff_at(23).unwrap(), rat(-2, 1));
    assert_eq!(pbar.coeff_at(4).unwrap(), rat(14, 1));
    assert!(pbar.coeff_at(1_000_000).is_err());
}

#[test]
fn eisenstein_series() {
    let e2 = eisenstein(2, 10).unwrap();
    assert_eq!(coeffs(&e2, 0..4), [1, -24, -72, -96]);
    assert_eq!(eisenstein(4, 3).unwrap().integer_at(1).unwrap(), int(240));
    assert_eq!(eisenstein(6, 3).unwrap().integer_at(1).unwrap(), int(-504));
    assert!(eisenstein(3, 3).is_err());
    assert_eq!(e2.rescale(2).integer_at(2).unwrap(), int(-24));
}

#[test]
fn named_form_shapes() {
    assert_eq!(NamedForm::Psi.expand(20).unwrap().valuation(), 1);
    assert_eq!(NamedForm::J2.expand(20).unwrap().valuation(), -1);
    assert_eq!(coeffs(&NamedForm::Theta0.expand(10).unwrap(), 0..10), [1, 2, 0, 0, 2, 0, 0, 0, 0, 2]);
    assert_eq!(coeffs(&NamedForm::F.expand(8).unwrap(), 0..8), [0, 1, 0, 4, 0, 6, 0, 8]);
    assert_eq!(named_form("pbar", 5).unwrap(), NamedForm::Pbar.expand(5).unwrap());
    assert_eq!(named_form("nope", 5), Err(Error::UnknownForm("nope".into())));
    for f in NamedForm::ALL {
        let s = f.expand(200).unwrap();
        assert_eq!(s.valuation(), f.valuation(), "{f}");
        assert_eq!(s.bound(), Some(200), "{f}");
    }
}

#[test]
fn powers_agree_with_eta_quotients() {
    let pbar = NamedForm::Pbar.expand(50).unwrap();
    assert_eq!(pbar.mul(&pbar).integer_at(1).unwrap(), int(4));
    let rho = NamedForm::Rho.expand(50).unwrap();
    assert_eq!(pbar.pow_int(-8).unwrap(), rho);
    assert_eq!(coeffs(&rho, 0..3), [1, -16, 112]);
    let r = NamedForm::R.expand(800).unwrap();
    let psi8 = NamedForm::Psi.expand(101).unwrap().rescale(8);
    assert!(same_window(&r.pow_int(-8).unwrap(), &psi8));
    assert_eq!(r.invert().unwrap(), odd_square_theta(802));
    assert_eq!(pbar.invert().unwrap(), alternating_theta(50));
    assert_eq!(NamedForm::R.reciprocal(802), Some(r.invert().unwrap()));
    assert_eq!(NamedForm::Pbar.reciprocal(50), Some(pbar.invert().unwrap()));
    assert_eq!(NamedForm::E.reciprocal(50), None);
}

#[test]
fn psi_from_weight_four_eisenstein() {
    let n = 2000;
    let psi = NamedForm::Psi.expand(n).unwrap();
    let e4 = eisenstein(4, n).unwrap();
    let e4_2 = eisenstein(4, n / 2 + 1).unwrap().rescale(2).truncate(n);
    let rhs = e4.sub(&e4_2).unwrap().scale(&rat(16, 240));
    assert_eq!(psi.scale_int(16), rhs);
}

#[test]
fn derivatives_of_rho_and_psi() {
    let n = 2000;
    let e = NamedForm::E.expand(n).unwrap();
    let e2 = eisenstein(2, n).unwrap();
    let e2_2 = eisenstein(2, n / 2 + 1).unwrap().rescale(2).truncate(n);
    assert_eq!(e.sub(&e2).unwrap(), e2_2.sub(&e2).unwrap().scale_int(2));
    let rho = NamedForm::Rho.expand(n).unwrap();
    let psi = NamedForm::Psi.expand(n).unwrap();
    let lhs = rho.theta();
    let rhs = rho.mul(&e.sub(&e2).unwrap()).scale(&rat(-1, 3));
    assert_eq!(lhs, rhs);
    let lhs = psi.theta();
    let rhs = psi.mul(&e.scale_int(2).add(&e2).unwrap()).scale(&rat(1, 3));
    assert!(same_window(&lhs, &rhs));
}

#[test]
fn hauptmodul_and_psi_parity() {
    let j8 = NamedForm::J2.expand(20).unwrap().rescale(8);
    assert_eq!(j8.valuation(), -8);
    let psi = NamedForm::Psi.expand(5000).unwrap();
    assert!(psi.congruent_mod(&odd_square_theta(5000), &int(2)).unwrap().holds());
}

#[test]
fn decompositions() {
    let n = 200;
    let e6 = eisenstein(6, n).unwrap();
    let e6_2 = eisenstein(6, n / 2 + 1).unwrap().rescale(2).truncate(n);
    let e = NamedForm::E.expand(n).unwrap();
    let rho = NamedForm::Rho.expand(n).unwrap();
    let target = e.mul(&rho).scale_int(3);
    let c = decompose_in_basis(&target, &[e6, e6_2]).unwrap();
    assert_eq!(c, vec![rat(-1, 21), rat(64, 21)]);

    let psi = NamedForm::Psi.expand(n).unwrap();
    let basis: Vec<TruncatedSeries> = (0..4)
        .map(|i| rho.pow_int(3 - i).unwrap().mul(&psi.pow_int(i).unwrap()))
        .collect();
    let c = decompose_in_basis(&psi.pow_int(3).unwrap(), &basis).unwrap();
    assert_eq!(c, vec![rat(0, 1), rat(0, 1), rat(0, 1), rat(1, 1)]);

    let g = NamedForm::G.expand(400).unwrap();
    let j = NamedForm::J2.expand(60).unwrap().rescale(8);
    assert_eq!(hauptmodul_decompose(&g, &g, &j, 2).unwrap(), vec![rat(1, 1), rat(0, 1), rat(0, 1)]);
    assert_eq!(hauptmodul_decompose(&j.mul(&g), &g, &j, 1).unwrap(), vec![rat(0, 1), rat(1, 1)]);
}

#[test]
fn fricke_images_of_the_named_quotients() {
    let r = NamedForm::R.eta_quotient().unwrap();
    let img = fricke_eta(&r, 16).unwrap();
    assert_eq!(Some(img.quotient), NamedForm::Pbar.eta_quotient());
    assert_eq!(img.constant.to_string(), "2*sqrt(2)");
    let img = fricke_eta(&NamedForm::Psi.eta_quotient().unwrap(), 2).unwrap();
    assert_eq!(Some(img.quotient), NamedForm::Rho.eta_quotient());
    assert_eq!(img.constant.rational, rat(1, 64));
}

#[test]
fn expression_grammar() {
    let e: FormExpr = "rho8*R^-15".parse().unwrap();
    assert_eq!(e.factors.len(), 2);
    assert_eq!(e.factors[0], Factor { atom: Atom::Named(NamedForm::Rho), rescale: 8, power: 1 });
    assert_eq!(e.factors[1].power, -15);
    assert_eq!(e.to_string(), "rho8*R^-15");
    assert_eq!(e.valuation(), 15);
    let j: FormExpr = "j28".parse().unwrap();
    assert_eq!(j.factors[0].rescale, 8);
    assert!("Pbar^x".parse::<FormExpr>().is_err());
    assert!(matches!("foo".parse::<FormExpr>(), Err(Error::UnknownForm(_))));
    assert_eq!("spt".parse::<FormExpr>().unwrap().factors[0].atom, Atom::Statistic(crate::spt::Statistic::Spt));
    assert_eq!("sptbar".parse::<FormExpr>().unwrap().factors[0].atom, Atom::Statistic(crate::spt::Statistic::Sptbar));
}

#[test]
fn expression_expansion_matches_manual_products() {
    let n = 300;
    let e: FormExpr = "rho8*R^-15".parse().unwrap();
    let got = e.expand(n).unwrap();
    let rho8 = NamedForm::Rho.expand(n / 8 + 1).unwrap().rescale(8);
    let manual = rho8.mul(&NamedForm::R.expand(n).unwrap().pow_int(-15).unwrap());
    assert_eq!(got.bound(), Some(n));
    assert!(same_window(&got, &manual));

    let mixed: FormExpr = "E8*R^-7".parse().unwrap();
    let got = mixed.expand(n).unwrap();
    let e8 = NamedForm::E.expand(n / 8 + 2).unwrap().rescale(8);
    let manual = e8.mul(&NamedForm::R.expand(n + 14).unwrap().pow_int(-7).unwrap());
    assert_eq!(got.bound(), Some(n));
    assert!(same_window(&got, &manual));

    let with_stat: FormExpr = "Mbar*Pbar^2".parse().unwrap();
    let got = with_stat.expand(40).unwrap();
    let manual = crate::spt::mbar_series(40).unwrap().mul(&NamedForm::Pbar.expand(40).unwrap().pow_int(2).unwrap());
    assert_eq!(got, manual);

    let zero: FormExpr = "zero".parse().unwrap();
    assert!(zero.expand(10).unwrap().is_zero());
    let one: FormExpr = "one".parse().unwrap();
    assert_eq!(one.expand(3).unwrap(), TruncatedSeries::one().truncate(3));
}
