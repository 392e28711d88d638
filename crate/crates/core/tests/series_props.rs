use anharm::series::*;
use proptest::prelude::*;

const ORDER_MAX: usize = 8;

/// Random series with zero constant term and `degree(term n) <= n`.
fn small_series() -> impl Strategy<Value = CoefficientSeries> {
    (1..=ORDER_MAX).prop_flat_map(|order| {
        let terms: Vec<_> = (1..=order)
            .map(|n| prop::collection::vec(-0.5f64..0.5, n + 1))
            .collect();
        terms.prop_map(move |t| {
            let polys = t.into_iter().map(BetaPolynomial::from_coeffs).collect();
            CoefficientSeries::from_terms(0.0, polys, order)
        })
    })
}

fn pair() -> impl Strategy<Value = (CoefficientSeries, CoefficientSeries)> {
    small_series().prop_flat_map(|a| {
        let order = a.order();
        let terms: Vec<_> = (1..=order)
            .map(|n| prop::collection::vec(-0.5f64..0.5, n + 1))
            .collect();
        terms.prop_map(move |t| {
            let polys = t.into_iter().map(BetaPolynomial::from_coeffs).collect();
            (a.clone(), CoefficientSeries::from_terms(0.0, polys, order))
        })
    })
}

fn assert_close(a: &CoefficientSeries, b: &CoefficientSeries, tol: f64) {
    assert_eq!(a.order(), b.order());
    for n in 0..=a.order() {
        let (p, q) = (a.term(n), b.term(n));
        for k in 0..=p.degree().max(q.degree()) {
            let (x, y) = (p.coeff(k), q.coeff(k));
            let scale = x.abs().max(y.abs()).max(1.0);
            assert!((x - y).abs() <= tol * scale, "term {n}, beta^{k}: {x} vs {y}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn exp_inverts_log1p(a in small_series()) {
        let one_plus_a = a.with_constant(1.0);
        assert_close(&a.log1p().exp(), &one_plus_a, 1e-12);
    }

    #[test]
    fn log1p_inverts_exp(a in small_series()) {
        let e = a.exp().with_constant(0.0);
        assert_close(&e.log1p(), &a, 1e-12);
    }

    #[test]
    fn mul_commutes((a, b) in pair()) {
        let a1 = a.with_constant(0.7);
        assert_close(&(&a1 * &b), &(&b * &a1), 1e-12);
    }

    #[test]
    fn mul_associates((a, b) in pair()) {
        let c = a.exp();
        assert_close(&(&(&a * &b) * &c), &(&a * &(&b * &c)), 1e-12);
    }

    #[test]
    fn square_root_squares_back(a in small_series()) {
        let root = a.pow1p(0.5);
        assert_close(&(&root * &root), &a.with_constant(1.0), 1e-12);
    }

    #[test]
    fn recip_is_inverse(a in small_series()) {
        let x = a.with_constant(1.3);
        assert_close(&(&x * &x.recip()), &CoefficientSeries::constant(1.0, a.order()), 1e-12);
    }

    #[test]
    fn downstream_ops_keep_degree_bound(a in small_series()) {
        // exp(beta * a), as in the P series, with a of degree <= n - 1
        let lowered = CoefficientSeries::from_terms(
            0.0,
            (1..=a.order()).map(|n| {
                let p = a.term(n);
                BetaPolynomial::from_coeffs(p.coeffs().iter().take(n).cloned().collect())
            }).collect(),
            a.order(),
        );
        let p = lowered.mul_beta().exp();
        prop_assert!(p.degree_excess() <= 0);
        prop_assert!(a.log1p().degree_excess() <= 0);
        prop_assert!(a.exp().degree_excess() <= 0);
        prop_assert!((&a * &a).degree_excess() <= 0);
    }

    #[test]
    fn evaluation_is_ring_homomorphism((a, b) in pair(), beta in 0.0f64..2.0, y0 in 0.0f64..0.5) {
        // at order 2N nothing is truncated from a product of two order-N series
        let n2 = 2 * a.order();
        let (a2, b2) = (a.with_order(n2), b.with_order(n2));
        let full = &a2 * &b2;
        prop_assert_eq!(full.with_order(a.order()), &a * &b);
        let lhs = full.evaluate(beta, y0);
        let rhs = a.evaluate(beta, y0) * b.evaluate(beta, y0);
        prop_assert!((lhs - rhs).abs() <= 1e-13 * (1.0 + lhs.abs()));
    }
}

#[test]
fn worked_examples() {
    let n = 4;
    let y = CoefficientSeries::variable(n);
    let one = CoefficientSeries::constant(1.0, n);

    let sum = &(&one + &y) + &(&one - &y);
    assert_eq!(sum, CoefficientSeries::constant(2.0, n));
    assert_eq!(series_add(&CoefficientSeries::zero(n), &y), y);

    let by = y.mul_poly(&BetaPolynomial::monomial(1.0, 1));
    let y2 = y.powi(2);
    let disjoint = &by + &y2;
    assert_eq!(disjoint.term(1), &BetaPolynomial::monomial(1.0, 1));
    assert_eq!(disjoint.term(2), &BetaPolynomial::constant(1.0));

    let prod = series_mul(&(&one + &y), &(&one - &y));
    assert_eq!(prod, &one - &y2);

    let geometric = CoefficientSeries::from_real(&[1.0; 5], n);
    assert_close(&(&geometric * &(&one - &y)), &one, 0.0);
    assert_close(&series_recip(&(&one - &y)), &geometric, 1e-15);

    let sq = &by * &by;
    assert_eq!(sq.term(2), &BetaPolynomial::monomial(1.0, 2));

    let e = series_exp(&y);
    for (k, f) in [1.0, 1.0, 0.5, 1.0 / 6.0, 1.0 / 24.0].iter().enumerate() {
        assert!((e.term(k).coeff(0) - f).abs() < 1e-15);
    }
    assert_eq!(series_exp(&CoefficientSeries::zero(n)), one);

    let w1 = 0.37;
    let arg = y.mul_poly(&BetaPolynomial::monomial(-w1, 1));
    let e = series_exp(&arg);
    assert!((e.term(1).coeff(1) + w1).abs() < 1e-15);
    assert!((e.term(2).coeff(2) - 0.5 * w1 * w1).abs() < 1e-15);
    assert!((extract_coefficient(&e, 2, 2) - w1 * w1 / 2.0).abs() < 1e-15);

    let l = series_log1p(&y);
    for (k, f) in [0.0, 1.0, -0.5, 1.0 / 3.0, -0.25].iter().enumerate() {
        assert!((l.term(k).coeff(0) - f).abs() < 1e-15);
    }

    let r = series_pow(&y, 0.5);
    assert!((r.term(1).coeff(0) - 0.5).abs() < 1e-15);
    assert!((r.term(2).coeff(0) + 0.125).abs() < 1e-15);

    let s = CoefficientSeries::from_terms(1.0, vec![BetaPolynomial::zero(), BetaPolynomial::from_coeffs(vec![5.0, -4.0])], n);
    assert_eq!(extract_coefficient(&s, 2, 1), -4.0);
    assert_eq!(extract_coefficient(&s, 0, 0), 1.0);
}

#[test]
#[should_panic(expected = "mismatched truncation orders")]
fn mismatched_orders_panic() {
    let _ = &CoefficientSeries::variable(3) + &CoefficientSeries::variable(4);
}

#[test]
#[should_panic(expected = "zero constant term")]
fn exp_requires_zero_constant() {
    let _ = CoefficientSeries::constant(1.0, 3).exp();
}

#[test]
#[should_panic]
fn recip_requires_nonzero_constant() {
    let _ = CoefficientSeries::variable(3).recip();
}

#[test]
#[should_panic(expected = "beyond truncation order")]
fn extract_beyond_order_panics() {
    let _ = extract_coefficient(&CoefficientSeries::variable(3), 4, 0);
}
