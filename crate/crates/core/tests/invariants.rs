use num_traits::{One, Zero};
use proptest::prelude::*;

use qbc_core::combinat::{chain_count, chain_enumerate, leq, LaurentPoly};
use qbc_core::identities::{milne_residual, saalschutz_residual};
use qbc_core::koornwinder::x_vars;
use qbc_core::scalars::{bracket, bracket_factorial, e_factorial, e_pair, ratio, t_binomial, Gen, ParamPoint, QMono, Scalar};

/// Positive fourth roots other than 1.
fn root() -> impl Strategy<Value = Scalar> {
    (1i64..12, 1i64..9).prop_filter("not a unit", |(n, d)| n != d).prop_map(|(n, d)| ratio(n, d))
}

fn point() -> impl Strategy<Value = ParamPoint> {
    prop::collection::vec(root(), 11).prop_map(|rs| {
        let gens = [Gen::A, Gen::B, Gen::C, Gen::D, Gen::Q, Gen::T, Gen::U, Gen::X(0), Gen::X(1), Gen::X(2), Gen::Y(0)];
        gens.iter().zip(rs).fold(ParamPoint::new(), |p, (g, r)| p.with(*g, r))
    })
}

fn small_poly(nvars: usize) -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((prop::collection::vec(-2i32..3, nvars), -4i64..5), 0..5).prop_map(move |terms| {
        terms.into_iter().fold(LaurentPoly::zero(nvars), |acc, (e, c)| &acc + &LaurentPoly::monomial(e, ratio(c, 1)))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn bracket_is_odd(p in point()) {
        let z = QMono::a() * QMono::q();
        prop_assert_eq!(bracket(&z.inv(), &p).unwrap(), -bracket(&z, &p).unwrap());
    }

    #[test]
    fn e_pair_symmetries(p in point()) {
        let (z, w) = (QMono::a(), QMono::b());
        let v = e_pair(&z, &w, &p);
        prop_assert_eq!(e_pair(&z.inv(), &w, &p), v.clone());
        prop_assert_eq!(e_pair(&z, &w.inv(), &p), v.clone());
        prop_assert_eq!(e_pair(&w, &z, &p), -v.clone());
        let prod = bracket(&(z * w), &p).unwrap() * bracket(&(z / w), &p).unwrap();
        prop_assert_eq!(prod, v);
    }

    #[test]
    fn shifted_factorials_compose(p in point(), l in -3i64..4, k in -3i64..4) {
        let (z, base) = (QMono::a(), QMono::q());
        let shifted = z * base.pow(l as i32);
        let parts = (bracket_factorial(&z, &base, l, &p), bracket_factorial(&shifted, &base, k, &p), bracket_factorial(&z, &base, l + k, &p));
        if let (Ok(a), Ok(b), Ok(c)) = parts {
            prop_assert_eq!(a * b, c);
        }
        let w = QMono::b();
        let ws = w * base.pow(l as i32);
        let parts = (e_factorial(&z, &w, &base, l, &p), e_factorial(&z, &ws, &base, k, &p), e_factorial(&z, &w, &base, l + k, &p));
        if let (Ok(a), Ok(b), Ok(c)) = parts {
            prop_assert_eq!(a * b, c);
        }
    }

    #[test]
    fn t_binomial_is_symmetric(p in point(), l in 0i64..6, r in 0i64..6) {
        let t = QMono::t();
        prop_assert_eq!(t_binomial(l, r, &t, &p).unwrap(), t_binomial(l, l - r, &t, &p).unwrap());
        prop_assert!(t_binomial(l, l + 1, &t, &p).unwrap().is_zero());
        prop_assert!(t_binomial(l, 0, &t, &p).unwrap().is_one());
    }

    #[test]
    fn laurent_ring_axioms(f in small_poly(2), g in small_poly(2), h in small_poly(2), xs in prop::collection::vec(root(), 2)) {
        prop_assert_eq!(&f * &g, &g * &f);
        prop_assert_eq!(&f * &(&g + &h), &(&f * &g) + &(&f * &h));
        prop_assert_eq!(&(&f * &g) * &h, &f * &(&g * &h));
        prop_assert!((&f - &f).is_zero());
        prop_assert_eq!(&f * &LaurentPoly::one(2), f.clone());
        prop_assert_eq!((&f * &g).eval(&xs), f.eval(&xs) * g.eval(&xs));
    }

    #[test]
    fn chains_are_counted_and_ordered(alpha in prop::collection::vec(0i64..4, 0..3)) {
        let chains = chain_enumerate(&alpha);
        prop_assert_eq!(chains.len() as u128, chain_count(&alpha));
        for c in &chains {
            prop_assert!(leq(&c.mu_minus, &c.nu_minus));
            prop_assert!(leq(&c.nu_minus, &c.nu_plus));
            prop_assert!(leq(&c.nu_plus, &c.mu_plus));
            prop_assert!(leq(&c.mu_plus, &alpha));
        }
    }

    #[test]
    fn milne_product_holds(p in point(), lam in prop::collection::vec(0i64..5, 1..4)) {
        let r = milne_residual(&x_vars(lam.len()), &lam, &p);
        if let Ok(r) = r {
            prop_assert!(r.is_zero());
        }
    }

    #[test]
    fn base_point_change_holds(p in point(), l in 0usize..5) {
        if let Ok(r) = saalschutz_residual(l, &QMono::u(), &QMono::a(), &QMono::b(), &QMono::t(), &p) {
            prop_assert!(r.is_zero());
        }
    }
}

#[test]
fn zero_length_factorials_are_one() {
    let p = ParamPoint::new().with(Gen::A, ratio(3, 2)).with(Gen::Q, ratio(5, 3));
    assert!(bracket_factorial(&QMono::a(), &QMono::q(), 0, &p).unwrap().is_one());
    assert!(e_factorial(&QMono::a(), &QMono::q(), &QMono::q(), 0, &p).unwrap().is_one());
    assert_eq!(e_pair(&QMono::a(), &QMono::a(), &p), Scalar::zero());
}
