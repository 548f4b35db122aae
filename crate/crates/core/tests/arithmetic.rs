use proptest::prelude::*;
use u2split_core::poly::factorize;
use u2split_core::{FieldCtx, FieldElem, Poly};

fn field() -> impl Strategy<Value = FieldCtx> {
    prop_oneof![Just(3u64), Just(5), Just(7), Just(101), Just(2_147_483_647)]
        .prop_map(|p| FieldCtx::prime(p).unwrap())
        .boxed()
        .prop_union(Just(FieldCtx::Rational).boxed())
}

fn elems(ctx: FieldCtx, n: usize) -> impl Strategy<Value = Vec<FieldElem>> {
    prop::collection::vec((-1000i64..1000, 1i64..50), n).prop_map(move |v| {
        // a / b, or just a when b vanishes in the field
        v.into_iter()
            .map(|(a, b)| {
                &ctx.from_i64(a) * &ctx.from_i64(b).try_inv().unwrap_or_else(|_| ctx.one())
            })
            .collect()
    })
}

fn poly(ctx: FieldCtx, max_deg: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec(-20i64..20, 1..=max_deg + 1).prop_map(move |c| Poly::from_i64s(ctx, &c))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn field_axioms((ctx, v) in field().prop_flat_map(|k| (Just(k), elems(k, 3)))) {
        let (a, b, c) = (&v[0], &v[1], &v[2]);
        prop_assert_eq!(&(a + b) + c, a + &(b + c));
        prop_assert_eq!(&(a * b) * c, a * &(b * c));
        prop_assert_eq!(a * &(b + c), &(a * b) + &(a * c));
        prop_assert_eq!(a + b, b + a);
        prop_assert_eq!(&(a - b) + b, a.clone());
        prop_assert_eq!(a + &(-a), ctx.zero());
        if !a.is_zero() {
            prop_assert_eq!(a * &a.inv(), ctx.one());
            prop_assert_eq!(&(b / a) * a, b.clone());
        }
    }

    #[test]
    fn parse_display_round_trip((ctx, v) in field().prop_flat_map(|k| (Just(k), elems(k, 1)))) {
        prop_assert_eq!(ctx.parse(&v[0].to_string()).unwrap(), v[0].clone());
    }

    #[test]
    fn square_roots_square(p in prop_oneof![Just(3u64), Just(5), Just(13), Just(101)], x in 0u64..1000) {
        let k = FieldCtx::prime(p).unwrap();
        let a = k.from_u64(x);
        match a.sqrt().unwrap() {
            Some(r) => prop_assert_eq!(&r * &r, a),
            None => prop_assert!(!a.is_square().unwrap()),
        }
    }

    #[test]
    fn division_with_remainder((a, b) in field().prop_flat_map(|k| (poly(k, 8), poly(k, 4)))) {
        prop_assume!(!b.is_zero());
        let (q, r) = a.div_rem(&b);
        prop_assert_eq!(&(&q * &b) + &r, a);
        prop_assert!(r.is_zero() || r.deg() < b.deg());
    }

    #[test]
    fn gcd_is_a_common_divisor((a, b) in field().prop_flat_map(|k| (poly(k, 6), poly(k, 6)))) {
        prop_assume!(!a.is_zero() || !b.is_zero());
        let (g, s, t) = a.ext_gcd(&b);
        prop_assert!(g.divides(&a) && g.divides(&b));
        prop_assert_eq!(&(&s * &a) + &(&t * &b), g);
    }

    #[test]
    fn factorization_reassembles(p in prop_oneof![Just(3u64), Just(5), Just(7)], c in prop::collection::vec(-10i64..10, 2..9), seed in any::<u64>()) {
        let k = FieldCtx::prime(p).unwrap();
        let f = Poly::from_i64s(k, &c);
        prop_assume!(!f.is_zero() && f.deg() > 0);
        let parts = factorize(&f, seed).unwrap();
        let mut prod = Poly::one(k);
        for (g, e) in &parts {
            prop_assert!(g.is_monic() && u2split_core::poly::is_irreducible(g).unwrap());
            prod = &prod * &g.pow(*e);
        }
        prop_assert_eq!(prod, f.monic());
        prop_assert_eq!(parts, factorize(&f, seed.wrapping_add(1)).unwrap());
    }

    #[test]
    fn r_transform_inverts(p in prop_oneof![Just(3u64), Just(5), Just(7)], c in prop::collection::vec(-10i64..10, 1..6)) {
        let k = FieldCtx::prime(p).unwrap();
        let mut m = Poly::from_i64s(k, &c);
        prop_assume!(!m.is_zero());
        m = m.monic();
        let r = m.r_transform();
        prop_assert_eq!(r.deg(), 2 * m.deg());
        prop_assert_eq!(r.r_inverse().unwrap(), m.clone());
        if !r.coeff(0).is_zero() {
            prop_assert!(r.is_palindromial().unwrap());
        }
    }

    #[test]
    fn reciprocal_is_an_involution(p in prop_oneof![Just(3u64), Just(5), Just(7)], c in prop::collection::vec(-10i64..10, 1..7)) {
        let k = FieldCtx::prime(p).unwrap();
        let f = Poly::from_i64s(k, &c);
        prop_assume!(!f.coeff(0).is_zero());
        let g = f.reciprocal().unwrap();
        prop_assert_eq!(g.reciprocal().unwrap(), f.monic());
    }
}
