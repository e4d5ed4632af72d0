use core::cmp::Ordering;

use critline_core::consequences::buthe_threshold;
use critline_core::rigor::{ball_sign, Ball, Context, Float, Mag, Sign};
use critline_core::Dyadic;
use num_bigint::{BigInt, Sign as BigSign};
use proptest::prelude::*;

fn big_to_float(b: &BigInt) -> Float {
    let (sign, digits) = b.to_u64_digits();
    let mut acc = Float::zero();
    for (k, d) in digits.iter().enumerate() {
        acc = acc.add_exact(&Float::from_i128_exp(*d as i128, 64 * k as i64));
    }
    if sign == BigSign::Minus {
        acc.neg()
    } else {
        acc
    }
}

fn big(parts: &[i64]) -> BigInt {
    parts.iter().fold(BigInt::from(0), |acc, &p| (acc << 63) + BigInt::from(p))
}

fn ball(m: f64, r: f64) -> Ball {
    Ball::new(Float::from_f64(m), Mag::from_f64_up(r))
}

fn endpoints(b: &Ball) -> [Float; 2] {
    let r = Float::from_f64(b.rad().get());
    [b.mid().sub_exact(&r), b.mid().add_exact(&r)]
}

fn mid_strategy() -> impl Strategy<Value = f64> {
    (-1e6f64..1e6).prop_filter("nonzero", |x| x.abs() > 1e-6)
}

proptest! {
    #[test]
    fn limbs_match_bigint(a in prop::collection::vec(any::<i64>(), 1..5), b in prop::collection::vec(any::<i64>(), 1..5)) {
        let (x, y) = (big(&a), big(&b));
        let (fx, fy) = (big_to_float(&x), big_to_float(&y));
        prop_assert_eq!(fx.mul_exact(&fy).cmp_value(&big_to_float(&(&x * &y))), Ordering::Equal);
        prop_assert_eq!(fx.add_exact(&fy).cmp_value(&big_to_float(&(&x + &y))), Ordering::Equal);
        prop_assert_eq!(fx.sub_exact(&fy).cmp_value(&big_to_float(&(&x - &y))), Ordering::Equal);
        prop_assert_eq!(fx.cmp_value(&fy), x.cmp(&y));
    }

    #[test]
    fn arithmetic_contains_endpoint_images(
        am in mid_strategy(), ar in 0f64..10.0, bm in mid_strategy(), br in 0f64..10.0,
        prec in prop::sample::select(vec![53u32, 64, 100, 128]),
    ) {
        let (a, b) = (ball(am, ar), ball(bm, br));
        let sum = a.add(&b, prec);
        let diff = a.sub(&b, prec);
        let prod = a.mul(&b, prec);
        let quot = a.div(&b, prec);
        for x in endpoints(&a) {
            for y in endpoints(&b) {
                prop_assert!(sum.contains_float(&x.add_exact(&y)));
                prop_assert!(diff.contains_float(&x.sub_exact(&y)));
                prop_assert!(prod.contains_float(&x.mul_exact(&y)));
                if let Ok(q) = &quot {
                    let fine = Ball::exact(x.clone()).div(&Ball::exact(y.clone()), 4 * prec).unwrap();
                    prop_assert!(q.contains(&fine));
                }
            }
        }
    }

    #[test]
    fn higher_precision_never_disjoint(x in 0.01f64..1e4, r in 0f64..1e-3) {
        let a = ball(x, r);
        let (lo, hi) = (Context::new(64), Context::new(128));
        prop_assert!(lo.exp(&a.mul_2exp(-10)).overlaps(&hi.exp(&a.mul_2exp(-10))));
        prop_assert!(lo.log(&a).unwrap().overlaps(&hi.log(&a).unwrap()));
        prop_assert!(lo.sin(&a).overlaps(&hi.sin(&a)));
        prop_assert!(lo.atan(&a).overlaps(&hi.atan(&a)));
        prop_assert!(lo.sqrt(&a).unwrap().overlaps(&hi.sqrt(&a).unwrap()));
    }

    #[test]
    fn sign_trichotomy(m in -10f64..10.0, r in 0f64..5.0) {
        let b = ball(m, r);
        let expect = if m - r > 0.0 {
            Sign::Positive
        } else if m + r < 0.0 {
            Sign::Negative
        } else {
            Sign::Indeterminate
        };
        prop_assert_eq!(ball_sign(&b), expect);
    }

    #[test]
    fn dyadic_floor_ceil_bracket(x in -1e9f64..1e9, e in -30i32..4) {
        let lo = Dyadic::floor_f64(x, e);
        let hi = Dyadic::ceil_f64(x, e);
        prop_assert!(lo.to_f64() <= x && x <= hi.to_f64());
        prop_assert!(hi.checked_sub(lo).unwrap().to_f64() <= 2f64.powi(e));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn buthe_round_trip(log_h in 3f64..15.0) {
        let h = 10f64.powf(log_h);
        let x = buthe_threshold(h).unwrap().value();
        let back = 4.92 * (x / x.ln()).sqrt();
        prop_assert!((back - h).abs() <= 1e-6 * h, "H = {h}, back = {back}");
    }
}
