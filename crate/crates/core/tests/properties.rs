use airy_painleve::backlund::{backlund_chain, reflect, Denominator, QJet};
use airy_painleve::linalg::det_lu;
use airy_painleve::{cubic, qps_from_tau, spectral, ApComplex, Lambda, PrecCtx, SeedSpec};
use proptest::prelude::*;

const BITS: u32 = 160;

fn ctx() -> PrecCtx {
    PrecCtx::new(40).unwrap()
}

fn mag(x: &ApComplex) -> f64 {
    x.abs().to_f64()
}

fn matrix() -> impl Strategy<Value = Vec<Vec<(f64, f64)>>> {
    (2usize..6).prop_flat_map(|k| prop::collection::vec(prop::collection::vec((-2.0..2.0, -2.0..2.0), k), k))
}

fn to_ap(m: &[Vec<(f64, f64)>]) -> Vec<Vec<ApComplex>> {
    m.iter().map(|r| r.iter().map(|&(a, b)| ApComplex::from_f64(a, b, BITS)).collect()).collect()
}

fn close(a: &ApComplex, b: &ApComplex) -> bool {
    mag(&(a - b)) <= 1e-35 * (1.0 + mag(a))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn reflection_is_an_involution(n in -6i64..6, re in -3.0..3.0, im in -3.0..3.0, q in -5.0..5.0, qp in -5.0..5.0) {
        let j = QJet {
            n,
            z: ApComplex::from_f64(re, im, BITS),
            q: ApComplex::from_f64(q, 0.5 * q, BITS),
            qprime: ApComplex::from_f64(qp, -qp, BITS),
        };
        let r = reflect(&j);
        prop_assert_eq!(r.n, 1 - n);
        prop_assert!(close(&(&r.q + &j.q), &ApComplex::zero(BITS)));
        let back = reflect(&r);
        prop_assert_eq!(back.n, n);
        prop_assert!(close(&back.q, &j.q) && close(&back.qprime, &j.qprime));
    }

    #[test]
    fn determinant_flips_under_row_swap(m in matrix(), a in 0usize..6, b in 0usize..6) {
        let k = m.len();
        let (a, b) = (a % k, b % k);
        prop_assume!(a != b);
        let d = det_lu(to_ap(&m), BITS);
        let mut s = m.clone();
        s.swap(a, b);
        let ds = det_lu(to_ap(&s), BITS);
        prop_assert!(close(&d, &-&ds), "{} vs {}", d, ds);
    }

    #[test]
    fn determinant_is_transpose_invariant(m in matrix()) {
        let k = m.len();
        let t: Vec<Vec<(f64, f64)>> = (0..k).map(|i| (0..k).map(|j| m[j][i]).collect()).collect();
        let d = det_lu(to_ap(&m), BITS);
        let dt = det_lu(to_ap(&t), BITS);
        prop_assert!(close(&d, &dt), "{} vs {}", d, dt);
    }

    #[test]
    fn string_equations_hold(n in 1usize..7, t in -1.0..4.0, nn in 0.5..6.0) {
        let ctx = ctx();
        let (a, b) = cubic::string_residuals(n, &ctx.complex(t, 0.0), nn, &Lambda::zero(ctx.bits()), &ctx).unwrap();
        prop_assert!(mag(&a) < 1e-25 && mag(&b) < 1e-25, "{} {}", a, b);
    }

    #[test]
    fn spectral_root_solves_the_cubic(t in -3.0..1.5, im in -0.5..0.5) {
        let ctx = ctx();
        let tc = ctx.complex(t, im);
        let x = spectral::x_branch(&tc, &Lambda::zero(ctx.bits()), &ctx).unwrap();
        let r = &(&(&x.square() * &x) - &(&x * &tc)) - &ctx.one();
        prop_assert!(mag(&r) < 1e-30, "{}", r);
    }

    #[test]
    fn routes_agree_at_random_points(n in 1usize..6, re in -2.0..2.0, im in -2.0..2.0, which in 0usize..3) {
        let ctx = ctx();
        let lam = Lambda::parse(["0", "i", "inf"][which], ctx.bits()).unwrap();
        let seed = SeedSpec::from_lambda(&lam, &ctx);
        let z = ctx.complex(re, im);
        let t = qps_from_tau(n, &z, &seed, &ctx);
        let b = backlund_chain(n as i64, &z, &seed, Denominator::Standard, &ctx);
        prop_assume!(t.is_ok() && b.is_ok());
        let (t, b) = (t.unwrap(), b.unwrap());
        prop_assert!(mag(&(&t.q - &b.q)) < 1e-20 * (1.0 + mag(&t.q)), "{} vs {}", t.q, b.q);
    }

    #[test]
    fn lambda_token_round_trips(re in -10.0..10.0f64, im in -10.0..10.0f64, real in any::<bool>()) {
        let im = if real { 0.0 } else { im };
        let l = Lambda::finite(re, im, BITS);
        let back = Lambda::parse(&l.token(), BITS).unwrap();
        prop_assert_eq!(back.token(), l.token());
        match back {
            Lambda::Finite(v) => prop_assert_eq!(v.to_c64(), num_complex::Complex64::new(re, im)),
            Lambda::Infinity => prop_assert!(false),
        }
    }
}

#[test]
fn infinity_token() {
    assert_eq!(Lambda::parse(&Lambda::Infinity.token(), BITS).unwrap(), Lambda::Infinity);
}
