use geocycle::cycles::merom::MeromForm;
use geocycle::cycles::{cycle_merom, MeromConfig};
use geocycle::lattice::*;
use geocycle::numerics::complex::Complex;
use geocycle::numerics::rational::rational_reconstruct;
use geocycle::qforms::*;
use geocycle::qseries::{rankin_cohen, GroupDesc, VVQSeries};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::{Float, Rational};
use std::collections::BTreeMap;

const P: u32 = 128;

fn cfg() -> Config {
    Config { cases: 100, rng_seed: RngSeed::Fixed(0x5eed_2024), failure_persistence: None, ..Config::default() }
}

fn tol() -> f64 {
    2f64.powi(-(P as i32) / 2 + 16)
}

fn point() -> impl Strategy<Value = (f64, f64)> {
    (-2.0f64..2.0, 0.3f64..3.0)
}

fn sl2() -> impl Strategy<Value = Mat2> {
    prop::collection::vec((-3i64..=3, any::<bool>()), 1..4).prop_map(|steps| {
        let mut g: Mat2 = [[1, 0], [0, 1]];
        for (n, s) in steps {
            g = mat_mul(&g, &[[1, n], [0, 1]]);
            if s {
                g = mat_mul(&g, &[[0, -1], [1, 0]]);
            }
        }
        g
    })
}

fn cz(x: (f64, f64)) -> Complex {
    Complex::from_f64(P, x.0, x.1)
}

fn small(x: &Float) -> bool {
    x.to_f64().abs() < tol()
}

proptest! {
    #![proptest_config(cfg())]

    #[test]
    fn frame_orthonormal(z in point()) {
        let f = frame(&cz(z)).unwrap();
        let half = 0.5;
        prop_assert!((bilinear_f(&f.x, &f.x).to_f64() / 2.0 - half).abs() < tol());
        prop_assert!((bilinear_f(&f.u1, &f.u1).to_f64() / 2.0 + half).abs() < tol());
        prop_assert!((bilinear_f(&f.u2, &f.u2).to_f64() / 2.0 + half).abs() < tol());
        prop_assert!(small(&bilinear_f(&f.x, &f.u1)));
        prop_assert!(small(&bilinear_f(&f.x, &f.u2)));
        prop_assert!(small(&bilinear_f(&f.u1, &f.u2)));
    }

    #[test]
    fn projection_relations(z in point(), v in prop::array::uniform3(-20i64..20)) {
        let zc = cz(z);
        let f = frame(&zc).unwrap();
        let x = to_fvec(&rvec(v[0], v[1], v[2]), P);
        let c = bilinear_f(&x, &f.x);
        let xz: FVec = [Float::with_val(P, &c * &f.x[0]), Float::with_val(P, &c * &f.x[1]), Float::with_val(P, &c * &f.x[2])];
        let perp: FVec = [Float::with_val(P, &x[0] - &xz[0]), Float::with_val(P, &x[1] - &xz[1]), Float::with_val(P, &x[2] - &xz[2])];
        let q_xz = bilinear_f(&xz, &xz) / 2u32;
        let p = poly_p(&x, &zc);
        let r1 = q_xz - Float::with_val(P, p.square_ref()) / 4u32;
        let q_perp = bilinear_f(&perp, &perp) / 2u32;
        let y2 = Float::with_val(P, zc.im.square_ref());
        let r2 = q_perp + poly_q(&x, &zc).norm_sqr() / (y2 * 4u32);
        let scale = 1.0 + majorant(&x, &zc).to_f64();
        prop_assert!(r1.to_f64().abs() < tol() * scale);
        prop_assert!(r2.to_f64().abs() < tol() * scale);
    }

    #[test]
    fn polynomial_invariances(z in point(), g in sl2(), v in prop::array::uniform3(-20i64..20)) {
        let zc = cz(z);
        let gz = mobius_int(&g, &zc);
        let x = rvec(v[0], v[1], v[2]);
        let gx = to_fvec(&act_rvec(&mat_inv(&g), &x), P);
        let xf = to_fvec(&x, P);
        let lhs = poly_p(&xf, &gz);
        let rhs = poly_p(&gx, &zc);
        let scale = 1.0 + lhs.to_f64().abs();
        prop_assert!(Float::with_val(P, &lhs - &rhs).to_f64().abs() < tol() * scale);
        let j = &zc.scale(&Float::with_val(P, g[1][0])) + &Complex::from_f64(P, g[1][1] as f64, 0.0);
        let lq = poly_q(&xf, &gz);
        let rq = poly_q(&gx, &zc).div(&(&j * &j));
        let scale = 1.0 + lq.abs().to_f64();
        prop_assert!((&lq - &rq).abs().to_f64() < tol() * scale);
    }

    #[test]
    fn down_up_adjoint(idx in 0usize..4, f in prop::collection::vec(-50i64..50, 2), gs in prop::collection::vec(-50i64..50, 64)) {
        let forms = [QForm::new(1, 1, -1), QForm::new(1, 2, -1), QForm::new(1, 3, -1), QForm::new(1, 2, -2)];
        let sp = split(&forms[idx]).unwrap();
        let nm = sp.m.group.order();
        let f: Vec<Rational> = f.iter().map(|&x| Rational::from(x)).collect();
        let g: Vec<Rational> = (0..nm).map(|i| Rational::from(gs[i % gs.len()] * (i as i64 + 1))).collect();
        let up = up_map(&g, &sp.l, &sp.m, Rational::new());
        let down = down_map(&f, &sp.l, &sp.m, Rational::new());
        let lhs: Rational = f.iter().zip(&up).map(|(a, b)| Rational::from(a * b)).sum();
        let rhs: Rational = down.iter().zip(&g).map(|(a, b)| Rational::from(a * b)).sum();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn rankin_cohen_product_and_monomials(
        a in -8i64..8, b in -8i64..8, ca in -9i64..9, cb in -9i64..9,
        kn in 1i64..8, ln in 1i64..8, n in 0i64..4,
    ) {
        let grp = GroupDesc::new("Z/1", vec![Rational::new()], false);
        let kappa = Rational::from((kn, 2));
        let ell = Rational::from((ln, 2));
        let mut f = VVQSeries::zero(grp.clone(), kappa.clone(), Rational::from(20));
        f.add_term(0, Rational::from(a), Rational::from(ca));
        let mut g = VVQSeries::zero(grp, ell.clone(), Rational::from(20));
        g.add_term(0, Rational::from(b), Rational::from(cb));
        let br = rankin_cohen(&f, &kappa, &g, &ell, n).unwrap();
        // oracle: sum_s (-1)^s C(κ+n-1, s) C(ℓ+n-1, n-s) a^{n-s} b^s
        let choose = |top: &Rational, k: i64| -> Rational {
            let mut r = Rational::from(1);
            for i in 0..k {
                r *= Rational::from(top - i);
                r /= Rational::from(i + 1);
            }
            r
        };
        let mut c = Rational::new();
        for s in 0..=n {
            let sign = if s % 2 == 0 { 1 } else { -1 };
            let t = choose(&Rational::from(&kappa + (n - 1)), s) * choose(&Rational::from(&ell + (n - 1)), n - s)
                * Rational::from(a).pow_int(n - s) * Rational::from(b).pow_int(s) * sign;
            c += t;
        }
        c *= ca * cb;
        prop_assert_eq!(br.coeff(0, &Rational::from(a + b)), c.clone());
        prop_assert_eq!(br.weight.clone(), Rational::from(&kappa + &ell) + 2 * n);
        if n == 0 {
            prop_assert_eq!(c, Rational::from(ca * cb));
        }
        // swapping the arguments changes the sign by (-1)^n
        let sw = rankin_cohen(&g, &ell, &f, &kappa, n).unwrap();
        let sgn = if n % 2 == 0 { 1 } else { -1 };
        prop_assert_eq!(sw.coeff(0, &Rational::from(a + b)) * sgn, br.coeff(0, &Rational::from(a + b)));
    }

    #[test]
    fn disc_and_reduction_are_class_functions(q in (1i64..12, -12i64..12, 1i64..12), g in sl2()) {
        let q = QForm::new(q.0, q.1, q.2);
        prop_assume!(q.disc() < 0);
        let h = act(&g, &q);
        prop_assert_eq!(h.disc(), q.disc());
        prop_assert_eq!(reduce_posdef(&h).unwrap().0, reduce_posdef(&q).unwrap().0);
    }

    #[test]
    fn automorph_fixes_form(d in 2i64..200) {
        prop_assume!(!is_square(d) && d.rem_euclid(4) <= 1);
        for a in class_reps(d).unwrap() {
            let m = automorph(&a).unwrap();
            prop_assert_eq!(act(&m.m, &a), a);
            prop_assert_eq!(m.eps.norm().abs(), Rational::from(1));
        }
    }

    #[test]
    fn reconstruction_is_idempotent(p in -10_000_000i64..10_000_000, q in 1u64..1_000_000) {
        let r = Rational::from((p, q as i64));
        let x = Float::with_val(P, &r);
        // distinct fractions with denominators <= 10^6 are at least 10^-12 apart
        let got = rational_reconstruct(&x, 1_000_000, &Float::with_val(P, 2f64.powi(-42))).unwrap();
        prop_assert_eq!(got.value, r.clone());
        prop_assert!(!got.ambiguous);
        // a looser tolerance may admit a neighbour, which must then be flagged
        let loose = rational_reconstruct(&x, 1_000_000, &Float::with_val(P, 2f64.powi(-32))).unwrap();
        prop_assert!(loose.value == r || loose.ambiguous);
    }
}

trait PowInt {
    fn pow_int(self, e: i64) -> Rational;
}

impl PowInt for Rational {
    fn pow_int(self, e: i64) -> Rational {
        let mut r = Rational::from(1);
        for _ in 0..e {
            r *= &self;
        }
        r
    }
}

#[test]
fn f_covariance_weight_2k() {
    let forms: Vec<MeromForm> = [(2, -3), (3, -4), (3, -7), (5, -8)].iter().map(|&(k, d)| MeromForm::for_disc(k, d, P).unwrap()).collect();
    let mut runner = proptest::test_runner::TestRunner::new(cfg());
    runner
        .run(&(0usize..forms.len(), point(), sl2()), |(i, z, g)| {
            let f = &forms[i];
            let zc = cz(z);
            let gz = mobius_int(&g, &zc);
            let (Ok(a), Ok(b)) = (f.eval(&gz), f.eval(&zc)) else { return Ok(()) };
            let j = &zc.scale(&Float::with_val(P, g[1][0])) + &Complex::from_f64(P, g[1][1] as f64, 0.0);
            let rhs = &j.powi(2 * f.k as i64) * &b;
            let scale = 1.0 + a.abs().to_f64();
            prop_assert!((&a - &rhs).abs().to_f64() < tol() * scale, "{} vs {}", a, rhs);
            Ok(())
        })
        .unwrap();
}

#[test]
fn cycle_integral_class_invariance() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let coeffs: BTreeMap<i64, Rational> = [(-3, Rational::from(2)), (-4, Rational::from(1))].into_iter().collect();
    let cfg = MeromConfig::default();
    for a in [QForm::new(1, 1, -1), QForm::new(1, 2, -1), QForm::new(1, 2, -2), QForm::new(1, 3, -1)] {
        // one conjugate with positive leading coefficient
        let b = loop {
            let n: i64 = rng.gen_range(1..4);
            let m: i64 = rng.gen_range(-2..=2);
            let g = mat_mul(&[[1, n], [0, 1]], &[[1, 0], [m, 1]]);
            let b = act(&g, &a);
            if b.a > 0 && b != a {
                break b;
            }
        };
        let x = cycle_merom(&a, 3, &coeffs, &cfg, P).unwrap();
        let y = cycle_merom(&b, 3, &coeffs, &cfg, P).unwrap();
        let diff = (&x.value - &y.value).abs().to_f64();
        assert!(diff < tol() * (1.0 + x.value.abs().to_f64()), "{a} vs {b}: {} {}", x.value, y.value);
    }
}
