use approx::assert_abs_diff_eq;
use num_bigint::BigUint;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tracekit::calibration::{mellin_sup_max, satotate_weyl_c, EQUIDIST_LADDER};
use tracekit::equidist::{weyl_sum_fractional, weyl_sum_satotate};
use tracekit::mellin::{build_dlog, mellin_all, mellin_sup_check};
use tracekit::modarith::{mod_inverse, pow_mod, pow_mod_u64, primes_up_to, primitive_root};
use tracekit::spectrum::e_frac;
use tracekit::tracezoo::{birch_all, extract_angles, kloosterman_all, AngleFamily};
use tracekit::{Interval, Modulus, RationalFunctionModM};

#[test]
fn pow_mod_matches_bigint() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..1000 {
        // moduli up to ~2^31.5 keep the trial-division factorization cheap
        let m = rng.gen_range(2..3_000_000_000u64);
        let x = rng.gen::<u64>();
        let e = rng.gen::<u64>();
        let want = BigUint::from(x).modpow(&BigUint::from(e), &BigUint::from(m));
        let md = Modulus::new(m).unwrap();
        assert_eq!(BigUint::from(pow_mod(x, e, &md)), want, "x={x} e={e} m={m}");
    }
}

#[test]
fn pow_mod_u64_matches_bigint_near_2_63() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..1000 {
        let m = rng.gen_range(2..(1u64 << 63));
        let x = rng.gen::<u64>();
        let e = rng.gen::<u64>();
        let want = BigUint::from(x).modpow(&BigUint::from(e), &BigUint::from(m));
        assert_eq!(BigUint::from(pow_mod_u64(x, e, m)), want);
    }
}

#[test]
fn inverse_checked_in_bigint() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..500 {
        let m = rng.gen_range(2..3_000_000_000u64);
        let md = Modulus::new(m).unwrap();
        let x = rng.gen_range(0..m);
        match mod_inverse(x, &md) {
            Ok(y) => {
                let prod = BigUint::from(x) * BigUint::from(y) % BigUint::from(m);
                assert_eq!(prod, BigUint::from(1u32));
            }
            Err(_) => assert_ne!(tracekit::modarith::gcd(x, m), 1),
        }
    }
}

fn mellin_oracle(tau: &[Complex64], p: u64, g: u64, j: u64) -> Complex64 {
    // chi_j(g^k) = e(jk/(p-1)), summed in the original x order
    let md = Modulus::prime(p).unwrap();
    let mut s = Complex64::new(0.0, 0.0);
    for k in 0..p - 1 {
        let x = pow_mod(g, k, &md);
        s += tau[x as usize] * e_frac(j * k % (p - 1), p - 1);
    }
    s / ((p - 1) as f64).sqrt()
}

#[test]
fn mellin_matches_character_sum_oracle() {
    for p in [5u64, 7, 11, 13, 31, 97, 101] {
        let md = Modulus::prime(p).unwrap();
        let dlog = build_dlog(&md, primitive_root(&md).unwrap()).unwrap();
        let tau = kloosterman_all(1, &md).unwrap();
        let hat = mellin_all(&tau, &dlog).unwrap();
        for j in 0..p - 1 {
            let want = mellin_oracle(tau.values(), p, dlog.generator(), j);
            assert_abs_diff_eq!(hat.values()[j as usize].re, want.re, epsilon = 1e-9);
            assert_abs_diff_eq!(hat.values()[j as usize].im, want.im, epsilon = 1e-9);
        }
    }
}

#[test]
fn mellin_sup_stays_under_frozen_ceiling() {
    let ceiling = mellin_sup_max().value;
    for p in primes_up_to(2000).into_iter().filter(|&p| p >= 5) {
        let md = Modulus::prime(p).unwrap();
        let dlog = build_dlog(&md, primitive_root(&md).unwrap()).unwrap();
        for tau in [birch_all(&md).unwrap(), kloosterman_all(1, &md).unwrap()] {
            let r = mellin_sup_check(&tau, &dlog, None, true).unwrap();
            assert!(r.lhs <= ceiling, "p={p}: {}", r.lhs);
            assert_eq!(r.passed, None);
        }
    }
}

#[test]
fn satotate_weyl_sums_full_period() {
    let c = satotate_weyl_c().value;
    for &p in &EQUIDIST_LADDER {
        let md = Modulus::prime(p).unwrap();
        let samples = [
            extract_angles(&birch_all(&md).unwrap(), AngleFamily::Birch).unwrap(),
            extract_angles(&kloosterman_all(1, &md).unwrap(), AngleFamily::Kloosterman).unwrap(),
        ];
        for s in &samples {
            for d in 1..=6u32 {
                let w = weyl_sum_satotate(s, Interval::new(0, p), d).unwrap();
                let bound = c * (d + 1) as f64 / (p as f64).sqrt();
                assert!(w.abs() <= bound, "p={p} d={d}: {w} > {bound}");
            }
        }
    }
}

#[test]
fn fractional_weyl_sums_are_averages() {
    let md = Modulus::prime(1009).unwrap();
    let f = RationalFunctionModM::inverse_power(1, 1);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let i = Interval::new(rng.gen_range(-2000..2000), rng.gen_range(1..=1009));
        let h = rng.gen_range(1..1009);
        assert!(weyl_sum_fractional(&f, &md, i, h).unwrap().norm() <= 1.0 + 1e-12);
    }
    // complete sum over all n: sum_{x != 0} e(h x / p) + e(0) = 0
    let full = weyl_sum_fractional(&f, &md, Interval::new(0, 1009), 5).unwrap();
    assert_abs_diff_eq!(full.norm(), 0.0, epsilon = 1e-12);
}
