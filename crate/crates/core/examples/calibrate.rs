//! Brute-force sweep behind the constants in `tracekit::calibration`.
//!
//! cargo run --release -p tracekit-core --example calibrate

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tracekit::bounds::{delta_transfer_ratio, transfer_ratio_with};
use tracekit::calibration::{dyadic_grid, EQUIDIST_LADDER, SHARPNESS_PRIMES, TRANSFER_LADDER};
use tracekit::equidist::{birch_tail_counts, tail_frequency_floor, weyl_sum_satotate};
use tracekit::mellin::{build_dlog, mellin_all};
use tracekit::modarith::{next_prime, primes_up_to, primitive_root};
use tracekit::spectrum::e_frac;
use tracekit::sums::{DeltaEvaluator, Interval};
use tracekit::tracezoo::{birch_all, extract_angles, kloosterman_all, AngleFamily};
use tracekit::{make_spectral_pair, Family, Modulus};

fn transfer_max(families: &[Family], primes: &[u64]) -> (f64, String) {
    let mut best = (0.0, String::new());
    for &p in primes {
        let m = Modulus::new(p).unwrap();
        for &fam in families {
            let pair = make_spectral_pair(fam.table(&m).unwrap());
            let eval = DeltaEvaluator::for_pair(&pair);
            for n in dyadic_grid(2, p / 2) {
                let r = transfer_ratio_with(&pair, &eval, n, f64::INFINITY).unwrap();
                if r.ratio > best.0 {
                    best = (r.ratio, format!("transfer {} p={p} N={n}", fam.name()));
                }
            }
            for (tag, pr) in [("pair", &pair), ("dual", &pair.dual())] {
                let r = delta_transfer_ratio(pr, f64::INFINITY).unwrap();
                if r.ratio > best.0 {
                    best = (
                        r.ratio,
                        format!("delta_transfer {tag} {} p={p}", fam.name()),
                    );
                }
            }
        }
    }
    best
}

fn main() {
    let calib = [
        Family::Birch,
        Family::Kloosterman,
        Family::GaussPhase,
        Family::Legendre,
    ];
    let (max, at) = transfer_max(&calib, &TRANSFER_LADDER);
    println!(
        "transfer: corpus max ratio {max:.6} at {at}; C_transfer = 2x = {:.6}",
        2.0 * max
    );
    let (max_all, at_all) = transfer_max(&Family::CORPUS, &TRANSFER_LADDER);
    println!("transfer (all six families, info): max {max_all:.6} at {at_all}");

    let kappas: Vec<f64> = SHARPNESS_PRIMES
        .iter()
        .map(|&p| {
            let l = (p as f64).sqrt().ceil() as u64;
            let s: num_complex::Complex64 = (1..=l).map(|n| e_frac(n * n % p, p)).sum();
            s.norm() / (p as f64).sqrt()
        })
        .collect();
    let kmin = kappas.iter().cloned().fold(f64::INFINITY, f64::min);
    let kmax = kappas.iter().cloned().fold(0.0, f64::max);
    println!("sharpness: |S|/sqrt(m) over 20 primes in [{kmin:.6}, {kmax:.6}]");

    let mut weyl_max = (0.0, String::new());
    for &p in &EQUIDIST_LADDER {
        let m = Modulus::new(p).unwrap();
        for (fam, table) in [
            (AngleFamily::Birch, birch_all(&m).unwrap()),
            (AngleFamily::Kloosterman, kloosterman_all(1, &m).unwrap()),
        ] {
            let s = extract_angles(&table, fam).unwrap();
            for d in 1..=6u32 {
                let w = weyl_sum_satotate(&s, Interval::new(0, p), d).unwrap();
                let scaled = w.abs() * (p as f64).sqrt() / (d + 1) as f64;
                if scaled > weyl_max.0 {
                    weyl_max = (scaled, format!("{fam:?} p={p} d={d}"));
                }
            }
        }
    }
    println!(
        "satotate weyl: max |W_d| sqrt(p)/(d+1) = {:.6} at {}; C = 2x = {:.6}",
        weyl_max.0,
        weyl_max.1,
        2.0 * weyl_max.0
    );

    let mut mellin_max = (0.0, 0);
    for p in primes_up_to(2000).into_iter().filter(|&p| p > 2) {
        let m = Modulus::new(p).unwrap();
        let dlog = build_dlog(&m, primitive_root(&m).unwrap()).unwrap();
        for t in [birch_all(&m).unwrap(), kloosterman_all(1, &m).unwrap()] {
            let v = mellin_all(&t, &dlog).unwrap().sup_norm();
            if v > mellin_max.0 {
                mellin_max = (v, p);
            }
        }
    }
    println!(
        "mellin: max_chi |tau^| over Birch/Kloosterman p <= 2000: {:.6} at p={}",
        mellin_max.0, mellin_max.1
    );

    let t = 0.25;
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst = (f64::INFINITY, String::new());
    for k in 0..10u64 {
        let p = next_prime(10_000 + k * 10_000);
        let m = Modulus::new(p).unwrap();
        let b = birch_all(&m).unwrap();
        let len = (p as f64).powf(0.49).ceil() as u64;
        let starts: Vec<i64> = std::iter::once(1)
            .chain((0..10).map(|_| rng.gen_range(0..p as i64)))
            .collect();
        for a in starts {
            let c = birch_tail_counts(&b, Interval::new(a, len), t).unwrap();
            let freq = c.above.min(c.below) as f64 / len as f64;
            if freq < worst.0 {
                worst = (freq, format!("p={p} start={a} len={len}"));
            }
        }
    }
    println!(
        "tails t=0.25: floor {:.6}, worst observed min(above,below)/|I| = {:.6} at {}",
        tail_frequency_floor(t),
        worst.0,
        worst.1
    );
}
