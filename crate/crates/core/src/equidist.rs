//! Weyl sums, Kolmogorov-Smirnov distances and Birch-sum statistics for the
//! equidistribution statements (fractional parts `{f(n)/p}`, Sato-Tate
//! angles, moments and tail frequencies of `B_3`).

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bounds::{witness, BoundReport};
use crate::error::{Error, Result};
use crate::modarith::{legendre_symbol, Modulus, Poly, RationalFunctionModM};
use crate::spectrum::{dft_fast, e_frac, FunctionTable};
use crate::sums::Interval;
use crate::tracezoo::{birch_all, chebyshev_u, value_set_indicator, AngleSample};

/// Tolerance for the exact complete-sum identities.
pub const IDENTITY_TOLERANCE: f64 = 1e-6;

/// `|I|^{-1} sum_{n in I} e_p(h f(n))`, poles taking `f`'s pole value.
pub fn weyl_sum_fractional(
    f: &RationalFunctionModM,
    p: &Modulus,
    interval: Interval,
    h: i64,
) -> Result<Complex64> {
    let hr = p.reduce(h);
    if hr == 0 {
        return Err(Error::InvalidTestFrequency { h, p: p.value() });
    }
    if interval.len > p.value() {
        return Err(Error::IntervalTooLong {
            len: interval.len,
            m: p.value(),
        });
    }
    if interval.len == 0 {
        return Err(Error::EmptySample);
    }
    let s: Complex64 = interval
        .iter()
        .map(|n| e_frac(p.mul(hr, f.eval_or_pole(p.reduce(n), p)), p.value()))
        .sum();
    Ok(s / interval.len as f64)
}

/// Fractional parts `{f(n)/p}` for `n` in the interval.
pub fn fractional_parts(f: &RationalFunctionModM, p: &Modulus, interval: Interval) -> Vec<f64> {
    interval
        .iter()
        .map(|n| f.eval_or_pole(p.reduce(n), p) as f64 / p.value() as f64)
        .collect()
}

/// Average of `U_d(2 cos theta_n)` over the sample indices in `interval`
/// (excluded indices are skipped and not counted).
pub fn weyl_sum_satotate(sample: &AngleSample, interval: Interval, d: u32) -> Result<f64> {
    let m = Modulus::new(sample.p)?;
    let (sum, count) = interval
        .iter()
        .filter_map(|n| sample.angle(m.reduce(n)))
        .fold((0.0, 0usize), |(s, c), t| {
            (s + chebyshev_u(d, 2.0 * t.cos()), c + 1)
        });
    if count == 0 {
        return Err(Error::EmptySample);
    }
    Ok(sum / count as f64)
}

/// CDF of the Sato-Tate measure `(2/pi) sin^2(t) dt` on `[0, pi]`.
pub fn satotate_cdf(theta: f64) -> Result<f64> {
    if !(0.0..=PI).contains(&theta) {
        return Err(Error::DomainError(theta));
    }
    // theta - sin(theta)cos(theta) loses all digits near 0; use the series there.
    let t2 = theta * theta;
    let core = if theta < 1e-2 {
        theta * t2 * (2.0 / 3.0 - t2 * (2.0 / 15.0 - t2 * 4.0 / 315.0))
    } else {
        theta - 0.5 * (2.0 * theta).sin()
    };
    Ok((core / PI).clamp(0.0, 1.0))
}

pub fn uniform_cdf(x: f64) -> f64 {
    x.clamp(0.0, 1.0)
}

/// Two-sided Kolmogorov-Smirnov statistic `sup |F_n - F|` of a sample.
pub fn ks_distance(sample: &[f64], cdf: impl Fn(f64) -> f64) -> Result<f64> {
    if sample.is_empty() {
        return Err(Error::EmptySample);
    }
    let mut sorted = sample.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    Ok(sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (((i + 1) as f64 / n) - f).max(f - i as f64 / n)
        })
        .fold(0.0, f64::max))
}

/// KS distance of the angles against the Sato-Tate law.
pub fn ks_satotate(sample: &AngleSample) -> Result<f64> {
    ks_distance(&sample.angles, |t| {
        satotate_cdf(t.clamp(0.0, PI)).expect("clamped")
    })
}

fn table_values(table: &FunctionTable, interval: Interval) -> impl Iterator<Item = Complex64> + '_ {
    interval.iter().map(move |n| table.at(n))
}

/// `(sum B_3(n), sum |B_3(n)|^2)` over the interval, from a precomputed table.
pub fn birch_moments(birch: &FunctionTable, interval: Interval) -> Result<(Complex64, f64)> {
    if interval.len > birch.m() {
        return Err(Error::IntervalTooLong {
            len: interval.len,
            m: birch.m(),
        });
    }
    Ok(
        table_values(birch, interval).fold((Complex64::new(0.0, 0.0), 0.0), |(m1, m2), v| {
            (m1 + v, m2 + v.norm_sqr())
        }),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TailCounts {
    pub above: u64,
    pub below: u64,
    pub abs_above: u64,
}

/// Counts of `n in I` with `B_3(n) > t`, `B_3(n) < -t` and `|B_3(n)| > t`.
pub fn birch_tail_counts(birch: &FunctionTable, interval: Interval, t: f64) -> Result<TailCounts> {
    if !(0.0..=2.0).contains(&t) {
        return Err(Error::DomainError(t));
    }
    let mut out = TailCounts {
        above: 0,
        below: 0,
        abs_above: 0,
    };
    for v in table_values(birch, interval) {
        let b = v.re;
        out.above += (b > t) as u64;
        out.below += (b < -t) as u64;
        out.abs_above += (b.abs() > t) as u64;
    }
    Ok(out)
}

/// Lower bound `(1 - 2t) / (4 (2 - t))` on the tail frequencies.
pub fn tail_frequency_floor(t: f64) -> f64 {
    (1.0 - 2.0 * t) / (4.0 * (2.0 - t))
}

/// Verifies the closed form of the transform of `psi(n) = |B_3(n)|^2 - 1`:
/// `psi^(0) = 0`, `|psi^(h)| = 1`, and `psi^(h) = eps (h/p) e_p(-h^3/4)` with a
/// single unimodular `eps` read off at `h = 1`.
///
/// The report's `lhs` is the worst deviation over the three checks and `rhs`
/// the tolerance. Any violation is returned as an error.
pub fn psi_hat_identity_check(p: &Modulus) -> Result<BoundReport> {
    if !p.is_prime() || p.value() < 5 {
        return Err(Error::InvalidModulus {
            m: p.value(),
            reason: "a prime p >= 5 is required",
        });
    }
    let birch = birch_all(p)?;
    psi_hat_identity_check_with(&birch)
}

/// [`psi_hat_identity_check`] against a precomputed Birch table.
pub fn psi_hat_identity_check_with(birch: &FunctionTable) -> Result<BoundReport> {
    let p = birch.modulus();
    let pv = p.value();
    let psi = FunctionTable::from_fn(p.clone(), |n| {
        Complex64::new(birch.values()[n as usize].norm_sqr() - 1.0, 0.0)
    });
    let hat = dft_fast(&psi);
    let fail = |detail, deviation| Error::IdentityViolation {
        p: pv,
        detail,
        deviation,
    };

    let dev_zero = hat.values()[0].norm();
    if dev_zero > IDENTITY_TOLERANCE {
        return Err(fail("psi^(0) != 0", dev_zero));
    }
    let four_inv = p.inverse(4)?;
    // phase(h) = (h/p) e_p(+h^3/4), so psi^(h) * conj(eps) * phase(h) = 1
    let phase = |h: u64| -> Result<Complex64> {
        let s = legendre_symbol(h, p)? as f64;
        Ok(e_frac(p.mul(four_inv, p.mul(h, p.mul(h, h))), pv) * s)
    };
    let eps = hat.values()[1] * phase(1)?;
    let dev_eps = (eps.norm() - 1.0).abs();
    if dev_eps > IDENTITY_TOLERANCE {
        return Err(fail("|eps| != 1", dev_eps));
    }
    let (mut dev_mod, mut dev_phase) = (0.0f64, 0.0f64);
    for h in 1..pv {
        let v = hat.values()[h as usize];
        dev_mod = dev_mod.max((v.norm() - 1.0).abs());
        dev_phase = dev_phase.max((v * eps.conj() * phase(h)? - 1.0).norm());
    }
    if dev_mod > IDENTITY_TOLERANCE {
        return Err(fail("|psi^(h)| != 1", dev_mod));
    }
    if dev_phase > IDENTITY_TOLERANCE {
        return Err(fail("phase structure", dev_phase));
    }
    let worst = dev_zero.max(dev_eps).max(dev_mod).max(dev_phase);
    let second_moment = birch.l2_norm_sq();
    Ok(BoundReport::new(
        "psi_hat_identity",
        worst,
        IDENTITY_TOLERANCE,
        Some(1.0),
        witness([
            ("p", pv.into()),
            ("eps_re", eps.re.into()),
            ("eps_im", eps.im.into()),
            ("second_moment", second_moment.into()),
            ("dev_psi_hat_zero", dev_zero.into()),
            ("dev_modulus", dev_mod.into()),
            ("dev_phase", dev_phase.into()),
        ]),
    ))
}

/// `(count of x in I lying in f(F_p), delta_f |I|)`.
pub fn value_set_interval_density(f: &Poly, p: &Modulus, interval: Interval) -> Result<(u64, f64)> {
    if interval.len > p.value() {
        return Err(Error::IntervalTooLong {
            len: interval.len,
            m: p.value(),
        });
    }
    let (indicator, density) = value_set_indicator(f, p)?;
    let count = interval
        .iter()
        .filter(|&n| indicator.at(n).re > 0.5)
        .count() as u64;
    Ok((count, density * interval.len as f64))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EquidistFamily {
    Birch,
    Kloosterman,
    /// Fractional parts `{f(n)/p}` for `f = 1/X`.
    InverseFractional,
}

/// Everything measured for one family, prime and interval.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquidistReport {
    pub family: EquidistFamily,
    pub p: u64,
    pub interval: (i64, u64),
    /// Keyed by the test index (`d` for Sato-Tate, `h` for fractional parts).
    pub weyl_sums: BTreeMap<u32, (f64, f64)>,
    pub ks_distance: f64,
    pub moment1: Option<(f64, f64)>,
    pub moment2: Option<f64>,
    /// Keyed by `t` formatted with two decimals.
    pub tail_counts: BTreeMap<String, TailCounts>,
}

/// Builds an [`EquidistReport`] over `interval` with Weyl tests `1..=max_test`
/// and tail counts at each threshold (Birch/Kloosterman only).
pub fn equidist_report(
    family: EquidistFamily,
    p: &Modulus,
    interval: Interval,
    max_test: u32,
    tails: &[f64],
) -> Result<EquidistReport> {
    use crate::tracezoo::{extract_angles, kloosterman_all, AngleFamily};
    let mut weyl_sums = BTreeMap::new();
    let mut tail_counts = BTreeMap::new();
    let (ks, moment1, moment2) = match family {
        EquidistFamily::InverseFractional => {
            let f = RationalFunctionModM::inverse_power(1, 1);
            for h in 1..=max_test {
                let w = weyl_sum_fractional(&f, p, interval, h as i64)?;
                weyl_sums.insert(h, (w.re, w.im));
            }
            let ks = ks_distance(&fractional_parts(&f, p, interval), uniform_cdf)?;
            (ks, None, None)
        }
        EquidistFamily::Birch | EquidistFamily::Kloosterman => {
            let (table, angle_family) = if family == EquidistFamily::Birch {
                (birch_all(p)?, AngleFamily::Birch)
            } else {
                (kloosterman_all(1, p)?, AngleFamily::Kloosterman)
            };
            let sample = extract_angles(&table, angle_family)?;
            for d in 1..=max_test {
                weyl_sums.insert(d, (weyl_sum_satotate(&sample, interval, d)?, 0.0));
            }
            let restricted = restrict(&sample, p, interval);
            let ks = ks_satotate(&restricted)?;
            let (m1, m2) = birch_moments(&table, interval)?;
            for &t in tails {
                tail_counts.insert(format!("{t:.2}"), birch_tail_counts(&table, interval, t)?);
            }
            (ks, Some((m1.re, m1.im)), Some(m2))
        }
    };
    Ok(EquidistReport {
        family,
        p: p.value(),
        interval: (interval.start, interval.len),
        weyl_sums,
        ks_distance: ks,
        moment1,
        moment2,
        tail_counts,
    })
}

/// Sub-sample of the angles whose index lies in `interval`.
pub fn restrict(sample: &AngleSample, p: &Modulus, interval: Interval) -> AngleSample {
    let mut indices = Vec::new();
    let mut angles = Vec::new();
    for n in interval.iter() {
        let r = p.reduce(n);
        if let Some(t) = sample.angle(r) {
            indices.push(r);
            angles.push(t);
        }
    }
    AngleSample {
        p: sample.p,
        family: sample.family,
        indices,
        angles,
        excluded: sample.excluded.clone(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HistogramBin {
    pub bin_left: f64,
    pub bin_right: f64,
    pub count: u64,
    /// Expected count under Sato-Tate.
    pub satotate_mass: f64,
}

/// Equal-width histogram of angles on `[0, pi]` alongside the Sato-Tate mass.
pub fn angle_histogram(sample: &AngleSample, bins: usize) -> Vec<HistogramBin> {
    let bins = bins.max(1);
    let width = PI / bins as f64;
    let mut counts = vec![0u64; bins];
    for &t in &sample.angles {
        let i = ((t / width) as usize).min(bins - 1);
        counts[i] += 1;
    }
    let n = sample.angles.len() as f64;
    counts
        .into_iter()
        .enumerate()
        .map(|(i, count)| {
            let (l, r) = (i as f64 * width, ((i + 1) as f64 * width).min(PI));
            let mass = satotate_cdf(r).unwrap_or(1.0) - satotate_cdf(l).unwrap_or(0.0);
            HistogramBin {
                bin_left: l,
                bin_right: r,
                count,
                satotate_mass: mass * n,
            }
        })
        .collect()
}
