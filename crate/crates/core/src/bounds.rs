//! Inequality checks that emit [`BoundReport`]s.
//!
//! Exact inequalities (Polya-Vinogradov kernel, the explicit short-interval
//! bound, the squarefree Fourier sup bound) get a hard pass/fail verdict.
//! Bounds that only hold up to an unspecified constant are compared against a
//! calibrated threshold or reported without a verdict.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::modarith::{Modulus, Poly};
use crate::spectrum::{dft_fast, e_frac, make_spectral_pair, FunctionTable, SpectralPair};
use crate::sums::{max_interval_ratio, DeltaEvaluator, Interval, PartialSumTable};

/// Relative float slack for inequalities that are exact in real arithmetic.
pub const FLOAT_SLACK: f64 = 1e-6;

/// Fixed exponent slack in the Weyl bound.
pub const WEYL_EPSILON: f64 = 0.01;

/// Parameters identifying where a bound was evaluated.
pub type Witness = BTreeMap<String, Value>;

/// One evaluated inequality `lhs <= rhs`, possibly up to a threshold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    pub witness: Witness,
    /// `None` for report-only checks.
    pub passed: Option<bool>,
    pub threshold: Option<f64>,
}

impl BoundReport {
    /// A report with verdict `ratio <= threshold`, or report-only when
    /// `threshold` is `None`.
    pub fn new(name: &str, lhs: f64, rhs: f64, threshold: Option<f64>, witness: Witness) -> Self {
        let ratio = lhs / rhs;
        Self {
            name: name.to_string(),
            lhs,
            rhs,
            ratio,
            witness,
            passed: threshold.map(|t| ratio <= t),
            threshold,
        }
    }

    /// True unless a verdict was given and it failed.
    pub fn ok(&self) -> bool {
        self.passed.unwrap_or(true)
    }
}

/// Builds a witness map from `(key, value)` pairs.
pub fn witness<const N: usize>(entries: [(&str, Value); N]) -> Witness {
    entries
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect()
}

fn interval_indicator(m: &Modulus, interval: Interval) -> FunctionTable {
    let mut values = vec![Complex64::new(0.0, 0.0); m.value() as usize];
    for n in interval.iter() {
        values[m.reduce(n) as usize] = Complex64::new(1.0, 0.0);
    }
    FunctionTable::new(m.clone(), values).expect("length matches")
}

/// `sum_h |1_I^(h)| <= sqrt(m) log(3m)`.
pub fn check_pv_kernel(m: &Modulus, interval: Interval) -> Result<BoundReport> {
    if interval.len > m.value() {
        return Err(Error::IntervalTooLong {
            len: interval.len,
            m: m.value(),
        });
    }
    let hat = dft_fast(&interval_indicator(m, interval));
    let lhs: f64 = hat.values().iter().map(|v| v.norm()).sum();
    let mf = m.value() as f64;
    let rhs = mf.sqrt() * (3.0 * mf).ln();
    Ok(BoundReport::new(
        "pv_kernel",
        lhs,
        rhs,
        Some(1.0),
        witness([
            ("m", m.value().into()),
            ("start", interval.start.into()),
            ("length", interval.len.into()),
        ]),
    ))
}

/// Right-hand side `c sqrt(m) log(4 e^8 L / sqrt(m))` of the short-interval bound.
pub fn thm1_rhs(c: f64, m: u64, length: u64) -> f64 {
    let sm = (m as f64).sqrt();
    c * sm * ((4.0 * length as f64 / sm).ln() + 8.0)
}

/// For each length `L` in `(sqrt(m), m]`, compares the largest sum over an
/// interval of length `L` with `c sqrt(m) log(4 e^8 L / sqrt(m))`.
pub fn check_thm1(pair: &SpectralPair, lengths: &[u64]) -> Result<Vec<BoundReport>> {
    let m = pair.m();
    lengths
        .iter()
        .map(|&len| {
            if len as u128 * len as u128 <= m as u128 || len > m {
                return Err(Error::LengthOutOfRange { len, m });
            }
            let (lhs, start) = max_interval_ratio(&pair.phi, len)?;
            Ok(BoundReport::new(
                "thm1",
                lhs,
                thm1_rhs(pair.c, m, len),
                Some(1.0 + FLOAT_SLACK),
                witness([
                    ("m", m.into()),
                    ("length", len.into()),
                    ("start", start.into()),
                    ("c", pair.c.into()),
                ]),
            ))
        })
        .collect()
}

/// `floor(m/N)` clamped to `[1, floor(m/2)]`.
pub fn dual_scale(m: u64, n: u64) -> u64 {
    (m / n).clamp(1, (m / 2).max(1))
}

/// `|S(phi^, N)| + |S(phi^, -N)|` against `c sqrt(N) m^{1/4} Delta(phi, m/N)^{1/2}`.
pub fn transfer_ratio(pair: &SpectralPair, n: u64, c_transfer: f64) -> Result<BoundReport> {
    transfer_ratio_with(pair, &DeltaEvaluator::for_pair(pair), n, c_transfer)
}

/// [`transfer_ratio`] reusing a precomputed `Delta` evaluator for `pair.phi`.
pub fn transfer_ratio_with(
    pair: &SpectralPair,
    phi_delta: &DeltaEvaluator,
    n: u64,
    c_transfer: f64,
) -> Result<BoundReport> {
    let m = pair.m();
    if n < 2 || n > m / 2 {
        return Err(Error::OutOfRange {
            value: n as i64,
            min: 2,
            max: (m / 2) as i64,
        });
    }
    let hat_sums = PartialSumTable::new(&pair.phi_hat);
    let lhs = hat_sums.partial_sum(n as i64)?.norm() + hat_sums.partial_sum(-(n as i64))?.norm();
    let scale = dual_scale(m, n);
    let d = phi_delta.delta(scale)?;
    let rhs = pair.c * (n as f64).sqrt() * (m as f64).powf(0.25) * d.sqrt();
    Ok(BoundReport::new(
        "transfer",
        lhs,
        rhs,
        Some(c_transfer),
        witness([
            ("m", m.into()),
            ("n", n.into()),
            ("dual_scale", scale.into()),
            ("c", pair.c.into()),
        ]),
    ))
}

/// `Delta(phi^, sqrt(m))` against `Delta(phi, sqrt(m))^{1/2}`.
pub fn delta_transfer_ratio(pair: &SpectralPair, c_transfer: f64) -> Result<BoundReport> {
    let m = pair.m();
    if m < 4 {
        return Err(Error::OutOfRange {
            value: m as i64,
            min: 4,
            max: i64::MAX,
        });
    }
    let n = (m as f64).sqrt().floor() as u64;
    let n = n.clamp(1, m / 2);
    let lhs = DeltaEvaluator::new(&pair.phi_hat, pair.c).delta(n)?;
    let rhs = DeltaEvaluator::for_pair(pair).delta(n)?.sqrt();
    Ok(BoundReport::new(
        "delta_transfer",
        lhs,
        rhs,
        Some(c_transfer),
        witness([("m", m.into()), ("n", n.into()), ("c", pair.c.into())]),
    ))
}

fn check_squarefree_poly(p: &Poly, m: &Modulus) -> Result<usize> {
    if !m.is_squarefree() {
        return Err(Error::NotSquarefree { m: m.value() });
    }
    let lead = p.leading_coefficient(m);
    if m.inverse(lead).is_err() {
        return Err(Error::BadLeadingCoefficient {
            coeff: lead,
            m: m.value(),
        });
    }
    let d = p.degree(m).unwrap_or(0);
    if d < 3 {
        return Err(Error::DegenerateInput(
            "polynomial degree must be at least 3",
        ));
    }
    Ok(d)
}

/// `|sum_{1<=h<=H} e_m(P(h))|` against `H^{1+eps} (1/H + m/H^d)^{2^{1-d}}`.
/// The implied constant is unknown, so the report carries no verdict.
pub fn weyl_bound_ratio(poly: &Poly, m: &Modulus, h: u64) -> Result<BoundReport> {
    let d = check_squarefree_poly(poly, m)?;
    if h < 1 || h > m.value() {
        return Err(Error::OutOfRange {
            value: h as i64,
            min: 1,
            max: m.value() as i64,
        });
    }
    let lhs = (1..=h)
        .map(|x| e_frac(poly.eval(x, m), m.value()))
        .sum::<Complex64>()
        .norm();
    let kappa = 1.0 / 2f64.powi(d as i32 - 1);
    let hf = h as f64;
    let inner = 1.0 / hf + m.value() as f64 / hf.powi(d as i32);
    let rhs = hf.powf(1.0 + WEYL_EPSILON) * inner.powf(kappa);
    Ok(BoundReport::new(
        "weyl",
        lhs,
        rhs,
        None,
        witness([
            ("m", m.value().into()),
            ("h", h.into()),
            ("degree", d.into()),
            ("epsilon", WEYL_EPSILON.into()),
        ]),
    ))
}

/// `|phi^|_inf <= (d - 1)^{omega(m)}` for `phi = e_m(P(.))`, `m` squarefree.
pub fn check_fourier_sup_squarefree(poly: &Poly, m: &Modulus) -> Result<BoundReport> {
    let d = check_squarefree_poly(poly, m)?;
    let phi = FunctionTable::from_fn(m.clone(), |x| e_frac(poly.eval(x, m), m.value()));
    let pair = make_spectral_pair(phi);
    let lhs = pair.phi_hat.sup_norm();
    let rhs = ((d - 1) as f64).powi(m.omega() as i32);
    Ok(BoundReport::new(
        "fourier_sup_squarefree",
        lhs,
        rhs,
        Some(1.0 + 1e-6 / rhs),
        witness([
            ("m", m.value().into()),
            ("degree", d.into()),
            ("omega", m.omega().into()),
        ]),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tracezoo::Family;
    use std::f64::consts::PI;

    fn md(m: u64) -> Modulus {
        Modulus::new(m).unwrap()
    }

    #[test]
    fn report_invariants() {
        let r = BoundReport::new("x", 3.0, 4.0, Some(1.0), Witness::new());
        assert!((r.ratio * r.rhs - r.lhs).abs() <= 1e-12 * r.lhs);
        assert_eq!(r.passed, Some(true));
        let r = BoundReport::new("x", 5.0, 4.0, Some(1.0), Witness::new());
        assert_eq!(r.passed, Some(false));
        assert!(!r.ok());
        let r = BoundReport::new("x", 5.0, 4.0, None, Witness::new());
        assert_eq!(r.passed, None);
        assert!(r.ok());
    }

    #[test]
    fn report_json_field_names() {
        let r = BoundReport::new("pv", 1.0, 2.0, Some(1.0), witness([("m", 7.into())]));
        let v = serde_json::to_value(&r).unwrap();
        let keys: Vec<&str> = v.as_object().unwrap().keys().map(|k| k.as_str()).collect();
        let mut expected = vec![
            "name",
            "lhs",
            "rhs",
            "ratio",
            "witness",
            "passed",
            "threshold",
        ];
        expected.sort();
        let mut keys = keys;
        keys.sort();
        assert_eq!(keys, expected);
        assert_eq!(v["witness"]["m"], 7);
    }

    #[test]
    fn pv_kernel_examples() {
        let r = check_pv_kernel(&md(2), Interval::new(0, 1)).unwrap();
        assert!((r.lhs - 2f64.sqrt()).abs() < 1e-12);
        assert!((r.rhs - 2f64.sqrt() * 6f64.ln()).abs() < 1e-12);
        assert_eq!(r.passed, Some(true));
        let r = check_pv_kernel(&md(50), Interval::new(13, 50)).unwrap();
        assert!((r.lhs - 50f64.sqrt()).abs() < 1e-9);
        assert_eq!(r.passed, Some(true));
        assert!(check_pv_kernel(&md(97), Interval::new(0, 10)).unwrap().ok());
        assert!(check_pv_kernel(&md(5), Interval::new(0, 6)).is_err());
    }

    #[test]
    fn thm1_examples() {
        let pair = make_spectral_pair(Family::Ones.table(&md(100)).unwrap());
        let r = &check_thm1(&pair, &[50]).unwrap()[0];
        assert!((r.lhs - 50.0).abs() < 1e-9);
        // c = sqrt(m) = 10, so rhs = 10 * 10 * log(4 e^8 * 5)
        assert!((r.rhs - 100.0 * (20f64.ln() + 8.0)).abs() < 1e-9);
        assert_eq!(r.passed, Some(true));
        assert!(matches!(
            check_thm1(&pair, &[10]),
            Err(Error::LengthOutOfRange { .. })
        ));
        assert!(check_thm1(&pair, &[101]).is_err());
    }

    #[test]
    fn transfer_smoke() {
        let pair = make_spectral_pair(Family::Ones.table(&md(16)).unwrap());
        let r = transfer_ratio(&pair, 2, 3.0).unwrap();
        assert!(r.lhs.is_finite() && r.rhs.is_finite() && r.ratio.is_finite());
        assert!(transfer_ratio(&pair, 1, 3.0).is_err());
        assert!(transfer_ratio(&pair, 9, 3.0).is_err());

        // phi = 1_{0}: phi^ = m^{-1/2}, so lhs = 2N / sqrt(m)
        let pair = make_spectral_pair(Family::Delta.table(&md(101)).unwrap());
        for n in [2, 7, 50] {
            let r = transfer_ratio(&pair, n, 3.0).unwrap();
            assert!((r.lhs - 2.0 * n as f64 / 101f64.sqrt()).abs() < 1e-12);
        }

        let r = delta_transfer_ratio(
            &make_spectral_pair(Family::Ones.table(&md(16)).unwrap()),
            3.0,
        )
        .unwrap();
        assert!(r.ratio.is_finite());
        assert_eq!(r.witness["n"], 4);
    }

    #[test]
    fn dual_scale_clamps() {
        assert_eq!(dual_scale(100, 3), 33);
        assert_eq!(dual_scale(100, 1), 50);
        assert_eq!(dual_scale(100, 200), 1);
    }

    #[test]
    fn weyl_examples() {
        let cube = Poly::monomial(3);
        let r = weyl_bound_ratio(&cube, &md(7), 7).unwrap();
        assert!((r.lhs - (1.0 + 6.0 * (2.0 * PI / 7.0).cos()).abs()).abs() < 1e-12);
        assert!((r.lhs - 4.741).abs() < 1e-3);
        assert_eq!(r.passed, None);
        assert!((weyl_bound_ratio(&cube, &md(7), 1).unwrap().lhs - 1.0).abs() < 1e-12);
        assert!(matches!(
            weyl_bound_ratio(&cube, &md(12), 3),
            Err(Error::NotSquarefree { m: 12 })
        ));
        assert!(matches!(
            weyl_bound_ratio(&Poly::new(vec![0, 0, 0, 5]), &md(35), 3),
            Err(Error::BadLeadingCoefficient { .. })
        ));
        let m = md(10_007);
        let h = (10_007f64).powf(2.0 / 3.0).ceil() as u64;
        let r = weyl_bound_ratio(&cube, &m, h).unwrap();
        assert!(r.ratio.is_finite() && r.ratio > 0.0);
    }

    #[test]
    fn fourier_sup_examples() {
        let cube = Poly::monomial(3);
        let r = check_fourier_sup_squarefree(&cube, &md(7)).unwrap();
        assert_eq!(r.rhs, 2.0);
        assert!(r.lhs <= 2.0 + 1e-6);
        let r = check_fourier_sup_squarefree(&cube, &md(35)).unwrap();
        assert_eq!(r.rhs, 4.0);
        assert!(r.ok());
        let r = check_fourier_sup_squarefree(&Poly::monomial(4), &md(7)).unwrap();
        assert_eq!(r.rhs, 3.0);
        assert!(r.ok());
        assert!(check_fourier_sup_squarefree(&cube, &md(49)).is_err());
    }
}
