//! Partial sums `S(phi, N)`, interval sums, sliding-window maxima and the
//! cancellation functional
//!
//! `Delta(phi, N) = m^{-1/2} + max_{1 <= t <= m/2} min(1/(ct), 1/(cN)) (|S(phi,t)| + |S(phi,-t)|)`.
//!
//! `m/2` is read as `floor(m/2)` throughout. The maximum is taken over integer
//! `t`: the weight is continuous and non-increasing in `t` while the two-sided
//! sum is a step function that only changes at integers, so the supremum over
//! real `t` is attained at an integer.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectrum::{FunctionTable, SpectralPair};

/// The integers `start, start + 1, ..., start + len - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Interval {
    pub start: i64,
    pub len: u64,
}

impl Interval {
    pub fn new(start: i64, len: u64) -> Self {
        Self { start, len }
    }

    /// `[a, b]`, both ends included.
    pub fn closed(a: i64, b: i64) -> Self {
        assert!(b >= a, "empty closed interval");
        Self::new(a, (b - a + 1) as u64)
    }

    pub fn end_inclusive(&self) -> i64 {
        self.start + self.len as i64 - 1
    }

    pub fn iter(&self) -> impl Iterator<Item = i64> {
        self.start..self.start + self.len as i64
    }
}

/// Prefix sums `prefix[k] = phi(0) + ... + phi(k - 1)`.
#[derive(Debug, Clone)]
pub struct PartialSumTable<'a> {
    table: &'a FunctionTable,
    prefix: Vec<Complex64>,
}

impl<'a> PartialSumTable<'a> {
    pub fn new(table: &'a FunctionTable) -> Self {
        let mut prefix = Vec::with_capacity(table.values().len() + 1);
        let mut acc = Complex64::new(0.0, 0.0);
        prefix.push(acc);
        for &v in table.values() {
            acc += v;
            prefix.push(acc);
        }
        Self { table, prefix }
    }

    pub fn table(&self) -> &FunctionTable {
        self.table
    }

    pub fn prefix(&self) -> &[Complex64] {
        &self.prefix
    }

    fn half(&self) -> i64 {
        (self.table.m() / 2) as i64
    }

    /// `S(phi, N)`; the sum over `1..=N` for `N > 0`, over `N..=-1` for `N < 0`,
    /// and 0 for `N = 0`.
    pub fn partial_sum(&self, n: i64) -> Result<Complex64> {
        let half = self.half();
        if n.abs() > half {
            return Err(Error::OutOfRange {
                value: n,
                min: -half,
                max: half,
            });
        }
        let m = self.table.m() as usize;
        Ok(match n {
            0 => Complex64::new(0.0, 0.0),
            n if n > 0 => self.prefix[n as usize + 1] - self.prefix[1],
            n => self.prefix[m] - self.prefix[m - n.unsigned_abs() as usize],
        })
    }

    /// `sum_{n in I} phi(n mod m)` by two prefix lookups with wraparound.
    pub fn interval_sum(&self, interval: Interval) -> Result<Complex64> {
        let m = self.table.m();
        if interval.len > m {
            return Err(Error::IntervalTooLong {
                len: interval.len,
                m,
            });
        }
        let a = self.table.modulus().reduce(interval.start) as usize;
        let end = a + interval.len as usize;
        let m = m as usize;
        Ok(if end <= m {
            self.prefix[end] - self.prefix[a]
        } else {
            (self.prefix[m] - self.prefix[a]) + self.prefix[end - m]
        })
    }

    /// `|S(phi,t)| + |S(phi,-t)|` for `t = 1..=floor(m/2)`, entry `t - 1`.
    pub fn two_sided_profile(&self) -> Vec<f64> {
        let m = self.table.m() as usize;
        (1..=m / 2)
            .map(|t| {
                let pos = self.prefix[t + 1] - self.prefix[1];
                let neg = self.prefix[m] - self.prefix[m - t];
                pos.norm() + neg.norm()
            })
            .collect()
    }
}

pub fn partial_sum(table: &PartialSumTable<'_>, n: i64) -> Result<Complex64> {
    table.partial_sum(n)
}

pub fn interval_sum(table: &PartialSumTable<'_>, interval: Interval) -> Result<Complex64> {
    table.interval_sum(interval)
}

/// Evaluates `Delta(phi, N)` repeatedly against one precomputed two-sided
/// profile; each query is a single O(m) scan.
#[derive(Debug, Clone)]
pub struct DeltaEvaluator {
    m: u64,
    c: f64,
    two_sided: Vec<f64>,
}

impl DeltaEvaluator {
    pub fn new(phi: &FunctionTable, c: f64) -> Self {
        Self {
            m: phi.m(),
            c,
            two_sided: PartialSumTable::new(phi).two_sided_profile(),
        }
    }

    pub fn for_pair(pair: &SpectralPair) -> Self {
        Self::new(&pair.phi, pair.c)
    }

    pub fn half(&self) -> u64 {
        self.m / 2
    }

    /// `|S(phi,t)| + |S(phi,-t)|`.
    pub fn two_sided(&self, t: u64) -> f64 {
        self.two_sided[t as usize - 1]
    }

    pub fn two_sided_profile(&self) -> &[f64] {
        &self.two_sided
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    /// `Delta(phi, N)` and the smallest maximizing `t`.
    pub fn delta_with_witness(&self, n: u64) -> Result<(f64, u64)> {
        let half = self.half();
        if n < 1 || n > half {
            return Err(Error::OutOfRange {
                value: n as i64,
                min: 1,
                max: half as i64,
            });
        }
        let c = self.c;
        let (mut best, mut arg) = (f64::NEG_INFINITY, 1);
        for (i, &s) in self.two_sided.iter().enumerate() {
            let t = i as u64 + 1;
            let w = 1.0 / (c * t.max(n) as f64);
            let v = w * s;
            if v > best {
                best = v;
                arg = t;
            }
        }
        Ok((1.0 / (self.m as f64).sqrt() + best, arg))
    }

    pub fn delta(&self, n: u64) -> Result<f64> {
        self.delta_with_witness(n).map(|(d, _)| d)
    }
}

pub fn delta(pair: &SpectralPair, n: u64) -> Result<f64> {
    DeltaEvaluator::for_pair(pair).delta(n)
}

/// `Delta(phi, N)` along an increasing grid of `N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeltaProfile {
    pub n_grid: Vec<u64>,
    pub delta_values: Vec<f64>,
}

// Both monotonicity properties are exact in real arithmetic; this slack only
// absorbs the rounding of a single product.
const MONOTONE_SLACK: f64 = 1e-12;

/// Evaluates `Delta` on `grid` and checks that `Delta` is non-increasing and
/// `N * Delta` non-decreasing before returning.
pub fn delta_profile(pair: &SpectralPair, grid: &[u64]) -> Result<DeltaProfile> {
    delta_profile_with(&DeltaEvaluator::for_pair(pair), grid)
}

pub fn delta_profile_with(eval: &DeltaEvaluator, grid: &[u64]) -> Result<DeltaProfile> {
    let delta_values = grid
        .iter()
        .map(|&n| eval.delta(n))
        .collect::<Result<Vec<_>>>()?;
    for (w, d) in grid.windows(2).zip(delta_values.windows(2)) {
        if w[1] <= w[0] {
            return Err(Error::DegenerateInput("grid must be strictly increasing"));
        }
        let scale = d[0].abs().max(1.0);
        if d[1] > d[0] + MONOTONE_SLACK * scale {
            return Err(Error::MonotonicityViolation {
                n: w[1],
                detail: "Delta increased",
            });
        }
        let (a, b) = (w[0] as f64 * d[0], w[1] as f64 * d[1]);
        if b < a - MONOTONE_SLACK * a.abs().max(1.0) {
            return Err(Error::MonotonicityViolation {
                n: w[1],
                detail: "N * Delta decreased",
            });
        }
    }
    Ok(DeltaProfile {
        n_grid: grid.to_vec(),
        delta_values,
    })
}

/// `max_a |sum_{a <= n < a + length} phi(n)|` over all `m` starting points,
/// with the smallest maximizing start.
pub fn max_interval_ratio(phi: &FunctionTable, length: u64) -> Result<(f64, i64)> {
    let m = phi.m();
    if length < 1 || length > m {
        return Err(Error::OutOfRange {
            value: length as i64,
            min: 1,
            max: m as i64,
        });
    }
    let sums = PartialSumTable::new(phi);
    let mut best = (f64::NEG_INFINITY, 0i64);
    for a in 0..m as i64 {
        let v = sums.interval_sum(Interval::new(a, length))?.norm();
        if v > best.0 {
            best = (v, a);
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modarith::Modulus;
    use crate::spectrum::{e_frac, make_spectral_pair};
    use crate::tracezoo::birch_all;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn md(m: u64) -> Modulus {
        Modulus::new(m).unwrap()
    }

    fn ones(m: u64) -> FunctionTable {
        FunctionTable::from_fn(md(m), |_| Complex64::new(1.0, 0.0))
    }

    fn random(m: u64, seed: u64) -> FunctionTable {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        FunctionTable::from_fn(md(m), |_| {
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        })
    }

    // Direct Delta from the definition, scanning t in [1, floor(m/2)] with
    // freshly summed partial sums.
    fn delta_brute(phi: &FunctionTable, c: f64, n: u64) -> f64 {
        let m = phi.m() as i64;
        let s = |t: i64| -> Complex64 {
            if t > 0 {
                (1..=t).map(|k| phi.at(k)).sum()
            } else {
                (t..=-1).map(|k| phi.at(k)).sum()
            }
        };
        let best = (1..=m / 2)
            .map(|t| {
                (1.0 / (c * t as f64)).min(1.0 / (c * n as f64)) * (s(t).norm() + s(-t).norm())
            })
            .fold(f64::NEG_INFINITY, f64::max);
        1.0 / (m as f64).sqrt() + best
    }

    #[test]
    fn partial_sum_examples() {
        let t = ones(100);
        let s = PartialSumTable::new(&t);
        assert_eq!(s.partial_sum(10).unwrap(), Complex64::new(10.0, 0.0));
        assert_eq!(s.partial_sum(-10).unwrap(), Complex64::new(10.0, 0.0));
        assert_eq!(s.partial_sum(0).unwrap(), Complex64::new(0.0, 0.0));
        assert!(matches!(s.partial_sum(51), Err(Error::OutOfRange { .. })));

        let m = 97;
        let t = FunctionTable::from_fn(md(m), |n| e_frac(n, m));
        let s = PartialSumTable::new(&t);
        let closed = (e_frac(49, m) - e_frac(1, m)) / (e_frac(1, m) - 1.0);
        let direct: Complex64 = (1..=48).map(|n| e_frac(n, m)).sum();
        assert!((closed - direct).norm() < 1e-12);
        assert!((s.partial_sum(48).unwrap() - closed).norm() < 1e-12);
    }

    #[test]
    fn prefix_invariants() {
        let t = random(211, 1);
        let s = PartialSumTable::new(&t);
        assert_eq!(s.prefix()[0], Complex64::new(0.0, 0.0));
        for k in 0..211 {
            assert!((s.prefix()[k + 1] - s.prefix()[k] - t.values()[k]).norm() < 1e-12);
        }
        let pair = make_spectral_pair(t.clone());
        let total = s.prefix()[211];
        assert!((total - pair.phi_hat.values()[0] * 211f64.sqrt()).norm() < 1e-6 * 211f64.sqrt());
    }

    #[test]
    fn interval_sum_examples() {
        let t = random(211, 2);
        let s = PartialSumTable::new(&t);
        let pair = make_spectral_pair(t.clone());
        let full = s.interval_sum(Interval::closed(0, 210)).unwrap();
        assert!((full - pair.phi_hat.values()[0] * 211f64.sqrt()).norm() < 1e-9);
        assert_eq!(
            s.interval_sum(Interval::new(17, 1)).unwrap(),
            t.values()[17]
        );
        assert!(matches!(
            s.interval_sum(Interval::new(0, 212)),
            Err(Error::IntervalTooLong { .. })
        ));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..1000 {
            let start = rng.gen_range(-1000i64..1000);
            let len = rng.gen_range(0u64..=211);
            let i = Interval::new(start, len);
            let direct: Complex64 = i.iter().map(|n| t.at(n)).sum();
            assert!((s.interval_sum(i).unwrap() - direct).norm() < 1e-10);
        }
    }

    #[test]
    fn delta_of_constant_function_is_frozen() {
        // brute force at m = 16, c = 4: every N <= 8 gives 1/4 + 1/2
        let pair = make_spectral_pair(ones(16));
        assert!((pair.c - 4.0).abs() < 1e-12);
        for n in [1, 2, 4, 8] {
            let brute = delta_brute(&pair.phi, pair.c, n);
            assert!((brute - 0.75).abs() < 1e-12);
            assert!((delta(&pair, n).unwrap() - brute).abs() < 1e-12);
        }
        assert!(delta(&pair, 0).is_err());
        assert!(delta(&pair, 9).is_err());
    }

    #[test]
    fn delta_matches_brute_force() {
        for (m, seed) in [(15, 1), (16, 2), (97, 3), (100, 4)] {
            let pair = make_spectral_pair(random(m, seed));
            for n in 1..=m / 2 {
                let a = delta(&pair, n).unwrap();
                assert!((a - delta_brute(&pair.phi, pair.c, n)).abs() < 1e-12);
                assert!(a >= 1.0 / (m as f64).sqrt());
            }
        }
    }

    #[test]
    fn delta_is_symmetric_under_reflection() {
        let pair = make_spectral_pair(random(101, 5));
        let reflected = make_spectral_pair(pair.phi.reflect());
        for n in [1, 3, 10, 50] {
            let (a, b) = (delta(&pair, n).unwrap(), delta(&reflected, n).unwrap());
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn delta_profiles() {
        let pair = make_spectral_pair(ones(16));
        let prof = delta_profile(&pair, &(1..=8).collect::<Vec<_>>()).unwrap();
        assert!(prof.delta_values.windows(2).all(|w| w[1] <= w[0]));
        let single = delta_profile(&pair, &[3]).unwrap();
        assert_eq!(single.n_grid, vec![3]);
        assert_eq!(single.delta_values.len(), 1);

        let birch = make_spectral_pair(birch_all(&md(101)).unwrap());
        let d5 = delta(&birch, 5).unwrap();
        let d10 = delta(&birch, 10).unwrap();
        assert!(d10 <= d5);

        let birch = make_spectral_pair(birch_all(&md(499)).unwrap());
        let grid: Vec<u64> = (0..8).map(|k| 1 << k).collect();
        delta_profile(&birch, &grid).unwrap();
    }

    #[test]
    fn delta_inequalities_hold() {
        let pair = make_spectral_pair(birch_all(&md(211)).unwrap());
        let eval = DeltaEvaluator::for_pair(&pair);
        for n in 1..=105 {
            let d = eval.delta(n).unwrap();
            let below = (1..=n).map(|t| eval.two_sided(t)).fold(0.0, f64::max);
            assert!(below <= pair.c * n as f64 * d * (1.0 + 1e-12));
            let above = (n..=105)
                .map(|t| eval.two_sided(t) / t as f64)
                .fold(0.0, f64::max);
            assert!(above <= pair.c * d * (1.0 + 1e-12));
        }
    }

    #[test]
    fn max_interval_examples() {
        let (v, _) = max_interval_ratio(&ones(50), 7).unwrap();
        assert!((v - 7.0).abs() < 1e-12);
        let t = FunctionTable::from_fn(md(61), |n| e_frac(n, 61));
        assert!(max_interval_ratio(&t, 61).unwrap().0 < 1e-12);
        assert!(max_interval_ratio(&t, 0).is_err());

        let b = birch_all(&md(211)).unwrap();
        let (v, a) = max_interval_ratio(&b, 15).unwrap();
        let window = |start: i64| {
            (start..start + 15)
                .map(|n| b.at(n))
                .sum::<Complex64>()
                .norm()
        };
        let best = (0..211i64).map(window).fold(f64::NEG_INFINITY, f64::max);
        assert!((v - best).abs() < 1e-10);
        assert!((window(a) - best).abs() < 1e-10);
    }
}
