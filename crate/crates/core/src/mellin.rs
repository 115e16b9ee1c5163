//! The multiplicative side: discrete logarithms, the normalized Mellin
//! transform over characters of `F_p^*`, and sums along geometric
//! progressions `x g^n`.
//!
//! Characters are enumerated against a fixed generator `g`:
//! `chi_j(g^k) = e(jk / (p - 1))`.

use num_complex::Complex64;

use crate::bounds::{witness, BoundReport};
use crate::error::{Error, Result};
use crate::modarith::{is_primitive_root, Modulus};
use crate::spectrum::{dft_fast, FunctionTable};
use crate::sums::{Interval, PartialSumTable};

#[derive(Debug, Clone)]
pub struct DlogTable {
    p: Modulus,
    generator: u64,
    // log[x] for x in 1..p; log[0] is unused
    log: Vec<u64>,
    // exp[k] = g^k for k in 0..p-1
    exp: Vec<u64>,
}

impl DlogTable {
    /// Iterates the powers of `generator`, O(p).
    pub fn build(p: &Modulus, generator: u64) -> Result<Self> {
        if !p.is_prime() {
            return Err(Error::InvalidModulus {
                m: p.value(),
                reason: "a prime modulus is required",
            });
        }
        let bad = Error::BadGenerator {
            generator,
            p: p.value(),
        };
        if !is_primitive_root(generator, p) {
            return Err(bad);
        }
        let order = p.value() - 1;
        let g = generator % p.value();
        let mut log = vec![u64::MAX; p.value() as usize];
        let mut exp = Vec::with_capacity(order as usize);
        let mut x = 1u64;
        for k in 0..order {
            if log[x as usize] != u64::MAX {
                return Err(bad);
            }
            log[x as usize] = k;
            exp.push(x);
            x = p.mul(x, g);
        }
        Ok(Self {
            p: p.clone(),
            generator: g,
            log,
            exp,
        })
    }

    pub fn p(&self) -> &Modulus {
        &self.p
    }

    pub fn generator(&self) -> u64 {
        self.generator
    }

    pub fn order(&self) -> u64 {
        self.p.value() - 1
    }

    /// `k` with `g^k = x`; `None` for `x = 0 mod p`.
    pub fn log(&self, x: u64) -> Option<u64> {
        let x = x % self.p.value();
        (x != 0).then(|| self.log[x as usize])
    }

    /// `g^k` for any integer `k`.
    pub fn power(&self, k: i64) -> u64 {
        self.exp[k.rem_euclid(self.order() as i64) as usize]
    }
}

pub fn build_dlog(p: &Modulus, generator: u64) -> Result<DlogTable> {
    DlogTable::build(p, generator)
}

fn check_same_prime(tau: &FunctionTable, dlog: &DlogTable) -> Result<()> {
    if tau.m() != dlog.p.value() {
        return Err(Error::InvalidModulus {
            m: tau.m(),
            reason: "table modulus differs from the discrete-log prime",
        });
    }
    if dlog.order() < 2 {
        return Err(Error::InvalidModulus {
            m: tau.m(),
            reason: "p - 1 must be at least 2",
        });
    }
    Ok(())
}

/// `k -> tau(x g^k)` on `Z/(p-1)Z`.
pub fn reindex(tau: &FunctionTable, dlog: &DlogTable, x: u64) -> Result<FunctionTable> {
    check_same_prime(tau, dlog)?;
    let order = Modulus::new(dlog.order())?;
    let p = &dlog.p;
    Ok(FunctionTable::from_fn(order, |k| {
        tau.values()[p.mul(x, dlog.exp[k as usize]) as usize]
    }))
}

/// `tau^(chi_j) = (p-1)^{-1/2} sum_{x != 0} tau(x) chi_j(x)`, indexed by `j`.
pub fn mellin_all(tau: &FunctionTable, dlog: &DlogTable) -> Result<FunctionTable> {
    Ok(dft_fast(&reindex(tau, dlog, 1)?))
}

/// `max_chi |tau^(chi)|` against `2 sqrt(2) c^2`.
///
/// `conductor` is a user-supplied bound on the conductor of the underlying
/// sheaf. The verdict is only given when a conductor is supplied and
/// `kummer_free` asserts the no-Kummer-component hypothesis; otherwise the
/// report is informational.
pub fn mellin_sup_check(
    tau: &FunctionTable,
    dlog: &DlogTable,
    conductor: Option<f64>,
    kummer_free: bool,
) -> Result<BoundReport> {
    let hat = mellin_all(tau, dlog)?;
    let (arg, lhs) = hat.values().iter().map(|v| v.norm()).enumerate().fold(
        (0, f64::NEG_INFINITY),
        |best, (j, v)| if v > best.1 { (j, v) } else { best },
    );
    let c = conductor.unwrap_or(f64::NAN);
    let rhs = 2.0 * 2f64.sqrt() * c * c;
    let threshold = (conductor.is_some() && kummer_free).then_some(1.0);
    let mut w = witness([
        ("p", dlog.p.value().into()),
        ("generator", dlog.generator.into()),
        ("character", arg.into()),
    ]);
    if let Some(c) = conductor {
        w.insert("conductor".into(), c.into());
    }
    Ok(BoundReport::new("mellin_sup", lhs, rhs, threshold, w))
}

/// `sum_{n in I} tau(x g^n)` for an interval of exponents.
pub fn geometric_progression_sum(
    tau: &FunctionTable,
    dlog: &DlogTable,
    x: u64,
    interval: Interval,
) -> Result<Complex64> {
    if x % dlog.p.value() == 0 {
        return Err(Error::DegenerateInput(
            "progression base must be nonzero mod p",
        ));
    }
    let seq = reindex(tau, dlog, x)?;
    PartialSumTable::new(&seq).interval_sum(interval)
}

/// `2 sqrt(2) c^2 sqrt(p-1) log(4 e^8 |I| / sqrt(p-1))`.
pub fn geometric_progression_bound(c: f64, p: u64, len: u64) -> f64 {
    let s = ((p - 1) as f64).sqrt();
    2.0 * 2f64.sqrt() * c * c * s * ((4.0 * len as f64 / s).ln() + 8.0)
}
