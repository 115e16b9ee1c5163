//! Exact integer arithmetic modulo `m`.
//!
//! Residues are `u64` values in `0..m`. Every product goes through a `u128`
//! intermediate, so any modulus below `2^63` is safe.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

#[inline]
pub fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 + b as u128) % m as u128) as u64
}

/// `x^e mod m` by square-and-multiply on raw integers.
pub fn pow_mod_u64(x: u64, mut e: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut base = x % m;
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        e >>= 1;
    }
    acc
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Trial division, ascending primes.
fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Sieve of Eratosthenes, all primes `<= n`.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            primes.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    primes
}

/// Primality by trial division, for use on ladder construction where building
/// a full [`Modulus`] would be wasteful.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Smallest prime `>= n`.
pub fn next_prime(mut n: u64) -> u64 {
    while !is_prime(n) {
        n += 1;
    }
    n
}

/// A validated modulus `m >= 2` together with its factorization.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Modulus {
    m: u64,
    is_prime: bool,
    factorization: Vec<(u64, u32)>,
    omega: usize,
}

impl Modulus {
    pub fn new(m: u64) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidModulus {
                m,
                reason: "modulus must be at least 2",
            });
        }
        if m >= 1 << 63 {
            return Err(Error::InvalidModulus {
                m,
                reason: "modulus must be below 2^63",
            });
        }
        let factorization = factorize(m);
        let is_prime = factorization.len() == 1 && factorization[0] == (m, 1);
        let omega = factorization.len();
        Ok(Self {
            m,
            is_prime,
            factorization,
            omega,
        })
    }

    /// Like [`Modulus::new`] but rejects composite `p`.
    pub fn prime(p: u64) -> Result<Self> {
        let m = Self::new(p)?;
        if !m.is_prime {
            return Err(Error::InvalidModulus {
                m: p,
                reason: "modulus must be prime",
            });
        }
        Ok(m)
    }

    #[inline]
    pub fn value(&self) -> u64 {
        self.m
    }

    pub fn is_prime(&self) -> bool {
        self.is_prime
    }

    pub fn factorization(&self) -> &[(u64, u32)] {
        &self.factorization
    }

    /// Number of distinct prime factors.
    pub fn omega(&self) -> usize {
        self.omega
    }

    pub fn is_squarefree(&self) -> bool {
        self.factorization.iter().all(|&(_, e)| e == 1)
    }

    /// Canonical representative of an arbitrary integer.
    #[inline]
    pub fn reduce(&self, x: i64) -> u64 {
        x.rem_euclid(self.m as i64) as u64
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        mul_mod(a, b, self.m)
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        add_mod(a, b, self.m)
    }

    pub fn pow(&self, x: u64, e: u64) -> u64 {
        pow_mod_u64(x, e, self.m)
    }

    pub fn inverse(&self, x: u64) -> Result<u64> {
        mod_inverse(x, self)
    }

    fn require_odd_prime(&self) -> Result<()> {
        if !self.is_prime || self.m == 2 {
            return Err(Error::InvalidModulus {
                m: self.m,
                reason: "an odd prime is required",
            });
        }
        Ok(())
    }
}

pub fn pow_mod(x: u64, e: u64, m: &Modulus) -> u64 {
    m.pow(x, e)
}

/// Inverse via the extended Euclidean algorithm; works for composite moduli.
pub fn mod_inverse(x: u64, m: &Modulus) -> Result<u64> {
    let modulus = m.value() as i128;
    let (mut r0, mut r1) = (modulus, (x % m.value()) as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    if r0 != 1 {
        return Err(Error::NotInvertible { x, m: m.value() });
    }
    Ok(s0.rem_euclid(modulus) as u64)
}

/// Legendre symbol `(a/p)` by Euler's criterion.
pub fn legendre_symbol(a: u64, p: &Modulus) -> Result<i8> {
    p.require_odd_prime()?;
    let a = a % p.value();
    if a == 0 {
        return Ok(0);
    }
    Ok(if p.pow(a, (p.value() - 1) / 2) == 1 {
        1
    } else {
        -1
    })
}

/// Whether `g` has multiplicative order exactly `p - 1` modulo the prime `p`.
pub fn is_primitive_root(g: u64, p: &Modulus) -> bool {
    let g = g % p.value();
    if !p.is_prime() || g == 0 {
        return false;
    }
    let order = p.value() - 1;
    factorize(order)
        .iter()
        .all(|&(q, _)| p.pow(g, order / q) != 1)
}

/// Smallest primitive root `g >= 2` of an odd prime.
pub fn primitive_root(p: &Modulus) -> Result<u64> {
    p.require_odd_prime()?;
    let order = p.value() - 1;
    let factors = factorize(order);
    (2..p.value())
        .find(|&g| factors.iter().all(|&(q, _)| p.pow(g, order / q) != 1))
        .ok_or(Error::InvalidModulus {
            m: p.value(),
            reason: "no primitive root found",
        })
}

/// Polynomial with integer coefficients, lowest degree first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Poly {
    coeffs: Vec<i64>,
}

impl Poly {
    pub fn new(coeffs: Vec<i64>) -> Self {
        Self { coeffs }
    }

    pub fn constant(c: i64) -> Self {
        Self::new(vec![c])
    }

    pub fn zero() -> Self {
        Self::new(Vec::new())
    }

    /// The monomial `X^k`.
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![0; k + 1];
        coeffs[k] = 1;
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    /// Degree after reduction mod `m`; `None` for the zero polynomial.
    pub fn degree(&self, m: &Modulus) -> Option<usize> {
        self.coeffs.iter().rposition(|&c| m.reduce(c) != 0)
    }

    /// Leading coefficient mod `m` (zero for the zero polynomial).
    pub fn leading_coefficient(&self, m: &Modulus) -> u64 {
        self.degree(m).map_or(0, |d| m.reduce(self.coeffs[d]))
    }

    pub fn is_zero(&self, m: &Modulus) -> bool {
        self.degree(m).is_none()
    }

    /// Horner evaluation at a residue.
    pub fn eval(&self, x: u64, m: &Modulus) -> u64 {
        let x = x % m.value();
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| m.add(m.mul(acc, x), m.reduce(c)))
    }
}

/// `f = numerator / denominator` over `Z/mZ`, with a designated value at poles.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalFunctionModM {
    pub numerator: Poly,
    pub denominator: Poly,
    pub pole_value: u64,
}

impl RationalFunctionModM {
    pub fn new(numerator: Poly, denominator: Poly) -> Result<Self> {
        if denominator.coeffs().iter().all(|&c| c == 0) {
            return Err(Error::DegenerateInput("denominator is the zero polynomial"));
        }
        Ok(Self {
            numerator,
            denominator,
            pole_value: 0,
        })
    }

    pub fn polynomial(p: Poly) -> Self {
        Self {
            numerator: p,
            denominator: Poly::constant(1),
            pole_value: 0,
        }
    }

    /// `a * X^{-k}`.
    pub fn inverse_power(a: i64, k: usize) -> Self {
        Self {
            numerator: Poly::constant(a),
            denominator: Poly::monomial(k),
            pole_value: 0,
        }
    }

    pub fn with_pole_value(mut self, v: u64) -> Self {
        self.pole_value = v;
        self
    }

    /// `None` at a pole.
    pub fn eval(&self, n: u64, m: &Modulus) -> Option<u64> {
        rational_eval(self, n, m)
    }

    /// Value with the pole convention applied.
    pub fn eval_or_pole(&self, n: u64, m: &Modulus) -> u64 {
        self.eval(n, m).unwrap_or(self.pole_value % m.value())
    }
}

/// `f(n) mod m`, or `None` when `n` is a pole (or the denominator is not
/// invertible at `n` for composite `m`).
pub fn rational_eval(f: &RationalFunctionModM, n: u64, m: &Modulus) -> Option<u64> {
    let den = f.denominator.eval(n, m);
    let inv = mod_inverse(den, m).ok()?;
    Some(m.mul(f.numerator.eval(n, m), inv))
}
