//! The normalized discrete Fourier transform
//! `phi_hat(h) = m^{-1/2} sum_x phi(x) e(hx/m)` and the tables it acts on.

mod fft;

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::modarith::Modulus;

pub use fft::{DftPlan, Sign};

/// `e(num/den) = exp(2 pi i num/den)`, with `num` already an exact residue.
#[inline]
pub fn e_frac(num: u64, den: u64) -> Complex64 {
    let r = num % den;
    Complex64::from_polar(1.0, 2.0 * PI * (r as f64 / den as f64))
}

/// Values of an `m`-periodic function on the residues `0..m`.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionTable {
    modulus: Modulus,
    values: Vec<Complex64>,
    sup_norm: f64,
}

impl FunctionTable {
    pub fn new(modulus: Modulus, values: Vec<Complex64>) -> Result<Self> {
        if values.len() as u64 != modulus.value() {
            return Err(Error::DegenerateInput(
                "table length differs from the modulus",
            ));
        }
        let sup_norm = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
        Ok(Self {
            modulus,
            values,
            sup_norm,
        })
    }

    pub fn from_fn(modulus: Modulus, f: impl FnMut(u64) -> Complex64) -> Self {
        let values = (0..modulus.value()).map(f).collect();
        Self::new(modulus, values).expect("length matches by construction")
    }

    pub fn modulus(&self) -> &Modulus {
        &self.modulus
    }

    pub fn m(&self) -> u64 {
        self.modulus.value()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn sup_norm(&self) -> f64 {
        self.sup_norm
    }

    /// `phi(n mod m)` for any integer `n`.
    pub fn at(&self, n: i64) -> Complex64 {
        self.values[self.modulus.reduce(n) as usize]
    }

    /// `x -> phi(-x)`.
    pub fn reflect(&self) -> Self {
        Self::from_fn(self.modulus.clone(), |x| self.at(-(x as i64)))
    }

    /// `x -> phi(x + a)`.
    pub fn shift(&self, a: i64) -> Self {
        Self::from_fn(self.modulus.clone(), |x| self.at(x as i64 + a))
    }

    pub fn l2_norm_sq(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum()
    }

    /// Largest absolute imaginary part.
    pub fn max_imag(&self) -> f64 {
        self.values.iter().map(|v| v.im.abs()).fold(0.0, f64::max)
    }

    /// Binary cache encoding: little-endian `u64 m`, then `m` pairs `(re, im)` of `f64`.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(8 + 16 * self.values.len());
        out.extend_from_slice(&self.m().to_le_bytes());
        for v in &self.values {
            out.extend_from_slice(&v.re.to_le_bytes());
            out.extend_from_slice(&v.im.to_le_bytes());
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let header: [u8; 8] = bytes
            .get(..8)
            .and_then(|h| h.try_into().ok())
            .ok_or_else(|| Error::CacheCorrupt("truncated header".into()))?;
        let m = u64::from_le_bytes(header);
        let expected = m
            .checked_mul(16)
            .and_then(|b| b.checked_add(8))
            .ok_or_else(|| Error::CacheCorrupt(format!("absurd length {m}")))?;
        if bytes.len() as u64 != expected {
            return Err(Error::CacheCorrupt(format!(
                "header says m = {m} ({expected} bytes), found {} bytes",
                bytes.len()
            )));
        }
        let modulus = Modulus::new(m).map_err(|e| Error::CacheCorrupt(e.to_string()))?;
        let f = |chunk: &[u8]| f64::from_le_bytes(chunk.try_into().expect("8-byte chunk"));
        let values = bytes[8..]
            .chunks_exact(16)
            .map(|c| Complex64::new(f(&c[..8]), f(&c[8..])))
            .collect();
        Self::new(modulus, values)
    }
}

fn normalized(table: &FunctionTable, raw: Vec<Complex64>) -> FunctionTable {
    let scale = 1.0 / (table.m() as f64).sqrt();
    let values = raw.into_iter().map(|v| v * scale).collect();
    FunctionTable::new(table.modulus().clone(), values).expect("same length")
}

/// O(m^2) reference transform; twiddles indexed by the exact residue `hx mod m`.
pub fn dft_naive(phi: &FunctionTable) -> FunctionTable {
    naive_with_sign(phi, Sign::Plus)
}

fn naive_with_sign(phi: &FunctionTable, sign: Sign) -> FunctionTable {
    let m = phi.m();
    let roots: Vec<Complex64> = (0..m)
        .map(|j| match sign {
            Sign::Plus => e_frac(j, m),
            Sign::Minus => e_frac(j, m).conj(),
        })
        .collect();
    let raw = (0..m)
        .map(|h| {
            // r = h*x mod m, stepped exactly
            let mut r = 0u64;
            let mut acc = Complex64::new(0.0, 0.0);
            for &v in phi.values() {
                acc += v * roots[r as usize];
                r += h;
                if r >= m {
                    r -= m;
                }
            }
            acc
        })
        .collect();
    normalized(phi, raw)
}

/// Fast path for [`dft_naive`]: radix-2 or Bluestein, O(m log m).
pub fn dft_fast(phi: &FunctionTable) -> FunctionTable {
    let plan = DftPlan::new(phi.m() as usize, Sign::Plus);
    normalized(phi, plan.transform(phi.values()))
}

/// Inverse of [`dft_fast`]: kernel `e(-hx/m)`, same `m^{-1/2}` scaling.
pub fn inverse_dft(phi_hat: &FunctionTable) -> FunctionTable {
    let plan = DftPlan::new(phi_hat.m() as usize, Sign::Minus);
    normalized(phi_hat, plan.transform(phi_hat.values()))
}

pub fn inverse_dft_naive(phi_hat: &FunctionTable) -> FunctionTable {
    naive_with_sign(phi_hat, Sign::Minus)
}

/// `phi` together with its transform and `c = max(|phi|_inf, |phi_hat|_inf)`.
#[derive(Debug, Clone)]
pub struct SpectralPair {
    pub phi: FunctionTable,
    pub phi_hat: FunctionTable,
    pub c: f64,
}

impl SpectralPair {
    /// The pair with `phi_hat` as base. Its transform is `x -> phi(-x)`, which
    /// has the same sup norm, so `c` is unchanged.
    pub fn dual(&self) -> SpectralPair {
        SpectralPair {
            phi: self.phi_hat.clone(),
            phi_hat: self.phi.reflect(),
            c: self.c,
        }
    }

    pub fn m(&self) -> u64 {
        self.phi.m()
    }
}

pub fn make_spectral_pair(phi: FunctionTable) -> SpectralPair {
    let phi_hat = dft_fast(&phi);
    let c = phi.sup_norm().max(phi_hat.sup_norm());
    SpectralPair { phi, phi_hat, c }
}
