//! Concrete trace functions modulo a prime: additive and multiplicative
//! character phases, Birch and Kloosterman sums, value-set indicators, and
//! the angle / Chebyshev machinery for Sato-Tate statistics.
//!
//! Birch and Kloosterman tables are produced for every `n` at once as one
//! normalized DFT of `x -> e_p(x^3)` and `x -> e_p(a/x)`. The naive per-`n`
//! sums only appear in tests.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mellin::DlogTable;
use crate::modarith::{legendre_symbol, Modulus, Poly, RationalFunctionModM};
use crate::spectrum::{dft_fast, e_frac, FunctionTable};

const ANGLE_TOLERANCE: f64 = 1e-4;

fn require_prime(p: &Modulus) -> Result<()> {
    if !p.is_prime() {
        return Err(Error::InvalidModulus {
            m: p.value(),
            reason: "a prime modulus is required",
        });
    }
    Ok(())
}

/// `n -> e_p(g(n))`, zero at the poles of `g`.
pub fn additive_char_table(g: &RationalFunctionModM, p: &Modulus) -> Result<FunctionTable> {
    require_prime(p)?;
    let m = p.value();
    Ok(FunctionTable::from_fn(p.clone(), |n| match g.eval(n, p) {
        Some(v) => e_frac(v, m),
        None => Complex64::new(0.0, 0.0),
    }))
}

/// `n -> chi(f(n)) e_p(g(n))` where `chi(gen^k) = e(chi_index * k / (p - 1))`.
///
/// The value is 0 wherever `f` or `g` has a pole or `f(n) = 0`. Zero/pole
/// order conditions relative to the order of `chi` are not checked, so the
/// resulting `c` should always be measured from the table.
pub fn twisted_char_table(
    chi_index: u64,
    f: &RationalFunctionModM,
    g: &RationalFunctionModM,
    p: &Modulus,
    gen: u64,
) -> Result<FunctionTable> {
    require_prime(p)?;
    let dlog = DlogTable::build(p, gen)?;
    let order = p.value() - 1;
    let chi_index = chi_index % order;
    Ok(FunctionTable::from_fn(p.clone(), |n| {
        let (Some(fv), Some(gv)) = (f.eval(n, p), g.eval(n, p)) else {
            return Complex64::new(0.0, 0.0);
        };
        match dlog.log(fv) {
            Some(k) => {
                let chi = e_frac(
                    ((chi_index as u128 * k as u128) % order as u128) as u64,
                    order,
                );
                chi * e_frac(gv, p.value())
            }
            None => Complex64::new(0.0, 0.0),
        }
    }))
}

/// `B_3(n) = p^{-1/2} sum_x e_p(x^3 + nx)` for all `n`.
pub fn birch_all(p: &Modulus) -> Result<FunctionTable> {
    let cube = RationalFunctionModM::polynomial(Poly::monomial(3));
    Ok(dft_fast(&additive_char_table(&cube, p)?))
}

/// `n -> p^{-1/2} sum_{x != 0} e_p(a/x + nx)` for all `n` (including `n = 0`).
pub fn kloosterman_all(a: u64, p: &Modulus) -> Result<FunctionTable> {
    Ok(dft_fast(&inverse_power_table(a, 1, p)?))
}

/// `x -> e_p(a x^{-k})` with the value 0 at `x = 0`.
pub fn inverse_power_table(a: u64, k: usize, p: &Modulus) -> Result<FunctionTable> {
    require_prime(p)?;
    if a % p.value() == 0 {
        return Err(Error::NotInvertible { x: a, m: p.value() });
    }
    let f = RationalFunctionModM::inverse_power((a % p.value()) as i64, k.max(1));
    additive_char_table(&f, p)
}

/// Legendre symbol table `n -> (n/p)`.
pub fn legendre_table(p: &Modulus) -> Result<FunctionTable> {
    let values = (0..p.value())
        .map(|n| legendre_symbol(n, p).map(|s| Complex64::new(s as f64, 0.0)))
        .collect::<Result<Vec<_>>>()?;
    FunctionTable::new(p.clone(), values)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AngleFamily {
    Birch,
    Kloosterman,
}

/// Angles `theta_n in [0, pi]` with `2 cos(theta_n)` equal to the table value.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AngleSample {
    pub p: u64,
    pub family: AngleFamily,
    /// Index `n` of each angle, ascending.
    pub indices: Vec<u64>,
    pub angles: Vec<f64>,
    pub excluded: Vec<u64>,
}

impl AngleSample {
    pub fn len(&self) -> usize {
        self.angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }

    /// Angle at `n`, or `None` for an excluded index.
    pub fn angle(&self, n: u64) -> Option<f64> {
        self.indices.binary_search(&n).ok().map(|i| self.angles[i])
    }
}

pub fn extract_angles(table: &FunctionTable, family: AngleFamily) -> Result<AngleSample> {
    let excluded = match family {
        AngleFamily::Birch => vec![],
        AngleFamily::Kloosterman => vec![0],
    };
    let mut indices = Vec::with_capacity(table.values().len());
    let mut angles = Vec::with_capacity(table.values().len());
    for (n, v) in table.values().iter().enumerate() {
        let n = n as u64;
        if excluded.contains(&n) {
            continue;
        }
        if v.im.abs() > ANGLE_TOLERANCE {
            return Err(Error::NotRealValued {
                index: n,
                imag: v.im,
            });
        }
        if v.re.abs() > 2.0 + ANGLE_TOLERANCE {
            return Err(Error::WeilViolation {
                index: n,
                value: v.re,
            });
        }
        indices.push(n);
        angles.push((v.re / 2.0).clamp(-1.0, 1.0).acos());
    }
    Ok(AngleSample {
        p: table.m(),
        family,
        indices,
        angles,
        excluded,
    })
}

/// Chebyshev polynomial of the second kind in the normalization
/// `U_d(2 cos t) = sin((d + 1) t) / sin t`.
pub fn chebyshev_u(d: u32, x: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, x);
    if d == 0 {
        return prev;
    }
    for _ in 1..d {
        (prev, cur) = (cur, x * cur - prev);
    }
    cur
}

/// Indicator of the image `f(F_p)` and its density `|f(F_p)| / p`.
pub fn value_set_indicator(f: &Poly, p: &Modulus) -> Result<(FunctionTable, f64)> {
    require_prime(p)?;
    match f.degree(p) {
        None | Some(0) => return Err(Error::DegenerateInput("polynomial is constant mod p")),
        Some(d) if d as u64 >= p.value() => {
            return Err(Error::DegenerateInput("degree must be below p"))
        }
        _ => {}
    }
    let mut hit = vec![false; p.value() as usize];
    for y in 0..p.value() {
        hit[f.eval(y, p) as usize] = true;
    }
    let count = hit.iter().filter(|&&h| h).count();
    let table = FunctionTable::from_fn(p.clone(), |x| {
        Complex64::new(if hit[x as usize] { 1.0 } else { 0.0 }, 0.0)
    });
    Ok((table, count as f64 / p.value() as f64))
}

/// Named trace functions used as the standard test corpus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// The constant function 1.
    Ones,
    /// `e_m(n^2)`.
    GaussPhase,
    Legendre,
    Birch,
    /// `n -> Kl(n)` with `a = 1`.
    Kloosterman,
    /// `e_p(1/x)`, zero at 0.
    InverseChar,
    /// Indicator of `{0}`.
    Delta,
}

impl Family {
    pub const CORPUS: [Family; 6] = [
        Family::Ones,
        Family::GaussPhase,
        Family::Legendre,
        Family::Birch,
        Family::Kloosterman,
        Family::InverseChar,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Ones => "ones",
            Family::GaussPhase => "gauss-phase",
            Family::Legendre => "legendre",
            Family::Birch => "birch",
            Family::Kloosterman => "kloosterman",
            Family::InverseChar => "inverse-char",
            Family::Delta => "delta",
        }
    }

    pub fn parse(s: &str) -> Option<Family> {
        [Family::Delta]
            .into_iter()
            .chain(Self::CORPUS)
            .find(|f| f.name() == s)
    }

    /// Families for which the absence of Kummer components is asserted in the
    /// literature; only these get a pass/fail verdict on Mellin sup checks.
    pub fn kummer_free(self) -> bool {
        matches!(self, Family::Birch | Family::Kloosterman)
    }

    /// Whether the family needs a prime modulus.
    pub fn needs_prime(self) -> bool {
        !matches!(self, Family::Ones | Family::GaussPhase | Family::Delta)
    }

    pub fn table(self, m: &Modulus) -> Result<FunctionTable> {
        let one = Complex64::new(1.0, 0.0);
        match self {
            Family::Ones => Ok(FunctionTable::from_fn(m.clone(), |_| one)),
            Family::Delta => Ok(FunctionTable::from_fn(m.clone(), |x| {
                if x == 0 {
                    one
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })),
            Family::GaussPhase => Ok(FunctionTable::from_fn(m.clone(), |n| {
                e_frac(m.mul(n, n), m.value())
            })),
            Family::Legendre => legendre_table(m),
            Family::Birch => birch_all(m),
            Family::Kloosterman => kloosterman_all(1, m),
            Family::InverseChar => inverse_power_table(1, 1, m),
        }
    }
}
