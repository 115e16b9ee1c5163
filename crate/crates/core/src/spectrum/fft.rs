//! Unnormalized complex DFT of arbitrary length.
//!
//! Power-of-two lengths use an iterative radix-2 transform. Every other length
//! goes through Bluestein's chirp-z reduction to a power-of-two cyclic
//! convolution, which covers primes and the composite `p - 1` lengths the
//! Mellin side needs with one code path.

use std::f64::consts::PI;

use num_complex::Complex64;

/// Sign of the exponent: `Plus` computes `sum_x a(x) e(+hx/m)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    fn as_f64(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

/// Radix-2 kernel with precomputed twiddles `e(s*k/n)`, `k < n/2`.
#[derive(Debug, Clone)]
struct Radix2 {
    n: usize,
    twiddles: Vec<Complex64>,
}

impl Radix2 {
    fn new(n: usize, sign: Sign) -> Self {
        debug_assert!(n.is_power_of_two());
        let s = sign.as_f64();
        let twiddles = (0..n / 2)
            .map(|k| Complex64::from_polar(1.0, s * 2.0 * PI * k as f64 / n as f64))
            .collect();
        Self { n, twiddles }
    }

    fn process(&self, buf: &mut [Complex64]) {
        let n = self.n;
        debug_assert_eq!(buf.len(), n);
        if n <= 1 {
            return;
        }
        let bits = n.trailing_zeros();
        for i in 0..n {
            let j = i.reverse_bits() >> (usize::BITS - bits);
            if i < j {
                buf.swap(i, j);
            }
        }
        let mut half = 1;
        while half < n {
            let stride = n / (2 * half);
            for chunk in buf.chunks_exact_mut(2 * half) {
                let (lo, hi) = chunk.split_at_mut(half);
                for k in 0..half {
                    let t = hi[k] * self.twiddles[k * stride];
                    hi[k] = lo[k] - t;
                    lo[k] += t;
                }
            }
            half *= 2;
        }
    }
}

#[derive(Debug, Clone)]
enum Kind {
    Trivial,
    Pow2(Radix2),
    Bluestein {
        forward: Radix2,
        backward: Radix2,
        chirp: Vec<Complex64>,
        kernel_spectrum: Vec<Complex64>,
    },
}

/// A reusable transform of fixed length and sign.
#[derive(Debug, Clone)]
pub struct DftPlan {
    len: usize,
    kind: Kind,
}

impl DftPlan {
    pub fn new(len: usize, sign: Sign) -> Self {
        let kind = if len <= 1 {
            Kind::Trivial
        } else if len.is_power_of_two() {
            Kind::Pow2(Radix2::new(len, sign))
        } else {
            Self::bluestein(len, sign)
        };
        Self { len, kind }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    // hx = (h^2 + x^2 - (h-x)^2) / 2, so e(s*hx/m) = w(h) w(x) conj(w(h-x))
    // with w(k) = e(s*k^2/(2m)). k^2 is reduced mod 2m exactly before the
    // single trig evaluation.
    fn bluestein(m: usize, sign: Sign) -> Kind {
        let n = (2 * m - 1).next_power_of_two();
        let two_m = 2 * m as u128;
        let s = sign.as_f64();
        let chirp: Vec<Complex64> = (0..m)
            .map(|k| {
                let r = (k as u128 * k as u128) % two_m;
                Complex64::from_polar(1.0, s * PI * r as f64 / m as f64)
            })
            .collect();
        let forward = Radix2::new(n, sign.flip());
        let backward = Radix2::new(n, sign);
        let mut kernel = vec![Complex64::new(0.0, 0.0); n];
        kernel[0] = chirp[0].conj();
        for k in 1..m {
            kernel[k] = chirp[k].conj();
            kernel[n - k] = chirp[k].conj();
        }
        forward.process(&mut kernel);
        let scale = 1.0 / n as f64;
        for v in kernel.iter_mut() {
            *v *= scale;
        }
        Kind::Bluestein {
            forward,
            backward,
            chirp,
            kernel_spectrum: kernel,
        }
    }

    /// Unnormalized transform `out(h) = sum_x input(x) e(s*hx/len)`.
    pub fn transform(&self, input: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(input.len(), self.len, "input length must match the plan");
        match &self.kind {
            Kind::Trivial => input.to_vec(),
            Kind::Pow2(r) => {
                let mut buf = input.to_vec();
                r.process(&mut buf);
                buf
            }
            Kind::Bluestein {
                forward,
                backward,
                chirp,
                kernel_spectrum,
            } => {
                let mut buf = vec![Complex64::new(0.0, 0.0); forward.n];
                for ((b, &x), &w) in buf.iter_mut().zip(input).zip(chirp) {
                    *b = x * w;
                }
                forward.process(&mut buf);
                for (b, &k) in buf.iter_mut().zip(kernel_spectrum) {
                    *b *= k;
                }
                backward.process(&mut buf);
                buf.truncate(self.len);
                for (b, &w) in buf.iter_mut().zip(chirp) {
                    *b *= w;
                }
                buf
            }
        }
    }
}
