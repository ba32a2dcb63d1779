//! Truncated power series in one variable with rational coefficients.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use once_cell::sync::Lazy;

/// A power series Σ a_k t^k truncated after degree `prec`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TSeries {
    coeffs: Vec<BigRational>,
}

static FACTORIAL_INV: Lazy<Vec<BigRational>> = Lazy::new(|| {
    let mut out = Vec::with_capacity(72);
    let mut f = BigInt::one();
    for k in 0..72u32 {
        if k > 0 {
            f *= k;
        }
        out.push(BigRational::new(BigInt::one(), f.clone()));
    }
    out
});

/// Coefficients of x/(1 − e^{−x}) = Σ b_k x^k.
static TODD_COEFFS: Lazy<Vec<BigRational>> = Lazy::new(|| {
    // (1 − e^{−x})/x = Σ (−1)^k x^k/(k+1)!; invert the series.
    let n = 64;
    let g: Vec<BigRational> = (0..n)
        .map(|k| {
            let s = if k % 2 == 0 { BigRational::one() } else { -BigRational::one() };
            s * FACTORIAL_INV[k + 1].clone()
        })
        .collect();
    invert(&g, n)
});

fn invert(g: &[BigRational], n: usize) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); n];
    let g0inv = BigRational::one() / g[0].clone();
    out[0] = g0inv.clone();
    for k in 1..n {
        let mut acc = BigRational::zero();
        for i in 1..=k.min(g.len() - 1) {
            acc += &g[i] * &out[k - i];
        }
        out[k] = -acc * &g0inv;
    }
    out
}

pub fn factorial_inv(k: usize) -> BigRational {
    FACTORIAL_INV[k].clone()
}

impl TSeries {
    pub fn zero(prec: usize) -> Self {
        TSeries { coeffs: vec![BigRational::zero(); prec + 1] }
    }

    pub fn one(prec: usize) -> Self {
        let mut s = Self::zero(prec);
        s.coeffs[0] = BigRational::one();
        s
    }

    pub fn constant(prec: usize, c: BigRational) -> Self {
        let mut s = Self::zero(prec);
        s.coeffs[0] = c;
        s
    }

    pub fn from_coeffs(prec: usize, mut coeffs: Vec<BigRational>) -> Self {
        coeffs.resize(prec + 1, BigRational::zero());
        TSeries { coeffs }
    }

    pub fn prec(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> &BigRational {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// e^{m t}.
    pub fn exp(prec: usize, m: i64) -> Self {
        let m = BigInt::from(m);
        let mut pow = BigInt::one();
        let mut coeffs = Vec::with_capacity(prec + 1);
        for k in 0..=prec {
            coeffs.push(BigRational::from_integer(pow.clone()) * &FACTORIAL_INV[k]);
            pow *= &m;
        }
        TSeries { coeffs }
    }

    /// td of a line with root m t: m t/(1 − e^{−m t}).
    pub fn todd(prec: usize, m: i64) -> Self {
        let m = BigInt::from(m);
        let mut pow = BigInt::one();
        let mut coeffs = Vec::with_capacity(prec + 1);
        for k in 0..=prec {
            coeffs.push(BigRational::from_integer(pow.clone()) * &TODD_COEFFS[k]);
            pow *= &m;
        }
        TSeries { coeffs }
    }

    /// 1 − e^{−m t}, the top Chern class divided by the Todd class of a line.
    pub fn koszul(prec: usize, m: i64) -> Self {
        let mut s = Self::exp(prec, -m);
        for c in s.coeffs.iter_mut() {
            *c = -c.clone();
        }
        s.coeffs[0] += BigRational::one();
        s
    }

    /// 1 + m t.
    pub fn linear(prec: usize, m: i64) -> Self {
        let mut s = Self::one(prec);
        if prec >= 1 {
            s.coeffs[1] = BigRational::from_integer(BigInt::from(m));
        }
        s
    }

    pub fn mul(&self, other: &TSeries) -> TSeries {
        let prec = self.prec().min(other.prec());
        let mut out = vec![BigRational::zero(); prec + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(prec + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(prec + 1 - i) {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        TSeries { coeffs: out }
    }

    pub fn add_assign(&mut self, other: &TSeries) {
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b;
        }
    }

    pub fn add_scaled(&mut self, other: &TSeries, c: &BigRational) {
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b * c;
        }
    }

    pub fn scale(&self, c: &BigRational) -> TSeries {
        TSeries { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    /// Multiplicative inverse; the constant term must be nonzero.
    pub fn inverse(&self) -> TSeries {
        TSeries { coeffs: invert(&self.coeffs, self.coeffs.len()) }
    }

    pub fn pow(&self, e: i64) -> TSeries {
        if e < 0 {
            return self.inverse().pow(-e);
        }
        let mut out = TSeries::one(self.prec());
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }
}
