//! Univariate rational polynomials in `t` and polynomial binomial coefficients.
//!
//! Polynomials are stored as ascending monomial coefficient vectors
//! (`coeffs[j]` multiplies `t^j`).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::linalg::Rational;

/// `binom(a, b) = a (a-1) ... (a-b+1) / b!`, valid for every integer `a`.
pub fn binomial(a: &BigInt, b: usize) -> BigInt {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..b {
        num *= a - BigInt::from(i);
        den *= BigInt::from(i + 1);
    }
    num / den
}

pub fn binomial_i64(a: i64, b: usize) -> BigInt {
    binomial(&BigInt::from(a), b)
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

pub fn mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

pub fn eval(p: &[Rational], t: &Rational) -> Rational {
    p.iter().rev().fold(Rational::zero(), |acc, c| acc * t + c)
}

pub fn derivative(p: &[Rational]) -> Vec<Rational> {
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(j, c)| c * BigRational::from_integer(BigInt::from(j)))
        .collect()
}

/// `gamma_k(t + shift) = binom(t + shift + k, k)` as monomial coefficients,
/// padded to `len` entries.
pub fn shifted_gamma(k: usize, shift: i64, len: usize) -> Vec<Rational> {
    let mut p = vec![Rational::one()];
    for i in 1..=k {
        let root = BigRational::from_integer(BigInt::from(shift + i as i64));
        p = mul(&p, &[root, Rational::one()]);
    }
    let kf = BigRational::from_integer(factorial(k));
    let mut p: Vec<Rational> = p.into_iter().map(|c| c / &kf).collect();
    p.resize(len.max(k + 1), Rational::zero());
    p
}
