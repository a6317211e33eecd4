//! Independent reference computations and random inputs shared by the
//! integration tests. Nothing here calls into the library's own formulas.
#![allow(dead_code)]

use k0pn::exceptional::{Direction, Mutation, MutationWord};
use k0pn::isometry::IsometryDescriptor;
use k0pn::{Basis, K0Class, OperatorSeries, Rational, Sign};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `binom(a, b)` for any integer `a`, by the falling factorial.
pub fn binom(a: i64, b: u32) -> i128 {
    let mut num: i128 = 1;
    let mut den: i128 = 1;
    for i in 0..b as i128 {
        num *= a as i128 - i;
        den *= i + 1;
    }
    assert_eq!(num % den, 0);
    num / den
}

/// `chi(O(i), O(j)) = binom(n + j - i, n)`.
pub fn gram_oracle(n: usize) -> Vec<Vec<i128>> {
    (0..=n)
        .map(|i| {
            (0..=n)
                .map(|j| binom(n as i64 + j as i64 - i as i64, n as u32))
                .collect()
        })
        .collect()
}

pub fn r(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn ri(p: i128) -> Rational {
    Rational::from_integer(BigInt::from(p))
}

/// Monomial coefficients of `prod_{i=1..n} (t + k + i) / n!`, the Hilbert
/// polynomial of `O(k)`.
pub fn hilbert_line_bundle(n: usize, k: i64) -> Vec<Rational> {
    let mut p = vec![Rational::one()];
    let mut fact = Rational::one();
    for i in 1..=n as i64 {
        let mut next = vec![Rational::zero(); p.len() + 1];
        for (d, c) in p.iter().enumerate() {
            next[d + 1] += c;
            next[d] += c * ri((k + i) as i128);
        }
        p = next;
        fact *= ri(i as i128);
    }
    p.into_iter().map(|c| c / &fact).collect()
}

pub fn derivative(p: &[Rational]) -> Vec<Rational> {
    let mut out: Vec<Rational> = p
        .iter()
        .enumerate()
        .skip(1)
        .map(|(d, c)| c * ri(d as i128))
        .collect();
    out.push(Rational::zero());
    out
}

pub fn eval(p: &[Rational], t: i64) -> Rational {
    p.iter()
        .rev()
        .fold(Rational::zero(), |acc, c| acc * ri(t as i128) + c)
}

/// `exp(a D^k) p` on a polynomial in monomial coefficients.
pub fn exp_monomial_d(p: &[Rational], a: &Rational, k: usize) -> Vec<Rational> {
    let mut out = p.to_vec();
    let mut term = p.to_vec();
    let mut j = 1;
    loop {
        for _ in 0..k {
            term = derivative(&term);
        }
        if term.iter().all(Zero::is_zero) {
            return out;
        }
        term = term.into_iter().map(|c| c * a / ri(j)).collect();
        for (o, t) in out.iter_mut().zip(&term) {
            *o += t;
        }
        j += 1;
    }
}

/// Lattice test for `exp(sum a_i D^{2i+1})` by evaluating the image of the
/// Hilbert polynomial of `O` at `t = 0..n`.
pub fn is_lattice_isometry_oracle(n: usize, odd: &[Rational]) -> bool {
    let mut p = hilbert_line_bundle(n, 0);
    for (i, a) in odd.iter().enumerate() {
        p = exp_monomial_d(&p, a, 2 * i + 1);
    }
    (0..=n as i64).all(|t| eval(&p, t).is_integer())
}

pub fn random_rational(rng: &mut impl Rng, max_num: i64, max_den: i64) -> Rational {
    r(
        rng.gen_range(-max_num..=max_num),
        rng.gen_range(1..=max_den),
    )
}

pub fn random_basis(rng: &mut impl Rng) -> Basis {
    Basis::ALL[rng.gen_range(0..Basis::ALL.len())]
}

pub fn random_class(rng: &mut impl Rng, n: usize, basis: Basis) -> K0Class {
    let coeffs = (0..=n).map(|_| random_rational(rng, 9, 6)).collect();
    K0Class::new(n, basis, coeffs).unwrap()
}

pub fn random_integer_class(rng: &mut impl Rng, n: usize) -> K0Class {
    let coeffs: Vec<i64> = (0..=n).map(|_| rng.gen_range(-9..=9)).collect();
    K0Class::from_i64(n, Basis::LineBundle, &coeffs).unwrap()
}

pub fn random_series(rng: &mut impl Rng, n: usize) -> OperatorSeries {
    OperatorSeries::new(n, (0..=n).map(|_| random_rational(rng, 6, 4)).collect()).unwrap()
}

pub fn random_nilpotent(rng: &mut impl Rng, n: usize) -> OperatorSeries {
    let mut c: Vec<Rational> = (0..=n).map(|_| random_rational(rng, 6, 4)).collect();
    c[0] = Rational::zero();
    OperatorSeries::new(n, c).unwrap()
}

pub fn random_descriptor(rng: &mut impl Rng, n: usize) -> IsometryDescriptor {
    let sign = if rng.gen_bool(0.5) {
        Sign::Plus
    } else {
        Sign::Minus
    };
    let odd = (0..(n + 1) / 2)
        .map(|_| random_rational(rng, 5, 6))
        .collect();
    IsometryDescriptor::new(n, sign, odd).unwrap()
}

pub fn random_word(rng: &mut impl Rng, n: usize, max_len: usize) -> MutationWord {
    let len = rng.gen_range(0..=max_len);
    MutationWord(
        (0..len)
            .map(|_| Mutation {
                index: rng.gen_range(0..n),
                direction: if rng.gen_bool(0.5) {
                    Direction::Forward
                } else {
                    Direction::Inverse
                },
            })
            .collect(),
    )
}
