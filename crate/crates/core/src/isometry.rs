//! Isometries of K0(P^n) preserving the Euler form.
//!
//! Every real isometry is `sign * exp(g(D))` with `g` an odd polynomial,
//! `g = a_1 D + a_3 D^3 + ...` (coefficient `a_{2i-1}` stored at index
//! `i - 1`). The lattice isometries with positive sign form a free abelian
//! group of rank `floor((n+1)/2)`; [`compute_generators`] finds a basis.
//!
//! An operator of the form `sign * exp(g(D))` is a polynomial in `D`, so it
//! acts by tensoring with its image of `O`; it maps the lattice to itself
//! iff that image is a lattice class.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Roots;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::hnf;
use crate::lattice::{Basis, K0Class, ProjectiveContext};
use crate::linalg::{self, Matrix, Rational};
use crate::multipoly::MultiPoly;
use crate::operator::{OperatorMatrix, OperatorSeries, Sign};
use crate::poly;
use crate::tensor;

/// Number of odd powers of `D` below `D^{n+1}`.
pub fn odd_rank(n: usize) -> usize {
    (n + 1) / 2
}

/// `sign * exp(sum_i odd[i] D^{2i+1})`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IsometryDescriptor {
    n: usize,
    sign: Sign,
    odd: Vec<Rational>,
}

impl IsometryDescriptor {
    pub fn new(n: usize, sign: Sign, odd: Vec<Rational>) -> Result<Self> {
        if odd.len() != odd_rank(n) {
            return Err(Error::LengthMismatch {
                expected: odd_rank(n),
                got: odd.len(),
            });
        }
        Ok(IsometryDescriptor { n, sign, odd })
    }

    pub fn from_i64(n: usize, sign: Sign, odd: &[i64]) -> Result<Self> {
        IsometryDescriptor::new(n, sign, odd.iter().map(|&a| linalg::int(a)).collect())
    }

    pub fn identity(n: usize) -> Self {
        IsometryDescriptor {
            n,
            sign: Sign::Plus,
            odd: vec![Rational::zero(); odd_rank(n)],
        }
    }

    /// `E -> -E`.
    pub fn negation(n: usize) -> Self {
        IsometryDescriptor {
            sign: Sign::Minus,
            ..IsometryDescriptor::identity(n)
        }
    }

    /// `exp(D)`, i.e. `E -> E(1)`. Requires `n >= 1`.
    pub fn twist(n: usize) -> Self {
        let mut d = IsometryDescriptor::identity(n);
        d.odd[0] = Rational::one();
        d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn odd_coeffs(&self) -> &[Rational] {
        &self.odd
    }

    /// `sum_i odd[i] D^{2i+1}`.
    pub fn exponent(&self) -> OperatorSeries {
        self.odd
            .iter()
            .enumerate()
            .fold(OperatorSeries::zero(self.n), |acc, (i, a)| {
                &acc + &OperatorSeries::monomial(self.n, 2 * i + 1, a.clone())
            })
    }

    pub fn series(&self) -> OperatorSeries {
        self.exponent()
            .exp()
            .expect("odd polynomials are nilpotent")
            .scale(&self.sign.rational())
    }

    /// Group law: signs multiply, exponents add.
    pub fn compose(&self, other: &IsometryDescriptor) -> Result<IsometryDescriptor> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(IsometryDescriptor {
            n: self.n,
            sign: self.sign * other.sign,
            odd: self
                .odd
                .iter()
                .zip(&other.odd)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    /// `self^k` for any integer `k`.
    pub fn power(&self, k: i64) -> IsometryDescriptor {
        let sign = if k % 2 == 0 { Sign::Plus } else { self.sign };
        let c = linalg::int(k);
        IsometryDescriptor {
            n: self.n,
            sign,
            odd: self.odd.iter().map(|a| a * &c).collect(),
        }
    }

    /// Same exponent divided by `p`; used for primitivity probes.
    pub fn divide(&self, p: i64) -> IsometryDescriptor {
        let c = linalg::rat(1, p);
        IsometryDescriptor {
            n: self.n,
            sign: self.sign,
            odd: self.odd.iter().map(|a| a * &c).collect(),
        }
    }

    pub fn with_a1(&self, a1: Rational) -> IsometryDescriptor {
        let mut d = self.clone();
        d.odd[0] = a1;
        d
    }
}

impl fmt::Debug for IsometryDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IsometryDescriptor(n={}, {self})", self.n)
    }
}

impl fmt::Display for IsometryDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sign == Sign::Minus {
            write!(f, "-")?;
        }
        write!(f, "exp({})", self.exponent())
    }
}

pub fn descriptor_matrix(
    ctx: &ProjectiveContext,
    d: &IsometryDescriptor,
    basis: Basis,
) -> OperatorMatrix {
    d.series().matrix(ctx, basis)
}

/// The class `F` with `d(E) = E (x) F`.
pub fn tensoring_class(ctx: &ProjectiveContext, d: &IsometryDescriptor) -> K0Class {
    tensor::operator_class(ctx, &d.series()).expect("descriptor matches context")
}

/// Lattice test through the image of `O` alone.
pub fn is_lattice_isometry(ctx: &ProjectiveContext, d: &IsometryDescriptor) -> bool {
    d.n == ctx.n() && linalg::is_integral_vec(tensoring_class(ctx, d).coeffs())
}

/// Lattice test through integrality of the full matrix; agrees with
/// [`is_lattice_isometry`].
pub fn matrix_is_integral(ctx: &ProjectiveContext, d: &IsometryDescriptor) -> bool {
    descriptor_matrix(ctx, d, Basis::StructureSheaf)
        .entries()
        .is_integral()
}

/// Why `d` fails to be a lattice isometry, or `None` if it is one.
pub fn lattice_obstruction(ctx: &ProjectiveContext, d: &IsometryDescriptor) -> Option<String> {
    if is_lattice_isometry(ctx, d) {
        return None;
    }
    let n = ctx.n();
    if !d.odd[0].is_integer() {
        return Some("a1 must be an integer".to_string());
    }
    let k = odd_rank(n);
    if n >= 3 && d.odd[1..k - 1].iter().all(Zero::is_zero) {
        let top = &d.odd[k - 1];
        return Some(if n % 2 == 1 || !top.is_integer() {
            "top coefficient must be an integer".to_string()
        } else {
            "top coefficient must be even".to_string()
        });
    }
    let f = tensoring_class(ctx, d);
    let j = f
        .coeffs()
        .iter()
        .position(|c| !c.is_integer())
        .expect("non-lattice class has a fractional coordinate");
    Some(format!(
        "image of O has non-integral coefficient {} at O_P{j}",
        f.coeffs()[j]
    ))
}

/// Splits off the twist: returns `(d0, m)` with `d0.a1 = 0` and `d = d0 o exp(mD)`.
pub fn normalize_a1(d: &IsometryDescriptor) -> Result<(IsometryDescriptor, BigInt)> {
    if d.odd.is_empty() {
        return Ok((d.clone(), BigInt::zero()));
    }
    let a1 = &d.odd[0];
    if !a1.is_integer() {
        return Err(Error::NonIntegralTwist(a1.clone()));
    }
    Ok((d.with_a1(Rational::zero()), a1.to_integer()))
}

/// `exp(c D^{2k-1})` with `k = floor((n+1)/2)`: `c = 1` for odd `n`, `c = 2` for even `n`.
pub fn top_generator(n: usize) -> Result<IsometryDescriptor> {
    if n < 3 {
        return Err(Error::DimensionTooSmall { n, min: 3 });
    }
    let mut d = IsometryDescriptor::identity(n);
    let k = odd_rank(n);
    d.odd[k - 1] = linalg::int(if n % 2 == 1 { 1 } else { 2 });
    Ok(d)
}

/// Classifies a real isometry as `sign * exp(odd polynomial in D)`.
pub fn classify_isometry(
    ctx: &ProjectiveContext,
    m: &OperatorMatrix,
) -> Result<IsometryDescriptor> {
    if m.n() != ctx.n() {
        return Err(Error::DimensionMismatch {
            left: ctx.n(),
            right: m.n(),
        });
    }
    if !m.is_real_isometry(ctx) {
        return Err(Error::NotIsometry);
    }
    let n = ctx.n();
    let size = ctx.size();
    let g = m.in_basis(ctx, Basis::StructureSheaf).into_entries();
    let id = Matrix::identity(size);
    let sign = if (&g - &id).pow(size as u32).is_zero() {
        Sign::Plus
    } else if (&g + &id).pow(size as u32).is_zero() {
        Sign::Minus
    } else {
        return Err(Error::NotUnipotentUpToSign);
    };
    let u = g.scale(&sign.rational());
    let nil = &u - &id;
    let mut log = Matrix::zeros(size, size);
    let mut power = id.clone();
    for j in 1..=n {
        power = &power * &nil;
        let c = linalg::rat(if j % 2 == 1 { 1 } else { -1 }, j as i64);
        log = &log + &power.scale(&c);
    }
    let log = OperatorMatrix::new(n, Basis::StructureSheaf, log)?;
    let series = log
        .to_series(ctx)
        .map_err(|_| Error::LogNotOdd("logarithm is not a polynomial in D".to_string()))?;
    if !series.is_odd() {
        return Err(Error::LogNotOdd(series.to_string()));
    }
    let odd = (0..odd_rank(n))
        .map(|i| series.coeff(2 * i + 1).clone())
        .collect();
    IsometryDescriptor::new(n, sign, odd)
}

/// A basis of the positive-sign lattice isometries, with its HNF certificate.
///
/// `hnf` is the row HNF of the odd-coefficient vectors multiplied by
/// `denominator`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorSet {
    pub n: usize,
    pub generators: Vec<IsometryDescriptor>,
    pub hnf: Vec<Vec<BigInt>>,
    pub denominator: BigInt,
}

impl GeneratorSet {
    /// The lattice spanned by arbitrary positive-sign descriptors.
    pub fn from_descriptors(n: usize, generators: Vec<IsometryDescriptor>) -> Result<Self> {
        for g in &generators {
            if g.n != n {
                return Err(Error::DimensionMismatch {
                    left: n,
                    right: g.n,
                });
            }
            if g.sign != Sign::Plus {
                return Err(Error::VerificationFailed(
                    "lattice generators must have positive sign".to_string(),
                ));
            }
        }
        let denominator = linalg::lcm_of_denominators(generators.iter().flat_map(|g| g.odd.iter()));
        let rows: Vec<Vec<BigInt>> = generators
            .iter()
            .map(|g| scale_to_integers(&g.odd, &denominator))
            .collect();
        let hnf = hnf::hnf(&rows);
        Ok(GeneratorSet {
            n,
            generators,
            hnf,
            denominator,
        })
    }

    pub fn rank(&self) -> usize {
        self.hnf.len()
    }

    /// The HNF rows divided by the denominator; canonical for the lattice.
    pub fn rational_basis(&self) -> Vec<Vec<Rational>> {
        let d = BigRational::from_integer(self.denominator.clone());
        self.hnf
            .iter()
            .map(|row| {
                row.iter()
                    .map(|x| BigRational::from_integer(x.clone()) / &d)
                    .collect()
            })
            .collect()
    }

    pub fn contains(&self, d: &IsometryDescriptor) -> bool {
        if d.n != self.n || d.sign != Sign::Plus {
            return false;
        }
        let den = BigRational::from_integer(self.denominator.clone());
        let scaled: Vec<Rational> = d.odd.iter().map(|a| a * &den).collect();
        if !linalg::is_integral_vec(&scaled) {
            return false;
        }
        let x: Vec<BigInt> = scaled.iter().map(|a| a.to_integer()).collect();
        hnf::contains(&self.hnf, &x)
    }

    /// `sum_i coeffs[i] * generators[i]` in the group.
    pub fn combination(&self, coeffs: &[i64]) -> IsometryDescriptor {
        self.generators
            .iter()
            .zip(coeffs)
            .fold(IsometryDescriptor::identity(self.n), |acc, (g, &c)| {
                acc.compose(&g.power(c)).expect("same n")
            })
    }
}

pub fn lattice_equal(a: &GeneratorSet, b: &GeneratorSet) -> bool {
    a.n == b.n && a.rational_basis() == b.rational_basis()
}

fn scale_to_integers(v: &[Rational], d: &BigInt) -> Vec<BigInt> {
    let d = BigRational::from_integer(d.clone());
    v.iter().map(|a| (a * &d).to_integer()).collect()
}

/// Outcome of the residue search with `a_1 = 0`.
///
/// Variable `v` is the coefficient of `D^{2v+3}`; `residues` holds every
/// lattice point of the box `prod [0, periods[v])`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueTable {
    pub n: usize,
    pub periods: Vec<BigInt>,
    pub residues: Vec<Vec<Rational>>,
    pub visited: u64,
}

/// Default bound on enumerated candidates.
pub const DEFAULT_SEARCH_BUDGET: u64 = 10_000_000;

/// Coordinates of `exp(sum_v x_v D^{2v+3}) O` in the structure-sheaf basis,
/// as polynomials in the `x_v`.
pub fn symbolic_image_of_o(ctx: &ProjectiveContext) -> Vec<MultiPoly> {
    let n = ctx.n();
    let nvars = odd_rank(n).saturating_sub(1);
    let size = n + 1;

    let mut exponent: Vec<MultiPoly> = vec![MultiPoly::zero(nvars); size];
    for v in 0..nvars {
        exponent[2 * v + 3] = MultiPoly::var(nvars, v);
    }
    let series_mul = |a: &[MultiPoly], b: &[MultiPoly]| -> Vec<MultiPoly> {
        let mut out = vec![MultiPoly::zero(nvars); size];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate().take(size - i) {
                if !y.is_zero() {
                    out[i + j] = out[i + j].add(&x.mul(y));
                }
            }
        }
        out
    };
    let mut exp = vec![MultiPoly::zero(nvars); size];
    exp[0] = MultiPoly::constant(nvars, Rational::one());
    let mut term = exp.clone();
    for j in 1..=n {
        term = series_mul(&term, &exponent)
            .into_iter()
            .map(|p| p.scale(&linalg::rat(1, j as i64)))
            .collect();
        if term.iter().all(MultiPoly::is_zero) {
            break;
        }
        for (e, t) in exp.iter_mut().zip(&term) {
            *e = e.add(t);
        }
    }

    // D^m O in structure-sheaf coordinates.
    let d = ctx.d_matrix();
    let mut images = Vec::with_capacity(size);
    let mut v = K0Class::trivial(n).into_coeffs();
    for _ in 0..size {
        images.push(v.clone());
        v = d.mul_vec(&v);
    }
    (0..size)
        .map(|row| {
            exp.iter()
                .zip(&images)
                .fold(MultiPoly::zero(nvars), |acc, (e, img)| {
                    acc.add(&e.scale(&img[row]))
                })
        })
        .collect()
}

struct Stage {
    /// `q` with `P_pin = x_v + q(x_{<v})`.
    offset: MultiPoly,
    /// Other coordinates whose last variable is `x_v`.
    checks: Vec<MultiPoly>,
    period: BigInt,
}

fn plan_stages(ctx: &ProjectiveContext, image: &[MultiPoly]) -> Result<Vec<Stage>> {
    let n = ctx.n();
    let nvars = odd_rank(n).saturating_sub(1);
    for (row, p) in image.iter().enumerate() {
        if p.max_var().is_none() && !p.eval(&[]).is_integer() {
            return Err(Error::VerificationFailed(format!(
                "constant coordinate {row} of the image of O is not integral"
            )));
        }
    }
    let mut stages = Vec::with_capacity(nvars);
    for v in 0..nvars {
        let pin = n - (2 * v + 3);
        let offset = image[pin].sub(&MultiPoly::var(nvars, v));
        if offset.max_var().is_some_and(|m| m >= v) {
            return Err(Error::VerificationFailed(format!(
                "coordinate {pin} is not of the form x_{v} + q(earlier variables)"
            )));
        }
        let checks = image
            .iter()
            .enumerate()
            .filter(|&(row, p)| row != pin && p.max_var() == Some(v))
            .map(|(_, p)| p.clone())
            .collect();
        stages.push(Stage {
            offset,
            checks,
            period: minimal_period(ctx, v)?,
        });
    }
    Ok(stages)
}

/// Smallest divisor `b` of `n!` with `exp(b D^{2v+3})` a lattice isometry.
fn minimal_period(ctx: &ProjectiveContext, v: usize) -> Result<BigInt> {
    let n = ctx.n();
    let nf = poly::factorial(n).to_u64().ok_or_else(|| {
        Error::VerificationFailed(format!("n! does not fit in 64 bits for n = {n}"))
    })?;
    let mut divisors: Vec<u64> = (1..=nf.sqrt())
        .filter(|d| nf % d == 0)
        .flat_map(|d| [d, nf / d])
        .collect();
    divisors.sort_unstable();
    divisors.dedup();
    for b in divisors {
        let mut d = IsometryDescriptor::identity(n);
        d.odd[v + 1] = linalg::int(b as i64);
        if is_lattice_isometry(ctx, &d) {
            return Ok(BigInt::from(b));
        }
    }
    Err(Error::VerificationFailed(format!(
        "exp(n! D^{}) is not a lattice isometry",
        2 * v + 3
    )))
}

struct Search<'a> {
    stages: &'a [Stage],
    budget: u64,
    visited: u64,
    found: Vec<Vec<Rational>>,
}

impl Search<'_> {
    fn run(&mut self, values: &mut Vec<Rational>) -> bool {
        let v = values.len();
        if v == self.stages.len() {
            self.found.push(values.clone());
            return true;
        }
        let stage = &self.stages[v];
        let base = linalg::frac(&-stage.offset.eval(values));
        let mut t = BigInt::zero();
        while t < stage.period {
            self.visited += 1;
            if self.visited > self.budget {
                return false;
            }
            values.push(&base + BigRational::from_integer(t.clone()));
            let ok = stage.checks.iter().all(|p| p.eval(values).is_integer());
            let keep_going = !ok || self.run(values);
            values.pop();
            if !keep_going {
                return false;
            }
            t += 1;
        }
        true
    }
}

/// Enumerates the lattice points with `a_1 = 0` inside the period box.
pub fn search_residues(ctx: &ProjectiveContext, budget: u64) -> Result<ResidueTable> {
    let image = symbolic_image_of_o(ctx);
    let stages = plan_stages(ctx, &image)?;
    let mut search = Search {
        stages: &stages,
        budget,
        visited: 0,
        found: Vec::new(),
    };
    let complete = search.run(&mut Vec::new());
    let visited = search.visited;
    let mut residues = search.found;
    residues.sort();
    if !complete {
        return Err(Error::BudgetExceeded {
            budget,
            visited,
            partial: residues,
        });
    }
    Ok(ResidueTable {
        n: ctx.n(),
        periods: stages.into_iter().map(|s| s.period).collect(),
        residues,
        visited,
    })
}

/// Generators of the positive-sign lattice isometries, twist first, then an
/// HNF basis of the `a_1 = 0` part in echelon order.
pub fn compute_generators(ctx: &ProjectiveContext, budget: u64) -> Result<GeneratorSet> {
    let n = ctx.n();
    if n == 0 {
        return Err(Error::DimensionTooSmall { n, min: 1 });
    }
    let k = odd_rank(n);
    let table = search_residues(ctx, budget)?;
    let nvars = k - 1;

    let mut family: Vec<Vec<Rational>> = table.residues.clone();
    for (v, p) in table.periods.iter().enumerate() {
        let mut e = vec![Rational::zero(); nvars];
        e[v] = BigRational::from_integer(p.clone());
        family.push(e);
    }
    let denominator = linalg::lcm_of_denominators(family.iter().flatten());
    let rows: Vec<Vec<BigInt>> = family
        .iter()
        .map(|r| scale_to_integers(r, &denominator))
        .collect();
    let tail = hnf::hnf(&rows);
    if tail.len() != nvars {
        return Err(Error::VerificationFailed(format!(
            "residue lattice has rank {} instead of {nvars}",
            tail.len()
        )));
    }

    let den_q = BigRational::from_integer(denominator.clone());
    let mut generators = vec![IsometryDescriptor::twist(n)];
    let mut hnf_rows = vec![{
        let mut r = vec![BigInt::zero(); k];
        r[0] = denominator.clone();
        r
    }];
    for row in &tail {
        let mut odd = vec![Rational::zero()];
        odd.extend(
            row.iter()
                .map(|x| BigRational::from_integer(x.clone()) / &den_q),
        );
        generators.push(IsometryDescriptor::new(n, Sign::Plus, odd)?);
        let mut full = vec![BigInt::zero()];
        full.extend(row.iter().cloned());
        hnf_rows.push(full);
    }
    let set = GeneratorSet {
        n,
        generators,
        hnf: hnf_rows,
        denominator,
    };
    verify_generators(ctx, &set)?;
    Ok(set)
}

fn primes_up_to(m: usize) -> Vec<i64> {
    (2..=m as i64)
        .filter(|&p| (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0))
        .collect()
}

fn verify_generators(ctx: &ProjectiveContext, set: &GeneratorSet) -> Result<()> {
    let fail = |msg: String| Err(Error::VerificationFailed(msg));
    if hnf::hnf(&set.hnf) != set.hnf {
        return fail("certificate is not in Hermite normal form".to_string());
    }
    for g in &set.generators {
        if !is_lattice_isometry(ctx, g) {
            return fail(format!("generator {g} is not a lattice isometry"));
        }
        for p in primes_up_to(ctx.n() + 1) {
            if is_lattice_isometry(ctx, &g.divide(p)) {
                return fail(format!("generator {g} is divisible by {p}"));
            }
        }
    }
    for (i, a) in set.generators.iter().enumerate() {
        for b in &set.generators[i + 1..] {
            for c in [a.compose(b)?, a.compose(&b.power(-1))?] {
                if !is_lattice_isometry(ctx, &c) || !set.contains(&c) {
                    return fail(format!("combination {c} leaves the lattice"));
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{int, rat};

    fn desc(n: usize, odd: &[Rational]) -> IsometryDescriptor {
        IsometryDescriptor::new(n, Sign::Plus, odd.to_vec()).unwrap()
    }

    #[test]
    fn descriptor_matrix_examples() {
        let ctx = ProjectiveContext::new(3);
        let m = descriptor_matrix(&ctx, &desc(3, &[int(0), int(1)]), Basis::StructureSheaf);
        let mut expected = Matrix::identity(4);
        expected[(0, 3)] = int(1);
        assert_eq!(m.entries(), &expected);

        let ctx = ProjectiveContext::new(4);
        let d = desc(4, &[int(0), int(2)]);
        for m in -3..=3i64 {
            let o_m = K0Class::line_bundle(4, m);
            let img = d.series().apply(&ctx, &o_m).unwrap();
            let lhs = ctx.convert(&img, Basis::StructureSheaf).unwrap();
            let mut rhs = ctx
                .convert(&o_m, Basis::StructureSheaf)
                .unwrap()
                .into_coeffs();
            rhs[1] += int(2);
            rhs[0] += int(2 * m + 3);
            assert_eq!(lhs.coeffs(), rhs.as_slice());
        }

        let m = descriptor_matrix(&ctx, &IsometryDescriptor::negation(4), Basis::LineBundle);
        assert_eq!(m.entries(), &Matrix::identity(5).scale(&int(-1)));
    }

    #[test]
    fn lattice_isometry_examples() {
        let ctx3 = ProjectiveContext::new(3);
        assert!(is_lattice_isometry(&ctx3, &desc(3, &[int(0), int(1)])));
        let ctx4 = ProjectiveContext::new(4);
        assert!(!is_lattice_isometry(&ctx4, &desc(4, &[int(0), int(1)])));
        assert!(is_lattice_isometry(&ctx4, &desc(4, &[int(0), int(2)])));
        let ctx5 = ProjectiveContext::new(5);
        assert!(is_lattice_isometry(
            &ctx5,
            &desc(5, &[int(0), int(2), rat(1, 2)])
        ));
        for (ctx, d) in [
            (&ctx3, desc(3, &[int(0), int(1)])),
            (&ctx4, desc(4, &[int(0), int(1)])),
            (&ctx5, desc(5, &[int(0), int(2), rat(1, 2)])),
            (&ctx5, desc(5, &[rat(1, 2), int(2), rat(1, 2)])),
        ] {
            assert_eq!(is_lattice_isometry(ctx, &d), matrix_is_integral(ctx, &d));
        }
    }

    #[test]
    fn obstruction_messages() {
        let ctx4 = ProjectiveContext::new(4);
        assert_eq!(
            lattice_obstruction(&ctx4, &desc(4, &[int(0), int(1)])).as_deref(),
            Some("top coefficient must be even")
        );
        assert_eq!(
            lattice_obstruction(&ctx4, &desc(4, &[int(0), int(2)])),
            None
        );
        assert_eq!(
            lattice_obstruction(&ctx4, &desc(4, &[rat(1, 2), int(0)])).as_deref(),
            Some("a1 must be an integer")
        );
    }

    #[test]
    fn normalize_examples() {
        let (d0, m) = normalize_a1(&desc(3, &[int(3), int(0)])).unwrap();
        assert_eq!((d0, m), (desc(3, &[int(0), int(0)]), BigInt::from(3)));
        let d = desc(5, &[int(1), int(2), rat(1, 2)]);
        let (d0, m) = normalize_a1(&d).unwrap();
        assert_eq!(d0, desc(5, &[int(0), int(2), rat(1, 2)]));
        assert_eq!(m, BigInt::one());
        let twist_m = IsometryDescriptor::twist(5).power(1);
        assert_eq!(d0.compose(&twist_m).unwrap(), d);
        assert_eq!(
            normalize_a1(&desc(3, &[rat(1, 2), int(0)])),
            Err(Error::NonIntegralTwist(rat(1, 2)))
        );
    }

    #[test]
    fn top_generator_examples() {
        assert_eq!(
            top_generator(2),
            Err(Error::DimensionTooSmall { n: 2, min: 3 })
        );
        let t3 = top_generator(3).unwrap();
        assert_eq!(t3, desc(3, &[int(0), int(1)]));
        let ctx = ProjectiveContext::new(3);
        assert_eq!(
            tensoring_class(&ctx, &t3).coeffs(),
            &[int(1), int(0), int(0), int(1)]
        );
        let ctx = ProjectiveContext::new(4);
        let t4 = top_generator(4).unwrap();
        assert_eq!(
            tensoring_class(&ctx, &t4).coeffs(),
            &[int(3), int(2), int(0), int(0), int(1)]
        );
        let ctx = ProjectiveContext::new(6);
        let t6 = top_generator(6).unwrap();
        assert_eq!(t6, desc(6, &[int(0), int(0), int(2)]));
        assert_eq!(
            tensoring_class(&ctx, &t6).coeffs(),
            &[int(5), int(2), int(0), int(0), int(0), int(0), int(1)]
        );
        for n in 3..=8 {
            let ctx = ProjectiveContext::new(n);
            let t = top_generator(n).unwrap();
            let mut expected = vec![int(0); n + 1];
            expected[n] = int(1);
            if n % 2 == 1 {
                expected[0] = int(1);
            } else {
                expected[1] = int(2);
                expected[0] = int(n as i64 - 1);
            }
            assert_eq!(
                tensoring_class(&ctx, &t).coeffs(),
                expected.as_slice(),
                "n={n}"
            );
        }
    }

    #[test]
    fn classify_examples() {
        for n in 1..=6 {
            let ctx = ProjectiveContext::new(n);
            let neg = OperatorMatrix::identity(n, Basis::LineBundle).scale(&int(-1));
            assert_eq!(
                classify_isometry(&ctx, &neg).unwrap(),
                IsometryDescriptor::negation(n)
            );
            let tw = OperatorSeries::d(n)
                .exp()
                .unwrap()
                .matrix(&ctx, Basis::LineBundle);
            assert_eq!(
                classify_isometry(&ctx, &tw).unwrap(),
                IsometryDescriptor::twist(n)
            );
            let k = crate::operator::canonical_from_gram(&ctx, Basis::LineBundle);
            let c = classify_isometry(&ctx, &k).unwrap();
            assert_eq!(c.sign(), Sign::parity(n));
            assert_eq!(c.odd_coeffs()[0], int(-(n as i64) - 1));
            assert!(c.odd_coeffs()[1..].iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn classify_rejects_non_isometries() {
        let ctx = ProjectiveContext::new(2);
        let m = OperatorMatrix::identity(2, Basis::LineBundle).scale(&int(2));
        assert_eq!(classify_isometry(&ctx, &m), Err(Error::NotIsometry));
    }

    #[test]
    fn symbolic_image_n5() {
        // gamma_5 -> gamma_5 + b gamma_2 + 3b/2 gamma_1 + (7b/4 + c)
        let ctx = ProjectiveContext::new(5);
        let image = symbolic_image_of_o(&ctx);
        let vals = [int(1), int(0)];
        assert_eq!(image[2].eval(&vals), int(1));
        assert_eq!(image[1].eval(&vals), rat(3, 2));
        assert_eq!(image[0].eval(&vals), rat(7, 4));
        assert_eq!(image[0].eval(&[int(0), int(1)]), int(1));
    }

    #[test]
    fn periods_small_n() {
        let ctx = ProjectiveContext::new(5);
        let t = search_residues(&ctx, DEFAULT_SEARCH_BUDGET).unwrap();
        assert_eq!(t.periods, vec![BigInt::from(4), BigInt::from(1)]);
        let ctx = ProjectiveContext::new(6);
        let t = search_residues(&ctx, DEFAULT_SEARCH_BUDGET).unwrap();
        assert_eq!(t.periods, vec![BigInt::from(8), BigInt::from(2)]);
    }

    #[test]
    fn budget_exhaustion_reports_partial_table() {
        let ctx = ProjectiveContext::new(6);
        match compute_generators(&ctx, 3) {
            Err(Error::BudgetExceeded {
                budget, visited, ..
            }) => {
                assert_eq!(budget, 3);
                assert!(visited > 3);
            }
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn generators_n0_rejected() {
        let ctx = ProjectiveContext::new(0);
        assert_eq!(
            compute_generators(&ctx, 10),
            Err(Error::DimensionTooSmall { n: 0, min: 1 })
        );
    }

    #[test]
    fn lattice_equal_examples() {
        let ctx = ProjectiveContext::new(5);
        let computed = compute_generators(&ctx, DEFAULT_SEARCH_BUDGET).unwrap();
        assert!(lattice_equal(&computed, &computed));
        let fixture = GeneratorSet::from_descriptors(
            5,
            vec![
                desc(5, &[int(1), int(0), int(0)]),
                desc(5, &[int(0), int(2), rat(1, 2)]),
                desc(5, &[int(0), int(0), int(1)]),
            ],
        )
        .unwrap();
        assert!(lattice_equal(&computed, &fixture));
        let other = GeneratorSet::from_descriptors(
            5,
            vec![
                desc(5, &[int(1), int(0), int(0)]),
                desc(5, &[int(0), int(4), int(0)]),
                desc(5, &[int(0), int(0), int(1)]),
            ],
        )
        .unwrap();
        assert!(!lattice_equal(&computed, &other));
    }
}
