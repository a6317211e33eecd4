//! Operators on K0(P^n) (x) Q.
//!
//! The differentiation operator `D = d/dt` on Hilbert polynomials is
//! nilpotent with `D^{n+1} = 0`, so polynomials in `D` form the truncated
//! algebra `Q[D]/D^{n+1}` ([`OperatorSeries`]). Everything commuting with
//! the canonical operator lives there; general operators (needed to state
//! adjointness conditions) are kept as matrices ([`OperatorMatrix`]).
//!
//! Adjoints with respect to the Euler form `chi(u, v) = u^T G v`:
//!
//! * right adjoint `M^v` with `chi(u, M^v v) = chi(M u, v)`: `G^-1 M^T G`
//! * left adjoint `^vM` with `chi(^vM u, v) = chi(u, M v)`: `(G M G^-1)^T`

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::lattice::{Basis, K0Class, ProjectiveContext};
use crate::linalg::{self, Matrix, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn from_i64(s: i64) -> Option<Sign> {
        match s {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }

    pub fn to_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn rational(self) -> Rational {
        linalg::int(self.to_i64())
    }

    /// `(-1)^n`.
    pub fn parity(n: usize) -> Sign {
        if n % 2 == 0 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

/// `sum_m coeffs[m] D^m` in `Q[D]/D^{n+1}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct OperatorSeries {
    n: usize,
    coeffs: Vec<Rational>,
}

impl OperatorSeries {
    pub fn new(n: usize, coeffs: Vec<Rational>) -> Result<Self> {
        if coeffs.len() != n + 1 {
            return Err(Error::LengthMismatch {
                expected: n + 1,
                got: coeffs.len(),
            });
        }
        Ok(OperatorSeries { n, coeffs })
    }

    pub fn zero(n: usize) -> Self {
        OperatorSeries {
            n,
            coeffs: vec![Rational::zero(); n + 1],
        }
    }

    pub fn identity(n: usize) -> Self {
        OperatorSeries::constant(n, Rational::one())
    }

    pub fn constant(n: usize, c: Rational) -> Self {
        let mut s = OperatorSeries::zero(n);
        s.coeffs[0] = c;
        s
    }

    /// `c D^power`; vanishes when `power > n`.
    pub fn monomial(n: usize, power: usize, c: Rational) -> Self {
        let mut s = OperatorSeries::zero(n);
        if power <= n {
            s.coeffs[power] = c;
        }
        s
    }

    pub fn d(n: usize) -> Self {
        OperatorSeries::monomial(n, 1, Rational::one())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, power: usize) -> &Rational {
        &self.coeffs[power]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_nilpotent(&self) -> bool {
        self.coeffs[0].is_zero()
    }

    pub fn is_unipotent(&self) -> bool {
        self.coeffs[0].is_one()
    }

    /// True if only odd powers of `D` occur.
    pub fn is_odd(&self) -> bool {
        self.coeffs.iter().step_by(2).all(Zero::is_zero)
    }

    pub fn scale(&self, c: &Rational) -> OperatorSeries {
        OperatorSeries {
            n: self.n,
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> OperatorSeries {
        (0..e).fold(OperatorSeries::identity(self.n), |acc, _| &acc * self)
    }

    /// Truncated exponential of a nilpotent series.
    pub fn exp(&self) -> Result<OperatorSeries> {
        if !self.is_nilpotent() {
            return Err(Error::NotNilpotent(self.coeffs[0].clone()));
        }
        let mut acc = OperatorSeries::identity(self.n);
        let mut term = OperatorSeries::identity(self.n);
        for j in 1..=self.n {
            term = (&term * self).scale(&linalg::rat(1, j as i64));
            if term.is_zero() {
                break;
            }
            acc = &acc + &term;
        }
        Ok(acc)
    }

    /// `ln(1 + N) = sum_{m=1..n} (-1)^{m+1} N^m / m` for a unipotent series `1 + N`.
    pub fn log(&self) -> Result<OperatorSeries> {
        if !self.is_unipotent() {
            return Err(Error::NotUnipotent(self.coeffs[0].clone()));
        }
        let nil = self - &OperatorSeries::identity(self.n);
        let mut acc = OperatorSeries::zero(self.n);
        let mut power = OperatorSeries::identity(self.n);
        for m in 1..=self.n {
            power = &power * &nil;
            if power.is_zero() {
                break;
            }
            let sign = if m % 2 == 1 { 1 } else { -1 };
            acc = &acc + &power.scale(&linalg::rat(sign, m as i64));
        }
        Ok(acc)
    }

    /// `f(-D)` for `f(D) = self`.
    pub fn reflect(&self) -> OperatorSeries {
        OperatorSeries {
            n: self.n,
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(m, c)| if m % 2 == 1 { -c } else { c.clone() })
                .collect(),
        }
    }

    pub fn matrix(&self, ctx: &ProjectiveContext, basis: Basis) -> OperatorMatrix {
        assert_eq!(self.n, ctx.n(), "series and context dimensions differ");
        let d = ctx.d_matrix();
        let size = ctx.size();
        // Horner in D.
        let mut m = Matrix::zeros(size, size);
        for c in self.coeffs.iter().rev() {
            m = &m * d;
            for i in 0..size {
                m[(i, i)] += c;
            }
        }
        OperatorMatrix {
            n: self.n,
            basis: Basis::StructureSheaf,
            entries: m,
        }
        .in_basis(ctx, basis)
    }

    /// Image of `e`, expressed in the same basis as `e`.
    pub fn apply(&self, ctx: &ProjectiveContext, e: &K0Class) -> Result<K0Class> {
        if self.n != e.n() {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: e.n(),
            });
        }
        ctx.check(e)?;
        self.matrix(ctx, e.basis()).apply(ctx, e)
    }
}

fn assert_same_n(a: &OperatorSeries, b: &OperatorSeries) {
    assert_eq!(a.n, b.n, "series over different n");
}

impl Add for &OperatorSeries {
    type Output = OperatorSeries;
    fn add(self, rhs: &OperatorSeries) -> OperatorSeries {
        assert_same_n(self, rhs);
        OperatorSeries {
            n: self.n,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &OperatorSeries {
    type Output = OperatorSeries;
    fn sub(self, rhs: &OperatorSeries) -> OperatorSeries {
        assert_same_n(self, rhs);
        OperatorSeries {
            n: self.n,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Neg for &OperatorSeries {
    type Output = OperatorSeries;
    fn neg(self) -> OperatorSeries {
        self.scale(&-Rational::one())
    }
}

/// Product truncated at `D^{n+1}`.
impl Mul for &OperatorSeries {
    type Output = OperatorSeries;
    fn mul(self, rhs: &OperatorSeries) -> OperatorSeries {
        assert_same_n(self, rhs);
        let mut out = OperatorSeries::zero(self.n);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(self.n + 1 - i) {
                out.coeffs[i + j] += a * b;
            }
        }
        out
    }
}

impl fmt::Debug for OperatorSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "OperatorSeries(n={}, {self})", self.n)
    }
}

impl fmt::Display for OperatorSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (m, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match m {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*D")?,
                _ => write!(f, "{c}*D^{m}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// `nabla = 1 - exp(-D)`, the restriction-to-a-hyperplane operator.
pub fn nabla(n: usize) -> OperatorSeries {
    let e = OperatorSeries::d(n)
        .scale(&-Rational::one())
        .exp()
        .expect("D is nilpotent");
    &OperatorSeries::identity(n) - &e
}

/// The canonical operator `(-1)^n exp(-(n+1) D)`.
pub fn kappa(n: usize) -> OperatorSeries {
    OperatorSeries::d(n)
        .scale(&linalg::int(-(n as i64) - 1))
        .exp()
        .expect("D is nilpotent")
        .scale(&Sign::parity(n).rational())
}

/// `G^-1 G^T`, the canonical operator computed straight from a Gram matrix.
pub fn canonical_from_gram(ctx: &ProjectiveContext, basis: Basis) -> OperatorMatrix {
    let g = ctx.gram_ref(basis);
    let gi = g.inverse().expect("Gram matrix is invertible");
    OperatorMatrix {
        n: ctx.n(),
        basis,
        entries: &gi * &g.transpose(),
    }
}

/// An operator as a matrix acting on coordinate columns in `basis`.
#[derive(Clone, PartialEq, Eq)]
pub struct OperatorMatrix {
    n: usize,
    basis: Basis,
    entries: Matrix,
}

impl OperatorMatrix {
    pub fn new(n: usize, basis: Basis, entries: Matrix) -> Result<Self> {
        if entries.rows() != n + 1 || entries.cols() != n + 1 {
            return Err(Error::LengthMismatch {
                expected: n + 1,
                got: if entries.rows() != n + 1 {
                    entries.rows()
                } else {
                    entries.cols()
                },
            });
        }
        Ok(OperatorMatrix { n, basis, entries })
    }

    pub fn identity(n: usize, basis: Basis) -> Self {
        OperatorMatrix {
            n,
            basis,
            entries: Matrix::identity(n + 1),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn entries(&self) -> &Matrix {
        &self.entries
    }

    pub fn into_entries(self) -> Matrix {
        self.entries
    }

    /// The same operator in another coordinate system: `C M C^-1`.
    pub fn in_basis(&self, ctx: &ProjectiveContext, basis: Basis) -> OperatorMatrix {
        if basis == self.basis {
            return self.clone();
        }
        let c = ctx.conversion(self.basis, basis);
        let ci = ctx.conversion(basis, self.basis);
        OperatorMatrix {
            n: self.n,
            basis,
            entries: &(&c * &self.entries) * &ci,
        }
    }

    pub fn compose(&self, ctx: &ProjectiveContext, other: &OperatorMatrix) -> OperatorMatrix {
        let o = other.in_basis(ctx, self.basis);
        OperatorMatrix {
            n: self.n,
            basis: self.basis,
            entries: &self.entries * &o.entries,
        }
    }

    pub fn scale(&self, c: &Rational) -> OperatorMatrix {
        OperatorMatrix {
            n: self.n,
            basis: self.basis,
            entries: self.entries.scale(c),
        }
    }

    pub fn apply(&self, ctx: &ProjectiveContext, e: &K0Class) -> Result<K0Class> {
        if self.n != e.n() {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: e.n(),
            });
        }
        let x = ctx.convert(e, self.basis)?;
        let y = K0Class::new(self.n, self.basis, self.entries.mul_vec(x.coeffs()))?;
        ctx.convert(&y, e.basis())
    }

    /// Integral in a lattice basis, i.e. maps K0 into itself.
    pub fn preserves_lattice(&self, ctx: &ProjectiveContext) -> bool {
        self.in_basis(ctx, Basis::StructureSheaf)
            .entries
            .is_integral()
    }

    /// `M^T G M = G`.
    pub fn is_real_isometry(&self, ctx: &ProjectiveContext) -> bool {
        let g = ctx.gram_ref(self.basis);
        &(&self.entries.transpose() * g) * &self.entries == *g
    }

    /// Recovers `f` with `M = f(D)`; fails unless `M` is a polynomial in `D`.
    ///
    /// `O = O_{P_n}` is a cyclic vector for `D`, so `f` is pinned down by the
    /// image of `O`; the full matrix is compared afterwards.
    pub fn to_series(&self, ctx: &ProjectiveContext) -> Result<OperatorSeries> {
        if self.n != ctx.n() {
            return Err(Error::DimensionMismatch {
                left: ctx.n(),
                right: self.n,
            });
        }
        let m = self.in_basis(ctx, Basis::StructureSheaf);
        let size = ctx.size();
        let d = ctx.d_matrix();
        let mut krylov = Vec::with_capacity(size);
        let mut v = K0Class::trivial(self.n).into_coeffs();
        for _ in 0..size {
            krylov.push(v.clone());
            v = d.mul_vec(&v);
        }
        let k = Matrix::from_columns(&krylov);
        let target = m.entries.column(self.n);
        let coeffs = k.solve(&target).ok_or(Error::NotInCommutant)?;
        let s = OperatorSeries::new(self.n, coeffs)?;
        if s.matrix(ctx, Basis::StructureSheaf).entries != m.entries {
            return Err(Error::NotInCommutant);
        }
        Ok(s)
    }
}

impl fmt::Debug for OperatorMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "OperatorMatrix(n={}, {}, {})",
            self.n, self.basis, self.entries
        )
    }
}

pub fn right_adjoint(ctx: &ProjectiveContext, m: &OperatorMatrix) -> OperatorMatrix {
    let g = ctx.gram_ref(m.basis);
    let gi = g.inverse().expect("Gram matrix is invertible");
    OperatorMatrix {
        n: m.n,
        basis: m.basis,
        entries: &(&gi * &m.entries.transpose()) * g,
    }
}

pub fn left_adjoint(ctx: &ProjectiveContext, m: &OperatorMatrix) -> OperatorMatrix {
    let g = ctx.gram_ref(m.basis);
    let gi = g.inverse().expect("Gram matrix is invertible");
    OperatorMatrix {
        n: m.n,
        basis: m.basis,
        entries: (&(g * &m.entries) * &gi).transpose(),
    }
}

/// Commutes with the canonical operator.
pub fn is_reflexive(ctx: &ProjectiveContext, m: &OperatorMatrix) -> bool {
    let k = canonical_from_gram(ctx, m.basis).entries;
    &m.entries * &k == &k * &m.entries
}

pub fn is_antiselfadjoint(ctx: &ProjectiveContext, m: &OperatorMatrix) -> bool {
    let neg = m.scale(&-Rational::one());
    left_adjoint(ctx, m) == neg && right_adjoint(ctx, m) == neg
}

/// `(D, D^3, ..., D^{2k-1})` with `k = floor((n+1)/2)`.
pub fn antiselfadjoint_basis(n: usize) -> Vec<OperatorSeries> {
    (0..(n + 1) / 2)
        .map(|i| OperatorSeries::monomial(n, 2 * i + 1, Rational::one()))
        .collect()
}

fn solve_linear_operator_space(
    ctx: &ProjectiveContext,
    constraints: impl Fn(&OperatorMatrix) -> Vec<Matrix>,
) -> Vec<OperatorMatrix> {
    let size = ctx.size();
    let unknowns = size * size;
    let mut columns = Vec::with_capacity(unknowns);
    for a in 0..size {
        for b in 0..size {
            let mut e = Matrix::zeros(size, size);
            e[(a, b)] = Rational::one();
            let unit = OperatorMatrix {
                n: ctx.n(),
                basis: Basis::StructureSheaf,
                entries: e,
            };
            let col: Vec<Rational> = constraints(&unit)
                .into_iter()
                .flat_map(|m| m.entries().cloned().collect::<Vec<_>>())
                .collect();
            columns.push(col);
        }
    }
    let system = Matrix::from_columns(&columns);
    system
        .nullspace()
        .into_iter()
        .map(|v| OperatorMatrix {
            n: ctx.n(),
            basis: Basis::StructureSheaf,
            entries: Matrix::from_fn(size, size, |i, j| v[i * size + j].clone()),
        })
        .collect()
}

/// Basis of `{M : ^vM = M^v = -M}` from the full `(n+1)^2`-unknown linear system.
pub fn antiselfadjoint_space(ctx: &ProjectiveContext) -> Vec<OperatorMatrix> {
    solve_linear_operator_space(ctx, |m| {
        vec![
            &right_adjoint(ctx, m).entries + &m.entries,
            &left_adjoint(ctx, m).entries + &m.entries,
        ]
    })
}

/// Basis of the commutant of the canonical operator.
pub fn commutant_space(ctx: &ProjectiveContext) -> Vec<OperatorMatrix> {
    let k = canonical_from_gram(ctx, Basis::StructureSheaf).entries;
    solve_linear_operator_space(ctx, |m| vec![&(&m.entries * &k) - &(&k * &m.entries)])
}

/// The unique `f` with `f(-D) f(D) = 1`, `f(0) = sign` and the given odd
/// coefficients `odd[i]` at `D^{2i+1}`.
///
/// Even coefficients follow from the vanishing of the `D^{2m}` coefficient
/// of `f(-D) f(D)`: `2 f_0 f_{2m} = -sum_{0<i<2m} (-1)^i f_i f_{2m-i}`.
pub fn complete_even_from_odd(n: usize, sign: Sign, odd: &[Rational]) -> Result<OperatorSeries> {
    let k = (n + 1) / 2;
    if odd.len() != k {
        return Err(Error::LengthMismatch {
            expected: k,
            got: odd.len(),
        });
    }
    let mut f = vec![Rational::zero(); n + 1];
    f[0] = sign.rational();
    for (i, c) in odd.iter().enumerate() {
        f[2 * i + 1] = c.clone();
    }
    let two_f0 = &f[0] * linalg::int(2);
    for m in (2..=n).step_by(2) {
        let mut s = Rational::zero();
        for i in 1..m {
            let term = &f[i] * &f[m - i];
            if i % 2 == 1 {
                s -= term;
            } else {
                s += term;
            }
        }
        f[m] = -s / &two_f0;
    }
    OperatorSeries::new(n, f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{int, rat};

    fn gamma(n: usize, j: usize) -> K0Class {
        K0Class::structure_sheaf(n, j)
    }

    #[test]
    fn d_on_structure_sheaves() {
        let ctx = ProjectiveContext::new(3);
        let d = OperatorSeries::d(3);
        assert_eq!(
            d.apply(&ctx, &gamma(3, 2)).unwrap().coeffs(),
            &[rat(1, 2), int(1), int(0), int(0)]
        );
        assert_eq!(
            d.apply(&ctx, &gamma(3, 3)).unwrap().coeffs(),
            &[rat(1, 3), rat(1, 2), int(1), int(0)]
        );
        let e = K0Class::line_bundle(3, 2);
        assert_eq!(OperatorSeries::identity(3).apply(&ctx, &e).unwrap(), e);
    }

    #[test]
    fn d_matrix_columns_are_harmonic() {
        for n in 0..=8 {
            let ctx = ProjectiveContext::new(n);
            let d = ctx.d_matrix();
            for k in 0..=n {
                for r in 0..=n {
                    let expected = if r < k {
                        rat(1, (k - r) as i64)
                    } else {
                        int(0)
                    };
                    assert_eq!(d[(r, k)], expected, "n={n} k={k} r={r}");
                }
            }
        }
    }

    #[test]
    fn apply_dimension_mismatch() {
        let ctx = ProjectiveContext::new(3);
        let err = OperatorSeries::d(3).apply(&ctx, &gamma(2, 1)).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { .. }));
    }

    #[test]
    fn nabla_examples() {
        assert_eq!(nabla(1), OperatorSeries::d(1));
        for n in 0..=8 {
            let ctx = ProjectiveContext::new(n);
            let nb = nabla(n);
            assert!(nb.apply(&ctx, &gamma(n, 0)).unwrap().is_zero());
            for m in 1..=n {
                assert_eq!(nb.apply(&ctx, &gamma(n, m)).unwrap(), gamma(n, m - 1));
            }
        }
    }

    #[test]
    fn exp_examples() {
        assert_eq!(
            OperatorSeries::zero(4).exp().unwrap(),
            OperatorSeries::identity(4)
        );
        let d3 = OperatorSeries::monomial(3, 3, int(1));
        assert_eq!(d3.exp().unwrap(), &OperatorSeries::identity(3) + &d3);
        let s =
            &OperatorSeries::monomial(6, 3, int(2)) + &OperatorSeries::monomial(6, 5, rat(1, 2));
        let expected = OperatorSeries::new(
            6,
            vec![int(1), int(0), int(0), int(2), int(0), rat(1, 2), int(2)],
        )
        .unwrap();
        assert_eq!(s.exp().unwrap(), expected);
        assert!(matches!(
            OperatorSeries::identity(2).exp(),
            Err(Error::NotNilpotent(_))
        ));
    }

    #[test]
    fn log_examples() {
        assert!(OperatorSeries::identity(5).log().unwrap().is_zero());
        let d3 = OperatorSeries::monomial(3, 3, int(1));
        assert_eq!((&OperatorSeries::identity(3) + &d3).log().unwrap(), d3);
        assert!(matches!(
            OperatorSeries::zero(2).log(),
            Err(Error::NotUnipotent(_))
        ));
        for n in 0..=8 {
            let one_minus_nabla = &OperatorSeries::identity(n) - &nabla(n);
            let d = -&one_minus_nabla.log().unwrap();
            assert_eq!(d, OperatorSeries::d(n));
        }
    }

    #[test]
    fn kappa_on_linear_polynomial() {
        // n = 1: f(t) -> -f(t - 2); t + 1 -> -(t - 1).
        let ctx = ProjectiveContext::new(1);
        let f = K0Class::new(1, Basis::Hilbert, vec![int(1), int(1)]).unwrap();
        let img = kappa(1).apply(&ctx, &f).unwrap();
        assert_eq!(img.coeffs(), &[int(1), int(-1)]);
    }

    #[test]
    fn kappa_matches_gram_and_is_one_jordan_block() {
        for n in 0..=8 {
            let ctx = ProjectiveContext::new(n);
            for basis in Basis::ALL {
                assert_eq!(
                    kappa(n).matrix(&ctx, basis),
                    canonical_from_gram(&ctx, basis)
                );
            }
            let k = canonical_from_gram(&ctx, Basis::StructureSheaf).into_entries();
            let eta = &k - &Matrix::identity(n + 1).scale(&Sign::parity(n).rational());
            assert!(eta.pow(n as u32 + 1).is_zero());
            assert!(!eta.pow(n as u32).is_zero());
        }
    }

    #[test]
    fn adjoint_examples() {
        for n in 0..=8 {
            let ctx = ProjectiveContext::new(n);
            let id = OperatorMatrix::identity(n, Basis::LineBundle);
            assert_eq!(right_adjoint(&ctx, &id), id);
            assert_eq!(left_adjoint(&ctx, &id), id);
            let d = OperatorSeries::d(n).matrix(&ctx, Basis::LineBundle);
            assert_eq!(right_adjoint(&ctx, &d), d.scale(&int(-1)));
            let k = kappa(n).matrix(&ctx, Basis::StructureSheaf);
            let inv = OperatorMatrix::new(n, Basis::StructureSheaf, k.entries().inverse().unwrap())
                .unwrap();
            assert_eq!(left_adjoint(&ctx, &k), inv);
        }
    }

    #[test]
    fn reflexive_examples() {
        for n in 0..=8 {
            let ctx = ProjectiveContext::new(n);
            assert!(is_reflexive(
                &ctx,
                &OperatorSeries::d(n).matrix(&ctx, Basis::LineBundle)
            ));
            assert!(is_reflexive(&ctx, &kappa(n).matrix(&ctx, Basis::Hilbert)));
        }
        for n in 1..=5 {
            let ctx = ProjectiveContext::new(n);
            let mut e = Matrix::zeros(n + 1, n + 1);
            e[(0, 0)] = int(1);
            let p = OperatorMatrix::new(n, Basis::StructureSheaf, e).unwrap();
            assert!(!is_reflexive(&ctx, &p));
        }
    }

    #[test]
    fn antiselfadjoint_examples() {
        for n in 0..=8 {
            let ctx = ProjectiveContext::new(n);
            let d = OperatorSeries::d(n);
            assert!(is_antiselfadjoint(&ctx, &d.matrix(&ctx, Basis::LineBundle)));
            assert!(is_antiselfadjoint(
                &ctx,
                &d.pow(3).matrix(&ctx, Basis::StructureSheaf)
            ));
            assert!(is_antiselfadjoint(
                &ctx,
                &OperatorSeries::zero(n).matrix(&ctx, Basis::Hilbert)
            ));
            if n >= 2 {
                let d2 = d.pow(2).matrix(&ctx, Basis::LineBundle);
                assert_eq!(right_adjoint(&ctx, &d2), d2);
                assert!(!is_antiselfadjoint(&ctx, &d2));
            }
        }
    }

    #[test]
    fn antiselfadjoint_basis_lists_odd_powers() {
        assert_eq!(antiselfadjoint_basis(1), vec![OperatorSeries::d(1)]);
        let b5 = antiselfadjoint_basis(5);
        assert_eq!(b5.len(), 3);
        for (i, s) in b5.iter().enumerate() {
            assert_eq!(*s, OperatorSeries::d(5).pow(2 * i as u32 + 1));
        }
    }

    #[test]
    fn complete_even_examples() {
        assert_eq!(
            complete_even_from_odd(4, Sign::Plus, &[int(0), int(0)]).unwrap(),
            OperatorSeries::identity(4)
        );
        assert_eq!(
            complete_even_from_odd(2, Sign::Minus, &[int(0)]).unwrap(),
            OperatorSeries::constant(2, int(-1))
        );
        for n in 1..=8 {
            let expd = OperatorSeries::d(n).exp().unwrap();
            let odd: Vec<Rational> = (0..(n + 1) / 2)
                .map(|i| expd.coeff(2 * i + 1).clone())
                .collect();
            let f = complete_even_from_odd(n, Sign::Plus, &odd).unwrap();
            assert_eq!(f, expd);
            if n >= 2 {
                assert_eq!(*f.coeff(2), rat(1, 2));
            }
        }
        assert!(matches!(
            complete_even_from_odd(3, Sign::Plus, &[int(1)]),
            Err(Error::LengthMismatch {
                expected: 2,
                got: 1
            })
        ));
    }

    #[test]
    fn to_series_rejects_non_polynomials() {
        let ctx = ProjectiveContext::new(2);
        let mut e = Matrix::zeros(3, 3);
        e[(0, 0)] = int(1);
        let p = OperatorMatrix::new(2, Basis::StructureSheaf, e).unwrap();
        assert_eq!(p.to_series(&ctx), Err(Error::NotInCommutant));
        let s = OperatorSeries::new(2, vec![int(3), rat(1, 2), int(-1)]).unwrap();
        assert_eq!(
            s.matrix(&ctx, Basis::LineBundle).to_series(&ctx).unwrap(),
            s
        );
    }
}
