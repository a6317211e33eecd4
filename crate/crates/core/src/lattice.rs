//! The lattice K0(P^n), its rationalisation and the Euler form.
//!
//! Three coordinate systems are supported:
//!
//! * [`Basis::LineBundle`]: index `i` multiplies `O(i)`, `0 <= i <= n`.
//! * [`Basis::StructureSheaf`]: index `j` multiplies `O_{P_j}`, whose Hilbert
//!   polynomial is `gamma_j(t) = binom(t + j, j)`.
//! * [`Basis::Hilbert`]: index `j` multiplies `t^j` in the Hilbert polynomial.
//!
//! The structure-sheaf basis is the hub: every conversion goes through it.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix, Rational};
use crate::poly;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Basis {
    LineBundle,
    StructureSheaf,
    Hilbert,
}

impl Basis {
    pub const ALL: [Basis; 3] = [Basis::LineBundle, Basis::StructureSheaf, Basis::Hilbert];

    pub fn name(self) -> &'static str {
        match self {
            Basis::LineBundle => "line_bundle",
            Basis::StructureSheaf => "structure_sheaf",
            Basis::Hilbert => "hilbert",
        }
    }

    /// Lattice bases have integral, unimodular Gram matrices.
    pub fn is_lattice_basis(self) -> bool {
        !matches!(self, Basis::Hilbert)
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Basis {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "line_bundle" => Ok(Basis::LineBundle),
            "structure_sheaf" => Ok(Basis::StructureSheaf),
            "hilbert" => Ok(Basis::Hilbert),
            other => Err(Error::Parse(format!("unknown basis {other:?}"))),
        }
    }
}

/// A class in K0(P^n) (x) Q.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct K0Class {
    n: usize,
    basis: Basis,
    coeffs: Vec<Rational>,
}

impl K0Class {
    pub fn new(n: usize, basis: Basis, coeffs: Vec<Rational>) -> Result<Self> {
        if coeffs.len() != n + 1 {
            return Err(Error::LengthMismatch {
                expected: n + 1,
                got: coeffs.len(),
            });
        }
        Ok(K0Class { n, basis, coeffs })
    }

    pub fn from_i64(n: usize, basis: Basis, coeffs: &[i64]) -> Result<Self> {
        K0Class::new(n, basis, coeffs.iter().map(|&c| linalg::int(c)).collect())
    }

    pub fn zero(n: usize, basis: Basis) -> Self {
        K0Class {
            n,
            basis,
            coeffs: vec![Rational::zero(); n + 1],
        }
    }

    /// The `index`-th vector of `basis`.
    pub fn unit(n: usize, basis: Basis, index: usize) -> Self {
        assert!(index <= n, "basis index {index} out of range for n = {n}");
        let mut c = K0Class::zero(n, basis);
        c.coeffs[index] = Rational::one();
        c
    }

    /// `O_{P_j}`.
    pub fn structure_sheaf(n: usize, j: usize) -> Self {
        K0Class::unit(n, Basis::StructureSheaf, j)
    }

    /// The structure sheaf `O = O_{P_n}`.
    pub fn trivial(n: usize) -> Self {
        K0Class::structure_sheaf(n, n)
    }

    /// `O(k)` for any integer `k`, given by its Hilbert polynomial `gamma_n(t + k)`.
    pub fn line_bundle(n: usize, k: i64) -> Self {
        K0Class {
            n,
            basis: Basis::Hilbert,
            coeffs: poly::shifted_gamma(n, k, n + 1),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Rational> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, c: &Rational) -> K0Class {
        K0Class {
            n: self.n,
            basis: self.basis,
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    pub fn scale_int(&self, c: i64) -> K0Class {
        self.scale(&linalg::int(c))
    }

    fn assert_compatible(&self, other: &K0Class) {
        assert_eq!(
            self.n, other.n,
            "classes live on different projective spaces"
        );
        assert_eq!(
            self.basis, other.basis,
            "classes are in different bases; convert first"
        );
    }
}

impl Add for &K0Class {
    type Output = K0Class;
    fn add(self, rhs: &K0Class) -> K0Class {
        self.assert_compatible(rhs);
        K0Class {
            n: self.n,
            basis: self.basis,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &K0Class {
    type Output = K0Class;
    fn sub(self, rhs: &K0Class) -> K0Class {
        self.assert_compatible(rhs);
        K0Class {
            n: self.n,
            basis: self.basis,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Neg for &K0Class {
    type Output = K0Class;
    fn neg(self) -> K0Class {
        self.scale(&-Rational::one())
    }
}

impl fmt::Debug for K0Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "K0Class(n={}, {}, [", self.n, self.basis)?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "])")
    }
}

/// Human-readable rendering, highest-dimensional term first.
impl fmt::Display for K0Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let label = |i: usize| match self.basis {
            Basis::LineBundle if i == 0 => "O".to_string(),
            Basis::LineBundle => format!("O({i})"),
            Basis::StructureSheaf if i == self.n => "O".to_string(),
            Basis::StructureSheaf => format!("O_P{i}"),
            Basis::Hilbert if i == 0 => "1".to_string(),
            Basis::Hilbert if i == 1 => "t".to_string(),
            Basis::Hilbert => format!("t^{i}"),
        };
        let order: Vec<usize> = match self.basis {
            Basis::LineBundle => (0..=self.n).collect(),
            _ => (0..=self.n).rev().collect(),
        };
        let mut first = true;
        for i in order {
            let c = &self.coeffs[i];
            if c.is_zero() {
                continue;
            }
            let neg = c < &Rational::zero();
            let abs = if neg { -c.clone() } else { c.clone() };
            match (first, neg) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
            }
            first = false;
            if abs.is_one() {
                write!(f, "{}", label(i))?;
            } else if self.basis == Basis::Hilbert && i == 0 {
                write!(f, "{abs}")?;
            } else {
                write!(f, "{abs}*{}", label(i))?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Gram matrix of the Euler form in a given basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GramMatrix {
    pub n: usize,
    pub basis: Basis,
    pub entries: Matrix,
}

/// Precomputed conversion and Gram matrices for a fixed `n`.
///
/// Construction costs O(n^3) rational operations; everything afterwards is
/// matrix-vector work.
#[derive(Debug, Clone)]
pub struct ProjectiveContext {
    n: usize,
    line_to_gamma: Matrix,
    gamma_to_line: Matrix,
    hilbert_to_gamma: Matrix,
    gamma_to_hilbert: Matrix,
    gram_line: Matrix,
    gram_gamma: Matrix,
    gram_hilbert: Matrix,
    d_gamma: Matrix,
}

impl ProjectiveContext {
    pub fn new(n: usize) -> Self {
        let size = n + 1;
        let gamma_to_hilbert = Matrix::from_columns(
            &(0..size)
                .map(|j| poly::shifted_gamma(j, 0, size))
                .collect::<Vec<_>>(),
        );
        let hilbert_to_gamma = gamma_to_hilbert
            .inverse()
            .expect("binomial polynomials form a basis");
        let line_to_gamma = Matrix::from_columns(
            &(0..size)
                .map(|i| hilbert_to_gamma.mul_vec(&poly::shifted_gamma(n, i as i64, size)))
                .collect::<Vec<_>>(),
        );
        let gamma_to_line = line_to_gamma.inverse().expect("line bundles form a basis");
        assert!(
            line_to_gamma.is_integral()
                && gamma_to_line.is_integral()
                && linalg::abs_is_one(&line_to_gamma.determinant()),
            "basis change between line bundles and structure sheaves must be unimodular"
        );

        let gram_line = Matrix::from_fn(size, size, |i, j| {
            BigRational::from_integer(poly::binomial_i64((n + j) as i64 - i as i64, n))
        });
        assert!(gram_line.is_upper_unitriangular());
        let gram_gamma = &(&gamma_to_line.transpose() * &gram_line) * &gamma_to_line;
        let hilbert_to_line = &gamma_to_line * &hilbert_to_gamma;
        let gram_hilbert = &(&hilbert_to_line.transpose() * &gram_line) * &hilbert_to_line;
        assert!(gram_gamma.is_integral() && gram_gamma.determinant().is_one());

        // d/dt on monomials, conjugated into the structure-sheaf basis.
        let d_hilbert = Matrix::from_fn(size, size, |i, j| {
            if j == i + 1 {
                linalg::int(j as i64)
            } else {
                Rational::zero()
            }
        });
        let d_gamma = &(&hilbert_to_gamma * &d_hilbert) * &gamma_to_hilbert;

        ProjectiveContext {
            n,
            line_to_gamma,
            gamma_to_line,
            hilbert_to_gamma,
            gamma_to_hilbert,
            gram_line,
            gram_gamma,
            gram_hilbert,
            d_gamma,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn size(&self) -> usize {
        self.n + 1
    }

    /// Coordinate change from `basis` into structure-sheaf coordinates.
    pub fn to_gamma(&self, basis: Basis) -> Matrix {
        match basis {
            Basis::LineBundle => self.line_to_gamma.clone(),
            Basis::StructureSheaf => Matrix::identity(self.size()),
            Basis::Hilbert => self.hilbert_to_gamma.clone(),
        }
    }

    /// Coordinate change from structure-sheaf coordinates into `basis`.
    pub fn from_gamma(&self, basis: Basis) -> Matrix {
        match basis {
            Basis::LineBundle => self.gamma_to_line.clone(),
            Basis::StructureSheaf => Matrix::identity(self.size()),
            Basis::Hilbert => self.gamma_to_hilbert.clone(),
        }
    }

    /// Coordinate change `from -> to`.
    pub fn conversion(&self, from: Basis, to: Basis) -> Matrix {
        if from == to {
            return Matrix::identity(self.size());
        }
        &self.from_gamma(to) * &self.to_gamma(from)
    }

    pub fn gram(&self, basis: Basis) -> GramMatrix {
        let entries = match basis {
            Basis::LineBundle => self.gram_line.clone(),
            Basis::StructureSheaf => self.gram_gamma.clone(),
            Basis::Hilbert => self.gram_hilbert.clone(),
        };
        GramMatrix {
            n: self.n,
            basis,
            entries,
        }
    }

    pub(crate) fn gram_ref(&self, basis: Basis) -> &Matrix {
        match basis {
            Basis::LineBundle => &self.gram_line,
            Basis::StructureSheaf => &self.gram_gamma,
            Basis::Hilbert => &self.gram_hilbert,
        }
    }

    /// The differentiation operator `d/dt` in structure-sheaf coordinates.
    pub fn d_matrix(&self) -> &Matrix {
        &self.d_gamma
    }

    pub fn check(&self, e: &K0Class) -> Result<()> {
        if e.n != self.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: e.n,
            });
        }
        Ok(())
    }

    pub fn convert(&self, e: &K0Class, target: Basis) -> Result<K0Class> {
        self.check(e)?;
        if e.basis == target {
            return Ok(e.clone());
        }
        let coeffs = self.conversion(e.basis, target).mul_vec(&e.coeffs);
        Ok(K0Class {
            n: self.n,
            basis: target,
            coeffs,
        })
    }

    pub(crate) fn gamma_coords(&self, e: &K0Class) -> Result<Vec<Rational>> {
        Ok(self.convert(e, Basis::StructureSheaf)?.coeffs)
    }

    /// The Euler pairing `chi(E, F) = x^T G y` in line-bundle coordinates.
    pub fn chi(&self, e: &K0Class, f: &K0Class) -> Result<Rational> {
        if e.n != f.n {
            return Err(Error::DimensionMismatch {
                left: e.n,
                right: f.n,
            });
        }
        let x = self.convert(e, Basis::LineBundle)?.coeffs;
        let y = self.convert(f, Basis::LineBundle)?.coeffs;
        Ok(linalg::dot(&x, &self.gram_line.mul_vec(&y)))
    }

    pub fn is_lattice(&self, e: &K0Class) -> bool {
        self.convert(e, Basis::LineBundle)
            .map(|c| linalg::is_integral_vec(&c.coeffs))
            .unwrap_or(false)
    }

    /// Rank and first Chern class, normalised so that `O(m) -> (1, m)`.
    ///
    /// In structure-sheaf coordinates these are the coefficients of
    /// `O_{P_n}` and `O_{P_{n-1}}`; for `n = 0` there is no divisor class.
    pub fn rank_c1(&self, e: &K0Class) -> Result<(BigInt, BigInt)> {
        if !self.is_lattice(e) {
            self.check(e)?;
            return Err(Error::NotLattice);
        }
        let g = self.gamma_coords(e)?;
        let rank = g[self.n].to_integer();
        let c1 = if self.n == 0 {
            BigInt::zero()
        } else {
            g[self.n - 1].to_integer()
        };
        Ok((rank, c1))
    }
}
