//! Exceptional bases of K0(P^n) and the braid group action on them.
//!
//! Convention for the generator `g_i` acting on `(E_0, ..., E_n)`:
//!
//! ```text
//! g_i      : (E_i, E_{i+1}) -> (E_{i+1} - chi(E_i, E_{i+1}) E_i, E_i)
//! g_i^{-1} : (E_i, E_{i+1}) -> (E_{i+1}, E_i - chi(E_i, E_{i+1}) E_{i+1})
//! ```
//!
//! Other conventions in the literature swap the roles of `g_i` and
//! `g_i^{-1}`. The formulas make sense on any tuple, but `g_i^{-1}` only
//! undoes `g_i` on tuples where `chi(E_{i+1}, E_i) = 0`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::isometry::{self, IsometryDescriptor};
use crate::lattice::{Basis, K0Class, ProjectiveContext};
use crate::linalg::{self, Matrix, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Forward,
    Inverse,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Mutation {
    pub index: usize,
    pub direction: Direction,
}

impl fmt::Display for Mutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "g{}", self.index)?;
        if self.direction == Direction::Inverse {
            write!(f, "'")?;
        }
        Ok(())
    }
}

impl FromStr for Mutation {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("malformed mutation {s:?}, expected g<i> or g<i>'"));
        let rest = s.strip_prefix('g').ok_or_else(bad)?;
        let (digits, direction) = match rest.strip_suffix('\'') {
            Some(d) => (d, Direction::Inverse),
            None => (rest, Direction::Forward),
        };
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let index = digits.parse().map_err(|_| bad())?;
        Ok(Mutation { index, direction })
    }
}

/// A braid word, applied left to right.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct MutationWord(pub Vec<Mutation>);

impl FromStr for MutationWord {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        s.split_whitespace()
            .map(str::parse)
            .collect::<Result<Vec<_>>>()
            .map(MutationWord)
    }
}

impl fmt::Display for MutationWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, m) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

/// An ordered `(n+1)`-tuple of lattice classes, stored in line-bundle coordinates.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExceptionalTuple {
    n: usize,
    classes: Vec<K0Class>,
}

impl ExceptionalTuple {
    pub fn new(ctx: &ProjectiveContext, classes: &[K0Class]) -> Result<Self> {
        if classes.len() != ctx.size() {
            return Err(Error::LengthMismatch {
                expected: ctx.size(),
                got: classes.len(),
            });
        }
        let classes = classes
            .iter()
            .map(|e| {
                let c = ctx.convert(e, Basis::LineBundle)?;
                if linalg::is_integral_vec(c.coeffs()) {
                    Ok(c)
                } else {
                    Err(Error::NotLattice)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ExceptionalTuple {
            n: ctx.n(),
            classes,
        })
    }

    /// `(O(m), O(m+1), ..., O(m+n))`.
    pub fn standard(ctx: &ProjectiveContext, m: i64) -> Self {
        let classes: Vec<K0Class> = (0..=ctx.n() as i64)
            .map(|i| K0Class::line_bundle(ctx.n(), m + i))
            .collect();
        ExceptionalTuple::new(ctx, &classes).expect("line bundles are lattice classes")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn classes(&self) -> &[K0Class] {
        &self.classes
    }

    pub fn gram(&self, ctx: &ProjectiveContext) -> Result<Matrix> {
        let size = self.classes.len();
        let mut g = Matrix::zeros(size, size);
        for i in 0..size {
            for j in 0..size {
                g[(i, j)] = ctx.chi(&self.classes[i], &self.classes[j])?;
            }
        }
        Ok(g)
    }

    /// Determinant of the line-bundle coordinate matrix.
    pub fn determinant(&self) -> Rational {
        let cols: Vec<Vec<Rational>> = self.classes.iter().map(|c| c.coeffs().to_vec()).collect();
        Matrix::from_columns(&cols).determinant()
    }

    pub fn is_lattice_basis(&self) -> bool {
        linalg::abs_is_one(&self.determinant())
    }

    /// Lattice basis with upper unitriangular Gram matrix.
    pub fn is_exceptional(&self, ctx: &ProjectiveContext) -> bool {
        self.is_lattice_basis() && self.gram(ctx).is_ok_and(|g| g.is_upper_unitriangular())
    }

    pub fn mutate(
        &self,
        ctx: &ProjectiveContext,
        index: usize,
        direction: Direction,
    ) -> Result<Self> {
        if index + 1 >= self.classes.len() {
            return Err(Error::IndexOutOfRange {
                index,
                max: self.classes.len().saturating_sub(2),
            });
        }
        let a = &self.classes[index];
        let b = &self.classes[index + 1];
        let c = ctx.chi(a, b)?;
        let (first, second) = match direction {
            Direction::Forward => (b - &a.scale(&c), a.clone()),
            Direction::Inverse => (b.clone(), a - &b.scale(&c)),
        };
        let mut classes = self.classes.clone();
        classes[index] = first;
        classes[index + 1] = second;
        Ok(ExceptionalTuple { n: self.n, classes })
    }

    pub fn apply_word(&self, ctx: &ProjectiveContext, word: &MutationWord) -> Result<Self> {
        word.0
            .iter()
            .try_fold(self.clone(), |t, m| t.mutate(ctx, m.index, m.direction))
    }

    /// Applies a lattice isometry to every entry.
    pub fn apply_isometry(&self, ctx: &ProjectiveContext, d: &IsometryDescriptor) -> Result<Self> {
        if let Some(reason) = isometry::lattice_obstruction(ctx, d) {
            return Err(Error::NotLatticeIsometry(reason));
        }
        let m = isometry::descriptor_matrix(ctx, d, Basis::LineBundle);
        let classes = self
            .classes
            .iter()
            .map(|e| m.apply(ctx, e))
            .collect::<Result<Vec<_>>>()?;
        Ok(ExceptionalTuple { n: self.n, classes })
    }
}

impl fmt::Debug for ExceptionalTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.classes).finish()
    }
}

impl fmt::Display for ExceptionalTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.classes.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}
