//! Ring structure of K0(P^n).
//!
//! A class `E` is written as `psi(nabla) O` with `psi` a polynomial in the
//! restriction operator `nabla = 1 - exp(-D)`; since `nabla^j O = O_{P_{n-j}}`
//! the coefficients of `psi` are the structure-sheaf coordinates read
//! backwards. Tensor product is multiplication of such polynomials modulo
//! `nabla^{n+1}`.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::lattice::{Basis, K0Class, ProjectiveContext};
use crate::linalg::{self, Rational};
use crate::operator::{OperatorMatrix, OperatorSeries};
use crate::poly;

/// Coefficients of `nabla^j`, `j = 0..=n`, in `E = psi(nabla) O`.
pub fn nabla_coords(ctx: &ProjectiveContext, e: &K0Class) -> Result<Vec<Rational>> {
    let mut g = ctx.convert(e, Basis::StructureSheaf)?.into_coeffs();
    g.reverse();
    Ok(g)
}

pub fn from_nabla_coords(n: usize, mut coords: Vec<Rational>) -> Result<K0Class> {
    coords.reverse();
    K0Class::new(n, Basis::StructureSheaf, coords)
}

/// `E (x) F`, returned in the basis of `E`.
pub fn tensor(ctx: &ProjectiveContext, e: &K0Class, f: &K0Class) -> Result<K0Class> {
    if e.n() != f.n() {
        return Err(Error::DimensionMismatch {
            left: e.n(),
            right: f.n(),
        });
    }
    let a = nabla_coords(ctx, e)?;
    let b = nabla_coords(ctx, f)?;
    let mut prod = poly::mul(&a, &b);
    prod.truncate(ctx.size());
    let out = from_nabla_coords(ctx.n(), prod)?;
    ctx.convert(&out, e.basis())
}

/// `E(m)`: the Hilbert polynomial `h(t)` becomes `h(t + m)`.
pub fn twist(ctx: &ProjectiveContext, e: &K0Class, m: i64) -> Result<K0Class> {
    let h = ctx.convert(e, Basis::Hilbert)?.into_coeffs();
    // Horner: h(t + m) = (...(c_n (t+m) + c_{n-1})(t+m) + ...)
    let shift = [linalg::int(m), linalg::int(1)];
    let mut acc: Vec<Rational> = Vec::new();
    for c in h.iter().rev() {
        acc = poly::mul(&acc, &shift);
        if acc.is_empty() {
            acc.push(Rational::zero());
        }
        acc[0] += c;
    }
    acc.resize(ctx.size(), Rational::zero());
    let out = K0Class::new(ctx.n(), Basis::Hilbert, acc)?;
    ctx.convert(&out, e.basis())
}

/// The canonical class `omega = O(-n-1)`.
pub fn canonical_class(n: usize) -> K0Class {
    K0Class::line_bundle(n, -(n as i64) - 1)
}

/// Restriction to a hyperplane, `O_{P_m} -> O_{P_{m-1}}`, `O_{P_0} -> 0`.
pub fn restrict_hyperplane(ctx: &ProjectiveContext, e: &K0Class) -> Result<K0Class> {
    let g = ctx.convert(e, Basis::StructureSheaf)?.into_coeffs();
    let mut shifted: Vec<Rational> = g.into_iter().skip(1).collect();
    shifted.push(Rational::zero());
    let out = K0Class::new(ctx.n(), Basis::StructureSheaf, shifted)?;
    ctx.convert(&out, e.basis())
}

/// The class `F_s = s(O)`, so that `s(E) = E (x) F_s` for every `E`.
pub fn operator_class(ctx: &ProjectiveContext, s: &OperatorSeries) -> Result<K0Class> {
    s.apply(ctx, &K0Class::trivial(ctx.n()))
}

/// Same as [`operator_class`], for an operator given as a matrix; fails
/// outside the commutant of the canonical operator.
pub fn operator_class_of_matrix(ctx: &ProjectiveContext, m: &OperatorMatrix) -> Result<K0Class> {
    let s = m.to_series(ctx)?;
    operator_class(ctx, &s)
}
