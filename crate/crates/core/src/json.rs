//! JSON wire formats.
//!
//! Rationals travel as `"p/q"` or `"p"` strings, never as floats. Every
//! `*Json` type converts to and from its domain counterpart; conversions
//! into the domain validate lengths and reject malformed numbers.

use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exceptional::ExceptionalTuple;
use crate::isometry::{self, GeneratorSet, IsometryDescriptor, ResidueTable};
use crate::lattice::{Basis, K0Class, ProjectiveContext};
use crate::linalg::{Matrix, Rational};
use crate::operator::{OperatorMatrix, OperatorSeries, Sign};

pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::Parse(format!("malformed rational {s:?}"));
    if s.is_empty() || s.trim() != s {
        return Err(bad());
    }
    Rational::from_str(s).map_err(|_| bad())
}

pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

fn parse_all(v: &[String]) -> Result<Vec<Rational>> {
    v.iter().map(|s| parse_rational(s)).collect()
}

fn format_all<'a>(v: impl IntoIterator<Item = &'a Rational>) -> Vec<String> {
    v.into_iter().map(format_rational).collect()
}

fn matrix_to_rows(m: &Matrix) -> Vec<Vec<String>> {
    m.to_rows().iter().map(|r| format_all(r.iter())).collect()
}

fn matrix_from_rows(rows: &[Vec<String>]) -> Result<Matrix> {
    let parsed = rows
        .iter()
        .map(|r| parse_all(r))
        .collect::<Result<Vec<_>>>()?;
    let width = parsed.first().map_or(0, Vec::len);
    if parsed.iter().any(|r| r.len() != width) || parsed.len() != width {
        return Err(Error::Parse(
            "matrix rows must form a square array".to_string(),
        ));
    }
    Ok(Matrix::from_rows(parsed))
}

fn parse_sign(s: i64) -> Result<Sign> {
    Sign::from_i64(s).ok_or_else(|| Error::Parse(format!("sign must be 1 or -1, got {s}")))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassJson {
    pub n: usize,
    pub basis: Basis,
    pub coeffs: Vec<String>,
}

impl From<&K0Class> for ClassJson {
    fn from(e: &K0Class) -> Self {
        ClassJson {
            n: e.n(),
            basis: e.basis(),
            coeffs: format_all(e.coeffs()),
        }
    }
}

impl ClassJson {
    pub fn to_class(&self) -> Result<K0Class> {
        K0Class::new(self.n, self.basis, parse_all(&self.coeffs)?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "repr", rename_all = "snake_case", deny_unknown_fields)]
pub enum OperatorJson {
    DPoly {
        n: usize,
        coeffs: Vec<String>,
    },
    Matrix {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        n: Option<usize>,
        basis: Basis,
        rows: Vec<Vec<String>>,
    },
}

impl From<&OperatorSeries> for OperatorJson {
    fn from(s: &OperatorSeries) -> Self {
        OperatorJson::DPoly {
            n: s.n(),
            coeffs: format_all(s.coeffs()),
        }
    }
}

impl From<&OperatorMatrix> for OperatorJson {
    fn from(m: &OperatorMatrix) -> Self {
        OperatorJson::Matrix {
            n: Some(m.n()),
            basis: m.basis(),
            rows: matrix_to_rows(m.entries()),
        }
    }
}

impl OperatorJson {
    pub fn n(&self) -> Result<usize> {
        match self {
            OperatorJson::DPoly { n, .. } => Ok(*n),
            OperatorJson::Matrix { n: Some(n), .. } => Ok(*n),
            OperatorJson::Matrix { n: None, rows, .. } => rows
                .len()
                .checked_sub(1)
                .ok_or_else(|| Error::Parse("empty matrix".to_string())),
        }
    }

    /// The operator as a matrix in `basis` (its own basis for matrix input).
    pub fn to_matrix(&self, ctx: &ProjectiveContext, basis: Basis) -> Result<OperatorMatrix> {
        match self {
            OperatorJson::DPoly { n, coeffs } => {
                let s = OperatorSeries::new(*n, parse_all(coeffs)?)?;
                Ok(s.matrix(ctx, basis))
            }
            OperatorJson::Matrix { basis: b, rows, .. } => {
                OperatorMatrix::new(self.n()?, *b, matrix_from_rows(rows)?)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DescriptorJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    pub sign: i64,
    pub odd_coeffs: Vec<String>,
}

impl DescriptorJson {
    pub fn with_n(d: &IsometryDescriptor) -> Self {
        DescriptorJson {
            n: Some(d.n()),
            ..DescriptorJson::without_n(d)
        }
    }

    pub fn without_n(d: &IsometryDescriptor) -> Self {
        DescriptorJson {
            n: None,
            sign: d.sign().to_i64(),
            odd_coeffs: format_all(d.odd_coeffs()),
        }
    }

    /// `n` defaults to `fallback_n` when absent.
    pub fn to_descriptor(&self, fallback_n: Option<usize>) -> Result<IsometryDescriptor> {
        let n = self
            .n
            .or(fallback_n)
            .ok_or_else(|| Error::Parse("descriptor needs \"n\"".to_string()))?;
        IsometryDescriptor::new(n, parse_sign(self.sign)?, parse_all(&self.odd_coeffs)?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorSetJson {
    pub n: usize,
    pub generators: Vec<DescriptorJson>,
    pub hnf: Vec<Vec<String>>,
    pub denominator: String,
    pub tensor_classes: Vec<ClassJson>,
}

impl GeneratorSetJson {
    pub fn new(ctx: &ProjectiveContext, g: &GeneratorSet) -> Self {
        GeneratorSetJson {
            n: g.n,
            generators: g.generators.iter().map(DescriptorJson::without_n).collect(),
            hnf: g
                .hnf
                .iter()
                .map(|r| r.iter().map(BigInt::to_string).collect())
                .collect(),
            denominator: g.denominator.to_string(),
            tensor_classes: g
                .generators
                .iter()
                .map(|d| ClassJson::from(&isometry::tensoring_class(ctx, d)))
                .collect(),
        }
    }

    pub fn to_generator_set(&self) -> Result<GeneratorSet> {
        let gens = self
            .generators
            .iter()
            .map(|d| d.to_descriptor(Some(self.n)))
            .collect::<Result<Vec<_>>>()?;
        GeneratorSet::from_descriptors(self.n, gens)
    }
}

/// Emitted instead of a generator set when the search budget runs out.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartialTableJson {
    pub n: usize,
    pub budget_exhausted: bool,
    pub budget: u64,
    pub visited: u64,
    pub partial_residues: Vec<Vec<String>>,
}

impl PartialTableJson {
    pub fn new(n: usize, budget: u64, visited: u64, partial: &[Vec<Rational>]) -> Self {
        PartialTableJson {
            n,
            budget_exhausted: true,
            budget,
            visited,
            partial_residues: partial.iter().map(|r| format_all(r.iter())).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidueTableJson {
    pub n: usize,
    pub periods: Vec<String>,
    pub residues: Vec<Vec<String>>,
    pub visited: u64,
}

impl From<&ResidueTable> for ResidueTableJson {
    fn from(t: &ResidueTable) -> Self {
        ResidueTableJson {
            n: t.n,
            periods: t.periods.iter().map(BigInt::to_string).collect(),
            residues: t.residues.iter().map(|r| format_all(r.iter())).collect(),
            visited: t.visited,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TupleJson {
    pub n: usize,
    pub classes: Vec<ClassJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub is_exceptional: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub determinant: Option<String>,
}

impl TupleJson {
    pub fn new(t: &ExceptionalTuple) -> Self {
        TupleJson {
            n: t.n(),
            classes: t.classes().iter().map(ClassJson::from).collect(),
            is_exceptional: None,
            determinant: None,
        }
    }

    /// Adds the exceptionality verdict and determinant.
    pub fn with_report(ctx: &ProjectiveContext, t: &ExceptionalTuple) -> Self {
        TupleJson {
            is_exceptional: Some(t.is_exceptional(ctx)),
            determinant: Some(format_rational(&t.determinant())),
            ..TupleJson::new(t)
        }
    }

    pub fn to_tuple(&self, ctx: &ProjectiveContext) -> Result<ExceptionalTuple> {
        if self.n != ctx.n() {
            return Err(Error::DimensionMismatch {
                left: ctx.n(),
                right: self.n,
            });
        }
        let classes = self
            .classes
            .iter()
            .map(ClassJson::to_class)
            .collect::<Result<Vec<_>>>()?;
        ExceptionalTuple::new(ctx, &classes)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub n: usize,
    pub basis: Basis,
    pub rows: Vec<Vec<String>>,
}

impl MatrixJson {
    pub fn new(n: usize, basis: Basis, m: &Matrix) -> Self {
        MatrixJson {
            n,
            basis,
            rows: matrix_to_rows(m),
        }
    }
}

/// Input of an isometry check: a descriptor or an explicit matrix.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(untagged)]
pub enum IsometryInput {
    Descriptor(DescriptorJson),
    Operator(OperatorJson),
}
