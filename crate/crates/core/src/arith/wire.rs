//! Text encodings for exact scalars: rationals as `"p/q"` (or `"p"` when
//! `q = 1`), Gaussian rationals as `[re, im]` pairs of such strings.

use std::str::FromStr;

use num_bigint::BigInt;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::matrix::{GaussMatrix, Matrix};
use super::{ArithError, GaussianRational, Rational};

pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

pub fn parse_rational(s: &str) -> Result<Rational, ArithError> {
    Rational::from_str(s.trim()).map_err(|e| ArithError::Parse(format!("{s:?}: {e}")))
}

/// Serde adapter for a rational encoded as a string.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalStr(pub Rational);

impl Serialize for RationalStr {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(&self.0))
    }
}

impl<'de> Deserialize<'de> for RationalStr {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map(RationalStr).map_err(D::Error::custom)
    }
}

/// For `#[serde(serialize_with)]` on plain `Rational` fields.
pub fn serialize_rational<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(r))
}

/// Serde adapter for a Gaussian rational encoded as `[re, im]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaussianStr(pub GaussianRational);

impl Serialize for GaussianStr {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [format_rational(&self.0.re), format_rational(&self.0.im)].serialize(s)
    }
}

impl<'de> Deserialize<'de> for GaussianStr {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let [re, im] = <[String; 2]>::deserialize(d)?;
        let re = parse_rational(&re).map_err(D::Error::custom)?;
        let im = parse_rational(&im).map_err(D::Error::custom)?;
        Ok(GaussianStr(GaussianRational::new(re, im)))
    }
}

pub fn gauss_matrix_to_wire(m: &GaussMatrix) -> Vec<Vec<GaussianStr>> {
    m.row_iter()
        .map(|row| row.iter().cloned().map(GaussianStr).collect())
        .collect()
}

/// Rebuilds a matrix from wire rows; fails on ragged or empty input.
pub fn gauss_matrix_from_wire(rows: Vec<Vec<GaussianStr>>) -> Result<GaussMatrix, ArithError> {
    let cols = rows.first().map_or(0, Vec::len);
    if rows.is_empty() || rows.iter().any(|r| r.len() != cols) {
        return Err(ArithError::Parse("matrix rows must be nonempty and of equal length".into()));
    }
    Ok(Matrix::from_rows(
        rows.into_iter()
            .map(|r| r.into_iter().map(|g| g.0).collect())
            .collect(),
        cols,
    ))
}

pub fn int_row_to_wire(row: &[BigInt]) -> Vec<String> {
    row.iter().map(ToString::to_string).collect()
}

pub fn rationals_to_wire(v: &[Rational]) -> Vec<RationalStr> {
    v.iter().cloned().map(RationalStr).collect()
}
