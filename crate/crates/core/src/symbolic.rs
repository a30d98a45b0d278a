//! ℚ-linear combinations of `1, ξ_1, …, ξ_k`, where the `ξ_s` are real
//! constants the caller declares ℚ-linearly independent. Only ℚ-linear
//! operations are supported.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::matrix::RationalMatrix;
use crate::rational::{format_rational, parse_rational, Rational};

/// `c_0 + Σ_s c_s ξ_s`; index 0 is the constant 1. Zero coefficients are
/// never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SymbolicScalar {
    coeffs: BTreeMap<usize, Rational>,
}

impl SymbolicScalar {
    pub fn constant(c: Rational) -> Self {
        Self::from_terms([(0, c)])
    }

    pub fn symbol(s: usize) -> Self {
        Self::from_terms([(s, Rational::from_integer(1.into()))])
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (usize, Rational)>) -> Self {
        let mut coeffs = BTreeMap::new();
        for (s, c) in terms {
            let e = coeffs.entry(s).or_insert_with(Rational::zero);
            *e += c;
        }
        coeffs.retain(|_, c: &mut Rational| !c.is_zero());
        Self { coeffs }
    }

    pub fn coeff(&self, s: usize) -> Rational {
        self.coeffs.get(&s).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Largest symbol index with a nonzero coefficient (0 if constant).
    pub fn max_symbol(&self) -> usize {
        self.coeffs.keys().next_back().copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &Rational)> {
        self.coeffs.iter().map(|(s, c)| (*s, c))
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_terms(self.coeffs.iter().chain(&other.coeffs).map(|(s, c)| (*s, c.clone())))
    }

    pub fn scale(&self, f: &Rational) -> Self {
        Self::from_terms(self.coeffs.iter().map(|(s, c)| (*s, c * f)))
    }

    pub fn neg(&self) -> Self {
        self.scale(&Rational::from_integer((-1).into()))
    }

    /// The value as a rational, if no declared symbol occurs.
    pub fn as_rational(&self) -> Option<Rational> {
        (self.max_symbol() == 0).then(|| self.coeff(0))
    }
}

#[derive(Serialize, Deserialize)]
struct ScalarRepr {
    #[serde(rename = "const", default, skip_serializing_if = "Option::is_none")]
    constant: Option<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    sym: BTreeMap<String, String>,
}

impl Serialize for SymbolicScalar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let c = self.coeff(0);
        let repr = ScalarRepr {
            constant: Some(format_rational(&c)),
            sym: self
                .coeffs
                .iter()
                .filter(|(k, _)| **k > 0)
                .map(|(k, v)| (k.to_string(), format_rational(v)))
                .collect(),
        };
        repr.serialize(s)
    }
}

impl<'de> Deserialize<'de> for SymbolicScalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let repr = ScalarRepr::deserialize(d)?;
        let mut terms = Vec::new();
        if let Some(c) = repr.constant {
            terms.push((0, parse_rational(&c).map_err(D::Error::custom)?));
        }
        for (k, v) in repr.sym {
            let idx: usize = k.parse().map_err(|_| D::Error::custom(format!("bad symbol index {k:?}")))?;
            if idx == 0 {
                return Err(D::Error::custom("symbol indices start at 1; use \"const\" for the constant term"));
            }
            terms.push((idx, parse_rational(&v).map_err(D::Error::custom)?));
        }
        Ok(Self::from_terms(terms))
    }
}

/// A vector in ℝ^m whose coordinates are symbolic scalars.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SymbolicVector {
    pub coords: Vec<SymbolicScalar>,
}

impl SymbolicVector {
    pub fn new(coords: Vec<SymbolicScalar>) -> Self {
        Self { coords }
    }

    pub fn from_rational(v: &[Rational]) -> Self {
        Self { coords: v.iter().cloned().map(SymbolicScalar::constant).collect() }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn max_symbol(&self) -> usize {
        self.coords.iter().map(SymbolicScalar::max_symbol).max().unwrap_or(0)
    }

    /// Coefficient vector of symbol `s` across coordinates.
    pub fn symbol_row(&self, s: usize) -> Vec<Rational> {
        self.coords.iter().map(|c| c.coeff(s)).collect()
    }

    pub fn as_rational(&self) -> Option<Vec<Rational>> {
        self.coords.iter().map(SymbolicScalar::as_rational).collect()
    }
}

/// Stacks, for every vector and every symbol, the rational coefficient row
/// of that symbol. All-zero rows are dropped. A rational functional `u`
/// annihilates every input vector iff `u` lies in the nullspace of the
/// result, because the declared symbols are ℚ-linearly independent.
pub fn symbolic_coefficient_matrix(vs: &[SymbolicVector], m: usize) -> RationalMatrix {
    let k = vs.iter().map(SymbolicVector::max_symbol).max().unwrap_or(0);
    let mut rows = Vec::new();
    for v in vs {
        assert_eq!(v.dim(), m, "symbolic vectors must share a dimension");
        for s in 0..=k {
            let row = v.symbol_row(s);
            if row.iter().any(|x| !x.is_zero()) {
                rows.push(row);
            }
        }
    }
    RationalMatrix::from_rows(&rows, m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::nullspace;
    use crate::rational::{rat, rat_vec};

    fn one_xi() -> SymbolicVector {
        SymbolicVector::new(vec![SymbolicScalar::constant(rat(1)), SymbolicScalar::symbol(1)])
    }

    #[test]
    fn coefficient_matrix_examples() {
        let m = symbolic_coefficient_matrix(&[one_xi()], 2);
        assert_eq!(m, RationalMatrix::from_i64(&[&[1, 0], &[0, 1]]));
        assert!(nullspace(&m).is_empty());

        let ones = SymbolicVector::from_rational(&rat_vec(&[1, 1]));
        let m = symbolic_coefficient_matrix(&[ones], 2);
        assert_eq!(m, RationalMatrix::from_i64(&[&[1, 1]]));
        assert_eq!(nullspace(&m), vec![rat_vec(&[-1, 1])]);

        let xixi = SymbolicVector::new(vec![SymbolicScalar::symbol(1), SymbolicScalar::symbol(1)]);
        let m = symbolic_coefficient_matrix(&[xixi], 2);
        assert_eq!(m, RationalMatrix::from_i64(&[&[1, 1]]));
        assert_eq!(nullspace(&m), vec![rat_vec(&[-1, 1])]);
    }

    #[test]
    fn scalar_json() {
        let x = SymbolicScalar::from_terms([(0, rat(2)), (1, crate::rational::ratio(-1, 3))]);
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, r#"{"const":"2","sym":{"1":"-1/3"}}"#);
        assert_eq!(serde_json::from_str::<SymbolicScalar>(&s).unwrap(), x);
        let bare: SymbolicScalar = serde_json::from_str(r#"{"sym":{"2":"1"}}"#).unwrap();
        assert_eq!(bare, SymbolicScalar::symbol(2));
        assert!(serde_json::from_str::<SymbolicScalar>(r#"{"sym":{"0":"1"}}"#).is_err());
    }

    #[test]
    fn linear_ops() {
        let a = SymbolicScalar::from_terms([(0, rat(1)), (1, rat(2))]);
        let b = SymbolicScalar::from_terms([(1, rat(-2)), (2, rat(1))]);
        let s = a.add(&b);
        assert_eq!(s, SymbolicScalar::from_terms([(0, rat(1)), (2, rat(1))]));
        assert!(a.add(&a.neg()).is_zero());
        assert_eq!(s.as_rational(), None);
        assert_eq!(SymbolicScalar::constant(rat(5)).as_rational(), Some(rat(5)));
    }
}
