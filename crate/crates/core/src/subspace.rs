//! Complex subspaces `𝔥 ⊂ ℂ^m`, with Gaussian-rational or symbolic entries.

use serde::{Deserialize, Serialize};

use crate::error::QuotientError;
use crate::matrix::{rank, RationalMatrix};
use crate::rational::{GaussianRational, Rational};
use crate::symbolic::{SymbolicScalar, SymbolicVector};

/// A ℂ-linearly independent basis with Gaussian-rational entries.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComplexSubspace {
    m: usize,
    basis: Vec<Vec<GaussianRational>>,
}

impl ComplexSubspace {
    pub fn new(m: usize, basis: Vec<Vec<GaussianRational>>) -> Result<Self, QuotientError> {
        if let Some(i) = basis.iter().position(|v| v.len() != m) {
            return Err(QuotientError::DimensionMismatch(format!(
                "basis vector {} has {} entries, expected {m}",
                i + 1,
                basis[i].len()
            )));
        }
        let h = Self { m, basis };
        if rank(&RationalMatrix::from_rows(&h.realified_rows(), 2 * m)) != 2 * h.basis.len() {
            return Err(QuotientError::Rejected("basis is not linearly independent over ℂ".into()));
        }
        Ok(h)
    }

    pub fn zero(m: usize) -> Self {
        Self { m, basis: Vec::new() }
    }

    /// Basis vectors given as `(re, im)` integer pairs per coordinate.
    pub fn from_pairs(m: usize, basis: &[&[(i64, i64)]]) -> Result<Self, QuotientError> {
        Self::new(
            m,
            basis.iter().map(|v| v.iter().map(|&(a, b)| GaussianRational::from_ints(a, b)).collect()).collect(),
        )
    }

    pub fn ambient_dim(&self) -> usize {
        self.m
    }

    /// Complex dimension.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<GaussianRational>] {
        &self.basis
    }

    pub fn real_parts(&self) -> Vec<Vec<Rational>> {
        self.basis.iter().map(|v| v.iter().map(|z| z.re.clone()).collect()).collect()
    }

    pub fn imag_parts(&self) -> Vec<Vec<Rational>> {
        self.basis.iter().map(|v| v.iter().map(|z| z.im.clone()).collect()).collect()
    }

    /// Complex-conjugate basis, spanning `𝔥̄`.
    pub fn conjugate(&self) -> Self {
        Self { m: self.m, basis: self.basis.iter().map(|v| v.iter().map(GaussianRational::conj).collect()).collect() }
    }

    /// Real spanning set of `𝔥` viewed inside `ℝ^{2m} = ℝ^m ⊕ iℝ^m`: for
    /// each basis vector `v = a + ib`, the rows `(a, b)` and `(−b, a)`
    /// (the latter is `i·v`).
    pub fn realified_rows(&self) -> Vec<Vec<Rational>> {
        let mut rows = Vec::with_capacity(2 * self.basis.len());
        for v in &self.basis {
            rows.push(v.iter().map(|z| z.re.clone()).chain(v.iter().map(|z| z.im.clone())).collect());
            rows.push(v.iter().map(|z| -z.im.clone()).chain(v.iter().map(|z| z.re.clone())).collect());
        }
        rows
    }

    /// Whether `x ∈ 𝔥`.
    pub fn contains(&self, x: &[GaussianRational]) -> bool {
        let mut rows = self.realified_rows();
        let r = rank(&RationalMatrix::from_rows(&rows, 2 * self.m));
        rows.push(x.iter().map(|z| z.re.clone()).chain(x.iter().map(|z| z.im.clone())).collect());
        rank(&RationalMatrix::from_rows(&rows, 2 * self.m)) == r
    }

    pub fn to_symbolic(&self) -> SymbolicSubspace {
        let lift = |v: Vec<Rational>| SymbolicVector::from_rational(&v);
        SymbolicSubspace {
            m: self.m,
            symbols: 0,
            basis: self.real_parts().into_iter().map(lift).zip(self.imag_parts().into_iter().map(lift)).collect(),
        }
    }
}

/// Basis vectors whose real and imaginary parts are ℚ-linear combinations
/// of `1, ξ_1, …, ξ_k`. Only ℚ-linear questions can be asked of it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolicSubspace {
    pub m: usize,
    pub symbols: usize,
    /// `(Re v, Im v)` per basis vector.
    pub basis: Vec<(SymbolicVector, SymbolicVector)>,
}

impl SymbolicSubspace {
    /// `{Re v, Im v}`, which spans `p(𝔥)` over ℝ.
    pub fn projection_spanning_set(&self) -> Vec<SymbolicVector> {
        self.basis.iter().flat_map(|(re, im)| [re.clone(), im.clone()]).collect()
    }

    /// The same subspace with rational entries, when no symbol occurs.
    pub fn as_exact(&self) -> Option<Result<ComplexSubspace, QuotientError>> {
        let mut basis = Vec::with_capacity(self.basis.len());
        for (re, im) in &self.basis {
            let (re, im) = (re.as_rational()?, im.as_rational()?);
            basis.push(re.into_iter().zip(im).map(|(a, b)| GaussianRational::new(a, b)).collect());
        }
        Some(ComplexSubspace::new(self.m, basis))
    }
}

/// Input form of `𝔥`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SubspaceData {
    Exact(ComplexSubspace),
    Symbolic(SymbolicSubspace),
}

impl SubspaceData {
    pub fn ambient_dim(&self) -> usize {
        match self {
            SubspaceData::Exact(h) => h.ambient_dim(),
            SubspaceData::Symbolic(h) => h.m,
        }
    }

    /// Rational data, or the error every rational-only operation reports.
    pub fn exact(&self) -> Result<ComplexSubspace, QuotientError> {
        match self {
            SubspaceData::Exact(h) => Ok(h.clone()),
            SubspaceData::Symbolic(s) => s.as_exact().unwrap_or(Err(QuotientError::RequiresRationalData)),
        }
    }

    pub fn symbolic(&self) -> SymbolicSubspace {
        match self {
            SubspaceData::Exact(h) => h.to_symbolic(),
            SubspaceData::Symbolic(s) => s.clone(),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ExactRepr {
    m: usize,
    basis: Vec<Vec<GaussianRational>>,
}

#[derive(Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SymbolicEntry {
    #[serde(default)]
    re: SymbolicScalar,
    #[serde(default)]
    im: SymbolicScalar,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SymbolicRepr {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    m: Option<usize>,
    symbols: usize,
    basis: Vec<Vec<SymbolicEntry>>,
}

impl<'de> Deserialize<'de> for ComplexSubspace {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = ExactRepr::deserialize(d)?;
        ComplexSubspace::new(r.m, r.basis).map_err(serde::de::Error::custom)
    }
}

impl Serialize for SymbolicSubspace {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let basis = self
            .basis
            .iter()
            .map(|(re, im)| {
                re.coords.iter().zip(&im.coords).map(|(a, b)| SymbolicEntry { re: a.clone(), im: b.clone() }).collect()
            })
            .collect();
        SymbolicRepr { m: Some(self.m), symbols: self.symbols, basis }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for SymbolicSubspace {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let r = SymbolicRepr::deserialize(d)?;
        let m = match (r.m, r.basis.first()) {
            (Some(m), _) => m,
            (None, Some(v)) => v.len(),
            (None, None) => return Err(D::Error::custom("\"m\" is required when the basis is empty")),
        };
        let mut basis = Vec::with_capacity(r.basis.len());
        for (i, v) in r.basis.into_iter().enumerate() {
            if v.len() != m {
                return Err(D::Error::custom(format!("basis vector {} has {} entries, expected {m}", i + 1, v.len())));
            }
            let (re, im): (Vec<_>, Vec<_>) = v.into_iter().map(|e| (e.re, e.im)).unzip();
            let (re, im) = (SymbolicVector::new(re), SymbolicVector::new(im));
            if re.max_symbol().max(im.max_symbol()) > r.symbols {
                return Err(D::Error::custom(format!("basis vector {} uses an undeclared symbol", i + 1)));
            }
            basis.push((re, im));
        }
        Ok(SymbolicSubspace { m, symbols: r.symbols, basis })
    }
}

impl Serialize for SubspaceData {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            SubspaceData::Exact(h) => h.serialize(s),
            SubspaceData::Symbolic(h) => h.serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for SubspaceData {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let v = serde_json::Value::deserialize(d)?;
        if v.get("symbols").is_some() {
            SymbolicSubspace::deserialize(v).map(SubspaceData::Symbolic).map_err(D::Error::custom)
        } else {
            ComplexSubspace::deserialize(v).map(SubspaceData::Exact).map_err(D::Error::custom)
        }
    }
}
