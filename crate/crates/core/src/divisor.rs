//! Hypotheses of the finiteness theorem for invariant divisors.

use serde::Serialize;

use crate::complex::SimplicialComplex;
use crate::error::QuotientError;
use crate::matrix::nullspace;
use crate::rational::Rational;
use crate::subspace::SubspaceData;
use crate::symbolic::symbolic_coefficient_matrix;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DivisorHypotheses {
    /// `U(K)` is simply connected: every vertex is a face, so all removed
    /// coordinate subspaces have complex codimension at least 2.
    pub simply_connected: bool,
    /// The only rational functional vanishing on `p(𝔥)` is zero.
    pub generic_annihilator: bool,
    /// Basis of the rational functionals vanishing on `p(𝔥)`.
    #[serde(serialize_with = "crate::rational::serde_rational_rows::serialize")]
    pub annihilators: Vec<Vec<Rational>>,
}

pub fn divisor_hypotheses(k: &SimplicialComplex, h: &SubspaceData) -> Result<DivisorHypotheses, QuotientError> {
    let m = k.vertex_count();
    if h.ambient_dim() != m {
        return Err(QuotientError::DimensionMismatch(format!(
            "complex has {m} vertices, subspace lives in dimension {}",
            h.ambient_dim()
        )));
    }
    let spanning = h.symbolic().projection_spanning_set();
    let annihilators = nullspace(&symbolic_coefficient_matrix(&spanning, m));
    Ok(DivisorHypotheses {
        simply_connected: k.ghost_vertices().is_empty(),
        generic_annihilator: annihilators.is_empty(),
        annihilators,
    })
}
