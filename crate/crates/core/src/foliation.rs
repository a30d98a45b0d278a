//! The canonical foliation by orbits of `exp 𝔥̄`.

use serde::Serialize;

use crate::fan::Fan;
use crate::matrix::{rank, RationalMatrix};
use crate::rational::GaussianRational;
use crate::subspace::ComplexSubspace;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FoliationData {
    pub conjugate_basis: Vec<Vec<GaussianRational>>,
    /// `dim_ℂ (𝔥 ∩ 𝔥̄)`.
    pub h_cap_hbar_dim: usize,
    pub leaf_dim: usize,
    /// Whether `𝔥 ∩ 𝔥̄ = 0`, so that `H ∩ H̄` is discrete.
    pub discrete: bool,
    /// `leaf_dim = ½(dim T − max cone dimension)`, when a fan is supplied.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub consistent_with_fan: Option<bool>,
}

pub fn canonical_foliation(h: &ComplexSubspace, fan: Option<&Fan>) -> FoliationData {
    let bar = h.conjugate();
    let mut rows = h.realified_rows();
    rows.extend(bar.realified_rows());
    // the real rank of 𝔥 + 𝔥̄ is twice its complex dimension
    let sum_dim = rank(&RationalMatrix::from_rows(&rows, 2 * h.ambient_dim())) / 2;
    let h_cap_hbar_dim = 2 * h.dim() - sum_dim;
    let consistent_with_fan = fan.map(|f| {
        let n = f.dim();
        let c = f.max_cone_dim();
        n >= c && (n - c) % 2 == 0 && (n - c) / 2 == h.dim()
    });
    FoliationData {
        conjugate_basis: bar.basis().to_vec(),
        h_cap_hbar_dim,
        leaf_dim: h.dim(),
        discrete: h_cap_hbar_dim == 0,
        consistent_with_fan,
    }
}
