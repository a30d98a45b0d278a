//! Presenting a second-construction quotient `V_Σ/H` through the first
//! construction, as `U(K)/H″` with `H″` connected.

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use crate::complex::SimplicialComplex;
use crate::error::QuotientError;
use crate::fan::{underlying_complex, Fan};
use crate::lattice::{smith_normal_form, IntMatrix};
use crate::matrix::{nullspace, solve, RationalMatrix};
use crate::quotient::{validate_construction_i, validate_construction_ii, ManifoldDescriptor};
use crate::rational::{GaussianRational, Rational};
use crate::subspace::{ComplexSubspace, SubspaceData};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LiftResult {
    /// `K` on `m + r` vertices; the last `r` are ghosts.
    pub complex: SimplicialComplex,
    pub subspace: ComplexSubspace,
    /// `r = torus_ghosts + torsion_ghosts`.
    pub ghost_count: usize,
    /// Ghosts splitting off the torus factor, `n − rank A`.
    pub torus_ghosts: usize,
    /// Invariant factors `> 1` of the ray matrix: the component group.
    #[serde(serialize_with = "serialize_ints")]
    pub component_group: Vec<BigInt>,
    pub descriptor: ManifoldDescriptor,
}

fn serialize_ints<S: serde::Serializer>(xs: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(xs.len()))?;
    for x in xs {
        match i64::try_from(x) {
            Ok(v) => seq.serialize_element(&v)?,
            Err(_) => seq.serialize_element(&x.to_string())?,
        }
    }
    seq.end()
}

fn int_to_rational(x: &BigInt) -> Rational {
    Rational::from_integer(x.clone())
}

/// Lifts valid `(Σ, 𝔥)` to `(K, 𝔥″)`:
///
/// 1. `K` is the complex of cones of `Σ`.
/// 2. With `P A Q = D` the Smith form of the ray matrix `A` (columns are
///    rays) and `ρ = rank A`, the last `n − ρ` columns of `P⁻¹` span a
///    complement `C` of the saturation of `im A`; each becomes a ghost
///    coordinate, and `Ã = [A | C]` has finite cokernel `⊕ ℤ/d_i`.
/// 3. `𝔥′ = Ã_ℂ⁻¹(𝔥)`.
/// 4. For each `d_i > 1`, `ξ_i = Q e_i / d_i` satisfies `A ξ_i ∈ ℤ^n`, so
///    `exp ξ_i` generates a cyclic component of `π⁻¹(H)`. A new ghost
///    coordinate `w` and the line through `(ξ_i, 1)`, i.e. through
///    `(Q e_i, d_i e_w)`, absorb it.
pub fn cox_batyrev_lift(fan: &Fan, h: &SubspaceData, seed: u64) -> Result<LiftResult, QuotientError> {
    let report = validate_construction_ii(fan, h, seed)?;
    if !report.is_valid() {
        return Err(QuotientError::Rejected(format!(
            "second construction fails: {}",
            report.failed_codes().join(", ")
        )));
    }
    let h = h.exact()?;
    let (n, m) = (fan.dim(), fan.rays().len());
    let complex = underlying_complex(fan)?;

    let a = IntMatrix::from_rows((0..n).map(|r| fan.rays().iter().map(|ray| ray[r].clone()).collect()).collect(), m);
    let snf = smith_normal_form(&a);
    let rho = snf.invariants.len();
    let p_inv = snf.p.to_rational().inverse().expect("Smith transform is unimodular");
    let r0 = n - rho;

    let width = m + r0;
    let mut a_tilde = RationalMatrix::zeros(n, width);
    for r in 0..n {
        for c in 0..m {
            a_tilde[(r, c)] = int_to_rational(a.get(r, c));
        }
        for t in 0..r0 {
            a_tilde[(r, m + t)] = p_inv[(r, rho + t)].clone();
        }
    }

    let torsion: Vec<(usize, BigInt)> =
        snf.invariants.iter().enumerate().filter(|(_, d)| !d.is_one()).map(|(i, d)| (i, d.clone())).collect();
    let r1 = torsion.len();
    let total = width + r1;
    let pad = |v: Vec<GaussianRational>| {
        let mut v = v;
        v.resize(total, GaussianRational::zero());
        v
    };

    let mut basis: Vec<Vec<GaussianRational>> = Vec::new();
    for k in nullspace(&a_tilde) {
        basis.push(pad(k.into_iter().map(GaussianRational::real).collect()));
    }
    for v in h.basis() {
        let re: Vec<Rational> = v.iter().map(|z| z.re.clone()).collect();
        let im: Vec<Rational> = v.iter().map(|z| z.im.clone()).collect();
        let (x, y) = (
            solve(&a_tilde, &re).expect("Ã is surjective over ℚ"),
            solve(&a_tilde, &im).expect("Ã is surjective over ℚ"),
        );
        basis.push(pad(x.into_iter().zip(y).map(|(a, b)| GaussianRational::new(a, b)).collect()));
    }
    for (t, (i, d)) in torsion.iter().enumerate() {
        let mut v: Vec<GaussianRational> =
            (0..m).map(|r| GaussianRational::real(int_to_rational(snf.q.get(r, *i)))).collect();
        v.resize(total, GaussianRational::zero());
        v[width + t] = GaussianRational::real(int_to_rational(d));
        basis.push(v);
    }

    let subspace = ComplexSubspace::new(total, basis)
        .map_err(|e| QuotientError::LiftPostcondition(format!("lifted basis: {e}")))?;
    let lifted_complex = complex.with_ghosts(r0 + r1);

    let check = validate_construction_i(&lifted_complex, &SubspaceData::Exact(subspace.clone()), seed)?;
    let Some(descriptor) = check.descriptor.clone() else {
        return Err(QuotientError::LiftPostcondition(format!(
            "first construction fails: {}",
            check.failed_codes().join(", ")
        )));
    };
    if total - subspace.dim() != n - h.dim() {
        return Err(QuotientError::LiftPostcondition(format!(
            "dimension mismatch: {} − {} ≠ {} − {}",
            total,
            subspace.dim(),
            n,
            h.dim()
        )));
    }
    Ok(LiftResult {
        complex: lifted_complex,
        subspace,
        ghost_count: r0 + r1,
        torus_ghosts: r0,
        component_group: torsion.into_iter().map(|(_, d)| d).collect(),
        descriptor,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::DEFAULT_SEED;

    #[test]
    fn cp2_lift() {
        let cp2 = Fan::from_i64(2, &[&[1, 0], &[0, 1], &[-1, -1]], &[&[0, 1], &[1, 2], &[0, 2]]).unwrap();
        let l = cox_batyrev_lift(&cp2, &SubspaceData::Exact(ComplexSubspace::zero(2)), DEFAULT_SEED).unwrap();
        assert_eq!(l.ghost_count, 0);
        assert!(l.component_group.is_empty());
        assert_eq!(l.complex, SimplicialComplex::new(3, vec![vec![0, 1], vec![0, 2], vec![1, 2]]).unwrap());
        let ones = vec![GaussianRational::one(); 3];
        assert_eq!(l.subspace.dim(), 1);
        assert!(l.subspace.contains(&ones));
    }

    #[test]
    fn hopf_lift() {
        let fan = Fan::from_i64(3, &[&[1, 0, 0], &[0, 1, 0]], &[&[0], &[1]]).unwrap();
        let h = ComplexSubspace::from_pairs(3, &[&[(0, 1), (0, 1), (-1, 0)]]).unwrap();
        let l = cox_batyrev_lift(&fan, &SubspaceData::Exact(h.clone()), DEFAULT_SEED).unwrap();
        assert_eq!((l.ghost_count, l.torus_ghosts), (1, 1));
        assert_eq!(l.complex, SimplicialComplex::new(3, vec![vec![0], vec![1]]).unwrap());
        assert_eq!(l.subspace.dim(), 1);
        assert!(l.subspace.contains(&h.basis()[0]));
    }

    #[test]
    fn torsion_adds_a_ghost() {
        // rays (1,0,0) and (1,2,0) span a sublattice of index 2 in its saturation
        let fan = Fan::from_i64(3, &[&[1, 0, 0], &[1, 2, 0]], &[&[0], &[1]]).unwrap();
        let h = ComplexSubspace::from_pairs(3, &[&[(1, 0), (1, 0), (0, 1)]]).unwrap();
        let l = cox_batyrev_lift(&fan, &SubspaceData::Exact(h), DEFAULT_SEED).unwrap();
        assert_eq!(l.component_group, vec![BigInt::from(2)]);
        assert_eq!((l.ghost_count, l.torus_ghosts), (2, 1));
        assert_eq!(l.complex.vertex_count() - l.subspace.dim(), 3 - 1);
    }

    #[test]
    fn invalid_input_is_rejected() {
        let fan = Fan::from_i64(3, &[&[1, 0, 0], &[0, 1, 0]], &[&[0], &[1]]).unwrap();
        let h = ComplexSubspace::from_pairs(3, &[&[(0, 1), (0, -1), (-1, 0)]]).unwrap();
        assert!(matches!(
            cox_batyrev_lift(&fan, &SubspaceData::Exact(h), DEFAULT_SEED),
            Err(QuotientError::Rejected(_))
        ));
    }
}
