//! The two quotient constructions: validity of `(Σ, 𝔥)` and `(K, 𝔥)`, and
//! the numerical invariants of the resulting manifold.
//!
//! Throughout, `x = Σ_j (α_j + iβ_j) v_j` parametrizes `𝔥` by real
//! coordinates `(α, β) ∈ ℝ^{2k}`; with `v_j = a_j + i b_j`,
//! `Re x = Aα − Bβ` and `Im x = Bα + Aβ`.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::complex::SimplicialComplex;
use crate::error::QuotientError;
use crate::fan::{fan_from_complex, fan_is_complete, fan_validate, uncovered_witness, Fan, FanValidity, RationalFan};
use crate::lattice::subspace_lattice_points;
use crate::matrix::{nullspace, rank, solve, RationalMatrix};
use crate::rational::{format_rational, GaussianRational, Rational};
use crate::subspace::{ComplexSubspace, SubspaceData};

/// `(Re x, Im x)` as linear maps `ℝ^{2k} → ℝ^m`.
fn real_coordinates(h: &ComplexSubspace) -> (RationalMatrix, RationalMatrix) {
    let (m, k) = (h.ambient_dim(), h.dim());
    let mut re = RationalMatrix::zeros(m, 2 * k);
    let mut im = RationalMatrix::zeros(m, 2 * k);
    for (j, v) in h.basis().iter().enumerate() {
        for (r, z) in v.iter().enumerate() {
            re[(r, j)] = z.re.clone();
            re[(r, k + j)] = -z.im.clone();
            im[(r, j)] = z.im.clone();
            im[(r, k + j)] = z.re.clone();
        }
    }
    (re, im)
}

/// Basis of `p(𝔥) = span_ℝ{Re v, Im v}`, in reduced echelon form.
pub fn projection_p(h: &ComplexSubspace) -> Vec<Vec<Rational>> {
    let mut rows = h.real_parts();
    rows.extend(h.imag_parts());
    RationalMatrix::from_rows(&rows, h.ambient_dim()).row_space_basis()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HCapT {
    /// Real basis of `𝔥 ∩ 𝔱`.
    pub h_cap_t: Vec<Vec<Rational>>,
    /// Real vectors `y` with `iy` running over a basis of `𝔥 ∩ i𝔱`; empty
    /// iff `p|_𝔥` is injective.
    pub h_cap_it: Vec<Vec<Rational>>,
}

pub fn check_h_cap_t(h: &ComplexSubspace) -> HCapT {
    let (re, im) = real_coordinates(h);
    let h_cap_t = nullspace(&im).iter().map(|c| re.mul_vec(c)).collect();
    let h_cap_it = nullspace(&re).iter().map(|c| im.mul_vec(c)).collect();
    HCapT { h_cap_t, h_cap_it }
}

/// Rows span the annihilator of `p_h` in `(ℝ^n)*`; each row is a primitive
/// integer vector whose first nonzero entry is positive.
pub fn quotient_map_q(n: usize, p_h: &[Vec<Rational>]) -> RationalMatrix {
    let rows: Vec<Vec<Rational>> = nullspace(&RationalMatrix::from_rows(p_h, n))
        .iter()
        .map(|v| {
            let mut w: Vec<BigInt> = crate::rational::primitive_integer(v);
            if w.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
                w.iter_mut().for_each(|x| *x = -x.clone());
            }
            crate::rational::to_rational_vec(&w)
        })
        .collect();
    RationalMatrix::from_rows(&rows, n)
}

/// `q` for rational `𝔥`; symbolic data is refused.
pub fn quotient_map(h: &SubspaceData) -> Result<RationalMatrix, QuotientError> {
    let h = h.exact()?;
    Ok(quotient_map_q(h.ambient_dim(), &projection_p(&h)))
}

/// Image of a fan's cones under `q`, with the same index sets.
pub fn project_fan(fan: &RationalFan, q: &RationalMatrix) -> RationalFan {
    RationalFan {
        dim: q.rows(),
        rays: fan.rays.iter().map(|r| q.mul_vec(r)).collect(),
        max_cones: fan.max_cones.clone(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionB {
    pub q: RationalMatrix,
    pub projected: RationalFan,
    /// Maximal cones on whose span `q` is not injective.
    pub rank_failures: Vec<usize>,
    pub validity: FanValidity,
    /// `Some(false)` when completeness fails provably, `None` when the
    /// projected cones do not form a fan and no uncovered point was found.
    pub complete: Option<bool>,
    pub uncovered_point: Option<Vec<Rational>>,
}

impl ConditionB {
    pub fn holds(&self) -> bool {
        self.rank_failures.is_empty() && self.validity.is_valid() && self.complete == Some(true)
    }

    /// First failure in check order, 1-based.
    pub fn diagnostic(&self) -> Option<String> {
        if let Some(c) = self.rank_failures.first() {
            return Some(format!("q is not injective on the span of cone {}", c + 1));
        }
        if let Some(c) = self.validity.non_convex_cones.first() {
            return Some(format!("projected cone {} contains a line", c + 1));
        }
        if let Some((i, j)) = self.validity.violating_pairs.first() {
            return Some(format!("projected cones {} and {} do not meet in a common face", i + 1, j + 1));
        }
        match (&self.complete, &self.uncovered_point) {
            (Some(true), _) => None,
            (_, Some(x)) => Some(format!(
                "projected fan not complete: ({}) lies in no cone",
                x.iter().map(format_rational).collect::<Vec<_>>().join(", ")
            )),
            _ => Some("projected fan not complete".into()),
        }
    }
}

/// Checks condition (b) with a given quotient matrix `q` (any matrix whose
/// kernel is `p(𝔥)`).
pub fn check_condition_b_with(fan: &RationalFan, q: &RationalMatrix, seed: u64) -> Result<ConditionB, QuotientError> {
    let projected = project_fan(fan, q);
    let rank_failures: Vec<usize> = (0..fan.max_cones.len())
        .filter(|&c| {
            let proj = RationalMatrix::from_rows(&projected.cone_generators(c), projected.dim);
            rank(&proj) != fan.cone_dim(c)
        })
        .collect();
    let validity = fan_validate(&projected);
    let (complete, uncovered_point) = if rank_failures.is_empty() && validity.is_valid() {
        let c = fan_is_complete(&projected, seed)?;
        (Some(c), if c { None } else { uncovered_witness(&projected, seed) })
    } else {
        let w = uncovered_witness(&projected, seed);
        (w.as_ref().map(|_| false), w)
    };
    Ok(ConditionB { q: q.clone(), projected, rank_failures, validity, complete, uncovered_point })
}

pub fn check_condition_b(fan: &Fan, h: &ComplexSubspace, seed: u64) -> Result<ConditionB, QuotientError> {
    check_dims(fan.dim(), h)?;
    let q = quotient_map_q(h.ambient_dim(), &projection_p(h));
    check_condition_b_with(fan.geometry(), &q, seed)
}

fn check_dims(n: usize, h: &ComplexSubspace) -> Result<(), QuotientError> {
    if n != h.ambient_dim() {
        return Err(QuotientError::DimensionMismatch(format!(
            "fan lives in dimension {n}, subspace in dimension {}",
            h.ambient_dim()
        )));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FaceDiagnostic {
    /// 1-based vertices.
    pub face: Vec<usize>,
    pub holds: bool,
    /// `dim_ℝ (𝔥 ∩ ℂ^I)`; must be 0.
    pub h_cap_face_dim: usize,
    /// Rank of the lattice `L_I`.
    pub lattice_rank: usize,
    /// Preimage of a lattice generator that is not in `ℤ^m`, as `re+imi`
    /// strings.
    pub non_integral_preimage: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionAI {
    pub holds: bool,
    pub faces: Vec<FaceDiagnostic>,
}

/// Decides, for each maximal face `I`, whether
/// `L_I = {x ∈ 𝔥 : x_j ∈ ℤ for j ∉ I}` lies in `ℤ^m`, i.e. whether
/// `exp 𝔥` meets the coordinate subtorus of `I` trivially.
pub fn check_condition_a_i(k: &SimplicialComplex, h: &ComplexSubspace) -> Result<ConditionAI, QuotientError> {
    let m = k.vertex_count();
    if m != h.ambient_dim() {
        return Err(QuotientError::DimensionMismatch(format!(
            "complex has {m} vertices, subspace lives in dimension {}",
            h.ambient_dim()
        )));
    }
    let (re, im) = real_coordinates(h);
    let faces: Vec<FaceDiagnostic> = k.facets().iter().map(|face| face_check(face, m, &re, &im)).collect();
    Ok(ConditionAI { holds: faces.iter().all(|f| f.holds), faces })
}

fn face_check(face: &[usize], m: usize, re: &RationalMatrix, im: &RationalMatrix) -> FaceDiagnostic {
    let out: Vec<usize> = (0..m).filter(|j| !face.contains(j)).collect();
    let one_based = face.iter().map(|v| v + 1).collect();

    let inside_face = re.select_rows(&out).vstack(&im.select_rows(&out));
    let h_cap_face_dim = nullspace(&inside_face).len();
    if h_cap_face_dim > 0 {
        return FaceDiagnostic {
            face: one_based,
            holds: false,
            h_cap_face_dim,
            lattice_rank: 0,
            non_integral_preimage: None,
        };
    }

    // S_I: points of 𝔥 real outside I; its projection to the outside
    // coordinates is injective because 𝔥 ∩ ℂ^I = 0.
    let s = nullspace(&im.select_rows(&out));
    let proj_rows: Vec<Vec<Rational>> = s.iter().map(|c| out.iter().map(|&j| re.row(j).iter().zip(c).map(|(a, b)| a * b).sum()).collect()).collect();
    let lattice = subspace_lattice_points(&proj_rows, out.len());
    // proj_rows are the images of the S-basis; solve for coefficients.
    let p = RationalMatrix::from_rows(&proj_rows, out.len()).transpose();
    for g in &lattice {
        let target: Vec<Rational> = g.iter().map(|x| Rational::from_integer(x.clone())).collect();
        let coeffs = solve(&p, &target).expect("lattice point lies in the projected subspace");
        let mut c = vec![Rational::zero(); re.cols()];
        for (t, ct) in coeffs.iter().enumerate() {
            for (acc, st) in c.iter_mut().zip(&s[t]) {
                *acc += ct * st;
            }
        }
        let (x_re, x_im) = (re.mul_vec(&c), im.mul_vec(&c));
        if !(x_im.iter().all(Zero::is_zero) && x_re.iter().all(|x| x.is_integer())) {
            let z = x_re.into_iter().zip(x_im).map(|(a, b)| GaussianRational::new(a, b).to_string()).collect();
            return FaceDiagnostic {
                face: one_based,
                holds: false,
                h_cap_face_dim: 0,
                lattice_rank: lattice.len(),
                non_integral_preimage: Some(z),
            };
        }
    }
    FaceDiagnostic { face: one_based, holds: true, h_cap_face_dim: 0, lattice_rank: lattice.len(), non_integral_preimage: None }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Construction {
    I,
    II,
}

/// Numerical invariants of the quotient manifold.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ManifoldDescriptor {
    pub construction: Construction,
    pub dim_c_m: usize,
    /// Dimension of the torus acting effectively.
    pub dim_t: usize,
    pub max_stabilizer_dim: usize,
    pub foliation_dim: usize,
}

impl ManifoldDescriptor {
    /// `dim_ℝ M = dim T + dim T_x` for a maximal action.
    pub fn is_maximal(&self) -> bool {
        2 * self.dim_c_m == self.dim_t + self.max_stabilizer_dim
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionOutcome {
    /// Machine-readable code, e.g. `COND_B_NOT_COMPLETE`.
    pub code: &'static str,
    /// Human-readable name of the condition.
    pub name: &'static str,
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub construction: Construction,
    pub conditions: Vec<ConditionOutcome>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub descriptor: Option<ManifoldDescriptor>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.descriptor.is_some()
    }

    pub fn failed_codes(&self) -> Vec<&'static str> {
        self.conditions.iter().filter(|c| !c.holds).map(|c| c.code).collect()
    }

    fn push(&mut self, code: &'static str, name: &'static str, holds: bool, detail: Option<String>) {
        self.conditions.push(ConditionOutcome { code, name, holds, detail: if holds { None } else { detail } });
    }

    fn push_condition_b(&mut self, prefix: Construction, b: &ConditionB) {
        let (rank_name, fan_name, complete_name) = match prefix {
            Construction::I => (
                "Construction I (b): q injective on every cone",
                "Construction I (b): projected cones form a fan",
                "Construction I (b): projected fan complete",
            ),
            Construction::II => (
                "Construction II (b): q injective on every cone",
                "Construction II (b): projected cones form a fan",
                "Construction II (b): projected fan complete",
            ),
        };
        let d = b.diagnostic();
        self.push("COND_B_RANK", rank_name, b.rank_failures.is_empty(), d.clone());
        self.push("COND_B_FAN_INVALID", fan_name, b.validity.is_valid(), d.clone());
        if b.complete.is_some() {
            self.push("COND_B_NOT_COMPLETE", complete_name, b.complete == Some(true), d);
        }
    }
}

fn vectors_detail(label: &str, vs: &[Vec<Rational>]) -> String {
    let parts: Vec<String> =
        vs.iter().map(|v| format!("({})", v.iter().map(format_rational).collect::<Vec<_>>().join(", "))).collect();
    format!("{label}: {}", parts.join(", "))
}

/// Checks `(Σ, 𝔥)` for the second construction. Input errors (dimension
/// mismatch, symbolic data) are `Err`; failed conditions are recorded in
/// the report.
pub fn validate_construction_ii(fan: &Fan, h: &SubspaceData, seed: u64) -> Result<ValidationReport, QuotientError> {
    let h = h.exact()?;
    check_dims(fan.dim(), &h)?;
    let mut report = ValidationReport { construction: Construction::II, conditions: Vec::new(), descriptor: None };

    let validity = fan_validate(fan.geometry());
    report.push(
        "FAN_INVALID",
        "Fan: cones meet in common faces",
        validity.is_valid(),
        Some(format!(
            "cone pairs {:?}",
            validity.violating_pairs.iter().map(|(i, j)| (i + 1, j + 1)).collect::<Vec<_>>()
        )),
    );
    if !validity.is_valid() {
        return Ok(report);
    }
    let singular = fan.non_regular_cones();
    report.push(
        "FAN_NOT_REGULAR",
        "Construction II: V_Σ non-singular",
        singular.is_empty(),
        Some(format!("cones {:?}", singular.iter().map(|c| c + 1).collect::<Vec<_>>())),
    );

    let hc = check_h_cap_t(&h);
    report.push(
        "COND_A_H_CAP_T",
        "Construction II (a): 𝔥 ∩ 𝔱 = 0",
        hc.h_cap_t.is_empty(),
        Some(vectors_detail("𝔥 ∩ 𝔱 contains", &hc.h_cap_t)),
    );
    report.push(
        "COND_A_P_INJECTIVE",
        "Construction II (a): p restricted to 𝔥 injective",
        hc.h_cap_it.is_empty(),
        Some(vectors_detail("𝔥 ∩ i𝔱 contains i·", &hc.h_cap_it)),
    );

    let b = check_condition_b(fan, &h, seed)?;
    report.push_condition_b(Construction::II, &b);

    if report.conditions.iter().all(|c| c.holds) {
        let k = h.dim();
        let descriptor = ManifoldDescriptor {
            construction: Construction::II,
            dim_c_m: fan.dim() - k,
            dim_t: fan.dim(),
            max_stabilizer_dim: fan.max_cone_dim(),
            foliation_dim: k,
        };
        report.push("MAXIMALITY", "dim M = dim T + dim T_x", descriptor.is_maximal(), Some(format!("{descriptor:?}")));
        if descriptor.is_maximal() {
            report.descriptor = Some(descriptor);
        }
    }
    Ok(report)
}

/// Checks `(K, 𝔥)` for the first construction. The descriptor counts the
/// torus that acts effectively: `𝔥 ∩ 𝔱` exponentiates into the compact
/// torus `(S¹)^m` and acts trivially on the quotient.
pub fn validate_construction_i(
    k: &SimplicialComplex,
    h: &SubspaceData,
    seed: u64,
) -> Result<ValidationReport, QuotientError> {
    let h = h.exact()?;
    let mut report = ValidationReport { construction: Construction::I, conditions: Vec::new(), descriptor: None };
    let a = check_condition_a_i(k, &h)?;
    let failing = a.faces.iter().find(|f| !f.holds).map(|f| {
        let mut d = format!("face {:?}", f.face);
        if f.h_cap_face_dim > 0 {
            d.push_str(": 𝔥 meets the coordinate subspace of the face");
        } else if let Some(z) = &f.non_integral_preimage {
            d.push_str(&format!(": lattice point lifts to non-integral ({})", z.join(", ")));
        }
        d
    });
    report.push(
        "COND_A_I",
        "Construction I (a): exp 𝔥 meets coordinate subtori trivially",
        a.holds,
        failing,
    );

    let fan = fan_from_complex(k);
    let b = check_condition_b(&fan, &h, seed)?;
    report.push_condition_b(Construction::I, &b);

    if report.conditions.iter().all(|c| c.holds) {
        let real = check_h_cap_t(&h).h_cap_t.len();
        let m = k.vertex_count();
        let descriptor = ManifoldDescriptor {
            construction: Construction::I,
            dim_c_m: m - h.dim(),
            dim_t: m - real,
            max_stabilizer_dim: fan.max_cone_dim(),
            foliation_dim: h.dim() - real,
        };
        report.push("MAXIMALITY", "dim M = dim T + dim T_x", descriptor.is_maximal(), Some(format!("{descriptor:?}")));
        if descriptor.is_maximal() {
            report.descriptor = Some(descriptor);
        }
    }
    Ok(report)
}
