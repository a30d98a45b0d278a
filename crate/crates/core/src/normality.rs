//! Normal and weakly normal complete fans.
//!
//! For support numbers `b`, the vertex of a maximal cone `σ` is the solution
//! `u_σ` of `⟨v_i, u_σ⟩ + b_i = 0` over the rays of `σ`. It depends
//! linearly on `b`, so every condition below is a linear system in `b`.
//! Strict inequalities become `≥ 1`: the systems are invariant under
//! positive scaling.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::NormalityError;
use crate::fan::{fan_is_complete, RationalFan};
use crate::lp::{lp_solve, LinearProgram, LpOutcome};
use crate::matrix::{solve, RationalMatrix};
use crate::rational::{dot, format_rational, parse_rational, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormalityMode {
    Normal,
    WeaklyNormal,
}

/// Support numbers and the vertices they determine, one per maximal cone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalityCertificate {
    pub b: Vec<Rational>,
    pub vertices: Vec<Vec<Rational>>,
    /// A point with every slack `⟨v_i, u⟩ + b_i ≥ 1` (weak normality).
    pub interior_point: Option<Vec<Rational>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    /// 1-based cone and ray.
    pub cone: usize,
    pub ray: usize,
    pub value: String,
    pub reason: &'static str,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificateCheck {
    pub holds: bool,
    pub vertices: Vec<Vec<Rational>>,
    pub violations: Vec<Violation>,
    /// Weak mode: a point of `{u : ⟨v_i, u⟩ + b_i ≥ t}` with the largest
    /// `t ≤ 1`, and that `t`.
    pub interior: Option<(Vec<Rational>, Rational)>,
}

fn require_complete(fan: &RationalFan, seed: u64) -> Result<(), NormalityError> {
    if !fan_is_complete(fan, seed)? {
        return Err(NormalityError::NotComplete);
    }
    Ok(())
}

/// `V_σ⁻¹` per maximal cone, where the rows of `V_σ` are the rays of `σ`.
fn vertex_maps(fan: &RationalFan) -> Result<Vec<RationalMatrix>, NormalityError> {
    (0..fan.max_cones.len())
        .map(|c| {
            let v = RationalMatrix::from_rows(&fan.cone_generators(c), fan.dim);
            if v.rows() != fan.dim {
                return Err(NormalityError::SingularVertexSystem(c + 1));
            }
            v.inverse().ok_or(NormalityError::SingularVertexSystem(c + 1))
        })
        .collect()
}

/// Solves `⟨v_i, u_σ⟩ + b_i = 0` for every maximal cone.
pub fn fan_vertices(fan: &RationalFan, b: &[Rational]) -> Result<Vec<Vec<Rational>>, NormalityError> {
    if b.len() != fan.rays.len() {
        return Err(NormalityError::WrongLength { expected: fan.rays.len(), found: b.len() });
    }
    (0..fan.max_cones.len())
        .map(|c| {
            let v = RationalMatrix::from_rows(&fan.cone_generators(c), fan.dim);
            let rhs: Vec<Rational> = fan.max_cones[c].iter().map(|&i| -b[i].clone()).collect();
            if v.rows() != fan.dim {
                return Err(NormalityError::SingularVertexSystem(c + 1));
            }
            match solve(&v, &rhs) {
                Some(u) if crate::matrix::rank(&v) == fan.dim => Ok(u),
                _ => Err(NormalityError::SingularVertexSystem(c + 1)),
            }
        })
        .collect()
}

/// Coefficients over `b` of `⟨v_i, u_σ(b)⟩ + b_i`, using
/// `u_σ(b) = −V_σ⁻¹ b_σ`.
fn slack_row(fan: &RationalFan, inv: &RationalMatrix, cone: usize, ray: usize) -> Vec<Rational> {
    let mut row = vec![Rational::zero(); fan.rays.len()];
    row[ray] += Rational::one();
    let v = &fan.rays[ray];
    for (j, &r) in fan.max_cones[cone].iter().enumerate() {
        let coeff: Rational = (0..fan.dim).map(|k| &v[k] * &inv[(k, j)]).sum();
        row[r] -= coeff;
    }
    row
}

/// Largest `t ≤ 1` such that `{u : ⟨v_i, u⟩ + b_i ≥ t ∀i}` is nonempty,
/// with a witness `u`.
fn max_min_slack(fan: &RationalFan, b: &[Rational]) -> Option<(Vec<Rational>, Rational)> {
    let n = fan.dim;
    let mut lp = LinearProgram::new(n + 1);
    for (v, bi) in fan.rays.iter().zip(b) {
        let mut row = v.clone();
        row.push(-Rational::one());
        lp.ge(row, -bi.clone());
    }
    let mut cap = vec![Rational::zero(); n + 1];
    cap[n] = -Rational::one();
    lp.ge(cap.clone(), -Rational::one());
    let mut obj = vec![Rational::zero(); n + 1];
    obj[n] = Rational::one();
    lp.maximize(obj);
    match lp_solve(&lp) {
        LpOutcome::Optimal(s) => {
            let mut u = s.point;
            let t = u.pop().expect("slack variable");
            Some((u, t))
        }
        _ => None,
    }
}

/// Verifies support numbers `b` exactly.
pub fn check_certificate(
    fan: &RationalFan,
    b: &[Rational],
    mode: NormalityMode,
    seed: u64,
) -> Result<CertificateCheck, NormalityError> {
    require_complete(fan, seed)?;
    let vertices = fan_vertices(fan, b)?;
    let mut violations = Vec::new();
    for (c, u) in vertices.iter().enumerate() {
        for (i, v) in fan.rays.iter().enumerate() {
            let value = dot(v, u) + &b[i];
            let in_cone = fan.max_cones[c].contains(&i);
            let reason = if value.is_negative() {
                Some("negative")
            } else if mode == NormalityMode::Normal && !in_cone && value.is_zero() {
                Some("zero off the cone")
            } else {
                None
            };
            if let Some(reason) = reason {
                violations.push(Violation { cone: c + 1, ray: i + 1, value: format_rational(&value), reason });
            }
        }
    }
    let mut holds = violations.is_empty();
    let interior = match mode {
        NormalityMode::Normal => None,
        NormalityMode::WeaklyNormal => {
            let found = max_min_slack(fan, b);
            holds &= found.as_ref().is_some_and(|(_, t)| t.is_positive());
            found
        }
    };
    Ok(CertificateCheck { holds, vertices, violations, interior })
}

/// Finds support numbers making the fan normal, or `None`. The first
/// maximal cone's support numbers are fixed to 0, which loses nothing:
/// adding `⟨c, v_i⟩` to every `b_i` moves all vertices by `−c`.
pub fn decide_normal(fan: &RationalFan, seed: u64) -> Result<Option<NormalityCertificate>, NormalityError> {
    require_complete(fan, seed)?;
    let inv = vertex_maps(fan)?;
    let m = fan.rays.len();
    let mut lp = LinearProgram::new(m);
    gauge_fix(fan, &mut lp, m);
    for c in 0..fan.max_cones.len() {
        for i in (0..m).filter(|i| !fan.max_cones[c].contains(i)) {
            lp.ge(slack_row(fan, &inv[c], c, i), Rational::one());
        }
    }
    let Some(sol) = lp_solve(&lp).optimal().cloned() else {
        return Ok(None);
    };
    let b = sol.point;
    let check = check_certificate(fan, &b, NormalityMode::Normal, seed)?;
    if !check.holds {
        return Err(NormalityError::CertificateRejected);
    }
    Ok(Some(NormalityCertificate { b, vertices: check.vertices, interior_point: None }))
}

/// Finds `(b, u*)` with all vertex slacks `≥ 0` and all slacks at `u*`
/// `≥ 1`, or `None`.
pub fn decide_weakly_normal(fan: &RationalFan, seed: u64) -> Result<Option<NormalityCertificate>, NormalityError> {
    require_complete(fan, seed)?;
    let inv = vertex_maps(fan)?;
    let (m, n) = (fan.rays.len(), fan.dim);
    let mut lp = LinearProgram::new(m + n);
    gauge_fix(fan, &mut lp, m + n);
    for c in 0..fan.max_cones.len() {
        for i in (0..m).filter(|i| !fan.max_cones[c].contains(i)) {
            let mut row = slack_row(fan, &inv[c], c, i);
            row.resize(m + n, Rational::zero());
            lp.ge(row, Rational::zero());
        }
    }
    for (i, v) in fan.rays.iter().enumerate() {
        let mut row = vec![Rational::zero(); m + n];
        row[i] = Rational::one();
        row[m..].clone_from_slice(v);
        lp.ge(row, Rational::one());
    }
    let Some(sol) = lp_solve(&lp).optimal().cloned() else {
        return Ok(None);
    };
    let b = sol.point[..m].to_vec();
    let u_star = sol.point[m..].to_vec();
    let check = check_certificate(fan, &b, NormalityMode::WeaklyNormal, seed)?;
    let interior_ok = fan.rays.iter().zip(&b).all(|(v, bi)| dot(v, &u_star) + bi >= Rational::one());
    if !check.holds || !interior_ok {
        return Err(NormalityError::CertificateRejected);
    }
    Ok(Some(NormalityCertificate { b, vertices: check.vertices, interior_point: Some(u_star) }))
}

fn gauge_fix(fan: &RationalFan, lp: &mut LinearProgram, vars: usize) {
    if let Some(first) = fan.max_cones.first() {
        for &i in first {
            let mut row = vec![Rational::zero(); vars];
            row[i] = Rational::one();
            lp.equal(row, Rational::zero());
        }
    }
}

/// Cone key used in certificate JSON: 1-based ray indices joined by commas.
pub fn cone_key(cone: &[usize]) -> String {
    cone.iter().map(|r| (r + 1).to_string()).collect::<Vec<_>>().join(",")
}

/// Certificate JSON: `{"b": [...], "vertices": {"1,2,3": [...]}}`. The
/// vertex map is keyed by cone, in the fan's cone order.
pub fn certificate_json(fan: &RationalFan, cert: &NormalityCertificate) -> serde_json::Value {
    let mut vertices = serde_json::Map::new();
    for (c, u) in fan.max_cones.iter().zip(&cert.vertices) {
        vertices.insert(cone_key(c), u.iter().map(format_rational).collect::<Vec<_>>().into());
    }
    let mut out = serde_json::Map::new();
    out.insert("b".into(), cert.b.iter().map(format_rational).collect::<Vec<_>>().into());
    out.insert("vertices".into(), vertices.into());
    if let Some(u) = &cert.interior_point {
        out.insert("interior_point".into(), u.iter().map(format_rational).collect::<Vec<_>>().into());
    }
    serde_json::Value::Object(out)
}

#[derive(Deserialize)]
struct CertificateRepr {
    #[serde(with = "crate::rational::serde_rational_vec")]
    b: Vec<Rational>,
    #[serde(default)]
    vertices: Option<serde_json::Map<String, serde_json::Value>>,
}

/// Reads support numbers from certificate JSON. Listed vertices must agree
/// with the ones `b` determines.
pub fn parse_certificate(fan: &RationalFan, text: &str) -> Result<Vec<Rational>, String> {
    let repr: CertificateRepr = serde_json::from_str(text).map_err(|e| e.to_string())?;
    if let Some(listed) = repr.vertices {
        let computed = fan_vertices(fan, &repr.b).map_err(|e| e.to_string())?;
        for (key, value) in listed {
            let c = fan
                .max_cones
                .iter()
                .position(|c| cone_key(c) == key)
                .ok_or_else(|| format!("certificate lists unknown cone {key:?}"))?;
            let entries = value.as_array().ok_or_else(|| format!("vertex of cone {key:?} is not a list"))?;
            let u: Result<Vec<Rational>, String> = entries
                .iter()
                .map(|e| match e {
                    serde_json::Value::String(s) => parse_rational(s).map_err(|e| e.to_string()),
                    serde_json::Value::Number(n) => {
                        n.as_i64().map(crate::rational::rat).ok_or_else(|| format!("bad number {n}"))
                    }
                    other => Err(format!("bad vertex entry {other}")),
                })
                .collect();
            if u? != computed[c] {
                return Err(format!("listed vertex of cone {key:?} does not solve its vertex system"));
            }
        }
    }
    Ok(repr.b)
}
