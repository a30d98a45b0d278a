//! Chart potentials `Φ_σ = Σ_τ χ_{w_τ}` and the transverse-Kähler form
//! `dd^c log Φ_σ` on the open orbit.
//!
//! Convention: `exp(x) = (e^{2πi x_j})`, and a point of the open orbit is
//! described by `y ∈ 𝔱` with `|z_j| = e^{−2π y_j}`, so that
//! `χ_w = e^{−2π⟨w, y⟩}`. Character data is exact; evaluation is in `f64`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};
use serde::Serialize;

use crate::error::{QuotientError, TkError};
use crate::fan::{Fan, RationalFan};
use crate::matrix::RationalMatrix;
use crate::normality::{check_certificate, decide_weakly_normal, fan_vertices, NormalityMode};
use crate::quotient::{check_condition_b, projection_p};
use crate::rational::{dot, format_rational, to_f64, to_f64_vec, Rational};
use crate::sampling::{random_float_point, seeded_rng};
use crate::subspace::ComplexSubspace;

/// `Q(v) = ρ · d²/dλ² log Φ(y − λv/2π)`: the ordered-pair sum counts every
/// unordered pair twice, and the second derivative of log-sum-exp is half
/// that sum.
pub const HESSIAN_FD_FACTOR: f64 = 2.0;

/// Relative tolerances for every floating-point comparison.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TkTolerances {
    pub kernel: f64,
    pub angle: f64,
    pub cocycle: f64,
    pub fd: f64,
}

impl Default for TkTolerances {
    fn default() -> Self {
        Self { kernel: 1e-8, angle: 1e-6, cocycle: 1e-9, fd: 1e-4 }
    }
}

/// Characters of one chart.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TkFormData {
    /// 0-based rays of the chart cone `σ`.
    pub chart: Vec<usize>,
    /// `w_τ = κ(qᵀu_τ + b_σ)`, one per maximal cone `τ` of `q(Σ)`.
    pub characters: Vec<Vec<Rational>>,
    /// `b_σ`, unscaled.
    pub shift: Vec<Rational>,
    pub kappa: BigInt,
}

/// Everything shared by the charts of one `(Σ, 𝔥, b)`.
#[derive(Clone, Debug)]
pub struct TkContext {
    pub fan: Fan,
    pub q: RationalMatrix,
    pub projected: RationalFan,
    pub p_h: Vec<Vec<Rational>>,
    pub b: Vec<Rational>,
    /// `u_τ` per maximal cone of `q(Σ)`.
    pub vertices: Vec<Vec<Rational>>,
    /// `qᵀu_τ`.
    pub pulled_back: Vec<Vec<Rational>>,
    pub kappa: BigInt,
}

/// Smallest positive integer `κ` with every `κ·p` equal to 0 or `≥ k`.
pub fn choose_smoothness_scale(pairings: &[Rational], k: u32) -> Result<BigInt, TkError> {
    let k = Rational::from_integer(k.into());
    let mut kappa = BigInt::one();
    for (i, p) in pairings.iter().enumerate() {
        if p.is_negative() {
            return Err(TkError::CharacterOutsideDualCone { ray: i + 1, value: format_rational(p) });
        }
        if p.is_positive() {
            kappa = kappa.max((&k / p).ceil().to_integer());
        }
    }
    Ok(kappa)
}

/// `b_σ = Gᵀ(GGᵀ)⁻¹ b|_σ`, the minimum-norm solution of `⟨b_σ, a_i⟩ = b_i`
/// over the rays `a_i` of `σ`.
pub fn chart_shift(fan: &Fan, b: &[Rational], chart: &[usize]) -> Result<Vec<Rational>, TkError> {
    let n = fan.dim();
    let rows: Vec<Vec<Rational>> = chart.iter().map(|&i| fan.geometry().rays[i].clone()).collect();
    let g = RationalMatrix::from_rows(&rows, n);
    let gram = g.mul(&g.transpose());
    let inv = gram.inverse().ok_or_else(|| TkError::InfeasibleShift(chart.iter().map(|i| i + 1).collect()))?;
    let rhs: Vec<Rational> = chart.iter().map(|&i| b[i].clone()).collect();
    Ok(g.transpose().mul_vec(&inv.mul_vec(&rhs)))
}

impl TkContext {
    /// Computes `q`, checks that `q(Σ)` is a complete fan, and takes `b`
    /// (verified) or finds one. `k` is the smoothness order.
    pub fn new(
        fan: &Fan,
        h: &ComplexSubspace,
        b: Option<Vec<Rational>>,
        k: u32,
        seed: u64,
    ) -> Result<Self, TkError> {
        let cond = check_condition_b(fan, h, seed)?;
        if !cond.holds() {
            return Err(TkError::Quotient(QuotientError::Rejected(
                cond.diagnostic().unwrap_or_else(|| "condition (b) fails".into()),
            )));
        }
        let projected = cond.projected;
        let b = match b {
            Some(b) => {
                let check = check_certificate(&projected, &b, NormalityMode::WeaklyNormal, seed)?;
                if !check.holds {
                    return Err(TkError::NotWeaklyNormal);
                }
                b
            }
            None => decide_weakly_normal(&projected, seed)?.ok_or(TkError::NotWeaklyNormal)?.b,
        };
        let vertices = fan_vertices(&projected, &b)?;
        let qt = cond.q.transpose();
        let pulled_back = vertices.iter().map(|u| qt.mul_vec(u)).collect();
        let mut ctx = Self {
            fan: fan.clone(),
            q: cond.q,
            projected,
            p_h: projection_p(h),
            b,
            vertices,
            pulled_back,
            kappa: BigInt::one(),
        };
        for c in 0..fan.max_cones().len() {
            let chart = fan.max_cones()[c].clone();
            let shift = chart_shift(fan, &ctx.b, &chart)?;
            let pairings = ctx.pairings(&chart, &shift);
            ctx.kappa = ctx.kappa.clone().max(choose_smoothness_scale(&pairings, k)?);
        }
        Ok(ctx)
    }

    /// `⟨qᵀu_τ + b_σ, a_i⟩` for all `τ` and all rays `a_i` of `σ`.
    fn pairings(&self, chart: &[usize], shift: &[Rational]) -> Vec<Rational> {
        let rays = &self.fan.geometry().rays;
        let mut out = Vec::new();
        for w in &self.pulled_back {
            for &i in chart {
                out.push(dot(w, &rays[i]) + dot(shift, &rays[i]));
            }
        }
        out
    }

    /// Character data for the chart of a cone of `Σ` (0-based rays).
    pub fn chart(&self, chart: &[usize]) -> Result<TkFormData, TkError> {
        let mut chart = chart.to_vec();
        chart.sort_unstable();
        chart.dedup();
        if !self.fan.has_cone(&chart) {
            return Err(TkError::UnknownChart(chart.iter().map(|i| i + 1).collect()));
        }
        let shift = chart_shift(&self.fan, &self.b, &chart)?;
        for (idx, p) in self.pairings(&chart, &shift).iter().enumerate() {
            if p.is_negative() {
                return Err(TkError::CharacterOutsideDualCone {
                    ray: chart[idx % chart.len().max(1)] + 1,
                    value: format_rational(p),
                });
            }
        }
        let kappa = Rational::from_integer(self.kappa.clone());
        let characters = self
            .pulled_back
            .iter()
            .map(|w| w.iter().zip(&shift).map(|(a, s)| (a + s) * &kappa).collect())
            .collect();
        Ok(TkFormData { chart, characters, shift, kappa: self.kappa.clone() })
    }
}

impl TkFormData {
    fn exponents(&self, y: &[f64]) -> Vec<f64> {
        self.characters.iter().map(|w| -2.0 * std::f64::consts::PI * dot_f64(&to_f64_vec(w), y)).collect()
    }

    /// Normalized weights `χ_τ / Φ`.
    fn weights(&self, y: &[f64]) -> Vec<f64> {
        let e = self.exponents(y);
        let max = e.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let raw: Vec<f64> = e.iter().map(|x| (x - max).exp()).collect();
        let total: f64 = raw.iter().sum();
        raw.into_iter().map(|x| x / total).collect()
    }
}

fn dot_f64(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `log Φ(y)` by log-sum-exp, with `ln_1p` over the non-dominant terms.
pub fn log_phi(data: &TkFormData, y: &[f64]) -> f64 {
    let e = data.exponents(y);
    let k = (0..e.len()).fold(0, |k, i| if e[i] > e[k] { i } else { k });
    let rest: f64 = (0..e.len()).filter(|&i| i != k).map(|i| (e[i] - e[k]).exp()).sum();
    e[k] + rest.ln_1p()
}

pub fn evaluate_phi(data: &TkFormData, y: &[f64]) -> f64 {
    log_phi(data, y).exp()
}

/// `(1/Φ²) Σ_{τ₁,τ₂} χ_{τ₁}χ_{τ₂} (w_{τ₁} − w_{τ₂})(w_{τ₁} − w_{τ₂})ᵀ`, over
/// ordered pairs.
pub fn hessian_at(data: &TkFormData, y: &[f64]) -> DMatrix<f64> {
    let n = y.len();
    let p = data.weights(y);
    let mut h = DMatrix::<f64>::zeros(n, n);
    for (i, wi) in data.characters.iter().enumerate() {
        for (j, wj) in data.characters.iter().enumerate() {
            if i == j {
                continue;
            }
            let d: Vec<f64> = wi.iter().zip(wj).map(|(a, b)| to_f64(&(a - b))).collect();
            let d = DVector::from_vec(d);
            h += (p[i] * p[j]) * &d * d.transpose();
        }
    }
    h
}

/// `Q(v)` with each pairing `⟨w_{τ₁} − w_{τ₂}, v⟩` computed exactly, so it
/// is exactly 0 on `p(𝔥)`.
pub fn quadratic_form(data: &TkFormData, y: &[f64], v: &[Rational]) -> f64 {
    let p = data.weights(y);
    let mut total = 0.0;
    for (i, wi) in data.characters.iter().enumerate() {
        for (j, wj) in data.characters.iter().enumerate() {
            let diff: Vec<Rational> = wi.iter().zip(wj).map(|(a, b)| a - b).collect();
            let s = to_f64(&dot(&diff, v));
            total += p[i] * p[j] * s * s;
        }
    }
    total
}

/// Second derivative of `λ ↦ log Φ(y − λv/2π)` by central differences,
/// Richardson-extrapolated once. The step moves `log|z|` by `λv`. The
/// exponent of the character dominant at `y` is linear in `λ` and is
/// subtracted first, which leaves the second derivative unchanged and keeps
/// the differenced values small.
pub fn hessian_fd_oracle(data: &TkFormData, y: &[f64], v: &[f64], step: f64) -> f64 {
    let base = data.exponents(y);
    let slopes: Vec<f64> = data.characters.iter().map(|w| dot_f64(&to_f64_vec(w), v)).collect();
    let k = (0..base.len()).fold(0, |k, i| if base[i] > base[k] { i } else { k });
    let f = |l: f64| {
        let rest: f64 = (0..base.len())
            .filter(|&i| i != k)
            .map(|i| ((base[i] - base[k]) + l * (slopes[i] - slopes[k])).exp())
            .sum();
        rest.ln_1p()
    };
    let f0 = f(0.0);
    let d = |s: f64| (f(s) - 2.0 * f0 + f(-s)) / (s * s);
    (4.0 * d(step / 2.0) - d(step)) / 3.0
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HessianReport {
    pub y: Vec<f64>,
    pub eigenvalues: Vec<f64>,
    pub kernel_basis: Vec<Vec<f64>>,
    pub kernel_dim: usize,
    pub expected_kernel_dim: usize,
    /// Principal angles between the numerical kernel and `p(𝔥)`, when the
    /// dimensions agree.
    pub principal_angles: Vec<f64>,
    pub max_angle: f64,
    pub psd: bool,
    /// Largest `Q(v)` over the exact basis of `p(𝔥)`.
    pub exact_kernel_residual: f64,
    pub passes: bool,
}

/// Orthonormal basis of the span of the given rows.
fn orthonormal(rows: &[Vec<f64>], n: usize) -> DMatrix<f64> {
    if rows.is_empty() {
        return DMatrix::zeros(n, 0);
    }
    let m = DMatrix::from_fn(n, rows.len(), |r, c| rows[c][r]);
    let qr = m.qr();
    qr.q().columns(0, rows.len()).into_owned()
}

/// Principal angles between the column spans of orthonormal `a` and `b`
/// of equal width, from the singular values of `(I − bbᵀ)a`, which keeps
/// small angles accurate.
fn principal_angles(a: &DMatrix<f64>, b: &DMatrix<f64>) -> Vec<f64> {
    if a.ncols() == 0 {
        return Vec::new();
    }
    let residual = a - b * (b.transpose() * a);
    let mut s: Vec<f64> = residual.svd(false, false).singular_values.iter().map(|x| x.min(1.0).asin()).collect();
    s.sort_by(|x, y| x.partial_cmp(y).expect("finite angle"));
    s
}

pub fn kernel_check(data: &TkFormData, y: &[f64], p_h: &[Vec<Rational>], tol: &TkTolerances) -> HessianReport {
    let n = y.len();
    let h = hessian_at(data, y);
    let eig = SymmetricEigen::new(h);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].partial_cmp(&eig.eigenvalues[j]).expect("finite eigenvalue"));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let lambda_max = eigenvalues.iter().cloned().fold(0.0, |a: f64, b| a.max(b.abs()));
    let threshold = tol.kernel * lambda_max;
    let kernel_idx: Vec<usize> = order.iter().copied().filter(|&i| eig.eigenvalues[i].abs() <= threshold).collect();
    let kernel_basis: Vec<Vec<f64>> =
        kernel_idx.iter().map(|&i| eig.eigenvectors.column(i).iter().copied().collect()).collect();
    let psd = eigenvalues.first().map_or(true, |&l| l >= -threshold);

    let expected_kernel_dim = p_h.len();
    let reference = orthonormal(&p_h.iter().map(|v| to_f64_vec(v)).collect::<Vec<_>>(), n);
    let kernel = orthonormal(&kernel_basis, n);
    let (principal_angles, max_angle) = if kernel_basis.len() == expected_kernel_dim {
        let a = principal_angles(&kernel, &reference);
        let m = a.iter().cloned().fold(0.0, f64::max);
        (a, m)
    } else {
        (Vec::new(), std::f64::consts::FRAC_PI_2)
    };
    let exact_kernel_residual = p_h.iter().map(|v| quadratic_form(data, y, v).abs()).fold(0.0, f64::max);
    let passes = psd && kernel_basis.len() == expected_kernel_dim && max_angle < tol.angle && exact_kernel_residual == 0.0;
    HessianReport {
        y: y.to_vec(),
        eigenvalues,
        kernel_dim: kernel_basis.len(),
        kernel_basis,
        expected_kernel_dim,
        principal_angles,
        max_angle,
        psd,
        exact_kernel_residual,
        passes,
    }
}

/// Largest relative gap between `vᵀHv` and `ρ` times the finite-difference
/// second derivative, over `count` seeded unit directions. The gap is
/// divided by `max(|vᵀHv|, 10⁻³ max|H_ij|)`, since directions close to the
/// kernel leave only roundoff.
pub fn fd_relative_error(data: &TkFormData, y: &[f64], count: usize, seed: u64) -> f64 {
    let n = y.len();
    let h = hessian_at(data, y);
    let scale = h.iter().fold(0.0f64, |a, b| a.max(b.abs()));
    // curvature grows with the spread of the characters; keep the step at a
    // fixed fraction of its length scale so roundoff stays below truncation
    let spread = data
        .characters
        .iter()
        .flat_map(|a| data.characters.iter().map(move |b| (a, b)))
        .flat_map(|(a, b)| a.iter().zip(b).map(|(x, y)| to_f64(&(x - y)).abs()))
        .fold(1.0f64, f64::max);
    let step = 1e-2 / spread;
    let mut rng = seeded_rng(seed);
    let mut worst = 0.0f64;
    for _ in 0..count {
        let mut v = random_float_point(&mut rng, n, 1.0);
        let norm = dot_f64(&v, &v).sqrt();
        v.iter_mut().for_each(|x| *x /= norm);
        let vv = DVector::from_vec(v.clone());
        let exact = (vv.transpose() * &h * &vv)[(0, 0)];
        let fd = HESSIAN_FD_FACTOR * hessian_fd_oracle(data, y, &v, step);
        let denom = exact.abs().max(1e-3 * scale).max(f64::MIN_POSITIVE);
        worst = worst.max((exact - fd).abs() / denom);
    }
    worst
}

/// Largest `|log Φ_{σ₁}(y) − log Φ_{σ₂}(y) + 2πκ⟨b_{σ₁} − b_{σ₂}, y⟩|` over
/// seeded points. Both sums run over the same maximal cones of `q(Σ)`, and
/// matching characters differ by `κ(b_{σ₁} − b_{σ₂})`.
pub fn cocycle_check(d1: &TkFormData, d2: &TkFormData, count: usize, seed: u64, scale: f64) -> Result<f64, TkError> {
    if d1.kappa != d2.kappa {
        return Err(TkError::ScaleMismatch);
    }
    let kappa = d1.kappa.to_f64().unwrap_or(f64::INFINITY);
    let diff: Vec<f64> = d1.shift.iter().zip(&d2.shift).map(|(a, b)| to_f64(&(a - b))).collect();
    let mut rng = seeded_rng(seed);
    let mut worst = 0.0f64;
    for _ in 0..count {
        let y = random_float_point(&mut rng, diff.len(), scale);
        let dev = log_phi(d1, &y) - log_phi(d2, &y) + 2.0 * std::f64::consts::PI * kappa * dot_f64(&diff, &y);
        worst = worst.max(dev.abs());
    }
    Ok(worst)
}

/// Least common multiple of the character denominators.
pub fn character_denominator(data: &TkFormData) -> BigInt {
    data.characters.iter().flatten().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_vec, ratio};
    use crate::sampling::DEFAULT_SEED;

    fn hopf() -> (Fan, ComplexSubspace) {
        (
            Fan::from_i64(3, &[&[1, 0, 0], &[0, 1, 0]], &[&[0], &[1]]).unwrap(),
            ComplexSubspace::from_pairs(3, &[&[(0, 1), (0, 1), (-1, 0)]]).unwrap(),
        )
    }

    fn cp2() -> Fan {
        Fan::from_i64(2, &[&[1, 0], &[0, 1], &[-1, -1]], &[&[0, 1], &[1, 2], &[0, 2]]).unwrap()
    }

    fn data(chars: &[&[i64]]) -> TkFormData {
        TkFormData {
            chart: vec![],
            characters: chars.iter().map(|c| rat_vec(c)).collect(),
            shift: vec![rat(0); chars[0].len()],
            kappa: BigInt::one(),
        }
    }

    #[test]
    fn smoothness_scale() {
        assert_eq!(choose_smoothness_scale(&[rat(0), ratio(1, 2), rat(2)], 2).unwrap(), BigInt::from(4));
        assert_eq!(choose_smoothness_scale(&[rat(0), rat(0)], 2).unwrap(), BigInt::one());
        assert_eq!(choose_smoothness_scale(&[rat(0), rat(3)], 2).unwrap(), BigInt::one());
        assert!(choose_smoothness_scale(&[rat(-1)], 2).is_err());
    }

    #[test]
    fn hopf_characters() {
        let (fan, h) = hopf();
        let ctx = TkContext::new(&fan, &h, Some(rat_vec(&[0, 1])), 1, DEFAULT_SEED).unwrap();
        assert_eq!(ctx.q, RationalMatrix::from_i64(&[&[1, -1, 0]]));
        assert_eq!(ctx.vertices, vec![rat_vec(&[0]), rat_vec(&[1])]);
        let d = ctx.chart(&[0]).unwrap();
        assert_eq!(d.shift, rat_vec(&[0, 0, 0]));
        assert_eq!(d.characters, vec![rat_vec(&[0, 0, 0]), rat_vec(&[1, -1, 0])]);
        assert!(matches!(ctx.chart(&[0, 1]), Err(TkError::UnknownChart(_))));
    }

    #[test]
    fn cp2_characters_pair_nonnegatively() {
        let f = cp2();
        let ctx = TkContext::new(&f, &ComplexSubspace::zero(2), Some(rat_vec(&[0, 0, 1])), 1, DEFAULT_SEED).unwrap();
        for c in f.max_cones() {
            let d = ctx.chart(c).unwrap();
            for w in &d.characters {
                for &i in c {
                    assert!(dot(w, &f.geometry().rays[i]) >= rat(0));
                }
            }
        }
    }

    #[test]
    fn zero_certificate_gives_constant_potential() {
        let f = cp2();
        let ctx = TkContext::new(&f, &ComplexSubspace::zero(2), Some(rat_vec(&[0, 0, 0])), 1, DEFAULT_SEED);
        // b = 0 is not weakly normal (no interior point), so it is refused
        assert!(matches!(ctx, Err(TkError::NotWeaklyNormal)));
        let d = data(&[&[0, 0], &[0, 0], &[0, 0]]);
        assert!((evaluate_phi(&d, &[0.3, -0.2]) - 3.0).abs() < 1e-12);
    }

    #[test]
    fn phi_examples() {
        let single = data(&[&[0]]);
        assert!((evaluate_phi(&single, &[5.0]) - 1.0).abs() < 1e-15);
        let two = data(&[&[1], &[0]]);
        let t = 0.1;
        let expected = (-2.0 * std::f64::consts::PI * t).exp() + 1.0;
        assert!((evaluate_phi(&two, &[t]) - expected).abs() < 1e-12);
        assert!(evaluate_phi(&two, &[0.2]) < evaluate_phi(&two, &[0.1]));
        // overflow safety
        assert!(log_phi(&two, &[-1000.0]).is_finite());
    }

    #[test]
    fn hessian_examples() {
        let single = data(&[&[1, 2]]);
        assert_eq!(hessian_at(&single, &[0.1, 0.2]), DMatrix::zeros(2, 2));
        let two = data(&[&[1, 0], &[0, 0]]);
        let h = hessian_at(&two, &[0.0, 0.0]);
        assert!((h[(0, 0)] - 0.5).abs() < 1e-15);
        assert_eq!(h[(1, 1)], 0.0);
    }

    #[test]
    fn fd_oracle_examples() {
        let single = data(&[&[3]]);
        assert!(hessian_fd_oracle(&single, &[0.2], &[1.0], 1e-3).abs() < 1e-6);
        let two = data(&[&[1], &[0]]);
        let y = 0.05;
        let x = -2.0 * std::f64::consts::PI * y;
        let s = x.exp() / (1.0 + x.exp());
        let closed = s * (1.0 - s);
        let fd = hessian_fd_oracle(&two, &[y], &[1.0], 1e-3);
        assert!((fd - closed).abs() / closed < 1e-6);
        let (fan, h) = hopf();
        let ctx = TkContext::new(&fan, &h, None, 1, DEFAULT_SEED).unwrap();
        let d = ctx.chart(&[0]).unwrap();
        for v in &ctx.p_h {
            assert!(hessian_fd_oracle(&d, &[0.1, -0.3, 0.2], &to_f64_vec(v), 1e-3).abs() < 1e-6);
        }
    }

    #[test]
    fn hopf_kernel() {
        let (fan, h) = hopf();
        let ctx = TkContext::new(&fan, &h, None, 1, DEFAULT_SEED).unwrap();
        let d = ctx.chart(&[1]).unwrap();
        let mut rng = seeded_rng(DEFAULT_SEED);
        for _ in 0..20 {
            let y = random_float_point(&mut rng, 3, 0.3);
            let r = kernel_check(&d, &y, &ctx.p_h, &TkTolerances::default());
            assert!(r.passes, "{r:?}");
            assert_eq!(r.kernel_dim, 2);
        }
    }

    #[test]
    fn cp2_is_kahler_on_the_orbit() {
        let f = cp2();
        let ctx = TkContext::new(&f, &ComplexSubspace::zero(2), None, 1, DEFAULT_SEED).unwrap();
        let d = ctx.chart(&[0, 1]).unwrap();
        let r = kernel_check(&d, &[0.1, 0.2], &ctx.p_h, &TkTolerances::default());
        assert!(r.passes);
        assert_eq!(r.kernel_dim, 0);
        assert!(r.eigenvalues[0] > 0.0);
    }

    #[test]
    fn cocycle() {
        let (fan, h) = hopf();
        let ctx = TkContext::new(&fan, &h, None, 1, DEFAULT_SEED).unwrap();
        let (a, b) = (ctx.chart(&[0]).unwrap(), ctx.chart(&[1]).unwrap());
        assert_eq!(cocycle_check(&a, &a, 10, DEFAULT_SEED, 0.3).unwrap(), 0.0);
        assert!(cocycle_check(&a, &b, 50, DEFAULT_SEED, 0.3).unwrap() < 1e-9);
    }
}
