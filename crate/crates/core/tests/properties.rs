mod common;

use nalgebra::DVector;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use rand::Rng;

use maxtorus::fan::{fan_from_complex, fan_is_complete, fan_validate, point_in_support, uncovered_witness, underlying_complex, Fan};
use maxtorus::normality::{check_certificate, decide_normal, decide_weakly_normal, NormalityMode};
use maxtorus::rational::{dot, ratio, to_f64_vec, Rational};
use maxtorus::sampling::{random_float_point, random_rational_point, random_rational_points, seeded_rng};
use maxtorus::subspace::ComplexSubspace;
use maxtorus::tkform::{hessian_at, hessian_fd_oracle, kernel_check, quadratic_form, TkContext, TkTolerances, HESSIAN_FD_FACTOR};

use common::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn complex_fan_round_trip(seed in any::<u64>(), m in 1usize..7) {
        let mut rng = seeded_rng(seed);
        let k = random_complex(&mut rng, m).without_ghosts();
        let fan = fan_from_complex(&k);
        prop_assert!(fan_validate(fan.geometry()).is_valid());
        prop_assert_eq!(underlying_complex(&fan).unwrap(), k);
        let text = serde_json::to_string(&fan).unwrap();
        let back: Fan = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, fan);
    }

    #[test]
    fn polygon_fans_round_trip(seed in any::<u64>()) {
        let mut rng = seeded_rng(seed);
        let fan = smooth_polygon_fan(&mut rng, 4);
        prop_assert!(fan.is_regular());
        let back: Fan = serde_json::from_str(&serde_json::to_string(&fan).unwrap()).unwrap();
        prop_assert_eq!(&back, &fan);
        prop_assert_eq!(underlying_complex(&fan_from_complex(&underlying_complex(&fan).unwrap())).unwrap(),
            underlying_complex(&fan).unwrap());
    }

    #[test]
    fn certificate_transformations(seed in any::<u64>(), c in proptest::collection::vec((-20i64..20, 1i64..7), 2), scale in (1i64..9, 1i64..5)) {
        let mut rng = seeded_rng(seed);
        let fan = smooth_polygon_fan(&mut rng, 3);
        let g = fan.geometry();
        let cert = decide_normal(g, seed).unwrap().expect("complete planar fans are normal");
        let c: Vec<Rational> = c.iter().map(|&(n, d)| ratio(n, d)).collect();
        let lambda = ratio(scale.0, scale.1);
        // b ↦ b + ⟨c, v⟩ moves every vertex by −c
        let shifted: Vec<Rational> = g.rays.iter().zip(&cert.b).map(|(v, b)| b + dot(&c, v)).collect();
        let scaled: Vec<Rational> = cert.b.iter().map(|b| b * &lambda).collect();
        for mode in [NormalityMode::Normal, NormalityMode::WeaklyNormal] {
            let base = check_certificate(g, &cert.b, mode, seed).unwrap();
            let s = check_certificate(g, &shifted, mode, seed).unwrap();
            let t = check_certificate(g, &scaled, mode, seed).unwrap();
            prop_assert!(base.holds && s.holds && t.holds);
            for ((u, us), ut) in base.vertices.iter().zip(&s.vertices).zip(&t.vertices) {
                let expect_shift: Vec<Rational> = u.iter().zip(&c).map(|(a, b)| a - b).collect();
                let expect_scale: Vec<Rational> = u.iter().map(|a| a * &lambda).collect();
                prop_assert_eq!(us, &expect_shift);
                prop_assert_eq!(ut, &expect_scale);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn completeness_implies_full_support(seed in any::<u64>(), drop in any::<bool>()) {
        let mut rng = seeded_rng(seed);
        let mut fan = smooth_polygon_fan(&mut rng, 2);
        if rng.gen_bool(0.5) {
            fan = product(&fan, &Fan::from_i64(1, &[&[1], &[-1]], &[&[0], &[1]]).unwrap());
        }
        if drop {
            let mut cones = fan.max_cones().to_vec();
            cones.remove(rng.gen_range(0..cones.len()));
            fan = Fan::new(fan.dim(), fan.rays().to_vec(), cones).unwrap();
        }
        let g = fan.geometry();
        let complete = fan_is_complete(g, seed).unwrap();
        prop_assert_eq!(complete, !drop);
        if complete {
            for x in random_rational_points(seed, g.dim, 1000) {
                prop_assert!(point_in_support(g, &x).is_some());
            }
        } else {
            let w = uncovered_witness(g, seed).expect("an incomplete fan misses some point");
            prop_assert!(point_in_support(g, &w).is_none());
        }
    }
}

/// Normality of a complete planar fan as a linear system in `b`, built
/// from explicit 2×2 inverses and decided by elimination.
fn normal_by_elimination(fan: &Fan) -> bool {
    let g = fan.geometry();
    let m = g.rays.len();
    let mut rows = Vec::new();
    for cone in &g.max_cones {
        let (i, j) = (cone[0], cone[1]);
        let (vi, vj) = (&g.rays[i], &g.rays[j]);
        let det = &vi[0] * &vj[1] - &vi[1] * &vj[0];
        // u = −V⁻¹ (b_i, b_j) with V = [vi; vj]
        let inv = [[&vj[1] / &det, -&vi[1] / &det], [-&vj[0] / &det, &vi[0] / &det]];
        for k in (0..m).filter(|k| !cone.contains(k)) {
            let vk = &g.rays[k];
            let mut a = vec![Rational::zero(); m];
            a[k] += Rational::from_integer(1.into());
            for r in 0..2 {
                a[i] -= &vk[r] * &inv[r][0];
                a[j] -= &vk[r] * &inv[r][1];
            }
            rows.push((a, Rational::from_integer(1.into())));
        }
    }
    // gauge: b = 0 on the first cone
    let fixed = &g.max_cones[0];
    let free: Vec<usize> = (0..m).filter(|k| !fixed.contains(k)).collect();
    let rows = rows.into_iter().map(|(a, c)| (free.iter().map(|&k| a[k].clone()).collect(), c)).collect();
    fm_feasible(rows, free.len())
}

/// Complete planar fan on at most `max_rays` random primitive rays, sorted by angle, with
/// all angular gaps below π.
fn random_planar_fan<R: Rng>(rng: &mut R, max_rays: usize) -> Option<Fan> {
    let count = rng.gen_range(3..=max_rays);
    let mut rays: Vec<[i64; 2]> = (0..count).map(|_| [rng.gen_range(-4..=4), rng.gen_range(-4..=4)]).collect();
    rays.retain(|r| *r != [0, 0]);
    for r in &mut rays {
        let g = num_integer::gcd(r[0], r[1]);
        *r = [r[0] / g, r[1] / g];
    }
    rays.sort_by(|a, b| (a[1] as f64).atan2(a[0] as f64).partial_cmp(&(b[1] as f64).atan2(b[0] as f64)).unwrap());
    rays.dedup();
    let n = rays.len();
    if n < 3 {
        return None;
    }
    for i in 0..n {
        let (a, b) = (rays[i], rays[(i + 1) % n]);
        if a[0] * b[1] - a[1] * b[0] <= 0 {
            return None;
        }
    }
    let slices: Vec<&[i64]> = rays.iter().map(|r| r.as_slice()).collect();
    let cones: Vec<Vec<usize>> = (0..n).map(|i| vec![i, (i + 1) % n]).collect();
    let cones: Vec<&[usize]> = cones.iter().map(|c| c.as_slice()).collect();
    Fan::from_i64(2, &slices, &cones).ok()
}

#[test]
fn normality_matches_elimination_oracle() {
    let mut rng = seeded_rng(0xF0);
    let mut checked = 0;
    while checked < 150 {
        let Some(fan) = random_planar_fan(&mut rng, 6) else { continue };
        let g = fan.geometry();
        let oracle = normal_by_elimination(&fan);
        // complete planar fans are normal
        assert!(oracle);
        assert_eq!(decide_normal(g, 1).unwrap().is_some(), oracle);
        assert_eq!(decide_weakly_normal(g, 1).unwrap().is_some(), oracle);
        checked += 1;
    }
    let line = Fan::from_i64(1, &[&[1], &[-1]], &[&[0], &[1]]).unwrap();
    assert!(decide_normal(line.geometry(), 1).unwrap().is_some());
}

#[test]
fn elimination_oracle_detects_infeasibility() {
    let x = |n: i64| ratio(n, 1);
    assert!(!fm_feasible(vec![(vec![x(1)], x(1)), (vec![x(-1)], x(0))], 1));
    assert!(fm_feasible(vec![(vec![x(1), x(1)], x(1)), (vec![x(-1), x(0)], x(-3))], 2));
}

fn tk_instances() -> Vec<(TkContext, ComplexSubspace)> {
    let mut rng = seeded_rng(0x7C);
    (0..12)
        .map(|i| {
            let (fan, h) = random_valid_instance(&mut rng, i);
            (TkContext::new(&fan, &h, None, 2, i).unwrap(), h)
        })
        .collect()
}

#[test]
fn finite_differences_calibrate_to_fixed_factor() {
    for (i, (ctx, _)) in tk_instances().iter().enumerate() {
        let n = ctx.fan.dim();
        let data = ctx.chart(&ctx.fan.max_cones()[0]).unwrap();
        let spread = data.characters.iter().flatten().map(|x| x.abs()).max().unwrap_or_default();
        let step = 1e-2 / maxtorus::rational::to_f64(&spread).max(1.0);
        let mut rng = seeded_rng(i as u64);
        let mut rho = None;
        for _ in 0..20 {
            let y = random_float_point(&mut rng, n, 0.1);
            let v = random_float_point(&mut rng, n, 1.0);
            let h = hessian_at(&data, &y);
            let vv = DVector::from_vec(v.clone());
            let exact = (vv.transpose() * &h * &vv)[(0, 0)];
            let fd = hessian_fd_oracle(&data, &y, &v, step);
            let floor = 1e-3 * h.amax() * v.iter().map(|x| x * x).sum::<f64>();
            // calibrate on the first direction well away from the kernel
            if rho.is_none() && exact.abs() < floor {
                continue;
            }
            let r = *rho.get_or_insert_with(|| if (exact / fd - 1.0).abs() < (exact / fd - 2.0).abs() { 1.0 } else { 2.0 });
            assert_eq!(r, HESSIAN_FD_FACTOR);
            assert!((exact - r * fd).abs() / exact.abs().max(floor) < 1e-4, "{exact} vs {}", r * fd);
        }
    }
}

#[test]
fn kernel_is_exactly_the_projection() {
    for (i, (ctx, _)) in tk_instances().iter().enumerate() {
        let n = ctx.fan.dim();
        let data = ctx.chart(&ctx.fan.max_cones()[0]).unwrap();
        let mut rng = seeded_rng(100 + i as u64);
        for _ in 0..5 {
            let y = random_float_point(&mut rng, n, 0.1);
            for v in &ctx.p_h {
                assert_eq!(quadratic_form(&data, &y, v), 0.0);
            }
            // a random rational vector orthogonal to p(𝔥) is not in the kernel
            let mut w = random_rational_point(&mut rng, n);
            let basis = gram_schmidt(&ctx.p_h);
            for b in &basis {
                let f = dot(&w, b) / dot(b, b);
                w = w.iter().zip(b).map(|(x, y)| x - &f * y).collect();
            }
            if w.iter().all(Zero::is_zero) {
                continue;
            }
            let norm: f64 = to_f64_vec(&w).iter().map(|x| x * x).sum::<f64>().sqrt();
            assert!(quadratic_form(&data, &y, &w) / (norm * norm) > 0.0);
            assert!(kernel_check(&data, &y, &ctx.p_h, &TkTolerances::default()).passes);
        }
    }
}

fn gram_schmidt(vs: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let mut out: Vec<Vec<Rational>> = Vec::new();
    for v in vs {
        let mut w = v.clone();
        for b in &out {
            let f = dot(&w, b) / dot(b, b);
            w = w.iter().zip(b).map(|(x, y)| x - &f * y).collect();
        }
        if !w.iter().all(Zero::is_zero) {
            out.push(w);
        }
    }
    out
}

#[test]
fn kernel_does_not_depend_on_the_certificate() {
    for (i, (ctx, h)) in tk_instances().iter().enumerate() {
        let n = ctx.fan.dim();
        let rays = &ctx.fan.geometry().rays;
        // another certificate: rescale and shift by a functional vanishing on p(𝔥)
        let c: Vec<Rational> = (0..ctx.q.rows()).map(|r| ratio(r as i64 + 1, 3)).collect();
        let shift = ctx.q.transpose().mul_vec(&c);
        let b2: Vec<Rational> = ctx.b.iter().zip(rays).map(|(b, v)| b * ratio(3, 1) + dot(&shift, v)).collect();
        let other = TkContext::new(&ctx.fan, h, Some(b2), 2, i as u64).unwrap();
        let (d1, d2) = (ctx.chart(&ctx.fan.max_cones()[0]).unwrap(), other.chart(&ctx.fan.max_cones()[0]).unwrap());
        let mut rng = seeded_rng(200 + i as u64);
        let y = random_float_point(&mut rng, n, 0.1);
        let r1 = kernel_check(&d1, &y, &ctx.p_h, &TkTolerances::default());
        let r2 = kernel_check(&d2, &y, &ctx.p_h, &TkTolerances::default());
        assert!(r1.passes && r2.passes);
        assert_eq!(r1.kernel_dim, r2.kernel_dim);
        if r1.kernel_dim > 0 {
            let k1 = nalgebra::DMatrix::from_fn(n, r1.kernel_dim, |r, c| r1.kernel_basis[c][r]);
            let k2 = nalgebra::DMatrix::from_fn(n, r2.kernel_dim, |r, c| r2.kernel_basis[c][r]);
            let residual = &k1 - &k2 * (k2.transpose() * &k1);
            let sin = residual.svd(false, false).singular_values.max();
            assert!(sin.min(1.0).asin() < 1e-6);
        }
    }
}
