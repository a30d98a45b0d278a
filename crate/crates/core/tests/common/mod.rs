#![allow(dead_code)]

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::Rng;

use maxtorus::complex::SimplicialComplex;
use maxtorus::fan::Fan;
use maxtorus::quotient::validate_construction_ii;
use maxtorus::rational::{ratio, GaussianRational, Rational};
use maxtorus::subspace::{ComplexSubspace, SubspaceData};

pub fn gaussian<R: Rng>(rng: &mut R) -> GaussianRational {
    GaussianRational::new(ratio(rng.gen_range(-9..=9), rng.gen_range(1..=5)), ratio(rng.gen_range(-9..=9), rng.gen_range(1..=5)))
}

/// Rays of a smooth complete 2-dimensional fan, in counter-clockwise
/// order: `ℂP²` or `ℂP¹ × ℂP¹` followed by random blow-ups, each inserting
/// `a + b` between adjacent rays `a`, `b`.
pub fn smooth_polygon_rays<R: Rng>(rng: &mut R, blowups: usize) -> Vec<[i64; 2]> {
    let mut rays: Vec<[i64; 2]> =
        if rng.gen_bool(0.5) { vec![[1, 0], [0, 1], [-1, -1]] } else { vec![[1, 0], [0, 1], [-1, 0], [0, -1]] };
    for _ in 0..blowups {
        let i = rng.gen_range(0..rays.len());
        let (a, b) = (rays[i], rays[(i + 1) % rays.len()]);
        rays.insert(i + 1, [a[0] + b[0], a[1] + b[1]]);
    }
    rays
}

/// Smooth complete 2-dimensional fan with cones on consecutive rays, after
/// at most `max_blowups` blow-ups.
pub fn smooth_polygon_fan<R: Rng>(rng: &mut R, max_blowups: usize) -> Fan {
    let blowups = rng.gen_range(0..=max_blowups);
    let rays = smooth_polygon_rays(rng, blowups);
    let n = rays.len();
    let ints: Vec<Vec<BigInt>> = rays.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let cones = (0..n).map(|i| vec![i, (i + 1) % n]).collect();
    Fan::new(2, ints, cones).expect("smooth polygon fan")
}

/// `Σ₁ × Σ₂` with rays `(a, 0)` and `(0, b)`.
pub fn product(f: &Fan, g: &Fan) -> Fan {
    let (n1, n2) = (f.dim(), g.dim());
    let mut rays = Vec::new();
    for r in f.rays() {
        let mut v = r.clone();
        v.resize(n1 + n2, BigInt::from(0));
        rays.push(v);
    }
    for r in g.rays() {
        let mut v = vec![BigInt::from(0); n1];
        v.extend(r.iter().cloned());
        rays.push(v);
    }
    let m1 = f.rays().len();
    let mut cones = Vec::new();
    for a in f.max_cones() {
        for b in g.max_cones() {
            let mut c = a.clone();
            c.extend(b.iter().map(|i| i + m1));
            cones.push(c);
        }
    }
    Fan::new(n1 + n2, rays, cones).expect("product fan")
}

/// Extends `𝔥 ⊂ ℂ^{n₁}` by zeros to `ℂ^{n₁ + extra}`.
pub fn pad_subspace(h: &ComplexSubspace, extra: usize) -> ComplexSubspace {
    let m = h.ambient_dim() + extra;
    let basis = h
        .basis()
        .iter()
        .map(|v| {
            let mut v = v.clone();
            v.resize(m, GaussianRational::zero());
            v
        })
        .collect();
    ComplexSubspace::new(m, basis).expect("padded basis")
}

/// Two 1-dimensional cones `e₁` and `e₁ + d e₂` in ℝ³; `d > 1` gives a
/// component group.
pub fn hopf_type_fan(d: i64) -> Fan {
    Fan::from_i64(3, &[&[1, 0, 0], &[1, d, 0]], &[&[0], &[1]]).expect("hopf-type fan")
}

pub fn random_line<R: Rng>(rng: &mut R, m: usize) -> Option<ComplexSubspace> {
    let v: Vec<GaussianRational> = (0..m).map(|_| gaussian(rng)).collect();
    ComplexSubspace::new(m, vec![v]).ok()
}

/// A random valid `(Σ, 𝔥)` for the second construction: a Hopf-type
/// factor with a random line accepted by the validator, optionally times a
/// smooth polygon fan, or a polygon fan with `𝔥 = 0`.
pub fn random_valid_instance<R: Rng>(rng: &mut R, seed: u64) -> (Fan, ComplexSubspace) {
    loop {
        if rng.gen_bool(0.2) {
            let f = smooth_polygon_fan(rng, 3);
            return (f, ComplexSubspace::zero(2));
        }
        let base = hopf_type_fan(rng.gen_range(1..=3));
        let Some(h) = random_line(rng, 3) else { continue };
        let (fan, h) = if rng.gen_bool(0.5) {
            let poly = smooth_polygon_fan(rng, 2);
            (product(&base, &poly), pad_subspace(&h, 2))
        } else {
            (base, h)
        };
        let data = SubspaceData::Exact(h.clone());
        if validate_construction_ii(&fan, &data, seed).map(|r| r.is_valid()).unwrap_or(false) {
            return (fan, h);
        }
    }
}

/// Random complex on `m` vertices: random faces, closed under taking the
/// maximal ones.
pub fn random_complex<R: Rng>(rng: &mut R, m: usize) -> SimplicialComplex {
    let faces: Vec<Vec<usize>> = (0..rng.gen_range(0..6))
        .map(|_| {
            let mut f: Vec<usize> = (0..m).filter(|_| rng.gen_bool(0.4)).collect();
            f.dedup();
            f
        })
        .collect();
    SimplicialComplex::new(m, faces).expect("random complex")
}

/// Feasibility of `{x : a·x ≥ c}` by Fourier–Motzkin elimination.
pub fn fm_feasible(mut rows: Vec<(Vec<Rational>, Rational)>, vars: usize) -> bool {
    for j in 0..vars {
        let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), Vec::new());
        for (a, c) in rows {
            if a[j].is_positive() {
                pos.push((a, c));
            } else if a[j].is_negative() {
                neg.push((a, c));
            } else {
                rest.push((a, c));
            }
        }
        for (ap, cp) in &pos {
            for (an, cn) in &neg {
                let (sp, sn) = (-an[j].clone(), ap[j].clone());
                let a: Vec<Rational> = ap.iter().zip(an).map(|(x, y)| x * &sp + y * &sn).collect();
                let c = cp * &sp + cn * &sn;
                // normalize so duplicates collapse
                let lead = a.iter().find(|x| !x.is_zero()).map(|x| x.abs());
                let (a, c) = match lead {
                    Some(l) => (a.iter().map(|x| x / &l).collect(), c / &l),
                    None => (a, c),
                };
                if !rest.contains(&(a.clone(), c.clone())) {
                    rest.push((a, c));
                }
            }
        }
        rows = rest;
    }
    rows.iter().all(|(_, c)| !c.is_positive())
}
