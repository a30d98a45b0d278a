//! Bundled example instances, written as canonical JSON files.

use serde::Serialize;
use serde_json::Value;

use crate::complex::SimplicialComplex;
use crate::fan::Fan;
use crate::rational::{format_rational, rat_vec, GaussianRational, Rational};
use crate::subspace::ComplexSubspace;

pub const INSTANCE_NAMES: [&str; 5] = ["hopf", "fulton7", "cp2", "cp1xcp1", "moment-angle-cube"];

/// Two rays `e₁, e₂` in ℝ³, each its own maximal cone.
pub fn hopf_fan() -> Fan {
    Fan::from_i64(3, &[&[1, 0, 0], &[0, 1, 0]], &[&[0], &[1]]).expect("valid fan")
}

/// `𝔥 = span{(i, i, −1)}`.
pub fn hopf_subspace() -> ComplexSubspace {
    ComplexSubspace::from_pairs(3, &[&[(0, 1), (0, 1), (-1, 0)]]).expect("independent basis")
}

/// The complete, weakly normal but not normal fan on seven rays.
pub fn fulton7() -> Fan {
    Fan::from_i64(
        3,
        &[&[-1, 0, 0], &[0, -1, 0], &[0, 0, -1], &[1, 1, 1], &[1, 1, 0], &[0, 1, 1], &[1, 0, 1]],
        &[
            &[0, 1, 2],
            &[0, 1, 5],
            &[0, 2, 4],
            &[0, 4, 5],
            &[1, 2, 6],
            &[1, 5, 6],
            &[2, 4, 6],
            &[3, 4, 5],
            &[3, 4, 6],
            &[3, 5, 6],
        ],
    )
    .expect("valid fan")
}

pub fn fulton7_certificate() -> Vec<Rational> {
    rat_vec(&[0, 0, 0, 1, 1, 1, 1])
}

pub fn cp2() -> Fan {
    Fan::from_i64(2, &[&[1, 0], &[0, 1], &[-1, -1]], &[&[0, 1], &[1, 2], &[0, 2]]).expect("valid fan")
}

pub fn cp2_certificate() -> Vec<Rational> {
    rat_vec(&[0, 0, 1])
}

pub fn cp1xcp1() -> Fan {
    Fan::from_i64(
        2,
        &[&[1, 0], &[-1, 0], &[0, 1], &[0, -1]],
        &[&[0, 2], &[0, 3], &[1, 2], &[1, 3]],
    )
    .expect("valid fan")
}

pub fn cp1xcp1_certificate() -> Vec<Rational> {
    rat_vec(&[0, 1, 0, 1])
}

/// Boundary of the octahedron on vertices 1–6, plus a ghost vertex 7.
pub fn moment_angle_cube_complex() -> SimplicialComplex {
    let mut facets = Vec::new();
    for a in [0, 1] {
        for b in [2, 3] {
            for c in [4, 5] {
                facets.push(vec![a, b, c]);
            }
        }
    }
    SimplicialComplex::new(7, facets).expect("valid complex")
}

/// `𝔥 = span{k₁ + i k₂, k₃ + i k₄}`, built from the pair sums
/// `e₁ + e₂`, `e₃ + e₄`, `e₅ + e₆` and `e₇ − e₁ − e₃ − e₅`.
pub fn moment_angle_cube_subspace() -> ComplexSubspace {
    let k1 = [1, 1, 0, 0, 0, 0, 0];
    let k2 = [0, 0, 1, 1, 0, 0, 0];
    let k3 = [0, 0, 0, 0, 1, 1, 0];
    let k4 = [-1, 0, -1, 0, -1, 0, 1];
    let v = |re: &[i64; 7], im: &[i64; 7]| -> Vec<GaussianRational> {
        re.iter().zip(im).map(|(&a, &b)| GaussianRational::from_ints(a, b)).collect()
    };
    ComplexSubspace::new(7, vec![v(&k1, &k2), v(&k3, &k4)]).expect("independent basis")
}

fn certificate(b: &[Rational]) -> Value {
    serde_json::json!({ "b": b.iter().map(format_rational).collect::<Vec<_>>() })
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("instance data serializes")
}

/// File name and JSON content of every file of a bundled instance.
pub fn instance_files(name: &str) -> Option<Vec<(String, Value)>> {
    let files = match name {
        "hopf" => vec![("hopf_fan.json", to_value(&hopf_fan())), ("hopf_h.json", to_value(&hopf_subspace()))],
        "fulton7" => vec![
            ("fulton7.json", to_value(&fulton7())),
            ("fulton7_certificate.json", certificate(&fulton7_certificate())),
        ],
        "cp2" => vec![
            ("cp2.json", to_value(&cp2())),
            ("cp2_h.json", to_value(&ComplexSubspace::zero(2))),
            ("cp2_certificate.json", certificate(&cp2_certificate())),
        ],
        "cp1xcp1" => vec![
            ("cp1xcp1.json", to_value(&cp1xcp1())),
            ("cp1xcp1_h.json", to_value(&ComplexSubspace::zero(2))),
            ("cp1xcp1_certificate.json", certificate(&cp1xcp1_certificate())),
        ],
        "moment-angle-cube" => vec![
            ("moment_angle_cube_complex.json", to_value(&moment_angle_cube_complex())),
            ("moment_angle_cube_h.json", to_value(&moment_angle_cube_subspace())),
        ],
        _ => return None,
    };
    Some(files.into_iter().map(|(n, v)| (n.to_string(), v)).collect())
}

/// Pretty JSON with a trailing newline; `serde_json` keeps struct field
/// order, so the bytes are stable.
pub fn canonical_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON value serializes");
    s.push('\n');
    s
}
