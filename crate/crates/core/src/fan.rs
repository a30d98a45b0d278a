//! Rational polyhedral fans given by rays and maximal cones.
//!
//! Cones are index sets into the ray list. Indices are 0-based in memory and
//! 1-based in JSON.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::complex::{is_subset, SimplicialComplex};
use crate::cone::{cone_contains, cone_is_regular, cone_is_simplicial, cone_is_strictly_convex};
use crate::error::FanError;
use crate::lp::{lp_solve, LinearProgram};
use crate::matrix::{nullspace, solve, RationalMatrix};
use crate::rational::{dot, format_rational, to_rational_vec, Rational};
use crate::sampling::random_rational_points;

/// Fan geometry over ℚ. Used both for integral fans and for images of
/// integral fans under rational linear maps, whose rays need not be
/// primitive or even distinct.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFan {
    pub dim: usize,
    pub rays: Vec<Vec<Rational>>,
    pub max_cones: Vec<Vec<usize>>,
}

/// A fan with primitive integral rays. Construction enforces the structural
/// invariants; pairwise compatibility is checked separately by
/// [`fan_validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fan {
    dim: usize,
    rays: Vec<Vec<BigInt>>,
    max_cones: Vec<Vec<usize>>,
    geometry: RationalFan,
    warnings: Vec<String>,
}

impl Fan {
    /// Rays are scaled to primitive vectors (with a warning); cone index sets
    /// are sorted. An empty cone list means the fan consisting of `{0}`.
    pub fn new(dim: usize, rays: Vec<Vec<BigInt>>, max_cones: Vec<Vec<usize>>) -> Result<Self, FanError> {
        let mut warnings = Vec::new();
        let mut prim = Vec::with_capacity(rays.len());
        for (i, r) in rays.into_iter().enumerate() {
            if r.len() != dim {
                return Err(FanError::RayDimension { index: i + 1, expected: dim, found: r.len() });
            }
            let g = r.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
            if g.is_zero() {
                return Err(FanError::ZeroRay(i + 1));
            }
            if !g.is_one() {
                warnings.push(format!("ray {} divided by {g} to make it primitive", i + 1));
            }
            prim.push(r.iter().map(|x| x / &g).collect::<Vec<_>>());
        }
        for i in 0..prim.len() {
            if let Some(j) = (0..i).find(|&j| prim[j] == prim[i]) {
                return Err(FanError::DuplicateRay(j + 1, i + 1));
            }
        }

        let mut cones = Vec::with_capacity(max_cones.len());
        for (ci, mut c) in max_cones.into_iter().enumerate() {
            if let Some(&r) = c.iter().find(|&&r| r >= prim.len()) {
                return Err(FanError::RayIndexOutOfRange { cone: ci + 1, ray: r + 1, rays: prim.len() });
            }
            c.sort_unstable();
            c.dedup();
            cones.push(c);
        }
        if cones.is_empty() {
            cones.push(Vec::new());
        }
        for i in 0..cones.len() {
            for j in 0..cones.len() {
                if i != j && is_subset(&cones[i], &cones[j]) && (cones[i].len() < cones[j].len() || i > j) {
                    return Err(FanError::NestedCones { inner: i + 1, outer: j + 1 });
                }
            }
        }

        let geometry = RationalFan {
            dim,
            rays: prim.iter().map(|r| to_rational_vec(r)).collect(),
            max_cones: cones.clone(),
        };
        for (ci, _) in cones.iter().enumerate() {
            if !cone_is_strictly_convex(&geometry.cone_generators(ci), dim) {
                return Err(FanError::NotStrictlyConvex(ci + 1));
            }
        }
        Ok(Self { dim, rays: prim, max_cones: cones, geometry, warnings })
    }

    /// Convenience constructor with 0-based cone indices.
    pub fn from_i64(dim: usize, rays: &[&[i64]], max_cones: &[&[usize]]) -> Result<Self, FanError> {
        Self::new(
            dim,
            rays.iter().map(|r| crate::rational::int_vec(r)).collect(),
            max_cones.iter().map(|c| c.to_vec()).collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[Vec<BigInt>] {
        &self.rays
    }

    pub fn max_cones(&self) -> &[Vec<usize>] {
        &self.max_cones
    }

    pub fn geometry(&self) -> &RationalFan {
        &self.geometry
    }

    /// Messages produced while normalizing the input.
    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn max_cone_dim(&self) -> usize {
        self.geometry.max_cone_dim()
    }

    pub fn is_simplicial(&self) -> bool {
        self.geometry.is_simplicial()
    }

    pub fn is_regular(&self) -> bool {
        self.non_regular_cones().is_empty()
    }

    pub fn non_regular_cones(&self) -> Vec<usize> {
        (0..self.max_cones.len())
            .filter(|&ci| {
                let g: Vec<Vec<BigInt>> = self.max_cones[ci].iter().map(|&r| self.rays[r].clone()).collect();
                !cone_is_regular(&g, self.dim)
            })
            .collect()
    }

    /// Whether `cone` (0-based ray indices) is a face of some maximal cone.
    pub fn has_cone(&self, cone: &[usize]) -> bool {
        let mut c = cone.to_vec();
        c.sort_unstable();
        c.dedup();
        self.max_cones.iter().any(|m| is_subset(&c, m))
    }
}

impl RationalFan {
    pub fn cone_generators(&self, cone: usize) -> Vec<Vec<Rational>> {
        self.max_cones[cone].iter().map(|&r| self.rays[r].clone()).collect()
    }

    pub fn cone_dim(&self, cone: usize) -> usize {
        crate::matrix::rank(&RationalMatrix::from_rows(&self.cone_generators(cone), self.dim))
    }

    pub fn max_cone_dim(&self) -> usize {
        (0..self.max_cones.len()).map(|c| self.cone_dim(c)).max().unwrap_or(0)
    }

    pub fn is_simplicial(&self) -> bool {
        (0..self.max_cones.len()).all(|c| cone_is_simplicial(&self.cone_generators(c), self.dim))
    }
}

/// Outcome of the pairwise face-compatibility check.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FanValidity {
    /// 0-based maximal cones that contain a line.
    pub non_convex_cones: Vec<usize>,
    /// 0-based pairs `(i, j)`, `i < j`, for which no separating functional
    /// exists, sorted.
    pub violating_pairs: Vec<(usize, usize)>,
}

impl FanValidity {
    pub fn is_valid(&self) -> bool {
        self.non_convex_cones.is_empty() && self.violating_pairs.is_empty()
    }
}

/// A functional `u` with `⟨u, a⟩ = 0` on the rays shared by cones `i` and
/// `j`, `≥ 1` on the remaining rays of `i`, and `≤ −1` on the remaining rays
/// of `j`. Its existence shows that the two cones meet exactly in the cone
/// on their shared rays, which is a face of both.
pub fn separating_functional(fan: &RationalFan, i: usize, j: usize) -> Option<Vec<Rational>> {
    let (a, b) = (&fan.max_cones[i], &fan.max_cones[j]);
    let mut lp = LinearProgram::new(fan.dim);
    for &r in a {
        if b.contains(&r) {
            lp.equal(fan.rays[r].clone(), Rational::zero());
        } else {
            lp.ge(fan.rays[r].clone(), Rational::one());
        }
    }
    for &r in b.iter().filter(|r| !a.contains(r)) {
        lp.ge(fan.rays[r].iter().map(|x| -x).collect(), Rational::one());
    }
    lp_solve(&lp).optimal().map(|s| s.point.clone())
}

pub fn fan_validate(fan: &RationalFan) -> FanValidity {
    let n = fan.max_cones.len();
    let non_convex_cones = (0..n).filter(|&c| !cone_is_strictly_convex(&fan.cone_generators(c), fan.dim)).collect();
    let violating_pairs = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .filter(|&(i, j)| separating_functional(fan, i, j).is_none())
        .collect();
    FanValidity { non_convex_cones, violating_pairs }
}

/// Index of the first maximal cone containing `x`, if any.
pub fn point_in_support(fan: &RationalFan, x: &[Rational]) -> Option<usize> {
    (0..fan.max_cones.len()).find(|&c| cone_contains_point(fan, c, x))
}

fn cone_contains_point(fan: &RationalFan, cone: usize, x: &[Rational]) -> bool {
    let gens = fan.cone_generators(cone);
    if !cone_is_simplicial(&gens, fan.dim) {
        return cone_contains(&gens, fan.dim, x);
    }
    let a = RationalMatrix::from_rows(&gens, fan.dim).transpose();
    match solve(&a, x) {
        Some(lambda) => lambda.iter().all(|l| !l.is_negative()),
        None => false,
    }
}

/// Number of sampled points used by the completeness cross-check is
/// `2·dim + 1`.
pub fn fan_is_complete(fan: &RationalFan, seed: u64) -> Result<bool, FanError> {
    if !fan_validate(fan).is_valid() {
        return Err(FanError::NotValid);
    }
    if let Some(c) = (0..fan.max_cones.len()).find(|&c| !cone_is_simplicial(&fan.cone_generators(c), fan.dim)) {
        return Err(FanError::NotSimplicial(c + 1));
    }
    let verdict = wall_condition(fan);
    if verdict {
        for x in random_rational_points(seed, fan.dim, 2 * fan.dim + 1) {
            if point_in_support(fan, &x).is_none() {
                return Err(FanError::CompletenessMismatch(x.iter().map(format_rational).collect()));
            }
        }
    }
    Ok(verdict)
}

/// Every maximal cone is full-dimensional, every facet of a maximal cone
/// lies in exactly two maximal cones, and the facet-adjacency graph is
/// connected. For a valid simplicial fan this is equivalent to completeness.
pub fn wall_condition(fan: &RationalFan) -> bool {
    let n = fan.dim;
    let cones = &fan.max_cones;
    if n == 0 {
        return true;
    }
    if cones.iter().any(|c| c.len() != n) || (0..cones.len()).any(|c| fan.cone_dim(c) != n) {
        return false;
    }
    let mut walls: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    for (ci, c) in cones.iter().enumerate() {
        for skip in 0..c.len() {
            let facet: Vec<usize> = c.iter().enumerate().filter(|(k, _)| *k != skip).map(|(_, &r)| r).collect();
            walls.entry(facet).or_default().push(ci);
        }
    }
    if walls.values().any(|owners| owners.len() != 2) {
        return false;
    }
    let mut seen = BTreeSet::from([0usize]);
    let mut stack = vec![0usize];
    while let Some(c) = stack.pop() {
        for owners in walls.values().filter(|o| o.contains(&c)) {
            for &d in owners {
                if seen.insert(d) {
                    stack.push(d);
                }
            }
        }
    }
    seen.len() == cones.len()
}

/// Searches for a point outside the union of the cones, which need not form
/// a fan: `±e_i` first, then `2·dim + 1` seeded random points, then points
/// just outside each wall of a full-dimensional simplicial cone that no
/// other cone shares. `None` means no witness was found, not that the union
/// is everything.
pub fn uncovered_witness(fan: &RationalFan, seed: u64) -> Option<Vec<Rational>> {
    let n = fan.dim;
    let mut candidates = Vec::with_capacity(4 * n + 1);
    for i in 0..n {
        for s in [1i64, -1] {
            let mut e = vec![Rational::zero(); n];
            e[i] = Rational::from_integer(s.into());
            candidates.push(e);
        }
    }
    candidates.extend(random_rational_points(seed, n, 2 * n + 1));
    candidates
        .into_iter()
        .find(|x| point_in_support(fan, x).is_none())
        .or_else(|| free_wall_witness(fan))
}

/// Walls of full-dimensional simplicial cones owned by one cone only; the
/// barycenter pushed outward by a small enough step leaves the support.
fn free_wall_witness(fan: &RationalFan) -> Option<Vec<Rational>> {
    let n = fan.dim;
    let mut walls: BTreeMap<Vec<usize>, Vec<(usize, usize)>> = BTreeMap::new();
    for (ci, c) in fan.max_cones.iter().enumerate() {
        if c.len() != n || fan.cone_dim(ci) != n {
            continue;
        }
        for skip in 0..c.len() {
            let facet: Vec<usize> = c.iter().enumerate().filter(|(k, _)| *k != skip).map(|(_, &r)| r).collect();
            walls.entry(facet).or_default().push((ci, c[skip]));
        }
    }
    for (facet, owners) in walls.iter().filter(|(_, o)| o.len() == 1) {
        let rows: Vec<Vec<Rational>> = facet.iter().map(|&r| fan.rays[r].clone()).collect();
        let mut normal = nullspace(&RationalMatrix::from_rows(&rows, n)).into_iter().next()?;
        if dot(&normal, &fan.rays[owners[0].1]).is_positive() {
            normal.iter_mut().for_each(|x| *x = -x.clone());
        }
        let center: Vec<Rational> =
            (0..n).map(|k| rows.iter().map(|r| r[k].clone()).sum::<Rational>()).collect();
        let mut step = Rational::one();
        for _ in 0..40 {
            let x: Vec<Rational> = center.iter().zip(&normal).map(|(c, d)| c + &step * d).collect();
            if point_in_support(fan, &x).is_none() {
                return Some(x);
            }
            step /= Rational::from_integer(2.into());
        }
    }
    None
}

/// The fan `Σ_K ⊂ ℝ^m` whose cones are spanned by `e_i`, `i ∈ I`, for faces
/// `I` of `K`. Ghost vertices contribute no ray; the remaining vertices keep
/// their relative order as ray indices.
pub fn fan_from_complex(k: &SimplicialComplex) -> Fan {
    let m = k.vertex_count();
    let ghosts = k.ghost_vertices();
    let live: Vec<usize> = (0..m).filter(|v| !ghosts.contains(v)).collect();
    let rays = live
        .iter()
        .map(|&v| (0..m).map(|j| if j == v { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    let cones = k
        .facets()
        .iter()
        .map(|f| f.iter().map(|v| live.iter().position(|l| l == v).expect("face vertex is live")).collect())
        .collect();
    Fan::new(m, rays, cones).expect("coordinate fan is well formed")
}

/// Vertices are rays, faces are cones.
pub fn underlying_complex(fan: &Fan) -> Result<SimplicialComplex, FanError> {
    let g = fan.geometry();
    if let Some(c) = (0..g.max_cones.len()).find(|&c| !cone_is_simplicial(&g.cone_generators(c), g.dim)) {
        return Err(FanError::NotSimplicial(c + 1));
    }
    SimplicialComplex::new(fan.rays().len(), fan.max_cones().to_vec())
}

/// JSON integer, or a decimal string when it does not fit in 64 bits.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum IntRepr {
    Small(i64),
    Big(String),
}

impl From<&BigInt> for IntRepr {
    fn from(x: &BigInt) -> Self {
        i64::try_from(x).map(IntRepr::Small).unwrap_or_else(|_| IntRepr::Big(x.to_string()))
    }
}

impl IntRepr {
    fn parse(&self) -> Option<BigInt> {
        match self {
            IntRepr::Small(x) => Some(BigInt::from(*x)),
            IntRepr::Big(s) => s.trim().parse().ok(),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FanRepr {
    dim: usize,
    rays: Vec<Vec<IntRepr>>,
    max_cones: Vec<Vec<usize>>,
}

impl Serialize for Fan {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let max_cones = self.max_cones.iter().map(|c| c.iter().map(|r| r + 1).collect()).collect();
        FanRepr { dim: self.dim, rays: self.rays.iter().map(|r| r.iter().map(IntRepr::from).collect()).collect(), max_cones }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Fan {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let repr = FanRepr::deserialize(d)?;
        let mut cones = Vec::with_capacity(repr.max_cones.len());
        for (ci, c) in repr.max_cones.into_iter().enumerate() {
            if c.contains(&0) {
                return Err(D::Error::custom(format!("cone {}: ray indices are 1-based", ci + 1)));
            }
            cones.push(c.into_iter().map(|r| r - 1).collect());
        }
        let mut rays = Vec::with_capacity(repr.rays.len());
        for (ri, r) in repr.rays.iter().enumerate() {
            let parsed: Option<Vec<BigInt>> = r.iter().map(IntRepr::parse).collect();
            rays.push(parsed.ok_or_else(|| D::Error::custom(format!("ray {}: entries must be integers", ri + 1)))?);
        }
        Fan::new(repr.dim, rays, cones).map_err(D::Error::custom)
    }
}
