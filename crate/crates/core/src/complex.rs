//! Simplicial complexes stored by their maximal faces.

use serde::{Deserialize, Serialize};

use crate::error::FanError;

/// Vertices are `0..vertices`; a vertex that lies in no face is a ghost.
/// Facets are sorted, duplicate-free, and no facet contains another. The
/// complex `{∅}` (no vertex in any face) is stored as a single empty facet.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SimplicialComplex {
    vertices: usize,
    facets: Vec<Vec<usize>>,
}

impl SimplicialComplex {
    /// Builds the complex generated by `faces`, dropping faces contained in
    /// others. Indices are 0-based.
    pub fn new(vertices: usize, faces: Vec<Vec<usize>>) -> Result<Self, FanError> {
        let mut facets: Vec<Vec<usize>> = Vec::new();
        for (fi, mut f) in faces.into_iter().enumerate() {
            if let Some(&v) = f.iter().find(|&&v| v >= vertices) {
                return Err(FanError::VertexOutOfRange { facet: fi + 1, vertex: v + 1, vertices });
            }
            f.sort_unstable();
            f.dedup();
            facets.push(f);
        }
        facets.sort();
        facets.dedup();
        let maximal: Vec<Vec<usize>> = facets
            .iter()
            .filter(|f| !facets.iter().any(|g| g.len() > f.len() && is_subset(f, g)))
            .cloned()
            .collect();
        let facets = if maximal.is_empty() { vec![Vec::new()] } else { maximal };
        Ok(Self { vertices, facets })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    pub fn facets(&self) -> &[Vec<usize>] {
        &self.facets
    }

    pub fn contains_face(&self, face: &[usize]) -> bool {
        let mut f = face.to_vec();
        f.sort_unstable();
        f.dedup();
        self.facets.iter().any(|g| is_subset(&f, g))
    }

    /// Vertices that belong to no face.
    pub fn ghost_vertices(&self) -> Vec<usize> {
        (0..self.vertices).filter(|v| !self.facets.iter().any(|f| f.contains(v))).collect()
    }

    /// Restriction to the non-ghost vertices, renumbered in increasing order.
    pub fn without_ghosts(&self) -> Self {
        let ghosts = self.ghost_vertices();
        let keep: Vec<usize> = (0..self.vertices).filter(|v| !ghosts.contains(v)).collect();
        let renumber = |v: usize| keep.iter().position(|&k| k == v).expect("non-ghost vertex");
        let facets = self.facets.iter().map(|f| f.iter().map(|&v| renumber(v)).collect()).collect();
        Self::new(keep.len(), facets).expect("renumbered vertices are in range")
    }

    /// Adds `count` ghost vertices at the end.
    pub fn with_ghosts(&self, count: usize) -> Self {
        Self { vertices: self.vertices + count, facets: self.facets.clone() }
    }
}

/// Both slices sorted ascending.
pub(crate) fn is_subset(a: &[usize], b: &[usize]) -> bool {
    let mut it = b.iter();
    a.iter().all(|x| it.any(|y| y == x))
}

#[derive(Serialize, Deserialize)]
struct ComplexRepr {
    vertices: usize,
    facets: Vec<Vec<usize>>,
}

impl Serialize for SimplicialComplex {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let facets = self.facets.iter().map(|f| f.iter().map(|v| v + 1).collect()).collect();
        ComplexRepr { vertices: self.vertices, facets }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for SimplicialComplex {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let repr = ComplexRepr::deserialize(d)?;
        let mut facets = Vec::with_capacity(repr.facets.len());
        for (fi, f) in repr.facets.into_iter().enumerate() {
            let mut face = Vec::with_capacity(f.len());
            for v in f {
                if v == 0 {
                    return Err(D::Error::custom(format!("facet {}: vertex indices are 1-based", fi + 1)));
                }
                face.push(v - 1);
            }
            facets.push(face);
        }
        SimplicialComplex::new(repr.vertices, facets).map_err(D::Error::custom)
    }
}
