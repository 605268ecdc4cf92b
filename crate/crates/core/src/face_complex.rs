//! Face posets of simple nice manifolds with corners.
//!
//! A manifold with corners whose prefaces are all connected (a homology
//! polytope) is determined combinatorially by the nerve of its facet cover:
//! a set of facets is a face exactly when the facets intersect. Faces are
//! therefore identified with their facet sets; the empty set is the whole
//! space (codimension 0) and the `n`-element sets are the vertices.
//!
//! Niceness (every codimension-2 face lies in exactly two facets) holds by
//! construction in this encoding. Contractibility of faces is not decidable
//! from the nerve and is carried elsewhere as an input assumption.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FacetId(pub usize);

impl fmt::Display for FacetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A face, named by the sorted set of facets containing it.
///
/// Ordering is lexicographic on the sorted facet list.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Face {
    facets: Vec<FacetId>,
}

impl Face {
    /// The codimension-0 face (the whole space).
    pub fn whole() -> Self {
        Face::default()
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        let set: BTreeSet<usize> = indices.into_iter().collect();
        Face {
            facets: set.into_iter().map(FacetId).collect(),
        }
    }

    pub fn facets(&self) -> &[FacetId] {
        &self.facets
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.facets.iter().map(|f| f.0)
    }

    pub fn codim(&self) -> usize {
        self.facets.len()
    }

    pub fn contains_facet(&self, facet: FacetId) -> bool {
        self.facets.binary_search(&facet).is_ok()
    }

    /// Facet-set inclusion: `self ⊆ other` means `other` is a (geometric) subface of `self`.
    pub fn is_subset_of(&self, other: &Face) -> bool {
        self.facets.iter().all(|f| other.contains_facet(*f))
    }

    pub fn union(&self, other: &Face) -> Face {
        Face::from_indices(self.indices().chain(other.indices()))
    }
}

impl fmt::Display for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, x) in self.facets.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str("}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FaceError {
    #[error("need m >= n >= 1, got n = {n}, m = {m}")]
    BadDimension { n: usize, m: usize },
    #[error("facet index {facet} out of range for {m} facets")]
    FacetOutOfRange { facet: usize, m: usize },
    #[error("vertex {face} repeats a facet")]
    RepeatedFacet { face: String },
    #[error("simplicity violated: vertex {face} lies in {found} facets, expected {expected}")]
    Simplicity {
        face: Face,
        expected: usize,
        found: usize,
    },
    #[error("facet {0} lies in no vertex")]
    DanglingFacet(FacetId),
    #[error("vertex {0} listed twice")]
    DuplicateMaximal(Face),
    #[error("codimension {k} out of range 0..={n}")]
    CodimOutOfRange { k: usize, n: usize },
    #[error("facets {0} do not meet in a face")]
    NoSuchFace(Face),
}

/// Face poset of a simple nice `n`-manifold with corners with `m` facets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceComplex {
    n: usize,
    m: usize,
    maximal: Vec<Face>,
    by_codim: Vec<Vec<Face>>,
    all: HashSet<Face>,
    degree: Vec<usize>,
}

impl FaceComplex {
    /// Validates the vertex list and materializes the full face poset.
    pub fn build(n: usize, m: usize, maximal_faces: &[Vec<usize>]) -> Result<Self, FaceError> {
        if n == 0 || m < n {
            return Err(FaceError::BadDimension { n, m });
        }
        let mut maximal = Vec::with_capacity(maximal_faces.len());
        let mut seen = HashSet::new();
        for raw in maximal_faces {
            if let Some(&facet) = raw.iter().find(|&&i| i >= m) {
                return Err(FaceError::FacetOutOfRange { facet, m });
            }
            let face = Face::from_indices(raw.iter().copied());
            if face.codim() != raw.len() {
                return Err(FaceError::RepeatedFacet {
                    face: format!("{raw:?}"),
                });
            }
            if face.codim() != n {
                return Err(FaceError::Simplicity {
                    face,
                    expected: n,
                    found: raw.len(),
                });
            }
            if !seen.insert(face.clone()) {
                return Err(FaceError::DuplicateMaximal(face));
            }
            maximal.push(face);
        }
        maximal.sort();

        let mut degree = vec![0; m];
        for face in &maximal {
            for i in face.indices() {
                degree[i] += 1;
            }
        }
        if let Some(i) = degree.iter().position(|&d| d == 0) {
            return Err(FaceError::DanglingFacet(FacetId(i)));
        }

        let mut all = HashSet::new();
        for face in &maximal {
            for mask in 0u64..(1u64 << n) {
                let sub = Face {
                    facets: face
                        .facets
                        .iter()
                        .enumerate()
                        .filter(|(b, _)| mask >> b & 1 == 1)
                        .map(|(_, f)| *f)
                        .collect(),
                };
                all.insert(sub);
            }
        }
        let mut by_codim = vec![Vec::new(); n + 1];
        for face in &all {
            by_codim[face.codim()].push(face.clone());
        }
        for layer in &mut by_codim {
            layer.sort();
        }

        Ok(FaceComplex {
            n,
            m,
            maximal,
            by_codim,
            all,
            degree,
        })
    }

    /// Dimension `n` of the manifold with corners.
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn facet_count(&self) -> usize {
        self.m
    }

    /// Vertices (codimension-`n` faces), sorted.
    pub fn maximal_faces(&self) -> &[Face] {
        &self.maximal
    }

    /// Number of vertices containing the facet.
    pub fn facet_degree(&self, facet: FacetId) -> usize {
        self.degree[facet.0]
    }

    pub fn face_count(&self) -> usize {
        self.all.len()
    }

    pub fn contains(&self, face: &Face) -> bool {
        self.all.contains(face)
    }

    /// Faces of codimension `k`, lexicographically ordered.
    pub fn faces_of_codim(&self, k: usize) -> Result<&[Face], FaceError> {
        self.by_codim
            .get(k)
            .map(Vec::as_slice)
            .ok_or(FaceError::CodimOutOfRange { k, n: self.n })
    }

    /// All faces ordered by codimension, then lexicographically.
    pub fn faces(&self) -> impl Iterator<Item = &Face> {
        self.by_codim.iter().flatten()
    }

    /// Face counts indexed by codimension.
    pub fn face_counts(&self) -> Vec<usize> {
        self.by_codim.iter().map(Vec::len).collect()
    }

    /// The face cut out by exactly these facets.
    pub fn smallest_face(&self, facets: &[FacetId]) -> Result<Face, FaceError> {
        let face = Face::from_indices(facets.iter().map(|f| f.0));
        if self.all.contains(&face) {
            Ok(face)
        } else {
            Err(FaceError::NoSuchFace(face))
        }
    }

    /// Nerve of the `n`-simplex: `n + 1` facets, every `n` of them meet in a vertex.
    pub fn simplex(n: usize) -> Self {
        let vertices: Vec<Vec<usize>> = (0..=n)
            .map(|skip| (0..=n).filter(|&i| i != skip).collect())
            .collect();
        Self::build(n, n + 1, &vertices).expect("simplex nerve is valid")
    }

    /// Nerve of an `m`-gon, facets numbered cyclically (`m >= 3`).
    pub fn polygon(m: usize) -> Result<Self, FaceError> {
        if m < 3 {
            return Err(FaceError::BadDimension { n: 2, m });
        }
        let vertices: Vec<Vec<usize>> = (0..m).map(|i| vec![i, (i + 1) % m]).collect();
        Self::build(2, m, &vertices)
    }

    /// Nerve of the product: facets of `a` first, then those of `b` shifted by `a`'s count.
    pub fn product(a: &FaceComplex, b: &FaceComplex) -> Self {
        let vertices: Vec<Vec<usize>> = a
            .maximal
            .iter()
            .flat_map(|u| {
                b.maximal.iter().map(move |v| {
                    u.indices()
                        .chain(v.indices().map(|i| i + a.m))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        Self::build(a.n + b.n, a.m + b.m, &vertices).expect("products of simple complexes are simple")
    }

    /// Whether two facets meet.
    fn adjacent(&self, a: usize, b: usize) -> bool {
        self.all.contains(&Face::from_indices([a, b]))
    }
}

/// Bijection of facet indices: entry `i` is the image of facet `i`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FacetBijection(Vec<usize>);

impl FacetBijection {
    pub fn identity(m: usize) -> Self {
        FacetBijection((0..m).collect())
    }

    /// `None` unless `images` is a permutation of `0..len`.
    pub fn new(images: Vec<usize>) -> Option<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if i >= images.len() || std::mem::replace(&mut seen[i], true) {
                return None;
            }
        }
        Some(FacetBijection(images))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn apply(&self, facet: FacetId) -> FacetId {
        FacetId(self.0[facet.0])
    }

    pub fn map_face(&self, face: &Face) -> Face {
        Face::from_indices(face.indices().map(|i| self.0[i]))
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j] = i;
        }
        FacetBijection(inv)
    }

    /// `self ∘ first`: apply `first`, then `self`.
    pub fn after(&self, first: &FacetBijection) -> Self {
        FacetBijection(first.0.iter().map(|&i| self.0[i]).collect())
    }

    /// Whether this bijection carries the vertices of `a` exactly onto those of `b`.
    pub fn is_isomorphism(&self, a: &FaceComplex, b: &FaceComplex) -> bool {
        if a.n != b.n || a.m != b.m || self.len() != a.m || a.maximal.len() != b.maximal.len() {
            return false;
        }
        let mut images: Vec<Face> = a.maximal.iter().map(|f| self.map_face(f)).collect();
        images.sort();
        images == b.maximal
    }
}

impl fmt::Display for FacetBijection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Every facet bijection carrying the vertex set of `a` onto that of `b`,
/// in lexicographic order.
///
/// Backtracking over facets in index order; candidates are pruned by facet
/// degree and pairwise adjacency, and each vertex is checked as soon as all
/// its facets are assigned.
pub fn isomorphisms(a: &FaceComplex, b: &FaceComplex) -> Vec<FacetBijection> {
    if a.n != b.n || a.m != b.m || a.maximal.len() != b.maximal.len() {
        return Vec::new();
    }
    let mut da = a.degree.clone();
    let mut db = b.degree.clone();
    da.sort_unstable();
    db.sort_unstable();
    if da != db {
        return Vec::new();
    }

    let search = Search::new(a, b);
    (0..b.m)
        .into_par_iter()
        .filter(|&j| a.degree[0] == b.degree[j])
        .map(|j| {
            let mut assign = vec![usize::MAX; a.m];
            let mut used = vec![false; b.m];
            let mut out = Vec::new();
            assign[0] = j;
            used[j] = true;
            if search.vertices_ok(0, &assign) {
                search.extend(1, &mut assign, &mut used, &mut out);
            }
            out
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

struct Search<'a> {
    a: &'a FaceComplex,
    b: &'a FaceComplex,
    adj_a: Vec<Vec<bool>>,
    adj_b: Vec<Vec<bool>>,
    /// Vertices of `a` grouped by their largest facet index.
    closing: Vec<Vec<&'a Face>>,
    maximal_b: HashSet<&'a Face>,
}

impl<'a> Search<'a> {
    fn new(a: &'a FaceComplex, b: &'a FaceComplex) -> Self {
        let adj = |k: &FaceComplex| {
            (0..k.m)
                .map(|i| (0..k.m).map(|j| i != j && k.adjacent(i, j)).collect())
                .collect()
        };
        let mut closing = vec![Vec::new(); a.m];
        for face in &a.maximal {
            let last = face.facets.last().expect("n >= 1").0;
            closing[last].push(face);
        }
        Search {
            a,
            b,
            adj_a: adj(a),
            adj_b: adj(b),
            closing,
            maximal_b: b.maximal.iter().collect(),
        }
    }

    fn vertices_ok(&self, i: usize, assign: &[usize]) -> bool {
        self.closing[i].iter().all(|face| {
            let image = Face::from_indices(face.indices().map(|k| assign[k]));
            self.maximal_b.contains(&image)
        })
    }

    fn extend(
        &self,
        i: usize,
        assign: &mut Vec<usize>,
        used: &mut Vec<bool>,
        out: &mut Vec<FacetBijection>,
    ) {
        if i == self.a.m {
            out.push(FacetBijection(assign.clone()));
            return;
        }
        for j in 0..self.b.m {
            if used[j] || self.a.degree[i] != self.b.degree[j] {
                continue;
            }
            if (0..i).any(|k| self.adj_a[i][k] != self.adj_b[j][assign[k]]) {
                continue;
            }
            assign[i] = j;
            if self.vertices_ok(i, assign) {
                used[j] = true;
                self.extend(i + 1, assign, used, out);
                used[j] = false;
            }
            assign[i] = usize::MAX;
        }
    }
}
