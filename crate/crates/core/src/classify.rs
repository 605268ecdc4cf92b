//! Equivariant classification of characteristic pairs.
//!
//! Over complexes whose faces are all contractible, two canonical models are
//! equivariantly homeomorphic exactly when their pairs are related by a face
//! complex isomorphism `φ`, a torus automorphism `σ ∈ GL(n, Z)` and a sign per
//! facet: `σ Λ(i) = ±Λ'(φ(i))`. Strict equivalence fixes `σ = id`.
//!
//! The search is finite: fixing the first vertex `v` of the source, whose
//! vectors form a basis, `σ` is determined by `φ` and the `2^n` signs at `v`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::char_pair::{validate_characteristic, CharacteristicFunction, CharacteristicPair};
use crate::face_complex::{isomorphisms, FaceComplex, FacetBijection, FacetId};
use crate::lattice::{extends_to_basis, is_primitive, IntMatrix, UnimodularMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    /// `σ = id`: `T`-equivariant homeomorphism.
    Strict,
    /// Any `σ ∈ GL(n, Z)`: `σ`-equivariant homeomorphism.
    Weak,
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "strict" => Ok(Mode::Strict),
            "weak" => Ok(Mode::Weak),
            other => Err(format!("unknown mode `{other}` (expected strict or weak)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("pair {0} does not declare contractible faces")]
    NotContractible(&'static str),
}

/// Data of an equivalence `A → B`: `σ Λ_A(i) = signs[i] · Λ_B(φ(i))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivalenceWitness {
    pub phi: FacetBijection,
    pub sigma: UnimodularMatrix,
    pub signs: Vec<i8>,
}

/// `Some(s)` when `u = s·v` with `s = ±1`.
fn sign_relating(u: &[BigInt], v: &[BigInt]) -> Option<i8> {
    if u == v {
        Some(1)
    } else if u.iter().zip(v).all(|(a, b)| a == &-b) {
        Some(-1)
    } else {
        None
    }
}

impl EquivalenceWitness {
    pub fn identity(pair: &CharacteristicPair) -> Self {
        let m = pair.complex().facet_count();
        EquivalenceWitness {
            phi: FacetBijection::identity(m),
            sigma: UnimodularMatrix::identity(pair.rank()),
            signs: vec![1; m],
        }
    }

    /// Re-checks every defining equation exactly.
    pub fn verify(&self, a: &CharacteristicPair, b: &CharacteristicPair) -> bool {
        let m = a.complex().facet_count();
        if a.rank() != b.rank()
            || self.sigma.dim() != a.rank()
            || self.signs.len() != m
            || !self.sigma.determinant().abs().is_one()
            || !self.phi.is_isomorphism(a.complex(), b.complex())
        {
            return false;
        }
        (0..m).all(|i| {
            let image = self
                .sigma
                .apply(a.characteristic().vector(FacetId(i)))
                .expect("rank checked");
            let target = b.characteristic().vector(self.phi.apply(FacetId(i)));
            sign_relating(&image, target) == Some(self.signs[i])
        })
    }

    /// The witness `B → A`.
    pub fn inverse(&self) -> Self {
        let phi = self.phi.inverse();
        let signs = phi.images().iter().map(|&i| self.signs[i]).collect();
        EquivalenceWitness {
            phi,
            sigma: self.sigma.inverse(),
            signs,
        }
    }

    /// Composes `self: A → B` with `next: B → C`.
    pub fn then(&self, next: &EquivalenceWitness) -> Self {
        let signs = self
            .phi
            .images()
            .iter()
            .zip(&self.signs)
            .map(|(&j, &s)| s * next.signs[j])
            .collect();
        EquivalenceWitness {
            phi: next.phi.after(&self.phi),
            sigma: next.sigma.compose(&self.sigma),
            signs,
        }
    }
}

impl fmt::Display for EquivalenceWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "phi: {}", self.phi)?;
        writeln!(f, "sigma: {}", self.sigma)?;
        write!(f, "signs: {:?}", self.signs)
    }
}

/// Cheap necessary condition for equivalence.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct InvariantSignature {
    pub n: usize,
    pub facets: usize,
    pub face_counts: Vec<usize>,
    /// Sorted `|det|` over vertices; all ones for valid pairs.
    pub vertex_dets: Vec<BigInt>,
    pub fixed_points: usize,
}

impl fmt::Display for InvariantSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dets: Vec<String> = self.vertex_dets.iter().map(ToString::to_string).collect();
        write!(
            f,
            "n={} m={} faces={:?} dets=[{}] fixed_points={}",
            self.n,
            self.facets,
            self.face_counts,
            dets.join(","),
            self.fixed_points
        )
    }
}

pub fn invariant_signature(pair: &CharacteristicPair) -> InvariantSignature {
    let mut vertex_dets = pair.vertex_determinants();
    vertex_dets.sort();
    InvariantSignature {
        n: pair.rank(),
        facets: pair.complex().facet_count(),
        face_counts: pair.complex().face_counts(),
        vertex_dets,
        fixed_points: pair.fixed_point_count(),
    }
}

/// Matrix whose columns are the characteristic vectors of `face`'s facets.
fn vertex_matrix(chi: &CharacteristicFunction, facets: &[usize]) -> IntMatrix {
    IntMatrix::from_rows(chi.rank(), &facets.iter().map(|&i| chi.vector(FacetId(i)).to_vec()).collect::<Vec<_>>())
        .expect("rank-length vectors")
        .transpose()
}

/// Decides equivalence and returns a witness `A → B` if one exists.
///
/// Candidates are tried in a fixed order (isomorphisms lexicographically,
/// then sign vectors lexicographically with `+1 < -1`), so the witness is
/// deterministic regardless of parallelism.
pub fn equivalent(
    a: &CharacteristicPair,
    b: &CharacteristicPair,
    mode: Mode,
) -> Result<Option<EquivalenceWitness>, ClassifyError> {
    if a.rank() != b.rank() {
        return Err(ClassifyError::RankMismatch(a.rank(), b.rank()));
    }
    if !a.contractible_faces() {
        return Err(ClassifyError::NotContractible("A"));
    }
    if !b.contractible_faces() {
        return Err(ClassifyError::NotContractible("B"));
    }
    if invariant_signature(a) != invariant_signature(b) {
        return Ok(None);
    }
    let n = a.rank();
    let base: Vec<usize> = a.complex().maximal_faces()[0].indices().collect();
    let base_inv = UnimodularMatrix::new(vertex_matrix(a.characteristic(), &base))
        .expect("vertex vectors form a basis")
        .inverse();

    let isos = isomorphisms(a.complex(), b.complex());
    let found = isos.par_iter().find_map_first(|phi| {
        let images: Vec<usize> = base.iter().map(|&i| phi.apply(FacetId(i)).0).collect();
        let target = vertex_matrix(b.characteristic(), &images);
        (0u64..1 << n).find_map(|mask| {
            let mut cols = target.clone();
            for j in 0..n {
                if mask >> (n - 1 - j) & 1 == 1 {
                    for r in 0..n {
                        let v = -&cols[(r, j)];
                        cols[(r, j)] = v;
                    }
                }
            }
            let sigma = UnimodularMatrix::new(&cols * base_inv.matrix()).ok()?;
            if mode == Mode::Strict && !sigma.is_identity() {
                return None;
            }
            let signs = (0..a.complex().facet_count())
                .map(|i| {
                    let image = sigma.apply(a.characteristic().vector(FacetId(i))).ok()?;
                    sign_relating(&image, b.characteristic().vector(phi.apply(FacetId(i))))
                })
                .collect::<Option<Vec<i8>>>()?;
            Some(EquivalenceWitness {
                phi: phi.clone(),
                sigma,
                signs,
            })
        })
    });
    debug_assert!(found.as_ref().is_none_or(|w| w.verify(a, b)));
    Ok(found)
}

/// Partitions `pairs` into equivalence classes (indices, in input order).
pub fn group_classes(
    pairs: &[CharacteristicPair],
    mode: Mode,
) -> Result<Vec<Vec<usize>>, ClassifyError> {
    let mut classes: Vec<Vec<usize>> = Vec::new();
    'next: for (i, pair) in pairs.iter().enumerate() {
        for class in classes.iter_mut() {
            if equivalent(&pairs[class[0]], pair, mode)?.is_some() {
                class.push(i);
                continue 'next;
            }
        }
        classes.push(vec![i]);
    }
    Ok(classes)
}

/// Primitive vectors of `[-bound, bound]^n` in lexicographic order.
fn primitive_vectors(n: usize, bound: i64) -> Vec<Vec<BigInt>> {
    let mut out = Vec::new();
    let mut cur = vec![-bound; n];
    loop {
        let v: Vec<BigInt> = cur.iter().map(|&x| BigInt::from(x)).collect();
        if is_primitive(&v) {
            out.push(v);
        }
        let Some(pos) = cur.iter().rposition(|&x| x < bound) else {
            return out;
        };
        cur[pos] += 1;
        for x in &mut cur[pos + 1..] {
            *x = -bound;
        }
    }
}

struct Enumerator<'a> {
    complex: &'a FaceComplex,
    n: usize,
    options: Vec<Vec<Vec<BigInt>>>,
    /// For each facet `i`, the vertices through `i` restricted to facets `<= i`.
    checks: Vec<Vec<Vec<usize>>>,
}

impl Enumerator<'_> {
    fn consistent(&self, i: usize, assign: &[Vec<BigInt>]) -> bool {
        self.checks[i].iter().all(|facets| {
            let rows: Vec<Vec<BigInt>> = facets.iter().map(|&j| assign[j].clone()).collect();
            extends_to_basis(&rows, self.n).expect("at most n rows")
        })
    }

    fn extend(&self, assign: &mut Vec<Vec<BigInt>>, out: &mut Vec<Vec<Vec<BigInt>>>) {
        let i = assign.len();
        if i == self.complex.facet_count() {
            out.push(assign.clone());
            return;
        }
        for v in &self.options[i] {
            assign.push(v.clone());
            if self.consistent(i, assign) {
                self.extend(assign, out);
            }
            assign.pop();
        }
    }

    /// Valid assignments of the first `depth` facets, in order.
    fn prefixes(&self, depth: usize) -> Vec<Vec<Vec<BigInt>>> {
        let mut layer = vec![Vec::new()];
        for i in 0..depth {
            layer = layer
                .into_iter()
                .flat_map(|prefix| {
                    self.options[i].iter().filter_map(move |v| {
                        let mut next = prefix.clone();
                        next.push(v.clone());
                        self.consistent(i, &next).then_some(next)
                    })
                })
                .collect();
        }
        layer
    }
}

/// All characteristic functions on `complex` with entries in `[-bound, bound]`,
/// lexicographically sorted.
///
/// With `normalize`, the facets of the first vertex are pinned to the standard
/// basis in order; every valid function is weakly equivalent to a pinned one.
pub fn enumerate_characteristic(
    complex: &FaceComplex,
    bound: u32,
    normalize: bool,
) -> Vec<CharacteristicFunction> {
    let n = complex.dim();
    let m = complex.facet_count();
    let candidates = primitive_vectors(n, i64::from(bound));
    let mut options = vec![candidates; m];
    if normalize {
        for (j, facet) in complex.maximal_faces()[0].indices().enumerate() {
            let mut e = vec![BigInt::zero(); n];
            e[j] = BigInt::one();
            options[facet] = vec![e];
        }
    }
    let mut checks = vec![Vec::new(); m];
    for vertex in complex.maximal_faces() {
        for i in vertex.indices() {
            checks[i].push(vertex.indices().filter(|&j| j <= i).collect());
        }
    }
    let search = Enumerator {
        complex,
        n,
        options,
        checks,
    };

    // split the tree at the first facet with a real choice
    let depth = (0..m)
        .find(|&i| search.options[i].len() > 1)
        .map_or(m, |i| i + 1);
    let mut found: Vec<Vec<Vec<BigInt>>> = search
        .prefixes(depth)
        .into_par_iter()
        .map(|mut prefix| {
            let mut out = Vec::new();
            search.extend(&mut prefix, &mut out);
            out
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();
    found.sort();
    found
        .into_iter()
        .map(|lambda| {
            let chi = CharacteristicFunction::new(n, lambda).expect("primitive vectors");
            debug_assert!(validate_characteristic(complex, &chi).is_ok());
            chi
        })
        .collect()
}
