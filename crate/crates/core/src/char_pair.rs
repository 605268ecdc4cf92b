//! Characteristic functions and the canonical model `M_X(Λ) = T × X / ~`.
//!
//! `(t, x) ~ (t', x')` iff `x = x'` and `t' - t` lies in the isotropy subtorus
//! of the face carrying `x`, the subtorus whose Lie lattice is spanned by the
//! characteristic vectors of the facets through `x`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Signed;
use thiserror::Error;

use crate::face_complex::{Face, FaceComplex, FacetId};
use crate::lattice::{extends_to_basis, is_primitive, LatticeError, Sublattice, TorusPoint};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CharError {
    #[error("facet {facet}: expected a vector of length {expected}, found {found}")]
    VectorLength {
        facet: FacetId,
        expected: usize,
        found: usize,
    },
    #[error("facet {0}: characteristic vector is not primitive")]
    NotPrimitive(FacetId),
    #[error("rank mismatch: complex has dimension {complex}, characteristic function rank {function}")]
    RankMismatch { complex: usize, function: usize },
    #[error("complex has {complex} facets but {function} characteristic vectors were given")]
    FacetCountMismatch { complex: usize, function: usize },
    #[error("characteristic vectors at face {0} do not extend to a basis")]
    Violation(Face),
    #[error("{0} is not a face of the complex")]
    UnknownFace(Face),
    #[error("point does not belong to this model: {0}")]
    ForeignPoint(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// One primitive vector of `Z^n` per facet, naming the circle that fixes it.
///
/// Only the circle is intrinsic; the sign of each vector is data.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CharacteristicFunction {
    n: usize,
    lambda: Vec<Vec<BigInt>>,
}

impl CharacteristicFunction {
    pub fn new(n: usize, lambda: Vec<Vec<BigInt>>) -> Result<Self, CharError> {
        for (i, v) in lambda.iter().enumerate() {
            if v.len() != n {
                return Err(CharError::VectorLength {
                    facet: FacetId(i),
                    expected: n,
                    found: v.len(),
                });
            }
            if !is_primitive(v) {
                return Err(CharError::NotPrimitive(FacetId(i)));
            }
        }
        Ok(CharacteristicFunction { n, lambda })
    }

    pub fn from_i64(n: usize, lambda: &[&[i64]]) -> Result<Self, CharError> {
        Self::new(
            n,
            lambda
                .iter()
                .map(|v| v.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn facet_count(&self) -> usize {
        self.lambda.len()
    }

    pub fn vector(&self, facet: FacetId) -> &[BigInt] {
        &self.lambda[facet.0]
    }

    pub fn vectors(&self) -> &[Vec<BigInt>] {
        &self.lambda
    }

    pub fn vectors_at(&self, face: &Face) -> Vec<Vec<BigInt>> {
        face.indices().map(|i| self.lambda[i].clone()).collect()
    }

    /// Same circles, with the sign of one vector reversed.
    pub fn with_sign_flip(&self, facet: FacetId) -> Self {
        let mut out = self.clone();
        for x in &mut out.lambda[facet.0] {
            *x = -&*x;
        }
        out
    }
}

impl fmt::Display for CharacteristicFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, v) in self.lambda.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str("(")?;
            for (j, x) in v.iter().enumerate() {
                if j > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{x}")?;
            }
            f.write_str(")")?;
        }
        f.write_str("]")
    }
}

/// Checks that the vectors at every face extend to a basis of `Z^n`.
///
/// Faces are scanned in lexicographic order and the first failure is reported.
pub fn validate_characteristic(
    complex: &FaceComplex,
    chi: &CharacteristicFunction,
) -> Result<(), CharError> {
    if complex.dim() != chi.rank() {
        return Err(CharError::RankMismatch {
            complex: complex.dim(),
            function: chi.rank(),
        });
    }
    if complex.facet_count() != chi.facet_count() {
        return Err(CharError::FacetCountMismatch {
            complex: complex.facet_count(),
            function: chi.facet_count(),
        });
    }
    let mut faces: Vec<&Face> = complex.faces().collect();
    faces.sort();
    for face in faces {
        if !extends_to_basis(&chi.vectors_at(face), chi.rank())? {
            return Err(CharError::Violation(face.clone()));
        }
    }
    Ok(())
}

/// Point of the canonical model: a torus coordinate over the relative
/// interior of `face`, at the interior point named by `tag`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ModelPoint {
    pub t: TorusPoint,
    pub face: Face,
    pub tag: String,
}

impl ModelPoint {
    pub fn new(t: TorusPoint, face: Face, tag: impl Into<String>) -> Self {
        ModelPoint {
            t,
            face,
            tag: tag.into(),
        }
    }
}

impl fmt::Display for ModelPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}; {}; {})", self.t, self.face, self.tag)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StratumRow {
    pub face: Face,
    pub codim: usize,
    pub isotropy_rank: usize,
    /// Real dimension `2(n - codim)` of the stratum in the model.
    pub dim: usize,
}

/// A face complex with a characteristic function that passed validation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacteristicPair {
    complex: FaceComplex,
    chi: CharacteristicFunction,
    contractible_faces: bool,
}

impl CharacteristicPair {
    pub fn new(complex: FaceComplex, chi: CharacteristicFunction) -> Result<Self, CharError> {
        validate_characteristic(&complex, &chi)?;
        Ok(CharacteristicPair {
            complex,
            chi,
            contractible_faces: false,
        })
    }

    /// Declares that every face (and the whole space) is contractible.
    ///
    /// This is an input assumption; it cannot be checked from the nerve.
    pub fn with_contractible_faces(mut self, contractible: bool) -> Self {
        self.contractible_faces = contractible;
        self
    }

    pub fn contractible_faces(&self) -> bool {
        self.contractible_faces
    }

    pub fn complex(&self) -> &FaceComplex {
        &self.complex
    }

    pub fn characteristic(&self) -> &CharacteristicFunction {
        &self.chi
    }

    pub fn rank(&self) -> usize {
        self.chi.rank()
    }

    /// Lie lattice of the isotropy subtorus of `face`.
    pub fn isotropy_lattice(&self, face: &Face) -> Result<Sublattice, CharError> {
        if !self.complex.contains(face) {
            return Err(CharError::UnknownFace(face.clone()));
        }
        Ok(Sublattice::span(self.rank(), &self.chi.vectors_at(face))?)
    }

    /// Rejects points whose face or torus rank does not belong to this pair.
    pub fn check_point(&self, p: &ModelPoint) -> Result<(), CharError> {
        if !self.complex.contains(&p.face) {
            return Err(CharError::ForeignPoint(format!("{} is not a face", p.face)));
        }
        if p.t.dim() != self.rank() {
            return Err(CharError::ForeignPoint(format!(
                "torus coordinate has rank {}, expected {}",
                p.t.dim(),
                self.rank()
            )));
        }
        Ok(())
    }

    /// Whether `p` and `q` name the same point of `M_X(Λ)`.
    pub fn model_points_equal(&self, p: &ModelPoint, q: &ModelPoint) -> Result<bool, CharError> {
        self.check_point(p)?;
        self.check_point(q)?;
        if p.face != q.face || p.tag != q.tag {
            return Ok(false);
        }
        let diff = q.t.sub(&p.t)?;
        Ok(self.isotropy_lattice(&p.face)?.subtorus_contains(&diff)?)
    }

    /// One row per face, sorted by codimension then face.
    pub fn orbit_strata(&self) -> Vec<StratumRow> {
        let n = self.rank();
        self.complex
            .faces()
            .map(|face| StratumRow {
                face: face.clone(),
                codim: face.codim(),
                isotropy_rank: self
                    .isotropy_lattice(face)
                    .expect("faces of the complex")
                    .rank(),
                dim: 2 * (n - face.codim()),
            })
            .collect()
    }

    /// Torus-fixed points, one per vertex; also the Euler characteristic of the model.
    pub fn fixed_point_count(&self) -> usize {
        self.complex.maximal_faces().len()
    }

    /// `|det|` of the characteristic vectors at each vertex.
    pub fn vertex_determinants(&self) -> Vec<BigInt> {
        self.complex
            .maximal_faces()
            .iter()
            .map(|v| {
                crate::lattice::IntMatrix::from_rows(self.rank(), &self.chi.vectors_at(v))
                    .and_then(|m| m.determinant())
                    .expect("vertex matrices are square")
                    .abs()
            })
            .collect()
    }
}
