//! Skeletal maps of face complexes and the maps they induce on canonical models.
//!
//! A skeletal face map `φ` together with an automorphism `σ ∈ GL(n, Z)` of the
//! torus induces `φ_*(t, x) = (σ t, φ(x))` provided every facet circle is
//! carried into the isotropy subtorus of its image face:
//! `σ Λ(i) ∈ span{Λ'(j) : j ∈ φ({i})}`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::char_pair::{CharError, CharacteristicPair, ModelPoint};
use crate::face_complex::{Face, FaceComplex, FacetBijection, FacetId};
use crate::lattice::{LatticeError, TorusPoint, UnimodularMatrix};

/// Equivalent source points whose images are not equivalent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncompatibilityWitness {
    pub facet: FacetId,
    pub p: ModelPoint,
    pub p_prime: ModelPoint,
    pub image_p: ModelPoint,
    pub image_p_prime: ModelPoint,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MorphismError {
    #[error("face map is undefined on {0}")]
    MissingFace(Face),
    #[error("face map is defined on {0}, which is not a source face")]
    UnknownSourceFace(Face),
    #[error("image {image} of {face} is not a target face")]
    ImageNotFace { face: Face, image: Face },
    #[error("not monotone: {smaller} ⊆ {larger} but their images are not nested")]
    NotMonotone { smaller: Face, larger: Face },
    #[error("not skeletal: {face} (codim {}) maps to {image} (codim {})", face.codim(), image.codim())]
    CodimDecrease { face: Face, image: Face },
    #[error("σ·Λ({}) is not in the isotropy lattice of φ({{{}}})", .0.facet, .0.facet)]
    Incompatible(Box<IncompatibilityWitness>),
    #[error("rank mismatch: expected {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },
    #[error("{0} complex does not match the face map")]
    ComplexMismatch(&'static str),
    #[error("maps are not composable")]
    NotComposable,
    #[error("homotopy parameter {0} outside [0, 1]")]
    ParameterOutOfRange(BigRational),
    #[error("no representative given for face {0}")]
    MissingRep(Face),
    #[error("representatives of {face} and {subface} differ outside the target isotropy")]
    IncoherentReps { face: Face, subface: Face },
    #[error(transparent)]
    Char(#[from] CharError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

impl MorphismError {
    /// Negative answers about well-formed input, as opposed to malformed input.
    pub fn is_violation(&self) -> bool {
        matches!(
            self,
            MorphismError::NotMonotone { .. }
                | MorphismError::CodimDecrease { .. }
                | MorphismError::Incompatible(_)
                | MorphismError::IncoherentReps { .. }
        )
    }
}

/// Checks that `face_map` is a total, monotone, codimension-non-decreasing
/// map from the faces of `source` to faces of `target`.
pub fn check_skeletal(
    source: &FaceComplex,
    target: &FaceComplex,
    face_map: &BTreeMap<Face, Face>,
) -> Result<(), MorphismError> {
    if let Some(extra) = face_map.keys().find(|f| !source.contains(f)) {
        return Err(MorphismError::UnknownSourceFace(extra.clone()));
    }
    let mut faces: Vec<&Face> = source.faces().collect();
    faces.sort();
    for &face in &faces {
        let image = face_map
            .get(face)
            .ok_or_else(|| MorphismError::MissingFace(face.clone()))?;
        if !target.contains(image) {
            return Err(MorphismError::ImageNotFace {
                face: face.clone(),
                image: image.clone(),
            });
        }
    }
    for &face in &faces {
        let image = &face_map[face];
        if image.codim() < face.codim() {
            return Err(MorphismError::CodimDecrease {
                face: face.clone(),
                image: image.clone(),
            });
        }
        // covering relations suffice for monotonicity
        for i in 0..source.facet_count() {
            if face.contains_facet(FacetId(i)) {
                continue;
            }
            let larger = face.union(&Face::from_indices([i]));
            if let Some(larger_image) = face_map.get(&larger) {
                if !image.is_subset_of(larger_image) {
                    return Err(MorphismError::NotMonotone {
                        smaller: face.clone(),
                        larger,
                    });
                }
            }
        }
    }
    Ok(())
}

/// A checked skeletal map between face complexes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkeletalMap {
    source: FaceComplex,
    target: FaceComplex,
    face_map: BTreeMap<Face, Face>,
}

impl SkeletalMap {
    pub fn new(
        source: FaceComplex,
        target: FaceComplex,
        face_map: BTreeMap<Face, Face>,
    ) -> Result<Self, MorphismError> {
        check_skeletal(&source, &target, &face_map)?;
        Ok(SkeletalMap {
            source,
            target,
            face_map,
        })
    }

    /// The face map generated by facet images: `φ(F) = ⋃_{i ∈ F} images[i]`.
    pub fn from_facet_images(
        source: FaceComplex,
        target: FaceComplex,
        images: &[Face],
    ) -> Result<Self, MorphismError> {
        if images.len() != source.facet_count() {
            return Err(MorphismError::RankMismatch {
                expected: source.facet_count(),
                found: images.len(),
            });
        }
        let face_map = source
            .faces()
            .map(|face| {
                let image = face
                    .indices()
                    .fold(Face::whole(), |acc, i| acc.union(&images[i]));
                (face.clone(), image)
            })
            .collect();
        Self::new(source, target, face_map)
    }

    pub fn from_bijection(
        source: FaceComplex,
        target: FaceComplex,
        phi: &FacetBijection,
    ) -> Result<Self, MorphismError> {
        let images: Vec<Face> = (0..phi.len())
            .map(|i| Face::from_indices([phi.apply(FacetId(i)).0]))
            .collect();
        Self::from_facet_images(source, target, &images)
    }

    pub fn identity(complex: FaceComplex) -> Self {
        let face_map = complex.faces().map(|f| (f.clone(), f.clone())).collect();
        SkeletalMap {
            source: complex.clone(),
            target: complex,
            face_map,
        }
    }

    pub fn source(&self) -> &FaceComplex {
        &self.source
    }

    pub fn target(&self) -> &FaceComplex {
        &self.target
    }

    pub fn face_map(&self) -> &BTreeMap<Face, Face> {
        &self.face_map
    }

    /// Image of a source face; `None` if the face is foreign.
    pub fn image(&self, face: &Face) -> Option<&Face> {
        self.face_map.get(face)
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &SkeletalMap) -> Result<SkeletalMap, MorphismError> {
        if first.target != self.source {
            return Err(MorphismError::NotComposable);
        }
        let face_map = first
            .face_map
            .iter()
            .map(|(f, g)| (f.clone(), self.face_map[g].clone()))
            .collect();
        Ok(SkeletalMap {
            source: first.source.clone(),
            target: self.target.clone(),
            face_map,
        })
    }
}

/// A torus automorphism paired with a skeletal map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism {
    pub sigma: UnimodularMatrix,
    pub phi: SkeletalMap,
}

impl Morphism {
    pub fn new(sigma: UnimodularMatrix, phi: SkeletalMap) -> Self {
        Morphism { sigma, phi }
    }

    /// Validates compatibility against the two characteristic pairs.
    pub fn check(
        self,
        source: &CharacteristicPair,
        target: &CharacteristicPair,
    ) -> Result<CheckedMorphism, MorphismError> {
        check_compatibility(&self, source, target)?;
        Ok(CheckedMorphism {
            morphism: self,
            source: source.clone(),
            target: target.clone(),
        })
    }
}

/// Checks `σ Λ(i) ∈ L'(φ({i}))` for every source facet `i`, where `L'(F)` is
/// the isotropy lattice of `F` in the target.
///
/// On failure the error carries two equivalent source points with
/// inequivalent images.
pub fn check_compatibility(
    m: &Morphism,
    source: &CharacteristicPair,
    target: &CharacteristicPair,
) -> Result<(), MorphismError> {
    if source.complex() != m.phi.source() {
        return Err(MorphismError::ComplexMismatch("source"));
    }
    if target.complex() != m.phi.target() {
        return Err(MorphismError::ComplexMismatch("target"));
    }
    let n = m.sigma.dim();
    for found in [source.rank(), target.rank()] {
        if found != n {
            return Err(MorphismError::RankMismatch { expected: n, found });
        }
    }
    let chi = source.characteristic();
    for i in 0..chi.facet_count() {
        let facet = FacetId(i);
        let face = Face::from_indices([i]);
        let image_face = &m.phi.face_map[&face];
        let lattice = target.isotropy_lattice(image_face)?;
        let w = m.sigma.apply(chi.vector(facet))?;
        if lattice.contains(&w)? {
            continue;
        }
        // w is outside the saturated lattice, so some t = λ/N escapes the image subtorus
        let lambda = chi.vector(facet);
        let witness = (2u64..)
            .map(|d| TorusPoint::from_scaled(lambda, &BigRational::new(BigInt::one(), d.into())))
            .find(|t| {
                let image = t.transform(&m.sigma).expect("rank checked");
                !lattice.subtorus_contains(&image).expect("validated lattice")
            })
            .expect("a separating denominator exists");
        let p = ModelPoint::new(TorusPoint::identity(n), face.clone(), "w");
        let p_prime = ModelPoint::new(witness, face, "w");
        let image_p = ModelPoint::new(p.t.transform(&m.sigma)?, image_face.clone(), "w");
        let image_p_prime = ModelPoint::new(p_prime.t.transform(&m.sigma)?, image_face.clone(), "w");
        return Err(MorphismError::Incompatible(Box::new(IncompatibilityWitness {
            facet,
            p,
            p_prime,
            image_p,
            image_p_prime,
        })));
    }
    Ok(())
}

/// A morphism known to be compatible with its source and target pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckedMorphism {
    morphism: Morphism,
    source: CharacteristicPair,
    target: CharacteristicPair,
}

impl CheckedMorphism {
    pub fn identity(pair: &CharacteristicPair) -> Self {
        CheckedMorphism {
            morphism: Morphism::new(
                UnimodularMatrix::identity(pair.rank()),
                SkeletalMap::identity(pair.complex().clone()),
            ),
            source: pair.clone(),
            target: pair.clone(),
        }
    }

    pub fn morphism(&self) -> &Morphism {
        &self.morphism
    }

    pub fn source(&self) -> &CharacteristicPair {
        &self.source
    }

    pub fn target(&self) -> &CharacteristicPair {
        &self.target
    }

    fn image_face(&self, p: &ModelPoint) -> Result<Face, MorphismError> {
        self.source.check_point(p)?;
        Ok(self.morphism.phi.face_map[&p.face].clone())
    }

    /// `φ_*(t, x) = (σ t, φ(x))`.
    pub fn apply(&self, p: &ModelPoint) -> Result<ModelPoint, MorphismError> {
        let face = self.image_face(p)?;
        Ok(ModelPoint::new(
            p.t.transform(&self.morphism.sigma)?,
            face,
            p.tag.clone(),
        ))
    }

    fn rep<'r>(
        &self,
        reps: &'r BTreeMap<Face, TorusPoint>,
        face: &Face,
    ) -> Result<&'r TorusPoint, MorphismError> {
        let rep = reps
            .get(face)
            .ok_or_else(|| MorphismError::MissingRep(face.clone()))?;
        if rep.dim() != self.source.rank() {
            return Err(MorphismError::RankMismatch {
                expected: self.source.rank(),
                found: rep.dim(),
            });
        }
        Ok(rep)
    }

    /// The straight-line homotopy `(σ t + s·λ_x, φ(x))`, where `λ_x` is the
    /// lift of the face representative into `[0, 1)^n`.
    pub fn homotopy_apply(
        &self,
        reps: &BTreeMap<Face, TorusPoint>,
        p: &ModelPoint,
        s: &BigRational,
    ) -> Result<ModelPoint, MorphismError> {
        if s < &BigRational::zero() || s > &BigRational::one() {
            return Err(MorphismError::ParameterOutOfRange(s.clone()));
        }
        let face = self.image_face(p)?;
        let rep = self.rep(reps, &p.face)?;
        let t = p
            .t
            .transform(&self.morphism.sigma)?
            .add(&rep.scale_lift(s))?;
        Ok(ModelPoint::new(t, face, p.tag.clone()))
    }

    /// The end of the homotopy: `(σ t + t_x, φ(x))`.
    pub fn translated_apply(
        &self,
        reps: &BTreeMap<Face, TorusPoint>,
        p: &ModelPoint,
    ) -> Result<ModelPoint, MorphismError> {
        let face = self.image_face(p)?;
        let rep = self.rep(reps, &p.face)?;
        let t = p.t.transform(&self.morphism.sigma)?.add(rep)?;
        Ok(ModelPoint::new(t, face, p.tag.clone()))
    }

    /// Checks that representatives of nested faces agree modulo the target
    /// isotropy of the smaller face's image.
    pub fn check_reps_coherence(
        &self,
        reps: &BTreeMap<Face, TorusPoint>,
    ) -> Result<(), MorphismError> {
        for (face, rep) in reps {
            if !self.source.complex().contains(face) {
                return Err(MorphismError::UnknownSourceFace(face.clone()));
            }
            self.rep(reps, face)?;
            for (subface, sub_rep) in reps.range(face.clone()..) {
                if subface == face || !face.is_subset_of(subface) {
                    continue;
                }
                let image = &self.morphism.phi.face_map[subface];
                let lattice = self.target.isotropy_lattice(image)?;
                if !lattice.subtorus_contains(&sub_rep.sub(rep)?)? {
                    return Err(MorphismError::IncoherentReps {
                        face: face.clone(),
                        subface: subface.clone(),
                    });
                }
            }
        }
        Ok(())
    }

    /// `self ∘ first`, with `σ = σ_self σ_first`.
    pub fn after(&self, first: &CheckedMorphism) -> Result<CheckedMorphism, MorphismError> {
        if first.target != self.source {
            return Err(MorphismError::NotComposable);
        }
        let m = Morphism::new(
            self.morphism.sigma.compose(&first.morphism.sigma),
            self.morphism.phi.after(&first.morphism.phi)?,
        );
        m.check(&first.source, &self.target)
    }
}
