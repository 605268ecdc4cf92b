#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

use torquo_core::char_pair::{CharacteristicFunction, CharacteristicPair};
use torquo_core::classify::enumerate_characteristic;
use torquo_core::face_complex::{FaceComplex, FacetId};
use torquo_core::lattice::{IntMatrix, TorusPoint, UnimodularMatrix};

pub fn big(xs: &[i64]) -> Vec<BigInt> {
    xs.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn random_matrix(rng: &mut StdRng, rows: usize, cols: usize, lo: i64, hi: i64) -> Vec<Vec<i64>> {
    (0..rows)
        .map(|_| (0..cols).map(|_| rng.gen_range(lo..=hi)).collect())
        .collect()
}

pub fn to_big(rows: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    rows.iter().map(|r| big(r)).collect()
}

/// Product of random elementary operations, entries kept small.
pub fn random_unimodular(rng: &mut StdRng, n: usize, steps: usize) -> UnimodularMatrix {
    let mut m = vec![vec![0i64; n]; n];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 1;
    }
    for _ in 0..steps {
        match rng.gen_range(0..3) {
            0 if n > 1 => {
                let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
                if a != b {
                    let c = rng.gen_range(-1..=1);
                    let row_b = m[b].clone();
                    for (x, y) in m[a].iter_mut().zip(row_b) {
                        *x += c * y;
                    }
                }
            }
            1 => {
                let a = rng.gen_range(0..n);
                for x in &mut m[a] {
                    *x = -*x;
                }
            }
            _ => {
                let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
                m.swap(a, b);
            }
        }
    }
    let rows: Vec<&[i64]> = m.iter().map(|r| r.as_slice()).collect();
    UnimodularMatrix::new(IntMatrix::from_i64(&rows)).expect("elementary products are unimodular")
}

pub fn random_rational(rng: &mut StdRng) -> BigRational {
    let q: i64 = rng.gen_range(1..=12);
    let p: i64 = rng.gen_range(-2 * q..=2 * q);
    BigRational::new(p.into(), q.into())
}

pub fn random_torus_point(rng: &mut StdRng, n: usize) -> TorusPoint {
    TorusPoint::new((0..n).map(|_| random_rational(rng)).collect())
}

pub fn complexes() -> Vec<(&'static str, FaceComplex)> {
    let seg = FaceComplex::simplex(1);
    vec![
        ("segment", seg.clone()),
        ("triangle", FaceComplex::simplex(2)),
        ("square", FaceComplex::polygon(4).unwrap()),
        ("pentagon", FaceComplex::polygon(5).unwrap()),
        ("tetrahedron", FaceComplex::simplex(3)),
        ("prism", FaceComplex::product(&FaceComplex::simplex(2), &seg)),
    ]
}

/// Every normalized characteristic function with entries in [-1, 1] on each corpus complex.
pub fn corpus_pairs() -> Vec<CharacteristicPair> {
    complexes()
        .into_iter()
        .flat_map(|(_, k)| {
            enumerate_characteristic(&k, 1, true)
                .into_iter()
                .map(move |chi| {
                    CharacteristicPair::new(k.clone(), chi)
                        .unwrap()
                        .with_contractible_faces(true)
                })
        })
        .collect()
}

/// A random GL(n, Z) change of basis and random sign flips applied to `pair`.
pub fn scramble(rng: &mut StdRng, pair: &CharacteristicPair) -> CharacteristicPair {
    let n = pair.rank();
    let sigma = random_unimodular(rng, n, 6);
    let lambda = pair
        .characteristic()
        .vectors()
        .iter()
        .map(|v| {
            let w = sigma.apply(v).unwrap();
            if rng.gen_bool(0.5) {
                w.into_iter().map(|x| -x).collect()
            } else {
                w
            }
        })
        .collect();
    let chi = CharacteristicFunction::new(n, lambda).unwrap();
    CharacteristicPair::new(pair.complex().clone(), chi)
        .unwrap()
        .with_contractible_faces(pair.contractible_faces())
}

pub fn random_pair(rng: &mut StdRng, corpus: &[CharacteristicPair]) -> CharacteristicPair {
    let base = corpus.choose(rng).unwrap();
    scramble(rng, base)
}

/// A point equivalent to `t` over `face`: `t + Σ c_j Λ(j)` for random rational `c_j`.
pub fn equivalent_shift(
    rng: &mut StdRng,
    pair: &CharacteristicPair,
    face: &torquo_core::face_complex::Face,
    t: &TorusPoint,
) -> TorusPoint {
    let mut out = t.clone();
    for i in face.indices() {
        let shift = TorusPoint::from_scaled(pair.characteristic().vector(FacetId(i)), &random_rational(rng));
        out = out.add(&shift).unwrap();
    }
    out
}
