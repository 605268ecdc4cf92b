mod common;

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;

use common::{corpus_pairs, random_pair, scramble};
use torquo_core::char_pair::{CharacteristicFunction, CharacteristicPair};
use torquo_core::classify::{
    enumerate_characteristic, equivalent, group_classes, invariant_signature, Mode,
};
use torquo_core::face_complex::{FaceComplex, FacetId};

type V2 = [i64; 2];

fn hirzebruch(k: i64) -> CharacteristicPair {
    let square = FaceComplex::polygon(4).unwrap();
    let chi = CharacteristicFunction::from_i64(2, &[&[1, 0], &[0, 1], &[1, k], &[0, 1]]).unwrap();
    CharacteristicPair::new(square, chi).unwrap().with_contractible_faces(true)
}

fn small(pair: &CharacteristicPair) -> Vec<V2> {
    pair.characteristic()
        .vectors()
        .iter()
        .map(|v| {
            let x: Vec<i64> = v.iter().map(|c| c.try_into().unwrap()).collect();
            [x[0], x[1]]
        })
        .collect()
}

fn permutations(m: usize) -> Vec<Vec<usize>> {
    if m == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(m - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, m - 1);
            out.push(q);
        }
    }
    out
}

/// Facet permutations carrying the vertex set of one polygon onto another.
fn polygon_isos(vertices: &[[usize; 2]], m: usize) -> Vec<Vec<usize>> {
    let norm = |a: usize, b: usize| if a < b { [a, b] } else { [b, a] };
    let set: Vec<[usize; 2]> = vertices.iter().map(|v| norm(v[0], v[1])).collect();
    permutations(m)
        .into_iter()
        .filter(|p| vertices.iter().all(|v| set.contains(&norm(p[v[0]], p[v[1]]))))
        .collect()
}

/// Independent search: σ solved from the first vertex in plain i64 via the
/// adjugate, then every facet checked up to sign.
fn brute_equivalent(a: &[V2], b: &[V2], vertices: &[[usize; 2]], strict: bool) -> bool {
    let [i, j] = vertices[0];
    let (ai, aj) = (a[i], a[j]);
    let det = ai[0] * aj[1] - aj[0] * ai[1];
    assert_eq!(det.abs(), 1);
    // inverse of the matrix with columns ai, aj
    let inv = [[aj[1] * det, -aj[0] * det], [-ai[1] * det, ai[0] * det]];
    for p in polygon_isos(vertices, a.len()) {
        for (si, sj) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
            let bi = [si * b[p[i]][0], si * b[p[i]][1]];
            let bj = [sj * b[p[j]][0], sj * b[p[j]][1]];
            let sigma = [
                [bi[0] * inv[0][0] + bj[0] * inv[1][0], bi[0] * inv[0][1] + bj[0] * inv[1][1]],
                [bi[1] * inv[0][0] + bj[1] * inv[1][0], bi[1] * inv[0][1] + bj[1] * inv[1][1]],
            ];
            if strict && sigma != [[1, 0], [0, 1]] {
                continue;
            }
            let ok = (0..a.len()).all(|f| {
                let v = a[f];
                let w = [sigma[0][0] * v[0] + sigma[0][1] * v[1], sigma[1][0] * v[0] + sigma[1][1] * v[1]];
                let t = b[p[f]];
                w == t || w == [-t[0], -t[1]]
            });
            if ok {
                return true;
            }
        }
    }
    false
}

const SQUARE: [[usize; 2]; 4] = [[0, 1], [1, 2], [2, 3], [0, 3]];
const TRIANGLE: [[usize; 2]; 3] = [[0, 1], [0, 2], [1, 2]];

#[test]
fn square_has_eight_symmetries() {
    assert_eq!(polygon_isos(&SQUARE, 4).len(), 8);
    assert_eq!(polygon_isos(&TRIANGLE, 3).len(), 6);
}

#[test]
fn hirzebruch_pairs_against_brute_force() {
    for k in -3..=3 {
        for j in -3..=3 {
            let (a, b) = (hirzebruch(k), hirzebruch(j));
            for (mode, strict) in [(Mode::Weak, false), (Mode::Strict, true)] {
                let got = equivalent(&a, &b, mode).unwrap();
                let oracle = brute_equivalent(&small(&a), &small(&b), &SQUARE, strict);
                assert_eq!(got.is_some(), oracle, "k={k} j={j} {mode:?}");
                if let Some(w) = got {
                    assert!(w.verify(&a, &b));
                }
            }
        }
    }
    assert!(!brute_equivalent(&small(&hirzebruch(0)), &small(&hirzebruch(1)), &SQUARE, false));
    for k in 1..=3 {
        assert!(brute_equivalent(&small(&hirzebruch(k)), &small(&hirzebruch(-k)), &SQUARE, false));
    }
}

fn components(n: usize, related: impl Fn(usize, usize) -> bool) -> usize {
    let mut label: Vec<usize> = (0..n).collect();
    for a in 0..n {
        for b in 0..n {
            if related(a, b) {
                let (la, lb) = (label[a], label[b]);
                for l in label.iter_mut() {
                    if *l == lb {
                        *l = la;
                    }
                }
            }
        }
    }
    let mut seen = label.clone();
    seen.sort();
    seen.dedup();
    seen.len()
}

#[test]
fn triangle_class_count_matches_oracle() {
    let triangle = FaceComplex::simplex(2);
    let chis = enumerate_characteristic(&triangle, 1, true);
    assert_eq!(chis.len(), 4);
    let pairs: Vec<CharacteristicPair> = chis
        .into_iter()
        .map(|c| CharacteristicPair::new(triangle.clone(), c).unwrap().with_contractible_faces(true))
        .collect();
    let vecs: Vec<Vec<V2>> = pairs.iter().map(small).collect();
    let oracle = components(vecs.len(), |a, b| brute_equivalent(&vecs[a], &vecs[b], &TRIANGLE, false));
    assert_eq!(oracle, 1);
    assert_eq!(group_classes(&pairs, Mode::Weak).unwrap().len(), oracle);
}

#[test]
fn square_bound_one_classes_match_oracle() {
    let square = FaceComplex::polygon(4).unwrap();
    let pairs: Vec<CharacteristicPair> = enumerate_characteristic(&square, 1, true)
        .into_iter()
        .map(|c| CharacteristicPair::new(square.clone(), c).unwrap().with_contractible_faces(true))
        .collect();
    let vecs: Vec<Vec<V2>> = pairs.iter().map(small).collect();
    let oracle = components(vecs.len(), |a, b| brute_equivalent(&vecs[a], &vecs[b], &SQUARE, false));
    assert_eq!(group_classes(&pairs, Mode::Weak).unwrap().len(), oracle);
}

#[test]
fn scrambles_are_found_and_witnesses_compose() {
    let corpus = corpus_pairs();
    let mut rng = StdRng::seed_from_u64(41);
    for _ in 0..60 {
        let a = random_pair(&mut rng, &corpus);
        let b = scramble(&mut rng, &a);
        let c = scramble(&mut rng, &b);
        let ab = equivalent(&a, &b, Mode::Weak).unwrap().expect("scramble is equivalent");
        let bc = equivalent(&b, &c, Mode::Weak).unwrap().expect("scramble is equivalent");
        assert!(ab.verify(&a, &b));
        assert!(ab.inverse().verify(&b, &a));
        assert!(ab.then(&bc).verify(&a, &c));
        assert!(equivalent(&b, &a, Mode::Weak).unwrap().is_some());
        assert!(equivalent(&a, &c, Mode::Weak).unwrap().is_some());
        assert_eq!(invariant_signature(&a), invariant_signature(&c));
    }
}

#[test]
fn strict_positives_are_weak_positives() {
    let corpus = corpus_pairs();
    let mut rng = StdRng::seed_from_u64(42);
    let mut strict_hits = 0;
    for _ in 0..300 {
        let a = corpus.choose(&mut rng).unwrap();
        let b = corpus.choose(&mut rng).unwrap();
        if a.rank() != b.rank() {
            continue;
        }
        let strict = equivalent(a, b, Mode::Strict).unwrap();
        let weak = equivalent(a, b, Mode::Weak).unwrap();
        if let Some(w) = &strict {
            strict_hits += 1;
            assert!(w.sigma.is_identity());
            assert!(weak.is_some());
        }
        if weak.is_some() {
            assert_eq!(invariant_signature(a), invariant_signature(b));
        }
    }
    assert!(strict_hits > 0);
}

#[test]
fn enumeration_is_closed_under_free_sign_flips() {
    let square = FaceComplex::polygon(4).unwrap();
    let out = enumerate_characteristic(&square, 2, true);
    let pinned: Vec<usize> = square.maximal_faces()[0].indices().collect();
    for chi in &out {
        assert!(torquo_core::char_pair::validate_characteristic(&square, chi).is_ok());
        for i in (0..4).filter(|i| !pinned.contains(i)) {
            let flipped = chi.with_sign_flip(FacetId(i));
            assert!(out.contains(&flipped));
            let a = CharacteristicPair::new(square.clone(), chi.clone()).unwrap().with_contractible_faces(true);
            let b = CharacteristicPair::new(square.clone(), flipped).unwrap().with_contractible_faces(true);
            let w = equivalent(&a, &b, Mode::Strict).unwrap().unwrap();
            assert!(w.verify(&a, &b));
        }
    }
}

#[test]
fn relabelled_complexes_are_recognised() {
    // the square with facets listed in a different order
    let relabel = [2usize, 0, 3, 1];
    let verts: Vec<Vec<usize>> = SQUARE.iter().map(|v| vec![relabel[v[0]], relabel[v[1]]]).collect();
    let other = FaceComplex::build(2, 4, &verts).unwrap();
    for k in -2..=2 {
        let a = hirzebruch(k);
        let mut lambda = vec![Vec::new(); 4];
        for (i, v) in a.characteristic().vectors().iter().enumerate() {
            lambda[relabel[i]] = v.clone();
        }
        let b = CharacteristicPair::new(other.clone(), CharacteristicFunction::new(2, lambda).unwrap())
            .unwrap()
            .with_contractible_faces(true);
        let w = equivalent(&a, &b, Mode::Strict).unwrap().expect("relabelling");
        assert!(w.verify(&a, &b));
    }
}
