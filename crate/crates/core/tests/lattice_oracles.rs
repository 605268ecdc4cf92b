mod common;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use common::{big, random_matrix, random_unimodular, to_big};
use torquo_core::lattice::{
    complete_to_basis, extends_to_basis, snf, IntMatrix, Sublattice, TorusPoint,
};

/// Laplace expansion, independent of the library's elimination code.
fn det_laplace(m: &[Vec<i64>]) -> i128 {
    match m.len() {
        0 => 1,
        1 => m[0][0] as i128,
        n => (0..n)
            .map(|j| {
                let minor: Vec<Vec<i64>> = m[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect())
                    .collect();
                let sign = if j % 2 == 0 { 1 } else { -1 };
                sign * m[0][j] as i128 * det_laplace(&minor)
            })
            .sum(),
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n)
        .filter(|s| s.count_ones() as usize == k)
        .map(|s| (0..n).filter(|&i| s >> i & 1 == 1).collect())
        .collect()
}

/// gcd of all k x k minors.
fn minor_gcd(m: &[Vec<i64>], k: usize) -> i128 {
    let cols = m.first().map_or(0, Vec::len);
    let mut g: i128 = 0;
    for rs in subsets(m.len(), k) {
        for cs in subsets(cols, k) {
            let sub: Vec<Vec<i64>> = rs.iter().map(|&r| cs.iter().map(|&c| m[r][c]).collect()).collect();
            g = g.gcd(&det_laplace(&sub));
        }
    }
    g
}

#[test]
fn snf_matches_minor_gcds() {
    let mut rng = StdRng::seed_from_u64(11);
    for trial in 0..400 {
        let (rows, cols) = if trial < 200 {
            (3, 4)
        } else {
            (rng.gen_range(1..=4), rng.gen_range(1..=4))
        };
        let m = random_matrix(&mut rng, rows, cols, -5, 5);
        let im = IntMatrix::from_rows(cols, &to_big(&m)).unwrap();
        let dec = snf(&im);
        assert_eq!(&(dec.u.matrix() * &im) * dec.v.matrix(), dec.d);
        assert!(dec.d.is_diagonal());
        let diag = dec.invariant_factors();
        let mut prod = BigInt::one();
        for (k, d) in diag.iter().enumerate() {
            assert!(!d.is_negative());
            prod *= d;
            assert_eq!(prod, BigInt::from(minor_gcd(&m, k + 1)), "matrix {m:?}, k = {}", k + 1);
        }
        for w in diag.windows(2) {
            assert!(w[0].is_zero() && w[1].is_zero() || !w[0].is_zero() && w[1].is_multiple_of(&w[0]));
        }
    }
}

#[test]
fn extends_to_basis_matches_minor_oracle() {
    let mut rng = StdRng::seed_from_u64(12);
    let mut positives = 0;
    for _ in 0..1000 {
        let n = rng.gen_range(1..=4);
        let k = rng.gen_range(1..=n);
        // narrow ranges make unimodular rows common enough to exercise both answers
        let m = random_matrix(&mut rng, k, n, -2, 2);
        let oracle = minor_gcd(&m, k) == 1;
        assert_eq!(extends_to_basis(&to_big(&m), n).unwrap(), oracle, "{m:?}");
        positives += usize::from(oracle);
    }
    assert!(positives > 100);
}

#[test]
fn completion_is_unimodular_with_prefix() {
    let mut rng = StdRng::seed_from_u64(13);
    let mut done = 0;
    while done < 300 {
        let n = rng.gen_range(1..=4);
        let k = rng.gen_range(0..=n);
        let rows = to_big(&random_matrix(&mut rng, k, n, -3, 3));
        if !extends_to_basis(&rows, n).unwrap() {
            continue;
        }
        let u = complete_to_basis(&rows, n).unwrap();
        assert!(u.determinant().abs().is_one());
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(u.matrix().row(i), row.as_slice());
        }
        done += 1;
    }
    assert_eq!(
        complete_to_basis(&[big(&[2, 3])], 2).unwrap().matrix().row(0),
        big(&[2, 3]).as_slice()
    );
}

/// Exhaustive search over coefficient vectors in [-bound, bound]^k.
fn brute_member(gens: &[Vec<i64>], v: &[i64], bound: i64) -> bool {
    let k = gens.len();
    let mut c = vec![-bound; k];
    loop {
        let ok = (0..v.len()).all(|j| (0..k).map(|i| c[i] * gens[i][j]).sum::<i64>() == v[j]);
        if ok {
            return true;
        }
        let Some(p) = c.iter().rposition(|&x| x < bound) else {
            return false;
        };
        c[p] += 1;
        for x in &mut c[p + 1..] {
            *x = -bound;
        }
    }
}

#[test]
fn membership_matches_coefficient_search() {
    let mut rng = StdRng::seed_from_u64(14);
    let mut seen = [0usize; 2];
    let mut cases = 0;
    while cases < 300 {
        let n = rng.gen_range(1..=3);
        let k = rng.gen_range(1..=n.min(2));
        let gens = random_matrix(&mut rng, k, n, -3, 3);
        if minor_gcd(&gens, k) == 0 {
            continue; // dependent generators: coefficients are not bounded
        }
        let v: Vec<i64> = if rng.gen_bool(0.5) {
            let c: Vec<i64> = (0..k).map(|_| rng.gen_range(-3..=3)).collect();
            (0..n).map(|j| (0..k).map(|i| c[i] * gens[i][j]).sum()).collect()
        } else {
            (0..n).map(|_| rng.gen_range(-6..=6)).collect()
        };
        let lattice = Sublattice::span(n, &to_big(&gens)).unwrap();
        // |coefficients| <= 36 by Cramer and Hadamard for these ranges
        let oracle = brute_member(&gens, &v, 40);
        assert_eq!(lattice.contains(&big(&v)).unwrap(), oracle, "{gens:?} {v:?}");
        seen[usize::from(oracle)] += 1;
        cases += 1;
    }
    assert!(seen[0] > 20 && seen[1] > 20);
}

#[test]
fn hnf_is_canonical_for_the_span() {
    let mut rng = StdRng::seed_from_u64(15);
    for _ in 0..200 {
        let n = rng.gen_range(1..=4);
        let k = rng.gen_range(1..=4);
        let gens = to_big(&random_matrix(&mut rng, k, n, -4, 4));
        let l = Sublattice::span(n, &gens).unwrap();
        // same span from transformed generators
        let u = random_unimodular(&mut rng, k, 8);
        let mixed = (u.matrix() * &IntMatrix::from_rows(n, &gens).unwrap()).to_rows();
        assert_eq!(Sublattice::span(n, &mixed).unwrap(), l);
        let b = l.basis();
        let mut last_pivot = None;
        for i in 0..b.rows() {
            let p = b.row(i).iter().rposition(|x| !x.is_zero()).unwrap();
            assert!(b[(i, p)].is_positive());
            assert!(last_pivot.is_none_or(|q| p > q));
            for r in i + 1..b.rows() {
                assert!(!b[(r, p)].is_negative() && b[(r, p)] < b[(i, p)]);
            }
            last_pivot = Some(p);
        }
    }
}

fn rows_strategy() -> impl Strategy<Value = (usize, Vec<Vec<i64>>)> {
    (1usize..=4).prop_flat_map(|n| {
        (1usize..=n).prop_flat_map(move |k| {
            (Just(n), prop::collection::vec(prop::collection::vec(-3i64..=3, n), k))
        })
    })
}

proptest! {
    #[test]
    fn extends_to_basis_row_operation_invariance(
        (n, rows) in rows_strategy(),
        a in 0usize..4,
        b in 0usize..4,
        c in -3i64..=3,
    ) {
        let k = rows.len();
        let (a, b) = (a % k, b % k);
        let base = extends_to_basis(&to_big(&rows), n).unwrap();

        let mut swapped = rows.clone();
        swapped.swap(a, b);
        prop_assert_eq!(extends_to_basis(&to_big(&swapped), n).unwrap(), base);

        let mut negated = rows.clone();
        for x in &mut negated[a] { *x = -*x; }
        prop_assert_eq!(extends_to_basis(&to_big(&negated), n).unwrap(), base);

        if a != b {
            let mut sheared = rows.clone();
            for j in 0..n { sheared[a][j] += c * rows[b][j]; }
            prop_assert_eq!(extends_to_basis(&to_big(&sheared), n).unwrap(), base);
        }
    }

    #[test]
    fn subtorus_is_a_subgroup(seed in any::<u64>(), n in 1usize..=4) {
        let mut rng = StdRng::seed_from_u64(seed);
        let k = rng.gen_range(0..=n);
        let u = random_unimodular(&mut rng, n, 10);
        let gens: Vec<Vec<BigInt>> = (0..k).map(|i| u.matrix().row(i).to_vec()).collect();
        let l = Sublattice::span(n, &gens).unwrap();
        prop_assert!(l.is_saturated());

        let member = |rng: &mut StdRng| {
            let mut t = TorusPoint::identity(n);
            for g in &gens {
                t = t.add(&TorusPoint::from_scaled(g, &common::random_rational(rng))).unwrap();
            }
            t
        };
        let (s, t) = (member(&mut rng), member(&mut rng));
        prop_assert!(l.subtorus_contains(&s).unwrap());
        prop_assert!(l.subtorus_contains(&s.add(&t).unwrap()).unwrap());
        prop_assert!(l.subtorus_contains(&s.neg()).unwrap());

        // a member plus an arbitrary point is a member iff the point is
        let x = common::random_torus_point(&mut rng, n);
        prop_assert_eq!(
            l.subtorus_contains(&x).unwrap(),
            l.subtorus_contains(&x.add(&s).unwrap()).unwrap()
        );
    }
}
