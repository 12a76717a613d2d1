mod common;

use common::*;
use k3cycles::arith::{int, rat, Rational};
use k3cycles::cycle::ThreeSpace;
use k3cycles::hnf::is_saturated;
use k3cycles::matrix::Matrix;
use k3cycles::quadspace::{e8_gram, k3_e, k3_f, IntegralLattice};
use k3cycles::roots::{
    bounded_root_search, enumerate_norm_vectors, enumerate_short_vectors, orthogonal_complement_lattice,
    roots_orthogonal_to_threespace,
};
use k3cycles::Error;
use num::{BigInt, One, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

fn rational_gram(g: &[Vec<i64>]) -> Matrix<Rational> {
    Matrix::from_rows(g.iter().map(|r| rational_vec(r)).collect()).unwrap()
}

fn lib_norm_vectors(g: &[Vec<i64>], target: i64) -> Vec<Vec<i64>> {
    enumerate_norm_vectors(&rational_gram(g), &int(target))
        .unwrap()
        .iter()
        .map(|v| small(v))
        .collect()
}

fn e8_naive() -> Vec<Vec<i64>> {
    naive_box_search(&to_i64_rows(&e8_gram()), 2)
}

fn lattice_from(g: &[Vec<i64>]) -> IntegralLattice {
    IntegralLattice::from_gram(Matrix::from_rows(g.iter().map(|r| big(r)).collect()).unwrap()).unwrap()
}

#[test]
fn small_enumeration_examples() {
    assert_eq!(lib_norm_vectors(&[vec![2]], 2), vec![vec![-1], vec![1]]);
    let a2 = vec![vec![2, -1], vec![-1, 2]];
    let got = lib_norm_vectors(&a2, 2);
    assert_eq!(got.len(), 6);
    assert_eq!(got, naive_box_search(&a2, 2));
    assert!(matches!(
        enumerate_norm_vectors(&rational_gram(&[vec![0, 1], vec![1, 0]]), &int(2)),
        Err(Error::NotPositiveDefinite)
    ));
}

#[test]
fn e8_roots_match_naive_box_search() {
    let naive = e8_naive();
    assert_eq!(naive.len(), 240);
    assert_eq!(lib_norm_vectors(&to_i64_rows(&e8_gram()), 2), naive);
}

#[test]
fn float_enumerator_agrees_on_e8() {
    let g = to_i64_rows(&e8_gram());
    let roots: Vec<Vec<i64>> = float_short_vectors(&g, 2.0)
        .into_iter()
        .filter(|x| quad_i64(&g, x) == 2)
        .collect();
    assert_eq!(roots, e8_naive());
}

#[test]
fn short_vectors_include_zero_and_respect_box() {
    let g = to_i64_rows(&e8_gram());
    let all = enumerate_short_vectors(&rational_gram(&g), &int(4), None).unwrap();
    assert!(all.iter().any(|v| v.iter().all(Zero::is_zero)));
    let naive: usize = (0..=4).map(|t| naive_box_search(&g, t).len()).sum();
    assert_eq!(all.len(), naive);
    let boxed = enumerate_short_vectors(&rational_gram(&g), &int(4), Some(1)).unwrap();
    let expect = all
        .iter()
        .filter(|v| v.iter().all(|x| x <= &BigInt::one() && x >= &-BigInt::one()))
        .count();
    assert_eq!(boxed.len(), expect);
}

#[test]
fn frame_complement_has_486_roots_by_orthogonal_sum() {
    let l = k3();
    let list = roots_orthogonal_to_threespace(&l, &u3_diagonal()).unwrap();
    assert!(list.complete());
    assert_eq!(list.len(), 486);
    let got: Vec<Vec<i64>> = list.roots().iter().map(|v| small(v)).collect();
    assert_eq!(got, frame_complement_roots(&e8_naive()));
}

#[test]
fn float_enumerator_reproduces_486_on_the_complement() {
    let l = k3();
    let frame: Vec<Vec<Rational>> = frame_rows().iter().map(|r| rational_vec(r)).collect();
    let c = orthogonal_complement_lattice(&l, &frame).unwrap();
    let neg: Vec<Vec<i64>> = to_i64_rows(c.restricted_gram()).iter().map(|r| r.iter().map(|x| -x).collect()).collect();
    let hits = float_short_vectors(&neg, 2.0).into_iter().filter(|x| quad_i64(&neg, x) == 2).count();
    assert_eq!(hits, 486);
}

#[test]
fn frame_complement_structure() {
    let l = k3();
    let frame: Vec<Vec<Rational>> = frame_rows().iter().map(|r| rational_vec(r)).collect();
    let c = orthogonal_complement_lattice(&l, &frame).unwrap();
    assert_eq!(c.rank(), 19);
    let rows = c.basis().to_rows();
    for r in &rows {
        for f in frame_rows() {
            assert!(l.pair(r, &big(&f)).unwrap().is_zero());
        }
    }
    assert!(maximal_minor_gcd(&rows).is_one());
    let gram = c.restricted_gram();
    let direct = c.basis().matmul(l.gram()).unwrap().matmul(&c.basis().transpose()).unwrap();
    assert_eq!(gram, &direct);
    // diag(−2)³ ⊕ E8(−1)² has determinant −8 in any basis
    assert_eq!(gram.to_rational().determinant().unwrap(), int(-8));
}

#[test]
fn trivial_complements() {
    let u = lattice_from(&[vec![0, 1], vec![1, 0]]);
    let c = orthogonal_complement_lattice(&u, &[rational_vec(&[1, 0])]).unwrap();
    assert_eq!(c.rank(), 1);
    let b = small(&c.basis().to_rows()[0]);
    assert!(b == vec![1, 0] || b == vec![-1, 0]);
    assert!(c.restricted_gram()[(0, 0)].is_zero());

    let l = k3();
    let full = orthogonal_complement_lattice(&l, &[]).unwrap();
    assert_eq!(full.rank(), 22);
    assert_eq!(full.basis(), &Matrix::from_fn(22, 22, |i, j| BigInt::from((i == j) as i32)));
}

#[test]
fn complements_are_saturated_for_random_constraints() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    // U ⊕ U ⊕ A2(−1) ⊕ ⟨−2⟩ ⊕ ⟨4⟩
    let g = vec![
        vec![0, 1, 0, 0, 0, 0, 0, 0],
        vec![1, 0, 0, 0, 0, 0, 0, 0],
        vec![0, 0, 0, 1, 0, 0, 0, 0],
        vec![0, 0, 1, 0, 0, 0, 0, 0],
        vec![0, 0, 0, 0, -2, 1, 0, 0],
        vec![0, 0, 0, 0, 1, -2, 0, 0],
        vec![0, 0, 0, 0, 0, 0, -2, 0],
        vec![0, 0, 0, 0, 0, 0, 0, 4],
    ];
    let l = lattice_from(&g);
    for _ in 0..60 {
        let k = rng.gen_range(1..=3);
        let cons: Vec<Vec<Rational>> = (0..k)
            .map(|_| (0..8).map(|_| rat(rng.gen_range(-4..=4), rng.gen_range(1..=3))).collect())
            .collect();
        let cm = Matrix::from_rows(cons.clone()).unwrap();
        let c = orthogonal_complement_lattice(&l, &cons).unwrap();
        assert_eq!(c.rank(), 8 - cm.rank());
        let rows = c.basis().to_rows();
        for r in &rows {
            let rq: Vec<Rational> = r.iter().map(|x| Rational::from_integer(x.clone())).collect();
            for con in &cons {
                assert!(l.space().pair(&rq, con).unwrap().is_zero());
            }
        }
        if !rows.is_empty() {
            assert!(maximal_minor_gcd(&rows).is_one());
            assert!(is_saturated(c.basis()));
        }
    }
}

#[test]
fn perturbed_frame_has_no_orthogonal_roots() {
    let l = k3();
    let v = v_prime();
    assert!(v.is_positive() && v.is_real());
    let list = roots_orthogonal_to_threespace(&l, &v).unwrap();
    assert!(list.complete());
    assert!(list.is_empty());

    // independent certificate: the complement is the unique saturated rank-19
    // sublattice orthogonal to V′, and a float search finds no norm −2 vector
    let c = orthogonal_complement_lattice(&l, &v.real_constraints()).unwrap();
    assert_eq!(c.rank(), 19);
    let rows = c.basis().to_rows();
    for r in &rows {
        for vr in V_PRIME {
            assert!(l.pair(r, &big(&vr)).unwrap().is_zero());
        }
    }
    assert!(maximal_minor_gcd(&rows).is_one());
    let neg: Vec<Vec<i64>> = to_i64_rows(c.restricted_gram()).iter().map(|r| r.iter().map(|x| -x).collect()).collect();
    let short = float_short_vectors(&neg, 2.0);
    assert!(short.iter().all(|x| quad_i64(&neg, x) != 2));
    // only the zero vector has norm ≤ 2 here
    assert!(short.iter().all(|x| quad_i64(&neg, x) == 0));
}

#[test]
fn non_positive_space_is_rejected() {
    let l = k3();
    let mut rows = frame_rows();
    rows[2] = vec![0; 22];
    rows[2][k3_e(3)] = 1;
    rows[2][k3_f(3)] = -1;
    let v = real_space(&l, &rows);
    assert!(matches!(roots_orthogonal_to_threespace(&l, &v), Err(Error::NotPositive(_))));
}

#[test]
fn bounded_search_examples() {
    let l = k3();
    let cons = vec![rational_vec(&frame_rows()[0]), rational_vec(&frame_rows()[1])];
    let list = bounded_root_search(&l, &cons, 1).unwrap();
    assert!(!list.complete());
    assert_eq!(list.bound(), Some(1));
    let mut r = vec![0i64; 22];
    r[k3_e(3)] = 1;
    r[k3_f(3)] = -1;
    assert!(list.contains(&big(&r)));
    assert!(list.contains(&big(&r.iter().map(|x| -x).collect::<Vec<_>>())));
    for root in list.roots() {
        assert_eq!(l.norm(root).unwrap(), BigInt::from(-2));
        for c in &cons {
            let rq: Vec<Rational> = root.iter().map(|x| Rational::from_integer(x.clone())).collect();
            assert!(l.space().pair(&rq, c).unwrap().is_zero());
        }
    }
    assert!(bounded_root_search(&l, &cons, 0).unwrap().is_empty());

    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let full: Vec<Vec<Rational>> = loop {
        let m: Vec<Vec<Rational>> = (0..22)
            .map(|_| (0..22).map(|_| rat(rng.gen_range(-3..=3), rng.gen_range(1..=2))).collect())
            .collect();
        if Matrix::from_rows(m.clone()).unwrap().rank() == 22 {
            break m;
        }
    };
    assert!(bounded_root_search(&l, &full, 5).unwrap().is_empty());
}

#[test]
fn bounded_search_matches_box_walk_in_complement_coordinates() {
    let g = vec![
        vec![0, 1, 0, 0, 0, 0, 0, 0],
        vec![1, 0, 0, 0, 0, 0, 0, 0],
        vec![0, 0, 0, 1, 0, 0, 0, 0],
        vec![0, 0, 1, 0, 0, 0, 0, 0],
        vec![0, 0, 0, 0, -2, 1, 0, 0],
        vec![0, 0, 0, 0, 1, -2, 0, 0],
        vec![0, 0, 0, 0, 0, 0, -2, 1],
        vec![0, 0, 0, 0, 0, 0, 1, -2],
    ];
    let l = lattice_from(&g);
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..6 {
        let con: Vec<Rational> = (0..8).map(|_| int(rng.gen_range(-2..=2))).collect();
        if con.iter().all(Zero::is_zero) {
            continue;
        }
        let bound = 2i64;
        let list = bounded_root_search(&l, &[con.clone()], bound as u64).unwrap();
        let c = orthogonal_complement_lattice(&l, &[con]).unwrap();
        let h = to_i64_rows(c.restricted_gram());
        let r = h.len();
        let mut expect = BTreeSet::new();
        let mut y = vec![-bound; r];
        'walk: loop {
            if quad_i64(&h, &y) == -2 {
                expect.insert(small(&c.embed(&big(&y))));
            }
            for k in 0..r {
                if y[k] < bound {
                    y[k] += 1;
                    continue 'walk;
                }
                y[k] = -bound;
            }
            break;
        }
        let got: BTreeSet<Vec<i64>> = list.roots().iter().map(|v| small(v)).collect();
        assert_eq!(got, expect);
        assert!(!got.is_empty());
    }
}

#[test]
fn root_lists_are_closed_under_negation_and_sorted() {
    let l = k3();
    let list = roots_orthogonal_to_threespace(&l, &u3_diagonal()).unwrap();
    let roots = list.roots();
    assert!(roots.windows(2).all(|w| w[0] < w[1]));
    for r in roots {
        let neg: Vec<BigInt> = r.iter().map(|x| -x).collect();
        assert!(list.contains(&neg));
        assert_eq!(l.norm(r).unwrap(), BigInt::from(-2));
    }
}

#[test]
fn three_space_sanity() {
    let l = k3();
    let v: ThreeSpace = u3_diagonal();
    assert!(v.is_real() && v.is_positive() && v.is_smooth());
    assert_eq!(v.ambient(), l.space());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn enumerator_agrees_with_naive_box_search(
        n in 1usize..=5,
        a in prop::collection::vec(-2i64..=2, 25),
        target in 1i64..=6,
    ) {
        // g = aᵀa + I is positive definite
        let g: Vec<Vec<i64>> = (0..n)
            .map(|i| (0..n).map(|j| (0..n).map(|k| a[5 * k + i] * a[5 * k + j]).sum::<i64>() + (i == j) as i64).collect())
            .collect();
        prop_assert_eq!(lib_norm_vectors(&g, target), naive_box_search(&g, target));
        let short: Vec<Vec<i64>> = enumerate_short_vectors(&rational_gram(&g), &int(target), None)
            .unwrap()
            .iter()
            .map(|v| small(v))
            .collect();
        let float: Vec<Vec<i64>> = float_short_vectors(&g, target as f64)
            .into_iter()
            .filter(|x| quad_i64(&g, x) <= target)
            .collect();
        prop_assert_eq!(short, float);
    }
}
