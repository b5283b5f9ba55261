mod common;

use arbigeom::arbitrage::{detect, detect_with_stats, verify_verdict, PayoffMatrix};
use arbigeom::arrangement::{orthant_census, SignVector};
use arbigeom::cones::{decompose, lineality, split_point, Cone};
use arbigeom::lpcore::{farkas, farkas_with_stats, verify_outcome, FarkasOutcome};
use arbigeom::montecarlo::sample_gaussian_matrix;
use arbigeom::ratmath::{add, dot, int, ratio, RatMatrix, Rational};
use num_traits::Zero;
use proptest::prelude::*;
use rand::Rng;
use std::collections::HashSet;

use common::{binomial, feasible_by_vertices, random_int_matrix, rng};

fn small_matrix(max_m: usize, max_n: usize, range: i64) -> impl Strategy<Value = RatMatrix> {
    (1..=max_m, 1..=max_n).prop_flat_map(move |(m, n)| {
        proptest::collection::vec(-range..=range, m * n)
            .prop_map(move |vals| RatMatrix::new(m, n, vals.into_iter().map(int).collect()).unwrap())
    })
}

fn matrix_and_rhs() -> impl Strategy<Value = (RatMatrix, Vec<Rational>)> {
    small_matrix(3, 3, 3).prop_flat_map(|a| {
        let m = a.rows();
        (Just(a), proptest::collection::vec((-3i64..=3).prop_map(int), m))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn farkas_agrees_with_vertex_enumeration((a, b) in matrix_and_rhs()) {
        let (outcome, stats) = farkas_with_stats(&a, &b).unwrap();
        prop_assert!(verify_outcome(&a, &b, &outcome));
        prop_assert_eq!(outcome.is_combination(), feasible_by_vertices(&a, &b));
        let bound = binomial((a.rows() + a.cols()) as u64, a.rows() as u64);
        prop_assert!(stats.pivots as u128 <= bound);
    }

    #[test]
    fn farkas_tag_is_scale_invariant((a, b) in matrix_and_rhs(), num in 1i64..20, den in 1i64..20) {
        let lambda = ratio(num, den);
        let scaled: Vec<Rational> = b.iter().map(|x| x * &lambda).collect();
        prop_assert_eq!(
            farkas(&a, &b).unwrap().is_combination(),
            farkas(&a, &scaled).unwrap().is_combination()
        );
    }

    #[test]
    fn detect_tag_survives_column_rescaling(a in small_matrix(5, 4, 4), col in 0usize..4, num in -9i64..=9, den in 1i64..9) {
        prop_assume!(num != 0);
        let a = PayoffMatrix::new(a).unwrap();
        let col = col % a.n();
        let mut b = a.matrix().clone();
        for i in 0..b.rows() {
            b[(i, col)] *= ratio(num, den);
        }
        let b = PayoffMatrix::new(b).unwrap();
        let (va, vb) = (detect(&a), detect(&b));
        prop_assert!(verify_verdict(&a, &va) && verify_verdict(&b, &vb));
        prop_assert_eq!(va.is_arbitrage(), vb.is_arbitrage());
    }

    #[test]
    fn full_row_rank_means_arbitrage(a in small_matrix(4, 5, 3)) {
        prop_assume!(a.rank() == a.rows());
        prop_assert!(detect(&PayoffMatrix::new(a).unwrap()).is_arbitrage());
    }

    #[test]
    fn adjoining_a_negated_column_keeps_no_arbitrage(a in small_matrix(5, 3, 3), col in 0usize..3) {
        let p = PayoffMatrix::new(a.clone()).unwrap();
        prop_assume!(!detect(&p).is_arbitrage());
        let mut cols = a.columns();
        let neg: Vec<Rational> = cols[col % cols.len()].iter().map(|x| -x).collect();
        cols.push(neg);
        let bigger = PayoffMatrix::new(RatMatrix::from_columns(&cols).unwrap()).unwrap();
        prop_assert!(!detect(&bigger).is_arbitrage());
    }

    #[test]
    fn census_is_reflection_equivariant(a in small_matrix(4, 3, 2), omega_mask in 0u64..16) {
        let p = PayoffMatrix::new(a).unwrap();
        let omega = SignVector::from_mask(p.m(), omega_mask & ((1 << p.m()) - 1));
        let base = orthant_census(&p).unwrap();
        let flipped = orthant_census(&p.reflect(&omega).unwrap()).unwrap();
        for delta in SignVector::all(p.m()) {
            prop_assert_eq!(flipped.hit(&(&omega * &delta)), base.hit(&delta));
            prop_assert_eq!(base.hit(&delta), base.hit(&-&delta));
        }
        prop_assert_eq!(base.count, base.hit_vectors().len());
    }
}

#[test]
fn census_hits_match_orthant_witnesses() {
    // Every reported hit must be certified: detect on the reflected matrix
    // gives a portfolio whose payoff lies in the orthant.
    let p = sample_gaussian_matrix(5, 2, 99, 0);
    let census = orthant_census(&p).unwrap();
    for delta in SignVector::all(5) {
        let reflected = p.reflect(&delta).unwrap();
        match detect(&reflected) {
            arbigeom::ArbitrageVerdict::Arbitrage { v } => {
                assert!(census.hit(&delta));
                assert!(delta.contains(&p.matrix().mul_vec(&v).unwrap()));
            }
            arbigeom::ArbitrageVerdict::NoArbitrage { .. } => assert!(!census.hit(&delta)),
        }
    }
}

/// Nonnegative integer combinations with coefficients ≤ `cap`.
fn grid_points(gens: &[Vec<Rational>], dim: usize, cap: i64) -> Vec<Vec<Rational>> {
    let mut points = vec![vec![Rational::zero(); dim]];
    for g in gens {
        let mut next = Vec::with_capacity(points.len() * (cap as usize + 1));
        for p in &points {
            for c in 0..=cap {
                next.push(add(p, &g.iter().map(|x| x * int(c)).collect::<Vec<_>>()));
            }
        }
        points = next;
    }
    points
}

fn neg(v: &[Rational]) -> Vec<Rational> {
    v.iter().map(|x| -x).collect()
}

#[test]
fn lineality_matches_brute_force() {
    let mut r = rng(21);
    let mut grid_hits = 0;
    for _ in 0..300 {
        let m = r.gen_range(1..=3);
        let n = r.gen_range(1..=4);
        let a = random_int_matrix(&mut r, m, n, -2, 2);
        let gens = a.columns();
        let cone = Cone::new(m, gens.clone()).unwrap();
        let basis = lineality(&cone);

        // A grid witness d, −d ∈ C forces a nonempty lineality space.
        let points: HashSet<Vec<Rational>> = grid_points(&gens, m, 4).into_iter().collect();
        let grid_found = points.iter().any(|p| !p.iter().all(Zero::is_zero) && points.contains(&neg(p)));
        if grid_found {
            grid_hits += 1;
            assert!(!basis.is_empty(), "grid witness missed for {gens:?}");
        }

        // Converse, by vertex enumeration: basis vectors lie in C ∩ −C, and
        // an empty basis means no nonzero generator is reversible.
        for d in &basis {
            assert!(feasible_by_vertices(&a, d) && feasible_by_vertices(&a, &neg(d)), "{gens:?}");
        }
        if basis.is_empty() {
            for g in gens.iter().filter(|g| !g.iter().all(Zero::is_zero)) {
                assert!(!feasible_by_vertices(&a, &neg(g)), "{gens:?}");
            }
        }
    }
    assert!(grid_hits > 0);
}

#[test]
fn split_reconstructs_random_members() {
    let mut r = rng(22);
    let mut checked = 0;
    while checked < 200 {
        let m = r.gen_range(1..=4);
        let n = r.gen_range(1..=5);
        let a = random_int_matrix(&mut r, m, n, -3, 3);
        let cone = Cone::from_matrix(&a).unwrap();
        let d = decompose(&cone);
        for _ in 0..10 {
            let coeffs: Vec<Rational> = (0..n).map(|_| ratio(r.gen_range(0..=5), r.gen_range(1..=4))).collect();
            let x = a.mul_vec(&coeffs).unwrap();
            let (u, v) = split_point(&d, &x).unwrap();
            assert_eq!(add(&u, &v), x);
            assert!(dot(&u, &v).is_zero());
            checked += 1;
        }
    }
}

#[test]
fn pointed_cones_admit_no_normalized_zero_combination() {
    let mut r = rng(23);
    let mut seen = 0;
    while seen < 100 {
        let m = r.gen_range(2..=4);
        let n = r.gen_range(1..=5);
        let a = random_int_matrix(&mut r, m, n, -3, 3);
        let gens: Vec<Vec<Rational>> = a.columns().into_iter().filter(|g| !g.iter().all(Zero::is_zero)).collect();
        if gens.is_empty() {
            continue;
        }
        let cone = Cone::new(m, gens.clone()).unwrap();
        let pointed = lineality(&cone).is_empty();
        let mut stacked = gens.clone();
        for g in &mut stacked {
            g.push(int(1));
        }
        let stacked = RatMatrix::from_columns(&stacked).unwrap();
        let mut target = vec![Rational::zero(); m + 1];
        target[m] = int(1);
        let zero_combination = farkas(&stacked, &target).unwrap().is_combination();
        assert_eq!(pointed, !zero_combination, "generators {gens:?}");
        seen += 1;
    }
}

#[test]
fn dichotomy_over_integer_corpus() {
    let mut r = rng(24);
    for _ in 0..300 {
        let m = r.gen_range(1..=5);
        let n = r.gen_range(1..=5);
        let p = PayoffMatrix::new(random_int_matrix(&mut r, m, n, -2, 2)).unwrap();
        let (verdict, stats) = detect_with_stats(&p);
        assert!(verify_verdict(&p, &verdict));
        assert!(stats.pivots as u128 <= binomial((m + n + 1) as u64, m as u64));
    }
}

#[test]
fn separator_on_degenerate_system_verifies() {
    let a = RatMatrix::from_i64(&[[1, 1], [1, 1], [0, 0]]);
    let b = vec![int(1), int(2), int(0)];
    let out = farkas(&a, &b).unwrap();
    assert!(matches!(out, FarkasOutcome::Separator { .. }));
    assert!(verify_outcome(&a, &b, &out));
}
