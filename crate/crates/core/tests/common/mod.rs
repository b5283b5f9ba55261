#![allow(dead_code)]

use arbigeom::ratmath::{int, rref, RatMatrix, Rational};
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_int_matrix(rng: &mut ChaCha8Rng, m: usize, n: usize, lo: i64, hi: i64) -> RatMatrix {
    let data = (0..m * n).map(|_| int(rng.gen_range(lo..=hi))).collect();
    RatMatrix::new(m, n, data).unwrap()
}

/// Feasibility of `{x ≥ 0 : A·x = b}` by enumerating column supports: a
/// nonempty set has a vertex, and a vertex is the unique solution on a
/// linearly independent support.
pub fn feasible_by_vertices(a: &RatMatrix, b: &[Rational]) -> bool {
    let (m, n) = (a.rows(), a.cols());
    if b.iter().all(Zero::is_zero) {
        return true;
    }
    for support in 1u32..(1 << n) {
        let cols: Vec<usize> = (0..n).filter(|j| support >> j & 1 == 1).collect();
        let k = cols.len();
        let mut aug = RatMatrix::zeros(m, k + 1);
        for i in 0..m {
            for (c, &j) in cols.iter().enumerate() {
                aug[(i, c)] = a[(i, j)].clone();
            }
            aug[(i, k)] = b[i].clone();
        }
        let r = rref(&aug);
        // Independent support, consistent system.
        if r.pivots != (0..k).collect::<Vec<_>>() {
            continue;
        }
        let x: Vec<Rational> = (0..k).map(|i| r.matrix[(i, k)].clone()).collect();
        if x.iter().all(|v| !v.is_negative()) {
            return true;
        }
    }
    false
}

pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}
