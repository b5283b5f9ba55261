//! Phase-I simplex over exact rationals, packaged as a Farkas oracle.
//!
//! Given `A` (m×n) and `b`, [`farkas`] returns either a nonnegative `x`
//! with `A·x = b` or a `y` with `yᵀA ≥ 0` and `yᵀb < 0`. The separator is
//! read off the final phase-I tableau: the reduced cost of artificial `k`
//! is `1 − w_k`, where `w` is the optimal dual of the artificial objective.
//! Rows are scaled to integers up front and pivoting stays fraction-free.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{dimension, Result};
use crate::ratmath::{dot, is_nonnegative, RatMatrix, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FarkasOutcome {
    /// `x ≥ 0` with `A·x = b`.
    Combination { x: Vec<Rational> },
    /// `yᵀA ≥ 0` and `yᵀb < 0`.
    Separator { y: Vec<Rational> },
}

impl FarkasOutcome {
    pub fn is_combination(&self) -> bool {
        matches!(self, FarkasOutcome::Combination { .. })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SimplexStats {
    pub pivots: usize,
}

/// Integer-preserving tableau: the rational entry at `(i, j)` is
/// `cells[i][j] / denom`, where `denom` is the last pivot (always positive).
/// Each pivot divides exactly by the previous pivot, so no gcds are taken.
struct Tableau {
    rows: usize,
    width: usize,
    // row-major, `width` = structural + artificial + rhs
    cells: Vec<BigInt>,
    // reduced costs, last entry holds minus the objective value
    cost: Vec<BigInt>,
    denom: BigInt,
    basis: Vec<usize>,
}

impl Tableau {
    fn at(&self, i: usize, j: usize) -> &BigInt {
        &self.cells[i * self.width + j]
    }

    fn rhs(&self, i: usize) -> &BigInt {
        self.at(i, self.width - 1)
    }

    /// Bland: lowest-index column with negative reduced cost.
    fn entering(&self) -> Option<usize> {
        self.cost[..self.width - 1].iter().position(Signed::is_negative)
    }

    /// Minimum ratio; ties go to the lowest-index basic variable.
    fn leaving(&self, col: usize) -> Option<usize> {
        let mut best: Option<usize> = None;
        for i in 0..self.rows {
            if !self.at(i, col).is_positive() {
                continue;
            }
            let better = match best {
                None => true,
                Some(k) => {
                    // rhs_i / a_i  vs  rhs_k / a_k, both denominators positive
                    let lhs = self.rhs(i) * self.at(k, col);
                    let rhs = self.rhs(k) * self.at(i, col);
                    lhs < rhs || (lhs == rhs && self.basis[i] < self.basis[k])
                }
            };
            if better {
                best = Some(i);
            }
        }
        best
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let w = self.width;
        let p = self.at(row, col).clone();
        let pivot_row: Vec<BigInt> = self.cells[row * w..(row + 1) * w].to_vec();
        let update = |line: &mut [BigInt], denom: &BigInt| {
            let factor = line[col].clone();
            for (x, r) in line.iter_mut().zip(&pivot_row) {
                let mut t = &p * &*x;
                if !factor.is_zero() && !r.is_zero() {
                    t -= &factor * r;
                }
                *x = if denom.is_one() { t } else { t.div_floor(denom) };
            }
        };
        for i in 0..self.rows {
            if i != row {
                update(&mut self.cells[i * w..(i + 1) * w], &self.denom);
            }
        }
        update(&mut self.cost, &self.denom);
        self.denom = p;
        self.basis[row] = col;
    }

    fn value(&self, x: &BigInt) -> Rational {
        Rational::new(x.clone(), self.denom.clone())
    }
}

fn lcm_of_denominators<'a>(values: impl Iterator<Item = &'a Rational>) -> BigInt {
    values.fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

/// Decides which Farkas alternative holds for `(A, b)`.
pub fn farkas(a: &RatMatrix, b: &[Rational]) -> Result<FarkasOutcome> {
    farkas_with_stats(a, b).map(|(outcome, _)| outcome)
}

/// [`farkas`], also reporting the number of simplex pivots performed.
pub fn farkas_with_stats(a: &RatMatrix, b: &[Rational]) -> Result<(FarkasOutcome, SimplexStats)> {
    let (m, n) = (a.rows(), a.cols());
    if b.len() != m {
        return Err(dimension(format!("right-hand side has length {}, matrix has {m} rows", b.len())));
    }
    let mut stats = SimplexStats::default();
    if b.iter().all(Zero::is_zero) {
        return Ok((FarkasOutcome::Combination { x: vec![Rational::zero(); n] }, stats));
    }

    // Row i is scaled by s_i = ±lcm(denominators), sign chosen so the
    // scaled right-hand side is nonnegative and the artificials start feasible.
    let scales: Vec<BigInt> = (0..m)
        .map(|i| {
            let l = lcm_of_denominators(a.row(i).iter().chain(std::iter::once(&b[i])));
            if b[i].is_negative() {
                -l
            } else {
                l
            }
        })
        .collect();
    let width = n + m + 1;
    let mut cells = vec![BigInt::zero(); m * width];
    let mut cost = vec![BigInt::zero(); width];
    for i in 0..m {
        let s = Rational::from_integer(scales[i].clone());
        for j in 0..n {
            let v = (&a[(i, j)] * &s).to_integer();
            cost[j] -= &v;
            cells[i * width + j] = v;
        }
        cells[i * width + n + i] = BigInt::one();
        let r = (&b[i] * &s).to_integer();
        cost[width - 1] -= &r;
        cells[i * width + width - 1] = r;
    }
    let mut t = Tableau { rows: m, width, cells, cost, denom: BigInt::one(), basis: (n..n + m).collect() };

    while let Some(col) = t.entering() {
        let row = t.leaving(col).expect("phase-I objective is bounded below");
        t.pivot(row, col);
        stats.pivots += 1;
    }

    let outcome = if t.cost[width - 1].is_zero() {
        let mut x = vec![Rational::zero(); n];
        for (i, &var) in t.basis.iter().enumerate() {
            if var < n {
                x[var] = t.value(t.rhs(i));
            }
        }
        FarkasOutcome::Combination { x }
    } else {
        // Dual of the phase-I objective: w_k = 1 − (reduced cost of artificial k).
        let y = (0..m)
            .map(|k| {
                let dual = Rational::one() - t.value(&t.cost[n + k]);
                -(dual * &scales[k])
            })
            .collect();
        FarkasOutcome::Separator { y }
    };
    debug_assert!(verify_outcome(a, b, &outcome));
    Ok((outcome, stats))
}

/// Re-checks the branch invariants of `outcome` exactly.
pub fn verify_outcome(a: &RatMatrix, b: &[Rational], outcome: &FarkasOutcome) -> bool {
    if b.len() != a.rows() {
        return false;
    }
    match outcome {
        FarkasOutcome::Combination { x } => {
            x.len() == a.cols() && is_nonnegative(x) && a.mul_vec(x).is_ok_and(|ax| ax == b)
        }
        FarkasOutcome::Separator { y } => {
            y.len() == a.rows()
                && a.vec_mul(y).is_ok_and(|ya| is_nonnegative(&ya))
                && dot(y, b).is_negative()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratmath::int;

    fn v(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn identity_combination() {
        let a = RatMatrix::identity(2);
        let out = farkas(&a, &v(&[1, 1])).unwrap();
        assert_eq!(out, FarkasOutcome::Combination { x: v(&[1, 1]) });
    }

    #[test]
    fn identity_separator() {
        let a = RatMatrix::identity(2);
        let b = v(&[-1, 0]);
        let out = farkas(&a, &b).unwrap();
        assert!(verify_outcome(&a, &b, &out));
        assert_eq!(out, FarkasOutcome::Separator { y: v(&[1, 0]) });
    }

    #[test]
    fn line_cone_separator() {
        // Columns a and −a with a = (1,1); b = (0,2) is off the line.
        let a = RatMatrix::from_i64(&[[1, -1], [1, -1]]);
        let b = v(&[0, 2]);
        // No x ≥ 0: both rows read x1 − x2, which cannot be 0 and 2 at once.
        let out = farkas(&a, &b).unwrap();
        assert!(!out.is_combination());
        assert!(verify_outcome(&a, &b, &out));
        let stated = FarkasOutcome::Separator { y: v(&[1, -1]) };
        assert!(verify_outcome(&a, &b, &stated));
    }

    #[test]
    fn zero_rhs() {
        let a = RatMatrix::from_i64(&[[1, 2, 3]]);
        assert_eq!(farkas(&a, &v(&[0])).unwrap(), FarkasOutcome::Combination { x: v(&[0, 0, 0]) });
    }

    #[test]
    fn dimension_error() {
        assert!(farkas(&RatMatrix::identity(2), &v(&[1])).is_err());
    }

    #[test]
    fn verification_rejects_bad_certificates() {
        let a = RatMatrix::identity(2);
        let b = v(&[1, 1]);
        assert!(verify_outcome(&a, &b, &FarkasOutcome::Combination { x: v(&[1, 1]) }));
        assert!(!verify_outcome(&a, &b, &FarkasOutcome::Combination { x: v(&[-1, 1]) }));
        // yᵀb = 0 is not strict.
        let b0 = v(&[0, 1]);
        assert!(!verify_outcome(&a, &b0, &FarkasOutcome::Separator { y: v(&[1, 0]) }));
        assert!(!verify_outcome(&a, &b, &FarkasOutcome::Separator { y: v(&[1]) }));
    }

    #[test]
    fn degenerate_cycling_candidate() {
        // Beale-style degenerate system; Bland's rule must terminate.
        let a = RatMatrix::from_i64(&[[1, 0, 0, 1, -2], [0, 1, 0, 2, -5], [0, 0, 1, 1, 0]]);
        let b = v(&[0, 0, 1]);
        let (out, stats) = farkas_with_stats(&a, &b).unwrap();
        assert!(verify_outcome(&a, &b, &out));
        assert!(stats.pivots <= 56);
    }
}
