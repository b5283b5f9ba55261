//! Orthant combinatorics of column spaces.
//!
//! A generic n-dimensional subspace of ℝ^m meets exactly `Q(m,n)` of the
//! 2^m open orthants, the same number as the cells cut out of ℝ^n by m
//! codimension-one subspaces in general position.

use std::fmt;
use std::ops::{Mul, Neg};

use num_bigint::BigUint;
use num_integer::binomial;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::arbitrage::{detect_in_orthant, PayoffMatrix};
use crate::error::{dimension, Error, Result};
use crate::ratmath::{determinant, int, Rational};

pub const DEFAULT_CENSUS_CAP: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn as_rational(self) -> Rational {
        match self {
            Sign::Plus => int(1),
            Sign::Minus => int(-1),
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

impl Neg for Sign {
    type Output = Sign;

    fn neg(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl Mul for Sign {
    type Output = Sign;

    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

/// A member of {+1, −1}^m naming the open orthant with those coordinate signs.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignVector(Vec<Sign>);

impl SignVector {
    pub fn new(signs: Vec<Sign>) -> Self {
        Self(signs)
    }

    pub fn all_positive(m: usize) -> Self {
        Self(vec![Sign::Plus; m])
    }

    /// From a slice of ±1 values.
    pub fn from_signs(signs: &[i64]) -> Result<Self> {
        signs
            .iter()
            .map(|&s| match s {
                1 => Ok(Sign::Plus),
                -1 => Ok(Sign::Minus),
                other => Err(Error::Domain(format!("sign entries must be ±1, got {other}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Self)
    }

    /// Bit `i` of `mask` set means coordinate `i` is negative.
    pub fn from_mask(m: usize, mask: u64) -> Self {
        Self((0..m).map(|i| if mask >> i & 1 == 1 { Sign::Minus } else { Sign::Plus }).collect())
    }

    pub fn mask(&self) -> u64 {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, s)| **s == Sign::Minus)
            .fold(0, |acc, (i, _)| acc | 1 << i)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = Sign> + '_ {
        self.0.iter().copied()
    }

    pub fn signs(&self) -> &[Sign] {
        &self.0
    }

    /// Every sign vector of length `m`, ordered by mask.
    pub fn all(m: usize) -> impl Iterator<Item = SignVector> {
        (0..1u64 << m).map(move |mask| SignVector::from_mask(m, mask))
    }

    /// Whether `x` lies in the open orthant.
    pub fn contains(&self, x: &[Rational]) -> bool {
        use num_traits::Signed;
        x.len() == self.len()
            && self.iter().zip(x).all(|(s, xi)| match s {
                Sign::Plus => xi.is_positive(),
                Sign::Minus => xi.is_negative(),
            })
    }
}

impl Neg for &SignVector {
    type Output = SignVector;

    fn neg(self) -> SignVector {
        SignVector(self.0.iter().map(|s| -*s).collect())
    }
}

impl Mul for &SignVector {
    type Output = SignVector;

    fn mul(self, rhs: &SignVector) -> SignVector {
        assert_eq!(self.len(), rhs.len(), "sign vectors of unequal length");
        SignVector(self.0.iter().zip(&rhs.0).map(|(a, b)| *a * *b).collect())
    }
}

impl fmt::Display for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            f.write_str(match s {
                Sign::Plus => "+",
                Sign::Minus => "-",
            })?;
        }
        Ok(())
    }
}

impl Serialize for SignVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// `Q(m,n) = 2·Σ_{k<n} C(m−1, k)`.
///
/// Panics if `m` or `n` is zero.
pub fn q(m: usize, n: usize) -> BigUint {
    assert!(m >= 1 && n >= 1, "Q(m,n) needs m, n ≥ 1");
    let top = BigUint::from(m - 1);
    let sum: BigUint = (0..n.min(m)).map(|k| binomial(top.clone(), BigUint::from(k))).sum();
    sum * 2u32
}

/// `Q(m,n)` by the Pascal-style recursion `Q(m,n) = Q(m−1,n) + Q(m−1,n−1)`,
/// seeded with `Q(m,1) = 2` and `Q(m,n) = 2^m` for `m ≤ n`.
pub fn q_recursive(m: usize, n: usize) -> BigUint {
    assert!(m >= 1 && n >= 1, "Q(m,n) needs m, n ≥ 1");
    // row[j] holds Q(i, j + 1) for the current i
    let mut row: Vec<BigUint> = (1..=n).map(|_| BigUint::from(2u32)).collect();
    for i in 2..=m {
        let prev = row.clone();
        for j in 0..n {
            let cols = j + 1;
            row[j] = if cols == 1 {
                BigUint::from(2u32)
            } else if i <= cols {
                BigUint::one() << i
            } else {
                &prev[j] + &prev[j - 1]
            };
        }
    }
    row.pop().expect("n ≥ 1")
}

/// Number of regions cut out of ℝ^dim by `hyperplanes` affine hyperplanes in
/// general position, as half of `Q(hyperplanes + 1, dim + 1)`.
pub fn affine_hyperplane_regions(hyperplanes: usize, dim: usize) -> BigUint {
    q(hyperplanes + 1, dim + 1) >> 1
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Genericity {
    Generic,
    /// Deleting these rows leaves a singular n×n submatrix.
    Degenerate { deleted_rows: Vec<usize> },
}

impl Genericity {
    pub fn is_generic(&self) -> bool {
        matches!(self, Genericity::Generic)
    }
}

/// Lexicographic k-subsets of `0..n`.
pub(crate) fn combinations(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut current: Option<Vec<usize>> = (k <= n).then(|| (0..k).collect());
    std::iter::from_fn(move || {
        let out = current.clone()?;
        let next = {
            let mut c = out.clone();
            let mut i = k;
            loop {
                if i == 0 {
                    break None;
                }
                i -= 1;
                if c[i] < n - k + i {
                    c[i] += 1;
                    for j in i + 1..k {
                        c[j] = c[j - 1] + 1;
                    }
                    break Some(c);
                }
            }
        };
        current = next;
        Some(out)
    })
}

fn complement(kept: &[usize], m: usize) -> Vec<usize> {
    (0..m).filter(|i| !kept.contains(i)).collect()
}

/// Every n×n submatrix left after deleting m−n rows must be nonsingular.
pub fn is_generic(payoff: &PayoffMatrix) -> Result<Genericity> {
    let (m, n) = (payoff.m(), payoff.n());
    if n > m {
        return Err(dimension(format!("genericity needs n ≤ m, got {m}x{n}")));
    }
    let a = payoff.matrix();
    if a.rank() < n {
        return Ok(Genericity::Degenerate { deleted_rows: (n..m).collect() });
    }
    for kept in combinations(m, n) {
        let minor = a.select_rows(&kept);
        if determinant(&minor)?.is_zero() {
            return Ok(Genericity::Degenerate { deleted_rows: complement(&kept, m) });
        }
    }
    Ok(Genericity::Generic)
}

/// Which orthants a column space meets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrthantCensus {
    pub m: usize,
    pub n: usize,
    hits: Vec<bool>,
    pub count: usize,
}

impl OrthantCensus {
    pub fn hit(&self, delta: &SignVector) -> bool {
        assert_eq!(delta.len(), self.m, "sign vector length");
        self.hits[delta.mask() as usize]
    }

    /// Indexed by [`SignVector::mask`].
    pub fn hits_by_mask(&self) -> &[bool] {
        &self.hits
    }

    /// The met orthants, ordered by mask.
    pub fn hit_vectors(&self) -> Vec<SignVector> {
        self.hits
            .iter()
            .enumerate()
            .filter(|(_, h)| **h)
            .map(|(mask, _)| SignVector::from_mask(self.m, mask as u64))
            .collect()
    }
}

pub fn orthant_census(payoff: &PayoffMatrix) -> Result<OrthantCensus> {
    orthant_census_with_cap(payoff, DEFAULT_CENSUS_CAP)
}

/// Census with an explicit cap on the scenario count. Runs one exact
/// detection per antipodal pair of orthants.
pub fn orthant_census_with_cap(payoff: &PayoffMatrix, max_m: usize) -> Result<OrthantCensus> {
    let (m, n) = (payoff.m(), payoff.n());
    if m > max_m || m >= 64 {
        return Err(Error::CensusTooLarge { m, max: max_m.min(63) });
    }
    let total = 1usize << m;
    let full = (1u64 << m) - 1;
    if payoff.matrix().rank() == m {
        return Ok(OrthantCensus { m, n, hits: vec![true; total], count: total });
    }

    // δ₁ = +1 representatives are the even masks.
    let probe = |k: usize| -> bool {
        let delta = SignVector::from_mask(m, (k as u64) << 1);
        detect_in_orthant(payoff, &delta).expect("sign vector length m").is_arbitrage()
    };
    let half = total / 2;
    #[cfg(feature = "parallel")]
    let reps: Vec<bool> = {
        use rayon::prelude::*;
        (0..half).into_par_iter().map(probe).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let reps: Vec<bool> = (0..half).map(probe).collect();

    let mut hits = vec![false; total];
    for (k, hit) in reps.into_iter().enumerate() {
        let mask = (k as u64) << 1;
        hits[mask as usize] = hit;
        hits[(mask ^ full) as usize] = hit;
    }
    let count = hits.iter().filter(|h| **h).count();
    Ok(OrthantCensus { m, n, hits, count })
}
