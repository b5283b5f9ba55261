//! The arbitrage / state-price dichotomy, reduced to the Farkas oracle.

use num_traits::{One, Signed, Zero};

use crate::arrangement::SignVector;
use crate::error::{dimension, Error, Result};
use crate::lpcore::{farkas_with_stats, FarkasOutcome, SimplexStats};
use crate::ratmath::{format_vector, is_nonnegative, RatMatrix, Rational};

/// Present-value returns: rows are scenarios, columns are investments.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PayoffMatrix(RatMatrix);

impl PayoffMatrix {
    pub fn new(matrix: RatMatrix) -> Result<Self> {
        if matrix.rows() == 0 || matrix.cols() == 0 {
            return Err(Error::Domain(format!(
                "payoff matrix needs at least one scenario and one investment, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        Ok(Self(matrix))
    }

    pub fn from_i64<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        Self::new(RatMatrix::from_i64(rows)).expect("empty payoff matrix")
    }

    /// Number of scenarios.
    pub fn m(&self) -> usize {
        self.0.rows()
    }

    /// Number of investments.
    pub fn n(&self) -> usize {
        self.0.cols()
    }

    pub fn matrix(&self) -> &RatMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> RatMatrix {
        self.0
    }

    /// `R_δ·A`: row `i` negated wherever `δᵢ = −1`.
    pub fn reflect(&self, delta: &SignVector) -> Result<Self> {
        if delta.len() != self.m() {
            return Err(dimension(format!(
                "sign vector of length {} for {} scenarios",
                delta.len(),
                self.m()
            )));
        }
        let factors: Vec<Rational> = delta.iter().map(|s| s.as_rational()).collect();
        Ok(Self(self.0.scale_rows(&factors)?))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ArbitrageVerdict {
    /// Portfolio `v` with `A·v ≥ 1` in every scenario.
    Arbitrage { v: Vec<Rational> },
    /// State-price probability vector `π` orthogonal to every column.
    NoArbitrage { pi: Vec<Rational> },
}

impl ArbitrageVerdict {
    pub fn is_arbitrage(&self) -> bool {
        matches!(self, ArbitrageVerdict::Arbitrage { .. })
    }

    pub fn tag(&self) -> &'static str {
        match self {
            ArbitrageVerdict::Arbitrage { .. } => "Arbitrage",
            ArbitrageVerdict::NoArbitrage { .. } => "NoArbitrage",
        }
    }

    pub fn certificate(&self) -> &[Rational] {
        match self {
            ArbitrageVerdict::Arbitrage { v } => v,
            ArbitrageVerdict::NoArbitrage { pi } => pi,
        }
    }
}

impl std::fmt::Display for ArbitrageVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ArbitrageVerdict::Arbitrage { v } => write!(f, "ARBITRAGE v={}", format_vector(v)),
            ArbitrageVerdict::NoArbitrage { pi } => write!(f, "NO ARBITRAGE pi={}", format_vector(pi)),
        }
    }
}

/// Decides whether some portfolio has strictly positive payoff in every
/// scenario, returning the certificate of whichever side holds.
pub fn detect(payoff: &PayoffMatrix) -> ArbitrageVerdict {
    detect_with_stats(payoff).0
}

pub fn detect_with_stats(payoff: &PayoffMatrix) -> (ArbitrageVerdict, SimplexStats) {
    let (m, n) = (payoff.m(), payoff.n());
    let a = payoff.matrix();
    // Ã = [Aᵀ; 1ᵀ], b̃ = (0, …, 0, 1)
    let mut stacked = RatMatrix::zeros(n + 1, m);
    for i in 0..m {
        for j in 0..n {
            stacked[(j, i)] = a[(i, j)].clone();
        }
        stacked[(n, i)] = Rational::one();
    }
    let mut target = vec![Rational::zero(); n + 1];
    target[n] = Rational::one();

    let (outcome, stats) = farkas_with_stats(&stacked, &target).expect("dimensions agree by construction");
    let verdict = match outcome {
        FarkasOutcome::Combination { x } => ArbitrageVerdict::NoArbitrage { pi: x },
        FarkasOutcome::Separator { mut y } => {
            let s = y.pop().expect("separator has n + 1 entries");
            debug_assert!(s.is_negative());
            let payoff_vec = a.mul_vec(&y).expect("portfolio length n");
            let floor = payoff_vec.into_iter().min().expect("m ≥ 1");
            debug_assert!(floor >= -s);
            let v = y.iter().map(|vi| vi / &floor).collect();
            ArbitrageVerdict::Arbitrage { v }
        }
    };
    debug_assert!(verify_verdict(payoff, &verdict));
    (verdict, stats)
}

/// [`detect`] on `R_δ·A`; `Arbitrage` means the column space meets orthant δ.
pub fn detect_in_orthant(payoff: &PayoffMatrix, delta: &SignVector) -> Result<ArbitrageVerdict> {
    Ok(detect(&payoff.reflect(delta)?))
}

/// Exact re-check of the verdict invariants.
pub fn verify_verdict(payoff: &PayoffMatrix, verdict: &ArbitrageVerdict) -> bool {
    let a = payoff.matrix();
    match verdict {
        ArbitrageVerdict::Arbitrage { v } => a
            .mul_vec(v)
            .is_ok_and(|av| av.iter().all(|x| *x >= Rational::one())),
        ArbitrageVerdict::NoArbitrage { pi } => {
            pi.len() == payoff.m()
                && is_nonnegative(pi)
                && pi.iter().sum::<Rational>().is_one()
                && a.vec_mul(pi).is_ok_and(|pa| pa.iter().all(Zero::is_zero))
        }
    }
}
