//! Seeded Monte Carlo checks of the arbitrage probability `Q(m,n)/2^m` for
//! reflection-invariant random payoff matrices.
//!
//! Trial `t` of a run with seed `s` draws from ChaCha8 keyed by `s` on
//! stream `t`, so any trial can be regenerated alone and results do not
//! depend on how trials are scheduled across threads.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::arbitrage::{detect_in_orthant, PayoffMatrix};
use crate::arrangement::{orthant_census, q, SignVector};
use crate::error::{Error, Result};
use crate::json;
use crate::ratmath::{rational_from_f64, RatMatrix, Rational};

/// Per-trial standard normal stream (Box–Muller over 53-bit uniforms).
pub struct TrialStream {
    rng: ChaCha8Rng,
    spare: Option<f64>,
}

impl TrialStream {
    pub fn new(seed: u64, trial: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial);
        Self { rng, spare: None }
    }

    /// Uniform on [0, 1) with 53 random bits.
    pub fn next_uniform(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn next_gaussian(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        let u1 = 1.0 - self.next_uniform();
        let u2 = self.next_uniform();
        let radius = (-2.0 * u1.ln()).sqrt();
        let angle = std::f64::consts::TAU * u2;
        self.spare = Some(radius * angle.sin());
        radius * angle.cos()
    }
}

/// m×n matrix of iid N(0,1) entries, each converted exactly to a rational.
pub fn sample_gaussian_matrix(m: usize, n: usize, seed: u64, trial: u64) -> PayoffMatrix {
    let mut stream = TrialStream::new(seed, trial);
    let data = (0..m * n)
        .map(|_| rational_from_f64(stream.next_gaussian()).expect("Box–Muller output is finite"))
        .collect();
    PayoffMatrix::new(RatMatrix::new(m, n, data).expect("m·n entries")).expect("m, n ≥ 1")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimConfig {
    pub m: usize,
    pub n: usize,
    pub trials: u64,
    pub seed: u64,
    pub target_orthant: SignVector,
}

impl SimConfig {
    /// Targets the positive orthant.
    pub fn new(m: usize, n: usize, trials: u64, seed: u64) -> Self {
        Self { m, n, trials, seed, target_orthant: SignVector::all_positive(m) }
    }

    pub fn with_target(mut self, target: SignVector) -> Self {
        self.target_orthant = target;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.m == 0 || self.n == 0 {
            return Err(Error::Domain("simulation needs m, n ≥ 1".into()));
        }
        if self.trials == 0 {
            return Err(Error::Domain("simulation needs at least one trial".into()));
        }
        if self.target_orthant.len() != self.m {
            return Err(Error::Dimension(format!(
                "target orthant of length {} for m = {}",
                self.target_orthant.len(),
                self.m
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimReport {
    pub m: usize,
    pub n: usize,
    pub trials: u64,
    pub seed: u64,
    pub hits: u64,
    pub estimate: f64,
    /// `Q(m,n)/2^m`, in lowest terms.
    pub theoretical: Rational,
    pub std_error: f64,
    pub ci95: (f64, f64),
}

#[derive(Serialize)]
struct SimReportJson {
    m: usize,
    n: usize,
    trials: u64,
    seed: u64,
    hits: u64,
    estimate: f64,
    theoretical_num: serde_json::Number,
    theoretical_den: serde_json::Number,
    std_error: f64,
    ci95_lo: f64,
    ci95_hi: f64,
}

impl SimReport {
    fn from_hits(m: usize, n: usize, trials: u64, seed: u64, hits: u64) -> Self {
        let estimate = hits as f64 / trials as f64;
        let std_error = (estimate * (1.0 - estimate) / trials as f64).sqrt();
        Self {
            m,
            n,
            trials,
            seed,
            hits,
            estimate,
            theoretical: theoretical_probability(m, n),
            std_error,
            ci95: (estimate - 1.96 * std_error, estimate + 1.96 * std_error),
        }
    }

    pub fn theoretical_f64(&self) -> f64 {
        self.theoretical.to_f64().unwrap_or(f64::NAN)
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(SimReportJson {
            m: self.m,
            n: self.n,
            trials: self.trials,
            seed: self.seed,
            hits: self.hits,
            estimate: self.estimate,
            theoretical_num: json::integer(self.theoretical.numer()),
            theoretical_den: json::integer(self.theoretical.denom()),
            std_error: self.std_error,
            ci95_lo: self.ci95.0,
            ci95_hi: self.ci95.1,
        })
        .expect("report serializes")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("report serializes")
    }
}

/// `Q(m,n) / 2^m` as an exact rational.
pub fn theoretical_probability(m: usize, n: usize) -> Rational {
    let den = BigInt::one() << m;
    Rational::new(BigInt::from(q(m, n)), den)
}

fn count_trials<F>(trials: u64, hit: F) -> u64
where
    F: Fn(u64) -> bool + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..trials).into_par_iter().filter(|&t| hit(t)).count() as u64
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..trials).filter(|&t| hit(t)).count() as u64
    }
}

/// Fraction of sampled matrices whose column space meets the target orthant.
pub fn estimate_arbitrage_probability(cfg: &SimConfig) -> Result<SimReport> {
    estimate_with_sampler(cfg, |t| sample_gaussian_matrix(cfg.m, cfg.n, cfg.seed, t))
}

/// [`estimate_arbitrage_probability`] with a caller-supplied sampler for
/// trial `t`; the sampler must return m×n matrices.
pub fn estimate_with_sampler<S>(cfg: &SimConfig, sampler: S) -> Result<SimReport>
where
    S: Fn(u64) -> PayoffMatrix + Sync + Send,
{
    cfg.validate()?;
    let hits = count_trials(cfg.trials, |t| {
        let a = sampler(t);
        detect_in_orthant(&a, &cfg.target_orthant).expect("sampler returns m rows").is_arbitrage()
    });
    Ok(SimReport::from_hits(cfg.m, cfg.n, cfg.trials, cfg.seed, hits))
}

pub const EQUAL_ORTHANT_MAX_M: usize = 6;

#[derive(Clone, Debug, PartialEq)]
pub struct OrthantRates {
    pub m: usize,
    pub n: usize,
    pub trials: u64,
    /// Hit counts indexed by [`SignVector::mask`].
    pub hit_counts: Vec<u64>,
    pub rates: Vec<f64>,
    pub uniform_rate: Rational,
    /// `Some(c)` when every trial's census met exactly `c` orthants.
    pub constant_census_count: Option<usize>,
    /// Every trial hit δ and −δ together.
    pub antipodal_equal: bool,
    pub chi_square: f64,
    pub degrees_of_freedom: usize,
    pub p_value: f64,
}

impl OrthantRates {
    pub fn rate(&self, delta: &SignVector) -> f64 {
        self.rates[delta.mask() as usize]
    }

    pub fn rejects_uniform(&self, alpha: f64) -> bool {
        self.p_value < alpha
    }
}

/// Runs a full orthant census per trial and tests the per-orthant hit rates
/// against the common rate `Q(m,n)/2^m`.
///
/// Orthants δ and −δ are hit together, so the statistic runs over the
/// k = 2^(m−1) antipodal pairs. The pair hits of a generic trial sum to the
/// constant `Q(m,n)/2`, which makes pair indicators negatively correlated;
/// the binomial-variance Pearson sum is scaled by (k−1)/k and referred to
/// χ² with k−1 degrees of freedom.
pub fn equal_orthant_check(cfg: &SimConfig) -> Result<OrthantRates> {
    cfg.validate()?;
    let (m, n) = (cfg.m, cfg.n);
    if m > EQUAL_ORTHANT_MAX_M {
        return Err(Error::Domain(format!(
            "per-orthant statistics are limited to m ≤ {EQUAL_ORTHANT_MAX_M}, got {m}"
        )));
    }
    let total = 1usize << m;
    let census_of = |t: u64| -> Vec<bool> {
        let a = sample_gaussian_matrix(m, n, cfg.seed, t);
        orthant_census(&a).expect("m within cap").hits_by_mask().to_vec()
    };
    #[cfg(feature = "parallel")]
    let per_trial: Vec<Vec<bool>> = {
        use rayon::prelude::*;
        (0..cfg.trials).into_par_iter().map(census_of).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let per_trial: Vec<Vec<bool>> = (0..cfg.trials).map(census_of).collect();

    let full = total - 1;
    let mut hit_counts = vec![0u64; total];
    let mut counts = per_trial.iter().map(|h| h.iter().filter(|x| **x).count());
    let first = counts.next();
    let constant_census_count = first.filter(|&c| counts.all(|x| x == c));
    let mut antipodal_equal = true;
    for hits in &per_trial {
        for (mask, &h) in hits.iter().enumerate() {
            hit_counts[mask] += u64::from(h);
            antipodal_equal &= h == hits[mask ^ full];
        }
    }

    let trials = cfg.trials as f64;
    let rates: Vec<f64> = hit_counts.iter().map(|&c| c as f64 / trials).collect();
    let uniform_rate = theoretical_probability(m, n);
    let p = uniform_rate.to_f64().unwrap_or(f64::NAN);
    let pairs = total / 2;
    let (chi_square, degrees_of_freedom, p_value) = if pairs < 2 || p <= 0.0 || p >= 1.0 {
        (0.0, pairs.saturating_sub(1), 1.0)
    } else {
        let expected = trials * p;
        let variance = expected * (1.0 - p);
        let pearson: f64 = (0..pairs)
            .map(|k| {
                let observed = hit_counts[k << 1] as f64;
                (observed - expected).powi(2) / variance
            })
            .sum();
        let k = pairs as f64;
        let stat = pearson * (k - 1.0) / k;
        let df = pairs - 1;
        let dist = ChiSquared::new(df as f64).expect("positive degrees of freedom");
        (stat, df, 1.0 - dist.cdf(stat))
    };

    Ok(OrthantRates {
        m,
        n,
        trials: cfg.trials,
        hit_counts,
        rates,
        uniform_rate,
        constant_census_count,
        antipodal_equal,
        chi_square,
        degrees_of_freedom,
        p_value,
    })
}

/// `P[Binomial(m−1, ½) ≤ n−1]`, summed from the probability mass function.
pub fn binomial_tail_identity(m: usize, n: usize) -> Rational {
    assert!(m >= 1 && n >= 1, "needs m, n ≥ 1");
    let trials = m - 1;
    let mut pmf = Rational::new(BigInt::one(), BigInt::one() << trials);
    let mut tail = Rational::zero();
    for k in 0..n.min(m) {
        tail += &pmf;
        if k < trials {
            pmf = pmf * Rational::new(BigInt::from(trials - k), BigInt::from(k + 1));
        }
    }
    tail
}

/// Standard normal CDF.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)
}

/// Normal approximation `Φ((n − (m−1)/2) / √((m−1)/4))` of `Q(m,n)/2^m`.
pub fn clt_approximation(m: usize, n: usize) -> Result<f64> {
    if m < 2 {
        return Err(Error::Domain(format!("normal approximation needs m ≥ 2, got {m}")));
    }
    let spread = (m - 1) as f64;
    let x = (n as f64 - spread / 2.0) / (spread / 4.0).sqrt();
    Ok(normal_cdf(x))
}

/// `Q(m,n)/2^m` rounded to a double from the exact ratio.
pub fn exact_ratio_f64(m: usize, n: usize) -> f64 {
    theoretical_probability(m, n).to_f64().unwrap_or(f64::NAN)
}
