//! One-period Bernoulli market: a stock moving to `S·u` or `S·d`, a
//! risk-free rate `r`, and securities priced by risk-neutral expectation.

use num_traits::{One, Signed, Zero};

use crate::arbitrage::PayoffMatrix;
use crate::error::{Error, Result};
use crate::ratmath::{RatMatrix, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BernoulliMarket {
    pub spot: Rational,
    pub up: Rational,
    pub down: Rational,
    pub rate: Rational,
    pub strike: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SecurityPayoff {
    pub price_today: Rational,
    pub payoff_up: Rational,
    pub payoff_down: Rational,
}

impl SecurityPayoff {
    pub fn new(price_today: Rational, payoff_up: Rational, payoff_down: Rational) -> Result<Self> {
        if !price_today.is_positive() {
            return Err(Error::Domain(format!("security price must be positive, got {price_today}")));
        }
        Ok(Self { price_today, payoff_up, payoff_down })
    }
}

impl BernoulliMarket {
    pub fn new(spot: Rational, up: Rational, down: Rational, rate: Rational, strike: Rational) -> Self {
        Self { spot, up, down, rate, strike }
    }

    fn growth(&self) -> Rational {
        Rational::one() + &self.rate
    }

    /// `S > 0`, `1 + r > 0` and `d < 1 + r < u`.
    pub fn check(&self) -> Result<()> {
        if self.up == self.down {
            return Err(Error::DegenerateMarket);
        }
        if !self.spot.is_positive() {
            return Err(Error::Domain(format!("spot price must be positive, got {}", self.spot)));
        }
        let g = self.growth();
        if !g.is_positive() {
            return Err(Error::Domain(format!("1 + r must be positive, got {g}")));
        }
        if !(self.down < g && g < self.up) {
            return Err(Error::Domain(format!(
                "need d < 1 + r < u, got d = {}, 1 + r = {g}, u = {}",
                self.down, self.up
            )));
        }
        Ok(())
    }

    /// [`check`](Self::check) plus `S·d < K < S·u`.
    pub fn check_call(&self) -> Result<()> {
        self.check()?;
        let low = &self.spot * &self.down;
        let high = &self.spot * &self.up;
        if !(low < self.strike && self.strike < high) {
            return Err(Error::Domain(format!(
                "need S·d < K < S·u, got S·d = {low}, K = {}, S·u = {high}",
                self.strike
            )));
        }
        Ok(())
    }

    pub fn call_payoff_up(&self) -> Rational {
        &self.spot * &self.up - &self.strike
    }
}

/// `(π_u, π_d) = ((1+r−d)/(u−d), (u−1−r)/(u−d))`.
pub fn risk_neutral_probs(mkt: &BernoulliMarket) -> Result<(Rational, Rational)> {
    mkt.check()?;
    let g = mkt.growth();
    let spread = &mkt.up - &mkt.down;
    let pi_u = (&g - &mkt.down) / &spread;
    let pi_d = (&mkt.up - &g) / &spread;
    debug_assert!((&pi_u + &pi_d).is_one());
    Ok((pi_u, pi_d))
}

/// Closed-form call price `(Su−K)(1+r−d) / ((1+r)(u−d))`.
pub fn price_call(mkt: &BernoulliMarket) -> Result<Rational> {
    mkt.check_call()?;
    let g = mkt.growth();
    Ok(mkt.call_payoff_up() * (&g - &mkt.down) / (&g * (&mkt.up - &mkt.down)))
}

/// Expected discounted payoff under the risk-neutral probabilities.
pub fn price_security(mkt: &BernoulliMarket, payoff_up: &Rational, payoff_down: &Rational) -> Result<Rational> {
    let (pi_u, pi_d) = risk_neutral_probs(mkt)?;
    Ok((pi_u * payoff_up + pi_d * payoff_down) / mkt.growth())
}

/// The call as a security at the given price.
pub fn call_security(mkt: &BernoulliMarket, price: Rational) -> Result<SecurityPayoff> {
    mkt.check_call()?;
    SecurityPayoff::new(price, mkt.call_payoff_up(), Rational::zero())
}

/// Stock column followed by one column per security; scenarios are (up, down).
pub fn build_payoff_matrix(mkt: &BernoulliMarket, securities: &[SecurityPayoff]) -> Result<PayoffMatrix> {
    build_payoff_matrix_with(mkt, securities, false)
}

/// As [`build_payoff_matrix`], optionally appending the all-zero risk-free column.
pub fn build_payoff_matrix_with(
    mkt: &BernoulliMarket,
    securities: &[SecurityPayoff],
    include_risk_free: bool,
) -> Result<PayoffMatrix> {
    mkt.check()?;
    let g = mkt.growth();
    let one = Rational::one();
    let mut columns = vec![vec![&mkt.up / &g - &one, &mkt.down / &g - &one]];
    for sec in securities {
        if !sec.price_today.is_positive() {
            return Err(Error::Domain(format!("security price must be positive, got {}", sec.price_today)));
        }
        let scale = &sec.price_today * &g;
        columns.push(vec![&sec.payoff_up / &scale - &one, &sec.payoff_down / &scale - &one]);
    }
    if include_risk_free {
        columns.push(vec![Rational::zero(), Rational::zero()]);
    }
    PayoffMatrix::new(RatMatrix::from_columns(&columns)?)
}
