//! Exact arbitrage detection for payoff matrices.
//!
//! A payoff matrix has one row per scenario and one column per investment.
//! [`arbitrage::detect`] returns either a portfolio paying at least one unit
//! in every scenario or a probability vector orthogonal to every column,
//! both verified in exact rational arithmetic. Around that kernel sit a
//! Farkas oracle, cone utilities, an orthant census, the `Q(m,n)` counting
//! function, seeded Monte Carlo experiments, and a one-period binomial
//! pricing model.

pub mod arbitrage;
pub mod arrangement;
pub mod cones;
pub mod error;
pub mod json;
pub mod lpcore;
pub mod montecarlo;
pub mod pricing;
pub mod ratmath;

pub use arbitrage::{detect, detect_in_orthant, verify_verdict, ArbitrageVerdict, PayoffMatrix};
pub use arrangement::{is_generic, orthant_census, q, q_recursive, Genericity, OrthantCensus, Sign, SignVector};
pub use error::{Error, Result};
pub use lpcore::{farkas, verify_outcome, FarkasOutcome};
pub use montecarlo::{estimate_arbitrage_probability, SimConfig, SimReport};
pub use ratmath::{RatMatrix, Rational};
