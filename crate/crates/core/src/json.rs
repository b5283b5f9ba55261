//! JSON encodings shared by the CLI and the web demo. Rationals are
//! written as `p/q` strings and big integers as exact JSON numbers.

use serde_json::{json, Map, Value};

use crate::arbitrage::{ArbitrageVerdict, PayoffMatrix};
use crate::lpcore::FarkasOutcome;
use crate::ratmath::{format_rational, RatMatrix, Rational};

pub fn integer(x: &impl ToString) -> serde_json::Number {
    x.to_string().parse().expect("integer literal is valid JSON")
}

pub fn rational(x: &Rational) -> Value {
    Value::String(format_rational(x))
}

pub fn vector(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(rational).collect())
}

pub fn vectors(vs: &[Vec<Rational>]) -> Value {
    Value::Array(vs.iter().map(|v| vector(v)).collect())
}

pub fn matrix(a: &RatMatrix) -> Value {
    vectors(&a.to_rows())
}

/// `{"verdict": "Arbitrage", "v": [...], "payoff": [...]}` or
/// `{"verdict": "NoArbitrage", "pi": [...]}`.
pub fn verdict(payoff: &PayoffMatrix, verdict: &ArbitrageVerdict) -> Value {
    let mut obj = Map::new();
    obj.insert("verdict".into(), Value::String(verdict.tag().into()));
    match verdict {
        ArbitrageVerdict::Arbitrage { v } => {
            obj.insert("v".into(), vector(v));
            let payoff_vec = payoff.matrix().mul_vec(v).expect("portfolio has n entries");
            obj.insert("payoff".into(), vector(&payoff_vec));
        }
        ArbitrageVerdict::NoArbitrage { pi } => {
            obj.insert("pi".into(), vector(pi));
        }
    }
    Value::Object(obj)
}

pub fn farkas_outcome(outcome: &FarkasOutcome) -> Value {
    match outcome {
        FarkasOutcome::Combination { x } => json!({ "outcome": "Combination", "x": vector(x) }),
        FarkasOutcome::Separator { y } => json!({ "outcome": "Separator", "y": vector(y) }),
    }
}
