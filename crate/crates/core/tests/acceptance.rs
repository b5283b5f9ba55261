//! Exit-gate checks. Each criterion prints one PASS/FAIL line; the process
//! exits non-zero if any criterion fails.

mod common;

use std::time::{Duration, Instant};

use arbigeom::arbitrage::{detect, detect_with_stats, verify_verdict, ArbitrageVerdict, PayoffMatrix};
use arbigeom::arrangement::{is_generic, orthant_census, q, q_recursive};
use arbigeom::cones::{decompose, is_pointed, member, split_point, Cone};
use arbigeom::lpcore::{farkas, verify_outcome};
use arbigeom::montecarlo::{
    binomial_tail_identity, clt_approximation, equal_orthant_check, estimate_arbitrage_probability,
    exact_ratio_f64, sample_gaussian_matrix, theoretical_probability, SimConfig,
};
use arbigeom::pricing::{build_payoff_matrix, call_security, price_call, risk_neutral_probs, BernoulliMarket};
use arbigeom::ratmath::{dot, int, ratio, RatMatrix, Rational};
use num_bigint::BigUint;
use num_traits::Zero;
use rand::Rng;

use common::{feasible_by_vertices, random_int_matrix, rng};

type Outcome = Result<String, String>;

const Q_TABLE: [[u32; 8]; 8] = [
    [2, 2, 2, 2, 2, 2, 2, 2],
    [2, 4, 4, 4, 4, 4, 4, 4],
    [2, 6, 8, 8, 8, 8, 8, 8],
    [2, 8, 14, 16, 16, 16, 16, 16],
    [2, 10, 22, 30, 32, 32, 32, 32],
    [2, 12, 32, 52, 62, 64, 64, 64],
    [2, 14, 44, 84, 114, 126, 128, 128],
    [2, 16, 58, 128, 198, 240, 254, 256],
];

fn within(elapsed: Duration, limit: Duration, detail: String) -> Outcome {
    if elapsed <= limit {
        Ok(format!("{detail} in {elapsed:.2?}"))
    } else {
        Err(format!("{detail} but took {elapsed:.2?} (limit {limit:?})"))
    }
}

fn ac1_q_table() -> Outcome {
    let start = Instant::now();
    let mut mismatches = Vec::new();
    for (i, row) in Q_TABLE.iter().enumerate() {
        for (j, &expected) in row.iter().enumerate() {
            let (m, n) = (i + 1, j + 1);
            let expected = BigUint::from(expected);
            if q(m, n) != expected || q_recursive(m, n) != expected {
                mismatches.push(format!("({m},{n})"));
            }
        }
    }
    if !mismatches.is_empty() {
        return Err(format!("mismatched entries {}", mismatches.join(" ")));
    }
    within(start.elapsed(), Duration::from_secs(1), "64/64 entries match for both routes".into())
}

fn ac2_census_equals_q() -> Outcome {
    let start = Instant::now();
    let shapes = [(3, 2), (4, 2), (4, 3), (5, 3), (6, 3), (6, 4), (8, 4)];
    let mut failures = Vec::new();
    for (s, &(m, n)) in shapes.iter().enumerate() {
        let seed = 2000 + s as u64;
        for t in 0..100 {
            let a = sample_gaussian_matrix(m, n, seed, t);
            let generic = is_generic(&a).map_err(|e| e.to_string())?.is_generic();
            let count = orthant_census(&a).map_err(|e| e.to_string())?.count;
            if !generic || BigUint::from(count) != q(m, n) {
                failures.push(format!("({m},{n}) trial {t}: generic={generic} count={count}"));
            }
        }
    }
    if !failures.is_empty() {
        return Err(failures.join("; "));
    }
    within(start.elapsed(), Duration::from_secs(120), "700/700 generic, census = Q(m,n)".into())
}

fn ac3_dichotomy() -> Outcome {
    let mut r = rng(3);
    let mut max_pivots = 0;
    for case in 0..1000 {
        let m = r.gen_range(1..=6);
        let n = r.gen_range(1..=6);
        let a = PayoffMatrix::new(random_int_matrix(&mut r, m, n, -5, 5)).unwrap();
        let (verdict, stats) = detect_with_stats(&a);
        if !verify_verdict(&a, &verdict) {
            return Err(format!("case {case}: certificate fails for {:?}", a.matrix()));
        }
        // Phase-I tableau has n + 1 rows and m + (n + 1) columns.
        let bound = common::binomial((m + n + 1) as u64, (n + 1) as u64);
        if stats.pivots as u128 > bound {
            return Err(format!("case {case}: {} pivots exceeds C({},{})", stats.pivots, m + n + 1, n + 1));
        }
        max_pivots = max_pivots.max(stats.pivots);
    }
    Ok(format!("1000/1000 certificates verify exactly, max {max_pivots} pivots"))
}

fn ac4_farkas_vs_vertices() -> Outcome {
    let vals = [-1i64, 0, 1];
    let mut cases = 0;
    for code in 0..3usize.pow(6) {
        let entries: Vec<i64> = (0..6).map(|k| vals[code / 3usize.pow(k) % 3]).collect();
        let a = RatMatrix::from_i64(&[&entries[0..2], &entries[2..4], &entries[4..6]]);
        for bcode in 0..27usize {
            let b: Vec<Rational> = (0..3).map(|k| int(vals[bcode / 3usize.pow(k) % 3])).collect();
            let outcome = farkas(&a, &b).map_err(|e| e.to_string())?;
            if !verify_outcome(&a, &b, &outcome) {
                return Err(format!("unverifiable outcome for A={entries:?} b={b:?}"));
            }
            if outcome.is_combination() != feasible_by_vertices(&a, &b) {
                return Err(format!("tag disagreement for A={entries:?} b={b:?}"));
            }
            cases += 1;
        }
    }
    Ok(format!("{cases}/{cases} tags agree with vertex enumeration"))
}

fn check_estimate(m: usize, n: usize, seed: u64, target: f64, tol: f64) -> Result<String, String> {
    let report = estimate_arbitrage_probability(&SimConfig::new(m, n, 10_000, seed)).map_err(|e| e.to_string())?;
    let theory = report.theoretical_f64();
    if (theory - target).abs() > 1e-15 {
        return Err(format!("({m},{n}) theoretical {theory} != {target}"));
    }
    let dev = (report.estimate - target).abs();
    let line = format!("({m},{n}) estimate {:.4} vs {target} (|Δ| = {dev:.4} ≤ {tol})", report.estimate);
    if dev <= tol {
        Ok(line)
    } else {
        Err(line)
    }
}

fn ac5_main_theorem_half() -> Outcome {
    let tol = 3.0 * (0.25f64 / 1e4).sqrt();
    let a = check_estimate(4, 2, 5, 0.5, tol)?;
    let b = check_estimate(6, 3, 6, 0.5, tol)?;
    Ok(format!("{a}; {b}"))
}

fn ac6_main_theorem_asymmetric() -> Outcome {
    let a = check_estimate(4, 3, 61, 0.875, 0.015)?;
    let b = check_estimate(5, 2, 62, 0.3125, 0.02)?;
    Ok(format!("{a}; {b}"))
}

fn ac7_equal_orthants() -> Outcome {
    let rates = equal_orthant_check(&SimConfig::new(3, 2, 5000, 7)).map_err(|e| e.to_string())?;
    if rates.uniform_rate != ratio(3, 4) {
        return Err(format!("uniform rate {} != 3/4", rates.uniform_rate));
    }
    if rates.constant_census_count != Some(6) || !rates.antipodal_equal {
        return Err(format!(
            "census count {:?}, antipodal symmetry {}",
            rates.constant_census_count, rates.antipodal_equal
        ));
    }
    let line = format!(
        "chi² = {:.3} on {} df, p = {:.4}, rates {:?}",
        rates.chi_square,
        rates.degrees_of_freedom,
        rates.p_value,
        rates.rates.iter().map(|r| format!("{r:.3}")).collect::<Vec<_>>()
    );
    if rates.rejects_uniform(0.001) {
        Err(line)
    } else {
        Ok(line)
    }
}

fn ac8_tail_identity() -> Outcome {
    for m in 1..=24 {
        for n in 1..=24 {
            if binomial_tail_identity(m, n) != theoretical_probability(m, n) {
                return Err(format!("identity fails at ({m},{n})"));
            }
        }
    }
    Ok("576/576 exact equalities".into())
}

fn ac9_clt() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for n in 90..=110 {
        let approx = clt_approximation(201, n).map_err(|e| e.to_string())?;
        let exact = exact_ratio_f64(201, n);
        worst = worst.max((approx - exact).abs());
    }
    if worst > 0.05 {
        return Err(format!("max |Φ − Q/2^m| = {worst:.4} > 0.05"));
    }
    within(start.elapsed(), Duration::from_secs(1), format!("max |Φ − Q/2^m| = {worst:.4} ≤ 0.05"))
}

fn random_market(r: &mut impl Rng) -> BernoulliMarket {
    let rate = ratio(r.gen_range(0..=10), 100);
    let growth = int(1) + &rate;
    let down = &growth - ratio(r.gen_range(1..=40), 100);
    let up = &growth + ratio(r.gen_range(1..=40), 100);
    let spot = int(r.gen_range(20..=200));
    let (low, high) = (&spot * &down, &spot * &up);
    let t = ratio(r.gen_range(1..=19), 20);
    let strike = &low + (&high - &low) * t;
    BernoulliMarket::new(spot, up, down, rate, strike)
}

fn ac10_pricing() -> Outcome {
    let mut r = rng(10);
    let mut perturbed_ok = 0;
    for case in 0..50 {
        let mkt = random_market(&mut r);
        let (pi_u, pi_d) = risk_neutral_probs(&mkt).map_err(|e| e.to_string())?;
        let fair = price_call(&mkt).map_err(|e| e.to_string())?;
        let call = call_security(&mkt, fair.clone()).map_err(|e| e.to_string())?;
        let p = build_payoff_matrix(&mkt, &[call]).map_err(|e| e.to_string())?;
        match detect(&p) {
            ArbitrageVerdict::NoArbitrage { pi } if pi == vec![pi_u.clone(), pi_d.clone()] => {}
            other => return Err(format!("case {case}: fair call gave {other}")),
        }
        for bump in [ratio(1, 100), ratio(-1, 100)] {
            let price = &fair + bump;
            let call = call_security(&mkt, price).map_err(|e| e.to_string())?;
            let p = build_payoff_matrix(&mkt, &[call]).map_err(|e| e.to_string())?;
            let verdict = detect(&p);
            if !verdict.is_arbitrage() || !verify_verdict(&p, &verdict) {
                return Err(format!("case {case}: mispriced call gave {verdict}"));
            }
            perturbed_ok += 1;
        }
    }
    Ok(format!("50/50 fair markets price to π exactly, {perturbed_ok}/100 mispricings are certified arbitrage"))
}

fn ac11_cone_decomposition() -> Outcome {
    let mut r = rng(11);
    let mut splits = 0;
    for case in 0..100 {
        let m = r.gen_range(1..=4);
        let n = r.gen_range(1..=6);
        let gens = random_int_matrix(&mut r, m, n, -3, 3);
        let cone = Cone::from_matrix(&gens).unwrap();
        let d = decompose(&cone);
        if !is_pointed(&d.slice_cone()) || !d.verify(&cone) {
            return Err(format!("case {case}: bad decomposition of {gens:?}"));
        }
        for _ in 0..10 {
            let coeffs: Vec<Rational> = (0..n).map(|_| ratio(r.gen_range(0..=6), r.gen_range(1..=3))).collect();
            let x = gens.mul_vec(&coeffs).unwrap();
            if member(&cone, &x).unwrap().is_none() {
                return Err(format!("case {case}: constructed member rejected"));
            }
            let (u, v) = split_point(&d, &x).map_err(|e| e.to_string())?;
            let sum: Vec<Rational> = u.iter().zip(&v).map(|(a, b)| a + b).collect();
            if sum != x || !dot(&u, &v).is_zero() {
                return Err(format!("case {case}: split fails for x = {x:?}"));
            }
            splits += 1;
        }
    }
    Ok(format!("100/100 slices pointed, {splits}/1000 splits exact"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("AC1 Q-table reproduction", ac1_q_table),
        ("AC2 census equals Q(m,n)", ac2_census_equals_q),
        ("AC3 dichotomy with exact certificates", ac3_dichotomy),
        ("AC4 Farkas vs vertex enumeration", ac4_farkas_vs_vertices),
        ("AC5 arbitrage probability 1/2 at m = 2n", ac5_main_theorem_half),
        ("AC6 arbitrage probability, asymmetric", ac6_main_theorem_asymmetric),
        ("AC7 equal-orthant chi-square", ac7_equal_orthants),
        ("AC8 binomial tail identity", ac8_tail_identity),
        ("AC9 normal approximation at m = 201", ac9_clt),
        ("AC10 pricing consistency", ac10_pricing),
        ("AC11 cone decomposition", ac11_cone_decomposition),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        match check() {
            Ok(detail) => println!("PASS {name}: {detail} [{:.2?}]", start.elapsed()),
            Err(detail) => {
                failed += 1;
                println!("FAIL {name}: {detail} [{:.2?}]", start.elapsed());
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
