//! Acceptance criteria, one line of output per criterion.
//!
//! Run with `cargo test -p qdefinetti --test acceptance`. The process exits
//! nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use num::Signed;
use qdefinetti::measures::MAX_DENSE_N;
use qdefinetti::{
    approx_error, check_q_exchangeable, decompose, enumerate_level, extreme_measure,
    extreme_vs_bernoulli_distance, fit_log_slope, inversions, lower_constant, mixture, project,
    project_bernoulli_closed_form, project_extreme_closed_form, q_bernoulli, q_binomial,
    random_q_exch, recompose, tech_lemma_lhs_rhs, to_dense, upper_constant, verify_rate,
    DeltaQPoint, DenseMeasure, N1Rule, QExchMeasure, QParam, RateSweepConfig, Rational, Sampler,
    Scalar, TvDistance, Word,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};

type Outcome = Result<String, String>;

fn qs(list: &[&str]) -> Vec<QParam<Rational>> {
    list.iter().map(|s| QParam::parse(s).unwrap()).collect()
}

fn zero() -> Rational {
    Rational::from_int(0)
}

/// Sum of `q^inv` over `C_{n,k}` equals the q-binomial, exactly.
fn criterion_1() -> Outcome {
    let mut checks = 0;
    for q in qs(&["1/2", "1/3", "2/3"]) {
        for n in 0..=14 {
            for k in 0..=n {
                let sum: Rational = enumerate_level(n, k)
                    .unwrap()
                    .map(|w| q.pow(inversions(&w) as i64))
                    .sum();
                let expected = q_binomial(n, k, &q).unwrap();
                if sum != expected {
                    return Err(format!("q = {q}, n = {n}, k = {k}: {sum} != {expected}"));
                }
                checks += 1;
            }
        }
    }
    Ok(format!("{checks} exact identities"))
}

fn exch_with_projections(m: &QExchMeasure<Rational>, label: &str) -> Result<usize, String> {
    for k in 0..=m.n() {
        let d = to_dense(&project(m, k).unwrap()).unwrap();
        if let Err(v) = check_q_exchangeable(&d, m.q()) {
            return Err(format!(
                "{label} projected to {k}: swap rule fails at {} position {}",
                v.word, v.position
            ));
        }
    }
    Ok(m.n() + 1)
}

/// Every constructed measure and all its projections satisfy the swap rule.
fn criterion_2() -> Outcome {
    let mut checks = 0;
    for q in qs(&["1/2", "1/3", "2/3"]) {
        for n in 0..=10 {
            for k in 0..=n {
                checks += exch_with_projections(&extreme_measure(n, k, &q).unwrap(), "extreme")?;
            }
            for x in 0..=n {
                checks +=
                    exch_with_projections(&q_bernoulli(n, DeltaQPoint::new(x), &q), "q-Bernoulli")?;
            }
            for seed in 0..10 {
                let m = random_q_exch(n, &q, seed);
                checks += exch_with_projections(&m, "random")?;
                checks += exch_with_projections(&mixture(&decompose(&m), n), "mixture")?;
            }
        }
    }
    Ok(format!("{checks} measures checked"))
}

/// Pushforward at `s_{k,k1}` by explicit summation over all suffixes.
fn suffix_sum(d: &DenseMeasure<Rational>, k: usize, k1: usize) -> Rational {
    let n = d.n();
    let prefix = Word::canonical(k, k1).unwrap().bits();
    (0u64..(1 << (n - k)))
        .map(|suffix| {
            d.get(&Word::new(prefix | (suffix << k), n).unwrap())
                .unwrap()
        })
        .sum()
}

/// Closed-form projections equal brute-force pushforwards.
fn criterion_3() -> Outcome {
    let mut checks = 0;
    for q in qs(&["1/2", "1/3"]) {
        for n in 0..=12 {
            for n1 in 0..=n {
                let e = to_dense(&extreme_measure(n, n1, &q).unwrap()).unwrap();
                let nu = to_dense(&q_bernoulli(n, DeltaQPoint::new(n1), &q)).unwrap();
                for k in 0..=n {
                    for k1 in 0..=k {
                        let closed = project_extreme_closed_form(n, n1, k, k1, &q);
                        let brute = suffix_sum(&e, k, k1);
                        if closed != brute {
                            return Err(format!(
                                "extreme q = {q} ({n},{n1},{k},{k1}): {closed} != {brute}"
                            ));
                        }
                        let closed = project_bernoulli_closed_form(n1, k, k1, &q);
                        let brute = suffix_sum(&nu, k, k1);
                        if closed != brute {
                            return Err(format!(
                                "q-Bernoulli q = {q} ({n},{n1},{k},{k1}): {closed} != {brute}"
                            ));
                        }
                        checks += 2;
                    }
                }
            }
        }
    }
    Ok(format!("{checks} exact equalities"))
}

/// Distance to the q-Bernoulli partner and the mixture error stay below
/// `c_k q^n`.
fn criterion_4() -> Outcome {
    let mut checks = 0;
    for q in qs(&["1/2", "1/3", "2/3"]) {
        for n in 0..=18usize {
            for k in 0..=4.min(n) {
                let bound = upper_constant(k, &q) * q.pow(n as i64);
                for n1 in 0..=n {
                    let d = extreme_vs_bernoulli_distance(n, n1, k, &q).unwrap();
                    if d > bound {
                        return Err(format!(
                            "q = {q}, n = {n}, n1 = {n1}, k = {k}: {d} > {bound}"
                        ));
                    }
                    checks += 1;
                }
                for seed in 0..10 {
                    let m = random_q_exch(n, &q, 1000 * n as u64 + seed);
                    let err = approx_error(&m, k).unwrap();
                    if err > bound {
                        return Err(format!(
                            "q = {q}, n = {n}, k = {k}, seed {seed}: {err} > {bound}"
                        ));
                    }
                    checks += 1;
                }
            }
        }
    }
    Ok(format!("{checks} exact inequalities"))
}

/// For `n1 >= k`, the distance is at least `c~_k q^n`; the technical lemma
/// holds on the same grid.
fn criterion_5() -> Outcome {
    let mut checks = 0;
    for q in qs(&["1/2", "1/3", "2/3"]) {
        for n in 1..=18usize {
            for k in 1..=4.min(n) {
                let bound = lower_constant(k, &q).unwrap() * q.pow(n as i64);
                for n1 in k..=n {
                    let d = extreme_vs_bernoulli_distance(n, n1, k, &q).unwrap();
                    if d < bound {
                        return Err(format!(
                            "q = {q}, n = {n}, n1 = {n1}, k = {k}: {d} < {bound}"
                        ));
                    }
                    checks += 1;
                }
                let (lhs, rhs) = tech_lemma_lhs_rhs(n, k, &q).unwrap();
                if lhs < rhs {
                    return Err(format!("lemma q = {q}, n = {n}, k = {k}: {lhs} < {rhs}"));
                }
                checks += 1;
            }
        }
    }
    Ok(format!("{checks} exact inequalities"))
}

/// Fitted slope of `ln D` against `n` is `ln q` within 0.05.
fn criterion_6() -> Outcome {
    const TOLERANCE: f64 = 0.05;
    let q = QParam::<f64>::parse("1/2").unwrap();
    let target = 0.5f64.ln();
    let mut slopes = Vec::new();
    for k in 1..=3 {
        let cfg = RateSweepConfig {
            q: q.clone(),
            k,
            n_range: 12..=24,
            n1_rule: N1Rule::Equal,
        };
        let reports = verify_rate(&cfg).map_err(|e| e.to_string())?;
        let slope = fit_log_slope(&reports).map_err(|e| e.to_string())?;
        if (slope - target).abs() > TOLERANCE {
            return Err(format!(
                "k = {k}: slope {slope:.5} vs ln(1/2) = {target:.5}"
            ));
        }
        slopes.push(format!("k={k}: {slope:.5}"));
    }
    Ok(format!(
        "slopes {} vs {target:.5} (tol {TOLERANCE})",
        slopes.join(", ")
    ))
}

fn random_dense(n: usize, rng: &mut ChaCha8Rng) -> DenseMeasure<Rational> {
    let raw: Vec<i64> = (0..1 << n).map(|_| rng.random_range(0..=20)).collect();
    let total: i64 = raw.iter().sum::<i64>().max(1);
    let mut weights: Vec<Rational> = raw.iter().map(|&w| Rational::ratio(w, total)).collect();
    if raw.iter().all(|&w| w == 0) {
        weights[0] = Rational::from_int(1);
    }
    DenseMeasure::new(n, weights).unwrap()
}

/// L1 sum equals twice the largest event discrepancy.
fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut checks = 0;
    for n in 0..=3usize {
        for _ in 0..50 {
            let a = random_dense(n, &mut rng);
            let b = random_dense(n, &mut rng);
            let l1 = a.tv_distance(&b).unwrap();
            let cells = 1usize << n;
            let sup = (0u64..(1 << cells))
                .map(|event| {
                    (0..cells)
                        .filter(|c| (event >> c) & 1 == 1)
                        .map(|c| a.weights()[c].clone() - b.weights()[c].clone())
                        .sum::<Rational>()
                        .abs()
                })
                .fold(zero(), |acc, d| if d > acc { d } else { acc });
            if l1 != sup.clone() * Rational::from_int(2) {
                return Err(format!("n = {n}: L1 {l1} != 2 * {sup}"));
            }
            checks += 1;
        }
    }
    Ok(format!("{checks} measure pairs"))
}

/// Recomposition from the mixing weights reproduces the base vector.
fn criterion_8() -> Outcome {
    let q_list = qs(&["1/2", "1/3", "2/3"]);
    for seed in 0..100u64 {
        let n = (seed % 17) as usize;
        let q = &q_list[(seed % 3) as usize];
        let m = random_q_exch(n, q, seed);
        let mu = decompose(&m);
        let total: Rational = mu.alpha().iter().cloned().sum();
        if total != Rational::from_int(1) {
            return Err(format!("seed {seed}: weights sum to {total}"));
        }
        if recompose(&mu).base() != m.base() {
            return Err(format!("seed {seed}, n = {n}: base vectors differ"));
        }
    }
    Ok("100 seeded measures, n <= 16".into())
}

/// Chi-squared goodness of fit of the sampler against the exact table.
fn criterion_9() -> Outcome {
    const DRAWS: usize = 100_000;
    const ALPHA: f64 = 0.01;
    let q = QParam::<Rational>::parse("1/2").unwrap();
    let nu = q_bernoulli(6, DeltaQPoint::new(1), &q);
    let table = to_dense(&nu).unwrap();
    let probs: Vec<f64> = table.weights().iter().map(|p| p.to_f64()).collect();
    let support = probs.iter().filter(|&&p| p > 0.0).count();
    let critical = ChiSquared::new((support - 1) as f64)
        .unwrap()
        .inverse_cdf(1.0 - ALPHA);
    let sampler = Sampler::new(&nu).unwrap();
    let mut passed = 0;
    let mut stats = Vec::new();
    for seed in 0..10 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut counts = vec![0usize; probs.len()];
        for _ in 0..DRAWS {
            counts[sampler.sample(&mut rng).bits() as usize] += 1;
        }
        let off_support = counts.iter().zip(&probs).any(|(&c, &p)| p == 0.0 && c > 0);
        let chi2: f64 = counts
            .iter()
            .zip(&probs)
            .filter(|(_, &p)| p > 0.0)
            .map(|(&c, &p)| {
                let expected = p * DRAWS as f64;
                (c as f64 - expected).powi(2) / expected
            })
            .sum();
        stats.push(format!("{chi2:.1}"));
        if !off_support && chi2 <= critical {
            passed += 1;
        }
    }
    let detail = format!(
        "{passed}/10 seeds pass, chi2 = [{}], critical {critical:.2}",
        stats.join(", ")
    );
    if passed >= 9 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    const { assert!(MAX_DENSE_N >= 12) };
    let criteria: [Criterion; 9] = [
        ("q-binomial identity", criterion_1),
        ("q-exchangeability of constructions", criterion_2),
        ("projection closed forms vs pushforward", criterion_3),
        ("upper bound c_k q^n", criterion_4),
        ("lower bound and technical lemma", criterion_5),
        ("rate slope", criterion_6),
        ("tv convention", criterion_7),
        ("decomposition round trip", criterion_8),
        ("sampler chi-squared", criterion_9),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {} [{name}]: PASS ({detail}; {secs:.2}s)", i + 1),
            Err(detail) => {
                failures += 1;
                println!("criterion {} [{name}]: FAIL ({detail}; {secs:.2}s)", i + 1);
            }
        }
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
