//! Exact invariant suites over a parameter grid, run by `verify-all`.

use std::fmt::{self, Display};

use crate::bounds::{lower_constant, tech_lemma_lhs_rhs, upper_constant};
use crate::definetti::{
    approx_error, decompose, extreme_vs_bernoulli_distance, mixture, recompose,
};
use crate::measures::{
    check_q_exchangeable, eval, extreme_measure, q_bernoulli, random_q_exch, to_dense, DeltaQPoint,
    DenseMeasure, QExchMeasure, MAX_DENSE_N,
};
use crate::projection::{
    project, project_bernoulli_closed_form, project_extreme_closed_form, TvDistance,
};
use crate::qcore::{
    coinversions, enumerate_level, inversions, q_factorial, QBinomTable, QParam, Word,
};
use crate::scalar::{Rational, Scalar};

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub max_n: usize,
    pub qs: Vec<QParam<Rational>>,
    /// Perturbs the q-binomial reference values so the first suite must fail.
    pub inject_fault: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteOutcome {
    pub name: &'static str,
    pub checks: usize,
}

/// The first failed check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub suite: &'static str,
    pub detail: String,
}

impl Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}", self.suite, self.detail)
    }
}

impl std::error::Error for Counterexample {}

type SuiteResult = Result<usize, Counterexample>;

/// Caps on `n` for suites whose cost grows like `2^n` or worse.
const EXCH_MAX_N: usize = 10;
const ORACLE_MAX_N: usize = 12;
const TV_SUBSET_MAX_N: usize = 3;
const THEOREM_MAX_K: usize = 4;

pub const SUITES: [&str; 8] = [
    "q-binomial identity",
    "q-exchangeability",
    "projection oracle",
    "upper bound",
    "lower bound",
    "technical lemma",
    "decomposition",
    "tv convention",
];

pub fn run_all(opts: &VerifyOptions) -> Result<Vec<SuiteOutcome>, Counterexample> {
    let suites: [fn(&VerifyOptions, &QParam<Rational>) -> SuiteResult; 8] = [
        qbinom_identity,
        exchangeability,
        projection_oracle,
        upper_bound,
        lower_bound,
        technical_lemma,
        decomposition,
        tv_convention,
    ];
    let mut outcomes = Vec::with_capacity(suites.len());
    for (name, suite) in SUITES.into_iter().zip(suites) {
        let mut checks = 0;
        for q in &opts.qs {
            checks += suite(opts, q)?;
        }
        outcomes.push(SuiteOutcome { name, checks });
    }
    Ok(outcomes)
}

fn fail(suite: &'static str, q: &QParam<Rational>, detail: String) -> Counterexample {
    Counterexample {
        suite,
        detail: format!("q = {q}: {detail}"),
    }
}

fn qbinom_identity(opts: &VerifyOptions, q: &QParam<Rational>) -> SuiteResult {
    const NAME: &str = "q-binomial identity";
    let max_n = opts.max_n.min(MAX_DENSE_N);
    let table = QBinomTable::new(max_n, q);
    let mut checks = 0;
    for n in 0..=max_n {
        for k in 0..=n {
            let mut expected = table.get(n, k);
            if opts.inject_fault {
                expected += q.pow(n as i64);
            }
            let mut inv_sum = Rational::from_int(0);
            let mut coinv_sum = Rational::from_int(0);
            for w in enumerate_level(n, k).expect("n within packed range") {
                inv_sum += q.pow(inversions(&w) as i64);
                coinv_sum += q.pow(coinversions(&w) as i64);
            }
            if inv_sum != expected {
                return Err(fail(
                    NAME,
                    q,
                    format!("sum of q^inv over C_({n},{k}) is {inv_sum}, q-binomial is {expected}"),
                ));
            }
            if coinv_sum != expected {
                return Err(fail(
                    NAME,
                    q,
                    format!(
                        "sum of q^coinv over C_({n},{k}) is {coinv_sum}, q-binomial is {expected}"
                    ),
                ));
            }
            if table.get(n, k) != table.get(n, n - k) {
                return Err(fail(NAME, q, format!("[{n},{k}] != [{n},{}]", n - k)));
            }
            let via_factorial = q_factorial(n, q) / (q_factorial(k, q) * q_factorial(n - k, q));
            if table.get(n, k) != via_factorial {
                return Err(fail(
                    NAME,
                    q,
                    format!("recurrence and factorial ratio differ at [{n},{k}]"),
                ));
            }
            checks += 4;
        }
    }
    Ok(checks)
}

fn check_exch(q: &QParam<Rational>, label: &str, m: &QExchMeasure<Rational>) -> SuiteResult {
    const NAME: &str = "q-exchangeability";
    let mut checks = 0;
    for k in 0..=m.n() {
        let p = project(m, k).map_err(|e| fail(NAME, q, e.to_string()))?;
        let d = to_dense(&p).map_err(|e| fail(NAME, q, e.to_string()))?;
        if let Err(v) = check_q_exchangeable(&d, q) {
            return Err(fail(
                NAME,
                q,
                format!(
                    "{label} projected to k = {k} breaks the swap rule at {} position {}",
                    v.word, v.position
                ),
            ));
        }
        checks += 1;
    }
    Ok(checks)
}

fn exchangeability(opts: &VerifyOptions, q: &QParam<Rational>) -> SuiteResult {
    let mut checks = 0;
    for n in 0..=opts.max_n.min(EXCH_MAX_N) {
        for k in 0..=n {
            let e = extreme_measure(n, k, q).expect("k <= n");
            checks += check_exch(q, &format!("e_({n},{k})"), &e)?;
        }
        for x in 0..=n {
            let nu = q_bernoulli(n, DeltaQPoint::new(x), q);
            checks += check_exch(q, &format!("nu_(q^{x}) on n = {n}"), &nu)?;
        }
        for seed in 0..10 {
            let m = random_q_exch(n, q, seed);
            checks += check_exch(q, &format!("random seed {seed}, n = {n}"), &m)?;
            let mix = mixture(&decompose(&m), n);
            checks += check_exch(q, &format!("mixture from seed {seed}, n = {n}"), &mix)?;
        }
    }
    Ok(checks)
}

/// Marginals of `d` onto `0..=n` coordinates, each obtained from the next by
/// summing out the last coordinate.
fn dense_marginals(d: &DenseMeasure<Rational>) -> Vec<DenseMeasure<Rational>> {
    let mut out = vec![d.clone()];
    for k in (0..d.n()).rev() {
        let next = out.last().expect("nonempty").marginal(k).expect("k < n");
        out.push(next);
    }
    out.reverse();
    out
}

fn projection_oracle(opts: &VerifyOptions, q: &QParam<Rational>) -> SuiteResult {
    const NAME: &str = "projection oracle";
    let mut checks = 0;
    for n in 0..=opts.max_n.min(ORACLE_MAX_N) {
        for n1 in 0..=n {
            let e = extreme_measure(n, n1, q).expect("n1 <= n");
            let nu = q_bernoulli(n, DeltaQPoint::new(n1), q);
            let e_marg = dense_marginals(&to_dense(&e).expect("small n"));
            let nu_marg = dense_marginals(&to_dense(&nu).expect("small n"));
            for k in 0..=n {
                for k1 in 0..=k {
                    let s = Word::canonical(k, k1).expect("k1 <= k");
                    let brute = e_marg[k].get(&s).expect("length k");
                    let closed = project_extreme_closed_form(n, n1, k, k1, q);
                    if brute != closed {
                        return Err(fail(NAME, q, format!(
                            "(e_({n},{n1}))_{k}(s_({k},{k1})): pushforward {brute}, closed form {closed}"
                        )));
                    }
                    let brute = nu_marg[k].get(&s).expect("length k");
                    let closed = project_bernoulli_closed_form(n1, k, k1, q);
                    if brute != closed {
                        return Err(fail(NAME, q, format!(
                            "(nu_(q^{n1}))_{k}(s_({k},{k1})) on n = {n}: pushforward {brute}, closed form {closed}"
                        )));
                    }
                    let level = eval(&project(&e, k).expect("k <= n"), &s).expect("length k");
                    if level != project_extreme_closed_form(n, n1, k, k1, q) {
                        return Err(fail(
                            NAME,
                            q,
                            format!(
                                "level projection of e_({n},{n1}) differs at k = {k}, k1 = {k1}"
                            ),
                        ));
                    }
                    checks += 3;
                }
            }
        }
    }
    Ok(checks)
}

fn upper_bound(opts: &VerifyOptions, q: &QParam<Rational>) -> SuiteResult {
    const NAME: &str = "upper bound";
    let mut checks = 0;
    for k in 0..=THEOREM_MAX_K.min(opts.max_n) {
        let c = upper_constant(k, q);
        for n in k..=opts.max_n {
            let bound = c.clone() * q.pow(n as i64);
            for n1 in 0..=n {
                let d = extreme_vs_bernoulli_distance(n, n1, k, q).expect("valid range");
                if d > bound {
                    return Err(fail(
                        NAME,
                        q,
                        format!("n = {n}, n1 = {n1}, k = {k}: distance {d} > c_k q^n = {bound}"),
                    ));
                }
                checks += 1;
            }
            for seed in 0..10 {
                let m = random_q_exch(n, q, seed);
                let err = approx_error(&m, k).expect("k <= n");
                if err > bound {
                    return Err(fail(
                        NAME,
                        q,
                        format!("random seed {seed}, n = {n}, k = {k}: error {err} > {bound}"),
                    ));
                }
                checks += 1;
            }
        }
    }
    Ok(checks)
}

fn lower_bound(opts: &VerifyOptions, q: &QParam<Rational>) -> SuiteResult {
    const NAME: &str = "lower bound";
    let mut checks = 0;
    for k in 1..=THEOREM_MAX_K.min(opts.max_n) {
        let c = lower_constant(k, q).expect("k >= 1");
        for n in k..=opts.max_n {
            let bound = c.clone() * q.pow(n as i64);
            for n1 in k..=n {
                let d = extreme_vs_bernoulli_distance(n, n1, k, q).expect("valid range");
                if d < bound {
                    return Err(fail(
                        NAME,
                        q,
                        format!("n = {n}, n1 = {n1}, k = {k}: distance {d} < c~_k q^n = {bound}"),
                    ));
                }
                checks += 1;
            }
        }
    }
    Ok(checks)
}

fn technical_lemma(opts: &VerifyOptions, q: &QParam<Rational>) -> SuiteResult {
    const NAME: &str = "technical lemma";
    let mut checks = 0;
    for n in 1..=opts.max_n {
        for k in 1..=n {
            let (lhs, rhs) = tech_lemma_lhs_rhs(n, k, q).expect("n >= k >= 1");
            if lhs < rhs {
                return Err(fail(NAME, q, format!("n = {n}, k = {k}: {lhs} < {rhs}")));
            }
            checks += 1;
        }
    }
    Ok(checks)
}

fn decomposition(opts: &VerifyOptions, q: &QParam<Rational>) -> SuiteResult {
    const NAME: &str = "decomposition";
    let mut checks = 0;
    for n in 0..=opts.max_n {
        for seed in 0..10 {
            let m = random_q_exch(n, q, seed);
            let mu = decompose(&m);
            let total: Rational = mu.alpha().iter().cloned().sum();
            if total != Rational::from_int(1) {
                return Err(fail(
                    NAME,
                    q,
                    format!("seed {seed}, n = {n}: mixing weights sum to {total}"),
                ));
            }
            if recompose(&mu) != m {
                return Err(fail(
                    NAME,
                    q,
                    format!("seed {seed}, n = {n}: recomposition differs"),
                ));
            }
            checks += 2;
        }
    }
    Ok(checks)
}

/// `2 max_A |a(A) - b(A)|` by enumerating all events.
fn sup_over_events(a: &DenseMeasure<Rational>, b: &DenseMeasure<Rational>) -> Rational {
    let cells = a.weights().len();
    let mut best = Rational::from_int(0);
    for event in 0u64..(1u64 << cells) {
        let mut diff = Rational::from_int(0);
        for cell in 0..cells {
            if (event >> cell) & 1 == 1 {
                diff += a.weights()[cell].clone() - b.weights()[cell].clone();
            }
        }
        let diff = num::Signed::abs(&diff);
        if diff > best {
            best = diff;
        }
    }
    best * Rational::from_int(2)
}

fn tv_convention(opts: &VerifyOptions, q: &QParam<Rational>) -> SuiteResult {
    const NAME: &str = "tv convention";
    let mut checks = 0;
    for n in 0..=opts.max_n.min(TV_SUBSET_MAX_N) {
        for seed in 0..5 {
            let a = to_dense(&random_q_exch(n, q, seed)).expect("small n");
            let b = to_dense(&random_q_exch(n, q, seed + 1000)).expect("small n");
            let l1 = a.tv_distance(&b).expect("same n");
            let sup = sup_over_events(&a, &b);
            if l1 != sup {
                return Err(fail(
                    NAME,
                    q,
                    format!("n = {n}, seed {seed}: L1 {l1} != 2 sup {sup}"),
                ));
            }
            checks += 1;
        }
    }
    Ok(checks)
}
