//! The indistinguishability game behind the hardness result.
//!
//! For the decreasing family the harness draws a uniform plant `R` of size
//! `α`, lets an algorithm query `(f, g_R)`, and records whether any query
//! (or the returned set) landed where `f ≠ g_R`. Since `f` and `g_R` agree
//! everywhere else, the chance of that is bounded by a union bound over
//! exact hypergeometric per-query probabilities.
//!
//! For the increasing family the harness is a lazy adversary: it answers
//! with the unplanted `(f, g)` and only afterwards picks a plant `R*` that
//! no query touched. Since `g_{R*}` differs from `g` only at `R*`, every
//! answer is also an answer of the planted instance.
//!
//! Per-trial seeds are `derive_seed(seed, trial)`. Within a trial the
//! algorithm draws from ChaCha stream 0 and the plant from stream 1.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::optimize::{local_search, random_search, OptResult};
use crate::oracle::{
    DecreasingInstance, Family, IncreasingInstance, RatioOracle, SetFunction, TranscriptEntry,
};
use crate::setcore::{binomial, derive_seed, rng_for, sample_k_subset, GroundSize, KSubsets, Subset};
use crate::value::ExactValue;

fn big_binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Probability, over a uniform plant `R` with `|R| = alpha`, that a fixed
/// query of cardinality `s` satisfies `beta + |S ∩ R̄| < min{alpha, s}`.
///
/// With `X = |S ∩ R|` hypergeometric, the event is
/// `X > s + beta − min{alpha, s}`.
pub fn distinguish_probability(n: usize, alpha: usize, beta: usize, s: usize) -> Result<ExactValue> {
    if s > n || alpha > n {
        return Err(Error::Parameter(format!(
            "need s <= n and alpha <= n, got n={n}, alpha={alpha}, s={s}"
        )));
    }
    let threshold = s + beta - alpha.min(s);
    let top = alpha.min(s);
    let mut hits = BigInt::zero();
    for x in (threshold + 1)..=top {
        hits += big_binomial(s, x) * big_binomial(n - s, alpha - x);
    }
    ExactValue::ratio(hits, big_binomial(n, alpha))
}

/// `min(1, Σ distinguish_probability(n, alpha, beta, s))` over the list.
pub fn union_bound(cardinalities: &[usize], n: usize, alpha: usize, beta: usize) -> Result<ExactValue> {
    let mut cache: Vec<Option<ExactValue>> = vec![None; n + 1];
    let mut total = ExactValue::zero();
    for &s in cardinalities {
        if s > n {
            return Err(Error::Parameter(format!("query cardinality {s} exceeds n={n}")));
        }
        if cache[s].is_none() {
            cache[s] = Some(distinguish_probability(n, alpha, beta, s)?);
        }
        total = total + cache[s].as_ref().expect("filled above");
    }
    Ok(total.min(ExactValue::one()))
}

/// Monte Carlo frequency of the difference criterion with its binomial
/// standard error.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct McEstimate {
    pub hits: u64,
    pub trials: u64,
    pub frequency: f64,
    pub std_error: f64,
}

/// Samples plants uniformly against the fixed query `{0, .., s-1}`.
pub fn monte_carlo_distinguish(
    n: usize,
    alpha: usize,
    beta: usize,
    s: usize,
    trials: u64,
    seed: u64,
) -> Result<McEstimate> {
    if trials == 0 {
        return Err(Error::Parameter("monte carlo needs at least one trial".into()));
    }
    let ground = GroundSize::new(n)?;
    if s > n || alpha > n {
        return Err(Error::Parameter(format!(
            "need s <= n and alpha <= n, got n={n}, alpha={alpha}, s={s}"
        )));
    }
    let query = Subset::from_indices(ground, 0..s)?;
    let mut rng = rng_for(seed, 0);
    let mut hits = 0u64;
    for _ in 0..trials {
        let plant = sample_k_subset(ground, alpha, &mut rng)?;
        let outside = query.difference(plant).cardinality();
        if beta + outside < alpha.min(s) {
            hits += 1;
        }
    }
    let p = hits as f64 / trials as f64;
    Ok(McEstimate {
        hits,
        trials,
        frequency: p,
        std_error: (p * (1.0 - p) / trials as f64).sqrt(),
    })
}

/// Every answered query plus the set the algorithm returned.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QueryTranscript {
    pub entries: Vec<TranscriptEntry>,
    pub returned: Subset,
}

impl QueryTranscript {
    /// Queried sets followed by the returned set.
    pub fn effective_sets(&self) -> impl Iterator<Item = Subset> + '_ {
        self.entries.iter().map(|e| e.set).chain(std::iter::once(self.returned))
    }
}

/// Ascending-mask-first subset of size `⌊n/2⌋` absent from the transcript
/// (queries and returned set alike).
pub fn find_consistent_plant(transcript: &QueryTranscript, n: GroundSize) -> Result<Subset> {
    let k = n.half();
    let seen: HashSet<u128> = transcript
        .effective_sets()
        .filter(|s| s.cardinality() == k)
        .map(|s| s.mask())
        .collect();
    KSubsets::new(n, k)
        .find(|s| !seen.contains(&s.mask()))
        .ok_or(Error::NoConsistentPlant {
            k,
            candidates: binomial(n.get(), k),
        })
}

/// Whether re-evaluating every transcript entry under `(f, g)` reproduces
/// the recorded answers.
pub fn transcript_consistent(
    transcript: &QueryTranscript,
    f: &dyn SetFunction,
    g: &dyn SetFunction,
) -> bool {
    transcript
        .entries
        .iter()
        .all(|e| f.value(e.set) == e.f && g.value(e.set) == e.g)
}

/// A query-budgeted algorithm the harness can run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    LocalSearch,
    RandomSearch,
}

impl Algorithm {
    pub fn label(self) -> &'static str {
        match self {
            Algorithm::LocalSearch => "local",
            Algorithm::RandomSearch => "random",
        }
    }

    /// Runs under a query budget; random search spends it as
    /// `⌊budget/2⌋` samples.
    pub fn run(self, oracle: &mut RatioOracle, budget: u64, seed: u64) -> Result<OptResult> {
        match self {
            Algorithm::LocalSearch => local_search(oracle, budget, seed),
            Algorithm::RandomSearch => {
                if budget < 2 {
                    return Err(Error::Parameter(format!(
                        "random search needs a budget of at least 2 queries, got {budget}"
                    )));
                }
                random_search(oracle, budget / 2, seed)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GameConfig {
    pub algorithm: Algorithm,
    pub budget: u64,
    pub trials: u64,
    pub seed: u64,
}

/// Outcome of one trial.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GameReport {
    pub family: Family,
    pub n: usize,
    pub trial: u64,
    pub seed: u64,
    pub queries: u64,
    pub distinguished: bool,
    pub first_distinguishing_index: Option<usize>,
    pub algorithm_value: ExactValue,
    pub planted_optimum: ExactValue,
    pub empirical_ratio: ExactValue,
    pub union_bound: ExactValue,
    pub returned: Subset,
    pub plant: Subset,
}

/// Per-trial seeds used by a game with this configuration.
pub fn trial_seeds(cfg: &GameConfig) -> Vec<u64> {
    (0..cfg.trials).map(|t| derive_seed(cfg.seed, t)).collect()
}

/// Decreasing-family game; `inst` must not carry a plant.
pub fn run_game_decreasing(inst: &DecreasingInstance, cfg: &GameConfig) -> Result<Vec<GameReport>> {
    if inst.plant().is_some() {
        return Err(Error::Parameter("the game draws its own plant; pass an unplanted instance".into()));
    }
    let n = inst.n();
    let (alpha, beta) = (inst.alpha() as usize, inst.beta() as usize);
    let mut reports = Vec::with_capacity(cfg.trials as usize);
    for (trial, trial_seed) in trial_seeds(cfg).into_iter().enumerate() {
        let plant = sample_k_subset(n, alpha, &mut rng_for(trial_seed, 1))?;
        let planted = inst.clone().with_plant(plant)?;
        let (f, g) = (planted.f(), planted.g_planted()?);
        let mut oracle = RatioOracle::recording(&f, &g)?;
        let result = cfg.algorithm.run(&mut oracle, cfg.budget, trial_seed)?;
        let transcript = QueryTranscript {
            entries: oracle.take_transcript(),
            returned: result.argset,
        };
        let mut first = None;
        for (idx, s) in transcript.effective_sets().enumerate() {
            if planted.differs_at(s)? {
                first = Some(idx);
                break;
            }
        }
        let cards: Vec<usize> = transcript.effective_sets().map(|s| s.cardinality()).collect();
        let union = union_bound(&cards, n.get(), alpha, beta)?;
        let planted_optimum = planted.planted_optimum();
        let empirical_ratio = &result.value / &planted_optimum;
        reports.push(GameReport {
            family: Family::Decreasing,
            n: n.get(),
            trial: trial as u64,
            seed: trial_seed,
            queries: oracle.queries(),
            distinguished: first.is_some(),
            first_distinguishing_index: first,
            algorithm_value: result.value,
            planted_optimum,
            empirical_ratio,
            union_bound: union,
            returned: result.argset,
            plant,
        });
    }
    Ok(reports)
}

/// Increasing-family game against a lazy adversary; `inst` must not carry
/// a plant and needs `n ≥ 2`.
///
/// `union_bound` here is the fraction of `⌊n/2⌋`-subsets the algorithm
/// touched, i.e. the chance that a uniformly drawn plant would have been
/// hit.
pub fn run_game_increasing(inst: &IncreasingInstance, cfg: &GameConfig) -> Result<Vec<GameReport>> {
    if inst.plant().is_some() {
        return Err(Error::Parameter("the game plants lazily; pass an unplanted instance".into()));
    }
    let n = inst.n();
    if n.get() < 2 {
        return Err(Error::Parameter("the increasing game needs n >= 2".into()));
    }
    let k = n.half();
    let candidates = ExactValue::from_int(big_binomial(n.get(), k));
    let (f, g) = (inst.f(), inst.g());
    let mut reports = Vec::with_capacity(cfg.trials as usize);
    for (trial, trial_seed) in trial_seeds(cfg).into_iter().enumerate() {
        let mut oracle = RatioOracle::recording(&f, &g)?;
        let result = cfg.algorithm.run(&mut oracle, cfg.budget, trial_seed)?;
        let transcript = QueryTranscript {
            entries: oracle.take_transcript(),
            returned: result.argset,
        };
        let plant = find_consistent_plant(&transcript, n)?;
        let planted = inst.clone().with_plant(plant)?;
        let g_planted = planted.g_planted()?;
        let consistent = transcript_consistent(&transcript, &f, &g_planted);
        let touched: HashSet<u128> = transcript
            .effective_sets()
            .filter(|s| s.cardinality() == k)
            .map(|s| s.mask())
            .collect();
        let union = &ExactValue::from_int(touched.len() as u64) / &candidates;
        let planted_optimum = planted.planted_optimum();
        let empirical_ratio = &result.value / &planted_optimum;
        reports.push(GameReport {
            family: Family::Increasing,
            n: n.get(),
            trial: trial as u64,
            seed: trial_seed,
            queries: oracle.queries(),
            distinguished: !consistent,
            first_distinguishing_index: None,
            algorithm_value: result.value,
            planted_optimum,
            empirical_ratio,
            union_bound: union,
            returned: result.argset,
            plant,
        });
    }
    Ok(reports)
}

/// Aggregate over a batch of [`GameReport`]s.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GameSummary {
    pub family: Family,
    pub algorithm: Algorithm,
    pub n: usize,
    pub budget: u64,
    pub trials: u64,
    pub seed: u64,
    pub min_ratio: ExactValue,
    pub median_ratio: ExactValue,
    pub max_ratio: ExactValue,
    pub distinguished: u64,
    pub distinguishing_frequency: ExactValue,
    pub mean_union_bound: ExactValue,
    /// `min{1/ε, 2m/n}` (increasing) or `(α+ε−β)/ε` (decreasing): the ratio
    /// every undistinguished trial reaches.
    pub guaranteed_ratio: ExactValue,
}

pub fn summarize(
    reports: &[GameReport],
    cfg: &GameConfig,
    guaranteed_ratio: ExactValue,
) -> Result<GameSummary> {
    let first = reports
        .first()
        .ok_or_else(|| Error::Parameter("cannot summarize zero trials".into()))?;
    let mut ratios: Vec<&ExactValue> = reports.iter().map(|r| &r.empirical_ratio).collect();
    ratios.sort();
    let mid = ratios.len() / 2;
    let median = if ratios.len() % 2 == 1 {
        ratios[mid].clone()
    } else {
        &(ratios[mid - 1] + ratios[mid]) / &ExactValue::from_int(2)
    };
    let count = ExactValue::from_int(reports.len() as u64);
    let distinguished = reports.iter().filter(|r| r.distinguished).count() as u64;
    let total_union = reports
        .iter()
        .fold(ExactValue::zero(), |acc, r| acc + &r.union_bound);
    Ok(GameSummary {
        family: first.family,
        algorithm: cfg.algorithm,
        n: first.n,
        budget: cfg.budget,
        trials: reports.len() as u64,
        seed: cfg.seed,
        min_ratio: ratios[0].clone(),
        median_ratio: median,
        max_ratio: ratios[ratios.len() - 1].clone(),
        distinguished,
        distinguishing_frequency: &ExactValue::from_int(distinguished) / &count,
        mean_union_bound: &total_union / &count,
        guaranteed_ratio,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::value::q;

    fn g(n: usize) -> GroundSize {
        GroundSize::new(n).unwrap()
    }

    /// Counts plants directly against the difference criterion.
    fn enumerate_probability(n: usize, alpha: usize, beta: usize, s: usize) -> ExactValue {
        let query = Subset::from_indices(g(n), 0..s).unwrap();
        let (mut hits, mut total) = (0u64, 0u64);
        for plant in KSubsets::new(g(n), alpha) {
            total += 1;
            let outside = query.difference(plant).cardinality();
            if beta + outside < alpha.min(query.cardinality()) {
                hits += 1;
            }
        }
        ExactValue::ratio(hits, total).unwrap()
    }

    #[test]
    fn worked_value() {
        assert_eq!(enumerate_probability(14, 4, 1, 6), q("15/1001"));
        assert_eq!(distinguish_probability(14, 4, 1, 6).unwrap(), q("15/1001"));
    }

    #[test]
    fn trivial_cases() {
        for s in 0..=3 {
            assert_eq!(distinguish_probability(10, 5, 3, s).unwrap(), q("0"));
        }
        for s in 3..=10 {
            assert_eq!(distinguish_probability(10, 10, 2, s).unwrap(), q("1"));
        }
        assert!(distinguish_probability(10, 11, 2, 3).is_err());
    }

    #[test]
    fn matches_enumeration_small() {
        for n in 1..=9 {
            for alpha in 0..=n {
                for beta in 0..=n {
                    for s in 0..=n {
                        assert_eq!(
                            distinguish_probability(n, alpha, beta, s).unwrap(),
                            enumerate_probability(n, alpha, beta, s),
                            "n={n} alpha={alpha} beta={beta} s={s}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn union_bound_examples() {
        assert_eq!(union_bound(&[], 14, 4, 1).unwrap(), q("0"));
        assert_eq!(union_bound(&[0, 1, 1], 14, 4, 1).unwrap(), q("0"));
        assert_eq!(union_bound(&[6, 6, 6], 14, 4, 1).unwrap(), q("45/1001"));
        assert_eq!(union_bound(&[10; 50], 10, 10, 2).unwrap(), q("1"));
        let mut prev = q("0");
        let mut list = Vec::new();
        for s in [3, 7, 9, 5, 6, 14] {
            list.push(s);
            let u = union_bound(&list, 14, 4, 1).unwrap();
            assert!(u >= prev);
            prev = u;
        }
    }

    #[test]
    fn monte_carlo_examples() {
        let est = monte_carlo_distinguish(10, 5, 4, 3, 500, 1).unwrap();
        assert_eq!(est.hits, 0);
        let one = monte_carlo_distinguish(14, 4, 1, 6, 1, 9).unwrap();
        assert!(one.frequency == 0.0 || one.frequency == 1.0);
        let est = monte_carlo_distinguish(14, 4, 1, 6, 20_000, 3).unwrap();
        let exact: f64 = 15.0 / 1001.0;
        let sigma = (exact * (1.0 - exact) / 20_000.0).sqrt();
        assert!((est.frequency - exact).abs() <= 3.0 * sigma);
    }

    fn transcript(n: usize, sets: &[&[usize]], returned: &[usize]) -> QueryTranscript {
        let mk = |idx: &[usize]| Subset::from_indices(g(n), idx.iter().copied()).unwrap();
        QueryTranscript {
            entries: sets
                .iter()
                .map(|s| TranscriptEntry {
                    set: mk(s),
                    f: q("0"),
                    g: q("0"),
                })
                .collect(),
            returned: mk(returned),
        }
    }

    #[test]
    fn consistent_plant_examples() {
        let t = transcript(6, &[&[0], &[0, 1]], &[5]);
        assert_eq!(find_consistent_plant(&t, g(6)).unwrap().mask(), 0b111);

        // masks 0b000111 and 0b001011 are taken; next 3-subset mask is 0b001101
        let t = transcript(6, &[&[0, 1, 2]], &[0, 1, 3]);
        assert_eq!(
            find_consistent_plant(&t, g(6)).unwrap(),
            Subset::from_indices(g(6), [0, 2, 3]).unwrap()
        );

        let all: Vec<Vec<usize>> = KSubsets::new(g(4), 2).map(|s| s.indices().collect()).collect();
        let refs: Vec<&[usize]> = all.iter().map(|v| v.as_slice()).collect();
        let t = transcript(4, &refs, &[0]);
        assert!(matches!(
            find_consistent_plant(&t, g(4)),
            Err(Error::NoConsistentPlant { k: 2, candidates: 6 })
        ));
    }

    fn cfg(algorithm: Algorithm, budget: u64, trials: u64) -> GameConfig {
        GameConfig {
            algorithm,
            budget,
            trials,
            seed: 11,
        }
    }

    #[test]
    fn decreasing_game_small() {
        let inst = DecreasingInstance::new(g(12), 4, 2, q("1/2"), None).unwrap();
        let reports = run_game_decreasing(&inst, &cfg(Algorithm::RandomSearch, 200, 30)).unwrap();
        assert_eq!(reports.len(), 30);
        for r in &reports {
            assert_eq!(r.planted_optimum, q("1/5"));
            assert_eq!(r.empirical_ratio, &r.algorithm_value / &r.planted_optimum);
            assert_eq!(r.distinguished, r.first_distinguishing_index.is_some());
            assert!(r.queries <= 200);
            if !r.distinguished {
                assert_eq!(r.algorithm_value, q("1"));
                assert_eq!(r.empirical_ratio, q("5"));
            } else {
                assert!(r.algorithm_value < q("1"));
            }
        }
        let again = run_game_decreasing(&inst, &cfg(Algorithm::RandomSearch, 200, 30)).unwrap();
        assert_eq!(reports, again);
    }

    #[test]
    fn decreasing_game_rejects_planted() {
        let plant = Subset::from_indices(g(8), [0, 1, 2]).unwrap();
        let inst = DecreasingInstance::new(g(8), 3, 1, q("1/2"), Some(plant)).unwrap();
        assert!(run_game_decreasing(&inst, &cfg(Algorithm::LocalSearch, 64, 1)).is_err());
    }

    #[test]
    fn increasing_game_small() {
        let inst = IncreasingInstance::new(g(10), q("1000"), q("1/10"), None).unwrap();
        for alg in [Algorithm::LocalSearch, Algorithm::RandomSearch] {
            let reports = run_game_increasing(&inst, &cfg(alg, 100, 20)).unwrap();
            for r in &reports {
                assert!(!r.distinguished);
                assert_eq!(r.planted_optimum, q("5"));
                assert!(r.empirical_ratio >= inst.gap_bound());
                assert_eq!(r.plant.cardinality(), 5);
                assert!(r.union_bound < q("1"));
            }
        }
    }

    #[test]
    fn increasing_game_exhaustion_surfaces() {
        let inst = IncreasingInstance::new(g(4), q("10"), q("1/2"), None).unwrap();
        let res = run_game_increasing(&inst, &cfg(Algorithm::RandomSearch, 400, 1));
        assert!(matches!(res, Err(Error::NoConsistentPlant { .. })));
    }

    #[test]
    fn summary_aggregates() {
        let inst = DecreasingInstance::new(g(12), 4, 2, q("1/2"), None).unwrap();
        let c = cfg(Algorithm::LocalSearch, 1728, 10);
        let reports = run_game_decreasing(&inst, &c).unwrap();
        let undistinguished = (&ExactValue::from_int(4u64) + &q("1/2") - q("2")).checked_div(&q("1/2")).unwrap();
        let s = summarize(&reports, &c, undistinguished).unwrap();
        assert_eq!(s.trials, 10);
        assert!(s.min_ratio <= s.median_ratio && s.median_ratio <= s.max_ratio);
        assert_eq!(s.guaranteed_ratio, q("5"));
        assert!(summarize(&[], &c, q("1")).is_err());
    }
}
