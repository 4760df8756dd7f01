//! Exact and heuristic optimization of `h = f/g` over nonempty subsets.
//!
//! Ties are always broken by smaller cardinality, then ascending mask, for
//! both senses. With that fixed order, the minimizer of `f/g` and the
//! maximizer of `g/f` are literally the same set.

use std::cmp::Ordering;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::oracle::{RatioOracle, SetFunction};
use crate::setcore::{check_guard, rng_for, sample_nonempty, Subset};
use crate::value::ExactValue;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Sense {
    Minimize,
    Maximize,
}

impl Sense {
    pub fn flip(self) -> Sense {
        match self {
            Sense::Minimize => Sense::Maximize,
            Sense::Maximize => Sense::Minimize,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Brute,
    Local,
    Random,
}

impl Method {
    pub fn label(self) -> &'static str {
        match self {
            Method::Brute => "brute",
            Method::Local => "local",
            Method::Random => "random",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// The set an optimizer returns, with its exact objective value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OptResult {
    pub argset: Subset,
    pub value: ExactValue,
    pub queries_used: u64,
    pub method: Method,
    pub sense: Sense,
}

/// `Less` when `a` beats `b` under `sense` and the fixed tie-break.
pub fn compare_candidates(
    sense: Sense,
    a: (&ExactValue, Subset),
    b: (&ExactValue, Subset),
) -> Ordering {
    let by_value = match sense {
        Sense::Minimize => a.0.cmp(b.0),
        Sense::Maximize => b.0.cmp(a.0),
    };
    by_value
        .then(a.1.cardinality().cmp(&b.1.cardinality()))
        .then(a.1.mask().cmp(&b.1.mask()))
}

fn brute_force(oracle: &mut RatioOracle, sense: Sense) -> Result<OptResult> {
    let n = oracle.ground();
    check_guard(n)?;
    let start = oracle.queries();
    let mut best: Option<(ExactValue, Subset)> = None;
    for mask in 1..(1u128 << n.get()) {
        let s = Subset::from_mask(n, mask)?;
        let v = oracle.ratio(s)?;
        let better = match &best {
            None => true,
            Some((bv, bs)) => compare_candidates(sense, (&v, s), (bv, *bs)) == Ordering::Less,
        };
        if better {
            best = Some((v, s));
        }
    }
    let (value, argset) = best.expect("a nonempty ground set has a nonempty subset");
    Ok(OptResult {
        argset,
        value,
        queries_used: oracle.queries() - start,
        method: Method::Brute,
        sense,
    })
}

/// Exact minimizer of `h` over all nonempty subsets.
pub fn brute_force_min_ratio(oracle: &mut RatioOracle) -> Result<OptResult> {
    brute_force(oracle, Sense::Minimize)
}

/// Exact maximizer of `h` over all nonempty subsets.
pub fn brute_force_max_ratio(oracle: &mut RatioOracle) -> Result<OptResult> {
    brute_force(oracle, Sense::Maximize)
}

/// Optimize `numerator / denominator` in the given sense.
#[derive(Clone, Copy)]
pub struct RatioProblem<'a> {
    pub numerator: &'a dyn SetFunction,
    pub denominator: &'a dyn SetFunction,
    pub sense: Sense,
}

impl<'a> RatioProblem<'a> {
    pub fn minimize(numerator: &'a dyn SetFunction, denominator: &'a dyn SetFunction) -> Self {
        RatioProblem {
            numerator,
            denominator,
            sense: Sense::Minimize,
        }
    }

    pub fn maximize(numerator: &'a dyn SetFunction, denominator: &'a dyn SetFunction) -> Self {
        RatioProblem {
            numerator,
            denominator,
            sense: Sense::Maximize,
        }
    }

    /// Minimizing `f/g` is maximizing `g/f` and vice versa. The swap is
    /// free; a zero in the new denominator surfaces as
    /// [`Error::UndefinedRatio`] when the dual is solved.
    pub fn dualize(&self) -> RatioProblem<'a> {
        RatioProblem {
            numerator: self.denominator,
            denominator: self.numerator,
            sense: self.sense.flip(),
        }
    }

    pub fn oracle(&self) -> Result<RatioOracle<'a>> {
        RatioOracle::new(self.numerator, self.denominator)
    }

    pub fn solve_exhaustive(&self) -> Result<OptResult> {
        brute_force(&mut self.oracle()?, self.sense)
    }
}

/// Moves tried from `s`: add each outside element, drop each member (when
/// `s` keeps at least one), then swap each member for each outside element.
fn neighbours(s: Subset) -> Vec<Subset> {
    let inside: Vec<usize> = s.indices().collect();
    let outside: Vec<usize> = s.non_members().collect();
    let mut out = Vec::with_capacity(outside.len() + inside.len() * (outside.len() + 1));
    out.extend(outside.iter().map(|&e| s.with(e)));
    if inside.len() > 1 {
        out.extend(inside.iter().map(|&e| s.without(e)));
    }
    for &drop in &inside {
        for &add in &outside {
            out.push(s.without(drop).with(add));
        }
    }
    out
}

/// Best-improvement local search for the minimum of `h`.
///
/// Starts at a seeded uniform nonempty subset. Each round evaluates the
/// whole neighbourhood and moves to the best strictly improving neighbour.
/// Stops at a local minimum, or when the next evaluation would exceed
/// `budget` queries (the best move found so far is still taken).
pub fn local_search(oracle: &mut RatioOracle, budget: u64, seed: u64) -> Result<OptResult> {
    let n = oracle.ground();
    if budget < n.get() as u64 || budget < 2 {
        return Err(Error::Parameter(format!(
            "local search budget {budget} must be at least max(n, 2) = {}",
            n.get().max(2)
        )));
    }
    let start = oracle.queries();
    let used = |o: &RatioOracle| o.queries() - start;
    let mut rng = rng_for(seed, 0);
    let mut current = sample_nonempty(n, &mut rng);
    let mut value = oracle.ratio(current)?;
    'search: loop {
        let mut best: Option<(ExactValue, Subset)> = None;
        let mut exhausted = false;
        for cand in neighbours(current) {
            if used(oracle) + 2 > budget {
                exhausted = true;
                break;
            }
            let v = oracle.ratio(cand)?;
            if v >= value {
                continue;
            }
            let better = match &best {
                None => true,
                Some((bv, bs)) => {
                    compare_candidates(Sense::Minimize, (&v, cand), (bv, *bs)) == Ordering::Less
                }
            };
            if better {
                best = Some((v, cand));
            }
        }
        match best {
            Some((v, s)) => {
                current = s;
                value = v;
                if exhausted {
                    break 'search;
                }
            }
            None => break 'search,
        }
    }
    Ok(OptResult {
        argset: current,
        value,
        queries_used: used(oracle),
        method: Method::Local,
        sense: Sense::Minimize,
    })
}

/// Evaluates `h` at `samples` seeded uniform nonempty subsets and keeps the
/// best (two queries per sample).
pub fn random_search(oracle: &mut RatioOracle, samples: u64, seed: u64) -> Result<OptResult> {
    if samples == 0 {
        return Err(Error::Parameter("random search needs at least one sample".into()));
    }
    let n = oracle.ground();
    let start = oracle.queries();
    let mut rng = rng_for(seed, 0);
    let mut best: Option<(ExactValue, Subset)> = None;
    for _ in 0..samples {
        let s = sample_nonempty(n, &mut rng);
        let v = oracle.ratio(s)?;
        let better = match &best {
            None => true,
            Some((bv, bs)) => {
                compare_candidates(Sense::Minimize, (&v, s), (bv, *bs)) == Ordering::Less
            }
        };
        if better {
            best = Some((v, s));
        }
    }
    let (value, argset) = best.expect("samples >= 1");
    Ok(OptResult {
        argset,
        value,
        queries_used: oracle.queries() - start,
        method: Method::Random,
        sense: Sense::Minimize,
    })
}
