//! Exhaustive structural checks at small `n`.
//!
//! Supermodularity is tested through the pairwise-marginal form: for every
//! `S` and ordered pair `i ≠ j` outside `S`,
//! `f(S∪{i,j}) − f(S∪{j}) ≥ f(S∪{i}) − f(S)`. Each base `S` costs one query
//! for `f(S)`, one per `i ∉ S` for `f(S∪{i})`, and one per ordered pair for
//! `f(S∪{i,j})`, so a full scan issues exactly
//! `n(n−1)·2^(n−2) + n·2^(n−1) + 2^n` queries (see [`supermodular_query_count`]).
//! [`lattice_violations`] checks the defining inequality over all pairs and
//! serves as a cross-check at tiny `n`.

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::oracle::{CountingOracle, SetFunction};
use crate::setcore::{enumerate_subsets, GroundSize, Subset};
use crate::value::ExactValue;

/// Default cap on stored violations per check.
pub const DEFAULT_VIOLATION_CAP: usize = 100;

/// Largest `n` accepted by the all-pairs lattice check.
pub const LATTICE_GUARD: usize = 12;

/// A failed pairwise-marginal inequality: `lhs_margin < rhs_margin` where
/// `lhs_margin = f(S∪{i,j}) − f(S∪{j})` and `rhs_margin = f(S∪{i}) − f(S)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ViolationRecord {
    pub base: Subset,
    pub i: usize,
    pub j: usize,
    pub lhs_margin: ExactValue,
    pub rhs_margin: ExactValue,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Nondecreasing,
    Nonincreasing,
}

impl Direction {
    pub fn label(self) -> &'static str {
        match self {
            Direction::Nondecreasing => "nondecreasing",
            Direction::Nonincreasing => "nonincreasing",
        }
    }
}

/// A single-element marginal `f(S∪{e}) − f(S)` with the wrong sign.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MonotoneViolation {
    pub base: Subset,
    pub element: usize,
    pub marginal: ExactValue,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NegativeValue {
    pub set: Subset,
    pub value: ExactValue,
}

/// Queries issued by a full [`check_supermodular`] scan.
pub fn supermodular_query_count(n: GroundSize) -> u128 {
    let n = n.get() as u128;
    let pairs = if n >= 2 { (n * (n - 1)) << (n - 2) } else { 0 };
    pairs + (n << (n - 1)) + (1u128 << n)
}

/// Every supermodularity violation (up to [`DEFAULT_VIOLATION_CAP`]).
pub fn check_supermodular(oracle: &mut CountingOracle) -> Result<Vec<ViolationRecord>> {
    check_supermodular_capped(oracle, DEFAULT_VIOLATION_CAP)
}

/// As [`check_supermodular`] with an explicit cap. The scan always runs to
/// completion, so the query count does not depend on the cap.
pub fn check_supermodular_capped(
    oracle: &mut CountingOracle,
    cap: usize,
) -> Result<Vec<ViolationRecord>> {
    let n = oracle.ground();
    let mut out = Vec::new();
    let mut singles: Vec<Option<ExactValue>> = vec![None; n.get()];
    for base in enumerate_subsets(n, None)? {
        let f_base = oracle.query(base);
        let outside: Vec<usize> = base.non_members().collect();
        for slot in singles.iter_mut() {
            *slot = None;
        }
        for &i in &outside {
            singles[i] = Some(oracle.query(base.with(i)));
        }
        for &i in &outside {
            let rhs = singles[i].as_ref().expect("queried above") - &f_base;
            for &j in &outside {
                if i == j {
                    continue;
                }
                let f_ij = oracle.query(base.with(i).with(j));
                let lhs = &f_ij - singles[j].as_ref().expect("queried above");
                if lhs < rhs && out.len() < cap {
                    out.push(ViolationRecord {
                        base,
                        i,
                        j,
                        lhs_margin: lhs,
                        rhs_margin: rhs.clone(),
                    });
                }
            }
        }
    }
    Ok(out)
}

/// Single-element marginals with the wrong sign for `direction`.
pub fn check_monotone(
    oracle: &mut CountingOracle,
    direction: Direction,
) -> Result<Vec<MonotoneViolation>> {
    check_monotone_capped(oracle, direction, DEFAULT_VIOLATION_CAP)
}

pub fn check_monotone_capped(
    oracle: &mut CountingOracle,
    direction: Direction,
    cap: usize,
) -> Result<Vec<MonotoneViolation>> {
    let n = oracle.ground();
    let mut out = Vec::new();
    for base in enumerate_subsets(n, None)? {
        let f_base = oracle.query(base);
        for e in base.non_members() {
            let marginal = &oracle.query(base.with(e)) - &f_base;
            let bad = match direction {
                Direction::Nondecreasing => marginal.is_negative(),
                Direction::Nonincreasing => marginal.is_positive(),
            };
            if bad && out.len() < cap {
                out.push(MonotoneViolation {
                    base,
                    element: e,
                    marginal,
                });
            }
        }
    }
    Ok(out)
}

/// Subsets with a negative value.
pub fn check_nonnegative(oracle: &mut CountingOracle) -> Result<Vec<NegativeValue>> {
    let n = oracle.ground();
    let mut out = Vec::new();
    for s in enumerate_subsets(n, None)? {
        let value = oracle.query(s);
        if value.is_negative() && out.len() < DEFAULT_VIOLATION_CAP {
            out.push(NegativeValue { set: s, value });
        }
    }
    Ok(out)
}

/// Pairs `(S, T)` with `f(S) + f(T) > f(S∪T) + f(S∩T)`, stopping after `limit`.
///
/// Only unordered incomparable pairs are examined; the inequality is
/// symmetric and holds with equality when one set contains the other.
pub fn lattice_violations<F: SetFunction + ?Sized>(
    func: &F,
    limit: usize,
) -> Result<Vec<(Subset, Subset)>> {
    let n = func.ground();
    if n.get() > LATTICE_GUARD {
        return Err(Error::GuardExceeded {
            n: n.get(),
            guard: LATTICE_GUARD,
        });
    }
    let size = 1usize << n.get();
    let values: Vec<ExactValue> = (0..size)
        .map(|m| func.value(Subset::from_mask(n, m as u128).expect("in range")))
        .collect();
    let mut out = Vec::new();
    for s in 0..size {
        for t in (s + 1)..size {
            if s & t == s || s & t == t {
                continue;
            }
            let lhs = &values[s] + &values[t];
            let rhs = &values[s | t] + &values[s & t];
            if lhs > rhs {
                let mk = |m: usize| Subset::from_mask(n, m as u128).expect("in range");
                out.push((mk(s), mk(t)));
                if out.len() >= limit {
                    return Ok(out);
                }
            }
        }
    }
    Ok(out)
}

/// Outcome of all three checks on one function.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub label: String,
    pub n: usize,
    pub supermodular: Vec<ViolationRecord>,
    pub monotone: Option<(Direction, Vec<MonotoneViolation>)>,
    pub nonnegative: Vec<NegativeValue>,
    pub queries: u64,
}

impl VerifyReport {
    pub fn violation_count(&self) -> usize {
        self.supermodular.len()
            + self.monotone.as_ref().map_or(0, |(_, v)| v.len())
            + self.nonnegative.len()
    }

    pub fn is_clean(&self) -> bool {
        self.violation_count() == 0
    }
}

/// Runs supermodularity, non-negativity, and (when `direction` is given)
/// monotonicity checks on `func`.
pub fn verify_function<F: SetFunction>(
    label: &str,
    func: &F,
    direction: Option<Direction>,
) -> Result<VerifyReport> {
    let mut oracle = CountingOracle::new(func);
    let supermodular = check_supermodular(&mut oracle)?;
    let monotone = match direction {
        Some(d) => Some((d, check_monotone(&mut oracle, d)?)),
        None => None,
    };
    let nonnegative = check_nonnegative(&mut oracle)?;
    Ok(VerifyReport {
        label: label.to_string(),
        n: func.ground().get(),
        supermodular,
        monotone,
        nonnegative,
        queries: oracle.calls(),
    })
}

/// Supermodularity violations as CSV: `base_mask_hex,i,j,lhs,rhs`.
pub fn violations_csv(records: &[ViolationRecord]) -> String {
    let mut out = String::from("base_mask_hex,i,j,lhs,rhs\n");
    for r in records {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            r.base.to_hex(),
            r.i,
            r.j,
            r.lhs_margin,
            r.rhs_margin
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{DecreasingInstance, FnSetFunction, IncreasingInstance};
    use crate::value::q;

    fn g(n: usize) -> GroundSize {
        GroundSize::new(n).unwrap()
    }

    fn card(n: usize) -> FnSetFunction<impl Fn(Subset) -> ExactValue> {
        FnSetFunction::new(g(n), |s: Subset| ExactValue::from_int(s.cardinality() as u64))
    }

    #[test]
    fn decreasing_f_is_supermodular() {
        let inst = DecreasingInstance::new(g(6), 2, 1, q("1/4"), None).unwrap();
        let f = inst.f();
        assert!(check_supermodular(&mut CountingOracle::new(&f)).unwrap().is_empty());
    }

    #[test]
    fn modular_function_passes() {
        let f = card(6);
        assert!(check_supermodular(&mut CountingOracle::new(&f)).unwrap().is_empty());
    }

    #[test]
    fn truncated_cardinality_fails() {
        let f = FnSetFunction::new(g(3), |s: Subset| {
            ExactValue::from_int(s.cardinality().min(1) as u64)
        });
        let v = check_supermodular(&mut CountingOracle::new(&f)).unwrap();
        assert!(!v.is_empty());
        let at_empty: Vec<_> = v.iter().filter(|r| r.base.is_empty()).collect();
        // all six ordered pairs fail at the empty base
        assert_eq!(at_empty.len(), 6);
        for r in at_empty {
            assert_eq!(r.lhs_margin, q("0"));
            assert_eq!(r.rhs_margin, q("1"));
            assert_ne!(r.i, r.j);
        }
    }

    #[test]
    fn cap_limits_output_not_queries() {
        let f = FnSetFunction::new(g(5), |s: Subset| {
            ExactValue::from_int(s.cardinality().min(1) as u64)
        });
        let mut o = CountingOracle::new(&f);
        let v = check_supermodular_capped(&mut o, 3).unwrap();
        assert_eq!(v.len(), 3);
        assert_eq!(o.calls() as u128, supermodular_query_count(g(5)));
    }

    #[test]
    fn query_count_formula() {
        for n in 1..=10 {
            let f = card(n);
            let mut o = CountingOracle::new(&f);
            check_supermodular(&mut o).unwrap();
            let n_ = n as u128;
            let pairs = if n >= 2 { n_ * (n_ - 1) * (1u128 << (n - 2)) } else { 0 };
            assert_eq!(o.calls() as u128, pairs + n_ * (1u128 << (n - 1)) + (1u128 << n));
        }
    }

    #[test]
    fn monotone_examples() {
        let dec = DecreasingInstance::new(g(8), 3, 1, q("1/2"), None).unwrap();
        let f = dec.f();
        assert!(check_monotone(&mut CountingOracle::new(&f), Direction::Nonincreasing)
            .unwrap()
            .is_empty());
        assert!(!check_monotone(&mut CountingOracle::new(&f), Direction::Nondecreasing)
            .unwrap()
            .is_empty());

        for plant_seed in 0..5 {
            let plant = crate::setcore::random_k_subset(g(8), 4, plant_seed).unwrap();
            let inc = IncreasingInstance::new(g(8), q("100"), q("1/2"), Some(plant)).unwrap();
            let gr = inc.g_planted().unwrap();
            assert!(check_monotone(&mut CountingOracle::new(&gr), Direction::Nondecreasing)
                .unwrap()
                .is_empty());
        }

        let constant = FnSetFunction::new(g(5), |_| q("7/3"));
        for d in [Direction::Nondecreasing, Direction::Nonincreasing] {
            assert!(check_monotone(&mut CountingOracle::new(&constant), d).unwrap().is_empty());
        }
    }

    #[test]
    fn nonnegative_examples() {
        let inc = IncreasingInstance::new(g(8), q("100"), q("1/2"), None).unwrap();
        let gi = inc.g();
        assert!(check_nonnegative(&mut CountingOracle::new(&gi)).unwrap().is_empty());
        let dec = DecreasingInstance::new(g(8), 3, 1, q("1/2"), None).unwrap();
        let fd = dec.f();
        assert!(check_nonnegative(&mut CountingOracle::new(&fd)).unwrap().is_empty());

        let shifted = FnSetFunction::new(g(3), |s: Subset| {
            ExactValue::from_int(s.cardinality() as i64 - 1)
        });
        let neg = check_nonnegative(&mut CountingOracle::new(&shifted)).unwrap();
        assert_eq!(
            neg,
            vec![NegativeValue {
                set: Subset::empty(g(3)),
                value: q("-1")
            }]
        );
    }

    #[test]
    fn guard_refusal() {
        let f = card(30);
        assert!(matches!(
            check_supermodular(&mut CountingOracle::new(&f)),
            Err(Error::GuardExceeded { n: 30, .. })
        ));
        assert!(lattice_violations(&card(13), 1).is_err());
    }

    #[test]
    fn csv_format() {
        let rec = ViolationRecord {
            base: Subset::from_indices(g(4), [0, 2]).unwrap(),
            i: 1,
            j: 3,
            lhs_margin: q("0"),
            rhs_margin: q("1/2"),
        };
        assert_eq!(
            violations_csv(&[rec]),
            "base_mask_hex,i,j,lhs,rhs\n0x5,1,3,0/1,1/2\n"
        );
    }
}
