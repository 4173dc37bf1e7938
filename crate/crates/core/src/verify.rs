//! Exhaustive verification: run a strategy against every defect set of size at most `s`.

use std::collections::BTreeMap;

use itertools::Itertools;
use rayon::prelude::*;
use serde::Serialize;

use crate::binomial::binomial_u128;
use crate::error::{invalid, Error, Result};
use crate::oracle::Oracle;
use crate::strategy::Strategy;

/// Largest number of defect sets [`verify_exhaustive`] will enumerate.
pub const ENUMERATION_LIMIT: u128 = 1_000_000;

/// `Σ_{i=0..s} C(t, i)`.
pub fn defect_set_count(t: usize, s: usize) -> u128 {
    (0..=s as u64)
        .map(|i| binomial_u128(t as u64, i).unwrap_or(u128::MAX))
        .fold(0u128, u128::saturating_add)
}

/// Every subset of `0..t` with at most `s` members, by size and then lexicographically.
pub fn defect_sets(t: usize, s: usize) -> Result<Vec<Vec<usize>>> {
    let count = defect_set_count(t, s);
    if count > ENUMERATION_LIMIT {
        return Err(Error::EnumerationGuard(format!(
            "{count} defect sets for t = {t}, s = {s} exceed the limit of {ENUMERATION_LIMIT}"
        )));
    }
    Ok((0..=s.min(t))
        .flat_map(|size| (0..t).combinations(size))
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SetOutcome {
    pub defects: Vec<usize>,
    pub answer: Option<Vec<usize>>,
    pub correct: bool,
    pub total: usize,
    pub stages: usize,
    /// Transcript outcomes agree with the hidden set.
    pub replayed: bool,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifySummary {
    pub strategy: String,
    pub t: usize,
    pub s: usize,
    pub sets: usize,
    pub all_correct: bool,
    pub incorrect: usize,
    pub worst_total: usize,
    pub worst_case_set: Vec<usize>,
    /// Number of defect sets per exact total test count.
    pub histogram: BTreeMap<usize, usize>,
    pub max_stages: usize,
    pub declared_stages: usize,
}

#[derive(Clone, Debug)]
pub struct Verification {
    pub summary: VerifySummary,
    pub outcomes: Vec<SetOutcome>,
}

pub fn run_one<S: Strategy + ?Sized>(strategy: &S, defects: &[usize]) -> Result<SetOutcome> {
    let mut oracle = Oracle::new(strategy.population(), strategy.max_defects(), defects)?;
    let result = strategy.identify(&mut oracle);
    let (hidden, transcript) = oracle.into_parts();
    let (answer, error) = match result {
        Ok(a) => (Some(a), None),
        Err(e) => (None, Some(e.to_string())),
    };
    Ok(SetOutcome {
        correct: answer.as_deref() == Some(hidden.as_slice()),
        replayed: transcript.replays_against(&hidden),
        defects: hidden,
        answer,
        total: transcript.total_tests(),
        stages: transcript.stage_count(),
        error,
    })
}

/// Runs `strategy` on every defect set of size `0..=s`, in parallel, and merges deterministically.
pub fn verify_exhaustive<S: Strategy + ?Sized>(strategy: &S, s: usize) -> Result<Verification> {
    if s == 0 {
        return Err(invalid("s must be at least 1"));
    }
    if s > strategy.max_defects() {
        return Err(invalid(format!(
            "strategy {} handles at most {} defects, asked for {s}",
            strategy.name(),
            strategy.max_defects()
        )));
    }
    let t = strategy.population();
    let sets = defect_sets(t, s)?;
    let outcomes = sets
        .par_iter()
        .map(|set| run_one(strategy, set))
        .collect::<Result<Vec<_>>>()?;

    let mut histogram = BTreeMap::new();
    for o in &outcomes {
        *histogram.entry(o.total).or_insert(0) += 1;
    }
    let worst = outcomes
        .iter()
        .max_by(|a, b| a.total.cmp(&b.total).then_with(|| b.defects.cmp(&a.defects)))
        .expect("the empty set is always enumerated");
    let incorrect = outcomes.iter().filter(|o| !o.correct).count();
    let summary = VerifySummary {
        strategy: strategy.name().to_string(),
        t,
        s,
        sets: outcomes.len(),
        all_correct: incorrect == 0,
        incorrect,
        worst_total: worst.total,
        worst_case_set: worst.defects.clone(),
        histogram,
        max_stages: outcomes.iter().map(|o| o.stages).max().unwrap_or(0),
        declared_stages: strategy.max_stages(),
    };
    Ok(Verification { summary, outcomes })
}
