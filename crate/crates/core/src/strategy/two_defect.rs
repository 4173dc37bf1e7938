//! Four-stage search for at most two defects over a concatenated code.
//!
//! The first-stage code stacks `n_hat` layers. Each layer holds the inner
//! constant-weight word (length `n_prime`, weight `inner_weight`) indexed by
//! one symbol of the sample's outer `q`-ary word. With layer weights
//! `m_j = |r_j|` and `k = inner_weight`:
//!
//! * `r = 0` means no defect; `m_j = k` everywhere means one defect, read off `r`.
//! * Otherwise some layer has `m_i > k`. The two defects carry distinct symbols
//!   there, so coloring samples by that symbol is good. Stage 2 tests the `q`
//!   color classes and exactly two come back positive.
//! * Stage 3 locates the defect `v` among the consistent samples of the lower
//!   positive class. There are at most `Π C(m_j, k)` of them.
//! * Stage 4 locates its partner among the samples `u` of the other class with
//!   `x(v) ∨ x(u) = r`. There are at most `Π C(k, 2k - m_j)` of them.
//!
//! Stages 3 and 4 use rank-bit pools, `⌈log₂ m⌉` tests for `m` candidates.

use std::collections::HashMap;
use std::ops::RangeInclusive;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use super::{decode_rank, rank_bit_pools, Strategy};
use crate::binomial::{binomial, binomial_u128, ceil_log2, ceil_log2_big};
use crate::bits::BitVector;
use crate::codes::{concatenate, BinaryCode, ConstantWeightCode, OutcomeVector, QaryCode};
use crate::error::{invalid, Error, Result};
use crate::oracle::{Oracle, Pool};

/// Default upper end of the inner-length search.
pub const DEFAULT_N_PRIME_MAX: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct S2Params {
    pub q: usize,
    pub n_hat: usize,
    pub n_prime: usize,
    pub inner_weight: usize,
    pub t: usize,
}

impl S2Params {
    pub fn new(q: usize, n_hat: usize, n_prime: usize, inner_weight: usize, t: usize) -> Result<Self> {
        let p = Self {
            q,
            n_hat,
            n_prime,
            inner_weight,
            t,
        };
        p.validate()?;
        Ok(p)
    }

    /// Parameters with the shortest outer length that fits `t` samples.
    pub fn shortest(q: usize, n_prime: usize, inner_weight: usize, t: usize) -> Result<Self> {
        if q < 2 || t == 0 {
            return Err(invalid("need q >= 2 and t >= 1"));
        }
        Self::new(q, outer_length(q, t), n_prime, inner_weight, t)
    }

    pub fn validate(&self) -> Result<()> {
        if self.inner_weight == 0 || self.inner_weight >= self.n_prime {
            return Err(invalid(format!(
                "inner weight {} must lie strictly between 0 and {}",
                self.inner_weight, self.n_prime
            )));
        }
        if self.q < 2 {
            return Err(invalid("q must be at least 2"));
        }
        if self.n_hat == 0 || self.t == 0 {
            return Err(invalid("n_hat and t must be positive"));
        }
        let words = binomial_u128(self.n_prime as u64, self.inner_weight as u64).unwrap_or(u128::MAX);
        if self.q as u128 > words {
            return Err(invalid(format!(
                "q = {} exceeds C({}, {}) = {words}",
                self.q, self.n_prime, self.inner_weight
            )));
        }
        if !pow_reaches(self.q, self.n_hat, self.t) {
            return Err(invalid(format!(
                "{}^{} < t = {}",
                self.q, self.n_hat, self.t
            )));
        }
        Ok(())
    }

    pub fn n_rows(&self) -> usize {
        self.n_hat * self.n_prime
    }

    pub fn relative_weight(&self) -> f64 {
        self.inner_weight as f64 / self.n_prime as f64
    }
}

/// `q^n >= t`, without overflow.
fn pow_reaches(q: usize, n: usize, t: usize) -> bool {
    let mut acc: u128 = 1;
    for _ in 0..n {
        acc = acc.saturating_mul(q as u128);
        if acc >= t as u128 {
            return true;
        }
    }
    acc >= t as u128
}

/// `⌈log_q t⌉`, at least 1.
fn outer_length(q: usize, t: usize) -> usize {
    (1..).find(|&n| pow_reaches(q, n, t)).expect("q >= 2 reaches any t")
}

/// Smallest `q >= 2` with `q^n >= t`.
fn ceil_root(t: usize, n: usize) -> usize {
    let guess = (t as f64).powf(1.0 / n as f64).floor() as usize;
    let mut q = guess.saturating_sub(1).max(2);
    while !pow_reaches(q, n, t) {
        q += 1;
    }
    q
}

/// Per-stage terms of [`worst_case_bound`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BoundBreakdown {
    pub stage1: u64,
    pub stage2: u64,
    /// Worst `⌈log₂ Π C(m_j,k)⌉ + ⌈log₂ Π C(k,2k-m_j)⌉` over layer-weight profiles.
    pub stages34: u64,
}

impl BoundBreakdown {
    pub fn total(&self) -> u64 {
        self.stage1 + self.stage2 + self.stages34
    }
}

pub fn worst_case_bound(p: &S2Params) -> u64 {
    bound_breakdown(p).total()
}

pub fn bound_breakdown(p: &S2Params) -> BoundBreakdown {
    BoundBreakdown {
        stage1: p.n_rows() as u64,
        stage2: p.q as u64,
        stages34: worst_profile_term(p.n_prime, p.inner_weight, p.n_hat),
    }
}

/// Maximum over all profiles `(m_1..m_{n_hat})`, `m_j ∈ [k, min(2k, n_prime)]`, of
/// `⌈log₂ Π C(m_j,k)⌉ + ⌈log₂ Π C(k,2k-m_j)⌉`.
///
/// The ceilings do not split across layers, so the layer-by-layer pass keeps
/// the whole Pareto frontier of `(Π C(m_j,k), Π C(k,2k-m_j))` pairs rather than
/// a single best profile. Both ceilings are monotone, so the maximum sits on
/// that frontier.
pub fn worst_profile_term(n_prime: usize, k: usize, n_hat: usize) -> u64 {
    let levels = pareto(
        (k..=(2 * k).min(n_prime))
            .map(|m| layer_factors(k, m))
            .collect(),
    );
    let mut front = vec![(BigUint::one(), BigUint::one())];
    for _ in 0..n_hat {
        let mut next = Vec::with_capacity(front.len() * levels.len());
        for (a, b) in &front {
            for (x, y) in &levels {
                next.push((a * x, b * y));
            }
        }
        front = pareto(next);
    }
    front
        .iter()
        .map(|(a, b)| ceil_log2_big(a) + ceil_log2_big(b))
        .max()
        .unwrap_or(0)
}

/// `(C(m,k), C(k,2k-m))` for a layer of weight `m`.
fn layer_factors(k: usize, m: usize) -> (BigUint, BigUint) {
    let partner = match (2 * k).checked_sub(m) {
        Some(free) => binomial(k as u64, free as u64),
        None => BigUint::ZERO,
    };
    (binomial(m as u64, k as u64), partner)
}

fn pareto(mut points: Vec<(BigUint, BigUint)>) -> Vec<(BigUint, BigUint)> {
    points.sort_unstable_by(|x, y| y.cmp(x));
    let mut kept: Vec<(BigUint, BigUint)> = Vec::new();
    for p in points {
        if kept.last().is_none_or(|last| p.1 > last.1) {
            kept.push(p);
        }
    }
    kept
}

/// `Π C(m_j, k)`: how many samples can be consistent with `r` inside one color class.
pub fn consistent_count_bound(inner_weight: usize, layer_weights: &[usize]) -> BigUint {
    layer_weights
        .iter()
        .map(|&m| layer_factors(inner_weight, m).0)
        .product()
}

/// `Π C(k, 2k - m_j)`: how many partners can complete a located defect to `r`.
pub fn partner_count_bound(inner_weight: usize, layer_weights: &[usize]) -> BigUint {
    layer_weights
        .iter()
        .map(|&m| layer_factors(inner_weight, m).1)
        .product()
}

/// Restricts the optimizer's search. Ranges are intersected with the valid domain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchSpace {
    pub n_prime: RangeInclusive<usize>,
    pub inner_weight: Option<RangeInclusive<usize>>,
    pub q: Option<RangeInclusive<usize>>,
}

impl Default for SearchSpace {
    fn default() -> Self {
        Self {
            n_prime: 2..=DEFAULT_N_PRIME_MAX,
            inner_weight: None,
            q: None,
        }
    }
}

pub fn select_params(t: usize) -> Result<S2Params> {
    select_params_in(t, &SearchSpace::default())
}

/// Parameters minimizing [`worst_case_bound`]; ties go to smaller `n_prime`, then
/// smaller `q`, then smaller `inner_weight`.
///
/// For fixed `(n_prime, inner_weight)` the bound grows with `q` at fixed outer
/// length, so only the smallest `q` of each outer length is evaluated.
pub fn select_params_in(t: usize, space: &SearchSpace) -> Result<S2Params> {
    if t < 2 {
        return Err(invalid(format!("t must be at least 2, got {t}")));
    }
    let max_len = ceil_log2(t) as usize;
    let mut memo: HashMap<(usize, usize, usize), u64> = HashMap::new();
    let mut best: Option<((u64, usize, usize, usize), S2Params)> = None;
    for n_prime in space.n_prime.clone().filter(|&n| n >= 2) {
        let weights = match &space.inner_weight {
            Some(r) => (*r.start()).max(1)..=(*r.end()).min(n_prime - 1),
            None => 1..=n_prime - 1,
        };
        for k in weights {
            let words = binomial_u128(n_prime as u64, k as u64).unwrap_or(u128::MAX);
            let q_lo = space.q.as_ref().map_or(2, |r| *r.start()).max(2);
            let q_hi = space
                .q
                .as_ref()
                .map_or(words, |r| (*r.end() as u128).min(words));
            if q_lo as u128 > q_hi {
                continue;
            }
            let mut qs: Vec<usize> = std::iter::once(q_lo)
                .chain((1..=max_len).map(|n| ceil_root(t, n)))
                .filter(|&q| q >= q_lo && q as u128 <= q_hi)
                .collect();
            qs.sort_unstable();
            qs.dedup();
            for q in qs {
                let n_hat = outer_length(q, t);
                let partial = (n_hat * n_prime + q) as u64;
                if best.as_ref().is_some_and(|(key, _)| partial > key.0) {
                    continue;
                }
                let term = *memo
                    .entry((n_prime, k, n_hat))
                    .or_insert_with(|| worst_profile_term(n_prime, k, n_hat));
                let key = (partial + term, n_prime, q, k);
                if best.as_ref().is_none_or(|(b, _)| key < *b) {
                    best = Some((key, S2Params::new(q, n_hat, n_prime, k, t)?));
                }
            }
        }
    }
    best.map(|(_, p)| p)
        .ok_or_else(|| invalid(format!("no admissible parameters for t = {t} in {space:?}")))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct S2RunReport {
    pub answer: Vec<usize>,
    /// `N_i` for each stage that ran.
    pub tests_per_stage: Vec<usize>,
    pub total: usize,
    /// `m_j = |r_j|` per layer.
    pub layer_weights: Vec<usize>,
    /// Layer whose symbols colored the samples at stage 2.
    pub split_layer: Option<usize>,
    /// Consistent samples in the class searched at stage 3.
    pub stage3_candidates: usize,
    /// Partners of the located defect searched at stage 4.
    pub stage4_candidates: usize,
}

/// The concatenated first-stage code plus the lookups the strategy needs.
#[derive(Clone, Debug)]
pub struct TwoDefectStrategy {
    params: S2Params,
    outer: QaryCode,
    code: BinaryCode,
    inner_index: HashMap<BitVector, usize>,
    rows: Vec<Pool>,
}

impl TwoDefectStrategy {
    pub fn new(params: S2Params) -> Result<Self> {
        params.validate()?;
        let outer = QaryCode::lexicographic_prefix(params.q, params.n_hat, params.t)?;
        let inner = ConstantWeightCode::lexicographic_prefix(params.n_prime, params.inner_weight, params.q)?;
        let code = concatenate(&outer, &inner)?;
        let inner_index = inner
            .words()
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), i))
            .collect();
        let rows = code.row_members().into_iter().map(Pool::new).collect();
        Ok(Self {
            params,
            outer,
            code,
            inner_index,
            rows,
        })
    }

    pub fn params(&self) -> &S2Params {
        &self.params
    }

    pub fn code(&self) -> &BinaryCode {
        &self.code
    }

    /// Outer symbol of sample `j` in layer `layer`.
    pub fn symbol(&self, j: usize, layer: usize) -> usize {
        self.outer.symbol(j, layer)
    }

    pub fn run(&self, oracle: &mut Oracle) -> Result<S2RunReport> {
        let p = &self.params;
        if oracle.population() != p.t {
            return Err(invalid(format!(
                "oracle population {} differs from t = {}",
                oracle.population(),
                p.t
            )));
        }
        let k = p.inner_weight;
        let mut report = S2RunReport {
            answer: Vec::new(),
            tests_per_stage: Vec::new(),
            total: 0,
            layer_weights: Vec::new(),
            split_layer: None,
            stage3_candidates: 0,
            stage4_candidates: 0,
        };

        // Stage 1
        let outcomes = run_batch(oracle, self.rows.clone(), &mut report)?;
        let r = OutcomeVector::new(BitVector::from_bools(&outcomes)).with_layers(p.n_prime)?;
        report.layer_weights = r.layer_weights()?;
        if r.is_zero() {
            oracle.declare(&[]);
            return Ok(report);
        }
        if report.layer_weights.iter().any(|&m| m < k) {
            return Err(Error::Inconsistent(format!(
                "layer weights {:?} fall below the inner weight {k}",
                report.layer_weights
            )));
        }
        let Some(split) = report.layer_weights.iter().position(|&m| m > k) else {
            let single = self.decode_single(&r)?;
            oracle.declare(&[single]);
            report.answer = vec![single];
            return Ok(report);
        };
        report.split_layer = Some(split);

        // Stage 2
        let mut classes = vec![Vec::new(); p.q];
        for j in 0..p.t {
            classes[self.outer.symbol(j, split)].push(j);
        }
        let colors: Vec<usize> = (0..p.q).filter(|&a| !classes[a].is_empty()).collect();
        let pools = colors
            .iter()
            .map(|&a| Pool::new(classes[a].iter().copied()))
            .collect();
        let outcomes = run_batch(oracle, pools, &mut report)?;
        let positive: Vec<usize> = colors
            .iter()
            .zip(&outcomes)
            .filter(|(_, &o)| o)
            .map(|(&a, _)| a)
            .collect();
        match positive.len() {
            2 => {}
            n if n > 2 => {
                return Err(Error::Contract(format!(
                    "{n} positive color classes, at most 2 defects allowed"
                )))
            }
            n => {
                return Err(Error::Inconsistent(format!(
                    "layer {split} is heavy but only {n} color class tested positive"
                )))
            }
        }

        // Stage 3
        let searched = consistent_members(&self.code, &r, &classes[positive[0]]);
        report.stage3_candidates = searched.len();
        let v = locate(oracle, &searched, &mut report)?;

        // Stage 4
        let partners = consistent_partners(&self.code, &r, v, &classes[positive[1]]);
        report.stage4_candidates = partners.len();
        let u = locate(oracle, &partners, &mut report)?;

        report.answer = vec![v.min(u), v.max(u)];
        oracle.declare(&report.answer);
        Ok(report)
    }

    /// Reads the unique sample whose column equals `r` layer by layer.
    fn decode_single(&self, r: &OutcomeVector) -> Result<usize> {
        let p = &self.params;
        let mut index = 0usize;
        for layer in 0..p.n_hat {
            let word = r.layer(layer)?;
            let symbol = *self.inner_index.get(&word).ok_or_else(|| {
                Error::Inconsistent(format!("layer {layer} pattern {word} is not an inner codeword"))
            })?;
            index = index * p.q + symbol;
        }
        if index >= p.t || &self.code.column(index) != r.bits() {
            return Err(Error::Inconsistent(format!(
                "decoded outer word {index} is not a sample"
            )));
        }
        Ok(index)
    }
}

fn run_batch(oracle: &mut Oracle, pools: Vec<Pool>, report: &mut S2RunReport) -> Result<Vec<bool>> {
    report.tests_per_stage.push(pools.len());
    report.total += pools.len();
    oracle.run_stage(pools)
}

/// One rank-bit stage over `candidates`; skipped when a single candidate remains.
fn locate(oracle: &mut Oracle, candidates: &[usize], report: &mut S2RunReport) -> Result<usize> {
    let pools = rank_bit_pools(candidates);
    let outcomes = if pools.is_empty() {
        Vec::new()
    } else {
        run_batch(oracle, pools, report)?
    };
    decode_rank(candidates, &outcomes)
}

/// Members whose column has no one outside `r`, ascending.
pub fn consistent_members(code: &BinaryCode, r: &OutcomeVector, members: &[usize]) -> Vec<usize> {
    let mut out: Vec<usize> = members
        .iter()
        .copied()
        .filter(|&j| code.column_covered_by(j, r))
        .collect();
    out.sort_unstable();
    out
}

/// Members `u ≠ v` with `x(u) ≤ r` and `x(v) ∨ x(u) = r`, ascending.
pub fn consistent_partners(
    code: &BinaryCode,
    r: &OutcomeVector,
    v: usize,
    members: &[usize],
) -> Vec<usize> {
    let target = r.bits().words();
    let base = code.column_words(v);
    let mut out: Vec<usize> = members
        .iter()
        .copied()
        .filter(|&u| {
            u != v
                && code.column_covered_by(u, r)
                && base
                    .iter()
                    .zip(code.column_words(u))
                    .map(|(a, b)| a | b)
                    .eq(target.iter().copied())
        })
        .collect();
    out.sort_unstable();
    out
}

pub fn run_s2(params: &S2Params, oracle: &mut Oracle) -> Result<S2RunReport> {
    TwoDefectStrategy::new(*params)?.run(oracle)
}

impl Strategy for TwoDefectStrategy {
    fn name(&self) -> &'static str {
        "s2"
    }

    fn population(&self) -> usize {
        self.params.t
    }

    fn max_defects(&self) -> usize {
        2
    }

    fn max_stages(&self) -> usize {
        4
    }

    fn identify(&self, oracle: &mut Oracle) -> Result<Vec<usize>> {
        self.run(oracle).map(|r| r.answer)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use itertools::Itertools;

    fn p0() -> S2Params {
        S2Params::new(6, 2, 4, 2, 36).unwrap()
    }

    /// Enumerates every profile in `[k, min(2k, n')]^n_hat` directly.
    fn brute_profile_term(n_prime: usize, k: usize, n_hat: usize) -> u64 {
        let levels: Vec<usize> = (k..=(2 * k).min(n_prime)).collect();
        (0..n_hat)
            .map(|_| levels.iter().copied())
            .multi_cartesian_product()
            .map(|profile| {
                ceil_log2_big(&consistent_count_bound(k, &profile))
                    + ceil_log2_big(&partner_count_bound(k, &profile))
            })
            .max()
            .unwrap()
    }

    #[test]
    fn p0_bound_is_twenty() {
        let b = bound_breakdown(&p0());
        assert_eq!((b.stage1, b.stage2, b.stages34), (8, 6, 6));
        assert_eq!(worst_case_bound(&p0()), 20);
    }

    #[test]
    fn frontier_matches_profile_enumeration() {
        for n_prime in 2..=9 {
            for k in 1..n_prime {
                for n_hat in 1..=4 {
                    assert_eq!(
                        worst_profile_term(n_prime, k, n_hat),
                        brute_profile_term(n_prime, k, n_hat),
                        "n'={n_prime} k={k} n_hat={n_hat}"
                    );
                }
            }
        }
    }

    #[test]
    fn single_layer_degenerate_bound() {
        // n_hat = 1, q = t: N' + t + one layer's worst term
        let p = S2Params::new(6, 1, 4, 2, 6).unwrap();
        assert_eq!(worst_case_bound(&p), 4 + 6 + worst_profile_term(4, 2, 1));
        // m = 3: ⌈log₂3⌉ + ⌈log₂2⌉ = 3; m = 4: ⌈log₂6⌉ + 0 = 3
        assert_eq!(worst_profile_term(4, 2, 1), 3);
    }

    #[test]
    fn uniform_profile_contributes_nothing() {
        assert_eq!(consistent_count_bound(2, &[2, 2]), BigUint::one());
        assert_eq!(partner_count_bound(2, &[2, 2]), BigUint::one());
        assert_eq!(partner_count_bound(2, &[5, 2]), BigUint::ZERO);
    }

    #[test]
    fn params_validation() {
        assert!(S2Params::new(7, 2, 4, 2, 36).is_err());
        assert!(S2Params::new(6, 1, 4, 2, 36).is_err());
        assert!(S2Params::new(6, 2, 4, 4, 36).is_err());
        assert!(S2Params::new(6, 2, 4, 0, 36).is_err());
        assert_eq!(S2Params::shortest(6, 4, 2, 36).unwrap(), p0());
        assert_eq!(S2Params::shortest(6, 4, 2, 37).unwrap().n_hat, 3);
    }

    #[test]
    fn roots_and_lengths() {
        assert_eq!(ceil_root(36, 2), 6);
        assert_eq!(ceil_root(37, 2), 7);
        assert_eq!(ceil_root(1 << 20, 4), 32);
        assert_eq!(ceil_root(1 << 20, 20), 2);
        assert_eq!(ceil_root(1 << 20, 30), 2);
        assert_eq!(outer_length(2, 1 << 20), 20);
        assert_eq!(outer_length(1024, 1 << 20), 2);
        assert_eq!(outer_length(5, 2), 1);
    }

    #[test]
    fn restricted_search_recovers_p0() {
        let space = SearchSpace {
            n_prime: 4..=4,
            inner_weight: Some(2..=2),
            q: Some(6..=6),
        };
        assert_eq!(select_params_in(36, &space).unwrap(), p0());
    }

    /// Scans every q literally, with no per-length shortcut.
    fn brute_select(t: usize, n_prime_max: usize) -> (u64, usize, usize, usize) {
        let mut best = None;
        for n_prime in 2..=n_prime_max {
            for k in 1..n_prime {
                let words = binomial_u128(n_prime as u64, k as u64).unwrap() as usize;
                for q in 2..=words {
                    let p = S2Params::shortest(q, n_prime, k, t).unwrap();
                    let key = (worst_case_bound(&p), n_prime, q, k);
                    if best.is_none_or(|b| key < b) {
                        best = Some(key);
                    }
                }
            }
        }
        best.unwrap()
    }

    #[test]
    fn optimizer_matches_literal_scan() {
        for t in [2, 3, 5, 17, 36, 100, 400, 1000] {
            let space = SearchSpace {
                n_prime: 2..=7,
                ..SearchSpace::default()
            };
            let p = select_params_in(t, &space).unwrap();
            let got = (worst_case_bound(&p), p.n_prime, p.q, p.inner_weight);
            assert_eq!(got, brute_select(t, 7), "t={t}");
        }
    }

    #[test]
    fn smallest_instance() {
        let p = select_params(2).unwrap();
        assert!(pow_reaches(p.q, p.n_hat, 2));
        assert!(select_params(1).is_err());
    }

    #[test]
    fn p0_runs() {
        let s = TwoDefectStrategy::new(p0()).unwrap();
        let mut oracle = Oracle::new(36, 2, &[]).unwrap();
        let report = s.run(&mut oracle).unwrap();
        assert!(report.answer.is_empty());
        assert_eq!(report.tests_per_stage, [8]);

        // sample 7 (0-based 6) has outer word (1, 0): 1010 then 1100
        let mut oracle = Oracle::new(36, 2, &[6]).unwrap();
        let report = s.run(&mut oracle).unwrap();
        assert_eq!(report.answer, [6]);
        assert_eq!(report.tests_per_stage, [8]);
        assert_eq!(report.layer_weights, [2, 2]);
        assert_eq!(s.code().column(6).to_bitstring(), "10101100");

        let mut oracle = Oracle::new(36, 2, &[0, 35]).unwrap();
        let report = s.run(&mut oracle).unwrap();
        assert_eq!(report.answer, [0, 35]);
        assert!(report.total <= 20);
        assert!(oracle.transcript().stage_count() <= 4);
    }

    #[test]
    fn partners_of_a_lone_defect_are_empty() {
        let s = TwoDefectStrategy::new(p0()).unwrap();
        let r = s.code().outcome_vector(&[9]).unwrap();
        let everyone: Vec<usize> = (0..36).collect();
        assert!(consistent_partners(s.code(), &r, 9, &everyone).is_empty());
    }

    #[test]
    fn three_positive_classes_violate_the_contract() {
        let s = TwoDefectStrategy::new(p0()).unwrap();
        // oracle admits 3 defects; outer words (0,0), (1,1), (2,2) light 3 classes in layer 0
        let mut oracle = Oracle::new(36, 3, &[0, 7, 14]).unwrap();
        assert!(matches!(s.run(&mut oracle), Err(Error::Contract(_))));
    }
}
