//! Multistage search strategies.

pub mod generic;
pub mod two_defect;

use crate::binomial::ceil_log2;
use crate::error::{Error, Result};
use crate::oracle::{Oracle, Pool};

/// A multistage strategy that can be driven against an [`Oracle`].
pub trait Strategy: Sync {
    fn name(&self) -> &'static str;

    /// Population size `t` the strategy was built for.
    fn population(&self) -> usize;

    /// Largest defect set the strategy is guaranteed to identify.
    fn max_defects(&self) -> usize;

    /// Declared number of stages `p`.
    fn max_stages(&self) -> usize;

    /// Runs to completion and returns the identified defect set, sorted.
    fn identify(&self, oracle: &mut Oracle) -> Result<Vec<usize>>;
}

/// `⌈log₂ m⌉` pools over `candidates`; pool `b` holds the candidates whose rank has bit `b` set.
///
/// If exactly one candidate is defective, the outcomes spell out its rank.
pub fn rank_bit_pools(candidates: &[usize]) -> Vec<Pool> {
    (0..ceil_log2(candidates.len()))
        .map(|b| {
            Pool::new(
                candidates
                    .iter()
                    .enumerate()
                    .filter(|(rank, _)| rank >> b & 1 == 1)
                    .map(|(_, &v)| v),
            )
        })
        .collect()
}

/// Inverse of [`rank_bit_pools`].
pub fn decode_rank(candidates: &[usize], outcomes: &[bool]) -> Result<usize> {
    let rank = outcomes
        .iter()
        .enumerate()
        .filter(|(_, &o)| o)
        .fold(0usize, |acc, (b, _)| acc | 1 << b);
    candidates.get(rank).copied().ok_or_else(|| {
        Error::Inconsistent(format!(
            "rank {rank} outside a candidate list of length {}",
            candidates.len()
        ))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_bits_identify_every_candidate() {
        for m in 1..=17usize {
            let candidates: Vec<usize> = (0..m).map(|i| 3 * i + 1).collect();
            let pools = rank_bit_pools(&candidates);
            assert_eq!(pools.len() as u32, ceil_log2(m));
            for &d in &candidates {
                let outcomes: Vec<bool> = pools.iter().map(|p| p.intersects(&[d])).collect();
                assert_eq!(decode_rank(&candidates, &outcomes).unwrap(), d);
            }
        }
    }

    #[test]
    fn out_of_range_rank_is_inconsistent() {
        assert!(matches!(
            decode_rank(&[4, 5, 6], &[true, true]),
            Err(Error::Inconsistent(_))
        ));
    }
}
