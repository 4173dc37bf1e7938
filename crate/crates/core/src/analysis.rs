//! Reference test counts for comparison, and the binary entropy function.
//!
//! All bounds are main terms only; their `(1 + o(1))` factors are not modeled.

use std::f64::consts::{E, LOG2_E};

use serde::Serialize;

use crate::error::{invalid, Result};

/// `h(x) = -x log₂ x - (1-x) log₂(1-x)` on the open unit interval.
pub fn entropy(x: f64) -> Result<f64> {
    if !(x > 0.0 && x < 1.0) {
        return Err(invalid(format!("entropy needs 0 < x < 1, got {x}")));
    }
    Ok(-x * x.log2() - (1.0 - x) * (1.0 - x).log2())
}

/// Coefficient of `log₂ t` in the non-adaptive lower bound, `s² / (2 log₂(e(s+1)/2))`.
pub fn nonadaptive_coefficient(s: usize) -> f64 {
    let s = s as f64;
    s * s / (2.0 * (E * (s + 1.0) / 2.0).log2())
}

/// Coefficient of `log₂ t` in the two-stage upper bound, `s e / log₂ e`.
/// Derived for `s → ∞`; at small `s` it is an extrapolation.
pub fn two_stage_coefficient(s: usize) -> f64 {
    s as f64 * E / LOG2_E
}

/// Coefficient of the known two-stage strategy for two defects.
pub const DAMASCHKE_COEFFICIENT: f64 = 2.5;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub t: usize,
    pub s: usize,
    pub log2_t: f64,
    /// Information lower bound `s log₂ t`, attained by fully adaptive search.
    pub info_bound: f64,
    /// Non-adaptive lower bound.
    pub dr82_nonadaptive: f64,
    /// Two-stage upper bound (asymptotic in `s`).
    pub two_stage: f64,
    /// `2.5 log₂ t`, reported for `s = 2` only.
    pub damaschke: Option<f64>,
}

pub fn reference_bounds(t: usize, s: usize) -> Result<BoundReport> {
    if t < 2 || s == 0 {
        return Err(invalid(format!("need t >= 2 and s >= 1, got t = {t}, s = {s}")));
    }
    let log2_t = (t as f64).log2();
    Ok(BoundReport {
        t,
        s,
        log2_t,
        info_bound: s as f64 * log2_t,
        dr82_nonadaptive: nonadaptive_coefficient(s) * log2_t,
        two_stage: two_stage_coefficient(s) * log2_t,
        damaschke: (s == 2).then_some(DAMASCHKE_COEFFICIENT * log2_t),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn entropy_values() {
        assert_eq!(entropy(0.5).unwrap(), 1.0);
        // 0.5 + 0.75 log₂(4/3), evaluated with mpmath at 30 digits
        assert!((entropy(0.25).unwrap() - 0.811_278_124_459_132_9).abs() < 1e-15);
        for x in [0.01, 0.1, 0.3, 0.45] {
            assert!((entropy(x).unwrap() - entropy(1.0 - x).unwrap()).abs() < 1e-15);
        }
        for bad in [0.0, 1.0, -0.1, 1.5, f64::NAN] {
            assert!(entropy(bad).is_err());
        }
    }

    #[test]
    fn coefficients() {
        assert!((nonadaptive_coefficient(2) - 0.986_3).abs() < 1e-4);
        assert!((two_stage_coefficient(2) - 3.768_3).abs() < 1e-4);
    }

    #[test]
    fn reference_values() {
        let r = reference_bounds(1 << 20, 2).unwrap();
        assert_eq!(r.info_bound, 40.0);
        assert_eq!(r.damaschke, Some(50.0));
        assert_eq!(reference_bounds(1 << 20, 3).unwrap().damaschke, None);
        assert!(reference_bounds(1, 2).is_err());
        assert!(reference_bounds(16, 0).is_err());
    }

    #[test]
    fn monotone_in_t() {
        for s in 1..=4 {
            let mut prev = reference_bounds(2, s).unwrap();
            for t in 3..200 {
                let cur = reference_bounds(t, s).unwrap();
                assert!(cur.info_bound > prev.info_bound);
                assert!(cur.dr82_nonadaptive > prev.dr82_nonadaptive);
                assert!(cur.two_stage > prev.two_stage);
                prev = cur;
            }
        }
    }
}
