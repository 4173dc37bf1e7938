//! Four-stage hypergraph search for up to `s` defects over an arbitrary first-stage code.
//!
//! 1. Run every row of the code and read the outcome vector `r`.
//! 2. Color the consistency hypergraph of `r` and test each color class.
//!    Each positive class holds exactly one defect.
//! 3. Locate the defect `v` of the lowest positive class with rank-bit pools.
//! 4. For each edge through `v` that otherwise lies in the other positive
//!    classes, test its complement. The defect set is the intersection of the
//!    edges whose complement is negative.
//!
//! With [`GenericStrategyConfig::identify_all_at_stage3`] every positive class
//! is searched at stage 3 and the fourth stage is dropped.

use serde::Serialize;

use super::{decode_rank, rank_bit_pools, Strategy};
use crate::bits::BitVector;
use crate::codes::{BinaryCode, OutcomeVector};
use crate::error::{invalid, Error, Result};
use crate::hypergraph::ConsistencyHypergraph;
use crate::oracle::{Oracle, Pool};

#[derive(Clone, Debug)]
pub struct GenericStrategyConfig {
    pub code: BinaryCode,
    pub s: usize,
    pub identify_all_at_stage3: bool,
}

impl GenericStrategyConfig {
    pub fn new(code: BinaryCode, s: usize) -> Result<Self> {
        if s == 0 {
            return Err(invalid("s must be at least 1"));
        }
        Ok(Self {
            code,
            s,
            identify_all_at_stage3: false,
        })
    }

    pub fn identify_all_at_stage3(mut self, on: bool) -> Self {
        self.identify_all_at_stage3 = on;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GenericRunReport {
    pub answer: Vec<usize>,
    pub tests_per_stage: Vec<usize>,
    pub total: usize,
    pub edges: usize,
    pub colors: usize,
    /// Size of the class searched at stage 3 (the first positive class).
    pub searched_class_size: usize,
    /// Candidate edges tested at stage 4.
    pub stage4_candidates: usize,
    /// Degree of the stage-3 vertex in the consistency hypergraph.
    pub found_vertex_degree: usize,
}

pub fn run_generic(config: &GenericStrategyConfig, oracle: &mut Oracle) -> Result<GenericRunReport> {
    let code = &config.code;
    let t = code.n_cols();
    if oracle.population() != t {
        return Err(invalid(format!(
            "oracle population {} differs from code size {t}",
            oracle.population()
        )));
    }
    let mut report = GenericRunReport {
        answer: Vec::new(),
        tests_per_stage: Vec::new(),
        total: 0,
        edges: 0,
        colors: 0,
        searched_class_size: 0,
        stage4_candidates: 0,
        found_vertex_degree: 0,
    };
    let stage = |oracle: &mut Oracle, pools: Vec<Pool>, report: &mut GenericRunReport| {
        report.tests_per_stage.push(pools.len());
        report.total += pools.len();
        oracle.run_stage(pools)
    };

    // Stage 1
    let rows: Vec<Pool> = code.row_members().into_iter().map(Pool::new).collect();
    let outcomes = stage(oracle, rows, &mut report)?;
    let r = OutcomeVector::new(BitVector::from_bools(&outcomes));
    if r.is_zero() {
        oracle.declare(&[]);
        return Ok(report);
    }
    let h = ConsistencyHypergraph::build(code, &r, config.s)?;
    let coloring = h.greedy_coloring();
    report.edges = h.edges().len();
    report.colors = coloring.k();

    // Stage 2
    let classes: Vec<Vec<usize>> = coloring.classes();
    let outcomes = stage(
        oracle,
        classes.iter().map(|c| Pool::new(c.iter().copied())).collect(),
        &mut report,
    )?;
    let positive: Vec<usize> = (0..classes.len()).filter(|&c| outcomes[c]).collect();
    if positive.is_empty() {
        return Err(Error::Inconsistent(
            "nonzero outcome vector but no positive color class".into(),
        ));
    }
    if positive.len() > config.s {
        return Err(Error::Contract(format!(
            "{} positive classes exceed s = {}",
            positive.len(),
            config.s
        )));
    }

    // Stage 3
    let searched: Vec<&[usize]> = if config.identify_all_at_stage3 {
        positive.iter().map(|&c| classes[c].as_slice()).collect()
    } else {
        vec![classes[positive[0]].as_slice()]
    };
    report.searched_class_size = searched[0].len();
    let per_class: Vec<Vec<Pool>> = searched.iter().map(|c| rank_bit_pools(c)).collect();
    let batch: Vec<Pool> = per_class.iter().flatten().cloned().collect();
    let outcomes = if batch.is_empty() {
        Vec::new()
    } else {
        stage(oracle, batch, &mut report)?
    };
    let mut found = Vec::with_capacity(searched.len());
    let mut offset = 0;
    for (class, pools) in searched.iter().zip(&per_class) {
        found.push(decode_rank(class, &outcomes[offset..offset + pools.len()])?);
        offset += pools.len();
    }
    if config.identify_all_at_stage3 {
        found.sort_unstable();
        oracle.declare(&found);
        report.answer = found;
        return Ok(report);
    }
    let v = found[0];
    report.found_vertex_degree = h.degree(v);

    // Stage 4
    let mut allowed = vec![false; t];
    allowed[v] = true;
    for &c in &positive[1..] {
        for &u in &classes[c] {
            allowed[u] = true;
        }
    }
    let candidates: Vec<&Vec<usize>> = h
        .edges()
        .iter()
        .filter(|e| e.binary_search(&v).is_ok() && e.iter().all(|&u| allowed[u]))
        .collect();
    report.stage4_candidates = candidates.len();
    if candidates.is_empty() {
        return Err(Error::Inconsistent(format!(
            "no consistent edge through the located sample {v}"
        )));
    }
    let complements: Vec<Pool> = candidates
        .iter()
        .map(|e| Pool::new((0..t).filter(|u| e.binary_search(u).is_err())))
        .collect();
    let outcomes = stage(oracle, complements, &mut report)?;
    let mut answer: Option<Vec<usize>> = None;
    for (e, &positive) in candidates.iter().zip(&outcomes) {
        if positive {
            continue;
        }
        answer = Some(match answer {
            None => e.to_vec(),
            Some(acc) => acc.into_iter().filter(|u| e.binary_search(u).is_ok()).collect(),
        });
    }
    let answer = answer.ok_or_else(|| {
        Error::Inconsistent("every candidate edge has a positive complement".into())
    })?;
    oracle.declare(&answer);
    report.answer = answer;
    Ok(report)
}

impl Strategy for GenericStrategyConfig {
    fn name(&self) -> &'static str {
        "generic"
    }

    fn population(&self) -> usize {
        self.code.n_cols()
    }

    fn max_defects(&self) -> usize {
        self.s
    }

    fn max_stages(&self) -> usize {
        if self.identify_all_at_stage3 {
            3
        } else {
            4
        }
    }

    fn identify(&self, oracle: &mut Oracle) -> Result<Vec<usize>> {
        run_generic(self, oracle).map(|r| r.answer)
    }
}
