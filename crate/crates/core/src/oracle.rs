//! Simulated test oracle enforcing the multistage discipline.
//!
//! A strategy sees only [`Oracle::run_stage`]: a whole batch of pools goes in,
//! and one outcome per pool comes back, all computed against the same hidden
//! defect set. Every batch is appended to a [`StageTranscript`].

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// A set of samples tested together. Members are kept sorted and distinct.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Pool {
    members: Vec<usize>,
}

impl Pool {
    pub fn new(members: impl IntoIterator<Item = usize>) -> Self {
        let mut members: Vec<usize> = members.into_iter().collect();
        members.sort_unstable();
        members.dedup();
        Self { members }
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn intersects(&self, set: &[usize]) -> bool {
        set.iter().any(|x| self.members.binary_search(x).is_ok())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StageRecord {
    pub pools: Vec<Pool>,
    pub outcomes: Vec<bool>,
}

/// Everything a run asked and was told, plus the declared answer.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StageTranscript {
    stages: Vec<StageRecord>,
    defects_declared: Option<Vec<usize>>,
}

impl StageTranscript {
    pub fn stages(&self) -> &[StageRecord] {
        &self.stages
    }

    pub fn stage_count(&self) -> usize {
        self.stages.len()
    }

    /// `N_i` for each stage that was run.
    pub fn stage_sizes(&self) -> Vec<usize> {
        self.stages.iter().map(|s| s.pools.len()).collect()
    }

    pub fn total_tests(&self) -> usize {
        self.stages.iter().map(|s| s.pools.len()).sum()
    }

    pub fn defects_declared(&self) -> Option<&[usize]> {
        self.defects_declared.as_deref()
    }

    /// Re-evaluates every recorded pool against `defects` and compares with the recorded outcomes.
    pub fn replays_against(&self, defects: &[usize]) -> bool {
        self.stages.iter().all(|stage| {
            stage
                .pools
                .iter()
                .zip(&stage.outcomes)
                .all(|(pool, &outcome)| pool.intersects(defects) == outcome)
        })
    }

    /// JSON form with samples labelled `1..=t`.
    pub fn to_dump(&self) -> TranscriptDump {
        let one_based = |xs: &[usize]| xs.iter().map(|x| x + 1).collect::<Vec<_>>();
        TranscriptDump {
            stages: self
                .stages
                .iter()
                .map(|s| StageDump {
                    pools: s.pools.iter().map(|p| one_based(p.members())).collect(),
                    outcomes: s.outcomes.clone(),
                })
                .collect(),
            answer: self.defects_declared.as_deref().map(one_based),
        }
    }
}

pub fn total_tests(transcript: &StageTranscript) -> usize {
    transcript.total_tests()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageDump {
    pub pools: Vec<Vec<usize>>,
    pub outcomes: Vec<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranscriptDump {
    pub stages: Vec<StageDump>,
    pub answer: Option<Vec<usize>>,
}

/// Holds the unknown defect set of a single run.
#[derive(Debug)]
pub struct Oracle {
    t: usize,
    s: usize,
    hidden: Vec<usize>,
    defective: Vec<bool>,
    transcript: StageTranscript,
}

impl Oracle {
    pub fn new(t: usize, s: usize, hidden: &[usize]) -> Result<Self> {
        let mut sorted = hidden.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != hidden.len() {
            return Err(invalid("defect set has repeated samples"));
        }
        if let Some(&bad) = sorted.iter().find(|&&j| j >= t) {
            return Err(invalid(format!("defect {bad} out of range for t = {t}")));
        }
        if sorted.len() > s {
            return Err(invalid(format!(
                "{} defects exceed the admissible maximum {s}",
                sorted.len()
            )));
        }
        let mut defective = vec![false; t];
        for &j in &sorted {
            defective[j] = true;
        }
        Ok(Self {
            t,
            s,
            hidden: sorted,
            defective,
            transcript: StageTranscript::default(),
        })
    }

    pub fn population(&self) -> usize {
        self.t
    }

    pub fn max_defects(&self) -> usize {
        self.s
    }

    pub fn transcript(&self) -> &StageTranscript {
        &self.transcript
    }

    /// Tests a whole batch at once and records it as one stage.
    pub fn run_stage(&mut self, pools: Vec<Pool>) -> Result<Vec<bool>> {
        if pools.is_empty() {
            return Err(Error::Contract("a stage must contain at least one pool".into()));
        }
        if let Some(bad) = pools
            .iter()
            .find_map(|p| p.members().last().filter(|&&m| m >= self.t))
        {
            return Err(invalid(format!(
                "pool member {bad} out of range for t = {}",
                self.t
            )));
        }
        let outcomes: Vec<bool> = pools
            .iter()
            .map(|p| p.members().iter().any(|&m| self.defective[m]))
            .collect();
        self.transcript.stages.push(StageRecord {
            pools,
            outcomes: outcomes.clone(),
        });
        Ok(outcomes)
    }

    /// Records the strategy's final answer.
    pub fn declare(&mut self, answer: &[usize]) {
        let mut answer = answer.to_vec();
        answer.sort_unstable();
        self.transcript.defects_declared = Some(answer);
    }

    /// Ends the run and reveals the hidden set alongside the transcript.
    pub fn into_parts(self) -> (Vec<usize>, StageTranscript) {
        (self.hidden, self.transcript)
    }
}
