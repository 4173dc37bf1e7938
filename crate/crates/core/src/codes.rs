//! Binary, q-ary, constant-weight and concatenated codes.
//!
//! A [`BinaryCode`] is an `N × t` matrix whose columns are the samples and
//! whose rows are the pools of one non-adaptive stage. Columns are stored
//! contiguously as packed words, so the outcome vector of a defect set is a
//! word-wise OR over its columns.

use std::collections::HashMap;

use itertools::Itertools;
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::binomial::binomial_u128;
use crate::bits::{words_covered, words_for, BitVector};
use crate::error::{invalid, Error, Result};

/// Binary code with pairwise distinct, nonzero columns.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "CodeJson", into = "CodeJson")]
pub struct BinaryCode {
    n_rows: usize,
    n_cols: usize,
    words_per_col: usize,
    data: Vec<u64>,
}

impl BinaryCode {
    pub fn from_columns(columns: &[BitVector]) -> Result<Self> {
        let Some(first) = columns.first() else {
            return Err(invalid("a code needs at least one column"));
        };
        let n_rows = first.len();
        if n_rows == 0 {
            return Err(invalid("a code needs at least one row"));
        }
        let words_per_col = words_for(n_rows);
        let mut data = Vec::with_capacity(words_per_col * columns.len());
        let mut seen = HashMap::with_capacity(columns.len());
        for (j, col) in columns.iter().enumerate() {
            if col.len() != n_rows {
                return Err(invalid(format!(
                    "column {j} has length {}, expected {n_rows}",
                    col.len()
                )));
            }
            if col.is_zero() {
                return Err(invalid(format!("column {j} is all-zero")));
            }
            if let Some(prev) = seen.insert(col.words(), j) {
                return Err(invalid(format!("columns {prev} and {j} coincide")));
            }
            data.extend_from_slice(col.words());
        }
        Ok(Self {
            n_rows,
            n_cols: columns.len(),
            words_per_col,
            data,
        })
    }

    pub fn from_bitstrings<S: AsRef<str>>(columns: &[S]) -> Result<Self> {
        let cols = columns
            .iter()
            .map(|s| {
                BitVector::from_bitstring(s.as_ref())
                    .ok_or_else(|| invalid(format!("not a bitstring: {:?}", s.as_ref())))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_columns(&cols)
    }

    /// Number of tests `N`.
    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    /// Number of samples `t`.
    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub(crate) fn column_words(&self, j: usize) -> &[u64] {
        &self.data[j * self.words_per_col..(j + 1) * self.words_per_col]
    }

    pub fn column(&self, j: usize) -> BitVector {
        BitVector::from_words(self.n_rows, self.column_words(j).to_vec())
    }

    pub fn get(&self, row: usize, col: usize) -> bool {
        assert!(row < self.n_rows && col < self.n_cols);
        self.column_words(col)[row / 64] >> (row % 64) & 1 == 1
    }

    /// Members of each row, i.e. the pools of a stage that runs this code.
    pub fn row_members(&self) -> Vec<Vec<usize>> {
        let mut rows = vec![Vec::new(); self.n_rows];
        for j in 0..self.n_cols {
            for i in self.column(j).iter_ones() {
                rows[i].push(j);
            }
        }
        rows
    }

    /// True when column `j` has no one outside `r`.
    pub fn column_covered_by(&self, j: usize, r: &OutcomeVector) -> bool {
        words_covered(self.column_words(j), r.bits.words())
    }

    pub fn outcome_vector(&self, defects: &[usize]) -> Result<OutcomeVector> {
        let mut bits = BitVector::zeros(self.n_rows);
        for &j in defects {
            if j >= self.n_cols {
                return Err(invalid(format!(
                    "sample {j} out of range for a code of size {}",
                    self.n_cols
                )));
            }
            bits.or_assign_words(self.column_words(j));
        }
        Ok(OutcomeVector::new(bits))
    }

    /// Random code whose columns are distinct words of weight `weight`, from a seeded ChaCha8 stream.
    pub fn random_constant_weight(
        n_rows: usize,
        weight: usize,
        n_cols: usize,
        seed: u64,
    ) -> Result<Self> {
        if weight == 0 || weight >= n_rows {
            return Err(invalid(format!(
                "column weight must lie in 1..{n_rows}, got {weight}"
            )));
        }
        let available = binomial_u128(n_rows as u64, weight as u64).unwrap_or(u128::MAX);
        if (n_cols as u128) > available {
            return Err(Error::Construction(format!(
                "only {available} distinct weight-{weight} columns of length {n_rows}, need {n_cols}"
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut seen = std::collections::HashSet::with_capacity(n_cols);
        let mut columns = Vec::with_capacity(n_cols);
        while columns.len() < n_cols {
            let mut support = sample(&mut rng, n_rows, weight).into_vec();
            support.sort_unstable();
            if seen.insert(support.clone()) {
                columns.push(BitVector::from_ones(n_rows, support));
            }
        }
        Self::from_columns(&columns)
    }
}

#[derive(Serialize, Deserialize)]
struct CodeJson {
    n_rows: usize,
    n_cols: usize,
    columns: Vec<String>,
}

impl TryFrom<CodeJson> for BinaryCode {
    type Error = Error;

    fn try_from(value: CodeJson) -> Result<Self> {
        let code = Self::from_bitstrings(&value.columns)?;
        if code.n_rows != value.n_rows || code.n_cols != value.n_cols {
            return Err(invalid("declared dimensions disagree with the columns"));
        }
        Ok(code)
    }
}

impl From<BinaryCode> for CodeJson {
    fn from(code: BinaryCode) -> Self {
        Self {
            n_rows: code.n_rows,
            n_cols: code.n_cols,
            columns: (0..code.n_cols)
                .map(|j| code.column(j).to_bitstring())
                .collect(),
        }
    }
}

/// The OR of the defective columns, optionally viewed as consecutive layers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OutcomeVector {
    bits: BitVector,
    layer_length: Option<usize>,
}

impl OutcomeVector {
    pub fn new(bits: BitVector) -> Self {
        Self {
            bits,
            layer_length: None,
        }
    }

    pub fn with_layers(self, layer_length: usize) -> Result<Self> {
        if layer_length == 0 || !self.bits.len().is_multiple_of(layer_length) {
            return Err(Error::Contract(format!(
                "length {} is not a multiple of layer length {layer_length}",
                self.bits.len()
            )));
        }
        Ok(Self {
            bits: self.bits,
            layer_length: Some(layer_length),
        })
    }

    pub fn bits(&self) -> &BitVector {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.bits.is_zero()
    }

    pub fn layer_length(&self) -> Option<usize> {
        self.layer_length
    }

    pub fn layer(&self, j: usize) -> Result<BitVector> {
        let n = self.require_layers()?;
        Ok(self.bits.slice(j * n, n))
    }

    /// Popcount of each layer.
    pub fn layer_weights(&self) -> Result<Vec<usize>> {
        let n = self.require_layers()?;
        Ok((0..self.bits.len() / n)
            .map(|j| (j * n..(j + 1) * n).filter(|&i| self.bits.get(i)).count())
            .collect())
    }

    fn require_layers(&self) -> Result<usize> {
        self.layer_length
            .ok_or_else(|| Error::Contract("outcome vector has no layer structure".into()))
    }
}

/// Words over `{0, …, q-1}` of a fixed length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QaryCode {
    q: usize,
    length: usize,
    words: Vec<Vec<usize>>,
}

impl QaryCode {
    pub fn new(q: usize, length: usize, words: Vec<Vec<usize>>) -> Result<Self> {
        if q < 2 || length == 0 {
            return Err(invalid("q-ary code needs q >= 2 and positive length"));
        }
        let mut seen = std::collections::HashSet::with_capacity(words.len());
        for w in &words {
            if w.len() != length || w.iter().any(|&a| a >= q) {
                return Err(invalid(format!("{w:?} is not a {q}-ary word of length {length}")));
            }
            if !seen.insert(w) {
                return Err(invalid(format!("duplicate word {w:?}")));
            }
        }
        Ok(Self { q, length, words })
    }

    /// The first `size` words of `{0..q-1}^length` in lexicographic order.
    pub fn lexicographic_prefix(q: usize, length: usize, size: usize) -> Result<Self> {
        if q < 2 || length == 0 {
            return Err(invalid("q-ary code needs q >= 2 and positive length"));
        }
        let fits = u32::try_from(length)
            .ok()
            .and_then(|l| (q as u128).checked_pow(l))
            .is_none_or(|total| size as u128 <= total);
        if !fits {
            return Err(invalid(format!("{size} words exceed {q}^{length}")));
        }
        let words = (0..size).map(|index| digits(index, q, length)).collect();
        Ok(Self { q, length, words })
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn size(&self) -> usize {
        self.words.len()
    }

    pub fn words(&self) -> &[Vec<usize>] {
        &self.words
    }

    pub fn symbol(&self, word: usize, coordinate: usize) -> usize {
        self.words[word][coordinate]
    }
}

/// Base-`q` digits of `index`, most significant first.
fn digits(mut index: usize, q: usize, length: usize) -> Vec<usize> {
    let mut out = vec![0; length];
    for slot in out.iter_mut().rev() {
        *slot = index % q;
        index /= q;
    }
    out
}

/// Binary words of a single fixed weight, in lexicographic order of their supports.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstantWeightCode {
    length: usize,
    weight: usize,
    words: Vec<BitVector>,
}

impl ConstantWeightCode {
    /// The first `count` words of the full lexicographic enumeration.
    pub fn lexicographic_prefix(length: usize, weight: usize, count: usize) -> Result<Self> {
        if weight == 0 || weight >= length {
            return Err(invalid(format!(
                "weight must lie strictly between 0 and {length}, got {weight}"
            )));
        }
        let words = (0..length)
            .combinations(weight)
            .take(count)
            .map(|support| BitVector::from_ones(length, support))
            .collect();
        Ok(Self {
            length,
            weight,
            words,
        })
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn weight(&self) -> usize {
        self.weight
    }

    pub fn relative_weight(&self) -> f64 {
        self.weight as f64 / self.length as f64
    }

    pub fn words(&self) -> &[BitVector] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

/// All `C(length, weight)` words of the given weight, lexicographically ordered by support.
pub fn enumerate_constant_weight(length: usize, weight: usize) -> Result<ConstantWeightCode> {
    ConstantWeightCode::lexicographic_prefix(length, weight, usize::MAX)
}

/// Stacks, for each outer word, the inner words indexed by its symbols.
pub fn concatenate(outer: &QaryCode, inner: &ConstantWeightCode) -> Result<BinaryCode> {
    if inner.len() < outer.q() {
        return Err(Error::Construction(format!(
            "inner code has {} words, fewer than the outer alphabet size {}",
            inner.len(),
            outer.q()
        )));
    }
    let layer = inner.length();
    let columns: Vec<BitVector> = outer
        .words()
        .iter()
        .map(|word| {
            let ones = word.iter().enumerate().flat_map(|(i, &symbol)| {
                inner.words()[symbol].iter_ones().map(move |b| i * layer + b)
            });
            BitVector::from_ones(outer.length() * layer, ones)
        })
        .collect();
    BinaryCode::from_columns(&columns)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bits(s: &str) -> BitVector {
        BitVector::from_bitstring(s).unwrap()
    }

    #[test]
    fn outcome_is_columnwise_or() {
        let code = BinaryCode::from_bitstrings(&["1100", "1010"]).unwrap();
        assert_eq!(code.outcome_vector(&[0, 1]).unwrap().bits(), &bits("1110"));
        assert!(code.outcome_vector(&[]).unwrap().is_zero());
        assert_eq!(code.outcome_vector(&[0]).unwrap().bits(), &code.column(0));
        assert!(matches!(
            code.outcome_vector(&[2]),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn rejects_zero_and_duplicate_columns() {
        assert!(BinaryCode::from_bitstrings(&["10", "00"]).is_err());
        assert!(BinaryCode::from_bitstrings(&["10", "10"]).is_err());
        assert!(BinaryCode::from_bitstrings(&["10", "1"]).is_err());
    }

    #[test]
    fn constant_weight_enumeration() {
        assert_eq!(enumerate_constant_weight(4, 2).unwrap().len(), 6);
        assert_eq!(enumerate_constant_weight(5, 2).unwrap().len(), 10);
        let c = enumerate_constant_weight(3, 1).unwrap();
        let words: Vec<String> = c.words().iter().map(BitVector::to_bitstring).collect();
        assert_eq!(words, ["100", "010", "001"]);
        let c = enumerate_constant_weight(4, 2).unwrap();
        let words: Vec<String> = c.words().iter().map(BitVector::to_bitstring).collect();
        assert_eq!(words, ["1100", "1010", "1001", "0110", "0101", "0011"]);
        assert!(enumerate_constant_weight(4, 0).is_err());
        assert!(enumerate_constant_weight(4, 4).is_err());
    }

    #[test]
    fn concatenation_shapes() {
        let outer = QaryCode::lexicographic_prefix(2, 1, 2).unwrap();
        let inner = enumerate_constant_weight(2, 1).unwrap();
        let code = concatenate(&outer, &inner).unwrap();
        assert_eq!(code.column(0), bits("10"));
        assert_eq!(code.column(1), bits("01"));

        let outer = QaryCode::lexicographic_prefix(6, 2, 36).unwrap();
        let inner = enumerate_constant_weight(4, 2).unwrap();
        let code = concatenate(&outer, &inner).unwrap();
        assert_eq!((code.n_rows(), code.n_cols()), (8, 36));
        assert_eq!(code.column(0), bits("11001100"));
        // outer word (5, 0) is index 30
        assert_eq!(code.column(30), bits("00111100"));
    }

    #[test]
    fn concatenation_needs_enough_inner_words() {
        let outer = QaryCode::lexicographic_prefix(7, 2, 49).unwrap();
        let inner = enumerate_constant_weight(4, 2).unwrap();
        assert!(matches!(
            concatenate(&outer, &inner),
            Err(Error::Construction(_))
        ));
    }

    #[test]
    fn qary_prefix_is_lexicographic() {
        let c = QaryCode::lexicographic_prefix(3, 2, 5).unwrap();
        assert_eq!(c.words(), &[vec![0, 0], vec![0, 1], vec![0, 2], vec![1, 0], vec![1, 1]]);
        assert!(QaryCode::lexicographic_prefix(3, 2, 10).is_err());
        assert!(QaryCode::new(3, 2, vec![vec![0, 1], vec![0, 1]]).is_err());
    }

    #[test]
    fn layer_weights() {
        let r = OutcomeVector::new(bits("11001100")).with_layers(4).unwrap();
        assert_eq!(r.layer_weights().unwrap(), [2, 2]);
        let r = OutcomeVector::new(bits("11101100")).with_layers(4).unwrap();
        assert_eq!(r.layer_weights().unwrap(), [3, 2]);
        let r = OutcomeVector::new(BitVector::zeros(8)).with_layers(4).unwrap();
        assert_eq!(r.layer_weights().unwrap(), [0, 0]);
        assert!(OutcomeVector::new(bits("1100")).layer_weights().is_err());
        assert!(OutcomeVector::new(bits("11001")).with_layers(4).is_err());
    }

    #[test]
    fn json_shape() {
        let code = BinaryCode::from_bitstrings(&["10", "01", "11"]).unwrap();
        let json = serde_json::to_string(&code).unwrap();
        assert_eq!(json, r#"{"n_rows":2,"n_cols":3,"columns":["10","01","11"]}"#);
        let back: BinaryCode = serde_json::from_str(&json).unwrap();
        assert_eq!(back, code);
        let bad = r#"{"n_rows":3,"n_cols":3,"columns":["10","01","11"]}"#;
        assert!(serde_json::from_str::<BinaryCode>(bad).is_err());
    }

    #[test]
    fn random_code_is_seeded_and_valid() {
        let a = BinaryCode::random_constant_weight(12, 3, 16, 7).unwrap();
        let b = BinaryCode::random_constant_weight(12, 3, 16, 7).unwrap();
        assert_eq!(a, b);
        assert!((0..16).all(|j| a.column(j).count_ones() == 3));
        assert!(BinaryCode::random_constant_weight(4, 2, 7, 0).is_err());
    }
}
