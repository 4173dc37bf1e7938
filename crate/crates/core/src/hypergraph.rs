//! Consistency hypergraph of a first-stage outcome and its greedy coloring.
//!
//! Vertices are samples. An edge is any set of at most `s` samples whose
//! outcome vector equals the observed one, so the true defect set is always an
//! edge. A good coloring puts the members of every edge in distinct classes.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::codes::{BinaryCode, OutcomeVector};
use crate::error::{invalid, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConsistencyHypergraph {
    t: usize,
    s: usize,
    /// Sorted vertex lists, in lexicographic order.
    edges: Vec<Vec<usize>>,
}

impl ConsistencyHypergraph {
    /// All sets of `1..=s` samples whose columns OR to exactly `r`.
    pub fn build(code: &BinaryCode, r: &OutcomeVector, s: usize) -> Result<Self> {
        if r.len() != code.n_rows() {
            return Err(invalid(format!(
                "outcome length {} does not match {} code rows",
                r.len(),
                code.n_rows()
            )));
        }
        if s == 0 {
            return Err(invalid("edge size bound s must be at least 1"));
        }
        let t = code.n_cols();
        // Only a column with no one outside r can belong to a consistent set.
        let pool: Vec<usize> = (0..t).filter(|&j| code.column_covered_by(j, r)).collect();
        let target = r.bits().words();
        let mut edges = Vec::new();
        let mut stack = Vec::with_capacity(s);
        let mut acc = vec![0u64; target.len()];
        extend(code, &pool, 0, s, target, &mut acc, &mut stack, &mut edges);
        Ok(Self { t, s, edges })
    }

    /// Builds a hypergraph directly from an edge list.
    pub fn from_edges(t: usize, s: usize, edges: Vec<Vec<usize>>) -> Result<Self> {
        let mut normalized = BTreeSet::new();
        for mut e in edges {
            e.sort_unstable();
            e.dedup();
            if e.is_empty() || e.len() > s {
                return Err(invalid(format!("edge {e:?} must have 1..={s} vertices")));
            }
            if e.iter().any(|&v| v >= t) {
                return Err(invalid(format!("edge {e:?} leaves the vertex set 0..{t}")));
            }
            normalized.insert(e);
        }
        Ok(Self {
            t,
            s,
            edges: normalized.into_iter().collect(),
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.t
    }

    pub fn max_edge_size(&self) -> usize {
        self.s
    }

    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    pub fn contains_edge(&self, set: &[usize]) -> bool {
        self.edges.binary_search_by(|e| e.as_slice().cmp(set)).is_ok()
    }

    /// Unordered adjacent pairs `(u, v)` with `u < v`.
    pub fn adjacency(&self) -> BTreeSet<(usize, usize)> {
        let mut pairs = BTreeSet::new();
        for e in &self.edges {
            for (i, &u) in e.iter().enumerate() {
                for &v in &e[i + 1..] {
                    pairs.insert((u, v));
                }
            }
        }
        pairs
    }

    pub fn neighbors(&self) -> Vec<BTreeSet<usize>> {
        let mut nbrs = vec![BTreeSet::new(); self.t];
        for (u, v) in self.adjacency() {
            nbrs[u].insert(v);
            nbrs[v].insert(u);
        }
        nbrs
    }

    /// Number of edges containing `v`.
    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.binary_search(&v).is_ok()).count()
    }

    /// Vertices in ascending order each take the smallest color unused by colored neighbors.
    /// Vertices that lie in no edge stay uncolored.
    pub fn greedy_coloring(&self) -> Coloring {
        let mut in_edge = vec![false; self.t];
        for e in &self.edges {
            for &v in e {
                in_edge[v] = true;
            }
        }
        let nbrs = self.neighbors();
        let mut color_of: Vec<Option<usize>> = vec![None; self.t];
        let mut k = 0;
        for v in 0..self.t {
            if !in_edge[v] {
                continue;
            }
            let used: BTreeSet<usize> = nbrs[v].iter().filter_map(|&u| color_of[u]).collect();
            let c = (0..).find(|c| !used.contains(c)).expect("unbounded range");
            color_of[v] = Some(c);
            k = k.max(c + 1);
        }
        Coloring { color_of, k }
    }
}

#[allow(clippy::too_many_arguments)]
fn extend(
    code: &BinaryCode,
    pool: &[usize],
    from: usize,
    s: usize,
    target: &[u64],
    acc: &mut Vec<u64>,
    stack: &mut Vec<usize>,
    edges: &mut Vec<Vec<usize>>,
) {
    for idx in from..pool.len() {
        let v = pool[idx];
        let saved = acc.clone();
        for (a, c) in acc.iter_mut().zip(code.column_words(v)) {
            *a |= *c;
        }
        stack.push(v);
        if acc.as_slice() == target {
            edges.push(stack.clone());
        }
        if stack.len() < s {
            extend(code, pool, idx + 1, s, target, acc, stack, edges);
        }
        stack.pop();
        *acc = saved;
    }
}

/// Vertex coloring; `None` marks vertices in no edge.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Coloring {
    color_of: Vec<Option<usize>>,
    k: usize,
}

impl Coloring {
    pub fn color_of(&self, v: usize) -> Option<usize> {
        self.color_of[v]
    }

    pub fn colors(&self) -> &[Option<usize>] {
        &self.color_of
    }

    /// Number of colors used.
    pub fn k(&self) -> usize {
        self.k
    }

    /// Members of each color class, ascending, indexed by color id.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut classes = vec![Vec::new(); self.k];
        for (v, c) in self.color_of.iter().enumerate() {
            if let Some(c) = c {
                classes[*c].push(v);
            }
        }
        classes
    }

    /// Every edge gets pairwise distinct colors, and only edge vertices are colored.
    pub fn is_good_for(&self, h: &ConsistencyHypergraph) -> bool {
        let mut in_edge = vec![false; h.vertex_count()];
        for e in h.edges() {
            let mut seen = BTreeSet::new();
            for &v in e {
                in_edge[v] = true;
                match self.color_of[v] {
                    Some(c) if seen.insert(c) => {}
                    _ => return false,
                }
            }
        }
        in_edge
            .iter()
            .zip(&self.color_of)
            .all(|(&inside, c)| inside == c.is_some())
    }
}
