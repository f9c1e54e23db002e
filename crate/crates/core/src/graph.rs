//! Weighted graphs and their Laplacians.
//!
//! Edges are stored canonically (`u < v`, sorted by `(u, v)`), so two graphs
//! with the same weights compare equal and serialize identically. A zero
//! weight means "no edge" and is dropped on construction; negative weights
//! are allowed.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub w: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    n: usize,
    edges: Vec<Edge>,
}

impl WeightedGraph {
    /// Builds a graph from `(u, v, w)` triples given in any order and
    /// orientation.
    ///
    /// Zero-weight triples are dropped. Self-loops, out-of-range endpoints,
    /// repeated pairs and non-finite weights are rejected.
    pub fn new<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        if n == 0 {
            return Err(Error::NoVertices);
        }
        let mut all = Vec::new();
        for (a, b, w) in edges {
            if a >= n || b >= n {
                return Err(Error::VertexOutOfRange { u: a, v: b, n });
            }
            if a == b {
                return Err(Error::SelfLoop(a));
            }
            if !w.is_finite() {
                return Err(Error::NonFiniteWeight { u: a, v: b, w });
            }
            let (u, v) = if a < b { (a, b) } else { (b, a) };
            all.push(Edge { u, v, w });
        }
        all.sort_by_key(|e| (e.u, e.v));
        if let Some(pair) = all.windows(2).find(|p| (p[0].u, p[0].v) == (p[1].u, p[1].v)) {
            return Err(Error::DuplicateEdge(pair[0].u, pair[0].v));
        }
        all.retain(|e| e.w != 0.0);
        Ok(Self { n, edges: all })
    }

    /// Graph on `n` vertices with no edges.
    pub fn empty(n: usize) -> Result<Self> {
        Self::new(n, std::iter::empty())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Total edge weight `e(G)`; the edge count for 0/1 weights.
    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.w).sum()
    }

    /// Sum of absolute edge weights, used to scale accumulation tolerances.
    pub fn abs_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.w.abs()).sum()
    }

    /// Dense Laplacian: `-w_uv` off the diagonal, incident weight sums on it.
    pub fn laplacian(&self) -> LaplacianMatrix {
        let n = self.n;
        let mut entries = vec![0.0; n * n];
        for e in &self.edges {
            entries[e.u * n + e.v] = -e.w;
            entries[e.v * n + e.u] = -e.w;
            entries[e.u * n + e.u] += e.w;
            entries[e.v * n + e.v] += e.w;
        }
        LaplacianMatrix { n, entries }
    }

    /// Same graph with vertex `i` renamed to `perm[i]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.n {
            return Err(Error::InvalidParameter(format!(
                "permutation of length {} for {} vertices",
                perm.len(),
                self.n
            )));
        }
        Self::new(self.n, self.edges.iter().map(|e| (perm[e.u], perm[e.v], e.w)))
    }

    /// Same graph with `extra` isolated vertices appended.
    pub fn with_isolated(&self, extra: usize) -> Self {
        Self {
            n: self.n + extra,
            edges: self.edges.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("graph serialization is infallible")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    n: usize,
    edges: Vec<(usize, usize, f64)>,
}

impl Serialize for WeightedGraph {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GraphJson {
            n: self.n,
            edges: self.edges.iter().map(|e| (e.u, e.v, e.w)).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for WeightedGraph {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = GraphJson::deserialize(d)?;
        WeightedGraph::new(raw.n, raw.edges).map_err(serde::de::Error::custom)
    }
}

/// Standard unweighted test families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphKind {
    Complete,
    Path,
    Star,
    Empty,
}

impl FromStr for GraphKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "complete" => Ok(Self::Complete),
            "path" => Ok(Self::Path),
            "star" => Ok(Self::Star),
            "empty" => Ok(Self::Empty),
            other => Err(Error::UnknownGraphKind(other.to_string())),
        }
    }
}

impl fmt::Display for GraphKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Complete => "complete",
            Self::Path => "path",
            Self::Star => "star",
            Self::Empty => "empty",
        })
    }
}

/// Star graphs are centred at vertex 0.
pub fn named_graph(kind: GraphKind, n: usize) -> Result<WeightedGraph> {
    let edges: Vec<(usize, usize, f64)> = match kind {
        GraphKind::Complete => (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v, 1.0))).collect(),
        GraphKind::Path => (1..n).map(|v| (v - 1, v, 1.0)).collect(),
        GraphKind::Star => (1..n).map(|v| (0, v, 1.0)).collect(),
        GraphKind::Empty => Vec::new(),
    };
    WeightedGraph::new(n, edges)
}

/// Dense symmetric `n x n` matrix in row-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct LaplacianMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl LaplacianMatrix {
    /// Wraps an arbitrary symmetric matrix, checking shape, finiteness and
    /// exact symmetry.
    pub fn from_rows(n: usize, entries: Vec<f64>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::NotSquare { n, len: entries.len() });
        }
        for i in 0..n {
            for j in 0..n {
                if !entries[i * n + j].is_finite() {
                    return Err(Error::NonFiniteEntry(i, j));
                }
                if j > i && entries[i * n + j] != entries[j * n + i] {
                    return Err(Error::NotSymmetric(i, j));
                }
            }
        }
        Ok(Self { n, entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.entries.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.row(i).iter().sum()).collect()
    }

    /// Gershgorin intervals `[d_i - r_i, d_i + r_i]`.
    pub fn gershgorin(&self) -> Vec<(f64, f64)> {
        (0..self.n)
            .map(|i| {
                let d = self.get(i, i);
                let r: f64 = self
                    .row(i)
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, x)| x.abs())
                    .sum();
                (d - r, d + r)
            })
            .collect()
    }
}
