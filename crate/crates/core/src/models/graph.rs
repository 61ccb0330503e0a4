use std::collections::BTreeSet;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A simple undirected graph: no loops, no parallel edges.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Graph {
    #[serde(rename = "n")]
    num_vertices: usize,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn new(num_vertices: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for (i, &(u, v)) in edges.iter().enumerate() {
            if u >= num_vertices || v >= num_vertices {
                return Err(Error::Graph(format!(
                    "edge {i} ({u}, {v}) out of range for {num_vertices} vertices"
                )));
            }
            if u == v {
                return Err(Error::Graph(format!("edge {i} is a self-loop at {u}")));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::Graph(format!("edge {i} ({u}, {v}) is repeated")));
            }
        }
        Ok(Self { num_vertices, edges })
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        Self { num_vertices: n, edges }
    }

    pub fn path(n: usize) -> Self {
        let edges = (1..n).map(|v| (v - 1, v)).collect();
        Self { num_vertices: n, edges }
    }

    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::Graph("a simple cycle needs at least 3 vertices".into()));
        }
        let mut edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
        edges.push((n - 1, 0));
        Ok(Self { num_vertices: n, edges })
    }

    pub fn is_connected(&self) -> bool {
        if self.num_vertices == 0 {
            return true;
        }
        let mut seen = vec![false; self.num_vertices];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for &(a, b) in &self.edges {
                let next = if a == u { b } else if b == u { a } else { continue };
                if !std::mem::replace(&mut seen[next], true) {
                    stack.push(next);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// The same graph with vertex `v` renamed `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.num_vertices {
            return Err(Error::Graph("permutation length differs from vertex count".into()));
        }
        let edges = self.edges.iter().map(|&(u, v)| (perm[u], perm[v])).collect();
        Self::new(self.num_vertices, edges)
    }

    /// A random connected graph: a random spanning tree plus each remaining
    /// pair with probability `p`.
    pub fn random_connected(n: usize, p: f64, rng: &mut impl Rng) -> Self {
        let mut edges = Vec::new();
        let mut present = BTreeSet::new();
        for v in 1..n {
            let u = rng.gen_range(0..v);
            edges.push((u, v));
            present.insert((u, v));
        }
        for u in 0..n {
            for v in u + 1..n {
                if !present.contains(&(u, v)) && rng.gen_bool(p) {
                    edges.push((u, v));
                }
            }
        }
        Self { num_vertices: n, edges }
    }

    /// Parses either the JSON form `{"n": .., "edges": [[u, v], ..]}` or an
    /// edge list: one `u v` pair per line, `#` comments, and an optional
    /// `# vertices: N` header (otherwise `N` is one more than the largest
    /// endpoint).
    pub fn parse(text: &str) -> Result<Self> {
        if text.trim_start().starts_with('{') {
            return Self::from_json(text);
        }
        let mut declared = None;
        let mut edges = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if let Some(comment) = line.strip_prefix('#') {
                if let Some(n) = comment.trim().strip_prefix("vertices:") {
                    let n = n.trim().parse().map_err(|_| {
                        Error::Graph(format!("line {}: bad vertex count `{}`", lineno + 1, n.trim()))
                    })?;
                    declared = Some(n);
                }
                continue;
            }
            if line.is_empty() {
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            let [u, v] = parts.as_slice() else {
                return Err(Error::Graph(format!("line {}: expected `u v`, got `{line}`", lineno + 1)));
            };
            let parse = |s: &str| {
                s.parse::<usize>()
                    .map_err(|_| Error::Graph(format!("line {}: bad vertex `{s}`", lineno + 1)))
            };
            edges.push((parse(u)?, parse(v)?));
        }
        let inferred = edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0);
        Self::new(declared.unwrap_or(inferred), edges)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: Graph = serde_json::from_str(text).map_err(|e| Error::Graph(e.to_string()))?;
        Self::new(raw.num_vertices, raw.edges)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("graphs serialize")
    }

    pub fn to_edge_list(&self) -> String {
        let mut out = format!("# vertices: {}\n", self.num_vertices);
        for (u, v) in &self.edges {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }
}
