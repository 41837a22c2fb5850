//! Undirected simple graphs on contiguous vertex indices.
//!
//! Adjacency is stored as dense bitset rows alongside a degree array. Every
//! workload in this crate is small (n up to a few dozen), so the dense form
//! keeps neighbourhood algebra (twin tests, clique tests) to a handful of word
//! operations. Graph values are immutable: every mutation returns a new graph.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Vertex = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("a graph needs at least one vertex")]
    Empty,
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: Vertex, n: usize },
    #[error("loop at vertex {0}")]
    Loop(Vertex),
    #[error("edge {0}-{1} is already present")]
    EdgeExists(Vertex, Vertex),
    #[error("edge {0}-{1} is not present")]
    EdgeMissing(Vertex, Vertex),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("edge list line {line}: {message}")]
    EdgeList { line: usize, message: String },
}

/// A normalized set of undirected edges: each pair is stored as `(min, max)`,
/// pairs are sorted and duplicates collapse.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EdgeSet(Vec<(Vertex, Vertex)>);

impl EdgeSet {
    pub fn new() -> Self {
        EdgeSet(Vec::new())
    }

    pub fn from_pairs<I>(pairs: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut edges = Vec::new();
        for (u, v) in pairs {
            if u == v {
                return Err(GraphError::Loop(u));
            }
            edges.push((u.min(v), u.max(v)));
        }
        edges.sort_unstable();
        edges.dedup();
        Ok(EdgeSet(edges))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, u: Vertex, v: Vertex) -> bool {
        self.0.binary_search(&(u.min(v), u.max(v))).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.0.iter().copied()
    }

    pub fn is_disjoint(&self, other: &EdgeSet) -> bool {
        self.iter().all(|(u, v)| !other.contains(u, v))
    }
}

/// Distance between the two farthest vertices; `Infinite` for disconnected graphs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Diameter {
    Finite(usize),
    Infinite,
}

impl Diameter {
    pub fn finite(self) -> Option<usize> {
        match self {
            Diameter::Finite(d) => Some(d),
            Diameter::Infinite => None,
        }
    }
}

impl fmt::Display for Diameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diameter::Finite(d) => write!(f, "{d}"),
            Diameter::Infinite => f.write_str("inf"),
        }
    }
}

/// Result of deleting vertices: the relabelled graph plus both index maps.
#[derive(Debug, Clone)]
pub struct Relabeled {
    pub graph: Graph,
    pub old_to_new: Vec<Option<Vertex>>,
    pub new_to_old: Vec<Vertex>,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    words: usize,
    rows: Vec<u64>,
    degrees: Vec<usize>,
    m: usize,
}

#[inline]
fn words_for(n: usize) -> usize {
    n.div_ceil(64).max(1)
}

impl Graph {
    /// Edgeless graph on `n` vertices. `n = 0` yields the null graph, which only
    /// shows up as the result of deleting every vertex.
    pub fn empty(n: usize) -> Graph {
        let words = words_for(n);
        Graph {
            n,
            words,
            rows: vec![0; n * words],
            degrees: vec![0; n],
            m: 0,
        }
    }

    pub fn from_edges<I>(n: usize, edges: I) -> Result<Graph, GraphError>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        if n == 0 {
            return Err(GraphError::Empty);
        }
        let mut g = Graph::empty(n);
        for (u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(GraphError::Loop(u));
            }
            if !g.has_edge(u, v) {
                g.set_edge(u, v);
            }
        }
        Ok(g)
    }

    pub fn from_edge_set(n: usize, edges: &EdgeSet) -> Result<Graph, GraphError> {
        Graph::from_edges(n, edges.iter())
    }

    /// Parses the plain-text edge list format: first line `n`, then one `u v`
    /// pair per line. Blank lines and `#` comments are ignored.
    pub fn parse_edge_list(text: &str) -> Result<Graph, GraphError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (first, header) = lines.next().ok_or(GraphError::EdgeList {
            line: 1,
            message: "missing vertex count".into(),
        })?;
        let n: usize = header.parse().map_err(|_| GraphError::EdgeList {
            line: first,
            message: format!("expected a vertex count, found {header:?}"),
        })?;
        let mut edges = Vec::new();
        for (line, body) in lines {
            let parts: Vec<&str> = body.split_whitespace().collect();
            let parse = |s: &str| {
                s.parse::<usize>().map_err(|_| GraphError::EdgeList {
                    line,
                    message: format!("expected a vertex index, found {s:?}"),
                })
            };
            if parts.len() != 2 {
                return Err(GraphError::EdgeList {
                    line,
                    message: format!("expected two endpoints, found {}", parts.len()),
                });
            }
            let (u, v) = (parse(parts[0])?, parse(parts[1])?);
            if u >= n || v >= n || u == v {
                return Err(GraphError::EdgeList {
                    line,
                    message: format!("invalid edge {u} {v} for {n} vertices"),
                });
            }
            edges.push((u, v));
        }
        Graph::from_edges(n, edges).map_err(|e| GraphError::EdgeList {
            line: first,
            message: e.to_string(),
        })
    }

    pub fn complete(n: usize) -> Graph {
        let mut g = Graph::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                g.set_edge(u, v);
            }
        }
        g
    }

    pub fn path(n: usize) -> Graph {
        let mut g = Graph::empty(n);
        for u in 1..n {
            g.set_edge(u - 1, u);
        }
        g
    }

    pub fn cycle(n: usize) -> Graph {
        let mut g = Graph::path(n);
        if n >= 3 {
            g.set_edge(n - 1, 0);
        }
        g
    }

    /// The star K_{1,n-1} with centre 0.
    pub fn star(n: usize) -> Graph {
        let mut g = Graph::empty(n);
        for v in 1..n {
            g.set_edge(0, v);
        }
        g
    }

    fn set_edge(&mut self, u: Vertex, v: Vertex) {
        debug_assert!(u != v && !self.has_edge(u, v));
        self.rows[u * self.words + v / 64] |= 1 << (v % 64);
        self.rows[v * self.words + u / 64] |= 1 << (u % 64);
        self.degrees[u] += 1;
        self.degrees[v] += 1;
        self.m += 1;
    }

    fn clear_edge(&mut self, u: Vertex, v: Vertex) {
        debug_assert!(self.has_edge(u, v));
        self.rows[u * self.words + v / 64] &= !(1 << (v % 64));
        self.rows[v * self.words + u / 64] &= !(1 << (u % 64));
        self.degrees[u] -= 1;
        self.degrees[v] -= 1;
        self.m -= 1;
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.degrees[v]
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn max_degree(&self) -> usize {
        self.degrees.iter().copied().max().unwrap_or(0)
    }

    pub fn min_degree(&self) -> usize {
        self.degrees.iter().copied().min().unwrap_or(0)
    }

    pub fn is_regular(&self) -> bool {
        self.max_degree() == self.min_degree()
    }

    #[inline]
    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.rows[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    /// Bitset row of `v`, `ceil(n/64)` words.
    #[inline]
    pub fn row(&self, v: Vertex) -> &[u64] {
        &self.rows[v * self.words..(v + 1) * self.words]
    }

    /// Neighbourhood of `v` as a single word. Only valid for `n <= 64`.
    #[inline]
    pub fn mask(&self, v: Vertex) -> u64 {
        debug_assert!(self.n <= 64, "mask() needs n <= 64");
        self.rows[v * self.words]
    }

    pub fn neighbors(&self, v: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        self.row(v).iter().enumerate().flat_map(|(w, &word)| {
            BitIter(word).map(move |b| w * 64 + b)
        })
    }

    /// Edges `(u, v)` with `u < v`, ordered by `u` then `v`.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        (0..self.n).flat_map(move |u| self.neighbors(u).filter(move |&v| v > u).map(move |v| (u, v)))
    }

    pub fn edge_set(&self) -> EdgeSet {
        EdgeSet(self.edges().collect())
    }

    fn check_vertex(&self, v: Vertex) -> Result<(), GraphError> {
        if v < self.n {
            Ok(())
        } else {
            Err(GraphError::VertexOutOfRange { vertex: v, n: self.n })
        }
    }

    /// G + uv.
    pub fn with_edge(&self, u: Vertex, v: Vertex) -> Result<Graph, GraphError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(GraphError::Loop(u));
        }
        if self.has_edge(u, v) {
            return Err(GraphError::EdgeExists(u.min(v), u.max(v)));
        }
        let mut g = self.clone();
        g.set_edge(u, v);
        Ok(g)
    }

    /// G - uv.
    pub fn without_edge(&self, u: Vertex, v: Vertex) -> Result<Graph, GraphError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if !self.has_edge(u, v) {
            return Err(GraphError::EdgeMissing(u.min(v), u.max(v)));
        }
        let mut g = self.clone();
        g.clear_edge(u, v);
        Ok(g)
    }

    /// G - removed + added. Every removed edge must exist and every added edge
    /// must be absent once the removals are applied.
    pub fn rewired(&self, removed: &EdgeSet, added: &EdgeSet) -> Result<Graph, GraphError> {
        let mut g = self.clone();
        for (u, v) in removed.iter() {
            g.check_vertex(v)?;
            if !g.has_edge(u, v) {
                return Err(GraphError::EdgeMissing(u, v));
            }
            g.clear_edge(u, v);
        }
        for (u, v) in added.iter() {
            g.check_vertex(v)?;
            if g.has_edge(u, v) {
                return Err(GraphError::EdgeExists(u, v));
            }
            g.set_edge(u, v);
        }
        Ok(g)
    }

    /// Adds a new vertex `n` adjacent to `neighbours`.
    pub fn with_vertex<I>(&self, neighbours: I) -> Graph
    where
        I: IntoIterator<Item = Vertex>,
    {
        let n = self.n + 1;
        let mut g = Graph::empty(n);
        for (u, v) in self.edges() {
            g.set_edge(u, v);
        }
        for u in neighbours {
            if !g.has_edge(u, self.n) {
                g.set_edge(u, self.n);
            }
        }
        g
    }

    /// Induced subgraph on `keep`, relabelled in the order given.
    pub fn induced(&self, keep: &[Vertex]) -> Relabeled {
        let mut old_to_new = vec![None; self.n];
        for (i, &v) in keep.iter().enumerate() {
            old_to_new[v] = Some(i);
        }
        let mut g = Graph::empty(keep.len());
        for (i, &u) in keep.iter().enumerate() {
            for v in self.neighbors(u) {
                if let Some(j) = old_to_new[v] {
                    if i < j {
                        g.set_edge(i, j);
                    }
                }
            }
        }
        Relabeled {
            graph: g,
            old_to_new,
            new_to_old: keep.to_vec(),
        }
    }

    /// G - X, keeping the surviving vertices in increasing order.
    pub fn remove_vertices(&self, removed: &[Vertex]) -> Relabeled {
        let mut gone = vec![false; self.n];
        for &v in removed {
            gone[v] = true;
        }
        let keep: Vec<Vertex> = (0..self.n).filter(|&v| !gone[v]).collect();
        self.induced(&keep)
    }

    /// Relabels so that old vertex `v` becomes `perm[v]`.
    pub fn permuted(&self, perm: &[Vertex]) -> Graph {
        assert_eq!(perm.len(), self.n);
        let mut g = Graph::empty(self.n);
        for (u, v) in self.edges() {
            g.set_edge(perm[u], perm[v]);
        }
        g
    }

    pub fn bfs_distances(&self, source: Vertex) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n];
        let mut queue = VecDeque::new();
        dist[source] = Some(0);
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap();
            for v in self.neighbors(u) {
                if dist[v].is_none() {
                    dist[v] = Some(du + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    pub fn is_connected(&self) -> bool {
        self.n == 0 || self.bfs_distances(0).iter().all(Option::is_some)
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<Vertex>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            let mut comp: Vec<Vertex> = self
                .bfs_distances(s)
                .iter()
                .enumerate()
                .filter_map(|(v, d)| d.map(|_| v))
                .collect();
            comp.sort_unstable();
            for &v in &comp {
                seen[v] = true;
            }
            out.push(comp);
        }
        out
    }

    pub fn diameter(&self) -> Diameter {
        let mut best = 0;
        for s in 0..self.n {
            for d in self.bfs_distances(s) {
                match d {
                    Some(d) => best = best.max(d),
                    None => return Diameter::Infinite,
                }
            }
        }
        Diameter::Finite(best)
    }

    pub fn is_clique(&self, vertices: &[Vertex]) -> bool {
        vertices
            .iter()
            .enumerate()
            .all(|(i, &u)| vertices[i + 1..].iter().all(|&v| self.has_edge(u, v)))
    }

    /// A vertex is simplicial when its neighbourhood is a clique.
    pub fn is_simplicial(&self, v: Vertex) -> bool {
        let nb: Vec<Vertex> = self.neighbors(v).collect();
        self.is_clique(&nb)
    }

    pub fn simplicial_vertices(&self) -> Vec<Vertex> {
        (0..self.n).filter(|&v| self.is_simplicial(v)).collect()
    }

    /// `u` and `v` have the same neighbours apart from each other
    /// (true twins when adjacent, false twins otherwise).
    pub fn are_twins(&self, u: Vertex, v: Vertex) -> bool {
        let (ru, rv) = (self.row(u), self.row(v));
        ru.iter().zip(rv).enumerate().all(|(w, (&a, &b))| {
            let mut clear = 0u64;
            if u / 64 == w {
                clear |= 1 << (u % 64);
            }
            if v / 64 == w {
                clear |= 1 << (v % 64);
            }
            a & !clear == b & !clear
        })
    }

    /// Row-major dense adjacency matrix.
    pub fn adjacency_matrix(&self) -> Vec<f64> {
        let mut a = vec![0.0; self.n * self.n];
        for (u, v) in self.edges() {
            a[u * self.n + v] = 1.0;
            a[v * self.n + u] = 1.0;
        }
        a
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges().collect::<Vec<_>>())
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::graph6::encode(self))
    }
}

/// Iterates the set bit positions of a word.
#[derive(Clone, Copy)]
pub struct BitIter(pub u64);

impl Iterator for BitIter {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            let b = self.0.trailing_zeros() as usize;
            self.0 &= self.0 - 1;
            Some(b)
        }
    }
}
