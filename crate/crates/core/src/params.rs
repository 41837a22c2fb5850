//! Nonspectral graph parameters: degrees, diameter, edge-connectivity,
//! independence number, and the leaf-block bookkeeping used for block graphs.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::blocks::decompose_blocks;
use crate::families::recognize_block_graph;
use crate::graph::{BitIter, Diameter, Graph, GraphError, Vertex};

/// Largest graph accepted by the branch-and-bound independence solver.
pub const MIS_MAX_N: usize = 24;
/// Largest graph accepted by the exact tree-width dynamic program.
pub const TREEWIDTH_MAX_N: usize = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParamError {
    #[error("edge-connectivity needs at least two vertices")]
    TooFewVertices,
    #[error("endpoints must differ, got {0} twice")]
    SameVertex(Vertex),
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: Vertex, n: usize },
    #[error("{what} is limited to n <= {cap}, got n = {n}")]
    TooLarge { what: &'static str, n: usize, cap: usize },
    #[error("input is not a block graph")]
    NotBlockGraph,
    #[error("input is a complete graph; it has no leaf blocks")]
    CompleteGraph,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

fn require_connected(g: &Graph) -> Result<(), ParamError> {
    if g.n() == 0 {
        Err(GraphError::Empty.into())
    } else if !g.is_connected() {
        Err(GraphError::Disconnected.into())
    } else {
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Edge-connectivity

/// Net unit flow on an undirected graph: `flow[u*n+v] = -flow[v*n+u]`, and
/// each edge carries at most one unit in one direction.
struct UnitFlow {
    n: usize,
    flow: Vec<i8>,
    value: usize,
}

fn max_flow(g: &Graph, s: Vertex, t: Vertex) -> UnitFlow {
    let n = g.n();
    let mut flow = vec![0i8; n * n];
    let mut value = 0;
    let mut parent = vec![usize::MAX; n];
    loop {
        parent.iter_mut().for_each(|p| *p = usize::MAX);
        parent[s] = s;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            if u == t {
                break;
            }
            for v in g.neighbors(u) {
                if parent[v] == usize::MAX && flow[u * n + v] < 1 {
                    parent[v] = u;
                    queue.push_back(v);
                }
            }
        }
        if parent[t] == usize::MAX {
            break;
        }
        let mut v = t;
        while v != s {
            let u = parent[v];
            flow[u * n + v] += 1;
            flow[v * n + u] -= 1;
            v = u;
        }
        value += 1;
    }
    UnitFlow { n, flow, value }
}

/// Maximum number of edge-disjoint u,v-paths, i.e. the size of a minimum
/// u,v-disconnecting edge set.
pub fn local_edge_connectivity(g: &Graph, u: Vertex, v: Vertex) -> Result<usize, ParamError> {
    check_pair(g, u, v)?;
    Ok(max_flow(g, u, v).value)
}

fn check_pair(g: &Graph, u: Vertex, v: Vertex) -> Result<(), ParamError> {
    for w in [u, v] {
        if w >= g.n() {
            return Err(ParamError::VertexOutOfRange { vertex: w, n: g.n() });
        }
    }
    if u == v {
        return Err(ParamError::SameVertex(u));
    }
    Ok(())
}

/// Edge-connectivity: the minimum over `v != 0` of the max-flow value between
/// vertex 0 and `v`.
pub fn edge_connectivity(g: &Graph) -> Result<usize, ParamError> {
    if g.n() < 2 {
        return Err(ParamError::TooFewVertices);
    }
    require_connected(g)?;
    Ok((1..g.n()).map(|v| max_flow(g, 0, v).value).min().unwrap_or(0))
}

/// A maximum family of pairwise edge-disjoint u,v-paths, each a simple path
/// given as its vertex sequence from `u` to `v`.
pub fn edge_disjoint_paths(g: &Graph, u: Vertex, v: Vertex) -> Result<Vec<Vec<Vertex>>, ParamError> {
    check_pair(g, u, v)?;
    let UnitFlow { n, mut flow, value } = max_flow(g, u, v);
    let mut paths = Vec::with_capacity(value);
    for _ in 0..value {
        let mut path = vec![u];
        let mut on_path = vec![usize::MAX; n];
        on_path[u] = 0;
        let mut at = u;
        while at != v {
            let next = (0..n)
                .find(|&w| flow[at * n + w] == 1)
                .expect("flow conservation leaves an outgoing arc");
            flow[at * n + next] = 0;
            flow[next * n + at] = 0;
            if on_path[next] != usize::MAX {
                // Drop the cycle just closed; its arcs are already consumed.
                let keep = on_path[next] + 1;
                for &w in &path[keep..] {
                    on_path[w] = usize::MAX;
                }
                path.truncate(keep);
            } else {
                on_path[next] = path.len();
                path.push(next);
            }
            at = next;
        }
        paths.push(path);
    }
    Ok(paths)
}

// ---------------------------------------------------------------------------
// Independence number

/// Number of cliques in a greedy clique cover of `cand`; an upper bound on
/// the independence number of the induced subgraph.
fn clique_cover_bound(g: &Graph, mut cand: u64) -> u32 {
    let mut count = 0;
    while cand != 0 {
        let v = cand.trailing_zeros() as usize;
        let mut clique = 1u64 << v;
        let mut common = g.mask(v) & cand;
        while common != 0 {
            let w = common.trailing_zeros() as usize;
            clique |= 1 << w;
            common &= g.mask(w);
        }
        cand &= !clique;
        count += 1;
    }
    count
}

struct MisSearch<'a> {
    g: &'a Graph,
    best: u64,
    best_size: u32,
    /// When set, collect every independent set of exactly this size.
    collect: Option<(u32, Vec<u64>)>,
}

impl MisSearch<'_> {
    fn run(&mut self, chosen: u64, cand: u64) {
        let size = chosen.count_ones();
        if cand == 0 {
            if let Some((target, found)) = &mut self.collect {
                if size == *target {
                    found.push(chosen);
                }
            } else if size > self.best_size {
                self.best_size = size;
                self.best = chosen;
            }
            return;
        }
        let bound = size + clique_cover_bound(self.g, cand);
        match &self.collect {
            Some((target, _)) if bound < *target => return,
            None if bound <= self.best_size => return,
            _ => {}
        }
        // Branch on the candidate of largest degree inside `cand`.
        let v = BitIter(cand)
            .max_by_key(|&v| ((self.g.mask(v) & cand).count_ones(), std::cmp::Reverse(v)))
            .unwrap();
        let closed = self.g.mask(v) | 1 << v;
        self.run(chosen | 1 << v, cand & !closed);
        if self.g.mask(v) & cand != 0 || self.collect.is_some() {
            self.run(chosen, cand & !(1 << v));
        }
    }
}

fn check_mis_size(g: &Graph) -> Result<(), ParamError> {
    if g.n() > MIS_MAX_N {
        return Err(ParamError::TooLarge {
            what: "exact independence number",
            n: g.n(),
            cap: MIS_MAX_N,
        });
    }
    Ok(())
}

fn all_vertices(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// A maximum independent set, found by branch and bound with greedy
/// clique-cover pruning.
pub fn maximum_independent_set(g: &Graph) -> Result<Vec<Vertex>, ParamError> {
    check_mis_size(g)?;
    let mut search = MisSearch {
        g,
        best: 0,
        best_size: 0,
        collect: None,
    };
    search.run(0, all_vertices(g.n()));
    Ok(BitIter(search.best).collect())
}

pub fn independence_number_bruteforce(g: &Graph) -> Result<usize, ParamError> {
    Ok(maximum_independent_set(g)?.len())
}

/// Every maximum independent set, as bitmasks over the vertices.
pub fn maximum_independent_sets(g: &Graph) -> Result<Vec<u64>, ParamError> {
    let alpha = independence_number_bruteforce(g)? as u32;
    let mut search = MisSearch {
        g,
        best: 0,
        best_size: 0,
        collect: Some((alpha, Vec::new())),
    };
    search.run(0, all_vertices(g.n()));
    let (_, mut sets) = search.collect.unwrap();
    sets.sort_unstable();
    sets.dedup();
    Ok(sets)
}

/// Which leaf block the block-graph recursion peels first.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LeafChoice {
    /// Leaf block at the lowest-index cut vertex.
    LowestCut,
    /// Leaf block at the highest-index cut vertex.
    HighestCut,
}

fn block_alpha_connected(g: &Graph, choice: LeafChoice) -> usize {
    let d = decompose_blocks(g).expect("components are connected");
    if d.blocks.len() == 1 {
        return 1;
    }
    let keyed = d.leaf_blocks.iter().map(|&b| (d.cut_vertices_of(b)[0], b));
    let (_, b) = match choice {
        LeafChoice::LowestCut => keyed.min(),
        LeafChoice::HighestCut => keyed.max(),
    }
    .expect("a block graph with two blocks has a leaf block");
    1 + block_alpha(&g.remove_vertices(&d.blocks[b]).graph, choice)
}

fn block_alpha(g: &Graph, choice: LeafChoice) -> usize {
    g.components()
        .iter()
        .map(|comp| block_alpha_connected(&g.induced(comp).graph, choice))
        .sum()
}

/// Independence number of a block graph by peeling leaf blocks: each leaf
/// block contributes one vertex, and the recursion continues on G - V(B).
pub fn independence_number_blockgraph(g: &Graph) -> Result<usize, ParamError> {
    independence_number_blockgraph_with(g, LeafChoice::LowestCut)
}

pub fn independence_number_blockgraph_with(g: &Graph, choice: LeafChoice) -> Result<usize, ParamError> {
    require_connected(g)?;
    if !recognize_block_graph(g).map_err(|_| ParamError::NotBlockGraph)? {
        return Err(ParamError::NotBlockGraph);
    }
    Ok(block_alpha(g, choice))
}

// ---------------------------------------------------------------------------
// Leaf-block ledger

/// Bookkeeping for one block `B` of `H = G - (leaf-block simplicial vertices)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LedgerEntry {
    /// V(B), in the labels of G.
    pub block: Vec<Vertex>,
    /// Cut vertices of H lying in V(B).
    pub h_cut_vertices: Vec<Vertex>,
    /// Simplicial vertices of the leaf blocks of G that meet V(B) in exactly one vertex.
    pub leaf_simplicials: Vec<Vertex>,
    /// Number of those leaf blocks.
    pub leaf_count: usize,
    /// How many of those leaf blocks hang at a cut vertex of H inside V(B).
    pub leaf_count_at_h_cut: usize,
    /// The part of `leaf_simplicials` coming from those leaf blocks.
    pub leaf_simplicials_at_h_cut: Vec<Vertex>,
    /// V(B) contains a simplicial vertex of G.
    pub has_simplicial: bool,
}

impl LedgerEntry {
    /// B is a leaf block of H: it holds exactly one cut vertex of H.
    pub fn is_leaf_in_h(&self) -> bool {
        self.h_cut_vertices.len() == 1
    }

    /// The counting identity for this block, when B is a leaf block of H:
    /// the vertices to delete from G and the amount added back, so that
    /// `alpha(G) = alpha(G - removed) + offset`. `None` outside that domain.
    pub fn identity(&self) -> Option<(Vec<Vertex>, usize)> {
        self.identity_with(&[], 0)
    }

    /// Same identity, but leaf blocks of G hanging at the cut vertex of H are
    /// left in place instead of being removed and counted. The stated form
    /// can fail when such leaf blocks exist and V(B) has no simplicial vertex
    /// of G; this form does not.
    pub fn identity_keeping_cut_leaves(&self) -> Option<(Vec<Vertex>, usize)> {
        self.identity_with(&self.leaf_simplicials_at_h_cut, self.leaf_count_at_h_cut)
    }

    fn identity_with(&self, kept: &[Vertex], kept_count: usize) -> Option<(Vec<Vertex>, usize)> {
        if !self.is_leaf_in_h() {
            return None;
        }
        let cut = self.h_cut_vertices[0];
        let mut removed: Vec<Vertex> = self
            .block
            .iter()
            .chain(&self.leaf_simplicials)
            .copied()
            .filter(|&w| (self.has_simplicial || w != cut) && !kept.contains(&w))
            .collect();
        removed.sort_unstable();
        removed.dedup();
        let offset = self.leaf_count - kept_count + usize::from(self.has_simplicial);
        Some((removed, offset))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LeafBlockLedger {
    /// Vertices of H, in the labels of G.
    pub h_vertices: Vec<Vertex>,
    /// One entry per block of H (none when H is a single vertex).
    pub entries: Vec<LedgerEntry>,
}

pub fn leaf_block_ledger(g: &Graph) -> Result<LeafBlockLedger, ParamError> {
    require_connected(g)?;
    if !recognize_block_graph(g).map_err(|_| ParamError::NotBlockGraph)? {
        return Err(ParamError::NotBlockGraph);
    }
    let d = decompose_blocks(g)?;
    if d.blocks.len() == 1 {
        return Err(ParamError::CompleteGraph);
    }
    let h = g.remove_vertices(&d.leaf_simplicials);
    let mut entries = Vec::new();
    if h.graph.n() >= 2 {
        let hd = decompose_blocks(&h.graph)?;
        let simplicial: Vec<bool> = (0..g.n()).map(|v| d.simplicial_vertices.binary_search(&v).is_ok()).collect();
        for (hb, block_h) in hd.blocks.iter().enumerate() {
            let block: Vec<Vertex> = block_h.iter().map(|&w| h.new_to_old[w]).collect();
            let mut h_cut_vertices: Vec<Vertex> =
                hd.cut_vertices_of(hb).iter().map(|&w| h.new_to_old[w]).collect();
            h_cut_vertices.sort_unstable();
            let mut leaf_simplicials = Vec::new();
            let mut leaf_count = 0;
            let mut leaf_count_at_h_cut = 0;
            let mut leaf_simplicials_at_h_cut = Vec::new();
            for &lb in &d.leaf_blocks {
                let shared: Vec<Vertex> = d.blocks[lb]
                    .iter()
                    .copied()
                    .filter(|w| block.binary_search(w).is_ok())
                    .collect();
                if shared.len() == 1 {
                    leaf_count += 1;
                    let members = d.blocks[lb].iter().copied().filter(|&w| simplicial[w]);
                    if h_cut_vertices.contains(&shared[0]) {
                        leaf_count_at_h_cut += 1;
                        leaf_simplicials_at_h_cut.extend(members.clone());
                    }
                    leaf_simplicials.extend(members);
                }
            }
            leaf_simplicials.sort_unstable();
            leaf_simplicials_at_h_cut.sort_unstable();
            let has_simplicial = block.iter().any(|&w| simplicial[w]);
            entries.push(LedgerEntry {
                block,
                h_cut_vertices,
                leaf_simplicials,
                leaf_count,
                leaf_count_at_h_cut,
                leaf_simplicials_at_h_cut,
                has_simplicial,
            });
        }
    }
    Ok(LeafBlockLedger {
        h_vertices: h.new_to_old,
        entries,
    })
}

// ---------------------------------------------------------------------------
// Tree-width

/// Exact tree-width by dynamic programming over vertex subsets
/// (`TW(S) = min_v max(TW(S - v), |Q(S - v, v)|)`), for small graphs.
pub fn treewidth_exact(g: &Graph) -> Result<usize, ParamError> {
    let n = g.n();
    if n > TREEWIDTH_MAX_N {
        return Err(ParamError::TooLarge {
            what: "exact tree-width",
            n,
            cap: TREEWIDTH_MAX_N,
        });
    }
    if n == 0 {
        return Ok(0);
    }
    let full = (1u32 << n) - 1;
    let adj: Vec<u32> = (0..n).map(|v| g.mask(v) as u32).collect();
    // Vertices outside S + v reachable from v through S.
    let q = |s: u32, v: usize| -> u32 {
        let mut seen = 1u32 << v;
        let mut frontier = 1u32 << v;
        let mut reached = 0u32;
        while frontier != 0 {
            let mut next = 0;
            for u in BitIter(frontier as u64) {
                next |= adj[u];
            }
            next &= !seen;
            seen |= next;
            reached |= next & !s;
            frontier = next & s;
        }
        reached & !(1 << v)
    };
    let mut tw = vec![i32::MAX; 1 << n];
    tw[0] = i32::MIN;
    for s in 1..=full {
        let mut best = i32::MAX;
        for v in BitIter(s as u64) {
            let rest = s & !(1 << v);
            let value = tw[rest as usize].max(q(rest, v).count_ones() as i32);
            best = best.min(value);
        }
        tw[s as usize] = best;
    }
    Ok(tw[full as usize].max(0) as usize)
}

// ---------------------------------------------------------------------------
// Parameter bundle

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphParams {
    pub n: usize,
    pub m: usize,
    pub delta_max: usize,
    pub delta_min: usize,
    pub diameter: usize,
    pub edge_connectivity: usize,
    pub independence_number: usize,
    pub is_regular: bool,
}

impl GraphParams {
    /// `n * Delta - 2m`, the total degree deficit.
    pub fn degree_deficit(&self) -> usize {
        self.n * self.delta_max - 2 * self.m
    }
}

/// Every nonspectral parameter of a connected graph. The independence number
/// uses branch and bound up to [`MIS_MAX_N`] vertices and the leaf-block
/// recursion beyond that, which only applies to block graphs.
pub fn graph_params(g: &Graph) -> Result<GraphParams, ParamError> {
    require_connected(g)?;
    let diameter = match g.diameter() {
        Diameter::Finite(d) => d,
        Diameter::Infinite => return Err(GraphError::Disconnected.into()),
    };
    let edge_connectivity = if g.n() >= 2 { edge_connectivity(g)? } else { 0 };
    let independence_number = if g.n() <= MIS_MAX_N {
        independence_number_bruteforce(g)?
    } else {
        independence_number_blockgraph(g).map_err(|e| match e {
            ParamError::NotBlockGraph => ParamError::TooLarge {
                what: "exact independence number",
                n: g.n(),
                cap: MIS_MAX_N,
            },
            other => other,
        })?
    };
    Ok(GraphParams {
        n: g.n(),
        m: g.m(),
        delta_max: g.max_degree(),
        delta_min: g.min_degree(),
        diameter,
        edge_connectivity,
        independence_number,
        is_regular: g.is_regular(),
    })
}
