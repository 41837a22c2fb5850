//! Block / cut-vertex decomposition (Hopcroft-Tarjan low-link).

use serde::Serialize;

use crate::graph::{Graph, GraphError, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockDecomposition {
    /// Vertex sets of the blocks, each sorted; the list is sorted too.
    pub blocks: Vec<Vec<Vertex>>,
    pub cut_vertices: Vec<Vertex>,
    /// Indices into `blocks` of the blocks holding exactly one cut vertex.
    pub leaf_blocks: Vec<usize>,
    pub simplicial_vertices: Vec<Vertex>,
    /// Simplicial vertices lying in some leaf block.
    pub leaf_simplicials: Vec<Vertex>,
}

impl BlockDecomposition {
    pub fn is_cut_vertex(&self, v: Vertex) -> bool {
        self.cut_vertices.binary_search(&v).is_ok()
    }

    pub fn is_leaf_block(&self, b: usize) -> bool {
        self.leaf_blocks.binary_search(&b).is_ok()
    }

    /// Cut vertices inside block `b`.
    pub fn cut_vertices_of(&self, b: usize) -> Vec<Vertex> {
        self.blocks[b]
            .iter()
            .copied()
            .filter(|&v| self.is_cut_vertex(v))
            .collect()
    }

    /// Indices of the blocks containing `v`.
    pub fn blocks_containing(&self, v: Vertex) -> Vec<usize> {
        (0..self.blocks.len())
            .filter(|&b| self.blocks[b].binary_search(&v).is_ok())
            .collect()
    }
}

struct LowLink<'a> {
    g: &'a Graph,
    disc: Vec<usize>,
    low: Vec<usize>,
    timer: usize,
    stack: Vec<(Vertex, Vertex)>,
    blocks: Vec<Vec<Vertex>>,
    is_cut: Vec<bool>,
}

impl LowLink<'_> {
    fn visit(&mut self, u: Vertex, parent: Option<Vertex>) {
        self.timer += 1;
        self.disc[u] = self.timer;
        self.low[u] = self.timer;
        let mut children = 0;
        let neighbours: Vec<Vertex> = self.g.neighbors(u).collect();
        for v in neighbours {
            if self.disc[v] == 0 {
                children += 1;
                self.stack.push((u, v));
                self.visit(v, Some(u));
                self.low[u] = self.low[u].min(self.low[v]);
                if self.low[v] >= self.disc[u] {
                    if parent.is_some() || children > 1 {
                        self.is_cut[u] = true;
                    }
                    let mut block = Vec::new();
                    while let Some((a, b)) = self.stack.pop() {
                        block.push(a);
                        block.push(b);
                        if (a, b) == (u, v) {
                            break;
                        }
                    }
                    block.sort_unstable();
                    block.dedup();
                    self.blocks.push(block);
                }
            } else if Some(v) != parent && self.disc[v] < self.disc[u] {
                self.stack.push((u, v));
                self.low[u] = self.low[u].min(self.disc[v]);
            }
        }
    }
}

pub fn decompose_blocks(g: &Graph) -> Result<BlockDecomposition, GraphError> {
    if g.n() == 0 {
        return Err(GraphError::Empty);
    }
    if !g.is_connected() {
        return Err(GraphError::Disconnected);
    }
    let n = g.n();
    let mut ll = LowLink {
        g,
        disc: vec![0; n],
        low: vec![0; n],
        timer: 0,
        stack: Vec::new(),
        blocks: Vec::new(),
        is_cut: vec![false; n],
    };
    ll.visit(0, None);
    let mut blocks = ll.blocks;
    if n == 1 {
        blocks.push(vec![0]);
    }
    blocks.sort();
    let cut_vertices: Vec<Vertex> = (0..n).filter(|&v| ll.is_cut[v]).collect();
    let leaf_blocks: Vec<usize> = (0..blocks.len())
        .filter(|&b| blocks[b].iter().filter(|&&v| ll.is_cut[v]).count() == 1)
        .collect();
    let simplicial_vertices = g.simplicial_vertices();
    let mut in_leaf = vec![false; n];
    for &b in &leaf_blocks {
        for &v in &blocks[b] {
            in_leaf[v] = true;
        }
    }
    let leaf_simplicials = simplicial_vertices
        .iter()
        .copied()
        .filter(|&v| in_leaf[v])
        .collect();
    Ok(BlockDecomposition {
        blocks,
        cut_vertices,
        leaf_blocks,
        simplicial_vertices,
        leaf_simplicials,
    })
}
