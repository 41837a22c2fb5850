use serde::Serialize;

use super::FamilyError;
use crate::blocks::decompose_blocks;
use crate::graph::{Graph, GraphError, Vertex};

/// Construction sequence of a k-tree: start from the clique `base`, then add
/// each step's vertex adjacent to its (k-clique) attachment set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KTreeCertificate {
    pub k: usize,
    pub base: Vec<Vertex>,
    pub steps: Vec<(Vertex, Vec<Vertex>)>,
}

impl KTreeCertificate {
    /// Rebuilds the graph on `n` vertices described by the certificate,
    /// checking that every attachment set is a k-clique of the graph so far.
    pub fn replay(&self, n: usize) -> Option<Graph> {
        let mut present = vec![false; n];
        let mut edges = Vec::new();
        for (i, &u) in self.base.iter().enumerate() {
            present[u] = true;
            for &v in &self.base[i + 1..] {
                edges.push((u, v));
            }
        }
        let mut g = Graph::from_edges(n, edges.iter().copied()).ok()?;
        for (v, attach) in &self.steps {
            if present[*v] || attach.len() != self.k || attach.iter().any(|&a| !present[a]) {
                return None;
            }
            if !g.is_clique(attach) {
                return None;
            }
            present[*v] = true;
            for &a in attach {
                g = g.with_edge(a, *v).ok()?;
            }
        }
        present.iter().all(|&p| p).then_some(g)
    }
}

/// Recognizes k-trees by repeatedly deleting a simplicial vertex of degree
/// exactly `k` until `K_k` remains. Returns the construction certificate.
pub fn recognize_ktree(g: &Graph, k: usize) -> Option<KTreeCertificate> {
    let n = g.n();
    if k == 0 || n < k {
        return None;
    }
    if 2 * g.m() != k * (k - 1) + 2 * (n - k) * k {
        return None;
    }
    let mut alive = vec![true; n];
    let mut removed = Vec::new();
    for _ in k..n {
        let next = (0..n).find_map(|v| {
            if !alive[v] {
                return None;
            }
            let nb: Vec<Vertex> = g.neighbors(v).filter(|&w| alive[w]).collect();
            (nb.len() == k && g.is_clique(&nb)).then_some((v, nb))
        });
        let (v, nb) = next?;
        alive[v] = false;
        removed.push((v, nb));
    }
    let base: Vec<Vertex> = (0..n).filter(|&v| alive[v]).collect();
    if !g.is_clique(&base) {
        return None;
    }
    removed.reverse();
    Some(KTreeCertificate {
        k,
        base,
        steps: removed,
    })
}

/// One deletion in a distance-hereditary pruning sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PruneStep {
    Pendant { vertex: Vertex, anchor: Vertex },
    TrueTwin { vertex: Vertex, twin: Vertex },
    FalseTwin { vertex: Vertex, twin: Vertex },
}

/// Recognizes distance-hereditary graphs by pruning pendant vertices and
/// twins. A connected graph is distance-hereditary exactly when this pruning
/// reaches a single vertex; the returned sequence lists the deletions.
pub fn recognize_distance_hereditary(g: &Graph) -> Result<Option<Vec<PruneStep>>, FamilyError> {
    if g.n() == 0 {
        return Err(GraphError::Empty.into());
    }
    if !g.is_connected() {
        return Err(GraphError::Disconnected.into());
    }
    let n = g.n();
    let words = g.row(0).len();
    let mut alive = vec![0u64; words];
    for v in 0..n {
        alive[v / 64] |= 1 << (v % 64);
    }
    let masked = |v: Vertex, alive: &[u64]| -> Vec<u64> {
        g.row(v).iter().zip(alive).map(|(a, b)| a & b).collect()
    };
    let without = |mut row: Vec<u64>, v: Vertex| {
        row[v / 64] &= !(1 << (v % 64));
        row
    };
    let mut steps = Vec::new();
    for _ in 1..n {
        let live: Vec<Vertex> = (0..n).filter(|&v| alive[v / 64] >> (v % 64) & 1 == 1).collect();
        let rows: Vec<Vec<u64>> = live.iter().map(|&v| masked(v, &alive)).collect();
        let mut step = None;
        for (i, &v) in live.iter().enumerate() {
            let deg: u32 = rows[i].iter().map(|w| w.count_ones()).sum();
            if deg == 1 {
                let anchor = g.neighbors(v).find(|&w| alive[w / 64] >> (w % 64) & 1 == 1).unwrap();
                step = Some(PruneStep::Pendant { vertex: v, anchor });
                break;
            }
        }
        if step.is_none() {
            'pairs: for (i, &u) in live.iter().enumerate() {
                for (j, &v) in live.iter().enumerate().skip(i + 1) {
                    if without(rows[i].clone(), v) == without(rows[j].clone(), u) {
                        step = Some(if g.has_edge(u, v) {
                            PruneStep::TrueTwin { vertex: v, twin: u }
                        } else {
                            PruneStep::FalseTwin { vertex: v, twin: u }
                        });
                        break 'pairs;
                    }
                }
            }
        }
        let Some(step) = step else {
            return Ok(None);
        };
        let v = match step {
            PruneStep::Pendant { vertex, .. }
            | PruneStep::TrueTwin { vertex, .. }
            | PruneStep::FalseTwin { vertex, .. } => vertex,
        };
        alive[v / 64] &= !(1 << (v % 64));
        steps.push(step);
    }
    Ok(Some(steps))
}

/// Block graphs: connected graphs whose blocks are all complete.
pub fn recognize_block_graph(g: &Graph) -> Result<bool, FamilyError> {
    let d = decompose_blocks(g)?;
    Ok(d.blocks.iter().all(|b| g.is_clique(b)))
}

pub fn is_tree(g: &Graph) -> bool {
    g.n() >= 1 && g.m() + 1 == g.n() && g.is_connected()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{pineapple, s_knk};

    #[test]
    fn triangle_is_2tree() {
        let cert = recognize_ktree(&Graph::complete(3), 2).unwrap();
        assert_eq!(cert.replay(3).unwrap(), Graph::complete(3));
    }

    #[test]
    fn c4_is_not_2tree() {
        assert!(recognize_ktree(&Graph::cycle(4), 2).is_none());
    }

    #[test]
    fn split_2_3_is_2tree() {
        let g = s_knk(5, 2).unwrap();
        let cert = recognize_ktree(&g, 2).unwrap();
        assert_eq!(cert.replay(5).unwrap(), g);
        assert!(recognize_ktree(&g, 1).is_none());
        assert!(recognize_ktree(&g, 3).is_none());
    }

    #[test]
    fn trees_are_1trees() {
        let cert = recognize_ktree(&Graph::path(6), 1).unwrap();
        assert_eq!(cert.replay(6).unwrap(), Graph::path(6));
        assert!(recognize_ktree(&Graph::cycle(6), 1).is_none());
    }

    #[test]
    fn bad_certificate_fails_replay() {
        let cert = KTreeCertificate {
            k: 2,
            base: vec![0, 1],
            steps: vec![(2, vec![0, 1]), (3, vec![0, 3])],
        };
        assert!(cert.replay(4).is_none());
    }

    #[test]
    fn dh_trees_and_cycles() {
        assert!(recognize_distance_hereditary(&Graph::path(7)).unwrap().is_some());
        assert!(recognize_distance_hereditary(&Graph::star(7)).unwrap().is_some());
        assert!(recognize_distance_hereditary(&Graph::cycle(4)).unwrap().is_some());
        assert!(recognize_distance_hereditary(&Graph::cycle(5)).unwrap().is_none());
        assert!(recognize_distance_hereditary(&Graph::cycle(6)).unwrap().is_none());
        let disconnected = Graph::from_edges(3, [(0, 1)]).unwrap();
        assert!(recognize_distance_hereditary(&disconnected).is_err());
    }

    #[test]
    fn dh_pruning_sequence_length() {
        let steps = recognize_distance_hereditary(&Graph::complete(5)).unwrap().unwrap();
        assert_eq!(steps.len(), 4);
        assert!(steps[..3].iter().all(|s| matches!(s, PruneStep::TrueTwin { .. })));
        assert!(matches!(steps[3], PruneStep::Pendant { .. }));
    }

    #[test]
    fn block_graphs() {
        assert!(recognize_block_graph(&Graph::path(5)).unwrap());
        assert!(recognize_block_graph(&pineapple(7, 3).unwrap()).unwrap());
        assert!(!recognize_block_graph(&Graph::cycle(4)).unwrap());
        assert!(recognize_block_graph(&Graph::complete(4)).unwrap());
    }

    #[test]
    fn noncomplete_block_graph_is_dh() {
        let g = pineapple(8, 4).unwrap();
        assert!(recognize_distance_hereditary(&g).unwrap().is_some());
    }
}
