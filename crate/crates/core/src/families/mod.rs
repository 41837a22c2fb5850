//! Graph families: constructions of the extremal graphs, recognizers, and
//! exhaustive enumeration up to isomorphism.

mod enumerate;
mod recognize;

pub use enumerate::{enumerate_family, Family, FamilyStream};
pub use recognize::{
    is_tree, recognize_block_graph, recognize_distance_hereditary, recognize_ktree,
    KTreeCertificate, PruneStep,
};

use serde::Serialize;
use thiserror::Error;

use crate::graph::{Graph, GraphError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FamilyError {
    #[error("pineapple needs 1 <= alpha <= n - 1, got n = {n}, alpha = {alpha}")]
    PineappleRange { n: usize, alpha: usize },
    #[error("S_(k,n-k) needs 1 <= k <= n, got n = {n}, k = {k}")]
    SplitRange { n: usize, k: usize },
    #[error("enumeration of {family} is capped at n = {cap}, got n = {n}")]
    EnumerationCap { family: String, n: usize, cap: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// The pineapple `P_q^p`: a clique on `q` vertices and `p` independent
/// vertices all adjacent to the same clique vertex.
///
/// Vertex 0 is the hub, `1..q` the rest of the clique, `q..q+p` the pendants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PineappleSpec {
    pub q: usize,
    pub p: usize,
}

impl PineappleSpec {
    /// The block-graph extremal instance `P_{n-alpha+1}^{alpha-1}`.
    pub fn for_independence(n: usize, alpha: usize) -> Result<PineappleSpec, FamilyError> {
        // K_1 is the one graph whose independence number equals its order.
        let in_range = alpha >= 1 && (alpha < n || n == 1 && alpha == 1);
        if !in_range {
            return Err(FamilyError::PineappleRange { n, alpha });
        }
        Ok(PineappleSpec {
            q: n - alpha + 1,
            p: alpha - 1,
        })
    }

    pub fn graph(&self) -> Graph {
        let n = self.q + self.p;
        let mut edges = Vec::new();
        for u in 0..self.q {
            for v in u + 1..self.q {
                edges.push((u, v));
            }
        }
        for v in self.q..n {
            edges.push((0, v));
        }
        Graph::from_edges(n, edges).expect("pineapple edges are valid")
    }
}

/// `P_{n-alpha+1}^{alpha-1}`, the connected block graph on `n` vertices with
/// independence number `alpha` of largest spectral radius.
pub fn pineapple(n: usize, alpha: usize) -> Result<Graph, FamilyError> {
    Ok(PineappleSpec::for_independence(n, alpha)?.graph())
}

/// The split graph `S_{k,n-k}`: clique `0..k` completely joined to the
/// independent set `k..n`.
pub fn s_knk(n: usize, k: usize) -> Result<Graph, FamilyError> {
    if k == 0 || k > n {
        return Err(FamilyError::SplitRange { n, k });
    }
    let mut edges = Vec::new();
    for u in 0..k {
        for v in u + 1..n {
            edges.push((u, v));
        }
    }
    Ok(Graph::from_edges(n, edges)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::is_isomorphic;
    use crate::params::independence_number_bruteforce;

    #[test]
    fn pineapple_alpha_one_is_complete() {
        assert_eq!(pineapple(5, 1).unwrap(), Graph::complete(5));
    }

    #[test]
    fn pineapple_max_alpha_is_star() {
        for n in 3..10 {
            assert!(is_isomorphic(&pineapple(n, n - 1).unwrap(), &Graph::star(n)));
        }
    }

    #[test]
    fn pineapple_5_3() {
        let g = pineapple(5, 3).unwrap();
        assert_eq!(g.m(), 3 + 2);
        assert_eq!(g.degree(0), 4);
        assert_eq!(independence_number_bruteforce(&g).unwrap(), 3);
    }

    #[test]
    fn pineapple_range() {
        assert!(pineapple(5, 5).is_err());
        assert!(pineapple(5, 0).is_err());
        assert_eq!(pineapple(1, 1).unwrap(), Graph::empty(1));
    }

    #[test]
    fn split_graph_extremes() {
        for n in 2..9 {
            assert!(is_isomorphic(&s_knk(n, 1).unwrap(), &Graph::star(n)));
            assert_eq!(s_knk(n, n).unwrap(), Graph::complete(n));
        }
        assert!(s_knk(4, 0).is_err());
        assert!(s_knk(4, 5).is_err());
    }

    #[test]
    fn split_graph_is_ktree() {
        assert!(recognize_ktree(&s_knk(5, 2).unwrap(), 2).is_some());
    }
}
