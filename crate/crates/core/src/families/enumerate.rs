//! Exhaustive generation of small graph families, one graph per isomorphism
//! class.
//!
//! Every family here is closed under deleting a suitable vertex (a leaf, a
//! simplicial vertex of a leaf block, the last vertex of a k-tree
//! construction, a pendant vertex or twin), so level `n` is generated by
//! one-vertex extensions of the representatives at level `n - 1` and
//! deduplicated by canonical form. Level `n - 1` is materialized; level `n` is
//! streamed.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use super::FamilyError;
use crate::blocks::decompose_blocks;
use crate::canon::canonize;
use crate::graph::{Graph, Vertex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Family {
    AllConnected,
    Block,
    KTree(usize),
    DistanceHereditary,
    Tree,
}

impl Family {
    pub fn cap(self) -> usize {
        match self {
            Family::AllConnected | Family::DistanceHereditary => 9,
            Family::Block | Family::KTree(_) | Family::Tree => 11,
        }
    }

    /// Children of `parent` on one more vertex, possibly with repeats.
    fn extensions(self, parent: &Graph) -> Vec<Vec<Vertex>> {
        let n = parent.n();
        match self {
            Family::AllConnected => (1u64..1 << n)
                .map(|s| (0..n).filter(|&v| s >> v & 1 == 1).collect())
                .collect(),
            Family::Tree => (0..n).map(|v| vec![v]).collect(),
            Family::Block => {
                let mut out: Vec<Vec<Vertex>> = (0..n).map(|v| vec![v]).collect();
                if n >= 2 {
                    let d = decompose_blocks(parent).expect("block graphs are connected");
                    out.extend(d.blocks);
                }
                out
            }
            Family::KTree(k) => k_cliques(parent, k),
            Family::DistanceHereditary => {
                let mut out = Vec::new();
                for v in 0..n {
                    let open: Vec<Vertex> = parent.neighbors(v).collect();
                    let mut closed = open.clone();
                    closed.push(v);
                    out.push(vec![v]);
                    out.push(closed);
                    if !open.is_empty() {
                        out.push(open);
                    }
                }
                out
            }
        }
    }

    fn base(self) -> (usize, Graph) {
        match self {
            Family::KTree(k) => (k, Graph::complete(k)),
            _ => (1, Graph::empty(1)),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::AllConnected => f.write_str("connected"),
            Family::Block => f.write_str("block"),
            Family::KTree(k) => write!(f, "ktree({k})"),
            Family::DistanceHereditary => f.write_str("dh"),
            Family::Tree => f.write_str("tree"),
        }
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Family, String> {
        match s {
            "connected" | "all-connected" => Ok(Family::AllConnected),
            "block" => Ok(Family::Block),
            "dh" => Ok(Family::DistanceHereditary),
            "tree" => Ok(Family::Tree),
            _ => {
                let k = s
                    .strip_prefix("ktree(")
                    .and_then(|r| r.strip_suffix(')'))
                    .or_else(|| s.strip_prefix("ktree"))
                    .and_then(|k| k.parse().ok())
                    .ok_or_else(|| format!("unknown family {s:?}"))?;
                Ok(Family::KTree(k))
            }
        }
    }
}

fn k_cliques(g: &Graph, k: usize) -> Vec<Vec<Vertex>> {
    fn grow(g: &Graph, k: usize, current: &mut Vec<Vertex>, from: Vertex, out: &mut Vec<Vec<Vertex>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for v in from..g.n() {
            if current.iter().all(|&u| g.has_edge(u, v)) {
                current.push(v);
                grow(g, k, current, v + 1, out);
                current.pop();
            }
        }
    }
    let mut out = Vec::new();
    grow(g, k, &mut Vec::new(), 0, &mut out);
    out
}

/// Lazily yields the non-isomorphic members of a family on `n` vertices, in
/// canonical form, in a fixed order.
pub struct FamilyStream {
    family: Family,
    parents: std::vec::IntoIter<Graph>,
    pending: std::vec::IntoIter<Graph>,
    seen: HashSet<(usize, Vec<u64>)>,
}

impl Iterator for FamilyStream {
    type Item = Graph;

    fn next(&mut self) -> Option<Graph> {
        loop {
            if let Some(g) = self.pending.next() {
                return Some(g);
            }
            let parent = self.parents.next()?;
            let children: Vec<((usize, Vec<u64>), Graph)> = self
                .family
                .extensions(&parent)
                .into_par_iter()
                .map(|attach| canonize(&parent.with_vertex(attach)))
                .collect();
            let mut fresh = Vec::new();
            for (key, form) in children {
                if self.seen.insert(key) {
                    fresh.push(form);
                }
            }
            self.pending = fresh.into_iter();
        }
    }
}

/// Streams one representative of every isomorphism class of the family on
/// `n` vertices.
pub fn enumerate_family(n: usize, family: Family) -> Result<FamilyStream, FamilyError> {
    let cap = family.cap();
    if n == 0 || n > cap {
        return Err(FamilyError::EnumerationCap {
            family: family.to_string(),
            n,
            cap,
        });
    }
    let empty = FamilyStream {
        family,
        parents: Vec::new().into_iter(),
        pending: Vec::new().into_iter(),
        seen: HashSet::new(),
    };
    if family == Family::KTree(0) {
        return Ok(empty);
    }
    let (base_n, base) = family.base();
    if n < base_n {
        return Ok(empty);
    }
    if n == base_n {
        return Ok(FamilyStream {
            pending: vec![base].into_iter(),
            ..empty
        });
    }
    let parents: Vec<Graph> = enumerate_family(n - 1, family)?.collect();
    Ok(FamilyStream {
        parents: parents.into_iter(),
        ..empty
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count(n: usize, f: Family) -> usize {
        enumerate_family(n, f).unwrap().count()
    }

    #[test]
    fn trees_on_five_vertices() {
        assert_eq!(count(5, Family::Tree), 3);
    }

    #[test]
    fn connected_on_four_vertices() {
        assert_eq!(count(4, Family::AllConnected), 6);
    }

    #[test]
    fn one_trees_are_trees() {
        for n in 1..=9 {
            let a: Vec<String> = enumerate_family(n, Family::Tree).unwrap().map(|g| g.to_string()).collect();
            let b: Vec<String> = enumerate_family(n, Family::KTree(1)).unwrap().map(|g| g.to_string()).collect();
            let (mut a, mut b) = (a, b);
            a.sort();
            b.sort();
            assert_eq!(a, b, "n = {n}");
        }
    }

    #[test]
    fn caps_are_enforced() {
        assert!(enumerate_family(10, Family::AllConnected).is_err());
        assert!(enumerate_family(12, Family::Tree).is_err());
        assert!(enumerate_family(0, Family::Tree).is_err());
    }

    #[test]
    fn ktree_below_k_is_empty() {
        assert_eq!(count(2, Family::KTree(3)), 0);
        assert_eq!(count(3, Family::KTree(3)), 1);
    }

    #[test]
    fn family_names_parse() {
        assert_eq!("ktree(2)".parse::<Family>(), Ok(Family::KTree(2)));
        assert_eq!("ktree3".parse::<Family>(), Ok(Family::KTree(3)));
        assert_eq!("dh".parse::<Family>(), Ok(Family::DistanceHereditary));
        assert!("cactus".parse::<Family>().is_err());
    }
}
