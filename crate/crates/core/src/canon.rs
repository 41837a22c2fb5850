//! Canonical labelling for small graphs (n <= 64).
//!
//! The canonical form is the relabelling whose upper-triangle adjacency bit
//! string (graph6 order) is lexicographically smallest among the labellings
//! reachable from an isomorphism-invariant search tree: vertices are first
//! split by iterated degree refinement, then non-singleton cells are
//! individualised one vertex at a time. Twins inside a cell are
//! interchangeable, so only one vertex per twin class is branched on.

use crate::graph::{Graph, Vertex};
use crate::graph6;

/// Largest graph the canonical labeller accepts.
pub const MAX_CANON_N: usize = 64;

type Cells = Vec<Vec<Vertex>>;

fn refine(g: &Graph, mut cells: Cells) -> Cells {
    let n = g.n();
    loop {
        let masks: Vec<u64> = cells
            .iter()
            .map(|c| c.iter().fold(0u64, |m, &v| m | 1 << v))
            .collect();
        let mut next: Cells = Vec::with_capacity(n);
        for cell in &cells {
            if cell.len() == 1 {
                next.push(cell.clone());
                continue;
            }
            let mut keyed: Vec<(Vec<u8>, Vertex)> = cell
                .iter()
                .map(|&v| {
                    let nb = g.mask(v);
                    let sig = masks.iter().map(|&m| (nb & m).count_ones() as u8).collect();
                    (sig, v)
                })
                .collect();
            keyed.sort();
            let mut start = 0;
            for i in 1..=keyed.len() {
                if i == keyed.len() || keyed[i].0 != keyed[start].0 {
                    let mut part: Vec<Vertex> = keyed[start..i].iter().map(|(_, v)| *v).collect();
                    part.sort_unstable();
                    next.push(part);
                    start = i;
                }
            }
        }
        if next.len() == cells.len() {
            return next;
        }
        cells = next;
    }
}

fn leaf_key(g: &Graph, order: &[Vertex]) -> Vec<u64> {
    let n = order.len();
    let bits = n * n.saturating_sub(1) / 2;
    let mut key = vec![0u64; bits.div_ceil(64).max(1)];
    let mut k = 0;
    for j in 1..n {
        let row = g.mask(order[j]);
        for &oi in &order[..j] {
            if row >> oi & 1 == 1 {
                key[k / 64] |= 1 << (63 - k % 64);
            }
            k += 1;
        }
    }
    key
}

struct Search<'a> {
    g: &'a Graph,
    best: Option<(Vec<u64>, Vec<Vertex>)>,
}

impl Search<'_> {
    fn run(&mut self, cells: Cells) {
        let Some(c) = cells.iter().position(|cell| cell.len() > 1) else {
            let order: Vec<Vertex> = cells.iter().map(|cell| cell[0]).collect();
            let key = leaf_key(self.g, &order);
            if self.best.as_ref().is_none_or(|(b, _)| key < *b) {
                self.best = Some((key, order));
            }
            return;
        };
        let mut reps: Vec<Vertex> = Vec::new();
        for &v in &cells[c] {
            if reps.iter().all(|&r| !self.g.are_twins(r, v)) {
                reps.push(v);
            }
        }
        for v in reps {
            let mut next = Vec::with_capacity(cells.len() + 1);
            next.extend_from_slice(&cells[..c]);
            next.push(vec![v]);
            next.push(cells[c].iter().copied().filter(|&w| w != v).collect());
            next.extend_from_slice(&cells[c + 1..]);
            let next = refine(self.g, next);
            self.run(next);
        }
    }
}

/// Canonical key and the canonical order (position -> old vertex).
fn canonical_order(g: &Graph) -> (Vec<u64>, Vec<Vertex>) {
    let n = g.n();
    assert!(n <= MAX_CANON_N, "canonical labelling supports n <= {MAX_CANON_N}");
    if n == 0 {
        return (vec![0], Vec::new());
    }
    let start = refine(g, vec![(0..n).collect()]);
    let mut search = Search { g, best: None };
    search.run(start);
    search.best.expect("search tree has a leaf")
}

fn invert(order: &[Vertex]) -> Vec<Vertex> {
    let mut perm = vec![0; order.len()];
    for (new, &old) in order.iter().enumerate() {
        perm[old] = new;
    }
    perm
}

/// Canonical labelling as a map old vertex -> new vertex.
pub fn canonical_labeling(g: &Graph) -> Vec<Vertex> {
    invert(&canonical_order(g).1)
}

/// Canonical key together with the canonical form, from a single search.
pub fn canonize(g: &Graph) -> ((usize, Vec<u64>), Graph) {
    let (key, order) = canonical_order(g);
    ((g.n(), key), g.permuted(&invert(&order)))
}

pub fn canonical_form(g: &Graph) -> Graph {
    g.permuted(&canonical_labeling(g))
}

/// graph6 string of the canonical form.
pub fn canonical_string(g: &Graph) -> String {
    graph6::encode(&canonical_form(g))
}

/// Compact hashable key of the canonical form.
pub fn canonical_key(g: &Graph) -> (usize, Vec<u64>) {
    (g.n(), canonical_order(g).0)
}

pub fn is_isomorphic(a: &Graph, b: &Graph) -> bool {
    a.n() == b.n()
        && a.m() == b.m()
        && {
            let mut da = a.degrees().to_vec();
            let mut db = b.degrees().to_vec();
            da.sort_unstable();
            db.sort_unstable();
            da == db
        }
        && canonical_key(a) == canonical_key(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn relabel_reversed(g: &Graph) -> Graph {
        let n = g.n();
        g.permuted(&(0..n).rev().collect::<Vec<_>>())
    }

    #[test]
    fn isomorphic_copies_agree() {
        let g = Graph::from_edges(6, [(0, 1), (1, 2), (2, 3), (3, 4), (1, 5), (5, 3)]).unwrap();
        let h = relabel_reversed(&g);
        assert_eq!(canonical_string(&g), canonical_string(&h));
        assert!(is_isomorphic(&g, &h));
    }

    #[test]
    fn path_and_star_differ() {
        assert!(!is_isomorphic(&Graph::path(4), &Graph::star(4)));
        assert_ne!(canonical_string(&Graph::path(4)), canonical_string(&Graph::star(4)));
    }

    #[test]
    fn symmetric_graphs_are_fast() {
        // Twin pruning keeps these to a handful of leaves.
        let k = canonical_form(&Graph::complete(40));
        assert_eq!(k, Graph::complete(40));
        let s = canonical_form(&Graph::star(60));
        assert_eq!(s.m(), 59);
        let c = canonical_string(&Graph::cycle(12));
        assert_eq!(c, canonical_string(&relabel_reversed(&Graph::cycle(12))));
    }

    #[test]
    fn cospectral_pair_is_distinguished() {
        // K_{1,4} and C4 + K1 share a spectrum but are not isomorphic.
        let star = Graph::star(5);
        let c4k1 = Graph::from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert!(!is_isomorphic(&star, &c4k1));
    }
}
