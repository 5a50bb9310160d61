//! Ordinary graphs on the index set [k] = {1, .., k}.
//!
//! These stay tiny (k is a uniformity, rarely above 5) and carry the
//! combinatorial side conditions of the gadget machinery: G_sigma is a
//! disjoint union of paths, gadget bookkeeping subtracts edge sets, and
//! the auxiliary graph of the fractional argument is tested for
//! bipartiteness.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// An undirected simple graph on vertices 1..=k.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KGraph {
    k: usize,
    edges: BTreeSet<(u8, u8)>,
}

impl std::fmt::Debug for KGraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "KGraph(k={}, edges={:?})", self.k, self.edges)
    }
}

impl KGraph {
    pub fn new(k: usize) -> KGraph {
        KGraph { k, edges: BTreeSet::new() }
    }

    pub fn from_edges<I: IntoIterator<Item = (u8, u8)>>(k: usize, edges: I) -> Result<KGraph> {
        let mut g = KGraph::new(k);
        for (a, b) in edges {
            g.add_edge(a, b)?;
        }
        Ok(g)
    }

    /// The path v[0] - v[1] - ... - v[last].
    pub fn path(k: usize, verts: &[u8]) -> Result<KGraph> {
        let mut g = KGraph::new(k);
        for w in verts.windows(2) {
            g.add_edge(w[0], w[1])?;
        }
        Ok(g)
    }

    pub fn complete(k: usize) -> KGraph {
        let mut g = KGraph::new(k);
        for a in 1..=k as u8 {
            for b in a + 1..=k as u8 {
                g.add_edge(a, b).unwrap();
            }
        }
        g
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn add_edge(&mut self, a: u8, b: u8) -> Result<()> {
        if a == 0 || b == 0 || a as usize > self.k || b as usize > self.k {
            return Err(Error::invalid(format!("edge ({a},{b}) outside 1..={}", self.k)));
        }
        if a == b {
            return Err(Error::invalid(format!("loop at {a}")));
        }
        self.edges.insert((a.min(b), a.max(b)));
        Ok(())
    }

    pub fn has_edge(&self, a: u8, b: u8) -> bool {
        self.edges.contains(&(a.min(b), a.max(b)))
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as (min, max) pairs in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (u8, u8)> + '_ {
        self.edges.iter().copied()
    }

    pub fn degree(&self, v: u8) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    /// Edge-set difference (vertex set unchanged).
    pub fn minus(&self, other: &KGraph) -> KGraph {
        KGraph { k: self.k, edges: self.edges.difference(&other.edges).copied().collect() }
    }

    pub fn union(&self, other: &KGraph) -> KGraph {
        KGraph { k: self.k, edges: self.edges.union(&other.edges).copied().collect() }
    }

    pub fn contains(&self, other: &KGraph) -> bool {
        other.edges.is_subset(&self.edges)
    }

    /// True iff every component is a path (max degree <= 2, no cycles).
    pub fn is_disjoint_paths(&self) -> bool {
        if (1..=self.k as u8).any(|v| self.degree(v) > 2) {
            return false;
        }
        // acyclic check per component via union-find
        let mut parent: Vec<usize> = (0..=self.k).collect();
        fn find(parent: &mut Vec<usize>, x: usize) -> usize {
            if parent[x] != x {
                let r = find(parent, parent[x]);
                parent[x] = r;
            }
            parent[x]
        }
        for &(a, b) in &self.edges {
            let (ra, rb) = (find(&mut parent, a as usize), find(&mut parent, b as usize));
            if ra == rb {
                return false;
            }
            parent[ra] = rb;
        }
        true
    }

    /// Two-colourability via BFS over components.
    pub fn is_bipartite(&self) -> bool {
        let mut colour = vec![None::<bool>; self.k + 1];
        for start in 1..=self.k {
            if colour[start].is_some() {
                continue;
            }
            colour[start] = Some(false);
            let mut queue = vec![start as u8];
            while let Some(v) = queue.pop() {
                let cv = colour[v as usize].unwrap();
                for u in 1..=self.k as u8 {
                    if u != v && self.has_edge(v, u) {
                        match colour[u as usize] {
                            None => {
                                colour[u as usize] = Some(!cv);
                                queue.push(u);
                            }
                            Some(cu) if cu == cv => return false,
                            _ => {}
                        }
                    }
                }
            }
        }
        true
    }

    /// A proper 2-colouring if one exists (true/false classes).
    pub fn bipartition(&self) -> Option<Vec<bool>> {
        let mut colour = vec![None::<bool>; self.k + 1];
        for start in 1..=self.k {
            if colour[start].is_some() {
                continue;
            }
            colour[start] = Some(false);
            let mut queue = vec![start as u8];
            while let Some(v) = queue.pop() {
                let cv = colour[v as usize].unwrap();
                for u in 1..=self.k as u8 {
                    if u != v && self.has_edge(v, u) {
                        match colour[u as usize] {
                            None => {
                                colour[u as usize] = Some(!cv);
                                queue.push(u);
                            }
                            Some(cu) if cu == cv => return None,
                            _ => {}
                        }
                    }
                }
            }
        }
        Some((1..=self.k).map(|v| colour[v].unwrap()).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn paths_and_cycles() {
        let p = KGraph::path(4, &[3, 2, 1]).unwrap();
        assert!(p.is_disjoint_paths());
        assert_eq!(p.edge_count(), 2);
        let mut c = p.clone();
        c.add_edge(1, 3).unwrap();
        assert!(!c.is_disjoint_paths());
        assert!(!c.is_bipartite()); // triangle
    }

    #[test]
    fn bipartite_detection() {
        let even = KGraph::from_edges(4, vec![(1, 2), (2, 3), (3, 4), (4, 1)]).unwrap();
        assert!(even.is_bipartite());
        assert!(even.bipartition().is_some());
        let odd = KGraph::from_edges(3, vec![(1, 2), (2, 3), (3, 1)]).unwrap();
        assert!(!odd.is_bipartite());
        assert!(odd.bipartition().is_none());
    }

    #[test]
    fn set_operations() {
        let a = KGraph::from_edges(3, vec![(1, 2), (2, 3)]).unwrap();
        let b = KGraph::from_edges(3, vec![(2, 3)]).unwrap();
        assert!(a.contains(&b));
        assert_eq!(a.minus(&b).edge_count(), 1);
        assert_eq!(a.union(&b), a);
        assert!(KGraph::new(3).is_disjoint_paths());
    }

    #[test]
    fn rejects_bad_edges() {
        let mut g = KGraph::new(3);
        assert!(g.add_edge(0, 1).is_err());
        assert!(g.add_edge(1, 4).is_err());
        assert!(g.add_edge(2, 2).is_err());
    }
}
