//! Canonical k-uniform hypergraph representation.
//!
//! Vertices are `0..n`, edges are sorted k-subsets kept both as a lex-sorted
//! list (for deterministic iteration and the text format) and a hash set
//! (for O(1) membership). A [`WindowIndex`] gives the tight-path search its
//! fast path: for every (k-1)-set that lies in some edge, the vertices that
//! complete it.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// A k-uniform hypergraph on vertices `0..n`.
#[derive(Clone)]
pub struct Hypergraph {
    k: usize,
    n: usize,
    edges: Vec<Box<[u32]>>,
    index: HashSet<Box<[u32]>>,
    masks: OnceLock<Option<Vec<u64>>>,
}

impl PartialEq for Hypergraph {
    fn eq(&self, other: &Self) -> bool {
        self.k == other.k && self.n == other.n && self.edges == other.edges
    }
}
impl Eq for Hypergraph {}

impl std::fmt::Debug for Hypergraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Hypergraph(k={}, n={}, m={})", self.k, self.n, self.edges.len())
    }
}

/// Result of an exact minimum-degree computation at one level.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeProfile {
    pub level: usize,
    pub min_degree: usize,
    /// An i-set attaining the minimum (empty for level 0).
    pub argmin_set: Vec<u32>,
}

impl Hypergraph {
    /// Builds a graph from arbitrary edge lists; edges are sorted and
    /// de-duplicated, vertices are range-checked.
    pub fn new<I, E>(k: usize, n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = E>,
        E: AsRef<[u32]>,
    {
        if k == 0 {
            return Err(Error::invalid("uniformity k must be at least 1"));
        }
        let mut index: HashSet<Box<[u32]>> = HashSet::new();
        for e in edges {
            let mut e: Vec<u32> = e.as_ref().to_vec();
            e.sort_unstable();
            if e.len() != k {
                return Err(Error::BadArity { what: "edge size", got: e.len(), need: k });
            }
            if e.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::invalid(format!("edge {e:?} has a repeated vertex")));
            }
            if let Some(&v) = e.last() {
                if v as usize >= n {
                    return Err(Error::VertexOutOfRange { vertex: v, n });
                }
            }
            index.insert(e.into_boxed_slice());
        }
        let mut edges: Vec<Box<[u32]>> = index.iter().cloned().collect();
        edges.sort_unstable();
        Ok(Hypergraph { k, n, edges, index, masks: OnceLock::new() })
    }

    pub fn empty(k: usize, n: usize) -> Self {
        Hypergraph::new(k, n, std::iter::empty::<Vec<u32>>()).expect("empty graph is valid")
    }

    /// The complete k-graph on n vertices.
    pub fn complete(k: usize, n: usize) -> Self {
        let edges = combinations(n as u32, k);
        Hypergraph::new(k, n, edges).expect("complete graph is valid")
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges in lexicographic order, each sorted ascending.
    pub fn edges(&self) -> impl Iterator<Item = &[u32]> + '_ {
        self.edges.iter().map(|e| e.as_ref())
    }

    /// Membership test; `e` need not be sorted.
    pub fn has_edge(&self, e: &[u32]) -> bool {
        if e.len() != self.k {
            return false;
        }
        let mut probe: Vec<u32> = e.to_vec();
        probe.sort_unstable();
        self.index.contains(probe.as_slice())
    }

    /// Edge bitmasks, available when n <= 64. Built once on demand.
    pub(crate) fn edge_masks(&self) -> Option<&[u64]> {
        self.masks
            .get_or_init(|| {
                if self.n > 64 {
                    return None;
                }
                Some(self.edges.iter().map(|e| mask_of(e)).collect())
            })
            .as_deref()
    }

    /// deg(S): the number of edges containing S. Requires |S| < k.
    pub fn degree(&self, s: &[u32]) -> Result<usize> {
        if s.len() >= self.k {
            return Err(Error::BadArity { what: "degree set size", got: s.len(), need: self.k - 1 });
        }
        for &v in s {
            if v as usize >= self.n {
                return Err(Error::VertexOutOfRange { vertex: v, n: self.n });
            }
        }
        let mut sorted = s.to_vec();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::invalid(format!("degree set {s:?} has a repeated vertex")));
        }
        if let Some(masks) = self.edge_masks() {
            let sm = mask_of(&sorted);
            return Ok(masks.iter().filter(|&&em| em & sm == sm).count());
        }
        Ok(self.edges.iter().filter(|e| is_subset(&sorted, e)).count())
    }

    /// Exact minimum i-degree over all i-sets; level 0 is the edge count.
    pub fn min_degree(&self, level: usize) -> Result<DegreeProfile> {
        if level >= self.k {
            return Err(Error::LevelTooLarge { level, k: self.k });
        }
        if level == 0 {
            return Ok(DegreeProfile { level: 0, min_degree: self.edges.len(), argmin_set: vec![] });
        }
        let mut best: Option<(usize, Vec<u32>)> = None;
        for s in combinations(self.n as u32, level) {
            let d = self.degree(&s)?;
            if best.as_ref().map_or(true, |(b, _)| d < *b) {
                best = Some((d, s));
                if d == 0 {
                    break;
                }
            }
        }
        let (min_degree, argmin_set) =
            best.ok_or_else(|| Error::invalid("graph has no i-sets at this level"))?;
        Ok(DegreeProfile { level, min_degree, argmin_set })
    }

    /// The link (k-1)-graph of x: vertices V \ {x} relabelled to 0..n-1,
    /// edges N(x). Vertices above x shift down by one.
    pub fn link(&self, x: u32) -> Result<Hypergraph> {
        if x as usize >= self.n {
            return Err(Error::VertexOutOfRange { vertex: x, n: self.n });
        }
        let relabel = |v: u32| if v > x { v - 1 } else { v };
        let edges: Vec<Vec<u32>> = self
            .edges
            .iter()
            .filter(|e| e.contains(&x))
            .map(|e| e.iter().copied().filter(|&v| v != x).map(relabel).collect())
            .collect();
        Hypergraph::new(self.k - 1, self.n - 1, edges)
    }

    /// Induced subgraph on S, relabelled to 0..|S|. Returns the graph and
    /// the old-vertex-of-new-vertex map.
    pub fn induced(&self, s: &[u32]) -> Result<(Hypergraph, Vec<u32>)> {
        let mut old_of_new: Vec<u32> = s.to_vec();
        old_of_new.sort_unstable();
        old_of_new.dedup();
        for &v in &old_of_new {
            if v as usize >= self.n {
                return Err(Error::VertexOutOfRange { vertex: v, n: self.n });
            }
        }
        let mut new_of_old: HashMap<u32, u32> = HashMap::new();
        for (i, &v) in old_of_new.iter().enumerate() {
            new_of_old.insert(v, i as u32);
        }
        let edges: Vec<Vec<u32>> = self
            .edges
            .iter()
            .filter(|e| e.iter().all(|v| new_of_old.contains_key(v)))
            .map(|e| e.iter().map(|v| new_of_old[v]).collect())
            .collect();
        let g = Hypergraph::new(self.k, old_of_new.len(), edges)?;
        Ok((g, old_of_new))
    }

    /// H - G: removes the edges of `other` that are also edges of `self`.
    pub fn minus(&self, other: &Hypergraph) -> Hypergraph {
        let edges: Vec<&[u32]> = self
            .edges
            .iter()
            .map(|e| e.as_ref())
            .filter(|e| !(other.k == self.k && other.index.contains(*e)))
            .collect();
        Hypergraph::new(self.k, self.n, edges).expect("subset of valid edges")
    }

    /// Serialises to the "HG v1" text format: `k n m` then one edge per line.
    pub fn to_hg_string(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{} {} {}", self.k, self.n, self.edges.len()).unwrap();
        for e in &self.edges {
            let mut first = true;
            for v in e.iter() {
                if !first {
                    out.push(' ');
                }
                write!(out, "{v}").unwrap();
                first = false;
            }
            out.push('\n');
        }
        out
    }

    /// Parses the "HG v1" text format. Lines starting with '#' are comments.
    pub fn from_hg_str(text: &str) -> Result<Hypergraph> {
        let mut lines = text.lines().filter(|l| {
            let t = l.trim();
            !t.is_empty() && !t.starts_with('#')
        });
        let header = lines.next().ok_or_else(|| Error::Parse("missing HG header".into()))?;
        let mut it = header.split_whitespace();
        let mut next_num = |name: &str| -> Result<usize> {
            it.next()
                .ok_or_else(|| Error::Parse(format!("HG header missing {name}")))?
                .parse::<usize>()
                .map_err(|e| Error::Parse(format!("bad {name} in HG header: {e}")))
        };
        let k = next_num("k")?;
        let n = next_num("n")?;
        let m = next_num("m")?;
        let mut edges = Vec::with_capacity(m);
        for _ in 0..m {
            let line = lines.next().ok_or_else(|| Error::Parse("HG edge list truncated".into()))?;
            let edge: Vec<u32> = line
                .split_whitespace()
                .map(|t| t.parse::<u32>().map_err(|e| Error::Parse(format!("bad vertex: {e}"))))
                .collect::<Result<_>>()?;
            edges.push(edge);
        }
        Hypergraph::new(k, n, edges)
    }
}

/// JSON mirror of the HG format.
#[derive(Serialize, Deserialize)]
struct HypergraphJson {
    k: usize,
    n: usize,
    edges: Vec<Vec<u32>>,
}

impl Serialize for Hypergraph {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        HypergraphJson {
            k: self.k,
            n: self.n,
            edges: self.edges.iter().map(|e| e.to_vec()).collect(),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for Hypergraph {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let raw = HypergraphJson::deserialize(de)?;
        Hypergraph::new(raw.k, raw.n, raw.edges).map_err(serde::de::Error::custom)
    }
}

/// For every (k-1)-window contained in an edge, the vertices completing it.
/// Extension lists are sorted ascending for deterministic traversal.
pub struct WindowIndex {
    succ: HashMap<Box<[u32]>, Vec<u32>>,
    empty: Vec<u32>,
}

impl WindowIndex {
    pub fn new(h: &Hypergraph) -> Self {
        let mut succ: HashMap<Box<[u32]>, Vec<u32>> = HashMap::new();
        for e in h.edges() {
            for omit in 0..e.len() {
                let window: Vec<u32> = e
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i != omit)
                    .map(|(_, &v)| v)
                    .collect();
                succ.entry(window.into_boxed_slice()).or_default().push(e[omit]);
            }
        }
        for list in succ.values_mut() {
            list.sort_unstable();
            list.dedup();
        }
        WindowIndex { succ, empty: Vec::new() }
    }

    /// Vertices x with `window ∪ {x}` an edge; `window` must be sorted.
    pub fn extensions(&self, window: &[u32]) -> &[u32] {
        self.succ.get(window).map_or(&self.empty, |v| v.as_slice())
    }
}

/// All r-subsets of 0..n in lexicographic order.
pub fn combinations(n: u32, r: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    if r > n as usize {
        return out;
    }
    let mut cur: Vec<u32> = (0..r as u32).collect();
    loop {
        out.push(cur.clone());
        // advance
        let mut i = r;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < n - (r as u32 - i as u32) {
                cur[i] += 1;
                for j in i + 1..r {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
    }
}

pub(crate) fn mask_of(vs: &[u32]) -> u64 {
    vs.iter().fold(0u64, |m, &v| m | (1u64 << v))
}

/// Is `small` (sorted) a subset of `big` (sorted)?
pub(crate) fn is_subset(small: &[u32], big: &[u32]) -> bool {
    let mut it = big.iter();
    'outer: for &s in small {
        for &b in it.by_ref() {
            if b == s {
                continue 'outer;
            }
            if b > s {
                return false;
            }
        }
        return false;
    }
    true
}

/// n choose r as usize (no overflow guard; desk-scale arguments only).
pub fn binomial(n: usize, r: usize) -> usize {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    let mut acc: u128 = 1;
    for i in 0..r {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as usize
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_in_complete_graph() {
        let h = Hypergraph::complete(3, 5);
        assert_eq!(h.degree(&[0, 1]).unwrap(), 3);
        let e = Hypergraph::empty(3, 5);
        assert_eq!(e.degree(&[0, 1]).unwrap(), 0);
    }

    #[test]
    fn degree_rejects_bad_inputs() {
        let h = Hypergraph::complete(3, 5);
        assert!(h.degree(&[0, 1, 2]).is_err());
        assert!(h.degree(&[0, 9]).is_err());
        assert!(h.min_degree(3).is_err());
    }

    #[test]
    fn min_degree_levels() {
        let h = Hypergraph::complete(3, 5);
        let p = h.min_degree(2).unwrap();
        assert_eq!(p.min_degree, 3);
        assert_eq!(h.min_degree(0).unwrap().min_degree, h.edge_count());
        assert_eq!(h.min_degree(1).unwrap().min_degree, 6); // C(4,2)
    }

    #[test]
    fn link_of_complete_is_complete() {
        let h = Hypergraph::complete(3, 4);
        let l = h.link(2).unwrap();
        assert_eq!(l, Hypergraph::complete(2, 3));
        let e = Hypergraph::empty(3, 4);
        assert_eq!(e.link(0).unwrap(), Hypergraph::empty(2, 3));
    }

    #[test]
    fn link_edge_count_is_vertex_degree() {
        let h = Hypergraph::new(3, 6, vec![vec![0, 1, 2], vec![1, 2, 3], vec![3, 4, 5]]).unwrap();
        for x in 0..6u32 {
            assert_eq!(h.link(x).unwrap().edge_count(), h.degree(&[x]).unwrap());
        }
    }

    #[test]
    fn induced_and_minus() {
        let h = Hypergraph::complete(3, 5);
        let (g, map) = h.induced(&[0, 1, 2, 4]).unwrap();
        assert_eq!(g, Hypergraph::complete(3, 4));
        assert_eq!(map, vec![0, 1, 2, 4]);
        assert_eq!(h.minus(&h), Hypergraph::empty(3, 5));
    }

    #[test]
    fn induced_is_functorial_on_nested_sets() {
        let h = Hypergraph::new(3, 7, vec![vec![0, 1, 2], vec![2, 3, 4], vec![4, 5, 6], vec![1, 3, 5]])
            .unwrap();
        let (g1, map1) = h.induced(&[0, 1, 2, 3, 4, 5]).unwrap();
        let inner: Vec<u32> = vec![1, 2, 3, 4];
        let inner_in_g1: Vec<u32> =
            inner.iter().map(|v| map1.iter().position(|m| m == v).unwrap() as u32).collect();
        let (g2, _) = g1.induced(&inner_in_g1).unwrap();
        let (direct, _) = h.induced(&inner).unwrap();
        assert_eq!(g2, direct);
    }

    #[test]
    fn hg_text_round_trip() {
        let h = Hypergraph::new(3, 6, vec![vec![5, 1, 0], vec![2, 3, 4]]).unwrap();
        let text = h.to_hg_string();
        let back = Hypergraph::from_hg_str(&text).unwrap();
        assert_eq!(h, back);
        assert_eq!(text, back.to_hg_string());
    }

    #[test]
    fn hg_text_allows_comments() {
        let text = "# generated fixture\n# second line\n2 3 2\n0 1\n1 2\n";
        let h = Hypergraph::from_hg_str(text).unwrap();
        assert_eq!(h.edge_count(), 2);
    }

    #[test]
    fn json_round_trip() {
        let h = Hypergraph::complete(3, 5);
        let s = serde_json::to_string(&h).unwrap();
        let back: Hypergraph = serde_json::from_str(&s).unwrap();
        assert_eq!(h, back);
    }

    #[test]
    fn window_index_lists_extensions() {
        let h = Hypergraph::complete(3, 4);
        let idx = WindowIndex::new(&h);
        assert_eq!(idx.extensions(&[0, 1]), &[2, 3]);
        assert_eq!(idx.extensions(&[9, 10]), &[] as &[u32]);
    }

    #[test]
    fn degree_sum_identity_over_extensions() {
        // (k-j) deg(S) = sum over v of deg(S + v), for |S| = j < k-1
        let h = Hypergraph::new(4, 8, combinations(8, 4).into_iter().filter(|e| e[0] % 2 == 0))
            .unwrap();
        for s in combinations(8, 2) {
            let lhs = 2 * h.degree(&s).unwrap();
            let rhs: usize = (0..8u32)
                .filter(|v| !s.contains(v))
                .map(|v| {
                    let mut t = s.clone();
                    t.push(v);
                    h.degree(&t).unwrap()
                })
                .sum();
            assert_eq!(lhs, rhs);
        }
    }
}
