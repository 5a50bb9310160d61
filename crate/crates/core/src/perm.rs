//! Permutations of [k] = {1, .., k} and the bookkeeping the extension
//! lemmas hang off them: canonical cyclic decompositions, the rotation
//! tau = (1 2 ... k), and the m / t / G_sigma / X / Y / Z quantities.
//!
//! Composition is composition of functions: (a * b)(x) = a(b(x)).

use serde::{Deserialize, Serialize};

use crate::kgraph::KGraph;
use crate::{Error, Result};

/// A permutation of {1, .., k}; `image[i-1]` is the image of i.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Perm {
    image: Vec<u8>,
}

/// Disjoint cycles of length >= 2, each written with its minimum element
/// last, listed with strictly increasing minima. Fixed points are omitted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicDecomposition {
    pub k: usize,
    pub cycles: Vec<Vec<u8>>,
}

/// The quantities attached to a permutation by the path-extension lemmas.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigmaStats {
    /// m(sigma): the minimum of the last cycle, 1 for the identity.
    pub m: usize,
    /// t(sigma): the number of nontrivial cycles.
    pub t: usize,
    /// G_sigma: the vertex-disjoint union of the cycle paths on [k].
    pub g_sigma: KGraph,
    /// X_{i,sigma}, indexed by i-1: i is a non-minimal element of its cycle.
    pub x_flags: Vec<bool>,
    /// Y_{i,sigma}, indexed by i-1: i is in sigma({1, .., m(sigma)-1}).
    pub y_flags: Vec<bool>,
}

impl std::fmt::Debug for Perm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{self}")
    }
}

impl Perm {
    pub fn from_image(image: Vec<u8>) -> Result<Perm> {
        let k = image.len();
        let mut seen = vec![false; k];
        for &v in &image {
            if v == 0 || v as usize > k || seen[v as usize - 1] {
                return Err(Error::invalid(format!("{image:?} is not a permutation of 1..={k}")));
            }
            seen[v as usize - 1] = true;
        }
        Ok(Perm { image })
    }

    pub fn identity(k: usize) -> Perm {
        Perm { image: (1..=k as u8).collect() }
    }

    /// The rotation tau = (1 2 ... k).
    pub fn tau(k: usize) -> Perm {
        let mut image: Vec<u8> = (2..=k as u8).collect();
        image.push(1);
        Perm { image }
    }

    /// tau^r; negative r is reduced mod k.
    pub fn tau_power(k: usize, r: i64) -> Perm {
        let k_i = k as i64;
        let r = ((r % k_i) + k_i) % k_i;
        let image = (1..=k as i64).map(|i| ((i - 1 + r) % k_i + 1) as u8).collect();
        Perm { image }
    }

    /// The cyclic permutation (c[0] c[1] ... c[last]) in S_k.
    pub fn cycle(k: usize, c: &[u8]) -> Result<Perm> {
        let mut image: Vec<u8> = (1..=k as u8).collect();
        for &v in c {
            if v == 0 || v as usize > k {
                return Err(Error::invalid(format!("cycle element {v} outside 1..={k}")));
            }
        }
        let mut seen = vec![false; k];
        for &v in c {
            if seen[v as usize - 1] {
                return Err(Error::invalid("repeated element in cycle"));
            }
            seen[v as usize - 1] = true;
        }
        for w in 0..c.len() {
            image[c[w] as usize - 1] = c[(w + 1) % c.len()];
        }
        Ok(Perm { image })
    }

    pub fn k(&self) -> usize {
        self.image.len()
    }

    /// Image of i (1-based).
    pub fn apply(&self, i: usize) -> usize {
        self.image[i - 1] as usize
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &v)| v as usize == i + 1)
    }

    /// self after other: (self.compose(other))(x) = self(other(x)).
    pub fn compose(&self, other: &Perm) -> Result<Perm> {
        if self.k() != other.k() {
            return Err(Error::MismatchedK { left: self.k(), right: other.k() });
        }
        let image = (1..=self.k()).map(|i| self.image[other.apply(i) - 1]).collect();
        Ok(Perm { image })
    }

    pub fn inverse(&self) -> Perm {
        let mut image = vec![0u8; self.k()];
        for (i, &v) in self.image.iter().enumerate() {
            image[v as usize - 1] = (i + 1) as u8;
        }
        Perm { image }
    }

    /// Canonical cyclic decomposition; recomposing it reproduces `self`.
    pub fn decompose(&self) -> CyclicDecomposition {
        let k = self.k();
        let mut cycles: Vec<Vec<u8>> = Vec::new();
        let mut visited = vec![false; k];
        // Scanning starts in increasing order, so each cycle is found at its
        // minimum; rotating that minimum to the back gives the canonical
        // written form, and cycle minima increase automatically.
        for start in 1..=k {
            if visited[start - 1] {
                continue;
            }
            let mut cyc = vec![start as u8];
            visited[start - 1] = true;
            let mut cur = self.apply(start);
            while cur != start {
                visited[cur - 1] = true;
                cyc.push(cur as u8);
                cur = self.apply(cur);
            }
            if cyc.len() >= 2 {
                cyc.rotate_left(1);
                cycles.push(cyc);
            }
        }
        CyclicDecomposition { k, cycles }
    }

    /// m, t, G_sigma and the X/Y flag arrays.
    pub fn sigma_stats(&self) -> SigmaStats {
        let k = self.k();
        let dec = self.decompose();
        let t = dec.cycles.len();
        let mut g_sigma = KGraph::new(k);
        let mut x_flags = vec![false; k];
        for cyc in &dec.cycles {
            for w in cyc.windows(2) {
                g_sigma.add_edge(w[0], w[1]).expect("cycle elements are in range");
            }
            // every element except the trailing minimum sets X
            for &v in &cyc[..cyc.len() - 1] {
                x_flags[v as usize - 1] = true;
            }
        }
        let m = if t == 0 { 1 } else { *dec.cycles[t - 1].last().unwrap() as usize };
        let mut y_flags = vec![false; k];
        if !self.is_identity() {
            for j in 1..m {
                y_flags[self.apply(j) - 1] = true;
            }
        }
        SigmaStats { m, t, g_sigma, x_flags, y_flags }
    }

    /// Z_{i,sigma,r} for 0 <= r < k: i lies in sigma({k-r+1, .., k}).
    pub fn z_flags(&self, r: usize) -> Result<Vec<bool>> {
        let k = self.k();
        if r >= k {
            return Err(Error::invalid(format!("z_flags wants 0 <= r < k, got r={r}, k={k}")));
        }
        let mut flags = vec![false; k];
        for j in k - r + 1..=k {
            flags[self.apply(j) - 1] = true;
        }
        Ok(flags)
    }

    /// Parses one-line cycle notation, e.g. "(3 2 1)(5 4)" or "id".
    pub fn parse(k: usize, text: &str) -> Result<Perm> {
        let text = text.trim();
        if text == "id" || text.is_empty() {
            return Ok(Perm::identity(k));
        }
        let mut perm = Perm::identity(k);
        let mut rest = text;
        while !rest.is_empty() {
            if !rest.starts_with('(') {
                return Err(Error::Parse(format!("expected '(' in cycle notation: {text}")));
            }
            let close =
                rest.find(')').ok_or_else(|| Error::Parse(format!("missing ')' in {text}")))?;
            let body = &rest[1..close];
            let elems: Vec<u8> = body
                .split(|c: char| c == ' ' || c == ',')
                .filter(|s| !s.is_empty())
                .map(|s| s.parse::<u8>().map_err(|e| Error::Parse(format!("bad cycle entry: {e}"))))
                .collect::<Result<_>>()?;
            if elems.len() < 2 {
                return Err(Error::Parse("cycles must have length at least 2".into()));
            }
            let cyc = Perm::cycle(k, &elems)?;
            // disjointness of written cycles: composition order is immaterial
            perm = perm.compose(&cyc)?;
            rest = rest[close + 1..].trim_start();
        }
        Ok(perm)
    }
}

impl CyclicDecomposition {
    /// Composes the cycles back into a permutation.
    pub fn recompose(&self) -> Perm {
        let mut perm = Perm::identity(self.k);
        for cyc in &self.cycles {
            let c = Perm::cycle(self.k, cyc).expect("decomposition cycles are valid");
            perm = perm.compose(&c).expect("same k");
        }
        perm
    }
}

impl std::fmt::Display for Perm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let dec = self.decompose();
        if dec.cycles.is_empty() {
            return write!(f, "id");
        }
        for cyc in &dec.cycles {
            write!(f, "(")?;
            for (i, v) in cyc.iter().enumerate() {
                if i > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{v}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

/// All k! permutations of [k], in lexicographic image order.
pub fn all_perms(k: usize) -> Vec<Perm> {
    let mut out = Vec::new();
    let mut image: Vec<u8> = (1..=k as u8).collect();
    loop {
        out.push(Perm { image: image.clone() });
        // next lexicographic permutation
        let Some(i) = (0..k.saturating_sub(1)).rev().find(|&i| image[i] < image[i + 1]) else {
            return out;
        };
        let j = (i + 1..k).rev().find(|&j| image[j] > image[i]).unwrap();
        image.swap(i, j);
        image[i + 1..].reverse();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tau_and_inverse() {
        let k = 3;
        let tau = Perm::tau(k);
        assert_eq!(tau.compose(&tau.inverse()).unwrap(), Perm::identity(k));
        // tau^{-1} maps 1->3, 3->2, 2->1
        let ti = Perm::tau_power(k, -1);
        assert_eq!(ti.apply(1), 3);
        assert_eq!(ti.apply(3), 2);
        assert_eq!(ti.apply(2), 1);
        assert_eq!(Perm::tau_power(k, 3), Perm::identity(k));
        assert_eq!(Perm::tau_power(k, -4), Perm::tau_power(k, 2));
    }

    #[test]
    fn compose_disjoint_transpositions() {
        let k = 4;
        let a = Perm::cycle(k, &[1, 2]).unwrap();
        let b = Perm::cycle(k, &[3, 4]).unwrap();
        let c = a.compose(&b).unwrap();
        assert_eq!(c.sigma_stats().t, 2);
    }

    #[test]
    fn mismatched_k_is_an_error() {
        let a = Perm::identity(3);
        let b = Perm::identity(4);
        assert!(a.compose(&b).is_err());
    }

    #[test]
    fn decompose_identity_is_empty() {
        assert!(Perm::identity(5).decompose().cycles.is_empty());
        assert_eq!(Perm::identity(5).to_string(), "id");
    }

    #[test]
    fn decompose_writes_minimum_last() {
        // (132): 1->3, 3->2, 2->1; canonical written form is (3 2 1)
        let s = Perm::cycle(3, &[1, 3, 2]).unwrap();
        assert_eq!(s.decompose().cycles, vec![vec![3, 2, 1]]);
        assert_eq!(s, Perm::tau_power(3, -1));
        assert_eq!(s.to_string(), "(3 2 1)");
    }

    #[test]
    fn stats_for_identity() {
        let st = Perm::identity(4).sigma_stats();
        assert_eq!(st.t, 0);
        assert_eq!(st.m, 1);
        assert_eq!(st.g_sigma.edge_count(), 0);
        assert!(st.x_flags.iter().all(|&b| !b));
        assert!(st.y_flags.iter().all(|&b| !b));
    }

    #[test]
    fn stats_for_tau_inverse_k3() {
        // cycle (3 2 1): G is the path 3-2-1, X_3 = X_2 = 1, X_1 = 0, m = 1
        let st = Perm::tau_power(3, -1).sigma_stats();
        assert_eq!(st.m, 1);
        assert_eq!(st.t, 1);
        assert_eq!(st.g_sigma.edge_count(), 2);
        assert!(st.g_sigma.has_edge(3, 2) && st.g_sigma.has_edge(2, 1));
        assert_eq!(st.x_flags, vec![false, true, true]);
        assert!(st.y_flags.iter().all(|&b| !b));
    }

    #[test]
    fn z_flags_examples() {
        // sigma = id, r = 1: Z_i = 1 iff i = sigma(3) = 3
        let z = Perm::identity(3).z_flags(1).unwrap();
        assert_eq!(z, vec![false, false, true]);
        let z0 = Perm::identity(3).z_flags(0).unwrap();
        assert!(z0.iter().all(|&b| !b));
        assert!(Perm::identity(3).z_flags(3).is_err());
    }

    #[test]
    fn edge_count_plus_t_bound_exhaustive() {
        // 2|E(G_sigma)| + t(sigma) <= 2k - 1 for every sigma, k <= 7
        for k in 1..=7 {
            for p in all_perms(k) {
                let st = p.sigma_stats();
                assert!(2 * st.g_sigma.edge_count() + st.t <= 2 * k - 1, "failed for {p}");
                assert!(st.g_sigma.is_disjoint_paths(), "G_sigma must be disjoint paths for {p}");
            }
        }
    }

    #[test]
    fn z_implies_x_for_rotations() {
        // For sigma = id and sigma' = tau^{-r}: Z_{i,id,r} = 1 forces X_{i,tau^{-r}} = 1.
        for k in 2..=7 {
            for r in 1..k {
                let z = Perm::identity(k).z_flags(r).unwrap();
                let x = Perm::tau_power(k, -(r as i64)).sigma_stats().x_flags;
                for i in 0..k {
                    assert!(!z[i] || x[i], "k={k} r={r} i={}", i + 1);
                }
            }
        }
    }

    #[test]
    fn decompose_recompose_exhaustive() {
        for k in 1..=6 {
            for p in all_perms(k) {
                assert_eq!(p.decompose().recompose(), p);
            }
        }
    }

    #[test]
    fn parse_round_trip() {
        let p = Perm::parse(5, "(3 2 1)(5 4)").unwrap();
        assert_eq!(p.to_string(), "(3 2 1)(5 4)");
        assert_eq!(Perm::parse(4, "id").unwrap(), Perm::identity(4));
        assert!(Perm::parse(3, "(1 2").is_err());
        assert!(Perm::parse(3, "(9 2)").is_err());
    }
}
