//! Generators for the explicit hypergraphs the theory is built on:
//! complete partite hosts, the parity graph H0, the T-augmented tiling
//! barrier, gadget hosts F(K, G), and the tile family (F_s, E_s).

use serde::{Deserialize, Serialize};

use crate::hypergraph::combinations;
use crate::kgraph::KGraph;
use crate::paths::{close_cycle, find_gadget, TightPath};
use crate::perm::Perm;
use crate::search::{is_tight_cycle, Budget, TightCycle};
use crate::{Error, Hypergraph, Result};

/// Ordered disjoint classes V_1..V_s over a subset of the vertices.
/// Class indices are 1-based throughout, matching permutation values.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexPartition {
    classes: Vec<Vec<u32>>,
}

impl VertexPartition {
    pub fn new(classes: Vec<Vec<u32>>) -> Result<VertexPartition> {
        let mut seen = std::collections::HashSet::new();
        let mut sorted = Vec::with_capacity(classes.len());
        for mut class in classes {
            class.sort_unstable();
            for &v in &class {
                if !seen.insert(v) {
                    return Err(Error::invalid(format!("vertex {v} lies in two classes")));
                }
            }
            sorted.push(class);
        }
        Ok(VertexPartition { classes: sorted })
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    /// Class i (1-based).
    pub fn class(&self, i: u8) -> &[u32] {
        &self.classes[i as usize - 1]
    }

    /// The 1-based class index of v, if v is partitioned.
    pub fn class_of(&self, v: u32) -> Option<u8> {
        self.classes
            .iter()
            .position(|c| c.binary_search(&v).is_ok())
            .map(|i| (i + 1) as u8)
    }

    pub fn all_vertices(&self) -> Vec<u32> {
        let mut out: Vec<u32> = self.classes.iter().flatten().copied().collect();
        out.sort_unstable();
        out
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.classes.iter().map(|c| c.len()).collect()
    }
}

/// A hypergraph together with a distinguished partition of (part of) its
/// vertex set.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PartitionedHost {
    pub graph: Hypergraph,
    pub classes: VertexPartition,
}

impl PartitionedHost {
    /// Checks the complete-partite law: e is an edge iff e is transversal.
    pub fn is_complete_partite(&self) -> bool {
        let k = self.graph.k();
        let partitioned = self.classes.all_vertices();
        if partitioned.len() != self.graph.n() {
            return false;
        }
        for e in combinations(self.graph.n() as u32, k) {
            let mut hit = std::collections::HashSet::new();
            let transversal = e.iter().all(|&v| match self.classes.class_of(v) {
                Some(c) => hit.insert(c),
                None => false,
            });
            if transversal != self.graph.has_edge(&e) {
                return false;
            }
        }
        true
    }
}

/// Outcome of the admissibility test for a pair (k, s).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Admissibility {
    pub admissible: bool,
    pub d: usize,
}

/// (k, s) is admissible when d = gcd(k, s) is 1 or k/d is even.
pub fn admissible(k: usize, s: usize) -> Result<Admissibility> {
    if k < 2 || k >= s {
        return Err(Error::BadPair { k, s });
    }
    let d = gcd(k, s);
    Ok(Admissibility { admissible: d == 1 || (k / d) % 2 == 0, d })
}

pub(crate) fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// The complete (k, s)-graph K^k(sizes[0], .., sizes[s-1]): classes of the
/// given sizes on consecutively numbered vertices, edges exactly the
/// transversal k-sets.
pub fn complete_partite(k: usize, sizes: &[usize]) -> Result<PartitionedHost> {
    if sizes.len() < k {
        return Err(Error::BadArity { what: "partition classes", got: sizes.len(), need: k });
    }
    if sizes.iter().any(|&s| s == 0) {
        return Err(Error::invalid("class sizes must be positive"));
    }
    let mut classes = Vec::with_capacity(sizes.len());
    let mut next = 0u32;
    for &size in sizes {
        classes.push((next..next + size as u32).collect::<Vec<u32>>());
        next += size as u32;
    }
    let n = next as usize;
    let mut edges: Vec<Vec<u32>> = Vec::new();
    for class_choice in combinations(sizes.len() as u32, k) {
        let chosen: Vec<&[u32]> =
            class_choice.iter().map(|&c| classes[c as usize].as_slice()).collect();
        let mut stack = vec![Vec::with_capacity(k)];
        while let Some(partial) = stack.pop() {
            if partial.len() == k {
                edges.push(partial);
                continue;
            }
            for &v in chosen[partial.len()] {
                let mut next_partial = partial.clone();
                next_partial.push(v);
                stack.push(next_partial);
            }
        }
    }
    Ok(PartitionedHost {
        graph: Hypergraph::new(k, n, edges)?,
        classes: VertexPartition::new(classes)?,
    })
}

/// The parity graph on A ∪ B (A = first `a_size` vertices): k-sets e with
/// |e ∩ A| not congruent to k mod 2.
pub fn h0(k: usize, a_size: usize, b_size: usize) -> Result<Hypergraph> {
    if a_size + b_size < k {
        return Err(Error::invalid(format!(
            "h0 needs at least k = {k} vertices, got {}",
            a_size + b_size
        )));
    }
    let n = a_size + b_size;
    let edges = combinations(n as u32, k)
        .into_iter()
        .filter(|e| {
            let in_a = e.iter().filter(|&&v| (v as usize) < a_size).count();
            in_a % 2 != k % 2
        })
        .collect::<Vec<_>>();
    Hypergraph::new(k, n, edges)
}

/// Checks the parity law on a tight cycle found inside h0(k, a_size, _):
/// if the cycle touches A at all, |V(C) ∩ A| must vanish mod s/d.
pub fn h0_cycle_parity_ok(k: usize, a_size: usize, cycle: &[u32]) -> bool {
    let s = cycle.len();
    let in_a = cycle.iter().filter(|&&v| (v as usize) < a_size).count();
    if in_a == 0 {
        return true;
    }
    let d = gcd(k, s);
    in_a % (s / d) == 0
}

/// The T-augmented tiling barrier with partition {A, B, T}.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BarrierGraph {
    pub graph: Hypergraph,
    /// A = first a_size vertices, B the next b_size, T the last t_size.
    pub a_size: usize,
    pub b_size: usize,
    pub t_size: usize,
    /// Set when the k-odd formula for |T| came out nonpositive and T = ∅
    /// was emitted instead; the barrier degenerates at such small n.
    pub degenerate_t: bool,
}

/// Barrier construction for admissible (k, s) with s | n: edges are the
/// k-sets with |e ∩ A| wrong-parity or meeting T, where |T| = n/s - 1 for
/// k even and floor(nk / (2s(k-1) + k)) - 1 for k odd.
pub fn tiling_barrier(k: usize, s: usize, n: usize) -> Result<BarrierGraph> {
    let adm = admissible(k, s)?;
    if !adm.admissible {
        return Err(Error::invalid(format!("({k}, {s}) is not an admissible pair")));
    }
    if n % s != 0 || n == 0 {
        return Err(Error::invalid(format!("barrier needs s | n, got s = {s}, n = {n}")));
    }
    let t_formula: i64 = if k % 2 == 0 {
        (n / s) as i64 - 1
    } else {
        (n * k / (2 * s * (k - 1) + k)) as i64 - 1
    };
    let degenerate_t = t_formula <= 0;
    let t_size = t_formula.max(0) as usize;
    let rest = n - t_size;
    let a_size = rest.div_ceil(2);
    let b_size = rest / 2;
    let edges = combinations(n as u32, k)
        .into_iter()
        .filter(|e| {
            let in_a = e.iter().filter(|&&v| (v as usize) < a_size).count();
            let hits_t = e.iter().any(|&v| (v as usize) >= a_size + b_size);
            in_a % 2 != k % 2 || hits_t
        })
        .collect::<Vec<_>>();
    Ok(BarrierGraph { graph: Hypergraph::new(k, n, edges)?, a_size, b_size, t_size, degenerate_t })
}

/// A complete (k,k)-host with pendant vertices attached: one pendant per
/// edge of G, joined by two complete k-partite stars.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GadgetHost {
    pub host: PartitionedHost,
    /// Pendant vertices w_1..w_l in the order of the edges of G.
    pub pendants: Vec<(u8, u8, u32)>,
}

/// F(K, G): adds a pendant w per edge ab of G together with the stars
/// H(w, a) and H(w, b), where H(w, j) is complete k-partite on
/// {w}, V_1, .., V_{j-1}, V_{j+1}, .., V_k.
pub fn gadget_host(k_host: &PartitionedHost, g: &KGraph) -> Result<GadgetHost> {
    let k = k_host.graph.k();
    if g.k() != k {
        return Err(Error::MismatchedK { left: g.k(), right: k });
    }
    if k_host.classes.num_classes() != k {
        return Err(Error::BadArity {
            what: "gadget host classes",
            got: k_host.classes.num_classes(),
            need: k,
        });
    }
    let n0 = k_host.graph.n();
    let ell = g.edge_count();
    let mut edges: Vec<Vec<u32>> = k_host.graph.edges().map(|e| e.to_vec()).collect();
    let mut pendants = Vec::with_capacity(ell);
    for (idx, (a, b)) in g.edges().enumerate() {
        let w = (n0 + idx) as u32;
        pendants.push((a, b, w));
        for &skip in &[a, b] {
            // all transversals of the classes other than `skip`, plus w
            let others: Vec<&[u32]> = (1..=k as u8)
                .filter(|&c| c != skip)
                .map(|c| k_host.classes.class(c))
                .collect();
            let mut stack = vec![vec![w]];
            while let Some(partial) = stack.pop() {
                if partial.len() == k {
                    edges.push(partial);
                    continue;
                }
                for &v in others[partial.len() - 1] {
                    let mut nxt = partial.clone();
                    nxt.push(v);
                    stack.push(nxt);
                }
            }
        }
    }
    let graph = Hypergraph::new(k, n0 + ell, edges)?;
    Ok(GadgetHost {
        host: PartitionedHost { graph, classes: k_host.classes.clone() },
        pendants,
    })
}

/// The tile family behind the fractional relaxation: G_s, the class sizes
/// a_{s,1..k}, the pendant count l, the gadgeted tile F_s with its
/// certified spanning cycle, and the balanced host E_s = K^k(M_s).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TileFamily {
    pub k: usize,
    pub s: usize,
    pub g_s: KGraph,
    pub a: Vec<usize>,
    pub ell: usize,
    pub m_big: usize,
    pub m_small: usize,
    pub f_s: GadgetHost,
    pub e_s: PartitionedHost,
    /// A spanning tight cycle of f_s, witnessing the construction.
    pub spanning_cycle: TightCycle,
}

impl TileFamily {
    /// The invariants every family must satisfy. The ratio bound
    /// m_s / M_s >= 14/15 belongs to the s >= 5k^2 regime and is only
    /// enforced there.
    pub fn validate(&self) -> Result<()> {
        let TileFamily { k, s, ref a, ell, m_big, m_small, .. } = *self;
        if ell + a.iter().sum::<usize>() != s {
            return Err(Error::invalid("tile family: l + sum(a) != s"));
        }
        if ell == 0 || ell > k - 1 {
            return Err(Error::invalid("tile family: l outside 1..=k-1"));
        }
        let max = *a.iter().max().unwrap();
        let min = *a.iter().min().unwrap();
        if max - min > 1 || m_big != max || m_small != min {
            return Err(Error::invalid("tile family: class sizes not balanced"));
        }
        if s >= 5 * k * k && 15 * m_small < 14 * m_big {
            return Err(Error::invalid("tile family: m_s/M_s < 14/15 with s >= 5k^2"));
        }
        if !is_tight_cycle(&self.f_s.host.graph, self.spanning_cycle.vertices()) {
            return Err(Error::invalid("tile family: spanning cycle does not certify"));
        }
        if self.spanning_cycle.len() != s || self.f_s.host.graph.n() != s {
            return Err(Error::invalid("tile family: cycle is not spanning"));
        }
        Ok(())
    }
}

/// Runs the constructive route to the tile family: close an edge of a
/// roomy gadget host into a tight cycle on s vertices, read off the
/// per-class usage, and rebuild the exact-size tile around it.
pub fn tile_family(k: usize, s: usize) -> Result<TileFamily> {
    if k < 3 {
        return Err(Error::invalid(format!("tile family needs k >= 3, got {k}")));
    }
    if s % k == 0 {
        return Err(Error::invalid(format!("tile family needs s not divisible by k, got {s}")));
    }
    if s < 2 * k * k {
        return Err(Error::invalid(format!("tile family needs s >= 2k^2 = {}, got {s}", 2 * k * k)));
    }
    let r = s % k;
    let sigma_prime = Perm::tau_power(k, -(r as i64));
    let g_run = sigma_prime.sigma_stats().g_sigma;

    // A host large enough for the extension lemma hypotheses.
    let t = (s - k) / k + 2;
    let base = complete_partite(k, &vec![t; k])?;
    let roomy = gadget_host(&base, &g_run)?;

    // P: the least transversal edge, typed id at both ends.
    let p_verts: Vec<u32> = (1..=k as u8).map(|c| roomy.host.classes.class(c)[0]).collect();
    let path = TightPath::new(&roomy.host.graph, roomy.host.classes.clone(), p_verts)?;

    let gadget = find_gadget(
        &roomy.host.graph,
        &roomy.host,
        &g_run,
        &path.vertices().to_vec(),
        &mut Budget::default(),
    )?
    .ok_or_else(|| Error::invalid("tile family: no gadget in the roomy host"))?;

    let closed = close_cycle(&roomy.host.graph, &roomy.host, &path, s - k, &gadget)?;
    let cycle = closed.cycle;

    // Per-class usage of the cycle and the standardising permutation:
    // larger counts to lower class indices.
    let counts: Vec<usize> = (1..=k as u8)
        .map(|c| {
            cycle
                .vertices()
                .iter()
                .filter(|&&v| roomy.host.classes.class_of(v) == Some(c))
                .count()
        })
        .collect();
    let mut order: Vec<usize> = (0..k).collect(); // order[j] = old class index (0-based)
    order.sort_by_key(|&i| (std::cmp::Reverse(counts[i]), i));
    let a: Vec<usize> = order.iter().map(|&i| counts[i]).collect();
    let new_of_old: Vec<u8> = {
        let mut m = vec![0u8; k];
        for (newc, &oldc) in order.iter().enumerate() {
            m[oldc] = (newc + 1) as u8;
        }
        m
    };
    let g_s = KGraph::from_edges(
        k,
        g_run.edges().map(|(u, v)| (new_of_old[u as usize - 1], new_of_old[v as usize - 1])),
    )?;
    let ell = g_s.edge_count();

    // Exact-size tile and the vertex mapping big-host -> tile.
    let exact = complete_partite(k, &a)?;
    let f_s = gadget_host(&exact, &g_s)?;
    let mut map = std::collections::HashMap::new();
    let mut per_class_next: Vec<usize> = vec![0; k];
    for &v in cycle.vertices() {
        if let Some(oldc) = roomy.host.classes.class_of(v) {
            let newc = new_of_old[oldc as usize - 1];
            let slot = per_class_next[newc as usize - 1];
            map.insert(v, f_s.host.classes.class(newc)[slot]);
            per_class_next[newc as usize - 1] += 1;
        }
    }
    for (a_old, b_old, w_old) in &roomy.pendants {
        if cycle.vertices().contains(w_old) {
            let (na, nb) =
                (new_of_old[*a_old as usize - 1], new_of_old[*b_old as usize - 1]);
            let (lo, hi) = (na.min(nb), na.max(nb));
            let w_new = f_s
                .pendants
                .iter()
                .find(|(pa, pb, _)| (*pa).min(*pb) == lo && (*pa).max(*pb) == hi)
                .map(|&(_, _, w)| w)
                .ok_or_else(|| Error::invalid("tile family: pendant not found in exact tile"))?;
            map.insert(*w_old, w_new);
        }
    }
    let mapped: Vec<u32> = cycle
        .vertices()
        .iter()
        .map(|v| map.get(v).copied().ok_or_else(|| Error::invalid("unmapped cycle vertex")))
        .collect::<Result<_>>()?;
    if !is_tight_cycle(&f_s.host.graph, &mapped) {
        return Err(Error::invalid("tile family: mapped cycle failed certification"));
    }
    let spanning_cycle = TightCycle::new(mapped)?;

    let m_big = *a.iter().max().unwrap();
    let m_small = *a.iter().min().unwrap();
    let e_s = complete_partite(k, &vec![m_big; k])?;
    let fam =
        TileFamily { k, s, g_s, a, ell, m_big, m_small, f_s, e_s, spanning_cycle };
    fam.validate()?;
    Ok(fam)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::enumerate_cycles;

    #[test]
    fn complete_partite_edge_counts() {
        let single = complete_partite(3, &[1, 1, 1]).unwrap();
        assert_eq!(single.graph.edge_count(), 1);
        let balanced = complete_partite(3, &[2, 2, 2]).unwrap();
        assert_eq!(balanced.graph.edge_count(), 8);
        assert!(balanced.is_complete_partite());
        // five classes of two, k = 4: C(5,4) * 2^4
        let five = complete_partite(4, &[2, 2, 2, 2, 2]).unwrap();
        assert_eq!(five.graph.edge_count(), 80);
        // independent oracle: sum over class subsets of size products
        let sizes = [2usize, 2, 2, 2, 2];
        let expect: usize = crate::hypergraph::combinations(5, 4)
            .iter()
            .map(|cs| cs.iter().map(|&c| sizes[c as usize]).product::<usize>())
            .sum();
        assert_eq!(five.graph.edge_count(), expect);
        assert!(complete_partite(3, &[1, 1]).is_err());
        assert!(complete_partite(2, &[0, 3]).is_err());
    }

    #[test]
    fn h0_parity_rule() {
        let h = h0(3, 4, 4).unwrap();
        for e in h.edges() {
            let in_a = e.iter().filter(|&&v| v < 4).count();
            assert!(in_a % 2 != 3 % 2);
        }
        // codegree bound: min{|A|,|B|} - (k-1)
        let p = h.min_degree(2).unwrap();
        assert!(p.min_degree >= 2, "delta_2 = {}", p.min_degree);
        let h4 = h0(4, 4, 4).unwrap();
        assert!(h4.min_degree(3).unwrap().min_degree >= 1);
    }

    #[test]
    fn h0_even_k_is_swap_symmetric() {
        // for even k the construction is unchanged by exchanging A and B
        let (a, b) = (3usize, 5usize);
        let h_ab = h0(4, a, b).unwrap();
        let h_ba = h0(4, b, a).unwrap();
        // relabel h_ba so its A block (first b vertices) maps onto the B
        // block of h_ab and vice versa
        let relabel = |v: u32| if (v as usize) < b { v + a as u32 } else { v - b as u32 };
        let relabelled: Vec<Vec<u32>> =
            h_ba.edges().map(|e| e.iter().map(|&v| relabel(v)).collect()).collect();
        let rebuilt = Hypergraph::new(4, a + b, relabelled).unwrap();
        assert_eq!(h_ab, rebuilt);
    }

    #[test]
    fn h0_induced_on_a_is_edgeless() {
        let h = h0(3, 4, 4).unwrap();
        let (inside_a, _) = h.induced(&[0, 1, 2, 3]).unwrap();
        assert_eq!(inside_a.edge_count(), 0);
    }

    #[test]
    fn admissible_table() {
        assert!(admissible(3, 4).unwrap().admissible);
        let bad = admissible(6, 8).unwrap();
        assert!(!bad.admissible);
        assert_eq!(bad.d, 2);
        assert!(admissible(4, 6).unwrap().admissible);
        assert!(admissible(4, 4).is_err());
        assert!(admissible(5, 4).is_err());
        assert!(admissible(1, 5).is_err());
    }

    #[test]
    fn barrier_sizes_and_degree_bound() {
        let b = tiling_barrier(4, 5, 10).unwrap();
        assert_eq!(b.t_size, 1);
        assert_eq!((b.a_size, b.b_size), (5, 4));
        assert!(!b.degenerate_t);
        let d = b.graph.min_degree(3).unwrap().min_degree;
        assert!(d >= (10 + 1) / 2 - 4 + 1, "delta_3 = {d}");

        let deg = tiling_barrier(3, 4, 8).unwrap();
        assert_eq!(deg.t_size, 0);
        assert!(deg.degenerate_t);
        let d = deg.graph.min_degree(2).unwrap().min_degree;
        assert!(d >= 8 / 2 - 3 + 1);

        assert!(tiling_barrier(6, 8, 16).is_err()); // not admissible
        assert!(tiling_barrier(4, 5, 11).is_err()); // s does not divide n
    }

    #[test]
    fn gadget_host_shape() {
        let k_host = complete_partite(3, &[4, 4, 4]).unwrap();
        let empty = gadget_host(&k_host, &KGraph::new(3)).unwrap();
        assert_eq!(empty.host.graph, k_host.graph);
        assert!(empty.pendants.is_empty());

        let g = KGraph::from_edges(3, vec![(1, 2)]).unwrap();
        let f = gadget_host(&k_host, &g).unwrap();
        assert_eq!(f.pendants.len(), 1);
        let w = f.pendants[0].2;
        assert_eq!(w, 12);
        // 64 host edges + 16 per star
        assert_eq!(f.host.graph.edge_count(), 64 + 16 + 16);
        // H(w,1) spans {w} x V_2 x V_3
        assert!(f.host.graph.has_edge(&[w, 4, 8]));
        assert!(f.host.graph.has_edge(&[w, 0, 8]));
        assert!(!f.host.graph.has_edge(&[w, 0, 4])); // V_1 x V_2 misses class 3
    }

    #[test]
    fn tile_family_small_cases() {
        let fam = tile_family(3, 19).unwrap();
        assert_eq!(fam.ell, 2);
        assert_eq!(fam.a.iter().sum::<usize>() + fam.ell, 19);
        let mut sorted = fam.a.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, vec![5, 6, 6]);
        assert_eq!((fam.m_small, fam.m_big), (5, 6));
        assert_eq!(fam.e_s.graph.n(), 18);
        fam.validate().unwrap();

        let fam20 = tile_family(3, 20).unwrap();
        assert_eq!(fam20.ell, 2);
        assert_eq!(fam20.a, vec![6, 6, 6]);
        fam20.validate().unwrap();

        assert!(tile_family(3, 21).is_err()); // divisible by k
        assert!(tile_family(3, 16).is_err()); // below 2k^2
        assert!(tile_family(2, 10).is_err());
    }

    #[test]
    fn tile_family_cycle_is_spanning_and_unique_length() {
        let fam = tile_family(3, 19).unwrap();
        assert_eq!(fam.spanning_cycle.len(), 19);
        assert_eq!(fam.f_s.host.graph.n(), 19);
        assert!(crate::search::is_tight_cycle(&fam.f_s.host.graph, fam.spanning_cycle.vertices()));
    }

    #[test]
    fn h0_parity_checker_on_enumerated_cycles() {
        // every cycle found in a parity graph obeys the mod-s/d law
        let h = h0(3, 4, 4).unwrap();
        for s in 4..=6 {
            let cycles =
                enumerate_cycles(&h, s, &mut crate::search::Budget::default()).unwrap();
            for c in cycles {
                assert!(h0_cycle_parity_ok(3, 4, c.vertices()), "cycle {:?}", c.vertices());
            }
        }
    }
}
