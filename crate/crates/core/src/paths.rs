//! Tight paths with typed ends, gadget verification and search, and the
//! extension algorithms that close a typed path into a tight cycle of
//! prescribed length.
//!
//! The conventions: a path of length >= k-1 carries a start type and an end
//! type with respect to the classes V_1..V_k of a complete (k,k)-host; a
//! simple extension appends one vertex of class pi(1) and rotates the end
//! type by tau; a gadget edge W_ij buys a transposition (ij) at the price
//! of 2k-1 fresh vertices, exactly one of them outside the host.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use crate::constructions::{PartitionedHost, VertexPartition};
use crate::kgraph::KGraph;
use crate::perm::Perm;
use crate::search::{Budget, TightCycle};
use crate::{Error, Hypergraph, Result};

/// A tight path typed against a fixed partition frame.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TightPath {
    verts: Vec<u32>,
    frame: VertexPartition,
}

impl TightPath {
    /// Validates distinctness and that every k consecutive vertices form an
    /// edge; the path must be long enough for its types to be defined.
    pub fn new(h: &Hypergraph, frame: VertexPartition, verts: Vec<u32>) -> Result<TightPath> {
        let k = h.k();
        if verts.len() + 1 < k {
            return Err(Error::invalid(format!(
                "tight path needs at least k-1 = {} vertices, got {}",
                k - 1,
                verts.len()
            )));
        }
        let distinct: HashSet<u32> = verts.iter().copied().collect();
        if distinct.len() != verts.len() {
            return Err(Error::invalid("tight path has repeated vertices"));
        }
        for w in verts.windows(k) {
            if !h.has_edge(w) {
                return Err(Error::invalid(format!("path window {w:?} is not an edge")));
            }
        }
        Ok(TightPath { verts, frame })
    }

    pub fn vertices(&self) -> &[u32] {
        &self.verts
    }

    pub fn len(&self) -> usize {
        self.verts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.verts.is_empty()
    }

    pub fn frame(&self) -> &VertexPartition {
        &self.frame
    }

    /// The end type: sigma with v_{l-k+i} in V_{sigma(i)} for 2 <= i <= k,
    /// the free slot sigma(1) being the one unused class. None if a
    /// boundary vertex is unpartitioned or two share a class.
    pub fn end_type(&self) -> Option<Perm> {
        let k = self.frame.num_classes();
        boundary_type(&self.frame, &self.verts[self.verts.len() - (k - 1)..], false)
    }

    /// The start type: v_i in V_{sigma(i)} for 1 <= i <= k-1, free slot
    /// sigma(k).
    pub fn start_type(&self) -> Option<Perm> {
        let k = self.frame.num_classes();
        boundary_type(&self.frame, &self.verts[..k - 1], true)
    }
}

/// Builds the unique permutation typing k-1 boundary vertices; for an end
/// type the free slot is 1, for a start type it is k.
fn boundary_type(frame: &VertexPartition, boundary: &[u32], start: bool) -> Option<Perm> {
    let k = frame.num_classes();
    let mut image = vec![0u8; k];
    let mut used = vec![false; k + 1];
    for (pos, &v) in boundary.iter().enumerate() {
        let c = frame.class_of(v)?;
        if used[c as usize] {
            return None;
        }
        used[c as usize] = true;
        let slot = if start { pos } else { pos + 1 };
        image[slot] = c;
    }
    let free = (1..=k as u8).find(|&c| !used[c as usize])?;
    let free_slot = if start { k - 1 } else { 0 };
    image[free_slot] = free;
    Perm::from_image(image).ok()
}

/// Appends x (which must lie in class pi(1), be fresh, and complete an
/// edge) to a path with end type pi; the result has end type pi tau.
pub fn simple_extend(h: &Hypergraph, path: &TightPath, x: u32) -> Result<TightPath> {
    let k = h.k();
    let pi = path
        .end_type()
        .ok_or_else(|| Error::hypothesis("simple_extend", "path has no end type"))?;
    let expected = pi.apply(1) as u8;
    if path.frame.class_of(x) != Some(expected) {
        return Err(Error::hypothesis(
            "simple_extend",
            format!("vertex {x} is not in class {expected} = pi(1)"),
        ));
    }
    if path.verts.contains(&x) {
        return Err(Error::hypothesis("simple_extend", format!("vertex {x} already on the path")));
    }
    let mut window: Vec<u32> = path.verts[path.len() - (k - 1)..].to_vec();
    window.push(x);
    if !h.has_edge(&window) {
        return Err(Error::hypothesis("simple_extend", format!("window {window:?} is not an edge")));
    }
    let mut verts = path.verts.clone();
    verts.push(x);
    Ok(TightPath { verts, frame: path.frame.clone() })
}

/// One W_ij of a gadget: the outside vertex w, the two star vertices
/// x*_i, x*_j, and one pair per remaining class.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GadgetPart {
    pub edge: (u8, u8),
    pub w: u32,
    /// class -> x* for the two classes of `edge`.
    pub star: BTreeMap<u8, u32>,
    /// class -> (x, x') for every other class.
    pub pairs: BTreeMap<u8, (u32, u32)>,
}

impl GadgetPart {
    /// All 2k-1 vertices of W_ij.
    pub fn vertex_set(&self) -> BTreeSet<u32> {
        let mut out: BTreeSet<u32> = self.star.values().copied().collect();
        out.insert(self.w);
        for &(a, b) in self.pairs.values() {
            out.insert(a);
            out.insert(b);
        }
        out
    }

    /// The explicit spanning tight path of H[W_ij] with start type
    /// sigma tau and end type (ij) sigma, for sigma with sigma(1) in {i, j}.
    pub fn spanning_path(&self, sigma: &Perm) -> Result<Vec<u32>> {
        let k = sigma.k();
        let (i, j) = self.edge;
        let a = sigma.apply(1) as u8;
        if a != i && a != j {
            return Err(Error::hypothesis(
                "gadget spanning path",
                format!("sigma(1) = {a} not in {{{i}, {j}}}"),
            ));
        }
        let b = if a == i { j } else { i };
        let b_slot = (2..=k)
            .find(|&m| sigma.apply(m) as u8 == b)
            .ok_or_else(|| Error::hypothesis("gadget spanning path", "b not in sigma image"))?;
        let mut verts = Vec::with_capacity(2 * k - 1);
        for m in 2..=k {
            let c = sigma.apply(m) as u8;
            verts.push(if c == b { self.star[&b] } else { self.pairs[&c].0 });
        }
        verts.push(self.w);
        for m in 2..=k {
            let c = sigma.apply(m) as u8;
            verts.push(if m == b_slot { self.star[&a] } else { self.pairs[&c].1 });
        }
        Ok(verts)
    }
}

/// A G-gadget: one disjoint W_ij per edge of G.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Gadget {
    pub k: usize,
    pub parts: BTreeMap<(u8, u8), GadgetPart>,
}

impl Gadget {
    pub fn empty(k: usize) -> Gadget {
        Gadget { k, parts: BTreeMap::new() }
    }

    pub fn edge_graph(&self) -> KGraph {
        KGraph::from_edges(self.k, self.parts.keys().copied()).expect("stored edges are valid")
    }

    pub fn edge_count(&self) -> usize {
        self.parts.len()
    }

    pub fn vertices(&self) -> BTreeSet<u32> {
        self.parts.values().flat_map(|p| p.vertex_set()).collect()
    }

    /// The unique vertex of W_ij outside the host.
    pub fn outside(&self, edge: (u8, u8)) -> Option<u32> {
        self.parts.get(&normal(edge)).map(|p| p.w)
    }

    fn take(&mut self, edge: (u8, u8)) -> Result<GadgetPart> {
        self.parts
            .remove(&normal(edge))
            .ok_or_else(|| Error::hypothesis("gadget", format!("missing part W_{:?}", edge)))
    }

    /// Relabels classes through rho (new class u holds the old class
    /// rho(u)); vertices are untouched.
    pub fn conjugate(&self, rho: &Perm) -> Gadget {
        let inv = rho.inverse();
        let relabel = |c: u8| inv.apply(c as usize) as u8;
        let mut parts = BTreeMap::new();
        for part in self.parts.values() {
            let edge = normal((relabel(part.edge.0), relabel(part.edge.1)));
            let star = part.star.iter().map(|(&c, &v)| (relabel(c), v)).collect();
            let pairs = part.pairs.iter().map(|(&c, &p)| (relabel(c), p)).collect();
            parts.insert(edge, GadgetPart { edge, w: part.w, star, pairs });
        }
        Gadget { k: self.k, parts }
    }
}

fn normal(e: (u8, u8)) -> (u8, u8) {
    (e.0.min(e.1), e.0.max(e.1))
}

/// Outcome of the clause-by-clause gadget check.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GadgetReport {
    pub violations: Vec<String>,
}

impl GadgetReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks (W1), (W2) and (W4) directly and (W3) by exhaustive search for
/// the required spanning tight paths inside each H[W_ij].
pub fn verify_gadget(
    h: &Hypergraph,
    host: &PartitionedHost,
    g: &KGraph,
    gadget: &Gadget,
    avoid: &[u32],
) -> GadgetReport {
    let k = h.k();
    let avoid: HashSet<u32> = avoid.iter().copied().collect();
    let host_vertices: HashSet<u32> = host.classes.all_vertices().into_iter().collect();
    let mut violations = Vec::new();

    for (a, b) in g.edges() {
        if !gadget.parts.contains_key(&(a, b)) {
            violations.push(format!("missing W_{{{a},{b}}} for an edge of G"));
        }
    }

    for (&(i, j), part) in &gadget.parts {
        let wset = part.vertex_set();
        let tag = format!("W_{{{i},{j}}}");
        if wset.len() != 2 * k - 1 {
            violations.push(format!("(W1) {tag} has {} vertices, wants {}", wset.len(), 2 * k - 1));
        }
        let outside: Vec<u32> = wset.iter().copied().filter(|v| !host_vertices.contains(v)).collect();
        if outside != vec![part.w] {
            violations.push(format!("(W2) {tag} outside-host vertices are {outside:?}"));
        }
        if wset.iter().any(|v| avoid.contains(v)) {
            violations.push(format!("(W2) {tag} meets the avoided set"));
        }
        for c in 1..=k as u8 {
            let count = wset.iter().filter(|&&v| host.classes.class_of(v) == Some(c)).count();
            let want = if c == i || c == j { 1 } else { 2 };
            if count != want {
                violations.push(format!("(W2) {tag} has {count} vertices in class {c}, wants {want}"));
            }
        }
        // (W3): for every sigma with sigma(1) in {i, j} there must be a
        // spanning tight path of start type sigma tau and end type (ij)sigma.
        for sigma in crate::perm::all_perms(k) {
            let s1 = sigma.apply(1) as u8;
            if s1 != i && s1 != j {
                continue;
            }
            if !w3_path_exists(h, host, part, &sigma) {
                violations.push(format!("(W3) {tag} has no spanning path for sigma = {sigma}"));
            }
        }
    }

    let parts: Vec<_> = gadget.parts.values().collect();
    for x in 0..parts.len() {
        for y in x + 1..parts.len() {
            if !parts[x].vertex_set().is_disjoint(&parts[y].vertex_set()) {
                violations.push(format!(
                    "(W4) W_{:?} and W_{:?} overlap",
                    parts[x].edge, parts[y].edge
                ));
            }
        }
    }
    GadgetReport { violations }
}

/// Exhaustive (W3) check for one sigma: the class sequence of any
/// qualifying spanning path is forced by the types, so only the
/// first-half/second-half split of each doubled class is free.
fn w3_path_exists(
    h: &Hypergraph,
    host: &PartitionedHost,
    part: &GadgetPart,
    sigma: &Perm,
) -> bool {
    let k = h.k();
    let (i, j) = part.edge;
    let wset = part.vertex_set();
    // vertices by class; the unique unpartitioned vertex must sit at slot k
    let mut by_class: BTreeMap<u8, Vec<u32>> = BTreeMap::new();
    let mut off = Vec::new();
    for &v in &wset {
        match host.classes.class_of(v) {
            Some(c) => by_class.entry(c).or_default().push(v),
            None => off.push(v),
        }
    }
    if off.len() != 1 {
        return false;
    }
    let a = sigma.apply(1) as u8;
    let b = if a == i { j } else { i };
    let swap = Perm::cycle(k, &[i, j]).expect("i, j in range");
    let end_type = swap.compose(sigma).expect("same k");
    // class of position p (1-based): first half sigma(p+1), slot k the off
    // vertex, second half end_type(p - k + 1).
    let free_classes: Vec<u8> =
        (1..=k as u8).filter(|c| by_class.get(c).map_or(0, |v| v.len()) == 2).collect();
    if by_class.get(&a).map_or(0, |v| v.len()) != 1 || by_class.get(&b).map_or(0, |v| v.len()) != 1
    {
        return false;
    }
    for split in 0u32..(1 << free_classes.len()) {
        let mut pick_first: BTreeMap<u8, u32> = BTreeMap::new();
        let mut pick_second: BTreeMap<u8, u32> = BTreeMap::new();
        for (bit, &c) in free_classes.iter().enumerate() {
            let pair = &by_class[&c];
            let (x, y) = if split & (1 << bit) == 0 { (pair[0], pair[1]) } else { (pair[1], pair[0]) };
            pick_first.insert(c, x);
            pick_second.insert(c, y);
        }
        pick_first.insert(b, by_class[&b][0]);
        pick_second.insert(a, by_class[&a][0]);
        let mut verts = Vec::with_capacity(2 * k - 1);
        let mut feasible = true;
        for m in 2..=k {
            match pick_first.get(&(sigma.apply(m) as u8)) {
                Some(&v) => verts.push(v),
                None => {
                    feasible = false;
                    break;
                }
            }
        }
        if !feasible {
            continue;
        }
        verts.push(off[0]);
        for m in 2..=k {
            match pick_second.get(&(end_type.apply(m) as u8)) {
                Some(&v) => verts.push(v),
                None => {
                    feasible = false;
                    break;
                }
            }
        }
        if feasible && verts.windows(k).all(|w| h.has_edge(w)) {
            return true;
        }
    }
    false
}

/// Backtracking gadget search shaped like the existence proof: per edge ij
/// pick an outside vertex w, a transversal star pair, and one pair per
/// remaining class whose mixed transversals all complete edges through w.
pub fn find_gadget(
    h: &Hypergraph,
    host: &PartitionedHost,
    g: &KGraph,
    avoid: &[u32],
    budget: &mut Budget,
) -> Result<Option<Gadget>> {
    let k = h.k();
    if host.classes.num_classes() != k {
        return Err(Error::BadArity {
            what: "gadget host classes",
            got: host.classes.num_classes(),
            need: k,
        });
    }
    let avoid: HashSet<u32> = avoid.iter().copied().collect();
    let host_vertices: HashSet<u32> = host.classes.all_vertices().into_iter().collect();
    let edges: Vec<(u8, u8)> = g.edges().collect();
    let mut parts: BTreeMap<(u8, u8), GadgetPart> = BTreeMap::new();
    let mut used: HashSet<u32> = HashSet::new();
    if place_parts(h, host, &edges, 0, &avoid, &host_vertices, &mut used, &mut parts, budget)? {
        let gadget = Gadget { k, parts };
        let avoid_vec: Vec<u32> = avoid.iter().copied().collect();
        let report = verify_gadget(h, host, g, &gadget, &avoid_vec);
        if !report.is_ok() {
            return Err(Error::invalid(format!(
                "constructed gadget failed verification: {:?}",
                report.violations
            )));
        }
        Ok(Some(gadget))
    } else {
        Ok(None)
    }
}

#[allow(clippy::too_many_arguments)]
fn place_parts(
    h: &Hypergraph,
    host: &PartitionedHost,
    edges: &[(u8, u8)],
    idx: usize,
    avoid: &HashSet<u32>,
    host_vertices: &HashSet<u32>,
    used: &mut HashSet<u32>,
    parts: &mut BTreeMap<(u8, u8), GadgetPart>,
    budget: &mut Budget,
) -> Result<bool> {
    if idx == edges.len() {
        return Ok(true);
    }
    let k = h.k();
    let (i, j) = edges[idx];
    let free = |v: &u32, used: &HashSet<u32>| !avoid.contains(v) && !used.contains(v);

    let w_candidates: Vec<u32> = (0..h.n() as u32)
        .filter(|v| !host_vertices.contains(v) && free(v, used))
        .collect();
    let class_i: Vec<u32> = host.classes.class(i).iter().copied().filter(|v| free(v, used)).collect();
    let class_j: Vec<u32> = host.classes.class(j).iter().copied().filter(|v| free(v, used)).collect();
    let rest: Vec<u8> = (1..=k as u8).filter(|&c| c != i && c != j).collect();

    for &w in &w_candidates {
        for &xi in &class_i {
            for &xj in &class_j {
                budget.spend("find_gadget", 1)?;
                let mut pair_choice: Vec<(u8, u32, u32)> = Vec::new();
                if choose_pairs(h, host, w, xi, xj, &rest, 0, avoid, used, &mut pair_choice, budget)?
                {
                    let mut star = BTreeMap::new();
                    star.insert(i, xi);
                    star.insert(j, xj);
                    let pairs: BTreeMap<u8, (u32, u32)> =
                        pair_choice.iter().map(|&(c, a, b)| (c, (a, b))).collect();
                    let part = GadgetPart { edge: (i, j), w, star, pairs };
                    let wset = part.vertex_set();
                    for &v in &wset {
                        used.insert(v);
                    }
                    parts.insert((i, j), part);
                    if place_parts(h, host, edges, idx + 1, avoid, host_vertices, used, parts, budget)? {
                        return Ok(true);
                    }
                    parts.remove(&(i, j));
                    for v in wset {
                        used.remove(&v);
                    }
                }
            }
        }
    }
    Ok(false)
}

/// Picks a pair per class in `rest` so that every mixed transversal D has
/// both {w} ∪ D ∪ {x*_i} and {w} ∪ D ∪ {x*_j} as edges.
#[allow(clippy::too_many_arguments)]
fn choose_pairs(
    h: &Hypergraph,
    host: &PartitionedHost,
    w: u32,
    xi: u32,
    xj: u32,
    rest: &[u8],
    idx: usize,
    avoid: &HashSet<u32>,
    used: &HashSet<u32>,
    chosen: &mut Vec<(u8, u32, u32)>,
    budget: &mut Budget,
) -> Result<bool> {
    if idx == rest.len() {
        return Ok(check_all_transversals(h, w, xi, xj, chosen));
    }
    let class: Vec<u32> = host
        .classes
        .class(rest[idx])
        .iter()
        .copied()
        .filter(|v| {
            !avoid.contains(v)
                && !used.contains(v)
                && chosen.iter().all(|&(_, a, b)| a != *v && b != *v)
        })
        .collect();
    for ai in 0..class.len() {
        for bi in ai + 1..class.len() {
            budget.spend("find_gadget", 1)?;
            chosen.push((rest[idx], class[ai], class[bi]));
            if choose_pairs(h, host, w, xi, xj, rest, idx + 1, avoid, used, chosen, budget)? {
                return Ok(true);
            }
            chosen.pop();
        }
    }
    Ok(false)
}

fn check_all_transversals(
    h: &Hypergraph,
    w: u32,
    xi: u32,
    xj: u32,
    chosen: &[(u8, u32, u32)],
) -> bool {
    let combos = 1u32 << chosen.len();
    for pick in 0..combos {
        let mut base: Vec<u32> = vec![w];
        for (bit, &(_, a, b)) in chosen.iter().enumerate() {
            base.push(if pick & (1 << bit) == 0 { a } else { b });
        }
        let mut with_i = base.clone();
        with_i.push(xi);
        if !h.has_edge(&with_i) {
            return false;
        }
        base.push(xj);
        if !h.has_edge(&base) {
            return false;
        }
    }
    true
}

/// Result of one constructive extension: the grown path, the gadget that
/// remains, and the audited consumption counts.
#[derive(Debug, Clone)]
pub struct Extension {
    pub path: TightPath,
    pub leftover: Gadget,
    /// |V_i ∩ (V(P') \ V(P))| per class, 1-based index shifted down by one.
    pub consumed_per_class: Vec<usize>,
    /// Off-host vertices newly on the path (the consumed w_ij).
    pub new_off_host: Vec<u32>,
}

fn consumption(host: &PartitionedHost, before: &[u32], after: &[u32]) -> (Vec<usize>, Vec<u32>) {
    let k = host.classes.num_classes();
    let old: HashSet<u32> = before.iter().copied().collect();
    let mut per_class = vec![0usize; k];
    let mut off = Vec::new();
    for &v in after {
        if old.contains(&v) {
            continue;
        }
        match host.classes.class_of(v) {
            Some(c) => per_class[c as usize - 1] += 1,
            None => off.push(v),
        }
    }
    off.sort_unstable();
    (per_class, off)
}

fn lowest_fresh(
    host: &PartitionedHost,
    class: u8,
    path: &[u32],
    also_avoid: &BTreeSet<u32>,
) -> Result<u32> {
    host.classes
        .class(class)
        .iter()
        .copied()
        .find(|v| !path.contains(v) && !also_avoid.contains(v))
        .ok_or_else(|| {
            Error::hypothesis("simple extension", format!("class {class} has no fresh vertex"))
        })
}

/// Extends a path of end type pi by a cyclic permutation sigma =
/// (i_1 .. i_r) with pi(1) = i_r, spending the gadget parts along the path
/// i_1 .. i_r and returning the audited outcome.
pub fn extend_by_cycle_perm(
    h: &Hypergraph,
    host: &PartitionedHost,
    path: &TightPath,
    sigma: &Perm,
    gadget: &Gadget,
) -> Result<Extension> {
    const OP: &str = "extend_by_cycle_perm";
    let dec = sigma.decompose();
    if dec.cycles.len() != 1 {
        return Err(Error::hypothesis(OP, format!("sigma = {sigma} is not a single cycle")));
    }
    let cycle = dec.cycles[0].clone(); // (i_1 .. i_r), minimum last
    let r = cycle.len();
    let pi = path.end_type().ok_or_else(|| Error::hypothesis(OP, "path has no end type"))?;
    if pi.apply(1) as u8 != cycle[r - 1] {
        return Err(Error::hypothesis(
            OP,
            format!("pi(1) = {} but the cycle minimum is {}", pi.apply(1), cycle[r - 1]),
        ));
    }
    let g = gadget.edge_graph();
    for w in cycle.windows(2) {
        if !g.has_edge(w[0], w[1]) {
            return Err(Error::hypothesis(OP, format!("gadget lacks the edge {}{}", w[0], w[1])));
        }
    }
    let on_path: HashSet<u32> = path.vertices().iter().copied().collect();
    if gadget.vertices().iter().any(|v| on_path.contains(v)) {
        return Err(Error::hypothesis(OP, "gadget does not avoid the path"));
    }
    let need = 2 * gadget.edge_count();
    for &c in &cycle {
        let avail = host.classes.class(c).iter().filter(|v| !on_path.contains(v)).count();
        if avail < need {
            return Err(Error::hypothesis(
                OP,
                format!("class {c} has {avail} fresh vertices, wants {need}"),
            ));
        }
    }

    let mut current = path.clone();
    let mut left = gadget.clone();
    // transpositions applied innermost-first: (i_{r-1} i_r), .., (i_1 i_2)
    for step in (0..r - 1).rev() {
        let (a, b) = (cycle[step], cycle[step + 1]);
        let part = left.take((a, b))?;
        let pi_cur = current.end_type().ok_or_else(|| Error::hypothesis(OP, "untyped path"))?;
        let mut avoid = left.vertices();
        avoid.extend(part.vertex_set());
        let x = lowest_fresh(host, pi_cur.apply(1) as u8, current.vertices(), &avoid)?;
        let bridge = simple_extend(h, &current, x)?;
        let spanning = part.spanning_path(&pi_cur)?;
        let mut verts = bridge.vertices().to_vec();
        verts.extend_from_slice(&spanning);
        current = TightPath::new(h, path.frame.clone(), verts)?;
    }

    // audit against the lemma's conclusions
    let got = current.end_type().ok_or_else(|| Error::hypothesis(OP, "result untyped"))?;
    let want = sigma.compose(&pi)?;
    if got != want {
        return Err(Error::invalid(format!("{OP}: end type {got}, expected {want}")));
    }
    if current.len() != path.len() + 2 * h.k() * (r - 1) {
        return Err(Error::invalid(format!("{OP}: grew by {}", current.len() - path.len())));
    }
    let (consumed, off) = consumption(host, path.vertices(), current.vertices());
    for c in 1..=h.k() as u8 {
        let want = if cycle[..r - 1].contains(&c) { 2 * (r - 1) - 1 } else { 2 * (r - 1) };
        if consumed[c as usize - 1] != want {
            return Err(Error::invalid(format!(
                "{OP}: class {c} consumed {}, expected {want}",
                consumed[c as usize - 1]
            )));
        }
    }
    let expected_off: BTreeSet<u32> =
        cycle.windows(2).map(|w| gadget.outside((w[0], w[1])).unwrap()).collect();
    if off.iter().copied().collect::<BTreeSet<u32>>() != expected_off {
        return Err(Error::invalid(format!("{OP}: off-host usage {off:?} != {expected_off:?}")));
    }
    Ok(Extension { path: current, leftover: left, consumed_per_class: consumed, new_off_host: off })
}

/// Extends a path of end type id to one of end type sigma tau^{m(sigma)-1},
/// consuming exactly the G_sigma part of the gadget.
pub fn extend_to_sigma(
    h: &Hypergraph,
    host: &PartitionedHost,
    path: &TightPath,
    sigma: &Perm,
    gadget: &Gadget,
) -> Result<Extension> {
    const OP: &str = "extend_to_sigma";
    let k = h.k();
    let pi = path.end_type().ok_or_else(|| Error::hypothesis(OP, "path has no end type"))?;
    if !pi.is_identity() {
        return Err(Error::hypothesis(OP, format!("end type is {pi}, wants id")));
    }
    let stats = sigma.sigma_stats();
    let g = gadget.edge_graph();
    if !g.contains(&stats.g_sigma) {
        return Err(Error::hypothesis(OP, "gadget graph does not contain G_sigma"));
    }
    let on_path: HashSet<u32> = path.vertices().iter().copied().collect();
    if gadget.vertices().iter().any(|v| on_path.contains(v)) {
        return Err(Error::hypothesis(OP, "gadget does not avoid the path"));
    }
    let need = 2 * gadget.edge_count() + 2;
    for c in 1..=k as u8 {
        let avail = host.classes.class(c).iter().filter(|v| !on_path.contains(v)).count();
        if avail < need {
            return Err(Error::hypothesis(
                OP,
                format!("class {c} has {avail} fresh vertices, wants {need}"),
            ));
        }
    }

    let mut current = path.clone();
    let mut left = gadget.clone();
    let mut m_prev = 1usize;
    for cyc in &sigma.decompose().cycles {
        let m_j = *cyc.last().unwrap() as usize;
        for _ in 0..m_j - m_prev {
            let pi_cur =
                current.end_type().ok_or_else(|| Error::hypothesis(OP, "untyped path"))?;
            let avoid = left.vertices();
            let x = lowest_fresh(host, pi_cur.apply(1) as u8, current.vertices(), &avoid)?;
            current = simple_extend(h, &current, x)?;
        }
        let cyc_perm = Perm::cycle(k, cyc)?;
        let ext = extend_by_cycle_perm(h, host, &current, &cyc_perm, &left)?;
        current = ext.path;
        left = ext.leftover;
        m_prev = m_j;
    }

    // audit against the lemma's conclusions
    let got = current.end_type().ok_or_else(|| Error::hypothesis(OP, "result untyped"))?;
    let want = sigma.compose(&Perm::tau_power(k, stats.m as i64 - 1))?;
    if got != want {
        return Err(Error::invalid(format!("{OP}: end type {got}, expected {want}")));
    }
    let expect_len = path.len() + 2 * k * stats.g_sigma.edge_count() + stats.m - 1;
    if current.len() != expect_len {
        return Err(Error::invalid(format!("{OP}: length {}, expected {expect_len}", current.len())));
    }
    let (consumed, off) = consumption(host, path.vertices(), current.vertices());
    for c in 0..k {
        let want = 2 * stats.g_sigma.edge_count() + usize::from(stats.y_flags[c])
            - usize::from(stats.x_flags[c]);
        if consumed[c] != want {
            return Err(Error::invalid(format!(
                "{OP}: class {} consumed {}, expected {want}",
                c + 1,
                consumed[c]
            )));
        }
    }
    let expected_off: BTreeSet<u32> =
        stats.g_sigma.edges().map(|e| gadget.outside(e).unwrap()).collect();
    if off.iter().copied().collect::<BTreeSet<u32>>() != expected_off {
        return Err(Error::invalid(format!("{OP}: off-host usage {off:?} != {expected_off:?}")));
    }
    Ok(Extension { path: current, leftover: left, consumed_per_class: consumed, new_off_host: off })
}

/// The gadget graph close_cycle will consume, in original class labels:
/// pi applied edgewise to G_{(pi^{-1} sigma) tau^{-r}}.
pub fn required_gadget_graph(sigma: &Perm, pi: &Perm, r: usize) -> Result<KGraph> {
    let k = sigma.k();
    let conj_start = pi.inverse().compose(sigma)?;
    let sigma_prime = conj_start.compose(&Perm::tau_power(k, -(r as i64)))?;
    let g = sigma_prime.sigma_stats().g_sigma;
    KGraph::from_edges(
        k,
        g.edges().map(|(a, b)| (pi.apply(a as usize) as u8, pi.apply(b as usize) as u8)),
    )
}

/// A certified closed cycle together with its consumption audit.
#[derive(Debug, Clone)]
pub struct ClosedCycle {
    pub cycle: TightCycle,
    /// |V_i ∩ (V(C) \ V(P))| per original class.
    pub consumed_per_class: Vec<usize>,
    pub used_pendants: Vec<u32>,
    /// Whether the per-class balance clause was checked (only when the
    /// start and end types coincide) and its outcome.
    pub balance_checked: Option<bool>,
}

/// Closes a typed path into a tight cycle on |V(P)| + s_extra vertices.
/// The gadget must cover `required_gadget_graph(start, end, s_extra mod k)`
/// and avoid the path.
pub fn close_cycle(
    h: &Hypergraph,
    host: &PartitionedHost,
    path: &TightPath,
    s_extra: usize,
    gadget: &Gadget,
) -> Result<ClosedCycle> {
    const OP: &str = "close_cycle";
    let k = h.k();
    if s_extra < k * (2 * k - 1) {
        return Err(Error::hypothesis(
            OP,
            format!("s_extra = {s_extra} below the floor k(2k-1) = {}", k * (2 * k - 1)),
        ));
    }
    let r = s_extra % k;
    let sigma = path.start_type().ok_or_else(|| Error::hypothesis(OP, "path has no start type"))?;
    let pi = path.end_type().ok_or_else(|| Error::hypothesis(OP, "path has no end type"))?;

    // Conjugate the frame by pi so the end type becomes id.
    let conj_frame = VertexPartition::new(
        (1..=k).map(|i| host.classes.class(pi.apply(i) as u8).to_vec()).collect(),
    )?;
    let conj_host = PartitionedHost { graph: host.graph.clone(), classes: conj_frame.clone() };
    let conj_path = TightPath::new(h, conj_frame.clone(), path.vertices().to_vec())?;
    let sigma_c = pi.inverse().compose(&sigma)?;
    debug_assert_eq!(conj_path.end_type(), Some(Perm::identity(k)));
    debug_assert_eq!(conj_path.start_type(), Some(sigma_c.clone()));

    let sigma_prime = sigma_c.compose(&Perm::tau_power(k, -(r as i64)))?;
    let g = sigma_prime.sigma_stats().g_sigma;
    let conj_gadget = gadget.conjugate(&pi);
    if !conj_gadget.edge_graph().contains(&g) {
        return Err(Error::hypothesis(OP, "gadget does not cover the required graph"));
    }
    let on_path: HashSet<u32> = path.vertices().iter().copied().collect();
    if gadget.vertices().iter().any(|v| on_path.contains(v)) {
        return Err(Error::hypothesis(OP, "gadget does not avoid the path"));
    }
    let need = s_extra / k + 1;
    for c in 1..=k as u8 {
        let avail = host.classes.class(c).iter().filter(|v| !on_path.contains(v)).count();
        if avail < need {
            return Err(Error::hypothesis(
                OP,
                format!("class {c} has {avail} fresh vertices, wants {need}"),
            ));
        }
    }

    let ext = extend_to_sigma(h, &conj_host, &conj_path, &sigma_prime, &conj_gadget)?;
    let mut current = ext.path;
    let left = ext.leftover;
    let m = sigma_prime.sigma_stats().m;
    let consumed_so_far = 2 * k * g.edge_count() + m - 1;
    let remaining = s_extra
        .checked_sub(consumed_so_far + (k - m + 1) + r)
        .ok_or_else(|| Error::hypothesis(OP, "s_extra too small for the gadget consumption"))?;
    if remaining % k != 0 {
        return Err(Error::invalid(format!("{OP}: leftover extension {remaining} not divisible")));
    }
    for _ in 0..(k - m + 1) + r + remaining {
        let pi_cur = current.end_type().ok_or_else(|| Error::hypothesis(OP, "untyped path"))?;
        let avoid = left.vertices();
        let x = lowest_fresh(&conj_host, pi_cur.apply(1) as u8, current.vertices(), &avoid)?;
        current = simple_extend(h, &current, x)?;
    }

    // The path now starts and ends with the same type; wrapping closes it.
    if current.end_type() != Some(sigma_c.clone()) || current.start_type() != Some(sigma_c.clone())
    {
        return Err(Error::invalid(format!("{OP}: start/end types failed to align")));
    }
    if current.len() != path.len() + s_extra {
        return Err(Error::invalid(format!(
            "{OP}: cycle would have {} vertices, wants {}",
            current.len(),
            path.len() + s_extra
        )));
    }
    let verts = current.vertices().to_vec();
    for wrap in 1..k {
        let mut window: Vec<u32> = verts[verts.len() - (k - wrap)..].to_vec();
        window.extend_from_slice(&verts[..wrap]);
        if !h.has_edge(&window) {
            return Err(Error::invalid(format!("{OP}: wrap window {window:?} is not an edge")));
        }
    }

    let (consumed, off) = consumption(host, path.vertices(), &verts);
    let expected_off: BTreeSet<u32> =
        g.edges().map(|e| conj_gadget.outside(e).unwrap()).collect();
    if off.iter().copied().collect::<BTreeSet<u32>>() != expected_off {
        return Err(Error::invalid(format!("{OP}: off-host usage {off:?} != {expected_off:?}")));
    }
    let balance_checked = if sigma == pi {
        let max = consumed.iter().max().unwrap();
        let min = consumed.iter().min().unwrap();
        Some(max - min <= 1)
    } else {
        None
    };
    if balance_checked == Some(false) {
        return Err(Error::invalid(format!("{OP}: balance clause violated: {consumed:?}")));
    }
    Ok(ClosedCycle {
        cycle: TightCycle::new(verts)?,
        consumed_per_class: consumed,
        used_pendants: off,
        balance_checked,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{complete_partite, gadget_host};
    use crate::perm::all_perms;

    fn host_with_gadget(
        k: usize,
        t: usize,
        g: &KGraph,
    ) -> (crate::constructions::GadgetHost, Gadget, TightPath) {
        let base = complete_partite(k, &vec![t; k]).unwrap();
        let roomy = gadget_host(&base, g).unwrap();
        let p_verts: Vec<u32> = (1..=k as u8).map(|c| roomy.host.classes.class(c)[0]).collect();
        let path =
            TightPath::new(&roomy.host.graph, roomy.host.classes.clone(), p_verts).unwrap();
        let gadget = find_gadget(
            &roomy.host.graph,
            &roomy.host,
            g,
            path.vertices(),
            &mut Budget::default(),
        )
        .unwrap()
        .expect("roomy hosts always carry a gadget");
        (roomy, gadget, path)
    }

    #[test]
    fn types_of_a_transversal_edge() {
        let host = complete_partite(3, &[2, 2, 2]).unwrap();
        let path =
            TightPath::new(&host.graph, host.classes.clone(), vec![0, 2, 4]).unwrap();
        assert_eq!(path.start_type().unwrap(), Perm::identity(3));
        assert_eq!(path.end_type().unwrap(), Perm::identity(3));
        // a stub in classes 2, 3 starts with the free slot at the back:
        // sigma = (1 2 3), the rotation
        let stub = TightPath::new(&host.graph, host.classes.clone(), vec![2, 4]).unwrap();
        assert_eq!(stub.start_type().unwrap(), Perm::tau(3));
    }

    #[test]
    fn untyped_paths_return_none() {
        let host = complete_partite(3, &[2, 2, 2]).unwrap();
        // two ends in the same class collide
        let h = Hypergraph::complete(3, 6);
        let path = TightPath::new(&h, host.classes.clone(), vec![2, 0, 1]).unwrap();
        assert!(path.end_type().is_none());
        // vertices outside the frame are untyped
        let narrow = VertexPartition::new(vec![vec![0], vec![2], vec![4]]).unwrap();
        let stray = TightPath::new(&h, narrow, vec![0, 2, 5]).unwrap();
        assert!(stray.end_type().is_none());
    }

    #[test]
    fn simple_extension_rotates_by_tau() {
        let host = complete_partite(3, &[3, 3, 3]).unwrap();
        let path = TightPath::new(&host.graph, host.classes.clone(), vec![0, 3, 6]).unwrap();
        let tau = Perm::tau(3);
        let once = simple_extend(&host.graph, &path, 1).unwrap();
        assert_eq!(once.end_type().unwrap(), tau);
        // three successive extensions return to the identity
        let twice = simple_extend(&host.graph, &once, 4).unwrap();
        let thrice = simple_extend(&host.graph, &twice, 7).unwrap();
        assert_eq!(thrice.end_type().unwrap(), Perm::identity(3));
        // wrong class or missing edge are hypothesis errors
        assert!(simple_extend(&host.graph, &path, 4).is_err());
        let sparse = Hypergraph::new(3, 9, vec![vec![0, 3, 6]]).unwrap();
        let p2 = TightPath::new(&sparse, host.classes.clone(), vec![0, 3, 6]).unwrap();
        assert!(simple_extend(&sparse, &p2, 1).is_err());
    }

    #[test]
    fn gadget_search_and_verification_round_trip() {
        let g = KGraph::from_edges(3, vec![(1, 2), (2, 3)]).unwrap();
        let (roomy, gadget, path) = host_with_gadget(3, 6, &g);
        let report = verify_gadget(&roomy.host.graph, &roomy.host, &g, &gadget, path.vertices());
        assert!(report.is_ok(), "violations: {:?}", report.violations);
        assert_eq!(gadget.edge_count(), 2);
    }

    #[test]
    fn no_gadget_without_outside_vertices() {
        let base = complete_partite(3, &[4, 4, 4]).unwrap();
        let g = KGraph::from_edges(3, vec![(1, 2)]).unwrap();
        let found =
            find_gadget(&base.graph, &base, &g, &[], &mut Budget::default()).unwrap();
        assert!(found.is_none());
    }

    #[test]
    fn verification_flags_tampered_gadgets() {
        let g = KGraph::from_edges(3, vec![(1, 2), (2, 3)]).unwrap();
        let (roomy, gadget, _) = host_with_gadget(3, 6, &g);
        // (W1)/(W2): collapse a pair into a repeated vertex
        let mut small = gadget.clone();
        if let Some(part) = small.parts.get_mut(&(1, 2)) {
            let c = *part.pairs.keys().next().unwrap();
            let (a, _) = part.pairs[&c];
            part.pairs.insert(c, (a, a));
        }
        let report = verify_gadget(&roomy.host.graph, &roomy.host, &g, &small, &[]);
        assert!(report.violations.iter().any(|v| v.contains("(W1)") || v.contains("(W2)")));
        // (W4): make the two parts overlap
        let mut overlap = gadget.clone();
        let donor = overlap.parts[&(1, 2)].clone();
        if let Some(part) = overlap.parts.get_mut(&(2, 3)) {
            part.w = donor.w;
        }
        let report = verify_gadget(&roomy.host.graph, &roomy.host, &g, &overlap, &[]);
        assert!(report.violations.iter().any(|v| v.contains("(W4)")));
    }

    #[test]
    fn cycle_perm_extension_audits() {
        // r = 2, k = 3: one transposition costs 2k = 6 vertices
        let sigma = Perm::cycle(3, &[2, 1]).unwrap();
        let g = sigma.sigma_stats().g_sigma;
        let (roomy, gadget, path) = host_with_gadget(3, 8, &g);
        // the path must end with pi(1) = the cycle minimum 1
        assert_eq!(path.end_type().unwrap().apply(1), 1);
        let ext =
            extend_by_cycle_perm(&roomy.host.graph, &roomy.host, &path, &sigma, &gadget).unwrap();
        assert_eq!(ext.path.len(), path.len() + 6);
        // classes i_1 .. i_{r-1} = {2} take 2(r-1)-1 = 1, the rest take 2
        assert_eq!(ext.consumed_per_class, vec![2, 1, 2]);
        assert_eq!(ext.new_off_host.len(), 1);
        assert_eq!(ext.path.end_type().unwrap(), sigma.compose(&path.end_type().unwrap()).unwrap());
    }

    #[test]
    fn full_cycle_consumes_every_pendant() {
        let sigma = Perm::cycle(4, &[2, 3, 4, 1]).unwrap();
        let g = sigma.sigma_stats().g_sigma;
        let (roomy, gadget, path) = host_with_gadget(4, 10, &g);
        let ext =
            extend_by_cycle_perm(&roomy.host.graph, &roomy.host, &path, &sigma, &gadget).unwrap();
        assert_eq!(ext.new_off_host.len(), 3);
        assert!(ext.leftover.parts.is_empty());
        assert_eq!(ext.path.len(), path.len() + 2 * 4 * 3);
    }

    #[test]
    fn sigma_extension_matches_flag_arithmetic() {
        // sigma = tau^{-1} at k = 3: growth 2k|E| + m - 1 = 12 + 1 - 1 = 12
        let sigma = Perm::tau_power(3, -1);
        let g = sigma.sigma_stats().g_sigma;
        let (roomy, gadget, path) = host_with_gadget(3, 8, &g);
        let ext = extend_to_sigma(&roomy.host.graph, &roomy.host, &path, &sigma, &gadget).unwrap();
        assert_eq!(ext.path.len(), path.len() + 12);
        let stats = sigma.sigma_stats();
        for c in 0..3 {
            let want = 2 * stats.g_sigma.edge_count() + usize::from(stats.y_flags[c])
                - usize::from(stats.x_flags[c]);
            assert_eq!(ext.consumed_per_class[c], want);
        }
    }

    #[test]
    fn identity_extension_is_a_no_op() {
        let g = KGraph::from_edges(3, vec![(1, 2)]).unwrap();
        let (roomy, gadget, path) = host_with_gadget(3, 6, &g);
        let ext =
            extend_to_sigma(&roomy.host.graph, &roomy.host, &path, &Perm::identity(3), &gadget)
                .unwrap();
        assert_eq!(ext.path.len(), path.len());
        assert_eq!(ext.leftover.edge_count(), 1);
        assert!(ext.new_off_host.is_empty());
    }

    #[test]
    fn sigma_extension_exhaustive_k3() {
        // every sigma in S_3 against a complete gadget graph
        for sigma in all_perms(3) {
            let g = KGraph::complete(3);
            let (roomy, gadget, path) = host_with_gadget(3, 10, &g);
            let ext =
                extend_to_sigma(&roomy.host.graph, &roomy.host, &path, &sigma, &gadget).unwrap();
            let stats = sigma.sigma_stats();
            assert_eq!(
                ext.path.len(),
                path.len() + 2 * 3 * stats.g_sigma.edge_count() + stats.m - 1,
                "sigma = {sigma}"
            );
        }
    }

    #[test]
    fn close_cycle_fixture_c22() {
        // one edge, s_extra = 19 in a gadget host over K^3(8,8,8)
        let sigma_prime = Perm::tau_power(3, -1);
        let g = sigma_prime.sigma_stats().g_sigma;
        let (roomy, gadget, path) = host_with_gadget(3, 8, &g);
        let closed = close_cycle(&roomy.host.graph, &roomy.host, &path, 19, &gadget).unwrap();
        assert_eq!(closed.cycle.len(), 22);
        assert!(crate::search::is_tight_cycle(&roomy.host.graph, closed.cycle.vertices()));
        assert_eq!(closed.balance_checked, Some(true));
        assert_eq!(closed.used_pendants.len(), 2);
    }

    #[test]
    fn close_cycle_pure_rotation_needs_no_gadget() {
        // s_extra = 15 = k(2k-1) with r = 0: simple extensions only
        let host = complete_partite(3, &[7, 7, 7]).unwrap();
        let p_verts: Vec<u32> = (1..=3u8).map(|c| host.classes.class(c)[0]).collect();
        let path = TightPath::new(&host.graph, host.classes.clone(), p_verts).unwrap();
        let closed =
            close_cycle(&host.graph, &host, &path, 15, &Gadget::empty(3)).unwrap();
        assert_eq!(closed.cycle.len(), 18);
        assert!(crate::search::is_tight_cycle(&host.graph, closed.cycle.vertices()));
    }

    #[test]
    fn close_cycle_rejects_short_lengths() {
        let host = complete_partite(3, &[7, 7, 7]).unwrap();
        let p_verts: Vec<u32> = (1..=3u8).map(|c| host.classes.class(c)[0]).collect();
        let path = TightPath::new(&host.graph, host.classes.clone(), p_verts).unwrap();
        assert!(close_cycle(&host.graph, &host, &path, 12, &Gadget::empty(3)).is_err());
    }

    #[test]
    fn required_graph_is_conjugated() {
        let sigma = Perm::identity(3);
        let pi = Perm::identity(3);
        let g = required_gadget_graph(&sigma, &pi, 1).unwrap();
        assert_eq!(g, Perm::tau_power(3, -1).sigma_stats().g_sigma);
    }
}
