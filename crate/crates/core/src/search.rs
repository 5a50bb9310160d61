//! Exact decision and search procedures: tight-cycle containment,
//! coverings, perfect and maximum tilings, the {F_s, E_s}-tiling
//! optimiser, K^k_k(t) through a vertex, the linking host, and the
//! bipartite auxiliary graph.
//!
//! Every positive answer is a witness that re-validates from scratch;
//! every negative answer is the result of an exhausted branch tree.
//! Running out of budget is an error, never an answer.

use std::collections::{BTreeSet, HashMap, HashSet};

use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::constructions::{gcd, PartitionedHost, TileFamily, VertexPartition};
use crate::hypergraph::WindowIndex;
use crate::kgraph::KGraph;
use crate::{Error, Hypergraph, Result};

/// Node budget for the backtracking searches. The default of 10^7 nodes
/// decides every desk-scale instance in this crate with room to spare.
#[derive(Debug, Clone)]
pub struct Budget {
    pub limit: u64,
    pub spent: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { limit: 10_000_000, spent: 0 }
    }
}

impl Budget {
    pub fn new(limit: u64) -> Budget {
        Budget { limit, spent: 0 }
    }

    pub fn spend(&mut self, op: &'static str, n: u64) -> Result<()> {
        self.spent += n;
        if self.spent > self.limit {
            Err(Error::BudgetExceeded { op, budget: self.limit })
        } else {
            Ok(())
        }
    }
}

/// A tight cycle in rotation-canonical form: the least vertex first, then
/// the lexicographically smaller of the two directions.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TightCycle {
    verts: Vec<u32>,
}

impl TightCycle {
    pub fn new(verts: Vec<u32>) -> Result<TightCycle> {
        if verts.len() < 3 {
            return Err(Error::invalid("cycles need at least 3 vertices"));
        }
        let distinct: HashSet<u32> = verts.iter().copied().collect();
        if distinct.len() != verts.len() {
            return Err(Error::invalid("cycle has repeated vertices"));
        }
        Ok(TightCycle { verts: canonical_rotation(&verts) })
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

    pub fn vertex_set(&self) -> BTreeSet<u32> {
        self.verts.iter().copied().collect()
    }
}

fn canonical_rotation(verts: &[u32]) -> Vec<u32> {
    let pos = verts.iter().enumerate().min_by_key(|(_, &v)| v).map(|(i, _)| i).unwrap();
    let mut fwd = verts.to_vec();
    fwd.rotate_left(pos);
    let mut bwd: Vec<u32> = verts.to_vec();
    bwd.reverse();
    let pos_b = bwd.iter().enumerate().min_by_key(|(_, &v)| v).map(|(i, _)| i).unwrap();
    bwd.rotate_left(pos_b);
    if bwd < fwd {
        bwd
    } else {
        fwd
    }
}

/// True iff the sequence is a tight cycle of H: distinct vertices, length
/// above k, and every cyclic window of k consecutive vertices an edge.
pub fn is_tight_cycle(h: &Hypergraph, seq: &[u32]) -> bool {
    let k = h.k();
    let s = seq.len();
    if s <= k {
        return false;
    }
    let distinct: HashSet<u32> = seq.iter().copied().collect();
    if distinct.len() != s {
        return false;
    }
    (0..s).all(|i| {
        let window: Vec<u32> = (0..k).map(|d| seq[(i + d) % s]).collect();
        h.has_edge(&window)
    })
}

struct CycleSearch<'a> {
    h: &'a Hypergraph,
    index: WindowIndex,
    /// rank[v]: position of v in the smallest-degree-first order.
    rank: Vec<usize>,
    order: Vec<u32>,
    s: usize,
}

impl<'a> CycleSearch<'a> {
    fn new(h: &'a Hypergraph, s: usize) -> Self {
        let degs: Vec<usize> = (0..h.n() as u32).map(|v| h.degree(&[v]).unwrap_or(0)).collect();
        let mut order: Vec<u32> = (0..h.n() as u32).collect();
        order.sort_by_key(|&v| (degs[v as usize], v));
        let mut rank = vec![0usize; h.n()];
        for (r, &v) in order.iter().enumerate() {
            rank[v as usize] = r;
        }
        CycleSearch { h, index: WindowIndex::new(h), rank, order, s }
    }

    /// Depth-first extension. `floor` restricts candidates to vertices
    /// above it (the enumerator anchors the cycle minimum); `collect`
    /// gathers every cycle instead of stopping at the first.
    fn dfs(
        &self,
        seq: &mut Vec<u32>,
        used: &mut HashSet<u32>,
        floor: Option<u32>,
        mut collect: Option<&mut HashSet<TightCycle>>,
        budget: &mut Budget,
    ) -> Result<Option<TightCycle>> {
        budget.spend("cycle_search", 1)?;
        let k = self.h.k();
        if seq.len() == self.s {
            if self.wraps(seq) {
                let cycle = TightCycle::new(seq.clone())?;
                return match collect {
                    Some(acc) => {
                        acc.insert(cycle);
                        Ok(None)
                    }
                    None => Ok(Some(cycle)),
                };
            }
            return Ok(None);
        }
        if self.s - seq.len() > self.h.n() - used.len() {
            return Ok(None);
        }
        if seq.len() >= k - 1 {
            let mut window: Vec<u32> = seq[seq.len() - (k - 1)..].to_vec();
            window.sort_unstable();
            let mut cands: Vec<u32> = self.index.extensions(&window).to_vec();
            cands.sort_by_key(|&v| self.rank[v as usize]);
            for x in cands {
                if used.contains(&x) || floor.map_or(false, |f| x <= f) {
                    continue;
                }
                seq.push(x);
                used.insert(x);
                let found = self.dfs(seq, used, floor, collect.as_deref_mut(), budget)?;
                used.remove(&x);
                seq.pop();
                if found.is_some() {
                    return Ok(found);
                }
            }
        } else {
            // short prefix: any fresh vertex keeping the prefix inside an edge
            for &x in &self.order {
                if used.contains(&x) || floor.map_or(false, |f| x <= f) {
                    continue;
                }
                seq.push(x);
                let mut prefix = seq.clone();
                prefix.sort_unstable();
                let viable = self.h.degree(&prefix).map(|d| d > 0).unwrap_or(false);
                if viable {
                    used.insert(x);
                    let found = self.dfs(seq, used, floor, collect.as_deref_mut(), budget)?;
                    used.remove(&x);
                    if found.is_some() {
                        seq.pop();
                        return Ok(found);
                    }
                }
                seq.pop();
            }
        }
        Ok(None)
    }

    fn wraps(&self, seq: &[u32]) -> bool {
        let k = self.h.k();
        let s = seq.len();
        (1..k).all(|wrap| {
            let mut window: Vec<u32> = seq[s - (k - wrap)..].to_vec();
            window.extend_from_slice(&seq[..wrap]);
            self.h.has_edge(&window)
        })
    }
}

/// Exact search for a tight cycle on s vertices through v; `None` means
/// proven absence.
pub fn find_cycle_through(
    h: &Hypergraph,
    v: u32,
    s: usize,
    budget: &mut Budget,
) -> Result<Option<TightCycle>> {
    if s < h.k() + 1 {
        return Err(Error::invalid(format!("cycle length {s} must exceed k = {}", h.k())));
    }
    if v as usize >= h.n() {
        return Err(Error::VertexOutOfRange { vertex: v, n: h.n() });
    }
    let search = CycleSearch::new(h, s);
    let mut seq = vec![v];
    let mut used: HashSet<u32> = seq.iter().copied().collect();
    search.dfs(&mut seq, &mut used, None, None, budget)
}

/// Every tight cycle on s vertices, up to rotation and reflection.
pub fn enumerate_cycles(h: &Hypergraph, s: usize, budget: &mut Budget) -> Result<Vec<TightCycle>> {
    if s < h.k() + 1 {
        return Err(Error::invalid(format!("cycle length {s} must exceed k = {}", h.k())));
    }
    let search = CycleSearch::new(h, s);
    let mut acc: HashSet<TightCycle> = HashSet::new();
    for anchor in 0..h.n() as u32 {
        let mut seq = vec![anchor];
        let mut used: HashSet<u32> = seq.iter().copied().collect();
        search.dfs(&mut seq, &mut used, Some(anchor), Some(&mut acc), budget)?;
    }
    let mut out: Vec<TightCycle> = acc.into_iter().collect();
    out.sort_by(|a, b| a.vertices().cmp(b.vertices()));
    Ok(out)
}

/// Per-vertex covering report with shared witnesses.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoveringReport {
    pub s: usize,
    pub witnesses: Vec<TightCycle>,
    /// For each covered vertex, the index of a witness covering it.
    pub covered: HashMap<u32, usize>,
    pub uncovered: Vec<u32>,
}

/// Decides, vertex by vertex, whether a C_s copy covers it. A found cycle
/// covers all s of its vertices, so later vertices reuse earlier witnesses.
pub fn covering_check(h: &Hypergraph, s: usize, budget: &mut Budget) -> Result<CoveringReport> {
    let mut witnesses: Vec<TightCycle> = Vec::new();
    let mut covered: HashMap<u32, usize> = HashMap::new();
    let mut uncovered: Vec<u32> = Vec::new();
    for v in 0..h.n() as u32 {
        if covered.contains_key(&v) {
            continue;
        }
        match find_cycle_through(h, v, s, budget)? {
            Some(cycle) => {
                let idx = witnesses.len();
                for &u in cycle.vertices() {
                    covered.entry(u).or_insert(idx);
                }
                witnesses.push(cycle);
            }
            None => uncovered.push(v),
        }
    }
    Ok(CoveringReport { s, witnesses, covered, uncovered })
}

/// The pieces a tiling may be built from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PieceKind {
    CycleS,
    FTile,
    ETile,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum PieceWitness {
    Cycle(Vec<u32>),
    Fs { classes: Vec<Vec<u32>>, pendants: Vec<u32> },
    Es { classes: Vec<Vec<u32>> },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TilingPiece {
    pub kind: PieceKind,
    /// Sorted vertex set of the piece.
    pub vertices: Vec<u32>,
    pub witness: PieceWitness,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct Tiling {
    pub pieces: Vec<TilingPiece>,
}

impl Tiling {
    pub fn count(&self, kind: PieceKind) -> usize {
        self.pieces.iter().filter(|p| p.kind == kind).count()
    }

    pub fn covered_vertices(&self) -> BTreeSet<u32> {
        self.pieces.iter().flat_map(|p| p.vertices.iter().copied()).collect()
    }

    /// Re-validates every piece against H and pairwise disjointness.
    pub fn validate(&self, h: &Hypergraph, fam: Option<&TileFamily>) -> Result<()> {
        let mut seen: HashSet<u32> = HashSet::new();
        for piece in &self.pieces {
            for &v in &piece.vertices {
                if !seen.insert(v) {
                    return Err(Error::invalid(format!("tiling pieces overlap at vertex {v}")));
                }
            }
            match &piece.witness {
                PieceWitness::Cycle(seq) => {
                    if !is_tight_cycle(h, seq) {
                        return Err(Error::invalid("cycle piece failed re-validation"));
                    }
                    let set: Vec<u32> = {
                        let s: BTreeSet<u32> = seq.iter().copied().collect();
                        s.into_iter().collect()
                    };
                    if set != piece.vertices {
                        return Err(Error::invalid("cycle piece vertex set mismatch"));
                    }
                }
                PieceWitness::Fs { classes, pendants } => {
                    let fam = fam.ok_or_else(|| {
                        Error::invalid("F-tile piece needs a tile family for validation")
                    })?;
                    validate_fs_embedding(h, fam, classes, pendants)?;
                }
                PieceWitness::Es { classes } => {
                    let fam = fam.ok_or_else(|| {
                        Error::invalid("E-tile piece needs a tile family for validation")
                    })?;
                    for class in classes {
                        if class.len() != fam.m_big {
                            return Err(Error::invalid("E-tile class has the wrong size"));
                        }
                    }
                    check_complete_partite_embedding(h, classes)?;
                }
            }
        }
        Ok(())
    }
}

/// Checks that every transversal of the classes is an edge of H.
pub fn check_complete_partite_embedding(h: &Hypergraph, classes: &[Vec<u32>]) -> Result<()> {
    let k = h.k();
    if classes.len() != k {
        return Err(Error::BadArity { what: "embedding classes", got: classes.len(), need: k });
    }
    let mut stack: Vec<Vec<u32>> = vec![vec![]];
    while let Some(partial) = stack.pop() {
        if partial.len() == k {
            if !h.has_edge(&partial) {
                return Err(Error::invalid(format!("transversal {partial:?} is not an edge")));
            }
            continue;
        }
        for &v in &classes[partial.len()] {
            let mut nxt = partial.clone();
            nxt.push(v);
            stack.push(nxt);
        }
    }
    Ok(())
}

/// Checks a claimed F_s embedding: class sizes, transversal completeness,
/// and both pendant stars per gadget edge.
pub fn validate_fs_embedding(
    h: &Hypergraph,
    fam: &TileFamily,
    classes: &[Vec<u32>],
    pendants: &[u32],
) -> Result<()> {
    let k = h.k();
    if classes.len() != k {
        return Err(Error::BadArity { what: "F-tile classes", got: classes.len(), need: k });
    }
    for (i, class) in classes.iter().enumerate() {
        if class.len() != fam.a[i] {
            return Err(Error::invalid(format!(
                "F-tile class {} has {} vertices, wants {}",
                i + 1,
                class.len(),
                fam.a[i]
            )));
        }
    }
    check_complete_partite_embedding(h, classes)?;
    let g_edges: Vec<(u8, u8)> = fam.g_s.edges().collect();
    if pendants.len() != g_edges.len() {
        return Err(Error::BadArity {
            what: "F-tile pendants",
            got: pendants.len(),
            need: g_edges.len(),
        });
    }
    let mut distinct: HashSet<u32> = classes.iter().flatten().copied().collect();
    for (&w, &(a, b)) in pendants.iter().zip(&g_edges) {
        if !distinct.insert(w) {
            return Err(Error::invalid("F-tile pendant collides with another vertex"));
        }
        check_pendant_stars(h, classes, w, a, b)?;
    }
    Ok(())
}

fn check_pendant_stars(
    h: &Hypergraph,
    classes: &[Vec<u32>],
    w: u32,
    a: u8,
    b: u8,
) -> Result<()> {
    let k = h.k();
    for &skip in &[a, b] {
        let others: Vec<&Vec<u32>> =
            (1..=k as u8).filter(|&c| c != skip).map(|c| &classes[c as usize - 1]).collect();
        let mut stack: Vec<Vec<u32>> = vec![vec![w]];
        while let Some(partial) = stack.pop() {
            if partial.len() == k {
                if !h.has_edge(&partial) {
                    return Err(Error::invalid(format!(
                        "pendant star window {partial:?} is not an edge"
                    )));
                }
                continue;
            }
            for &v in others[partial.len() - 1] {
                let mut nxt = partial.clone();
                nxt.push(v);
                stack.push(nxt);
            }
        }
    }
    Ok(())
}

/// All distinct vertex sets carrying a spanning C_s, each with one
/// certifying cyclic order.
pub fn enumerate_cycle_copies(
    h: &Hypergraph,
    s: usize,
    budget: &mut Budget,
) -> Result<Vec<TightCycle>> {
    let all = enumerate_cycles(h, s, budget)?;
    let mut by_set: HashMap<BTreeSet<u32>, TightCycle> = HashMap::new();
    for c in all {
        by_set.entry(c.vertex_set()).or_insert(c);
    }
    let mut out: Vec<TightCycle> = by_set.into_values().collect();
    out.sort_by(|a, b| a.vertices().cmp(b.vertices()));
    Ok(out)
}

/// Exact-cover search for a perfect C_s-tiling. `Ok(None)` is proven
/// absence; when s does not divide n the answer is immediate.
pub fn perfect_tiling(h: &Hypergraph, s: usize, budget: &mut Budget) -> Result<Option<Tiling>> {
    if h.n() % s != 0 {
        return Ok(None);
    }
    let copies = enumerate_cycle_copies(h, s, budget)?;
    let by_vertex = index_by_vertex(&copies);
    let mut chosen: Vec<usize> = Vec::new();
    let mut used: HashSet<u32> = HashSet::new();
    if cover_all(h.n(), &copies, &by_vertex, &mut used, &mut chosen, budget)? {
        let pieces = chosen
            .iter()
            .map(|&i| TilingPiece {
                kind: PieceKind::CycleS,
                vertices: copies[i].vertex_set().into_iter().collect(),
                witness: PieceWitness::Cycle(copies[i].vertices().to_vec()),
            })
            .collect();
        Ok(Some(Tiling { pieces }))
    } else {
        Ok(None)
    }
}

fn index_by_vertex(copies: &[TightCycle]) -> HashMap<u32, Vec<usize>> {
    let mut by_vertex: HashMap<u32, Vec<usize>> = HashMap::new();
    for (i, c) in copies.iter().enumerate() {
        for &v in c.vertices() {
            by_vertex.entry(v).or_default().push(i);
        }
    }
    by_vertex
}

fn cover_all(
    n: usize,
    copies: &[TightCycle],
    by_vertex: &HashMap<u32, Vec<usize>>,
    used: &mut HashSet<u32>,
    chosen: &mut Vec<usize>,
    budget: &mut Budget,
) -> Result<bool> {
    budget.spend("perfect_tiling", 1)?;
    let Some(pivot) = (0..n as u32).find(|v| !used.contains(v)) else {
        return Ok(true);
    };
    let Some(candidates) = by_vertex.get(&pivot) else {
        return Ok(false);
    };
    for &i in candidates {
        if copies[i].vertices().iter().any(|v| used.contains(v)) {
            continue;
        }
        for &v in copies[i].vertices() {
            used.insert(v);
        }
        chosen.push(i);
        if cover_all(n, copies, by_vertex, used, chosen, budget)? {
            return Ok(true);
        }
        chosen.pop();
        for v in copies[i].vertices() {
            used.remove(v);
        }
    }
    Ok(false)
}

/// A maximum-cardinality C_s-tiling, optimal because the branch tree was
/// exhausted (budget exhaustion is an error).
pub fn max_tiling(h: &Hypergraph, s: usize, budget: &mut Budget) -> Result<Tiling> {
    if h.n() > 64 {
        return Err(Error::invalid("max_tiling supports at most 64 vertices"));
    }
    let copies = enumerate_cycle_copies(h, s, budget)?;
    let masks: Vec<u64> =
        copies.iter().map(|c| c.vertices().iter().fold(0u64, |m, &v| m | 1 << v)).collect();
    let mut best: Vec<usize> = Vec::new();
    let mut stack: Vec<usize> = Vec::new();
    max_disjoint(&masks, 0, 0, &mut stack, &mut best, h.n() / s, budget)?;
    let pieces = best
        .iter()
        .map(|&i| TilingPiece {
            kind: PieceKind::CycleS,
            vertices: copies[i].vertex_set().into_iter().collect(),
            witness: PieceWitness::Cycle(copies[i].vertices().to_vec()),
        })
        .collect();
    Ok(Tiling { pieces })
}

fn max_disjoint(
    masks: &[u64],
    from: usize,
    used: u64,
    stack: &mut Vec<usize>,
    best: &mut Vec<usize>,
    cap: usize,
    budget: &mut Budget,
) -> Result<()> {
    budget.spend("max_tiling", 1)?;
    if stack.len() > best.len() {
        *best = stack.clone();
    }
    if best.len() >= cap || stack.len() + (masks.len() - from) <= best.len() {
        return Ok(());
    }
    for i in from..masks.len() {
        if masks[i] & used == 0 {
            stack.push(i);
            max_disjoint(masks, i + 1, used | masks[i], stack, best, cap, budget)?;
            stack.pop();
        }
    }
    Ok(())
}

/// Shared compatibility test for growing transversally-complete class
/// tuples: u joining class `idx` must keep every full transversal an edge;
/// while other classes are still empty only edge-containment is required.
fn transversal_compatible(h: &Hypergraph, classes: &[Vec<u32>], idx: usize, u: u32) -> bool {
    let k = h.k();
    if classes.iter().enumerate().any(|(i, c)| i != idx && c.is_empty()) {
        let mut probe: Vec<u32> = classes
            .iter()
            .enumerate()
            .filter(|(i, c)| *i != idx && !c.is_empty())
            .map(|(_, c)| c[0])
            .collect();
        probe.push(u);
        if probe.len() > k {
            return false;
        }
        if probe.len() == k {
            return h.has_edge(&probe);
        }
        return h.degree(&probe).map(|d| d > 0).unwrap_or(false);
    }
    let mut stack: Vec<(usize, Vec<u32>)> = vec![(0, vec![u])];
    while let Some((class_i, partial)) = stack.pop() {
        if class_i == classes.len() {
            if !h.has_edge(&partial) {
                return false;
            }
            continue;
        }
        if class_i == idx {
            stack.push((class_i + 1, partial));
            continue;
        }
        for &w in &classes[class_i] {
            let mut nxt = partial.clone();
            nxt.push(w);
            stack.push((class_i + 1, nxt));
        }
    }
    true
}

/// Round-robin enumeration of ordered disjoint class tuples with the given
/// sizes whose transversals are all edges. With `ordered` false, classes
/// are forced to have increasing minima (for shape-symmetric patterns).
fn enumerate_class_tuples(
    h: &Hypergraph,
    sizes: &[usize],
    ordered: bool,
    classes: &mut Vec<Vec<u32>>,
    found: &mut dyn FnMut(&[Vec<u32>], &mut Budget) -> Result<()>,
    budget: &mut Budget,
) -> Result<()> {
    let Some(idx) = (0..sizes.len())
        .filter(|&i| classes[i].len() < sizes[i])
        .min_by_key(|&i| (classes[i].len(), i))
    else {
        return found(classes, budget);
    };
    let start = classes[idx].last().map_or(0, |&v| v + 1);
    for u in start..h.n() as u32 {
        budget.spend("class_tuples", 1)?;
        if classes.iter().any(|c| c.contains(&u)) {
            continue;
        }
        if !ordered && idx >= 1 && classes[idx].is_empty() {
            if let Some(&prev_min) = classes[idx - 1].first() {
                if u <= prev_min {
                    continue;
                }
            }
        }
        if !transversal_compatible(h, classes, idx, u) {
            continue;
        }
        classes[idx].push(u);
        enumerate_class_tuples(h, sizes, ordered, classes, found, budget)?;
        classes[idx].pop();
    }
    Ok(())
}

/// An embedded copy of F_s: ordered classes matching the family sizes plus
/// one pendant per edge of G_s.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FsCopy {
    pub classes: Vec<Vec<u32>>,
    pub pendants: Vec<u32>,
}

impl FsCopy {
    pub fn vertex_set(&self) -> BTreeSet<u32> {
        let mut set: BTreeSet<u32> = self.pendants.iter().copied().collect();
        for class in &self.classes {
            set.extend(class.iter().copied());
        }
        set
    }
}

/// Enumerates the F_s copies of H, deduplicated by vertex set.
pub fn enumerate_fs_copies(
    h: &Hypergraph,
    fam: &TileFamily,
    budget: &mut Budget,
) -> Result<Vec<FsCopy>> {
    let mut out: Vec<FsCopy> = Vec::new();
    let mut seen: HashSet<BTreeSet<u32>> = HashSet::new();
    let mut classes: Vec<Vec<u32>> = vec![Vec::new(); fam.k];
    let mut on_found = |classes: &[Vec<u32>], budget: &mut Budget| {
        attach_pendants(h, fam, classes, budget, &mut |copy| {
            if seen.insert(copy.vertex_set()) {
                out.push(copy);
            }
        })
    };
    enumerate_class_tuples(h, &fam.a, true, &mut classes, &mut on_found, budget)?;
    out.sort_by(|a, b| a.classes.cmp(&b.classes).then(a.pendants.cmp(&b.pendants)));
    Ok(out)
}

fn attach_pendants(
    h: &Hypergraph,
    fam: &TileFamily,
    classes: &[Vec<u32>],
    budget: &mut Budget,
    found: &mut impl FnMut(FsCopy),
) -> Result<()> {
    let g_edges: Vec<(u8, u8)> = fam.g_s.edges().collect();
    let in_classes: HashSet<u32> = classes.iter().flatten().copied().collect();
    let mut cands: Vec<Vec<u32>> = Vec::with_capacity(g_edges.len());
    for &(a, b) in &g_edges {
        let mut list = Vec::new();
        for w in 0..h.n() as u32 {
            if in_classes.contains(&w) {
                continue;
            }
            budget.spend("pendants", 1)?;
            if check_pendant_stars(h, classes, w, a, b).is_ok() {
                list.push(w);
            }
        }
        if list.is_empty() {
            return Ok(());
        }
        cands.push(list);
    }
    let mut assignment: Vec<u32> = Vec::new();
    assign_pendants(&cands, 0, &mut assignment, &mut |pendants| {
        found(FsCopy { classes: classes.to_vec(), pendants: pendants.to_vec() })
    });
    Ok(())
}

fn assign_pendants(
    cands: &[Vec<u32>],
    idx: usize,
    assignment: &mut Vec<u32>,
    found: &mut impl FnMut(&[u32]),
) {
    if idx == cands.len() {
        found(assignment);
        return;
    }
    for &w in &cands[idx] {
        if assignment.contains(&w) {
            continue;
        }
        assignment.push(w);
        assign_pendants(cands, idx + 1, assignment, found);
        assignment.pop();
    }
}

/// Enumerates the E_s copies (balanced complete (k,k)-hosts of class size
/// M_s), deduplicated by vertex set.
pub fn enumerate_es_copies(
    h: &Hypergraph,
    fam: &TileFamily,
    budget: &mut Budget,
) -> Result<Vec<Vec<Vec<u32>>>> {
    let sizes = vec![fam.m_big; fam.k];
    let mut out: Vec<Vec<Vec<u32>>> = Vec::new();
    let mut seen: HashSet<BTreeSet<u32>> = HashSet::new();
    let mut classes: Vec<Vec<u32>> = vec![Vec::new(); fam.k];
    let mut on_found = |classes: &[Vec<u32>], _budget: &mut Budget| {
        let set: BTreeSet<u32> = classes.iter().flatten().copied().collect();
        if seen.insert(set) {
            out.push(classes.to_vec());
        }
        Ok(())
    };
    enumerate_class_tuples(h, &sizes, false, &mut classes, &mut on_found, budget)?;
    Ok(out)
}

/// Outcome of the exact {F_s, E_s}-tiling optimisation.
#[derive(Debug, Clone)]
pub struct FeTilingOutcome {
    pub tiling: Tiling,
    pub phi: BigRational,
    /// False when the budget ran out before the branch tree was exhausted.
    pub optimal: bool,
}

/// phi of an {F_s, E_s}-tiling: (n - s(|F| + 3/5 |E|)) / n.
pub fn phi_of_counts(n: usize, s: usize, f_count: usize, e_count: usize) -> BigRational {
    let n_r = BigRational::from_integer(n.into());
    let s_r = BigRational::from_integer(s.into());
    let f_r = BigRational::from_integer(f_count.into());
    let e_r = BigRational::from_integer(e_count.into());
    let three_fifths = BigRational::new(3.into(), 5.into());
    (n_r.clone() - s_r * (f_r + three_fifths * e_r)) / n_r
}

/// Exact branch-and-bound minimisation of phi over {F_s, E_s}-tilings:
/// maximises 5|F| + 3|E| over disjoint unions of enumerated copies.
pub fn fe_tiling_min_phi(
    h: &Hypergraph,
    fam: &TileFamily,
    budget: &mut Budget,
) -> Result<FeTilingOutcome> {
    if h.n() > 64 {
        return Err(Error::invalid("fe_tiling_min_phi supports at most 64 vertices"));
    }
    let fs = enumerate_fs_copies(h, fam, budget)?;
    let es = enumerate_es_copies(h, fam, budget)?;
    let mut pieces: Vec<(u64, u32, usize)> = Vec::new();
    for (i, c) in fs.iter().enumerate() {
        let mask = c.vertex_set().iter().fold(0u64, |m, &v| m | 1 << v);
        pieces.push((mask, 5, i));
    }
    for (j, classes) in es.iter().enumerate() {
        let mask =
            classes.iter().flatten().fold(0u64, |m, &v| m | 1 << v);
        pieces.push((mask, 3, fs.len() + j));
    }
    let mut best: (u32, Vec<usize>) = (0, Vec::new());
    let mut stack: Vec<usize> = Vec::new();
    let optimal = match branch_scores(&pieces, 0, 0, 0, &mut stack, &mut best, budget) {
        Ok(()) => true,
        Err(Error::BudgetExceeded { .. }) => false,
        Err(e) => return Err(e),
    };

    let mut tiling = Tiling::default();
    for &p in &best.1 {
        let (_, _, id) = pieces[p];
        if id < fs.len() {
            let copy = &fs[id];
            tiling.pieces.push(TilingPiece {
                kind: PieceKind::FTile,
                vertices: copy.vertex_set().into_iter().collect(),
                witness: PieceWitness::Fs {
                    classes: copy.classes.clone(),
                    pendants: copy.pendants.clone(),
                },
            });
        } else {
            let classes = &es[id - fs.len()];
            let mut verts: Vec<u32> = classes.iter().flatten().copied().collect();
            verts.sort_unstable();
            tiling.pieces.push(TilingPiece {
                kind: PieceKind::ETile,
                vertices: verts,
                witness: PieceWitness::Es { classes: classes.clone() },
            });
        }
    }
    tiling.validate(h, Some(fam))?;
    let phi =
        phi_of_counts(h.n(), fam.s, tiling.count(PieceKind::FTile), tiling.count(PieceKind::ETile));
    Ok(FeTilingOutcome { tiling, phi, optimal })
}

fn branch_scores(
    pieces: &[(u64, u32, usize)],
    from: usize,
    used: u64,
    score: u32,
    stack: &mut Vec<usize>,
    best: &mut (u32, Vec<usize>),
    budget: &mut Budget,
) -> Result<()> {
    budget.spend("fe_tiling", 1)?;
    if score > best.0 {
        *best = (score, stack.clone());
    }
    let rest: u32 = pieces[from..].iter().map(|&(_, sc, _)| sc).sum();
    if score + rest <= best.0 {
        return Ok(());
    }
    for i in from..pieces.len() {
        let (mask, sc, _) = pieces[i];
        if mask & used == 0 {
            stack.push(i);
            branch_scores(pieces, i + 1, used | mask, score + sc, stack, best, budget)?;
            stack.pop();
        }
    }
    Ok(())
}

/// Searches for a copy of K^k_k(t) containing v; the returned host shares
/// H's vertex numbering, with the found classes as its partition.
pub fn find_kkk_through(
    h: &Hypergraph,
    v: u32,
    t: usize,
    budget: &mut Budget,
) -> Result<Option<PartitionedHost>> {
    if v as usize >= h.n() {
        return Err(Error::VertexOutOfRange { vertex: v, n: h.n() });
    }
    if t == 0 {
        return Err(Error::invalid("class size t must be positive"));
    }
    let k = h.k();
    let mut classes: Vec<Vec<u32>> = vec![Vec::new(); k];
    classes[0].push(v);
    if grow_kkk(h, t, &mut classes, budget)? {
        let partition = VertexPartition::new(classes)?;
        Ok(Some(PartitionedHost { graph: h.clone(), classes: partition }))
    } else {
        Ok(None)
    }
}

fn grow_kkk(
    h: &Hypergraph,
    t: usize,
    classes: &mut Vec<Vec<u32>>,
    budget: &mut Budget,
) -> Result<bool> {
    budget.spend("find_kkk", 1)?;
    let k = h.k();
    let Some(idx) =
        (0..k).filter(|&i| classes[i].len() < t).min_by_key(|&i| (classes[i].len(), i))
    else {
        return Ok(check_complete_partite_embedding(h, classes).is_ok());
    };
    let start = classes[idx].last().map_or(0, |&v| v + 1);
    for u in start..h.n() as u32 {
        if classes.iter().any(|c| c.contains(&u)) {
            continue;
        }
        // symmetry: classes beyond the pivot's keep increasing minima
        if idx > 1 && classes[idx].is_empty() {
            if let Some(&prev_min) = classes[idx - 1].first() {
                if u <= prev_min {
                    continue;
                }
            }
        }
        if !transversal_compatible(h, classes, idx, u) {
            continue;
        }
        classes[idx].push(u);
        if grow_kkk(h, t, classes, budget)? {
            return Ok(true);
        }
        classes[idx].pop();
    }
    Ok(false)
}

/// The linking host H_xy: drop x and y, add a fresh vertex z (the last
/// index) joined to the common link of x and y.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LinkingHost {
    pub graph: Hypergraph,
    pub z: u32,
    /// old_of_new[i] is the original vertex behind new vertex i; the entry
    /// for z is u32::MAX.
    pub old_of_new: Vec<u32>,
}

pub fn linking_host(h: &Hypergraph, x: u32, y: u32) -> Result<LinkingHost> {
    if x == y {
        return Err(Error::invalid("linking host needs two distinct vertices"));
    }
    for v in [x, y] {
        if v as usize >= h.n() {
            return Err(Error::VertexOutOfRange { vertex: v, n: h.n() });
        }
    }
    let keep: Vec<u32> = (0..h.n() as u32).filter(|&v| v != x && v != y).collect();
    let mut new_of_old: HashMap<u32, u32> = HashMap::new();
    for (i, &v) in keep.iter().enumerate() {
        new_of_old.insert(v, i as u32);
    }
    let z = keep.len() as u32;
    let mut edges: Vec<Vec<u32>> = h
        .edges()
        .filter(|e| !e.contains(&x) && !e.contains(&y))
        .map(|e| e.iter().map(|v| new_of_old[v]).collect())
        .collect();
    for e in h.edges() {
        if !e.contains(&x) {
            continue;
        }
        let s: Vec<u32> = e.iter().copied().filter(|&v| v != x).collect();
        if s.contains(&y) {
            continue;
        }
        let mut with_y = s.clone();
        with_y.push(y);
        if h.has_edge(&with_y) {
            let mut new_edge: Vec<u32> = s.iter().map(|v| new_of_old[v]).collect();
            new_edge.push(z);
            edges.push(new_edge);
        }
    }
    let mut old_of_new = keep;
    old_of_new.push(u32::MAX);
    Ok(LinkingHost { graph: Hypergraph::new(h.k(), h.n() - 1, edges)?, z, old_of_new })
}

/// The bipartiteness verdict for the auxiliary graph G_X of an edge X.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BipartiteAuxReport {
    /// N_i = N(X \ {x_i}) for each i, as sorted vertex lists.
    pub neighborhoods: Vec<Vec<u32>>,
    pub g_x: KGraph,
    pub bipartite: bool,
    /// Whether every |N_i| met the degree hypothesis; when it fails the
    /// verdict is informational only.
    pub hypothesis_met: bool,
    /// The pendant-count parameter l used in the edge threshold.
    pub ell: usize,
}

/// Builds G_X on {N_1, .., N_k} with N_u N_v an edge iff |N_u ∩ N_v| is at
/// most (l/s + gamma) n, and reports bipartiteness together with whether
/// the degree hypothesis |N_i| >= (1/2 + 1/(2s) + gamma) n held.
pub fn bipartite_aux(
    h: &Hypergraph,
    x_edge: &[u32],
    s: usize,
    gamma: &BigRational,
) -> Result<BipartiteAuxReport> {
    let k = h.k();
    if !h.has_edge(x_edge) {
        return Err(Error::invalid(format!("{x_edge:?} is not an edge of H")));
    }
    let ell = if s % k == 0 { k - 1 } else { k - gcd(k, s % k) };
    let n_r = BigRational::from_integer(h.n().into());
    let s_r = BigRational::from_integer(s.into());
    let half = BigRational::new(1.into(), 2.into());
    let degree_floor = (half
        + BigRational::one() / (BigRational::from_integer(2.into()) * s_r.clone())
        + gamma.clone())
        * n_r.clone();
    let overlap_ceiling = (BigRational::from_integer(ell.into()) / s_r + gamma.clone()) * n_r;

    let mut sorted_edge = x_edge.to_vec();
    sorted_edge.sort_unstable();
    let mut neighborhoods: Vec<Vec<u32>> = Vec::with_capacity(k);
    for i in 0..k {
        let rest: Vec<u32> =
            sorted_edge.iter().enumerate().filter(|(p, _)| *p != i).map(|(_, &v)| v).collect();
        let nbhd: Vec<u32> = (0..h.n() as u32)
            .filter(|&z| {
                if rest.contains(&z) {
                    return false;
                }
                let mut e = rest.clone();
                e.push(z);
                h.has_edge(&e)
            })
            .collect();
        neighborhoods.push(nbhd);
    }
    let hypothesis_met = neighborhoods
        .iter()
        .all(|nb| BigRational::from_integer(nb.len().into()) >= degree_floor);
    let mut g_x = KGraph::new(k);
    for u in 0..k {
        for v in u + 1..k {
            let overlap = intersect_count(&neighborhoods[u], &neighborhoods[v]);
            if BigRational::from_integer(overlap.into()) <= overlap_ceiling {
                g_x.add_edge((u + 1) as u8, (v + 1) as u8)?;
            }
        }
    }
    let bipartite = g_x.is_bipartite();
    Ok(BipartiteAuxReport { neighborhoods, g_x, bipartite, hypothesis_met, ell })
}

fn intersect_count(a: &[u32], b: &[u32]) -> usize {
    let (mut i, mut j, mut count) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                count += 1;
                i += 1;
                j += 1;
            }
        }
    }
    count
}

/// The monotone chain on one graph: perfect tiling => covering => copy.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChainReport {
    pub has_copy: bool,
    pub has_covering: bool,
    pub has_perfect_tiling: bool,
}

impl ChainReport {
    pub fn chain_holds(&self) -> bool {
        (!self.has_perfect_tiling || self.has_covering) && (!self.has_covering || self.has_copy)
    }
}

/// Computes all three C_s properties on a fixed H.
pub fn chain_check(h: &Hypergraph, s: usize, budget: &mut Budget) -> Result<ChainReport> {
    let covering = covering_check(h, s, budget)?;
    let has_covering = covering.uncovered.is_empty();
    let has_copy = !covering.witnesses.is_empty();
    let has_perfect_tiling = perfect_tiling(h, s, budget)?.is_some();
    Ok(ChainReport { has_copy, has_covering, has_perfect_tiling })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{h0, h0_cycle_parity_ok, tile_family, tiling_barrier};
    use num_traits::One;

    #[test]
    fn tight_cycle_validation() {
        let h = Hypergraph::complete(3, 6);
        assert!(is_tight_cycle(&h, &[0, 1, 2, 3, 4]));
        assert!(!is_tight_cycle(&h, &[0, 1, 2, 3, 0])); // repeat
        assert!(!is_tight_cycle(&h, &[0, 1, 2])); // s = k degenerates
        // ordinary graph cycle at k = 2
        let c5 = Hypergraph::new(2, 5, vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 4], vec![4, 0]])
            .unwrap();
        assert!(is_tight_cycle(&c5, &[0, 1, 2, 3, 4]));
        assert!(!is_tight_cycle(&c5, &[0, 2, 1, 3, 4]));
    }

    #[test]
    fn canonical_rotation_is_stable() {
        let a = TightCycle::new(vec![3, 1, 2, 5]).unwrap();
        let b = TightCycle::new(vec![2, 5, 3, 1]).unwrap(); // rotation
        let c = TightCycle::new(vec![5, 2, 1, 3]).unwrap(); // reflection
        assert_eq!(a, b);
        assert_eq!(a, c);
        assert_eq!(a.vertices()[0], 1);
    }

    #[test]
    fn cycles_in_parity_graphs_respect_admissibility() {
        // (3,4) admissible: no vertex of A lies on a C_4
        let h = h0(3, 5, 5).unwrap();
        let mut budget = Budget::default();
        for v in 0..5u32 {
            assert!(find_cycle_through(&h, v, 4, &mut budget).unwrap().is_none());
        }
        // s = 6: d = 3, k/d odd, cycles may exist but obey the parity law
        let cycles = enumerate_cycles(&h, 6, &mut budget).unwrap();
        for c in &cycles {
            assert!(h0_cycle_parity_ok(3, 5, c.vertices()));
        }
    }

    #[test]
    fn spanning_cycle_found_in_tile() {
        let fam = tile_family(3, 19).unwrap();
        let mut budget = Budget::default();
        let found = find_cycle_through(&fam.f_s.host.graph, 0, 19, &mut budget)
            .unwrap()
            .expect("the tile carries a spanning cycle");
        assert_eq!(found.len(), 19);
        assert!(is_tight_cycle(&fam.f_s.host.graph, found.vertices()));
    }

    #[test]
    fn covering_complete_vs_parity() {
        let mut budget = Budget::default();
        let complete = Hypergraph::complete(3, 7);
        let report = covering_check(&complete, 5, &mut budget).unwrap();
        assert!(report.uncovered.is_empty());
        // k = 4 parity graph is C_5-free outright
        let h = h0(4, 5, 5).unwrap();
        let report = covering_check(&h, 5, &mut budget).unwrap();
        assert_eq!(report.uncovered.len(), 10);
        assert!(report.witnesses.is_empty());
    }

    #[test]
    fn perfect_tiling_of_complete_but_not_barrier() {
        let mut budget = Budget::default();
        let complete = Hypergraph::complete(4, 10);
        let tiling = perfect_tiling(&complete, 5, &mut budget).unwrap().unwrap();
        assert_eq!(tiling.pieces.len(), 2);
        tiling.validate(&complete, None).unwrap();

        let barrier = tiling_barrier(4, 5, 10).unwrap();
        assert!(perfect_tiling(&barrier.graph, 5, &mut budget).unwrap().is_none());
        // indivisible orders are immediate
        let odd = Hypergraph::complete(4, 11);
        assert!(perfect_tiling(&odd, 5, &mut Budget::default()).unwrap().is_none());
    }

    #[test]
    fn max_tiling_on_barrier_is_one_piece() {
        // the barrier admits C_5 copies through T but at most |T| = 1 disjoint
        let barrier = tiling_barrier(4, 5, 10).unwrap();
        let mut budget = Budget::default();
        let best = max_tiling(&barrier.graph, 5, &mut budget).unwrap();
        assert_eq!(best.pieces.len(), 1);
        best.validate(&barrier.graph, None).unwrap();
    }

    #[test]
    fn fe_tiling_on_the_three_fixtures() {
        let fam = tile_family(3, 19).unwrap();
        let mut budget = Budget::new(100_000_000);
        // the tile itself: phi = 0
        let on_f = fe_tiling_min_phi(&fam.f_s.host.graph, &fam, &mut budget).unwrap();
        assert!(on_f.optimal);
        assert_eq!(on_f.phi, BigRational::from_integer(0.into()));
        // the balanced host: phi = 1 - 3s/(5 k M_s)
        let on_e = fe_tiling_min_phi(&fam.e_s.graph, &fam, &mut budget).unwrap();
        let expect = BigRational::one()
            - BigRational::new((3 * 19).into(), (5 * 3 * 6).into());
        assert_eq!(on_e.phi, expect);
        // nothing to tile: phi = 1
        let empty = Hypergraph::empty(3, 8);
        let on_empty = fe_tiling_min_phi(&empty, &fam, &mut budget).unwrap();
        assert_eq!(on_empty.phi, BigRational::one());
        assert!(on_empty.tiling.pieces.is_empty());
    }

    #[test]
    fn kkk_search_found_and_absent() {
        let mut budget = Budget::default();
        let complete = Hypergraph::complete(3, 9);
        let host = find_kkk_through(&complete, 4, 3, &mut budget).unwrap().unwrap();
        assert!(host.classes.class_of(4).is_some());
        assert_eq!(host.classes.sizes(), vec![3, 3, 3]);

        let empty = Hypergraph::empty(3, 9);
        assert!(find_kkk_through(&empty, 0, 2, &mut budget).unwrap().is_none());
    }

    #[test]
    fn kkk_search_matches_naive_enumeration() {
        // h0(3,6,6), t = 2: compare against a brute-force pair-of-pairs scan
        let h = h0(3, 6, 6).unwrap();
        let v = 6u32; // a B vertex
        let mut budget = Budget::default();
        let fast = find_kkk_through(&h, v, 2, &mut budget).unwrap();
        let naive = naive_kkk_through(&h, v, 2);
        assert_eq!(fast.is_some(), naive, "searcher and oracle disagree");
    }

    fn naive_kkk_through(h: &Hypergraph, v: u32, t: usize) -> bool {
        // all unordered triples of disjoint t-sets containing v, checked flat
        let n = h.n() as u32;
        let sets = crate::hypergraph::combinations(n, t);
        for (i, a) in sets.iter().enumerate() {
            for (j, b) in sets.iter().enumerate().skip(i + 1) {
                if a.iter().any(|x| b.contains(x)) {
                    continue;
                }
                for c in sets.iter().skip(j + 1) {
                    if c.iter().any(|x| a.contains(x) || b.contains(x)) {
                        continue;
                    }
                    if !a.contains(&v) && !b.contains(&v) && !c.contains(&v) {
                        continue;
                    }
                    if check_complete_partite_embedding(
                        h,
                        &[a.clone(), b.clone(), c.clone()],
                    )
                    .is_ok()
                    {
                        return true;
                    }
                }
            }
        }
        false
    }

    #[test]
    fn linking_host_degree_identities() {
        // twins: x = 3 and y = 4 share their link
        let h = Hypergraph::new(
            3,
            5,
            vec![vec![0, 1, 3], vec![0, 1, 4], vec![0, 2, 3], vec![0, 2, 4]],
        )
        .unwrap();
        let lh = linking_host(&h, 3, 4).unwrap();
        assert_eq!(lh.graph.n(), 4);
        assert_eq!(lh.graph.degree(&[lh.z]).unwrap(), h.degree(&[3]).unwrap());

        // disjoint links leave z isolated
        let g = Hypergraph::new(3, 6, vec![vec![0, 1, 4], vec![2, 3, 5]]).unwrap();
        let lg = linking_host(&g, 4, 5).unwrap();
        assert_eq!(lg.graph.degree(&[lg.z]).unwrap(), 0);
        assert!(linking_host(&h, 2, 2).is_err());
    }

    #[test]
    fn linking_host_cycles_substitute_back() {
        // complete K^3_7 linked over its last two vertices: a spanning
        // cycle through z lifts to spanning cycles through x and through y
        let h = Hypergraph::complete(3, 7);
        let lh = linking_host(&h, 5, 6).unwrap();
        let mut budget = Budget::default();
        let cycle = find_cycle_through(&lh.graph, lh.z, 6, &mut budget).unwrap().unwrap();
        for replacement in [5u32, 6u32] {
            let lifted: Vec<u32> = cycle
                .vertices()
                .iter()
                .map(|&v| if v == lh.z { replacement } else { lh.old_of_new[v as usize] })
                .collect();
            assert!(is_tight_cycle(&h, &lifted));
        }
    }

    #[test]
    fn bipartite_aux_on_complete_hosts() {
        let h = Hypergraph::complete(3, 12);
        let gamma = BigRational::new(1.into(), 50.into());
        let report = bipartite_aux(&h, &[0, 1, 2], 19, &gamma).unwrap();
        assert!(report.hypothesis_met);
        assert_eq!(report.g_x.edge_count(), 0);
        assert!(report.bipartite);
        assert_eq!(report.ell, 2);
        // k = 2: G_X on two vertices is always bipartite
        let g2 = Hypergraph::complete(2, 8);
        let report = bipartite_aux(&g2, &[0, 1], 9, &gamma).unwrap();
        assert!(report.bipartite);
    }

    #[test]
    fn chain_on_complete_and_empty() {
        let mut budget = Budget::default();
        let complete = Hypergraph::complete(3, 8);
        let chain = chain_check(&complete, 4, &mut budget).unwrap();
        assert!(chain.has_copy && chain.has_covering && chain.has_perfect_tiling);
        assert!(chain.chain_holds());

        let empty = Hypergraph::empty(3, 8);
        let chain = chain_check(&empty, 4, &mut budget).unwrap();
        assert!(!chain.has_copy && !chain.has_covering && !chain.has_perfect_tiling);
        assert!(chain.chain_holds());
    }

    #[test]
    fn budget_exhaustion_is_an_error() {
        let h = Hypergraph::complete(3, 9);
        let mut tiny = Budget::new(5);
        match find_cycle_through(&h, 0, 6, &mut tiny) {
            Err(crate::Error::BudgetExceeded { .. }) => {}
            other => panic!("expected budget error, got {other:?}"),
        }
    }
}
