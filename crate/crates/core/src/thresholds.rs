//! Brute-force threshold laboratory for tiny parameters: exact values of
//! the Turán, covering and tiling thresholds for tight cycles by
//! exhaustive enumeration over all k-graphs on n vertices, with optional
//! isomorphism pruning, plus systematic verification that the extremal
//! constructions meet their stated bounds.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::constructions::{admissible, h0, tiling_barrier};
use crate::hypergraph::{binomial, combinations};
use crate::search::{covering_check, find_cycle_through, perfect_tiling, Budget};
use crate::{Error, Hypergraph, Result};

pub use crate::search::{chain_check, ChainReport};

/// Which threshold a sweep computes: max delta_i over graphs that are
/// C_s-free, that lack a C_s-covering, or that lack a perfect C_s-tiling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ThresholdKind {
    Ex,
    Cover,
    Tile,
}

impl std::fmt::Display for ThresholdKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            ThresholdKind::Ex => "ex",
            ThresholdKind::Cover => "c",
            ThresholdKind::Tile => "t",
        };
        write!(f, "{name}")
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ThresholdResult {
    pub kind: ThresholdKind,
    pub k: usize,
    pub s: usize,
    pub n: usize,
    pub level: usize,
    pub value: usize,
    pub witness: Hypergraph,
    /// Set when s does not divide n and the tiling threshold is the
    /// trivial C(n - i, k - i).
    pub trivial_divisibility: bool,
    /// Whether isomorphism pruning was applied during the sweep.
    pub pruned: bool,
}

/// One graph's side of the property under test.
fn has_property(
    h: &Hypergraph,
    kind: ThresholdKind,
    s: usize,
    budget: &mut Budget,
) -> Result<bool> {
    let k = h.k();
    if k == 2 && s == 2 {
        // degenerate single-edge tile: containment, touching, matching
        return Ok(match kind {
            ThresholdKind::Ex => h.edge_count() > 0,
            ThresholdKind::Cover => {
                (0..h.n() as u32).all(|v| h.degree(&[v]).map(|d| d > 0).unwrap_or(false))
            }
            ThresholdKind::Tile => perfect_matching_exists(h),
        });
    }
    match kind {
        ThresholdKind::Ex => {
            for v in 0..h.n() as u32 {
                if find_cycle_through(h, v, s, budget)?.is_some() {
                    return Ok(true);
                }
            }
            Ok(false)
        }
        ThresholdKind::Cover => Ok(covering_check(h, s, budget)?.uncovered.is_empty()),
        ThresholdKind::Tile => Ok(perfect_tiling(h, s, budget)?.is_some()),
    }
}

fn perfect_matching_exists(h: &Hypergraph) -> bool {
    fn rec(h: &Hypergraph, used: &mut Vec<bool>) -> bool {
        let Some(v) = used.iter().position(|&u| !u) else {
            return true;
        };
        for u in v + 1..used.len() {
            if !used[u] && h.has_edge(&[v as u32, u as u32]) {
                used[v] = true;
                used[u] = true;
                if rec(h, used) {
                    return true;
                }
                used[v] = false;
                used[u] = false;
            }
        }
        false
    }
    if h.n() % 2 != 0 {
        return false;
    }
    rec(h, &mut vec![false; h.n()])
}

/// Precomputed tables for a sweep over all k-graphs on n vertices.
struct SweepTables {
    /// index -> k-set (lexicographic).
    edge_sets: Vec<Vec<u32>>,
    /// per i-set, the mask of edge indices containing it.
    iset_edges: Vec<u64>,
    /// per vertex permutation, the induced edge-index permutation.
    perm_tables: Vec<Vec<usize>>,
}

fn sweep_tables(k: usize, n: usize, level: usize, pruned: bool) -> Result<SweepTables> {
    let m = binomial(n, k);
    if m > 63 {
        return Err(Error::invalid(format!(
            "brute force supports at most 63 potential edges, C({n},{k}) = {m}"
        )));
    }
    let edge_sets = combinations(n as u32, k);
    let index_of = |set: &[u32]| edge_sets.iter().position(|e| e == set).unwrap();
    let isets = combinations(n as u32, level.max(1));
    let iset_edges = if level == 0 {
        vec![]
    } else {
        isets
            .iter()
            .map(|s| {
                let mut mask = 0u64;
                for (i, e) in edge_sets.iter().enumerate() {
                    if s.iter().all(|v| e.contains(v)) {
                        mask |= 1 << i;
                    }
                }
                mask
            })
            .collect()
    };
    let mut perm_tables = Vec::new();
    if pruned {
        let perms = crate::perm::all_perms(n);
        for p in &perms {
            if p.is_identity() {
                continue;
            }
            let table: Vec<usize> = edge_sets
                .iter()
                .map(|e| {
                    let mut image: Vec<u32> =
                        e.iter().map(|&v| p.apply(v as usize + 1) as u32 - 1).collect();
                    image.sort_unstable();
                    index_of(&image)
                })
                .collect();
            perm_tables.push(table);
        }
    }
    Ok(SweepTables { edge_sets, iset_edges, perm_tables })
}

fn min_degree_mask(tables: &SweepTables, mask: u64, level: usize) -> usize {
    if level == 0 {
        return mask.count_ones() as usize;
    }
    tables.iset_edges.iter().map(|&ie| (mask & ie).count_ones() as usize).min().unwrap_or(0)
}

/// Lexicographically-least canonical form test with early exit.
fn is_canonical_min(tables: &SweepTables, mask: u64) -> bool {
    for table in &tables.perm_tables {
        let mut image = 0u64;
        for i in 0..tables.edge_sets.len() {
            if mask & (1 << i) != 0 {
                image |= 1 << table[i];
            }
        }
        if image < mask {
            return false;
        }
    }
    true
}

/// Exhaustive threshold computation: the maximum of delta_level over all
/// k-graphs on n vertices lacking the C_s property named by `kind`, with
/// a witness attaining it. Masks are visited in decreasing edge count so
/// the density bound can cut the sweep short.
pub fn brute_threshold(
    kind: ThresholdKind,
    k: usize,
    s: usize,
    n: usize,
    level: usize,
    pruned: bool,
    cache: Option<&ThresholdCache>,
    budget: &mut Budget,
) -> Result<ThresholdResult> {
    if level >= k {
        return Err(Error::LevelTooLarge { level, k });
    }
    if s < k || n < s {
        return Err(Error::invalid(format!("brute force wants k <= s <= n, got ({k},{s},{n})")));
    }
    if let Some(cache) = cache {
        if let Some(hit) = cache.load(kind, k, s, n, level, pruned)? {
            return Ok(hit);
        }
    }
    if kind == ThresholdKind::Tile && n % s != 0 {
        // no perfect tiling can exist; even the complete graph fails
        let result = ThresholdResult {
            kind,
            k,
            s,
            n,
            level,
            value: binomial(n - level, k - level),
            witness: Hypergraph::complete(k, n),
            trivial_divisibility: true,
            pruned,
        };
        if let Some(cache) = cache {
            cache.store(&result)?;
        }
        return Ok(result);
    }

    let tables = sweep_tables(k, n, level, pruned)?;
    let m = tables.edge_sets.len();
    let mut best: Option<(usize, u64)> = None;
    'levels: for t in (0..=m).rev() {
        // density bound: delta_level <= t C(k, level) / C(n, level)
        if let Some((bv, _)) = best {
            let bound = t * binomial(k, level) / binomial(n, level);
            if bound <= bv {
                break 'levels;
            }
        }
        // Gosper's hack over masks of popcount t
        let mut mask: u64 = if t == 0 { 0 } else { (1u64 << t) - 1 };
        loop {
            budget.spend("brute_threshold", 1)?;
            let delta = min_degree_mask(&tables, mask, level);
            let beats = best.map_or(true, |(bv, _)| delta > bv);
            if beats && (!pruned || is_canonical_min(&tables, mask)) {
                let edges: Vec<&Vec<u32>> = (0..m)
                    .filter(|&i| mask & (1 << i) != 0)
                    .map(|i| &tables.edge_sets[i])
                    .collect();
                let h = Hypergraph::new(k, n, edges)?;
                if !has_property(&h, kind, s, budget)? {
                    best = Some((delta, mask));
                }
            }
            if t == 0 {
                break;
            }
            // next mask with the same popcount
            let c = mask & mask.wrapping_neg();
            let r = mask + c;
            if r >= 1 << m {
                break;
            }
            mask = (((r ^ mask) >> 2) / c) | r;
        }
    }

    let (value, mask) = best.ok_or_else(|| {
        Error::invalid("no graph without the property exists at these parameters")
    })?;
    let edges: Vec<&Vec<u32>> =
        (0..m).filter(|&i| mask & (1 << i) != 0).map(|i| &tables.edge_sets[i]).collect();
    let result = ThresholdResult {
        kind,
        k,
        s,
        n,
        level,
        value,
        witness: Hypergraph::new(k, n, edges)?,
        trivial_divisibility: false,
        pruned,
    };
    // the witness must itself re-validate
    if result.witness.min_degree(level)?.min_degree != value {
        return Err(Error::invalid("threshold witness does not attain its value"));
    }
    if has_property(&result.witness, kind, s, budget)? {
        return Err(Error::invalid("threshold witness unexpectedly has the property"));
    }
    if let Some(cache) = cache {
        cache.store(&result)?;
    }
    Ok(result)
}

/// One verified lower-bound row: the construction, the bound it promises,
/// the exact degree it achieves, and whether the obstruction certifies.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundCheck {
    pub name: String,
    pub claimed: i64,
    pub achieved: usize,
    pub obstruction_certified: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LowerBoundReport {
    pub k: usize,
    pub s: usize,
    pub n: usize,
    pub admissible: bool,
    pub checks: Vec<BoundCheck>,
}

/// Builds the relevant constructions at (k, s, n), measures their exact
/// codegree, and certifies each obstruction by exhaustive search.
pub fn verify_lower_bounds(
    k: usize,
    s: usize,
    n: usize,
    budget: &mut Budget,
) -> Result<LowerBoundReport> {
    let adm = admissible(k, s)?;
    let mut checks = Vec::new();

    if adm.admissible {
        // covering bound: no vertex of A is covered in the parity graph
        let a_size = n.div_ceil(2);
        let parity = h0(k, a_size, n - a_size)?;
        let achieved = parity.min_degree(k - 1)?.min_degree;
        let mut uncovered_a = true;
        for v in 0..a_size as u32 {
            if find_cycle_through(&parity, v, s, budget)?.is_some() {
                uncovered_a = false;
                break;
            }
        }
        checks.push(BoundCheck {
            name: "covering: parity graph".into(),
            claimed: (n / 2) as i64 - k as i64 + 1,
            achieved,
            obstruction_certified: uncovered_a,
        });

        if n % s == 0 {
            let barrier = tiling_barrier(k, s, n)?;
            let achieved = barrier.graph.min_degree(k - 1)?.min_degree;
            let claimed: i64 = if k % 2 == 0 {
                ((n + n / s) / 2) as i64 - k as i64
            } else {
                let t = n * k / (2 * s * (k - 1) + k);
                ((n + t.saturating_sub(1)) / 2) as i64 - k as i64
            };
            let no_tiling = perfect_tiling(&barrier.graph, s, budget)?.is_none();
            checks.push(BoundCheck {
                name: "tiling: barrier graph".into(),
                claimed,
                achieved,
                obstruction_certified: no_tiling,
            });
        }
    }

    if n % s == 0 {
        // unconditional tiling bound: parity graph with |A| off the lattice
        let s_prime = s / crate::constructions::gcd(k, s);
        let a_size = [n.div_ceil(2), n / 2, n.div_ceil(2) + 1]
            .into_iter()
            .find(|a| a % s_prime != 0 && *a <= n)
            .ok_or_else(|| Error::invalid("no admissible A size near n/2"))?;
        let parity = h0(k, a_size, n - a_size)?;
        let achieved = parity.min_degree(k - 1)?.min_degree;
        let no_tiling = perfect_tiling(&parity, s, budget)?.is_none();
        checks.push(BoundCheck {
            name: "tiling: unconditional parity graph".into(),
            claimed: (n / 2) as i64 - k as i64,
            achieved,
            obstruction_certified: no_tiling,
        });
    }

    Ok(LowerBoundReport { k, s, n, admissible: adm.admissible, checks })
}

/// Key-addressed on-disk cache for sweep results.
#[derive(Debug, Clone)]
pub struct ThresholdCache {
    dir: PathBuf,
}

impl ThresholdCache {
    pub fn new(dir: PathBuf) -> Result<ThresholdCache> {
        std::fs::create_dir_all(&dir)?;
        Ok(ThresholdCache { dir })
    }

    fn path(
        &self,
        kind: ThresholdKind,
        k: usize,
        s: usize,
        n: usize,
        level: usize,
        pruned: bool,
    ) -> PathBuf {
        let tag = if pruned { "pruned" } else { "full" };
        self.dir.join(format!("{kind}-k{k}-s{s}-n{n}-i{level}-{tag}.json"))
    }

    pub fn load(
        &self,
        kind: ThresholdKind,
        k: usize,
        s: usize,
        n: usize,
        level: usize,
        pruned: bool,
    ) -> Result<Option<ThresholdResult>> {
        let path = self.path(kind, k, s, n, level, pruned);
        if !path.exists() {
            return Ok(None);
        }
        let text = std::fs::read_to_string(path)?;
        Ok(Some(serde_json::from_str(&text)?))
    }

    pub fn store(&self, result: &ThresholdResult) -> Result<()> {
        let path =
            self.path(result.kind, result.k, result.s, result.n, result.level, result.pruned);
        std::fs::write(path, serde_json::to_string_pretty(result)?)?;
        Ok(())
    }
}
