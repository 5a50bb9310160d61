//! The alpha-weighted fractional {F*_s, E*_s}-tiling machinery: weights,
//! the objective phi, saturation, the integral-to-fractional conversion,
//! the two counting inequalities, and an exact rational optimiser for
//! phi*(H, c).
//!
//! F*_s is the single-edge tile: a core k-edge x_1..x_k weighted by the
//! class sizes a_{s,i}, plus one unit-weight pendant per edge of G_s.
//! Plain edges of H act as the E* objects, loading every endpoint with
//! M_s.

mod simplex;

use std::collections::{BTreeMap, BTreeSet, HashSet};

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::constructions::TileFamily;
use crate::search::{Budget, PieceKind, PieceWitness, Tiling};
use crate::{Error, Hypergraph, Result};

/// An embedded copy of F*_s. `core_slots[i]` plays x_{i+1} and carries
/// weight a_{s,i+1}; pendants follow the edge order of G_s and carry
/// weight 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FStarCopy {
    pub core_slots: Vec<u32>,
    pub pendants: Vec<u32>,
}

impl FStarCopy {
    /// alpha_F(v): the weight v receives from this copy.
    pub fn alpha(&self, fam: &TileFamily, v: u32) -> usize {
        if let Some(i) = self.core_slots.iter().position(|&u| u == v) {
            return fam.a[i];
        }
        if self.pendants.contains(&v) {
            return 1;
        }
        0
    }

    pub fn vertex_set(&self) -> BTreeSet<u32> {
        self.core_slots.iter().chain(self.pendants.iter()).copied().collect()
    }

    /// Two copies are the same LP column iff they induce the same weight
    /// function; the key captures that and the pendant set.
    pub fn column_key(&self, fam: &TileFamily) -> (Vec<(u32, usize)>, Vec<u32>) {
        let mut weights: BTreeMap<u32, usize> = BTreeMap::new();
        for (i, &v) in self.core_slots.iter().enumerate() {
            weights.insert(v, fam.a[i]);
        }
        let mut pendants: Vec<u32> = self.pendants.clone();
        pendants.sort_unstable();
        (weights.into_iter().collect(), pendants)
    }

    /// Checks the copy is genuinely embedded: the core spans an edge and
    /// each pendant completes both of its stars.
    pub fn validate(&self, h: &Hypergraph, fam: &TileFamily) -> Result<()> {
        let k = fam.k;
        if self.core_slots.len() != k {
            return Err(Error::BadArity { what: "F* core", got: self.core_slots.len(), need: k });
        }
        let set = self.vertex_set();
        if set.len() != k + self.pendants.len() {
            return Err(Error::invalid("F* copy has repeated vertices"));
        }
        if !h.has_edge(&self.core_slots) {
            return Err(Error::invalid("F* core is not an edge"));
        }
        let g_edges: Vec<(u8, u8)> = fam.g_s.edges().collect();
        if self.pendants.len() != g_edges.len() {
            return Err(Error::BadArity {
                what: "F* pendants",
                got: self.pendants.len(),
                need: g_edges.len(),
            });
        }
        for (&w, &(a, b)) in self.pendants.iter().zip(&g_edges) {
            for &skip in &[a, b] {
                let mut e: Vec<u32> = self
                    .core_slots
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i != skip as usize - 1)
                    .map(|(_, &v)| v)
                    .collect();
                e.push(w);
                if !h.has_edge(&e) {
                    return Err(Error::invalid(format!(
                        "pendant {w} fails the star missing class {skip}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// A weighted fractional {F*_s, E*_s}-tiling: rational weights on F*
/// copies and edges with every vertex load at most 1.
#[derive(Debug, Clone)]
pub struct FractionalTiling {
    pub fam: TileFamily,
    pub n: usize,
    pub fweights: Vec<(FStarCopy, BigRational)>,
    pub eweights: Vec<(Vec<u32>, BigRational)>,
}

impl FractionalTiling {
    pub fn zero(fam: TileFamily, n: usize) -> FractionalTiling {
        FractionalTiling { fam, n, fweights: Vec::new(), eweights: Vec::new() }
    }

    /// Full re-validation: weights in [0,1], embedded supports, and the
    /// defining per-vertex constraint.
    pub fn validate(&self, h: &Hypergraph) -> Result<()> {
        if h.n() != self.n {
            return Err(Error::invalid("fractional tiling built for a different n"));
        }
        let one = BigRational::one();
        for (copy, w) in &self.fweights {
            if w < &BigRational::zero() || w > &one {
                return Err(Error::invalid("F* weight outside [0,1]"));
            }
            copy.validate(h, &self.fam)?;
        }
        for (e, w) in &self.eweights {
            if w < &BigRational::zero() || w > &one {
                return Err(Error::invalid("edge weight outside [0,1]"));
            }
            if !h.has_edge(e) {
                return Err(Error::invalid(format!("weighted non-edge {e:?}")));
            }
        }
        for v in 0..self.n as u32 {
            if self.vertex_weight(v) > one {
                return Err(Error::invalid(format!("vertex {v} is overloaded")));
            }
        }
        Ok(())
    }

    /// omega*(v): the total alpha-weighted load on v.
    pub fn vertex_weight(&self, v: u32) -> BigRational {
        let mut acc = BigRational::zero();
        for (copy, w) in &self.fweights {
            let alpha = copy.alpha(&self.fam, v);
            if alpha > 0 {
                acc += w * BigRational::from_integer(alpha.into());
            }
        }
        let m_s = BigRational::from_integer(self.fam.m_big.into());
        for (e, w) in &self.eweights {
            if e.contains(&v) {
                acc += w * m_s.clone();
            }
        }
        acc
    }

    /// The load v receives from pendant roles only.
    fn pendant_weight(&self, v: u32) -> BigRational {
        let mut acc = BigRational::zero();
        for (copy, w) in &self.fweights {
            if copy.pendants.contains(&v) {
                acc += w;
            }
        }
        acc
    }

    pub fn total_f_weight(&self) -> BigRational {
        self.fweights.iter().map(|(_, w)| w).sum()
    }

    pub fn total_e_weight(&self) -> BigRational {
        self.eweights.iter().map(|(_, w)| w).sum()
    }

    /// phi(omega*) = (n - s (sum_F w(F) + 3/5 sum_e w(e))) / n.
    pub fn phi(&self) -> BigRational {
        let n_r = BigRational::from_integer(self.n.into());
        let s_r = BigRational::from_integer(self.fam.s.into());
        let three_fifths = BigRational::new(3.into(), 5.into());
        (n_r.clone() - s_r * (self.total_f_weight() + three_fifths * self.total_e_weight())) / n_r
    }

    /// The minimum nonzero term w(J) alpha_J(v); None when every weight is
    /// zero (the infinite-minimum convention).
    pub fn min_weight(&self) -> Option<BigRational> {
        let mut min: Option<BigRational> = None;
        let mut push = |cand: BigRational| {
            if cand.is_zero() {
                return;
            }
            if min.as_ref().map_or(true, |m| cand < *m) {
                min = Some(cand);
            }
        };
        for (copy, w) in &self.fweights {
            if w.is_zero() {
                continue;
            }
            // alpha values over the copy's vertices: the a_{s,i} and 1
            for (i, _) in copy.core_slots.iter().enumerate() {
                push(w * BigRational::from_integer(self.fam.a[i].into()));
            }
            if !copy.pendants.is_empty() {
                push(w.clone());
            }
        }
        let m_s = BigRational::from_integer(self.fam.m_big.into());
        for (_, w) in &self.eweights {
            if !w.is_zero() {
                push(w * m_s.clone());
            }
        }
        min
    }

    /// Vertices saturated by pendant load alone.
    pub fn saturated(&self) -> Vec<u32> {
        (0..self.n as u32).filter(|&v| self.pendant_weight(v) == BigRational::one()).collect()
    }

    /// Vertices with zero load.
    pub fn uncovered(&self) -> Vec<u32> {
        (0..self.n as u32).filter(|&v| self.vertex_weight(v).is_zero()).collect()
    }
}

/// Saturated vertices of an integral {F_s, E_s}-tiling: those playing
/// pendant roles in F-pieces.
pub fn integral_saturated(tiling: &Tiling) -> BTreeSet<u32> {
    let mut out = BTreeSet::new();
    for piece in &tiling.pieces {
        if let PieceWitness::Fs { pendants, .. } = &piece.witness {
            out.extend(pendants.iter().copied());
        }
    }
    out
}

/// Converts an integral {F_s, E_s}-tiling into a fractional one and
/// asserts every structural conclusion of the conversion, plus both
/// counting inequalities.
pub fn from_integral(h: &Hypergraph, tiling: &Tiling, fam: &TileFamily) -> Result<FractionalTiling> {
    tiling.validate(h, Some(fam))?;
    if tiling.pieces.iter().any(|p| p.kind == PieceKind::CycleS) {
        return Err(Error::invalid("from_integral expects an {F_s, E_s}-tiling"));
    }
    let a_product: usize = fam.a.iter().product();
    let f_weight = BigRational::new(1.into(), (a_product as i64).into());
    let mut m_pow = BigRational::one();
    for _ in 0..fam.k {
        m_pow *= BigRational::from_integer(fam.m_big.into());
    }
    let e_weight = m_pow.recip();

    let mut fweights: Vec<(FStarCopy, BigRational)> = Vec::new();
    let mut eweights: Vec<(Vec<u32>, BigRational)> = Vec::new();
    for piece in &tiling.pieces {
        match &piece.witness {
            PieceWitness::Fs { classes, pendants } => {
                let mut stack: Vec<Vec<u32>> = vec![vec![]];
                while let Some(partial) = stack.pop() {
                    if partial.len() == fam.k {
                        fweights.push((
                            FStarCopy { core_slots: partial, pendants: pendants.clone() },
                            f_weight.clone(),
                        ));
                        continue;
                    }
                    for &v in &classes[partial.len()] {
                        let mut nxt = partial.clone();
                        nxt.push(v);
                        stack.push(nxt);
                    }
                }
            }
            PieceWitness::Es { classes } => {
                let mut stack: Vec<Vec<u32>> = vec![vec![]];
                while let Some(partial) = stack.pop() {
                    if partial.len() == fam.k {
                        let mut e = partial;
                        e.sort_unstable();
                        eweights.push((e, e_weight.clone()));
                        continue;
                    }
                    for &v in &classes[partial.len()] {
                        let mut nxt = partial.clone();
                        nxt.push(v);
                        stack.push(nxt);
                    }
                }
            }
            PieceWitness::Cycle(_) => unreachable!("rejected above"),
        }
    }
    let frac = FractionalTiling { fam: fam.clone(), n: h.n(), fweights, eweights };
    frac.validate(h)?;
    assert_conversion_conclusions(h, tiling, fam, &frac)?;
    Ok(frac)
}

/// The eight structural conclusions of the conversion, checked exactly.
fn assert_conversion_conclusions(
    h: &Hypergraph,
    tiling: &Tiling,
    fam: &TileFamily,
    frac: &FractionalTiling,
) -> Result<()> {
    let fail = |what: &str| Err(Error::invalid(format!("from_integral conclusion failed: {what}")));
    let f_count = tiling.count(PieceKind::FTile);
    let e_count = tiling.count(PieceKind::ETile);
    // (i) equal phi
    let phi_t = crate::search::phi_of_counts(h.n(), fam.s, f_count, e_count);
    if frac.phi() != phi_t {
        return fail("(i) phi mismatch");
    }
    // (ii)/(iii) weight totals equal the counts
    if frac.total_f_weight() != BigRational::from_integer(f_count.into()) {
        return fail("(ii) sum of F* weights");
    }
    if frac.total_e_weight() != BigRational::from_integer(e_count.into()) {
        return fail("(iii) sum of edge weights");
    }
    // (iv) saturated and uncovered sets are preserved
    let sat_t = integral_saturated(tiling);
    let sat_f: BTreeSet<u32> = frac.saturated().into_iter().collect();
    if sat_t != sat_f {
        return fail("(iv) saturated set");
    }
    let covered = tiling.covered_vertices();
    let unc_t: BTreeSet<u32> =
        (0..h.n() as u32).filter(|v| !covered.contains(v)).collect();
    let unc_f: BTreeSet<u32> = frac.uncovered().into_iter().collect();
    if unc_t != unc_f {
        return fail("(iv) uncovered set");
    }
    // (v)/(vi) weight quantisation
    let a_product: usize = fam.a.iter().product();
    let f_quantum = BigRational::new(1.into(), (a_product as i64).into());
    if frac.fweights.iter().any(|(_, w)| !w.is_zero() && *w != f_quantum) {
        return fail("(v) F* weight quantisation");
    }
    let mut m_pow = BigRational::one();
    for _ in 0..fam.k {
        m_pow *= BigRational::from_integer(fam.m_big.into());
    }
    let e_quantum = m_pow.recip();
    if frac.eweights.iter().any(|(_, w)| !w.is_zero() && *w != e_quantum) {
        return fail("(vi) edge weight quantisation");
    }
    // (vii) minimum weight at least s^{-k}
    let mut s_pow = BigRational::one();
    for _ in 0..fam.k {
        s_pow *= BigRational::from_integer(fam.s.into());
    }
    if let Some(min) = frac.min_weight() {
        if min < s_pow.recip() {
            return fail("(vii) minimum weight below s^-k");
        }
    }
    // (viii) vertex loads are 0 or 1
    for v in 0..h.n() as u32 {
        let w = frac.vertex_weight(v);
        if !w.is_zero() && !w.is_one() {
            return fail("(viii) fractional vertex load");
        }
    }
    // the two counting inequalities must hold on every conversion
    let report = check_prop_counts(frac, None)?;
    if !report.load_inequality || !report.saturation_inequality {
        return fail("counting inequality");
    }
    Ok(())
}

/// Report for the two counting inequalities and the two-pendant witness.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CountsReport {
    /// s * sum w(F*) + k M_s * sum w(e) <= n.
    pub load_inequality: bool,
    /// |S(omega*)| <= l n / s.
    pub saturation_inequality: bool,
    /// Whether a query set large enough to demand a witness was given.
    pub witness_applicable: bool,
    /// With a query set S' larger than n/s: a positively-weighted copy
    /// with two pendants inside S'.
    pub two_pendant_witness: Option<FStarCopy>,
}

/// Checks the counting inequalities; when `query` exceeds n/s inside the
/// saturated set, also hunts for the promised two-pendant witness.
pub fn check_prop_counts(frac: &FractionalTiling, query: Option<&[u32]>) -> Result<CountsReport> {
    let n_r = BigRational::from_integer(frac.n.into());
    let s_r = BigRational::from_integer(frac.fam.s.into());
    let load = s_r.clone() * frac.total_f_weight()
        + BigRational::from_integer((frac.fam.k * frac.fam.m_big).into()) * frac.total_e_weight();
    let load_inequality = load <= n_r;
    let sat = frac.saturated();
    let saturation_inequality = BigRational::from_integer(sat.len().into()) * s_r.clone()
        <= BigRational::from_integer(frac.fam.ell.into()) * n_r.clone();

    let mut witness_applicable = false;
    let mut two_pendant_witness = None;
    if let Some(sprime) = query {
        let sat_set: HashSet<u32> = sat.iter().copied().collect();
        if !sprime.iter().all(|v| sat_set.contains(v)) {
            return Err(Error::invalid("query set must consist of saturated vertices"));
        }
        witness_applicable = BigRational::from_integer(sprime.len().into()) * s_r > n_r;
        if witness_applicable {
            let sprime_set: HashSet<u32> = sprime.iter().copied().collect();
            two_pendant_witness = frac
                .fweights
                .iter()
                .find(|(copy, w)| {
                    !w.is_zero()
                        && copy.pendants.iter().filter(|p| sprime_set.contains(p)).count() >= 2
                })
                .map(|(copy, _)| copy.clone());
        }
    }
    Ok(CountsReport {
        load_inequality,
        saturation_inequality,
        witness_applicable,
        two_pendant_witness,
    })
}

/// Enumerates the F*_s copies of H up to identical LP columns.
pub fn enumerate_fstar_copies(
    h: &Hypergraph,
    fam: &TileFamily,
    budget: &mut Budget,
) -> Result<Vec<FStarCopy>> {
    let k = fam.k;
    let g_edges: Vec<(u8, u8)> = fam.g_s.edges().collect();
    let mut seen: HashSet<(Vec<(u32, usize)>, Vec<u32>)> = HashSet::new();
    let mut out: Vec<FStarCopy> = Vec::new();
    for edge in h.edges() {
        // every slot assignment of the core edge
        let mut order: Vec<usize> = (0..k).collect();
        permute_all(&mut order, &mut |perm| -> Result<()> {
            budget.spend("fstar_copies", 1)?;
            let core_slots: Vec<u32> = perm.iter().map(|&i| edge[i]).collect();
            // pendant candidates per gadget edge
            let mut cands: Vec<Vec<u32>> = Vec::with_capacity(g_edges.len());
            for &(a, b) in &g_edges {
                let mut list = Vec::new();
                'w: for w in 0..h.n() as u32 {
                    if core_slots.contains(&w) {
                        continue;
                    }
                    for &skip in &[a, b] {
                        let mut e: Vec<u32> = core_slots
                            .iter()
                            .enumerate()
                            .filter(|(i, _)| *i != skip as usize - 1)
                            .map(|(_, &v)| v)
                            .collect();
                        e.push(w);
                        if !h.has_edge(&e) {
                            continue 'w;
                        }
                    }
                    list.push(w);
                }
                cands.push(list);
            }
            if cands.iter().any(|c| c.is_empty()) {
                return Ok(());
            }
            let mut assignment: Vec<u32> = Vec::new();
            collect_distinct(&cands, 0, &mut assignment, &mut |pendants| {
                let copy = FStarCopy { core_slots: core_slots.clone(), pendants: pendants.to_vec() };
                if seen.insert(copy.column_key(fam)) {
                    out.push(copy);
                }
            });
            Ok(())
        })?;
    }
    out.sort_by(|x, y| x.core_slots.cmp(&y.core_slots).then(x.pendants.cmp(&y.pendants)));
    Ok(out)
}

fn permute_all(
    order: &mut Vec<usize>,
    f: &mut impl FnMut(&[usize]) -> Result<()>,
) -> Result<()> {
    fn heap(n: usize, order: &mut Vec<usize>, f: &mut impl FnMut(&[usize]) -> Result<()>) -> Result<()> {
        if n <= 1 {
            return f(order);
        }
        for i in 0..n {
            heap(n - 1, order, f)?;
            if n % 2 == 0 {
                order.swap(i, n - 1);
            } else {
                order.swap(0, n - 1);
            }
        }
        Ok(())
    }
    let n = order.len();
    heap(n, order, f)
}

fn collect_distinct(
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
        collect_distinct(cands, idx + 1, assignment, found);
        assignment.pop();
    }
}

/// Minimises phi over weighted fractional tilings with the minimum-weight
/// floor c, by LP plus branching over the support disjunctions
/// (x_J = 0 or x_J >= c / min alpha_J).
pub fn solve_phi_star(
    h: &Hypergraph,
    fam: &TileFamily,
    c: &BigRational,
    budget: &mut Budget,
) -> Result<(FractionalTiling, BigRational)> {
    let copies = enumerate_fstar_copies(h, fam, budget)?;
    let edges: Vec<Vec<u32>> = h.edges().map(|e| e.to_vec()).collect();
    let num_vars = copies.len() + edges.len();
    let n = h.n();

    // constraint matrix: one row per vertex
    let mut a = vec![vec![BigRational::zero(); num_vars]; n];
    for (j, copy) in copies.iter().enumerate() {
        for v in copy.vertex_set() {
            a[v as usize][j] = BigRational::from_integer(copy.alpha(fam, v).into());
        }
    }
    let m_s = BigRational::from_integer(fam.m_big.into());
    for (j, e) in edges.iter().enumerate() {
        for &v in e {
            a[v as usize][copies.len() + j] = m_s.clone();
        }
    }
    let three_fifths = BigRational::new(3.into(), 5.into());
    let mut objective = vec![BigRational::one(); copies.len()];
    objective.extend(std::iter::repeat(three_fifths).take(edges.len()));
    // floors implied by the minimum-weight semantics
    let mut floors: Vec<BigRational> = vec![c.clone(); copies.len()];
    floors.extend(std::iter::repeat(c / m_s.clone()).take(edges.len()));

    // the all-zero tiling is admitted, so the incumbent starts at 0
    let mut best: Option<(BigRational, Vec<BigRational>)> =
        Some((BigRational::zero(), vec![BigRational::zero(); num_vars]));
    branch_on_floors(
        &a,
        &objective,
        &floors,
        &mut vec![FloorState::Free; num_vars],
        &mut best,
        budget,
    )?;
    let (_, values) = best.expect("zero tiling is always feasible");

    let mut fweights = Vec::new();
    for (j, copy) in copies.iter().enumerate() {
        if !values[j].is_zero() {
            fweights.push((copy.clone(), values[j].clone()));
        }
    }
    let mut eweights = Vec::new();
    for (j, e) in edges.iter().enumerate() {
        let w = &values[copies.len() + j];
        if !w.is_zero() {
            eweights.push((e.clone(), w.clone()));
        }
    }
    let frac = FractionalTiling { fam: fam.clone(), n, fweights, eweights };
    frac.validate(h)?;
    if let Some(min) = frac.min_weight() {
        if min < *c {
            return Err(Error::invalid("phi* solution violates the minimum-weight floor"));
        }
    }
    let phi = frac.phi();
    Ok((frac, phi))
}

#[derive(Clone, Copy, PartialEq)]
enum FloorState {
    Free,
    Zero,
    AtLeast,
}

/// Depth-first branch and bound over the support disjunctions. `best`
/// holds the incumbent (objective, values), maximising the objective.
fn branch_on_floors(
    a: &[Vec<BigRational>],
    objective: &[BigRational],
    floors: &[BigRational],
    state: &mut Vec<FloorState>,
    best: &mut Option<(BigRational, Vec<BigRational>)>,
    budget: &mut Budget,
) -> Result<()> {
    budget.spend("phi_star_branch", 1)?;
    let num_vars = objective.len();
    // substitute lower bounds: x_j = lb_j + y_j
    let mut b: Vec<BigRational> = vec![BigRational::one(); a.len()];
    let mut constant = BigRational::zero();
    for j in 0..num_vars {
        if state[j] == FloorState::AtLeast {
            for (row, b_row) in a.iter().zip(b.iter_mut()) {
                *b_row -= &row[j] * &floors[j];
            }
            constant += &objective[j] * &floors[j];
        }
    }
    if b.iter().any(|bi| bi < &BigRational::zero()) {
        return Ok(()); // infeasible branch
    }
    // drop forced-zero columns
    let live: Vec<usize> = (0..num_vars).filter(|&j| state[j] != FloorState::Zero).collect();
    let sub_a: Vec<Vec<BigRational>> =
        a.iter().map(|row| live.iter().map(|&j| row[j].clone()).collect()).collect();
    let sub_c: Vec<BigRational> = live.iter().map(|&j| objective[j].clone()).collect();
    let sol = simplex::maximize(&sub_a, &b, &sub_c, budget)?;
    let node_obj = sol.objective.clone() + constant;
    if let Some((incumbent, _)) = best.as_ref() {
        if node_obj <= *incumbent {
            return Ok(()); // the relaxation cannot beat the incumbent
        }
    }
    // reconstruct x from y
    let mut x = vec![BigRational::zero(); num_vars];
    for (pos, &j) in live.iter().enumerate() {
        x[j] = sol.values[pos].clone();
        if state[j] == FloorState::AtLeast {
            x[j] += &floors[j];
        }
    }
    // find a floor violation
    let violator = (0..num_vars)
        .find(|&j| state[j] == FloorState::Free && !x[j].is_zero() && x[j] < floors[j]);
    match violator {
        None => {
            if best.as_ref().map_or(true, |(inc, _)| node_obj > *inc) {
                *best = Some((node_obj, x));
            }
            Ok(())
        }
        Some(j) => {
            state[j] = FloorState::AtLeast;
            branch_on_floors(a, objective, floors, state, best, budget)?;
            state[j] = FloorState::Zero;
            branch_on_floors(a, objective, floors, state, best, budget)?;
            state[j] = FloorState::Free;
            Ok(())
        }
    }
}

/// phi*(H, c) as a plain number, with the optimal tiling discarded.
pub fn phi_star_value(
    h: &Hypergraph,
    fam: &TileFamily,
    c: &BigRational,
    budget: &mut Budget,
) -> Result<BigRational> {
    solve_phi_star(h, fam, c, budget).map(|(_, phi)| phi)
}

/// Conservation identity: sum_v omega*(v) = s sum_F w(F) + k M_s sum_e w(e).
pub fn conservation_holds(frac: &FractionalTiling) -> bool {
    let lhs: BigRational = (0..frac.n as u32).map(|v| frac.vertex_weight(v)).sum();
    let rhs = BigRational::from_integer(frac.fam.s.into()) * frac.total_f_weight()
        + BigRational::from_integer((frac.fam.k * frac.fam.m_big).into()) * frac.total_e_weight();
    lhs == rhs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::tile_family;
    use crate::search::{fe_tiling_min_phi, PieceKind, TilingPiece};

    fn single_f_tiling(fam: &TileFamily) -> (Hypergraph, Tiling) {
        let h = fam.f_s.host.graph.clone();
        let classes: Vec<Vec<u32>> =
            (1..=fam.k as u8).map(|c| fam.f_s.host.classes.class(c).to_vec()).collect();
        let pendants: Vec<u32> = fam.f_s.pendants.iter().map(|&(_, _, w)| w).collect();
        let mut vertices: Vec<u32> =
            classes.iter().flatten().chain(pendants.iter()).copied().collect();
        vertices.sort_unstable();
        let tiling = Tiling {
            pieces: vec![TilingPiece {
                kind: PieceKind::FTile,
                vertices,
                witness: PieceWitness::Fs { classes, pendants },
            }],
        };
        (h, tiling)
    }

    fn single_e_tiling(fam: &TileFamily) -> (Hypergraph, Tiling) {
        let h = fam.e_s.graph.clone();
        let classes: Vec<Vec<u32>> =
            (1..=fam.k as u8).map(|c| fam.e_s.classes.class(c).to_vec()).collect();
        let mut vertices: Vec<u32> = classes.iter().flatten().copied().collect();
        vertices.sort_unstable();
        let tiling = Tiling {
            pieces: vec![TilingPiece {
                kind: PieceKind::ETile,
                vertices,
                witness: PieceWitness::Es { classes },
            }],
        };
        (h, tiling)
    }

    #[test]
    fn conversion_of_one_tile_has_phi_zero() {
        let fam = tile_family(3, 19).unwrap();
        let (h, tiling) = single_f_tiling(&fam);
        let frac = from_integral(&h, &tiling, &fam).unwrap();
        assert!(frac.phi().is_zero());
        // weight sum 1 over a = prod a_i copies of weight 1/a
        let a: usize = fam.a.iter().product();
        assert_eq!(frac.fweights.len(), a);
        assert!(frac.total_f_weight().is_one());
        assert!(conservation_holds(&frac));
        // saturated exactly the pendants, nothing uncovered
        assert_eq!(frac.saturated().len(), fam.ell);
        assert!(frac.uncovered().is_empty());
    }

    #[test]
    fn conversion_of_one_balanced_host() {
        let fam = tile_family(3, 19).unwrap();
        let (h, tiling) = single_e_tiling(&fam);
        let frac = from_integral(&h, &tiling, &fam).unwrap();
        // M_s^k transversal edges at weight M_s^-k sum to one
        assert_eq!(frac.eweights.len(), 6 * 6 * 6);
        assert!(frac.total_e_weight().is_one());
        let expect =
            BigRational::one() - BigRational::new((3 * 19).into(), (5 * 3 * 6).into());
        assert_eq!(frac.phi(), expect);
        assert!(frac.saturated().is_empty());
        assert!(conservation_holds(&frac));
    }

    #[test]
    fn conversion_of_the_empty_tiling() {
        let fam = tile_family(3, 19).unwrap();
        let h = Hypergraph::empty(3, 7);
        let frac = from_integral(&h, &Tiling::default(), &fam).unwrap();
        assert!(frac.phi().is_one());
        assert_eq!(frac.min_weight(), None);
        assert_eq!(frac.uncovered().len(), 7);
        assert!(frac.saturated().is_empty());
    }

    #[test]
    fn counting_report_and_two_pendant_witness() {
        let fam = tile_family(3, 19).unwrap();
        let (h, tiling) = single_f_tiling(&fam);
        let frac = from_integral(&h, &tiling, &fam).unwrap();
        let sat = frac.saturated();
        // |S'| = 2 > n/s = 1 on the single-tile instance
        let report = check_prop_counts(&frac, Some(&sat)).unwrap();
        assert!(report.load_inequality && report.saturation_inequality);
        assert!(report.witness_applicable);
        let witness = report.two_pendant_witness.expect("both pendants share every copy");
        assert_eq!(witness.pendants.len(), 2);
        // querying unsaturated vertices is a usage error
        assert!(check_prop_counts(&frac, Some(&[0, 1])).is_err());
    }

    #[test]
    fn fstar_enumeration_on_the_tile() {
        let fam = tile_family(3, 19).unwrap();
        let mut budget = Budget::new(50_000_000);
        let copies = enumerate_fstar_copies(&fam.f_s.host.graph, &fam, &mut budget).unwrap();
        assert!(!copies.is_empty());
        for c in &copies {
            c.validate(&fam.f_s.host.graph, &fam).unwrap();
        }
        // the canonical copies (core transversal, pendants the tile's own)
        // must be among them
        let a: usize = fam.a.iter().product();
        assert!(copies.len() >= a);
    }

    #[test]
    fn phi_star_trivial_and_exact_cases() {
        let fam = tile_family(3, 19).unwrap();
        let mut budget = Budget::new(200_000_000);
        // no copies, no edges: phi* = 1
        let empty = Hypergraph::empty(3, 5);
        let (zero, phi) = solve_phi_star(&empty, &fam, &s_power_floor(&fam, 2), &mut budget).unwrap();
        assert!(phi.is_one());
        assert!(zero.fweights.is_empty() && zero.eweights.is_empty());
        // the tile itself at c = s^-2k: phi* = 0
        let (frac, phi) =
            solve_phi_star(&fam.f_s.host.graph, &fam, &s_power_floor(&fam, 2), &mut budget)
                .unwrap();
        assert!(phi.is_zero(), "phi* = {phi}");
        frac.validate(&fam.f_s.host.graph).unwrap();
    }

    fn s_power_floor(fam: &TileFamily, mult: u32) -> BigRational {
        let mut pow = BigRational::one();
        for _ in 0..(fam.k as u32 * mult) {
            pow *= BigRational::from_integer(fam.s.into());
        }
        pow.recip()
    }

    #[test]
    fn phi_star_never_beats_integral_from_above() {
        let fam = tile_family(3, 19).unwrap();
        let mut budget = Budget::new(400_000_000);
        let c = s_power_floor(&fam, 1); // c = s^-k, the conversion floor
        for h in [fam.f_s.host.graph.clone(), fam.e_s.graph.clone()] {
            let integral = fe_tiling_min_phi(&h, &fam, &mut budget).unwrap();
            let (_, phi_star) = solve_phi_star(&h, &fam, &c, &mut budget).unwrap();
            assert!(
                phi_star <= integral.phi,
                "phi* = {phi_star} vs integral {}",
                integral.phi
            );
        }
    }
}
