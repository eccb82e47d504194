//! Resolving sets and metric dimension.
//!
//! A subset `S` resolves a space when the coordinate map
//! `ψ(x) = (d(x, s₁), …, d(x, s_r))` is injective. Restated per pair: every
//! pair `{u, v}` must be hit by `S` in its set of distinguishers
//! `{w : |d(u,w) − d(v,w)| > τ}`. The exact solver is a branch-and-bound
//! minimum hitting set over that [`PairTable`]; plain enumeration by
//! increasing cardinality is kept as an independent oracle.
//!
//! All tie-breaking follows point-label order, so the reported basis is the
//! lexicographically least optimal basis regardless of solver.

use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::metric::{FiniteMetricSpace, PointId};
use crate::{Error, Result};

/// Default cap on the number of points for complete basis enumeration.
pub const DEFAULT_MAX_ENUMERATION_POINTS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Solver {
    /// Minimum hitting set by branch and bound.
    #[default]
    BranchAndBound,
    /// Every subset by increasing cardinality, checked through `ψ`.
    Enumeration,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolverConfig {
    pub solver: Solver,
    pub enumerate_all: bool,
    pub max_enumeration_points: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            solver: Solver::BranchAndBound,
            enumerate_all: false,
            max_enumeration_points: DEFAULT_MAX_ENUMERATION_POINTS,
        }
    }
}

impl SolverConfig {
    pub fn with_solver(mut self, solver: Solver) -> Self {
        self.solver = solver;
        self
    }

    pub fn all_bases(mut self) -> Self {
        self.enumerate_all = true;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolveResult {
    pub dimension: usize,
    /// Lexicographically least metric basis, in label order.
    pub basis: Vec<PointId>,
    #[serde(skip)]
    pub basis_indices: Vec<usize>,
    /// Every metric basis, each in label order, listed in lexicographic order.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub all_bases: Option<Vec<Vec<PointId>>>,
    #[serde(skip)]
    pub all_basis_indices: Option<Vec<Vec<usize>>>,
}

/// Distinguisher sets for every unordered point pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairTable {
    n: usize,
    pairs: Vec<(usize, usize)>,
    distinguishers: Vec<Vec<usize>>,
}

impl PairTable {
    pub fn new(space: &FiniteMetricSpace) -> Self {
        let n = space.len();
        let mut pairs = Vec::with_capacity(n * (n - 1) / 2);
        let mut distinguishers = Vec::with_capacity(n * (n - 1) / 2);
        for u in 0..n {
            for v in (u + 1)..n {
                pairs.push((u, v));
                distinguishers.push(
                    (0..n)
                        .filter(|&w| !space.same(space.d(u, w), space.d(v, w)))
                        .collect(),
                );
            }
        }
        PairTable {
            n,
            pairs,
            distinguishers,
        }
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize), &[usize])> {
        self.pairs
            .iter()
            .copied()
            .zip(self.distinguishers.iter().map(Vec::as_slice))
    }

    /// Distinguishers of `{u, v}`, sorted by index.
    pub fn distinguishers(&self, u: usize, v: usize) -> &[usize] {
        let (u, v) = if u < v { (u, v) } else { (v, u) };
        assert!(u != v && v < self.n, "not a pair of distinct points");
        // row-major upper triangle
        let k = u * (2 * self.n - u - 1) / 2 + (v - u - 1);
        &self.distinguishers[k]
    }

    /// True iff `subset` meets every distinguisher set.
    pub fn is_hit_by(&self, subset: &[usize]) -> bool {
        let mut mark = vec![false; self.n];
        for &s in subset {
            mark[s] = true;
        }
        self.distinguishers
            .iter()
            .all(|d| d.iter().any(|&w| mark[w]))
    }
}

pub fn pair_table(space: &FiniteMetricSpace) -> PairTable {
    PairTable::new(space)
}

/// `ψ(x)` restricted to `landmarks`, in order.
pub fn coordinates(space: &FiniteMetricSpace, landmarks: &[usize], x: usize) -> Vec<f64> {
    landmarks.iter().map(|&s| space.d(x, s)).collect()
}

pub fn coordinates_of(
    space: &FiniteMetricSpace,
    landmarks: &[&str],
    x: &str,
) -> Result<Vec<f64>> {
    if landmarks.is_empty() {
        return Err(Error::EmptySubset);
    }
    let x = space.index_of(x)?;
    let idx = landmarks
        .iter()
        .map(|l| space.index_of(l))
        .collect::<Result<Vec<_>>>()?;
    Ok(coordinates(space, &idx, x))
}

/// True iff `ψ` restricted to `subset` separates every pair of points.
pub fn resolves(space: &FiniteMetricSpace, subset: &[usize]) -> bool {
    let n = space.len();
    (0..n).all(|u| {
        ((u + 1)..n).all(|v| {
            subset
                .iter()
                .any(|&s| !space.same(space.d(u, s), space.d(v, s)))
        })
    })
}

pub fn resolves_labels(space: &FiniteMetricSpace, subset: &[&str]) -> Result<bool> {
    let idx = subset
        .iter()
        .map(|l| space.index_of(l))
        .collect::<Result<Vec<_>>>()?;
    Ok(resolves(space, &idx))
}

/// Point indices sorted by label; position in this list is the rank used
/// for every tie-break.
fn label_order(space: &FiniteMetricSpace) -> Vec<usize> {
    let mut order: Vec<usize> = (0..space.len()).collect();
    order.sort_by(|&a, &b| space.label(a).cmp(space.label(b)));
    order
}

fn to_labels(space: &FiniteMetricSpace, idx: &[usize]) -> Vec<PointId> {
    idx.iter().map(|&i| space.label(i).clone()).collect()
}

/// Greedy set-cover upper bound: repeatedly take the point that separates
/// the most still-unseparated pairs, ties to the smallest label.
pub fn greedy_generator(space: &FiniteMetricSpace) -> Vec<usize> {
    let order = label_order(space);
    let table = PairTable::new(space);
    let mut uncovered: Vec<&[usize]> = table.distinguishers.iter().map(Vec::as_slice).collect();
    let mut chosen = Vec::new();
    let mut gain = vec![0usize; space.len()];
    while !uncovered.is_empty() {
        gain.iter_mut().for_each(|g| *g = 0);
        for d in &uncovered {
            for &w in d.iter() {
                gain[w] += 1;
            }
        }
        let mut pick = order[0];
        for &i in &order {
            if gain[i] > gain[pick] {
                pick = i;
            }
        }
        chosen.push(pick);
        uncovered.retain(|d| !d.contains(&pick));
    }
    sort_by_label(space, &mut chosen);
    chosen
}

fn sort_by_label(space: &FiniteMetricSpace, idx: &mut [usize]) {
    idx.sort_by(|&a, &b| space.label(a).cmp(space.label(b)));
}

/// Exact metric dimension with the lexicographically least basis.
pub fn metric_dimension(space: &FiniteMetricSpace, config: &SolverConfig) -> Result<ResolveResult> {
    let n = space.len();
    if config.enumerate_all && n > config.max_enumeration_points {
        return Err(Error::SizeGuard {
            guard: "max-enumeration-points",
            cardinality: n,
            limit: config.max_enumeration_points,
        });
    }
    let order = label_order(space);
    let (dimension, basis_ranks, all) = match config.solver {
        Solver::BranchAndBound => {
            let hs = HittingSet::from_space(space, &order);
            let k = hs.minimum_size();
            let basis = hs.lex_least(k);
            let all = config.enumerate_all.then(|| hs.all_of_size(k));
            (k, basis, all)
        }
        Solver::Enumeration => enumerate(space, &order, config.enumerate_all),
    };
    let from_ranks = |ranks: &[usize]| -> Vec<usize> { ranks.iter().map(|&r| order[r]).collect() };
    let basis_indices = from_ranks(&basis_ranks);
    let all_basis_indices: Option<Vec<Vec<usize>>> =
        all.map(|bs| bs.iter().map(|b| from_ranks(b)).collect());
    Ok(ResolveResult {
        dimension,
        basis: to_labels(space, &basis_indices),
        all_bases: all_basis_indices
            .as_ref()
            .map(|bs| bs.iter().map(|b| to_labels(space, b)).collect()),
        basis_indices,
        all_basis_indices,
    })
}

/// Enumeration oracle, working in rank space. Returns the dimension, the
/// first (lexicographically least) basis and optionally all bases.
fn enumerate(
    space: &FiniteMetricSpace,
    order: &[usize],
    all: bool,
) -> (usize, Vec<usize>, Option<Vec<Vec<usize>>>) {
    let n = space.len();
    for k in 1..=n {
        let mut found: Vec<Vec<usize>> = Vec::new();
        for_each_combination(n, k, |ranks| {
            let idx: Vec<usize> = ranks.iter().map(|&r| order[r]).collect();
            if resolves(space, &idx) {
                found.push(ranks.to_vec());
                return all;
            }
            true
        });
        if let Some(first) = found.first().cloned() {
            return (k, first, all.then_some(found));
        }
    }
    unreachable!("the whole point set always resolves")
}

/// Calls `f` on each `k`-subset of `0..n` in lexicographic order until it
/// returns false.
fn for_each_combination(n: usize, k: usize, mut f: impl FnMut(&[usize]) -> bool) {
    if k > n {
        return;
    }
    let mut c: Vec<usize> = (0..k).collect();
    loop {
        if !f(&c) {
            return;
        }
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if c[i] < n - k + i {
                break;
            }
            if i == 0 {
                return;
            }
        }
        c[i] += 1;
        for j in (i + 1)..k {
            c[j] = c[j - 1] + 1;
        }
    }
}

/// Minimum hitting set instance over point ranks, as bit rows.
struct HittingSet {
    n: usize,
    words: usize,
    /// `sets.len() / words` rows, reduced to inclusion-minimal sets and
    /// sorted by cardinality.
    sets: Vec<u64>,
}

#[inline]
fn bit(words: &mut [u64], i: usize) {
    words[i / 64] |= 1 << (i % 64);
}

#[inline]
fn clear(words: &mut [u64], i: usize) {
    words[i / 64] &= !(1 << (i % 64));
}

#[inline]
fn intersects(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).any(|(x, y)| x & y != 0)
}

#[inline]
fn count_and(a: &[u64], b: &[u64]) -> u32 {
    a.iter().zip(b).map(|(x, y)| (x & y).count_ones()).sum()
}

fn ones(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(wi, &w)| {
        let mut w = w;
        core::iter::from_fn(move || {
            if w == 0 {
                None
            } else {
                let t = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + t)
            }
        })
    })
}

struct Search<'a> {
    hs: &'a HittingSet,
    /// Size of the best hitting set known; search only for strictly smaller.
    best: usize,
    best_set: Option<Vec<u64>>,
    /// Stop at the first hitting set below `best`.
    decision: bool,
}

impl HittingSet {
    fn from_space(space: &FiniteMetricSpace, order: &[usize]) -> Self {
        let n = space.len();
        let words = n.div_ceil(64);
        let mut rank = vec![0; n];
        for (r, &i) in order.iter().enumerate() {
            rank[i] = r;
        }
        let table = PairTable::new(space);
        let mut rows: Vec<Vec<u64>> = table
            .distinguishers
            .iter()
            .map(|d| {
                let mut row = vec![0u64; words];
                for &w in d {
                    bit(&mut row, rank[w]);
                }
                row
            })
            .collect();
        rows.sort_by_key(|r| (r.iter().map(|w| w.count_ones()).sum::<u32>(), r.clone()));
        rows.dedup();
        // keep only inclusion-minimal rows; rows are sorted by size so a
        // subset always precedes its supersets
        let mut kept: Vec<Vec<u64>> = Vec::new();
        for r in rows {
            let dominated = kept
                .iter()
                .any(|k| k.iter().zip(&r).all(|(a, b)| a & !b == 0));
            if !dominated {
                kept.push(r);
            }
        }
        HittingSet {
            n,
            words,
            sets: kept.concat(),
        }
    }

    fn row(&self, p: usize) -> &[u64] {
        &self.sets[p * self.words..(p + 1) * self.words]
    }

    fn rows(&self) -> usize {
        self.sets.len() / self.words
    }

    fn full(&self) -> Vec<u64> {
        let mut all = vec![0u64; self.words];
        for i in 0..self.n {
            bit(&mut all, i);
        }
        all
    }

    fn greedy(&self) -> Vec<u64> {
        let mut chosen = vec![0u64; self.words];
        let mut uncovered: Vec<usize> = (0..self.rows()).collect();
        let mut gain = vec![0usize; self.n];
        while !uncovered.is_empty() {
            gain.iter_mut().for_each(|g| *g = 0);
            for &p in &uncovered {
                for w in ones(self.row(p)) {
                    gain[w] += 1;
                }
            }
            let pick = (0..self.n).fold(0, |b, i| if gain[i] > gain[b] { i } else { b });
            bit(&mut chosen, pick);
            uncovered.retain(|&p| !intersects(self.row(p), &chosen));
        }
        chosen
    }

    /// Smallest hitting set size: greedy incumbent, then branch and bound
    /// for anything strictly smaller.
    fn minimum_size(&self) -> usize {
        let incumbent = self.greedy();
        let mut search = Search {
            hs: self,
            best: incumbent.iter().map(|w| w.count_ones() as usize).sum(),
            best_set: Some(incumbent),
            decision: false,
        };
        let mut chosen = vec![0u64; self.words];
        let mut allowed = self.full();
        let uncovered: Vec<usize> = (0..self.rows()).collect();
        search.run(&mut chosen, 0, &uncovered, &mut allowed);
        search.best
    }

    /// Is there a hitting set of size ≤ `budget` containing `forced` whose
    /// other members all lie in `allowed`?
    fn feasible(&self, forced: &[u64], allowed: &[u64], budget: usize) -> bool {
        let mut chosen = forced.to_vec();
        let size = ones(forced).count();
        if size > budget {
            return false;
        }
        let uncovered: Vec<usize> = (0..self.rows())
            .filter(|&p| !intersects(self.row(p), forced))
            .collect();
        let mut search = Search {
            hs: self,
            best: budget + 1,
            best_set: None,
            decision: true,
        };
        let mut allowed = allowed.to_vec();
        search.run(&mut chosen, size, &uncovered, &mut allowed);
        search.best_set.is_some()
    }

    /// Lexicographically least hitting set of size `k` in rank space,
    /// assuming `k` is the minimum.
    fn lex_least(&self, k: usize) -> Vec<usize> {
        let mut forced = vec![0u64; self.words];
        let mut picked = Vec::with_capacity(k);
        let mut next = 0;
        while picked.len() < k {
            let e = (next..self.n)
                .find(|&e| {
                    let mut f = forced.clone();
                    bit(&mut f, e);
                    let mut allowed = vec![0u64; self.words];
                    for j in (e + 1)..self.n {
                        bit(&mut allowed, j);
                    }
                    self.feasible(&f, &allowed, k)
                })
                .expect("an optimal hitting set extends every feasible prefix");
            bit(&mut forced, e);
            picked.push(e);
            next = e + 1;
        }
        picked
    }

    fn all_of_size(&self, k: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut set = vec![0u64; self.words];
        for_each_combination(self.n, k, |c| {
            set.iter_mut().for_each(|w| *w = 0);
            for &e in c {
                bit(&mut set, e);
            }
            if (0..self.rows()).all(|p| intersects(self.row(p), &set)) {
                out.push(c.to_vec());
            }
            true
        });
        out
    }
}

impl Search<'_> {
    fn done(&self) -> bool {
        self.decision && self.best_set.is_some()
    }

    /// Lower bound on the extra points needed: a greedy packing of
    /// uncovered rows that are pairwise disjoint within `allowed`.
    fn packing_bound(&self, uncovered: &[usize], allowed: &[u64], scratch: &mut [u64]) -> usize {
        scratch.iter_mut().for_each(|w| *w = 0);
        let mut count = 0;
        for &p in uncovered {
            let row = self.hs.row(p);
            let disjoint = row
                .iter()
                .zip(allowed)
                .zip(scratch.iter())
                .all(|((r, a), s)| r & a & s == 0);
            if disjoint {
                count += 1;
                for ((s, r), a) in scratch.iter_mut().zip(row).zip(allowed) {
                    *s |= r & a;
                }
            }
        }
        count
    }

    fn run(&mut self, chosen: &mut Vec<u64>, size: usize, uncovered: &[usize], allowed: &mut Vec<u64>) {
        if self.done() {
            return;
        }
        if uncovered.is_empty() {
            if size < self.best {
                self.best = size;
                self.best_set = Some(chosen.clone());
            }
            return;
        }
        let mut scratch = vec![0u64; self.hs.words];
        if size + self.packing_bound(uncovered, allowed, &mut scratch) >= self.best {
            return;
        }
        // branch on the uncovered row with the fewest allowed candidates
        let mut pivot = uncovered[0];
        let mut fewest = u32::MAX;
        for &p in uncovered {
            let c = count_and(self.hs.row(p), allowed);
            if c < fewest {
                fewest = c;
                pivot = p;
                if c <= 1 {
                    break;
                }
            }
        }
        if fewest == 0 {
            return;
        }
        let masked: Vec<u64> = self
            .hs
            .row(pivot)
            .iter()
            .zip(allowed.iter())
            .map(|(r, a)| r & a)
            .collect();
        let candidates: Vec<usize> = ones(&masked).collect();
        let saved = allowed.clone();
        for e in candidates {
            bit(chosen, e);
            let rest: Vec<usize> = uncovered
                .iter()
                .copied()
                .filter(|&p| self.hs.row(p)[e / 64] & (1 << (e % 64)) == 0)
                .collect();
            self.run(chosen, size + 1, &rest, allowed);
            clear(chosen, e);
            if self.done() {
                break;
            }
            // later siblings never use e again
            clear(allowed, e);
        }
        *allowed = saved;
    }
}
