//! Minimum weight of a vector in `ker H ∖ rowspace G`.
//!
//! For a complex this is the smallest support of a cocycle representing a
//! nonzero class; for a CSS pair it is one side of the code distance.

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::Serialize;

use super::bitmatrix::{lex_words, popcount_words, xor_words, BitMatrix, BitVec, Echelon};
use super::complex::ChainComplex;
use crate::{Error, Result};

pub const DEFAULT_BUDGET: u32 = 24;
pub const DEFAULT_W_MAX: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DistanceMode {
    /// Full enumeration of the kernel when its dimension is at most
    /// `budget`; otherwise an information-set search limited to `2^budget`
    /// candidates, exact whenever its lower bound meets the best weight found.
    Exact { budget: u32 },
    /// Exhausts every vector of weight at most `w_max`.
    Bounded { w_max: usize },
}

impl Default for DistanceMode {
    fn default() -> Self {
        DistanceMode::Exact { budget: DEFAULT_BUDGET }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchMethod {
    KernelEnumeration,
    InformationSets,
    Certificate,
    Trivial,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MinWeight {
    /// No nontrivial class: the minimum is over an empty set.
    Infinite,
    Exact {
        weight: usize,
        witness: BitVec,
        method: SearchMethod,
    },
    /// `lower ≤ d ≤ upper`; `witness` has weight `upper`.
    Bounds {
        lower: usize,
        upper: usize,
        witness: BitVec,
        method: SearchMethod,
    },
}

impl MinWeight {
    #[must_use]
    pub fn exact(&self) -> Option<usize> {
        match self {
            MinWeight::Exact { weight, .. } => Some(*weight),
            _ => None,
        }
    }

    #[must_use]
    pub fn is_exact(&self) -> bool {
        !matches!(self, MinWeight::Bounds { .. })
    }

    /// Certified lower bound (`None` for infinite).
    #[must_use]
    pub fn lower(&self) -> Option<usize> {
        match self {
            MinWeight::Infinite => None,
            MinWeight::Exact { weight, .. } => Some(*weight),
            MinWeight::Bounds { lower, .. } => Some(*lower),
        }
    }

    #[must_use]
    pub fn upper(&self) -> Option<usize> {
        match self {
            MinWeight::Infinite => None,
            MinWeight::Exact { weight, .. } => Some(*weight),
            MinWeight::Bounds { upper, .. } => Some(*upper),
        }
    }

    #[must_use]
    pub fn witness(&self) -> Option<&BitVec> {
        match self {
            MinWeight::Infinite => None,
            MinWeight::Exact { witness, .. } | MinWeight::Bounds { witness, .. } => Some(witness),
        }
    }
}

impl std::fmt::Display for MinWeight {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MinWeight::Infinite => write!(f, "inf"),
            MinWeight::Exact { weight, .. } => write!(f, "{weight}"),
            MinWeight::Bounds { lower, upper, .. } => write!(f, "[{lower},{upper}]"),
        }
    }
}

/// `d^i`: minimum weight of a cocycle in degree `i` with nonzero class.
pub fn min_homology_weight(c: &ChainComplex, i: i32, mode: DistanceMode) -> Result<MinWeight> {
    let checks = c.differential_or_zero(i);
    let exclude = c.differential_or_zero(i - 1).transpose();
    min_weight_outside(&checks, &exclude, mode)
}

/// Splits `ker checks` as `rowspace(exclude) ⊕ span(reps)`.
struct Quotient {
    n: usize,
    image: Echelon,
    image_basis: Vec<BitVec>,
    reps: Vec<BitVec>,
}

impl Quotient {
    fn new(checks: &BitMatrix, exclude: &BitMatrix) -> Result<Self> {
        if checks.cols() != exclude.cols() {
            return Err(Error::Dimension(format!(
                "check matrix has {} columns, excluded span {}",
                checks.cols(),
                exclude.cols()
            )));
        }
        if !checks.mul(&exclude.transpose())?.is_zero() {
            return Err(Error::Integrity("excluded vectors are not in the kernel".into()));
        }
        let image = Echelon::from_matrix(exclude);
        let mut span = image.clone();
        let mut reps = Vec::new();
        for v in checks.kernel_basis() {
            if span.insert(&v) {
                reps.push(v);
            }
        }
        let image_basis = image.basis().to_vec();
        Ok(Self { n: checks.cols(), image, image_basis, reps })
    }

    fn kernel_dim(&self) -> usize {
        self.image_basis.len() + self.reps.len()
    }

    fn outside_image(&self, v: &[u64]) -> bool {
        let mut w = v.to_vec();
        self.image.reduce_words(&mut w);
        w.iter().any(|&x| x != 0)
    }

    /// Lightest class representative among the stored ones.
    fn seed(&self) -> Best {
        let mut best = Best::none();
        for r in &self.reps {
            best.offer(r.count_ones(), r.words());
        }
        best
    }
}

#[derive(Clone, Debug)]
struct Best {
    weight: usize,
    words: Vec<u64>,
}

impl Best {
    fn none() -> Self {
        Self { weight: usize::MAX, words: Vec::new() }
    }

    fn beats(&self, weight: usize, words: &[u64]) -> bool {
        weight < self.weight || (weight == self.weight && lex_words(words, &self.words) == Ordering::Less)
    }

    fn offer(&mut self, weight: usize, words: &[u64]) {
        if self.beats(weight, words) {
            self.weight = weight;
            self.words = words.to_vec();
        }
    }

    fn merge(mut self, other: Best) -> Best {
        if other.weight != usize::MAX {
            self.offer(other.weight, &other.words);
        }
        self
    }
}

/// Minimum weight of `x` with `checks · x = 0` and `x ∉ rowspace(exclude)`.
///
/// Every row of `exclude` must itself lie in the kernel of `checks`.
pub fn min_weight_outside(checks: &BitMatrix, exclude: &BitMatrix, mode: DistanceMode) -> Result<MinWeight> {
    let q = Quotient::new(checks, exclude)?;
    if q.reps.is_empty() {
        return Ok(MinWeight::Infinite);
    }
    match mode {
        DistanceMode::Exact { budget } if q.kernel_dim() <= budget as usize && q.kernel_dim() < 63 => {
            let best = gray_enumerate(&q);
            Ok(MinWeight::Exact {
                weight: best.weight,
                witness: BitVec::from_words(q.n, best.words),
                method: SearchMethod::KernelEnumeration,
            })
        }
        DistanceMode::Exact { budget } => {
            let cap = 1u128 << budget.min(100);
            Ok(information_set_search(&q, checks, SearchStop::Work(cap)))
        }
        DistanceMode::Bounded { w_max } => Ok(information_set_search(&q, checks, SearchStop::Weight(w_max))),
    }
}

/// Walks all of `ker` in Gray-code order, split into independent chunks on the
/// highest generators. The chunking does not affect the result.
fn gray_enumerate(q: &Quotient) -> Best {
    let gens: Vec<&BitVec> = q.image_basis.iter().chain(&q.reps).collect();
    let m = gens.len();
    let rep_mask: u64 = ((1u64 << q.reps.len()) - 1) << q.image_basis.len();
    let high = m.min(8);
    let low = m - high;
    let words = q.n.div_ceil(64);
    (0u64..1 << high)
        .into_par_iter()
        .map(|chunk| {
            let mut cur = vec![0u64; words];
            let mut coef = chunk << low;
            for j in 0..high {
                if chunk >> j & 1 == 1 {
                    xor_words(&mut cur, gens[low + j].words());
                }
            }
            let mut best = Best::none();
            let visit = |cur: &[u64], coef: u64, best: &mut Best| {
                if coef & rep_mask != 0 {
                    let w = popcount_words(cur);
                    if best.beats(w, cur) {
                        best.weight = w;
                        best.words = cur.to_vec();
                    }
                }
            };
            visit(&cur, coef, &mut best);
            for step in 1u64..1 << low {
                let t = step.trailing_zeros() as usize;
                xor_words(&mut cur, gens[t].words());
                coef ^= 1 << t;
                visit(&cur, coef, &mut best);
            }
            best
        })
        .reduce(Best::none, Best::merge)
}

enum SearchStop {
    /// Give up once the next level would exceed this many candidates.
    Work(u128),
    /// Stop once every vector of weight at most this has been seen.
    Weight(usize),
}

/// Most information sets kept at once.
const MAX_SETS: usize = 16;

/// A generator matrix of `ker` in systematic form on some column set.
struct InfoSet {
    rows: Vec<Vec<u64>>,
    /// Class syndrome of each row (bit `i` is the pairing with dual `i`).
    syn: Vec<u64>,
    pivots: Vec<usize>,
    /// Every sum of at most `done` rows has been examined.
    done: usize,
}

/// Tells whether a kernel vector has a nonzero class.
enum Detector<'a> {
    /// Pairings with a basis of the dual quotient; nonzero syndrome iff nontrivial.
    Syndrome(Vec<BitVec>),
    Reduce(&'a Quotient),
}

impl Detector<'_> {
    fn syndrome(&self, row: &[u64]) -> u64 {
        match self {
            Detector::Syndrome(duals) => duals.iter().enumerate().fold(0, |s, (i, h)| {
                let dot = h.words().iter().zip(row).fold(0u32, |a, (x, y)| a ^ (x & y).count_ones()) & 1;
                s | u64::from(dot) << i
            }),
            Detector::Reduce(_) => 0,
        }
    }

    fn nontrivial(&self, syn: u64, v: &[u64]) -> bool {
        match self {
            Detector::Syndrome(_) => syn != 0,
            Detector::Reduce(q) => q.outside_image(v),
        }
    }
}

/// Systematic form of `kernel` on the first independent columns of `order`.
fn systematic(kernel: &[BitVec], order: &[usize]) -> (Vec<Vec<u64>>, Vec<usize>) {
    let k = kernel.len();
    let mut rows: Vec<Vec<u64>> = kernel.iter().map(|v| v.words().to_vec()).collect();
    let mut pivots = Vec::with_capacity(k);
    for &c in order {
        let top = pivots.len();
        if top == k {
            break;
        }
        let (w, b) = (c / 64, 1u64 << (c % 64));
        let Some(p) = (top..k).find(|&r| rows[r][w] & b != 0) else { continue };
        rows.swap(top, p);
        let pivot = rows[top].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != top && row[w] & b != 0 {
                xor_words(row, &pivot);
            }
        }
        pivots.push(c);
    }
    (rows, pivots)
}

/// Information sets chosen greedily so that column coverage stays even:
/// each new set prefers the least covered columns.
fn balanced_information_sets(kernel: &[BitVec], n: usize, det: &Detector) -> Vec<InfoSet> {
    let k = kernel.len();
    let per_set = (k as u128 * k as u128 * n.div_ceil(64) as u128).max(1);
    let max_sets = ((1u128 << 28) / per_set).clamp(1, MAX_SETS as u128) as usize;
    let mut cover = vec![0usize; n];
    let mut out = Vec::new();
    while out.len() < max_sets {
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&c| (cover[c], c));
        let (rows, pivots) = systematic(kernel, &order);
        debug_assert_eq!(pivots.len(), k);
        for &c in &pivots {
            cover[c] += 1;
        }
        let syn = rows.iter().map(|r| det.syndrome(r)).collect();
        out.push(InfoSet { rows, syn, pivots, done: 0 });
        if k == 0 || k == n {
            break;
        }
    }
    out
}

/// Smallest weight a nontrivial vector can have if it meets every set `j`
/// of `sets` in more than `levels[j]` pivot columns: the `w` most covered
/// columns must carry at least `Σ (levels[j] + 1)` pivot incidences.
/// `None` when no vector at all can do that.
fn coverage_bound(sets: &[InfoSet], levels: &[usize], n: usize) -> Option<usize> {
    let mut cover = vec![0usize; n];
    for s in sets {
        for &c in &s.pivots {
            cover[c] += 1;
        }
    }
    cover.sort_unstable_by(|a, b| b.cmp(a));
    let need: usize = levels.iter().map(|&t| t + 1).sum();
    let mut acc = 0;
    for (w, &c) in cover.iter().enumerate() {
        acc += c;
        if acc >= need {
            return Some(w + 1);
        }
    }
    None
}

/// Lower bound implied by what has been enumerated so far; `usize::MAX`
/// when every nontrivial vector has been seen.
fn current_bound(sets: &[InfoSet], k: usize, n: usize) -> usize {
    if sets.iter().any(|s| s.done >= k) {
        return usize::MAX;
    }
    (1..=sets.len())
        .map(|p| {
            let levels: Vec<usize> = sets[..p].iter().map(|s| s.done).collect();
            coverage_bound(&sets[..p], &levels, n).unwrap_or(usize::MAX)
        })
        .max()
        .unwrap_or(1)
}

/// Cheapest way to push the bound to `goal`: a prefix length and the level
/// its sets must reach, with the number of candidates still needed.
fn plan(sets: &[InfoSet], k: usize, n: usize, goal: usize) -> Option<(usize, usize, u128)> {
    let mut best: Option<(usize, usize, u128)> = None;
    for p in 1..=sets.len() {
        let reached = |t: usize| {
            let levels: Vec<usize> = sets[..p].iter().map(|s| s.done.max(t)).collect();
            t >= k || coverage_bound(&sets[..p], &levels, n).is_none_or(|b| b >= goal)
        };
        // the bound grows with t, so bisect for the first level that reaches the goal
        let (mut lo, mut hi) = (1usize, k.max(1));
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            if reached(mid) {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        let t = lo;
        let cost: u128 = sets[..p]
            .iter()
            .map(|s| (s.done + 1..=t).map(|l| binomial_u128(k, l)).fold(0u128, u128::saturating_add))
            .fold(0u128, u128::saturating_add);
        if best.is_none_or(|(_, _, c)| cost < c) {
            best = Some((p, t, cost));
        }
    }
    best
}

/// Brouwer–Zimmermann style search: enumerate sums of few rows of `ker` in
/// systematic form on several information sets, and stop when the coverage
/// bound meets the lightest nontrivial vector found.
fn information_set_search(q: &Quotient, checks: &BitMatrix, stop: SearchStop) -> MinWeight {
    let kernel: Vec<BitVec> = q.image_basis.iter().chain(&q.reps).cloned().collect();
    let k = kernel.len();
    let det = dual_detector(q, checks);
    let mut sets = balanced_information_sets(&kernel, q.n, &det);
    let mut best = q.seed();
    let mut work: u128 = 0;
    loop {
        let bound = current_bound(&sets, k, q.n);
        let goal = match stop {
            SearchStop::Work(_) => best.weight,
            SearchStop::Weight(w_max) => best.weight.min(w_max + 1),
        };
        if bound >= goal {
            break;
        }
        let Some((p, t, _)) = plan(&sets, k, q.n, goal) else { break };
        // advance the least advanced sets of the chosen prefix by one level
        let lowest = sets[..p].iter().map(|s| s.done).min().unwrap_or(t);
        if lowest >= t {
            break;
        }
        let level = lowest + 1;
        let mut stalled = false;
        for s in sets[..p].iter_mut().filter(|s| s.done == lowest) {
            let cost = binomial_u128(k, level);
            if let SearchStop::Work(cap) = stop {
                if work.saturating_add(cost) > cap {
                    stalled = true;
                    break;
                }
            }
            work += cost;
            best = best.merge(enumerate_level(s, level, q.n, &det));
            s.done = level;
        }
        if stalled {
            break;
        }
    }
    debug_assert!(checks.mul_vec(&BitVec::from_words(q.n, best.words.clone())).map(|v| v.is_zero()).unwrap_or(false));
    let lower = current_bound(&sets, k, q.n);
    let witness = BitVec::from_words(q.n, best.words);
    if lower >= best.weight {
        MinWeight::Exact { weight: best.weight, witness, method: SearchMethod::InformationSets }
    } else {
        MinWeight::Bounds { lower: lower.max(1), upper: best.weight, witness, method: SearchMethod::InformationSets }
    }
}

/// Dual vectors detecting nontrivial classes, when there are at most 64.
fn dual_detector<'a>(q: &'a Quotient, checks: &BitMatrix) -> Detector<'a> {
    if q.reps.len() <= 64 {
        let exclude = BitMatrix::from_bitvecs(q.n, &q.image_basis);
        if let Ok(dq) = Quotient::new(&exclude, checks) {
            if dq.reps.len() == q.reps.len() {
                return Detector::Syndrome(dq.reps);
            }
        }
    }
    Detector::Reduce(q)
}

fn binomial_u128(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

/// Best nontrivial vector among sums of exactly `t` rows of `s`.
fn enumerate_level(s: &InfoSet, t: usize, n: usize, det: &Detector) -> Best {
    let k = s.rows.len();
    if t == 0 || t > k {
        return Best::none();
    }
    let words = n.div_ceil(64);
    (0..=k - t)
        .into_par_iter()
        .map(|first| {
            let mut best = Best::none();
            // acc[d] = sum of the first d+1 chosen rows, syn[d] its syndrome
            let mut idx = vec![0usize; t];
            let mut acc = vec![0u64; words * t];
            let mut syn = vec![0u64; t];
            idx[0] = first;
            acc[..words].copy_from_slice(&s.rows[first]);
            syn[0] = s.syn[first];
            let mut depth = 0usize;
            let mut next = first + 1;
            loop {
                if depth + 1 == t {
                    let v = &acc[depth * words..(depth + 1) * words];
                    let w = popcount_words(v);
                    if best.beats(w, v) && det.nontrivial(syn[depth], v) {
                        best.weight = w;
                        best.words = v.to_vec();
                    }
                    next = idx[depth] + 1;
                    if depth == 0 {
                        break;
                    }
                    depth -= 1;
                    continue;
                }
                // room for the remaining t - depth - 1 indices?
                if next + (t - depth - 1) <= k {
                    let (lo, hi) = acc.split_at_mut((depth + 1) * words);
                    let dst = &mut hi[..words];
                    dst.copy_from_slice(&lo[depth * words..]);
                    xor_words(dst, &s.rows[next]);
                    syn[depth + 1] = syn[depth] ^ s.syn[next];
                    depth += 1;
                    idx[depth] = next;
                    next += 1;
                } else {
                    if depth == 0 {
                        break;
                    }
                    next = idx[depth] + 1;
                    depth -= 1;
                }
            }
            best
        })
        .reduce(Best::none, Best::merge)
}

/// Outcome of checking an explicit minimum-weight certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightCertificate {
    /// Weight of the supplied cocycle (an upper bound).
    pub upper: usize,
    /// Number of pairwise disjoint dual vectors, each pairing to one with
    /// every nontrivial class (a lower bound).
    pub lower: usize,
}

impl WeightCertificate {
    #[must_use]
    pub fn is_tight(&self) -> bool {
        self.upper == self.lower
    }
}

/// Verifies a distance certificate when the quotient `ker checks / rowspace
/// exclude` is one-dimensional.
///
/// `cycle` must be a nontrivial kernel vector. Each of `duals` must be
/// orthogonal to every row of `exclude` and pair to one with `cycle`; then
/// every nontrivial vector meets every dual, so pairwise disjoint duals give
/// the lower bound.
pub fn certify_min_weight(
    checks: &BitMatrix,
    exclude: &BitMatrix,
    cycle: &BitVec,
    duals: &[BitVec],
) -> Result<WeightCertificate> {
    let q = Quotient::new(checks, exclude)?;
    if q.reps.len() != 1 {
        return Err(Error::Precondition(format!("quotient has dimension {}, need 1", q.reps.len())));
    }
    if !checks.mul_vec(cycle)?.is_zero() {
        return Err(Error::Integrity("cycle is not in the kernel".into()));
    }
    if !q.outside_image(cycle.words()) {
        return Err(Error::Integrity("cycle is trivial".into()));
    }
    for (j, h) in duals.iter().enumerate() {
        if !exclude.mul_vec(h)?.is_zero() {
            return Err(Error::Integrity(format!("dual vector {j} does not vanish on the excluded span")));
        }
        if !h.dot(cycle) {
            return Err(Error::Integrity(format!("dual vector {j} pairs to zero with the cycle")));
        }
        if duals[..j].iter().any(|g| g.overlaps(h)) {
            return Err(Error::Integrity(format!("dual vector {j} overlaps an earlier one")));
        }
    }
    Ok(WeightCertificate { upper: cycle.count_ones(), lower: duals.len() })
}
