//! Khovanov chain complexes over F₂.
//!
//! Generators of degree `i` are enhanced states with `i` 1-smoothings, listed
//! by resolution (crossing 0 most significant, 0 before 1) and then by label
//! word. Label words are read most significant bit first, one bit per
//! unmarked circle in circle order; `-` (or `1`) is bit 0, `+` (or `X`) bit 1.
//! In the reduced complex the circle through the basepoint carries `X` and
//! has no slot.

use std::collections::{BTreeMap, HashMap};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diagram::PlanarDiagram;
use crate::homalg::{cone, write_matrix_market, BitMatrix, BitVec, ChainComplex, Generator, HomologySummary};
use crate::{Error, Result};

/// Generators allowed in one degree of a dense complex.
pub const MAX_GENERATORS: usize = 1 << 26;
/// Largest cube kept in memory (per-resolution tables are indexed by mask).
pub const MAX_CUBE_CROSSINGS: usize = 20;
const MAX_MATRIX_BITS: u128 = 1 << 33;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LabelBasis {
    /// Labels `-` = 1 and `+` = 1 + X.
    #[default]
    Pm,
    /// Labels `1` and `X`.
    OneX,
}

impl std::str::FromStr for LabelBasis {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pm" => Ok(LabelBasis::Pm),
            "one_x" | "onex" | "1x" => Ok(LabelBasis::OneX),
            _ => Err(Error::Parse(format!("unknown basis `{s}`"))),
        }
    }
}

impl std::fmt::Display for LabelBasis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            LabelBasis::Pm => "pm",
            LabelBasis::OneX => "one_x",
        })
    }
}

/// Resolution plus labels of its unmarked circles.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EnhancedState {
    /// Bit `c` is the smoothing of crossing `c`.
    pub bits: u64,
    /// Label word, slot 0 in the most significant of `n_labels` bits.
    pub labels: u64,
    pub n_labels: u8,
}

impl EnhancedState {
    #[must_use]
    pub fn degree(&self) -> u32 {
        self.bits.count_ones()
    }

    /// Label of slot `s` (false = `-`/`1`, true = `+`/`X`).
    #[must_use]
    pub fn label(&self, slot: usize) -> bool {
        assert!(slot < self.n_labels as usize);
        self.labels >> (self.n_labels as usize - 1 - slot) & 1 == 1
    }

    /// `0110|-+` style description.
    #[must_use]
    pub fn describe(&self, n_crossings: usize, basis: LabelBasis) -> String {
        let bits: String = (0..n_crossings).map(|c| if self.bits >> c & 1 == 1 { '1' } else { '0' }).collect();
        let (lo, hi) = match basis {
            LabelBasis::Pm => ('-', '+'),
            LabelBasis::OneX => ('1', 'X'),
        };
        let labels: String = (0..self.n_labels as usize).map(|s| if self.label(s) { hi } else { lo }).collect();
        format!("{bits}|{labels}")
    }
}

/// Sort key putting crossing 0 in the most significant position.
#[inline]
fn resolution_key(mask: u64, n: usize) -> u64 {
    if n == 0 {
        0
    } else {
        mask.reverse_bits() >> (64 - n)
    }
}

/// Bit position of a circle's label in the word, `None` for the marked circle.
type Slot = Option<u8>;

#[derive(Clone, Debug)]
enum Local {
    Merge { a: Slot, b: Slot, out: Slot },
    Split { src: Slot, t1: Slot, t2: Slot },
}

/// Effect of switching one crossing from 0 to 1 at one resolution.
#[derive(Clone, Debug)]
pub(crate) struct Transition {
    pub(crate) target: u64,
    copies: Vec<(u8, u8)>,
    local: Local,
}

impl Transition {
    /// Calls `emit` with every target label word of `∂_c(word)`.
    #[inline]
    pub(crate) fn apply(&self, word: u64, basis: LabelBasis, mut emit: impl FnMut(u64)) {
        let mut base = 0u64;
        for &(s, t) in &self.copies {
            base |= (word >> s & 1) << t;
        }
        let get = |p: u8| word >> p & 1;
        match (&self.local, basis) {
            (Local::Merge { a: Some(a), b: Some(b), out }, LabelBasis::Pm) => {
                let o = out.expect("merge of unmarked circles is unmarked");
                emit(base | (get(*a) ^ get(*b)) << o);
            }
            (Local::Merge { a: Some(a), b: Some(b), out }, LabelBasis::OneX) => {
                let (la, lb) = (get(*a), get(*b));
                if la & lb == 0 {
                    emit(base | (la | lb) << out.expect("merge of unmarked circles is unmarked"));
                }
            }
            (Local::Merge { a, b, .. }, basis) => {
                let other = a.or(*b).map_or(0, get);
                if basis == LabelBasis::Pm || other == 0 {
                    emit(base);
                }
            }
            (Local::Split { src: Some(p), t1, t2 }, LabelBasis::Pm) => {
                let (t1, t2) = (t1.expect("unmarked"), t2.expect("unmarked"));
                let lp = get(*p);
                for a in 0..2u64 {
                    emit(base | a << t1 | (a ^ lp ^ 1) << t2);
                }
            }
            (Local::Split { src: Some(p), t1, t2 }, LabelBasis::OneX) => {
                let (t1, t2) = (t1.expect("unmarked"), t2.expect("unmarked"));
                if get(*p) == 0 {
                    emit(base | 1 << t2);
                    emit(base | 1 << t1);
                } else {
                    emit(base | 1 << t1 | 1 << t2);
                }
            }
            (Local::Split { src: None, t1, t2 }, basis) => {
                let q = t1.or(*t2).expect("one half stays unmarked");
                if basis == LabelBasis::Pm {
                    emit(base);
                }
                emit(base | 1 << q);
            }
        }
    }
}

/// Cube of resolutions with per-resolution circle data and generator offsets.
#[derive(Clone, Debug)]
pub struct Cube {
    n: usize,
    e: usize,
    reduced: bool,
    basis: LabelBasis,
    marked: Option<usize>,
    crossings: Vec<[usize; 4]>,
    n_circles: Vec<u8>,
    edge_circle: Vec<u8>,
    levels: Vec<Vec<u64>>,
    offset: Vec<usize>,
    dims: Vec<usize>,
}

impl Cube {
    pub fn new(d: &PlanarDiagram, reduced: bool, basis: LabelBasis) -> Result<Self> {
        if reduced && !d.is_pointed() {
            return Err(Error::Precondition("reduced complex needs a pointed diagram".into()));
        }
        let n = d.n_crossings();
        if n > MAX_CUBE_CROSSINGS {
            return Err(Error::Capacity(format!("{n} crossings exceed the cube limit {MAX_CUBE_CROSSINGS}")));
        }
        let e = d.n_edges();
        let count = 1usize << n;
        let mut edge_circle = vec![0u8; count * e];
        let mut n_circles = vec![0u8; count];
        edge_circle.par_chunks_mut(e.max(1)).zip(n_circles.par_iter_mut()).enumerate().for_each(|(mask, (row, k))| {
            if e > 0 {
                *k = d.circle_map(mask as u64, row) as u8;
            }
        });
        let mut levels = vec![Vec::new(); n + 1];
        for mask in 0..count as u64 {
            levels[mask.count_ones() as usize].push(mask);
        }
        for lv in &mut levels {
            lv.sort_by_key(|&m| resolution_key(m, n));
        }
        let r = usize::from(reduced);
        let mut offset = vec![0usize; count];
        let mut dims = Vec::with_capacity(n + 1);
        for lv in &levels {
            let mut total = 0usize;
            for &m in lv {
                offset[m as usize] = total;
                total += 1usize << (n_circles[m as usize] as usize - r);
            }
            dims.push(total);
        }
        Ok(Self {
            n,
            e,
            reduced,
            basis,
            marked: d.marked_edge(),
            crossings: d.crossings().to_vec(),
            n_circles,
            edge_circle,
            levels,
            offset,
            dims,
        })
    }

    #[must_use]
    pub fn n_crossings(&self) -> usize {
        self.n
    }

    #[must_use]
    pub fn reduced(&self) -> bool {
        self.reduced
    }

    #[must_use]
    pub fn basis(&self) -> LabelBasis {
        self.basis
    }

    #[must_use]
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    #[must_use]
    pub fn dim(&self, i: i32) -> usize {
        if i < 0 {
            return 0;
        }
        self.dims.get(i as usize).copied().unwrap_or(0)
    }

    /// Resolutions of degree `i` in generator order.
    #[must_use]
    pub fn resolutions(&self, i: usize) -> &[u64] {
        &self.levels[i]
    }

    fn circles_of(&self, mask: u64) -> &[u8] {
        let m = mask as usize;
        &self.edge_circle[m * self.e..(m + 1) * self.e]
    }

    /// Circle count of a resolution.
    #[must_use]
    pub fn circle_count(&self, mask: u64) -> usize {
        self.n_circles[mask as usize] as usize
    }

    /// Number of label slots (circles minus the marked one when reduced).
    #[must_use]
    pub fn n_labels(&self, mask: u64) -> usize {
        self.circle_count(mask) - usize::from(self.reduced)
    }

    /// Circle through edge `edge` at resolution `mask`.
    #[must_use]
    pub fn circle_of_edge(&self, mask: u64, edge: usize) -> usize {
        self.circles_of(mask)[edge] as usize
    }

    /// Label slot of circle `ci`, `None` for the marked circle.
    #[must_use]
    pub fn slot_of_circle(&self, mask: u64, ci: usize) -> Option<usize> {
        if !self.reduced {
            return Some(ci);
        }
        let dotted = self.circle_of_edge(mask, self.marked.expect("reduced cube is pointed"));
        match ci.cmp(&dotted) {
            std::cmp::Ordering::Equal => None,
            std::cmp::Ordering::Less => Some(ci),
            std::cmp::Ordering::Greater => Some(ci - 1),
        }
    }

    /// Word bit position of circle `ci`.
    fn position(&self, mask: u64, ci: usize) -> Slot {
        let m = self.n_labels(mask);
        self.slot_of_circle(mask, ci).map(|s| (m - 1 - s) as u8)
    }

    /// Index of a state within its degree.
    #[must_use]
    pub fn index_of(&self, s: &EnhancedState) -> Option<usize> {
        if s.bits >> self.n != 0 || s.n_labels as usize != self.n_labels(s.bits) || s.labels >> s.n_labels != 0 {
            return None;
        }
        Some(self.offset[s.bits as usize] + s.labels as usize)
    }

    /// State at `index` in degree `i`.
    #[must_use]
    pub fn state(&self, i: usize, index: usize) -> EnhancedState {
        let lv = &self.levels[i];
        let k = lv.partition_point(|&m| self.offset[m as usize] <= index) - 1;
        let mask = lv[k];
        EnhancedState {
            bits: mask,
            labels: (index - self.offset[mask as usize]) as u64,
            n_labels: self.n_labels(mask) as u8,
        }
    }

    /// All states of degree `i` in order.
    pub fn states(&self, i: usize) -> impl Iterator<Item = EnhancedState> + '_ {
        self.levels[i].iter().flat_map(move |&mask| {
            let m = self.n_labels(mask);
            (0..1u64 << m).map(move |w| EnhancedState { bits: mask, labels: w, n_labels: m as u8 })
        })
    }

    pub(crate) fn transition(&self, mask: u64, c: usize) -> Transition {
        debug_assert_eq!(mask >> c & 1, 0);
        let target = mask | 1 << c;
        let src = self.circles_of(mask);
        let tgt = self.circles_of(target);
        let t = self.crossings[c];
        let (a, b) = (src[t[0]] as usize, src[t[2]] as usize);
        let local = if a != b {
            Local::Merge {
                a: self.position(mask, a),
                b: self.position(mask, b),
                out: self.position(target, tgt[t[0]] as usize),
            }
        } else {
            Local::Split {
                src: self.position(mask, a),
                t1: self.position(target, tgt[t[0]] as usize),
                t2: self.position(target, tgt[t[1]] as usize),
            }
        };
        let k = self.circle_count(mask);
        let mut seen = vec![false; k];
        seen[a] = true;
        seen[b] = true;
        let mut copies = Vec::with_capacity(k);
        for edge in 0..self.e {
            let ci = src[edge] as usize;
            if seen[ci] {
                continue;
            }
            seen[ci] = true;
            if let (Some(s), Some(p)) = (self.position(mask, ci), self.position(target, tgt[edge] as usize)) {
                copies.push((s, p));
            }
        }
        Transition { target, copies, local }
    }

    /// Calls `emit(target_index)` for every term of `∂(state)` (degree `i`
    /// to `i+1`). Repeated targets are not possible.
    pub fn for_each_image(&self, mask: u64, word: u64, mut emit: impl FnMut(usize)) {
        for c in (0..self.n).filter(|&c| mask >> c & 1 == 0) {
            let tr = self.transition(mask, c);
            let off = self.offset[tr.target as usize];
            tr.apply(word, self.basis, |w| emit(off + w as usize));
        }
    }

    /// `∂` applied to a vector of degree `i` given by its support.
    #[must_use]
    pub fn apply(&self, i: usize, support: &[usize]) -> Vec<usize> {
        let mut by_mask: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
        for &x in support {
            let s = self.state(i, x);
            by_mask.entry(s.bits).or_default().push(s.labels);
        }
        let mut hits: Vec<usize> = by_mask
            .par_iter()
            .flat_map_iter(|(&mask, words)| {
                let mut out = Vec::new();
                for c in (0..self.n).filter(|&c| mask >> c & 1 == 0) {
                    let tr = self.transition(mask, c);
                    let off = self.offset[tr.target as usize];
                    for &w in words {
                        tr.apply(w, self.basis, |t| out.push(off + t as usize));
                    }
                }
                out
            })
            .collect();
        odd_multiplicity(&mut hits)
    }

    /// `∂ᵗ` applied to a vector of degree `i+1`: the states `y` of degree `i`
    /// with `|∂y ∩ support|` odd.
    #[must_use]
    pub fn apply_transpose(&self, i: usize, support: &[usize]) -> Vec<usize> {
        let set: std::collections::HashSet<usize> = support.iter().copied().collect();
        let mut sources: Vec<u64> = support
            .iter()
            .flat_map(|&x| {
                let mask = self.state(i + 1, x).bits;
                (0..self.n).filter(move |&c| mask >> c & 1 == 1).map(move |c| mask & !(1 << c))
            })
            .collect();
        sources.sort_unstable();
        sources.dedup();
        let mut out: Vec<usize> = sources
            .par_iter()
            .flat_map_iter(|&mask| {
                let m = self.n_labels(mask);
                let off = self.offset[mask as usize];
                let trs: Vec<Transition> =
                    (0..self.n).filter(|&c| mask >> c & 1 == 0).map(|c| self.transition(mask, c)).collect();
                let mut res = Vec::new();
                for w in 0..1u64 << m {
                    let mut parity = false;
                    for tr in &trs {
                        let toff = self.offset[tr.target as usize];
                        tr.apply(w, self.basis, |t| parity ^= set.contains(&(toff + t as usize)));
                    }
                    if parity {
                        res.push(off + w as usize);
                    }
                }
                res
            })
            .collect();
        out.sort_unstable();
        out
    }

    /// Dense `∂` out of degree `i`.
    pub fn differential(&self, i: usize) -> Result<BitMatrix> {
        let (src, dst) = (self.dim(i as i32), self.dim(i as i32 + 1));
        if src > MAX_GENERATORS || dst > MAX_GENERATORS {
            return Err(Error::Capacity(format!("degree {i} has {src} generators, limit {MAX_GENERATORS}")));
        }
        BitMatrix::try_zeros(dst, src, MAX_MATRIX_BITS)?;
        let columns: Vec<Vec<usize>> = self.levels[i]
            .par_iter()
            .flat_map_iter(|&mask| {
                let m = self.n_labels(mask);
                let trs: Vec<Transition> =
                    (0..self.n).filter(|&c| mask >> c & 1 == 0).map(|c| self.transition(mask, c)).collect();
                (0..1u64 << m).map(move |w| {
                    let mut col = Vec::new();
                    for tr in &trs {
                        let off = self.offset[tr.target as usize];
                        tr.apply(w, self.basis, |t| col.push(off + t as usize));
                    }
                    col
                })
            })
            .collect();
        Ok(BitMatrix::from_row_supports(dst, &columns).transpose())
    }

    /// Row and column weight histograms of `∂` out of degree `i`, without
    /// building the matrix.
    #[must_use]
    pub fn weight_histograms(&self, i: usize) -> (BTreeMap<usize, usize>, BTreeMap<usize, usize>) {
        let merge = |mut a: BTreeMap<usize, usize>, b: BTreeMap<usize, usize>| {
            for (k, v) in b {
                *a.entry(k).or_default() += v;
            }
            a
        };
        let cols = self.levels[i]
            .par_iter()
            .map(|&mask| {
                let m = self.n_labels(mask);
                let trs: Vec<Transition> =
                    (0..self.n).filter(|&c| mask >> c & 1 == 0).map(|c| self.transition(mask, c)).collect();
                let mut h = BTreeMap::new();
                for w in 0..1u64 << m {
                    let mut k = 0;
                    for tr in &trs {
                        tr.apply(w, self.basis, |_| k += 1);
                    }
                    *h.entry(k).or_default() += 1;
                }
                h
            })
            .reduce(BTreeMap::new, merge);
        let rows = if i < self.n {
            self.levels[i + 1]
                .par_iter()
                .map(|&target| {
                    let mt = self.n_labels(target);
                    let mut count = vec![0u32; 1 << mt];
                    for c in (0..self.n).filter(|&c| target >> c & 1 == 1) {
                        let source = target & !(1 << c);
                        let tr = self.transition(source, c);
                        for w in 0..1u64 << self.n_labels(source) {
                            tr.apply(w, self.basis, |t| count[t as usize] += 1);
                        }
                    }
                    let mut h = BTreeMap::new();
                    for k in count {
                        *h.entry(k as usize).or_default() += 1;
                    }
                    h
                })
                .reduce(BTreeMap::new, merge)
        } else {
            BTreeMap::new()
        };
        (rows, cols)
    }

    /// Dense complex with named bases.
    pub fn complex(&self) -> Result<ChainComplex> {
        let diffs: Vec<BitMatrix> = (0..self.n).map(|i| self.differential(i)).collect::<Result<_>>()?;
        let basis = (0..=self.n).map(|i| self.states(i).map(Generator::State).collect()).collect();
        ChainComplex::new(0, self.dims.clone(), diffs)?.with_basis(basis)
    }

    /// `rank ∂^i`, computed blockwise along the quantum grading, which the
    /// `1`/`X` differential preserves. Rank does not depend on the basis.
    pub fn rank(&self, i: usize) -> Result<usize> {
        if i >= self.n {
            return Ok(0);
        }
        let onex =
            if self.basis == LabelBasis::OneX { None } else { Some(Self { basis: LabelBasis::OneX, ..self.clone() }) };
        let cube = onex.as_ref().unwrap_or(self);
        let q = |mask: u64, w: u64| -> i64 { cube.n_labels(mask) as i64 - 2 * i64::from(w.count_ones()) };
        // local index of every target generator inside its grading block
        let mut local = vec![0u32; cube.dim(i as i32 + 1)];
        let mut sizes: HashMap<i64, usize> = HashMap::new();
        for &mask in &cube.levels[i + 1] {
            let off = cube.offset[mask as usize];
            for w in 0..1u64 << cube.n_labels(mask) {
                let k = sizes.entry(q(mask, w) + 1).or_default();
                local[off + w as usize] = *k as u32;
                *k += 1;
            }
        }
        // gather source rows per block
        let mut blocks: BTreeMap<i64, Vec<Vec<usize>>> = BTreeMap::new();
        for &mask in &cube.levels[i] {
            let trs: Vec<Transition> =
                (0..cube.n).filter(|&c| mask >> c & 1 == 0).map(|c| cube.transition(mask, c)).collect();
            for w in 0..1u64 << cube.n_labels(mask) {
                let mut row = Vec::new();
                for tr in &trs {
                    let off = cube.offset[tr.target as usize];
                    tr.apply(w, LabelBasis::OneX, |t| row.push(local[off + t as usize] as usize));
                }
                if !row.is_empty() {
                    blocks.entry(q(mask, w)).or_default().push(row);
                }
            }
        }
        let ranks: Vec<usize> = blocks
            .into_par_iter()
            .map(|(g, rows)| {
                let cols = sizes.get(&g).copied().unwrap_or(0);
                BitMatrix::from_row_supports(cols, &rows).rank()
            })
            .collect();
        Ok(ranks.into_iter().sum())
    }

    /// Per-degree dimensions, ranks and homology.
    pub fn homology(&self) -> Result<HomologySummary> {
        let ranks: Vec<usize> = (0..=self.n).map(|i| self.rank(i)).collect::<Result<_>>()?;
        HomologySummary::from_ranks(0, self.dims.clone(), ranks)
    }
}

/// Keeps entries occurring an odd number of times, sorted.
fn odd_multiplicity(v: &mut [usize]) -> Vec<usize> {
    v.sort_unstable();
    let mut out = Vec::new();
    let mut k = 0;
    while k < v.len() {
        let mut j = k;
        while j < v.len() && v[j] == v[k] {
            j += 1;
        }
        if (j - k) % 2 == 1 {
            out.push(v[k]);
        }
        k = j;
    }
    out
}

/// Khovanov complex of `d`, with enhanced states as bases.
pub fn build_complex(d: &PlanarDiagram, reduced: bool, basis: LabelBasis) -> Result<ChainComplex> {
    Cube::new(d, reduced, basis)?.complex()
}

/// `dim C^i` for every degree, counted without storing the cube.
pub fn chain_dims(d: &PlanarDiagram, reduced: bool) -> Result<Vec<usize>> {
    if reduced && !d.is_pointed() {
        return Err(Error::Precondition("reduced complex needs a pointed diagram".into()));
    }
    let n = d.n_crossings();
    if n > crate::diagram::MAX_CROSSINGS {
        return Err(Error::Capacity(format!("{n} crossings")));
    }
    let r = usize::from(reduced);
    let e = d.n_edges();
    Ok((0..1u64 << n)
        .into_par_iter()
        .fold(
            || (vec![0usize; n + 1], vec![0u8; e]),
            |(mut acc, mut buf), mask| {
                let k = d.circle_map(mask, &mut buf);
                acc[mask.count_ones() as usize] += 1 << (k - r);
                (acc, buf)
            },
        )
        .map(|(acc, _)| acc)
        .reduce(|| vec![0; n + 1], |a, b| a.iter().zip(&b).map(|(x, y)| x + y).collect()))
}

/// Homology of the Khovanov complex of `d`.
pub fn homology(d: &PlanarDiagram, reduced: bool) -> Result<HomologySummary> {
    Cube::new(d, reduced, LabelBasis::OneX)?.homology()
}

/// Conjugates every differential by the per-resolution matrix `P[t][s] =
/// [t ⊆ s]` on label words, which converts between the `1`/`X` and `±`
/// bases (it is its own inverse).
pub fn change_basis(c: &ChainComplex) -> Result<ChainComplex> {
    let mut p = Vec::new();
    for i in c.degrees() {
        let basis = c.basis(i).ok_or_else(|| Error::Precondition("complex has no named basis".into()))?;
        let mut m = BitMatrix::zeros(basis.len(), basis.len());
        for (idx, g) in basis.iter().enumerate() {
            let Generator::State(s) = g else {
                return Err(Error::Precondition("basis is not made of enhanced states".into()));
            };
            let base = idx - s.labels as usize;
            // all t ⊆ s
            let mut t = s.labels;
            loop {
                m.set(base + t as usize, idx, true);
                if t == 0 {
                    break;
                }
                t = (t - 1) & s.labels;
            }
        }
        p.push(m);
    }
    let mut diffs = Vec::new();
    for (k, d) in c.differentials().iter().enumerate() {
        diffs.push(p[k + 1].mul(d)?.mul(&p[k])?);
    }
    let basis = c.degrees().map(|i| c.basis(i).expect("checked").to_vec()).collect();
    ChainComplex::new(c.min_degree(), c.dims().to_vec(), diffs)?.with_basis(basis)
}

/// `dim Kh^i(D) = 2 dim Kh^i(D_•)` in every degree.
pub fn unreduced_splitting_check(d: &PlanarDiagram) -> Result<bool> {
    if !d.is_pointed() {
        return Err(Error::Precondition("splitting check needs a pointed diagram".into()));
    }
    let full = homology(d, false)?;
    let red = homology(d, true)?;
    Ok(full.homology.iter().zip(&red.homology).all(|(a, b)| *a == 2 * b))
}

/// Checks that `σ ↦ -σ, φ ↦ 1-φ` carries `∂^i(D)` to the transpose of
/// `∂^{n-i-1}(D!)` in the `±` basis, for every `i`.
pub fn mirror_duality_check(d: &PlanarDiagram, reduced: bool) -> Result<bool> {
    let a = Cube::new(d, reduced, LabelBasis::Pm)?;
    let b = Cube::new(&d.mirror(), reduced, LabelBasis::Pm)?;
    let n = a.n;
    let full = if n == 0 { 0 } else { u64::MAX >> (64 - n) };
    let beta = |i: usize| -> Vec<usize> {
        a.states(i)
            .map(|s| {
                let flipped = EnhancedState {
                    bits: !s.bits & full,
                    labels: !s.labels & ((1u64 << s.n_labels) - 1),
                    n_labels: s.n_labels,
                };
                b.index_of(&flipped).expect("mirror state exists")
            })
            .collect()
    };
    for i in 0..n {
        let da = a.differential(i)?;
        let db = b.differential(n - i - 1)?;
        let mapped = da.permute_rows(&beta(i + 1)).permute_columns(&beta(i));
        if mapped != db.transpose() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Checks `C(D) ≅ Cone(∂_c : C(D₀) → C(D₁))` for crossing `c`, where `D_b`
/// resolves `c` by `b` and the complexes of `D_b` are built independently.
/// The map `∂_c` is read off `C(D)`; the identification of states goes
/// through the edge correspondence of the resolved diagrams.
pub fn cone_decomposition_check(d: &PlanarDiagram, c: usize, reduced: bool, basis: LabelBasis) -> Result<bool> {
    let full = Cube::new(d, reduced, basis)?;
    let cd = full.complex()?;
    let parts: Vec<(Cube, Vec<usize>)> = (0..2u8)
        .map(|b| {
            let (db, map) = d.resolve_crossing(c, b)?;
            Ok((Cube::new(&db, reduced, basis)?, map))
        })
        .collect::<Result<_>>()?;
    let c0 = parts[0].0.complex()?;
    let c1 = parts[1].0.complex()?;
    let n = full.n;
    // where each state of D goes: (part, index in that part's degree)
    let locate = |s: &EnhancedState| -> (usize, usize) {
        let b = (s.bits >> c & 1) as usize;
        let (cube, map) = &parts[b];
        let low = s.bits & ((1 << c) - 1);
        let high = (s.bits >> (c + 1)) << c;
        let mask = low | high;
        let m = cube.n_labels(mask);
        let mut word = 0u64;
        for ci in 0..full.circle_count(s.bits) {
            let Some(slot) = full.slot_of_circle(s.bits, ci) else { continue };
            if !s.label(slot) {
                continue;
            }
            let edge = (0..full.e).find(|&x| full.circle_of_edge(s.bits, x) == ci).expect("circle has an edge");
            let cj = cube.circle_of_edge(mask, map[edge]);
            let tslot = cube.slot_of_circle(mask, cj).expect("unmarked circle stays unmarked");
            word |= 1 << (m - 1 - tslot);
        }
        let t = EnhancedState { bits: mask, labels: word, n_labels: m as u8 };
        (b, cube.index_of(&t).expect("resolved state exists"))
    };
    // cone degree i: C0^i then C1^{i-1}
    let perm = |i: usize| -> Vec<usize> {
        full.states(i)
            .map(|s| {
                let (b, j) = locate(&s);
                if b == 0 {
                    j
                } else {
                    c0.dim(i as i32) + j
                }
            })
            .collect()
    };
    let perms: Vec<Vec<usize>> = (0..=n).map(perm).collect();
    // f^i : C0^i → C1^i is the block of ∂^i(D) from b = 0 columns to b = 1 rows
    let mut f = Vec::new();
    for i in 0..n {
        let p =
            cd.differential(i as i32).expect("degree in range").permute_rows(&perms[i + 1]).permute_columns(&perms[i]);
        let (a0, a1) = (c0.dim(i as i32), c0.dim(i as i32 + 1));
        let mut fi = BitMatrix::zeros(c1.dim(i as i32), a0);
        for r in 0..c1.dim(i as i32) {
            for col in 0..a0 {
                if p.get(a1 + r, col) {
                    fi.set(r, col, true);
                }
            }
        }
        f.push(fi);
    }
    let k = cone(&c0, &c1, &f)?;
    if k.min_degree() != 0 || k.dims() != cd.dims() {
        return Ok(false);
    }
    for i in 0..n {
        let p =
            cd.differential(i as i32).expect("degree in range").permute_rows(&perms[i + 1]).permute_columns(&perms[i]);
        if Some(&p) != k.differential(i as i32) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Serialize)]
struct ComplexHeader<'a> {
    min_degree: i32,
    max_degree: i32,
    dims: &'a [usize],
    reduced: bool,
    basis: LabelBasis,
    generators: Vec<Vec<EnhancedState>>,
    differentials: Vec<String>,
}

/// Writes `<stem>.json` (degrees, dimensions, generator list) and one
/// MatrixMarket file `<stem>.d<i>.mtx` per differential.
pub fn export_complex(
    c: &ChainComplex,
    reduced: bool,
    basis: LabelBasis,
    dir: &Path,
    stem: &str,
) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    let mut names = Vec::new();
    for (k, d) in c.differentials().iter().enumerate() {
        let name = format!("{stem}.d{}.mtx", c.min_degree() + k as i32);
        let path = dir.join(&name);
        std::fs::write(&path, write_matrix_market(d))?;
        written.push(path);
        names.push(name);
    }
    let generators = c
        .degrees()
        .map(|i| {
            c.basis(i)
                .unwrap_or(&[])
                .iter()
                .filter_map(|g| if let Generator::State(s) = g { Some(*s) } else { None })
                .collect()
        })
        .collect();
    let header = ComplexHeader {
        min_degree: c.min_degree(),
        max_degree: c.max_degree(),
        dims: c.dims(),
        reduced,
        basis,
        generators,
        differentials: names,
    };
    let path = dir.join(format!("{stem}.json"));
    std::fs::write(&path, serde_json::to_string_pretty(&header)?)?;
    written.insert(0, path);
    Ok(written)
}

/// A sparse vector as a support set, convenient for witnesses.
#[must_use]
pub fn support_vector(len: usize, support: &[usize]) -> BitVec {
    BitVec::from_indices(len, support.iter().copied())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{clasp, gen_torus, gen_unknot, gen_unlink, PlanarDiagram};
    use crate::homalg::homology_dims;

    #[test]
    fn clasp_pm_differential() {
        let c = build_complex(&clasp(), true, LabelBasis::Pm).unwrap();
        assert_eq!(c.dims(), &[1, 4, 1]);
        assert_eq!(c.differential(0).unwrap().column(0).count_ones(), 4);
        assert_eq!(c.differential(1).unwrap().row(0).count_ones(), 4);
        assert_eq!(homology_dims(&c).unwrap().homology, vec![0, 2, 0]);
    }

    #[test]
    fn family_dims() {
        assert_eq!(chain_dims(&gen_torus(3).unwrap(), true).unwrap(), vec![2, 3, 6, 4]);
        assert_eq!(chain_dims(&gen_torus(1).unwrap(), true).unwrap(), vec![2, 1]);
        assert_eq!(chain_dims(&gen_unknot(1).unwrap(), true).unwrap(), vec![2, 5, 2]);
        assert_eq!(chain_dims(&gen_unknot(2).unwrap(), true).unwrap()[2], 33);
        assert_eq!(chain_dims(&gen_unlink(2).unwrap(), true).unwrap()[2], 18);
        let cube = Cube::new(&gen_torus(3).unwrap(), true, LabelBasis::Pm).unwrap();
        assert_eq!(cube.dims(), &[2, 3, 6, 4]);
    }

    #[test]
    fn trefoil_homology() {
        let d = gen_torus(3).unwrap();
        assert_eq!(homology(&d, true).unwrap().homology, vec![1, 0, 1, 1]);
        let dense = build_complex(&d, true, LabelBasis::Pm).unwrap();
        assert_eq!(homology_dims(&dense).unwrap().homology, vec![1, 0, 1, 1]);
    }

    #[test]
    fn pm_truth_tables() {
        // merge of two unmarked circles and split of one, unreduced single crossings
        let merge =
            Transition { target: 1, copies: vec![], local: Local::Merge { a: Some(1), b: Some(0), out: Some(0) } };
        let mut got = Vec::new();
        for w in 0..4 {
            let mut o = Vec::new();
            merge.apply(w, LabelBasis::Pm, |t| o.push(t));
            got.push(o);
        }
        // (−,−)→−, (−,+)→+, (+,−)→+, (+,+)→−
        assert_eq!(got, vec![vec![0], vec![1], vec![1], vec![0]]);
        let split =
            Transition { target: 1, copies: vec![], local: Local::Split { src: Some(0), t1: Some(1), t2: Some(0) } };
        let mut minus = Vec::new();
        split.apply(0, LabelBasis::Pm, |t| minus.push(t));
        minus.sort_unstable();
        // −⊗+ and +⊗−
        assert_eq!(minus, vec![0b01, 0b10]);
        let mut plus = Vec::new();
        split.apply(1, LabelBasis::Pm, |t| plus.push(t));
        plus.sort_unstable();
        assert_eq!(plus, vec![0b00, 0b11]);
    }

    #[test]
    fn change_of_basis_matches_direct_build() {
        for d in [clasp(), gen_torus(3).unwrap(), gen_unknot(1).unwrap()] {
            for reduced in [true, false] {
                let onex = build_complex(&d, reduced, LabelBasis::OneX).unwrap();
                let pm = build_complex(&d, reduced, LabelBasis::Pm).unwrap();
                assert_eq!(change_basis(&onex).unwrap(), pm);
                assert_eq!(change_basis(&pm).unwrap(), onex);
            }
        }
    }

    #[test]
    fn single_circle_complexes() {
        let u = PlanarDiagram::circles(1, true);
        let c = build_complex(&u, true, LabelBasis::Pm).unwrap();
        assert_eq!(c.dims(), &[1]);
        assert!(unreduced_splitting_check(&u).unwrap());
        let full = build_complex(&u, false, LabelBasis::OneX).unwrap();
        assert_eq!(full.dims(), &[2]);
        assert!(matches!(
            build_complex(&u.with_marked_edge(None).unwrap(), true, LabelBasis::Pm),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn splitting_and_duality() {
        for d in [clasp(), gen_torus(3).unwrap(), gen_unknot(1).unwrap()] {
            assert!(unreduced_splitting_check(&d).unwrap());
            assert!(mirror_duality_check(&d, true).unwrap());
            assert!(mirror_duality_check(&d, false).unwrap());
        }
    }

    #[test]
    fn cone_decomposition_on_trefoil() {
        let d = gen_torus(3).unwrap();
        for c in 0..3 {
            assert!(cone_decomposition_check(&d, c, true, LabelBasis::Pm).unwrap());
        }
        assert!(cone_decomposition_check(&clasp(), 1, false, LabelBasis::OneX).unwrap());
    }

    #[test]
    fn sparse_apply_matches_dense() {
        let d = gen_torus(4).unwrap();
        let cube = Cube::new(&d, true, LabelBasis::Pm).unwrap();
        let dense = cube.differential(2).unwrap();
        let v = [0usize, 3, 5, 7];
        let got = cube.apply(2, &v);
        let want = dense.mul_vec(&support_vector(cube.dim(2), &v)).unwrap();
        assert_eq!(got, want.ones().collect::<Vec<_>>());
        let w = [1usize, 2, 9];
        let got = cube.apply_transpose(2, &w);
        let want = dense.transpose().mul_vec(&support_vector(cube.dim(3), &w)).unwrap();
        assert_eq!(got, want.ones().collect::<Vec<_>>());
        for i in 0..cube.dims().len() {
            for (k, s) in cube.states(i).enumerate() {
                assert_eq!(cube.index_of(&s), Some(k));
                assert_eq!(cube.state(i, k), s);
            }
        }
    }

    #[test]
    fn streaming_weights_match_dense() {
        let cube = Cube::new(&gen_unknot(2).unwrap(), true, LabelBasis::Pm).unwrap();
        for i in 0..4 {
            let m = cube.differential(i).unwrap();
            let (rows, cols) = cube.weight_histograms(i);
            let mut r = BTreeMap::new();
            for w in m.row_weights() {
                *r.entry(w).or_insert(0) += 1;
            }
            let mut c = BTreeMap::new();
            for w in m.col_weights() {
                *c.entry(w).or_insert(0) += 1;
            }
            assert_eq!(rows, r);
            assert_eq!(cols, c);
        }
    }
}
