//! Link diagrams as crossing tuples, their resolutions, and the three
//! families (kinked unknots, iterated clasps, 2-strand torus closures).
//!
//! A crossing is `[e1, e2, e3, e4]`, edges listed counterclockwise with `e1`
//! on the under strand. The 0-smoothing joins `e1–e2` and `e3–e4`, the
//! 1-smoothing joins `e1–e4` and `e2–e3`. Edge ids are dense: crossing edges
//! take `0..2n`, free circles `2n..2n + free_circles`.

use std::collections::HashMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Largest crossing count handled by the cube machinery (resolutions are
/// `u64` masks and per-resolution tables are indexed by mask).
pub const MAX_CROSSINGS: usize = 24;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawDiagram", into = "RawDiagram")]
pub struct PlanarDiagram {
    crossings: Vec<[usize; 4]>,
    free_circles: usize,
    marked_edge: Option<usize>,
}

#[derive(Serialize, Deserialize)]
struct RawDiagram {
    crossings: Vec<[usize; 4]>,
    #[serde(default)]
    free_circles: usize,
    #[serde(default)]
    marked_edge: Option<usize>,
}

impl TryFrom<RawDiagram> for PlanarDiagram {
    type Error = Error;
    fn try_from(r: RawDiagram) -> Result<Self> {
        PlanarDiagram::new(r.crossings, r.free_circles, r.marked_edge)
    }
}

impl From<PlanarDiagram> for RawDiagram {
    fn from(d: PlanarDiagram) -> Self {
        RawDiagram { crossings: d.crossings, free_circles: d.free_circles, marked_edge: d.marked_edge }
    }
}

impl PlanarDiagram {
    /// Validates edge ids: each of `0..2n` must occupy exactly two slots.
    pub fn new(crossings: Vec<[usize; 4]>, free_circles: usize, marked_edge: Option<usize>) -> Result<Self> {
        let e = 2 * crossings.len();
        let mut seen = vec![0u8; e];
        for (c, t) in crossings.iter().enumerate() {
            for &x in t {
                if x >= e {
                    return Err(Error::Structural(format!("crossing {c} uses edge {x}; ids must lie in 0..{e}")));
                }
                seen[x] += 1;
            }
        }
        if let Some(x) = seen.iter().position(|&k| k != 2) {
            return Err(Error::Structural(format!("edge {x} occupies {} slots, expected 2", seen[x])));
        }
        if let Some(m) = marked_edge {
            if m >= e + free_circles {
                return Err(Error::Structural(format!("marked edge {m} does not exist")));
            }
        }
        Ok(Self { crossings, free_circles, marked_edge })
    }

    /// `k` disjoint circles without crossings.
    #[must_use]
    pub fn circles(k: usize, pointed: bool) -> Self {
        Self { crossings: Vec::new(), free_circles: k, marked_edge: (pointed && k > 0).then_some(0) }
    }

    #[must_use]
    pub fn crossings(&self) -> &[[usize; 4]] {
        &self.crossings
    }

    #[must_use]
    pub fn n_crossings(&self) -> usize {
        self.crossings.len()
    }

    #[must_use]
    pub fn free_circles(&self) -> usize {
        self.free_circles
    }

    #[must_use]
    pub fn marked_edge(&self) -> Option<usize> {
        self.marked_edge
    }

    #[must_use]
    pub fn is_pointed(&self) -> bool {
        self.marked_edge.is_some()
    }

    #[must_use]
    pub fn n_edges(&self) -> usize {
        2 * self.crossings.len() + self.free_circles
    }

    /// Same diagram with the basepoint moved (or removed).
    pub fn with_marked_edge(&self, marked_edge: Option<usize>) -> Result<Self> {
        Self::new(self.crossings.clone(), self.free_circles, marked_edge)
    }

    /// Each tuple rotated to the smaller of `t` and `t` turned by two slots,
    /// which describe the same crossing.
    #[must_use]
    pub fn canonical(&self) -> Self {
        let crossings = self
            .crossings
            .iter()
            .map(|t| {
                let r = [t[2], t[3], t[0], t[1]];
                (*t).min(r)
            })
            .collect();
        Self { crossings, ..self.clone() }
    }

    /// Equal after [`PlanarDiagram::canonical`].
    #[must_use]
    pub fn same_as(&self, other: &Self) -> bool {
        self.canonical() == other.canonical()
    }

    /// Circle index of every edge under the resolution `mask` (bit `c` is the
    /// smoothing of crossing `c`), circles numbered by smallest edge. Returns
    /// the number of circles.
    pub(crate) fn circle_map(&self, mask: u64, out: &mut [u8]) -> usize {
        let e = self.n_edges();
        debug_assert!(out.len() >= e);
        let mut parent: Vec<u16> = (0..e as u16).collect();
        fn find(p: &mut [u16], mut x: u16) -> u16 {
            while p[x as usize] != x {
                p[x as usize] = p[p[x as usize] as usize];
                x = p[x as usize];
            }
            x
        }
        let union = |a: usize, b: usize, p: &mut Vec<u16>| {
            let (ra, rb) = (find(p, a as u16), find(p, b as u16));
            if ra != rb {
                let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
                p[hi as usize] = lo;
            }
        };
        for (c, t) in self.crossings.iter().enumerate() {
            if mask >> c & 1 == 0 {
                union(t[0], t[1], &mut parent);
                union(t[2], t[3], &mut parent);
            } else {
                union(t[0], t[3], &mut parent);
                union(t[1], t[2], &mut parent);
            }
        }
        let mut index = vec![u8::MAX; e];
        let mut count = 0usize;
        for x in 0..e {
            let r = find(&mut parent, x as u16) as usize;
            if index[r] == u8::MAX {
                index[r] = count as u8;
                count += 1;
            }
            out[x] = index[r];
        }
        count
    }

    /// Number of circles of the resolution `mask`.
    #[must_use]
    pub fn circle_count(&self, mask: u64) -> usize {
        let mut buf = vec![0u8; self.n_edges()];
        self.circle_map(mask, &mut buf)
    }

    /// Circles of the resolution given by `bits` (one 0/1 entry per crossing).
    pub fn trace_circles(&self, bits: &[u8]) -> Result<Resolution> {
        if bits.len() != self.n_crossings() {
            return Err(Error::Precondition(format!("{} bits for {} crossings", bits.len(), self.n_crossings())));
        }
        if bits.iter().any(|&b| b > 1) {
            return Err(Error::Precondition("resolution bits must be 0 or 1".into()));
        }
        if self.n_crossings() > 64 {
            return Err(Error::Capacity(format!("{} crossings exceed 64", self.n_crossings())));
        }
        let mask = bits.iter().enumerate().fold(0u64, |m, (c, &b)| m | u64::from(b) << c);
        let mut map = vec![0u8; self.n_edges()];
        let k = self.circle_map(mask, &mut map);
        let mut circles = vec![Vec::new(); k];
        for (e, &c) in map.iter().enumerate() {
            circles[c as usize].push(e);
        }
        let dotted_circle = self.marked_edge.map(|m| map[m] as usize);
        Ok(Resolution { bits: bits.to_vec(), circles, dotted_circle })
    }

    /// Number of link components (strands through crossings plus free circles).
    #[must_use]
    pub fn components(&self) -> usize {
        let e = 2 * self.n_crossings();
        let mut parent: Vec<usize> = (0..e).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut count = e;
        for t in &self.crossings {
            for (a, b) in [(t[0], t[2]), (t[1], t[3])] {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                if ra != rb {
                    parent[ra] = rb;
                    count -= 1;
                }
            }
        }
        count + self.free_circles
    }

    /// Mirror image: every crossing switched, `(e1,e2,e3,e4) ↦ (e2,e3,e4,e1)`.
    #[must_use]
    pub fn mirror(&self) -> Self {
        let crossings = self.crossings.iter().map(|t| [t[1], t[2], t[3], t[0]]).collect();
        Self { crossings, ..self.clone() }
    }

    /// Disjoint union; the basepoint of `self` is kept.
    #[must_use]
    pub fn disjoint_union(&self, other: &Self) -> Self {
        let shift = |e: usize, own_n: usize, own_off: usize, free_off: usize| {
            if e < 2 * own_n {
                e + own_off
            } else {
                e - 2 * own_n + free_off
            }
        };
        let (n1, n2) = (self.n_crossings(), other.n_crossings());
        let free1 = 2 * (n1 + n2);
        let mut crossings: Vec<[usize; 4]> = self.crossings.clone();
        crossings.extend(other.crossings.iter().map(|t| t.map(|e| e + 2 * n1)));
        let marked = self.marked_edge.map(|m| shift(m, n1, 0, free1));
        Self { crossings, free_circles: self.free_circles + other.free_circles, marked_edge: marked }
    }

    /// Connected sum at the basepoints; the result is pointed on the spliced
    /// edge.
    pub fn connected_sum(&self, other: &Self) -> Result<Self> {
        let (Some(m1), Some(m2)) = (self.marked_edge, other.marked_edge) else {
            return Err(Error::Precondition("connected sum needs two pointed diagrams".into()));
        };
        let (n1, n2) = (self.n_crossings(), other.n_crossings());
        if m2 >= 2 * n2 {
            // pointed free circle of `other` is absorbed into `self`
            let rest = other.without_free_circle(m2 - 2 * n2);
            return Ok(self.disjoint_union(&rest));
        }
        if m1 >= 2 * n1 {
            let rest = self.without_free_circle(m1 - 2 * n1);
            let mut out = other.disjoint_union(&rest);
            // keep the crossings of `self` first in the ordering
            out = out.rotate_blocks(n2);
            return Ok(out);
        }
        // tag edges: (side, id), the cut edge m2 splits into m1 and a new edge X
        const X: usize = usize::MAX;
        let mut tagged: Vec<[(u8, usize); 4]> = Vec::with_capacity(n1 + n2);
        let mut first_m1 = true;
        for t in &self.crossings {
            let mut out = [(0u8, 0usize); 4];
            for (k, &e) in t.iter().enumerate() {
                out[k] = if e == m1 {
                    if first_m1 {
                        first_m1 = false;
                        (0, m1)
                    } else {
                        (2, X)
                    }
                } else {
                    (0, e)
                };
            }
            tagged.push(out);
        }
        let mut first_m2 = true;
        for t in &other.crossings {
            let mut out = [(0u8, 0usize); 4];
            for (k, &e) in t.iter().enumerate() {
                out[k] = if e == m2 {
                    if first_m2 {
                        first_m2 = false;
                        (0, m1)
                    } else {
                        (2, X)
                    }
                } else {
                    (1, e)
                };
            }
            tagged.push(out);
        }
        let free: Vec<(u8, usize)> = (0..self.free_circles)
            .map(|k| (0, 2 * n1 + k))
            .chain((0..other.free_circles).map(|k| (1, 2 * n2 + k)))
            .collect();
        Ok(assemble(&tagged, &free, Some((0, m1)))?.0)
    }

    fn without_free_circle(&self, k: usize) -> Self {
        let n = self.n_crossings();
        let marked = self.marked_edge.and_then(|m| {
            if m < 2 * n {
                Some(m)
            } else if m - 2 * n == k {
                None
            } else if m - 2 * n > k {
                Some(m - 1)
            } else {
                Some(m)
            }
        });
        Self { crossings: self.crossings.clone(), free_circles: self.free_circles - 1, marked_edge: marked }
    }

    /// Moves the first `k` crossings to the end (edge ids follow).
    fn rotate_blocks(&self, k: usize) -> Self {
        let tagged: Vec<[(u8, usize); 4]> =
            self.crossings[k..].iter().chain(&self.crossings[..k]).map(|t| t.map(|e| (0, e))).collect();
        let n = self.n_crossings();
        let free: Vec<(u8, usize)> = (0..self.free_circles).map(|j| (0, 2 * n + j)).collect();
        assemble(&tagged, &free, self.marked_edge.map(|m| (0, m))).expect("relabelling a valid diagram").0
    }

    /// Replaces crossing `c` by its `bit`-smoothing. Returns the smaller
    /// diagram and the image of every old edge id.
    pub fn resolve_crossing(&self, c: usize, bit: u8) -> Result<(Self, Vec<usize>)> {
        if c >= self.n_crossings() {
            return Err(Error::OutOfRange(format!("crossing {c} of {}", self.n_crossings())));
        }
        let t = self.crossings[c];
        let e = self.n_edges();
        let mut parent: Vec<usize> = (0..e).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                x = p[x];
            }
            x
        }
        let joins = if bit == 0 { [(t[0], t[1]), (t[2], t[3])] } else { [(t[0], t[3]), (t[1], t[2])] };
        for (a, b) in joins {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
        let root: Vec<usize> = (0..e).map(|x| find(&mut parent, x)).collect();
        let tagged: Vec<[(u8, usize); 4]> =
            self.crossings.iter().enumerate().filter(|&(k, _)| k != c).map(|(_, t)| t.map(|x| (0, root[x]))).collect();
        // roots no longer touching any crossing become free circles
        let mut used = vec![false; e];
        for t in &tagged {
            for &(_, x) in t {
                used[x] = true;
            }
        }
        let mut free = Vec::new();
        for x in 0..e {
            if root[x] == x && !used[x] {
                free.push((0u8, x));
            }
        }
        let (d, map) = assemble(&tagged, &free, self.marked_edge.map(|m| (0, root[m])))?;
        let edge_map = (0..e).map(|x| map[&(0, root[x])]).collect();
        Ok((d, edge_map))
    }

    /// Adds a curl on `edge`. Positive curls split off a small circle in the
    /// 0-smoothing, negative ones in the 1-smoothing.
    pub fn add_kink(&self, edge: usize, kind: Kink) -> Result<Self> {
        let n = self.n_crossings();
        if edge >= self.n_edges() {
            return Err(Error::OutOfRange(format!("edge {edge} of {}", self.n_edges())));
        }
        // new ids: OUT and LOOP beyond every existing one
        let (out, lp) = (usize::MAX - 1, usize::MAX);
        let mut tagged: Vec<[(u8, usize); 4]> = Vec::with_capacity(n + 1);
        let mut first = true;
        for t in &self.crossings {
            tagged.push(t.map(|e| {
                if e == edge {
                    if first {
                        first = false;
                        (0, e)
                    } else {
                        (0, out)
                    }
                } else {
                    (0, e)
                }
            }));
        }
        let (inn, outt) = if edge >= 2 * n { ((0, edge), (0, edge)) } else { ((0, edge), (0, out)) };
        tagged.push(match kind {
            Kink::Positive => [inn, outt, (0, lp), (0, lp)],
            Kink::Negative => [outt, (0, lp), (0, lp), inn],
        });
        let free: Vec<(u8, usize)> = (2 * n..self.n_edges()).filter(|&x| x != edge).map(|x| (0, x)).collect();
        Ok(assemble(&tagged, &free, self.marked_edge.map(|m| (0, m)))?.0)
    }
}

/// Handedness of a curl, named by the smoothing that splits off its loop:
/// `Positive` loops split in the 0-smoothing (the complex doubles), `Negative`
/// ones in the 1-smoothing (the complex shifts up one degree).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kink {
    Positive,
    Negative,
}

/// Relabels arbitrary edge tags densely by first appearance (crossing
/// slots in order, then free circles).
fn assemble(
    crossings: &[[(u8, usize); 4]],
    free: &[(u8, usize)],
    marked: Option<(u8, usize)>,
) -> Result<(PlanarDiagram, HashMap<(u8, usize), usize>)> {
    let mut map: HashMap<(u8, usize), usize> = HashMap::new();
    let mut out = Vec::with_capacity(crossings.len());
    for t in crossings {
        let mut r = [0usize; 4];
        for (k, tag) in t.iter().enumerate() {
            let next = map.len();
            r[k] = *map.entry(*tag).or_insert(next);
        }
        out.push(r);
    }
    for tag in free {
        let next = map.len();
        if map.insert(*tag, next).is_some() {
            return Err(Error::Structural("free circle also used by a crossing".into()));
        }
    }
    let marked = match marked {
        Some(tag) => Some(*map.get(&tag).ok_or_else(|| Error::Structural("marked edge vanished".into()))?),
        None => None,
    };
    Ok((PlanarDiagram::new(out, free.len(), marked)?, map))
}

/// Circles of one resolution.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Resolution {
    pub bits: Vec<u8>,
    /// Edge ids of each circle, ascending; circles ordered by smallest edge.
    pub circles: Vec<Vec<usize>>,
    /// Circle through the marked edge.
    pub dotted_circle: Option<usize>,
}

impl Resolution {
    #[must_use]
    pub fn n_circles(&self) -> usize {
        self.circles.len()
    }

    #[must_use]
    pub fn degree(&self) -> usize {
        self.bits.iter().filter(|&&b| b == 1).count()
    }
}

/// Closure of a braid word on `strands` strands. Letter `±i` is `σ_i^{±1}`,
/// crossing positions `i-1` and `i`. The basepoint sits on the closing arc of
/// position 0. Positions no letter touches become free circles.
pub fn braid_closure(strands: usize, word: &[i32]) -> Result<PlanarDiagram> {
    if strands == 0 {
        return Err(Error::Precondition("a braid needs at least one strand".into()));
    }
    let mut cur: Vec<usize> = (0..strands).collect();
    let mut next = strands;
    let mut raw: Vec<[usize; 4]> = Vec::with_capacity(word.len());
    for &letter in word {
        let i = letter.unsigned_abs() as usize;
        if i == 0 || i >= strands {
            return Err(Error::OutOfRange(format!("generator {letter} on {strands} strands")));
        }
        let (bl, br) = (cur[i - 1], cur[i]);
        let (tl, tr) = (next, next + 1);
        next += 2;
        raw.push(if letter > 0 { [br, tr, tl, bl] } else { [bl, br, tr, tl] });
        cur[i - 1] = tl;
        cur[i] = tr;
    }
    // close up: the top edge at position j is the bottom edge j
    let mut close: HashMap<usize, usize> = HashMap::new();
    for (j, &c) in cur.iter().enumerate() {
        close.insert(c, j);
    }
    let tagged: Vec<[(u8, usize); 4]> =
        raw.iter().map(|t| t.map(|e| (0, close.get(&e).copied().unwrap_or(e)))).collect();
    let free: Vec<(u8, usize)> = (0..strands).filter(|&j| cur[j] == j).map(|j| (0, j)).collect();
    Ok(assemble(&tagged, &free, Some((0, 0)))?.0)
}

/// Closure of `σ_1^ℓ` on two strands: the pointed (2,ℓ) torus link.
pub fn gen_torus(l: usize) -> Result<PlanarDiagram> {
    if l == 0 {
        return Err(Error::Precondition("torus family starts at l = 1".into()));
    }
    braid_closure(2, &vec![1; l])
}

/// Round unknot carrying `neg` negative curls followed by `pos` positive ones.
#[must_use]
pub fn kinked_unknot(neg: usize, pos: usize) -> PlanarDiagram {
    let k = neg + pos;
    if k == 0 {
        return PlanarDiagram::circles(1, true);
    }
    let crossings = (0..k)
        .map(|j| {
            let (inn, out, lp) = (j, (j + 1) % k, k + j);
            if j < neg {
                [out, lp, lp, inn]
            } else {
                [inn, out, lp, lp]
            }
        })
        .collect();
    PlanarDiagram::new(crossings, 0, Some(0)).expect("curl layout is valid")
}

/// Pointed unknot with `l` negative then `l` positive curls.
pub fn gen_unknot(l: usize) -> Result<PlanarDiagram> {
    if l == 0 {
        return Err(Error::Precondition("unknot family starts at l = 1".into()));
    }
    Ok(kinked_unknot(l, l))
}

/// Two-crossing diagram of the 2-component unlink, pointed on the first strand.
#[must_use]
pub fn clasp() -> PlanarDiagram {
    PlanarDiagram::new(vec![[2, 0, 3, 1], [2, 1, 3, 0]], 0, Some(0)).expect("clasp is valid")
}

/// `l`-fold connected sum of clasps: the pointed `(l+1)`-component unlink.
pub fn gen_unlink(l: usize) -> Result<PlanarDiagram> {
    if l == 0 {
        return Err(Error::Precondition("unlink family starts at l = 1".into()));
    }
    let mut d = clasp();
    for _ in 1..l {
        d = d.connected_sum(&clasp())?;
    }
    Ok(d)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Unknot,
    Unlink,
    Torus,
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Family::Unknot => "unknot",
            Family::Unlink => "unlink",
            Family::Torus => "torus",
        })
    }
}

impl std::str::FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "unknot" => Ok(Family::Unknot),
            "unlink" => Ok(Family::Unlink),
            "torus" => Ok(Family::Torus),
            _ => Err(Error::Parse(format!("unknown family `{s}`"))),
        }
    }
}

pub fn gen_family(family: Family, l: usize) -> Result<PlanarDiagram> {
    match family {
        Family::Unknot => gen_unknot(l),
        Family::Unlink => gen_unlink(l),
        Family::Torus => gen_torus(l),
    }
}

/// Reidemeister move kinds, as used by the invariance checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RMove {
    R1Positive,
    R1Negative,
    R2,
    R3,
}

impl RMove {
    /// Degree shift `η` with `Kh^i(after) ≅ Kh^{i-η}(before)`.
    #[must_use]
    pub fn shift(self) -> i32 {
        match self {
            RMove::R1Negative | RMove::R2 => 1,
            RMove::R1Positive | RMove::R3 => 0,
        }
    }
}

/// Random pointed braid closure with at most `max_crossings` crossings on
/// up to `max_strands` strands.
pub fn random_diagram<R: Rng>(rng: &mut R, max_strands: usize, max_crossings: usize) -> PlanarDiagram {
    let strands = rng.gen_range(1..=max_strands.max(1));
    let len = if strands == 1 { 0 } else { rng.gen_range(0..=max_crossings) };
    let word = random_word(rng, strands, len);
    braid_closure(strands, &word).expect("letters are in range")
}

fn random_word<R: Rng>(rng: &mut R, strands: usize, len: usize) -> Vec<i32> {
    (0..len)
        .map(|_| {
            let i = rng.gen_range(1..strands as i32);
            if rng.gen_bool(0.5) {
                i
            } else {
                -i
            }
        })
        .collect()
}

/// A pair of pointed diagrams related by one move, with at most
/// `max_crossings` crossings after the move.
pub fn random_rmove_pair<R: Rng>(
    rng: &mut R,
    kind: RMove,
    max_crossings: usize,
) -> Result<(PlanarDiagram, PlanarDiagram)> {
    match kind {
        RMove::R1Positive | RMove::R1Negative => {
            let before = random_diagram(rng, 3, max_crossings.saturating_sub(1));
            let edge = rng.gen_range(0..before.n_edges());
            let k = if kind == RMove::R1Positive { Kink::Positive } else { Kink::Negative };
            let after = before.add_kink(edge, k)?;
            Ok((before, after))
        }
        RMove::R2 => {
            let strands = rng.gen_range(2..=3);
            let len = rng.gen_range(0..=max_crossings.saturating_sub(2));
            let word = random_word(rng, strands, len);
            let at = rng.gen_range(0..=word.len());
            let i = rng.gen_range(1..strands as i32);
            let s = if rng.gen_bool(0.5) { 1 } else { -1 };
            let mut longer = word.clone();
            longer.splice(at..at, [s * i, -s * i]);
            Ok((braid_closure(strands, &word)?, braid_closure(strands, &longer)?))
        }
        RMove::R3 => {
            let strands = 3;
            let len = rng.gen_range(0..=max_crossings.saturating_sub(3));
            let word = random_word(rng, strands, len);
            let at = rng.gen_range(0..=word.len());
            let s = if rng.gen_bool(0.5) { 1 } else { -1 };
            let mut a = word.clone();
            a.splice(at..at, [s, 2 * s, s]);
            let mut b = word;
            b.splice(at..at, [2 * s, s, 2 * s]);
            Ok((braid_closure(strands, &a)?, braid_closure(strands, &b)?))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clasp_resolutions() {
        let d = clasp();
        assert_eq!(d.trace_circles(&[0, 0]).unwrap().n_circles(), 1);
        assert_eq!(d.trace_circles(&[0, 1]).unwrap().n_circles(), 2);
        assert_eq!(d.trace_circles(&[1, 0]).unwrap().n_circles(), 2);
        assert_eq!(d.trace_circles(&[1, 1]).unwrap().n_circles(), 1);
        assert_eq!(d.components(), 2);
    }

    #[test]
    fn free_circle_resolution() {
        let d = PlanarDiagram::circles(1, true);
        let r = d.trace_circles(&[]).unwrap();
        assert_eq!(r.n_circles(), 1);
        assert_eq!(r.dotted_circle, Some(0));
    }

    #[test]
    fn torus_circle_counts() {
        let d = gen_torus(3).unwrap();
        assert_eq!(d.trace_circles(&[1, 1, 1]).unwrap().n_circles(), 3);
        assert_eq!(d.trace_circles(&[0, 0, 0]).unwrap().n_circles(), 2);
        assert_eq!(d.trace_circles(&[0, 1, 0]).unwrap().n_circles(), 1);
        assert_eq!(d.components(), 1);
        assert_eq!(gen_torus(4).unwrap().components(), 2);
        let t1 = gen_torus(1).unwrap();
        assert_eq!((t1.crossings(), t1.marked_edge()), (&[[0, 0, 1, 1]][..], Some(1)));
    }

    #[test]
    fn unknot_curl_counts() {
        let l = 3;
        let d = gen_unknot(l).unwrap();
        assert_eq!(d.circle_count(0), l + 1);
        for c in 0..2 * l {
            let delta = d.circle_count(1 << c) as i64 - d.circle_count(0) as i64;
            assert_eq!(delta, if c < l { 1 } else { -1 });
        }
        assert_eq!(d.components(), 1);
    }

    #[test]
    fn unlink_structure() {
        let d = gen_unlink(2).unwrap();
        assert_eq!(d.n_crossings(), 4);
        assert_eq!(d.components(), 3);
        assert!(d.same_as(&clasp().connected_sum(&clasp()).unwrap()));
    }

    #[test]
    fn connected_sum_with_pointed_circle_is_identity() {
        let d = gen_torus(3).unwrap();
        let u = PlanarDiagram::circles(1, true);
        assert_eq!(d.connected_sum(&u).unwrap(), d);
        assert_eq!(u.connected_sum(&d).unwrap(), d);
        assert!(matches!(d.connected_sum(&d.with_marked_edge(None).unwrap()), Err(Error::Precondition(_))));
    }

    #[test]
    fn mirror_is_involutive() {
        let d = gen_unknot(2).unwrap();
        assert!(d.mirror().mirror().same_as(&d));
        assert_ne!(d.mirror().canonical(), d.canonical());
        let c = PlanarDiagram::circles(1, false);
        assert_eq!(c.mirror(), c);
    }

    #[test]
    fn malformed_rejected() {
        assert!(matches!(PlanarDiagram::new(vec![[0, 1, 2, 2]], 0, None), Err(Error::Structural(_))));
        assert!(PlanarDiagram::new(vec![[0, 0, 1, 1]], 0, Some(5)).is_err());
        let json = r#"{"crossings": [[0,0,1,7]], "free_circles": 0, "marked_edge": null}"#;
        assert!(serde_json::from_str::<PlanarDiagram>(json).is_err());
    }

    #[test]
    fn json_roundtrip() {
        let d = gen_unlink(2).unwrap();
        let s = serde_json::to_string(&d).unwrap();
        assert!(s.starts_with(r#"{"crossings":[["#));
        assert_eq!(serde_json::from_str::<PlanarDiagram>(&s).unwrap(), d);
    }

    #[test]
    fn resolving_a_crossing_drops_it() {
        let d = gen_torus(3).unwrap();
        for bit in 0..2u8 {
            let (r, map) = d.resolve_crossing(2, bit).unwrap();
            assert_eq!(r.n_crossings(), 2);
            for mask in 0..4u64 {
                let full = mask | u64::from(bit) << 2;
                assert_eq!(r.circle_count(mask), d.circle_count(full));
            }
            assert_eq!(r.marked_edge(), Some(map[d.marked_edge().unwrap()]));
        }
        // resolving the only crossing of a curl leaves free circles
        let (r, _) = kinked_unknot(0, 1).resolve_crossing(0, 0).unwrap();
        assert_eq!((r.n_crossings(), r.free_circles()), (0, 2));
    }

    #[test]
    fn kinks_have_expected_handedness() {
        let d = gen_torus(2).unwrap();
        let p = d.add_kink(1, Kink::Positive).unwrap();
        let n = d.add_kink(1, Kink::Negative).unwrap();
        assert_eq!(p.circle_count(0), d.circle_count(0) + 1);
        assert_eq!(n.circle_count(1 << 2), d.circle_count(0) + 1);
        let u = PlanarDiagram::circles(1, true).add_kink(0, Kink::Positive).unwrap();
        assert_eq!(u, kinked_unknot(0, 1));
    }
}
