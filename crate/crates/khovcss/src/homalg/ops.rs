use serde::Serialize;

use super::bitmatrix::BitMatrix;
use super::complex::{homology_dims, induced_rank, ChainComplex, Generator};
use crate::{Error, Result};

/// Graded tensor product with `∂(a⊗b) = ∂a⊗b + a⊗∂b`.
///
/// In total degree `k` the basis lists pairs `(a, b)` by increasing degree of
/// `a`, then index of `a`, then index of `b`.
pub fn tensor(a: &ChainComplex, b: &ChainComplex) -> Result<ChainComplex> {
    let lo = a.min_degree() + b.min_degree();
    let hi = a.max_degree() + b.max_degree();
    // offsets[k][p - a.min] = start of the (p, k - p) block inside degree k
    let mut dims = Vec::new();
    let mut offsets = Vec::new();
    let mut basis = Vec::new();
    for k in lo..=hi {
        let mut off = Vec::new();
        let mut total = 0;
        let mut gens = Vec::new();
        for p in a.degrees() {
            off.push(total);
            let (da, db) = (a.dim(p), b.dim(k - p));
            for i in 0..da {
                for j in 0..db {
                    gens.push(Generator::Pair { left_degree: p, left: i, right: j });
                }
            }
            total += da * db;
        }
        dims.push(total);
        offsets.push(off);
        basis.push(gens);
    }
    let mut diffs = Vec::new();
    for k in lo..hi {
        let src = &offsets[(k - lo) as usize];
        let dst = &offsets[(k + 1 - lo) as usize];
        let mut m = BitMatrix::zeros(dims[(k + 1 - lo) as usize], dims[(k - lo) as usize]);
        for p in a.degrees() {
            let q = k - p;
            let (da, db) = (a.dim(p), b.dim(q));
            if da == 0 || db == 0 {
                continue;
            }
            let pk = (p - a.min_degree()) as usize;
            let da_next = a.dim(p + 1);
            let db_next = b.dim(q + 1);
            let dma = a.differential(p);
            let dmb = b.differential(q);
            for i in 0..da {
                for j in 0..db {
                    let col = src[pk] + i * db + j;
                    if let Some(dm) = dma {
                        for r in 0..da_next {
                            if dm.get(r, i) {
                                m.flip(dst[pk + 1] + r * db + j, col);
                            }
                        }
                    }
                    if let Some(dm) = dmb {
                        for r in 0..db_next {
                            if dm.get(r, j) {
                                m.flip(dst[pk] + i * db_next + r, col);
                            }
                        }
                    }
                }
            }
        }
        diffs.push(m);
    }
    ChainComplex::new(lo, dims, diffs)?.with_basis(basis)
}

/// Checks that `f` (one matrix per source degree, starting at the source's
/// minimum degree) commutes with the differentials.
pub fn is_chain_map(source: &ChainComplex, target: &ChainComplex, f: &[BitMatrix]) -> Result<bool> {
    check_map_shapes(source, target, f)?;
    for i in source.degrees() {
        let fi = map_at(source, target, f, i);
        let fnext = map_at(source, target, f, i + 1);
        let lhs = target.differential_or_zero(i).mul(&fi)?;
        let rhs = fnext.mul(&source.differential_or_zero(i))?;
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

fn check_map_shapes(source: &ChainComplex, target: &ChainComplex, f: &[BitMatrix]) -> Result<()> {
    if f.len() != source.dims().len() {
        return Err(Error::Dimension(format!("chain map needs {} components, got {}", source.dims().len(), f.len())));
    }
    for (i, m) in source.degrees().zip(f) {
        if m.cols() != source.dim(i) || m.rows() != target.dim(i) {
            return Err(Error::Dimension(format!("chain map component in degree {i} has wrong shape")));
        }
    }
    Ok(())
}

fn map_at(source: &ChainComplex, target: &ChainComplex, f: &[BitMatrix], i: i32) -> BitMatrix {
    let k = i - source.min_degree();
    if k >= 0 && (k as usize) < f.len() {
        f[k as usize].clone()
    } else {
        BitMatrix::zeros(target.dim(i), source.dim(i))
    }
}

/// Cone of a chain map `f : A → B`: `C^i = A^i ⊕ B^{i-1}` with
/// `∂ = [[∂_A, 0], [f, ∂_B]]`.
pub fn cone(source: &ChainComplex, target: &ChainComplex, f: &[BitMatrix]) -> Result<ChainComplex> {
    if !is_chain_map(source, target, f)? {
        return Err(Error::Precondition("map does not commute with the differentials".into()));
    }
    let lo = source.min_degree().min(target.min_degree() + 1);
    let hi = source.max_degree().max(target.max_degree() + 1);
    let dims: Vec<usize> = (lo..=hi).map(|i| source.dim(i) + target.dim(i - 1)).collect();
    let basis: Vec<Vec<Generator>> = (lo..=hi)
        .map(|i| {
            (0..source.dim(i))
                .map(Generator::ConeSource)
                .chain((0..target.dim(i - 1)).map(Generator::ConeTarget))
                .collect()
        })
        .collect();
    let mut diffs = Vec::new();
    for i in lo..hi {
        let (a_i, b_prev) = (source.dim(i), target.dim(i - 1));
        let a_next = source.dim(i + 1);
        let mut m = BitMatrix::zeros(a_next + target.dim(i), a_i + b_prev);
        if let Some(d) = source.differential(i) {
            for r in 0..d.rows() {
                for c in d.row(r).ones() {
                    m.set(r, c, true);
                }
            }
        }
        let fi = map_at(source, target, f, i);
        for r in 0..fi.rows() {
            for c in fi.row(r).ones() {
                m.set(a_next + r, c, true);
            }
        }
        if let Some(d) = target.differential(i - 1) {
            for r in 0..d.rows() {
                for c in d.row(r).ones() {
                    m.set(a_next + r, a_i + c, true);
                }
            }
        }
        diffs.push(m);
    }
    ChainComplex::new(lo, dims, diffs)?.with_basis(basis)
}

/// One degree of the long exact sequence check for a cone.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConeDegreeReport {
    pub degree: i32,
    pub cone_homology: usize,
    /// `dim ker(f* : H^i(A) → H^i(B))`.
    pub kernel_induced: usize,
    /// `dim coker(f* : H^{i-1}(A) → H^{i-1}(B))`.
    pub cokernel_induced_prev: usize,
    pub consistent: bool,
}

/// Compares `dim H^i(Cone f)` with `dim ker f*_i + dim coker f*_{i-1}`.
pub fn cone_exactness_report(
    source: &ChainComplex,
    target: &ChainComplex,
    f: &[BitMatrix],
) -> Result<Vec<ConeDegreeReport>> {
    let c = cone(source, target, f)?;
    let hc = homology_dims(&c)?;
    let ha = homology_dims(source)?;
    let hb = homology_dims(target)?;
    let induced = |i: i32| -> Result<usize> {
        if source.dim(i) == 0 || target.dim(i) == 0 {
            return Ok(0);
        }
        induced_rank(source, target, i, &map_at(source, target, f, i))
    };
    let mut out = Vec::new();
    for i in c.degrees() {
        let ker = ha.h(i) - induced(i)?;
        let coker = hb.h(i - 1) - induced(i - 1)?;
        let h = hc.h(i);
        out.push(ConeDegreeReport {
            degree: i,
            cone_homology: h,
            kernel_induced: ker,
            cokernel_induced_prev: coker,
            consistent: h == ker + coker,
        });
    }
    Ok(out)
}

/// Dual complex: every differential transposed, degree `i` stored at
/// `min + max - i` so the result is again increasing.
#[must_use]
pub fn dual(c: &ChainComplex) -> ChainComplex {
    let dims: Vec<usize> = c.dims().iter().rev().copied().collect();
    let diffs: Vec<BitMatrix> = c.differentials().iter().rev().map(BitMatrix::transpose).collect();
    let out = ChainComplex::new(c.min_degree(), dims, diffs).expect("transposed shapes are consistent");
    if c.has_basis() {
        let basis = c.degrees().rev().map(|i| c.basis(i).expect("basis present").to_vec()).collect();
        out.with_basis(basis).expect("same dimensions")
    } else {
        out
    }
}
