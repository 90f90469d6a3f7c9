use serde::Serialize;

use super::bitmatrix::{BitMatrix, Echelon};
use crate::khovanov::EnhancedState;
use crate::{Error, Result};

/// Name of a basis element of a chain group.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Generator {
    /// Enhanced state of a diagram.
    State(EnhancedState),
    /// `left ⊗ right`, indices into the factors' bases at `left_degree` and
    /// the complementary degree.
    Pair {
        left_degree: i32,
        left: usize,
        right: usize,
    },
    /// Summand of a cone coming from the source complex, same degree.
    ConeSource(usize),
    /// Summand of a cone coming from the target complex, one degree lower.
    ConeTarget(usize),
    Plain(usize),
}

/// Cochain complex over F₂ concentrated in degrees `min_degree..=max_degree`.
///
/// `differential(i)` maps degree `i` to `i + 1`; it has `dim(i + 1)` rows and
/// `dim(i)` columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex {
    min_degree: i32,
    dims: Vec<usize>,
    diffs: Vec<BitMatrix>,
    basis: Option<Vec<Vec<Generator>>>,
}

impl ChainComplex {
    /// `diffs[k]` is the map out of degree `min_degree + k`; one fewer than
    /// `dims` (or none for an empty complex).
    pub fn new(min_degree: i32, dims: Vec<usize>, diffs: Vec<BitMatrix>) -> Result<Self> {
        if dims.len() != diffs.len() + 1 && !(dims.is_empty() && diffs.is_empty()) {
            return Err(Error::Dimension(format!(
                "{} degrees need {} differentials, got {}",
                dims.len(),
                dims.len().saturating_sub(1),
                diffs.len()
            )));
        }
        for (k, d) in diffs.iter().enumerate() {
            if d.cols() != dims[k] || d.rows() != dims[k + 1] {
                return Err(Error::Dimension(format!(
                    "differential out of degree {} is {}x{}, expected {}x{}",
                    min_degree + k as i32,
                    d.rows(),
                    d.cols(),
                    dims[k + 1],
                    dims[k]
                )));
            }
        }
        Ok(Self { min_degree, dims, diffs, basis: None })
    }

    /// Complex with a single group `F₂^dim` in `degree`.
    #[must_use]
    pub fn concentrated(degree: i32, dim: usize) -> Self {
        Self { min_degree: degree, dims: vec![dim], diffs: Vec::new(), basis: None }
    }

    pub fn with_basis(mut self, basis: Vec<Vec<Generator>>) -> Result<Self> {
        if basis.len() != self.dims.len() || basis.iter().zip(&self.dims).any(|(b, &d)| b.len() != d) {
            return Err(Error::Dimension("basis does not match group dimensions".into()));
        }
        self.basis = Some(basis);
        Ok(self)
    }

    #[must_use]
    pub fn min_degree(&self) -> i32 {
        self.min_degree
    }

    #[must_use]
    pub fn max_degree(&self) -> i32 {
        self.min_degree + self.dims.len() as i32 - 1
    }

    #[must_use]
    pub fn degrees(&self) -> std::ops::RangeInclusive<i32> {
        self.min_degree..=self.max_degree()
    }

    fn slot(&self, i: i32) -> Option<usize> {
        let k = i - self.min_degree;
        (k >= 0 && (k as usize) < self.dims.len()).then_some(k as usize)
    }

    /// Dimension of degree `i`, zero outside the support.
    #[must_use]
    pub fn dim(&self, i: i32) -> usize {
        self.slot(i).map_or(0, |k| self.dims[k])
    }

    #[must_use]
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Stored map out of degree `i`, if both ends are inside the support.
    #[must_use]
    pub fn differential(&self, i: i32) -> Option<&BitMatrix> {
        self.slot(i).and_then(|k| self.diffs.get(k))
    }

    /// Map out of degree `i` as a matrix, zero with the right shape when
    /// either end is outside the support.
    #[must_use]
    pub fn differential_or_zero(&self, i: i32) -> BitMatrix {
        self.differential(i).cloned().unwrap_or_else(|| BitMatrix::zeros(self.dim(i + 1), self.dim(i)))
    }

    #[must_use]
    pub fn differentials(&self) -> &[BitMatrix] {
        &self.diffs
    }

    #[must_use]
    pub fn basis(&self, i: i32) -> Option<&[Generator]> {
        let k = self.slot(i)?;
        self.basis.as_ref().map(|b| b[k].as_slice())
    }

    #[must_use]
    pub fn has_basis(&self) -> bool {
        self.basis.is_some()
    }

    /// Checks `∂ ∘ ∂ = 0` in every degree.
    pub fn check_d_squared(&self) -> Result<()> {
        for w in self.diffs.windows(2) {
            let prod = w[1].mul(&w[0])?;
            if !prod.is_zero() {
                return Err(Error::Integrity("∂∘∂ is nonzero".into()));
            }
        }
        Ok(())
    }

    /// `rank ∂` out of degree `i`.
    #[must_use]
    pub fn rank(&self, i: i32) -> usize {
        self.differential(i).map_or(0, BitMatrix::rank)
    }
}

/// Per-degree dimensions, ranks and homology of a complex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologySummary {
    pub min_degree: i32,
    /// `dim C^i`.
    pub chain_dims: Vec<usize>,
    /// `rank ∂^i : C^i → C^{i+1}`.
    pub ranks: Vec<usize>,
    /// `dim H^i`.
    pub homology: Vec<usize>,
    pub euler_characteristic: i64,
}

impl HomologySummary {
    /// Assembles a summary from dimensions and ranks, checking consistency.
    pub fn from_ranks(min_degree: i32, chain_dims: Vec<usize>, ranks: Vec<usize>) -> Result<Self> {
        let mut homology = Vec::with_capacity(chain_dims.len());
        for k in 0..chain_dims.len() {
            let incoming = if k == 0 { 0 } else { ranks[k - 1] };
            let h = chain_dims[k]
                .checked_sub(ranks[k] + incoming)
                .ok_or_else(|| Error::Integrity(format!("negative homology in degree {}", min_degree + k as i32)))?;
            homology.push(h);
        }
        let euler = alternating(min_degree, &chain_dims);
        debug_assert_eq!(euler, alternating(min_degree, &homology));
        Ok(Self { min_degree, chain_dims, ranks, homology, euler_characteristic: euler })
    }

    /// `dim H^i`, zero outside the support.
    #[must_use]
    pub fn h(&self, i: i32) -> usize {
        let k = i - self.min_degree;
        if k < 0 {
            return 0;
        }
        self.homology.get(k as usize).copied().unwrap_or(0)
    }

    #[must_use]
    pub fn total_rank(&self) -> usize {
        self.homology.iter().sum()
    }

    #[must_use]
    pub fn homology_euler(&self) -> i64 {
        alternating(self.min_degree, &self.homology)
    }
}

fn alternating(min_degree: i32, v: &[usize]) -> i64 {
    v.iter()
        .enumerate()
        .map(|(k, &d)| if (min_degree + k as i32).rem_euclid(2) == 0 { d as i64 } else { -(d as i64) })
        .sum()
}

/// Homology dimensions of `c`; fails if `∂∘∂ ≠ 0`.
pub fn homology_dims(c: &ChainComplex) -> Result<HomologySummary> {
    c.check_d_squared()?;
    let ranks: Vec<usize> = c.degrees().map(|i| c.rank(i)).collect();
    HomologySummary::from_ranks(c.min_degree(), c.dims().to_vec(), ranks)
}

/// Rank of the map induced in homology by `f : A^i → B^i`.
pub fn induced_rank(a: &ChainComplex, b: &ChainComplex, i: i32, f: &BitMatrix) -> Result<usize> {
    if f.cols() != a.dim(i) || f.rows() != b.dim(i) {
        return Err(Error::Dimension(format!("map in degree {i} has wrong shape")));
    }
    let boundaries = b.differential_or_zero(i - 1).transpose();
    let mut span = Echelon::from_matrix(&boundaries);
    let base = span.rank();
    for z in a.differential_or_zero(i).kernel_basis() {
        let fz = f.mul_vec(&z)?;
        span.insert(&fz);
    }
    Ok(span.rank() - base)
}
