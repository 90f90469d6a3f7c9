//! CSS codes read off three consecutive degrees of a chain complex.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::diagram::Family;
use crate::homalg::{
    min_weight_outside, read_matrix_market, write_matrix_market, BitMatrix, ChainComplex, DistanceMode, MinWeight,
    SearchMethod,
};
use crate::khovanov::{Cube, LabelBasis};
use crate::{Error, Result};

/// Where a code came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub diagram: String,
    pub family: Option<Family>,
    pub l: Option<usize>,
    pub degree: i32,
    pub reduced: bool,
    pub basis: LabelBasis,
}

impl Provenance {
    #[must_use]
    pub fn family(family: Family, l: usize, degree: i32) -> Self {
        Self {
            diagram: format!("{family}(l={l})"),
            family: Some(family),
            l: Some(l),
            degree,
            reduced: true,
            basis: LabelBasis::Pm,
        }
    }
}

/// `H_X` and `H_Z` with `H_X H_Zᵗ = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CssCode {
    h_x: BitMatrix,
    h_z: BitMatrix,
    provenance: Option<Provenance>,
}

impl CssCode {
    pub fn new(h_x: BitMatrix, h_z: BitMatrix, provenance: Option<Provenance>) -> Result<Self> {
        if h_x.cols() != h_z.cols() {
            return Err(Error::Dimension(format!("H_X has {} columns, H_Z has {}", h_x.cols(), h_z.cols())));
        }
        if !h_x.mul(&h_z.transpose())?.is_zero() {
            return Err(Error::Integrity("H_X H_Zᵗ is nonzero".into()));
        }
        Ok(Self { h_x, h_z, provenance })
    }

    /// `H_X = ∂` out of degree `i0`, `H_Z = (∂` out of `i0 - 1)ᵗ`. Degrees
    /// outside the complex count as zero groups.
    pub fn from_complex_slice(c: &ChainComplex, i0: i32, provenance: Option<Provenance>) -> Result<Self> {
        if c.dim(i0) == 0 {
            return Err(Error::EmptyCode(i0));
        }
        let h_x = c.differential_or_zero(i0);
        let h_z = c.differential_or_zero(i0 - 1).transpose();
        Self::new(h_x, h_z, provenance)
    }

    #[must_use]
    pub fn h_x(&self) -> &BitMatrix {
        &self.h_x
    }

    #[must_use]
    pub fn h_z(&self) -> &BitMatrix {
        &self.h_z
    }

    #[must_use]
    pub fn n(&self) -> usize {
        self.h_x.cols()
    }

    #[must_use]
    pub fn provenance(&self) -> Option<&Provenance> {
        self.provenance.as_ref()
    }

    /// `n - rk H_X - rk H_Z`.
    #[must_use]
    pub fn k(&self) -> usize {
        self.n() - self.h_x.rank() - self.h_z.rank()
    }

    /// Same code with columns permuted (column `c` moves to `perm[c]`).
    #[must_use]
    pub fn permute_columns(&self, perm: &[usize]) -> Self {
        Self {
            h_x: self.h_x.permute_columns(perm),
            h_z: self.h_z.permute_columns(perm),
            provenance: self.provenance.clone(),
        }
    }

    /// `⟦n; k; d⟧` with both sides of the distance.
    pub fn params(&self, mode: DistanceMode) -> Result<CodeParams> {
        let (dz, dx) = rayon::join(
            || min_weight_outside(&self.h_x, &self.h_z, mode),
            || min_weight_outside(&self.h_z, &self.h_x, mode),
        );
        let (dz, dx) = (dz?, dx?);
        let d_z = Distance::from(&dz);
        let d_x = Distance::from(&dx);
        let d = d_z.min(&d_x);
        Ok(CodeParams {
            n: self.n(),
            k: self.k(),
            d,
            d_z,
            d_x,
            mode,
            h_x: WeightProfile::of_matrix(&self.h_x),
            h_z: WeightProfile::of_matrix(&self.h_z),
            provenance: self.provenance.clone(),
        })
    }

    pub fn sparseness_audit(&self) -> SparsenessReport {
        SparsenessReport::new(
            WeightProfile::of_matrix(&self.h_x),
            WeightProfile::of_matrix(&self.h_z),
            self.provenance.as_ref(),
        )
    }

    pub fn export(&self, format: ExportFormat) -> Result<Vec<(String, String)>> {
        Ok(match format {
            ExportFormat::Alist => {
                vec![("hx.alist".into(), write_alist(&self.h_x)), ("hz.alist".into(), write_alist(&self.h_z))]
            }
            ExportFormat::MatrixMarket => vec![
                ("hx.mtx".into(), write_matrix_market(&self.h_x)),
                ("hz.mtx".into(), write_matrix_market(&self.h_z)),
            ],
            ExportFormat::Json => {
                let doc = CodeJson {
                    n: self.n(),
                    h_x: self.h_x.row_supports(),
                    h_z: self.h_z.row_supports(),
                    provenance: self.provenance.clone(),
                };
                vec![("code.json".into(), serde_json::to_string_pretty(&doc)? + "\n")]
            }
        })
    }

    /// Inverse of [`CssCode::export`]: `files` in the order produced there.
    pub fn import(format: ExportFormat, files: &[&str]) -> Result<Self> {
        match (format, files) {
            (ExportFormat::Alist, [x, z]) => Self::new(read_alist(x)?, read_alist(z)?, None),
            (ExportFormat::MatrixMarket, [x, z]) => Self::new(read_matrix_market(x)?, read_matrix_market(z)?, None),
            (ExportFormat::Json, [j]) => {
                let doc: CodeJson = serde_json::from_str(j)?;
                let check = |rows: &[Vec<usize>]| -> Result<BitMatrix> {
                    if rows.iter().flatten().any(|&c| c >= doc.n) {
                        return Err(Error::Parse("column index out of range".into()));
                    }
                    Ok(BitMatrix::from_row_supports(doc.n, rows))
                };
                Self::new(check(&doc.h_x)?, check(&doc.h_z)?, doc.provenance.clone())
            }
            _ => Err(Error::Precondition(format!("{format} import takes {} file(s)", format.file_count()))),
        }
    }

    /// Writes the exported files as `<dir>/<stem>.<suffix>`.
    pub fn write_files(&self, format: ExportFormat, dir: &Path, stem: &str) -> Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir)?;
        let mut out = Vec::new();
        for (suffix, body) in self.export(format)? {
            let p = dir.join(format!("{stem}.{suffix}"));
            std::fs::write(&p, body)?;
            out.push(p);
        }
        Ok(out)
    }
}

#[derive(Serialize, Deserialize)]
struct CodeJson {
    n: usize,
    h_x: Vec<Vec<usize>>,
    h_z: Vec<Vec<usize>>,
    provenance: Option<Provenance>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExportFormat {
    Alist,
    MatrixMarket,
    Json,
}

impl ExportFormat {
    fn file_count(self) -> usize {
        if self == ExportFormat::Json {
            1
        } else {
            2
        }
    }
}

impl std::str::FromStr for ExportFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "alist" => Ok(ExportFormat::Alist),
            "matrixmarket" | "mtx" | "mm" => Ok(ExportFormat::MatrixMarket),
            "json" => Ok(ExportFormat::Json),
            _ => Err(Error::UnsupportedFormat(s.to_string())),
        }
    }
}

impl std::fmt::Display for ExportFormat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ExportFormat::Alist => "alist",
            ExportFormat::MatrixMarket => "matrixmarket",
            ExportFormat::Json => "json",
        })
    }
}

/// MacKay alist: `n m`, max column and row degrees, the degrees, then the
/// 1-based row list of every column and column list of every row, padded
/// with zeros to the maximum degree.
#[must_use]
pub fn write_alist(m: &BitMatrix) -> String {
    let rows = m.row_supports();
    let mut cols = vec![Vec::new(); m.cols()];
    for (r, s) in rows.iter().enumerate() {
        for &c in s {
            cols[c].push(r);
        }
    }
    let max_c = cols.iter().map(Vec::len).max().unwrap_or(0);
    let max_r = rows.iter().map(Vec::len).max().unwrap_or(0);
    let join = |v: &mut dyn Iterator<Item = usize>| v.map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
    let mut s = String::new();
    let _ = writeln!(s, "{} {}", m.cols(), m.rows());
    let _ = writeln!(s, "{max_c} {max_r}");
    let _ = writeln!(s, "{}", join(&mut cols.iter().map(Vec::len)));
    let _ = writeln!(s, "{}", join(&mut rows.iter().map(Vec::len)));
    for (lists, width) in [(&cols, max_c), (&rows, max_r)] {
        for l in lists {
            let mut it = l.iter().map(|x| x + 1).chain(std::iter::repeat(0)).take(width);
            let _ = writeln!(s, "{}", join(&mut it));
        }
    }
    s
}

pub fn read_alist(text: &str) -> Result<BitMatrix> {
    let mut tok =
        text.split_whitespace().map(|t| t.parse::<usize>().map_err(|_| Error::Parse(format!("bad alist token `{t}`"))));
    let mut next = || tok.next().unwrap_or_else(|| Err(Error::Parse("alist ended early".into())));
    let (n, m) = (next()?, next()?);
    let (max_c, max_r) = (next()?, next()?);
    let col_deg: Vec<usize> = (0..n).map(|_| next()).collect::<Result<_>>()?;
    let row_deg: Vec<usize> = (0..m).map(|_| next()).collect::<Result<_>>()?;
    let mut by_col = BitMatrix::zeros(m, n);
    for (c, &deg) in col_deg.iter().enumerate() {
        let entries: Vec<usize> = (0..max_c).map(|_| next()).collect::<Result<_>>()?;
        let live: Vec<usize> = entries.into_iter().filter(|&x| x != 0).collect();
        if live.len() != deg || live.iter().any(|&r| r > m) {
            return Err(Error::Parse(format!("column {} list disagrees with its degree", c + 1)));
        }
        for r in live {
            by_col.set(r - 1, c, true);
        }
    }
    let mut by_row = BitMatrix::zeros(m, n);
    for (r, &deg) in row_deg.iter().enumerate() {
        let entries: Vec<usize> = (0..max_r).map(|_| next()).collect::<Result<_>>()?;
        let live: Vec<usize> = entries.into_iter().filter(|&x| x != 0).collect();
        if live.len() != deg || live.iter().any(|&c| c > n) {
            return Err(Error::Parse(format!("row {} list disagrees with its degree", r + 1)));
        }
        for c in live {
            by_row.set(r, c - 1, true);
        }
    }
    if by_col != by_row {
        return Err(Error::Parse("column and row lists describe different matrices".into()));
    }
    Ok(by_row)
}

/// Distance of one side, or of the code.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Distance {
    /// `None` when there is no nontrivial class (infinite).
    pub lower: Option<usize>,
    pub upper: Option<usize>,
    pub exact: bool,
    pub method: Option<SearchMethod>,
}

impl From<&MinWeight> for Distance {
    fn from(w: &MinWeight) -> Self {
        let method = match w {
            MinWeight::Infinite => None,
            MinWeight::Exact { method, .. } | MinWeight::Bounds { method, .. } => Some(*method),
        };
        Self { lower: w.lower(), upper: w.upper(), exact: w.is_exact(), method }
    }
}

impl Distance {
    #[must_use]
    pub fn value(&self) -> Option<usize> {
        if self.exact {
            self.upper
        } else {
            None
        }
    }

    #[must_use]
    pub fn is_infinite(&self) -> bool {
        self.exact && self.upper.is_none()
    }

    /// Minimum of two distances, exact when the bounds meet.
    #[must_use]
    pub fn min(&self, other: &Distance) -> Distance {
        let lo = |d: &Distance| d.lower.unwrap_or(usize::MAX);
        let hi = |d: &Distance| d.upper.unwrap_or(usize::MAX);
        let lower = lo(self).min(lo(other));
        let upper = hi(self).min(hi(other));
        let wrap = |x: usize| (x != usize::MAX).then_some(x);
        let method = if hi(self) <= hi(other) { self.method.or(other.method) } else { other.method.or(self.method) };
        Distance { lower: wrap(lower), upper: wrap(upper), exact: lower == upper, method }
    }
}

impl std::fmt::Display for Distance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match (self.lower, self.upper) {
            (_, None) => write!(f, "inf"),
            (Some(l), Some(u)) if l == u => write!(f, "{u}"),
            (l, Some(u)) => write!(f, "{}..{u}", l.unwrap_or(0)),
        }
    }
}

/// Row and column weight distribution of one matrix.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct WeightProfile {
    pub rows: BTreeMap<usize, usize>,
    pub cols: BTreeMap<usize, usize>,
}

impl WeightProfile {
    #[must_use]
    pub fn of_matrix(m: &BitMatrix) -> Self {
        let hist = |v: Vec<usize>| {
            let mut h = BTreeMap::new();
            for w in v {
                *h.entry(w).or_insert(0) += 1;
            }
            h
        };
        Self { rows: hist(m.row_weights()), cols: hist(m.col_weights()) }
    }

    #[must_use]
    pub fn row_range(&self) -> Option<(usize, usize)> {
        Some((*self.rows.keys().next()?, *self.rows.keys().next_back()?))
    }

    #[must_use]
    pub fn col_range(&self) -> Option<(usize, usize)> {
        Some((*self.cols.keys().next()?, *self.cols.keys().next_back()?))
    }
}

/// Profiles of the slice at `i0` computed from the cube, without dense
/// matrices. Matches [`CssCode::sparseness_audit`] on the built code.
#[must_use]
pub fn slice_weight_profiles(cube: &Cube, i0: usize) -> (WeightProfile, WeightProfile) {
    let (x_rows, x_cols) = cube.weight_histograms(i0);
    let h_z = if i0 == 0 {
        let mut cols = BTreeMap::new();
        cols.insert(0, cube.dim(0));
        WeightProfile { rows: BTreeMap::new(), cols }
    } else {
        let (r, c) = cube.weight_histograms(i0 - 1);
        WeightProfile { rows: c, cols: r }
    };
    (WeightProfile { rows: x_rows, cols: x_cols }, h_z)
}

/// One family-specific weight statement and whether it holds.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyCheck {
    pub claim: String,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SparsenessReport {
    pub h_x: WeightProfile,
    pub h_z: WeightProfile,
    pub checks: Vec<FamilyCheck>,
}

impl SparsenessReport {
    #[must_use]
    pub fn new(h_x: WeightProfile, h_z: WeightProfile, provenance: Option<&Provenance>) -> Self {
        let checks = provenance.map(|p| family_checks(p, &h_x, &h_z)).unwrap_or_default();
        Self { h_x, h_z, checks }
    }

    #[must_use]
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

fn all_in(h: &BTreeMap<usize, usize>, lo: usize, hi: usize) -> bool {
    h.keys().all(|&w| (lo..=hi).contains(&w))
}

fn exactly(h: &BTreeMap<usize, usize>, w: usize) -> bool {
    h.keys().all(|&k| k == w)
}

fn family_checks(p: &Provenance, hx: &WeightProfile, hz: &WeightProfile) -> Vec<FamilyCheck> {
    let (Some(family), Some(l)) = (p.family, p.l) else {
        return Vec::new();
    };
    match family {
        Family::Unknot | Family::Unlink => {
            let (lo, hi) = (l + 1, 2 * (l + 1));
            vec![
                FamilyCheck { claim: format!("H_X row weights in [{lo}, {hi}]"), pass: all_in(&hx.rows, lo, hi) },
                FamilyCheck { claim: format!("H_Z row weights in [{lo}, {hi}]"), pass: all_in(&hz.rows, lo, hi) },
            ]
        }
        Family::Torus => {
            let r = p.degree.max(0) as usize;
            if r < 1 || r > l {
                return Vec::new();
            }
            vec![
                FamilyCheck { claim: format!("H_X row weights all {}", r + 1), pass: exactly(&hx.rows, r + 1) },
                FamilyCheck {
                    claim: format!("H_Z row weights all {}", 2 * (l - r + 1)),
                    pass: exactly(&hz.rows, 2 * (l - r + 1)),
                },
                FamilyCheck {
                    claim: format!("H_X column weights all {}", 2 * (l - r)),
                    pass: exactly(&hx.cols, 2 * (l - r)),
                },
                FamilyCheck { claim: format!("H_Z column weights all {r}"), pass: exactly(&hz.cols, r) },
            ]
        }
    }
}

/// `⟦n; k; d⟧` with per-side distances and weight profiles.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CodeParams {
    pub n: usize,
    pub k: usize,
    pub d: Distance,
    /// Minimum weight in `ker H_X ∖ rowspace H_Z`.
    pub d_z: Distance,
    /// Minimum weight in `ker H_Z ∖ rowspace H_X`.
    pub d_x: Distance,
    pub mode: DistanceMode,
    pub h_x: WeightProfile,
    pub h_z: WeightProfile,
    pub provenance: Option<Provenance>,
}

impl CodeParams {
    #[must_use]
    pub fn is_exact(&self) -> bool {
        self.d.exact
    }
}

impl std::fmt::Display for CodeParams {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[[{};{};{}]] {}", self.n, self.k, self.d, if self.d.exact { "exact" } else { "bounds" })
    }
}
