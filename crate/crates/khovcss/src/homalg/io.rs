//! MatrixMarket coordinate pattern files.

use std::fmt::Write as _;

use super::bitmatrix::BitMatrix;
use crate::{Error, Result};

/// `%%MatrixMarket matrix coordinate pattern general`, 1-based, entries in
/// row-major order.
#[must_use]
pub fn write_matrix_market(m: &BitMatrix) -> String {
    let mut s = String::from("%%MatrixMarket matrix coordinate pattern general\n");
    let _ = writeln!(s, "{} {} {}", m.rows(), m.cols(), m.count_ones());
    for r in 0..m.rows() {
        for c in m.row(r).ones() {
            let _ = writeln!(s, "{} {}", r + 1, c + 1);
        }
    }
    s
}

pub fn read_matrix_market(text: &str) -> Result<BitMatrix> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| Error::Parse("empty MatrixMarket input".into()))?;
    let h = header.to_ascii_lowercase();
    if !h.starts_with("%%matrixmarket") || !h.contains("coordinate") || !h.contains("pattern") {
        return Err(Error::Parse(format!("unsupported MatrixMarket header `{header}`")));
    }
    let mut body = lines.map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('%'));
    let size = body.next().ok_or_else(|| Error::Parse("missing size line".into()))?;
    let nums = parse_usizes(size)?;
    let [rows, cols, nnz] = nums[..] else {
        return Err(Error::Parse(format!("bad size line `{size}`")));
    };
    let mut m = BitMatrix::zeros(rows, cols);
    let mut seen = 0;
    for line in body {
        let v = parse_usizes(line)?;
        let [r, c] = v[..] else {
            return Err(Error::Parse(format!("bad entry `{line}`")));
        };
        if r == 0 || c == 0 || r > rows || c > cols {
            return Err(Error::Parse(format!("entry ({r},{c}) outside {rows}x{cols}")));
        }
        m.flip(r - 1, c - 1);
        seen += 1;
    }
    if seen != nnz {
        return Err(Error::Parse(format!("expected {nnz} entries, found {seen}")));
    }
    Ok(m)
}

pub(crate) fn parse_usizes(line: &str) -> Result<Vec<usize>> {
    line.split_whitespace().map(|t| t.parse().map_err(|_| Error::Parse(format!("not a count: `{t}`")))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip() {
        let m = BitMatrix::from_rows_u8(&[vec![1, 0, 1], vec![0, 0, 0], vec![0, 1, 1]]);
        let s = write_matrix_market(&m);
        assert!(s.starts_with("%%MatrixMarket matrix coordinate pattern general\n3 3 4\n1 1\n"));
        assert_eq!(read_matrix_market(&s).unwrap(), m);
    }

    #[test]
    fn rejects_real_valued() {
        assert!(read_matrix_market("%%MatrixMarket matrix coordinate real general\n1 1 0\n").is_err());
    }
}
