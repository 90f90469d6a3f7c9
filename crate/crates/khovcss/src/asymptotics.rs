//! Exact bignum checks of the growth rates behind the family lengths:
//! sums of squared weighted binomials, the unlink length `T_l` and its
//! Legendre form, and the balanced-slice distance inequality.

use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::families::r_of_l;
use crate::{Error, Result};

/// `C(n, k)`, zero when `k > n`.
#[must_use]
pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Row `C(n, 0..=n)` built incrementally.
fn binomial_row(n: usize) -> Vec<BigUint> {
    let mut row = Vec::with_capacity(n + 1);
    let mut c = BigUint::one();
    row.push(c.clone());
    for k in 0..n {
        c = c * (n - k) / (k + 1);
        row.push(c.clone());
    }
    row
}

/// Natural log of a positive bignum, good to double precision.
#[must_use]
pub fn big_ln(v: &BigUint) -> f64 {
    let bits = v.bits();
    if bits <= 1000 {
        return v.to_f64().expect("finite").ln();
    }
    let shift = bits - 64;
    let top = (v >> shift).to_f64().expect("64 bits");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// `a / b` as a float without overflowing either side.
#[must_use]
pub fn big_ratio(a: &BigUint, b: &BigUint) -> f64 {
    (big_ln(a) - big_ln(b)).exp()
}

fn rational_ln(x: &BigRational) -> f64 {
    let num = x.numer().magnitude();
    let den = x.denom().magnitude();
    big_ln(num) - big_ln(den)
}

/// Element `a + b√3` of `Z[√3]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadInt {
    pub a: BigInt,
    pub b: BigInt,
}

impl QuadInt {
    #[must_use]
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>) -> Self {
        Self { a: a.into(), b: b.into() }
    }

    #[must_use]
    pub fn one() -> Self {
        Self::new(1, 0)
    }

    /// `2 + √3`, the unit whose inverse is `2 - √3`.
    #[must_use]
    pub fn x0() -> Self {
        Self::new(2, 1)
    }

    #[must_use]
    pub fn conj(&self) -> Self {
        Self { a: self.a.clone(), b: -self.b.clone() }
    }

    /// `a² - 3b²`.
    #[must_use]
    pub fn norm(&self) -> BigInt {
        &self.a * &self.a - BigInt::from(3) * &self.b * &self.b
    }

    #[must_use]
    pub fn pow(&self, mut e: usize) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    #[must_use]
    pub fn scale(&self, k: &BigInt) -> Self {
        Self { a: &self.a * k, b: &self.b * k }
    }

    #[must_use]
    pub fn to_f64(&self) -> f64 {
        self.a.to_f64().unwrap_or(f64::NAN) + self.b.to_f64().unwrap_or(f64::NAN) * 3f64.sqrt()
    }
}

impl Add for &QuadInt {
    type Output = QuadInt;
    fn add(self, o: &QuadInt) -> QuadInt {
        QuadInt { a: &self.a + &o.a, b: &self.b + &o.b }
    }
}

impl Sub for &QuadInt {
    type Output = QuadInt;
    fn sub(self, o: &QuadInt) -> QuadInt {
        QuadInt { a: &self.a - &o.a, b: &self.b - &o.b }
    }
}

impl Mul for &QuadInt {
    type Output = QuadInt;
    fn mul(self, o: &QuadInt) -> QuadInt {
        QuadInt { a: &self.a * &o.a + BigInt::from(3) * &self.b * &o.b, b: &self.a * &o.b + &self.b * &o.a }
    }
}

impl Neg for QuadInt {
    type Output = QuadInt;
    fn neg(self) -> QuadInt {
        QuadInt { a: -self.a, b: -self.b }
    }
}

/// `Σ_r [C(l,r) x^r]²`, exact.
pub fn sum_squares(l: usize, x: &BigRational) -> Result<BigRational> {
    if !x.is_positive() {
        return Err(Error::Precondition(format!("x must be positive, got {x}")));
    }
    let p = x.numer().magnitude().clone();
    let q = x.denom().magnitude().clone();
    // Σ C² p^{2r} q^{2(l-r)} / q^{2l}
    let p2 = &p * &p;
    let q2 = &q * &q;
    let row = binomial_row(l);
    let mut num = BigUint::zero();
    let mut pp = BigUint::one();
    let mut qpow: Vec<BigUint> = Vec::with_capacity(l + 1);
    let mut acc = BigUint::one();
    for _ in 0..=l {
        qpow.push(acc.clone());
        acc *= &q2;
    }
    for (r, c) in row.iter().enumerate() {
        num += c * c * &pp * &qpow[l - r];
        pp *= &p2;
    }
    let den = qpow[l].clone();
    Ok(BigRational::new(BigInt::from(num), BigInt::from(den)))
}

/// `sum_squares(l, x)` divided by `(1+x)^{2l+1} / (2√(xπl))`.
pub fn ratio_to_asymptote(l: usize, x: &BigRational) -> Result<f64> {
    if l == 0 {
        return Err(Error::Precondition("l must be at least 1".into()));
    }
    let s = sum_squares(l, x)?;
    let one_plus = x + BigRational::one();
    let xf = x.to_f64().expect("finite");
    let ln_asym =
        (2 * l + 1) as f64 * rational_ln(&one_plus) - (2.0 * (xf * std::f64::consts::PI * l as f64).sqrt()).ln();
    Ok((rational_ln(&s) - ln_asym).exp())
}

/// `T_l = Σ_r C(l,r) C(2r,r) 2^{l-r}`.
#[must_use]
pub fn unlink_t(l: usize) -> BigUint {
    let row = binomial_row(l);
    let mut central = BigUint::one();
    let mut total = BigUint::zero();
    for (r, c) in row.iter().enumerate() {
        total += (c * &central) << (l - r);
        // C(2r+2, r+1) = C(2r, r) (2r+1)(2r+2) / (r+1)²
        central = central * ((2 * r + 1) * (2 * r + 2)) / ((r + 1) * (r + 1));
    }
    total
}

/// `T_l` against `6^l (3+√3) / (2√((2+√3)πl))`.
pub fn unlink_ratio(l: usize) -> Result<f64> {
    if l == 0 {
        return Err(Error::Precondition("l must be at least 1".into()));
    }
    let s3 = 3f64.sqrt();
    let ln_asym =
        l as f64 * 6f64.ln() + (3.0 + s3).ln() - (2.0 * ((2.0 + s3) * std::f64::consts::PI * l as f64).sqrt()).ln();
    Ok((big_ln(&unlink_t(l)) - ln_asym).exp())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LegendreReport {
    pub l: usize,
    /// `(2+√3)^l T_l = Σ C(l,r)² (2+√3)^{2r}` in `Z[√3]`.
    pub exact: bool,
    /// Relative gap between `T_l` and `(2√3)^l P_l(2/√3)` by recurrence.
    pub numeric_rel_err: f64,
    pub pass: bool,
}

/// Relative tolerance of the floating-point Legendre recurrence.
pub const LEGENDRE_TOL: f64 = 1e-10;

#[must_use]
pub fn legendre_check(l: usize) -> LegendreReport {
    let t = BigInt::from(unlink_t(l));
    let x0 = QuadInt::x0();
    let lhs = x0.pow(l).scale(&t);
    let x2 = &x0 * &x0;
    let mut rhs = QuadInt::new(0, 0);
    let mut p = QuadInt::one();
    for c in binomial_row(l) {
        let c = BigInt::from(c);
        rhs = &rhs + &p.scale(&(&c * &c));
        p = &p * &x2;
    }
    let exact = lhs == rhs;

    let x = 2.0 / 3f64.sqrt();
    let (mut prev, mut cur) = (1.0f64, x);
    if l == 0 {
        cur = 1.0;
    }
    for n in 1..l {
        let next = ((2 * n + 1) as f64 * x * cur - n as f64 * prev) / (n + 1) as f64;
        prev = cur;
        cur = next;
    }
    let numeric = (2.0 * 3f64.sqrt()).powi(l as i32) * cur;
    let tf = t.to_f64().expect("finite for l <= 300");
    let numeric_rel_err = ((numeric - tf) / tf).abs();
    LegendreReport { l, exact, numeric_rel_err, pass: exact && numeric_rel_err <= LEGENDRE_TOL }
}

fn big_str<S: Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// One `l` of the balanced-slice check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BestParamRow {
    pub l: usize,
    pub r: i64,
    #[serde(serialize_with = "big_str")]
    pub binom: BigUint,
    #[serde(serialize_with = "big_str")]
    pub pow2: BigUint,
    /// `162² min² > 100² n` with `n = 2^{r-1} C(l,r)`; `None` when skipped.
    pub verdict: Option<bool>,
    /// `100 · 2^{r-1} < 261 · C(l,r)` and `100 · C(l,r) < 261 · 2^{r-1}`.
    pub ratio_in_band: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub notice: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BestParamReport {
    pub rows: Vec<BestParamRow>,
    /// Smallest `l` after which every tested verdict holds.
    pub threshold: Option<usize>,
    /// Same for the ratio band.
    pub ratio_threshold: Option<usize>,
}

fn suffix_threshold(rows: &[BestParamRow], f: impl Fn(&BestParamRow) -> Option<bool>) -> Option<usize> {
    let mut threshold = None;
    for row in rows.iter().rev() {
        match f(row) {
            Some(true) => threshold = Some(row.l),
            Some(false) => break,
            None => {}
        }
    }
    threshold
}

#[must_use]
pub fn best_param_row(l: usize) -> BestParamRow {
    let r = r_of_l(l);
    if r < 2 || r as usize > l {
        return BestParamRow {
            l,
            r,
            binom: BigUint::zero(),
            pow2: BigUint::zero(),
            verdict: None,
            ratio_in_band: None,
            notice: Some(format!("r = {r} outside [2, {l}], skipped")),
        };
    }
    let ru = r as usize;
    let binom = binomial(l, ru);
    let pow2 = BigUint::one() << (ru - 1);
    let n = &binom * &pow2;
    let m = (&binom).min(&pow2);
    let verdict = BigUint::from(162u32 * 162) * m * m > BigUint::from(100u32 * 100) * &n;
    let band = BigUint::from(100u32) * &pow2 < BigUint::from(261u32) * &binom
        && BigUint::from(100u32) * &binom < BigUint::from(261u32) * &pow2;
    BestParamRow { l, r, binom, pow2, verdict: Some(verdict), ratio_in_band: Some(band), notice: None }
}

pub fn best_param_check(ls: impl IntoIterator<Item = usize>) -> BestParamReport {
    let mut ls: Vec<usize> = ls.into_iter().collect();
    ls.sort_unstable();
    ls.dedup();
    let rows: Vec<BestParamRow> = ls.par_iter().map(|&l| best_param_row(l)).collect();
    let threshold = suffix_threshold(&rows, |r| r.verdict);
    let ratio_threshold = suffix_threshold(&rows, |r| r.ratio_in_band);
    BestParamReport { rows, threshold, ratio_threshold }
}

/// Ratios at each `l` for the convergence tables.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub l: usize,
    pub sum_squares_ratio: f64,
    pub unlink_ratio: f64,
}

pub fn convergence_table(ls: &[usize]) -> Result<Vec<ConvergenceRow>> {
    let two = BigRational::from_integer(BigInt::from(2));
    ls.par_iter()
        .map(|&l| {
            Ok(ConvergenceRow { l, sum_squares_ratio: ratio_to_asymptote(l, &two)?, unlink_ratio: unlink_ratio(l)? })
        })
        .collect()
}

/// Whether `|ratio - 1|` strictly shrinks along the table.
#[must_use]
pub fn strictly_approaches_one(ratios: &[f64]) -> bool {
    ratios.windows(2).all(|w| (w[1] - 1.0).abs() < (w[0] - 1.0).abs())
}

/// The whole suite as one summary.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AppendixReport {
    pub legendre_max_l: usize,
    pub legendre_pass: bool,
    pub convergence: Vec<ConvergenceRow>,
    pub convergence_pass: bool,
    pub best_param_range: (usize, usize),
    pub best_param_threshold: Option<usize>,
    pub ratio_threshold: Option<usize>,
    pub pass: bool,
}

/// Relative tolerance of the ratio at `l = 1000`.
pub const RATIO_TOL: f64 = 0.05;

pub fn appendix_suite(legendre_max_l: usize, best_param_max_l: usize) -> Result<AppendixReport> {
    let legendre_pass = (0..=legendre_max_l).into_par_iter().all(|l| legendre_check(l).pass);
    let convergence = convergence_table(&[100, 1000, 10_000])?;
    let ss: Vec<f64> = convergence.iter().map(|r| r.sum_squares_ratio).collect();
    let ul: Vec<f64> = convergence.iter().map(|r| r.unlink_ratio).collect();
    let convergence_pass = strictly_approaches_one(&ss)
        && strictly_approaches_one(&ul)
        && (ss[1] - 1.0).abs() <= RATIO_TOL
        && (ul[1] - 1.0).abs() <= RATIO_TOL;
    let best = best_param_check(2..=best_param_max_l);
    let pass = legendre_pass && convergence_pass && best.threshold.is_some();
    Ok(AppendixReport {
        legendre_max_l,
        legendre_pass,
        convergence,
        convergence_pass,
        best_param_range: (2, best_param_max_l),
        best_param_threshold: best.threshold,
        ratio_threshold: best.ratio_threshold,
        pass,
    })
}

/// `gcd`-reduced `p/q` from integers.
pub fn rational(p: i64, q: i64) -> Result<BigRational> {
    if q == 0 {
        return Err(Error::Precondition("zero denominator".into()));
    }
    let g = p.gcd(&q);
    Ok(BigRational::new(BigInt::from(p / g), BigInt::from(q / g)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(10, 3), 120u32.into());
        assert_eq!(binomial(3, 5), BigUint::zero());
        assert_eq!(binomial_row(4), [1u32, 4, 6, 4, 1].map(BigUint::from).to_vec());
    }

    #[test]
    fn quadint_unit() {
        let x = QuadInt::x0();
        assert_eq!(&x * &x.conj(), QuadInt::one());
        assert_eq!(x.norm(), BigInt::one());
        assert_eq!(x.pow(2), QuadInt::new(7, 4));
        assert_eq!(&x.pow(2) - &x, QuadInt::new(5, 3));
    }

    #[test]
    fn small_sums() {
        let two = rational(2, 1).unwrap();
        assert_eq!(sum_squares(2, &two).unwrap(), rational(33, 1).unwrap());
        assert_eq!(sum_squares(1, &rational(1, 1).unwrap()).unwrap(), rational(2, 1).unwrap());
        // 1 + (1/2)^2 = 5/4
        assert_eq!(sum_squares(1, &rational(1, 2).unwrap()).unwrap(), rational(5, 4).unwrap());
        let r = ratio_to_asymptote(2, &two).unwrap();
        let direct = 33.0 / (243.0 / (2.0 * (4.0 * std::f64::consts::PI).sqrt()));
        assert!((r - direct).abs() < 1e-12);
        assert!((r - 0.963).abs() < 1e-3);
        assert!(sum_squares(2, &rational(-1, 3).unwrap()).is_err());
    }

    #[test]
    fn unlink_lengths() {
        let t: Vec<u32> = (0..5).map(|l| unlink_t(l).to_u32().unwrap()).collect();
        assert_eq!(t, [1, 4, 18, 88, 454]);
        // (2+√3)·4 = 1 + (2+√3)²
        assert_eq!(QuadInt::x0().scale(&BigInt::from(4)), &QuadInt::one() + &QuadInt::x0().pow(2));
    }

    #[test]
    fn legendre_small() {
        for l in 0..30 {
            let rep = legendre_check(l);
            assert!(rep.pass, "{rep:?}");
        }
    }

    #[test]
    fn best_param_rows() {
        let row = best_param_row(100);
        assert_eq!(row.r, 76);
        assert_eq!(row.verdict, Some(true));
        assert!(best_param_row(1).verdict.is_none());
    }

    #[test]
    fn approach() {
        assert!(strictly_approaches_one(&[0.9, 0.99, 1.001]));
        assert!(!strictly_approaches_one(&[0.9, 1.2]));
    }
}
