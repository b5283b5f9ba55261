//! Exact rational scalars, vectors and dense matrices.
//!
//! Every feasibility decision in the crate goes through these types, so
//! nothing here rounds. Doubles enter only through [`rational_from_f64`],
//! which decomposes the IEEE value into mantissa and exponent.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{dimension, Error, Result};

pub type Rational = BigRational;

/// Convenience constructor for small integer ratios. Panics on `den == 0`.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Exact conversion of a finite double; `None` for NaN and infinities.
pub fn rational_from_f64(x: f64) -> Option<Rational> {
    Rational::from_float(x)
}

pub fn rational_to_f64(x: &Rational) -> f64 {
    num_traits::ToPrimitive::to_f64(x).unwrap_or(f64::NAN)
}

/// `max(|numerator|, denominator)` measured in bits; used to pick pivots.
fn height_bits(x: &Rational) -> u64 {
    x.numer().bits().max(x.denom().bits())
}

/// Parses `p/q`, integer, or decimal literals (with an optional exponent)
/// into an exact rational. Decimals are read as exact decimal fractions.
pub fn parse_rational(text: &str) -> std::result::Result<Rational, String> {
    let s = text.trim();
    if s.is_empty() {
        return Err("empty entry".into());
    }
    if let Some((p, q)) = s.split_once('/') {
        let num: BigInt = p.trim().parse().map_err(|_| format!("bad numerator in `{s}`"))?;
        let den: BigInt = q.trim().parse().map_err(|_| format!("bad denominator in `{s}`"))?;
        if den.is_zero() {
            return Err(format!("zero denominator in `{s}`"));
        }
        return Ok(Rational::new(num, den));
    }
    parse_decimal(s).ok_or_else(|| format!("not a number: `{s}`"))
}

fn parse_decimal(s: &str) -> Option<Rational> {
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.as_bytes().first()? {
        b'-' => (true, &mantissa[1..]),
        b'+' => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let all_digits = format!("{int_part}{frac_part}");
    let mut num: BigInt = if all_digits.is_empty() { BigInt::zero() } else { all_digits.parse().ok()? };
    if negative {
        num = -num;
    }
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10u32);
    let value = if scale >= 0 {
        Rational::from_integer(num * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(num, num_traits::pow(ten, (-scale) as usize))
    };
    Some(value)
}

/// Formats as `p/q`, or `p` when the denominator is one.
pub fn format_rational(x: &Rational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn format_vector(v: &[Rational]) -> String {
    let parts: Vec<String> = v.iter().map(format_rational).collect();
    format!("[{}]", parts.join(", "))
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn add(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn scale(v: &[Rational], s: &Rational) -> Vec<Rational> {
    v.iter().map(|x| x * s).collect()
}

pub fn is_zero_vector(v: &[Rational]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// Dense row-major rational matrix with fixed dimensions.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RatMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Rational>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(dimension(format!(
                "{} entries supplied for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if let Some((i, row)) = rows.iter().enumerate().find(|(_, row)| row.len() != c) {
            return Err(dimension(format!("row {i} has {} entries, expected {c}", row.len())));
        }
        Ok(Self { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[Vec<Rational>]) -> Result<Self> {
        let cols = columns.len();
        let rows = columns.first().map_or(0, Vec::len);
        if columns.iter().any(|c| c.len() != rows) {
            return Err(dimension("columns of unequal length"));
        }
        let mut m = Self::zeros(rows, cols);
        for (j, col) in columns.iter().enumerate() {
            for (i, x) in col.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        Ok(m)
    }

    /// Small-integer constructor used heavily by tests. Panics on ragged input.
    pub fn from_i64<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let rows: Vec<Vec<Rational>> =
            rows.iter().map(|r| r.as_ref().iter().map(|&v| int(v)).collect()).collect();
        Self::from_rows(rows).expect("ragged integer matrix")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Rational>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    /// `A·x`.
    pub fn mul_vec(&self, x: &[Rational]) -> Result<Vec<Rational>> {
        if x.len() != self.cols {
            return Err(dimension(format!("vector of length {} against {} columns", x.len(), self.cols)));
        }
        Ok((0..self.rows).map(|i| dot(self.row(i), x)).collect())
    }

    /// `yᵀ·A`.
    pub fn vec_mul(&self, y: &[Rational]) -> Result<Vec<Rational>> {
        if y.len() != self.rows {
            return Err(dimension(format!("vector of length {} against {} rows", y.len(), self.rows)));
        }
        let mut out = vec![Rational::zero(); self.cols];
        for (i, yi) in y.iter().enumerate() {
            if yi.is_zero() {
                continue;
            }
            for (o, a) in out.iter_mut().zip(self.row(i)) {
                *o += yi * a;
            }
        }
        Ok(out)
    }

    /// Multiplies each row `i` by `factors[i]`.
    pub fn scale_rows(&self, factors: &[Rational]) -> Result<Self> {
        if factors.len() != self.rows {
            return Err(dimension("row factor count differs from row count"));
        }
        let mut out = self.clone();
        for (i, f) in factors.iter().enumerate() {
            for j in 0..self.cols {
                out[(i, j)] *= f;
            }
        }
        Ok(out)
    }

    /// Keeps only the listed rows, in order.
    pub fn select_rows(&self, keep: &[usize]) -> Self {
        let data = keep.iter().flat_map(|&i| self.row(i).iter().cloned()).collect();
        Self { rows: keep.len(), cols: self.cols, data }
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn rank(&self) -> usize {
        rref(self).rank
    }
}

impl Index<(usize, usize)> for RatMatrix {
    type Output = Rational;

    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for RatMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RatMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {}", format_vector(self.row(i)))?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let line: Vec<String> = self.row(i).iter().map(format_rational).collect();
            writeln!(f, "{}", line.join(","))?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub matrix: RatMatrix,
    pub pivots: Vec<usize>,
    pub rank: usize,
}

fn pick_pivot(m: &RatMatrix, col: usize, from_row: usize) -> Option<usize> {
    (from_row..m.rows)
        .filter(|&i| !m[(i, col)].is_zero())
        .min_by_key(|&i| height_bits(&m[(i, col)]))
}

fn swap_rows(m: &mut RatMatrix, a: usize, b: usize) {
    if a == b {
        return;
    }
    for j in 0..m.cols {
        m.data.swap(a * m.cols + j, b * m.cols + j);
    }
}

/// Reduced row echelon form.
pub fn rref(input: &RatMatrix) -> Rref {
    let mut m = input.clone();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..m.cols {
        if row == m.rows {
            break;
        }
        let Some(p) = pick_pivot(&m, col, row) else { continue };
        swap_rows(&mut m, row, p);
        let inv = m[(row, col)].recip();
        for j in col..m.cols {
            m[(row, j)] *= &inv;
        }
        for i in 0..m.rows {
            if i == row || m[(i, col)].is_zero() {
                continue;
            }
            let factor = m[(i, col)].clone();
            for j in col..m.cols {
                let delta = &factor * &m[(row, j)];
                m[(i, j)] -= delta;
            }
        }
        pivots.push(col);
        row += 1;
    }
    let rank = pivots.len();
    Rref { matrix: m, pivots, rank }
}

/// Exact determinant by Gaussian elimination.
pub fn determinant(input: &RatMatrix) -> Result<Rational> {
    if !input.is_square() {
        return Err(dimension(format!(
            "determinant of a non-square {}x{} matrix",
            input.rows, input.cols
        )));
    }
    let n = input.rows;
    let mut m = input.clone();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(p) = pick_pivot(&m, col, col) else { return Ok(Rational::zero()) };
        if p != col {
            swap_rows(&mut m, col, p);
            det = -det;
        }
        let pivot = m[(col, col)].clone();
        for i in col + 1..n {
            if m[(i, col)].is_zero() {
                continue;
            }
            let factor = &m[(i, col)] / &pivot;
            for j in col..n {
                let delta = &factor * &m[(col, j)];
                m[(i, j)] -= delta;
            }
        }
        det *= pivot;
    }
    Ok(det)
}

/// Solves a square nonsingular system exactly; `None` if singular.
pub fn solve(a: &RatMatrix, b: &[Rational]) -> Result<Option<Vec<Rational>>> {
    if !a.is_square() || b.len() != a.rows {
        return Err(dimension("solve needs a square matrix and matching right-hand side"));
    }
    let n = a.rows;
    let mut aug = RatMatrix::zeros(n, n + 1);
    for i in 0..n {
        for j in 0..n {
            aug[(i, j)] = a[(i, j)].clone();
        }
        aug[(i, n)] = b[i].clone();
    }
    let r = rref(&aug);
    if r.rank < n || r.pivots[..n] != (0..n).collect::<Vec<_>>()[..] {
        return Ok(None);
    }
    Ok(Some((0..n).map(|i| r.matrix[(i, n)].clone()).collect()))
}

/// Basis (as rows of the RREF) of the span of `vectors`.
pub fn span_basis(vectors: &[Vec<Rational>], dim: usize) -> Result<Vec<Vec<Rational>>> {
    if vectors.iter().any(|v| v.len() != dim) {
        return Err(dimension(format!("spanning vectors must have length {dim}")));
    }
    if vectors.is_empty() {
        return Ok(Vec::new());
    }
    let r = rref(&RatMatrix::from_rows(vectors.to_vec())?);
    Ok((0..r.rank).map(|i| r.matrix.row(i).to_vec()).collect())
}

/// Orthogonal projection of `x` onto the orthogonal complement of
/// `span(vectors)`, by solving the normal equations on a basis.
pub fn project_onto_complement(vectors: &[Vec<Rational>], x: &[Rational]) -> Result<Vec<Rational>> {
    let basis = span_basis(vectors, x.len())?;
    if basis.is_empty() {
        return Ok(x.to_vec());
    }
    let k = basis.len();
    let mut gram = RatMatrix::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            gram[(i, j)] = dot(&basis[i], &basis[j]);
        }
    }
    let rhs: Vec<Rational> = basis.iter().map(|b| dot(b, x)).collect();
    let coeffs = solve(&gram, &rhs)?.expect("Gram matrix of a basis is nonsingular");
    let mut along = vec![Rational::zero(); x.len()];
    for (c, b) in coeffs.iter().zip(&basis) {
        for (a, bi) in along.iter_mut().zip(b) {
            *a += c * bi;
        }
    }
    let result = sub(x, &along);
    debug_assert!(vectors.iter().all(|v| dot(v, &result).is_zero()));
    Ok(result)
}

/// True when `x` lies in `span(vectors)`.
pub fn in_span(vectors: &[Vec<Rational>], x: &[Rational]) -> Result<bool> {
    if is_zero_vector(x) {
        return Ok(true);
    }
    if vectors.is_empty() {
        return Ok(false);
    }
    let before = span_basis(vectors, x.len())?.len();
    let mut with_x = vectors.to_vec();
    with_x.push(x.to_vec());
    Ok(span_basis(&with_x, x.len())?.len() == before)
}

/// Parses the CSV matrix text format: one scenario per row, entries as
/// decimal or `p/q` literals, `#` comment lines and blank lines skipped.
pub fn parse_matrix(text: &str) -> Result<RatMatrix> {
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let row = line
            .split(',')
            .map(parse_rational)
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|message| Error::Parse { line: idx + 1, message })?;
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(Error::Parse {
                    line: idx + 1,
                    message: format!("expected {} entries, found {}", first.len(), row.len()),
                });
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::Parse { line: 0, message: "no matrix rows".into() });
    }
    RatMatrix::from_rows(rows)
}

/// Parses a vector written either as a single CSV row or a single column.
pub fn parse_vector(text: &str) -> Result<Vec<Rational>> {
    let m = parse_matrix(text)?;
    match (m.rows, m.cols) {
        (1, _) => Ok(m.row(0).to_vec()),
        (_, 1) => Ok(m.column(0)),
        (r, c) => Err(dimension(format!("expected a vector, found a {r}x{c} matrix"))),
    }
}

pub(crate) fn is_nonnegative(v: &[Rational]) -> bool {
    v.iter().all(|x| !x.is_negative())
}
